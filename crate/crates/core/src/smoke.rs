//! Small statistical smoke battery: byte-frequency chi-square and monobit balance.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

/// Acceptance interval for p-values.
pub const P_LOW: f64 = 1e-6;
pub const P_HIGH: f64 = 1.0 - 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SmokeResult {
    pub name: &'static str,
    pub statistic: f64,
    pub p_value: f64,
}

impl SmokeResult {
    pub fn passed(&self) -> bool {
        (P_LOW..=P_HIGH).contains(&self.p_value)
    }
}

/// Chi-square over the 256 values of the top 8 bits of `w`-bit words.
pub fn chi_square_bytes(words: &[u32], word_bits: u32) -> SmokeResult {
    let shift = word_bits.saturating_sub(8);
    let cells = 1usize << word_bits.min(8);
    let mut counts = vec![0u64; cells];
    for &x in words {
        counts[(x >> shift) as usize & (cells - 1)] += 1;
    }
    let expected = words.len() as f64 / cells as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((cells - 1) as f64).expect("positive degrees of freedom");
    SmokeResult { name: "chi_square_top8", statistic: stat, p_value: dist.sf(stat) }
}

/// Two-sided monobit test over all `w` bits of every word.
pub fn monobit(words: &[u32], word_bits: u32) -> SmokeResult {
    let n = words.len() as f64 * f64::from(word_bits);
    let ones: u64 = words.iter().map(|x| u64::from(x.count_ones())).sum();
    let s = 2.0 * ones as f64 - n;
    let stat = s.abs() / n.sqrt();
    SmokeResult { name: "monobit", statistic: stat, p_value: erfc(stat / std::f64::consts::SQRT_2) }
}

/// Is the period `2^p - 1` longer than `samples`? Shorter periods repeat
/// within the sample and make the frequency tests meaningless.
pub fn period_covers(mexp: u32, samples: usize) -> bool {
    mexp >= usize::BITS - 1 || (1usize << mexp) - 1 > samples
}

pub fn battery(words: &[u32], word_bits: u32) -> Vec<SmokeResult> {
    vec![chi_square_bytes(words, word_bits), monobit(words, word_bits)]
}
