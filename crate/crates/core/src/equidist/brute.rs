use crate::error::{Error, Result};
use crate::mtgp::{Generator, RecursionParams, TemperingParams};

/// `k(v)` by counting every `k`-tuple of `v`-MSB outputs over the full period
/// `P = 2^p - 1`: each nonzero `kv`-bit pattern must occur `2^(p - kv)` times
/// and the zero pattern once less.
pub fn brute_force_kv(rp: &RecursionParams, tp: &TemperingParams, v: usize) -> Result<usize> {
    let p = rp.mexp();
    if p > 21 {
        return Err(Error::BruteForceTooLarge(p));
    }
    let w = rp.word_bits() as usize;
    assert!(v >= 1 && v <= w);
    let period = (1usize << p) - 1;
    let mut g = Generator::new(rp.clone(), tp.clone(), 1)?;
    let seq: Vec<u32> = (0..period).map(|_| g.next_u32() >> (w - v)).collect();

    let p = p as usize;
    let mut counts: Vec<u32> = Vec::new();
    let mut best = 0;
    for k in 1..=p / v {
        let bits = k * v;
        let mask = (1usize << bits) - 1;
        counts.clear();
        counts.resize(1 << bits, 0);
        let mut pat = 0usize;
        // Prime the window with the first k - 1 outputs, then wrap cyclically.
        for &o in &seq[..k - 1] {
            pat = ((pat << v) | o as usize) & mask;
        }
        for i in 0..period {
            let o = seq[(i + k - 1) % period] as usize;
            pat = ((pat << v) | o) & mask;
            counts[pat] += 1;
        }
        let each = 1u32 << (p - bits);
        let uniform = counts[0] + 1 == each && counts[1..].iter().all(|&c| c == each);
        if !uniform {
            break;
        }
        best = k;
    }
    Ok(best)
}
