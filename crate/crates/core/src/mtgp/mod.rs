//! The MTGP generator: recursion and tempering parameters, lookup tables,
//! the sequential ring-buffer generator and its three output modes.

mod generator;
mod params;

pub use generator::{recursion_step, temper, temper_float, tempering_nibble, Generator, GeneratorState, OutputMode};
pub use params::{
    bitmask, build_table, derive_sizes, nibble_map_invertible, RecursionParams, TemperingParams,
    FLOAT_ONE_BITS, MERSENNE_EXPONENTS, WORD_SIZES,
};

use crate::f2::{minimal_polynomial, BitSeq, F2Poly};

/// Seed of the fixed state used to probe the characteristic polynomial.
pub const PROBE_SEED: u32 = 1;

/// Minimal polynomial of the LSB sequence of freshly computed words, started
/// from a fixed nonzero state. It divides the characteristic polynomial of the
/// recursion and equals it whenever its degree is `p`.
pub fn char_poly(rp: &RecursionParams) -> F2Poly {
    let p = rp.mexp() as usize;
    let mut g = Generator::new(rp.clone(), TemperingParams::identity(rp.word_bits()), PROBE_SEED)
        .expect("matching word sizes");
    let mut bits = BitSeq::with_capacity(2 * p);
    for _ in 0..2 * p {
        bits.push(g.next_raw() & 1 == 1);
    }
    minimal_polynomial(&bits)
}

/// `floor(log2(n))`-th power of two, i.e. the largest power of 2 `<= n` (`n >= 1`).
pub fn floor_pow2(n: usize) -> usize {
    assert!(n >= 1);
    1 << (usize::BITS - 1 - n.leading_zeros())
}

/// Thread count used per block: the largest power of 2 no more than `N - 2`.
pub fn default_lanes(n: usize) -> usize {
    floor_pow2(n.saturating_sub(2).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lanes_for_released_exponents() {
        assert_eq!(default_lanes(derive_sizes(11213, 32).unwrap().0), 256);
        assert_eq!(default_lanes(derive_sizes(23209, 32).unwrap().0), 512);
        assert_eq!(default_lanes(derive_sizes(44497, 32).unwrap().0), 1024);
        assert_eq!(default_lanes(4), 2);
        assert_eq!(floor_pow2(1), 1);
        assert_eq!(floor_pow2(255), 128);
    }
}
