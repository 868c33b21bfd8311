use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::f2::{has_small_factor, is_irreducible, F2Poly};
use crate::mtgp::{char_poly, default_lanes, derive_sizes, nibble_map_invertible, RecursionParams};

/// Reproducible candidate source: ChaCha8 keyed by the 64-bit search seed,
/// with the ID selecting the stream.
#[derive(Clone, Debug)]
pub struct SearchRng(ChaCha8Rng);

impl SearchRng {
    pub fn new(seed: u64, id: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(id));
        Self(rng)
    }

    pub fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.0.random_range(lo..=hi)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Candidates tried before giving up.
    pub max_candidates: u64,
    /// Degree bound of the small-factor pre-filter run before the full test.
    pub sieve_degree: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { max_candidates: 1_000_000, sieve_degree: 64 }
    }
}

/// ID bits in `R`: the high half in the top 16 bits of row 0, the low half in
/// row 1 at MSB-positions 12..=27 (bits 19..=4 counting from the LSB).
const ROW1_SHIFT: u32 = 4;

/// Does the low 4x4 block `S` of `R` satisfy `S + I` invertible?
pub fn check_r_condition(rows: &[u32; 4]) -> bool {
    nibble_map_invertible(rows)
}

fn random_nibbles(rows: &mut [u32; 4], rng: &mut SearchRng) {
    loop {
        let bits = rng.next_u32();
        for (k, row) in rows.iter_mut().enumerate() {
            *row = (*row & !0xf) | ((bits >> (4 * k)) & 0xf);
        }
        if check_r_condition(rows) {
            return;
        }
    }
}

/// A 4x32 candidate `R` carrying `id`; everything else is random.
pub fn embed_id(id: u32, rng: &mut SearchRng) -> [u32; 4] {
    let mut rows = [0u32; 4];
    rows[0] = (id & 0xffff_0000) | (rng.next_u32() & 0x0000_fff0);
    rows[1] = (rng.next_u32() & 0xfff0_0000) | ((id & 0xffff) << ROW1_SHIFT);
    rows[2] = rng.next_u32() & !0xf;
    rows[3] = rng.next_u32() & !0xf;
    random_nibbles(&mut rows, rng);
    rows
}

/// The ID stored by [`embed_id`].
pub fn embedded_id(rows: &[u32; 4]) -> u32 {
    (rows[0] & 0xffff_0000) | ((rows[1] >> ROW1_SHIFT) & 0xffff)
}

fn random_r(word_bits: u32, rng: &mut SearchRng) -> [u32; 4] {
    let mask = if word_bits == 32 { u32::MAX } else { (1 << word_bits) - 1 };
    let mut rows = [0u32; 4];
    for r in &mut rows {
        *r = rng.next_u32() & mask & !0xf;
    }
    random_nibbles(&mut rows, rng);
    rows
}

/// `(sh1, sh2)`: 13 and 4 at `w = 32`, scaled proportionally below.
pub fn shifts_for(word_bits: u32) -> (u32, u32) {
    if word_bits == 32 {
        (13, 4)
    } else {
        let scale = |s: u32| ((s * word_bits + 16) / 32).max(1);
        (scale(13), scale(4))
    }
}

/// Inclusive range for the middle position `M`.
///
/// `2 < M < N - n` with `n` the default lane count, so that `n <= N - M`;
/// when that is empty (desk-scale `N`) the range relaxes to `2 <= M <= N - n`.
pub fn middle_range(n: usize) -> Result<(usize, usize)> {
    let lanes = default_lanes(n);
    let upper = n.saturating_sub(lanes);
    if upper >= 4 {
        Ok((3, upper - 1))
    } else if upper >= 2 && upper < n {
        Ok((2, upper))
    } else {
        Err(Error::InvalidParams(format!("no middle position fits N = {n}")))
    }
}

#[derive(Clone, Debug)]
pub struct RecursionSearch {
    pub params: RecursionParams,
    pub charpoly: F2Poly,
    /// Candidates generated, including the accepted one.
    pub candidates: u64,
}

/// Draw candidates until the characteristic polynomial has degree `p` and is irreducible.
pub fn search_recursion_params(
    mexp: u32,
    word_bits: u32,
    id: u32,
    rng: &mut SearchRng,
    opts: &SearchOptions,
) -> Result<RecursionSearch> {
    let (n, _) = derive_sizes(mexp, word_bits)?;
    let (lo, hi) = middle_range(n)?;
    let (sh1, sh2) = shifts_for(word_bits);
    let p = mexp as usize;
    for candidates in 1..=opts.max_candidates {
        let m = rng.range(lo, hi);
        let rmat = if word_bits == 32 { embed_id(id, rng) } else { random_r(word_bits, rng) };
        let params = RecursionParams::new(mexp, word_bits, m, sh1, sh2, rmat)?;
        let f = char_poly(&params);
        if f.degree() != Some(p) {
            continue;
        }
        if has_small_factor(&f, opts.sieve_degree)? || !is_irreducible(&f)? {
            continue;
        }
        return Ok(RecursionSearch { params, charpoly: f, candidates });
    }
    Err(Error::SearchExhausted(opts.max_candidates))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_placement() {
        let mut rng = SearchRng::new(1, 0);
        let r = embed_id(0xffff_0000, &mut rng);
        assert_eq!(r[0] >> 16, 0xffff);
        assert_eq!((r[1] >> 4) & 0xffff, 0);

        let r = embed_id(0x0000_0001, &mut rng);
        assert_eq!(r[0] >> 16, 0);
        assert_eq!((r[1] >> 4) & 0xffff, 1);
        assert_eq!(embedded_id(&r), 1);
        assert!(check_r_condition(&r));
    }

    #[test]
    fn embedding_is_deterministic() {
        let a = embed_id(0xdead_beef, &mut SearchRng::new(42, 7));
        let b = embed_id(0xdead_beef, &mut SearchRng::new(42, 7));
        assert_eq!(a, b);
        assert_eq!(embedded_id(&a), 0xdead_beef);
    }

    #[test]
    fn r_condition_examples() {
        assert!(check_r_condition(&[0; 4]));
        assert!(!check_r_condition(&[0b1000, 0b0100, 0b0010, 0b0001]));
        // Companion matrix of x^4 + x + 1 (rows 0100, 0010, 0001, 1100):
        // S + I reduces to an upper-triangular matrix with unit diagonal.
        assert!(check_r_condition(&[0b0100, 0b0010, 0b0001, 0b1100]));
    }

    #[test]
    fn shift_scaling() {
        assert_eq!(shifts_for(32), (13, 4));
        assert_eq!(shifts_for(16), (7, 2));
        assert_eq!(shifts_for(8), (3, 1));
        assert_eq!(shifts_for(4), (2, 1));
    }

    #[test]
    fn middle_ranges() {
        // N = 351, 256 lanes: 2 < M < 95.
        assert_eq!(middle_range(351).unwrap(), (3, 94));
        // N = 4 (p = 13, w = 4): 2 lanes, M = 2.
        assert_eq!(middle_range(4).unwrap(), (2, 2));
        // N = 3 (p = 17 or 19, w = 8): 1 lane, M = 2.
        assert_eq!(middle_range(3).unwrap(), (2, 2));
    }

    #[test]
    fn small_search_terminates() {
        let mut rng = SearchRng::new(1, 0);
        let s = search_recursion_params(13, 4, 0, &mut rng, &SearchOptions::default()).unwrap();
        assert_eq!(s.charpoly.degree(), Some(13));
        assert!(is_irreducible(&s.charpoly).unwrap());
    }
}
