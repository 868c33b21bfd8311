use crate::error::{Error, Result};
use crate::f2::F2Matrix;

/// Mersenne exponents up to the largest period this crate supports.
pub const MERSENNE_EXPONENTS: &[u32] = &[
    2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127, 521, 607, 1279, 2203, 2281, 3217, 4253, 4423,
    9689, 9941, 11213, 19937, 21701, 23209, 44497,
];

pub const WORD_SIZES: &[u32] = &[4, 8, 16, 32];

/// Bit pattern placed in the top 9 bits of a single-precision word to land in [1, 2).
pub const FLOAT_ONE_BITS: u32 = 0x3f80_0000;

/// `(N, r)` with `N = ceil(p / w)` words and `r = wN - p` discarded bits.
pub fn derive_sizes(mexp: u32, word_bits: u32) -> Result<(usize, u32)> {
    if !WORD_SIZES.contains(&word_bits) {
        return Err(Error::Unsupported(format!("word size {word_bits} (expected 4, 8, 16 or 32)")));
    }
    if !MERSENNE_EXPONENTS.contains(&mexp) {
        return Err(Error::Unsupported(format!("{mexp} is not a supported Mersenne exponent")));
    }
    if mexp <= 2 * word_bits {
        return Err(Error::DegenerateLayout { mexp, word_bits });
    }
    let n = mexp.div_ceil(word_bits);
    Ok((n as usize, word_bits * n - mexp))
}

/// `w`-bit word with the `w - r` most significant bits set.
pub fn bitmask(word_bits: u32, r: u32) -> u32 {
    debug_assert!(r <= word_bits);
    word_mask(word_bits) & !low_bits(r)
}

pub(crate) fn word_mask(word_bits: u32) -> u32 {
    low_bits(word_bits)
}

fn low_bits(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// The 16 products `(nibble) * M` for a 4-row matrix given as row words.
/// Bit 3 of the nibble selects row 0 and bit 0 selects row 3.
pub fn build_table(rows: &[u32; 4]) -> [u32; 16] {
    let mut tbl = [0u32; 16];
    for (i, t) in tbl.iter_mut().enumerate() {
        for (k, &row) in rows.iter().enumerate() {
            if (i >> (3 - k)) & 1 == 1 {
                *t ^= row;
            }
        }
    }
    tbl
}

/// Is `u -> u ^ (u_low4 * R)` invertible on the low nibble? Equivalently, the
/// 4x4 block `S` of the four least significant columns of `R` has no eigenvalue 1.
pub fn nibble_map_invertible(rows: &[u32; 4]) -> bool {
    let tbl = build_table(rows);
    let mut seen = 0u16;
    for (i, &t) in tbl.iter().enumerate() {
        let image = (i as u32 ^ t) & 0xf;
        seen |= 1 << image;
    }
    seen == 0xffff
}

/// Parameters `(N, M, w, r, sh1, sh2, R)` of the recursion
/// `x_(N+i) = g(x_(M+i), x_(1+i), x_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionParams {
    mexp: u32,
    word_bits: u32,
    n: usize,
    m: usize,
    r: u32,
    sh1: u32,
    sh2: u32,
    rmat: [u32; 4],
    rectbl: [u32; 16],
}

impl RecursionParams {
    pub fn new(mexp: u32, word_bits: u32, m: usize, sh1: u32, sh2: u32, rmat: [u32; 4]) -> Result<Self> {
        let (n, r) = derive_sizes(mexp, word_bits)?;
        if !(1 < m && m < n) {
            return Err(Error::InvalidParams(format!("middle position M = {m} outside 1 < M < {n}")));
        }
        if !(0 < sh1 && sh1 < word_bits) || sh2 >= word_bits {
            return Err(Error::InvalidParams(format!("shifts sh1 = {sh1}, sh2 = {sh2} out of range for w = {word_bits}")));
        }
        if rmat.iter().any(|&row| row & !word_mask(word_bits) != 0) {
            return Err(Error::InvalidParams(format!("R has bits above w = {word_bits}")));
        }
        if !nibble_map_invertible(&rmat) {
            return Err(Error::InvalidParams("low 4x4 block of R has eigenvalue 1".into()));
        }
        Ok(Self { mexp, word_bits, n, m, r, sh1, sh2, rmat, rectbl: build_table(&rmat) })
    }

    pub fn mexp(&self) -> u32 {
        self.mexp
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    /// State length `N` in words.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Middle position `M`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn sh1(&self) -> u32 {
        self.sh1
    }

    pub fn sh2(&self) -> u32 {
        self.sh2
    }

    pub fn rmat(&self) -> &[u32; 4] {
        &self.rmat
    }

    pub fn rectbl(&self) -> &[u32; 16] {
        &self.rectbl
    }

    pub fn rmat_matrix(&self) -> F2Matrix {
        F2Matrix::from_words_msb_first(&self.rmat, self.word_bits)
    }

    pub fn mask(&self) -> u32 {
        bitmask(self.word_bits, self.r)
    }
}

/// The tempering matrix `T` (4 x w) and its lookup tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemperingParams {
    word_bits: u32,
    tmat: [u32; 4],
    tmptbl: [u32; 16],
    sngltbl: Option<[u32; 16]>,
}

impl TemperingParams {
    pub fn new(word_bits: u32, tmat: [u32; 4]) -> Result<Self> {
        if !WORD_SIZES.contains(&word_bits) {
            return Err(Error::Unsupported(format!("word size {word_bits}")));
        }
        if tmat.iter().any(|&row| row & !word_mask(word_bits) != 0) {
            return Err(Error::InvalidParams(format!("T has bits above w = {word_bits}")));
        }
        let tmptbl = build_table(&tmat);
        let sngltbl = (word_bits == 32).then(|| tmptbl.map(|t| FLOAT_ONE_BITS | (t >> 9)));
        Ok(Self { word_bits, tmat, tmptbl, sngltbl })
    }

    /// `T = 0`: outputs are the raw recursion words.
    pub fn identity(word_bits: u32) -> Self {
        Self::new(word_bits, [0; 4]).expect("zero tempering is always valid")
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn tmat(&self) -> &[u32; 4] {
        &self.tmat
    }

    pub fn tmptbl(&self) -> &[u32; 16] {
        &self.tmptbl
    }

    /// Float-formatted table: `001111111` followed by the 23 MSBs of `tmptbl[i]`.
    pub fn sngltbl(&self) -> Result<&[u32; 16]> {
        self.sngltbl.as_ref().ok_or(Error::FloatNeedsWord32)
    }

    pub fn tmat_matrix(&self) -> F2Matrix {
        F2Matrix::from_words_msb_first(&self.tmat, self.word_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(derive_sizes(11213, 32).unwrap(), (351, 19));
        assert_eq!(derive_sizes(23209, 32).unwrap(), (726, 23));
        assert_eq!(derive_sizes(13, 4).unwrap(), (4, 3));
        assert_eq!(derive_sizes(13, 8), Err(Error::DegenerateLayout { mexp: 13, word_bits: 8 }));
        assert!(matches!(derive_sizes(14, 4), Err(Error::Unsupported(_))));
        assert!(matches!(derive_sizes(13, 12), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bitmasks() {
        // 13 MSBs set, 19 LSBs clear.
        assert_eq!(bitmask(32, 19), 0xfff8_0000);
        assert_eq!(bitmask(32, 0), 0xffff_ffff);
        assert_eq!(bitmask(4, 3), 0b1000);
    }

    #[test]
    fn table_examples() {
        assert_eq!(build_table(&[0; 4]), [0; 16]);

        let unit = [0b1000, 0b0100, 0b0010, 0b0001];
        let tbl = build_table(&unit);
        for (i, &t) in tbl.iter().enumerate() {
            assert_eq!(t, i as u32);
        }

        let rows = [0x3a, 0xc5, 0x17, 0xe8];
        assert_eq!(build_table(&rows)[0b0110], rows[1] ^ rows[2]);
    }

    #[test]
    fn table_is_linear() {
        let tbl = build_table(&[0xdead_beef, 0x0123_4567, 0x89ab_cdef, 0x7777_0001]);
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(tbl[i ^ j], tbl[i] ^ tbl[j]);
            }
        }
    }

    #[test]
    fn float_table_layout() {
        let tp = TemperingParams::new(32, [0xffff_ffff, 0x1234_5678, 0, 0x8000_0001]).unwrap();
        let s = tp.sngltbl().unwrap();
        for (i, &x) in s.iter().enumerate() {
            assert_eq!(x >> 23, 0b0_0111_1111);
            assert_eq!(x & 0x7f_ffff, tp.tmptbl()[i] >> 9);
        }
        assert_eq!(TemperingParams::identity(8).sngltbl(), Err(Error::FloatNeedsWord32));
    }

    #[test]
    fn params_validation() {
        assert!(RecursionParams::new(13, 4, 2, 2, 1, [0; 4]).is_ok());
        assert!(RecursionParams::new(13, 4, 1, 2, 1, [0; 4]).is_err());
        assert!(RecursionParams::new(13, 4, 4, 2, 1, [0; 4]).is_err());
        assert!(RecursionParams::new(13, 4, 2, 4, 1, [0; 4]).is_err());
        assert!(RecursionParams::new(13, 4, 2, 2, 1, [0x10, 0, 0, 0]).is_err());
        // S = I has eigenvalue 1.
        assert!(RecursionParams::new(13, 4, 2, 2, 1, [0b1000, 0b0100, 0b0010, 0b0001]).is_err());
    }
}
