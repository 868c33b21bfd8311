use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use super::words;
use crate::error::{Error, Result};

/// Polynomial over GF(2). Bit `d` of the packed words is the coefficient of `x^d`.
///
/// The representation is canonical: there are never trailing zero words, so the
/// zero polynomial has no words at all and derived equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Poly {
    words: Vec<u64>,
}

impl F2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(d: usize) -> Self {
        let mut words = vec![0u64; d / 64 + 1];
        words[d / 64] = 1 << (d % 64);
        Self { words }
    }

    /// Sum of `x^e` over the given exponents (repeated exponents cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        words::trim(&mut words);
        Self { words }
    }

    /// Coefficients from index 0 upward.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        for (i, b) in bits.into_iter().enumerate() {
            if i % 64 == 0 {
                words.push(0);
            }
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(words)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        words::degree(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn coeff(&self, d: usize) -> bool {
        self.words.get(d / 64).is_some_and(|w| (w >> (d % 64)) & 1 == 1)
    }

    pub fn flip(&mut self, d: usize) {
        if self.words.len() <= d / 64 {
            self.words.resize(d / 64 + 1, 0);
        }
        self.words[d / 64] ^= 1 << (d % 64);
        words::trim(&mut self.words);
    }

    pub fn set_coeff(&mut self, d: usize, v: bool) {
        if self.coeff(d) != v {
            self.flip(d);
        }
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        (0..self.degree().map_or(0, |d| d + 1))
            .filter(|&d| self.coeff(d))
            .collect()
    }

    pub fn shl(&self, n: usize) -> Self {
        let mut words = Vec::new();
        words::xor_shifted(&mut words, &self.words, n);
        Self::from_words(words)
    }

    pub fn shr(&self, n: usize) -> Self {
        Self::from_words(words::shr(&self.words, n))
    }

    /// Low `n` coefficients, i.e. `self mod x^n`.
    pub fn truncated(&self, n: usize) -> Self {
        let mut words = self.words.clone();
        words::truncate_bits(&mut words, n);
        Self { words }
    }

    pub fn square(&self) -> Self {
        Self::from_words(words::square(&self.words))
    }

    /// Quotient and remainder of long division.
    pub fn div_rem(&self, f: &F2Poly) -> Result<(F2Poly, F2Poly)> {
        let df = f.degree().ok_or(Error::ZeroModulus)?;
        let mut r = self.words.clone();
        let mut q = Vec::new();
        while let Some(dr) = words::degree(&r) {
            if dr < df {
                break;
            }
            let s = dr - df;
            words::xor_shifted(&mut r, &f.words, s);
            if q.len() <= s / 64 {
                q.resize(s / 64 + 1, 0);
            }
            q[s / 64] |= 1 << (s % 64);
            words::trim(&mut r);
        }
        Ok((Self::from_words(q), Self::from_words(r)))
    }

    pub fn rem(&self, f: &F2Poly) -> Result<F2Poly> {
        let df = f.degree().ok_or(Error::ZeroModulus)?;
        let mut r = self.words.clone();
        while let Some(dr) = words::degree(&r) {
            if dr < df {
                break;
            }
            words::xor_shifted(&mut r, &f.words, dr - df);
            words::trim(&mut r);
        }
        Ok(Self::from_words(r))
    }

    pub fn gcd(&self, other: &F2Poly) -> F2Poly {
        let mut a = self.words.clone();
        let mut b = other.words.clone();
        loop {
            let Some(db) = words::degree(&b) else {
                return Self::from_words(a);
            };
            // a <- a mod b
            while let Some(da) = words::degree(&a) {
                if da < db {
                    break;
                }
                words::xor_shifted(&mut a, &b, da - db);
                words::trim(&mut a);
            }
            std::mem::swap(&mut a, &mut b);
        }
    }

    /// Multiplicative inverse modulo `f`, or `None` when `gcd(self, f) != 1`.
    pub fn inv_mod(&self, f: &F2Poly) -> Result<Option<F2Poly>> {
        let mut u = self.rem(f)?.words;
        let mut v = f.words.clone();
        let mut gu = vec![1u64];
        let mut gv: Vec<u64> = Vec::new();
        loop {
            if u.len() == 1 && u[0] == 1 {
                return Ok(Some(Self::from_words(gu).rem(f)?));
            }
            if v.len() == 1 && v[0] == 1 {
                return Ok(Some(Self::from_words(gv).rem(f)?));
            }
            let (Some(du), Some(dv)) = (words::degree(&u), words::degree(&v)) else {
                return Ok(None);
            };
            if du < dv {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut gu, &mut gv);
                continue;
            }
            words::xor_shifted(&mut u, &v, du - dv);
            words::xor_shifted(&mut gu, &gv, du - dv);
            words::trim(&mut u);
            words::trim(&mut gu);
        }
    }

    /// `a * b mod f`.
    pub fn mulmod(a: &F2Poly, b: &F2Poly, f: &F2Poly) -> Result<F2Poly> {
        if f.is_zero() {
            return Err(Error::ZeroModulus);
        }
        (a * b).rem(f)
    }

    /// Coefficient bytes, bit 0 of byte 0 = coefficient of `x^0`;
    /// length `ceil((degree + 1) / 8)`.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        let n = (d + 1).div_ceil(8);
        self.words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(n)
            .collect()
    }

    /// Lowercase hex, least significant digit = coefficients of `x^0..x^3`,
    /// zero-padded to `ceil((degree + 1) / 4)` digits. The zero polynomial is `"0"`.
    pub fn to_hex(&self) -> String {
        let Some(d) = self.degree() else {
            return "0".to_string();
        };
        let digits = (d + 1).div_ceil(4);
        (0..digits)
            .rev()
            .map(|k| {
                let nib = (self.words[k / 16] >> (4 * (k % 16))) & 0xf;
                char::from_digit(nib as u32, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(s: &str) -> Result<F2Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse { line: 0, msg: "empty polynomial hex".into() });
        }
        let mut words = vec![0u64; s.len().div_ceil(16)];
        for (k, c) in s.chars().rev().enumerate() {
            let nib = c.to_digit(16).ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("invalid hex digit {c:?}"),
            })? as u64;
            words[k / 16] |= nib << (4 * (k % 16));
        }
        Ok(Self::from_words(words))
    }
}

impl Add for &F2Poly {
    type Output = F2Poly;

    fn add(self, rhs: &F2Poly) -> F2Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&F2Poly> for F2Poly {
    fn add_assign(&mut self, rhs: &F2Poly) {
        words::xor_shifted(&mut self.words, &rhs.words, 0);
        words::trim(&mut self.words);
    }
}

impl Mul for &F2Poly {
    type Output = F2Poly;

    fn mul(self, rhs: &F2Poly) -> F2Poly {
        F2Poly::from_words(words::mul(&self.words, &rhs.words))
    }
}

impl fmt::Debug for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Poly({self})")
    }
}

impl fmt::Display for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Precomputed Barrett reduction modulo a fixed polynomial `f` of degree `n >= 1`.
///
/// For `deg a < 2n`, `floor(a / f) = floor(floor(a / x^n) * mu / x^n)` exactly,
/// where `mu = floor(x^(2n) / f)`.
#[derive(Clone, Debug)]
pub struct Modulus {
    f: F2Poly,
    n: usize,
    mu: F2Poly,
}

impl Modulus {
    pub fn new(f: &F2Poly) -> Result<Self> {
        let n = f.degree().ok_or(Error::ZeroModulus)?;
        if n == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let (mu, _) = F2Poly::monomial(2 * n).div_rem(f)?;
        Ok(Self { f: f.clone(), n, mu })
    }

    pub fn poly(&self) -> &F2Poly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Reduce `a`; falls back to long division when `deg a >= 2n`.
    pub fn reduce(&self, a: &F2Poly) -> F2Poly {
        match a.degree() {
            None => F2Poly::zero(),
            Some(d) if d < self.n => a.clone(),
            Some(d) if d >= 2 * self.n => a.rem(&self.f).expect("nonzero modulus"),
            Some(_) => {
                let q = (&a.shr(self.n) * &self.mu).shr(self.n);
                let mut r = a + &(&q * &self.f);
                r = r.truncated(self.n);
                r
            }
        }
    }

    pub fn mulmod(&self, a: &F2Poly, b: &F2Poly) -> F2Poly {
        self.reduce(&(a * b))
    }

    pub fn sqrmod(&self, a: &F2Poly) -> F2Poly {
        self.reduce(&a.square())
    }
}
