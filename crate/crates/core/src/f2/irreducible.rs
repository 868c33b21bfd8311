use super::{F2Poly, Modulus};
use crate::error::{Error, Result};

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^(2^k) mod f` for k = 0, 1, ..., yielded lazily.
struct Frobenius<'a> {
    m: &'a Modulus,
    cur: F2Poly,
}

impl<'a> Frobenius<'a> {
    fn new(m: &'a Modulus) -> Self {
        Self { m, cur: m.reduce(&F2Poly::x()) }
    }

    fn step(&mut self) -> &F2Poly {
        self.cur = self.m.sqrmod(&self.cur);
        &self.cur
    }
}

/// Rabin's test: `x^(2^n) = x (mod f)` and `gcd(x^(2^(n/q)) - x, f) = 1`
/// for every prime `q | n`.
pub fn is_irreducible(f: &F2Poly) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let m = Modulus::new(f)?;
    let x = m.reduce(&F2Poly::x());
    let mut checkpoints: Vec<usize> = prime_factors(n).into_iter().map(|q| n / q).collect();
    checkpoints.sort_unstable();

    let mut frob = Frobenius::new(&m);
    let mut k = 0;
    for &c in &checkpoints {
        while k < c {
            frob.step();
            k += 1;
        }
        let t = &frob.cur + &x;
        if !t.gcd(f).is_one() {
            return Ok(false);
        }
    }
    while k < n {
        frob.step();
        k += 1;
    }
    Ok(frob.cur == x)
}

/// True when `f` has an irreducible factor of degree at most `max_deg`
/// (restricted to degrees below `deg f`). A cheap pre-filter for searches:
/// a random polynomial usually has a small factor.
pub fn has_small_factor(f: &F2Poly, max_deg: usize) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if !f.coeff(0) {
        return Ok(n > 1);
    }
    let m = Modulus::new(f)?;
    let x = m.reduce(&F2Poly::x());
    let limit = max_deg.min(n / 2);
    let mut frob = Frobenius::new(&m);
    // Accumulate a product of (x^(2^k) - x) and test it in batches; the first
    // few degrees are checked individually since they reject most candidates.
    let mut acc = F2Poly::one();
    for k in 1..=limit {
        let t = frob.step() + &x;
        acc = m.mulmod(&acc, &t);
        if k <= 8 || k % 8 == 0 || k == limit {
            if !acc.gcd(f).is_one() {
                return Ok(true);
            }
            acc = F2Poly::one();
        }
    }
    Ok(false)
}
