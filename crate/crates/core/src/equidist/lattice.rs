//! `k(v)` through lattice reduction over `F2[t]`.
//!
//! Let `P` be the (irreducible, degree `p`) characteristic polynomial and
//! `y_b` the sequence of coordinate `b` of the outputs. Its generating function
//! `sum_n y_b[n] t^-(n+1)` equals `h_b / P` with `deg h_b < p`. A relation
//! `sum_(j<k, b<v) c_(j,b) * (bit b of output j) = 0` between output functionals
//! is exactly a vector `(q_0, .., q_(v-1))` with `deg q_b < k` in the module
//! `{ q : sum_b q_b h_b = 0 (mod P) }`. So `k(v)` is the smallest max-degree of
//! a nonzero module vector, read off as the least row degree of a basis in
//! weak Popov form. Adding coordinate `b` extends the basis by one row
//! `(h_b / h_0 mod P, 0, .., 0, 1)`, which is then reduced into place.

use super::Side;
use crate::error::{Error, Result};
use crate::f2::{is_irreducible, words, BitSeq, F2Poly, Modulus};
use crate::mtgp::{char_poly, Generator, RecursionParams, TemperingParams};

/// `h` with `sum_n y[n] t^-(n+1) = h / P`, from the first `p` terms of `y`.
pub fn numerator(charpoly: &F2Poly, y: &BitSeq) -> F2Poly {
    let p = charpoly.degree().expect("nonzero characteristic polynomial");
    assert!(y.len() >= p, "need at least p = {p} sequence terms");
    // y_hat = sum_(n<p) y[n] t^(p-1-n); the numerator is (P * y_hat) >> p.
    let rev = F2Poly::from_bits((0..p).rev().map(|n| y.get(n)));
    (charpoly * &rev).shr(p)
}

#[derive(Clone, Debug)]
struct Entry {
    words: Vec<u64>,
    deg: Option<usize>,
}

impl Entry {
    fn new(words: Vec<u64>) -> Self {
        let deg = words::degree(&words);
        Self { words, deg }
    }

    fn zero() -> Self {
        Self { words: Vec::new(), deg: None }
    }
}

#[derive(Clone, Debug)]
struct Row {
    ents: Vec<Entry>,
}

impl Row {
    /// `(degree, pivot)`: the max entry degree and the rightmost entry attaining it.
    fn lead(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, e) in self.ents.iter().enumerate() {
            if let Some(d) = e.deg {
                if best.is_none_or(|(bd, _)| d >= bd) {
                    best = Some((d, i));
                }
            }
        }
        best
    }

    fn degree(&self) -> Option<usize> {
        self.ents.iter().filter_map(|e| e.deg).max()
    }

    /// `self += t^shift * other`.
    fn add_shifted(&mut self, other: &Row, shift: usize) {
        for (a, b) in self.ents.iter_mut().zip(&other.ents) {
            if b.deg.is_none() {
                continue;
            }
            words::xor_shifted(&mut a.words, &b.words, shift);
            words::trim(&mut a.words);
            a.deg = words::degree(&a.words);
        }
    }
}

fn pair(rows: &mut [Row], dst: usize, src: usize) -> (&mut Row, &Row) {
    debug_assert_ne!(dst, src);
    if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    }
}

/// Module basis for the first `v` coordinates, kept in weak Popov form.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    rows: Vec<Row>,
    owner: Vec<usize>,
}

impl Lattice {
    pub(crate) fn new(charpoly: &F2Poly) -> Self {
        let row = Row { ents: vec![Entry::new(charpoly.words().to_vec())] };
        Self { rows: vec![row], owner: vec![0] }
    }

    pub(crate) fn min_degree(&self) -> usize {
        self.rows.iter().filter_map(Row::degree).min().expect("full-rank lattice")
    }

    pub(crate) fn push_coordinate(&mut self, g: &F2Poly) {
        let v = self.rows.len();
        for r in &mut self.rows {
            r.ents.push(Entry::zero());
        }
        let mut ents = vec![Entry::zero(); v + 1];
        ents[0] = Entry::new(g.words().to_vec());
        ents[v] = Entry::new(vec![1]);
        self.rows.push(Row { ents });
        self.owner.push(usize::MAX);

        let mut active = v;
        loop {
            let (d, piv) = self.rows[active].lead().expect("module rows are nonzero");
            let o = self.owner[piv];
            if o == usize::MAX {
                self.owner[piv] = active;
                return;
            }
            let (od, _) = self.rows[o].lead().expect("module rows are nonzero");
            if d >= od {
                let (dst, src) = pair(&mut self.rows, active, o);
                dst.add_shifted(src, d - od);
            } else {
                let (dst, src) = pair(&mut self.rows, o, active);
                dst.add_shifted(src, od - d);
                self.owner[piv] = active;
                active = o;
            }
        }
    }
}

/// `k(1..=h.len())` from the numerators of the output coordinates, in order.
pub fn kv_from_numerators(charpoly: &F2Poly, h: &[F2Poly]) -> Result<Vec<usize>> {
    let modulus = Modulus::new(charpoly)?;
    if h.is_empty() {
        return Ok(Vec::new());
    }
    match normalize(&modulus, &h[0])? {
        None => Ok(vec![0; h.len()]),
        Some(inv) => {
            let g: Vec<F2Poly> = h.iter().map(|hb| modulus.mulmod(&modulus.reduce(hb), &inv)).collect();
            kv_from_normalized(charpoly, &g)
        }
    }
}

/// Inverse of `h0` modulo `P`, or `None` when `h0 = 0 (mod P)` (the first
/// coordinate is constant zero and every `k(v)` is 0).
pub fn normalize(modulus: &Modulus, h0: &F2Poly) -> Result<Option<F2Poly>> {
    let h0 = modulus.reduce(h0);
    if h0.is_zero() {
        return Ok(None);
    }
    match h0.inv_mod(modulus.poly())? {
        Some(inv) => Ok(Some(inv)),
        None => Err(Error::NotMaximal("characteristic polynomial is not irreducible".into())),
    }
}

/// `k(1..=g.len())` from coordinates already divided by the first one
/// (`g[0] = 1`, `g[b] = h_b / h_0 mod P`).
pub fn kv_from_normalized(charpoly: &F2Poly, g: &[F2Poly]) -> Result<Vec<usize>> {
    let p = charpoly.degree().ok_or(Error::ZeroModulus)?;
    if g.is_empty() {
        return Ok(Vec::new());
    }
    debug_assert!(g[0].is_one());
    let mut lat = Lattice::new(charpoly);
    let mut ks = Vec::with_capacity(g.len());
    ks.push(p);
    for gb in &g[1..] {
        lat.push_coordinate(gb);
        ks.push(lat.min_degree());
    }
    Ok(ks)
}

/// Output coordinate sequences of length `p`, coordinate `b` per [`Side::bit`].
pub fn output_sequences(rp: &RecursionParams, tp: &TemperingParams, side: Side) -> Vec<BitSeq> {
    let p = rp.mexp() as usize;
    let w = rp.word_bits();
    let mut g = Generator::new(rp.clone(), tp.clone(), 1).expect("consistent params");
    let mut seqs = vec![BitSeq::with_capacity(p); w as usize];
    for _ in 0..p {
        let o = g.next_u32();
        for (b, s) in seqs.iter_mut().enumerate() {
            s.push((o >> side.bit(w, b)) & 1 == 1);
        }
    }
    seqs
}

/// `k(v)` for `v = 1..=w`, given a certified characteristic polynomial.
pub fn kv_table_with_poly(rp: &RecursionParams, tp: &TemperingParams, side: Side, charpoly: &F2Poly) -> Result<Vec<usize>> {
    let h: Vec<F2Poly> = output_sequences(rp, tp, side).iter().map(|y| numerator(charpoly, y)).collect();
    kv_from_numerators(charpoly, &h)
}

/// `k(v)` for `v = 1..=w`; fails unless the recursion has maximal period.
pub fn kv_table(rp: &RecursionParams, tp: &TemperingParams, side: Side) -> Result<Vec<usize>> {
    let f = char_poly(rp);
    if f.degree() != Some(rp.mexp() as usize) || !is_irreducible(&f)? {
        return Err(Error::NotMaximal(format!("characteristic polynomial has degree {:?} or is reducible", f.degree())));
    }
    kv_table_with_poly(rp, tp, side, &f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerator_of_lfsr_sequence() {
        // y satisfies x^3 + x + 1: y = 1,0,0,1,0,1,1,...
        let f = F2Poly::from_exponents(&[3, 1, 0]);
        let y: BitSeq = [1u8, 0, 0, 1, 0, 1, 1].as_slice().into();
        let h = numerator(&f, &y);
        // Check h / P expands back to y: (h * t^(n)) long division.
        let mut rem = h.clone();
        for n in 0..7 {
            rem = rem.shl(1);
            let bit = rem.degree().is_some_and(|d| d >= 3);
            assert_eq!(bit, y.get(n), "term {n}");
            if bit {
                rem += &f;
            }
        }
    }

    #[test]
    fn single_coordinate_gives_p() {
        let f = F2Poly::from_exponents(&[13, 4, 3, 1, 0]);
        let h = vec![F2Poly::from_exponents(&[5, 2])];
        assert_eq!(kv_from_numerators(&f, &h).unwrap(), vec![13]);
    }

    #[test]
    fn zero_coordinate_gives_zero() {
        let f = F2Poly::from_exponents(&[13, 4, 3, 1, 0]);
        let h = vec![F2Poly::zero(), F2Poly::one()];
        assert_eq!(kv_from_numerators(&f, &h).unwrap(), vec![0, 0]);
    }

    #[test]
    fn duplicated_coordinate_gives_zero_at_v2() {
        let f = F2Poly::from_exponents(&[13, 4, 3, 1, 0]);
        let a = F2Poly::from_exponents(&[7, 1]);
        let k = kv_from_numerators(&f, &[a.clone(), a]).unwrap();
        // q = (1, 1) is a relation of degree 0.
        assert_eq!(k, vec![13, 0]);
    }
}
