//! Dimensions of equidistribution `k(v)`, defects `d(v)` and the total defect.
//!
//! Three independent routes compute `k(v)`:
//! * [`k_of_v`]: rank of the linear map from state bits to the first `k`
//!   `v`-bit outputs, grown incrementally in `k`;
//! * [`brute_force_kv`]: counting `k`-tuples over the full period (tiny `p` only);
//! * [`lattice`]: reduction of the `F2[t]`-module of output relations, fast
//!   enough for parameter searches at large `p`.

mod brute;
pub mod lattice;
mod rank;

use std::fmt::Write as _;

pub use brute::brute_force_kv;
pub use rank::{k_of_v, kv_table_rank, output_map, RANK_BUDGET};

use crate::error::{Error, Result};
use crate::mtgp::{RecursionParams, TemperingParams};

/// Which `v` bits of each output word are examined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// The `v` most significant bits (the usual `k(v)`).
    Msb,
    /// The `v` least significant bits (`k'(v)`).
    Lsb,
}

impl Side {
    /// Bit position (0 = LSB) of coordinate `b` among the `v` selected bits.
    pub fn bit(self, word_bits: u32, b: usize) -> u32 {
        match self {
            Side::Msb => word_bits - 1 - b as u32,
            Side::Lsb => b as u32,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rank,
    Lattice,
}

/// `d(v) = floor(p/v) - k(v)` for `v = 1..=kv.len()` and their sum.
pub fn defects(kv: &[usize], p: usize) -> Result<(Vec<usize>, usize)> {
    let mut dv = Vec::with_capacity(kv.len());
    for (i, &k) in kv.iter().enumerate() {
        let v = i + 1;
        let bound = p / v;
        if k > bound {
            return Err(Error::KvExceedsBound { v, k, bound });
        }
        dv.push(bound - k);
    }
    let delta = dv.iter().sum();
    Ok((dv, delta))
}

/// `k(v)`, `d(v)` for `v = 1..=w` and the total defect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquidistReport {
    pub p: usize,
    pub w: usize,
    pub kv: Vec<usize>,
    pub dv: Vec<usize>,
    pub delta: usize,
}

impl EquidistReport {
    pub fn from_kv(p: usize, kv: Vec<usize>) -> Result<Self> {
        let (dv, delta) = defects(&kv, p)?;
        Ok(Self { p, w: kv.len(), kv, dv, delta })
    }

    pub fn compute(rp: &RecursionParams, tp: &TemperingParams, side: Side, method: Method) -> Result<Self> {
        let kv = match method {
            Method::Rank => kv_table_rank(rp, tp, side),
            Method::Lattice => lattice::kv_table(rp, tp, side)?,
        };
        Self::from_kv(rp.mexp() as usize, kv)
    }

    pub fn max_defect(&self) -> usize {
        self.dv.iter().copied().max().unwrap_or(0)
    }

    /// Defect ratio `100 d(v) / (k(v) + d(v))` in percent, `v` 1-based.
    pub fn ratio(&self, v: usize) -> f64 {
        let (k, d) = (self.kv[v - 1], self.dv[v - 1]);
        if k + d == 0 {
            0.0
        } else {
            100.0 * d as f64 / (k + d) as f64
        }
    }

    /// Aligned text table: `v  k(v)  d(v)  r(v)%`, then the totals.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:>3} {:>8} {:>8} {:>8}", "v", "k(v)", "d(v)", "r(v)%");
        for v in 1..=self.w {
            let _ = writeln!(s, "{:>3} {:>8} {:>8} {:>8.2}", v, self.kv[v - 1], self.dv[v - 1], self.ratio(v));
        }
        let _ = writeln!(s, "delta = {}", self.delta);
        let _ = writeln!(s, "max d(v) = {}", self.max_defect());
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("v,k,d,ratio\n");
        for v in 1..=self.w {
            let _ = writeln!(s, "{},{},{},{:.2}", v, self.kv[v - 1], self.dv[v - 1], self.ratio(v));
        }
        let _ = writeln!(s, "delta,{}", self.delta);
        let _ = writeln!(s, "max_defect,{}", self.max_defect());
        s
    }
}
