//! Greedy search for the tempering matrix `T`.
//!
//! Output bit `pos` is `x[pos] ^ sum_k T[k][pos] * u_k`, where `u_k` is nibble
//! bit `3 - k` of the folded auxiliary word. Both are linear in the state, so
//! the generating-function numerator of every output coordinate is the same
//! linear combination of `w + 4` numerators computed once. Each candidate then
//! costs only a lattice reduction, and the coordinates a chunk cannot touch are
//! reduced once per chunk and shared by all of its patterns.

use std::collections::HashMap;

use crate::equidist::lattice::{normalize, numerator, Lattice};
use crate::equidist::{defects, Side};
use crate::error::Result;
use crate::f2::{BitSeq, F2Poly, Modulus};
use crate::mtgp::{tempering_nibble, Generator, RecursionParams, TemperingParams, PROBE_SEED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    /// High bits of each row, scored on MSB-side `d(v)`.
    High,
    /// Low bits of each row, scored on LSB-side `d'(v)`.
    Low,
}

/// One greedy decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkChoice {
    pub row: usize,
    pub phase: Phase,
    /// First bit of the chunk, counted from the MSB in [`Phase::High`] and
    /// from the LSB in [`Phase::Low`].
    pub lo_bit: u32,
    pub width: u32,
    pub chosen: u32,
    /// `d(1) + .. + d(e)` for the chosen pattern.
    pub chosen_defect: usize,
    /// The same sum with the chunk left zero.
    pub zero_defect: usize,
}

#[derive(Clone, Debug)]
pub struct TemperingSearch {
    pub params: TemperingParams,
    pub trace: Vec<ChunkChoice>,
    /// Total MSB-side defect of the result.
    pub delta: usize,
    pub kv: Vec<usize>,
}

/// Width of the low phase: `max(1, round(9w/32))`.
pub fn low_phase_bits(word_bits: u32) -> u32 {
    ((9 * word_bits + 16) / 32).max(1)
}

/// Numerators divided by the first coordinate's numerator.
struct Normalized {
    x: Vec<F2Poly>,
    u: [F2Poly; 4],
}

struct LinearModel {
    w: u32,
    p: usize,
    charpoly: F2Poly,
    modulus: Modulus,
    hx: Vec<F2Poly>,
    hu: [F2Poly; 4],
    cache: HashMap<(u32, u32), Option<Normalized>>,
}

impl LinearModel {
    fn new(rp: &RecursionParams, charpoly: &F2Poly) -> Result<Self> {
        let p = rp.mexp() as usize;
        let w = rp.word_bits();
        let mut g = Generator::new(rp.clone(), TemperingParams::identity(w), PROBE_SEED)?;
        let mut xs = vec![BitSeq::with_capacity(p); w as usize];
        let mut us: [BitSeq; 4] = std::array::from_fn(|_| BitSeq::with_capacity(p));
        for _ in 0..p {
            let (x, aux) = g.step();
            for (pos, s) in xs.iter_mut().enumerate() {
                s.push((x >> pos) & 1 == 1);
            }
            let nib = tempering_nibble(aux, w);
            for (k, s) in us.iter_mut().enumerate() {
                s.push((nib >> (3 - k)) & 1 == 1);
            }
        }
        Ok(Self {
            w,
            p,
            charpoly: charpoly.clone(),
            modulus: Modulus::new(charpoly)?,
            hx: xs.iter().map(|y| numerator(charpoly, y)).collect(),
            hu: us.each_ref().map(|y| numerator(charpoly, y)),
            cache: HashMap::new(),
        })
    }

    fn column(tmat: &[u32; 4], pos: u32) -> u32 {
        tmat.iter().enumerate().fold(0, |c, (k, row)| c | (((row >> pos) & 1) << k))
    }

    /// Normalized numerators for a given bit of coordinate 0 and its `T` column.
    fn normalized(&mut self, pos0: u32, col: u32) -> Result<Option<&Normalized>> {
        if !self.cache.contains_key(&(pos0, col)) {
            let mut h0 = self.hx[pos0 as usize].clone();
            for k in 0..4 {
                if (col >> k) & 1 == 1 {
                    h0 += &self.hu[k];
                }
            }
            let entry = normalize(&self.modulus, &h0)?.map(|inv| {
                let m = &self.modulus;
                Normalized {
                    x: self.hx.iter().map(|h| m.mulmod(&m.reduce(h), &inv)).collect(),
                    u: self.hu.each_ref().map(|h| m.mulmod(&m.reduce(h), &inv)),
                }
            });
            self.cache.insert((pos0, col), entry);
        }
        Ok(self.cache[&(pos0, col)].as_ref())
    }

    /// Normalized coordinates `0..e` on `side`, or `None` if coordinate 0 vanishes.
    fn coords(&mut self, tmat: &[u32; 4], side: Side, e: usize) -> Result<Option<Vec<F2Poly>>> {
        let w = self.w;
        let pos0 = side.bit(w, 0);
        let Some(nz) = self.normalized(pos0, Self::column(tmat, pos0))? else {
            return Ok(None);
        };
        let out = (0..e)
            .map(|b| {
                let pos = side.bit(w, b);
                let col = Self::column(tmat, pos);
                let mut g = nz.x[pos as usize].clone();
                for (k, u) in nz.u.iter().enumerate() {
                    if (col >> k) & 1 == 1 {
                        g += u;
                    }
                }
                g
            })
            .collect();
        Ok(Some(out))
    }

    fn kv(&mut self, tmat: &[u32; 4], side: Side, e: usize) -> Result<Vec<usize>> {
        Ok(match self.coords(tmat, side, e)? {
            None => vec![0; e],
            Some(g) => self.reduce(&g).1,
        })
    }

    /// Reduced basis and `k(1..=g.len())` for normalized coordinates `g`.
    fn reduce(&self, g: &[F2Poly]) -> (Lattice, Vec<usize>) {
        debug_assert!(g.first().is_some_and(F2Poly::is_one));
        let mut lat = Lattice::new(&self.charpoly);
        let mut ks = vec![self.p];
        extend(&mut lat, &mut ks, &g[1..]);
        (lat, ks)
    }
}

fn extend(lat: &mut Lattice, ks: &mut Vec<usize>, g: &[F2Poly]) {
    for gb in g {
        lat.push_coordinate(gb);
        ks.push(lat.min_degree());
    }
}

/// Choose the chunk at coordinates `j..e` of `side` in row `row`.
#[allow(clippy::too_many_arguments)]
fn choose_chunk(
    model: &mut LinearModel,
    tmat: &mut [u32; 4],
    row: usize,
    side: Side,
    j: usize,
    e: usize,
    place: impl Fn(u32) -> u32,
) -> Result<(u32, usize, usize)> {
    let p = model.p;
    let width = (e - j) as u32;
    let chunk_mask = place((1 << width) - 1);
    let base = tmat[row] & !chunk_mask;
    let score = |ks: &[usize]| defects(ks, p).map(|(_, d)| d);

    // Coordinates below j do not depend on the chunk (including the normalizer when j > 0).
    let shared = if j > 0 {
        tmat[row] = base;
        model.coords(tmat, side, j)?.map(|g| model.reduce(&g))
    } else {
        None
    };

    let mut best: Option<(usize, u32)> = None;
    let mut zero_defect = 0;
    for pat in 0..(1u32 << width) {
        tmat[row] = base | place(pat);
        let ks = match (&shared, j) {
            (Some((lat, ks)), _) => {
                let g = model.coords(tmat, side, e)?.expect("normalizer unchanged");
                let (mut lat, mut ks) = (lat.clone(), ks.clone());
                extend(&mut lat, &mut ks, &g[j..]);
                ks
            }
            (None, 0) => model.kv(tmat, side, e)?,
            // Coordinate 0 vanishes for every pattern.
            (None, _) => vec![0; e],
        };
        let d = score(&ks)?;
        if pat == 0 {
            zero_defect = d;
        }
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, pat));
        }
    }
    let (chosen_defect, chosen) = best.expect("at least one pattern");
    debug_assert!(chosen_defect <= zero_defect);
    tmat[row] = base | place(chosen);
    Ok((chosen, chosen_defect, zero_defect))
}

/// Greedy two-phase search. `charpoly` must be the certified (degree `p`,
/// irreducible) characteristic polynomial of `rp`.
pub fn search_tempering(rp: &RecursionParams, charpoly: &F2Poly) -> Result<TemperingSearch> {
    let w = rp.word_bits();
    let lo = low_phase_bits(w);
    let hi = w - lo;
    let mut model = LinearModel::new(rp, charpoly)?;
    let mut tmat = [0u32; 4];
    let mut trace = Vec::new();

    for (phase, side, bits) in [(Phase::High, Side::Msb, hi), (Phase::Low, Side::Lsb, lo)] {
        for row in 0..4 {
            let mut j = 0;
            while j < bits {
                let e = (j + 5).min(bits);
                let width = e - j;
                let place = |pat: u32| match phase {
                    Phase::High => pat << (w - e),
                    Phase::Low => pat << j,
                };
                let (chosen, chosen_defect, zero_defect) =
                    choose_chunk(&mut model, &mut tmat, row, side, j as usize, e as usize, place)?;
                trace.push(ChunkChoice { row, phase, lo_bit: j, width, chosen, chosen_defect, zero_defect });
                j = e;
            }
        }
    }

    let kv = model.kv(&tmat, Side::Msb, w as usize)?;
    let (_, delta) = defects(&kv, model.p)?;
    Ok(TemperingSearch { params: TemperingParams::new(w, tmat)?, trace, delta, kv })
}
