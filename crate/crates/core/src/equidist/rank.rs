use super::Side;
use crate::f2::{EchelonBasis, F2Matrix};
use crate::mtgp::{Generator, GeneratorState, RecursionParams, TemperingParams};

/// Largest `p` for which the rank method is used without an explicit override.
pub const RANK_BUDGET: u32 = 4423;

/// The `(k v) x p` matrix sending the `p` state bits to the selected `v` bits
/// of the first `k` tempered outputs. Row `j v + b` is bit `b` of output `j`.
///
/// Built column by column by running the generator from every basis state.
pub fn output_map(rp: &RecursionParams, tp: &TemperingParams, k: usize, v: usize, side: Side) -> F2Matrix {
    let p = rp.mexp() as usize;
    let w = rp.word_bits();
    let mut m = F2Matrix::zeros(k * v, p);
    if k == 0 || v == 0 {
        return m;
    }
    let mut basis = vec![false; p];
    for s in 0..p {
        basis[s] = true;
        let st = GeneratorState::from_bits(rp, &basis).expect("p state bits");
        basis[s] = false;
        let mut g = Generator::from_state(rp.clone(), tp.clone(), st).expect("consistent params");
        for j in 0..k {
            let o = g.next_u32();
            for b in 0..v {
                if (o >> side.bit(w, b)) & 1 == 1 {
                    m.set(j * v + b, s, true);
                }
            }
        }
    }
    m
}

/// `k(v)`: the largest `k` for which the first `k` outputs' `v` bits are
/// linearly independent functionals of the state.
pub fn k_of_v(rp: &RecursionParams, tp: &TemperingParams, v: usize, side: Side) -> usize {
    assert!(v >= 1 && v <= rp.word_bits() as usize);
    let p = rp.mexp() as usize;
    let kmax = p / v;
    let map = output_map(rp, tp, kmax, v, side);
    let mut basis = EchelonBasis::new(p);
    let mut row = vec![0u64; p.div_ceil(64)];
    for r in 0..map.rows() {
        row.copy_from_slice(map.row(r));
        if !basis.insert(&mut row) {
            return r / v;
        }
    }
    kmax
}

pub fn kv_table_rank(rp: &RecursionParams, tp: &TemperingParams, side: Side) -> Vec<usize> {
    (1..=rp.word_bits() as usize).map(|v| k_of_v(rp, tp, v, side)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_map() {
        let rp = RecursionParams::new(13, 4, 2, 2, 1, [0; 4]).unwrap();
        let m = output_map(&rp, &TemperingParams::identity(4), 0, 3, Side::Msb);
        assert_eq!((m.rows(), m.cols()), (0, 13));
    }

    #[test]
    fn single_output_map_is_first_word() {
        let rp = RecursionParams::new(19, 8, 2, 3, 1, [0x40, 0x90, 0x20, 0x00]).unwrap();
        let tp = TemperingParams::identity(8);
        let m = output_map(&rp, &tp, 1, 8, Side::Msb);
        for s in 0..19 {
            let mut bits = vec![false; 19];
            bits[s] = true;
            let st = GeneratorState::from_bits(&rp, &bits).unwrap();
            let o = Generator::from_state(rp.clone(), tp.clone(), st).unwrap().next_u32();
            for b in 0..8 {
                assert_eq!(m.get(b, s), (o >> (7 - b)) & 1 == 1);
            }
        }
    }
}
