use super::{words, BitSeq, F2Poly};

/// Berlekamp-Massey over GF(2).
///
/// Returns the monic minimal polynomial `m` of the sequence: with `L = deg m`,
/// `sum_i m_i s_(n+i) = 0` for every `n` with `n + L < len(s)`. The all-zero
/// (or empty) sequence gives `1`.
pub fn minimal_polynomial(s: &BitSeq) -> F2Poly {
    let total = s.len();
    if total == 0 {
        return F2Poly::one();
    }
    // Discrepancies are dot products of the connection polynomial with a
    // reversed window of the sequence, so keep the sequence reversed.
    let rev = s.reversed();
    let rev = rev.words();

    let mut c: Vec<u64> = vec![1];
    let mut b: Vec<u64> = vec![1];
    let mut l = 0usize;
    let mut m: isize = -1;

    for n in 0..total {
        // d = sum_{i=0..=l} c_i s_(n-i); s_(n-i) sits at rev[total-1-n+i].
        let off = total - 1 - n;
        let nw = l / 64 + 1;
        let mut acc = 0u64;
        for (j, &cw) in c.iter().take(nw).enumerate() {
            acc ^= cw & words::window(rev, off + 64 * j);
        }
        if acc.count_ones() & 1 == 0 {
            continue;
        }
        let shift = (n as isize - m) as usize;
        if 2 * l <= n {
            let prev = c.clone();
            words::xor_shifted(&mut c, &b, shift);
            l = n + 1 - l;
            m = n as isize;
            b = prev;
        } else {
            words::xor_shifted(&mut c, &b, shift);
        }
        words::trim(&mut c);
    }

    // Reciprocal of the connection polynomial at degree l.
    let mut coeffs = vec![0u64; l / 64 + 1];
    for i in 0..=l {
        let ci = c.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1);
        if ci {
            let e = l - i;
            coeffs[e / 64] |= 1 << (e % 64);
        }
    }
    F2Poly::from_words(coeffs)
}

/// Does `m` annihilate `s` at every index where the recurrence applies?
pub fn annihilates(m: &F2Poly, s: &BitSeq) -> bool {
    let Some(l) = m.degree() else {
        return s.iter().all(|b| !b);
    };
    let exps = m.exponents();
    (0..s.len().saturating_sub(l)).all(|n| exps.iter().filter(|&&e| s.get(n + e)).count() % 2 == 0)
}
