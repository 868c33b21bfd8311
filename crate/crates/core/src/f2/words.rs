//! Word-level kernels for bit vectors packed little-endian into `u64`s.

/// Highest set bit index, or `None` for an all-zero slice.
#[inline]
pub(crate) fn degree(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .rposition(|&w| w != 0)
        .map(|i| i * 64 + 63 - words[i].leading_zeros() as usize)
}

#[inline]
pub(crate) fn trim(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

/// `dst ^= src << shift`, growing `dst` as needed.
pub(crate) fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    if src.is_empty() {
        return;
    }
    let ws = shift / 64;
    let bs = shift % 64;
    let need = ws + src.len() + usize::from(bs != 0);
    if dst.len() < need {
        dst.resize(need, 0);
    }
    if bs == 0 {
        for (d, s) in dst[ws..].iter_mut().zip(src) {
            *d ^= s;
        }
    } else {
        let mut carry = 0u64;
        for (d, &s) in dst[ws..].iter_mut().zip(src) {
            *d ^= (s << bs) | carry;
            carry = s >> (64 - bs);
        }
        dst[ws + src.len()] ^= carry;
    }
}

/// `src >> shift`, dropping the bits shifted out.
pub(crate) fn shr(src: &[u64], shift: usize) -> Vec<u64> {
    let ws = shift / 64;
    if ws >= src.len() {
        return Vec::new();
    }
    let bs = shift % 64;
    let tail = &src[ws..];
    let mut out = Vec::with_capacity(tail.len());
    if bs == 0 {
        out.extend_from_slice(tail);
    } else {
        for i in 0..tail.len() {
            let hi = tail.get(i + 1).map_or(0, |&w| w << (64 - bs));
            out.push((tail[i] >> bs) | hi);
        }
    }
    trim(&mut out);
    out
}

/// Keep only the low `bits` bits.
pub(crate) fn truncate_bits(words: &mut Vec<u64>, bits: usize) {
    let nw = bits.div_ceil(64);
    words.truncate(nw);
    if !bits.is_multiple_of(64) {
        if let Some(last) = words.get_mut(nw - 1) {
            *last &= (1u64 << (bits % 64)) - 1;
        }
    }
    trim(words);
}

/// Read 64 bits starting at bit offset `off` (bits past the end read as zero).
#[inline]
pub(crate) fn window(words: &[u64], off: usize) -> u64 {
    let wi = off / 64;
    let bs = off % 64;
    let lo = words.get(wi).copied().unwrap_or(0);
    if bs == 0 {
        lo
    } else {
        let hi = words.get(wi + 1).copied().unwrap_or(0);
        (lo >> bs) | (hi << (64 - bs))
    }
}

#[inline]
fn clmul_soft(a: u64, b: u64) -> u128 {
    let mut tbl = [0u128; 16];
    let a = a as u128;
    for i in 1..16 {
        tbl[i] = if i & 1 == 1 {
            tbl[i - 1] ^ a
        } else {
            tbl[i >> 1] << 1
        };
    }
    let mut acc = 0u128;
    let mut k = 60;
    loop {
        acc = (acc << 4) ^ tbl[((b >> k) & 0xf) as usize];
        if k == 0 {
            break;
        }
        k -= 4;
    }
    acc
}

#[cfg(target_arch = "x86_64")]
mod hw {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi128_si64, _mm_set_epi64x, _mm_srli_si128};

    #[target_feature(enable = "pclmulqdq,sse2")]
    pub(super) unsafe fn school(a: &[u64], b: &[u64], out: &mut [u64]) {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let xv = _mm_set_epi64x(0, x as i64);
            for (j, &y) in b.iter().enumerate() {
                let yv = _mm_set_epi64x(0, y as i64);
                let p = _mm_clmulepi64_si128(xv, yv, 0);
                let lo = _mm_cvtsi128_si64(p) as u64;
                let hi = _mm_cvtsi128_si64(_mm_srli_si128(p, 8)) as u64;
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
    }
}

fn has_clmul() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        static FLAG: std::sync::OnceLock<bool> = std::sync::OnceLock::new();
        *FLAG.get_or_init(|| std::arch::is_x86_feature_detected!("pclmulqdq"))
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// Schoolbook product, accumulated into `out` (length >= a.len() + b.len()).
fn school(a: &[u64], b: &[u64], out: &mut [u64]) {
    #[cfg(target_arch = "x86_64")]
    if has_clmul() {
        // SAFETY: the pclmulqdq feature was detected at runtime.
        unsafe { hw::school(a, b, out) };
        return;
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let p = clmul_soft(x, y);
            out[i + j] ^= p as u64;
            out[i + j + 1] ^= (p >> 64) as u64;
        }
    }
}

const KARATSUBA_CUTOFF: usize = 24;

/// Karatsuba on equal-length operands; `out` has length 2n and is overwritten.
fn karatsuba(a: &[u64], b: &[u64], out: &mut [u64]) {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    debug_assert!(out.len() >= 2 * n);
    out[..2 * n].fill(0);
    if n < KARATSUBA_CUTOFF {
        school(a, b, out);
        return;
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let hi_len = n - h;

    // z0 = a0 b0, z2 = a1 b1, z1 = (a0 + a1)(b0 + b1) + z0 + z2
    let mut z0 = vec![0u64; 2 * h];
    karatsuba(a0, b0, &mut z0);
    let mut z2 = vec![0u64; 2 * hi_len];
    karatsuba(a1, b1, &mut z2);

    let mut sa = a1.to_vec();
    let mut sb = b1.to_vec();
    for i in 0..h {
        sa[i] ^= a0[i];
        sb[i] ^= b0[i];
    }
    let mut z1 = vec![0u64; 2 * hi_len];
    karatsuba(&sa, &sb, &mut z1);
    for (i, &z) in z0.iter().enumerate() {
        z1[i] ^= z;
    }
    for (i, &z) in z2.iter().enumerate() {
        z1[i] ^= z;
    }

    for (i, &z) in z0.iter().enumerate() {
        out[i] ^= z;
    }
    for (i, &z) in z2.iter().enumerate() {
        out[2 * h + i] ^= z;
    }
    for (i, &z) in z1.iter().enumerate() {
        out[h + i] ^= z;
    }
}

/// Carry-less product of two packed polynomials.
pub(crate) fn mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out = vec![0u64; a.len() + b.len()];
    if short.len() < KARATSUBA_CUTOFF {
        school(short, long, &mut out);
    } else {
        // Split the long operand into short-sized blocks.
        let n = short.len();
        let mut block = vec![0u64; n];
        let mut prod = vec![0u64; 2 * n];
        for (k, chunk) in long.chunks(n).enumerate() {
            block[..chunk.len()].copy_from_slice(chunk);
            block[chunk.len()..].fill(0);
            karatsuba(short, &block, &mut prod);
            for (i, &z) in prod.iter().enumerate() {
                if let Some(o) = out.get_mut(k * n + i) {
                    *o ^= z;
                }
            }
        }
    }
    trim(&mut out);
    out
}

static SPREAD: [u16; 256] = {
    let mut t = [0u16; 256];
    let mut i = 0;
    while i < 256 {
        let mut v = 0u16;
        let mut b = 0;
        while b < 8 {
            if i & (1 << b) != 0 {
                v |= 1 << (2 * b);
            }
            b += 1;
        }
        t[i] = v;
        i += 1;
    }
    t
};

#[inline]
fn spread32(x: u32) -> u64 {
    let mut out = 0u64;
    for k in 0..4 {
        out |= (SPREAD[((x >> (8 * k)) & 0xff) as usize] as u64) << (16 * k);
    }
    out
}

/// Squaring over GF(2) interleaves zeros between coefficient bits.
pub(crate) fn square(a: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(2 * a.len());
    for &w in a {
        out.push(spread32(w as u32));
        out.push(spread32((w >> 32) as u32));
    }
    trim(&mut out);
    out
}
