use super::params::{word_mask, RecursionParams, TemperingParams};
use crate::error::{Error, Result};

/// Output format of [`Generator::next_word`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutputMode {
    /// Tempered `w`-bit integer.
    Uint,
    /// IEEE-754 single in `[1, 2)` (bit pattern).
    FloatClosedOpen12,
    /// IEEE-754 single in `[0, 1)`: the `[1, 2)` value minus 1.0 (bit pattern).
    FloatClosedOpen01,
}

impl OutputMode {
    pub fn requires_word32(self) -> bool {
        !matches!(self, OutputMode::Uint)
    }
}

/// One step of the recursion: `x_(N+i)` from `x_i`, `x_(1+i)` and `x_(M+i)`.
#[inline]
pub fn recursion_step(x_i: u32, x_1i: u32, x_mi: u32, rp: &RecursionParams) -> u32 {
    let wmask = word_mask(rp.word_bits());
    let mut t = x_1i ^ (x_i & rp.mask());
    t ^= (t << rp.sh1()) & wmask;
    let u = t ^ (x_mi >> rp.sh2());
    u ^ rp.rectbl()[(u & 0xf) as usize]
}

#[inline]
pub fn tempering_nibble(aux: u32, word_bits: u32) -> usize {
    let mut t = aux ^ (aux >> (word_bits / 2));
    t ^= t >> (word_bits / 4);
    (t & 0xf) as usize
}

/// `o_(N+i) = x_(N+i) ^ tmptbl[t & 0xf]` where `t` folds `x_(M-1+i)`
/// by `w/2` then `w/4` (16 and 8 at `w = 32`).
#[inline]
pub fn temper(x_ni: u32, x_m1i: u32, tmptbl: &[u32; 16], word_bits: u32) -> u32 {
    x_ni ^ tmptbl[tempering_nibble(x_m1i, word_bits)]
}

/// Single-precision bit pattern in `[1, 2)`: `(x >> 9) ^ sngltbl[t & 0xf]`.
#[inline]
pub fn temper_float(x: u32, x_m1i: u32, sngltbl: &[u32; 16]) -> u32 {
    (x >> 9) ^ sngltbl[tempering_nibble(x_m1i, 32)]
}

/// Ring buffer of `L >= N` words plus the cursor `i` (position of `x_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorState {
    buf: Vec<u32>,
    idx: usize,
}

impl GeneratorState {
    /// MT-style initializer; forces a nonzero significant state.
    pub fn seed(rp: &RecursionParams, s: u32) -> Self {
        let w = rp.word_bits();
        let wmask = word_mask(w);
        let mut buf = Vec::with_capacity(rp.n());
        buf.push(s & wmask);
        for i in 1..rp.n() {
            let prev = buf[i - 1];
            let next = 1_812_433_253u32.wrapping_mul(prev ^ (prev >> (w - 2))).wrapping_add(i as u32);
            buf.push(next & wmask);
        }
        let mut st = Self { buf, idx: 0 };
        if st.is_zero(rp) {
            st.buf[0] |= 1 << (w - 1);
        }
        st
    }

    /// State from its `p` significant bits: the `w - r` MSBs of `x_0`
    /// followed by all bits of `x_1 .. x_(N-1)`, each word MSB first.
    pub fn from_bits(rp: &RecursionParams, bits: &[bool]) -> Result<Self> {
        if bits.len() != rp.mexp() as usize {
            return Err(Error::InvalidParams(format!(
                "state needs {} bits, got {}",
                rp.mexp(),
                bits.len()
            )));
        }
        let w = rp.word_bits();
        let mut buf = vec![0u32; rp.n()];
        let mut it = bits.iter();
        for (k, word) in buf.iter_mut().enumerate() {
            let lo = if k == 0 { rp.r() } else { 0 };
            for b in (lo..w).rev() {
                if *it.next().unwrap() {
                    *word |= 1 << b;
                }
            }
        }
        Ok(Self { buf, idx: 0 })
    }

    pub fn to_bits(&self, rp: &RecursionParams) -> Vec<bool> {
        let w = rp.word_bits();
        let mut bits = Vec::with_capacity(rp.mexp() as usize);
        for (k, word) in self.window(rp).into_iter().enumerate() {
            let lo = if k == 0 { rp.r() } else { 0 };
            for b in (lo..w).rev() {
                bits.push((word >> b) & 1 == 1);
            }
        }
        bits
    }

    /// `x_i .. x_(i+N-1)` with the discarded bits of `x_i` cleared.
    pub fn window(&self, rp: &RecursionParams) -> Vec<u32> {
        let l = self.buf.len();
        let mut out: Vec<u32> = (0..rp.n()).map(|k| self.buf[(self.idx + k) % l]).collect();
        out[0] &= rp.mask();
        out
    }

    pub fn is_zero(&self, rp: &RecursionParams) -> bool {
        self.window(rp).iter().all(|&x| x == 0)
    }

    pub fn words(&self) -> &[u32] {
        &self.buf
    }

    pub fn cursor(&self) -> usize {
        self.idx
    }
}

/// Sequential MTGP with ring length `L = N`.
#[derive(Clone, Debug)]
pub struct Generator {
    rp: RecursionParams,
    tp: TemperingParams,
    state: GeneratorState,
}

impl Generator {
    pub fn new(rp: RecursionParams, tp: TemperingParams, seed: u32) -> Result<Self> {
        let state = GeneratorState::seed(&rp, seed);
        Self::from_state(rp, tp, state)
    }

    pub fn from_state(rp: RecursionParams, tp: TemperingParams, state: GeneratorState) -> Result<Self> {
        if rp.word_bits() != tp.word_bits() {
            return Err(Error::InvalidParams(format!(
                "recursion w = {} but tempering w = {}",
                rp.word_bits(),
                tp.word_bits()
            )));
        }
        if state.buf.len() != rp.n() {
            return Err(Error::InvalidParams(format!("state has {} words, need {}", state.buf.len(), rp.n())));
        }
        Ok(Self { rp, tp, state })
    }

    pub fn recursion(&self) -> &RecursionParams {
        &self.rp
    }

    pub fn tempering(&self) -> &TemperingParams {
        &self.tp
    }

    pub fn state(&self) -> &GeneratorState {
        &self.state
    }

    /// Advance once; returns `(x_(N+i), x_(M-1+i))`.
    #[inline]
    pub fn step(&mut self) -> (u32, u32) {
        let n = self.rp.n();
        let m = self.rp.m();
        let i = self.state.idx;
        let at = |k: usize| if i + k >= n { i + k - n } else { i + k };
        let buf = &mut self.state.buf;
        let aux = buf[at(m - 1)];
        let x = recursion_step(buf[i], buf[at(1)], buf[at(m)], &self.rp);
        buf[i] = x;
        self.state.idx = at(1);
        (x, aux)
    }

    /// Untempered next word `x_(N+i)`.
    pub fn next_raw(&mut self) -> u32 {
        self.step().0
    }

    pub fn next_u32(&mut self) -> u32 {
        let (x, aux) = self.step();
        temper(x, aux, self.tp.tmptbl(), self.rp.word_bits())
    }

    /// `[1, 2)` single-precision bit pattern.
    pub fn next_float12_bits(&mut self) -> Result<u32> {
        let tbl = *self.tp.sngltbl()?;
        let (x, aux) = self.step();
        Ok(temper_float(x, aux, &tbl))
    }

    pub fn next_f32_12(&mut self) -> Result<f32> {
        self.next_float12_bits().map(f32::from_bits)
    }

    pub fn next_f32_01(&mut self) -> Result<f32> {
        self.next_f32_12().map(|x| x - 1.0)
    }

    pub fn next_word(&mut self, mode: OutputMode) -> Result<u32> {
        match mode {
            OutputMode::Uint => Ok(self.next_u32()),
            OutputMode::FloatClosedOpen12 => self.next_float12_bits(),
            OutputMode::FloatClosedOpen01 => self.next_f32_01().map(f32::to_bits),
        }
    }

    pub fn fill(&mut self, mode: OutputMode, out: &mut [u32]) -> Result<()> {
        if mode.requires_word32() && self.rp.word_bits() != 32 {
            return Err(Error::FloatNeedsWord32);
        }
        for o in out {
            *o = self.next_word(mode)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp32_r0() -> RecursionParams {
        // p = 11213, w = 32: r = 19, N = 351.
        RecursionParams::new(11213, 32, 50, 13, 4, [0; 4]).unwrap()
    }

    fn naive_step(x_i: u32, x_1i: u32, x_mi: u32, rp: &RecursionParams) -> u32 {
        let w = rp.word_bits();
        let keep = |x: u32| if w == 32 { x } else { x & ((1 << w) - 1) };
        let hi = keep(x_i >> rp.r() << rp.r());
        let t0 = x_1i ^ hi;
        let t = keep(t0 ^ (t0 << rp.sh1()));
        let u = t ^ (x_mi >> rp.sh2());
        let mut prod = 0;
        for k in 0..4 {
            if (u >> (3 - k)) & 1 == 1 {
                prod ^= rp.rmat()[k];
            }
        }
        u ^ prod
    }

    #[test]
    fn step_examples() {
        let rp = rp32_r0();
        assert_eq!(recursion_step(0, 0, 0, &rp), 0);
        assert_eq!(recursion_step(0, 1, 0, &rp), 0x2001);
    }

    #[test]
    fn step_matches_naive_formula() {
        let rp = RecursionParams::new(11213, 32, 50, 13, 4, [0xdead_bee0, 0x1357_9bd0, 0x0246_8ac0, 0xf0f0_0f00]).unwrap();
        let mut s = 0x1234_5678u32;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 17;
            s ^= s << 5;
            s
        };
        for _ in 0..10_000 {
            let (a, b, c) = (next(), next(), next());
            assert_eq!(recursion_step(a, b, c, &rp), naive_step(a, b, c, &rp));
        }
    }

    #[test]
    fn temper_examples() {
        let zero = [0u32; 16];
        assert_eq!(temper(0xabcd_ef01, 0x1357_9bdf, &zero, 32), 0xabcd_ef01);
        let tbl = super::super::params::build_table(&[0x1111_1111, 0x2222_2222, 0x4444_4444, 0x8888_8888]);
        assert_eq!(temper(0x55, 0, &tbl, 32), 0x55);
        // t = 0x00010101 ^ 0x1 = 0x00010100; t ^= t >> 8 -> 0x00010001; nibble 1.
        assert_eq!(temper(0x55, 0x0001_0101, &tbl, 32), 0x55 ^ tbl[1]);
    }

    #[test]
    fn temper_float_examples() {
        let tbl = [0x3f80_0000u32; 16];
        assert_eq!(temper_float(0, 0, &tbl), 0x3f80_0000);
        assert_eq!(f32::from_bits(temper_float(0, 0, &tbl)), 1.0);
        assert_eq!(temper_float(0xffff_ffff, 0, &tbl), 0x3fff_ffff);
        assert!((f32::from_bits(0x3fff_ffff) - 1.999_999_9).abs() < 1e-6);
    }

    #[test]
    fn seeding() {
        let rp = RecursionParams::new(13, 4, 2, 2, 1, [0; 4]).unwrap();
        let st = GeneratorState::seed(&rp, 0);
        assert_eq!(st.words()[1], 1);
        assert!(!st.is_zero(&rp));
        assert_eq!(GeneratorState::seed(&rp, 9), GeneratorState::seed(&rp, 9));

        let rp32 = RecursionParams::new(89, 32, 2, 13, 4, [0; 4]).unwrap();
        let st = GeneratorState::seed(&rp32, 1);
        assert_eq!(&st.words()[..2], &[1, 0x6c07_8966]);
    }

    #[test]
    fn zero_significant_state_is_forced_nonzero() {
        // w = 4, r = 3: only the MSB of x_0 is significant. Hunt for a seed
        // whose initializer output has all-zero significant bits elsewhere.
        let rp = RecursionParams::new(13, 4, 2, 2, 1, [0; 4]).unwrap();
        for s in 0..16 {
            assert!(!GeneratorState::seed(&rp, s).is_zero(&rp));
        }
    }

    #[test]
    fn state_bits_round_trip() {
        let rp = RecursionParams::new(19, 8, 2, 3, 1, [0; 4]).unwrap();
        let st = GeneratorState::seed(&rp, 77);
        let bits = st.to_bits(&rp);
        assert_eq!(bits.len(), 19);
        let back = GeneratorState::from_bits(&rp, &bits).unwrap();
        assert_eq!(back.window(&rp), st.window(&rp));
    }

    #[test]
    fn zero_state_stays_zero() {
        let rp = RecursionParams::new(89, 16, 3, 7, 2, [0x1230, 0x8000, 0x00f0, 0x7770]).unwrap();
        let st = GeneratorState::from_bits(&rp, &[false; 89]).unwrap();
        let mut g = Generator::from_state(rp, TemperingParams::identity(16), st).unwrap();
        assert!((0..1000).all(|_| g.next_raw() == 0));
    }

    #[test]
    fn float_modes_need_word32() {
        let rp = RecursionParams::new(13, 4, 2, 2, 1, [0; 4]).unwrap();
        let mut g = Generator::new(rp, TemperingParams::identity(4), 1).unwrap();
        assert_eq!(g.next_word(OutputMode::FloatClosedOpen12), Err(Error::FloatNeedsWord32));
        assert!(g.next_word(OutputMode::Uint).is_ok());
    }
}
