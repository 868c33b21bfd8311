//! Lockstep simulation of `n` lanes sharing one recursion.
//!
//! Per batch, lane `i` (1-based) of a block whose cursor is at `x_b` runs four
//! barrier-separated steps:
//!
//! 1. read `X[b+i-1]`
//! 2. read `X[b+i]`
//! 3. read `X[b+M+i-1]`, plus the tempering input `X[b+M+i-2]`
//! 4. look up the tables, write `x_(N+b+i-1)` to `X[b+N+i-1]`
//!
//! Indices are modulo `L`, the smallest power of two `>= 2N - M`. Reads of a
//! batch never see its own writes as long as `n <= N - M`.

use crate::error::{Error, Result};
use crate::mtgp::{
    recursion_step, temper, temper_float, tempering_nibble, Generator, GeneratorState, OutputMode, RecursionParams,
    TemperingParams,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaneConfig {
    pub n_lanes: usize,
    pub block_count: usize,
    pub warp_size: usize,
    pub banks: usize,
    /// Count lookup-table reads in [`BankReport`]; off by default since the
    /// tables live in conflict-free texture memory.
    pub include_tables: bool,
    pub mode: OutputMode,
}

impl LaneConfig {
    pub fn new(n_lanes: usize) -> Self {
        Self { n_lanes, block_count: 1, warp_size: 32, banks: 16, include_tables: false, mode: OutputMode::Uint }
    }

    fn validate(&self, rp: &RecursionParams) -> Result<()> {
        let bound = rp.n() - rp.m();
        if self.n_lanes == 0 {
            return Err(Error::LaneConfig("at least one lane is required".into()));
        }
        if self.n_lanes > bound {
            return Err(Error::ParallelismBound { lanes: self.n_lanes, bound });
        }
        if self.warp_size < 2 || !self.warp_size.is_multiple_of(2) || self.banks == 0 {
            return Err(Error::LaneConfig(format!("warp size {} / banks {}", self.warp_size, self.banks)));
        }
        if self.mode.requires_word32() && rp.word_bits() != 32 {
            return Err(Error::FloatNeedsWord32);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AccessKind {
    Read,
    Write,
    /// Lookup in a 16-entry table; the index is the table slot.
    Table,
}

/// One memory instruction executed by every lane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instr {
    pub kind: AccessKind,
    /// Buffer index (or table slot) per lane.
    pub index: Vec<u32>,
}

/// The memory instructions of one barrier-separated step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemStep {
    /// 1..=4.
    pub step: u8,
    pub instrs: Vec<Instr>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AccessTrace {
    pub steps: Vec<MemStep>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BankReport {
    pub total_accesses: usize,
    /// Half-warp instructions in which two lanes hit the same bank.
    pub conflict_events: usize,
    /// Largest number of lanes of one half-warp on one bank.
    pub max_conflict_degree: usize,
    pub half_warp_steps: usize,
}

impl std::fmt::Display for BankReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{{ accesses: {}, conflict_events: {}, max_degree: {} }}",
            self.total_accesses, self.conflict_events, self.max_conflict_degree
        )
    }
}

/// Group lanes in half-warps and count repeated banks per instruction.
pub fn count_bank_conflicts(trace: &AccessTrace, cfg: &LaneConfig) -> BankReport {
    let half = (cfg.warp_size / 2).max(1);
    let mut rep = BankReport::default();
    let mut hits = vec![0usize; cfg.banks];
    let instrs = trace.steps.iter().flat_map(|s| &s.instrs);
    for ins in instrs.filter(|i| cfg.include_tables || i.kind != AccessKind::Table) {
        rep.total_accesses += ins.index.len();
        for group in ins.index.chunks(half) {
            rep.half_warp_steps += 1;
            hits.fill(0);
            for &idx in group {
                hits[idx as usize % cfg.banks] += 1;
            }
            let deg = hits.iter().copied().max().unwrap_or(0);
            if deg >= 2 {
                rep.conflict_events += 1;
            }
            rep.max_conflict_degree = rep.max_conflict_degree.max(deg);
        }
    }
    rep
}

/// Smallest power of two `>= 2N - M`.
pub fn buffer_len(rp: &RecursionParams) -> usize {
    (2 * rp.n() - rp.m()).next_power_of_two()
}

/// One block: a shared buffer advanced `n_lanes` words per batch.
#[derive(Clone, Debug)]
pub struct Block {
    rp: RecursionParams,
    tp: TemperingParams,
    cfg: LaneConfig,
    buf: Vec<u32>,
    base: usize,
    batches: u64,
    /// Writes of this batch land only after the next batch has read.
    skip_barrier_at: Option<u64>,
    deferred: Vec<(usize, u32)>,
}

impl Block {
    pub fn new(rp: RecursionParams, tp: TemperingParams, seed: u32, cfg: LaneConfig) -> Result<Self> {
        cfg.validate(&rp)?;
        if rp.word_bits() != tp.word_bits() {
            return Err(Error::InvalidParams("recursion and tempering word sizes differ".into()));
        }
        let init = GeneratorState::seed(&rp, seed);
        let mut buf = vec![0u32; buffer_len(&rp)];
        buf[..rp.n()].copy_from_slice(init.words());
        Ok(Self { rp, tp, cfg, buf, base: 0, batches: 0, skip_barrier_at: None, deferred: Vec::new() })
    }

    /// Test hook: drop the barrier after the write step of batch `batch`.
    pub fn skip_barrier_after(&mut self, batch: u64) {
        self.skip_barrier_at = Some(batch);
    }

    fn format(&self, x: u32, aux: u32) -> u32 {
        let w = self.rp.word_bits();
        match self.cfg.mode {
            OutputMode::Uint => temper(x, aux, self.tp.tmptbl(), w),
            mode => {
                let tbl = self.tp.sngltbl().expect("validated word size");
                let bits = temper_float(x, aux, tbl);
                if mode == OutputMode::FloatClosedOpen01 {
                    (f32::from_bits(bits) - 1.0).to_bits()
                } else {
                    bits
                }
            }
        }
    }

    /// Run one batch, appending `n_lanes` outputs in sequence order.
    pub fn batch(&mut self, out: &mut Vec<u32>, trace: Option<&mut AccessTrace>) {
        let (n, m, nn) = (self.cfg.n_lanes, self.rp.m(), self.rp.n());
        let l = self.buf.len();
        let at = |k: usize| (self.base + k) & (l - 1);
        let lanes = 1..=n;

        let i1: Vec<usize> = lanes.clone().map(|i| at(i - 1)).collect();
        let i2: Vec<usize> = lanes.clone().map(&at).collect();
        let i3: Vec<usize> = lanes.clone().map(|i| at(m + i - 1)).collect();
        let i3a: Vec<usize> = lanes.clone().map(|i| at(m + i - 2)).collect();
        let iw: Vec<usize> = lanes.map(|i| at(nn + i - 1)).collect();

        // Steps 1-3: register loads.
        let r1: Vec<u32> = i1.iter().map(|&k| self.buf[k]).collect();
        let r2: Vec<u32> = i2.iter().map(|&k| self.buf[k]).collect();
        let r3: Vec<u32> = i3.iter().map(|&k| self.buf[k]).collect();
        let r3a: Vec<u32> = i3a.iter().map(|&k| self.buf[k]).collect();

        // A skipped barrier from the previous batch lands only now.
        for (k, x) in self.deferred.drain(..) {
            self.buf[k] = x;
        }

        // Step 4.
        let w = self.rp.word_bits();
        let mut xs = Vec::with_capacity(n);
        for lane in 0..n {
            xs.push(recursion_step(r1[lane], r2[lane], r3[lane], &self.rp));
        }
        if self.skip_barrier_at == Some(self.batches) {
            self.deferred.extend(iw.iter().copied().zip(xs.iter().copied()));
        } else {
            for (&k, &x) in iw.iter().zip(&xs) {
                self.buf[k] = x;
            }
        }
        out.extend(xs.iter().zip(&r3a).map(|(&x, &aux)| self.format(x, aux)));

        if let Some(t) = trace {
            let idx = |v: &[usize]| v.iter().map(|&k| k as u32).collect::<Vec<u32>>();
            let rec_slots = r1
                .iter()
                .zip(&r2)
                .zip(&r3)
                .map(|((&a, &b), &c)| {
                    let mut tt = b ^ (a & self.rp.mask());
                    tt ^= tt << self.rp.sh1();
                    (tt ^ (c >> self.rp.sh2())) & 0xf
                })
                .collect();
            let tmp_slots = r3a.iter().map(|&a| tempering_nibble(a, w) as u32).collect();
            let read = |index| Instr { kind: AccessKind::Read, index };
            t.steps.push(MemStep { step: 1, instrs: vec![read(idx(&i1))] });
            t.steps.push(MemStep { step: 2, instrs: vec![read(idx(&i2))] });
            t.steps.push(MemStep { step: 3, instrs: vec![read(idx(&i3)), read(idx(&i3a))] });
            t.steps.push(MemStep {
                step: 4,
                instrs: vec![
                    Instr { kind: AccessKind::Table, index: rec_slots },
                    Instr { kind: AccessKind::Table, index: tmp_slots },
                    Instr { kind: AccessKind::Write, index: idx(&iw) },
                ],
            });
        }

        self.base = at(n);
        self.batches += 1;
    }
}

fn check_count(cfg: &LaneConfig, count: usize) -> Result<()> {
    if !count.is_multiple_of(cfg.n_lanes) {
        return Err(Error::LaneConfig(format!("count {count} is not a multiple of {} lanes", cfg.n_lanes)));
    }
    Ok(())
}

/// `count` outputs of one block, with its access trace.
pub fn run_block(
    rp: &RecursionParams,
    tp: &TemperingParams,
    seed: u32,
    cfg: &LaneConfig,
    count: usize,
) -> Result<(Vec<u32>, AccessTrace)> {
    check_count(cfg, count)?;
    let mut block = Block::new(rp.clone(), tp.clone(), seed, cfg.clone())?;
    let mut out = Vec::with_capacity(count);
    let mut trace = AccessTrace::default();
    for _ in 0..count / cfg.n_lanes {
        block.batch(&mut out, Some(&mut trace));
    }
    Ok((out, trace))
}

/// Like [`run_block`] without recording a trace.
pub fn run_block_outputs(
    rp: &RecursionParams,
    tp: &TemperingParams,
    seed: u32,
    cfg: &LaneConfig,
    count: usize,
) -> Result<Vec<u32>> {
    check_count(cfg, count)?;
    let mut block = Block::new(rp.clone(), tp.clone(), seed, cfg.clone())?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count / cfg.n_lanes {
        block.batch(&mut out, None);
    }
    Ok(out)
}

/// `count` outputs of the sequential generator in `mode`.
pub fn sequential(rp: &RecursionParams, tp: &TemperingParams, seed: u32, mode: OutputMode, count: usize) -> Result<Vec<u32>> {
    let mut g = Generator::new(rp.clone(), tp.clone(), seed)?;
    let mut out = vec![0u32; count];
    g.fill(mode, &mut out)?;
    Ok(out)
}

/// Do the lanes reproduce the sequential generator for `count` outputs?
pub fn verify_equivalence(
    rp: &RecursionParams,
    tp: &TemperingParams,
    seed: u32,
    cfg: &LaneConfig,
    count: usize,
) -> Result<bool> {
    let par = run_block_outputs(rp, tp, seed, cfg, count)?;
    Ok(par == sequential(rp, tp, seed, cfg.mode, count)?)
}

/// Several blocks advanced batch by batch in round-robin order.
pub fn run_interleaved(
    blocks: &[(RecursionParams, TemperingParams, u32)],
    cfg: &LaneConfig,
    count: usize,
) -> Result<Vec<Vec<u32>>> {
    check_count(cfg, count)?;
    let mut sims = blocks
        .iter()
        .map(|(rp, tp, seed)| Block::new(rp.clone(), tp.clone(), *seed, cfg.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut outs = vec![Vec::with_capacity(count); sims.len()];
    for _ in 0..count / cfg.n_lanes {
        for (b, out) in sims.iter_mut().zip(&mut outs) {
            b.batch(out, None);
        }
    }
    Ok(outs)
}
