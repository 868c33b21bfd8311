//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mtgp_core::dc::{self, recertify, Created, SearchOptions};
use mtgp_core::equidist::{brute_force_kv, defects, kv_table_rank, EquidistReport, Side};
use mtgp_core::mtgp::{default_lanes, Generator, GeneratorState, OutputMode, TemperingParams, FLOAT_ONE_BITS};
use mtgp_core::parlane::{self, LaneConfig};
use mtgp_core::{smoke, Error};

// Pinned limits.
const PERIOD_RUNTIME: Duration = Duration::from_secs(10);
const ORACLE_RUNTIME: Duration = Duration::from_secs(60);
const LANE_RUNTIME: Duration = Duration::from_secs(60);
const DC_RUNTIME_TARGET: Duration = Duration::from_secs(30 * 60);
const DC_RUNTIME_CAP: Duration = Duration::from_secs(2 * 3600);
const LANE_OUTPUTS: usize = 1_000_000;
const FLOAT_OUTPUTS: usize = 1_000_000;
const SMOKE_OUTPUTS: usize = 1_000_000;
const P_RANGE: (f64, f64) = (1e-6, 1.0 - 1e-6);
const SEARCH_SEED: u64 = 1;
const LARGE_IDS: [u32; 2] = [1, 2];

/// Reference k(v) column of a p = 23209, w = 32 generator.
const REFERENCE_K: [usize; 32] = [
    23209, 11604, 7736, 5802, 4641, 3868, 3315, 2900, 2578, 2320, 2109, 1934, 1785, 1657, 1547, 1450, 1362, 1266,
    1181, 1137, 1043, 931, 930, 930, 727, 726, 725, 725, 725, 725, 725, 725,
];
/// d(v) column of the same table.
const REFERENCE_D: [usize; 32] = [
    0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 3, 23, 40, 23, 62, 123, 79, 37, 201, 166, 134, 103, 75, 48, 23, 0,
];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn run(&mut self, id: &str, title: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| outcome(false, "panicked"));
        let verdict = if res.ok { "PASS" } else { "FAIL" };
        println!("[{verdict}] criterion {id}: {title} ({}; {:.1?})", res.detail, start.elapsed());
        self.failures += usize::from(!res.ok);
    }
}

fn create(p: u32, w: u32, id: u32) -> Created {
    dc::create(p, w, id, SEARCH_SEED, &SearchOptions::default()).expect("search succeeds")
}

/// Orbit of the seed state returns at exactly `2^p - 1` and not at step 1.
fn full_period(c: &Created) -> (bool, String) {
    let rp = &c.record.rp;
    let p = rp.mexp();
    let start = GeneratorState::seed(rp, 1).to_bits(rp);
    let mut g = Generator::new(rp.clone(), TemperingParams::identity(rp.word_bits()), 1).unwrap();
    g.next_raw();
    let moved = g.state().to_bits(rp) != start;
    for _ in 1..(1u64 << p) - 1 {
        g.next_raw();
    }
    let back = g.state().to_bits(rp) == start;
    let nonzero = start.iter().any(|&b| b);
    (moved && back && nonzero, format!("p={p}: returns={back}, moves={moved}"))
}

fn main() -> ExitCode {
    let mut suite = Suite { failures: 0 };
    let small: Vec<Created> = [(13, 4), (17, 8), (19, 8)].iter().map(|&(p, w)| create(p, w, 0)).collect();

    suite.run("1", "full period 2^p - 1 for searched sets at p = 13, 17, 19", || {
        let mut ok = true;
        let mut notes = Vec::new();
        for c in &small {
            let t = Instant::now();
            let (good, note) = full_period(c);
            ok &= good && t.elapsed() < PERIOD_RUNTIME;
            notes.push(format!("{note} in {:.1?}", t.elapsed()));
        }
        outcome(ok, notes.join("; "))
    });

    let p13 = &small[0];
    suite.run("2", "rank k(v) equals full-period counting at p = 13, before and after tempering", || {
        let t = Instant::now();
        let rp = &p13.record.rp;
        let mut ok = true;
        let mut notes = Vec::new();
        for (label, tp) in [("identity", TemperingParams::identity(4)), ("searched", p13.record.tp.clone())] {
            let rank = kv_table_rank(rp, &tp, Side::Msb);
            let brute: Vec<usize> = (1..=4).map(|v| brute_force_kv(rp, &tp, v).unwrap()).collect();
            ok &= rank == brute;
            notes.push(format!("{label}: rank {rank:?} brute {brute:?}"));
        }
        outcome(ok && t.elapsed() < ORACLE_RUNTIME, notes.join("; "))
    });

    suite.run("3", "reference k(v) column at p = 23209 reproduces d(v), delta = 1141 and r(25) = 21.66", || {
        let rep = EquidistReport::from_kv(23209, REFERENCE_K.to_vec()).unwrap();
        let r25 = format!("{:.2}", rep.ratio(25));
        let ok = rep.dv == REFERENCE_D
            && (rep.dv[16], rep.dv[21], rep.dv[24]) == (3, 123, 201)
            && rep.delta == 1141
            && r25 == "21.66";
        outcome(ok, format!("d(17)={} d(22)={} d(25)={} delta={} r(25)={r25}", rep.dv[16], rep.dv[21], rep.dv[24], rep.delta))
    });

    // Large sets, shared by criteria 4 and 6 to 10.
    let t = Instant::now();
    let mut large: Vec<(Created, Duration)> = Vec::new();
    for id in LARGE_IDS {
        let s = Instant::now();
        let c = create(11213, 32, id);
        large.push((c, s.elapsed()));
    }
    println!("(searched {} parameter sets at p = 11213 in {:.1?})", large.len(), t.elapsed());

    suite.run("4", "256 lanes reproduce 10^6 sequential outputs at p = 11213; every lane count at p = 13", || {
        let t = Instant::now();
        let rec = &large[0].0.record;
        let lanes = default_lanes(rec.rp.n());
        let count = LANE_OUTPUTS.div_ceil(lanes) * lanes;
        let big = parlane::verify_equivalence(&rec.rp, &rec.tp, 4357, &LaneConfig::new(lanes), count).unwrap();
        let r13 = &p13.record;
        let mut counts = Vec::new();
        let mut n = 1;
        while n <= default_lanes(r13.rp.n()) {
            counts.push(n);
            n *= 2;
        }
        let small_ok = counts
            .iter()
            .all(|&n| parlane::verify_equivalence(&r13.rp, &r13.tp, 1, &LaneConfig::new(n), 8192).unwrap());
        let ok = lanes == 256 && big && small_ok && t.elapsed() < LANE_RUNTIME;
        outcome(ok, format!("{lanes} lanes x {count} outputs: {big}; p=13 lane counts {counts:?}: {small_ok}"))
    });

    suite.run("5", "N - M + 1 lanes are refused", || {
        let mut notes = Vec::new();
        let mut ok = true;
        for rec in [&large[0].0.record, &p13.record] {
            let bound = rec.rp.n() - rec.rp.m();
            let res = parlane::run_block(&rec.rp, &rec.tp, 1, &LaneConfig::new(bound + 1), bound + 1);
            ok &= matches!(res, Err(Error::ParallelismBound { lanes, bound: b }) if lanes == bound + 1 && b == bound);
            ok &= parlane::run_block(&rec.rp, &rec.tp, 1, &LaneConfig::new(bound), bound).is_ok();
            notes.push(format!("p={} N-M={bound}", rec.rp.mexp()));
        }
        outcome(ok, notes.join("; "))
    });

    suite.run("6", "two IDs at p = 11213 give certified records with distinct digests", || {
        let mut ok = true;
        let mut notes = Vec::new();
        for (c, took) in &large {
            let rec = &c.record;
            let fails = recertify(rec, true).unwrap();
            let good = fails.is_empty()
                && c.charpoly.degree() == Some(11213)
                && dc::embedded_id(rec.rp.rmat()) == rec.id
                && *took < DC_RUNTIME_CAP;
            ok &= good;
            let pace = if *took < DC_RUNTIME_TARGET { "within target" } else { "over target" };
            notes.push(format!("id {} delta {} sha1 {} in {:.1?} ({pace})", rec.id, rec.delta, &rec.charpoly_sha1[..12], took));
        }
        ok &= large[0].0.record.charpoly_sha1 != large[1].0.record.charpoly_sha1;
        outcome(ok, notes.join("; "))
    });

    suite.run("7", "float [1,2) and [0,1) invariants over 10^6 outputs", || {
        let rec = &large[0].0.record;
        let mut a = Generator::new(rec.rp.clone(), rec.tp.clone(), 5489).unwrap();
        let mut b = a.clone();
        let mut ok = true;
        for _ in 0..FLOAT_OUTPUTS {
            let bits = a.next_float12_bits().unwrap();
            let x = f32::from_bits(bits);
            ok &= (1.0..2.0).contains(&x) && bits >> 23 == FLOAT_ONE_BITS >> 23;
            ok &= b.next_f32_01().unwrap().to_bits() == (x - 1.0).to_bits();
        }
        outcome(ok, format!("{FLOAT_OUTPUTS} outputs, top 9 bits {:09b}", FLOAT_ONE_BITS >> 23))
    });

    suite.run("8", "k(v) <= floor(p/v) in every computed table", || {
        let mut tables: Vec<(usize, Vec<usize>)> = Vec::new();
        for c in &small {
            tables.push((c.record.rp.mexp() as usize, kv_table_rank(&c.record.rp, &c.record.tp, Side::Msb)));
            tables.push((c.record.rp.mexp() as usize, c.tempering.kv.clone()));
        }
        for (c, _) in &large {
            tables.push((11213, c.tempering.kv.clone()));
        }
        tables.push((23209, REFERENCE_K.to_vec()));
        let ok = tables
            .iter()
            .all(|(p, kv)| kv.iter().enumerate().all(|(i, &k)| k <= p / (i + 1)) && defects(kv, *p).is_ok());
        outcome(ok, format!("{} tables", tables.len()))
    });

    suite.run("9", "greedy tempering: chosen partial defect <= zero pattern at every chunk", || {
        let traces: Vec<_> = small.iter().chain(large.iter().map(|(c, _)| c)).map(|c| &c.tempering.trace).collect();
        let chunks: usize = traces.iter().map(|t| t.len()).sum();
        let ok = traces.iter().all(|t| !t.is_empty() && t.iter().all(|c| c.chosen_defect <= c.zero_defect));
        outcome(ok, format!("{chunks} chunks over {} searches", traces.len()))
    });

    suite.run("10", "smoke battery p-values in [1e-6, 1 - 1e-6] over 10^6 outputs per searched set", || {
        let mut ok = true;
        let mut notes = Vec::new();
        for (c, _) in &large {
            let rec = &c.record;
            let mut g = Generator::new(rec.rp.clone(), rec.tp.clone(), 1).unwrap();
            let mut words = vec![0u32; SMOKE_OUTPUTS];
            g.fill(OutputMode::Uint, &mut words).unwrap();
            for r in smoke::battery(&words, 32) {
                ok &= (P_RANGE.0..=P_RANGE.1).contains(&r.p_value);
                notes.push(format!("id {} {} p={:.4}", rec.id, r.name, r.p_value));
            }
        }
        outcome(ok, notes.join("; "))
    });

    if suite.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", suite.failures);
        ExitCode::FAILURE
    }
}
