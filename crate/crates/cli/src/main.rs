use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mtgp_core::dc::{self, parse_records, write_records, ParamRecord, SearchOptions, SearchRng};
use mtgp_core::equidist::{EquidistReport, Method, Side, RANK_BUDGET};
use mtgp_core::mtgp::{default_lanes, derive_sizes, Generator, OutputMode, TemperingParams};
use mtgp_core::parlane::{self, LaneConfig};
use mtgp_core::{smoke, Error};

#[derive(Parser)]
#[command(name = "mtgp", version, about = "MTGP generators: parameter creation, generation, analysis, lane simulation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search parameter sets for one or more IDs and write them as CSV.
    Dc(DcArgs),
    /// Generate numbers from a parameter file.
    Gen(GenArgs),
    /// Print k(v), d(v), r(v) and the total defect.
    Kv(KvArgs),
    /// Run the lane simulator against the sequential generator.
    Sim(SimArgs),
    /// Re-certify a parameter file and run the smoke battery.
    Check(CheckArgs),
}

#[derive(Args)]
struct DcArgs {
    #[arg(long)]
    mexp: u32,
    #[arg(long, default_value_t = 32)]
    wordsize: u32,
    /// A single ID or an inclusive range `a..b`.
    #[arg(long, default_value = "0")]
    id: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_candidates: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Uint,
    Float12,
    Float01,
}

impl From<ModeArg> for OutputMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Uint => OutputMode::Uint,
            ModeArg::Float12 => OutputMode::FloatClosedOpen12,
            ModeArg::Float01 => OutputMode::FloatClosedOpen01,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WordFormat {
    Hex,
    Binary,
}

#[derive(Args)]
struct RecordSel {
    #[arg(long)]
    param_file: PathBuf,
    /// Use the record with this ID (default: the first record).
    #[arg(long)]
    record_id: Option<u32>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    sel: RecordSel,
    #[arg(long, default_value_t = 1)]
    seed: u32,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long, value_enum, default_value = "uint")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "hex")]
    format: WordFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rank,
    Lattice,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Msb,
    Lsb,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Table,
    Csv,
}

#[derive(Args)]
struct KvArgs {
    #[command(flatten)]
    sel: RecordSel,
    #[arg(long, value_enum, default_value = "rank")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "msb")]
    side: SideArg,
    #[arg(long, value_enum, default_value = "table")]
    format: TableFormat,
    /// Allow the rank method above its exponent budget.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    mexp: Option<u32>,
    #[arg(long)]
    wordsize: Option<u32>,
    /// Lanes per block (default: largest power of 2 <= N-2).
    #[arg(long)]
    lanes: Option<usize>,
    #[arg(long, default_value_t = 1)]
    blocks: usize,
    /// Outputs per block, rounded up to a multiple of the lane count.
    #[arg(long, default_value_t = 100_000)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    report_conflicts: bool,
    /// Parameter sets to simulate (used cyclically across blocks). Without
    /// it, recursion parameters are searched on the fly.
    #[arg(long)]
    param_file: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    param_file: PathBuf,
    /// Outputs per record for the smoke battery.
    #[arg(long, default_value_t = 1_000_000)]
    smoke_count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u32,
    /// Recompute the total defect only up to this exponent.
    #[arg(long, default_value_t = RANK_BUDGET)]
    delta_max_mexp: u32,
}

/// Outcome other than success.
enum Fail {
    Usage(String),
    Check(String),
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        let usage = e.downcast_ref::<Error>().is_some_and(|c| {
            matches!(
                c,
                Error::Unsupported(_)
                    | Error::DegenerateLayout { .. }
                    | Error::ParallelismBound { .. }
                    | Error::LaneConfig(_)
                    | Error::FloatNeedsWord32
            )
        });
        let msg = format!("{e:#}");
        if usage {
            Fail::Usage(msg)
        } else {
            Fail::Check(msg)
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type CmdResult = std::result::Result<(), Fail>;

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_ids(s: &str) -> anyhow::Result<Vec<u32>> {
    let ids = match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u32, u32) = (a.trim().parse()?, b.trim().parse()?);
            if a > b {
                bail!("empty ID range {s}");
            }
            (a..=b).collect()
        }
        None => vec![s.trim().parse()?],
    };
    Ok(ids)
}

fn cmd_dc(a: &DcArgs) -> CmdResult {
    derive_sizes(a.mexp, a.wordsize)?;
    let ids = parse_ids(&a.id).map_err(|e| Fail::Usage(format!("--id: {e}")))?;
    let opts = SearchOptions { max_candidates: a.max_candidates, ..SearchOptions::default() };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(ids.len());
    let results: Vec<mtgp_core::Result<ParamRecord>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let (ids, opts) = (&ids, &opts);
                s.spawn(move || {
                    ids.iter()
                        .enumerate()
                        .filter(|(i, _)| i % threads == t)
                        .map(|(i, &id)| {
                            let start = Instant::now();
                            let r = dc::create(a.mexp, a.wordsize, id, a.seed, opts).map(|c| c.record);
                            if let Ok(rec) = &r {
                                eprintln!("id {id}: delta {} in {:.1?}", rec.delta, start.elapsed());
                            }
                            (i, r)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<_> = handles.into_iter().flat_map(|h| h.join().expect("search thread panicked")).collect();
        all.sort_by_key(|(i, _)| *i);
        all.into_iter().map(|(_, r)| r).collect()
    });
    let records = results.into_iter().collect::<mtgp_core::Result<Vec<_>>>()?;
    let mut out = output(a.out.as_deref())?;
    out.write_all(write_records(&records).as_bytes()).context("writing records")?;
    out.flush().context("writing records")?;
    Ok(())
}

fn load_records(path: &Path) -> anyhow::Result<Vec<ParamRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let recs = parse_records(&text).with_context(|| format!("parsing {}", path.display()))?;
    if recs.is_empty() {
        bail!("{} contains no records", path.display());
    }
    Ok(recs)
}

fn select(sel: &RecordSel) -> anyhow::Result<ParamRecord> {
    let recs = load_records(&sel.param_file)?;
    match sel.record_id {
        None => Ok(recs.into_iter().next().expect("nonempty")),
        Some(id) => recs.into_iter().find(|r| r.id == id).with_context(|| format!("no record with id {id}")),
    }
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let rec = select(&a.sel)?;
    let mode = OutputMode::from(a.mode);
    if mode.requires_word32() && rec.rp.word_bits() != 32 {
        return Err(Error::FloatNeedsWord32.into());
    }
    let mut g = Generator::new(rec.rp, rec.tp, a.seed)?;
    let mut out = output(a.out.as_deref())?;
    let start = Instant::now();
    let mut buf = vec![0u32; 1 << 16];
    let mut left = a.count;
    while left > 0 {
        let k = left.min(buf.len() as u64) as usize;
        g.fill(mode, &mut buf[..k])?;
        match a.format {
            WordFormat::Binary => {
                let bytes: Vec<u8> = buf[..k].iter().flat_map(|x| x.to_le_bytes()).collect();
                out.write_all(&bytes)
            }
            WordFormat::Hex => buf[..k].iter().try_for_each(|x| writeln!(out, "{x:08x}")),
        }
        .context("writing output")?;
        left -= k as u64;
    }
    out.flush().context("writing output")?;
    let secs = start.elapsed().as_secs_f64();
    eprintln!("generated {} words in {:.3} s ({:.1} Mwords/s)", a.count, secs, a.count as f64 / secs.max(1e-9) / 1e6);
    Ok(())
}

fn cmd_kv(a: &KvArgs) -> CmdResult {
    let rec = select(&a.sel)?;
    let method = match a.method {
        MethodArg::Rank => Method::Rank,
        MethodArg::Lattice => Method::Lattice,
    };
    if matches!(method, Method::Rank) && rec.rp.mexp() > RANK_BUDGET && !a.allow_large {
        return Err(Fail::Usage(format!(
            "p = {} exceeds the rank-method budget {RANK_BUDGET}; pass --allow-large or use --method lattice",
            rec.rp.mexp()
        )));
    }
    let side = match a.side {
        SideArg::Msb => Side::Msb,
        SideArg::Lsb => Side::Lsb,
    };
    let rep = EquidistReport::compute(&rec.rp, &rec.tp, side, method)?;
    print!(
        "{}",
        match a.format {
            TableFormat::Table => rep.to_table(),
            TableFormat::Csv => rep.to_csv(),
        }
    );
    Ok(())
}

fn cmd_sim(a: &SimArgs) -> CmdResult {
    let sets: Vec<(mtgp_core::mtgp::RecursionParams, TemperingParams)> = match &a.param_file {
        Some(path) => {
            let recs = load_records(path)?;
            for r in &recs {
                if a.mexp.is_some_and(|p| p != r.rp.mexp()) || a.wordsize.is_some_and(|w| w != r.rp.word_bits()) {
                    return Err(Fail::Usage("--mexp/--wordsize disagree with the parameter file".into()));
                }
            }
            recs.into_iter().map(|r| (r.rp, r.tp)).collect()
        }
        None => {
            let p = a.mexp.ok_or_else(|| Fail::Usage("--mexp or --param-file is required".into()))?;
            let w = a.wordsize.unwrap_or(32);
            derive_sizes(p, w)?;
            let opts = SearchOptions::default();
            let s = dc::search_recursion_params(p, w, 0, &mut SearchRng::new(a.seed, 0), &opts)?;
            vec![(s.params, TemperingParams::identity(w))]
        }
    };
    let rp0 = &sets[0].0;
    let lanes = a.lanes.unwrap_or_else(|| default_lanes(rp0.n()));
    let cfg = LaneConfig { block_count: a.blocks, ..LaneConfig::new(lanes) };
    let count = a.count.div_ceil(lanes).max(1) * lanes;
    let blocks: Vec<_> = (0..a.blocks.max(1))
        .map(|b| {
            let (rp, tp) = &sets[b % sets.len()];
            (rp.clone(), tp.clone(), a.seed as u32 ^ b as u32)
        })
        .collect();
    let outs = parlane::run_interleaved(&blocks, &cfg, count)?;
    let mut ok = true;
    for ((rp, tp, seed), out) in blocks.iter().zip(&outs) {
        ok &= *out == parlane::sequential(rp, tp, *seed, cfg.mode, count)?;
    }
    println!(
        "{}: {} block(s) x {count} outputs, {lanes} lanes, N = {}, M = {}",
        if ok { "PASS" } else { "FAIL" },
        blocks.len(),
        rp0.n(),
        rp0.m()
    );
    if a.report_conflicts {
        let (rp, tp, seed) = &blocks[0];
        let (_, trace) = parlane::run_block(rp, tp, *seed, &cfg, lanes * 64)?;
        println!("{}", parlane::count_bank_conflicts(&trace, &cfg));
    }
    if ok {
        Ok(())
    } else {
        Err(Fail::Check("parallel output differs from sequential output".into()))
    }
}

fn cmd_check(a: &CheckArgs) -> CmdResult {
    let recs = load_records(&a.param_file)?;
    let mut failed = false;
    for rec in &recs {
        let recompute = rec.rp.mexp() <= a.delta_max_mexp;
        let fails = dc::recertify(rec, recompute)?;
        for f in &fails {
            println!("FAIL id {} {}: {}", rec.id, f.field, f.detail);
        }
        failed |= !fails.is_empty();
        if smoke::period_covers(rec.rp.mexp(), a.smoke_count) {
            let mut g = Generator::new(rec.rp.clone(), rec.tp.clone(), a.seed)?;
            let mut words = vec![0u32; a.smoke_count];
            g.fill(OutputMode::Uint, &mut words)?;
            for r in smoke::battery(&words, rec.rp.word_bits()) {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                println!("{verdict} id {} {}: statistic {:.4}, p = {:.6}", rec.id, r.name, r.statistic, r.p_value);
                failed |= !r.passed();
            }
        } else {
            println!("SKIP id {} smoke battery: period 2^{} - 1 is shorter than the sample", rec.id, rec.rp.mexp());
        }
        if fails.is_empty() {
            println!("PASS id {} certified (p = {}, delta = {})", rec.id, rec.rp.mexp(), rec.delta);
        }
    }
    if failed {
        Err(Fail::Check("one or more checks failed".into()))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Dc(a) => cmd_dc(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Kv(a) => cmd_kv(a),
        Cmd::Sim(a) => cmd_sim(a),
        Cmd::Check(a) => cmd_check(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
