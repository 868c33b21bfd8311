use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mtgp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtgp")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mtgp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn create(path: &Path, mexp: &str, w: &str, ids: &str) {
    let o = mtgp(&["dc", "--mexp", mexp, "--wordsize", w, "--id", ids, "--seed", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn dc_then_check_passes() {
    let f = scratch("p13.csv");
    create(&f, "13", "4", "0");
    let text = std::fs::read_to_string(&f).unwrap();
    assert_eq!(text.lines().count(), 2);
    let o = mtgp(&["check", "--param-file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("certified"));
}

#[test]
fn dc_id_range_gives_distinct_digests() {
    let f = scratch("p89.csv");
    create(&f, "89", "16", "0..15");
    let text = std::fs::read_to_string(&f).unwrap();
    let digests: std::collections::HashSet<_> = text.lines().skip(1).map(|l| l.split(',').nth(16).unwrap()).collect();
    assert_eq!(digests.len(), 16);
    let o = mtgp(&["check", "--param-file", f.to_str().unwrap(), "--smoke-count", "200000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn flipped_digest_fails_check_naming_the_field() {
    let f = scratch("flip.csv");
    create(&f, "13", "4", "0");
    let text = std::fs::read_to_string(&f).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let mut fields: Vec<String> = lines[1].split(',').map(str::to_owned).collect();
    let first = if fields[16].starts_with('0') { "1" } else { "0" };
    fields[16].replace_range(0..1, first);
    lines[1] = fields.join(",");
    std::fs::write(&f, lines.join("\n")).unwrap();
    let o = mtgp(&["check", "--param-file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("charpoly_sha1"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mtgp(&["dc", "--mexp", "14", "--wordsize", "4"]).status.code(), Some(2));
    assert_eq!(mtgp(&["dc"]).status.code(), Some(2));
    let o = mtgp(&["sim", "--mexp", "13", "--wordsize", "4", "--lanes", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N-M = 2"));
}

#[test]
fn gen_is_deterministic_and_float_mode_is_in_range() {
    let f = scratch("gen.csv");
    create(&f, "89", "32", "0");
    let p = f.to_str().unwrap();
    let a = mtgp(&["gen", "--param-file", p, "--count", "1000", "--format", "binary", "--seed", "9"]);
    let b = mtgp(&["gen", "--param-file", p, "--count", "1000", "--format", "binary", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout.len(), 4000);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("words/s"));

    let o = mtgp(&["gen", "--param-file", p, "--count", "5000", "--mode", "float12"]);
    for line in stdout(&o).lines() {
        let x = f32::from_bits(u32::from_str_radix(line, 16).unwrap());
        assert!((1.0..2.0).contains(&x));
    }
    assert_eq!(mtgp(&["gen", "--param-file", p, "--count", "0"]).status.code(), Some(2));
    assert_ne!(mtgp(&["gen", "--param-file", "/nonexistent.csv", "--count", "5"]).status.code(), Some(0));
}

#[test]
fn kv_table_and_budget() {
    let f = scratch("kv.csv");
    create(&f, "13", "4", "0");
    let o = mtgp(&["kv", "--param-file", f.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("delta = "));
    let csv = stdout(&mtgp(&["kv", "--param-file", f.to_str().unwrap(), "--format", "csv", "--method", "lattice"]));
    let d: usize = csv.lines().skip(1).take(4).map(|l| l.split(',').nth(2).unwrap().parse::<usize>().unwrap()).sum();
    let delta: usize = csv.lines().find(|l| l.starts_with("delta,")).unwrap()[6..].parse().unwrap();
    assert_eq!(d, delta);

    // A record above the rank budget is refused without the override.
    let big = scratch("big.csv");
    let line = format!(
        "{}\n0,11213,32,351,47,19,13,4,00000000,00000000,00000000,00000000,00000000,00000000,00000000,00000000,{},3,0\n",
        mtgp_header(),
        "0".repeat(40)
    );
    std::fs::write(&big, line).unwrap();
    let o = mtgp(&["kv", "--param-file", big.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

fn mtgp_header() -> &'static str {
    "id,mexp,wordsize,n,m,r,sh1,sh2,r0,r1,r2,r3,t0,t1,t2,t3,charpoly_sha1,nonzero_terms,delta"
}

#[test]
fn sim_reports_pass_and_conflicts() {
    let o = mtgp(&["sim", "--mexp", "89", "--wordsize", "16", "--count", "2000", "--blocks", "3", "--report-conflicts"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("PASS"));
    assert!(out.contains("conflict_events: 0"));
}
