use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mtgp::{RecursionParams, TemperingParams};

pub const CSV_HEADER: &str = "id,mexp,wordsize,n,m,r,sh1,sh2,r0,r1,r2,r3,t0,t1,t2,t3,charpoly_sha1,nonzero_terms,delta";

const FIELDS: usize = 19;

/// One created parameter set with its certification data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRecord {
    pub id: u32,
    pub rp: RecursionParams,
    pub tp: TemperingParams,
    pub charpoly_sha1: String,
    pub nonzero_terms: usize,
    pub delta: usize,
}

impl ParamRecord {
    /// The CSV line, without a trailing newline.
    pub fn to_csv_line(&self) -> String {
        let rp = &self.rp;
        let mut s = format!(
            "{},{},{},{},{},{},{},{}",
            self.id,
            rp.mexp(),
            rp.word_bits(),
            rp.n(),
            rp.m(),
            rp.r(),
            rp.sh1(),
            rp.sh2()
        );
        for v in rp.rmat().iter().chain(self.tp.tmat()) {
            write!(s, ",{v:08x}").expect("writing to a String");
        }
        write!(s, ",{},{},{}", self.charpoly_sha1, self.nonzero_terms, self.delta).expect("writing to a String");
        s
    }

    /// Parse a data line; `line` is the 1-based line number used in errors.
    pub fn parse_line(text: &str, line: usize) -> Result<Self> {
        let err = |msg: String| Error::Parse { line, msg };
        let f: Vec<&str> = text.trim().split(',').map(str::trim).collect();
        if f.len() != FIELDS {
            return Err(err(format!("expected {FIELDS} fields, found {}", f.len())));
        }
        let dec = |i: usize| -> Result<u64> {
            f[i].parse().map_err(|_| err(format!("field {} ({}) is not a decimal integer: {:?}", i + 1, col(i), f[i])))
        };
        let hex = |i: usize| -> Result<u32> {
            if f[i].len() != 8 {
                return Err(err(format!("field {} ({}) must be 8 hex digits: {:?}", i + 1, col(i), f[i])));
            }
            u32::from_str_radix(f[i], 16)
                .map_err(|_| err(format!("field {} ({}) is not hex: {:?}", i + 1, col(i), f[i])))
        };
        let small = |i: usize| -> Result<u32> {
            u32::try_from(dec(i)?).map_err(|_| err(format!("field {} ({}) out of range", i + 1, col(i))))
        };

        let id = small(0)?;
        let (mexp, w, n, m, r, sh1, sh2) = (small(1)?, small(2)?, dec(3)?, dec(4)?, dec(5)?, small(6)?, small(7)?);
        let rmat = [hex(8)?, hex(9)?, hex(10)?, hex(11)?];
        let tmat = [hex(12)?, hex(13)?, hex(14)?, hex(15)?];
        let sha = f[16];
        if sha.len() != 40 || !sha.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return Err(err(format!("field 17 (charpoly_sha1) must be 40 lowercase hex digits: {sha:?}")));
        }
        let nonzero_terms = dec(17)? as usize;
        let delta = dec(18)? as usize;

        let rp = RecursionParams::new(mexp, w, m as usize, sh1, sh2, rmat).map_err(|e| err(e.to_string()))?;
        if rp.n() as u64 != n || u64::from(rp.r()) != r {
            return Err(err(format!("n/r ({n}/{r}) inconsistent with mexp {mexp}, w {w}")));
        }
        let tp = TemperingParams::new(w, tmat).map_err(|e| err(e.to_string()))?;
        Ok(Self { id, rp, tp, charpoly_sha1: sha.to_owned(), nonzero_terms, delta })
    }
}

fn col(i: usize) -> &'static str {
    CSV_HEADER.split(',').nth(i).unwrap_or("?")
}

/// Header plus one line per record.
pub fn write_records<'a>(records: impl IntoIterator<Item = &'a ParamRecord>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

/// Parse a file written by [`write_records`]; blank lines are skipped.
pub fn parse_records(text: &str) -> Result<Vec<ParamRecord>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((i, _)) => return Err(Error::Parse { line: i + 1, msg: "missing or wrong header line".into() }),
        None => return Err(Error::Parse { line: 1, msg: "empty file".into() }),
    }
    lines.map(|(i, l)| ParamRecord::parse_line(l, i + 1)).collect()
}
