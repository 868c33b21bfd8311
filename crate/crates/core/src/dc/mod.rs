//! Parameter-set creator.
//!
//! For a requested 32-bit ID the creator embeds the ID into the recursion
//! matrix `R`, searches random completions until the characteristic polynomial
//! has degree `p` and is irreducible (hence primitive, `p` being a Mersenne
//! exponent), then greedily chooses the tempering matrix `T` to minimize the
//! dimension defects. The result is a [`ParamRecord`], serialized as CSV.

mod record;
mod search;
mod tempering;

pub use record::{parse_records, write_records, ParamRecord, CSV_HEADER};
pub use search::{
    check_r_condition, embed_id, embedded_id, middle_range, search_recursion_params, shifts_for, RecursionSearch,
    SearchOptions, SearchRng,
};
pub use tempering::{search_tempering, ChunkChoice, Phase, TemperingSearch};

use sha1::{Digest, Sha1};

use crate::equidist::{lattice, Side};
use crate::error::{Error, Result};
use crate::f2::{is_irreducible, F2Poly};
use crate::mtgp::{RecursionParams, TemperingParams};

/// Characteristic polynomial of the recursion, probed by Berlekamp-Massey.
pub fn char_poly(rp: &RecursionParams) -> F2Poly {
    crate::mtgp::char_poly(rp)
}

/// SHA-1 of the coefficient bytes (bit 0 of byte 0 = coefficient of `x^0`),
/// as 40 lowercase hex digits.
pub fn sha1_digest(f: &F2Poly) -> String {
    Sha1::digest(f.to_le_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything produced for one ID.
#[derive(Clone, Debug)]
pub struct Created {
    pub record: ParamRecord,
    pub charpoly: F2Poly,
    pub recursion: RecursionSearch,
    pub tempering: TemperingSearch,
}

/// Full pipeline: recursion search, tempering search, record.
pub fn create(mexp: u32, word_bits: u32, id: u32, seed: u64, opts: &SearchOptions) -> Result<Created> {
    let mut rng = SearchRng::new(seed, id);
    let recursion = search_recursion_params(mexp, word_bits, id, &mut rng, opts)?;
    let tempering = search_tempering(&recursion.params, &recursion.charpoly)?;
    let record = ParamRecord {
        id,
        rp: recursion.params.clone(),
        tp: tempering.params.clone(),
        charpoly_sha1: sha1_digest(&recursion.charpoly),
        nonzero_terms: recursion.charpoly.term_count(),
        delta: tempering.delta,
    };
    Ok(Created { record, charpoly: recursion.charpoly.clone(), recursion, tempering })
}

/// A field of a record that failed re-certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub field: &'static str,
    pub detail: String,
}

/// Total defect of the MSB-side `k(v)` table.
pub fn total_defect(rp: &RecursionParams, tp: &TemperingParams, charpoly: &F2Poly) -> Result<usize> {
    let kv = lattice::kv_table_with_poly(rp, tp, Side::Msb, charpoly)?;
    Ok(crate::equidist::defects(&kv, rp.mexp() as usize)?.1)
}

/// Recompute the characteristic polynomial and every derived field.
pub fn recertify(rec: &ParamRecord, recompute_delta: bool) -> Result<Vec<CheckFailure>> {
    let mut fails = Vec::new();
    let f = char_poly(&rec.rp);
    let p = rec.rp.mexp() as usize;
    if f.degree() != Some(p) {
        fails.push(CheckFailure { field: "charpoly_degree", detail: format!("degree {:?}, expected {p}", f.degree()) });
    } else if !is_irreducible(&f)? {
        fails.push(CheckFailure { field: "charpoly_irreducible", detail: "characteristic polynomial is reducible".into() });
    }
    let digest = sha1_digest(&f);
    if digest != rec.charpoly_sha1 {
        fails.push(CheckFailure { field: "charpoly_sha1", detail: format!("recorded {}, computed {digest}", rec.charpoly_sha1) });
    }
    if f.term_count() != rec.nonzero_terms {
        fails.push(CheckFailure {
            field: "nonzero_terms",
            detail: format!("recorded {}, computed {}", rec.nonzero_terms, f.term_count()),
        });
    }
    if recompute_delta && fails.is_empty() {
        let delta = total_defect(&rec.rp, &rec.tp, &f)?;
        if delta != rec.delta {
            fails.push(CheckFailure { field: "delta", detail: format!("recorded {}, computed {delta}", rec.delta) });
        }
    }
    Ok(fails)
}

impl From<CheckFailure> for Error {
    fn from(c: CheckFailure) -> Self {
        Error::InvalidParams(format!("{}: {}", c.field, c.detail))
    }
}
