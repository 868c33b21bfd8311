//! MTGP: Mersenne-prime-period F2-linear generators laid out for
//! block-parallel generation, with the tooling around them.
//!
//! * [`f2`]: GF(2) polynomials, Berlekamp-Massey, irreducibility, bit-matrix rank.
//! * [`mtgp`]: recursion/tempering parameters and the sequential generator.
//! * [`parlane`]: lockstep simulation of many lanes sharing one recursion,
//!   with shared-memory bank-conflict accounting.
//! * [`equidist`]: dimensions of equidistribution `k(v)` and defects.
//! * [`dc`]: the parameter-set creator (ID embedding, period search,
//!   tempering search, CSV records).
//! * [`smoke`]: a small statistical smoke battery.

pub mod dc;
pub mod equidist;
mod error;
pub mod f2;
pub mod mtgp;
pub mod parlane;
pub mod smoke;

pub use error::{Error, Result};
