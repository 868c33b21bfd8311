//! GF(2) substrate: packed bit sequences, polynomials, Berlekamp-Massey,
//! irreducibility testing and bit-matrix rank.

mod bitseq;
mod bm;
mod irreducible;
mod matrix;
mod poly;
pub(crate) mod words;

pub use bitseq::BitSeq;
pub use bm::{annihilates, minimal_polynomial};
pub use irreducible::{has_small_factor, is_irreducible};
pub use matrix::{EchelonBasis, F2Matrix};
pub use poly::{F2Poly, Modulus};
