//! Frobenius at good primes: characteristic polynomials `(a, b)`, the
//! explicit matrix on the `T`-torsion, and its conjugacy class in `GL₂(F_q)`.

mod charpoly;
mod classes;
mod torsion;

pub use charpoly::{
    charpoly_deg1, charpoly_search, charpoly_search_with, frob_identity_check, CharPoly,
    SearchConfig,
};
pub use classes::{classify_charpoly, conj_class, ConjClassKind, ConjClassLabel, Mat2};
pub use torsion::{torsion_frobenius_matrix, FrobMatrix, SplittingField};

use crate::algebra::PrimeIdeal;
use crate::algebra::format_apoly;
use crate::drinfeld::{has_good_reduction, Datum};
use crate::error::{Error, Result};

fn require_good(w: &Datum, prime: &PrimeIdeal) -> Result<()> {
    if has_good_reduction(w, prime) {
        Ok(())
    } else {
        Err(Error::BadReduction {
            prime: format_apoly(w.field(), prime.generator()),
        })
    }
}
