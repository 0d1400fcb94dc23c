//! Fixtures shared by the benchmarks.

use graphcalc_core::kontsevich::{hermitian_algebra, KontsevichSpectrum};
use graphcalc_core::scalar::int;
use graphcalc_core::SymAlgebra;

/// Cyclic algebra of 2×2 Hermitian matrices with `Λ = diag(1, 2)` and
/// trace tensors up to `max_valence`.
pub fn matrix_algebra(max_valence: usize) -> SymAlgebra {
    let spectrum = KontsevichSpectrum::new(vec![int(1), int(2)]).expect("positive spectrum");
    hermitian_algebra(&spectrum, max_valence).expect("valid algebra")
}
