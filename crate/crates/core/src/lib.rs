//! Graphical calculus for cyclic and symmetric algebras.
//!
//! Closed and open graphs (ribbon or ordinary) are evaluated against an
//! algebra `(V, g, T_1, T_2, ...)` by contracting one vertex tensor per
//! vertex against one Casimir element per edge. On top of that sit the
//! Feynman expansion of Gaussian integrals as exact graph sums with
//! `1/|Aut Γ|` weights, and the 't Hooft-Kontsevich matrix model.
//!
//! Every scalar is an exact [`Rational`]; the only floating point in the
//! crate is the Gauss-Hermite quadrature used as an independent check of
//! the Gaussian moments.

pub mod algebra;
pub mod check;
pub mod enumerate;
pub mod error;
pub mod evaluate;
pub mod expansion;
pub mod graph;
pub mod kontsevich;
pub mod scalar;
pub mod series;

pub use algebra::{Kind, Metric, SymAlgebra, Tensor, TensorKey};
pub use enumerate::{Catalog, CatalogEntry, Pairing, ValenceProfile, VertexSort};
pub use error::{Error, Result};
pub use evaluate::ContractionSchedule;
pub use expansion::{ExpansionMode, ExpansionRequest};
pub use graph::{Decoration, GraphType, Mode, OrdinaryGraph, RibbonGraph};
pub use kontsevich::KontsevichSpectrum;
pub use scalar::Rational;
pub use series::MultiSeries;
