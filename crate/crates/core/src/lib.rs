//! Exact-arithmetic computation of T-leaf data for Poisson structures defined
//! by quasitriangular r-matrices on semisimple Lie algebras.
//!
//! Everything is computed over the rationals: root systems and Chevalley
//! bases, Weyl group combinatorics, r-matrices on product algebras, the
//! orbit-intersection admissibility test, and the closed-form leaf tables for
//! the four series F, FF, Ft, FFt together with a concrete sl_m oracle that
//! cross-checks every closed form.

pub mod checks;
pub mod exactlin;
pub mod leaf_engine;
pub mod lie_core;
pub mod rmat;
pub mod series;
pub mod sl_oracle;
pub mod weyl;

pub use exactlin::{Matrix, Rational, Subspace};
pub use lie_core::{LieAlgebra, RootSystem};
pub use weyl::{WeylElement, WeylGroup};


