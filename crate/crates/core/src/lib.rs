//! Minimal generating systems of covariants of binary forms.
//!
//! Covariants are handled through their leading coefficients (semi-invariants,
//! the kernel of `D1`), stored in Cayley coordinates and lifted back with
//! Roberts' reconstruction. New generators are found degree by degree as
//! semitransvectants `[t, w]^r` that are independent of the products of the
//! generators already found.

pub mod covariant;
pub mod enumerative;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod search;
pub mod weitzenbock;
pub mod zform;

pub use covariant::{
    kappa, kappa_inv, order_of_semitransvectant, semitransvectant, semitransvectant_fast,
    transvectant, Covariant, FastPathGate, SemiInvariant,
};
pub use enumerative::{dim_covariants, gaussian_binomial, poincare_sigma, DimensionRow, UniPoly};
pub use error::{Error, Result};
pub use poly::{Grade, Grading, Monomial, Poly, Rational, VarKind, VarSet};
pub use search::{run_search, Mode, SearchConfig, SearchState};
pub use weitzenbock::{
    cayley_z, d1, d2, d2_images_in_z, is_semi_invariant, nilpotency_order, Derivation,
};
pub use zform::{x_to_z, z_to_x, Laurent, ZForm};
