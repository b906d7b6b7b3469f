//! Quasi-geodesics on the Stiefel manifold.
//!
//! Two curve families connect a pair of orthonormal frames `U, Ũ`:
//!
//! * [`EconQuasiGeodesic`]: the Grassmann geodesic between the spanned
//!   subspaces lifted to the Stiefel manifold and combined with a rotation
//!   `expm(tA)` of the basis. It needs `p×p` matrix functions only, and is the
//!   curve of the retraction [`retraction_rs`].
//! * [`ShortQuasiGeodesic`]: a curve `[U Q] expm(tG) [I; 0]` whose `2p×2p`
//!   generator is corrected with a truncated Baker-Campbell-Hausdorff
//!   expansion so that its lower-right block nearly vanishes, which puts it
//!   much closer to the Riemannian geodesic.
//!
//! [`oracle`] holds the independent checks: the full `n×n` representation,
//! finite-difference covariant derivatives and a shooting logarithm.

pub mod error;
pub mod matfunc;
pub mod matio;
pub mod oracle;
pub mod quasigeo;
pub mod rng;
pub mod stiefel;
pub mod tol;

pub use error::{Error, Result};
pub use matfunc::{SkewSymmetricMatrix, SpecialOrthogonalMatrix};
pub use quasigeo::{
    bch_c1, c_residual, econ_qg_connect, retraction_rs, short_qg_connect, BchFactors,
    EconQuasiGeodesic, ShortQuasiGeodesic,
};
pub use rng::{RngSeed, SeededRng};
pub use stiefel::{
    canonical_inner, make_point, project_tangent, random_tangent, stiefel_exp, Curve, Geodesic,
    StiefelPoint, TangentVector,
};
pub use tol::Tolerances;
