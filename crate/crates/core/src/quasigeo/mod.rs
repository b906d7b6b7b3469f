//! Quasi-geodesics: constant-speed curves whose covariant acceleration has
//! constant (not necessarily zero) norm.

mod align;
mod bch;
mod econ;
mod short;

pub use align::{align_frames, FrameAlignment};
pub use bch::{bch_c1, bch_fixed_point, c_expansion, c_residual, remainder_bound, BchFactors};
pub use econ::{econ_qg_connect, retraction_rs, EconQuasiGeodesic};
pub use short::{short_qg_connect, ShortQuasiGeodesic};
