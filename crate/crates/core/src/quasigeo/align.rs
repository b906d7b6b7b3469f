use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matfunc::{self, SkewSymmetricMatrix, SpecialOrthogonalMatrix};
use crate::stiefel::StiefelPoint;
use crate::tol::Tolerances;

/// Data shared by both endpoint solvers.
///
/// `r` is the orthogonal polar factor of `ŨᵀU`, so that `ŨR` is the basis of
/// span(Ũ) closest to `U`; `a = logm(Rᵀ)`; and `(I − UUᵀ)ŨR = Q diag(sin Σ) Vᵀ`.
#[derive(Debug, Clone)]
pub struct FrameAlignment {
    pub r: SpecialOrthogonalMatrix,
    pub a: SkewSymmetricMatrix,
    pub q: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub v: DMatrix<f64>,
}

pub fn align_frames(u: &StiefelPoint, target: &StiefelPoint) -> Result<FrameAlignment> {
    if u.matrix().shape() != target.matrix().shape() {
        return Err(Error::DimensionError(format!(
            "endpoints live on different manifolds: {}x{} vs {}x{}",
            u.n(),
            u.p(),
            target.n(),
            target.p()
        )));
    }
    let (n, p) = (u.n(), u.p());
    let overlap = target.matrix().tr_mul(u.matrix());
    let svd = matfunc::compact_svd(&overlap)?;
    let smallest = svd.s.min();
    if smallest <= Tolerances::get().singular_floor {
        return Err(Error::SubspaceAngleTooLarge { smallest });
    }
    let r = &svd.q * svd.v.transpose();
    let rt = SpecialOrthogonalMatrix::new(r.transpose())?;
    let a = rt.log()?;

    let rotated = target.matrix() * &r;
    let normal = &rotated - u.matrix() * u.matrix().tr_mul(&rotated);
    let svd = matfunc::compact_svd(&normal)?;
    let mut sigma = matfunc::arcsin_clamped(&svd.s)?;

    // Keep the frame orthogonal to U where the complement has room; columns
    // beyond that belong to zero angles when p > n - p.
    let k = p.min(n - p);
    let mut q = svd.q;
    if k > 0 {
        let fixed = matfunc::orthonormalize_against(u.matrix(), &q.columns(0, k).into_owned());
        q.columns_mut(0, k).copy_from(&fixed);
    }
    for j in k..p {
        sigma[j] = 0.0;
    }

    Ok(FrameAlignment {
        r: SpecialOrthogonalMatrix::new(r)?,
        a,
        q,
        sigma,
        v: svd.v,
    })
}
