use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::matfunc::{self, SkewSymmetricMatrix};
use crate::stiefel::{Curve, StiefelPoint, TangentVector};

use super::align::align_frames;

/// `γ(t) = (UV cos(tΣ) + Q sin(tΣ)) Vᵀ expm(tA)`.
///
/// Columns of `Q` that belong to a zero angle never enter the curve.
#[derive(Debug, Clone)]
pub struct EconQuasiGeodesic {
    u: StiefelPoint,
    v: DMatrix<f64>,
    q: DMatrix<f64>,
    sigma: DVector<f64>,
    a: SkewSymmetricMatrix,
}

impl EconQuasiGeodesic {
    /// Endpoint solver: the curve with `γ(0) = U` and `γ(1) = Ũ`.
    pub fn connect(u: &StiefelPoint, target: &StiefelPoint) -> Result<Self> {
        let al = align_frames(u, target)?;
        Ok(EconQuasiGeodesic {
            u: u.clone(),
            v: al.v,
            q: al.q,
            sigma: al.sigma,
            a: al.a,
        })
    }

    /// The curve `t ↦ RS_U(tΔ)` through `Δ = UA + QB`.
    pub fn from_tangent(delta: &TangentVector) -> Result<Self> {
        let base = delta.base();
        let (n, p) = (base.n(), base.p());
        let k = delta.q().ncols();
        // Pad to p×p so the SVD always returns a full right factor.
        let mut b = DMatrix::zeros(p, p);
        b.rows_mut(0, k).copy_from(delta.b());
        let mut frame = DMatrix::zeros(n, p);
        frame.columns_mut(0, k).copy_from(delta.q());
        let svd = matfunc::compact_svd(&b)?;
        Ok(EconQuasiGeodesic {
            u: base.clone(),
            v: svd.v,
            q: frame * svd.q,
            sigma: svd.s,
            a: delta.a().clone(),
        })
    }

    pub fn start(&self) -> &StiefelPoint {
        &self.u
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// Principal angles Σ.
    pub fn sigma(&self) -> &DVector<f64> {
        &self.sigma
    }

    pub fn a(&self) -> &SkewSymmetricMatrix {
        &self.a
    }

    /// `b = ΣVᵀ`, the normal block in the frame `Q`.
    pub fn b(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.sigma) * self.v.transpose()
    }

    pub fn point(&self, t: f64) -> StiefelPoint {
        if t == 0.0 {
            return self.u.clone();
        }
        let ts = &self.sigma * t;
        let cos = DMatrix::from_diagonal(&ts.map(f64::cos));
        let sin = DMatrix::from_diagonal(&ts.map(f64::sin));
        let rot = matfunc::matrix_exp(&(self.a.matrix() * t));
        let x = (self.u.matrix() * &self.v * cos + &self.q * sin) * self.v.transpose() * rot;
        StiefelPoint::from_unchecked(x)
    }

    /// `γ̇(t) = γ(t)A + Q_t ΣVᵀ expm(tA)` with `Q_t = −UV sin(tΣ) + Q cos(tΣ)`
    /// spanning the moving normal directions.
    pub fn velocity(&self, t: f64) -> TangentVector {
        let base = self.point(t);
        let (n, p) = (base.n(), base.p());
        let ts = &self.sigma * t;
        let cos = DMatrix::from_diagonal(&ts.map(f64::cos));
        let sin = DMatrix::from_diagonal(&ts.map(f64::sin));
        let rot = matfunc::matrix_exp(&(self.a.matrix() * t));
        let moving = &self.q * cos - self.u.matrix() * &self.v * sin;
        let b = self.b() * rot;
        if p <= n - p {
            TangentVector::from_parts_unchecked(base, self.a.clone(), b, moving)
        } else {
            let ambient = base.matrix() * self.a.matrix() + moving * b;
            TangentVector::from_ambient(base, &ambient)
                .expect("velocity has the base point's shape")
        }
    }

    /// Constant speed `(½ tr(AᵀA) + tr(Σ²))^{1/2}`, which is also the length on [0, 1].
    pub fn length(&self) -> f64 {
        (0.5 * self.a.matrix().norm_squared() + self.sigma.norm_squared()).sqrt()
    }

    /// `‖ΣVᵀA‖_F`; zero exactly when the curve is a geodesic.
    pub fn covariant_acceleration_norm(&self) -> f64 {
        (self.b() * self.a.matrix()).norm()
    }
}

impl Curve for EconQuasiGeodesic {
    fn point(&self, t: f64) -> StiefelPoint {
        EconQuasiGeodesic::point(self, t)
    }
}

/// Retraction `RS_U(Δ) = (UV cos Σ + Q sin Σ) Vᵀ expm(A)`, where
/// `(I − UUᵀ)Δ = QΣVᵀ`.
pub fn retraction_rs(delta: &TangentVector) -> Result<StiefelPoint> {
    if delta.norm_squared() == 0.0 {
        return Ok(delta.base().clone());
    }
    Ok(EconQuasiGeodesic::from_tangent(delta)?.point(1.0))
}

pub fn econ_qg_connect(u: &StiefelPoint, target: &StiefelPoint) -> Result<EconQuasiGeodesic> {
    EconQuasiGeodesic::connect(u, target)
}
