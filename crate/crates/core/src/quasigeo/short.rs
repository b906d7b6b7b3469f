use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfunc::{self, SkewSymmetricMatrix, SpecialOrthogonalMatrix};
use crate::stiefel::{Curve, StiefelPoint, TangentVector};

use super::align::align_frames;
use super::bch::{bch_fixed_point, BchFactors};

/// `ρ(t) = [U Q] expm(tG) [I; 0]` with `G = [A −Bᵀ; B C]` skew of size `2p`.
#[derive(Debug, Clone)]
pub struct ShortQuasiGeodesic {
    u: StiefelPoint,
    q: DMatrix<f64>,
    g: SkewSymmetricMatrix,
    factors: Option<BchFactors>,
}

impl ShortQuasiGeodesic {
    /// Assembles the curve from its blocks. `Q` must be an `n×p` frame with
    /// `UᵀQ = 0`.
    pub fn from_blocks(
        u: StiefelPoint,
        q: DMatrix<f64>,
        a: &SkewSymmetricMatrix,
        b: &DMatrix<f64>,
        c: &SkewSymmetricMatrix,
    ) -> Result<Self> {
        let p = u.p();
        if b.shape() != (p, p) || c.dim() != p || a.dim() != p || q.ncols() != p {
            return Err(Error::DimensionError(format!(
                "short quasi-geodesic blocks must be {p}x{p} with an n x {p} frame"
            )));
        }
        // Validates the frame.
        TangentVector::new(u.clone(), a.clone(), b.clone(), q.clone())?;
        let mut g = DMatrix::zeros(2 * p, 2 * p);
        g.view_mut((0, 0), (p, p)).copy_from(a.matrix());
        g.view_mut((p, 0), (p, p)).copy_from(b);
        g.view_mut((0, p), (p, p)).copy_from(&(-b.transpose()));
        g.view_mut((p, p), (p, p)).copy_from(c.matrix());
        Ok(ShortQuasiGeodesic {
            u,
            q,
            g: SkewSymmetricMatrix::skew_part(&g),
            factors: None,
        })
    }

    pub fn connect(u: &StiefelPoint, target: &StiefelPoint) -> Result<Self> {
        Self::connect_with_iterations(u, target, 1)
    }

    /// Endpoint solver with `iterations` steps of the truncated fixed-point
    /// scheme for the correction `c` (one step gives `c = −b a bᵀ / 6`).
    pub fn connect_with_iterations(
        u: &StiefelPoint,
        target: &StiefelPoint,
        iterations: usize,
    ) -> Result<Self> {
        let (n, p) = (u.n(), u.p());
        if p > n - p {
            return Err(Error::DimensionError(format!(
                "short quasi-geodesics need p <= n - p, got St({n},{p})"
            )));
        }
        let al = align_frames(u, target)?;
        let a = al.a;
        let b = DMatrix::from_diagonal(&al.sigma) * al.v.transpose();
        let c = bch_fixed_point(&a, &b, iterations);

        // expm([0 −bᵀ; b 0]) expm([a 0; 0 c]) in closed form,
        // using expm([0 −Σ; Σ 0]) = [cos Σ −sin Σ; sin Σ cos Σ].
        let cos = DMatrix::from_diagonal(&al.sigma.map(f64::cos));
        let sin = DMatrix::from_diagonal(&al.sigma.map(f64::sin));
        let rt = al.r.matrix().transpose();
        let ec = matfunc::matrix_exp(c.matrix());
        let v = &al.v;
        let mut w = DMatrix::zeros(2 * p, 2 * p);
        w.view_mut((0, 0), (p, p))
            .copy_from(&(v * &cos * v.transpose() * &rt));
        w.view_mut((0, p), (p, p)).copy_from(&(-(v * &sin) * &ec));
        w.view_mut((p, 0), (p, p))
            .copy_from(&(&sin * v.transpose() * &rt));
        w.view_mut((p, p), (p, p)).copy_from(&(&cos * &ec));
        let g = SpecialOrthogonalMatrix::new(w)?.log()?;

        Ok(ShortQuasiGeodesic {
            u: u.clone(),
            q: al.q,
            g,
            factors: Some(BchFactors { a, b, c }),
        })
    }

    pub fn start(&self) -> &StiefelPoint {
        &self.u
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn generator(&self) -> &SkewSymmetricMatrix {
        &self.g
    }

    /// The factors used by the endpoint solver, if the curve came from one.
    pub fn factors(&self) -> Option<&BchFactors> {
        self.factors.as_ref()
    }

    fn p(&self) -> usize {
        self.u.p()
    }

    fn block(&self, row: usize, col: usize) -> DMatrix<f64> {
        let p = self.p();
        self.g
            .matrix()
            .view((row * p, col * p), (p, p))
            .into_owned()
    }

    pub fn a(&self) -> SkewSymmetricMatrix {
        SkewSymmetricMatrix::skew_part(&self.block(0, 0))
    }

    pub fn b(&self) -> DMatrix<f64> {
        self.block(1, 0)
    }

    pub fn c(&self) -> SkewSymmetricMatrix {
        SkewSymmetricMatrix::skew_part(&self.block(1, 1))
    }

    fn flow(&self, t: f64) -> DMatrix<f64> {
        matfunc::matrix_exp(&(self.g.matrix() * t))
    }

    fn frame_times(&self, e: &DMatrix<f64>, col: usize) -> DMatrix<f64> {
        let p = self.p();
        self.u.matrix() * e.view((0, col * p), (p, p)) + &self.q * e.view((p, col * p), (p, p))
    }

    pub fn point(&self, t: f64) -> StiefelPoint {
        if t == 0.0 {
            return self.u.clone();
        }
        let e = self.flow(t);
        StiefelPoint::from_unchecked(self.frame_times(&e, 0))
    }

    /// `ρ̇(t) = ρ(t)A + ρ_⊥(t)B` with `ρ_⊥(t) = [U Q] expm(tG) [0; I]`.
    pub fn velocity(&self, t: f64) -> TangentVector {
        let e = self.flow(t);
        let base = StiefelPoint::from_unchecked(self.frame_times(&e, 0));
        let normal = self.frame_times(&e, 1);
        TangentVector::from_parts_unchecked(base, self.a(), self.b(), normal)
    }

    /// `(½ tr(AᵀA) + tr(BᵀB))^{1/2}`.
    pub fn length(&self) -> f64 {
        (0.5 * self.block(0, 0).norm_squared() + self.block(1, 0).norm_squared()).sqrt()
    }

    /// `‖CB‖_F`.
    pub fn covariant_acceleration_norm(&self) -> f64 {
        (self.block(1, 1) * self.block(1, 0)).norm()
    }
}

impl Curve for ShortQuasiGeodesic {
    fn point(&self, t: f64) -> StiefelPoint {
        ShortQuasiGeodesic::point(self, t)
    }
}

pub fn short_qg_connect(u: &StiefelPoint, target: &StiefelPoint) -> Result<ShortQuasiGeodesic> {
    ShortQuasiGeodesic::connect(u, target)
}
