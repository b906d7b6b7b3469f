//! Points and tangent vectors of the Stiefel manifold `St(n,p)` with the
//! canonical metric.
//!
//! Tangent vectors are kept in frame coordinates `Δ = UA + QB`, where `A` is
//! skew `p×p`, `Q` is an `n×k` orthonormal frame orthogonal to `U` and `B` is
//! `k×p`. Whenever `p ≤ n − p` the frame has `k = p` columns; the full
//! `(n−p)×p` completion form is never materialised here.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfunc::{self, orthonormality_residual, SkewSymmetricMatrix};
use crate::rng::{RngSeed, SeededRng};
use crate::tol::Tolerances;

/// An `n×p` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelPoint {
    u: DMatrix<f64>,
}

impl StiefelPoint {
    /// Validates `UᵀU = I` to the central point tolerance.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(m, Tolerances::get().point)
    }

    pub fn with_tolerance(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        let (n, p) = m.shape();
        if p == 0 || n < p {
            return Err(Error::DimensionError(format!(
                "Stiefel point needs n >= p >= 1, got {n}x{p}"
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotOrthonormal {
                residual: f64::INFINITY,
            });
        }
        let residual = orthonormality_residual(&m);
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(StiefelPoint { u: m })
    }

    pub(crate) fn from_unchecked(u: DMatrix<f64>) -> Self {
        debug_assert!(orthonormality_residual(&u) < 1e-8);
        StiefelPoint { u }
    }

    /// Q factor of a seeded Gaussian `n×p` matrix, with the signs fixed so
    /// that the R factor has a positive diagonal.
    pub fn random(n: usize, p: usize, seed: RngSeed) -> Self {
        assert!(p >= 1 && n >= p, "random point needs n >= p >= 1");
        let mut rng = SeededRng::from_seed(seed);
        let g = rng.gaussian_matrix(n, p);
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for j in 0..p {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        StiefelPoint { u: q }
    }

    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    pub fn p(&self) -> usize {
        self.u.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.u
    }

    /// Frobenius (chordal) distance `‖U − W‖_F`.
    pub fn frobenius_distance(&self, other: &StiefelPoint) -> f64 {
        (&self.u - &other.u).norm()
    }

    /// Orthonormal completion `U_⊥`.
    pub fn completion(&self) -> Result<DMatrix<f64>> {
        matfunc::orthonormal_completion(self)
    }

    fn same_base(&self, other: &StiefelPoint) -> bool {
        self.u.shape() == other.u.shape() && (&self.u - &other.u).norm() <= 1e-12
    }
}

/// Shorthand for [`StiefelPoint::new`].
pub fn make_point(m: DMatrix<f64>) -> Result<StiefelPoint> {
    StiefelPoint::new(m)
}

/// `Δ = UA + QB` at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: StiefelPoint,
    a: SkewSymmetricMatrix,
    b: DMatrix<f64>,
    q: DMatrix<f64>,
}

impl TangentVector {
    pub fn new(
        base: StiefelPoint,
        a: SkewSymmetricMatrix,
        b: DMatrix<f64>,
        q: DMatrix<f64>,
    ) -> Result<Self> {
        let (n, p) = (base.n(), base.p());
        if a.dim() != p || q.nrows() != n || b.nrows() != q.ncols() || b.ncols() != p {
            return Err(Error::DimensionError(format!(
                "tangent coordinates do not fit St({n},{p}): A {0}x{0}, B {1}x{2}, Q {3}x{4}",
                a.dim(),
                b.nrows(),
                b.ncols(),
                q.nrows(),
                q.ncols()
            )));
        }
        if q.ncols() > n - p {
            return Err(Error::DimensionError(format!(
                "frame with {} columns cannot be orthogonal to St({n},{p}) point",
                q.ncols()
            )));
        }
        let tol = Tolerances::get().frame;
        let residual = orthonormality_residual(&q).max(base.u.tr_mul(&q).norm());
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(TangentVector { base, a, b, q })
    }

    pub(crate) fn from_parts_unchecked(
        base: StiefelPoint,
        a: SkewSymmetricMatrix,
        b: DMatrix<f64>,
        q: DMatrix<f64>,
    ) -> Self {
        TangentVector { base, a, b, q }
    }

    pub fn zero(base: StiefelPoint) -> Self {
        let (n, p) = (base.n(), base.p());
        TangentVector {
            a: SkewSymmetricMatrix::zeros(p),
            b: DMatrix::zeros(0, p),
            q: DMatrix::zeros(n, 0),
            base,
        }
    }

    /// Frame coordinates of an ambient `n×p` matrix assumed tangent at `base`.
    /// The `U`-component contributes only its skew part.
    pub fn from_ambient(base: StiefelPoint, delta: &DMatrix<f64>) -> Result<Self> {
        let (n, p) = (base.n(), base.p());
        if delta.shape() != (n, p) {
            return Err(Error::DimensionError(format!(
                "ambient tangent must be {n}x{p}, got {}x{}",
                delta.nrows(),
                delta.ncols()
            )));
        }
        let u = &base.u;
        let utd = u.tr_mul(delta);
        let a = SkewSymmetricMatrix::skew_part(&utd);
        let normal = delta - u * utd;
        let k = p.min(n - p);
        if k == 0 {
            return Ok(TangentVector {
                a,
                b: DMatrix::zeros(0, p),
                q: DMatrix::zeros(n, 0),
                base,
            });
        }
        let svd = matfunc::compact_svd(&normal)?;
        let q = matfunc::orthonormalize_against(u, &svd.q.columns(0, k).into_owned());
        let b = q.tr_mul(&normal);
        Ok(TangentVector { base, a, b, q })
    }

    pub fn base(&self) -> &StiefelPoint {
        &self.base
    }

    pub fn a(&self) -> &SkewSymmetricMatrix {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn to_ambient(&self) -> DMatrix<f64> {
        &self.base.u * self.a.matrix() + &self.q * &self.b
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TangentVector {
            base: self.base.clone(),
            a: self.a.scaled(factor),
            b: &self.b * factor,
            q: self.q.clone(),
        }
    }

    /// `½ tr(AᵀA) + tr(BᵀB)`.
    pub fn norm_squared(&self) -> f64 {
        0.5 * self.a.matrix().norm_squared() + self.b.norm_squared()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }
}

/// Tangent projection `M − U sym(UᵀM)`.
pub fn project_tangent(u: &StiefelPoint, m: &DMatrix<f64>) -> Result<TangentVector> {
    TangentVector::from_ambient(u.clone(), &project_ambient(u, m))
}

pub(crate) fn project_ambient(u: &StiefelPoint, m: &DMatrix<f64>) -> DMatrix<f64> {
    let utm = u.u.tr_mul(m);
    let sym = (&utm + utm.transpose()) * 0.5;
    m - &u.u * sym
}

/// Canonical metric `tr(Δ₁ᵀ(I − ½UUᵀ)Δ₂)` evaluated in frame coordinates.
pub fn canonical_inner(d1: &TangentVector, d2: &TangentVector) -> Result<f64> {
    if !d1.base.same_base(&d2.base) {
        return Err(Error::BaseMismatch);
    }
    let aa = 0.5 * d1.a.matrix().dot(d2.a.matrix());
    let cross = d1.q.tr_mul(&d2.q);
    let bb = (&cross * &d2.b).dot(&d1.b);
    Ok(aa + bb)
}

/// Riemannian exponential `[U Q] expm(t [A −Bᵀ; B 0]) [I; 0]`.
pub fn stiefel_exp(delta: &TangentVector, t: f64) -> StiefelPoint {
    let u = &delta.base.u;
    if t == 0.0 {
        return delta.base.clone();
    }
    let p = delta.base.p();
    let k = delta.q.ncols();
    let mut g = DMatrix::<f64>::zeros(p + k, p + k);
    g.view_mut((0, 0), (p, p)).copy_from(delta.a.matrix());
    g.view_mut((p, 0), (k, p)).copy_from(&delta.b);
    g.view_mut((0, p), (p, k))
        .copy_from(&(-delta.b.transpose()));
    let e = matfunc::matrix_exp(&(g * t));
    let out = u * e.view((0, 0), (p, p)) + &delta.q * e.view((p, 0), (k, p));
    StiefelPoint::from_unchecked(out)
}

/// Seeded random tangent with canonical norm `norm`: `A` is the skew part of
/// a Gaussian matrix scaled by two and `QB` is the QR factorisation of the
/// projection of an `n×p` Gaussian matrix onto the normal space (so `B`
/// plays the role of an `(n−p)×p` Gaussian block in any completion).
pub fn random_tangent(u: &StiefelPoint, norm: f64, seed: RngSeed) -> Result<TangentVector> {
    let (n, p) = (u.n(), u.p());
    if p > n - p {
        return Err(Error::DimensionError(format!(
            "random tangent needs p <= n - p, got St({n},{p})"
        )));
    }
    if norm < 0.0 || !norm.is_finite() {
        return Err(Error::DimensionError(format!(
            "tangent norm must be finite and non-negative, got {norm}"
        )));
    }
    let mut rng = SeededRng::from_seed(seed);
    let g = rng.gaussian_matrix(p, p);
    let a = &g - g.transpose();
    let z = rng.gaussian_matrix(n, p);
    let normal = &z - &u.u * u.u.tr_mul(&z);
    let q = matfunc::orthonormalize_against(&u.u, &normal.clone().qr().q());
    let b = q.tr_mul(&normal);
    let raw = TangentVector {
        base: u.clone(),
        a: SkewSymmetricMatrix::skew_part(&a),
        b,
        q,
    };
    let current = raw.norm();
    Ok(raw.scaled(if current > 0.0 { norm / current } else { 0.0 }))
}

/// A parametrised curve on the manifold.
pub trait Curve {
    fn point(&self, t: f64) -> StiefelPoint;
}

impl<F: Fn(f64) -> StiefelPoint> Curve for F {
    fn point(&self, t: f64) -> StiefelPoint {
        self(t)
    }
}

/// `t ↦ Exp_U(tΔ)`.
#[derive(Debug, Clone)]
pub struct Geodesic {
    pub velocity: TangentVector,
}

impl Geodesic {
    pub fn new(velocity: TangentVector) -> Self {
        Geodesic { velocity }
    }

    pub fn length(&self) -> f64 {
        self.velocity.norm()
    }
}

impl Curve for Geodesic {
    fn point(&self, t: f64) -> StiefelPoint {
        stiefel_exp(&self.velocity, t)
    }
}
