//! Independent reference computations used to check the frame-based curves:
//! the full `n×n` representation, a finite-difference covariant derivative
//! and a shooting solver for the Riemannian logarithm.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfunc::{self, orthonormality_residual, SkewSymmetricMatrix};
use crate::quasigeo::{EconQuasiGeodesic, ShortQuasiGeodesic};
use crate::stiefel::{self, Curve, StiefelPoint, TangentVector};
use crate::tol::Tolerances;

/// `W = [U U_⊥] ∈ O(n)`.
#[derive(Debug, Clone)]
pub struct FullFrame {
    w: DMatrix<f64>,
    p: usize,
}

impl FullFrame {
    pub fn complete(u: &StiefelPoint) -> Result<Self> {
        let completion = u.completion()?;
        let (n, p) = (u.n(), u.p());
        let mut w = DMatrix::zeros(n, n);
        w.columns_mut(0, p).copy_from(u.matrix());
        w.columns_mut(p, n - p).copy_from(&completion);
        let residual = orthonormality_residual(&w);
        if residual > Tolerances::get().point {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(FullFrame { w, p })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn completion(&self) -> DMatrix<f64> {
        let n = self.w.nrows();
        self.w.columns(self.p, n - self.p).into_owned()
    }

    /// `U_⊥ᵀ M`, the completion-form coordinates of a normal component.
    pub fn normal_coordinates(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.completion().tr_mul(m)
    }
}

/// `(U U_⊥) expm(t [0 −Bᵀ; B 0]) [expm(tA); 0]` evaluated with `n×n`
/// matrix functions.
pub fn full_qg_eval(
    frame: &FullFrame,
    a: &SkewSymmetricMatrix,
    b_full: &DMatrix<f64>,
    t: f64,
) -> Result<StiefelPoint> {
    let n = frame.w.nrows();
    let p = frame.p;
    if p >= n || a.dim() != p || b_full.shape() != (n - p, p) {
        return Err(Error::DimensionError(format!(
            "full representation needs p < n, A {p}x{p} and B {}x{p}",
            n.saturating_sub(p)
        )));
    }
    let mut k = DMatrix::zeros(n, n);
    k.view_mut((p, 0), (n - p, p)).copy_from(b_full);
    k.view_mut((0, p), (p, n - p))
        .copy_from(&(-b_full.transpose()));
    let big = matfunc::matrix_exp(&(k * t));
    let rot = matfunc::matrix_exp(&(a.matrix() * t));
    let x = &frame.w * big.columns(0, p) * rot;
    Ok(StiefelPoint::from_unchecked(x))
}

/// Completion-form block `B` with `U_⊥B = QΣVᵀ` for an economy curve.
pub fn econ_full_block(frame: &FullFrame, curve: &EconQuasiGeodesic) -> DMatrix<f64> {
    frame.normal_coordinates(&(curve.q() * curve.b()))
}

/// Covariant acceleration
/// `γ̈ + γ̇γ̇ᵀγ + γ((γᵀγ̇)² + γ̇ᵀγ̇)` with central differences of step `h`.
pub fn covariant_accel_numeric<C: Curve + ?Sized>(curve: &C, t: f64, h: f64) -> DMatrix<f64> {
    let x = curve.point(t).into_matrix();
    let fwd = curve.point(t + h).into_matrix();
    let bwd = curve.point(t - h).into_matrix();
    let vel = (&fwd - &bwd) / (2.0 * h);
    let acc = (fwd - &x * 2.0 + bwd) / (h * h);
    let xtv = x.tr_mul(&vel);
    let inner = &xtv * &xtv + vel.tr_mul(&vel);
    acc + &vel * vel.transpose() * &x + &x * inner
}

/// Canonical norm `tr(Dᵀ(I − ½XXᵀ)D)^{1/2}` of an ambient matrix at `X`.
pub fn canonical_norm_at(x: &StiefelPoint, d: &DMatrix<f64>) -> f64 {
    let xtd = x.matrix().tr_mul(d);
    (d.norm_squared() - 0.5 * xtd.norm_squared())
        .max(0.0)
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// Frobenius endpoint residual accepted as converged.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial damping in (0, 1]; halved whenever a step increases the residual.
    pub step: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            tol: 1e-10,
            max_iter: 200,
            step: 1.0,
        }
    }
}

impl ShootingConfig {
    fn validate(&self) -> Result<()> {
        if self.tol.is_nan()
            || self.tol <= 0.0
            || self.max_iter == 0
            || !(self.step > 0.0 && self.step <= 1.0)
        {
            return Err(Error::DimensionError(format!(
                "invalid shooting configuration {self:?}"
            )));
        }
        Ok(())
    }
}

/// Initial velocity for shooting: the short quasi-geodesic's when it exists,
/// otherwise the economy curve's, otherwise zero.
pub fn default_initial_velocity(u: &StiefelPoint, target: &StiefelPoint) -> TangentVector {
    if let Ok(rho) = ShortQuasiGeodesic::connect(u, target) {
        return rho.velocity(0.0);
    }
    if let Ok(gamma) = EconQuasiGeodesic::connect(u, target) {
        return gamma.velocity(0.0);
    }
    TangentVector::zero(u.clone())
}

/// Shooting solver for `Exp_U(Δ) = Ũ` with the update
/// `Δ ← Δ + step · P_U(Ũ − Exp_U(Δ))`.
pub fn stiefel_log_shooting(
    u: &StiefelPoint,
    target: &StiefelPoint,
    init: Option<TangentVector>,
    cfg: &ShootingConfig,
) -> Result<TangentVector> {
    cfg.validate()?;
    if u.matrix().shape() != target.matrix().shape() {
        return Err(Error::DimensionError("endpoints differ in shape".into()));
    }
    let mut current = match init {
        Some(v) if v.base() == u => v,
        Some(_) => return Err(Error::BaseMismatch),
        None => default_initial_velocity(u, target),
    };
    let mut ambient = current.to_ambient();
    let mut residual = stiefel::stiefel_exp(&current, 1.0).frobenius_distance(target);
    let mut step = cfg.step;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        if residual <= cfg.tol {
            return Ok(current);
        }
        iterations += 1;
        let miss = target.matrix() - stiefel::stiefel_exp(&current, 1.0).into_matrix();
        let candidate_ambient = &ambient + stiefel::project_ambient(u, &miss) * step;
        let candidate = TangentVector::from_ambient(u.clone(), &candidate_ambient)?;
        let candidate_residual = stiefel::stiefel_exp(&candidate, 1.0).frobenius_distance(target);
        if candidate_residual > residual {
            step *= 0.5;
            if step < 1e-8 {
                break;
            }
            continue;
        }
        ambient = candidate_ambient;
        current = candidate;
        residual = candidate_residual;
    }
    if residual <= cfg.tol {
        return Ok(current);
    }
    Err(Error::NoConvergence {
        iterations,
        residual,
    })
}

/// Canonical norm of the shooting logarithm.
pub fn riemannian_dist(
    u: &StiefelPoint,
    target: &StiefelPoint,
    cfg: &ShootingConfig,
) -> Result<f64> {
    Ok(stiefel_log_shooting(u, target, None, cfg)?.norm())
}
