//! Dense matrix-function kernels: exponential, principal logarithm of
//! rotations, compact SVD, orthonormal completion and a clamped arcsin.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};

use crate::error::{Error, Result};
use crate::stiefel::StiefelPoint;
use crate::tol::Tolerances;

/// Real skew-symmetric matrix with an exactly zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewSymmetricMatrix(DMatrix<f64>);

impl SkewSymmetricMatrix {
    /// Validates skewness to the central tolerance and stores the exact skew part.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionError(format!(
                "skew matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let residual = (&m + m.transpose()).norm();
        let scale = m.norm();
        if residual > Tolerances::get().skew * scale.max(f64::MIN_POSITIVE) && residual > 0.0 {
            return Err(Error::NotSkew {
                residual: residual / scale,
            });
        }
        Ok(Self::skew_part(&m))
    }

    /// `(M − Mᵀ)/2`, always skew.
    pub fn skew_part(m: &DMatrix<f64>) -> Self {
        let mut s = (m - m.transpose()) * 0.5;
        s.fill_diagonal(0.0);
        SkewSymmetricMatrix(s)
    }

    pub fn zeros(dim: usize) -> Self {
        SkewSymmetricMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SkewSymmetricMatrix(&self.0 * factor)
    }

    /// `exp(X)`, which is special orthogonal for skew `X`.
    pub fn exp(&self) -> SpecialOrthogonalMatrix {
        SpecialOrthogonalMatrix(matrix_exp(&self.0))
    }
}

/// Orthogonal matrix with determinant +1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialOrthogonalMatrix(DMatrix<f64>);

impl SpecialOrthogonalMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionError(format!(
                "orthogonal matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let tol = Tolerances::get();
        let residual = orthonormality_residual(&m);
        if residual > tol.orthogonal * (m.nrows() as f64).sqrt().max(1.0) {
            return Err(Error::NotOrthonormal { residual });
        }
        let det = m.clone().determinant();
        if det < 0.0 {
            return Err(Error::OrientationMismatch { det });
        }
        if (det - 1.0).abs() > tol.det {
            return Err(Error::NotOrthonormal {
                residual: (det - 1.0).abs(),
            });
        }
        Ok(SpecialOrthogonalMatrix(m))
    }

    pub fn identity(dim: usize) -> Self {
        SpecialOrthogonalMatrix(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        SpecialOrthogonalMatrix(self.0.transpose())
    }

    pub fn log(&self) -> Result<SkewSymmetricMatrix> {
        matrix_log_so(self)
    }
}

/// `‖MᵀM − I‖_F`.
pub fn orthonormality_residual(m: &DMatrix<f64>) -> f64 {
    let mut g = m.tr_mul(m);
    for i in 0..g.nrows() {
        g[(i, i)] -= 1.0;
    }
    g.norm()
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    match singular_values(m) {
        Ok(s) => s[0],
        Err(_) => m.singular_values().max(),
    }
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

// Padé coefficients and switching thresholds for scaling and squaring.
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152e0;

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant (lower degrees when the 1-norm is small enough).
///
/// Panics if `x` is not square.
pub fn matrix_exp(x: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(x.is_square(), "matrix_exp requires a square matrix");
    let n = x.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let norm = one_norm(x);
    if norm == 0.0 {
        return DMatrix::identity(n, n);
    }

    let eye = DMatrix::<f64>::identity(n, n);
    let x2 = x * x;
    for &(degree, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match degree {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            let (u, v) = pade_low(x, &x2, &eye, coeffs);
            return pade_quotient(u, v);
        }
    }

    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scale = 2f64.powi(-squarings);
    let xs = x * scale;
    let x2 = &x2 * (scale * scale);
    let x4 = &x2 * &x2;
    let x6 = &x4 * &x2;
    let b = &PADE13;

    let inner_u = &x6 * b[13] + &x4 * b[11] + &x2 * b[9];
    let u = &xs * (&x6 * inner_u + &x6 * b[7] + &x4 * b[5] + &x2 * b[3] + &eye * b[1]);
    let inner_v = &x6 * b[12] + &x4 * b[10] + &x2 * b[8];
    let v = &x6 * inner_v + &x6 * b[6] + &x4 * b[4] + &x2 * b[2] + &eye * b[0];

    let mut r = pade_quotient(u, v);
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

fn pade_low(
    x: &DMatrix<f64>,
    x2: &DMatrix<f64>,
    eye: &DMatrix<f64>,
    coeffs: &[f64],
) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = x.nrows();
    let mut odd = DMatrix::<f64>::zeros(n, n);
    let mut even = DMatrix::<f64>::zeros(n, n);
    let mut power = eye.clone();
    for pair in coeffs.chunks(2) {
        even += &power * pair[0];
        if let Some(&c) = pair.get(1) {
            odd += &power * c;
        }
        power = &power * x2;
    }
    (x * odd, even)
}

fn pade_quotient(u: DMatrix<f64>, v: DMatrix<f64>) -> DMatrix<f64> {
    let numer = &v + &u;
    let denom = v - u;
    denom
        .lu()
        .solve(&numer)
        .expect("Padé denominator is nonsingular for scaled arguments")
}

/// Principal logarithm of a special orthogonal matrix.
///
/// Reduces to real Schur form, where an orthogonal matrix is block diagonal
/// with 2×2 rotation blocks and ±1 entries, and takes the angle of each
/// block. Falls back to `θ/sin θ` applied to the symmetric part when the
/// Schur iteration stalls.
pub fn matrix_log_so(q: &SpecialOrthogonalMatrix) -> Result<SkewSymmetricMatrix> {
    let n = q.dim();
    if n == 0 {
        return Ok(SkewSymmetricMatrix::zeros(0));
    }
    match log_via_schur(q.matrix()) {
        Err(Error::DecompositionFailed) => log_via_symmetric_part(q.matrix()),
        other => other,
    }
}

fn log_via_schur(q: &DMatrix<f64>) -> Result<SkewSymmetricMatrix> {
    let n = q.nrows();
    let angle_tol = Tolerances::get().minus_one_angle;
    let schur = Schur::try_new(q.clone(), f64::EPSILON, 200 * n.max(10))
        .ok_or(Error::DecompositionFailed)?;
    let (z, t) = schur.unpack();

    let mut blocks = DMatrix::<f64>::zeros(n, n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let c = 0.5 * (t[(i, i)] + t[(i + 1, i + 1)]);
            let s = 0.5 * (t[(i + 1, i)] - t[(i, i + 1)]);
            let theta = s.atan2(c);
            if PI - theta.abs() < angle_tol {
                return Err(Error::EigenvalueAtMinusOne);
            }
            blocks[(i + 1, i)] = theta;
            blocks[(i, i + 1)] = -theta;
            i += 2;
        } else {
            if t[(i, i)] < 0.0 {
                return Err(Error::EigenvalueAtMinusOne);
            }
            i += 1;
        }
    }
    Ok(SkewSymmetricMatrix::skew_part(
        &(&z * blocks * z.transpose()),
    ))
}

/// `log Q = g(S) K` with `S`, `K` the symmetric and skew parts of `Q` and
/// `g(cos θ) = θ / sin θ`.
pub(crate) fn log_via_symmetric_part(q: &DMatrix<f64>) -> Result<SkewSymmetricMatrix> {
    let angle_tol = Tolerances::get().minus_one_angle;
    let sym = (q + q.transpose()) * 0.5;
    let skew = (q - q.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut weights = DVector::zeros(eig.eigenvalues.len());
    for (w, &c) in weights.iter_mut().zip(eig.eigenvalues.iter()) {
        let theta = c.clamp(-1.0, 1.0).acos();
        if PI - theta < angle_tol {
            return Err(Error::EigenvalueAtMinusOne);
        }
        *w = if theta < 1e-8 {
            1.0 + theta * theta / 6.0
        } else {
            theta / theta.sin()
        };
    }
    let v = &eig.eigenvectors;
    let g = v * DMatrix::from_diagonal(&weights) * v.transpose();
    Ok(SkewSymmetricMatrix::skew_part(&(g * skew)))
}

/// Compact SVD `M = Q diag(S) Vᵀ` with descending singular values.
#[derive(Debug, Clone)]
pub struct CompactSvd {
    pub q: DMatrix<f64>,
    pub s: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl CompactSvd {
    pub fn recompose(&self) -> DMatrix<f64> {
        &self.q * DMatrix::from_diagonal(&self.s) * self.v.transpose()
    }
}

/// Compact SVD of a tall `n×p` matrix by one-sided Jacobi rotations.
///
/// Columns are rotated until pairwise orthogonal to working precision; the
/// column norms are the singular values. Left vectors of zero singular values
/// are completed to an orthonormal set.
pub fn compact_svd(m: &DMatrix<f64>) -> Result<CompactSvd> {
    let (n, p) = m.shape();
    if n < p {
        return Err(Error::DimensionError(format!(
            "compact SVD expects n >= p, got {n}x{p}"
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::DecompositionFailed);
    }
    let mut work = m.clone();
    let mut v = DMatrix::<f64>::identity(p, p);
    let tol = JACOBI_TOL;
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in (i + 1)..p {
                let (alpha, beta, gamma) = {
                    let ci = work.column(i);
                    let cj = work.column(j);
                    (ci.norm_squared(), cj.norm_squared(), ci.dot(&cj))
                };
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut work, i, j, c, s);
                rotate_columns(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::DecompositionFailed);
    }

    let norms: Vec<f64> = work.column_iter().map(|c| c.norm()).collect();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let s_max = order.first().map(|&k| norms[k]).unwrap_or(0.0);

    let mut q = DMatrix::<f64>::zeros(n, p);
    let mut s = DVector::<f64>::zeros(p);
    let mut v_sorted = DMatrix::<f64>::zeros(p, p);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        s[dst] = sigma;
        v_sorted.set_column(dst, &v.column(src));
        if sigma > 0.0 && sigma > f64::EPSILON * s_max * (n as f64) {
            q.set_column(dst, &(work.column(src) / sigma));
        }
    }
    // Columns left at zero belong to negligible singular values.
    let q = orthonormalize_against(&DMatrix::zeros(n, 0), &q);
    Ok(CompactSvd { q, s, v: v_sorted })
}

const JACOBI_TOL: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 80;

fn rotate_columns(m: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let x = m[(r, i)];
        let y = m[(r, j)];
        m[(r, i)] = c * x - s * y;
        m[(r, j)] = s * x + c * y;
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    if m.nrows() >= m.ncols() {
        Ok(compact_svd(m)?.s)
    } else {
        Ok(compact_svd(&m.transpose())?.s)
    }
}

/// Orthonormal completion `U_⊥`, an `n×(n−p)` matrix with `[U U_⊥]` orthogonal.
pub fn orthonormal_completion(u: &StiefelPoint) -> Result<DMatrix<f64>> {
    let (n, p) = (u.n(), u.p());
    if n == p {
        return Err(Error::DimensionError(
            "square frame has no orthonormal completion".into(),
        ));
    }
    let qr = u.matrix().clone().qr();
    let mut full = DMatrix::<f64>::identity(n, n);
    qr.q_tr_mul(&mut full);
    let completion = full.transpose().columns(p, n - p).into_owned();
    // One pass of reorthogonalisation against U tightens the residual to rounding.
    Ok(orthonormalize_against(u.matrix(), &completion))
}

/// Columnwise Gram-Schmidt of `q` against `u` and itself, projecting twice.
/// Columns that collapse are replaced by coordinate vectors projected the
/// same way, so the result stays an orthonormal frame orthogonal to `u`
/// whenever `u.ncols() + q.ncols() <= n`.
pub fn orthonormalize_against(u: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q.nrows();
    let k = q.ncols();
    let mut out = DMatrix::<f64>::zeros(n, k);
    let mut next_basis = 0usize;
    for j in 0..k {
        let mut v = q.column(j).into_owned();
        let original = v.norm();
        let mut accepted = false;
        for attempt in 0..=n {
            for _ in 0..2 {
                let cu = u.tr_mul(&v);
                v -= u * cu;
                for i in 0..j {
                    let col = out.column(i);
                    let c = col.dot(&v);
                    v.axpy(-c, &col, 1.0);
                }
            }
            let norm = v.norm();
            let reference = if attempt == 0 { original } else { 1.0 };
            if norm > 1e-8 * reference.max(f64::MIN_POSITIVE) && norm > 1e-300 {
                out.set_column(j, &(v / norm));
                accepted = true;
                break;
            }
            if next_basis >= n {
                break;
            }
            v = DVector::zeros(n);
            v[next_basis] = 1.0;
            next_basis += 1;
        }
        if !accepted {
            // No room left in the complement; leave the column unchanged.
            let col = q.column(j).into_owned();
            out.set_column(j, &col);
        }
    }
    out
}

/// Elementwise `arcsin(min(s, 1))`.
pub fn arcsin_clamped(s: &DVector<f64>) -> Result<DVector<f64>> {
    let overshoot = Tolerances::get().arcsin_overshoot;
    let mut out = DVector::zeros(s.len());
    for (o, &x) in out.iter_mut().zip(s.iter()) {
        if !(x >= -overshoot && x <= 1.0 + overshoot) {
            return Err(Error::ValueOutOfRange { value: x });
        }
        *o = x.clamp(0.0, 1.0).asin();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use std::f64::consts::FRAC_PI_2;

    fn random_skew(rng: &mut SeededRng, dim: usize, scale: f64) -> SkewSymmetricMatrix {
        let g = rng.gaussian_matrix(dim, dim);
        SkewSymmetricMatrix::skew_part(&(g * scale))
    }

    fn rotation(theta: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
    }

    // Truncated Taylor series, independent of the Padé path.
    fn taylor_exp(x: &DMatrix<f64>, terms: usize) -> DMatrix<f64> {
        let n = x.nrows();
        let mut sum = DMatrix::identity(n, n);
        let mut term = DMatrix::identity(n, n);
        for k in 1..=terms {
            term = &term * x / k as f64;
            sum += &term;
        }
        sum
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(matrix_exp(&DMatrix::zeros(3, 3)), DMatrix::identity(3, 3));
    }

    #[test]
    fn exp_quarter_turn_matches_taylor() {
        let x = DMatrix::from_row_slice(2, 2, &[0.0, -FRAC_PI_2, FRAC_PI_2, 0.0]);
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let taylor = taylor_exp(&x, 30);
        assert!((&taylor - &expected).norm() < 1e-14);
        assert!((matrix_exp(&x) - taylor).norm() < 1e-14);
    }

    #[test]
    fn exp_matches_taylor_across_degrees() {
        let mut rng = SeededRng::new(11);
        // Hits every Padé degree and the squaring branch.
        for &scale in &[1e-3, 0.05, 0.2, 0.5, 1.5, 4.0] {
            let x = rng.gaussian_matrix(5, 5) * scale;
            let reference = taylor_exp(&(&x / 16.0), 40);
            let mut reference_sq = reference;
            for _ in 0..4 {
                reference_sq = &reference_sq * &reference_sq;
            }
            let got = matrix_exp(&x);
            let rel = (&got - &reference_sq).norm() / reference_sq.norm();
            assert!(rel < 1e-13, "scale {scale}: rel err {rel:e}");
        }
    }

    #[test]
    fn exp_of_random_skew_is_orthogonal() {
        let mut rng = SeededRng::new(3);
        let x = random_skew(&mut rng, 6, 1.0);
        let q = x.exp();
        assert!(orthonormality_residual(q.matrix()) < 1e-12);
        assert!((q.matrix().clone().determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let x = matrix_log_so(&SpecialOrthogonalMatrix::identity(4)).unwrap();
        assert_eq!(x.matrix(), &DMatrix::zeros(4, 4));
    }

    #[test]
    fn log_of_plane_rotation() {
        let q = SpecialOrthogonalMatrix::new(rotation(0.7)).unwrap();
        let x = matrix_log_so(&q).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, -0.7, 0.7, 0.0]);
        assert!((x.matrix() - expected).norm() < 1e-14);
    }

    #[test]
    fn log_of_half_turn_fails() {
        let q = SpecialOrthogonalMatrix::new(rotation(PI)).unwrap();
        assert_eq!(matrix_log_so(&q), Err(Error::EigenvalueAtMinusOne));
        assert_eq!(
            log_via_symmetric_part(q.matrix()),
            Err(Error::EigenvalueAtMinusOne)
        );
    }

    #[test]
    fn reflection_rejected_on_construction() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            SpecialOrthogonalMatrix::new(m),
            Err(Error::OrientationMismatch { .. })
        ));
    }

    #[test]
    fn log_routes_agree() {
        let mut rng = SeededRng::new(19);
        for dim in [3, 6, 9, 16] {
            let x = random_skew(&mut rng, dim, 0.4);
            let q = x.exp();
            let schur = log_via_schur(q.matrix()).unwrap();
            let sym = log_via_symmetric_part(q.matrix()).unwrap();
            assert!((schur.matrix() - sym.matrix()).norm() < 1e-10);
            assert!((schur.matrix() - x.matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn log_handles_exact_permutation() {
        // Cyclic permutations are a classic stall case for unshifted QR.
        let mut p = DMatrix::<f64>::zeros(5, 5);
        for i in 0..5 {
            p[((i + 1) % 5, i)] = 1.0;
        }
        let q = SpecialOrthogonalMatrix::new(p.clone()).unwrap();
        let x = matrix_log_so(&q).unwrap();
        assert!((matrix_exp(x.matrix()) - p).norm() < 1e-10);
    }

    #[test]
    fn skew_validation() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(SkewSymmetricMatrix::new(m).is_ok());
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(
            SkewSymmetricMatrix::new(m),
            Err(Error::NotSkew { .. })
        ));
        let m = DMatrix::from_row_slice(2, 2, &[1e-20, 1.0, -1.0, 0.0]);
        assert_eq!(SkewSymmetricMatrix::new(m).unwrap().matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn svd_of_orthonormal_frame_has_unit_values() {
        let u = StiefelPoint::random(7, 3, crate::rng::RngSeed(5));
        let svd = compact_svd(u.matrix()).unwrap();
        for s in svd.s.iter() {
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn svd_of_zero() {
        let svd = compact_svd(&DMatrix::zeros(5, 2)).unwrap();
        assert_eq!(svd.s, DVector::zeros(2));
        assert!(orthonormality_residual(&svd.q) < 1e-12);
    }

    #[test]
    fn svd_reconstructs_random() {
        let mut rng = SeededRng::new(8);
        let m = rng.gaussian_matrix(10, 3);
        let svd = compact_svd(&m).unwrap();
        assert!((svd.recompose() - &m).norm() < 1e-12 * m.norm());
        assert!(svd.s[0] >= svd.s[1] && svd.s[1] >= svd.s[2]);
        assert!(orthonormality_residual(&svd.q) < 1e-12);
        assert!(orthonormality_residual(&svd.v) < 1e-12);
    }

    #[test]
    fn completion_of_coordinate_frame() {
        let u = StiefelPoint::new(DMatrix::identity(5, 2)).unwrap();
        let c = orthonormal_completion(&u).unwrap();
        assert_eq!(c.shape(), (5, 3));
        assert!(u.matrix().tr_mul(&c).norm() < 1e-12);
        // Completion spans the last three coordinates.
        assert!(c.rows(0, 2).norm() < 1e-12);
        assert!(orthonormality_residual(&c) < 1e-12);
    }

    #[test]
    fn completion_of_random_frame() {
        let u = StiefelPoint::random(8, 3, crate::rng::RngSeed(21));
        let c = orthonormal_completion(&u).unwrap();
        assert_eq!(c.shape(), (8, 5));
        let mut full = DMatrix::zeros(8, 8);
        full.columns_mut(0, 3).copy_from(u.matrix());
        full.columns_mut(3, 5).copy_from(&c);
        assert!(orthonormality_residual(&full) < 1e-12);
        assert!(u.matrix().tr_mul(&c).norm() < 1e-12);
    }

    #[test]
    fn completion_of_square_frame_fails() {
        let u = StiefelPoint::new(DMatrix::identity(3, 3)).unwrap();
        assert!(matches!(
            orthonormal_completion(&u),
            Err(Error::DimensionError(_))
        ));
    }

    #[test]
    fn arcsin_values() {
        let out = arcsin_clamped(&DVector::from_vec(vec![0.0, 0.5, 1.0])).unwrap();
        assert_eq!(out[0], 0.0);
        assert!((out[1] - PI / 6.0).abs() < 1e-15);
        assert_eq!(out[2], FRAC_PI_2);
        let out = arcsin_clamped(&DVector::from_vec(vec![1.0 + 1e-12])).unwrap();
        assert_eq!(out[0], FRAC_PI_2);
        assert!(matches!(
            arcsin_clamped(&DVector::from_vec(vec![1.1])),
            Err(Error::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn orthonormalize_replaces_collapsed_columns() {
        let u = DMatrix::identity(6, 2);
        // Second column lies inside span(U) and must be replaced.
        let mut q = DMatrix::zeros(6, 2);
        q[(2, 0)] = 1.0;
        q[(0, 1)] = 1.0;
        let out = orthonormalize_against(&u, &q);
        assert!(u.tr_mul(&out).norm() < 1e-14);
        assert!(orthonormality_residual(&out) < 1e-14);
        assert!((out[(2, 0)] - 1.0).abs() < 1e-14);
    }
}
