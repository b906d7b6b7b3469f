//! Choice of the lower-right block `c` that makes the generator of the short
//! quasi-geodesic nearly horizontal.
//!
//! With `x = [0 −bᵀ; b 0]` and `y = [a 0; 0 c]` the product
//! `expm(x) expm(y)` has logarithm `[A −Bᵀ; B C]`. Sorting the
//! Baker-Campbell-Hausdorff terms by block, the lower-right block up to
//! combined order four is
//!
//! ```text
//! C(c) ≈ c + (2 b a bᵀ − {b bᵀ, c}) / 12 − (2 [c, b a bᵀ] − [c, {b bᵀ, c}]) / 24
//! ```
//!
//! and one fixed-point step for `C(c) = 0` from `c = 0` gives `c₁ = −b a bᵀ / 6`.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::matfunc::{self, SkewSymmetricMatrix, SpecialOrthogonalMatrix};

/// The factors `a = logm(Rᵀ)`, `b = ΣVᵀ` and the chosen correction `c`.
#[derive(Debug, Clone)]
pub struct BchFactors {
    pub a: SkewSymmetricMatrix,
    pub b: DMatrix<f64>,
    pub c: SkewSymmetricMatrix,
}

impl BchFactors {
    /// `δ = max(‖a‖₂, ‖b‖₂)`.
    pub fn delta(&self) -> f64 {
        matfunc::spectral_norm(self.a.matrix()).max(matfunc::spectral_norm(&self.b))
    }
}

/// `c₁(a, b) = −b a bᵀ / 6`.
pub fn bch_c1(a: &SkewSymmetricMatrix, b: &DMatrix<f64>) -> SkewSymmetricMatrix {
    SkewSymmetricMatrix::skew_part(&(b * a.matrix() * b.transpose() * (-1.0 / 6.0)))
}

fn commutator(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x * y - y * x
}

fn anticommutator(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x * y + y * x
}

/// The order-four truncation of `C(c)` shown in the module docs.
pub fn c_expansion(
    a: &SkewSymmetricMatrix,
    b: &DMatrix<f64>,
    c: &SkewSymmetricMatrix,
) -> DMatrix<f64> {
    let c = c.matrix();
    let bab = b * a.matrix() * b.transpose();
    let bb = b * b.transpose();
    let anti = anticommutator(&bb, c);
    c + (&bab * 2.0 - &anti) / 12.0 - (commutator(c, &bab) * 2.0 - commutator(c, &anti)) / 24.0
}

/// Iterates `c ← c − C_trunc(c)` from `c = 0`. One iteration yields [`bch_c1`].
pub fn bch_fixed_point(
    a: &SkewSymmetricMatrix,
    b: &DMatrix<f64>,
    iterations: usize,
) -> SkewSymmetricMatrix {
    let p = a.dim();
    let mut c = SkewSymmetricMatrix::zeros(p);
    for i in 0..iterations {
        if i == 0 {
            c = bch_c1(a, b);
            continue;
        }
        let next = c.matrix() - c_expansion(a, b, &c);
        c = SkewSymmetricMatrix::skew_part(&next);
    }
    c
}

fn horizontal(b: &DMatrix<f64>) -> DMatrix<f64> {
    let p = b.ncols();
    let mut x = DMatrix::zeros(2 * p, 2 * p);
    x.view_mut((p, 0), (p, p)).copy_from(b);
    x.view_mut((0, p), (p, p)).copy_from(&(-b.transpose()));
    x
}

fn vertical(a: &SkewSymmetricMatrix, c: &SkewSymmetricMatrix) -> DMatrix<f64> {
    let p = a.dim();
    let mut y = DMatrix::zeros(2 * p, 2 * p);
    y.view_mut((0, 0), (p, p)).copy_from(a.matrix());
    y.view_mut((p, p), (p, p)).copy_from(c.matrix());
    y
}

/// Lower-right block `C` of `logm(expm(x) expm(y))`, computed exactly.
pub fn c_residual(
    a: &SkewSymmetricMatrix,
    b: &DMatrix<f64>,
    c: &SkewSymmetricMatrix,
) -> Result<SkewSymmetricMatrix> {
    let p = a.dim();
    let product = matfunc::matrix_exp(&horizontal(b)) * matfunc::matrix_exp(&vertical(a, c));
    let g = SpecialOrthogonalMatrix::new(product)?.log()?;
    Ok(SkewSymmetricMatrix::skew_part(
        &g.matrix().view((p, p), (p, p)).into_owned(),
    ))
}

/// `(7/216 + 1/(1 − δ)) δ⁵`.
pub fn remainder_bound(delta: f64) -> f64 {
    (7.0 / 216.0 + 1.0 / (1.0 - delta)) * delta.powi(5)
}
