//! Reduction of the invariant quartic family to an affine quadric.
//!
//! On the open positive orthant the substitution `X_i = x_i^{2^m}` turns
//!
//! ```text
//! f(x) = A Σ_{i<j} x_i^{2^m} x_j^{2^m} + B (Σ x_i^{2^m})² + C Σ x_i^{2^m} + D
//! ```
//!
//! into the quadric `F(X) = A Σ_{i<j} X_i X_j + B (Σ X_i)² + C Σ X_i + D`,
//! whose homogeneous matrix is
//!
//! ```text
//!     | D     C/2 … C/2 |
//! Λ = | C/2           |      Λ0 = B on the diagonal, W = (A + 2B)/2 elsewhere.
//!     | …      Λ0     |
//! ```
//!
//! `Λ0` has the eigenvalue `B − W = −A/2` with multiplicity `n − 1` on the
//! hyperplane `Σ X_i = 0` and `B + (n − 1) W` on the axis `(1, …, 1)`.

mod classify;
mod profile;

pub use classify::{classify, Inertia, QuadricClass, QuadricKind};
pub use profile::{
    face_intersection, radial_profile, ChamberPiece, Contact, Degeneracy, Face, FaceContact,
    PieceShape, Sheet,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::InvariantPolynomial;
use crate::Evaluate;

/// Default relative tolerance for zero tests on eigenvalues and determinants.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Coefficients of `A σ2 + B σ1² + C σ1 + D` in `n` variables, with the
/// squares replaced by `2^m`-th powers (degree `2^{m+1}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticCoefficients {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub n: usize,
    pub m: u32,
}

impl QuarticCoefficients {
    pub fn new(a: f64, b: f64, c: f64, d: f64, n: usize) -> Result<Self> {
        Self::with_exponent(a, b, c, d, n, 1)
    }

    pub fn with_exponent(a: f64, b: f64, c: f64, d: f64, n: usize, m: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {n}")));
        }
        if m == 0 || m > 8 {
            return Err(Error::InvalidArgument(format!("exponent index m must be in 1..=8, got {m}")));
        }
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        Ok(Self { a, b, c, d, n, m })
    }

    /// `W = (A + 2B) / 2`, the off-diagonal entry of `Λ0`.
    pub fn w(&self) -> f64 {
        (self.a + 2.0 * self.b) / 2.0
    }

    /// Polynomial degree `2^{m+1}`.
    pub fn degree(&self) -> u32 {
        1 << (self.m + 1)
    }

    /// Largest coefficient magnitude, at least 1.
    pub fn scale(&self) -> f64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .fold(1.0f64, |acc, v| acc.max(v.abs()))
    }

    /// The substituted coordinates `X_i = x_i^{2^m}`.
    pub fn substituted(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .map(|&v| {
                let mut y = v;
                for _ in 0..self.m {
                    y *= y;
                }
                y
            })
            .collect()
    }

    /// `f(x)`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self.value(x))
    }

    /// The σ-basis form; only available for the quartic (`m = 1`).
    pub fn to_invariant(&self) -> Result<InvariantPolynomial> {
        if self.m != 1 {
            return Err(Error::Unsupported(format!(
                "degree-{} member has no σ-monomial form here",
                self.degree()
            )));
        }
        InvariantPolynomial::quartic(self.n, self.a, self.b, self.c, self.d)
    }
}

impl Evaluate for QuarticCoefficients {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        let mut e2 = 0.0;
        for &v in x {
            let mut y = v;
            for _ in 0..self.m {
                y *= y;
            }
            e2 += y * s;
            s += y;
        }
        self.a * e2 + self.b * s * s + self.c * s + self.d
    }
}

/// The affine quadric `F(X) = [1, X]ᵀ Λ [1, X]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricForm {
    pub coeffs: QuarticCoefficients,
    pub lambda: DMatrix<f64>,
    pub lambda0: DMatrix<f64>,
    pub w: f64,
    pub c_vec: DVector<f64>,
}

impl QuadricForm {
    pub fn n(&self) -> usize {
        self.coeffs.n
    }

    /// `F(X)` from the coefficients.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let q = &self.coeffs;
        let mut s = 0.0;
        let mut e2 = 0.0;
        for &v in x {
            e2 += v * s;
            s += v;
        }
        q.a * e2 + q.b * s * s + q.c * s + q.d
    }

    /// `F(X)` through the homogeneous matrix.
    pub fn eval_homogeneous(&self, x: &[f64]) -> f64 {
        let mut h = DVector::zeros(self.n() + 1);
        h[0] = 1.0;
        for (i, v) in x.iter().enumerate() {
            h[i + 1] = *v;
        }
        (h.transpose() * &self.lambda * &h)[(0, 0)]
    }

    /// `∇F(X) = 2 Λ0 X + C·1`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let xv = DVector::from_column_slice(x);
        (&self.lambda0 * xv * 2.0 + &self.c_vec).iter().copied().collect()
    }

    /// `‖Λ0‖_∞ = |B| + (n − 1)|W|`.
    pub fn lambda0_inf_norm(&self) -> f64 {
        self.coeffs.b.abs() + (self.n() as f64 - 1.0) * self.w.abs()
    }

    /// Scale used by the zero tests: `1 + ‖Λ0‖_∞`.
    pub fn zero_scale(&self) -> f64 {
        1.0 + self.lambda0_inf_norm()
    }
}

/// Builds `Λ`, `Λ0` and `C·1` for the substituted quadric.
pub fn substitute(q: &QuarticCoefficients) -> QuadricForm {
    let n = q.n;
    let w = q.w();
    let lambda0 = DMatrix::from_fn(n, n, |i, j| if i == j { q.b } else { w });
    let c_vec = DVector::from_element(n, q.c);
    let mut lambda = DMatrix::zeros(n + 1, n + 1);
    lambda[(0, 0)] = q.d;
    for i in 0..n {
        lambda[(0, i + 1)] = q.c / 2.0;
        lambda[(i + 1, 0)] = q.c / 2.0;
    }
    lambda.view_mut((1, 1), (n, n)).copy_from(&lambda0);
    QuadricForm {
        coeffs: *q,
        lambda,
        lambda0,
        w,
        c_vec,
    }
}

/// Closed-form spectral data of `Λ0` plus the centre of the quadric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    /// `B − W = −A/2`, multiplicity `n − 1`.
    pub lambda_rep: f64,
    /// `B + (n − 1) W`, eigenvector `(1, …, 1)`.
    pub lambda_axis: f64,
    pub det_lambda0: f64,
    /// Determinant of the full `(n+1) × (n+1)` matrix, computed numerically.
    pub det_lambda: f64,
    /// Common coordinate `c` of the centre `(c, …, c)`; absent when
    /// `lambda_axis` vanishes.
    pub center: Option<f64>,
    /// `F` at the centre.
    pub center_value: Option<f64>,
    /// `nC / (4((n − 1)W − 1))`, kept for comparison with `center`.
    pub alt_center: Option<f64>,
    /// `(1, …, 1) / √n`.
    pub axis_direction: Vec<f64>,
}

impl SpectralData {
    /// All `n` eigenvalues of `Λ0` with multiplicity, repeated one first.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.axis_direction.len();
        let mut v = vec![self.lambda_rep; n - 1];
        v.push(self.lambda_axis);
        v
    }

    /// `(c, …, c)`.
    pub fn center_point(&self) -> Option<Vec<f64>> {
        self.center.map(|c| vec![c; self.axis_direction.len()])
    }

    /// Whether the alternative centre expression has the same sign as the
    /// solved centre. `None` when either is undefined.
    pub fn alt_center_sign_agrees(&self) -> Option<bool> {
        match (self.center, self.alt_center) {
            (Some(c), Some(p)) => Some(c.signum() == p.signum() || c == 0.0 || p == 0.0),
            _ => None,
        }
    }
}

/// Spectral data with the default tolerance.
pub fn spectral(qf: &QuadricForm) -> SpectralData {
    spectral_with_tol(qf, DEFAULT_TOL)
}

/// Spectral data; the centre is reported absent when
/// `|λ_axis| ≤ tol · (1 + ‖Λ0‖_∞)`.
pub fn spectral_with_tol(qf: &QuadricForm, tol: f64) -> SpectralData {
    let q = &qf.coeffs;
    let n = q.n as f64;
    let lambda_rep = q.b - qf.w;
    let lambda_axis = q.b + (n - 1.0) * qf.w;
    let det_lambda0 = lambda_rep.powi(q.n as i32 - 1) * lambda_axis;
    let det_lambda = qf.lambda.clone().determinant();

    let center = if lambda_axis.abs() <= tol * qf.zero_scale() {
        None
    } else {
        Some(-q.c / (2.0 * lambda_axis))
    };
    // F(c·1) = n c (λ_axis c + C) + D = D + n C c / 2 at the stationary point.
    let center_value = center.map(|c| q.d + n * q.c * c / 2.0);
    let alt_den = 4.0 * ((n - 1.0) * qf.w - 1.0);
    let alt_center = if alt_den == 0.0 {
        None
    } else {
        Some(n * q.c / alt_den)
    };
    SpectralData {
        lambda_rep,
        lambda_axis,
        det_lambda0,
        det_lambda,
        center,
        center_value,
        alt_center,
        axis_direction: vec![1.0 / n.sqrt(); q.n],
    }
}
