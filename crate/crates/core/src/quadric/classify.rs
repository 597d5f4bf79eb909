use serde::{Deserialize, Serialize};

use super::{QuadricForm, SpectralData};

/// Affine type of the substituted quadric in `X`-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadricKind {
    Ellipsoid,
    TwoSheetedHyperboloid,
    OneSheetedHyperboloid,
    ParaboloidLike,
    ConeLike,
    Empty,
    DegenerateOther,
}

impl QuadricKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            QuadricKind::Ellipsoid => "ellipsoid",
            QuadricKind::TwoSheetedHyperboloid => "two_sheeted_hyperboloid",
            QuadricKind::OneSheetedHyperboloid => "one_sheeted_hyperboloid",
            QuadricKind::ParaboloidLike => "paraboloid_like",
            QuadricKind::ConeLike => "cone_like",
            QuadricKind::Empty => "empty",
            QuadricKind::DegenerateOther => "degenerate_other",
        }
    }
}

/// Signs of the eigenvalues of `Λ0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricClass {
    pub kind: QuadricKind,
    pub inertia: Inertia,
    pub nondegenerate: bool,
}

fn sign(v: f64, zero: f64) -> i8 {
    if v.abs() <= zero {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Affine classification from the two closed-form eigenvalues and the value
/// of `F` at the centre.
///
/// With the centre at the origin the quadric reads `Σ λ_i y_i² + F(c) = 0`.
/// For a definite `Λ0` it is an ellipsoid when `F(c)` has the opposite sign
/// of the eigenvalues and empty otherwise. When one eigenvalue has the
/// opposite sign of the other `n − 1` ("majority"), `F(c)` with the majority
/// sign separates the surface along the minority direction into two
/// sheets; the opposite sign gives one sheet. `F(c) = 0` is a cone.
pub fn classify(qf: &QuadricForm, sd: &SpectralData, tol: f64) -> QuadricClass {
    let n = qf.n();
    let scale = qf.zero_scale();
    let zero = tol * scale;

    let rep = sign(sd.lambda_rep, zero);
    let axis = sign(sd.lambda_axis, zero);
    let mut inertia = Inertia {
        plus: 0,
        minus: 0,
        zero: 0,
    };
    for (s, mult) in [(rep, n - 1), (axis, 1)] {
        match s {
            1 => inertia.plus += mult,
            -1 => inertia.minus += mult,
            _ => inertia.zero += mult,
        }
    }

    let full_scale = 1.0 + qf.lambda.iter().fold(0.0f64, |m, v| m.max(v.abs())) * (n as f64 + 1.0);
    let nondegenerate = sd.det_lambda.abs() > tol * full_scale.powi(n as i32 + 1);

    let kind = if inertia.zero > 0 {
        // λ_axis = 0 leaves the linear term along the null direction, so a
        // non-zero C makes it parabolic. A null λ_rep direction is
        // orthogonal to C·1 and gives a cylinder over a lower quadric.
        if axis == 0 && rep != 0 && qf.coeffs.c.abs() > zero {
            QuadricKind::ParaboloidLike
        } else {
            QuadricKind::DegenerateOther
        }
    } else {
        let fc = sd.center_value.unwrap_or(qf.coeffs.d);
        let center_term = sd.center.map_or(0.0, |c| n as f64 * (qf.coeffs.c * c).abs() / 2.0);
        let fc_sign = sign(fc, tol * (1.0 + qf.coeffs.d.abs() + center_term));
        if fc_sign == 0 {
            QuadricKind::ConeLike
        } else if rep == axis {
            if fc_sign == rep {
                QuadricKind::Empty
            } else {
                QuadricKind::Ellipsoid
            }
        } else if fc_sign == rep {
            QuadricKind::TwoSheetedHyperboloid
        } else {
            QuadricKind::OneSheetedHyperboloid
        }
    };

    QuadricClass {
        kind,
        inertia,
        nondegenerate,
    }
}
