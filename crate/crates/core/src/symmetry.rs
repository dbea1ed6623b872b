//! The `SO(n)` action `(x | ℓ | y) ↦ (x | Rℓ | Ry)`, its invariants and the
//! factorized exponential map.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::optimality::f_det;
use crate::trig::{sin_minus_tcos, tau_minus_sincos};
use crate::vecops::{dot, wedge_norm};

/// Orthogonality and determinant tolerance for [`so_n_act`].
pub const ROTATION_TOL: f64 = 1e-10;

/// Coordinates of a point of `G / SO(n)`.
///
/// `y2` is stored alongside the four invariants because it cannot be
/// recovered from them when `ℓ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "InvariantRepr", into = "InvariantRepr")]
pub struct InvariantPoint {
    pub x: f64,
    pub l2: f64,
    pub ldoty: f64,
    pub lwedge: f64,
    pub y2: f64,
}

#[derive(Serialize, Deserialize)]
struct InvariantRepr {
    x: f64,
    l2: f64,
    ldoty: f64,
    lwedge: f64,
    y2: f64,
    #[serde(default)]
    phi: Option<f64>,
}

impl From<InvariantRepr> for InvariantPoint {
    fn from(r: InvariantRepr) -> Self {
        InvariantPoint {
            x: r.x,
            l2: r.l2,
            ldoty: r.ldoty,
            lwedge: r.lwedge,
            y2: r.y2,
        }
    }
}

impl From<InvariantPoint> for InvariantRepr {
    fn from(p: InvariantPoint) -> Self {
        InvariantRepr {
            x: p.x,
            l2: p.l2,
            ldoty: p.ldoty,
            lwedge: p.lwedge,
            y2: p.y2,
            phi: p.phi(),
        }
    }
}

impl InvariantPoint {
    pub fn l_norm(&self) -> f64 {
        self.l2.sqrt()
    }

    pub fn y_norm(&self) -> f64 {
        self.y2.sqrt()
    }

    /// Angle between `ℓ` and `y` in `(0, π)`; defined only when `lwedge > 0`.
    pub fn phi(&self) -> Option<f64> {
        (self.lwedge > 0.0).then(|| self.lwedge.atan2(self.ldoty))
    }

    /// `y²` implied by Lagrange's identity; differs from `y2` only by rounding
    /// when `l2 > 0`.
    pub fn y2_from_invariants(&self) -> Option<f64> {
        (self.l2 > 0.0).then(|| (self.ldoty * self.ldoty + self.lwedge * self.lwedge) / self.l2)
    }

    pub fn max_abs_diff(&self, o: &InvariantPoint) -> f64 {
        [
            self.x - o.x,
            self.l2 - o.l2,
            self.ldoty - o.ldoty,
            self.lwedge - o.lwedge,
            self.y2 - o.y2,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }

    /// A point of `Gⁿ` with these invariants: `ℓ = |ℓ|e₁`,
    /// `y = (ℓ·y/|ℓ|)e₁ + (|ℓ∧y|/|ℓ|)e₂`, or `y = |y|e₁` when `ℓ = 0`.
    pub fn representative(&self, n: usize) -> Result<GroupPoint> {
        if n == 0 {
            return Err(Error::InvalidParams("dimension must be positive".into()));
        }
        let mut l = vec![0.0; n];
        let mut y = vec![0.0; n];
        let ln = self.l_norm();
        if ln > 0.0 {
            l[0] = ln;
            y[0] = self.ldoty / ln;
            if self.lwedge > 0.0 {
                if n < 2 {
                    return Err(Error::InvalidParams("a nonzero wedge needs n >= 2".into()));
                }
                y[1] = self.lwedge / ln;
            }
        } else {
            y[0] = self.y_norm();
        }
        GroupPoint::new(self.x, l, y)
    }
}

/// `(x | Rℓ | Ry)` for `R ∈ SO(n)`.
pub fn so_n_act(r: &DMatrix<f64>, p: &GroupPoint) -> Result<GroupPoint> {
    let n = p.dim();
    if r.nrows() != n || r.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: r.nrows(),
            right: n,
        });
    }
    let defect = (r.transpose() * r - DMatrix::<f64>::identity(n, n)).amax();
    if defect > ROTATION_TOL {
        return Err(Error::NotSpecialOrthogonal(format!(
            "|RᵀR − I| = {defect:e}"
        )));
    }
    let det = r.determinant();
    if (det - 1.0).abs() > ROTATION_TOL {
        return Err(Error::NotSpecialOrthogonal(format!("det R = {det}")));
    }
    let apply = |v: &[f64]| {
        (r * nalgebra::DVector::from_column_slice(v))
            .as_slice()
            .to_vec()
    };
    Ok(GroupPoint {
        x: p.x,
        l: apply(&p.l),
        y: apply(&p.y),
    })
}

pub fn invariants_of(p: &GroupPoint) -> InvariantPoint {
    InvariantPoint {
        x: p.x,
        l2: dot(&p.l, &p.l),
        ldoty: dot(&p.l, &p.y),
        lwedge: wedge_norm(&p.l, &p.y),
        y2: dot(&p.y, &p.y),
    }
}

/// Factorized exponential map at rescaled time `tau`:
///
/// ```text
/// x   = (2/ρ) sinτ sin(τ+α)
/// ℓ²  = (4/ρ²)(sin²τ cos²(τ+α) + τ²σ²)
/// ℓ·y = (2/ρ³) cos(τ+α) (sinτ (τ − sinτ cosτ) + 2τσ² (sinτ − τ cosτ))
/// |ℓ∧y| = (2σ/ρ³) f(τ, α)
/// y²  = (1/ρ⁴)((τ − sinτ cosτ)² + 4σ² cos²(τ+α)(sinτ − τ cosτ)²)
/// ```
pub fn reduced_exp(tau: f64, rho: f64, sigma: f64, alpha: f64) -> InvariantPoint {
    let s = tau.sin();
    let (sa, ca) = (tau + alpha).sin_cos();
    let a = tau_minus_sincos(tau);
    let b = sin_minus_tcos(tau);
    let r2 = rho * rho;
    let r3 = r2 * rho;
    InvariantPoint {
        x: 2.0 / rho * s * sa,
        l2: 4.0 / r2 * (s * s * ca * ca + tau * tau * sigma * sigma),
        ldoty: 2.0 / r3 * ca * (s * a + 2.0 * tau * sigma * sigma * b),
        lwedge: (2.0 * sigma / r3 * f_det(tau, alpha)).max(0.0),
        y2: (a * a + 4.0 * sigma * sigma * ca * ca * b * b) / (r2 * r2),
    }
}
