//! Cut time, cut locus, first conjugate time and the analytic functions
//! behind the global optimality argument.
//!
//! Everything here works in the rescaled time `τ = ρt / (2√(1+σ²))`, in which
//! every helix loses optimality at `τ = π`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::{physical_time, GeodesicParams, Helix};
use crate::group::GroupPoint;
use crate::roots::{bisect, newton_polish, sign_changes};
use crate::symmetry::invariants_of;
use crate::trig::{
    a1_minus, f_wedge, sin_minus_tcos, tan_fixed_point, tau_minus_sin, tau_minus_sincos,
};

/// Width of the `α ∈ {0, π}` window in which the conjugate time equals the cut time.
pub const ALPHA_AXIS_TOL: f64 = 1e-9;

/// Bisection tolerance in `τ` for the conjugate-time root.
pub const TAU_XTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutMultiplicity {
    Two,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutInfo {
    pub t_cut: f64,
    pub is_conjugate_at_cut: bool,
    pub multiplicity: CutMultiplicity,
}

/// `2π√(1+σ²)/ρ` for a helix; lines never lose optimality.
pub fn cut_time(g: &GeodesicParams) -> f64 {
    match g {
        GeodesicParams::Line { .. } => f64::INFINITY,
        GeodesicParams::Helix(h) => physical_time(h, PI),
    }
}

/// Cut time, conjugacy at the cut point and the number of minimizers reaching it.
pub fn cut_info(h: &Helix) -> CutInfo {
    let planar = h.is_planar();
    CutInfo {
        t_cut: physical_time(h, PI),
        is_conjugate_at_cut: planar || on_alpha_axis(h.alpha),
        multiplicity: if planar {
            CutMultiplicity::Infinite
        } else {
            CutMultiplicity::Two
        },
    }
}

/// `α ≡ 0 (mod π)` within [`ALPHA_AXIS_TOL`].
pub fn on_alpha_axis(alpha: f64) -> bool {
    let r = alpha.rem_euclid(PI);
    r.min(PI - r) <= ALPHA_AXIS_TOL
}

/// `|ℓ|³|ℓ∧y| − π(ℓ·y)²`; nonnegative exactly on the closure of the cut
/// locus within the plane `x = 0`, zero on its conjugate boundary.
pub fn cut_locus_margin(q: &GroupPoint) -> f64 {
    let inv = invariants_of(q);
    let ln = inv.l_norm();
    ln * ln * ln * inv.lwedge - PI * inv.ldoty * inv.ldoty
}

/// Membership in the cut locus from the identity: `x = 0` and either
/// `ℓ = 0 ≠ y`, or `ℓ∧y ≠ 0` with `π(ℓ·y)² ≤ |ℓ|³|ℓ∧y|`.
///
/// `tol` is relative to the homogeneous size `s = max(|x|, |ℓ|, √|y|)`.
pub fn in_cut_locus(q: &GroupPoint, tol: f64) -> bool {
    let s = q.homogeneous_scale();
    if s == 0.0 || q.x.abs() > tol * s {
        return false;
    }
    let inv = invariants_of(q);
    let (ln, yn) = (inv.l_norm(), inv.y_norm());
    if ln <= tol * s {
        return yn > tol * s * s;
    }
    let m = ln.max(yn);
    if inv.lwedge <= tol * m * m {
        return false;
    }
    let s3 = s * s * s;
    cut_locus_margin(q) >= -tol * s3 * s3
}

/// Optimal time to a cut point: `√(4π|y|)` when `ℓ∧y = 0`, otherwise
/// `√(4π|ℓ∧y|/|ℓ| + |ℓ|²)` (that is `√(4π|y| sinφ + |ℓ|²)`).
pub fn cut_time_at_point(q: &GroupPoint, tol: f64) -> Result<f64> {
    if !in_cut_locus(q, tol) {
        return Err(Error::NotInCutLocus);
    }
    let inv = invariants_of(q);
    let ln = inv.l_norm();
    if ln <= tol * q.homogeneous_scale() {
        Ok((4.0 * PI * inv.y_norm()).sqrt())
    } else {
        Ok((4.0 * PI * inv.lwedge / ln + inv.l2).sqrt())
    }
}

/// Lower edge `φ₀ ∈ (0, π/2)` of the cut-locus band `φ ∈ [φ₀, π − φ₀]` at
/// fixed `|ℓ|`, `|y|`.
pub fn phi0(l_norm: f64, y_norm: f64) -> f64 {
    let l2 = l_norm * l_norm;
    let r = 2.0 * PI * y_norm;
    // −|ℓ|² + √(|ℓ|⁴ + r²) without cancellation
    let num = r * r / (l2 + (l2 * l2 + r * r).sqrt());
    (num / (2.0 * PI * y_norm)).clamp(-1.0, 1.0).asin()
}

/// `f(τ, α) = τ² − τ sinτ cosτ − 2 sinτ (sinτ − τ cosτ) cos²(τ+α)`,
/// evaluated as `f∧(τ) + 2 sinτ (sinτ − τ cosτ) sin²(τ+α)`.
pub fn f_det(tau: f64, alpha: f64) -> f64 {
    let sa = (tau + alpha).sin();
    f_wedge(tau) + 2.0 * tau.sin() * sin_minus_tcos(tau) * sa * sa
}

/// `A(τ, α) = τ²(sinτ − τ cosτ)² − (τ² − sin²τ)² cos²(τ+α)`,
/// evaluated as `A₁⁻A₁⁺ + (τ² − sin²τ)² sin²(τ+α)`.
pub fn a_fun(tau: f64, alpha: f64) -> f64 {
    let s = tau.sin();
    let sa = (tau + alpha).sin();
    let d = tau_minus_sin(tau) * (tau + s);
    let a1_plus = tau * sin_minus_tcos(tau) + d;
    a1_minus(tau) * a1_plus + d * d * sa * sa
}

/// `B(τ, α) = ½ sinτ (sinτ − τ cosτ) f(τ, α)`
pub fn b_fun(tau: f64, alpha: f64) -> f64 {
    0.5 * tau.sin() * sin_minus_tcos(tau) * f_det(tau, alpha)
}

/// `J₄ = (256σ/ρ⁹) f (Aσ² + B)`, the Jacobian of
/// `(τ, 1/ρ, σ, α) ↦ (x, ℓ², ℓ·y, y²)`.
pub fn jacobian_j4(tau: f64, rho: f64, sigma: f64, alpha: f64) -> f64 {
    256.0 * sigma / rho.powi(9)
        * f_det(tau, alpha)
        * (a_fun(tau, alpha) * sigma * sigma + b_fun(tau, alpha))
}

/// Jacobian of `(σ, ρ, α) ↦ (x, ℓ², ℓ·y)` at fixed `τ`:
///
/// ```text
/// J₃ = −(32στ/ρ⁷) sinτ [2σ²τ²(sinτ − τ cosτ) + τ sinτ (τ − sinτ cosτ)
///                        + 2 sinτ cos²(τ+α) f∧(τ)]
/// ```
pub fn jacobian_j3(tau: f64, rho: f64, sigma: f64, alpha: f64) -> f64 {
    let s = tau.sin();
    let ca = (tau + alpha).cos();
    let bracket = 2.0 * sigma * sigma * tau * tau * sin_minus_tcos(tau)
        + tau * s * tau_minus_sincos(tau)
        + 2.0 * s * ca * ca * f_wedge(tau);
    -32.0 * sigma * tau / rho.powi(7) * s * bracket
}

/// Jacobian of `(ρ, σ) ↦ (ℓ², ℓ·y)` on the line `α = −τ` at fixed `τ`:
/// `J₂ = (16στ/ρ⁶)(2σ²τ²(sinτ − τ cosτ) + sinτ (3τ² + τ cosτ sinτ − 4 sin²τ))`.
pub fn jacobian_j2(tau: f64, rho: f64, sigma: f64) -> f64 {
    16.0 * sigma * tau / rho.powi(6)
        * (2.0 * sigma * sigma * tau * tau * sin_minus_tcos(tau) + tau.sin() * j2_quartic(tau))
}

/// `f₀(τ) = τ (τ − sinτ cosτ)`
pub fn f0(tau: f64) -> f64 {
    tau * tau_minus_sincos(tau)
}

/// `f₁(τ) = τ² + τ sinτ cosτ − 2 sin²τ` (the same function as `f∧`).
pub fn f1(tau: f64) -> f64 {
    f_wedge(tau)
}

/// `3τ² + τ cosτ sinτ − 4 sin²τ = f∧(τ) + 2(τ² − sin²τ)`
pub fn j2_quartic(tau: f64) -> f64 {
    f_wedge(tau) + 2.0 * tau_minus_sin(tau) * (tau + tau.sin())
}

/// First conjugate rescaled time of a helix with pitch `sigma > 0` and shift
/// `alpha`: `π` on the axis `α ∈ {0, π}`, else the first root of `Aσ² + B`
/// in `(π, τ_A)`, where `τ_A ≤ τ₀` is the first zero of `A(·, α)` past `π`.
pub fn conjugate_tau(sigma: f64, alpha: f64) -> Result<f64> {
    if on_alpha_axis(alpha) {
        return Ok(PI);
    }
    let t0 = tan_fixed_point();
    let a = |t: f64| a_fun(t, alpha);
    let steps = ((t0 + 0.1 - PI) / 1e-3).ceil() as usize;
    let &(lo, hi) =
        sign_changes(a, PI, t0 + 0.1, steps)
            .first()
            .ok_or(Error::RootNotBracketed {
                lo: PI,
                hi: t0 + 0.1,
            })?;
    let tau_a = bisect(a, lo, hi, TAU_XTOL)?;

    let g = |t: f64| a_fun(t, alpha) * sigma * sigma + b_fun(t, alpha);
    let &(lo, hi) = sign_changes(g, PI, tau_a, 256)
        .first()
        .ok_or(Error::RootNotBracketed { lo: PI, hi: tau_a })?;
    let root = bisect(g, lo, hi, TAU_XTOL)?;
    Ok(newton_polish(g, root, lo, hi))
}

/// First conjugate time in physical units; `2π/ρ` for planar helices and
/// infinite for lines.
pub fn conjugate_time(g: &GeodesicParams) -> Result<f64> {
    match g {
        GeodesicParams::Line { .. } => Ok(f64::INFINITY),
        GeodesicParams::Helix(h) if h.is_planar() => Ok(2.0 * PI / h.rho),
        GeodesicParams::Helix(h) => Ok(physical_time(h, conjugate_tau(h.sigma, h.alpha)?)),
    }
}
