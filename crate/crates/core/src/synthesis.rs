//! Optimal synthesis: every length-minimizing geodesic from the identity to a
//! target, and the sub-Riemannian distance.
//!
//! Generic targets are solved in invariants. For fixed rescaled time `τ` the
//! three equations for `(x, ℓ², ℓ·y)` reduce to a strictly increasing cubic in
//! `w = |ℓ₁|`; the remaining equation, posed on `|ℓ∧y|`, is a scalar residual
//! `R(τ)` that is positive where the inner problem first becomes solvable and
//! changes sign before `τ = π` exactly when the target is off the cut locus.

use std::f64::consts::PI;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::{exp_point, GeodesicParams, Helix};
use crate::group::{classify, multiply, reduce_to_origin, GroupPoint, Stratum};
use crate::optimality::{cut_locus_margin, f_det};
use crate::roots::{bisect, newton_polish, MAX_NEWTON};
use crate::symmetry::{invariants_of, InvariantPoint};
use crate::trig::{f_wedge, sin_minus_tcos, tau_minus_sincos};
use crate::vecops::{dot, lincomb, norm, scale};

/// Cells of the outer `τ` grid.
pub const OUTER_CELLS: usize = 128;

/// Relative endpoint residual above which a synthesized solution is rejected.
pub const ENDPOINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    Unique,
    MaxwellPair,
    InfiniteFamily,
}

/// An arclength geodesic from the identity and the time it reaches the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub params: GeodesicParams,
    pub time: f64,
}

/// How a result was obtained.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub branch: String,
    /// Rescaled time of the selected solution.
    pub tau_star: Option<f64>,
    /// Smallest `τ` at which the inner problem is solvable.
    pub tau_min: Option<f64>,
    /// Every refined root of the outer residual, ascending.
    pub outer_roots: Vec<f64>,
    /// Largest coordinate error of any returned endpoint.
    pub endpoint_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub solutions: Vec<Solution>,
    pub distance: f64,
    pub multiplicity: Multiplicity,
    pub stratum: Stratum,
    /// The target is a conjugate point of the returned minimizers.
    pub conjugate_at_cut: bool,
    pub diagnostics: Diagnostics,
}

/// Solution of the inner problem at fixed `τ`, in the `(k, k⊥)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolution {
    pub rho: f64,
    pub sigma: f64,
    pub alpha: f64,
    /// `ℓ = (l1, m)` and `y = (y1, y2)` in the `(k, k⊥)` basis.
    pub l1: f64,
    pub m: f64,
    pub y1: f64,
    pub y2: f64,
}

/// Target data the generic branch works with.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    x: f64,
    l2: f64,
    p: f64,
    lwedge: f64,
}

impl From<&InvariantPoint> for Reduced {
    fn from(i: &InvariantPoint) -> Self {
        Reduced {
            x: i.x,
            l2: i.l2,
            p: i.ldoty,
            lwedge: i.lwedge,
        }
    }
}

/// Unique `w ≥ 0` with `c3 w³ + c1 w = q` for `c3, c1 > 0`, `q ≥ 0`.
///
/// Newton from an upper bound on a convex increasing function decreases
/// monotonically to the root.
fn increasing_cubic_root(c3: f64, c1: f64, q: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    let mut w = (q / c1).min((q / c3).cbrt());
    for _ in 0..MAX_NEWTON {
        let h = (c3 * w * w + c1) * w - q;
        let d = 3.0 * c3 * w * w + c1;
        let step = h / d;
        if step.is_nan() || step <= 0.0 {
            break;
        }
        w -= step;
        if step <= 1e-16 * w {
            break;
        }
    }
    w.max(0.0)
}

/// Solves `(ρ, σ, α) ↦ (x, ℓ², ℓ·y)` at rescaled time `tau ∈ (0, π)`.
///
/// With `S = sinτ`, `a = τ − S cosτ`, `b = S − τ cosτ` and `w = |ℓ₁|`:
/// `(f∧/(4S²τ)) w³ + (x² f∧/(4S²τ) + (ℓ² + x²) b/(2τS)) w = |ℓ·y|`. Returns
/// `None` when the root violates `w ≤ |ℓ|`, i.e. below `τ_min`.
pub fn solve_at_tau(x: f64, l2: f64, p: f64, tau: f64) -> Option<InnerSolution> {
    if !(tau > 0.0 && tau < PI) {
        return None;
    }
    let s = tau.sin();
    let a = tau_minus_sincos(tau);
    let b = sin_minus_tcos(tau);
    let fw = f_wedge(tau);
    let c3 = fw / (4.0 * s * s * tau);
    let c1 = x * x * c3 + (l2 + x * x) * b / (2.0 * tau * s);
    let w = increasing_cubic_root(c3, c1, p.abs());
    let slack = l2 - w * w;
    if slack < -1e-12 * l2.max(f64::MIN_POSITIVE) {
        return None;
    }
    let l1 = if p < 0.0 { -w } else { w };
    let m = slack.max(0.0).sqrt();
    let chord = (w * w + x * x).sqrt();
    if chord == 0.0 {
        return None;
    }
    let rho = 2.0 * s / chord;
    let u = 1.0 / rho;
    let sigma = m * rho / (2.0 * tau);
    let phase = x.atan2(l1);
    let ca = l1 / chord;
    Some(InnerSolution {
        rho,
        sigma,
        alpha: (phase - tau).rem_euclid(2.0 * PI),
        l1,
        m,
        y1: u * u * a,
        y2: 2.0 * sigma * ca * b * u * u,
    })
}

/// `|ℓ∧y| − |ℓ∧y|_model(τ)`; shares its sign with `F_{y²} = ρ⁴ R`.
///
/// The inner solve matches `ℓ²` and `ℓ·y`, so the `y²` gap equals
/// `(W² − W²_model)/ℓ²`; the wedge form keeps relative accuracy for tiny `W`.
fn residual(t: &Reduced, tau: f64) -> f64 {
    match solve_at_tau(t.x, t.l2, t.p, tau) {
        Some(s) => t.lwedge - 2.0 * s.sigma / s.rho.powi(3) * f_det(tau, s.alpha),
        None => f64::NAN,
    }
}

/// Smallest `τ` at which the inner problem is solvable, where `σ(τ) = 0`:
/// the root of `|ℓ|(ℓ² + x²)(τ − sinτ cosτ)/(4 sin²τ) = |ℓ·y|`.
pub fn tau_min(x: f64, l2: f64, p: f64) -> Result<f64> {
    if p == 0.0 {
        return Ok(0.0);
    }
    let k = l2.sqrt() * (l2 + x * x) / 4.0;
    let g = |t: f64| {
        if t <= 0.0 {
            -p.abs()
        } else {
            let s = t.sin();
            k * tau_minus_sincos(t) / (s * s) - p.abs()
        }
    };
    bisect(g, 0.0, PI, 0.0)
}

/// `(τ, F_{y²}(τ))` over `tau_grid`; `None` where the inner problem has no
/// solution.
pub fn f_y2_profile(target: &InvariantPoint, tau_grid: &[f64]) -> Vec<(f64, Option<f64>)> {
    tau_grid
        .iter()
        .map(|&tau| {
            let f = solve_at_tau(target.x, target.l2, target.ldoty, tau).map(|s| {
                let r4 = s.rho.powi(4);
                target.y2 * r4 - r4 * (s.y1 * s.y1 + s.y2 * s.y2)
            });
            (tau, f)
        })
        .collect()
}

/// Minimizers from the identity to `target`.
pub fn synthesize(target: &GroupPoint, tol: f64) -> Result<SynthesisResult> {
    let n = target.dim();
    let s = target.homogeneous_scale();
    let ln = norm(&target.l);
    let yn = norm(&target.y);
    let stratum = classify(target, tol);

    let mut result = if target.x.abs().max(ln).max(yn) <= tol {
        SynthesisResult {
            solutions: Vec::new(),
            distance: 0.0,
            multiplicity: Multiplicity::Unique,
            stratum,
            conjugate_at_cut: false,
            diagnostics: Diagnostics {
                branch: "identity".into(),
                ..Default::default()
            },
        }
    } else if yn <= tol * s * s {
        let t = (target.x * target.x + ln * ln).sqrt();
        let params = GeodesicParams::Line {
            c0: target.x / t,
            c: scale(&target.l, 1.0 / t),
        };
        single(params, t, None, stratum, false, "line")
    } else if stratum != Stratum::G2 {
        synthesize_heisenberg(target, s, tol, stratum)?
    } else {
        synthesize_generic(target, s, tol, n)?
    };

    let residual = result
        .solutions
        .iter()
        .map(|sol| exp_point(&sol.params, sol.time).max_abs_diff(target))
        .fold(0.0, f64::max);
    result.diagnostics.endpoint_residual = residual;
    if residual > ENDPOINT_TOL * s.max(s * s).max(1e-300) {
        return Err(Error::ConvergenceFailure {
            stage: "endpoint",
            iterations: 0,
            residual,
        });
    }
    Ok(result)
}

fn single(
    params: GeodesicParams,
    time: f64,
    tau: Option<f64>,
    stratum: Stratum,
    conjugate: bool,
    branch: &str,
) -> SynthesisResult {
    SynthesisResult {
        solutions: vec![Solution { params, time }],
        distance: time,
        multiplicity: Multiplicity::Unique,
        stratum,
        conjugate_at_cut: conjugate,
        diagnostics: Diagnostics {
            branch: branch.into(),
            tau_star: tau,
            ..Default::default()
        },
    }
}

/// `ℓ ∥ y ≠ 0`: a Heisenberg problem in `(x, ℓ·k, y·k)` with `k = y/|y|`.
fn synthesize_heisenberg(
    target: &GroupPoint,
    s: f64,
    tol: f64,
    stratum: Stratum,
) -> Result<SynthesisResult> {
    let yn = norm(&target.y);
    let k = scale(&target.y, 1.0 / yn);
    let a = dot(&target.l, &k);
    let chord = target.x.hypot(a);
    if chord <= tol * s {
        let rho = (PI / yn).sqrt();
        let params = GeodesicParams::Helix(Helix::new(0.0, rho, 0.0, k, None)?);
        let mut r = single(
            params,
            (4.0 * PI * yn).sqrt(),
            Some(PI),
            stratum,
            true,
            "vertical",
        );
        r.multiplicity = Multiplicity::InfiniteFamily;
        return Ok(r);
    }
    // (τ − sinτ cosτ)/sin²τ = 4|y|/(x² + a²), increasing on (0, π)
    let target_ratio = 4.0 * yn / (chord * chord);
    let g = |t: f64| {
        if t <= 0.0 {
            -target_ratio
        } else {
            let st = t.sin();
            tau_minus_sincos(t) / (st * st) - target_ratio
        }
    };
    let tau = bisect(g, 0.0, PI, 0.0)?;
    let rho = (tau_minus_sincos(tau) / yn).sqrt();
    let alpha = target.x.atan2(a) - tau;
    let params = GeodesicParams::Helix(Helix::new(alpha, rho, 0.0, k, None)?);
    Ok(single(
        params,
        2.0 * tau / rho,
        Some(tau),
        stratum,
        false,
        "heisenberg",
    ))
}

/// Orthonormal `(k, k⊥)` with `ℓ = l1·k + m·k⊥` and `y = y1·k + y2·k⊥`.
fn plane_frame(l: &[f64], y: &[f64], sol: &InnerSolution) -> (Vec<f64>, Vec<f64>) {
    let det = sol.l1 * sol.y2 - sol.m * sol.y1;
    let k = lincomb(sol.y2 / det, l, -sol.m / det, y);
    let kp = lincomb(-sol.y1 / det, l, sol.l1 / det, y);
    orthonormalize(k, kp)
}

fn orthonormalize(k: Vec<f64>, kp: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let k = scale(&k, 1.0 / norm(&k));
    let kp = lincomb(1.0, &kp, -dot(&kp, &k), &k);
    let kp = scale(&kp, 1.0 / norm(&kp));
    (k, kp)
}

fn synthesize_generic(target: &GroupPoint, s: f64, tol: f64, n: usize) -> Result<SynthesisResult> {
    let inv = invariants_of(target);
    let margin = cut_locus_margin(target);
    let s6 = s.powi(6);
    let on_plane = target.x.abs() <= tol * s;
    if on_plane && margin >= -tol * s6 {
        return maxwell(target, &inv, margin.abs() <= tol * s6);
    }
    let red = Reduced {
        x: if on_plane { 0.0 } else { target.x },
        ..Reduced::from(&inv)
    };
    let t_min = tau_min(red.x, red.l2, red.p)?;

    // R(τ_min) = |ℓ∧y| > 0; R(π⁻) = −∞ for x ≠ 0, and for x = 0 its sign
    // is that of the cut-locus margin, which is negative here.
    let end = if red.x == 0.0 {
        -1.0
    } else {
        f64::NEG_INFINITY
    };
    // no inner solution (only just below τ_min, by rounding) means σ = 0 and W_model = 0
    let f = |t: f64| {
        if t >= PI {
            end
        } else if t <= t_min {
            red.lwedge
        } else {
            let r = residual(&red, t);
            if r.is_nan() {
                red.lwedge
            } else {
                r
            }
        }
    };
    let grid: Vec<f64> = (0..=OUTER_CELLS)
        .map(|i| {
            if i == OUTER_CELLS {
                PI
            } else {
                t_min + (PI - t_min) * i as f64 / OUTER_CELLS as f64
            }
        })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();

    let mut roots = Vec::new();
    for i in 0..OUTER_CELLS {
        let (va, vb) = (values[i], values[i + 1]);
        if va.is_nan() || vb.is_nan() || va.signum() == vb.signum() || va == 0.0 {
            continue;
        }
        let (lo, hi) = (grid[i], grid[i + 1]);
        let r = bisect(f, lo, hi, 0.0)?;
        roots.push(newton_polish(f, r, lo, hi.min(PI * (1.0 - f64::EPSILON))));
    }
    if roots.is_empty() {
        return Err(Error::ConvergenceFailure {
            stage: "outer bracket",
            iterations: OUTER_CELLS,
            residual: values.iter().cloned().fold(f64::NAN, f64::min),
        });
    }
    if roots.len() > 1 {
        debug!(
            "outer residual has {} roots on (τ_min, π): {:?}",
            roots.len(),
            roots
        );
    }

    let mut best: Option<(f64, f64, InnerSolution)> = None;
    for &tau in &roots {
        let Some(sol) = solve_at_tau(red.x, red.l2, red.p, tau.max(t_min)) else {
            continue;
        };
        let time = 2.0 * tau * (1.0 + sol.sigma * sol.sigma).sqrt() / sol.rho;
        if best.as_ref().is_none_or(|b| time < b.1) {
            best = Some((tau, time, sol));
        }
    }
    let Some((tau, time, sol)) = best else {
        return Err(Error::ConvergenceFailure {
            stage: "inner",
            iterations: roots.len(),
            residual: f64::NAN,
        });
    };
    let (k, kperp) = plane_frame(&target.l, &target.y, &sol);
    debug_assert_eq!(k.len(), n);
    let params = GeodesicParams::Helix(Helix::new(sol.alpha, sol.rho, sol.sigma, k, Some(kperp))?);
    let mut r = single(params, time, Some(tau), Stratum::G2, false, "generic");
    r.diagnostics.tau_min = Some(t_min);
    r.diagnostics.outer_roots = roots;
    Ok(r)
}

/// Cut-locus targets `x = 0`, `π(ℓ·y)² ≤ |ℓ|³|ℓ∧y|`: the pair `±α` at `τ = π`
/// with `ρ = √(π|ℓ|/|ℓ∧y|)`, `σ = |ℓ|^{3/2}/√(4π|ℓ∧y|)` and
/// `cos α = −ρ³(ℓ·y)/(4π²σ²)`.
fn maxwell(target: &GroupPoint, inv: &InvariantPoint, boundary: bool) -> Result<SynthesisResult> {
    let ln = inv.l_norm();
    let w = inv.lwedge;
    let rho = (PI * ln / w).sqrt();
    let sigma = ln.powf(1.5) / (4.0 * PI * w).sqrt();
    let cos_alpha = (-rho.powi(3) * inv.ldoty / (4.0 * PI * PI * sigma * sigma)).clamp(-1.0, 1.0);
    let alpha = cos_alpha.acos();
    let u2 = 1.0 / (rho * rho);
    // at τ = π: ℓ = (0, |ℓ|), y = (π/ρ², −2πσ cosα/ρ²)
    let y1 = PI * u2;
    let y2 = -2.0 * PI * sigma * cos_alpha * u2;
    let kperp = scale(&target.l, 1.0 / ln);
    let k = lincomb(1.0 / y1, &target.y, -y2 / y1, &kperp);
    let (k, kperp) = orthonormalize(k, kperp);
    let time = 2.0 * PI * (1.0 + sigma * sigma).sqrt() / rho;

    let mut alphas = vec![alpha];
    let mirrored = (-alpha).rem_euclid(2.0 * PI);
    if (mirrored - alpha).abs() > 1e-12 {
        alphas.push(mirrored);
    }
    let solutions = alphas
        .into_iter()
        .map(|a| {
            Ok(Solution {
                params: GeodesicParams::Helix(Helix::new(
                    a,
                    rho,
                    sigma,
                    k.clone(),
                    Some(kperp.clone()),
                )?),
                time,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SynthesisResult {
        solutions,
        distance: time,
        multiplicity: Multiplicity::MaxwellPair,
        stratum: Stratum::G2,
        conjugate_at_cut: boundary,
        diagnostics: Diagnostics {
            branch: "maxwell".into(),
            tau_star: Some(PI),
            ..Default::default()
        },
    })
}

/// Sub-Riemannian distance `d(q0, q1)`.
pub fn distance(q0: &GroupPoint, q1: &GroupPoint, tol: f64) -> Result<f64> {
    Ok(synthesize(&reduce_to_origin(q0, q1)?, tol)?.distance)
}

/// Points `q0 · exp(g, t)` of a minimizer from `q0`, for each `t` in `times`.
pub fn trajectory(q0: &GroupPoint, g: &GeodesicParams, times: &[f64]) -> Result<Vec<GroupPoint>> {
    times
        .iter()
        .map(|&t| multiply(q0, &exp_point(g, t)))
        .collect()
}
