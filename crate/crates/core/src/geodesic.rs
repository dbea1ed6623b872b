//! Arclength geodesics from the identity: the closed-form exponential map,
//! conversions between covelocities and helix parameters, and a fixed-step
//! RK4 integrator of the Hamiltonian system used as an independent oracle.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::trig::{sin_minus_tcos, tau_minus_sincos};
use crate::vecops::{dot, lincomb, norm, scale};

/// Tolerance on the unit level set `h0² + |h|² = 1` and on unit vectors.
pub const LEVEL_TOL: f64 = 1e-12;

/// Below this pitch a helix is treated as planar (`σ = 0`) and `k⊥` is unused.
pub const SIGMA_ZERO: f64 = 1e-12;

/// Fiber coordinates `(h₀, h, w)` of a covector at the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covelocity {
    pub h0: f64,
    pub h: Vec<f64>,
    pub w: Vec<f64>,
}

impl Covelocity {
    pub fn new(h0: f64, h: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if h.len() != w.len() {
            return Err(Error::DimensionMismatch {
                left: h.len(),
                right: w.len(),
            });
        }
        Ok(Covelocity { h0, h, w })
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    /// `h0² + |h|²`, which is `2H`.
    pub fn level(&self) -> f64 {
        self.h0 * self.h0 + dot(&self.h, &self.h)
    }

    /// The sub-Riemannian Hamiltonian `H = ½(h0² + |h|²)`.
    pub fn hamiltonian(&self) -> f64 {
        0.5 * self.level()
    }
}

/// A helix geodesic: shift `alpha`, dilation `rho`, pitch `sigma` and the
/// orthonormal pair `(k, k⊥)` spanning the plane that carries `ℓ(t)`, `y(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Helix {
    pub alpha: f64,
    pub rho: f64,
    pub sigma: f64,
    pub k: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kperp: Option<Vec<f64>>,
}

impl Helix {
    /// Validates the invariants and wraps `alpha` into `[0, 2π)`.
    pub fn new(
        alpha: f64,
        rho: f64,
        sigma: f64,
        k: Vec<f64>,
        kperp: Option<Vec<f64>>,
    ) -> Result<Self> {
        let h = Helix {
            alpha: alpha.rem_euclid(TAU),
            rho,
            sigma,
            k,
            kperp,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn is_planar(&self) -> bool {
        self.sigma < SIGMA_ZERO
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if !self.alpha.is_finite() {
            return bad("alpha must be finite");
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad("rho must be positive and finite");
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be nonnegative and finite");
        }
        if (norm(&self.k) - 1.0).abs() > LEVEL_TOL {
            return bad("k must be a unit vector");
        }
        if !self.is_planar() {
            let Some(kp) = &self.kperp else {
                return bad("kperp is required when sigma > 0");
            };
            if kp.len() != self.k.len() {
                return Err(Error::DimensionMismatch {
                    left: self.k.len(),
                    right: kp.len(),
                });
            }
            if (norm(kp) - 1.0).abs() > LEVEL_TOL {
                return bad("kperp must be a unit vector");
            }
            if dot(&self.k, kp).abs() > LEVEL_TOL {
                return bad("kperp must be orthogonal to k");
            }
        }
        Ok(())
    }

    /// The `k⊥` direction, or zeros for a planar helix.
    fn kperp_or_zero(&self) -> Vec<f64> {
        match (&self.kperp, self.is_planar()) {
            (Some(kp), false) => kp.clone(),
            _ => vec![0.0; self.dim()],
        }
    }
}

/// Arclength geodesic from the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub enum GeodesicParams {
    /// `(C₀ t | C t | 0)` with `C₀² + |C|² = 1`.
    Line {
        c0: f64,
        c: Vec<f64>,
    },
    Helix(Helix),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ParamsRepr {
    Line {
        c0: f64,
        c: Vec<f64>,
    },
    Helix {
        alpha: f64,
        rho: f64,
        sigma: f64,
        k: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kperp: Option<Vec<f64>>,
    },
}

impl TryFrom<ParamsRepr> for GeodesicParams {
    type Error = Error;

    fn try_from(r: ParamsRepr) -> Result<Self> {
        match r {
            ParamsRepr::Line { c0, c } => GeodesicParams::line(c0, c),
            ParamsRepr::Helix {
                alpha,
                rho,
                sigma,
                k,
                kperp,
            } => Ok(GeodesicParams::Helix(Helix::new(
                alpha, rho, sigma, k, kperp,
            )?)),
        }
    }
}

impl From<GeodesicParams> for ParamsRepr {
    fn from(g: GeodesicParams) -> Self {
        match g {
            GeodesicParams::Line { c0, c } => ParamsRepr::Line { c0, c },
            GeodesicParams::Helix(h) => ParamsRepr::Helix {
                alpha: h.alpha,
                rho: h.rho,
                sigma: h.sigma,
                k: h.k,
                kperp: h.kperp,
            },
        }
    }
}

impl GeodesicParams {
    pub fn line(c0: f64, c: Vec<f64>) -> Result<Self> {
        let level = c0 * c0 + dot(&c, &c);
        if (level - 1.0).abs() > LEVEL_TOL {
            return Err(Error::InvalidParams(format!(
                "line direction must have unit speed (c0^2 + |c|^2 = {level})"
            )));
        }
        Ok(GeodesicParams::Line { c0, c })
    }

    pub fn helix(
        alpha: f64,
        rho: f64,
        sigma: f64,
        k: Vec<f64>,
        kperp: Option<Vec<f64>>,
    ) -> Result<Self> {
        Ok(GeodesicParams::Helix(Helix::new(
            alpha, rho, sigma, k, kperp,
        )?))
    }

    pub fn dim(&self) -> usize {
        match self {
            GeodesicParams::Line { c, .. } => c.len(),
            GeodesicParams::Helix(h) => h.dim(),
        }
    }

    pub fn as_helix(&self) -> Option<&Helix> {
        match self {
            GeodesicParams::Helix(h) => Some(h),
            GeodesicParams::Line { .. } => None,
        }
    }
}

/// A geodesic point written in the orthonormal basis `(k, k⊥)` of its plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub x: f64,
    pub l: [f64; 2],
    pub y: [f64; 2],
}

/// Helix geodesic at rescaled time `tau`, in the `(k, k⊥)` basis:
///
/// ```text
/// x = (2/ρ) sinτ sin(τ+α)
/// ℓ = (2/ρ) (sinτ cos(τ+α), τσ)
/// y = (1/ρ²)(τ − cosτ sinτ, 2σ cos(τ+α)(sinτ − τ cosτ))
/// ```
pub fn planar_point(tau: f64, rho: f64, sigma: f64, alpha: f64) -> PlanarPoint {
    let s = tau.sin();
    let (sa, ca) = (tau + alpha).sin_cos();
    let r2 = rho * rho;
    PlanarPoint {
        x: 2.0 / rho * s * sa,
        l: [2.0 / rho * s * ca, 2.0 / rho * tau * sigma],
        y: [
            tau_minus_sincos(tau) / r2,
            2.0 * sigma * ca * sin_minus_tcos(tau) / r2,
        ],
    }
}

/// `τ = ρt / (2√(1+σ²))`
pub fn rescaled_time(h: &Helix, t: f64) -> f64 {
    h.rho * t / (2.0 * (1.0 + h.sigma * h.sigma).sqrt())
}

/// `t = 2τ√(1+σ²) / ρ`
pub fn physical_time(h: &Helix, tau: f64) -> f64 {
    2.0 * tau * (1.0 + h.sigma * h.sigma).sqrt() / h.rho
}

/// Endpoint at time `t` of the arclength geodesic `g` issuing from the identity.
pub fn exp_point(g: &GeodesicParams, t: f64) -> GroupPoint {
    match g {
        GeodesicParams::Line { c0, c } => GroupPoint {
            x: c0 * t,
            l: scale(c, t),
            y: vec![0.0; c.len()],
        },
        GeodesicParams::Helix(h) => {
            let pp = planar_point(rescaled_time(h, t), h.rho, h.sigma, h.alpha);
            let kp = h.kperp_or_zero();
            GroupPoint {
                x: pp.x,
                l: lincomb(pp.l[0], &h.k, pp.l[1], &kp),
                y: lincomb(pp.y[0], &h.k, pp.y[1], &kp),
            }
        }
    }
}

/// Initial covector of `g`:
/// `h0 = sinα/√(1+σ²)`, `h = (k cosα + k⊥ σ)/√(1+σ²)`, `w = kρ/√(1+σ²)`.
pub fn covelocity_from_params(g: &GeodesicParams) -> Covelocity {
    match g {
        GeodesicParams::Line { c0, c } => Covelocity {
            h0: *c0,
            h: c.clone(),
            w: vec![0.0; c.len()],
        },
        GeodesicParams::Helix(hx) => {
            let q = 1.0 / (1.0 + hx.sigma * hx.sigma).sqrt();
            let (sa, ca) = hx.alpha.sin_cos();
            let kp = hx.kperp_or_zero();
            Covelocity {
                h0: sa * q,
                h: lincomb(ca * q, &hx.k, hx.sigma * q, &kp),
                w: scale(&hx.k, hx.rho * q),
            }
        }
    }
}

/// Inverts [`covelocity_from_params`] on the unit level set.
///
/// With `K = w`, `k = K/|K|`: `|K|/ρ = √(h0² + (h·k)²)`,
/// `α = atan2(h0, h·k)`, `K⊥ = h − (h·k)k` and `σ = ρ|K⊥|/|K|`. A covector
/// with `w = 0`, or with `h0 = 0` and `h ⊥ w`, yields a line.
pub fn params_from_covelocity(c: &Covelocity) -> Result<GeodesicParams> {
    let level = c.level();
    if (level - 1.0).abs() > LEVEL_TOL {
        return Err(Error::NotUnitLevel { value: level });
    }
    let kn = norm(&c.w);
    if kn == 0.0 {
        return Ok(GeodesicParams::Line {
            c0: c.h0,
            c: c.h.clone(),
        });
    }
    let k = scale(&c.w, 1.0 / kn);
    let hk = dot(&c.h, &k);
    let amp = c.h0.hypot(hk);
    if amp <= 1e-15 {
        return Ok(GeodesicParams::Line {
            c0: c.h0,
            c: c.h.clone(),
        });
    }
    let rho = kn / amp;
    let alpha = c.h0.atan2(hk).rem_euclid(TAU);
    let kperp_vec = lincomb(1.0, &c.h, -hk, &k);
    let kperp_norm = norm(&kperp_vec);
    let sigma = kperp_norm / amp;
    let (sigma, kperp) = if sigma < SIGMA_ZERO {
        (0.0, None)
    } else {
        (sigma, Some(scale(&kperp_vec, 1.0 / kperp_norm)))
    };
    Ok(GeodesicParams::Helix(Helix {
        alpha,
        rho,
        sigma,
        k,
        kperp,
    }))
}

/// Closed-form solution of the fiber system `ḣ0 = w·h`, `ḣ = −w h0`, `ẇ = 0`.
///
/// The pair `(h0, h·k)` rotates with angular speed `|w|`; the component of
/// `h` orthogonal to `w` stays fixed.
pub fn vertical_flow(c: &Covelocity, t: f64) -> Covelocity {
    let omega = norm(&c.w);
    if omega == 0.0 {
        return c.clone();
    }
    let k = scale(&c.w, 1.0 / omega);
    let hk = dot(&c.h, &k);
    let (s, co) = (omega * t).sin_cos();
    let h0 = c.h0 * co + hk * s;
    let hk_t = hk * co - c.h0 * s;
    Covelocity {
        h0,
        h: lincomb(1.0, &c.h, hk_t - hk, &k),
        w: c.w.clone(),
    }
}

/// Fixed-step RK4 integration of the full Hamiltonian system from the
/// identity; returns the base point and the covector at time `t`.
pub fn hamiltonian_flow(c: &Covelocity, t: f64, steps: usize) -> (GroupPoint, Covelocity) {
    let n = c.dim();
    let steps = steps.max(1);
    // layout: x | ℓ (n) | y (n) | h0 | h (n) | w (n)
    let mut state = vec![0.0; 4 * n + 2];
    state[2 * n + 1] = c.h0;
    state[2 * n + 2..3 * n + 2].copy_from_slice(&c.h);
    state[3 * n + 2..].copy_from_slice(&c.w);

    let rhs = |s: &[f64], out: &mut [f64]| {
        let x = s[0];
        let l = &s[1..n + 1];
        let h0 = s[2 * n + 1];
        let h = &s[2 * n + 2..3 * n + 2];
        let w = &s[3 * n + 2..];
        out[0] = h0;
        for i in 0..n {
            out[1 + i] = h[i];
            out[1 + n + i] = 0.5 * (h0 * l[i] - x * h[i]);
            out[2 * n + 2 + i] = -w[i] * h0;
            out[3 * n + 2 + i] = 0.0;
        }
        out[2 * n + 1] = dot(w, h);
    };

    let dt = t / steps as f64;
    let dim = state.len();
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
    );
    let mut tmp = vec![0.0; dim];
    for _ in 0..steps {
        rhs(&state, &mut k1);
        for i in 0..dim {
            tmp[i] = state[i] + 0.5 * dt * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = state[i] + 0.5 * dt * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = state[i] + dt * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..dim {
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    let point = GroupPoint {
        x: state[0],
        l: state[1..n + 1].to_vec(),
        y: state[n + 1..2 * n + 1].to_vec(),
    };
    let cov = Covelocity {
        h0: state[2 * n + 1],
        h: state[2 * n + 2..3 * n + 2].to_vec(),
        w: state[3 * n + 2..].to_vec(),
    };
    (point, cov)
}

/// RK4 endpoint of the geodesic with initial covector `c` (oracle for [`exp_point`]).
pub fn integrate_hamiltonian(c: &Covelocity, t: f64, steps: usize) -> GroupPoint {
    hamiltonian_flow(c, t, steps).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn helix(alpha: f64, rho: f64, sigma: f64, k: &[f64], kperp: Option<&[f64]>) -> GeodesicParams {
        GeodesicParams::helix(alpha, rho, sigma, k.to_vec(), kperp.map(|v| v.to_vec())).unwrap()
    }

    #[test]
    fn line_covelocity_roundtrip() {
        let c = Covelocity::new(1.0, vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(
            params_from_covelocity(&c).unwrap(),
            GeodesicParams::Line {
                c0: 1.0,
                c: vec![0.0, 0.0]
            }
        );
        let g = GeodesicParams::line(1.0, vec![0.0, 0.0]).unwrap();
        assert_eq!(covelocity_from_params(&g), c);
    }

    #[test]
    fn planar_helix_from_covelocity() {
        let rho = 1.7;
        let c = Covelocity::new(0.0, vec![1.0, 0.0], vec![rho, 0.0]).unwrap();
        let g = params_from_covelocity(&c).unwrap();
        let h = g.as_helix().unwrap();
        assert!(h.alpha.abs() < 1e-15);
        assert!((h.rho - rho).abs() < 1e-15);
        assert_eq!(h.sigma, 0.0);
        assert_eq!(h.k, vec![1.0, 0.0]);
        assert!(h.kperp.is_none());
        let back = covelocity_from_params(&g);
        assert!((back.h0 - c.h0).abs() < 1e-15);
        assert!(crate::vecops::max_abs_diff(&back.h, &c.h) < 1e-15);
        assert!(crate::vecops::max_abs_diff(&back.w, &c.w) < 1e-15);
    }

    #[test]
    fn covelocity_example_and_level() {
        let g = helix(0.0, 1.0, 0.0, &[1.0, 0.0], None);
        let c = covelocity_from_params(&g);
        assert_eq!(
            c,
            Covelocity::new(0.0, vec![1.0, 0.0], vec![1.0, 0.0]).unwrap()
        );
        let g = helix(2.2, 0.4, 1.3, &[0.6, 0.8, 0.0], Some(&[0.0, 0.0, 1.0]));
        assert!((covelocity_from_params(&g).level() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn off_level_covelocity_is_rejected() {
        let c = Covelocity::new(1.0, vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            params_from_covelocity(&c),
            Err(Error::NotUnitLevel { .. })
        ));
    }

    #[test]
    fn degenerate_covelocity_orthogonal_to_w_is_a_line() {
        let c = Covelocity::new(0.0, vec![0.0, 1.0], vec![2.0, 0.0]).unwrap();
        assert!(matches!(
            params_from_covelocity(&c).unwrap(),
            GeodesicParams::Line { .. }
        ));
        // the Hamiltonian flow confirms it: h stays orthogonal to w, h0 stays 0
        let p = integrate_hamiltonian(&c, 2.0, 200);
        assert!(
            p.max_abs_diff(&GroupPoint::new(0.0, vec![0.0, 2.0], vec![0.0, 0.0]).unwrap()) < 1e-14
        );
    }

    #[test]
    fn exp_point_examples() {
        let g = helix(0.0, 1.0, 0.0, &[1.0, 0.0], None);
        assert_eq!(exp_point(&g, 0.0), GroupPoint::identity(2));
        let p = exp_point(&g, 2.0 * PI);
        let expected = GroupPoint::new(0.0, vec![0.0, 0.0], vec![PI, 0.0]).unwrap();
        assert!(p.max_abs_diff(&expected) < 1e-14);
        let line = GeodesicParams::line(1.0, vec![0.0, 0.0]).unwrap();
        assert_eq!(
            exp_point(&line, 3.0),
            GroupPoint::new(3.0, vec![0.0, 0.0], vec![0.0, 0.0]).unwrap()
        );
    }

    #[test]
    fn time_rescaling() {
        let h = Helix::new(0.3, 1.0, 0.0, vec![1.0, 0.0], None).unwrap();
        assert_eq!(rescaled_time(&h, 0.0), 0.0);
        assert!((rescaled_time(&h, 2.0 * PI) - PI).abs() < 1e-15);
        let h = Helix::new(0.3, 0.7, 2.5, vec![1.0, 0.0], Some(vec![0.0, 1.0])).unwrap();
        for &t in &[0.0, 0.1, 3.3, 17.0] {
            assert!((physical_time(&h, rescaled_time(&h, t)) - t).abs() <= 1e-15 * t.max(1.0));
        }
    }

    #[test]
    fn vertical_flow_trivial_cases() {
        let c = Covelocity::new(0.6, vec![0.8, 0.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(vertical_flow(&c, 5.0), c);
        let c = Covelocity::new(0.6, vec![0.0, 0.8], vec![1.0, 2.0]).unwrap();
        assert_eq!(vertical_flow(&c, 0.0), c);
    }

    #[test]
    fn vertical_flow_matches_rk4() {
        let c = Covelocity::new(0.48, vec![0.6, -0.64], vec![1.5, -0.3]).unwrap();
        for &t in &[0.3, 1.7, 4.0] {
            let closed = vertical_flow(&c, t);
            let (_, rk) = hamiltonian_flow(&c, t, 4000);
            assert!((closed.h0 - rk.h0).abs() < 1e-9);
            assert!(crate::vecops::max_abs_diff(&closed.h, &rk.h) < 1e-9);
        }
    }

    #[test]
    fn alpha_is_wrapped() {
        let h = Helix::new(-0.5, 1.0, 0.0, vec![1.0, 0.0], None).unwrap();
        assert!((h.alpha - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn invalid_helix_parameters() {
        assert!(Helix::new(0.0, 0.0, 0.0, vec![1.0, 0.0], None).is_err());
        assert!(Helix::new(0.0, 1.0, -1.0, vec![1.0, 0.0], None).is_err());
        assert!(Helix::new(0.0, 1.0, 0.0, vec![1.0, 1.0], None).is_err());
        assert!(Helix::new(0.0, 1.0, 0.5, vec![1.0, 0.0], None).is_err());
        assert!(Helix::new(0.0, 1.0, 0.5, vec![1.0, 0.0], Some(vec![1.0, 0.0])).is_err());
        // kperp is ignored when sigma = 0
        assert!(Helix::new(0.0, 1.0, 0.0, vec![1.0, 0.0], Some(vec![3.0, 0.0])).is_ok());
        assert!(GeodesicParams::line(0.5, vec![0.5, 0.0]).is_err());
    }

    #[test]
    fn params_json_shape() {
        let g: GeodesicParams =
            serde_json::from_str(r#"{"kind":"helix","alpha":0,"rho":1,"sigma":0,"k":[1,0]}"#)
                .unwrap();
        assert_eq!(g, helix(0.0, 1.0, 0.0, &[1.0, 0.0], None));
        let g: GeodesicParams =
            serde_json::from_str(r#"{"kind":"line","c0":1,"c":[0,0]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"kind":"line","c0":1.0,"c":[0.0,0.0]}"#
        );
        assert!(
            serde_json::from_str::<GeodesicParams>(r#"{"kind":"line","c0":2,"c":[0,0]}"#).is_err()
        );
    }

    #[test]
    fn straight_line_integration_is_exact() {
        let c = Covelocity::new(0.6, vec![0.0, 0.8], vec![0.0, 0.0]).unwrap();
        let p = integrate_hamiltonian(&c, 2.5, 7);
        let g = params_from_covelocity(&c).unwrap();
        assert!(p.max_abs_diff(&exp_point(&g, 2.5)) < 1e-14);
    }
}
