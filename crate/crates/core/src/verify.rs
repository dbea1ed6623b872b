//! Seeded property suites for the ten acceptance criteria.
//!
//! Every suite is deterministic given the seed. `VerifyConfig::size` scales
//! the sample counts (1.0 is the full suite); tolerances never change.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::geodesic::{
    covelocity_from_params, exp_point, integrate_hamiltonian, rescaled_time, GeodesicParams,
};
use crate::group::GroupPoint;
use crate::optimality::{
    a_fun, b_fun, conjugate_tau, conjugate_time, cut_time, f0, f1, f_det, in_cut_locus, j2_quartic,
    jacobian_j2, jacobian_j3, jacobian_j4, phi0,
};
use crate::symmetry::{invariants_of, reduced_exp, InvariantPoint};
use crate::synthesis::synthesize;
use crate::trig::{a1_minus, f_wedge, sin_quintic, tan_fixed_point};
use crate::vecops::{dot, lincomb, norm, scale};

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub size: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            size: 1.0,
        }
    }
}

impl VerifyConfig {
    fn count(&self, full: usize) -> usize {
        ((full as f64 * self.size).round() as usize).max(1)
    }

    fn rng(&self, id: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(
            self.seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(id),
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value of the criterion's metric.
    pub worst: f64,
    /// The bound `worst` is compared against.
    pub bound: f64,
    pub samples: usize,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionReport {
    /// One human-readable line, without timing so that output is reproducible.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<34} worst={:.3e} bound={:.1e} n={} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.worst,
            self.bound,
            self.samples,
            self.detail
        )
    }
}

/// Uniformly distributed unit vector in `Rⁿ`.
pub fn random_unit<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm(&v);
        if r > 1e-3 {
            return scale(&v, 1.0 / r);
        }
    }
}

/// Random orthonormal pair in `Rⁿ`, `n ≥ 2`.
pub fn random_frame<R: Rng>(rng: &mut R, n: usize) -> (Vec<f64>, Vec<f64>) {
    let k = random_unit(rng, n);
    loop {
        let v = random_unit(rng, n);
        let p = lincomb(1.0, &v, -dot(&v, &k), &k);
        let r = norm(&p);
        if r > 1e-3 {
            return (k, scale(&p, 1.0 / r));
        }
    }
}

/// Random helix with `ρ ∈ [0.5, 2]`, `σ ∈ (0.05, 2]` (or `σ = 0` when
/// `planar`) and `α` uniform.
pub fn random_helix<R: Rng>(rng: &mut R, n: usize, planar: bool) -> GeodesicParams {
    let (k, kp) = random_frame(rng, n);
    let rho = rng.random_range(0.5..2.0);
    let alpha = rng.random_range(0.0..2.0 * PI);
    if planar {
        GeodesicParams::helix(alpha, rho, 0.0, k, None).expect("valid helix")
    } else {
        let sigma = rng.random_range(0.05..2.0);
        GeodesicParams::helix(alpha, rho, sigma, k, Some(kp)).expect("valid helix")
    }
}

/// Random unit-speed line.
pub fn random_line<R: Rng>(rng: &mut R, n: usize) -> GeodesicParams {
    let v = random_unit(rng, n + 1);
    GeodesicParams::line(v[0], v[1..].to_vec()).expect("valid line")
}

fn report(
    id: u8,
    name: &'static str,
    worst: f64,
    bound: f64,
    samples: usize,
    ok: bool,
    detail: String,
) -> CriterionReport {
    CriterionReport {
        id,
        name,
        passed: ok && worst.is_finite() && worst < bound,
        worst,
        bound,
        samples,
        detail,
        seconds: 0.0,
    }
}

fn timed(f: impl FnOnce() -> CriterionReport) -> CriterionReport {
    let start = Instant::now();
    let mut r = f();
    r.seconds = start.elapsed().as_secs_f64();
    r
}

/// 1. Closed form vs RK4 with `10⁴` steps, per coordinate, on `(0, t_cut)`.
pub fn oracle_equivalence(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let mut rng = cfg.rng(1);
        let count = cfg.count(100);
        let times_per = 50;
        let mut worst: f64 = 0.0;
        for i in 0..count {
            let n = [2, 3, 5][i % 3];
            let g = match i % 10 {
                0 => random_line(&mut rng, n),
                1 => random_helix(&mut rng, n, true),
                _ => random_helix(&mut rng, n, false),
            };
            let horizon = match &g {
                GeodesicParams::Line { .. } => 10.0,
                _ => cut_time(&g),
            };
            let c = covelocity_from_params(&g);
            for _ in 0..times_per {
                let t = rng.random_range(0.0..1.0) * horizon;
                let rk = integrate_hamiltonian(&c, t, 10_000);
                worst = worst.max(exp_point(&g, t).max_abs_diff(&rk));
            }
        }
        report(
            1,
            "oracle equivalence (RK4)",
            worst,
            1e-7,
            count * times_per,
            true,
            String::new(),
        )
    })
}

/// 2. Planar helices vs the Heisenberg closed form, and `2π/ρ = √(4π|y|)` at the cut.
pub fn heisenberg_reduction(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let mut rng = cfg.rng(2);
        let count = cfg.count(1000);
        let mut worst: f64 = 0.0;
        let mut worst_cut: f64 = 0.0;
        for _ in 0..count {
            let n = rng.random_range(2..6);
            let g = random_helix(&mut rng, n, true);
            let h = g.as_helix().expect("helix");
            let (rho, alpha) = (h.rho, h.alpha);
            let t = rng.random_range(0.0..2.0 * PI / rho);
            let p = exp_point(&g, t);
            let x = ((alpha).cos() - (rho * t + alpha).cos()) / rho;
            let l = ((rho * t + alpha).sin() - alpha.sin()) / rho;
            let y = (rho * t - (rho * t).sin()) / (2.0 * rho * rho);
            let err = (p.x - x)
                .abs()
                .max((dot(&p.l, &h.k) - l).abs())
                .max((dot(&p.y, &h.k) - y).abs());
            worst = worst.max(err);
            let tc = cut_time(&g);
            let end = exp_point(&g, tc);
            worst_cut = worst_cut.max((tc - (4.0 * PI * norm(&end.y)).sqrt()).abs());
        }
        let ok = worst_cut < 1e-9;
        report(
            2,
            "Heisenberg reduction",
            worst,
            1e-13,
            count,
            ok,
            format!("cut-time worst={worst_cut:.3e} (bound 1e-9)"),
        )
    })
}

/// 3. `reduced_exp` at `τ = π` against the five cut-locus values.
pub fn cut_locus_parametrization(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let side = ((cfg.count(1000) as f64).cbrt().ceil() as usize).max(2);
        let mut worst: f64 = 0.0;
        let mut samples = 0;
        for i in 0..side {
            for j in 0..side {
                for k in 0..side {
                    let rho = 0.5 + 1.5 * i as f64 / (side - 1) as f64;
                    let sigma = 0.05 + 1.95 * j as f64 / (side - 1) as f64;
                    let alpha = 2.0 * PI * k as f64 / side as f64;
                    let p = reduced_exp(PI, rho, sigma, alpha);
                    let c = (PI + alpha).cos();
                    let expected = [
                        0.0,
                        2.0 * PI * sigma / rho,
                        4.0 * PI * PI * sigma * sigma / rho.powi(3) * c,
                        2.0 * PI * PI * sigma / rho.powi(3),
                        PI / (rho * rho) * (1.0 + 4.0 * sigma * sigma * c * c).sqrt(),
                    ];
                    let got = [p.x, p.l_norm(), p.ldoty, p.lwedge, p.y_norm()];
                    for (g, e) in got.iter().zip(expected) {
                        worst = worst.max((g - e).abs());
                    }
                    samples += 1;
                }
            }
        }
        report(
            3,
            "cut-locus parametrization",
            worst,
            1e-10,
            samples,
            true,
            String::new(),
        )
    })
}

/// 4. `α` and `−α` meet at `t_cut` and differ at `t_cut/2`.
pub fn maxwell_pairs(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let mut rng = cfg.rng(4);
        let count = cfg.count(100);
        let mut worst: f64 = 0.0;
        let mut min_gap = f64::INFINITY;
        for _ in 0..count {
            let n = rng.random_range(2..6);
            let (k, kp) = random_frame(&mut rng, n);
            let rho = rng.random_range(0.5..3.0);
            let sigma = rng.random_range(0.05..3.0);
            let mut alpha = rng.random_range(0.1..PI - 0.1);
            if rng.random_bool(0.5) {
                alpha += PI;
            }
            let g1 = GeodesicParams::helix(alpha, rho, sigma, k.clone(), Some(kp.clone()))
                .expect("helix");
            let g2 = GeodesicParams::helix(-alpha, rho, sigma, k, Some(kp)).expect("helix");
            let tc = cut_time(&g1);
            let i1 = invariants_of(&exp_point(&g1, tc));
            let i2 = invariants_of(&exp_point(&g2, tc));
            worst = worst.max(i1.max_abs_diff(&i2));
            min_gap = min_gap.min(exp_point(&g1, tc / 2.0).max_abs_diff(&exp_point(&g2, tc / 2.0)));
        }
        report(
            4,
            "Maxwell pairs at t_cut",
            worst,
            1e-9,
            count,
            min_gap > 1e-3,
            format!("min midpoint gap={min_gap:.3e} (bound >1e-3)"),
        )
    })
}

/// Derivative of `f` at 0 by Richardson extrapolation of two fourth-order
/// central differences (steps `h`, `h/2`); sixth-order accurate.
fn richardson<const M: usize>(f: impl Fn(f64) -> [f64; M], h: f64) -> [f64; M] {
    let d4 = |h: f64| {
        let (p1, m1, p2, m2) = (f(h), f(-h), f(2.0 * h), f(-2.0 * h));
        std::array::from_fn::<f64, M, _>(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h))
    };
    let (coarse, fine) = (d4(h), d4(0.5 * h));
    std::array::from_fn(|i| (16.0 * fine[i] - coarse[i]) / 15.0)
}

/// Finite-difference Jacobian of `f` at `base`; the step for variable `j` is
/// `1e-2·|base[j]|`, or `1e-2` where `absolute[j]`.
fn fd_matrix<const M: usize>(
    f: impl Fn([f64; M]) -> [f64; M],
    base: [f64; M],
    absolute: [bool; M],
) -> nalgebra::SMatrix<f64, M, M> {
    let mut m = nalgebra::SMatrix::<f64, M, M>::zeros();
    for j in 0..M {
        let h = if absolute[j] {
            1e-2
        } else {
            1e-2 * base[j].abs()
        };
        let col = richardson(
            |e| {
                let mut v = base;
                v[j] += e;
                f(v)
            },
            h,
        );
        for i in 0..M {
            m[(i, j)] = col[i];
        }
    }
    m
}

/// `∂(x, ℓ², ℓ·y, y²)/∂(τ, 1/ρ, σ, α)` by finite differences.
pub fn fd_jacobian4(tau: f64, rho: f64, sigma: f64, alpha: f64) -> f64 {
    let eval = |v: [f64; 4]| {
        let p = reduced_exp(v[0], 1.0 / v[1], v[2], v[3]);
        [p.x, p.l2, p.ldoty, p.y2]
    };
    fd_matrix(
        eval,
        [tau, 1.0 / rho, sigma, alpha],
        [false, false, false, true],
    )
    .determinant()
}

/// `∂(x, ℓ², ℓ·y)/∂(σ, ρ, α)` at fixed `τ` by finite differences.
pub fn fd_jacobian3(tau: f64, rho: f64, sigma: f64, alpha: f64) -> f64 {
    let eval = |v: [f64; 3]| {
        let p = reduced_exp(tau, v[1], v[0], v[2]);
        [p.x, p.l2, p.ldoty]
    };
    fd_matrix(eval, [sigma, rho, alpha], [false, false, true]).determinant()
}

/// `∂(ℓ², ℓ·y)/∂(ρ, σ)` at fixed `τ` and `α = −τ` by finite differences.
pub fn fd_jacobian2(tau: f64, rho: f64, sigma: f64) -> f64 {
    let eval = |v: [f64; 2]| {
        let p = reduced_exp(tau, v[0], v[1], -tau);
        [p.l2, p.ldoty]
    };
    fd_matrix(eval, [rho, sigma], [false, false]).determinant()
}

/// 5. `J₄` against the finite-difference determinant; signs of `J₂`, `J₃`, `J₄`.
pub fn jacobian_factorization(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let mut rng = cfg.rng(5);
        let count = cfg.count(1000);
        let mut worst: f64 = 0.0;
        for _ in 0..count {
            let tau = rng.random_range(0.1..PI - 0.1);
            let rho = rng.random_range(0.5..2.0);
            let sigma = rng.random_range(0.1..2.0);
            let alpha = rng.random_range(0.0..2.0 * PI);
            let exact = jacobian_j4(tau, rho, sigma, alpha);
            let fd = fd_jacobian4(tau, rho, sigma, alpha);
            worst = worst.max(((fd - exact) / exact).abs());
        }
        let side = ((cfg.count(10_000) as f64).sqrt().ceil() as usize).max(2);
        let mut bad_signs = 0usize;
        let params = [(0.7, 0.3), (1.0, 1.0), (1.6, 2.5)];
        for i in 1..=side {
            let tau = PI * i as f64 / (side + 1) as f64;
            for &(rho, sigma) in &params {
                if jacobian_j2(tau, rho, sigma) <= 0.0 {
                    bad_signs += 1;
                }
                for j in 0..side {
                    let alpha = 2.0 * PI * j as f64 / side as f64;
                    if jacobian_j3(tau, rho, sigma, alpha) >= 0.0
                        || jacobian_j4(tau, rho, sigma, alpha) <= 0.0
                    {
                        bad_signs += 1;
                    }
                }
            }
        }
        report(
            5,
            "Jacobian factorization",
            worst,
            1e-5,
            count,
            bad_signs == 0,
            format!("sign violations={bad_signs} on {side}x{side} grids"),
        )
    })
}

/// 6. Strict positivity of the auxiliary functions on uniform grids.
pub fn positivity_suites(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let m = cfg.count(10_000);
        let alphas = 64;
        let open = |i: usize, hi: f64| hi * i as f64 / (m + 1) as f64;
        let mut failures: Vec<&str> = Vec::new();
        let mut min_value = f64::INFINITY;
        let mut check = |name: &'static str, ok: bool, v: f64| {
            min_value = min_value.min(v);
            if !ok && !failures.contains(&name) {
                failures.push(name);
            }
        };
        for i in 1..=m {
            let t4 = 4.0 * PI * i as f64 / m as f64;
            let t = open(i, PI);
            for j in 0..alphas {
                let a = 2.0 * PI * j as f64 / alphas as f64;
                let v = f_det(t4, a);
                check("f", v > 0.0, v);
                let v = a_fun(t, a);
                check("A", v > 0.0, v);
                let v = b_fun(t, a);
                check("B", v > 0.0, v);
            }
            for (name, v) in [
                ("f0", f0(t)),
                ("f1", f1(t)),
                ("f_wedge", f_wedge(t)),
                ("A1-", a1_minus(t)),
                ("3sin-3tcos-t2sin", sin_quintic(t)),
                ("3t2+tcs-4s2", j2_quartic(t)),
            ] {
                check(name, v > 0.0, v);
            }
        }
        let ok = failures.is_empty();
        report(
            6,
            "positivity suites",
            if ok { 0.0 } else { 1.0 },
            0.5,
            m,
            ok,
            if ok {
                format!("min value={min_value:.3e}")
            } else {
                format!("non-positive: {}", failures.join(","))
            },
        )
    })
}

/// 7. `π < τ_conj < τ₀` off the axis; `τ_conj = π` on it; `2π/ρ` when `σ = 0`.
pub fn conjugate_bracket(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let mut rng = cfg.rng(7);
        let count = cfg.count(200);
        let t0 = tan_fixed_point();
        let mut outside = 0usize;
        let mut worst_special: f64 = 0.0;
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for _ in 0..count {
            let sigma = rng.random_range(0.01..5.0);
            let mut alpha = rng.random_range(1e-3..PI - 1e-3);
            if rng.random_bool(0.5) {
                alpha += PI;
            }
            match conjugate_tau(sigma, alpha) {
                Ok(t) => {
                    lo = lo.min(t);
                    hi = hi.max(t);
                    if !(t > PI && t < t0) {
                        outside += 1;
                    }
                }
                Err(_) => outside += 1,
            }
            let rho = rng.random_range(0.5..2.0);
            for a in [0.0, PI] {
                let t = conjugate_tau(sigma, a).unwrap_or(f64::NAN);
                worst_special = worst_special.max((t - PI).abs());
            }
            let (k, _) = random_frame(&mut rng, 3);
            let planar = GeodesicParams::helix(alpha, rho, 0.0, k, None).expect("helix");
            let tc = conjugate_time(&planar).unwrap_or(f64::NAN);
            worst_special = worst_special.max((tc - 2.0 * PI / rho).abs());
        }
        report(
            7,
            "conjugate-time bracket",
            worst_special,
            1e-9,
            count,
            outside == 0,
            format!("off-axis outside (pi, tau0)={outside}, range=[{lo:.6}, {hi:.6}]"),
        )
    })
}

/// 8. Synthesis recovers `exp(g, 0.8·t_cut)`.
pub fn synthesis_roundtrip(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let start = Instant::now();
        let mut rng = cfg.rng(8);
        let count = cfg.count(1000);
        let mut worst_end: f64 = 0.0;
        let mut worst_time: f64 = 0.0;
        let mut failures = 0usize;
        for i in 0..count {
            let n = [2, 3, 5][i % 3];
            let g = random_helix(&mut rng, n, i % 10 == 0);
            let t = 0.8 * cut_time(&g);
            let target = exp_point(&g, t);
            match synthesize(&target, crate::group::DEFAULT_TOL) {
                Ok(r) => {
                    worst_time = worst_time.max((r.distance - t).abs());
                    for s in &r.solutions {
                        worst_end =
                            worst_end.max(exp_point(&s.params, s.time).max_abs_diff(&target));
                    }
                }
                Err(_) => failures += 1,
            }
        }
        let secs = start.elapsed().as_secs_f64();
        report(
            8,
            "synthesis roundtrip",
            worst_end,
            1e-7,
            count,
            failures == 0 && worst_time < 1e-8 && secs < 60.0,
            format!("time worst={worst_time:.3e} (bound 1e-8), failures={failures}"),
        )
    })
}

/// 9. `in_cut_locus` agrees with `τ* = π` across the boundary `φ = φ₀`.
pub fn cut_locus_consistency(cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let mut rng = cfg.rng(9);
        let count = cfg.count(200);
        let band = 1e-6;
        let mut disagreements = 0usize;
        let mut checked = 0usize;
        let mut min_gap = f64::INFINITY;
        for i in 0..count {
            let n = rng.random_range(2..6);
            let (e1, e2) = random_frame(&mut rng, n);
            let ln = rng.random_range(0.3..3.0);
            let yn = rng.random_range(0.3..3.0);
            let p0 = phi0(ln, yn);
            let delta = loop {
                let d: f64 = rng.random_range(-0.3..0.3);
                if d.abs() > band {
                    break d;
                }
            };
            // alternate between the two edges φ₀ and π − φ₀
            let phi = if i % 2 == 0 {
                p0 + delta
            } else {
                PI - p0 + delta
            };
            let q = GroupPoint {
                x: 0.0,
                l: scale(&e1, ln),
                y: lincomb(yn * phi.cos(), &e1, yn * phi.sin(), &e2),
            };
            let inside = in_cut_locus(&q, crate::group::DEFAULT_TOL);
            let Ok(r) = synthesize(&q, crate::group::DEFAULT_TOL) else {
                disagreements += 1;
                continue;
            };
            let tau = r.diagnostics.tau_star.unwrap_or(f64::NAN);
            let at_pi = (tau - PI).abs() <= 1e-6;
            if !at_pi {
                min_gap = min_gap.min(PI - tau);
            }
            if inside != at_pi {
                disagreements += 1;
            }
            checked += 1;
        }
        report(
            9,
            "cut locus vs synthesis",
            disagreements as f64,
            0.5,
            checked,
            true,
            format!("closest interior tau*: pi-{min_gap:.3e}"),
        )
    })
}

/// 10. The covering loop `τ = π/2`, `ρ = σ = 1`, `α = 2πt`.
pub fn covering_loop(_cfg: &VerifyConfig) -> CriterionReport {
    timed(|| {
        let mut worst: f64 = 0.0;
        let mut quarter = f64::NAN;
        let mut three_quarters = f64::NAN;
        for (i, t) in [0.0, 0.25, 0.5, 0.75].into_iter().enumerate() {
            let p: InvariantPoint = reduced_exp(PI / 2.0, 1.0, 1.0, 2.0 * PI * t);
            let s = (2.0 * PI * t).sin();
            let expected = [
                2.0 * (2.0 * PI * t).cos(),
                (4.0 * s * s + PI * PI).sqrt(),
                (4.0 * s * s + PI * PI / 4.0).sqrt(),
                -3.0 * PI * s,
            ];
            let got = [p.x, p.l_norm(), p.y_norm(), p.ldoty];
            for (g, e) in got.iter().zip(expected) {
                worst = worst.max((g - e).abs());
            }
            if i == 1 {
                quarter = p.ldoty;
            }
            if i == 3 {
                three_quarters = p.ldoty;
            }
        }
        let ok = (quarter + 3.0 * PI).abs() < 1e-10 && (three_quarters - 3.0 * PI).abs() < 1e-10;
        report(
            10,
            "covering loop test vector",
            worst,
            1e-10,
            4,
            ok,
            format!("y.l(1/4)={quarter:.12}, y.l(3/4)={three_quarters:.12}"),
        )
    })
}

/// All ten suites in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionReport> {
    vec![
        oracle_equivalence(cfg),
        heisenberg_reduction(cfg),
        cut_locus_parametrization(cfg),
        maxwell_pairs(cfg),
        jacobian_factorization(cfg),
        positivity_suites(cfg),
        conjugate_bracket(cfg),
        synthesis_roundtrip(cfg),
        cut_locus_consistency(cfg),
        covering_loop(cfg),
    ]
}

/// Sanity helper shared by tests: `τ` at which `g` reaches time `t`.
pub fn tau_of(g: &GeodesicParams, t: f64) -> Option<f64> {
    g.as_helix().map(|h| rescaled_time(h, t))
}
