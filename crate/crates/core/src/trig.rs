//! Trigonometric building blocks shared by the geodesic formulas, the
//! invariants and the Jacobians.
//!
//! `τ − sinτ cosτ`, `sinτ − τ cosτ` (both O(τ³)) and `f∧` (O(τ⁶)) cancel
//! badly near the origin, so below [`SERIES_CUTOFF`] they are evaluated from
//! truncated Taylor series.

/// Below this |τ| the cancelling differences switch to Taylor series.
pub const SERIES_CUTOFF: f64 = 0.1;

/// `τ − sinτ cosτ`
pub fn tau_minus_sincos(tau: f64) -> f64 {
    if tau.abs() < SERIES_CUTOFF {
        let t2 = tau * tau;
        tau * t2
            * (2.0 / 3.0
                - t2 * (2.0 / 15.0
                    - t2 * (4.0 / 315.0 - t2 * (2.0 / 2835.0 - t2 * (4.0 / 155925.0)))))
    } else {
        tau - tau.sin() * tau.cos()
    }
}

/// `sinτ − τ cosτ`
pub fn sin_minus_tcos(tau: f64) -> f64 {
    if tau.abs() < SERIES_CUTOFF {
        let t2 = tau * tau;
        tau * t2
            * (1.0 / 3.0
                - t2 * (1.0 / 30.0
                    - t2 * (1.0 / 840.0 - t2 * (1.0 / 45360.0 - t2 * (1.0 / 3991680.0)))))
    } else {
        tau.sin() - tau * tau.cos()
    }
}

/// `f∧(τ) = τ² + τ sinτ cosτ − 2 sin²τ`, positive on `(0, π)`.
pub fn f_wedge(tau: f64) -> f64 {
    if tau.abs() < SERIES_CUTOFF {
        let t2 = tau * tau;
        t2 * t2
            * t2
            * (2.0 / 45.0
                - t2 * (2.0 / 315.0
                    - t2 * (2.0 / 4725.0 - t2 * (8.0 / 467775.0 - t2 * (4.0 / 8513505.0)))))
    } else {
        let (s, c) = tau.sin_cos();
        tau * tau + tau * s * c - 2.0 * s * s
    }
}

/// `τ − sinτ`
pub fn tau_minus_sin(tau: f64) -> f64 {
    if tau.abs() < SERIES_CUTOFF {
        let t2 = tau * tau;
        tau * t2
            * (1.0 / 6.0
                - t2 * (1.0 / 120.0
                    - t2 * (1.0 / 5040.0 - t2 * (1.0 / 362880.0 - t2 * (1.0 / 39916800.0)))))
    } else {
        tau - tau.sin()
    }
}

/// `A₁⁻(τ) = τ sinτ − τ² cosτ − τ² + sin²τ`, positive on `(0, π)`.
pub fn a1_minus(tau: f64) -> f64 {
    if tau.abs() < SERIES_CUTOFF {
        let t2 = tau * tau;
        t2 * t2
            * t2
            * (1.0 / 90.0
                - t2 * (1.0 / 504.0
                    - t2 * (1.0 / 8400.0
                        - t2 * (241.0 / 59875200.0 - t2 * (1003.0 / 10897286400.0)))))
    } else {
        let (s, c) = tau.sin_cos();
        tau * s - tau * tau * c - tau * tau + s * s
    }
}

/// `3 sinτ − 3τ cosτ − τ² sinτ`, positive on `(0, π)`.
pub fn sin_quintic(tau: f64) -> f64 {
    if tau.abs() < SERIES_CUTOFF {
        let t2 = tau * tau;
        tau * t2
            * t2
            * (1.0 / 15.0
                - t2 * (1.0 / 210.0
                    - t2 * (1.0 / 7560.0 - t2 * (1.0 / 498960.0 - t2 * (1.0 / 51891840.0)))))
    } else {
        3.0 * sin_minus_tcos(tau) - tau * tau * tau.sin()
    }
}

/// Least positive root of `tan τ = τ` beyond zero (≈ 1.43π), the upper bound
/// for the first conjugate rescaled time.
pub fn tan_fixed_point() -> f64 {
    // sinτ − τcosτ changes sign once on (π, 3π/2)
    let mut lo = std::f64::consts::PI;
    let mut hi = 1.5 * std::f64::consts::PI - 1e-9;
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if sin_minus_tcos(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
