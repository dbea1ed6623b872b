//! Dense vector helpers over plain slices.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `|a ∧ b|` as the root of the sum of squared 2×2 minors (Lagrange identity
/// without the cancellation of `|a|²|b|² − (a·b)²`).
pub(crate) fn wedge_norm(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let m = a[i] * b[j] - a[j] * b[i];
            acc += m * m;
        }
    }
    acc.sqrt()
}

pub(crate) fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|v| v * s).collect()
}

/// `s·a + t·b`
pub(crate) fn lincomb(s: f64, a: &[f64], t: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| s * p + t * q).collect()
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
pub(crate) fn unit_basis(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}
