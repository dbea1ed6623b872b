#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use pathgroup::GroupPoint;
use rand::Rng;
use rand_distr::StandardNormal;

/// Rotation from the QR factorization of a Gaussian matrix, sign-fixed so
/// that `R` is Haar distributed on `O(n)` and then forced into `SO(n)`.
pub fn random_rotation<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Orthonormal basis of `Rⁿ` whose leading vectors span the given ones,
/// by Gram–Schmidt over `vs` followed by the standard basis.
fn completed_basis(vs: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    let mut cols: Vec<DVector<f64>> = Vec::new();
    let candidates = vs
        .iter()
        .map(|v| DVector::from_column_slice(v))
        .chain((0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })));
    for mut v in candidates {
        for c in &cols {
            v -= c * c.dot(&v);
        }
        let r = v.norm();
        if r > 1e-8 && cols.len() < n {
            cols.push(v / r);
        }
    }
    DMatrix::from_columns(&cols)
}

/// Rotation taking the pair `a` onto the pair `b` when both have the same
/// Gram matrix (orthogonal Procrustes for two vectors).
pub fn procrustes(a: &[Vec<f64>], b: &[Vec<f64>]) -> DMatrix<f64> {
    let n = a[0].len();
    let ea = completed_basis(a, n);
    let mut eb = completed_basis(b, n);
    if n > 2 && (&eb * ea.transpose()).determinant() < 0.0 {
        eb.column_mut(n - 1).neg_mut();
    }
    eb * ea.transpose()
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, scale: f64) -> GroupPoint {
    let mut v = || scale * rng.random_range(-1.0..1.0);
    GroupPoint {
        x: v(),
        l: (0..n).map(|_| v()).collect(),
        y: (0..n).map(|_| v()).collect(),
    }
}

pub fn sub(a: &GroupPoint, b: &GroupPoint) -> pathgroup::Tangent {
    pathgroup::Tangent {
        x: a.x - b.x,
        l: a.l.iter().zip(&b.l).map(|(p, q)| p - q).collect(),
        y: a.y.iter().zip(&b.y).map(|(p, q)| p - q).collect(),
    }
}

/// Central-difference velocity of `f` at `t`.
pub fn velocity(f: impl Fn(f64) -> GroupPoint, t: f64, h: f64) -> pathgroup::Tangent {
    sub(&f(t + h), &f(t - h)).scaled(0.5 / h)
}

pub fn add_scaled(p: &GroupPoint, v: &pathgroup::Tangent, s: f64) -> GroupPoint {
    GroupPoint {
        x: p.x + s * v.x,
        l: p.l.iter().zip(&v.l).map(|(a, b)| a + s * b).collect(),
        y: p.y.iter().zip(&v.y).map(|(a, b)| a + s * b).collect(),
    }
}
