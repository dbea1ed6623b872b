//! The path group `G = R ⊕ Rⁿ ⊕ Rⁿ` in canonical coordinates of the first
//! kind, its group law, left-invariant frame and stratification.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vecops::{dot, norm, wedge_norm};

/// Default classification tolerance, in the group unit scale.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point `(x | ℓ | y)` of the path group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GroupPointRepr", into = "GroupPointRepr")]
pub struct GroupPoint {
    pub x: f64,
    pub l: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GroupPointRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    x: f64,
    l: Vec<f64>,
    y: Vec<f64>,
}

impl TryFrom<GroupPointRepr> for GroupPoint {
    type Error = Error;

    fn try_from(r: GroupPointRepr) -> Result<Self> {
        let p = GroupPoint::new(r.x, r.l, r.y)?;
        match r.n {
            Some(n) if n != p.dim() => Err(Error::DimensionMismatch {
                left: n,
                right: p.dim(),
            }),
            _ => Ok(p),
        }
    }
}

impl From<GroupPoint> for GroupPointRepr {
    fn from(p: GroupPoint) -> Self {
        GroupPointRepr {
            n: Some(p.dim()),
            x: p.x,
            l: p.l,
            y: p.y,
        }
    }
}

/// Tangent coordinates `(ẋ, ℓ̇, ẏ)` of a vector at some point of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub x: f64,
    pub l: Vec<f64>,
    pub y: Vec<f64>,
}

impl Tangent {
    pub fn zero(n: usize) -> Self {
        Tangent {
            x: 0.0,
            l: vec![0.0; n],
            y: vec![0.0; n],
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Tangent {
            x: self.x * s,
            l: self.l.iter().map(|v| v * s).collect(),
            y: self.y.iter().map(|v| v * s).collect(),
        }
    }

    /// Column `j` of a frame matrix returned by [`frame_at`].
    pub fn from_column(frame: &DMatrix<f64>, j: usize) -> Self {
        let n = (frame.nrows() - 1) / 2;
        Tangent {
            x: frame[(0, j)],
            l: (0..n).map(|i| frame[(1 + i, j)]).collect(),
            y: (0..n).map(|i| frame[(1 + n + i, j)]).collect(),
        }
    }
}

/// SO(n)-orbit type of a point, by the dimension of `span{ℓ, y}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stratum {
    G0,
    G1,
    G2,
}

impl GroupPoint {
    pub fn new(x: f64, l: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if l.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: l.len(),
                right: y.len(),
            });
        }
        Ok(GroupPoint { x, l, y })
    }

    pub fn identity(n: usize) -> Self {
        GroupPoint {
            x: 0.0,
            l: vec![0.0; n],
            y: vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    /// Largest coordinate difference to `other`.
    pub fn max_abs_diff(&self, other: &GroupPoint) -> f64 {
        let dl = crate::vecops::max_abs_diff(&self.l, &other.l);
        let dy = crate::vecops::max_abs_diff(&self.y, &other.y);
        (self.x - other.x).abs().max(dl).max(dy)
    }

    /// Homogeneous size `max(|x|, |ℓ|, √|y|)`; dilations scale it linearly.
    pub fn homogeneous_scale(&self) -> f64 {
        self.x.abs().max(norm(&self.l)).max(norm(&self.y).sqrt())
    }

    fn check_dim(&self, other: &GroupPoint) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }
}

/// Group law `(x|ℓ|y)·(x̃|ℓ̃|ỹ) = (x+x̃ | ℓ+ℓ̃ | y+ỹ+½(ℓx̃ − xℓ̃))`.
pub fn multiply(p: &GroupPoint, q: &GroupPoint) -> Result<GroupPoint> {
    p.check_dim(q)?;
    let l = p.l.iter().zip(&q.l).map(|(a, b)| a + b).collect();
    let y = (0..p.dim())
        .map(|i| p.y[i] + q.y[i] + 0.5 * (p.l[i] * q.x - p.x * q.l[i]))
        .collect();
    Ok(GroupPoint { x: p.x + q.x, l, y })
}

/// `(−x | −ℓ | −y)`; the cross term of the group law cancels.
pub fn inverse(p: &GroupPoint) -> GroupPoint {
    GroupPoint {
        x: -p.x,
        l: p.l.iter().map(|v| -v).collect(),
        y: p.y.iter().map(|v| -v).collect(),
    }
}

/// Moves the pair `(q0, q1)` to `(id, q̃)` with `q̃ = q0⁻¹·q1`.
///
/// Left translations preserve the left-invariant distribution and metric, so
/// geodesics `q0 → q1` are the left translates by `q0` of geodesics `id → q̃`.
pub fn reduce_to_origin(q0: &GroupPoint, q1: &GroupPoint) -> Result<GroupPoint> {
    multiply(&inverse(q0), q1)
}

/// Coordinate components of the left-invariant frame at `p`.
///
/// Rows are `(x, ℓ₁..ℓₙ, y₁..yₙ)`; columns are `X₀, X₁..Xₙ, Y₁..Yₙ`:
/// `X₀ = ∂x + Σ(ℓᵢ/2)∂yᵢ`, `Xᵢ = ∂ℓᵢ − (x/2)∂yᵢ`, `Yᵢ = ∂yᵢ`.
pub fn frame_at(p: &GroupPoint) -> DMatrix<f64> {
    let n = p.dim();
    let dim = 2 * n + 1;
    let mut m = DMatrix::zeros(dim, dim);
    m[(0, 0)] = 1.0;
    for i in 0..n {
        m[(1 + n + i, 0)] = 0.5 * p.l[i];
        m[(1 + i, 1 + i)] = 1.0;
        m[(1 + n + i, 1 + i)] = -0.5 * p.x;
        m[(1 + n + i, 1 + n + i)] = 1.0;
    }
    m
}

/// `|ẏ − ½(ẋℓ − ℓ̇x)|`, zero iff `v` lies in the distribution at `p`.
pub fn horizontality_defect(p: &GroupPoint, v: &Tangent) -> f64 {
    (0..p.dim())
        .map(|i| {
            let d = v.y[i] - 0.5 * (v.x * p.l[i] - v.l[i] * p.x);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Sub-Riemannian speed `√(ẋ² + |ℓ̇|²)` of a horizontal vector.
pub fn horizontal_speed(p: &GroupPoint, v: &Tangent, tol: f64) -> Result<f64> {
    let defect = horizontality_defect(p, v);
    if defect > tol {
        return Err(Error::NonHorizontal { defect });
    }
    Ok((v.x * v.x + dot(&v.l, &v.l)).sqrt())
}

/// Stratum of `p`: `G0` if `max(|ℓ|,|y|) < tol`; `G1` if
/// `|ℓ∧y| < tol·max(|ℓ|,|y|)²`; `G2` otherwise.
pub fn classify(p: &GroupPoint, tol: f64) -> Stratum {
    let m = norm(&p.l).max(norm(&p.y));
    if m < tol {
        Stratum::G0
    } else if wedge_norm(&p.l, &p.y) < tol * m * m {
        Stratum::G1
    } else {
        Stratum::G2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vecops::unit_basis;

    fn pt(x: f64, l: &[f64], y: &[f64]) -> GroupPoint {
        GroupPoint::new(x, l.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let p = pt(0.3, &[1.0, -2.0, 0.5], &[0.1, 0.0, 4.0]);
        let e = GroupPoint::identity(3);
        assert_eq!(multiply(&e, &p).unwrap(), p);
        assert_eq!(multiply(&p, &e).unwrap(), p);
    }

    #[test]
    fn multiply_example() {
        let e1 = unit_basis(3, 0);
        let p = pt(1.0, &e1, &[0.0; 3]);
        let q = pt(1.0, &[0.0; 3], &[0.0; 3]);
        let r = multiply(&p, &q).unwrap();
        assert_eq!(r, pt(2.0, &e1, &[0.5, 0.0, 0.0]));
    }

    #[test]
    fn inverse_cancels() {
        let p = pt(1.0, &[1.0, 0.0], &[0.0, 1.0]);
        let inv = inverse(&p);
        assert_eq!(inv, pt(-1.0, &[-1.0, 0.0], &[0.0, -1.0]));
        assert_eq!(multiply(&p, &inv).unwrap(), GroupPoint::identity(2));
        assert_eq!(multiply(&inv, &p).unwrap(), GroupPoint::identity(2));
        assert_eq!(inverse(&inv), p);
        assert_eq!(inverse(&GroupPoint::identity(2)), GroupPoint::identity(2));
    }

    #[test]
    fn dimension_mismatch() {
        let p = GroupPoint::identity(2);
        let q = GroupPoint::identity(3);
        assert!(matches!(
            multiply(&p, &q),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
        assert!(GroupPoint::new(0.0, vec![0.0; 2], vec![0.0; 3]).is_err());
    }

    #[test]
    fn reduce_to_origin_examples() {
        let q0 = pt(1.0, &[1.0, 0.0], &[0.0, 0.0]);
        let q1 = pt(1.0, &[1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(
            reduce_to_origin(&q0, &q1).unwrap(),
            pt(0.0, &[0.0, 0.0], &[0.0, 1.0])
        );
        assert_eq!(reduce_to_origin(&q0, &q0).unwrap(), GroupPoint::identity(2));
        let e = GroupPoint::identity(2);
        assert_eq!(reduce_to_origin(&e, &q1).unwrap(), q1);
        // q0 · q̃ recovers q1
        let q0 = pt(0.7, &[0.2, -1.0], &[0.3, 0.1]);
        let q1 = pt(-0.4, &[1.5, 0.5], &[-0.2, 2.0]);
        let qt = reduce_to_origin(&q0, &q1).unwrap();
        assert!(multiply(&q0, &qt).unwrap().max_abs_diff(&q1) < 1e-15);
    }

    #[test]
    fn frame_at_identity_and_shifted_point() {
        let f = frame_at(&GroupPoint::identity(2));
        assert_eq!(f, DMatrix::identity(5, 5));
        let p = pt(2.0, &[1.0, 0.0], &[0.0, 0.0]);
        let f = frame_at(&p);
        let x1 = Tangent::from_column(&f, 1);
        assert_eq!(x1.y, vec![-1.0, 0.0]);
        let x0 = Tangent::from_column(&f, 0);
        assert_eq!(x0.y, vec![0.5, 0.0]);
    }

    #[test]
    fn frame_fields_are_horizontal_with_unit_speed() {
        let p = pt(-1.3, &[0.4, 2.0, -0.7], &[5.0, 1.0, 0.0]);
        let f = frame_at(&p);
        for j in 0..4 {
            let v = Tangent::from_column(&f, j);
            assert!(horizontality_defect(&p, &v) < 1e-15);
            assert!((horizontal_speed(&p, &v, 1e-12).unwrap() - 1.0).abs() < 1e-15);
        }
        let two_x1 = Tangent::from_column(&f, 1).scaled(2.0);
        assert!((horizontal_speed(&p, &two_x1, 1e-12).unwrap() - 2.0).abs() < 1e-15);
        // Y fields are vertical
        let yv = Tangent::from_column(&f, 4);
        assert!((horizontality_defect(&p, &yv) - 1.0).abs() < 1e-15);
        assert!(matches!(
            horizontal_speed(&p, &yv, 1e-9),
            Err(Error::NonHorizontal { .. })
        ));
    }

    #[test]
    fn vertical_direction_at_identity() {
        let e = GroupPoint::identity(2);
        let mut v = Tangent::zero(2);
        v.y[1] = 1.0;
        assert_eq!(horizontality_defect(&e, &v), 1.0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&GroupPoint::identity(3), DEFAULT_TOL), Stratum::G0);
        assert_eq!(
            classify(&pt(5.0, &[0.0, 0.0], &[0.0, 0.0]), DEFAULT_TOL),
            Stratum::G0
        );
        assert_eq!(
            classify(&pt(0.0, &[1.0, 0.0], &[3.0, 0.0]), DEFAULT_TOL),
            Stratum::G1
        );
        assert_eq!(
            classify(&pt(0.0, &[0.0, 0.0], &[0.0, 2.0]), DEFAULT_TOL),
            Stratum::G1
        );
        assert_eq!(
            classify(&pt(0.0, &[1.0, 0.0], &[0.0, 1.0]), DEFAULT_TOL),
            Stratum::G2
        );
        // relative test: the same direction pattern at a large scale
        assert_eq!(
            classify(&pt(0.0, &[1e6, 0.0], &[3e6, 1e-6]), DEFAULT_TOL),
            Stratum::G1
        );
    }

    #[test]
    fn heisenberg_degenerate_case() {
        // n = 1: the wedge vanishes identically
        let p = pt(0.5, &[2.0], &[-1.0]);
        assert_eq!(classify(&p, DEFAULT_TOL), Stratum::G1);
        let q = pt(-1.0, &[0.5], &[3.0]);
        let r = multiply(&p, &q).unwrap();
        assert_eq!(r.y[0], -1.0 + 3.0 + 0.5 * (-2.0 - 0.5 * 0.5));
    }

    #[test]
    fn json_shape() {
        let p = pt(1.0, &[0.5, -2.0], &[0.0, 3.25]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":2,"x":1.0,"l":[0.5,-2.0],"y":[0.0,3.25]}"#);
        let back: GroupPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let inferred: GroupPoint =
            serde_json::from_str(r#"{"x":0,"l":[1,2,3],"y":[0,0,0]}"#).unwrap();
        assert_eq!(inferred.dim(), 3);
        assert!(
            serde_json::from_str::<GroupPoint>(r#"{"n":3,"x":0,"l":[1,2],"y":[0,0]}"#).is_err()
        );
        assert!(serde_json::from_str::<GroupPoint>(r#"{"x":0,"l":[1,2],"y":[0]}"#).is_err());
    }
}
