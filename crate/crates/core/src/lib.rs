//! Optimal sub-Riemannian synthesis on the (n+1, 2n+1) Carnot groups that
//! carry a flat path-geometry structure.
//!
//! A point of the group is `(x | ℓ | y)` with `x ∈ R`, `ℓ, y ∈ Rⁿ`. The
//! distribution is spanned by the left-invariant fields `X₀, X₁..Xₙ`, whose
//! only nontrivial brackets are `[Xᵢ, X₀] = Yᵢ`.
//!
//! Module map:
//! - [`group`]: coordinates, group law, frame, horizontality, strata.
//! - [`geodesic`]: closed-form exponential map and the RK4 Hamiltonian oracle.
//! - [`symmetry`]: the `SO(n)` action, invariants and the factorized exponential.
//! - [`optimality`]: cut time, cut locus, conjugate time and the Jacobians.
//! - [`synthesis`]: the inverse exponential map and the distance.
//! - [`verify`]: seeded property suites shared by the CLI and the acceptance tests.

pub mod error;
pub mod geodesic;
pub mod group;
pub mod optimality;
pub mod roots;
pub mod symmetry;
pub mod synthesis;
pub mod trig;
pub mod verify;

mod vecops;

pub use error::{Error, Result};
pub use geodesic::{Covelocity, GeodesicParams, Helix};
pub use group::{GroupPoint, Stratum, Tangent, DEFAULT_TOL};
pub use optimality::{CutInfo, CutMultiplicity};
pub use symmetry::InvariantPoint;
pub use synthesis::{Multiplicity, Solution, SynthesisResult};
