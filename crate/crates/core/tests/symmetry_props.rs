mod common;

use common::{procrustes, random_point, random_rotation};
use pathgroup::geodesic::{exp_point, rescaled_time};
use pathgroup::group::{classify, Stratum};
use pathgroup::optimality::cut_time;
use pathgroup::symmetry::{invariants_of, reduced_exp, so_n_act};
use pathgroup::verify::random_helix;
use pathgroup::GroupPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn invariants_are_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..100 {
        let n = 2 + i % 4;
        let r = random_rotation(&mut rng, n);
        let p = random_point(&mut rng, n, 3.0);
        let q = so_n_act(&r, &p).unwrap();
        assert!(invariants_of(&q).max_abs_diff(&invariants_of(&p)) < 1e-10);
    }
}

#[test]
fn factorization_commutes_with_exp() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for i in 0..300 {
        let g = random_helix(&mut rng, 2 + i % 4, i % 7 == 0);
        let h = g.as_helix().unwrap();
        let t = rng.random_range(0.0..1.5) * cut_time(&g);
        let direct = invariants_of(&exp_point(&g, t));
        let reduced = reduced_exp(rescaled_time(h, t), h.rho, h.sigma, h.alpha);
        assert!(
            direct.max_abs_diff(&reduced) < 1e-9,
            "{direct:?} vs {reduced:?}"
        );
    }
}

#[test]
fn equal_invariants_are_related_by_a_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..100 {
        let n = 2 + i % 4;
        let p = random_point(&mut rng, n, 2.0);
        let q = so_n_act(&random_rotation(&mut rng, n), &p).unwrap();
        assert!(matches!(classify(&p, 1e-9), Stratum::G1 | Stratum::G2));
        let r = procrustes(&[p.l.clone(), p.y.clone()], &[q.l.clone(), q.y.clone()]);
        let mapped = so_n_act(&r, &p).unwrap();
        assert!(
            mapped.max_abs_diff(&q) < 1e-8,
            "n={n} diff={}",
            mapped.max_abs_diff(&q)
        );
    }
}

#[test]
fn representative_is_in_the_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for n in [3, 4, 5] {
        let p = random_point(&mut rng, n, 2.0);
        let rep = invariants_of(&p).representative(n).unwrap();
        let r = procrustes(&[rep.l.clone(), rep.y.clone()], &[p.l.clone(), p.y.clone()]);
        assert!(so_n_act(&r, &rep).unwrap().max_abs_diff(&p) < 1e-8);
    }
}

#[test]
fn planar_orbits_also_carry_orientation() {
    // in n = 2 the sign of det(ℓ, y) is SO(2)-invariant, so |ℓ∧y| alone does
    // not separate orbits: mirror images share invariants but no rotation
    let p = GroupPoint::new(0.3, vec![1.0, 0.0], vec![0.5, 1.0]).unwrap();
    let mirror = GroupPoint::new(0.3, vec![1.0, 0.0], vec![0.5, -1.0]).unwrap();
    assert_eq!(invariants_of(&p), invariants_of(&mirror));
    let r = procrustes(
        &[p.l.clone(), p.y.clone()],
        &[mirror.l.clone(), mirror.y.clone()],
    );
    assert!(so_n_act(&r, &p).is_err());
}

#[test]
fn heisenberg_stratum_keeps_signed_ldoty() {
    let a = GroupPoint::new(0.0, vec![1.0, 0.0], vec![2.0, 0.0]).unwrap();
    let b = GroupPoint::new(0.0, vec![1.0, 0.0], vec![-2.0, 0.0]).unwrap();
    let (ia, ib) = (invariants_of(&a), invariants_of(&b));
    assert_eq!(ia.ldoty, -ib.ldoty);
    assert_eq!((ia.l2, ia.lwedge, ia.y2), (ib.l2, ib.lwedge, ib.y2));
}
