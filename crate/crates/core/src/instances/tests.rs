use super::*;
use crate::absolute::{check_colimit, check_limit, check_squares};
use crate::modcalc::check_adjunction;

#[test]
fn every_fixture_is_consistent() {
    for fx in all().unwrap() {
        let adj = check_adjunction(&fx.adj).unwrap();
        assert!(adj.holds(), "{}: {adj}", fx.name);
        let sq = check_squares(&fx.squares()).unwrap();
        assert_eq!(sq.holds(), fx.expected_pass, "{}: {sq}", fx.name);
        let col = check_colimit(&fx.colimit()).unwrap();
        assert_eq!(col.holds(), fx.expected_pass, "{}: {col}", fx.name);
        let lim = check_limit(&fx.limit()).unwrap();
        assert_eq!(lim.holds(), fx.expected_pass, "{}: {lim}", fx.name);
    }
}

#[test]
fn perturbations_flip_the_verdict() {
    for fx in all().unwrap() {
        let Some(p) = fx.perturbed().unwrap() else {
            assert_eq!(fx.name, "idempotent-unsplit");
            continue;
        };
        assert!(!p.expected_pass);
        assert!(!check_squares(&p.squares()).unwrap().holds(), "{}", p.name);
    }
}

#[test]
fn averaging_element_is_idempotent() {
    for (mult, rep) in [cyclic2(), symmetric3()] {
        let (g, _) = group_algebra(&mult).unwrap();
        let n = mult.len();
        let e = Matrix::from_rows(n, 1, vec![q_frac(1, n as i64); n]);
        let ee = g.comp(0, 0, 0).matrix().unwrap().mul(&e.kron(&e));
        assert_eq!(ee, e);
        let avg = averaging_matrix(&rep);
        assert_eq!(avg.mul(&avg), avg);
    }
}

#[test]
fn bad_representation_is_rejected() {
    let (mult, mut rep) = cyclic2();
    rep[1] = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
    assert!(burnside(&mult, &rep).is_err());
}

#[test]
fn zero_object_with_nontrivial_apex_fails() {
    let fx = zero_object().unwrap().perturbed().unwrap().unwrap();
    assert!(!fx.expected_pass);
    assert!(!check_colimit(&fx.colimit()).unwrap().holds());
}

#[test]
fn random_instances_are_well_formed() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let d = random_finset_instance(&mut rng).unwrap();
        assert!(d.phi.check().holds());
        assert!(d.a.check().holds());
        for x in 0..d.ambient().size() {
            for y in 0..d.ambient().size() {
                assert!(d.ambient().hom(x, y).size() <= 3);
            }
        }
    }
}
