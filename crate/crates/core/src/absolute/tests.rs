use super::*;
use crate::base::rational::{q_frac, Matrix};
use crate::instances::{self, Fixture};

fn fixture(name: &str) -> Fixture {
    instances::by_name(name).unwrap()
}

#[test]
fn idempotent_audit_counts_one() {
    let fx = fixture("idempotent");
    let r = bijection_audit(&fx.adj, &fx.f, &fx.z, 4).unwrap();
    assert_eq!((r.colimiting, r.limiting, r.square_pairs), (1, 1, 1), "{r:?}");
    assert!(r.holds(), "{r:?}");
}

#[test]
fn unsplit_audit_counts_zero() {
    let fx = fixture("idempotent-unsplit");
    let r = bijection_audit(&fx.adj, &fx.f, &fx.z, 4).unwrap();
    assert_eq!((r.colimiting, r.limiting, r.square_pairs), (0, 0, 0), "{r:?}");
    assert!(r.cocones > 0 && r.cones > 0);
    assert!(r.holds());
}

#[test]
fn zero_object_audits_match() {
    let fx = fixture("zero-object");
    let r = bijection_audit(&fx.adj, &fx.f, &fx.z, 4).unwrap();
    assert_eq!((r.colimiting, r.limiting, r.square_pairs), (1, 1, 1));
    let p = fx.perturbed().unwrap().unwrap();
    let r = bijection_audit(&p.adj, &p.f, &p.z, 4).unwrap();
    assert_eq!((r.colimiting, r.limiting, r.square_pairs), (0, 0, 0));
}

#[test]
fn suplat_audit_counts_one() {
    let fx = fixture("suplat-coproduct");
    let r = bijection_audit(&fx.adj, &fx.f, &fx.z, 16).unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.colimiting, 1);
}

#[test]
fn audit_rejects_matq() {
    let fx = fixture("biproduct");
    assert!(bijection_audit(&fx.adj, &fx.f, &fx.z, 4).is_err());
}

#[test]
fn derived_cone_is_the_section() {
    let fx = fixture("idempotent");
    let b = derive_b_from_a(&fx.colimit(), &fx.adj).unwrap();
    assert_eq!(b.components(), fx.expected_b.components());
    let a = derive_a_from_b(&fx.limit(), &fx.adj).unwrap();
    assert_eq!(a.components(), fx.expected_a.components());
}

#[test]
fn derivations_recover_every_passing_fixture() {
    for fx in instances::all().unwrap().into_iter().filter(|f| f.expected_pass) {
        let b = derive_b_from_a(&fx.colimit(), &fx.adj).unwrap();
        assert_eq!(b.components(), fx.expected_b.components(), "{}", fx.name);
        let a = derive_a_from_b(&fx.limit(), &fx.adj).unwrap();
        assert_eq!(a.components(), fx.expected_a.components(), "{}", fx.name);
        let confirm = colimit_from_squares(&fx.squares()).unwrap();
        assert!(confirm.holds(), "{}: {confirm}", fx.name);
    }
}

#[test]
fn burnside_section_is_half_the_diagonal() {
    let fx = fixture("burnside-c2");
    let b = derive_b_from_a(&fx.colimit(), &fx.adj).unwrap();
    // the cone leg names i : Q -> Q^2 inside hom(Z, V)
    let named = b.comp(0, 0).matrix().unwrap().clone();
    assert_eq!(named, Matrix::from_rows(2, 1, vec![q_frac(1, 2), q_frac(1, 2)]));
}

#[test]
fn derivation_requires_a_colimit() {
    let fx = fixture("idempotent-unsplit");
    assert!(matches!(derive_b_from_a(&fx.colimit(), &fx.adj), Err(Error::Precondition(_))));
}

#[test]
fn perturbed_biproduct_names_the_right_square() {
    let p = fixture("biproduct").perturbed().unwrap().unwrap();
    let r = check_squares(&p.squares()).unwrap();
    assert!(r.failures.iter().any(|f| f.starts_with("right square fails at (b1, b1)")), "{r}");
    assert!(matches!(colimit_from_squares(&p.squares()), Err(Error::Precondition(_))));
}

#[test]
fn non_cocone_is_not_colimiting() {
    let fx = fixture("idempotent");
    // p replaced by a map A -> A that is not fixed by e, apex A
    let p = fx.perturbed().unwrap().unwrap();
    let r = check_limit(&p.limit()).unwrap();
    assert!(!r.holds());
    assert!(r.failures[0].starts_with("not a cone"), "{r}");
}

#[test]
fn duality_swaps_limits_and_colimits() {
    for fx in instances::all().unwrap() {
        let lim = check_limit(&fx.limit()).unwrap().holds();
        let dual = fx.limit().dual().unwrap();
        assert_eq!(check_colimit(&dual).unwrap().holds(), lim, "{}", fx.name);
        let col = check_colimit(&fx.colimit()).unwrap().holds();
        assert_eq!(check_limit(&fx.colimit().dual().unwrap()).unwrap().holds(), col, "{}", fx.name);
    }
}

#[test]
fn factorisation_of_the_cocone_composite_is_the_identity() {
    let fx = fixture("idempotent");
    let d = fx.squares();
    let x = VFunctor::point(fx.c.clone(), 0).unwrap();
    let (pres, u) = cocone_composite(&fx.colimit(), &x).unwrap();
    let fbar = factor_through_colimit(&d, &x, &pres.right, &u).unwrap();
    assert_eq!(fbar, ProfMap::identity(&pres.right));
}

#[test]
fn factorisations_are_unique_by_enumeration() {
    // K = the one-point module, f picks h : A -> C' with h e = h
    let fx = fixture("idempotent");
    let d = fx.squares();
    let col = fx.colimit();
    for x in 0..fx.c.size() {
        let g = VFunctor::point(fx.c.clone(), x).unwrap();
        let k = Arc::new(hom_profunctor(&fx.z, &VFunctor::point(fx.c.clone(), 1).unwrap()).unwrap());
        let phi_k = modcalc::tensor_over(&fx.adj.phi, &k).unwrap();
        let target = Arc::new(hom_profunctor(&fx.f, &g).unwrap());
        let fs = enumerate::profunctor_maps(&phi_k.result, &target, 1000).unwrap();
        let zg = Arc::new(hom_profunctor(&fx.z, &g).unwrap());
        let gs = enumerate::profunctor_maps(&k, &zg, 1000).unwrap();
        for f in &fs {
            let fbar = factor_through_colimit(&d, &g, &k, f).unwrap();
            let (pres, u) = cocone_composite(&col, &g).unwrap();
            let _ = (pres, u);
            let solutions: Vec<_> = gs
                .iter()
                .filter(|cand| {
                    let back = phi_k
                        .induce(&target, |b, y, a| {
                            let (fb, za, gy) = (fx.f.obj(b), fx.z.obj(a), g.obj(y));
                            Ok(base::tensor_mor(fx.expected_a.comp(b, a), cand.comp(a, y))?.then(fx.c.comp(fb, za, gy))?)
                        })
                        .unwrap();
                    back.components() == f.components()
                })
                .collect();
            assert_eq!(solutions.len(), 1);
            assert_eq!(solutions[0].components(), fbar.components());
        }
    }
}

#[test]
fn oracle_agrees_on_fixtures() {
    for name in ["idempotent", "idempotent-unsplit"] {
        let fx = fixture(name);
        let o = oracle_colimit(&fx.colimit(), 4).unwrap();
        assert_eq!(o.holds, fx.expected_pass, "{name}: {o:?}");
    }
}

#[test]
fn oracle_agrees_on_random_instances() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let d = instances::random_finset_instance(&mut rng).unwrap();
        let fast = check_colimit(&d).unwrap().holds();
        let slow = oracle_colimit(&d, 3).unwrap();
        assert_eq!(fast, slow.holds, "{slow:?}");
    }
}

#[test]
fn identity_weight_is_absolute_on_every_base() {
    for host in ["idempotent", "zero-object", "biproduct", "suplat-coproduct"] {
        let c = fixture(host).c;
        for x in 0..c.size() {
            let fx = instances::identity_weight(c.clone(), x).unwrap();
            assert!(check_colimit(&fx.colimit()).unwrap().holds(), "{}", fx.name);
            assert!(check_limit(&fx.limit()).unwrap().holds(), "{}", fx.name);
            assert!(check_squares(&fx.squares()).unwrap().holds(), "{}", fx.name);
            let b = derive_b_from_a(&fx.colimit(), &fx.adj).unwrap();
            assert_eq!(b.components(), fx.expected_b.components());
            if host != "biproduct" && c.hom(x, x).size() <= 16 {
                let r = bijection_audit(&fx.adj, &fx.f, &fx.z, 16).unwrap();
                // one colimiting cocone per automorphism of x
                assert!(r.colimiting >= 1 && r.holds(), "{}: {r:?}", fx.name);
                assert_eq!((r.limiting, r.square_pairs), (r.colimiting, r.colimiting), "{}", fx.name);
                if c.hom(x, x).size() == 1 {
                    assert_eq!(r.colimiting, 1);
                }
            }
        }
    }
}

#[test]
fn biproduct_factorisation_concatenates_columns() {
    let fx = fixture("biproduct");
    let d = fx.squares();
    let zi = fx.z.obj(0);
    let g = VFunctor::point(fx.c.clone(), zi).unwrap();
    let k = Arc::new(identity_profunctor(fx.adj.phi.source()).unwrap());
    let phi_k = modcalc::tensor_over(&fx.adj.phi, &k).unwrap();
    let target = Arc::new(hom_profunctor(&fx.f, &g).unwrap());
    let cols = [[q_frac(2, 1), q_frac(-1, 3)], [q_frac(0, 1), q_frac(5, 2)]];
    let legs: Vec<BaseMorphism> = (0..2)
        .map(|j| {
            let m = Matrix::from_rows(2, 1, cols[j].to_vec());
            BaseMorphism::from_matrix(base::BaseObject::MatQ(1), base::BaseObject::MatQ(2), m).unwrap()
        })
        .collect();
    let i = base::unit_obj(base::BaseTag::MatQ);
    let f = phi_k
        .induce(&target, |b, _, _| {
            let x = legs[b].dom();
            let named = base::curry_left(x, &i, &base::right_unitor(x)?.then(&legs[b])?)?;
            Ok(base::left_unitor(&i)?.then(&named)?)
        })
        .unwrap();
    let fbar = factor_through_colimit(&d, &g, &k, &f).unwrap();
    let two = base::BaseObject::MatQ(2);
    let got = base::right_unitor_inv(&two).unwrap().then(&base::uncurry_left(&two, &two, fbar.comp(0, 0)).unwrap()).unwrap();
    let want = Matrix::from_rows(2, 2, vec![cols[0][0].clone(), cols[1][0].clone(), cols[0][1].clone(), cols[1][1].clone()]);
    assert_eq!(got.matrix().unwrap(), &want);
}
