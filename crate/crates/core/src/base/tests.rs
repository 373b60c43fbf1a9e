use super::rational::{q, Matrix};
use super::suplat::{count_bimorphisms, small_lattices};
use super::*;
use proptest::prelude::*;

fn samples(tag: BaseTag) -> Vec<BaseObject> {
    match tag {
        BaseTag::FinSet => (0..4).map(BaseObject::FinSet).collect(),
        BaseTag::Pointed => (1..4).map(BaseObject::Pointed).collect(),
        BaseTag::MatQ => (0..3).map(BaseObject::MatQ).collect(),
        BaseTag::SupLat => small_lattices(3).into_iter().map(BaseObject::suplat).collect(),
    }
}

fn tensor_chain(a: &BaseMorphism, b: &BaseMorphism) -> BaseMorphism {
    tensor_mor(a, b).unwrap()
}

#[test]
fn curry_round_trips_on_enumerable_bases() {
    for tag in [BaseTag::FinSet, BaseTag::Pointed, BaseTag::SupLat] {
        let objs = samples(tag);
        for a in &objs {
            for x in &objs {
                for b in &objs {
                    let ax = tensor_obj(a, x).unwrap();
                    let Ok(maps) = enumerate_morphisms(&ax, b, 4096) else { continue };
                    for f in &maps {
                        let g = curry_left(a, x, f).unwrap();
                        assert_eq!(&uncurry_left(a, b, &g).unwrap(), f, "{tag} left");
                        let ev = eval_left(a, b).unwrap();
                        let via_ev = tensor_chain(&BaseMorphism::identity(a), &g).then(&ev).unwrap();
                        assert_eq!(&via_ev, f, "{tag} eval");
                    }
                    let xa = tensor_obj(x, a).unwrap();
                    let Ok(maps) = enumerate_morphisms(&xa, b, 4096) else { continue };
                    for f in &maps {
                        let g = curry_right(x, a, f).unwrap();
                        assert_eq!(&uncurry_right(a, b, &g).unwrap(), f, "{tag} right");
                    }
                }
            }
        }
    }
}

#[test]
fn suplat_tensor_classifies_bimorphisms() {
    let lats = small_lattices(4);
    for a in &lats {
        for b in &lats {
            for c in lats.iter().take(3) {
                let (oa, ob, oc) = (BaseObject::suplat(a.clone()), BaseObject::suplat(b.clone()), BaseObject::suplat(c.clone()));
                let t = tensor_obj(&oa, &ob).unwrap();
                let n = enumerate_morphisms(&t, &oc, 1 << 16).unwrap().len();
                assert_eq!(n, count_bimorphisms(a, b, c));
            }
        }
    }
}

#[test]
fn symmetry_is_an_involution() {
    for tag in BaseTag::ALL {
        let objs = samples(tag);
        for a in &objs {
            for b in &objs {
                let s = symmetry(a, b).unwrap();
                let back = symmetry(b, a).unwrap();
                assert!(s.then(&back).unwrap().is_identity(), "{tag}");
            }
        }
    }
}

#[test]
fn coherence_pentagon_and_triangle() {
    for tag in BaseTag::ALL {
        let objs = samples(tag);
        let objs: Vec<_> = objs.into_iter().rev().take(2).collect();
        for a in &objs {
            for b in &objs {
                for c in &objs {
                    let al = associator(a, b, c).unwrap();
                    let inv = associator_inv(a, b, c).unwrap();
                    assert!(al.then(&inv).unwrap().is_identity());
                    assert!(inv.then(&al).unwrap().is_identity());
                    // triangle: (a ⊗ I) ⊗ b → a ⊗ b
                    let i = unit_obj(tag);
                    let lhs = tensor_chain(&right_unitor(a).unwrap(), &BaseMorphism::identity(b));
                    let rhs = associator(a, &i, b)
                        .unwrap()
                        .then(&tensor_chain(&BaseMorphism::identity(a), &left_unitor(b).unwrap()))
                        .unwrap();
                    assert_eq!(lhs, rhs);
                    for d in objs.iter().take(1) {
                        let id = BaseMorphism::identity;
                        let ab = tensor_obj(a, b).unwrap();
                        let cd = tensor_obj(c, d).unwrap();
                        let top = associator(&ab, c, d).unwrap().then(&associator(a, b, &cd).unwrap()).unwrap();
                        let bc = tensor_obj(b, c).unwrap();
                        let bottom = compose_chain(&[
                            &tensor_chain(&associator(a, b, c).unwrap(), &id(d)),
                            &associator(a, &bc, d).unwrap(),
                            &tensor_chain(&id(a), &associator(b, c, d).unwrap()),
                        ])
                        .unwrap();
                        assert_eq!(top, bottom, "{tag} pentagon");
                    }
                }
            }
        }
    }
}

#[test]
fn coequalizer_is_universal_on_finite_sets() {
    let two = BaseObject::FinSet(2);
    let three = BaseObject::FinSet(3);
    let maps = enumerate_morphisms(&two, &three, 100).unwrap();
    let outs = enumerate_morphisms(&three, &two, 100).unwrap();
    for f in &maps {
        for g in &maps {
            let (_, p) = coequalizer(f, g).unwrap();
            assert_eq!(f.then(&p).unwrap(), g.then(&p).unwrap());
            for h in &outs {
                let coequalizes = f.then(h).unwrap() == g.then(h).unwrap();
                let factor = factor_through_epi(&p, h);
                assert_eq!(coequalizes, factor.is_ok());
                if let Ok(x) = factor {
                    assert_eq!(&p.then(&x).unwrap(), h);
                }
            }
        }
    }
}

#[test]
fn pointed_coproduct_is_a_wedge() {
    let objs = [BaseObject::Pointed(3), BaseObject::Pointed(2)];
    let (sum, inj) = coproduct(BaseTag::Pointed, &objs).unwrap();
    assert_eq!(sum, BaseObject::Pointed(4));
    assert_eq!(inj[1].table().unwrap(), &[0, 3]);
    let cod = BaseObject::Pointed(2);
    let f = BaseMorphism::from_table(objs[0].clone(), cod.clone(), vec![0, 1, 0]).unwrap();
    let g = BaseMorphism::from_table(objs[1].clone(), cod.clone(), vec![0, 1]).unwrap();
    let c = copair(BaseTag::Pointed, &objs, &[f.clone(), g], &cod).unwrap();
    assert_eq!(inj[0].then(&c).unwrap(), f);
}

#[test]
fn hom_sizes_are_checked() {
    assert!(matches!(hom_left(&BaseObject::FinSet(64), &BaseObject::FinSet(2)), Err(BaseError::TooLarge(_))));
    assert_eq!(hom_left(&BaseObject::Pointed(3), &BaseObject::Pointed(3)).unwrap(), BaseObject::Pointed(9));
    assert!(matches!(enumerate_morphisms(&BaseObject::MatQ(1), &BaseObject::MatQ(1), 10), Err(BaseError::NotEnumerable(_))));
}

fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| Matrix::from_rows(rows, cols, v.into_iter().map(q).collect()))
}

proptest! {
    #[test]
    fn matq_curry_round_trips(m in matrix_strategy(2, 6)) {
        let (a, x, b) = (BaseObject::MatQ(3), BaseObject::MatQ(2), BaseObject::MatQ(2));
        let f = BaseMorphism::from_matrix(tensor_obj(&a, &x).unwrap(), b.clone(), m).unwrap();
        let g = curry_left(&a, &x, &f).unwrap();
        prop_assert_eq!(&uncurry_left(&a, &b, &g).unwrap(), &f);
        let via_ev = tensor_mor(&BaseMorphism::identity(&a), &g).unwrap().then(&eval_left(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(&via_ev, &f);
        let f2 = BaseMorphism::from_matrix(tensor_obj(&x, &a).unwrap(), b.clone(), f.matrix().unwrap().clone()).unwrap();
        let g2 = curry_right(&x, &a, &f2).unwrap();
        prop_assert_eq!(&uncurry_right(&a, &b, &g2).unwrap(), &f2);
    }

    #[test]
    fn matq_coequalizer_and_equalizer(f in matrix_strategy(3, 2), g in matrix_strategy(3, 2)) {
        let (d, c) = (BaseObject::MatQ(2), BaseObject::MatQ(3));
        let f = BaseMorphism::from_matrix(d.clone(), c.clone(), f).unwrap();
        let g = BaseMorphism::from_matrix(d.clone(), c.clone(), g).unwrap();
        let (qo, p) = coequalizer(&f, &g).unwrap();
        prop_assert_eq!(f.then(&p).unwrap(), g.then(&p).unwrap());
        let rank = f.matrix().unwrap().sub(g.matrix().unwrap()).rank();
        prop_assert_eq!(qo.size(), 3 - rank);
        prop_assert_eq!(factor_through_epi(&p, &p).unwrap().is_identity(), true);
        let (eo, e) = equalizer(&f, &g).unwrap();
        prop_assert_eq!(e.then(&f).unwrap(), e.then(&g).unwrap());
        prop_assert_eq!(eo.size(), 2 - rank);
    }
}

#[test]
fn symmetry_agrees_with_transposed_identity() {
    for tag in BaseTag::ALL {
        let objs = samples(tag);
        for a in &objs {
            for b in &objs {
                let ba = tensor_obj(b, a).unwrap();
                let curried = curry_right(b, a, &BaseMorphism::identity(&ba)).unwrap();
                assert_eq!(uncurry_left(a, &ba, &curried).unwrap(), symmetry(a, b).unwrap(), "{tag}");
            }
        }
    }
}
