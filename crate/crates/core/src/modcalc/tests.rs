use std::sync::Arc;

use super::*;
use crate::base::{BaseMorphism, BaseObject, BaseTag};
use crate::enriched::{hom_profunctor, identity_profunctor, Concrete, ProfMap, Profunctor, VCategory, VFunctor};

fn idempotent() -> Arc<VCategory> {
    // 0 = 1, 1 = e
    Arc::new(VCategory::monoid(&[vec![0, 1], vec![1, 1]], 0).unwrap())
}

fn point_module(source: &Arc<VCategory>, target: &Arc<VCategory>) -> Arc<Profunctor> {
    let one = BaseObject::FinSet(1);
    Arc::new(
        Profunctor::from_fn(
            source.clone(),
            target.clone(),
            |_, _| Ok(one.clone()),
            |b2, b, _| Ok(BaseMorphism::from_table(BaseObject::FinSet(target.hom(b2, b).size()), one.clone(), vec![0; target.hom(b2, b).size()])?),
            |_, a, a2| Ok(BaseMorphism::from_table(BaseObject::FinSet(source.hom(a, a2).size()), one.clone(), vec![0; source.hom(a, a2).size()])?),
        )
        .unwrap(),
    )
}

fn idempotent_adjunction(eps_value: usize) -> AdjunctionData {
    let e = idempotent();
    let i = Arc::new(VCategory::unit_category(BaseTag::FinSet));
    let phi = point_module(&i, &e);
    let psi = point_module(&e, &i);
    assert!(phi.check().holds() && psi.check().holds());
    let one = BaseObject::FinSet(1);
    let eta = vec![BaseMorphism::identity(&one)];
    let eps = vec![BaseMorphism::from_table(one, BaseObject::FinSet(2), vec![eps_value]).unwrap()];
    AdjunctionData::new(phi, psi, eta, eps).unwrap()
}

#[test]
fn idempotent_weight_has_a_right_adjoint() {
    let adj = idempotent_adjunction(1);
    assert_eq!(adj.psi_phi.result.comp(0, 0), &BaseObject::FinSet(1));
    assert_eq!(adj.phi_psi.result.comp(0, 0), &BaseObject::FinSet(1));
    assert!(check_adjunction(&adj).unwrap().holds());
    let bad = check_adjunction(&idempotent_adjunction(0)).unwrap();
    assert!(!bad.holds());
    assert!(bad.failures[0].starts_with("counit"));
}

#[test]
fn identity_profunctor_is_a_unit_for_the_tensor() {
    let e = idempotent();
    let id = Arc::new(identity_profunctor(&e).unwrap());
    let pres = tensor_over(&id, &id).unwrap();
    let l = tensor::left_unitor(&pres).unwrap();
    let r = tensor::right_unitor(&pres).unwrap();
    assert_eq!(l.forward, r.forward, "both unitors of A ⊗ A agree");
    assert_eq!(l.backward.then(&l.forward).unwrap(), ProfMap::identity(&id));
    assert_eq!(l.forward.then(&l.backward).unwrap(), ProfMap::identity(&pres.result));
}

#[test]
fn unbalanced_family_reports_a_witness() {
    let e = idempotent();
    let id = Arc::new(identity_profunctor(&e).unwrap());
    let pres = tensor_over(&id, &id).unwrap();
    // f ⊗ g ↦ f, which ignores the middle action
    let err = pres
        .induce(&id, |_, _, _| Ok(BaseMorphism::from_table(BaseObject::FinSet(4), BaseObject::FinSet(2), vec![0, 0, 1, 1]).unwrap()))
        .unwrap_err();
    assert!(matches!(err, crate::Error::NotBalanced(_)), "{err}");
}

#[test]
fn lifting_hom_of_identity_is_the_target() {
    let c = Concrete::generate(
        BaseTag::FinSet,
        vec!["A".into(), "B".into()],
        vec![BaseObject::FinSet(2), BaseObject::FinSet(1)],
        &[(0, 0, vec![0, 0]), (0, 1, vec![0, 0]), (1, 0, vec![0])],
        16,
    )
    .unwrap();
    let cat = Arc::new(c.category().unwrap());
    let id = Arc::new(identity_profunctor(&cat).unwrap());
    let x = VFunctor::point(cat.clone(), 0).unwrap();
    let whole = VFunctor::identity(cat.clone());
    let l = Arc::new(hom_profunctor(&whole, &x).unwrap());
    let lh = lifting_hom_left(&id, &l).unwrap();
    assert!(lh.result.check().holds());
    let pres = tensor_over(&id, &lh.result).unwrap();
    let ev = lh.evaluation(&pres).unwrap();
    let ex = exhibits_as_left_hom(&lh, &pres, &ev).unwrap();
    assert!(ex.holds(), "{:?}", ex.failures);
    for a in 0..2 {
        assert_eq!(lh.result.comp(a, 0).size(), l.comp(a, 0).size());
    }
    let rh = lifting_hom_right(&id, &Arc::new(hom_profunctor(&x, &whole).unwrap())).unwrap();
    assert!(rh.result.check().holds());
    let pres = tensor_over(&rh.result, &id).unwrap();
    let ev = rh.evaluation(&pres).unwrap();
    assert!(exhibits_as_right_hom(&rh, &pres, &ev).unwrap().holds());
}

#[test]
fn dual_adjunction_is_an_adjunction() {
    let adj = idempotent_adjunction(1);
    let a_op = Arc::new(adj.phi.source().op().unwrap());
    let b_op = Arc::new(adj.phi.target().op().unwrap());
    let dual = adj.dual(&a_op, &b_op).unwrap();
    assert!(check_adjunction(&dual).unwrap().holds());
}
