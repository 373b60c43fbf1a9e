use std::sync::Arc;

use crate::base::{self, BaseMorphism, BaseObject};
use crate::enriched::{identity_profunctor, same, ProfMap, Profunctor};
use crate::error::{shape, Error, Result};

/// Per-component data of a presented tensor.
#[derive(Debug, Clone)]
struct Component {
    blocks: Vec<BaseObject>,
    injections: Vec<BaseMorphism>,
    projection: BaseMorphism,
    relation_blocks: Vec<(usize, usize)>,
    relation_injections: Vec<BaseMorphism>,
    act_on_left: BaseMorphism,
    act_on_right: BaseMorphism,
}

/// `N ⊗_B M : A ⇸ C` for `M : A ⇸ B` and `N : B ⇸ C`, with component `(c, a)`
/// presented as the coequalizer of
/// `Σ_{b, b'} (N(c, b) ⊗ B(b, b')) ⊗ M(b', a) ⇉ Σ_b N(c, b) ⊗ M(b, a)`.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    pub result: Arc<Profunctor>,
    pub left: Arc<Profunctor>,
    pub right: Arc<Profunctor>,
    comps: Vec<Component>,
}

impl QuotientPresentation {
    fn component(&self, c: usize, a: usize) -> &Component {
        &self.comps[c * self.right.source().size() + a]
    }

    /// `Σ_b N(c, b) ⊗ M(b, a)`.
    pub fn sum(&self, c: usize, a: usize) -> &BaseObject {
        self.component(c, a).projection.dom()
    }

    pub fn blocks(&self, c: usize, a: usize) -> &[BaseObject] {
        &self.component(c, a).blocks
    }

    pub fn projection(&self, c: usize, a: usize) -> &BaseMorphism {
        &self.component(c, a).projection
    }

    /// `N(c, b) ⊗ M(b, a) -> (N ⊗_B M)(c, a)`.
    pub fn inject(&self, c: usize, a: usize, b: usize) -> BaseMorphism {
        let k = self.component(c, a);
        k.injections[b].then(&k.projection).expect("injection lands in the sum")
    }

    /// The map `(N ⊗_B M)(c, a) -> cod` determined by `family(b)` on each
    /// block, or the witness `(c, b, b', a)` where the family is not balanced.
    pub fn descend(
        &self,
        c: usize,
        a: usize,
        cod: &BaseObject,
        family: impl FnMut(usize) -> Result<BaseMorphism>,
    ) -> Result<BaseMorphism> {
        let k = self.component(c, a);
        let fam = (0..k.blocks.len()).map(family).collect::<Result<Vec<_>>>()?;
        let h = base::copair(cod.tag(), &k.blocks, &fam, cod)?;
        let lhs = k.act_on_left.then(&h)?;
        let rhs = k.act_on_right.then(&h)?;
        if lhs != rhs {
            let (cc, ac) = (self.left.target(), self.right.source());
            let bc = self.right.target();
            for (r, &(b, b2)) in k.relation_injections.iter().zip(&k.relation_blocks) {
                if r.then(&lhs)? != r.then(&rhs)? {
                    return Err(Error::NotBalanced(format!(
                        "({}, {}, {}, {})",
                        cc.label(c),
                        bc.label(b),
                        bc.label(b2),
                        ac.label(a)
                    )));
                }
            }
        }
        Ok(base::factor_through_epi(&k.projection, &h)?)
    }

    /// The profunctor map `N ⊗_B M -> L` restricting to `family(c, a, b)` on
    /// each block; fails with a witness if unbalanced or not equivariant.
    pub fn induce(
        &self,
        cod: &Arc<Profunctor>,
        mut family: impl FnMut(usize, usize, usize) -> Result<BaseMorphism>,
    ) -> Result<ProfMap> {
        let map = ProfMap::from_fn(self.result.clone(), cod.clone(), |c, a| {
            self.descend(c, a, cod.comp(c, a), |b| family(c, a, b))
        })?;
        let report = map.check();
        if !report.holds() {
            return Err(Error::Invalid(format!("induced map is not equivariant: {}", report.failures[0])));
        }
        Ok(map)
    }
}

fn id(o: &BaseObject) -> BaseMorphism {
    BaseMorphism::identity(o)
}

/// Presents `n ⊗_B m`.
pub fn tensor_over(n: &Arc<Profunctor>, m: &Arc<Profunctor>) -> Result<QuotientPresentation> {
    if !same(n.source(), m.target()) {
        return shape("tensor over mismatched middle categories");
    }
    let tag = n.tag();
    let (ac, bc, cc) = (m.source().clone(), m.target().clone(), n.target().clone());
    let (na, nb, nc) = (ac.size(), bc.size(), cc.size());
    let mut comps = Vec::with_capacity(nc * na);
    for c in 0..nc {
        for a in 0..na {
            let blocks = (0..nb)
                .map(|b| Ok(base::tensor_obj(n.comp(c, b), m.comp(b, a))?))
                .collect::<Result<Vec<_>>>()?;
            let (sum, injections) = base::coproduct(tag, &blocks)?;
            let mut relation_blocks = Vec::with_capacity(nb * nb);
            let mut rel_objs = Vec::with_capacity(nb * nb);
            let (mut via_n, mut via_m) = (Vec::new(), Vec::new());
            for b in 0..nb {
                for b2 in 0..nb {
                    let (x, h, y) = (n.comp(c, b), bc.hom(b, b2), m.comp(b2, a));
                    rel_objs.push(base::tensor_obj(&base::tensor_obj(x, h)?, y)?);
                    relation_blocks.push((b, b2));
                    via_n.push(base::tensor_mor(n.right(c, b, b2), &id(y))?.then(&injections[b2])?);
                    via_m.push(base::compose_chain(&[
                        &base::associator(x, h, y)?,
                        &base::tensor_mor(&id(x), m.left(b, b2, a))?,
                        &injections[b],
                    ])?);
                }
            }
            let (_, relation_injections) = base::coproduct(tag, &rel_objs)?;
            let act_on_left = base::copair(tag, &rel_objs, &via_n, &sum)?;
            let act_on_right = base::copair(tag, &rel_objs, &via_m, &sum)?;
            let (_, projection) = base::coequalizer(&act_on_left, &act_on_right)?;
            comps.push(Component {
                blocks,
                injections,
                projection,
                relation_blocks,
                relation_injections,
                act_on_left,
                act_on_right,
            });
        }
    }
    let inject = |c: usize, a: usize, b: usize| -> Result<BaseMorphism> {
        let k = &comps[c * na + a];
        Ok(k.injections[b].then(&k.projection)?)
    };
    let result = Profunctor::from_fn(
        ac.clone(),
        cc.clone(),
        |c, a| Ok(comps[c * na + a].projection.cod().clone()),
        |c2, c, a| {
            let x = cc.hom(c2, c);
            let k = &comps[c * na + a];
            let family = (0..nb)
                .map(|b| {
                    Ok(base::compose_chain(&[
                        &base::associator_inv(x, n.comp(c, b), m.comp(b, a))?,
                        &base::tensor_mor(n.left(c2, c, b), &id(m.comp(b, a)))?,
                        &inject(c2, a, b)?,
                    ])?)
                })
                .collect::<Result<Vec<_>>>()?;
            let cod = comps[c2 * na + a].projection.cod();
            let h = base::out_of_sum_tensor_left(x, &k.blocks, &family, cod)?;
            Ok(base::out_of_quotient_tensor_left(x, &k.projection, &h)?)
        },
        |c, a, a2| {
            let x = ac.hom(a, a2);
            let k = &comps[c * na + a];
            let family = (0..nb)
                .map(|b| {
                    Ok(base::compose_chain(&[
                        &base::associator(n.comp(c, b), m.comp(b, a), x)?,
                        &base::tensor_mor(&id(n.comp(c, b)), m.right(b, a, a2))?,
                        &inject(c, a2, b)?,
                    ])?)
                })
                .collect::<Result<Vec<_>>>()?;
            let cod = comps[c * na + a2].projection.cod();
            let h = base::out_of_sum_tensor_right(&k.blocks, x, &family, cod)?;
            Ok(base::out_of_quotient_tensor_right(&k.projection, x, &h)?)
        },
    )?;
    Ok(QuotientPresentation { result: Arc::new(result), left: n.clone(), right: m.clone(), comps })
}

/// `u ⊗ v : N ⊗ M -> N' ⊗ M'` between two presentations.
pub fn map_tensor(u: &ProfMap, v: &ProfMap, dom: &QuotientPresentation, cod: &QuotientPresentation) -> Result<ProfMap> {
    if !same(u.dom(), &dom.left) || !same(v.dom(), &dom.right) || !same(u.cod(), &cod.left) || !same(v.cod(), &cod.right) {
        return shape("tensored maps do not match the presentations");
    }
    dom.induce(&cod.result, |c, a, b| Ok(base::tensor_mor(u.comp(c, b), v.comp(b, a))?.then(&cod.inject(c, a, b))?))
}

/// An invertible profunctor map with its inverse.
#[derive(Debug, Clone)]
pub struct Iso {
    pub forward: ProfMap,
    pub backward: ProfMap,
}

/// `B ⊗_B M ≅ M` for `M : A ⇸ B`; `pres` must present `B ⊗_B M`.
pub fn left_unitor(pres: &QuotientPresentation) -> Result<Iso> {
    let m = pres.right.clone();
    if *pres.left != identity_profunctor(m.target())? {
        return shape("left unitor needs the identity profunctor on the left");
    }
    let bc = m.target().clone();
    let forward = pres.induce(&m, |b2, a, b| Ok(m.left(b2, b, a).clone()))?;
    let backward = ProfMap::from_fn(m.clone(), pres.result.clone(), |b, a| {
        let x = m.comp(b, a);
        Ok(base::compose_chain(&[
            &base::left_unitor_inv(x)?,
            &base::tensor_mor(bc.unit(b), &id(x))?,
            &pres.inject(b, a, b),
        ])?)
    })?;
    Ok(Iso { forward, backward })
}

/// `M ⊗_A A ≅ M` for `M : A ⇸ B`; `pres` must present `M ⊗_A A`.
pub fn right_unitor(pres: &QuotientPresentation) -> Result<Iso> {
    let m = pres.left.clone();
    if *pres.right != identity_profunctor(m.source())? {
        return shape("right unitor needs the identity profunctor on the right");
    }
    let ac = m.source().clone();
    let forward = pres.induce(&m, |b, a, a2| Ok(m.right(b, a2, a).clone()))?;
    let backward = ProfMap::from_fn(m.clone(), pres.result.clone(), |b, a| {
        let x = m.comp(b, a);
        Ok(base::compose_chain(&[
            &base::right_unitor_inv(x)?,
            &base::tensor_mor(&id(x), ac.unit(a))?,
            &pres.inject(b, a, a),
        ])?)
    })?;
    Ok(Iso { forward, backward })
}

/// `(P ⊗ N) ⊗ M ≅ P ⊗ (N ⊗ M)`. `outer_left` presents `(P ⊗ N) ⊗ M` with
/// `pn` presenting its left factor; `outer_right` presents `P ⊗ (N ⊗ M)` with
/// `nm` presenting its right factor.
pub fn associator(
    pn: &QuotientPresentation,
    outer_left: &QuotientPresentation,
    nm: &QuotientPresentation,
    outer_right: &QuotientPresentation,
) -> Result<Iso> {
    let (p, n, m) = (pn.left.clone(), pn.right.clone(), outer_left.right.clone());
    if !same(&outer_left.left, &pn.result)
        || !same(&nm.left, &n)
        || !same(&nm.right, &m)
        || !same(&outer_right.left, &p)
        || !same(&outer_right.right, &nm.result)
    {
        return shape("associator presentations do not fit together");
    }
    let nc = n.target().size();
    let nb = m.target().size();
    let forward = outer_left.induce(&outer_right.result, |d, a, b| {
        let x = m.comp(b, a);
        let cod = outer_right.result.comp(d, a);
        let family = (0..nc)
            .map(|c| {
                Ok(base::compose_chain(&[
                    &base::associator(p.comp(d, c), n.comp(c, b), x)?,
                    &base::tensor_mor(&id(p.comp(d, c)), &nm.inject(c, a, b))?,
                    &outer_right.inject(d, a, c),
                ])?)
            })
            .collect::<Result<Vec<_>>>()?;
        let h = base::out_of_sum_tensor_right(pn.blocks(d, b), x, &family, cod)?;
        Ok(base::out_of_quotient_tensor_right(pn.projection(d, b), x, &h)?)
    })?;
    let backward = outer_right.induce(&outer_left.result, |d, a, c| {
        let x = p.comp(d, c);
        let cod = outer_left.result.comp(d, a);
        let family = (0..nb)
            .map(|b| {
                Ok(base::compose_chain(&[
                    &base::associator_inv(x, n.comp(c, b), m.comp(b, a))?,
                    &base::tensor_mor(&pn.inject(d, b, c), &id(m.comp(b, a)))?,
                    &outer_left.inject(d, a, b),
                ])?)
            })
            .collect::<Result<Vec<_>>>()?;
        let h = base::out_of_sum_tensor_left(x, nm.blocks(c, a), &family, cod)?;
        Ok(base::out_of_quotient_tensor_left(x, nm.projection(c, a), &h)?)
    })?;
    Ok(Iso { forward, backward })
}
