use std::sync::Arc;

use crate::base::{self, BaseMorphism, BaseObject, BaseTag};
use crate::enriched::{same, ProfMap, Profunctor};
use crate::error::{shape, Result};

use super::tensor::QuotientPresentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `[N, L]`, right adjoint to `N ⊗ -`.
    Left,
    /// `⟨M, L⟩`, right adjoint to `- ⊗ M`.
    Right,
}

/// Component-wise end data: factors of the product and the equalizer inclusion.
#[derive(Debug, Clone)]
struct Ends {
    tag: BaseTag,
    stride: usize,
    factors: Vec<Vec<BaseObject>>,
    inclusions: Vec<BaseMorphism>,
}

impl Ends {
    fn obj(&self, row: usize, col: usize) -> BaseObject {
        self.inclusions[row * self.stride + col].dom().clone()
    }

    fn leg(&self, row: usize, col: usize, k: usize) -> Result<BaseMorphism> {
        let i = row * self.stride + col;
        let (_, proj) = base::product(self.tag, &self.factors[i])?;
        Ok(self.inclusions[i].then(&proj[k])?)
    }

    fn tuple_into(&self, row: usize, col: usize, dom: &BaseObject, maps: &[BaseMorphism]) -> Result<BaseMorphism> {
        let i = row * self.stride + col;
        let t = base::tuple(self.tag, dom, &self.factors[i], maps)?;
        Ok(base::factor_through_mono(&self.inclusions[i], &t)?)
    }
}

/// A lifting hom computed as an end: each component is the joint equalizer
/// of the "act before" and "act after" maps out of a product of internal homs.
#[derive(Debug, Clone)]
pub struct LiftingHom {
    pub side: Side,
    pub result: Arc<Profunctor>,
    /// `N` (left side) or `M` (right side).
    pub weight: Arc<Profunctor>,
    pub target: Arc<Profunctor>,
    ends: Ends,
}

fn id(o: &BaseObject) -> BaseMorphism {
    BaseMorphism::identity(o)
}

/// The joint equalizer of the pairs `(f_k, g_k)` out of a common domain.
fn joint_equalizer(dom: &BaseObject, pairs: &[(BaseMorphism, BaseMorphism)]) -> Result<BaseMorphism> {
    let mut incl = id(dom);
    for (f, g) in pairs {
        let (_, e) = base::equalizer(&incl.then(f)?, &incl.then(g)?)?;
        incl = e.then(&incl)?;
    }
    Ok(incl)
}

impl LiftingHom {
    /// The end inclusion at component `(row, col)` of the result.
    pub fn inclusion(&self, row: usize, col: usize) -> &BaseMorphism {
        &self.ends.inclusions[row * self.ends.stride + col]
    }

    /// Inclusion followed by the projection to factor `k`.
    pub fn leg(&self, row: usize, col: usize, k: usize) -> Result<BaseMorphism> {
        self.ends.leg(row, col, k)
    }

    fn tuple_into(&self, row: usize, col: usize, dom: &BaseObject, maps: &[BaseMorphism]) -> Result<BaseMorphism> {
        self.ends.tuple_into(row, col, dom, maps)
    }

    /// Evaluation `N ⊗_A [N, L] -> L` (left side) or `⟨M, L⟩ ⊗_B M -> L`
    /// (right side); `pres` must present that tensor.
    pub fn evaluation(&self, pres: &QuotientPresentation) -> Result<ProfMap> {
        match self.side {
            Side::Left => {
                if !same(&pres.left, &self.weight) || !same(&pres.right, &self.result) {
                    return shape("evaluation needs N ⊗ [N, L]");
                }
                let (n, l) = (&self.weight, &self.target);
                pres.induce(l, |b, x, a| {
                    let leg = self.leg(a, x, b)?;
                    Ok(base::tensor_mor(&id(n.comp(b, a)), &leg)?.then(&base::eval_left(n.comp(b, a), l.comp(b, x))?)?)
                })
            }
            Side::Right => {
                if !same(&pres.left, &self.result) || !same(&pres.right, &self.weight) {
                    return shape("evaluation needs ⟨M, L⟩ ⊗ M");
                }
                let (m, l) = (&self.weight, &self.target);
                pres.induce(l, |c, a, b| {
                    let leg = self.leg(c, b, a)?;
                    Ok(base::tensor_mor(&leg, &id(m.comp(b, a)))?.then(&base::eval_right(m.comp(b, a), l.comp(c, a))?)?)
                })
            }
        }
    }
}

/// `[N, L] : X ⇸ A` for `N : A ⇸ B` and `L : X ⇸ B`, with component
/// `[N, L](a, x) = ∫_b [N(b, a), L(b, x)]`.
pub fn lifting_hom_left(n: &Arc<Profunctor>, l: &Arc<Profunctor>) -> Result<LiftingHom> {
    if !same(n.target(), l.target()) {
        return shape("lifting hom needs a shared target");
    }
    let tag = n.tag();
    let (ac, bc, xc) = (n.source().clone(), n.target().clone(), l.source().clone());
    let (na, nb, nx) = (ac.size(), bc.size(), xc.size());
    let mut factors = Vec::with_capacity(na * nx);
    let mut inclusions = Vec::with_capacity(na * nx);
    for a in 0..na {
        for x in 0..nx {
            let fs = (0..nb)
                .map(|b| Ok(base::hom_left(n.comp(b, a), l.comp(b, x))?))
                .collect::<Result<Vec<_>>>()?;
            let (prod, proj) = base::product(tag, &fs)?;
            let mut pairs = Vec::with_capacity(nb * nb);
            for b2 in 0..nb {
                for b in 0..nb {
                    let (h, nba) = (bc.hom(b2, b), n.comp(b, a));
                    let src = base::tensor_obj(h, nba)?;
                    // act after: (h ⊗ n) ⊗ φ ↦ h · φ(n)
                    let after_body = base::compose_chain(&[
                        &base::associator(h, nba, &fs[b])?,
                        &base::tensor_mor(&id(h), &base::eval_left(nba, l.comp(b, x))?)?,
                        l.left(b2, b, x),
                    ])?;
                    let after = proj[b].then(&base::curry_left(&src, &fs[b], &after_body)?)?;
                    // act before: (h ⊗ n) ⊗ φ' ↦ φ'(h · n)
                    let before_body = base::compose_chain(&[
                        &base::tensor_mor(n.left(b2, b, a), &id(&fs[b2]))?,
                        &base::eval_left(n.comp(b2, a), l.comp(b2, x))?,
                    ])?;
                    let before = proj[b2].then(&base::curry_left(&src, &fs[b2], &before_body)?)?;
                    pairs.push((after, before));
                }
            }
            inclusions.push(joint_equalizer(&prod, &pairs)?);
            factors.push(fs);
        }
    }
    let ends = Ends { tag, stride: nx, factors, inclusions };
    let comp = |a: usize, x: usize| ends.obj(a, x);
    let result = Profunctor::from_fn(
        xc.clone(),
        ac.clone(),
        |a, x| Ok(comp(a, x)),
        |a2, a, x| {
            // (h ⊗ φ) acts by φ_b(n' · h)
            let (h, e) = (ac.hom(a2, a), comp(a, x));
            let dom = base::tensor_obj(h, &e)?;
            let maps = (0..nb)
                .map(|b| {
                    let nb2 = n.comp(b, a2);
                    let body = base::compose_chain(&[
                        &base::associator_inv(nb2, h, &e)?,
                        &base::tensor_mor(n.right(b, a2, a), &id(&e))?,
                        &base::tensor_mor(&id(n.comp(b, a)), &ends.leg(a, x, b)?)?,
                        &base::eval_left(n.comp(b, a), l.comp(b, x))?,
                    ])?;
                    Ok(base::curry_left(nb2, &dom, &body)?)
                })
                .collect::<Result<Vec<_>>>()?;
            ends.tuple_into(a2, x, &dom, &maps)
        },
        |a, x, x2| {
            // (φ ⊗ k) acts by φ_b(n) · k
            let (e, k) = (comp(a, x), xc.hom(x, x2));
            let dom = base::tensor_obj(&e, k)?;
            let maps = (0..nb)
                .map(|b| {
                    let nba = n.comp(b, a);
                    let body = base::compose_chain(&[
                        &base::associator_inv(nba, &e, k)?,
                        &base::tensor_mor(&base::tensor_mor(&id(nba), &ends.leg(a, x, b)?)?, &id(k))?,
                        &base::tensor_mor(&base::eval_left(nba, l.comp(b, x))?, &id(k))?,
                        l.right(b, x, x2),
                    ])?;
                    Ok(base::curry_left(nba, &dom, &body)?)
                })
                .collect::<Result<Vec<_>>>()?;
            ends.tuple_into(a, x2, &dom, &maps)
        },
    )?;
    Ok(LiftingHom { side: Side::Left, result: Arc::new(result), weight: n.clone(), target: l.clone(), ends })
}

/// `⟨M, L⟩ : B ⇸ C` for `M : A ⇸ B` and `L : A ⇸ C`, with component
/// `⟨M, L⟩(c, b) = ∫_a ⟨M(b, a), L(c, a)⟩`.
pub fn lifting_hom_right(m: &Arc<Profunctor>, l: &Arc<Profunctor>) -> Result<LiftingHom> {
    if !same(m.source(), l.source()) {
        return shape("lifting hom needs a shared source");
    }
    let tag = m.tag();
    let (ac, bc, cc) = (m.source().clone(), m.target().clone(), l.target().clone());
    let (na, nb, nc) = (ac.size(), bc.size(), cc.size());
    let mut factors = Vec::with_capacity(nc * nb);
    let mut inclusions = Vec::with_capacity(nc * nb);
    for c in 0..nc {
        for b in 0..nb {
            let fs = (0..na)
                .map(|a| Ok(base::hom_right(m.comp(b, a), l.comp(c, a))?))
                .collect::<Result<Vec<_>>>()?;
            let (prod, proj) = base::product(tag, &fs)?;
            let mut pairs = Vec::with_capacity(na * na);
            for a in 0..na {
                for a2 in 0..na {
                    let (mba, k) = (m.comp(b, a), ac.hom(a, a2));
                    let src = base::tensor_obj(mba, k)?;
                    // act after: φ ⊗ (m ⊗ k) ↦ φ(m) · k
                    let after_body = base::compose_chain(&[
                        &base::associator_inv(&fs[a], mba, k)?,
                        &base::tensor_mor(&base::eval_right(mba, l.comp(c, a))?, &id(k))?,
                        l.right(c, a, a2),
                    ])?;
                    let after = proj[a].then(&base::curry_right(&fs[a], &src, &after_body)?)?;
                    // act before: φ' ⊗ (m ⊗ k) ↦ φ'(m · k)
                    let before_body = base::compose_chain(&[
                        &base::tensor_mor(&id(&fs[a2]), m.right(b, a, a2))?,
                        &base::eval_right(m.comp(b, a2), l.comp(c, a2))?,
                    ])?;
                    let before = proj[a2].then(&base::curry_right(&fs[a2], &src, &before_body)?)?;
                    pairs.push((after, before));
                }
            }
            inclusions.push(joint_equalizer(&prod, &pairs)?);
            factors.push(fs);
        }
    }
    let ends = Ends { tag, stride: nb, factors, inclusions };
    let comp = |c: usize, b: usize| ends.obj(c, b);
    let leg = |c: usize, b: usize, a: usize| ends.leg(c, b, a);
    let tuple_into = |c: usize, b: usize, dom: &BaseObject, maps: &[BaseMorphism]| ends.tuple_into(c, b, dom, maps);
    let result = Profunctor::from_fn(
        bc.clone(),
        cc.clone(),
        |c, b| Ok(comp(c, b)),
        |c2, c, b| {
            // (h ⊗ φ) acts by h · φ_a(m)
            let (h, e) = (cc.hom(c2, c), comp(c, b));
            let dom = base::tensor_obj(h, &e)?;
            let maps = (0..na)
                .map(|a| {
                    let mba = m.comp(b, a);
                    let body = base::compose_chain(&[
                        &base::associator(h, &e, mba)?,
                        &base::tensor_mor(&id(h), &base::tensor_mor(&leg(c, b, a)?, &id(mba))?)?,
                        &base::tensor_mor(&id(h), &base::eval_right(mba, l.comp(c, a))?)?,
                        l.left(c2, c, a),
                    ])?;
                    Ok(base::curry_right(&dom, mba, &body)?)
                })
                .collect::<Result<Vec<_>>>()?;
            tuple_into(c2, b, &dom, &maps)
        },
        |c, b, b2| {
            // (φ ⊗ k) acts by φ_a(k · m')
            let (e, k) = (comp(c, b), bc.hom(b, b2));
            let dom = base::tensor_obj(&e, k)?;
            let maps = (0..na)
                .map(|a| {
                    let mb2a = m.comp(b2, a);
                    let body = base::compose_chain(&[
                        &base::associator(&e, k, mb2a)?,
                        &base::tensor_mor(&id(&e), m.left(b, b2, a))?,
                        &base::tensor_mor(&leg(c, b, a)?, &id(m.comp(b, a)))?,
                        &base::eval_right(m.comp(b, a), l.comp(c, a))?,
                    ])?;
                    Ok(base::curry_right(&dom, mb2a, &body)?)
                })
                .collect::<Result<Vec<_>>>()?;
            tuple_into(c, b2, &dom, &maps)
        },
    )?;
    Ok(LiftingHom { side: Side::Right, result: Arc::new(result), weight: m.clone(), target: l.clone(), ends })
}

/// The canonical comparison `K -> [N, L]` (resp. `K -> ⟨M, L⟩`) of a map
/// `u : N ⊗ K -> L` (resp. `u : K ⊗ M -> L`) out of the presented tensor.
pub fn transpose(lh: &LiftingHom, pres: &QuotientPresentation, u: &ProfMap) -> Result<ProfMap> {
    if !same(u.dom(), &pres.result) || !same(u.cod(), &lh.target) {
        return shape("transposed map must run from the presented tensor to the lifting target");
    }
    match lh.side {
        Side::Left => {
            if !same(&pres.left, &lh.weight) {
                return shape("presentation must tensor with the weight on the left");
            }
            let (n, k) = (&lh.weight, &pres.right);
            let nb = n.target().size();
            ProfMap::from_fn(k.clone(), lh.result.clone(), |a, x| {
                let maps = (0..nb)
                    .map(|b| Ok(base::curry_left(n.comp(b, a), k.comp(a, x), &pres.inject(b, x, a).then(u.comp(b, x))?)?))
                    .collect::<Result<Vec<_>>>()?;
                lh.tuple_into(a, x, k.comp(a, x), &maps)
            })
        }
        Side::Right => {
            if !same(&pres.right, &lh.weight) {
                return shape("presentation must tensor with the weight on the right");
            }
            let (m, k) = (&lh.weight, &pres.left);
            let na = m.source().size();
            ProfMap::from_fn(k.clone(), lh.result.clone(), |c, b| {
                let maps = (0..na)
                    .map(|a| Ok(base::curry_right(k.comp(c, b), m.comp(b, a), &pres.inject(c, a, b).then(u.comp(c, a))?)?))
                    .collect::<Result<Vec<_>>>()?;
                lh.tuple_into(c, b, k.comp(c, b), &maps)
            })
        }
    }
}

/// Outcome of an exhibition test: the comparison map, its inverse when every
/// component is invertible, and the components that are not.
#[derive(Debug, Clone)]
pub struct Exhibition {
    pub comparison: ProfMap,
    pub inverse: Option<ProfMap>,
    pub failures: Vec<String>,
}

impl Exhibition {
    pub fn holds(&self) -> bool {
        self.inverse.is_some()
    }
}

fn exhibits(lh: &LiftingHom, pres: &QuotientPresentation, u: &ProfMap) -> Result<Exhibition> {
    let comparison = transpose(lh, pres, u)?;
    let k = comparison.dom().clone();
    let (rows, cols) = (k.target().size(), k.source().size());
    let mut inverses = Vec::with_capacity(rows * cols);
    let mut failures = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            match base::is_iso(comparison.comp(r, c)) {
                Some(inv) => inverses.push(inv),
                None => failures.push(format!(
                    "comparison is not invertible at ({}, {})",
                    k.target().label(r),
                    k.source().label(c)
                )),
            }
        }
    }
    let inverse = if failures.is_empty() { Some(ProfMap::new(lh.result.clone(), k, inverses)?) } else { None };
    Ok(Exhibition { comparison, inverse, failures })
}

/// Whether `u : N ⊗_A K -> L` exhibits `K` as `[N, L]`.
pub fn exhibits_as_left_hom(lh: &LiftingHom, pres: &QuotientPresentation, u: &ProfMap) -> Result<Exhibition> {
    if lh.side != Side::Left {
        return shape("left exhibition needs [N, L]");
    }
    exhibits(lh, pres, u)
}

/// Whether `u : K ⊗_B M -> L` exhibits `K` as `⟨M, L⟩`.
pub fn exhibits_as_right_hom(lh: &LiftingHom, pres: &QuotientPresentation, u: &ProfMap) -> Result<Exhibition> {
    if lh.side != Side::Right {
        return shape("right exhibition needs ⟨M, L⟩");
    }
    exhibits(lh, pres, u)
}

/// The unique `f̄ : K' -> K` with `f = u ∘ (N ⊗ f̄)` (or `u ∘ (f̄ ⊗ M)`), given
/// an exhibition of `K` and the presentation of `N ⊗ K'` carrying `f`.
pub fn factor_through_lifting(lh: &LiftingHom, ex: &Exhibition, pres: &QuotientPresentation, f: &ProfMap) -> Result<ProfMap> {
    let inverse = ex
        .inverse
        .as_ref()
        .ok_or_else(|| crate::Error::Precondition("map does not exhibit a lifting hom".into()))?;
    transpose(lh, pres, f)?.then(inverse)
}
