//! Ready-made absolute weights: splittings of idempotents, zero objects,
//! biproducts, sup-lattice coproducts and averaging over a finite group, each
//! with an ambient category, a diagram, an apex and the expected (co)cones.

use std::sync::Arc;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::absolute::enumerate::{finset_profunctors, profunctor_maps};
use crate::absolute::{ColimitDatum, LimitDatum, SquaresDatum};
use crate::base::rational::{q, q_frac, Matrix, Q};
use crate::base::{self, BaseError, BaseMorphism, BaseObject, BaseTag, Lattice};
use crate::enriched::{hom_profunctor, Concrete, ProfMap, Profunctor, VCategory, VFunctor};
use crate::error::{shape, Error, Result};
use crate::modcalc::{tensor_over, AdjunctionData};

/// A one-entry change to a fixture that flips its verdict.
#[derive(Debug, Clone)]
pub enum Tweak {
    /// Replace the cocone component at this flat index.
    Cocone(usize, BaseMorphism),
    /// Replace the cone component at this flat index.
    Cone(usize, BaseMorphism),
    /// Move the apex to another object, with zero cocone and cone.
    Apex(usize),
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub tag: BaseTag,
    pub adj: AdjunctionData,
    pub c: Arc<VCategory>,
    pub f: VFunctor,
    pub z: VFunctor,
    pub expected_a: ProfMap,
    pub expected_b: ProfMap,
    pub expected_pass: bool,
    /// Encoding choices worth knowing when reading the fixture.
    pub note: String,
    pub perturbation: Option<(String, Tweak)>,
}

/// The default fixtures, by name.
pub const NAMES: [&str; 7] = [
    "idempotent",
    "idempotent-unsplit",
    "zero-object",
    "biproduct",
    "suplat-coproduct",
    "burnside-c2",
    "burnside-s3",
];

pub fn by_name(name: &str) -> Result<Fixture> {
    match name {
        "idempotent" => idempotent(),
        "idempotent-unsplit" => idempotent_unsplit(),
        "zero-object" => zero_object(),
        "biproduct" => biproduct(&[1, 1]),
        "suplat-coproduct" => suplat_coproduct(&[Lattice::chain(2), Lattice::chain(2)]),
        "burnside-c2" => {
            let (mult, rep) = cyclic2();
            burnside(&mult, &rep)
        }
        "burnside-s3" => {
            let (mult, rep) = symmetric3();
            burnside(&mult, &rep)
        }
        _ => Err(Error::Invalid(format!("unknown example {name:?}; known: {}", NAMES.join(", ")))),
    }
}

pub fn all() -> Result<Vec<Fixture>> {
    NAMES.iter().map(|n| by_name(n)).collect()
}

impl Fixture {
    pub fn colimit(&self) -> ColimitDatum {
        ColimitDatum { phi: self.adj.phi.clone(), f: self.f.clone(), z: self.z.clone(), a: self.expected_a.clone() }
    }

    pub fn limit(&self) -> LimitDatum {
        LimitDatum { psi: self.adj.psi.clone(), f: self.f.clone(), z: self.z.clone(), b: self.expected_b.clone() }
    }

    pub fn squares(&self) -> SquaresDatum {
        SquaresDatum {
            adj: self.adj.clone(),
            f: self.f.clone(),
            z: self.z.clone(),
            a: self.expected_a.clone(),
            b: self.expected_b.clone(),
        }
    }

    /// The fixture with its perturbation applied, if it has one.
    pub fn perturbed(&self) -> Result<Option<Fixture>> {
        let Some((what, tweak)) = &self.perturbation else { return Ok(None) };
        let mut out = self.clone();
        out.name = format!("{}-perturbed", self.name);
        out.expected_pass = !self.expected_pass;
        out.note = format!("{} Perturbed: {what}.", self.note);
        out.perturbation = None;
        let replace = |m: &ProfMap, k: usize, v: &BaseMorphism| {
            let mut comps = m.components().to_vec();
            comps[k] = v.clone();
            ProfMap::new(m.dom().clone(), m.cod().clone(), comps)
        };
        match tweak {
            Tweak::Cocone(k, v) => out.expected_a = replace(&self.expected_a, *k, v)?,
            Tweak::Cone(k, v) => out.expected_b = replace(&self.expected_b, *k, v)?,
            Tweak::Apex(x) => {
                out.z = VFunctor::point(self.c.clone(), *x)?;
                let fz = Arc::new(hom_profunctor(&out.f, &out.z)?);
                let zf = Arc::new(hom_profunctor(&out.z, &out.f)?);
                let phi = &self.adj.phi;
                let psi = &self.adj.psi;
                out.expected_a = ProfMap::from_fn(phi.clone(), fz.clone(), |b, a| Ok(BaseMorphism::zero(phi.comp(b, a), fz.comp(b, a))?))?;
                out.expected_b = ProfMap::from_fn(psi.clone(), zf.clone(), |a, b| Ok(BaseMorphism::zero(psi.comp(a, b), zf.comp(a, b))?))?;
            }
        }
        Ok(Some(out))
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

/// The module `source ⇸ target` with every component the smallest object
/// that receives the unit: one point, or the one-point pointed set.
fn trivial_module(source: &Arc<VCategory>, target: &Arc<VCategory>) -> Result<Arc<Profunctor>> {
    let tag = source.tag();
    let one = match tag {
        BaseTag::FinSet => BaseObject::FinSet(1),
        BaseTag::Pointed => BaseObject::Pointed(1),
        _ => return Err(BaseError::NotEnumerable(tag).into()),
    };
    let to_one = |dom: BaseObject| -> Result<BaseMorphism> {
        let n = dom.size();
        Ok(BaseMorphism::from_table(dom, one.clone(), vec![0; n])?)
    };
    Ok(Arc::new(Profunctor::from_fn(
        source.clone(),
        target.clone(),
        |_, _| Ok(one.clone()),
        |b2, b, _| to_one(base::tensor_obj(target.hom(b2, b), &one)?),
        |_, a, a2| to_one(base::tensor_obj(&one, source.hom(a, a2))?),
    )?))
}

/// `I ⇸ B` (or `B ⇸ I` when `dual`) for a discrete `B`, every component the
/// unit acted on by the unitor.
fn discrete_weight(unit_cat: &Arc<VCategory>, b: &Arc<VCategory>, dual: bool) -> Result<Arc<Profunctor>> {
    let i = base::unit_obj(b.tag());
    let act = |x: usize, y: usize| -> Result<BaseMorphism> {
        let dom = base::tensor_obj(b.hom(x, y), &i)?;
        if x == y {
            Ok(base::left_unitor(&i)?)
        } else {
            Ok(BaseMorphism::zero(&dom, &i)?)
        }
    };
    let unitor = || Ok(base::right_unitor(&i)?);
    let p = if dual {
        Profunctor::from_fn(
            b.clone(),
            unit_cat.clone(),
            |_, _| Ok(i.clone()),
            |_, _, _| unitor(),
            |_, x, y| Ok(base::symmetry(&i, b.hom(x, y))?.then(&act(x, y)?)?),
        )?
    } else {
        Profunctor::from_fn(unit_cat.clone(), b.clone(), |_, _| Ok(i.clone()), |y, x, _| act(y, x), |_, _, _| unitor())?
    };
    Ok(Arc::new(p))
}

/// Pointwise sum (matrices) or join (sup-lattices) of parallel maps.
fn join_maps(maps: &[BaseMorphism], dom: &BaseObject, cod: &BaseObject) -> Result<BaseMorphism> {
    if let [m] = maps {
        return Ok(m.clone());
    }
    let mut acc = BaseMorphism::zero(dom, cod)?;
    for m in maps {
        acc = match (acc.body(), m.body()) {
            (base::Body::Matrix(x), base::Body::Matrix(y)) => BaseMorphism::from_matrix(dom.clone(), cod.clone(), x.add(y))?,
            (base::Body::Table(x), base::Body::Table(y)) => {
                let l = cod.lattice().ok_or_else(|| Error::Invalid("joins need a lattice".into()))?;
                let t = x.iter().zip(y).map(|(&p, &r)| l.join(p, r)).collect();
                BaseMorphism::from_table(dom.clone(), cod.clone(), t)?
            }
            _ => return shape("maps to join must share a base"),
        };
    }
    Ok(acc)
}

/// The element of `hom(dom f, cod f)` naming `f`.
fn name(f: &BaseMorphism) -> Result<BaseMorphism> {
    let i = base::unit_obj(f.tag());
    Ok(base::curry_left(f.dom(), &i, &base::right_unitor(f.dom())?.then(f)?)?)
}

fn point_map(dom: &BaseObject, cod: &BaseObject, elem: usize) -> Result<BaseMorphism> {
    let n = dom.size();
    let mut t = vec![elem; n];
    if matches!(dom, BaseObject::Pointed(_) | BaseObject::SupLat(_)) {
        // the unit's bottom goes to bottom
        t[0] = 0;
    }
    Ok(BaseMorphism::from_table(dom.clone(), cod.clone(), t)?)
}

fn arrow(c: &Concrete, x: usize, y: usize, t: &[usize]) -> Result<usize> {
    c.index_of(x, y, t)
        .ok_or_else(|| Error::Invalid(format!("{:?} is not an arrow {} -> {}", t, c.labels()[x], c.labels()[y])))
}

fn check_fixture(fx: Fixture) -> Result<Fixture> {
    for (what, r) in [("diagram", fx.f.check()), ("apex", fx.z.check())] {
        if !r.holds() {
            return Err(Error::Invalid(format!("{what} is not a functor: {}", r.failures[0])));
        }
    }
    Ok(fx)
}

/// Splitting of the idempotent `e` on `obj` through `apex`, with retraction
/// `p : obj -> apex` and section `i : apex -> obj`.
pub fn idempotent_splitting(
    ambient: &Concrete,
    obj: usize,
    e: &[usize],
    apex: usize,
    i: &[usize],
    p: &[usize],
) -> Result<Fixture> {
    if ambient.tag() != BaseTag::FinSet {
        return Err(Error::Invalid("idempotent splittings are built over finite sets".into()));
    }
    let compose = base::finset::compose;
    if compose(e, e) != e {
        return Err(Error::Invalid(format!("{e:?} is not idempotent")));
    }
    let c = Arc::new(ambient.category()?);
    let em = Arc::new(VCategory::monoid(&[vec![0, 1], vec![1, 1]], 0)?);
    let unit = Arc::new(VCategory::unit_category(BaseTag::FinSet));
    let id: Vec<usize> = (0..ambient.carrier(obj).size()).collect();
    let (id_k, e_k) = (arrow(ambient, obj, obj, &id)?, arrow(ambient, obj, obj, e)?);
    let action = BaseMorphism::from_table(em.hom(0, 0).clone(), c.hom(obj, obj).clone(), vec![id_k, e_k])?;
    let f = VFunctor::new(em.clone(), c.clone(), vec![obj], vec![vec![action]])?;
    let z = VFunctor::point(c.clone(), apex)?;
    let phi = trivial_module(&unit, &em)?;
    let psi = trivial_module(&em, &unit)?;
    let one = BaseObject::FinSet(1);
    let eta = BaseMorphism::from_table(one.clone(), tensor_over(&psi, &phi)?.result.comp(0, 0).clone(), vec![0])?;
    let eps = BaseMorphism::from_table(tensor_over(&phi, &psi)?.result.comp(0, 0).clone(), em.hom(0, 0).clone(), vec![1])?;
    let adj = AdjunctionData::new(phi.clone(), psi.clone(), vec![eta], vec![eps])?;
    let fz = Arc::new(hom_profunctor(&f, &z)?);
    let zf = Arc::new(hom_profunctor(&z, &f)?);
    let pick = |dom: &BaseObject, cod: &BaseObject, k: usize| BaseMorphism::from_table(dom.clone(), cod.clone(), vec![k]);
    let (p_k, i_k) = (arrow(ambient, obj, apex, p)?, arrow(ambient, apex, obj, i)?);
    let a = ProfMap::new(phi.clone(), fz.clone(), vec![pick(&one, fz.comp(0, 0), p_k)?])?;
    let b = ProfMap::new(psi.clone(), zf.clone(), vec![pick(&one, zf.comp(0, 0), i_k)?])?;
    let id_apex: Vec<usize> = (0..ambient.carrier(apex).size()).collect();
    let expected_pass = compose(p, i) == id_apex && compose(i, p) == e;
    let perturbation = (0..zf.comp(0, 0).size()).find(|&k| k != i_k).map(|k| {
        let other = pick(&one, zf.comp(0, 0), k).expect("in range");
        (format!("section replaced by arrow #{k}"), Tweak::Cone(0, other))
    });
    check_fixture(Fixture {
        name: "idempotent".into(),
        tag: BaseTag::FinSet,
        adj,
        c,
        f,
        z,
        expected_a: a,
        expected_b: b,
        expected_pass,
        note: "Retraction p and section i with p after i the identity of the retract and i after p equal to e.".into(),
        perturbation,
    })
}

/// All maps between the listed finite sets, as a concrete category.
fn full_finset(names: &[&str], sizes: &[usize]) -> Result<Concrete> {
    let carriers: Vec<BaseObject> = sizes.iter().map(|&n| BaseObject::FinSet(n)).collect();
    let mut gens = Vec::new();
    for (x, cx) in carriers.iter().enumerate() {
        for (y, cy) in carriers.iter().enumerate() {
            for m in base::enumerate_morphisms(cx, cy, 1 << 12)? {
                gens.push((x, y, m.table().expect("finset").to_vec()));
            }
        }
    }
    Concrete::generate(BaseTag::FinSet, names.iter().map(|s| s.to_string()).collect(), carriers, &gens, 1 << 12)
}

/// The collapsing idempotent on `{0, 1}`, split through `{0}`.
pub fn idempotent() -> Result<Fixture> {
    let ambient = full_finset(&["A", "B"], &[2, 1])?;
    idempotent_splitting(&ambient, 0, &[0, 0], 1, &[0], &[0, 0])
}

/// The same idempotent in an ambient category with no retract to split it.
pub fn idempotent_unsplit() -> Result<Fixture> {
    let ambient = full_finset(&["A"], &[2])?;
    let mut fx = idempotent_splitting(&ambient, 0, &[0, 0], 0, &[0, 0], &[0, 0])?;
    fx.name = "idempotent-unsplit".into();
    fx.note = "The ambient category has no object the idempotent splits through.".into();
    fx.perturbation = None;
    Ok(fx)
}

/// Zero objects over pointed sets, in the one-object encoding: the diagram
/// category has a single object whose identity is zero, and the squares
/// reduce to `1_X = 0_X` for the apex `X`.
pub fn zero_object_fixture(ambient: &Concrete, apex: usize) -> Result<Fixture> {
    if ambient.tag() != BaseTag::Pointed {
        return Err(Error::Invalid("zero objects are built over pointed sets".into()));
    }
    let c = Arc::new(ambient.category()?);
    let zero_obj = (0..c.size())
        .find(|&x| c.hom(x, x).size() == 1)
        .ok_or_else(|| Error::Invalid("the ambient category has no object with 1 = 0".into()))?;
    let (i, triv) = (base::unit_obj(BaseTag::Pointed), BaseObject::Pointed(1));
    let t = Arc::new(VCategory::new(
        BaseTag::Pointed,
        vec!["0".into()],
        vec![vec![triv.clone()]],
        vec![BaseMorphism::zero(&i, &triv)?],
        vec![vec![vec![BaseMorphism::identity(&triv)]]],
    )?);
    let unit = Arc::new(VCategory::unit_category(BaseTag::Pointed));
    let f = VFunctor::new(t.clone(), c.clone(), vec![zero_obj], vec![vec![BaseMorphism::zero(&triv, c.hom(zero_obj, zero_obj))?]])?;
    let z = VFunctor::point(c.clone(), apex)?;
    let phi = trivial_module(&unit, &t)?;
    let psi = trivial_module(&t, &unit)?;
    let eta = BaseMorphism::zero(&i, tensor_over(&psi, &phi)?.result.comp(0, 0))?;
    let eps = BaseMorphism::zero(tensor_over(&phi, &psi)?.result.comp(0, 0), &triv)?;
    let adj = AdjunctionData::new(phi.clone(), psi.clone(), vec![eta], vec![eps])?;
    let fz = Arc::new(hom_profunctor(&f, &z)?);
    let zf = Arc::new(hom_profunctor(&z, &f)?);
    let a = ProfMap::new(phi, fz.clone(), vec![BaseMorphism::zero(&triv, fz.comp(0, 0))?])?;
    let b = ProfMap::new(psi, zf.clone(), vec![BaseMorphism::zero(&triv, zf.comp(0, 0))?])?;
    let other = (0..c.size()).find(|&x| c.hom(x, x).size() > 1);
    check_fixture(Fixture {
        name: "zero-object".into(),
        tag: BaseTag::Pointed,
        adj,
        c: c.clone(),
        f,
        z,
        expected_a: a,
        expected_b: b,
        expected_pass: c.hom(apex, apex).size() == 1,
        note: "The weight for the empty diagram is encoded with a one-object diagram category whose identity is \
               zero; the criterion is that the apex has 1 = 0."
            .into(),
        perturbation: other
            .filter(|_| c.hom(apex, apex).size() == 1)
            .map(|x| (format!("apex moved to {}", c.label(x)), Tweak::Apex(x))),
    })
}

/// A one-point pointed set and a two-point one, with the apex the former.
pub fn zero_object() -> Result<Fixture> {
    let ambient = Concrete::generate(
        BaseTag::Pointed,
        vec!["0".into(), "X".into()],
        vec![BaseObject::Pointed(1), BaseObject::Pointed(2)],
        &[],
        16,
    )?;
    zero_object_fixture(&ambient, 0)
}

/// A single object of `ambient` weighted by the identity: the colimit and the
/// limit are the object itself, both legs the identity.
pub fn identity_weight(ambient: Arc<VCategory>, x: usize) -> Result<Fixture> {
    let tag = ambient.tag();
    let b = Arc::new(VCategory::discrete(tag, vec!["*".into()])?);
    let adj = discrete_adjunction(&b)?;
    let f = VFunctor::new(b, ambient.clone(), vec![x], vec![vec![ambient.unit(x).clone()]])?;
    let z = VFunctor::point(ambient.clone(), x)?;
    let legs = [ambient.unit(x).clone()];
    let a = cocone_from_names(&adj, &f, &z, &legs)?;
    let b = cone_from_names(&adj, &f, &z, &legs)?;
    check_fixture(Fixture {
        name: format!("identity-weight-{}", ambient.label(x)),
        tag,
        adj,
        c: ambient,
        f,
        z,
        expected_a: a,
        expected_b: b,
        expected_pass: true,
        note: "One object weighted by the identity; both legs are its unit.".into(),
        perturbation: None,
    })
}

/// Adjoint data for the weight of a discrete `J`-fold coproduct: `η` the
/// diagonal into `⊕_j I`, `ε` the identity on matching indices.
fn discrete_adjunction(b: &Arc<VCategory>) -> Result<AdjunctionData> {
    let unit = Arc::new(VCategory::unit_category(b.tag()));
    let i = base::unit_obj(b.tag());
    let phi = discrete_weight(&unit, b, false)?;
    let psi = discrete_weight(&unit, b, true)?;
    let psi_phi = tensor_over(&psi, &phi)?;
    let phi_psi = tensor_over(&phi, &psi)?;
    let lu_inv = base::left_unitor_inv(&i)?;
    let legs = (0..b.size()).map(|j| Ok(lu_inv.then(&psi_phi.inject(0, 0, j))?)).collect::<Result<Vec<_>>>()?;
    let eta = join_maps(&legs, &i, psi_phi.result.comp(0, 0))?;
    let n = b.size();
    let eps = (0..n * n)
        .map(|k| {
            let (x, y) = (k / n, k % n);
            phi_psi.descend(x, y, b.hom(x, y), |_| {
                let dom = base::tensor_obj(&i, &i)?;
                Ok(if x == y { base::left_unitor(&i)? } else { BaseMorphism::zero(&dom, b.hom(x, y))? })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AdjunctionData::new(phi, psi, vec![eta], eps)
}

/// Biproducts of `Q^{d_j}` in finite-dimensional rational vector spaces, with
/// the canonical injections and projections.
pub fn biproduct(dims: &[usize]) -> Result<Fixture> {
    let jn = dims.len();
    let total: usize = dims.iter().sum();
    let mut objs: Vec<BaseObject> = dims.iter().map(|&d| BaseObject::MatQ(d)).collect();
    objs.push(BaseObject::MatQ(total));
    let mut names = labels("X", jn);
    names.push("Z".into());
    let c = Arc::new(VCategory::self_enriched(BaseTag::MatQ, names, &objs)?);
    let b = Arc::new(VCategory::discrete(BaseTag::MatQ, labels("b", jn))?);
    let adj = discrete_adjunction(&b)?;
    let action = (0..jn)
        .map(|x| {
            (0..jn)
                .map(|y| {
                    if x == y {
                        name(&BaseMorphism::identity(&objs[x]))
                    } else {
                        Ok(BaseMorphism::zero(b.hom(x, y), c.hom(x, y))?)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let f = VFunctor::new(b.clone(), c.clone(), (0..jn).collect(), action)?;
    let z = VFunctor::point(c.clone(), jn)?;
    let mut offset = 0;
    let (mut inj, mut proj) = (Vec::new(), Vec::new());
    for &d in dims {
        let mut m = Matrix::zeros(total, d);
        for k in 0..d {
            m.set(offset + k, k, Q::one());
        }
        inj.push(BaseMorphism::from_matrix(BaseObject::MatQ(d), objs[jn].clone(), m.clone())?);
        proj.push(BaseMorphism::from_matrix(objs[jn].clone(), BaseObject::MatQ(d), m.transpose())?);
        offset += d;
    }
    let a = cocone_from_names(&adj, &f, &z, &inj)?;
    let bm = cone_from_names(&adj, &f, &z, &proj)?;
    let perturbation = match dims.first() {
        Some(&d) if d > 0 => {
            let mut m = proj[0].matrix().expect("matq").clone();
            m.set(0, 0, q(2));
            let p = BaseMorphism::from_matrix(objs[jn].clone(), BaseObject::MatQ(d), m)?;
            Some(("first projection's leading entry doubled".to_string(), Tweak::Cone(0, name(&p)?)))
        }
        _ => None,
    };
    check_fixture(Fixture {
        name: "biproduct".into(),
        tag: BaseTag::MatQ,
        adj,
        c,
        f,
        z,
        expected_a: a,
        expected_b: bm,
        expected_pass: true,
        note: "Injections i_j and projections p_j with p_j i_k = delta_jk and the sum of i_j p_j the identity.".into(),
        perturbation,
    })
}

/// A cocone out of a discrete weight from one leg per object.
fn cocone_from_names(adj: &AdjunctionData, f: &VFunctor, z: &VFunctor, legs: &[BaseMorphism]) -> Result<ProfMap> {
    let fz = Arc::new(hom_profunctor(f, z)?);
    let i = base::unit_obj(f.cod().tag());
    let comps = legs
        .iter()
        .enumerate()
        .map(|(j, m)| leg_map(m, &i, fz.comp(j, 0)))
        .collect::<Result<Vec<_>>>()?;
    ProfMap::new(adj.phi.clone(), fz, comps)
}

fn cone_from_names(adj: &AdjunctionData, f: &VFunctor, z: &VFunctor, legs: &[BaseMorphism]) -> Result<ProfMap> {
    let zf = Arc::new(hom_profunctor(z, f)?);
    let i = base::unit_obj(f.cod().tag());
    let comps = legs
        .iter()
        .enumerate()
        .map(|(j, m)| leg_map(m, &i, zf.comp(0, j)))
        .collect::<Result<Vec<_>>>()?;
    ProfMap::new(adj.psi.clone(), zf, comps)
}

/// `I -> hom` naming `m`; for concrete categories the hom is an arrow list
/// and `m` is already such a map.
fn leg_map(m: &BaseMorphism, i: &BaseObject, hom: &BaseObject) -> Result<BaseMorphism> {
    if m.dom() == i && m.cod() == hom {
        return Ok(m.clone());
    }
    let named = name(m)?;
    if named.cod() != hom {
        return shape("leg does not fit its hom object");
    }
    Ok(named)
}

/// `J`-fold coproducts of sup-lattices: the product lattice with its
/// injections and projections, in the concrete category they generate.
pub fn suplat_coproduct(lattices: &[Lattice]) -> Result<Fixture> {
    let jn = lattices.len();
    let factors: Vec<Arc<Lattice>> = lattices.iter().cloned().map(Arc::new).collect();
    let prod = Lattice::product(&factors);
    let mut carriers: Vec<BaseObject> = factors.iter().map(|l| BaseObject::SupLat(l.clone())).collect();
    carriers.push(BaseObject::suplat(prod.clone()));
    let zi = jn;
    let mut gens = Vec::new();
    let (mut inj, mut proj) = (Vec::new(), Vec::new());
    for (j, l) in factors.iter().enumerate() {
        let i_t: Vec<usize> = (0..l.size())
            .map(|x| {
                let mut t = vec![0; jn];
                t[j] = x;
                Lattice::tuple_index(&factors, &t)
            })
            .collect();
        let p_t: Vec<usize> = (0..prod.size()).map(|z| Lattice::tuple_of(&factors, z)[j]).collect();
        gens.push((j, zi, i_t.clone()));
        gens.push((zi, j, p_t.clone()));
        inj.push(i_t);
        proj.push(p_t);
    }
    let mut names = labels("X", jn);
    names.push("Z".into());
    let ambient = Concrete::generate(BaseTag::SupLat, names, carriers, &gens, 1 << 10)?;
    let c = Arc::new(ambient.category()?);
    let b = Arc::new(VCategory::discrete(BaseTag::SupLat, labels("b", jn))?);
    let adj = discrete_adjunction(&b)?;
    let action = (0..jn)
        .map(|x| {
            (0..jn)
                .map(|y| {
                    if x == y {
                        let id: Vec<usize> = (0..factors[x].size()).collect();
                        point_map(b.hom(x, x), c.hom(x, x), arrow(&ambient, x, x, &id)?)
                    } else {
                        Ok(BaseMorphism::zero(b.hom(x, y), c.hom(x, y))?)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let f = VFunctor::new(b.clone(), c.clone(), (0..jn).collect(), action)?;
    let z = VFunctor::point(c.clone(), zi)?;
    let i = base::unit_obj(BaseTag::SupLat);
    let a_legs = (0..jn)
        .map(|j| point_map(&i, c.hom(j, zi), arrow(&ambient, j, zi, &inj[j])?))
        .collect::<Result<Vec<_>>>()?;
    let b_legs = (0..jn)
        .map(|j| point_map(&i, c.hom(zi, j), arrow(&ambient, zi, j, &proj[j])?))
        .collect::<Result<Vec<_>>>()?;
    let a = cocone_from_names(&adj, &f, &z, &a_legs)?;
    let bm = cone_from_names(&adj, &f, &z, &b_legs)?;
    let perturbation = (jn > 0).then(|| {
        let zero = point_map(&i, c.hom(zi, 0), 0).expect("zero leg");
        ("first projection shrunk to zero".to_string(), Tweak::Cone(0, zero))
    });
    check_fixture(Fixture {
        name: "suplat-coproduct".into(),
        tag: BaseTag::SupLat,
        adj,
        c,
        f,
        z,
        expected_a: a,
        expected_b: bm,
        expected_pass: true,
        note: "Product lattice with p_j i_k = delta_jk and the join of i_j p_j the identity; the ambient category \
               is generated by the injections and projections."
            .into(),
        perturbation,
    })
}

/// `Z/2` acting on `Q^2` by the swap; elements `[1, g]`.
pub fn cyclic2() -> (Vec<Vec<usize>>, Vec<Matrix>) {
    let mult = vec![vec![0, 1], vec![1, 0]];
    let rep = vec![Matrix::identity(2), Matrix::from_i64(&[&[0, 1], &[1, 0]])];
    (mult, rep)
}

/// `S_3` acting on `Q^3` by permutation matrices; `mult[f][g]` is "f then g".
pub fn symmetric3() -> (Vec<Vec<usize>>, Vec<Matrix>) {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let matrix = |s: &[usize; 3]| {
        let mut m = Matrix::zeros(3, 3);
        for (k, &v) in s.iter().enumerate() {
            m.set(v, k, Q::one());
        }
        m
    };
    let mult = perms
        .iter()
        .map(|f| {
            perms
                .iter()
                .map(|g| {
                    let gf = [g[f[0]], g[f[1]], g[f[2]]];
                    perms.iter().position(|p| *p == gf).expect("closed")
                })
                .collect()
        })
        .collect();
    (mult, perms.iter().map(matrix).collect())
}

/// `(1/|G|) Σ_g ρ(g)`.
pub fn averaging_matrix(rep: &[Matrix]) -> Matrix {
    let d = rep.first().map_or(0, Matrix::rows);
    let sum = rep.iter().fold(Matrix::zeros(d, d), |acc, m| acc.add(m));
    sum.scale(&q_frac(1, rep.len() as i64))
}

/// The group algebra `QG` as a one-object category, composing "f then g"
/// as `mult[f][g]`.
pub fn group_algebra(mult: &[Vec<usize>]) -> Result<(VCategory, usize)> {
    let n = mult.len();
    if n == 0 || mult.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(Error::Invalid("group table must be square and closed".into()));
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|g| mult[e][g] == g && mult[g][e] == g))
        .ok_or_else(|| Error::Invalid("group table has no neutral element".into()))?;
    for f in 0..n {
        if !(0..n).any(|g| mult[f][g] == e) {
            return Err(Error::Invalid(format!("element {f} has no inverse")));
        }
        for g in 0..n {
            for h in 0..n {
                if mult[mult[f][g]][h] != mult[f][mult[g][h]] {
                    return Err(Error::Invalid("group table is not associative".into()));
                }
            }
        }
    }
    let qn = BaseObject::MatQ(n);
    let mut mu = Matrix::zeros(n, n * n);
    for f in 0..n {
        for g in 0..n {
            mu.set(mult[f][g], f * n + g, Q::one());
        }
    }
    let mut unit = Matrix::zeros(n, 1);
    unit.set(e, 0, Q::one());
    let cat = VCategory::new(
        BaseTag::MatQ,
        vec!["*".into()],
        vec![vec![qn.clone()]],
        vec![BaseMorphism::from_matrix(BaseObject::MatQ(1), qn.clone(), unit)?],
        vec![vec![vec![BaseMorphism::from_matrix(BaseObject::MatQ(n * n), qn, mu)?]]],
    )?;
    Ok((cat, e))
}

/// Averaging over a finite group: the trivial module `Q` is absolute, with
/// counit the element `(1/|G|) Σ g`.
pub fn burnside(mult: &[Vec<usize>], rep: &[Matrix]) -> Result<Fixture> {
    burnside_weighted(mult, rep, &q_frac(1, mult.len() as i64))
}

/// As [`burnside`], with `w Σ g` as the counit element.
pub fn burnside_weighted(mult: &[Vec<usize>], rep: &[Matrix], w: &Q) -> Result<Fixture> {
    let n = mult.len();
    let (g_cat, e) = group_algebra(mult)?;
    let g_cat = Arc::new(g_cat);
    if rep.len() != n {
        return Err(Error::Invalid("one matrix per group element".into()));
    }
    let d = rep[0].rows();
    if rep.iter().any(|m| m.rows() != d || m.cols() != d) || rep[e] != Matrix::identity(d) {
        return Err(Error::Invalid("representation matrices must be square, with the neutral element acting as 1".into()));
    }
    for f in 0..n {
        for g in 0..n {
            if rep[mult[f][g]] != rep[g].mul(&rep[f]) {
                return Err(Error::Invalid(format!("representation is not a homomorphism at ({f}, {g})")));
            }
        }
    }
    let avg = averaging_matrix(rep);
    let (r, pivots) = avg.rref();
    let k = pivots.len();
    let p = Matrix::from_rows(k, d, r.entries()[..k * d].to_vec());
    let mut i_m = Matrix::zeros(d, k);
    for (col, &pc) in pivots.iter().enumerate() {
        for row in 0..d {
            i_m.set(row, col, avg.get(row, pc).clone());
        }
    }
    let (v, zo) = (BaseObject::MatQ(d), BaseObject::MatQ(k));
    let c = Arc::new(VCategory::self_enriched(BaseTag::MatQ, vec!["V".into(), "Z".into()], &[v.clone(), zo.clone()])?);
    let names = rep
        .iter()
        .map(|m| Ok(name(&BaseMorphism::from_matrix(v.clone(), v.clone(), m.clone())?)?.matrix().expect("matq").clone()))
        .collect::<Result<Vec<_>>>()?;
    let action = Matrix::hcat(&names, d * d);
    let f = VFunctor::new(
        g_cat.clone(),
        c.clone(),
        vec![0],
        vec![vec![BaseMorphism::from_matrix(g_cat.hom(0, 0).clone(), c.hom(0, 0).clone(), action)?]],
    )?;
    let z = VFunctor::point(c.clone(), 1)?;

    let unit = Arc::new(VCategory::unit_category(BaseTag::MatQ));
    let one = BaseObject::MatQ(1);
    let aug = BaseMorphism::from_matrix(BaseObject::MatQ(n), one.clone(), Matrix::from_rows(1, n, vec![Q::one(); n]))?;
    let id1 = BaseMorphism::identity(&one);
    let phi = Arc::new(Profunctor::from_fn(unit.clone(), g_cat.clone(), |_, _| Ok(one.clone()), |_, _, _| Ok(aug.clone()), |_, _, _| Ok(id1.clone()))?);
    let psi = Arc::new(Profunctor::from_fn(g_cat.clone(), unit.clone(), |_, _| Ok(one.clone()), |_, _, _| Ok(id1.clone()), |_, _, _| Ok(aug.clone()))?);
    let psi_phi = tensor_over(&psi, &phi)?;
    let phi_psi = tensor_over(&phi, &psi)?;
    let eta = base::left_unitor_inv(&one)?.then(&psi_phi.inject(0, 0, 0))?;
    let elem = BaseMorphism::from_matrix(one.clone(), BaseObject::MatQ(n), Matrix::from_rows(n, 1, vec![w.clone(); n]))?;
    let eps = phi_psi.descend(0, 0, g_cat.hom(0, 0), |_| Ok(base::left_unitor(&one)?.then(&elem)?))?;
    let adj = AdjunctionData::new(phi, psi, vec![eta], vec![eps])?;
    let p_m = BaseMorphism::from_matrix(v.clone(), zo.clone(), p)?;
    let i_mm = BaseMorphism::from_matrix(zo.clone(), v.clone(), i_m.clone())?;
    let a = cocone_from_names(&adj, &f, &z, &[p_m])?;
    let bm = cone_from_names(&adj, &f, &z, &[i_mm])?;
    let mut bumped = i_m;
    if d > 0 && k > 0 {
        let x = bumped.get(0, 0) + Q::one();
        bumped.set(0, 0, x);
    }
    let bumped = BaseMorphism::from_matrix(zo, v, bumped)?;
    let group = match n {
        2 => "c2".to_string(),
        6 => "s3".to_string(),
        _ => format!("g{n}"),
    };
    check_fixture(Fixture {
        name: format!("burnside-{group}"),
        tag: BaseTag::MatQ,
        adj,
        c,
        f,
        z,
        expected_a: a,
        expected_b: bm,
        expected_pass: true,
        note: "Coinvariant projection p and invariant inclusion i with p i = 1 and i p the averaging matrix.".into(),
        perturbation: (d > 0 && k > 0).then(|| ("leading entry of the inclusion raised by 1".to_string(), Tweak::Cone(0, name(&bumped).expect("named")))),
    })
}

/// A random colimit problem over finite sets with every hom of at most
/// three elements: a random concrete ambient category, full subcategories
/// as diagram and apex domains, a random small weight and a random cocone.
pub fn random_finset_instance(rng: &mut impl Rng) -> Result<ColimitDatum> {
    loop {
        if let Some(d) = try_random_instance(rng)? {
            return Ok(d);
        }
    }
}

fn try_random_instance(rng: &mut impl Rng) -> Result<Option<ColimitDatum>> {
    let n = rng.gen_range(1..=3);
    let carriers: Vec<BaseObject> = (0..n).map(|_| BaseObject::FinSet(rng.gen_range(1..=3))).collect();
    let gens: Vec<(usize, usize, Vec<usize>)> = (0..rng.gen_range(0..=4))
        .map(|_| {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let t = (0..carriers[x].size()).map(|_| rng.gen_range(0..carriers[y].size())).collect();
            (x, y, t)
        })
        .collect();
    let ambient = match Concrete::generate(BaseTag::FinSet, labels("c", n), carriers, &gens, 3) {
        Ok(c) => c,
        Err(Error::Base(BaseError::TooLarge(_))) => return Ok(None),
        Err(e) => return Err(e),
    };
    let c = Arc::new(ambient.category()?);
    let mut objs: Vec<usize> = (0..n).collect();
    let pick = |rng: &mut dyn rand::RngCore, objs: &mut Vec<usize>| {
        objs.shuffle(rng);
        let k = rng.gen_range(1..=objs.len().min(2));
        let mut s = objs[..k].to_vec();
        s.sort_unstable();
        s
    };
    let fb = pick(rng, &mut objs);
    let za = pick(rng, &mut objs);
    let f = VFunctor::inclusion(c.clone(), &fb)?;
    let z = VFunctor::inclusion(c.clone(), &za)?;
    let mut weights = Vec::new();
    finset_profunctors(z.dom(), f.dom(), 2, |p| {
        weights.push(p);
        Ok(weights.len() < 4096)
    })?;
    let phi = Arc::new(weights.swap_remove(rng.gen_range(0..weights.len())));
    let fz = Arc::new(hom_profunctor(&f, &z)?);
    let cocones = match profunctor_maps(&phi, &fz, 1 << 12) {
        Ok(c) => c,
        Err(Error::Base(BaseError::TooLarge(_))) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some(a) = cocones.choose(rng) else { return Ok(None) };
    Ok(Some(ColimitDatum { phi, f, z, a: a.clone() }))
}

#[cfg(test)]
mod tests;
