//! Categories, functors, profunctors and profunctor maps enriched in a base.
//!
//! Orientation: `C(x, y)` is the object of arrows `x -> y`, and composition
//! `μ : C(c, b) ⊗ C(b, a) -> C(c, a)` takes `(f, g)` to "`f` then `g`". A
//! profunctor `M : A ⇸ B` has components `M(b, a)`, acted on by `B` from the
//! left (`B(b', b) ⊗ M(b, a) -> M(b', a)`) and by `A` from the right
//! (`M(b, a) ⊗ A(a, a') -> M(b, a')`).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::base::{self, suplat::Lattice, BaseMorphism, BaseObject, BaseTag};
use crate::error::{shape, Error, Result};

/// Outcome of an axiom or equation check: every violated instance, in a fixed
/// order. Empty means the property holds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub failures: Vec<String>,
}

impl Report {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    /// Records a failure unless `lhs == rhs`; an error while building either
    /// side counts as a failure too.
    pub fn expect_eq(&mut self, lhs: Result<BaseMorphism>, rhs: Result<BaseMorphism>, what: impl FnOnce() -> String) {
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(_), Ok(_)) => self.fail(what()),
            (Err(e), _) | (_, Err(e)) => self.fail(format!("{}: {e}", what())),
        }
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        self.failures.extend(other.failures.into_iter().map(|f| format!("{prefix}: {f}")));
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return writeln!(f, "holds");
        }
        for line in &self.failures {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

pub(crate) fn same<T: PartialEq>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn expect_shape(m: &BaseMorphism, dom: &BaseObject, cod: &BaseObject, what: impl FnOnce() -> String) -> Result<()> {
    if m.dom() != dom || m.cod() != cod {
        return shape(format!("{}: expected {dom} -> {cod}, found {} -> {}", what(), m.dom(), m.cod()));
    }
    Ok(())
}

fn tensor1(f: &BaseMorphism, obj: &BaseObject) -> Result<BaseMorphism> {
    Ok(base::tensor_mor(f, &BaseMorphism::identity(obj))?)
}

fn tensor2(obj: &BaseObject, f: &BaseMorphism) -> Result<BaseMorphism> {
    Ok(base::tensor_mor(&BaseMorphism::identity(obj), f)?)
}

/// The unique map out of an initial object.
fn from_initial(dom: &BaseObject, cod: &BaseObject) -> Result<BaseMorphism> {
    match dom {
        BaseObject::FinSet(0) => Ok(BaseMorphism::from_table(dom.clone(), cod.clone(), vec![])?),
        _ => Ok(BaseMorphism::zero(dom, cod)?),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VCategory {
    tag: BaseTag,
    labels: Vec<String>,
    hom: Vec<BaseObject>,
    unit: Vec<BaseMorphism>,
    comp: Vec<BaseMorphism>,
}

impl VCategory {
    /// Builds a category from dense tables `hom[x][y]`, `unit[x]` and
    /// `comp[c][b][a]`, checking every entry's shape (not the axioms).
    pub fn new(
        tag: BaseTag,
        labels: Vec<String>,
        hom: Vec<Vec<BaseObject>>,
        unit: Vec<BaseMorphism>,
        comp: Vec<Vec<Vec<BaseMorphism>>>,
    ) -> Result<Self> {
        let n = labels.len();
        if hom.len() != n || hom.iter().any(|r| r.len() != n) || unit.len() != n {
            return shape("category tables must be indexed by the object list");
        }
        if comp.len() != n || comp.iter().any(|r| r.len() != n || r.iter().any(|s| s.len() != n)) {
            return shape("composition table must be indexed by object triples");
        }
        let cat = VCategory {
            tag,
            labels,
            hom: hom.into_iter().flatten().collect(),
            unit,
            comp: comp.into_iter().flatten().flatten().collect(),
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        let n = self.size();
        let i = base::unit_obj(self.tag);
        for h in &self.hom {
            if h.tag() != self.tag {
                return Err(base::BaseError::TagMismatch(self.tag, h.tag()).into());
            }
        }
        for x in 0..n {
            expect_shape(&self.unit[x], &i, self.hom(x, x), || format!("unit at {}", self.labels[x]))?;
        }
        for c in 0..n {
            for b in 0..n {
                for a in 0..n {
                    let dom = base::tensor_obj(self.hom(c, b), self.hom(b, a))?;
                    expect_shape(self.comp(c, b, a), &dom, self.hom(c, a), || {
                        format!("composition at ({}, {}, {})", self.labels[c], self.labels[b], self.labels[a])
                    })?;
                }
            }
        }
        Ok(())
    }

    /// One object `*` with hom the unit.
    pub fn unit_category(tag: BaseTag) -> Self {
        let i = base::unit_obj(tag);
        VCategory {
            tag,
            labels: vec!["*".into()],
            hom: vec![i.clone()],
            unit: vec![BaseMorphism::identity(&i)],
            comp: vec![base::left_unitor(&i).expect("unit is self-tensorable")],
        }
    }

    /// The category with no objects.
    pub fn empty(tag: BaseTag) -> Self {
        VCategory { tag, labels: vec![], hom: vec![], unit: vec![], comp: vec![] }
    }

    /// Objects with only identity arrows: `C(x, x) = I` and `C(x, y)` initial.
    pub fn discrete(tag: BaseTag, labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        let i = base::unit_obj(tag);
        let (zero, _) = base::coproduct(tag, &[])?;
        let hom_of = |x: usize, y: usize| if x == y { i.clone() } else { zero.clone() };
        let mut comp = Vec::with_capacity(n * n * n);
        for c in 0..n {
            for b in 0..n {
                for a in 0..n {
                    comp.push(if c == b && b == a {
                        base::left_unitor(&i)?
                    } else {
                        let dom = base::tensor_obj(&hom_of(c, b), &hom_of(b, a))?;
                        from_initial(&dom, &hom_of(c, a))?
                    });
                }
            }
        }
        let hom = (0..n * n).map(|k| hom_of(k / n, k % n)).collect();
        Ok(VCategory { tag, labels, hom, unit: vec![BaseMorphism::identity(&i); n], comp })
    }

    /// A one-object `finset` category from a monoid table: `mult[f][g]` is the
    /// element "`f` then `g`", with `unit` the neutral element.
    pub fn monoid(mult: &[Vec<usize>], unit: usize) -> Result<Self> {
        let n = mult.len();
        let carrier = BaseObject::FinSet(n);
        if mult.iter().any(|r| r.len() != n) || unit >= n {
            return shape("monoid table must be square with the unit in range");
        }
        let table = mult.iter().flatten().copied().collect();
        let mu = BaseMorphism::from_table(BaseObject::FinSet(n * n), carrier.clone(), table)?;
        let iota = BaseMorphism::from_table(BaseObject::FinSet(1), carrier.clone(), vec![unit])?;
        Ok(VCategory { tag: BaseTag::FinSet, labels: vec!["*".into()], hom: vec![carrier], unit: vec![iota], comp: vec![mu] })
    }

    /// The base acting on itself, restricted to the given objects:
    /// `C(x, y)` is the internal hom, composition is evaluation twice.
    pub fn self_enriched(tag: BaseTag, labels: Vec<String>, objs: &[BaseObject]) -> Result<Self> {
        let n = labels.len();
        if objs.len() != n {
            return shape("one base object per label");
        }
        let i = base::unit_obj(tag);
        let mut hom = Vec::with_capacity(n * n);
        for x in objs {
            for y in objs {
                hom.push(base::hom_left(x, y)?);
            }
        }
        let unit = objs
            .iter()
            .map(|x| Ok(base::curry_left(x, &i, &base::right_unitor(x)?)?))
            .collect::<Result<Vec<_>>>()?;
        let mut comp = Vec::with_capacity(n * n * n);
        for c in 0..n {
            for b in 0..n {
                for a in 0..n {
                    let (hcb, hba) = (&hom[c * n + b], &hom[b * n + a]);
                    let ev_cb = base::eval_left(&objs[c], &objs[b])?;
                    let ev_ba = base::eval_left(&objs[b], &objs[a])?;
                    let body = base::compose_chain(&[
                        &base::associator_inv(&objs[c], hcb, hba)?,
                        &tensor1(&ev_cb, hba)?,
                        &ev_ba,
                    ])?;
                    comp.push(base::curry_left(&objs[c], &base::tensor_obj(hcb, hba)?, &body)?);
                }
            }
        }
        Ok(VCategory { tag, labels, hom, unit, comp })
    }

    pub fn full_subcategory(&self, objs: &[usize]) -> Result<VCategory> {
        if objs.iter().any(|&x| x >= self.size()) {
            return shape("subcategory object out of range");
        }
        let hom = objs.iter().map(|&x| objs.iter().map(|&y| self.hom(x, y).clone()).collect()).collect();
        let unit = objs.iter().map(|&x| self.unit(x).clone()).collect();
        let comp = objs
            .iter()
            .map(|&c| objs.iter().map(|&b| objs.iter().map(|&a| self.comp(c, b, a).clone()).collect()).collect())
            .collect();
        let labels = objs.iter().map(|&x| self.labels[x].clone()).collect();
        VCategory::new(self.tag, labels, hom, unit, comp)
    }

    pub fn tag(&self) -> BaseTag {
        self.tag
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn hom(&self, x: usize, y: usize) -> &BaseObject {
        &self.hom[x * self.size() + y]
    }

    pub fn unit(&self, x: usize) -> &BaseMorphism {
        &self.unit[x]
    }

    pub fn comp(&self, c: usize, b: usize, a: usize) -> &BaseMorphism {
        let n = self.size();
        &self.comp[(c * n + b) * n + a]
    }

    /// Unitality and associativity of composition.
    pub fn check(&self) -> Report {
        let n = self.size();
        let l = |x: usize| self.label(x).to_string();
        let mut report = Report::default();
        for c in 0..n {
            for a in 0..n {
                let h = self.hom(c, a);
                report.expect_eq(
                    tensor1(self.unit(c), h).and_then(|m| Ok(m.then(self.comp(c, c, a))?)),
                    Ok(base::left_unitor(h).unwrap()),
                    || format!("left unit law at ({}, {})", l(c), l(a)),
                );
                report.expect_eq(
                    tensor2(h, self.unit(a)).and_then(|m| Ok(m.then(self.comp(c, a, a))?)),
                    Ok(base::right_unitor(h).unwrap()),
                    || format!("right unit law at ({}, {})", l(c), l(a)),
                );
            }
        }
        for d in 0..n {
            for c in 0..n {
                for b in 0..n {
                    for a in 0..n {
                        let (h1, h2, h3) = (self.hom(d, c), self.hom(c, b), self.hom(b, a));
                        let lhs = tensor1(self.comp(d, c, b), h3).and_then(|m| Ok(m.then(self.comp(d, b, a))?));
                        let rhs = (|| {
                            let s = base::associator(h1, h2, h3)?;
                            let t = tensor2(h1, self.comp(c, b, a))?;
                            Ok(base::compose_chain(&[&s, &t, self.comp(d, c, a)])?)
                        })();
                        report.expect_eq(lhs, rhs, || format!("associativity at ({}, {}, {}, {})", l(d), l(c), l(b), l(a)));
                    }
                }
            }
        }
        report
    }

    /// Opposite category: `C^op(x, y) = C(y, x)`, composition through the symmetry.
    pub fn op(&self) -> Result<VCategory> {
        let n = self.size();
        let mut hom = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                hom.push(self.hom(y, x).clone());
            }
        }
        let mut comp = Vec::with_capacity(n * n * n);
        for c in 0..n {
            for b in 0..n {
                for a in 0..n {
                    let s = base::symmetry(self.hom(b, c), self.hom(a, b))?;
                    comp.push(s.then(self.comp(a, b, c))?);
                }
            }
        }
        Ok(VCategory { tag: self.tag, labels: self.labels.clone(), hom, unit: self.unit.clone(), comp })
    }
}

/// A concrete category: objects are base objects, arrows are listed
/// morphisms closed under composition. Homs list arrows in lexicographic order
/// of tables; for `finset_ptd` and `suplat` each hom contains the zero map
/// (so it sits at index 0), and for `suplat` each hom is closed under
/// pointwise joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concrete {
    tag: BaseTag,
    labels: Vec<String>,
    carriers: Vec<BaseObject>,
    maps: Vec<Vec<Vec<usize>>>,
}

impl Concrete {
    pub fn new(tag: BaseTag, labels: Vec<String>, carriers: Vec<BaseObject>, maps: Vec<Vec<Vec<Vec<usize>>>>) -> Result<Self> {
        let n = labels.len();
        if carriers.len() != n || maps.len() != n || maps.iter().any(|r| r.len() != n) {
            return shape("concrete category tables must be indexed by the object list");
        }
        if tag == BaseTag::MatQ {
            return Err(Error::Invalid("concrete categories are table-based".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (x, row) in maps.into_iter().enumerate() {
            for (y, list) in row.into_iter().enumerate() {
                for t in &list {
                    BaseMorphism::from_table(carriers[x].clone(), carriers[y].clone(), t.clone())?;
                }
                let sorted: BTreeSet<Vec<usize>> = list.iter().cloned().collect();
                if sorted.len() != list.len() || !list.iter().eq(sorted.iter()) {
                    return shape(format!("arrows {x} -> {y} must be listed in increasing order without repeats"));
                }
                flat.push(list);
            }
        }
        let c = Concrete { tag, labels, carriers, maps: flat };
        c.validate()?;
        Ok(c)
    }

    /// The least concrete category on `carriers` containing the generators
    /// `(x, y, table)`. Fails if some hom would exceed `limit` arrows.
    pub fn generate(
        tag: BaseTag,
        labels: Vec<String>,
        carriers: Vec<BaseObject>,
        generators: &[(usize, usize, Vec<usize>)],
        limit: usize,
    ) -> Result<Self> {
        let n = carriers.len();
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); n * n];
        for (x, c) in carriers.iter().enumerate() {
            sets[x * n + x].insert((0..c.size()).collect());
        }
        if tag != BaseTag::FinSet {
            for x in 0..n {
                for y in 0..n {
                    sets[x * n + y].insert(vec![0; carriers[x].size()]);
                }
            }
        }
        for (x, y, t) in generators {
            if *x >= n || *y >= n {
                return shape("generator object out of range");
            }
            BaseMorphism::from_table(carriers[*x].clone(), carriers[*y].clone(), t.clone())?;
            sets[x * n + y].insert(t.clone());
        }
        loop {
            let mut added = false;
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let new: Vec<Vec<usize>> = sets[x * n + y]
                            .iter()
                            .flat_map(|f| sets[y * n + z].iter().map(move |g| base::finset::compose(g, f)))
                            .filter(|h| !sets[x * n + z].contains(h))
                            .collect();
                        added |= !new.is_empty();
                        sets[x * n + z].extend(new);
                    }
                }
            }
            if tag == BaseTag::SupLat {
                for x in 0..n {
                    for y in 0..n {
                        let l = carriers[y].lattice().expect("suplat carrier");
                        let list: Vec<Vec<usize>> = sets[x * n + y].iter().cloned().collect();
                        for f in &list {
                            for g in &list {
                                let j: Vec<usize> = f.iter().zip(g).map(|(&p, &q)| l.join(p, q)).collect();
                                added |= sets[x * n + y].insert(j);
                            }
                        }
                    }
                }
            }
            if let Some(big) = sets.iter().position(|s| s.len() > limit) {
                return Err(base::BaseError::TooLarge(format!(
                    "generated hom {} -> {} exceeds {limit} arrows",
                    labels.get(big / n).map_or("?", |s| s),
                    labels.get(big % n).map_or("?", |s| s)
                ))
                .into());
            }
            if !added {
                break;
            }
        }
        let maps = (0..n)
            .map(|x| (0..n).map(|y| sets[x * n + y].iter().cloned().collect()).collect())
            .collect();
        Concrete::new(tag, labels, carriers, maps)
    }

    fn validate(&self) -> Result<()> {
        let n = self.size();
        for x in 0..n {
            if self.index_of(x, x, &(0..self.carriers[x].size()).collect::<Vec<_>>()).is_none() {
                return Err(Error::Invalid(format!("missing identity on {}", self.labels[x])));
            }
            for y in 0..n {
                if self.tag != BaseTag::FinSet && self.maps(x, y).first() != Some(&vec![0; self.carriers[x].size()]) {
                    return Err(Error::Invalid(format!("missing zero map {} -> {}", self.labels[x], self.labels[y])));
                }
                for z in 0..n {
                    for f in self.maps(x, y) {
                        for g in self.maps(y, z) {
                            if self.index_of(x, z, &base::finset::compose(g, f)).is_none() {
                                return Err(Error::Invalid(format!(
                                    "arrows are not closed under composition at ({}, {}, {})",
                                    self.labels[x], self.labels[y], self.labels[z]
                                )));
                            }
                        }
                    }
                }
                if let Some(l) = self.carriers[y].lattice() {
                    for f in self.maps(x, y) {
                        for g in self.maps(x, y) {
                            let j: Vec<usize> = f.iter().zip(g).map(|(&p, &q)| l.join(p, q)).collect();
                            if self.index_of(x, y, &j).is_none() {
                                return Err(Error::Invalid(format!(
                                    "arrows {} -> {} are not closed under joins",
                                    self.labels[x], self.labels[y]
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tag(&self) -> BaseTag {
        self.tag
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn carrier(&self, x: usize) -> &BaseObject {
        &self.carriers[x]
    }

    pub fn maps(&self, x: usize, y: usize) -> &[Vec<usize>] {
        &self.maps[x * self.size() + y]
    }

    pub fn index_of(&self, x: usize, y: usize, table: &[usize]) -> Option<usize> {
        self.maps(x, y).binary_search_by(|m| m.as_slice().cmp(table)).ok()
    }

    fn hom_object(&self, x: usize, y: usize) -> Result<BaseObject> {
        let maps = self.maps(x, y);
        Ok(match self.tag {
            BaseTag::FinSet => BaseObject::FinSet(maps.len()),
            BaseTag::Pointed => BaseObject::pointed(maps.len())?,
            BaseTag::SupLat => {
                let l = self.carriers[y].lattice().expect("suplat carrier");
                let rows = maps
                    .iter()
                    .map(|f| maps.iter().map(|g| f.iter().zip(g).all(|(&p, &q)| l.leq(p, q))).collect())
                    .collect();
                BaseObject::suplat(Lattice::new(rows)?)
            }
            BaseTag::MatQ => unreachable!(),
        })
    }

    /// The enriched category whose hom objects are the arrow lists.
    pub fn category(&self) -> Result<VCategory> {
        let n = self.size();
        let mut hom = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                hom.push(self.hom_object(x, y)?);
            }
        }
        let i = base::unit_obj(self.tag);
        let unit = (0..n)
            .map(|x| {
                let id = self.index_of(x, x, &(0..self.carriers[x].size()).collect::<Vec<_>>()).unwrap();
                let t = if self.tag == BaseTag::FinSet { vec![id] } else { vec![0, id] };
                Ok(BaseMorphism::from_table(i.clone(), hom[x * n + x].clone(), t)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut comp = Vec::with_capacity(n * n * n);
        for c in 0..n {
            for b in 0..n {
                for a in 0..n {
                    let (fs, gs) = (self.maps(c, b), self.maps(b, a));
                    let idx = |i: usize, j: usize| self.index_of(c, a, &base::finset::compose(&gs[j], &fs[i])).unwrap();
                    let (hcb, hba, hca) = (&hom[c * n + b], &hom[b * n + a], &hom[c * n + a]);
                    let dom = base::tensor_obj(hcb, hba)?;
                    let table = match self.tag {
                        BaseTag::FinSet => (0..fs.len() * gs.len()).map(|k| idx(k / gs.len(), k % gs.len())).collect(),
                        BaseTag::Pointed => (0..dom.size())
                            .map(|k| base::pointed::unpair(k, gs.len()).map_or(0, |(i, j)| idx(i, j)))
                            .collect(),
                        BaseTag::SupLat => {
                            let t = base::suplat::tensor(hcb.lattice().unwrap(), hba.lattice().unwrap())?;
                            t.extend(hca.lattice().unwrap(), idx)
                        }
                        BaseTag::MatQ => unreachable!(),
                    };
                    comp.push(BaseMorphism::from_table(dom, hca.clone(), table)?);
                }
            }
        }
        Ok(VCategory { tag: self.tag, labels: self.labels.clone(), hom, unit, comp })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VFunctor {
    dom: Arc<VCategory>,
    cod: Arc<VCategory>,
    obj: Vec<usize>,
    action: Vec<BaseMorphism>,
}

impl VFunctor {
    /// `action[x][y] : dom(x, y) -> cod(obj[x], obj[y])`, shapes checked.
    pub fn new(dom: Arc<VCategory>, cod: Arc<VCategory>, obj: Vec<usize>, action: Vec<Vec<BaseMorphism>>) -> Result<Self> {
        let n = dom.size();
        if dom.tag() != cod.tag() {
            return Err(base::BaseError::TagMismatch(dom.tag(), cod.tag()).into());
        }
        if obj.len() != n || obj.iter().any(|&o| o >= cod.size()) {
            return shape("object map must send every object into the codomain");
        }
        if action.len() != n || action.iter().any(|r| r.len() != n) {
            return shape("functor action must be indexed by object pairs");
        }
        let action: Vec<BaseMorphism> = action.into_iter().flatten().collect();
        for x in 0..n {
            for y in 0..n {
                expect_shape(&action[x * n + y], dom.hom(x, y), cod.hom(obj[x], obj[y]), || {
                    format!("functor action at ({}, {})", dom.label(x), dom.label(y))
                })?;
            }
        }
        Ok(VFunctor { dom, cod, obj, action })
    }

    /// The functor from the unit category picking out `x`.
    pub fn point(cod: Arc<VCategory>, x: usize) -> Result<Self> {
        if x >= cod.size() {
            return shape("point out of range");
        }
        let unit = Arc::new(VCategory::unit_category(cod.tag()));
        let act = cod.unit(x).clone();
        VFunctor::new(unit, cod, vec![x], vec![vec![act]])
    }

    pub fn identity(cat: Arc<VCategory>) -> Self {
        let n = cat.size();
        let action = (0..n * n).map(|k| BaseMorphism::identity(cat.hom(k / n, k % n))).collect();
        VFunctor { dom: cat.clone(), cod: cat, obj: (0..n).collect(), action }
    }

    pub fn dom(&self) -> &Arc<VCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<VCategory> {
        &self.cod
    }

    pub fn obj(&self, x: usize) -> usize {
        self.obj[x]
    }

    pub fn objects(&self) -> &[usize] {
        &self.obj
    }

    pub fn action(&self, x: usize, y: usize) -> &BaseMorphism {
        &self.action[x * self.dom.size() + y]
    }

    /// Preservation of units and composition.
    pub fn check(&self) -> Report {
        let (d, c) = (&self.dom, &self.cod);
        let n = d.size();
        let l = |x: usize| d.label(x).to_string();
        let mut report = Report::default();
        for x in 0..n {
            report.expect_eq(
                Ok(d.unit(x).then(self.action(x, x)).unwrap()),
                Ok(c.unit(self.obj[x]).clone()),
                || format!("unit preservation at {}", l(x)),
            );
        }
        for z in 0..n {
            for y in 0..n {
                for x in 0..n {
                    let lhs = d.comp(z, y, x).then(self.action(z, x)).map_err(Error::from);
                    let rhs = base::tensor_mor(self.action(z, y), self.action(y, x))
                        .and_then(|m| m.then(c.comp(self.obj[z], self.obj[y], self.obj[x])))
                        .map_err(Error::from);
                    report.expect_eq(lhs, rhs, || format!("composition preservation at ({}, {}, {})", l(z), l(y), l(x)));
                }
            }
        }
        report
    }

    /// The inclusion of the full subcategory on `objs`.
    pub fn inclusion(cod: Arc<VCategory>, objs: &[usize]) -> Result<VFunctor> {
        let dom = Arc::new(cod.full_subcategory(objs)?);
        let action = objs
            .iter()
            .map(|&x| objs.iter().map(|&y| BaseMorphism::identity(cod.hom(x, y))).collect())
            .collect();
        VFunctor::new(dom, cod, objs.to_vec(), action)
    }

    /// The same functor between opposite categories.
    pub fn op(&self, dom_op: Arc<VCategory>, cod_op: Arc<VCategory>) -> Result<VFunctor> {
        let n = self.dom.size();
        let action = (0..n).map(|x| (0..n).map(|y| self.action(y, x).clone()).collect()).collect();
        VFunctor::new(dom_op, cod_op, self.obj.clone(), action)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profunctor {
    source: Arc<VCategory>,
    target: Arc<VCategory>,
    comp: Vec<BaseObject>,
    left: Vec<BaseMorphism>,
    right: Vec<BaseMorphism>,
}

impl Profunctor {
    /// `M : source ⇸ target` from component and action functions; shapes are
    /// checked, axioms are not (see [`Profunctor::check`]).
    pub fn from_fn(
        source: Arc<VCategory>,
        target: Arc<VCategory>,
        mut comp: impl FnMut(usize, usize) -> Result<BaseObject>,
        mut left: impl FnMut(usize, usize, usize) -> Result<BaseMorphism>,
        mut right: impl FnMut(usize, usize, usize) -> Result<BaseMorphism>,
    ) -> Result<Self> {
        if source.tag() != target.tag() {
            return Err(base::BaseError::TagMismatch(source.tag(), target.tag()).into());
        }
        let (na, nb) = (source.size(), target.size());
        let mut comps = Vec::with_capacity(na * nb);
        for b in 0..nb {
            for a in 0..na {
                comps.push(comp(b, a)?);
            }
        }
        let mut lefts = Vec::with_capacity(nb * nb * na);
        for b2 in 0..nb {
            for b in 0..nb {
                for a in 0..na {
                    lefts.push(left(b2, b, a)?);
                }
            }
        }
        let mut rights = Vec::with_capacity(nb * na * na);
        for b in 0..nb {
            for a in 0..na {
                for a2 in 0..na {
                    rights.push(right(b, a, a2)?);
                }
            }
        }
        let m = Profunctor { source, target, comp: comps, left: lefts, right: rights };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let (a_cat, b_cat) = (&self.source, &self.target);
        let (na, nb) = (a_cat.size(), b_cat.size());
        for c in &self.comp {
            if c.tag() != a_cat.tag() {
                return Err(base::BaseError::TagMismatch(a_cat.tag(), c.tag()).into());
            }
        }
        for b2 in 0..nb {
            for b in 0..nb {
                for a in 0..na {
                    let dom = base::tensor_obj(b_cat.hom(b2, b), self.comp(b, a))?;
                    expect_shape(self.left(b2, b, a), &dom, self.comp(b2, a), || {
                        format!("left action at ({}, {}, {})", b_cat.label(b2), b_cat.label(b), a_cat.label(a))
                    })?;
                }
            }
        }
        for b in 0..nb {
            for a in 0..na {
                for a2 in 0..na {
                    let dom = base::tensor_obj(self.comp(b, a), a_cat.hom(a, a2))?;
                    expect_shape(self.right(b, a, a2), &dom, self.comp(b, a2), || {
                        format!("right action at ({}, {}, {})", b_cat.label(b), a_cat.label(a), a_cat.label(a2))
                    })?;
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<VCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VCategory> {
        &self.target
    }

    pub fn tag(&self) -> BaseTag {
        self.source.tag()
    }

    pub fn comp(&self, b: usize, a: usize) -> &BaseObject {
        &self.comp[b * self.source.size() + a]
    }

    pub fn left(&self, b2: usize, b: usize, a: usize) -> &BaseMorphism {
        let (na, nb) = (self.source.size(), self.target.size());
        &self.left[(b2 * nb + b) * na + a]
    }

    pub fn right(&self, b: usize, a: usize, a2: usize) -> &BaseMorphism {
        let na = self.source.size();
        &self.right[(b * na + a) * na + a2]
    }

    fn at(&self, b: usize, a: usize) -> String {
        format!("({}, {})", self.target.label(b), self.source.label(a))
    }

    /// Unitality and associativity of both actions, and their compatibility.
    pub fn check(&self) -> Report {
        let (ac, bc) = (&self.source, &self.target);
        let (na, nb) = (ac.size(), bc.size());
        let mut report = Report::default();
        for b in 0..nb {
            for a in 0..na {
                let m = self.comp(b, a);
                report.expect_eq(
                    tensor1(bc.unit(b), m).and_then(|x| Ok(x.then(self.left(b, b, a))?)),
                    Ok(base::left_unitor(m).unwrap()),
                    || format!("left unit law at {}", self.at(b, a)),
                );
                report.expect_eq(
                    tensor2(m, ac.unit(a)).and_then(|x| Ok(x.then(self.right(b, a, a))?)),
                    Ok(base::right_unitor(m).unwrap()),
                    || format!("right unit law at {}", self.at(b, a)),
                );
            }
        }
        for b3 in 0..nb {
            for b2 in 0..nb {
                for b in 0..nb {
                    for a in 0..na {
                        let (h1, h2, m) = (bc.hom(b3, b2), bc.hom(b2, b), self.comp(b, a));
                        let lhs = tensor1(bc.comp(b3, b2, b), m).and_then(|x| Ok(x.then(self.left(b3, b, a))?));
                        let rhs = (|| {
                            let s = base::associator(h1, h2, m)?;
                            let t = tensor2(h1, self.left(b2, b, a))?;
                            Ok(base::compose_chain(&[&s, &t, self.left(b3, b2, a)])?)
                        })();
                        report.expect_eq(lhs, rhs, || {
                            format!("left associativity at ({}, {}, {}, {})", bc.label(b3), bc.label(b2), bc.label(b), ac.label(a))
                        });
                    }
                }
            }
        }
        for b in 0..nb {
            for a in 0..na {
                for a2 in 0..na {
                    for a3 in 0..na {
                        let (m, h1, h2) = (self.comp(b, a), ac.hom(a, a2), ac.hom(a2, a3));
                        let lhs = tensor1(self.right(b, a, a2), h2).and_then(|x| Ok(x.then(self.right(b, a2, a3))?));
                        let rhs = (|| {
                            let s = base::associator(m, h1, h2)?;
                            let t = tensor2(m, ac.comp(a, a2, a3))?;
                            Ok(base::compose_chain(&[&s, &t, self.right(b, a, a3)])?)
                        })();
                        report.expect_eq(lhs, rhs, || {
                            format!("right associativity at ({}, {}, {}, {})", bc.label(b), ac.label(a), ac.label(a2), ac.label(a3))
                        });
                    }
                }
            }
        }
        for b2 in 0..nb {
            for b in 0..nb {
                for a in 0..na {
                    for a2 in 0..na {
                        let (h, m, k) = (bc.hom(b2, b), self.comp(b, a), ac.hom(a, a2));
                        let lhs = tensor1(self.left(b2, b, a), k).and_then(|x| Ok(x.then(self.right(b2, a, a2))?));
                        let rhs = (|| {
                            let s = base::associator(h, m, k)?;
                            let t = tensor2(h, self.right(b, a, a2))?;
                            Ok(base::compose_chain(&[&s, &t, self.left(b2, b, a2)])?)
                        })();
                        report.expect_eq(lhs, rhs, || {
                            format!("action compatibility at ({}, {}, {}, {})", bc.label(b2), bc.label(b), ac.label(a), ac.label(a2))
                        });
                    }
                }
            }
        }
        report
    }

    /// `M^op : B^op ⇸ A^op` with `M^op(a, b) = M(b, a)`; the given categories
    /// must be the opposites of the source and target.
    pub fn op(&self, source_op: Arc<VCategory>, target_op: Arc<VCategory>) -> Result<Profunctor> {
        Profunctor::from_fn(
            target_op,
            source_op,
            |a, b| Ok(self.comp(b, a).clone()),
            |a2, a, b| Ok(base::symmetry(self.source.hom(a, a2), self.comp(b, a))?.then(self.right(b, a, a2))?),
            |a, b, b2| Ok(base::symmetry(self.comp(b, a), self.target.hom(b2, b))?.then(self.left(b2, b, a))?),
        )
    }
}

/// Composition in `A` acting on both sides of `A(b, a)`.
pub fn identity_profunctor(cat: &Arc<VCategory>) -> Result<Profunctor> {
    Profunctor::from_fn(
        cat.clone(),
        cat.clone(),
        |b, a| Ok(cat.hom(b, a).clone()),
        |b2, b, a| Ok(cat.comp(b2, b, a).clone()),
        |b, a, a2| Ok(cat.comp(b, a, a2).clone()),
    )
}

/// `C(G, F) : dom F ⇸ dom G` with components `C(G b, F a)`.
pub fn hom_profunctor(g: &VFunctor, f: &VFunctor) -> Result<Profunctor> {
    if !same(g.cod(), f.cod()) {
        return shape("functors must share a codomain");
    }
    let c = f.cod().clone();
    Profunctor::from_fn(
        f.dom().clone(),
        g.dom().clone(),
        |b, a| Ok(c.hom(g.obj(b), f.obj(a)).clone()),
        |b2, b, a| {
            let act = tensor1(g.action(b2, b), c.hom(g.obj(b), f.obj(a)))?;
            Ok(act.then(c.comp(g.obj(b2), g.obj(b), f.obj(a)))?)
        },
        |b, a, a2| {
            let act = tensor2(c.hom(g.obj(b), f.obj(a)), f.action(a, a2))?;
            Ok(act.then(c.comp(g.obj(b), f.obj(a), f.obj(a2)))?)
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfMap {
    dom: Arc<Profunctor>,
    cod: Arc<Profunctor>,
    comps: Vec<BaseMorphism>,
}

impl ProfMap {
    pub fn from_fn(dom: Arc<Profunctor>, cod: Arc<Profunctor>, mut comp: impl FnMut(usize, usize) -> Result<BaseMorphism>) -> Result<Self> {
        if !same(dom.source(), cod.source()) || !same(dom.target(), cod.target()) {
            return shape("profunctor map between profunctors of different shapes");
        }
        let (na, nb) = (dom.source().size(), dom.target().size());
        let mut comps = Vec::with_capacity(na * nb);
        for b in 0..nb {
            for a in 0..na {
                let m = comp(b, a)?;
                expect_shape(&m, dom.comp(b, a), cod.comp(b, a), || format!("component at {}", dom.at(b, a)))?;
                comps.push(m);
            }
        }
        Ok(ProfMap { dom, cod, comps })
    }

    pub fn new(dom: Arc<Profunctor>, cod: Arc<Profunctor>, comps: Vec<BaseMorphism>) -> Result<Self> {
        let na = dom.source().size();
        if comps.len() != na * dom.target().size() {
            return shape("one component per object pair");
        }
        ProfMap::from_fn(dom, cod, |b, a| Ok(comps[b * na + a].clone()))
    }

    pub fn identity(m: &Arc<Profunctor>) -> Self {
        let comps = m.comp.iter().map(BaseMorphism::identity).collect();
        ProfMap { dom: m.clone(), cod: m.clone(), comps }
    }

    /// The action of `F` on homs as a map `dom F -> C(F, F)`.
    pub fn functor_action(f: &VFunctor) -> Result<Self> {
        let id = Arc::new(identity_profunctor(f.dom())?);
        let hom = Arc::new(hom_profunctor(f, f)?);
        ProfMap::from_fn(id, hom, |b, a| Ok(f.action(b, a).clone()))
    }

    pub fn dom(&self) -> &Arc<Profunctor> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Profunctor> {
        &self.cod
    }

    pub fn comp(&self, b: usize, a: usize) -> &BaseMorphism {
        &self.comps[b * self.dom.source().size() + a]
    }

    pub fn components(&self) -> &[BaseMorphism] {
        &self.comps
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ProfMap) -> Result<ProfMap> {
        if !same(&self.cod, &other.dom) {
            return shape("profunctor maps are not composable");
        }
        ProfMap::from_fn(self.dom.clone(), other.cod.clone(), |b, a| Ok(self.comp(b, a).then(other.comp(b, a))?))
    }

    /// Same components, viewed between profunctors equal to the current ones.
    pub fn retyped(&self, dom: Arc<Profunctor>, cod: Arc<Profunctor>) -> Result<ProfMap> {
        ProfMap::new(dom, cod, self.comps.clone())
    }

    /// Equivariance for both actions.
    pub fn check(&self) -> Report {
        let (m, n) = (&self.dom, &self.cod);
        let (ac, bc) = (m.source(), m.target());
        let (na, nb) = (ac.size(), bc.size());
        let mut report = Report::default();
        for b2 in 0..nb {
            for b in 0..nb {
                for a in 0..na {
                    let lhs = m.left(b2, b, a).then(self.comp(b2, a)).map_err(Error::from);
                    let rhs = tensor2(bc.hom(b2, b), self.comp(b, a)).and_then(|x| Ok(x.then(n.left(b2, b, a))?));
                    report.expect_eq(lhs, rhs, || {
                        format!("left equivariance at ({}, {}, {})", bc.label(b2), bc.label(b), ac.label(a))
                    });
                }
            }
        }
        for b in 0..nb {
            for a in 0..na {
                for a2 in 0..na {
                    let lhs = m.right(b, a, a2).then(self.comp(b, a2)).map_err(Error::from);
                    let rhs = tensor1(self.comp(b, a), ac.hom(a, a2)).and_then(|x| Ok(x.then(n.right(b, a, a2))?));
                    report.expect_eq(lhs, rhs, || {
                        format!("right equivariance at ({}, {}, {})", bc.label(b), ac.label(a), ac.label(a2))
                    });
                }
            }
        }
        report
    }

    /// The same components between dual profunctors.
    pub fn op(&self, dom_op: Arc<Profunctor>, cod_op: Arc<Profunctor>) -> Result<ProfMap> {
        ProfMap::from_fn(dom_op, cod_op, |a, b| Ok(self.comp(b, a).clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idempotent_monoid() -> VCategory {
        // elements 0 = 1, 1 = e
        VCategory::monoid(&[vec![0, 1], vec![1, 1]], 0).unwrap()
    }

    #[test]
    fn unit_category_is_valid_for_every_base() {
        for tag in BaseTag::ALL {
            assert!(VCategory::unit_category(tag).check().holds(), "{tag}");
        }
    }

    #[test]
    fn monoid_category_laws() {
        assert!(idempotent_monoid().check().holds());
        let broken = VCategory::monoid(&[vec![0, 1], vec![1, 0]], 0).unwrap();
        assert!(broken.check().holds(), "Z/2 is a monoid too");
        let not_assoc = VCategory::monoid(&[vec![0, 1], vec![1, 0]], 1).unwrap();
        assert!(!not_assoc.check().holds());
    }

    #[test]
    fn idempotent_squaring_to_one_breaks_a_law() {
        // μ(e, e) = 1 but keep "e" non-invertible elsewhere: 3 elements 1, e, f
        let table = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 1, 2]];
        let cat = VCategory::monoid(&table, 0).unwrap();
        let report = cat.check();
        assert!(!report.holds());
        assert!(report.failures[0].contains("associativity"));
    }

    #[test]
    fn self_enriched_categories_are_valid() {
        let cat = VCategory::self_enriched(
            BaseTag::MatQ,
            vec!["x".into(), "y".into()],
            &[BaseObject::MatQ(1), BaseObject::MatQ(2)],
        )
        .unwrap();
        assert!(cat.check().holds());
        let cat = VCategory::self_enriched(
            BaseTag::FinSet,
            vec!["x".into(), "y".into()],
            &[BaseObject::FinSet(2), BaseObject::FinSet(3)],
        )
        .unwrap();
        assert!(cat.check().holds());
        let op = cat.op().unwrap();
        assert!(op.check().holds());
        assert_eq!(op.op().unwrap(), cat);
    }

    #[test]
    fn concrete_generation_and_profunctors() {
        let c = Concrete::generate(
            BaseTag::FinSet,
            vec!["A".into(), "B".into()],
            vec![BaseObject::FinSet(2), BaseObject::FinSet(1)],
            &[(0, 0, vec![0, 0]), (0, 1, vec![0, 0]), (1, 0, vec![0])],
            16,
        )
        .unwrap();
        assert_eq!(c.maps(0, 0).len(), 2);
        let cat = Arc::new(c.category().unwrap());
        assert!(cat.check().holds());
        let id = identity_profunctor(&cat).unwrap();
        assert!(id.check().holds());
        let f = VFunctor::point(cat.clone(), 0).unwrap();
        let z = VFunctor::point(cat.clone(), 1).unwrap();
        assert!(f.check().holds());
        let h = hom_profunctor(&f, &z).unwrap();
        assert!(h.check().holds());
        assert_eq!(h.comp(0, 0), &BaseObject::FinSet(1));
        let whole = VFunctor::identity(cat.clone());
        assert_eq!(hom_profunctor(&whole, &whole).unwrap(), id);
        let act = ProfMap::functor_action(&whole).unwrap();
        assert!(act.check().holds());
    }

    #[test]
    fn pointed_and_suplat_concrete_categories() {
        let c = Concrete::generate(
            BaseTag::Pointed,
            vec!["X".into()],
            vec![BaseObject::Pointed(3)],
            &[(0, 0, vec![0, 2, 1])],
            16,
        )
        .unwrap();
        assert_eq!(c.maps(0, 0).len(), 3);
        assert!(c.category().unwrap().check().holds());
        let two = Lattice::chain(2);
        let sq = Lattice::product(&[Arc::new(two.clone()), Arc::new(two)]);
        let c = Concrete::generate(BaseTag::SupLat, vec!["Z".into()], vec![BaseObject::suplat(sq)], &[(0, 0, vec![0, 1, 0, 1])], 16)
            .unwrap();
        assert!(c.category().unwrap().check().holds());
    }

    #[test]
    fn discrete_and_dual_profunctors() {
        for tag in BaseTag::ALL {
            let d = Arc::new(VCategory::discrete(tag, vec!["j".into(), "k".into()]).unwrap());
            assert!(d.check().holds(), "{tag}");
            let id = identity_profunctor(&d).unwrap();
            assert!(id.check().holds());
            let dop = Arc::new(d.op().unwrap());
            let op = id.op(dop.clone(), dop.clone()).unwrap();
            assert!(op.check().holds());
        }
    }
}
