//! The document format: a single JSON text declaring a base, then named
//! categories, functors, profunctors, maps, adjunctions and tasks, in that
//! order. Everything is validated when the text is read.
//!
//! Conventions:
//! - `C(x, y)` is the hom from `x` to `y`; hom entries name it by `dom`/`cod`.
//! - composition entries carry a `path` `[c, b, a]` for `C(c,b) ⊗ C(b,a) -> C(c,a)`.
//! - profunctor components are keyed by a `target` object and a `source` object.
//! - objects are sizes (finset, finset_ptd including the basepoint, matq
//!   dimension) or `{"leq": [[bool]]}` for suplat.
//! - morphisms are `{"table": [..]}` or `{"matrix": [[".."]]}` with rows indexed
//!   by the codomain; rationals are strict `"p"` / `"p/q"` strings.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::absolute::{ColimitDatum, LimitDatum, SquaresDatum};
use crate::base::rational::{format_q, parse_q, Matrix};
use crate::base::{self, BaseMorphism, BaseObject, BaseTag, Body, Lattice};
use crate::enriched::{hom_profunctor, identity_profunctor, same, ProfMap, Profunctor, Report, VCategory, VFunctor};
use crate::error::Error;
use crate::instances::Fixture;
use crate::modcalc::{tensor_over, AdjunctionData};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format_version: String,
    pub base: BaseTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<CategoryDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functors: Vec<FunctorDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub profunctors: Vec<ProfunctorDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adjunctions: Vec<AdjunctionDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectSpec {
    Size(usize),
    Lattice { leq: Vec<Vec<bool>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MorphismSpec {
    Table(Vec<usize>),
    Matrix(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomEntry {
    pub dom: String,
    pub cod: String,
    pub object: ObjectSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitEntry {
    pub object: String,
    pub morphism: MorphismSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathEntry {
    pub path: Vec<String>,
    pub morphism: MorphismSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowEntry {
    pub dom: String,
    pub cod: String,
    pub morphism: MorphismSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentObject {
    pub target: String,
    pub source: String,
    pub object: ObjectSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEntry {
    pub target: String,
    pub source: String,
    pub morphism: MorphismSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDecl {
    pub name: String,
    pub objects: Vec<String>,
    pub homs: Vec<HomEntry>,
    pub units: Vec<UnitEntry>,
    pub compositions: Vec<PathEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDecl {
    pub name: String,
    pub dom: String,
    pub cod: String,
    /// `[x, F x]` for every object of the domain.
    pub objects: Vec<[String; 2]>,
    pub actions: Vec<ArrowEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfunctorDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub components: Vec<ComponentObject>,
    /// `[b2, b, a]`: `target(b2, b) ⊗ M(b, a) -> M(b2, a)`.
    pub left: Vec<PathEntry>,
    /// `[b, a, a2]`: `M(b, a) ⊗ source(a, a2) -> M(b, a2)`.
    pub right: Vec<PathEntry>,
}

/// Where a map lands: a declared profunctor, or one built from declarations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfRef {
    Named(String),
    /// `{"hom": [G, F]}` is `C(G, F)`, components `C(G b, F a)`.
    Hom { hom: [String; 2] },
    Identity { identity: String },
    /// `{"tensor": [N, M]}` is `N ⊗ M` over the middle category.
    Tensor { tensor: [String; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDecl {
    pub name: String,
    pub dom: ProfRef,
    pub cod: ProfRef,
    pub components: Vec<ComponentEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjunctionDecl {
    pub name: String,
    pub left: String,
    pub right: String,
    pub unit: Vec<ComponentEntry>,
    pub counit: Vec<ComponentEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub functor: String,
    pub module: String,
    pub map: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjunction: Option<String>,
    /// Colimit weight; defaults to the adjunction's left profunctor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    /// Limit weight; defaults to the adjunction's right profunctor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coweight: Option<String>,
    pub diagram: String,
    pub apex: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocone: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<FactorSpec>,
}

/// A list of maps, as emitted by constructions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fragment {
    pub maps: Vec<MapDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: bad value: {message}")]
    Value { path: String, message: String },
    #[error("{path}: unknown reference {name:?}")]
    Reference { path: String, name: String },
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error("{path}: axiom fails: {message}")]
    Axiom { path: String, message: String },
}

impl FormatError {
    pub fn class(&self) -> &'static str {
        match self {
            FormatError::Syntax { .. } => "syntax",
            FormatError::Value { .. } => "value",
            FormatError::Reference { .. } => "reference",
            FormatError::Shape { .. } => "shape",
            FormatError::Axiom { .. } => "axiom",
        }
    }
}

/// Every problem found in a document, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseErrors(pub Vec<FormatError>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

fn shape_err(path: &str, e: Error) -> FormatError {
    FormatError::Shape { path: path.to_string(), message: e.to_string() }
}

fn shape_msg(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Shape { path: path.to_string(), message: message.into() }
}

fn axioms(path: &str, r: Report) -> Result<(), FormatError> {
    match r.failures.into_iter().next() {
        None => Ok(()),
        Some(message) => Err(FormatError::Axiom { path: path.to_string(), message }),
    }
}

// ---------------------------------------------------------------------------
// values

fn object(path: &str, spec: &ObjectSpec, tag: BaseTag) -> Result<BaseObject, FormatError> {
    let bad = |message: String| FormatError::Value { path: path.to_string(), message };
    match (tag, spec) {
        (BaseTag::FinSet, ObjectSpec::Size(n)) => Ok(BaseObject::finset(*n)),
        (BaseTag::Pointed, ObjectSpec::Size(n)) => BaseObject::pointed(*n).map_err(|e| bad(e.to_string())),
        (BaseTag::MatQ, ObjectSpec::Size(n)) => Ok(BaseObject::matq(*n)),
        (BaseTag::SupLat, ObjectSpec::Lattice { leq }) => {
            Lattice::new(leq.clone()).map(BaseObject::suplat).map_err(|e| bad(e.to_string()))
        }
        (BaseTag::SupLat, _) => Err(bad("suplat objects are given by their leq matrix".into())),
        (_, _) => Err(bad(format!("{tag} objects are given by a size"))),
    }
}

fn object_spec(o: &BaseObject) -> ObjectSpec {
    match o.lattice() {
        Some(l) => ObjectSpec::Lattice { leq: l.order_rows() },
        None => ObjectSpec::Size(o.size()),
    }
}

fn morphism(path: &str, spec: &MorphismSpec, dom: &BaseObject, cod: &BaseObject) -> Result<BaseMorphism, FormatError> {
    match (dom.tag(), spec) {
        (BaseTag::MatQ, MorphismSpec::Matrix(rows)) => {
            let (r, c) = (cod.size(), dom.size());
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(shape_msg(path, format!("expected a {r}x{c} matrix")));
            }
            let mut entries = Vec::with_capacity(r * c);
            for (i, row) in rows.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    let x = parse_q(s).map_err(|e| FormatError::Value {
                        path: format!("{path}.matrix[{i}][{j}]"),
                        message: e.to_string(),
                    })?;
                    entries.push(x);
                }
            }
            BaseMorphism::from_matrix(dom.clone(), cod.clone(), Matrix::from_rows(r, c, entries))
                .map_err(|e| shape_err(path, e.into()))
        }
        (BaseTag::MatQ, _) => Err(shape_msg(path, "matq morphisms are matrices")),
        (_, MorphismSpec::Table(t)) => {
            BaseMorphism::from_table(dom.clone(), cod.clone(), t.clone()).map_err(|e| shape_err(path, e.into()))
        }
        (tag, _) => Err(shape_msg(path, format!("{tag} morphisms are tables"))),
    }
}

fn morphism_spec(m: &BaseMorphism) -> MorphismSpec {
    match m.body() {
        Body::Table(t) => MorphismSpec::Table(t.clone()),
        Body::Matrix(x) => MorphismSpec::Matrix((0..x.rows()).map(|r| x.row(r).iter().map(format_q).collect()).collect()),
    }
}

/// Matches entries keyed by object labels against the full row-major grid.
fn grid<'e, E>(
    path: &str,
    entries: &'e [E],
    key: impl Fn(&E) -> Vec<&str>,
    cats: &[&VCategory],
) -> Result<Vec<&'e E>, FormatError> {
    let total: usize = cats.iter().map(|c| c.size()).product();
    let mut slots: Vec<Option<&E>> = vec![None; total];
    for (i, e) in entries.iter().enumerate() {
        let here = format!("{path}[{i}]");
        let labels = key(e);
        if labels.len() != cats.len() {
            return Err(shape_msg(&here, format!("expected {} object names", cats.len())));
        }
        let mut k = 0;
        for (label, cat) in labels.iter().zip(cats) {
            let x = cat.index_of(label).ok_or_else(|| FormatError::Reference { path: here.clone(), name: label.to_string() })?;
            k = k * cat.size() + x;
        }
        if slots[k].replace(e).is_some() {
            return Err(shape_msg(&here, format!("duplicate entry for ({})", labels.join(", "))));
        }
    }
    if let Some(k) = slots.iter().position(Option::is_none) {
        let mut labels = Vec::with_capacity(cats.len());
        let mut rest = k;
        for cat in cats.iter().rev() {
            labels.push(cat.label(rest % cat.size()).to_string());
            rest /= cat.size();
        }
        labels.reverse();
        return Err(shape_msg(path, format!("missing entry for ({})", labels.join(", "))));
    }
    Ok(slots.into_iter().map(Option::unwrap).collect())
}

// ---------------------------------------------------------------------------
// validation

/// A task with every reference resolved.
#[derive(Debug, Clone)]
pub struct Task {
    pub name: String,
    pub f: VFunctor,
    pub z: VFunctor,
    pub adjunction: Option<AdjunctionData>,
    pub colimit: Option<ColimitDatum>,
    pub limit: Option<LimitDatum>,
    pub factor: Option<(VFunctor, Arc<Profunctor>, ProfMap)>,
}

impl Task {
    pub fn squares(&self) -> Option<SquaresDatum> {
        let (adj, col, lim) = (self.adjunction.as_ref()?, self.colimit.as_ref()?, self.limit.as_ref()?);
        if !Arc::ptr_eq(&adj.phi, &col.phi) || !Arc::ptr_eq(&adj.psi, &lim.psi) {
            return None;
        }
        Some(SquaresDatum {
            adj: adj.clone(),
            f: self.f.clone(),
            z: self.z.clone(),
            a: col.a.clone(),
            b: lim.b.clone(),
        })
    }
}

/// A validated document.
#[derive(Debug, Clone)]
pub struct Model {
    pub document: Document,
    pub adjunctions: Vec<(String, AdjunctionData)>,
    pub tasks: Vec<Task>,
}

enum Fail {
    Err(FormatError),
    /// Depends on a declaration that already failed.
    Skip,
}

impl From<FormatError> for Fail {
    fn from(e: FormatError) -> Self {
        Fail::Err(e)
    }
}

#[derive(Default)]
struct Scope {
    names: HashSet<String>,
    failed: HashSet<String>,
    cats: HashMap<String, Arc<VCategory>>,
    functors: HashMap<String, VFunctor>,
    profs: HashMap<String, Arc<Profunctor>>,
    maps: HashMap<String, ProfMap>,
    adjs: HashMap<String, AdjunctionData>,
}

fn lookup<T: Clone>(scope: &Scope, table: &HashMap<String, T>, path: &str, name: &str) -> Result<T, Fail> {
    if let Some(x) = table.get(name) {
        return Ok(x.clone());
    }
    if scope.failed.contains(name) {
        return Err(Fail::Skip);
    }
    Err(FormatError::Reference { path: path.to_string(), name: name.to_string() }.into())
}

impl Scope {
    fn claim(&mut self, path: &str, name: &str) -> Result<(), FormatError> {
        if !self.names.insert(name.to_string()) {
            return Err(shape_msg(path, format!("name {name:?} is declared twice")));
        }
        Ok(())
    }

    fn category(&self, path: &str, d: &CategoryDecl, tag: BaseTag) -> Result<VCategory, Fail> {
        let mut seen = HashSet::new();
        if let Some(dup) = d.objects.iter().find(|o| !seen.insert(o.as_str())) {
            return Err(shape_msg(path, format!("object {dup:?} listed twice")).into());
        }
        let n = d.objects.len();
        // a hom-free skeleton to resolve labels against
        let skeleton = VCategory::discrete(tag, d.objects.clone()).map_err(|e| shape_err(path, e))?;
        let hp = format!("{path}.homs");
        let homs = grid(&hp, &d.homs, |e| vec![&e.dom, &e.cod], &[&skeleton, &skeleton])?;
        let hom = homs
            .iter()
            .enumerate()
            .map(|(k, e)| object(&format!("{hp}[{}, {}]", d.objects[k / n], d.objects[k % n]), &e.object, tag))
            .collect::<Result<Vec<_>, _>>()?;
        let i = base::unit_obj(tag);
        let up = format!("{path}.units");
        let units = grid(&up, &d.units, |e| vec![&e.object], &[&skeleton])?
            .iter()
            .enumerate()
            .map(|(x, e)| morphism(&format!("{up}[{}]", d.objects[x]), &e.morphism, &i, &hom[x * n + x]))
            .collect::<Result<Vec<_>, _>>()?;
        let cp = format!("{path}.compositions");
        let entries = grid(&cp, &d.compositions, |e| e.path.iter().map(String::as_str).collect(), &[&skeleton; 3])?;
        let mut comp = vec![vec![Vec::with_capacity(n); n]; n];
        for (k, e) in entries.iter().enumerate() {
            let (c, b, a) = (k / (n * n), (k / n) % n, k % n);
            let here = format!("{cp}[{}, {}, {}]", d.objects[c], d.objects[b], d.objects[a]);
            let dom = base::tensor_obj(&hom[c * n + b], &hom[b * n + a]).map_err(|e| shape_err(&here, e.into()))?;
            comp[c][b].push(morphism(&here, &e.morphism, &dom, &hom[c * n + a])?);
        }
        let rows = (0..n).map(|x| hom[x * n..(x + 1) * n].to_vec()).collect();
        let cat = VCategory::new(tag, d.objects.clone(), rows, units, comp).map_err(|e| shape_err(path, e))?;
        axioms(path, cat.check())?;
        Ok(cat)
    }

    fn functor(&self, path: &str, d: &FunctorDecl) -> Result<VFunctor, Fail> {
        let dom = lookup(self, &self.cats, &format!("{path}.dom"), &d.dom)?;
        let cod = lookup(self, &self.cats, &format!("{path}.cod"), &d.cod)?;
        let op = format!("{path}.objects");
        let pairs = grid(&op, &d.objects, |e| vec![&e[0]], &[&dom])?;
        let obj = pairs
            .iter()
            .enumerate()
            .map(|(i, e)| {
                cod.index_of(&e[1])
                    .ok_or_else(|| FormatError::Reference { path: format!("{op}[{i}]"), name: e[1].clone() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ap = format!("{path}.actions");
        let acts = grid(&ap, &d.actions, |e| vec![&e.dom, &e.cod], &[&dom, &dom])?;
        let n = dom.size();
        let mut action = vec![Vec::with_capacity(n); n];
        for (k, e) in acts.iter().enumerate() {
            let (x, y) = (k / n, k % n);
            let here = format!("{ap}[{}, {}]", dom.label(x), dom.label(y));
            action[x].push(morphism(&here, &e.morphism, dom.hom(x, y), cod.hom(obj[x], obj[y]))?);
        }
        let f = VFunctor::new(dom, cod, obj, action).map_err(|e| shape_err(path, e))?;
        axioms(path, f.check())?;
        Ok(f)
    }

    fn profunctor(&self, path: &str, d: &ProfunctorDecl, tag: BaseTag) -> Result<Profunctor, Fail> {
        let src = lookup(self, &self.cats, &format!("{path}.source"), &d.source)?;
        let tgt = lookup(self, &self.cats, &format!("{path}.target"), &d.target)?;
        let (na, nb) = (src.size(), tgt.size());
        let cp = format!("{path}.components");
        let comps = grid(&cp, &d.components, |e| vec![&e.target, &e.source], &[&tgt, &src])?
            .iter()
            .enumerate()
            .map(|(k, e)| object(&format!("{cp}[{}, {}]", tgt.label(k / na), src.label(k % na)), &e.object, tag))
            .collect::<Result<Vec<_>, _>>()?;
        let comp = |b: usize, a: usize| &comps[b * na + a];
        let lp = format!("{path}.left");
        let lefts = grid(&lp, &d.left, |e| e.path.iter().map(String::as_str).collect(), &[&tgt, &tgt, &src])?;
        let mut left = Vec::with_capacity(lefts.len());
        for (k, e) in lefts.iter().enumerate() {
            let (b2, b, a) = (k / (nb * na), (k / na) % nb, k % na);
            let here = format!("{lp}[{}, {}, {}]", tgt.label(b2), tgt.label(b), src.label(a));
            let dom = base::tensor_obj(tgt.hom(b2, b), comp(b, a)).map_err(|e| shape_err(&here, e.into()))?;
            left.push(morphism(&here, &e.morphism, &dom, comp(b2, a))?);
        }
        let rp = format!("{path}.right");
        let rights = grid(&rp, &d.right, |e| e.path.iter().map(String::as_str).collect(), &[&tgt, &src, &src])?;
        let mut right = Vec::with_capacity(rights.len());
        for (k, e) in rights.iter().enumerate() {
            let (b, a, a2) = (k / (na * na), (k / na) % na, k % na);
            let here = format!("{rp}[{}, {}, {}]", tgt.label(b), src.label(a), src.label(a2));
            let dom = base::tensor_obj(comp(b, a), src.hom(a, a2)).map_err(|e| shape_err(&here, e.into()))?;
            right.push(morphism(&here, &e.morphism, &dom, comp(b, a2))?);
        }
        let m = Profunctor::from_fn(
            src,
            tgt,
            |b, a| Ok(comp(b, a).clone()),
            |b2, b, a| Ok(left[(b2 * nb + b) * na + a].clone()),
            |b, a, a2| Ok(right[(b * na + a) * na + a2].clone()),
        )
        .map_err(|e| shape_err(path, e))?;
        axioms(path, m.check())?;
        Ok(m)
    }

    fn prof_ref(&self, path: &str, r: &ProfRef) -> Result<Arc<Profunctor>, Fail> {
        match r {
            ProfRef::Named(n) => lookup(self, &self.profs, path, n),
            ProfRef::Hom { hom: [g, f] } => {
                let g = lookup(self, &self.functors, path, g)?;
                let f = lookup(self, &self.functors, path, f)?;
                Ok(Arc::new(hom_profunctor(&g, &f).map_err(|e| shape_err(path, e))?))
            }
            ProfRef::Identity { identity } => {
                let c = lookup(self, &self.cats, path, identity)?;
                Ok(Arc::new(identity_profunctor(&c).map_err(|e| shape_err(path, e))?))
            }
            ProfRef::Tensor { tensor: [n, m] } => {
                let n = lookup(self, &self.profs, path, n)?;
                let m = lookup(self, &self.profs, path, m)?;
                Ok(tensor_over(&n, &m).map_err(|e| shape_err(path, e))?.result)
            }
        }
    }

    fn components(&self, path: &str, entries: &[ComponentEntry], dom: &Profunctor, cod: &Profunctor) -> Result<Vec<BaseMorphism>, Fail> {
        let (src, tgt) = (dom.source(), dom.target());
        let rows = grid(path, entries, |e| vec![&e.target, &e.source], &[tgt, src])?;
        let na = src.size();
        let mut out = Vec::with_capacity(rows.len());
        for (k, e) in rows.iter().enumerate() {
            let (b, a) = (k / na, k % na);
            let here = format!("{path}[{}, {}]", tgt.label(b), src.label(a));
            out.push(morphism(&here, &e.morphism, dom.comp(b, a), cod.comp(b, a))?);
        }
        Ok(out)
    }

    fn map(&self, path: &str, d: &MapDecl) -> Result<ProfMap, Fail> {
        let dom = self.prof_ref(&format!("{path}.dom"), &d.dom)?;
        let cod = self.prof_ref(&format!("{path}.cod"), &d.cod)?;
        if !same(dom.source(), cod.source()) || !same(dom.target(), cod.target()) {
            return Err(shape_msg(path, "domain and codomain have different shapes").into());
        }
        let comps = self.components(&format!("{path}.components"), &d.components, &dom, &cod)?;
        Ok(ProfMap::new(dom, cod, comps).map_err(|e| shape_err(path, e))?)
    }

    fn adjunction(&self, path: &str, d: &AdjunctionDecl) -> Result<AdjunctionData, Fail> {
        let phi = lookup(self, &self.profs, &format!("{path}.left"), &d.left)?;
        let psi = lookup(self, &self.profs, &format!("{path}.right"), &d.right)?;
        if !same(phi.source(), psi.target()) || !same(phi.target(), psi.source()) {
            return Err(shape_msg(path, "adjoint profunctors must run in opposite directions").into());
        }
        let psi_phi = tensor_over(&psi, &phi).map_err(|e| shape_err(path, e))?;
        let phi_psi = tensor_over(&phi, &psi).map_err(|e| shape_err(path, e))?;
        let id_a = identity_profunctor(phi.source()).map_err(|e| shape_err(path, e))?;
        let id_b = identity_profunctor(phi.target()).map_err(|e| shape_err(path, e))?;
        let eta = self.components(&format!("{path}.unit"), &d.unit, &id_a, &psi_phi.result)?;
        let eps = self.components(&format!("{path}.counit"), &d.counit, &phi_psi.result, &id_b)?;
        Ok(AdjunctionData::new(phi, psi, eta, eps).map_err(|e| shape_err(path, e))?)
    }

    fn task(&self, path: &str, d: &TaskDecl) -> Result<Task, Fail> {
        let f = lookup(self, &self.functors, &format!("{path}.diagram"), &d.diagram)?;
        let z = lookup(self, &self.functors, &format!("{path}.apex"), &d.apex)?;
        let adjunction = match &d.adjunction {
            Some(n) => Some(lookup(self, &self.adjs, &format!("{path}.adjunction"), n)?),
            None => None,
        };
        let weight = |field: &str, name: &Option<String>, side: fn(&AdjunctionData) -> &Arc<Profunctor>| {
            match (name, &adjunction) {
                (Some(n), _) => lookup(self, &self.profs, &format!("{path}.{field}"), n).map(Some),
                (None, Some(adj)) => Ok(Some(side(adj).clone())),
                (None, None) => Ok(None),
            }
        };
        let phi = weight("weight", &d.weight, |a| &a.phi)?;
        let psi = weight("coweight", &d.coweight, |a| &a.psi)?;
        let colimit = match &d.cocone {
            None => None,
            Some(n) => {
                let here = format!("{path}.cocone");
                let a = lookup(self, &self.maps, &here, n)?;
                let phi = phi.clone().ok_or_else(|| shape_msg(&here, "a cocone needs a weight or an adjunction"))?;
                if !same(a.dom(), &phi) {
                    return Err(shape_msg(&here, format!("map {n:?} does not start at the weight")).into());
                }
                Some(ColimitDatum::new(phi, f.clone(), z.clone(), a.components().to_vec()).map_err(|e| shape_err(&here, e))?)
            }
        };
        let limit = match &d.cone {
            None => None,
            Some(n) => {
                let here = format!("{path}.cone");
                let b = lookup(self, &self.maps, &here, n)?;
                let psi = psi.clone().ok_or_else(|| shape_msg(&here, "a cone needs a coweight or an adjunction"))?;
                if !same(b.dom(), &psi) {
                    return Err(shape_msg(&here, format!("map {n:?} does not start at the coweight")).into());
                }
                Some(LimitDatum::new(psi, f.clone(), z.clone(), b.components().to_vec()).map_err(|e| shape_err(&here, e))?)
            }
        };
        let factor = match &d.factor {
            None => None,
            Some(spec) => {
                let here = format!("{path}.factor");
                let g = lookup(self, &self.functors, &here, &spec.functor)?;
                let k = lookup(self, &self.profs, &here, &spec.module)?;
                let m = lookup(self, &self.maps, &here, &spec.map)?;
                Some((g, k, m))
            }
        };
        Ok(Task { name: d.name.clone(), f, z, adjunction, colimit, limit, factor })
    }
}

/// Reads a document without validating it.
pub fn parse_syntax(text: &str) -> Result<Document, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })
}

/// Reads and validates a document.
pub fn parse(text: &str) -> Result<Model, ParseErrors> {
    let doc = parse_syntax(text).map_err(|e| ParseErrors(vec![e]))?;
    validate(doc)
}

/// Resolves every reference and checks every declaration, collecting all
/// problems; declarations depending on a broken one are not reported again.
pub fn validate(doc: Document) -> Result<Model, ParseErrors> {
    let mut errors = Vec::new();
    if doc.format_version != FORMAT_VERSION {
        errors.push(FormatError::Value {
            path: "format_version".into(),
            message: format!("expected {FORMAT_VERSION:?}, found {:?}", doc.format_version),
        });
        return Err(ParseErrors(errors));
    }
    let tag = doc.base;
    let mut scope = Scope::default();
    let mut adjunctions = Vec::new();
    let mut tasks = Vec::new();

    fn settle<T>(
        scope: &mut Scope,
        errors: &mut Vec<FormatError>,
        path: &str,
        name: &str,
        r: Result<T, Fail>,
    ) -> Option<T> {
        if let Err(e) = scope.claim(path, name) {
            errors.push(e);
            return None;
        }
        match r {
            Ok(x) => Some(x),
            Err(fail) => {
                scope.failed.insert(name.to_string());
                if let Fail::Err(e) = fail {
                    errors.push(e);
                }
                None
            }
        }
    }

    for (i, d) in doc.categories.iter().enumerate() {
        let path = format!("categories[{i}]");
        let r = scope.category(&path, d, tag);
        if let Some(c) = settle(&mut scope, &mut errors, &path, &d.name, r) {
            scope.cats.insert(d.name.clone(), Arc::new(c));
        }
    }
    for (i, d) in doc.functors.iter().enumerate() {
        let path = format!("functors[{i}]");
        let r = scope.functor(&path, d);
        if let Some(f) = settle(&mut scope, &mut errors, &path, &d.name, r) {
            scope.functors.insert(d.name.clone(), f);
        }
    }
    for (i, d) in doc.profunctors.iter().enumerate() {
        let path = format!("profunctors[{i}]");
        let r = scope.profunctor(&path, d, tag);
        if let Some(m) = settle(&mut scope, &mut errors, &path, &d.name, r) {
            scope.profs.insert(d.name.clone(), Arc::new(m));
        }
    }
    for (i, d) in doc.maps.iter().enumerate() {
        let path = format!("maps[{i}]");
        let r = scope.map(&path, d);
        if let Some(m) = settle(&mut scope, &mut errors, &path, &d.name, r) {
            scope.maps.insert(d.name.clone(), m);
        }
    }
    for (i, d) in doc.adjunctions.iter().enumerate() {
        let path = format!("adjunctions[{i}]");
        let r = scope.adjunction(&path, d);
        if let Some(a) = settle(&mut scope, &mut errors, &path, &d.name, r) {
            scope.adjs.insert(d.name.clone(), a.clone());
            adjunctions.push((d.name.clone(), a));
        }
    }
    for (i, d) in doc.tasks.iter().enumerate() {
        let path = format!("tasks[{i}]");
        let r = scope.task(&path, d);
        if let Some(t) = settle(&mut scope, &mut errors, &path, &d.name, r) {
            tasks.push(t);
        }
    }
    if !errors.is_empty() {
        return Err(ParseErrors(errors));
    }
    Ok(Model { document: doc, adjunctions, tasks })
}

// ---------------------------------------------------------------------------
// writing

/// Canonical text: two-space indentation, fixed key order, tables, matrices
/// and short values kept on one line, trailing newline.
pub fn to_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialise");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

pub fn emit(doc: &Document) -> String {
    to_text(doc)
}

fn scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| scalar(x) || matches!(x, Value::Array(ys) if ys.iter().all(scalar))),
        _ => scalar(v),
    }
}

const INLINE_WIDTH: usize = 96;

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let compact = serde_json::to_string(v).expect("values serialise");
    if flat(v) || compact.len() <= INLINE_WIDTH {
        out.push_str(&compact);
        return;
    }
    let pad = " ".repeat(indent + 2);
    match v {
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&serde_json::to_string(k).expect("keys serialise"));
                out.push_str(": ");
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push('}');
        }
        _ => unreachable!(),
    }
}

/// Assembles a document from in-memory structures, naming each distinct
/// category, functor and profunctor once.
pub struct Builder {
    doc: Document,
    cats: Vec<(Arc<VCategory>, String)>,
    functors: Vec<(VFunctor, String)>,
    profs: Vec<(Arc<Profunctor>, String)>,
    used: HashSet<String>,
}

impl Builder {
    pub fn new(base: BaseTag) -> Self {
        Builder {
            doc: Document {
                format_version: FORMAT_VERSION.into(),
                base,
                description: None,
                categories: vec![],
                functors: vec![],
                profunctors: vec![],
                maps: vec![],
                adjunctions: vec![],
                tasks: vec![],
            },
            cats: vec![],
            functors: vec![],
            profs: vec![],
            used: HashSet::new(),
        }
    }

    pub fn describe(&mut self, text: &str) {
        self.doc.description = Some(text.to_string());
    }

    fn fresh(&mut self, name: &str) -> String {
        let mut candidate = name.to_string();
        let mut k = 2;
        while self.used.contains(&candidate) {
            candidate = format!("{name}{k}");
            k += 1;
        }
        self.used.insert(candidate.clone());
        candidate
    }

    pub fn category(&mut self, c: &Arc<VCategory>, name: &str) -> String {
        if let Some((_, n)) = self.cats.iter().find(|(d, _)| same(c, d)) {
            return n.clone();
        }
        let name = self.fresh(name);
        let n = c.size();
        let l = |x: usize| c.label(x).to_string();
        let mut homs = Vec::with_capacity(n * n);
        let mut compositions = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                homs.push(HomEntry { dom: l(x), cod: l(y), object: object_spec(c.hom(x, y)) });
                for z in 0..n {
                    compositions.push(PathEntry { path: vec![l(x), l(y), l(z)], morphism: morphism_spec(c.comp(x, y, z)) });
                }
            }
        }
        let units = (0..n).map(|x| UnitEntry { object: l(x), morphism: morphism_spec(c.unit(x)) }).collect();
        self.doc.categories.push(CategoryDecl { name: name.clone(), objects: c.labels().to_vec(), homs, units, compositions });
        self.cats.push((c.clone(), name.clone()));
        name
    }

    pub fn functor(&mut self, f: &VFunctor, name: &str, dom_name: &str, cod_name: &str) -> String {
        if let Some((_, n)) = self.functors.iter().find(|(g, _)| g == f) {
            return n.clone();
        }
        let dom = self.category(f.dom(), dom_name);
        let cod = self.category(f.cod(), cod_name);
        let name = self.fresh(name);
        let (d, c) = (f.dom(), f.cod());
        let n = d.size();
        let objects = (0..n).map(|x| [d.label(x).to_string(), c.label(f.obj(x)).to_string()]).collect();
        let mut actions = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                actions.push(ArrowEntry {
                    dom: d.label(x).to_string(),
                    cod: d.label(y).to_string(),
                    morphism: morphism_spec(f.action(x, y)),
                });
            }
        }
        self.doc.functors.push(FunctorDecl { name: name.clone(), dom, cod, objects, actions });
        self.functors.push((f.clone(), name.clone()));
        name
    }

    pub fn profunctor(&mut self, m: &Arc<Profunctor>, name: &str, source_name: &str, target_name: &str) -> String {
        if let Some((_, n)) = self.profs.iter().find(|(p, _)| same(p, m)) {
            return n.clone();
        }
        let source = self.category(m.source(), source_name);
        let target = self.category(m.target(), target_name);
        let name = self.fresh(name);
        let (src, tgt) = (m.source(), m.target());
        let (na, nb) = (src.size(), tgt.size());
        let (s, t) = (|x: usize| src.label(x).to_string(), |x: usize| tgt.label(x).to_string());
        let mut components = Vec::with_capacity(na * nb);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for b in 0..nb {
            for a in 0..na {
                components.push(ComponentObject { target: t(b), source: s(a), object: object_spec(m.comp(b, a)) });
            }
        }
        for b2 in 0..nb {
            for b in 0..nb {
                for a in 0..na {
                    left.push(PathEntry { path: vec![t(b2), t(b), s(a)], morphism: morphism_spec(m.left(b2, b, a)) });
                }
            }
        }
        for b in 0..nb {
            for a in 0..na {
                for a2 in 0..na {
                    right.push(PathEntry { path: vec![t(b), s(a), s(a2)], morphism: morphism_spec(m.right(b, a, a2)) });
                }
            }
        }
        self.doc.profunctors.push(ProfunctorDecl { name: name.clone(), source, target, components, left, right });
        self.profs.push((m.clone(), name.clone()));
        name
    }

    pub fn map(&mut self, m: &ProfMap, name: &str, dom: ProfRef, cod: ProfRef) -> String {
        let name = self.fresh(name);
        let decl = map_decl(m, &name, dom, cod);
        self.doc.maps.push(decl);
        name
    }

    pub fn adjunction(&mut self, adj: &AdjunctionData, name: &str) -> String {
        let left = self.profunctor(&adj.phi, "phi", "A", "B");
        let right = self.profunctor(&adj.psi, "psi", "B", "A");
        let name = self.fresh(name);
        self.doc.adjunctions.push(AdjunctionDecl {
            name: name.clone(),
            left,
            right,
            unit: component_entries(&adj.eta),
            counit: component_entries(&adj.eps),
        });
        name
    }

    pub fn task(&mut self, t: TaskDecl) {
        self.used.insert(t.name.clone());
        self.doc.tasks.push(t);
    }

    pub fn finish(self) -> Document {
        self.doc
    }
}

fn component_entries(m: &ProfMap) -> Vec<ComponentEntry> {
    let (src, tgt) = (m.dom().source(), m.dom().target());
    let mut out = Vec::with_capacity(src.size() * tgt.size());
    for b in 0..tgt.size() {
        for a in 0..src.size() {
            out.push(ComponentEntry {
                target: tgt.label(b).to_string(),
                source: src.label(a).to_string(),
                morphism: morphism_spec(m.comp(b, a)),
            });
        }
    }
    out
}

pub fn map_decl(m: &ProfMap, name: &str, dom: ProfRef, cod: ProfRef) -> MapDecl {
    MapDecl { name: name.to_string(), dom, cod, components: component_entries(m) }
}

fn task_decl(name: &str) -> TaskDecl {
    TaskDecl {
        name: name.to_string(),
        adjunction: None,
        weight: None,
        coweight: None,
        diagram: "F".into(),
        apex: "Z".into(),
        cocone: None,
        cone: None,
        factor: None,
    }
}

fn hom_ref(g: &str, f: &str) -> ProfRef {
    ProfRef::Hom { hom: [g.to_string(), f.to_string()] }
}

/// A fixture as a document with one task carrying the adjunction, the
/// diagram, the apex and both expected maps.
pub fn fixture_document(fx: &Fixture) -> Document {
    let mut b = Builder::new(fx.tag);
    b.describe(&fx.note);
    b.category(&fx.c, "C");
    b.category(fx.adj.phi.source(), "A");
    b.category(fx.adj.phi.target(), "B");
    let f = b.functor(&fx.f, "F", "B", "C");
    let z = b.functor(&fx.z, "Z", "A", "C");
    let adj = b.adjunction(&fx.adj, "adj");
    let phi = b.profunctor(&fx.adj.phi, "phi", "A", "B");
    let psi = b.profunctor(&fx.adj.psi, "psi", "B", "A");
    let a = b.map(&fx.expected_a, "a", ProfRef::Named(phi), hom_ref(&f, &z));
    let cone = b.map(&fx.expected_b, "b", ProfRef::Named(psi), hom_ref(&z, &f));
    let mut t = task_decl(&fx.name);
    t.adjunction = Some(adj);
    t.diagram = f;
    t.apex = z;
    t.cocone = Some(a);
    t.cone = Some(cone);
    b.task(t);
    b.finish()
}

/// A bare weighted cocone as a document.
pub fn colimit_document(name: &str, d: &ColimitDatum) -> Document {
    let mut b = Builder::new(d.ambient().tag());
    b.category(d.ambient(), "C");
    let f = b.functor(&d.f, "F", "B", "C");
    let z = b.functor(&d.z, "Z", "A", "C");
    let phi = b.profunctor(&d.phi, "phi", "A", "B");
    let a = b.map(&d.a, "a", ProfRef::Named(phi.clone()), hom_ref(&f, &z));
    let mut t = task_decl(name);
    t.weight = Some(phi);
    t.diagram = f;
    t.apex = z;
    t.cocone = Some(a);
    b.task(t);
    b.finish()
}

#[cfg(test)]
mod tests;
