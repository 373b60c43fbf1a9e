//! The four computable monoidal bases behind one interface.
//!
//! Every object and morphism carries its [`BaseTag`]; operations on mixed tags
//! fail with [`BaseError::TagMismatch`]. Encodings are fixed:
//!
//! * `finset`: `{0..n}`, tensor is the product with `(i, j) -> i * m + j`;
//! * `finset_ptd`: basepoint `0`, tensor is the smash product with the
//!   non-basepoint pairs in row-major order after the basepoint;
//! * `matq`: `Q^d`, morphisms are `cod × dom` matrices, tensor is Kronecker;
//! * `suplat`: finite lattices with bottom `0`, tensor as in [`suplat`].
//!
//! Internal homs of `finset` and `finset_ptd` list function tables
//! lexicographically, `matq` homs are matrices flattened row-major, and
//! `suplat` homs list join-preserving tables lexicographically. Both homs
//! (`hom_left`, right adjoint to `a ⊗ -`, and `hom_right`, right adjoint to
//! `- ⊗ a`) share one carrier; only the currying differs.

pub mod finset;
pub mod pointed;
pub mod rational;
pub mod suplat;

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use rational::Matrix;
pub use suplat::Lattice;

/// Cap on explicitly enumerated carriers (hom tables, tensor elements).
pub const ENUMERATION_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseTag {
    #[serde(rename = "finset")]
    FinSet,
    #[serde(rename = "finset_ptd")]
    Pointed,
    #[serde(rename = "matq")]
    MatQ,
    #[serde(rename = "suplat")]
    SupLat,
}

impl BaseTag {
    pub const ALL: [BaseTag; 4] = [BaseTag::FinSet, BaseTag::Pointed, BaseTag::MatQ, BaseTag::SupLat];

    pub fn name(self) -> &'static str {
        match self {
            BaseTag::FinSet => "finset",
            BaseTag::Pointed => "finset_ptd",
            BaseTag::MatQ => "matq",
            BaseTag::SupLat => "suplat",
        }
    }

    pub fn is_enumerable(self) -> bool {
        self != BaseTag::MatQ
    }
}

impl fmt::Display for BaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BaseError {
    #[error("base tag mismatch: {0} vs {1}")]
    TagMismatch(BaseTag, BaseTag),
    #[error("morphisms are not composable: {0} does not match {1}")]
    NotComposable(String, String),
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("no factorisation: {0}")]
    NoFactorisation(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("base {0} is not enumerable")]
    NotEnumerable(BaseTag),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseObject {
    FinSet(usize),
    Pointed(usize),
    MatQ(usize),
    SupLat(Arc<Lattice>),
}

impl BaseObject {
    pub fn finset(n: usize) -> Self {
        BaseObject::FinSet(n)
    }

    pub fn pointed(n: usize) -> Result<Self, BaseError> {
        if n == 0 {
            return Err(BaseError::InvalidObject("a pointed set has at least its basepoint".into()));
        }
        Ok(BaseObject::Pointed(n))
    }

    pub fn matq(d: usize) -> Self {
        BaseObject::MatQ(d)
    }

    pub fn suplat(l: Lattice) -> Self {
        BaseObject::SupLat(Arc::new(l))
    }

    pub fn tag(&self) -> BaseTag {
        match self {
            BaseObject::FinSet(_) => BaseTag::FinSet,
            BaseObject::Pointed(_) => BaseTag::Pointed,
            BaseObject::MatQ(_) => BaseTag::MatQ,
            BaseObject::SupLat(_) => BaseTag::SupLat,
        }
    }

    /// Cardinality, dimension, or element count.
    pub fn size(&self) -> usize {
        match self {
            BaseObject::FinSet(n) | BaseObject::Pointed(n) | BaseObject::MatQ(n) => *n,
            BaseObject::SupLat(l) => l.size(),
        }
    }

    pub fn lattice(&self) -> Option<&Arc<Lattice>> {
        match self {
            BaseObject::SupLat(l) => Some(l),
            _ => None,
        }
    }

    fn same_tag(&self, other: &BaseObject) -> Result<(), BaseError> {
        if self.tag() == other.tag() {
            Ok(())
        } else {
            Err(BaseError::TagMismatch(self.tag(), other.tag()))
        }
    }
}

impl fmt::Display for BaseObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.tag(), self.size())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Table(Vec<usize>),
    Matrix(Matrix),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseMorphism {
    dom: BaseObject,
    cod: BaseObject,
    body: Body,
}

impl BaseMorphism {
    fn raw(dom: BaseObject, cod: BaseObject, body: Body) -> Self {
        BaseMorphism { dom, cod, body }
    }

    pub fn from_table(dom: BaseObject, cod: BaseObject, table: Vec<usize>) -> Result<Self, BaseError> {
        dom.same_tag(&cod)?;
        let bad = |m: &str| Err(BaseError::InvalidMorphism(m.to_string()));
        if table.len() != dom.size() {
            return bad("table length differs from the domain size");
        }
        if table.iter().any(|&t| t >= cod.size()) {
            return bad("table entry out of range");
        }
        match &dom {
            BaseObject::FinSet(_) => {}
            BaseObject::Pointed(_) => {
                if table[0] != 0 {
                    return bad("pointed map must send the basepoint to the basepoint");
                }
            }
            BaseObject::MatQ(_) => return bad("matq morphisms are matrices"),
            BaseObject::SupLat(l) => {
                if !l.preserves_joins(&table, cod.lattice().expect("same tag")) {
                    return bad("map does not preserve joins");
                }
            }
        }
        Ok(Self::raw(dom, cod, Body::Table(table)))
    }

    pub fn from_matrix(dom: BaseObject, cod: BaseObject, m: Matrix) -> Result<Self, BaseError> {
        match (&dom, &cod) {
            (BaseObject::MatQ(c), BaseObject::MatQ(r)) if m.rows() == *r && m.cols() == *c => {
                Ok(Self::raw(dom, cod, Body::Matrix(m)))
            }
            (BaseObject::MatQ(_), BaseObject::MatQ(_)) => {
                Err(BaseError::InvalidMorphism("matrix shape differs from cod × dom".into()))
            }
            _ => Err(BaseError::InvalidMorphism("only matq morphisms are matrices".into())),
        }
    }

    pub fn identity(obj: &BaseObject) -> Self {
        let body = match obj {
            BaseObject::MatQ(d) => Body::Matrix(Matrix::identity(*d)),
            _ => Body::Table((0..obj.size()).collect()),
        };
        Self::raw(obj.clone(), obj.clone(), body)
    }

    /// The constant map to the bottom / basepoint / zero vector. Not defined
    /// for `finset`.
    pub fn zero(dom: &BaseObject, cod: &BaseObject) -> Result<Self, BaseError> {
        dom.same_tag(cod)?;
        let body = match cod {
            BaseObject::FinSet(_) => {
                return Err(BaseError::InvalidMorphism("finset has no zero morphisms".into()));
            }
            BaseObject::MatQ(r) => Body::Matrix(Matrix::zeros(*r, dom.size())),
            _ => Body::Table(vec![0; dom.size()]),
        };
        Ok(Self::raw(dom.clone(), cod.clone(), body))
    }

    pub fn dom(&self) -> &BaseObject {
        &self.dom
    }

    pub fn cod(&self) -> &BaseObject {
        &self.cod
    }

    pub fn tag(&self) -> BaseTag {
        self.dom.tag()
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn table(&self) -> Option<&[usize]> {
        match &self.body {
            Body::Table(t) => Some(t),
            Body::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&Matrix> {
        match &self.body {
            Body::Matrix(m) => Some(m),
            Body::Table(_) => None,
        }
    }

    fn tab(&self) -> &[usize] {
        self.table().expect("table-backed morphism")
    }

    fn mat(&self) -> &Matrix {
        self.matrix().expect("matrix-backed morphism")
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && *self == Self::identity(&self.dom)
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
        if f.cod != self.dom {
            return Err(BaseError::NotComposable(f.cod.to_string(), self.dom.to_string()));
        }
        let body = match (&self.body, &f.body) {
            (Body::Table(g), Body::Table(ft)) => Body::Table(finset::compose(g, ft)),
            (Body::Matrix(g), Body::Matrix(fm)) => Body::Matrix(g.mul(fm)),
            _ => unreachable!("equal objects share a tag"),
        };
        Ok(Self::raw(f.dom.clone(), self.cod.clone(), body))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
        g.after(self)
    }

    /// Value of a table-backed morphism at an element.
    pub fn apply(&self, x: usize) -> usize {
        self.tab()[x]
    }
}

/// Composes a chain of morphisms given in diagrammatic order.
pub fn compose_chain(chain: &[&BaseMorphism]) -> Result<BaseMorphism, BaseError> {
    let (first, rest) = chain.split_first().expect("non-empty chain");
    rest.iter().try_fold((*first).clone(), |acc, g| acc.then(g))
}

pub fn unit_obj(tag: BaseTag) -> BaseObject {
    match tag {
        BaseTag::FinSet => BaseObject::FinSet(1),
        BaseTag::Pointed => BaseObject::Pointed(2),
        BaseTag::MatQ => BaseObject::MatQ(1),
        BaseTag::SupLat => BaseObject::suplat(Lattice::chain(2)),
    }
}

pub fn tensor_obj(a: &BaseObject, b: &BaseObject) -> Result<BaseObject, BaseError> {
    a.same_tag(b)?;
    Ok(match (a, b) {
        (BaseObject::FinSet(n), BaseObject::FinSet(m)) => BaseObject::FinSet(n * m),
        (BaseObject::Pointed(n), BaseObject::Pointed(m)) => BaseObject::Pointed(pointed::smash_size(*n, *m)),
        (BaseObject::MatQ(n), BaseObject::MatQ(m)) => BaseObject::MatQ(n * m),
        (BaseObject::SupLat(x), BaseObject::SupLat(y)) => BaseObject::SupLat(suplat::tensor(x, y)?.lattice.clone()),
        _ => unreachable!(),
    })
}

/// Index of the element `(i, j)` of `a ⊗ b`, for the set-like bases.
pub fn pair_index(a: &BaseObject, b: &BaseObject, i: usize, j: usize) -> Option<usize> {
    match (a, b) {
        (BaseObject::FinSet(_), BaseObject::FinSet(m)) => Some(i * m + j),
        (BaseObject::Pointed(_), BaseObject::Pointed(m)) if i == 0 || j == 0 => Some(0),
        (BaseObject::Pointed(_), BaseObject::Pointed(m)) => Some(pointed::pair(i, j, *m)),
        _ => None,
    }
}

pub fn tensor_mor(f: &BaseMorphism, g: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    let dom = tensor_obj(&f.dom, &g.dom)?;
    let cod = tensor_obj(&f.cod, &g.cod)?;
    let body = match (&f.dom, &g.dom) {
        (BaseObject::FinSet(_), _) => Body::Table(finset::tensor(f.tab(), g.tab(), g.cod.size())),
        (BaseObject::Pointed(_), _) => Body::Table(pointed::tensor(f.tab(), g.tab(), g.cod.size())),
        (BaseObject::MatQ(_), _) => Body::Matrix(f.mat().kron(g.mat())),
        (BaseObject::SupLat(a), BaseObject::SupLat(b)) => {
            let src = suplat::tensor(a, b)?;
            let tgt = suplat::tensor(f.cod.lattice().unwrap(), g.cod.lattice().unwrap())?;
            let (ft, gt) = (f.tab(), g.tab());
            Body::Table(src.extend(&tgt.lattice, |x, y| tgt.generator(ft[x], gt[y])))
        }
        _ => unreachable!(),
    };
    Ok(BaseMorphism::raw(dom, cod, body))
}

fn check_tags(tag: BaseTag, objs: &[BaseObject]) -> Result<(), BaseError> {
    match objs.iter().find(|o| o.tag() != tag) {
        Some(o) => Err(BaseError::TagMismatch(tag, o.tag())),
        None => Ok(()),
    }
}

/// Coproduct with its injections, blocks in argument order.
pub fn coproduct(tag: BaseTag, objs: &[BaseObject]) -> Result<(BaseObject, Vec<BaseMorphism>), BaseError> {
    check_tags(tag, objs)?;
    match tag {
        BaseTag::FinSet => {
            let sum = BaseObject::FinSet(objs.iter().map(BaseObject::size).sum());
            let mut off = 0;
            let inj = objs
                .iter()
                .map(|o| {
                    let t = (off..off + o.size()).collect();
                    off += o.size();
                    BaseMorphism::raw(o.clone(), sum.clone(), Body::Table(t))
                })
                .collect();
            Ok((sum, inj))
        }
        BaseTag::Pointed => {
            let sum = BaseObject::Pointed(1 + objs.iter().map(|o| o.size() - 1).sum::<usize>());
            let mut off = 0;
            let inj = objs
                .iter()
                .map(|o| {
                    let t = (0..o.size()).map(|i| if i == 0 { 0 } else { off + i }).collect();
                    off += o.size() - 1;
                    BaseMorphism::raw(o.clone(), sum.clone(), Body::Table(t))
                })
                .collect();
            Ok((sum, inj))
        }
        BaseTag::MatQ => {
            let (sum, proj) = product(tag, objs)?;
            let inj = proj
                .iter()
                .map(|p| BaseMorphism::raw(p.cod.clone(), sum.clone(), Body::Matrix(p.mat().transpose())))
                .collect();
            Ok((sum, inj))
        }
        BaseTag::SupLat => {
            let factors: Vec<Arc<Lattice>> = objs.iter().map(|o| o.lattice().unwrap().clone()).collect();
            let sum = BaseObject::suplat(Lattice::product(&factors));
            let inj = (0..objs.len())
                .map(|k| {
                    let t = (0..factors[k].size())
                        .map(|x| {
                            let mut tup = vec![0; factors.len()];
                            tup[k] = x;
                            Lattice::tuple_index(&factors, &tup)
                        })
                        .collect();
                    BaseMorphism::raw(objs[k].clone(), sum.clone(), Body::Table(t))
                })
                .collect();
            Ok((sum, inj))
        }
    }
}

/// The map out of the coproduct of `objs` restricting to `maps[k]` on block `k`.
pub fn copair(tag: BaseTag, objs: &[BaseObject], maps: &[BaseMorphism], cod: &BaseObject) -> Result<BaseMorphism, BaseError> {
    check_tags(tag, objs)?;
    check_tags(tag, std::slice::from_ref(cod))?;
    if objs.len() != maps.len() {
        return Err(BaseError::InvalidMorphism("copairing arity mismatch".into()));
    }
    for (o, m) in objs.iter().zip(maps) {
        if &m.dom != o || &m.cod != cod {
            return Err(BaseError::NotComposable(m.dom.to_string(), o.to_string()));
        }
    }
    let (sum, _) = coproduct(tag, objs)?;
    let body = match tag {
        BaseTag::FinSet => Body::Table(maps.iter().flat_map(|m| m.tab().iter().copied()).collect()),
        BaseTag::Pointed => {
            let mut t = vec![0];
            for m in maps {
                t.extend_from_slice(&m.tab()[1..]);
            }
            Body::Table(t)
        }
        BaseTag::MatQ => {
            let blocks: Vec<Matrix> = maps.iter().map(|m| m.mat().clone()).collect();
            Body::Matrix(Matrix::hcat(&blocks, cod.size()))
        }
        BaseTag::SupLat => {
            let factors: Vec<Arc<Lattice>> = objs.iter().map(|o| o.lattice().unwrap().clone()).collect();
            let l = cod.lattice().unwrap();
            Body::Table(
                (0..sum.size())
                    .map(|i| {
                        let tup = Lattice::tuple_of(&factors, i);
                        l.join_all(tup.iter().zip(maps).map(|(&x, m)| m.tab()[x]))
                    })
                    .collect(),
            )
        }
    };
    Ok(BaseMorphism::raw(sum, cod.clone(), body))
}

/// Product with its projections, tuples row-major.
pub fn product(tag: BaseTag, objs: &[BaseObject]) -> Result<(BaseObject, Vec<BaseMorphism>), BaseError> {
    check_tags(tag, objs)?;
    match tag {
        BaseTag::FinSet | BaseTag::Pointed => {
            let sizes: Vec<usize> = objs.iter().map(BaseObject::size).collect();
            let n: usize = sizes.iter().product();
            let prod = if tag == BaseTag::FinSet { BaseObject::FinSet(n) } else { BaseObject::Pointed(n) };
            let proj = (0..objs.len())
                .map(|k| {
                    let stride: usize = sizes[k + 1..].iter().product();
                    let t = (0..n).map(|i| (i / stride) % sizes[k]).collect();
                    BaseMorphism::raw(prod.clone(), objs[k].clone(), Body::Table(t))
                })
                .collect();
            Ok((prod, proj))
        }
        BaseTag::MatQ => {
            let total: usize = objs.iter().map(BaseObject::size).sum();
            let prod = BaseObject::MatQ(total);
            let mut off = 0;
            let proj = objs
                .iter()
                .map(|o| {
                    let mut m = Matrix::zeros(o.size(), total);
                    for i in 0..o.size() {
                        m.set(i, off + i, One::one());
                    }
                    off += o.size();
                    BaseMorphism::raw(prod.clone(), o.clone(), Body::Matrix(m))
                })
                .collect();
            Ok((prod, proj))
        }
        BaseTag::SupLat => {
            let factors: Vec<Arc<Lattice>> = objs.iter().map(|o| o.lattice().unwrap().clone()).collect();
            let prod = BaseObject::suplat(Lattice::product(&factors));
            let proj = (0..objs.len())
                .map(|k| {
                    let t = (0..prod.size()).map(|i| Lattice::tuple_of(&factors, i)[k]).collect();
                    BaseMorphism::raw(prod.clone(), objs[k].clone(), Body::Table(t))
                })
                .collect();
            Ok((prod, proj))
        }
    }
}

/// The map into the product of `objs` with components `maps`.
pub fn tuple(tag: BaseTag, dom: &BaseObject, objs: &[BaseObject], maps: &[BaseMorphism]) -> Result<BaseMorphism, BaseError> {
    check_tags(tag, objs)?;
    check_tags(tag, std::slice::from_ref(dom))?;
    if objs.len() != maps.len() {
        return Err(BaseError::InvalidMorphism("tupling arity mismatch".into()));
    }
    for (o, m) in objs.iter().zip(maps) {
        if &m.cod != o || &m.dom != dom {
            return Err(BaseError::NotComposable(m.cod.to_string(), o.to_string()));
        }
    }
    let (prod, _) = product(tag, objs)?;
    let body = match tag {
        BaseTag::FinSet | BaseTag::Pointed => Body::Table(
            (0..dom.size())
                .map(|x| maps.iter().zip(objs).fold(0, |acc, (m, o)| acc * o.size() + m.tab()[x]))
                .collect(),
        ),
        BaseTag::MatQ => {
            let blocks: Vec<Matrix> = maps.iter().map(|m| m.mat().clone()).collect();
            Body::Matrix(Matrix::vcat(&blocks, dom.size()))
        }
        BaseTag::SupLat => {
            let factors: Vec<Arc<Lattice>> = objs.iter().map(|o| o.lattice().unwrap().clone()).collect();
            Body::Table(
                (0..dom.size())
                    .map(|x| {
                        let tup: Vec<usize> = maps.iter().map(|m| m.tab()[x]).collect();
                        Lattice::tuple_index(&factors, &tup)
                    })
                    .collect(),
            )
        }
    };
    Ok(BaseMorphism::raw(dom.clone(), prod, body))
}

fn check_parallel(f: &BaseMorphism, g: &BaseMorphism) -> Result<(), BaseError> {
    if f.dom != g.dom || f.cod != g.cod {
        Err(BaseError::NotParallel)
    } else {
        Ok(())
    }
}

/// Equalizer with its inclusion.
pub fn equalizer(f: &BaseMorphism, g: &BaseMorphism) -> Result<(BaseObject, BaseMorphism), BaseError> {
    check_parallel(f, g)?;
    match &f.dom {
        BaseObject::FinSet(_) | BaseObject::Pointed(_) | BaseObject::SupLat(_) => {
            let s = finset::equalizer(f.tab(), g.tab());
            let obj = match &f.dom {
                BaseObject::FinSet(_) => BaseObject::FinSet(s.len()),
                BaseObject::Pointed(_) => BaseObject::Pointed(s.len()),
                BaseObject::SupLat(l) => BaseObject::suplat(l.restrict(&s)?),
                _ => unreachable!(),
            };
            Ok((obj.clone(), BaseMorphism::raw(obj, f.dom.clone(), Body::Table(s))))
        }
        BaseObject::MatQ(_) => {
            let k = f.mat().sub(g.mat()).kernel_rows();
            let obj = BaseObject::MatQ(k.rows());
            Ok((obj.clone(), BaseMorphism::raw(obj, f.dom.clone(), Body::Matrix(k.transpose()))))
        }
    }
}

/// Coequalizer with its projection.
pub fn coequalizer(f: &BaseMorphism, g: &BaseMorphism) -> Result<(BaseObject, BaseMorphism), BaseError> {
    check_parallel(f, g)?;
    match &f.cod {
        BaseObject::FinSet(n) | BaseObject::Pointed(n) => {
            let (m, proj) = finset::coequalizer(f.tab(), g.tab(), *n);
            let obj = if f.tag() == BaseTag::FinSet { BaseObject::FinSet(m) } else { BaseObject::Pointed(m) };
            Ok((obj.clone(), BaseMorphism::raw(f.cod.clone(), obj, Body::Table(proj))))
        }
        BaseObject::MatQ(_) => {
            let d = f.mat().sub(g.mat());
            let p = d.transpose().kernel_rows();
            let obj = BaseObject::MatQ(p.rows());
            Ok((obj.clone(), BaseMorphism::raw(f.cod.clone(), obj, Body::Matrix(p))))
        }
        BaseObject::SupLat(l) => {
            let pairs = f.tab().iter().copied().zip(g.tab().iter().copied());
            let (q, proj) = l.quotient(pairs);
            let obj = BaseObject::suplat(q);
            Ok((obj.clone(), BaseMorphism::raw(f.cod.clone(), obj, Body::Table(proj))))
        }
    }
}

/// The `x` with `x ∘ q = h`, for `q` a coequalizer projection (or any epi
/// through which `h` factors).
pub fn factor_through_epi(q: &BaseMorphism, h: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    if q.dom != h.dom {
        return Err(BaseError::NotComposable(q.dom.to_string(), h.dom.to_string()));
    }
    match &q.body {
        Body::Table(qt) => {
            let x = finset::factor_through_epi(qt, q.cod.size(), h.tab())?;
            BaseMorphism::from_table(q.cod.clone(), h.cod.clone(), x)
        }
        Body::Matrix(qm) => {
            let xt = qm
                .transpose()
                .solve(&h.mat().transpose())
                .ok_or_else(|| BaseError::NoFactorisation("linear system is inconsistent".into()))?;
            Ok(BaseMorphism::raw(q.cod.clone(), h.cod.clone(), Body::Matrix(xt.transpose())))
        }
    }
}

/// The `x` with `e ∘ x = h`, for `e` an equalizer inclusion (or any mono
/// through which `h` factors).
pub fn factor_through_mono(e: &BaseMorphism, h: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    if e.cod != h.cod {
        return Err(BaseError::NotComposable(e.cod.to_string(), h.cod.to_string()));
    }
    match &e.body {
        Body::Table(et) => {
            let x = finset::factor_through_mono(et, e.cod.size(), h.tab())?;
            BaseMorphism::from_table(h.dom.clone(), e.dom.clone(), x)
        }
        Body::Matrix(em) => {
            let x = em
                .solve(h.mat())
                .ok_or_else(|| BaseError::NoFactorisation("linear system is inconsistent".into()))?;
            Ok(BaseMorphism::raw(h.dom.clone(), e.dom.clone(), Body::Matrix(x)))
        }
    }
}

/// Right adjoint of `a ⊗ -` evaluated at `b`.
pub fn hom_left(a: &BaseObject, b: &BaseObject) -> Result<BaseObject, BaseError> {
    a.same_tag(b)?;
    Ok(match (a, b) {
        (BaseObject::FinSet(n), BaseObject::FinSet(m)) => BaseObject::FinSet(finset::checked_pow(*m, *n)?),
        (BaseObject::Pointed(n), BaseObject::Pointed(m)) => BaseObject::Pointed(finset::checked_pow(*m, n - 1)?),
        (BaseObject::MatQ(n), BaseObject::MatQ(m)) => BaseObject::MatQ(n * m),
        (BaseObject::SupLat(x), BaseObject::SupLat(y)) => BaseObject::SupLat(suplat::hom(x, y)?.lattice.clone()),
        _ => unreachable!(),
    })
}

/// Right adjoint of `- ⊗ a` evaluated at `b`; same carrier as [`hom_left`].
pub fn hom_right(a: &BaseObject, b: &BaseObject) -> Result<BaseObject, BaseError> {
    hom_left(a, b)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    /// `a ⊗ x`
    Left,
    /// `x ⊗ a`
    Right,
}

fn curry(side: Side, a: &BaseObject, x: &BaseObject, f: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    let expected = match side {
        Side::Left => tensor_obj(a, x)?,
        Side::Right => tensor_obj(x, a)?,
    };
    if f.dom != expected {
        return Err(BaseError::NotComposable(f.dom.to_string(), expected.to_string()));
    }
    let b = &f.cod;
    let hom = hom_left(a, b)?;
    let (na, nx, nb) = (a.size(), x.size(), b.size());
    let body = match a {
        BaseObject::FinSet(_) => {
            let t = (0..nx)
                .map(|j| {
                    let row: Vec<usize> = (0..na)
                        .map(|i| f.tab()[if side == Side::Left { i * nx + j } else { j * na + i }])
                        .collect();
                    finset::encode_table(&row, nb)
                })
                .collect();
            Body::Table(t)
        }
        BaseObject::Pointed(_) => {
            let t = (0..nx)
                .map(|j| {
                    if j == 0 {
                        return 0;
                    }
                    let row: Vec<usize> = (1..na)
                        .map(|i| {
                            f.tab()[if side == Side::Left { pointed::pair(i, j, nx) } else { pointed::pair(j, i, na) }]
                        })
                        .collect();
                    finset::encode_table(&row, nb)
                })
                .collect();
            Body::Table(t)
        }
        BaseObject::MatQ(_) => {
            let fm = f.mat();
            let mut out = Matrix::zeros(na * nb, nx);
            for r in 0..nb {
                for c in 0..na {
                    for j in 0..nx {
                        let col = if side == Side::Left { c * nx + j } else { j * na + c };
                        out.set(r * na + c, j, fm.get(r, col).clone());
                    }
                }
            }
            Body::Matrix(out)
        }
        BaseObject::SupLat(al) => {
            let xl = x.lattice().unwrap();
            let h = suplat::hom(al, b.lattice().unwrap())?;
            let t = match side {
                Side::Left => suplat::tensor(al, xl)?,
                Side::Right => suplat::tensor(xl, al)?,
            };
            let table = (0..nx)
                .map(|j| {
                    let row: Vec<usize> = (0..na)
                        .map(|i| f.tab()[if side == Side::Left { t.generator(i, j) } else { t.generator(j, i) }])
                        .collect();
                    h.index_of(&row).expect("restriction of a join-preserving map")
                })
                .collect();
            Body::Table(table)
        }
    };
    Ok(BaseMorphism::raw(x.clone(), hom, body))
}

fn uncurry(side: Side, a: &BaseObject, b: &BaseObject, g: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    let hom = hom_left(a, b)?;
    if g.cod != hom {
        return Err(BaseError::NotComposable(g.cod.to_string(), hom.to_string()));
    }
    let x = &g.dom;
    let dom = match side {
        Side::Left => tensor_obj(a, x)?,
        Side::Right => tensor_obj(x, a)?,
    };
    let (na, nx, nb) = (a.size(), x.size(), b.size());
    let body = match a {
        BaseObject::FinSet(_) => {
            let mut t = vec![0; na * nx];
            for j in 0..nx {
                let row = finset::decode_table(g.tab()[j], na, nb);
                for i in 0..na {
                    t[if side == Side::Left { i * nx + j } else { j * na + i }] = row[i];
                }
            }
            Body::Table(t)
        }
        BaseObject::Pointed(_) => {
            let mut t = vec![0; dom.size()];
            for j in 1..nx {
                let row = finset::decode_table(g.tab()[j], na - 1, nb);
                for i in 1..na {
                    let k = if side == Side::Left { pointed::pair(i, j, nx) } else { pointed::pair(j, i, na) };
                    t[k] = row[i - 1];
                }
            }
            Body::Table(t)
        }
        BaseObject::MatQ(_) => {
            let gm = g.mat();
            let mut out = Matrix::zeros(nb, na * nx);
            for r in 0..nb {
                for c in 0..na {
                    for j in 0..nx {
                        let col = if side == Side::Left { c * nx + j } else { j * na + c };
                        out.set(r, col, gm.get(r * na + c, j).clone());
                    }
                }
            }
            Body::Matrix(out)
        }
        BaseObject::SupLat(al) => {
            let xl = x.lattice().unwrap();
            let bl = b.lattice().unwrap();
            let h = suplat::hom(al, bl)?;
            let gt = g.tab();
            let table = match side {
                Side::Left => suplat::tensor(al, xl)?.extend(bl, |i, j| h.maps[gt[j]][i]),
                Side::Right => suplat::tensor(xl, al)?.extend(bl, |j, i| h.maps[gt[j]][i]),
            };
            Body::Table(table)
        }
    };
    Ok(BaseMorphism::raw(dom, b.clone(), body))
}

/// `f : a ⊗ x → b` to its transpose `x → [a, b]`.
pub fn curry_left(a: &BaseObject, x: &BaseObject, f: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    curry(Side::Left, a, x, f)
}

/// `g : x → [a, b]` to `a ⊗ x → b`.
pub fn uncurry_left(a: &BaseObject, b: &BaseObject, g: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    uncurry(Side::Left, a, b, g)
}

/// `f : x ⊗ a → b` to its transpose `x → ⟨a, b⟩`.
pub fn curry_right(x: &BaseObject, a: &BaseObject, f: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    curry(Side::Right, a, x, f)
}

/// `g : x → ⟨a, b⟩` to `x ⊗ a → b`.
pub fn uncurry_right(a: &BaseObject, b: &BaseObject, g: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    uncurry(Side::Right, a, b, g)
}

/// `a ⊗ [a, b] → b`.
pub fn eval_left(a: &BaseObject, b: &BaseObject) -> Result<BaseMorphism, BaseError> {
    uncurry_left(a, b, &BaseMorphism::identity(&hom_left(a, b)?))
}

/// `⟨a, b⟩ ⊗ a → b`.
pub fn eval_right(a: &BaseObject, b: &BaseObject) -> Result<BaseMorphism, BaseError> {
    uncurry_right(a, b, &BaseMorphism::identity(&hom_right(a, b)?))
}

/// Two-sided inverse, when it exists.
pub fn is_iso(f: &BaseMorphism) -> Option<BaseMorphism> {
    match &f.body {
        Body::Table(t) => {
            let inv = finset::inverse(t, f.cod.size())?;
            if let (BaseObject::SupLat(a), BaseObject::SupLat(b)) = (&f.dom, &f.cod) {
                if !b.preserves_joins(&inv, a) {
                    return None;
                }
            }
            Some(BaseMorphism::raw(f.cod.clone(), f.dom.clone(), Body::Table(inv)))
        }
        Body::Matrix(m) => Some(BaseMorphism::raw(f.cod.clone(), f.dom.clone(), Body::Matrix(m.inverse()?))),
    }
}

/// `(a ⊗ b) ⊗ c → a ⊗ (b ⊗ c)`.
pub fn associator(a: &BaseObject, b: &BaseObject, c: &BaseObject) -> Result<BaseMorphism, BaseError> {
    let dom = tensor_obj(&tensor_obj(a, b)?, c)?;
    let cod = tensor_obj(a, &tensor_obj(b, c)?)?;
    match (a, b, c) {
        (BaseObject::SupLat(al), BaseObject::SupLat(bl), BaseObject::SupLat(cl)) => {
            let ab = suplat::tensor(al, bl)?;
            let ab_c = suplat::tensor(&ab.lattice, cl)?;
            let bc = suplat::tensor(bl, cl)?;
            let a_bc = suplat::tensor(al, &bc.lattice)?;
            let t = ab_c.extend(&a_bc.lattice, |s, z| {
                a_bc.lattice.join_all(ab.pairs_below(s).map(|(x, y)| a_bc.generator(x, bc.generator(y, z))))
            });
            Ok(BaseMorphism::raw(dom, cod, Body::Table(t)))
        }
        _ => {
            debug_assert_eq!(dom, cod);
            Ok(BaseMorphism::identity(&dom))
        }
    }
}

/// `a ⊗ (b ⊗ c) → (a ⊗ b) ⊗ c`.
pub fn associator_inv(a: &BaseObject, b: &BaseObject, c: &BaseObject) -> Result<BaseMorphism, BaseError> {
    let dom = tensor_obj(a, &tensor_obj(b, c)?)?;
    let cod = tensor_obj(&tensor_obj(a, b)?, c)?;
    match (a, b, c) {
        (BaseObject::SupLat(al), BaseObject::SupLat(bl), BaseObject::SupLat(cl)) => {
            let ab = suplat::tensor(al, bl)?;
            let ab_c = suplat::tensor(&ab.lattice, cl)?;
            let bc = suplat::tensor(bl, cl)?;
            let a_bc = suplat::tensor(al, &bc.lattice)?;
            let t = a_bc.extend(&ab_c.lattice, |x, u| {
                ab_c.lattice.join_all(bc.pairs_below(u).map(|(y, z)| ab_c.generator(ab.generator(x, y), z)))
            });
            Ok(BaseMorphism::raw(dom, cod, Body::Table(t)))
        }
        _ => Ok(BaseMorphism::identity(&dom)),
    }
}

/// `I ⊗ a → a`.
pub fn left_unitor(a: &BaseObject) -> Result<BaseMorphism, BaseError> {
    let i = unit_obj(a.tag());
    let dom = tensor_obj(&i, a)?;
    match a {
        BaseObject::SupLat(l) => {
            let t = suplat::tensor(i.lattice().unwrap(), l)?.extend(l, |u, x| if u == 1 { x } else { 0 });
            Ok(BaseMorphism::raw(dom, a.clone(), Body::Table(t)))
        }
        _ => Ok(BaseMorphism::identity(a)),
    }
}

/// `a → I ⊗ a`.
pub fn left_unitor_inv(a: &BaseObject) -> Result<BaseMorphism, BaseError> {
    let i = unit_obj(a.tag());
    let cod = tensor_obj(&i, a)?;
    match a {
        BaseObject::SupLat(l) => {
            let t = suplat::tensor(i.lattice().unwrap(), l)?;
            let table = (0..l.size()).map(|x| t.generator(1, x)).collect();
            Ok(BaseMorphism::raw(a.clone(), cod, Body::Table(table)))
        }
        _ => Ok(BaseMorphism::identity(a)),
    }
}

/// `a ⊗ I → a`.
pub fn right_unitor(a: &BaseObject) -> Result<BaseMorphism, BaseError> {
    let i = unit_obj(a.tag());
    let dom = tensor_obj(a, &i)?;
    match a {
        BaseObject::SupLat(l) => {
            let t = suplat::tensor(l, i.lattice().unwrap())?.extend(l, |x, u| if u == 1 { x } else { 0 });
            Ok(BaseMorphism::raw(dom, a.clone(), Body::Table(t)))
        }
        _ => Ok(BaseMorphism::identity(a)),
    }
}

/// `a → a ⊗ I`.
pub fn right_unitor_inv(a: &BaseObject) -> Result<BaseMorphism, BaseError> {
    let i = unit_obj(a.tag());
    let cod = tensor_obj(a, &i)?;
    match a {
        BaseObject::SupLat(l) => {
            let t = suplat::tensor(l, i.lattice().unwrap())?;
            let table = (0..l.size()).map(|x| t.generator(x, 1)).collect();
            Ok(BaseMorphism::raw(a.clone(), cod, Body::Table(table)))
        }
        _ => Ok(BaseMorphism::identity(a)),
    }
}

/// Symmetry `a ⊗ b → b ⊗ a`.
pub fn symmetry(a: &BaseObject, b: &BaseObject) -> Result<BaseMorphism, BaseError> {
    let dom = tensor_obj(a, b)?;
    let cod = tensor_obj(b, a)?;
    let (na, nb) = (a.size(), b.size());
    let body = match (a, b) {
        (BaseObject::FinSet(_), _) => Body::Table((0..na * nb).map(|k| (k % nb) * na + k / nb).collect()),
        (BaseObject::Pointed(_), _) => Body::Table(
            (0..dom.size())
                .map(|k| pointed::unpair(k, nb).map_or(0, |(i, j)| pointed::pair(j, i, na)))
                .collect(),
        ),
        (BaseObject::MatQ(_), _) => {
            let mut m = Matrix::zeros(na * nb, na * nb);
            for i in 0..na {
                for j in 0..nb {
                    m.set(j * na + i, i * nb + j, One::one());
                }
            }
            Body::Matrix(m)
        }
        (BaseObject::SupLat(al), BaseObject::SupLat(bl)) => {
            let ba = suplat::tensor(bl, al)?;
            Body::Table(suplat::tensor(al, bl)?.extend(&ba.lattice, |x, y| ba.generator(y, x)))
        }
        _ => unreachable!(),
    };
    Ok(BaseMorphism::raw(dom, cod, body))
}

/// Every morphism `a → b`, in lexicographic order of tables.
pub fn enumerate_morphisms(a: &BaseObject, b: &BaseObject, limit: usize) -> Result<Vec<BaseMorphism>, BaseError> {
    a.same_tag(b)?;
    let tables = match (a, b) {
        (BaseObject::FinSet(n), BaseObject::FinSet(m)) => finset::all_tables(*n, *m, limit)?,
        (BaseObject::Pointed(n), BaseObject::Pointed(m)) => finset::all_tables(n - 1, *m, limit)?
            .into_iter()
            .map(|t| std::iter::once(0).chain(t).collect())
            .collect(),
        (BaseObject::SupLat(x), BaseObject::SupLat(y)) => {
            let h = suplat::hom(x, y)?;
            if h.maps.len() > limit {
                return Err(BaseError::TooLarge(format!("{} maps exceed the limit {limit}", h.maps.len())));
            }
            h.maps.clone()
        }
        _ => return Err(BaseError::NotEnumerable(a.tag())),
    };
    Ok(tables.into_iter().map(|t| BaseMorphism::raw(a.clone(), b.clone(), Body::Table(t))).collect())
}

/// `x ⊗ (Σ_k blocks[k]) → cod` from its restrictions `x ⊗ blocks[k] → cod`.
pub fn out_of_sum_tensor_left(
    x: &BaseObject,
    blocks: &[BaseObject],
    family: &[BaseMorphism],
    cod: &BaseObject,
) -> Result<BaseMorphism, BaseError> {
    let curried = blocks
        .iter()
        .zip(family)
        .map(|(bk, f)| curry_left(x, bk, f))
        .collect::<Result<Vec<_>, _>>()?;
    let c = copair(x.tag(), blocks, &curried, &hom_left(x, cod)?)?;
    uncurry_left(x, cod, &c)
}

/// `(Σ_k blocks[k]) ⊗ x → cod` from its restrictions `blocks[k] ⊗ x → cod`.
pub fn out_of_sum_tensor_right(
    blocks: &[BaseObject],
    x: &BaseObject,
    family: &[BaseMorphism],
    cod: &BaseObject,
) -> Result<BaseMorphism, BaseError> {
    let curried = blocks
        .iter()
        .zip(family)
        .map(|(bk, f)| curry_right(bk, x, f))
        .collect::<Result<Vec<_>, _>>()?;
    let c = copair(x.tag(), blocks, &curried, &hom_right(x, cod)?)?;
    uncurry_right(x, cod, &c)
}

/// `x ⊗ Q → cod` from `h : x ⊗ W → cod`, where `q : W → Q` is a coequalizer
/// projection that `x ⊗ q` must factor `h` through.
pub fn out_of_quotient_tensor_left(x: &BaseObject, q: &BaseMorphism, h: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    let c = curry_left(x, q.dom(), h)?;
    let d = factor_through_epi(q, &c)?;
    uncurry_left(x, h.cod(), &d)
}

/// `Q ⊗ x → cod` from `h : W ⊗ x → cod`.
pub fn out_of_quotient_tensor_right(q: &BaseMorphism, x: &BaseObject, h: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
    let c = curry_right(q.dom(), x, h)?;
    let d = factor_through_epi(q, &c)?;
    uncurry_right(x, h.cod(), &d)
}



#[cfg(test)]
mod tests;
