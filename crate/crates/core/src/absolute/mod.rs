//! Weighted colimits and limits, the two-squares criterion, and the passages
//! between colimiting cocones, limiting cones and square-satisfying pairs.

pub mod audit;
pub mod enumerate;
pub mod oracle;

use std::sync::Arc;

use crate::base::{self, BaseMorphism};
use crate::enriched::{hom_profunctor, identity_profunctor, same, ProfMap, Profunctor, Report, VCategory, VFunctor};
use crate::error::{shape, Error, Result};
use crate::modcalc::{self, tensor, AdjunctionData, Exhibition, QuotientPresentation};

pub use audit::{bijection_audit, AuditReport};
pub use oracle::{oracle_colimit, OracleReport};

/// A cocone `a : φ -> C(F, Z)` for `φ : A ⇸ B`, `F : B -> C`, `Z : A -> C`.
#[derive(Debug, Clone)]
pub struct ColimitDatum {
    pub phi: Arc<Profunctor>,
    pub f: VFunctor,
    pub z: VFunctor,
    pub a: ProfMap,
}

/// A cone `b : ψ -> C(Z, F)` for `ψ : B ⇸ A`, `F : B -> C`, `Z : A -> C`.
#[derive(Debug, Clone)]
pub struct LimitDatum {
    pub psi: Arc<Profunctor>,
    pub f: VFunctor,
    pub z: VFunctor,
    pub b: ProfMap,
}

/// An adjunction `φ ⊣ ψ` together with a cocone `a` and a cone `b`.
#[derive(Debug, Clone)]
pub struct SquaresDatum {
    pub adj: AdjunctionData,
    pub f: VFunctor,
    pub z: VFunctor,
    pub a: ProfMap,
    pub b: ProfMap,
}

fn check_functors(f: &VFunctor, z: &VFunctor) -> Result<()> {
    if !same(f.cod(), z.cod()) {
        return shape("diagram and apex must land in the same category");
    }
    Ok(())
}

impl ColimitDatum {
    pub fn new(phi: Arc<Profunctor>, f: VFunctor, z: VFunctor, a: Vec<BaseMorphism>) -> Result<Self> {
        check_functors(&f, &z)?;
        if !same(phi.target(), f.dom()) || !same(phi.source(), z.dom()) {
            return shape("weight must run from the apex domain to the diagram domain");
        }
        let cod = Arc::new(hom_profunctor(&f, &z)?);
        let a = ProfMap::new(phi.clone(), cod, a)?;
        Ok(ColimitDatum { phi, f, z, a })
    }

    pub fn ambient(&self) -> &Arc<VCategory> {
        self.f.cod()
    }

    /// The same cocone read in the opposite categories, as a cone.
    pub fn dual(&self) -> Result<LimitDatum> {
        let c_op = Arc::new(self.ambient().op()?);
        let (a_op, b_op) = (Arc::new(self.z.dom().op()?), Arc::new(self.f.dom().op()?));
        let f = self.f.op(b_op.clone(), c_op.clone())?;
        let z = self.z.op(a_op.clone(), c_op)?;
        let psi = Arc::new(self.phi.op(a_op, b_op)?);
        let comps = transposed_components(&self.a);
        LimitDatum::new(psi, f, z, comps)
    }
}

fn transposed_components(m: &ProfMap) -> Vec<BaseMorphism> {
    let (rows, cols) = (m.dom().target().size(), m.dom().source().size());
    let mut out = Vec::with_capacity(rows * cols);
    for c in 0..cols {
        for r in 0..rows {
            out.push(m.comp(r, c).clone());
        }
    }
    out
}

impl LimitDatum {
    pub fn new(psi: Arc<Profunctor>, f: VFunctor, z: VFunctor, b: Vec<BaseMorphism>) -> Result<Self> {
        check_functors(&f, &z)?;
        if !same(psi.source(), f.dom()) || !same(psi.target(), z.dom()) {
            return shape("weight must run from the diagram domain to the apex domain");
        }
        let cod = Arc::new(hom_profunctor(&z, &f)?);
        let b = ProfMap::new(psi.clone(), cod, b)?;
        Ok(LimitDatum { psi, f, z, b })
    }

    pub fn ambient(&self) -> &Arc<VCategory> {
        self.f.cod()
    }

    /// The same cone read in the opposite categories, as a cocone.
    pub fn dual(&self) -> Result<ColimitDatum> {
        let c_op = Arc::new(self.ambient().op()?);
        let (a_op, b_op) = (Arc::new(self.z.dom().op()?), Arc::new(self.f.dom().op()?));
        let f = self.f.op(b_op.clone(), c_op.clone())?;
        let z = self.z.op(a_op.clone(), c_op)?;
        let phi = Arc::new(self.psi.op(b_op, a_op)?);
        ColimitDatum::new(phi, f, z, transposed_components(&self.b))
    }
}

impl SquaresDatum {
    pub fn new(adj: AdjunctionData, f: VFunctor, z: VFunctor, a: Vec<BaseMorphism>, b: Vec<BaseMorphism>) -> Result<Self> {
        let col = ColimitDatum::new(adj.phi.clone(), f.clone(), z.clone(), a)?;
        let lim = LimitDatum::new(adj.psi.clone(), f.clone(), z.clone(), b)?;
        Ok(SquaresDatum { adj, f, z, a: col.a, b: lim.b })
    }

    pub fn colimit(&self) -> ColimitDatum {
        ColimitDatum { phi: self.adj.phi.clone(), f: self.f.clone(), z: self.z.clone(), a: self.a.clone() }
    }

    pub fn limit(&self) -> LimitDatum {
        LimitDatum { psi: self.adj.psi.clone(), f: self.f.clone(), z: self.z.clone(), b: self.b.clone() }
    }
}

/// `φ ⊗_A C(Z, x) -> C(F, x)` exhibits `C(Z, x)` as `[φ, C(F, x)]`.
fn colimit_probe(d: &ColimitDatum, x: usize) -> Result<Exhibition> {
    let c = d.ambient();
    let pt = VFunctor::point(c.clone(), x)?;
    let k = Arc::new(hom_profunctor(&d.z, &pt)?);
    let l = Arc::new(hom_profunctor(&d.f, &pt)?);
    let pres = modcalc::tensor_over(&d.phi, &k)?;
    let u = pres.induce(&l, |b, _, a| {
        let (fb, za) = (d.f.obj(b), d.z.obj(a));
        Ok(base::tensor_mor(d.a.comp(b, a), &BaseMorphism::identity(c.hom(za, x)))?.then(c.comp(fb, za, x))?)
    })?;
    let lifting = modcalc::lifting_hom_left(&d.phi, &l)?;
    modcalc::exhibits_as_left_hom(&lifting, &pres, &u)
}

/// `C(x, Z) ⊗_A ψ -> C(x, F)` exhibits `C(x, Z)` as `⟨ψ, C(x, F)⟩`.
fn limit_probe(d: &LimitDatum, x: usize) -> Result<Exhibition> {
    let c = d.ambient();
    let pt = VFunctor::point(c.clone(), x)?;
    let k = Arc::new(hom_profunctor(&pt, &d.z)?);
    let l = Arc::new(hom_profunctor(&pt, &d.f)?);
    let pres = modcalc::tensor_over(&k, &d.psi)?;
    let u = pres.induce(&l, |_, b, a| {
        let (fb, za) = (d.f.obj(b), d.z.obj(a));
        Ok(base::tensor_mor(&BaseMorphism::identity(c.hom(x, za)), d.b.comp(a, b))?.then(c.comp(x, za, fb))?)
    })?;
    let lifting = modcalc::lifting_hom_right(&d.psi, &l)?;
    modcalc::exhibits_as_right_hom(&lifting, &pres, &u)
}

/// Whether `a` exhibits `Z` as the `φ`-weighted colimit of `F`: for every
/// object `x`, the composite `μ ∘ (a ⊗ 1)` exhibits `C(Z, x)` as `[φ, C(F, x)]`.
pub fn check_colimit(d: &ColimitDatum) -> Result<Report> {
    let mut report = Report::default();
    report.extend("not a cocone", d.a.check());
    if !report.holds() {
        return Ok(report);
    }
    for x in 0..d.ambient().size() {
        for f in colimit_probe(d, x)?.failures {
            report.fail(format!("at {}: {f}", d.ambient().label(x)));
        }
    }
    Ok(report)
}

/// Whether `b` exhibits `Z` as the `ψ`-weighted limit of `F`.
pub fn check_limit(d: &LimitDatum) -> Result<Report> {
    let mut report = Report::default();
    report.extend("not a cone", d.b.check());
    if !report.holds() {
        return Ok(report);
    }
    for x in 0..d.ambient().size() {
        for f in limit_probe(d, x)?.failures {
            report.fail(format!("at {}: {f}", d.ambient().label(x)));
        }
    }
    Ok(report)
}

/// `μ ∘ (b ⊗_B a) ∘ η`, a map `A -> C(Z, Z)`.
fn left_square_composite(d: &SquaresDatum) -> Result<ProfMap> {
    let c = d.f.cod().clone();
    let zz = Arc::new(hom_profunctor(&d.z, &d.z)?);
    let fused = d.adj.psi_phi.induce(&zz, |a2, a, b| {
        let (za2, fb, za) = (d.z.obj(a2), d.f.obj(b), d.z.obj(a));
        Ok(base::tensor_mor(d.b.comp(a2, b), d.a.comp(b, a))?.then(c.comp(za2, fb, za))?)
    })?;
    d.adj.eta.then(&fused)
}

/// `μ ∘ (a ⊗_A b)`, a map `φ ⊗_A ψ -> C(F, F)`.
fn right_square_composite(d: &SquaresDatum) -> Result<ProfMap> {
    let c = d.f.cod().clone();
    let ff = Arc::new(hom_profunctor(&d.f, &d.f)?);
    d.adj.phi_psi.induce(&ff, |b2, b, a| {
        let (fb2, za, fb) = (d.f.obj(b2), d.z.obj(a), d.f.obj(b));
        Ok(base::tensor_mor(d.a.comp(b2, a), d.b.comp(a, b))?.then(c.comp(fb2, za, fb))?)
    })
}

fn compare(report: &mut Report, lhs: &ProfMap, rhs: &ProfMap, what: &str) {
    let m = lhs.dom();
    for r in 0..m.target().size() {
        for c in 0..m.source().size() {
            if lhs.comp(r, c) != rhs.comp(r, c) {
                report.fail(format!("{what} fails at ({}, {})", m.target().label(r), m.source().label(c)));
            }
        }
    }
}

/// The two squares: `μ ∘ (b ⊗ a) ∘ η` equals the action of `Z`, and
/// `μ ∘ (a ⊗ b)` equals `ε` followed by the action of `F`.
pub fn check_squares(d: &SquaresDatum) -> Result<Report> {
    require(modcalc::check_adjunction(&d.adj)?, "adjunction is invalid")?;
    squares_report(d)
}

pub(crate) fn squares_report(d: &SquaresDatum) -> Result<Report> {
    let mut report = Report::default();
    report.extend("not a cocone", d.a.check());
    report.extend("not a cone", d.b.check());
    if !report.holds() {
        return Ok(report);
    }
    let z_action = ProfMap::functor_action(&d.z)?;
    compare(&mut report, &left_square_composite(d)?, &z_action, "left square");
    let f_action = ProfMap::functor_action(&d.f)?;
    compare(&mut report, &right_square_composite(d)?, &d.adj.eps.then(&f_action)?, "right square");
    Ok(report)
}

/// The composite `φ ⊗_A C(Z, G) -> C(F, G)`, `μ ∘ (a ⊗ 1)`, for a functor
/// `G : X -> C`, with its presentation.
fn cocone_composite(d: &ColimitDatum, g: &VFunctor) -> Result<(QuotientPresentation, ProfMap)> {
    let c = d.ambient().clone();
    let k = Arc::new(hom_profunctor(&d.z, g)?);
    let l = Arc::new(hom_profunctor(&d.f, g)?);
    let pres = modcalc::tensor_over(&d.phi, &k)?;
    let u = pres.induce(&l, |b, x, a| {
        let (fb, za, gx) = (d.f.obj(b), d.z.obj(a), g.obj(x));
        Ok(base::tensor_mor(d.a.comp(b, a), &BaseMorphism::identity(c.hom(za, gx)))?.then(c.comp(fb, za, gx))?)
    })?;
    Ok((pres, u))
}

/// The composite `C(G, Z) ⊗_A ψ -> C(G, F)`, `μ ∘ (1 ⊗ b)`.
fn cone_composite(d: &LimitDatum, g: &VFunctor) -> Result<(QuotientPresentation, ProfMap)> {
    let c = d.ambient().clone();
    let k = Arc::new(hom_profunctor(g, &d.z)?);
    let l = Arc::new(hom_profunctor(g, &d.f)?);
    let pres = modcalc::tensor_over(&k, &d.psi)?;
    let u = pres.induce(&l, |x, b, a| {
        let (gx, za, fb) = (g.obj(x), d.z.obj(a), d.f.obj(b));
        Ok(base::tensor_mor(&BaseMorphism::identity(c.hom(gx, za)), d.b.comp(a, b))?.then(c.comp(gx, za, fb))?)
    })?;
    Ok((pres, u))
}

fn require(report: Report, what: &str) -> Result<()> {
    if report.holds() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what}: {}", report.failures[0])))
    }
}

/// The unique cone `b` making the right square commute, obtained by
/// factoring `F ∘ ε` through the composite `φ ⊗_A C(Z, F) -> C(F, F)`, which
/// exhibits `C(Z, F)` as `[φ, C(F, F)]`. The left square is then confirmed by
/// the uniqueness of factorisations through `φ ⊗_A C(Z, Z) -> C(F, Z)`.
pub fn derive_b_from_a(d: &ColimitDatum, adj: &AdjunctionData) -> Result<ProfMap> {
    require(check_colimit(d)?, "cocone is not colimiting")?;
    require(modcalc::check_adjunction(adj)?, "adjunction is invalid")?;
    if !same(&adj.phi, &d.phi) {
        return shape("adjunction must be for the cocone's weight");
    }
    let (pres3, u3) = cocone_composite(d, &d.f)?;
    let lh3 = modcalc::lifting_hom_left(&d.phi, u3.cod())?;
    let ex3 = modcalc::exhibits_as_left_hom(&lh3, &pres3, &u3)?;
    let f_eps = adj.eps.then(&ProfMap::functor_action(&d.f)?)?;
    let b = modcalc::factor_through_lifting(&lh3, &ex3, &adj.phi_psi, &f_eps)?;
    let b = b.retyped(adj.psi.clone(), Arc::new(hom_profunctor(&d.z, &d.f)?))?;
    let sq = SquaresDatum { adj: adj.clone(), f: d.f.clone(), z: d.z.clone(), a: d.a.clone(), b: b.clone() };

    // both candidates for the left square agree after whiskering with (5)
    let (pres5, u5) = cocone_composite(d, &d.z)?;
    let lh5 = modcalc::lifting_hom_left(&d.phi, u5.cod())?;
    let ex5 = modcalc::exhibits_as_left_hom(&lh5, &pres5, &u5)?;
    let id_a = Arc::new(identity_profunctor(d.z.dom())?);
    let phi_a = modcalc::tensor_over(&d.phi, &id_a)?;
    let whisker = |g: &ProfMap| -> Result<ProfMap> {
        let g = g.retyped(id_a.clone(), pres5.right.clone())?;
        tensor::map_tensor(&ProfMap::identity(&d.phi), &g, &phi_a, &pres5)?.then(&u5)
    };
    let lhs = whisker(&left_square_composite(&sq)?)?;
    let rhs = whisker(&ProfMap::functor_action(&d.z)?)?;
    if lhs != rhs || !ex5.holds() {
        return Err(Error::Invalid("left square does not follow from the right one".into()));
    }
    require(check_squares(&sq)?, "derived cone fails the squares")?;
    Ok(b)
}

/// The unique cocone `a` making the right square commute, dual to
/// [`derive_b_from_a`].
pub fn derive_a_from_b(d: &LimitDatum, adj: &AdjunctionData) -> Result<ProfMap> {
    require(check_limit(d)?, "cone is not limiting")?;
    require(modcalc::check_adjunction(adj)?, "adjunction is invalid")?;
    if !same(&adj.psi, &d.psi) {
        return shape("adjunction must be for the cone's weight");
    }
    let (pres, u) = cone_composite(d, &d.f)?;
    let lh = modcalc::lifting_hom_right(&d.psi, u.cod())?;
    let ex = modcalc::exhibits_as_right_hom(&lh, &pres, &u)?;
    let f_eps = adj.eps.then(&ProfMap::functor_action(&d.f)?)?;
    let a = modcalc::factor_through_lifting(&lh, &ex, &adj.phi_psi, &f_eps)?;
    let a = a.retyped(adj.phi.clone(), Arc::new(hom_profunctor(&d.f, &d.z)?))?;
    let sq = SquaresDatum { adj: adj.clone(), f: d.f.clone(), z: d.z.clone(), a: a.clone(), b: d.b.clone() };
    require(check_squares(&sq)?, "derived cocone fails the squares")?;
    Ok(a)
}

/// `f̄ = μ ∘ (b ⊗ f) ∘ α ∘ (η ⊗ 1) ∘ λ⁻¹ : K -> C(Z, G)` for
/// `f : φ ⊗_A K -> C(F, G)`, verified to satisfy `f = μ ∘ (a ⊗ f̄)`.
pub fn factor_through_colimit(d: &SquaresDatum, g: &VFunctor, k: &Arc<Profunctor>, f: &ProfMap) -> Result<ProfMap> {
    let c = d.f.cod().clone();
    let adj = &d.adj;
    let phi_k = modcalc::tensor_over(&adj.phi, k)?;
    let target = Arc::new(hom_profunctor(&d.f, g)?);
    if !same(f.dom(), &phi_k.result) || !same(f.cod(), &target) {
        return shape("map to factor must run from φ ⊗ K to C(F, G)");
    }
    let id_a = Arc::new(identity_profunctor(d.z.dom())?);
    let a_k = modcalc::tensor_over(&id_a, k)?;
    let psiphi_k = modcalc::tensor_over(&adj.psi_phi.result, k)?;
    let psi_phik = modcalc::tensor_over(&adj.psi, &phi_k.result)?;
    let assoc = tensor::associator(&adj.psi_phi, &psiphi_k, &phi_k, &psi_phik)?;
    let zg = Arc::new(hom_profunctor(&d.z, g)?);
    let fused = psi_phik.induce(&zg, |a, x, b| {
        let (za, fb, gx) = (d.z.obj(a), d.f.obj(b), g.obj(x));
        Ok(base::tensor_mor(d.b.comp(a, b), f.comp(b, x))?.then(c.comp(za, fb, gx))?)
    })?;
    let fbar = tensor::left_unitor(&a_k)?
        .backward
        .then(&modcalc::map_tensor(&adj.eta, &ProfMap::identity(k), &a_k, &psiphi_k)?)?
        .then(&assoc.forward)?
        .then(&fused)?;
    let back = phi_k.induce(&target, |b, x, a| {
        let (fb, za, gx) = (d.f.obj(b), d.z.obj(a), g.obj(x));
        Ok(base::tensor_mor(d.a.comp(b, a), fbar.comp(a, x))?.then(c.comp(fb, za, gx))?)
    })?;
    if &back != f {
        return Err(Error::Invalid("factorisation does not reproduce the map".into()));
    }
    Ok(fbar)
}

/// Confirms that `a` is colimiting using only the squares: for each object
/// `x`, factorisations through the cocone exist (checked on the universal map
/// out of `φ ⊗ [φ, C(F, x)]`) and are unique (the factorisation of
/// `μ ∘ (a ⊗ 1)` itself is the identity of `C(Z, x)`).
pub fn colimit_from_squares(d: &SquaresDatum) -> Result<Report> {
    require(check_squares(d)?, "squares do not commute")?;
    let col = d.colimit();
    let mut report = Report::default();
    for x in 0..col.ambient().size() {
        let label = col.ambient().label(x).to_string();
        let pt = VFunctor::point(col.ambient().clone(), x)?;
        let l = Arc::new(hom_profunctor(&d.f, &pt)?);
        let lh = modcalc::lifting_hom_left(&d.adj.phi, &l)?;
        let pres = modcalc::tensor_over(&d.adj.phi, &lh.result)?;
        let ev = lh.evaluation(&pres)?;
        if let Err(e) = factor_through_colimit(d, &pt, &lh.result, &ev) {
            report.fail(format!("at {label}: no factorisation of the universal map: {e}"));
        }
        let (pres_u, u) = cocone_composite(&col, &pt)?;
        match factor_through_colimit(d, &pt, &pres_u.right, &u) {
            Ok(fbar) if fbar == ProfMap::identity(&pres_u.right) => {}
            Ok(_) => report.fail(format!("at {label}: factorisation of the cocone composite is not the identity")),
            Err(e) => report.fail(format!("at {label}: {e}")),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
