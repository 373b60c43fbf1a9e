use std::sync::Arc;

use crate::base::{self, BaseMorphism};
use crate::enriched::{identity_profunctor, same, ProfMap, Profunctor, Report, VCategory};
use crate::error::{shape, Result};

use super::tensor::{self, tensor_over, QuotientPresentation};

/// `φ ⊣ ψ` for `φ : A ⇸ B` and `ψ : B ⇸ A`, with unit `η : A -> ψ ⊗_B φ` and
/// counit `ε : φ ⊗_A ψ -> B`.
#[derive(Debug, Clone)]
pub struct AdjunctionData {
    pub phi: Arc<Profunctor>,
    pub psi: Arc<Profunctor>,
    pub eta: ProfMap,
    pub eps: ProfMap,
    /// Presents `ψ ⊗_B φ`.
    pub psi_phi: QuotientPresentation,
    /// Presents `φ ⊗_A ψ`.
    pub phi_psi: QuotientPresentation,
}

impl AdjunctionData {
    /// Builds the data from the components of `η` and `ε`.
    pub fn new(
        phi: Arc<Profunctor>,
        psi: Arc<Profunctor>,
        eta: Vec<BaseMorphism>,
        eps: Vec<BaseMorphism>,
    ) -> Result<Self> {
        if !same(phi.source(), psi.target()) || !same(phi.target(), psi.source()) {
            return shape("adjoint profunctors must run in opposite directions");
        }
        let psi_phi = tensor_over(&psi, &phi)?;
        let phi_psi = tensor_over(&phi, &psi)?;
        let id_a = Arc::new(identity_profunctor(phi.source())?);
        let id_b = Arc::new(identity_profunctor(phi.target())?);
        let eta = ProfMap::new(id_a, psi_phi.result.clone(), eta)?;
        let eps = ProfMap::new(phi_psi.result.clone(), id_b, eps)?;
        Ok(AdjunctionData { phi, psi, eta, eps, psi_phi, phi_psi })
    }

    /// The formal dual `ψ^op ⊣ φ^op` between the opposite categories.
    pub fn dual(&self, a_op: &Arc<VCategory>, b_op: &Arc<VCategory>) -> Result<Self> {
        let phi = Arc::new(self.phi.op(a_op.clone(), b_op.clone())?);
        let psi = Arc::new(self.psi.op(b_op.clone(), a_op.clone())?);
        // (ψ ⊗_B φ)^op ≅ φ^op ⊗ ψ^op and (φ ⊗_A ψ)^op ≅ ψ^op ⊗ φ^op
        let new_psi_phi = tensor_over(&phi, &psi)?;
        let new_phi_psi = tensor_over(&psi, &phi)?;
        let to_new = swap_components(&self.psi_phi, &new_psi_phi)?;
        let from_new = swap_components(&new_phi_psi, &self.phi_psi)?;
        let na = a_op.size();
        let eta = (0..na * na)
            .map(|k| {
                let (x, y) = (k / na, k % na);
                Ok(self.eta.comp(y, x).then(&to_new[y * na + x])?)
            })
            .collect::<Result<Vec<_>>>()?;
        let nb = b_op.size();
        let eps = (0..nb * nb)
            .map(|k| {
                let (x, y) = (k / nb, k % nb);
                Ok(from_new[x * nb + y].then(self.eps.comp(y, x))?)
            })
            .collect::<Result<Vec<_>>>()?;
        AdjunctionData::new(psi, phi, eta, eps)
    }
}

/// The maps `(N ⊗ M)(c, a) -> (M^op ⊗ N^op)(a, c)` induced by the symmetry
/// on each block, listed by `(c, a)` row-major.
fn swap_components(src: &QuotientPresentation, dst: &QuotientPresentation) -> Result<Vec<BaseMorphism>> {
    let (n, m) = (&src.left, &src.right);
    let (nc, na) = (n.target().size(), m.source().size());
    let mut comps = Vec::with_capacity(nc * na);
    for c in 0..nc {
        for a in 0..na {
            comps.push(src.descend(c, a, dst.result.comp(a, c), |b| {
                Ok(base::symmetry(n.comp(c, b), m.comp(b, a))?.then(&dst.inject(a, c, b))?)
            })?);
        }
    }
    Ok(comps)
}

fn check_identity(report: &mut Report, map: &ProfMap, what: &str) {
    let m = map.dom();
    for b in 0..m.target().size() {
        for a in 0..m.source().size() {
            if !map.comp(b, a).is_identity() {
                report.fail(format!(
                    "{what} fails at ({}, {})",
                    m.target().label(b),
                    m.source().label(a)
                ));
            }
        }
    }
}

/// Both triangle identities, localised per component.
pub fn check_adjunction(adj: &AdjunctionData) -> Result<Report> {
    let (phi, psi) = (&adj.phi, &adj.psi);
    let id_a = Arc::new(identity_profunctor(phi.source())?);
    let id_b = Arc::new(identity_profunctor(phi.target())?);
    let id_phi = ProfMap::identity(phi);
    let id_psi = ProfMap::identity(psi);
    let mut report = Report::default();
    report.extend("unit", adj.eta.check());
    report.extend("counit", adj.eps.check());

    // φ -> φ ⊗ A -> φ ⊗ (ψ ⊗ φ) -> (φ ⊗ ψ) ⊗ φ -> B ⊗ φ -> φ
    let phi_a = tensor_over(phi, &id_a)?;
    let phi_psiphi = tensor_over(phi, &adj.psi_phi.result)?;
    let phipsi_phi = tensor_over(&adj.phi_psi.result, phi)?;
    let b_phi = tensor_over(&id_b, phi)?;
    let assoc = tensor::associator(&adj.phi_psi, &phipsi_phi, &adj.psi_phi, &phi_psiphi)?;
    let first = tensor::right_unitor(&phi_a)?
        .backward
        .then(&tensor::map_tensor(&id_phi, &adj.eta, &phi_a, &phi_psiphi)?)?
        .then(&assoc.backward)?
        .then(&tensor::map_tensor(&adj.eps, &id_phi, &phipsi_phi, &b_phi)?)?
        .then(&tensor::left_unitor(&b_phi)?.forward)?;
    check_identity(&mut report, &first, "first triangle identity");

    // ψ -> A ⊗ ψ -> (ψ ⊗ φ) ⊗ ψ -> ψ ⊗ (φ ⊗ ψ) -> ψ ⊗ B -> ψ
    let a_psi = tensor_over(&id_a, psi)?;
    let psiphi_psi = tensor_over(&adj.psi_phi.result, psi)?;
    let psi_phipsi = tensor_over(psi, &adj.phi_psi.result)?;
    let psi_b = tensor_over(psi, &id_b)?;
    let assoc = tensor::associator(&adj.psi_phi, &psiphi_psi, &adj.phi_psi, &psi_phipsi)?;
    let second = tensor::left_unitor(&a_psi)?
        .backward
        .then(&tensor::map_tensor(&adj.eta, &id_psi, &a_psi, &psiphi_psi)?)?
        .then(&assoc.forward)?
        .then(&tensor::map_tensor(&id_psi, &adj.eps, &psi_phipsi, &psi_b)?)?
        .then(&tensor::right_unitor(&psi_b)?.forward)?;
    check_identity(&mut report, &second, "second triangle identity");
    Ok(report)
}
