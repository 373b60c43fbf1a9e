//! Exhaustive comparison of the three sets the criterion puts in bijection:
//! colimiting cocones, limiting cones, and pairs satisfying both squares.

use std::sync::Arc;

use crate::base::{BaseError, ENUMERATION_LIMIT};
use crate::enriched::{hom_profunctor, ProfMap, VFunctor};
use crate::error::Result;
use crate::modcalc::{self, AdjunctionData};

use super::enumerate::profunctor_maps;
use super::{
    check_colimit, check_limit, derive_a_from_b, derive_b_from_a, require, squares_report, ColimitDatum, LimitDatum,
    SquaresDatum,
};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub cocones: usize,
    pub cones: usize,
    pub colimiting: usize,
    pub limiting: usize,
    pub square_pairs: usize,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.colimiting == self.limiting && self.limiting == self.square_pairs
    }
}

fn index_of(list: &[ProfMap], m: &ProfMap) -> Option<usize> {
    list.iter().position(|x| x.components() == m.components())
}

/// Enumerates every cocone `φ -> C(F, Z)` and cone `ψ -> C(Z, F)` in
/// lexicographic order and checks that the derivations between them are
/// mutually inverse bijections. All relevant hom objects must have at most
/// `max` elements.
pub fn bijection_audit(adj: &AdjunctionData, f: &VFunctor, z: &VFunctor, max: usize) -> Result<AuditReport> {
    let tag = f.cod().tag();
    if !tag.is_enumerable() {
        return Err(BaseError::NotEnumerable(tag).into());
    }
    require(modcalc::check_adjunction(adj)?, "adjunction is invalid")?;
    let fz = Arc::new(hom_profunctor(f, z)?);
    let zf = Arc::new(hom_profunctor(z, f)?);
    for p in [&adj.phi, &adj.psi, &fz, &zf] {
        for b in 0..p.target().size() {
            for a in 0..p.source().size() {
                if p.comp(b, a).size() > max {
                    return Err(BaseError::TooLarge(format!("a hom object has {} elements, above {max}", p.comp(b, a).size())).into());
                }
            }
        }
    }
    let cocones = profunctor_maps(&adj.phi, &fz, ENUMERATION_LIMIT)?;
    let cones = profunctor_maps(&adj.psi, &zf, ENUMERATION_LIMIT)?;
    let mut report = AuditReport { cocones: cocones.len(), cones: cones.len(), ..Default::default() };

    let col_datum = |a: &ProfMap| ColimitDatum { phi: adj.phi.clone(), f: f.clone(), z: z.clone(), a: a.clone() };
    let lim_datum = |b: &ProfMap| LimitDatum { psi: adj.psi.clone(), f: f.clone(), z: z.clone(), b: b.clone() };
    let mut colimiting = Vec::new();
    for a in &cocones {
        colimiting.push(check_colimit(&col_datum(a))?.holds());
    }
    let mut limiting = Vec::new();
    for b in &cones {
        limiting.push(check_limit(&lim_datum(b))?.holds());
    }
    report.colimiting = colimiting.iter().filter(|&&x| x).count();
    report.limiting = limiting.iter().filter(|&&x| x).count();

    let mut pairs = Vec::new();
    for (i, a) in cocones.iter().enumerate() {
        for (j, b) in cones.iter().enumerate() {
            let sq = SquaresDatum { adj: adj.clone(), f: f.clone(), z: z.clone(), a: a.clone(), b: b.clone() };
            if squares_report(&sq)?.holds() {
                pairs.push((i, j));
            }
        }
    }
    report.square_pairs = pairs.len();

    for (i, a) in cocones.iter().enumerate().filter(|(i, _)| colimiting[*i]) {
        match derive_b_from_a(&col_datum(a), adj) {
            Ok(b) => match index_of(&cones, &b) {
                Some(j) if !limiting[j] => report.failures.push(format!("cone derived from cocone #{i} is not limiting")),
                Some(j) if !pairs.contains(&(i, j)) => {
                    report.failures.push(format!("cocone #{i} and its derived cone fail the squares"))
                }
                Some(_) => {}
                None => report.failures.push(format!("cone derived from cocone #{i} was not enumerated")),
            },
            Err(e) => report.failures.push(format!("cocone #{i}: {e}")),
        }
    }
    for (j, b) in cones.iter().enumerate().filter(|(j, _)| limiting[*j]) {
        match derive_a_from_b(&lim_datum(b), adj) {
            Ok(a) => match index_of(&cocones, &a) {
                Some(i) if !pairs.contains(&(i, j)) => {
                    report.failures.push(format!("cone #{j} and its derived cocone fail the squares"))
                }
                Some(_) => {}
                None => report.failures.push(format!("cocone derived from cone #{j} was not enumerated")),
            },
            Err(e) => report.failures.push(format!("cone #{j}: {e}")),
        }
    }
    for &(i, j) in &pairs {
        if !colimiting[i] {
            report.failures.push(format!("cocone #{i} satisfies the squares with cone #{j} but is not colimiting"));
        }
        if !limiting[j] {
            report.failures.push(format!("cone #{j} satisfies the squares with cocone #{i} but is not limiting"));
        }
    }
    Ok(report)
}
