//! A brute-force decision procedure for colimits over finite sets, straight
//! from the universal property: for every object `x` and every small module
//! `K : I ⇸ A`, composing with the cocone must be a bijection
//! `Hom(K, C(Z, x)) -> Hom(φ ⊗_A K, C(F, x))`.

use std::sync::Arc;

use crate::base::{self, BaseError, BaseMorphism, BaseTag};
use crate::enriched::{hom_profunctor, Profunctor, VCategory, VFunctor};
use crate::error::Result;
use crate::modcalc;

use super::enumerate::{count_profunctor_maps, finset_profunctors, profunctor_maps};
use super::ColimitDatum;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub holds: bool,
    pub modules_checked: usize,
    pub witness: Option<String>,
}

fn sizes(k: &Profunctor) -> Vec<usize> {
    (0..k.target().size()).map(|a| k.comp(a, 0).size()).collect()
}

/// Decides colimit-ness by enumerating all modules with components of at most
/// `max` elements. Exact once `max` bounds the homs of the apex domain, since
/// the representable modules are then included.
pub fn oracle_colimit(d: &ColimitDatum, max: usize) -> Result<OracleReport> {
    let c = d.ambient();
    if c.tag() != BaseTag::FinSet {
        return Err(BaseError::NotEnumerable(c.tag()).into());
    }
    let unit = Arc::new(VCategory::unit_category(BaseTag::FinSet));
    let a_cat = d.z.dom();
    let mut checked = 0;
    for x in 0..c.size() {
        let pt = VFunctor::point(c.clone(), x)?;
        let zx = Arc::new(hom_profunctor(&d.z, &pt)?);
        let l = Arc::new(hom_profunctor(&d.f, &pt)?);
        let mut witness = None;
        finset_profunctors(&unit, a_cat, max, |k| {
            checked += 1;
            let k = Arc::new(k);
            let maps = profunctor_maps(&k, &zx, base::ENUMERATION_LIMIT)?;
            let pres = modcalc::tensor_over(&d.phi, &k)?;
            let mut images = Vec::with_capacity(maps.len());
            for g in &maps {
                let img = pres.induce(&l, |b, _, a| {
                    let fb = d.f.obj(b);
                    let za = d.z.obj(a);
                    Ok(base::tensor_mor(d.a.comp(b, a), g.comp(a, 0))?.then(c.comp(fb, za, x))?)
                })?;
                images.push(img.components().to_vec());
            }
            let mut sorted: Vec<&Vec<BaseMorphism>> = images.iter().collect();
            sorted.sort_by_key(|v| v.iter().map(|m| m.table().map(<[usize]>::to_vec)).collect::<Vec<_>>());
            sorted.dedup();
            let injective = sorted.len() == images.len();
            let count = count_profunctor_maps(&pres.result, &l, maps.len() + 1)?;
            if !injective || count != maps.len() {
                witness = Some(format!(
                    "at {} with module sizes {:?}: {} maps into the apex, {} out of the weighted diagram{}",
                    c.label(x),
                    sizes(&k),
                    maps.len(),
                    if count > maps.len() { format!("more than {}", maps.len()) } else { count.to_string() },
                    if injective { "" } else { ", composition not injective" }
                ));
                return Ok(false);
            }
            Ok(true)
        })?;
        if witness.is_some() {
            return Ok(OracleReport { holds: false, modules_checked: checked, witness });
        }
    }
    Ok(OracleReport { holds: true, modules_checked: checked, witness: None })
}
