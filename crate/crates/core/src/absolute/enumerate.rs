//! Exhaustive enumeration of small profunctors and profunctor maps, by
//! backtracking over table entries with equational constraints.

use std::sync::Arc;

use crate::base::{self, BaseError, BaseMorphism, BaseObject, BaseTag};
use crate::enriched::{ProfMap, Profunctor, VCategory};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Term {
    Var(usize),
    /// `tables[t][value]`
    Map(usize, Box<Term>),
    /// the variable `tables[t][value]`
    At(usize, Box<Term>),
}

fn var(v: usize) -> Term {
    Term::Var(v)
}

/// Variables with finite domains, some fixed, and equations between terms.
#[derive(Debug, Default)]
struct Csp {
    domains: Vec<usize>,
    fixed: Vec<Option<usize>>,
    tables: Vec<Vec<usize>>,
    equations: Vec<(Term, Term)>,
}

impl Csp {
    fn add_var(&mut self, domain: usize) -> usize {
        self.domains.push(domain);
        self.fixed.push(None);
        self.domains.len() - 1
    }

    fn table(&mut self, t: Vec<usize>) -> usize {
        self.tables.push(t);
        self.tables.len() - 1
    }

    fn eval(&self, t: &Term, vals: &[Option<usize>]) -> Option<usize> {
        match t {
            Term::Var(v) => vals[*v],
            Term::Map(k, inner) => Some(self.tables[*k][self.eval(inner, vals)?]),
            Term::At(k, inner) => vals[self.tables[*k][self.eval(inner, vals)?]],
        }
    }

    fn watched(&self, t: &Term, out: &mut Vec<usize>) {
        match t {
            Term::Var(v) => out.push(*v),
            Term::Map(_, inner) => self.watched(inner, out),
            Term::At(k, inner) => {
                out.extend(&self.tables[*k]);
                self.watched(inner, out);
            }
        }
    }

    fn holds(&self, eq: usize, vals: &[Option<usize>]) -> bool {
        let (l, r) = &self.equations[eq];
        match (self.eval(l, vals), self.eval(r, vals)) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        }
    }

    /// Visits solutions in lexicographic order of the variables until `visit`
    /// returns `false`.
    fn solve(&self, mut visit: impl FnMut(&[usize]) -> bool) {
        let n = self.domains.len();
        let mut watch = vec![Vec::new(); n];
        for (i, (l, r)) in self.equations.iter().enumerate() {
            let mut vs = Vec::new();
            self.watched(l, &mut vs);
            self.watched(r, &mut vs);
            vs.sort_unstable();
            vs.dedup();
            for v in vs {
                watch[v].push(i);
            }
        }
        let mut vals = self.fixed.clone();
        if !(0..self.equations.len()).all(|i| self.holds(i, &vals)) {
            return;
        }
        let mut out = vec![0; n];
        self.search(0, &watch, &mut vals, &mut out, &mut visit);
    }

    fn search(
        &self,
        i: usize,
        watch: &[Vec<usize>],
        vals: &mut Vec<Option<usize>>,
        out: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == self.domains.len() {
            for (o, v) in out.iter_mut().zip(vals.iter()) {
                *o = v.expect("all assigned");
            }
            return visit(out);
        }
        if self.fixed[i].is_some() {
            return self.search(i + 1, watch, vals, out, visit);
        }
        for x in 0..self.domains[i] {
            vals[i] = Some(x);
            if watch[i].iter().all(|&e| self.holds(e, vals)) && !self.search(i + 1, watch, vals, out, visit) {
                vals[i] = None;
                return false;
            }
        }
        vals[i] = None;
        true
    }
}

fn not_enumerable(tag: BaseTag) -> Error {
    BaseError::NotEnumerable(tag).into()
}

fn pair(a: &BaseObject, b: &BaseObject, i: usize, j: usize) -> usize {
    base::pair_index(a, b, i, j).expect("set-like base")
}

fn table(m: &BaseMorphism) -> &[usize] {
    m.table().expect("set-like base")
}

/// Elements that can be moved by a map: all of them, or all but the basepoint.
fn movable(o: &BaseObject) -> std::ops::Range<usize> {
    match o {
        BaseObject::Pointed(n) => 1..*n,
        _ => 0..o.size(),
    }
}

/// Builds the constraint problem whose solutions are the profunctor maps
/// `m -> n`, one variable per element of each component.
fn map_problem(m: &Profunctor, n: &Profunctor) -> (Csp, Vec<usize>) {
    let (ac, bc) = (m.source(), m.target());
    let (na, nb) = (ac.size(), bc.size());
    let mut csp = Csp::default();
    let mut bases = Vec::with_capacity(na * nb);
    for b in 0..nb {
        for a in 0..na {
            bases.push(csp.domains.len());
            let (d, c) = (m.comp(b, a), n.comp(b, a));
            for e in 0..d.size() {
                let v = csp.add_var(c.size());
                if matches!(d, BaseObject::Pointed(_)) && e == 0 {
                    csp.fixed[v] = Some(0);
                }
            }
        }
    }
    let at = |b: usize, a: usize| bases[b * na + a];
    for b2 in 0..nb {
        for b in 0..nb {
            let h_obj = bc.hom(b2, b);
            for a in 0..na {
                let (lm, ln) = (table(m.left(b2, b, a)), table(n.left(b2, b, a)));
                for h in movable(h_obj) {
                    let t = (0..n.comp(b, a).size()).map(|v| ln[pair(h_obj, n.comp(b, a), h, v)]).collect();
                    let t = csp.table(t);
                    for e in movable(m.comp(b, a)) {
                        let lhs = var(at(b2, a) + lm[pair(h_obj, m.comp(b, a), h, e)]);
                        csp.equations.push((lhs, Term::Map(t, Box::new(var(at(b, a) + e)))));
                    }
                }
            }
        }
    }
    for b in 0..nb {
        for a in 0..na {
            for a2 in 0..na {
                let g_obj = ac.hom(a, a2);
                let (rm, rn) = (table(m.right(b, a, a2)), table(n.right(b, a, a2)));
                for g in movable(g_obj) {
                    let t = (0..n.comp(b, a).size()).map(|v| rn[pair(n.comp(b, a), g_obj, v, g)]).collect();
                    let t = csp.table(t);
                    for e in movable(m.comp(b, a)) {
                        let lhs = var(at(b, a2) + rm[pair(m.comp(b, a), g_obj, e, g)]);
                        csp.equations.push((lhs, Term::Map(t, Box::new(var(at(b, a) + e)))));
                    }
                }
            }
        }
    }
    (csp, bases)
}

fn assemble(m: &Arc<Profunctor>, n: &Arc<Profunctor>, bases: &[usize], sol: &[usize]) -> Result<ProfMap> {
    let na = m.source().size();
    ProfMap::from_fn(m.clone(), n.clone(), |b, a| {
        let start = bases[b * na + a];
        let t = sol[start..start + m.comp(b, a).size()].to_vec();
        Ok(BaseMorphism::from_table(m.comp(b, a).clone(), n.comp(b, a).clone(), t)?)
    })
}

/// All profunctor maps `m -> n`, lexicographically by component (in row-major
/// order) and then by table; fails beyond `limit` maps.
pub fn profunctor_maps(m: &Arc<Profunctor>, n: &Arc<Profunctor>, limit: usize) -> Result<Vec<ProfMap>> {
    match m.tag() {
        BaseTag::FinSet | BaseTag::Pointed => {
            let (csp, bases) = map_problem(m, n);
            let mut sols = Vec::new();
            let mut over = false;
            csp.solve(|s| {
                if sols.len() == limit {
                    over = true;
                    return false;
                }
                sols.push(s.to_vec());
                true
            });
            if over {
                return Err(BaseError::TooLarge(format!("more than {limit} profunctor maps")).into());
            }
            sols.iter().map(|s| assemble(m, n, &bases, s)).collect()
        }
        BaseTag::SupLat => {
            let na = m.source().size();
            let choices = (0..na * m.target().size())
                .map(|i| base::enumerate_morphisms(m.comp(i / na, i % na), n.comp(i / na, i % na), limit))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let mut out = Vec::new();
            let mut idx = vec![0; choices.len()];
            if choices.iter().any(|c| c.is_empty()) {
                return Ok(out);
            }
            let mut steps = 0usize;
            loop {
                steps += 1;
                if steps > base::ENUMERATION_LIMIT {
                    return Err(BaseError::TooLarge("too many component choices".into()).into());
                }
                let comps = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
                let f = ProfMap::new(m.clone(), n.clone(), comps)?;
                if f.check().holds() {
                    if out.len() == limit {
                        return Err(BaseError::TooLarge(format!("more than {limit} profunctor maps")).into());
                    }
                    out.push(f);
                }
                // odometer, last component fastest
                let mut k = idx.len();
                loop {
                    if k == 0 {
                        return Ok(out);
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        }
        tag => Err(not_enumerable(tag)),
    }
}

/// The number of profunctor maps `m -> n`, counting no further than `cap`.
pub fn count_profunctor_maps(m: &Profunctor, n: &Profunctor, cap: usize) -> Result<usize> {
    if !matches!(m.tag(), BaseTag::FinSet | BaseTag::Pointed) {
        return Err(not_enumerable(m.tag()));
    }
    let (csp, _) = map_problem(m, n);
    let mut count = 0;
    csp.solve(|_| {
        count += 1;
        count < cap
    });
    Ok(count)
}

/// Every profunctor `source ⇸ target` of finite sets whose components have
/// at most `max` elements, calling `visit` on each until it returns `false`.
pub fn finset_profunctors(
    source: &Arc<VCategory>,
    target: &Arc<VCategory>,
    max: usize,
    mut visit: impl FnMut(Profunctor) -> Result<bool>,
) -> Result<()> {
    if source.tag() != BaseTag::FinSet || target.tag() != BaseTag::FinSet {
        return Err(not_enumerable(source.tag()));
    }
    let (na, nb) = (source.size(), target.size());
    let cells = na * nb;
    let mut sizes = vec![0usize; cells];
    loop {
        if !sized_profunctors(source, target, &sizes, &mut visit)? {
            return Ok(());
        }
        let mut k = cells;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            sizes[k] += 1;
            if sizes[k] <= max {
                break;
            }
            sizes[k] = 0;
        }
    }
}

fn sized_profunctors(
    ac: &Arc<VCategory>,
    bc: &Arc<VCategory>,
    sizes: &[usize],
    visit: &mut impl FnMut(Profunctor) -> Result<bool>,
) -> Result<bool> {
    let (na, nb) = (ac.size(), bc.size());
    let s = |b: usize, a: usize| sizes[b * na + a];
    let hb = |x: usize, y: usize| bc.hom(x, y).size();
    let ha = |x: usize, y: usize| ac.hom(x, y).size();
    let mut csp = Csp::default();
    let mut left = vec![0; nb * nb * na];
    for b2 in 0..nb {
        for b in 0..nb {
            for a in 0..na {
                left[(b2 * nb + b) * na + a] = csp.domains.len();
                for _ in 0..hb(b2, b) * s(b, a) {
                    csp.add_var(s(b2, a));
                }
            }
        }
    }
    let mut right = vec![0; nb * na * na];
    for b in 0..nb {
        for a in 0..na {
            for a2 in 0..na {
                right[(b * na + a) * na + a2] = csp.domains.len();
                for _ in 0..s(b, a) * ha(a, a2) {
                    csp.add_var(s(b, a2));
                }
            }
        }
    }
    let l = |b2: usize, b: usize, a: usize, h: usize, m: usize| left[(b2 * nb + b) * na + a] + h * s(b, a) + m;
    let r = |b: usize, a: usize, a2: usize, m: usize, g: usize| right[(b * na + a) * na + a2] + m * ha(a, a2) + g;
    let mul = |cat: &VCategory, x: usize, y: usize, z: usize, f: usize, g: usize| {
        table(cat.comp(x, y, z))[f * cat.hom(y, z).size() + g]
    };
    for b in 0..nb {
        let id = table(bc.unit(b))[0];
        for a in 0..na {
            for m in 0..s(b, a) {
                csp.fixed[l(b, b, a, id, m)] = Some(m);
            }
        }
    }
    for a in 0..na {
        let id = table(ac.unit(a))[0];
        for b in 0..nb {
            for m in 0..s(b, a) {
                csp.fixed[r(b, a, a, m, id)] = Some(m);
            }
        }
    }
    for b3 in 0..nb {
        for b2 in 0..nb {
            for b in 0..nb {
                for a in 0..na {
                    for h1 in 0..hb(b3, b2) {
                        let t = csp.table((0..s(b2, a)).map(|v| l(b3, b2, a, h1, v)).collect());
                        for h2 in 0..hb(b2, b) {
                            let h = mul(bc, b3, b2, b, h1, h2);
                            for m in 0..s(b, a) {
                                let rhs = Term::At(t, Box::new(var(l(b2, b, a, h2, m))));
                                csp.equations.push((var(l(b3, b, a, h, m)), rhs));
                            }
                        }
                    }
                }
            }
        }
    }
    for b in 0..nb {
        for a in 0..na {
            for a2 in 0..na {
                for a3 in 0..na {
                    for g2 in 0..ha(a2, a3) {
                        let t = csp.table((0..s(b, a2)).map(|v| r(b, a2, a3, v, g2)).collect());
                        for g1 in 0..ha(a, a2) {
                            let g = mul(ac, a, a2, a3, g1, g2);
                            for m in 0..s(b, a) {
                                let rhs = Term::At(t, Box::new(var(r(b, a, a2, m, g1))));
                                csp.equations.push((var(r(b, a, a3, m, g)), rhs));
                            }
                        }
                    }
                }
            }
        }
    }
    for b2 in 0..nb {
        for b in 0..nb {
            for a in 0..na {
                for a2 in 0..na {
                    for g in 0..ha(a, a2) {
                        let t1 = csp.table((0..s(b2, a)).map(|v| r(b2, a, a2, v, g)).collect());
                        for h in 0..hb(b2, b) {
                            let t2 = csp.table((0..s(b, a2)).map(|v| l(b2, b, a2, h, v)).collect());
                            for m in 0..s(b, a) {
                                let lhs = Term::At(t1, Box::new(var(l(b2, b, a, h, m))));
                                let rhs = Term::At(t2, Box::new(var(r(b, a, a2, m, g))));
                                csp.equations.push((lhs, rhs));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut keep_going = true;
    let mut failure = None;
    csp.solve(|sol| {
        let built = Profunctor::from_fn(
            ac.clone(),
            bc.clone(),
            |b, a| Ok(BaseObject::FinSet(s(b, a))),
            |b2, b, a| {
                let start = l(b2, b, a, 0, 0);
                let t = sol[start..start + hb(b2, b) * s(b, a)].to_vec();
                let dom = BaseObject::FinSet(hb(b2, b) * s(b, a));
                Ok(BaseMorphism::from_table(dom, BaseObject::FinSet(s(b2, a)), t)?)
            },
            |b, a, a2| {
                let start = r(b, a, a2, 0, 0);
                let t = sol[start..start + s(b, a) * ha(a, a2)].to_vec();
                let dom = BaseObject::FinSet(s(b, a) * ha(a, a2));
                Ok(BaseMorphism::from_table(dom, BaseObject::FinSet(s(b, a2)), t)?)
            },
        );
        match built.and_then(|p| visit(p)) {
            Ok(go) => keep_going = go,
            Err(e) => {
                failure = Some(e);
                keep_going = false;
            }
        }
        keep_going
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(keep_going),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enriched::identity_profunctor;

    fn idempotent() -> Arc<VCategory> {
        Arc::new(VCategory::monoid(&[vec![0, 1], vec![1, 1]], 0).unwrap())
    }

    #[test]
    fn enumerated_profunctors_are_valid_and_complete() {
        let a = idempotent();
        let i = Arc::new(VCategory::unit_category(BaseTag::FinSet));
        let mut count = 0;
        finset_profunctors(&i, &a, 2, |p| {
            assert!(p.check().holds());
            count += 1;
            Ok(true)
        })
        .unwrap();
        // e acts by an idempotent: one action each on sizes 0 and 1, three on size 2
        assert_eq!(count, 5);
    }

    #[test]
    fn maps_agree_with_brute_force() {
        let a = idempotent();
        let id = Arc::new(identity_profunctor(&a).unwrap());
        let maps = profunctor_maps(&id, &id, 100).unwrap();
        // End(E) as a right E-set: determined by the image of 1, any element
        assert_eq!(maps.len(), 2);
        assert_eq!(count_profunctor_maps(&id, &id, 10).unwrap(), 2);
        assert!(maps.iter().all(|f| f.check().holds()));
        assert!(maps[0].comp(0, 0).table().unwrap() < maps[1].comp(0, 0).table().unwrap());
    }
}
