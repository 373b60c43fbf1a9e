//! Finite sup-lattices and join-preserving maps.
//!
//! A finite lattice is stored as its order table with element `0` the bottom.
//! The tensor product is presented from the free sup-lattice on the product
//! poset (its down-sets) modulo bilinearity: each congruence class has a
//! greatest down-set, namely the down-sets closed under joins taken in either
//! coordinate, so the classes are enumerated through that closure operator.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::finset::UnionFind;
use super::BaseError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    n: usize,
    leq: Vec<bool>,
    join: Vec<usize>,
}

impl Lattice {
    /// Validates a partial order with least element `0` in which every pair
    /// has a least upper bound.
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self, BaseError> {
        let n = leq.len();
        let bad = |m: String| Err(BaseError::InvalidObject(m));
        if n == 0 {
            return bad("a sup-lattice has at least one element".into());
        }
        if leq.iter().any(|r| r.len() != n) {
            return bad("order table is not square".into());
        }
        let flat: Vec<bool> = leq.into_iter().flatten().collect();
        let le = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return bad(format!("order is not reflexive at {a}"));
            }
            if !le(0, a) {
                return bad(format!("element 0 is not below {a}"));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return bad(format!("order is not antisymmetric at ({a}, {b})"));
                }
                for c in 0..n {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return bad(format!("order is not transitive at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let uppers: Vec<usize> = (0..n).filter(|&u| le(a, u) && le(b, u)).collect();
                match uppers.iter().find(|&&u| uppers.iter().all(|&v| le(u, v))) {
                    Some(&j) => join[a * n + b] = j,
                    None => return bad(format!("elements {a} and {b} have no join")),
                }
            }
        }
        Ok(Lattice { n, leq: flat, join })
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Lattice::new(leq).expect("chains are lattices")
    }

    fn from_order(n: usize, leq: Vec<bool>, join: Vec<usize>) -> Self {
        Lattice { n, leq, join }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(0, |acc, x| self.join(acc, x))
    }

    pub fn top(&self) -> usize {
        self.join_all(0..self.n)
    }

    pub fn order_rows(&self) -> Vec<Vec<bool>> {
        self.leq.chunks(self.n).map(<[bool]>::to_vec).collect()
    }

    /// Elements that are not the join of the elements strictly below them.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (1..self.n)
            .filter(|&x| {
                let below = self.join_all((0..self.n).filter(|&y| y != x && self.leq(y, x)));
                below != x
            })
            .collect()
    }

    pub fn preserves_joins(&self, table: &[usize], cod: &Lattice) -> bool {
        if table.len() != self.n || table.first() != Some(&0) {
            return false;
        }
        (0..self.n).all(|a| (0..self.n).all(|b| table[self.join(a, b)] == cod.join(table[a], table[b])))
    }

    /// Cartesian product, tuples ordered row-major (first factor most significant).
    pub fn product(factors: &[Arc<Lattice>]) -> Lattice {
        let sizes: Vec<usize> = factors.iter().map(|l| l.n).collect();
        let n: usize = sizes.iter().product();
        let decode = |mut i: usize| {
            let mut out = vec![0; sizes.len()];
            for k in (0..sizes.len()).rev() {
                out[k] = i % sizes[k];
                i /= sizes[k];
            }
            out
        };
        let encode = |t: &[usize]| t.iter().zip(&sizes).fold(0, |acc, (&x, &s)| acc * s + x);
        let tuples: Vec<Vec<usize>> = (0..n).map(decode).collect();
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = factors.iter().enumerate().all(|(k, l)| l.leq(tuples[a][k], tuples[b][k]));
                let j: Vec<usize> =
                    factors.iter().enumerate().map(|(k, l)| l.join(tuples[a][k], tuples[b][k])).collect();
                join[a * n + b] = encode(&j);
            }
        }
        Lattice::from_order(n, leq, join)
    }

    pub fn tuple_index(factors: &[Arc<Lattice>], t: &[usize]) -> usize {
        t.iter().zip(factors).fold(0, |acc, (&x, l)| acc * l.n + x)
    }

    pub fn tuple_of(factors: &[Arc<Lattice>], mut i: usize) -> Vec<usize> {
        let mut out = vec![0; factors.len()];
        for k in (0..factors.len()).rev() {
            out[k] = i % factors[k].n;
            i /= factors[k].n;
        }
        out
    }

    /// Sub-lattice on the listed elements (must be closed under joins and
    /// contain `0`); returns it with its elements in the given order.
    pub fn restrict(&self, elems: &[usize]) -> Result<Lattice, BaseError> {
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        if elems.first() != Some(&0) {
            return Err(BaseError::InvalidObject("sub-lattice must start with the bottom".into()));
        }
        let m = elems.len();
        let mut leq = vec![false; m * m];
        let mut join = vec![0; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                leq[i * m + j] = self.leq(a, b);
                join[i * m + j] = *pos
                    .get(&self.join(a, b))
                    .ok_or_else(|| BaseError::InvalidObject("subset is not closed under joins".into()))?;
            }
        }
        Ok(Lattice::from_order(m, leq, join))
    }

    /// Quotient by the least join-congruence identifying each given pair.
    pub fn quotient(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> (Lattice, Vec<usize>) {
        let n = self.n;
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in (a + 1)..n {
                    if uf.find(a) != uf.find(b) {
                        continue;
                    }
                    for z in 0..n {
                        changed |= uf.union(self.join(a, z), self.join(b, z));
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let (m, class) = uf.classes();
        let mut rep = vec![usize::MAX; m];
        for x in (0..n).rev() {
            rep[class[x]] = x;
        }
        let mut leq = vec![false; m * m];
        let mut join = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                let jn = class[self.join(rep[i], rep[j])];
                join[i * m + j] = jn;
                leq[i * m + j] = jn == j;
            }
        }
        (Lattice::from_order(m, leq, join), class)
    }
}

type Bits = Vec<u64>;

fn bit_get(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_or(a: &mut Bits, b: &Bits) {
    for (x, y) in a.iter_mut().zip(b) {
        *x |= *y;
    }
}

fn bit_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn bit_count(a: &Bits) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

/// Presented tensor product of two finite sup-lattices.
#[derive(Debug)]
pub struct SupTensor {
    pub left: Arc<Lattice>,
    pub right: Arc<Lattice>,
    pub lattice: Arc<Lattice>,
    sets: Vec<Bits>,
    generators: Vec<usize>,
}

impl SupTensor {
    fn build(left: Arc<Lattice>, right: Arc<Lattice>) -> Result<SupTensor, BaseError> {
        let (na, nb) = (left.n, right.n);
        let m = na * nb;
        let words = m.div_ceil(64).max(1);
        let empty: Bits = vec![0; words];
        let mut down: Vec<Bits> = Vec::with_capacity(m);
        for x in 0..na {
            for y in 0..nb {
                let mut d = empty.clone();
                for x2 in 0..na {
                    for y2 in 0..nb {
                        if left.leq(x2, x) && right.leq(y2, y) {
                            bit_set(&mut d, x2 * nb + y2);
                        }
                    }
                }
                down.push(d);
            }
        }
        let closure = |seed: &Bits| -> Bits {
            let mut s = seed.clone();
            for x in 0..na {
                bit_or(&mut s, &down[x * nb]);
            }
            for y in 0..nb {
                bit_or(&mut s, &down[y]);
            }
            loop {
                let before = s.clone();
                for y in 0..nb {
                    let xs = (0..na).filter(|&x| bit_get(&s, x * nb + y));
                    let top = left.join_all(xs);
                    bit_or(&mut s, &down[top * nb + y]);
                }
                for x in 0..na {
                    let ys = (0..nb).filter(|&y| bit_get(&s, x * nb + y));
                    let top = right.join_all(ys);
                    bit_or(&mut s, &down[x * nb + top]);
                }
                if s == before {
                    return s;
                }
            }
        };
        let bottom = closure(&empty);
        let gen_sets: Vec<Bits> = (0..m).map(|i| closure(&down[i])).collect();
        let mut distinct_gens: Vec<Bits> = gen_sets.clone();
        distinct_gens.sort();
        distinct_gens.dedup();

        let mut seen: HashMap<Bits, ()> = HashMap::new();
        let mut all = vec![bottom.clone()];
        seen.insert(bottom, ());
        let mut head = 0;
        while head < all.len() {
            let s = all[head].clone();
            head += 1;
            for g in &distinct_gens {
                if bit_subset(g, &s) {
                    continue;
                }
                let mut u = s.clone();
                bit_or(&mut u, g);
                let c = closure(&u);
                if seen.insert(c.clone(), ()).is_none() {
                    all.push(c);
                    if all.len() > super::ENUMERATION_LIMIT {
                        return Err(BaseError::TooLarge("sup-lattice tensor is too large".into()));
                    }
                }
            }
        }
        all.sort_by(|a, b| bit_count(a).cmp(&bit_count(b)).then_with(|| a.cmp(b)));
        let index: HashMap<&Bits, usize> = all.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let n = all.len();
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = bit_subset(&all[i], &all[j]);
            }
        }
        for i in 0..n {
            for j in i..n {
                let k = if leq[i * n + j] {
                    j
                } else if leq[j * n + i] {
                    i
                } else {
                    let mut u = all[i].clone();
                    bit_or(&mut u, &all[j]);
                    index[&closure(&u)]
                };
                join[i * n + j] = k;
                join[j * n + i] = k;
            }
        }
        let generators = gen_sets.iter().map(|s| index[s]).collect();
        let lattice = Arc::new(Lattice::from_order(n, leq, join));
        Ok(SupTensor { left, right, lattice, sets: all, generators })
    }

    /// The element `x ⊗ y`.
    pub fn generator(&self, x: usize, y: usize) -> usize {
        self.generators[x * self.right.n + y]
    }

    /// Pairs `(x, y)` lying under element `t`.
    pub fn pairs_below(&self, t: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nb = self.right.n;
        let set = &self.sets[t];
        (0..self.left.n * nb).filter(move |&i| bit_get(set, i)).map(move |i| (i / nb, i % nb))
    }

    /// Linear extension of a map on pure tensors; `h` must be join-preserving
    /// in each argument.
    pub fn extend(&self, cod: &Lattice, h: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        (0..self.lattice.n).map(|t| cod.join_all(self.pairs_below(t).map(|(x, y)| h(x, y)))).collect()
    }
}

/// All join-preserving maps between two lattices, ordered lexicographically,
/// as a lattice under the pointwise order.
#[derive(Debug)]
pub struct SupHom {
    pub dom: Arc<Lattice>,
    pub cod: Arc<Lattice>,
    pub maps: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    pub lattice: Arc<Lattice>,
}

impl SupHom {
    fn build(dom: Arc<Lattice>, cod: Arc<Lattice>) -> Result<SupHom, BaseError> {
        let ji = dom.join_irreducibles();
        let mut maps = Vec::new();
        let mut values = vec![0; ji.len()];
        fn go(
            k: usize,
            ji: &[usize],
            values: &mut Vec<usize>,
            dom: &Lattice,
            cod: &Lattice,
            out: &mut Vec<Vec<usize>>,
        ) -> Result<(), BaseError> {
            if k == ji.len() {
                let table: Vec<usize> = (0..dom.n)
                    .map(|x| cod.join_all(ji.iter().zip(values.iter()).filter(|(&j, _)| dom.leq(j, x)).map(|(_, &v)| v)))
                    .collect();
                if dom.preserves_joins(&table, cod) {
                    out.push(table);
                    if out.len() > super::ENUMERATION_LIMIT {
                        return Err(BaseError::TooLarge("too many join-preserving maps".into()));
                    }
                }
                return Ok(());
            }
            for v in 0..cod.n {
                let monotone = (0..k).all(|i| {
                    (!dom.leq(ji[i], ji[k]) || cod.leq(values[i], v)) && (!dom.leq(ji[k], ji[i]) || cod.leq(v, values[i]))
                });
                if monotone {
                    values[k] = v;
                    go(k + 1, ji, values, dom, cod, out)?;
                }
            }
            Ok(())
        }
        go(0, &ji, &mut values, &dom, &cod, &mut maps)?;
        maps.sort();
        let index: HashMap<Vec<usize>, usize> = maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = maps.len();
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = (0..dom.n).all(|x| cod.leq(maps[i][x], maps[j][x]));
                let pw: Vec<usize> = (0..dom.n).map(|x| cod.join(maps[i][x], maps[j][x])).collect();
                join[i * n + j] = index[&pw];
            }
        }
        let lattice = Arc::new(Lattice::from_order(n, leq, join));
        Ok(SupHom { dom, cod, maps, index, lattice })
    }

    pub fn index_of(&self, table: &[usize]) -> Option<usize> {
        self.index.get(table).copied()
    }
}

type PairKey = (Arc<Lattice>, Arc<Lattice>);

fn tensor_cache() -> &'static Mutex<HashMap<PairKey, Arc<SupTensor>>> {
    static CACHE: OnceLock<Mutex<HashMap<PairKey, Arc<SupTensor>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn hom_cache() -> &'static Mutex<HashMap<PairKey, Arc<SupHom>>> {
    static CACHE: OnceLock<Mutex<HashMap<PairKey, Arc<SupHom>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub fn tensor(a: &Arc<Lattice>, b: &Arc<Lattice>) -> Result<Arc<SupTensor>, BaseError> {
    let key = (a.clone(), b.clone());
    if let Some(t) = tensor_cache().lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(SupTensor::build(a.clone(), b.clone())?);
    tensor_cache().lock().unwrap().insert(key, t.clone());
    Ok(t)
}

pub fn hom(a: &Arc<Lattice>, b: &Arc<Lattice>) -> Result<Arc<SupHom>, BaseError> {
    let key = (a.clone(), b.clone());
    if let Some(h) = hom_cache().lock().unwrap().get(&key) {
        return Ok(h.clone());
    }
    let h = Arc::new(SupHom::build(a.clone(), b.clone())?);
    hom_cache().lock().unwrap().insert(key, h.clone());
    Ok(h)
}

/// Brute-force count of maps `a × b → c` that preserve joins in each argument
/// separately (including the empty join).
pub fn count_bimorphisms(a: &Lattice, b: &Lattice, c: &Lattice) -> usize {
    let mut table = vec![0usize; a.n * b.n];
    let mut count = 0;
    fn ok_partial(t: &[usize], upto: usize, a: &Lattice, b: &Lattice, c: &Lattice) -> bool {
        let nb = b.n;
        let known = |x: usize, y: usize| x * nb + y < upto;
        for x in 0..a.n {
            for y in 0..nb {
                if !known(x, y) {
                    continue;
                }
                let v = t[x * nb + y];
                if (x == 0 || y == 0) && v != 0 {
                    return false;
                }
                for x2 in 0..a.n {
                    let j = a.join(x, x2);
                    if known(x2, y) && known(j, y) && t[j * nb + y] != c.join(v, t[x2 * nb + y]) {
                        return false;
                    }
                }
                for y2 in 0..nb {
                    let j = b.join(y, y2);
                    if known(x, y2) && known(x, j) && t[x * nb + j] != c.join(v, t[x * nb + y2]) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(k: usize, t: &mut Vec<usize>, a: &Lattice, b: &Lattice, c: &Lattice, count: &mut usize) {
        if k == t.len() {
            *count += 1;
            return;
        }
        for v in 0..c.n {
            t[k] = v;
            if ok_partial(t, k + 1, a, b, c) {
                go(k + 1, t, a, b, c, count);
            }
        }
    }
    go(0, &mut table, a, b, c, &mut count);
    count
}

/// All lattices with at most `max` elements up to relabelling, each with
/// bottom `0` and the remaining elements in a linear extension of the order.
pub fn small_lattices(max: usize) -> Vec<Lattice> {
    let mut out = Vec::new();
    for n in 1..=max {
        // free relation bits: pairs (a, b) with 0 < a < b, order respecting labels
        let pairs: Vec<(usize, usize)> = (1..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
        let mut found: Vec<Lattice> = Vec::new();
        for mask in 0u64..(1 << pairs.len()) {
            let mut leq = vec![vec![false; n]; n];
            for (a, row) in leq.iter_mut().enumerate() {
                row[a] = true;
                row[0] = a == 0;
            }
            for b in 0..n {
                leq[0][b] = true;
            }
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    leq[a][b] = true;
                }
            }
            let Ok(l) = Lattice::new(leq) else { continue };
            if !found.iter().any(|f| isomorphic(f, &l)) {
                found.push(l);
            }
        }
        out.extend(found);
    }
    out
}

fn isomorphic(a: &Lattice, b: &Lattice) -> bool {
    if a.n != b.n {
        return false;
    }
    let n = a.n;
    let mut perm: Vec<usize> = (0..n).collect();
    fn next_perm(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }
    loop {
        if (0..n).all(|x| (0..n).all(|y| a.leq(x, y) == b.leq(perm[x], perm[y]))) {
            return true;
        }
        if !next_perm(&mut perm) {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Lattice {
        Lattice::product(&[Arc::new(Lattice::chain(2)), Arc::new(Lattice::chain(2))])
    }

    #[test]
    fn rejects_non_lattices() {
        // two incomparable maximal elements: no join
        let leq = vec![vec![true, true, true], vec![false, true, false], vec![false, false, true]];
        assert!(Lattice::new(leq).is_err());
        let not_bottom = vec![vec![true, false], vec![true, true]];
        assert!(Lattice::new(not_bottom).is_err());
    }

    #[test]
    fn unit_tensor_is_identity_sized() {
        let two = Arc::new(Lattice::chain(2));
        for l in small_lattices(4) {
            let l = Arc::new(l);
            assert_eq!(tensor(&two, &l).unwrap().lattice.size(), l.size());
            assert_eq!(tensor(&l, &two).unwrap().lattice.size(), l.size());
        }
    }

    #[test]
    fn boolean_tensor_multiplies_atoms() {
        let d = Arc::new(diamond());
        // 2^2 ⊗ 2^2 = 2^4
        assert_eq!(tensor(&d, &d).unwrap().lattice.size(), 16);
    }

    #[test]
    fn small_lattice_census() {
        // sizes 1, 2, 3 have one lattice each; size 4 has the chain and the diamond
        assert_eq!(small_lattices(4).len(), 5);
    }

    #[test]
    fn hom_of_diamond_has_sixteen_maps() {
        let d = Arc::new(diamond());
        let h = hom(&d, &d).unwrap();
        assert_eq!(h.maps.len(), 16);
        assert_eq!(h.maps[0], vec![0; 4]);
    }

    #[test]
    fn quotient_collapses_to_congruence() {
        let c3 = Lattice::chain(3);
        let (q, proj) = c3.quotient([(0, 1)]);
        assert_eq!(q.size(), 2);
        assert_eq!(proj, vec![0, 0, 1]);
    }
}
