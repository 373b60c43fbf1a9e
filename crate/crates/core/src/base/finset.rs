//! Finite sets `{0, .., n-1}` and total function tables.

use super::BaseError;

/// Disjoint-set forest over `0..n` with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns whether they were distinct.
    /// The smaller root survives, so every root is the least member of its class.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Class index of every element, classes numbered by least member.
    pub fn classes(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut class_of_root = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = count;
                count += 1;
            }
            out[x] = class_of_root[r];
        }
        (count, out)
    }
}

pub fn checked_pow(base: usize, exp: usize) -> Result<usize, BaseError> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .ok_or_else(|| BaseError::TooLarge(format!("{base}^{exp} overflows")))?;
    }
    Ok(acc)
}

/// Index of a table among all tables of its length with entries `< radix`,
/// ordered lexicographically (first entry most significant).
pub fn encode_table(table: &[usize], radix: usize) -> usize {
    table.iter().fold(0, |acc, &t| acc * radix + t)
}

pub fn decode_table(mut index: usize, len: usize, radix: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % radix;
        index /= radix;
    }
    out
}

pub fn compose(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

pub fn tensor(f: &[usize], g: &[usize], cod_g: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(f.len() * g.len());
    for &fi in f {
        for &gj in g {
            out.push(fi * cod_g + gj);
        }
    }
    out
}

pub fn coequalizer(f: &[usize], g: &[usize], n: usize) -> (usize, Vec<usize>) {
    let mut uf = UnionFind::new(n);
    for (&a, &b) in f.iter().zip(g) {
        uf.union(a, b);
    }
    uf.classes()
}

pub fn equalizer(f: &[usize], g: &[usize]) -> Vec<usize> {
    (0..f.len()).filter(|&i| f[i] == g[i]).collect()
}

/// `x` with `x ∘ q = h`, provided `h` is constant on the fibres of `q` and
/// `q` is onto.
pub fn factor_through_epi(q: &[usize], q_cod: usize, h: &[usize]) -> Result<Vec<usize>, BaseError> {
    let mut x = vec![usize::MAX; q_cod];
    for (i, &k) in q.iter().enumerate() {
        if x[k] == usize::MAX {
            x[k] = h[i];
        } else if x[k] != h[i] {
            return Err(BaseError::NoFactorisation(format!(
                "map is not constant on the fibre of element {k}"
            )));
        }
    }
    if x.contains(&usize::MAX) {
        return Err(BaseError::NoFactorisation("projection is not onto".into()));
    }
    Ok(x)
}

/// `x` with `e ∘ x = h` for an injective `e`.
pub fn factor_through_mono(e: &[usize], e_cod: usize, h: &[usize]) -> Result<Vec<usize>, BaseError> {
    let mut pre = vec![usize::MAX; e_cod];
    for (i, &v) in e.iter().enumerate() {
        if pre[v] != usize::MAX {
            return Err(BaseError::NoFactorisation("inclusion is not injective".into()));
        }
        pre[v] = i;
    }
    h.iter()
        .map(|&v| {
            let p = pre[v];
            if p == usize::MAX {
                Err(BaseError::NoFactorisation(format!("element {v} is outside the subobject")))
            } else {
                Ok(p)
            }
        })
        .collect()
}

pub fn inverse(f: &[usize], cod: usize) -> Option<Vec<usize>> {
    if f.len() != cod {
        return None;
    }
    let mut inv = vec![usize::MAX; cod];
    for (i, &v) in f.iter().enumerate() {
        if inv[v] != usize::MAX {
            return None;
        }
        inv[v] = i;
    }
    Some(inv)
}

/// Every table of length `len` with entries `< radix`, in lexicographic order.
pub fn all_tables(len: usize, radix: usize, limit: usize) -> Result<Vec<Vec<usize>>, BaseError> {
    let count = checked_pow(radix, len)?;
    if count > limit {
        return Err(BaseError::TooLarge(format!("{count} tables exceed the limit {limit}")));
    }
    Ok((0..count).map(|i| decode_table(i, len, radix)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coequalizer_collapses_two_points() {
        // 1 ⇉ 2 picking 0 and 1
        let (n, proj) = coequalizer(&[0], &[1], 2);
        assert_eq!(n, 1);
        assert_eq!(proj, vec![0, 0]);
    }

    #[test]
    fn classes_ordered_by_least_member() {
        let (n, proj) = coequalizer(&[3, 1], &[2, 4], 5);
        assert_eq!(n, 3);
        assert_eq!(proj, vec![0, 1, 2, 2, 1]);
    }

    #[test]
    fn equalizer_agreement_set() {
        assert_eq!(equalizer(&[0, 0, 1], &[0, 1, 1]), vec![0, 2]);
    }

    #[test]
    fn table_codes_round_trip() {
        for i in 0..27 {
            assert_eq!(encode_table(&decode_table(i, 3, 3), 3), i);
        }
        assert_eq!(decode_table(5, 3, 2), vec![1, 0, 1]);
    }
}
