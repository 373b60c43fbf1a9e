//! Finite pointed sets with basepoint `0` and basepoint-preserving tables.

/// Index of the non-basepoint pair `(i, j)` (both nonzero) in a smash
/// product whose right factor has size `nb`; pairs are row-major after the
/// basepoint.
pub fn pair(i: usize, j: usize, nb: usize) -> usize {
    1 + (i - 1) * (nb - 1) + (j - 1)
}

pub fn unpair(k: usize, nb: usize) -> Option<(usize, usize)> {
    if k == 0 {
        None
    } else {
        Some(((k - 1) / (nb - 1) + 1, (k - 1) % (nb - 1) + 1))
    }
}

pub fn smash_size(na: usize, nb: usize) -> usize {
    1 + (na - 1) * (nb - 1)
}

pub fn tensor(f: &[usize], g: &[usize], cod_g: usize) -> Vec<usize> {
    let (na, nb) = (f.len(), g.len());
    let mut out = vec![0; smash_size(na, nb)];
    for i in 1..na {
        for j in 1..nb {
            let (fi, gj) = (f[i], g[j]);
            out[pair(i, j, nb)] = if fi == 0 || gj == 0 { 0 } else { pair(fi, gj, cod_g) };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_round_trips() {
        for i in 1..4 {
            for j in 1..3 {
                assert_eq!(unpair(pair(i, j, 3), 3), Some((i, j)));
            }
        }
        assert_eq!(smash_size(1, 5), 1);
    }
}
