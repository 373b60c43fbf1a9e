//! Dense matrices over exact rationals.
//!
//! Entries are [`BigRational`], which keeps every value in lowest terms with a
//! positive denominator. Nothing here ever rounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("rational {0:?} is not in lowest terms")]
    NotReduced(String),
    #[error("rational {0:?} has a non-positive denominator")]
    BadDenominator(String),
    #[error("rational {0:?} is not in canonical form")]
    NotCanonical(String),
}

/// Strict reader: only the exact strings produced by [`format_q`] are accepted.
pub fn parse_q(s: &str) -> Result<Q, RationalParseError> {
    let malformed = || RationalParseError::Malformed(s.to_string());
    let int = |t: &str| -> Result<BigInt, RationalParseError> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(RationalParseError::NotCanonical(s.to_string()));
        }
        BigInt::from_str(t).map_err(|_| malformed())
    };
    match s.split_once('/') {
        None => {
            let n = int(s)?;
            if s == "-0" {
                return Err(RationalParseError::NotCanonical(s.to_string()));
            }
            Ok(BigRational::from_integer(n))
        }
        Some((n, d)) => {
            let n = int(n)?;
            let d = int(d)?;
            if !d.is_positive() {
                return Err(RationalParseError::BadDenominator(s.to_string()));
            }
            if num_integer::Integer::gcd(&n, &d) != BigInt::one() {
                return Err(RationalParseError::NotReduced(s.to_string()));
            }
            if d.is_one() {
                return Err(RationalParseError::NotCanonical(s.to_string()));
            }
            Ok(BigRational::new_raw(n, d))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(format_q).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Q>) -> Self {
        assert_eq!(entries.len(), rows * cols, "matrix entry count");
        Matrix { rows, cols, data: entries }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| q(x))).collect();
        Self::from_rows(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Kronecker product with row-major pairing `(i, j) -> i * n + j`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hcat(blocks: &[Matrix], rows: usize) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hcat row mismatch");
            for r in 0..rows {
                for c in 0..b.cols {
                    out.set(r, off + c, b.get(r, c).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn vcat(blocks: &[Matrix], cols: usize) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vcat column mismatch");
            data.extend(b.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c) - &factor * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}` as the rows of the returned matrix, in
    /// reduced row-echelon form.
    pub fn kernel_rows(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.set(k, f, Q::one());
            for (i, &p) in pivots.iter().enumerate() {
                basis.set(k, p, -r.get(i, f).clone());
            }
        }
        let (canon, pivots) = basis.rref();
        canon.take_rows(pivots.len())
    }

    fn take_rows(&self, n: usize) -> Matrix {
        Matrix { rows: n, cols: self.cols, data: self.data[..n * self.cols].to_vec() }
    }

    /// Solves `self * X = rhs` exactly; `None` when inconsistent. Free
    /// variables are set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve shape");
        let aug = Matrix::hcat(&[self.clone(), rhs.clone()], self.rows);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.rows))?;
        if self.rank() == self.rows {
            Some(x)
        } else {
            None
        }
    }

    pub fn abs_max(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_rational_reader() {
        assert_eq!(parse_q("3").unwrap(), q(3));
        assert_eq!(parse_q("-1/2").unwrap(), q_frac(-1, 2));
        assert!(matches!(parse_q("2/4"), Err(RationalParseError::NotReduced(_))));
        assert!(matches!(parse_q("1/-2"), Err(RationalParseError::BadDenominator(_))));
        assert!(matches!(parse_q("3/1"), Err(RationalParseError::NotCanonical(_))));
        assert!(matches!(parse_q("-0"), Err(RationalParseError::NotCanonical(_))));
        assert!(matches!(parse_q("1.5"), Err(RationalParseError::Malformed(_))));
        assert_eq!(format_q(&q_frac(6, -4)), "-3/2");
    }

    #[test]
    fn kernel_is_canonical() {
        // f - g for f = [1 0], g = [0 1]
        let d = Matrix::from_i64(&[&[1, -1]]);
        let k = d.kernel_rows();
        assert_eq!(k, Matrix::from_i64(&[&[1, 1]]));
        assert!(d.mul(&k.transpose()).is_zero());
    }

    #[test]
    fn solve_and_invert() {
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let singular = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(singular.inverse().is_none());
        let rhs = Matrix::from_i64(&[&[1], &[2]]);
        assert!(singular.solve(&rhs).is_none());
    }

    #[test]
    fn kron_scalars() {
        let a = Matrix::from_i64(&[&[2]]);
        let b = Matrix::from_i64(&[&[3]]);
        assert_eq!(a.kron(&b), Matrix::from_i64(&[&[6]]));
    }
}
