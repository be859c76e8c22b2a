use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse integer matrix; entries are sorted row-major, nonzero and unique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, BigInt)>,
}

pub type Dense = Vec<Vec<BigInt>>;

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: Vec::new() }
    }

    /// Sums duplicate coordinates and drops zeros. Panics on out-of-range indices.
    pub fn from_triplets(rows: usize, cols: usize, t: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Self {
        let mut acc: HashMap<(usize, usize), BigInt> = HashMap::new();
        for (r, c, v) in t {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc.entry((r, c)).or_insert_with(BigInt::zero) += v;
        }
        let mut entries: Vec<_> = acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect();
        entries.sort_unstable_by_key(|a| (a.0, a.1));
        IntegerMatrix { rows, cols, entries }
    }

    /// Decoding entry point: rejects out-of-range indices instead of panicking.
    pub fn checked(rows: usize, cols: usize, t: Vec<(usize, usize, BigInt)>) -> Result<Self> {
        if let Some((r, c, _)) = t.iter().find(|(r, c, _)| *r >= rows || *c >= cols) {
            return Err(Error::BadIndex(format!("entry ({r},{c}) outside {rows}x{cols}")));
        }
        Ok(Self::from_triplets(rows, cols, t))
    }

    pub fn from_dense(d: &Dense, cols: usize) -> Self {
        let rows = d.len();
        let t = d
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone())));
        Self::from_triplets(rows, cols, t)
    }

    pub fn to_dense(&self) -> Dense {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            d[*r][*c] = v.clone();
        }
        d
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, BigInt::one())))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::NotComposable(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            by_row[*r].push((*c, v));
        }
        let mut acc: HashMap<(usize, usize), BigInt> = HashMap::new();
        for (r, k, a) in &self.entries {
            for &(c, b) in &by_row[*k] {
                *acc.entry((*r, c)).or_insert_with(BigInt::zero) += a * b;
            }
        }
        Ok(Self::from_triplets(self.rows, other.cols, acc.into_iter().map(|((r, c), v)| (r, c, v))))
    }

    pub fn transpose(&self) -> IntegerMatrix {
        Self::from_triplets(self.cols, self.rows, self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())))
    }
}

pub fn dense_mul(a: &Dense, b: &Dense, inner: usize, cols: usize) -> Dense {
    let mut out = vec![vec![BigInt::zero(); cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &row[k] * &b[k][j];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, t: &[(usize, usize, i64)]) -> IntegerMatrix {
        IntegerMatrix::from_triplets(rows, cols, t.iter().map(|&(r, c, v)| (r, c, BigInt::from(v))))
    }

    #[test]
    fn triplets_are_normalized() {
        let a = m(2, 2, &[(1, 1, 2), (0, 0, 1), (1, 1, -2), (0, 1, 3)]);
        assert_eq!(a.entries.len(), 2);
        assert_eq!(a.entries[0].1, 0);
    }

    #[test]
    fn product_and_errors() {
        let a = m(1, 2, &[(0, 0, 1), (0, 1, 1)]);
        let b = m(2, 1, &[(0, 0, 1), (1, 0, -1)]);
        assert!(a.mul(&b).unwrap().is_zero());
        assert!(a.mul(&a).is_err());
        assert!(IntegerMatrix::checked(1, 1, vec![(1, 0, BigInt::one())]).is_err());
    }
}
