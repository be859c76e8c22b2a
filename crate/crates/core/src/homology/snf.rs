//! Smith normal form and ranks.
//!
//! [`smith_normal_form`] is the dense algorithm with transforms, used for
//! small matrices and as the reference. [`invariant_factors`] handles large
//! sparse boundary matrices: it eliminates unit pivots in machine integers,
//! then finishes the residual block densely.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{dense_mul, Dense, IntegerMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `U · M · V`, diagonal with `d₁ | d₂ | …`, nonnegative.
    pub d: Dense,
    pub u: Dense,
    pub v: Dense,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Recomposes `U M V` and checks it equals `D`, that `D` is diagonal with
    /// the divisibility chain, and that `U`, `V` have determinant ±1.
    pub fn verify(&self, m: &IntegerMatrix) -> bool {
        let md = m.to_dense();
        let umv = dense_mul(&dense_mul(&self.u, &md, self.rows, self.cols), &self.v, self.cols, self.cols);
        if umv != self.d {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.d[i][j].is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<BigInt> = (0..self.rows.min(self.cols)).map(|i| self.d[i][i].clone()).collect();
        for w in diag.windows(2) {
            if w[0].is_negative() || w[1].is_negative() {
                return false;
            }
            if w[0].is_zero() {
                if !w[1].is_zero() {
                    return false;
                }
            } else if !(&w[1] % &w[0]).is_zero() {
                return false;
            }
        }
        determinant(&self.u).abs().is_one() && determinant(&self.v).abs().is_one()
    }
}

fn identity(n: usize) -> Dense {
    let mut d = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    d
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &Dense) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank_rational(m: &IntegerMatrix) -> usize {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.to_dense();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let swap_cols = |x: &mut Dense, i: usize, j: usize| {
        for row in x.iter_mut() {
            row.swap(i, j);
        }
    };
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, rows, cols);
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let x = &q * &a[t][j];
                    a[i][j] -= x;
                }
                for j in 0..rows {
                    let x = &q * &u[t][j];
                    u[i][j] -= x;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let x = &q * &a[i][t];
                    a[i][j] -= x;
                }
                for i in 0..cols {
                    let x = &q * &v[i][t];
                    v[i][j] -= x;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                    for j in 0..rows {
                        let x = u[i][j].clone();
                        u[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in t..cols {
                a[t][j] = -&a[t][j];
            }
            for j in 0..rows {
                u[t][j] = -&u[t][j];
            }
        }
    }
    finish(a, u, v, rows, cols)
}

fn finish(d: Dense, u: Dense, v: Dense, rows: usize, cols: usize) -> SmithForm {
    SmithForm { d, u, v, rows, cols }
}

/// Nonzero invariant factors of `m`, ascending (`1`s included).
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut ones = 0usize;
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); m.rows];
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.cols];
    let mut big = false;
    for (r, c, v) in &m.entries {
        match v.to_i64() {
            Some(x) => {
                rows[*r].insert(*c, x);
                col_rows[*c].insert(*r);
            }
            None => big = true,
        }
    }
    if big {
        return dense_factors(m.to_dense(), m.rows, m.cols);
    }
    let mut alive_rows: Vec<bool> = vec![true; m.rows];
    // sweep rows, eliminating on a unit entry whose column is shortest
    let mut progress = true;
    'sweeps: while progress {
        progress = false;
        for pr in 0..m.rows {
            if !alive_rows[pr] {
                continue;
            }
            let pick = rows[pr]
                .iter()
                .filter(|(_, &x)| x == 1 || x == -1)
                .min_by_key(|(&c, _)| col_rows[c].len())
                .map(|(&c, _)| c);
            let Some(pc) = pick else { continue };
            let prow = std::mem::take(&mut rows[pr]);
            let px = prow[&pc];
            let others: Vec<usize> = col_rows[pc].iter().copied().filter(|&r| r != pr).collect();
            let mut updated = Vec::with_capacity(others.len());
            for &r in &others {
                let f = rows[r][&pc] * px; // px = ±1, so f = a[r][pc] / px
                let mut next = rows[r].clone();
                for (&c, &x) in &prow {
                    let cur = next.get(&c).copied().unwrap_or(0);
                    let Some(val) = f.checked_mul(x).and_then(|y| cur.checked_sub(y)) else {
                        rows[pr] = prow;
                        break 'sweeps;
                    };
                    if val == 0 {
                        next.remove(&c);
                    } else {
                        next.insert(c, val);
                    }
                }
                updated.push(next);
            }
            for (r, next) in others.into_iter().zip(updated) {
                for c in rows[r].keys() {
                    if !next.contains_key(c) {
                        col_rows[*c].remove(&r);
                    }
                }
                for c in next.keys() {
                    col_rows[*c].insert(r);
                }
                rows[r] = next;
            }
            for &c in prow.keys() {
                col_rows[c].remove(&pr);
            }
            alive_rows[pr] = false;
            ones += 1;
            progress = true;
        }
    }
    // the remaining block: rows still alive and columns still hit
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| alive_rows[r] && !rows[r].is_empty()).collect();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|&r| rows[r].keys().copied()).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let mut out = vec![BigInt::one(); ones];
    if !live_rows.is_empty() {
        let col_ix: std::collections::HashMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut d = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (i, &r) in live_rows.iter().enumerate() {
            for (&c, &x) in &rows[r] {
                d[i][col_ix[&c]] = BigInt::from(x);
            }
        }
        out.extend(dense_factors(d, live_rows.len(), live_cols.len()));
    }
    out.sort();
    out
}

fn dense_factors(d: Dense, rows: usize, cols: usize) -> Vec<BigInt> {
    let m = IntegerMatrix::from_dense(&d, cols);
    debug_assert_eq!(m.rows, rows);
    smith_normal_form(&m).diagonal()
}

/// Rank over `𝔽_p`.
pub fn rank_mod_p(m: &IntegerMatrix, p: u64) -> usize {
    let p = p as i128;
    let reduce = |v: &BigInt| -> i128 {
        let r = v.mod_floor(&BigInt::from(p));
        r.to_i128().expect("reduced below p")
    };
    let mut rows: Vec<BTreeMap<usize, i128>> = vec![BTreeMap::new(); m.rows];
    for (r, c, v) in &m.entries {
        let x = reduce(v);
        if x != 0 {
            rows[*r].insert(*c, x);
        }
    }
    let inv = |a: i128| -> i128 {
        // Fermat
        let mut r = 1i128;
        let mut b = a;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut pivot_of_col: BTreeMap<usize, BTreeMap<usize, i128>> = BTreeMap::new();
    let mut rank = 0;
    for row in rows {
        let mut row = row;
        while let Some((&c, &x)) = row.iter().next() {
            match pivot_of_col.get(&c) {
                Some(prow) => {
                    // prow is normalized with leading 1
                    for (&cc, &y) in prow {
                        let cur = row.get(&cc).copied().unwrap_or(0);
                        let val = (cur - x * y).rem_euclid(p);
                        if val == 0 {
                            row.remove(&cc);
                        } else {
                            row.insert(cc, val);
                        }
                    }
                }
                None => {
                    let ix = inv(x);
                    let norm = row.into_iter().map(|(cc, y)| (cc, y * ix % p)).collect();
                    pivot_of_col.insert(c, norm);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_i64(rows: usize, cols: usize, data: &[i64]) -> IntegerMatrix {
        IntegerMatrix::from_triplets(
            rows,
            cols,
            data.iter().enumerate().map(|(i, &x)| (i / cols, i % cols, BigInt::from(x))),
        )
    }

    #[test]
    fn identity_and_diag() {
        let id = IntegerMatrix::identity(3);
        let s = smith_normal_form(&id);
        assert!(s.verify(&id));
        assert_eq!(s.diagonal(), vec![BigInt::one(); 3]);
        let d = from_i64(2, 2, &[2, 0, 0, 0]);
        let s = smith_normal_form(&d);
        assert!(s.verify(&d));
        assert_eq!(s.d, d.to_dense());
    }

    #[test]
    fn divisibility_is_enforced() {
        let m = from_i64(2, 2, &[2, 0, 0, 3]);
        let s = smith_normal_form(&m);
        assert!(s.verify(&m));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(invariant_factors(&m), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn determinant_small() {
        let m = from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]).to_dense();
        assert_eq!(determinant(&m), BigInt::from(6));
    }

    fn arb_matrix() -> impl Strategy<Value = IntegerMatrix> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |d| from_i64(r, c, &d))
        })
    }

    proptest! {
        #[test]
        fn snf_recomposes(m in arb_matrix()) {
            let s = smith_normal_form(&m);
            prop_assert!(s.verify(&m));
            prop_assert_eq!(invariant_factors(&m), s.diagonal());
            prop_assert_eq!(rank_rational(&m), s.diagonal().len());
        }

        #[test]
        fn rank_mod_p_counts_coprime_factors(m in arb_matrix(), pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let d = smith_normal_form(&m).diagonal();
            let expect = d.iter().filter(|x| !(*x % BigInt::from(p)).is_zero()).count();
            prop_assert_eq!(rank_mod_p(&m, p), expect);
        }
    }
}
