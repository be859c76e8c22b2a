//! Rank of boundary maps over ℚ by column reduction with clearing.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

/// A sparse column, sorted by row.
pub type Column = Vec<(u32, i64)>;

trait Coef: Clone + Integer + Signed + CheckedMul + CheckedSub {}
impl<T: Clone + Integer + Signed + CheckedMul + CheckedSub> Coef for T {}

/// `b·x − a·y` on sorted sparse columns; `None` on overflow.
fn combine<T: Coef>(b: &T, x: &[(u32, T)], a: &T, y: &[(u32, T)]) -> Option<Vec<(u32, T)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (r, v) = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                j += 1;
                (p.0, b.checked_mul(&p.1)?.checked_sub(&a.checked_mul(&q.1)?)?)
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, b.checked_mul(&p.1)?)
            }
            (Some(p), None) => {
                i += 1;
                (p.0, b.checked_mul(&p.1)?)
            }
            (_, Some(q)) => {
                j += 1;
                (q.0, T::zero().checked_sub(&a.checked_mul(&q.1)?)?)
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((r, v));
        }
    }
    let g = out.iter().fold(T::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for e in &mut out {
            e.1 = e.1.div_floor(&g);
        }
    }
    Some(out)
}

/// Reduces the columns in order; returns the low row of each nonzero reduced
/// column, or `None` if some coefficient overflowed.
fn reduce_all<T: Coef>(cols: impl Iterator<Item = Vec<(u32, T)>>) -> Option<Vec<u32>> {
    let mut pivots: HashMap<u32, Vec<(u32, T)>> = HashMap::new();
    let mut lows = Vec::new();
    for mut c in cols {
        while let Some((low, a)) = c.last().cloned() {
            match pivots.get(&low) {
                Some(p) => {
                    let b = p.last().expect("pivot column is nonzero").1.clone();
                    let g = a.gcd(&b);
                    c = combine(&b.div_floor(&g), &c, &a.div_floor(&g), p)?;
                }
                None => {
                    pivots.insert(low, c);
                    lows.push(low);
                    break;
                }
            }
        }
    }
    Some(lows)
}

/// Ranks of `∂_1..∂_top` over ℚ. `columns(m)` yields the columns of `∂_m`
/// indexed like the `m`-cells, with rows indexed by the `(m−1)`-cells.
/// Works from the top down so that columns killed by a pivot of `∂_{m+1}` are
/// skipped.
pub fn rational_boundary_ranks(top: usize, mut columns: impl FnMut(usize) -> Vec<Column>) -> Vec<usize> {
    let mut rank = vec![0usize; top + 2];
    let mut cleared: Vec<u32> = Vec::new();
    for m in (1..=top).rev() {
        let mut cols = columns(m);
        for &c in &cleared {
            cols[c as usize].clear();
        }
        let lows = match reduce_all(cols.iter().cloned()) {
            Some(l) => l,
            None => {
                let big = cols.into_iter().map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect());
                reduce_all::<BigInt>(big).expect("big integers do not overflow")
            }
        };
        rank[m] = lows.len();
        cleared = lows;
    }
    rank
}

/// Betti numbers over ℚ from cell counts and ranks as returned above.
pub fn betti_from_ranks(f: &[usize], rank: &[usize]) -> Vec<usize> {
    (0..f.len()).map(|m| f[m] - rank[m] - rank.get(m + 1).copied().unwrap_or(0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_and_disk() {
        // two vertices, two edges forming a circle
        let d1 = vec![vec![(0, -1), (1, 1)], vec![(0, 1), (1, -1)]];
        let r = rational_boundary_ranks(1, |_| d1.clone());
        assert_eq!(betti_from_ranks(&[2, 2], &r), vec![1, 1]);
        // fill it with one 2-cell
        let r = rational_boundary_ranks(2, |m| if m == 2 { vec![vec![(0, 1), (1, 1)]] } else { d1.clone() });
        assert_eq!(betti_from_ranks(&[2, 2, 1], &r), vec![1, 0, 0]);
    }

    #[test]
    fn projective_plane_has_no_rational_homology() {
        // one cell in each degree, ∂_2 = 2
        let r = rational_boundary_ranks(2, |m| if m == 2 { vec![vec![(0, 2)]] } else { vec![vec![]] });
        assert_eq!(betti_from_ranks(&[1, 1, 1], &r), vec![1, 0, 0]);
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 3;
        let cols = vec![vec![(0, big), (1, big - 1)], vec![(0, big - 2), (1, big - 7)], vec![(0, 1), (1, 1)]];
        let r = rational_boundary_ranks(1, |_| cols.clone());
        assert_eq!(r[1], 2);
    }
}
