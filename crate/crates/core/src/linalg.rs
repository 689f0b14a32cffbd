//! Exact elimination: rank, reduced echelon form, kernels and linear solves.
//!
//! Rank uses fraction-free (Bareiss) elimination over the integers after
//! clearing denominators row by row, with complete pivoting on the entry of
//! smallest bit length. Kernels and solves use rational Gauss-Jordan
//! elimination, which gives the deterministic reduced-echelon bases the
//! cohomology code relies on.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[cfg(test)]
use crate::scalar::Scalar;
use crate::sparse::{SparseMatrix, SparseVec};

type IntRow = BTreeMap<usize, BigInt>;

fn integer_rows(m: &SparseMatrix) -> Vec<IntRow> {
    m.row_vecs()
        .into_iter()
        .filter(|r| !r.is_zero())
        .map(|r| {
            let lcm = r
                .iter()
                .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
            r.iter()
                .map(|(c, x)| (c, x.numer() * (&lcm / x.denom())))
                .collect()
        })
        .collect()
}

/// Rank by fraction-free elimination. Every intermediate division is exact.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut rows = integer_rows(m);
    let mut prev = BigInt::one();
    let mut rank = 0;
    loop {
        rows.retain(|r| !r.is_empty());
        // complete pivoting: smallest bit length, ties broken by position
        let pivot = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&c, x)| (x.bits(), i, c)))
            .min();
        let Some((_, pi, pc)) = pivot else { break };
        let prow = rows.swap_remove(pi);
        let p = prow[&pc].clone();
        for row in rows.iter_mut() {
            let f = row.remove(&pc).unwrap_or_else(BigInt::zero);
            let mut next = IntRow::new();
            for (&c, x) in row.iter() {
                next.insert(c, x * &p);
            }
            if !f.is_zero() {
                for (&c, y) in prow.iter() {
                    if c == pc {
                        continue;
                    }
                    let e = next.entry(c).or_insert_with(BigInt::zero);
                    *e -= &f * y;
                }
            }
            *row = next
                .into_iter()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| {
                    debug_assert!((&x % &prev).is_zero(), "Bareiss division not exact");
                    (c, x / &prev)
                })
                .collect();
        }
        prev = p.abs();
        rank += 1;
    }
    rank
}

/// Reduced row echelon form: nonzero rows with leading 1 at strictly
/// increasing pivot columns, all other entries in pivot columns zero.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rows: Vec<SparseVec>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(m: &SparseMatrix) -> Rref {
    let cols = m.cols();
    let mut pending: Vec<SparseVec> = m.row_vecs().into_iter().filter(|r| !r.is_zero()).collect();
    let mut done: Vec<SparseVec> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        // among rows with a nonzero at c (they have zeros before c), take the
        // one with the cheapest pivot entry
        let choice = pending
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.get(c).is_zero())
            .min_by_key(|(i, r)| (r.get(c).bit_size(), r.nnz(), *i))
            .map(|(i, _)| i);
        let Some(i) = choice else { continue };
        let row = pending.swap_remove(i);
        let row = row.scaled(&row.get(c).recip());
        for other in pending.iter_mut().chain(done.iter_mut()) {
            let f = other.get(c);
            if !f.is_zero() {
                other.add_scaled(&row, &-f);
            }
        }
        pending.retain(|r| !r.is_zero());
        done.push(row);
        pivots.push(c);
        if pending.is_empty() {
            break;
        }
    }
    Rref { rows: done, pivots, cols }
}

/// A basis of the kernel, one vector per free column (ascending), with a 1 in
/// that column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let r = rref(m);
    let pivot_set: BTreeMap<usize, usize> =
        r.pivots.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    (0..m.cols())
        .filter(|c| !pivot_set.contains_key(c))
        .map(|free| {
            let mut v = SparseVec::unit(free);
            for (k, &pc) in r.pivots.iter().enumerate() {
                let x = r.rows[k].get(free);
                if !x.is_zero() {
                    v.set(pc, -x);
                }
            }
            v
        })
        .collect()
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(m: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    let n = m.cols();
    let aug = SparseMatrix::from_columns(
        m.rows(),
        &m.col_vecs().into_iter().chain(std::iter::once(b.clone())).collect::<Vec<_>>(),
    );
    let r = rref(&aug);
    if r.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = SparseVec::new();
    for (k, &pc) in r.pivots.iter().enumerate() {
        x.set(pc, r.rows[k].get(n));
    }
    Some(x)
}

/// Incrementally maintained basis of a subspace, kept in echelon form so that
/// membership and reduction are cheap.
#[derive(Debug, Clone, Default)]
pub struct SpanBasis {
    // echelon rows keyed by leading index, leading entry normalized to 1
    rows: BTreeMap<usize, SparseVec>,
}

impl SpanBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The remainder of `v` after eliminating against the basis.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        loop {
            let hit = v
                .iter()
                .find(|(i, _)| self.rows.contains_key(i))
                .map(|(i, x)| (i, x.clone()));
            match hit {
                Some((i, x)) => v.add_scaled(&self.rows[&i], &-x),
                None => return v,
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        match r.leading() {
            None => false,
            Some((i, x)) => {
                let r = r.scaled(&x.recip());
                self.rows.insert(i, r);
                true
            }
        }
    }
}

/// Rank of the span of a list of vectors.
pub fn span_rank(vectors: &[SparseVec]) -> usize {
    let mut b = SpanBasis::new();
    vectors.iter().filter(|v| b.insert(v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_ints(rows)
    }

    #[test]
    fn kernel_of_zero_map() {
        let k = kernel_basis(&ints(&[&[0]]));
        assert_eq!(k, vec![SparseVec::unit(0)]);
    }

    #[test]
    fn kernel_of_row_one_one() {
        let m = ints(&[&[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(k[0].get(0), -k[0].get(1));
        assert!(m.mul_vec(&k[0]).is_zero());
    }

    #[test]
    fn kernel_of_rank_one_square() {
        // hand reduction: [[1,2],[2,4]] -> [[1,2],[0,0]], kernel spanned by (2,-1)
        let m = ints(&[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].get(0), k[0].get(1) * Scalar::from_int(-2));
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn empty_matrix_kernel_is_full_basis() {
        let m = SparseMatrix::zeros(0, 3);
        assert_eq!(kernel_basis(&m).len(), 3);
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn bareiss_matches_rref_rank() {
        let m = ints(&[&[2, 4, 6, 8], &[1, 3, 5, 7], &[3, 7, 11, 15], &[0, 0, 0, 1]]);
        assert_eq!(rank(&m), rref(&m).rank());
        assert_eq!(rank(&m), 3);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = ints(&[&[1, 1], &[2, 2]]);
        let b = SparseVec::from_dense(&[Scalar::one(), Scalar::from_int(2)]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let b2 = SparseVec::from_dense(&[Scalar::one(), Scalar::one()]);
        assert!(solve(&m, &b2).is_none());
    }

    #[test]
    fn span_basis_membership() {
        let mut s = SpanBasis::new();
        let v1 = SparseVec::from_dense(&[Scalar::one(), Scalar::one(), Scalar::zero()]);
        let v2 = SparseVec::from_dense(&[Scalar::zero(), Scalar::one(), Scalar::one()]);
        assert!(s.insert(&v1));
        assert!(s.insert(&v2));
        assert!(!s.insert(&v1.add(&v2)));
        assert!(s.contains(&v1.sub(&v2)));
        assert!(!s.contains(&SparseVec::unit(0)));
    }
}
