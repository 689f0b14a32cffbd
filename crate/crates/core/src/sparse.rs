//! Sparse vectors and coordinate-format matrices over [`Scalar`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A finitely supported vector; never stores explicit zeros.
#[derive(Clone, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
pub struct SparseVec {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.entries.insert(i, Scalar::one());
        v
    }

    pub fn from_dense(xs: &[Scalar]) -> Self {
        let entries = xs
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        SparseVec { entries }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut v = Self::new();
        for (i, x) in pairs {
            v.add_at(i, &x);
        }
        v
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (&i, x) in &self.entries {
            out[i] = x.clone();
        }
        out
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, x: Scalar) {
        if x.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn add_at(&mut self, i: usize, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry(i).or_insert_with(Scalar::zero);
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&i);
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.entries {
            self.add_at(i, &(x * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        self.scaled(&-Scalar::one())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn support_max(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(i, x)| large.entries.get(i).map(|y| x * y))
            .sum()
    }

    /// Re-index every coordinate `i` to `f(i)`, summing collisions.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(&i, x)| (f(i), x.clone())))
    }

    /// Coordinates in `[start, start + len)` shifted down to start at zero.
    pub fn slice(&self, start: usize, len: usize) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .range(start..start + len)
                .map(|(&i, x)| (i - start, x.clone()))
                .collect(),
        }
    }

    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(&i, x)| (i + offset, x.clone())).collect(),
        }
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// A matrix in canonical coordinate format: triplets sorted by `(row, col)`,
/// no duplicates, no explicit zeros.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    triplets: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, triplets: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            triplets: (0..n).map(|i| (i, i, Scalar::one())).collect(),
        }
    }

    /// Builds a canonical matrix; duplicate coordinates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (r, c, x) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            if x.is_zero() {
                continue;
            }
            let slot = acc.entry((r, c)).or_insert_with(Scalar::zero);
            *slot += x;
        }
        SparseMatrix {
            rows,
            cols,
            triplets: acc
                .into_iter()
                .filter(|(_, x)| !x.is_zero())
                .map(|((r, c), x)| (r, c, x))
                .collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        SparseMatrix::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(i, row)| {
                assert_eq!(row.len(), ncols, "ragged dense matrix");
                row.iter().enumerate().map(move |(j, x)| (i, j, x.clone()))
            }),
        )
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        SparseMatrix::from_dense(&dense)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        SparseMatrix::from_triplets(
            rows,
            columns.len(),
            columns
                .iter()
                .enumerate()
                .flat_map(|(j, v)| v.iter().map(move |(i, x)| (i, j, x.clone()))),
        )
    }

    pub fn from_rows(cols: usize, rows: &[SparseVec]) -> Self {
        SparseMatrix::from_triplets(
            rows.len(),
            cols,
            rows.iter()
                .enumerate()
                .flat_map(|(i, v)| v.iter().map(move |(j, x)| (i, j, x.clone()))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_zero(&self) -> bool {
        self.triplets.is_empty()
    }

    pub fn triplets(&self) -> &[(usize, usize, Scalar)] {
        &self.triplets
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.triplets
            .binary_search_by(|(i, j, _)| (*i, *j).cmp(&(r, c)))
            .map(|k| self.triplets[k].2.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    pub fn row_vecs(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.rows];
        for (r, c, x) in &self.triplets {
            out[*r].set(*c, x.clone());
        }
        out
    }

    pub fn col_vecs(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.cols];
        for (r, c, x) in &self.triplets {
            out[*c].set(*r, x.clone());
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.cols,
            self.rows,
            self.triplets.iter().map(|(r, c, x)| (*c, *r, x.clone())),
        )
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (r, c, x) in &self.triplets {
            let y = v.get(*c);
            if !y.is_zero() {
                out.add_at(*r, &(x * &y));
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let other_rows = other.row_vecs();
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (r, k, x) in &self.triplets {
            for (c, y) in other_rows[*k].iter() {
                *acc.entry((*r, c)).or_insert_with(Scalar::zero) += x * y;
            }
        }
        SparseMatrix::from_triplets(
            self.rows,
            other.cols,
            acc.into_iter().map(|((r, c), x)| (r, c, x)),
        )
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in matrix sum");
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.triplets.iter().chain(other.triplets.iter()).cloned(),
        )
    }

    pub fn scaled(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.triplets.iter().map(|(r, j, x)| (*r, *j, x * c)),
        )
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&other.scaled(&-Scalar::one()))
    }

    /// Places `block` with its top-left corner at `(r0, c0)` of a
    /// `rows × cols` matrix, on top of `self`'s entries.
    pub fn with_block(&self, r0: usize, c0: usize, block: &SparseMatrix) -> SparseMatrix {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.triplets
                .iter()
                .cloned()
                .chain(block.triplets.iter().map(|(r, c, x)| (r + r0, c + c0, x.clone()))),
        )
    }

    /// Columns `[start, start + len)`.
    pub fn column_range(&self, start: usize, len: usize) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.rows,
            len,
            self.triplets
                .iter()
                .filter(|(_, c, _)| *c >= start && *c < start + len)
                .map(|(r, c, x)| (*r, c - start, x.clone())),
        )
    }

    pub fn row_range(&self, start: usize, len: usize) -> SparseMatrix {
        SparseMatrix::from_triplets(
            len,
            self.cols,
            self.triplets
                .iter()
                .filter(|(r, _, _)| *r >= start && *r < start + len)
                .map(|(r, c, x)| (r - start, *c, x.clone())),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (r, c, x) in &self.triplets {
            out[*r][*c] = x.clone();
        }
        out
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_triplets_drop_zeros_and_merge() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![
                (1, 0, Scalar::one()),
                (0, 1, Scalar::from_int(2)),
                (1, 0, -Scalar::one()),
                (0, 0, Scalar::zero()),
            ],
        );
        assert_eq!(m.triplets(), &[(0, 1, Scalar::from_int(2))]);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_ints(&[&[1, 2], &[0, 1]]);
        let b = SparseMatrix::from_ints(&[&[1, 0], &[3, 1]]);
        assert_eq!(a.mul(&b), SparseMatrix::from_ints(&[&[7, 2], &[3, 1]]));
        assert_eq!(a.transpose().transpose(), a);
        let v = SparseVec::from_dense(&[Scalar::one(), Scalar::one()]);
        assert_eq!(a.mul_vec(&v).to_dense(2), vec![Scalar::from_int(3), Scalar::one()]);
    }
}
