//! Cover models: nerves up to dimension 2 with a ring model per simplex.

use std::collections::BTreeMap;

use serde::Serialize;

use super::laurent::Laurent;
use crate::error::{Error, Result};

/// Exponents of `z` allowed in a simplex ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RingModel {
    /// `K[z]`
    Polynomial,
    /// `K[z⁻¹]`
    InversePolynomial,
    /// `K[z, z⁻¹]`
    Laurent,
    /// `K`
    Constant,
}

impl RingModel {
    pub fn allows(self, k: i64) -> bool {
        match self {
            RingModel::Polynomial => k >= 0,
            RingModel::InversePolynomial => k <= 0,
            RingModel::Laurent => true,
            RingModel::Constant => k == 0,
        }
    }

    pub fn contains(self, x: &Laurent) -> bool {
        x.terms().all(|(k, _)| self.allows(k))
    }

    /// Whether every element of `self` is an element of `other`.
    fn includes_into(self, other: RingModel) -> bool {
        use RingModel::*;
        matches!(
            (self, other),
            (Constant, _) | (Polynomial, Polynomial | Laurent) | (InversePolynomial, InversePolynomial | Laurent) | (Laurent, Laurent)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    ProjectiveLine,
    Finite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverModel {
    pub kind: CoverKind,
    pub n_sets: usize,
    /// Sorted by dimension, then lexicographically.
    simplices: Vec<Vec<usize>>,
    rings: Vec<RingModel>,
    /// Ring degree window `[−D, D]`.
    pub window: i64,
    #[serde(skip)]
    index: BTreeMap<Vec<usize>, usize>,
}

/// The standard cover of `P¹` by `Spec K[z]` and `Spec K[z⁻¹]`.
pub fn make_p1_cover(window: i64) -> Result<CoverModel> {
    if window < 1 {
        return Err(Error::BadWindow(window));
    }
    CoverModel::new(
        CoverKind::ProjectiveLine,
        2,
        vec![vec![0], vec![1], vec![0, 1]],
        vec![RingModel::Polynomial, RingModel::InversePolynomial, RingModel::Laurent],
        window,
    )
}

/// An abstract cover with constant rings on every simplex; `edges` and
/// `triangles` list the nonempty overlaps.
pub fn make_finite_cover(n_sets: usize, edges: &[[usize; 2]], triangles: &[[usize; 3]]) -> Result<CoverModel> {
    if n_sets == 0 {
        return Err(Error::InvalidInput("a cover needs at least one set".into()));
    }
    let mut simplices: Vec<Vec<usize>> = (0..n_sets).map(|i| vec![i]).collect();
    let sorted = |s: &[usize]| {
        let mut v = s.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut es: Vec<Vec<usize>> = edges.iter().map(|e| sorted(e)).collect();
    let mut ts: Vec<Vec<usize>> = triangles.iter().map(|t| sorted(t)).collect();
    es.sort();
    es.dedup();
    ts.sort();
    ts.dedup();
    simplices.extend(es);
    simplices.extend(ts);
    let rings = vec![RingModel::Constant; simplices.len()];
    CoverModel::new(CoverKind::Finite, n_sets, simplices, rings, 0)
}

impl CoverModel {
    fn new(
        kind: CoverKind,
        n_sets: usize,
        simplices: Vec<Vec<usize>>,
        rings: Vec<RingModel>,
        window: i64,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, s) in simplices.iter().enumerate() {
            if s.is_empty() || s.len() > 3 || s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&v| v >= n_sets) {
                return Err(Error::InvalidInput(format!("bad simplex {s:?}")));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("repeated simplex {s:?}")));
            }
        }
        let cover = CoverModel { kind, n_sets, simplices, rings, window, index };
        for (i, s) in cover.simplices.iter().enumerate() {
            for k in 0..s.len() {
                if s.len() == 1 {
                    break;
                }
                let f = cover.face(s, k);
                let fi = cover
                    .index_of(&f)
                    .ok_or_else(|| Error::InvalidInput(format!("nerve is not closed: face {f:?} of {s:?} missing")))?;
                // restriction is the inclusion of rings, an algebra map
                if !cover.rings[fi].includes_into(cover.rings[i]) {
                    return Err(Error::InvalidInput(format!("ring of {f:?} does not map into ring of {s:?}")));
                }
            }
        }
        Ok(cover)
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Simplices of dimension `n` (with `n + 1` vertices), in order.
    pub fn nerve(&self, n: usize) -> Vec<&[usize]> {
        self.simplices.iter().filter(|s| s.len() == n + 1).map(Vec::as_slice).collect()
    }

    pub fn top_dim(&self) -> usize {
        self.simplices.iter().map(Vec::len).max().unwrap_or(1) - 1
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// `s` without its `k`-th vertex.
    pub fn face(&self, s: &[usize], k: usize) -> Vec<usize> {
        s.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &v)| v).collect()
    }

    pub fn ring(&self, s: &[usize]) -> RingModel {
        self.rings[self.index_of(s).expect("simplex of this cover")]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nerve(1).into_iter().map(|e| (e[0], e[1])).collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i == j || self.index_of(&[i.min(j), i.max(j)]).is_some()
    }

    /// Monomial exponents of the windowed ring of `s`.
    pub fn ring_basis(&self, s: &[usize]) -> Vec<i64> {
        let r = self.ring(s);
        (-self.window..=self.window).filter(|&k| r.allows(k)).collect()
    }

    /// Restriction of a ring element from `face` to `s`; rings are nested, so
    /// this is the identity on coefficients.
    pub fn restrict(&self, x: &Laurent, face: &[usize], s: &[usize]) -> Result<Laurent> {
        if !face.iter().all(|v| s.contains(v)) {
            return Err(Error::InvalidInput(format!("{face:?} is not a face of {s:?}")));
        }
        self.check_in_window(x, face)?;
        Ok(x.clone())
    }

    /// Product in the windowed ring of `s`.
    pub fn ring_mul(&self, s: &[usize], a: &Laurent, b: &Laurent) -> Result<Laurent> {
        self.check_in_window(a, s)?;
        self.check_in_window(b, s)?;
        let p = a.mul(b);
        self.check_in_window(&p, s)?;
        Ok(p)
    }

    fn check_in_window(&self, x: &Laurent, s: &[usize]) -> Result<()> {
        let r = self.ring(s);
        for (k, _) in x.terms() {
            if !r.allows(k) || k.abs() > self.window {
                return Err(Error::WindowOverflow(format!("z^{k} is outside the ring window of {s:?}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_overlap_dimension() {
        let c = make_p1_cover(3).unwrap();
        assert_eq!(c.ring_basis(&[0, 1]).len(), 7);
        assert_eq!(c.ring_basis(&[0]).len(), 4);
        assert_eq!(c.top_dim(), 1);
        assert!(c.nerve(2).is_empty());
        assert!(matches!(make_p1_cover(0), Err(Error::BadWindow(0))));
    }

    #[test]
    fn restriction_and_overflow() {
        let c = make_p1_cover(3).unwrap();
        let z2 = Laurent::z(2);
        assert_eq!(c.restrict(&z2, &[0], &[0, 1]).unwrap(), z2);
        assert!(matches!(c.ring_mul(&[0], &z2, &z2), Err(Error::WindowOverflow(_))));
        assert!(c.restrict(&Laurent::z(-1), &[0], &[0, 1]).is_err());
    }

    #[test]
    fn finite_cover_requires_faces() {
        assert!(make_finite_cover(3, &[[0, 1], [1, 2], [0, 2]], &[]).is_ok());
        assert!(make_finite_cover(3, &[[0, 1]], &[[0, 1, 2]]).is_err());
    }
}
