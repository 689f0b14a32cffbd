//! Graded vector spaces, degree-homogeneous maps, cochain complexes and
//! their cohomology.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, solve, SpanBasis};
use crate::scalar::Scalar;
use crate::sparse::{SparseMatrix, SparseVec};

/// Degree-indexed lists of basis labels. Degrees not present are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GradedVectorSpace {
    components: BTreeMap<i32, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_components<I>(components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, Vec<String>)>,
    {
        let mut space = Self::new();
        for (deg, labels) in components {
            space.set_component(deg, labels)?;
        }
        Ok(space)
    }

    /// Replaces the degree-`deg` component. Labels must be unique.
    pub fn set_component(&mut self, deg: i32, labels: Vec<String>) -> Result<()> {
        let unique: BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(Error::DuplicateLabel { degree: deg });
        }
        if labels.is_empty() {
            self.components.remove(&deg);
        } else {
            self.components.insert(deg, labels);
        }
        Ok(())
    }

    pub fn dim(&self, deg: i32) -> usize {
        self.components.get(&deg).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    pub fn labels(&self, deg: i32) -> &[String] {
        self.components.get(&deg).map_or(&[], Vec::as_slice)
    }

    /// Degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.keys().copied()
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = *self.components.keys().next()?;
        let hi = *self.components.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn index_of(&self, deg: i32, label: &str) -> Option<usize> {
        self.labels(deg).iter().position(|l| l == label)
    }

    /// Same dimensions, basis permuted within each degree by `perm[deg]`.
    pub fn permuted(&self, perms: &BTreeMap<i32, Vec<usize>>) -> Self {
        let mut out = self.clone();
        for (deg, labels) in &self.components {
            if let Some(p) = perms.get(deg) {
                out.components
                    .insert(*deg, p.iter().map(|&i| labels[i].clone()).collect());
            }
        }
        out
    }
}

/// A linear map raising degree by `degree_shift`, stored block by block.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMap {
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub degree_shift: i32,
    blocks: BTreeMap<i32, SparseMatrix>,
}

impl GradedMap {
    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, degree_shift: i32) -> Self {
        GradedMap { source, target, degree_shift, blocks: BTreeMap::new() }
    }

    /// Block at source degree `deg` must be `dim(target, deg+shift) × dim(source, deg)`.
    pub fn set_block(&mut self, deg: i32, block: SparseMatrix) -> Result<()> {
        let expected = (self.target.dim(deg + self.degree_shift), self.source.dim(deg));
        if block.shape() != expected {
            return Err(Error::ShapeMismatch {
                context: format!("block at degree {deg}"),
                expected,
                found: block.shape(),
            });
        }
        if block.is_zero() {
            self.blocks.remove(&deg);
        } else {
            self.blocks.insert(deg, block);
        }
        Ok(())
    }

    pub fn with_blocks<I>(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        degree_shift: i32,
        blocks: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, SparseMatrix)>,
    {
        let mut m = GradedMap::zero(source, target, degree_shift);
        for (deg, b) in blocks {
            m.set_block(deg, b)?;
        }
        Ok(m)
    }

    /// Block at `deg`, materializing zero blocks with the right shape.
    pub fn block(&self, deg: i32) -> SparseMatrix {
        self.blocks.get(&deg).cloned().unwrap_or_else(|| {
            SparseMatrix::zeros(self.target.dim(deg + self.degree_shift), self.source.dim(deg))
        })
    }

    pub fn stored_blocks(&self) -> impl Iterator<Item = (i32, &SparseMatrix)> {
        self.blocks.iter().map(|(d, b)| (*d, b))
    }

    pub fn apply(&self, deg: i32, v: &SparseVec) -> SparseVec {
        match self.blocks.get(&deg) {
            Some(b) => b.mul_vec(v),
            None => SparseVec::new(),
        }
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &GradedMap) -> Result<GradedMap> {
        let mut out = GradedMap::zero(
            first.source.clone(),
            self.target.clone(),
            first.degree_shift + self.degree_shift,
        );
        for deg in first.source.degrees() {
            let a = first.block(deg);
            let b = self.block(deg + first.degree_shift);
            if b.cols() != a.rows() {
                return Err(Error::ShapeMismatch {
                    context: format!("composition at degree {deg}"),
                    expected: (b.rows(), a.rows()),
                    found: b.shape(),
                });
            }
            out.set_block(deg, b.mul(&a))?;
        }
        Ok(out)
    }
}

/// A cochain complex: graded space plus a degree +1 differential.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainComplex {
    pub space: GradedVectorSpace,
    pub differential: GradedMap,
}

impl CochainComplex {
    /// Builds a complex without checking `d∘d = 0`; see [`check_complex`].
    pub fn new(space: GradedVectorSpace, differential: GradedMap) -> Result<Self> {
        if differential.degree_shift != 1 {
            return Err(Error::ShapeMismatch {
                context: "differential degree shift".into(),
                expected: (1, 0),
                found: (differential.degree_shift as usize, 0),
            });
        }
        if differential.source != space || differential.target != space {
            return Err(Error::ShapeMismatch {
                context: "differential source/target differ from the complex space".into(),
                expected: (space.total_dim(), space.total_dim()),
                found: (differential.target.total_dim(), differential.source.total_dim()),
            });
        }
        Ok(CochainComplex { space, differential })
    }

    /// Complex from bare dimensions and differential blocks `d_n: C^n → C^{n+1}`.
    pub fn from_blocks(dims: &BTreeMap<i32, usize>, blocks: BTreeMap<i32, SparseMatrix>) -> Result<Self> {
        let space = GradedVectorSpace::from_components(
            dims.iter()
                .map(|(&d, &n)| (d, (0..n).map(|i| format!("c{d}_{i}")).collect())),
        )?;
        let d = GradedMap::with_blocks(space.clone(), space.clone(), 1, blocks)?;
        CochainComplex::new(space, d)
    }

    pub fn d(&self, deg: i32) -> SparseMatrix {
        self.differential.block(deg)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space
            .degrees()
            .map(|d| Scalar::sign(d as i64).numer().clone() * self.space.dim(d) as i64)
            .map(|x| i64::try_from(x).expect("dimension fits in i64"))
            .sum()
    }
}

/// Checks `d_{n+1} ∘ d_n = 0` in every degree.
pub fn check_complex(c: &CochainComplex) -> Result<bool> {
    let Some((lo, hi)) = c.space.degree_range() else { return Ok(true) };
    for n in lo - 1..=hi {
        let a = c.d(n);
        let b = c.d(n + 1);
        if b.cols() != a.rows() {
            return Err(Error::ShapeMismatch {
                context: format!("d at degree {} after degree {n}", n + 1),
                expected: (b.rows(), a.rows()),
                found: b.shape(),
            });
        }
        if !b.mul(&a).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cohomology in one degree: dimension, class representatives, and the data
/// needed to read off the class of an arbitrary cocycle.
#[derive(Debug, Clone)]
pub struct CohomologyDegree {
    pub dim: usize,
    pub representatives: Vec<SparseVec>,
    pub(crate) image: Vec<SparseVec>,
    pub(crate) cochain_dim: usize,
    pub(crate) outgoing: SparseMatrix,
}

impl CohomologyDegree {
    /// Zero cohomology on a space of `cochain_dim` cochains with `d = 0`.
    pub fn empty(cochain_dim: usize) -> Self {
        CohomologyDegree {
            dim: 0,
            representatives: Vec::new(),
            image: Vec::new(),
            cochain_dim,
            outgoing: SparseMatrix::zeros(0, cochain_dim),
        }
    }

    pub fn is_cocycle(&self, v: &SparseVec) -> bool {
        self.outgoing.mul_vec(v).is_zero()
    }

    /// Coordinates of the class of the cocycle `v` with respect to
    /// `representatives`; `None` if `v` is not a cocycle.
    pub fn class_of(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        if !self.is_cocycle(v) {
            return None;
        }
        let mut cols = self.representatives.clone();
        cols.extend(self.image.iter().cloned());
        let m = SparseMatrix::from_columns(self.cochain_dim, &cols);
        let x = solve(&m, v).expect("cocycle must lie in reps + image");
        Some((0..self.dim).map(|i| x.get(i)).collect())
    }

    /// Whether the cocycle `v` is a coboundary.
    pub fn is_coboundary(&self, v: &SparseVec) -> bool {
        self.class_of(v).is_some_and(|c| c.iter().all(Scalar::is_zero))
    }

    /// A cochain `w` with `d w = v`, when `v` is a coboundary.
    pub fn bounding_cochain(&self, incoming: &SparseMatrix, v: &SparseVec) -> Option<SparseVec> {
        solve(incoming, v)
    }

    /// Cocycle representing the class with coordinates `coords`.
    pub fn cocycle_from_class(&self, coords: &[Scalar]) -> SparseVec {
        let mut v = SparseVec::new();
        for (c, r) in coords.iter().zip(&self.representatives) {
            v.add_scaled(r, c);
        }
        v
    }
}

/// Cohomology of a whole complex, by degree.
#[derive(Debug, Clone)]
pub struct Cohomology {
    pub degrees: BTreeMap<i32, CohomologyDegree>,
}

impl Cohomology {
    pub fn dim(&self, deg: i32) -> usize {
        self.degrees.get(&deg).map_or(0, |h| h.dim)
    }

    pub fn at(&self, deg: i32) -> Option<&CohomologyDegree> {
        self.degrees.get(&deg)
    }

    /// [`Self::at`], with an empty degree outside the support.
    pub fn at_or_empty(&self, deg: i32) -> CohomologyDegree {
        self.degrees.get(&deg).cloned().unwrap_or_else(|| CohomologyDegree::empty(0))
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees.iter().map(|(d, h)| (*d, h.dim)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|(d, h)| if d.rem_euclid(2) == 0 { h.dim as i64 } else { -(h.dim as i64) })
            .sum()
    }
}

/// `H^n = ker d_n / im d_{n-1}` in every degree of the support.
///
/// Representatives are chosen deterministically: kernel basis vectors (from
/// reduced echelon form, ascending free column) are taken in order whenever
/// they are independent of the image and earlier choices.
pub fn cohomology(c: &CochainComplex) -> Result<Cohomology> {
    if !check_complex(c)? {
        return Err(Error::NotAComplex);
    }
    let mut degrees = BTreeMap::new();
    for n in c.space.degrees() {
        let outgoing = c.d(n);
        let incoming = c.d(n - 1);
        let kernel = kernel_basis(&outgoing);
        let image: Vec<SparseVec> = incoming.col_vecs().into_iter().filter(|v| !v.is_zero()).collect();
        let mut span = SpanBasis::new();
        let mut image_basis = Vec::new();
        for v in &image {
            if span.insert(v) {
                image_basis.push(v.clone());
            }
        }
        let mut reps = Vec::new();
        for v in kernel.iter() {
            if span.insert(v) {
                reps.push(v.clone());
            }
        }
        debug_assert_eq!(reps.len(), kernel.len() - rank(&incoming));
        degrees.insert(
            n,
            CohomologyDegree {
                dim: reps.len(),
                representatives: reps,
                image: image_basis,
                cochain_dim: c.space.dim(n),
                outgoing,
            },
        );
    }
    Ok(Cohomology { degrees })
}

/// Matrix of the map induced on cohomology by a chain map given by its block
/// at degree `deg` (`target_cochains × source_cochains`).
pub fn induced_map(source: &CohomologyDegree, target: &CohomologyDegree, block: &SparseMatrix) -> Result<SparseMatrix> {
    let mut cols = Vec::with_capacity(source.dim);
    for r in &source.representatives {
        let img = block.mul_vec(r);
        let coords = target.class_of(&img).ok_or(Error::NotAChainMap)?;
        cols.push(SparseVec::from_dense(&coords));
    }
    Ok(SparseMatrix::from_columns(target.dim, &cols))
}

/// Direct sum of two complexes, first summand first in every degree.
pub fn direct_sum(a: &CochainComplex, b: &CochainComplex) -> Result<CochainComplex> {
    let degs: BTreeSet<i32> = a.space.degrees().chain(b.space.degrees()).collect();
    let dims: BTreeMap<i32, usize> = degs.iter().map(|&d| (d, a.space.dim(d) + b.space.dim(d))).collect();
    let mut blocks = BTreeMap::new();
    for &n in &degs {
        let m = SparseMatrix::zeros(dims.get(&(n + 1)).copied().unwrap_or(0), dims[&n])
            .with_block(0, 0, &a.d(n))
            .with_block(a.space.dim(n + 1), a.space.dim(n), &b.d(n));
        blocks.insert(n, m);
    }
    CochainComplex::from_blocks(&dims, blocks)
}

/// A degree-0 map between complexes that commutes with the differentials.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: CochainComplex,
    pub target: CochainComplex,
    pub map: GradedMap,
}

impl ChainMap {
    /// Checks `d f = f d` in every degree.
    pub fn new(source: CochainComplex, target: CochainComplex, blocks: BTreeMap<i32, SparseMatrix>) -> Result<Self> {
        let map = GradedMap::with_blocks(source.space.clone(), target.space.clone(), 0, blocks)?;
        let degs: BTreeSet<i32> = source.space.degrees().chain(target.space.degrees()).collect();
        for &n in &degs {
            if target.d(n).mul(&map.block(n)) != map.block(n + 1).mul(&source.d(n)) {
                return Err(Error::NotAChainMap);
            }
        }
        Ok(ChainMap { source, target, map })
    }

    pub fn zero(source: CochainComplex, target: CochainComplex) -> Self {
        let map = GradedMap::zero(source.space.clone(), target.space.clone(), 0);
        ChainMap { source, target, map }
    }

    pub fn block(&self, deg: i32) -> SparseMatrix {
        self.map.block(deg)
    }
}

/// The cone of `(l, n) ↦ h(l) − g(n)`: degree `p` is `L^p ⊕ N^p ⊕ M^{p−1}`
/// with `D(l, n, m) = (dl, dn, h(l) − g(n) − dm)`.
#[derive(Debug, Clone)]
pub struct MappingCone {
    pub complex: CochainComplex,
    pub h: ChainMap,
    pub g: ChainMap,
}

pub fn mapping_cone_complex(h: &ChainMap, g: &ChainMap) -> Result<MappingCone> {
    if h.target != g.target {
        return Err(Error::BaseMismatch);
    }
    let (l, n, m) = (&h.source, &g.source, &h.target);
    let degs: BTreeSet<i32> = l
        .space
        .degrees()
        .chain(n.space.degrees())
        .chain(m.space.degrees().map(|d| d + 1))
        .collect();
    let dim = |p: i32| l.space.dim(p) + n.space.dim(p) + m.space.dim(p - 1);
    let dims: BTreeMap<i32, usize> = degs.iter().map(|&p| (p, dim(p))).collect();
    let mut blocks = BTreeMap::new();
    for &p in &degs {
        let (lp, np) = (l.space.dim(p), n.space.dim(p));
        let (lq, nq) = (l.space.dim(p + 1), n.space.dim(p + 1));
        let block = SparseMatrix::zeros(dim(p + 1), dim(p))
            .with_block(0, 0, &l.d(p))
            .with_block(lq, lp, &n.d(p))
            .with_block(lq + nq, 0, &h.block(p))
            .with_block(lq + nq, lp, &g.block(p).scaled(&-Scalar::one()))
            .with_block(lq + nq, lp + np, &m.d(p - 1).scaled(&-Scalar::one()));
        blocks.insert(p, block);
    }
    let complex = CochainComplex::from_blocks(&dims, blocks)?;
    Ok(MappingCone { complex, h: h.clone(), g: g.clone() })
}

impl MappingCone {
    /// The long exact sequence
    /// `H^{lo−1}(M) → H^lo(C) → H^lo(L⊕N) → H^lo(M) → … → H^{hi+1}(C)`
    /// with the maps induced by projection, `h − g`, and `m ↦ (0, 0, m)`.
    pub fn long_exact_sequence(&self, lo: i32, hi: i32) -> Result<ExactSequence> {
        let (l, n, m) = (&self.h.source, &self.g.source, &self.h.target);
        let ln = direct_sum(l, n)?;
        let hc = cohomology(&self.complex)?;
        let hln = cohomology(&ln)?;
        let hm = cohomology(m)?;
        let at = |h: &Cohomology, d: i32, size: usize| h.at(d).cloned().unwrap_or_else(|| CohomologyDegree::empty(size));
        let mut seq = ExactSequence::default();
        // connecting map H^{p}(M) → H^{p+1}(C)
        let connecting = |p: i32| -> Result<SparseMatrix> {
            let (lq, nq) = (l.space.dim(p + 1), n.space.dim(p + 1));
            let inc = SparseMatrix::zeros(self.complex.space.dim(p + 1), m.space.dim(p))
                .with_block(lq + nq, 0, &SparseMatrix::identity(m.space.dim(p)));
            induced_map(
                &at(&hm, p, m.space.dim(p)),
                &at(&hc, p + 1, self.complex.space.dim(p + 1)),
                &inc,
            )
        };
        seq.push_node(format!("H^{}(M)", lo - 1), hm.dim(lo - 1));
        for p in lo..=hi {
            seq.push_map(connecting(p - 1)?);
            seq.push_node(format!("H^{p}(cone)"), hc.dim(p));
            let (lp, np) = (l.space.dim(p), n.space.dim(p));
            let proj = SparseMatrix::zeros(lp + np, self.complex.space.dim(p))
                .with_block(0, 0, &SparseMatrix::identity(lp + np));
            seq.push_map(induced_map(
                &at(&hc, p, self.complex.space.dim(p)),
                &at(&hln, p, lp + np),
                &proj,
            )?);
            seq.push_node(format!("H^{p}(L+N)"), hln.dim(p));
            let diff = SparseMatrix::zeros(m.space.dim(p), lp + np)
                .with_block(0, 0, &self.h.block(p))
                .with_block(0, lp, &self.g.block(p).scaled(&-Scalar::one()));
            seq.push_map(induced_map(&at(&hln, p, lp + np), &at(&hm, p, m.space.dim(p)), &diff)?);
            seq.push_node(format!("H^{p}(M)"), hm.dim(p));
        }
        seq.push_map(connecting(hi)?);
        seq.push_node(format!("H^{}(cone)", hi + 1), hc.dim(hi + 1));
        Ok(seq)
    }
}

/// A finite sequence of vector spaces and maps `V_0 → V_1 → … → V_k`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ExactSequence {
    pub nodes: Vec<(String, usize)>,
    pub maps: Vec<SparseMatrix>,
}

/// Exactness data at an interior node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeExactness {
    pub node: String,
    pub dim: usize,
    pub rank_in: usize,
    pub kernel_out: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

impl ExactSequence {
    pub fn push_node(&mut self, name: String, dim: usize) {
        self.nodes.push((name, dim));
    }

    pub fn push_map(&mut self, m: SparseMatrix) {
        self.maps.push(m);
    }

    /// Checks shapes, then exactness at every node. The two end nodes are
    /// checked against the zero map on their free side.
    pub fn verify(&self) -> Result<Vec<NodeExactness>> {
        if self.maps.len() + 1 != self.nodes.len() {
            return Err(Error::InvalidInput("sequence needs one map between consecutive nodes".into()));
        }
        for (i, m) in self.maps.iter().enumerate() {
            let expected = (self.nodes[i + 1].1, self.nodes[i].1);
            if m.shape() != expected {
                return Err(Error::ShapeMismatch { context: format!("map {i} of sequence"), expected, found: m.shape() });
            }
        }
        let k = self.nodes.len();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let (name, dim) = &self.nodes[i];
            let rank_in = if i == 0 { 0 } else { rank(&self.maps[i - 1]) };
            let kernel_out = if i + 1 == k { *dim } else { dim - rank(&self.maps[i]) };
            let composite_zero = i == 0 || i + 1 == k || self.maps[i].mul(&self.maps[i - 1]).is_zero();
            // the end nodes only have one side; exactness is claimed at interior nodes
            let exact = if i == 0 || i + 1 == k { true } else { composite_zero && rank_in == kernel_out };
            out.push(NodeExactness { node: name.clone(), dim: *dim, rank_in, kernel_out, composite_zero, exact });
        }
        Ok(out)
    }

    pub fn is_exact(&self) -> Result<bool> {
        Ok(self.verify()?.iter().all(|n| n.exact))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(dims: &[(i32, usize)], blocks: Vec<(i32, SparseMatrix)>) -> CochainComplex {
        CochainComplex::from_blocks(&dims.iter().copied().collect(), blocks.into_iter().collect()).unwrap()
    }

    #[test]
    fn zero_differential_is_complex() {
        let c = complex(&[(0, 2), (1, 3)], vec![]);
        assert!(check_complex(&c).unwrap());
        let h = cohomology(&c).unwrap();
        assert_eq!(h.dim(0), 2);
        assert_eq!(h.dim(1), 3);
    }

    #[test]
    fn identity_then_zero_is_complex() {
        let c = complex(&[(0, 1), (1, 1)], vec![(0, SparseMatrix::identity(1))]);
        assert!(check_complex(&c).unwrap());
        let h = cohomology(&c).unwrap();
        assert_eq!(h.dims().values().sum::<usize>(), 0);
    }

    #[test]
    fn two_identities_fail() {
        let c = complex(
            &[(0, 1), (1, 1), (2, 1)],
            vec![(0, SparseMatrix::identity(1)), (1, SparseMatrix::identity(1))],
        );
        assert!(!check_complex(&c).unwrap());
        assert!(matches!(cohomology(&c), Err(Error::NotAComplex)));
    }

    #[test]
    fn single_line_in_degree_zero() {
        let c = complex(&[(0, 1)], vec![]);
        assert_eq!(cohomology(&c).unwrap().dim(0), 1);
    }

    #[test]
    fn shape_mismatch_reported() {
        let space = GradedVectorSpace::from_components(vec![(0, vec!["a".into()])]).unwrap();
        let mut d = GradedMap::zero(space.clone(), space, 1);
        assert!(matches!(
            d.set_block(0, SparseMatrix::identity(2)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let k = complex(&[(0, 1)], vec![]);
        let zero = complex(&[], vec![]);
        let h = ChainMap::new(k.clone(), k.clone(), [(0, SparseMatrix::identity(1))].into()).unwrap();
        let g = ChainMap::zero(zero, k);
        let cone = mapping_cone_complex(&h, &g).unwrap();
        assert!(check_complex(&cone.complex).unwrap());
        assert_eq!(cohomology(&cone.complex).unwrap().dims().values().sum::<usize>(), 0);
        assert!(cone.long_exact_sequence(-1, 2).unwrap().is_exact().unwrap());
    }

    #[test]
    fn cone_of_zero_into_line_shifts() {
        let zero = complex(&[], vec![]);
        let k = complex(&[(0, 1)], vec![]);
        let h = ChainMap::zero(zero.clone(), k.clone());
        let g = ChainMap::zero(zero, k);
        let cone = mapping_cone_complex(&h, &g).unwrap();
        let hc = cohomology(&cone.complex).unwrap();
        assert_eq!(hc.dims(), [(1, 1)].into());
    }

    #[test]
    fn class_coordinates() {
        // C^0 = K, C^1 = K^2, d = (1, 1)^T: H^1 is one-dimensional
        let d0 = SparseMatrix::from_ints(&[&[1], &[1]]);
        let c = complex(&[(0, 1), (1, 2)], vec![(0, d0)]);
        let h = cohomology(&c).unwrap();
        let h1 = h.at(1).unwrap();
        assert_eq!(h1.dim, 1);
        let boundary = SparseVec::from_dense(&[Scalar::from_int(3), Scalar::from_int(3)]);
        assert!(h1.is_coboundary(&boundary));
        let rep = h1.representatives[0].clone();
        assert_eq!(h1.class_of(&rep.add(&boundary)).unwrap(), vec![Scalar::one()]);
    }
}
