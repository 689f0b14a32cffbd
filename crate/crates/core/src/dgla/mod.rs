//! Differential graded Lie algebras.
//!
//! Elements are sparse vectors over a flat basis: degrees ascending, labels in
//! order within a degree. Structure constants are stored for pairs `i ≤ j` and
//! the rest is recovered from graded skew-symmetry.

mod polyform;
mod validate;

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{ChainMap, CochainComplex, GradedMap, GradedVectorSpace, MappingCone};
use crate::scalar::Scalar;
use crate::sparse::{SparseMatrix, SparseVec};

pub use polyform::{htpy_fiber_check, poly_bracket, poly_d, poly_eval, HtpyFiberElement, PolyFormElement};
pub use validate::{validate_dgla, validate_morphism, AxiomKind, ValidationReport, Violation};

/// A structure constant `[e_i, e_j]`, or a marker that the product leaves a
/// truncated model.
#[derive(Debug, Clone, PartialEq)]
pub enum BracketValue {
    Value(SparseVec),
    Overflow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dgla {
    complex: CochainComplex,
    offsets: BTreeMap<i32, usize>,
    degrees: Vec<i32>,
    d_images: Vec<SparseVec>,
    brackets: BTreeMap<(usize, usize), BracketValue>,
}

impl Dgla {
    /// `brackets` is keyed by flat index pairs `(i, j)` with `i ≤ j`.
    pub fn new(complex: CochainComplex, brackets: BTreeMap<(usize, usize), BracketValue>) -> Result<Self> {
        let mut offsets = BTreeMap::new();
        let mut degrees = Vec::new();
        for deg in complex.space.degrees() {
            offsets.insert(deg, degrees.len());
            degrees.extend(std::iter::repeat_n(deg, complex.space.dim(deg)));
        }
        let n = degrees.len();
        let mut d_images = vec![SparseVec::new(); n];
        for (deg, block) in complex.differential.stored_blocks() {
            let (src, tgt) = (offsets[&deg], offsets.get(&(deg + 1)).copied().unwrap_or(0));
            for &(r, c, ref x) in block.triplets() {
                d_images[src + c].set(tgt + r, x.clone());
            }
        }
        for (&(i, j), v) in &brackets {
            let in_range = |k: usize| k < n;
            let ok = i <= j
                && in_range(j)
                && match v {
                    BracketValue::Value(v) => v.support_max().is_none_or(in_range),
                    BracketValue::Overflow => true,
                };
            if !ok {
                return Err(Error::InvalidInput(format!("bracket entry ({i}, {j}) out of range or unordered")));
            }
        }
        let brackets = brackets
            .into_iter()
            .filter(|(_, v)| !matches!(v, BracketValue::Value(v) if v.is_zero()))
            .collect();
        Ok(Dgla { complex, offsets, degrees, d_images, brackets })
    }

    pub fn abelian(complex: CochainComplex) -> Self {
        Dgla::new(complex, BTreeMap::new()).expect("empty bracket table is valid")
    }

    /// Builds from labels; each table row is `(a, b, [(coeff, c), ...])`
    /// meaning `[a, b] = Σ coeff·c`. Labels must be unique across degrees.
    pub fn from_labels(
        space: GradedVectorSpace,
        differential: GradedMap,
        table: &[(&str, &str, Vec<(Scalar, &str)>)],
    ) -> Result<Self> {
        let complex = CochainComplex::new(space, differential)?;
        let shell = Dgla::abelian(complex.clone());
        let mut brackets: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (a, b, combo) in table {
            let (i, j) = (shell.flat_index(a)?, shell.flat_index(b)?);
            let mut v = SparseVec::new();
            for (c, label) in combo {
                v.add_at(shell.flat_index(label)?, c);
            }
            let key = if i <= j {
                (i, j)
            } else {
                // [a,b] = −(−1)^{|a||b|}[b,a]
                v = v.scaled(&-Scalar::sign((shell.degrees[i] * shell.degrees[j]) as i64));
                (j, i)
            };
            brackets.insert(key, v);
        }
        Dgla::new(complex, brackets.into_iter().map(|(k, v)| (k, BracketValue::Value(v))).collect())
    }

    fn flat_index(&self, label: &str) -> Result<usize> {
        let mut hits = self
            .complex
            .space
            .degrees()
            .filter_map(|deg| self.complex.space.index_of(deg, label).map(|i| self.offsets[&deg] + i));
        match (hits.next(), hits.next()) {
            (Some(i), None) => Ok(i),
            (Some(_), Some(_)) => Err(Error::InvalidInput(format!("label `{label}` is ambiguous across degrees"))),
            _ => Err(Error::UnknownLabel(label.to_string())),
        }
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.complex.space
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn dim_in(&self, deg: i32) -> usize {
        self.complex.space.dim(deg)
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    /// Flat indices of the degree-`deg` component.
    pub fn range(&self, deg: i32) -> Range<usize> {
        match self.offsets.get(&deg) {
            Some(&o) => o..o + self.dim_in(deg),
            None => 0..0,
        }
    }

    /// `"deg:label"` for a flat index.
    pub fn label(&self, i: usize) -> String {
        let deg = self.degrees[i];
        format!("{deg}:{}", self.complex.space.labels(deg)[i - self.offsets[&deg]])
    }

    /// Flat vector from a vector in the degree-`deg` component.
    pub fn embed(&self, deg: i32, v: &SparseVec) -> SparseVec {
        v.shifted(self.range(deg).start)
    }

    /// Degree-`deg` component of a flat vector, in local coordinates.
    pub fn component(&self, deg: i32, v: &SparseVec) -> SparseVec {
        let r = self.range(deg);
        v.slice(r.start, r.len())
    }

    /// The unique degree of a nonzero homogeneous vector.
    pub fn homogeneous_degree(&self, v: &SparseVec) -> Option<i32> {
        let mut degs = v.iter().map(|(i, _)| self.degrees[i]);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_in_degree(&self, v: &SparseVec, deg: i32) -> bool {
        v.iter().all(|(i, _)| self.degrees[i] == deg)
    }

    pub fn d(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.iter() {
            out.add_scaled(&self.d_images[i], c);
        }
        out
    }

    pub fn d_basis(&self, i: usize) -> &SparseVec {
        &self.d_images[i]
    }

    /// Stored table entry for `i ≤ j`.
    pub fn stored_bracket(&self, i: usize, j: usize) -> Option<&BracketValue> {
        self.brackets.get(&(i, j))
    }

    pub fn bracket_table(&self) -> impl Iterator<Item = (&(usize, usize), &BracketValue)> {
        self.brackets.iter()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// `[e_i, e_j]`, using skew-symmetry for `i > j`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Result<SparseVec> {
        let (key, sign) = if i <= j {
            ((i, j), Scalar::one())
        } else {
            ((j, i), -Scalar::sign((self.degrees[i] * self.degrees[j]) as i64))
        };
        match self.brackets.get(&key) {
            None => Ok(SparseVec::new()),
            Some(BracketValue::Value(v)) => Ok(v.scaled(&sign)),
            Some(BracketValue::Overflow) => Err(Error::WindowOverflow(format!(
                "bracket [{}, {}] leaves the truncated model",
                self.label(i),
                self.label(j)
            ))),
        }
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let v = self.bracket_basis(i, j)?;
                if !v.is_zero() {
                    out.add_scaled(&v, &(a * b));
                }
            }
        }
        Ok(out)
    }
}

/// Direct product of dgLas with componentwise bracket, plus the inclusion
/// of each factor's flat indices.
pub fn product(factors: &[&Dgla]) -> (Dgla, Vec<Vec<usize>>) {
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut local_offset: Vec<BTreeMap<i32, usize>> = Vec::new();
    for f in factors {
        let mut lo = BTreeMap::new();
        for deg in f.space().degrees() {
            let e = dims.entry(deg).or_insert(0);
            lo.insert(deg, *e);
            *e += f.dim_in(deg);
        }
        local_offset.push(lo);
    }
    let space = GradedVectorSpace::from_components(dims.iter().map(|(&d, &n)| {
        let mut labels = Vec::with_capacity(n);
        for (k, f) in factors.iter().enumerate() {
            labels.extend(f.space().labels(d).iter().map(|l| format!("f{k}.{l}")));
        }
        (d, labels)
    }))
    .expect("prefixed labels are unique");
    let mut global_offset = BTreeMap::new();
    let mut acc = 0;
    for (&d, &n) in &dims {
        global_offset.insert(d, acc);
        acc += n;
    }
    let inclusions: Vec<Vec<usize>> = factors
        .iter()
        .enumerate()
        .map(|(k, f)| (0..f.dim()).map(|i| {
            let d = f.degree_of(i);
            global_offset[&d] + local_offset[k][&d] + (i - f.range(d).start)
        }).collect())
        .collect();
    let mut blocks: BTreeMap<i32, SparseMatrix> = BTreeMap::new();
    for (k, f) in factors.iter().enumerate() {
        for (deg, block) in f.complex().differential.stored_blocks() {
            let tgt = dims.get(&(deg + 1)).copied().unwrap_or(0);
            let r0 = local_offset[k].get(&(deg + 1)).copied().unwrap_or(0);
            let c0 = local_offset[k][&deg];
            let cur = blocks.remove(&deg).unwrap_or_else(|| SparseMatrix::zeros(tgt, dims[&deg]));
            blocks.insert(deg, cur.with_block(r0, c0, block));
        }
    }
    let differential = GradedMap::with_blocks(space.clone(), space.clone(), 1, blocks).expect("block shapes");
    let mut brackets = BTreeMap::new();
    for (k, f) in factors.iter().enumerate() {
        let inc = &inclusions[k];
        for (&(i, j), v) in f.bracket_table() {
            let v = match v {
                BracketValue::Value(v) => BracketValue::Value(v.reindex(|x| inc[x])),
                BracketValue::Overflow => BracketValue::Overflow,
            };
            brackets.insert((inc[i], inc[j]), v);
        }
    }
    let complex = CochainComplex::new(space, differential).expect("product complex");
    (Dgla::new(complex, brackets).expect("product table"), inclusions)
}

/// The zero dgLa.
pub fn zero_dgla() -> Dgla {
    let s = GradedVectorSpace::new();
    Dgla::abelian(CochainComplex::new(s.clone(), GradedMap::zero(s.clone(), s, 1)).expect("empty complex"))
}

/// A degree-preserving linear map between dgLas, as a flat matrix.
#[derive(Debug, Clone)]
pub struct DglaMorphism {
    pub source: Arc<Dgla>,
    pub target: Arc<Dgla>,
    matrix: SparseMatrix,
}

impl DglaMorphism {
    /// Builds from a flat `target.dim() × source.dim()` matrix; rejects maps
    /// that do not preserve degree. Compatibility with `d` and brackets is
    /// checked by [`validate_morphism`].
    pub fn new(source: Arc<Dgla>, target: Arc<Dgla>, matrix: SparseMatrix) -> Result<Self> {
        let expected = (target.dim(), source.dim());
        if matrix.shape() != expected {
            return Err(Error::ShapeMismatch { context: "dgLa morphism".into(), expected, found: matrix.shape() });
        }
        for &(r, c, _) in matrix.triplets() {
            if target.degree_of(r) != source.degree_of(c) {
                return Err(Error::DegreeError {
                    expected: source.degree_of(c),
                    found: format!("image of {} has degree {}", source.label(c), target.degree_of(r)),
                });
            }
        }
        Ok(DglaMorphism { source, target, matrix })
    }

    pub fn from_graded_map(source: Arc<Dgla>, target: Arc<Dgla>, map: &GradedMap) -> Result<Self> {
        if map.degree_shift != 0 {
            return Err(Error::DegreeError { expected: 0, found: format!("shift {}", map.degree_shift) });
        }
        let mut triplets = Vec::new();
        for (deg, block) in map.stored_blocks() {
            let (r0, c0) = (target.range(deg).start, source.range(deg).start);
            triplets.extend(block.triplets().iter().map(|(r, c, x)| (r0 + r, c0 + c, x.clone())));
        }
        let matrix = SparseMatrix::from_triplets(target.dim(), source.dim(), triplets);
        DglaMorphism::new(source, target, matrix)
    }

    pub fn identity(g: Arc<Dgla>) -> Self {
        let n = g.dim();
        DglaMorphism { source: g.clone(), target: g, matrix: SparseMatrix::identity(n) }
    }

    pub fn zero(source: Arc<Dgla>, target: Arc<Dgla>) -> Self {
        let matrix = SparseMatrix::zeros(target.dim(), source.dim());
        DglaMorphism { source, target, matrix }
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &DglaMorphism) -> Result<DglaMorphism> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(Error::BaseMismatch);
        }
        Ok(DglaMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        })
    }

    /// Degree-`deg` block in local coordinates.
    pub fn block(&self, deg: i32) -> SparseMatrix {
        let (r, c) = (self.target.range(deg), self.source.range(deg));
        self.matrix.row_range(r.start, r.len()).column_range(c.start, c.len())
    }

    pub fn chain_map(&self) -> Result<ChainMap> {
        let degs = self.source.space().degrees().chain(self.target.space().degrees());
        let blocks = degs.map(|d| (d, self.block(d))).collect();
        ChainMap::new(self.source.complex().clone(), self.target.complex().clone(), blocks)
    }
}

/// Cone of `(l, n) ↦ h(l) − g(n)` for two morphisms into a common target.
pub fn mapping_cone(h: &DglaMorphism, g: &DglaMorphism) -> Result<MappingCone> {
    if h.target.as_ref() != g.target.as_ref() {
        return Err(Error::BaseMismatch);
    }
    crate::graded::mapping_cone_complex(&h.chain_map()?, &g.chain_map()?)
}

/// Convenience constructors for common dgLas.
pub mod examples {
    use super::*;

    /// A single graded component list, with labels `e0, e1, …` per degree.
    pub fn space(dims: &[(i32, usize)]) -> GradedVectorSpace {
        GradedVectorSpace::from_components(
            dims.iter()
                .map(|&(d, n)| (d, (0..n).map(|i| format!("x{d}_{i}")).collect())),
        )
        .expect("generated labels are unique")
    }

    /// Abelian dgLa with zero differential.
    pub fn abelian(dims: &[(i32, usize)]) -> Dgla {
        let s = space(dims);
        Dgla::abelian(CochainComplex::new(s.clone(), GradedMap::zero(s.clone(), s, 1)).expect("valid"))
    }

    /// `gl_n` in degree 0 with the commutator; basis `e{i}{j}` row-major.
    pub fn gl(n: usize) -> Dgla {
        graded_end(&[(0, n)], None)
    }

    /// Graded endomorphisms of `V = ⊕ V^p` (dims given per degree), with
    /// graded commutator and, if `delta` is given, `d = [delta, −]` for a
    /// degree-1 endomorphism `delta` of `V` with `delta² = 0` (given as a
    /// matrix on the flat basis of `V`).
    pub fn graded_end(v_dims: &[(i32, usize)], delta: Option<&SparseMatrix>) -> Dgla {
        let mut v_deg = Vec::new();
        for &(p, n) in v_dims {
            v_deg.extend(std::iter::repeat_n(p, n));
        }
        let n = v_deg.len();
        // basis E_{ij}: V_j → V_i, degree v_deg[i] − v_deg[j]
        let mut by_deg: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                by_deg.entry(v_deg[i] - v_deg[j]).or_default().push((i, j));
            }
        }
        let space = GradedVectorSpace::from_components(
            by_deg
                .iter()
                .map(|(&d, ps)| (d, ps.iter().map(|(i, j)| format!("e{i}_{j}")).collect())),
        )
        .expect("unique labels");
        let mut flat: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut k = 0;
        for ps in by_deg.values() {
            for &p in ps {
                flat.insert(p, k);
                k += 1;
            }
        }
        let deg_of = |(i, j): (usize, usize)| v_deg[i] - v_deg[j];
        // [E_ij, E_kl] = δ_jk E_il − (−1)^{|ij||kl|} δ_li E_kj
        let bracket = |a: (usize, usize), b: (usize, usize)| {
            let mut v = SparseVec::new();
            if a.1 == b.0 {
                v.add_at(flat[&(a.0, b.1)], &Scalar::one());
            }
            if b.1 == a.0 {
                v.add_at(flat[&(b.0, a.1)], &-Scalar::sign((deg_of(a) * deg_of(b)) as i64));
            }
            v
        };
        let keys: Vec<(usize, usize)> = flat.keys().copied().collect();
        let mut brackets = BTreeMap::new();
        for &a in &keys {
            for &b in &keys {
                let (ia, ib) = (flat[&a], flat[&b]);
                if ia <= ib {
                    let v = bracket(a, b);
                    if !v.is_zero() {
                        brackets.insert((ia, ib), BracketValue::Value(v));
                    }
                }
            }
        }
        let mut d_images: Vec<(usize, SparseVec)> = Vec::new();
        if let Some(delta) = delta {
            let mut dv = SparseVec::new();
            for &(r, c, ref x) in delta.triplets() {
                dv.add_at(flat[&(r, c)], x);
            }
            let pair_of: BTreeMap<usize, (usize, usize)> = flat.iter().map(|(&p, &i)| (i, p)).collect();
            for &a in &keys {
                // d(E) = [δ, E]
                let mut out = SparseVec::new();
                for (ib, x) in dv.iter() {
                    out.add_scaled(&bracket(pair_of[&ib], a), x);
                }
                d_images.push((flat[&a], out));
            }
        }
        let dims: BTreeMap<i32, usize> = by_deg.iter().map(|(&d, ps)| (d, ps.len())).collect();
        let offsets: BTreeMap<i32, usize> = {
            let mut acc = 0;
            dims.iter()
                .map(|(&d, &n)| {
                    let o = acc;
                    acc += n;
                    (d, o)
                })
                .collect()
        };
        let deg_flat = |i: usize| *offsets.iter().rev().find(|(_, &o)| o <= i).expect("offset").0;
        let mut blocks: BTreeMap<i32, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
        for (c, img) in d_images {
            let dc = deg_flat(c);
            for (r, x) in img.iter() {
                blocks.entry(dc).or_default().push((r - offsets[&(dc + 1)], c - offsets[&dc], x.clone()));
            }
        }
        let blocks: BTreeMap<i32, SparseMatrix> = blocks
            .into_iter()
            .map(|(d, t)| (d, SparseMatrix::from_triplets(dims[&(d + 1)], dims[&d], t)))
            .collect();
        let differential = GradedMap::with_blocks(space.clone(), space.clone(), 1, blocks).expect("shapes");
        Dgla::new(CochainComplex::new(space, differential).expect("complex"), brackets).expect("valid table")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn gl2_bracket_is_commutator() {
        let g = gl(2);
        // e0_1 and e1_0 give e0_0 − e1_1
        let i = g.flat_index("e0_1").unwrap();
        let j = g.flat_index("e1_0").unwrap();
        let v = g.bracket_basis(i, j).unwrap();
        assert_eq!(v.get(g.flat_index("e0_0").unwrap()), Scalar::one());
        assert_eq!(v.get(g.flat_index("e1_1").unwrap()), -Scalar::one());
        assert_eq!(g.bracket_basis(j, i).unwrap(), v.neg());
    }

    #[test]
    fn unknown_label_rejected() {
        let s = space(&[(0, 1)]);
        let d = GradedMap::zero(s.clone(), s.clone(), 1);
        let err = Dgla::from_labels(s, d, &[("x0_0", "nope", vec![])]).unwrap_err();
        assert_eq!(err, Error::UnknownLabel("nope".into()));
    }

    #[test]
    fn morphism_must_preserve_degree() {
        let a = Arc::new(abelian(&[(0, 1), (1, 1)]));
        let m = SparseMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        assert!(DglaMorphism::new(a.clone(), a, m).is_err());
    }
}
