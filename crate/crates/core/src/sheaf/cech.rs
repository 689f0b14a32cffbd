//! Windowed section spaces, Čech complexes and cup products.
//!
//! Sections over a simplex are written in the trivialization of its first
//! vertex. On `P¹` every space splits by torus weight and restrictions
//! preserve weight, so truncating weights to a window gives a direct
//! summand of the Čech complex; cohomology is reported only when it agrees
//! at windows `D` and `D + 1`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::laurent::{LMatrix, Laurent};
use super::presentation::{vec_index, CoherentSystem, SheafPresentation};
use crate::error::{Error, Result};
use crate::graded::{cohomology, CochainComplex, Cohomology, GradedMap, GradedVectorSpace};
use crate::scalar::Scalar;
use crate::sparse::{SparseMatrix, SparseVec};

/// Weight window `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn symmetric(d: i64) -> Self {
        Window { lo: -d, hi: d }
    }

    pub fn widened(self, by: i64) -> Self {
        Window { lo: self.lo - by, hi: self.hi + by }
    }

    pub fn contains(self, w: i64) -> bool {
        self.lo <= w && w <= self.hi
    }
}

/// Basis `z^k e_a` of windowed sections of a sheaf over each simplex.
#[derive(Debug, Clone)]
pub struct SectionModel {
    pub sheaf: SheafPresentation,
    pub window: Window,
    bases: Vec<Vec<(usize, i64)>>,
    index: Vec<BTreeMap<(usize, i64), usize>>,
}

impl SectionModel {
    pub fn new(sheaf: &SheafPresentation, window: Window) -> Self {
        let cover = sheaf.cover.clone();
        let mut bases = Vec::new();
        let mut index = Vec::new();
        for s in cover.simplices() {
            let ring = cover.ring(s);
            let lambda = sheaf.frame_weights(s[0]);
            let mut b = Vec::new();
            for (a, &l) in lambda.iter().enumerate() {
                for w in window.lo..=window.hi {
                    let k = w - l;
                    if ring.allows(k) {
                        b.push((a, k));
                    }
                }
            }
            index.push(b.iter().enumerate().map(|(i, &key)| (key, i)).collect());
            bases.push(b);
        }
        SectionModel { sheaf: sheaf.clone(), window, bases, index }
    }

    fn pos(&self, s: &[usize]) -> usize {
        self.sheaf.cover.index_of(s).expect("simplex of the cover")
    }

    pub fn dim(&self, s: &[usize]) -> usize {
        self.bases[self.pos(s)].len()
    }

    pub fn basis(&self, s: &[usize]) -> &[(usize, i64)] {
        &self.bases[self.pos(s)]
    }

    pub fn label(&self, s: &[usize], i: usize) -> String {
        let (a, k) = self.basis(s)[i];
        let v: String = s.iter().map(|v| v.to_string()).collect();
        format!("V{v}:e{a}z^{k}")
    }

    /// Coordinates to a column of Laurent polynomials in the chart `s[0]`.
    pub fn to_local(&self, s: &[usize], coords: &SparseVec) -> Vec<Laurent> {
        let b = self.basis(s);
        let mut out = vec![Laurent::zero(); self.sheaf.rank];
        for (i, c) in coords.iter() {
            let (a, k) = b[i];
            out[a].add_term(k, c);
        }
        out
    }

    /// Inverse of [`Self::to_local`]; terms outside the window are an error.
    pub fn from_local(&self, s: &[usize], v: &[Laurent]) -> Result<SparseVec> {
        let idx = &self.index[self.pos(s)];
        let mut out = SparseVec::new();
        for (a, x) in v.iter().enumerate() {
            for (k, c) in x.terms() {
                let i = idx.get(&(a, k)).ok_or_else(|| {
                    Error::WindowOverflow(format!("{}: z^{k} e{a} on {s:?} is outside {:?}", self.sheaf.name, self.window))
                })?;
                out.set(*i, c.clone());
            }
        }
        Ok(out)
    }

    /// `dim(s) × dim(face)` matrix of `v ↦ g_{face[0], s[0]} v`.
    pub fn restriction(&self, face: &[usize], s: &[usize]) -> Result<SparseMatrix> {
        let g = self.sheaf.transition(face[0], s[0]);
        let mut cols = Vec::with_capacity(self.dim(face));
        for i in 0..self.dim(face) {
            let v = LMatrix::column(self.to_local(face, &SparseVec::unit(i)));
            let moved = g.mul(&v)?;
            let col: Vec<Laurent> = (0..self.sheaf.rank).map(|a| moved.get(a, 0).clone()).collect();
            cols.push(self.from_local(s, &col)?);
        }
        Ok(SparseMatrix::from_columns(self.dim(s), &cols))
    }

    /// Offsets of the simplices of dimension `p` inside `C^p`.
    pub fn cochain_offsets(&self, p: usize) -> Vec<usize> {
        let mut acc = 0;
        self.sheaf
            .cover
            .nerve(p)
            .iter()
            .map(|s| {
                let o = acc;
                acc += self.dim(s);
                o
            })
            .collect()
    }

    pub fn cochain_dim(&self, p: usize) -> usize {
        self.sheaf.cover.nerve(p).iter().map(|s| self.dim(s)).sum()
    }

    /// A global section as a 0-cochain.
    pub fn section_cochain(&self, section: &[Vec<Laurent>]) -> Result<SparseVec> {
        let offs = self.cochain_offsets(0);
        let mut out = SparseVec::new();
        for (pos, s) in self.sheaf.cover.nerve(0).iter().enumerate() {
            out = out.add(&self.from_local(s, &section[s[0]])?.shifted(offs[pos]));
        }
        Ok(out)
    }

    /// Local data of a `p`-cochain, per simplex of dimension `p`.
    pub fn cochain_locals(&self, p: usize, v: &SparseVec) -> Vec<Vec<Laurent>> {
        let offs = self.cochain_offsets(p);
        self.sheaf
            .cover
            .nerve(p)
            .iter()
            .enumerate()
            .map(|(pos, s)| self.to_local(s, &v.slice(offs[pos], self.dim(s))))
            .collect()
    }

    /// A `p`-cochain from local data per simplex of dimension `p`.
    pub fn cochain_from_locals(&self, p: usize, locals: &[Vec<Laurent>]) -> Result<SparseVec> {
        let offs = self.cochain_offsets(p);
        let mut out = SparseVec::new();
        for (pos, s) in self.sheaf.cover.nerve(p).iter().enumerate() {
            out = out.add(&self.from_local(s, &locals[pos])?.shifted(offs[pos]));
        }
        Ok(out)
    }
}

/// `Č^p = ⊕_{|σ| = p+1} Γ(σ)`, `(δx)_σ = Σ_k (−1)^k x_{σ∖k}|_σ`.
pub fn cech_complex(model: &SectionModel) -> Result<CochainComplex> {
    let cover = model.sheaf.cover.clone();
    let top = cover.top_dim();
    let mut comps = Vec::new();
    for p in 0..=top {
        let labels: Vec<String> = cover
            .nerve(p)
            .iter()
            .flat_map(|s| (0..model.dim(s)).map(move |i| model.label(s, i)))
            .collect();
        comps.push((p as i32, labels));
    }
    let space = GradedVectorSpace::from_components(comps)?;
    let mut blocks = BTreeMap::new();
    for p in 0..top {
        let (src, tgt) = (model.cochain_offsets(p), model.cochain_offsets(p + 1));
        let lower = cover.nerve(p);
        let mut t = Vec::new();
        for (pos, s) in cover.nerve(p + 1).iter().enumerate() {
            for k in 0..s.len() {
                let f = cover.face(s, k);
                let fpos = lower.iter().position(|x| *x == f.as_slice()).expect("closed nerve");
                let sign = Scalar::sign(k as i64);
                for &(r, c, ref x) in model.restriction(&f, s)?.triplets() {
                    t.push((tgt[pos] + r, src[fpos] + c, x * &sign));
                }
            }
        }
        blocks.insert(p as i32, SparseMatrix::from_triplets(model.cochain_dim(p + 1), model.cochain_dim(p), t));
    }
    let d = GradedMap::with_blocks(space.clone(), space.clone(), 1, blocks)?;
    CochainComplex::new(space, d)
}

/// Dimensions of windowed Čech cohomology, degrees `0..=top`.
pub fn cech_dims(sheaf: &SheafPresentation, window: Window) -> Result<Vec<usize>> {
    let h = cohomology(&cech_complex(&SectionModel::new(sheaf, window))?)?;
    Ok((0..=sheaf.cover.top_dim() as i32).map(|p| h.dim(p)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CechCohomology {
    pub sheaf: String,
    pub window: i64,
    pub dims: Vec<usize>,
    pub euler_characteristic: i64,
    pub stable: bool,
}

impl CechCohomology {
    pub fn h(&self, p: usize) -> usize {
        self.dims.get(p).copied().unwrap_or(0)
    }
}

/// Čech cohomology at window `D`, withheld unless it agrees with `D + 1`.
pub fn cech_cohomology(sheaf: &SheafPresentation, d: i64) -> Result<CechCohomology> {
    sheaf.check_cocycle()?;
    let dims = cech_dims(sheaf, Window::symmetric(d))?;
    let next = cech_dims(sheaf, Window::symmetric(d + 1))?;
    if dims != next {
        return Err(Error::WindowNotStable { window: d });
    }
    let euler = dims.iter().enumerate().map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
    Ok(CechCohomology { sheaf: sheaf.name.clone(), window: d, dims, euler_characteristic: euler, stable: true })
}

/// Cohomology of a windowed model, with the complex for class computations.
pub fn model_cohomology(model: &SectionModel) -> Result<(CochainComplex, Cohomology)> {
    let c = cech_complex(model)?;
    let h = cohomology(&c)?;
    Ok((c, h))
}

/// Column-major vector of `rows × cols` entries back to a matrix.
pub fn unvec(rows: usize, cols: usize, v: &[Laurent]) -> LMatrix {
    let mut m = LMatrix::zeros(rows, cols);
    for a in 0..rows {
        for b in 0..cols {
            m.set(a, b, v[vec_index(rows, a, b)].clone());
        }
    }
    m
}

pub fn vectorize(m: &LMatrix) -> Vec<Laurent> {
    let mut v = vec![Laurent::zero(); m.rows() * m.cols()];
    for (a, b, x) in m.entries() {
        v[vec_index(m.rows(), a, b)] = x.clone();
    }
    v
}

/// `(a ∪ s)_σ = a_σ · s|_σ` for a 1-cochain `a` of `End(E)` (in `end_model`)
/// and a global section `s`, as a 1-cochain of `E` (in `e_model`).
pub fn cup(end_model: &SectionModel, a: &SparseVec, section: &[Vec<Laurent>], e_model: &SectionModel) -> Result<SparseVec> {
    let r = e_model.sheaf.rank;
    if end_model.sheaf.rank != r * r {
        return Err(Error::ShapeMismatch {
            context: "cup product".into(),
            expected: (r * r, r),
            found: (end_model.sheaf.rank, r),
        });
    }
    let cover = e_model.sheaf.cover.clone();
    let locals: Vec<Vec<Laurent>> = end_model
        .cochain_locals(1, a)
        .iter()
        .zip(cover.nerve(1))
        .map(|(av, s)| {
            let prod = unvec(r, r, av).mul(&LMatrix::column(section[s[0]].clone()))?;
            Ok((0..r).map(|i| prod.get(i, 0).clone()).collect())
        })
        .collect::<Result<_>>()?;
    e_model.cochain_from_locals(1, &locals)
}

/// Windows large enough for `End(E)` and for `E`-valued cup products.
pub fn cup_windows(system: &CoherentSystem, d: i64) -> Result<(Window, Window)> {
    let spread = system.evaluation()?.weight_spread();
    Ok((Window::symmetric(d), Window::symmetric(d).widened(spread)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::cover::{make_finite_cover, make_p1_cover};
    use crate::sheaf::presentation::{direct_sum, end_sheaf, make_line_bundle, trivial_sheaf};
    use std::sync::Arc;

    #[test]
    fn line_bundles_on_p1() {
        let c = Arc::new(make_p1_cover(6).unwrap());
        for (d, want) in [(2, vec![3, 0]), (-1, vec![0, 0]), (-3, vec![0, 2])] {
            let h = cech_cohomology(&make_line_bundle(d, &c).unwrap(), 5).unwrap();
            assert_eq!(h.dims, want, "O({d})");
            assert_eq!(h.euler_characteristic, d + 1);
        }
    }

    #[test]
    fn small_window_is_unstable() {
        let c = Arc::new(make_p1_cover(6).unwrap());
        let o = make_line_bundle(4, &c).unwrap();
        assert!(matches!(cech_cohomology(&o, 2), Err(Error::WindowNotStable { window: 2 })));
    }

    #[test]
    fn end_of_split_bundle() {
        let c = Arc::new(make_p1_cover(6).unwrap());
        let e = direct_sum(&[&make_line_bundle(0, &c).unwrap(), &make_line_bundle(-2, &c).unwrap()]).unwrap();
        assert_eq!(cech_cohomology(&end_sheaf(&e).unwrap(), 4).unwrap().dims, vec![5, 1]);
    }

    #[test]
    fn triangle_nerve_without_triple_overlap() {
        let c = Arc::new(make_finite_cover(3, &[[0, 1], [1, 2], [0, 2]], &[]).unwrap());
        let o = trivial_sheaf(&c, 1, "O").unwrap();
        assert_eq!(cech_cohomology(&o, 1).unwrap().dims, vec![1, 1]);
        let c = Arc::new(make_finite_cover(3, &[[0, 1], [1, 2], [0, 2]], &[[0, 1, 2]]).unwrap());
        let o = trivial_sheaf(&c, 1, "O").unwrap();
        assert_eq!(cech_cohomology(&o, 1).unwrap().dims, vec![1, 0, 0]);
    }
}
