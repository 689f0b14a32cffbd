//! Sheaves of dgLas of block matrices and their Čech semicosimplicial dgLas.
//!
//! A sheaf here is a graded bundle `Q = ⊕ Q_p` together with a set of
//! coordinate blocks `Hom(Q_q, Q_p)`. Elements over a simplex are full block
//! matrices in the trivialization of its first vertex; the bracket is the
//! graded commutator and the differential, when present, is `[S, −]` for a
//! degree-one block `S`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::cech::{unvec, vectorize, SectionModel, Window};
use super::laurent::LMatrix;
use super::presentation::{hom_sheaf, CoherentSystem, SheafMorphism, SheafPresentation};
use crate::dgla::{product, BracketValue, Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::graded::{CochainComplex, GradedMap, GradedVectorSpace};
use crate::scalar::Scalar;
use crate::semicosimplicial::{total_complex, ScDgla, TotalComplex};
use crate::sparse::{SparseMatrix, SparseVec};

#[derive(Debug, Clone)]
pub struct BundlePart {
    pub name: String,
    pub degree: i32,
    pub sheaf: SheafPresentation,
}

/// Coordinates on `Hom(Q_col, Q_row)`.
#[derive(Debug, Clone)]
pub struct CoordBlock {
    pub row: usize,
    pub col: usize,
    pub model: SectionModel,
}

#[derive(Debug, Clone)]
pub struct MatrixDglaSheaf {
    pub name: String,
    pub parts: Vec<BundlePart>,
    pub blocks: Vec<CoordBlock>,
    /// For `L(α)` on `F ⊕ G`: the `(G, F)` block is `αa + αbα − dα`.
    pub graph: Option<SheafMorphism>,
    /// `S` in block `(row, col)`; the differential is `[S, −]`.
    pub differential: Option<(usize, usize, SheafMorphism)>,
}

/// Which sheaf of dgLas to build.
#[derive(Debug, Clone)]
pub enum DglaSelector {
    /// `E = Hom(O, E)` as an abelian sheaf.
    Sections(SheafPresentation),
    End(SheafPresentation),
    /// `End F × End G`, block diagonal in `End(F ⊕ G)`.
    EndPair(SheafPresentation, SheafPresentation),
    /// `End(F ⊕ G)`, with the `(G, F)` block window widened.
    EndSum(SheafPresentation, SheafPresentation, i64),
    /// `Hom(F, G)` as the abelian `(G, F)` block of `End(F ⊕ G)`, widened.
    HomBlock(SheafPresentation, SheafPresentation, i64),
    /// Graph-preserving subalgebra `L(α)`.
    Graph(SheafMorphism),
    /// `Hom^{≥0}(Q, Q)` for `Q = U⊗O → E` in degrees 0, 1.
    HomQQ(CoherentSystem),
    /// Kernel of `Hom^{≥0}(Q, Q) → End(E)`.
    MDelta(CoherentSystem),
}

impl MatrixDglaSheaf {
    pub fn from_selector(sel: &DglaSelector, window: Window) -> Result<Self> {
        let part = |name: &str, degree, sheaf: &SheafPresentation| BundlePart {
            name: name.to_string(),
            degree,
            sheaf: sheaf.clone(),
        };
        let build = |name: String, parts: Vec<BundlePart>, blocks: &[(usize, usize, i64)]| -> Result<Self> {
            let blocks = blocks
                .iter()
                .map(|&(row, col, widen)| {
                    let h = hom_sheaf(&parts[col].sheaf, &parts[row].sheaf)?;
                    Ok(CoordBlock { row, col, model: SectionModel::new(&h, window.widened(widen)) })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MatrixDglaSheaf { name, parts, blocks, graph: None, differential: None })
        };
        match sel {
            DglaSelector::Sections(e) => {
                let o = super::presentation::trivial_sheaf(&e.cover, 1, "O")?;
                build(e.name.clone(), vec![part("O", 0, &o), part("E", 0, e)], &[(1, 0, 0)])
            }
            DglaSelector::End(e) => build(format!("End({})", e.name), vec![part("E", 0, e)], &[(0, 0, 0)]),
            DglaSelector::EndPair(f, g) => {
                f.same_cover(g)?;
                let name = format!("End({})xEnd({})", f.name, g.name);
                build(name, vec![part("F", 0, f), part("G", 0, g)], &[(0, 0, 0), (1, 1, 0)])
            }
            DglaSelector::EndSum(f, g, widen) => {
                f.same_cover(g)?;
                let name = format!("End({}+{})", f.name, g.name);
                let blocks = [(0, 0, 0), (1, 0, *widen), (0, 1, 0), (1, 1, 0)];
                build(name, vec![part("F", 0, f), part("G", 0, g)], &blocks)
            }
            DglaSelector::HomBlock(f, g, widen) => {
                f.same_cover(g)?;
                let name = format!("Hom({},{})", f.name, g.name);
                build(name, vec![part("F", 0, f), part("G", 0, g)], &[(1, 0, *widen)])
            }
            DglaSelector::Graph(alpha) => {
                let (f, g) = (&alpha.source, &alpha.target);
                let name = format!("L({}->{})", f.name, g.name);
                let mut s = build(name, vec![part("F", 0, f), part("G", 0, g)], &[(0, 0, 0), (0, 1, 0), (1, 1, 0)])?;
                s.graph = Some(alpha.clone());
                Ok(s)
            }
            DglaSelector::HomQQ(sys) | DglaSelector::MDelta(sys) => {
                let s = sys.evaluation()?;
                let spread = s.weight_spread();
                let parts = vec![part("U", 0, &s.source), part("E", 1, &sys.sheaf)];
                let mut out = if matches!(sel, DglaSelector::HomQQ(_)) {
                    build(format!("Hom>=0(Q,Q)[{}]", sys.sheaf.name), parts, &[(0, 0, 0), (1, 1, 0), (1, 0, spread)])?
                } else {
                    build(format!("m[{}]", sys.sheaf.name), parts, &[(0, 0, 0), (1, 0, spread)])?
                };
                out.differential = Some((1, 0, s));
                Ok(out)
            }
        }
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|p| {
                let o = acc;
                acc += p.sheaf.rank;
                o
            })
            .collect()
    }

    fn size(&self) -> usize {
        self.parts.iter().map(|p| p.sheaf.rank).sum()
    }

    fn block_degree(&self, b: &CoordBlock) -> i32 {
        self.parts[b.row].degree - self.parts[b.col].degree
    }

    /// Local basis over `s`: `(block, index)` sorted by degree, then block.
    pub fn local_basis(&self, s: &[usize]) -> Vec<(usize, usize)> {
        let mut out: Vec<(i32, usize, usize)> = Vec::new();
        for (bi, b) in self.blocks.iter().enumerate() {
            for i in 0..b.model.dim(s) {
                out.push((self.block_degree(b), bi, i));
            }
        }
        out.sort_by_key(|&(d, bi, i)| (d, bi, i));
        out.into_iter().map(|(_, bi, i)| (bi, i)).collect()
    }

    fn block_name(&self, b: &CoordBlock) -> String {
        format!("{}{}", self.parts[b.row].name, self.parts[b.col].name)
    }

    /// Full block matrix of local coordinates.
    pub fn to_matrix(&self, s: &[usize], basis: &[(usize, usize)], coords: &SparseVec) -> Result<LMatrix> {
        let offs = self.offsets();
        let mut per_block: Vec<SparseVec> = vec![SparseVec::new(); self.blocks.len()];
        for (i, c) in coords.iter() {
            let (bi, j) = basis[i];
            per_block[bi].add_at(j, c);
        }
        let mut m = LMatrix::zeros(self.size(), self.size());
        for (b, v) in self.blocks.iter().zip(&per_block) {
            let (rr, rc) = (self.parts[b.row].sheaf.rank, self.parts[b.col].sheaf.rank);
            let blk = unvec(rr, rc, &b.model.to_local(s, v));
            m.set_block(offs[b.row], offs[b.col], &blk);
        }
        if let Some(alpha) = &self.graph {
            let (rf, rg) = (self.parts[0].sheaf.rank, self.parts[1].sheaf.rank);
            let al = &alpha.local[s[0]];
            let a = m.block(0, 0, rf, rf);
            let b = m.block(0, rf, rf, rg);
            let d = m.block(rf, rf, rg, rg);
            let c = al.mul(&a)?.add(&al.mul(&b)?.mul(al)?).sub(&d.mul(al)?);
            m.set_block(rf, 0, &c);
        }
        Ok(m)
    }

    /// Coordinates read off the coordinate blocks; other blocks are ignored.
    pub fn read(&self, s: &[usize], basis_index: &BTreeMap<(usize, usize), usize>, m: &LMatrix) -> Result<SparseVec> {
        let offs = self.offsets();
        let mut out = SparseVec::new();
        for (bi, b) in self.blocks.iter().enumerate() {
            let (rr, rc) = (self.parts[b.row].sheaf.rank, self.parts[b.col].sheaf.rank);
            let blk = m.block(offs[b.row], offs[b.col], rr, rc);
            let v = b.model.from_local(s, &vectorize(&blk))?;
            for (j, c) in v.iter() {
                out.set(basis_index[&(bi, j)], c.clone());
            }
        }
        Ok(out)
    }

    /// [`Self::read`], then a check that the coordinates reproduce `m`.
    pub fn read_exact(&self, s: &[usize], basis: &LocalBasis, m: &LMatrix) -> Result<SparseVec> {
        let v = self.read(s, &basis.index, m)?;
        if self.to_matrix(s, &basis.order, &v)? != *m {
            return Err(Error::AxiomViolation(format!("{}: element on {s:?} leaves the subsheaf", self.name)));
        }
        Ok(v)
    }

    pub fn basis(&self, s: &[usize]) -> LocalBasis {
        let order = self.local_basis(s);
        let index = order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        LocalBasis { order, index }
    }

    fn degree_of(&self, basis: &LocalBasis, i: usize) -> i32 {
        self.block_degree(&self.blocks[basis.order[i].0])
    }

    /// The full matrix of `S` on `s`, if there is a differential.
    fn s_matrix(&self, s: &[usize]) -> Option<LMatrix> {
        let (row, col, sm) = self.differential.as_ref()?;
        let offs = self.offsets();
        let mut m = LMatrix::zeros(self.size(), self.size());
        m.set_block(offs[*row], offs[*col], &sm.local[s[0]]);
        Some(m)
    }

    /// The dgLa of sections over `s`.
    pub fn local_dgla(&self, s: &[usize]) -> Result<Dgla> {
        let basis = self.basis(s);
        let n = basis.order.len();
        let degs: Vec<i32> = (0..n).map(|i| self.degree_of(&basis, i)).collect();
        let mut comps: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (i, &(bi, j)) in basis.order.iter().enumerate() {
            let b = &self.blocks[bi];
            let (a, k) = b.model.basis(s)[j];
            comps.entry(degs[i]).or_default().push(format!("{}[{a}]z^{k}", self.block_name(b)));
        }
        let space = GradedVectorSpace::from_components(comps)?;
        let mats: Vec<LMatrix> =
            (0..n).map(|i| self.to_matrix(s, &basis.order, &SparseVec::unit(i))).collect::<Result<_>>()?;
        let start = |d: i32| degs.iter().position(|&x| x == d).unwrap_or(0);

        let mut blocks: BTreeMap<i32, SparseMatrix> = BTreeMap::new();
        if let Some(sm) = self.s_matrix(s) {
            let mut triplets: BTreeMap<i32, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
            for i in 0..n {
                let d = degs[i];
                // [S, X] = SX − (−1)^{|X|} XS
                let dx = sm.mul(&mats[i])?.sub(&mats[i].mul(&sm)?.scaled(&Scalar::sign(d as i64)));
                let v = self.read_exact(s, &basis, &dx).map_err(|e| match e {
                    Error::WindowOverflow(m) => Error::InternalCheck(format!("differential leaves the window: {m}")),
                    e => e,
                })?;
                for (r, c) in v.iter() {
                    if degs[r] != d + 1 {
                        return Err(Error::InternalCheck("differential is not of degree one".into()));
                    }
                    triplets.entry(d).or_default().push((r - start(d + 1), i - start(d), c.clone()));
                }
            }
            for (d, t) in triplets {
                blocks.insert(d, SparseMatrix::from_triplets(space.dim(d + 1), space.dim(d), t));
            }
        }
        let differential = GradedMap::with_blocks(space.clone(), space.clone(), 1, blocks)?;
        let complex = CochainComplex::new(space, differential)?;

        let mut brackets = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let sign = Scalar::sign((degs[i] * degs[j]) as i64);
                let c = mats[i].mul(&mats[j])?.sub(&mats[j].mul(&mats[i])?.scaled(&sign));
                if c.is_zero() {
                    continue;
                }
                let v = match self.read_exact(s, &basis, &c) {
                    Ok(v) => BracketValue::Value(v),
                    Err(Error::WindowOverflow(_)) => BracketValue::Overflow,
                    Err(e) => return Err(e),
                };
                brackets.insert((i, j), v);
            }
        }
        Dgla::new(complex, brackets)
    }

    /// Matrix of `M ↦ g_{face[0], s[0]} M g_{s[0], face[0]}` in local bases.
    pub fn restriction(&self, face: &[usize], s: &[usize]) -> Result<SparseMatrix> {
        let (bf, bs) = (self.basis(face), self.basis(s));
        let (j, i) = (face[0], s[0]);
        let gji = LMatrix::block_diag(&self.parts.iter().map(|p| p.sheaf.transition(j, i)).collect::<Vec<_>>().iter().collect::<Vec<_>>());
        let gij = LMatrix::block_diag(&self.parts.iter().map(|p| p.sheaf.transition(i, j)).collect::<Vec<_>>().iter().collect::<Vec<_>>());
        let mut cols = Vec::with_capacity(bf.order.len());
        for k in 0..bf.order.len() {
            let m = self.to_matrix(face, &bf.order, &SparseVec::unit(k))?;
            let moved = gji.mul(&m)?.mul(&gij)?;
            cols.push(self.read_exact(s, &bs, &moved)?);
        }
        Ok(SparseMatrix::from_columns(bs.order.len(), &cols))
    }
}

#[derive(Debug, Clone)]
pub struct LocalBasis {
    pub order: Vec<(usize, usize)>,
    pub index: BTreeMap<(usize, usize), usize>,
}

/// A Čech semicosimplicial dgLa together with the local models it came from.
#[derive(Debug, Clone)]
pub struct CechScDgla {
    pub sheaf: Arc<MatrixDglaSheaf>,
    pub sc: ScDgla,
    /// `inclusions[n][pos][i]`: flat index in level `n` of local basis
    /// element `i` over the `pos`-th simplex of dimension `n`.
    pub inclusions: Vec<Vec<Vec<usize>>>,
}

/// Levels are products of local dgLas over the nerve; cofaces are the
/// restrictions `∂_k` onto the face missing vertex `k`.
pub fn build_cech_scdgla(sel: &DglaSelector, window: Window) -> Result<CechScDgla> {
    let sheaf = Arc::new(MatrixDglaSheaf::from_selector(sel, window)?);
    build_from_sheaf(sheaf)
}

pub fn build_from_sheaf(sheaf: Arc<MatrixDglaSheaf>) -> Result<CechScDgla> {
    let cover = sheaf.parts[0].sheaf.cover.clone();
    let top = cover.top_dim();
    let mut levels = Vec::new();
    let mut inclusions = Vec::new();
    for n in 0..=top {
        let locals: Vec<Dgla> = cover.nerve(n).iter().map(|s| sheaf.local_dgla(s)).collect::<Result<_>>()?;
        let (g, inc) = product(&locals.iter().collect::<Vec<_>>());
        levels.push(Arc::new(g));
        inclusions.push(inc);
    }
    let mut cofaces = Vec::new();
    for n in 1..=top {
        let (lower, upper) = (cover.nerve(n - 1), cover.nerve(n));
        let mut family = Vec::new();
        for k in 0..=n {
            let mut t = Vec::new();
            for (pos, s) in upper.iter().enumerate() {
                let f = cover.face(s, k);
                let fpos = lower.iter().position(|x| *x == f.as_slice()).expect("closed nerve");
                for &(r, c, ref x) in sheaf.restriction(&f, s)?.triplets() {
                    t.push((inclusions[n][pos][r], inclusions[n - 1][fpos][c], x.clone()));
                }
            }
            let m = SparseMatrix::from_triplets(levels[n].dim(), levels[n - 1].dim(), t);
            family.push(DglaMorphism::new(levels[n - 1].clone(), levels[n].clone(), m)?);
        }
        cofaces.push(family);
    }
    Ok(CechScDgla { sheaf, sc: ScDgla::new(levels, cofaces)?, inclusions })
}

impl CechScDgla {
    pub fn total(&self) -> Result<TotalComplex> {
        total_complex(&self.sc)
    }

    /// Level matrices of the map induced by `f` on local full matrices,
    /// read in the target's coordinate blocks (`exact` also checks that the
    /// image lies in the target).
    pub fn transfer_levels<F>(&self, target: &CechScDgla, exact: bool, f: F) -> Result<Vec<SparseMatrix>>
    where
        F: Fn(&[usize], &LMatrix) -> Result<LMatrix>,
    {
        let cover = self.sheaf.parts[0].sheaf.cover.clone();
        let mut out = Vec::new();
        for n in 0..self.sc.levels.len() {
            let mut t = Vec::new();
            for (pos, s) in cover.nerve(n).iter().enumerate() {
                let (bs, bt) = (self.sheaf.basis(s), target.sheaf.basis(s));
                for k in 0..bs.order.len() {
                    let m = f(s, &self.sheaf.to_matrix(s, &bs.order, &SparseVec::unit(k))?)?;
                    let v = if exact { target.sheaf.read_exact(s, &bt, &m)? } else { target.sheaf.read(s, &bt.index, &m)? };
                    for (r, x) in v.iter() {
                        t.push((target.inclusions[n][pos][r], self.inclusions[n][pos][k], x.clone()));
                    }
                }
            }
            out.push(SparseMatrix::from_triplets(target.sc.levels[n].dim(), self.sc.levels[n].dim(), t));
        }
        Ok(out)
    }
}

/// Blocks `Tot^p(source) → Tot^p(target)` of a levelwise linear map.
pub fn tot_blocks(
    source: (&ScDgla, &TotalComplex),
    target: (&ScDgla, &TotalComplex),
    levels: &[SparseMatrix],
) -> BTreeMap<i32, SparseMatrix> {
    let (ss, st) = source;
    let (ts, tt) = target;
    let mut out = BTreeMap::new();
    let degs: Vec<i32> = st.complex.space.degrees().collect();
    for p in degs {
        let rows = tt.complex.space.dim(p);
        let cols = st.complex.space.dim(p);
        let mut t = Vec::new();
        for (n, m) in levels.iter().enumerate() {
            let q = p - n as i32;
            let (rs, cs) = (ts.levels[n].range(q), ss.levels[n].range(q));
            if rs.is_empty() || cs.is_empty() {
                continue;
            }
            let blk = m.row_range(rs.start, rs.len()).column_range(cs.start, cs.len());
            let (r0, c0) = (tt.offset(p, n), st.offset(p, n));
            t.extend(blk.triplets().iter().map(|(r, c, x)| (r0 + r, c0 + c, x.clone())));
        }
        out.insert(p, SparseMatrix::from_triplets(rows, cols, t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::validate_dgla;
    use crate::semicosimplicial::{h1sc_first_order, validate_scdgla};
    use crate::sheaf::cover::make_p1_cover;
    use crate::sheaf::laurent::Laurent;
    use crate::sheaf::presentation::{direct_sum, make_line_bundle};
    use crate::graded::cohomology;

    fn p1() -> Arc<crate::sheaf::cover::CoverModel> {
        Arc::new(make_p1_cover(6).unwrap())
    }

    #[test]
    fn end_o1_has_two_levels() {
        let c = p1();
        let sc = build_cech_scdgla(&DglaSelector::End(make_line_bundle(1, &c).unwrap()), Window::symmetric(3)).unwrap();
        assert_eq!(sc.sc.top(), 1);
        assert!(validate_scdgla(&sc.sc).is_valid());
        let h = cohomology(&sc.total().unwrap().complex).unwrap();
        assert_eq!((h.dim(0), h.dim(1)), (1, 0));
    }

    #[test]
    fn hom_qq_differential_rank() {
        let c = p1();
        let sys = CoherentSystem::from_chart0(make_line_bundle(1, &c).unwrap(), vec![vec![Laurent::one()]]).unwrap();
        let sheaf = MatrixDglaSheaf::from_selector(&DglaSelector::HomQQ(sys), Window::symmetric(0)).unwrap();
        // window 0 keeps only constants: (φ_U, φ_E) ↦ s φ_U − φ_E s is the 1×2 matrix (1, −1)
        let g = sheaf.local_dgla(&[0]).unwrap();
        assert_eq!((g.dim_in(0), g.dim_in(1)), (2, 1));
        assert_eq!(crate::linalg::rank(&g.complex().d(0)), 1);
        assert!(validate_dgla(&g).is_valid());
    }

    #[test]
    fn end_split_bundle_first_order() {
        let c = p1();
        let e = direct_sum(&[&make_line_bundle(0, &c).unwrap(), &make_line_bundle(-2, &c).unwrap()]).unwrap();
        let sc = build_cech_scdgla(&DglaSelector::End(e), Window::symmetric(3)).unwrap();
        assert!(validate_scdgla(&sc.sc).is_valid());
        assert_eq!(h1sc_first_order(&sc.sc).unwrap(), 1);
    }
}
