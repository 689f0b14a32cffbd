//! Locally free sheaves by transition matrices, their morphisms, and
//! coherent systems.
//!
//! Convention: local sections satisfy `s_j = g_ij s_i` on `V_ij`, hence
//! `g_ik = g_jk g_ij` on triple overlaps and `O(d)` has `g_01 = z^{−d}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::cover::{CoverKind, CoverModel, RingModel};
use super::laurent::{LMatrix, Laurent};
use crate::error::{Error, Result};
use crate::linalg::SpanBasis;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SheafPresentation {
    #[serde(skip)]
    pub cover: Arc<CoverModel>,
    pub name: String,
    pub rank: usize,
    /// `g_ij` for both orders of every edge.
    #[serde(serialize_with = "serialize_transitions")]
    transitions: BTreeMap<(usize, usize), LMatrix>,
}

fn serialize_transitions<S: serde::Serializer>(
    t: &BTreeMap<(usize, usize), LMatrix>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let named: BTreeMap<String, &LMatrix> =
        t.iter().filter(|((i, j), _)| i < j).map(|((i, j), m)| (format!("{i}{j}"), m)).collect();
    serde::Serialize::serialize(&named, s)
}

fn check_ring(m: &LMatrix, ring: RingModel, what: &str) -> Result<()> {
    for (r, c, x) in m.entries() {
        if !ring.contains(x) {
            return Err(Error::InvalidInput(format!("{what}: entry ({r}, {c}) = {x} is not in the ring")));
        }
    }
    Ok(())
}

impl SheafPresentation {
    /// `given` holds `g_ij` for every edge `i < j` of the nerve.
    pub fn new(
        cover: Arc<CoverModel>,
        name: &str,
        rank: usize,
        given: BTreeMap<(usize, usize), LMatrix>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput(format!("{name}: rank must be positive")));
        }
        let edges = cover.edges();
        if given.len() != edges.len() || edges.iter().any(|e| !given.contains_key(e)) {
            return Err(Error::InvalidInput(format!("{name}: need exactly one transition per edge {edges:?}")));
        }
        let mut transitions = BTreeMap::new();
        for ((i, j), g) in given {
            if g.rows() != rank || g.cols() != rank {
                return Err(Error::ShapeMismatch {
                    context: format!("{name}: transition g_{i}{j}"),
                    expected: (rank, rank),
                    found: (g.rows(), g.cols()),
                });
            }
            let ring = cover.ring(&[i, j]);
            check_ring(&g, ring, &format!("{name}: g_{i}{j}"))?;
            let inv = g.inverse().map_err(|e| Error::InvalidInput(format!("{name}: g_{i}{j}: {e}")))?;
            check_ring(&inv, ring, &format!("{name}: inverse of g_{i}{j}"))?;
            transitions.insert((j, i), inv);
            transitions.insert((i, j), g);
        }
        let sheaf = SheafPresentation { cover, name: name.to_string(), rank, transitions };
        sheaf.check_cocycle()?;
        Ok(sheaf)
    }

    /// `g_ij g_ji = 1` on edges and `g_ik = g_jk g_ij` on triangles.
    pub fn check_cocycle(&self) -> Result<()> {
        let id = LMatrix::identity(self.rank);
        for (i, j) in self.cover.edges() {
            if self.transition(i, j).mul(&self.transition(j, i))? != id {
                return Err(Error::InvalidInput(format!("{}: g_{i}{j} g_{j}{i} ≠ 1", self.name)));
            }
        }
        for t in self.cover.nerve(2) {
            let (i, j, k) = (t[0], t[1], t[2]);
            if self.transition(i, k) != self.transition(j, k).mul(&self.transition(i, j))? {
                return Err(Error::InvalidInput(format!("{}: cocycle fails on ({i}, {j}, {k})", self.name)));
            }
        }
        Ok(())
    }

    /// `g_ij`; the identity when `i = j`.
    pub fn transition(&self, i: usize, j: usize) -> LMatrix {
        if i == j {
            return LMatrix::identity(self.rank);
        }
        self.transitions.get(&(i, j)).cloned().unwrap_or_else(|| panic!("no overlap ({i}, {j})"))
    }

    /// Torus weights of the frame of chart `i`: sections `z^k e_a` on `V_i`
    /// have weight `λ_a + k`, and restrictions preserve weight.
    pub fn frame_weights(&self, chart: usize) -> Vec<i64> {
        if self.cover.kind == CoverKind::Finite || chart == 0 {
            return vec![0; self.rank];
        }
        let degs = self.transition(0, chart).row_degrees().expect("transitions are row-monomial");
        degs.into_iter().map(|e| -e).collect()
    }

    /// Largest `|λ|` over all charts.
    pub fn max_weight(&self) -> i64 {
        (0..self.cover.n_sets).flat_map(|c| self.frame_weights(c)).map(i64::abs).max().unwrap_or(0)
    }

    pub fn same_cover(&self, other: &SheafPresentation) -> Result<()> {
        if Arc::ptr_eq(&self.cover, &other.cover) || *self.cover == *other.cover {
            Ok(())
        } else {
            Err(Error::CoverMismatch)
        }
    }
}

/// Rank-`r` trivial sheaf `O^r`.
pub fn trivial_sheaf(cover: &Arc<CoverModel>, rank: usize, name: &str) -> Result<SheafPresentation> {
    let given = cover.edges().into_iter().map(|e| (e, LMatrix::identity(rank))).collect();
    SheafPresentation::new(cover.clone(), name, rank, given)
}

/// `O(d)` on `P¹` via `g_01 = z^{−d}`; on a finite cover only `d = 0`.
pub fn make_line_bundle(d: i64, cover: &Arc<CoverModel>) -> Result<SheafPresentation> {
    match cover.kind {
        CoverKind::ProjectiveLine => {
            if d.abs() > cover.window {
                return Err(Error::WindowOverflow(format!("|{d}| exceeds the window {}", cover.window)));
            }
            let g = LMatrix::from_rows(vec![vec![Laurent::z(-d)]])?;
            SheafPresentation::new(cover.clone(), &format!("O({d})"), 1, [((0, 1), g)].into())
        }
        CoverKind::Finite if d == 0 => trivial_sheaf(cover, 1, "O"),
        CoverKind::Finite => Err(Error::InvalidInput("twisted line bundles need the P¹ cover".into())),
    }
}

/// Block-diagonal direct sum.
pub fn direct_sum(parts: &[&SheafPresentation]) -> Result<SheafPresentation> {
    let first = parts.first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
    for p in parts {
        first.same_cover(p)?;
    }
    let rank = parts.iter().map(|p| p.rank).sum();
    let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("+");
    let given = first
        .cover
        .edges()
        .into_iter()
        .map(|(i, j)| {
            let blocks: Vec<LMatrix> = parts.iter().map(|p| p.transition(i, j)).collect();
            ((i, j), LMatrix::block_diag(&blocks.iter().collect::<Vec<_>>()))
        })
        .collect();
    SheafPresentation::new(first.cover.clone(), &name, rank, given)
}

/// Index of `φ_{ab}` in the column-major vectorization of a `rows × _` matrix.
pub fn vec_index(rows: usize, a: usize, b: usize) -> usize {
    b * rows + a
}

/// `Hom(F, G)`, transitions `φ ↦ g^G_ij φ g^F_ji` on column-major vectors.
pub fn hom_sheaf(f: &SheafPresentation, g: &SheafPresentation) -> Result<SheafPresentation> {
    f.same_cover(g)?;
    let (rf, rg) = (f.rank, g.rank);
    let n = rf * rg;
    let mut given = BTreeMap::new();
    for (i, j) in f.cover.edges() {
        let (gg, gf) = (g.transition(i, j), f.transition(j, i));
        let mut t = LMatrix::zeros(n, n);
        for c in 0..rg {
            for d in 0..rf {
                // image of E_cd is (column c of g^G)(row d of g^F_ji)
                for a in 0..rg {
                    for b in 0..rf {
                        let x = gg.get(a, c).mul(gf.get(d, b));
                        if !x.is_zero() {
                            t.set(vec_index(rg, a, b), vec_index(rg, c, d), x);
                        }
                    }
                }
            }
        }
        given.insert((i, j), t);
    }
    SheafPresentation::new(f.cover.clone(), &format!("Hom({},{})", f.name, g.name), n, given)
}

pub fn end_sheaf(e: &SheafPresentation) -> Result<SheafPresentation> {
    let mut h = hom_sheaf(e, e)?;
    h.name = format!("End({})", e.name);
    Ok(h)
}

/// `α: F → G` by local matrices `α_i` over the rings of the charts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SheafMorphism {
    pub source: SheafPresentation,
    pub target: SheafPresentation,
    pub local: Vec<LMatrix>,
}

impl SheafMorphism {
    /// Checks `α_j = g^G_ij α_i g^F_ji` on every edge.
    pub fn new(source: SheafPresentation, target: SheafPresentation, local: Vec<LMatrix>) -> Result<Self> {
        source.same_cover(&target)?;
        let cover = source.cover.clone();
        if local.len() != cover.n_sets {
            return Err(Error::InvalidInput(format!("need {} local matrices, got {}", cover.n_sets, local.len())));
        }
        for (i, m) in local.iter().enumerate() {
            if m.rows() != target.rank || m.cols() != source.rank {
                return Err(Error::ShapeMismatch {
                    context: format!("local matrix on V_{i}"),
                    expected: (target.rank, source.rank),
                    found: (m.rows(), m.cols()),
                });
            }
            check_ring(m, cover.ring(&[i]), &format!("α_{i}"))?;
        }
        for (i, j) in cover.edges() {
            let moved = target.transition(i, j).mul(&local[i])?.mul(&source.transition(j, i))?;
            if moved != local[j] {
                return Err(Error::InvalidInput(format!("morphism not compatible on V_{i}{j}")));
            }
        }
        Ok(SheafMorphism { source, target, local })
    }

    pub fn identity(f: &SheafPresentation) -> Self {
        let local = vec![LMatrix::identity(f.rank); f.cover.n_sets];
        SheafMorphism { source: f.clone(), target: f.clone(), local }
    }

    pub fn zero(f: &SheafPresentation, g: &SheafPresentation) -> Result<Self> {
        f.same_cover(g)?;
        let local = vec![LMatrix::zeros(g.rank, f.rank); f.cover.n_sets];
        Ok(SheafMorphism { source: f.clone(), target: g.clone(), local })
    }

    /// Largest `|Δweight|` of a local entry.
    pub fn weight_spread(&self) -> i64 {
        let mut out = 0;
        for (i, m) in self.local.iter().enumerate() {
            let (lf, lg) = (self.source.frame_weights(i), self.target.frame_weights(i));
            for (a, b, x) in m.entries() {
                for (k, _) in x.terms() {
                    out = out.max((lg[a] - lf[b] + k).abs());
                }
            }
        }
        out
    }
}

/// `(E, U)` with `U` spanned by global sections given chartwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentSystem {
    pub sheaf: SheafPresentation,
    /// `sections[u][i]` is the column of section `u` on `V_i`.
    pub sections: Vec<Vec<Vec<Laurent>>>,
}

impl CoherentSystem {
    pub fn new(sheaf: SheafPresentation, sections: Vec<Vec<Vec<Laurent>>>) -> Result<Self> {
        let cover = sheaf.cover.clone();
        let mut span = SpanBasis::new();
        for (u, s) in sections.iter().enumerate() {
            if s.len() != cover.n_sets || s.iter().any(|v| v.len() != sheaf.rank) {
                return Err(Error::InvalidInput(format!("section {u}: need a rank-{} vector per chart", sheaf.rank)));
            }
            for (i, v) in s.iter().enumerate() {
                if v.iter().any(|x| !cover.ring(&[i]).contains(x)) {
                    return Err(Error::InvalidInput(format!("section {u} is not regular on V_{i}")));
                }
            }
            for (i, j) in cover.edges() {
                let moved = sheaf.transition(i, j).mul(&LMatrix::column(s[i].clone()))?;
                if moved != LMatrix::column(s[j].clone()) {
                    return Err(Error::InvalidInput(format!("section {u} does not glue on V_{i}{j}")));
                }
            }
        }
        for (u, v) in coefficient_vectors(&sections).iter().enumerate() {
            if !span.insert(v) {
                return Err(Error::InvalidInput(format!("section {u} is linearly dependent on the previous ones")));
            }
        }
        Ok(CoherentSystem { sheaf, sections })
    }

    /// Sections given on `V_0`, extended by `s_j = g_0j s_0`.
    pub fn from_chart0(sheaf: SheafPresentation, chart0: Vec<Vec<Laurent>>) -> Result<Self> {
        let n = sheaf.cover.n_sets;
        let mut sections = Vec::with_capacity(chart0.len());
        for s0 in chart0 {
            let mut s = vec![s0.clone()];
            for j in 1..n {
                if !sheaf.cover.has_edge(0, j) {
                    return Err(Error::InvalidInput(format!("V_0 and V_{j} do not meet; give sections on every chart")));
                }
                let col = sheaf.transition(0, j).mul(&LMatrix::column(s0.clone()))?;
                s.push((0..sheaf.rank).map(|a| col.get(a, 0).clone()).collect());
            }
            sections.push(s);
        }
        CoherentSystem::new(sheaf, sections)
    }

    pub fn k(&self) -> usize {
        self.sections.len()
    }

    /// `U ⊗ O`.
    pub fn trivial_part(&self) -> Result<SheafPresentation> {
        trivial_sheaf(&self.sheaf.cover, self.k(), "U⊗O")
    }

    /// `s: U ⊗ O → E`, columns the sections.
    pub fn evaluation(&self) -> Result<SheafMorphism> {
        let cover = &self.sheaf.cover;
        let local = (0..cover.n_sets)
            .map(|i| {
                let mut m = LMatrix::zeros(self.sheaf.rank, self.k());
                for (u, s) in self.sections.iter().enumerate() {
                    for (a, x) in s[i].iter().enumerate() {
                        m.set(a, u, x.clone());
                    }
                }
                m
            })
            .collect();
        SheafMorphism::new(self.trivial_part()?, self.sheaf.clone(), local)
    }
}

/// Coefficient vectors over a shared `(chart, frame, exponent)` index.
fn coefficient_vectors(sections: &[Vec<Vec<Laurent>>]) -> Vec<SparseVec> {
    let mut index: BTreeMap<(usize, usize, i64), usize> = BTreeMap::new();
    for s in sections {
        for (i, v) in s.iter().enumerate() {
            for (a, x) in v.iter().enumerate() {
                for (k, _) in x.terms() {
                    let n = index.len();
                    index.entry((i, a, k)).or_insert(n);
                }
            }
        }
    }
    sections
        .iter()
        .map(|s| {
            let mut out = SparseVec::new();
            for (i, v) in s.iter().enumerate() {
                for (a, x) in v.iter().enumerate() {
                    for (k, c) in x.terms() {
                        out.set(index[&(i, a, k)], c.clone());
                    }
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::cover::{make_finite_cover, make_p1_cover};

    fn p1(d: i64) -> Arc<CoverModel> {
        Arc::new(make_p1_cover(d).unwrap())
    }

    fn lp(s: &str) -> Laurent {
        s.parse().unwrap()
    }

    #[test]
    fn line_bundle_transitions() {
        let c = p1(3);
        assert_eq!(make_line_bundle(0, &c).unwrap().transition(0, 1), LMatrix::identity(1));
        assert_eq!(*make_line_bundle(1, &c).unwrap().transition(0, 1).get(0, 0), lp("z^-1"));
        assert!(matches!(make_line_bundle(4, &c), Err(Error::WindowOverflow(_))));
        let s = direct_sum(&[&make_line_bundle(1, &c).unwrap(), &make_line_bundle(-2, &c).unwrap()]).unwrap();
        assert_eq!(s.rank, 2);
        assert_eq!(s.frame_weights(1), vec![1, -2]);
    }

    #[test]
    fn end_and_hom_transitions() {
        let c = p1(4);
        let o = |d| make_line_bundle(d, &c).unwrap();
        assert_eq!(end_sheaf(&o(3)).unwrap().transition(0, 1), LMatrix::identity(1));
        assert_eq!(*hom_sheaf(&o(1), &o(-2)).unwrap().transition(0, 1).get(0, 0), lp("z^3"));
        let e = direct_sum(&[&o(0), &o(-2)]).unwrap();
        let t = end_sheaf(&e).unwrap().transition(0, 1);
        let diag: Vec<Laurent> = (0..4).map(|i| t.get(i, i).clone()).collect();
        assert_eq!(diag, vec![lp("1"), lp("z^2"), lp("z^-2"), lp("1")]);
    }

    #[test]
    fn morphism_compatibility() {
        let c = p1(3);
        let (o0, o1) = (make_line_bundle(0, &c).unwrap(), make_line_bundle(1, &c).unwrap());
        let m = |s: &str| LMatrix::from_rows(vec![vec![lp(s)]]).unwrap();
        assert!(SheafMorphism::new(o0.clone(), o1.clone(), vec![m("1 + z"), m("z^-1 + 1")]).is_ok());
        assert!(SheafMorphism::new(o0.clone(), o1.clone(), vec![m("1"), m("1")]).is_err());
        let alpha = SheafMorphism::new(o0, o1, vec![m("z"), m("1")]).unwrap();
        assert_eq!(alpha.weight_spread(), 1);
    }

    #[test]
    fn coherent_system_checks() {
        let c = p1(3);
        let e = make_line_bundle(1, &c).unwrap();
        let sys = CoherentSystem::from_chart0(e.clone(), vec![vec![lp("1")], vec![lp("z")]]).unwrap();
        assert_eq!(sys.sections[0][1], vec![lp("z^-1")]);
        assert!(sys.evaluation().is_ok());
        assert!(CoherentSystem::from_chart0(e.clone(), vec![vec![lp("z^2")]]).is_err());
        assert!(CoherentSystem::from_chart0(e, vec![vec![lp("1")], vec![lp("2")]]).is_err());
    }

    #[test]
    fn finite_cover_cocycle() {
        let c = Arc::new(make_finite_cover(3, &[[0, 1], [1, 2], [0, 2]], &[[0, 1, 2]]).unwrap());
        let two = LMatrix::from_rows(vec![vec![lp("2")]]).unwrap();
        let one = LMatrix::identity(1);
        let bad = [((0, 1), two.clone()), ((1, 2), one.clone()), ((0, 2), one.clone())].into();
        assert!(SheafPresentation::new(c.clone(), "L", 1, bad).is_err());
        let good = [((0, 1), two.clone()), ((1, 2), one), ((0, 2), two)].into();
        assert!(SheafPresentation::new(c, "L", 1, good).is_ok());
    }
}
