//! Coherent systems `(E, U)`: the explicit model `Hom^{≥0}(Q, Q)`, its
//! kernel `m` onto `End(E)`, and the long exact sequence relating them.

use serde::Serialize;

use super::report::{dims_line, SequenceReport};
use super::{require_structure_sheaf_acyclic, stable, TotModel};
use crate::error::{Error, Result};
use crate::graded::{induced_map, ExactSequence};
use crate::linalg::{kernel_basis, rank, span_rank};
use crate::semicosimplicial::h1sc_first_order;
use crate::sheaf::{
    cech_cohomology, cup, model_cohomology, CoherentSystem, DglaSelector, LMatrix, SectionModel, SheafPresentation,
    Window,
};
use crate::sparse::{SparseMatrix, SparseVec};

#[derive(Debug, Clone, Serialize)]
pub struct PairEuReport {
    pub sheaf: String,
    pub k: usize,
    pub window: i64,
    pub structure_sheaf: Vec<usize>,
    /// `h^0..=2(E)`.
    pub sheaf_cohomology: Vec<usize>,
    /// `H^0..=3` of `Tot(Hom^{≥0}(Q, Q))`.
    pub controlling: Vec<usize>,
    pub end_e: Vec<usize>,
    /// `H^0..=3(Tot m)`.
    pub m_delta: Vec<usize>,
    /// `dim Hom(U, H^0(E)/U)`, `dim Hom(U, H^1(E))`, `dim Hom(U, H^2(E))`.
    pub hom_terms: Vec<usize>,
    pub sequence: SequenceReport,
    /// `α: H^1(End E) → Hom(U, H^1(E))` from cup products, `u`-blocks stacked.
    pub alpha: SparseMatrix,
    pub alpha_rank: usize,
    pub connecting_rank: usize,
    /// `ker α` equals the kernel of the connecting map `H^1(End E) → H^2(m)`.
    pub alpha_matches_connecting: bool,
    pub tangent_dim: usize,
    pub obstruction_dim: usize,
    /// Dimension of first-order classes of the semicosimplicial dgLa.
    pub h1sc_first_order: usize,
    pub passed: bool,
}

impl PairEuReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("  E = {}, k = {}", self.sheaf, self.k),
            dims_line("E", &self.sheaf_cohomology),
            dims_line("Tot Hom>=0(Q,Q)", &self.controlling),
            dims_line("End E", &self.end_e),
            dims_line("Tot m", &self.m_delta),
            format!(
                "  tangent {} obstruction space {} first-order classes {}",
                self.tangent_dim, self.obstruction_dim, self.h1sc_first_order
            ),
            format!(
                "  alpha rank {} connecting rank {} kernels agree {}",
                self.alpha_rank, self.connecting_rank, self.alpha_matches_connecting
            ),
        ];
        out.extend(self.sequence.lines());
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MDeltaReport {
    pub sheaf: String,
    pub k: usize,
    pub window: i64,
    /// `H^0..=2(Tot m)`.
    pub dims: Vec<usize>,
    /// `(0, k(h^0 − k), k h^1)`.
    pub expected: Vec<usize>,
    pub passed: bool,
}

impl MDeltaReport {
    pub fn lines(&self) -> Vec<String> {
        vec![dims_line("Tot m", &self.dims), dims_line("expected", &self.expected)]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessReport {
    pub sheaf: String,
    pub k: usize,
    pub hom_u_h1_vanishes: bool,
    pub h2_controlling_vanishes: bool,
    pub forgetful_criterion: String,
    pub h2_criterion: String,
    pub conclusions: Vec<String>,
}

impl SmoothnessReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("  Hom(U,H^1(E)) = 0: {}", self.hom_u_h1_vanishes),
            format!("  H^2(Tot) = 0: {}", self.h2_controlling_vanishes),
            format!("  forgetful map criterion: {}", self.forgetful_criterion),
            format!("  H^2 criterion: {}", self.h2_criterion),
        ];
        out.extend(self.conclusions.iter().map(|c| format!("  => {c}")));
        out
    }
}

/// `(E, H^0(E))` with the deterministic basis of global sections.
pub fn full_system(e: &SheafPresentation, d: i64) -> Result<CoherentSystem> {
    let model = SectionModel::new(e, Window::symmetric(d));
    let (_, h) = model_cohomology(&model)?;
    let sections = h
        .at_or_empty(0)
        .representatives
        .iter()
        .map(|r| model.cochain_locals(0, r))
        .collect();
    CoherentSystem::new(e.clone(), sections)
}

struct Models {
    g: TotModel,
    m: TotModel,
    h: TotModel,
    inc: super::TotMap,
    proj: super::TotMap,
    lift: super::TotMap,
    read_m: super::TotMap,
}

fn models(sys: &CoherentSystem, w: Window) -> Result<Models> {
    let (k, r) = (sys.k(), sys.sheaf.rank);
    let g = TotModel::build(&DglaSelector::HomQQ(sys.clone()), w)?;
    let m = TotModel::build(&DglaSelector::MDelta(sys.clone()), w)?;
    let h = TotModel::build(&DglaSelector::End(sys.sheaf.clone()), w)?;
    let same = |_: &[usize], x: &LMatrix| Ok(x.clone());
    let inc = m.transfer(&g, true, same)?;
    let proj = g.transfer(&h, true, |_, x| Ok(x.block(k, k, r, r)))?;
    let lift = h.transfer(&g, true, |_, x| {
        let mut out = LMatrix::zeros(k + r, k + r);
        out.set_block(k, k, x);
        Ok(out)
    })?;
    let read_m = g.transfer(&m, false, same)?;
    inc.chain_map()?;
    proj.chain_map()?;
    Ok(Models { g, m, h, inc, proj, lift, read_m })
}

fn sheaf_dims(e: &SheafPresentation, d: i64) -> Result<Vec<usize>> {
    let c = cech_cohomology(e, d)?;
    Ok((0..=2).map(|p| c.h(p)).collect())
}

/// `H^*(Tot m)` against `(0, Hom(U, H^0/U), Hom(U, H^1))`.
pub fn m_delta_check(sys: &CoherentSystem, d: i64) -> Result<MDeltaReport> {
    require_structure_sheaf_acyclic(&sys.sheaf.cover, d)?;
    let he = sheaf_dims(&sys.sheaf, d)?;
    let k = sys.k();
    stable(
        d,
        |w| {
            let m = TotModel::build(&DglaSelector::MDelta(sys.clone()), Window::symmetric(w))?;
            let dims = m.dims(0..=2);
            let expected = vec![0, k * (he[0] - k), k * he[1]];
            Ok(MDeltaReport { sheaf: sys.sheaf.name.clone(), k, window: d, passed: dims == expected, dims, expected })
        },
        |r| r.dims.clone(),
    )
}

/// The sequence `0 → H^0(Tot) → H^0(End E) → Hom(U, H^0/U) → H^1(Tot) → …`
/// realized as the long exact sequence of `0 → m → Hom^{≥0}(Q, Q) → End E → 0`.
pub fn pair_eu_report(sys: &CoherentSystem, d: i64) -> Result<PairEuReport> {
    let structure_sheaf = require_structure_sheaf_acyclic(&sys.sheaf.cover, d)?;
    let he = sheaf_dims(&sys.sheaf, d)?;
    stable(d, |w| pair_eu_at(sys, w, &structure_sheaf, &he), |r| {
        [&r.controlling, &r.end_e, &r.m_delta].iter().flat_map(|v| v.iter().copied()).chain([r.alpha_rank]).collect()
    })
    .map(|mut r| {
        r.window = d;
        r
    })
}

fn pair_eu_at(sys: &CoherentSystem, d: i64, structure_sheaf: &[usize], he: &[usize]) -> Result<PairEuReport> {
    let k = sys.k();
    let w = Window::symmetric(d);
    let ms = models(sys, w)?;
    let (g, m, h) = (&ms.g, &ms.m, &ms.h);

    let mut seq = ExactSequence::default();
    seq.push_node("0".into(), 0);
    seq.push_map(SparseMatrix::zeros(g.h.dim(0), 0));
    let mut connecting_one = SparseMatrix::zeros(0, 0);
    for p in 0..=2 {
        let (hg, hh) = (g.h.at_or_empty(p), h.h.at_or_empty(p));
        if p > 0 {
            let hm = m.h.at_or_empty(p);
            seq.push_map(induced_map(&hm, &hg, &ms.inc.block(p))?);
        }
        seq.push_node(format!("H^{p}(Tot)"), hg.dim);
        seq.push_map(induced_map(&hg, &hh, &ms.proj.block(p))?);
        seq.push_node(format!("H^{p}(End E)"), hh.dim);

        // ξ ↦ class of D(lift ξ), which lies in m
        let target = m.h.at_or_empty(p + 1);
        let mut cols = Vec::with_capacity(hh.dim);
        for xi in &hh.representatives {
            let y = ms.lift.block(p).mul_vec(xi);
            let dy = g.complex().d(p).mul_vec(&y);
            if !ms.proj.block(p + 1).mul_vec(&dy).is_zero() {
                return Err(Error::InternalCheck("lift of a cocycle has a non-closed End(E) part".into()));
            }
            let mv = ms.read_m.block(p + 1).mul_vec(&dy);
            if ms.inc.block(p + 1).mul_vec(&mv) != dy {
                return Err(Error::InternalCheck("coboundary of a lift leaves m".into()));
            }
            let coords = target
                .class_of(&mv)
                .ok_or_else(|| Error::InternalCheck("connecting image is not a cocycle of m".into()))?;
            cols.push(SparseVec::from_dense(&coords));
        }
        let conn = SparseMatrix::from_columns(target.dim, &cols);
        if p == 1 {
            connecting_one = conn.clone();
        }
        seq.push_map(conn);
        let label = ["Hom(U,H^0(E)/U)", "Hom(U,H^1(E))", "Hom(U,H^2(E))"][p as usize];
        seq.push_node(format!("{label} = H^{}(m)", p + 1), target.dim);
    }
    let sequence = SequenceReport::new("Tot -> End E -> Hom(U, -)", &seq)?;

    let alpha = alpha_matrix(sys, h, d)?;
    let ker_a = kernel_basis(&alpha);
    let ker_c = kernel_basis(&connecting_one);
    let both: Vec<SparseVec> = ker_a.iter().chain(&ker_c).cloned().collect();
    let alpha_matches_connecting =
        ker_a.len() == ker_c.len() && span_rank(&both) == ker_a.len() && alpha.cols() == connecting_one.cols();

    let m_delta = m.dims(0..=3);
    let hom_terms = vec![k * (he[0] - k), k * he[1], k * he[2]];
    let h1sc = h1sc_first_order(&g.cech.sc)?;
    let tangent_dim = g.h.dim(1);
    let passed = sequence.exact
        && alpha_matches_connecting
        && m_delta[0] == 0
        && m_delta[1..] == hom_terms[..]
        && h1sc == tangent_dim;
    Ok(PairEuReport {
        sheaf: sys.sheaf.name.clone(),
        k,
        window: d,
        structure_sheaf: structure_sheaf.to_vec(),
        sheaf_cohomology: he.to_vec(),
        controlling: g.dims(0..=3),
        end_e: h.dims(0..=3),
        m_delta,
        hom_terms,
        sequence,
        alpha_rank: rank(&alpha),
        connecting_rank: rank(&connecting_one),
        alpha,
        alpha_matches_connecting,
        tangent_dim,
        obstruction_dim: g.h.dim(2),
        h1sc_first_order: h1sc,
        passed,
    })
}

/// Columns: basis of `H^1(End E)`; rows: for each `u`, the class of `ν ∪ s_u`.
fn alpha_matrix(sys: &CoherentSystem, h: &TotModel, d: i64) -> Result<SparseMatrix> {
    let end_model = &h.cech.sheaf.blocks[0].model;
    let spread = sys.evaluation()?.weight_spread();
    let e_model = SectionModel::new(&sys.sheaf, Window::symmetric(d).widened(d.max(spread)));
    let (_, he) = model_cohomology(&e_model)?;
    let h1e = he.at_or_empty(1);
    let h1 = h.h.at_or_empty(1);
    let mut cols = Vec::with_capacity(h1.dim);
    for nu in &h1.representatives {
        let a = h.level_cochain(1, nu);
        let mut col = SparseVec::new();
        for (u, s) in sys.sections.iter().enumerate() {
            let c = cup(end_model, &a, s, &e_model)?;
            let coords = h1e.class_of(&c).ok_or_else(|| Error::InternalCheck("cup product is not a cocycle".into()))?;
            col = col.add(&SparseVec::from_dense(&coords).shifted(u * h1e.dim));
        }
        cols.push(col);
    }
    Ok(SparseMatrix::from_columns(sys.k() * h1e.dim, &cols))
}

/// The hypotheses of the smoothness criteria and the conclusions they license.
pub fn smoothness_flags(sys: &CoherentSystem, d: i64) -> Result<SmoothnessReport> {
    let r = pair_eu_report(sys, d)?;
    let hom_u_h1_vanishes = r.hom_terms[1] == 0;
    let h2_controlling_vanishes = r.obstruction_dim == 0;
    let inapplicable = "criterion inapplicable".to_string();
    let mut conclusions = Vec::new();
    let forgetful_criterion = if hom_u_h1_vanishes {
        conclusions.push("r_U: Def(E,U) -> Def(E) is smooth".to_string());
        conclusions.push("Def(E) smooth <=> Def(E,U) smooth <=> Def^k(E) smooth".to_string());
        "Hom(U,H^1(E)) = 0".to_string()
    } else {
        inapplicable.clone()
    };
    let h2_criterion = if h2_controlling_vanishes {
        conclusions.push("Def(E,U) is smooth".to_string());
        conclusions.push("Def^k(E) is smooth".to_string());
        "H^2(Tot) = 0".to_string()
    } else {
        inapplicable
    };
    Ok(SmoothnessReport {
        sheaf: r.sheaf,
        k: r.k,
        hom_u_h1_vanishes,
        h2_controlling_vanishes,
        forgetful_criterion,
        h2_criterion,
        conclusions,
    })
}
