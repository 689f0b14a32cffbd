//! Deformations of a morphism `α: F → G` through the cone of
//! `L(α) ⊕ (End F × End G) → End(F ⊕ G)`.

use serde::Serialize;

use super::report::{dims_line, SequenceReport};
use super::{stable, TotModel};
use crate::error::{Error, Result};
use crate::graded::{induced_map, mapping_cone_complex, cohomology, ExactSequence};
use crate::sheaf::{DglaSelector, LMatrix, SheafMorphism, Window};
use crate::sparse::{SparseMatrix, SparseVec};

#[derive(Debug, Clone, Serialize)]
pub struct DeformMorphismReport {
    pub source: String,
    pub target: String,
    pub window: i64,
    pub weight_spread: i64,
    /// `H^0..=3` of the cone, the controlling complex.
    pub controlling: Vec<usize>,
    pub graph_subalgebra: Vec<usize>,
    pub end_pair: Vec<usize>,
    pub end_sum: Vec<usize>,
    pub coker_h: Vec<usize>,
    pub tangent_dim: usize,
    pub obstruction_dim: usize,
    /// `H^i(cone) → H^i(End F ⊕ End G) → H^i(coker h) → H^{i+1}(cone)`.
    pub coker_sequence: SequenceReport,
    /// `H^i(cone) → H^i(L ⊕ End F ⊕ End G) → H^i(End(F ⊕ G)) → …`.
    pub cone_sequence: SequenceReport,
    pub passed: bool,
}

impl DeformMorphismReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("  {} -> {}, spread {}", self.source, self.target, self.weight_spread),
            dims_line("controlling cone", &self.controlling),
            dims_line("End F x End G", &self.end_pair),
            dims_line("coker h", &self.coker_h),
            format!("  tangent {} obstruction space {}", self.tangent_dim, self.obstruction_dim),
        ];
        out.extend(self.coker_sequence.lines());
        out.extend(self.cone_sequence.lines());
        out
    }
}

/// Cohomology of the controlling complex of deformations of `α`, with both
/// long exact sequences verified; stable between windows `d` and `d + 1`.
pub fn deform_morphism_report(alpha: &SheafMorphism, d: i64) -> Result<DeformMorphismReport> {
    stable(d, |w| deform_morphism_at(alpha, w), |r| {
        [&r.controlling, &r.end_pair, &r.coker_h, &r.end_sum, &r.graph_subalgebra].iter().flat_map(|v| v.iter().copied()).collect()
    })
}

fn deform_morphism_at(alpha: &SheafMorphism, d: i64) -> Result<DeformMorphismReport> {
    let (f, g) = (&alpha.source, &alpha.target);
    let (rf, rg) = (f.rank, g.rank);
    let delta = alpha.weight_spread();
    let w = Window::symmetric(d);
    let l = TotModel::build(&DglaSelector::Graph(alpha.clone()), w)?;
    let n = TotModel::build(&DglaSelector::EndPair(f.clone(), g.clone()), w)?;
    let m = TotModel::build(&DglaSelector::EndSum(f.clone(), g.clone(), 2 * delta), w)?;
    let k = TotModel::build(&DglaSelector::HomBlock(f.clone(), g.clone(), 2 * delta), w)?;

    let same = |_: &[usize], x: &LMatrix| Ok(x.clone());
    let h_map = l.transfer(&m, true, same)?;
    let g_map = n.transfer(&m, true, same)?;
    // φ ↦ c + dα − αa − αbα: restrict to the graph, project along it
    let pi = |s: &[usize], x: &LMatrix| -> Result<LMatrix> {
        let al = &alpha.local[s[0]];
        let (a, b) = (x.block(0, 0, rf, rf), x.block(0, rf, rf, rg));
        let (c, dd) = (x.block(rf, 0, rg, rf), x.block(rf, rf, rg, rg));
        let q = c.add(&dd.mul(al)?).sub(&al.mul(&a)?).sub(&al.mul(&b)?.mul(al)?);
        let mut out = LMatrix::zeros(rf + rg, rf + rg);
        out.set_block(rf, 0, &q);
        Ok(out)
    };
    let pi_map = m.transfer(&k, true, pi)?;
    let lift = k.transfer(&m, true, same)?;
    let read_l = m.transfer(&l, false, same)?;
    pi_map.chain_map()?;

    let (hc, gc) = (h_map.chain_map()?, g_map.chain_map()?);
    let cone = mapping_cone_complex(&hc, &gc)?;
    let h_cone = cohomology(&cone.complex)?;

    let mut seq = ExactSequence::default();
    seq.push_node("0".into(), 0);
    seq.push_map(SparseMatrix::zeros(h_cone.dim(0), 0));
    for p in 0..=2 {
        let (lp, np) = (l.dim(p), n.dim(p));
        let hc_p = h_cone.at_or_empty(p);
        let (hn_p, hk_p) = (n.h.at_or_empty(p), k.h.at_or_empty(p));
        seq.push_node(format!("H^{p}(controlling)"), hc_p.dim);
        let proj = SparseMatrix::zeros(np, cone.complex.space.dim(p)).with_block(0, lp, &SparseMatrix::identity(np));
        seq.push_map(induced_map(&hc_p, &hn_p, &proj)?);
        seq.push_node(format!("H^{p}(End F x End G)"), hn_p.dim);
        seq.push_map(induced_map(&hn_p, &hk_p, &pi_map.block(p).mul(&g_map.block(p)))?);
        seq.push_node(format!("H^{p}(coker h)"), hk_p.dim);

        // q ↦ (l, 0, m) with m the lift of q and h(l) = dm
        let q1 = p + 1;
        let target = h_cone.at_or_empty(q1);
        let mut cols = Vec::with_capacity(hk_p.dim);
        for q in &hk_p.representatives {
            let mv = lift.block(p).mul_vec(q);
            let dm = m.complex().d(p).mul_vec(&mv);
            let lv = read_l.block(q1).mul_vec(&dm);
            if h_map.block(q1).mul_vec(&lv) != dm {
                return Err(Error::InternalCheck("coboundary of a lift does not come from L(α)".into()));
            }
            let v = lv.add(&mv.shifted(l.dim(q1) + n.dim(q1)));
            let coords = target
                .class_of(&v)
                .ok_or_else(|| Error::InternalCheck("connecting image is not a cone cocycle".into()))?;
            cols.push(SparseVec::from_dense(&coords));
        }
        seq.push_map(SparseMatrix::from_columns(target.dim, &cols));
    }
    seq.push_node("H^3(controlling)".into(), h_cone.dim(3));
    let coker_sequence = SequenceReport::new("controlling -> End F x End G -> coker h", &seq)?;
    let cone_sequence = SequenceReport::new("controlling -> L + End F x End G -> End(F+G)", &cone.long_exact_sequence(0, 2)?)?;

    let passed = coker_sequence.exact && cone_sequence.exact;
    let degs = 0..=3;
    Ok(DeformMorphismReport {
        source: f.name.clone(),
        target: g.name.clone(),
        window: d,
        weight_spread: delta,
        controlling: degs.clone().map(|p| h_cone.dim(p)).collect(),
        graph_subalgebra: l.dims(degs.clone()),
        end_pair: n.dims(degs.clone()),
        end_sum: m.dims(degs.clone()),
        coker_h: k.dims(degs),
        tangent_dim: h_cone.dim(1),
        obstruction_dim: h_cone.dim(2),
        coker_sequence,
        cone_sequence,
        passed,
    })
}
