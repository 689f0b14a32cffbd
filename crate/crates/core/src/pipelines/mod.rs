//! End-to-end computations on Čech models, each returning a report whose
//! verdicts can be recomputed from the witness matrices it carries.

mod defk;
mod morphism;
mod pair;
mod report;
mod scenario;
mod sections;
mod selftest;

pub use defk::{defk_tangent, DefkTangentReport, Membership, NuSpec};
pub use morphism::{deform_morphism_report, DeformMorphismReport};
pub use pair::{
    full_system, m_delta_check, pair_eu_report, smoothness_flags, MDeltaReport, PairEuReport, SmoothnessReport,
};
pub use report::{CheckOutcome, ScenarioReport, SequenceReport, Verdict};
pub use scenario::{parse_scenario, run_scenario, run_scenario_file, validate_scenario, Scenario, Validation};
pub use sections::{section_extension, SectionExtensionReport};
pub use selftest::{selftest, SelftestLine};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::{cohomology, ChainMap, CochainComplex, Cohomology};
use crate::sheaf::{build_cech_scdgla, cech_dims, tot_blocks, trivial_sheaf, CechScDgla, DglaSelector, Window};
use crate::sheaf::{CoverModel, LMatrix, SheafPresentation};
use crate::semicosimplicial::TotalComplex;
use crate::sparse::{SparseMatrix, SparseVec};

/// A Čech semicosimplicial dgLa with its total complex and cohomology.
pub(crate) struct TotModel {
    pub cech: CechScDgla,
    pub tot: TotalComplex,
    pub h: Cohomology,
}

impl TotModel {
    pub fn build(sel: &DglaSelector, window: Window) -> Result<Self> {
        let cech = build_cech_scdgla(sel, window)?;
        let tot = cech.total()?;
        let h = cohomology(&tot.complex)?;
        Ok(TotModel { cech, tot, h })
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.tot.complex
    }

    pub fn dim(&self, p: i32) -> usize {
        self.tot.complex.space.dim(p)
    }

    pub fn dims(&self, degrees: std::ops::RangeInclusive<i32>) -> Vec<usize> {
        degrees.map(|p| self.h.dim(p)).collect()
    }

    /// Level-wise map `self → target` of full local matrices, on `Tot`.
    pub fn transfer<F>(&self, target: &TotModel, exact: bool, f: F) -> Result<TotMap>
    where
        F: Fn(&[usize], &LMatrix) -> Result<LMatrix>,
    {
        let levels = self.cech.transfer_levels(&target.cech, exact, f)?;
        let blocks = tot_blocks((&self.cech.sc, &self.tot), (&target.cech.sc, &target.tot), &levels);
        Ok(TotMap { blocks, rows: target.tot.complex.clone(), cols: self.tot.complex.clone() })
    }

    /// The 1-cochain of the single coordinate block sitting in `Tot^1`.
    pub fn level_cochain(&self, p: i32, v: &SparseVec) -> SparseVec {
        let n = p as usize;
        let g = &self.cech.sc.levels[n];
        let flat = g.embed(0, &v.slice(self.tot.offset(p, n), g.dim_in(0)));
        let model = &self.cech.sheaf.blocks[0].model;
        let offs = model.cochain_offsets(n);
        let mut out = SparseVec::new();
        for (pos, inc) in self.cech.inclusions[n].iter().enumerate() {
            for (i, &flat_i) in inc.iter().enumerate() {
                out.set(offs[pos] + i, flat.get(flat_i));
            }
        }
        out
    }
}

/// A degree-preserving linear map between total complexes.
pub(crate) struct TotMap {
    blocks: BTreeMap<i32, SparseMatrix>,
    rows: CochainComplex,
    cols: CochainComplex,
}

impl TotMap {
    pub fn block(&self, p: i32) -> SparseMatrix {
        self.blocks
            .get(&p)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.rows.space.dim(p), self.cols.space.dim(p)))
    }

    pub fn chain_map(&self) -> Result<ChainMap> {
        ChainMap::new(self.cols.clone(), self.rows.clone(), self.blocks.clone())
    }
}

/// `H^i(O)` on the cover for `i = 1, 2` must vanish.
pub(crate) fn require_structure_sheaf_acyclic(cover: &std::sync::Arc<CoverModel>, window: i64) -> Result<Vec<usize>> {
    let o = trivial_sheaf(cover, 1, "O")?;
    let dims = cech_dims(&o, Window::symmetric(window))?;
    let h = |p: usize| dims.get(p).copied().unwrap_or(0);
    if h(1) != 0 || h(2) != 0 {
        return Err(Error::HypothesisViolated(format!("h1(O) = {}, h2(O) = {} on this cover; both must vanish", h(1), h(2))));
    }
    Ok(dims)
}

/// Largest `|weight|` of a local matrix of `Hom(F, G)` on a simplex with first
/// vertex `chart`.
pub(crate) fn hom_weight(f: &SheafPresentation, g: &SheafPresentation, chart: usize, m: &LMatrix) -> i64 {
    let (lf, lg) = (f.frame_weights(chart), g.frame_weights(chart));
    let (lf, lg) = (&lf, &lg);
    m.entries()
        .flat_map(|(a, b, x)| x.terms().map(move |(k, _)| (lg[a] - lf[b] + k).abs()).collect::<Vec<_>>())
        .max()
        .unwrap_or(0)
}

/// Runs `f` at windows `d` and `d + 1` and insists the signatures agree.
pub(crate) fn stable<T, F, S>(d: i64, f: F, signature: S) -> Result<T>
where
    F: Fn(i64) -> Result<T>,
    S: Fn(&T) -> Vec<usize>,
{
    let here = f(d)?;
    let next = f(d + 1)?;
    if signature(&here) != signature(&next) {
        return Err(Error::WindowNotStable { window: d });
    }
    Ok(here)
}
