//! Covers, locally free sheaves, Čech complexes and Čech semicosimplicial
//! dgLas.

mod cech;
mod cover;
mod dgla_sheaf;
mod laurent;
mod presentation;

pub use cech::{
    cech_complex, cech_cohomology, cech_dims, cup, cup_windows, model_cohomology, unvec, vectorize, CechCohomology,
    SectionModel, Window,
};
pub use cover::{make_finite_cover, make_p1_cover, CoverKind, CoverModel, RingModel};
pub use dgla_sheaf::{
    build_cech_scdgla, build_from_sheaf, tot_blocks, BundlePart, CechScDgla, CoordBlock, DglaSelector, LocalBasis,
    MatrixDglaSheaf,
};
pub use laurent::{LMatrix, Laurent};
pub use presentation::{
    direct_sum, end_sheaf, hom_sheaf, make_line_bundle, trivial_sheaf, vec_index, CoherentSystem, SheafMorphism,
    SheafPresentation,
};

use crate::dgla::Dgla;
use crate::error::Result;

/// Local dgLas of a sheaf of dgLas, one per simplex of the nerve.
fn local_dglas(sel: &DglaSelector, window: Window) -> Result<Vec<(Vec<usize>, Dgla)>> {
    let sheaf = MatrixDglaSheaf::from_selector(sel, window)?;
    let cover = sheaf.parts[0].sheaf.cover.clone();
    cover.simplices().iter().map(|s| Ok((s.clone(), sheaf.local_dgla(s)?))).collect()
}

/// `L(α) = {φ ∈ End(F ⊕ G) : φ(graph α) ⊆ graph α}` on every simplex,
/// coordinatized by `(a, b, d)` with `c = αa + αbα − dα`.
pub fn graph_subalgebra_l(alpha: &SheafMorphism, window: Window) -> Result<Vec<(Vec<usize>, Dgla)>> {
    local_dglas(&DglaSelector::Graph(alpha.clone()), window)
}

/// `Hom^{≥0}(Q, Q)` for `Q: U⊗O → E` on every simplex.
pub fn hom_complex_qq(system: &CoherentSystem, window: Window) -> Result<Vec<(Vec<usize>, Dgla)>> {
    local_dglas(&DglaSelector::HomQQ(system.clone()), window)
}
