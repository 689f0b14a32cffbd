//! Lifting a global section along a first-order deformation of `E`.

use serde::Serialize;

use super::hom_weight;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sheaf::{
    cech_complex, cup, model_cohomology, end_sheaf, vectorize, LMatrix, Laurent, SectionModel, SheafPresentation, Window,
};

#[derive(Debug, Clone, Serialize)]
pub struct SectionExtensionReport {
    pub sheaf: String,
    pub window: i64,
    /// Class of `a ∪ s` in `H^1(E)`.
    pub cup_class: Vec<Scalar>,
    pub extends: bool,
    /// `σ_i` per chart with `g_ij (σ_i + a_ij s_i) = σ_j` on every edge.
    pub lift: Option<Vec<Vec<Laurent>>>,
    /// The cochain `a ∪ s` per edge when it is not a coboundary.
    pub certificate: Option<Vec<Vec<Laurent>>>,
    pub verified: bool,
}

impl SectionExtensionReport {
    pub fn lines(&self) -> Vec<String> {
        let class: Vec<String> = self.cup_class.iter().map(ToString::to_string).collect();
        let mut out = vec![format!("  class of a u s = [{}]", class.join(", "))];
        if let Some(l) = &self.lift {
            let charts: Vec<String> = l.iter().map(|v| format!("({})", join(v))).collect();
            out.push(format!("  lift sigma = {}", charts.join(" ")));
        }
        if let Some(c) = &self.certificate {
            let edges: Vec<String> = c.iter().map(|v| format!("({})", join(v))).collect();
            out.push(format!("  obstruction cochain {}", edges.join(" ")));
        }
        out.push(format!("  extends {} verified {}", self.extends, self.verified));
        out
    }
}

fn join(v: &[Laurent]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Decides whether `s` extends along `g̃_ij = g_ij (1 + ε a_ij)`: either a lift
/// `σ` with `δσ = a ∪ s`, re-verified edge by edge, or the nonzero class of
/// `a ∪ s`.
///
/// `a[e]` is the matrix on the `e`-th edge in the chart of its first vertex;
/// `s[i]` is the section on `V_i`.
pub fn section_extension(
    e: &SheafPresentation,
    a: &[LMatrix],
    s: &[Vec<Laurent>],
    d: i64,
) -> Result<SectionExtensionReport> {
    let cover = e.cover.clone();
    let edges = cover.nerve(1);
    if a.len() != edges.len() || a.iter().any(|m| m.rows() != e.rank || m.cols() != e.rank) {
        return Err(Error::InvalidInput(format!("need a {0}x{0} matrix on each of the {1} edges", e.rank, edges.len())));
    }
    if s.len() != cover.n_sets || s.iter().any(|v| v.len() != e.rank) {
        return Err(Error::InvalidInput(format!("need a rank-{} vector on each chart", e.rank)));
    }
    for (i, j) in cover.edges() {
        if e.transition(i, j).mul(&LMatrix::column(s[i].clone()))? != LMatrix::column(s[j].clone()) {
            return Err(Error::InvalidInput(format!("section does not glue on V_{i}{j}")));
        }
    }
    let end = end_sheaf(e)?;
    let wa = edges.iter().zip(a).map(|(edge, m)| hom_weight(e, e, edge[0], m)).max().unwrap_or(0);
    let o = trivial(e)?;
    let ws = (0..cover.n_sets).map(|i| hom_weight(&o, e, i, &LMatrix::column(s[i].clone()))).max().unwrap_or(0);
    let end_model = SectionModel::new(&end, Window::symmetric(d.max(wa)));
    let e_model = SectionModel::new(e, Window::symmetric(d.max(wa + ws)));

    let a_vec = end_model.cochain_from_locals(1, &a.iter().map(vectorize).collect::<Vec<_>>())?;
    let end_complex = cech_complex(&end_model)?;
    if !end_complex.d(1).mul_vec(&a_vec).is_zero() {
        return Err(Error::InvalidInput("a is not a Čech cocycle".into()));
    }
    let c = cup(&end_model, &a_vec, s, &e_model)?;
    let (e_complex, he) = model_cohomology(&e_model)?;
    let h1 = he.at_or_empty(1);
    let cup_class = h1.class_of(&c).ok_or_else(|| Error::InternalCheck("a ∪ s is not a cocycle".into()))?;
    let extends = cup_class.iter().all(Scalar::is_zero);

    if !extends {
        let verified = !h1.is_coboundary(&c);
        return Ok(SectionExtensionReport {
            sheaf: e.name.clone(),
            window: d,
            cup_class,
            extends,
            lift: None,
            certificate: Some(e_model.cochain_locals(1, &c)),
            verified,
        });
    }
    let sigma_vec = h1
        .bounding_cochain(&e_complex.d(0), &c)
        .ok_or_else(|| Error::InternalCheck("zero class without a bounding cochain".into()))?;
    let sigma = e_model.cochain_locals(0, &sigma_vec);
    // g_ij (σ_i + a_ij s_i) = σ_j on every edge
    let mut verified = true;
    for (edge, am) in edges.iter().zip(a) {
        let (i, j) = (edge[0], edge[1]);
        let corr = am.mul(&LMatrix::column(s[i].clone()))?.add(&LMatrix::column(sigma[i].clone()));
        verified &= e.transition(i, j).mul(&corr)? == LMatrix::column(sigma[j].clone());
    }
    Ok(SectionExtensionReport {
        sheaf: e.name.clone(),
        window: d,
        cup_class,
        extends,
        lift: Some(sigma),
        certificate: None,
        verified,
    })
}

fn trivial(e: &SheafPresentation) -> Result<SheafPresentation> {
    crate::sheaf::trivial_sheaf(&e.cover, 1, "O")
}
