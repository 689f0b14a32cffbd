//! First-order deformations of `E` keeping at least `k` sections.

use serde::Serialize;

use super::hom_weight;
use crate::error::{Error, Result};
use crate::graded::CohomologyDegree;
use crate::linalg::{kernel_basis, rank};
use crate::scalar::Scalar;
use crate::sheaf::{cup, end_sheaf, model_cohomology, vectorize, LMatrix, Laurent, SectionModel, SheafPresentation, Window};
use crate::sparse::{SparseMatrix, SparseVec};

/// A class in `H^1(End E)`: coordinates in the report's basis, or a cocycle
/// given by one matrix per edge.
#[derive(Debug, Clone)]
pub enum NuSpec {
    Coords(Vec<Scalar>),
    Cochain(Vec<LMatrix>),
}

#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    pub nu: Vec<Scalar>,
    /// `dim ker(s ↦ ν ∪ s)` on `H^0(E)`.
    pub kernel_dim: usize,
    pub member: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DefkTangentReport {
    pub sheaf: String,
    pub k: usize,
    pub window: i64,
    pub h0: usize,
    pub h1_end: usize,
    pub h1: usize,
    /// `"tangent space"` when `h^0 = k`, `"cone"` when `h^0 > k`.
    pub regime: String,
    /// Stacked cup matrix: column `j` is `(ν_j ∪ s_u)_u` in `H^1(E)` coordinates.
    pub cup_matrix: SparseMatrix,
    /// Basis of `{a : a ∪ s = 0 ∀ s}` when `h^0 = k`.
    pub tangent_basis: Option<Vec<Vec<Scalar>>>,
    pub tangent_dim: Option<usize>,
    pub membership: Option<Membership>,
    /// Dimension of the span of the cone, equal to `h^1(End E)` when `h^0 > k`.
    pub span_dim: Option<usize>,
    pub statement: String,
}

impl DefkTangentReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("  h0 = {} h1(End E) = {} h1 = {} k = {}", self.h0, self.h1_end, self.h1, self.k),
            format!("  {}", self.statement),
        ];
        if let Some(t) = self.tangent_dim {
            out.push(format!("  tangent dimension {t}"));
        }
        if let Some(m) = &self.membership {
            let nu: Vec<String> = m.nu.iter().map(ToString::to_string).collect();
            out.push(format!("  nu = [{}]: kernel {} member {}", nu.join(", "), m.kernel_dim, m.member));
        }
        out
    }

    /// Whether `ν` (coordinates) lies in the first-order locus.
    pub fn contains(&self, nu: &[Scalar]) -> bool {
        let v = SparseVec::from_dense(nu);
        let img = self.cup_matrix.mul_vec(&v);
        if self.regime == "tangent space" {
            return img.is_zero();
        }
        self.kernel_dim(&v) >= self.k
    }

    /// `dim ker(s ↦ ν ∪ s)` from the stacked cup matrix.
    pub fn kernel_dim(&self, nu: &SparseVec) -> usize {
        let img = self.cup_matrix.mul_vec(nu);
        // column u of the h1 × h0 matrix is block u of the image
        let cols: Vec<SparseVec> = (0..self.h0).map(|u| img.slice(u * self.h1, self.h1)).collect();
        self.h0 - rank(&SparseMatrix::from_columns(self.h1, &cols))
    }
}

/// Tangent space (`h^0 = k`) or tangent cone membership (`h^0 > k`) for
/// deformations of `E` with at least `k` sections.
pub fn defk_tangent(e: &SheafPresentation, k: usize, nu: Option<&NuSpec>, d: i64) -> Result<DefkTangentReport> {
    let end = end_sheaf(e)?;
    let e_model = SectionModel::new(e, Window::symmetric(d));
    let (_, he) = model_cohomology(&e_model)?;
    let h0 = he.dim(0);
    if k > h0 {
        return Err(Error::KTooLarge { k, h0 });
    }
    let wide = d + d.max(e.max_weight());
    let end_model = SectionModel::new(&end, Window::symmetric(d));
    let (end_complex, hend) = model_cohomology(&end_model)?;
    let cup_model = SectionModel::new(e, Window::symmetric(wide));
    let (_, hcup) = model_cohomology(&cup_model)?;
    let (h1_end, h1) = (hend.at_or_empty(1), hcup.at_or_empty(1));

    let sections: Vec<Vec<Vec<Laurent>>> =
        he.at_or_empty(0).representatives.iter().map(|r| e_model.cochain_locals(0, r)).collect();
    let cup_class = |a: &SparseVec, s: &[Vec<Laurent>]| -> Result<Vec<Scalar>> {
        let c = cup(&end_model, a, s, &cup_model)?;
        h1.class_of(&c).ok_or_else(|| Error::InternalCheck("cup product is not a cocycle".into()))
    };
    let mut cols = Vec::with_capacity(h1_end.dim);
    for a in &h1_end.representatives {
        let mut col = SparseVec::new();
        for (u, s) in sections.iter().enumerate() {
            col = col.add(&SparseVec::from_dense(&cup_class(a, s)?).shifted(u * h1.dim));
        }
        cols.push(col);
    }
    let cup_matrix = SparseMatrix::from_columns(h0 * h1.dim, &cols);

    let nu_coords = match nu {
        None => None,
        Some(NuSpec::Coords(c)) => {
            if c.len() != h1_end.dim {
                return Err(Error::InvalidInput(format!("nu needs {} coordinates", h1_end.dim)));
            }
            Some(c.clone())
        }
        Some(NuSpec::Cochain(ms)) => Some(class_of_cochain(e, &end, ms, &end_model, &end_complex, &h1_end, d)?),
    };

    let mut report = DefkTangentReport {
        sheaf: e.name.clone(),
        k,
        window: d,
        h0,
        h1_end: h1_end.dim,
        h1: h1.dim,
        regime: String::new(),
        cup_matrix,
        tangent_basis: None,
        tangent_dim: None,
        membership: None,
        span_dim: None,
        statement: String::new(),
    };
    if h0 == k {
        let basis = kernel_basis(&report.cup_matrix);
        report.regime = "tangent space".into();
        report.statement = format!("t = {{a in H^1(End E) : a u s = 0 for all s in H^0(E)}}, dimension {}", basis.len());
        report.tangent_dim = Some(basis.len());
        report.tangent_basis = Some(basis.iter().map(|v| v.to_dense(h1_end.dim)).collect());
    } else {
        report.regime = "cone".into();
        report.span_dim = Some(h1_end.dim);
        report.statement = format!(
            "first-order locus = {{nu : dim ker(s -> nu u s) >= {k}}}; its span is H^1(End E), dimension {}",
            h1_end.dim
        );
    }
    if let Some(c) = nu_coords {
        let v = SparseVec::from_dense(&c);
        let kernel_dim = report.kernel_dim(&v);
        let member = report.contains(&c);
        report.membership = Some(Membership { nu: c, kernel_dim, member });
    }
    Ok(report)
}

fn class_of_cochain(
    e: &SheafPresentation,
    end: &SheafPresentation,
    ms: &[LMatrix],
    end_model: &SectionModel,
    end_complex: &crate::graded::CochainComplex,
    h1_end: &CohomologyDegree,
    d: i64,
) -> Result<Vec<Scalar>> {
    let edges = e.cover.nerve(1);
    if ms.len() != edges.len() {
        return Err(Error::InvalidInput(format!("nu needs one matrix per edge ({})", edges.len())));
    }
    let w = edges.iter().zip(ms).map(|(s, m)| hom_weight(e, e, s[0], m)).max().unwrap_or(0);
    if w > d {
        return Err(Error::WindowOverflow(format!("nu has weight {w} beyond the window {d} of {}", end.name)));
    }
    let v = end_model.cochain_from_locals(1, &ms.iter().map(vectorize).collect::<Vec<_>>())?;
    if !end_complex.d(1).mul_vec(&v).is_zero() {
        return Err(Error::InvalidInput("nu is not a Čech cocycle".into()));
    }
    h1_end.class_of(&v).ok_or_else(|| Error::InvalidInput("nu is not a Čech cocycle".into()))
}
