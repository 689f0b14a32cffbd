//! Local Artinian coefficient algebras and elements of `L ⊗ m_A`.

mod bch;
mod ops;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

pub use bch::{bch, bch_terms, BchTerm};
pub use ops::{
    first_order_classes, gauge, gauge_equivalent, irrelevant_stabilizer, mc_residual, primary_obstruction,
    FirstOrderClasses, Obstruction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtinKind {
    DualNumbers,
    TruncatedPoly,
    TruncatedTwoVars,
}

/// A local algebra given by its maximal ideal: a monomial basis, each
/// monomial with a positive weight, and a commutative multiplication table
/// that adds weights.
#[derive(Clone, PartialEq, Serialize)]
pub struct ArtinAlgebra {
    pub name: String,
    pub m_basis: Vec<String>,
    pub weights: Vec<u32>,
    /// `mult[i][j]` is `m_i · m_j` over the basis.
    #[serde(skip)]
    mult: Vec<Vec<SparseVec>>,
    pub nilpotency_order: usize,
}

impl fmt::Debug for ArtinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArtinAlgebra({}, m = {:?})", self.name, self.m_basis)
    }
}

impl ArtinAlgebra {
    /// Validates commutativity, associativity, weight additivity and
    /// nilpotency; computes the nilpotency order.
    pub fn new(name: &str, m_basis: Vec<String>, weights: Vec<u32>, mult: Vec<Vec<SparseVec>>) -> Result<Self> {
        let n = m_basis.len();
        let bad = |msg: String| Err(Error::BadParams(msg));
        if weights.len() != n || mult.len() != n || mult.iter().any(|r| r.len() != n) {
            return bad("table sizes disagree with the basis".into());
        }
        if weights.contains(&0) {
            return bad("weights must be positive".into());
        }
        for i in 0..n {
            for j in 0..n {
                if mult[i][j] != mult[j][i] {
                    return bad(format!("{}·{} is not commutative", m_basis[i], m_basis[j]));
                }
                if mult[i][j].iter().any(|(k, _)| k >= n || weights[k] != weights[i] + weights[j]) {
                    return bad(format!("{}·{} does not add weights", m_basis[i], m_basis[j]));
                }
            }
        }
        let alg = ArtinAlgebra { name: name.into(), m_basis, weights, mult, nilpotency_order: 0 };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let l = alg.mul(&alg.mul(&SparseVec::unit(i), &SparseVec::unit(j)), &SparseVec::unit(k));
                    let r = alg.mul(&SparseVec::unit(i), &alg.mul(&SparseVec::unit(j), &SparseVec::unit(k)));
                    if l != r {
                        return bad("multiplication is not associative".into());
                    }
                }
            }
        }
        // weights add, so m^N = 0 once N exceeds the top weight
        let top = alg.weights.iter().copied().max().unwrap_or(0) as usize;
        let mut power: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
        let mut order = 1;
        while !power.is_empty() {
            order += 1;
            if order > top + 1 {
                return bad("maximal ideal is not nilpotent".into());
            }
            let mut next = crate::linalg::SpanBasis::new();
            let mut gens = Vec::new();
            for p in &power {
                for i in 0..n {
                    let q = alg.mul(p, &SparseVec::unit(i));
                    if next.insert(&q) {
                        gens.push(q);
                    }
                }
            }
            power = gens;
        }
        Ok(ArtinAlgebra { nilpotency_order: order, ..alg })
    }

    pub fn dim_m(&self) -> usize {
        self.m_basis.len()
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(&self.mult[i][j], &(x * y));
            }
        }
        out
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.m_basis.iter().position(|l| l == label)
    }

    /// Indices of basis monomials of weight `w`.
    pub fn of_weight(&self, w: u32) -> Vec<usize> {
        (0..self.dim_m()).filter(|&i| self.weights[i] == w).collect()
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }
}

fn monomial_label(vars: &[&str], exps: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    parts.join("*")
}

/// Monomial algebra `K[vars]/(vars)^n`, maximal ideal only.
fn truncated_monomials(name: &str, vars: &[&str], n: u32) -> Result<ArtinAlgebra> {
    let mut exps: Vec<Vec<u32>> = Vec::new();
    let k = vars.len();
    for total in 1..n {
        // exponent vectors of the given total degree, lexicographically descending
        let mut stack = vec![(Vec::new(), total)];
        while let Some((prefix, left)) = stack.pop() {
            if prefix.len() + 1 == k {
                let mut e = prefix.clone();
                e.push(left);
                exps.push(e);
                continue;
            }
            for x in 0..=left {
                let mut e = prefix.clone();
                e.push(x);
                stack.push((e, left - x));
            }
        }
    }
    let labels: Vec<String> = exps.iter().map(|e| monomial_label(vars, e)).collect();
    let weights: Vec<u32> = exps.iter().map(|e| e.iter().sum()).collect();
    let index = |e: &[u32]| exps.iter().position(|x| x == e);
    let mult = exps
        .iter()
        .map(|a| {
            exps.iter()
                .map(|b| {
                    let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    match index(&s) {
                        Some(i) => SparseVec::unit(i),
                        None => SparseVec::new(),
                    }
                })
                .collect()
        })
        .collect();
    ArtinAlgebra::new(name, labels, weights, mult)
}

/// `dual_numbers` (`K[ε]`), `truncated_poly` (`K[t]/(t^n)`) or
/// `truncated_two_vars` (`K[x, y]/(x, y)^n`).
pub fn make_artin(kind: ArtinKind, n: u32) -> Result<Arc<ArtinAlgebra>> {
    let alg = match kind {
        ArtinKind::DualNumbers => truncated_monomials("dual_numbers", &["eps"], 2)?,
        ArtinKind::TruncatedPoly if n >= 2 => truncated_monomials(&format!("K[t]/(t^{n})"), &["t"], n)?,
        ArtinKind::TruncatedTwoVars if n >= 2 => {
            truncated_monomials(&format!("K[x,y]/(x,y)^{n}"), &["x", "y"], n)?
        }
        _ => return Err(Error::BadParams(format!("n = {n} must be at least 2"))),
    };
    Ok(Arc::new(alg))
}

impl std::str::FromStr for ArtinKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dual_numbers" => Ok(ArtinKind::DualNumbers),
            "truncated_poly" => Ok(ArtinKind::TruncatedPoly),
            "truncated_two_vars" => Ok(ArtinKind::TruncatedTwoVars),
            other => Err(Error::BadParams(format!("unknown algebra kind `{other}`"))),
        }
    }
}

/// A homogeneous element `Σ_μ x_μ ⊗ μ` of `L ⊗ m_A`, stored as one flat
/// `L`-vector per basis monomial `μ`.
#[derive(Debug, Clone)]
pub struct NilpotentElement {
    pub carrier: Arc<Dgla>,
    pub algebra: Arc<ArtinAlgebra>,
    pub degree: i32,
    coeffs: Vec<SparseVec>,
}

impl PartialEq for NilpotentElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other).is_ok() && self.degree == other.degree && self.coeffs == other.coeffs
    }
}

impl NilpotentElement {
    pub fn zero(carrier: Arc<Dgla>, algebra: Arc<ArtinAlgebra>, degree: i32) -> Self {
        let n = algebra.dim_m();
        NilpotentElement { carrier, algebra, degree, coeffs: vec![SparseVec::new(); n] }
    }

    /// From per-monomial flat `L`-vectors; all must lie in degree `degree`.
    pub fn new(carrier: Arc<Dgla>, algebra: Arc<ArtinAlgebra>, degree: i32, coeffs: Vec<SparseVec>) -> Result<Self> {
        if coeffs.len() != algebra.dim_m() {
            return Err(Error::ShapeMismatch {
                context: "coefficients per monomial".into(),
                expected: (algebra.dim_m(), 1),
                found: (coeffs.len(), 1),
            });
        }
        for v in &coeffs {
            if v.support_max().is_some_and(|k| k >= carrier.dim()) {
                return Err(Error::InvalidInput("coefficient outside the carrier".into()));
            }
            if !carrier.is_in_degree(v, degree) {
                return Err(Error::DegreeError {
                    expected: degree,
                    found: format!("{:?}", carrier.homogeneous_degree(v)),
                });
            }
        }
        Ok(NilpotentElement { carrier, algebra, degree, coeffs })
    }

    /// `v ⊗ μ` for a single monomial index.
    pub fn simple(carrier: Arc<Dgla>, algebra: Arc<ArtinAlgebra>, degree: i32, v: SparseVec, mono: usize) -> Result<Self> {
        let mut coeffs = vec![SparseVec::new(); algebra.dim_m()];
        coeffs[mono] = v;
        NilpotentElement::new(carrier, algebra, degree, coeffs)
    }

    pub fn coeff(&self, mono: usize) -> &SparseVec {
        &self.coeffs[mono]
    }

    pub fn coeffs(&self) -> &[SparseVec] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SparseVec::is_zero)
    }

    pub(crate) fn same_context(&self, other: &Self) -> Result<()> {
        let same_l = Arc::ptr_eq(&self.carrier, &other.carrier) || self.carrier == other.carrier;
        let same_a = Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra;
        if same_l && same_a {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    fn with_coeffs(&self, degree: i32, coeffs: Vec<SparseVec>) -> Self {
        NilpotentElement { carrier: self.carrier.clone(), algebra: self.algebra.clone(), degree, coeffs }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        if self.degree != other.degree && !other.is_zero() && !self.is_zero() {
            return Err(Error::DegreeError { expected: self.degree, found: other.degree.to_string() });
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(self.with_coeffs(degree, self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(&-Scalar::one()))
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        self.with_coeffs(self.degree, self.coeffs.iter().map(|v| v.scaled(c)).collect())
    }

    pub fn d(&self) -> Self {
        self.with_coeffs(self.degree + 1, self.coeffs.iter().map(|v| self.carrier.d(v)).collect())
    }

    /// `[x ⊗ a, y ⊗ b] = [x, y] ⊗ ab`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        let alg = &self.algebra;
        let mut coeffs = vec![SparseVec::new(); alg.dim_m()];
        for (p, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (q, y) in other.coeffs.iter().enumerate() {
                let prod = alg.mul_basis(p, q);
                if y.is_zero() || prod.is_zero() {
                    continue;
                }
                let b = self.carrier.bracket(x, y)?;
                for (mu, c) in prod.iter() {
                    coeffs[mu].add_scaled(&b, c);
                }
            }
        }
        Ok(self.with_coeffs(self.degree + other.degree, coeffs))
    }

    /// Image under a dgLa morphism, coefficientwise.
    pub fn pushforward(&self, f: &crate::dgla::DglaMorphism) -> Result<Self> {
        if !(Arc::ptr_eq(&f.source, &self.carrier) || *f.source == *self.carrier) {
            return Err(Error::CarrierMismatch);
        }
        Ok(NilpotentElement {
            carrier: f.target.clone(),
            algebra: self.algebra.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|v| f.apply(v)).collect(),
        })
    }

    /// Part of weight exactly `w`.
    pub fn weight_part(&self, w: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, v)| if self.algebra.weights[i] == w { v.clone() } else { SparseVec::new() })
            .collect();
        self.with_coeffs(self.degree, coeffs)
    }

    /// `(monomial, L-label, coefficient)` triples, for reports.
    pub fn entries(&self) -> Vec<(String, String, Scalar)> {
        let mut out = Vec::new();
        for (mu, v) in self.coeffs.iter().enumerate() {
            for (i, x) in v.iter() {
                out.push((self.algebra.m_basis[mu].clone(), self.carrier.label(i), x.clone()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_numbers() {
        let a = make_artin(ArtinKind::DualNumbers, 2).unwrap();
        assert_eq!(a.m_basis, vec!["eps"]);
        assert!(a.mul_basis(0, 0).is_zero());
        assert_eq!(a.nilpotency_order, 2);
    }

    #[test]
    fn truncated_poly_three() {
        let a = make_artin(ArtinKind::TruncatedPoly, 3).unwrap();
        assert_eq!(a.m_basis, vec!["t", "t^2"]);
        assert_eq!(a.mul_basis(0, 0), &SparseVec::unit(1));
        assert!(a.mul_basis(0, 1).is_zero());
        assert_eq!(a.nilpotency_order, 3);
    }

    #[test]
    fn two_vars_order_two() {
        let a = make_artin(ArtinKind::TruncatedTwoVars, 2).unwrap();
        assert_eq!(a.dim_m(), 2);
        assert!((0..2).all(|i| (0..2).all(|j| a.mul_basis(i, j).is_zero())));
        let b = make_artin(ArtinKind::TruncatedTwoVars, 3).unwrap();
        assert_eq!(b.dim_m(), 5);
        assert_eq!(b.nilpotency_order, 3);
    }

    #[test]
    fn bad_params() {
        assert!(matches!(make_artin(ArtinKind::TruncatedPoly, 1), Err(Error::BadParams(_))));
    }
}
