//! Semicosimplicial dgLas, their total complexes, and the nonlinear
//! conditions defining first-order classes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::artin::{bch, gauge, make_artin, mc_residual, ArtinAlgebra, ArtinKind, NilpotentElement};
use crate::dgla::{product, validate_morphism, zero_dgla, Dgla, DglaMorphism, ValidationReport};
use crate::error::{Error, Result};
use crate::graded::{cohomology, CochainComplex};
use crate::linalg::{rank, span_rank};
use crate::scalar::Scalar;
use crate::sparse::{SparseMatrix, SparseVec};

/// Levels `g_0, …, g_N` and cofaces `∂_{k,i}: g_{i−1} → g_i`, `0 ≤ k ≤ i`.
#[derive(Debug, Clone)]
pub struct ScDgla {
    pub levels: Vec<Arc<Dgla>>,
    /// `cofaces[i − 1][k]` is `∂_{k,i}`.
    pub cofaces: Vec<Vec<DglaMorphism>>,
}

impl ScDgla {
    pub fn new(levels: Vec<Arc<Dgla>>, cofaces: Vec<Vec<DglaMorphism>>) -> Result<Self> {
        if levels.is_empty() || cofaces.len() + 1 != levels.len() {
            return Err(Error::InvalidSc("need one coface family per positive level".into()));
        }
        for (idx, family) in cofaces.iter().enumerate() {
            let i = idx + 1;
            if family.len() != i + 1 {
                return Err(Error::InvalidSc(format!("level {i} needs {} cofaces", i + 1)));
            }
            for f in family {
                if *f.source != *levels[i - 1] || *f.target != *levels[i] {
                    return Err(Error::InvalidSc(format!("coface into level {i} has wrong endpoints")));
                }
            }
        }
        Ok(ScDgla { levels, cofaces })
    }

    /// All levels equal to `g`, all cofaces the identity.
    pub fn constant(g: Arc<Dgla>, top: usize) -> Self {
        let levels = vec![g.clone(); top + 1];
        let cofaces = (1..=top).map(|i| vec![DglaMorphism::identity(g.clone()); i + 1]).collect();
        ScDgla { levels, cofaces }
    }

    /// `L × N ⇉ M → 0` with `∂_0 = h ∘ pr_L`, `∂_1 = g ∘ pr_N`.
    pub fn from_pair(h: &DglaMorphism, g: &DglaMorphism) -> Result<Self> {
        if *h.target != *g.target {
            return Err(Error::BaseMismatch);
        }
        let (ln, inc) = product(&[&h.source, &g.source]);
        let ln = Arc::new(ln);
        let m = h.target.clone();
        let pull = |f: &DglaMorphism, inc: &[usize]| {
            let triplets = f.matrix().triplets().iter().map(|(r, c, x)| (*r, inc[*c], x.clone()));
            DglaMorphism::new(ln.clone(), m.clone(), SparseMatrix::from_triplets(m.dim(), ln.dim(), triplets))
        };
        let d0 = pull(h, &inc[0])?;
        let d1 = pull(g, &inc[1])?;
        let zero = Arc::new(zero_dgla());
        let top = vec![DglaMorphism::zero(m.clone(), zero.clone()); 3];
        ScDgla::new(vec![ln, m, zero], vec![vec![d0, d1], top])
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    /// `∂_{k,i}`.
    pub fn coface(&self, k: usize, i: usize) -> &DglaMorphism {
        &self.cofaces[i - 1][k]
    }

    pub fn has_negative_degrees(&self) -> bool {
        self.levels.iter().any(|g| g.space().degrees().any(|d| d < 0))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityViolation {
    /// `(i, k, l)` for the identity `∂_{k+1,i+1} ∂_{l,i} = ∂_{l,i+1} ∂_{k,i}`.
    pub indices: (usize, usize, usize),
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ScReport {
    pub identity_violations: Vec<IdentityViolation>,
    /// `((k, i), report)` for cofaces failing the morphism axioms.
    pub morphism_violations: Vec<((usize, usize), ValidationReport)>,
}

impl ScReport {
    pub fn is_valid(&self) -> bool {
        self.identity_violations.is_empty() && self.morphism_violations.is_empty()
    }
}

pub fn validate_scdgla(s: &ScDgla) -> ScReport {
    let mut rep = ScReport::default();
    for i in 1..=s.top() {
        for k in 0..=i {
            let r = validate_morphism(s.coface(k, i));
            if !r.is_valid() {
                rep.morphism_violations.push(((k, i), r));
            }
        }
    }
    for i in 1..s.top() {
        for k in 0..=i {
            for l in 0..=k {
                let lhs = s.coface(k + 1, i + 1).matrix().mul(s.coface(l, i).matrix());
                let rhs = s.coface(l, i + 1).matrix().mul(s.coface(k, i).matrix());
                if lhs != rhs {
                    rep.identity_violations.push(IdentityViolation { indices: (i, k, l) });
                }
            }
        }
    }
    rep
}

/// The total complex with its layout: degree `p` is `⊕_n g_n^{p−n}`, levels
/// ascending.
#[derive(Debug, Clone)]
pub struct TotalComplex {
    pub complex: CochainComplex,
    offsets: BTreeMap<(i32, usize), usize>,
}

impl TotalComplex {
    /// Offset of `g_n^{p−n}` inside `Tot^p`.
    pub fn offset(&self, p: i32, n: usize) -> usize {
        self.offsets[&(p, n)]
    }

    /// Place a degree-`p − n` local vector of level `n` into `Tot^p`.
    pub fn embed(&self, s: &ScDgla, p: i32, n: usize, flat: &SparseVec) -> SparseVec {
        let g = &s.levels[n];
        g.component(p - n as i32, flat).shifted(self.offset(p, n))
    }
}

/// `D = Σ_n (−1)^n d_n + Σ_i Σ_k (−1)^k ∂_{k,i}`.
pub fn total_complex(s: &ScDgla) -> Result<TotalComplex> {
    let top = s.top();
    let mut degs = std::collections::BTreeSet::new();
    for (n, g) in s.levels.iter().enumerate() {
        for d in g.space().degrees() {
            degs.insert(d + n as i32);
        }
    }
    let mut offsets = BTreeMap::new();
    let mut dims = BTreeMap::new();
    let lo = degs.iter().next().copied().unwrap_or(0);
    let hi = degs.iter().next_back().copied().unwrap_or(-1);
    for p in lo - 1..=hi + 1 {
        let mut acc = 0;
        for n in 0..=top {
            offsets.insert((p, n), acc);
            acc += s.levels[n].dim_in(p - n as i32);
        }
        if degs.contains(&p) {
            dims.insert(p, acc);
        }
    }
    let dim = |p: i32| dims.get(&p).copied().unwrap_or(0);
    let mut blocks = BTreeMap::new();
    for &p in &degs {
        let mut t = Vec::new();
        for n in 0..=top {
            let g = &s.levels[n];
            let q = p - n as i32;
            let c0 = offsets[&(p, n)];
            let sign = Scalar::sign(n as i64);
            for &(r, c, ref x) in g.complex().d(q).triplets() {
                t.push((offsets[&(p + 1, n)] + r, c0 + c, x * &sign));
            }
            if n < top {
                for k in 0..=n + 1 {
                    let blk = s.coface(k, n + 1).block(q);
                    let sk = Scalar::sign(k as i64);
                    for &(r, c, ref x) in blk.triplets() {
                        t.push((offsets[&(p + 1, n + 1)] + r, c0 + c, x * &sk));
                    }
                }
            }
        }
        blocks.insert(p, SparseMatrix::from_triplets(dim(p + 1), dim(p), t));
    }
    let complex = CochainComplex::from_blocks(&dims, blocks)?;
    if !crate::graded::check_complex(&complex)? {
        return Err(Error::InvalidSc("total differential does not square to zero".into()));
    }
    Ok(TotalComplex { complex, offsets })
}

/// `(l, m)` with `l ∈ g_0^1 ⊗ m_A`, `m ∈ g_1^0 ⊗ m_A`.
#[derive(Debug, Clone)]
pub struct Z1Element {
    pub l: NilpotentElement,
    pub m: NilpotentElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Z1Verdict {
    pub holds: bool,
    /// `"maurer_cartan"`, `"gauge_compatibility"` or `"cocycle"`.
    pub violated: Option<String>,
}

fn require_nonnegative(s: &ScDgla) -> Result<()> {
    if s.has_negative_degrees() {
        Err(Error::Unsupported(
            "levels with negative degrees need a degree −1 witness on level 2".into(),
        ))
    } else {
        Ok(())
    }
}

/// `a • b • c`.
fn bch3(a: &NilpotentElement, b: &NilpotentElement, c: &NilpotentElement) -> Result<NilpotentElement> {
    bch(&bch(a, b)?, c)
}

/// The three defects of `(l, m)`: `dl + ½[l,l]`, `∂_1 l − e^m * ∂_0 l`, and
/// `∂_0 m • −∂_1 m • ∂_2 m` (zero when there is no level 2).
pub fn z1_residuals(s: &ScDgla, e: &Z1Element) -> Result<[NilpotentElement; 3]> {
    let mc = mc_residual(&e.l)?;
    let d0l = e.l.pushforward(s.coface(0, 1))?;
    let d1l = e.l.pushforward(s.coface(1, 1))?;
    let compat = d1l.sub(&gauge(&e.m, &d0l)?)?;
    let cocycle = if s.top() >= 2 {
        let neg = |x: NilpotentElement| x.scaled(&-Scalar::one());
        bch3(
            &e.m.pushforward(s.coface(0, 2))?,
            &neg(e.m.pushforward(s.coface(1, 2))?),
            &e.m.pushforward(s.coface(2, 2))?,
        )?
    } else {
        NilpotentElement::zero(e.m.carrier.clone(), e.m.algebra.clone(), 0)
    };
    Ok([mc, compat, cocycle])
}

pub fn z1sc_check(s: &ScDgla, a: &Arc<ArtinAlgebra>, e: &Z1Element) -> Result<Z1Verdict> {
    require_nonnegative(s)?;
    if !Arc::ptr_eq(a, &e.l.algebra) && **a != *e.l.algebra {
        return Err(Error::CarrierMismatch);
    }
    let names = ["maurer_cartan", "gauge_compatibility", "cocycle"];
    for (r, name) in z1_residuals(s, e)?.iter().zip(names) {
        if !r.is_zero() {
            return Ok(Z1Verdict { holds: false, violated: Some(name.into()) });
        }
    }
    Ok(Z1Verdict { holds: true, violated: None })
}

/// `e^a * l_0 = l_1` and `−m_0 • −∂_1 a • m_1 • ∂_0 a = 0`.
pub fn z1sc_equiv(
    s: &ScDgla,
    a_alg: &Arc<ArtinAlgebra>,
    e0: &Z1Element,
    e1: &Z1Element,
    a: &NilpotentElement,
) -> Result<bool> {
    require_nonnegative(s)?;
    if !Arc::ptr_eq(a_alg, &a.algebra) && **a_alg != *a.algebra {
        return Err(Error::CarrierMismatch);
    }
    if gauge(a, &e0.l)? != e1.l {
        return Ok(false);
    }
    let neg = |x: &NilpotentElement| x.scaled(&-Scalar::one());
    let lhs = bch(
        &bch3(&neg(&e0.m), &neg(&a.pushforward(s.coface(1, 1))?), &e1.m)?,
        &a.pushforward(s.coface(0, 1))?,
    )?;
    Ok(lhs.is_zero())
}

/// First-order classes `Z¹_sc / ~` over the dual numbers.
///
/// Both the defining conditions and the equivalence are evaluated with the
/// nonlinear code above on basis vectors; over the dual numbers they are
/// linear, which yields the matrices whose ranks give the dimension.
pub fn h1sc_first_order(s: &ScDgla) -> Result<usize> {
    require_nonnegative(s)?;
    let eps = make_artin(ArtinKind::DualNumbers, 2)?;
    let (g0, g1) = (s.levels[0].clone(), s.levels[1].clone());
    let unknowns_l: Vec<usize> = g0.range(1).collect();
    let unknowns_m: Vec<usize> = g1.range(0).collect();
    let zero_l = NilpotentElement::zero(g0.clone(), eps.clone(), 1);
    let zero_m = NilpotentElement::zero(g1.clone(), eps.clone(), 0);
    let simple = |g: &Arc<Dgla>, deg, i| NilpotentElement::simple(g.clone(), eps.clone(), deg, SparseVec::unit(i), 0);

    // residual vector: [mc (g0 flat) | compat (g1 flat) | cocycle (g2 flat)]
    let sizes = [g0.dim(), g1.dim(), s.levels.get(2).map_or(0, |g| g.dim())];
    let flatten = |rs: &[NilpotentElement; 3]| -> SparseVec {
        let mut v = rs[0].coeff(0).clone();
        v = v.add(&rs[1].coeff(0).shifted(sizes[0]));
        if s.top() >= 2 {
            v = v.add(&rs[2].coeff(0).shifted(sizes[0] + sizes[1]));
        }
        v
    };
    let mut cols = Vec::new();
    for &i in &unknowns_l {
        let e = Z1Element { l: simple(&g0, 1, i)?, m: zero_m.clone() };
        cols.push(flatten(&z1_residuals(s, &e)?));
    }
    for &j in &unknowns_m {
        let e = Z1Element { l: zero_l.clone(), m: simple(&g1, 0, j)? };
        cols.push(flatten(&z1_residuals(s, &e)?));
    }
    let n_unknowns = cols.len();
    let conditions = SparseMatrix::from_columns(sizes.iter().sum(), &cols);
    let z_dim = n_unknowns - rank(&conditions);

    // image of the equivalence: a ↦ (e^a * 0, m₁) with −∂_1 a • m₁ • ∂_0 a = 0
    let mut images = Vec::new();
    for i in g0.range(0) {
        let a = simple(&g0, 0, i)?;
        let dl = gauge(&a, &zero_l)?;
        let m1 = bch(&a.pushforward(s.coface(1, 1))?.scaled(&-Scalar::one()), &a.pushforward(s.coface(0, 1))?)?
            .scaled(&-Scalar::one());
        let mut v = SparseVec::new();
        for (pos, &k) in unknowns_l.iter().enumerate() {
            v.set(pos, dl.coeff(0).get(k));
        }
        for (pos, &k) in unknowns_m.iter().enumerate() {
            v.set(unknowns_l.len() + pos, m1.coeff(0).get(k));
        }
        // the equivalence image must consist of solutions
        let e = Z1Element {
            l: dl.clone(),
            m: m1.clone(),
        };
        if !z1_residuals(s, &e)?.iter().all(NilpotentElement::is_zero) {
            return Err(Error::InternalCheck("equivalence image leaves Z¹_sc".into()));
        }
        images.push(v);
    }
    Ok(z_dim - span_rank(&images))
}

/// Object condition for the two-level `(h, g)` diagram: `x`, `y` Maurer-Cartan
/// and `e^w * h(x) = g(y)`.
pub fn total_groupoid_object_check(
    h: &DglaMorphism,
    g: &DglaMorphism,
    x: &NilpotentElement,
    y: &NilpotentElement,
    w: &NilpotentElement,
) -> Result<bool> {
    if *h.target != *g.target || *w.carrier != *h.target {
        return Err(Error::ShapeMismatch {
            context: "object data of the (h, g) diagram".into(),
            expected: (h.target.dim(), h.target.dim()),
            found: (g.target.dim(), w.carrier.dim()),
        });
    }
    if !mc_residual(x)?.is_zero() || !mc_residual(y)?.is_zero() {
        return Ok(false);
    }
    Ok(gauge(w, &x.pushforward(h)?)? == y.pushforward(g)?)
}

/// Morphism condition between objects `(x₀, y₀, w₀) → (x₁, y₁, w₁)` given by
/// `(a, b)`: `e^a * x₀ = x₁`, `e^b * y₀ = y₁` and `w₁ • h(a) = g(b) • w₀`.
#[allow(clippy::too_many_arguments)]
pub fn total_groupoid_morphism_check(
    h: &DglaMorphism,
    g: &DglaMorphism,
    source: (&NilpotentElement, &NilpotentElement, &NilpotentElement),
    target: (&NilpotentElement, &NilpotentElement, &NilpotentElement),
    a: &NilpotentElement,
    b: &NilpotentElement,
) -> Result<bool> {
    if gauge(a, source.0)? != *target.0 || gauge(b, source.1)? != *target.1 {
        return Ok(false);
    }
    Ok(bch(target.2, &a.pushforward(h)?)? == bch(&b.pushforward(g)?, source.2)?)
}

/// `H¹` of the total complex, for comparison with [`h1sc_first_order`].
pub fn total_h1(s: &ScDgla) -> Result<usize> {
    Ok(cohomology(&total_complex(s)?.complex)?.dim(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::examples::{abelian, gl};
    use crate::graded::GradedMap;

    fn acyclic() -> Arc<Dgla> {
        let s = crate::dgla::examples::space(&[(0, 1), (1, 1)]);
        let d = GradedMap::with_blocks(s.clone(), s.clone(), 1, [(0, SparseMatrix::identity(1))]).unwrap();
        Arc::new(Dgla::abelian(CochainComplex::new(s, d).unwrap()))
    }

    #[test]
    fn constant_is_valid_and_has_level_zero_cohomology() {
        let g = Arc::new(abelian(&[(0, 2), (1, 1)]));
        let s = ScDgla::constant(g.clone(), 0);
        assert!(validate_scdgla(&s).is_valid());
        let t = total_complex(&s).unwrap();
        let h = cohomology(&t.complex).unwrap();
        assert_eq!((h.dim(0), h.dim(1)), (2, 1));
        let s2 = ScDgla::constant(g, 2);
        assert!(validate_scdgla(&s2).is_valid());
        assert_eq!(total_h1(&s2).unwrap(), 1);
        assert_eq!(h1sc_first_order(&s2).unwrap(), 1);
    }

    #[test]
    fn acyclic_constant_has_no_first_order_classes() {
        let s = ScDgla::constant(acyclic(), 1);
        assert_eq!(h1sc_first_order(&s).unwrap(), 0);
        assert_eq!(total_h1(&s).unwrap(), 0);
    }

    #[test]
    fn pair_diagram_padded_is_valid() {
        let m = Arc::new(gl(2));
        let id = DglaMorphism::identity(m.clone());
        let s = ScDgla::from_pair(&id, &id).unwrap();
        assert!(validate_scdgla(&s).is_valid());
        assert_eq!(s.levels[2].dim(), 0);
    }

    #[test]
    fn trivial_z1_element() {
        let g = Arc::new(abelian(&[(0, 1), (1, 1)]));
        let s = ScDgla::constant(g.clone(), 2);
        let eps = make_artin(ArtinKind::DualNumbers, 2).unwrap();
        let e = Z1Element {
            l: NilpotentElement::zero(g.clone(), eps.clone(), 1),
            m: NilpotentElement::zero(g.clone(), eps.clone(), 0),
        };
        assert!(z1sc_check(&s, &eps, &e).unwrap().holds);
        let a = NilpotentElement::zero(g, eps.clone(), 0);
        assert!(z1sc_equiv(&s, &eps, &e, &e, &a).unwrap());
    }
}
