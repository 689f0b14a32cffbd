//! Maurer-Cartan and gauge calculus in `L ⊗ m_A`.

use std::sync::Arc;

use super::{make_artin, ArtinKind, NilpotentElement};
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::graded::cohomology;
use crate::linalg::{kernel_basis, solve};
use crate::scalar::Scalar;
use crate::sparse::{SparseMatrix, SparseVec};

fn expect_degree(x: &NilpotentElement, deg: i32) -> Result<()> {
    if x.degree == deg || x.is_zero() {
        Ok(())
    } else {
        Err(Error::DegreeError { expected: deg, found: x.degree.to_string() })
    }
}

/// `dx + ½[x, x]`.
pub fn mc_residual(x: &NilpotentElement) -> Result<NilpotentElement> {
    expect_degree(x, 1)?;
    let mut x = x.clone();
    x.degree = 1;
    x.d().add(&x.bracket(&x)?.scaled(&Scalar::new(1, 2)))
}

/// `e^a * x = x + Σ_{n≥0} [a,−]^n / (n+1)! ([a, x] − da)`.
pub fn gauge(a: &NilpotentElement, x: &NilpotentElement) -> Result<NilpotentElement> {
    a.same_context(x)?;
    expect_degree(a, 0)?;
    expect_degree(x, 1)?;
    let mut a = a.clone();
    a.degree = 0;
    let mut x = x.clone();
    x.degree = 1;
    let mut term = a.bracket(&x)?.sub(&a.d())?;
    let mut out = x.clone();
    let mut fact = Scalar::one();
    let mut n = 0i64;
    // every bracket with a raises the weight, so the series stops
    while !term.is_zero() {
        fact *= Scalar::from_int(n + 1);
        out = out.add(&term.scaled(&fact.recip()))?;
        term = a.bracket(&term)?;
        n += 1;
        if n as usize > a.algebra.max_weight() as usize + 1 {
            return Err(Error::InternalCheck("gauge series did not terminate".into()));
        }
    }
    Ok(out)
}

/// The class of `½[x₁, x₁]` in `H²(L)` and, when it vanishes, a lift.
#[derive(Debug, Clone)]
pub struct Obstruction {
    /// Coordinates in `H²(L)` with respect to the cohomology representatives.
    pub class: Vec<Scalar>,
    /// `½[x₁, x₁]`, a flat vector of `L`.
    pub cocycle: SparseVec,
    /// `x₁ t + x₂ t²` over `K[t]/(t³)`, Maurer-Cartan.
    pub lift: Option<NilpotentElement>,
}

impl Obstruction {
    pub fn vanishes(&self) -> bool {
        self.class.iter().all(Scalar::is_zero)
    }
}

/// Primary obstruction of a first-order deformation over the dual numbers.
pub fn primary_obstruction(x1: &NilpotentElement) -> Result<Obstruction> {
    expect_degree(x1, 1)?;
    if x1.algebra.nilpotency_order != 2 || x1.algebra.dim_m() != 1 {
        return Err(Error::InvalidInput("primary obstruction expects an element over the dual numbers".into()));
    }
    let l = &x1.carrier;
    let v = x1.coeff(0).clone();
    if !l.d(&v).is_zero() {
        return Err(Error::NotFirstOrderMC);
    }
    let w = l.bracket(&v, &v)?.scaled(&Scalar::new(1, 2));
    let h = cohomology(l.complex())?;
    let class = match h.at(2) {
        Some(h2) => h2
            .class_of(&l.component(2, &w))
            .ok_or_else(|| Error::InternalCheck("½[x,x] is not a cocycle".into()))?,
        None => Vec::new(),
    };
    let d1 = l.complex().d(1);
    let lift = solve(&d1, &l.component(2, &w).scaled(&-Scalar::one())).map(|x2| l.embed(1, &x2));
    let lift = match lift {
        Some(x2) => {
            let a = make_artin(ArtinKind::TruncatedPoly, 3)?;
            let e = NilpotentElement::new(l.clone(), a, 1, vec![v, x2])?;
            if !mc_residual(&e)?.is_zero() {
                return Err(Error::InternalCheck("constructed lift is not Maurer-Cartan".into()));
            }
            Some(e)
        }
        None => None,
    };
    let out = Obstruction { class, cocycle: w, lift };
    if out.vanishes() != out.lift.is_some() {
        return Err(Error::InternalCheck("obstruction class disagrees with lift solvability".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct FirstOrderClasses {
    pub dim: usize,
    /// Maurer-Cartan elements over the dual numbers, one per class.
    pub representatives: Vec<NilpotentElement>,
}

/// Tangent space `H¹(L)` with representatives over the dual numbers.
pub fn first_order_classes(l: &Arc<Dgla>) -> Result<FirstOrderClasses> {
    let h = cohomology(l.complex())?;
    let eps = make_artin(ArtinKind::DualNumbers, 2)?;
    let reps = h
        .at(1)
        .map(|h1| h1.representatives.clone())
        .unwrap_or_default()
        .into_iter()
        .map(|r| NilpotentElement::simple(l.clone(), eps.clone(), 1, l.embed(1, &r), 0))
        .collect::<Result<Vec<_>>>()?;
    Ok(FirstOrderClasses { dim: reps.len(), representatives: reps })
}

/// A gauge `a` with `e^a * x = y`, or `None` when none exists.
///
/// Solved in two linear stages: weight 1 determines `a₁` up to degree-0
/// cocycles `z`; in weight 2 the equation
/// `d a₂ − ½[z, x₁ + y₁] = x₂ − y₂ + [p, x₁] − ½[p, dp]` is linear in
/// `(z, a₂)`, with `p` a particular weight-1 solution. Higher weights only
/// see `d`.
pub fn gauge_equivalent(x: &NilpotentElement, y: &NilpotentElement) -> Result<Option<NilpotentElement>> {
    x.same_context(y)?;
    let alg = x.algebra.clone();
    if alg.nilpotency_order > 3 {
        return Err(Error::UnsupportedOrder(alg.nilpotency_order));
    }
    for i in 0..alg.dim_m() {
        for j in 0..alg.dim_m() {
            if alg.weights[i] + alg.weights[j] > 2 && !alg.mul_basis(i, j).is_zero() {
                return Err(Error::Unsupported("products beyond weight 2 in a third-order algebra".into()));
            }
        }
    }
    for e in [x, y] {
        if !mc_residual(e)?.is_zero() {
            return Err(Error::InvalidInput("gauge_equivalent expects Maurer-Cartan elements".into()));
        }
    }
    let l = x.carrier.clone();
    let n1 = l.dim_in(1);
    let d0 = l.complex().d(0);
    let m = alg.dim_m();
    let w1 = alg.of_weight(1);

    // weight 1: d p_μ = x_μ − y_μ
    let mut p_coeffs = vec![SparseVec::new(); m];
    for &mu in &w1 {
        let rhs = l.component(1, &x.coeff(mu).sub(y.coeff(mu)));
        match solve(&d0, &rhs) {
            Some(s) => p_coeffs[mu] = l.embed(0, &s),
            None => return Ok(None),
        }
    }
    let p = NilpotentElement::new(l.clone(), alg.clone(), 0, p_coeffs)?;

    // weights ≥ 2: unknowns z (cocycles ⊗ weight-1 monomials) and a_ν
    let kernel: Vec<SparseVec> = kernel_basis(&d0).into_iter().map(|k| l.embed(0, &k)).collect();
    let x1 = x.weight_part(1);
    let y1 = y.weight_part(1);
    let x1y1 = x1.add(&y1)?;
    let higher: Vec<usize> = (0..m).filter(|&i| alg.weights[i] >= 2).collect();
    let flatten = |e: &NilpotentElement| -> SparseVec {
        let mut v = SparseVec::new();
        for (pos, &nu) in higher.iter().enumerate() {
            v.add_scaled(&l.component(1, e.coeff(nu)).shifted(pos * n1), &Scalar::one());
        }
        v
    };
    let mut columns = Vec::new();
    let mut z_unknowns = Vec::new();
    for &mu in &w1 {
        for k in &kernel {
            let zk = NilpotentElement::simple(l.clone(), alg.clone(), 0, k.clone(), mu)?;
            columns.push(flatten(&zk.bracket(&x1y1)?.scaled(&Scalar::new(-1, 2))));
            z_unknowns.push(zk);
        }
    }
    let mut a_unknowns = Vec::new();
    for &nu in &higher {
        for i in l.range(0) {
            let e = NilpotentElement::simple(l.clone(), alg.clone(), 0, SparseVec::unit(i), nu)?;
            columns.push(flatten(&e.d()));
            a_unknowns.push(e);
        }
    }
    let dp = p.d();
    let mut rhs = x.sub(y)?;
    rhs = rhs.add(&p.bracket(&x1)?)?;
    rhs = rhs.sub(&p.bracket(&dp)?.scaled(&Scalar::new(1, 2)))?;
    let rhs = flatten(&rhs);
    let mat = SparseMatrix::from_columns(higher.len() * n1, &columns);
    let Some(sol) = solve(&mat, &rhs) else { return Ok(None) };
    let mut a = p;
    for (idx, u) in z_unknowns.iter().chain(&a_unknowns).enumerate() {
        let c = sol.get(idx);
        if !c.is_zero() {
            a = a.add(&u.scaled(&c))?;
        }
    }
    if gauge(&a, x)? != *y {
        return Err(Error::InternalCheck("gauge witness failed re-evaluation".into()));
    }
    Ok(Some(a))
}

/// `a = du + [x, u]`; asserts `e^a * x = x`.
pub fn irrelevant_stabilizer(x: &NilpotentElement, u: &NilpotentElement) -> Result<NilpotentElement> {
    x.same_context(u)?;
    expect_degree(x, 1)?;
    expect_degree(u, -1)?;
    let mut u = u.clone();
    u.degree = -1;
    let mut x = x.clone();
    x.degree = 1;
    let a = u.d().add(&x.bracket(&u)?)?;
    if gauge(&a, &x)? != x {
        return Err(Error::InternalCheck("irrelevant stabilizer moved x".into()));
    }
    Ok(a)
}
