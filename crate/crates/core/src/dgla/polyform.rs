//! Polynomial forms `M[t, dt]` and elements of homotopy fiber products.
//!
//! An element is `Σ t^k a_k + Σ t^k dt b_k` with forms written on the left.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyFormElement {
    pub base: Arc<Dgla>,
    pub t_part: BTreeMap<u32, SparseVec>,
    pub dt_part: BTreeMap<u32, SparseVec>,
}

fn add_into(map: &mut BTreeMap<u32, SparseVec>, k: u32, v: &SparseVec, c: &Scalar) {
    let e = map.entry(k).or_default();
    e.add_scaled(v, c);
    if e.is_zero() {
        map.remove(&k);
    }
}

impl PolyFormElement {
    pub fn zero(base: Arc<Dgla>) -> Self {
        PolyFormElement { base, t_part: BTreeMap::new(), dt_part: BTreeMap::new() }
    }

    /// `a · t^k`.
    pub fn monomial(base: Arc<Dgla>, k: u32, a: SparseVec) -> Self {
        let mut x = PolyFormElement::zero(base);
        add_into(&mut x.t_part, k, &a, &Scalar::one());
        x
    }

    /// `a · t^k dt`.
    pub fn dt_monomial(base: Arc<Dgla>, k: u32, a: SparseVec) -> Self {
        let mut x = PolyFormElement::zero(base);
        add_into(&mut x.dt_part, k, &a, &Scalar::one());
        x
    }

    /// `a` constant in `t`.
    pub fn constant(base: Arc<Dgla>, a: SparseVec) -> Self {
        PolyFormElement::monomial(base, 0, a)
    }

    pub fn is_zero(&self) -> bool {
        self.t_part.is_empty() && self.dt_part.is_empty()
    }

    fn same_base(&self, other: &PolyFormElement) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || self.base == other.base {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn add(&self, other: &PolyFormElement) -> Result<PolyFormElement> {
        self.same_base(other)?;
        Ok(self.add_scaled(other, &Scalar::one()))
    }

    pub fn scaled(&self, c: &Scalar) -> PolyFormElement {
        PolyFormElement::zero(self.base.clone()).add_scaled(self, c)
    }

    fn add_scaled(&self, other: &PolyFormElement, c: &Scalar) -> PolyFormElement {
        let mut out = self.clone();
        for (&k, v) in &other.t_part {
            add_into(&mut out.t_part, k, v, c);
        }
        for (&k, v) in &other.dt_part {
            add_into(&mut out.dt_part, k, v, c);
        }
        out
    }
}

/// Substitutes `t = t0`, `dt = 0`.
pub fn poly_eval(x: &PolyFormElement, t0: &Scalar) -> SparseVec {
    let mut out = SparseVec::new();
    for (&k, a) in &x.t_part {
        let mut p = Scalar::one();
        for _ in 0..k {
            p *= t0;
        }
        out.add_scaled(a, &p);
    }
    out
}

/// `d(t^k a) = t^k da + k t^{k−1} dt a`, `d(t^k dt b) = −t^k dt db`.
pub fn poly_d(x: &PolyFormElement) -> PolyFormElement {
    let g = &x.base;
    let mut out = PolyFormElement::zero(g.clone());
    for (&k, a) in &x.t_part {
        add_into(&mut out.t_part, k, &g.d(a), &Scalar::one());
        if k > 0 {
            add_into(&mut out.dt_part, k - 1, a, &Scalar::from_int(k as i64));
        }
    }
    for (&k, b) in &x.dt_part {
        add_into(&mut out.dt_part, k, &g.d(b), &-Scalar::one());
    }
    out
}

/// Degree-homogeneous pieces of a base element, so Koszul signs can be applied.
fn split_by_degree(g: &Dgla, v: &SparseVec) -> BTreeMap<i32, SparseVec> {
    let mut out: BTreeMap<i32, SparseVec> = BTreeMap::new();
    for (i, x) in v.iter() {
        out.entry(g.degree_of(i)).or_default().set(i, x.clone());
    }
    out
}

/// `[ω a, η b] = (−1)^{|a||η|} ωη [a, b]` with `dt² = 0`.
pub fn poly_bracket(x: &PolyFormElement, y: &PolyFormElement) -> Result<PolyFormElement> {
    x.same_base(y)?;
    let g = &x.base;
    let mut out = PolyFormElement::zero(g.clone());
    for (&k, a) in &x.t_part {
        for (&l, b) in &y.t_part {
            add_into(&mut out.t_part, k + l, &g.bracket(a, b)?, &Scalar::one());
        }
        for (&l, b) in &y.dt_part {
            // η = t^l dt has degree 1
            for (deg, a_p) in split_by_degree(g, a) {
                add_into(&mut out.dt_part, k + l, &g.bracket(&a_p, b)?, &Scalar::sign(deg as i64));
            }
        }
    }
    for (&k, a) in &x.dt_part {
        for (&l, b) in &y.t_part {
            add_into(&mut out.dt_part, k + l, &g.bracket(a, b)?, &Scalar::one());
        }
    }
    Ok(out)
}

/// `(l, n, m)` with `l ∈ L`, `n ∈ N`, `m ∈ M[t, dt]`.
#[derive(Debug, Clone)]
pub struct HtpyFiberElement {
    pub l: SparseVec,
    pub n: SparseVec,
    pub m: PolyFormElement,
}

/// Whether `m(0) = h(l)` and `m(1) = g(n)`.
pub fn htpy_fiber_check(h: &DglaMorphism, g: &DglaMorphism, e: &HtpyFiberElement) -> Result<bool> {
    if h.target.as_ref() != g.target.as_ref() || e.m.base.as_ref() != h.target.as_ref() {
        return Err(Error::BaseMismatch);
    }
    Ok(poly_eval(&e.m, &Scalar::zero()) == h.apply(&e.l) && poly_eval(&e.m, &Scalar::one()) == g.apply(&e.n))
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;
    use crate::sparse::SparseMatrix;

    fn setup() -> Arc<Dgla> {
        let delta = SparseMatrix::from_triplets(2, 2, [(1, 0, Scalar::one())]);
        Arc::new(graded_end(&[(0, 1), (1, 1)], Some(&delta)))
    }

    #[test]
    fn eval_examples() {
        let g = setup();
        let a = SparseVec::unit(0);
        let c = PolyFormElement::constant(g.clone(), a.clone());
        assert_eq!(poly_eval(&c, &Scalar::new(3, 7)), a);
        let t = PolyFormElement::monomial(g.clone(), 1, a.clone());
        assert_eq!(poly_eval(&t, &Scalar::one()), a);
        assert!(poly_eval(&t, &Scalar::zero()).is_zero());
        let dt = PolyFormElement::dt_monomial(g, 0, a);
        assert!(poly_eval(&dt, &Scalar::from_int(5)).is_zero());
    }

    #[test]
    fn d_of_t_squared() {
        let g = setup();
        let a = SparseVec::unit(g.range(0).start);
        let x = PolyFormElement::monomial(g.clone(), 2, a.clone());
        let dx = poly_d(&x);
        assert_eq!(dx.t_part[&2], g.d(&a));
        assert_eq!(dx.dt_part[&1], a.scaled(&Scalar::from_int(2)));
        assert!(poly_d(&dx).is_zero());
    }

    #[test]
    fn bracket_of_linear_terms() {
        let g = Arc::new(gl(2));
        let (a, b) = (SparseVec::unit(1), SparseVec::unit(2));
        let x = PolyFormElement::monomial(g.clone(), 1, a.clone());
        let y = PolyFormElement::monomial(g.clone(), 1, b.clone());
        let z = poly_bracket(&x, &y).unwrap();
        assert_eq!(z.t_part.keys().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(z.t_part[&2], g.bracket(&a, &b).unwrap());
    }

    #[test]
    fn fiber_examples() {
        let g = setup();
        let id = DglaMorphism::identity(g.clone());
        let a = SparseVec::unit(0);
        let zero = HtpyFiberElement { l: SparseVec::new(), n: SparseVec::new(), m: PolyFormElement::zero(g.clone()) };
        assert!(htpy_fiber_check(&id, &id, &zero).unwrap());
        let constant = HtpyFiberElement { l: a.clone(), n: a.clone(), m: PolyFormElement::constant(g.clone(), a.clone()) };
        assert!(htpy_fiber_check(&id, &id, &constant).unwrap());
        // a(1 − t)
        let m = PolyFormElement::constant(g.clone(), a.clone())
            .add(&PolyFormElement::monomial(g.clone(), 1, a.neg()))
            .unwrap();
        let path = HtpyFiberElement { l: a, n: SparseVec::new(), m };
        assert!(htpy_fiber_check(&id, &id, &path).unwrap());
    }
}
