//! Baker-Campbell-Hausdorff products.
//!
//! The series is computed once per nilpotency order as `log(exp X exp Y)` in
//! the free associative algebra on `X, Y`, truncated at the order, then
//! written as left-normed brackets by the Dynkin-Specht-Wever map.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::NilpotentElement;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ORDER: usize = 4;

/// `c · [...[[w_0, w_1], w_2], ..., w_k]` with letters `0 = X`, `1 = Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchTerm {
    pub coeff: Scalar,
    pub word: Vec<u8>,
}

type Poly = BTreeMap<Vec<u8>, Scalar>;

fn mul(a: &Poly, b: &Poly, max_len: usize) -> Poly {
    let mut out = Poly::new();
    for (u, x) in a {
        for (v, y) in b {
            if u.len() + v.len() > max_len {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(Scalar::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_scaled(a: &mut Poly, b: &Poly, c: &Scalar) {
    for (w, x) in b {
        *a.entry(w.clone()).or_insert_with(Scalar::zero) += x * c;
    }
    a.retain(|_, c| !c.is_zero());
}

fn exp_letter(letter: u8, max_len: usize) -> Poly {
    let mut out = Poly::new();
    let mut fact = Scalar::one();
    for k in 0..=max_len {
        if k > 0 {
            fact *= Scalar::from_int(k as i64);
        }
        out.insert(vec![letter; k], fact.recip());
    }
    out
}

/// Left-normed bracket of a word, expanded in the free associative algebra.
fn left_normed(word: &[u8]) -> Poly {
    let mut acc: Poly = [(vec![word[0]], Scalar::one())].into();
    for &l in &word[1..] {
        let letter: Poly = [(vec![l], Scalar::one())].into();
        let mut next = mul(&acc, &letter, usize::MAX);
        add_scaled(&mut next, &mul(&letter, &acc, usize::MAX), &-Scalar::one());
        acc = next;
    }
    acc
}

/// `log(exp X exp Y)` truncated to words of length `≤ max_len`.
fn log_exp(max_len: usize) -> Poly {
    let e = mul(&exp_letter(0, max_len), &exp_letter(1, max_len), max_len);
    // z = e − 1, log(1 + z) = Σ (−1)^{k+1} z^k / k
    let mut z = e;
    z.remove(&Vec::new());
    let mut log = Poly::new();
    let mut power = z.clone();
    for k in 1..=max_len {
        add_scaled(&mut log, &power, &(Scalar::sign(k as i64 + 1) * Scalar::new(1, k as i64)));
        power = mul(&power, &z, max_len);
    }
    log
}

fn compute_terms(order: usize) -> Vec<BchTerm> {
    let log = log_exp(order - 1);
    // [[Y, X], …] = −[[X, Y], …]; words starting with a repeated letter vanish
    let mut merged: BTreeMap<(usize, Vec<u8>), Scalar> = BTreeMap::new();
    for (mut word, c) in log {
        let mut c = c * Scalar::new(1, word.len() as i64);
        if word.len() > 1 {
            if word[0] == word[1] {
                continue;
            }
            if word[0] > word[1] {
                word.swap(0, 1);
                c = -c;
            }
        }
        *merged.entry((word.len(), word)).or_insert_with(Scalar::zero) += c;
    }
    let terms: Vec<BchTerm> = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((_, word), coeff)| BchTerm { coeff, word })
        .collect();
    debug_assert!(reconstructs(&terms, order));
    terms
}

/// The Dynkin image re-expanded must equal the associative logarithm.
fn reconstructs(terms: &[BchTerm], order: usize) -> bool {
    let mut lie = Poly::new();
    for t in terms {
        add_scaled(&mut lie, &left_normed(&t.word), &t.coeff);
    }
    lie == log_exp(order - 1)
}

/// Cached BCH terms for `m_A^order = 0`, orders 2 to 4.
pub fn bch_terms(order: usize) -> Result<&'static [BchTerm]> {
    static CACHE: [OnceLock<Vec<BchTerm>>; MAX_ORDER + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    let order = order.max(2);
    Ok(CACHE[order].get_or_init(|| compute_terms(order)))
}

/// `a • b` with `e^{a • b} = e^a e^b`; the series is exact at the algebra's
/// nilpotency order.
pub fn bch(a: &NilpotentElement, b: &NilpotentElement) -> Result<NilpotentElement> {
    a.same_context(b)?;
    for x in [a, b] {
        if x.degree != 0 && !x.is_zero() {
            return Err(Error::DegreeError { expected: 0, found: x.degree.to_string() });
        }
    }
    let terms = bch_terms(a.algebra.nilpotency_order)?;
    let mut out = NilpotentElement::zero(a.carrier.clone(), a.algebra.clone(), 0);
    for t in terms {
        let pick = |l: u8| if l == 0 { a } else { b };
        let mut acc = pick(t.word[0]).clone();
        for &l in &t.word[1..] {
            if acc.is_zero() {
                break;
            }
            acc = acc.bracket(pick(l))?;
        }
        out = out.add(&acc.scaled(&t.coeff))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_three_terms() {
        let t = bch_terms(3).unwrap();
        // X + Y + ½[X, Y]
        assert_eq!(
            t,
            &[
                BchTerm { coeff: Scalar::one(), word: vec![0] },
                BchTerm { coeff: Scalar::one(), word: vec![1] },
                BchTerm { coeff: Scalar::new(1, 2), word: vec![0, 1] },
            ]
        );
    }

    #[test]
    fn order_four_reconstructs() {
        assert!(reconstructs(bch_terms(4).unwrap(), 4));
        assert!(matches!(bch_terms(5), Err(Error::UnsupportedOrder(5))));
    }
}
