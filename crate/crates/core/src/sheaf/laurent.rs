//! Laurent polynomials in `z` and small matrices over them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Σ c_k z^k`, finitely many nonzero terms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Laurent(BTreeMap<i64, Scalar>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn one() -> Self {
        Laurent::monomial(Scalar::one(), 0)
    }

    pub fn monomial(c: Scalar, k: i64) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(k, c);
        }
        Laurent(t)
    }

    pub fn constant(c: Scalar) -> Self {
        Laurent::monomial(c, 0)
    }

    /// `z^k`.
    pub fn z(k: i64) -> Self {
        Laurent::monomial(Scalar::one(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.0.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.0.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, k: i64, c: &Scalar) {
        let e = self.0.entry(k).or_insert_with(Scalar::zero);
        *e += c.clone();
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Laurent {
        self.scaled(&-Scalar::one())
    }

    pub fn scaled(&self, c: &Scalar) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent(self.0.iter().map(|(k, x)| (*k, x * c)).collect())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }

    /// `(c, k)` when this is the single term `c z^k`.
    pub fn as_monomial(&self) -> Option<(Scalar, i64)> {
        let mut it = self.terms();
        match (it.next(), it.next()) {
            (Some((k, c)), None) => Some((c.clone(), k)),
            _ => None,
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest exponent first
        for (n, (k, c)) in self.0.iter().rev().enumerate() {
            let neg = c < &Scalar::zero();
            let a = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = a.is_one();
            match *k {
                0 => write!(f, "{a}")?,
                _ if unit => {}
                _ => write!(f, "{a}*")?,
            }
            match *k {
                0 => {}
                1 => write!(f, "z")?,
                k => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses sums of terms `c`, `z`, `z^k`, `c*z^k`, `c z^k`, with `c` an integer
/// or fraction.
impl FromStr for Laurent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("Laurent polynomial `{s}`: {why}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        // split into signed terms, keeping the sign after `^`
        let mut terms = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && prev != Some('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        terms.push(cur);
        let mut out = Laurent::zero();
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-Scalar::one(), b),
                None => (Scalar::one(), t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let (coeff, exp) = match body.find('z') {
                None => (body, None),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        let e = rest.strip_prefix('^').ok_or_else(|| bad("expected `^` after z"))?;
                        e.parse::<i64>().map_err(|_| bad("bad exponent"))?
                    };
                    (c, Some(e))
                }
            };
            let c = if coeff.is_empty() {
                if exp.is_none() {
                    return Err(bad("missing term"));
                }
                Scalar::one()
            } else {
                coeff.parse::<Scalar>().map_err(|_| bad("bad coefficient"))?
            };
            out.add_term(exp.unwrap_or(0), &(c * sign));
        }
        Ok(out)
    }
}

/// Dense matrix with Laurent entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct LMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Laurent>,
}

impl LMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LMatrix { rows, cols, data: vec![Laurent::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = LMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Laurent::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Laurent>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(LMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// A column vector.
    pub fn column(entries: Vec<Laurent>) -> Self {
        LMatrix { rows: entries.len(), cols: 1, data: entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Laurent {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Laurent) {
        self.data[r * self.cols + c] = x;
    }

    pub fn add_at(&mut self, r: usize, c: usize, k: i64, x: &Scalar) {
        self.data[r * self.cols + c].add_term(k, x);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Laurent::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Laurent)> {
        self.data.iter().enumerate().map(move |(i, x)| (i / self.cols, i % self.cols, x))
    }

    pub fn mul(&self, other: &LMatrix) -> Result<LMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                context: "Laurent matrix product".into(),
                expected: (self.cols, self.cols),
                found: (other.rows, other.cols),
            });
        }
        let mut out = LMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LMatrix) -> LMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "Laurent matrix sum shape");
        LMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &LMatrix) -> LMatrix {
        self.add(&other.scaled(&-Scalar::one()))
    }

    pub fn scaled(&self, c: &Scalar) -> LMatrix {
        LMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.scaled(c)).collect() }
    }

    pub fn block_diag(blocks: &[&LMatrix]) -> LMatrix {
        let r = blocks.iter().map(|b| b.rows).sum();
        let c = blocks.iter().map(|b| b.cols).sum();
        let mut out = LMatrix::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &LMatrix) {
        for (i, j, x) in b.entries() {
            self.set(r0 + i, c0 + j, x.clone());
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> LMatrix {
        let mut out = LMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// Exponent `e_r` with every nonzero entry of row `r` a monomial `c z^{e_r}`.
    pub fn row_degrees(&self) -> Result<Vec<i64>> {
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut deg = None;
            for c in 0..self.cols {
                let x = self.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let (_, k) = x.as_monomial().ok_or_else(|| {
                    Error::InvalidInput(format!("entry ({r}, {c}) = {x} is not a monomial"))
                })?;
                match deg {
                    None => deg = Some(k),
                    Some(d) if d != k => {
                        return Err(Error::InvalidInput(format!("row {r} mixes degrees {d} and {k}")));
                    }
                    _ => {}
                }
            }
            out.push(deg.ok_or_else(|| Error::InvalidInput(format!("row {r} is zero")))?);
        }
        Ok(out)
    }

    /// Inverse of `diag(z^{e}) · C` with `C` an invertible scalar matrix.
    pub fn inverse(&self) -> Result<LMatrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("non-square transition".into()));
        }
        let n = self.rows;
        let e = self.row_degrees()?;
        // C = diag(z^{−e}) · self, inverted over the rationals
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row: Vec<Scalar> = (0..n).map(|c| self.get(r, c).coeff(e[r])).collect();
                row.extend((0..n).map(|c| if c == r { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or_else(|| Error::InvalidInput("transition is not invertible".into()))?;
            aug.swap(col, piv);
            let inv = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in 0..2 * n {
                        let sub = &aug[col][c] * &f;
                        aug[r][c] -= sub;
                    }
                }
            }
        }
        // (diag(z^e) C)^{−1} = C^{−1} diag(z^{−e})
        let mut out = LMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, Laurent::monomial(aug[r][n + c].clone(), -e[c]));
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for LMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

impl Serialize for LMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<&Laurent>> = (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect();
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Laurent {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["z^-2", "1 + z", "3/2*z^2 - z^-1", "-z", "0", "2"] {
            let x = p(s);
            assert_eq!(p(&x.to_string()), x, "{s}");
        }
        assert_eq!(p("z^-1 + z^-1").to_string(), "2*z^-1");
        assert!("z^".parse::<Laurent>().is_err());
        assert!("q".parse::<Laurent>().is_err());
    }

    #[test]
    fn monomial_inverse() {
        let g = LMatrix::from_rows(vec![vec![p("z^-1"), p("2z^-1")], vec![p("0"), p("z")]]).unwrap();
        let gi = g.inverse().unwrap();
        assert_eq!(g.mul(&gi).unwrap(), LMatrix::identity(2));
        assert_eq!(gi.mul(&g).unwrap(), LMatrix::identity(2));
    }
}
