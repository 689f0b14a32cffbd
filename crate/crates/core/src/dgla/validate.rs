//! Machine checks of the dgLa and morphism axioms on basis tuples.

use serde::Serialize;

use super::{BracketValue, Dgla, DglaMorphism};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomKind {
    DSquared,
    BracketDegree,
    SkewSymmetry,
    Jacobi,
    Leibniz,
    MorphismDifferential,
    MorphismBracket,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: AxiomKind,
    /// Offending basis elements as `deg:label`.
    pub basis: Vec<String>,
    /// The nonzero defect, as `(label, coefficient)` pairs.
    pub defect: Vec<(String, Scalar)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Tuples skipped because a bracket leaves a truncated model.
    pub skipped: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: AxiomKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

fn defect(g: &Dgla, v: &SparseVec) -> Vec<(String, Scalar)> {
    v.iter().map(|(i, x)| (g.label(i), x.clone())).collect()
}

/// Checks `d² = 0`, bracket homogeneity, skew-symmetry on the diagonal,
/// Jacobi on all basis triples and Leibniz on all basis pairs.
pub fn validate_dgla(g: &Dgla) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = g.dim();
    let push = |rep: &mut ValidationReport, kind, basis: &[usize], v: &SparseVec| {
        rep.violations.push(Violation {
            kind,
            basis: basis.iter().map(|&i| g.label(i)).collect(),
            defect: defect(g, v),
        });
    };

    for i in 0..n {
        let dd = g.d(g.d_basis(i));
        if !dd.is_zero() {
            push(&mut rep, AxiomKind::DSquared, &[i], &dd);
        }
    }

    for (&(i, j), v) in g.bracket_table() {
        let BracketValue::Value(v) = v else { continue };
        let want = g.degree_of(i) + g.degree_of(j);
        if !g.is_in_degree(v, want) {
            push(&mut rep, AxiomKind::BracketDegree, &[i, j], v);
        }
        // [a,a] = −(−1)^{|a|²}[a,a] forces [a,a] = 0 in even degree
        if i == j && g.degree_of(i).rem_euclid(2) == 0 {
            push(&mut rep, AxiomKind::SkewSymmetry, &[i, i], v);
        }
    }

    let sign = |p: i32| Scalar::sign(p as i64);
    let basis: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();

    // Leibniz: d[a,b] − [da,b] − (−1)^{|a|}[a,db]
    for a in 0..n {
        for b in 0..n {
            let lhs = (|| {
                let ab = g.bracket_basis(a, b)?;
                let mut r = g.d(&ab);
                r.add_scaled(&g.bracket(g.d_basis(a), &basis[b])?, &-Scalar::one());
                r.add_scaled(&g.bracket(&basis[a], g.d_basis(b))?, &-sign(g.degree_of(a)));
                Ok::<_, crate::Error>(r)
            })();
            match lhs {
                Ok(r) if !r.is_zero() => push(&mut rep, AxiomKind::Leibniz, &[a, b], &r),
                Ok(_) => {}
                Err(_) => rep.skipped += 1,
            }
        }
    }

    // Jacobi: [a,[b,c]] − [[a,b],c] − (−1)^{|a||b|}[b,[a,c]]
    let mut table = vec![vec![None; n]; n];
    for a in 0..n {
        for b in 0..n {
            table[a][b] = g.bracket_basis(a, b).ok();
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let r = (|| {
                    let bc = table[b][c].as_ref()?;
                    let ab = table[a][b].as_ref()?;
                    let ac = table[a][c].as_ref()?;
                    let mut r = g.bracket(&basis[a], bc).ok()?;
                    r.add_scaled(&g.bracket(ab, &basis[c]).ok()?, &-Scalar::one());
                    r.add_scaled(
                        &g.bracket(&basis[b], ac).ok()?,
                        &-sign(g.degree_of(a) * g.degree_of(b)),
                    );
                    Some(r)
                })();
                match r {
                    Some(r) if !r.is_zero() => push(&mut rep, AxiomKind::Jacobi, &[a, b, c], &r),
                    Some(_) => {}
                    None => rep.skipped += 1,
                }
            }
        }
    }
    rep
}

/// Checks `f d = d f` on basis vectors and `f[a,b] = [fa,fb]` on basis pairs.
pub fn validate_morphism(f: &DglaMorphism) -> ValidationReport {
    let (s, t) = (&f.source, &f.target);
    let mut rep = ValidationReport::default();
    let n = s.dim();
    let basis: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
    let images: Vec<SparseVec> = basis.iter().map(|e| f.apply(e)).collect();
    let labels = |idx: &[usize]| idx.iter().map(|&i| s.label(i)).collect::<Vec<_>>();
    for a in 0..n {
        let r = t.d(&images[a]).sub(&f.apply(s.d_basis(a)));
        if !r.is_zero() {
            rep.violations.push(Violation {
                kind: AxiomKind::MorphismDifferential,
                basis: labels(&[a]),
                defect: defect(t, &r),
            });
        }
    }
    for a in 0..n {
        for b in a..n {
            let r = (|| {
                let lhs = f.apply(&s.bracket_basis(a, b).ok()?);
                Some(lhs.sub(&t.bracket(&images[a], &images[b]).ok()?))
            })();
            match r {
                Some(r) if !r.is_zero() => rep.violations.push(Violation {
                    kind: AxiomKind::MorphismBracket,
                    basis: labels(&[a, b]),
                    defect: defect(t, &r),
                }),
                Some(_) => {}
                None => rep.skipped += 1,
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::super::*;
    use super::*;

    #[test]
    fn abelian_is_valid() {
        assert!(validate_dgla(&abelian(&[(0, 2), (1, 3)])).is_valid());
    }

    #[test]
    fn gl2_is_valid() {
        assert!(validate_dgla(&gl(2)).is_valid());
    }

    #[test]
    fn graded_end_with_differential_is_valid() {
        // V = K in degree 0 and K in degree 1, δ: V^0 → V^1 the identity
        let delta = SparseMatrix::from_triplets(2, 2, [(1, 0, Scalar::one())]);
        let g = graded_end(&[(0, 1), (1, 1)], Some(&delta));
        let rep = validate_dgla(&g);
        assert!(rep.is_valid(), "{:?}", rep.violations);
        assert!(!g.d(&SparseVec::unit(g.range(0).start)).is_zero());
    }

    #[test]
    fn perturbed_gl2_names_a_jacobi_triple() {
        let g = gl(2);
        let mut table: BTreeMap<(usize, usize), BracketValue> =
            g.bracket_table().map(|(k, v)| (*k, v.clone())).collect();
        // [e0_1, e1_0] gains an extra e0_1 term
        let (i, j) = (g.flat_index("e0_1").unwrap(), g.flat_index("e1_0").unwrap());
        let key = (i.min(j), i.max(j));
        let BracketValue::Value(v) = table[&key].clone() else { unreachable!() };
        let mut v = v;
        v.add_at(i, &Scalar::one());
        table.insert(key, BracketValue::Value(v));
        let p = Dgla::new(g.complex().clone(), table).unwrap();
        let rep = validate_dgla(&p);
        assert!(rep.has(AxiomKind::Jacobi));
        assert_eq!(rep.violations.iter().find(|v| v.kind == AxiomKind::Jacobi).unwrap().basis.len(), 3);
    }

    #[test]
    fn identity_morphism_is_valid() {
        let g = Arc::new(gl(2));
        assert!(validate_morphism(&DglaMorphism::identity(g)).is_valid());
    }
}
