use std::collections::BTreeMap;

use dgla_core::dgla::examples::{abelian, gl, graded_end};
use dgla_core::dgla::{validate_dgla, BracketValue, Dgla};
use dgla_core::{Scalar, SparseMatrix, SparseVec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `End(V)` for `V` in degrees 0 and 1 with a random `δ: V^0 → V^1`.
fn random_valid(rng: &mut StdRng) -> Dgla {
    match rng.gen_range(0..3) {
        0 => gl(rng.gen_range(2..=3)),
        1 => abelian(&[(0, rng.gen_range(1..3)), (1, rng.gen_range(1..3))]),
        _ => {
            let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let trip: Vec<(usize, usize, Scalar)> = (0..b)
                .flat_map(|r| (0..a).map(move |c| (a + r, c)))
                .map(|(r, c)| (r, c, Scalar::from_int(rng.gen_range(-2..=2))))
                .collect();
            let delta = SparseMatrix::from_triplets(a + b, a + b, trip);
            graded_end(&[(0, a), (1, b)], Some(&delta))
        }
    }
}

/// Adds 1 to one coefficient of a stored bracket, or, for abelian
/// instances, introduces `[x, x] = x` in degree 0.
fn perturb(g: &Dgla, rng: &mut StdRng) -> Dgla {
    let mut table: BTreeMap<(usize, usize), BracketValue> = g.bracket_table().map(|(k, v)| (*k, v.clone())).collect();
    if table.is_empty() {
        let i = g.range(0).start;
        table.insert((i, i), BracketValue::Value(SparseVec::unit(i)));
    } else {
        let keys: Vec<(usize, usize)> = table.keys().copied().collect();
        let key = keys[rng.gen_range(0..keys.len())];
        let BracketValue::Value(mut v) = table[&key].clone() else { unreachable!() };
        let deg = g.degree_of(key.0) + g.degree_of(key.1);
        let range = g.range(deg);
        v.add_at(rng.gen_range(range), &Scalar::one());
        table.insert(key, BracketValue::Value(v));
    }
    Dgla::new(g.complex().clone(), table).unwrap()
}

/// Dense structure-constant check of every axiom, independent of the library.
fn oracle_valid(g: &Dgla) -> bool {
    let n = g.dim();
    let deg: Vec<i32> = (0..n).map(|i| g.degree_of(i)).collect();
    let sign = |p: i32| if p.rem_euclid(2) == 0 { Scalar::one() } else { -Scalar::one() };
    let dense = |v: &SparseVec| (0..n).map(|k| v.get(k)).collect::<Vec<Scalar>>();
    let zero = vec![Scalar::zero(); n];
    let mut br = vec![vec![zero.clone(); n]; n];
    for (&(i, j), v) in g.bracket_table() {
        let BracketValue::Value(v) = v else { return false };
        br[i][j] = dense(v);
        if i != j {
            br[j][i] = dense(v).iter().map(|x| -(x * &sign(deg[i] * deg[j]))).collect();
        }
    }
    let d: Vec<Vec<Scalar>> = (0..n).map(|i| dense(g.d_basis(i))).collect();
    let lin = |x: &[Scalar], f: &dyn Fn(usize) -> Vec<Scalar>| {
        let mut out = zero.clone();
        for (k, c) in x.iter().enumerate() {
            if !c.is_zero() {
                for (o, y) in out.iter_mut().zip(f(k)) {
                    *o += c * &y;
                }
            }
        }
        out
    };
    let brv = |x: &[Scalar], b: usize| lin(x, &|k| br[k][b].clone());
    let brl = |a: usize, y: &[Scalar]| lin(y, &|k| br[a][k].clone());
    let dv = |x: &[Scalar]| lin(x, &|k| d[k].clone());
    let sub = |x: Vec<Scalar>, y: Vec<Scalar>| x.into_iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>();
    let scale = |x: Vec<Scalar>, c: Scalar| x.into_iter().map(|a| a * &c).collect::<Vec<_>>();
    let is_zero = |x: &[Scalar]| x.iter().all(Scalar::is_zero);
    for i in 0..n {
        if !is_zero(&dv(&d[i])) {
            return false;
        }
        for j in 0..n {
            let v = &br[i][j];
            if v.iter().enumerate().any(|(k, c)| !c.is_zero() && deg[k] != deg[i] + deg[j]) {
                return false;
            }
            if i == j && deg[i].rem_euclid(2) == 0 && !is_zero(v) {
                return false;
            }
            let leib = sub(sub(dv(v), brv(&d[i], j)), scale(brl(i, &d[j]), sign(deg[i])));
            if !is_zero(&leib) {
                return false;
            }
            for k in 0..n {
                let jac = sub(
                    sub(brl(i, &br[j][k]), brv(&br[i][j], k)),
                    scale(brl(j, &br[i][k]), sign(deg[i] * deg[j])),
                );
                if !is_zero(&jac) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn randomized_valid_instances_and_perturbations() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut rejected = 0;
    for _ in 0..100 {
        let g = random_valid(&mut rng);
        let rep = validate_dgla(&g);
        assert!(oracle_valid(&g));
        assert!(rep.is_valid(), "{:?}", rep.violations);
        let p = perturb(&g, &mut rng);
        let rep = validate_dgla(&p);
        assert_eq!(rep.is_valid(), oracle_valid(&p));
        if !rep.is_valid() {
            rejected += 1;
            assert!(!rep.violations[0].basis.is_empty());
        }
    }
    assert!(rejected >= 90, "{rejected}");
}
