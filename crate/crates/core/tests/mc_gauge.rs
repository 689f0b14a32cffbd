use std::sync::Arc;

use dgla_core::artin::{bch, gauge, make_artin, mc_residual, ArtinAlgebra, ArtinKind, NilpotentElement};
use dgla_core::dgla::examples::graded_end;
use dgla_core::dgla::Dgla;
use dgla_core::linalg::kernel_basis;
use dgla_core::{Scalar, SparseMatrix, SparseVec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Square matrices over `K[t]/(t^N)`; `e[r][c][k]` is the `t^k` coefficient.
#[derive(Clone, PartialEq, Debug)]
struct AMat {
    n: usize,
    order: usize,
    e: Vec<Vec<Vec<Scalar>>>,
}

impl AMat {
    fn zero(n: usize, order: usize) -> Self {
        AMat { n, order, e: vec![vec![vec![Scalar::zero(); order]; n]; n] }
    }

    fn identity(n: usize, order: usize) -> Self {
        let mut m = Self::zero(n, order);
        for i in 0..n {
            m.e[i][i][0] = Scalar::one();
        }
        m
    }

    fn add(&self, o: &AMat) -> AMat {
        let mut m = self.clone();
        for r in 0..self.n {
            for c in 0..self.n {
                for k in 0..self.order {
                    m.e[r][c][k] += &o.e[r][c][k];
                }
            }
        }
        m
    }

    fn scale(&self, s: &Scalar) -> AMat {
        let mut m = self.clone();
        m.e.iter_mut().flatten().flatten().for_each(|x| *x = &*x * s);
        m
    }

    fn mul(&self, o: &AMat) -> AMat {
        let mut m = Self::zero(self.n, self.order);
        for r in 0..self.n {
            for c in 0..self.n {
                for j in 0..self.n {
                    for a in 0..self.order {
                        if self.e[r][j][a].is_zero() {
                            continue;
                        }
                        for b in 0..self.order - a {
                            let p = &self.e[r][j][a] * &o.e[j][c][b];
                            m.e[r][c][a + b] += &p;
                        }
                    }
                }
            }
        }
        m
    }

    fn is_zero(&self) -> bool {
        self.e.iter().flatten().flatten().all(Scalar::is_zero)
    }

    fn exp(&self) -> AMat {
        let mut out = Self::identity(self.n, self.order);
        let mut term = out.clone();
        for k in 1..=self.order {
            term = term.mul(self).scale(&Scalar::new(1, k as i64));
            out = out.add(&term);
        }
        out
    }
}

struct Setup {
    l: Arc<Dgla>,
    a: Arc<ArtinAlgebra>,
    n: usize,
    order: usize,
    delta: AMat,
}

/// `(i, j)` of the basis element `E_ij` at a flat index.
fn entry(l: &Dgla, k: usize) -> (usize, usize) {
    let label = l.label(k);
    let (_, name) = label.split_once(':').unwrap();
    let (i, j) = name.trim_start_matches('e').split_once('_').unwrap();
    (i.parse().unwrap(), j.parse().unwrap())
}

fn to_amat(s: &Setup, x: &NilpotentElement) -> AMat {
    let mut m = AMat::zero(s.n, s.order);
    for mono in 0..s.a.dim_m() {
        let w = s.a.weights[mono] as usize;
        for (k, c) in x.coeff(mono).iter() {
            let (i, j) = entry(&s.l, k);
            m.e[i][j][w] += c;
        }
    }
    m
}

fn setup(rng: &mut StdRng) -> Setup {
    let dims = [rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(0..=1)];
    let n: usize = dims.iter().sum();
    let order = rng.gen_range(2..=4);
    let a = make_artin(ArtinKind::TruncatedPoly, order as u32).unwrap();
    // δ on one of the two steps, so δ² = 0
    let mut delta = AMat::zero(n, order);
    let step = rng.gen_range(0..2);
    let (src, tgt) = if step == 0 { (0..dims[0], dims[0]..dims[0] + dims[1]) } else { (dims[0]..dims[0] + dims[1], dims[0] + dims[1]..n) };
    let mut trip = Vec::new();
    for r in tgt {
        for c in src.clone() {
            let v = Scalar::from_int(rng.gen_range(-1..=1));
            delta.e[r][c][0] = v.clone();
            trip.push((r, c, v));
        }
    }
    let v_dims: Vec<(i32, usize)> = dims.iter().enumerate().filter(|(_, &d)| d > 0).map(|(p, &d)| (p as i32, d)).collect();
    let l = Arc::new(graded_end(&v_dims, Some(&SparseMatrix::from_triplets(n, n, trip))));
    Setup { l, a, n, order, delta }
}

fn random_element(s: &Setup, deg: i32, rng: &mut StdRng) -> NilpotentElement {
    let coeffs = (0..s.a.dim_m())
        .map(|_| {
            let mut v = SparseVec::new();
            for k in s.l.range(deg) {
                if rng.gen_bool(0.5) {
                    v.set(k, Scalar::new(rng.gen_range(-3..=3), rng.gen_range(1..=2)));
                }
            }
            v
        })
        .collect();
    NilpotentElement::new(s.l.clone(), s.a.clone(), deg, coeffs).unwrap()
}

/// A cocycle of top weight, moved by a random gauge.
fn random_mc(s: &Setup, rng: &mut StdRng) -> NilpotentElement {
    let top = s.a.of_weight(s.a.max_weight());
    let ker = kernel_basis(&s.l.complex().d(1));
    let mut coeffs = vec![SparseVec::new(); s.a.dim_m()];
    for &mono in &top {
        for k in &ker {
            coeffs[mono].add_scaled(&s.l.embed(1, k), &Scalar::from_int(rng.gen_range(-2..=2)));
        }
    }
    let x0 = NilpotentElement::new(s.l.clone(), s.a.clone(), 1, coeffs).unwrap();
    gauge(&random_element(s, 0, rng), &x0).unwrap()
}

#[test]
fn gauge_preserves_mc_and_composes_via_bch() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let s = setup(&mut rng);
        let x = random_mc(&s, &mut rng);
        let dx = s.delta.add(&to_amat(&s, &x));
        assert!(mc_residual(&x).unwrap().is_zero());
        assert!(dx.mul(&dx).is_zero(), "oracle: (δ + x)² = 0");

        let (a, b, c) = (random_element(&s, 0, &mut rng), random_element(&s, 0, &mut rng), random_element(&s, 0, &mut rng));
        let y = gauge(&a, &x).unwrap();
        assert!(mc_residual(&y).unwrap().is_zero());
        // δ + e^a·x = e^a (δ + x) e^{−a}
        let ea = to_amat(&s, &a).exp();
        let conj = ea.mul(&dx).mul(&to_amat(&s, &a).scale(&-Scalar::one()).exp());
        assert_eq!(s.delta.add(&to_amat(&s, &y)), conj);

        let ab = bch(&a, &b).unwrap();
        assert_eq!(gauge(&a, &gauge(&b, &x).unwrap()).unwrap(), gauge(&ab, &x).unwrap());
        assert_eq!(to_amat(&s, &ab).exp(), ea.mul(&to_amat(&s, &b).exp()));
        assert_eq!(bch(&ab, &c).unwrap(), bch(&a, &bch(&b, &c).unwrap()).unwrap());
    }
}
