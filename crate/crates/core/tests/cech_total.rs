use std::sync::Arc;

use dgla_core::graded::cohomology;
use dgla_core::semicosimplicial::{h1sc_first_order, total_h1};
use dgla_core::sheaf::{
    build_cech_scdgla, cech_cohomology, direct_sum, make_line_bundle, make_p1_cover, CoherentSystem, CoverModel,
    DglaSelector, Laurent, SheafPresentation, Window,
};

const D: i64 = 6;

fn p1() -> Arc<CoverModel> {
    Arc::new(make_p1_cover(D).unwrap())
}

fn sum(c: &Arc<CoverModel>, degrees: &[i64]) -> SheafPresentation {
    let parts: Vec<SheafPresentation> = degrees.iter().map(|&d| make_line_bundle(d, c).unwrap()).collect();
    direct_sum(&parts.iter().collect::<Vec<_>>()).unwrap()
}

/// `(h^0, h^1)` of `⊕ O(d_i)` on `P¹`.
fn oracle(degrees: &[i64]) -> (usize, usize) {
    degrees.iter().fold((0, 0), |(a, b), &d| (a + (d + 1).max(0) as usize, b + (-d - 1).max(0) as usize))
}

/// Degrees of `End(⊕ O(d_i)) = ⊕ O(d_i − d_j)`.
fn end_degrees(degrees: &[i64]) -> Vec<i64> {
    degrees.iter().flat_map(|a| degrees.iter().map(move |b| a - b)).collect()
}

#[test]
fn line_bundles_on_p1() {
    let c = p1();
    for d in -4..=4 {
        let e = make_line_bundle(d, &c).unwrap();
        let h = cech_cohomology(&e, D).unwrap();
        assert_eq!((h.h(0), h.h(1)), oracle(&[d]), "O({d})");
        assert_eq!(h.euler_characteristic, d + 1);
        let sc = build_cech_scdgla(&DglaSelector::Sections(e), Window::symmetric(D)).unwrap();
        let tot = cohomology(&sc.total().unwrap().complex).unwrap();
        assert_eq!((tot.dim(0), tot.dim(1)), oracle(&[d]));
    }
}

#[test]
fn sums_and_endomorphisms() {
    let c = p1();
    for degrees in [vec![0, -2], vec![1, 1], vec![2, -1, 0]] {
        let e = sum(&c, &degrees);
        let h = cech_cohomology(&e, D).unwrap();
        assert_eq!((h.h(0), h.h(1)), oracle(&degrees));
        let sc = build_cech_scdgla(&DglaSelector::End(e), Window::symmetric(D)).unwrap();
        let tot = cohomology(&sc.total().unwrap().complex).unwrap();
        assert_eq!((tot.dim(0), tot.dim(1)), oracle(&end_degrees(&degrees)));
    }
}

#[test]
fn first_order_classes_match_total_h1() {
    let c = p1();
    let o1 = make_line_bundle(1, &c).unwrap();
    let w = Window::symmetric(4);
    let selectors = [
        DglaSelector::End(make_line_bundle(0, &c).unwrap()),
        DglaSelector::End(o1.clone()),
        DglaSelector::End(sum(&c, &[0, -2])),
        DglaSelector::End(sum(&c, &[0, -3])),
        DglaSelector::EndPair(make_line_bundle(-2, &c).unwrap(), o1.clone()),
        DglaSelector::HomQQ(CoherentSystem::from_chart0(o1.clone(), vec![vec![Laurent::one()]]).unwrap()),
    ];
    let expected_h1 = [0, 0, 1, 2, 0, 1];
    for (sel, want) in selectors.iter().zip(expected_h1) {
        let sc = build_cech_scdgla(sel, w).unwrap().sc;
        let h1 = total_h1(&sc).unwrap();
        assert_eq!(h1, want);
        assert_eq!(h1sc_first_order(&sc).unwrap(), h1);
    }
}
