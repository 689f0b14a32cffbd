use std::sync::Arc;

use dgla_core::pipelines::*;
use dgla_core::sheaf::{
    direct_sum, make_line_bundle, make_p1_cover, trivial_sheaf, CoherentSystem, CoverModel, LMatrix, Laurent,
    SheafMorphism, SheafPresentation,
};
use dgla_core::{Error, Scalar};

const D: i64 = 4;

fn p1() -> Arc<CoverModel> {
    Arc::new(make_p1_cover(D).unwrap())
}

fn o(d: i64, c: &Arc<CoverModel>) -> SheafPresentation {
    make_line_bundle(d, c).unwrap()
}

fn sys1(e: &SheafPresentation, chart0: Vec<Vec<Laurent>>) -> CoherentSystem {
    CoherentSystem::from_chart0(e.clone(), chart0).unwrap()
}

fn o_plus_o_minus2(c: &Arc<CoverModel>) -> SheafPresentation {
    direct_sum(&[&o(0, c), &o(-2, c)]).unwrap()
}

#[test]
fn deform_identity_of_structure_sheaf() {
    let c = p1();
    let f = o(0, &c);
    let r = deform_morphism_report(&SheafMorphism::identity(&f), D).unwrap();
    assert_eq!(&r.controlling[..3], &[1, 0, 0]);
    assert!(r.passed);
    assert!(r.coker_sequence.recheck().unwrap());
    assert!(r.cone_sequence.recheck().unwrap());
}

#[test]
fn deform_zero_morphism() {
    let c = p1();
    let f = o(0, &c);
    let r = deform_morphism_report(&SheafMorphism::zero(&f, &f).unwrap(), D).unwrap();
    assert_eq!(r.tangent_dim, 1);
    assert_eq!(r.controlling[0], 2);
    assert!(r.passed);
}

#[test]
fn pair_eu_examples() {
    let c = p1();
    let o1 = o(1, &c);
    let cases = [
        (sys1(&o1, vec![vec![Laurent::one()]]), [1, 1, 0]),
        (full_system(&o1, D).unwrap(), [1, 0, 0]),
        (full_system(&o_plus_o_minus2(&c), D).unwrap(), [5, 0, 0]),
    ];
    for (sys, tot) in cases {
        let r = pair_eu_report(&sys, D).unwrap();
        assert_eq!(&r.controlling[..3], &tot, "{}", r.sheaf);
        assert_eq!(r.tangent_dim, tot[1]);
        assert!(r.passed);
        assert!(r.alpha_matches_connecting);
        assert_eq!(r.h1sc_first_order, r.tangent_dim);
        assert!(r.sequence.recheck().unwrap());
    }
}

#[test]
fn pair_eu_rejects_cover_with_h1_of_o() {
    let c = Arc::new(dgla_core::sheaf::make_finite_cover(3, &[[0, 1], [0, 2], [1, 2]], &[]).unwrap());
    let e = trivial_sheaf(&c, 1, "O").unwrap();
    let sys = full_system(&e, D).unwrap();
    assert!(matches!(pair_eu_report(&sys, D), Err(Error::HypothesisViolated(_))));
    assert_eq!(pair_eu_report(&sys, D).unwrap_err().exit_code(), 2);
}

#[test]
fn m_delta_examples() {
    let c = p1();
    let cases = [
        (sys1(&o(1, &c), vec![vec![Laurent::one()]]), vec![0, 1, 0]),
        (full_system(&o(2, &c), D).unwrap(), vec![0, 0, 0]),
        (
            sys1(&direct_sum(&[&o(-2, &c), &o(0, &c)]).unwrap(), vec![vec![Laurent::zero(), Laurent::one()]]),
            vec![0, 0, 1],
        ),
    ];
    for (sys, want) in cases {
        let r = m_delta_check(&sys, D).unwrap();
        assert_eq!(r.dims, want);
        assert!(r.passed);
    }
}

fn off_diag(c: &Arc<CoverModel>, x: Laurent) -> Vec<LMatrix> {
    let mut a = LMatrix::zeros(2, 2);
    a.set(1, 0, x);
    vec![a; c.nerve(1).len()]
}

fn section_10(c: &Arc<CoverModel>) -> Vec<Vec<Laurent>> {
    vec![vec![Laurent::one(), Laurent::zero()]; c.n_sets]
}

#[test]
fn section_extension_zero_cocycle_lifts_trivially() {
    let c = p1();
    let e = o_plus_o_minus2(&c);
    let r = section_extension(&e, &off_diag(&c, Laurent::zero()), &section_10(&c), D).unwrap();
    assert!(r.extends && r.verified);
    assert!(r.lift.unwrap().iter().flatten().all(Laurent::is_zero));
}

#[test]
fn section_extension_obstructed_by_z_inverse() {
    let c = p1();
    let e = o_plus_o_minus2(&c);
    let r = section_extension(&e, &off_diag(&c, Laurent::z(-1)), &section_10(&c), D).unwrap();
    assert!(!r.extends);
    assert!(r.verified);
    assert!(r.cup_class.iter().any(|x| !x.is_zero()));
}

#[test]
fn section_extension_coboundary_lifts() {
    let c = p1();
    let e = o_plus_o_minus2(&c);
    // z^{-2} and z^{-3} times e_21 are coboundaries in degree-window terms for O(-2) ← O
    for k in [0, -2, -3] {
        let r = section_extension(&e, &off_diag(&c, Laurent::z(k)), &section_10(&c), D).unwrap();
        assert!(r.extends, "z^{k}");
        assert!(r.verified);
    }
}

#[test]
fn defk_examples() {
    let c = p1();
    let r = defk_tangent(&o(1, &c), 1, None, D).unwrap();
    assert_eq!(r.h1_end, 0);
    assert_eq!(r.regime, "cone");
    assert!(r.contains(&[]));

    let e = o_plus_o_minus2(&c);
    let r = defk_tangent(&e, 1, None, D).unwrap();
    assert_eq!(r.tangent_dim, Some(0));
    assert_eq!(r.h1_end, 1);
    assert!(r.contains(&[Scalar::zero()]));
    assert!(!r.contains(&[Scalar::one()]));

    let r = defk_tangent(&e, 1, Some(&NuSpec::Cochain(off_diag(&c, Laurent::z(-1)))), D).unwrap();
    assert!(!r.membership.unwrap().member);

    assert!(matches!(defk_tangent(&e, 2, None, D), Err(Error::KTooLarge { k: 2, h0: 1 })));
}

#[test]
fn smoothness_examples() {
    let c = p1();
    let r = smoothness_flags(&sys1(&o(1, &c), vec![vec![Laurent::one()]]), D).unwrap();
    assert!(r.hom_u_h1_vanishes);
    assert!(r.conclusions.iter().any(|l| l.contains("r_U")));

    let r = smoothness_flags(&full_system(&o(3, &c), D).unwrap(), D).unwrap();
    assert!(r.hom_u_h1_vanishes && r.h2_controlling_vanishes);
    assert_eq!(r.conclusions.len(), 4);

    let r = smoothness_flags(&full_system(&o_plus_o_minus2(&c), D).unwrap(), D).unwrap();
    assert!(!r.hom_u_h1_vanishes);
    assert_eq!(r.forgetful_criterion, "criterion inapplicable");
    assert!(!r.conclusions.iter().any(|l| l.contains("r_U")));
}

#[test]
fn cross_route_agreement() {
    let c = p1();
    let e = o(1, &c);
    for sys in [sys1(&e, vec![vec![Laurent::one()]]), full_system(&e, D).unwrap()] {
        let pair = pair_eu_report(&sys, D).unwrap();
        let morph = deform_morphism_report(&sys.evaluation().unwrap(), D).unwrap();
        assert_eq!(&morph.controlling[..3], &pair.controlling[..3]);
    }
}
