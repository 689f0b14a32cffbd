//! Built-in invariant suite behind `dgla-deform selftest`.

use std::sync::Arc;

use serde::Serialize;

use super::{
    deform_morphism_report, defk_tangent, full_system, m_delta_check, pair_eu_report, section_extension,
};
use crate::error::Result;
use crate::sheaf::{
    cech_cohomology, direct_sum, make_line_bundle, make_p1_cover, CoherentSystem, CoverModel, LMatrix, Laurent,
    SheafMorphism, SheafPresentation,
};

const D: i64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn line(name: &str, r: Result<(bool, String)>) -> SelftestLine {
    match r {
        Ok((passed, detail)) => SelftestLine { name: name.to_string(), passed, detail },
        Err(e) => SelftestLine { name: name.to_string(), passed: false, detail: format!("error: {e}") },
    }
}

fn o(d: i64, c: &Arc<CoverModel>) -> Result<SheafPresentation> {
    make_line_bundle(d, c)
}

fn line_bundles(c: &Arc<CoverModel>) -> Result<(bool, String)> {
    let mut ok = true;
    for d in -3..=3 {
        let h = cech_cohomology(&o(d, c)?, D)?;
        ok &= h.h(0) == (d + 1).max(0) as usize && h.h(1) == (-d - 1).max(0) as usize;
        ok &= h.euler_characteristic == d + 1;
    }
    Ok((ok, "h(O(d)) for d in -3..=3".into()))
}

fn pair_sequences(c: &Arc<CoverModel>) -> Result<(bool, String)> {
    let o1 = o(1, c)?;
    let e = direct_sum(&[&o(0, c)?, &o(-2, c)?])?;
    let systems = [
        CoherentSystem::from_chart0(o1.clone(), vec![vec![Laurent::one()]])?,
        full_system(&o1, D)?,
        full_system(&e, D)?,
    ];
    let mut tangents = Vec::new();
    let mut ok = true;
    for sys in &systems {
        let r = pair_eu_report(sys, D)?;
        ok &= r.passed && r.sequence.recheck()? && r.h1sc_first_order == r.tangent_dim;
        tangents.push(r.tangent_dim);
    }
    ok &= tangents == [1, 0, 0];
    Ok((ok, format!("tangent dimensions {tangents:?}")))
}

fn m_delta(c: &Arc<CoverModel>) -> Result<(bool, String)> {
    let e = direct_sum(&[&o(-2, c)?, &o(0, c)?])?;
    let systems = [
        CoherentSystem::from_chart0(o(1, c)?, vec![vec![Laurent::one()]])?,
        full_system(&o(2, c)?, D)?,
        CoherentSystem::from_chart0(e, vec![vec![Laurent::zero(), Laurent::one()]])?,
    ];
    let mut ok = true;
    let mut all = Vec::new();
    for sys in &systems {
        let r = m_delta_check(sys, D)?;
        ok &= r.passed;
        all.push(r.dims);
    }
    Ok((ok, format!("{all:?}")))
}

fn cup_criterion(c: &Arc<CoverModel>) -> Result<(bool, String)> {
    let e = direct_sum(&[&o(0, c)?, &o(-2, c)?])?;
    let s = vec![vec![Laurent::one(), Laurent::zero()]; c.n_sets];
    let mut ok = true;
    for k in -3..=0 {
        let mut a = LMatrix::zeros(2, 2);
        a.set(1, 0, Laurent::z(k));
        let r = section_extension(&e, &vec![a; c.nerve(1).len()], &s, D)?;
        ok &= r.verified && r.extends == (k != -1);
    }
    Ok((ok, "a = z^k e_21, k in -3..=0".into()))
}

fn defk(c: &Arc<CoverModel>) -> Result<(bool, String)> {
    let e = direct_sum(&[&o(0, c)?, &o(-2, c)?])?;
    let r = defk_tangent(&e, 1, None, D)?;
    let cone = defk_tangent(&o(1, c)?, 1, None, D)?;
    Ok((r.tangent_dim == Some(0) && cone.h1_end == 0, "O+O(-2) k=1, O(1) k=1".into()))
}

fn cross_route(c: &Arc<CoverModel>) -> Result<(bool, String)> {
    let sys = CoherentSystem::from_chart0(o(1, c)?, vec![vec![Laurent::one()]])?;
    let pair = pair_eu_report(&sys, D)?;
    let morph = deform_morphism_report(&sys.evaluation()?, D)?;
    let id = deform_morphism_report(&SheafMorphism::identity(&o(0, c)?), D)?;
    let ok = pair.controlling[..3] == morph.controlling[..3] && id.controlling[..3] == [1, 0, 0];
    Ok((ok, format!("pair {:?} morphism {:?}", &pair.controlling[..3], &morph.controlling[..3])))
}

/// Runs each suite; failures and errors are reported, never raised.
pub fn selftest() -> Vec<SelftestLine> {
    let c = match make_p1_cover(D) {
        Ok(c) => Arc::new(c),
        Err(e) => return vec![line("cover", Err(e))],
    };
    type Suite = fn(&Arc<CoverModel>) -> Result<(bool, String)>;
    let suites: [(&str, Suite); 6] = [
        ("line bundle cohomology", line_bundles),
        ("pair (E,U) sequences", pair_sequences),
        ("m_delta dimensions", m_delta),
        ("cup criterion", cup_criterion),
        ("Def^k tangent", defk),
        ("cross-route agreement", cross_route),
    ];
    suites.iter().map(|(name, f)| line(name, f(&c))).collect()
}
