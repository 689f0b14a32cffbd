//! JSON scenario files: parsing, reference resolution and execution.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::report::{dims_line, CheckOutcome, ScenarioReport, Verdict};
use super::{
    deform_morphism_report, defk_tangent, full_system, m_delta_check, pair_eu_report, section_extension,
    smoothness_flags, NuSpec,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sheaf::{
    cech_cohomology, direct_sum, end_sheaf, hom_sheaf, make_finite_cover, make_p1_cover, make_line_bundle,
    trivial_sheaf, CoherentSystem, CoverModel, LMatrix, Laurent, SheafMorphism, SheafPresentation,
};

pub const SCHEMA_VERSION: u32 = 1;

const CHECKS: [&str; 8] = [
    "cohomology",
    "deform_morphism",
    "pair_eu",
    "m_delta",
    "section_extension",
    "defk_tangent",
    "smoothness",
    "cross_route",
];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub cover: CoverSpec,
    pub window: i64,
    #[serde(default)]
    pub sheaves: BTreeMap<String, SheafSpec>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, MorphismSpec>,
    #[serde(default)]
    pub systems: BTreeMap<String, SystemSpec>,
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoverSpec {
    P1,
    Finite {
        sets: usize,
        edges: Vec<[usize; 2]>,
        #[serde(default)]
        triangles: Vec<[usize; 3]>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SheafSpec {
    LineBundle(i64),
    Trivial(usize),
    Sum(Vec<String>),
    Transitions { rank: usize, edges: Vec<EdgeMatrix> },
    End(String),
    Hom([String; 2]),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeMatrix {
    pub edge: [usize; 2],
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MorphismSpec {
    Identity(String),
    Zero([String; 2]),
    Matrices { source: String, target: String, local: Vec<Vec<Vec<String>>> },
    Evaluation(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub sheaf: String,
    /// Sections on `V_0`, extended by the transitions.
    #[serde(default)]
    pub sections: Option<Vec<Vec<String>>>,
    /// `local_sections[u][i]` on `V_i`.
    #[serde(default)]
    pub local_sections: Option<Vec<Vec<Vec<String>>>>,
    /// `U = H^0(E)`.
    #[serde(default)]
    pub full: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NuJson {
    Coords(Vec<String>),
    Cochain(Vec<Vec<Vec<String>>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub check: String,
    #[serde(default)]
    pub sheaf: Option<String>,
    #[serde(default)]
    pub morphism: Option<String>,
    #[serde(default)]
    pub system: Option<String>,
    #[serde(default)]
    pub k: Option<usize>,
    /// One matrix per edge, in nerve order.
    #[serde(default)]
    pub cocycle: Option<Vec<Vec<Vec<String>>>>,
    /// One column per chart.
    #[serde(default)]
    pub section: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub nu: Option<NuJson>,
    /// Expected dimensions (list) or expected boolean outcome.
    #[serde(default)]
    pub expect: Option<Value>,
}

/// Summary of a scenario that parsed and resolved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    pub window: i64,
    pub sheaves: Vec<String>,
    pub morphisms: Vec<String>,
    pub systems: Vec<String>,
    pub checks: Vec<String>,
}

impl Validation {
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("window {}", self.window),
            format!("sheaves: {}", self.sheaves.join(", ")),
            format!("morphisms: {}", self.morphisms.join(", ")),
            format!("systems: {}", self.systems.join(", ")),
            format!("checks: {}", self.checks.join(", ")),
            "ok".to_string(),
        ]
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

fn laurent(s: &str) -> Result<Laurent> {
    s.parse()
}

fn column(v: &[String]) -> Result<Vec<Laurent>> {
    v.iter().map(|s| laurent(s)).collect()
}

fn matrix(rows: &[Vec<String>]) -> Result<LMatrix> {
    LMatrix::from_rows(rows.iter().map(|r| column(r)).collect::<Result<_>>()?)
}

/// Objects of a scenario built on one cover at one window.
struct World {
    cover: Arc<CoverModel>,
    window: i64,
    sheaves: BTreeMap<String, SheafPresentation>,
    morphisms: BTreeMap<String, SheafMorphism>,
    systems: BTreeMap<String, CoherentSystem>,
}

impl World {
    fn build(sc: &Scenario, window: i64) -> Result<World> {
        if window < 1 {
            return Err(Error::BadWindow(window));
        }
        let cover = Arc::new(match &sc.cover {
            CoverSpec::P1 => make_p1_cover(window)?,
            CoverSpec::Finite { sets, edges, triangles } => make_finite_cover(*sets, edges, triangles)?,
        });
        let mut w = World { cover, window, sheaves: BTreeMap::new(), morphisms: BTreeMap::new(), systems: BTreeMap::new() };
        for name in sc.sheaves.keys() {
            w.sheaf(sc, name, &mut Vec::new())?;
        }
        let spread = w.sheaves.values().map(transition_degree).max().unwrap_or(0);
        if window < spread + 2 {
            return Err(Error::InvalidInput(format!(
                "window {window} must be at least the largest transition degree {spread} plus 2"
            )));
        }
        for (name, spec) in &sc.systems {
            let sys = w.system(name, spec)?;
            w.systems.insert(name.clone(), sys);
        }
        for (name, spec) in &sc.morphisms {
            let m = w.morphism(spec)?;
            w.morphisms.insert(name.clone(), m);
        }
        Ok(w)
    }

    fn sheaf(&mut self, sc: &Scenario, name: &str, stack: &mut Vec<String>) -> Result<SheafPresentation> {
        if let Some(s) = self.sheaves.get(name) {
            return Ok(s.clone());
        }
        if stack.iter().any(|n| n == name) {
            return Err(Error::InvalidInput(format!("sheaf `{name}` is defined in terms of itself")));
        }
        let spec = sc.sheaves.get(name).ok_or_else(|| Error::InvalidInput(format!("unknown sheaf `{name}`")))?;
        stack.push(name.to_string());
        let mut built = match spec {
            SheafSpec::LineBundle(d) => make_line_bundle(*d, &self.cover)?,
            SheafSpec::Trivial(r) => trivial_sheaf(&self.cover, *r, name)?,
            SheafSpec::Sum(parts) => {
                let parts = parts.iter().map(|p| self.sheaf(sc, p, stack)).collect::<Result<Vec<_>>>()?;
                direct_sum(&parts.iter().collect::<Vec<_>>())?
            }
            SheafSpec::Transitions { rank, edges } => {
                let mut given = BTreeMap::new();
                for e in edges {
                    let [i, j] = e.edge;
                    let (key, m) = if i < j { ((i, j), matrix(&e.matrix)?) } else { ((j, i), matrix(&e.matrix)?.inverse()?) };
                    if given.insert(key, m).is_some() {
                        return Err(Error::InvalidInput(format!("{name}: edge {i}{j} given twice")));
                    }
                }
                SheafPresentation::new(self.cover.clone(), name, *rank, given)?
            }
            SheafSpec::End(e) => end_sheaf(&self.sheaf(sc, e, stack)?)?,
            SheafSpec::Hom([f, g]) => hom_sheaf(&self.sheaf(sc, f, stack)?, &self.sheaf(sc, g, stack)?)?,
        };
        stack.pop();
        if matches!(spec, SheafSpec::Sum(_) | SheafSpec::Hom(_) | SheafSpec::End(_)) {
            built.name = format!("{name} = {}", built.name);
        }
        self.sheaves.insert(name.to_string(), built.clone());
        Ok(built)
    }

    fn get_sheaf(&self, name: &str) -> Result<&SheafPresentation> {
        self.sheaves.get(name).ok_or_else(|| Error::InvalidInput(format!("unknown sheaf `{name}`")))
    }

    fn get_system(&self, name: &str) -> Result<&CoherentSystem> {
        self.systems.get(name).ok_or_else(|| Error::InvalidInput(format!("unknown system `{name}`")))
    }

    fn system(&self, name: &str, spec: &SystemSpec) -> Result<CoherentSystem> {
        let e = self.get_sheaf(&spec.sheaf)?.clone();
        match (spec.full, &spec.sections, &spec.local_sections) {
            (true, None, None) => full_system(&e, self.window),
            (false, Some(s0), None) => CoherentSystem::from_chart0(e, s0.iter().map(|v| column(v)).collect::<Result<_>>()?),
            (false, None, Some(ls)) => CoherentSystem::new(
                e,
                ls.iter().map(|s| s.iter().map(|v| column(v)).collect::<Result<_>>()).collect::<Result<_>>()?,
            ),
            _ => Err(Error::InvalidInput(format!(
                "system `{name}`: give exactly one of `sections`, `local_sections`, `full`"
            ))),
        }
    }

    fn morphism(&self, spec: &MorphismSpec) -> Result<SheafMorphism> {
        Ok(match spec {
            MorphismSpec::Identity(f) => SheafMorphism::identity(self.get_sheaf(f)?),
            MorphismSpec::Zero([f, g]) => SheafMorphism::zero(self.get_sheaf(f)?, self.get_sheaf(g)?)?,
            MorphismSpec::Matrices { source, target, local } => SheafMorphism::new(
                self.get_sheaf(source)?.clone(),
                self.get_sheaf(target)?.clone(),
                local.iter().map(|m| matrix(m)).collect::<Result<_>>()?,
            )?,
            MorphismSpec::Evaluation(sys) => self.get_system(sys)?.evaluation()?,
        })
    }
}

fn transition_degree(e: &SheafPresentation) -> i64 {
    e.cover
        .edges()
        .into_iter()
        .flat_map(|(i, j)| {
            e.transition(i, j)
                .entries()
                .flat_map(|(_, _, x)| [x.min_exp(), x.max_exp()])
                .flatten()
                .map(i64::abs)
                .collect::<Vec<_>>()
        })
        .max()
        .unwrap_or(0)
}

fn field<'a, T>(v: &'a Option<T>, check: &CheckSpec, what: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::InvalidInput(format!("check `{}` needs `{what}`", check.check)))
}

fn check_names(sc: &Scenario) -> Result<()> {
    for c in &sc.checks {
        if !CHECKS.contains(&c.check.as_str()) {
            return Err(Error::UnknownCheck(c.check.clone()));
        }
    }
    Ok(())
}

/// Parses and resolves every reference without running any check.
pub fn validate_scenario(text: &str) -> Result<Validation> {
    let sc = parse_scenario(text)?;
    check_names(&sc)?;
    let w = World::build(&sc, sc.window)?;
    for c in &sc.checks {
        subject(&w, c)?;
    }
    Ok(Validation {
        window: sc.window,
        sheaves: w.sheaves.keys().cloned().collect(),
        morphisms: w.morphisms.keys().cloned().collect(),
        systems: w.systems.keys().cloned().collect(),
        checks: sc.checks.iter().map(|c| c.check.clone()).collect(),
    })
}

/// The object a check runs on, resolved.
fn subject(w: &World, c: &CheckSpec) -> Result<String> {
    match c.check.as_str() {
        "cohomology" | "section_extension" | "defk_tangent" => {
            let s = field(&c.sheaf, c, "sheaf")?;
            w.get_sheaf(s)?;
            if c.check == "section_extension" {
                field(&c.cocycle, c, "cocycle")?;
                field(&c.section, c, "section")?;
            }
            if c.check == "defk_tangent" {
                field(&c.k, c, "k")?;
            }
            Ok(s.clone())
        }
        "deform_morphism" => {
            let m = field(&c.morphism, c, "morphism")?;
            w.morphisms.get(m).ok_or_else(|| Error::InvalidInput(format!("unknown morphism `{m}`")))?;
            Ok(m.clone())
        }
        "pair_eu" | "m_delta" | "smoothness" | "cross_route" => {
            let s = field(&c.system, c, "system")?;
            w.get_system(s)?;
            Ok(s.clone())
        }
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

fn expect_dims(c: &CheckSpec, dims: &[usize]) -> Result<bool> {
    match &c.expect {
        None => Ok(true),
        Some(v) => {
            let want: Vec<usize> = serde_json::from_value(v.clone())
                .map_err(|_| Error::InvalidInput(format!("check `{}`: `expect` must be a list of dimensions", c.check)))?;
            Ok(dims.len() >= want.len() && dims[..want.len()] == want[..])
        }
    }
}

fn expect_bool(c: &CheckSpec, got: bool) -> Result<bool> {
    match &c.expect {
        None => Ok(true),
        Some(Value::Bool(b)) => Ok(*b == got),
        Some(_) => Err(Error::InvalidInput(format!("check `{}`: `expect` must be true or false", c.check))),
    }
}

fn to_value<T: Serialize>(r: &T) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn run_check(w: &World, index: usize, c: &CheckSpec) -> Result<CheckOutcome> {
    let d = w.window;
    let subject = subject(w, c)?;
    let (ok, result, text) = match c.check.as_str() {
        "cohomology" => {
            let r = cech_cohomology(w.get_sheaf(&subject)?, d)?;
            let text = vec![dims_line(&r.sheaf, &r.dims), format!("  euler characteristic {}", r.euler_characteristic)];
            (r.stable && expect_dims(c, &r.dims)?, to_value(&r), text)
        }
        "deform_morphism" => {
            let r = deform_morphism_report(&w.morphisms[&subject], d)?;
            (r.passed && expect_dims(c, &r.controlling)?, to_value(&r), r.lines())
        }
        "pair_eu" => {
            let r = pair_eu_report(w.get_system(&subject)?, d)?;
            (r.passed && expect_dims(c, &r.controlling)?, to_value(&r), r.lines())
        }
        "m_delta" => {
            let r = m_delta_check(w.get_system(&subject)?, d)?;
            (r.passed && expect_dims(c, &r.dims)?, to_value(&r), r.lines())
        }
        "smoothness" => {
            let r = smoothness_flags(w.get_system(&subject)?, d)?;
            (true, to_value(&r), r.lines())
        }
        "section_extension" => {
            let e = w.get_sheaf(&subject)?;
            let a = field(&c.cocycle, c, "cocycle")?.iter().map(|m| matrix(m)).collect::<Result<Vec<_>>>()?;
            let s = field(&c.section, c, "section")?.iter().map(|v| column(v)).collect::<Result<Vec<_>>>()?;
            let r = section_extension(e, &a, &s, d)?;
            (r.verified && expect_bool(c, r.extends)?, to_value(&r), r.lines())
        }
        "defk_tangent" => {
            let e = w.get_sheaf(&subject)?;
            let nu = match &c.nu {
                None => None,
                Some(NuJson::Coords(v)) => {
                    Some(NuSpec::Coords(v.iter()
                        .map(|s| s.parse::<Scalar>().map_err(|e| Error::InvalidInput(format!("nu: {e}"))))
                        .collect::<Result<_>>()?))
                }
                Some(NuJson::Cochain(ms)) => Some(NuSpec::Cochain(ms.iter().map(|m| matrix(m)).collect::<Result<_>>()?)),
            };
            let r = defk_tangent(e, *field(&c.k, c, "k")?, nu.as_ref(), d)?;
            let ok = match &r.membership {
                Some(m) => expect_bool(c, m.member)?,
                None => expect_dims(c, &r.tangent_dim.into_iter().collect::<Vec<_>>())?,
            };
            (ok, to_value(&r), r.lines())
        }
        "cross_route" => {
            let sys = w.get_system(&subject)?;
            let pair = pair_eu_report(sys, d)?;
            let morph = deform_morphism_report(&sys.evaluation()?, d)?;
            let agree = pair.controlling[..3] == morph.controlling[..3];
            let text = vec![
                dims_line("pair (E,U)", &pair.controlling[..3]),
                dims_line("morphism U x O -> E", &morph.controlling[..3]),
                format!("  agree {agree}"),
            ];
            let result = json!({
                "pair_eu": &pair.controlling[..3],
                "deform_morphism": &morph.controlling[..3],
                "agree": agree,
            });
            (agree && pair.passed && morph.passed, result, text)
        }
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    Ok(CheckOutcome { index, check: c.check.clone(), subject, verdict: Verdict::from_bool(ok), result, text })
}

/// Runs every check in order; the first error aborts the run.
pub fn run_scenario(text: &str, name: &str, window: Option<i64>) -> Result<ScenarioReport> {
    let sc = parse_scenario(text)?;
    check_names(&sc)?;
    let window = window.unwrap_or(sc.window);
    let w = World::build(&sc, window)?;
    let checks = sc.checks.iter().enumerate().map(|(i, c)| run_check(&w, i, c)).collect::<Result<Vec<_>>>()?;
    let verdict = Verdict::from_bool(checks.iter().all(|c| c.verdict.passed()));
    Ok(ScenarioReport { schema: SCHEMA_VERSION, scenario: name.to_string(), window, verdict, checks })
}

pub fn run_scenario_file(path: &Path, window: Option<i64>) -> Result<ScenarioReport> {
    let text = read(path)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    run_scenario(&text, &name, window)
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}
