//! Ready-made heralded circuits with per-pattern reports.

pub mod bsg;
pub mod distill;
pub mod fusion;
pub mod ghz;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{DualRailPairing, PureState};
use crate::measurement::{classify_residual, enumerate_outcomes, ClassLabel, Classification, Correction};

/// Tolerance on aggregate-versus-members consistency.
pub const AGGREGATE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct PatternOutcome {
    pub pattern: String,
    pub probability: f64,
    pub class: ClassLabel,
    pub fidelity: f64,
    pub correction: Option<Correction>,
    pub success: bool,
    /// Scheme-specific tag, e.g. the Kraus family of a fusion outcome.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

impl PatternOutcome {
    pub fn new(pattern: String, probability: f64, c: Classification, success: bool) -> Self {
        PatternOutcome {
            pattern,
            probability,
            class: c.label,
            fidelity: c.fidelity,
            correction: c.correction,
            success,
            kind: None,
        }
    }

    pub fn with_kind(mut self, kind: impl Into<String>) -> Self {
        self.kind = Some(kind.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Aggregate {
    pub name: String,
    pub value: f64,
    /// Patterns whose probabilities make up `value`; empty for derived sums.
    pub members: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetCheck {
    pub name: String,
    pub expected: f64,
    pub measured: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl TargetCheck {
    pub fn new(name: impl Into<String>, expected: f64, measured: f64, tolerance: f64) -> Self {
        let deviation = (expected - measured).abs();
        TargetCheck { name: name.into(), expected, measured, deviation, tolerance, pass: deviation <= tolerance }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeReport {
    pub scheme_id: String,
    pub parameters: Vec<(String, String)>,
    pub outcomes: Vec<PatternOutcome>,
    pub aggregates: Vec<Aggregate>,
    pub checks: Vec<TargetCheck>,
    pub notes: Vec<String>,
}

impl SchemeReport {
    pub fn new(id: &str) -> Self {
        SchemeReport {
            scheme_id: id.to_string(),
            parameters: vec![],
            outcomes: vec![],
            aggregates: vec![],
            checks: vec![],
            notes: vec![],
        }
    }

    pub fn aggregate(&self, name: &str) -> Option<f64> {
        self.aggregates.iter().find(|a| a.name == name).map(|a| a.value)
    }

    /// Adds an aggregate summing the outcomes selected by `pick`.
    pub fn sum_where(&mut self, name: &str, pick: impl Fn(&PatternOutcome) -> bool) -> f64 {
        let members: Vec<&PatternOutcome> = self.outcomes.iter().filter(|o| pick(o)).collect();
        let value = members.iter().map(|o| o.probability).sum();
        let names = members.iter().map(|o| o.pattern.clone()).collect();
        self.aggregates.push(Aggregate { name: name.into(), value, members: names });
        value
    }

    pub fn push_value(&mut self, name: &str, value: f64) {
        self.aggregates.push(Aggregate { name: name.into(), value, members: vec![] });
    }

    pub fn check(&mut self, name: &str, expected: f64, measured: f64, tol: f64) {
        self.checks.push(TargetCheck::new(name, expected, measured, tol));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Aggregates never exceed one and match their listed members.
    pub fn aggregates_consistent(&self) -> bool {
        let probs: BTreeMap<&str, f64> =
            self.outcomes.iter().map(|o| (o.pattern.as_str(), o.probability)).collect();
        self.aggregates.iter().all(|a| {
            let within = a.value <= 1.0 + AGGREGATE_TOL;
            let sum_ok = a.members.is_empty()
                || (a.members.iter().map(|m| probs.get(m.as_str()).copied().unwrap_or(f64::NAN)).sum::<f64>()
                    - a.value)
                    .abs()
                    <= AGGREGATE_TOL;
            within && sum_ok
        })
    }

    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }
}

/// Measures `measured` on `s` and classifies every residual.
pub(crate) fn classified_outcomes(
    s: &PureState,
    measured: &[usize],
    pairing: &DualRailPairing,
    success: impl Fn(&Classification) -> bool,
) -> Result<Vec<PatternOutcome>> {
    Ok(enumerate_outcomes(s, measured)?
        .into_iter()
        .map(|o| {
            let c = classify_residual(&o.residual, pairing);
            let ok = success(&c);
            PatternOutcome::new(o.pattern.compact(), o.probability, c, ok)
        })
        .collect())
}

/// Every scheme id accepted by [`run_scheme`].
pub const SCHEME_IDS: &[&str] = &[
    "bsg-standard",
    "bsg-distilled",
    "bsg-boosted-4",
    "bsg-boosted-2",
    "bsg-8photon",
    "bsg-random-input",
    "bsg-h8",
    "distill-w42",
    "ghz",
    "type1-unboosted",
    "type1-boosted",
    "type1-three-way",
    "type2-single",
    "type2-double",
    "dft3-povm",
];

fn param<T: std::str::FromStr>(params: &BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse {key}={v}"))),
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad list entry {x}"))))
        .collect()
}

/// Runs a scheme by id. Parameters: `mask` (bsg-random-input, 4 bits such as
/// `0101`), `modes` (bsg-h8, e.g. `1,4,6,7`), `n` (ghz).
pub fn run_scheme(id: &str, params: &BTreeMap<String, String>) -> Result<SchemeReport> {
    let mut report = match id {
        "bsg-standard" => bsg::bsg_standard()?,
        "bsg-distilled" => bsg::bsg_with_distillation()?,
        "bsg-boosted-4" => bsg::bsg_boosted(4)?,
        "bsg-boosted-2" => bsg::bsg_boosted(2)?,
        "bsg-8photon" => bsg::bsg_8photon()?,
        "bsg-random-input" => {
            let mask: String = param(params, "mask", "0000".to_string())?;
            let bits: Vec<bool> = mask.chars().map(|c| c == '1').collect();
            bsg::bsg_random_input(&bits)?
        }
        "bsg-h8" => {
            let modes: String = param(params, "modes", "1,4,6,7".to_string())?;
            bsg::bsg_h8_random(&parse_list(&modes)?)?
        }
        "distill-w42" => distill::distill_report()?,
        "ghz" => ghz::ghz_generator(param(params, "n", 3usize)?)?,
        "type1-unboosted" => fusion::type1_unboosted_report()?,
        "type1-boosted" => fusion::type1_boosted_report()?,
        "type1-three-way" => fusion::three_way_report()?,
        "type2-single" => fusion::type2_report(fusion::Side::Single)?,
        "type2-double" => fusion::type2_report(fusion::Side::Double)?,
        "dft3-povm" => fusion::dft3_report()?,
        _ => return Err(Error::UnknownScheme(id.to_string())),
    };
    report.parameters = params.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    Ok(report)
}
