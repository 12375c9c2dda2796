//! Temporal bleeding: weak couplers tap the four signal modes stage by stage,
//! the tapped light goes through a Hadamard and is detected, and the protocol
//! stops once two photons in total have been seen.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{DualRailPairing, Occupation, PureState};
use crate::interferometer::{Circuit, TransferMatrix};
use crate::measurement::{classify_residual, enumerate_outcomes, ClassLabel, ConditionalOutcome};
use crate::schemes::distill::distill_w42;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BleedSchedule {
    reflectivities: Vec<f64>,
}

impl BleedSchedule {
    pub fn new(reflectivities: Vec<f64>) -> Result<Self> {
        if reflectivities.is_empty() {
            return Err(Error::InvalidParameter("schedule needs at least one stage".into()));
        }
        if let Some(r) = reflectivities.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
            return Err(Error::InvalidParameter(format!("reflectivity {r} outside (0,1]")));
        }
        Ok(BleedSchedule { reflectivities })
    }

    /// `r_k = 1/(S-k+2)` for `k = 1..S`.
    pub fn equal_spread(stages: usize) -> Result<Self> {
        if stages < 1 {
            return Err(Error::InvalidParameter("stage count must be at least 1".into()));
        }
        Self::new((1..=stages).map(|k| 1.0 / (stages - k + 2) as f64).collect())
    }

    /// `r_k = 1/S` for every stage.
    pub fn constant(stages: usize) -> Result<Self> {
        if stages < 1 {
            return Err(Error::InvalidParameter("stage count must be at least 1".into()));
        }
        Self::new(vec![1.0 / stages as f64; stages])
    }

    pub fn stages(&self) -> usize {
        self.reflectivities.len()
    }

    pub fn reflectivities(&self) -> &[f64] {
        &self.reflectivities
    }

    /// Probability that a photon is tapped exactly at stage `k`.
    pub fn effective_reflectivities(&self) -> Vec<f64> {
        let mut t = 1.0;
        self.reflectivities
            .iter()
            .map(|r| {
                let e = r * t;
                t *= 1.0 - r;
                e
            })
            .collect()
    }

    /// Probability that a photon survives stages `1..=k`.
    pub fn survivals(&self) -> Vec<f64> {
        let mut t = 1.0;
        self.reflectivities
            .iter()
            .map(|r| {
                t *= 1.0 - r;
                t
            })
            .collect()
    }

    /// Concatenation of two schedules.
    pub fn then(&self, other: &BleedSchedule) -> BleedSchedule {
        let mut r = self.reflectivities.clone();
        r.extend_from_slice(&other.reflectivities);
        BleedSchedule { reflectivities: r }
    }
}

/// Probability that exactly two of the four photons are tapped, summed over
/// both photons at one stage and one photon at each of two stages. Linear in
/// the number of stages.
pub fn bleed_closed_form(s: &BleedSchedule) -> f64 {
    let re = s.effective_reflectivities();
    let te = s.survivals();
    let mut prefix = 0.0;
    let mut total = 0.0;
    for k in 0..s.stages() {
        let t2 = te[k] * te[k];
        total += 6.0 * re[k] * re[k] * t2 + 12.0 * prefix * re[k] * t2;
        prefix += re[k];
    }
    total
}

/// `S(1+S+S^2)/(1+S)^3`.
pub fn bleed_closed_form_equal(stages: usize) -> f64 {
    let s = stages as f64;
    s * (1.0 + s + s * s) / (1.0 + s).powi(3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceStatus {
    Success,
    Failure,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    /// One-based stage index.
    pub stage: usize,
    pub pattern: String,
    /// Conditional probability of this pattern given the branch so far.
    pub probability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolTrace {
    pub steps: Vec<TraceStep>,
    pub probability: f64,
    pub status: TraceStatus,
    pub detected: usize,
    pub class: Option<ClassLabel>,
    #[serde(skip)]
    pub state: Option<PureState>,
}

impl ProtocolTrace {
    pub fn key(&self) -> String {
        self.steps.iter().map(|s| format!("{}:{}", s.stage, s.pattern)).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BleedOutcome {
    pub p_two_photon: f64,
    pub p_bell_no_distill: f64,
    pub p_w: f64,
    pub p_bell_with_distill: f64,
    pub total_probability: f64,
    pub traces: Vec<ProtocolTrace>,
}

/// One tapping stage on a four-mode signal state.
pub fn temporal_stage(s: &PureState, r: f64) -> Result<Vec<ConditionalOutcome>> {
    let mut c = Circuit::new(8);
    for i in 0..4 {
        c = c.coupler(r, i, 4 + i)?;
    }
    let c = c.multiport(TransferMatrix::hadamard(4)?, &[4, 5, 6, 7])?;
    enumerate_outcomes(&c.apply(&s.with_vacuum(4))?, &[4, 5, 6, 7])
}

pub(crate) struct Branch {
    pub state: PureState,
    pub detected: usize,
    pub steps: Vec<TraceStep>,
    pub probability: f64,
}

/// Stops a branch at two photons; returns `None` while still bleeding.
pub(crate) fn settle(b: &Branch, last_stage: bool) -> Option<ProtocolTrace> {
    let done = |status, class, state| ProtocolTrace {
        steps: b.steps.clone(),
        probability: b.probability,
        status,
        detected: b.detected,
        class,
        state,
    };
    if b.detected == 2 {
        let c = classify_residual(&b.state, &DualRailPairing::consecutive(2));
        return Some(done(TraceStatus::Success, Some(c.label), Some(b.state.clone())));
    }
    if b.detected > 2 || last_stage {
        return Some(done(TraceStatus::Failure, None, None));
    }
    None
}

pub(crate) fn summarize(traces: Vec<ProtocolTrace>) -> Result<BleedOutcome> {
    let mut out = BleedOutcome {
        p_two_photon: 0.0,
        p_bell_no_distill: 0.0,
        p_w: 0.0,
        p_bell_with_distill: 0.0,
        total_probability: 0.0,
        traces: vec![],
    };
    for t in &traces {
        out.total_probability += t.probability;
        if t.status != TraceStatus::Success {
            continue;
        }
        out.p_two_photon += t.probability;
        match t.class {
            Some(c) if c.is_bell() => {
                out.p_bell_no_distill += t.probability;
                out.p_bell_with_distill += t.probability;
            }
            Some(ClassLabel::WType) => {
                out.p_w += t.probability;
                let state = t.state.as_ref().ok_or_else(|| Error::Precondition("missing state".into()))?;
                out.p_bell_with_distill += t.probability * distill_w42(state)?.probability;
            }
            _ => {}
        }
    }
    out.traces = traces;
    Ok(out)
}

/// Exact outcome tree of the bleeding protocol on `|1111>`.
pub fn bleed_two_photons(schedule: &BleedSchedule) -> Result<BleedOutcome> {
    let start = PureState::basis(Occupation::new(vec![1; 4]));
    let mut frontier = vec![Branch { state: start, detected: 0, steps: vec![], probability: 1.0 }];
    let mut traces = Vec::new();
    let s = schedule.stages();
    for (k, &r) in schedule.reflectivities().iter().enumerate() {
        let mut next = Vec::new();
        for b in frontier {
            for o in temporal_stage(&b.state, r)? {
                let mut steps = b.steps.clone();
                steps.push(TraceStep { stage: k + 1, pattern: o.pattern.compact(), probability: o.probability });
                let nb = Branch {
                    state: o.residual,
                    detected: b.detected + o.pattern.total(),
                    steps,
                    probability: b.probability * o.probability,
                };
                match settle(&nb, k + 1 == s) {
                    Some(t) => traces.push(t),
                    None => next.push(nb),
                }
            }
        }
        frontier = next;
    }
    summarize(traces)
}
