//! Spatial bleeding: each signal mode is spread over `S+1` modes by a DFT
//! and the stages are read out side by side. On reaching two photons the
//! remaining copies of each mode are folded back onto the signal mode with a
//! smaller DFT.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::adaptive::bleed::{
    bleed_two_photons, settle, summarize, BleedOutcome, BleedSchedule, Branch, TraceStep,
};
use crate::error::{Error, Result};
use crate::fock::{fidelity, Occupation, PureState};
use crate::interferometer::{Circuit, TransferMatrix};
use crate::measurement::enumerate_outcomes;

#[derive(Clone, Debug, Serialize)]
pub struct SpatialOutcome {
    pub outcome: BleedOutcome,
    /// Largest weight left outside the signal modes after folding back.
    pub max_leak: f64,
}

/// Modes `[i, 4+i, 8+i, ...]` of a layout with `copies` copies per signal mode.
fn group(i: usize, copies: usize) -> Vec<usize> {
    (0..copies).map(|c| 4 * c + i).collect()
}

fn despread(s: &PureState, copies: usize) -> Result<PureState> {
    if copies == 1 {
        return Ok(s.clone());
    }
    let f = TransferMatrix::dft(copies)?;
    let mut c = Circuit::new(4 * copies);
    for i in 0..4 {
        c = c.multiport(f.clone(), &group(i, copies))?;
    }
    c.apply(s)
}

pub fn spatial_bleeding(stages: usize) -> Result<SpatialOutcome> {
    if !(1..=6).contains(&stages) {
        return Err(Error::InvalidParameter(format!("spatial bleeding supports 1..=6 stages, got {stages}")));
    }
    let copies = stages + 1;
    let f = TransferMatrix::dft(copies)?;
    let mut spread = Circuit::new(4 * copies);
    for i in 0..4 {
        spread = spread.multiport(f.clone(), &group(i, copies))?;
    }
    let mut occ = vec![0u8; 4 * copies];
    occ[..4].fill(1);
    let start = spread.apply(&PureState::basis(Occupation::new(occ)))?;
    let mut frontier = vec![Branch { state: start, detected: 0, steps: vec![], probability: 1.0 }];
    let mut traces = Vec::new();
    let mut max_leak: f64 = 0.0;
    let h4 = TransferMatrix::hadamard(4)?;
    for k in 1..=stages {
        let mut next = Vec::new();
        for b in frontier {
            // The next stage always sits on modes 4..8 once earlier ones are gone.
            let remaining = b.state.modes() / 4;
            let s = Circuit::new(4 * remaining).multiport(h4.clone(), &[4, 5, 6, 7])?.apply(&b.state)?;
            for o in enumerate_outcomes(&s, &[4, 5, 6, 7])? {
                let mut steps = b.steps.clone();
                steps.push(TraceStep { stage: k, pattern: o.pattern.compact(), probability: o.probability });
                let detected = b.detected + o.pattern.total();
                let probability = b.probability * o.probability;
                let mut state = o.residual;
                if detected == 2 {
                    let folded = despread(&state, remaining - 1)?;
                    let keep: Vec<usize> = (0..4).collect();
                    let inside = PureState::from_terms(
                        4,
                        folded
                            .terms()
                            .filter(|(occ, _)| occ.counts()[4..].iter().all(|&x| x == 0))
                            .map(|(occ, a)| (occ.select(&keep), *a)),
                    )?;
                    max_leak = max_leak.max(1.0 - inside.norm_sqr());
                    state = inside.normalized();
                }
                let nb = Branch { state, detected, steps, probability };
                match settle(&nb, k == stages) {
                    Some(t) => traces.push(t),
                    None => next.push(nb),
                }
            }
        }
        frontier = next;
    }
    Ok(SpatialOutcome { outcome: summarize(traces)?, max_leak })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpatialComparison {
    pub stages: usize,
    pub p_temporal: f64,
    pub p_spatial: f64,
    /// Largest per-trace probability difference.
    pub max_trace_deviation: f64,
    pub classes_match: bool,
    pub min_state_fidelity: f64,
    pub max_leak: f64,
}

/// Runs both protocols with the equal-spread schedule and matches traces
/// by their detection history.
pub fn compare_spatial_temporal(stages: usize) -> Result<SpatialComparison> {
    let t = bleed_two_photons(&BleedSchedule::equal_spread(stages)?)?;
    let s = spatial_bleeding(stages)?;
    let index: BTreeMap<String, &crate::adaptive::ProtocolTrace> =
        s.outcome.traces.iter().map(|tr| (tr.key(), tr)).collect();
    let mut dev: f64 = 0.0;
    let mut classes_match = t.traces.len() == s.outcome.traces.len();
    let mut min_f: f64 = 1.0;
    for tr in &t.traces {
        match index.get(&tr.key()) {
            None => {
                classes_match = false;
                dev = dev.max(tr.probability);
            }
            Some(sp) => {
                dev = dev.max((sp.probability - tr.probability).abs());
                if sp.class != tr.class || sp.status != tr.status {
                    classes_match = false;
                }
                if let (Some(a), Some(b)) = (&tr.state, &sp.state) {
                    min_f = min_f.min(fidelity(a, b)?);
                }
            }
        }
    }
    Ok(SpatialComparison {
        stages,
        p_temporal: t.p_two_photon,
        p_spatial: s.outcome.p_two_photon,
        max_trace_deviation: dev,
        classes_match,
        min_state_fidelity: min_f,
        max_leak: s.max_leak,
    })
}
