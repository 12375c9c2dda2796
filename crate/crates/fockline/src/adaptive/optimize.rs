//! Reflectivity schedules maximizing the two-photon bleeding probability.

use serde::Serialize;

use crate::adaptive::bleed::{bleed_closed_form, BleedSchedule};
use crate::error::{Error, Result};

const LOWER: f64 = 1e-12;
const OBJECTIVE_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 20_000;

#[derive(Clone, Debug, Serialize)]
pub struct OptimizedSchedule {
    pub schedule: BleedSchedule,
    pub p_two_photon: f64,
    pub converged: bool,
    pub sweeps: usize,
}

fn objective(r: &[f64]) -> f64 {
    match BleedSchedule::new(r.to_vec()) {
        Ok(s) => bleed_closed_form(&s),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Golden-section maximization of `f` on `[a, b]`.
fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let edges = [(a, f(a)), (b, f(b)), (c, fc), (d, fd)];
    edges.into_iter().fold((a, f64::NEG_INFINITY), |best, x| if x.1 > best.1 { x } else { best })
}

/// Coordinate ascent from `start`; each coordinate is maximized exactly
/// along its axis while the others are held fixed.
fn ascend(start: Vec<f64>) -> (Vec<f64>, f64, bool, usize) {
    let mut r = start;
    let mut best = objective(&r);
    for sweep in 1..=MAX_SWEEPS {
        let before = best;
        for k in 0..r.len() {
            let mut trial = r.clone();
            let (x, v) = golden_max(
                |x| {
                    trial[k] = x;
                    objective(&trial)
                },
                LOWER,
                1.0,
            );
            if v > best {
                best = v;
                r[k] = x;
            }
        }
        if best - before < OBJECTIVE_TOL {
            return (r, best, true, sweep);
        }
    }
    (r, best, false, MAX_SWEEPS)
}

fn starts(stages: usize, warm: Option<&[f64]>) -> Vec<Vec<f64>> {
    let eq: Vec<f64> = (1..=stages).map(|k| 1.0 / (stages - k + 2) as f64).collect();
    let mut v = vec![eq.clone()];
    for scale in [0.7, 1.3] {
        v.push(eq.iter().map(|x| (x * scale).clamp(LOWER, 1.0)).collect());
    }
    if let Some(w) = warm {
        // A vanishing extra stage up front reproduces the shorter optimum.
        let mut s = vec![LOWER];
        s.extend_from_slice(w);
        v.push(s);
        let mut s = w.to_vec();
        s.push(0.5);
        v.push(s);
    }
    v
}

fn best_of(stages: usize, warm: Option<&[f64]>) -> Result<OptimizedSchedule> {
    let mut best: Option<OptimizedSchedule> = None;
    for s in starts(stages, warm) {
        let (r, p, converged, sweeps) = ascend(s);
        if best.as_ref().is_none_or(|b| p > b.p_two_photon) {
            best = Some(OptimizedSchedule { schedule: BleedSchedule::new(r)?, p_two_photon: p, converged, sweeps });
        }
    }
    best.ok_or_else(|| Error::Precondition("no optimizer start".into()))
}

/// Best schedule for `stages` stages.
pub fn optimize_schedule(stages: usize) -> Result<OptimizedSchedule> {
    Ok(optimize_schedules(stages)?.pop().expect("at least one stage"))
}

/// Best schedules for `1..=max_stages`, each warm-started from the previous.
pub fn optimize_schedules(max_stages: usize) -> Result<Vec<OptimizedSchedule>> {
    if max_stages < 1 {
        return Err(Error::InvalidParameter("stage count must be at least 1".into()));
    }
    let mut out: Vec<OptimizedSchedule> = Vec::new();
    for s in 1..=max_stages {
        let warm = out.last().map(|o| o.schedule.reflectivities().to_vec());
        out.push(best_of(s, warm.as_deref())?);
    }
    Ok(out)
}
