//! Primates: `sqrt(l)(|2>|01>..|0> +- |0>|10>..|2>)/sqrt2 + sqrt(1-l)|zeta>`.
//!
//! Fusing the last mode of one primate with the first mode of another joins
//! them; fusing the two outer modes of one primate yields a GHZ state. The
//! `zeta` part is vacuum on both outer modes, so for bookkeeping it acts like
//! vacuum. A fusion taps both modes and succeeds on exactly one detected
//! photon; with retries, empty rounds are followed by further taps.

use serde::Serialize;

use crate::adaptive::TREE_CUTOFF;
use crate::error::{Error, Result};
use crate::fock::{DualRailPairing, PureState, Reference, Sign};
use crate::measurement::{classify_residual, enumerate_outcomes, ClassLabel};
use crate::schemes::ghz::fusion_gate;
use crate::interferometer::Circuit;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrimateSymbol {
    pub n: usize,
    pub lambda: f64,
    pub sign: Sign,
}

impl PrimateSymbol {
    pub fn new(n: usize, lambda: f64, sign: Sign) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("primate size must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!("lambda {lambda} outside [0,1]")));
        }
        Ok(PrimateSymbol { n, lambda, sign })
    }

    /// The state with vacuum in place of `zeta`.
    pub fn state(&self) -> Result<PureState> {
        crate::fock::reference_state(Reference::Primate { n: self.n, lambda: self.lambda, sign: self.sign })
    }
}

/// How often a fused pair is tapped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum RetrySchedule {
    /// Tap reflectivities for a finite list of rounds.
    Stages(Vec<f64>),
    /// The same reflectivity every round until the remaining mass drops
    /// below the tree cutoff.
    Repeated(f64),
    /// Infinitely weak taps: any photon in the pair is eventually the first
    /// one detected.
    Limit,
}

impl RetrySchedule {
    /// One round of a fusion gate with transmission `t`.
    pub fn single(t: f64) -> Self {
        RetrySchedule::Stages(vec![1.0 - t])
    }

    fn validate(&self) -> Result<()> {
        let bad = |r: f64| !(r > 0.0 && r <= 1.0);
        match self {
            RetrySchedule::Stages(v) if v.is_empty() || v.iter().any(|&r| bad(r)) => {
                Err(Error::InvalidParameter(format!("invalid retry schedule {v:?}")))
            }
            RetrySchedule::Repeated(r) if bad(*r) => Err(Error::InvalidParameter(format!("invalid reflectivity {r}"))),
            _ => Ok(()),
        }
    }
}

/// Probability that exactly one of `m` photons in the fused pair is
/// detected in the first non-empty round, and the mass cut off by the tree
/// truncation.
pub fn exactly_one_probability(m: u32, schedule: &RetrySchedule) -> Result<(f64, f64)> {
    schedule.validate()?;
    if m == 0 {
        return Ok((0.0, 0.0));
    }
    let round = |r: f64| m as f64 * r * (1.0 - r).powi(m as i32 - 1);
    match schedule {
        RetrySchedule::Stages(v) => {
            let mut survive = 1.0;
            let mut q = 0.0;
            for &r in v {
                q += survive * round(r);
                survive *= (1.0 - r).powi(m as i32);
            }
            Ok((q, 0.0))
        }
        RetrySchedule::Repeated(r) => {
            let mut survive = 1.0;
            let mut q = 0.0;
            let stay = (1.0 - r).powi(m as i32);
            while survive >= TREE_CUTOFF {
                q += survive * round(*r);
                survive *= stay;
            }
            Ok((q, survive))
        }
        RetrySchedule::Limit => Ok((1.0, 0.0)),
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RetryResult {
    pub p_success: f64,
    pub result: PrimateSymbol,
    pub truncated_mass: f64,
}

/// Joins two primates under a retry schedule.
///
/// Terms of the product state by photon number `m` in the fused pair:
/// left-left and right-right carry 2 and produce the fused primate, the
/// right-left cross term carries 4, and the vacuum cross terms carry 2 or 0.
pub fn primate_fuse_with_retry(a: &PrimateSymbol, b: &PrimateSymbol, schedule: &RetrySchedule) -> Result<RetryResult> {
    let (q2, c2) = exactly_one_probability(2, schedule)?;
    let (q4, c4) = exactly_one_probability(4, schedule)?;
    let (l1, l2) = (a.lambda, b.lambda);
    let good = l1 * l2 / 2.0 * q2;
    let p = good + l1 * l2 / 4.0 * q4 + (l1 * (1.0 - l2) + l2 * (1.0 - l1)) / 2.0 * q2;
    let lambda = if p > 0.0 { (good / p).min(1.0) } else { 0.0 };
    Ok(RetryResult {
        p_success: p,
        result: PrimateSymbol::new(a.n + b.n, lambda, a.sign.times(b.sign))?,
        truncated_mass: c2.max(c4),
    })
}

/// Single fusion with transmission `t`:
/// `p = t(1-t)[l1 + l2 - l1 l2 (1-t^2)]`, `l' = l1 l2 / [l1 + l2 - l1 l2 (1-t^2)]`.
pub fn primate_fuse(a: &PrimateSymbol, b: &PrimateSymbol, t: f64) -> Result<(f64, PrimateSymbol)> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!("transmission {t} outside (0,1)")));
    }
    let r = primate_fuse_with_retry(a, b, &RetrySchedule::single(t))?;
    Ok((r.p_success, r.result))
}

/// Fuses the two outer modes; only the primate part carries photons there.
pub fn primate_self_fuse(a: &PrimateSymbol, schedule: &RetrySchedule) -> Result<f64> {
    Ok(a.lambda * exactly_one_probability(2, schedule)?.0)
}

/// Join at `t = 1/2`, then close the outer modes at `t = 1/2`.
pub fn primate_to_ghz(a: &PrimateSymbol, b: &PrimateSymbol) -> Result<f64> {
    let (p, joined) = primate_fuse(a, b, 0.5)?;
    Ok(p * primate_self_fuse(&joined, &RetrySchedule::single(0.5))?)
}

/// GHZ generation from `n` two-photon sources (1-primates with `lambda = 1`):
/// `n-1` joins then one closing fusion, each under `schedule`.
pub fn ghz_via_primates(n: usize, schedule: &RetrySchedule) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two sources".into()));
    }
    let unit = PrimateSymbol::new(1, 1.0, Sign::Minus)?;
    let mut acc = unit;
    let mut p = 1.0;
    for _ in 1..n {
        let r = primate_fuse_with_retry(&acc, &unit, schedule)?;
        p *= r.p_success;
        acc = r.result;
    }
    Ok(p * primate_self_fuse(&acc, schedule)?)
}

// ------------------------------------------------------------ Fock oracles

/// Heralded branch of a Fock-level fusion.
#[derive(Clone, Debug)]
pub struct FockBranch {
    pub probability: f64,
    pub state: PureState,
}

/// Retried fusion of modes `i`, `j` simulated round by round: empty rounds
/// continue, single photons succeed, anything else fails.
pub fn fock_fuse_with_retry(s: &PureState, i: usize, j: usize, taps: &[f64]) -> Result<Vec<FockBranch>> {
    let m = s.modes();
    let mut out = Vec::new();
    let mut cont = Some((1.0, s.clone()));
    for &r in taps {
        let Some((p0, st)) = cont.take() else { break };
        let circ = Circuit::new(m + 2).coupler(r, i, m)?.coupler(r, j, m + 1)?.coupler(0.5, m, m + 1)?;
        for o in enumerate_outcomes(&circ.apply(&st.with_vacuum(2))?, &[m, m + 1])? {
            match o.pattern.total() {
                0 => cont = Some((p0 * o.probability, o.residual)),
                1 => out.push(FockBranch { probability: p0 * o.probability, state: o.residual }),
                _ => {}
            }
        }
    }
    Ok(out)
}

/// Measured weight of the fused primate terms and their relative sign.
pub fn primate_content(s: &PureState, n: usize) -> Result<(f64, f64, f64)> {
    let reference = PrimateSymbol::new(n, 1.0, Sign::Plus)?.state()?;
    let mut terms = reference.terms().filter(|(o, _)| o.total() > 0).map(|(o, _)| s.amplitude(o));
    let l = terms.next().unwrap_or_default();
    let r = terms.next().unwrap_or_default();
    let sign = if l.norm() > 0.0 { (r / l).re } else { 0.0 };
    Ok((l.norm_sqr() + r.norm_sqr(), (l.norm_sqr() - r.norm_sqr()).abs(), sign))
}

/// Fock-level join of two reference primates at transmission `t`. Returns
/// the success probability and, per herald, `(probability, lambda, sign)`.
pub fn fock_primate_fuse(a: &PrimateSymbol, b: &PrimateSymbol, t: f64) -> Result<(f64, Vec<(f64, f64, f64)>)> {
    let s = a.state()?.tensor(&b.state()?);
    let i = 2 * a.n - 1;
    let outs = fusion_gate(&s, i, i + 1, t)?;
    let p = outs.iter().map(|o| o.probability).sum();
    let mut per = Vec::new();
    for o in &outs {
        let (w, imbalance, sign) = primate_content(&o.residual, a.n + b.n)?;
        if imbalance > 1e-9 {
            return Err(Error::Precondition("unbalanced primate terms".into()));
        }
        per.push((o.probability, w, sign));
    }
    Ok((p, per))
}

/// Fock-level join at `t = 1/2` and closing fusion at `t = 1/2` of two
/// given states (sizes `na`, `nb`). Returns the success probability and the
/// smallest GHZ fidelity among successes.
pub fn fock_to_ghz(sa: &PureState, na: usize, sb: &PureState, nb: usize) -> Result<(f64, f64)> {
    let s = sa.tensor(sb);
    let n = na + nb;
    let mut p = 0.0;
    let mut min_f: f64 = 1.0;
    for o in fusion_gate(&s, 2 * na - 1, 2 * na, 0.5)? {
        for c in fusion_gate(&o.residual, 0, 2 * n - 1, 0.5)? {
            p += o.probability * c.probability;
            let cls = classify_residual(&c.residual, &DualRailPairing::consecutive(n));
            let ok = cls.label == ClassLabel::GhzClass || (n == 2 && cls.label.is_bell());
            let f = if ok { cls.fidelity } else { 0.0 };
            min_f = min_f.min(f);
        }
    }
    Ok((p, min_f))
}

/// Fock-level GHZ generation from `n` sources with retried fusions.
pub fn fock_ghz_with_retry(n: usize, taps: &[f64]) -> Result<f64> {
    let unit = PrimateSymbol::new(1, 1.0, Sign::Minus)?.state()?;
    let mut branches = vec![FockBranch { probability: 1.0, state: unit.clone() }];
    for k in 1..n {
        let mut next = Vec::new();
        for b in &branches {
            let s = b.state.tensor(&unit);
            for f in fock_fuse_with_retry(&s, 2 * k - 1, 2 * k, taps)? {
                next.push(FockBranch { probability: b.probability * f.probability, state: f.state });
            }
        }
        branches = next;
    }
    let mut p = 0.0;
    for b in &branches {
        for f in fock_fuse_with_retry(&b.state, 0, 2 * n - 1, taps)? {
            let c = classify_residual(&f.state, &DualRailPairing::consecutive(n));
            if c.label == ClassLabel::GhzClass || (n == 2 && c.label.is_bell()) {
                p += b.probability * f.probability;
            }
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(l: f64) -> PrimateSymbol {
        PrimateSymbol::new(1, l, Sign::Minus).unwrap()
    }

    #[test]
    fn unit_primates() {
        for t in [0.2, 0.5, 0.8] {
            let (p, r) = primate_fuse(&sym(1.0), &sym(1.0), t).unwrap();
            assert!((p - t * (1.0 - t) * (1.0 + t * t)).abs() < 1e-14);
            assert!((r.lambda - 1.0 / (1.0 + t * t)).abs() < 1e-14);
            assert_eq!(r.n, 2);
            assert_eq!(r.sign, Sign::Plus);
        }
        let (_, r) = primate_fuse(&sym(0.0), &sym(0.7), 0.3).unwrap();
        assert_eq!(r.lambda, 0.0);
        assert!(primate_fuse(&sym(1.0), &sym(1.0), 1.0).is_err());
    }

    #[test]
    fn symbolic_matches_fock() {
        for &l1 in &[0.1, 0.5, 1.0] {
            for &l2 in &[0.3, 1.0] {
                for &t in &[0.25, 0.6] {
                    let (p, r) = primate_fuse(&sym(l1), &sym(l2), t).unwrap();
                    let (pf, per) = fock_primate_fuse(&sym(l1), &sym(l2), t).unwrap();
                    assert!((p - pf).abs() < 1e-10);
                    for (_, w, _) in per {
                        assert!((w - r.lambda).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn ghz_conversion() {
        assert!((primate_to_ghz(&sym(1.0), &sym(1.0)).unwrap() - 0.125).abs() < 1e-14);
        let (p, f) = fock_to_ghz(&sym(0.6).state().unwrap(), 1, &sym(0.9).state().unwrap(), 1).unwrap();
        assert!((p - 0.6 * 0.9 / 8.0).abs() < 1e-10);
        assert!(f > 1.0 - 1e-9);
    }

    #[test]
    fn retry_limits() {
        assert!((ghz_via_primates(2, &RetrySchedule::Limit).unwrap() - 0.5).abs() < 1e-14);
        assert!((ghz_via_primates(3, &RetrySchedule::Limit).unwrap() - 0.25).abs() < 1e-14);
        for n in 2..=4 {
            let single = ghz_via_primates(n, &RetrySchedule::single(0.5)).unwrap();
            assert!((single - 0.5 * 0.25f64.powi(n as i32 - 1)).abs() < 1e-14);
        }
        let taps = [0.2, 0.25, 1.0 / 3.0, 0.5];
        let sym_p = ghz_via_primates(2, &RetrySchedule::Stages(taps.to_vec())).unwrap();
        let fock_p = fock_ghz_with_retry(2, &taps).unwrap();
        assert!((sym_p - fock_p).abs() < 1e-10);
        let (q, cut) = exactly_one_probability(2, &RetrySchedule::Repeated(0.01)).unwrap();
        assert!(cut < TREE_CUTOFF && (q - 0.02 * 0.99 / (1.0 - 0.99f64.powi(2))).abs() < 1e-9);
    }
}
