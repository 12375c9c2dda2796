//! Fusion gate on two modes and the GHZ generator built from it.


use crate::error::{Error, Result};
use crate::fock::{validate_modes, DualRailPairing, Occupation, PureState};
use crate::interferometer::Circuit;
use crate::measurement::{classify_residual, enumerate_outcomes, ClassLabel, ConditionalOutcome};
use crate::schemes::{PatternOutcome, SchemeReport};

/// Taps modes `i` and `j` with couplers of reflectivity `1-t` into two fresh
/// vacuum modes, mixes those 50:50 and detects them. Returns the heralds with
/// exactly one detected photon; residuals live on the original modes.
pub fn fusion_gate(s: &PureState, i: usize, j: usize, t: f64) -> Result<Vec<ConditionalOutcome>> {
    validate_modes(&[i, j], s.modes())?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("transmission {t} outside [0,1]")));
    }
    let m = s.modes();
    let circ = Circuit::new(m + 2)
        .coupler(1.0 - t, i, m)?
        .coupler(1.0 - t, j, m + 1)?
        .coupler(0.5, m, m + 1)?;
    let out = circ.apply(&s.with_vacuum(2))?;
    Ok(enumerate_outcomes(&out, &[m, m + 1])?
        .into_iter()
        .filter(|o| o.pattern.total() == 1)
        .collect())
}

/// `|1>^(2n)` with a coupler on every pair `(2k, 2k+1)`.
pub fn paired_sources(n: usize) -> Result<PureState> {
    let mut c = Circuit::new(2 * n);
    for k in 0..n {
        c = c.coupler(0.5, 2 * k, 2 * k + 1)?;
    }
    c.apply(&PureState::basis(Occupation::new(vec![1; 2 * n])))
}

/// Fusion order: neighbours `(2k+1, 2k+2)`, then the outer modes `(0, 2n-1)`.
pub fn ghz_fusion_order(n: usize) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (0..n - 1).map(|k| (2 * k + 1, 2 * k + 2)).collect();
    v.push((0, 2 * n - 1));
    v
}

#[derive(Clone, Debug)]
pub struct GhzBranch {
    pub patterns: Vec<Occupation>,
    pub probability: f64,
    pub state: PureState,
}

/// Every heralded branch of the `n`-qubit generator.
pub fn ghz_branches(n: usize) -> Result<Vec<GhzBranch>> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidParameter(format!("GHZ generator supports 2..=6 qubits, got {n}")));
    }
    let mut branches =
        vec![GhzBranch { patterns: vec![], probability: 1.0, state: paired_sources(n)? }];
    for (i, j) in ghz_fusion_order(n) {
        let mut next = Vec::new();
        for b in &branches {
            for o in fusion_gate(&b.state, i, j, 0.5)? {
                let mut patterns = b.patterns.clone();
                patterns.push(o.pattern);
                next.push(GhzBranch { patterns, probability: b.probability * o.probability, state: o.residual });
            }
        }
        branches = next;
    }
    Ok(branches)
}

pub fn ghz_generator(n: usize) -> Result<SchemeReport> {
    let branches = ghz_branches(n)?;
    let pairing = DualRailPairing::consecutive(n);
    let mut r = SchemeReport::new("ghz");
    for b in &branches {
        let c = classify_residual(&b.state, &pairing);
        // Two-qubit GHZ states are Bell states and classify as such.
        let ok = c.label == ClassLabel::GhzClass || (n == 2 && c.label.is_bell());
        let name = b.patterns.iter().map(|p| p.compact()).collect::<Vec<_>>().join("|");
        r.outcomes.push(PatternOutcome::new(name, b.probability, c, ok));
    }
    let p = r.sum_where("pSuccess", |o| o.success);
    let all = r.sum_where("pHeralded", |_| true);
    let expected = 0.5 * 0.25f64.powi(n as i32 - 1);
    r.check("pSuccess", expected, p, 1e-10);
    r.check("allHeraldsGhz", all, p, 1e-12);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    use num_complex::Complex64;

    fn amp(s: &PureState, occ: &[u8]) -> Complex64 {
        s.amplitude(&Occupation::new(occ.to_vec()))
    }

    #[test]
    fn ghz_probabilities() {
        for (n, p) in [(2, 1.0 / 8.0), (3, 1.0 / 32.0), (4, 1.0 / 128.0)] {
            let r = ghz_generator(n).unwrap();
            assert!(r.all_pass(), "n={n} {:?}", r.checks);
            assert!((r.aggregate("pSuccess").unwrap() - p).abs() < 1e-12);
        }
    }

    #[test]
    fn sources_are_noon_pairs() {
        let s = paired_sources(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((amp(&s, &[2, 0]) - Complex64::new(h, 0.0)).norm() < 1e-12);
        assert!((amp(&s, &[0, 2]) + Complex64::new(h, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gate_rejects_bad_modes() {
        let s = paired_sources(2).unwrap();
        assert!(fusion_gate(&s, 1, 1, 0.5).is_err());
        assert!(fusion_gate(&s, 0, 9, 0.5).is_err());
    }
}
