//! Distillation of four-mode W-type states into a Bell pair.
//!
//! A two-photon state `(1/2) sum_ij C_ij a_i^dag a_j^dag |0>` with real
//! symmetric `C` is rotated into its Schmidt modes, the dominant mode is
//! damped against an extra vacuum mode until all four amplitudes agree, and
//! phases plus two couplers turn `sum_k c_k |2_k>` into chi+.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{fidelity, reference_state, DualRailPairing, Occupation, PureState, Reference};
use crate::interferometer::{Circuit, TransferMatrix};
use crate::measurement::{classify_residual, condition_on, enumerate_outcomes, ClassLabel};
use crate::schemes::bsg::bsg_state;
use crate::schemes::{PatternOutcome, SchemeReport};

#[derive(Clone, Debug)]
pub struct DistillResult {
    pub probability: f64,
    pub output: PureState,
    pub fidelity: f64,
    /// Five-mode circuit; mode 4 is the damping mode, post-selected on vacuum.
    pub circuit: Circuit,
    pub dominant_mode: usize,
    pub damping: f64,
    pub schmidt_amplitudes: Vec<f64>,
}

/// The symmetric coefficient matrix of a four-mode two-photon state, after
/// removing the global phase of the dominant term.
pub fn coefficient_matrix(s: &PureState) -> Result<DMatrix<f64>> {
    if s.modes() != 4 || s.photon_numbers() != [2] {
        return Err(Error::Precondition("expected a four-mode two-photon state".into()));
    }
    let s = s.phase_canonical();
    let mut c = DMatrix::zeros(4, 4);
    for (o, a) in s.terms() {
        if a.im.abs() > 1e-9 {
            return Err(Error::Precondition("coefficients are not real up to a global phase".into()));
        }
        let occ: Vec<usize> = (0..4).flat_map(|m| std::iter::repeat(m).take(o.get(m) as usize)).collect();
        if occ[0] == occ[1] {
            c[(occ[0], occ[0])] = std::f64::consts::SQRT_2 * a.re;
        } else {
            c[(occ[0], occ[1])] = a.re;
            c[(occ[1], occ[0])] = a.re;
        }
    }
    Ok(c)
}

pub fn distill_w42(s: &PureState) -> Result<DistillResult> {
    let class = classify_residual(s, &DualRailPairing::consecutive(2));
    if class.label != ClassLabel::WType {
        return Err(Error::Precondition(format!("input is {}, not W-type", class.label.name())));
    }
    let c = coefficient_matrix(s)?;
    let eig = SymmetricEigen::new(c);
    // V = O diag(1 or i) so that C = V |L| V^T; the network applies V^dag.
    let mut v = DMatrix::<Complex64>::zeros(4, 4);
    for k in 0..4 {
        let f = if eig.eigenvalues[k] >= 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
        for i in 0..4 {
            v[(i, k)] = f * eig.eigenvectors[(i, k)];
        }
    }
    let u = TransferMatrix::new(v.adjoint())?;
    let amps: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs() / std::f64::consts::SQRT_2).collect();
    let dom = (0..4).max_by(|&a, &b| amps[a].total_cmp(&amps[b])).unwrap_or(0);
    let small = (0..4).filter(|&k| k != dom).map(|k| amps[k]).fold(f64::INFINITY, f64::min);
    let others_equal = (0..4).filter(|&k| k != dom).all(|k| (amps[k] - small).abs() < 1e-9);
    if !others_equal || small <= 0.0 {
        return Err(Error::Precondition("Schmidt spectrum is not of W type".into()));
    }
    // Two photons through transmission sqrt(1-r) scale the amplitude by 1-r.
    let damping = 1.0 - small / amps[dom];
    let target = [1.0, -1.0, 1.0, -1.0];
    let mut circuit = Circuit::new(5).multiport(u, &[0, 1, 2, 3])?.coupler(damping, dom, 4)?;
    for (m, &t) in target.iter().enumerate() {
        if t < 0.0 {
            circuit = circuit.phase(PI / 2.0, m)?;
        }
    }
    circuit = circuit.coupler(0.5, 0, 1)?.coupler(0.5, 2, 3)?;
    let out = circuit.apply(&s.with_vacuum(1))?;
    let (p, residual) = condition_on(&out, &[4], &Occupation::vacuum(1))?;
    let f = fidelity(&residual, &reference_state(Reference::ChiPlus)?)?;
    Ok(DistillResult {
        probability: p,
        output: residual,
        fidelity: f,
        circuit,
        dominant_mode: dom,
        damping,
        schmidt_amplitudes: amps,
    })
}

/// Distills every W-type herald of the standard Bell state generator.
pub fn distill_report() -> Result<SchemeReport> {
    let s = bsg_state()?;
    let mut r = SchemeReport::new("distill-w42");
    for o in enumerate_outcomes(&s, &[4, 5, 6, 7])? {
        let c = classify_residual(&o.residual, &DualRailPairing::consecutive(2));
        if c.label != ClassLabel::WType {
            continue;
        }
        let d = distill_w42(&o.residual)?;
        let out_class = classify_residual(&d.output, &DualRailPairing::consecutive(2));
        let name = format!("distill[{}]", o.pattern.compact());
        r.check(&format!("{name}.probability"), 1.0 / 3.0, d.probability, 1e-10);
        r.check(&format!("{name}.fidelity"), 1.0, d.fidelity, 1e-9);
        r.notes.push(format!("{name}: damping {:.12} on mode {}", d.damping, d.dominant_mode));
        r.outcomes.push(
            PatternOutcome::new(o.pattern.compact(), o.probability * d.probability, out_class, true)
                .with_kind("distilled"),
        );
    }
    r.sum_where("pBellFromW", |o| o.success);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_w_distills() {
        let w = reference_state(Reference::W42).unwrap();
        let d = distill_w42(&w).unwrap();
        assert!((d.probability - 1.0 / 3.0).abs() < 1e-10);
        assert!(d.fidelity > 1.0 - 1e-9);
        assert!((d.damping - 2.0 / 3.0).abs() < 1e-10);
        let mut a = d.schmidt_amplitudes.clone();
        a.sort_by(f64::total_cmp);
        let x = 12f64.powf(-0.5);
        for (got, want) in a.iter().zip([x, x, x, 3.0 * x]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn bell_input_rejected() {
        let b = reference_state(Reference::PhiMinus).unwrap();
        assert!(matches!(distill_w42(&b), Err(Error::Precondition(_))));
    }

    #[test]
    fn report_covers_four_variants() {
        let r = distill_report().unwrap();
        assert_eq!(r.outcomes.len(), 4);
        assert!(r.all_pass(), "{:?}", r.checks);
        assert!((r.aggregate("pBellFromW").unwrap() - 1.0 / 16.0).abs() < 1e-10);
    }
}
