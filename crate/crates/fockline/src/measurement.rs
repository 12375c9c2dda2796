//! Photon-number-resolving detection: outcome enumeration, effective
//! operators on unmeasured inputs, and classification of heralded states.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    decode_dual_rail, reference_state, truncate_to_qubit_subspace, validate_modes, DualRailPairing,
    Occupation, PureState, Reference,
};
use crate::interferometer::{apply_on_modes, Circuit, TransferMatrix};

/// Fidelity threshold for assigning a class label.
pub const CLASS_TOL: f64 = 1e-9;

/// Completeness tolerance for effective-operator families.
pub const COMPLETENESS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalOutcome {
    pub pattern: Occupation,
    pub probability: f64,
    /// Normalized state of the unmeasured modes (mode order preserved).
    pub residual: PureState,
}

/// One outcome per detection pattern, in lexicographic pattern order.
///
/// Probabilities are squared norms of the projected components, so they sum
/// to `s.norm_sqr()`.
pub fn enumerate_outcomes(s: &PureState, measured: &[usize]) -> Result<Vec<ConditionalOutcome>> {
    validate_modes(measured, s.modes())?;
    let rest = s.modes() - measured.len();
    let mut groups: BTreeMap<Occupation, PureState> = BTreeMap::new();
    for (o, a) in s.terms() {
        groups
            .entry(o.select(measured))
            .or_insert_with(|| PureState::zero(rest))
            .add_amplitude(o.remove(measured), *a);
    }
    Ok(groups
        .into_iter()
        .filter_map(|(pattern, mut r)| {
            r.prune();
            let p = r.norm_sqr();
            (p > 0.0).then(|| ConditionalOutcome { pattern, probability: p, residual: r.normalized() })
        })
        .collect())
}

/// Probability of `pattern` and the normalized residual (empty if impossible).
pub fn condition_on(s: &PureState, measured: &[usize], pattern: &Occupation) -> Result<(f64, PureState)> {
    let (p, r) = project(s, measured, pattern)?;
    Ok((p, r.normalized()))
}

/// Unnormalized projection of `s` onto `pattern` on the measured modes.
pub fn project(s: &PureState, measured: &[usize], pattern: &Occupation) -> Result<(f64, PureState)> {
    validate_modes(measured, s.modes())?;
    if pattern.modes() != measured.len() {
        return Err(Error::ModeMismatch { left: measured.len(), right: pattern.modes() });
    }
    let mut r = PureState::zero(s.modes() - measured.len());
    for (o, a) in s.terms() {
        if &o.select(measured) == pattern {
            r.add_amplitude(o.remove(measured), *a);
        }
    }
    r.prune();
    Ok((r.norm_sqr(), r))
}

/// A linear map from kets on `input_modes` modes to kets on `output_modes`
/// modes, stored column by column; a bra has `output_modes == 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveOperator {
    pub label: String,
    pub weight: f64,
    pub input_modes: usize,
    pub output_modes: usize,
    pub columns: BTreeMap<Occupation, PureState>,
}

impl EffectiveOperator {
    /// The bra `<m|` with ket `m`.
    pub fn bra(label: impl Into<String>, ket: &PureState) -> Self {
        let columns = ket
            .terms()
            .map(|(o, a)| {
                let scalar = PureState::from_terms(0, [(Occupation::vacuum(0), a.conj())])
                    .expect("zero-mode scalar");
                (o.clone(), scalar)
            })
            .collect();
        EffectiveOperator {
            label: label.into(),
            weight: 1.0,
            input_modes: ket.modes(),
            output_modes: 0,
            columns,
        }
    }

    /// The ket `m` of a bra operator.
    pub fn ket(&self) -> PureState {
        let mut s = PureState::zero(self.input_modes);
        for (o, col) in &self.columns {
            s.add_amplitude(o.clone(), col.amplitude(&Occupation::vacuum(self.output_modes)).conj());
        }
        s.prune();
        s
    }

    pub fn apply(&self, s: &PureState) -> Result<PureState> {
        if s.modes() != self.input_modes {
            return Err(Error::ModeMismatch { left: self.input_modes, right: s.modes() });
        }
        let mut out = PureState::zero(self.output_modes);
        for (o, a) in s.terms() {
            if let Some(col) = self.columns.get(o) {
                for (oo, b) in col.terms() {
                    out.add_amplitude(oo.clone(), a * b);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// `w <a| K^dag K |b>` over the given input basis.
    pub fn gram(&self, basis: &[Occupation]) -> Vec<Vec<Complex64>> {
        let cols: Vec<PureState> = basis
            .iter()
            .map(|o| self.columns.get(o).cloned().unwrap_or_else(|| PureState::zero(self.output_modes)))
            .collect();
        cols.iter()
            .map(|a| cols.iter().map(|b| a.inner(b).expect("same output modes") * self.weight).collect())
            .collect()
    }

    /// Squared norm of the operator restricted to `basis` (trace of `K^dag K`).
    pub fn trace_norm_sqr(&self, basis: &[Occupation]) -> f64 {
        basis
            .iter()
            .filter_map(|o| self.columns.get(o))
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            * self.weight
    }
}

/// The bra `<m_p| = <p| U` on the input side of `u`, optionally truncated to
/// occupations below two.
pub fn backpropagate_effective_bra(
    u: &TransferMatrix,
    pattern: &Occupation,
    truncate: bool,
) -> Result<EffectiveOperator> {
    if pattern.modes() != u.dim() {
        return Err(Error::ModeMismatch { left: u.dim(), right: pattern.modes() });
    }
    let modes: Vec<usize> = (0..u.dim()).collect();
    let mut ket = apply_on_modes(&u.adjoint(), &modes, &PureState::basis(pattern.clone()))?;
    if truncate {
        ket = truncate_to_qubit_subspace(&ket, &modes);
    }
    Ok(EffectiveOperator::bra(format!("m{}", pattern.compact()), &ket))
}

/// `max |sum_i w_i <a|K_i^dag K_i|b> - delta_ab|` over `basis`.
pub fn verify_completeness(family: &[EffectiveOperator], basis: &[Occupation]) -> f64 {
    let d = basis.len();
    let mut acc = vec![vec![Complex64::default(); d]; d];
    for k in family {
        let g = k.gram(basis);
        for i in 0..d {
            for j in 0..d {
                acc[i][j] += g[i][j];
            }
        }
    }
    let mut dev: f64 = 0.0;
    for (i, row) in acc.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let e = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((v - Complex64::new(e, 0.0)).norm());
        }
    }
    dev
}

/// Kraus operators of a heralded measurement: for each detection pattern on
/// `measured`, the map from the given input kets to the unnormalized
/// unmeasured-mode output. `inputs` pairs a basis label with the full
/// circuit input it stands for (signal basis ket tensored with ancillae).
pub fn kraus_family(
    circuit: &Circuit,
    inputs: &[(Occupation, PureState)],
    measured: &[usize],
) -> Result<BTreeMap<Occupation, EffectiveOperator>> {
    validate_modes(measured, circuit.modes())?;
    let out_modes = circuit.modes() - measured.len();
    let mut fam: BTreeMap<Occupation, EffectiveOperator> = BTreeMap::new();
    let in_modes = inputs.first().map(|(o, _)| o.modes()).unwrap_or(0);
    for (label, full) in inputs {
        let evolved = circuit.apply(full)?;
        let mut groups: BTreeMap<Occupation, PureState> = BTreeMap::new();
        for (o, a) in evolved.terms() {
            groups
                .entry(o.select(measured))
                .or_insert_with(|| PureState::zero(out_modes))
                .add_amplitude(o.remove(measured), *a);
        }
        for (pattern, mut col) in groups {
            col.prune();
            if col.is_empty() {
                continue;
            }
            fam.entry(pattern.clone())
                .or_insert_with(|| EffectiveOperator {
                    label: format!("K{}", pattern.compact()),
                    weight: 1.0,
                    input_modes: in_modes,
                    output_modes: out_modes,
                    columns: BTreeMap::new(),
                })
                .columns
                .insert(label.clone(), col);
        }
    }
    Ok(fam)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassLabel {
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi-")]
    PsiMinus,
    #[serde(rename = "chi-")]
    ChiMinus,
    #[serde(rename = "chi+")]
    ChiPlus,
    #[serde(rename = "W")]
    WType,
    #[serde(rename = "GHZ")]
    GhzClass,
    #[serde(rename = "product")]
    ProductOrFailure,
    #[serde(rename = "other")]
    Other,
}

impl ClassLabel {
    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::PhiMinus => "phi-",
            ClassLabel::PsiMinus => "psi-",
            ClassLabel::ChiMinus => "chi-",
            ClassLabel::ChiPlus => "chi+",
            ClassLabel::WType => "W",
            ClassLabel::GhzClass => "GHZ",
            ClassLabel::ProductOrFailure => "product",
            ClassLabel::Other => "other",
        }
    }

    pub fn is_bell(self) -> bool {
        matches!(self, ClassLabel::PhiMinus | ClassLabel::PsiMinus | ClassLabel::ChiMinus | ClassLabel::ChiPlus)
    }
}

/// How a classified state relates to its canonical reference:
/// `s = e^{i phase} * Phi(flips) * P * reference`, where `P` moves old mode
/// `permutation[i]` to mode `i` and `Phi` applies `pi` to each listed mode.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Correction {
    pub permutation: Vec<usize>,
    /// Zero-based mode indices carrying a `pi` phase.
    pub phase_flips: Vec<usize>,
    /// Qubits to bit-flip (GHZ class only).
    pub bit_flips: Vec<usize>,
    pub global_phase: f64,
}

impl Correction {
    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
            && self.phase_flips.is_empty()
            && self.bit_flips.is_empty()
    }

    /// `+1`/`-1` when the global phase is real, otherwise `0`.
    pub fn sign(&self) -> i8 {
        let c = self.global_phase.cos();
        if (c - 1.0).abs() < 1e-6 {
            1
        } else if (c + 1.0).abs() < 1e-6 {
            -1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub label: ClassLabel,
    pub fidelity: f64,
    pub correction: Option<Correction>,
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn phase_masks(even_photons: bool) -> Vec<u8> {
    let mut m: Vec<u8> = (0u8..16).filter(|&x| !(even_photons && x & 0b10 != 0)).collect();
    m.sort_by_key(|&x| (x.count_ones(), x));
    m
}

const FOUR_MODE_REFS: [(ClassLabel, Reference); 5] = [
    (ClassLabel::PhiMinus, Reference::PhiMinus),
    (ClassLabel::PsiMinus, Reference::PsiMinus),
    (ClassLabel::ChiMinus, Reference::ChiMinus),
    (ClassLabel::ChiPlus, Reference::ChiPlus),
    (ClassLabel::WType, Reference::W42),
];

/// Assigns a class to a normalized state. Four-mode states are first matched
/// against the Bell and W references under signal-mode permutations and
/// per-mode `pi` phases; then GHZ-type and product structure is checked on
/// the dual-rail decoding.
pub fn classify_residual(s: &PureState, pairing: &DualRailPairing) -> Classification {
    if s.len() == 1 {
        return Classification { label: ClassLabel::ProductOrFailure, fidelity: 1.0, correction: None };
    }
    if s.modes() == 4 {
        if let Some(c) = classify_four_mode(s) {
            return c;
        }
    }
    if let Ok(q) = decode_dual_rail(s, pairing) {
        if let Some(c) = classify_qubits(&q, pairing.qubits()) {
            return c;
        }
    }
    Classification { label: ClassLabel::Other, fidelity: 0.0, correction: None }
}

fn classify_four_mode(s: &PureState) -> Option<Classification> {
    let numbers = s.photon_numbers();
    if numbers != [2] {
        return None;
    }
    let refs: Vec<(ClassLabel, PureState)> = FOUR_MODE_REFS
        .iter()
        .map(|&(l, r)| (l, reference_state(r).expect("fixed reference")))
        .collect();
    for perm in permutations4() {
        for mask in phase_masks(true) {
            let flips: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            let phases: Vec<(usize, f64)> = flips.iter().map(|&m| (m, std::f64::consts::PI)).collect();
            for (label, r) in &refs {
                let t = r.permute_modes(&perm).expect("4-mode perm").phase_modes(&phases);
                let ov = t.inner(s).expect("4 modes");
                let f = ov.norm_sqr();
                if f >= 1.0 - CLASS_TOL {
                    return Some(Classification {
                        label: *label,
                        fidelity: f.min(1.0),
                        correction: Some(Correction {
                            permutation: perm.to_vec(),
                            phase_flips: flips,
                            bit_flips: vec![],
                            global_phase: ov.arg(),
                        }),
                    });
                }
            }
        }
    }
    None
}

fn classify_qubits(q: &[Complex64], k: usize) -> Option<Classification> {
    let norm: f64 = q.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return None;
    }
    if k >= 2 {
        let full = (1usize << k) - 1;
        let mut best = (0.0, 0usize);
        for x in 0..=full {
            if x < (x ^ full) {
                let f = (q[x].norm() + q[x ^ full].norm()).powi(2) / 2.0;
                if f > best.0 {
                    best = (f, x);
                }
            }
        }
        if best.0 >= 1.0 - CLASS_TOL {
            let x = best.1;
            let x = if q[x].norm() > 1e-12 { x } else { x ^ full };
            let rel = (q[x ^ full] / q[x]).arg();
            return Some(Classification {
                label: ClassLabel::GhzClass,
                fidelity: best.0.min(1.0),
                correction: Some(Correction {
                    permutation: (0..2 * k).collect(),
                    phase_flips: vec![],
                    bit_flips: (0..k).filter(|j| x >> (k - 1 - j) & 1 == 1).collect(),
                    global_phase: rel,
                }),
            });
        }
    }
    let product = (0..k).all(|j| single_qubit_purity(q, k, j) >= 1.0 - CLASS_TOL);
    product.then_some(Classification { label: ClassLabel::ProductOrFailure, fidelity: 1.0, correction: None })
}

fn single_qubit_purity(q: &[Complex64], k: usize, j: usize) -> f64 {
    let bit = 1usize << (k - 1 - j);
    let (mut r00, mut r11, mut r01) = (0.0, 0.0, Complex64::default());
    for x in 0..q.len() {
        if x & bit == 0 {
            r00 += q[x].norm_sqr();
            r11 += q[x | bit].norm_sqr();
            r01 += q[x] * q[x | bit].conj();
        }
    }
    r00 * r00 + r11 * r11 + 2.0 * r01.norm_sqr()
}
