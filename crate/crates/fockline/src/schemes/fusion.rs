//! Type-I and type-II fusion of dual-rail qubits, with and without ancilla
//! boosting, and the three-mode DFT measurement.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{encode_dual_rail, occupations, DualRailPairing, Occupation, PureState, Reference};
use crate::interferometer::{Circuit, TransferMatrix};
use crate::measurement::{
    classify_residual, enumerate_outcomes, kraus_family, verify_completeness, ClassLabel, Classification,
    EffectiveOperator,
};
use crate::schemes::{PatternOutcome, SchemeReport};

const TOL: f64 = 1e-10;
const SUPPORT_TOL: f64 = 1e-12;

fn none() -> Classification {
    Classification { label: ClassLabel::ProductOrFailure, fidelity: 0.0, correction: None }
}

/// Dual-rail `(|00> + |11>)/sqrt2` on four consecutive modes.
pub fn phi_plus() -> Result<PureState> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::default();
    encode_dual_rail(&[h, z, z, h], &DualRailPairing::consecutive(2), 4)
}

fn qubit_basis() -> Vec<(String, Occupation)> {
    vec![
        ("00".into(), Occupation::new(vec![1, 0, 1, 0])),
        ("01".into(), Occupation::new(vec![1, 0, 0, 1])),
        ("10".into(), Occupation::new(vec![0, 1, 1, 0])),
        ("11".into(), Occupation::new(vec![0, 1, 0, 1])),
    ]
}

// ---------------------------------------------------------------- type I

/// Kraus family of a type-I gate. `q1 = (a, b)`, `q2 = (c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum KrausKind {
    /// Parity-odd projection with the ancilla photons left in the outputs.
    K1,
    /// Parity-odd projection with both ancilla photons detected.
    K2,
    /// Parity-even projection, possible only with the ancilla.
    K3,
    /// Failure projecting onto `|11>`.
    K4,
    /// Failure projecting onto `|00>`.
    K5,
    Unclassified,
}

impl KrausKind {
    pub fn is_success(self) -> bool {
        matches!(self, KrausKind::K1 | KrausKind::K2 | KrausKind::K3)
    }
}

/// Unboosted gate: couple the second rails and detect them.
pub fn type1_circuit(boosted: bool) -> Result<(Circuit, Vec<usize>)> {
    if boosted {
        Ok((
            Circuit::new(8).multiport(TransferMatrix::hadamard(4)?, &[1, 3, 4, 5])?,
            vec![1, 3, 4, 5],
        ))
    } else {
        Ok((Circuit::new(4).coupler(0.5, 1, 3)?, vec![1, 3]))
    }
}

pub fn chi_plus() -> Result<PureState> {
    crate::fock::reference_state(Reference::ChiPlus)
}

/// Kraus operators of the type-I gate on the two-qubit basis.
pub fn type1_kraus(boosted: bool) -> Result<BTreeMap<Occupation, EffectiveOperator>> {
    let (circ, measured) = type1_circuit(boosted)?;
    let anc = if boosted { Some(chi_plus()?) } else { None };
    let inputs: Vec<(Occupation, PureState)> = qubit_basis()
        .into_iter()
        .map(|(_, o)| {
            let s = PureState::basis(o.clone());
            (o, anc.as_ref().map_or(s.clone(), |a| s.tensor(a)))
        })
        .collect();
    kraus_family(&circ, &inputs, &measured)
}

/// Assigns a Kraus kind from the support of the operator's columns.
pub fn kraus_kind(k: &EffectiveOperator, pattern: &Occupation) -> KrausKind {
    let b = qubit_basis();
    let norm = |o: &Occupation| k.columns.get(o).map_or(0.0, |c| c.norm_sqr());
    let n: Vec<f64> = b.iter().map(|(_, o)| norm(o)).collect();
    let s: Vec<bool> = n.iter().map(|&x| x > SUPPORT_TOL).collect();
    match (s[0], s[1], s[2], s[3]) {
        (false, true, true, false) if (n[1] - n[2]).abs() < 1e-10 => {
            if pattern.total() == 1 {
                KrausKind::K1
            } else {
                KrausKind::K2
            }
        }
        (true, false, false, true) if (n[0] - n[3]).abs() < 1e-10 => KrausKind::K3,
        (false, false, false, true) => KrausKind::K4,
        (true, false, false, false) => KrausKind::K5,
        _ => KrausKind::Unclassified,
    }
}

/// Output occupations on modes `(q1.0, q2.0, a2, a3)` for each input column.
fn expected_outputs(kind: KrausKind) -> Vec<(&'static str, [u8; 4])> {
    match kind {
        KrausKind::K1 => vec![("01", [1, 0, 1, 1]), ("10", [0, 1, 1, 1])],
        KrausKind::K2 => vec![("01", [1, 0, 0, 0]), ("10", [0, 1, 0, 0])],
        KrausKind::K3 => vec![("00", [1, 1, 0, 0]), ("11", [0, 0, 1, 1])],
        KrausKind::K4 => vec![("11", [0, 0, 0, 0])],
        KrausKind::K5 => vec![("00", [1, 1, 1, 1])],
        KrausKind::Unclassified => vec![],
    }
}

fn output_support_matches(k: &EffectiveOperator, kind: KrausKind) -> bool {
    let basis: BTreeMap<String, Occupation> = qubit_basis().into_iter().collect();
    let want = expected_outputs(kind);
    !want.is_empty()
        && want.iter().all(|(label, occ)| {
            k.columns.get(&basis[*label]).is_some_and(|col| {
                col.len() == 1 && col.terms().all(|(o, _)| o.counts() == occ)
            })
        })
}

fn kind_name(k: KrausKind) -> &'static str {
    match k {
        KrausKind::K1 => "K1",
        KrausKind::K2 => "K2",
        KrausKind::K3 => "K3",
        KrausKind::K4 => "K4",
        KrausKind::K5 => "K5",
        KrausKind::Unclassified => "unclassified",
    }
}

/// Success probability on a maximally mixed pair of qubits for each pattern,
/// with its kind.
pub fn type1_pattern_table(boosted: bool) -> Result<Vec<(Occupation, f64, KrausKind)>> {
    let basis: Vec<Occupation> = qubit_basis().into_iter().map(|(_, o)| o).collect();
    Ok(type1_kraus(boosted)?
        .iter()
        .map(|(p, k)| {
            let kind = if boosted { kraus_kind(k, p) } else { unboosted_kind(p) };
            (p.clone(), k.trace_norm_sqr(&basis) / 4.0, kind)
        })
        .collect())
}

fn unboosted_kind(pattern: &Occupation) -> KrausKind {
    match pattern.total() {
        1 => KrausKind::K1,
        0 => KrausKind::K5,
        2 => KrausKind::K4,
        _ => KrausKind::Unclassified,
    }
}

fn type1_completeness(boosted: bool) -> Result<f64> {
    let fam: Vec<EffectiveOperator> = type1_kraus(boosted)?.into_values().collect();
    let basis: Vec<Occupation> = qubit_basis().into_iter().map(|(_, o)| o).collect();
    Ok(verify_completeness(&fam, &basis))
}

/// Fuses two Bell pairs on modes `0..4` and `4..8` through their inner
/// qubits; every success leaves a three-qubit GHZ state.
pub fn type1_unboosted_report() -> Result<SchemeReport> {
    let s = phi_plus()?.tensor(&phi_plus()?);
    let circ = Circuit::new(8).coupler(0.5, 3, 5)?;
    let out = circ.apply(&s)?;
    let pairing = DualRailPairing::consecutive(3);
    let mut r = SchemeReport::new("type1-unboosted");
    for o in enumerate_outcomes(&out, &[3, 5])? {
        let ok = o.pattern.total() == 1;
        let c = if ok { classify_residual(&o.residual, &pairing) } else { none() };
        let kind = if ok { "K1" } else if o.pattern.total() == 0 { "K5" } else { "K4" };
        r.outcomes.push(PatternOutcome::new(o.pattern.compact(), o.probability, c, ok).with_kind(kind));
    }
    let p = r.sum_where("pSuccess", |o| o.success);
    let ghz = r.sum_where("pGhz", |o| o.success && o.class == ClassLabel::GhzClass);
    r.check("pSuccess", 0.5, p, TOL);
    r.check("successesAreGhz", p, ghz, TOL);
    r.check("completeness", 0.0, type1_completeness(false)?, 1e-9);
    Ok(r)
}

/// Kraus-level report of the boosted gate over all detection patterns.
pub fn type1_boosted_report() -> Result<SchemeReport> {
    let table = type1_pattern_table(true)?;
    let mut r = SchemeReport::new("type1-boosted");
    for (p, prob, kind) in &table {
        let c = Classification { label: ClassLabel::Other, fidelity: 0.0, correction: None };
        r.outcomes.push(PatternOutcome::new(p.compact(), *prob, c, kind.is_success()).with_kind(kind_name(*kind)));
    }
    let p = r.sum_where("pSuccess", |o| o.success);
    let odd = r.sum_where("pParityOdd", |o| matches!(o.kind.as_deref(), Some("K1" | "K2")));
    let even = r.sum_where("pParityEven", |o| o.kind.as_deref() == Some("K3"));
    let unclassified = table.iter().filter(|t| t.2 == KrausKind::Unclassified).count();
    let succ = table.iter().filter(|t| t.2.is_success()).count();
    r.push_value("patterns", table.len() as f64);
    r.push_value("successPatterns", succ as f64);
    r.check("pSuccess", 0.75, p, TOL);
    r.check("pParityOdd", 0.5, odd, TOL);
    r.check("pParityEven", 0.25, even, TOL);
    r.check("unclassifiedPatterns", 0.0, unclassified as f64, 0.0);
    r.check("completeness", 0.0, type1_completeness(true)?, 1e-9);
    for (kind, want) in [("K1", 0.25), ("K2", 0.25), ("K3", 0.25), ("K4", 0.125), ("K5", 0.125)] {
        let got = r.sum_where(&format!("p{kind}"), |o| o.kind.as_deref() == Some(kind));
        r.check(&format!("p{kind}"), want, got, TOL);
    }
    let supports_ok = type1_kraus(true)?.iter().all(|(p, k)| output_support_matches(k, kraus_kind(k, p)));
    r.check("outputSupportsMatchOperatorList", 1.0, if supports_ok { 1.0 } else { 0.0 }, 0.0);
    r.notes.push("probabilities are averages over the two-qubit basis".into());
    Ok(r)
}

/// Boosted type-I gate on a state: qubits `q1`, `q2` given as rail pairs,
/// chi+ appended on four fresh modes. Returns, per herald, the pattern, its
/// probability, kind, residual and the rails of the fused qubit in residual
/// indexing.
pub fn fuse_type1_boosted(
    s: &PureState,
    q1: (usize, usize),
    q2: (usize, usize),
) -> Result<Vec<(Occupation, f64, KrausKind, PureState, (usize, usize))>> {
    let kinds: BTreeMap<Occupation, KrausKind> =
        type1_pattern_table(true)?.into_iter().map(|(p, _, k)| (p, k)).collect();
    let m = s.modes();
    let full = s.tensor(&chi_plus()?);
    let measured = [q1.1, q2.1, m, m + 1];
    let circ = Circuit::new(m + 4).multiport(TransferMatrix::hadamard(4)?, &measured)?;
    let out = circ.apply(&full)?;
    let index = |mode: usize| mode - measured.iter().filter(|&&x| x < mode).count();
    let mut v = Vec::new();
    for o in enumerate_outcomes(&out, &measured)? {
        let kind = kinds.get(&o.pattern).copied().unwrap_or(KrausKind::Unclassified);
        let rails = match kind {
            KrausKind::K3 => (index(q1.0), index(m + 2)),
            _ => (index(q1.0), index(q2.0)),
        };
        v.push((o.pattern, o.probability, kind, o.residual, rails));
    }
    Ok(v)
}

/// Unboosted gate on a state; same return layout as the boosted version.
pub fn fuse_type1(
    s: &PureState,
    q1: (usize, usize),
    q2: (usize, usize),
) -> Result<Vec<(Occupation, f64, KrausKind, PureState, (usize, usize))>> {
    let out = Circuit::new(s.modes()).coupler(0.5, q1.1, q2.1)?.apply(s)?;
    let measured = [q1.1, q2.1];
    let index = |mode: usize| mode - measured.iter().filter(|&&x| x < mode).count();
    Ok(enumerate_outcomes(&out, &measured)?
        .into_iter()
        .map(|o| {
            let kind = match o.pattern.total() {
                1 => KrausKind::K1,
                0 => KrausKind::K5,
                _ => KrausKind::K4,
            };
            (o.pattern, o.probability, kind, o.residual, (index(q1.0), index(q2.0)))
        })
        .collect())
}

/// Three Bell pairs fused in sequence: A's second qubit with B's first, then
/// the fused qubit with C's first.
pub fn three_way(boosted: bool) -> Result<f64> {
    let s = phi_plus()?.tensor(&phi_plus()?).tensor(&phi_plus()?);
    let fuse = if boosted { fuse_type1_boosted } else { fuse_type1 };
    let mut total = 0.0;
    for (_, p1, k1, res1, fused) in fuse(&s, (2, 3), (4, 5))? {
        if !k1.is_success() {
            continue;
        }
        // C's first qubit sits at residual indices (6, 7) after two rails
        // (3 and 5, boosted or not) were measured.
        for (_, p2, k2, _, _) in fuse(&res1, fused, (6, 7))? {
            if k2.is_success() {
                total += p1 * p2;
            }
        }
    }
    Ok(total)
}

pub fn three_way_report() -> Result<SchemeReport> {
    let mut r = SchemeReport::new("type1-three-way");
    let b = three_way(true)?;
    let u = three_way(false)?;
    r.push_value("pSuccessBoosted", b);
    r.push_value("pSuccessUnboosted", u);
    r.check("pSuccessBoosted", 9.0 / 16.0, b, TOL);
    r.check("pSuccessUnboosted", 0.25, u, TOL);
    Ok(r)
}

// --------------------------------------------------------------- type II

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// One ancilla photon and one three-mode DFT.
    Single,
    /// Ancilla photons and DFTs on both sides.
    Double,
}

/// A group of detection patterns sharing one effective bra up to phase.
#[derive(Clone, Debug)]
pub struct BraGroup {
    pub patterns: Vec<Occupation>,
    /// Normalized bra coefficients over the input basis.
    pub bra: Vec<Complex64>,
    pub weight: f64,
}

impl BraGroup {
    /// `2 |v00 v11 - v01 v10|` for a two-qubit bra.
    pub fn concurrence(&self) -> f64 {
        let v = &self.bra;
        if v.len() != 4 {
            return 0.0;
        }
        2.0 * (v[0] * v[3] - v[1] * v[2]).norm()
    }
}

/// Measures every mode of `circ` applied to each `basis` ket tensored with
/// `ancilla`, and groups the resulting bras up to phase.
pub fn effective_bras(circ: &Circuit, basis: &[Occupation], ancilla: &PureState) -> Result<Vec<BraGroup>> {
    let mut per_pattern: BTreeMap<Occupation, Vec<Complex64>> = BTreeMap::new();
    for (i, b) in basis.iter().enumerate() {
        let out = circ.apply(&PureState::basis(b.clone()).tensor(ancilla))?;
        for (o, a) in out.terms() {
            per_pattern.entry(o.clone()).or_insert_with(|| vec![Complex64::default(); basis.len()])[i] = *a;
        }
    }
    let mut groups: Vec<BraGroup> = Vec::new();
    for (p, v) in per_pattern {
        let w: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if w < SUPPORT_TOL {
            continue;
        }
        let n: Vec<Complex64> = v.iter().map(|a| a / w.sqrt()).collect();
        let hit = groups.iter_mut().find(|g| {
            let ov: Complex64 = g.bra.iter().zip(&n).map(|(a, b)| a.conj() * b).sum();
            (ov.norm() - 1.0).abs() < 1e-9
        });
        match hit {
            Some(g) => {
                g.patterns.push(p);
                g.weight += w;
            }
            None => groups.push(BraGroup { patterns: vec![p], bra: n, weight: w }),
        }
    }
    Ok(groups)
}

pub fn type2_circuit(side: Side) -> Result<(Circuit, PureState)> {
    let dft3 = TransferMatrix::dft(3)?;
    match side {
        Side::Single => Ok((
            Circuit::new(5).coupler(0.5, 0, 3)?.coupler(0.5, 1, 2)?.multiport(dft3, &[2, 3, 4])?,
            PureState::basis(Occupation::new(vec![1])),
        )),
        Side::Double => Ok((
            Circuit::new(6)
                .coupler(0.5, 0, 3)?
                .coupler(0.5, 1, 2)?
                .multiport(dft3.clone(), &[2, 3, 4])?
                .multiport(dft3, &[5, 0, 1])?,
            PureState::basis(Occupation::new(vec![1, 1])),
        )),
    }
}

fn bra_class(g: &BraGroup) -> Classification {
    let conj: Vec<Complex64> = g.bra.iter().map(|a| a.conj()).collect();
    match encode_dual_rail(&conj, &DualRailPairing::consecutive(2), 4) {
        Ok(s) => classify_residual(&s, &DualRailPairing::consecutive(2)),
        Err(_) => none(),
    }
}

pub fn type2_groups(side: Side) -> Result<Vec<BraGroup>> {
    let (circ, anc) = type2_circuit(side)?;
    let basis: Vec<Occupation> = qubit_basis().into_iter().map(|(_, o)| o).collect();
    effective_bras(&circ, &basis, &anc)
}

pub fn type2_report(side: Side) -> Result<SchemeReport> {
    let groups = type2_groups(side)?;
    let id = match side {
        Side::Single => "type2-single",
        Side::Double => "type2-double",
    };
    let mut r = SchemeReport::new(id);
    let mut total = 0.0;
    let mut bell_score = 0.0;
    for g in &groups {
        let c = bra_class(g);
        let entangled = (g.concurrence() - 1.0).abs() < 1e-9;
        let kind = if entangled {
            "entangled"
        } else if g.concurrence() < 1e-9 {
            "product"
        } else {
            "partial"
        };
        if c.label.is_bell() {
            bell_score += g.weight / 4.0;
        }
        total += g.weight;
        let name = g.patterns.iter().map(|p| p.compact()).collect::<Vec<_>>().join("+");
        r.outcomes.push(PatternOutcome::new(name, g.weight / 4.0, c, entangled).with_kind(kind));
    }
    let p = r.sum_where("pFusionSuccess", |o| o.success);
    r.push_value("bellScore", bell_score);
    r.push_value("totalWeight", total);
    let (expected, want) = match side {
        Side::Single => {
            let mut w = vec![2.0 / 9.0; 6];
            w.extend([0.5, 0.5, 2.0 / 3.0, 1.0]);
            (7.0 / 12.0, w)
        }
        Side::Double => {
            let mut w = vec![4.0 / 9.0; 6];
            w.extend([1.0 / 3.0, 1.0]);
            (2.0 / 3.0, w)
        }
    };
    r.check("pFusionSuccess", expected, p, TOL);
    r.check("totalWeight", 4.0, total, 1e-9);
    let got: Vec<f64> = groups.iter().map(|g| g.weight).collect();
    r.check("weightMultisetDeviation", 0.0, multiset_deviation(&got, &want), 1e-10);
    r.check("completeness", 0.0, povm_completeness(&groups), 1e-9);
    if side == Side::Single {
        r.check("bellScore", 17.0 / 36.0, bell_score, TOL);
        // Relative phases of the entangled groups on span{|01>, |10>}.
        let phases: Vec<f64> = groups
            .iter()
            .filter(|g| g.bra[0].norm() < 1e-9 && (g.concurrence() - 1.0).abs() < 1e-9)
            .map(|g| wrap_phase((g.bra[2] / g.bra[1]).arg()))
            .collect();
        let pi = std::f64::consts::PI;
        r.check("oddPhaseMultisetDeviation", 0.0, multiset_deviation(&phases, &[pi / 3.0, -pi / 3.0, pi]), 1e-9);
    }
    r.notes.push("probabilities are group weights divided by the input dimension".into());
    Ok(r)
}

/// Maps a phase into `(-pi, pi]`, folding `-pi` onto `pi`.
fn wrap_phase(x: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let y = x.rem_euclid(2.0 * pi);
    let y = if y > pi { y - 2.0 * pi } else { y };
    if (y + pi).abs() < 1e-9 { pi } else { y }
}

/// Largest deviation after sorting both lists; infinite on length mismatch.
pub fn multiset_deviation(got: &[f64], want: &[f64]) -> f64 {
    if got.len() != want.len() {
        return f64::INFINITY;
    }
    let mut a = got.to_vec();
    let mut b = want.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `max |sum_g w_g |v_g><v_g| - I|` entrywise.
pub fn povm_completeness(groups: &[BraGroup]) -> f64 {
    let d = groups.first().map_or(0, |g| g.bra.len());
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let s: Complex64 = groups.iter().map(|g| g.bra[i].conj() * g.bra[j] * g.weight).sum();
            let e = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((s - e).norm());
        }
    }
    dev
}

/// Two-photon inputs on modes 0, 1 with one ancilla photon on mode 2, all
/// three modes detected after a three-mode DFT.
pub fn dft3_groups() -> Result<Vec<BraGroup>> {
    let circ = Circuit::new(3).multiport(TransferMatrix::dft(3)?, &[0, 1, 2])?;
    let basis = occupations(2, 2);
    effective_bras(&circ, &basis, &PureState::basis(Occupation::new(vec![1])))
}

pub fn dft3_report() -> Result<SchemeReport> {
    let groups = dft3_groups()?;
    let mut r = SchemeReport::new("dft3-povm");
    let mut weights: Vec<f64> = Vec::new();
    for g in &groups {
        let name = g.patterns.iter().map(|p| p.compact()).collect::<Vec<_>>().join("+");
        r.outcomes.push(PatternOutcome::new(name, g.weight / 3.0, none(), true).with_kind("povm"));
        weights.push(g.weight);
    }
    let mut want = vec![4.0 / 9.0; 6];
    want.push(1.0 / 3.0);
    r.push_value("groups", weights.len() as f64);
    r.check("weightMultisetDeviation", 0.0, multiset_deviation(&weights, &want), 1e-10);
    // Outcomes without a |11> component have the form (|20> + e^{i phi}|02>)/sqrt2.
    let pi = std::f64::consts::PI;
    let noon: Vec<f64> = groups
        .iter()
        .filter(|g| g.bra[1].norm() < 1e-9)
        .map(|g| wrap_phase((g.bra[2] / g.bra[0]).arg()))
        .collect();
    r.check("noonPhaseMultisetDeviation", 0.0, multiset_deviation(&noon, &[pi / 3.0, -pi / 3.0, pi]), 1e-9);
    let l7 = groups.iter().any(|g| (g.bra[1].norm() - 1.0).abs() < 1e-9 && (g.weight - 1.0 / 3.0).abs() < 1e-10);
    r.check("elevenProjectorWeightThird", 1.0, if l7 { 1.0 } else { 0.0 }, 0.0);
    r.check("completeness", 0.0, povm_completeness(&groups), 1e-9);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unboosted() {
        let r = type1_unboosted_report().unwrap();
        assert!(r.all_pass(), "{:?}", r.checks);
    }

    #[test]
    fn boosted_table() {
        let r = type1_boosted_report().unwrap();
        assert!(r.all_pass(), "{:?}", r.checks);
        assert_eq!(r.aggregate("patterns"), Some(42.0));
        assert_eq!(r.aggregate("successPatterns"), Some(30.0));
    }

    #[test]
    fn three_way_fusion() {
        let r = three_way_report().unwrap();
        assert!(r.all_pass(), "{:?}", r.checks);
    }

    #[test]
    fn type2() {
        for side in [Side::Single, Side::Double] {
            let r = type2_report(side).unwrap();
            assert!(r.all_pass(), "{side:?} {:?}", r.checks);
        }
    }

    #[test]
    fn dft3() {
        let r = dft3_report().unwrap();
        assert!(r.all_pass(), "{:?}", r.checks);
    }
}
