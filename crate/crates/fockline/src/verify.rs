//! Acceptance checklist, one entry per criterion.

use serde::Serialize;

use crate::adaptive::{
    bleed_closed_form_equal, bleed_two_photons, compare_spatial_temporal, ghz_via_primates, optimize_schedules,
    primate::{fock_primate_fuse, fock_to_ghz},
    primate_fuse, BleedSchedule, PrimateSymbol, RetrySchedule,
};
use crate::error::Result;
use crate::fock::{occupations, DualRailPairing, Occupation, PureState, Sign};
use crate::interferometer::{transition_amplitude, Circuit, TransferMatrix};
use crate::measurement::{backpropagate_effective_bra, classify_residual, enumerate_outcomes, verify_completeness, ClassLabel};
use crate::resources::{
    bleeding_loss, max_stages_under_budget, optimize_primate_transmissivity, table2, LiveProbabilities, LossModel,
    ScheduleFamily,
};
use crate::schemes::fusion::{self, Side};
use crate::schemes::{bsg, distill, ghz, SchemeReport, TargetCheck};

pub const EXACT_TOL: f64 = 1e-10;
pub const FIDELITY_TOL: f64 = 1e-9;

/// Reference two-photon Bell curves `pBell = p/2` for `S = 1..20`.
pub const FIG5_EQUAL: [f64; 20] = [
    0.1875, 0.259259, 0.304688, 0.336, 0.358796, 0.376093, 0.389648, 0.400549, 0.4095, 0.41698, 0.423322, 0.428766,
    0.433491, 0.43763, 0.441284, 0.444535, 0.447445, 0.450066, 0.452438, 0.454595,
];
pub const FIG5_OPTIMAL: [f64; 20] = [
    0.1875, 0.27051, 0.318029, 0.348983, 0.370812, 0.387058, 0.399634, 0.409665, 0.417856, 0.424673, 0.430437,
    0.435376, 0.439655, 0.443399, 0.446703, 0.449641, 0.45227, 0.454636, 0.456778, 0.458726,
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub checks: Vec<TargetCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

type Checks = Vec<TargetCheck>;

fn chk(v: &mut Checks, name: impl Into<String>, expected: f64, measured: f64, tol: f64) {
    v.push(TargetCheck::new(name, expected, measured, tol));
}

fn flag(v: &mut Checks, name: impl Into<String>, ok: bool) {
    chk(v, name, 1.0, if ok { 1.0 } else { 0.0 }, 0.0);
}

fn agg(r: &SchemeReport, name: &str) -> f64 {
    r.aggregate(name).unwrap_or(f64::NAN)
}

fn absorb(v: &mut Checks, r: &SchemeReport) {
    for c in &r.checks {
        let mut c = c.clone();
        c.name = format!("{}.{}", r.scheme_id, c.name);
        v.push(c);
    }
}

fn c1() -> Result<Checks> {
    let mut v = vec![];
    absorb(&mut v, &bsg::bsg_standard()?);
    Ok(v)
}

fn c2() -> Result<Checks> {
    let mut v = vec![];
    let s = bsg::bsg_state()?;
    let (mut bell, mut w) = (0, 0);
    for o in enumerate_outcomes(&s, &[4, 5, 6, 7])?.into_iter().filter(|o| o.pattern.total() == 2) {
        let c = classify_residual(&o.residual, &DualRailPairing::consecutive(2));
        if c.label.is_bell() {
            bell += 1;
        } else if c.label == ClassLabel::WType {
            w += 1;
        }
        flag(&mut v, format!("{}.corrected", o.pattern.compact()), c.correction.is_some());
        chk(&mut v, format!("{}.fidelity", o.pattern.compact()), 1.0, c.fidelity, FIDELITY_TOL);
    }
    chk(&mut v, "bellPatterns", 6.0, bell as f64, 0.0);
    chk(&mut v, "wPatterns", 4.0, w as f64, 0.0);
    Ok(v)
}

fn c3() -> Result<Checks> {
    let h4 = TransferMatrix::hadamard(4)?;
    let basis = occupations(4, 2);
    let fam = basis.iter().map(|p| backpropagate_effective_bra(&h4, p, false)).collect::<Result<Vec<_>>>()?;
    let mut v = vec![];
    chk(&mut v, "completenessDeviation", 0.0, verify_completeness(&fam, &basis), FIDELITY_TOL);
    Ok(v)
}

fn c4() -> Result<Checks> {
    let mut v = vec![];
    absorb(&mut v, &distill::distill_report()?);
    absorb(&mut v, &bsg::bsg_with_distillation()?);
    Ok(v)
}

fn c5() -> Result<Checks> {
    let mut v = vec![];
    absorb(&mut v, &bsg::bsg_boosted(4)?);
    absorb(&mut v, &bsg::bsg_boosted(2)?);
    Ok(v)
}

fn c6() -> Result<Checks> {
    let mut v = vec![];
    absorb(&mut v, &bsg::bsg_8photon()?);
    Ok(v)
}

fn c7() -> Result<Checks> {
    let mut v = vec![];
    for mask in 0u8..16 {
        let bits: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
        chk(&mut v, format!("mask{mask:04b}"), 3.0 / 16.0, agg(&bsg::bsg_random_input(&bits)?, "pBellTotal"), EXACT_TOL);
    }
    for a in 1..=8usize {
        for b in a + 1..=8 {
            for c in b + 1..=8 {
                for d in c + 1..=8 {
                    let m = [a, b, c, d];
                    let want = if bsg::h8_xor_rule(&m) { 3.0 / 16.0 } else { 3.0 / 32.0 };
                    chk(&mut v, format!("h8{m:?}"), want, agg(&bsg::bsg_h8_random(&m)?, "pBellTotal"), EXACT_TOL);
                }
            }
        }
    }
    Ok(v)
}

fn c8() -> Result<Checks> {
    let mut v = vec![];
    for (i, want) in FIG5_EQUAL.iter().enumerate() {
        chk(&mut v, format!("equal[{}]", i + 1), *want, bleed_closed_form_equal(i + 1) / 2.0, 1e-6);
    }
    for s in 1..=10 {
        let tree = bleed_two_photons(&BleedSchedule::equal_spread(s)?)?;
        chk(&mut v, format!("tree[{s}]"), bleed_closed_form_equal(s), tree.p_two_photon, EXACT_TOL);
    }
    let opt = optimize_schedules(20)?;
    for (o, want) in opt.iter().zip(FIG5_OPTIMAL) {
        chk(&mut v, format!("optimal[{}]", o.schedule.stages()), want, o.p_two_photon / 2.0, 2e-4);
    }
    flag(&mut v, "pBell(20)*2/3>=0.30", opt[19].p_two_photon / 2.0 * 2.0 / 3.0 >= 0.30);
    Ok(v)
}

fn c9() -> Result<Checks> {
    let mut v = vec![];
    for s in 1..=4 {
        let c = compare_spatial_temporal(s)?;
        chk(&mut v, format!("S{s}.probability"), c.p_temporal, c.p_spatial, EXACT_TOL);
        chk(&mut v, format!("S{s}.traceDeviation"), 0.0, c.max_trace_deviation, EXACT_TOL);
        flag(&mut v, format!("S{s}.classes"), c.classes_match);
    }
    Ok(v)
}

fn c10() -> Result<Checks> {
    let mut v = vec![];
    let eps = 0.01;
    for s in [1, 10, 100] {
        let l = bleeding_loss(&LossModel::new(eps, BleedSchedule::constant(s)?)?);
        chk(&mut v, format!("constant[{s}]"), eps / 4.0, l, 1e-15);
    }
    let s1 = max_stages_under_budget(eps, ScheduleFamily::EqualSpread)?;
    chk(&mut v, "S1", 81.0, s1.map_or(f64::NAN, |x| x as f64), 0.0);
    Ok(v)
}

fn c11() -> Result<Checks> {
    let mut v = vec![];
    for n in 2..=4 {
        absorb(&mut v, &ghz::ghz_generator(n)?);
    }
    for (n, want) in [(2, 0.5), (3, 0.25)] {
        chk(&mut v, format!("bleedingGhz{n}"), want, ghz_via_primates(n, &RetrySchedule::Limit)?, EXACT_TOL);
    }
    Ok(v)
}

fn c12() -> Result<Checks> {
    let mut v = vec![];
    let grid = [0.2, 0.4, 0.6, 0.8, 1.0];
    let unit = |l: f64| PrimateSymbol::new(1, l, Sign::Minus);
    let mut worst: f64 = 0.0;
    for &l1 in &grid {
        for &l2 in &grid {
            for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
                let (p, out) = primate_fuse(&unit(l1)?, &unit(l2)?, t)?;
                let (pf, per) = fock_primate_fuse(&unit(l1)?, &unit(l2)?, t)?;
                worst = worst.max((p - pf).abs());
                for (_, w, _) in per {
                    worst = worst.max((w - out.lambda).abs());
                }
            }
            let (pg, _) = fock_to_ghz(&unit(l1)?.state()?, 1, &unit(l2)?.state()?, 1)?;
            worst = worst.max((pg - l1 * l2 / 8.0).abs());
        }
    }
    chk(&mut v, "symbolicVsFock", 0.0, worst, EXACT_TOL);
    let opt = optimize_primate_transmissivity()?;
    chk(&mut v, "tStar", 2f64.sqrt() - 1.0, opt.t_star, 1e-8);
    let want = [1024.0, 448.0, 320.0, 128.0 * (1.0 + 2f64.sqrt())];
    for (p, w) in table2(&LiveProbabilities::compute(opt.t_star)?)?.iter().zip(want) {
        chk(&mut v, format!("table2[{}]", p.exact), w, p.total, 1e-6 * w);
    }
    Ok(v)
}

fn c13() -> Result<Checks> {
    let mut v = vec![];
    absorb(&mut v, &fusion::type1_unboosted_report()?);
    absorb(&mut v, &fusion::type1_boosted_report()?);
    absorb(&mut v, &fusion::three_way_report()?);
    let table = fusion::type1_pattern_table(true)?;
    chk(&mut v, "detectionPatterns", 42.0, table.len() as f64, 0.0);
    Ok(v)
}

fn c14() -> Result<Checks> {
    let mut v = vec![];
    let single = fusion::type2_report(Side::Single)?;
    flag(&mut v, "bellScore<1/2", agg(&single, "bellScore") < 0.5);
    absorb(&mut v, &single);
    absorb(&mut v, &fusion::type2_report(Side::Double)?);
    Ok(v)
}

/// Random circuits from a fixed linear congruential stream.
fn c15() -> Result<Checks> {
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..200 {
        let m = 2 + (next() * 4.0) as usize;
        let mut c = Circuit::new(m);
        for _ in 0..1 + (next() * 8.0) as usize {
            let a = (next() * m as f64) as usize;
            let b = (a + 1 + (next() * (m - 1) as f64) as usize) % m;
            c = if next() < 0.7 { c.coupler(next(), a, b)? } else { c.phase(6.3 * next() - 3.15, a)? };
        }
        let mut occ = vec![0u8; m];
        for _ in 0..1 + (next() * 4.0) as usize {
            occ[(next() * m as f64) as usize] += 1;
        }
        let input = Occupation::new(occ);
        let s = c.apply(&PureState::basis(input.clone()))?;
        let u = c.compose()?;
        for out in occupations(m, input.total()) {
            worst = worst.max((s.amplitude(&out) - transition_amplitude(&u, &input, &out)?).norm());
        }
        let measured: Vec<usize> = (0..m).step_by(2).collect();
        let total: f64 = enumerate_outcomes(&s, &measured)?.iter().map(|o| o.probability).sum();
        worst_sum = worst_sum.max((total - 1.0).abs());
    }
    let mut v = vec![];
    chk(&mut v, "evolutionVsPermanent", 0.0, worst, EXACT_TOL);
    chk(&mut v, "enumerationSums", 0.0, worst_sum, EXACT_TOL);
    Ok(v)
}

type CheckFn = fn() -> Result<Checks>;

pub const CRITERIA: [(&str, CheckFn); 15] = [
    ("BSG pattern probabilities", c1),
    ("BSG output classification", c2),
    ("H4 POVM completeness", c3),
    ("W distillation", c4),
    ("boosted BSG", c5),
    ("8-photon BSG", c6),
    ("random-input and H8 BSG", c7),
    ("bleeding", c8),
    ("spatial vs temporal bleeding", c9),
    ("loss accounting", c10),
    ("GHZ generators", c11),
    ("primates and resources", c12),
    ("Type-I fusion", c13),
    ("Type-II fusion", c14),
    ("oracle properties", c15),
];

/// Runs every criterion, independent ones on separate threads. A criterion
/// that errors is reported as failed with the error attached.
pub fn run_all() -> Vec<CriterionResult> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .enumerate()
            .map(|(i, (name, f))| {
                scope.spawn(move || {
                    let (checks, error) = match f() {
                        Ok(c) => (c, None),
                        Err(e) => (vec![], Some(e.to_string())),
                    };
                    let pass = error.is_none() && !checks.is_empty() && checks.iter().all(|c| c.pass);
                    CriterionResult { id: i + 1, name, pass, checks, error }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    })
}
