//! One PASS/FAIL line per acceptance criterion. Every expected value is
//! either a reference value or recomputed here by an independent route.

mod common;

use std::f64::consts::PI;
use std::io::Write;

use fockline::adaptive::primate::{fock_ghz_with_retry, fock_primate_fuse, fock_to_ghz};
use fockline::adaptive::{
    bleed_closed_form_equal, bleed_two_photons, compare_spatial_temporal, ghz_via_primates, optimize_schedules,
    primate_fuse, primate_to_ghz, BleedSchedule, PrimateSymbol, RetrySchedule,
};
use fockline::fock::{occupations, reference_state, DualRailPairing, Occupation, PureState, Reference, Sign};
use fockline::interferometer::{transition_amplitude, TransferMatrix};
use fockline::measurement::{backpropagate_effective_bra, classify_residual, enumerate_outcomes, verify_completeness, ClassLabel};
use fockline::resources::{
    bleeding_loss, max_stages_under_budget, optimize_primate_transmissivity, table2, LiveProbabilities, LossModel,
    ScheduleFamily,
};
use fockline::schemes::fusion::{self, KrausKind, Side};
use fockline::schemes::{bsg, distill, ghz, SchemeReport};
use num_complex::Complex64;

const EXACT_TOL: f64 = 1e-10;
const FIDELITY_TOL: f64 = 1e-9;
const FIG5_EQUAL_TOL: f64 = 1e-6;
const FIG5_OPTIMAL_TOL: f64 = 2e-4;
const T_STAR_TOL: f64 = 1e-8;
const TABLE_REL_TOL: f64 = 1e-6;

const FIG5_EQUAL: [f64; 20] = [
    0.1875, 0.259259, 0.304688, 0.336, 0.358796, 0.376093, 0.389648, 0.400549, 0.4095, 0.41698, 0.423322, 0.428766,
    0.433491, 0.43763, 0.441284, 0.444535, 0.447445, 0.450066, 0.452438, 0.454595,
];
const FIG5_OPTIMAL: [f64; 20] = [
    0.1875, 0.27051, 0.318029, 0.348983, 0.370812, 0.387058, 0.399634, 0.409665, 0.417856, 0.424673, 0.430437,
    0.435376, 0.439655, 0.443399, 0.446703, 0.449641, 0.45227, 0.454636, 0.456778, 0.458726,
];

struct Outcome {
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Tally {
    ok: bool,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { ok: true, notes: vec![] }
    }

    fn close(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let pass = (got - want).abs() <= tol;
        self.ok &= pass;
        if !pass || self.notes.len() < 6 {
            self.notes.push(format!("{name}={got:.12}{}", if pass { "" } else { " (!)" }));
        }
    }

    fn truth(&mut self, name: &str, pass: bool) {
        self.ok &= pass;
        if !pass {
            self.notes.push(format!("{name} failed"));
        }
    }

    fn done(self) -> Outcome {
        Outcome { pass: self.ok, detail: self.notes.join(", ") }
    }
}

fn agg(r: &SchemeReport, name: &str) -> f64 {
    r.aggregate(name).unwrap_or(f64::NAN)
}

fn occ(v: &[u8]) -> Occupation {
    Occupation::new(v.to_vec())
}

fn c1_bsg_probabilities() -> Outcome {
    let mut t = Tally::new();
    let r = bsg::bsg_standard().unwrap();
    let p = |pat: &str| r.outcomes.iter().find(|o| o.pattern == pat).map_or(0.0, |o| o.probability);
    t.close("p(1100)", p("1100"), 1.0 / 32.0, EXACT_TOL);
    t.close("p(2000)", p("2000"), 3.0 / 64.0, EXACT_TOL);
    t.close("pBell", agg(&r, "pBellTotal"), 3.0 / 16.0, EXACT_TOL);
    t.close("pW", agg(&r, "pWTotal"), 3.0 / 16.0, EXACT_TOL);
    t.close("pTwoPhoton", agg(&r, "pTwoPhoton"), 3.0 / 8.0, EXACT_TOL);
    // Permanent route: sum |<signal, pattern|U|1111 0000>|^2 over signal states.
    let u = bsg::bsg_network(4, 0).unwrap().compose().unwrap();
    let input = occ(&[1, 1, 1, 1, 0, 0, 0, 0]);
    let by_permanent = |pattern: &[u8]| -> f64 {
        occupations(4, 2)
            .iter()
            .map(|s| {
                let full = s.concat(&occ(pattern));
                transition_amplitude(&u, &input, &full).unwrap().norm_sqr()
            })
            .sum()
    };
    t.close("perm p(1100)", by_permanent(&[1, 1, 0, 0]), 1.0 / 32.0, EXACT_TOL);
    t.close("perm p(2000)", by_permanent(&[2, 0, 0, 0]), 3.0 / 64.0, EXACT_TOL);
    t.done()
}

fn reference_for(label: ClassLabel) -> Option<PureState> {
    let r = match label {
        ClassLabel::PhiMinus => Reference::PhiMinus,
        ClassLabel::PsiMinus => Reference::PsiMinus,
        ClassLabel::ChiMinus => Reference::ChiMinus,
        ClassLabel::ChiPlus => Reference::ChiPlus,
        ClassLabel::WType => Reference::W42,
        _ => return None,
    };
    reference_state(r).ok()
}

fn c2_bsg_classification() -> Outcome {
    let mut t = Tally::new();
    let s = bsg::bsg_state().unwrap();
    let (mut bell, mut w) = (0, 0);
    for o in enumerate_outcomes(&s, &[4, 5, 6, 7]).unwrap() {
        if o.pattern.total() != 2 {
            continue;
        }
        let c = classify_residual(&o.residual, &DualRailPairing::consecutive(2));
        match c.label {
            l if l.is_bell() => bell += 1,
            ClassLabel::WType => w += 1,
            _ => {}
        }
        // Rebuild the residual from the reference and its correction.
        let (Some(r), Some(k)) = (reference_for(c.label), c.correction.as_ref()) else {
            t.truth(&format!("correction for {}", o.pattern.compact()), false);
            continue;
        };
        let phases: Vec<(usize, f64)> = k.phase_flips.iter().map(|&m| (m, PI)).collect();
        let rebuilt = r
            .permute_modes(&k.permutation)
            .unwrap()
            .phase_modes(&phases)
            .scaled(Complex64::from_polar(1.0, k.global_phase));
        let dev = rebuilt.distance_max(&o.residual).unwrap();
        t.truth(&format!("rebuild {}", o.pattern.compact()), dev < FIDELITY_TOL);
        t.truth(&format!("fidelity {}", o.pattern.compact()), c.fidelity >= 1.0 - FIDELITY_TOL);
    }
    t.notes.push(format!("bell patterns={bell}, W patterns={w}"));
    t.truth("six Bell patterns", bell == 6);
    t.truth("four W patterns", w == 4);
    t.done()
}

fn c3_h4_completeness() -> Outcome {
    let mut t = Tally::new();
    let h4 = TransferMatrix::hadamard(4).unwrap();
    let basis = occupations(4, 2);
    let family: Vec<_> = basis.iter().map(|p| backpropagate_effective_bra(&h4, p, false).unwrap()).collect();
    let dev = verify_completeness(&family, &basis);
    t.close("POVM deviation", dev, 0.0, FIDELITY_TOL);
    // Row sums of |<p|H|in>|^2 by permanents.
    let mut worst: f64 = 0.0;
    for input in &basis {
        let s: f64 = basis.iter().map(|p| transition_amplitude(&h4, input, p).unwrap().norm_sqr()).sum();
        worst = worst.max((s - 1.0).abs());
    }
    t.close("permanent row sums", worst, 0.0, FIDELITY_TOL);
    t.done()
}

fn c4_distillation() -> Outcome {
    let mut t = Tally::new();
    let s = bsg::bsg_state().unwrap();
    let mut variants = 0;
    for o in enumerate_outcomes(&s, &[4, 5, 6, 7]).unwrap() {
        let c = classify_residual(&o.residual, &DualRailPairing::consecutive(2));
        if c.label != ClassLabel::WType {
            continue;
        }
        variants += 1;
        let d = distill::distill_w42(&o.residual).unwrap();
        t.close(&format!("p[{}]", o.pattern.compact()), d.probability, 1.0 / 3.0, EXACT_TOL);
        let out = classify_residual(&d.output, &DualRailPairing::consecutive(2));
        t.truth("distilled output is Bell", out.label.is_bell() && out.fidelity >= 1.0 - FIDELITY_TOL);
        // A maximally entangled output has a flat spectrum of its symmetric
        // two-photon coefficient matrix; W-type states do not.
        let m = distill::coefficient_matrix(&d.output).unwrap();
        let sv = m.singular_values();
        let nz: Vec<f64> = sv.iter().copied().filter(|x| *x > 1e-9).collect();
        let flat = nz.iter().all(|x| (x - nz[0]).abs() < FIDELITY_TOL);
        t.truth("flat coefficient spectrum", !nz.is_empty() && flat);
    }
    t.truth("four W variants", variants == 4);
    let r = bsg::bsg_with_distillation().unwrap();
    t.close("pBell with distillation", agg(&r, "pBellWithDistillation"), 0.25, EXACT_TOL);
    t.close("3/16 + 3/16 * 1/3", 3.0 / 16.0 + 3.0 / 16.0 / 3.0, 0.25, EXACT_TOL);
    t.done()
}

fn c5_boosted() -> Outcome {
    let mut t = Tally::new();
    let four = bsg::bsg_boosted(4).unwrap();
    let two = bsg::bsg_boosted(2).unwrap();
    t.close("four ancillae", agg(&four, "pBellLikeTotal"), 7.0 / 32.0, EXACT_TOL);
    t.close("two ancillae", agg(&two, "pBellLikeTotal"), 13.0 / 64.0, EXACT_TOL);
    t.close("efficiency(4)", agg(&four, "discriminatorEfficiency"), 0.75, EXACT_TOL);
    t.close("efficiency(2)", agg(&two, "discriminatorEfficiency"), 0.625, EXACT_TOL);
    for r in [&four, &two] {
        t.close("norm", r.total_probability(), 1.0, EXACT_TOL);
    }
    t.done()
}

fn c6_eight_photon() -> Outcome {
    let mut t = Tally::new();
    let r = bsg::bsg_8photon().unwrap();
    t.close("pSuccess", agg(&r, "pSuccess"), 0.25, EXACT_TOL);
    let s = bsg::bsg_network(4, 0).unwrap().apply(&PureState::basis(occ(&[1; 8]))).unwrap();
    let mut six = 0;
    let mut p = 0.0;
    for o in enumerate_outcomes(&s, &[4, 5, 6, 7]).unwrap() {
        if o.pattern.total() != 6 {
            continue;
        }
        six += 1;
        p += o.probability;
        let (fixed, _) = bsg::correct_bunched(&o.residual).unwrap();
        let c = classify_residual(&fixed, &DualRailPairing::consecutive(2));
        t.truth(&format!("correct {}", o.pattern.compact()), c.label.is_bell() && c.fidelity >= 1.0 - FIDELITY_TOL);
    }
    t.close("six-photon probability", p, 0.25, EXACT_TOL);
    t.notes.push(format!("six-photon patterns={six}"));
    t.done()
}

fn c7_random_inputs() -> Outcome {
    let mut t = Tally::new();
    for mask in 0u8..16 {
        let bits: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
        let r = bsg::bsg_random_input(&bits).unwrap();
        t.close(&format!("mask {mask:04b}"), agg(&r, "pBellTotal"), 3.0 / 16.0, EXACT_TOL);
    }
    let (mut high, mut low) = (0, 0);
    for a in 1..=8usize {
        for b in a + 1..=8 {
            for c in b + 1..=8 {
                for d in c + 1..=8 {
                    let modes = [a, b, c, d];
                    let xor_zero = (a - 1) ^ (b - 1) ^ (c - 1) ^ (d - 1) == 0;
                    let want = if xor_zero { 3.0 / 16.0 } else { 3.0 / 32.0 };
                    let got = agg(&bsg::bsg_h8_random(&modes).unwrap(), "pBellTotal");
                    t.close(&format!("h8 {modes:?}"), got, want, EXACT_TOL);
                    if xor_zero {
                        high += 1;
                    } else {
                        low += 1;
                    }
                }
            }
        }
    }
    t.notes.push(format!("h8 choices: {high} at 3/16, {low} at 3/32"));
    t.truth("70 choices", high + low == 70);
    t.done()
}

fn c8_bleeding() -> Outcome {
    let mut t = Tally::new();
    let mut worst_equal: f64 = 0.0;
    for (i, want) in FIG5_EQUAL.iter().enumerate() {
        worst_equal = worst_equal.max((bleed_closed_form_equal(i + 1) / 2.0 - want).abs());
    }
    t.close("equal spread vs figure", worst_equal, 0.0, FIG5_EQUAL_TOL);
    let mut worst_tree: f64 = 0.0;
    for s in 1..=10 {
        let tree = bleed_two_photons(&BleedSchedule::equal_spread(s).unwrap()).unwrap();
        worst_tree = worst_tree.max((tree.p_two_photon - bleed_closed_form_equal(s)).abs());
        worst_tree = worst_tree.max((tree.total_probability - 1.0).abs());
    }
    t.close("tree vs closed form", worst_tree, 0.0, EXACT_TOL);
    let opt = optimize_schedules(20).unwrap();
    let mut worst_opt: f64 = 0.0;
    for (o, want) in opt.iter().zip(FIG5_OPTIMAL) {
        worst_opt = worst_opt.max((o.p_two_photon / 2.0 - want).abs());
    }
    t.close("optimal vs figure", worst_opt, 0.0, FIG5_OPTIMAL_TOL);
    let p20 = opt[19].p_two_photon / 2.0;
    t.truth("pBell(20) * 2/3 >= 0.30", p20 * 2.0 / 3.0 >= 0.30);
    // With distillation every two-photon herald converts with 1/2 + 1/2 * 1/3.
    let tree = bleed_two_photons(&opt[19].schedule).unwrap();
    t.close("distilled/two-photon at S=20", tree.p_bell_with_distill / tree.p_two_photon, 2.0 / 3.0, EXACT_TOL);
    t.notes.push(format!("pBell(20)*2/3={:.6}, with distillation {:.6}", p20 * 2.0 / 3.0, tree.p_bell_with_distill));
    t.done()
}

fn c9_spatial() -> Outcome {
    let mut t = Tally::new();
    for s in 1..=4 {
        let c = compare_spatial_temporal(s).unwrap();
        t.close(&format!("S={s} dp"), (c.p_spatial - c.p_temporal).abs(), 0.0, EXACT_TOL);
        t.close(&format!("S={s} trace dev"), c.max_trace_deviation, 0.0, EXACT_TOL);
        t.truth(&format!("S={s} classes"), c.classes_match);
        t.truth(&format!("S={s} states"), c.min_state_fidelity >= 1.0 - FIDELITY_TOL);
    }
    t.done()
}

fn c10_loss() -> Outcome {
    let mut t = Tally::new();
    let eps = 0.01;
    for s in [1, 2, 10, 100] {
        let l = bleeding_loss(&LossModel::new(eps, BleedSchedule::constant(s).unwrap()).unwrap());
        t.close(&format!("constant S={s}"), l, eps / 4.0, 1e-15);
    }
    let s1 = max_stages_under_budget(eps, ScheduleFamily::EqualSpread).unwrap();
    t.notes.push(format!("S1={s1:?}"));
    t.truth("S1 = 81", s1 == Some(81));
    // Harmonic oracle: L(S) = (eps/4)(H_{S+1} - 1).
    let h = |n: usize| (1..=n).map(|k| 1.0 / k as f64).sum::<f64>();
    let last_ok = (1..200).take_while(|&s| (h(s + 1) - 1.0) / 4.0 <= 1.0).last();
    t.truth("harmonic oracle", last_ok == Some(81));
    t.truth("constant unbounded", max_stages_under_budget(eps, ScheduleFamily::Constant).unwrap().is_none());
    t.done()
}

fn c11_ghz() -> Outcome {
    let mut t = Tally::new();
    for (n, want) in [(2, 1.0 / 8.0), (3, 1.0 / 32.0), (4, 1.0 / 128.0)] {
        t.close(&format!("GHZ{n}"), agg(&ghz::ghz_generator(n).unwrap(), "pSuccess"), want, EXACT_TOL);
    }
    for (n, want) in [(2, 0.5), (3, 0.25)] {
        t.close(&format!("bleeding GHZ{n}"), ghz_via_primates(n, &RetrySchedule::Limit).unwrap(), want, EXACT_TOL);
    }
    // Finite retry trees simulated on Fock states agree with the symbolic
    // recursion whose limit is taken above.
    let taps = [0.1, 0.2, 0.3, 0.5, 1.0];
    for n in [2, 3] {
        let sym = ghz_via_primates(n, &RetrySchedule::Stages(taps.to_vec())).unwrap();
        let fock = fock_ghz_with_retry(n, &taps).unwrap();
        t.close(&format!("retry tree GHZ{n} |sym-fock|"), (sym - fock).abs(), 0.0, EXACT_TOL);
    }
    t.done()
}

fn c12_primates() -> Outcome {
    let mut t = Tally::new();
    let grid = [0.2, 0.4, 0.6, 0.8, 1.0];
    let ts = [0.1, 0.3, 0.5, 0.7, 0.9];
    let sym = |l: f64| PrimateSymbol::new(1, l, Sign::Minus).unwrap();
    let mut worst: f64 = 0.0;
    for &l1 in &grid {
        for &l2 in &grid {
            for &tt in &ts {
                let (p, out) = primate_fuse(&sym(l1), &sym(l2), tt).unwrap();
                let (pf, per) = fock_primate_fuse(&sym(l1), &sym(l2), tt).unwrap();
                worst = worst.max((p - pf).abs());
                for (_, w, _) in per {
                    worst = worst.max((w - out.lambda).abs());
                }
            }
            let pg = primate_to_ghz(&sym(l1), &sym(l2)).unwrap();
            let (pgf, fid) = fock_to_ghz(&sym(l1).state().unwrap(), 1, &sym(l2).state().unwrap(), 1).unwrap();
            worst = worst.max((pg - l1 * l2 / 8.0).abs()).max((pgf - l1 * l2 / 8.0).abs());
            t.truth("GHZ fidelity", fid >= 1.0 - FIDELITY_TOL);
        }
    }
    t.close("symbolic vs Fock grid", worst, 0.0, EXACT_TOL);
    // 2-primates with their genuine junk part, fused into a 4-GHZ state.
    let ts2 = 2f64.sqrt() - 1.0;
    let one = sym(1.0).state().unwrap();
    let pair = one.tensor(&one);
    let joins = fockline::schemes::ghz::fusion_gate(&pair, 1, 2, ts2).unwrap();
    let lam = 1.0 / (1.0 + ts2 * ts2);
    let mut worst2: f64 = 0.0;
    for a in &joins {
        for b in &joins {
            let (p, fid) = fock_to_ghz(&a.residual, 2, &b.residual, 2).unwrap();
            worst2 = worst2.max((p - lam * lam / 8.0).abs());
            t.truth("4-GHZ fidelity", fid >= 1.0 - FIDELITY_TOL);
        }
    }
    t.close("p_G on genuine 2-primates", worst2, 0.0, EXACT_TOL);
    let opt = optimize_primate_transmissivity().unwrap();
    t.close("t*", opt.t_star, ts2, T_STAR_TOL);
    let live = LiveProbabilities::compute(opt.t_star).unwrap();
    let plans = table2(&live).unwrap();
    let want = [1024.0, 448.0, 320.0, 128.0 * (1.0 + 2f64.sqrt())];
    for (p, w) in plans.iter().zip(want) {
        t.close(&format!("table {}", p.exact), (p.total - w).abs() / w, 0.0, TABLE_REL_TOL);
    }
    t.done()
}

fn c13_type1() -> Outcome {
    let mut t = Tally::new();
    t.close("unboosted", agg(&fusion::type1_unboosted_report().unwrap(), "pSuccess"), 0.5, EXACT_TOL);
    let b = fusion::type1_boosted_report().unwrap();
    t.close("boosted", agg(&b, "pSuccess"), 0.75, EXACT_TOL);
    t.close("boosted odd", agg(&b, "pParityOdd"), 0.5, EXACT_TOL);
    t.close("boosted even", agg(&b, "pParityEven"), 0.25, EXACT_TOL);
    t.truth("boosted report checks", b.all_pass());
    // The pattern count covers every Kraus operator, failures included.
    let table = fusion::type1_pattern_table(true).unwrap();
    let total = table.len();
    let success = table.iter().filter(|(_, _, k)| k.is_success()).count();
    let kinds = [KrausKind::K1, KrausKind::K2, KrausKind::K3, KrausKind::K4, KrausKind::K5];
    t.truth("every operator has patterns", kinds.iter().all(|k| table.iter().any(|(_, _, x)| x == k)));
    t.truth("no unclassified", table.iter().all(|(_, _, k)| *k != KrausKind::Unclassified));
    t.truth("42 detection patterns", total == 42);
    let ps: f64 = table.iter().filter(|(_, _, k)| k.is_success()).map(|(_, p, _)| p).sum();
    t.close("success from table", ps, 0.75, EXACT_TOL);
    t.notes.push(format!("patterns={total}, success patterns={success}"));
    t.close("three-way", fusion::three_way(true).unwrap(), 9.0 / 16.0, EXACT_TOL);
    t.done()
}

fn sorted_dev(mut got: Vec<f64>, mut want: Vec<f64>) -> f64 {
    if got.len() != want.len() {
        return f64::INFINITY;
    }
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn c14_type2() -> Outcome {
    let mut t = Tally::new();
    let single = fusion::type2_report(Side::Single).unwrap();
    let double = fusion::type2_report(Side::Double).unwrap();
    t.close("single", agg(&single, "pFusionSuccess"), 7.0 / 12.0, EXACT_TOL);
    t.close("double", agg(&double, "pFusionSuccess"), 2.0 / 3.0, EXACT_TOL);
    let n = 2.0 / 9.0;
    let m_want = vec![n, n, n, 2.0 / 3.0, 1.0, n, n, n, 0.5, 0.5];
    let mut l_want = vec![4.0 / 9.0; 6];
    l_want.push(1.0 / 3.0);
    let m_got: Vec<f64> = fusion::type2_groups(Side::Single).unwrap().iter().map(|g| g.weight).collect();
    let l_got: Vec<f64> = fusion::type2_groups(Side::Double).unwrap().iter().map(|g| g.weight).collect();
    t.close("M multiset", sorted_dev(m_got, m_want), 0.0, EXACT_TOL);
    // Completeness fixes the one weight left out of the listed L weights.
    l_want.push(4.0 - l_want.iter().sum::<f64>());
    t.close("L multiset", sorted_dev(l_got, l_want), 0.0, EXACT_TOL);
    let score = agg(&single, "bellScore");
    t.truth("Bell score < 1/2", score < 0.5);
    t.notes.push(format!("bellScore={score:.6}"));
    t.done()
}

fn c15_oracles() -> Outcome {
    let mut t = Tally::new();
    let mut rng = common::seeded(0x5eed);
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..200 {
        let case = common::random_case(&mut rng, 5, 4);
        worst = worst.max(common::evolution_vs_permanent(&case));
        let s = case.circuit.apply(&PureState::basis(case.input.clone())).unwrap();
        let m = s.modes();
        let measured: Vec<usize> = (0..m).filter(|i| i % 2 == 0).collect();
        let total: f64 = enumerate_outcomes(&s, &measured).unwrap().iter().map(|o| o.probability).sum();
        worst_sum = worst_sum.max((total - 1.0).abs());
    }
    t.close("evolution vs permanent", worst, 0.0, EXACT_TOL);
    t.close("enumeration sums", worst_sum, 0.0, EXACT_TOL);
    t.done()
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("BSG pattern probabilities", c1_bsg_probabilities),
        ("BSG output classification", c2_bsg_classification),
        ("H4 POVM completeness", c3_h4_completeness),
        ("W distillation", c4_distillation),
        ("boosted BSG", c5_boosted),
        ("8-photon BSG", c6_eight_photon),
        ("random-input and H8 BSG", c7_random_inputs),
        ("bleeding", c8_bleeding),
        ("spatial vs temporal bleeding", c9_spatial),
        ("loss accounting", c10_loss),
        ("GHZ generators", c11_ghz),
        ("primates and resources", c12_primates),
        ("Type-I fusion", c13_type1),
        ("Type-II fusion", c14_type2),
        ("oracle properties", c15_oracles),
    ];
    let mut failed = vec![];
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        // Written to the raw handle so the lines survive libtest capture.
        let line = format!("{} {:>2} {name}: {}\n", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        std::io::stdout().write_all(line.as_bytes()).unwrap();
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
