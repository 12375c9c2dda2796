//! Loss budgets for bleeding, photon costs of perfectly efficient
//! multiplexing, and the primate transmissivity that minimizes that cost.

use serde::Serialize;

use crate::adaptive::{primate_fuse, primate_to_ghz, BleedSchedule, PrimateSymbol};
use crate::error::{Error, Result};
use crate::fock::Sign;
use crate::schemes::{fusion, ghz};

/// First-order switch loss: a coupler of reflectivity `r` loses `r eps / 4`.
#[derive(Clone, Debug, Serialize)]
pub struct LossModel {
    pub epsilon: f64,
    pub schedule: BleedSchedule,
}

impl LossModel {
    pub fn new(epsilon: f64, schedule: BleedSchedule) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!("loss rate {epsilon} outside [0,1)")));
        }
        Ok(LossModel { epsilon, schedule })
    }
}

/// `L(S) = (eps/4) sum_k r_k`.
pub fn bleeding_loss(model: &LossModel) -> f64 {
    model.epsilon / 4.0 * model.schedule.reflectivities().iter().sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleFamily {
    EqualSpread,
    Constant,
}

impl ScheduleFamily {
    pub fn schedule(self, stages: usize) -> Result<BleedSchedule> {
        match self {
            ScheduleFamily::EqualSpread => BleedSchedule::equal_spread(stages),
            ScheduleFamily::Constant => BleedSchedule::constant(stages),
        }
    }
}

/// Search cap for [`max_stages_under_budget`].
pub const MAX_STAGE_SEARCH: usize = 10_000;

/// Largest `S` with `L(S) <= eps`, by direct summation. `None` means the
/// budget holds for every `S` up to the search cap.
pub fn max_stages_under_budget(epsilon: f64, family: ScheduleFamily) -> Result<Option<usize>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("loss rate {epsilon} outside (0,1)")));
    }
    for s in 1..=MAX_STAGE_SEARCH {
        let l = bleeding_loss(&LossModel::new(epsilon, family.schedule(s)?)?);
        if l > epsilon {
            return Ok(Some(s - 1));
        }
    }
    Ok(None)
}

/// One multiplexed stage: inputs are fresh photons plus the outputs of the
/// child stages, and the stage is repeated until it succeeds.
#[derive(Clone, Debug, Serialize)]
pub struct MuxStage {
    pub label: String,
    pub photons: usize,
    pub children: Vec<MuxStage>,
    pub success_probability: f64,
    pub input_cost: f64,
    pub output_cost: f64,
}

impl MuxStage {
    pub fn new(label: impl Into<String>, photons: usize, children: Vec<MuxStage>, p0: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0 <= 1.0) {
            return Err(Error::InvalidParameter(format!("success probability {p0} outside (0,1]")));
        }
        let input_cost = photons as f64 + children.iter().map(|c| c.output_cost).sum::<f64>();
        Ok(MuxStage {
            label: label.into(),
            photons,
            children,
            success_probability: p0,
            input_cost,
            output_cost: input_cost / p0,
        })
    }

    /// Checks `N' = N/p0` at every node.
    pub fn consistent(&self) -> bool {
        let n = self.photons as f64 + self.children.iter().map(|c| c.output_cost).sum::<f64>();
        (self.input_cost - n).abs() <= 1e-12 * n
            && (self.output_cost - n / self.success_probability).abs() <= 1e-12 * self.output_cost
            && self.children.iter().all(MuxStage::consistent)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MuxCostPlan {
    pub scheme: String,
    /// Closed form of the total where one exists.
    pub exact: String,
    pub root: MuxStage,
    pub total: f64,
}

impl MuxCostPlan {
    fn new(scheme: &str, exact: &str, root: MuxStage) -> Self {
        MuxCostPlan { scheme: scheme.into(), exact: exact.into(), total: root.output_cost, root }
    }
}

/// Success probabilities feeding the cost table, taken from the simulators.
#[derive(Clone, Debug, Serialize)]
pub struct LiveProbabilities {
    /// GHZ generator from `2n` single photons, indexed by `n - 2` for `n = 2, 3, 4`.
    pub ghz: [f64; 3],
    /// Unboosted Type-I fusion.
    pub type1: f64,
    /// Transmission used to join two 1-primates.
    pub primate_t: f64,
    /// Join of two 1-primates at `primate_t`.
    pub primate_join: f64,
    /// Two joined 2-primates converted to a 4-GHZ state.
    pub primate_ghz: f64,
}

impl LiveProbabilities {
    pub fn compute(primate_t: f64) -> Result<Self> {
        let mut g = [0.0; 3];
        for (k, slot) in g.iter_mut().enumerate() {
            *slot = aggregate(ghz::ghz_generator(k + 2)?, "pSuccess")?;
        }
        let type1 = aggregate(fusion::type1_unboosted_report()?, "pSuccess")?;
        let (join, ghz4) = primate_costs(primate_t)?;
        Ok(LiveProbabilities { ghz: g, type1, primate_t, primate_join: join, primate_ghz: ghz4 })
    }

    pub fn ghz(&self, n: usize) -> f64 {
        self.ghz[n - 2]
    }
}

fn aggregate(r: crate::schemes::SchemeReport, name: &str) -> Result<f64> {
    r.aggregate(name).ok_or_else(|| Error::Precondition(format!("report {} lacks {name}", r.scheme_id)))
}

/// `(p_join(1,1,t), p_G(l', l'))` for the primate route.
fn primate_costs(t: f64) -> Result<(f64, f64)> {
    let unit = PrimateSymbol::new(1, 1.0, Sign::Minus)?;
    let (p, two) = primate_fuse(&unit, &unit, t)?;
    Ok((p, primate_to_ghz(&two, &two)?))
}

fn ghz_source(n: usize, live: &LiveProbabilities) -> Result<MuxStage> {
    MuxStage::new(format!("GHZ{n} from {} photons", 2 * n), 2 * n, vec![], live.ghz(n))
}

fn type1(label: &str, a: MuxStage, b: MuxStage, live: &LiveProbabilities) -> Result<MuxStage> {
    MuxStage::new(label, 0, vec![a, b], live.type1)
}

fn two_primate(live: &LiveProbabilities) -> Result<MuxStage> {
    MuxStage::new("2-primate from 4 photons", 4, vec![], live.primate_join)
}

/// The four routes to a 4-GHZ state.
pub fn table2(live: &LiveProbabilities) -> Result<Vec<MuxCostPlan>> {
    let direct = ghz_source(4, live)?;
    let merged = type1("GHZ4 = GHZ3 + GHZ2", ghz_source(3, live)?, ghz_source(2, live)?, live)?;
    let three = type1("GHZ3 = GHZ2 + GHZ2", ghz_source(2, live)?, ghz_source(2, live)?, live)?;
    let chained = type1("GHZ4 = GHZ3 + GHZ2", three, ghz_source(2, live)?, live)?;
    let primates = MuxStage::new("GHZ4 from two 2-primates", 0, vec![two_primate(live)?, two_primate(live)?], live.primate_ghz)?;
    Ok(vec![
        MuxCostPlan::new("8 photons -> GHZ4", "1024", direct),
        MuxCostPlan::new("10 photons -> GHZ2 GHZ3 -> GHZ4", "448", merged),
        MuxCostPlan::new("12 photons -> GHZ2^3 -> GHZ3 GHZ2 -> GHZ4", "320", chained),
        MuxCostPlan::new("8 photons -> 2-primate^2 -> GHZ4", "128(1+sqrt2)", primates),
    ])
}

/// `N(t) = 64 (1+t^2)/(t-t^2)`.
pub fn primate_cost_symbolic(t: f64) -> f64 {
    64.0 * (1.0 + t * t) / (t - t * t)
}

/// `N(t) = 2 N_2(t) / p_G(l', l')` assembled from the fusion functions.
pub fn primate_cost_compositional(t: f64) -> Result<f64> {
    let (join, ghz4) = primate_costs(t)?;
    Ok(2.0 * (4.0 / join) / ghz4)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TransmissivityOptimum {
    pub t_star: f64,
    pub n_star: f64,
}

/// Minimizes the compositional `N(t)` over `(0,1)`: golden-section search to
/// bracket the minimum, then bisection on a central-difference derivative.
pub fn optimize_primate_transmissivity() -> Result<TransmissivityOptimum> {
    let f = |t: f64| primate_cost_compositional(t);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1e-6, 1.0 - 1e-6);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-4 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let h = 1e-6;
    let slope = |t: f64| -> Result<f64> { Ok((f(t + h)? - f(t - h)?) / (2.0 * h)) };
    let (mut lo, mut hi) = (a, b);
    if slope(lo)? > 0.0 || slope(hi)? < 0.0 {
        return Err(Error::Precondition("minimum not bracketed".into()));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if slope(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok(TransmissivityOptimum { t_star: t, n_star: f(t)? })
}
