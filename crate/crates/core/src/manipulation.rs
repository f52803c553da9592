//! Manipulation as an alternative to honest improvement.
//!
//! A manipulating agent inflates its observed similarity as fast as the
//! most diligent honest agent would (effort `k = 1`), pays `(theta - x0)+`
//! and is caught, forfeiting acceptance, with probability `P` over the whole
//! application process.

use crate::agent::{factor_c, optimal_effort, Action, BestResponse, Scenario};
use crate::dynamics::similarity_recurrence;
use crate::error::{Error, Result};
use crate::numeric::bisect;

/// Grid step used when scanning for manipulation regions.
const SCAN_STEP: f64 = 1e-3;
/// Bisection width for region endpoints.
const ENDPOINT_TOL: f64 = 1e-10;
/// Bisection width for the detection threshold.
const DETECTION_TOL: f64 = 1e-6;
/// `|U~ - U*|` below this counts as a tie, which goes to improvement.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostKind {
    /// `c(x', x) = (x' - x)+`.
    #[default]
    LinearPositivePart,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManipulationSetting {
    detection_p: f64,
    cost_kind: CostKind,
}

impl ManipulationSetting {
    pub fn new(detection_p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&detection_p) {
            return Err(Error::InvalidProbability(detection_p));
        }
        Ok(ManipulationSetting { detection_p, cost_kind: CostKind::default() })
    }

    pub fn detection_p(&self) -> f64 {
        self.detection_p
    }

    pub fn cost_kind(&self) -> CostKind {
        self.cost_kind
    }
}

/// Initial similarities at which manipulation beats both improving and
/// abstaining. Usually a single interval.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ManipulationRegion {
    pub intervals: Vec<(f64, f64)>,
}

impl ManipulationRegion {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn lower(&self) -> Option<f64> {
        self.intervals.first().map(|iv| iv.0)
    }

    pub fn upper(&self) -> Option<f64> {
        self.intervals.last().map(|iv| iv.1)
    }

    pub fn contains(&self, x0: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a < x0 && x0 < b)
    }
}

pub fn manipulation_cost(x_target: f64, x_from: f64) -> f64 {
    (x_target - x_from).max(0.0)
}

/// Largest similarity reachable in one round without detection, the same as
/// one round of full effort.
pub fn max_manipulation_step(x_prev: f64) -> Result<f64> {
    similarity_recurrence(x_prev, 1.0)
}

/// `U~ = (1 - P) (1 + r)^-H(theta, x0, 1) - (theta - x0)+`.
pub fn manipulation_utility(scenario: Scenario, x0: f64, setting: ManipulationSetting) -> Result<f64> {
    let theta = scenario.theta();
    let reward = if x0 >= theta {
        1.0
    } else {
        // (1 + r)^-H with H at k = 1 is exp(-C / ln 2).
        (-factor_c(scenario, x0)? / std::f64::consts::LN_2).exp()
    };
    Ok((1.0 - setting.detection_p) * reward - manipulation_cost(theta, x0))
}

/// `U~` with the limit `x0 -> 0` filled in (`-theta`).
fn manipulation_utility_closed(scenario: Scenario, x0: f64, setting: ManipulationSetting) -> f64 {
    if x0 <= 0.0 {
        return -scenario.theta();
    }
    manipulation_utility(scenario, x0, setting).expect("x0 in (0, 1]")
}

/// Chooses between improving, manipulating and abstaining.
pub fn joint_best_response(
    scenario: Scenario,
    x0: f64,
    setting: ManipulationSetting,
) -> Result<BestResponse> {
    let honest = optimal_effort(scenario, x0)?;
    let dishonest = manipulation_utility(scenario, x0, setting)?;
    if dishonest > honest.utility + TIE_TOL && dishonest > 0.0 {
        return Ok(BestResponse { action: Action::Manipulate, effort: None, utility: dishonest });
    }
    if honest.action == Action::Improve && honest.utility > 0.0 {
        return Ok(honest);
    }
    Ok(BestResponse::abstain())
}

/// `U~ - U*` where `U*` is the honest best-response payoff (zero when abstaining).
pub fn manipulation_advantage(scenario: Scenario, x0: f64, setting: ManipulationSetting) -> Result<f64> {
    let honest = optimal_effort(scenario, x0)?;
    Ok(manipulation_utility(scenario, x0, setting)? - honest.utility)
}

/// Scans `U~ - U*` over `(0, theta)` and bisects every sign change.
pub fn manipulation_region(scenario: Scenario, setting: ManipulationSetting) -> Result<ManipulationRegion> {
    let theta = scenario.theta();
    let advantage = |x: f64| manipulation_advantage(scenario, x, setting).unwrap_or(f64::NAN);
    let n = (theta / SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (1..n).map(|i| i as f64 * SCAN_STEP).collect();
    let values = scan(&grid, &advantage);

    let mut intervals = Vec::new();
    let mut open: Option<f64> = None;
    let mut prev = (0.0, -theta.min(1.0));
    for (&x, &v) in grid.iter().zip(&values) {
        let positive = v > 0.0;
        let was_positive = prev.1 > 0.0;
        if positive && !was_positive {
            open = Some(refine(&advantage, prev.0, x)?);
        } else if !positive && was_positive {
            let lo = open.take().expect("opened on rising edge");
            intervals.push((lo, refine(&advantage, prev.0, x)?));
        }
        prev = (x, v);
    }
    if let Some(lo) = open {
        // U~ - U* -> -P at theta; with P = 0 the region runs up to theta.
        let hi = if setting.detection_p > 0.0 { refine(&advantage, prev.0, theta)? } else { theta };
        intervals.push((lo, hi));
    }
    Ok(ManipulationRegion { intervals })
}

fn refine(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    if lo <= 0.0 {
        // Left edge of the scan: U~ -> -theta < 0 there.
        return bisect(f, lo.max(f64::MIN_POSITIVE), hi, ENDPOINT_TOL);
    }
    bisect(f, lo, hi, ENDPOINT_TOL)
}

#[cfg(feature = "parallel")]
fn scan(grid: &[f64], f: &(impl Fn(f64) -> f64 + Sync)) -> Vec<f64> {
    use rayon::prelude::*;
    grid.par_iter().map(|&x| f(x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn scan(grid: &[f64], f: &impl Fn(f64) -> f64) -> Vec<f64> {
    grid.iter().map(|&x| f(x)).collect()
}

/// Smallest detection probability at which no agent manipulates.
pub fn detection_threshold(scenario: Scenario) -> Result<f64> {
    let empty = |p: f64| -> Result<bool> {
        Ok(manipulation_region(scenario, ManipulationSetting::new(p)?)?.is_empty())
    };
    if empty(0.0)? {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > DETECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if empty(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `U~` at `x0`, extended continuously to `x0 = 0`; handy for plotting.
pub fn manipulation_curve(scenario: Scenario, setting: ManipulationSetting, xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|&x| manipulation_utility_closed(scenario, x, setting)).collect()
}
