//! Agent best responses under honest improvement.
//!
//! With effort `k` the similarity needs `H = -ln(sqrt(g(theta) / g(x0))) / ln(1 + k)`
//! rounds to reach the threshold, where `g(x) = x^-2 - 1`. The agent's payoff
//! is the discounted acceptance reward minus effort, `(1 + r)^-H - k`.
//! Everything except `k` folds into one factor
//! `C = -ln(sqrt(g(theta) / g(x0))) ln(1 + r)`, and with `z = ln(1 + k)` the
//! payoff becomes `exp(-C / z) - e^z + 1`. Agents improve exactly when `C`
//! is below a universal constant `m`.

use std::sync::OnceLock;

use crate::dynamics::{blend_norm, forgetting_first_acceptance};
use crate::error::{Error, Result};
use crate::numeric::{bisect, golden_section_max, odds_gap, softplus, Maximum};

/// Acceptance threshold and per-round discount rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    theta: f64,
    r: f64,
}

impl Scenario {
    pub fn new(theta: f64, r: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidThreshold(theta));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidRate(r));
        }
        Ok(Scenario { theta, r })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Improve,
    Manipulate,
    Abstain,
}

impl Action {
    pub fn as_str(&self) -> &'static str {
        match self {
            Action::Improve => "improve",
            Action::Manipulate => "manipulate",
            Action::Abstain => "abstain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestResponse {
    pub action: Action,
    /// Present for [`Action::Improve`].
    pub effort: Option<f64>,
    pub utility: f64,
}

impl BestResponse {
    pub fn abstain() -> Self {
        BestResponse { action: Action::Abstain, effort: None, utility: 0.0 }
    }
}

/// The improvement threshold `m` and the auxiliary root `t'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncentiveConstant {
    pub m: f64,
    pub t_prime: f64,
}

fn check_x0(x0: f64) -> Result<()> {
    if x0.is_nan() || x0 <= 0.0 {
        return Err(Error::NonPositiveSimilarity(x0));
    }
    if x0 > 1.0 {
        return Err(Error::SimilarityOutOfRange(x0));
    }
    Ok(())
}

/// `ln(g(x0) / g(theta))`, the log of how far the similarity has to travel
/// on the odds-gap scale. Infinite at `x0 = 1`.
fn log_gap_ratio(theta: f64, x0: f64) -> f64 {
    odds_gap(x0).ln() - odds_gap(theta).ln()
}

/// The factor `C(theta, r, x0)`. Negative when `x0 > theta`.
pub fn factor_c(scenario: Scenario, x0: f64) -> Result<f64> {
    check_x0(x0)?;
    Ok(0.5 * log_gap_ratio(scenario.theta, x0) * scenario.r.ln_1p())
}

/// Agent payoff as a function of `z = ln(1 + k)`.
pub fn reduced_utility(c: f64, z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    (-c / z).exp() - z.exp() + 1.0
}

/// Smallest `z` searched. Keeping away from `z = 0`, where the payoff is 0
/// for every `C`, makes the best payoff strictly negative once `C > m`.
const Z_MIN: f64 = 1e-9;

fn best_reduced_utility(c: f64, tol: f64) -> Maximum {
    golden_section_max(|z| reduced_utility(c, z), Z_MIN, std::f64::consts::LN_2, tol)
}

/// Solves `t'` (root of `(t + 2) / (t e^(2t + 2)) - 1` on `(0, ln 2)`) and
/// `m`, the value of `C` at which the best achievable payoff drops to zero.
pub fn solve_incentive_constant(tol: f64) -> Result<IncentiveConstant> {
    let tol = tol.clamp(1e-15, 1e-2);
    let slope = |t: f64| (t + 2.0) / (t * (2.0 * t + 2.0).exp()) - 1.0;
    let t_prime = bisect(slope, 1e-12, std::f64::consts::LN_2, tol)?;
    let inner = (tol * 1e-2).max(1e-13);
    let m = bisect(|c| best_reduced_utility(c, inner).value, 1e-6, 2.0, tol)?;
    Ok(IncentiveConstant { m, t_prime })
}

/// Process-wide incentive constant, solved once at tight tolerance.
pub fn incentive_constant() -> IncentiveConstant {
    static CONSTANT: OnceLock<IncentiveConstant> = OnceLock::new();
    *CONSTANT.get_or_init(|| solve_incentive_constant(1e-12).expect("bracket is fixed and valid"))
}

/// Continuous number of rounds until the similarity reaches `theta` under
/// effort `k`; `None` when it never does (`k = 0` with `x0 < theta`).
pub fn hitting_time(theta: f64, x0: f64, k: f64) -> Result<Option<f64>> {
    check_x0(x0)?;
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidThreshold(theta));
    }
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::EffortOutOfRange(k));
    }
    if x0 >= theta {
        return Ok(Some(0.0));
    }
    if k == 0.0 {
        return Ok(None);
    }
    Ok(Some(0.5 * log_gap_ratio(theta, x0) / k.ln_1p()))
}

/// Discounted payoff of effort `k`.
pub fn utility(k: f64, scenario: Scenario, x0: f64) -> Result<f64> {
    check_x0(x0)?;
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::EffortOutOfRange(k));
    }
    if x0 >= scenario.theta {
        return Ok(1.0 - k);
    }
    if k == 0.0 {
        return Ok(0.0);
    }
    let c = factor_c(scenario, x0)?;
    Ok((-c / k.ln_1p()).exp() - k)
}

/// Golden-section tolerance in `z`; `dk/dz <= 2` so this bounds `|dk|` by 1e-8.
const Z_TOL: f64 = 4e-9;

fn maximize_effort(c: f64) -> Maximum {
    let golden = best_reduced_utility(c, Z_TOL);
    // Unimodality guard: a coarse scan must not beat the golden-section result.
    let coarse = (1..=256)
        .map(|i| {
            let z = std::f64::consts::LN_2 * i as f64 / 256.0;
            Maximum { arg: z, value: reduced_utility(c, z) }
        })
        .fold(Maximum { arg: 0.0, value: 0.0 }, |a, b| if b.value > a.value { b } else { a });
    if coarse.value <= golden.value + 1e-12 {
        return golden;
    }
    // Dense fallback on k with step 1e-5, smallest k wins ties.
    let mut best = Maximum { arg: 0.0, value: 0.0 };
    for i in 1..=100_000 {
        let z = (i as f64 * 1e-5).ln_1p();
        let v = reduced_utility(c, z);
        if v > best.value {
            best = Maximum { arg: z, value: v };
        }
    }
    best
}

/// Best response of an honest agent, using the process-wide `m`.
pub fn optimal_effort(scenario: Scenario, x0: f64) -> Result<BestResponse> {
    optimal_effort_with(scenario, x0, incentive_constant().m)
}

/// Best response of an honest agent given the incentive constant `m`.
pub fn optimal_effort_with(scenario: Scenario, x0: f64, m: f64) -> Result<BestResponse> {
    check_x0(x0)?;
    if x0 >= scenario.theta {
        return Ok(BestResponse { action: Action::Improve, effort: Some(0.0), utility: 1.0 });
    }
    let c = factor_c(scenario, x0)?;
    if c >= m {
        return Ok(BestResponse::abstain());
    }
    let best = maximize_effort(c);
    if best.value <= 0.0 || best.arg <= 0.0 {
        return Ok(BestResponse::abstain());
    }
    let k = best.arg.exp_m1();
    Ok(BestResponse { action: Action::Improve, effort: Some(k), utility: utility(k, scenario, x0)? })
}

/// Smallest initial similarity that still has an incentive to improve:
/// `(1 + g(theta) exp(2m / ln(1 + r)))^-1/2`.
pub fn min_x0_to_improve(scenario: Scenario, m: f64) -> f64 {
    let exponent = odds_gap(scenario.theta).ln() + 2.0 * m / scenario.r.ln_1p();
    (-0.5 * softplus(exponent)).exp()
}

/// Largest threshold at which an agent at `x0` still improves:
/// `(1 + g(x0) exp(-2m / ln(1 + r)))^-1/2`.
pub fn max_theta_to_incentivize(x0: f64, r: f64, m: f64) -> Result<f64> {
    check_x0(x0)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRate(r));
    }
    let exponent = odds_gap(x0).ln() - 2.0 * m / r.ln_1p();
    Ok((-0.5 * softplus(exponent)).exp())
}

/// Root of `2x^2 + 2x^3 - 1` in `(0, 1)`.
pub fn forgetting_cap_pivot() -> f64 {
    static PIVOT: OnceLock<f64> = OnceLock::new();
    *PIVOT.get_or_init(|| {
        bisect(|x| 2.0 * x * x + 2.0 * x * x * x - 1.0, 0.0, 1.0, 1e-15).expect("sign change on [0, 1]")
    })
}

/// Upper bound on the effort worth investing when knowledge can be forgotten.
///
/// The second branch `x0 (x0^2 + x0 - s) / (2x0^2 + 2x0^3 - 1)` with
/// `s = sqrt(x0^4 - x0^2 + 1)` is evaluated in its rationalized form
/// `x0 / (x0^2 + x0 + s)`, which agrees everywhere and is continuous at the
/// pivot where numerator and denominator both vanish.
pub fn forgetting_effort_cap(x0: f64) -> Result<f64> {
    check_x0(x0)?;
    let pivot = forgetting_cap_pivot();
    let p2 = pivot * pivot;
    let first = p2 / (2.0 * p2 + 2.0 * p2 * pivot);
    let s = (x0.powi(4) - x0 * x0 + 1.0).sqrt();
    let second = x0 / (x0 * x0 + x0 + s);
    Ok(first.min(second))
}

/// `k_u = |k d + (1 - k) q0| x0`, the pace of convergence under forgetting.
pub fn forgetting_pace(x0: f64, k: f64) -> f64 {
    blend_norm(x0, k) * x0
}

/// What an agent that is never accepted under forgetting is paid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeverAccepted {
    /// Effort is sunk: payoff `-k`.
    #[default]
    SunkEffort,
    /// Payoff floored at zero.
    Zero,
}

/// Payoff of effort `k` under the forgetting law, from the simulated first
/// acceptance round.
pub fn forgetting_utility(
    k: f64,
    scenario: Scenario,
    x0: f64,
    horizon: u64,
    never: NeverAccepted,
) -> Result<f64> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::EffortOutOfRange(k));
    }
    match forgetting_first_acceptance(x0, k, scenario.theta, horizon)? {
        Some(t) => Ok((-(t as f64) * scenario.r.ln_1p()).exp() - k),
        None => Ok(match never {
            NeverAccepted::SunkEffort => -k,
            NeverAccepted::Zero => 0.0,
        }),
    }
}
