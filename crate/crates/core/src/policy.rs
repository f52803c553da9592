//! The decision-maker's side: which threshold elicits the most improvement.

use crate::agent::{min_x0_to_improve, Scenario};
use crate::error::{Error, Result};
use crate::manipulation::{manipulation_region, ManipulationSetting};
use crate::numeric::{adaptive_simpson, golden_section_max, odds_gap};
use crate::population::Density;

const QUAD_TOL: f64 = 1e-9;
const QUAD_DEPTH: u32 = 40;
const THETA_STEP: f64 = 1e-3;
const THETA_TOL: f64 = 1e-6;

/// Welfare of one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyEvaluation {
    pub theta: f64,
    /// Total improvement `U_d(theta)`.
    pub welfare: f64,
    /// Lowest initial similarity that improves, `x*(theta)`.
    pub cutoff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalThreshold {
    pub theta: f64,
    pub welfare: f64,
    /// Whether the welfare profile on the search grid rises then falls at most once.
    pub single_peaked: bool,
}

fn check_rate(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRate(r));
    }
    Ok(())
}

/// `x*(theta)`, with `x*(0) = 0` and `x*(1) = 1`.
pub fn improvement_cutoff(theta: f64, r: f64, m: f64) -> Result<f64> {
    check_rate(r)?;
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidThreshold(theta));
    }
    if theta == 0.0 || theta == 1.0 {
        return Ok(theta);
    }
    Ok(min_x0_to_improve(Scenario::new(theta, r)?, m))
}

/// `U_d(theta) = integral over [x*(theta), theta] of (theta - x) f(x) dx`.
pub fn welfare(theta: f64, density: &Density, r: f64, m: f64) -> Result<PolicyEvaluation> {
    let cutoff = improvement_cutoff(theta, r, m)?;
    let welfare = if cutoff >= theta { 0.0 } else { improvement_mass(theta, cutoff, density) };
    Ok(PolicyEvaluation { theta, welfare, cutoff })
}

fn improvement_mass(theta: f64, lo: f64, density: &Density) -> f64 {
    if let Density::Beta(b) = density {
        let (v, w) = b.shape();
        if v < 1.0 {
            // x = u^(1/v) absorbs the x^(v - 1) singularity at 0.
            let norm = statrs::function::beta::ln_beta(v, w).exp();
            return adaptive_simpson(
                |u: f64| {
                    let x = u.powf(1.0 / v);
                    (theta - x) * (1.0 - x).powf(w - 1.0) / (v * norm)
                },
                lo.powf(v),
                theta.powf(v),
                QUAD_TOL,
                QUAD_DEPTH,
            );
        }
    }
    let mut edges = vec![lo];
    edges.extend(density.kinks().iter().copied().filter(|&k| k > lo && k < theta));
    edges.push(theta);
    edges
        .windows(2)
        .map(|w| adaptive_simpson(|x| (theta - x) * density.pdf(x), w[0], w[1], QUAD_TOL, QUAD_DEPTH))
        .sum()
}

/// Grid search over `(0, 1)` followed by golden-section refinement.
pub fn optimal_threshold(density: &Density, r: f64, m: f64) -> Result<OptimalThreshold> {
    check_rate(r)?;
    let n = (1.0 / THETA_STEP).round() as usize;
    let grid: Vec<f64> = (1..n).map(|i| i as f64 * THETA_STEP).collect();
    let values = welfare_grid(&grid, density, r, m);

    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let lo = if best == 0 { 0.0 } else { grid[best - 1] };
    let hi = grid.get(best + 1).copied().unwrap_or(1.0);
    let f = |t: f64| welfare(t, density, r, m).map_or(f64::NEG_INFINITY, |e| e.welfare);
    let refined = golden_section_max(f, lo, hi, THETA_TOL);
    let (theta, welfare) = if refined.value >= values[best] {
        (refined.arg, refined.value)
    } else {
        (grid[best], values[best])
    };
    Ok(OptimalThreshold { theta, welfare, single_peaked: direction_changes(&values) <= 1 })
}

/// Number of times consecutive differences flip sign (flat steps ignored).
fn direction_changes(values: &[f64]) -> usize {
    let signs: Vec<f64> = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.abs() > 1e-15)
        .map(f64::signum)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Welfare on `thetas`, in order.
pub fn welfare_grid(thetas: &[f64], density: &Density, r: f64, m: f64) -> Vec<f64> {
    let eval = |&t: &f64| welfare(t, density, r, m).map_or(f64::NAN, |e| e.welfare);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        thetas.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        thetas.iter().map(eval).collect()
    }
}

/// Share of the population that prefers to manipulate.
pub fn manipulation_fraction(
    density: &Density,
    scenario: Scenario,
    setting: ManipulationSetting,
) -> Result<f64> {
    let region = manipulation_region(scenario, setting)?;
    Ok(region.intervals.iter().map(|&(a, b)| density.mass(a, b)).sum::<f64>().clamp(0.0, 1.0))
}

/// Recovers the discount rate from the lowest initial similarity observed
/// to improve under threshold `theta`.
pub fn estimate_r(theta: f64, observed_cutoff: f64, m: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidThreshold(theta));
    }
    if !(observed_cutoff > 0.0) {
        return Err(Error::NonPositiveSimilarity(observed_cutoff));
    }
    if observed_cutoff >= theta {
        return Err(Error::CutoffNotBelowThreshold { cutoff: observed_cutoff, theta });
    }
    let spread = odds_gap(observed_cutoff).ln() - odds_gap(theta).ln();
    Ok((2.0 * m / spread).exp_m1())
}

/// Per-observation estimates from several `(theta, cutoff)` experiments and their mean.
pub fn estimate_r_multi(observations: &[(f64, f64)], m: f64) -> Result<(Vec<f64>, f64)> {
    let estimates = observations
        .iter()
        .map(|&(theta, cutoff)| estimate_r(theta, cutoff, m))
        .collect::<Result<Vec<_>>>()?;
    if estimates.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    Ok((estimates, mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::bisect;
    use crate::population::density_from_cdf_table;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const M: f64 = 0.3164;

    fn uniform_closed_form(theta: f64, r: f64) -> f64 {
        let x = improvement_cutoff(theta, r, M).unwrap();
        (theta - x).powi(2) / 2.0
    }

    #[test]
    fn cutoff_examples() {
        assert_eq!(improvement_cutoff(0.0, 0.1, M).unwrap(), 0.0);
        assert_eq!(improvement_cutoff(1.0, 0.1, M).unwrap(), 1.0);
        assert_abs_diff_eq!(improvement_cutoff(0.9, 0.1, M).unwrap(), 0.0745, epsilon = 1e-4);
    }

    #[test]
    fn cutoff_increases_in_theta_and_r() {
        let mut prev = 0.0;
        for i in 1..100 {
            let x = improvement_cutoff(i as f64 / 100.0, 0.1, M).unwrap();
            assert!(x > prev);
            prev = x;
        }
        for theta in [0.3, 0.6, 0.9] {
            let a = improvement_cutoff(theta, 0.05, M).unwrap();
            let b = improvement_cutoff(theta, 0.1, M).unwrap();
            assert!(b > a);
        }
    }

    #[test]
    fn uniform_welfare_closed_form() {
        let u = Density::uniform();
        for i in 1..50 {
            let theta = i as f64 / 50.0;
            for r in [0.05, 0.1, 0.2] {
                let w = welfare(theta, &u, r, M).unwrap().welfare;
                assert_abs_diff_eq!(w, uniform_closed_form(theta, r), epsilon = 1e-8);
            }
        }
        let e = welfare(0.5, &u, 0.1, M).unwrap();
        assert_abs_diff_eq!(e.cutoff, 0.0209, epsilon = 1e-4);
        assert_abs_diff_eq!(e.welfare, 0.1148, epsilon = 1e-4);
        assert_eq!(welfare(0.0, &u, 0.1, M).unwrap().welfare, 0.0);
        assert_eq!(welfare(1.0, &u, 0.1, M).unwrap().welfare, 0.0);
    }

    /// `integral (theta - x) f(x)` for a Beta density from incomplete beta functions.
    fn beta_welfare_oracle(v: f64, w: f64, lo: f64, theta: f64) -> f64 {
        use statrs::function::beta::beta_reg;
        let mass = beta_reg(v, w, theta) - beta_reg(v, w, lo);
        let first = v / (v + w) * (beta_reg(v + 1.0, w, theta) - beta_reg(v + 1.0, w, lo));
        theta * mass - first
    }

    #[test]
    fn beta_welfare_matches_incomplete_beta_oracle() {
        for (v, w) in [(2.0, 2.0), (3.0, 1.0), (4.86, 2.37), (0.91, 3.84), (1.11, 0.97)] {
            let d = Density::beta(v, w).unwrap();
            for theta in [0.2, 0.5, 0.8, 0.97] {
                let e = welfare(theta, &d, 0.1, M).unwrap();
                let oracle = beta_welfare_oracle(v, w, e.cutoff, theta);
                assert_abs_diff_eq!(e.welfare, oracle, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn empirical_welfare_matches_piecewise_integral() {
        let d = density_from_cdf_table(&[(0.0, 0.0), (0.5, 0.8), (1.0, 1.0)]).unwrap();
        let theta = 0.7;
        let e = welfare(theta, &d, 0.1, M).unwrap();
        let x = e.cutoff;
        // pdf 1.6 on [x, 0.5), 0.4 on [0.5, 0.7].
        let seg = |a: f64, b: f64, f: f64| f * ((theta - a).powi(2) - (theta - b).powi(2)) / 2.0;
        assert_abs_diff_eq!(e.welfare, seg(x, 0.5, 1.6) + seg(0.5, theta, 0.4), epsilon = 1e-9);
    }

    #[test]
    fn optimal_threshold_uniform_derivative_oracle() {
        let u = Density::uniform();
        for r in [0.05, 0.1, 0.2] {
            let scale = (2.0 * M / (1.0f64 + r).ln()).exp();
            // d/dtheta (theta - x*)^2 / 2 vanishes where dx*/dtheta = 1.
            let slope = |t: f64| {
                let g = 1.0 / (t * t) - 1.0;
                scale / (t.powi(3) * (1.0 + g * scale).powf(1.5)) - 1.0
            };
            let root = bisect(slope, 0.3, 0.9999, 1e-12).unwrap();
            let opt = optimal_threshold(&u, r, M).unwrap();
            assert_abs_diff_eq!(opt.theta, root, epsilon = 1e-4);
            assert!(opt.single_peaked);
            assert!(opt.welfare > 0.0);
        }
    }

    #[test]
    fn optimal_threshold_decreases_with_r() {
        let d = Density::beta(2.0, 2.0).unwrap();
        let a = optimal_threshold(&d, 0.05, M).unwrap();
        let b = optimal_threshold(&d, 0.2, M).unwrap();
        assert!(b.theta <= a.theta);
        assert!(a.theta > 0.0 && a.theta < 1.0);
    }

    #[test]
    fn manipulation_fraction_examples() {
        let u = Density::uniform();
        let s = Scenario::new(0.995, 0.1).unwrap();
        let f = manipulation_fraction(&u, s, ManipulationSetting::new(0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(f, 0.631, epsilon = 5e-3);
        assert_eq!(manipulation_fraction(&u, s, ManipulationSetting::new(1.0).unwrap()).unwrap(), 0.0);
        let mut prev = f64::INFINITY;
        for i in 0..=5 {
            let p = ManipulationSetting::new(i as f64 / 10.0).unwrap();
            let f = manipulation_fraction(&u, s, p).unwrap();
            assert!(f <= prev + 1e-12);
            prev = f;
        }
    }

    #[test]
    fn estimate_r_round_trips() {
        for (theta, r) in [(0.9, 0.1), (0.976, 0.05)] {
            let x = improvement_cutoff(theta, r, M).unwrap();
            assert_relative_eq!(estimate_r(theta, x, M).unwrap(), r, max_relative = 1e-9);
        }
        let obs: Vec<(f64, f64)> =
            [0.8, 0.9].iter().map(|&t| (t, improvement_cutoff(t, 0.07, M).unwrap())).collect();
        let (each, mean) = estimate_r_multi(&obs, M).unwrap();
        assert_eq!(each.len(), 2);
        assert_relative_eq!(mean, 0.07, max_relative = 1e-9);
        assert!(matches!(estimate_r(0.5, 0.6, M), Err(Error::CutoffNotBelowThreshold { .. })));
    }
}
