//! Qualification profiles and the laws that move them.
//!
//! A profile is a non-negative unit vector. Each round an agent's profile is
//! pushed along a direction (the ideal profile, or a blend of the ideal and
//! the agent's starting profile under forgetting) by an amount proportional
//! to its current similarity, then renormalized. The similarity to the ideal
//! has a closed form for constant effort, which is what the agent and policy
//! layers use.

use crate::error::{Error, Result};
use crate::numeric::{bisect, from_odds_gap, odds_gap};
use crate::TOL;

/// Default number of rounds simulated when looking for a first acceptance
/// under forgetting.
pub const DEFAULT_FORGETTING_HORIZON: u64 = 10_000;

/// Slack used when deciding that a threshold lies beyond the forgetting limit.
const UNREACHABLE_TOL: f64 = 1e-12;

/// A non-negative unit-norm qualification profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile(Vec<f64>);

impl Profile {
    /// Wraps `coords`, which must already be non-negative with unit norm.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_non_negative(&coords)?;
        let norm = norm(&coords);
        if (norm - 1.0).abs() > TOL {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(Profile(coords))
    }

    /// Scales non-negative `coords` to unit norm.
    pub fn normalized(coords: Vec<f64>) -> Result<Self> {
        check_non_negative(&coords)?;
        Self::from_direction(coords)
    }

    fn from_direction(mut coords: Vec<f64>) -> Result<Self> {
        let n = norm(&coords);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        coords.iter_mut().for_each(|c| *c /= n);
        Ok(Profile(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Inner product with `other`; the similarity when `other` is the ideal.
    pub fn similarity(&self, other: &Profile) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

fn check_non_negative(coords: &[f64]) -> Result<()> {
    for (index, &value) in coords.iter().enumerate() {
        if value < 0.0 || value.is_nan() {
            return Err(Error::NegativeCoordinate { index, value });
        }
    }
    Ok(())
}

fn check_dims(a: &Profile, b: &Profile) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

fn check_effort(k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::EffortOutOfRange(k));
    }
    Ok(())
}

fn check_similarity(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::NonPositiveSimilarity(x));
    }
    if x > 1.0 + TOL {
        return Err(Error::SimilarityOutOfRange(x));
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Output of [`pre_normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct PreNormalized {
    /// Unit profiles with one extra "irrelevant skills" coordinate.
    pub profiles: Vec<Profile>,
    /// The ideal with a trailing zero, not renormalized.
    pub ideal: Vec<f64>,
    /// Largest input norm in the batch.
    pub scale: f64,
}

impl PreNormalized {
    /// The extended ideal scaled to unit norm.
    pub fn ideal_profile(&self) -> Result<Profile> {
        Profile::normalized(self.ideal.clone())
    }
}

/// Lifts raw profiles of differing norms onto the unit sphere by appending
/// the coordinate `sqrt(K^2 - |q|^2) / K`, `K` being the batch's largest norm.
pub fn pre_normalize(raw: &[Vec<f64>], ideal: &[f64]) -> Result<PreNormalized> {
    if raw.is_empty() {
        return Err(Error::EmptyBatch);
    }
    check_non_negative(ideal)?;
    let dim = ideal.len();
    for q in raw {
        if q.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: q.len() });
        }
        check_non_negative(q)?;
    }
    let scale = raw.iter().map(|q| norm(q)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let profiles = raw
        .iter()
        .map(|q| {
            let mut coords: Vec<f64> = q.iter().map(|c| c / scale).collect();
            let rest = (1.0 - dot(&coords, &coords)).max(0.0);
            coords.push(rest.sqrt());
            Profile::from_direction(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ideal = ideal.to_vec();
    ideal.push(0.0);
    Ok(PreNormalized { profiles, ideal, scale })
}

/// One round of persistent improvement: `normalize(q + k (q.d) d)`.
pub fn improvement_step(q: &Profile, d: &Profile, k: f64) -> Result<Profile> {
    check_dims(q, d)?;
    check_effort(k)?;
    let x = q.similarity(d);
    if x <= 0.0 {
        return Err(Error::NonPositiveSimilarity(x));
    }
    push(q, d.coords(), k * x)
}

fn push(q: &Profile, direction: &[f64], weight: f64) -> Result<Profile> {
    let coords = q.coords().iter().zip(direction).map(|(a, b)| a + weight * b).collect();
    Profile::from_direction(coords)
}

/// Similarity after one round of effort `k`:
/// `x'^-2 - 1 = (x^-2 - 1) / (k + 1)^2`.
pub fn similarity_recurrence(x: f64, k: f64) -> Result<f64> {
    similarity_closed_form(x, k, 1)
}

/// Similarity after `t` rounds at constant effort `k`:
/// `x_t^-2 - 1 = (x_0^-2 - 1) / (k + 1)^(2t)`.
pub fn similarity_closed_form(x0: f64, k: f64, t: u64) -> Result<f64> {
    check_similarity(x0)?;
    check_effort(k)?;
    let x0 = x0.min(1.0);
    let gap = odds_gap(x0) * (-2.0 * t as f64 * k.ln_1p()).exp();
    Ok(from_odds_gap(gap))
}

/// Per-round efforts whose running total never exceeds 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EffortSchedule(Vec<f64>);

impl EffortSchedule {
    pub fn new(efforts: Vec<f64>) -> Result<Self> {
        for (i, &k) in efforts.iter().enumerate() {
            if !(k >= 0.0 && k.is_finite()) {
                return Err(Error::InvalidSchedule(format!("effort {k} at round {i}")));
            }
        }
        let total: f64 = efforts.iter().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::InvalidSchedule(format!("total effort {total} exceeds 1")));
        }
        Ok(EffortSchedule(efforts))
    }

    pub fn efforts(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Effort deposited in round `t` (zero past the end of the schedule).
    pub fn at(&self, t: usize) -> f64 {
        self.0.get(t).copied().unwrap_or(0.0)
    }
}

/// Simulates repeated deposits: round `t` applies the improvement law with
/// the accumulated effort `sum_{tau <= t} k_tau`. Returns `horizon + 1`
/// profiles starting at `q0`.
pub fn cumulative_effort_trajectory(
    q0: &Profile,
    d: &Profile,
    schedule: &EffortSchedule,
    horizon: usize,
) -> Result<Vec<Profile>> {
    check_dims(q0, d)?;
    let x0 = q0.similarity(d);
    if x0 <= 0.0 {
        return Err(Error::NonPositiveSimilarity(x0));
    }
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(q0.clone());
    let mut accumulated = 0.0;
    for t in 0..horizon {
        accumulated += schedule.at(t);
        let q = out.last().expect("trajectory starts non-empty");
        let next = improvement_step(q, d, accumulated.min(1.0))?;
        out.push(next);
    }
    Ok(out)
}

/// The single up-front effort whose closed-form similarity after `horizon`
/// rounds matches the cumulative-effort trajectory, found by bisection.
pub fn equivalent_one_shot_effort(
    q0: &Profile,
    d: &Profile,
    schedule: &EffortSchedule,
    horizon: usize,
    tol: f64,
) -> Result<f64> {
    let trajectory = cumulative_effort_trajectory(q0, d, schedule, horizon)?;
    let x0 = q0.similarity(d);
    let target = trajectory.last().expect("non-empty").similarity(d);
    let h = horizon as u64;
    let residual = |k: f64| similarity_closed_form(x0, k, h).map_or(f64::NAN, |x| x - target);
    let k = bisect(residual, 0.0, 1.0, 1e-15)?;
    let miss = residual(k).abs();
    if miss > tol {
        return Err(Error::BracketFailure { lo: 0.0, hi: 1.0, f_lo: miss, f_hi: tol });
    }
    Ok(k)
}

/// Similarity after `t` rounds when effort fades as `k_i = k / (i + 1)`,
/// evaluated from the exact product form.
pub fn decaying_effort_similarity(x0: f64, k: f64, t: u64) -> Result<f64> {
    check_similarity(x0)?;
    check_effort(k)?;
    if t == 0 || k == 0.0 {
        return Ok(x0);
    }
    let factor = decaying_effort_factor(k, t);
    Ok(from_odds_gap(odds_gap(x0.min(1.0)) * factor * factor))
}

/// `prod_{i < t} (1 + k / (i + 1))^-1`; its square scales `x^-2 - 1`.
pub fn decaying_effort_factor(k: f64, t: u64) -> f64 {
    let log: f64 = (0..t).map(|i| (k / (i as f64 + 1.0)).ln_1p()).sum();
    (-log).exp()
}

/// One round of the forgetting law:
/// `normalize(q + (k d + (1 - k) q0) (q.d))`.
pub fn forgetting_step(q: &Profile, q0: &Profile, d: &Profile, k: f64) -> Result<Profile> {
    check_dims(q, d)?;
    check_dims(q0, d)?;
    check_effort(k)?;
    let x = q.similarity(d);
    if x <= 0.0 {
        return Err(Error::NonPositiveSimilarity(x));
    }
    let blend: Vec<f64> =
        d.coords().iter().zip(q0.coords()).map(|(di, qi)| k * di + (1.0 - k) * qi).collect();
    push(q, &blend, x)
}

/// Limit profile and effective effort of the forgetting law.
#[derive(Debug, Clone, PartialEq)]
pub struct ForgettingTarget {
    /// `d* = d~ / |d~|` with `d~ = k d + (1 - k) q0`.
    pub d_star: Profile,
    /// `|d~| x0`, the effort that paces convergence toward `d*`.
    pub k_u: f64,
    /// Set when `k = 0`: nothing is learned and `d* = q0`.
    pub degenerate: bool,
}

pub fn forgetting_target(q0: &Profile, d: &Profile, k: f64) -> Result<ForgettingTarget> {
    check_dims(q0, d)?;
    check_effort(k)?;
    let x0 = q0.similarity(d);
    if x0 <= 0.0 {
        return Err(Error::NonPositiveSimilarity(x0));
    }
    if k == 0.0 {
        return Ok(ForgettingTarget { d_star: q0.clone(), k_u: x0, degenerate: true });
    }
    let blend: Vec<f64> =
        d.coords().iter().zip(q0.coords()).map(|(di, qi)| k * di + (1.0 - k) * qi).collect();
    let blend_norm = norm(&blend);
    Ok(ForgettingTarget {
        d_star: Profile::from_direction(blend)?,
        k_u: blend_norm * x0,
        degenerate: false,
    })
}

/// `|k d + (1 - k) q0|` as a function of `x0 = q0.d` alone.
pub fn blend_norm(x0: f64, k: f64) -> f64 {
    (k * k + (1.0 - k) * (1.0 - k) + 2.0 * k * (1.0 - k) * x0).sqrt()
}

/// The forgetting law restricted to the plane spanned by `q0` and `d`.
///
/// The state is the tangent `rho` of the angle between `q_t` and the limit
/// `d*`, kept in log form. Under the forgetting law the component of `q_t`
/// orthogonal to `d*` is left untouched while the component along `d*`
/// grows by `|d~| (q_t.d)`, so `rho` contracts by `1 + |d~| (c - s rho)`
/// where `(c, -s)` are the coordinates of `d` in the `(d*, e)` frame.
#[derive(Debug, Clone)]
pub struct ForgettingPath {
    x0: f64,
    blend_norm: f64,
    c: f64,
    s: f64,
    ln_rho: f64,
    round: u64,
}

impl ForgettingPath {
    pub fn new(x0: f64, k: f64) -> Result<Self> {
        check_similarity(x0)?;
        check_effort(k)?;
        let x0 = x0.min(1.0);
        let s0 = ((1.0 - x0) * (1.0 + x0)).sqrt();
        // d~ in the (d, u) frame, u the unit component of q0 orthogonal to d.
        let along = k + (1.0 - k) * x0;
        let across = (1.0 - k) * s0;
        let blend_norm = along.hypot(across);
        let (c, s) = (along / blend_norm, across / blend_norm);
        // q0 in the (d*, e) frame with e = (-s, c).
        let a0 = x0 * c + s0 * s;
        let b0 = (s0 * c - x0 * s).max(0.0);
        Ok(ForgettingPath { x0, blend_norm, c, s, ln_rho: (b0 / a0).ln(), round: 0 })
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    fn rho(&self) -> f64 {
        self.ln_rho.exp()
    }

    /// Current similarity to the ideal profile.
    pub fn similarity(&self) -> f64 {
        let rho = self.rho();
        (self.c - self.s * rho) / rho.hypot(1.0)
    }

    /// Current similarity to the limit profile `d*`.
    pub fn similarity_to_limit(&self) -> f64 {
        1.0 / self.rho().hypot(1.0)
    }

    /// `ln((q_t.d*)^-2 - 1)`, exact even when the gap underflows.
    pub fn ln_gap_to_limit(&self) -> f64 {
        2.0 * self.ln_rho
    }

    /// Similarity of the limit profile to the ideal, `d*.d`.
    pub fn limit_similarity(&self) -> f64 {
        self.c
    }

    pub fn k_u(&self) -> f64 {
        self.blend_norm * self.x0
    }

    pub fn step(&mut self) {
        let rho = self.rho();
        self.ln_rho -= (self.blend_norm * (self.c - self.s * rho)).ln_1p();
        self.round += 1;
    }
}

/// First round at which the forgetting law brings the similarity to `theta`,
/// or `None` if that does not happen within `horizon` rounds.
pub fn forgetting_first_acceptance(
    x0: f64,
    k: f64,
    theta: f64,
    horizon: u64,
) -> Result<Option<u64>> {
    if horizon == 0 {
        return Err(Error::EmptyHorizon);
    }
    let mut path = ForgettingPath::new(x0, k)?;
    if x0 >= theta {
        return Ok(Some(0));
    }
    if theta > path.limit_similarity() + UNREACHABLE_TOL {
        return Ok(None);
    }
    while path.round() < horizon {
        path.step();
        if path.similarity() >= theta - TOL {
            return Ok(Some(path.round()));
        }
    }
    Ok(None)
}
