//! Distributions of initial similarity across an agent population.

pub mod io;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::gamma::digamma;

use crate::error::{Error, Result};

/// Minimum sample size accepted by [`fit_beta`].
pub const MIN_FIT_SAMPLES: usize = 30;

/// Evaluation point used in place of an endpoint where the pdf diverges.
const EDGE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BetaDensity {
    v: f64,
    w: f64,
    ln_norm: f64,
}

impl BetaDensity {
    pub fn new(v: f64, w: f64) -> Result<Self> {
        if !(v > 0.0 && w > 0.0 && v.is_finite() && w.is_finite()) {
            return Err(Error::InvalidShape { v, w });
        }
        Ok(BetaDensity { v, w, ln_norm: ln_beta(v, w) })
    }

    pub fn shape(&self) -> (f64, f64) {
        (self.v, self.w)
    }

    /// `x^(v-1) (1-x)^(w-1) / B(v, w)` on `[0, 1]`. Endpoints where the
    /// density diverges are evaluated just inside the interval.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutsideUnitInterval(x));
        }
        Ok(self.pdf_unchecked(x))
    }

    fn pdf_unchecked(&self, x: f64) -> f64 {
        let x = if self.v < 1.0 { x.max(EDGE) } else { x };
        let x = if self.w < 1.0 { x.min(1.0 - EDGE) } else { x };
        let ln = log_term(self.v - 1.0, x) + log_term(self.w - 1.0, 1.0 - x) - self.ln_norm;
        ln.exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match x {
            x if x <= 0.0 => 0.0,
            x if x >= 1.0 => 1.0,
            x => beta_reg(self.v, self.w, x),
        }
    }

    /// `n` draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let dist = rand_distr::Beta::new(self.v, self.w).expect("shapes validated");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        dist.sample_iter(&mut rng).take(n).collect()
    }
}

/// `a ln(x)` with `0 * ln(0) = 0`.
fn log_term(a: f64, x: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * x.ln()
    }
}

/// Piecewise-linear CDF on `[0, 1]`; its pdf is piecewise constant.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDensity {
    breakpoints: Vec<f64>,
    cdf_values: Vec<f64>,
}

impl EmpiricalDensity {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf_values
    }

    fn segment(&self, x: f64) -> usize {
        let i = self.breakpoints.partition_point(|&b| b <= x);
        i.clamp(1, self.breakpoints.len() - 1) - 1
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        let i = self.segment(x);
        let (b, c) = (&self.breakpoints, &self.cdf_values);
        (c[i + 1] - c[i]) / (b[i + 1] - b[i])
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let i = self.segment(x);
        let (b, c) = (&self.breakpoints, &self.cdf_values);
        c[i] + (c[i + 1] - c[i]) * (x - b[i]) / (b[i + 1] - b[i])
    }
}

/// Density of initial similarity on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    Beta(BetaDensity),
    Empirical(EmpiricalDensity),
}

impl Density {
    pub fn beta(v: f64, w: f64) -> Result<Self> {
        BetaDensity::new(v, w).map(Density::Beta)
    }

    pub fn uniform() -> Self {
        Density::beta(1.0, 1.0).expect("valid shape")
    }

    /// Density at `x`; zero outside `[0, 1]`.
    pub fn pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        match self {
            Density::Beta(b) => b.pdf_unchecked(x),
            Density::Empirical(e) => e.pdf(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Density::Beta(b) => b.cdf(x),
            Density::Empirical(e) => e.cdf(x),
        }
    }

    /// Probability of `(a, b)`.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        (self.cdf(b) - self.cdf(a)).max(0.0)
    }

    /// Interior points where the pdf is not smooth.
    pub fn kinks(&self) -> &[f64] {
        match self {
            Density::Beta(_) => &[],
            Density::Empirical(e) => &e.breakpoints[1..e.breakpoints.len() - 1],
        }
    }

    /// `beta:v,w` or `empirical:n` (number of breakpoints).
    pub fn label(&self) -> String {
        match self {
            Density::Beta(b) => format!("beta:{},{}", b.v, b.w),
            Density::Empirical(e) => format!("empirical:{}", e.breakpoints.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitMethod {
    #[default]
    MaximumLikelihood,
    MethodOfMoments,
}

/// Fits a Beta density to samples strictly inside `(0, 1)`.
pub fn fit_beta(samples: &[f64], method: FitMethod) -> Result<Density> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_FIT_SAMPLES, got: samples.len() });
    }
    if let Some((index, &value)) = samples.iter().enumerate().find(|(_, &x)| !(x > 0.0 && x < 1.0)) {
        return Err(Error::SampleOutOfRange { index, value });
    }
    let (v, w) = moments_estimate(samples);
    let (v, w) = match method {
        FitMethod::MethodOfMoments => (v, w),
        FitMethod::MaximumLikelihood => newton_mle(samples, v, w),
    };
    Density::beta(v, w)
}

fn moments_estimate(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let common = mean * (1.0 - mean) / var - 1.0;
    if common > 0.0 && common.is_finite() {
        (mean * common, (1.0 - mean) * common)
    } else {
        // Variance at or above the Bernoulli bound: start from a U-shape.
        (0.5, 0.5)
    }
}

/// Newton iterations on the score equations
/// `psi(v) - psi(v + w) = mean ln x`, `psi(w) - psi(v + w) = mean ln(1 - x)`.
fn newton_mle(samples: &[f64], mut v: f64, mut w: f64) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean_ln_x = samples.iter().map(|x| x.ln()).sum::<f64>() / n;
    let mean_ln_1mx = samples.iter().map(|x| (-x).ln_1p()).sum::<f64>() / n;
    for _ in 0..200 {
        let psi_sum = digamma(v + w);
        let g1 = digamma(v) - psi_sum - mean_ln_x;
        let g2 = digamma(w) - psi_sum - mean_ln_1mx;
        let t_sum = trigamma(v + w);
        let (a, b, d) = (trigamma(v) - t_sum, -t_sum, trigamma(w) - t_sum);
        let det = a * d - b * b;
        let dv = (d * g1 - b * g2) / det;
        let dw = (a * g2 - b * g1) / det;
        let mut step = 1.0;
        while v - step * dv <= 0.0 || w - step * dw <= 0.0 {
            step *= 0.5;
        }
        v -= step * dv;
        w -= step * dw;
        if (step * dv).abs() <= 1e-12 * v && (step * dw).abs() <= 1e-12 * w {
            break;
        }
    }
    (v, w)
}

/// Trigamma function for `x > 0` via upward recurrence and the asymptotic series.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        + 0.5 * inv2
        + inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
    acc + series
}

/// Builds a density from `(score, cumulative probability)` rows with scores
/// already on `[0, 1]`. Missing ends are filled with `(0, 0)` and `(1, 1)`.
pub fn density_from_cdf_table(points: &[(f64, f64)]) -> Result<Density> {
    if points.is_empty() {
        return Err(Error::InvalidCdfTable { index: 0, reason: "empty table" });
    }
    for (index, &(x, c)) in points.iter().enumerate() {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidCdfTable { index, reason: "score outside [0, 1]" });
        }
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::InvalidCdfTable { index, reason: "probability outside [0, 1]" });
        }
        if index > 0 {
            let (px, pc) = points[index - 1];
            if x <= px {
                return Err(Error::InvalidCdfTable { index, reason: "scores not strictly increasing" });
            }
            if c < pc {
                return Err(Error::InvalidCdfTable { index, reason: "cumulative probability decreases" });
            }
        }
    }
    let last = points.len() - 1;
    if (points[last].1 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidCdfTable { index: last, reason: "final cumulative probability is not 1" });
    }
    if points[0].0 == 0.0 && points[0].1 > 0.0 {
        return Err(Error::InvalidCdfTable { index: 0, reason: "positive mass at score 0" });
    }
    let mut breakpoints = Vec::with_capacity(points.len() + 2);
    let mut cdf_values = Vec::with_capacity(points.len() + 2);
    if points[0].0 > 0.0 {
        breakpoints.push(0.0);
        cdf_values.push(0.0);
    }
    for &(x, c) in points {
        breakpoints.push(x);
        cdf_values.push(c);
    }
    *cdf_values.last_mut().expect("non-empty") = 1.0;
    if points[last].0 < 1.0 {
        breakpoints.push(1.0);
        cdf_values.push(1.0);
    }
    Ok(Density::Empirical(EmpiricalDensity { breakpoints, cdf_values }))
}

/// Affine map of `[lo, hi]` onto `[0, 1]`.
pub fn normalize_scores(raw: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo < hi) {
        return Err(Error::InvalidRange { lo, hi });
    }
    raw.iter()
        .enumerate()
        .map(|(index, &value)| {
            if !(lo..=hi).contains(&value) {
                return Err(Error::ValueOutOfRange { index, value, lo, hi });
            }
            Ok((value - lo) / (hi - lo))
        })
        .collect()
}

/// Row means of multi-subject scores.
pub fn average_rows<const N: usize>(rows: &[[f64; N]]) -> Vec<f64> {
    rows.iter().map(|r| r.iter().sum::<f64>() / N as f64).collect()
}

/// Smallest and largest value, for observed-range normalization.
pub fn observed_range(values: &[f64]) -> Option<(f64, f64)> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo <= hi).then_some((lo, hi))
}
