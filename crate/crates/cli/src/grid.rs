//! Grid strings: a comma list (`0.01,0.05,0.1`), a closed range
//! (`start:stop:step`) or a single value. Commas win when both appear.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct GridError(pub String);

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for GridError {}

fn number(s: &str) -> Result<f64, GridError> {
    let v: f64 = s.trim().parse().map_err(|_| GridError(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(GridError(format!("not finite: {s:?}")));
    }
    Ok(v)
}

/// Expands a grid string into its values, in the order written.
pub fn parse(spec: &str) -> Result<Vec<f64>, GridError> {
    if spec.trim().is_empty() {
        return Err(GridError("empty grid".into()));
    }
    if spec.contains(',') {
        return spec.split(',').map(number).collect();
    }
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![number(single)?]),
        [start, stop, step] => range(number(start)?, number(stop)?, number(step)?),
        _ => Err(GridError(format!("expected a comma list or start:stop:step, got {spec:?}"))),
    }
}

fn range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, GridError> {
    if !(step > 0.0) {
        return Err(GridError(format!("step must be positive, got {step}")));
    }
    if stop < start {
        return Err(GridError(format!("stop {stop} is below start {start}")));
    }
    // Slack so that 0:1:0.001 includes 1 despite rounding.
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(GridError(format!("grid has {n} points")));
    }
    Ok((0..=n).map(|i| tidy(start + i as f64 * step)).collect())
}

/// Strips the float noise of `start + i * step` so that printed grid keys
/// read like the user typed them.
fn tidy(x: f64) -> f64 {
    let rounded = (x * 1e12).round() / 1e12;
    if (rounded - x).abs() < 1e-12 {
        rounded
    } else {
        x
    }
}

/// Checks every value against a closed or open interval.
pub fn check_range(name: &str, values: &[f64], lo: f64, hi: f64, open_lo: bool, open_hi: bool) -> Result<(), GridError> {
    for &v in values {
        let above = if open_lo { v > lo } else { v >= lo };
        let below = if open_hi { v < hi } else { v <= hi };
        if !(above && below) {
            let l = if open_lo { '(' } else { '[' };
            let h = if open_hi { ')' } else { ']' };
            return Err(GridError(format!("--{name} value {v} outside {l}{lo}, {hi}{h}")));
        }
    }
    Ok(())
}
