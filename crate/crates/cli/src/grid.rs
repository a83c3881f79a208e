//! Parameter grids: `start:step:stop` ranges or comma-separated lists.

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
        return Err(GridError(format!("grid values must be finite, got {s:?}")));
    }
    Ok(v)
}

/// Parses `start:step:stop` (inclusive; `step = 0` means the single point
/// `start`) or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, GridError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (number(start)?, number(step)?, number(stop)?);
            if step == 0.0 {
                return Ok(vec![start]);
            }
            if step < 0.0 {
                return Err(GridError(format!("grid step must be positive, got {step}")));
            }
            if stop < start {
                return Err(GridError(format!("grid stop {stop} is below start {start}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 10_000_000 {
                return Err(GridError(format!("grid has {count} points")));
            }
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        [list] => {
            let values = list.split(',').filter(|s| !s.trim().is_empty()).map(number).collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() {
                return Err(GridError("empty grid".into()));
            }
            Ok(values)
        }
        _ => Err(GridError(format!("expected start:step:stop or a comma list, got {spec:?}"))),
    }
}

/// Comma-separated positive integers.
pub fn parse_counts(spec: &str) -> Result<Vec<u64>, GridError> {
    let values = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<u64>().map_err(|_| GridError(format!("not a non-negative integer: {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(GridError("empty list".into()));
    }
    Ok(values)
}
