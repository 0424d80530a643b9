//! Fringe contrast and fringe phase extraction on sampled patterns.

use std::f64::consts::PI;

use super::AtomPattern;
use crate::error::{Error, Result};

/// Detector interval used for fringe analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeWindow {
    pub lo: f64,
    pub hi: f64,
}

impl FringeWindow {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// `+-periods` fringe periods around `x = 0`.
    pub fn central(period: f64, periods: f64) -> Self {
        Self::new(-periods * period, periods * period)
    }

    fn check(&self, period: f64) -> Result<()> {
        if !(self.hi - self.lo >= 3.0 * period) {
            return Err(Error::WindowTooNarrow {
                lo: self.lo,
                hi: self.hi,
                period,
            });
        }
        Ok(())
    }

    fn indices(&self, positions: &[f64]) -> std::ops::Range<usize> {
        let start = positions.partition_point(|&x| x < self.lo);
        let end = positions.partition_point(|&x| x <= self.hi);
        start..end
    }
}

/// Vertex of the parabola through three equally spaced samples, as
/// `(offset in samples from the middle one, value)`.
fn parabolic_vertex(y0: f64, y1: f64, y2: f64) -> (f64, f64) {
    let curvature = y0 - 2.0 * y1 + y2;
    if curvature == 0.0 {
        return (0.0, y1);
    }
    let offset = 0.5 * (y0 - y2) / curvature;
    (offset, y1 - 0.25 * (y0 - y2) * offset)
}

/// Peak offset, in samples from the middle one, of `A cos(theta (j - t))`
/// sampled at `j = -1, 0, 1`.
fn cosine_vertex(y0: f64, y1: f64, y2: f64, theta: f64) -> f64 {
    (y2 - y0).atan2(2.0 * y1 * theta.sin()) / theta
}

enum Extremum {
    Max(f64),
    Min(f64),
}

fn local_extrema(values: &[f64], range: std::ops::Range<usize>) -> Vec<Extremum> {
    let lo = range.start.max(1);
    let hi = range.end.min(values.len().saturating_sub(1));
    let mut out = Vec::new();
    for i in lo..hi {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if b > a && b >= c {
            out.push(Extremum::Max(parabolic_vertex(a, b, c).1));
        } else if b < a && b <= c {
            out.push(Extremum::Min(parabolic_vertex(a, b, c).1));
        }
    }
    out
}

/// `(max - min) / (max + min)` over the interpolated local extrema in the
/// window. Zero when the window holds no maximum or no minimum.
pub fn visibility(pattern: &AtomPattern, window: FringeWindow, period: f64) -> Result<f64> {
    window.check(period)?;
    let range = window.indices(pattern.positions());
    let extrema = local_extrema(pattern.values(), range);
    let max = extrema
        .iter()
        .filter_map(|e| match e {
            Extremum::Max(v) => Some(*v),
            _ => None,
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let min = extrema
        .iter()
        .filter_map(|e| match e {
            Extremum::Min(v) => Some(*v),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min);
    if !max.is_finite() || !min.is_finite() {
        return Ok(0.0);
    }
    let min = min.max(0.0);
    if max + min <= 0.0 {
        return Ok(0.0);
    }
    Ok(((max - min) / (max + min)).clamp(0.0, 1.0))
}

/// Number of local maxima of `pattern` inside `[lo, hi]`.
pub fn fringe_count(pattern: &AtomPattern, lo: f64, hi: f64) -> usize {
    let range = FringeWindow::new(lo, hi).indices(pattern.positions());
    local_extrema(pattern.values(), range)
        .iter()
        .filter(|e| matches!(e, Extremum::Max(_)))
        .count()
}

/// Bounds of the central lobe: the first local minima on either side of
/// `x = 0`, or the grid edges if there are none.
pub fn central_envelope(pattern: &AtomPattern) -> (f64, f64) {
    let x = pattern.positions();
    let v = pattern.values();
    let c = pattern.grid().center_index();
    let right = (c + 1..x.len().saturating_sub(1))
        .find(|&i| v[i] < v[i - 1] && v[i] <= v[i + 1])
        .map_or(x[x.len() - 1], |i| x[i]);
    let left = (1..c)
        .rev()
        .find(|&i| v[i] < v[i + 1] && v[i] <= v[i - 1])
        .map_or(x[0], |i| x[i]);
    (left, right)
}

/// Fringe phase of `pattern` relative to `reference`, in `(-pi, pi]`.
///
/// Mean-subtracted cross-correlation over `window` locates the shift `dx`
/// of `pattern` against `reference`, refined by interpolating
/// the peak with a cosine of the known period. Interferometer phase grows with `x`, so a rightward shift is a
/// negative phase: `-2 pi dx / period`.
pub fn fringe_phase_shift(
    pattern: &AtomPattern,
    reference: &AtomPattern,
    period: f64,
    window: FringeWindow,
) -> Result<f64> {
    if pattern.positions() != reference.positions() {
        return Err(Error::GridMismatch);
    }
    window.check(period)?;
    let x = pattern.positions();
    let spacing = pattern.grid().spacing();
    let per_period = period / spacing;
    let max_lag = (0.5 * per_period).ceil() as isize + 2;
    let range = window.indices(x);
    if range.start < max_lag as usize || range.end + max_lag as usize > x.len() {
        return Err(Error::WindowTooNarrow {
            lo: window.lo,
            hi: window.hi,
            period,
        });
    }
    let p = pattern.values();
    let r = reference.values();
    // trapezoid weights: a window spanning whole periods sums a sampled
    // cosine exactly
    let weight = |i: usize| if i == range.start || i + 1 == range.end { 0.5 } else { 1.0 };
    let n: f64 = range.clone().map(weight).sum();
    let p_mean = range.clone().map(|i| weight(i) * p[i]).sum::<f64>() / n;
    let r_mean = range.clone().map(|i| weight(i) * r[i]).sum::<f64>() / n;
    let corr = |lag: isize| -> f64 {
        range
            .clone()
            .map(|i| weight(i) * (p[i] - p_mean) * (r[(i as isize - lag) as usize] - r_mean))
            .sum()
    };
    let lags: Vec<isize> = (-max_lag..=max_lag).collect();
    let values: Vec<f64> = lags.iter().map(|&l| corr(l)).collect();
    let best = (1..values.len() - 1)
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("at least three lags");
    let offset = cosine_vertex(values[best - 1], values[best], values[best + 1], 2.0 * PI / per_period);
    let shift = (lags[best] as f64 + offset) * spacing;
    Ok(wrap_phase(-2.0 * PI * shift / period))
}

/// Wrap into `(-pi, pi]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let mut w = phase.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}
