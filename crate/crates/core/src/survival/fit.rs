//! Log-space line fits and peak extraction for decay curves.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Minimum number of samples a fit window must hold.
pub const MIN_FIT_SAMPLES: usize = 8;

/// `y = coefficient * t^exponent`, fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub rms_log_residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// `y = amplitude * exp(-rate t)`, fitted in log-linear space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFit {
    pub rate: f64,
    pub amplitude: f64,
    pub rms_log_residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

struct Line {
    slope: f64,
    intercept: f64,
    rms: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Line {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Line {
        slope,
        intercept,
        rms: (ss / n).sqrt(),
    }
}

/// Points with `t` inside the closed window, checked for count and sign.
fn window_points(points: &[(f64, f64)], window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: format!("need 0 < t_lo < t_hi, got ({lo}, {hi})"),
        });
    }
    let inside: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(t, _)| t >= lo && t <= hi)
        .collect();
    if inside.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            found: inside.len(),
            required: MIN_FIT_SAMPLES,
        });
    }
    if let Some(&(t, value)) = inside.iter().find(|&&(_, y)| !(y > 0.0)) {
        return Err(Error::NonPositiveOrdinate { t, value });
    }
    Ok(inside)
}

pub fn fit_power_law(points: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let inside = window_points(points, window)?;
    let xs: Vec<f64> = inside.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = inside.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys);
    Ok(PowerLawFit {
        exponent: line.slope,
        coefficient: line.intercept.exp(),
        rms_log_residual: line.rms,
        window,
        samples: inside.len(),
    })
}

pub fn fit_exponential(points: &[(f64, f64)], window: (f64, f64)) -> Result<ExponentialFit> {
    let inside = window_points(points, window)?;
    let xs: Vec<f64> = inside.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = inside.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys);
    Ok(ExponentialFit {
        rate: -line.slope,
        amplitude: line.intercept.exp(),
        rms_log_residual: line.rms,
        window,
        samples: inside.len(),
    })
}

/// Interior local maxima of `values`, each refined by the parabola through
/// the peak sample and its two neighbours.
pub fn local_maxima(times: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let n = times.len().min(values.len());
    let mut peaks = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if !(b > a && b >= c) {
            continue;
        }
        let curv = a - 2.0 * b + c;
        let shift = if curv < 0.0 { 0.5 * (a - c) / curv } else { 0.0 };
        // uniform spacing assumed locally
        let h = 0.5 * (times[i + 1] - times[i - 1]);
        peaks.push((times[i] + shift * h, b - 0.25 * (a - c) * shift));
    }
    peaks
}

/// Mean distance between consecutive peak times.
pub fn mean_spacing(peaks: &[(f64, f64)]) -> Option<f64> {
    if peaks.len() < 2 {
        return None;
    }
    Some((peaks[peaks.len() - 1].0 - peaks[0].0) / (peaks.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    #[test]
    fn recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> = log_grid(1e-4, 1e-2, 50)
            .into_iter()
            .map(|t| (t, 5.0 * t.powf(1.5)))
            .collect();
        let fit = fit_power_law(&pts, (1e-4, 1e-2)).unwrap();
        assert!((fit.exponent - 1.5).abs() <= 1e-12);
        assert!((fit.coefficient - 5.0).abs() <= 1e-12);
        assert!(fit.rms_log_residual < 1e-12);
        assert!(fit.samples >= 49);
    }

    #[test]
    fn recovers_exact_exponential() {
        let pts: Vec<(f64, f64)> = (0..30).map(|i| {
            let t = 0.1 * i as f64;
            (t, 2.0 * (-0.7 * t).exp())
        }).collect();
        let fit = fit_exponential(&pts, (0.05, 3.0)).unwrap();
        assert!((fit.rate - 0.7).abs() < 1e-12);
        assert!((fit.amplitude - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let few: Vec<(f64, f64)> = (1..6).map(|i| (i as f64, 1.0)).collect();
        assert!(matches!(
            fit_power_law(&few, (0.5, 10.0)),
            Err(Error::InsufficientSamples { found: 5, .. })
        ));
        let mut pts: Vec<(f64, f64)> = (1..20).map(|i| (i as f64, 1.0)).collect();
        pts[3].1 = 0.0;
        assert!(matches!(fit_power_law(&pts, (0.5, 30.0)), Err(Error::NonPositiveOrdinate { .. })));
        assert!(fit_power_law(&pts, (3.0, 2.0)).is_err());
    }

    #[test]
    fn peaks_of_a_cosine() {
        let ts: Vec<f64> = (0..4001).map(|i| i as f64 * 0.005).collect();
        let ys: Vec<f64> = ts.iter().map(|t| (3.0 * t).cos()).collect();
        let peaks = local_maxima(&ts, &ys);
        assert_eq!(peaks.len(), 9);
        let sp = mean_spacing(&peaks).unwrap();
        assert!((sp - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-6);
        assert!(peaks.iter().all(|p| (p.1 - 1.0).abs() < 1e-6));
    }
}
