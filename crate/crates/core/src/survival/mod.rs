//! Survival amplitude, the non-decay probability `P = |A|^2`, and their
//! short- and long-time expansions.
//!
//! `A(t) = <psi_i(t)|psi(t)>`, where `psi_i(t) = e^{it - |x|}` is the initial
//! state evolved under the old well. This differs from `<psi(0)|psi(t)>` by
//! the phase `e^{-it}` only, so `P` is unaffected, and `A = 1` exactly when
//! the well is left unchanged.
//!
//! With `s = e^{i pi/4} sqrt(t)` the closed form is
//!
//! ```text
//! (1+mu)^2 A = e^{-it} [ erfcx(s) (1 + mu^2 - 2it(1 - mu^2)) + 2(1 - mu^2) s/sqrt(pi)
//!                        - 2 mu erfcx(mu s) ] + 4 mu e^{it(mu^2 - 1)}
//! ```
//!
//! Both erfcx arguments lie on the first diagonal, so nothing overflows.

pub mod fit;

pub use fit::{
    fit_exponential, fit_power_law, local_maxima, mean_spacing, ExponentialFit, PowerLawFit,
};

use crate::cerf::{erfcx, sqrt_it};
use crate::error::{check_mu, check_time, Error, Result};
use crate::exact::psi_exact;
use crate::quad::{integrate, QuadConfig};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Long-time forms need `t > LONG_TIME_MIN`.
pub const LONG_TIME_MIN: f64 = 10.0;
/// Short-time forms need `t < SHORT_TIME_MAX`.
pub const SHORT_TIME_MAX: f64 = 0.1;
/// Absolute tolerance of the overlap quadrature.
pub const OVERLAP_QUAD_TOL: f64 = 1e-7;

/// How a series of amplitudes was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurvivalMethod {
    Exact,
    Quadrature,
    ShortTime,
    LongTime,
    /// Overlap taken from a grid propagation.
    Oracle,
}

impl SurvivalMethod {
    pub fn name(self) -> &'static str {
        match self {
            SurvivalMethod::Exact => "exact",
            SurvivalMethod::Quadrature => "quadrature",
            SurvivalMethod::ShortTime => "short_time",
            SurvivalMethod::LongTime => "long_time",
            SurvivalMethod::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for SurvivalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SurvivalMethod::Exact),
            "quadrature" => Ok(SurvivalMethod::Quadrature),
            "short_time" | "short-time" => Ok(SurvivalMethod::ShortTime),
            "long_time" | "long-time" => Ok(SurvivalMethod::LongTime),
            "oracle" => Ok(SurvivalMethod::Oracle),
            other => Err(Error::InvalidParameter {
                name: "method",
                reason: format!("unknown method `{other}`"),
            }),
        }
    }
}

/// Amplitudes and probabilities sampled at increasing times.
///
/// `probabilities` are clamped to `[0, 1]`; `escape` holds `1 - P` formed
/// without cancellation from the raw amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalSeries {
    pub times: Vec<f64>,
    pub amplitudes: Vec<Complex>,
    pub probabilities: Vec<f64>,
    pub escape: Vec<f64>,
    pub mu: f64,
    pub method: SurvivalMethod,
}

impl SurvivalSeries {
    pub fn from_amplitudes(
        times: Vec<f64>,
        amplitudes: Vec<Complex>,
        mu: f64,
        method: SurvivalMethod,
    ) -> Result<Self> {
        if times.len() != amplitudes.len() {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("{} amplitudes for {} times", amplitudes.len(), times.len()),
            });
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "times",
                reason: format!("must be strictly increasing, found {} then {}", w[0], w[1]),
            });
        }
        let probabilities = amplitudes.iter().map(|a| clamp_probability(a.norm_sqr())).collect();
        let escape = amplitudes.iter().map(|&a| escape_from_amplitude(a)).collect();
        Ok(SurvivalSeries {
            times,
            amplitudes,
            probabilities,
            escape,
            mu,
            method,
        })
    }

    /// Closed-form amplitudes at the given times.
    pub fn exact(times: Vec<f64>, mu: f64) -> Result<Self> {
        let amps = times
            .iter()
            .map(|&t| survival_amplitude(t, mu))
            .collect::<Result<Vec<_>>>()?;
        SurvivalSeries::from_amplitudes(times, amps, mu, SurvivalMethod::Exact)
    }

    /// Series produced by any of the evaluation routes.
    pub fn evaluate(times: Vec<f64>, mu: f64, method: SurvivalMethod, order: usize) -> Result<Self> {
        let amp = |t: f64| match method {
            SurvivalMethod::Exact => survival_amplitude(t, mu),
            SurvivalMethod::Quadrature => survival_overlap_numeric(t, mu),
            SurvivalMethod::ShortTime => survival_amplitude_shorttime(t, mu, order),
            SurvivalMethod::LongTime => survival_amplitude_longtime(t, mu),
            SurvivalMethod::Oracle => Err(Error::InvalidParameter {
                name: "method",
                reason: "oracle series come from a grid propagation".into(),
            }),
        };
        let amps = times.iter().map(|&t| amp(t)).collect::<Result<Vec<_>>>()?;
        SurvivalSeries::from_amplitudes(times, amps, mu, method)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `(t, 1 - P)` pairs, ready for [`fit_power_law`].
    pub fn escape_points(&self) -> Vec<(f64, f64)> {
        self.times.iter().copied().zip(self.escape.iter().copied()).collect()
    }
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `1 - |A|^2` written as `2 Re(1 - A) - |1 - A|^2`.
pub fn escape_from_amplitude(a: Complex) -> f64 {
    let d = Complex::new(1.0, 0.0) - a;
    2.0 * d.re - d.norm_sqr()
}

/// Exact survival amplitude. `A(0) = 1`.
pub fn survival_amplitude(t: f64, mu: f64) -> Result<Complex> {
    check_mu(mu)?;
    if t == 0.0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    check_time(t)?;
    if mu == 0.0 {
        return Ok(amplitude_mu0(t));
    }
    let s = sqrt_it(t);
    let m2 = mu * mu;
    let poly = Complex::new(1.0 + m2, -2.0 * t * (1.0 - m2));
    let bracket = erfcx(s) * poly + 2.0 * (1.0 - m2) * FRAC_1_SQRT_PI * s - 2.0 * mu * erfcx(mu * s);
    let total = Complex::from_polar(1.0, -t) * bracket
        + Complex::from_polar(4.0 * mu, t * (m2 - 1.0));
    Ok(total / ((1.0 + mu) * (1.0 + mu)))
}

/// Survival amplitude for release into free space (`mu = 0`).
pub fn survival_amplitude_mu0(t: f64) -> Result<Complex> {
    if t == 0.0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    check_time(t)?;
    Ok(amplitude_mu0(t))
}

fn amplitude_mu0(t: f64) -> Complex {
    let s = sqrt_it(t);
    Complex::from_polar(1.0, -t)
        * (erfcx(s) * Complex::new(1.0, -2.0 * t) + 2.0 * FRAC_1_SQRT_PI * s)
}

/// `P(t) = |A(t)|^2`, clamped to `[0, 1]`.
pub fn survival_probability(t: f64, mu: f64) -> Result<f64> {
    Ok(clamp_probability(survival_amplitude(t, mu)?.norm_sqr()))
}

/// `1 - P(t)` without cancellation at small `t`.
pub fn escape_probability(t: f64, mu: f64) -> Result<f64> {
    Ok(escape_from_amplitude(survival_amplitude(t, mu)?))
}

/// `P(infinity) = 16 mu^2 / (1 + mu)^4`.
pub fn survival_probability_limit(mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let q = 1.0 + mu;
    Ok(16.0 * mu * mu / (q * q * q * q))
}

fn check_long_time(t: f64, mu: f64) -> Result<()> {
    check_mu(mu)?;
    if mu == 0.0 {
        return Err(Error::NoBoundState(mu));
    }
    if !(t > LONG_TIME_MIN) || !t.is_finite() {
        return Err(Error::OutsideRegime(format!("needs t > {LONG_TIME_MIN}, got t = {t}")));
    }
    Ok(())
}

/// Long-time amplitude: the bound-state plateau plus its leading `t^{-3/2}`
/// correction.
pub fn survival_amplitude_longtime(t: f64, mu: f64) -> Result<Complex> {
    check_long_time(t, mu)?;
    let q = 1.0 + mu;
    let plateau = Complex::from_polar(4.0 * mu / (q * q), t * (mu * mu - 1.0));
    let d = mu - 1.0 / mu;
    let corr = Complex::from_polar(
        d * d * FRAC_1_SQRT_PI / (4.0 * mu * t.powf(1.5)),
        -t * mu * mu - 0.75 * PI,
    );
    Ok(plateau * (1.0 + corr))
}

/// Long-time non-decay probability, oscillating about `P(infinity)` with
/// angular frequency `mu^2` and a `t^{-3/2}` envelope.
pub fn survival_probability_longtime(t: f64, mu: f64) -> Result<f64> {
    check_long_time(t, mu)?;
    let d = mu - 1.0 / mu;
    let rel = d * d * FRAC_1_SQRT_PI / (2.0 * mu * t.powf(1.5));
    Ok(survival_probability_limit(mu)? * (1.0 + rel * (t * mu * mu + 0.75 * PI).cos()))
}

fn check_short_time(t: f64) -> Result<()> {
    if t == 0.0 {
        return Ok(());
    }
    check_time(t)?;
    if t >= SHORT_TIME_MAX {
        return Err(Error::OutsideRegime(format!("needs t < {SHORT_TIME_MAX}, got t = {t}")));
    }
    Ok(())
}

/// Fractional-power expansion of `A(t)`, keeping the terms `t^{k/2}` with
/// `k <= order` (so `order = 5` runs through `t^{5/2}`).
pub fn survival_amplitude_shorttime(t: f64, mu: f64, order: usize) -> Result<Complex> {
    check_mu(mu)?;
    check_short_time(t)?;
    if !(1..=5).contains(&order) {
        return Err(Error::InvalidParameter {
            name: "order",
            reason: format!("must be between 1 and 5, got {order}"),
        });
    }
    let d = mu - 1.0;
    let d2 = d * d;
    let mut sum = Complex::new(1.0, 0.0);
    if order >= 2 {
        sum += Complex::new(0.0, 2.0 * d * t);
    }
    if order >= 3 {
        sum += Complex::from_polar(8.0 * d2 * t.powf(1.5) * FRAC_1_SQRT_PI / 3.0, 0.75 * PI);
    }
    if order >= 4 {
        sum -= d2 * mu * t * t;
    }
    if order >= 5 {
        sum -= Complex::from_polar(
            8.0 * d2 * (2.0 * mu * mu - 1.0) * t.powf(2.5) * FRAC_1_SQRT_PI / 15.0,
            0.25 * PI,
        );
    }
    Ok(sum)
}

/// Leading short-time escape probability `(8/3) sqrt(2/pi) (mu-1)^2 t^{3/2}`.
pub fn escape_probability_shorttime(t: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    check_short_time(t)?;
    Ok(escape_coefficient(mu) * t.powf(1.5))
}

/// Coefficient of `t^{3/2}` in `1 - P`.
pub fn escape_coefficient(mu: f64) -> f64 {
    let d = mu - 1.0;
    8.0 / 3.0 * (2.0 / PI).sqrt() * d * d
}

/// `int psi_initial(x, t)^* psi(x, t) dx` by adaptive quadrature over
/// `|x| <= 40 + 10 sqrt(t)`, using parity to integrate one side only.
///
/// The initial state is carried along with its own phase `e^{it}`, the frame
/// in which the closed form is written and an unchanged well gives `A = 1`.
pub fn survival_overlap_numeric(t: f64, mu: f64) -> Result<Complex> {
    check_time(t)?;
    check_mu(mu)?;
    let half = 40.0 + 10.0 * t.sqrt();
    let mut points: Vec<f64> = vec![0.0, 1.0, 2.0, 4.0, 8.0, 16.0];
    points.retain(|&p| p < half);
    points.push(half);
    let integrand = |x: f64| psi_exact(x, t, mu).map(|v| v * (-x).exp()).unwrap_or_default();
    let r = integrate(integrand, &points, QuadConfig::with_tolerance(0.5 * OVERLAP_QUAD_TOL))?;
    Ok(2.0 * Complex::from_polar(1.0, -t) * r.value)
}
