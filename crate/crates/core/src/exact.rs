//! Closed-form propagator and post-quench wavefunction, with its limiting forms.
//!
//! Every `exp(a) * erfc(z)` product is rewritten as `exp(a - z^2) * erfcx(z)`
//! with the exponent simplified by hand. With `s = e^{i pi/4} sqrt(t)` and
//! `a = |x| / (2 s)` the exponents all collapse to the free phase
//! `exp(i x^2 / 4t)`, so the wavefunction reads
//!
//! ```text
//! psi = 1/2 e^{i x^2/4t} [ erfcx(s - a) + r erfcx(s + a) - c erfcx(mu s - a) ]
//!       + c e^{i mu^2 t - mu |x|},          r = (1-mu)/(1+mu), c = 2 mu/(1+mu)
//! ```
//!
//! When an erfcx argument has negative real part the reflection
//! `erfcx(z) = 2 e^{z^2} - erfcx(-z)` is applied with `e^{i x^2/4t} e^{z^2}`
//! substituted analytically (it is `e^{it - |x|}` or `e^{i mu^2 t - mu|x|}`).

use crate::cerf::{erfcx, sqrt_it};
use crate::error::{check_mu, check_time, Error, Result};
use crate::field::ComplexField;
use crate::model::{bound_coefficient, psi_initial};
use crate::quad::{integrate, QuadConfig};
use crate::Complex;
use std::f64::consts::PI;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Absolute tolerance for kernel quadrature.
pub const KERNEL_QUAD_TOL: f64 = 1e-8;

/// Far-field and short-time forms require `x^2 > FAR_FIELD_RATIO * t`.
pub const FAR_FIELD_RATIO: f64 = 25.0;

/// Long-time forms require `t > LONG_TIME_RATIO * max(1, |x|)`.
pub const LONG_TIME_RATIO: f64 = 10.0;

/// Free-particle propagator `exp(i (x-x')^2 / 4t) / (2 sqrt(i pi t))`.
pub fn kernel_free(x: f64, xp: f64, t: f64) -> Result<Complex> {
    check_time(t)?;
    Ok(free_kernel_unchecked(x - xp, t))
}

#[inline]
fn free_kernel_unchecked(dx: f64, t: f64) -> Complex {
    let amp = 0.5 / (PI * t).sqrt();
    Complex::from_polar(amp, dx * dx / (4.0 * t) - 0.25 * PI)
}

/// Propagator of the `-2 mu delta(x)` well.
pub fn kernel(x: f64, xp: f64, t: f64, mu: f64) -> Result<Complex> {
    check_time(t)?;
    check_mu(mu)?;
    Ok(kernel_unchecked(x, xp, t, mu))
}

fn kernel_unchecked(x: f64, xp: f64, t: f64, mu: f64) -> Complex {
    let free = free_kernel_unchecked(x - xp, t);
    if mu == 0.0 {
        return free;
    }
    let u = x.abs() + xp.abs();
    let s = sqrt_it(t);
    let z = u / (2.0 * s) - mu * s;
    let phase = u * u / (4.0 * t);
    // exp(-mu u + i mu^2 t) is what exp(i u^2/4t) exp(z^2) reduces to
    let bound = || Complex::from_polar((-mu * u).exp(), mu * mu * t);
    free + 0.5 * mu * phased_erfcx(z, phase, bound)
}

/// `e^{i phase} erfcx(z)`, reflecting to `Re z >= 0` with the analytic
/// value of `e^{i phase} e^{z^2}` supplied by `phased_exp_sq`.
#[inline]
fn phased_erfcx(z: Complex, phase: f64, phased_exp_sq: impl FnOnce() -> Complex) -> Complex {
    let rot = Complex::from_polar(1.0, phase);
    if z.re >= 0.0 {
        rot * erfcx(z)
    } else {
        2.0 * phased_exp_sq() - rot * erfcx(-z)
    }
}

/// Exact post-quench wavefunction for the initial state `exp(-|x|)`.
///
/// `t = 0` is accepted and returns the initial state.
pub fn psi_exact(x: f64, t: f64, mu: f64) -> Result<Complex> {
    check_mu(mu)?;
    if t == 0.0 {
        return Ok(psi_initial(x, 0.0));
    }
    check_time(t)?;
    Ok(psi_exact_unchecked(x, t, mu))
}

fn psi_exact_unchecked(x: f64, t: f64, mu: f64) -> Complex {
    if mu == 0.0 {
        return psi_mu0_unchecked(x, t);
    }
    if mu == 1.0 {
        // nothing changes: the initial bound state just keeps its phase
        return psi_initial(x, t);
    }
    let ax = x.abs();
    let s = sqrt_it(t);
    let a = ax / (2.0 * s);
    let phase = x * x / (4.0 * t);
    let r = (1.0 - mu) / (1.0 + mu);
    let c = 2.0 * mu / (1.0 + mu);
    let initial = || Complex::from_polar((-ax).exp(), t);
    let bound = Complex::from_polar((-mu * ax).exp(), mu * mu * t);

    let t1 = phased_erfcx(s - a, phase, initial);
    let t2 = Complex::from_polar(1.0, phase) * erfcx(s + a);
    let t3 = phased_erfcx(mu * s - a, phase, || bound);
    0.5 * (t1 + r * t2 - c * t3) + c * bound
}

/// Free release (`mu = 0`) of the initial bound state.
pub fn psi_exact_mu0(x: f64, t: f64) -> Result<Complex> {
    check_time(t)?;
    Ok(psi_mu0_unchecked(x, t))
}

fn psi_mu0_unchecked(x: f64, t: f64) -> Complex {
    let ax = x.abs();
    let s = sqrt_it(t);
    let a = ax / (2.0 * s);
    let phase = x * x / (4.0 * t);
    let initial = || Complex::from_polar((-ax).exp(), t);
    let t1 = phased_erfcx(s - a, phase, initial);
    let t2 = Complex::from_polar(1.0, phase) * erfcx(s + a);
    0.5 * (t1 + t2)
}

fn check_far_field(x: f64, t: f64) -> Result<()> {
    if x * x > FAR_FIELD_RATIO * t {
        Ok(())
    } else {
        Err(Error::OutsideRegime(format!(
            "needs x^2 > {FAR_FIELD_RATIO} t, got x = {x}, t = {t}"
        )))
    }
}

/// Far-field form for `x^2 / t >> 1`:
/// `(1 - mu) e^{i x^2/4t} / (sqrt(i pi t) (1 + (x / 2t)^2))`.
///
/// The exponentially small remnant of the initial state is dropped.
pub fn psi_farfield(x: f64, t: f64, mu: f64) -> Result<Complex> {
    check_time(t)?;
    check_mu(mu)?;
    check_far_field(x, t)?;
    let q = x / (2.0 * t);
    let amp = (1.0 - mu) / ((PI * t).sqrt() * (1.0 + q * q));
    Ok(Complex::from_polar(amp, x * x / (4.0 * t) - 0.25 * PI))
}

/// Short-time form
/// `e^{it - |x|} - 4 (1 - mu) (it)^{3/2} e^{i x^2/4t} / (sqrt(pi) x^2)`.
pub fn psi_shorttime(x: f64, t: f64, mu: f64) -> Result<Complex> {
    check_time(t)?;
    check_mu(mu)?;
    check_far_field(x, t)?;
    // (it)^{3/2} = t^{3/2} e^{i 3pi/4}
    let corr = Complex::from_polar(
        4.0 * (1.0 - mu) * t.powf(1.5) * FRAC_1_SQRT_PI / (x * x),
        0.75 * PI + x * x / (4.0 * t),
    );
    Ok(psi_initial(x, t) - corr)
}

/// Long-time form: dispersive tail plus the surviving bound-state component,
/// `(1/mu - 1) sqrt(i/pi) |x| t^{-3/2} e^{i x^2/4t} + (2 mu/(1+mu)) e^{i mu^2 t - mu|x|}`.
pub fn psi_longtime(x: f64, t: f64, mu: f64) -> Result<Complex> {
    check_time(t)?;
    check_mu(mu)?;
    if mu == 0.0 {
        return Err(Error::NoBoundState(mu));
    }
    if t <= LONG_TIME_RATIO * x.abs().max(1.0) {
        return Err(Error::OutsideRegime(format!(
            "needs t > {LONG_TIME_RATIO} max(1, |x|), got x = {x}, t = {t}"
        )));
    }
    let ax = x.abs();
    let tail = Complex::from_polar(
        (1.0 / mu - 1.0) * FRAC_1_SQRT_PI * ax * t.powf(-1.5),
        0.25 * PI + x * x / (4.0 * t),
    );
    let bound = Complex::from_polar(bound_coefficient(mu)? * (-mu * ax).exp(), mu * mu * t);
    Ok(tail + bound)
}

/// Half-width of the integration box for an initial state decaying like
/// `exp(-|x'|)`.
pub fn truncation_half_width(x: f64, t: f64) -> f64 {
    x.abs() + 40.0 + 10.0 * t.sqrt()
}

/// Evaluate `int K(x, x'; t) psi0(x') dx'` by adaptive quadrature over
/// `[-L, L]`, `L = |x| + 40 + 10 sqrt(t)`, split at the kink `x' = 0` and the
/// free stationary point `x' = x`.
pub fn propagate_by_kernel<F>(psi0: F, x: f64, t: f64, mu: f64) -> Result<Complex>
where
    F: Fn(f64) -> Complex,
{
    check_time(t)?;
    check_mu(mu)?;
    let half = truncation_half_width(x, t);
    kernel_quadrature(psi0, x, t, mu, -half, half)
}

/// Kernel propagation of a sampled initial field, integrating over the
/// field's own domain with cubic interpolation between nodes.
pub fn propagate_field_by_kernel(psi0: &ComplexField, x: f64, t: f64, mu: f64) -> Result<Complex> {
    check_time(t)?;
    check_mu(mu)?;
    let edge = psi0.values[0].norm().max(psi0.values[psi0.values.len() - 1].norm());
    if edge >= 1e-12 {
        return Err(Error::InvalidParameter {
            name: "psi0",
            reason: format!("boundary amplitude {edge:.2e} is not below 1e-12; enlarge the box"),
        });
    }
    kernel_quadrature(
        |xp| psi0.interpolate(xp),
        x,
        t,
        mu,
        psi0.grid.x_min,
        psi0.grid.x_max,
    )
}

fn kernel_quadrature<F>(psi0: F, x: f64, t: f64, mu: f64, lo: f64, hi: f64) -> Result<Complex>
where
    F: Fn(f64) -> Complex,
{
    let mut points = vec![lo, hi];
    for p in [0.0, x, -x] {
        if p > lo && p < hi {
            points.push(p);
        }
    }
    let r = integrate(
        |xp| kernel_unchecked(x, xp, t, mu) * psi0(xp),
        &points,
        QuadConfig::with_tolerance(KERNEL_QUAD_TOL),
    )?;
    Ok(r.value)
}

/// `int |psi(x, t)|^2 dx` by adaptive quadrature on `x >= 0`, doubled by
/// parity. The box extends until the `x^-4` far tail left outside it is below
/// `tol`, estimated from the far-field amplitude.
pub fn norm_sqr_by_quadrature(t: f64, mu: f64, tol: f64) -> Result<f64> {
    check_time(t)?;
    check_mu(mu)?;
    let tail_weight = 16.0 * t.powi(3) * (1.0 - mu).powi(2) / (3.0 * PI);
    let reach = (tail_weight / tol).cbrt().max(40.0 + 10.0 * t.sqrt());
    let mut points = vec![0.0];
    let mut p = 1.0;
    while p < reach {
        points.push(p);
        p *= 2.0;
    }
    points.push(reach);
    let r = integrate(
        |x| Complex::new(psi_exact_unchecked(x, t, mu).norm_sqr(), 0.0),
        &points,
        QuadConfig::with_tolerance(0.25 * tol),
    )?;
    Ok(2.0 * r.value.re)
}
