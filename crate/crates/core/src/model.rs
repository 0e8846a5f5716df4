//! Model parameters, units and the bound eigenstates of the two wells.
//!
//! Units: `hbar = 1`, `2m = 1`. Lengths are measured in units of `1/alpha`
//! and times in units of `1/alpha^2`, where `-2 alpha delta(x)` is the well
//! before the quench. After the quench the well is `-2 mu delta(x)` with
//! `mu = lambda / alpha`.

use crate::error::{check_mu, Error, Result};
use crate::Complex;
use serde::{Deserialize, Serialize};

/// Quench ratio plus, optionally, the physical strengths it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mu: f64,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
}

impl ModelParams {
    pub fn new(mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(ModelParams {
            mu,
            alpha: None,
            lambda: None,
        })
    }

    /// Build from the physical well strengths before (`alpha`) and after
    /// (`lambda`) the quench.
    pub fn from_strengths(alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be positive and finite, got {alpha}"),
            });
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be non-negative and finite, got {lambda}"),
            });
        }
        Ok(ModelParams {
            mu: lambda / alpha,
            alpha: Some(alpha),
            lambda: Some(lambda),
        })
    }

    pub fn units(&self) -> Option<UnitMap> {
        self.alpha.map(|alpha| UnitMap { alpha })
    }
}

/// Conversion between dimensionless and physical (`hbar = 2m = 1`) variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitMap {
    pub alpha: f64,
}

impl UnitMap {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(UnitMap { alpha })
        } else {
            Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be positive and finite, got {alpha}"),
            })
        }
    }

    pub fn x_physical(&self, x: f64) -> f64 {
        x / self.alpha
    }

    pub fn t_physical(&self, t: f64) -> f64 {
        t / (self.alpha * self.alpha)
    }

    pub fn x_dimensionless(&self, x: f64) -> f64 {
        x * self.alpha
    }

    pub fn t_dimensionless(&self, t: f64) -> f64 {
        t * self.alpha * self.alpha
    }
}

/// Bound state of the pre-quench well, `exp(-|x| + i t)`. Unit norm.
pub fn psi_initial(x: f64, t: f64) -> Complex {
    Complex::from_polar((-x.abs()).exp(), t)
}

/// Normalized bound state of the post-quench well,
/// `sqrt(mu) exp(-mu |x| + i mu^2 t)`.
pub fn psi_bound_final(x: f64, t: f64, mu: f64) -> Result<Complex> {
    require_bound(mu)?;
    Ok(Complex::from_polar(mu.sqrt() * (-mu * x.abs()).exp(), mu * mu * t))
}

/// Energy `-mu^2` of the single bound state of `-2 mu delta(x)`.
pub fn bound_energy(mu: f64) -> Result<f64> {
    require_bound(mu)?;
    Ok(-mu * mu)
}

/// `<psi_Bf | psi_Bi>` at `t = 0`: `2 sqrt(mu) / (1 + mu)`.
pub fn bound_overlap(mu: f64) -> Result<f64> {
    require_bound(mu)?;
    Ok(2.0 * mu.sqrt() / (1.0 + mu))
}

/// Coefficient of `exp(i mu^2 t - mu |x|)` left in the wavefunction as
/// `t -> infinity`: `2 mu / (1 + mu)`.
pub fn bound_coefficient(mu: f64) -> Result<f64> {
    require_bound(mu)?;
    Ok(2.0 * mu / (1.0 + mu))
}

fn require_bound(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::NoBoundState(mu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn initial_state_values() {
        assert_eq!(psi_initial(0.0, 0.0), Complex::new(1.0, 0.0));
        assert!((psi_initial(2.0, 0.0).re - 0.135_335_283_236_612_7).abs() < 1e-15);
    }

    #[test]
    fn initial_state_unit_norm() {
        // Split at the kink so Simpson stays high order on each half.
        let f = |x: f64| psi_initial(x, 0.0).norm_sqr();
        let norm = simpson(f, -40.0, 0.0, 20_000) + simpson(f, 0.0, 40.0, 20_000);
        assert!((norm - 1.0).abs() < 1e-10, "norm {norm}");
    }

    #[test]
    fn final_bound_state_norm_and_overlap() {
        assert_eq!(psi_bound_final(0.0, 0.0, 1.0).unwrap(), Complex::new(1.0, 0.0));
        let mu = 3.0;
        let f = |x: f64| psi_bound_final(x, 0.0, mu).unwrap().norm_sqr();
        let norm = simpson(f, -40.0, 0.0, 40_000) + simpson(f, 0.0, 40.0, 40_000);
        assert!((norm - 1.0).abs() < 1e-10);

        let g = |x: f64| (psi_bound_final(x, 0.0, mu).unwrap().conj() * psi_initial(x, 0.0)).re;
        let overlap = simpson(g, -40.0, 0.0, 40_000) + simpson(g, 0.0, 40.0, 40_000);
        let analytic = bound_overlap(mu).unwrap();
        assert!((analytic - 0.866_025_403_784_438_6).abs() < 1e-15);
        assert!((overlap - analytic).abs() < 1e-10);
    }

    #[test]
    fn bound_energies() {
        assert_eq!(bound_energy(1.0).unwrap(), -1.0);
        assert_eq!(bound_energy(3.0).unwrap(), -9.0);
        assert_eq!(bound_energy(0.5).unwrap(), -0.25);
        assert!(matches!(bound_energy(0.0), Err(Error::NoBoundState(_))));
        assert!(psi_bound_final(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn jump_condition_of_initial_state() {
        let h = 1e-6;
        let f = |x: f64| psi_initial(x, 0.0).re;
        let right = (f(h) - f(0.0)) / h;
        let left = (f(0.0) - f(-h)) / h;
        assert!((right - left + 2.0 * f(0.0)).abs() < 1e-4);
    }

    #[test]
    fn final_state_evolves_by_global_phase() {
        let mu = 2.5;
        for &x in &[-3.0, -0.2, 0.0, 0.7, 4.0] {
            let a = psi_bound_final(x, 0.0, mu).unwrap().norm();
            let b = psi_bound_final(x, 13.7, mu).unwrap().norm();
            assert!((a - b).abs() <= 1e-14 * a.max(1e-300));
        }
    }

    #[test]
    fn strengths_and_units() {
        let p = ModelParams::from_strengths(2.0, 6.0).unwrap();
        assert!((p.mu - 3.0).abs() <= 3.0 * 1e-14);
        let u = p.units().unwrap();
        assert_eq!(u.x_physical(4.0), 2.0);
        assert_eq!(u.t_physical(4.0), 1.0);
        assert_eq!(u.t_dimensionless(u.t_physical(0.37)), 0.37);
        assert!(ModelParams::new(-0.1).is_err());
        assert!(ModelParams::from_strengths(0.0, 1.0).is_err());
    }
}
