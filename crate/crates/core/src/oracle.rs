//! Grid propagation of the quench, independent of the closed forms.
//!
//! The Hamiltonian is `H = -D2 + V` on a uniform grid with zero Dirichlet
//! data outside the box, `D2` the three-point second difference. A delta well
//! sits on the single node nearest `x = 0` with depth `2 mu / h`; a square
//! well of width `dx` has depth `2 mu / dx` and half depth on nodes lying
//! exactly on its edges, so that `sum V h = -2 mu` either way.
//!
//! Time stepping is Crank-Nicolson, `(1 + i dt H/2) psi' = (1 - i dt H/2) psi`,
//! solved with a tridiagonal sweep whose elimination factors are computed
//! once per run.

use crate::error::{check_mu, Error, Result};
use crate::field::{trapezoid, ComplexField, GridSpec};
use crate::model::psi_initial;
use crate::survival::{SurvivalMethod, SurvivalSeries};
use crate::Complex;
use serde::{Deserialize, Serialize};

/// CN steps with `dt * max|V|` above this lose phase accuracy on the well.
pub const STIFFNESS_WARNING: f64 = 0.5;

/// Requested residual `||H v - E v||` of a ground state, relative to the
/// largest diagonal entry of `H`.
pub const GROUND_STATE_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub mu: f64,
    /// 0 puts the well on a single node.
    pub well_width: f64,
    pub cap_strength: f64,
    pub cap_width: f64,
}

impl OracleConfig {
    /// Desk-scale resolution: `h = 0.005`, `dt = 5e-5`, box `[-60, 60]`,
    /// delta well, no absorber.
    pub fn desk(mu: f64) -> Result<Self> {
        let cfg = OracleConfig {
            grid: GridSpec::symmetric(60.0, 0.005)?,
            dt: 5e-5,
            mu,
            well_width: 0.0,
            cap_strength: 0.0,
            cap_width: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_mu(self.mu)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("must be positive, got {}", self.dt),
            });
        }
        let h = self.grid.spacing();
        if !(self.well_width >= 0.0) {
            return Err(Error::InvalidWell(format!("negative width {}", self.well_width)));
        }
        if self.well_width > 0.0 {
            if self.well_width < h * (1.0 - 1e-9) {
                return Err(Error::InvalidWell(format!(
                    "width {} is narrower than one grid cell ({h})",
                    self.well_width
                )));
            }
            let cells = self.well_width / h;
            if (cells - cells.round()).abs() > 1e-6 {
                return Err(Error::InvalidWell(format!(
                    "width {} is not a whole number of cells of {h}",
                    self.well_width
                )));
            }
        }
        if self.cap_strength < 0.0 || self.cap_width < 0.0 {
            return Err(Error::InvalidParameter {
                name: "cap",
                reason: "strength and width must be non-negative".into(),
            });
        }
        if 2.0 * self.cap_width >= self.grid.x_max - self.grid.x_min {
            return Err(Error::InvalidParameter {
                name: "cap_width",
                reason: "absorbing layers would cover the whole box".into(),
            });
        }
        Ok(())
    }
}

/// Real potential plus the absorbing part `W >= 0`, entering `H` as
/// `V - i W`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub real: Vec<f64>,
    pub absorbing: Vec<f64>,
}

impl Potential {
    pub fn value(&self, i: usize) -> Complex {
        Complex::new(self.real[i], -self.absorbing[i])
    }

    pub fn len(&self) -> usize {
        self.real.len()
    }

    pub fn is_empty(&self) -> bool {
        self.real.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.len()).map(|i| self.value(i).norm()).fold(0.0, f64::max)
    }

    /// `sum V h`, the integrated well strength.
    pub fn integral(&self, h: f64) -> f64 {
        self.real.iter().sum::<f64>() * h
    }
}

/// Well of integrated strength `-2 strength` on `grid`, optionally with a
/// quadratic absorbing ramp.
pub fn build_potential(config: &OracleConfig) -> Result<Potential> {
    config.validate()?;
    let real = well(&config.grid, config.mu, config.well_width);
    let absorbing = absorber(&config.grid, config.cap_strength, config.cap_width);
    Ok(Potential { real, absorbing })
}

fn well(grid: &GridSpec, strength: f64, width: f64) -> Vec<f64> {
    let n = grid.n_points;
    let h = grid.spacing();
    let mut v = vec![0.0; n];
    if strength == 0.0 {
        return v;
    }
    if width == 0.0 {
        v[grid.nearest_index(0.0)] = -2.0 * strength / h;
        return v;
    }
    let depth = -2.0 * strength / width;
    let half = 0.5 * width;
    let eps = 1e-9 * h;
    for (i, vi) in v.iter_mut().enumerate() {
        let ax = grid.x(i).abs();
        if ax < half - eps {
            *vi = depth;
        } else if ax <= half + eps {
            *vi = 0.5 * depth;
        }
    }
    v
}

fn absorber(grid: &GridSpec, strength: f64, width: f64) -> Vec<f64> {
    let n = grid.n_points;
    if strength == 0.0 || width == 0.0 {
        return vec![0.0; n];
    }
    let (lo, hi) = (grid.x_min + width, grid.x_max - width);
    (0..n)
        .map(|i| {
            let x = grid.x(i);
            let depth = if x < lo {
                lo - x
            } else if x > hi {
                x - hi
            } else {
                0.0
            };
            let r = depth / width;
            strength * r * r
        })
        .collect()
}

/// Lowest eigenpair of the real part of `H`.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub energy: f64,
    pub field: ComplexField,
    pub residual: f64,
}

/// Number of eigenvalues of the symmetric tridiagonal `H` below `x`.
fn count_below(diag: &[f64], off: f64, x: f64) -> usize {
    let off2 = off * off;
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 { d - x } else { d - x - off2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + x.abs()).max(1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solve the symmetric tridiagonal system `(diag, off) y = rhs` in place.
fn solve_real_tridiagonal(diag: &[f64], off: f64, rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    let mut cp = vec![0.0; n];
    let mut b = diag[0];
    if b == 0.0 {
        return Err(Error::SolverBreakdown(0));
    }
    cp[0] = off / b;
    rhs[0] /= b;
    for i in 1..n {
        b = diag[i] - off * cp[i - 1];
        if b == 0.0 || !b.is_finite() {
            return Err(Error::SolverBreakdown(i));
        }
        cp[i] = off / b;
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / b;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= cp[i] * rhs[i + 1];
    }
    Ok(())
}

/// Ground state of `-D2 + V` on `grid`, by Sturm bisection for the energy
/// followed by inverse iteration just below it.
///
/// The absorbing part of the potential is ignored.
pub fn ground_state(potential: &Potential, grid: &GridSpec) -> Result<BoundState> {
    let n = grid.n_points;
    if potential.len() != n {
        return Err(Error::GridMismatch);
    }
    let h = grid.spacing();
    let off = -1.0 / (h * h);
    let diag: Vec<f64> = potential.real.iter().map(|v| 2.0 / (h * h) + v).collect();
    if count_below(&diag, off, 0.0) == 0 {
        return Err(Error::InvalidWell("no bound state: no negative eigenvalue".into()));
    }

    let mut lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * off.abs();
    let mut hi = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(&diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let energy_guess = lo;
    let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    // strictly below the lowest eigenvalue, so the shifted matrix stays definite
    let shift = energy_guess - 1e-9 * energy_guess.abs().max(1.0);
    let shifted: Vec<f64> = diag.iter().map(|d| d - shift).collect();

    let apply_h = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut s = diag[i] * v[i];
                if i > 0 {
                    s += off * v[i - 1];
                }
                if i + 1 < n {
                    s += off * v[i + 1];
                }
                s
            })
            .collect()
    };
    let weighted_norm = |v: &[f64]| (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();

    let mut v = vec![1.0; n];
    let mut energy = energy_guess;
    let mut residual = f64::INFINITY;
    for _ in 0..50 {
        solve_real_tridiagonal(&shifted, off, &mut v)?;
        let nv = weighted_norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        let hv = apply_h(&v);
        energy = h * v.iter().zip(&hv).map(|(a, b)| a * b).sum::<f64>();
        let r: Vec<f64> = hv.iter().zip(&v).map(|(a, b)| a - energy * b).collect();
        residual = weighted_norm(&r) / scale;
        if residual <= GROUND_STATE_RESIDUAL {
            break;
        }
    }
    if residual > GROUND_STATE_RESIDUAL {
        return Err(Error::InvalidWell(format!(
            "ground state did not converge: residual {residual:.2e}"
        )));
    }
    // fix the sign so the state is positive at its peak
    let peak = v.iter().cloned().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let sign = peak.signum();
    let values = v.iter().map(|&x| Complex::new(sign * x, 0.0)).collect();
    Ok(BoundState {
        energy,
        field: ComplexField::new(*grid, values, 0.0, f64::NAN)?,
        residual,
    })
}

/// Crank-Nicolson stepper with the elimination factors of the implicit side
/// precomputed.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    pub dt: f64,
    rhs_diag: Vec<Complex>,
    rhs_off: Complex,
    lhs_off: Complex,
    upper: Vec<Complex>,
    pivot_inv: Vec<Complex>,
}

impl CrankNicolson {
    pub fn new(potential: &Potential, grid: &GridSpec, dt: f64) -> Result<Self> {
        let n = grid.n_points;
        if potential.len() != n {
            return Err(Error::GridMismatch);
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("must be positive, got {dt}"),
            });
        }
        let h = grid.spacing();
        let stiffness = dt * potential.max_abs();
        if stiffness > STIFFNESS_WARNING {
            log::warn!("dt * max|V| = {stiffness:.3} exceeds {STIFFNESS_WARNING}; well phase will be inaccurate");
        }
        let half = Complex::new(0.0, 0.5 * dt);
        let kinetic_diag = 2.0 / (h * h);
        let kinetic_off = -1.0 / (h * h);
        let hdiag: Vec<Complex> = (0..n).map(|i| kinetic_diag + potential.value(i)).collect();

        let lhs_off = half * kinetic_off;
        let rhs_off = -half * kinetic_off;
        let rhs_diag = hdiag.iter().map(|&d| 1.0 - half * d).collect();

        let mut upper = vec![Complex::new(0.0, 0.0); n];
        let mut pivot_inv = vec![Complex::new(0.0, 0.0); n];
        let mut prev_upper = Complex::new(0.0, 0.0);
        for i in 0..n {
            let pivot = 1.0 + half * hdiag[i] - lhs_off * prev_upper;
            if pivot.norm() < 1e-300 || !pivot.re.is_finite() {
                return Err(Error::SolverBreakdown(i));
            }
            pivot_inv[i] = pivot.inv();
            upper[i] = lhs_off * pivot_inv[i];
            prev_upper = upper[i];
        }
        Ok(CrankNicolson {
            dt,
            rhs_diag,
            rhs_off,
            lhs_off,
            upper,
            pivot_inv,
        })
    }

    /// Advance `psi` by one step; `scratch` is resized as needed.
    pub fn step(&self, psi: &mut [Complex], scratch: &mut Vec<Complex>) {
        let n = psi.len();
        scratch.resize(n, Complex::new(0.0, 0.0));
        // explicit half, fused with forward elimination
        let mut prev = Complex::new(0.0, 0.0);
        for i in 0..n {
            let mut r = self.rhs_diag[i] * psi[i];
            if i > 0 {
                r += self.rhs_off * psi[i - 1];
            }
            if i + 1 < n {
                r += self.rhs_off * psi[i + 1];
            }
            prev = (r - self.lhs_off * prev) * self.pivot_inv[i];
            scratch[i] = prev;
        }
        psi[n - 1] = scratch[n - 1];
        for i in (0..n - 1).rev() {
            psi[i] = scratch[i] - self.upper[i] * psi[i + 1];
        }
    }

    pub fn run(&self, psi: &mut [Complex], n_steps: usize) {
        let mut scratch = Vec::with_capacity(psi.len());
        for _ in 0..n_steps {
            self.step(psi, &mut scratch);
        }
    }
}

/// `n_steps` Crank-Nicolson steps of size `dt` from `psi`.
pub fn propagate_cn(psi: &ComplexField, potential: &Potential, dt: f64, n_steps: usize) -> Result<ComplexField> {
    let stepper = CrankNicolson::new(potential, &psi.grid, dt)?;
    let mut out = psi.clone();
    stepper.run(&mut out.values, n_steps);
    out.time = psi.time + n_steps as f64 * dt;
    Ok(out)
}

/// Distances between two fields on the same grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldComparison {
    pub l2_abs: f64,
    /// `l2_abs / ||reference||`.
    pub l2_rel: f64,
    pub linf: f64,
    /// `<a | b>`.
    pub overlap: Complex,
}

/// Compare `a` against `reference`.
pub fn compare_fields(a: &ComplexField, reference: &ComplexField) -> Result<FieldComparison> {
    if a.grid != reference.grid {
        return Err(Error::GridMismatch);
    }
    let diff: Vec<f64> = a
        .values
        .iter()
        .zip(&reference.values)
        .map(|(x, y)| (x - y).norm_sqr())
        .collect();
    let h = a.grid.spacing();
    let l2_abs = trapezoid(&diff, h).sqrt();
    let ref_norm = reference.norm();
    let linf = diff.iter().cloned().fold(0.0, f64::max).sqrt();
    Ok(FieldComparison {
        l2_abs,
        l2_rel: if ref_norm > 0.0 { l2_abs / ref_norm } else { f64::INFINITY },
        linf,
        overlap: a.inner(reference)?,
    })
}

/// Population `|<psi_Bf | psi>|^2` of the post-quench bound state.
pub fn bound_population(psi: &ComplexField, mu: f64) -> Result<f64> {
    Ok(bound_projection(psi, mu)?.norm_sqr())
}

/// `<sqrt(mu) e^{-mu|x|} | psi>` by the trapezoid rule.
pub fn bound_projection(psi: &ComplexField, mu: f64) -> Result<Complex> {
    if !(mu > 0.0) {
        return Err(Error::NoBoundState(mu));
    }
    let root = mu.sqrt();
    let prod: Vec<Complex> = psi
        .grid
        .points()
        .iter()
        .zip(&psi.values)
        .map(|(&x, &v)| v * (root * (-mu * x.abs()).exp()))
        .collect();
    Ok(crate::field::trapezoid_complex(&prod, psi.grid.spacing()))
}

/// Initial state and its energy for a configuration: the sampled
/// `e^{-|x|}` for a delta well, the discrete ground state of the unit-strength
/// well of the same width otherwise.
pub fn initial_state(config: &OracleConfig) -> Result<(ComplexField, f64)> {
    config.validate()?;
    if config.well_width == 0.0 {
        let f = ComplexField::from_fn(config.grid, 0.0, config.mu, |x| psi_initial(x, 0.0));
        Ok((f, -1.0))
    } else {
        let pre = Potential {
            real: well(&config.grid, 1.0, config.well_width),
            absorbing: vec![0.0; config.grid.n_points],
        };
        let gs = ground_state(&pre, &config.grid)?;
        let mut f = gs.field;
        f.mu = config.mu;
        Ok((f, gs.energy))
    }
}

/// Output of a grid quench run.
#[derive(Debug, Clone)]
pub struct QuenchRun {
    pub series: SurvivalSeries,
    pub snapshots: Vec<ComplexField>,
    pub initial_energy: f64,
}

/// Prepare the initial bound state, switch the well to strength `mu` and
/// propagate, recording `A(t) = <psi_i(t) | psi(t)>` at `t_samples` (with
/// `psi_i(t) = e^{-i E_i t} psi_i`) and full fields at `snapshot_times`.
///
/// Times are rounded to whole steps.
pub fn quench_experiment(
    config: &OracleConfig,
    t_samples: &[f64],
    snapshot_times: &[f64],
) -> Result<QuenchRun> {
    let (psi0, e0) = initial_state(config)?;
    let potential = build_potential(config)?;
    let stepper = CrankNicolson::new(&potential, &config.grid, config.dt)?;

    let to_step = |t: f64| -> Result<usize> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::NonPositiveTime(t));
        }
        Ok((t / config.dt).round() as usize)
    };
    let sample_steps = t_samples.iter().map(|&t| to_step(t)).collect::<Result<Vec<_>>>()?;
    let snap_steps = snapshot_times.iter().map(|&t| to_step(t)).collect::<Result<Vec<_>>>()?;
    let last = sample_steps.iter().chain(&snap_steps).copied().max().unwrap_or(0);

    let mut psi = psi0.clone();
    let mut scratch = Vec::new();
    let mut amplitudes = vec![Complex::new(0.0, 0.0); sample_steps.len()];
    let mut snapshots: Vec<Option<ComplexField>> = vec![None; snap_steps.len()];
    let mut record = |step: usize, psi: &ComplexField| -> Result<()> {
        let t = step as f64 * config.dt;
        for (k, &s) in sample_steps.iter().enumerate() {
            if s == step {
                amplitudes[k] = Complex::from_polar(1.0, e0 * t) * psi0.inner(psi)?;
            }
        }
        for (k, &s) in snap_steps.iter().enumerate() {
            if s == step {
                let mut snap = psi.clone();
                snap.time = t;
                snapshots[k] = Some(snap);
            }
        }
        Ok(())
    };
    record(0, &psi)?;
    for step in 1..=last {
        stepper.step(&mut psi.values, &mut scratch);
        record(step, &psi)?;
    }

    let times: Vec<f64> = sample_steps.iter().map(|&s| s as f64 * config.dt).collect();
    let series = SurvivalSeries::from_amplitudes(times, amplitudes, config.mu, SurvivalMethod::Oracle)?;
    Ok(QuenchRun {
        series,
        snapshots: snapshots.into_iter().map(|s| s.expect("every snapshot step is reached")).collect(),
        initial_energy: e0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(grid: GridSpec, mu: f64, width: f64) -> OracleConfig {
        OracleConfig {
            grid,
            dt: 1e-3,
            mu,
            well_width: width,
            cap_strength: 0.0,
            cap_width: 0.0,
        }
    }

    /// `k tan(k w/2) = kappa` with `k^2 + kappa^2 = 2 mu / w` (depth times
    /// width equal to `2 mu`), solved by bisection on `k`.
    fn square_well_kappa(mu: f64, w: f64) -> f64 {
        let depth = 2.0 * mu / w;
        let f = |k: f64| k * (0.5 * k * w).tan() - (depth - k * k).sqrt();
        let (mut lo, mut hi) = (1e-12, depth.sqrt().min(std::f64::consts::PI / w - 1e-12));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let k = 0.5 * (lo + hi);
        (depth - k * k).sqrt()
    }

    #[test]
    fn potential_discretization() {
        let g = GridSpec::symmetric(5.0, 0.01).unwrap();
        let zero = build_potential(&config(g, 0.0, 0.0)).unwrap();
        assert!(zero.real.iter().all(|&v| v == 0.0));

        let delta = build_potential(&config(g, 3.0, 0.0)).unwrap();
        let i0 = g.nearest_index(0.0);
        assert!((delta.real[i0] + 600.0).abs() < 1e-9);
        assert_eq!(delta.real.iter().filter(|&&v| v != 0.0).count(), 1);
        assert!((delta.integral(g.spacing()) + 6.0).abs() < 1e-9);

        let square = build_potential(&config(g, 3.0, 0.1)).unwrap();
        assert!((square.real[i0] + 60.0).abs() < 1e-9);
        assert!((square.integral(g.spacing()) + 6.0).abs() < 1e-9);

        assert!(matches!(build_potential(&config(g, 3.0, 0.005)), Err(Error::InvalidWell(_))));
        assert!(matches!(build_potential(&config(g, 3.0, 0.015)), Err(Error::InvalidWell(_))));
    }

    #[test]
    fn absorber_is_bounded_ramp() {
        let g = GridSpec::symmetric(10.0, 0.1).unwrap();
        let mut cfg = config(g, 1.0, 0.0);
        cfg.cap_strength = 2.0;
        cfg.cap_width = 3.0;
        let p = build_potential(&cfg).unwrap();
        assert!(p.absorbing.iter().all(|&w| (0.0..=2.0 + 1e-12).contains(&w)));
        assert!((p.absorbing[0] - 2.0).abs() < 1e-12);
        assert_eq!(p.absorbing[g.nearest_index(0.0)], 0.0);
        assert_eq!(p.absorbing[g.nearest_index(6.9)], 0.0);
    }

    #[test]
    fn delta_node_ground_state() {
        let g = GridSpec::symmetric(40.0, 0.005).unwrap();
        let p = build_potential(&config(g, 1.0, 0.0)).unwrap();
        let gs = ground_state(&p, &g).unwrap();
        assert!((gs.energy + 1.0).abs() < 0.01);
        // discrete bound state: sinh(kappa h) = mu h
        let h = g.spacing();
        let e_disc = -2.0 / (h * h) * ((1.0 + h * h).sqrt() - 1.0);
        assert!((gs.energy - e_disc).abs() < 1e-9, "{} vs {e_disc}", gs.energy);
        let exact = ComplexField::from_fn(g, 0.0, 1.0, |x| psi_initial(x, 0.0));
        assert!(compare_fields(&gs.field, &exact).unwrap().l2_rel < 0.01);

        let p3 = build_potential(&config(g, 3.0, 0.0)).unwrap();
        assert!((ground_state(&p3, &g).unwrap().energy / -9.0 - 1.0).abs() < 0.02);
    }

    #[test]
    fn no_bound_state_without_well() {
        let g = GridSpec::symmetric(5.0, 0.05).unwrap();
        let p = build_potential(&config(g, 0.0, 0.0)).unwrap();
        assert!(matches!(ground_state(&p, &g), Err(Error::InvalidWell(_))));
    }

    #[test]
    fn square_well_ground_state_matches_transcendental_root() {
        let g = GridSpec::symmetric(20.0, 0.001).unwrap();
        let p = build_potential(&config(g, 3.0, 0.1)).unwrap();
        let gs = ground_state(&p, &g).unwrap();
        let kappa = square_well_kappa(3.0, 0.1);
        assert!((kappa - 2.745).abs() < 0.01, "kappa {kappa}");
        assert!((gs.energy + kappa * kappa).abs() / (kappa * kappa) < 1e-3, "{}", gs.energy);
    }

    #[test]
    fn ground_state_matches_dense_eigensolver() {
        let g = GridSpec::symmetric(8.0, 0.04).unwrap();
        let p = build_potential(&config(g, 2.0, 0.2)).unwrap();
        let gs = ground_state(&p, &g).unwrap();
        let n = g.n_points;
        let h = g.spacing();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0 / (h * h) + p.real[i]
            } else if i.abs_diff(j) == 1 {
                -1.0 / (h * h)
            } else {
                0.0
            }
        });
        let eig = m.symmetric_eigen();
        let lowest = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((gs.energy - lowest).abs() < 1e-8 * lowest.abs(), "{} vs {lowest}", gs.energy);
        assert!(gs.residual <= GROUND_STATE_RESIDUAL);
    }

    #[test]
    fn unitary_without_absorber() {
        let g = GridSpec::symmetric(20.0, 0.02).unwrap();
        let cfg = config(g, 3.0, 0.0);
        let p = build_potential(&cfg).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, 3.0, |x| psi_initial(x, 0.0));
        let out = propagate_cn(&psi, &p, 1e-3, 10_000).unwrap();
        let sum = |f: &ComplexField| f.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.spacing();
        assert!((sum(&out) - sum(&psi)).abs() < 1e-10, "{} {}", sum(&out), sum(&psi));
        assert!((out.time - 10.0).abs() < 1e-9);
    }

    #[test]
    fn absorber_removes_norm() {
        // packet moving right at speed 2k = 6 runs into the layer
        let g = GridSpec::symmetric(20.0, 0.02).unwrap();
        let mut cfg = config(g, 0.0, 0.0);
        cfg.cap_strength = 5.0;
        cfg.cap_width = 8.0;
        let p = build_potential(&cfg).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, 0.0, |x| Complex::from_polar((-x * x / 4.0).exp(), 3.0 * x));
        let out = propagate_cn(&psi, &p, 2e-3, 4_000).unwrap();
        assert!(out.norm_sqr() < 0.01 * psi.norm_sqr(), "{}", out.norm_sqr());
    }

    #[test]
    fn free_gaussian_spreads_as_predicted() {
        let g = GridSpec::symmetric(30.0, 0.01).unwrap();
        let p = build_potential(&config(g, 0.0, 0.0)).unwrap();
        let norm = (2.0 * std::f64::consts::PI).powf(-0.25);
        let psi = ComplexField::from_fn(g, 0.0, 0.0, |x| Complex::new(norm * (-x * x / 4.0).exp(), 0.0));
        let out = propagate_cn(&psi, &p, 1e-4, 5_000).unwrap();
        let t = 0.5;
        let exact = ComplexField::from_fn(g, t, 0.0, |x| {
            let d = Complex::new(1.0, t);
            norm * (-(x * x) / (4.0 * d)).exp() / d.sqrt()
        });
        let cmp = compare_fields(&out, &exact).unwrap();
        assert!(cmp.l2_abs <= 1e-4, "{}", cmp.l2_abs);
    }

    #[test]
    fn identity_quench_is_stationary_on_grid() {
        let g = GridSpec::symmetric(30.0, 0.005).unwrap();
        let p = build_potential(&config(g, 1.0, 0.0)).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, 1.0, |x| psi_initial(x, 0.0));
        let out = propagate_cn(&psi, &p, 1e-3, 1_000).unwrap();
        let worst = psi
            .values
            .iter()
            .zip(&out.values)
            .map(|(a, b)| (a.norm() - b.norm()).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-3, "{worst}");
    }

    #[test]
    fn comparison_metrics() {
        let g = GridSpec::symmetric(20.0, 0.01).unwrap();
        let f = ComplexField::from_fn(g, 0.0, 1.0, |x| psi_initial(x, 0.3));
        let same = compare_fields(&f, &f).unwrap();
        assert_eq!(same.l2_abs, 0.0);
        assert_eq!(same.linf, 0.0);
        assert!((same.overlap.re - f.norm_sqr()).abs() < 1e-14);
        let mut neg = f.clone();
        neg.values.iter_mut().for_each(|v| *v = -*v);
        assert!((compare_fields(&f, &neg).unwrap().l2_abs - 2.0 * f.norm()).abs() < 1e-12);
        let other = ComplexField::from_fn(GridSpec::symmetric(10.0, 0.01).unwrap(), 0.0, 1.0, |_| Complex::new(0.0, 0.0));
        assert!(matches!(compare_fields(&f, &other), Err(Error::GridMismatch)));
    }

    #[test]
    fn identity_quench_keeps_survival() {
        let mut cfg = config(GridSpec::symmetric(30.0, 0.005).unwrap(), 1.0, 0.0);
        cfg.dt = 1e-3;
        let run = quench_experiment(&cfg, &[0.5, 1.0], &[1.0]).unwrap();
        let a = run.series.amplitudes[1];
        assert!((a.norm_sqr() / run.series.amplitudes[0].norm_sqr() - 1.0).abs() < 1e-6);
        assert_eq!(run.snapshots.len(), 1);
        assert!((run.snapshots[0].time - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bound_population_of_initial_state() {
        let g = GridSpec::symmetric(40.0, 0.005).unwrap();
        let f = ComplexField::from_fn(g, 0.0, 3.0, |x| psi_initial(x, 0.0));
        let pop = bound_population(&f, 3.0).unwrap();
        assert!((pop - 0.75).abs() < 1e-4);
        assert!(bound_population(&f, 0.0).is_err());
    }
}
