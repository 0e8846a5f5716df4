//! Self-check suites run by `verify`.
//!
//! Each check reports a measured value against a tolerance. Tolerances can be
//! overridden per check with `tol.<name>=<value>`.

use super::commands::{fit_report, oracle_run};
use super::settings::Settings;
use crate::cerf::{erf, erfc, erfcx};
use crate::error::{Error, Result};
use crate::exact::{norm_sqr_by_quadrature, propagate_by_kernel, psi_exact, psi_farfield, psi_shorttime};
use crate::model::psi_initial;
use crate::survival::fit::{fit_exponential, fit_power_law, local_maxima};
use crate::survival::{
    escape_probability, escape_probability_shorttime, escape_coefficient, survival_amplitude,
    survival_amplitude_longtime, survival_amplitude_mu0, survival_overlap_numeric, survival_probability_limit,
};
use crate::Complex;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

pub const SUITES: [&str; 4] = ["cerf", "exact", "survival", "oracle"];

const ERFC_GRID: &str = include_str!("../../tests/data/erfc_grid.csv");
const ERFC_SCATTER: &str = include_str!("../../tests/data/erfc_scatter.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub tolerance: f64,
    pub overridden: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

struct Recorder<'a> {
    suite: &'static str,
    overrides: &'a BTreeMap<String, f64>,
    checks: Vec<Check>,
}

impl Recorder<'_> {
    fn record(&mut self, name: &str, value: f64, bound: Bound, tolerance: f64, detail: String) {
        let (tolerance, overridden) = match self.overrides.get(name) {
            Some(&t) => (t, true),
            None => (tolerance, false),
        };
        let passed = match bound {
            Bound::AtMost => value <= tolerance,
            Bound::AtLeast => value >= tolerance,
        };
        self.checks.push(Check {
            suite: self.suite.to_string(),
            name: name.to_string(),
            value,
            bound,
            tolerance,
            overridden,
            passed,
            detail,
        });
    }

    fn at_most(&mut self, name: &str, value: f64, tolerance: f64, detail: impl Into<String>) {
        self.record(name, value, Bound::AtMost, tolerance, detail.into());
    }

    fn at_least(&mut self, name: &str, value: f64, tolerance: f64, detail: impl Into<String>) {
        self.record(name, value, Bound::AtLeast, tolerance, detail.into());
    }
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm()
}

fn table_max_rel(text: &str) -> (f64, usize) {
    let rows: Vec<(Complex, Complex)> = text
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|f| f.trim().parse().unwrap_or(f64::NAN)).collect();
            (Complex::new(v[0], v[1]), Complex::new(v[2], v[3]))
        })
        .collect();
    let worst = rows
        .par_iter()
        .map(|&(z, want)| rel(erfc(z), want))
        .reduce(|| 0.0, f64::max);
    (worst, rows.len())
}

fn cerf_suite(r: &mut Recorder) -> Result<()> {
    let (grid, n) = table_max_rel(ERFC_GRID);
    r.at_most("erfc_grid_max_rel", grid, 1e-12, format!("{n} lattice points on [-10,10]^2"));
    let (scatter, n) = table_max_rel(ERFC_SCATTER);
    r.at_most("erfc_scatter_max_rel", scatter, 1e-12, format!("{n} scattered points"));

    let probes = [Complex::new(0.3, 0.2), Complex::new(-2.5, 1.7), Complex::new(4.0, -6.0), Complex::new(0.0, 3.0)];
    let odd = probes.iter().map(|&z| (erf(-z) + erf(z)).norm()).fold(0.0, f64::max);
    r.at_most("erf_odd", odd, 1e-14, "max |erf(-z) + erf(z)|");
    let refl = probes
        .iter()
        .map(|&z| (erfc(-z) - (2.0 - erfc(z))).norm())
        .fold(0.0, f64::max);
    r.at_most("erfc_reflection", refl, 1e-13, "max |erfc(-z) - 2 + erfc(z)|");

    let z = Complex::from_polar(1e4, PI / 4.0);
    let asym = (erfcx(z) * z * PI.sqrt() - 1.0).norm();
    r.at_most("erfcx_large_argument", asym, 1e-7, "erfcx(z) z sqrt(pi) -> 1 at |z| = 1e4");
    Ok(())
}

fn exact_suite(r: &mut Recorder) -> Result<()> {
    let xs = [-3.0, -0.4, 0.0, 0.7, 5.0];
    let mut identity: f64 = 0.0;
    for &x in &xs {
        for &t in &[0.01, 1.0, 50.0] {
            identity = identity.max((psi_exact(x, t, 1.0)? - psi_initial(x, t)).norm());
        }
    }
    r.at_most("identity_quench", identity, 1e-12, "max |psi(x,t,1) - e^{it-|x|}|");

    for &(t, mu) in &[(0.07, 3.0), (2.0, 0.5), (1.0, 0.0)] {
        let n = norm_sqr_by_quadrature(t, mu, 1e-8)?;
        r.at_most(&format!("norm_t{t}_mu{mu}"), (n - 1.0).abs(), 1e-6, format!("norm {n:.12}"));
    }

    let mut parity: f64 = 0.0;
    for &x in &[0.3, 2.0, 9.0] {
        parity = parity.max((psi_exact(x, 0.4, 3.0)? - psi_exact(-x, 0.4, 3.0)?).norm());
    }
    r.at_most("parity", parity, 1e-13, "max |psi(x) - psi(-x)|");

    let (t, mu, d) = (0.5, 3.0, 1e-5);
    let slope = |x: f64| -> Result<Complex> { Ok((psi_exact(x + d, t, mu)? - psi_exact(x - d, t, mu)?) / (2.0 * d)) };
    let jump = slope(3.0 * d)? - slope(-3.0 * d)?;
    let want = -2.0 * mu * psi_exact(0.0, t, mu)?;
    r.at_most("derivative_jump", rel(jump, want), 1e-3, "psi'(0+) - psi'(0-) = -2 mu psi(0)");

    let (x, t) = (1.3, 0.4);
    let k = propagate_by_kernel(|y| psi_initial(y, 0.0), x, t, 3.0)?;
    r.at_most("kernel_consistency", rel(k, psi_exact(x, t, 3.0)?), 1e-7, "kernel quadrature at x=1.3, t=0.4, mu=3");

    r.at_most(
        "farfield_x20_t1",
        rel(psi_farfield(20.0, 1.0, 0.0)?, psi_exact(20.0, 1.0, 0.0)?),
        0.02,
        "far-field form at x=20, t=1, mu=0",
    );
    r.at_most(
        "shorttime_x10_t0.01",
        rel(psi_shorttime(10.0, 0.01, 0.0)?, psi_exact(10.0, 0.01, 0.0)?),
        1e-3,
        "short-time form at x=10, t=0.01, mu=0",
    );

    let late = psi_exact(0.5, 1e5, 3.0)?;
    r.at_most("late_time_finite", if late.re.is_finite() && late.im.is_finite() { 0.0 } else { 1.0 }, 0.0, "psi(0.5, 1e5, 3) finite");
    Ok(())
}

fn survival_suite(r: &mut Recorder, s: &Settings) -> Result<()> {
    let mut identity: f64 = 0.0;
    for k in 0..200 {
        let t = 0.05 * k as f64 + 1e-3;
        identity = identity.max((survival_amplitude(t, 1.0)? - 1.0).norm());
    }
    r.at_most("identity_quench", identity, 1e-12, "max |A(t, 1) - 1| on t in (0, 10)");

    let mut bound_excess: f64 = 0.0;
    for &mu in &[0.0, 0.5, 2.0, 3.0, 7.0] {
        for k in 0..400 {
            let t = 10f64.powf(-4.0 + 7.0 * k as f64 / 399.0);
            bound_excess = bound_excess.max(survival_amplitude(t, mu)?.norm_sqr() - 1.0);
        }
    }
    r.at_most("probability_at_most_one", bound_excess.max(0.0), 1e-9, "max (|A|^2 - 1) over mu, t grid");

    for &(t, mu) in &[(0.3, 3.0), (1.0, 0.0), (2.0, 0.5)] {
        let d = (survival_overlap_numeric(t, mu)? - survival_amplitude(t, mu)?).norm();
        r.at_most(&format!("quadrature_t{t}_mu{mu}"), d, 1e-6, "closed form vs overlap quadrature");
    }

    let mut spec: f64 = 0.0;
    for &t in &[0.01, 0.5, 3.0, 40.0] {
        spec = spec.max((survival_amplitude(t, 0.0)? - survival_amplitude_mu0(t)?).norm());
    }
    r.at_most("free_release_specialization", spec, 1e-13, "general vs mu = 0 formula");

    let lim = survival_probability_limit(3.0)?;
    r.at_most("limit_mu3", (lim - 0.5625).abs(), 1e-15, "16 mu^2/(1+mu)^4 at mu = 3");
    let inv = (survival_probability_limit(0.4)? - survival_probability_limit(2.5)?).abs();
    r.at_most("limit_inversion_symmetry", inv, 1e-14, "P_inf(mu) = P_inf(1/mu)");

    let lt = rel(survival_amplitude_longtime(200.0, 3.0)?, survival_amplitude(200.0, 3.0)?);
    r.at_most("longtime_t200", lt, 1e-3, "long-time amplitude at t = 200, mu = 3");

    let ratio = escape_probability(1e-4, 3.0)? / escape_probability_shorttime(1e-4, 3.0)?;
    r.at_most("escape_law_t1e-4", (ratio - 1.0).abs(), 0.02, format!("(1 - P)/escape law = {ratio:.5}"));

    let t2: f64 = 1e-4;
    let got = (escape_probability(t2, 3.0)? - escape_coefficient(3.0) * t2.powf(1.5)) / (t2 * t2);
    let want = -2.0 * 4.0 * (2.0 - 3.0);
    r.at_most("escape_t2_coefficient", (got / want - 1.0).abs(), 0.05, format!("{got:.4} vs {want}"));

    let fit_settings = Settings {
        mu: 3.0,
        target: "escape".into(),
        window_lo: 1e-4,
        window_hi: 1e-2,
        nt: 400,
        input: None,
        ..s.clone()
    };
    let fit = fit_report(&fit_settings)?.power_law;
    r.at_most(
        "escape_fit_exponent",
        (fit.exponent - 1.5).abs(),
        0.02,
        format!("exponent {:.4} on [1e-4, 1e-2], mu = 3", fit.exponent),
    );
    let c = escape_coefficient(3.0);
    r.at_most(
        "escape_fit_coefficient",
        (fit.coefficient / c - 1.0).abs(),
        0.01,
        format!("coefficient {:.4} vs {c:.4}", fit.coefficient),
    );

    let env = fit_report(&Settings {
        target: "envelope".into(),
        window_lo: 20.0,
        window_hi: 200.0,
        ..fit_settings.clone()
    })?;
    r.at_most(
        "envelope_exponent",
        (env.power_law.exponent + 1.5).abs(),
        0.05,
        format!("exponent {:.4} from {} peaks on [20, 200]", env.power_law.exponent, env.peaks.unwrap_or(0)),
    );

    let pinf = survival_probability_limit(3.0)?;
    let ts: Vec<f64> = (0..=99_800).map(|k| 0.1 + 5e-4 * k as f64).collect();
    let dev = ts
        .par_iter()
        .map(|&t| survival_amplitude(t, 3.0).map(|a| (a.norm_sqr() - pinf).abs()))
        .collect::<Result<Vec<_>>>()?;
    let peaks = local_maxima(&ts, &dev);
    let e = fit_exponential(&peaks, (0.1, 50.0))?;
    let p = fit_power_law(&peaks, (0.1, 50.0))?;
    let ratio = e.rms_log_residual / p.rms_log_residual;
    r.at_least(
        "non_exponential_ratio",
        ratio,
        5.0,
        "exponential / power-law residual over envelope peaks on [0.1, 50]",
    );
    Ok(())
}

fn oracle_suite(r: &mut Recorder, s: &Settings) -> Result<()> {
    let run = oracle_run(&Settings {
        well_width: 0.0,
        cap_strength: 0.0,
        cap_width: 0.0,
        nt: 201,
        ..s.clone()
    })?;
    for snap in &run.report.snapshots {
        r.at_most(
            &format!("l2_rel_t{}", snap.t),
            snap.comparison.l2_rel,
            1e-3,
            format!("grid vs closed form, mu = {}, h = {}, dt = {}", s.mu, s.h, s.dt),
        );
    }
    r.at_most(
        "probability_max_abs_error",
        run.report.max_probability_error,
        1e-3,
        format!("max |P_grid - P_exact| on [0, {}]", run.report.final_time),
    );
    Ok(())
}

/// Run the named suite (`all` runs every one).
pub fn run_suites(s: &Settings) -> Result<VerifyReport> {
    let names: Vec<&'static str> = match s.suite.as_str() {
        "all" => SUITES.to_vec(),
        name => vec![*SUITES
            .iter()
            .find(|&&k| k == name)
            .ok_or_else(|| Error::Usage(format!("unknown suite `{name}`; choose cerf, exact, survival, oracle or all")))?],
    };
    let mut checks = Vec::new();
    for name in &names {
        let mut r = Recorder {
            suite: name,
            overrides: &s.tolerances,
            checks: Vec::new(),
        };
        match *name {
            "cerf" => cerf_suite(&mut r)?,
            "exact" => exact_suite(&mut r)?,
            "survival" => survival_suite(&mut r, s)?,
            _ => oracle_suite(&mut r, s)?,
        }
        checks.extend(r.checks);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(VerifyReport {
        suites: names.iter().map(|s| s.to_string()).collect(),
        passed: checks.len() - failed,
        failed,
        checks,
    })
}
