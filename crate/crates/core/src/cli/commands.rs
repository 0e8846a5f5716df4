//! Table builders behind the data-producing subcommands.

use super::output::Table;
use super::settings::{Settings, Spacing};
use crate::error::{Error, Result};
use crate::exact::{propagate_by_kernel, psi_exact, psi_farfield, psi_longtime, psi_shorttime};
use crate::field::{ComplexField, GridSpec};
use crate::model::{psi_bound_final, psi_initial};
use crate::oracle::{
    bound_population, compare_fields, quench_experiment, FieldComparison, OracleConfig,
};
use crate::survival::fit::{fit_exponential, fit_power_law, local_maxima, mean_spacing, ExponentialFit, PowerLawFit};
use crate::survival::{
    escape_from_amplitude, escape_probability_shorttime, survival_amplitude, survival_amplitude_longtime,
    survival_amplitude_shorttime, survival_overlap_numeric, survival_probability_limit, SurvivalMethod,
    SHORT_TIME_MAX,
};
use crate::Complex;
use rayon::prelude::*;
use serde::Serialize;
use std::str::FromStr;

/// Evaluation routes for `psi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiMethod {
    Exact,
    Kernel,
    ShortTime,
    LongTime,
    FarField,
    Oracle,
}

impl FromStr for PsiMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => PsiMethod::Exact,
            "kernel" => PsiMethod::Kernel,
            "shorttime" | "short_time" => PsiMethod::ShortTime,
            "longtime" | "long_time" => PsiMethod::LongTime,
            "farfield" | "far_field" => PsiMethod::FarField,
            "oracle" => PsiMethod::Oracle,
            other => {
                return Err(Error::InvalidParameter {
                    name: "method",
                    reason: format!("unknown psi method `{other}`"),
                })
            }
        })
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let mut v: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    v[n - 1] = b;
    v
}

/// Regime violations become `None`; every other error propagates.
fn guarded(r: Result<Complex>) -> Result<Option<Complex>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::OutsideRegime(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn warn_nulls(what: &str, nulls: usize, total: usize) {
    if nulls > 0 {
        log::warn!("{what}: {nulls} of {total} rows outside the method's regime, written as null");
        eprintln!("warning: {what}: {nulls} of {total} rows outside the method's regime, written as null");
    }
}

pub fn oracle_config(s: &Settings) -> Result<OracleConfig> {
    let cfg = OracleConfig {
        grid: GridSpec::symmetric(s.box_half_width, s.h)?,
        dt: s.dt,
        mu: s.mu,
        well_width: s.well_width,
        cap_strength: s.cap_strength,
        cap_width: s.cap_width,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// `x,re_psi,im_psi,abs2`, plus `abs2_initial,abs2_bound_final` when `mu > 0`.
pub fn psi_table(s: &Settings) -> Result<Table> {
    let method = PsiMethod::from_str(&s.method)?;
    let grid = GridSpec::new(s.xmin, s.xmax, s.nx)?;
    let xs = grid.points();
    let (t, mu) = (s.t, s.mu);
    crate::error::check_mu(mu)?;
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NonPositiveTime(t));
    }
    let values: Vec<Option<Complex>> = match method {
        PsiMethod::Oracle => {
            let cfg = oracle_config(s)?;
            let run = quench_experiment(&cfg, &[0.0], &[t])?;
            let snap = &run.snapshots[0];
            xs.iter()
                .map(|&x| snap.grid.contains(x).then(|| snap.interpolate(x)))
                .collect()
        }
        _ if t == 0.0 => xs.iter().map(|&x| Some(psi_initial(x, 0.0))).collect(),
        _ => xs
            .par_iter()
            .map(|&x| {
                guarded(match method {
                    PsiMethod::Exact => psi_exact(x, t, mu),
                    PsiMethod::Kernel => propagate_by_kernel(|y| psi_initial(y, 0.0), x, t, mu),
                    PsiMethod::ShortTime => psi_shorttime(x, t, mu),
                    PsiMethod::LongTime => psi_longtime(x, t, mu),
                    PsiMethod::FarField => psi_farfield(x, t, mu),
                    PsiMethod::Oracle => unreachable!(),
                })
            })
            .collect::<Result<_>>()?,
    };
    warn_nulls(&format!("psi --method {}", s.method), values.iter().filter(|v| v.is_none()).count(), xs.len());

    let with_refs = mu > 0.0;
    let mut cols = vec!["x", "re_psi", "im_psi", "abs2"];
    if with_refs {
        cols.extend(["abs2_initial", "abs2_bound_final"]);
    }
    let mut table = Table::new(&cols);
    for (&x, v) in xs.iter().zip(&values) {
        let mut row = vec![Some(x), v.map(|c| c.re), v.map(|c| c.im), v.map(|c| c.norm_sqr())];
        if with_refs {
            row.push(Some(psi_initial(x, 0.0).norm_sqr()));
            row.push(Some(psi_bound_final(x, 0.0, mu)?.norm_sqr()));
        }
        table.push(row);
    }
    Ok(table)
}

fn parse_survival_method(name: &str) -> Result<SurvivalMethod> {
    SurvivalMethod::from_str(match name {
        "shorttime" => "short_time",
        "longtime" => "long_time",
        other => other,
    })
}

/// `t,re_A,im_A,P,one_minus_P,P_inf,one_minus_P_short_time`.
///
/// The last column is the leading `t^{3/2}` escape law, null for `t >= 0.1`.
pub fn survival_table(s: &Settings) -> Result<Table> {
    let method = parse_survival_method(&s.method)?;
    let times = s.time_grid()?;
    let mu = s.mu;
    crate::error::check_mu(mu)?;
    let amps: Vec<Option<Complex>> = match method {
        SurvivalMethod::Oracle => {
            let cfg = oracle_config(s)?;
            let run = quench_experiment(&cfg, &times, &[])?;
            run.series.amplitudes.into_iter().map(Some).collect()
        }
        _ => times
            .par_iter()
            .map(|&t| {
                if t == 0.0 {
                    return Ok(Some(Complex::new(1.0, 0.0)));
                }
                guarded(match method {
                    SurvivalMethod::Exact => survival_amplitude(t, mu),
                    SurvivalMethod::Quadrature => survival_overlap_numeric(t, mu),
                    SurvivalMethod::ShortTime => survival_amplitude_shorttime(t, mu, s.order),
                    SurvivalMethod::LongTime => survival_amplitude_longtime(t, mu),
                    SurvivalMethod::Oracle => unreachable!(),
                })
            })
            .collect::<Result<_>>()?,
    };
    warn_nulls(
        &format!("survival --method {}", s.method),
        amps.iter().filter(|a| a.is_none()).count(),
        times.len(),
    );
    let p_inf = survival_probability_limit(mu)?;
    let mut table = Table::new(&["t", "re_A", "im_A", "P", "one_minus_P", "P_inf", "one_minus_P_short_time"]);
    for (&t, a) in times.iter().zip(&amps) {
        let short = if t > 0.0 && t < SHORT_TIME_MAX {
            Some(escape_probability_shorttime(t, mu)?)
        } else {
            None
        };
        table.push(vec![
            Some(t),
            a.map(|a| a.re),
            a.map(|a| a.im),
            a.map(|a| a.norm_sqr().clamp(0.0, 1.0)),
            a.map(escape_from_amplitude),
            Some(p_inf),
            short,
        ]);
    }
    Ok(table)
}

/// Fits of one decay curve, as written by `fit`.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    /// `escape` fits `1 - P`; `envelope` fits the peaks of `|P - P_inf|`.
    pub target: String,
    pub source: String,
    pub mu: f64,
    pub window: (f64, f64),
    pub power_law: PowerLawFit,
    pub exponential: Option<ExponentialFit>,
    /// Exponential over power-law RMS log residual.
    pub residual_ratio: Option<f64>,
    pub peaks: Option<usize>,
    pub mean_peak_spacing: Option<f64>,
}

fn series_from_input(s: &Settings, target: &str) -> Result<(Vec<f64>, Vec<f64>, String)> {
    let path = s.input.as_ref().expect("checked by caller");
    let table = Table::read(path)?;
    let col = |name: &str| {
        table
            .column(name)
            .ok_or_else(|| Error::Usage(format!("{} has no `{name}` column", path.display())))
    };
    let t = col("t")?;
    let y: Vec<Option<f64>> = match target {
        "escape" => col("one_minus_P")?,
        _ => {
            let p = col("P")?;
            let p_inf = match table.column("P_inf") {
                Some(c) => c,
                None => vec![Some(survival_probability_limit(s.mu)?); p.len()],
            };
            p.iter()
                .zip(&p_inf)
                .map(|(p, q)| Some((p.as_ref()? - q.as_ref()?).abs()))
                .collect()
        }
    };
    let (ts, ys): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(&y)
        .filter_map(|(t, y)| Some(((*t)?, (*y)?)))
        .unzip();
    Ok((ts, ys, path.display().to_string()))
}

fn series_inline(s: &Settings, target: &str) -> Result<(Vec<f64>, Vec<f64>, String)> {
    let (lo, hi) = (s.window_lo, s.window_hi);
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Usage(format!("fit window needs 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let mu = s.mu;
    let (ts, ys): (Vec<f64>, Vec<f64>) = if target == "escape" {
        let n = s.nt.max(2);
        let mut ts: Vec<f64> = linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect();
        ts[0] = lo;
        ts[n - 1] = hi;
        let ys = ts
            .par_iter()
            .map(|&t| survival_amplitude(t, mu).map(escape_from_amplitude))
            .collect::<Result<Vec<_>>>()?;
        (ts, ys)
    } else {
        // fine enough to resolve the mu^2 + 1 beat
        let n = s.nt.max(((hi - lo) / 0.02).ceil() as usize + 1);
        let p_inf = survival_probability_limit(mu)?;
        let ts = linspace(lo, hi, n);
        let ys = ts
            .par_iter()
            .map(|&t| survival_amplitude(t, mu).map(|a| (a.norm_sqr() - p_inf).abs()))
            .collect::<Result<Vec<_>>>()?;
        (ts, ys)
    };
    Ok((ts, ys, format!("generated exact series, mu = {mu}")))
}

pub fn fit_report(s: &Settings) -> Result<FitReport> {
    let target = s.target.as_str();
    if target != "escape" && target != "envelope" {
        return Err(Error::Usage(format!("fit target must be escape or envelope, got `{target}`")));
    }
    let (ts, ys, source) = match &s.input {
        Some(_) => series_from_input(s, target)?,
        None => series_inline(s, target)?,
    };
    let window = (s.window_lo, s.window_hi);
    let (points, peaks): (Vec<(f64, f64)>, Option<Vec<(f64, f64)>>) = if target == "escape" {
        (ts.into_iter().zip(ys).collect(), None)
    } else {
        let pk = local_maxima(&ts, &ys);
        (pk.clone(), Some(pk))
    };
    let power_law = fit_power_law(&points, window)?;
    let exponential = fit_exponential(&points, window).ok();
    Ok(FitReport {
        target: target.to_string(),
        source,
        mu: s.mu,
        window,
        power_law,
        exponential,
        residual_ratio: exponential.map(|e| e.rms_log_residual / power_law.rms_log_residual),
        peaks: peaks.as_ref().map(Vec::len),
        mean_peak_spacing: peaks.as_deref().and_then(mean_spacing),
    })
}

/// Grid run compared against the closed forms.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub config: OracleConfig,
    pub initial_energy: f64,
    pub snapshots: Vec<SnapshotReport>,
    /// Largest `|P_grid - P_exact|` over the sampled times.
    pub max_probability_error: f64,
    pub final_time: f64,
    pub final_bound_population: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SnapshotReport {
    pub t: f64,
    /// `t` rounded to a whole number of steps.
    pub t_grid: f64,
    pub comparison: FieldComparison,
}

pub struct OracleOutput {
    pub report: OracleReport,
    pub survival: Table,
    pub snapshots: Vec<(f64, Table)>,
}

/// Closed-form wavefunction on every node of `grid`.
pub fn exact_field(grid: GridSpec, t: f64, mu: f64) -> Result<ComplexField> {
    let values = grid
        .points()
        .par_iter()
        .map(|&x| psi_exact(x, t, mu))
        .collect::<Result<Vec<_>>>()?;
    ComplexField::new(grid, values, t, mu)
}

/// Run a quench on the configured grid, sampling `A(t)` at `nt` points up to
/// the last snapshot time and keeping fields at `times`.
pub fn oracle_run(s: &Settings) -> Result<OracleOutput> {
    let cfg = oracle_config(s)?;
    let mut snap_times = s.times.clone();
    if snap_times.is_empty() {
        return Err(Error::Usage("oracle needs at least one snapshot time".into()));
    }
    snap_times.sort_by(f64::total_cmp);
    let t_end = *snap_times.last().unwrap();
    let mut steps: Vec<u64> = linspace(0.0, t_end, s.nt.max(2))
        .into_iter()
        .chain(snap_times.iter().copied())
        .map(|t| (t / cfg.dt).round() as u64)
        .collect();
    steps.sort_unstable();
    steps.dedup();
    let samples: Vec<f64> = steps.iter().map(|&k| k as f64 * cfg.dt).collect();
    let run = quench_experiment(&cfg, &samples, &snap_times)?;

    let mu = s.mu;
    let mut survival = Table::new(&["t", "re_A", "im_A", "P", "one_minus_P", "P_exact", "abs_err_P"]);
    let mut max_err: f64 = 0.0;
    for ((&t, a), &p) in run.series.times.iter().zip(&run.series.amplitudes).zip(&run.series.probabilities) {
        let pe = if t == 0.0 { 1.0 } else { survival_amplitude(t, mu)?.norm_sqr() };
        max_err = max_err.max((p - pe).abs());
        survival.push(vec![
            Some(t),
            Some(a.re),
            Some(a.im),
            Some(p),
            Some(escape_from_amplitude(*a)),
            Some(pe),
            Some((p - pe).abs()),
        ]);
    }

    let mut reports = Vec::new();
    let mut tables = Vec::new();
    for (snap, &label) in run.snapshots.iter().zip(&snap_times) {
        let reference = if snap.time == 0.0 {
            ComplexField::from_fn(snap.grid, 0.0, mu, |x| psi_initial(x, 0.0))
        } else {
            exact_field(snap.grid, snap.time, mu)?
        };
        reports.push(SnapshotReport {
            t: label,
            t_grid: snap.time,
            comparison: compare_fields(snap, &reference)?,
        });
        let mut table = Table::new(&["x", "re_psi", "im_psi", "abs2", "re_psi_exact", "im_psi_exact", "abs2_exact"]);
        for (i, x) in snap.grid.points().into_iter().enumerate() {
            if x < s.xmin || x > s.xmax {
                continue;
            }
            let (v, r) = (snap.values[i], reference.values[i]);
            table.push(vec![
                Some(x),
                Some(v.re),
                Some(v.im),
                Some(v.norm_sqr()),
                Some(r.re),
                Some(r.im),
                Some(r.norm_sqr()),
            ]);
        }
        tables.push((label, table));
    }
    let last = run.snapshots.last().unwrap();
    let report = OracleReport {
        config: cfg,
        initial_energy: run.initial_energy,
        snapshots: reports,
        max_probability_error: max_err,
        final_time: *snap_times.last().unwrap(),
        final_bound_population: if mu > 0.0 { Some(bound_population(last, mu)?) } else { None },
    };
    Ok(OracleOutput {
        report,
        survival,
        snapshots: tables,
    })
}

/// Fixed-parameter settings for figure `which` (1, 2 or 3).
pub fn figure_settings(base: &Settings, which: u8) -> Result<Vec<(String, Settings)>> {
    let mut s = base.clone();
    s.mu = 3.0;
    s.method = "exact".into();
    Ok(match which {
        1 => [0.07, 0.2, 0.7, 100.0]
            .iter()
            .map(|&t| {
                let mut f = s.clone();
                f.t = t;
                f.xmin = -10.0;
                f.xmax = 10.0;
                f.nx = 2001;
                (format!("fig1_t{t}"), f)
            })
            .collect(),
        2 => {
            s.tmin = 0.0;
            s.tmax = 20.0;
            s.nt = 2001;
            s.spacing = Spacing::Linear;
            vec![("fig2".into(), s)]
        }
        3 => {
            s.tmin = 1e-4;
            s.tmax = 1e-1;
            s.nt = 400;
            s.spacing = Spacing::Log;
            vec![("fig3".into(), s)]
        }
        other => return Err(Error::Usage(format!("no figure {other}; choose 1, 2 or 3"))),
    })
}
