//! Survival probability after the quench: the plateau, the Rabi-like beat at
//! frequency 1 + mu^2 and the algebraic approach to it.

use deltaquench::survival::fit::{fit_power_law, local_maxima, mean_spacing};
use deltaquench::survival::{survival_probability_limit, SurvivalSeries};
use std::f64::consts::PI;

fn main() -> deltaquench::Result<()> {
    let mu = 3.0;
    let p_inf = survival_probability_limit(mu)?;
    let times: Vec<f64> = (0..=40_000).map(|k| k as f64 * 5e-3).collect();
    let series = SurvivalSeries::exact(times, mu)?;

    let shown = (0..=600).step_by(25).chain((2_000..series.len()).step_by(4_000));
    for k in shown {
        let p = series.probabilities[k];
        let bar = "#".repeat((p * 60.0) as usize);
        println!("t = {:>6.2}  P = {p:.6}  {bar}", series.times[k]);
    }
    println!("P_inf = {p_inf}");

    let late: Vec<(f64, f64)> = series
        .times
        .iter()
        .zip(&series.probabilities)
        .filter(|(t, _)| **t >= 20.0)
        .map(|(&t, &p)| (t, p - p_inf))
        .collect();
    let (ts, dev): (Vec<f64>, Vec<f64>) = late.iter().cloned().unzip();
    let crests: Vec<(f64, f64)> = local_maxima(&ts, &dev).into_iter().filter(|c| c.1 > 0.0).collect();
    if let Some(spacing) = mean_spacing(&crests) {
        println!("beat frequency {:.4} (mu^2 = {})", 2.0 * PI / spacing, mu * mu);
    }
    let abs: Vec<f64> = dev.iter().map(|d| d.abs()).collect();
    let envelope = fit_power_law(&local_maxima(&ts, &abs), (20.0, 200.0))?;
    println!("|P - P_inf| envelope ~ t^{:.3}", envelope.exponent);
    Ok(())
}
