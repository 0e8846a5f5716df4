//! Crank-Nicolson propagation of the quench on a grid, compared with the
//! closed-form wavefunction and survival probability.
//!
//! Pass `desk` to run at h = 0.005, dt = 5e-5 (a few seconds in release).

use deltaquench::field::{ComplexField, GridSpec};
use deltaquench::exact::psi_exact;
use deltaquench::oracle::{compare_fields, quench_experiment, OracleConfig};
use deltaquench::survival::survival_probability;

fn main() -> deltaquench::Result<()> {
    let mu = 3.0;
    let config = if std::env::args().any(|a| a == "desk") {
        OracleConfig::desk(mu)?
    } else {
        OracleConfig {
            grid: GridSpec::symmetric(40.0, 0.01)?,
            dt: 1e-4,
            ..OracleConfig::desk(mu)?
        }
    };
    println!("h = {}, dt = {}, box = [{}, {}]", config.grid.spacing(), config.dt, config.grid.x_min, config.grid.x_max);

    let samples: Vec<f64> = (1..=14).map(|k| 0.05 * k as f64).collect();
    let snapshots = [0.07, 0.2, 0.7];
    let run = quench_experiment(&config, &samples, &snapshots)?;

    for snap in &run.snapshots {
        let exact = ComplexField::try_from_fn(snap.grid, snap.time, mu, |x| psi_exact(x, snap.time, mu))?;
        let c = compare_fields(snap, &exact)?;
        println!("t = {:.2}: L2 rel {:.3e}, max abs {:.3e}", snap.time, c.l2_rel, c.linf);
    }
    for (t, p) in run.series.times.iter().zip(&run.series.probabilities).step_by(3) {
        println!("t = {t:.2}: P grid {p:.6}, exact {:.6}", survival_probability(*t, mu)?);
    }
    Ok(())
}
