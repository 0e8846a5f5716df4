//! Long grid run with absorbing layers: the radiation leaves the box and the
//! wavefunction left behind is the new bound state with weight 4mu/(1+mu)^2.

use deltaquench::field::GridSpec;
use deltaquench::model::bound_overlap;
use deltaquench::oracle::{bound_population, quench_experiment, OracleConfig};

fn main() -> deltaquench::Result<()> {
    let mu = 3.0;
    let config = OracleConfig {
        grid: GridSpec::symmetric(60.0, 0.01)?,
        dt: 2e-3,
        cap_strength: 1.0,
        cap_width: 20.0,
        ..OracleConfig::desk(mu)?
    };
    let times = [5.0, 20.0, 50.0];
    let run = quench_experiment(&config, &[0.0], &times)?;
    let want = bound_overlap(mu)?.powi(2);
    for snap in &run.snapshots {
        println!(
            "t = {:>4}: norm {:.5}, bound population {:.6}",
            snap.time,
            snap.norm_sqr(),
            bound_population(snap, mu)?
        );
    }
    println!("expected 4 mu/(1+mu)^2 = {want:.6}");
    Ok(())
}
