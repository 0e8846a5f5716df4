//! Replace the delta wells by square wells of width dx and watch the survival
//! probability drift away from the point-interaction result as mu dx grows.

use deltaquench::field::GridSpec;
use deltaquench::oracle::{quench_experiment, OracleConfig};
use deltaquench::survival::survival_probability;

fn main() -> deltaquench::Result<()> {
    let mu = 3.0;
    let times = [0.01, 0.1, 1.0];
    for width in [0.0, 0.05, 0.2] {
        let config = OracleConfig {
            grid: GridSpec::symmetric(40.0, 0.01)?,
            dt: 1e-4,
            well_width: width,
            ..OracleConfig::desk(mu)?
        };
        let run = quench_experiment(&config, &times, &[])?;
        print!("width {width:<5} E_i = {:+.5}:", run.initial_energy);
        for (t, p) in times.iter().zip(&run.series.probabilities) {
            let exact = survival_probability(*t, mu)?;
            print!("  P({t}) = {p:.5} ({:+.2}%)", 100.0 * (p / exact - 1.0));
        }
        println!();
    }
    Ok(())
}
