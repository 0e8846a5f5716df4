//! Map physical well strengths onto the dimensionless quench ratio and print
//! the bound-state bookkeeping that follows from it.

use deltaquench::model::{bound_coefficient, bound_energy, bound_overlap, ModelParams};
use deltaquench::survival::survival_probability_limit;

fn main() -> deltaquench::Result<()> {
    // well strengths before and after, hbar = 2m = 1
    let params = ModelParams::from_strengths(0.5, 1.5)?;
    let units = params.units().expect("built from strengths");
    let mu = params.mu;
    println!("mu = {mu}");
    println!("t = 1 is {:.4} physical time units, x = 1 is {:.4} length units", units.t_physical(1.0), units.x_physical(1.0));

    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "mu", "E_f", "<Bf|Bi>", "C_B", "P_inf");
    for mu in [0.25, 0.5, 1.0, 2.0, 3.0, 4.0] {
        println!(
            "{mu:>6} {:>10.4} {:>10.6} {:>10.6} {:>10.6}",
            bound_energy(mu)?,
            bound_overlap(mu)?,
            bound_coefficient(mu)?,
            survival_probability_limit(mu)?
        );
    }
    // deepening and shallowing by the same factor keep the same fraction
    println!(
        "P_inf(3) = {}, P_inf(1/3) = {}",
        survival_probability_limit(3.0)?,
        survival_probability_limit(1.0 / 3.0)?
    );
    Ok(())
}
