//! Short-time, far-field and long-time forms of the wavefunction and the
//! survival amplitude, each against the exact result inside its regime.

use deltaquench::exact::{psi_exact, psi_farfield, psi_longtime, psi_shorttime};
use deltaquench::survival::{survival_amplitude, survival_amplitude_longtime, survival_amplitude_shorttime};
use deltaquench::{Complex, Error};

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm()
}

fn main() -> deltaquench::Result<()> {
    println!("short time, mu = 0, t = 0.01");
    for x in [2.0, 5.0, 10.0] {
        println!("  x = {x:>4}: rel err {:.2e}", rel(psi_shorttime(x, 0.01, 0.0)?, psi_exact(x, 0.01, 0.0)?));
    }
    println!("far field, t = 1");
    for (x, mu) in [(20.0, 0.0), (40.0, 0.0), (20.0, 3.0), (200.0, 3.0)] {
        println!("  x = {x:>5}, mu = {mu}: rel err {:.2e}", rel(psi_farfield(x, 1.0, mu)?, psi_exact(x, 1.0, mu)?));
    }
    println!("long time, mu = 3, x = 0");
    for t in [50.0, 200.0, 1000.0] {
        let err = (psi_longtime(0.0, t, 3.0)? - psi_exact(0.0, t, 3.0)?).norm();
        println!("  t = {t:>6}: abs err {err:.2e}");
    }

    println!("survival amplitude, mu = 3");
    for order in 1..=5 {
        let t = 1e-3;
        let e = (survival_amplitude_shorttime(t, 3.0, order)? - survival_amplitude(t, 3.0)?).norm();
        println!("  series order {order} at t = {t}: abs err {e:.2e}");
    }
    for t in [20.0, 200.0] {
        println!("  long time t = {t}: rel err {:.2e}", rel(survival_amplitude_longtime(t, 3.0)?, survival_amplitude(t, 3.0)?));
    }

    // outside a regime the forms refuse rather than extrapolate
    match psi_farfield(0.5, 1.0, 3.0) {
        Err(Error::OutsideRegime(why)) => println!("far field at x = 0.5: {why}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
