//! Density profiles after a quench from mu = 1 to mu = 3, plus an independent
//! check against direct propagator quadrature.

use deltaquench::exact::{norm_sqr_by_quadrature, propagate_by_kernel, psi_exact};
use deltaquench::model::{psi_bound_final, psi_initial};

fn main() -> deltaquench::Result<()> {
    let mu = 3.0;
    let xs: Vec<f64> = (0..=8).map(|k| -4.0 + k as f64).collect();
    print!("{:>8}", "t \\ x");
    for x in &xs {
        print!("{x:>9.1}");
    }
    println!();
    for t in [0.0, 0.07, 0.2, 0.7, 100.0] {
        print!("{t:>8}");
        for &x in &xs {
            print!("{:>9.4}", psi_exact(x, t, mu)?.norm_sqr());
        }
        println!();
    }
    print!("{:>8}", "bound");
    for &x in &xs {
        print!("{:>9.4}", psi_bound_final(x, 0.0, mu)?.norm_sqr());
    }
    println!();

    for t in [0.07, 0.7, 10.0] {
        println!("t = {t}: ||psi||^2 = {:.10}", norm_sqr_by_quadrature(t, mu, 1e-9)?);
    }

    let (x, t) = (0.8, 0.2);
    let closed = psi_exact(x, t, mu)?;
    let direct = propagate_by_kernel(|y| psi_initial(y, 0.0), x, t, mu)?;
    println!("psi({x}, {t}): closed form {closed:.10}, kernel quadrature {direct:.10}, |diff| = {:.1e}", (closed - direct).norm());
    Ok(())
}
