//! Complex error functions: values, the scaled form on the critical ray and
//! the reflection identity.

use deltaquench::cerf::{erf, erfc, erfcx, faddeeva, sqrt_it};
use deltaquench::Complex;

fn main() {
    for z in [
        Complex::new(0.0, 0.0),
        Complex::new(1.0, 1.0),
        Complex::new(-2.0, 0.5),
        Complex::new(3.0, -4.0),
    ] {
        println!("z = {z:>8}: erf = {:.15}, erfc = {:.15}", erf(z), erfc(z));
        let refl = erfc(-z) - (2.0 - erfc(z));
        println!("             |erfc(-z) - 2 + erfc(z)| = {:.1e}", refl.norm());
    }

    // e^{i pi/4} sqrt(t) ray used by the propagator; erfc itself under- and
    // overflows here, erfcx stays O(1/|z|)
    for t in [1e-2, 1.0, 1e2, 1e4, 1e8] {
        let z = sqrt_it(t) * 3.0;
        let w = erfcx(z);
        println!("t = {t:>6e}: erfcx(3 sqrt(it)) = {w:.6e}, |z w sqrt(pi)| = {:.10}", (z * w).norm() * std::f64::consts::PI.sqrt());
    }

    let z = Complex::new(1.5, 2.0);
    println!("w(z) = {:.15}", faddeeva(z));
}
