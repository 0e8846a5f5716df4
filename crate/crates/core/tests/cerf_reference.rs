mod common;

use common::{load_erfc_table, rel_err};
use deltaquench::cerf::{erf, erfc, erfcx};
use deltaquench::Complex;

fn max_rel_error(table: &str) -> (f64, Complex) {
    load_erfc_table(table)
        .iter()
        .map(|r| (rel_err(erfc(r.z), r.erfc), r.z))
        .fold((0.0, Complex::new(0.0, 0.0)), |acc, x| if x.0 > acc.0 { x } else { acc })
}

#[test]
fn erfc_matches_reference_lattice() {
    let (worst, at) = max_rel_error("erfc_grid.csv");
    println!("lattice: max relative error {worst:.3e} at {at}");
    assert!(worst <= 1e-12, "max relative error {worst:e} at {at}");
}

#[test]
fn erfc_matches_reference_scatter() {
    let (worst, at) = max_rel_error("erfc_scatter.csv");
    println!("scatter: max relative error {worst:.3e} at {at}");
    // includes points on the diagonal ray out to |z| = 12
    assert!(worst <= 1e-12, "max relative error {worst:e} at {at}");
}

#[test]
fn erf_and_erfcx_inherit_accuracy() {
    for r in load_erfc_table("erfc_scatter.csv") {
        let erf_ref = 1.0 - r.erfc;
        // erf = 1 - erfc only meaningful relative to max(|erf|, 1)
        let scale = erf_ref.norm().max(1.0);
        assert!((erf(r.z) - erf_ref).norm() / scale < 1e-12, "erf at {}", r.z);

        let scaled_ref = r.erfc * (r.z * r.z).exp();
        if scaled_ref.is_finite() && scaled_ref.norm() > 0.0 {
            assert!(rel_err(erfcx(r.z), scaled_ref) < 1e-11, "erfcx at {}", r.z);
        }
    }
}
