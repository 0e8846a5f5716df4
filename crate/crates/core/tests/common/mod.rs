#![allow(dead_code)]

use deltaquench::Complex;
use std::path::PathBuf;

/// One row of a 50-digit erfc reference table: argument and erfc value.
pub struct ErfcReference {
    pub z: Complex,
    pub erfc: Complex,
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn load_erfc_table(name: &str) -> Vec<ErfcReference> {
    let text = std::fs::read_to_string(data_path(name)).expect("reference table present");
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(|f| f.trim().parse().unwrap()).collect();
            ErfcReference {
                z: Complex::new(v[0], v[1]),
                erfc: Complex::new(v[2], v[3]),
            }
        })
        .collect()
}

pub fn rel_err(got: Complex, want: Complex) -> f64 {
    (got - want).norm() / want.norm()
}

/// Trapezoid rule on uniform samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]))
}
