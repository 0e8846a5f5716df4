//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below the absolute tolerance. Callers pass breakpoints at
//! kinks and stationary points so that no panel has to resolve them blindly.

use crate::error::{Error, Result};
use crate::Complex;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: Complex,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl QuadConfig {
    pub fn with_tolerance(abs_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            max_intervals: 20_000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64) -> (Complex, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    (value, error)
}

/// Integrate `f` over `[points[0], points[last]]`, with the interior points
/// used as initial panel boundaries.
pub fn integrate<F>(f: F, points: &[f64], config: QuadConfig) -> Result<Integral>
where
    F: Fn(f64) -> Complex,
{
    let mut bounds: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    bounds.sort_by(f64::total_cmp);
    bounds.dedup();
    if bounds.len() < 2 {
        return Ok(Integral {
            value: Complex::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
        });
    }

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in bounds.windows(2) {
        let (value, error) = gauss_kronrod(&f, w[0], w[1]);
        evaluations += 15;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    loop {
        let total_error: f64 = heap.iter().map(|p| p.error).sum();
        if total_error <= config.abs_tol {
            let value = heap.iter().map(|p| p.value).sum();
            return Ok(Integral {
                value,
                error_estimate: total_error,
                evaluations,
            });
        }
        if heap.len() >= config.max_intervals {
            return Err(Error::Quadrature {
                achieved: total_error,
                requested: config.abs_tol,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            return Err(Error::Quadrature {
                achieved: total_error,
                requested: config.abs_tol,
            });
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gauss_kronrod(&f, a, b);
            evaluations += 15;
            heap.push(Panel { a, b, value, error });
        }
    }
}
