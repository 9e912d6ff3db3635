//! Numerical integration primitives shared by the kernel and evolution engines.
//!
//! Everything here works on complex-valued integrands; real callers take `.re`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::QuadError;

/// Tolerances attached to every numerically integrated result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-9, rel: 1e-7 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn tight() -> Self {
        Tolerance { abs: 1e-13, rel: 1e-11 }
    }

    pub fn accepts(&self, err: f64, value: f64) -> bool {
        err <= self.abs.max(self.rel * value.abs())
    }
}

/// A quadrature value with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

// Gauss-Kronrod 7/15 nodes (non-negative half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * h;
    let diff = ((kron - gauss) * h).norm();
    // QUADPACK-style error scaling, kept conservative for smooth integrands.
    let error = if diff > 0.0 {
        diff.min((200.0 * diff).powf(1.5))
    } else {
        0.0
    };
    Estimate { value, error }
}

struct Segment {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est
            .error
            .partial_cmp(&other.est.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss-Kronrod quadrature on `[a, b]`.
///
/// `breaks` are optional interior points where the integrand is known to be
/// non-smooth; they seed the initial partition.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate, QuadError>
where
    F: Fn(f64) -> Complex64,
{
    integrate_with_breaks(f, a, b, &[], tol)
}

pub fn integrate_with_breaks<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<Estimate, QuadError>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let mut edges = vec![lo];
    edges.extend(pts);
    edges.push(hi);

    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in edges.windows(2) {
        let est = gk15(&f, w[0], w[1]);
        total += est.value;
        err += est.error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            est,
        });
    }
    const MAX_SEGMENTS: usize = 4000;
    while !tol.accepts(err, total.norm()) {
        if heap.len() >= MAX_SEGMENTS {
            return Err(QuadError::NonConvergence {
                estimate: err,
                tolerance: tol.abs.max(tol.rel * total.norm()),
            });
        }
        let seg = heap.pop().expect("non-empty partition");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval collapsed at machine precision; accept what we have.
            heap.push(seg);
            break;
        }
        let left = gk15(&f, seg.a, mid);
        let right = gk15(&f, mid, seg.b);
        total += left.value + right.value - seg.est.value;
        err += left.error + right.error - seg.est.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            est: left,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            est: right,
        });
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for s in heap.iter() {
        value += s.est.value;
        error += s.est.error;
    }
    Ok(Estimate {
        value: value * sign,
        error,
    })
}

/// Cumulative integral of uniformly sampled data, fourth-order accurate.
///
/// Returns `F` with `F[0] = 0` and `F[n] ≈ ∫_{t_0}^{t_n} f`.
pub fn cumulative(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n < 2 {
        return out;
    }
    if n < 4 {
        for i in 1..n {
            out[i] = out[i - 1] + (values[i - 1] + values[i]) * (0.5 * h);
        }
        return out;
    }
    let c = h / 24.0;
    for i in 0..n - 1 {
        let piece = if i == 0 {
            (values[0] * 9.0 + values[1] * 19.0 - values[2] * 5.0 + values[3]) * c
        } else if i == n - 2 {
            (values[n - 1] * 9.0 + values[n - 2] * 19.0 - values[n - 3] * 5.0 + values[n - 4]) * c
        } else {
            (-values[i - 1] + values[i] * 13.0 + values[i + 1] * 13.0 - values[i + 2]) * c
        };
        out[i + 1] = out[i] + piece;
    }
    out
}

/// Integral of uniformly sampled data over the whole grid, fourth-order accurate.
pub fn total(values: &[Complex64], h: f64) -> Complex64 {
    cumulative(values, h)
        .last()
        .copied()
        .unwrap_or(Complex64::new(0.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let est = integrate(
            |x| Complex64::new(x * x * x - 2.0 * x, 0.0),
            0.0,
            2.0,
            Tolerance::tight(),
        )
        .unwrap();
        assert!((est.value.re - 0.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let est = integrate(
            |x| Complex64::new(x.powf(-0.5), 0.0),
            0.0,
            1.0,
            Tolerance::new(1e-10, 1e-10),
        )
        .unwrap();
        assert!((est.value.re - 2.0).abs() < 1e-8, "{}", est.value.re);
    }

    #[test]
    fn oscillatory_complex() {
        let est = integrate(
            |x| Complex64::new(0.0, 5.0 * x).exp(),
            0.0,
            3.0,
            Tolerance::tight(),
        )
        .unwrap();
        let exact = (Complex64::new(0.0, 15.0).exp() - 1.0) / Complex64::new(0.0, 5.0);
        assert!((est.value - exact).norm() < 1e-12);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let f = |x: f64| Complex64::new(x.exp(), 0.0);
        let a = integrate(f, 0.0, 1.0, Tolerance::tight()).unwrap().value;
        let b = integrate(f, 1.0, 0.0, Tolerance::tight()).unwrap().value;
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn cumulative_fourth_order() {
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let v: Vec<Complex64> = (0..=n)
                .map(|i| Complex64::new((i as f64 * h).sin(), 0.0))
                .collect();
            let c = cumulative(&v, h);
            (c[n].re - (1.0 - 1f64.cos())).abs()
        };
        let ratio = err(20) / err(40);
        assert!(ratio > 12.0, "ratio {ratio}");
    }
}
