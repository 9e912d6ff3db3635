use libm::erfc;
use std::f64::consts::PI;

/// Repeated integral of the complementary error function, `iⁿerfc(x)`, for `n ≥ −2`.
///
/// `i⁻¹erfc(x) = (2/√π)e^{−x²}`, `i⁻²erfc(x) = (4x/√π)e^{−x²}`, and for
/// `n ≥ 1` the three-term recurrence `iⁿ = −(x/n)iⁿ⁻¹ + iⁿ⁻²/(2n)`.
pub fn ierfc(n: i32, x: f64) -> f64 {
    assert!(n >= -2, "ierfc order {n} below -2");
    let g = (-x * x).exp() / PI.sqrt();
    match n {
        -2 => 4.0 * x * g,
        -1 => 2.0 * g,
        0 => erfc(x),
        _ => {
            let (mut a, mut b) = (2.0 * g, erfc(x));
            for k in 1..=n {
                let k = k as f64;
                let c = -(x / k) * b + a / (2.0 * k);
                a = b;
                b = c;
            }
            b
        }
    }
}
