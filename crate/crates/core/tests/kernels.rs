use std::f64::consts::PI;

use convolab::kernel::{Kernel, KernelSpec};
use num_complex::Complex64 as C;

fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

#[test]
fn riesz_matches_power_law() {
    for alpha in [0.5, 1.0, 2.5] {
        let k = Kernel::riesz(alpha).unwrap();
        for t in [0.1f64, 1.0, 3.7] {
            let exact = t.powf(alpha - 1.0) / gamma(alpha);
            assert!((k.evaluate(t).unwrap().re - exact).abs() < 1e-12 * exact.max(1.0));
            let theta = t.powf(alpha) / gamma(alpha + 1.0);
            assert!((k.theta(t).unwrap().re - theta).abs() < 1e-12 * theta.max(1.0));
        }
        for l in [C::new(2.0, 0.0), C::new(1.0, 3.0)] {
            assert!((k.laplace(l).unwrap() - l.powf(-alpha)).norm() < 1e-12);
        }
    }
}

#[test]
fn k_half_transform_is_exp_minus_root() {
    let k = Kernel::k_half();
    for l in [C::new(0.5, 0.0), C::new(4.0, -2.0), C::new(30.0, 10.0)] {
        assert!((k.laplace(l).unwrap() - (-l.sqrt()).exp()).norm() < 1e-12);
        let numeric = k.laplace_numeric(l).unwrap();
        assert!((numeric.value - (-l.sqrt()).exp()).norm() < 1e-8);
    }
}

#[test]
fn gevrey_transform_by_numeric_laplace() {
    let k = Kernel::gevrey(0.75).unwrap();
    for l in [C::new(0.5, 0.0), C::new(1.0, 0.0), C::new(3.0, 2.0)] {
        let numeric = k.laplace_numeric(l).unwrap().value;
        assert!((numeric - (-l.powf(0.75)).exp()).norm() < 1e-6);
    }
}

#[test]
fn gevrey_half_agrees_with_k_half_at_long_times() {
    let g = Kernel::gevrey(0.5).unwrap();
    let h = Kernel::k_half();
    for m in [0, 1] {
        for t in [0.5, 15.0, 60.0, 150.0] {
            assert!((g.integral(m, t).unwrap() - h.integral(m, t).unwrap()).norm() < 1e-10);
        }
    }
}

#[test]
fn convolution_of_riesz_kernels_adds_orders_exactly() {
    let a = Kernel::riesz(0.5).unwrap();
    let b = Kernel::riesz(1.5).unwrap();
    let ab = Kernel::convolve(&a, &b);
    for t in [0.3, 1.0, 2.0] {
        assert!((ab.evaluate(t).unwrap().re - t).abs() < 1e-7);
    }
}

#[test]
fn single_zero_kernel_inverts_exactly() {
    let k = Kernel::spectrum_zero(&[C::new(1.0, 0.0)], 1).unwrap();
    for t in [0.0f64, 0.5, 2.0] {
        let exact = (2.0 * t - 1.0) * (-t).exp();
        assert!((k.evaluate(t).unwrap().re - exact).abs() < 1e-12);
    }
}

#[test]
fn weierstrass_of_unit_kernel() {
    let k1 = Kernel::weierstrass(&Kernel::riesz(1.0).unwrap()).unwrap();
    for t in [0.05, 0.5, 2.0] {
        assert!((k1.evaluate(t).unwrap().re - 1.0 / (PI * t).sqrt()).abs() < 1e-9);
    }
}

#[test]
fn tabulated_csv_round_trip() {
    let dir = std::env::temp_dir().join(format!("convolab-kernel-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.csv");
    let k = Kernel::sample(&Kernel::k_half(), 4.0, 400).unwrap();
    k.save_csv(&path).unwrap();
    let back = Kernel::load_csv(&path).unwrap();
    for t in [0.5, 1.25, 3.0] {
        assert!((back.evaluate(t).unwrap() - k.evaluate(t).unwrap()).norm() < 1e-12);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(Kernel::riesz(0.0).is_err());
    assert!(Kernel::gevrey(1.0).is_err());
    assert!(Kernel::spectrum_zero(&[C::new(-1.0, 0.0)], 1).is_err());
    let spec: KernelSpec = serde_json::from_str(r#"{"kind": "riesz", "params": {"alpha": 2.0}}"#).unwrap();
    assert!(Kernel::from_spec(&spec).is_ok());
}
