use convolab::weights::{loglog_slope, sqrt_identity_residual, Convergence, SequenceSpec, WeightSequence};

/// `sup_p ln(ρ^p / p!^s)` by brute force over `p`.
fn brute_m(s: f64, rho: f64) -> f64 {
    let mut ln_fact = 0.0;
    let mut best: f64 = 0.0;
    for p in 1..10_000_000u32 {
        ln_fact += (p as f64).ln();
        let v = p as f64 * rho.ln() - s * ln_fact;
        best = best.max(v);
        if v < best - 50.0 {
            break;
        }
    }
    best
}

#[test]
fn associated_function_matches_brute_force() {
    for s in [1.5, 2.0] {
        let seq = WeightSequence::gevrey_factorial(s).unwrap();
        for rho in [0.5, 3.0, 1e2, 1e5, 1e9] {
            let exact = brute_m(s, rho);
            assert!((seq.m(rho) - exact).abs() < 1e-9 * exact.max(1.0), "s={s} rho={rho}");
        }
    }
}

#[test]
fn squared_sequence_identity() {
    let seq = WeightSequence::gevrey_factorial(1.5).unwrap();
    for t in [0.01, 1.0, 50.0, 1e4] {
        for k in [0.5, 1.0, 3.0] {
            assert!(sqrt_identity_residual(&seq, k, t).0 < 1e-10);
        }
    }
}

#[test]
fn gevrey_conditions_hold() {
    let rep = WeightSequence::gevrey_factorial(2.0).unwrap().check_conditions().unwrap();
    assert!(rep.m1 && rep.m2.0);
    assert_eq!(rep.m3prime.0, Convergence::Converges);
}

#[test]
fn non_log_convex_table_is_flagged() {
    // p!² with M_5 inflated
    let mut values: Vec<f64> = (0..=64).map(|p| libm::tgamma(p as f64 + 1.0).powi(2)).collect();
    values[5] *= 50.0;
    let rep = WeightSequence::from_values(&values).unwrap().check_conditions().unwrap();
    assert!(!rep.m1);
}

#[test]
fn slope_tends_to_reciprocal_order() {
    let seq = WeightSequence::gevrey_factorial(1.5).unwrap();
    let slope = loglog_slope(&seq, 1e2, 1e6, 100);
    assert!((slope - 1.0 / 1.5).abs() < 0.03);
}

#[test]
fn spec_round_trip() {
    let spec: SequenceSpec = serde_json::from_str(r#"{"kind": "gevrey-factorial", "s": 1.5}"#).unwrap();
    assert_eq!(spec, SequenceSpec::GevreyFactorial { s: 1.5 });
    assert!(SequenceSpec::GevreyFactorial { s: 0.5 }.build().is_err());
}
