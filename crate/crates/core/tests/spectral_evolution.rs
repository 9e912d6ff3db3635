use convolab::evolution::{
    identity_residual, scalar_cosine, scalar_semigroup, volterra_oracle, FamilyKind, Grid,
};
use convolab::kernel::Kernel;
use convolab::spectral::{
    companion_resolvent_check, spectrum_image, CompanionOperator, ImageMap, OperatorSpec, SpectralOperator,
};
use num_complex::Complex64 as C;

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

#[test]
fn diagonal_resolvent_is_inverse_distance() {
    let op = SpectralOperator::real_eigenvalues(&[-1.0, -4.0, -9.0]).unwrap();
    for l in [C::new(0.0, 1.0), C::new(-2.0, 0.5), C::new(3.0, 0.0)] {
        let d = [-1.0, -4.0, -9.0].iter().map(|&m| (l - m).norm()).fold(f64::INFINITY, f64::min);
        assert!((op.resolvent_norm(l).unwrap() * d - 1.0).abs() < 1e-12);
    }
}

#[test]
fn square_map_of_laplacian() {
    let op = SpectralOperator::dirichlet_laplacian(5).unwrap();
    let sq = spectrum_image(&op, ImageMap::Square);
    let mut got: Vec<f64> = sq.points().iter().map(|z| z.re.abs()).collect();
    got.sort_by(f64::total_cmp);
    let want: Vec<f64> = (1..=5).map(|n| ((n * n) as f64).powi(2)).collect();
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-9 * w);
    }
}

#[test]
fn companion_check_on_small_operator() {
    let op = SpectralOperator::real_eigenvalues(&[-1.0, -4.0]).unwrap();
    let rep = companion_resolvent_check(&CompanionOperator::new(op), C::new(0.5, 1.0), 8, 1).unwrap();
    assert!(rep.lower_ok && rep.upper_ok);
    assert!(rep.formula_residual < 1e-10);
}

#[test]
fn operator_spec_json() {
    let spec: OperatorSpec = serde_json::from_str(r#"{"eigenvalues": [-1, [0, 2]]}"#).unwrap();
    let op = SpectralOperator::from_spec(&spec).unwrap();
    assert_eq!(op.points(), &[r(-1.0), C::new(0.0, 2.0)]);
}

#[test]
fn unit_kernel_families_in_closed_form() {
    let k = Kernel::riesz(1.0).unwrap();
    let g = Grid::new(2.0, 400).unwrap();
    // K ≡ 1: cosine family sin(2t)/2 for μ = −4, semigroup (e^{μt} − 1)/μ
    let c = scalar_cosine(&k, r(-4.0), &g).unwrap();
    let s = scalar_semigroup(&k, r(-3.0), &g).unwrap();
    for (i, t) in g.times().into_iter().enumerate() {
        assert!((c.scalar(i) - r((2.0 * t).sin() / 2.0)).norm() < 1e-10);
        assert!((s.scalar(i) - r(((-3.0 * t).exp() - 1.0) / -3.0)).norm() < 1e-10);
    }
}

#[test]
fn riesz_two_semigroup_against_oracle() {
    let k = Kernel::riesz(2.0).unwrap();
    let g = Grid::new(1.0, 200).unwrap();
    let mu = C::new(-2.0, 1.0);
    let a = scalar_semigroup(&k, mu, &g).unwrap();
    let b = volterra_oracle(&k, mu, FamilyKind::Semigroup, &g).unwrap();
    for i in 0..=g.steps {
        assert!((a.scalar(i) - b.scalar(i)).norm() < 1e-6);
    }
}

#[test]
fn diagonal_family_satisfies_identity() {
    let op = SpectralOperator::real_eigenvalues(&[-1.0, -4.0]).unwrap();
    let k = Kernel::k_half();
    let g = Grid::new(1.0, 200).unwrap();
    let traj = convolab::evolution::apply_family(&op, &k, FamilyKind::Cosine, &g, &[r(1.0), r(1.0)]).unwrap();
    assert!(identity_residual(&traj, &op, &k).unwrap() < 1e-6);
}

#[test]
fn grid_validation() {
    assert!(Grid::new(0.0, 100).is_err());
    assert!(Grid::new(1.0, 0).is_err());
}
