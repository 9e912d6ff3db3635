use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use convolab::classifier::classify;
use convolab::evolution::{
    apply_family, block_semigroup, composition_residual, identity_residual, identity_residuals,
    laplace_criterion_residual, scalar_cosine, scalar_semigroup, veza_residual, volterra_oracle,
    weierstrass_semigroup, FamilyKind, Grid, QuadratureMeta,
};
use convolab::kernel::{Kernel, KernelSpec};
use convolab::quad::Tolerance;
use convolab::spectral::SpectralOperator;
use num_complex::Complex64 as C;
use serde::Serialize;

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::error::CliError;

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn build_kernel(spec: &KernelSpec, tolerance: f64) -> Result<Kernel, CliError> {
    let k = Kernel::from_spec(spec).map_err(CliError::from_kernel)?;
    Ok(k.with_tolerance(Tolerance::new(tolerance * 1e-2, tolerance)))
}

pub fn build_operator(cfg: &RunConfig) -> Result<SpectralOperator, CliError> {
    Ok(SpectralOperator::from_spec(cfg.operator_spec()?)?)
}

fn kernel_method(spec: &KernelSpec) -> &'static str {
    match spec {
        KernelSpec::Riesz { .. } | KernelSpec::KHalf => "closed-form",
        KernelSpec::Gevrey { .. } => "bromwich-contour",
        KernelSpec::RationalSpectrumZero { .. } => "residue-inversion",
        KernelSpec::Tabulated { .. } => "table-interpolation",
        KernelSpec::Convolution { .. } => "adaptive-convolution",
        KernelSpec::Antiderivative { .. } => "antiderivative-of-base",
        KernelSpec::Weierstrass { .. } => "gauss-weierstrass-quadrature",
    }
}

/// Shortest round-trip form, switching to exponent notation outside `[1e-4, 1e15)`.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn grid(cfg: &RunConfig) -> Result<Grid, CliError> {
    Ok(Grid::new(cfg.t_max, cfg.steps)?.with_tolerance(cfg.tolerance))
}

/// `kernel.csv` with `t, K, Θ` and `kernel_laplace.csv` with `λ, K̃(λ)`.
pub fn cmd_kernel(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let spec = cfg.kernel_spec()?;
    let k = build_kernel(spec, cfg.tolerance)?;
    let cmp = cfg
        .file
        .compare_kernel
        .as_ref()
        .map(|s| build_kernel(s, cfg.tolerance))
        .transpose()?;
    let ts: Vec<f64> = (1..=cfg.steps).map(|i| cfg.t_max * i as f64 / cfg.steps as f64).collect();
    let eval = |k: &Kernel| -> Result<(Vec<C>, Vec<C>), CliError> {
        Ok((
            k.integral_many(0, &ts).map_err(CliError::from_kernel)?,
            k.integral_many(1, &ts).map_err(CliError::from_kernel)?,
        ))
    };
    let (kv, th) = eval(&k)?;
    let other = cmp.as_ref().map(eval).transpose()?;

    let sigma0 = cfg.file.lambda.re_min.unwrap_or(k.abscissa().max(0.0) + 0.5);
    let n_l = cfg.file.lambda.n.unwrap_or(64).max(2);
    let sigma1 = cfg.file.lambda.re_max.unwrap_or(sigma0 + 0.5 * (n_l - 1) as f64);
    if !(sigma1 > sigma0) {
        return Err(CliError::Config(format!("λ grid [{sigma0}, {sigma1}] is empty")));
    }
    let lambdas: Vec<f64> = (0..n_l)
        .map(|j| sigma0 + (sigma1 - sigma0) * j as f64 / (n_l - 1) as f64)
        .collect();
    let transform = |k: &Kernel| -> Result<Vec<C>, CliError> {
        lambdas
            .iter()
            .map(|&l| k.laplace(C::new(l, 0.0)).map_err(CliError::from_kernel))
            .collect()
    };
    let lt = transform(&k)?;
    let lt_cmp = cmp.as_ref().map(transform).transpose()?;

    let tol = k.tolerance();
    let mut header = String::new();
    writeln!(header, "# schema_version: {SCHEMA_VERSION}").unwrap();
    writeln!(header, "# kernel: {}", k.label()).unwrap();
    writeln!(
        header,
        "# quadrature: method={}, abs_tol={:e}, rel_tol={:e}",
        kernel_method(spec),
        tol.abs,
        tol.rel
    )
    .unwrap();
    if let Some(c) = &cmp {
        writeln!(header, "# compare: {} (method={})", c.label(), kernel_method(c.spec())).unwrap();
    }

    let mut time_csv = header.clone();
    writeln!(time_csv, "# t grid: {} uniform points in (0, {}]", cfg.steps, cfg.t_max).unwrap();
    time_csv.push_str("t,K_re,K_im,Theta_re,Theta_im");
    if other.is_some() {
        time_csv.push_str(",K_cmp_re,K_cmp_im,K_diff,Theta_diff");
    }
    time_csv.push('\n');
    for i in 0..ts.len() {
        write!(
            time_csv,
            "{},{},{},{},{}",
            num(ts[i]),
            num(kv[i].re),
            num(kv[i].im),
            num(th[i].re),
            num(th[i].im)
        ).unwrap();
        if let Some((ko, tho)) = &other {
            write!(
                time_csv,
                ",{},{},{},{}",
                num(ko[i].re),
                num(ko[i].im),
                num((kv[i] - ko[i]).norm()),
                num((th[i] - tho[i]).norm())
            )
            .unwrap();
        }
        time_csv.push('\n');
    }

    let mut lap_csv = header;
    writeln!(lap_csv, "# lambda grid: {n_l} real points in [{sigma0}, {sigma1}]").unwrap();
    lap_csv.push_str("lambda,Kt_re,Kt_im");
    if lt_cmp.is_some() {
        lap_csv.push_str(",Kt_cmp_re,Kt_cmp_im,Kt_diff");
    }
    lap_csv.push('\n');
    for j in 0..lambdas.len() {
        write!(lap_csv, "{},{},{}", num(lambdas[j]), num(lt[j].re), num(lt[j].im)).unwrap();
        if let Some(o) = &lt_cmp {
            write!(lap_csv, ",{},{},{}", num(o[j].re), num(o[j].im), num((lt[j] - o[j]).norm())).unwrap();
        }
        lap_csv.push('\n');
    }

    let p1 = cfg.out.join("kernel.csv");
    let p2 = cfg.out.join("kernel_laplace.csv");
    fs::write(&p1, time_csv)?;
    fs::write(&p2, lap_csv)?;
    Ok(vec![p1, p2])
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let op = build_operator(cfg)?;
    let report = classify(&op, &cfg.file.classes);
    let path = cfg.out.join("classification.json");
    write_json(&path, &report)?;
    Ok(vec![path])
}

/// Trajectory of `C_K(t)x` or `S_K(t)x` with identity residuals per point.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let op = build_operator(cfg)?;
    let k = build_kernel(cfg.kernel_spec()?, cfg.tolerance)?;
    let kind = cfg.file.family.unwrap_or(FamilyKind::Cosine);
    let x = cfg
        .file
        .initial
        .clone()
        .unwrap_or_else(|| vec![C::new(1.0, 0.0); op.len()]);
    if x.len() != op.len() {
        return Err(CliError::Config(format!(
            "initial vector has {} entries, operator has {}",
            x.len(),
            op.len()
        )));
    }
    let traj = apply_family(&op, &k, kind, &grid(cfg)?, &x)?;
    let residuals = identity_residuals(&traj, &op, &k)?;
    let csv = cfg.out.join("trajectory.csv");
    let json = cfg.out.join("trajectory.json");
    traj.write_csv(&csv, Some(&residuals))?;
    let mut f = fs::File::create(&json)?;
    traj.write_json(&mut f)?;
    Ok(vec![csv, json])
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub kernel: String,
    pub parameters: serde_json::Value,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureMeta>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub operator_id: String,
    pub grid: Grid,
    pub corrupted_kernel: bool,
    pub checks: Vec<CheckRecord>,
    pub failures: usize,
}

fn record(
    check: &str,
    kernel: &Kernel,
    parameters: serde_json::Value,
    residual: f64,
    threshold: f64,
    quadrature: Option<QuadratureMeta>,
) -> CheckRecord {
    CheckRecord {
        check: check.into(),
        kernel: kernel.label(),
        parameters,
        residual,
        threshold,
        pass: residual <= threshold,
        quadrature,
    }
}

fn meta(method: &str, grid: &Grid) -> QuadratureMeta {
    QuadratureMeta {
        step: grid.h,
        tolerance: grid.tolerance,
        method: method.into(),
        error_estimate: f64::NAN,
    }
}

fn verify_operator(cfg: &RunConfig) -> Result<SpectralOperator, CliError> {
    match &cfg.file.operator {
        Some(_) => build_operator(cfg),
        None => Ok(SpectralOperator::real_eigenvalues(&[-1.0, -4.0, -9.0])?),
    }
}

pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let v = &cfg.file.verify;
    let th = &v.thresholds;
    let op = verify_operator(cfg)?;
    let g = grid(cfg)?;
    let ones = vec![C::new(1.0, 0.0); op.len()];
    let mut checks = Vec::new();
    let kernels: Vec<Kernel> = v
        .kernels
        .iter()
        .map(|s| build_kernel(s, cfg.tolerance))
        .collect::<Result<_, _>>()?;
    let pairs: Vec<Kernel> = v
        .pair_kernels
        .iter()
        .map(|s| build_kernel(s, cfg.tolerance))
        .collect::<Result<_, _>>()?;

    for k in &kernels {
        // the corrupted run generates trajectories from Θ in place of K
        let source = if cfg.corrupt_kernel {
            Kernel::antiderivative(k, 1)
        } else {
            k.clone()
        };
        for kind in [FamilyKind::Cosine, FamilyKind::Semigroup] {
            let traj = apply_family(&op, &source, kind, &g, &ones)?;
            let r = identity_residual(&traj, &op, k)?;
            checks.push(record(
                "identity",
                k,
                serde_json::json!({ "family": kind }),
                r,
                th.identity,
                Some(traj.quadrature_meta.clone()),
            ));
        }
        for &mu in &v.mus {
            for kind in [FamilyKind::Cosine, FamilyKind::Semigroup] {
                let s = match kind {
                    FamilyKind::Cosine => scalar_cosine(k, mu, &g)?,
                    FamilyKind::Semigroup => scalar_semigroup(k, mu, &g)?,
                };
                let o = volterra_oracle(k, mu, kind, &g)?;
                let d = (0..=g.steps)
                    .map(|i| (s.scalar(i) - o.scalar(i)).norm())
                    .fold(0.0, f64::max);
                checks.push(record(
                    "oracle",
                    k,
                    serde_json::json!({ "mu": [mu.re, mu.im], "family": kind }),
                    d,
                    th.oracle,
                    Some(s.quadrature_meta.clone()),
                ));
            }
            let r = veza_residual(k, mu, &g)?;
            checks.push(record(
                "veza",
                k,
                serde_json::json!({ "mu": [mu.re, mu.im] }),
                r,
                th.veza,
                Some(meta("product-integration", &g)),
            ));
        }
    }

    for k in &pairs {
        for t in [0.25, 0.5] {
            for s in [0.25, 0.5] {
                let r = composition_residual(&op, k, &g, t, s)?;
                checks.push(record(
                    "composition",
                    k,
                    serde_json::json!({ "t": t, "s": s }),
                    r,
                    th.composition,
                    Some(meta("windowed-product-weights+richardson", &g)),
                ));
            }
        }
        let b = block_semigroup(&op, k, &g)?;
        for (name, r) in [
            ("block-integral", b.integral_residual),
            ("block-diagonal", b.diagonal_residual),
            ("block-identity", b.identity_residual),
        ] {
            checks.push(record(
                name,
                k,
                serde_json::Value::Null,
                r,
                th.block,
                Some(b.s1.quadrature_meta.clone()),
            ));
        }
        let long = Grid::new(20.0, 4000)?.with_tolerance(cfg.tolerance);
        let traj = apply_family(&op, k, FamilyKind::Cosine, &long, &ones)?;
        let lambda = C::new(2.0, 0.0);
        let r = laplace_criterion_residual(&op, k, &traj, lambda)?;
        checks.push(record(
            "laplace-criterion",
            k,
            serde_json::json!({ "lambda": [lambda.re, lambda.im], "t_max": long.t_max() }),
            r,
            th.laplace,
            Some(traj.quadrature_meta.clone()),
        ));
    }

    for spec in &v.weierstrass_kernels {
        let k = build_kernel(spec, cfg.tolerance)?;
        let cos_grid = Grid::new(24.0, 4800)?;
        let out_grid = Grid::new(2.0, 400)?.with_tolerance(1e-7);
        let cos = apply_family(&op, &k, FamilyKind::Cosine, &cos_grid, &ones)?;
        let w = weierstrass_semigroup(&cos, &op, &k, &out_grid)?;
        checks.push(record(
            "weierstrass",
            &k,
            serde_json::json!({ "t_max": out_grid.t_max(), "small_time_sup": w.small_time_sup }),
            w.residual,
            th.weierstrass,
            Some(w.trajectory.quadrature_meta.clone()),
        ));
    }

    let failures = checks.iter().filter(|c| !c.pass).count();
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        operator_id: op.id().to_string(),
        grid: g,
        corrupted_kernel: cfg.corrupt_kernel,
        checks,
        failures,
    })
}

/// Writes `verify.json`; any check above its threshold is a verification failure.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let report = run_verify(cfg)?;
    let path = cfg.out.join("verify.json");
    write_json(&path, &report)?;
    if report.failures > 0 {
        let worst = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}[{}] = {:e}", c.check, c.kernel, c.residual))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(CliError::Verification(format!(
            "{} check(s) above threshold: {worst} (report at {})",
            report.failures,
            path.display()
        )));
    }
    Ok(vec![path])
}
