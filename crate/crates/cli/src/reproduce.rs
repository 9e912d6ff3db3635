use std::f64::consts::PI;
use std::path::PathBuf;

use convolab::classifier::{classify, ClassRequest, ClassVerdict, ClassificationReport, Mode};
use convolab::error::EvolutionError;
use convolab::evolution::{
    contour_cosine, contour_time_bound, scalar_cosine, volterra_oracle, FamilyKind, Grid,
};
use convolab::kernel::{blaschke_summability, BlaschkeReport, ExpBound, Kernel};
use convolab::spectral::{NamedSymbol, SpectralOperator};
use convolab::weights::SequenceSpec;
use num_complex::Complex64 as C;
use serde::Serialize;

use crate::commands::write_json;
use crate::config::{Example, RunConfig, SCHEMA_VERSION};
use crate::error::CliError;

const BLASCHKE_TERMS: usize = 20_000;

#[derive(Debug, Serialize)]
pub struct BoundedRow {
    pub n: usize,
    pub mu: f64,
    pub sup_t_le_1: f64,
}

#[derive(Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub mu: f64,
    pub value_at_1: f64,
    /// `e^{n²/2}/2`
    pub threshold: f64,
    pub exceeds: bool,
}

#[derive(Debug, Serialize)]
pub struct CascadeStage {
    pub stage: usize,
    pub kernel: String,
    pub exp_bound: Option<ExpBound>,
    /// `max |K̃_{n+1}(λ) − K̃_n(√λ)/√λ|` over the check points (0 for the seed).
    pub transform_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct BlaschkePair {
    pub squares: BlaschkeReport,
    pub linear: BlaschkeReport,
    /// `π coth π − 1`
    pub expected_limit: f64,
    pub limit_error: f64,
}

#[derive(Debug, Serialize)]
pub struct PolyharmonicReport {
    pub schema_version: u32,
    pub example: Example,
    pub n_max: usize,
    pub kernel: String,
    pub zero_free_kernel: String,
    pub with_zeros: Vec<BoundedRow>,
    pub sup_with_zeros: f64,
    pub without_zeros: Vec<GrowthRow>,
    pub blaschke: BlaschkePair,
    pub cascade: Vec<CascadeStage>,
    pub note: String,
}

fn sup_abs(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn polyharmonic(n_max: usize, tolerance: f64) -> Result<PolyharmonicReport, CliError> {
    let zeros: Vec<C> = (1..=n_max).map(|n| C::new((n * n) as f64, 0.0)).collect();
    let k = Kernel::spectrum_zero(&zeros, 2).map_err(CliError::from_kernel)?;
    let k0 = Kernel::spectrum_zero(&[], 2).map_err(CliError::from_kernel)?;
    let g = Grid::new(1.0, 200)?.with_tolerance(tolerance);
    let mut with_zeros = Vec::new();
    let mut without_zeros = Vec::new();
    for n in 1..=n_max {
        let mu = ((n * n) as f64).powi(2);
        let c = scalar_cosine(&k, C::new(mu, 0.0), &g)?;
        with_zeros.push(BoundedRow {
            n,
            mu,
            sup_t_le_1: sup_abs(&c.column(0)),
        });
        let c0 = scalar_cosine(&k0, C::new(mu, 0.0), &g)?;
        let value_at_1 = c0.scalar(g.steps).norm();
        let threshold = ((n * n) as f64 / 2.0).exp() / 2.0;
        without_zeros.push(GrowthRow {
            n,
            mu,
            value_at_1,
            threshold,
            exceeds: value_at_1 > threshold,
        });
    }
    let sup_with_zeros = with_zeros.iter().map(|r| r.sup_t_le_1).fold(0.0, f64::max);

    let squares = blaschke_summability(|n| (n * n) as f64, BLASCHKE_TERMS);
    let linear = blaschke_summability(|n| n as f64, BLASCHKE_TERMS);
    let expected_limit = PI / PI.tanh() - 1.0;
    let limit_error = (squares.estimate - expected_limit).abs();

    // K → K₁ = W(K) → K₂ = W(∫K₁): each stage Gaussian-averages the
    // antiderivative of the previous one
    let s1 = Kernel::weierstrass(&k).map_err(CliError::from_kernel)?;
    let s2 = Kernel::weierstrass(&Kernel::antiderivative(&s1, 1)).map_err(CliError::from_kernel)?;
    let probes = [C::new(4.0, 0.0), C::new(9.0, 1.0), C::new(25.0, 0.0)];
    let residual = |next: &Kernel, prev: &Kernel, integrate: bool| -> Result<f64, CliError> {
        let mut r: f64 = 0.0;
        for &l in &probes {
            let root = l.sqrt();
            let mut expect = prev.laplace(root).map_err(CliError::from_kernel)?;
            if integrate {
                expect /= root;
            }
            let got = next.laplace(l).map_err(CliError::from_kernel)?;
            r = r.max((got - expect).norm());
        }
        Ok(r)
    };
    let cascade = vec![
        CascadeStage {
            stage: 0,
            kernel: k.label(),
            exp_bound: k.exp_bound(),
            transform_residual: 0.0,
        },
        CascadeStage {
            stage: 1,
            kernel: s1.label(),
            exp_bound: s1.exp_bound(),
            transform_residual: residual(&s1, &k, false)?,
        },
        CascadeStage {
            stage: 2,
            kernel: s2.label(),
            exp_bound: s2.exp_bound(),
            transform_residual: residual(&s2, &s1, true)?,
        },
    ];

    Ok(PolyharmonicReport {
        schema_version: SCHEMA_VERSION,
        example: Example::Polyharmonic,
        n_max,
        kernel: k.label(),
        zero_free_kernel: k0.label(),
        with_zeros,
        sup_with_zeros,
        without_zeros,
        blaschke: BlaschkePair {
            squares,
            linear,
            expected_limit,
            limit_error,
        },
        cascade,
        note: "every stage passes through the Gaussian transform, which only yields an analytic \
               semigroup for a smoother kernel: K̃ is evaluated at √λ, so the exponential type \
               grows from β to β² + 1 and regularity of the generated family is lost at each step"
            .into(),
    })
}

#[derive(Debug, Serialize)]
pub struct ContourRow {
    pub x: f64,
    pub mu: C,
    pub contour: C,
    pub oracle: C,
    pub difference: f64,
}

#[derive(Debug, Serialize)]
pub struct ExpectedVerdict {
    pub class: String,
    pub expected: String,
    pub observed: String,
    pub matches: bool,
}

#[derive(Debug, Serialize)]
pub struct BealsReport {
    pub schema_version: u32,
    pub example: Example,
    pub delta: f64,
    pub sequence: String,
    pub tau_target: f64,
    pub alpha: f64,
    pub beta: f64,
    pub time_bound: f64,
    pub t: f64,
    pub contour: Vec<ContourRow>,
    pub max_difference: f64,
    pub expected: Vec<ExpectedVerdict>,
    pub all_match: bool,
    pub classification: ClassificationReport,
}

fn status(v: &ClassVerdict) -> &'static str {
    match v {
        ClassVerdict::Pass { .. } => "pass",
        ClassVerdict::Fail { .. } => "fail",
        ClassVerdict::Inconclusive { .. } => "inconclusive",
    }
}

pub fn beals_requests() -> Vec<(ClassRequest, &'static str)> {
    let ultra = |s: f64, mode: Mode| ClassRequest::UltradistributionSine {
        seq: SequenceSpec::GevreyFactorial { s },
        mode,
        k_grid: convolab::classifier::default_k_grid(),
    };
    vec![
        (ultra(1.5, Mode::Beurling), "pass"),
        (ultra(1.5, Mode::Roumieu), "pass"),
        (ultra(2.0, Mode::Roumieu), "fail"),
        (ultra(2.0, Mode::Beurling), "pass"),
        (
            ClassRequest::IntegratedCosine {
                alpha_grid: convolab::classifier::default_alpha_grid(),
                n_max: 4,
            },
            "fail",
        ),
    ]
}

pub fn beals(tolerance: f64) -> Result<BealsReport, CliError> {
    let s = 1.5;
    let delta = 1.0 / s;
    let spec = SequenceSpec::GevreyFactorial { s };
    let seq = spec.build()?;
    let tau_target = 1.0;
    // the largest α allowed by τ ≤ cos(δπ/2)/(C_s α^{1/s})
    let cs = seq
        .gevrey_upper_constant()
        .ok_or_else(|| CliError::Config("sequence has no Gevrey constant".into()))?;
    let alpha = ((delta * PI / 2.0).cos() / (cs * tau_target)).powf(s);
    let time_bound = contour_time_bound(&seq, delta, alpha)?;
    let t = 0.5 * time_bound;
    let xs = [0.25, 0.5, 1.0];
    let op = SpectralOperator::symbol(NamedSymbol::BealsSquared, 200.0, 4096)?;

    let mut beta = 1.0;
    let res = loop {
        match contour_cosine(&op, delta, &spec, alpha, beta, t, &xs) {
            Ok(r) => break r,
            Err(EvolutionError::ContourThroughSpectrum(_)) if beta < 1e4 => beta *= 2.0,
            Err(e) => return Err(e.into()),
        }
    };
    let k = Kernel::gevrey(delta).map_err(CliError::from_kernel)?;
    let g = Grid::new(t, 500)?.with_tolerance(tolerance);
    let mut contour = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let mu = op
            .symbol_value(x)
            .ok_or_else(|| CliError::Numeric(format!("symbol not available at x = {x}")))?;
        let o = volterra_oracle(&k, mu, FamilyKind::Cosine, &g)?.scalar(g.steps);
        contour.push(ContourRow {
            x,
            mu,
            contour: res.values[i],
            oracle: o,
            difference: (res.values[i] - o).norm(),
        });
    }
    let max_difference = contour.iter().map(|r| r.difference).fold(0.0, f64::max);

    let class_op = SpectralOperator::symbol_for_radius(NamedSymbol::BealsSquared, &[], 1e8, 4096)?;
    let reqs = beals_requests();
    let requests: Vec<ClassRequest> = reqs.iter().map(|(r, _)| r.clone()).collect();
    let classification = classify(&class_op, &requests);
    let expected: Vec<ExpectedVerdict> = reqs
        .iter()
        .map(|(r, e)| {
            let observed = status(&classification.verdicts[&r.name()]).to_string();
            ExpectedVerdict {
                class: r.name(),
                expected: e.to_string(),
                matches: observed == *e,
                observed,
            }
        })
        .collect();
    let all_match = expected.iter().all(|e| e.matches);

    Ok(BealsReport {
        schema_version: SCHEMA_VERSION,
        example: Example::Beals,
        delta,
        sequence: spec.label(),
        tau_target,
        alpha,
        beta,
        time_bound,
        t,
        contour,
        max_difference,
        expected,
        all_match,
        classification,
    })
}

pub fn cmd_reproduce(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let example = cfg
        .example
        .ok_or_else(|| CliError::Config("reproduce needs \"example\": \"polyharmonic\" or \"beals\"".into()))?;
    let path = match example {
        Example::Polyharmonic => {
            let n_max = cfg.file.n_max.unwrap_or(8);
            if n_max == 0 {
                return Err(CliError::Config("n_max must be positive".into()));
            }
            let report = polyharmonic(n_max, cfg.tolerance)?;
            let path = cfg.out.join("reproduce_polyharmonic.json");
            write_json(&path, &report)?;
            path
        }
        Example::Beals => {
            let report = beals(cfg.tolerance)?;
            let path = cfg.out.join("reproduce_beals.json");
            write_json(&path, &report)?;
            path
        }
    };
    Ok(vec![path])
}
