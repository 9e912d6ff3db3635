use std::fs;
use std::path::{Path, PathBuf};

use convolab::classifier::ClassRequest;
use convolab::evolution::FamilyKind;
use convolab::kernel::{de_complex_list, KernelSpec};
use convolab::spectral::OperatorSpec;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

const DEFAULT_T_MAX: f64 = 1.0;
const DEFAULT_STEPS: usize = 200;
const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub tolerance: Option<f64>,
}

/// Real `λ` samples `re_min + j·(re_max − re_min)/(n − 1)` for the transform table.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaGrid {
    pub re_min: Option<f64>,
    pub re_max: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Example {
    Polyharmonic,
    Beals,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "t_identity")]
    pub identity: f64,
    #[serde(default = "t_identity")]
    pub oracle: f64,
    #[serde(default = "t_identity")]
    pub veza: f64,
    #[serde(default = "t_identity")]
    pub composition: f64,
    #[serde(default = "t_identity")]
    pub block: f64,
    #[serde(default = "t_weak")]
    pub laplace: f64,
    #[serde(default = "t_weak")]
    pub weierstrass: f64,
}

fn t_identity() -> f64 {
    1e-6
}

fn t_weak() -> f64 {
    1e-5
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            identity: t_identity(),
            oracle: t_identity(),
            veza: t_identity(),
            composition: t_identity(),
            block: t_identity(),
            laplace: t_weak(),
            weierstrass: t_weak(),
        }
    }
}

/// The identity suite run by `verify`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "matrix_kernels")]
    pub kernels: Vec<KernelSpec>,
    #[serde(default = "matrix_mus", deserialize_with = "de_complex_list")]
    pub mus: Vec<C>,
    /// Kernels for the composition, block and Laplace checks.
    #[serde(default = "pair_kernels")]
    pub pair_kernels: Vec<KernelSpec>,
    #[serde(default = "weierstrass_kernels")]
    pub weierstrass_kernels: Vec<KernelSpec>,
    #[serde(default)]
    pub thresholds: Thresholds,
}

fn matrix_kernels() -> Vec<KernelSpec> {
    vec![
        KernelSpec::Riesz { alpha: 1.0 },
        KernelSpec::Riesz { alpha: 2.5 },
        KernelSpec::KHalf,
        KernelSpec::Gevrey { delta: 2.0 / 3.0 },
    ]
}

fn matrix_mus() -> Vec<C> {
    vec![
        C::new(0.0, 0.0),
        C::new(1.0, 0.0),
        C::new(-1.0, 0.0),
        C::new(0.0, 4.0),
        C::new(-9.0, 0.0),
    ]
}

fn pair_kernels() -> Vec<KernelSpec> {
    vec![KernelSpec::Riesz { alpha: 1.0 }, KernelSpec::KHalf]
}

fn weierstrass_kernels() -> Vec<KernelSpec> {
    vec![KernelSpec::Riesz { alpha: 1.0 }]
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            kernels: matrix_kernels(),
            mus: matrix_mus(),
            pair_kernels: pair_kernels(),
            weierstrass_kernels: weierstrass_kernels(),
            thresholds: Thresholds::default(),
        }
    }
}

/// Contents of the `--config` file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema_version: Option<u32>,
    pub kernel: Option<KernelSpec>,
    /// Second kernel evaluated by `kernel`, adding difference columns.
    pub compare_kernel: Option<KernelSpec>,
    pub operator: Option<OperatorSpec>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub lambda: LambdaGrid,
    #[serde(default)]
    pub classes: Vec<ClassRequest>,
    pub family: Option<FamilyKind>,
    #[serde(default, deserialize_with = "de_opt_complex_list")]
    pub initial: Option<Vec<C>>,
    #[serde(default)]
    pub verify: VerifyConfig,
    pub example: Option<Example>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub corrupt_kernel: bool,
    /// Largest `n` in the polyharmonic reproduction.
    pub n_max: Option<usize>,
}

fn de_opt_complex_list<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Vec<C>>, D::Error> {
    de_complex_list(d).map(Some)
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub steps: Option<usize>,
    pub t_max: Option<f64>,
    pub corrupt_kernel: bool,
    pub example: Option<Example>,
}

/// Merged configuration: flags over file over defaults.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub file: FileConfig,
    pub t_max: f64,
    pub steps: usize,
    pub tolerance: f64,
    pub out: PathBuf,
    pub corrupt_kernel: bool,
    pub example: Option<Example>,
}

impl RunConfig {
    pub fn load(path: &Path, over: Overrides) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let file: FileConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::resolve(file, over)
    }

    pub fn resolve(file: FileConfig, over: Overrides) -> Result<Self, CliError> {
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(CliError::Config(format!(
                    "schema_version {v} is not supported (expected {SCHEMA_VERSION})"
                )));
            }
        }
        let cfg = RunConfig {
            t_max: over.t_max.or(file.grid.t_max).unwrap_or(DEFAULT_T_MAX),
            steps: over.steps.or(file.grid.steps).unwrap_or(DEFAULT_STEPS),
            tolerance: over.tolerance.or(file.grid.tolerance).unwrap_or(DEFAULT_TOLERANCE),
            out: over
                .out
                .or_else(|| file.out.clone())
                .unwrap_or_else(|| PathBuf::from("convolab-out")),
            corrupt_kernel: over.corrupt_kernel || file.corrupt_kernel,
            example: over.example.or(file.example),
            file,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.steps < 16 {
            return Err(CliError::Config(format!("steps = {} is below 16", self.steps)));
        }
        if !(1e-12..=1e-3).contains(&self.tolerance) {
            return Err(CliError::Config(format!(
                "tolerance {:e} outside [1e-12, 1e-3]",
                self.tolerance
            )));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(CliError::Config(format!("t_max = {} must be positive", self.t_max)));
        }
        Ok(())
    }

    /// Creates the output directory and confirms it accepts files.
    pub fn prepare_out(&self) -> Result<(), CliError> {
        let probe = self.out.join(".convolab-write-probe");
        fs::create_dir_all(&self.out)
            .and_then(|_| fs::write(&probe, b""))
            .and_then(|_| fs::remove_file(&probe))
            .map_err(|e| CliError::Config(format!("output directory {} is not writable: {e}", self.out.display())))
    }

    pub fn kernel_spec(&self) -> Result<&KernelSpec, CliError> {
        self.file
            .kernel
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no \"kernel\"".into()))
    }

    pub fn operator_spec(&self) -> Result<&OperatorSpec, CliError> {
        self.file
            .operator
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no \"operator\"".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> FileConfig {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn precedence() {
        let file = parse(r#"{"grid": {"steps": 64, "tolerance": 1e-6}, "out": "a"}"#);
        let cfg = RunConfig::resolve(
            file.clone(),
            Overrides {
                steps: Some(32),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((cfg.steps, cfg.tolerance, cfg.t_max), (32, 1e-6, DEFAULT_T_MAX));
        assert_eq!(cfg.out, PathBuf::from("a"));
        let cfg = RunConfig::resolve(file, Overrides::default()).unwrap();
        assert_eq!(cfg.steps, 64);
    }

    #[test]
    fn invariants() {
        let bad = [
            r#"{"grid": {"steps": 8}}"#,
            r#"{"grid": {"tolerance": 1e-2}}"#,
            r#"{"grid": {"tolerance": 1e-14}}"#,
            r#"{"schema_version": 7}"#,
        ];
        for s in bad {
            assert!(RunConfig::resolve(parse(s), Overrides::default()).is_err(), "{s}");
        }
        assert!(serde_json::from_str::<FileConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn full_config_parses() {
        let cfg = parse(
            r#"{
                "kernel": {"kind": "riesz", "params": {"alpha": 1.0}},
                "operator": {"eigenvalues": [-1, [0, 2]]},
                "classes": [
                    {"class": "hyperfunction-sine"},
                    {"class": "ultradistribution-sine", "seq": {"kind": "gevrey-factorial", "s": 1.5}, "mode": "roumieu"}
                ],
                "family": "semigroup",
                "initial": [1, [0, 1]],
                "verify": {"mus": [0, [0, 4]]},
                "example": "beals"
            }"#,
        );
        assert_eq!(cfg.classes.len(), 2);
        assert_eq!(cfg.initial.unwrap()[1], C::new(0.0, 1.0));
        assert_eq!(cfg.verify.mus.len(), 2);
        assert_eq!(cfg.verify.kernels.len(), 4);
    }
}
