//! Convoluted cosine functions and semigroups on diagonal models, their
//! independent Volterra oracle, and residual checks for the identities they
//! satisfy.
//!
//! Per spectrum point `μ` the families are
//! `c_K(t;μ) = ∫₀ᵗ K(t−s) cosh(√μ s) ds` and `s_K(t;μ) = ∫₀ᵗ K(t−s) e^{μs} ds`.
//! Both are computed by product integration: the smooth factor is linear on
//! each cell and `K` is integrated against it exactly through `Θ` and `Θ₂`,
//! which absorbs weak singularities at 0. Two step sizes are combined by
//! Richardson extrapolation. Kernels with rational transforms skip all of this
//! and are inverted by residues.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use crate::error::{EvolutionError, SpectralError};
use crate::kernel::Kernel;
use crate::quad::{self, Tolerance};
use crate::rational::Rational;
use crate::region::{Region, RegionKind};
use crate::spectral::SpectralOperator;
use crate::weights::{SequenceSpec, WeightSequence};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const SATURATION: f64 = 700.0;

/// Uniform time grid `t_i = i·h`, `i = 0..=steps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub h: f64,
    pub steps: usize,
    pub tolerance: f64,
}

impl Grid {
    pub fn new(t_max: f64, steps: usize) -> Result<Self, EvolutionError> {
        if !(t_max > 0.0 && t_max.is_finite()) || steps < 2 {
            return Err(EvolutionError::InvalidGrid(format!(
                "need t_max > 0 and at least 2 steps (got {t_max}, {steps})"
            )));
        }
        Ok(Grid {
            h: t_max / steps as f64,
            steps,
            tolerance: 1e-8,
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn t_max(&self) -> f64 {
        self.h * self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| i as f64 * self.h).collect()
    }

    fn refined(&self) -> Grid {
        Grid {
            h: 0.5 * self.h,
            steps: 2 * self.steps,
            tolerance: self.tolerance,
        }
    }

    /// Index of the node at time `t`, if `t` is (up to rounding) a node.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let x = t / self.h;
        let i = x.round();
        ((x - i).abs() < 1e-9 && i >= 0.0 && i as usize <= self.steps).then_some(i as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Cosine,
    Semigroup,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureMeta {
    pub step: f64,
    pub tolerance: f64,
    pub method: String,
    /// Estimated error of the returned values (0 for exact routes).
    pub error_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub time_grid: Vec<f64>,
    /// `values[i][j]`: time `i`, spectrum point `j`.
    pub values: Vec<Vec<C>>,
    pub kernel_id: String,
    pub operator_id: String,
    pub kind: FamilyKind,
    pub quadrature_meta: QuadratureMeta,
}

impl Trajectory {
    pub fn points(&self) -> usize {
        self.values.first().map(|v| v.len()).unwrap_or(0)
    }

    pub fn step(&self) -> f64 {
        self.time_grid[1] - self.time_grid[0]
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        self.values.iter().map(|row| row[j]).collect()
    }

    /// Scalar value at time index `i` for a one-point trajectory.
    pub fn scalar(&self, i: usize) -> C {
        self.values[i][0]
    }

    /// Four-point Lagrange interpolation of point `j` at time `t`.
    pub fn interpolate(&self, j: usize, t: f64) -> C {
        let h = self.step();
        let n = self.time_grid.len();
        let x = t / h;
        let i0 = (x.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let mut out = ZERO;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (x - (i0 + b) as f64) / (a as f64 - b as f64);
                }
            }
            out += self.values[i0 + a][j] * w;
        }
        out
    }

    /// CSV with columns `t, point_index, re, im, residual`.
    pub fn write_csv(&self, path: &Path, residuals: Option<&[Vec<f64>]>) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["t", "point_index", "re", "im", "residual"])?;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let r = residuals.map(|r| r[i][j]).unwrap_or(0.0);
                w.write_record([
                    self.time_grid[i].to_string(),
                    j.to_string(),
                    v.re.to_string(),
                    v.im.to_string(),
                    r.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(out, self)
    }
}

/// `Θ` and `Θ₂` at the nodes of a uniform grid.
#[derive(Clone, Debug)]
struct Moments {
    h: f64,
    theta: Vec<C>,
    theta2: Vec<C>,
}

impl Moments {
    fn compute(k: &Kernel, grid: &Grid) -> Result<Self, EvolutionError> {
        let ts = grid.times();
        Ok(Moments {
            h: grid.h,
            theta: k.integral_many(1, &ts)?,
            theta2: k.integral_many(2, &ts)?,
        })
    }

    fn coarsen(&self) -> Moments {
        Moments {
            h: 2.0 * self.h,
            theta: self.theta.iter().step_by(2).copied().collect(),
            theta2: self.theta2.iter().step_by(2).copied().collect(),
        }
    }

    /// Product-trapezoid weights: `∫_{u_j}^{u_{j+1}} K(u) g(u) du ≈ A_j g(u_j) + B_j g(u_{j+1})`.
    fn weights(&self) -> (Vec<C>, Vec<C>) {
        let n = self.theta.len() - 1;
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for j in 0..n {
            let aj = -self.theta[j] + (self.theta2[j + 1] - self.theta2[j]) / self.h;
            a.push(aj);
            b.push(self.theta[j + 1] - self.theta[j] - aj);
        }
        (a, b)
    }
}

/// `∫₀^{t_n} K(t_n − s) e^{ρ s} ds` at every node, via the geometric recursion
/// `S_{n+1} = q(S_n + D_n)` with `q = e^{ρh}`.
fn exp_convolution(a: &[C], b: &[C], rho: C, h: f64) -> Vec<C> {
    let q = (rho * h).exp();
    let qi = (-rho * h).exp();
    let mut out = Vec::with_capacity(a.len() + 1);
    let mut s = ZERO;
    out.push(s);
    for j in 0..a.len() {
        s = q * (s + a[j] + b[j] * qi);
        out.push(s);
    }
    out
}

fn product_family(w: &(Vec<C>, Vec<C>), h: f64, mu: C, kind: FamilyKind) -> Vec<C> {
    match kind {
        FamilyKind::Semigroup => exp_convolution(&w.0, &w.1, mu, h),
        FamilyKind::Cosine => {
            let nu = mu.sqrt();
            let p = exp_convolution(&w.0, &w.1, nu, h);
            let m = exp_convolution(&w.0, &w.1, -nu, h);
            p.iter().zip(&m).map(|(x, y)| 0.5 * (x + y)).collect()
        }
    }
}

fn growth_exponent(mu: C, kind: FamilyKind) -> f64 {
    match kind {
        FamilyKind::Cosine => mu.sqrt().re.abs(),
        FamilyKind::Semigroup => mu.re.abs(),
    }
}

fn family_transform(r: &Rational, mu: C, kind: FamilyKind) -> Rational {
    match kind {
        FamilyKind::Cosine => {
            let nu = mu.sqrt();
            r.mul(&Rational::new(C::new(1.0, 0.0), vec![ZERO], vec![nu, -nu]))
        }
        FamilyKind::Semigroup => r.mul(&Rational::new(C::new(1.0, 0.0), vec![], vec![mu])),
    }
}

/// Family values for several spectrum points sharing one kernel and grid.
struct FamilySolver<'a> {
    kernel: &'a Kernel,
    grid: Grid,
    product: Option<((Vec<C>, Vec<C>), (Vec<C>, Vec<C>))>,
}

impl<'a> FamilySolver<'a> {
    fn new(kernel: &'a Kernel, grid: Grid) -> Result<Self, EvolutionError> {
        let product = if kernel.rational_transform().is_some() {
            None
        } else {
            let fine = Moments::compute(kernel, &grid.refined())?;
            let coarse = fine.coarsen();
            Some((fine.weights(), coarse.weights()))
        };
        Ok(FamilySolver {
            kernel,
            grid,
            product,
        })
    }

    fn method(&self) -> &'static str {
        if self.product.is_some() {
            "product-trapezoid+richardson"
        } else {
            "rational-residues"
        }
    }

    /// Values at the grid nodes and the Richardson error estimate.
    fn solve(&self, mu: C, kind: FamilyKind) -> Result<(Vec<C>, f64), EvolutionError> {
        let exponent = growth_exponent(mu, kind) * self.grid.t_max();
        if exponent > SATURATION {
            return Err(EvolutionError::Saturation { exponent });
        }
        match &self.product {
            None => {
                let r = self.kernel.rational_transform().unwrap();
                let f = family_transform(r, mu, kind).invert();
                Ok((self.grid.times().iter().map(|&t| f.eval(t)).collect(), 0.0))
            }
            Some((fine_w, coarse_w)) => {
                let fine = product_family(fine_w, 0.5 * self.grid.h, mu, kind);
                let coarse = product_family(coarse_w, self.grid.h, mu, kind);
                let mut est: f64 = 0.0;
                let out = coarse
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let f = fine[2 * i];
                        est = est.max((f - c).norm() / 3.0);
                        (4.0 * f - c) / 3.0
                    })
                    .collect();
                Ok((out, est))
            }
        }
    }
}

fn scalar_family(k: &Kernel, mu: C, grid: &Grid, kind: FamilyKind) -> Result<Trajectory, EvolutionError> {
    let solver = FamilySolver::new(k, *grid)?;
    let (values, est) = solver.solve(mu, kind)?;
    Ok(Trajectory {
        time_grid: grid.times(),
        values: values.into_iter().map(|v| vec![v]).collect(),
        kernel_id: k.label(),
        operator_id: format!("scalar[{mu}]"),
        kind,
        quadrature_meta: QuadratureMeta {
            step: grid.h,
            tolerance: grid.tolerance,
            method: solver.method().into(),
            error_estimate: est,
        },
    })
}

/// `c_K(t;μ) = ∫₀ᵗ K(t−s) cosh(√μ s) ds` on the grid.
pub fn scalar_cosine(k: &Kernel, mu: C, grid: &Grid) -> Result<Trajectory, EvolutionError> {
    scalar_family(k, mu, grid, FamilyKind::Cosine)
}

/// `s_K(t;μ) = ∫₀ᵗ K(t−s) e^{μs} ds` on the grid.
pub fn scalar_semigroup(k: &Kernel, mu: C, grid: &Grid) -> Result<Trajectory, EvolutionError> {
    scalar_family(k, mu, grid, FamilyKind::Semigroup)
}

/// Trapezoidal solution of `c = Θ + μ∫₀ᵗ(t−s)c` (cosine) or `s = Θ + μ∫₀ᵗ s`
/// (semigroup) at the nodes of a grid, given `Θ` there. Second order in `h`.
pub fn volterra_solve(theta: &[C], h: f64, mu: C, kind: FamilyKind) -> Vec<C> {
    let n = theta.len();
    let mut c = vec![ZERO; n];
    if n == 0 {
        return c;
    }
    c[0] = theta[0];
    // q = ∫₀^{t_n} c, p = ∫₀^{t_n} (t_n − s) c(s) ds for piecewise-linear c
    let (mut q, mut p) = (ZERO, ZERO);
    for i in 1..n {
        match kind {
            FamilyKind::Cosine => {
                let rhs = theta[i] + mu * (p + h * q + h * h * c[i - 1] / 3.0);
                c[i] = rhs / (1.0 - mu * h * h / 6.0);
                p = p + h * q + h * h * (c[i - 1] / 3.0 + c[i] / 6.0);
            }
            FamilyKind::Semigroup => {
                let rhs = theta[i] + mu * (q + 0.5 * h * c[i - 1]);
                c[i] = rhs / (1.0 - 0.5 * mu * h);
            }
        }
        q += 0.5 * h * (c[i - 1] + c[i]);
    }
    c
}

/// Independent oracle: the trapezoidal Volterra solution on `h`, `h/2` and
/// `h/4` with Richardson extrapolation. Fails when the estimate exceeds the
/// grid tolerance relative to the largest value.
pub fn volterra_oracle(k: &Kernel, mu: C, kind: FamilyKind, grid: &Grid) -> Result<Trajectory, EvolutionError> {
    let exponent = growth_exponent(mu, kind) * grid.t_max();
    if exponent > SATURATION {
        return Err(EvolutionError::Saturation { exponent });
    }
    // three levels h, h/2, h/4: the two extrapolations differ by about the
    // error of the coarser one
    let finest = grid.refined().refined();
    let theta4 = k.integral_many(1, &finest.times())?;
    let solve = |stride: usize| {
        let theta: Vec<C> = theta4.iter().step_by(stride).copied().collect();
        volterra_solve(&theta, finest.h * stride as f64, mu, kind)
    };
    let (l1, l2, l4) = (solve(4), solve(2), solve(1));
    let mut est: f64 = 0.0;
    let mut scale: f64 = 1.0;
    let values: Vec<Vec<C>> = (0..=grid.steps)
        .map(|i| {
            let coarse = (4.0 * l2[2 * i] - l1[i]) / 3.0;
            let fine = (4.0 * l4[4 * i] - l2[2 * i]) / 3.0;
            est = est.max((fine - coarse).norm());
            scale = scale.max(fine.norm());
            vec![fine]
        })
        .collect();
    if est > grid.tolerance * scale {
        return Err(EvolutionError::StepTooCoarse {
            estimate: est,
            tolerance: grid.tolerance,
        });
    }
    Ok(Trajectory {
        time_grid: grid.times(),
        values,
        kernel_id: k.label(),
        operator_id: format!("scalar[{mu}]"),
        kind,
        quadrature_meta: QuadratureMeta {
            step: grid.h,
            tolerance: grid.tolerance,
            method: "volterra-trapezoid+richardson".into(),
            error_estimate: est,
        },
    })
}

/// Vector trajectory `t ↦ (c_K(t;μ_j) w_j x_j)_j` for the diagonal model.
pub fn apply_family(
    op: &SpectralOperator,
    k: &Kernel,
    kind: FamilyKind,
    grid: &Grid,
    x: &[C],
) -> Result<Trajectory, EvolutionError> {
    if x.len() != op.len() {
        return Err(SpectralError::DimensionMismatch {
            expected: op.len(),
            got: x.len(),
        }
        .into());
    }
    let solver = FamilySolver::new(k, *grid)?;
    let columns: Vec<(Vec<C>, f64)> = op
        .points()
        .par_iter()
        .map(|&mu| solver.solve(mu, kind))
        .collect::<Result<_, _>>()?;
    let est = columns.iter().map(|c| c.1).fold(0.0, f64::max);
    let values = (0..=grid.steps)
        .map(|i| {
            columns
                .iter()
                .enumerate()
                .map(|(j, col)| col.0[i] * op.weights()[j] * x[j])
                .collect()
        })
        .collect();
    Ok(Trajectory {
        time_grid: grid.times(),
        values,
        kernel_id: k.label(),
        operator_id: op.id().to_string(),
        kind,
        quadrature_meta: QuadratureMeta {
            step: grid.h,
            tolerance: grid.tolerance,
            method: solver.method().into(),
            error_estimate: est,
        },
    })
}

fn check_dims(traj: &Trajectory, op: &SpectralOperator) -> Result<(), EvolutionError> {
    if traj.points() != op.len() {
        return Err(SpectralError::DimensionMismatch {
            expected: op.len(),
            got: traj.points(),
        }
        .into());
    }
    Ok(())
}

/// Pointwise residuals of the defining identity, `[time][point]`. The
/// trajectory is assumed to come from `apply_family` with `x = 1`.
pub fn identity_residuals(traj: &Trajectory, op: &SpectralOperator, k: &Kernel) -> Result<Vec<Vec<f64>>, EvolutionError> {
    check_dims(traj, op)?;
    let h = traj.step();
    let theta = k.integral_many(1, &traj.time_grid)?;
    let cols: Vec<Vec<f64>> = (0..op.len())
        .into_par_iter()
        .map(|j| {
            let mu = op.points()[j];
            let w = op.weights()[j];
            let c = traj.column(j);
            let once = quad::cumulative(&c, h);
            let integral = match traj.kind {
                FamilyKind::Cosine => quad::cumulative(&once, h),
                FamilyKind::Semigroup => once,
            };
            (0..c.len())
                .map(|i| (mu * integral[i] - (c[i] - theta[i] * w)).norm())
                .collect()
        })
        .collect();
    Ok((0..traj.time_grid.len())
        .map(|i| cols.iter().map(|col| col[i]).collect())
        .collect())
}

/// `max |μ∫₀ᵗ(t−s)c − (c − Θw)|` (cosine) or `max |μ∫₀ᵗ s − (s − Θw)|`.
pub fn identity_residual(traj: &Trajectory, op: &SpectralOperator, k: &Kernel) -> Result<f64, EvolutionError> {
    Ok(identity_residuals(traj, op, k)?
        .iter()
        .flatten()
        .copied()
        .fold(0.0, f64::max))
}

/// `∫_lo^hi K(T − r) g(r) dr` with `T = t_n` and `lo, hi` node indices, by the
/// product rule with weights `w` (step `h`); `g` is sampled on the same grid.
fn window(w: &(Vec<C>, Vec<C>), g: &[C], n: usize, lo: usize, hi: usize) -> C {
    // u = T − r runs over [t_{n−hi}, t_{n−lo}]
    let mut s = ZERO;
    for j in (n - hi)..(n - lo) {
        s += w.0[j] * g[n - j] + w.1[j] * g[n - j - 1];
    }
    s
}

/// Per point `w²|s(t)s(s) − [∫₀^{t+s} − ∫₀ᵗ − ∫₀ˢ] K(t+s−r) s(r) dr|`, maximized.
pub fn composition_residual(
    op: &SpectralOperator,
    k: &Kernel,
    grid: &Grid,
    t: f64,
    s: f64,
) -> Result<f64, EvolutionError> {
    let span = grid.t_max();
    for v in [t, s, t + s] {
        if v > span * (1.0 + 1e-12) {
            return Err(EvolutionError::SpanExceeded { time: v, span });
        }
    }
    let (Some(it), Some(is)) = (grid.index_of(t), grid.index_of(s)) else {
        return Err(EvolutionError::InvalidGrid(format!("t = {t}, s = {s} must be grid nodes")));
    };
    let n = it + is;
    // semigroup values on the h/2 grid, then the windowed convolution on h/2 and h
    let fine_grid = grid.refined();
    let solver = FamilySolver::new(k, fine_grid)?;
    let moments_fine = Moments::compute(k, &fine_grid)?;
    let w_fine = moments_fine.weights();
    let w_coarse = moments_fine.coarsen().weights();
    let res: Vec<f64> = op
        .points()
        .par_iter()
        .zip(op.weights().par_iter())
        .map(|(&mu, &w)| -> Result<f64, EvolutionError> {
            let (g_fine, _) = solver.solve(mu, FamilyKind::Semigroup)?;
            let g_coarse: Vec<C> = g_fine.iter().step_by(2).copied().collect();
            let combo = |wts: &(Vec<C>, Vec<C>), g: &[C], scale: usize| {
                let (n, it, is) = (n * scale, it * scale, is * scale);
                window(wts, g, n, it, n) - window(wts, g, n, 0, is)
            };
            let rhs_f = combo(&w_fine, &g_fine, 2);
            let rhs_c = combo(&w_coarse, &g_coarse, 1);
            let rhs = (4.0 * rhs_f - rhs_c) / 3.0;
            let lhs = g_coarse[it] * g_coarse[is];
            Ok(w * w * (lhs - rhs).norm())
        })
        .collect::<Result<_, _>>()?;
    Ok(res.into_iter().fold(0.0, f64::max))
}

/// Growth rate bound `ω_j` of point `j` of a family (kernel bound included).
fn point_growth(k: &Kernel, mu: C, kind: FamilyKind) -> f64 {
    let beta = k.exp_bound().map(|b| b.beta.max(0.0)).unwrap_or(0.0);
    let own = match kind {
        FamilyKind::Cosine => mu.sqrt().re.abs(),
        FamilyKind::Semigroup => mu.re.max(0.0),
    };
    own + beta
}

/// Per point `|λw/(λ²−μ) − (1/K̃(λ))∫₀^T e^{−λt} c(t) dt|` (semigroups use `w/(λ−μ)`).
pub fn laplace_criterion_residual(
    op: &SpectralOperator,
    k: &Kernel,
    traj: &Trajectory,
    lambda: C,
) -> Result<f64, EvolutionError> {
    check_dims(traj, op)?;
    let kt = k.laplace(lambda)?;
    if kt.norm() < 1e-300 {
        return Err(EvolutionError::TransformZero(lambda));
    }
    let h = traj.step();
    let t_end = *traj.time_grid.last().unwrap();
    let tol = traj.quadrature_meta.tolerance;
    let mut worst: f64 = 0.0;
    for j in 0..op.len() {
        let mu = op.points()[j];
        let w = op.weights()[j];
        let omega = point_growth(k, mu, traj.kind);
        if lambda.re <= omega {
            return Err(EvolutionError::TailNotNegligible { tail: f64::INFINITY });
        }
        let col = traj.column(j);
        let sup_end = col[col.len() / 2..].iter().map(|v| v.norm()).fold(0.0, f64::max);
        // |c(t)| ≤ sup_end·e^{ω(t−T)} beyond T
        let tail = sup_end * (-lambda.re * t_end).exp() / (lambda.re - omega) / kt.norm();
        if tail > 0.01 * tol {
            return Err(EvolutionError::TailNotNegligible { tail });
        }
        let integrand: Vec<C> = col
            .iter()
            .zip(&traj.time_grid)
            .map(|(v, &t)| v * (-lambda * t).exp())
            .collect();
        let lhs = quad::total(&integrand, h) / kt;
        let expected = match traj.kind {
            FamilyKind::Cosine => lambda * w / (lambda * lambda - mu),
            FamilyKind::Semigroup => w / (lambda - mu),
        };
        worst = worst.max((lhs - expected).norm());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSemigroup {
    pub s1: Trajectory,
    pub s2: Trajectory,
    pub s3: Trajectory,
    pub s4: Trajectory,
    /// `max |S² − ∫S¹|`
    pub integral_residual: f64,
    /// `max |S¹ − S⁴|`
    pub diagonal_residual: f64,
    /// `max ‖𝒜∫₀ᵗS − S(t) + Θ₂(t)𝒞‖` over points and times.
    pub identity_residual: f64,
}

impl BlockSemigroup {
    pub fn max_residual(&self) -> f64 {
        self.integral_residual
            .max(self.diagonal_residual)
            .max(self.identity_residual)
    }
}

/// Blocks of the `Θ`-convoluted semigroup generated by the companion operator.
/// `S¹` integrates the cosine trajectory; `S⁴` and `S²` are computed
/// independently as cosine families of the first and second antiderivatives of `K`.
pub fn block_semigroup(op: &SpectralOperator, k: &Kernel, grid: &Grid) -> Result<BlockSemigroup, EvolutionError> {
    let ones = vec![C::new(1.0, 0.0); op.len()];
    let cos = apply_family(op, k, FamilyKind::Cosine, grid, &ones)?;
    let k1 = Kernel::antiderivative(k, 1);
    let k2 = Kernel::antiderivative(k, 2);
    let s4 = apply_family(op, &k1, FamilyKind::Cosine, grid, &ones)?;
    let s2 = apply_family(op, &k2, FamilyKind::Cosine, grid, &ones)?;
    let h = grid.h;
    let times = grid.times();
    let theta = k.integral_many(1, &times)?;
    let theta2 = k.integral_many(2, &times)?;
    let n_t = times.len();
    let n_p = op.len();
    let mut s1v = vec![vec![ZERO; n_p]; n_t];
    let mut s3v = vec![vec![ZERO; n_p]; n_t];
    let (mut r_int, mut r_diag, mut r_id): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for j in 0..n_p {
        let mu = op.points()[j];
        let w = op.weights()[j];
        let c = cos.column(j);
        let s1 = quad::cumulative(&c, h);
        let s3: Vec<C> = c.iter().zip(&theta).map(|(c, th)| c - th * w).collect();
        let s2c = s2.column(j);
        let s4c = s4.column(j);
        let int_s1 = quad::cumulative(&s1, h);
        let m1 = &s1[..]; // ∫S¹ is int_s1; ∫S³ below
        let int_s2 = quad::cumulative(&s2c, h);
        let int_s3 = quad::cumulative(&s3, h);
        let int_s4 = quad::cumulative(&s4c, h);
        for i in 0..n_t {
            r_int = r_int.max((s2c[i] - int_s1[i]).norm());
            r_diag = r_diag.max((m1[i] - s4c[i]).norm());
            let th2 = theta2[i] * w;
            let e11 = int_s3[i] - s1[i] + th2;
            let e12 = int_s4[i] - s2c[i];
            let e21 = mu * int_s1[i] - s3[i];
            let e22 = mu * int_s2[i] - s4c[i] + th2;
            r_id = r_id.max(e11.norm().max(e12.norm()).max(e21.norm()).max(e22.norm()));
            s1v[i][j] = s1[i];
            s3v[i][j] = s3[i];
        }
    }
    let mut s1t = cos.clone();
    s1t.values = s1v;
    let mut s3t = cos;
    s3t.values = s3v;
    Ok(BlockSemigroup {
        s1: s1t,
        s2,
        s3: s3t,
        s4,
        integral_residual: r_int,
        diagonal_residual: r_diag,
        identity_residual: r_id,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassResult {
    pub trajectory: Trajectory,
    /// `max |S(t) − s_{K₁}(t;μ)w|` over points and output times.
    pub residual: f64,
    /// `max |S(t)|` at the smallest positive output time.
    pub small_time_sup: f64,
}

/// `S(t) = (1/√(πt))∫₀^∞ e^{−s²/4t} C_K(s) ds`, evaluated as
/// `∫₀^∞ e^{−r²/4} C_K(r√t) dr / √π` with the cosine trajectory interpolated.
pub fn weierstrass_semigroup(
    cos_traj: &Trajectory,
    op: &SpectralOperator,
    k: &Kernel,
    t_out: &Grid,
) -> Result<WeierstrassResult, EvolutionError> {
    check_dims(cos_traj, op)?;
    let s_max = *cos_traj.time_grid.last().unwrap();
    let tol = Tolerance::new(t_out.tolerance * 1e-2, 1e-10);
    let times = t_out.times();
    let mut values = vec![vec![ZERO; op.len()]; times.len()];
    for j in 0..op.len() {
        let omega = point_growth(k, op.points()[j], FamilyKind::Cosine);
        let col = cos_traj.column(j);
        let sup = col.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        for (i, &t) in times.iter().enumerate().skip(1) {
            let st = t.sqrt();
            let r_max = s_max / st;
            // Gaussian tail of e^{−r²/4 + ω r √t} beyond r_max
            let expo = -r_max * r_max / 4.0 + omega * r_max * st;
            let slope = (r_max / 2.0 - omega * st).max(1e-3);
            let tail = sup * expo.exp() / slope / PI.sqrt();
            if tail > t_out.tolerance {
                return Err(EvolutionError::TailNotNegligible { tail });
            }
            let f = |r: f64| cos_traj.interpolate(j, r * st) * (-r * r / 4.0).exp();
            let breaks: Vec<f64> = (1..8).map(|q| q as f64 * 2.0).filter(|b| *b < r_max).collect();
            let est = quad::integrate_with_breaks(f, 0.0, r_max.min(40.0 + 2.0 * omega * st * 2.0), &breaks, tol)?;
            values[i][j] = est.value / PI.sqrt();
        }
    }
    let k1 = Kernel::weierstrass(k)?;
    let reference = apply_family(op, &k1, FamilyKind::Semigroup, t_out, &vec![C::new(1.0, 0.0); op.len()])?;
    let mut residual: f64 = 0.0;
    for i in 1..times.len() {
        for j in 0..op.len() {
            residual = residual.max((values[i][j] - reference.values[i][j]).norm());
        }
    }
    let small_time_sup = values[1].iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(WeierstrassResult {
        trajectory: Trajectory {
            time_grid: times,
            values,
            kernel_id: k1.label(),
            operator_id: op.id().to_string(),
            kind: FamilyKind::Semigroup,
            quadrature_meta: QuadratureMeta {
                step: t_out.h,
                tolerance: t_out.tolerance,
                method: "gauss-weierstrass+adaptive".into(),
                error_estimate: cos_traj.quadrature_meta.error_estimate,
            },
        },
        residual,
        small_time_sup,
    })
}

/// `max |½(s_K(t;μ) + s_K(t;−μ)) − c_K(t;μ²)|` over the grid.
pub fn veza_residual(k: &Kernel, mu: C, grid: &Grid) -> Result<f64, EvolutionError> {
    let sp = scalar_semigroup(k, mu, grid)?;
    let sm = scalar_semigroup(k, -mu, grid)?;
    let c = scalar_cosine(k, mu * mu, grid)?;
    Ok((0..=grid.steps)
        .map(|i| (0.5 * (sp.scalar(i) + sm.scalar(i)) - c.scalar(i)).norm())
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourResult {
    pub values: Vec<C>,
    /// `max |contour − c_K(t; m(x))|` against the product-integration family.
    pub residual: f64,
    pub time_bound: f64,
    pub height: f64,
}

/// `τ = cos(δπ/2) / (C_s α^{1/s})`, `s = 1/δ`.
pub fn contour_time_bound(seq: &WeightSequence, delta: f64, alpha: f64) -> Result<f64, EvolutionError> {
    let s = 1.0 / delta;
    let cs = seq
        .gevrey_upper_constant()
        .ok_or_else(|| EvolutionError::InvalidGrid("sequence has no Gevrey upper constant".into()))?;
    Ok((delta * PI / 2.0).cos() / (cs * alpha.powf(1.0 / s)))
}

/// `(1/2πi)∫_Γ λe^{λt−λ^δ}/(λ² − m(x)) dλ` with `Γ = ∂Λ_{α,β,1}` oriented upwards.
#[allow(clippy::too_many_arguments)]
pub fn contour_cosine(
    op: &SpectralOperator,
    delta: f64,
    seq: &SequenceSpec,
    alpha: f64,
    beta: f64,
    t: f64,
    xs: &[f64],
) -> Result<ContourResult, EvolutionError> {
    let built = seq
        .build()
        .map_err(|e| EvolutionError::InvalidGrid(e.to_string()))?;
    let bound = contour_time_bound(&built, delta, alpha)?;
    if !(t > 0.0 && t < bound) {
        return Err(EvolutionError::TimeBoundExceeded { time: t, bound });
    }
    let region = Region::new(
        RegionKind::Ultralog {
            seq: seq.clone(),
            alpha,
            beta,
            gamma: 1.0,
        },
        false,
    )?;
    if let Some(z) = op.points_in(&region.squared()).first() {
        return Err(EvolutionError::ContourThroughSpectrum(*z));
    }
    let kernel = Kernel::gevrey(delta)?;
    let mus: Vec<C> = xs
        .iter()
        .map(|&x| {
            op.symbol_value(x)
                .ok_or_else(|| EvolutionError::InvalidGrid("contour evaluation needs a symbol model".into()))
        })
        .collect::<Result<_, _>>()?;
    for (&x, mu) in xs.iter().zip(&mus) {
        if region.squared().contains(*mu) {
            return Err(EvolutionError::ContourThroughSpectrum(C::new(x, 0.0)));
        }
    }
    let s = 1.0 / delta;
    let cs = built.gevrey_upper_constant().unwrap();
    let cdel = (delta * PI / 2.0).cos();
    let point = |y: f64| -> (C, C) {
        let l = region.boundary_at_height(y).unwrap();
        // x' = p* y / (r² − p* x) from differentiating x = M(α|λ|) + β
        let r2 = l.norm_sqr();
        let pstar = built.associated(alpha * r2.sqrt()).argmax as f64;
        let dx = pstar * y / (r2 - pstar * l.re);
        (l, C::new(dx, 1.0))
    };
    // |integrand| ≲ e^{βt + C_s α^{1/s}|λ|^{1/s} t − cos(δπ/2)|λ|^δ} / |λ|
    let log_bound = |r: f64| beta * t + cs * alpha.powf(1.0 / s) * r.powf(1.0 / s) * t - cdel * r.powf(delta) - r.ln();
    let target = (1e-3 * 1e-12f64).ln();
    let mut height: f64 = 64.0;
    while log_bound(height) + height.ln() > target {
        height *= 2.0;
        if height > 1e12 {
            return Err(EvolutionError::TailNotNegligible {
                tail: log_bound(height).exp(),
            });
        }
    }
    let mut breaks = vec![0.0];
    let mut b = 1.0;
    while b < height {
        breaks.push(b);
        breaks.push(-b);
        b *= 2.0;
    }
    let tol = Tolerance::new(1e-11, 1e-10);
    let values: Vec<C> = mus
        .par_iter()
        .map(|&mu| -> Result<C, EvolutionError> {
            let f = |y: f64| -> C {
                let (l, dl) = point(y);
                let kt = (-l.powf(delta)).exp();
                l * (l * t).exp() * kt / (l * l - mu) * dl
            };
            let est = quad::integrate_with_breaks(f, -height, height, &breaks, tol)?;
            Ok(est.value / C::new(0.0, 2.0 * PI))
        })
        .collect::<Result<_, _>>()?;
    // reference: product-integration cosine at time t
    let steps = ((t / 2e-3).ceil() as usize).max(16);
    let grid = Grid::new(t, steps)?;
    let mut residual: f64 = 0.0;
    for (v, mu) in values.iter().zip(&mus) {
        let c = scalar_cosine(&kernel, *mu, &grid)?;
        residual = residual.max((v - c.scalar(steps)).norm());
    }
    Ok(ContourResult {
        values,
        residual,
        time_bound: bound,
        height,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilleYosidaReport {
    pub m_fit: f64,
    pub ok: bool,
    /// `(λ, k)` attaining `m_fit`.
    pub witness: Option<(f64, usize)>,
    pub skipped: Vec<(f64, String)>,
}

/// Checks `|d^k/dλ^k [K̃(λ) w/(λ−μ)]| ≤ M k!/(λ−ω)^{k+1}` on a real grid.
/// Derivatives come from the Cauchy integral on a circle (trapezoid rule),
/// with the radius halved from half the distance to the nearest singularity
/// until two radii agree.
pub fn hille_yosida_derivative_check(
    op: &SpectralOperator,
    k: &Kernel,
    omega: f64,
    a: f64,
    k_max: usize,
    lambdas: &[f64],
) -> Result<HilleYosidaReport, EvolutionError> {
    if k_max > 6 {
        return Err(EvolutionError::DifferentiationInstability(format!("k_max = {k_max} above 6")));
    }
    let abscissa = k.abscissa();
    let mut skipped = Vec::new();
    let mut m_fit: f64 = 0.0;
    let mut witness = None;
    let mut used = 0;
    const NODES: usize = 64;
    for &lam in lambdas {
        if lam <= a || lam <= omega || lam <= abscissa {
            skipped.push((lam, "outside the half-line".into()));
            continue;
        }
        let l0 = C::new(lam, 0.0);
        let dist = op.distance(l0);
        if dist < 1e-12 {
            skipped.push((lam, "on the spectrum".into()));
            continue;
        }
        let kt0 = match k.laplace(l0) {
            Ok(v) => v,
            Err(e) => {
                skipped.push((lam, e.to_string()));
                continue;
            }
        };
        if kt0.norm() < 1e-300 {
            skipped.push((lam, "transform vanishes".into()));
            continue;
        }
        let derivs = |rho: f64| -> Result<Vec<f64>, EvolutionError> {
            let samples: Vec<(C, C)> = (0..NODES)
                .map(|q| {
                    let th = 2.0 * PI * q as f64 / NODES as f64;
                    let z = l0 + C::from_polar(rho, th);
                    k.laplace(z).map(|v| (C::from_polar(1.0, th), v))
                })
                .collect::<Result<_, _>>()?;
            let mut out = vec![0.0f64; k_max + 1];
            for (&mu, &w) in op.points().iter().zip(op.weights()) {
                for (kk, slot) in out.iter_mut().enumerate() {
                    let mut acc = ZERO;
                    for (e, kt) in &samples {
                        let z = l0 + rho * e;
                        acc += kt * w / (z - mu) * e.powi(-(kk as i32));
                    }
                    let fact: f64 = (1..=kk).map(|v| v as f64).product();
                    let d = (acc / NODES as f64).norm() * fact / rho.powi(kk as i32);
                    *slot = slot.max(d);
                }
            }
            Ok(out)
        };
        let mut rho = 0.5 * dist.min(lam - abscissa.max(a));
        let mut accepted = None;
        let mut prev = derivs(rho)?;
        for _ in 0..12 {
            rho *= 0.5;
            let next = derivs(rho)?;
            let agree = prev
                .iter()
                .zip(&next)
                .all(|(p, n)| (p - n).abs() <= 1e-6 * p.abs().max(n.abs()).max(1e-300));
            if agree {
                accepted = Some(next);
                break;
            }
            prev = next;
        }
        let Some(d) = accepted else {
            skipped.push((lam, "derivative estimates did not stabilize".into()));
            continue;
        };
        used += 1;
        for (kk, v) in d.iter().enumerate() {
            let fact: f64 = (1..=kk).map(|v| v as f64).product();
            let need = v * (lam - omega).powi(kk as i32 + 1) / fact;
            if need > m_fit {
                m_fit = need;
                witness = Some((lam, kk));
            }
        }
    }
    if used == 0 {
        return Err(EvolutionError::DifferentiationInstability(
            "no grid point produced stable derivatives".into(),
        ));
    }
    Ok(HilleYosidaReport {
        m_fit,
        ok: m_fit <= 1e6,
        witness,
        skipped,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub bound_ok: bool,
    pub m0: f64,
    pub witness: Option<C>,
}

/// Fits `M₀` in `sup_j |λK̃(λ)w_j/(λ²−μ_j)| ≤ M₀|λ|^r` on `Re λ > ω`. A square
/// root of the spectrum inside the half-plane is a pole and fails the bound;
/// otherwise the fit must settle when the sweep radius doubles.
pub fn growth_witness(op: &SpectralOperator, k: &Kernel, omega: f64, r: f64) -> Result<GrowthReport, EvolutionError> {
    for mu in op.points() {
        let root = mu.sqrt();
        for z in [root, -root] {
            if z.re > omega + 1e-12 {
                return Ok(GrowthReport {
                    bound_ok: false,
                    m0: f64::INFINITY,
                    witness: Some(z),
                });
            }
        }
    }
    let fit = |radius: f64| -> Result<(f64, C), EvolutionError> {
        let mut pts = Vec::new();
        let mut re = 0.25;
        while re <= radius {
            let mut im = 0.0;
            pts.push(C::new(omega + re, 0.0));
            im += 0.25;
            while im <= radius {
                pts.push(C::new(omega + re, im));
                pts.push(C::new(omega + re, -im));
                im *= 1.5;
            }
            re *= 1.5;
        }
        let vals: Vec<(f64, C)> = pts
            .par_iter()
            .map(|&l| -> Result<(f64, C), EvolutionError> {
                let kt = k.laplace(l)?;
                let sup = op
                    .points()
                    .iter()
                    .zip(op.weights())
                    .map(|(mu, w)| (l * kt * *w / (l * l - mu)).norm())
                    .fold(0.0, f64::max);
                Ok((sup / l.norm().powf(r), l))
            })
            .collect::<Result<_, _>>()?;
        Ok(vals
            .into_iter()
            .fold((0.0, C::new(0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a }))
    };
    let (m1, _) = fit(1e3)?;
    let (m2, w2) = fit(2e3)?;
    let ok = m2.is_finite() && m2 <= 1.1 * m1;
    Ok(GrowthReport {
        bound_ok: ok,
        m0: m2,
        witness: (!ok).then_some(w2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn sinh_case() {
        let g = Grid::new(2.0, 400).unwrap();
        let c = scalar_cosine(&Kernel::riesz(1.0).unwrap(), r(1.0), &g).unwrap();
        for (i, t) in g.times().iter().enumerate() {
            let exact = t.sinh();
            assert!((c.scalar(i).re - exact).abs() <= 1e-8 * exact.max(1.0), "t={t}");
        }
        let s = scalar_semigroup(&Kernel::riesz(1.0).unwrap(), r(2.0), &g).unwrap();
        let t = 2.0f64;
        assert!((s.scalar(400).re - ((2.0 * t).exp() - 1.0) / 2.0).abs() < 1e-8 * 27.0);
    }

    #[test]
    fn zero_mu_is_theta() {
        let g = Grid::new(1.0, 100).unwrap();
        let k = Kernel::k_half();
        let c = scalar_cosine(&k, r(0.0), &g).unwrap();
        for (i, t) in g.times().iter().enumerate() {
            assert!((c.scalar(i) - k.theta(*t).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn oracle_agrees_and_converges() {
        let g = Grid::new(1.0, 200).unwrap();
        let k = Kernel::riesz(1.0).unwrap();
        let o = volterra_oracle(&k, r(1.0), FamilyKind::Cosine, &g).unwrap();
        assert!((o.scalar(200).re - 1f64.sinh()).abs() < 1e-8);
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let theta: Vec<C> = (0..=n).map(|i| r(i as f64 * h)).collect();
            (volterra_solve(&theta, h, r(1.0), FamilyKind::Cosine)[n].re - 1f64.sinh()).abs()
        };
        let ratio = err(50) / err(100);
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn rational_route() {
        let k = Kernel::spectrum_zero(&[r(2.0)], 2).unwrap();
        let g = Grid::new(1.0, 100).unwrap();
        for kind in [FamilyKind::Cosine, FamilyKind::Semigroup] {
            let mu = C::new(-1.0, 0.5);
            let s = scalar_family(&k, mu, &g, kind).unwrap();
            assert_eq!(s.quadrature_meta.method, "rational-residues");
            let o = volterra_oracle(&k, mu, kind, &g).unwrap();
            for i in 0..=100 {
                assert!((s.scalar(i) - o.scalar(i)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn oracle_matrix() {
        let g = Grid::new(1.0, 200).unwrap();
        let kernels = [
            Kernel::riesz(1.0).unwrap(),
            Kernel::riesz(2.5).unwrap(),
            Kernel::k_half(),
            Kernel::gevrey(2.0 / 3.0).unwrap(),
        ];
        let mus = [r(0.0), r(1.0), r(-1.0), C::new(0.0, 4.0), r(-9.0)];
        for k in &kernels {
            for &mu in &mus {
                for kind in [FamilyKind::Cosine, FamilyKind::Semigroup] {
                    let s = scalar_family(k, mu, &g, kind).unwrap();
                    let o = volterra_oracle(k, mu, kind, &g).unwrap();
                    let d = (0..=200).map(|i| (s.scalar(i) - o.scalar(i)).norm()).fold(0.0, f64::max);
                    assert!(d < 1e-7, "{} {mu} {kind:?}: {d}", k.label());
                }
            }
        }
        let o = volterra_oracle(&Kernel::gevrey(0.5).unwrap(), r(-4.0), FamilyKind::Cosine, &g).unwrap();
        let s = scalar_cosine(&Kernel::gevrey(0.5).unwrap(), r(-4.0), &g).unwrap();
        assert!((s.scalar(200) - o.scalar(200)).norm() < 1e-6);
        assert!(veza_residual(&Kernel::k_half(), C::new(0.0, 2.0), &g).unwrap() < 1e-6);
    }

    #[test]
    fn oracle_rejects_coarse_steps() {
        let g = Grid::new(1.0, 4).unwrap().with_tolerance(1e-12);
        let err = volterra_oracle(&Kernel::riesz(1.0).unwrap(), r(-9.0), FamilyKind::Cosine, &g);
        assert!(matches!(err, Err(EvolutionError::StepTooCoarse { .. })));
        let g = Grid::new(10.0, 100).unwrap();
        let err = scalar_cosine(&Kernel::riesz(1.0).unwrap(), r(1e4), &g);
        assert!(matches!(err, Err(EvolutionError::Saturation { .. })));
    }

    #[test]
    fn family_scaling_and_identity() {
        let op = SpectralOperator::real_eigenvalues(&[1.0]).unwrap().with_weights(vec![2.0]).unwrap();
        let g = Grid::new(1.0, 200).unwrap();
        let k = Kernel::riesz(1.0).unwrap();
        let tr = apply_family(&op, &k, FamilyKind::Cosine, &g, &[r(1.0)]).unwrap();
        assert!((tr.values[200][0].re - 2.0 * 1f64.sinh()).abs() < 1e-8);
        assert!(identity_residual(&tr, &op, &k).unwrap() < 1e-7);
        let mut bad = tr.clone();
        for row in bad.values.iter_mut() {
            row[0] *= 1.01;
        }
        assert!(identity_residual(&bad, &op, &k).unwrap() > 1e-3);
    }

    #[test]
    fn composition_and_veza() {
        let g = Grid::new(1.0, 100).unwrap();
        let op = SpectralOperator::real_eigenvalues(&[0.0, 1.0]).unwrap();
        for k in [Kernel::riesz(1.0).unwrap(), Kernel::k_half()] {
            let res = composition_residual(&op, &k, &g, 0.5, 0.5).unwrap();
            assert!(res < 1e-6, "{res}");
            assert_eq!(composition_residual(&op, &k, &g, 0.0, 0.5).unwrap(), 0.0);
        }
        assert!(veza_residual(&Kernel::riesz(1.0).unwrap(), r(1.0), &g).unwrap() < 1e-8);
    }

    #[test]
    fn laplace_criterion() {
        let op = SpectralOperator::real_eigenvalues(&[-1.0]).unwrap();
        let k = Kernel::riesz(1.0).unwrap();
        let g = Grid::new(20.0, 4000).unwrap();
        let tr = apply_family(&op, &k, FamilyKind::Cosine, &g, &[r(1.0)]).unwrap();
        assert!(laplace_criterion_residual(&op, &k, &tr, r(2.0)).unwrap() < 1e-5);
    }

    #[test]
    fn blocks_closed_forms() {
        let op = SpectralOperator::real_eigenvalues(&[1.0]).unwrap();
        let g = Grid::new(1.0, 200).unwrap();
        let b = block_semigroup(&op, &Kernel::riesz(1.0).unwrap(), &g).unwrap();
        let t = 1.0f64;
        assert!((b.s3.values[200][0].re - (t.sinh() - t)).abs() < 1e-6);
        assert!((b.s1.values[200][0].re - (t.cosh() - 1.0)).abs() < 1e-6);
        assert!(b.max_residual() < 1e-6, "{b:?}");
    }

    #[test]
    fn hille_yosida_riesz() {
        let op = SpectralOperator::real_eigenvalues(&[0.0]).unwrap();
        let k = Kernel::riesz(1.0).unwrap();
        let lams: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let rep = hille_yosida_derivative_check(&op, &k, 0.0, 0.5, 6, &lams).unwrap();
        // (k+1)/λ at λ = 1, k = 6
        assert!((rep.m_fit - 7.0).abs() < 1e-5, "{rep:?}");
        assert!(rep.ok);
    }

    #[test]
    fn growth() {
        let k = Kernel::riesz(1.0).unwrap();
        let op = SpectralOperator::real_eigenvalues(&[-1.0]).unwrap();
        assert!(growth_witness(&op, &k, 0.0, -1.0).unwrap().bound_ok);
        let quartic: Vec<f64> = (1..=10).map(|n| (n as f64).powi(4)).collect();
        let op = SpectralOperator::real_eigenvalues(&quartic).unwrap();
        assert!(!growth_witness(&op, &k, 1.0, -1.0).unwrap().bound_ok);
    }

    #[test]
    fn laplace_more() {
        let g = Grid::new(20.0, 4000).unwrap();
        let op = SpectralOperator::real_eigenvalues(&[-4.0]).unwrap();
        let k = Kernel::k_half();
        let tr = apply_family(&op, &k, FamilyKind::Cosine, &g, &[r(1.0)]).unwrap();
        assert!(laplace_criterion_residual(&op, &k, &tr, r(3.0)).unwrap() < 1e-5);
        let short = Grid::new(1.0, 100).unwrap();
        let tr = apply_family(&op, &k, FamilyKind::Cosine, &short, &[r(1.0)]).unwrap();
        assert!(matches!(
            laplace_criterion_residual(&op, &k, &tr, r(3.0)),
            Err(EvolutionError::TailNotNegligible { .. })
        ));
    }

    #[test]
    fn weierstrass_cases() {
        let k = Kernel::riesz(1.0).unwrap();
        let out = Grid::new(1.0, 20).unwrap().with_tolerance(1e-7);
        for (mu, tol) in [(0.0, 1e-6), (-1.0, 1e-5)] {
            let op = SpectralOperator::real_eigenvalues(&[mu]).unwrap();
            let cos = apply_family(&op, &k, FamilyKind::Cosine, &Grid::new(16.0, 3200).unwrap(), &[r(1.0)]).unwrap();
            let w = weierstrass_semigroup(&cos, &op, &k, &out).unwrap();
            assert!(w.residual < tol, "{mu}: {}", w.residual);
            assert!(w.small_time_sup < 0.3);
            if mu == 0.0 {
                let t = 0.5f64;
                assert!((w.trajectory.values[10][0].re - 2.0 * (t / PI).sqrt()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn contour_example() {
        use crate::spectral::NamedSymbol;
        let op = SpectralOperator::symbol(NamedSymbol::BealsSquared, 200.0, 4096).unwrap();
        let seq = SequenceSpec::GevreyFactorial { s: 1.5 };
        let bound = contour_time_bound(&seq.build().unwrap(), 2.0 / 3.0, 0.1).unwrap();
        assert!(bound > 1.0);
        let res = contour_cosine(&op, 2.0 / 3.0, &seq, 0.1, 10.0, 0.5, &[0.5]).unwrap();
        assert!(res.residual < 1e-4, "{res:?}");
        let mu = op.symbol_value(0.5).unwrap();
        let o = volterra_oracle(&Kernel::gevrey(2.0 / 3.0).unwrap(), mu, FamilyKind::Cosine, &Grid::new(0.5, 500).unwrap()).unwrap();
        assert!((res.values[0] - o.scalar(500)).norm() < 1e-4);
        assert!(matches!(
            contour_cosine(&op, 2.0 / 3.0, &seq, 0.1, 10.0, 2.0 * bound, &[0.5]),
            Err(EvolutionError::TimeBoundExceeded { .. })
        ));
        // β = 1 leaves part of the parabola inside the squared region
        assert!(matches!(
            contour_cosine(&op, 2.0 / 3.0, &seq, 0.1, 1.0, 0.5, &[0.5]),
            Err(EvolutionError::ContourThroughSpectrum(_))
        ));
    }

    #[test]
    fn contour_zero_symbol_gives_theta() {
        use crate::spectral::NamedSymbol;
        let op = SpectralOperator::symbol(NamedSymbol::Zero, 1.0, 64).unwrap();
        let seq = SequenceSpec::GevreyFactorial { s: 1.5 };
        let res = contour_cosine(&op, 2.0 / 3.0, &seq, 0.1, 10.0, 0.5, &[0.3]).unwrap();
        let theta = Kernel::gevrey(2.0 / 3.0).unwrap().theta(0.5).unwrap();
        assert!((res.values[0] - theta).norm() < 1e-6, "{:?} {theta}", res.values);
    }

    #[test]
    fn hille_yosida_more() {
        let k = Kernel::riesz(1.0).unwrap();
        let op = SpectralOperator::real_eigenvalues(&[-1.0]).unwrap();
        let lams: Vec<f64> = (1..=8).map(|i| 0.5 * i as f64).collect();
        let rep = hille_yosida_derivative_check(&op, &k, 0.0, 0.25, 2, &lams).unwrap();
        assert!(rep.ok, "{rep:?}");
        // K̃ = (λ−2)/(λ+1)² vanishes at λ = 2
        let kz = Kernel::spectrum_zero(&[r(2.0)], 1).unwrap();
        let rep = hille_yosida_derivative_check(&op, &kz, 0.0, 0.25, 2, &[1.0, 2.0, 3.0]).unwrap();
        assert!(rep.skipped.iter().any(|(l, _)| *l == 2.0), "{rep:?}");
        let op0 = SpectralOperator::real_eigenvalues(&[0.0]).unwrap();
        assert!(growth_witness(&op0, &Kernel::k_half(), 0.0, -1.0).unwrap().bound_ok);
    }
}
