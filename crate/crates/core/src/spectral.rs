//! Diagonal operator models: finite eigenvalue lists and multiplication
//! operators given by a symbol sampled on a real grid.
//!
//! All norms are sup-over-points, so `‖R(λ:A)‖ = 1/dist(λ, σ(A))` exactly.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::SpectralError;
use crate::kernel::de_complex_list;
use crate::region::Region;

type C = Complex64;

const IN_SPECTRUM: f64 = 1e-14;
const BLOCK: usize = 32;
const DEFAULT_SAMPLES: usize = 4096;
const DENSE_LIMIT: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedSymbol {
    /// Eigenvalues `n²`, `n = 1, 2, …` of the Dirichlet `−Δ` on `[0, π]`.
    DirichletLaplacian,
    /// `(x + ix²)²`
    BealsSquared,
    /// `(1 − x²/4) + ix`
    Kos,
    /// `m ≡ 0`
    Zero,
}

impl NamedSymbol {
    pub fn eval(&self, x: f64) -> C {
        match self {
            NamedSymbol::DirichletLaplacian => C::new(x * x, 0.0),
            NamedSymbol::BealsSquared => {
                let z = C::new(x, x * x);
                z * z
            }
            NamedSymbol::Kos => C::new(1.0 - x * x / 4.0, x),
            NamedSymbol::Zero => C::new(0.0, 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NamedSymbol::DirichletLaplacian => "dirichlet-laplacian",
            NamedSymbol::BealsSquared => "beals-squared",
            NamedSymbol::Kos => "kos",
            NamedSymbol::Zero => "zero",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum ImageMap {
    Square,
    NegateSquare,
    Rotate { theta: f64 },
}

impl ImageMap {
    pub fn apply(&self, z: C) -> C {
        match self {
            ImageMap::Square => z * z,
            ImageMap::NegateSquare => -(z * z),
            ImageMap::Rotate { theta } => z * C::from_polar(1.0, *theta),
        }
    }

    fn tag(&self) -> String {
        match self {
            ImageMap::Square => "square".into(),
            ImageMap::NegateSquare => "negate-square".into(),
            ImageMap::Rotate { theta } => format!("rotate({theta})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumSource {
    EigenvalueList,
    Symbol {
        symbol: NamedSymbol,
        maps: Vec<ImageMap>,
        grid: Vec<f64>,
    },
}

/// JSON operator description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    List {
        #[serde(deserialize_with = "de_complex_list")]
        eigenvalues: Vec<C>,
        #[serde(default)]
        c_weights: Option<Vec<f64>>,
        #[serde(default)]
        maps: Vec<ImageMap>,
    },
    Symbol {
        symbol: NamedSymbol,
        #[serde(default, rename = "X")]
        x_max: Option<f64>,
        #[serde(default)]
        n: Option<usize>,
        /// Largest region radius under study; fixes `X` when it is absent.
        #[serde(default)]
        radius: Option<f64>,
        #[serde(default)]
        maps: Vec<ImageMap>,
    },
}

#[derive(Clone, Debug)]
pub struct SpectralOperator {
    id: String,
    source: SpectrumSource,
    points: Vec<C>,
    weights: Vec<f64>,
    blocks: Vec<(C, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub lambda: C,
    pub distance: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolventProfile {
    pub subset_of_resolvent: bool,
    pub sup_ratio: f64,
    pub witness: Option<Witness>,
    pub samples: usize,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompanionReport {
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub formula_residual: f64,
    pub companion_norm: f64,
    pub base_norm: f64,
    pub dense: bool,
}

fn bounding_blocks(points: &[C]) -> Vec<(C, f64)> {
    points
        .chunks(BLOCK)
        .map(|ch| {
            let c = ch.iter().sum::<C>() / ch.len() as f64;
            let r = ch.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
            (c, r)
        })
        .collect()
}

impl SpectralOperator {
    pub fn eigenvalues(list: Vec<C>) -> Result<Self, SpectralError> {
        if list.is_empty() {
            return Err(SpectralError::Invalid("empty eigenvalue list".into()));
        }
        if list.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SpectralError::Invalid("non-finite eigenvalue".into()));
        }
        let id = format!("diag[{}]", list.len());
        Ok(Self::assemble(id, SpectrumSource::EigenvalueList, list))
    }

    pub fn real_eigenvalues(list: &[f64]) -> Result<Self, SpectralError> {
        Self::eigenvalues(list.iter().map(|&x| C::new(x, 0.0)).collect())
    }

    /// Dirichlet Laplacian eigenvalues `n²` for `n = 1..=count`.
    pub fn dirichlet_laplacian(count: usize) -> Result<Self, SpectralError> {
        let mut op = Self::eigenvalues((1..=count).map(|n| C::new((n * n) as f64, 0.0)).collect())?;
        op.id = format!("dirichlet-laplacian[{count}]");
        Ok(op)
    }

    /// Symbol sampled at `n` uniform points of `[−x_max, x_max]`.
    pub fn symbol(symbol: NamedSymbol, x_max: f64, n: usize) -> Result<Self, SpectralError> {
        if symbol == NamedSymbol::DirichletLaplacian {
            return Self::dirichlet_laplacian(n);
        }
        if !(x_max > 0.0 && x_max.is_finite()) || n < 2 {
            return Err(SpectralError::Invalid(format!(
                "symbol grid needs X > 0 and n ≥ 2 (got X = {x_max}, n = {n})"
            )));
        }
        let grid: Vec<f64> = (0..n)
            .map(|i| -x_max + 2.0 * x_max * i as f64 / (n - 1) as f64)
            .collect();
        let points = grid.iter().map(|&x| symbol.eval(x)).collect();
        let id = format!("{}[X={x_max},n={n}]", symbol.name());
        Ok(Self::assemble(
            id,
            SpectrumSource::Symbol {
                symbol,
                maps: Vec::new(),
                grid,
            },
            points,
        ))
    }

    /// Symbol grid whose endpoints satisfy `|m(±X)| ≥ 10·radius`.
    pub fn symbol_for_radius(
        symbol: NamedSymbol,
        maps: &[ImageMap],
        radius: f64,
        n: usize,
    ) -> Result<Self, SpectralError> {
        let f = |x: f64| {
            let z = maps.iter().fold(symbol.eval(x), |z, m| m.apply(z));
            z.norm().min(maps.iter().fold(symbol.eval(-x), |z, m| m.apply(z)).norm())
        };
        let target = 10.0 * radius;
        let mut hi = 1.0;
        while f(hi) < target {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(SpectralError::Invalid(format!(
                    "symbol {} never reaches modulus {target:e}",
                    symbol.name()
                )));
            }
        }
        let mut lo = 0.0;
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if f(m) < target {
                lo = m;
            } else {
                hi = m;
            }
        }
        let mut op = Self::symbol(symbol, hi, n)?;
        for m in maps {
            op = spectrum_image(&op, *m);
        }
        Ok(op)
    }

    pub fn from_spec(spec: &OperatorSpec) -> Result<Self, SpectralError> {
        match spec {
            OperatorSpec::List {
                eigenvalues,
                c_weights,
                maps,
            } => {
                let mut op = Self::eigenvalues(eigenvalues.clone())?;
                for m in maps {
                    op = spectrum_image(&op, *m);
                }
                match c_weights {
                    Some(w) => op.with_weights(w.clone()),
                    None => Ok(op),
                }
            }
            OperatorSpec::Symbol {
                symbol,
                x_max,
                n,
                radius,
                maps,
            } => {
                let n = n.unwrap_or(match symbol {
                    NamedSymbol::DirichletLaplacian => 50,
                    _ => DEFAULT_SAMPLES,
                });
                let mut op = match (symbol, x_max) {
                    (NamedSymbol::DirichletLaplacian, _) => Self::dirichlet_laplacian(n)?,
                    (_, Some(x)) => Self::symbol(*symbol, *x, n)?,
                    (_, None) => {
                        return Self::symbol_for_radius(*symbol, maps, radius.unwrap_or(1e8), n)
                    }
                };
                for m in maps {
                    op = spectrum_image(&op, *m);
                }
                Ok(op)
            }
        }
    }

    fn assemble(id: String, source: SpectrumSource, points: Vec<C>) -> Self {
        let blocks = bounding_blocks(&points);
        SpectralOperator {
            id,
            source,
            weights: vec![1.0; points.len()],
            points,
            blocks,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self, SpectralError> {
        if weights.len() != self.points.len() {
            return Err(SpectralError::DimensionMismatch {
                expected: self.points.len(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(SpectralError::Invalid("C weights must be strictly positive".into()));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn source(&self) -> &SpectrumSource {
        &self.source
    }

    pub fn points(&self) -> &[C] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_symbol(&self) -> bool {
        matches!(self.source, SpectrumSource::Symbol { .. })
    }

    /// Largest spectral modulus represented by the model.
    pub fn extent(&self) -> f64 {
        match &self.source {
            SpectrumSource::Symbol { .. } => {
                let n = self.points.len();
                self.points[0].norm().min(self.points[n - 1].norm())
            }
            SpectrumSource::EigenvalueList => self.points.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    /// Modulus up to which region sweeps are meaningful for this model.
    pub fn trust_radius(&self) -> f64 {
        match &self.source {
            SpectrumSource::Symbol { .. } => self.extent() / 10.0,
            SpectrumSource::EigenvalueList => self.extent().max(1.0),
        }
    }

    /// Continuous symbol value at `x`, when the model is a symbol.
    pub fn symbol_value(&self, x: f64) -> Option<C> {
        match &self.source {
            SpectrumSource::Symbol { symbol, maps, .. } => {
                Some(maps.iter().fold(symbol.eval(x), |z, m| m.apply(z)))
            }
            SpectrumSource::EigenvalueList => None,
        }
    }

    fn grid_nearest(&self, lambda: C) -> (usize, f64) {
        let mut order: Vec<(f64, usize)> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(b, (c, r))| ((lambda - c).norm() - r, b))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = (0, f64::INFINITY);
        for (lb, b) in order {
            if lb > best.1 {
                break;
            }
            let start = b * BLOCK;
            for (i, p) in self.points[start..(start + BLOCK).min(self.points.len())]
                .iter()
                .enumerate()
            {
                let d = (lambda - p).norm();
                if d < best.1 {
                    best = (start + i, d);
                }
            }
        }
        best
    }

    /// Minimum of `|λ − μ|` over the spectrum samples.
    pub fn grid_distance(&self, lambda: C) -> f64 {
        self.grid_nearest(lambda).1
    }

    /// Distance to the spectrum. Symbols are refined between grid nodes by
    /// golden-section search on the continuous symbol.
    pub fn distance(&self, lambda: C) -> f64 {
        let (i, d) = self.grid_nearest(lambda);
        let SpectrumSource::Symbol { grid, .. } = &self.source else {
            return d;
        };
        let n = grid.len();
        let f = |x: f64| (lambda - self.symbol_value(x).unwrap()).norm();
        // every node within one local segment of the best node may hide a closer point
        let slack = |j: usize| {
            let a = if j > 0 { (self.points[j] - self.points[j - 1]).norm() } else { 0.0 };
            let b = if j + 1 < n { (self.points[j + 1] - self.points[j]).norm() } else { 0.0 };
            a.max(b)
        };
        let mut best = d;
        let mut candidates = vec![i];
        if slack(i) > 0.0 {
            let reach = d + slack(i);
            for (b, (c, r)) in self.blocks.iter().enumerate() {
                if (lambda - c).norm() - r > reach {
                    continue;
                }
                let start = b * BLOCK;
                for j in start..(start + BLOCK).min(n) {
                    if j != i && (lambda - self.points[j]).norm() <= d + slack(j) {
                        candidates.push(j);
                    }
                }
            }
        }
        for j in candidates {
            let a = grid[j.saturating_sub(1)];
            let b = grid[(j + 1).min(n - 1)];
            best = best.min(golden_min(&f, a, b));
        }
        best
    }

    /// `‖R(λ:A)‖`, with the in-spectrum error below distance 1e-14.
    pub fn resolvent_norm(&self, lambda: C) -> Result<f64, SpectralError> {
        let distance = self.distance(lambda);
        if distance < IN_SPECTRUM {
            return Err(SpectralError::InSpectrum { lambda, distance });
        }
        Ok(1.0 / distance)
    }

    /// Spectrum samples lying in `region`.
    pub fn points_in(&self, region: &Region) -> Vec<C> {
        self.points
            .par_iter()
            .filter(|z| region.contains(**z))
            .copied()
            .collect()
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = f(a).min(f(b)).min(fc).min(fd);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        best = best.min(fc).min(fd);
        if (b - a).abs() <= 1e-15 * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
    }
    best
}

/// Grid-sample distance `min_j |λ − μ_j|`; errors inside the spectrum.
pub fn resolvent_distance(op: &SpectralOperator, lambda: C) -> Result<f64, SpectralError> {
    let distance = op.grid_distance(lambda);
    if distance < IN_SPECTRUM {
        return Err(SpectralError::InSpectrum { lambda, distance });
    }
    Ok(distance)
}

/// Sweeps about `n` samples of `region` (within the operator's trust radius)
/// and compares `‖R(z:A)‖` against `envelope(z)`.
pub fn region_resolvent_profile<E>(
    op: &SpectralOperator,
    region: &Region,
    envelope: E,
    n: usize,
) -> ResolventProfile
where
    E: Fn(C) -> f64 + Sync,
{
    region_resolvent_profile_within(op, region, envelope, n, op.trust_radius())
}

pub fn region_resolvent_profile_within<E>(
    op: &SpectralOperator,
    region: &Region,
    envelope: E,
    n: usize,
    radius: f64,
) -> ResolventProfile
where
    E: Fn(C) -> f64 + Sync,
{
    let inside = op.points_in(region);
    if let Some(w) = inside.iter().min_by(|a, b| a.norm().total_cmp(&b.norm())) {
        return ResolventProfile {
            subset_of_resolvent: false,
            sup_ratio: f64::INFINITY,
            witness: Some(Witness {
                lambda: *w,
                distance: 0.0,
                ratio: f64::INFINITY,
            }),
            samples: 0,
            radius,
        };
    }
    let n_theta = 64;
    let n_b = (n / 4).max(16);
    let n_r = ((n - n_b.min(n)) / n_theta).max(8);
    let samples = region.sweep_points(radius, n_r, n_theta, n_b);
    let evaluated: Vec<(C, f64, f64)> = samples
        .par_iter()
        .map(|&z| {
            let d = op.distance(z);
            (z, d, (1.0 / d) / envelope(z))
        })
        .collect();
    let mut witness: Option<Witness> = None;
    let mut sup: f64 = 0.0;
    let mut hit = false;
    for &(z, d, ratio) in &evaluated {
        if d < 1e-12 {
            if !hit || z.norm() < witness.map(|w| w.lambda.norm()).unwrap_or(f64::INFINITY) {
                witness = Some(Witness {
                    lambda: z,
                    distance: d,
                    ratio: f64::INFINITY,
                });
            }
            hit = true;
        } else if !hit && ratio > sup {
            sup = ratio;
            witness = Some(Witness {
                lambda: z,
                distance: d,
                ratio,
            });
        }
    }
    ResolventProfile {
        subset_of_resolvent: !hit,
        sup_ratio: if hit { f64::INFINITY } else { sup },
        witness,
        samples: evaluated.len(),
        radius,
    }
}

/// The companion operator `𝒜 = [[0, I], [A, 0]]` on `E²`.
#[derive(Clone, Debug)]
pub struct CompanionOperator {
    pub base: SpectralOperator,
}

impl CompanionOperator {
    pub fn new(base: SpectralOperator) -> Self {
        CompanionOperator { base }
    }

    /// Dense `2N×2N` matrix.
    pub fn matrix(&self) -> DMatrix<C> {
        let n = self.base.len();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for (j, mu) in self.base.points().iter().enumerate() {
            m[(j, n + j)] = C::new(1.0, 0.0);
            m[(n + j, j)] = *mu;
        }
        m
    }

    /// `R(λ:𝒜)(x, y)` from `R(λ²:A)`.
    pub fn resolvent_apply(&self, lambda: C, x: &[C], y: &[C]) -> Result<(Vec<C>, Vec<C>), SpectralError> {
        let n = self.base.len();
        if x.len() != n || y.len() != n {
            return Err(SpectralError::DimensionMismatch {
                expected: n,
                got: x.len().min(y.len()),
            });
        }
        let l2 = lambda * lambda;
        let mut u = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for j in 0..n {
            let mu = self.base.points()[j];
            let d = l2 - mu;
            if d.norm() < IN_SPECTRUM {
                return Err(SpectralError::InSpectrum {
                    lambda: l2,
                    distance: d.norm(),
                });
            }
            let r = 1.0 / d;
            u.push(r * (lambda * x[j] + y[j]));
            v.push(mu * r * x[j] + lambda * r * y[j]);
        }
        Ok((u, v))
    }

    /// Exact `‖R(λ:𝒜)‖` in the Euclidean product norm: the largest singular value
    /// over the decoupled `2×2` blocks.
    pub fn resolvent_norm_blocks(&self, lambda: C) -> Result<f64, SpectralError> {
        let l2 = lambda * lambda;
        let mut best: f64 = 0.0;
        for mu in self.base.points() {
            let d = l2 - mu;
            if d.norm() < IN_SPECTRUM {
                return Err(SpectralError::InSpectrum {
                    lambda: l2,
                    distance: d.norm(),
                });
            }
            let r = 1.0 / d;
            let b = nalgebra::Matrix2::new(lambda * r, r, mu * r, lambda * r);
            let s = b.singular_values();
            best = best.max(s[0].max(s[1]));
        }
        Ok(best)
    }
}

/// Checks `‖R(λ²:A)‖ ≤ ‖R(λ:𝒜)‖ ≤ (1+|λ|)√(1+|λ|²)‖R(λ²:A)‖ + 1` and the block
/// resolvent formula on `trials` random vectors. The formula residual is
/// relative to the norm of the formula's output.
pub fn companion_resolvent_check(
    comp: &CompanionOperator,
    lambda: C,
    trials: usize,
    seed: u64,
) -> Result<CompanionReport, SpectralError> {
    let n = comp.base.len();
    let base_norm = 1.0 / resolvent_distance(&comp.base, lambda * lambda)?;
    let dense = n <= DENSE_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residual: f64 = 0.0;
    let companion_norm;
    if dense {
        let shifted = DMatrix::<C>::identity(2 * n, 2 * n) * lambda - comp.matrix();
        let inv = shifted.try_inverse().ok_or(SpectralError::InSpectrum {
            lambda,
            distance: 0.0,
        })?;
        companion_norm = inv
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max);
        for _ in 0..trials {
            let xy: Vec<C> = (0..2 * n)
                .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let (u, v) = comp.resolvent_apply(lambda, &xy[..n], &xy[n..])?;
            let dense_out = &inv * nalgebra::DVector::from_vec(xy);
            let mut diff = 0.0;
            let mut scale = 0.0;
            for j in 0..n {
                diff += (dense_out[j] - u[j]).norm_sqr() + (dense_out[n + j] - v[j]).norm_sqr();
                scale += u[j].norm_sqr() + v[j].norm_sqr();
            }
            residual = residual.max((diff / scale.max(f64::MIN_POSITIVE)).sqrt());
        }
    } else {
        companion_norm = comp.resolvent_norm_blocks(lambda)?;
    }
    let l = lambda.norm();
    let upper = (1.0 + l) * (1.0 + l * l).sqrt() * base_norm + 1.0;
    Ok(CompanionReport {
        lower_ok: base_norm <= companion_norm * (1.0 + 1e-12),
        upper_ok: companion_norm <= upper * (1.0 + 1e-12),
        formula_residual: residual,
        companion_norm,
        base_norm,
        dense,
    })
}

/// Pointwise image of the spectrum under `map`. Symbols keep the map so the
/// continuous curve stays available for distance refinement.
pub fn spectrum_image(op: &SpectralOperator, map: ImageMap) -> SpectralOperator {
    let points = op.points.iter().map(|z| map.apply(*z)).collect();
    let source = match &op.source {
        SpectrumSource::EigenvalueList => SpectrumSource::EigenvalueList,
        SpectrumSource::Symbol { symbol, maps, grid } => {
            let mut maps = maps.clone();
            maps.push(map);
            SpectrumSource::Symbol {
                symbol: *symbol,
                maps,
                grid: grid.clone(),
            }
        }
    };
    let mut out = SpectralOperator::assemble(format!("{}|{}", op.id, map.tag()), source, points);
    out.weights = op.weights.clone();
    out
}
