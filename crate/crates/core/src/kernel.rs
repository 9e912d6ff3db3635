//! Convolution kernels `K` with evaluators for `K(t)`, its antiderivatives
//! `Θ, Θ₂, …` and its Laplace transform `K̃(λ)`.
//!
//! Kernels are immutable once built. Every kind exposes `integral(m, t)`, the
//! `m`-th antiderivative vanishing at 0 (`m = 0` is the kernel itself); the
//! evolution engine only ever needs `Θ` and `Θ₂` at grid nodes.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};
use libm::lgamma as ln_gamma;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::KernelError;
use crate::quad::{self, Tolerance};
use crate::rational::{ExpPoly, Rational};
use crate::special::ierfc;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const MAX_TABLE_ORDER: usize = 6;

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexInput {
    Real(f64),
    Pair(f64, f64),
}

/// Accepts `x` or `[re, im]` entries.
pub fn de_complex_list<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C>, D::Error> {
    let raw: Vec<ComplexInput> = Vec::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|v| match v {
            ComplexInput::Real(x) => C::new(x, 0.0),
            ComplexInput::Pair(re, im) => C::new(re, im),
        })
        .collect())
}

/// Serializable kernel description, `{"kind": ..., "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum KernelSpec {
    Riesz {
        alpha: f64,
    },
    Gevrey {
        delta: f64,
    },
    KHalf,
    RationalSpectrumZero {
        #[serde(deserialize_with = "de_complex_list")]
        zeros: Vec<C>,
        extra_poles: usize,
    },
    Tabulated {
        #[serde(default)]
        t: Vec<f64>,
        #[serde(default)]
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<String>,
    },
    Convolution {
        factors: Vec<KernelSpec>,
    },
    Antiderivative {
        base: Box<KernelSpec>,
        #[serde(default = "one")]
        order: usize,
    },
    Weierstrass {
        base: Box<KernelSpec>,
    },
}

/// `|K(t)| ≤ m · (1 + t^{−power}) · e^{beta·t}` for `t > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpBound {
    pub m: f64,
    pub beta: f64,
    pub power: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

#[derive(Clone, Debug)]
struct Table {
    t: Vec<f64>,
    v: Vec<f64>,
    // node_int[k][i] = k-th antiderivative at t[i], k = 0..=MAX_TABLE_ORDER
    node_int: Vec<Vec<f64>>,
}

impl Table {
    fn new(t: Vec<f64>, v: Vec<f64>) -> Result<Self, KernelError> {
        if t.len() < 2 || t.len() != v.len() {
            return Err(KernelError::InvalidParameter(format!(
                "table needs ≥ 2 matching samples (t: {}, values: {})",
                t.len(),
                v.len()
            )));
        }
        if t[0] != 0.0 {
            return Err(KernelError::InvalidParameter("table must start at t = 0".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) || v.iter().any(|x| !x.is_finite()) {
            return Err(KernelError::InvalidParameter(
                "table grid must be strictly increasing with finite values".into(),
            ));
        }
        let n = t.len();
        let mut node_int = vec![vec![0.0; n]; MAX_TABLE_ORDER + 1];
        node_int[0].clone_from(&v);
        for i in 0..n - 1 {
            let h = t[i + 1] - t[i];
            let b = (v[i + 1] - v[i]) / h;
            for m in 1..=MAX_TABLE_ORDER {
                node_int[m][i + 1] = Self::panel(&node_int, i, m, v[i], b, h);
            }
        }
        Ok(Table { t, v, node_int })
    }

    fn panel(node_int: &[Vec<f64>], i: usize, m: usize, a: f64, b: f64, u: f64) -> f64 {
        let mut acc = 0.0;
        let mut pow = 1.0;
        for j in 0..m {
            if j > 0 {
                pow *= u / j as f64;
            }
            acc += node_int[m - j][i] * pow;
        }
        let um = pow * u / m as f64;
        acc + a * um + b * um * u / (m + 1) as f64
    }

    fn integral(&self, m: usize, t: f64) -> Result<f64, KernelError> {
        if m > MAX_TABLE_ORDER {
            return Err(KernelError::InvalidParameter(format!(
                "table antiderivative order {m} above {MAX_TABLE_ORDER}"
            )));
        }
        let n = self.t.len();
        let last = self.t[n - 1];
        let (i, a, b) = if t >= last {
            (n - 1, 0.0, 0.0)
        } else {
            let i = self.t.partition_point(|&x| x <= t) - 1;
            let h = self.t[i + 1] - self.t[i];
            (i, self.v[i], (self.v[i + 1] - self.v[i]) / h)
        };
        let u = t - self.t[i];
        if m == 0 {
            return Ok(if t >= last { 0.0 } else { a + b * u });
        }
        Ok(Self::panel(&self.node_int, i, m, a, b, u))
    }

    fn laplace(&self, lambda: C) -> C {
        let mut total = ZERO;
        for i in 0..self.t.len() - 1 {
            let h = self.t[i + 1] - self.t[i];
            let a = self.v[i];
            let b = (self.v[i + 1] - a) / h;
            let z = lambda * h;
            let (e0, e1) = if z.norm() < 0.1 {
                // ∫₀ʰ e^{−λu} du and ∫₀ʰ u e^{−λu} du by series
                let mut e0 = ZERO;
                let mut e1 = ZERO;
                let mut term = C::new(1.0, 0.0);
                for k in 0..20 {
                    if k > 0 {
                        term *= -z / k as f64;
                    }
                    e0 += term * (h / (k + 1) as f64);
                    e1 += term * (h * h / (k + 2) as f64);
                }
                (e0, e1)
            } else {
                let ez = (-z).exp();
                let e0 = (1.0 - ez) / lambda;
                let e1 = (1.0 - ez * (1.0 + z)) / (lambda * lambda);
                (e0, e1)
            };
            total += (-lambda * self.t[i]).exp() * (e0 * a + e1 * b);
        }
        total
    }

    fn to_csv<W: std::io::Write>(&self, w: W) -> Result<(), KernelError> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| KernelError::Io(e.to_string());
        wr.write_record(["t", "value", "est_error"]).map_err(io)?;
        for (t, v) in self.t.iter().zip(&self.v) {
            wr.write_record([format!("{t:.17e}"), format!("{v:.17e}"), "0".to_string()])
                .map_err(io)?;
        }
        wr.flush().map_err(|e| KernelError::Io(e.to_string()))
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Riesz(f64),
    Gevrey(f64),
    KHalf,
    Rational {
        transform: Rational,
        // inverse transforms of K̃/λ^m, m = 0..=3
        antiderivs: Vec<ExpPoly>,
    },
    Table(Table),
    Conv(Box<Kernel>, Box<Kernel>),
    Anti(Box<Kernel>, usize),
    Weierstrass(Box<Kernel>),
}

#[derive(Clone, Debug)]
pub struct Kernel {
    spec: KernelSpec,
    repr: Repr,
    tol: Tolerance,
    bound: OnceLock<Option<ExpBound>>,
}

impl Kernel {
    fn build(spec: KernelSpec, repr: Repr) -> Self {
        Kernel {
            spec,
            repr,
            tol: Tolerance::default(),
            bound: OnceLock::new(),
        }
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self.bound = OnceLock::new();
        self
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// Short identifier used in reports, e.g. `riesz(1.5)`.
    pub fn label(&self) -> String {
        match &self.spec {
            KernelSpec::Riesz { alpha } => format!("riesz({alpha})"),
            KernelSpec::Gevrey { delta } => format!("gevrey({delta})"),
            KernelSpec::KHalf => "k-half".into(),
            KernelSpec::RationalSpectrumZero { zeros, extra_poles } => {
                format!("rational-spectrum-zero(n={}, q={extra_poles})", zeros.len())
            }
            KernelSpec::Tabulated { t, .. } => format!("tabulated(n={})", t.len()),
            KernelSpec::Convolution { factors } => {
                let parts: Vec<String> = factors
                    .iter()
                    .map(|f| Kernel::from_spec(f).map(|k| k.label()).unwrap_or_default())
                    .collect();
                parts.join("*")
            }
            KernelSpec::Antiderivative { base, order } => format!(
                "antiderivative^{order}({})",
                Kernel::from_spec(base).map(|k| k.label()).unwrap_or_default()
            ),
            KernelSpec::Weierstrass { base } => format!(
                "weierstrass({})",
                Kernel::from_spec(base).map(|k| k.label()).unwrap_or_default()
            ),
        }
    }

    pub fn riesz(alpha: f64) -> Result<Self, KernelError> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(KernelError::InvalidParameter(format!("riesz α = {alpha} must be > 0")));
        }
        Ok(Self::build(KernelSpec::Riesz { alpha }, Repr::Riesz(alpha)))
    }

    pub fn gevrey(delta: f64) -> Result<Self, KernelError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(KernelError::InvalidParameter(format!(
                "gevrey δ = {delta} must lie in (0, 1)"
            )));
        }
        Ok(Self::build(KernelSpec::Gevrey { delta }, Repr::Gevrey(delta)))
    }

    pub fn k_half() -> Self {
        Self::build(KernelSpec::KHalf, Repr::KHalf)
    }

    /// Kernel with `K̃(λ) = ∏(z_n − λ)/(z_n + λ) · (1 + λ)^{−q}`.
    pub fn spectrum_zero(zeros: &[C], extra_poles: usize) -> Result<Self, KernelError> {
        if let Some(z) = zeros.iter().find(|z| !(z.re > 0.0)) {
            return Err(KernelError::NonPositiveZero(*z));
        }
        if extra_poles == 0 {
            return Err(KernelError::InvalidParameter(
                "extra_poles must be ≥ 1 for a strictly proper transform".into(),
            ));
        }
        let sign = if zeros.len() % 2 == 0 { 1.0 } else { -1.0 };
        let mut poles: Vec<C> = zeros.iter().map(|z| -z).collect();
        poles.extend(std::iter::repeat(C::new(-1.0, 0.0)).take(extra_poles));
        let transform = Rational::new(C::new(sign, 0.0), zeros.to_vec(), poles);
        let spec = KernelSpec::RationalSpectrumZero {
            zeros: zeros.to_vec(),
            extra_poles,
        };
        Ok(Self::from_rational(spec, transform))
    }

    fn from_rational(spec: KernelSpec, transform: Rational) -> Self {
        let antiderivs = (0..=3).map(|m| transform.over_lambda_pow(m).invert()).collect();
        Self::build(
            spec,
            Repr::Rational {
                transform,
                antiderivs,
            },
        )
    }

    pub fn tabulated(t: Vec<f64>, values: Vec<f64>) -> Result<Self, KernelError> {
        let table = Table::new(t.clone(), values.clone())?;
        Ok(Self::build(
            KernelSpec::Tabulated { t, values, csv: None },
            Repr::Table(table),
        ))
    }

    /// Samples `k` on `t_i = i·t_max/n` into a piecewise-linear table.
    pub fn sample(k: &Kernel, t_max: f64, n: usize) -> Result<Self, KernelError> {
        let t: Vec<f64> = (0..=n).map(|i| t_max * i as f64 / n as f64).collect();
        let v = t
            .par_iter()
            .map(|&x| k.evaluate(x).map(|z| z.re))
            .collect::<Result<Vec<_>, _>>()?;
        Self::tabulated(t, v)
    }

    pub fn load_csv(path: &Path) -> Result<Self, KernelError> {
        let io = |e: csv::Error| KernelError::Io(e.to_string());
        let mut rd = csv::Reader::from_path(path).map_err(io)?;
        let headers = rd.headers().map_err(io)?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| KernelError::Io(format!("missing column {name}")))
        };
        let (it, iv) = (col("t")?, col("value")?);
        let (mut t, mut v) = (Vec::new(), Vec::new());
        for rec in rd.records() {
            let rec = rec.map_err(io)?;
            let parse = |i: usize| {
                rec.get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| KernelError::Io(format!("bad number in row {rec:?}")))
            };
            t.push(parse(it)?);
            v.push(parse(iv)?);
        }
        Self::tabulated(t, v)
    }

    pub fn save_csv(&self, path: &Path) -> Result<(), KernelError> {
        let Repr::Table(table) = &self.repr else {
            return Err(KernelError::InvalidParameter(
                "only tabulated kernels export as CSV".into(),
            ));
        };
        let file = std::fs::File::create(path).map_err(|e| KernelError::Io(e.to_string()))?;
        table.to_csv(file)
    }

    pub fn convolve(a: &Kernel, b: &Kernel) -> Kernel {
        let spec = KernelSpec::Convolution {
            factors: vec![a.spec.clone(), b.spec.clone()],
        };
        let tol = Tolerance {
            abs: a.tol.abs.min(b.tol.abs),
            rel: a.tol.rel.min(b.tol.rel),
        };
        let as_rational = |k: &Kernel| -> Option<Rational> {
            match &k.repr {
                Repr::Rational { transform, .. } => Some(transform.clone()),
                Repr::Riesz(al) if al.fract() == 0.0 && *al <= 16.0 => {
                    Some(Rational::constant(C::new(1.0, 0.0)).over_lambda_pow(*al as usize))
                }
                _ => None,
            }
        };
        let mut out = match (&a.repr, &b.repr) {
            (Repr::Riesz(x), Repr::Riesz(y)) => Self::build(spec, Repr::Riesz(x + y)),
            (Repr::Rational { .. }, _) | (_, Repr::Rational { .. })
                if as_rational(a).is_some() && as_rational(b).is_some() =>
            {
                let r = as_rational(a).unwrap().mul(&as_rational(b).unwrap());
                Self::from_rational(spec, r)
            }
            _ => Self::build(spec, Repr::Conv(Box::new(a.clone()), Box::new(b.clone()))),
        };
        out.tol = tol;
        out
    }

    /// `K^{∗m}` for `m ≥ 1`.
    pub fn power(k: &Kernel, m: usize) -> Result<Kernel, KernelError> {
        if m == 0 {
            return Err(KernelError::InvalidParameter("convolution power must be ≥ 1".into()));
        }
        let mut out = k.clone();
        for _ in 1..m {
            out = Self::convolve(&out, k);
        }
        out.spec = KernelSpec::Convolution {
            factors: vec![k.spec.clone(); m],
        };
        Ok(out)
    }

    /// The `n`-th antiderivative of `k`, as a kernel.
    pub fn antiderivative(k: &Kernel, order: usize) -> Kernel {
        let spec = KernelSpec::Antiderivative {
            base: Box::new(k.spec.clone()),
            order,
        };
        let mut out = match &k.repr {
            Repr::Riesz(a) => Self::build(spec, Repr::Riesz(a + order as f64)),
            Repr::Rational { transform, .. } => {
                Self::from_rational(spec, transform.over_lambda_pow(order))
            }
            Repr::Anti(base, n) => Self::build(spec, Repr::Anti(base.clone(), n + order)),
            _ => Self::build(spec, Repr::Anti(Box::new(k.clone()), order)),
        };
        out.tol = k.tol;
        out
    }

    /// `K₁(t) = ∫₀^∞ s e^{−s²/4t} K(s) ds / (2√π t^{3/2})`, with `K̃₁(λ) = K̃(√λ)`.
    pub fn weierstrass(k: &Kernel) -> Result<Kernel, KernelError> {
        match k.exp_bound() {
            Some(b) if b.power < 2.0 => {}
            _ => return Err(KernelError::UnboundedKernel),
        }
        let mut out = Self::build(
            KernelSpec::Weierstrass {
                base: Box::new(k.spec.clone()),
            },
            Repr::Weierstrass(Box::new(k.clone())),
        );
        out.tol = k.tol;
        Ok(out)
    }

    pub fn from_spec(spec: &KernelSpec) -> Result<Kernel, KernelError> {
        match spec {
            KernelSpec::Riesz { alpha } => Self::riesz(*alpha),
            KernelSpec::Gevrey { delta } => Self::gevrey(*delta),
            KernelSpec::KHalf => Ok(Self::k_half()),
            KernelSpec::RationalSpectrumZero { zeros, extra_poles } => {
                Self::spectrum_zero(zeros, *extra_poles)
            }
            KernelSpec::Tabulated { t, values, csv } => match csv {
                Some(path) => {
                    let mut k = Self::load_csv(Path::new(path))?;
                    k.spec = spec.clone();
                    Ok(k)
                }
                None => Self::tabulated(t.clone(), values.clone()),
            },
            KernelSpec::Convolution { factors } => {
                let mut it = factors.iter();
                let first = it.next().ok_or_else(|| {
                    KernelError::InvalidParameter("convolution needs at least one factor".into())
                })?;
                let mut acc = Self::from_spec(first)?;
                for f in it {
                    acc = Self::convolve(&acc, &Self::from_spec(f)?);
                }
                acc.spec = spec.clone();
                Ok(acc)
            }
            KernelSpec::Antiderivative { base, order } => {
                let mut k = Self::antiderivative(&Self::from_spec(base)?, *order);
                k.spec = spec.clone();
                Ok(k)
            }
            KernelSpec::Weierstrass { base } => Self::weierstrass(&Self::from_spec(base)?),
        }
    }

    /// Rational transform when the kernel is a finite exponential sum.
    pub fn rational_transform(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Rational { transform, .. } => Some(transform),
            _ => None,
        }
    }

    /// Abscissa `abs(K)`: `K̃` is defined for `Re λ` strictly greater.
    pub fn abscissa(&self) -> f64 {
        match &self.repr {
            Repr::Riesz(_) | Repr::Gevrey(_) | Repr::KHalf => 0.0,
            Repr::Rational { transform, .. } => transform.max_pole_re(),
            Repr::Table(_) => f64::NEG_INFINITY,
            Repr::Conv(a, b) => a.abscissa().max(b.abscissa()),
            Repr::Anti(k, _) => k.abscissa().max(0.0),
            Repr::Weierstrass(k) => k.abscissa().max(0.0).powi(2),
        }
    }

    /// Exponential bound `|K(t)| ≤ M(1 + t^{−p})e^{βt}` where one is known.
    pub fn exp_bound(&self) -> Option<ExpBound> {
        *self.bound.get_or_init(|| self.compute_bound())
    }

    fn compute_bound(&self) -> Option<ExpBound> {
        match &self.repr {
            Repr::Riesz(a) => {
                let a = *a;
                if a < 1.0 {
                    Some(ExpBound {
                        m: (-ln_gamma(a)).exp(),
                        beta: 0.0,
                        power: 1.0 - a,
                    })
                } else if a == 1.0 {
                    Some(ExpBound {
                        m: 1.0,
                        beta: 0.0,
                        power: 0.0,
                    })
                } else {
                    // sup_t t^{a−1} e^{−t} = ((a−1)/e)^{a−1}
                    let ln_m = (a - 1.0) * ((a - 1.0).ln() - 1.0) - ln_gamma(a);
                    Some(ExpBound {
                        m: ln_m.exp(),
                        beta: 1.0,
                        power: 0.0,
                    })
                }
            }
            Repr::KHalf => Some(ExpBound {
                m: k_half_value(1.0 / 6.0),
                beta: 0.0,
                power: 0.0,
            }),
            Repr::Gevrey(d) => {
                let c = (d * PI / 2.0).cos();
                Some(ExpBound {
                    m: (ln_gamma(1.0 + 1.0 / d)).exp() / (PI * c.powf(1.0 / d)),
                    beta: 0.0,
                    power: 0.0,
                })
            }
            Repr::Rational { transform, .. } => {
                let lead = transform.max_pole_re();
                let multiple = transform
                    .poles
                    .iter()
                    .any(|(p, m)| *m > 1 && (p.re - lead).abs() < 1e-12);
                let beta = if multiple { lead + 0.25 } else { lead };
                self.fit_bound(beta, 0.0, 40.0)
            }
            Repr::Table(t) => Some(ExpBound {
                m: t.v.iter().fold(0.0f64, |a, b| a.max(b.abs())),
                beta: 0.0,
                power: 0.0,
            }),
            Repr::Conv(a, b) => {
                let (ba, bb) = (a.exp_bound()?, b.exp_bound()?);
                if ba.power >= 1.0 || bb.power >= 1.0 {
                    return None;
                }
                let power = (ba.power + bb.power - 1.0).max(0.0);
                self.fit_bound(ba.beta.max(bb.beta) + 0.5, power, 30.0)
            }
            Repr::Anti(k, n) => {
                let b = k.exp_bound()?;
                let beta = if b.beta < 0.0 { 0.0 } else { b.beta + 0.5 };
                let power = (b.power - *n as f64).max(0.0);
                self.fit_bound(beta, power, 30.0)
            }
            Repr::Weierstrass(k) => {
                let b = k.exp_bound()?;
                let beta = b.beta.max(0.0).powi(2) + 0.5;
                self.fit_bound(beta, 0.5 * (1.0 + b.power), 30.0)
            }
        }
    }

    /// Smallest `M` with `|K(t)| ≤ M(1 + t^{−p})e^{βt}` on a log grid over `[1e-3, t_max]`, padded by 10%.
    pub fn fit_bound(&self, beta: f64, power: f64, t_max: f64) -> Option<ExpBound> {
        let ts: Vec<f64> = (0..=200)
            .map(|i| 1e-3 * (t_max / 1e-3).powf(i as f64 / 200.0))
            .collect();
        let m = ts
            .par_iter()
            .map(|&t| {
                self.evaluate(t)
                    .map(|v| v.norm() / ((1.0 + t.powf(-power)) * (beta * t).exp()))
            })
            .collect::<Result<Vec<f64>, _>>()
            .ok()?
            .into_iter()
            .fold(0.0, f64::max);
        m.is_finite().then_some(ExpBound {
            m: 1.1 * m,
            beta,
            power,
        })
    }

    pub fn evaluate(&self, t: f64) -> Result<C, KernelError> {
        self.integral(0, t)
    }

    pub fn theta(&self, t: f64) -> Result<C, KernelError> {
        self.integral(1, t)
    }

    /// `m`-th antiderivative of `K` vanishing at 0 (`m = 0` gives `K` itself).
    pub fn integral(&self, m: usize, t: f64) -> Result<C, KernelError> {
        if t < 0.0 || t.is_nan() {
            return Err(KernelError::NegativeTime(t));
        }
        match &self.repr {
            Repr::Riesz(a) => Ok(C::new(riesz_integral(*a, m, t), 0.0)),
            Repr::KHalf => Ok(C::new(k_half_integral(m, t), 0.0)),
            Repr::Gevrey(d) => Ok(C::new(bromwich_gevrey(*d, m, &[t], self.tol)?[0], 0.0)),
            Repr::Rational {
                transform,
                antiderivs,
            } => Ok(match antiderivs.get(m) {
                Some(f) => f.eval(t),
                None => transform.over_lambda_pow(m).invert().eval(t),
            }),
            Repr::Table(tab) => Ok(C::new(tab.integral(m, t)?, 0.0)),
            Repr::Anti(k, n) => k.integral(m + n, t),
            Repr::Conv(a, b) => self.conv_integral(a, b, m, t),
            Repr::Weierstrass(k) => self.weierstrass_integral(k, m, t),
        }
    }

    /// `integral(m, t)` at many times; parallel over `t`.
    pub fn integral_many(&self, m: usize, ts: &[f64]) -> Result<Vec<C>, KernelError> {
        if let Repr::Gevrey(d) = &self.repr {
            if let Some(bad) = ts.iter().find(|t| !(**t >= 0.0)) {
                return Err(KernelError::NegativeTime(*bad));
            }
            return Ok(bromwich_gevrey(*d, m, ts, self.tol)?
                .into_iter()
                .map(|v| C::new(v, 0.0))
                .collect());
        }
        ts.par_iter().map(|&t| self.integral(m, t)).collect()
    }

    fn conv_integral(&self, a: &Kernel, b: &Kernel, m: usize, t: f64) -> Result<C, KernelError> {
        if t == 0.0 {
            return Ok(ZERO);
        }
        // (a ∗ b)^{(−m)} = a ∗ b^{(−m)}
        let f = |s: f64| -> C {
            match (a.evaluate(t - s), b.integral(m, s)) {
                (Ok(x), Ok(y)) => x * y,
                _ => C::new(f64::NAN, 0.0),
            }
        };
        let est = quad::integrate_with_breaks(f, 0.0, t, &[0.5 * t], self.inner_tol())?;
        check_finite(est.value)
    }

    fn inner_tol(&self) -> Tolerance {
        Tolerance {
            abs: self.tol.abs * 1e-2,
            rel: self.tol.rel * 1e-2,
        }
    }

    fn weierstrass_integral(&self, k: &Kernel, m: usize, t: f64) -> Result<C, KernelError> {
        if t == 0.0 {
            if m > 0 {
                return Ok(ZERO);
            }
            let k0 = k.evaluate(0.0)?;
            return Ok(if k0.norm() == 0.0 {
                ZERO
            } else {
                C::new(f64::INFINITY, 0.0)
            });
        }
        // 2√t (4t)^{m−1} ∫₀^∞ K(2√t r) i^{2m−2}erfc(r) dr
        let st = t.sqrt();
        let order = 2 * m as i32 - 2;
        let growth = k.abscissa().max(0.0);
        let r_max = growth * st + 8.5;
        let f = |r: f64| -> C {
            match k.evaluate(2.0 * st * r) {
                Ok(v) => v * ierfc(order, r),
                Err(_) => C::new(f64::NAN, 0.0),
            }
        };
        let pre = 2.0 * st * (4.0 * t).powi(m as i32 - 1);
        let tol = Tolerance {
            abs: self.inner_tol().abs / pre.max(1e-300),
            rel: self.inner_tol().rel,
        };
        let est = quad::integrate_with_breaks(f, 0.0, r_max, &[1.0, 3.0], tol)?;
        check_finite(est.value * pre)
    }

    /// `K̃(λ)`, analytic where the kind provides it.
    pub fn laplace(&self, lambda: C) -> Result<C, KernelError> {
        let abscissa = self.abscissa();
        if !(lambda.re > abscissa) {
            return Err(KernelError::OutOfHalfPlane {
                re: lambda.re,
                abscissa,
            });
        }
        match &self.repr {
            Repr::Riesz(a) => Ok((-*a * lambda.ln()).exp()),
            Repr::Gevrey(d) => Ok((-lambda.powf(*d)).exp()),
            Repr::KHalf => Ok((-lambda.sqrt()).exp()),
            Repr::Rational { transform, .. } => Ok(transform.eval(lambda)),
            Repr::Table(t) => Ok(t.laplace(lambda)),
            Repr::Conv(a, b) => Ok(a.laplace(lambda)? * b.laplace(lambda)?),
            Repr::Anti(k, n) => Ok(k.laplace(lambda)? / lambda.powu(*n as u32)),
            Repr::Weierstrass(k) => self.weierstrass_laplace(k, lambda),
        }
    }

    /// Analytic continuation of `K̃` off the negative real axis, for kernels
    /// whose transform has a closed form (principal branches).
    pub fn laplace_continued(&self, lambda: C) -> Result<C, KernelError> {
        if lambda.re > self.abscissa() {
            return self.laplace(lambda);
        }
        if lambda.im == 0.0 && lambda.re <= 0.0 {
            return Err(KernelError::OutOfHalfPlane {
                re: lambda.re,
                abscissa: self.abscissa(),
            });
        }
        match &self.repr {
            Repr::Riesz(a) => Ok((-*a * lambda.ln()).exp()),
            Repr::Gevrey(d) => Ok((-lambda.powf(*d)).exp()),
            Repr::KHalf => Ok((-lambda.sqrt()).exp()),
            Repr::Rational { transform, .. } => Ok(transform.eval(lambda)),
            Repr::Conv(a, b) => Ok(a.laplace_continued(lambda)? * b.laplace_continued(lambda)?),
            Repr::Anti(k, n) => Ok(k.laplace_continued(lambda)? / lambda.powu(*n as u32)),
            Repr::Table(_) | Repr::Weierstrass(_) => Err(KernelError::OutOfHalfPlane {
                re: lambda.re,
                abscissa: self.abscissa(),
            }),
        }
    }

    /// `K̃₁(λ) = ∫₀^∞ e^{−λu²} (4/√π) ∫₀^∞ r e^{−r²} K(2ur) dr du`, i.e. the
    /// Laplace integral of `K₁` after `t = u²`, computed by nested quadrature.
    fn weierstrass_laplace(&self, k: &Kernel, lambda: C) -> Result<C, KernelError> {
        let growth = k.abscissa().max(0.0);
        let gap = lambda.re - growth * growth;
        let u_max = (60.0 / gap).sqrt().max(1.0);
        let tol = self.inner_tol();
        let inner = |u: f64| -> C {
            let r_max = growth * u + 8.5;
            let g = |r: f64| match k.evaluate(2.0 * u * r) {
                Ok(v) => v * (r * (-r * r).exp()),
                Err(_) => C::new(f64::NAN, 0.0),
            };
            match quad::integrate_with_breaks(g, 0.0, r_max, &[1.0, 3.0], tol) {
                Ok(e) => e.value * (4.0 / PI.sqrt()),
                Err(_) => C::new(f64::NAN, 0.0),
            }
        };
        let outer = |u: f64| inner(u) * (-lambda * u * u).exp();
        let breaks: Vec<f64> = (1..8).map(|i| u_max * i as f64 / 8.0).collect();
        let est = quad::integrate_with_breaks(outer, 0.0, u_max, &breaks, tol)?;
        check_finite(est.value)
    }

    /// Numeric Laplace transform `λ∫₀^T e^{−λt}Θ(t)dt`, independent of the
    /// analytic formulas; `T` is chosen from the exponential bound.
    pub fn laplace_numeric(&self, lambda: C) -> Result<quad::Estimate, KernelError> {
        let b = self.exp_bound().ok_or(KernelError::UnboundedKernel)?;
        let rate = b.beta.max(self.abscissa()).max(0.0);
        let gap = lambda.re - rate;
        if !(gap > 0.0) {
            return Err(KernelError::OutOfHalfPlane {
                re: lambda.re,
                abscissa: rate,
            });
        }
        let t_max = ((40.0 + (1.0 + b.m).ln()) / gap).max(1.0) * 1.5;
        let f = |t: f64| match self.theta(t) {
            Ok(v) => v * (-lambda * t).exp(),
            Err(_) => C::new(f64::NAN, 0.0),
        };
        let breaks: Vec<f64> = (1..16).map(|i| t_max * (i as f64 / 16.0).powi(2)).collect();
        let est = quad::integrate_with_breaks(f, 0.0, t_max, &breaks, self.inner_tol())?;
        check_finite(est.value)?;
        Ok(quad::Estimate {
            value: est.value * lambda,
            error: est.error * lambda.norm(),
        })
    }

    /// Titchmarsh test `0 ∈ supp K`.
    pub fn titchmarsh_check(&self) -> TitchmarshReport {
        let analytic = |v: Verdict, note: &str| TitchmarshReport {
            verdict: v,
            analytic: true,
            evidence: Vec::new(),
            note: note.to_string(),
        };
        match &self.repr {
            Repr::Riesz(_) => analytic(Verdict::True, "t^{α−1} > 0 near 0"),
            Repr::Gevrey(_) => analytic(Verdict::True, "one-sided stable density, positive on (0,∞)"),
            Repr::KHalf => analytic(Verdict::True, "closed form positive on (0,∞)"),
            Repr::Rational { .. } => analytic(Verdict::True, "nonzero exponential sum is analytic"),
            Repr::Weierstrass(k) => {
                let inner = k.titchmarsh_check();
                TitchmarshReport {
                    verdict: if inner.verdict == Verdict::False && inner.evidence.is_empty() {
                        Verdict::False
                    } else {
                        Verdict::True
                    },
                    analytic: true,
                    evidence: Vec::new(),
                    note: "Gaussian transform of a nonzero kernel is positive-analytic".into(),
                }
            }
            Repr::Anti(k, _) => k.titchmarsh_check(),
            Repr::Conv(a, b) => {
                let (ra, rb) = (a.titchmarsh_check(), b.titchmarsh_check());
                let verdict = match (ra.verdict, rb.verdict) {
                    (Verdict::True, Verdict::True) => Verdict::True,
                    (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
                    _ => Verdict::Inconclusive,
                };
                TitchmarshReport {
                    verdict,
                    analytic: ra.analytic && rb.analytic,
                    evidence: Vec::new(),
                    note: "support of a convolution starts at the sum of the factor supports".into(),
                }
            }
            Repr::Table(tab) => {
                let last = *tab.t.last().unwrap();
                let spacing = tab.t[1] - tab.t[0];
                let mass = |eps: f64| -> f64 {
                    let mut acc = 0.0;
                    for i in 0..tab.t.len() - 1 {
                        let (a, b) = (tab.t[i], tab.t[i + 1].min(eps));
                        if b <= a {
                            break;
                        }
                        let va = tab.v[i].abs();
                        let vb = tab.integral(0, b).unwrap_or(0.0).abs();
                        acc += 0.5 * (va + vb) * (b - a);
                    }
                    acc
                };
                let mut evidence = Vec::new();
                let mut eps = last;
                let mut verdict = Verdict::True;
                while eps >= spacing * 0.999 {
                    let w = mass(eps);
                    evidence.push((eps, w));
                    if w == 0.0 {
                        verdict = Verdict::False;
                        break;
                    }
                    eps *= 0.5;
                }
                if verdict == Verdict::True {
                    if let Some(&(_, w)) = evidence.last() {
                        if w < 1e-280 {
                            verdict = Verdict::Inconclusive;
                        }
                    }
                }
                TitchmarshReport {
                    verdict,
                    analytic: false,
                    evidence,
                    note: "mass of |K| on [0, ε) for halving ε down to the grid spacing".into(),
                }
            }
        }
    }

    /// Non-vanishing of `K̃` on the sample points with `Re λ > max(β, abs(K))`.
    pub fn p2_check(&self, beta: f64, grid: &[C], tol: f64) -> P2Report {
        let floor = beta.max(self.abscissa());
        let mut witnesses = Vec::new();
        let mut skipped = 0;
        let mut min_modulus = f64::INFINITY;
        for &l in grid {
            if !(l.re > floor) {
                skipped += 1;
                continue;
            }
            match self.laplace(l) {
                Ok(v) => {
                    min_modulus = min_modulus.min(v.norm());
                    if v.norm() < tol {
                        witnesses.push((l, v.norm()));
                    }
                }
                Err(_) => skipped += 1,
            }
        }
        P2Report {
            zero_free: witnesses.is_empty(),
            witnesses,
            min_modulus,
            skipped,
        }
    }
}

fn check_finite(v: C) -> Result<C, KernelError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(KernelError::Quadrature(crate::error::QuadError::NonConvergence {
            estimate: f64::INFINITY,
            tolerance: 0.0,
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TitchmarshReport {
    pub verdict: Verdict,
    pub analytic: bool,
    /// `(ε, ∫₀^ε |K|)` trace for tabulated kernels.
    pub evidence: Vec<(f64, f64)>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct P2Report {
    pub zero_free: bool,
    pub witnesses: Vec<(C, f64)>,
    pub min_modulus: f64,
    pub skipped: usize,
}

fn riesz_integral(a: f64, m: usize, t: f64) -> f64 {
    let p = a + m as f64;
    if t == 0.0 {
        return if p > 1.0 {
            0.0
        } else if p == 1.0 {
            1.0
        } else {
            f64::INFINITY
        };
    }
    if p.fract() == 0.0 && p <= 21.0 {
        let fact: f64 = (1..p as u64).map(|k| k as f64).product();
        return t.powi(p as i32 - 1) / fact;
    }
    ((p - 1.0) * t.ln() - ln_gamma(p)).exp()
}

fn k_half_value(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    (-0.25 / t).exp() / (2.0 * (PI * t * t * t).sqrt())
}

/// `m`-th antiderivative of `K_{1/2}`: `(4t)^{m−1} i^{2m−2}erfc(1/(2√t))`.
fn k_half_integral(m: usize, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if m == 0 {
        return k_half_value(t);
    }
    (4.0 * t).powi(m as i32 - 1) * ierfc(2 * m as i32 - 2, 0.5 / t.sqrt())
}

/// Bromwich inversion of `e^{−λ^δ}/λ^m` by the trapezoid rule.
///
/// Times up to 10 use the line `Re λ = 1`. Later times are grouped in
/// dyadic bands `(10·2^{j−1}, 10·2^j]` that use `Re λ = r = 2^{−j}`, so the
/// roundoff factor `e^{rt}` stays below `e^{10}`. The step gives the aliasing
/// error `f(t + 2π/h)e^{−2πr/h}` with period `2π/h > t`, and the truncation
/// `Y` is doubled until `e^{rt − cos(δπ/2)Y^δ}` is negligible.
fn bromwich_gevrey(delta: f64, m: usize, ts: &[f64], tol: Tolerance) -> Result<Vec<f64>, KernelError> {
    let band = |t: f64| if t <= 10.0 { 0 } else { (t / 10.0).log2().ceil() as i32 };
    let mut out = vec![0.0; ts.len()];
    let mut bands: Vec<i32> = ts.iter().map(|&t| band(t)).collect();
    bands.sort_unstable();
    bands.dedup();
    for j in bands {
        let idx: Vec<usize> = (0..ts.len()).filter(|&i| band(ts[i]) == j).collect();
        let sub: Vec<f64> = idx.iter().map(|&i| ts[i]).collect();
        let vals = bromwich_line(delta, m, 0.5f64.powi(j), &sub, tol)?;
        for (i, v) in idx.into_iter().zip(vals) {
            out[i] = v;
        }
    }
    Ok(out)
}

fn bromwich_line(delta: f64, m: usize, r: f64, ts: &[f64], tol: Tolerance) -> Result<Vec<f64>, KernelError> {
    let t_max = ts.iter().copied().fold(0.0, f64::max);
    let period = (42.0 + 2.0 * m as f64) / r;
    let h = 2.0 * PI / period;
    let c = (delta * PI / 2.0).cos();
    let target = tol.abs.min(1e-12).ln() - 12.0;
    let tail = |y: f64| r * t_max - c * y.powf(delta) + (1.0 - delta).max(0.0) * y.ln()
        - (c * delta).ln()
        - m as f64 * y.ln();
    let mut y_max: f64 = 64.0;
    while tail(y_max) > target {
        y_max *= 2.0;
        if y_max > 1e9 {
            return Err(KernelError::Quadrature(crate::error::QuadError::NonConvergence {
                estimate: tail(y_max).exp(),
                tolerance: tol.abs,
            }));
        }
    }
    let n = (y_max / h).ceil() as usize;
    let samples: Vec<C> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let lam = C::new(r, k as f64 * h);
            (-lam.powf(delta)).exp() / lam.powu(m as u32)
        })
        .collect();
    Ok(ts
        .par_iter()
        .map(|&t| {
            if t == 0.0 {
                return 0.0;
            }
            let mut acc = samples[0] * 0.5;
            let step = C::new(0.0, h * t).exp();
            let mut rot = C::new(1.0, 0.0);
            for (k, s) in samples.iter().enumerate().skip(1) {
                if k % 256 == 0 {
                    rot = C::new(0.0, k as f64 * h * t).exp();
                } else {
                    rot *= step;
                }
                acc += s * rot;
            }
            (r * t).exp() * h / PI * acc.re
        })
        .collect())
}

/// Summability report for `Σ (1 − |√λ_n − 1|/(√λ_n + 1))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeReport {
    pub n: usize,
    pub partial_sum: f64,
    /// Integral-test estimate of the tail beyond `n` (0 when the terms underflow).
    pub tail_estimate: f64,
    /// Width of the integral-test bracket for the tail.
    pub tail_bracket: f64,
    pub estimate: f64,
    /// Local decay exponent `p` of the terms, `a_n ≈ n^{−p}`.
    pub decay_exponent: f64,
    pub verdict: crate::weights::Convergence,
}

/// Blaschke-type summability test for `√λ_n = sqrt_eig(n)`, `n ≥ 1`.
pub fn blaschke_summability<F: Fn(usize) -> f64 + Sync>(sqrt_eig: F, n: usize) -> BlaschkeReport {
    use crate::weights::Convergence;
    let term = |k: usize| {
        let x = sqrt_eig(k);
        if x.is_infinite() {
            0.0
        } else {
            1.0 - (x - 1.0).abs() / (x + 1.0)
        }
    };
    let terms: Vec<f64> = (1..=n).into_par_iter().map(term).collect();
    // smallest terms first
    let partial_sum: f64 = terms.iter().rev().sum();
    let a_n = terms[n - 1];
    let a_prev = terms[n.saturating_sub(2)];
    let a_half = terms[(n / 2).max(1) - 1];
    let (verdict, tail_estimate, tail_bracket, p) = if a_n == 0.0 {
        (Convergence::Converges, 0.0, 0.0, f64::INFINITY)
    } else if a_n / a_prev < 0.99 {
        let q = a_n / a_prev;
        let tail = a_n * q / (1.0 - q);
        (Convergence::Converges, tail, tail, f64::INFINITY)
    } else {
        let p = (a_half / a_n).ln() / ((n as f64) / ((n / 2).max(1) as f64)).ln();
        let nf = n as f64;
        if p >= 1.05 {
            // Σ_{k>n} a_k between ∫_{n+1}^∞ and ∫_n^∞ of a_n (n/x)^p
            let upper = a_n * nf / (p - 1.0);
            let lower = a_n * nf.powf(p) * (nf + 1.0).powf(1.0 - p) / (p - 1.0);
            (
                Convergence::Converges,
                0.5 * (upper + lower),
                upper - lower,
                p,
            )
        } else if p <= 1.01 {
            (Convergence::Diverges, f64::INFINITY, f64::INFINITY, p)
        } else {
            (Convergence::Inconclusive, f64::NAN, f64::NAN, p)
        }
    };
    BlaschkeReport {
        n,
        partial_sum,
        tail_estimate,
        tail_bracket,
        estimate: partial_sum + tail_estimate,
        decay_exponent: p,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::erfc;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn k_half_closed_form_and_theta() {
        let k = Kernel::k_half();
        let v = k.evaluate(1.0).unwrap().re;
        assert!((v - (-0.25f64).exp() / (2.0 * PI.sqrt())).abs() < 1e-15);
        assert_eq!(k.evaluate(0.0).unwrap(), ZERO);
        let th = k.theta(1.0).unwrap().re;
        assert!((th - erfc(0.5)).abs() < 1e-14);
        let q = quad::integrate(|s| r(k_half_value(s)), 0.0, 1.0, Tolerance::tight()).unwrap();
        assert!((q.value.re - th).abs() < 1e-11);
    }

    #[test]
    fn k_half_second_antiderivative_by_quadrature() {
        let k = Kernel::k_half();
        for &t in &[0.3, 1.0, 4.0] {
            let q = quad::integrate(|s| k.theta(s).unwrap(), 0.0, t, Tolerance::tight()).unwrap();
            assert!((q.value - k.integral(2, t).unwrap()).norm() < 1e-12);
            let q3 = quad::integrate(|s| k.integral(2, s).unwrap(), 0.0, t, Tolerance::tight())
                .unwrap();
            assert!((q3.value - k.integral(3, t).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn riesz_basics() {
        let k = Kernel::riesz(1.0).unwrap();
        assert_eq!(k.evaluate(7.0).unwrap(), r(1.0));
        assert!((k.theta(3.0).unwrap().re - 3.0).abs() < 1e-14);
        assert!((k.laplace(r(1.0)).unwrap() - r(1.0)).norm() < 1e-15);
        let k = Kernel::riesz(2.5).unwrap();
        let exact = 2f64.powf(2.5) / libm::tgamma(3.5);
        assert!((k.theta(2.0).unwrap().re - exact).abs() < 1e-13);
        assert!(Kernel::riesz(0.0).is_err());
    }

    #[test]
    fn gevrey_half_matches_k_half() {
        let g = Kernel::gevrey(0.5).unwrap();
        let ts: Vec<f64> = (0..50).map(|i| 0.1 + 4.9 * i as f64 / 49.0).collect();
        let vals = g.integral_many(0, &ts).unwrap();
        for (t, v) in ts.iter().zip(vals) {
            let exact = k_half_value(*t);
            assert!((v.re - exact).abs() <= 1e-6 * exact, "t={t}: {} vs {exact}", v.re);
        }
        let th = g.integral_many(1, &[0.5, 2.0]).unwrap();
        assert!((th[0].re - erfc(0.5 / 0.5f64.sqrt())).abs() < 1e-9);
        assert!((th[1].re - erfc(0.5 / 2f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn gevrey_rejects_bad_delta() {
        assert!(Kernel::gevrey(1.0).is_err());
        assert!(Kernel::gevrey(0.0).is_err());
    }

    #[test]
    fn laplace_branch_normalization() {
        let g = Kernel::gevrey(0.3).unwrap();
        assert!((g.laplace(r(1.0)).unwrap() - r((-1.0f64).exp())).norm() < 1e-15);
        assert!((Kernel::k_half().laplace(r(1.0)).unwrap().re - (-1.0f64).exp()).abs() < 1e-15);
        assert!(matches!(
            Kernel::k_half().laplace(C::new(-0.5, 1.0)),
            Err(KernelError::OutOfHalfPlane { .. })
        ));
    }

    #[test]
    fn negative_time_rejected() {
        assert!(matches!(
            Kernel::k_half().evaluate(-1.0),
            Err(KernelError::NegativeTime(_))
        ));
    }

    #[test]
    fn riesz_convolution_simplifies() {
        let k = Kernel::convolve(&Kernel::riesz(0.5).unwrap(), &Kernel::riesz(1.5).unwrap());
        assert!(matches!(k.repr, Repr::Riesz(a) if (a - 2.0).abs() < 1e-15));
        let k3 = Kernel::power(&Kernel::riesz(1.0).unwrap(), 3).unwrap();
        assert!((k3.evaluate(2.0).unwrap().re - 2.0).abs() < 1e-14);
        let l = C::new(1.3, 0.4);
        assert!((k3.laplace(l).unwrap() - l.powi(-3)).norm() < 1e-14);
    }

    #[test]
    fn numeric_convolution_of_k_half() {
        let k = Kernel::power(&Kernel::k_half(), 2).unwrap();
        for &l in &[r(1.0), r(3.0), C::new(2.0, 1.5)] {
            let num = k.laplace_numeric(l).unwrap().value;
            assert!((num - (-2.0 * l.sqrt()).exp()).norm() < 1e-8, "{l}: {num}");
        }
        // closed form of the e^{−2√λ} inverse
        let t = 0.7;
        let exact = (-1.0f64 / t).exp() / (PI * t * t * t).sqrt();
        assert!((k.evaluate(t).unwrap().re - exact).abs() < 1e-9);
    }

    #[test]
    fn spectrum_zero_kernel() {
        let k = Kernel::spectrum_zero(&[r(1.0)], 1).unwrap();
        assert_eq!(k.laplace(r(1.0)).unwrap().norm(), 0.0);
        let l = r(2.5);
        let exact = (1.0 - l) / ((1.0 + l) * (1.0 + l));
        assert!((k.laplace(l).unwrap() - exact).norm() < 1e-15);
        let zeros: Vec<C> = (1..=8).map(|n| r((n * n) as f64)).collect();
        let k = Kernel::spectrum_zero(&zeros, 1).unwrap();
        for z in &zeros {
            assert!(k.laplace(*z).unwrap().norm() < 1e-12);
            let num = k.laplace_numeric(*z).unwrap().value;
            assert!(num.norm() < 1e-8, "numeric transform at {z}: {num}");
        }
        let b = k.fit_bound(-1.0, 0.0, 20.0).unwrap();
        assert!(b.m.is_finite() && b.m > 0.0);
        assert!(matches!(
            Kernel::spectrum_zero(&[r(-1.0)], 1),
            Err(KernelError::NonPositiveZero(_))
        ));
    }

    #[test]
    fn tabulated_riesz_two_transform() {
        let k = Kernel::sample(&Kernel::riesz(2.0).unwrap(), 60.0, 600).unwrap();
        for &l in &[r(1.0), r(2.0), C::new(1.5, 2.0)] {
            assert!((k.laplace(l).unwrap() - l.powi(-2)).norm() < 1e-9);
        }
        assert!((k.theta(3.0).unwrap().re - 4.5).abs() < 1e-12);
        assert!((k.integral(2, 3.0).unwrap().re - 4.5).abs() < 1e-12);
    }

    #[test]
    fn tabulated_csv_round_trip() {
        let k = Kernel::sample(&Kernel::k_half(), 5.0, 50).unwrap();
        let dir = std::env::temp_dir().join(format!("convolab-k-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("k.csv");
        k.save_csv(&path).unwrap();
        let back = Kernel::load_csv(&path).unwrap();
        assert!((back.evaluate(1.23).unwrap() - k.evaluate(1.23).unwrap()).norm() < 1e-15);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn titchmarsh() {
        assert_eq!(Kernel::riesz(0.3).unwrap().titchmarsh_check().verdict, Verdict::True);
        assert_eq!(Kernel::k_half().titchmarsh_check().verdict, Verdict::True);
        let t: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|&x| if x <= 0.5 { 0.0 } else { 1.0 }).collect();
        let rep = Kernel::tabulated(t, v).unwrap().titchmarsh_check();
        assert_eq!(rep.verdict, Verdict::False);
        assert!(!rep.evidence.is_empty());
    }

    #[test]
    fn p2() {
        let grid: Vec<C> = (0..5)
            .flat_map(|i| (0..5).map(move |j| C::new(0.5 + i as f64, j as f64 - 2.0)))
            .collect();
        assert!(Kernel::k_half().p2_check(0.0, &grid, 1e-12).zero_free);
        assert!(Kernel::riesz(1.5).unwrap().p2_check(0.0, &grid, 1e-12).zero_free);
        let rep = Kernel::spectrum_zero(&[r(1.0)], 1)
            .unwrap()
            .p2_check(0.0, &[r(1.0), r(2.0)], 1e-12);
        assert!(!rep.zero_free);
        assert_eq!(rep.witnesses[0].0, r(1.0));
    }

    #[test]
    fn weierstrass_of_unit_kernel() {
        let k1 = Kernel::weierstrass(&Kernel::riesz(1.0).unwrap()).unwrap();
        for &t in &[0.1, 1.0, 3.0] {
            let v = k1.evaluate(t).unwrap().re;
            assert!((v - 1.0 / (PI * t).sqrt()).abs() < 1e-9, "t={t}: {v}");
            assert!((k1.theta(t).unwrap().re - 2.0 * (t / PI).sqrt()).abs() < 1e-9);
        }
        let l = r(2.0);
        assert!((k1.laplace(l).unwrap() - l.powf(-0.5)).norm() < 1e-8);
    }

    #[test]
    fn weierstrass_transform_identity() {
        let k1 = Kernel::weierstrass(&Kernel::k_half()).unwrap();
        let v = k1.laplace(r(4.0)).unwrap();
        assert!((v.re - (-(2f64).sqrt()).exp()).abs() < 1e-8);
        let k2 = Kernel::weierstrass(&Kernel::riesz(2.0).unwrap()).unwrap();
        assert!((k2.evaluate(0.8).unwrap().re - 1.0).abs() < 1e-9);
        assert!(Kernel::weierstrass(&Kernel::riesz(0.5).unwrap()).is_ok());
    }

    #[test]
    fn spec_round_trip() {
        let spec = KernelSpec::Convolution {
            factors: vec![
                KernelSpec::KHalf,
                KernelSpec::RationalSpectrumZero {
                    zeros: vec![r(1.0), C::new(2.0, 1.0)],
                    extra_poles: 2,
                },
            ],
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: KernelSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        let parsed: KernelSpec = serde_json::from_str(
            r#"{"kind":"rational-spectrum-zero","params":{"zeros":[1,4,[9,0.5]],"extra_poles":1}}"#,
        )
        .unwrap();
        assert!(Kernel::from_spec(&parsed).is_ok());
        let kh: KernelSpec = serde_json::from_str(r#"{"kind":"k-half"}"#).unwrap();
        assert_eq!(kh, KernelSpec::KHalf);
    }

    #[test]
    fn blaschke() {
        let rep = blaschke_summability(|n| (n * n) as f64, 1_000_000);
        assert_eq!(rep.verdict, crate::weights::Convergence::Converges);
        let limit = PI / PI.tanh() - 1.0;
        assert!((rep.estimate - limit).abs() < 1e-6, "{} vs {limit}", rep.estimate);
        let rep = blaschke_summability(|n| n as f64, 100_000);
        assert_eq!(rep.verdict, crate::weights::Convergence::Diverges);
        let rep = blaschke_summability(|n| 2f64.powi(n as i32), 2000);
        assert_eq!(rep.verdict, crate::weights::Convergence::Converges);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn theta_nondecreasing_and_zero_at_origin(a in 0.0f64..6.0, b in 0.0f64..6.0, alpha in 0.2f64..3.0) {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                for k in [Kernel::riesz(alpha).unwrap(), Kernel::k_half()] {
                    prop_assert_eq!(k.theta(0.0).unwrap(), ZERO);
                    prop_assert!(k.theta(lo).unwrap().re <= k.theta(hi).unwrap().re + 1e-15);
                }
            }
        }
    }
}
