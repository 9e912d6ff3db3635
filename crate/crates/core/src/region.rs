//! Complex-plane regions and their images under `λ ↦ λ²`.
//!
//! Every base region is described by a defining function `g` with
//! `λ ∈ R ⇔ g(λ) ≥ 0`. Squared regions are never given a closed inequality:
//! `z` belongs to `R²` when either square root of `z` belongs to `R`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::RegionError;
use crate::weights::{SequenceSpec, WeightSequence};

type C = Complex64;

const MEMBER_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegionKind {
    /// `Re λ ≥ σ`
    HalfPlane { sigma: f64 },
    /// `Π_ω`: `Re z ≥ ω² − (Im z)²/(4ω²)`
    Parabola { omega: f64 },
    /// `Ω_{ε,C}`: `Re λ ≥ ε|λ| + C`
    Ouchi { eps: f64, c: f64 },
    /// `Ω^{M_p}_{k,C}`: `Re λ ≥ M(k|λ|) + C`
    LogRegion { seq: SequenceSpec, k: f64, c: f64 },
    /// `Λ_{α,β,γ}`: `Re λ ≥ M(α|λ|)/γ + β`
    Ultralog {
        seq: SequenceSpec,
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    /// `E(α,β)`: `Re λ ≥ β`, `|Im λ| ≤ e^{α Re λ}`
    Exponential { alpha: f64, beta: f64 },
    /// `Σ_θ`: `|arg λ| < θ`
    Sector { angle: f64 },
    /// `ω + Σ_θ`
    ShiftedSector { omega: f64, angle: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    #[serde(flatten)]
    pub kind: RegionKind,
    #[serde(default)]
    pub squared: bool,
}

#[derive(Clone, Debug)]
pub struct Region {
    spec: RegionSpec,
    seq: Option<WeightSequence>,
}

/// Sampled boundary together with truncation diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub points: Vec<C>,
    pub radius: f64,
    /// Set when the parameter range had to be clamped (boundary not reaching `radius`).
    pub clamped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorWitness {
    pub omega: f64,
    pub ok: bool,
    pub sector_angle: f64,
    pub violation: Option<C>,
    pub checked_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UltralogNormalization {
    pub alpha: f64,
    pub beta: f64,
    pub margin: f64,
    pub grid_points: usize,
}

fn positive(name: &str, v: f64) -> Result<(), RegionError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(RegionError::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}

impl Region {
    pub fn new(kind: RegionKind, squared: bool) -> Result<Self, RegionError> {
        Self::from_spec(&RegionSpec { kind, squared })
    }

    pub fn from_spec(spec: &RegionSpec) -> Result<Self, RegionError> {
        let build_seq = |s: &SequenceSpec| {
            s.build()
                .map_err(|e| RegionError::InvalidParameter(e.to_string()))
        };
        let seq = match &spec.kind {
            RegionKind::HalfPlane { sigma } => {
                if !sigma.is_finite() {
                    return Err(RegionError::InvalidParameter("σ must be finite".into()));
                }
                None
            }
            RegionKind::Parabola { omega } => {
                positive("ω", *omega)?;
                None
            }
            RegionKind::Ouchi { eps, c } => {
                positive("ε", *eps)?;
                positive("C", *c)?;
                if *eps >= 1.0 {
                    return Err(RegionError::InvalidParameter(format!("ε = {eps} must be < 1")));
                }
                None
            }
            RegionKind::LogRegion { seq, k, c } => {
                positive("k", *k)?;
                positive("C", *c)?;
                Some(build_seq(seq)?)
            }
            RegionKind::Ultralog {
                seq,
                alpha,
                beta,
                gamma,
            } => {
                positive("α", *alpha)?;
                positive("β", *beta)?;
                positive("γ", *gamma)?;
                Some(build_seq(seq)?)
            }
            RegionKind::Exponential { alpha, beta } => {
                positive("α", *alpha)?;
                positive("β", *beta)?;
                None
            }
            RegionKind::Sector { angle } | RegionKind::ShiftedSector { angle, .. } => {
                if !(*angle > 0.0 && *angle <= PI) {
                    return Err(RegionError::InvalidParameter(format!(
                        "sector angle {angle} outside (0, π]"
                    )));
                }
                None
            }
        };
        Ok(Region {
            spec: spec.clone(),
            seq,
        })
    }

    pub fn ouchi(eps: f64, c: f64) -> Result<Self, RegionError> {
        Self::new(RegionKind::Ouchi { eps, c }, false)
    }

    pub fn spec(&self) -> &RegionSpec {
        &self.spec
    }

    pub fn kind(&self) -> &RegionKind {
        &self.spec.kind
    }

    pub fn is_squared(&self) -> bool {
        self.spec.squared
    }

    pub fn squared(&self) -> Region {
        let mut out = self.clone();
        out.spec.squared = true;
        out
    }

    pub fn base(&self) -> Region {
        let mut out = self.clone();
        out.spec.squared = false;
        out
    }

    fn m(&self, rho: f64) -> f64 {
        self.seq.as_ref().map(|s| s.m(rho)).unwrap_or(0.0)
    }

    /// Defining function of the base region: `λ ∈ R ⇔ g(λ) ≥ 0`.
    pub fn defining(&self, l: C) -> f64 {
        match &self.spec.kind {
            RegionKind::HalfPlane { sigma } => l.re - sigma,
            RegionKind::Parabola { omega } => {
                l.re - omega * omega + l.im * l.im / (4.0 * omega * omega)
            }
            RegionKind::Ouchi { eps, c } => l.re - eps * l.norm() - c,
            RegionKind::LogRegion { k, c, .. } => l.re - self.m(k * l.norm()) - c,
            RegionKind::Ultralog {
                alpha, beta, gamma, ..
            } => l.re - self.m(alpha * l.norm()) / gamma - beta,
            RegionKind::Exponential { alpha, beta } => {
                let e = (alpha * l.re).exp() - l.im.abs();
                (l.re - beta).min(e)
            }
            RegionKind::Sector { angle } => sector_g(l, *angle),
            RegionKind::ShiftedSector { omega, angle } => sector_g(l - omega, *angle),
        }
    }

    fn base_contains(&self, l: C) -> bool {
        let g = self.defining(l);
        g >= -MEMBER_TOL * l.norm().max(1.0)
    }

    pub fn contains(&self, z: C) -> bool {
        if self.spec.squared {
            let w = z.sqrt();
            self.base_contains(w) || self.base_contains(-w)
        } else {
            self.base_contains(z)
        }
    }

    /// Base boundary point at height `Im λ = y` (right-opening kinds only).
    pub fn boundary_at_height(&self, y: f64) -> Option<C> {
        self.boundary_x(y).map(|x| C::new(x, y))
    }

    /// Real part of the base boundary at height `y` (right-opening kinds).
    fn boundary_x(&self, y: f64) -> Option<f64> {
        match &self.spec.kind {
            RegionKind::HalfPlane { sigma } => Some(*sigma),
            RegionKind::Parabola { omega } => Some(omega * omega - y * y / (4.0 * omega * omega)),
            RegionKind::Ouchi { eps, c } => {
                let e2 = eps * eps;
                Some((c + eps * (c * c + (1.0 - e2) * y * y).sqrt()) / (1.0 - e2))
            }
            RegionKind::Exponential { alpha, beta } => {
                let ay = y.abs();
                if ay <= (alpha * beta).exp() {
                    Some(*beta)
                } else {
                    Some(ay.ln() / alpha)
                }
            }
            RegionKind::LogRegion { .. } | RegionKind::Ultralog { .. } => {
                Some(self.solve_monotone_boundary(y))
            }
            RegionKind::Sector { .. } | RegionKind::ShiftedSector { .. } => None,
        }
    }

    /// Smallest `x` with `g(x + iy) ≥ 0`. `g(iy) = −M(k|y|) − C < 0`, so the
    /// search starts at `x = M(k|y|) + C` and doubles outward before bisecting.
    fn solve_monotone_boundary(&self, y: f64) -> f64 {
        let g = |x: f64| self.defining(C::new(x, y));
        let mut lo = 0.0;
        let mut hi = (-g(0.0)).max(1e-300);
        while g(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
        }
        bisect(&g, &mut lo, &mut hi);
        hi
    }

    /// Boundary point in the upper half-plane with `|z| = modulus` (`z` for
    /// squared regions, `λ` otherwise).
    pub fn boundary_point_at_modulus(&self, modulus: f64) -> Result<C, RegionError> {
        if let RegionKind::Sector { angle } = self.spec.kind {
            let l = C::from_polar(if self.spec.squared { modulus.sqrt() } else { modulus }, angle);
            return Ok(if self.spec.squared { l * l } else { l });
        }
        let base_mod = if self.spec.squared {
            modulus.sqrt()
        } else {
            modulus
        };
        let pt = |y: f64| -> Option<C> { self.boundary_x(y).map(|x| C::new(x, y)) };
        if pt(0.0).is_none() {
            return Err(RegionError::UnsupportedKind(self.kind_name()));
        }
        // |λ(y)| is nondecreasing in y ≥ 0 for the right-opening kinds.
        let (mut a, mut b) = (0.0, base_mod.max(1.0));
        while pt(b).unwrap().norm() < base_mod {
            b *= 2.0;
            if b > 1e300 {
                return Err(RegionError::EmptyBoundary);
            }
        }
        if pt(0.0).unwrap().norm() > base_mod {
            return Err(RegionError::EmptyBoundary);
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if pt(m).unwrap().norm() < base_mod {
                a = m;
            } else {
                b = m;
            }
        }
        let l = pt(b).unwrap();
        Ok(if self.spec.squared { l * l } else { l })
    }

    pub fn kind_name(&self) -> String {
        let base = match &self.spec.kind {
            RegionKind::HalfPlane { .. } => "half-plane",
            RegionKind::Parabola { .. } => "parabola",
            RegionKind::Ouchi { .. } => "ouchi",
            RegionKind::LogRegion { .. } => "log-region",
            RegionKind::Ultralog { .. } => "ultralog",
            RegionKind::Exponential { .. } => "exponential",
            RegionKind::Sector { .. } => "sector",
            RegionKind::ShiftedSector { .. } => "shifted-sector",
        };
        if self.spec.squared {
            format!("squared {base}")
        } else {
            base.to_string()
        }
    }

    /// `n` boundary points with modulus at most `radius`, ordered by ascending
    /// `Im` of the base boundary; squared regions map the base boundary pointwise.
    pub fn boundary(&self, n: usize, radius: f64) -> Result<Boundary, RegionError> {
        if n < 2 {
            return Err(RegionError::InvalidParameter("boundary needs n ≥ 2".into()));
        }
        let base_r = if self.spec.squared { radius.sqrt() } else { radius };
        let (pts, clamped) = match &self.spec.kind {
            RegionKind::Sector { angle } => (ray_pair(C::new(0.0, 0.0), *angle, base_r, n), false),
            RegionKind::ShiftedSector { omega, angle } => {
                let o = C::new(*omega, 0.0);
                let reach = (base_r - omega.abs()).max(0.0);
                (ray_pair(o, *angle, reach, n), reach == 0.0)
            }
            _ => {
                let top = match self.base().boundary_point_at_modulus(base_r) {
                    Ok(p) => p.im,
                    Err(RegionError::EmptyBoundary) => {
                        return Ok(Boundary {
                            points: Vec::new(),
                            radius,
                            clamped: true,
                        })
                    }
                    Err(e) => return Err(e),
                };
                let pts: Vec<C> = (0..n)
                    .into_par_iter()
                    .map(|i| {
                        let y = -top + 2.0 * top * i as f64 / (n - 1) as f64;
                        C::new(self.boundary_x(y).unwrap(), y)
                    })
                    .collect();
                (pts, false)
            }
        };
        let points = if self.spec.squared {
            pts.into_iter().map(|l| l * l).collect()
        } else {
            pts
        };
        Ok(Boundary {
            points,
            radius,
            clamped,
        })
    }

    /// Limit of `|arg z|` along the boundary as `|z| → ∞`.
    pub fn arg_limit(&self) -> Result<Option<f64>, RegionError> {
        let factor = if self.spec.squared { 2.0 } else { 1.0 };
        match &self.spec.kind {
            RegionKind::Ouchi { eps, .. } => Ok(Some(factor * eps.acos())),
            RegionKind::LogRegion { .. }
            | RegionKind::Ultralog { .. }
            | RegionKind::HalfPlane { .. } => Ok(Some(factor * FRAC_PI_2)),
            RegionKind::Parabola { .. } if !self.spec.squared => Ok(Some(PI)),
            RegionKind::Parabola { .. } => Err(RegionError::UnsupportedKind(self.kind_name())),
            RegionKind::Exponential { .. }
            | RegionKind::Sector { .. }
            | RegionKind::ShiftedSector { .. } => Ok(None),
        }
    }

    /// Finds `ω` with `ω + Σ_{π/2 + θ} ⊂ R`, verified on a polar grid.
    pub fn sector_inclusion_witness(&self, target_angle: f64) -> SectorWitness {
        let phi = FRAC_PI_2 + target_angle;
        let fail = |omega: f64, violation: Option<C>| SectorWitness {
            omega,
            ok: false,
            sector_angle: phi,
            violation,
            checked_points: 0,
        };
        if !self.spec.squared {
            match self.spec.kind {
                RegionKind::Sector { angle } => {
                    return SectorWitness {
                        omega: 0.0,
                        ok: phi <= angle + 1e-15,
                        sector_angle: phi,
                        violation: None,
                        checked_points: 0,
                    }
                }
                RegionKind::ShiftedSector { omega, angle } => {
                    return SectorWitness {
                        omega,
                        ok: phi <= angle + 1e-15,
                        sector_angle: phi,
                        violation: None,
                        checked_points: 0,
                    }
                }
                _ => {}
            }
        }
        match self.arg_limit() {
            Ok(Some(lim)) if lim > phi => {}
            _ => return fail(f64::NAN, None),
        }
        let cot = phi.cos() / phi.sin();
        let omega_at = |radius: f64| -> Option<f64> {
            let b = self.boundary(4001, radius).ok()?;
            b.points
                .iter()
                .map(|z| z.re - z.im.abs() * cot)
                .reduce(f64::max)
        };
        let r0 = 1e4;
        let (Some(w1), Some(w2)) = (omega_at(r0), omega_at(2.0 * r0)) else {
            return fail(f64::NAN, None);
        };
        if w2 > w1 + 1e-6 * w1.abs().max(1.0) {
            // still growing with the sweep radius
            return fail(w2, None);
        }
        // Small safety margin against sampling between boundary nodes.
        let omega = w2 + 1e-6 * w2.abs().max(1.0);
        let mut violation = None;
        let mut checked = 0;
        'outer: for i in 0..60 {
            let r = 1e-3 * 10f64.powf(10.0 * i as f64 / 59.0);
            for j in 0..41 {
                let th = -phi * 0.999 + 2.0 * phi * 0.999 * j as f64 / 40.0;
                let z = C::new(omega, 0.0) + C::from_polar(r, th);
                checked += 1;
                if !self.contains(z) {
                    violation = Some(z);
                    break 'outer;
                }
            }
        }
        SectorWitness {
            omega,
            ok: violation.is_none(),
            sector_angle: phi,
            violation,
            checked_points: checked,
        }
    }

    /// Interior samples on a polar grid (`n_r` log-spaced radii up to `radius`,
    /// `n_theta` angles) plus `n_b` boundary points, all inside the region.
    pub fn sweep_points(&self, radius: f64, n_r: usize, n_theta: usize, n_b: usize) -> Vec<C> {
        let mut pts: Vec<C> = (0..n_r)
            .into_par_iter()
            .flat_map_iter(|i| {
                let r = radius * 10f64.powf(-6.0 * (n_r - 1 - i) as f64 / (n_r - 1).max(1) as f64);
                (0..n_theta).map(move |j| {
                    let th = -PI + 2.0 * PI * (j as f64 + 0.5) / n_theta as f64;
                    C::from_polar(r, th)
                })
            })
            .filter(|z| self.contains(*z))
            .collect();
        if let Ok(b) = self.boundary(n_b.max(2), radius) {
            pts.extend(b.points);
        }
        pts
    }
}

fn sector_g(l: C, angle: f64) -> f64 {
    if l.norm() == 0.0 {
        return -1.0;
    }
    // closed variant of |arg λ| < θ
    angle - l.arg().abs()
}

fn ray_pair(origin: C, angle: f64, reach: f64, n: usize) -> Vec<C> {
    (0..n)
        .map(|i| {
            let s = -reach + 2.0 * reach * i as f64 / (n - 1) as f64;
            origin + C::from_polar(s.abs(), angle.copysign(s))
        })
        .collect()
}

fn bisect<G: Fn(f64) -> f64>(g: &G, a: &mut f64, b: &mut f64) {
    // invariant: g(a) < 0 ≤ g(b)
    for _ in 0..200 {
        let m = 0.5 * (*a + *b);
        if m <= *a || m >= *b || (*b - *a) <= 1e-13 * b.abs().max(1.0) {
            break;
        }
        if g(m) >= 0.0 {
            *b = m;
        } else {
            *a = m;
        }
    }
}

/// Finds `(α', β')` with `Λ_{α',β',1} ⊂ Λ_{α,β,γ}` by a grid search over
/// `α' ∈ α·2^i`, `β' ∈ β + {0, 2^j}`, verified on `n` log-spaced moduli.
pub fn ultralog_normalize(
    seq: &WeightSequence,
    alpha: f64,
    beta: f64,
    gamma: f64,
    n: usize,
) -> Result<UltralogNormalization, RegionError> {
    if gamma == 1.0 {
        return Ok(UltralogNormalization {
            alpha,
            beta,
            margin: 0.0,
            grid_points: n,
        });
    }
    let rhos: Vec<f64> = std::iter::once(0.0)
        .chain((0..n.saturating_sub(1)).map(|i| 10f64.powf(-3.0 + 15.0 * i as f64 / (n - 2).max(1) as f64)))
        .collect();
    // Λ' ⊂ Λ holds when M(α'ρ) + β' ≥ M(αρ)/γ + β for every modulus ρ.
    let margin = |a2: f64, b2: f64| -> f64 {
        rhos.par_iter()
            .map(|&r| seq.m(a2 * r) + b2 - seq.m(alpha * r) / gamma - beta)
            .reduce(|| f64::INFINITY, f64::min)
    };
    for i in 0..=24 {
        let a2 = alpha * 2f64.powi(i);
        for j in -1..=40 {
            let b2 = if j < 0 { beta } else { beta + 2f64.powi(j) };
            let m = margin(a2, b2);
            if m >= 0.0 {
                return Ok(UltralogNormalization {
                    alpha: a2,
                    beta: b2,
                    margin: m,
                    grid_points: rhos.len(),
                });
            }
        }
    }
    Err(RegionError::SearchFailure)
}

/// Minimum distance between the boundaries of two regions within `radius`,
/// refined by doubling the sample count until it moves by less than 1e-3.
pub fn boundary_distance(r1: &Region, r2: &Region, radius: f64) -> Result<f64, RegionError> {
    let mut n = 512;
    let mut prev = f64::NAN;
    loop {
        let b1 = r1.boundary(n, radius)?;
        let b2 = r2.boundary(n, radius)?;
        if b1.points.is_empty() || b2.points.is_empty() {
            return Err(RegionError::EmptyBoundary);
        }
        let d = min_pair_distance(&b1.points, &b2.points);
        if (d - prev).abs() < 1e-3 || n >= 1 << 17 {
            return Ok(d);
        }
        prev = d;
        n *= 2;
    }
}

/// Exact minimum pairwise distance via a uniform hash grid.
pub fn min_pair_distance(a: &[C], b: &[C]) -> f64 {
    let (mut lo, mut hi) = (C::new(f64::INFINITY, f64::INFINITY), C::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in b {
        lo = C::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = C::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
    let cell = span / (b.len() as f64).sqrt().max(1.0);
    let key = |p: C| (((p.re - lo.re) / cell).floor() as i64, ((p.im - lo.im) / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<C>> = HashMap::new();
    for p in b {
        grid.entry(key(*p)).or_default().push(*p);
    }
    let max_ring = (span / cell).ceil() as i64 + 2;
    a.par_iter()
        .map(|p| {
            let (kx, ky) = key(*p);
            let mut best = f64::INFINITY;
            for ring in 0..=max_ring + (((p.re - lo.re).abs() + (p.im - lo.im).abs()) / cell) as i64 {
                if best < (ring as f64 - 1.0).max(0.0) * cell {
                    break;
                }
                for dx in -ring..=ring {
                    for dy in -ring..=ring {
                        if dx.abs() != ring && dy.abs() != ring {
                            continue;
                        }
                        if let Some(v) = grid.get(&(kx + dx, ky + dy)) {
                            for q in v {
                                best = best.min((p - q).norm());
                            }
                        }
                    }
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gevrey(s: f64) -> SequenceSpec {
        SequenceSpec::GevreyFactorial { s }
    }

    #[test]
    fn ouchi_membership() {
        let r = Region::ouchi(0.5, 1.0).unwrap();
        assert!(r.contains(C::new(4.0, 0.0)));
        assert!(!r.contains(C::new(0.0, 1.0)));
    }

    #[test]
    fn parabola_membership() {
        let p = Region::new(RegionKind::Parabola { omega: 1.0 }, false).unwrap();
        assert!(p.contains(C::new(4.0, 0.0)));
        let hp = Region::new(RegionKind::HalfPlane { sigma: 1.0 }, true).unwrap();
        for z in [C::new(4.0, 0.0), C::new(0.3, 2.5), C::new(-1.0, 0.5), C::new(-3.0, 4.1)] {
            assert_eq!(p.contains(z), hp.contains(z), "{z}");
        }
    }

    #[test]
    fn boundary_equalities() {
        let r = Region::ouchi(0.5, 1.0).unwrap();
        let b = r.boundary(101, 50.0).unwrap();
        let mid = b.points[50];
        assert!((mid - C::new(2.0, 0.0)).norm() < 1e-12);
        for p in &b.points {
            assert!(r.defining(*p).abs() < 1e-9);
        }
        let p = Region::new(RegionKind::Parabola { omega: 1.0 }, false).unwrap();
        for z in p.boundary(51, 30.0).unwrap().points {
            assert!((z.re - (1.0 - z.im * z.im / 4.0)).abs() < 1e-12);
        }
        let e = Region::new(RegionKind::Exponential { alpha: 1.0, beta: 2.0 }, false).unwrap();
        let top = C::new(2.0, 2f64.exp());
        assert!(e.defining(top).abs() < 1e-12);
        assert!(e.contains(top));
        let l = Region::new(
            RegionKind::LogRegion {
                seq: gevrey(2.0),
                k: 1.0,
                c: 1.0,
            },
            false,
        )
        .unwrap();
        for z in l.boundary(41, 1e4).unwrap().points {
            assert!(l.defining(z).abs() < 1e-9, "{z}: {}", l.defining(z));
        }
    }

    #[test]
    fn arg_limits() {
        let r = Region::ouchi(0.5, 1.0).unwrap();
        assert!((r.arg_limit().unwrap().unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((r.squared().arg_limit().unwrap().unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        let l = Region::new(
            RegionKind::LogRegion {
                seq: gevrey(2.0),
                k: 1.0,
                c: 1.0,
            },
            false,
        )
        .unwrap();
        assert_eq!(l.arg_limit().unwrap(), Some(FRAC_PI_2));
        let e = Region::new(RegionKind::Exponential { alpha: 1.0, beta: 1.0 }, false).unwrap();
        assert_eq!(e.arg_limit().unwrap(), None);
        for reg in [r.clone(), r.squared(), l] {
            let z = reg.boundary_point_at_modulus(1e6).unwrap();
            assert!((z.norm() - 1e6).abs() < 1e-3);
            assert!((z.arg().abs() - reg.arg_limit().unwrap().unwrap()).abs() < 1e-2);
        }
    }

    #[test]
    fn sector_inclusion() {
        let w = Region::ouchi(0.3, 1.0).unwrap().squared().sector_inclusion_witness(PI / 5.0);
        assert!(w.ok && w.omega.is_finite(), "{w:?}");
        let w = Region::ouchi(0.9, 1.0).unwrap().squared().sector_inclusion_witness(PI / 3.0);
        assert!(!w.ok);
        let w = Region::new(RegionKind::Sector { angle: PI }, false)
            .unwrap()
            .sector_inclusion_witness(0.0);
        assert!(w.ok && w.omega == 0.0);
    }

    #[test]
    fn ultralog_norm() {
        let seq = WeightSequence::gevrey_factorial(2.0).unwrap();
        let n = ultralog_normalize(&seq, 1.0, 1.0, 1.0, 100).unwrap();
        assert_eq!((n.alpha, n.beta), (1.0, 1.0));
        let n = ultralog_normalize(&seq, 1.0, 1.0, 2.0, 200).unwrap();
        assert!(n.margin >= 0.0);
        assert_eq!(n.grid_points, 200);
        let n = ultralog_normalize(&seq, 1.0, 1.0, 0.5, 200).unwrap();
        assert!(n.margin >= 0.0 && (n.alpha > 1.0 || n.beta > 1.0));
    }

    #[test]
    fn boundary_distances() {
        let a = Region::ouchi(0.5, 1.0).unwrap();
        let b = Region::ouchi(0.5, 2.0).unwrap();
        assert!(boundary_distance(&a, &b, 100.0).unwrap() > 0.0);
        assert!(boundary_distance(&a, &a, 100.0).unwrap() < 1e-12);
    }

    #[test]
    fn hash_grid_matches_brute_force() {
        let a: Vec<C> = (0..300).map(|i| C::from_polar(1.0 + i as f64 * 0.01, i as f64 * 0.3)).collect();
        let b: Vec<C> = (0..250).map(|i| C::new(i as f64 * 0.05 - 3.0, (i as f64 * 0.7).sin() * 4.0)).collect();
        let brute = a
            .iter()
            .flat_map(|p| b.iter().map(move |q| (p - q).norm()))
            .fold(f64::INFINITY, f64::min);
        assert!((min_pair_distance(&a, &b) - brute).abs() < 1e-15);
    }

    #[test]
    fn spec_json() {
        let spec: RegionSpec = serde_json::from_str(
            r#"{"kind":"ultralog","seq":{"kind":"gevrey-factorial","s":1.5},"alpha":0.1,"beta":4,"gamma":1,"squared":true}"#,
        )
        .unwrap();
        let r = Region::from_spec(&spec).unwrap();
        assert!(r.is_squared());
        assert!(Region::new(RegionKind::Ouchi { eps: 0.0, c: 1.0 }, false).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]
            #[test]
            fn squared_membership_is_root_membership(re in -50.0f64..50.0, im in -50.0f64..50.0) {
                let z = C::new(re, im);
                let w = z.sqrt();
                for r in [Region::ouchi(0.4, 1.0).unwrap(), Region::new(RegionKind::Exponential { alpha: 0.5, beta: 1.0 }, false).unwrap()] {
                    prop_assert_eq!(r.squared().contains(z), r.contains(w) || r.contains(-w));
                }
            }

            #[test]
            fn ouchi_monotone_in_c(re in -20.0f64..80.0, im in -80.0f64..80.0, c1 in 0.1f64..5.0, dc in 0.0f64..5.0) {
                let z = C::new(re, im);
                let small = Region::ouchi(0.5, c1 + dc).unwrap();
                let big = Region::ouchi(0.5, c1).unwrap();
                prop_assert!(!small.contains(z) || big.contains(z));
            }
        }
    }
}
