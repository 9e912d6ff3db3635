//! Weight sequences `(M_p)` and their associated functions
//! `M(ρ) = sup_p ln(ρ^p / M_p)`.
//!
//! Values are stored as `ln M_p` so that Gevrey sequences stay finite at high
//! truncation orders. Gevrey kinds carry a closed form and are never truncated:
//! the supremum is located through log-convexity of the sequence, so it is
//! exact for every ρ. Explicit tables are truncated at their stored order.

use serde::{Deserialize, Serialize};
use libm::lgamma as ln_gamma;

use crate::error::WeightError;

pub const DEFAULT_ORDER: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    /// `p!^s`
    GevreyFactorial,
    /// `p^{ps}`
    GevreyPower,
    /// `Γ(1 + ps)`
    GevreyGamma,
    ExplicitTable,
}

/// Closed form `ln M_p = power · g_s(p)` backing a sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
struct ClosedForm {
    family: SequenceKind,
    s: f64,
    power: f64,
}

impl ClosedForm {
    fn ln_value(&self, p: usize) -> f64 {
        let pf = p as f64;
        let base = match self.family {
            SequenceKind::GevreyFactorial => self.s * ln_factorial(p),
            SequenceKind::GevreyPower => {
                if p == 0 {
                    0.0
                } else {
                    self.s * pf * pf.ln()
                }
            }
            SequenceKind::GevreyGamma => {
                if p == 0 {
                    0.0
                } else {
                    ln_gamma(1.0 + pf * self.s)
                }
            }
            SequenceKind::ExplicitTable => unreachable!("tables have no closed form"),
        };
        self.power * base
    }
}

fn ln_factorial(p: usize) -> f64 {
    if p <= 32 {
        (2..=p).map(|k| (k as f64).ln()).sum()
    } else {
        ln_gamma(p as f64 + 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    kind: SequenceKind,
    s: Option<f64>,
    ln_values: Vec<f64>,
    closed: Option<ClosedForm>,
    log_convex: bool,
}

/// Value of the associated function together with truncation diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Associated {
    pub value: f64,
    /// Index attaining the supremum.
    pub argmax: usize,
    /// Set when the supremum sits at the truncation order and could not be
    /// confirmed by re-evaluation at twice the order.
    pub truncation_warning: bool,
}

/// Serializable sequence description, e.g. `{"kind": "gevrey-factorial", "s": 1.5}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceSpec {
    GevreyFactorial { s: f64 },
    GevreyPower { s: f64 },
    GevreyGamma { s: f64 },
    ExplicitTable { values: Vec<f64> },
    Squared { base: Box<SequenceSpec> },
}

impl SequenceSpec {
    pub fn build(&self) -> Result<WeightSequence, WeightError> {
        match self {
            SequenceSpec::GevreyFactorial { s } => WeightSequence::gevrey_factorial(*s),
            SequenceSpec::GevreyPower { s } => WeightSequence::gevrey_power(*s),
            SequenceSpec::GevreyGamma { s } => WeightSequence::gevrey_gamma(*s),
            SequenceSpec::ExplicitTable { values } => WeightSequence::from_values(values),
            SequenceSpec::Squared { base } => Ok(base.build()?.squared()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SequenceSpec::GevreyFactorial { s } => format!("p!^{s}"),
            SequenceSpec::GevreyPower { s } => format!("p^(p*{s})"),
            SequenceSpec::GevreyGamma { s } => format!("Gamma(1+p*{s})"),
            SequenceSpec::ExplicitTable { values } => format!("table(P={})", values.len().saturating_sub(1)),
            SequenceSpec::Squared { base } => format!("({})^2", base.label()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convergence {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub m1: bool,
    pub m2: (bool, f64, f64),
    pub m3prime: (Convergence, f64),
}

impl WeightSequence {
    fn gevrey(family: SequenceKind, s: f64, order: usize) -> Result<Self, WeightError> {
        if !(s > 1.0) || !s.is_finite() {
            return Err(WeightError::Invalid(format!(
                "Gevrey parameter s = {s} must exceed 1"
            )));
        }
        let closed = ClosedForm {
            family,
            s,
            power: 1.0,
        };
        let ln_values = (0..=order).map(|p| closed.ln_value(p)).collect();
        Ok(WeightSequence {
            kind: family,
            s: Some(s),
            ln_values,
            closed: Some(closed),
            log_convex: true,
        })
    }

    pub fn gevrey_factorial(s: f64) -> Result<Self, WeightError> {
        Self::gevrey(SequenceKind::GevreyFactorial, s, DEFAULT_ORDER)
    }

    pub fn gevrey_power(s: f64) -> Result<Self, WeightError> {
        Self::gevrey(SequenceKind::GevreyPower, s, DEFAULT_ORDER)
    }

    pub fn gevrey_gamma(s: f64) -> Result<Self, WeightError> {
        Self::gevrey(SequenceKind::GevreyGamma, s, DEFAULT_ORDER)
    }

    pub fn with_order(mut self, order: usize) -> Self {
        if let Some(cf) = self.closed {
            self.ln_values = (0..=order).map(|p| cf.ln_value(p)).collect();
        } else {
            self.ln_values.truncate(order + 1);
        }
        self
    }

    /// Sequence given by explicit values `M_0, …, M_P`.
    pub fn from_values(values: &[f64]) -> Result<Self, WeightError> {
        if values.is_empty() {
            return Err(WeightError::Invalid("empty table".into()));
        }
        if values[0] != 1.0 {
            return Err(WeightError::Invalid(format!("M_0 = {} (must be 1)", values[0])));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(WeightError::Invalid(format!("non-positive entry {v}")));
        }
        Self::from_ln_values(values.iter().map(|v| v.ln()).collect())
    }

    /// Sequence given by `ln M_p`; useful when `M_p` overflows.
    pub fn from_ln_values(ln_values: Vec<f64>) -> Result<Self, WeightError> {
        if ln_values.first().copied() != Some(0.0) {
            return Err(WeightError::Invalid("M_0 must be 1".into()));
        }
        if ln_values.iter().any(|v| !v.is_finite()) {
            return Err(WeightError::Invalid("non-finite entry".into()));
        }
        let log_convex = ln_values
            .windows(3)
            .all(|w| 2.0 * w[1] <= w[0] + w[2] + 1e-12 * w[1].abs().max(1.0));
        Ok(WeightSequence {
            kind: SequenceKind::ExplicitTable,
            s: None,
            ln_values,
            closed: None,
            log_convex,
        })
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn s(&self) -> Option<f64> {
        self.s
    }

    /// Truncation order `P`.
    pub fn order(&self) -> usize {
        self.ln_values.len() - 1
    }

    pub fn ln_values(&self) -> &[f64] {
        &self.ln_values
    }

    /// `M_p` for `p ≤ P` (may overflow to infinity for large p).
    pub fn values(&self) -> Vec<f64> {
        self.ln_values.iter().map(|v| v.exp()).collect()
    }

    fn ln_at(&self, p: usize) -> Option<f64> {
        match self.closed {
            Some(cf) if p >= self.ln_values.len() => Some(cf.ln_value(p)),
            _ => self.ln_values.get(p).copied(),
        }
    }

    /// Whether the sequence has a closed form (no truncation in `M(ρ)`).
    pub fn is_closed_form(&self) -> bool {
        self.closed.is_some()
    }

    pub fn check_conditions(&self) -> Result<ConditionReport, WeightError> {
        let order = self.order();
        if order < 8 {
            return Err(WeightError::TruncationTooShort { order });
        }
        let lv = &self.ln_values;
        let m1 = lv
            .windows(3)
            .all(|w| 2.0 * w[1] <= w[0] + w[2] + 1e-12 * w[1].abs().max(1.0));

        // g_n = ln M_n − min_{p+q=n} (ln M_p + ln M_q); (M.2) ⇔ g_n ≤ ln A + n ln H.
        let gaps: Vec<f64> = (1..=order)
            .map(|n| {
                let min_split = (0..=n)
                    .map(|p| lv[p] + lv[n - p])
                    .fold(f64::INFINITY, f64::min);
                lv[n] - min_split
            })
            .collect();
        let grid: Vec<f64> = (0..64).map(|i| 10f64.powf(6.0 * i as f64 / 63.0)).collect();
        let mut best: Option<(f64, f64)> = None;
        for &h in &grid {
            let need = gaps
                .iter()
                .enumerate()
                .map(|(i, g)| g - (i + 1) as f64 * h.ln())
                .fold(f64::NEG_INFINITY, f64::max);
            if let Some(&a) = grid.iter().find(|a| a.ln() >= need - 1e-12) {
                let better = match best {
                    None => true,
                    Some((ba, bh)) => a * h < ba * bh,
                };
                if better {
                    best = Some((a, h));
                }
            }
        }
        let m2 = match best {
            Some((a, h)) => (true, a, h),
            None => (false, f64::NAN, f64::NAN),
        };

        // (M.3)': terms m_p = M_{p-1}/M_p; tail judged from the terminal ratio.
        let terms: Vec<f64> = (1..=order).map(|p| (lv[p - 1] - lv[p]).exp()).collect();
        let partial: f64 = terms.iter().sum();
        let last = terms[order - 1];
        let prev = terms[order - 2];
        let q = last / prev;
        let raabe = order as f64 * (prev / last - 1.0);
        let verdict = if q < 0.99 || raabe >= 1.05 {
            Convergence::Converges
        } else if raabe <= 0.95 {
            Convergence::Diverges
        } else {
            Convergence::Inconclusive
        };
        Ok(ConditionReport {
            m1,
            m2,
            m3prime: (verdict, partial),
        })
    }

    /// Tail bound for the (M.3)' series beyond the truncation order, when the
    /// terminal ratio or Raabe index certifies one.
    pub fn m3prime_tail_bound(&self) -> Option<f64> {
        let lv = &self.ln_values;
        let order = self.order();
        if order < 3 {
            return None;
        }
        let last = (lv[order - 1] - lv[order]).exp();
        let prev = (lv[order - 2] - lv[order - 1]).exp();
        let q = last / prev;
        let raabe = order as f64 * (prev / last - 1.0);
        if q < 0.99 {
            Some(last * q / (1.0 - q))
        } else if raabe > 1.0 {
            Some(last * order as f64 / (raabe - 1.0))
        } else {
            None
        }
    }

    /// `M(ρ) = sup_p ln(ρ^p / M_p)` with `M(0) = 0`.
    pub fn associated(&self, rho: f64) -> Associated {
        if !(rho > 0.0) {
            return Associated {
                value: 0.0,
                argmax: 0,
                truncation_warning: false,
            };
        }
        let lr = rho.ln();
        let f = |p: usize, lnm: f64| p as f64 * lr - lnm;
        if let Some(cf) = self.closed {
            if self.log_convex {
                // Increments ln M_{p+1} − ln M_p are nondecreasing; the sup is at
                // the first p where the increment reaches ln ρ.
                let ln = |p: usize| match self.ln_values.get(p) {
                    Some(v) => *v,
                    None => cf.ln_value(p),
                };
                let inc = |p: usize| ln(p + 1) - ln(p);
                if inc(0) >= lr {
                    return Associated {
                        value: 0.0,
                        argmax: 0,
                        truncation_warning: false,
                    };
                }
                let mut hi = 1usize;
                while inc(hi) < lr {
                    hi *= 2;
                }
                let mut lo = hi / 2;
                // invariant: inc(lo) < lr ≤ inc(hi)
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if inc(mid) < lr {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let p = hi;
                let value = f(p, ln(p)).max(0.0);
                return Associated {
                    value,
                    argmax: p,
                    truncation_warning: false,
                };
            }
        }
        let (mut best, mut arg) = (0.0, 0usize);
        for (p, &lnm) in self.ln_values.iter().enumerate() {
            let v = f(p, lnm);
            if v > best {
                best = v;
                arg = p;
            }
        }
        let order = self.order();
        let mut warning = false;
        if arg == order && order > 0 {
            // Re-evaluate at 2P when the sequence can be extended.
            let mut best2 = best;
            let mut extended = true;
            for p in order + 1..=2 * order {
                match self.ln_at(p) {
                    Some(lnm) => best2 = best2.max(f(p, lnm)),
                    None => {
                        extended = false;
                        break;
                    }
                }
            }
            if !extended || (best2 - best).abs() > 1e-12 {
                warning = true;
            }
            best = best2;
        }
        Associated {
            value: best,
            argmax: arg,
            truncation_warning: warning,
        }
    }

    pub fn m(&self, rho: f64) -> f64 {
        self.associated(rho).value
    }

    /// Right derivative `M'(ρ) = p*/ρ` of the associated function.
    pub fn m_slope(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        self.associated(rho).argmax as f64 / rho
    }

    /// Breakpoints `ρ_p = M_p / M_{p-1}` where the active index changes, up to `rho_max`.
    pub fn breakpoints(&self, rho_max: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut p = 1;
        loop {
            let (Some(a), Some(b)) = (self.ln_at(p), self.ln_at(p - 1)) else {
                break;
            };
            let r = (a - b).exp();
            if r > rho_max {
                break;
            }
            out.push(r);
            p += 1;
        }
        out
    }

    /// `(M_p²)`, reported as an explicit table.
    pub fn squared(&self) -> WeightSequence {
        WeightSequence {
            kind: SequenceKind::ExplicitTable,
            s: None,
            ln_values: self.ln_values.iter().map(|v| 2.0 * v).collect(),
            closed: self.closed.map(|cf| ClosedForm {
                power: 2.0 * cf.power,
                ..cf
            }),
            log_convex: self.log_convex,
        }
    }

    /// Constant `C_s` with `M(ρ) ≤ C_s ρ^{1/s}` for all ρ ≥ 0 (Gevrey kinds).
    pub fn gevrey_upper_constant(&self) -> Option<f64> {
        let s = self.s?;
        match self.kind {
            // ρ^p/p!^s = (ρ^{p/s}/p!)^s ≤ e^{s ρ^{1/s}}
            SequenceKind::GevreyFactorial => Some(s),
            // sup_p (p ln ρ − s p ln p) = (s/e) ρ^{1/s}
            SequenceKind::GevreyPower => Some(s / std::f64::consts::E),
            _ => {
                let sup = (0..=400)
                    .map(|i| 10f64.powf(-2.0 + 10.0 * i as f64 / 400.0))
                    .map(|r| self.m(r) / r.powf(1.0 / s))
                    .fold(0.0, f64::max);
                Some(sup * 1.01)
            }
        }
    }

    /// Largest `l` with `M(ρ) ≥ l ρ^{1/s}` for ρ ≥ `a` (on a log grid up to 1e10).
    pub fn gevrey_lower_constant(&self, a: f64) -> Option<f64> {
        let s = self.s?;
        let a = a.max(1.0);
        let span = (1e10f64 / a).log10().max(1.0);
        let l = (0..=600)
            .map(|i| a * 10f64.powf(span * i as f64 / 600.0))
            .map(|r| self.m(r) / r.powf(1.0 / s))
            .fold(f64::INFINITY, f64::min);
        Some(l)
    }
}

/// `|M(k√t) − ½·M̄(k²t)|` where `M̄` belongs to `(M_p²)`, plus the truncation flag.
pub fn sqrt_identity_residual(seq: &WeightSequence, k: f64, t: f64) -> (f64, bool) {
    let sq = seq.squared();
    let lhs = seq.associated(k * t.max(0.0).sqrt());
    let rhs = sq.associated(k * k * t.max(0.0));
    (
        (lhs.value - 0.5 * rhs.value).abs(),
        lhs.truncation_warning || rhs.truncation_warning,
    )
}

/// Least-squares slope of `ln M(ρ)` against `ln ρ` on `n` log-spaced points.
pub fn loglog_slope(seq: &WeightSequence, rho_lo: f64, rho_hi: f64, n: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let lr = rho_lo.ln() + (rho_hi.ln() - rho_lo.ln()) * i as f64 / (n - 1) as f64;
            (lr, seq.m(lr.exp()).ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sup(seq: &WeightSequence, rho: f64, order: usize) -> f64 {
        let cf = seq.closed.unwrap();
        (0..=order)
            .map(|p| p as f64 * rho.ln() - cf.ln_value(p))
            .fold(0.0, f64::max)
    }

    #[test]
    fn gevrey_two_satisfies_all_conditions() {
        let seq = WeightSequence::gevrey_factorial(2.0).unwrap();
        let rep = seq.check_conditions().unwrap();
        assert!(rep.m1);
        assert!(rep.m2.0);
        assert!(rep.m2.2 >= 4.0 - 1e-9, "H = {}", rep.m2.2);
        assert_eq!(rep.m3prime.0, Convergence::Converges);
        assert!((rep.m3prime.1 - std::f64::consts::PI.powi(2) / 6.0).abs() < 0.01);
    }

    #[test]
    fn factorial_table_is_log_convex() {
        let mut vals = vec![1.0];
        for p in 1..=20 {
            let last = *vals.last().unwrap();
            vals.push(last * p as f64);
        }
        let seq = WeightSequence::from_values(&vals).unwrap();
        assert!(seq.check_conditions().unwrap().m1);
    }

    #[test]
    fn broken_log_convexity_detected() {
        let mut vals = vec![1.0, 10.0, 1.0];
        let mut f = 2.0;
        for p in 3..=20 {
            f *= p as f64;
            vals.push(f);
        }
        let seq = WeightSequence::from_values(&vals).unwrap();
        assert!(!seq.check_conditions().unwrap().m1);
    }

    #[test]
    fn short_truncation_rejected() {
        let seq = WeightSequence::from_values(&[1.0, 1.0, 2.0, 6.0]).unwrap();
        assert!(matches!(
            seq.check_conditions(),
            Err(WeightError::TruncationTooShort { order: 3 })
        ));
    }

    #[test]
    fn invalid_tables_rejected() {
        assert!(WeightSequence::from_values(&[2.0, 3.0]).is_err());
        assert!(WeightSequence::from_values(&[1.0, -3.0]).is_err());
        assert!(WeightSequence::gevrey_factorial(1.0).is_err());
    }

    #[test]
    fn associated_function_anchor_values() {
        let seq = WeightSequence::gevrey_factorial(2.0).unwrap();
        assert_eq!(seq.m(0.0), 0.0);
        assert_eq!(seq.m(1.0), 0.0);
        let brute = brute_sup(&seq, 100.0, 512);
        assert!((seq.m(100.0) - brute).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_table_relative() {
        let seq = WeightSequence::gevrey_factorial(1.5).unwrap();
        let mut lnf = 0.0;
        for p in 1..=seq.order() {
            lnf += (p as f64).ln();
            if p < 2 {
                continue;
            }
            let rel = (seq.ln_values()[p] - 1.5 * lnf).abs() / (1.5 * lnf);
            assert!(rel < 1e-12);
        }
    }

    #[test]
    fn table_truncation_warns() {
        let seq = WeightSequence::from_ln_values((0..=10).map(|p| p as f64 * 0.1).collect())
            .unwrap();
        let a = seq.associated(1e6);
        assert_eq!(a.argmax, 10);
        assert!(a.truncation_warning);
    }

    #[test]
    fn squared_sequence_basics() {
        let seq = WeightSequence::gevrey_factorial(1.5).unwrap();
        let sq = seq.squared();
        assert_eq!(sq.kind(), SequenceKind::ExplicitTable);
        assert_eq!(sq.ln_values()[0], 0.0);
        assert!(sq.check_conditions().unwrap().m1);
        let fact = WeightSequence::from_values(&[1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0])
            .unwrap()
            .squared();
        assert!((fact.values()[4] - 576.0).abs() < 1e-9);
    }

    #[test]
    fn sqrt_identity_examples() {
        let seq = WeightSequence::gevrey_factorial(2.0).unwrap();
        assert_eq!(sqrt_identity_residual(&seq, 1.0, 0.0).0, 0.0);
        assert!(sqrt_identity_residual(&seq, 2.0, 9.0).0 <= 1e-10);
        let seq = WeightSequence::gevrey_factorial(1.5).unwrap();
        let (r, warn) = sqrt_identity_residual(&seq, 0.5, 100.0);
        assert!(r <= 1e-10 && !warn);
        // Independent brute-force check of both sides.
        let lhs = brute_sup(&seq, 0.5 * 10.0, 512);
        let rhs = (0..=512)
            .map(|p| p as f64 * 25.0f64.ln() - 2.0 * seq.closed.unwrap().ln_value(p))
            .fold(0.0, f64::max);
        assert!((lhs - 0.5 * rhs).abs() < 1e-10);
    }

    #[test]
    fn upper_constant_bounds_associated_function() {
        for seq in [
            WeightSequence::gevrey_factorial(1.5).unwrap(),
            WeightSequence::gevrey_power(2.0).unwrap(),
            WeightSequence::gevrey_gamma(1.5).unwrap(),
        ] {
            let cs = seq.gevrey_upper_constant().unwrap();
            let s = seq.s().unwrap();
            for i in 0..200 {
                let r = 10f64.powf(-1.0 + 8.0 * i as f64 / 199.0);
                assert!(seq.m(r) <= cs * r.powf(1.0 / s) + 1e-9);
            }
        }
    }

    #[test]
    fn breakpoints_are_ratios() {
        let seq = WeightSequence::gevrey_factorial(2.0).unwrap();
        let b = seq.breakpoints(30.0);
        assert_eq!(b.len(), 5);
        for (i, r) in b.iter().enumerate() {
            assert!((r - ((i + 1) * (i + 1)) as f64).abs() < 1e-9);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn associated_is_monotone(a in 0.0f64..1e5, b in 0.0f64..1e5, s in 1.1f64..3.0) {
                let seq = WeightSequence::gevrey_factorial(s).unwrap();
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                prop_assert!(seq.m(lo) <= seq.m(hi) + 1e-12);
            }

            #[test]
            fn vanishes_on_unit_interval(r in 0.0f64..=1.0, s in 1.1f64..3.0) {
                prop_assert_eq!(WeightSequence::gevrey_factorial(s).unwrap().m(r), 0.0);
                prop_assert_eq!(WeightSequence::gevrey_gamma(s).unwrap().m(r), 0.0);
            }

            #[test]
            fn closed_form_sup_matches_scan(r in 1.0f64..5e3, s in 1.2f64..2.5) {
                let seq = WeightSequence::gevrey_factorial(s).unwrap();
                prop_assert!((seq.m(r) - brute_sup(&seq, r, 2048)).abs() < 1e-9);
            }

            #[test]
            fn sqrt_identity_on_grid(k in 0.01f64..10.0, t in 0.0f64..1e6) {
                for seq in [
                    WeightSequence::gevrey_factorial(1.5).unwrap(),
                    WeightSequence::gevrey_factorial(2.0).unwrap(),
                    WeightSequence::gevrey_power(1.7).unwrap(),
                ] {
                    prop_assert!(sqrt_identity_residual(&seq, k, t).0 <= 1e-10);
                }
            }
        }
    }
}
