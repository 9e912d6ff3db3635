//! Rational Laplace transforms and their exact inverses.
//!
//! A transform is stored as `gain · ∏(λ − r_i) / ∏(λ − p_j)^{m_j}`. The time
//! domain function is a finite sum of `t^k e^{p t}` terms recovered from the
//! residues at each pole, so no numerical inversion is involved.

use num_complex::Complex64;

type C = Complex64;

const MERGE_TOL: f64 = 1e-11;

fn close(a: C, b: C) -> bool {
    (a - b).norm() <= MERGE_TOL * a.norm().max(b.norm()).max(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rational {
    pub gain: C,
    pub roots: Vec<C>,
    pub poles: Vec<(C, usize)>,
}

impl Rational {
    pub fn constant(gain: C) -> Self {
        Rational {
            gain,
            roots: Vec::new(),
            poles: Vec::new(),
        }
    }

    pub fn new(gain: C, roots: Vec<C>, poles: Vec<C>) -> Self {
        let mut r = Rational::constant(gain);
        r.roots = roots;
        for p in poles {
            r.push_pole(p, 1);
        }
        r.simplify();
        r
    }

    fn push_pole(&mut self, p: C, m: usize) {
        if let Some(slot) = self.poles.iter_mut().find(|(q, _)| close(*q, p)) {
            slot.1 += m;
        } else {
            self.poles.push((p, m));
        }
    }

    /// Cancels roots against coincident poles.
    fn simplify(&mut self) {
        let mut kept = Vec::with_capacity(self.roots.len());
        for r in std::mem::take(&mut self.roots) {
            if let Some(slot) = self.poles.iter_mut().find(|(q, m)| *m > 0 && close(*q, r)) {
                slot.1 -= 1;
            } else {
                kept.push(r);
            }
        }
        self.roots = kept;
        self.poles.retain(|(_, m)| *m > 0);
    }

    pub fn numerator_degree(&self) -> usize {
        self.roots.len()
    }

    pub fn denominator_degree(&self) -> usize {
        self.poles.iter().map(|(_, m)| m).sum()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.numerator_degree() < self.denominator_degree()
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        let mut out = self.clone();
        out.gain *= other.gain;
        out.roots.extend(other.roots.iter().copied());
        for &(p, m) in &other.poles {
            out.push_pole(p, m);
        }
        out.simplify();
        out
    }

    /// Multiplies by `λ^{-n}`.
    pub fn over_lambda_pow(&self, n: usize) -> Rational {
        let mut out = self.clone();
        if n > 0 {
            out.push_pole(C::new(0.0, 0.0), n);
            out.simplify();
        }
        out
    }

    pub fn eval(&self, lambda: C) -> C {
        let mut v = self.gain;
        for r in &self.roots {
            v *= lambda - r;
        }
        for &(p, m) in &self.poles {
            v /= (lambda - p).powu(m as u32);
        }
        v
    }

    pub fn max_pole_re(&self) -> f64 {
        self.poles
            .iter()
            .map(|(p, _)| p.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Inverse Laplace transform by residues. Requires a strictly proper transform.
    pub fn invert(&self) -> ExpPoly {
        assert!(
            self.is_strictly_proper(),
            "inverse of a non-strictly-proper rational transform"
        );
        let mut terms = Vec::with_capacity(self.poles.len());
        for (idx, &(p, m)) in self.poles.iter().enumerate() {
            // Taylor coefficients of g(λ) = F(λ)(λ − p)^m at p, up to order m−1.
            let mut series = vec![C::new(0.0, 0.0); m];
            series[0] = self.gain;
            for r in &self.roots {
                // factor (p − r) + u
                series_mul_linear(&mut series, p - r);
            }
            for (jdx, &(q, mq)) in self.poles.iter().enumerate() {
                if jdx == idx {
                    continue;
                }
                for _ in 0..mq {
                    series_div_linear(&mut series, p - q);
                }
            }
            // Residue of g(λ)e^{λt}/(λ−p)^m = e^{pt} Σ_k g_k t^{m−1−k}/(m−1−k)!
            // stored as coefficients of t^j / j!.
            let coeffs: Vec<C> = (0..m).map(|j| series[m - 1 - j]).collect();
            terms.push(ExpTerm { pole: p, coeffs });
        }
        ExpPoly { terms }
    }
}

fn series_mul_linear(s: &mut [C], c0: C) {
    // s ← s · (c0 + u), truncated
    for k in (0..s.len()).rev() {
        let prev = if k > 0 { s[k - 1] } else { C::new(0.0, 0.0) };
        s[k] = s[k] * c0 + prev;
    }
}

fn series_div_linear(s: &mut [C], c0: C) {
    // s ← s / (c0 + u): solve out·(c0 + u) = s
    let mut prev = C::new(0.0, 0.0);
    for k in 0..s.len() {
        let v = (s[k] - prev) / c0;
        s[k] = v;
        prev = v;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm {
    pub pole: C,
    /// Coefficients of `t^j / j!`.
    pub coeffs: Vec<C>,
}

/// `f(t) = Σ e^{p t} Σ_j c_j t^j / j!`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPoly {
    pub terms: Vec<ExpTerm>,
}

impl ExpPoly {
    pub fn eval(&self, t: f64) -> C {
        let mut total = C::new(0.0, 0.0);
        for term in &self.terms {
            let mut poly = C::new(0.0, 0.0);
            let mut tj = 1.0;
            for (j, c) in term.coeffs.iter().enumerate() {
                if j > 0 {
                    tj *= t / j as f64;
                }
                poly += c * tj;
            }
            total += poly * (term.pole * t).exp();
        }
        total
    }
}
