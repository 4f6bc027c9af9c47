//! Double-exponential quadrature.
//!
//! Finite intervals use the tanh-sinh map `x = tanh(π/2 · sinh t)`; the whole
//! real line uses `x = sinh(sinh t)`. Each refinement level halves the step and
//! only evaluates the new (odd) nodes. Node tables for finite intervals are
//! built once per level and shared between threads.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::{ensure_domain, Error, Result};

const MAX_LEVEL: u32 = 16;
const MIN_LEVEL: u32 = 3;
/// Level-0 step; the coarsest grid is `t = k · H0`.
const H0: f64 = 1.0;
const WEIGHT_FLOOR: f64 = 1e-300;

/// Tolerances and refinement limit shared by every integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_level: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-14, max_level: 12 }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_level(mut self, max_level: u32) -> Self {
        self.max_level = max_level;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_domain!(
            self.rel_tol > 0.0 && self.rel_tol.is_finite(),
            "rel_tol must be positive, got {}",
            self.rel_tol
        );
        ensure_domain!(
            self.abs_tol > 0.0 && self.abs_tol.is_finite(),
            "abs_tol must be positive, got {}",
            self.abs_tol
        );
        ensure_domain!(
            (MIN_LEVEL..=MAX_LEVEL).contains(&self.max_level),
            "max_level must lie in [{MIN_LEVEL}, {MAX_LEVEL}], got {}",
            self.max_level
        );
        Ok(())
    }
}

/// A value with an absolute error estimate and the method that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValueWithError {
    pub value: f64,
    pub abs_err_est: f64,
    pub method: &'static str,
}

impl ValueWithError {
    pub fn exact(value: f64, method: &'static str) -> Self {
        Self { value, abs_err_est: 0.0, method }
    }

    /// Error estimate of `value` once rounding of a closed form is taken into account.
    pub fn closed_form(value: f64, method: &'static str) -> Self {
        Self { value, abs_err_est: 64.0 * f64::EPSILON * value.abs(), method }
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    /// Distance `1 - |x|` of the abscissa from the nearer endpoint of `[-1, 1]`.
    compl: f64,
    weight: f64,
}

/// Nodes with `t > 0` added at `level` (all of level 0 except `t = 0`).
fn level_nodes(level: u32) -> &'static [Node] {
    static TABLES: [OnceLock<Vec<Node>>; (MAX_LEVEL + 1) as usize] =
        [const { OnceLock::new() }; (MAX_LEVEL + 1) as usize];
    TABLES[level as usize].get_or_init(|| build_level(level))
}

fn build_level(level: u32) -> Vec<Node> {
    let h = H0 / f64::from(1u32 << level);
    let (start, stride) = if level == 0 { (1u64, 1u64) } else { (1, 2) };
    let mut out = Vec::new();
    let mut k = start;
    loop {
        let t = k as f64 * h;
        let s = FRAC_PI_2 * t.sinh();
        let e = s.exp();
        let ch = s.cosh();
        let compl = 1.0 / (e * ch);
        let weight = FRAC_PI_2 * t.cosh() / (ch * ch);
        if !(weight >= WEIGHT_FLOOR && compl > 0.0) || !compl.is_normal() {
            break;
        }
        out.push(Node { compl, weight });
        k += stride;
    }
    out
}

fn finish(
    value: f64,
    prev: f64,
    abs_sum: f64,
    level: u32,
    cfg: &QuadConfig,
    method: &'static str,
) -> Option<ValueWithError> {
    let roundoff = 8.0 * f64::EPSILON * abs_sum;
    let diff = (value - prev).abs();
    let err = diff.max(cfg.abs_tol).max(roundoff);
    let converged = level >= MIN_LEVEL && diff <= (cfg.rel_tol * value.abs()).max(cfg.abs_tol).max(roundoff);
    converged.then_some(ValueWithError { value, abs_err_est: err, method })
}

/// `∫_a^b f` where `f` receives `(x, x - a, b - x)`; the two distances are
/// accurate near the endpoints, which lets integrands with endpoint
/// singularities avoid cancellation.
pub fn integrate_finite_dist<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<ValueWithError>
where
    F: Fn(f64, f64, f64) -> f64,
{
    cfg.validate()?;
    ensure_domain!(a.is_finite() && b.is_finite() && a < b, "need finite a < b, got [{a}, {b}]");
    let half = 0.5 * (b - a);
    let mid = a + half;
    let eval = |n: &Node| -> (f64, f64) {
        let d = half * n.compl;
        let lo = f(a + d, d, b - a - d);
        let hi = f(b - d, b - a - d, d);
        (n.weight * (lo + hi), n.weight * (lo.abs() + hi.abs()))
    };

    let center = f(mid, half, half);
    let mut sum = FRAC_PI_2 * center;
    let mut abs_sum = sum.abs();
    for n in level_nodes(0) {
        let (s, a_) = eval(n);
        sum += s;
        abs_sum += a_;
    }
    let mut h = H0;
    let mut estimate = half * h * sum;
    let mut prev;
    for level in 1..=cfg.max_level {
        let mut s_new = 0.0;
        for n in level_nodes(level) {
            let (s, a_) = eval(n);
            s_new += s;
            abs_sum += a_;
        }
        sum += s_new;
        h *= 0.5;
        prev = estimate;
        estimate = half * h * sum;
        if !estimate.is_finite() {
            return Err(Error::NoConvergence { value: estimate, abs_err_est: f64::INFINITY });
        }
        if let Some(v) = finish(estimate, prev, half * h * abs_sum, level, cfg, "tanh-sinh") {
            return Ok(v);
        }
        if level == cfg.max_level {
            return Err(Error::NoConvergence { value: estimate, abs_err_est: (estimate - prev).abs() });
        }
    }
    unreachable!("max_level >= MIN_LEVEL")
}

/// `∫_a^b f` by tanh-sinh quadrature. Integrable power-law singularities at
/// the endpoints are allowed.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<ValueWithError>
where
    F: Fn(f64) -> f64,
{
    integrate_finite_dist(|x, _, _| f(x), a, b, cfg)
}

/// Smallest `t` the real-line integrator always visits before it may stop a side.
const LINE_T_MIN: f64 = 3.0;
/// `sinh(sinh t)` overflows shortly after this.
const LINE_T_MAX: f64 = 6.5;
const LINE_QUIET_RUN: u32 = 4;

/// `∫_ℝ f` for integrands with exponential decay, via `x = sinh(sinh t)`.
/// Each side of the grid stops after four consecutive negligible terms.
pub fn integrate_real_line<F>(f: F, cfg: &QuadConfig) -> Result<ValueWithError>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    let term = |t: f64| -> f64 {
        let s = t.sinh();
        let w = s.cosh() * t.cosh();
        let v = f(s.sinh());
        if v == 0.0 || w == 0.0 {
            0.0
        } else {
            w * v
        }
    };
    // One side of the grid: k = start, start + stride, ... with step h.
    let side = |sign: f64, h: f64, start: u64, stride: u64, scale: f64| -> (f64, f64) {
        let mut acc = 0.0;
        let mut acc_abs = 0.0;
        let mut quiet = 0;
        let mut k = start;
        loop {
            let t = k as f64 * h;
            if t > LINE_T_MAX {
                break;
            }
            let v = term(sign * t);
            acc += v;
            acc_abs += v.abs();
            if v.abs() <= 1e-20 * scale || v.abs() < WEIGHT_FLOOR {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= LINE_QUIET_RUN && t >= LINE_T_MIN {
                break;
            }
            k += stride;
        }
        (acc, acc_abs)
    };

    let mut h = H0;
    let c = term(0.0);
    let (p, pa) = side(1.0, h, 1, 1, c.abs());
    let (m, ma) = side(-1.0, h, 1, 1, c.abs());
    let mut sum = c + p + m;
    let mut abs_sum = c.abs() + pa + ma;
    let mut estimate = h * sum;
    for level in 1..=cfg.max_level {
        h *= 0.5;
        let scale = abs_sum * h;
        let (p, pa) = side(1.0, h, 1, 2, scale / h);
        let (m, ma) = side(-1.0, h, 1, 2, scale / h);
        sum += p + m;
        abs_sum += pa + ma;
        let prev = estimate;
        estimate = h * sum;
        if !estimate.is_finite() {
            return Err(Error::NoConvergence { value: estimate, abs_err_est: f64::INFINITY });
        }
        if let Some(v) = finish(estimate, prev, h * abs_sum, level, cfg, "sinh-sinh") {
            return Ok(v);
        }
        if level == cfg.max_level {
            return Err(Error::NoConvergence { value: estimate, abs_err_est: (estimate - prev).abs() });
        }
    }
    unreachable!("max_level >= MIN_LEVEL")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn config_validation() {
        assert!(QuadConfig::default().validate().is_ok());
        assert!(QuadConfig::default().with_max_level(2).validate().is_err());
        assert!(QuadConfig::default().with_max_level(17).validate().is_err());
        assert!(QuadConfig::default().with_rel_tol(0.0).validate().is_err());
    }

    #[test]
    fn finite_basics() {
        let cfg = QuadConfig::default();
        let v = integrate_finite(|_| 1.0, -FRAC_PI_2, FRAC_PI_2, &cfg).unwrap();
        assert!((v.value - PI).abs() < 1e-14);
        let v = integrate_finite(|t| t.powf(-0.5), 0.0, 1.0, &cfg).unwrap();
        assert!((v.value - 2.0).abs() < 1e-12, "{v:?}");
        assert!(integrate_finite(|t| t, 1.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn distance_form_handles_strong_singularity() {
        // ∫_0^1 t^{-0.95} dt = 20, only reachable with accurate distances.
        let cfg = QuadConfig::default();
        let v = integrate_finite_dist(|_, da, _| da.powf(-0.95), 0.0, 1.0, &cfg).unwrap();
        assert!((v.value - 20.0).abs() < 1e-9, "{v:?}");
    }

    #[test]
    fn real_line_basics() {
        let cfg = QuadConfig::default();
        let v = integrate_real_line(|x| 1.0 / x.cosh(), &cfg).unwrap();
        assert!((v.value - PI).abs() < 1e-13, "{v:?}");
        let v = integrate_real_line(|x| x * (-x * x).exp(), &cfg).unwrap();
        assert!(v.value.abs() < 1e-14, "{v:?}");
    }
}
