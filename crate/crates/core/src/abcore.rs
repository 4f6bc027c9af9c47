//! The parameter integrals `a`, `b`, `a'` and the normalized product `Θ`,
//! with closed forms for the small and all-ones cases.
//!
//! ```text
//! a(α; α_1..α_d) = ∫_ℝ cosh^{-α}(x) Π F_{α_j}(ix) dx,         α > Σ α_j
//! b(α; α_1..α_d) = ∫_{-π/2}^{π/2} cos^α(x) Π F_{α_j}(x) dx,   α > -1
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::error::{ensure_domain, Error, Result};
use crate::exact::{binomial, factorial, rat_int, PiPoly, RatPoly, Rational};
use crate::quad::{integrate_finite_dist, integrate_real_line, QuadConfig, ValueWithError};
use crate::specfun::{
    c_one_dim_closed, cosh_integral_scaled, f_real_pair, f_total, gamma_ratio, ln_cosh, ln_gamma, rgamma,
};

const SQRT_PI: f64 = 1.772_453_850_905_516;
/// Distance from `-1` below which the first argument of `b` is taken to be `-1`.
pub const POLE_SNAP: f64 = 1e-12;

/// Sorted multiset of non-negative reals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamMultiset {
    entries: Vec<f64>,
}

impl ParamMultiset {
    pub fn new(mut entries: Vec<f64>) -> Result<Self> {
        for &e in &entries {
            ensure_domain!(e.is_finite() && e >= 0.0, "parameters must be finite and >= 0, got {e}");
        }
        entries.sort_by(f64::total_cmp);
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `k` copies of `v` (`v ≥ 0`).
    pub fn repeated(v: f64, k: usize) -> Self {
        assert!(v >= 0.0, "parameters must be >= 0");
        Self { entries: vec![v; k] }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// Distinct values with their multiplicities, ascending.
    pub fn distinct(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &e in &self.entries {
            match out.last_mut() {
                Some((v, m)) if *v == e => *m += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    }

    pub fn all_equal_to(&self, v: f64) -> bool {
        self.entries.iter().all(|&e| e == v)
    }

    /// Every entry multiplied by `s ≥ 0`.
    pub fn scaled(&self, s: f64) -> Self {
        Self { entries: self.entries.iter().map(|e| e * s).collect() }
    }

    /// Multiset union.
    pub fn union(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        entries.sort_by(f64::total_cmp);
        Self { entries }
    }
}

impl FromIterator<f64> for ParamMultiset {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect()).expect("parameters must be finite and >= 0")
    }
}

/// Product of two estimates with first-order error propagation.
pub(crate) fn mul_err(a: &ValueWithError, b: &ValueWithError, method: &'static str) -> ValueWithError {
    ValueWithError {
        value: a.value * b.value,
        abs_err_est: a.value.abs() * b.abs_err_est + b.value.abs() * a.abs_err_est + a.abs_err_est * b.abs_err_est,
        method,
    }
}

pub(crate) fn scale_err(a: &ValueWithError, s: f64) -> ValueWithError {
    ValueWithError { value: a.value * s, abs_err_est: a.abs_err_est * s.abs(), method: a.method }
}

// ---------------------------------------------------------------------------
// a

/// `a(α; ∅) = √π Γ(α/2)/Γ((α+1)/2)`.
fn a_empty(alpha: f64) -> f64 {
    SQRT_PI * gamma_ratio(0.5 * alpha, 0.5 * (alpha + 1.0))
}

/// `a(α; α_1) = π Γ(α/2) Γ((α_1+1)/2) / (2 Γ((α+1)/2) Γ((α_1+2)/2))`.
fn a_single(alpha: f64, a1: f64) -> f64 {
    0.5 * PI * gamma_ratio(0.5 * alpha, 0.5 * (alpha + 1.0)) * gamma_ratio(0.5 * (a1 + 1.0), 0.5 * a1 + 1.0)
}

/// `a_d(α; 1) = π Γ(α-d) / (2^{α-d-1} Γ((α+1)/2) Γ((α+1)/2 - d))`, the all-ones case.
/// Vanishes when `(α+1)/2 - d` is a non-positive integer.
pub fn a_ones(d: u32, alpha: f64) -> Result<f64> {
    let df = f64::from(d);
    ensure_domain!(alpha > df, "a_d(alpha; 1) needs alpha > d, got alpha = {alpha}, d = {d}");
    let h = 0.5 * (alpha + 1.0);
    let r = rgamma(h - df);
    if r == 0.0 {
        return Ok(0.0);
    }
    let log_mag = ln_gamma(alpha - df) - ln_gamma(h) - (alpha - df - 1.0) * std::f64::consts::LN_2;
    Ok(PI * log_mag.exp() * r)
}

/// `∂_α a_k(α; 1)` at `α = k+1` for even `k`: `(π/k)(-1)^{k/2-1}`.
pub fn a_prime_ones_at_pole(k: u32) -> Result<f64> {
    ensure_domain!(k >= 2 && k.is_multiple_of(2), "need an even k >= 2, got {k}");
    let sign = if (k / 2 - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * PI / f64::from(k))
}

struct ImagFactor {
    alpha: f64,
    mult: i32,
    /// `F_α(0) = 1/(2c_{(α-1)/2})`.
    amp: f64,
}

fn imag_factors(params: &ParamMultiset) -> Vec<ImagFactor> {
    params
        .distinct()
        .into_iter()
        .map(|(alpha, m)| ImagFactor { alpha, mult: m as i32, amp: 0.5 * f_total(alpha) })
        .collect()
}

/// `cosh^{-α}(x) Π F_{α_j}(ix)`, evaluated as `cosh^{-τ} Π (A_j sech^{α_j} + i R_j)`
/// with `τ = α - Σα_j`, so nothing overflows at large `|x|`.
fn a_integrand(x: f64, tau: f64, factors: &[ImagFactor], log_weight: bool) -> Complex64 {
    let lc = ln_cosh(x);
    let mut w = (-tau * lc).exp();
    if log_weight {
        w *= -lc;
    }
    if w == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut prod = Complex64::new(w, 0.0);
    for f in factors {
        let z = Complex64::new(f.amp * (-f.alpha * lc).exp(), cosh_integral_scaled(f.alpha, x));
        prod *= z.powi(f.mult);
    }
    prod
}

fn check_a_domain(alpha: f64, params: &ParamMultiset) -> Result<()> {
    ensure_domain!(
        alpha > params.sum(),
        "a needs alpha > sum of parameters, got alpha = {alpha}, sum = {}",
        params.sum()
    );
    Ok(())
}

fn a_quadrature(alpha: f64, params: &ParamMultiset, cfg: &QuadConfig, log_weight: bool) -> Result<ValueWithError> {
    let tau = alpha - params.sum();
    let factors = imag_factors(params);
    let method = if log_weight { "a'-quadrature" } else { "a-quadrature" };
    let mut v = integrate_real_line(|x| a_integrand(x, tau, &factors, log_weight).re, cfg)?;
    v.method = method;
    Ok(v)
}

/// `a(α; params)`. Closed forms for `d ≤ 1` and for all-ones parameters,
/// quadrature otherwise.
pub fn a_fn(alpha: f64, params: &ParamMultiset, cfg: &QuadConfig) -> Result<ValueWithError> {
    check_a_domain(alpha, params)?;
    match params.len() {
        0 => Ok(ValueWithError::closed_form(a_empty(alpha), "a-closed-d0")),
        1 => Ok(ValueWithError::closed_form(a_single(alpha, params.entries()[0]), "a-closed-d1")),
        d if params.all_equal_to(1.0) => Ok(ValueWithError::closed_form(a_ones(d as u32, alpha)?, "a-closed-ones")),
        _ => a_quadrature(alpha, params, cfg, false),
    }
}

/// Quadrature of `a` returning the real part together with the imaginary
/// residue, which vanishes by symmetry.
pub fn a_fn_with_residual(alpha: f64, params: &ParamMultiset, cfg: &QuadConfig) -> Result<(ValueWithError, f64)> {
    check_a_domain(alpha, params)?;
    let tau = alpha - params.sum();
    let factors = imag_factors(params);
    let re = integrate_real_line(|x| a_integrand(x, tau, &factors, false).re, cfg)?;
    let im = integrate_real_line(|x| a_integrand(x, tau, &factors, false).im, cfg)?;
    Ok((ValueWithError { method: "a-quadrature", ..re }, im.value))
}

/// `∂a/∂α = -∫ cosh^{-α}(x) ln cosh(x) Π F_{α_j}(ix) dx`.
pub fn a_prime(alpha: f64, params: &ParamMultiset, cfg: &QuadConfig) -> Result<ValueWithError> {
    check_a_domain(alpha, params)?;
    let d = params.len() as u32;
    if d >= 2 && d.is_multiple_of(2) && params.all_equal_to(1.0) && alpha == f64::from(d + 1) {
        return Ok(ValueWithError::closed_form(a_prime_ones_at_pole(d)?, "a'-closed-pole"));
    }
    if params.all_equal_to(1.0) {
        if let Some(v) = a_prime_ones_at_zero(d, alpha) {
            return Ok(ValueWithError::closed_form(v, "a'-closed-ones"));
        }
    }
    a_quadrature(alpha, params, cfg, true)
}

/// `∂_α a_d(α; 1)` where `a_d(α; 1)` vanishes, i.e. `(α+1)/2 - d = -j` for some
/// `j ∈ {0, 1, ...}`. There `∂_z (1/Γ(z))` at `z = -j` equals `(-1)^j j!`.
fn a_prime_ones_at_zero(d: u32, alpha: f64) -> Option<f64> {
    let df = f64::from(d);
    let z = 0.5 * (alpha + 1.0) - df;
    if !(z <= 0.0 && z == z.round()) || alpha <= df {
        return None;
    }
    let j = (-z) as u64;
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let log_mag = ln_gamma(alpha - df) - ln_gamma(0.5 * (alpha + 1.0)) - (alpha - df - 1.0) * std::f64::consts::LN_2
        + ln_gamma(j as f64 + 1.0);
    Some(0.5 * PI * sign * log_mag.exp())
}

/// Exact `a'_{2q}(2q(2m-1)+1; 2m-1) = B(m,m)^{2q} (-1)^{q+1} (π/2) ∫_0^1 t^{q-1} P_m(-t)^{2q} dt`.
pub fn a_prime_odd_repeated(m: u32, q: u32) -> Result<PiPoly> {
    ensure_domain!(m >= 1 && q >= 1, "need m, q >= 1, got m = {m}, q = {q}");
    let mm = u64::from(m);
    // B(m, m) = ((m-1)!)^2 / (2m-1)!
    let b = Rational::new(factorial(mm - 1).pow(2), factorial(2 * mm - 1));
    let pm = RatPoly((0..mm).map(|r| rat_int(binomial(2 * mm - 1, mm - 1 - r))).collect());
    let integral = pm.reflect().pow(2 * q).integrate_unit(q - 1);
    let sign = if q % 2 == 1 { 1 } else { -1 };
    let coef = num_traits::pow(b, 2 * q as usize) * integral * Rational::new(BigInt::from(sign), BigInt::from(2));
    Ok(PiPoly::monomial(coef, 1))
}

// ---------------------------------------------------------------------------
// b

/// `lim_{α→-1} (α+1) b(α; params)`: 2 for no parameters, else `Π √π Γ((α_i+1)/2)/Γ((α_i+2)/2)`.
pub fn limit_alpha_plus_one_times_b(params: &ParamMultiset) -> f64 {
    if params.is_empty() {
        return 2.0;
    }
    params.entries().iter().map(|&a| f_total(a)).product()
}

/// `(α+1) Γ((α+1)/2) / Γ((α+2)/2) = 2 Γ((α+3)/2) / Γ((α+2)/2)`, finite at `α = -1`.
fn scaled_half_ratio(alpha: f64) -> f64 {
    2.0 * gamma_ratio(0.5 * (alpha + 3.0), 0.5 * (alpha + 2.0))
}

fn b_scaled_closed(alpha: f64, params: &ParamMultiset) -> Option<(f64, &'static str)> {
    match params.len() {
        // √π Γ((α+1)/2)/Γ((α+2)/2)
        0 => Some((SQRT_PI * scaled_half_ratio(alpha), "b-closed-d0")),
        // π Γ((α+1)/2) Γ((α_1+1)/2) / (2 Γ((α+2)/2) Γ((α_1+2)/2))
        1 => {
            let a1 = params.entries()[0];
            Some((0.5 * PI * scaled_half_ratio(alpha) * gamma_ratio(0.5 * (a1 + 1.0), 0.5 * a1 + 1.0), "b-closed-d1"))
        }
        d if params.all_equal_to(1.0) => {
            // (α+1) 2^{α+d} Γ((α+1)/2) Γ((α+1)/2+d) / Γ(α+d+1)
            let df = d as f64;
            let lg = ln_gamma(0.5 * (alpha + 2.0)) + ln_gamma(0.5 * (alpha + 1.0) + df) - ln_gamma(alpha + df + 1.0);
            Some((2f64.powf(alpha + df) * scaled_half_ratio(alpha) * lg.exp(), "b-closed-ones"))
        }
        _ => None,
    }
}

/// `b_d(α; 1) = 2^{α+d} Γ((α+1)/2) Γ((α+1)/2+d) / Γ(α+d+1)`.
pub fn b_ones(d: u32, alpha: f64) -> Result<f64> {
    ensure_domain!(alpha > -1.0, "b_d(alpha; 1) needs alpha > -1, got {alpha}");
    let lg = ln_gamma(0.5 * (alpha + 1.0)) + ln_gamma(0.5 * (alpha + 1.0) + f64::from(d))
        - ln_gamma(alpha + f64::from(d) + 1.0);
    Ok(2f64.powf(alpha + f64::from(d)) * lg.exp())
}

/// `(α+1) · b(α; params)` for `α ≥ -1`; at `α = -1` this is the limit value.
///
/// The integrand is split as `cos^α(x) P(x) = P(π/2) cos^α(x) sin²((π/2 - x)/2) + cos^α(x) R(x)`
/// where the first piece integrates in closed form and `R` vanishes at both ends,
/// so the factor `α + 1` is applied analytically rather than by cancellation.
pub fn b_scaled(alpha: f64, params: &ParamMultiset, cfg: &QuadConfig) -> Result<ValueWithError> {
    ensure_domain!(alpha >= -1.0 - POLE_SNAP, "b needs alpha > -1, got {alpha}");
    let alpha = if (alpha + 1.0).abs() <= POLE_SNAP { -1.0 } else { alpha };
    if alpha == -1.0 {
        return Ok(ValueWithError::closed_form(limit_alpha_plus_one_times_b(params), "b-pole-limit"));
    }
    if let Some((v, method)) = b_scaled_closed(alpha, params) {
        return Ok(ValueWithError::closed_form(v, method));
    }
    b_scaled_quadrature(alpha, params, cfg)
}

fn b_scaled_quadrature(alpha: f64, params: &ParamMultiset, cfg: &QuadConfig) -> Result<ValueWithError> {
    // Needs P(-π/2) = 0, i.e. at least one parameter; the empty case is closed-form.
    debug_assert!(!params.is_empty());
    let dist = params.distinct();
    let totals: Vec<f64> = dist.iter().map(|&(a, _)| f_total(a)).collect();
    let p_end: f64 = dist.iter().zip(&totals).map(|(&(_, m), t)| t.powi(m as i32)).product();
    // (α+1) F_α(π/2) / 2 · P(π/2)
    let head = 0.5 * SQRT_PI * scaled_half_ratio(alpha) * p_end;

    let r_fn = |delta: f64, delta_c: f64| -> f64 {
        let pairs: Vec<(f64, f64)> = dist.iter().map(|&(a, _)| f_real_pair(a, delta, delta_c)).collect();
        if delta <= delta_c {
            // R = P(x) - P(π/2) sin²(δ/2)
            let p: f64 = pairs.iter().zip(&dist).map(|(&(f, _), &(_, m))| f.powi(m as i32)).product();
            p - p_end * (0.5 * delta).sin().powi(2)
        } else {
            // P(x) - P(π/2) = -Σ_k (Π_{j<k} F_j) G_k (Π_{j>k} T_j), over the entries with multiplicity.
            let mut diff = 0.0;
            let mut left = 1.0;
            let mut right: f64 = p_end;
            for ((&(f, g), t), &(_, m)) in pairs.iter().zip(&totals).zip(&dist) {
                for _ in 0..m {
                    right /= t;
                    diff -= left * g * right;
                    left *= f;
                }
            }
            diff + p_end * (0.5 * delta_c).sin().powi(2)
        }
    };
    let v = integrate_finite_dist(
        |_, d, dc| {
            let c = d.min(dc).sin();
            if c == 0.0 {
                return 0.0;
            }
            c.powf(alpha) * r_fn(d, dc)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        cfg,
    )?;
    let s = alpha + 1.0;
    Ok(ValueWithError {
        value: head + s * v.value,
        abs_err_est: s * v.abs_err_est + 64.0 * f64::EPSILON * head.abs(),
        method: "b-quadrature",
    })
}

/// `b(α; params)` for `α > -1`.
pub fn b_fn(alpha: f64, params: &ParamMultiset, cfg: &QuadConfig) -> Result<ValueWithError> {
    ensure_domain!(alpha > -1.0, "b needs alpha > -1, got {alpha}");
    let s = alpha + 1.0;
    let v = b_scaled(alpha, params, cfg)?;
    Ok(ValueWithError { value: v.value / s, abs_err_est: v.abs_err_est / s, method: v.method })
}

/// `b` through the representation
/// `∫_{-1}^{1} (1-t²)^{(α-1)/2} Π (1/(2c_{(α_j-1)/2}) + ∫_0^t (1-s²)^{(α_j-1)/2} ds) dt`,
/// with nested quadrature. Slow; meant as an independent cross-check.
pub fn b_fn_alt(alpha: f64, params: &ParamMultiset, cfg: &QuadConfig) -> Result<ValueWithError> {
    ensure_domain!(alpha > -1.0, "b needs alpha > -1, got {alpha}");
    let dist = params.distinct();
    let inner_cfg = *cfg;
    let failure = std::cell::Cell::new(None::<Error>);
    let outer = integrate_finite_dist(
        |t, d_lo, d_hi| {
            // 1 - t² = (1 + t)(1 - t) with both factors accurate.
            let w = (d_lo * d_hi).powf(0.5 * (alpha - 1.0));
            if w == 0.0 {
                return 0.0;
            }
            let mut prod = w;
            for &(a, m) in &dist {
                let e = 0.5 * (a - 1.0);
                let inner = if t == 0.0 {
                    0.0
                } else {
                    let (lo, hi) = if t > 0.0 { (0.0, t) } else { (t, 0.0) };
                    // Distances of s to ±1 are built from the outer distances.
                    let r = integrate_finite_dist(
                        |s, ds_lo, ds_hi| {
                            let (p, q) = if t < 0.0 { (d_lo + ds_lo, 1.0 - s) } else { (1.0 + s, d_hi + ds_hi) };
                            (p * q).powf(e)
                        },
                        lo,
                        hi,
                        &inner_cfg,
                    );
                    match r {
                        Ok(v) => t.signum() * v.value,
                        Err(err) => {
                            failure.set(Some(err));
                            0.0
                        }
                    }
                };
                prod *= (0.5 * f_total(a) + inner).powi(m as i32);
            }
            prod
        },
        -1.0,
        1.0,
        cfg,
    )?;
    if let Some(err) = failure.take() {
        return Err(err);
    }
    Ok(ValueWithError { method: "b-alt-quadrature", ..outer })
}

// ---------------------------------------------------------------------------
// Θ

/// `Θ(x; Y; Z) = (1/2π) Π_{ω ∈ Y ∪ Z} c_{ω-1/2} · a(2x + 2ΣY + 2; 2Y) · (2x + 2ΣY + 1) · b(2x + 2ΣY; 2Z)`.
///
/// At `2x + 2ΣY = -1` the product `(2x+2ΣY+1) b(·)` takes its limiting value.
pub fn theta_fn(x: f64, y: &ParamMultiset, z: &ParamMultiset, cfg: &QuadConfig) -> Result<ValueWithError> {
    ensure_domain!(x >= -0.5, "Theta needs x >= -1/2, got {x}");
    let s = 2.0 * x + 2.0 * y.sum();
    let pref: f64 =
        y.entries().iter().chain(z.entries()).map(|&w| c_one_dim_closed(w - 0.5)).product::<f64>() / (2.0 * PI);
    if pref == 0.0 {
        return Ok(ValueWithError::exact(0.0, "theta"));
    }
    let a = a_fn(s + 2.0, &y.scaled(2.0), cfg)?;
    let b = b_scaled(s, &z.scaled(2.0), cfg)?;
    Ok(scale_err(&mul_err(&a, &b, "theta"), pref))
}

/// Both sides of `∫_{-π/2}^{π/2} e^{2iqθ} Q(e^{2iθ}) ln cos θ dθ = (-1)^{q+1} (π/2) ∫_0^1 t^{q-1} Q(-t) dt`:
/// the left by quadrature of the real part, the right exactly.
pub fn poly_log_cos_check(q: u32, coeffs: &[Rational], cfg: &QuadConfig) -> Result<(f64, f64)> {
    ensure_domain!(q >= 1, "need q >= 1");
    let c: Vec<f64> = coeffs.iter().map(crate::exact::rational_to_f64).collect();
    let lhs = integrate_finite_dist(
        |th, d, dc| {
            let lc = d.min(dc).sin().ln();
            c.iter().enumerate().map(|(k, ck)| ck * (2.0 * (q as usize + k) as f64 * th).cos()).sum::<f64>() * lc
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        cfg,
    )?;
    let integral = RatPoly(coeffs.to_vec()).reflect().integrate_unit(q - 1);
    let sign = if q % 2 == 1 { 1 } else { -1 };
    let rhs = PiPoly::monomial(integral * Rational::new(BigInt::from(sign), BigInt::from(2)), 1);
    Ok((lhs.value, rhs.to_f64()))
}
