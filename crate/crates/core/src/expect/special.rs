//! Closed-form specializations: ideal polytopes in dimension 3, ideal
//! simplices, and polygons with uniform vertices in the disk.

use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{ExpectationResult, Representation};
use crate::abcore::{b_fn, ParamMultiset};
use crate::error::{ensure_domain, Result};
use crate::exact::{binomial, factorial, rat, rat_int, PiPoly, RatPoly, Rational};
use crate::quad::{integrate_real_line, QuadConfig};
use crate::specfun::{harmonic, ln_gamma};
use crate::trigpoly::TrigPoly;

/// `π (n/2 - H_{n-1})`, the expected volume of the hull of `n` uniform points
/// on the sphere in hyperbolic 3-space.
pub fn ideal_polytope3(n: u64) -> Result<PiPoly> {
    ensure_domain!(n >= 4, "need n >= 4, got {n}");
    Ok(PiPoly::monomial(rat(n as i64, 2) - harmonic(n - 1), 1))
}

/// `Σ_{ℓ=2}^{⌊n/2⌋} (-1)^ℓ C(n,2ℓ) (ℓ-1)! (n-ℓ-1)! / (n-1)!`.
pub fn alternating_harmonic_sum(n: u64) -> Result<Rational> {
    ensure_domain!(n >= 2, "need n >= 2, got {n}");
    let denom = factorial(n - 1);
    let mut num = BigInt::zero();
    for l in 2..=n / 2 {
        let t = binomial(n, 2 * l) * factorial(l - 1) * factorial(n - l - 1);
        if l % 2 == 0 {
            num += t;
        } else {
            num -= t;
        }
    }
    Ok(Rational::new(num, denom))
}

/// `π Σ_{k=4,6,…} (-1)^{k/2} C(n,k) Γ(k/2) Γ(n-k/2) / Γ(n)`, term by term.
pub fn ideal_polytope3_via_sum(n: u64) -> Result<PiPoly> {
    ensure_domain!(n >= 4, "need n >= 4, got {n}");
    Ok(PiPoly::monomial(alternating_harmonic_sum(n)?, 1))
}

/// Exact expected volume of an ideal simplex in odd dimension `d ≥ 3`.
pub fn ideal_simplex_exact_odd(d: u32) -> Result<PiPoly> {
    ensure_domain!(d >= 3 && d % 2 == 1, "need an odd d >= 3, got {d}");
    let d64 = u64::from(d);
    let h = (d64 - 3) / 2;
    let poly = RatPoly(
        (0..=h)
            .map(|j| {
                let c = rat_int(binomial(d64 - 2, h - j));
                if j % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect(),
    );
    let integral = poly.pow(d + 1).integrate_unit((d - 1) / 2);
    let big = d64 * d64 - d64 - 2;
    let denom = rat_int(factorial((d64 - 1) / 2) * binomial(big, big / 2));
    let coef = rat(2, 1) * integral / denom;
    Ok(PiPoly::monomial(coef, ((d - 1) / 2) as i32))
}

/// `J(t) = ∫_0^t sinh^m(u) du` for even `m`, in two forms that avoid
/// cancellation: a Taylor series with exact coefficients near 0 and
/// `J(t) e^{-mt}` from the exponential expansion further out.
struct SinhPowerIntegral {
    m: u32,
    /// Taylor coefficients of `J(t) / t^{m+1}` in powers of `t`.
    taylor: Vec<f64>,
}

const J_SPLIT: f64 = 2.0;

impl SinhPowerIntegral {
    fn new(m: u32) -> Self {
        // J(t) = Σ_{p≥1} c_p t^p, c_p = 2^{-m}/p! Σ_k C(m,k) (-1)^k (m-2k)^{p-1}.
        let mut taylor = Vec::new();
        let scale = BigInt::one() << m;
        for p in (m + 1)..(m + 200) {
            let mut s = BigInt::zero();
            for k in 0..=m {
                let base = i64::from(m) - 2 * i64::from(k);
                let pw = if p == 1 { BigInt::one() } else { BigInt::from(base).pow(p - 1) };
                let t = binomial(u64::from(m), u64::from(k)) * pw;
                if k % 2 == 0 {
                    s += t;
                } else {
                    s -= t;
                }
            }
            let c = Rational::new(s, &scale * factorial(u64::from(p)));
            let v = c.to_f64().unwrap_or(0.0);
            taylor.push(v);
            if v != 0.0 && v * J_SPLIT.powi((p - m) as i32) < 1e-20 * taylor[0] {
                break;
            }
        }
        Self { m, taylor }
    }

    /// `J(t)/t^{m+1}` for `|t| ≤ J_SPLIT`.
    fn reduced(&self, t: f64) -> f64 {
        self.taylor.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// `J(t) e^{-mt}` for `t > 0`.
    fn scaled(&self, t: f64) -> f64 {
        let m = i64::from(self.m);
        let mut s = 0.0;
        for k in 0..=m {
            let c = binomial(m as u64, k as u64).to_f64().unwrap_or(f64::INFINITY);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let g = if m == 2 * k {
                t * (-(m as f64) * t).exp()
            } else {
                ((-2.0 * k as f64 * t).exp() - (-(m as f64) * t).exp()) / (m - 2 * k) as f64
            };
            s += sign * c * g;
        }
        s * 2f64.powi(-(self.m as i32))
    }
}

/// Expected hyperbolic volume of the simplex spanned by `d+1` uniform points
/// on the unit sphere. Exact for odd `d`.
pub fn ideal_simplex_volume(d: u32, cfg: &QuadConfig) -> Result<ExpectationResult> {
    ensure_domain!(d >= 2, "need d >= 2, got {d}");
    if d % 2 == 1 {
        let exact = ideal_simplex_exact_odd(d)?;
        return Ok(ExpectationResult::from_exact(exact, Representation::Upper, "exact-odd-simplex"));
    }
    let df = f64::from(d);
    let m = d - 2;
    let big_n = d * (d - 1) - 1;
    let nf = f64::from(big_n);
    let j = SinhPowerIntegral::new(m);
    let integrand = |t: f64| -> f64 {
        let t = t.abs();
        if t <= J_SPLIT {
            if t == 0.0 {
                return 0.0;
            }
            // t^d · (J/t^{d-1})^{d+1} / (sinh t / t)^N
            let sinc = if t < 1e-8 { 1.0 } else { t.sinh() / t };
            t.powi(d as i32) * j.reduced(t).powi(d as i32 + 1) / sinc.powi(big_n as i32)
        } else {
            // (J e^{-mt})^{d+1} 2^N e^{-t} / (1 - e^{-2t})^N
            let r = j.scaled(t);
            ((df + 1.0) * r.ln() + nf * LN_2 - t - nf * (-(-2.0 * t).exp()).ln_1p()).exp()
        }
    };
    let q = integrate_real_line(integrand, cfg)?;
    let dd: f64 = (1..d).rev().step_by(2).map(f64::from).product();
    let log_pref = (1.0 + 0.5 * df) * LN_2 - (PI * dd).ln()
        + (df + 1.0) * (ln_gamma(0.5 * df) - ln_gamma(0.5 * (df - 1.0)))
        + ln_gamma(0.5 * df * (df - 1.0))
        - ln_gamma(0.5 * (df * (df - 1.0) - 1.0));
    let pref = log_pref.exp();
    let value = pref * q.value;
    Ok(ExpectationResult {
        value,
        abs_err_est: pref * q.abs_err_est + 64.0 * f64::EPSILON * value.abs(),
        // Every ideal triangle has area π.
        exact: (d == 2).then(|| PiPoly::pi_pow(1)),
        representation: Representation::Upper,
        pole_path: false,
        near_pole: false,
        method: "even-simplex-quadrature",
    })
}

/// Exact expected hyperbolic area of the hull of `n` uniform points in the disk:
/// `-2π + 2^{n-1} n π^{-(n-2)} ∫ cos x F_2(x)^{n-1} dx` with `F_2(x) = π/4 + x/2 + sin(2x)/4`.
pub fn polygon_beta0_exact(n: u32) -> Result<PiPoly> {
    ensure_domain!(n >= 3, "need n >= 3, got {n}");
    let f2 = TrigPoly::constant(PiPoly::monomial(rat(1, 4), 1))
        .plus(&TrigPoly::x_pow(1, PiPoly::rational(rat(1, 2))))
        .plus(&TrigPoly::sin(2, PiPoly::rational(rat(1, 4))));
    let b = TrigPoly::cos(1, PiPoly::rational(rat(1, 1))).times(&f2.pow(n - 1)).integrate_symmetric();
    let scale = rat_int(BigInt::from(n) << (n - 1));
    Ok(&PiPoly::monomial(rat(-2, 1), 1) + &b.scale(&scale).shift(-(n as i32 - 2)))
}

/// Expected hyperbolic area of the hull of `n` uniform points in the disk,
/// with `b_{n-1}(1; 2)` by quadrature and the exact value alongside.
pub fn polygon_beta0(n: u32, cfg: &QuadConfig) -> Result<ExpectationResult> {
    let exact = polygon_beta0_exact(n)?;
    let b = b_fn(1.0, &ParamMultiset::repeated(2.0, n as usize - 1), cfg)?;
    let scale = f64::from(n) * 2f64.powi(n as i32 - 1) / PI.powi(n as i32 - 2);
    let value = -2.0 * PI + scale * b.value;
    let exact_value = exact.to_f64();
    let est = scale * b.abs_err_est + 16.0 * f64::EPSILON * (2.0 * PI + (scale * b.value).abs());
    Ok(ExpectationResult {
        value,
        abs_err_est: est.max((value - exact_value).abs()),
        exact: Some(exact),
        representation: Representation::Upper,
        pole_path: false,
        near_pole: false,
        method: "polygon-b-quadrature",
    })
}
