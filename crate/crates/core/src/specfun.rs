//! Scalar special functions: gamma machinery, the beta-density constants,
//! `F_β` on the real segment and on the imaginary axis, the incomplete beta
//! function, `P_m`, harmonic numbers and the Lobachevsky function.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{ensure_domain, Result};
use crate::exact::{binomial, Rational};
use crate::quad::{integrate_finite, QuadConfig};

const SQRT_PI: f64 = 1.772_453_850_905_516;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

// Lanczos approximation, g = 671/128 with 14 terms.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// `ln Γ(x)` for `x > 0` without argument checking.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = LANCZOS_C0;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (SQRT_2PI * ser / x).ln()
}

/// Natural logarithm of `Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    ensure_domain!(x > 0.0, "log_gamma needs x > 0, got {x}");
    Ok(ln_gamma(x))
}

/// `sin(πx)`, exactly zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    let n = (2.0 * x).round();
    let y = x - 0.5 * n;
    let s = (PI * y).sin();
    let c = (PI * y).cos();
    match (n as i64).rem_euclid(4) {
        0 => s,
        1 => c,
        2 => -s,
        _ => -c,
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `Γ(x)` on the real line; infinite at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x > 0.0 {
        if x == x.round() && x <= 171.0 {
            return (2..x as u64).fold(1.0, |acc, k| acc * k as f64);
        }
        return ln_gamma(x).exp();
    }
    PI / (sin_pi(x) * gamma(1.0 - x))
}

/// `1/Γ(x)`, zero at the poles of `Γ`.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 0.0 {
        return 1.0 / gamma(x);
    }
    sin_pi(x) * gamma(1.0 - x) / PI
}

/// `Γ(a)/Γ(b)` for positive `a`, `b`, without intermediate overflow.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    if a == b {
        return 1.0;
    }
    (ln_gamma(a) - ln_gamma(b)).exp()
}

/// `B(p, q) = Γ(p)Γ(q)/Γ(p+q)`.
pub fn beta_fn(p: f64, q: f64) -> f64 {
    (ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q)).exp()
}

/// `c_β = Γ(β+3/2)/(√π Γ(β+1))`.
pub fn c_one_dim(beta: f64) -> Result<f64> {
    ensure_domain!(beta > -1.0, "c_beta needs beta > -1, got {beta}");
    Ok(gamma_ratio(beta + 1.5, beta + 1.0) / SQRT_PI)
}

/// `c_β` extended by continuity to `β = -1`, where it vanishes.
pub(crate) fn c_one_dim_closed(beta: f64) -> f64 {
    if beta == -1.0 {
        0.0
    } else {
        gamma_ratio(beta + 1.5, beta + 1.0) / SQRT_PI
    }
}

/// `c_{d,β} = Γ(d/2+β+1)/(π^{d/2} Γ(β+1))`.
pub fn c_d_beta(d: u32, beta: f64) -> Result<f64> {
    ensure_domain!(d >= 1, "c_d_beta needs d >= 1");
    ensure_domain!(beta > -1.0, "c_d_beta needs beta > -1, got {beta}");
    let h = 0.5 * f64::from(d);
    Ok(gamma_ratio(h + beta + 1.0, beta + 1.0) / PI.powf(h))
}

/// Continued fraction for `I_z(p, q)` (modified Lentz); converges fast for
/// `z < (p+1)/(p+q+2)`.
fn beta_cf(z: f64, p: f64, q: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = p + q;
    let qap = p + 1.0;
    let qam = p - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * z / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = f64::from(m);
        let m2 = 2.0 * m;
        let aa = m * (q - m) * z / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(p + m) * (qab + m) * z / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// `(B_z(p,q), B_{1-z}(q,p))` given both `z` and `zc = 1 - z` to full
/// relative accuracy. The two values sum to `B(p,q)`.
pub(crate) fn inc_beta_pair(z: f64, zc: f64, p: f64, q: f64) -> (f64, f64) {
    let total = beta_fn(p, q);
    if z <= 0.0 {
        return (0.0, total);
    }
    if zc <= 0.0 {
        return (total, 0.0);
    }
    let direct = |z: f64, zc: f64, p: f64, q: f64| -> f64 { (p * z.ln() + q * zc.ln()).exp() / p * beta_cf(z, p, q) };
    if z < (p + 1.0) / (p + q + 2.0) {
        let lo = direct(z, zc, p, q);
        (lo, (total - lo).max(0.0))
    } else {
        let hi = direct(zc, z, q, p);
        ((total - hi).max(0.0), hi)
    }
}

/// The non-regularized incomplete beta `B_z(p,q) = ∫_0^z t^{p-1}(1-t)^{q-1} dt`.
pub fn inc_beta(z: f64, p: f64, q: f64) -> Result<f64> {
    ensure_domain!((0.0..=1.0).contains(&z), "inc_beta needs z in [0, 1], got {z}");
    ensure_domain!(p > 0.0 && q > 0.0, "inc_beta needs p, q > 0, got ({p}, {q})");
    Ok(inc_beta_pair(z, 1.0 - z, p, q).0)
}

/// `F_β(π/2) = ∫_{-π/2}^{π/2} cos^β = 1/c_{(β-1)/2}`, valid for `β > -1`.
pub(crate) fn f_total(beta: f64) -> f64 {
    SQRT_PI * gamma_ratio(0.5 * (beta + 1.0), 0.5 * beta + 1.0)
}

/// `(F_β(x), F_β(π/2) - F_β(x))` from the distances `δ = x + π/2` and
/// `δc = π/2 - x`, each accurate near its own endpoint.
pub(crate) fn f_real_pair(beta: f64, delta: f64, delta_c: f64) -> (f64, f64) {
    let p = 0.5 * (beta + 1.0);
    let z = (0.5 * delta).sin().powi(2);
    let zc = (0.5 * delta_c).sin().powi(2);
    let scale = 2f64.powf(beta);
    let (lo, hi) = inc_beta_pair(z, zc, p, p);
    (scale * lo, scale * hi)
}

/// `F_β(x) = ∫_{-π/2}^x cos^β(y) dy` for `x ∈ [-π/2, π/2]`.
pub fn f_real(beta: f64, x: f64) -> Result<f64> {
    ensure_domain!(beta > -1.0, "F_beta needs beta > -1, got {beta}");
    ensure_domain!((-FRAC_PI_2..=FRAC_PI_2).contains(&x), "F_beta on the real segment needs |x| <= pi/2, got {x}");
    Ok(f_real_pair(beta, x + FRAC_PI_2, FRAC_PI_2 - x).0)
}

/// `F_β(ix) = 1/(2c_{(β-1)/2}) + i ∫_0^x cosh^β(y) dy` for `β ≥ 0`.
pub fn f_imag(beta: f64, x: f64) -> Result<Complex64> {
    ensure_domain!(beta >= 0.0, "F_beta on the imaginary axis needs beta >= 0, got {beta}");
    let re = 0.5 * f_total(beta);
    if x == 0.0 {
        return Ok(Complex64::new(re, 0.0));
    }
    let cfg = QuadConfig::default();
    let v = integrate_finite(|y| y.cosh().powf(beta), 0.0, x.abs(), &cfg)?;
    Ok(Complex64::new(re, x.signum() * v.value))
}

/// `ln cosh x` without overflow.
pub(crate) fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

const SCALED_SPLIT: f64 = 20.0;

/// `∫_0^x cosh^β(y) dy / cosh^β(x)` for `β ≥ 0`; bounded by `|x|` and by
/// roughly `1/β`, so it never overflows.
pub(crate) fn cosh_integral_scaled(beta: f64, x: f64) -> f64 {
    if x < 0.0 {
        return -cosh_integral_scaled(beta, -x);
    }
    if beta == beta.round() && beta <= 400.0 {
        let n = beta as u32;
        let sech2 = {
            let c = x.cosh();
            1.0 / (c * c)
        };
        let tanh = x.tanh();
        let mut r = if n.is_multiple_of(2) { x } else { tanh };
        let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
        while k <= n {
            let kf = f64::from(k);
            r = tanh / kf + (kf - 1.0) / kf * sech2 * r;
            k += 2;
        }
        return r;
    }
    let head = x.min(SCALED_SPLIT);
    let lc_head = ln_cosh(head);
    let cfg = QuadConfig::default();
    let r_head = match integrate_finite(|y| (-beta * (lc_head - ln_cosh(y))).exp(), 0.0, head, &cfg) {
        Ok(v) => v.value,
        Err(crate::error::Error::NoConvergence { value, .. }) => value,
        Err(_) => 0.0,
    };
    if x <= SCALED_SPLIT {
        return r_head;
    }
    let decay = (-beta * (ln_cosh(x) - lc_head)).exp();
    decay * r_head + (-(-beta * (x - SCALED_SPLIT)).exp_m1()) / beta
}

/// `P_m(z) = Σ_{r=0}^{m-1} C(2m-1, m-1-r) z^r`.
pub fn p_m_poly(m: u32, z: Complex64) -> Result<Complex64> {
    ensure_domain!(m >= 1, "P_m needs m >= 1");
    let mut acc = Complex64::zero();
    for r in (0..m).rev() {
        let c = binomial(u64::from(2 * m - 1), u64::from(m - 1 - r));
        acc = acc * z + Complex64::new(crate::exact::rational_to_f64(&Rational::from_integer(c)), 0.0);
    }
    Ok(acc)
}

/// Exact harmonic number `H_n = Σ_{j=1}^n 1/j`.
pub fn harmonic(n: u64) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, j| acc + Rational::new(BigInt::one(), BigInt::from(j)))
}

const LOBACHEVSKY_TERMS: usize = 40;

/// `ζ(2k)/(k(2k+1)π^{2k})` for `k = 1..=LOBACHEVSKY_TERMS`.
fn lobachevsky_coeffs() -> &'static [f64; LOBACHEVSKY_TERMS] {
    static TABLE: OnceLock<[f64; LOBACHEVSKY_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; LOBACHEVSKY_TERMS];
        // ζ(2k)/π^{2k} for small k from the Bernoulli closed forms.
        let head = [1.0 / 6.0, 1.0 / 90.0, 1.0 / 945.0, 1.0 / 9450.0, 1.0 / 93555.0];
        for (i, slot) in out.iter_mut().enumerate() {
            let k = i + 1;
            let zeta_over = if k <= head.len() {
                head[i]
            } else {
                let e = -2.0 * k as f64;
                let tail: f64 = (2..=40).rev().map(|n| f64::from(n).powf(e)).sum();
                (1.0 + tail) / PI.powi(2 * k as i32)
            };
            *slot = zeta_over / (k as f64 * (2 * k + 1) as f64);
        }
        out
    })
}

/// The Lobachevsky function `Л(θ) = -∫_0^θ ln|2 sin t| dt`.
pub fn lobachevsky(theta: f64) -> f64 {
    if !theta.is_finite() {
        return f64::NAN;
    }
    let r = theta - PI * (theta / PI).round();
    if r == 0.0 {
        return 0.0;
    }
    let t = r.abs();
    let t2 = t * t;
    let mut pw = t;
    let mut series = 0.0;
    for c in lobachevsky_coeffs() {
        pw *= t2;
        let term = c * pw;
        series += term;
        if term < 1e-18 * t {
            break;
        }
    }
    r.signum() * (t - t * (2.0 * t).ln() + series)
}
