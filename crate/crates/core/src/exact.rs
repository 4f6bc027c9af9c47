//! Exact arithmetic: big rationals, values of the form `Σ c_k π^k`, and
//! products `c · π^(e/2)` used to keep gamma functions at half-integers exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced fraction of big integers with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc.into()
}

/// Correctly rounded conversion of a rational to `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rational approximation of π good to 60 decimal places.
fn pi_rational() -> &'static Rational {
    static PI: OnceLock<Rational> = OnceLock::new();
    PI.get_or_init(|| {
        let digits = "3141592653589793238462643383279502884197169399375105820974944";
        let num = BigInt::from_str(digits).expect("static digits");
        Rational::new(num, BigInt::from(10u32).pow(60))
    })
}

/// Exact value `Σ_k c_k π^k` with finitely many nonzero rational
/// coefficients; `k` may be negative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiPoly {
    coeffs: BTreeMap<i32, Rational>,
}

impl PiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c · π^k`.
    pub fn monomial(c: Rational, k: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn rational(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn pi_pow(k: i32) -> Self {
        Self::monomial(Rational::one(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i32) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in ascending power order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, k: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Multiply by `π^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(k, v)| (k + shift, v.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = PiPoly::rational(Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Numeric value, rounded once from an exact rational evaluation with a
    /// 60-digit π, so cancellation between terms does not lose precision.
    pub fn to_f64(&self) -> f64 {
        let pi = pi_rational();
        let inv_pi = pi.recip();
        let mut sum = Rational::zero();
        for (k, c) in &self.coeffs {
            let base = if *k >= 0 { pi } else { &inv_pi };
            let mut term = c.clone();
            for _ in 0..k.unsigned_abs() {
                term *= base;
            }
            sum += term;
        }
        rational_to_f64(&sum)
    }
}

impl Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Add for PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: PiPoly) -> PiPoly {
        &self + &rhs
    }
}

impl AddAssign<&PiPoly> for PiPoly {
    fn add_assign(&mut self, rhs: &PiPoly) {
        for (k, c) in &rhs.coeffs {
            self.add_term(*k, c.clone());
        }
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly { coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Sub for &PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        self + &(-rhs)
    }
}

impl Sub for PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: PiPoly) -> PiPoly {
        &self - &rhs
    }
}

impl Mul for &PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        let mut out = PiPoly::zero();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &rhs.coeffs {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: PiPoly) -> PiPoly {
        &self * &rhs
    }
}

fn fmt_abs_rational(r: &Rational) -> String {
    let r = r.abs();
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical rendering: terms by descending power of π, e.g.
/// `pi - 128/15*pi^-1` or `943/942480*pi^2`.
impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let pi_part = match k {
                0 => None,
                1 => Some("pi".to_string()),
                k => Some(format!("pi^{k}")),
            };
            match pi_part {
                None => f.write_str(&fmt_abs_rational(c))?,
                Some(p) if c.abs().is_one() => f.write_str(&p)?,
                Some(p) => write!(f, "{}*{}", fmt_abs_rational(c), p)?,
            }
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
    }
}

fn parse_term(s: &str) -> Result<(i32, Rational)> {
    let s = s.trim();
    let (coef, pi) = match s.find("pi") {
        None => (Some(s), None),
        Some(pos) => {
            let head = s[..pos].trim();
            let head = head.strip_suffix('*').map(str::trim);
            let coef = match head {
                Some(h) => Some(h),
                None if s[..pos].trim().is_empty() => None,
                None => return Err(Error::Parse(format!("bad term `{s}`"))),
            };
            (coef, Some(&s[pos + 2..]))
        }
    };
    let c = match coef {
        Some(c) => parse_rational(c)?,
        None => Rational::one(),
    };
    let k = match pi {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|e| e.trim().parse::<i32>().ok())
            .ok_or_else(|| Error::Parse(format!("bad power in `{s}`")))?,
    };
    Ok((k, c))
}

impl FromStr for PiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(PiPoly::zero());
        }
        let mut out = PiPoly::zero();
        let (mut sign, mut rest) = match s.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, s),
        };
        loop {
            let next =
                [" + ", " - "].iter().filter_map(|sep| rest.find(sep).map(|p| (p, *sep))).min_by_key(|(p, _)| *p);
            let (term, tail) = match next {
                Some((p, sep)) => (&rest[..p], Some((sep, &rest[p + 3..]))),
                None => (rest, None),
            };
            let (k, c) = parse_term(term)?;
            out.add_term(k, if sign < 0 { -c } else { c });
            match tail {
                Some((sep, t)) => {
                    sign = if sep == " - " { -1 } else { 1 };
                    rest = t;
                }
                None => break,
            }
        }
        Ok(out)
    }
}

/// Exact `c · π^(half_pow/2)`; closes under products and quotients of gamma
/// values at positive integers and half-integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtPiMonomial {
    pub coef: Rational,
    pub half_pow: i32,
}

impl SqrtPiMonomial {
    pub fn rational(coef: Rational) -> Self {
        Self { coef, half_pow: 0 }
    }

    /// `Γ(two_x / 2)` for a positive integer `two_x`.
    pub fn gamma_half(two_x: u64) -> Self {
        assert!(two_x > 0, "gamma pole");
        if two_x.is_multiple_of(2) {
            Self::rational(rat_int(factorial(two_x / 2 - 1)))
        } else {
            // Γ(m + 1/2) = (2m)! / (4^m m!) √π
            let m = (two_x - 1) / 2;
            let num = factorial(2 * m);
            let den = BigInt::from(4u32).pow(m as u32) * factorial(m);
            Self { coef: Rational::new(num, den), half_pow: 1 }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { coef: &self.coef * &other.coef, half_pow: self.half_pow + other.half_pow }
    }

    pub fn div(&self, other: &Self) -> Self {
        Self { coef: &self.coef / &other.coef, half_pow: self.half_pow - other.half_pow }
    }

    pub fn powi(&self, e: u32) -> Self {
        Self { coef: num_traits::pow(self.coef.clone(), e as usize), half_pow: self.half_pow * e as i32 }
    }

    /// Converts to a `PiPoly`; `None` if a stray `√π` remains.
    pub fn to_pipoly(&self) -> Option<PiPoly> {
        self.half_pow.is_even().then(|| PiPoly::monomial(self.coef.clone(), self.half_pow / 2))
    }
}

/// Dense polynomial in one variable with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(pub Vec<Rational>);

impl RatPoly {
    pub fn one() -> Self {
        RatPoly(vec![Rational::one()])
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return RatPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `Q(-t)` as a polynomial in `t`.
    pub fn reflect(&self) -> Self {
        RatPoly(self.0.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect())
    }

    /// `∫_0^1 t^shift Q(t) dt`.
    pub fn integrate_unit(&self, shift: u32) -> Rational {
        self.0
            .iter()
            .enumerate()
            .map(|(i, c)| c / rat_int(BigInt::from(i as u64 + shift as u64 + 1)))
            .fold(Rational::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_canonical_forms() {
        assert_eq!(PiPoly::monomial(rat(43, 60), 1).to_string(), "43/60*pi");
        assert_eq!(PiPoly::monomial(rat(943, 942480), 2).to_string(), "943/942480*pi^2");
        let p = &PiPoly::pi_pow(1) - &PiPoly::monomial(rat(128, 15), -1);
        assert_eq!(p.to_string(), "pi - 128/15*pi^-1");
        let q = &PiPoly::monomial(rat(4, 3), 2) - &PiPoly::rational(rat(86528, 6615));
        assert_eq!(q.to_string(), "4/3*pi^2 - 86528/6615");
        assert_eq!(PiPoly::zero().to_string(), "0");
        assert_eq!(PiPoly::monomial(rat(-1, 1), 3).to_string(), "-pi^3");
    }

    #[test]
    fn parse_accepts_canonical_forms() {
        for s in ["43/60*pi", "pi - 128/15*pi^-1", "-pi^3 + 2 - 5/7*pi^-2", "0", "17"] {
            assert_eq!(s.parse::<PiPoly>().unwrap().to_string(), s);
        }
        assert!("pi^x".parse::<PiPoly>().is_err());
        assert!("1/0".parse::<PiPoly>().is_err());
    }

    #[test]
    fn accurate_evaluation_under_cancellation() {
        // V6 of the ideal-simplex table: three terms of size ~70 cancel to ~1e-3.
        let v6 = &(&PiPoly::monomial(rat(34, 15), 3)
            - &PiPoly::monomial(
                Rational::new(BigInt::from(1166172999537393664i64), BigInt::from(47992913336092725i64)),
                1,
            ))
            + &PiPoly::monomial(Rational::new(BigInt::from(7754705186848768i64), BigInt::from(407510816383125i64)), -1);
        let expected = 0.001_040_027_521_377_397_4;
        assert!((v6.to_f64() - expected).abs() < 1e-18);
    }

    #[test]
    fn gamma_half_integers() {
        assert_eq!(SqrtPiMonomial::gamma_half(1), SqrtPiMonomial { coef: rat(1, 1), half_pow: 1 });
        assert_eq!(SqrtPiMonomial::gamma_half(5), SqrtPiMonomial { coef: rat(3, 4), half_pow: 1 });
        assert_eq!(SqrtPiMonomial::gamma_half(10), SqrtPiMonomial::rational(rat(24, 1)));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    fn small_pipoly() -> impl Strategy<Value = PiPoly> {
        proptest::collection::vec((-4i32..5, -50i64..50, 1i64..30), 0..5).prop_map(|terms| {
            let mut p = PiPoly::zero();
            for (k, n, d) in terms {
                p.add_term(k, rat(n, d));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(p in small_pipoly()) {
            let s = p.to_string();
            prop_assert_eq!(s.parse::<PiPoly>().unwrap(), p);
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(p in small_pipoly(), q in small_pipoly()) {
            let lhs = (&p * &q).to_f64();
            let rhs = p.to_f64() * q.to_f64();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }
}
