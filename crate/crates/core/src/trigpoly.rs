//! Exact integration over `(-π/2, π/2)` of finite sums
//! `Σ c · x^a · cos(kx)` and `Σ c · x^a · sin(kx)` with coefficients in `Q[π, 1/π]`.

use std::collections::BTreeMap;

use num_traits::One;

use crate::exact::{rat, PiPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Wave {
    Cos,
    Sin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key {
    x_pow: u32,
    wave: Wave,
    freq: u32,
}

/// A finite sum of `coef · x^a · cos(kx)` / `coef · x^a · sin(kx)` terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    terms: BTreeMap<Key, PiPoly>,
}

impl TrigPoly {
    pub fn constant(c: PiPoly) -> Self {
        let mut t = Self::default();
        t.add(Key { x_pow: 0, wave: Wave::Cos, freq: 0 }, c);
        t
    }

    /// `c · x^a`.
    pub fn x_pow(a: u32, c: PiPoly) -> Self {
        let mut t = Self::default();
        t.add(Key { x_pow: a, wave: Wave::Cos, freq: 0 }, c);
        t
    }

    /// `c · cos(kx)`.
    pub fn cos(k: u32, c: PiPoly) -> Self {
        let mut t = Self::default();
        t.add(Key { x_pow: 0, wave: Wave::Cos, freq: k }, c);
        t
    }

    /// `c · sin(kx)`.
    pub fn sin(k: u32, c: PiPoly) -> Self {
        let mut t = Self::default();
        t.add(Key { x_pow: 0, wave: Wave::Sin, freq: k }, c);
        t
    }

    fn add(&mut self, key: Key, c: PiPoly) {
        if c.is_zero() || (key.wave == Wave::Sin && key.freq == 0) {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add(*k, c.clone());
        }
        out
    }

    pub fn times(&self, other: &Self) -> Self {
        let half = rat(1, 2);
        let mut out = Self::default();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let c = (ca * cb).scale(&half);
                let x_pow = ka.x_pow + kb.x_pow;
                let (f, g) = (ka.freq as i64, kb.freq as i64);
                let sum = (f + g) as u32;
                let diff = (f - g).unsigned_abs() as u32;
                let diff_sign = if f >= g { 1 } else { -1 };
                let key = |wave, freq| Key { x_pow, wave, freq };
                match (ka.wave, kb.wave) {
                    // cos f cos g = [cos(f-g) + cos(f+g)] / 2
                    (Wave::Cos, Wave::Cos) => {
                        out.add(key(Wave::Cos, diff), c.clone());
                        out.add(key(Wave::Cos, sum), c);
                    }
                    // sin f sin g = [cos(f-g) - cos(f+g)] / 2
                    (Wave::Sin, Wave::Sin) => {
                        out.add(key(Wave::Cos, diff), c.clone());
                        out.add(key(Wave::Cos, sum), -&c);
                    }
                    // sin f cos g = [sin(f+g) + sin(f-g)] / 2
                    (Wave::Sin, Wave::Cos) => {
                        out.add(key(Wave::Sin, sum), c.clone());
                        out.add(key(Wave::Sin, diff), if diff_sign > 0 { c } else { -&c });
                    }
                    // cos f sin g = [sin(f+g) - sin(f-g)] / 2
                    (Wave::Cos, Wave::Sin) => {
                        out.add(key(Wave::Sin, sum), c.clone());
                        out.add(key(Wave::Sin, diff), if diff_sign > 0 { -&c } else { c });
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(PiPoly::rational(Rational::one()));
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    /// `∫_{-π/2}^{π/2}` of the sum, exactly.
    pub fn integrate_symmetric(&self) -> PiPoly {
        let mut memo = BTreeMap::new();
        let mut total = PiPoly::zero();
        for (key, c) in &self.terms {
            let base = integrate_term(key.x_pow, key.wave, key.freq, &mut memo);
            total += &(c * &base);
        }
        total
    }
}

/// `(π/2)^a`.
fn half_pi_pow(a: u32) -> PiPoly {
    PiPoly::monomial(Rational::new(One::one(), num_bigint::BigInt::from(2u32).pow(a)), a as i32)
}

fn sin_quarter_turns(k: u32) -> i64 {
    [0, 1, 0, -1][(k % 4) as usize]
}

fn cos_quarter_turns(k: u32) -> i64 {
    [1, 0, -1, 0][(k % 4) as usize]
}

fn integrate_term(a: u32, wave: Wave, k: u32, memo: &mut BTreeMap<(u32, Wave, u32), PiPoly>) -> PiPoly {
    if let Some(v) = memo.get(&(a, wave, k)) {
        return v.clone();
    }
    let odd_a = a % 2 == 1;
    let value = match (wave, k) {
        (Wave::Sin, 0) => PiPoly::zero(),
        (Wave::Cos, 0) if odd_a => PiPoly::zero(),
        (Wave::Cos, 0) => half_pi_pow(a + 1).scale(&rat(2, a as i64 + 1)),
        // x^a cos(kx) is odd for odd a; x^a sin(kx) is odd for even a.
        (Wave::Cos, _) if odd_a => PiPoly::zero(),
        (Wave::Sin, _) if !odd_a => PiPoly::zero(),
        (Wave::Cos, _) => {
            // [x^a sin(kx)/k] - (a/k) ∫ x^(a-1) sin(kx)
            let boundary = half_pi_pow(a).scale(&rat(2 * sin_quarter_turns(k), k as i64));
            if a == 0 {
                boundary
            } else {
                let inner = integrate_term(a - 1, Wave::Sin, k, memo);
                &boundary - &inner.scale(&rat(a as i64, k as i64))
            }
        }
        (Wave::Sin, _) => {
            // [-x^a cos(kx)/k] + (a/k) ∫ x^(a-1) cos(kx)
            let boundary = half_pi_pow(a).scale(&rat(-2 * cos_quarter_turns(k), k as i64));
            let inner = integrate_term(a - 1, Wave::Cos, k, memo);
            &boundary + &inner.scale(&rat(a as i64, k as i64))
        }
    };
    memo.insert((a, wave, k), value.clone());
    value
}
