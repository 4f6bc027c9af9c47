//! The self-check suite behind `hypvol verify`: the invariants of every
//! module on fixed grids, reported one line per check.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abcore::{
    a_fn, a_fn_with_residual, a_ones, a_prime, a_prime_odd_repeated, a_prime_ones_at_pole, b_fn, b_fn_alt, b_ones,
    theta_fn, ParamMultiset,
};
use crate::error::Result;
use crate::exact::{binomial, rat, PiPoly, Rational};
use crate::expect::{
    absorption_theta_sums, enumerate_classes, expected_beta_integral, expected_beta_integral_with, expected_hyp_volume,
    expected_hyp_volume_simplex, expected_hyp_volume_with, ideal_polytope3, ideal_polytope3_via_sum,
    ideal_simplex_volume, poly_log_cos_check, polygon_beta0, BetaSpec, ExpectOptions, Representation,
};
use crate::mcsim::{hull_d3, mc_absorption, mc_hull_area_d2, mc_ideal_polytope3_volume, BetaSampler, SampleConfig};
use crate::par::Execution;
use crate::quad::{integrate_finite_dist, integrate_real_line, QuadConfig};
use crate::specfun::{f_real, harmonic, lobachevsky, log_gamma};

/// Suite size and tolerance scaling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Reduced grids and sample counts.
    pub quick: bool,
    /// Multiplies every numerical tolerance (and the z-score bound). Values
    /// below 1 make checks stricter; 0 makes any inexact check fail.
    pub tolerance_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { quick: false, tolerance_scale: 1.0 }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

struct Ctx {
    quick: bool,
    scale: f64,
    cfg: QuadConfig,
}

impl Ctx {
    fn within(&self, err: f64, tol: f64) -> bool {
        err <= tol * self.scale
    }

    fn pick<T>(&self, quick: T, full: T) -> T {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

type Outcome = Result<(bool, String)>;
type Check = (&'static str, &'static str, fn(&Ctx) -> Outcome);

/// Tracks the worst relative error over a grid.
struct Worst {
    err: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self { err: 0.0, at: String::new() }
    }

    fn update(&mut self, got: f64, want: f64, at: impl FnOnce() -> String) {
        let e = (got - want).abs() / want.abs().max(1.0);
        if e > self.err || self.at.is_empty() {
            self.err = e;
            self.at = at();
        }
    }

    fn verdict(&self, ctx: &Ctx, tol: f64) -> Outcome {
        Ok((ctx.within(self.err, tol), format!("max err {:.1e} (tol {tol:.0e}) at {}", self.err, self.at)))
    }
}

fn checks() -> Vec<Check> {
    vec![
        ("SF-1", "log-gamma recurrence", sf_log_gamma),
        ("SF-2", "F_beta against quadrature", sf_f_real),
        ("SF-3", "Lobachevsky symmetries", sf_lobachevsky),
        ("SF-4", "harmonic differences", sf_harmonic),
        ("QD-1", "quadrature error estimates", qd_estimates),
        ("AB-1", "a quadrature residual and closed forms", ab_residual),
        ("AB-2", "b against alternative form", ab_b_alt),
        ("AB-3", "a' against finite differences", ab_a_prime),
        ("AB-4", "a vanishing points", ab_vanishing),
        ("AB-5", "absorption Theta sums", ab_absorption),
        ("AB-6", "Theta of empty sets", ab_theta_empty),
        ("AB-7", "all-ones lemmas", ab_ones_lemmas),
        ("EX-1", "representation equality", ex_representations),
        ("EX-2", "pole consistency", ex_poles),
        ("EX-3", "harmonic-sum identity", ex_harmonic_sum),
        ("EX-4", "ideal polytopes in dimension 3", ex_ideal3),
        ("EX-5", "ideal simplices", ex_simplices),
        ("EX-6", "beta=0 polygons", ex_polygons),
        ("EX-7", "ideal polygons", ex_ideal_polygons),
        ("EX-8", "subset class multiplicities", ex_classes),
        ("EX-9", "log-cos lemma", ex_log_cos),
        ("MC-1", "determinism across execution policies", mc_determinism),
        ("MC-2", "ideal polytope Monte Carlo", mc_ideal3),
        ("MC-3", "absorption Monte Carlo", mc_absorb),
        ("MC-4", "Gauss-Bonnet zero variance", mc_gauss_bonnet),
        ("MC-5", "hull Euler count", mc_euler),
        ("AS-1", "large-d ratio", as_ratio),
    ]
}

/// Runs the suite in order.
pub fn run(opts: &VerifyOptions) -> Vec<CheckResult> {
    let ctx = Ctx { quick: opts.quick, scale: opts.tolerance_scale, cfg: QuadConfig::default() };
    checks()
        .into_iter()
        .map(|(id, description, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(&ctx) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult { id, description, passed, detail, elapsed: start.elapsed() }
        })
        .collect()
}

fn sf_log_gamma(ctx: &Ctx) -> Outcome {
    let mut w = Worst::new();
    for i in 1..=400 {
        let x = 0.05 * f64::from(i);
        let lhs = log_gamma(x + 1.0)?;
        let rhs = log_gamma(x)? + x.ln();
        w.update(lhs, rhs, || format!("x={x}"));
    }
    w.verdict(ctx, 1e-13)
}

fn sf_f_real(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut w = Worst::new();
    for _ in 0..ctx.pick(100, 1000) {
        let beta: f64 = rng.random_range(-0.95..12.0);
        let x: f64 = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
        let q = integrate_finite_dist(|_, da, _| da.sin().powf(beta), -FRAC_PI_2, x, &ctx.cfg)?;
        w.update(f_real(beta, x)?, q.value, || format!("beta={beta:.3} x={x:.3}"));
    }
    w.verdict(ctx, 1e-10)
}

fn sf_lobachevsky(ctx: &Ctx) -> Outcome {
    let mut w = Worst::new();
    for i in 1..200 {
        let t = 0.0157 * f64::from(i);
        w.update(lobachevsky(-t), -lobachevsky(t), || format!("odd at {t}"));
        w.update(lobachevsky(t + PI), lobachevsky(t), || format!("period at {t}"));
        w.update(0.5 * lobachevsky(2.0 * t), lobachevsky(t) + lobachevsky(t + FRAC_PI_2), || format!("dup at {t}"));
    }
    w.verdict(ctx, 1e-10)
}

fn sf_harmonic(_: &Ctx) -> Outcome {
    let mut prev = harmonic(0);
    for n in 1..=1000u64 {
        let h = harmonic(n);
        if &h - &prev != Rational::new(BigInt::from(1), BigInt::from(n)) {
            return Ok((false, format!("fails at n={n}")));
        }
        prev = h;
    }
    Ok((true, "exact for n <= 1000".into()))
}

type Integral = Box<dyn Fn(&QuadConfig) -> Result<crate::quad::ValueWithError>>;

fn qd_estimates(ctx: &Ctx) -> Outcome {
    let cases: [(f64, Integral); 4] = [
        (PI.sqrt(), Box::new(|c| integrate_real_line(|x| (-x * x).exp(), c))),
        (10.0, Box::new(|c| integrate_finite_dist(|_, a, _| a.powf(-0.9), 0.0, 1.0, c))),
        (
            -PI * std::f64::consts::LN_2 / 2.0,
            Box::new(|c| integrate_finite_dist(|_, a, _| a.sin().ln(), 0.0, FRAC_PI_2, c)),
        ),
        (PI, Box::new(|c| integrate_real_line(|x| 1.0 / x.cosh(), c))),
    ];
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for tol in [1e-6, 1e-9, 1e-12] {
        let c = QuadConfig::default().with_rel_tol(tol);
        for (exact, f) in &cases {
            let r = f(&c)?;
            let ratio = (r.value - exact).abs() / r.abs_err_est;
            worst = worst.max(ratio);
            ok &= ctx.within((r.value - exact).abs(), r.abs_err_est);
        }
    }
    Ok((ok, format!("max |err|/estimate {worst:.2}")))
}

fn ab_residual(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut ok = true;
    let mut w = Worst::new();
    for _ in 0..ctx.pick(10, 50) {
        let k = rng.random_range(0..=4usize);
        let ones = rng.random_bool(0.3);
        let p: Vec<f64> = (0..k).map(|_| if ones { 1.0 } else { rng.random_range(0.0..3.0) }).collect();
        let params = ParamMultiset::new(p)?;
        let alpha = params.sum() + rng.random_range(0.5..3.5);
        let (re, im) = a_fn_with_residual(alpha, &params, &ctx.cfg)?;
        ok &= ctx.within(im.abs(), 2.0 * re.abs_err_est);
        if params.len() <= 1 || params.all_equal_to(1.0) {
            let closed = a_fn(alpha, &params, &ctx.cfg)?.value;
            w.update(re.value, closed, || format!("a({alpha:.3}; {:?})", params.entries()));
        }
    }
    let (v, detail) = w.verdict(ctx, 1e-10)?;
    Ok((ok && v, detail))
}

fn ab_b_alt(ctx: &Ctx) -> Outcome {
    let sets: [&[f64]; 10] = [
        &[],
        &[0.0],
        &[2.0],
        &[0.5, 1.5],
        &[1.0, 1.0, 1.0],
        &[3.0, 0.0],
        &[2.0, 2.0, 2.0],
        &[0.2, 1.7, 4.0],
        &[5.0, 5.0],
        &[1.0, 2.0, 3.0, 0.5],
    ];
    let alphas: &[f64] = ctx.pick(&[0.0, 2.0], &[-0.5, 0.0, 0.7, 2.0, 4.5]);
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for p in sets {
        let params = ParamMultiset::new(p.to_vec())?;
        for &alpha in alphas {
            let b = b_fn(alpha, &params, &ctx.cfg)?;
            let alt = b_fn_alt(alpha, &params, &ctx.cfg)?;
            let gap = (b.value - alt.value).abs();
            let tol = b.abs_err_est + alt.abs_err_est + 1e-12 * b.value.abs();
            worst = worst.max(gap / tol);
            ok &= ctx.within(gap, tol);
        }
    }
    Ok((ok, format!("max gap / combined error {worst:.2}")))
}

fn ab_a_prime(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let h = 1e-4;
    let mut w = Worst::new();
    for _ in 0..ctx.pick(5, 20) {
        let k = rng.random_range(0..=4usize);
        let p: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..3.0)).collect();
        let params = ParamMultiset::new(p)?;
        let alpha = params.sum() + rng.random_range(0.5..4.0);
        let fd = (a_fn(alpha + h, &params, &ctx.cfg)?.value - a_fn(alpha - h, &params, &ctx.cfg)?.value) / (2.0 * h);
        w.update(a_prime(alpha, &params, &ctx.cfg)?.value, fd, || format!("a'({alpha:.3}; {:?})", params.entries()));
    }
    w.verdict(ctx, 1e-6)
}

fn ab_vanishing(ctx: &Ctx) -> Outcome {
    let cases: [(usize, &[f64]); 10] = [
        (0, &[0.5, 1.5]),
        (0, &[1.0, 2.0, 0.3]),
        (1, &[1.0, 2.0, 0.3, 0.0]),
        (0, &[1.0, 1.0, 2.0, 2.0]),
        (1, &[0.5, 0.7, 2.0, 3.0]),
        (0, &[0.1, 0.2, 0.3, 0.4, 0.5]),
        (1, &[1.0, 1.0, 1.0, 1.0, 1.0]),
        (2, &[2.0, 0.0, 1.0, 3.0, 0.5, 0.5, 1.0]),
        (0, &[4.0, 0.0]),
        (2, &[1.0, 1.5, 2.0, 2.5, 3.0, 0.0]),
    ];
    let mut worst: f64 = 0.0;
    for (l, p) in cases {
        let params = ParamMultiset::new(p.to_vec())?;
        let alpha = (p.len() - 1 - 2 * l) as f64 + params.sum();
        worst = worst.max(a_fn(alpha, &params, &ctx.cfg)?.value.abs());
    }
    Ok((ctx.within(worst, 1e-10), format!("max |a| {worst:.1e}")))
}

fn ab_absorption(ctx: &Ctx) -> Outcome {
    let grid: Vec<(u32, Vec<f64>, f64)> = vec![
        (2, vec![0.0, 0.0, 0.0], 0.0),
        (2, vec![-1.0, -1.0, -1.0, -1.0], 1.0),
        (2, vec![-1.0, 0.0, 1.0, 2.5], -1.0),
        (2, vec![0.5; 6], 0.3),
        (3, vec![-1.0; 5], 0.0),
        (3, vec![0.0, 0.0, 1.0, 1.0, -0.5], -0.5),
        (3, vec![2.0, -1.0, 0.0, 3.0], 2.0),
        (4, vec![-1.0; 6], 0.0),
        (4, vec![0.0, 0.5, 1.0, -1.0, -0.5, 0.0, 2.0], 1.5),
        (5, vec![-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, 1.0], 0.0),
    ];
    let mut w = Worst::new();
    for (d, betas, beta) in grid {
        let spec = BetaSpec::new(d, betas)?;
        let (u, l) = absorption_theta_sums(&spec, beta, &ctx.cfg)?;
        w.update(u.value + l.value, 0.5, || format!("d={d} beta={beta}"));
    }
    w.verdict(ctx, 1e-9)
}

fn ab_theta_empty(ctx: &Ctx) -> Outcome {
    let mut w = Worst::new();
    let e = ParamMultiset::empty();
    for x in [-0.4, 0.0, 0.5, 1.0, 3.0, 7.5] {
        w.update(theta_fn(x, &e, &e, &ctx.cfg)?.value, 1.0, || format!("x={x}"));
    }
    w.verdict(ctx, 1e-12)
}

fn ab_ones_lemmas(ctx: &Ctx) -> Outcome {
    let mut w = Worst::new();
    for d in 2..=5u32 {
        for off in [0.5, 1.3, 2.7] {
            let alpha = f64::from(d) + off;
            let (q, _) = a_fn_with_residual(alpha, &ParamMultiset::repeated(1.0, d as usize), &ctx.cfg)?;
            w.update(q.value, a_ones(d, alpha)?, || format!("a_{d}({alpha})"));
        }
        for alpha in [-0.5, 0.0, 2.5] {
            let q = integrate_finite_dist(
                |_, da, db| da.min(db).sin().powf(alpha) * (2.0 * (0.5 * da).sin().powi(2)).powi(d as i32),
                -FRAC_PI_2,
                FRAC_PI_2,
                &ctx.cfg,
            )?;
            w.update(q.value, b_ones(d, alpha)?, || format!("b_{d}({alpha})"));
        }
    }
    for q in 1..=4u32 {
        let exact = a_prime_odd_repeated(1, q)?.to_f64();
        w.update(exact, a_prime_ones_at_pole(2 * q)?, || format!("a'_{}", 2 * q));
        let quad = a_prime(f64::from(2 * q + 1), &ParamMultiset::repeated(1.0, 2 * q as usize), &ctx.cfg)?;
        w.update(quad.value, exact, || format!("a'_{} closed", 2 * q));
    }
    w.verdict(ctx, 1e-8)
}

fn ex_representations(ctx: &Ctx) -> Outcome {
    let specs = [
        BetaSpec::new(2, vec![-1.0, -0.5, 0.0, 1.0])?,
        BetaSpec::new(2, vec![0.0, 0.0, 1.0, -1.0, -1.0])?,
        BetaSpec::new(3, vec![-1.0, 0.0, 0.0, 1.0, -0.5])?,
        BetaSpec::new(4, vec![-0.5, -0.5, 0.0, 1.0, 1.0, -1.0])?,
    ];
    let up = ExpectOptions::default().with_representation(Representation::Upper);
    let lo = ExpectOptions::default().with_representation(Representation::Lower);
    let mut w = Worst::new();
    for spec in &specs {
        let d = f64::from(spec.d());
        for beta in [0.0, -0.4, -(d + 1.0) / 2.0 + 0.1] {
            let u = expected_beta_integral_with(spec, beta, &ctx.cfg, &up)?.value;
            let l = expected_beta_integral_with(spec, beta, &ctx.cfg, &lo)?.value;
            w.update(u, l, || format!("d={} beta={beta}", spec.d()));
        }
    }
    w.verdict(ctx, 1e-9)
}

fn ex_poles(ctx: &Ctx) -> Outcome {
    let cases = [
        (BetaSpec::uniform(3, 4, -1.0)?, 1u32),
        (BetaSpec::new(4, vec![-1.0, -0.5, 0.0, 0.0, 1.0])?, 1),
        (BetaSpec::new(5, vec![-1.0, -1.0, -1.0, 0.0, 0.0, 0.5, 2.0])?, 1),
        (BetaSpec::new(5, vec![-1.0, -1.0, 0.0, 0.0, 1.0, 1.0])?, 2),
    ];
    let opts = ExpectOptions::default().with_representation(Representation::Upper);
    let mut w = Worst::new();
    for (spec, k) in &cases {
        let pole = -f64::from(*k);
        let at = expected_beta_integral(spec, pole, &ctx.cfg)?;
        let f = |e: f64| expected_beta_integral_with(spec, pole + e, &ctx.cfg, &opts).map(|r| r.value);
        let lim = (8.0 * f(2.5e-3)? - 6.0 * f(5e-3)? + f(1e-2)?) / 3.0;
        w.update(at.value, lim, || format!("d={} k={k}", spec.d()));
    }
    w.verdict(ctx, 1e-6)
}

fn ex_harmonic_sum(ctx: &Ctx) -> Outcome {
    let top = ctx.pick(60u64, 200);
    for n in 4..=top {
        let want = PiPoly::monomial(rat(n as i64, 2) - harmonic(n - 1), 1);
        if ideal_polytope3_via_sum(n)? != want || ideal_polytope3(n)? != want {
            return Ok((false, format!("mismatch at n={n}")));
        }
    }
    Ok((true, format!("exact for 4 <= n <= {top}")))
}

fn ex_ideal3(ctx: &Ctx) -> Outcome {
    let want = [(4, rat(1, 6)), (5, rat(5, 12)), (6, rat(43, 60)), (7, rat(21, 20)), (8, rat(197, 140))];
    let mut w = Worst::new();
    for (n, c) in want {
        let exact = PiPoly::monomial(c, 1);
        let spec = BetaSpec::uniform(3, n, -1.0)?;
        if expected_hyp_volume(&spec, &ctx.cfg)?.exact.as_ref() != Some(&exact) {
            return Ok((false, format!("exact path wrong at n={n}")));
        }
        let q = expected_hyp_volume_with(&spec, &ctx.cfg, &ExpectOptions::default().without_fast_paths())?;
        w.update(q.value, exact.to_f64(), || format!("n={n}"));
    }
    w.verdict(ctx, 1e-8)
}

fn ex_simplices(ctx: &Ctx) -> Outcome {
    let odd: [(u32, &str); 3] = [(3, "1/6*pi"), (5, "943/942480*pi^2"), (7, "6952469612009/2292117595080112800*pi^3")];
    for (d, s) in odd {
        let want: PiPoly = s.parse()?;
        if ideal_simplex_volume(d, &ctx.cfg)?.exact != Some(want) {
            return Ok((false, format!("d={d} not exact")));
        }
    }
    let mut w = Worst::new();
    w.update(ideal_simplex_volume(2, &ctx.cfg)?.value, PI, || "V2".into());
    let v4 = 4.0 * PI * PI / 3.0 - 86528.0 / 6615.0;
    for (d, v) in [(4u32, v4), (6, 0.001_040_027_521_377_397_4)] {
        let got = ideal_simplex_volume(d, &ctx.cfg)?.value;
        // Relative error for the small volumes.
        w.update(got / v, 1.0, || format!("V{d}"));
    }
    for d in 2..=5u32 {
        let a = ideal_simplex_volume(d, &ctx.cfg)?.value;
        let b = expected_hyp_volume_simplex(d, &vec![-1.0; d as usize + 1], &ctx.cfg)?.value;
        w.update(b, a, || format!("simplex formula d={d}"));
    }
    w.verdict(ctx, 1e-8)
}

fn ex_polygons(ctx: &Ctx) -> Outcome {
    let mut w = Worst::new();
    let want: [(u32, &str); 4] = [
        (3, "pi - 128/15*pi^-1"),
        (4, "2*pi - 256/15*pi^-1"),
        (5, "3*pi - 128/3*pi^-1 + 5537792/33075*pi^-3"),
        (6, "4*pi - 256/3*pi^-1 + 5537792/11025*pi^-3"),
    ];
    for (n, s) in want {
        let exact: PiPoly = s.parse()?;
        let r = polygon_beta0(n, &ctx.cfg)?;
        if r.exact.as_ref() != Some(&exact) {
            return Ok((false, format!("exact value wrong at n={n}")));
        }
        w.update(r.value, exact.to_f64(), || format!("n={n}"));
    }
    w.verdict(ctx, 1e-9)
}

fn ex_ideal_polygons(ctx: &Ctx) -> Outcome {
    let mut w = Worst::new();
    for n in 3..=ctx.pick(6usize, 12) {
        let spec = BetaSpec::uniform(2, n, -1.0)?;
        let r = expected_hyp_volume_with(&spec, &ctx.cfg, &ExpectOptions::default().without_fast_paths())?;
        w.update(r.value, (n as f64 - 2.0) * PI, || format!("n={n}"));
    }
    w.verdict(ctx, 1e-9)
}

fn ex_classes(_: &Ctx) -> Outcome {
    let spec = BetaSpec::new(4, vec![-1.0, -1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 2.0])?;
    for k in 0..=spec.n() {
        let total: BigInt = enumerate_classes(&spec, &[k])?.iter().map(|c| c.multiplicity.clone()).sum();
        if total != binomial(spec.n() as u64, k as u64) {
            return Ok((false, format!("k={k}: {total}")));
        }
    }
    Ok((true, "multiplicities sum to C(n,k)".into()))
}

fn ex_log_cos(ctx: &Ctx) -> Outcome {
    let polys: Vec<Vec<Rational>> =
        vec![vec![rat(1, 1)], vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(-2, 1), rat(3, 1)]];
    let mut w = Worst::new();
    for q in 1..=4u32 {
        for p in &polys {
            let (lhs, rhs) = poly_log_cos_check(q, p, &ctx.cfg)?;
            w.update(lhs, rhs, || format!("q={q} deg={}", p.len() - 1));
        }
    }
    w.verdict(ctx, 1e-8)
}

fn mc_determinism(_: &Ctx) -> Outcome {
    let base = SampleConfig::new(3, 3000).with_streams(5);
    let a = mc_ideal_polytope3_volume(5, &base.with_execution(Execution::Sequential))?;
    let b = mc_ideal_polytope3_volume(5, &base.with_execution(Execution::Parallel))?;
    Ok((a == b, format!("mean {} both ways", a.mean)))
}

fn z_verdict(ctx: &Ctx, zs: &[(String, f64)]) -> Outcome {
    let ok = zs.iter().all(|(_, z)| ctx.within(z.abs(), 3.0));
    let s: Vec<String> = zs.iter().map(|(k, z)| format!("{k} z={z:+.2}")).collect();
    Ok((ok, s.join(", ")))
}

fn mc_ideal3(ctx: &Ctx) -> Outcome {
    let samples = ctx.pick(20_000, 100_000);
    let mut zs = Vec::new();
    for n in [4usize, 6] {
        let est = mc_ideal_polytope3_volume(n, &SampleConfig::new(101 + n as u64, samples))?;
        zs.push((format!("n={n}"), est.z_score(ideal_polytope3(n as u64)?.to_f64())));
    }
    z_verdict(ctx, &zs)
}

fn mc_absorb(ctx: &Ctx) -> Outcome {
    let samples = ctx.pick(40_000, 200_000);
    let specs =
        [BetaSpec::uniform(2, 3, 0.0)?, BetaSpec::uniform(3, 5, -1.0)?, BetaSpec::new(2, vec![-1.0, 0.0, 1.0, 0.5])?];
    let mut zs = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let target = expected_beta_integral(spec, 0.0, &ctx.cfg)?.value;
        let est = mc_absorption(spec, 0.0, &SampleConfig::new(201 + i as u64, samples))?;
        zs.push((format!("spec#{i}"), est.z_score(target)));
    }
    z_verdict(ctx, &zs)
}

fn mc_gauss_bonnet(ctx: &Ctx) -> Outcome {
    let mut w = Worst::new();
    for n in [3usize, 5, 8] {
        let est = mc_hull_area_d2(&BetaSpec::uniform(2, n, -1.0)?, &SampleConfig::new(7, ctx.pick(500, 5000)))?;
        w.update(est.mean, (n as f64 - 2.0) * PI, || format!("n={n}"));
        w.update(est.stderr + 1.0, 1.0, || format!("n={n} spread"));
    }
    w.verdict(ctx, 1e-9)
}

fn mc_euler(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let s = BetaSampler::new(3, 0.0)?;
    for _ in 0..ctx.pick(20, 200) {
        let n = rng.random_range(4..40usize);
        let pts: Vec<[f64; 3]> = (0..n)
            .map(|_| {
                let p = s.sample(&mut rng);
                [p[0], p[1], p[2]]
            })
            .collect();
        let facets = hull_d3(&pts)?;
        let mut verts: Vec<usize> = facets.iter().flatten().copied().collect();
        verts.sort_unstable();
        verts.dedup();
        if facets.len() != 2 * verts.len() - 4 {
            return Ok((false, format!("F={} V={}", facets.len(), verts.len())));
        }
    }
    Ok((true, "F = 2V - 4 on random hulls".into()))
}

fn as_ratio(ctx: &Ctx) -> Outcome {
    let mut ratios = Vec::new();
    for d in 6..=12u32 {
        let v = ideal_simplex_volume(d, &ctx.cfg)?.value;
        let df = f64::from(d);
        ratios.push(v / ((1.25f64.exp() / PI.sqrt()) * (0.5f64.exp() / df).powf(df)));
    }
    let ok = ratios.iter().all(|&r| r > 0.5 && r < 2.0)
        && ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs());
    let s: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    Ok((ok, s.join(" ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let results = run(&VerifyOptions { quick: true, tolerance_scale: 1.0 });
        let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn zero_tolerance_fails() {
        let results = run(&VerifyOptions { quick: true, tolerance_scale: 0.0 });
        assert!(results.iter().any(|r| !r.passed));
    }
}
