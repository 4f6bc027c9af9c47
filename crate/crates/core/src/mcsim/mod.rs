//! Monte-Carlo cross-checks: beta point samplers, hull containment, convex
//! hulls in dimensions 2 and 3, and hyperbolic area/volume oracles.
//!
//! Every estimator splits its samples over `streams` independent ChaCha8
//! streams keyed by `(seed, stream)`, so results are bit-identical whatever
//! the execution policy.

mod hull;
mod hyperbolic;
mod lp;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{ensure_domain, Error, Result};
use crate::expect::BetaSpec;
use crate::par::{self, Execution};
use crate::specfun::c_d_beta;

pub use hull::{hull_d2, hull_d3};
pub use hyperbolic::{hyp_area_polygon_d2, ideal_tetra_volume, IDEAL_THRESHOLD};
pub use lp::{contains, FEASIBILITY_TOL};

/// Seeding and sample budget of an estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub n_samples: u64,
    pub streams: u32,
    pub execution: Execution,
}

impl SampleConfig {
    pub fn new(seed: u64, n_samples: u64) -> Self {
        Self { seed, n_samples, streams: 16, execution: Execution::default() }
    }

    pub fn with_streams(mut self, streams: u32) -> Self {
        self.streams = streams;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    fn validate(&self) -> Result<()> {
        ensure_domain!(self.n_samples >= 1, "n_samples must be at least 1");
        ensure_domain!(self.streams >= 1, "streams must be at least 1");
        Ok(())
    }

    /// The generator for one stream.
    pub fn stream_rng(&self, stream: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(stream));
        rng
    }

    fn stream_sizes(&self) -> Vec<(u32, u64)> {
        let s = u64::from(self.streams);
        (0..self.streams).map(|i| (i, self.n_samples / s + u64::from(u64::from(i) < self.n_samples % s))).collect()
    }
}

/// Sample mean with its standard error `sd / √n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    /// Samples redrawn because the hull came out degenerate.
    pub resampled: u64,
}

impl McEstimate {
    /// `(mean - target) / stderr`; zero when both the spread and the gap vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        let gap = self.mean - target;
        if self.stderr > 0.0 {
            gap / self.stderr
        } else if gap.abs() <= 1e-12 * target.abs().max(1.0) {
            0.0
        } else {
            gap.signum() * f64::INFINITY
        }
    }

    fn scaled(self, s: f64) -> Self {
        Self { mean: self.mean * s, stderr: self.stderr * s.abs(), ..self }
    }
}

/// Running mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    resampled: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return Self { resampled: self.resampled + other.resampled, ..other };
        }
        if other.n == 0 {
            return Self { resampled: self.resampled + other.resampled, ..self };
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Self {
            n,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.n as f64 * w,
            resampled: self.resampled + other.resampled,
        }
    }

    fn estimate(self) -> McEstimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        McEstimate { mean: self.mean, stderr: (var / self.n as f64).sqrt(), n: self.n, resampled: self.resampled }
    }
}

/// Runs `draw` `n_samples` times spread over the configured streams and
/// reduces the stream moments in stream order. `draw` returns `None` to ask
/// for a redraw.
fn run_streams<F>(cfg: &SampleConfig, draw: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<f64>> + Sync + Send,
{
    cfg.validate()?;
    let per_stream = par::map(cfg.execution, &cfg.stream_sizes(), |&(stream, count)| -> Result<Moments> {
        let mut rng = cfg.stream_rng(stream);
        let mut m = Moments::default();
        while m.n < count {
            match draw(&mut rng)? {
                Some(x) => m.push(x),
                None => {
                    m.resampled += 1;
                    if m.resampled > 1000 + count {
                        return Err(Error::Degenerate("too many degenerate samples".into()));
                    }
                }
            }
        }
        Ok(m)
    });
    let mut total = Moments::default();
    for m in per_stream {
        total = total.merge(m?);
    }
    Ok(total.estimate())
}

/// Draws from the beta law `f_{d,β}` on the unit ball; `β = -1` is the uniform
/// law on the sphere.
#[derive(Clone, Debug)]
pub struct BetaSampler {
    d: usize,
    radial: Option<(Gamma<f64>, Gamma<f64>)>,
}

impl BetaSampler {
    pub fn new(d: u32, beta: f64) -> Result<Self> {
        ensure_domain!(d >= 1, "dimension must be positive");
        ensure_domain!(beta >= -1.0 && beta.is_finite(), "beta must be >= -1, got {beta}");
        let radial = if beta == -1.0 {
            None
        } else {
            let g1 = Gamma::new(0.5 * f64::from(d), 1.0).map_err(|e| Error::Domain(e.to_string()))?;
            let g2 = Gamma::new(beta + 1.0, 1.0).map_err(|e| Error::Domain(e.to_string()))?;
            Some((g1, g2))
        };
        Ok(Self { d: d as usize, radial })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut x: Vec<f64> = loop {
            let v: Vec<f64> = (0..self.d).map(|_| StandardNormal.sample(rng)).collect();
            let n2: f64 = v.iter().map(|t| t * t).sum();
            if n2 > 0.0 {
                let inv = n2.sqrt().recip();
                break v.into_iter().map(|t| t * inv).collect();
            }
        };
        if let Some((g1, g2)) = &self.radial {
            // Squared radius ~ Beta(d/2, β+1) as a ratio of gammas.
            let (a, b) = (g1.sample(rng), g2.sample(rng));
            let t = if a + b > 0.0 { a / (a + b) } else { 0.0 };
            let r = t.sqrt();
            x.iter_mut().for_each(|c| *c *= r);
        }
        x
    }
}

/// One draw from `f_{d,β}`.
pub fn sample_beta_point<R: Rng + ?Sized>(d: u32, beta: f64, rng: &mut R) -> Result<Vec<f64>> {
    ensure_domain!(d >= 2, "need d >= 2, got {d}");
    Ok(BetaSampler::new(d, beta)?.sample(rng))
}

fn samplers(spec: &BetaSpec) -> Result<Vec<BetaSampler>> {
    spec.betas().iter().map(|&b| BetaSampler::new(spec.d(), b)).collect()
}

/// `E ∫_P (1-‖x‖²)^β dx` estimated as `P[X_0 ∈ P] / c_{d,β}` with `X_0 ~ f_{d,β}`.
pub fn mc_absorption(spec: &BetaSpec, beta: f64, cfg: &SampleConfig) -> Result<McEstimate> {
    ensure_domain!(beta > -1.0, "absorption needs beta > -1, got {beta}");
    let c = c_d_beta(spec.d(), beta)?;
    let probe = BetaSampler::new(spec.d(), beta)?;
    let vertices = samplers(spec)?;
    let est = run_streams(cfg, |rng| {
        let pts: Vec<Vec<f64>> = vertices.iter().map(|s| s.sample(rng)).collect();
        let x = probe.sample(rng);
        Ok(Some(if contains(&pts, &x)? { 1.0 } else { 0.0 }))
    })?;
    Ok(est.scaled(c.recip()))
}

/// Hyperbolic area of the hull of `n` points in the disk via Gauss–Bonnet.
pub fn mc_hull_area_d2(spec: &BetaSpec, cfg: &SampleConfig) -> Result<McEstimate> {
    ensure_domain!(spec.d() == 2, "the Gauss-Bonnet oracle needs d = 2");
    let vertices = samplers(spec)?;
    run_streams(cfg, |rng| {
        let pts: Vec<[f64; 2]> = vertices
            .iter()
            .map(|s| {
                let p = s.sample(rng);
                [p[0], p[1]]
            })
            .collect();
        let cycle = match hull_d2(&pts) {
            Ok(c) => c,
            Err(Error::Degenerate(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let poly: Vec<[f64; 2]> = cycle.iter().map(|&i| pts[i]).collect();
        hyp_area_polygon_d2(&poly).map(Some)
    })
}

fn to3(p: &[f64]) -> [f64; 3] {
    [p[0], p[1], p[2]]
}

/// Volume of the ideal polytope on the given unit vectors: tetrahedra coning
/// the facets not incident to the lowest-index hull vertex.
pub fn ideal_polytope3_volume(points: &[[f64; 3]]) -> Result<f64> {
    let facets = hull_d3(points)?;
    let apex = facets.iter().flat_map(|f| f.iter().copied()).min().expect("hull has facets");
    let mut vol = 0.0;
    for f in facets.iter().filter(|f| !f.contains(&apex)) {
        vol += ideal_tetra_volume(&[points[apex], points[f[0]], points[f[1]], points[f[2]]])?;
    }
    Ok(vol)
}

/// Mean hyperbolic volume of the hull of `n` uniform points on the sphere in 3-space.
pub fn mc_ideal_polytope3_volume(n: usize, cfg: &SampleConfig) -> Result<McEstimate> {
    ensure_domain!(n >= 4, "need n >= 4, got {n}");
    let sphere = BetaSampler::new(3, -1.0)?;
    run_streams(cfg, |rng| {
        let pts: Vec<[f64; 3]> = (0..n).map(|_| to3(&sphere.sample(rng))).collect();
        match ideal_polytope3_volume(&pts) {
            Ok(v) => Ok(Some(v)),
            Err(Error::Degenerate(_)) => Ok(None),
            Err(e) => Err(e),
        }
    })
}

/// `|det(v_1 - v_0, …, v_d - v_0)| / d!`.
fn simplex_volume(vertices: &[Vec<f64>]) -> f64 {
    let d = vertices.len() - 1;
    let mut m: Vec<Vec<f64>> = (1..=d).map(|i| (0..d).map(|k| vertices[i][k] - vertices[0][k]).collect()).collect();
    let mut det = 1.0;
    for c in 0..d {
        let p = (c..d).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).expect("non-empty");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest.iter_mut().take(d - c - 1) {
            let f = row[c] / pivot[c];
            for (x, p) in row[c..d].iter_mut().zip(&pivot[c..d]) {
                *x -= f * p;
            }
        }
    }
    det.abs() / (1..=d).map(|k| k as f64).product::<f64>()
}

/// A uniform point in the simplex from Dirichlet(1, …, 1) weights.
fn uniform_in_simplex<R: Rng + ?Sized>(vertices: &[Vec<f64>], rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = vertices.iter().map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    let d = vertices[0].len();
    (0..d).map(|k| vertices.iter().zip(&w).map(|(v, wi)| v[k] * wi).sum::<f64>() / total).collect()
}

fn hyp_density(x: &[f64], d: usize) -> f64 {
    let r2: f64 = x.iter().map(|t| t * t).sum();
    (1.0 - r2).powf(-0.5 * (d as f64 + 1.0))
}

fn check_simplex(vertices: &[Vec<f64>]) -> Result<usize> {
    let d = vertices.len().saturating_sub(1);
    ensure_domain!(d == 2 || d == 3, "need a triangle or tetrahedron, got {} vertices", vertices.len());
    for v in vertices {
        ensure_domain!(v.len() == d, "vertex dimension {} does not match d = {d}", v.len());
        let r = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        ensure_domain!(
            r <= 1.0 - 1e-9,
            "vertex at radius {r} is (nearly) ideal; use the Gauss-Bonnet or Lobachevsky oracle"
        );
    }
    Ok(d)
}

/// Hyperbolic volume `∫_S (1-‖x‖²)^{-(d+1)/2} dx` of a non-ideal simplex by
/// uniform sampling.
pub fn hyp_volume_simplex_quadrature(vertices: &[Vec<f64>], cfg: &SampleConfig) -> Result<McEstimate> {
    let d = check_simplex(vertices)?;
    let vol = simplex_volume(vertices);
    let est = run_streams(cfg, |rng| Ok(Some(hyp_density(&uniform_in_simplex(vertices, rng), d))))?;
    Ok(est.scaled(vol))
}

/// Mean hyperbolic volume of the simplex on `d+1` beta points (`β_i > -1`),
/// with `inner` uniform points per simplex.
pub fn mc_simplex_hyp_volume(spec: &BetaSpec, inner: u32, cfg: &SampleConfig) -> Result<McEstimate> {
    let d = spec.d() as usize;
    ensure_domain!(d == 2 || d == 3, "the simplex oracle needs d in {{2, 3}}");
    ensure_domain!(spec.n() == d + 1, "the simplex oracle needs n = d + 1 points");
    ensure_domain!(spec.betas().iter().all(|&b| b > -1.0), "the simplex oracle needs beta_i > -1");
    ensure_domain!(inner >= 1, "need at least one inner sample");
    let vertices = samplers(spec)?;
    run_streams(cfg, |rng| {
        let pts: Vec<Vec<f64>> = vertices.iter().map(|s| s.sample(rng)).collect();
        let vol = simplex_volume(&pts);
        let mut s = 0.0;
        for _ in 0..inner {
            s += hyp_density(&uniform_in_simplex(&pts, rng), d);
        }
        Ok(Some(vol * s / f64::from(inner)))
    })
}
