//! Hyperbolic area of Klein-model polygons (Gauss–Bonnet) and volumes of
//! ideal tetrahedra (Lobachevsky function of the cross-ratio).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_domain, Error, Result};
use crate::specfun::lobachevsky;

/// Points with `‖v‖ ≥ 1 - IDEAL_THRESHOLD` count as ideal.
pub const IDEAL_THRESHOLD: f64 = 1e-12;

fn klein_form(x: [f64; 2], u: [f64; 2], w: [f64; 2]) -> f64 {
    let s = 1.0 - (x[0] * x[0] + x[1] * x[1]);
    let xu = x[0] * u[0] + x[1] * u[1];
    let xw = x[0] * w[0] + x[1] * w[1];
    (s * (u[0] * w[0] + u[1] * w[1]) + xu * xw) / (s * s)
}

/// `(n-2)π - Σ α_i` for a convex counterclockwise polygon in the closed disk,
/// with interior angles measured in the Klein metric; ideal vertices have
/// angle zero.
pub fn hyp_area_polygon_d2(vertices: &[[f64; 2]]) -> Result<f64> {
    let n = vertices.len();
    ensure_domain!(n >= 3, "need at least 3 vertices, got {n}");
    let mut angles = 0.0;
    for i in 0..n {
        let x = vertices[i];
        let prev = vertices[(i + n - 1) % n];
        let next = vertices[(i + 1) % n];
        let u = [prev[0] - x[0], prev[1] - x[1]];
        let w = [next[0] - x[0], next[1] - x[1]];
        let turn = w[0] * u[1] - w[1] * u[0];
        if turn <= 0.0 {
            return Err(Error::Domain(format!("vertex {i} breaks convexity or orientation")));
        }
        let r = x[0].hypot(x[1]);
        ensure_domain!(r <= 1.0 + IDEAL_THRESHOLD, "vertex {i} lies outside the disk");
        if r >= 1.0 - IDEAL_THRESHOLD {
            continue;
        }
        let c = klein_form(x, u, w) / (klein_form(x, u, u) * klein_form(x, w, w)).sqrt();
        angles += c.clamp(-1.0, 1.0).acos();
    }
    Ok((n as f64 - 2.0) * PI - angles)
}

/// Stereographic image of a unit vector, projecting from `pole` within the
/// frame `(e, f, pole)`.
fn project(v: [f64; 3], frame: &[[f64; 3]; 3]) -> Complex64 {
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let den = 1.0 - dot(v, frame[2]);
    Complex64::new(dot(v, frame[0]) / den, dot(v, frame[1]) / den)
}

/// Hyperbolic volume of the ideal tetrahedron with the given vertices on the
/// unit sphere.
pub fn ideal_tetra_volume(v: &[[f64; 3]; 4]) -> Result<f64> {
    for (i, p) in v.iter().enumerate() {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        ensure_domain!((r - 1.0).abs() <= 1e-9, "vertex {i} is not a unit vector (norm {r})");
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let d = sub_norm(v[i], v[j]);
            if d < 1e-12 {
                return Err(Error::Degenerate(format!("vertices {i} and {j} coincide")));
            }
        }
    }
    // Project from the coordinate pole farthest from all vertices.
    let axes: [[[f64; 3]; 3]; 6] = [
        [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
        [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]],
        [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]],
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]],
    ];
    let frame = axes
        .iter()
        .max_by(|a, b| {
            let gap = |f: &[[f64; 3]; 3]| v.iter().map(|p| sub_norm(*p, f[2])).fold(f64::INFINITY, f64::min);
            gap(a).total_cmp(&gap(b))
        })
        .expect("six axes");
    let z: Vec<Complex64> = v.iter().map(|&p| project(p, frame)).collect();
    let cr = (z[0] - z[2]) * (z[1] - z[3]) / ((z[1] - z[2]) * (z[0] - z[3]));
    let one = Complex64::new(1.0, 0.0);
    let total = lobachevsky(cr.arg()) + lobachevsky((one / (one - cr)).arg()) + lobachevsky((one - one / cr).arg());
    Ok(total.abs())
}

fn sub_norm(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular() -> [[f64; 3]; 4] {
        let s = 1.0 / 3f64.sqrt();
        [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
    }

    #[test]
    fn regular_ideal_tetrahedron() {
        let v = ideal_tetra_volume(&regular()).unwrap();
        assert!((v - 1.014_941_606_409_653_6).abs() < 1e-12, "{v}");
    }

    #[test]
    fn permutation_invariance() {
        let base = [[0.6, 0.8, 0.0], [0.0, 0.6, -0.8], [-0.48, 0.36, 0.8], [0.0, -1.0, 0.0]];
        let v0 = ideal_tetra_volume(&base).unwrap();
        let perms = [[1, 0, 2, 3], [2, 3, 0, 1], [3, 1, 2, 0], [0, 2, 3, 1], [1, 3, 0, 2]];
        for p in perms {
            let v = ideal_tetra_volume(&[base[p[0]], base[p[1]], base[p[2]], base[p[3]]]).unwrap();
            assert!((v - v0).abs() < 1e-10);
        }
    }

    #[test]
    fn flat_tetrahedron() {
        // Four points on the circle z = 0.6.
        let c = 0.8;
        let pts = [[c, 0.0, 0.6], [0.0, c, 0.6], [-c, 0.0, 0.6], [c * 0.6, -c * 0.8, 0.6]];
        assert!(ideal_tetra_volume(&pts).unwrap() < 1e-9);
        let dup = [pts[0], pts[0], pts[1], pts[2]];
        assert!(ideal_tetra_volume(&dup).is_err());
    }

    #[test]
    fn ideal_polygon_area() {
        let pent: Vec<[f64; 2]> = (0..5).map(|k| f64::from(k) * 2.0 * PI / 5.0).map(|t| [t.cos(), t.sin()]).collect();
        assert!((hyp_area_polygon_d2(&pent).unwrap() - 3.0 * PI).abs() < 1e-12);
        let rev: Vec<[f64; 2]> = pent.iter().rev().copied().collect();
        assert!(hyp_area_polygon_d2(&rev).is_err());
    }

    #[test]
    fn small_triangles_are_flat() {
        let tri = [[0.0, 0.0], [1e-2, 0.0], [0.0, 1e-2]];
        let a = hyp_area_polygon_d2(&tri).unwrap();
        assert!((a / 5e-5 - 1.0).abs() < 1e-2);
        let outer: Vec<[f64; 2]> =
            (0..3).map(|k| f64::from(k) * 2.0 * PI / 3.0).map(|t| [0.99 * t.cos(), 0.99 * t.sin()]).collect();
        let a = hyp_area_polygon_d2(&outer).unwrap();
        assert!(a > 0.0 && a < PI);
    }
}
