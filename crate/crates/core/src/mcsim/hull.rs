//! Convex hulls in the plane (monotone chain) and in space (incremental).

use std::collections::HashSet;

use crate::error::{ensure_domain, Error, Result};

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the hull vertices in counterclockwise order, starting from the
/// lowest-leftmost point. Points on hull edges are dropped.
pub fn hull_d2(points: &[[f64; 2]]) -> Result<Vec<usize>> {
    ensure_domain!(points.len() >= 3, "need at least 3 points, got {}", points.len());
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| {
        let (p, q) = (points[i], points[j]);
        p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])).then(i.cmp(&j))
    });
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross2(points[lower[lower.len() - 2]], points[lower[lower.len() - 1]], points[i]) <= 0.0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross2(points[upper[upper.len() - 2]], points[upper[upper.len() - 1]], points[i]) <= 0.0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::Degenerate("all points are collinear".into()));
    }
    Ok(lower)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn orient(a: [f64; 3], b: [f64; 3], c: [f64; 3], p: [f64; 3]) -> f64 {
    dot(cross(sub(b, a), sub(c, a)), sub(p, a))
}

/// Outward-oriented triangles of the hull, each as counterclockwise vertex
/// indices seen from outside. Coplanar hull faces come out triangulated.
pub fn hull_d3(points: &[[f64; 3]]) -> Result<Vec<[usize; 3]>> {
    let n = points.len();
    ensure_domain!(n >= 4, "need at least 4 points, got {n}");
    let scale = points.iter().flat_map(|p| p.iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let eps = 1e-12 * scale * scale * scale;

    // Initial tetrahedron: lowest index, then farthest, widest, tallest.
    let i0 = 0;
    let i1 = (1..n)
        .max_by(|&a, &b| {
            let da = sub(points[a], points[i0]);
            let db = sub(points[b], points[i0]);
            dot(da, da).total_cmp(&dot(db, db)).then(b.cmp(&a))
        })
        .expect("n >= 4");
    let area = |k: usize| {
        let c = cross(sub(points[i1], points[i0]), sub(points[k], points[i0]));
        dot(c, c)
    };
    let i2 = (0..n)
        .filter(|&k| k != i0 && k != i1)
        .max_by(|&a, &b| area(a).total_cmp(&area(b)).then(b.cmp(&a)))
        .expect("n >= 4");
    if area(i2).sqrt() <= eps / scale {
        return Err(Error::Degenerate("all points are collinear".into()));
    }
    let vol = |k: usize| orient(points[i0], points[i1], points[i2], points[k]).abs();
    let i3 = (0..n)
        .filter(|&k| k != i0 && k != i1 && k != i2)
        .max_by(|&a, &b| vol(a).total_cmp(&vol(b)).then(b.cmp(&a)))
        .expect("n >= 4");
    if vol(i3) <= eps {
        return Err(Error::Degenerate("all points are coplanar".into()));
    }

    let mut facets: Vec<[usize; 3]> = vec![[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]];
    let centroid = {
        let s = [i0, i1, i2, i3]
            .iter()
            .fold([0.0; 3], |acc, &k| [acc[0] + points[k][0], acc[1] + points[k][1], acc[2] + points[k][2]]);
        [s[0] / 4.0, s[1] / 4.0, s[2] / 4.0]
    };
    for f in facets.iter_mut() {
        if orient(points[f[0]], points[f[1]], points[f[2]], centroid) > 0.0 {
            f.swap(1, 2);
        }
    }

    for p in 0..n {
        if [i0, i1, i2, i3].contains(&p) {
            continue;
        }
        let visible: Vec<bool> =
            facets.iter().map(|f| orient(points[f[0]], points[f[1]], points[f[2]], points[p]) > eps).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, &v)| v) {
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                edges.insert(e);
            }
        }
        let mut kept: Vec<[usize; 3]> = facets.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| *f).collect();
        let mut horizon: Vec<(usize, usize)> =
            edges.iter().copied().filter(|&(a, b)| !edges.contains(&(b, a))).collect();
        horizon.sort_unstable();
        kept.extend(horizon.into_iter().map(|(a, b)| [a, b, p]));
        facets = kept;
    }
    Ok(facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_point() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.4]];
        assert_eq!(hull_d2(&pts).unwrap(), vec![0, 1, 2, 3]);
        assert!(hull_d2(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).is_err());
    }

    fn check_outward(points: &[[f64; 3]], facets: &[[usize; 3]]) {
        for f in facets {
            for (k, &p) in points.iter().enumerate() {
                if !f.contains(&k) {
                    assert!(orient(points[f[0]], points[f[1]], points[f[2]], p) <= 1e-12, "facet {f:?} sees {k}");
                }
            }
        }
    }

    #[test]
    fn tetrahedron_and_cube() {
        let tet = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
        let f = hull_d3(&tet).unwrap();
        assert_eq!(f.len(), 4);
        check_outward(&tet, &f);

        let mut cube = Vec::new();
        for i in 0..8 {
            cube.push([f64::from(i & 1), f64::from((i >> 1) & 1), f64::from((i >> 2) & 1)]);
        }
        cube.push([0.5, 0.5, 0.5]);
        let f = hull_d3(&cube).unwrap();
        assert_eq!(f.len(), 12);
        check_outward(&cube, &f);
        assert!(f.iter().all(|t| !t.contains(&8)));
    }

    #[test]
    fn coplanar_is_degenerate() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert!(matches!(hull_d3(&pts), Err(Error::Degenerate(_))));
    }
}
