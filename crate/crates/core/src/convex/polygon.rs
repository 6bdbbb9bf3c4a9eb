//! Planar routines: convex hull, area, centroid, point distance, and the
//! vertex list of a bounded intersection of half-planes.

pub type P2 = [f64; 2];

#[inline]
pub fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
pub fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

fn scale_of(points: &[P2]) -> f64 {
    points
        .iter()
        .fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()))
        .max(1e-300)
}

/// Counter-clockwise hull by the monotone chain, without collinear points.
/// One or two distinct inputs yield a point or a segment.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let eps = 1e-12 * scale_of(&pts);
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= eps && (a[1] - b[1]).abs() <= eps);
    if pts.len() <= 2 {
        return pts;
    }
    // Cross products scale with squared lengths.
    let tol = 1e-13 * scale_of(&pts).powi(2);
    let mut lower: Vec<P2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn area(poly: &[P2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        / 2.0
}

/// Area centroid, triangulating from the first vertex as hub.
pub fn centroid(poly: &[P2]) -> Option<P2> {
    if poly.len() < 3 {
        return None;
    }
    let hub = poly[0];
    let mut total = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for w in poly[1..].windows(2) {
        let a = cross(hub, w[0], w[1]) / 2.0;
        total += a;
        cx += a * (hub[0] + w[0][0] + w[1][0]) / 3.0;
        cy += a * (hub[1] + w[0][1] + w[1][1]) / 3.0;
    }
    if total.abs() < 1e-300 {
        return None;
    }
    Some([cx / total, cy / total])
}

/// Outward edge normals `(dy, -dx)` of a counter-clockwise polygon, unnormalized,
/// paired with their offsets so that the polygon is `{x : n_i·x ≤ c_i}`.
pub fn edge_halfplanes(poly: &[P2]) -> Vec<(P2, f64)> {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            let nrm = [q[1] - p[1], p[0] - q[0]];
            (nrm, dot(nrm, p))
        })
        .collect()
}

pub fn contains(poly: &[P2], x: P2, tol: f64) -> bool {
    match poly.len() {
        0 => false,
        1 => norm(sub(x, poly[0])) <= tol,
        2 => segment_distance(x, poly[0], poly[1]) <= tol,
        _ => edge_halfplanes(poly)
            .iter()
            .all(|(nrm, c)| (dot(*nrm, x) - c) / norm(*nrm) <= tol),
    }
}

pub fn segment_distance(x: P2, a: P2, b: P2) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return norm(sub(x, a));
    }
    let t = (dot(sub(x, a), ab) / len2).clamp(0.0, 1.0);
    norm(sub(x, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

/// Euclidean distance from `x` to a convex polygon (zero inside).
pub fn point_distance(poly: &[P2], x: P2) -> f64 {
    if contains(poly, x, 0.0) {
        return 0.0;
    }
    let n = poly.len();
    if n == 1 {
        return norm(sub(x, poly[0]));
    }
    (0..n)
        .map(|i| segment_distance(x, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Vertices (counter-clockwise) of `{x : n_i·x ≤ c_i}` given a strictly interior
/// point. The polar of the translated region is the hull of `n_i / (c_i − n_i·p)`;
/// consecutive polar vertices name the two lines meeting at a primal vertex.
pub fn halfplane_vertices(rows: &[(P2, f64)], interior: P2) -> Option<Vec<P2>> {
    let mut dual: Vec<(P2, usize)> = Vec::with_capacity(rows.len());
    for (i, (nrm, c)) in rows.iter().enumerate() {
        let slack = c - dot(*nrm, interior);
        if slack <= 0.0 {
            return None;
        }
        dual.push(([nrm[0] / slack, nrm[1] / slack], i));
    }
    let pts: Vec<P2> = dual.iter().map(|d| d.0).collect();
    let hull = convex_hull(&pts);
    if hull.len() < 3 {
        return None;
    }
    let index_of = |p: P2| {
        dual.iter()
            .find(|d| d.0 == p)
            .map(|d| d.1)
            .expect("hull point comes from input")
    };
    let ids: Vec<usize> = hull.iter().map(|p| index_of(*p)).collect();
    let k = ids.len();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (r1, r2) = (rows[ids[j]], rows[ids[(j + 1) % k]]);
        let det = r1.0[0] * r2.0[1] - r1.0[1] * r2.0[0];
        if det.abs() < 1e-300 {
            return None;
        }
        let x = (r1.1 * r2.0[1] - r2.1 * r1.0[1]) / det;
        let y = (r1.0[0] * r2.1 - r2.0[0] * r1.1) / det;
        out.push([x, y]);
    }
    Some(convex_hull(&out))
}
