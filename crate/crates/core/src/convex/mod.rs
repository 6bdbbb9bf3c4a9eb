//! Primitives on convex bodies: support, widths, chords, symmetrization,
//! diameters and Hausdorff distances.

pub mod body;
pub mod lp;
pub mod polygon;
pub mod vector;

use rand::Rng;
use serde::Serialize;

use self::body::{add_combination, Body, VPolytope};
use self::lp::{LinearProgram, LpOutcome, Relation, Sense};
use self::polygon::P2;
use self::vector::{check_dim, check_direction, Vector};
use crate::error::{Error, Result};

/// Whether a returned value is exact or only a one-sided estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Exactness {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "approximate_lower_bound")]
    LowerBound,
    #[serde(rename = "approximate_upper_bound")]
    UpperBound,
}

impl Exactness {
    pub fn is_exact(self) -> bool {
        self == Exactness::Exact
    }

    /// Exactness of a quantity built from several inputs.
    fn combine(self, other: Exactness) -> Exactness {
        match (self, other) {
            (Exactness::Exact, o) | (o, Exactness::Exact) => o,
            (a, b) if a == b => a,
            _ => Exactness::LowerBound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub exactness: Exactness,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            exactness: Exactness::Exact,
        }
    }
}

pub fn support(k: &Body, v: &Vector) -> Result<f64> {
    k.support(v)
}

/// `w(K, v) = h(K, v) + h(K, −v)`.
pub fn width_dir(k: &Body, v: &Vector) -> Result<f64> {
    Ok(k.support(v)? + k.support(&(-v))?)
}

/// `C = ½(K − K)`. Polytopes with vertex access give a V-polytope (pruned to
/// the hull in the plane); other bodies give the formal sum.
pub fn central_symm(k: &Body) -> Body {
    if let Some(vs) = k.vertices() {
        let mut pts = Vec::with_capacity(vs.len() * vs.len());
        for u in &vs {
            for w in &vs {
                pts.push((u - w) * 0.5);
            }
        }
        if let Ok(p) = VPolytope::from_points(pts) {
            return Body::V(p);
        }
    }
    let half = Body::Scaled(Box::new(k.clone()), 0.5);
    let neg = Body::Scaled(Box::new(Body::Reflected(Box::new(k.clone()))), 0.5);
    Body::Sum(vec![half, neg])
}

/// Direction set used by sampled estimates.
pub fn sample_directions(d: usize, count: usize, seed: u64) -> Vec<Vector> {
    if d == 1 {
        return vec![vector::vector(&[1.0]), vector::vector(&[-1.0])];
    }
    if d == 2 {
        return vector::circle_directions(count, 0.0);
    }
    let mut dirs = vector::random_units(seed, d, count);
    for i in 0..d {
        dirs.push(vector::unit(d, i));
        dirs.push(-vector::unit(d, i));
    }
    dirs
}

const SAMPLED_DIRECTIONS: usize = 4096;

/// Maximal chord `τ(K, v) = sup{λ ≥ 0 : K ∩ (K + λv) ≠ ∅}`.
pub fn max_chord(k: &Body, v: &Vector) -> Result<Estimate> {
    check_direction(v, k.dim())?;
    match k {
        Body::Ball { radius, .. } => return Ok(Estimate::exact(2.0 * radius / v.norm())),
        Body::Product(fs) => {
            let mut best: Option<Estimate> = None;
            for (f, (start, len)) in fs.iter().zip(Body::blocks(fs)) {
                let b = vector::block(v, start, len);
                if b.iter().all(|c| *c == 0.0) {
                    continue;
                }
                let e = max_chord(f, &b)?;
                best = Some(match best {
                    None => e,
                    Some(p) => Estimate {
                        value: p.value.min(e.value),
                        exactness: p.exactness.combine(e.exactness),
                    },
                });
            }
            return best.ok_or(Error::ZeroDirection);
        }
        Body::Scaled(b, s) => {
            let e = max_chord(b, v)?;
            return Ok(Estimate { value: e.value * s, ..e });
        }
        Body::Translated(b, _) => return max_chord(b, v),
        Body::Reflected(b) => return max_chord(b, &(-v)),
        _ => {}
    }
    let mut lp = LinearProgram::new(Sense::Maximize);
    if let (Some(y), Some(z)) = (k.embed(&mut lp), k.embed(&mut lp)) {
        let lam = lp.add_var(false);
        lp.set_objective(lam, 1.0);
        let le = body::AffineExpr::var(lam);
        for j in 0..k.dim() {
            add_combination(&mut lp, &[(1.0, &z[j]), (-1.0, &y[j]), (-v[j], &le)], Relation::Eq, 0.0);
        }
        return match lp.solve()? {
            LpOutcome::Optimal(s) => Ok(Estimate::exact(s.value)),
            LpOutcome::Unbounded => Err(Error::Unbounded),
            LpOutcome::Infeasible => Err(Error::EmptyInterior),
        };
    }
    // K ∩ (K + λv) ≠ ∅ iff w(K, u) ≥ λ⟨u, v⟩ for every u; sampling u bounds τ above.
    let mut best = f64::INFINITY;
    for u in sample_directions(k.dim(), SAMPLED_DIRECTIONS, 11) {
        let p = u.dot(v);
        if p > 1e-12 {
            best = best.min(width_dir(k, &u)? / p);
        }
    }
    Ok(Estimate {
        value: best,
        exactness: Exactness::UpperBound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthResult {
    pub value: f64,
    pub direction: Vec<f64>,
    pub exactness: Exactness,
}

fn hull_of_differences(poly: &[P2]) -> Vec<P2> {
    let mut pts = Vec::with_capacity(poly.len() * poly.len());
    for u in poly {
        for w in poly {
            pts.push([(u[0] - w[0]) / 2.0, (u[1] - w[1]) / 2.0]);
        }
    }
    polygon::convex_hull(&pts)
}

/// Minimal width `w(K) = inf_{‖v‖=1} w(K, v)`, exact for planar polytopes,
/// balls, intervals and products of these.
pub fn global_width(k: &Body) -> Result<WidthResult> {
    let d = k.dim();
    if d == 1 {
        let e = vector::vector(&[1.0]);
        return Ok(WidthResult {
            value: width_dir(k, &e)?,
            direction: vec![1.0],
            exactness: Exactness::Exact,
        });
    }
    match k {
        Body::Ball { radius, .. } => {
            let mut dir = vec![0.0; d];
            dir[0] = 1.0;
            return Ok(WidthResult {
                value: 2.0 * radius,
                direction: dir,
                exactness: Exactness::Exact,
            });
        }
        Body::Product(fs) => {
            let mut best: Option<(WidthResult, usize, usize)> = None;
            let mut exactness = Exactness::Exact;
            for (f, (start, len)) in fs.iter().zip(Body::blocks(fs)) {
                let w = global_width(f)?;
                exactness = exactness.combine(w.exactness);
                if best.as_ref().is_none_or(|b| w.value < b.0.value) {
                    best = Some((w, start, len));
                }
            }
            let (w, start, _) = best.expect("nonempty product");
            let mut dir = vec![0.0; d];
            dir[start..start + w.direction.len()].copy_from_slice(&w.direction);
            return Ok(WidthResult {
                value: w.value,
                direction: dir,
                exactness,
            });
        }
        Body::Scaled(b, s) => {
            let w = global_width(b)?;
            return Ok(WidthResult { value: w.value * s, ..w });
        }
        Body::Translated(b, _) => return global_width(b),
        Body::Reflected(b) => return global_width(b),
        _ => {}
    }
    if let Some(poly) = k.polygon() {
        if poly.len() < 3 {
            return Err(Error::Degenerate("planar body has no interior".into()));
        }
        let c = hull_of_differences(&poly);
        let mut best = (f64::INFINITY, [1.0, 0.0]);
        for (n, off) in polygon::edge_halfplanes(&c) {
            let len = polygon::norm(n);
            let w = 2.0 * off / len;
            if w < best.0 {
                best = (w, [n[0] / len, n[1] / len]);
            }
        }
        return Ok(WidthResult {
            value: best.0,
            direction: best.1.to_vec(),
            exactness: Exactness::Exact,
        });
    }
    sampled_width(k)
}

// Multi-start pattern search on the sphere, seeded with facet normals.
fn sampled_width(k: &Body) -> Result<WidthResult> {
    let d = k.dim();
    let f = |v: &Vector| -> Result<f64> { width_dir(k, &(v / v.norm())) };
    let mut starts: Vec<Vector> = sample_directions(d, if d == 2 { 256 } else { 64 }, 17);
    if let Ok(h) = k.to_hpolytope() {
        starts.extend(h.normals().iter().map(|a| a / a.norm()));
    }
    let mut ranked: Vec<(f64, Vector)> = Vec::with_capacity(starts.len());
    for s in starts {
        ranked.push((f(&s)?, s));
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    ranked.truncate(64);
    let mut rng = vector::rng(23);
    let mut best = ranked[0].clone();
    for (mut val, mut v) in ranked {
        let mut step = 0.25;
        while step > 1e-9 {
            let mut improved = false;
            for _ in 0..4 * d {
                let cand = &v + vector::random_unit(&mut rng, d) * step;
                let cand = &cand / cand.norm();
                let cv = f(&cand)?;
                if cv < val {
                    val = cv;
                    v = cand;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if val < best.0 {
            best = (val, v);
        }
    }
    Ok(WidthResult {
        value: best.0,
        direction: best.1.iter().copied().collect(),
        exactness: Exactness::UpperBound,
    })
}

/// Inradius of `C̄` about the origin, as the distance from the origin to the
/// boundary of the symmetrized polygon (planar polytopes only).
pub fn central_inradius(k: &Body) -> Result<f64> {
    let poly = k
        .polygon()
        .ok_or_else(|| Error::Unsupported("central inradius needs a planar polytope".into()))?;
    let c = hull_of_differences(&poly);
    let n = c.len();
    Ok((0..n)
        .map(|i| polygon::segment_distance([0.0, 0.0], c[i], c[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min))
}

/// `diam K`, exact when vertices are available.
pub fn diameter(k: &Body) -> Result<Estimate> {
    match k {
        Body::Ball { radius, .. } => return Ok(Estimate::exact(2.0 * radius)),
        Body::Product(fs) => return norm_combine(fs, diameter),
        Body::Scaled(b, s) => {
            let e = diameter(b)?;
            return Ok(Estimate { value: e.value * s, ..e });
        }
        Body::Translated(b, _) | Body::Reflected(b) => return diameter(b),
        _ => {}
    }
    if let Some(vs) = k.vertices() {
        let mut best = 0.0f64;
        for (i, u) in vs.iter().enumerate() {
            for w in &vs[i + 1..] {
                best = best.max((u - w).norm());
            }
        }
        return Ok(Estimate::exact(best));
    }
    let mut best = 0.0f64;
    for u in sample_directions(k.dim(), SAMPLED_DIRECTIONS, 13) {
        best = best.max(width_dir(k, &u)?);
    }
    Ok(Estimate {
        value: best,
        exactness: Exactness::LowerBound,
    })
}

fn norm_combine(fs: &[Body], f: fn(&Body) -> Result<Estimate>) -> Result<Estimate> {
    let mut sq = 0.0;
    let mut ex = Exactness::Exact;
    for b in fs {
        let e = f(b)?;
        sq += e.value * e.value;
        ex = ex.combine(e.exactness);
    }
    Ok(Estimate {
        value: sq.sqrt(),
        exactness: ex,
    })
}

/// `D(K) = sup_{x∈K} ‖x‖`; exact with vertex access, otherwise the sampled
/// lower bound `max h(K, u)` over 10⁴ unit directions.
pub fn far_radius(k: &Body) -> Result<Estimate> {
    match k {
        Body::Ball { center, radius } => return Ok(Estimate::exact(center.norm() + radius)),
        Body::Product(fs) => return norm_combine(fs, far_radius),
        Body::Scaled(b, s) => {
            let e = far_radius(b)?;
            return Ok(Estimate { value: e.value * s, ..e });
        }
        Body::Reflected(b) => return far_radius(b),
        _ => {}
    }
    if let Some(vs) = k.vertices() {
        return Ok(Estimate::exact(vs.iter().map(|u| u.norm()).fold(0.0, f64::max)));
    }
    let mut best = 0.0f64;
    for u in sample_directions(k.dim(), 10_000, 19) {
        best = best.max(k.support(&u)?);
    }
    Ok(Estimate {
        value: best,
        exactness: Exactness::LowerBound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HausdorffResult {
    /// Distance by definition (exact cases) or the sampled support formula.
    pub value: f64,
    /// Distance by the support-function formula.
    pub support_value: f64,
    pub exactness: Exactness,
}

/// Sampled support-function estimate `max_u |h(K,u) − h(M,u)|` over unit
/// directions: a lower bound for the Hausdorff distance.
pub fn hausdorff_sampled(k: &Body, m: &Body, dirs: &[Vector]) -> Result<f64> {
    let mut best = 0.0f64;
    for u in dirs {
        let u = u / u.norm();
        best = best.max((k.support(&u)? - m.support(&u)?).abs());
    }
    Ok(best)
}

/// Hausdorff distance. Planar polytopes get both exact routes: vertex-to-polygon
/// distances, and the support formula maximized over the merged normal fan.
pub fn hausdorff(k: &Body, m: &Body) -> Result<HausdorffResult> {
    if k.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: m.dim(),
        });
    }
    if let (Some(pk), Some(pm)) = (k.polygon(), m.polygon()) {
        let value = hausdorff_by_definition(&pk, &pm);
        let support_value = hausdorff_by_fan(&pk, &pm);
        return Ok(HausdorffResult {
            value,
            support_value,
            exactness: Exactness::Exact,
        });
    }
    let s = hausdorff_sampled(k, m, &sample_directions(k.dim(), SAMPLED_DIRECTIONS, 29))?;
    Ok(HausdorffResult {
        value: s,
        support_value: s,
        exactness: Exactness::LowerBound,
    })
}

pub fn hausdorff_by_definition(pk: &[P2], pm: &[P2]) -> f64 {
    let one = |a: &[P2], b: &[P2]| {
        a.iter()
            .map(|u| polygon::point_distance(b, *u))
            .fold(0.0, f64::max)
    };
    one(pk, pm).max(one(pm, pk))
}

fn support_2d(poly: &[P2], u: P2) -> (f64, P2) {
    let mut best = (f64::NEG_INFINITY, poly[0]);
    for p in poly {
        let s = polygon::dot(*p, u);
        if s > best.0 {
            best = (s, *p);
        }
    }
    best
}

/// Support-formula Hausdorff distance, exact for polygons: on each arc of the
/// merged normal fan the support difference is `⟨u − w, ·⟩` for fixed support
/// vertices, maximized in absolute value at an arc end or at `±(u − w)`.
pub fn hausdorff_by_fan(pk: &[P2], pm: &[P2]) -> f64 {
    use std::f64::consts::TAU;
    let mut angles: Vec<f64> = Vec::new();
    for poly in [pk, pm] {
        if poly.len() >= 2 {
            for (n, _) in polygon::edge_halfplanes(poly) {
                angles.push(n[1].atan2(n[0]).rem_euclid(TAU));
            }
        }
    }
    angles.push(0.0);
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let dir = |t: f64| [t.cos(), t.sin()];
    let gap = |u: P2| (support_2d(pk, u).0 - support_2d(pm, u).0).abs();
    let mut best = 0.0f64;
    let n = angles.len();
    for i in 0..n {
        let a0 = angles[i];
        let a1 = if i + 1 < n { angles[i + 1] } else { angles[0] + TAU };
        best = best.max(gap(dir(a0)));
        let mid = dir(0.5 * (a0 + a1));
        let p = polygon::sub(support_2d(pk, mid).1, support_2d(pm, mid).1);
        if polygon::norm(p) == 0.0 {
            continue;
        }
        for q in [p, [-p[0], -p[1]]] {
            let t = q[1].atan2(q[0]).rem_euclid(TAU);
            let t = if t < a0 { t + TAU } else { t };
            if t > a0 && t < a1 {
                best = best.max(gap(dir(t)));
            }
        }
    }
    best
}

/// A functional `v*` with `w(K, v*) = τ(K, v)⟨v*, v⟩`: the outward normal of
/// `C̄` at the boundary point `(τ/2)v` (planar polytopes only). Returns `(τ, v*)`
/// with `v*` of unit length.
pub fn chord_witness_2d(k: &Body, v: &Vector) -> Result<(f64, Vector)> {
    check_direction(v, 2)?;
    let poly = k
        .polygon()
        .ok_or_else(|| Error::Unsupported("chord witness needs a planar polytope".into()))?;
    let tau = max_chord(k, v)?.value;
    let p = [v[0] * tau / 2.0, v[1] * tau / 2.0];
    let c = hull_of_differences(&poly);
    let mut best = (f64::NEG_INFINITY, [1.0, 0.0]);
    for (n, off) in polygon::edge_halfplanes(&c) {
        let len = polygon::norm(n);
        let gap = (polygon::dot(n, p) - off) / len;
        if gap > best.0 {
            best = (gap, [n[0] / len, n[1] / len]);
        }
    }
    Ok((tau, vector::vector(&best.1)))
}

/// Seeded points of K: random convex combinations of vertices, with a share
/// on the boundary for planar bodies. Balls and oracles are sampled inside
/// their certified inner ball.
pub fn sample_points(k: &Body, count: usize, seed: u64) -> Result<Vec<Vector>> {
    let d = k.dim();
    let mut rng = vector::rng(seed);
    let mut out = Vec::with_capacity(count);
    if let Some(vs) = k.vertices() {
        let poly = k.polygon();
        for i in 0..count {
            if let (Some(poly), true) = (&poly, i % 3 == 0) {
                let j = rng.random_range(0..poly.len());
                let (a, b) = (poly[j], poly[(j + 1) % poly.len()]);
                let t: f64 = rng.random();
                out.push(vector::vector(&[a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]));
                continue;
            }
            let weights: Vec<f64> = (0..vs.len())
                .map(|_| {
                    let u: f64 = rng.random();
                    // sharper weights reach the boundary more often
                    (-(u.max(1e-300)).ln()).powi(3)
                })
                .collect();
            let total: f64 = weights.iter().sum();
            let mut x = vector::zeros(d);
            for (w, u) in weights.iter().zip(&vs) {
                x += u * (w / total);
            }
            out.push(x);
        }
        return Ok(out);
    }
    let (c, r) = k
        .inner_ball()
        .ok_or_else(|| Error::Unsupported("no sampling scheme for this body".into()))?;
    for _ in 0..count {
        let u = vector::random_unit(&mut rng, d);
        let s: f64 = rng.random::<f64>().powf(1.0 / d as f64);
        out.push(&c + u * (r * s));
    }
    Ok(out)
}

/// Check a point's dimension against a body.
pub fn check_point(k: &Body, x: &Vector) -> Result<()> {
    check_dim(x, k.dim())
}
