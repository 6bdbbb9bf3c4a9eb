//! The generalized Minkowski functional `α(K, x)`, its level sets `K^λ`, the
//! infimum `α_K` with its critical set, and related constructions.

use serde::Serialize;

use crate::convex::body::{add_combination, AffineExpr, Body, HPolytope, VPolytope};
use crate::convex::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::convex::polygon::{self, P2};
use crate::convex::vector::{self, check_dim, check_direction, Vector};
use crate::convex::{self, Exactness};
use crate::error::{Error, Result};

/// Bisection stops at this interval width or after `BISECTION_STEPS` halvings.
pub const BISECTION_WIDTH: f64 = 1e-10;
pub const BISECTION_STEPS: usize = 60;

/// Tolerance certified for closed-form values built from exact supports.
const CLOSED_FORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    LpBisection,
    /// Interior points of vertex-only polytopes: the reflection ratio by one
    /// linear program per vertex.
    LpHomothety,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeResult {
    pub alpha: f64,
    #[serde(serialize_with = "crate::convex::vector::flat::serialize")]
    pub witness_dir: Vector,
    pub method: Method,
    pub tol: f64,
}

/// `t(K, v, x) = (2⟨v, x⟩ − h(K, v) + h(K, −v)) / w(K, v)`.
pub fn t_func(k: &Body, v: &Vector, x: &Vector) -> Result<f64> {
    check_direction(v, k.dim())?;
    check_dim(x, k.dim())?;
    let hp = k.support(v)?;
    let hm = k.support(&(-v))?;
    t_from(hp, hm, v, x)
}

fn t_from(hp: f64, hm: f64, v: &Vector, x: &Vector) -> Result<f64> {
    let w = hp + hm;
    if !(w > 1e-300) {
        return Err(Error::Degenerate("zero width in direction".into()));
    }
    Ok((2.0 * v.dot(x) - hp + hm) / w)
}

#[derive(Debug, Clone)]
struct Row {
    normal: Vector,
    h: f64,
    hneg: f64,
}

impl Row {
    fn width(&self) -> f64 {
        self.h + self.hneg
    }

    fn t(&self, x: &Vector) -> f64 {
        (2.0 * self.normal.dot(x) - self.h + self.hneg) / self.width()
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    Ball { center: Vector, radius: f64 },
    Product(Vec<(Gauge, usize, usize)>),
    Polytope {
        body: Body,
        rows: Option<Vec<Row>>,
        vertices: Option<Vec<Vector>>,
        ball: Option<(Vector, f64)>,
    },
    Oracle { body: Body },
}

/// A body prepared for repeated evaluation of `α(K, ·)`: facet rows with their
/// true supports, vertices and an inscribed ball are computed once.
#[derive(Debug, Clone)]
pub struct Gauge {
    dim: usize,
    prepared: Prepared,
}

impl Gauge {
    pub fn new(k: &Body) -> Result<Gauge> {
        let c = k.canonical();
        let dim = c.dim();
        let prepared = match &c {
            Body::Ball { center, radius } => Prepared::Ball {
                center: center.clone(),
                radius: *radius,
            },
            Body::Product(fs) => {
                let mut parts = Vec::with_capacity(fs.len());
                for (f, (start, len)) in fs.iter().zip(Body::blocks(fs)) {
                    parts.push((Gauge::new(f)?, start, len));
                }
                Prepared::Product(parts)
            }
            b if b.is_polyhedral() => {
                let rows = match b.to_hpolytope() {
                    Ok(h) => Some(rows_of(&h, b)?),
                    Err(Error::Unsupported(_)) => None,
                    Err(e) => return Err(e),
                };
                let vertices = b.vertices();
                let ball = b.inner_ball();
                Prepared::Polytope {
                    body: c.clone(),
                    rows,
                    vertices,
                    ball,
                }
            }
            _ => Prepared::Oracle { body: c.clone() },
        };
        Ok(Gauge { dim, prepared })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `α(K, x)` by the best exact route available.
    pub fn alpha(&self, x: &Vector) -> Result<GaugeResult> {
        check_dim(x, self.dim)?;
        match &self.prepared {
            Prepared::Ball { center, radius } => {
                let d = x - center;
                let n = d.norm();
                let witness = if n > 0.0 { d / n } else { vector::unit(self.dim, 0) };
                Ok(GaugeResult {
                    alpha: n / radius,
                    witness_dir: witness,
                    method: Method::ClosedForm,
                    tol: 1e-15 * (1.0 + n / radius),
                })
            }
            Prepared::Product(parts) => self.product_alpha(parts, x, |g, y| g.alpha(y)),
            Prepared::Polytope { rows, .. } => {
                if let Some(rows) = rows {
                    let (a0, i) = closed_form(rows, x);
                    if a0 <= 1.0 + 1e-12 {
                        return Ok(GaugeResult {
                            alpha: a0,
                            witness_dir: rows[i].normal.clone(),
                            method: Method::ClosedForm,
                            tol: CLOSED_FORM_TOL,
                        });
                    }
                    if self.dim <= 2 {
                        // planar K + (λ−1)C has only the edge normals ±a_i, so the
                        // row maximum of |t| is exact outside K as well
                        let (a, i, sign) = closed_form_abs(rows, x);
                        return Ok(GaugeResult {
                            alpha: a,
                            witness_dir: &rows[i].normal * sign,
                            method: Method::ClosedForm,
                            tol: CLOSED_FORM_TOL * (1.0 + a),
                        });
                    }
                    return self.exterior_bisection(x);
                }
                if self.polytope_contains(x)? {
                    self.homothety(x)
                } else {
                    self.exterior_bisection(x)
                }
            }
            Prepared::Oracle { body } => alpha_sampled(body, x, 4096, 0),
        }
    }

    /// `α(K, x)` by bisection on exact membership tests only: the Schneider sum
    /// outside K, and the erosion `x + (1 − λ)C ⊆ K` checked point by point inside.
    pub fn alpha_bisection(&self, x: &Vector) -> Result<GaugeResult> {
        check_dim(x, self.dim)?;
        match &self.prepared {
            Prepared::Product(parts) => self.product_alpha(parts, x, |g, y| g.alpha_bisection(y)),
            Prepared::Polytope { .. } => {
                if self.polytope_contains(x)? {
                    self.interior_bisection(x)
                } else {
                    self.exterior_bisection(x)
                }
            }
            _ => self.alpha(x),
        }
    }

    fn product_alpha(
        &self,
        parts: &[(Gauge, usize, usize)],
        x: &Vector,
        f: impl Fn(&Gauge, &Vector) -> Result<GaugeResult>,
    ) -> Result<GaugeResult> {
        let mut best: Option<(GaugeResult, usize)> = None;
        let mut tol = 0.0f64;
        for (g, start, len) in parts {
            let r = f(g, &vector::block(x, *start, *len))?;
            tol = tol.max(r.tol);
            if best.as_ref().is_none_or(|b| r.alpha > b.0.alpha) {
                best = Some((r, *start));
            }
        }
        let (r, start) = best.expect("nonempty product");
        let mut w = vector::zeros(self.dim);
        w.rows_mut(start, r.witness_dir.len()).copy_from(&r.witness_dir);
        Ok(GaugeResult {
            alpha: r.alpha,
            witness_dir: w,
            method: r.method,
            tol,
        })
    }

    fn polytope_body(&self) -> &Body {
        match &self.prepared {
            Prepared::Polytope { body, .. } => body,
            _ => unreachable!("polytope route"),
        }
    }

    fn polytope_contains(&self, x: &Vector) -> Result<bool> {
        self.polytope_body().contains(x, 1e-12)
    }

    /// Exact membership in `K^λ` for `λ ≥ 1`: `∃ y, z ∈ K` with
    /// `(λ+1)y − (λ−1)z = 2x`.
    pub fn schneider_member(&self, x: &Vector, lambda: f64) -> Result<bool> {
        schneider_member(self.polytope_body(), x, lambda)
    }

    fn exterior_bisection(&self, x: &Vector) -> Result<GaugeResult> {
        let Prepared::Polytope { body, ball, vertices, rows } = &self.prepared else {
            unreachable!("polytope route");
        };
        let mut lo = 1.0;
        let mut hi = match ball {
            Some((c, r)) => 1.0 + 2.0 * (x - c).norm() / r,
            None => 2.0,
        };
        let mut doublings = 0;
        while !schneider_member(body, x, hi)? {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > BISECTION_STEPS {
                return Err(Error::NonConvergence(
                    "no level set contains the point; membership is not monotone".into(),
                ));
            }
        }
        for _ in 0..BISECTION_STEPS {
            if hi - lo <= BISECTION_WIDTH {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if schneider_member(body, x, mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let (witness, t_w) = match separation_witness(vertices.as_deref(), rows_hpolytope(body, rows).as_ref(), x)? {
            Some(w) => {
                let t = t_func(body, &w, x)?;
                (w, t)
            }
            None => {
                let s = alpha_sampled(body, x, 2048, 1)?;
                let t = s.alpha;
                (s.witness_dir, t)
            }
        };
        let tol = (hi - lo).max((hi - t_w).abs()) + 1e-9 * hi;
        // t at a witness is a lower bound computed from exact supports; prefer it
        // when the bisection bracket confirms it
        let alpha = if (hi - t_w).abs() <= 1e-7 * hi { t_w.max(lo) } else { hi };
        Ok(GaugeResult {
            alpha,
            witness_dir: witness,
            method: Method::LpBisection,
            tol,
        })
    }

    fn interior_bisection(&self, x: &Vector) -> Result<GaugeResult> {
        let Prepared::Polytope { body, rows, vertices, .. } = &self.prepared else {
            unreachable!("polytope route");
        };
        let member: Box<dyn Fn(f64) -> Result<bool>> = match vertices {
            Some(vs) => {
                // vertices of C = ½(K − K), pruned
                let mut diffs = Vec::with_capacity(vs.len() * vs.len());
                for u in vs {
                    for w in vs {
                        diffs.push((u - w) * 0.5);
                    }
                }
                let c = crate::convex::body::prune(diffs);
                Box::new(move |lam: f64| {
                    for cv in &c {
                        if !body.contains(&(x + cv * (1.0 - lam)), 1e-12)? {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                })
            }
            None => {
                let rows = rows.as_ref().ok_or_else(|| {
                    Error::Unsupported("interior bisection needs vertices or facets".into())
                })?;
                Box::new(move |lam: f64| Ok(rows.iter().all(|r| r.t(x) <= lam + 1e-12)))
            }
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..BISECTION_STEPS {
            if hi - lo <= BISECTION_WIDTH {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if member(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let (witness, t_w) = match rows {
            Some(rows) => {
                let (a0, i) = closed_form(rows, x);
                (rows[i].normal.clone(), a0)
            }
            None => {
                let s = alpha_sampled(body, x, 2048, 1)?;
                (s.witness_dir, s.alpha)
            }
        };
        Ok(GaugeResult {
            alpha: hi,
            witness_dir: witness,
            method: Method::LpBisection,
            tol: (hi - lo).max((hi - t_w).abs()) + 1e-12,
        })
    }

    // α = (1 − β)/(1 + β) with β = min over vertices u of max{λ : x − λ(u − x) ∈ K}.
    fn homothety(&self, x: &Vector) -> Result<GaugeResult> {
        let Prepared::Polytope { body, vertices, .. } = &self.prepared else {
            unreachable!("polytope route");
        };
        let vs = vertices
            .as_ref()
            .ok_or_else(|| Error::Unsupported("homothety route needs vertices".into()))?;
        let mut beta = f64::INFINITY;
        for u in vs {
            let d = u - x;
            if d.norm() == 0.0 {
                beta = 0.0;
                break;
            }
            let mut lp = LinearProgram::new(Sense::Maximize);
            let y = body.embed(&mut lp).expect("polyhedral");
            let lam = lp.add_var(false);
            lp.set_objective(lam, 1.0);
            let le = AffineExpr::var(lam);
            for j in 0..self.dim {
                add_combination(&mut lp, &[(1.0, &y[j]), (d[j], &le)], Relation::Eq, x[j]);
            }
            match lp.solve()? {
                LpOutcome::Optimal(s) => beta = beta.min(s.value),
                LpOutcome::Infeasible => beta = 0.0,
                LpOutcome::Unbounded => return Err(Error::Unbounded),
            }
        }
        let beta = beta.clamp(0.0, 1.0);
        let alpha = (1.0 - beta) / (1.0 + beta);
        let s = alpha_sampled(body, x, 2048, 1)?;
        Ok(GaugeResult {
            alpha,
            witness_dir: s.witness_dir,
            method: Method::LpHomothety,
            tol: (alpha - s.alpha).abs() + 1e-9,
        })
    }

    /// Closed-form value `max_i t(K, a_i, x)` over facet rows, if facets exist.
    pub fn closed_form(&self, x: &Vector) -> Option<f64> {
        match &self.prepared {
            Prepared::Polytope { rows: Some(rows), .. } => Some(closed_form(rows, x).0),
            _ => None,
        }
    }
}

fn rows_of(h: &HPolytope, body: &Body) -> Result<Vec<Row>> {
    let mut rows = Vec::with_capacity(h.num_rows());
    for a in h.normals() {
        let hp = body.support(a)?;
        let hm = body.support(&(-a))?;
        if !(hp + hm > 0.0) {
            return Err(Error::Degenerate("zero width along a facet normal".into()));
        }
        rows.push(Row {
            normal: a.clone(),
            h: hp,
            hneg: hm,
        });
    }
    Ok(rows)
}

fn rows_hpolytope(body: &Body, rows: &Option<Vec<Row>>) -> Option<HPolytope> {
    rows.as_ref()?;
    body.to_hpolytope().ok()
}

fn closed_form(rows: &[Row], x: &Vector) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, r) in rows.iter().enumerate() {
        let t = r.t(x);
        if t > best.0 {
            best = (t, i);
        }
    }
    best
}

fn closed_form_abs(rows: &[Row], x: &Vector) -> (f64, usize, f64) {
    let mut best = (f64::NEG_INFINITY, 0, 1.0);
    for (i, r) in rows.iter().enumerate() {
        let t = r.t(x);
        if t.abs() > best.0 {
            best = (t.abs(), i, t.signum());
        }
    }
    best
}

pub fn alpha(k: &Body, x: &Vector) -> Result<GaugeResult> {
    Gauge::new(k)?.alpha(x)
}

/// Which route `alpha_with` should take.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Auto,
    /// Facet-row maximum; fails for points outside K.
    ClosedForm,
    LpBisection,
    Sampled { dirs: usize, seed: u64 },
}

pub fn alpha_with(k: &Body, x: &Vector, strategy: Strategy) -> Result<GaugeResult> {
    match strategy {
        Strategy::Auto => alpha(k, x),
        Strategy::LpBisection => Gauge::new(k)?.alpha_bisection(x),
        Strategy::Sampled { dirs, seed } => alpha_sampled(k, x, dirs, seed),
        Strategy::ClosedForm => {
            check_dim(x, k.dim())?;
            let h = k.to_hpolytope()?;
            let rows = rows_of(&h, k)?;
            let (a0, i) = closed_form(&rows, x);
            if a0 > 1.0 + 1e-12 {
                return Err(Error::InvalidArgument(
                    "closed form applies only to points of the body".into(),
                ));
            }
            Ok(GaugeResult {
                alpha: a0,
                witness_dir: rows[i].normal.clone(),
                method: Method::ClosedForm,
                tol: CLOSED_FORM_TOL,
            })
        }
    }
}

/// `max t(K, v, x)` over `dirs` sampled directions, refined by pattern search:
/// a lower bound on `α(K, x)`.
pub fn alpha_sampled(k: &Body, x: &Vector, dirs: usize, seed: u64) -> Result<GaugeResult> {
    check_dim(x, k.dim())?;
    let d = k.dim();
    let t = |v: &Vector| -> Result<f64> { t_from(k.support_any(v)?, k.support_any(&(-v))?, v, x) };
    let mut ranked: Vec<(f64, Vector)> = Vec::new();
    for v in convex::sample_directions(d, dirs.max(1), seed) {
        ranked.push((t(&v)?, v));
    }
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    ranked.truncate(8);
    let mut rng = vector::rng(seed ^ 0x9e37_79b9);
    let mut best = ranked[0].clone();
    if d > 1 {
        for (mut val, mut v) in ranked {
            let mut step = 0.1;
            while step > 1e-10 {
                let mut improved = false;
                for _ in 0..4 * d {
                    let cand = &v + vector::random_unit(&mut rng, d) * step;
                    let cand = &cand / cand.norm();
                    let cv = t(&cand)?;
                    if cv > val {
                        val = cv;
                        v = cand;
                        improved = true;
                    }
                }
                if !improved {
                    step *= 0.5;
                }
            }
            if val > best.0 {
                best = (val, v);
            }
        }
    }
    Ok(GaugeResult {
        alpha: best.0,
        witness_dir: best.1,
        method: Method::Sampled,
        tol: 1e-6 * (1.0 + best.0.abs()),
    })
}

pub fn schneider_member(body: &Body, x: &Vector, lambda: f64) -> Result<bool> {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let (Some(y), Some(z)) = (body.embed(&mut lp), body.embed(&mut lp)) else {
        return Err(Error::Unsupported("membership program needs a polyhedral body".into()));
    };
    for j in 0..body.dim() {
        add_combination(
            &mut lp,
            &[(lambda + 1.0, &y[j]), (-(lambda - 1.0), &z[j])],
            Relation::Eq,
            2.0 * x[j],
        );
    }
    Ok(lp.solve()?.is_feasible())
}

/// Separating functional for an exterior point, from the program
/// `max 2⟨v, x⟩ − 2p  s.t.  h(K, v) ≤ p, h(K, −v) ≤ q, p + q ≤ 1`
/// whose value plus one equals `α(K, x)` whenever `α ≥ 1`.
fn separation_witness(vertices: Option<&[Vector]>, h: Option<&HPolytope>, x: &Vector) -> Result<Option<Vector>> {
    let d = x.len();
    let mut lp = LinearProgram::new(Sense::Maximize);
    let v = lp.add_vars(d, true);
    let p = lp.add_var(true);
    let q = lp.add_var(true);
    for j in 0..d {
        lp.set_objective(v[j], 2.0 * x[j]);
    }
    lp.set_objective(p, -2.0);
    lp.add_constraint(vec![(p, 1.0), (q, 1.0)], Relation::Le, 1.0);
    if let Some(vs) = vertices.filter(|vs| vs.len() <= 4096) {
        for u in vs {
            let mut up: Vec<(usize, f64)> = (0..d).map(|j| (v[j], u[j])).collect();
            up.push((p, -1.0));
            lp.add_constraint(up, Relation::Le, 0.0);
            let mut un: Vec<(usize, f64)> = (0..d).map(|j| (v[j], -u[j])).collect();
            un.push((q, -1.0));
            lp.add_constraint(un, Relation::Le, 0.0);
        }
    } else if let Some(h) = h {
        // h(K, v) ≤ p  ⟺  ∃ y ≥ 0 with Aᵀy = v and bᵀy ≤ p
        for (sign, bound) in [(1.0, p), (-1.0, q)] {
            let y = lp.add_vars(h.num_rows(), false);
            for j in 0..d {
                let mut c: Vec<(usize, f64)> = h
                    .normals()
                    .iter()
                    .zip(&y)
                    .filter(|(a, _)| a[j] != 0.0)
                    .map(|(a, &yi)| (yi, a[j]))
                    .collect();
                c.push((v[j], -sign));
                lp.add_constraint(c, Relation::Eq, 0.0);
            }
            let mut c: Vec<(usize, f64)> = h.offsets().iter().zip(&y).map(|(b, &yi)| (yi, *b)).collect();
            c.push((bound, -1.0));
            lp.add_constraint(c, Relation::Le, 0.0);
        }
    } else {
        return Ok(None);
    }
    match lp.solve()? {
        LpOutcome::Optimal(s) => {
            let w = vector::vector(&s.x[..d]);
            Ok((w.norm() > 1e-14).then_some(w))
        }
        _ => Ok(None),
    }
}

/// Description of a level set `K^λ`.
#[derive(Debug, Clone)]
pub enum LevelBody {
    /// Makai erosion `{x : ⟨a_i, x⟩ ≤ h_i − (1 − λ) w_i / 2}` (λ ≤ 1); may be flat or empty.
    Halfspaces(HPolytope),
    /// Schneider sum as vertex candidates `((λ+1)u − (λ−1)w)/2` (λ ≥ 1).
    Vertices(VPolytope),
    Ball { center: Vector, radius: f64 },
    /// `K + (λ − 1)C` kept implicit (λ ≥ 1, no vertex list).
    Schneider { body: Body, lambda: f64 },
    Product(Vec<LevelSet>),
    /// `{x : α(K, x) ≤ λ}` evaluated through the gauge.
    Implicit { body: Body, lambda: f64 },
}

#[derive(Debug, Clone)]
pub struct LevelSet {
    pub lambda: f64,
    pub body: LevelBody,
    pub empty: bool,
}

pub fn level_set(k: &Body, lambda: f64) -> Result<LevelSet> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument("lambda must be a nonnegative number".into()));
    }
    let c = k.canonical();
    let body = match &c {
        Body::Ball { center, radius } => LevelBody::Ball {
            center: center.clone(),
            radius: radius * lambda,
        },
        Body::Product(fs) => {
            let parts = fs.iter().map(|f| level_set(f, lambda)).collect::<Result<Vec<_>>>()?;
            let empty = parts.iter().any(|p| p.empty);
            return Ok(LevelSet {
                lambda,
                body: LevelBody::Product(parts),
                empty,
            });
        }
        b if b.is_polyhedral() && lambda <= 1.0 => match b.to_hpolytope() {
            Ok(h) => {
                let rows = rows_of(&h, b)?;
                let normals = rows.iter().map(|r| r.normal.clone()).collect();
                let offsets = rows.iter().map(|r| r.h - (1.0 - lambda) * r.width() / 2.0).collect();
                let e = HPolytope::unchecked(normals, offsets)?;
                let empty = !e.is_feasible()?;
                return Ok(LevelSet {
                    lambda,
                    body: LevelBody::Halfspaces(e),
                    empty,
                });
            }
            Err(Error::Unsupported(_)) => LevelBody::Implicit {
                body: c.clone(),
                lambda,
            },
            Err(e) => return Err(e),
        },
        b if b.is_polyhedral() => match b.vertices() {
            Some(vs) => LevelBody::Vertices(schneider_vertices(&vs, lambda)?),
            None => LevelBody::Schneider {
                body: c.clone(),
                lambda,
            },
        },
        _ if lambda >= 1.0 => LevelBody::Schneider {
            body: c.clone(),
            lambda,
        },
        _ => LevelBody::Implicit {
            body: c.clone(),
            lambda,
        },
    };
    Ok(LevelSet {
        lambda,
        body,
        empty: false,
    })
}

pub fn schneider_vertices(vs: &[Vector], lambda: f64) -> Result<VPolytope> {
    let mut pts = Vec::with_capacity(vs.len() * vs.len());
    for u in vs {
        for w in vs {
            pts.push((u * (lambda + 1.0) - w * (lambda - 1.0)) * 0.5);
        }
    }
    VPolytope::from_points(crate::convex::body::prune(pts))
}

impl LevelSet {
    pub fn dim(&self) -> usize {
        match &self.body {
            LevelBody::Halfspaces(h) => h.dim(),
            LevelBody::Vertices(v) => v.dim(),
            LevelBody::Ball { center, .. } => center.len(),
            LevelBody::Schneider { body, .. } | LevelBody::Implicit { body, .. } => body.dim(),
            LevelBody::Product(ps) => ps.iter().map(LevelSet::dim).sum(),
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        check_dim(x, self.dim())?;
        if self.empty {
            return Ok(false);
        }
        match &self.body {
            LevelBody::Halfspaces(h) => Ok(h.contains(x, tol)),
            LevelBody::Vertices(v) => Body::V(v.clone()).contains(x, tol),
            LevelBody::Ball { center, radius } => Ok((x - center).norm() <= radius + tol),
            LevelBody::Schneider { body, lambda } => {
                if body.is_polyhedral() {
                    // shrink toward the level set by the tolerance before testing
                    return Ok(schneider_member(body, x, *lambda + tol)?);
                }
                Ok(alpha(body, x)?.alpha <= *lambda + tol)
            }
            LevelBody::Implicit { body, lambda } => Ok(alpha(body, x)?.alpha <= *lambda + tol),
            LevelBody::Product(ps) => {
                let mut start = 0;
                for p in ps {
                    let d = p.dim();
                    if !p.contains(&vector::block(x, start, d), tol)? {
                        return Ok(false);
                    }
                    start += d;
                }
                Ok(true)
            }
        }
    }

    /// Support function of the level set.
    pub fn support(&self, v: &Vector) -> Result<f64> {
        check_direction(v, self.dim())?;
        self.support_any(v)
    }

    fn support_any(&self, v: &Vector) -> Result<f64> {
        if self.empty {
            return Err(Error::EmptyInterior);
        }
        if v.iter().all(|c| *c == 0.0) {
            return Ok(0.0);
        }
        match &self.body {
            LevelBody::Halfspaces(h) => h.support(v),
            LevelBody::Vertices(p) => p.support(v),
            LevelBody::Ball { center, radius } => Ok(v.dot(center) + radius * v.norm()),
            LevelBody::Schneider { body, lambda } => {
                let (hp, hm) = (body.support_any(v)?, body.support_any(&(-v))?);
                Ok(((lambda + 1.0) * hp + (lambda - 1.0) * hm) / 2.0)
            }
            LevelBody::Implicit { .. } => Err(Error::Unsupported(
                "support of an implicit level set below one".into(),
            )),
            LevelBody::Product(ps) => {
                let mut s = 0.0;
                let mut start = 0;
                for p in ps {
                    let d = p.dim();
                    s += p.support_any(&vector::block(v, start, d))?;
                    start += d;
                }
                Ok(s)
            }
        }
    }

    /// A point of the level set maximizing `⟨v, ·⟩` (polyhedral descriptions).
    pub fn support_point(&self, v: &Vector) -> Result<Vector> {
        check_dim(v, self.dim())?;
        if self.empty {
            return Err(Error::EmptyInterior);
        }
        match &self.body {
            LevelBody::Halfspaces(h) => {
                let mut lp = LinearProgram::new(Sense::Maximize);
                let x = lp.add_vars(h.dim(), true);
                for (j, &c) in v.iter().enumerate() {
                    lp.set_objective(x[j], c);
                }
                h.add_rows(&mut lp, &x);
                match lp.solve()? {
                    LpOutcome::Optimal(s) => Ok(vector::vector(&s.x)),
                    LpOutcome::Infeasible => Err(Error::EmptyInterior),
                    LpOutcome::Unbounded => Err(Error::Unbounded),
                }
            }
            LevelBody::Vertices(p) => Ok(p
                .vertices()
                .iter()
                .max_by(|a, b| a.dot(v).total_cmp(&b.dot(v)))
                .expect("nonempty")
                .clone()),
            LevelBody::Ball { center, radius } => {
                let n = v.norm();
                Ok(if n > 0.0 { center + v * (radius / n) } else { center.clone() })
            }
            LevelBody::Product(ps) => {
                let mut parts = Vec::with_capacity(ps.len());
                let mut start = 0;
                for p in ps {
                    let d = p.dim();
                    parts.push(p.support_point(&vector::block(v, start, d))?);
                    start += d;
                }
                Ok(vector::concat(&parts))
            }
            _ => Err(Error::Unsupported("support point of an implicit level set".into())),
        }
    }

    /// The level set as a body, when it has an explicit, full-dimensional form.
    pub fn to_body(&self) -> Result<Body> {
        if self.empty {
            return Err(Error::EmptyInterior);
        }
        Ok(match &self.body {
            LevelBody::Halfspaces(h) => {
                h.validate()?;
                Body::H(h.clone())
            }
            LevelBody::Vertices(p) => {
                Body::V(VPolytope::new(p.vertices().to_vec())?)
            }
            LevelBody::Ball { center, radius } => Body::ball(center.clone(), *radius)?,
            LevelBody::Schneider { body, lambda } => {
                // K + (λ−1)·½(K − K)
                let c = convex::central_symm(body);
                Body::Sum(vec![body.clone(), c.scaled(lambda - 1.0)?])
            }
            LevelBody::Product(ps) => Body::Product(ps.iter().map(LevelSet::to_body).collect::<Result<_>>()?),
            LevelBody::Implicit { .. } => {
                return Err(Error::Unsupported("implicit level set has no explicit body".into()))
            }
        })
    }

    /// Vertices of a planar level set (empty for empty sets).
    pub fn polygon(&self) -> Option<Vec<P2>> {
        if self.empty || self.dim() != 2 {
            return None;
        }
        match &self.body {
            LevelBody::Halfspaces(h) => h
                .vertices()
                .map(|vs| polygon::convex_hull(&vs.iter().map(|p| [p[0], p[1]]).collect::<Vec<_>>())),
            _ => self.to_body().ok()?.polygon(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub alpha_inf: f64,
    pub measure: f64,
    pub minimizer: Vector,
    pub critical: LevelSet,
    pub critical_dim_estimate: usize,
    pub klee_lhs: f64,
    pub codim: usize,
    /// Extreme points of the critical set found by the rank probe.
    pub critical_points: Vec<Vector>,
}

/// `α_K = inf α(K, ·)` from the program `min s  s.t.  t(K, a_i, x) ≤ s` over
/// facet rows, together with the critical set `K^{α_K}`.
pub fn alpha_inf(k: &Body) -> Result<SymmetryReport> {
    alpha_inf_seeded(k, 0x51)
}

pub fn alpha_inf_seeded(k: &Body, seed: u64) -> Result<SymmetryReport> {
    let c = k.canonical();
    let d = c.dim();
    if let Body::Ball { center, .. } = &c {
        return Ok(SymmetryReport {
            alpha_inf: 0.0,
            measure: 1.0,
            minimizer: center.clone(),
            critical: LevelSet {
                lambda: 0.0,
                body: LevelBody::Ball {
                    center: center.clone(),
                    radius: 0.0,
                },
                empty: false,
            },
            critical_dim_estimate: 0,
            klee_lhs: 1.0,
            codim: d,
            critical_points: vec![center.clone()],
        });
    }
    let h = c.to_hpolytope()?;
    let rows = rows_of(&h, &c)?;
    let mut lp = LinearProgram::new(Sense::Minimize);
    let x = lp.add_vars(d, true);
    let s = lp.add_var(true);
    lp.set_objective(s, 1.0);
    for r in &rows {
        let w = r.width();
        let mut coeffs: Vec<(usize, f64)> = r
            .normal
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(j, a)| (x[j], 2.0 * a / w))
            .collect();
        coeffs.push((s, -1.0));
        lp.add_constraint(coeffs, Relation::Le, (r.h - r.hneg) / w);
    }
    let sol = match lp.solve()? {
        LpOutcome::Optimal(sol) => sol,
        LpOutcome::Unbounded => return Err(Error::Unbounded),
        LpOutcome::Infeasible => return Err(Error::EmptyInterior),
    };
    let alpha_k = sol.value.max(0.0);
    let minimizer = vector::vector(&sol.x[..d]);

    let mut lam = alpha_k;
    let mut critical = level_set(&c, lam)?;
    if critical.empty {
        lam += 1e-9;
        critical = level_set(&c, lam)?;
    }
    if critical.empty {
        return Err(Error::NonConvergence("critical set reported empty".into()));
    }
    critical.lambda = alpha_k;
    let mut rng = vector::rng(seed);
    let mut points = Vec::with_capacity(2 * d + 1);
    for _ in 0..(2 * d + 1) {
        let dir = vector::random_unit(&mut rng, d);
        points.push(critical.support_point(&dir)?);
    }
    let dim_est = vector::affine_rank(&points, 1e-7);
    Ok(SymmetryReport {
        alpha_inf: alpha_k,
        measure: 1.0 - alpha_k,
        minimizer,
        critical,
        critical_dim_estimate: dim_est,
        klee_lhs: (1.0 + alpha_k) / (1.0 - alpha_k),
        codim: d - dim_est,
        critical_points: points,
    })
}

/// Exact centroid for planar polytopes, simplices, balls and products of these.
pub fn centroid(k: &Body) -> Result<Vector> {
    let c = k.canonical();
    match &c {
        Body::Ball { center, .. } => return Ok(center.clone()),
        Body::Product(fs) => {
            let parts = fs.iter().map(centroid).collect::<Result<Vec<_>>>()?;
            return Ok(vector::concat(&parts));
        }
        _ => {}
    }
    let d = c.dim();
    if d == 1 {
        let e = vector::vector(&[1.0]);
        return Ok(vector::vector(&[(c.support(&e)? - c.support(&(-e))?) / 2.0]));
    }
    if d == 2 {
        if let Some(poly) = c.polygon() {
            let p = polygon::centroid(&poly).ok_or_else(|| Error::Degenerate("polygon has no area".into()))?;
            return Ok(vector::vector(&p));
        }
    }
    if let Body::V(p) = &c {
        if p.vertices().len() == d + 1 {
            return Ok(p.vertices().iter().fold(vector::zeros(d), |a, u| a + u) / (d + 1) as f64);
        }
    }
    Err(Error::Unsupported("centroid needs a polygon, a simplex or a product of these".into()))
}

/// Membership in the associated body `C(K, ρ)`: for ρ ≤ 1 the intersection of
/// `x + ρ(K − x)` over boundary points x (vertices suffice, exact); for ρ > 1
/// the union over vertices and `per_edge` points on each edge (an inner
/// approximation). Planar polytopes only.
pub fn hammer_contains(k: &Body, y: &Vector, rho: f64, per_edge: usize, tol: f64) -> Result<(bool, Exactness)> {
    check_dim(y, 2)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument("rho must be positive".into()));
    }
    let poly = k
        .polygon()
        .ok_or_else(|| Error::Unsupported("associated bodies need a planar polytope".into()))?;
    let yy = [y[0], y[1]];
    let pulled = |x: P2| [x[0] + (yy[0] - x[0]) / rho, x[1] + (yy[1] - x[1]) / rho];
    if rho <= 1.0 {
        let inside = poly.iter().all(|x| polygon::contains(&poly, pulled(*x), tol));
        return Ok((inside, Exactness::Exact));
    }
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        for s in 0..=per_edge {
            let t = s as f64 / (per_edge + 1) as f64;
            let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            if polygon::contains(&poly, pulled(x), tol) {
                return Ok((true, Exactness::Exact));
            }
        }
    }
    Ok((false, Exactness::LowerBound))
}

/// `δ(K^λ, λC)` and the reference value `D(K) − w(K)/2` for a planar polytope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetrizationDistance {
    pub lambda: f64,
    pub distance: f64,
    pub bound: f64,
    pub far_radius: f64,
}

pub fn symmetrization_distance(k: &Body, lambda: f64) -> Result<SymmetrizationDistance> {
    let lvl = level_set(k, lambda)?;
    let pl = lvl
        .polygon()
        .or_else(|| {
            // flat or point level sets: use LP extreme points
            if lvl.empty || lvl.dim() != 2 {
                return None;
            }
            let pts: Option<Vec<P2>> = vector::circle_directions(64, 0.0)
                .iter()
                .map(|v| lvl.support_point(v).ok().map(|p| [p[0], p[1]]))
                .collect();
            pts.map(|p| polygon::convex_hull(&p))
        })
        .ok_or_else(|| Error::Unsupported("symmetrization distance needs a nonempty planar level set".into()))?;
    let c = convex::central_symm(k);
    let pc: Vec<P2> = c
        .polygon()
        .ok_or_else(|| Error::Unsupported("symmetrization distance needs a planar polytope".into()))?
        .iter()
        .map(|p| [p[0] * lambda, p[1] * lambda])
        .collect();
    let distance = convex::hausdorff_by_definition(&pl, &pc);
    let far = convex::far_radius(k)?.value;
    let w = convex::global_width(k)?.value;
    Ok(SymmetrizationDistance {
        lambda,
        distance,
        bound: far - w / 2.0,
        far_radius: far,
    })
}
