//! Independent computations of the homothety and chord-ratio functionals,
//! used to cross-check `α(K, x)`.

use serde::Serialize;

use crate::convex::body::{add_combination, Body, HPolytope};
use crate::convex::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::convex::vector::{check_dim, check_direction, Vector};
use crate::convex::{self, Exactness};
use crate::error::{Error, Result};
use crate::gauge::{self, Gauge};

/// Endpoints closer than this do not form a chord.
pub const CHORD_TOL: f64 = 1e-9;

/// `K ∩ {x + t·v}` as a segment `[a, b]` with `‖x − b‖ ≤ ‖x − a‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chord {
    pub a: Vector,
    pub b: Vector,
    pub line_dir: Vector,
}

enum Clip {
    Rows(HPolytope),
    Ball(Vector, f64),
    Lp(Body),
    /// Outer approximation from sampled support values.
    Sampled(Vec<(Vector, f64)>),
}

/// Line clipping against a fixed body, prepared once.
pub struct LineClipper {
    clip: Clip,
    dim: usize,
}

impl LineClipper {
    pub fn new(k: &Body) -> Result<Self> {
        let c = k.canonical();
        let dim = c.dim();
        let clip = match &c {
            Body::Ball { center, radius } => Clip::Ball(center.clone(), *radius),
            b if b.is_polyhedral() => match b.to_hpolytope() {
                Ok(h) => Clip::Rows(h),
                Err(Error::Unsupported(_)) => Clip::Lp(c.clone()),
                Err(e) => return Err(e),
            },
            b => {
                let mut rows = Vec::new();
                for u in convex::sample_directions(dim, 4096, 7) {
                    let h = b.support(&u)?;
                    rows.push((u, h));
                }
                Clip::Sampled(rows)
            }
        };
        Ok(LineClipper { clip, dim })
    }

    /// Parameter interval `{t : x + t v ∈ K}`, or `None` when empty.
    pub fn interval(&self, x: &Vector, v: &Vector) -> Result<Option<(f64, f64)>> {
        check_dim(x, self.dim)?;
        check_direction(v, self.dim)?;
        let from_rows = |rows: &mut dyn Iterator<Item = (f64, f64)>| {
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for (av, slack) in rows {
                if av > 0.0 {
                    hi = hi.min(slack / av);
                } else if av < 0.0 {
                    lo = lo.max(slack / av);
                } else if slack < 0.0 {
                    return None;
                }
            }
            (lo <= hi).then_some((lo, hi))
        };
        Ok(match &self.clip {
            Clip::Rows(h) => from_rows(
                &mut h
                    .normals()
                    .iter()
                    .zip(h.offsets())
                    .map(|(a, b)| (a.dot(v), b - a.dot(x))),
            ),
            Clip::Sampled(rows) => from_rows(&mut rows.iter().map(|(u, h)| (u.dot(v), h - u.dot(x)))),
            Clip::Ball(c, r) => {
                let d = x - c;
                let (qa, qb, qc) = (v.dot(v), d.dot(v), d.dot(&d) - r * r);
                let disc = qb * qb - qa * qc;
                (disc >= 0.0).then(|| {
                    let s = disc.sqrt();
                    ((-qb - s) / qa, (-qb + s) / qa)
                })
            }
            Clip::Lp(body) => {
                let mut ends = [0.0; 2];
                for (slot, sense) in [Sense::Minimize, Sense::Maximize].into_iter().enumerate() {
                    let mut lp = LinearProgram::new(sense);
                    let y = body.embed(&mut lp).expect("polyhedral");
                    let t = lp.add_var(true);
                    lp.set_objective(t, 1.0);
                    let te = crate::convex::body::AffineExpr::var(t);
                    for j in 0..self.dim {
                        add_combination(&mut lp, &[(1.0, &y[j]), (-v[j], &te)], Relation::Eq, x[j]);
                    }
                    match lp.solve()? {
                        LpOutcome::Optimal(s) => ends[slot] = s.value,
                        LpOutcome::Infeasible => return Ok(None),
                        LpOutcome::Unbounded => return Err(Error::Unbounded),
                    }
                }
                Some((ends[0], ends[1]))
            }
        })
    }

    pub fn chord(&self, x: &Vector, v: &Vector) -> Result<Option<Chord>> {
        let Some((lo, hi)) = self.interval(x, v)? else {
            return Ok(None);
        };
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Unbounded);
        }
        if (hi - lo) * v.norm() <= CHORD_TOL {
            return Ok(None);
        }
        let p = x + v * lo;
        let q = x + v * hi;
        // b is the endpoint nearer to x; ties keep the input orientation
        let (a, b) = if (x - &q).norm() <= (x - &p).norm() { (p, q) } else { (q, p) };
        Ok(Some(Chord {
            a,
            b,
            line_dir: v.clone(),
        }))
    }
}

pub fn chord(k: &Body, x: &Vector, v: &Vector) -> Result<Option<Chord>> {
    LineClipper::new(k)?.chord(x, v)
}

/// `β(K, x) = sup{λ ≥ 0 : x − λ(K − x) ⊆ K}` for `x ∈ K`.
pub fn beta(k: &Body, x: &Vector) -> Result<f64> {
    convex::check_point(k, x)?;
    require_member(k, x)?;
    let c = k.canonical();
    if let Body::Ball { center, radius } = &c {
        let d = (x - center).norm();
        return Ok(((radius - d) / (radius + d)).clamp(0.0, 1.0));
    }
    if let (Some(vs), Ok(h)) = (c.vertices(), c.to_hpolytope()) {
        let mut best = f64::INFINITY;
        for (a, b) in h.normals().iter().zip(h.offsets()) {
            let ax = a.dot(x);
            let slack = (b - ax).max(0.0);
            for u in &vs {
                let den = ax - a.dot(u);
                if den > 1e-14 * (1.0 + a.norm() * (u - x).norm()) {
                    best = best.min(slack / den);
                }
            }
        }
        return Ok(best.clamp(0.0, 1.0));
    }
    beta_bisection(k, x)
}

/// β by bisection on the containment `x − λ(u − x) ∈ K` over vertices
/// (polytopes) or sampled boundary points (other bodies).
pub fn beta_bisection(k: &Body, x: &Vector) -> Result<f64> {
    require_member(k, x)?;
    let pts = match k.vertices() {
        Some(vs) => vs,
        None => convex::sample_points(k, 4096, 3)?,
    };
    let fits = |lam: f64| -> Result<bool> {
        for u in &pts {
            if !k.contains(&(x - (u - x) * lam), 1e-12)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if fits(1.0)? {
        return Ok(1.0);
    }
    for _ in 0..gauge::BISECTION_STEPS {
        if hi - lo <= gauge::BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if fits(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn require_member(k: &Body, x: &Vector) -> Result<()> {
    if k.contains(x, 1e-12)? {
        Ok(())
    } else {
        Err(Error::InvalidArgument("point must lie in the body".into()))
    }
}

/// `ρ(K, x) = sup{λ : K ∩ (x + λ(K − x)) = ∅}` for `x ∉ K`, by bisection on the
/// feasibility of `y − λz = (1 − λ)x` with `y, z ∈ K`.
pub fn rho(k: &Body, x: &Vector) -> Result<f64> {
    convex::check_point(k, x)?;
    if k.contains(x, 1e-12)? {
        return Err(Error::InvalidArgument("point must lie outside the body".into()));
    }
    let c = k.canonical();
    if !c.is_polyhedral() {
        return Err(Error::Unsupported("disjointness program needs a polyhedral body".into()));
    }
    let meets = |lam: f64| -> Result<bool> {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let y = c.embed(&mut lp).expect("polyhedral");
        let z = c.embed(&mut lp).expect("polyhedral");
        for j in 0..c.dim() {
            add_combination(&mut lp, &[(1.0, &y[j]), (-lam, &z[j])], Relation::Eq, (1.0 - lam) * x[j]);
        }
        Ok(lp.solve()?.is_feasible())
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..gauge::BISECTION_STEPS {
        if hi - lo <= gauge::BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A sampled extremum with the direction in which it can err.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    /// `approximate_upper_bound` for sampled infima, `approximate_lower_bound` for suprema.
    pub side: Exactness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub inside: bool,
    pub sigma: Option<Bound>,
    pub omega: Option<Bound>,
    pub nu: Option<Bound>,
    pub mu: Option<Bound>,
    pub gamma_sq: Option<Bound>,
    pub lines_tried: usize,
    pub chords_used: usize,
    /// max over chords of `|γ²_c − 4ω_c(1 − ω_c)|`
    pub residual_gamma_omega: f64,
    /// max over chords of `|ν_c − (1 − σ_c)/(1 + σ_c)|`
    pub residual_nu_sigma: f64,
}

/// Chord-ratio functionals over the lines through x toward each vertex, along
/// each facet normal, and along `n_lines` seeded random directions.
pub fn ratio_functionals(k: &Body, x: &Vector, n_lines: usize, seed: u64) -> Result<RatioReport> {
    convex::check_point(k, x)?;
    if n_lines == 0 {
        return Err(Error::InvalidArgument("n_lines must be at least 1".into()));
    }
    let d = k.dim();
    let inside = k.contains(x, 1e-12)?;
    let clip = LineClipper::new(k)?;
    let mut dirs: Vec<Vector> = Vec::new();
    if let Some(vs) = k.vertices() {
        dirs.extend(vs.iter().map(|u| u - x).filter(|w| w.norm() > 1e-12));
    }
    if let Ok(h) = k.to_hpolytope() {
        dirs.extend(h.normals().iter().cloned());
    }
    dirs.extend(convex::sample_directions(d, n_lines, seed));

    let mut sigma = f64::INFINITY;
    let mut omega = f64::NEG_INFINITY;
    let mut nu = f64::NEG_INFINITY;
    let mut mu = f64::INFINITY;
    let mut gamma = f64::INFINITY;
    let mut used = 0;
    let mut res_g = 0.0f64;
    let mut res_n = 0.0f64;
    for v in &dirs {
        let Some(c) = clip.chord(x, v)? else { continue };
        used += 1;
        let xa = (x - &c.a).norm();
        let xb = (x - &c.b).norm();
        let ab = (&c.a - &c.b).norm();
        let mid = (x * 2.0 - &c.a - &c.b).norm() / ab;
        let s = xb / xa;
        sigma = sigma.min(s);
        if inside {
            let w = xa / ab;
            let g = xb * xa / (0.25 * ab * ab);
            omega = omega.max(w);
            nu = nu.max(mid);
            gamma = gamma.min(g);
            res_g = res_g.max((g - 4.0 * w * (1.0 - w)).abs());
            res_n = res_n.max((mid - (1.0 - s) / (1.0 + s)).abs());
        } else {
            mu = mu.min(mid);
        }
    }
    if used == 0 {
        return Err(Error::Degenerate("no line through the point meets the body in a segment".into()));
    }
    let inf = |v: f64| Some(Bound { value: v, side: Exactness::UpperBound });
    let sup = |v: f64| Some(Bound { value: v, side: Exactness::LowerBound });
    Ok(RatioReport {
        inside,
        sigma: inf(sigma),
        omega: if inside { sup(omega) } else { None },
        nu: if inside { sup(nu) } else { None },
        mu: if inside { None } else { inf(mu) },
        gamma_sq: if inside { inf(gamma) } else { None },
        lines_tried: dirs.len(),
        chords_used: used,
        residual_gamma_omega: res_g,
        residual_nu_sigma: res_n,
    })
}

/// Minkowski's functional extended outside K: `|1 − α| / (1 + α)`.
pub fn minkowski_phi(k: &Body, x: &Vector) -> Result<f64> {
    let a = gauge::alpha(k, x)?.alpha;
    Ok((1.0 - a).abs() / (1.0 + a))
}

/// `max t(K, v, x)` over `n_dirs` seeded directions and the facet normals of K
/// and −K; a lower bound on `α(K, x)` with no refinement.
pub fn brute_force_alpha(k: &Body, x: &Vector, n_dirs: usize, seed: u64) -> Result<f64> {
    convex::check_point(k, x)?;
    let mut dirs = if n_dirs > 0 {
        convex::sample_directions(k.dim(), n_dirs, seed)
    } else {
        Vec::new()
    };
    if let Ok(h) = k.canonical().to_hpolytope() {
        for a in h.normals() {
            dirs.push(a.clone());
            dirs.push(-a);
        }
    }
    if dirs.is_empty() {
        return Err(Error::InvalidArgument("no directions to sample".into()));
    }
    let mut best = f64::NEG_INFINITY;
    for v in &dirs {
        best = best.max(gauge::t_func(k, v, x)?);
    }
    Ok(best)
}

/// Outcome of the identity suite on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub alpha: f64,
    pub brute_force: f64,
    pub from_beta: Option<f64>,
    pub from_rho: Option<f64>,
    pub from_sigma: f64,
    pub from_nu: Option<f64>,
    pub from_omega: Option<f64>,
    pub from_gamma: Option<f64>,
    pub from_mu: Option<f64>,
    pub ratios: RatioReport,
}

/// Every equivalent form of `α(K, x)` evaluated on one instance.
pub fn identity_check(k: &Body, x: &Vector, n_lines: usize, seed: u64) -> Result<IdentityCheck> {
    let g = Gauge::new(k)?;
    let alpha = g.alpha(x)?.alpha;
    let ratios = ratio_functionals(k, x, n_lines, seed)?;
    let inside = ratios.inside;
    let s = ratios.sigma.map(|b| b.value).unwrap_or(f64::NAN);
    let from_beta = if inside {
        let b = beta(k, x)?;
        Some((1.0 - b) / (1.0 + b))
    } else {
        None
    };
    let from_rho = if inside || !k.is_polyhedral() {
        None
    } else {
        let r = rho(k, x)?;
        Some((1.0 + r) / (1.0 - r))
    };
    Ok(IdentityCheck {
        alpha,
        brute_force: brute_force_alpha(k, x, 4096, seed)?,
        from_beta,
        from_rho,
        from_sigma: if inside { (1.0 - s) / (1.0 + s) } else { (1.0 + s) / (1.0 - s) },
        from_nu: ratios.nu.map(|b| b.value),
        from_omega: ratios.omega.map(|b| 2.0 * b.value - 1.0),
        from_gamma: ratios.gamma_sq.map(|b| (1.0 - b.value).max(0.0).sqrt()),
        from_mu: ratios.mu.map(|b| b.value),
        ratios,
    })
}
