use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;

use super::lp::{LinearProgram, LpOutcome, Relation, Sense};
use super::polygon::{self, P2};
use super::vector::{self, check_dim, check_direction, Vector};
use crate::error::{Error, Result};

/// Relative size below which an inscribed radius counts as zero.
const INTERIOR_TOL: f64 = 1e-10;

fn check_rows(normals: &[Vector], offsets: &[f64]) -> Result<usize> {
    if normals.is_empty() {
        return Err(Error::InvalidArgument("polytope needs at least one row".into()));
    }
    if normals.len() != offsets.len() {
        return Err(Error::DimensionMismatch {
            expected: normals.len(),
            got: offsets.len(),
        });
    }
    let d = normals[0].len();
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    for (a, b) in normals.iter().zip(offsets) {
        check_dim(a, d)?;
        if !b.is_finite() {
            return Err(Error::NonFinite);
        }
        if a.iter().all(|c| *c == 0.0) {
            return Err(Error::Degenerate("zero row in constraint matrix".into()));
        }
    }
    Ok(d)
}

/// `{x : ⟨a_i, x⟩ ≤ b_i}`. Rows keep the scale they were given with.
#[derive(Clone)]
pub struct HPolytope {
    normals: Vec<Vector>,
    offsets: Vec<f64>,
    dim: usize,
    vertices: OnceLock<Option<Vec<Vector>>>,
    row_support: OnceLock<Vec<(f64, f64)>>,
    center: OnceLock<Option<(Vector, f64)>>,
}

impl fmt::Debug for HPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HPolytope")
            .field("dim", &self.dim)
            .field("normals", &self.normals.iter().map(|a| a.as_slice().to_vec()).collect::<Vec<_>>())
            .field("offsets", &self.offsets)
            .finish()
    }
}

impl HPolytope {
    /// Validated constructor: bounded, with nonempty interior.
    pub fn new(normals: Vec<Vector>, offsets: Vec<f64>) -> Result<Self> {
        let p = Self::unchecked(normals, offsets)?;
        p.validate()?;
        Ok(p)
    }

    /// Shape checks only. Used for level sets, which may be empty or flat.
    pub fn unchecked(normals: Vec<Vector>, offsets: Vec<f64>) -> Result<Self> {
        let dim = check_rows(&normals, &offsets)?;
        Ok(HPolytope {
            normals,
            offsets,
            dim,
            vertices: OnceLock::new(),
            row_support: OnceLock::new(),
            center: OnceLock::new(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], offsets: &[f64]) -> Result<Self> {
        Self::new(rows.iter().map(|r| vector::vector(r)).collect(), offsets.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn num_rows(&self) -> usize {
        self.normals.len()
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.dim {
            for sign in [1.0, -1.0] {
                let e = vector::unit(self.dim, i) * sign;
                match self.lp_max(&e)? {
                    LpOutcome::Unbounded => return Err(Error::Unbounded),
                    LpOutcome::Infeasible => return Err(Error::EmptyInterior),
                    LpOutcome::Optimal(_) => {}
                }
            }
        }
        match self.chebyshev_center()? {
            Some((_, r)) if r > INTERIOR_TOL * self.scale() => Ok(()),
            _ => Err(Error::EmptyInterior),
        }
    }

    fn scale(&self) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| b.abs() / a.norm())
            .fold(1e-12, f64::max)
    }

    fn lp_max(&self, v: &Vector) -> Result<LpOutcome> {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_vars(self.dim, true);
        for (j, &c) in v.iter().enumerate() {
            lp.set_objective(x[j], c);
        }
        self.add_rows(&mut lp, &x);
        Ok(lp.solve()?)
    }

    /// Add `A y ≤ b` for the given (free) variable indices.
    pub fn add_rows(&self, lp: &mut LinearProgram, vars: &[usize]) {
        for (a, &b) in self.normals.iter().zip(&self.offsets) {
            let coeffs = a
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(j, &c)| (vars[j], c))
                .collect();
            lp.add_constraint(coeffs, Relation::Le, b);
        }
    }

    /// Center and radius of the largest inscribed ball. The radius is negative
    /// when the system is infeasible.
    pub fn chebyshev_center(&self) -> Result<Option<(Vector, f64)>> {
        if let Some(c) = self.center.get() {
            return Ok(c.clone());
        }
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_vars(self.dim, true);
        let r = lp.add_var(true);
        lp.set_objective(r, 1.0);
        for (a, &b) in self.normals.iter().zip(&self.offsets) {
            let mut coeffs: Vec<(usize, f64)> = a
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(j, &c)| (x[j], c))
                .collect();
            coeffs.push((r, a.norm()));
            lp.add_constraint(coeffs, Relation::Le, b);
        }
        let found = match lp.solve()? {
            LpOutcome::Optimal(s) => Some((vector::vector(&s.x[..self.dim]), s.x[self.dim])),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => return Err(Error::Unbounded),
        };
        let _ = self.center.set(found.clone());
        Ok(found)
    }

    /// Vertex list for d ≤ 2 when the interior is nonempty.
    pub fn vertices(&self) -> Option<&[Vector]> {
        self.vertices
            .get_or_init(|| self.compute_vertices())
            .as_deref()
    }

    fn compute_vertices(&self) -> Option<Vec<Vector>> {
        match self.dim {
            1 => {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for (a, &b) in self.normals.iter().zip(&self.offsets) {
                    if a[0] > 0.0 {
                        hi = hi.min(b / a[0]);
                    } else {
                        lo = lo.max(b / a[0]);
                    }
                }
                if lo.is_finite() && hi.is_finite() && hi - lo > INTERIOR_TOL * (1.0 + hi.abs().max(lo.abs())) {
                    Some(vec![vector::vector(&[lo]), vector::vector(&[hi])])
                } else {
                    None
                }
            }
            2 => {
                let (c, r) = self.chebyshev_center().ok()??;
                if r <= INTERIOR_TOL * self.scale() {
                    return None;
                }
                let rows: Vec<(P2, f64)> = self
                    .normals
                    .iter()
                    .zip(&self.offsets)
                    .map(|(a, &b)| ([a[0], a[1]], b))
                    .collect();
                let verts = polygon::halfplane_vertices(&rows, [c[0], c[1]])?;
                Some(verts.iter().map(|p| vector::vector(p)).collect())
            }
            _ => None,
        }
    }

    pub fn support(&self, v: &Vector) -> Result<f64> {
        check_direction(v, self.dim)?;
        self.support_unchecked(v)
    }

    fn support_unchecked(&self, v: &Vector) -> Result<f64> {
        if let Some(vs) = self.vertices() {
            return Ok(vs.iter().map(|u| u.dot(v)).fold(f64::NEG_INFINITY, f64::max));
        }
        match self.lp_max(v)? {
            LpOutcome::Optimal(s) => Ok(s.value),
            LpOutcome::Unbounded => Err(Error::Unbounded),
            LpOutcome::Infeasible => Err(Error::EmptyInterior),
        }
    }

    /// `(h(K, a_i), h(K, −a_i))` for every row.
    pub fn row_supports(&self) -> Result<&[(f64, f64)]> {
        if let Some(r) = self.row_support.get() {
            return Ok(r);
        }
        let mut out = Vec::with_capacity(self.num_rows());
        for a in &self.normals {
            out.push((self.support_unchecked(a)?, self.support_unchecked(&(-a))?));
        }
        let _ = self.row_support.set(out);
        Ok(self.row_support.get().expect("just set"))
    }

    /// Largest row violation, each row scaled to a unit normal.
    pub fn violation(&self, x: &Vector) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| (a.dot(x) - b) / a.norm())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.violation(x) <= tol
    }

    /// Feasibility of the system (allowing flat or single-point solutions).
    pub fn is_feasible(&self) -> Result<bool> {
        Ok(self.lp_max(&vector::zeros(self.dim))?.is_feasible())
    }

    fn mapped(&self, s: f64, sigma: f64, o: &Vector) -> HPolytope {
        let normals: Vec<Vector> = self.normals.iter().map(|a| a * sigma).collect();
        let offsets = self
            .offsets
            .iter()
            .zip(&normals)
            .map(|(b, a)| s * b + a.dot(o))
            .collect();
        HPolytope::unchecked(normals, offsets).expect("mapping keeps shape")
    }
}

/// `conv{u_1, …, u_n}`.
#[derive(Clone)]
pub struct VPolytope {
    vertices: Vec<Vector>,
    dim: usize,
    hrep: OnceLock<Option<HPolytope>>,
}

impl fmt::Debug for VPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VPolytope")
            .field("dim", &self.dim)
            .field("vertices", &self.vertices.iter().map(|u| u.as_slice().to_vec()).collect::<Vec<_>>())
            .finish()
    }
}

fn dedup_points(points: Vec<Vector>) -> Vec<Vector> {
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |m, c| m.max(c.abs()));
    let tol = 1e-12 * scale;
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| (q - &p).amax() <= tol) {
            out.push(p);
        }
    }
    out
}

impl VPolytope {
    /// Validated constructor: full-dimensional. Planar inputs are reduced to
    /// their hull vertices.
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        let p = Self::from_points(vertices)?;
        if p.vertices.len() < p.dim + 1 || vector::affine_rank(&p.vertices, 1e-12 * p.extent()) < p.dim {
            return Err(Error::Degenerate("vertices do not span the ambient space".into()));
        }
        Ok(p)
    }

    /// Shape checks only; lower-dimensional point sets are accepted.
    pub fn from_points(points: Vec<Vector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("polytope needs at least one vertex".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        for p in &points {
            check_dim(p, dim)?;
        }
        let mut pts = dedup_points(points);
        if dim == 1 {
            let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            pts = dedup_points(vec![vector::vector(&[lo]), vector::vector(&[hi])]);
        } else if dim == 2 {
            let p2: Vec<P2> = pts.iter().map(|p| [p[0], p[1]]).collect();
            pts = polygon::convex_hull(&p2).iter().map(|p| vector::vector(p)).collect();
        }
        Ok(VPolytope {
            vertices: pts,
            dim,
            hrep: OnceLock::new(),
        })
    }

    pub fn from_coords(coords: &[Vec<f64>]) -> Result<Self> {
        Self::new(coords.iter().map(|c| vector::vector(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    fn extent(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|p| p.iter())
            .fold(1.0f64, |m, c| m.max(c.abs()))
    }

    pub fn support(&self, v: &Vector) -> Result<f64> {
        check_direction(v, self.dim)?;
        Ok(self.support_unchecked(v))
    }

    fn support_unchecked(&self, v: &Vector) -> f64 {
        self.vertices.iter().map(|u| u.dot(v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Planar polygon in counter-clockwise order (d = 2 only).
    pub fn polygon(&self) -> Option<Vec<P2>> {
        (self.dim == 2).then(|| self.vertices.iter().map(|p| [p[0], p[1]]).collect())
    }

    /// Facet description; available for d ≤ 2 and for simplices.
    pub fn hpolytope(&self) -> Result<&HPolytope> {
        self.hrep
            .get_or_init(|| self.compute_hrep())
            .as_ref()
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "facet description of a {}-vertex polytope in dimension {}",
                    self.vertices.len(),
                    self.dim
                ))
            })
    }

    fn compute_hrep(&self) -> Option<HPolytope> {
        let n = self.vertices.len();
        let d = self.dim;
        if n < d + 1 {
            return None;
        }
        let (normals, offsets): (Vec<Vector>, Vec<f64>) = match d {
            1 => {
                let (lo, hi) = (self.vertices[0][0], self.vertices[1][0]);
                (
                    vec![vector::vector(&[1.0]), vector::vector(&[-1.0])],
                    vec![hi, -lo],
                )
            }
            2 => {
                let poly = self.polygon()?;
                polygon::edge_halfplanes(&poly)
                    .into_iter()
                    .map(|(a, c)| (vector::vector(&a), c))
                    .unzip()
            }
            _ if n == d + 1 => {
                let u0 = &self.vertices[0];
                let m = DMatrix::from_fn(d, d, |i, j| self.vertices[j + 1][i] - u0[i]);
                let minv = m.try_inverse()?;
                let mut normals = Vec::with_capacity(d + 1);
                let mut offsets = Vec::with_capacity(d + 1);
                let mut sum = vector::zeros(d);
                for j in 0..d {
                    let row: Vector = minv.row(j).transpose();
                    sum += &row;
                    offsets.push(-row.dot(u0));
                    normals.push(-row);
                }
                offsets.push(1.0 + sum.dot(u0));
                normals.push(sum);
                (normals, offsets)
            }
            _ => return None,
        };
        HPolytope::unchecked(normals, offsets).ok()
    }

    fn mapped(&self, s: f64, sigma: f64, o: &Vector) -> VPolytope {
        let pts = self.vertices.iter().map(|u| u * (s * sigma) + o).collect();
        VPolytope::from_points(pts).expect("mapping keeps shape")
    }
}

pub type SupportFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

/// A body known only through its support function, with a ball sandwich
/// `B(c, r) ⊆ K ⊆ B(c, R)`.
#[derive(Clone)]
pub struct SupportOracle {
    h: SupportFn,
    center: Vector,
    inner_radius: f64,
    outer_radius: f64,
    origin: Option<String>,
}

impl fmt::Debug for SupportOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SupportOracle")
            .field("center", &self.center.as_slice())
            .field("inner_radius", &self.inner_radius)
            .field("outer_radius", &self.outer_radius)
            .field("origin", &self.origin)
            .finish()
    }
}

impl SupportOracle {
    pub fn new(h: SupportFn, center: Vector, inner_radius: f64, outer_radius: f64) -> Result<Self> {
        vector::check_finite(&center)?;
        if center.is_empty() {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if !(inner_radius > 0.0 && inner_radius.is_finite()) {
            return Err(Error::InvalidArgument("inner radius must be positive".into()));
        }
        if !(outer_radius >= inner_radius && outer_radius.is_finite()) {
            return Err(Error::InvalidArgument("outer radius must be at least the inner radius".into()));
        }
        Ok(SupportOracle {
            h,
            center,
            inner_radius,
            outer_radius,
            origin: None,
        })
    }

    /// Attach the body document this oracle was built from, for serialization.
    pub fn with_origin(mut self, spec: String) -> Self {
        self.origin = Some(spec);
        self
    }

    pub fn origin(&self) -> Option<&str> {
        self.origin.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn eval(&self, v: &Vector) -> f64 {
        (self.h)(v)
    }

    /// Largest violation of homogeneity, subadditivity and the ball sandwich
    /// over `count` seeded direction pairs, relative to the outer radius.
    pub fn sampled_defect(&self, count: usize, seed: u64) -> f64 {
        let d = self.dim();
        let mut rng = vector::rng(seed);
        let mut worst = 0.0f64;
        let scale = self.outer_radius + self.center.norm();
        for _ in 0..count {
            let u = vector::random_unit(&mut rng, d);
            let v = vector::random_unit(&mut rng, d);
            let hu = self.eval(&u);
            let hv = self.eval(&v);
            worst = worst.max((self.eval(&(&u * 2.5)) - 2.5 * hu).abs());
            worst = worst.max(self.eval(&(&u + &v)) - hu - hv);
            let c = u.dot(&self.center);
            worst = worst.max(c + self.inner_radius - hu);
            worst = worst.max(hu - c - self.outer_radius);
        }
        worst / scale
    }
}

/// An affine expression `Σ c_j y_j + k` over linear-program variables.
#[derive(Debug, Clone, Default)]
pub struct AffineExpr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl AffineExpr {
    pub fn var(j: usize) -> Self {
        AffineExpr {
            terms: vec![(j, 1.0)],
            constant: 0.0,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        AffineExpr {
            terms: self.terms.iter().map(|&(j, c)| (j, c * s)).collect(),
            constant: self.constant * s,
        }
    }

    pub fn plus(&self, other: &AffineExpr) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        AffineExpr {
            terms,
            constant: self.constant + other.constant,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(j, c)| c * x[j]).sum::<f64>()
    }
}

/// Add `Σ_k w_k e_k (rel) rhs` to an LP, folding the expression constants.
pub fn add_combination(
    lp: &mut LinearProgram,
    parts: &[(f64, &AffineExpr)],
    relation: Relation,
    rhs: f64,
) {
    let mut coeffs = Vec::new();
    let mut constant = 0.0;
    for (w, e) in parts {
        constant += w * e.constant;
        coeffs.extend(e.terms.iter().map(|&(j, c)| (j, c * w)));
    }
    lp.add_constraint(coeffs, relation, rhs - constant);
}

/// A convex body in R^d.
#[derive(Debug, Clone)]
pub enum Body {
    H(HPolytope),
    V(VPolytope),
    Oracle(SupportOracle),
    Ball { center: Vector, radius: f64 },
    Product(Vec<Body>),
    Sum(Vec<Body>),
    Scaled(Box<Body>, f64),
    Translated(Box<Body>, Vector),
    Reflected(Box<Body>),
}

impl From<HPolytope> for Body {
    fn from(p: HPolytope) -> Self {
        Body::H(p)
    }
}

impl From<VPolytope> for Body {
    fn from(p: VPolytope) -> Self {
        Body::V(p)
    }
}

impl From<SupportOracle> for Body {
    fn from(p: SupportOracle) -> Self {
        Body::Oracle(p)
    }
}

impl Body {
    pub fn hpolytope(rows: &[Vec<f64>], offsets: &[f64]) -> Result<Body> {
        Ok(Body::H(HPolytope::from_rows(rows, offsets)?))
    }

    pub fn vpolytope(vertices: &[Vec<f64>]) -> Result<Body> {
        Ok(Body::V(VPolytope::from_coords(vertices)?))
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Body> {
        vector::check_finite(&center)?;
        if center.is_empty() {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument("radius must be positive".into()));
        }
        Ok(Body::Ball { center, radius })
    }

    pub fn product(factors: Vec<Body>) -> Result<Body> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("product needs at least one factor".into()));
        }
        Ok(Body::Product(factors))
    }

    pub fn sum(terms: Vec<Body>) -> Result<Body> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("sum needs at least one term".into()));
        }
        let d = terms[0].dim();
        for t in &terms {
            if t.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: t.dim(),
                });
            }
        }
        Ok(Body::Sum(terms))
    }

    pub fn scaled(self, factor: f64) -> Result<Body> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        Ok(Body::Scaled(Box::new(self), factor))
    }

    pub fn translated(self, offset: Vector) -> Result<Body> {
        check_dim(&offset, self.dim())?;
        Ok(Body::Translated(Box::new(self), offset))
    }

    pub fn reflected(self) -> Body {
        Body::Reflected(Box::new(self))
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::H(p) => p.dim(),
            Body::V(p) => p.dim(),
            Body::Oracle(o) => o.dim(),
            Body::Ball { center, .. } => center.len(),
            Body::Product(fs) => fs.iter().map(Body::dim).sum(),
            Body::Sum(ts) => ts[0].dim(),
            Body::Scaled(b, _) | Body::Translated(b, _) | Body::Reflected(b) => b.dim(),
        }
    }

    /// Coordinate ranges `(start, len)` of product factors.
    pub fn blocks(factors: &[Body]) -> Vec<(usize, usize)> {
        let mut start = 0;
        factors
            .iter()
            .map(|f| {
                let r = (start, f.dim());
                start += f.dim();
                r
            })
            .collect()
    }

    pub fn support(&self, v: &Vector) -> Result<f64> {
        check_direction(v, self.dim())?;
        self.support_any(v)
    }

    /// Support allowing the zero direction (value 0).
    pub(crate) fn support_any(&self, v: &Vector) -> Result<f64> {
        if v.iter().all(|c| *c == 0.0) {
            return Ok(0.0);
        }
        Ok(match self {
            Body::H(p) => p.support_unchecked(v)?,
            Body::V(p) => p.support_unchecked(v),
            Body::Oracle(o) => o.eval(v),
            Body::Ball { center, radius } => v.dot(center) + radius * v.norm(),
            Body::Product(fs) => {
                let mut s = 0.0;
                for (f, (start, len)) in fs.iter().zip(Body::blocks(fs)) {
                    s += f.support_any(&vector::block(v, start, len))?;
                }
                s
            }
            Body::Sum(ts) => {
                let mut s = 0.0;
                for t in ts {
                    s += t.support_any(v)?;
                }
                s
            }
            Body::Scaled(b, f) => f * b.support_any(v)?,
            Body::Translated(b, o) => b.support_any(v)? + v.dot(o),
            Body::Reflected(b) => b.support_any(&(-v))?,
        })
    }

    /// Equivalent body with scalings, translations and reflections pushed
    /// into the leaves. Only oracle leaves keep wrappers.
    pub fn canonical(&self) -> Body {
        self.mapped(1.0, 1.0, &vector::zeros(self.dim()))
    }

    // Image of the body under x ↦ s·σ·x + o with s > 0, σ = ±1.
    fn mapped(&self, s: f64, sigma: f64, o: &Vector) -> Body {
        let identity = s == 1.0 && sigma == 1.0 && o.iter().all(|c| *c == 0.0);
        match self {
            Body::H(_) | Body::V(_) | Body::Ball { .. } | Body::Oracle(_) if identity => self.clone(),
            Body::H(p) => Body::H(p.mapped(s, sigma, o)),
            Body::V(p) => Body::V(p.mapped(s, sigma, o)),
            Body::Ball { center, radius } => Body::Ball {
                center: center * (s * sigma) + o,
                radius: radius * s,
            },
            Body::Oracle(_) => {
                let mut b = self.clone();
                if sigma < 0.0 {
                    b = Body::Reflected(Box::new(b));
                }
                if s != 1.0 {
                    b = Body::Scaled(Box::new(b), s);
                }
                if o.iter().any(|c| *c != 0.0) {
                    b = Body::Translated(Box::new(b), o.clone());
                }
                b
            }
            Body::Product(fs) => Body::Product(
                fs.iter()
                    .zip(Body::blocks(fs))
                    .map(|(f, (start, len))| f.mapped(s, sigma, &vector::block(o, start, len)))
                    .collect(),
            ),
            Body::Sum(ts) => {
                let zero = vector::zeros(o.len());
                Body::Sum(
                    ts.iter()
                        .enumerate()
                        .map(|(i, t)| t.mapped(s, sigma, if i == 0 { o } else { &zero }))
                        .collect(),
                )
            }
            Body::Scaled(b, f) => b.mapped(s * f, sigma, o),
            Body::Translated(b, t) => b.mapped(s, sigma, &(o + t * (s * sigma))),
            Body::Reflected(b) => b.mapped(s, -sigma, o),
        }
    }

    /// True when the body is a finite combination of polytopes.
    pub fn is_polyhedral(&self) -> bool {
        match self {
            Body::H(_) | Body::V(_) => true,
            Body::Oracle(_) | Body::Ball { .. } => false,
            Body::Product(fs) => fs.iter().all(Body::is_polyhedral),
            Body::Sum(ts) => ts.iter().all(Body::is_polyhedral),
            Body::Scaled(b, _) | Body::Translated(b, _) | Body::Reflected(b) => b.is_polyhedral(),
        }
    }

    /// Vertex candidates (a superset of the extreme points) when cheaply
    /// available: V-polytopes, planar H-polytopes, and products and sums of these.
    pub fn vertices(&self) -> Option<Vec<Vector>> {
        const CAP: usize = 250_000;
        match self.canonical() {
            Body::H(p) => p.vertices().map(<[Vector]>::to_vec),
            Body::V(p) => Some(p.vertices().to_vec()),
            Body::Product(fs) => {
                let mut acc: Vec<Vector> = vec![vector::zeros(0)];
                for f in &fs {
                    let vs = f.vertices()?;
                    if acc.len() * vs.len() > CAP {
                        return None;
                    }
                    acc = acc
                        .iter()
                        .flat_map(|a| vs.iter().map(move |u| vector::concat(&[a.clone(), u.clone()])))
                        .collect();
                }
                Some(acc)
            }
            Body::Sum(ts) => {
                let mut acc: Vec<Vector> = vec![vector::zeros(ts[0].dim())];
                for t in &ts {
                    let vs = t.vertices()?;
                    if acc.len() * vs.len() > CAP {
                        return None;
                    }
                    let sums: Vec<Vector> = acc.iter().flat_map(|a| vs.iter().map(move |u| a + u)).collect();
                    acc = prune(sums);
                }
                Some(acc)
            }
            _ => None,
        }
    }

    /// The body as a V-polytope, when vertices are available.
    pub fn to_vpolytope(&self) -> Result<VPolytope> {
        let vs = self
            .vertices()
            .ok_or_else(|| Error::Unsupported("vertex description not available".into()))?;
        VPolytope::from_points(vs)
    }

    /// Counter-clockwise polygon for planar polyhedral bodies.
    pub fn polygon(&self) -> Option<Vec<P2>> {
        if self.dim() != 2 {
            return None;
        }
        let vs = self.vertices()?;
        let pts: Vec<P2> = vs.iter().map(|p| [p[0], p[1]]).collect();
        Some(polygon::convex_hull(&pts))
    }

    /// Facet description: H-polytopes, V-polytopes in d ≤ 2 or simplices,
    /// products of these, and planar sums.
    pub fn to_hpolytope(&self) -> Result<HPolytope> {
        match self.canonical() {
            Body::H(p) => Ok(p),
            Body::V(p) => p.hpolytope().cloned(),
            Body::Product(fs) => {
                let d: usize = fs.iter().map(Body::dim).sum();
                let mut normals = Vec::new();
                let mut offsets = Vec::new();
                for (f, (start, len)) in fs.iter().zip(Body::blocks(&fs)) {
                    let h = f.to_hpolytope()?;
                    for (a, b) in h.normals().iter().zip(h.offsets()) {
                        let mut row = vector::zeros(d);
                        row.rows_mut(start, len).copy_from(a);
                        normals.push(row);
                        offsets.push(*b);
                    }
                }
                HPolytope::unchecked(normals, offsets)
            }
            b @ Body::Sum(_) if b.dim() <= 2 => {
                let v = VPolytope::from_points(
                    b.vertices()
                        .ok_or_else(|| Error::Unsupported("facet description of this sum".into()))?,
                )?;
                v.hpolytope().cloned()
            }
            _ => Err(Error::Unsupported("facet description not available for this body".into())),
        }
    }

    /// Embed `y ∈ K` into a linear program; returns one affine expression per
    /// coordinate of `y`. `None` for bodies without a polyhedral description.
    pub fn embed(&self, lp: &mut LinearProgram) -> Option<Vec<AffineExpr>> {
        let c = self.canonical();
        if !c.is_polyhedral() {
            return None;
        }
        Some(c.embed_canonical(lp))
    }

    fn embed_canonical(&self, lp: &mut LinearProgram) -> Vec<AffineExpr> {
        match self {
            Body::H(p) => {
                let y = lp.add_vars(p.dim(), true);
                p.add_rows(lp, &y);
                y.into_iter().map(AffineExpr::var).collect()
            }
            Body::V(p) => {
                let w = lp.add_vars(p.vertices().len(), false);
                lp.add_constraint(w.iter().map(|&j| (j, 1.0)).collect(), Relation::Eq, 1.0);
                (0..p.dim())
                    .map(|k| AffineExpr {
                        terms: w
                            .iter()
                            .zip(p.vertices())
                            .filter(|(_, u)| u[k] != 0.0)
                            .map(|(&j, u)| (j, u[k]))
                            .collect(),
                        constant: 0.0,
                    })
                    .collect()
            }
            Body::Product(fs) => fs.iter().flat_map(|f| f.embed_canonical(lp)).collect(),
            Body::Sum(ts) => {
                let mut acc = ts[0].embed_canonical(lp);
                for t in &ts[1..] {
                    let e = t.embed_canonical(lp);
                    acc = acc.iter().zip(&e).map(|(a, b)| a.plus(b)).collect();
                }
                acc
            }
            _ => unreachable!("canonical polyhedral bodies have no wrappers"),
        }
    }

    /// Membership with absolute tolerance `tol`. Non-polyhedral bodies other
    /// than balls are tested against a fixed set of sampled directions.
    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        check_dim(x, self.dim())?;
        match self {
            Body::H(p) => return Ok(p.contains(x, tol)),
            Body::V(p) if p.dim() == 2 => {
                return Ok(polygon::contains(&p.polygon().expect("planar"), [x[0], x[1]], tol))
            }
            Body::Ball { center, radius } => return Ok((x - center).norm() <= radius + tol),
            Body::Product(fs) => {
                for (f, (start, len)) in fs.iter().zip(Body::blocks(fs)) {
                    if !f.contains(&vector::block(x, start, len), tol)? {
                        return Ok(false);
                    }
                }
                return Ok(true);
            }
            Body::Translated(b, o) => return b.contains(&(x - o), tol),
            Body::Reflected(b) => return b.contains(&(-x), tol),
            Body::Scaled(b, s) => return b.contains(&(x / *s), tol / s),
            _ => {}
        }
        let mut lp = LinearProgram::new(Sense::Maximize);
        if let Some(y) = self.embed(&mut lp) {
            // minimize the sup-norm gap between y and x
            let t = lp.add_var(false);
            lp.set_objective(t, -1.0);
            for (k, e) in y.iter().enumerate() {
                let te = AffineExpr::var(t);
                add_combination(&mut lp, &[(1.0, e), (-1.0, &te)], Relation::Le, x[k]);
                add_combination(&mut lp, &[(1.0, e), (1.0, &te)], Relation::Ge, x[k]);
            }
            return match lp.solve()? {
                LpOutcome::Optimal(s) => Ok(-s.value <= tol),
                _ => Ok(false),
            };
        }
        for v in membership_directions(self.dim()) {
            if v.dot(x) > self.support_any(&v)? + tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A ball contained in the body, when one is cheaply certified.
    pub fn inner_ball(&self) -> Option<(Vector, f64)> {
        match self {
            Body::H(p) => p.chebyshev_center().ok().flatten().filter(|(_, r)| *r > 0.0),
            Body::V(p) => p
                .hpolytope()
                .ok()
                .and_then(|h| h.chebyshev_center().ok().flatten())
                .filter(|(_, r)| *r > 0.0),
            Body::Oracle(o) => Some((o.center().clone(), o.inner_radius())),
            Body::Ball { center, radius } => Some((center.clone(), *radius)),
            Body::Product(fs) => {
                let balls: Option<Vec<(Vector, f64)>> = fs.iter().map(Body::inner_ball).collect();
                let balls = balls?;
                let r = balls.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
                let c: Vec<Vector> = balls.into_iter().map(|b| b.0).collect();
                Some((vector::concat(&c), r))
            }
            Body::Sum(ts) => {
                let balls: Option<Vec<(Vector, f64)>> = ts.iter().map(Body::inner_ball).collect();
                let balls = balls?;
                let r = balls.iter().map(|b| b.1).sum();
                let c = balls.iter().fold(vector::zeros(self.dim()), |a, b| a + &b.0);
                Some((c, r))
            }
            Body::Scaled(b, s) => b.inner_ball().map(|(c, r)| (c * *s, r * s)),
            Body::Translated(b, o) => b.inner_ball().map(|(c, r)| (c + o, r)),
            Body::Reflected(b) => b.inner_ball().map(|(c, r)| (-c, r)),
        }
    }

    /// Structural validation of every leaf.
    pub fn validate(&self) -> Result<()> {
        match self {
            Body::H(p) => p.validate(),
            Body::V(p) => {
                if p.vertices().len() < p.dim() + 1
                    || vector::affine_rank(p.vertices(), 1e-12 * p.extent()) < p.dim()
                {
                    Err(Error::Degenerate("vertices do not span the ambient space".into()))
                } else {
                    Ok(())
                }
            }
            Body::Oracle(_) | Body::Ball { .. } => Ok(()),
            Body::Product(fs) | Body::Sum(fs) => fs.iter().try_for_each(Body::validate),
            Body::Scaled(b, _) | Body::Translated(b, _) | Body::Reflected(b) => b.validate(),
        }
    }
}

/// Fixed direction set for sampled membership tests.
fn membership_directions(d: usize) -> Vec<Vector> {
    if d == 1 {
        return vec![vector::vector(&[1.0]), vector::vector(&[-1.0])];
    }
    if d == 2 {
        return vector::circle_directions(2048, 0.0);
    }
    let mut dirs = vector::random_units(0x5eed, d, 4096);
    for i in 0..d {
        dirs.push(vector::unit(d, i));
        dirs.push(-vector::unit(d, i));
    }
    dirs
}

/// Drop points that are clearly not extreme (planar hull; dedup otherwise).
pub fn prune(points: Vec<Vector>) -> Vec<Vector> {
    match points.first().map(|p| p.len()) {
        Some(2) => {
            let pts: Vec<P2> = points.iter().map(|p| [p[0], p[1]]).collect();
            polygon::convex_hull(&pts).iter().map(|p| vector::vector(p)).collect()
        }
        Some(1) => {
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            dedup_points(vec![vector::vector(&[lo]), vector::vector(&[hi])])
        }
        _ => dedup_points(points),
    }
}
