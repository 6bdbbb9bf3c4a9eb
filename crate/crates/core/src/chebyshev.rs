//! Chebyshev polynomials and the polynomial extremal problems governed by the
//! gauge: pointwise growth, leading-term growth, and gradient bounds.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::convex::body::Body;
use crate::convex::vector::{self, check_dim, check_direction, Vector};
use crate::convex::{self, Exactness};
use crate::error::{Error, Result};
use crate::gauge::{self, Gauge};

/// Highest degree for which `T_n ∘ (affine)` is expanded into coefficients.
pub const MAX_EXPANDED_DEGREE: usize = 64;

fn check_degree(n: i64) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::InvalidArgument("degree must be nonnegative".into()))
}

/// `T_n(x)`: `cos(n·arccos x)` on `[−1, 1]`; outside, the three-term recurrence
/// up to degree 64 (exact on small integers) and the explicit root form beyond.
pub fn cheb_t(n: i64, x: f64) -> Result<f64> {
    let n = check_degree(n)?;
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(t_unchecked(n, x))
}

fn t_unchecked(n: u32, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        return (n as f64 * x.acos()).cos();
    }
    if n as usize <= MAX_EXPANDED_DEGREE {
        let (mut prev, mut cur) = (1.0, x);
        if n == 0 {
            return 1.0;
        }
        for _ in 1..n {
            let next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let y = x.abs();
    let big = y + (y * y - 1.0).sqrt();
    // y − √(y² − 1) = 1/big, computed without cancellation
    sign * 0.5 * (big.powi(n as i32) + big.powi(-(n as i32)))
}

/// `T_n(x) = 2^{n−1} ∏ (x − cos((2j − 1)π / 2n))`.
pub fn cheb_t_product(n: i64, x: f64) -> Result<f64> {
    let n = check_degree(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let mut p = 2f64.powi(n as i32 - 1);
    for j in 1..=n {
        p *= x - ((2.0 * j as f64 - 1.0) * std::f64::consts::PI / (2.0 * nf)).cos();
    }
    Ok(p)
}

/// `T_n′(x) = n·U_{n−1}(x)`.
pub fn cheb_t_deriv(n: i64, x: f64) -> Result<f64> {
    let n = check_degree(n)?;
    Ok(deriv_unchecked(n, x))
}

fn deriv_unchecked(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    // U_0 = 1, U_1 = 2x, U_{k+1} = 2x U_k − U_{k−1}
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 1 {
        return 1.0;
    }
    for _ in 2..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    n as f64 * cur
}

/// A polynomial in d variables as a map from exponent vectors to coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            degree: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Polynomial::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// `⟨coeffs, y⟩ + c`.
    pub fn affine(coeffs: &[f64], c: f64) -> Self {
        let d = coeffs.len();
        let mut p = Polynomial::constant(d, c);
        for (j, &a) in coeffs.iter().enumerate() {
            let mut e = vec![0; d];
            e[j] = 1;
            p.add_term(e, a);
        }
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Result<Self> {
        let mut p = Polynomial::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: e.len() });
            }
            if !c.is_finite() {
                return Err(Error::NonFinite);
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        let deg = e.iter().map(|&k| k as usize).sum::<usize>();
        let slot = self.terms.entry(e.clone()).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&e);
        } else {
            self.degree = self.degree.max(deg);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stated degree; never below the largest total degree of a nonzero term.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, f64> {
        &self.terms
    }

    /// Homogeneous part of degree k.
    pub fn homogeneous_part(&self, k: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            if e.iter().map(|&j| j as usize).sum::<usize>() == k {
                p.add_term(e.clone(), *c);
            }
        }
        p
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), *c);
        }
        p.degree = p.degree.max(other.degree);
        p
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let mut p = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * s);
        }
        p
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        check_dim(x, self.dim)?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x.iter()).map(|(&k, xi)| xi.powi(k as i32)).product::<f64>())
            .sum())
    }

    pub fn grad(&self, x: &Vector) -> Result<Vector> {
        check_dim(x, self.dim)?;
        let mut g = vector::zeros(self.dim);
        for (e, c) in &self.terms {
            for j in 0..self.dim {
                if e[j] == 0 {
                    continue;
                }
                let mut term = c * e[j] as f64;
                for (i, (&k, xi)) in e.iter().zip(x.iter()).enumerate() {
                    let k = if i == j { k - 1 } else { k };
                    term *= xi.powi(k as i32);
                }
                g[j] += term;
            }
        }
        Ok(g)
    }

    /// `T_n(L)` for an affine polynomial L, expanded by the three-term recurrence.
    pub fn chebyshev_of(n: usize, l: &Polynomial) -> Result<Polynomial> {
        if n > MAX_EXPANDED_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "expanded degree is capped at {MAX_EXPANDED_DEGREE}"
            )));
        }
        if l.degree > 1 {
            return Err(Error::InvalidArgument("inner polynomial must be affine".into()));
        }
        let one = Polynomial::constant(l.dim, 1.0);
        if n == 0 {
            return Ok(one);
        }
        let two_l = l.scale(2.0);
        let (mut prev, mut cur) = (one, l.clone());
        for _ in 1..n {
            let next = two_l.mul(&cur).add(&prev.scale(-1.0));
            prev = cur;
            cur = next;
        }
        cur.degree = n;
        Ok(cur)
    }
}

/// The affine form `t(K, v, ·)` with supports fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearForm {
    #[serde(serialize_with = "crate::convex::vector::flat::serialize")]
    pub dir: Vector,
    pub support_pos: f64,
    pub support_neg: f64,
}

impl LinearForm {
    pub fn new(k: &Body, v: &Vector) -> Result<Self> {
        check_direction(v, k.dim())?;
        let support_pos = k.support(v)?;
        let support_neg = k.support(&(-v))?;
        if !(support_pos + support_neg > 0.0) {
            return Err(Error::Degenerate("zero width in direction".into()));
        }
        Ok(LinearForm {
            dir: v.clone(),
            support_pos,
            support_neg,
        })
    }

    pub fn width(&self) -> f64 {
        self.support_pos + self.support_neg
    }

    pub fn eval(&self, y: &Vector) -> f64 {
        (2.0 * self.dir.dot(y) - self.support_pos + self.support_neg) / self.width()
    }

    pub fn polynomial(&self) -> Polynomial {
        let w = self.width();
        let coeffs: Vec<f64> = self.dir.iter().map(|a| 2.0 * a / w).collect();
        Polynomial::affine(&coeffs, (self.support_neg - self.support_pos) / w)
    }
}

/// Pointwise growth `C_n(K, x)` with its extremal polynomial `T_n(t(K, v*, ·))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevReport {
    pub n: usize,
    pub alpha: f64,
    pub growth: f64,
    #[serde(serialize_with = "crate::convex::vector::flat::serialize")]
    pub witness_dir: Vector,
    /// `None` for points of K, where the extremal polynomial is the constant 1.
    pub form: Option<LinearForm>,
    /// `P(x)` evaluated through the witness form.
    pub extremal_value: f64,
    pub sup_norm_check: f64,
    /// `|T_n′(α)|` times the witness tolerance.
    pub tol_witness: f64,
    pub samples: usize,
}

impl ChebyshevReport {
    pub fn extremal_eval(&self, y: &Vector) -> f64 {
        match &self.form {
            Some(f) => t_unchecked(self.n as u32, f.eval(y)),
            None => 1.0,
        }
    }
}

pub const SUP_NORM_SAMPLES: usize = 10_000;

pub fn cheb_growth(k: &Body, x: &Vector, n: usize) -> Result<ChebyshevReport> {
    cheb_growth_seeded(k, x, n, 0xc4eb)
}

pub fn cheb_growth_seeded(k: &Body, x: &Vector, n: usize, seed: u64) -> Result<ChebyshevReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let g = Gauge::new(k)?.alpha(x)?;
    if g.alpha <= 1.0 {
        return Ok(ChebyshevReport {
            n,
            alpha: g.alpha,
            growth: 1.0,
            witness_dir: g.witness_dir,
            form: None,
            extremal_value: 1.0,
            sup_norm_check: 1.0,
            tol_witness: 0.0,
            samples: 0,
        });
    }
    let form = LinearForm::new(k, &g.witness_dir)?;
    let nn = n as u32;
    let growth = t_unchecked(nn, g.alpha);
    let extremal_value = t_unchecked(nn, form.eval(x));
    let pts = convex::sample_points(k, SUP_NORM_SAMPLES, seed)?;
    let sup = pts
        .iter()
        .map(|p| t_unchecked(nn, form.eval(p)).abs())
        .fold(0.0, f64::max);
    Ok(ChebyshevReport {
        n,
        alpha: g.alpha,
        growth,
        witness_dir: g.witness_dir,
        form: Some(form),
        extremal_value,
        sup_norm_check: sup,
        tol_witness: deriv_unchecked(nn, g.alpha).abs() * g.tol,
        samples: pts.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingReport {
    pub n: usize,
    pub value: f64,
    pub tau: f64,
    pub exactness: Exactness,
    /// A functional attaining `⟨v*, v⟩ / w(K, v*) = 1/τ(K, v)` when found exactly.
    #[serde(serialize_with = "crate::convex::vector::flat::serialize_opt")]
    pub witness_dir: Option<Vector>,
    /// Top homogeneous part of `T_n(t(K, v*, ·))` evaluated at v.
    pub witness_value: Option<f64>,
}

/// Leading-term growth `A_n(K, v) = 2^{2n−1} / τ(K, v)^n`.
pub fn leading_growth(k: &Body, v: &Vector, n: usize) -> Result<LeadingReport> {
    check_direction(v, k.dim())?;
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let tau = convex::max_chord(k, v)?;
    let value = 2f64.powi(2 * n as i32 - 1) / tau.value.powi(n as i32);
    let witness = match k.dim() {
        1 => Some(vector::vector(&[v[0].signum()])),
        2 if k.polygon().is_some() => Some(convex::chord_witness_2d(k, v)?.1),
        _ => None,
    };
    let witness_value = match &witness {
        Some(w) => {
            let f = LinearForm::new(k, w)?;
            let p = Polynomial::chebyshev_of(n.min(MAX_EXPANDED_DEGREE), &f.polynomial())?;
            if n <= MAX_EXPANDED_DEGREE {
                Some(p.homogeneous_part(n).eval(v)?)
            } else {
                Some(2f64.powi(n as i32 - 1) * (2.0 * w.dot(v) / f.width()).powi(n as i32))
            }
        }
        None => None,
    };
    Ok(LeadingReport {
        n,
        value,
        tau: tau.value,
        exactness: tau.exactness,
        witness_dir: witness,
        witness_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinReport {
    pub alpha: f64,
    pub width: f64,
    pub width_exactness: Exactness,
    /// `2n‖p‖ / (w √(1 − α))`, a theorem.
    pub theorem_bound: f64,
    /// `2n‖p‖ / (w √(1 − α²))`, an open conjecture; reported, never relied on.
    pub conjecture_bound: f64,
}

pub fn bernstein_bound(k: &Body, x: &Vector, n: usize, norm_bound: f64) -> Result<BernsteinReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if !(norm_bound > 0.0 && norm_bound.is_finite()) {
        return Err(Error::InvalidArgument("norm bound must be positive".into()));
    }
    let alpha = gauge::alpha(k, x)?.alpha;
    if alpha >= 1.0 {
        return Err(Error::InvalidArgument("point must be interior".into()));
    }
    let w = convex::global_width(k)?;
    let num = 2.0 * n as f64 * norm_bound;
    Ok(BernsteinReport {
        alpha,
        width: w.value,
        width_exactness: w.exactness,
        theorem_bound: num / (w.value * (1.0 - alpha).sqrt()),
        conjecture_bound: num / (w.value * (1.0 - alpha * alpha).sqrt()),
    })
}

/// Gradient of `T_n(t(K, v, ·))` at x; these polynomials have `‖p‖_K ≤ 1`.
pub fn family_gradient(form: &LinearForm, x: &Vector, n: usize) -> Vector {
    let t = form.eval(x);
    &form.dir * (deriv_unchecked(n as u32, t) * 2.0 / form.width())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub instances: usize,
    /// Largest `|grad p(x)| · w · √(1 − α²) / (2n)`; above 1 would contradict the conjecture.
    pub max_ratio: f64,
    #[serde(serialize_with = "crate::convex::vector::flat::serialize")]
    pub at_point: Vector,
    #[serde(serialize_with = "crate::convex::vector::flat::serialize")]
    pub at_dir: Vector,
    pub counterexample_found: bool,
}

/// Search the certified family for points where the conjectured bound fails.
pub fn conjecture_search(k: &Body, n: usize, points: usize, dirs: usize, seed: u64) -> Result<ConjectureReport> {
    if n == 0 || points == 0 || dirs == 0 {
        return Err(Error::InvalidArgument("degree and sample counts must be positive".into()));
    }
    let g = Gauge::new(k)?;
    let w = convex::global_width(k)?.value;
    let forms = convex::sample_directions(k.dim(), dirs, seed ^ 0x5eed)
        .iter()
        .map(|v| LinearForm::new(k, v))
        .collect::<Result<Vec<_>>>()?;
    let mut best = (f64::NEG_INFINITY, vector::zeros(k.dim()), vector::zeros(k.dim()));
    let mut instances = 0;
    for x in convex::sample_points(k, points, seed)? {
        let a = g.alpha(&x)?.alpha;
        if a >= 1.0 - 1e-9 {
            continue;
        }
        for f in &forms {
            instances += 1;
            let r = family_gradient(f, &x, n).norm() * w * (1.0 - a * a).sqrt() / (2.0 * n as f64);
            if r > best.0 {
                best = (r, x.clone(), f.dir.clone());
            }
        }
    }
    Ok(ConjectureReport {
        n,
        instances,
        max_ratio: best.0,
        at_point: best.1,
        at_dir: best.2,
        counterexample_found: best.0 > 1.0 + 1e-9,
    })
}
