//! Standard bodies, the named examples, and the JSON body schema.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::convex::body::{Body, HPolytope, SupportOracle, VPolytope};
use crate::convex::polygon;
use crate::convex::vector::{self, Vector};
use crate::error::{Error, Result};

/// `conv{0, e_1, …, e_d}`.
pub fn make_simplex(d: usize) -> Result<VPolytope> {
    if d < 1 {
        return Err(Error::InvalidArgument("simplex dimension must be at least 1".into()));
    }
    let mut vs = vec![vector::zeros(d)];
    vs.extend((0..d).map(|i| vector::unit(d, i)));
    VPolytope::new(vs)
}

/// Axis-parallel box `[low, high]` as 2d halfspaces.
pub fn make_box(low: &[f64], high: &[f64]) -> Result<HPolytope> {
    if low.len() != high.len() {
        return Err(Error::DimensionMismatch {
            expected: low.len(),
            got: high.len(),
        });
    }
    if low.is_empty() {
        return Err(Error::InvalidArgument("box dimension must be at least 1".into()));
    }
    let d = low.len();
    let mut normals = Vec::with_capacity(2 * d);
    let mut offsets = Vec::with_capacity(2 * d);
    for i in 0..d {
        normals.push(vector::unit(d, i));
        offsets.push(high[i]);
        normals.push(-vector::unit(d, i));
        offsets.push(-low[i]);
    }
    HPolytope::new(normals, offsets)
}

pub fn make_ball(center: Vector, radius: f64) -> Result<Body> {
    Body::ball(center, radius)
}

/// Regular n-gon inscribed in the circle of the given radius.
pub fn make_regular_polygon(n: usize, radius: f64, center: [f64; 2]) -> Result<VPolytope> {
    if n < 3 {
        return Err(Error::InvalidArgument("a polygon needs at least 3 vertices".into()));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let vs = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            vector::vector(&[center[0] + radius * t.cos(), center[1] + radius * t.sin()])
        })
        .collect();
    VPolytope::new(vs)
}

/// The triangle with vertices (1,0), (0,1), (1,1), times the segment [−1, 1].
/// Its critical set is the segment {(2/3, 2/3)} × [−1/3, 1/3].
pub fn make_sobczyk_prism() -> Body {
    let tri = VPolytope::from_coords(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).expect("valid triangle");
    let seg = make_box(&[-1.0], &[1.0]).expect("valid segment");
    Body::Product(vec![Body::V(tri), Body::H(seg)])
}

/// Inscribed polygon of the upper unit half-disc with vertices
/// `(cos kπ/n, sin kπ/n)`, k = 0..n.
pub fn make_half_disc(n: usize) -> Result<VPolytope> {
    if n < 8 {
        return Err(Error::InvalidArgument("half-disc approximation needs n ≥ 8".into()));
    }
    let vs = (0..=n)
        .map(|k| {
            let t = PI * k as f64 / n as f64;
            let (s, c) = t.sin_cos();
            vector::vector(&[c, s.max(0.0)])
        })
        .collect();
    VPolytope::new(vs)
}

/// Area centroid of the exact upper half-disc.
pub fn half_disc_centroid() -> Vector {
    vector::vector(&[0.0, 4.0 / (3.0 * PI)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMode {
    /// weights `1 + 1/n`
    #[serde(rename = "i")]
    Increasing,
    /// weights `2 − 1/n`
    #[serde(rename = "ii")]
    Decreasing,
}

impl WeightMode {
    pub fn weight(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            WeightMode::Increasing => 1.0 + 1.0 / n,
            WeightMode::Decreasing => 2.0 - 1.0 / n,
        }
    }
}

/// The ellipsoid `Σ w_n x_n² ≤ 1` with support `h(v) = √(Σ v_n² / w_n)`.
pub fn make_weighted_l2_ball(d: usize, mode: WeightMode) -> Result<SupportOracle> {
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let inv: Vec<f64> = (1..=d).map(|n| 1.0 / mode.weight(n)).collect();
    let h = Arc::new(move |v: &Vector| v.iter().zip(&inv).map(|(c, w)| c * c * w).sum::<f64>().sqrt());
    let spec = BodySpec::WeightedL2Ball { dim: d, mode };
    Ok(SupportOracle::new(h, vector::zeros(d), 1.0 / 2f64.sqrt(), 1.0)?
        .with_origin(serde_json::to_string(&spec).expect("serializable")))
}

/// Random convex polygon: hull of points at random angles and radii around a
/// random center. Test utility.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> VPolytope {
    loop {
        let cx = rng.random_range(-2.0..2.0);
        let cy = rng.random_range(-2.0..2.0);
        let squash = rng.random_range(0.3..1.0);
        let pts: Vec<[f64; 2]> = (0..n.max(3))
            .map(|_| {
                let t: f64 = rng.random_range(0.0..2.0 * PI);
                let r: f64 = rng.random_range(0.4..1.5);
                [cx + r * t.cos(), cy + squash * r * t.sin()]
            })
            .collect();
        let hull = polygon::convex_hull(&pts);
        if hull.len() >= 3 && polygon::area(&hull) > 0.05 {
            if let Ok(p) = VPolytope::new(hull.iter().map(|p| vector::vector(p)).collect()) {
                return p;
            }
        }
    }
}

/// Body document schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Hpolytope {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Vpolytope {
        vertices: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Box {
        low: Vec<f64>,
        high: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Simplex {
        dim: usize,
    },
    Product {
        factors: Vec<BodySpec>,
    },
    Sum {
        terms: Vec<BodySpec>,
    },
    Scaled {
        body: Box<BodySpec>,
        factor: f64,
    },
    Translated {
        body: Box<BodySpec>,
        offset: Vec<f64>,
    },
    Reflected {
        body: Box<BodySpec>,
    },
    RegularPolygon {
        n: usize,
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        center: Option<[f64; 2]>,
    },
    HalfDiscApprox {
        n: usize,
    },
    SobczykPrism {},
    WeightedL2Ball {
        dim: usize,
        mode: WeightMode,
    },
}

fn one() -> f64 {
    1.0
}

fn check_declared(dim: Option<usize>, actual: usize) -> Result<()> {
    match dim {
        Some(d) if d != actual => Err(Error::DimensionMismatch {
            expected: d,
            got: actual,
        }),
        _ => Ok(()),
    }
}

fn to_vectors(rows: &[Vec<f64>]) -> Vec<Vector> {
    rows.iter().map(|r| vector::vector(r)).collect()
}

impl BodySpec {
    pub fn build(&self) -> Result<Body> {
        Ok(match self {
            BodySpec::Hpolytope { a, b, dim } => {
                let p = HPolytope::new(to_vectors(a), b.clone())?;
                check_declared(*dim, p.dim())?;
                Body::H(p)
            }
            BodySpec::Vpolytope { vertices, dim } => {
                let p = VPolytope::new(to_vectors(vertices))?;
                check_declared(*dim, p.dim())?;
                Body::V(p)
            }
            BodySpec::Ball { center, radius, dim } => {
                check_declared(*dim, center.len())?;
                Body::ball(vector::vector(center), *radius)?
            }
            BodySpec::Box { low, high, dim } => {
                check_declared(*dim, low.len())?;
                Body::H(make_box(low, high)?)
            }
            BodySpec::Simplex { dim } => Body::V(make_simplex(*dim)?),
            BodySpec::Product { factors } => {
                Body::product(factors.iter().map(BodySpec::build).collect::<Result<_>>()?)?
            }
            BodySpec::Sum { terms } => Body::sum(terms.iter().map(BodySpec::build).collect::<Result<_>>()?)?,
            BodySpec::Scaled { body, factor } => body.build()?.scaled(*factor)?,
            BodySpec::Translated { body, offset } => body.build()?.translated(vector::vector(offset))?,
            BodySpec::Reflected { body } => body.build()?.reflected(),
            BodySpec::RegularPolygon { n, radius, center } => {
                Body::V(make_regular_polygon(*n, *radius, center.unwrap_or([0.0, 0.0]))?)
            }
            BodySpec::HalfDiscApprox { n } => Body::V(make_half_disc(*n)?),
            BodySpec::SobczykPrism {} => make_sobczyk_prism(),
            BodySpec::WeightedL2Ball { dim, mode } => Body::Oracle(make_weighted_l2_ball(*dim, *mode)?),
        })
    }

    pub fn from_body(body: &Body) -> Result<BodySpec> {
        let rows = |vs: &[Vector]| vs.iter().map(|v| v.iter().copied().collect()).collect();
        Ok(match body {
            Body::H(p) => BodySpec::Hpolytope {
                a: rows(p.normals()),
                b: p.offsets().to_vec(),
                dim: Some(p.dim()),
            },
            Body::V(p) => BodySpec::Vpolytope {
                vertices: rows(p.vertices()),
                dim: Some(p.dim()),
            },
            Body::Ball { center, radius } => BodySpec::Ball {
                center: center.iter().copied().collect(),
                radius: *radius,
                dim: Some(center.len()),
            },
            Body::Oracle(o) => match o.origin() {
                Some(text) => parse_spec(text)?,
                None => return Err(Error::Unsupported("support oracle without a document form".into())),
            },
            Body::Product(fs) => BodySpec::Product {
                factors: fs.iter().map(BodySpec::from_body).collect::<Result<_>>()?,
            },
            Body::Sum(ts) => BodySpec::Sum {
                terms: ts.iter().map(BodySpec::from_body).collect::<Result<_>>()?,
            },
            Body::Scaled(b, f) => BodySpec::Scaled {
                body: Box::new(BodySpec::from_body(b)?),
                factor: *f,
            },
            Body::Translated(b, o) => BodySpec::Translated {
                body: Box::new(BodySpec::from_body(b)?),
                offset: o.iter().copied().collect(),
            },
            Body::Reflected(b) => BodySpec::Reflected {
                body: Box::new(BodySpec::from_body(b)?),
            },
        })
    }
}

fn schema_error(e: &serde_json::Error, text: &str) -> Error {
    let (line, column) = if e.line() > 0 {
        (e.line(), e.column())
    } else {
        // tagged variants are buffered before decoding, which drops the
        // position; point at the closing brace of the document instead
        let end = text.rfind('}').unwrap_or(text.len().saturating_sub(1));
        let before = &text[..end];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, column)
    };
    let message = e.to_string();
    let message = match message.find(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    Error::Schema { line, column, message }
}

pub fn parse_spec(text: &str) -> Result<BodySpec> {
    serde_json::from_str(text).map_err(|e| schema_error(&e, text))
}

/// Parse and validate a body document.
pub fn parse_body(text: &str) -> Result<Body> {
    parse_spec(text)?.build()
}

pub fn serialize_body(body: &Body) -> Result<String> {
    let spec = BodySpec::from_body(body)?;
    Ok(serde_json::to_string_pretty(&spec).expect("body specs serialize"))
}
