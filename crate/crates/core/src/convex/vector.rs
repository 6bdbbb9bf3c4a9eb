use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Points and directions in R^d share one coordinate type.
pub type Vector = DVector<f64>;

pub fn vector(coords: &[f64]) -> Vector {
    DVector::from_column_slice(coords)
}

pub fn zeros(d: usize) -> Vector {
    DVector::zeros(d)
}

pub fn unit(d: usize, i: usize) -> Vector {
    let mut e = DVector::zeros(d);
    e[i] = 1.0;
    e
}

pub fn check_finite(v: &Vector) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn check_dim(v: &Vector, d: usize) -> Result<()> {
    if v.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: v.len(),
        });
    }
    check_finite(v)
}

pub fn check_direction(v: &Vector, d: usize) -> Result<()> {
    check_dim(v, d)?;
    if v.iter().all(|c| *c == 0.0) {
        return Err(Error::ZeroDirection);
    }
    Ok(())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vector {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

pub fn random_units(seed: u64, d: usize, count: usize) -> Vec<Vector> {
    let mut r = rng(seed);
    (0..count).map(|_| random_unit(&mut r, d)).collect()
}

/// Evenly spaced unit directions on the circle, starting at angle `phase`.
pub fn circle_directions(count: usize, phase: f64) -> Vec<Vector> {
    (0..count)
        .map(|k| {
            let th = phase + std::f64::consts::TAU * k as f64 / count as f64;
            vector(&[th.cos(), th.sin()])
        })
        .collect()
}

/// Affine rank of a point cloud: number of singular values of the centered
/// coordinate matrix above `threshold`.
pub fn affine_rank(points: &[Vector], threshold: f64) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let d = points[0].len();
    let n = points.len();
    let mean = points.iter().fold(DVector::zeros(d), |acc, p| acc + p) / n as f64;
    let m = DMatrix::from_fn(n, d, |i, j| points[i][j] - mean[j]);
    m.singular_values().iter().filter(|s| **s > threshold).count()
}

pub fn concat(blocks: &[Vector]) -> Vector {
    let coords: Vec<f64> = blocks.iter().flat_map(|b| b.iter().copied()).collect();
    DVector::from_vec(coords)
}

pub fn block(v: &Vector, start: usize, len: usize) -> Vector {
    v.rows(start, len).into_owned()
}

/// Parse a comma separated list of numbers.
pub fn parse_vector(text: &str) -> Result<Vector> {
    let coords = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("not a number: {:?}", s.trim())))
        })
        .collect::<Result<Vec<f64>>>()?;
    if coords.is_empty() {
        return Err(Error::InvalidArgument("empty vector".into()));
    }
    let v = DVector::from_vec(coords);
    check_finite(&v)?;
    Ok(v)
}


/// Serde helpers writing vectors as flat coordinate arrays.
pub mod flat {
    use super::Vector;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter())
    }

    pub fn serialize_opt<S: Serializer>(v: &Option<Vector>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter()),
            None => s.serialize_none(),
        }
    }
}
