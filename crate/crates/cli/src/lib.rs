//! `mgauge`: queries on convex bodies given as JSON documents.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use minkowski_gauge::bodies::{self, BodySpec};
use minkowski_gauge::convex::{self, vector};
use minkowski_gauge::gauge::{self, Gauge, LevelBody, LevelSet};
use minkowski_gauge::{chebyshev, oracles, Body, Error, Vector};

pub const DEFAULT_SEED: u64 = 20_011_999;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mgauge", version, about = "Generalized Minkowski functional of convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct BodyArg {
    /// Body document: a path, or inline JSON starting with `{`.
    #[arg(long)]
    body: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// α(K, x) with its witness functional.
    Alpha {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Level set K^λ as a halfspace or vertex description.
    Levelset {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long)]
        lambda: f64,
    },
    /// α_K, its minimizer and the critical set.
    Symmetry {
        #[command(flatten)]
        body: BodyArg,
    },
    /// Maximal chord factor τ(K, v).
    Tau {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Minimal width w(K).
    Width {
        #[command(flatten)]
        body: BodyArg,
    },
    /// Support value h(K, v).
    Support {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Hausdorff distance between two bodies.
    Hausdorff {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long)]
        other: String,
    },
    /// All equivalent forms of α on one instance.
    OracleCheck {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 256)]
        lines: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Sampled chord-ratio functionals.
    Ratios {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 256)]
        lines: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Pointwise polynomial growth C_n(K, x).
    ChebGrowth {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Leading-term growth A_n(K, v).
    ChebLeading {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long)]
        degree: usize,
    },
    /// Gradient bounds at an interior point.
    Bernstein {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1.0)]
        norm: f64,
    },
    /// α over a rectangular lattice, as CSV.
    Grid {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, allow_hyphen_values = true)]
        low: String,
        #[arg(long, allow_hyphen_values = true)]
        high: String,
        #[arg(long)]
        steps: usize,
    },
    /// δ(K^λ, λC) against D − w/2 for λ between α_K and 1.
    ExperimentDeltabound {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Search for violations of the squared-α gradient bound.
    ExperimentConjecture {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 500)]
        points: usize,
        #[arg(long, default_value_t = 64)]
        dirs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

enum Output {
    Json(Value),
    Csv(Vec<u8>),
}

/// Run one invocation; returns the process exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let rec = json!({"error": "usage", "message": e.to_string().trim_end(), "exit_code": EXIT_INPUT});
            let _ = writeln!(err, "{rec}");
            return EXIT_INPUT;
        }
    };
    match execute(cli.command) {
        Ok(Output::Json(v)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&round_value(v)).expect("json"));
            EXIT_OK
        }
        Ok(Output::Csv(bytes)) => {
            let _ = out.write_all(&bytes);
            EXIT_OK
        }
        Err(e) => {
            let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INPUT };
            let mut rec = json!({"error": e.kind(), "message": e.to_string(), "exit_code": code});
            if let Error::Schema { line, column, .. } = &e {
                rec["line"] = json!(line);
                rec["column"] = json!(column);
            }
            let _ = writeln!(err, "{rec}");
            code
        }
    }
}

/// 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn load_body(arg: &str) -> Result<Body, Error> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| Error::InvalidArgument(format!("cannot read body file {arg}: {e}")))?
    };
    bodies::parse_body(&text)
}

fn parse_vec(s: &str, dim: usize) -> Result<Vector, Error> {
    let v = vector::parse_vector(s)?;
    vector::check_dim(&v, dim)?;
    Ok(v)
}

fn vec_json(v: &Vector) -> Value {
    json!(v.iter().copied().collect::<Vec<f64>>())
}

fn to_json<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable report")
}

fn finite_arg(name: &str, x: f64) -> Result<f64, Error> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite")))
    }
}

fn execute(cmd: Command) -> Result<Output, Error> {
    Ok(Output::Json(match cmd {
        Command::Alpha { body, point } => {
            let k = load_body(&body.body)?;
            let x = parse_vec(&point, k.dim())?;
            let r = gauge::alpha(&k, &x)?;
            json!({
                "alpha": r.alpha,
                "method": to_json(&r.method),
                "tol": r.tol,
                "witness_dir": vec_json(&r.witness_dir),
            })
        }
        Command::Levelset { body, lambda } => {
            let k = load_body(&body.body)?;
            let lambda = finite_arg("lambda", lambda)?;
            let l = gauge::level_set(&k, lambda)?;
            let mut m = Map::new();
            m.insert("lambda".into(), json!(lambda));
            m.insert("empty".into(), json!(l.empty));
            m.insert("description".into(), level_json(&l)?);
            Value::Object(m)
        }
        Command::Symmetry { body } => {
            let k = load_body(&body.body)?;
            let r = gauge::alpha_inf(&k)?;
            json!({
                "alpha_inf": r.alpha_inf,
                "measure": r.measure,
                "minimizer": vec_json(&r.minimizer),
                "critical_dim_estimate": r.critical_dim_estimate,
                "klee_lhs": r.klee_lhs,
                "codim": r.codim,
                "critical_points": r.critical_points.iter().map(vec_json).collect::<Vec<_>>(),
                "critical": level_json(&r.critical)?,
            })
        }
        Command::Tau { body, dir } => {
            let k = load_body(&body.body)?;
            let v = parse_vec(&dir, k.dim())?;
            let t = convex::max_chord(&k, &v)?;
            json!({"tau": t.value, "exactness": to_json(&t.exactness)})
        }
        Command::Width { body } => {
            let k = load_body(&body.body)?;
            to_json(&convex::global_width(&k)?)
        }
        Command::Support { body, dir } => {
            let k = load_body(&body.body)?;
            let v = parse_vec(&dir, k.dim())?;
            json!({"support": convex::support(&k, &v)?})
        }
        Command::Hausdorff { body, other } => {
            let k = load_body(&body.body)?;
            let m = load_body(&other)?;
            to_json(&convex::hausdorff(&k, &m)?)
        }
        Command::OracleCheck { body, point, lines, seed } => {
            let k = load_body(&body.body)?;
            let x = parse_vec(&point, k.dim())?;
            to_json(&oracles::identity_check(&k, &x, lines, seed)?)
        }
        Command::Ratios { body, point, lines, seed } => {
            let k = load_body(&body.body)?;
            let x = parse_vec(&point, k.dim())?;
            to_json(&oracles::ratio_functionals(&k, &x, lines, seed)?)
        }
        Command::ChebGrowth { body, point, degree, seed } => {
            let k = load_body(&body.body)?;
            let x = parse_vec(&point, k.dim())?;
            let r = chebyshev::cheb_growth_seeded(&k, &x, degree, seed)?;
            json!({
                "n": r.n,
                "alpha": r.alpha,
                "growth": r.growth,
                "extremal_value": r.extremal_value,
                "sup_norm_check": r.sup_norm_check,
                "tol_witness": r.tol_witness,
                "samples": r.samples,
                "witness_dir": vec_json(&r.witness_dir),
            })
        }
        Command::ChebLeading { body, dir, degree } => {
            let k = load_body(&body.body)?;
            let v = parse_vec(&dir, k.dim())?;
            to_json(&chebyshev::leading_growth(&k, &v, degree)?)
        }
        Command::Bernstein { body, point, degree, norm } => {
            let k = load_body(&body.body)?;
            let x = parse_vec(&point, k.dim())?;
            let r = chebyshev::bernstein_bound(&k, &x, degree, finite_arg("norm", norm)?)?;
            let mut v = to_json(&r);
            v["conjecture_status"] = json!("open conjecture, reported only");
            v
        }
        Command::Grid { body, low, high, steps } => {
            let k = load_body(&body.body)?;
            return grid(&k, &low, &high, steps).map(Output::Csv);
        }
        Command::ExperimentDeltabound { body, steps } => {
            let k = load_body(&body.body)?;
            delta_experiment(&k, steps)?
        }
        Command::ExperimentConjecture { body, degree, points, dirs, seed } => {
            let k = load_body(&body.body)?;
            let mut v = to_json(&chebyshev::conjecture_search(&k, degree, points, dirs, seed)?);
            v["note"] = json!("findings only; nothing is asserted");
            v
        }
    }))
}

fn level_json(l: &LevelSet) -> Result<Value, Error> {
    if l.empty {
        return Ok(json!({"kind": "empty"}));
    }
    Ok(match &l.body {
        LevelBody::Halfspaces(h) => json!({
            "kind": "hpolytope",
            "A": h.normals().iter().map(vec_json).collect::<Vec<_>>(),
            "b": h.offsets(),
        }),
        LevelBody::Implicit { lambda, .. } => json!({"kind": "implicit", "lambda": lambda}),
        LevelBody::Product(ps) => json!({
            "kind": "product",
            "factors": ps.iter().map(level_json).collect::<Result<Vec<_>, _>>()?,
        }),
        _ => to_json(&BodySpec::from_body(&l.to_body()?)?),
    })
}

fn grid(k: &Body, low: &str, high: &str, steps: usize) -> Result<Vec<u8>, Error> {
    let d = k.dim();
    let lo = parse_vec(low, d)?;
    let hi = parse_vec(high, d)?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let total = steps
        .checked_pow(d as u32)
        .filter(|t| *t <= 10_000_000)
        .ok_or_else(|| Error::InvalidArgument("lattice too large".into()))?;
    let g = Gauge::new(k)?;
    let coord = |j: usize, i: usize| {
        if steps == 1 {
            lo[j]
        } else {
            lo[j] + (hi[j] - lo[j]) * i as f64 / (steps - 1) as f64
        }
    };
    let rows: Vec<Result<(Vec<f64>, f64), Error>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rem = idx;
            let mut x = vec![0.0; d];
            for j in (0..d).rev() {
                x[j] = coord(j, rem % steps);
                rem /= steps;
            }
            let a = g.alpha(&vector::vector(&x))?.alpha;
            Ok((x, a))
        })
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    header.push("alpha".into());
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let (x, a) = r?;
        let rec: Vec<String> = x.iter().chain(std::iter::once(&a)).map(|v| round12(*v).to_string()).collect();
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(e.to_string())
}

fn delta_experiment(k: &Body, steps: usize) -> Result<Value, Error> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let a_k = gauge::alpha_inf(k)?.alpha_inf;
    let mut rows = Vec::with_capacity(steps);
    let mut worst = (f64::NEG_INFINITY, f64::NAN);
    for i in 0..=steps {
        let lambda = a_k + (1.0 - a_k) * i as f64 / steps as f64;
        let s = match gauge::symmetrization_distance(k, lambda) {
            Ok(s) => s,
            Err(Error::Unsupported(_)) if i == 0 => continue,
            Err(e) => return Err(e),
        };
        let ratio = s.distance / s.bound;
        if ratio > worst.0 {
            worst = (ratio, lambda);
        }
        rows.push(json!({"lambda": lambda, "distance": s.distance, "bound": s.bound, "ratio": ratio}));
    }
    Ok(json!({
        "alpha_inf": a_k,
        "max_ratio": worst.0,
        "at_lambda": worst.1,
        "exceeds_bound": worst.0 > 1.0,
        "rows": rows,
    }))
}
