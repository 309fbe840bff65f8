//! `--spec` parsing: a shorthand, inline JSON, or a path to a JSON file.
//!
//! Shorthands: `cos2d:N`, `expnorm`, `epsilon1d[:EPS]`, `rational-indicator`,
//! `periodic-sin2[:W]`, `quadratic` and `quadratic+const`. The last two draw a
//! random Hermitian operator of dimension `--dim` from `--seed`.

use std::path::Path;

use framelab::gleason::{GleasonFn, GleasonSpec};
use framelab::linalg::{Field, Matrix};
use framelab::rng::{random_hermitian, seeded};

use crate::error::CliError;

pub struct SpecContext {
    pub dim: usize,
    pub field: Field,
    pub constant: f64,
    pub seed: u64,
}

pub fn parse_field(s: &str) -> Result<Field, CliError> {
    match s {
        "R" | "r" | "real" => Ok(Field::Real),
        "C" | "c" | "complex" => Ok(Field::Complex),
        _ => Err(CliError::Input(format!("unknown field '{s}', expected R or C"))),
    }
}

fn random_operator(ctx: &SpecContext) -> Matrix {
    random_hermitian(&mut seeded(ctx.seed), ctx.dim, ctx.field)
}

fn parse_number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.parse().map_err(|_| CliError::Input(format!("bad {what} '{s}'")))
}

pub fn resolve_spec(raw: &str, ctx: &SpecContext) -> Result<GleasonSpec, CliError> {
    let trimmed = raw.trim();
    if trimmed.starts_with('{') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    if Path::new(trimmed).is_file() {
        return Ok(serde_json::from_str(&std::fs::read_to_string(trimmed)?)?);
    }
    let (name, arg) = match trimmed.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (trimmed, None),
    };
    let spec = match (name, arg) {
        ("cos2d", Some(n)) => GleasonSpec::Cos2d {
            n: parse_number(n, "n")?,
        },
        ("cos2d", None) => return Err(CliError::Input("cos2d needs n, e.g. cos2d:6".into())),
        ("expnorm", None) => GleasonSpec::Expnorm {
            dim: ctx.dim,
            field: ctx.field,
        },
        ("epsilon1d", eps) => GleasonSpec::Epsilon1d {
            eps: eps.map_or(Ok(0.2), |e| parse_number(e, "epsilon"))?,
            field: ctx.field,
        },
        ("rational-indicator" | "rational_indicator", None) => GleasonSpec::RationalIndicator,
        ("periodic-sin2" | "periodic_sin2", w) => GleasonSpec::PeriodicSin2 {
            weight: w.map_or(Ok(1.0), |w| parse_number(w, "weight"))?,
        },
        ("quadratic", None) => GleasonSpec::Quadratic {
            a: random_operator(ctx),
            field: ctx.field,
        },
        ("quadratic+const", None) => GleasonSpec::QuadraticPlusConst {
            a: random_operator(ctx),
            c: ctx.constant,
            field: ctx.field,
        },
        _ => return Err(CliError::Input(format!("unknown gleason spec '{raw}'"))),
    };
    Ok(spec)
}

pub fn build(raw: &str, ctx: &SpecContext) -> Result<(GleasonSpec, GleasonFn), CliError> {
    let spec = resolve_spec(raw, ctx)?;
    let g = spec.build()?;
    Ok((spec, g))
}
