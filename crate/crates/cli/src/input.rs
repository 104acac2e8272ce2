//! JSON request files and their validation into library inputs.

use std::str::FromStr;

use gitstab::forms::HyperplaneForm;
use gitstab::{ExponentVector, HypersurfaceForm, ProjectivePoint, Rational, TuplePoint};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneSpec {
    pub coeffs: Vec<String>,
}

/// The request file as written by the user; echoed verbatim in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestFile {
    pub n: usize,
    pub degree: u32,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hyperplanes: Vec<HyperplaneSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_points: Vec<Vec<String>>,
    /// Points for `lct`; base points are used when absent.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<String>>,
}

/// A validated request.
#[derive(Debug, Clone)]
pub struct Problem {
    pub request: RequestFile,
    pub tuple: TuplePoint,
    pub hyperplanes: Vec<HyperplaneForm>,
    pub t: Option<Vec<Rational>>,
    pub base_points: Vec<ProjectivePoint>,
    pub points: Vec<ProjectivePoint>,
}

fn invalid(field: impl Into<String>, message: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {message}", field.into()))
}

/// Exact rational from `"p"` or `"p/q"`; decimals and exponents are rejected.
pub fn parse_rational(s: &str, field: &str) -> Result<Rational, CliError> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit() || matches!(c, '-' | '+' | '/')) {
        return Err(invalid(field, format!("{s:?} is not an exact rational \"p/q\"")));
    }
    Rational::from_str(s).map_err(|e| invalid(field, format!("{s:?}: {e}")))
}

fn parse_vector(values: &[String], len: usize, field: &str) -> Result<Vec<Rational>, CliError> {
    if values.len() != len {
        return Err(invalid(field, format!("expected {len} entries, got {}", values.len())));
    }
    values.iter().enumerate().map(|(i, s)| parse_rational(s, &format!("{field}[{i}]"))).collect()
}

fn parse_point(values: &[String], n: usize, field: &str) -> Result<ProjectivePoint, CliError> {
    ProjectivePoint::new(parse_vector(values, n + 1, field)?).map_err(|e| invalid(field, e))
}

pub fn parse_request(text: &str) -> Result<Problem, CliError> {
    let request: RequestFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("request: {e}")))?;
    validate(request)
}

pub fn validate(request: RequestFile) -> Result<Problem, CliError> {
    let n = request.n;
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if request.degree == 0 {
        return Err(invalid("degree", "must be at least 1"));
    }
    if request.generators.is_empty() {
        return Err(invalid("generators", "at least one generator is required"));
    }
    let mut forms = Vec::with_capacity(request.generators.len());
    for (g, spec) in request.generators.iter().enumerate() {
        let mut terms = Vec::with_capacity(spec.terms.len());
        for (i, term) in spec.terms.iter().enumerate() {
            let field = format!("generators[{g}].terms[{i}]");
            if term.exp.len() != n + 1 {
                return Err(invalid(
                    format!("{field}.exp"),
                    format!("expected {} exponents, got {}", n + 1, term.exp.len()),
                ));
            }
            let e = ExponentVector::with_degree(term.exp.clone(), request.degree)
                .map_err(|e| invalid(format!("{field}.exp"), e))?;
            terms.push((e, parse_rational(&term.coeff, &format!("{field}.coeff"))?));
        }
        let f = HypersurfaceForm::new(n, request.degree, terms).map_err(|e| invalid(format!("generators[{g}]"), e))?;
        forms.push(f);
    }
    let tuple = TuplePoint::new(forms).map_err(|e| invalid("generators", e))?;

    let hyperplanes = request
        .hyperplanes
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let field = format!("hyperplanes[{i}].coeffs");
            HyperplaneForm::new(parse_vector(&h.coeffs, n + 1, &field)?).map_err(|e| invalid(field, e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if !hyperplanes.is_empty() {
        gitstab::VgitConfig::validate_hyperplanes(&hyperplanes).map_err(|e| invalid("hyperplanes", e))?;
    }

    let t = match &request.t {
        None => None,
        Some(values) => {
            let t = parse_vector(values, hyperplanes.len(), "t")?;
            if t.is_empty() {
                return Err(invalid("t", "given without hyperplanes"));
            }
            if let Some(i) = t.iter().position(|x| *x <= Rational::from_integer(0.into())) {
                return Err(invalid(format!("t[{i}]"), "must be positive"));
            }
            Some(t)
        }
    };

    let mut base_points = Vec::with_capacity(request.base_points.len());
    for (i, p) in request.base_points.iter().enumerate() {
        let field = format!("base_points[{i}]");
        let p = parse_point(p, n, &field)?;
        if !tuple.is_base_point(&p).map_err(|e| invalid(&field, e))? {
            return Err(invalid(field, "not a base point of the tuple"));
        }
        base_points.push(p);
    }
    let points = request
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| parse_point(p, n, &format!("points[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Problem { request, tuple, hyperplanes, t, base_points, points })
}

/// `a/b:c/d` with `0 <= a < c`.
pub fn parse_range(s: &str) -> Result<(Rational, Rational), CliError> {
    let (a, b) = s.split_once(':').ok_or_else(|| invalid("--t-range", format!("{s:?} is not of the form a:b")))?;
    let (lo, hi) = (parse_rational(a, "--t-range")?, parse_rational(b, "--t-range")?);
    if lo < Rational::from_integer(0.into()) || lo >= hi {
        return Err(invalid("--t-range", format!("need 0 <= {lo} < {hi}")));
    }
    Ok((lo, hi))
}
