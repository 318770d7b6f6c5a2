//! Problem files and flag strings, parsed into domain objects.

use std::fs;

use gkz::scalar::parse_rational;
use gkz::semigroup::Parameter;
use gkz::umbrella::WeightSpec;
use gkz::{BigInt, IntMatrix, Rational};
use serde_json::Value;

/// Weight as written by the user, resolved once the column count is known.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightInput {
    F,
    LOfS(Rational),
    Explicit { lx: Vec<Rational>, ld: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum BetaInput {
    Generic,
    Explicit(Vec<Rational>),
    /// `b` with a 1-based face.
    Stratum { b: Vec<BigInt>, face: Vec<usize> },
}

#[derive(Clone, Debug, Default)]
pub struct Problem {
    pub matrix: Option<IntMatrix>,
    pub weight: Option<WeightInput>,
    pub betas: Vec<BetaInput>,
    /// 1-based column indices.
    pub tau: Option<Vec<usize>>,
    pub hyperplane: Option<usize>,
    pub order: Option<Rational>,
    pub bound: Option<BigInt>,
}

pub type ParseResult<T> = std::result::Result<T, String>;

fn rational(s: &str) -> ParseResult<Rational> {
    parse_rational(s.trim()).ok_or_else(|| format!("not a rational number: {:?}", s))
}

fn rational_value(v: &Value) -> ParseResult<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| Rational::from_integer(x.into()))
            .ok_or_else(|| format!("numbers must be integers or \"p/q\" strings, got {}", n)),
        Value::String(s) => rational(s),
        other => Err(format!("expected a rational, got {}", other)),
    }
}

fn integer_value(v: &Value) -> ParseResult<BigInt> {
    let r = rational_value(v)?;
    if !r.is_integer() {
        return Err(format!("expected an integer, got {}", r));
    }
    Ok(r.to_integer())
}

fn list<T>(v: &Value, f: impl Fn(&Value) -> ParseResult<T>) -> ParseResult<Vec<T>> {
    v.as_array().ok_or_else(|| format!("expected a list, got {}", v))?.iter().map(f).collect()
}

fn split_items(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect()
}

pub fn parse_matrix(s: &str) -> ParseResult<IntMatrix> {
    let rows: Vec<Vec<BigInt>> = s
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            split_items(r)
                .into_iter()
                .map(|t| t.parse::<BigInt>().map_err(|_| format!("matrix entry is not an integer: {:?}", t)))
                .collect()
        })
        .collect::<ParseResult<_>>()?;
    matrix_from_rows(rows)
}

fn matrix_from_rows(rows: Vec<Vec<BigInt>>) -> ParseResult<IntMatrix> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err("matrix is empty".into());
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("matrix rows have different lengths".into());
    }
    IntMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

pub fn parse_weight(s: &str) -> ParseResult<WeightInput> {
    let t = s.trim();
    if t == "F" {
        return Ok(WeightInput::F);
    }
    if let Some(inner) = t.strip_prefix("L(").and_then(|r| r.strip_suffix(')')) {
        return Ok(WeightInput::LOfS(rational(inner)?));
    }
    let mut lx = None;
    let mut ld = None;
    for part in t.split(';').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("weight part {:?} is not key=values", part))?;
        let vals: Vec<Rational> = split_items(v).into_iter().map(rational).collect::<ParseResult<_>>()?;
        match k.trim() {
            "lx" => lx = Some(vals),
            "ld" => ld = Some(vals),
            other => return Err(format!("unknown weight key {:?}; use lx and ld", other)),
        }
    }
    match (lx, ld) {
        (Some(lx), Some(ld)) => Ok(WeightInput::Explicit { lx, ld }),
        _ => Err(format!("weight {:?} must be F, L(s), or lx=...;ld=...", s)),
    }
}

fn weight_value(v: &Value) -> ParseResult<WeightInput> {
    match v {
        Value::String(s) => parse_weight(s),
        Value::Object(m) => {
            let lx = m.get("lx").ok_or("weight object needs lx")?;
            let ld = m.get("ld").ok_or("weight object needs ld")?;
            Ok(WeightInput::Explicit { lx: list(lx, rational_value)?, ld: list(ld, rational_value)? })
        }
        other => Err(format!("unrecognised weight {}", other)),
    }
}

fn indices(s: &str) -> ParseResult<Vec<usize>> {
    let t = s.trim().trim_start_matches('{').trim_end_matches('}');
    if t.trim() == "empty" {
        return Ok(Vec::new());
    }
    split_items(t)
        .into_iter()
        .map(|x| match x.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(format!("column indices are 1-based positive integers, got {:?}", x)),
        })
        .collect()
}

pub fn parse_tau(s: &str) -> ParseResult<Vec<usize>> {
    indices(s)
}

/// `generic`, a list of rationals, or `stratum:b=..;face=..`.
pub fn parse_beta(s: &str) -> ParseResult<BetaInput> {
    let t = s.trim();
    if t == "generic" {
        return Ok(BetaInput::Generic);
    }
    if let Some(rest) = t.strip_prefix("stratum:") {
        let mut b = None;
        let mut face = None;
        for part in rest.split(';') {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("stratum part {:?} is not key=values", part))?;
            match k.trim() {
                "b" => {
                    b = Some(
                        split_items(v)
                            .into_iter()
                            .map(|x| x.parse::<BigInt>().map_err(|_| format!("stratum base must be integral, got {:?}", x)))
                            .collect::<ParseResult<Vec<_>>>()?,
                    )
                }
                "face" => face = Some(indices(v)?),
                other => return Err(format!("unknown stratum key {:?}", other)),
            }
        }
        return Ok(BetaInput::Stratum { b: b.ok_or("stratum needs b")?, face: face.unwrap_or_default() });
    }
    Ok(BetaInput::Explicit(split_items(t).into_iter().map(rational).collect::<ParseResult<_>>()?))
}

fn beta_value(v: &Value) -> ParseResult<BetaInput> {
    match v {
        Value::String(s) => parse_beta(s),
        Value::Array(_) => Ok(BetaInput::Explicit(list(v, rational_value)?)),
        Value::Object(m) => {
            let st = m.get("stratum").ok_or("beta object must have a \"stratum\" key")?;
            let b = list(st.get("b").ok_or("stratum needs b")?, integer_value)?;
            let face = match st.get("face") {
                Some(f) => list(f, |x| {
                    x.as_u64().filter(|&k| k >= 1).map(|k| k as usize).ok_or_else(|| format!("bad face index {}", x))
                })?,
                None => Vec::new(),
            };
            Ok(BetaInput::Stratum { b, face })
        }
        other => Err(format!("unrecognised beta {}", other)),
    }
}

pub fn read_problem(path: &str) -> ParseResult<Problem> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path, e))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{} is not valid JSON: {}", path, e))?;
    let obj = v.as_object().ok_or("problem file must be a JSON object")?;
    let mut p = Problem::default();
    if let Some(m) = obj.get("matrix") {
        let rows = list(m, |r| list(r, integer_value))?;
        p.matrix = Some(matrix_from_rows(rows)?);
    }
    if let Some(w) = obj.get("weight") {
        p.weight = Some(weight_value(w)?);
    }
    if let Some(b) = obj.get("beta") {
        p.betas.push(beta_value(b)?);
    }
    if let Some(bs) = obj.get("seeds") {
        p.betas.extend(list(bs, beta_value)?);
    }
    if let Some(t) = obj.get("tau") {
        p.tau = Some(list(t, |x| {
            x.as_u64().filter(|&k| k >= 1).map(|k| k as usize).ok_or_else(|| format!("bad tau index {}", x))
        })?);
    }
    if let Some(j) = obj.get("hyperplane") {
        p.hyperplane = Some(j.as_u64().filter(|&k| k >= 1).ok_or("hyperplane must be a positive integer")? as usize);
    }
    if let Some(s) = obj.get("order") {
        p.order = Some(rational_value(s)?);
    }
    if let Some(b) = obj.get("bound") {
        p.bound = Some(integer_value(b)?);
    }
    Ok(p)
}

impl WeightInput {
    pub fn resolve(&self, n: usize, hyperplane: Option<usize>) -> ParseResult<WeightSpec<Rational>> {
        match self {
            WeightInput::F => Ok(WeightSpec::f(n)),
            WeightInput::LOfS(s) => {
                let j = hyperplane.ok_or("weight L(s) needs --hyperplane J")?;
                WeightSpec::l_of_s(n, j - 1, s.clone()).map_err(|e| e.to_string())
            }
            WeightInput::Explicit { lx, ld } => {
                if lx.len() != n || ld.len() != n {
                    return Err(format!("weight vectors must have {} entries", n));
                }
                WeightSpec::new(lx.clone(), ld.clone()).map_err(|e| e.to_string())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            WeightInput::F => "F".into(),
            WeightInput::LOfS(s) => format!("L({})", s),
            WeightInput::Explicit { lx, ld } => {
                let j = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                format!("lx={};ld={}", j(lx), j(ld))
            }
        }
    }
}

impl BetaInput {
    pub fn resolve(&self, d: usize, n: usize) -> ParseResult<Parameter> {
        let p = match self {
            BetaInput::Generic => Parameter::generic(d, n),
            BetaInput::Explicit(v) => Parameter::Explicit(v.clone()),
            BetaInput::Stratum { b, face } => {
                if face.iter().any(|&k| k > n) {
                    return Err(format!("stratum face index out of range 1..{}", n));
                }
                let mut f: Vec<usize> = face.iter().map(|k| k - 1).collect();
                f.sort_unstable();
                f.dedup();
                Parameter::Stratum { b: b.clone(), face: f }
            }
        };
        if p.dim() != d {
            return Err(format!("beta has {} entries but the matrix has {} rows", p.dim(), d));
        }
        Ok(p)
    }
}
