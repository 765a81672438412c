//! Text form of a single derivation, as printed by `Display for Derivation`:
//! `vertical:e=[a,b];phi=<expr>` and `horizontal:z0=p/q;vertices={p/q:[..],...};e=[a,b]`.

use std::collections::BTreeMap;

use tvar_core::lnd::Derivation;
use tvar_core::pdivisor::{ColoredDivisor, PolyDivisor};
use tvar_core::roots::{is_coherent_pair, is_demazure_root};
use tvar_core::{RatFun, Rational};

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("malformed derivation spec {spec:?}: {msg}")]
    Syntax { spec: String, msg: String },
    #[error("{0:?} is not a Demazure root of sigma")]
    NotARoot(Vec<i64>),
    #[error("invalid derivation: {0}")]
    Invalid(String),
}

fn syntax(spec: &str, msg: impl Into<String>) -> SpecError {
    SpecError::Syntax { spec: spec.to_string(), msg: msg.into() }
}

/// `key=value` fields separated by `;`, in order.
fn fields<'a>(spec: &'a str, body: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, SpecError> {
    let parts: Vec<&str> = body.split(';').map(str::trim).collect();
    if parts.len() != keys.len() {
        return Err(syntax(spec, format!("expected fields {}", keys.join(";"))));
    }
    parts
        .iter()
        .zip(keys)
        .map(|(p, k)| {
            p.strip_prefix(k)
                .and_then(|r| r.trim_start().strip_prefix('='))
                .map(str::trim)
                .ok_or_else(|| syntax(spec, format!("expected {}=...", k)))
        })
        .collect()
}

fn bracketed<'a>(spec: &str, s: &'a str) -> Result<&'a str, SpecError> {
    s.trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| syntax(spec, format!("expected [..], found {:?}", s)))
}

fn int_list(spec: &str, s: &str) -> Result<Vec<i64>, SpecError> {
    let inner = bracketed(spec, s)?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|x| x.trim().parse().map_err(|_| syntax(spec, format!("bad integer {:?}", x)))).collect()
}

fn rational(spec: &str, s: &str) -> Result<Rational, SpecError> {
    s.trim().parse().map_err(|_| syntax(spec, format!("bad rational {:?}", s)))
}

fn rational_list(spec: &str, s: &str) -> Result<Vec<Rational>, SpecError> {
    let inner = bracketed(spec, s)?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|x| rational(spec, x)).collect()
}

/// `{z:[..],z:[..]}`.
fn vertex_map(spec: &str, s: &str) -> Result<BTreeMap<Rational, Vec<Rational>>, SpecError> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| syntax(spec, "vertices must be {z:[..],...}"))?;
    let mut out = BTreeMap::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let (key, after) = rest.split_once(':').ok_or_else(|| syntax(spec, "expected z:[..]"))?;
        let close = after.find(']').ok_or_else(|| syntax(spec, "unclosed ["))?;
        let z = rational(spec, key)?;
        if out.insert(z, rational_list(spec, &after[..=close])?).is_some() {
            return Err(syntax(spec, format!("point {} listed twice", z)));
        }
        rest = after[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        } else if !rest.is_empty() {
            return Err(syntax(spec, "expected ',' between vertices"));
        }
    }
    Ok(out)
}

/// Parses a derivation spec against the divisor it lives on.
pub fn parse_derivation(d: &PolyDivisor, spec: &str) -> Result<Derivation, SpecError> {
    let spec = spec.trim();
    if let Some(body) = spec.strip_prefix("vertical:") {
        let f = fields(spec, body, &["e", "phi"])?;
        let e = int_list(spec, f[0])?;
        if e.len() != d.rank() {
            return Err(syntax(spec, format!("e has length {}, rank is {}", e.len(), d.rank())));
        }
        let phi: RatFun = f[1].parse().map_err(|err| syntax(spec, format!("phi: {}", err)))?;
        let root = is_demazure_root(d.sigma(), &e)
            .map_err(|err| SpecError::Invalid(err.to_string()))?
            .ok_or_else(|| SpecError::NotARoot(e.clone()))?;
        Derivation::vertical(d, root, phi).map_err(|err| SpecError::Invalid(err.to_string()))
    } else if let Some(body) = spec.strip_prefix("horizontal:") {
        let f = fields(spec, body, &["z0", "vertices", "e"])?;
        let z0 = rational(spec, f[0])?;
        let chosen = vertex_map(spec, f[1])?;
        let e = int_list(spec, f[2])?;
        let cd = ColoredDivisor::new(d.clone(), chosen, z0).map_err(|err| SpecError::Invalid(err.to_string()))?;
        let h = is_coherent_pair(&cd, &e).map_err(|err| SpecError::Invalid(err.to_string()))?;
        Ok(Derivation::horizontal(h))
    } else {
        Err(syntax(spec, "expected vertical: or horizontal:"))
    }
}
