//! The two-parameter additive group action `exp(lambda D1) exp(mu D2)` of a commuting
//! pair, written in terms of the algebra generators.

use std::collections::BTreeMap;

use tvar_core::lnd::{exp_series, Derivation, LndError};
use tvar_core::pdivisor::{render_polynomial, Generator, PolyDivisor, Relation};
use tvar_core::{Rational, SymExpr};

#[derive(Debug, thiserror::Error)]
pub enum ActionError {
    #[error(transparent)]
    Nilpotency(#[from] LndError),
    #[error("coefficient of {params} in the image of {generator} is not a polynomial in the generators of degree <= {deg_bound}")]
    NotExpressible { generator: String, params: String, deg_bound: u32 },
}

/// A polynomial in the generators, as `(coefficient, exponent vector)` terms.
pub type GenPoly = Vec<(Rational, Vec<u32>)>;

/// Image of one generator: `sum lambda^k mu^j * P_{k,j}` keyed by `(k, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionImage {
    pub generator: usize,
    pub terms: BTreeMap<(u32, u32), GenPoly>,
}

/// Coefficients `D1^k D2^j x / (k! j!)` with their `(k, j)`.
pub fn double_series(d1: &Derivation, d2: &Derivation, x: &SymExpr, cap: u32) -> Result<Vec<((u32, u32), SymExpr)>, LndError> {
    let mut out = Vec::new();
    for (j, y) in exp_series(d2, x, cap)?.into_iter().enumerate() {
        for (k, z) in exp_series(d1, &y, cap)?.into_iter().enumerate() {
            out.push(((k as u32, j as u32), z));
        }
    }
    Ok(out)
}

/// The action on each generator with every coefficient written in the generators.
pub fn action(
    d: &PolyDivisor,
    d1: &Derivation,
    d2: &Derivation,
    gens: &[Generator],
    relations: &[Relation],
    names: &[&str],
    deg_bound: u32,
    cap: u32,
) -> Result<Vec<ActionImage>, ActionError> {
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut terms = BTreeMap::new();
        for (kj, c) in double_series(d1, d2, &g.expr, cap)? {
            let p = d.express(gens, relations, &c, deg_bound).ok_or_else(|| ActionError::NotExpressible {
                generator: names[i].to_string(),
                params: param_monomial(kj, "lambda", "mu"),
                deg_bound,
            })?;
            if !p.is_empty() {
                terms.insert(kj, p);
            }
        }
        out.push(ActionImage { generator: i, terms });
    }
    Ok(out)
}

fn param_monomial((k, j): (u32, u32), lam: &str, mu: &str) -> String {
    let pw = |n: &str, e: u32| match e {
        0 => None,
        1 => Some(n.to_string()),
        _ => Some(format!("{}^{}", n, e)),
    };
    let parts: Vec<String> = [pw(lam, k), pw(mu, j)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Display order: by total parameter degree, then by the power of the first parameter.
fn ordered(img: &ActionImage) -> Vec<(&(u32, u32), &GenPoly)> {
    let mut v: Vec<_> = img.terms.iter().collect();
    v.sort_by_key(|((k, j), _)| (k + j, *k, *j));
    v
}

/// `x4 -> x4 - 4*mu*x1^2*x2^3*x3 - lambda*(2*x1*x2^4 + 1) ...` with symbolic parameters.
pub fn render_symbolic(img: &ActionImage, names: &[&str], params: (&str, &str)) -> String {
    let mut s = String::new();
    for (kj, p) in ordered(img) {
        let pm = param_monomial(*kj, params.0, params.1);
        let poly = render_polynomial(p, names);
        let (neg, body) = if *kj == (0, 0) {
            match poly.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, poly),
            }
        } else if p.len() == 1 {
            let (neg, rest) = match poly.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, poly),
            };
            let body = if rest == "1" {
                pm
            } else if let Some((c, mono)) = leading_constant(&rest) {
                format!("{}*{}*{}", c, pm, mono)
            } else {
                format!("{}*{}", pm, rest)
            };
            (neg, body)
        } else {
            (false, format!("{}*({})", pm, poly))
        };
        if s.is_empty() {
            s = if neg { format!("-{}", body) } else { body };
        } else {
            s.push_str(if neg { " - " } else { " + " });
            s.push_str(&body);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    format!("{} -> {}", names[img.generator], s)
}

/// Splits `3/2*x1` into `("3/2", "x1")`; a bare constant or monomial gives `None`.
fn leading_constant(term: &str) -> Option<(&str, &str)> {
    let (c, rest) = term.split_once('*')?;
    c.parse::<Rational>().ok().map(|_| (c, rest))
}

/// The image with numeric parameter values substituted, as one polynomial.
pub fn evaluate(img: &ActionImage, lambda: Rational, mu: Rational) -> GenPoly {
    let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (&(k, j), p) in &img.terms {
        let w = lambda.pow(k) * mu.pow(j);
        for (c, e) in p {
            *acc.entry(e.clone()).or_insert(Rational::ZERO) += *c * w;
        }
    }
    let mut out: GenPoly = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (c, e)).collect();
    out.sort_by(|a, b| b.1.iter().sum::<u32>().cmp(&a.1.iter().sum::<u32>()).then_with(|| b.1.cmp(&a.1)));
    out
}

pub fn render_numeric(img: &ActionImage, names: &[&str], lambda: Rational, mu: Rational) -> String {
    format!("{} -> {}", names[img.generator], render_polynomial(&evaluate(img, lambda, mu), names))
}
