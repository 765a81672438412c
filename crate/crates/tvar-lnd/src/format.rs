//! JSON files for polyhedral divisors and colored divisors.
//!
//! ```json
//! {"rank": 2, "sigma": [],
//!  "coefficients": [{"point": 0, "vertices": [[0,0],[0,1],["-1/4",-1]], "extra_rays": []}]}
//! ```
//!
//! Rationals are written as strings `"p"` or `"p/q"`; plain integers are also read.
//! `sigma` lists cone generators (empty for the zero cone). `extra_rays` adds rays to
//! one coefficient's tail cone, which makes the divisor improper unless they already
//! lie in `sigma`. A colored divisor adds
//! `"marked_point"` and `"chosen": [{"point", "vertex"}]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tvar_core::pdivisor::{ColoredDivisor, ColoringError, PolyDivisor, ProperIssue};
use tvar_core::{Cone, GeometryError, Polyhedron, Rational};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("invalid rational {0:?}")]
    Number(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("divisor is not proper: {0}")]
    NotProper(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json appends the location, which is reported separately
        let text = e.to_string();
        let msg = text.rsplit_once(" at line ").map_or(text.as_str(), |(m, _)| m).to_string();
        FormatError::Json { line: e.line(), column: e.column(), msg }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn to_rational(&self) -> Result<Rational, FormatError> {
        match self {
            Num::Int(i) => Ok(Rational::from(*i)),
            Num::Text(s) => s.trim().parse().map_err(|_| FormatError::Number(s.clone())),
        }
    }

    /// Output always uses the string form `"p"` or `"p/q"`; input also takes integers.
    pub fn from_rational(q: Rational) -> Num {
        Num::Text(q.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub point: Num,
    pub vertices: Vec<Vec<Num>>,
    #[serde(default)]
    pub extra_rays: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorFile {
    pub rank: usize,
    #[serde(default)]
    pub sigma: Vec<Vec<i64>>,
    pub coefficients: Vec<CoefficientFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChosenFile {
    pub point: Num,
    pub vertex: Vec<Num>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredFile {
    pub rank: usize,
    #[serde(default)]
    pub sigma: Vec<Vec<i64>>,
    pub coefficients: Vec<CoefficientFile>,
    pub marked_point: Num,
    pub chosen: Vec<ChosenFile>,
}

fn vector(v: &[Num], rank: usize) -> Result<Vec<Rational>, FormatError> {
    if v.len() != rank {
        return Err(FormatError::Shape(format!("vector of length {} in rank {}", v.len(), rank)));
    }
    v.iter().map(Num::to_rational).collect()
}

fn cone(rank: usize, gens: &[Vec<i64>]) -> Result<Cone, FormatError> {
    if let Some(g) = gens.iter().find(|g| g.len() != rank) {
        return Err(FormatError::Shape(format!("ray of length {} in rank {}", g.len(), rank)));
    }
    Ok(if gens.is_empty() { Cone::zero(rank) } else { Cone::from_lattice(rank, gens)? })
}

impl DivisorFile {
    pub fn to_divisor(&self) -> Result<PolyDivisor, FormatError> {
        let sigma = cone(self.rank, &self.sigma)?;
        let mut coeffs = BTreeMap::new();
        for c in &self.coefficients {
            let z = c.point.to_rational()?;
            if c.vertices.is_empty() {
                return Err(FormatError::Shape(format!("coefficient at {} has no vertices", z)));
            }
            let pts = c.vertices.iter().map(|v| vector(v, self.rank)).collect::<Result<Vec<_>, _>>()?;
            let tail = if c.extra_rays.is_empty() {
                sigma.clone()
            } else {
                let mut all = self.sigma.clone();
                all.extend(c.extra_rays.iter().cloned());
                cone(self.rank, &all)?
            };
            if coeffs.insert(z, Polyhedron::new(pts, tail)?).is_some() {
                return Err(FormatError::Shape(format!("point {} listed twice", z)));
            }
        }
        let d = PolyDivisor::new(sigma, coeffs).map_err(|e| FormatError::Shape(e.to_string()))?;
        let report = d.check_proper();
        if !report.is_valid() {
            let msgs: Vec<String> = report
                .issues
                .iter()
                .map(|i| match i {
                    ProperIssue::SigmaNotPointed => "sigma is not pointed".to_string(),
                    ProperIssue::RecessionMismatch { point } => format!("tail cone at {} differs from sigma", point),
                })
                .collect();
            return Err(FormatError::NotProper(msgs.join("; ")));
        }
        Ok(d)
    }

    pub fn from_divisor(d: &PolyDivisor) -> DivisorFile {
        DivisorFile {
            rank: d.rank(),
            sigma: d.sigma().rays().to_vec(),
            coefficients: d
                .coefficients()
                .iter()
                .map(|(&z, p)| CoefficientFile {
                    point: Num::from_rational(z),
                    vertices: p.vertices().iter().map(|v| v.iter().map(|&x| Num::from_rational(x)).collect()).collect(),
                    extra_rays: Vec::new(),
                })
                .collect(),
        }
    }
}

impl ColoredFile {
    pub fn to_colored(&self) -> Result<ColoredDivisor, FormatError> {
        let base = DivisorFile { rank: self.rank, sigma: self.sigma.clone(), coefficients: self.coefficients.clone() }
            .to_divisor()?;
        let mut chosen = BTreeMap::new();
        for c in &self.chosen {
            chosen.insert(c.point.to_rational()?, vector(&c.vertex, self.rank)?);
        }
        Ok(ColoredDivisor::new(base, chosen, self.marked_point.to_rational()?)?)
    }

    pub fn from_colored(cd: &ColoredDivisor) -> ColoredFile {
        let f = DivisorFile::from_divisor(cd.base());
        ColoredFile {
            rank: f.rank,
            sigma: f.sigma,
            coefficients: f.coefficients,
            marked_point: Num::from_rational(cd.marked_point()),
            chosen: cd
                .chosen()
                .iter()
                .map(|(&z, v)| ChosenFile { point: Num::from_rational(z), vertex: v.iter().map(|&x| Num::from_rational(x)).collect() })
                .collect(),
        }
    }
}

pub fn parse_divisor(text: &str) -> Result<PolyDivisor, FormatError> {
    serde_json::from_str::<DivisorFile>(text)?.to_divisor()
}

pub fn parse_colored(text: &str) -> Result<ColoredDivisor, FormatError> {
    serde_json::from_str::<ColoredFile>(text)?.to_colored()
}

pub fn divisor_to_json(d: &PolyDivisor) -> String {
    serde_json::to_string_pretty(&DivisorFile::from_divisor(d)).expect("serializable")
}

pub fn colored_to_json(cd: &ColoredDivisor) -> String {
    serde_json::to_string_pretty(&ColoredFile::from_colored(cd)).expect("serializable")
}
