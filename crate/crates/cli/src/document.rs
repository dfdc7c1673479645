//! INSP-JSON v1 instance documents and the result documents the CLI prints.
//!
//! Lengths and costs travel as strings (`"3"`, `"0.5"`, `"7/3"`) so no value
//! ever passes through floating point.

use std::fmt;

use insp_core::{Capacity, Instance, ModelError, Rational};
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "insp-json/v1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("unsupported version `{0}`, expected `{FORMAT_VERSION}`")]
    Version(String),
    #[error("bad length `{text}` on edge {u}-{v}: {reason}")]
    Length {
        u: String,
        v: String,
        text: String,
        reason: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthValue {
    Integer(i64),
    Text(String),
}

impl LengthValue {
    pub fn from_rational(q: &Rational) -> Self {
        LengthValue::Text(format_rational(q))
    }
}

impl fmt::Display for LengthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthValue::Integer(n) => write!(f, "{n}"),
            LengthValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: String,
    pub v: String,
    pub length: LengthValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeEntry {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequirementEntry {
    pub s: String,
    pub t: String,
    pub r: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub version: String,
    pub terminals: Vec<String>,
    pub tree: TreeEntry,
    #[serde(default)]
    pub requirements: Vec<RequirementEntry>,
}

/// Parses `"3"`, `"-2"`, `"0.25"` or `"7/3"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let int = |s: &str| {
        if s.is_empty()
            || !s
                .trim_start_matches(['-', '+'])
                .chars()
                .all(|c| c.is_ascii_digit())
        {
            return Err(format!("`{s}` is not an integer"));
        }
        s.parse::<i128>().map_err(|e| e.to_string())
    };
    if let Some((num, den)) = text.split_once('/') {
        let den = int(den)?;
        if den == 0 {
            return Err("zero denominator".into());
        }
        return Ok(Rational::new(int(num)?, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 30 {
            return Err(format!("`{text}` is not a decimal"));
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" {
            0
        } else {
            int(whole)?
        };
        let scale = 10i128.pow(frac.len() as u32);
        let frac = Rational::new(int(frac)?, scale);
        let magnitude = Rational::from_integer(whole.abs()) + frac;
        return Ok(if negative { -magnitude } else { magnitude });
    }
    Ok(Rational::from_integer(int(text)?))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn length_of(edge: &EdgeEntry) -> Result<Rational, DocumentError> {
    match &edge.length {
        LengthValue::Integer(n) => Ok(Rational::from_integer(*n as i128)),
        LengthValue::Text(s) => parse_rational(s).map_err(|reason| DocumentError::Length {
            u: edge.u.clone(),
            v: edge.v.clone(),
            text: s.clone(),
            reason,
        }),
    }
}

impl InstanceDocument {
    pub fn to_instance(&self) -> Result<Instance, DocumentError> {
        if self.version != FORMAT_VERSION {
            return Err(DocumentError::Version(self.version.clone()));
        }
        let edges = self
            .tree
            .edges
            .iter()
            .map(|e| Ok((e.u.as_str(), e.v.as_str(), length_of(e)?)))
            .collect::<Result<Vec<_>, DocumentError>>()?;
        let terminals: Vec<&str> = self.terminals.iter().map(String::as_str).collect();
        let nodes: Vec<&str> = self.tree.nodes.iter().map(String::as_str).collect();
        let requirements: Vec<(&str, &str, Capacity)> = self
            .requirements
            .iter()
            .map(|r| (r.s.as_str(), r.t.as_str(), r.r))
            .collect();
        Ok(Instance::build(&terminals, &nodes, &edges, &requirements)?)
    }

    /// Canonical document for a validated instance: pruned tree, positive
    /// requirements only.
    pub fn from_instance(instance: &Instance) -> Self {
        let tree = instance.tree();
        Self {
            version: FORMAT_VERSION.to_string(),
            terminals: instance
                .terminals()
                .iter()
                .map(|&t| tree.name(t).to_string())
                .collect(),
            tree: TreeEntry {
                nodes: tree.names().to_vec(),
                edges: tree
                    .edges()
                    .iter()
                    .map(|e| EdgeEntry {
                        u: tree.name(e.u).to_string(),
                        v: tree.name(e.v).to_string(),
                        length: LengthValue::from_rational(&e.length),
                    })
                    .collect(),
            },
            requirements: instance
                .requirements()
                .iter()
                .map(|(s, t, r)| RequirementEntry {
                    s: tree.name(s).to_string(),
                    t: tree.name(t).to_string(),
                    r,
                })
                .collect(),
        }
    }
}

fn from_json<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T, DocumentError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| DocumentError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn parse_document(text: &str) -> Result<InstanceDocument, DocumentError> {
    from_json(text)
}

pub fn parse_instance(text: &str) -> Result<Instance, DocumentError> {
    parse_document(text)?.to_instance()
}

pub fn print_instance(instance: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceDocument::from_instance(instance))
        .expect("documents serialize")
}

/// SHA-256 of the canonical compact serialization.
pub fn instance_hash(instance: &Instance) -> String {
    let canonical = serde_json::to_string(&InstanceDocument::from_instance(instance))
        .expect("documents serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationEntry {
    pub s: String,
    pub t: String,
    pub y: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityEntry {
    pub u: String,
    pub v: String,
    pub capacity: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinEdgeEntry {
    pub u: String,
    pub v: String,
    pub length: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinEntry {
    pub cost: String,
    pub edges: Vec<JoinEdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub status: String,
    pub cost: String,
    pub formula_cost: String,
    pub capacity: Vec<CapacityEntry>,
    pub join: JoinEntry,
    pub realization: Vec<RealizationEntry>,
    pub instance_hash: String,
}

/// What `verify` reads: a bare realization or a whole result document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationDocument {
    #[serde(default)]
    pub instance_hash: Option<String>,
    pub realization: Vec<RealizationEntry>,
}

pub fn parse_realization_document(text: &str) -> Result<RealizationDocument, DocumentError> {
    from_json(text)
}

/// Positive entries with each pair's names in order, sorted by pair.
pub fn realization_entries(
    instance: &Instance,
    y: &insp_core::Realization,
) -> Vec<RealizationEntry> {
    let mut entries: Vec<RealizationEntry> = y
        .iter()
        .map(|(a, b, v)| {
            let (mut s, mut t) = (instance.terminal_name(a), instance.terminal_name(b));
            if t < s {
                std::mem::swap(&mut s, &mut t);
            }
            RealizationEntry {
                s: s.to_string(),
                t: t.to_string(),
                y: v,
            }
        })
        .collect();
    entries.sort_by(|x, y| (&x.s, &x.t).cmp(&(&y.s, &y.t)));
    entries
}

pub fn join_entry(instance: &Instance, join: &insp_core::JoinResult) -> JoinEntry {
    let tree = instance.tree();
    JoinEntry {
        cost: format_rational(&join.cost),
        edges: join
            .edges
            .iter()
            .map(|&e| {
                let edge = &tree.edges()[e];
                JoinEdgeEntry {
                    u: tree.name(edge.u).to_string(),
                    v: tree.name(edge.v).to_string(),
                    length: format_rational(&edge.length),
                }
            })
            .collect(),
    }
}

pub fn result_document(instance: &Instance, solution: &insp_core::Solution) -> ResultDocument {
    let tree = instance.tree();
    ResultDocument {
        status: "ok".to_string(),
        cost: format_rational(&solution.cost),
        formula_cost: format_rational(&solution.formula_cost),
        capacity: tree
            .edges()
            .iter()
            .zip(solution.capacity.values())
            .map(|(e, &c)| CapacityEntry {
                u: tree.name(e.u).to_string(),
                v: tree.name(e.v).to_string(),
                capacity: c,
            })
            .collect(),
        join: join_entry(instance, &solution.join),
        realization: realization_entries(instance, &solution.realization),
        instance_hash: instance_hash(instance),
    }
}
