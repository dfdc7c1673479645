//! Seeded random instances.
//!
//! The construction, with every draw taken from one `ChaCha8Rng` seeded by
//! `seed_from_u64(seed)` in exactly this order:
//!
//! 1. Inner nodes `s0..s{m-1}`: each `s_i` with `i > 0` picks a parent
//!    uniformly among `s0..s{i-1}`, then a length uniformly from the length set.
//! 2. Terminals `t0..t{k-1}` in order. While some inner node has degree
//!    below 3, the terminal attaches to the first such node (no parent draw);
//!    otherwise it picks a parent uniformly among all nodes placed so far.
//!    Either way a length is then drawn. With no nodes placed yet (`m = 0`,
//!    `t0`) nothing is drawn.
//! 3. Requirements for every pair `(t_i, t_j)`, `i < j`, in lexicographic
//!    order, uniform in `rmin..=rmax`.
//!
//! Node order is terminals then inner nodes; edges are listed in creation
//! order. Inner nodes left as leaves are pruned when the document is loaded.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use insp_core::{Capacity, Rational};

use crate::document::{
    format_rational, EdgeEntry, InstanceDocument, LengthValue, RequirementEntry, TreeEntry,
    FORMAT_VERSION,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("at least one terminal is required")]
    NoTerminals,
    #[error("rmin {0} exceeds rmax {1}")]
    EmptyRequirementRange(Capacity, Capacity),
    #[error("the length set is empty")]
    NoLengths,
    #[error("negative length {0}")]
    NegativeLength(String),
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub terminals: usize,
    pub inner: usize,
    pub rmin: Capacity,
    pub rmax: Capacity,
    pub seed: u64,
    pub lengths: Vec<Rational>,
}

/// `{0, 1/2, 1, 2, 7/3}`.
pub fn default_lengths() -> Vec<Rational> {
    vec![
        Rational::from_integer(0),
        Rational::new(1, 2),
        Rational::from_integer(1),
        Rational::from_integer(2),
        Rational::new(7, 3),
    ]
}

const TARGET_INNER_DEGREE: usize = 3;

pub fn generate(opts: &GenOptions) -> Result<InstanceDocument, GenerateError> {
    if opts.terminals == 0 {
        return Err(GenerateError::NoTerminals);
    }
    if opts.rmin > opts.rmax {
        return Err(GenerateError::EmptyRequirementRange(opts.rmin, opts.rmax));
    }
    if opts.lengths.is_empty() {
        return Err(GenerateError::NoLengths);
    }
    if let Some(q) = opts
        .lengths
        .iter()
        .find(|q| **q < Rational::from_integer(0))
    {
        return Err(GenerateError::NegativeLength(format_rational(q)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (k, m) = (opts.terminals, opts.inner);
    let terminal_names: Vec<String> = (0..k).map(|i| format!("t{i}")).collect();
    let inner_names: Vec<String> = (0..m).map(|i| format!("s{i}")).collect();
    let mut edges = Vec::new();
    let mut inner_degree = vec![0usize; m];
    let draw_length = |rng: &mut ChaCha8Rng| {
        let q = opts.lengths[rng.random_range(0..opts.lengths.len())];
        LengthValue::Text(format_rational(&q))
    };

    for i in 1..m {
        let p = rng.random_range(0..i);
        inner_degree[p] += 1;
        inner_degree[i] += 1;
        edges.push(EdgeEntry {
            u: inner_names[p].clone(),
            v: inner_names[i].clone(),
            length: draw_length(&mut rng),
        });
    }

    // placed nodes: inner nodes first, then terminals as they attach
    let mut placed: Vec<&str> = inner_names.iter().map(String::as_str).collect();
    for name in &terminal_names {
        let parent = if let Some(p) = inner_degree.iter().position(|&d| d < TARGET_INNER_DEGREE) {
            inner_degree[p] += 1;
            Some(placed[p])
        } else if placed.is_empty() {
            None
        } else {
            let j = rng.random_range(0..placed.len());
            if j < m {
                inner_degree[j] += 1;
            }
            Some(placed[j])
        };
        if let Some(parent) = parent {
            edges.push(EdgeEntry {
                u: parent.to_string(),
                v: name.clone(),
                length: draw_length(&mut rng),
            });
        }
        placed.push(name);
    }

    let mut requirements = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            requirements.push(RequirementEntry {
                s: terminal_names[i].clone(),
                t: terminal_names[j].clone(),
                r: rng.random_range(opts.rmin..=opts.rmax),
            });
        }
    }

    let mut nodes = terminal_names.clone();
    nodes.extend(inner_names);
    Ok(InstanceDocument {
        version: FORMAT_VERSION.to_string(),
        terminals: terminal_names,
        tree: TreeEntry { nodes, edges },
        requirements,
    })
}
