#![allow(dead_code)]

use insp_core::{Capacity, Instance, Rational};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn lengths() -> Vec<Rational> {
    vec![
        Rational::from_integer(0),
        Rational::new(1, 2),
        Rational::from_integer(1),
        Rational::from_integer(2),
        Rational::new(7, 3),
    ]
}

/// Random tree on `inner` inner nodes plus `terminals` terminals, requirements
/// drawn uniformly from `rmin..=rmax` on every pair.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    terminals: usize,
    inner: usize,
    rmin: Capacity,
    rmax: Capacity,
) -> Instance {
    let lens = lengths();
    let mut names: Vec<String> = (0..terminals).map(|i| format!("t{i}")).collect();
    names.extend((0..inner).map(|i| format!("s{i}")));
    let mut edges: Vec<(String, String, Rational)> = Vec::new();
    // inner nodes first form a tree, terminals hang anywhere
    let mut placed: Vec<usize> = Vec::new();
    for k in 0..inner {
        let idx = terminals + k;
        if let Some(&p) = placed.choose(rng) {
            edges.push((
                names[p].clone(),
                names[idx].clone(),
                *lens.choose(rng).unwrap(),
            ));
        }
        placed.push(idx);
    }
    for idx in 0..terminals {
        if let Some(&p) = placed.choose(rng) {
            edges.push((
                names[p].clone(),
                names[idx].clone(),
                *lens.choose(rng).unwrap(),
            ));
        }
        placed.push(idx);
    }
    let term: Vec<&str> = names[..terminals].iter().map(String::as_str).collect();
    let nodes: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str, Rational)> = edges
        .iter()
        .map(|(a, b, l)| (a.as_str(), b.as_str(), *l))
        .collect();
    let mut req = Vec::new();
    for i in 0..terminals {
        for j in i + 1..terminals {
            req.push((term[i], term[j], rng.random_range(rmin..=rmax)));
        }
    }
    Instance::build(&term, &nodes, &edges, &req).unwrap()
}

/// Star with center `s` and leaves `t0..`, all at length 1/2.
pub fn uniform_star(requirements: &[(usize, usize, Capacity)], k: usize) -> Instance {
    let names: Vec<String> = (0..k).map(|i| format!("t{i}")).collect();
    let mut nodes: Vec<&str> = names.iter().map(String::as_str).collect();
    let term = nodes.clone();
    nodes.push("s");
    let edges: Vec<(&str, &str, Rational)> = term
        .iter()
        .map(|&t| ("s", t, Rational::new(1, 2)))
        .collect();
    let req: Vec<(&str, &str, Capacity)> = requirements
        .iter()
        .map(|&(i, j, r)| (term[i], term[j], r))
        .collect();
    Instance::build(&term, &nodes, &edges, &req).unwrap()
}
