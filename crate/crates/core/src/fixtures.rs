//! Small reference trees and a seeded random tree generator, shared by the
//! test suites and the CLI demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hierarchy::{Hierarchy, NodeSpec};

fn leaves(names: &[&str]) -> Vec<NodeSpec> {
    names.iter().map(|n| NodeSpec::leaf(*n)).collect()
}

/// Root with three children holding 1, 2 and 3 leaves.
pub fn fanout_spec() -> NodeSpec {
    NodeSpec::new(
        "root",
        vec![
            NodeSpec::new("a", leaves(&["a1"])),
            NodeSpec::new("b", leaves(&["b1", "b2"])),
            NodeSpec::new("c", leaves(&["c1", "c2", "c3"])),
        ],
    )
}

pub fn fanout_tree() -> Hierarchy {
    Hierarchy::from_spec(&fanout_spec()).expect("valid tree")
}

/// Imbalanced depth-3 tree: a branch of two leaves, a chain of length
/// three, and a lone leaf.
pub fn uneven_spec() -> NodeSpec {
    NodeSpec::new(
        "root",
        vec![
            NodeSpec::new("a", leaves(&["a1", "a2"])),
            NodeSpec::new("b", vec![NodeSpec::new("b1", leaves(&["b11"]))]),
            NodeSpec::leaf("c"),
        ],
    )
}

pub fn uneven_tree() -> Hierarchy {
    Hierarchy::from_spec(&uneven_spec()).expect("valid tree")
}

pub fn balanced_spec(branching: usize, depth: usize) -> NodeSpec {
    fn build(name: String, branching: usize, left: usize) -> NodeSpec {
        let children = if left == 0 {
            Vec::new()
        } else {
            (0..branching)
                .map(|i| build(format!("{name}{i}"), branching, left - 1))
                .collect()
        };
        NodeSpec::new(name, children)
    }
    let mut root = build("n".into(), branching, depth);
    root.name = "root".into();
    root
}

/// Complete tree with the given branching factor and depth.
pub fn balanced(branching: usize, depth: usize) -> Hierarchy {
    Hierarchy::from_spec(&balanced_spec(branching, depth)).expect("valid tree")
}

/// Random tree with at most `max_nodes` nodes and depth at most `max_depth`,
/// grown by attaching each new node to a uniformly chosen eligible parent.
pub fn random_spec(seed: u64, max_depth: usize, max_nodes: usize) -> NodeSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.gen_range(1..=max_nodes.max(1));
    grow(&mut rng, max_depth, target)
}

/// Like [`random_spec`] but with exactly `nodes` nodes when `max_depth > 0`.
pub fn sized_spec(seed: u64, max_depth: usize, nodes: usize) -> NodeSpec {
    grow(&mut ChaCha8Rng::seed_from_u64(seed), max_depth, nodes.max(1))
}

fn grow(rng: &mut ChaCha8Rng, max_depth: usize, target: usize) -> NodeSpec {
    let mut parents: Vec<Option<usize>> = vec![None];
    let mut depths = vec![0usize];
    let mut eligible: Vec<usize> = if max_depth > 0 { vec![0] } else { Vec::new() };
    while parents.len() < target && !eligible.is_empty() {
        let p = eligible[rng.gen_range(0..eligible.len())];
        let depth = depths[p] + 1;
        if depth < max_depth {
            eligible.push(parents.len());
        }
        parents.push(Some(p));
        depths.push(depth);
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); parents.len()];
    for (i, p) in parents.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(i);
        }
    }
    fn build(i: usize, children: &[Vec<usize>]) -> NodeSpec {
        NodeSpec::new(format!("n{i}"), children[i].iter().map(|&c| build(c, children)).collect())
    }
    build(0, &children)
}

pub fn sized_tree(seed: u64, max_depth: usize, nodes: usize) -> Hierarchy {
    Hierarchy::from_spec(&sized_spec(seed, max_depth, nodes)).expect("generator respects limits")
}

pub fn random_tree(seed: u64, max_depth: usize, max_nodes: usize) -> Hierarchy {
    Hierarchy::from_spec(&random_spec(seed, max_depth, max_nodes)).expect("generator respects limits")
}
