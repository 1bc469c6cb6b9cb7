use rand::Rng;

use crate::af::FiniteAf;
use crate::ordinal::{Ordinal, Term};
use crate::tree::{FiniteTree, NodePath};

/// A framework on `0..=max_args` arguments where each ordered pair,
/// self-attacks included, is an attack with a per-instance probability
/// between 0.05 and 0.45.
pub fn random_finite_af(rng: &mut impl Rng, max_args: usize) -> FiniteAf {
    let n = rng.gen_range(0..=max_args);
    let p: f64 = rng.gen_range(0.05..0.45);
    let mut attacks = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if rng.gen_bool(p) {
                attacks.push((x, y));
            }
        }
    }
    FiniteAf::new(n, attacks).expect("indices in range")
}

/// A tree with `1..=max_nodes` nodes grown by attaching each new node as the
/// next child of a uniformly chosen existing node.
pub fn random_tree(rng: &mut impl Rng, max_nodes: usize) -> FiniteTree {
    let size = rng.gen_range(1..=max_nodes.max(1));
    let mut nodes: Vec<NodePath> = vec![Vec::new()];
    let mut child_count = vec![0u64];
    while nodes.len() < size {
        let parent = rng.gen_range(0..nodes.len());
        let mut child = nodes[parent].clone();
        child.push(child_count[parent]);
        child_count[parent] += 1;
        nodes.push(child);
        child_count.push(0);
    }
    FiniteTree::from_nodes(nodes).expect("grown trees are prefix closed")
}

/// An ordinal below `w^w^...` with exponents nested at most `depth` deep,
/// at most three terms per level and coefficients up to 4. Zero and small
/// naturals are deliberately common.
pub fn random_ordinal(rng: &mut impl Rng, depth: u32) -> Ordinal {
    if depth == 0 || rng.gen_bool(0.25) {
        return Ordinal::from_nat(rng.gen_range(0..5));
    }
    let mut exponents: Vec<Ordinal> = (0..rng.gen_range(1..=3))
        .map(|_| random_ordinal(rng, depth - 1))
        .collect();
    exponents.sort_unstable_by(|a, b| b.cmp(a));
    exponents.dedup();
    let terms = exponents
        .into_iter()
        .map(|exponent| Term {
            exponent,
            coefficient: rng.gen_range(1..=4),
        })
        .collect();
    Ordinal::from_terms(terms).expect("strictly decreasing exponents")
}
