use super::{Children, LazyTree, NodePath};
use crate::family::IndexFamily;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathSearch {
    /// A member string of exactly the requested length.
    PathPrefix(NodePath),
    /// The width-truncated tree has no string of the requested length. This
    /// says nothing about paths in the full tree.
    NoPathWithin(usize),
}

/// Depth-first search, least symbols first, for a member string of length
/// `depth` in the tree obtained by keeping only the first `width` children
/// of each family node.
pub fn bounded_path_search(t: &dyn LazyTree, depth: usize, width: usize) -> PathSearch {
    if !t.contains(&[]) {
        return PathSearch::NoPathWithin(depth);
    }
    let mut stack: Vec<NodePath> = vec![Vec::new()];
    while let Some(node) = stack.pop() {
        if node.len() == depth {
            return PathSearch::PathPrefix(node);
        }
        let kids = t.children(&node).truncated(width);
        for c in kids.into_iter().rev() {
            let mut child = node.clone();
            child.push(c);
            if t.contains(&child) {
                stack.push(child);
            }
        }
    }
    PathSearch::NoPathWithin(depth)
}

/// The tree of the empty string and all strings `i^s` with `|s| <= i`:
/// it has arbitrarily long strings but no path.
#[derive(Debug, Clone, Copy, Default)]
pub struct CounterexampleTree;

impl LazyTree for CounterexampleTree {
    fn contains(&self, node: &[u64]) -> bool {
        match node.split_first() {
            None => true,
            Some((&i, rest)) => rest.len() as u64 <= i,
        }
    }

    fn children(&self, node: &[u64]) -> Children {
        let open = match node.split_first() {
            None => true,
            Some((&i, rest)) => (rest.len() as u64) < i,
        };
        if open {
            Children::Family(IndexFamily::affine(1, 0))
        } else {
            Children::Explicit(Vec::new())
        }
    }
}

/// All finite 0/1 strings.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullBinaryTree;

impl LazyTree for FullBinaryTree {
    fn contains(&self, node: &[u64]) -> bool {
        node.iter().all(|&s| s < 2)
    }

    fn children(&self, _node: &[u64]) -> Children {
        Children::Explicit(vec![0, 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{truncate, FiniteTree};

    #[test]
    fn singleton_has_no_string_of_length_one() {
        assert_eq!(
            bounded_path_search(&FiniteTree::singleton(), 1, 5),
            PathSearch::NoPathWithin(1)
        );
    }

    #[test]
    fn binary_tree_has_long_strings() {
        assert_eq!(
            bounded_path_search(&FullBinaryTree, 10, 2),
            PathSearch::PathPrefix(vec![0; 10])
        );
    }

    #[test]
    fn counterexample_tree_dies_under_width_three() {
        assert_eq!(
            bounded_path_search(&CounterexampleTree, 5, 3),
            PathSearch::NoPathWithin(5)
        );
        // Oracle: enumerate the truncated tree and take its height.
        let fin = truncate(&CounterexampleTree, 3, None, 10_000).unwrap();
        assert_eq!(fin.height(), 3);
        // Wider truncations reach further, as the tree has arbitrarily long strings.
        assert_eq!(
            bounded_path_search(&CounterexampleTree, 5, 5),
            PathSearch::PathPrefix(vec![4, 0, 0, 0, 0])
        );
    }
}
