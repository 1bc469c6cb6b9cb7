//! Lazy prefix-closed trees over finite strings of naturals.
//!
//! A [`LazyTree`] decides membership and describes the children of each
//! node, either as an explicit finite list or as an infinite
//! [`IndexFamily`]. Trees may carry declared ordinal ranks; ranks of
//! infinitely branching trees are only ever declared and then checked
//! locally, never computed.

mod rank;
mod search;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::IndexFamily;
use crate::ordinal::{AffineOrdinal, Ordinal};

pub use rank::{
    build_tree_of_rank, check_declared_ranks, explore_rank, rank_finite, RankReport,
    RankResult, RankTree, RankViolation,
};
pub use search::{bounded_path_search, CounterexampleTree, FullBinaryTree, PathSearch};

/// A finite string of naturals; the empty path is the root.
pub type NodePath = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("node cap of {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("node {0:?} is present but its parent is not")]
    NotPrefixClosed(NodePath),
    #[error("a tree must contain the root")]
    MissingRoot,
    #[error("node {0:?} has infinitely many children")]
    InfiniteBranching(NodePath),
    #[error("node {0:?} has no declared rank")]
    MissingAnnotation(NodePath),
    #[error("declared ranks below node {0:?} are not an affine family")]
    NonAffineFamily(NodePath),
    #[error("child {child} of node {node:?} is not a member of the tree")]
    BadChild { node: NodePath, child: u64 },
    #[error("invalid tree JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone)]
pub enum Children {
    Explicit(Vec<u64>),
    Family(IndexFamily),
}

impl Children {
    /// The first `width` children (all of them when explicit).
    pub fn truncated(&self, width: usize) -> Vec<u64> {
        match self {
            Children::Explicit(xs) => xs.clone(),
            Children::Family(fam) => (0..width as u64)
                .map_while(|k| fam.member(k))
                .map(|x| x as u64)
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Children::Explicit(xs) if xs.is_empty())
    }
}

pub trait LazyTree: Send + Sync {
    fn contains(&self, node: &[u64]) -> bool;

    /// Children of a member node.
    fn children(&self, node: &[u64]) -> Children;

    fn declared_rank(&self, _node: &[u64]) -> Option<Ordinal> {
        None
    }

    /// For a node with family children: the declared rank of child `k` as
    /// an affine expression in `k`.
    fn declared_family_rank(&self, _node: &[u64]) -> Option<AffineOrdinal> {
        None
    }
}

/// An explicit finite tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTree {
    nodes: BTreeSet<NodePath>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeJson {
    nodes: Vec<NodePath>,
}

impl FiniteTree {
    pub fn singleton() -> Self {
        FiniteTree {
            nodes: BTreeSet::from([Vec::new()]),
        }
    }

    /// Validates prefix closure.
    pub fn from_nodes(nodes: impl IntoIterator<Item = NodePath>) -> Result<Self, TreeError> {
        let nodes: BTreeSet<NodePath> = nodes.into_iter().collect();
        if !nodes.contains(&Vec::new()) {
            return Err(TreeError::MissingRoot);
        }
        for node in &nodes {
            if let Some((_, parent)) = node.split_last() {
                if !nodes.contains(parent) {
                    return Err(TreeError::NotPrefixClosed(node.clone()));
                }
            }
        }
        Ok(FiniteTree { nodes })
    }

    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        let parsed: TreeJson =
            serde_json::from_str(text).map_err(|e| TreeError::Json(e.to_string()))?;
        Self::from_nodes(parsed.nodes)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeJson {
            nodes: self.nodes.iter().cloned().collect(),
        })
        .expect("tree serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({ "nodes": self.nodes.iter().collect::<Vec<_>>() })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodePath> {
        self.nodes.iter()
    }

    pub fn child_list(&self, node: &[u64]) -> Vec<u64> {
        let mut lo = node.to_vec();
        lo.push(0);
        self.nodes
            .range(lo..)
            .take_while(|p| p.len() > node.len() && p.starts_with(node))
            .filter(|p| p.len() == node.len() + 1)
            .map(|p| p[node.len()])
            .collect()
    }

    /// Nodes in breadth-first discovery order, children ascending.
    pub fn bfs_order(&self) -> Vec<NodePath> {
        let mut out = Vec::with_capacity(self.len());
        let mut queue = VecDeque::from([Vec::new()]);
        while let Some(node) = queue.pop_front() {
            for c in self.child_list(&node) {
                let mut child = node.clone();
                child.push(c);
                queue.push_back(child);
            }
            out.push(node);
        }
        out
    }

    /// The rank of every node, by bottom-up recursion.
    pub fn node_ranks(&self) -> BTreeMap<NodePath, u64> {
        let mut ranks = BTreeMap::new();
        for node in self.bfs_order().into_iter().rev() {
            let r = self
                .child_list(&node)
                .into_iter()
                .map(|c| {
                    let mut child = node.clone();
                    child.push(c);
                    ranks[&child] + 1
                })
                .max()
                .unwrap_or(0);
            ranks.insert(node, r);
        }
        ranks
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(Vec::len).max().unwrap_or(0)
    }
}

impl LazyTree for FiniteTree {
    fn contains(&self, node: &[u64]) -> bool {
        self.nodes.contains(node)
    }

    fn children(&self, node: &[u64]) -> Children {
        Children::Explicit(self.child_list(node))
    }
}

/// A finite tree with an explicit rank annotation per node.
#[derive(Debug, Clone)]
pub struct AnnotatedTree {
    pub tree: FiniteTree,
    pub ranks: BTreeMap<NodePath, Ordinal>,
}

impl LazyTree for AnnotatedTree {
    fn contains(&self, node: &[u64]) -> bool {
        self.tree.contains(node)
    }

    fn children(&self, node: &[u64]) -> Children {
        self.tree.children(node)
    }

    fn declared_rank(&self, node: &[u64]) -> Option<Ordinal> {
        self.ranks.get(node).cloned()
    }
}

/// The finite subtree reached by following at most `width` children of each
/// family node, down to length `depth` (unbounded when `None`).
pub fn truncate(
    t: &dyn LazyTree,
    width: usize,
    depth: Option<usize>,
    cap: usize,
) -> Result<FiniteTree, TreeError> {
    if !t.contains(&[]) {
        return Err(TreeError::MissingRoot);
    }
    let mut nodes = BTreeSet::new();
    let mut stack = vec![Vec::new()];
    while let Some(node) = stack.pop() {
        if depth.is_none_or(|d| node.len() < d) {
            for c in t.children(&node).truncated(width) {
                let mut child = node.clone();
                child.push(c);
                if !t.contains(&child) {
                    return Err(TreeError::BadChild { node, child: c });
                }
                stack.push(child);
            }
        }
        nodes.insert(node);
        if nodes.len() > cap {
            return Err(TreeError::CapExceeded { cap });
        }
    }
    Ok(FiniteTree { nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_validation() {
        let t = FiniteTree::from_json(r#"{"nodes": [[ ], [0], [0,0], [1]]}"#).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.to_json(), r#"{"nodes":[[],[0],[0,0],[1]]}"#);
        assert_eq!(FiniteTree::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(
            FiniteTree::from_json(r#"{"nodes": [[], [0,0]]}"#),
            Err(TreeError::NotPrefixClosed(vec![0, 0]))
        );
        assert_eq!(
            FiniteTree::from_json(r#"{"nodes": [[1]]}"#),
            Err(TreeError::MissingRoot)
        );
        assert!(matches!(
            FiniteTree::from_json("{"),
            Err(TreeError::Json(_))
        ));
    }

    #[test]
    fn children_and_bfs() {
        let t = FiniteTree::from_nodes([vec![], vec![3], vec![1], vec![1, 7], vec![3, 0]]).unwrap();
        assert_eq!(t.child_list(&[]), vec![1, 3]);
        assert_eq!(t.child_list(&[1]), vec![7]);
        assert_eq!(
            t.bfs_order(),
            vec![vec![], vec![1], vec![3], vec![1, 7], vec![3, 0]]
        );
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn truncation_of_family_children() {
        let t = CounterexampleTree;
        let fin = truncate(&t, 3, None, 1000).unwrap();
        // root, <0>, <1>, <1,x> x<3, <2>, <2,x>, <2,x,y>
        assert_eq!(fin.len(), 1 + 1 + (1 + 3) + (1 + 3 + 9));
        assert!(matches!(
            truncate(&t, 3, None, 5),
            Err(TreeError::CapExceeded { cap: 5 })
        ));
        let shallow = truncate(&FullBinaryTree, 2, Some(3), 100).unwrap();
        assert_eq!(shallow.len(), 15);
    }
}
