use std::collections::{BTreeMap, VecDeque};

use super::{Children, LazyTree, NodePath, TreeError};
use crate::family::IndexFamily;
use crate::ordinal::{AffineOrdinal, Ordinal};

/// Exact rank of a finite tree: terminal nodes have rank 0, every other node
/// the maximum of its children's ranks plus one.
pub fn rank_finite(t: &dyn LazyTree, cap: usize) -> Result<Ordinal, TreeError> {
    if !t.contains(&[]) {
        return Err(TreeError::MissingRoot);
    }
    // Post-order over an explicit stack: (node, children, next child, best).
    let mut visited = 1usize;
    let mut stack: Vec<(NodePath, Vec<u64>, usize, u64)> = Vec::new();
    let kids = explicit_children(t, &[])?;
    stack.push((Vec::new(), kids, 0, 0));
    loop {
        let top = stack.last_mut().expect("stack holds the root");
        if top.2 < top.1.len() {
            let c = top.1[top.2];
            top.2 += 1;
            let mut child = top.0.clone();
            child.push(c);
            if !t.contains(&child) {
                return Err(TreeError::BadChild {
                    node: top.0.clone(),
                    child: c,
                });
            }
            visited += 1;
            if visited > cap {
                return Err(TreeError::CapExceeded { cap });
            }
            let kids = explicit_children(t, &child)?;
            stack.push((child, kids, 0, 0));
            continue;
        }
        let (_, kids, _, best) = stack.pop().expect("non-empty");
        let rank = if kids.is_empty() { 0 } else { best };
        match stack.last_mut() {
            Some(parent) => parent.3 = parent.3.max(rank + 1),
            None => return Ok(Ordinal::from_nat(rank)),
        }
    }
}

fn explicit_children(t: &dyn LazyTree, node: &[u64]) -> Result<Vec<u64>, TreeError> {
    match t.children(node) {
        Children::Explicit(xs) => Ok(xs),
        Children::Family(_) => Err(TreeError::InfiniteBranching(node.to_vec())),
    }
}

/// Outcome of a bounded exhaustive exploration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankResult {
    /// The whole tree was expanded; this is its rank.
    Ranked(Ordinal),
    /// A member string of the depth bound was reached.
    PathFound(NodePath),
    /// Family children or the node cap stopped the expansion.
    Inconclusive { depth: usize },
}

/// Depth-first expansion of a finitely branching tree, stopping at the first
/// member string of length `max_depth`.
pub fn explore_rank(t: &dyn LazyTree, max_depth: usize, cap: usize) -> RankResult {
    let mut stack = vec![Vec::new()];
    let mut visited = 0usize;
    while let Some(node) = stack.pop() {
        visited += 1;
        if node.len() >= max_depth {
            return RankResult::PathFound(node);
        }
        if visited > cap {
            return RankResult::Inconclusive { depth: max_depth };
        }
        match t.children(&node) {
            Children::Explicit(xs) => {
                for c in xs.into_iter().rev() {
                    let mut child = node.clone();
                    child.push(c);
                    stack.push(child);
                }
            }
            Children::Family(_) => return RankResult::Inconclusive { depth: max_depth },
        }
    }
    match rank_finite(t, cap) {
        Ok(r) => RankResult::Ranked(r),
        Err(_) => RankResult::Inconclusive { depth: max_depth },
    }
}

/// The canonical tree of a given rank: a successor `b+1` is a root with one
/// child `0` heading a tree of rank `b`; a limit `l` is a root whose child `i`
/// heads a tree of rank `l[i]`. Every node carries its declared rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTree {
    root: Ordinal,
}

pub fn build_tree_of_rank(alpha: &Ordinal) -> RankTree {
    RankTree {
        root: alpha.clone(),
    }
}

impl RankTree {
    pub fn root_rank(&self) -> &Ordinal {
        &self.root
    }

    /// The rank at `node`, or `None` when `node` is not in the tree.
    pub fn rank_at(&self, node: &[u64]) -> Option<Ordinal> {
        let mut r = self.root.clone();
        for &s in node {
            if r.is_zero() {
                return None;
            }
            r = if r.is_successor() {
                if s != 0 {
                    return None;
                }
                r.predecessor().ok()?
            } else {
                r.fundamental_sequence(s).ok()?
            };
        }
        Some(r)
    }
}

impl LazyTree for RankTree {
    fn contains(&self, node: &[u64]) -> bool {
        self.rank_at(node).is_some()
    }

    fn children(&self, node: &[u64]) -> Children {
        match self.rank_at(node) {
            Some(r) if r.is_limit() => Children::Family(IndexFamily::affine(1, 0)),
            Some(r) if r.is_successor() => Children::Explicit(vec![0]),
            _ => Children::Explicit(Vec::new()),
        }
    }

    fn declared_rank(&self, node: &[u64]) -> Option<Ordinal> {
        self.rank_at(node)
    }

    fn declared_family_rank(&self, node: &[u64]) -> Option<AffineOrdinal> {
        let r = self.rank_at(node)?;
        r.fundamental_family().ok().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankViolation {
    pub node: NodePath,
    pub declared: Ordinal,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankReport {
    pub checked: usize,
    pub violations: Vec<RankViolation>,
}

impl RankReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks declared ranks locally on the nodes reachable within
/// `sample_depth` levels, following at most `sample_width` family children:
/// explicit nodes must carry exactly the max of (child rank + 1), family
/// nodes the supremum of the affine family of (child rank + 1).
pub fn check_declared_ranks(
    t: &dyn LazyTree,
    sample_width: usize,
    sample_depth: usize,
) -> Result<RankReport, TreeError> {
    let mut report = RankReport::default();
    let mut queue = VecDeque::from([Vec::new()]);
    let declared = |node: &NodePath| {
        t.declared_rank(node)
            .ok_or_else(|| TreeError::MissingAnnotation(node.clone()))
    };
    while let Some(node) = queue.pop_front() {
        let own = declared(&node)?;
        report.checked += 1;
        let children = t.children(&node);
        let kids = children.truncated(sample_width);
        let mut child_ranks = BTreeMap::new();
        for &c in &kids {
            let mut child = node.clone();
            child.push(c);
            child_ranks.insert(c, declared(&child)?);
            if node.len() + 1 < sample_depth {
                queue.push_back(child);
            }
        }
        let mut violate = |message: String| {
            report.violations.push(RankViolation {
                node: node.clone(),
                declared: own.clone(),
                message,
            })
        };
        match &children {
            Children::Explicit(_) => {
                let expected = child_ranks
                    .values()
                    .map(Ordinal::successor)
                    .max()
                    .unwrap_or_default();
                if expected != own {
                    violate(format!("children imply rank {expected}"));
                }
            }
            Children::Family(fam) => {
                let expr = t
                    .declared_family_rank(&node)
                    .ok_or_else(|| TreeError::NonAffineFamily(node.clone()))?;
                for (k, c) in (0u64..).zip(&kids) {
                    let actual = &child_ranks[c];
                    if fam.member(k) != Some(*c as usize) || expr.eval(k) != *actual {
                        violate(format!(
                            "child {k} declares {actual}, family expression gives {}",
                            expr.eval(k)
                        ));
                    }
                }
                let expected = expr.successor().sup();
                if expected != own {
                    violate(format!("family of children implies rank {expected}"));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{truncate, AnnotatedTree, FiniteTree};

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn rank_finite_examples() {
        let single = FiniteTree::singleton();
        assert_eq!(rank_finite(&single, 10).unwrap(), o("0"));
        let chain = FiniteTree::from_nodes([vec![], vec![0], vec![0, 0]]).unwrap();
        assert_eq!(rank_finite(&chain, 10).unwrap(), o("2"));
        let forked = FiniteTree::from_nodes([vec![], vec![0], vec![1], vec![0, 0]]).unwrap();
        assert_eq!(rank_finite(&forked, 10).unwrap(), o("2"));
        assert_eq!(
            rank_finite(&forked, 3),
            Err(TreeError::CapExceeded { cap: 3 })
        );
        assert!(matches!(
            rank_finite(&build_tree_of_rank(&o("w")), 100),
            Err(TreeError::InfiniteBranching(_))
        ));
    }

    #[test]
    fn rank_tree_shapes() {
        let t = build_tree_of_rank(&o("0"));
        assert!(t.contains(&[]));
        assert!(!t.contains(&[0]));

        let t = build_tree_of_rank(&o("2"));
        assert_eq!(t.rank_at(&[0]), Some(o("1")));
        assert_eq!(t.rank_at(&[0, 0]), Some(o("0")));
        assert!(!t.contains(&[0, 0, 0]));
        assert!(!t.contains(&[1]));
        assert_eq!(rank_finite(&t, 10).unwrap(), o("2"));

        let t = build_tree_of_rank(&o("w"));
        assert_eq!(t.rank_at(&[5]), Some(o("5")));
        assert!(t.contains(&[5, 0, 0, 0, 0, 0]));
        assert!(!t.contains(&[5, 0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn truncated_omega_tree_has_rank_equal_to_width() {
        let t = build_tree_of_rank(&o("w"));
        for w in 1..=12 {
            let fin = truncate(&t, w, None, 100_000).unwrap();
            assert_eq!(rank_finite(&fin, 100_000).unwrap(), Ordinal::from_nat(w as u64));
        }
    }

    #[test]
    fn declared_ranks_of_builder_output_check_out() {
        for s in ["0", "3", "w", "w+2", "w*2", "w^2", "w^2*2+w+1"] {
            let t = build_tree_of_rank(&o(s));
            let report = check_declared_ranks(&t, 5, 8).unwrap();
            assert!(report.is_ok(), "{s}: {:?}", report.violations);
        }
        let report = check_declared_ranks(&build_tree_of_rank(&o("w*2")), 5, 8).unwrap();
        assert!(report.checked > 20);
    }

    #[test]
    fn non_affine_family_is_rejected() {
        let t = build_tree_of_rank(&o("w^w"));
        assert_eq!(
            check_declared_ranks(&t, 5, 5),
            Err(TreeError::NonAffineFamily(vec![]))
        );
    }

    #[test]
    fn wrong_annotation_is_reported() {
        let tree = FiniteTree::from_nodes([vec![], vec![0]]).unwrap();
        let bad = AnnotatedTree {
            tree: tree.clone(),
            ranks: BTreeMap::from([(vec![], o("5")), (vec![0], o("2"))]),
        };
        let report = check_declared_ranks(&bad, 10, 10).unwrap();
        assert_eq!(report.violations.len(), 2);
        assert_eq!(report.violations[0].node, Vec::<u64>::new());

        let single = AnnotatedTree {
            tree: FiniteTree::singleton(),
            ranks: BTreeMap::from([(vec![], o("0"))]),
        };
        assert!(check_declared_ranks(&single, 10, 10).unwrap().is_ok());

        let missing = AnnotatedTree {
            tree,
            ranks: BTreeMap::new(),
        };
        assert_eq!(
            check_declared_ranks(&missing, 10, 10),
            Err(TreeError::MissingAnnotation(vec![]))
        );
    }

    #[test]
    fn explore_distinguishes_outcomes() {
        let chain = FiniteTree::from_nodes([vec![], vec![0], vec![0, 0]]).unwrap();
        assert_eq!(explore_rank(&chain, 10, 100), RankResult::Ranked(o("2")));
        assert_eq!(
            explore_rank(&crate::tree::FullBinaryTree, 4, 100),
            RankResult::PathFound(vec![0, 0, 0, 0])
        );
        assert!(matches!(
            explore_rank(&build_tree_of_rank(&o("w")), 4, 100),
            RankResult::Inconclusive { .. }
        ));
    }
}
