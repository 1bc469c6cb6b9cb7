//! Frameworks built from trees: for each node `s` a pair `a_s`, `b_s` with
//! `a_s att b_s` and `b_t att a_s` for each child `t` of `s`. Then `a_s` is
//! accepted at stage `rank(s)+1` and `b_s` never.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::ConstructionError;
use crate::af::{ArgIndex, AttackerFamily, AttackerSpec, Extension, FiniteAf, LazyAf};
use crate::family::IndexFamily;
use crate::grounded::{StageCandidate, SummaryEntry};
use crate::ordinal::{Ordinal, StageExpr, StageValue};
use crate::tree::{Children, FiniteTree, LazyTree, NodePath};

/// Highest bit a node code may use, so that `2*code+1` fits in 64 bits.
const MAX_CODE_BIT: u64 = 62;

/// Family members stop two bits short, so that the children and
/// grandchildren of every sampled family member are still codable.
const FAMILY_CODE_BIT: u64 = MAX_CODE_BIT - 2;

/// Bijective code of a node: `sum_j 2^(x_1+...+x_j + j-1)`. The root is 0.
/// `None` when the node needs more than 63 bits.
pub fn encode_path(path: &[u64]) -> Option<u64> {
    encode_within(path, MAX_CODE_BIT)
}

fn encode_within(path: &[u64], max_bit: u64) -> Option<u64> {
    let mut code = 0u64;
    let mut pos: Option<u64> = None;
    for &x in path {
        let p = match pos {
            None => x,
            Some(prev) => prev.checked_add(x)?.checked_add(1)?,
        };
        if p > max_bit {
            return None;
        }
        code |= 1 << p;
        pos = Some(p);
    }
    Some(code)
}

pub fn decode_path(code: u64) -> NodePath {
    let mut out = Vec::new();
    let mut prev: Option<u64> = None;
    let mut rest = code;
    while rest != 0 {
        let p = rest.trailing_zeros() as u64;
        rest &= rest - 1;
        out.push(match prev {
            None => p,
            Some(q) => p - q - 1,
        });
        prev = Some(p);
    }
    out
}

fn node_label(path: &[u64], is_a: bool) -> String {
    let mut s = String::from(if is_a { "a" } else { "b" });
    for x in path {
        s.push('_');
        s.push_str(&x.to_string());
    }
    s
}

/// `F_T` for a finite tree, with `a_s` and `b_s` at positions `2p` and
/// `2p+1` where `p` is the breadth-first position of `s`.
#[derive(Debug, Clone)]
pub struct FiniteTreeAf {
    pub af: FiniteAf,
    pub nodes: Vec<NodePath>,
    position: BTreeMap<NodePath, usize>,
}

impl FiniteTreeAf {
    pub fn a_index(&self, node: &[u64]) -> Option<ArgIndex> {
        self.position.get(node).map(|p| 2 * p)
    }

    pub fn b_index(&self, node: &[u64]) -> Option<ArgIndex> {
        self.position.get(node).map(|p| 2 * p + 1)
    }
}

pub fn af_from_tree(t: &FiniteTree) -> FiniteTreeAf {
    let nodes = t.bfs_order();
    let position: BTreeMap<NodePath, usize> =
        nodes.iter().enumerate().map(|(p, n)| (n.clone(), p)).collect();
    let mut names = Vec::with_capacity(2 * nodes.len());
    let mut attacks = Vec::new();
    for (p, node) in nodes.iter().enumerate() {
        names.push(node_label(node, true));
        names.push(node_label(node, false));
        attacks.push((2 * p, 2 * p + 1));
        if let Some((_, parent)) = node.split_last() {
            attacks.push((2 * p + 1, 2 * position[parent]));
        }
    }
    let af = FiniteAf::with_names(names, attacks).expect("generated names are valid and unique");
    FiniteTreeAf {
        af,
        nodes,
        position,
    }
}

/// `F_T` for a lazy tree, with `a_s = 2*code(s)` and `b_s = 2*code(s)+1`
/// (see [`encode_path`]). Nodes whose code does not fit are not arguments,
/// so this is `F` of the subtree of codable nodes; children of a limit node
/// are listed only while they leave two bits to spare.
///
/// With `rootless`, the root pair is left out; the result is then the
/// disjoint union of `F` of the subtrees below the root.
///
/// When the tree declares ranks, this is also a stage candidate:
/// `a_s -> rank(s)+1`, `b_s -> NEVER`.
pub struct TreeAf<T> {
    tree: T,
    rootless: bool,
}

impl<T: LazyTree> TreeAf<T> {
    pub fn new(tree: T) -> Self {
        TreeAf {
            tree,
            rootless: false,
        }
    }

    pub fn rootless(tree: T) -> Self {
        TreeAf {
            tree,
            rootless: true,
        }
    }

    pub fn tree(&self) -> &T {
        &self.tree
    }

    /// The node of an argument and whether it is the `a` of that node.
    pub fn node_of(&self, x: ArgIndex) -> Option<(NodePath, bool)> {
        let path = decode_path(x as u64 >> 1);
        if self.rootless && path.is_empty() {
            return None;
        }
        self.tree.contains(&path).then_some((path, x % 2 == 0))
    }

    pub fn a_index(&self, node: &[u64]) -> Option<ArgIndex> {
        let code = encode_path(node)?;
        usize::try_from(2 * code).ok()
    }

    pub fn b_index(&self, node: &[u64]) -> Option<ArgIndex> {
        self.a_index(node).map(|a| a + 1)
    }

    /// The `a` arguments of the children of `node` as a family, with the
    /// `b` arguments one above.
    fn child_family(&self, node: &[u64], fam: IndexFamily, is_a: bool) -> IndexFamily {
        let base = node.to_vec();
        let base_back = node.to_vec();
        let back = fam.clone();
        IndexFamily::coded(
            format!("{}(child of {base:?})", if is_a { "a" } else { "b" }),
            move |k| {
                let c = fam.member(k)? as u64;
                let mut p = base.clone();
                p.push(c);
                let code = encode_within(&p, FAMILY_CODE_BIT)?;
                usize::try_from(2 * code + u64::from(!is_a)).ok()
            },
            move |x| {
                if (x % 2 == 0) != is_a {
                    return None;
                }
                let p = decode_path(x as u64 >> 1);
                let (&c, parent) = p.split_last()?;
                if parent != base_back.as_slice() {
                    return None;
                }
                back.locate(c as usize)
            },
        )
    }
}

impl<T: LazyTree> LazyAf for TreeAf<T> {
    fn contains(&self, x: ArgIndex) -> bool {
        self.node_of(x).is_some()
    }

    fn bound(&self) -> Option<usize> {
        None
    }

    fn attacks(&self, x: ArgIndex, y: ArgIndex) -> bool {
        match (self.node_of(x), self.node_of(y)) {
            (Some((sx, true)), Some((sy, false))) => sx == sy,
            (Some((sx, false)), Some((sy, true))) => {
                sx.len() == sy.len() + 1 && sx.starts_with(&sy)
            }
            _ => false,
        }
    }

    fn attackers(&self, y: ArgIndex) -> AttackerSpec {
        let Some((node, is_a)) = self.node_of(y) else {
            return AttackerSpec::Explicit(Vec::new());
        };
        if !is_a {
            return AttackerSpec::Explicit(vec![y - 1]);
        }
        match self.tree.children(&node) {
            Children::Explicit(cs) => AttackerSpec::Explicit(
                cs.into_iter()
                    .filter_map(|c| {
                        let mut child = node.clone();
                        child.push(c);
                        self.b_index(&child)
                    })
                    .collect(),
            ),
            Children::Family(fam) => {
                let defense_stage = self
                    .tree
                    .declared_family_rank(&node)
                    .map(|r| StageExpr::Stage(r.successor()));
                AttackerSpec::Families(vec![AttackerFamily {
                    members: self.child_family(&node, fam, false),
                    member_stage: Some(StageExpr::Never),
                    defense_stage,
                }])
            }
        }
    }

    fn label(&self, x: ArgIndex) -> String {
        let path = decode_path(x as u64 >> 1);
        node_label(&path, x % 2 == 0)
    }
}

impl<T: LazyTree> StageCandidate for TreeAf<T> {
    fn stage_of(&self, x: ArgIndex) -> Option<StageValue> {
        let (node, is_a) = self.node_of(x)?;
        if is_a {
            Some(StageValue::Stage(self.tree.declared_rank(&node)?.successor()))
        } else {
            Some(StageValue::Never)
        }
    }

    fn summary(&self) -> Vec<SummaryEntry> {
        if !self.rootless {
            let rank = self.tree.declared_rank(&[]).unwrap_or_default();
            return vec![
                SummaryEntry::Point(0, StageValue::Stage(rank.successor())),
                SummaryEntry::Point(1, StageValue::Never),
            ];
        }
        // Every node lies below a child of the root, whose rank dominates it.
        match self.tree.children(&[]) {
            Children::Explicit(cs) => cs
                .into_iter()
                .filter_map(|c| {
                    let x = self.a_index(&[c])?;
                    Some(SummaryEntry::Point(x, self.stage_of(x)?))
                })
                .collect(),
            Children::Family(fam) => match self.tree.declared_family_rank(&[]) {
                Some(r) => vec![SummaryEntry::Family(
                    self.child_family(&[], fam, true),
                    StageExpr::Stage(r.successor()),
                )],
                None => Vec::new(),
            },
        }
    }
}

/// `F` of the width-`width` truncation of a rank-annotated tree, with all
/// nodes of equal declared rank merged into one `a`/`b` pair.
///
/// In a tree whose subtrees are determined by their declared rank (such as
/// the canonical trees of [`crate::tree::build_tree_of_rank`]) merged nodes
/// have the same attackers up to merging, so every argument keeps its stage.
/// This makes truncations of trees such as the one of rank `w^2`, whose
/// explicit size grows exponentially with the width, tractable. Returns the
/// framework and the index of the root's `a`.
pub fn compressed_truncation(
    t: &dyn LazyTree,
    width: usize,
    cap: usize,
) -> Result<(FiniteAf, ArgIndex), ConstructionError> {
    let root_rank = t
        .declared_rank(&[])
        .ok_or_else(|| ConstructionError::Spec("tree has no declared ranks".into()))?;
    let mut class_of: HashMap<Ordinal, usize> = HashMap::from([(root_rank.clone(), 0)]);
    let mut names = vec![format!("a_r{}", sanitize(&root_rank)), format!("b_r{}", sanitize(&root_rank))];
    let mut attacks = vec![(0, 1)];
    let mut queue: VecDeque<(NodePath, usize)> = VecDeque::from([(Vec::new(), 0)]);
    while let Some((node, class)) = queue.pop_front() {
        for c in t.children(&node).truncated(width) {
            let mut child = node.clone();
            child.push(c);
            let rank = t.declared_rank(&child).ok_or_else(|| {
                ConstructionError::Spec(format!("node {child:?} has no declared rank"))
            })?;
            let next = class_of.len();
            let child_class = *class_of.entry(rank.clone()).or_insert_with(|| {
                names.push(format!("a_r{}", sanitize(&rank)));
                names.push(format!("b_r{}", sanitize(&rank)));
                attacks.push((2 * next, 2 * next + 1));
                queue.push_back((child, next));
                next
            });
            if class_of.len() > cap {
                return Err(ConstructionError::CapExceeded { cap });
            }
            attacks.push((2 * child_class + 1, 2 * class));
        }
    }
    let af = FiniteAf::with_names(names, attacks)?;
    Ok((af, 0))
}

fn sanitize(o: &Ordinal) -> String {
    o.to_string()
        .chars()
        .map(|c| match c {
            '+' => "p".to_string(),
            '*' => "m".to_string(),
            '^' => "e".to_string(),
            '(' => "L".to_string(),
            ')' => "R".to_string(),
            c if c.is_ascii_alphanumeric() => c.to_string(),
            _ => "_".to_string(),
        })
        .collect()
}

/// Removes the root pair (indices 0 and 1 in both finite constructions).
pub fn drop_root_pair(af: &FiniteAf) -> FiniteAf {
    let keep: Extension = (2..af.len()).collect();
    af.restrict(&keep).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grounded::{grounded_finite, stages_finite, verify_symbolic_stages};
    use crate::tree::{build_tree_of_rank, truncate};

    #[test]
    fn path_code_is_a_bijection_on_small_codes() {
        for code in 0..4096u64 {
            let p = decode_path(code);
            assert_eq!(encode_path(&p), Some(code));
        }
        assert_eq!(encode_path(&[]), Some(0));
        assert_eq!(encode_path(&[0]), Some(1));
        assert_eq!(encode_path(&[1]), Some(2));
        assert_eq!(encode_path(&[0, 0]), Some(3));
        assert_eq!(encode_path(&[63]), None);
        assert_eq!(encode_path(&[40, 30]), None);
    }

    #[test]
    fn singleton_tree() {
        let f = af_from_tree(&FiniteTree::singleton());
        let s = stages_finite(&f.af);
        assert_eq!(s.get(0), Some(&StageValue::nat(1)));
        assert_eq!(s.get(1), Some(&StageValue::Never));
        assert_eq!(f.af.name(0), "a");
    }

    #[test]
    fn chain_tree_stages() {
        let t = FiniteTree::from_nodes([vec![], vec![0], vec![0, 0]]).unwrap();
        let f = af_from_tree(&t);
        let s = stages_finite(&f.af);
        for (node, expected) in [(vec![0, 0], 1), (vec![0], 2), (vec![], 3)] {
            assert_eq!(s.get(f.a_index(&node).unwrap()), Some(&StageValue::nat(expected)));
            assert_eq!(s.get(f.b_index(&node).unwrap()), Some(&StageValue::Never));
        }
        assert_eq!(f.af.name(f.a_index(&[0, 0]).unwrap()), "a_0_0");
    }

    #[test]
    fn lazy_form_of_finite_tree_matches_materialized() {
        let t = FiniteTree::from_nodes([vec![], vec![0], vec![2], vec![2, 1], vec![2, 1, 0]])
            .unwrap();
        let f = af_from_tree(&t);
        let exact = stages_finite(&f.af);
        let lazy = TreeAf::new(t.clone());
        let approx = crate::grounded::omega_approximation(&lazy, 1 << 12, 50, 10_000).unwrap();
        for node in t.nodes() {
            for is_a in [true, false] {
                let fin = if is_a { f.a_index(node) } else { f.b_index(node) }.unwrap();
                let lz = if is_a { lazy.a_index(node) } else { lazy.b_index(node) }.unwrap();
                assert_eq!(lazy.label(lz), f.af.name(fin));
                let expected = match exact.get(fin).unwrap() {
                    StageValue::Never => crate::grounded::Approx::Never,
                    v => crate::grounded::Approx::Stage(v.ordinal().unwrap().as_nat().unwrap()),
                };
                assert_eq!(approx.stages[&lz], expected, "{}", f.af.name(fin));
            }
        }
    }

    #[test]
    fn omega_tree_candidate_verifies() {
        let w: Ordinal = "w".parse().unwrap();
        let af = TreeAf::new(build_tree_of_rank(&w));
        let r = verify_symbolic_stages(&af, &af, 40).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.grounding_ordinal, "w+1".parse().unwrap());
        assert_eq!(af.stage_of(0), Some(StageValue::Stage("w+1".parse().unwrap())));
    }

    #[test]
    fn tampered_family_closed_form_is_caught() {
        // Declares the rank of child k as k+1 under a root of rank w.
        struct Liar(crate::tree::RankTree);
        impl LazyTree for Liar {
            fn contains(&self, n: &[u64]) -> bool {
                self.0.contains(n)
            }
            fn children(&self, n: &[u64]) -> Children {
                self.0.children(n)
            }
            fn declared_rank(&self, n: &[u64]) -> Option<Ordinal> {
                self.0.declared_rank(n)
            }
            fn declared_family_rank(&self, n: &[u64]) -> Option<crate::ordinal::AffineOrdinal> {
                self.0
                    .declared_family_rank(n)
                    .map(|r| r.add_constant(&Ordinal::one()))
            }
        }
        let af = TreeAf::new(Liar(build_tree_of_rank(&"w".parse().unwrap())));
        let r = verify_symbolic_stages(&af, &af, 20).unwrap();
        assert!(!r.is_ok());
    }

    #[test]
    fn compressed_truncation_matches_explicit() {
        for alpha in ["5", "w", "w+2", "w*2", "w^2", "w^2+w"] {
            let t = build_tree_of_rank(&alpha.parse().unwrap());
            for width in 1..=4 {
                let explicit = af_from_tree(&truncate(&t, width, None, 200_000).unwrap());
                let (quotient, root) = compressed_truncation(&t, width, 10_000).unwrap();
                let e = stages_finite(&explicit.af);
                let q = stages_finite(&quotient);
                assert_eq!(e.get(0), q.get(root), "{alpha} width {width}");
                assert_eq!(
                    grounded_finite(&explicit.af).grounding_ordinal,
                    grounded_finite(&quotient).grounding_ordinal,
                    "{alpha} width {width}"
                );
                let rootless_e = grounded_finite(&drop_root_pair(&explicit.af)).grounding_ordinal;
                let rootless_q = grounded_finite(&drop_root_pair(&quotient)).grounding_ordinal;
                assert_eq!(rootless_e, rootless_q, "{alpha} width {width}");
            }
        }
    }
}
