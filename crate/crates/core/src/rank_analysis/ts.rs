use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;

use super::{complement_of_grounded_plus, unpairing, RankAnalysisError};
use crate::af::{ArgIndex, AttackerSpec, Extension, FiniteAf, LazyAf};
use crate::family::IndexFamily;
use crate::grounded::{grounded_finite, stages_finite};
use crate::tree::{Children, LazyTree, NodePath};

/// The argument examined at a level: the first component of the unpaired
/// level.
fn level_argument(level: usize) -> usize {
    unpairing(level as u64).0 as usize
}

/// Whether `a_n` attacks some member of `mran`. Arguments outside the
/// universe attack nothing.
fn case_one(af: &dyn LazyAf, n: usize, mran: &Extension) -> bool {
    af.contains(n) && mran.iter().any(|x| af.attacks(n, x))
}

/// One family enumerating the members of several pairwise disjoint families.
fn interleave(fams: Vec<IndexFamily>) -> IndexFamily {
    if fams.len() == 1 {
        return fams.into_iter().next().expect("one family");
    }
    let count = fams.len() as u64;
    let fwd = fams.clone();
    IndexFamily::coded(
        format!("interleave{fams:?}"),
        move |k| fwd[(k % count) as usize].member(k / count),
        move |x| {
            fams.iter()
                .enumerate()
                .find_map(|(j, f)| f.locate(x).map(|k| k * count + j as u64))
        },
    )
}

/// Attackers of `y` as tree children, each shifted by `shift`.
fn attacker_children(af: &dyn LazyAf, y: ArgIndex, shift: usize) -> Children {
    match af.attackers(y) {
        AttackerSpec::Explicit(mut xs) => {
            xs.sort_unstable();
            Children::Explicit(xs.into_iter().map(|x| (x + shift) as u64).collect())
        }
        AttackerSpec::Families(fams) => Children::Family(
            interleave(fams.into_iter().map(|f| f.members).collect()).shifted(shift),
        ),
    }
}

/// The tree `T_S`. At a node of length `<n,m>`, if `a_n` attacks the set the
/// node has committed to (`mran`), the children are `i+1` for the attackers
/// `a_i` of `a_n`; otherwise the only child is `0`.
pub struct TsTree<'a> {
    af: &'a dyn LazyAf,
    seed: Extension,
}

impl<'a> TsTree<'a> {
    pub fn new(af: &'a dyn LazyAf, seed: Extension) -> Self {
        TsTree { af, seed }
    }

    /// `S` together with `a_{s-1}` for every positive symbol `s` of the node;
    /// `None` when the node is not in the tree.
    pub fn mran(&self, node: &[u64]) -> Option<Extension> {
        let mut mran = self.seed.clone();
        for (level, &s) in node.iter().enumerate() {
            let n = level_argument(level);
            if case_one(self.af, n, &mran) {
                let i = usize::try_from(s.checked_sub(1)?).ok()?;
                if !self.af.contains(i) || !self.af.attacks(i, n) {
                    return None;
                }
                mran.insert(i);
            } else if s != 0 {
                return None;
            }
        }
        Some(mran)
    }
}

impl LazyTree for TsTree<'_> {
    fn contains(&self, node: &[u64]) -> bool {
        self.mran(node).is_some()
    }

    fn children(&self, node: &[u64]) -> Children {
        let Some(mran) = self.mran(node) else {
            return Children::Explicit(Vec::new());
        };
        let n = level_argument(node.len());
        if case_one(self.af, n, &mran) {
            attacker_children(self.af, n, 1)
        } else {
            Children::Explicit(vec![0])
        }
    }
}

/// The tree `T^a`: the root, and `i` followed by any node of `T_{a_i}` for
/// each attacker `a_i` of `a`.
pub struct TaTree<'a> {
    af: &'a dyn LazyAf,
    target: ArgIndex,
}

impl<'a> TaTree<'a> {
    pub fn new(af: &'a dyn LazyAf, target: ArgIndex) -> Self {
        TaTree { af, target }
    }

    fn split<'n>(&self, node: &'n [u64]) -> Option<(TsTree<'a>, &'n [u64])> {
        let (&i, rest) = node.split_first()?;
        let i = usize::try_from(i).ok()?;
        (self.af.contains(i) && self.af.attacks(i, self.target))
            .then(|| (TsTree::new(self.af, Extension::from([i])), rest))
    }

    /// `mran` of the `T_{a_i}` node below the first symbol.
    pub fn mran(&self, node: &[u64]) -> Option<Extension> {
        let (ts, rest) = self.split(node)?;
        ts.mran(rest)
    }
}

impl LazyTree for TaTree<'_> {
    fn contains(&self, node: &[u64]) -> bool {
        node.is_empty() || self.split(node).is_some_and(|(ts, rest)| ts.contains(rest))
    }

    fn children(&self, node: &[u64]) -> Children {
        if node.is_empty() {
            return attacker_children(self.af, self.target, 0);
        }
        match self.split(node) {
            Some((ts, rest)) => ts.children(rest),
            None => Children::Explicit(Vec::new()),
        }
    }
}

type State = (usize, FixedBitSet);

/// Exhaustive ranks of `T_S` subtrees over a finite framework.
///
/// The subtree above a node depends only on its length and its `mran`, so
/// ranks are memoised on that pair and shared between seeds. A subtree with
/// a path never finishes; the state cap turns that into an error.
pub struct StateRanker<'a> {
    af: &'a FiniteAf,
    memo: HashMap<State, u64>,
    cap: usize,
}

impl<'a> StateRanker<'a> {
    pub fn new(af: &'a FiniteAf, cap: usize) -> Self {
        StateRanker {
            af,
            memo: HashMap::new(),
            cap,
        }
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Every ranked state as `(level, mran, rank)`.
    pub fn states(&self) -> impl Iterator<Item = (usize, Extension, u64)> + '_ {
        self.memo
            .iter()
            .map(|((level, bits), &r)| (*level, Extension::from_bits(bits), r))
    }

    fn children(&self, (level, mran): &State) -> Vec<State> {
        let n = level_argument(*level);
        let attacks_mran =
            n < self.af.len() && self.af.attacked_by(n).iter().any(|&x| mran.contains(x));
        if attacks_mran {
            self.af
                .attackers_of(n)
                .iter()
                .map(|&i| {
                    let mut next = mran.clone();
                    next.insert(i);
                    (level + 1, next)
                })
                .collect()
        } else {
            vec![(level + 1, mran.clone())]
        }
    }

    /// Rank of the `T_S` subtree at a node of length `level` whose `mran` is
    /// `mran`.
    pub fn rank(&mut self, level: usize, mran: &Extension) -> Result<u64, RankAnalysisError> {
        self.af.check_extension(mran)?;
        let root: State = (level, mran.to_bits(self.af.len()));
        if let Some(&r) = self.memo.get(&root) {
            return Ok(r);
        }
        let kids = self.children(&root);
        // (state, children, next child, best child rank + 1)
        let mut stack: Vec<(State, Vec<State>, usize, u64)> = vec![(root.clone(), kids, 0, 0)];
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let child = top.1[top.2].clone();
                top.2 += 1;
                if let Some(&r) = self.memo.get(&child) {
                    top.3 = top.3.max(r + 1);
                } else {
                    if self.memo.len() + stack.len() > self.cap {
                        return Err(RankAnalysisError::StateCap { cap: self.cap });
                    }
                    let kids = self.children(&child);
                    stack.push((child, kids, 0, 0));
                }
                continue;
            }
            let (state, _, _, best) = stack.pop().expect("non-empty");
            self.memo.insert(state, best);
            if let Some(parent) = stack.last_mut() {
                parent.3 = parent.3.max(best + 1);
            }
        }
        Ok(self.memo[&root])
    }
}

/// Both directions of "T_S has a path iff S avoids G+".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TsCertificate {
    /// A verified prefix of a path.
    Path(NodePath),
    /// The tree is finite; its rank and the number of distinct states seen.
    NoPath { rank: u64, states: usize },
}

impl TsCertificate {
    pub fn path_exists(&self) -> bool {
        matches!(self, TsCertificate::Path(_))
    }
}

/// Follows `T_S` from `seed`, answering each attack on the committed set
/// with the least attacker inside `allowed`.
fn defended_path(
    af: &FiniteAf,
    seed: &Extension,
    allowed: &Extension,
    len: usize,
) -> Result<NodePath, RankAnalysisError> {
    let mut mran = seed.clone();
    let mut path = Vec::with_capacity(len);
    for level in 0..len {
        let n = level_argument(level);
        if case_one(af, n, &mran) {
            let i = af
                .attackers_of(n)
                .iter()
                .copied()
                .find(|&i| allowed.contains(i))
                .ok_or_else(|| {
                    RankAnalysisError::CertificateFailed(format!(
                        "no allowed defender against {} at level {level}",
                        af.name(n)
                    ))
                })?;
            path.push(i as u64 + 1);
            mran.insert(i);
        } else {
            path.push(0);
        }
    }
    Ok(path)
}

/// Decides whether `T_S` has a path by testing `S` against `G+`, then
/// certifies the answer on the tree itself: a membership-checked prefix of
/// length `depth`, or a terminating exhaustive expansion.
pub fn ts_path_exists(
    af: &FiniteAf,
    s: &Extension,
    depth: usize,
    cap: usize,
) -> Result<TsCertificate, RankAnalysisError> {
    af.check_extension(s)?;
    let allowed = complement_of_grounded_plus(af);
    if s.is_subset(&allowed) {
        let prefix = defended_path(af, s, &allowed, depth)?;
        if !TsTree::new(af, s.clone()).contains(&prefix) {
            return Err(RankAnalysisError::CertificateFailed(format!(
                "prefix {prefix:?} is not in the tree"
            )));
        }
        Ok(TsCertificate::Path(prefix))
    } else {
        let mut ranker = StateRanker::new(af, cap);
        let rank = ranker.rank(0, s)?;
        Ok(TsCertificate::NoPath {
            rank,
            states: ranker.len(),
        })
    }
}

/// Exhaustive rank of `T^a`; fails through the cap when `T^a` has a path.
pub fn ta_rank(
    ranker: &mut StateRanker<'_>,
    a: ArgIndex,
) -> Result<u64, RankAnalysisError> {
    let attackers = ranker.af.attackers_of(a).to_vec();
    let mut best = 0;
    for i in attackers {
        best = best.max(ranker.rank(0, &Extension::from([i]))? + 1);
    }
    Ok(best)
}

/// The path through `T^a` built from least choices outside `G+`: first the
/// least attacker of `a` outside `G+`, then at every attack on the committed
/// set the least defender outside `G+`.
pub fn witness_path(
    af: &FiniteAf,
    a: ArgIndex,
    length: usize,
) -> Result<NodePath, RankAnalysisError> {
    af.check_extension(&Extension::from([a]))?;
    if grounded_finite(af).grounded.contains(a) {
        return Err(RankAnalysisError::InGrounded(af.name(a).to_string()));
    }
    if length == 0 {
        return Ok(Vec::new());
    }
    let allowed = complement_of_grounded_plus(af);
    let first = af
        .attackers_of(a)
        .iter()
        .copied()
        .find(|&i| allowed.contains(i))
        .ok_or_else(|| {
            RankAnalysisError::CertificateFailed(format!(
                "{} is outside G but every attacker is in G+",
                af.name(a)
            ))
        })?;
    let mut path = vec![first as u64];
    path.extend(defended_path(
        af,
        &Extension::from([first]),
        &allowed,
        length - 1,
    )?);
    if !TaTree::new(af, a).contains(&path) {
        return Err(RankAnalysisError::CertificateFailed(format!(
            "witness {path:?} is not in the tree"
        )));
    }
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeViolation {
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BridgeReport {
    /// Exhaustive rank of `T^a` for each `a` in `G`.
    pub ta_ranks: BTreeMap<ArgIndex, u64>,
    pub states_checked: usize,
    pub violations: Vec<BridgeViolation>,
}

impl BridgeReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every `a` in `G`, the rank `r` of `T^a` must satisfy `a in G_{r+1}`;
/// for every `T_S` state met on the way, of rank `q`, some member of
/// `G_{q+1}` must attack its `mran`.
pub fn rank_stage_bridge_check(
    af: &FiniteAf,
    cap: usize,
) -> Result<BridgeReport, RankAnalysisError> {
    let stages = stages_finite(af);
    let stage_nat = |x: ArgIndex| {
        stages
            .get(x)
            .and_then(|v| v.ordinal())
            .and_then(|o| o.as_nat())
    };
    let grounded = grounded_finite(af).grounded;
    let mut ranker = StateRanker::new(af, cap);
    let mut report = BridgeReport::default();
    for a in &grounded {
        let r = ta_rank(&mut ranker, a)?;
        report.ta_ranks.insert(a, r);
        if stage_nat(a).is_none_or(|s| s > r + 1) {
            report.violations.push(BridgeViolation {
                message: format!("{}: T^a has rank {r} but stage is {:?}", af.name(a), stage_nat(a)),
            });
        }
    }
    for (level, mran, q) in ranker.states() {
        report.states_checked += 1;
        let ok = (0..af.len()).any(|x| {
            stage_nat(x).is_some_and(|s| s <= q + 1)
                && af.attacked_by(x).iter().any(|&y| mran.contains(y))
        });
        if !ok {
            report.violations.push(BridgeViolation {
                message: format!(
                    "state at level {level} with mran {:?} has rank {q} but G_{} attacks none of it",
                    af.names_of(&mran),
                    q + 1
                ),
            });
        }
    }
    Ok(report)
}
