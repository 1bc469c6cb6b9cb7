//! Argumentation frameworks and the primitive set operators.
//!
//! Arguments are natural numbers. A [`FiniteAf`] stores its attack relation
//! explicitly, forward and reversed. Infinite frameworks implement
//! [`LazyAf`]: a decidable attack predicate plus, for every argument, a
//! description of its attackers that is either an explicit list or a list of
//! infinite [`AttackerFamily`]s.

mod apx;
mod dot;

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::family::IndexFamily;
use crate::ordinal::StageExpr;

pub use apx::{parse_apx, to_apx};
pub use dot::{parse_dot, to_dot};

pub type ArgIndex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AfError {
    #[error("argument index {index} out of range for a framework of {len} arguments")]
    OutOfRange { index: ArgIndex, len: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown argument `{0}`")]
    UnknownArgument(String),
    #[error("duplicate argument `{0}`")]
    DuplicateArgument(String),
    #[error("invalid argument name `{0}` (expected [a-zA-Z0-9_]+)")]
    InvalidName(String),
}

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite set of arguments.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Extension(BTreeSet<ArgIndex>);

impl Extension {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, x: ArgIndex) -> bool {
        self.0.contains(&x)
    }

    pub fn insert(&mut self, x: ArgIndex) -> bool {
        self.0.insert(x)
    }

    pub fn remove(&mut self, x: ArgIndex) -> bool {
        self.0.remove(&x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ArgIndex> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &Extension) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Extension) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &Extension) -> Extension {
        Extension(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &Extension) -> Extension {
        Extension(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &Extension) -> Extension {
        Extension(self.0.difference(&other.0).copied().collect())
    }

    pub fn max(&self) -> Option<ArgIndex> {
        self.0.last().copied()
    }

    pub(crate) fn to_bits(&self, n: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(n);
        for x in self.iter() {
            bits.insert(x);
        }
        bits
    }

    pub(crate) fn from_bits(bits: &FixedBitSet) -> Extension {
        bits.ones().collect()
    }
}

impl FromIterator<ArgIndex> for Extension {
    fn from_iter<I: IntoIterator<Item = ArgIndex>>(iter: I) -> Self {
        Extension(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[ArgIndex; N]> for Extension {
    fn from(xs: [ArgIndex; N]) -> Self {
        xs.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a Extension {
    type Item = ArgIndex;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, ArgIndex>>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// A framework with arguments `0..n`, each carrying a unique display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAf {
    names: Vec<String>,
    attacked: Vec<Vec<ArgIndex>>,
    attackers: Vec<Vec<ArgIndex>>,
    by_name: HashMap<String, ArgIndex>,
}

impl FiniteAf {
    /// Arguments named `a0, a1, ...`.
    pub fn new(
        n: usize,
        attacks: impl IntoIterator<Item = (ArgIndex, ArgIndex)>,
    ) -> Result<Self, AfError> {
        Self::with_names((0..n).map(|i| format!("a{i}")).collect(), attacks)
    }

    pub fn with_names(
        names: Vec<String>,
        attacks: impl IntoIterator<Item = (ArgIndex, ArgIndex)>,
    ) -> Result<Self, AfError> {
        let n = names.len();
        let mut by_name = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if !is_valid_name(name) {
                return Err(AfError::InvalidName(name.clone()));
            }
            if by_name.insert(name.clone(), i).is_some() {
                return Err(AfError::DuplicateArgument(name.clone()));
            }
        }
        let mut attacked = vec![Vec::new(); n];
        let mut attackers = vec![Vec::new(); n];
        for (x, y) in attacks {
            for index in [x, y] {
                if index >= n {
                    return Err(AfError::OutOfRange { index, len: n });
                }
            }
            attacked[x].push(y);
            attackers[y].push(x);
        }
        for list in attacked.iter_mut().chain(attackers.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Ok(FiniteAf {
            names,
            attacked,
            attackers,
            by_name,
        })
    }

    pub fn empty() -> Self {
        Self::new(0, []).expect("empty framework")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: ArgIndex) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<ArgIndex, AfError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| AfError::UnknownArgument(name.to_string()))
    }

    fn check(&self, x: ArgIndex) -> Result<(), AfError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(AfError::OutOfRange {
                index: x,
                len: self.len(),
            })
        }
    }

    pub fn check_extension(&self, s: &Extension) -> Result<(), AfError> {
        match s.max() {
            Some(m) => self.check(m),
            None => Ok(()),
        }
    }

    pub fn attacks(&self, x: ArgIndex, y: ArgIndex) -> Result<bool, AfError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.attacked[x].binary_search(&y).is_ok())
    }

    /// Arguments attacking `y`, ascending.
    pub fn attackers_of(&self, y: ArgIndex) -> &[ArgIndex] {
        &self.attackers[y]
    }

    /// Arguments attacked by `x`, ascending.
    pub fn attacked_by(&self, x: ArgIndex) -> &[ArgIndex] {
        &self.attacked[x]
    }

    pub fn attack_pairs(&self) -> impl Iterator<Item = (ArgIndex, ArgIndex)> + '_ {
        self.attacked
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    pub fn attack_count(&self) -> usize {
        self.attacked.iter().map(Vec::len).sum()
    }

    pub fn universe(&self) -> Extension {
        (0..self.len()).collect()
    }

    /// `S+`: the arguments attacked by some member of `s`.
    pub fn plus_set(&self, s: &Extension) -> Result<Extension, AfError> {
        self.check_extension(s)?;
        Ok(s.iter().flat_map(|x| self.attacked[x].iter().copied()).collect())
    }

    /// `S-`: the arguments attacking some member of `s`.
    pub fn minus_set(&self, s: &Extension) -> Result<Extension, AfError> {
        self.check_extension(s)?;
        Ok(s.iter().flat_map(|y| self.attackers[y].iter().copied()).collect())
    }

    /// The defense function: every argument all of whose attackers are
    /// attacked by `s`.
    pub fn defense_step(&self, s: &Extension) -> Result<Extension, AfError> {
        self.check_extension(s)?;
        Ok(Extension::from_bits(&self.defense_bits(&s.to_bits(self.len()))))
    }

    pub fn is_conflict_free(&self, s: &Extension) -> Result<bool, AfError> {
        self.check_extension(s)?;
        Ok(s
            .iter()
            .all(|x| self.attacked[x].iter().all(|y| !s.contains(*y))))
    }

    pub(crate) fn plus_bits(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for x in s.ones() {
            for &y in &self.attacked[x] {
                out.insert(y);
            }
        }
        out
    }

    pub(crate) fn defense_bits(&self, s: &FixedBitSet) -> FixedBitSet {
        let plus = self.plus_bits(s);
        let mut out = FixedBitSet::with_capacity(self.len());
        for x in 0..self.len() {
            if self.attackers[x].iter().all(|&y| plus.contains(y)) {
                out.insert(x);
            }
        }
        out
    }

    /// The sub-framework induced by `keep` (ascending order is preserved;
    /// names carry over).
    pub fn restrict(&self, keep: &Extension) -> Result<FiniteAf, AfError> {
        self.check_extension(keep)?;
        let order: Vec<ArgIndex> = keep.iter().collect();
        let mut new_index = vec![usize::MAX; self.len()];
        for (i, &x) in order.iter().enumerate() {
            new_index[x] = i;
        }
        let names = order.iter().map(|&x| self.names[x].clone()).collect();
        let attacks: Vec<_> = self
            .attack_pairs()
            .filter(|(x, y)| keep.contains(*x) && keep.contains(*y))
            .map(|(x, y)| (new_index[x], new_index[y]))
            .collect();
        FiniteAf::with_names(names, attacks)
    }

    pub fn names_of(&self, s: &Extension) -> Vec<String> {
        s.iter().map(|x| self.names[x].clone()).collect()
    }

    pub fn parse_set(&self, names: &str) -> Result<Extension, AfError> {
        names
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.index_of(s))
            .collect()
    }
}

/// An infinite family of attackers of one argument.
#[derive(Debug, Clone)]
pub struct AttackerFamily {
    pub members: IndexFamily,
    /// Claimed closed form, in the family parameter `k`, for the stage of
    /// member `k` itself.
    pub member_stage: Option<StageExpr>,
    /// Claimed closed form, in the family parameter `k`, for the least stage
    /// of an attacker of member `k`.
    ///
    /// Both closed forms are checked by the stage verifier, never trusted.
    pub defense_stage: Option<StageExpr>,
}

impl AttackerFamily {
    pub fn plain(members: IndexFamily) -> Self {
        AttackerFamily {
            members,
            member_stage: None,
            defense_stage: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum AttackerSpec {
    Explicit(Vec<ArgIndex>),
    Families(Vec<AttackerFamily>),
}

impl AttackerSpec {
    pub fn is_explicit(&self) -> bool {
        matches!(self, AttackerSpec::Explicit(_))
    }

    /// Whether `x` is listed by this spec.
    pub fn lists(&self, x: ArgIndex) -> bool {
        match self {
            AttackerSpec::Explicit(xs) => xs.contains(&x),
            AttackerSpec::Families(fams) => fams.iter().any(|f| f.members.locate(x).is_some()),
        }
    }
}

/// A framework presented by a decidable attack predicate and per-argument
/// attacker descriptions. The universe is a decidable subset of the naturals.
pub trait LazyAf: Send + Sync {
    fn contains(&self, x: ArgIndex) -> bool;

    /// Some `n` when every argument is below `n`; `None` for infinite universes.
    fn bound(&self) -> Option<usize>;

    fn attacks(&self, x: ArgIndex, y: ArgIndex) -> bool;

    fn attackers(&self, y: ArgIndex) -> AttackerSpec;

    fn label(&self, x: ArgIndex) -> String {
        format!("#{x}")
    }

    /// A deterministic finite sample of arguments, used by spot checks.
    fn sample(&self, budget: usize) -> Vec<ArgIndex> {
        let limit = self.bound().unwrap_or(usize::MAX);
        (0..limit)
            .take(budget.saturating_mul(64))
            .filter(|&x| self.contains(x))
            .take(budget)
            .collect()
    }
}

impl LazyAf for FiniteAf {
    fn contains(&self, x: ArgIndex) -> bool {
        x < self.len()
    }

    fn bound(&self) -> Option<usize> {
        Some(self.len())
    }

    fn attacks(&self, x: ArgIndex, y: ArgIndex) -> bool {
        x < self.len() && y < self.len() && self.attacked[x].binary_search(&y).is_ok()
    }

    fn attackers(&self, y: ArgIndex) -> AttackerSpec {
        AttackerSpec::Explicit(self.attackers.get(y).cloned().unwrap_or_default())
    }

    fn label(&self, x: ArgIndex) -> String {
        self.names
            .get(x)
            .cloned()
            .unwrap_or_else(|| format!("#{x}"))
    }

    fn sample(&self, budget: usize) -> Vec<ArgIndex> {
        (0..self.len().min(budget)).collect()
    }
}

/// A failed soundness or completeness obligation of an attacker spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecViolation {
    pub argument: ArgIndex,
    pub message: String,
}

/// Spot-checks attacker specs against the attack predicate: every listed
/// attacker attacks (families checked for `k < family_sample`, which must
/// also give distinct members), and every attacker below `scan_bound` is
/// listed.
pub fn check_attacker_specs(
    af: &dyn LazyAf,
    args: &[ArgIndex],
    scan_bound: usize,
    family_sample: u64,
) -> Vec<SpecViolation> {
    let mut out = Vec::new();
    for &a in args {
        let spec = af.attackers(a);
        let mut report = |message: String| {
            out.push(SpecViolation {
                argument: a,
                message,
            })
        };
        match &spec {
            AttackerSpec::Explicit(xs) => {
                for &b in xs {
                    if !af.attacks(b, a) {
                        report(format!("listed attacker {} does not attack", af.label(b)));
                    }
                }
            }
            AttackerSpec::Families(fams) => {
                for fam in fams {
                    let mut seen = BTreeSet::new();
                    for k in 0..family_sample {
                        let Some(b) = fam.members.member(k) else {
                            break;
                        };
                        if !seen.insert(b) {
                            report(format!("family {:?} repeats member {b}", fam.members));
                        }
                        if fam.members.locate(b) != Some(k) {
                            report(format!("family {:?} cannot locate member {k}", fam.members));
                        }
                        if !af.attacks(b, a) {
                            report(format!(
                                "family member {} (k={k}) does not attack",
                                af.label(b)
                            ));
                        }
                    }
                }
            }
        }
        let limit = af.bound().map_or(scan_bound, |n| n.min(scan_bound));
        for y in 0..limit {
            if af.contains(y) && af.attacks(y, a) && !spec.lists(y) {
                report(format!("attacker {} missing from spec", af.label(y)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FiniteAf {
        FiniteAf::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn two_cycle() -> FiniteAf {
        FiniteAf::new(2, [(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn attacks_on_chain() {
        let af = chain3();
        assert!(af.attacks(0, 1).unwrap());
        assert!(!af.attacks(1, 0).unwrap());
        assert_eq!(
            af.attacks(0, 3),
            Err(AfError::OutOfRange { index: 3, len: 3 })
        );
    }

    #[test]
    fn plus_and_minus_sets() {
        let af = chain3();
        assert_eq!(af.plus_set(&[0].into()).unwrap(), [1].into());
        assert_eq!(af.plus_set(&Extension::new()).unwrap(), Extension::new());
        assert_eq!(af.minus_set(&[1].into()).unwrap(), [0].into());
        assert_eq!(af.minus_set(&Extension::new()).unwrap(), Extension::new());
        let cyc = two_cycle();
        assert_eq!(cyc.plus_set(&[0].into()).unwrap(), [1].into());
        assert_eq!(cyc.minus_set(&[0].into()).unwrap(), [1].into());
        assert!(af.plus_set(&[5].into()).is_err());
    }

    #[test]
    fn defense_step_examples() {
        let af = chain3();
        assert_eq!(af.defense_step(&Extension::new()).unwrap(), [0].into());
        assert_eq!(af.defense_step(&[0].into()).unwrap(), [0, 2].into());
        let free = FiniteAf::new(4, []).unwrap();
        assert_eq!(free.defense_step(&[2].into()).unwrap(), free.universe());
    }

    #[test]
    fn conflict_freeness() {
        assert!(chain3().is_conflict_free(&Extension::new()).unwrap());
        assert!(!two_cycle().is_conflict_free(&[0, 1].into()).unwrap());
        assert!(chain3().is_conflict_free(&[0, 2].into()).unwrap());
        let selfish = FiniteAf::new(1, [(0, 0)]).unwrap();
        assert!(!selfish.is_conflict_free(&[0].into()).unwrap());
    }

    #[test]
    fn names_and_restriction() {
        let af = chain3();
        assert_eq!(af.index_of("a2").unwrap(), 2);
        assert!(af.index_of("zz").is_err());
        assert_eq!(af.parse_set("a0, a2").unwrap(), [0, 2].into());
        let sub = af.restrict(&[1, 2].into()).unwrap();
        assert_eq!(sub.names(), ["a1", "a2"]);
        assert!(sub.attacks(0, 1).unwrap());
        assert!(FiniteAf::with_names(vec!["x".into(), "x".into()], []).is_err());
        assert!(FiniteAf::with_names(vec!["a-b".into()], []).is_err());
    }

    #[test]
    fn finite_af_spec_is_sound_and_complete() {
        let af = FiniteAf::new(4, [(0, 1), (2, 1), (3, 3), (1, 0)]).unwrap();
        let args: Vec<_> = (0..4).collect();
        assert!(check_attacker_specs(&af, &args, 100, 10).is_empty());
    }
}
