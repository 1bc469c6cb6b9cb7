use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{GroundedError, StageMap};
use crate::af::{ArgIndex, AttackerSpec, LazyAf};
use crate::family::IndexFamily;
use crate::ordinal::{Ordinal, StageExpr, StageValue};

/// A claimed stage assignment for a (possibly infinite) framework.
pub trait StageCandidate: Send + Sync {
    /// `None` when the candidate says nothing about `x`.
    fn stage_of(&self, x: ArgIndex) -> Option<StageValue>;

    /// Finitely many entries whose stages are cofinal in all stages of the
    /// candidate. The grounding ordinal is read off from these.
    fn summary(&self) -> Vec<SummaryEntry>;
}

#[derive(Debug, Clone)]
pub enum SummaryEntry {
    Point(ArgIndex, StageValue),
    Family(IndexFamily, StageExpr),
}

impl StageCandidate for StageMap {
    fn stage_of(&self, x: ArgIndex) -> Option<StageValue> {
        self.get(x).cloned()
    }

    fn summary(&self) -> Vec<SummaryEntry> {
        self.iter()
            .map(|(x, v)| SummaryEntry::Point(x, v.clone()))
            .collect()
    }
}

/// Closed-form stages on finitely many index families, with explicit
/// exceptions taking precedence.
#[derive(Debug, Clone, Default)]
pub struct FamilyStageMap {
    pub families: Vec<(IndexFamily, StageExpr)>,
    pub exceptions: BTreeMap<ArgIndex, StageValue>,
}

impl StageCandidate for FamilyStageMap {
    fn stage_of(&self, x: ArgIndex) -> Option<StageValue> {
        if let Some(v) = self.exceptions.get(&x) {
            return Some(v.clone());
        }
        self.families
            .iter()
            .find_map(|(fam, expr)| fam.locate(x).map(|k| expr.eval(k)))
    }

    fn summary(&self) -> Vec<SummaryEntry> {
        self.families
            .iter()
            .map(|(f, e)| SummaryEntry::Family(f.clone(), e.clone()))
            .chain(
                self.exceptions
                    .iter()
                    .map(|(&x, v)| SummaryEntry::Point(x, v.clone())),
            )
            .collect()
    }
}

/// Supremum of all stages named by the summary; `NEVER` entries are ignored.
/// This is the maximum when it is attained and a limit otherwise.
pub fn symbolic_grounding_ordinal(candidate: &dyn StageCandidate) -> Ordinal {
    candidate
        .summary()
        .iter()
        .filter_map(|entry| match entry {
            SummaryEntry::Point(_, v) => v.ordinal().cloned(),
            SummaryEntry::Family(_, e) => e.sup().ordinal().cloned(),
        })
        .max()
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// The claimed stage is larger than the least one.
    NotLeast,
    /// The claimed stage is too small, or the argument is never defended.
    Undefended,
    /// `NEVER` was claimed but the argument is defended.
    Defended,
    /// A family closed form disagrees with the candidate on a sampled member.
    FamilyMismatch,
    /// A stage above the supremum of the summary.
    ExceedsSummary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageViolation {
    pub argument: ArgIndex,
    pub kind: ViolationKind,
    pub claimed: StageValue,
    pub expected: StageValue,
    pub message: String,
}

impl fmt::Display for StageViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at {}: claimed {}, expected {} ({})",
            self.kind, self.argument, self.claimed, self.expected, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicReport {
    pub checked: usize,
    pub violations: Vec<StageViolation>,
    pub grounding_ordinal: Ordinal,
}

impl SymbolicReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, on a sample of arguments, that the candidate satisfies
///
/// ```text
/// stage(a) = sup { min { stage(c) : c att b } : b att a } + 1
/// ```
///
/// with `NEVER` absorbing (an unattacked attacker, or one whose attackers
/// all have stage `NEVER`, makes `a` `NEVER`). The least stages are the only
/// assignment satisfying this equation everywhere, so every violation is a
/// genuine error and the only gap is the sampling. Infinite attacker lists
/// are quantified through the closed forms their families carry, and those
/// closed forms are themselves checked for the first `sample` members.
pub fn verify_symbolic_stages(
    af: &dyn LazyAf,
    candidate: &dyn StageCandidate,
    sample: usize,
) -> Result<SymbolicReport, GroundedError> {
    let v = Verifier {
        af,
        candidate,
        sample: sample as u64,
    };
    let summary = candidate.summary();
    let grounding_ordinal = symbolic_grounding_ordinal(candidate);
    let mut violations = Vec::new();

    let mut args: BTreeSet<ArgIndex> = af.sample(sample).into_iter().collect();
    for entry in &summary {
        match entry {
            SummaryEntry::Point(x, claimed) => {
                args.insert(*x);
                let actual = v.stage(*x)?;
                if &actual != claimed {
                    violations.push(StageViolation {
                        argument: *x,
                        kind: ViolationKind::FamilyMismatch,
                        claimed: claimed.clone(),
                        expected: actual,
                        message: "summary point disagrees with the candidate".into(),
                    });
                }
            }
            SummaryEntry::Family(fam, expr) => {
                for (k, x) in v.members(fam) {
                    args.insert(x);
                    let actual = v.stage(x)?;
                    if actual != expr.eval(k) {
                        violations.push(StageViolation {
                            argument: x,
                            kind: ViolationKind::FamilyMismatch,
                            claimed: expr.eval(k),
                            expected: actual,
                            message: format!("summary family {fam:?} at k={k}"),
                        });
                    }
                }
            }
        }
    }
    args.retain(|&x| af.contains(x));

    for &a in &args {
        let claimed = v.stage(a)?;
        let expected = v.required(a, &mut violations)?;
        if let StageValue::Stage(s) = &claimed {
            if *s > grounding_ordinal {
                violations.push(StageViolation {
                    argument: a,
                    kind: ViolationKind::ExceedsSummary,
                    claimed: claimed.clone(),
                    expected: StageValue::Stage(grounding_ordinal.clone()),
                    message: "stage above the supremum of the summary".into(),
                });
            }
        }
        if claimed == expected {
            continue;
        }
        let kind = match (&claimed, &expected) {
            (StageValue::Never, _) => ViolationKind::Defended,
            (StageValue::Stage(c), StageValue::Stage(e)) if c > e => ViolationKind::NotLeast,
            _ => ViolationKind::Undefended,
        };
        violations.push(StageViolation {
            argument: a,
            kind,
            message: format!("{} is in G_{expected} first", af.label(a)),
            claimed,
            expected,
        });
    }
    Ok(SymbolicReport {
        checked: args.len(),
        violations,
        grounding_ordinal,
    })
}

struct Verifier<'a> {
    af: &'a dyn LazyAf,
    candidate: &'a dyn StageCandidate,
    sample: u64,
}

impl Verifier<'_> {
    fn stage(&self, x: ArgIndex) -> Result<StageValue, GroundedError> {
        self.candidate
            .stage_of(x)
            .ok_or_else(|| GroundedError::IncompleteCandidate(self.af.label(x)))
    }

    fn members(&self, fam: &IndexFamily) -> Vec<(u64, ArgIndex)> {
        (0..self.sample)
            .map_while(|k| fam.member(k).map(|x| (k, x)))
            .collect()
    }

    /// Least stage of an attacker of `b`, or `NEVER`.
    fn min_attacker_stage(
        &self,
        b: ArgIndex,
        violations: &mut Vec<StageViolation>,
    ) -> Result<StageValue, GroundedError> {
        match self.af.attackers(b) {
            AttackerSpec::Explicit(cs) => {
                let mut best = StageValue::Never;
                for c in cs {
                    best = best.min(self.stage(c)?);
                }
                Ok(best)
            }
            AttackerSpec::Families(fams) => {
                let mut best = StageValue::Never;
                for fam in fams {
                    let expr = fam.member_stage.ok_or_else(|| GroundedError::MissingClosedForm {
                        argument: self.af.label(b),
                        what: "member stage",
                    })?;
                    for (k, c) in self.members(&fam.members) {
                        let actual = self.stage(c)?;
                        if actual != expr.eval(k) {
                            violations.push(StageViolation {
                                argument: c,
                                kind: ViolationKind::FamilyMismatch,
                                claimed: expr.eval(k),
                                expected: actual,
                                message: format!(
                                    "member stage of attackers of {} at k={k}",
                                    self.af.label(b)
                                ),
                            });
                        }
                    }
                    // Affine expressions are nondecreasing in k.
                    best = best.min(expr.min());
                }
                Ok(best)
            }
        }
    }

    /// The stage forced on `a` by the candidate's values on its attackers'
    /// attackers.
    fn required(
        &self,
        a: ArgIndex,
        violations: &mut Vec<StageViolation>,
    ) -> Result<StageValue, GroundedError> {
        let mut parts: Vec<StageValue> = Vec::new();
        match self.af.attackers(a) {
            AttackerSpec::Explicit(bs) => {
                for b in bs {
                    parts.push(self.min_attacker_stage(b, violations)?);
                }
            }
            AttackerSpec::Families(fams) => {
                for fam in fams {
                    let expr = fam.defense_stage.ok_or_else(|| GroundedError::MissingClosedForm {
                        argument: self.af.label(a),
                        what: "defense stage",
                    })?;
                    for (k, b) in self.members(&fam.members) {
                        let actual = self.min_attacker_stage(b, violations)?;
                        if actual != expr.eval(k) {
                            violations.push(StageViolation {
                                argument: b,
                                kind: ViolationKind::FamilyMismatch,
                                claimed: expr.eval(k),
                                expected: actual,
                                message: format!(
                                    "defense stage of attackers of {} at k={k}",
                                    self.af.label(a)
                                ),
                            });
                        }
                    }
                    parts.push(expr.sup());
                }
            }
        }
        let mut top = Ordinal::zero();
        for p in parts {
            match p {
                StageValue::Never => return Ok(StageValue::Never),
                StageValue::Stage(s) => top = top.max(s),
            }
        }
        Ok(StageValue::Stage(top.successor()))
    }
}
