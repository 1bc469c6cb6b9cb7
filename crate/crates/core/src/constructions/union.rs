use std::sync::Arc;

use super::{Generated, LazyGenerated};
use crate::af::{ArgIndex, AttackerFamily, AttackerSpec, FiniteAf, LazyAf};
use crate::grounded::{stages_finite, StageCandidate, SummaryEntry};
use crate::ordinal::StageValue;
use crate::rank_analysis::{pairing, unpairing};

/// Disjoint union of finitely many frameworks; attacks stay inside parts.
///
/// Argument `j` of part `p` becomes `<p,j>`. When every part is finite the
/// pairs are renumbered by their order as naturals, giving a finite
/// framework whose names are prefixed with `u<p>_`.
pub fn disjoint_union(parts: Vec<Generated>) -> Generated {
    if parts.iter().all(|p| matches!(p, Generated::Finite(_))) {
        let finite: Vec<FiniteAf> = parts
            .into_iter()
            .map(|p| match p {
                Generated::Finite(af) => af,
                Generated::Lazy(_) => unreachable!(),
            })
            .collect();
        return Generated::Finite(finite_union(&finite));
    }
    let lazy: Vec<LazyGenerated> = parts.into_iter().map(Generated::into_lazy).collect();
    let description = format!(
        "union({})",
        lazy.iter()
            .map(|p| p.description.as_str())
            .collect::<Vec<_>>()
            .join(",")
    );
    let u = Arc::new(LazyUnion { parts: lazy });
    Generated::Lazy(LazyGenerated {
        af: u.clone(),
        candidate: u,
        description,
    })
}

/// The finite union, with the position of `(part, local)` given by
/// [`finite_union_index`].
pub fn finite_union(parts: &[FiniteAf]) -> FiniteAf {
    let mut keys: Vec<(u64, usize, usize)> = parts
        .iter()
        .enumerate()
        .flat_map(|(p, af)| (0..af.len()).map(move |j| (pairing(p as u64, j as u64), p, j)))
        .collect();
    keys.sort_unstable();
    let mut position = vec![Vec::new(); parts.len()];
    for (p, af) in parts.iter().enumerate() {
        position[p] = vec![0; af.len()];
    }
    for (idx, &(_, p, j)) in keys.iter().enumerate() {
        position[p][j] = idx;
    }
    let names = keys
        .iter()
        .map(|&(_, p, j)| format!("u{p}_{}", parts[p].name(j)))
        .collect();
    let attacks = parts
        .iter()
        .enumerate()
        .flat_map(|(p, af)| {
            let pos = &position[p];
            af.attack_pairs().map(move |(x, y)| (pos[x], pos[y]))
        })
        .collect::<Vec<_>>();
    FiniteAf::with_names(names, attacks).expect("prefixed names stay unique")
}

/// Index of argument `local` of part `part` in [`finite_union`].
pub fn finite_union_index(parts: &[FiniteAf], part: usize, local: usize) -> usize {
    let key = pairing(part as u64, local as u64);
    parts
        .iter()
        .enumerate()
        .map(|(p, af)| {
            (0..af.len())
                .filter(|&j| pairing(p as u64, j as u64) < key)
                .count()
        })
        .sum()
}

struct LazyUnion {
    parts: Vec<LazyGenerated>,
}

impl LazyUnion {
    fn split(&self, x: ArgIndex) -> Option<(usize, ArgIndex)> {
        let (p, j) = unpairing(x as u64);
        let p = usize::try_from(p).ok()?;
        let j = usize::try_from(j).ok()?;
        (p < self.parts.len() && self.parts[p].af.contains(j)).then_some((p, j))
    }

    /// `<p,j>`, or `None` when it does not fit.
    fn join(p: usize, j: ArgIndex) -> Option<ArgIndex> {
        let s = (p as u64).checked_add(j as u64)?;
        let t = s.checked_mul(s.checked_add(1)?)? / 2;
        usize::try_from(t.checked_add(j as u64)?).ok()
    }
}

impl LazyAf for LazyUnion {
    fn contains(&self, x: ArgIndex) -> bool {
        self.split(x).is_some()
    }

    fn bound(&self) -> Option<usize> {
        None
    }

    fn attacks(&self, x: ArgIndex, y: ArgIndex) -> bool {
        match (self.split(x), self.split(y)) {
            (Some((p, i)), Some((q, j))) => p == q && self.parts[p].af.attacks(i, j),
            _ => false,
        }
    }

    fn attackers(&self, y: ArgIndex) -> AttackerSpec {
        let Some((p, j)) = self.split(y) else {
            return AttackerSpec::Explicit(Vec::new());
        };
        match self.parts[p].af.attackers(j) {
            AttackerSpec::Explicit(xs) => AttackerSpec::Explicit(
                xs.into_iter()
                    .map(|i| Self::join(p, i).expect("union index overflow"))
                    .collect(),
            ),
            AttackerSpec::Families(fams) => AttackerSpec::Families(
                fams.into_iter()
                    .map(|f| AttackerFamily {
                        members: embed(&f.members, p),
                        member_stage: f.member_stage,
                        defense_stage: f.defense_stage,
                    })
                    .collect(),
            ),
        }
    }

    fn label(&self, x: ArgIndex) -> String {
        match self.split(x) {
            Some((p, j)) => format!("u{p}_{}", self.parts[p].af.label(j)),
            None => format!("#{x}"),
        }
    }
}

fn embed(fam: &crate::family::IndexFamily, p: usize) -> crate::family::IndexFamily {
    fam.mapped(
        format!("u{p}:{fam:?}"),
        move |j| LazyUnion::join(p, j),
        move |x| {
            let (q, j) = unpairing(x as u64);
            (q == p as u64).then_some(j as usize)
        },
    )
}

impl StageCandidate for LazyUnion {
    fn stage_of(&self, x: ArgIndex) -> Option<StageValue> {
        let (p, j) = self.split(x)?;
        self.parts[p].candidate.stage_of(j)
    }

    fn summary(&self) -> Vec<SummaryEntry> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(p, part)| {
                part.candidate
                    .summary()
                    .into_iter()
                    .filter_map(move |entry| match entry {
                        SummaryEntry::Point(j, v) => {
                            Self::join(p, j).map(|x| SummaryEntry::Point(x, v))
                        }
                        SummaryEntry::Family(f, e) => Some(SummaryEntry::Family(embed(&f, p), e)),
                    })
            })
            .collect()
    }
}

impl Generated {
    /// The lazy view of a generated framework; finite ones carry their exact
    /// stages as the candidate.
    pub fn into_lazy(self) -> LazyGenerated {
        match self {
            Generated::Lazy(l) => l,
            Generated::Finite(af) => {
                let stages = Arc::new(stages_finite(&af));
                LazyGenerated {
                    description: format!("finite({} arguments)", af.len()),
                    af: Arc::new(af),
                    candidate: stages,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::bs::{baumann_spanring_stages, BaumannSpanring};
    use crate::grounded::{grounded_finite, verify_symbolic_stages};
    use crate::ordinal::Ordinal;

    fn chain3() -> FiniteAf {
        FiniteAf::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn chain_and_cycle() {
        let cycle = FiniteAf::new(2, [(0, 1), (1, 0)]).unwrap();
        let parts = vec![chain3(), cycle.clone()];
        let u = finite_union(&parts);
        assert_eq!(u.len(), 5);
        let r = grounded_finite(&u);
        assert_eq!(r.grounding_ordinal, Ordinal::from_nat(2));
        let mut names = u.names_of(&r.grounded);
        names.sort();
        assert_eq!(names, vec!["u0_a0", "u0_a2"]);
        for (p, af) in parts.iter().enumerate() {
            for j in 0..af.len() {
                let x = finite_union_index(&parts, p, j);
                assert_eq!(u.name(x), format!("u{p}_{}", af.name(j)));
            }
        }
    }

    #[test]
    fn union_with_empty_keeps_stages() {
        let u = finite_union(&[chain3(), FiniteAf::empty()]);
        assert_eq!(
            stages_finite(&u).iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(),
            stages_finite(&chain3()).iter().map(|(_, v)| v.clone()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn lazy_union_verifies() {
        let bs = Generated::Lazy(LazyGenerated {
            af: Arc::new(BaumannSpanring),
            candidate: Arc::new(baumann_spanring_stages()),
            description: "bs".into(),
        });
        let u = disjoint_union(vec![Generated::Finite(chain3()), bs]).into_lazy();
        let r = verify_symbolic_stages(u.af.as_ref(), u.candidate.as_ref(), 200).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.grounding_ordinal, "w*2".parse().unwrap());
        assert_eq!(u.af.label(pairing(1, 1) as usize), "u1_b0");
    }
}
