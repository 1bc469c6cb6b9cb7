//! Two chains `a_0 -> a_1 -> ...` and `b_0 -> b_1 -> ...` where every odd
//! `a_{2k+1}` also attacks `b_0`. The even `a`s enter the grounded extension
//! at the finite stages, `b_0` only at `w+1`, and the grounding ordinal is
//! `w*2`. Indices: `a_i = 2i`, `b_i = 2i+1`.

use std::collections::BTreeMap;

use crate::af::{ArgIndex, AttackerFamily, AttackerSpec, FiniteAf, LazyAf};
use crate::family::IndexFamily;
use crate::grounded::FamilyStageMap;
use crate::ordinal::{AffineOrdinal, AffineTerm, Ordinal, StageExpr, StageValue};

pub fn a(i: usize) -> ArgIndex {
    2 * i
}

pub fn b(i: usize) -> ArgIndex {
    2 * i + 1
}

/// `a_0..a_{n-1}` and `b_0..b_{n-1}` with the attacks among them.
pub fn baumann_spanring_finite(n: usize) -> FiniteAf {
    let mut names = Vec::with_capacity(2 * n);
    for i in 0..n {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    let mut attacks = Vec::new();
    for i in 1..n {
        attacks.push((a(i - 1), a(i)));
        attacks.push((b(i - 1), b(i)));
    }
    for i in (1..n).step_by(2) {
        attacks.push((a(i), b(0)));
    }
    FiniteAf::with_names(names, attacks).expect("generated names are valid")
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BaumannSpanring;

impl LazyAf for BaumannSpanring {
    fn contains(&self, _x: ArgIndex) -> bool {
        true
    }

    fn bound(&self) -> Option<usize> {
        None
    }

    fn attacks(&self, x: ArgIndex, y: ArgIndex) -> bool {
        match (x % 2, y % 2) {
            (0, 0) | (1, 1) => y == x + 2,
            (0, 1) => y == b(0) && (x / 2) % 2 == 1,
            _ => false,
        }
    }

    fn attackers(&self, y: ArgIndex) -> AttackerSpec {
        if y == b(0) {
            // a_{2k+1}, whose only attacker a_{2k} is accepted at stage k+1.
            return AttackerSpec::Families(vec![AttackerFamily {
                members: IndexFamily::affine(4, 2),
                member_stage: Some(StageExpr::Never),
                defense_stage: Some(StageExpr::Stage(AffineOrdinal::linear(
                    Ordinal::zero(),
                    1,
                    1,
                ))),
            }]);
        }
        AttackerSpec::Explicit(if y < 2 { vec![] } else { vec![y - 2] })
    }

    fn label(&self, x: ArgIndex) -> String {
        format!("{}{}", if x % 2 == 0 { "a" } else { "b" }, x / 2)
    }
}

/// `a_{2k} -> k+1`, `a_{2k+1} -> NEVER`, `b_0 -> w+1`,
/// `b_{2k} -> w+k+1` for `k >= 1`, `b_{2k+1} -> NEVER`.
pub fn baumann_spanring_stages() -> FamilyStageMap {
    let omega_plus = |slope, intercept| {
        StageExpr::Stage(
            AffineOrdinal::new(vec![
                AffineTerm {
                    exponent: Ordinal::one(),
                    slope: 0,
                    intercept: 1,
                },
                AffineTerm {
                    exponent: Ordinal::zero(),
                    slope,
                    intercept,
                },
            ])
            .expect("decreasing exponents"),
        )
    };
    FamilyStageMap {
        families: vec![
            (
                IndexFamily::affine(4, 0),
                StageExpr::Stage(AffineOrdinal::linear(Ordinal::zero(), 1, 1)),
            ),
            (IndexFamily::affine(4, 2), StageExpr::Never),
            // b_{2k} for k >= 1 is 4k+1 = 4(k-1)+5
            (IndexFamily::affine(4, 5), omega_plus(1, 2)),
            (IndexFamily::affine(4, 3), StageExpr::Never),
        ],
        exceptions: BTreeMap::from([(
            b(0),
            StageValue::Stage(Ordinal::omega().successor()),
        )]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::check_attacker_specs;
    use crate::grounded::{stages_finite, verify_symbolic_stages, StageCandidate};

    #[test]
    fn attacks_match_the_picture() {
        assert!(BaumannSpanring.attacks(a(3), b(0)));
        assert!(!BaumannSpanring.attacks(a(2), b(0)));
        assert!(BaumannSpanring.attacks(a(0), a(1)));
        assert!(BaumannSpanring.attacks(b(4), b(5)));
        assert!(!BaumannSpanring.attacks(a(1), b(1)));
        let args: Vec<_> = (0..80).collect();
        assert!(check_attacker_specs(&BaumannSpanring, &args, 400, 60).is_empty());
    }

    #[test]
    fn candidate_verifies_with_grounding_ordinal_omega_two() {
        let cand = baumann_spanring_stages();
        let r = verify_symbolic_stages(&BaumannSpanring, &cand, 200).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.grounding_ordinal, "w*2".parse().unwrap());
        assert_eq!(cand.stage_of(b(2)), Some(StageValue::Stage("w+2".parse().unwrap())));
        assert_eq!(cand.stage_of(b(4)), Some(StageValue::Stage("w+3".parse().unwrap())));
    }

    #[test]
    fn tampered_candidate_is_rejected() {
        let mut cand = baumann_spanring_stages();
        cand.exceptions.insert(b(0), StageValue::Stage("w+2".parse().unwrap()));
        let r = verify_symbolic_stages(&BaumannSpanring, &cand, 50).unwrap();
        assert!(!r.is_ok());
    }

    #[test]
    fn truncations() {
        let one = baumann_spanring_finite(1);
        assert_eq!(one.attack_count(), 0);
        let s = stages_finite(&one);
        assert!(s.iter().all(|(_, v)| *v == StageValue::nat(1)));

        let six = stages_finite(&baumann_spanring_finite(6));
        assert_eq!(six.get(b(0)), Some(&StageValue::nat(4)));
        assert_eq!(six.get(a(4)), Some(&StageValue::nat(3)));
        assert_eq!(six.get(a(5)), Some(&StageValue::Never));
    }
}
