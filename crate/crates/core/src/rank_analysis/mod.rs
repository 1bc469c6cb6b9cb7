//! Self-defending extensions and the trees `T_S` and `T^a` whose paths
//! witness them.
//!
//! A set `X` is self-defending when every attacker of a member of `X` is
//! attacked from inside `X`. The largest such set is the complement of
//! `G+`, and `T_S` has a path exactly when `S` avoids `G+`. For finite
//! frameworks both directions are certified: an explicit path prefix, or an
//! exhaustive expansion of the (then finite) tree with its rank.

mod ts;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::af::{AfError, ArgIndex, Extension, FiniteAf};
use crate::grounded::grounded_finite;

pub use ts::{
    rank_stage_bridge_check, ta_rank, ts_path_exists, witness_path, BridgeReport,
    BridgeViolation, StateRanker, TaTree, TsCertificate, TsTree,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankAnalysisError {
    #[error("{0} is in the grounded extension, so no path exists")]
    InGrounded(String),
    #[error("exhaustive expansion visited more than {cap} states")]
    StateCap { cap: usize },
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error(transparent)]
    Af(#[from] AfError),
}

/// Cantor pairing `<x,y> = (x+y)(x+y+1)/2 + y`.
pub fn pairing(x: u64, y: u64) -> u64 {
    let s = x + y;
    s * (s + 1) / 2 + y
}

pub fn unpairing(z: u64) -> (u64, u64) {
    let w = ((8 * z as u128 + 1).isqrt() as u64 - 1) / 2;
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}

/// Greatest fixpoint from the full universe: drop any argument with an
/// attacker that nothing left in the set attacks.
pub fn largest_self_defending(af: &FiniteAf) -> Extension {
    let mut inside = vec![true; af.len()];
    loop {
        let drop: Vec<ArgIndex> = (0..af.len())
            .filter(|&x| inside[x])
            .filter(|&x| {
                af.attackers_of(x)
                    .iter()
                    .any(|&y| !af.attackers_of(y).iter().any(|&z| inside[z]))
            })
            .collect();
        if drop.is_empty() {
            break;
        }
        for x in drop {
            inside[x] = false;
        }
    }
    (0..af.len()).filter(|&x| inside[x]).collect()
}

/// `A \ G+`, computed from the grounded extension.
pub fn complement_of_grounded_plus(af: &FiniteAf) -> Extension {
    let g = grounded_finite(af).grounded;
    let plus = af.plus_set(&g).expect("grounded set is in range");
    af.universe().difference(&plus)
}

/// A self-defending set with, for every attacker of a member, a member that
/// counter-attacks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfDefendingWitness {
    pub set: Extension,
    /// attacker -> defender
    pub certificates: BTreeMap<ArgIndex, ArgIndex>,
}

impl SelfDefendingWitness {
    /// Certificates pick the least defender. `None` when `set` is not
    /// self-defending.
    pub fn certify(af: &FiniteAf, set: &Extension) -> Result<Option<Self>, AfError> {
        af.check_extension(set)?;
        let mut certificates = BTreeMap::new();
        for x in set {
            for &y in af.attackers_of(x) {
                if certificates.contains_key(&y) {
                    continue;
                }
                match af.attackers_of(y).iter().find(|&&z| set.contains(z)) {
                    Some(&z) => {
                        certificates.insert(y, z);
                    }
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(SelfDefendingWitness {
            set: set.clone(),
            certificates,
        }))
    }

    pub fn verify(&self, af: &FiniteAf) -> bool {
        if af.check_extension(&self.set).is_err() {
            return false;
        }
        self.set.iter().all(|x| {
            af.attackers_of(x).iter().all(|y| {
                self.certificates
                    .get(y)
                    .is_some_and(|&z| self.set.contains(z) && af.attacks(z, *y).unwrap_or(false))
            })
        })
    }

    /// Union of two witnesses; a defender valid for either set remains valid.
    pub fn union(&self, other: &Self) -> Self {
        let mut certificates = other.certificates.clone();
        for (&y, &z) in &self.certificates {
            certificates
                .entry(y)
                .and_modify(|d| *d = (*d).min(z))
                .or_insert(z);
        }
        SelfDefendingWitness {
            set: self.set.union(&other.set),
            certificates,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(0, 0), 0);
        assert_eq!(pairing(1, 0), 1);
        assert_eq!(pairing(0, 1), 2);
        assert_eq!(unpairing(7), (2, 1));
        assert_eq!(pairing(2, 1), 7);
        for z in 0..5000 {
            let (x, y) = unpairing(z);
            assert_eq!(pairing(x, y), z);
        }
        let big = pairing(3_000_000_000, 1_000_000_000);
        assert_eq!(unpairing(big), (3_000_000_000, 1_000_000_000));
    }

    #[test]
    fn largest_self_defending_examples() {
        let chain = FiniteAf::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(largest_self_defending(&chain), Extension::from([0, 2]));
        let cycle = FiniteAf::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(largest_self_defending(&cycle), Extension::from([0, 1]));
        let free = FiniteAf::new(4, []).unwrap();
        assert_eq!(largest_self_defending(&free), free.universe());
        for af in [chain, cycle, free] {
            assert_eq!(largest_self_defending(&af), complement_of_grounded_plus(&af));
        }
    }

    #[test]
    fn witnesses_certify_and_merge() {
        let af = FiniteAf::new(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        let w0 = SelfDefendingWitness::certify(&af, &Extension::from([0]))
            .unwrap()
            .unwrap();
        let w2 = SelfDefendingWitness::certify(&af, &Extension::from([2]))
            .unwrap()
            .unwrap();
        assert!(w0.verify(&af) && w2.verify(&af));
        let both = w0.union(&w2);
        assert!(both.verify(&af));
        assert_eq!(both.set, Extension::from([0, 2]));

        let chain = FiniteAf::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            SelfDefendingWitness::certify(&chain, &Extension::from([1])).unwrap(),
            None
        );
        let mut forged = w0.clone();
        forged.certificates.insert(1, 2);
        assert!(!forged.verify(&af));
    }
}
