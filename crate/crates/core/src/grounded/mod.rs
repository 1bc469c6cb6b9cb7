//! Grounded-extension engines.
//!
//! * [`grounded_finite`] and [`stages_finite`] iterate the defense function
//!   on a finite framework.
//! * [`omega_approximation`] runs the same iteration on the attacker closure
//!   of a window of a lazy framework whose attacker lists are explicit.
//! * [`verify_symbolic_stages`] certifies a candidate stage assignment for a
//!   lazy framework, including transfinite stages.

mod approx;
mod symbolic;

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};
use thiserror::Error;

use crate::af::{AfError, ArgIndex, Extension, FiniteAf};
use crate::ordinal::{Ordinal, StageValue};

pub use approx::{omega_approximation, Approx, ApproxStages};
pub use symbolic::{
    symbolic_grounding_ordinal, verify_symbolic_stages, FamilyStageMap, StageCandidate,
    StageViolation, SummaryEntry, SymbolicReport, ViolationKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundedError {
    #[error("argument {argument} has an infinite attacker family; use the symbolic verifier")]
    FamilyInWindow { argument: String },
    #[error("attacker closure exceeded {cap} arguments while adding {argument}")]
    ClosureCap { cap: usize, argument: String },
    #[error("candidate assigns no stage to {0}")]
    IncompleteCandidate(String),
    #[error("attacker family of {argument} has no claimed {what} closed form")]
    MissingClosedForm { argument: String, what: &'static str },
    #[error(transparent)]
    Af(#[from] AfError),
}

/// The grounded extension of a finite framework and the least `k` with
/// `G_k = G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundedResult {
    pub grounded: Extension,
    pub grounding_ordinal: Ordinal,
}

/// Least stages of arguments; absent arguments are unknown.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageMap {
    stages: BTreeMap<ArgIndex, StageValue>,
}

impl StageMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: ArgIndex, v: StageValue) {
        self.stages.insert(x, v);
    }

    pub fn get(&self, x: ArgIndex) -> Option<&StageValue> {
        self.stages.get(&x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArgIndex, &StageValue)> {
        self.stages.iter().map(|(&x, v)| (x, v))
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Arguments with a (non-`NEVER`) stage.
    pub fn members(&self) -> Extension {
        self.iter()
            .filter(|(_, v)| !v.is_never())
            .map(|(x, _)| x)
            .collect()
    }

    /// `{"name": "ordinal" | "NEVER"}` keyed by the framework's names.
    pub fn to_json(&self, af: &FiniteAf) -> Value {
        let map: serde_json::Map<String, Value> = self
            .iter()
            .map(|(x, v)| (af.name(x).to_string(), json!(v.to_string())))
            .collect();
        Value::Object(map)
    }

    /// Reads the format written by [`StageMap::to_json`].
    pub fn from_json(af: &FiniteAf, value: &Value) -> Result<Self, String> {
        let obj = value.as_object().ok_or("stage map must be a JSON object")?;
        let mut out = StageMap::new();
        for (name, v) in obj {
            let x = af.index_of(name).map_err(|e| e.to_string())?;
            let text = v
                .as_str()
                .ok_or_else(|| format!("stage of {name} must be a string"))?;
            let stage: StageValue = text.parse().map_err(|e| format!("{name}: {e}"))?;
            out.insert(x, stage);
        }
        Ok(out)
    }
}

impl FromIterator<(ArgIndex, StageValue)> for StageMap {
    fn from_iter<I: IntoIterator<Item = (ArgIndex, StageValue)>>(iter: I) -> Self {
        StageMap {
            stages: iter.into_iter().collect(),
        }
    }
}

/// The sequence `G_0 = {}, G_1, ...` up to the first repetition.
pub fn grounding_sets(af: &FiniteAf) -> Vec<Extension> {
    grounding_bits(af).iter().map(Extension::from_bits).collect()
}

fn grounding_bits(af: &FiniteAf) -> Vec<FixedBitSet> {
    let mut seq = vec![FixedBitSet::with_capacity(af.len())];
    loop {
        let next = af.defense_bits(seq.last().expect("non-empty"));
        if &next == seq.last().expect("non-empty") {
            return seq;
        }
        seq.push(next);
    }
}

pub fn grounded_finite(af: &FiniteAf) -> GroundedResult {
    let seq = grounding_bits(af);
    GroundedResult {
        grounded: Extension::from_bits(seq.last().expect("non-empty")),
        grounding_ordinal: Ordinal::from_nat(seq.len() as u64 - 1),
    }
}

pub fn stages_finite(af: &FiniteAf) -> StageMap {
    let seq = grounding_bits(af);
    let mut stages: Vec<StageValue> = vec![StageValue::Never; af.len()];
    for (k, g) in seq.iter().enumerate().rev() {
        for x in g.ones() {
            stages[x] = StageValue::nat(k as u64);
        }
    }
    stages.into_iter().enumerate().collect()
}

/// The least `a` with `G_a = G`: the largest stage when one is attained, and
/// `0` when nothing is accepted.
pub fn grounding_ordinal_of(stages: &StageMap) -> Ordinal {
    stages
        .iter()
        .filter_map(|(_, v)| v.ordinal().cloned())
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FiniteAf {
        FiniteAf::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn grounded_examples() {
        let r = grounded_finite(&chain3());
        assert_eq!(r.grounded, Extension::from([0, 2]));
        assert_eq!(r.grounding_ordinal, Ordinal::from_nat(2));

        let cycle = FiniteAf::new(2, [(0, 1), (1, 0)]).unwrap();
        let r = grounded_finite(&cycle);
        assert!(r.grounded.is_empty());
        assert_eq!(r.grounding_ordinal, Ordinal::zero());

        let free = FiniteAf::new(5, []).unwrap();
        let r = grounded_finite(&free);
        assert_eq!(r.grounded.len(), 5);
        assert_eq!(r.grounding_ordinal, Ordinal::one());
    }

    #[test]
    fn stage_examples() {
        let s = stages_finite(&chain3());
        assert_eq!(s.get(0), Some(&StageValue::nat(1)));
        assert_eq!(s.get(1), Some(&StageValue::Never));
        assert_eq!(s.get(2), Some(&StageValue::nat(2)));
        assert_eq!(grounding_ordinal_of(&s), Ordinal::from_nat(2));

        let free = stages_finite(&FiniteAf::new(5, []).unwrap());
        assert!(free.iter().all(|(_, v)| *v == StageValue::nat(1)));
        assert_eq!(grounding_ordinal_of(&free), Ordinal::one());

        let selfish = stages_finite(&FiniteAf::new(1, [(0, 0)]).unwrap());
        assert_eq!(selfish.get(0), Some(&StageValue::Never));
    }

    #[test]
    fn grounding_sets_are_increasing() {
        let sets = grounding_sets(&chain3());
        assert_eq!(
            sets,
            vec![Extension::new(), Extension::from([0]), Extension::from([0, 2])]
        );
    }

    #[test]
    fn stage_map_json_round_trip() {
        let af = chain3();
        let s = stages_finite(&af);
        let v = s.to_json(&af);
        assert_eq!(v, json!({"a0": "1", "a1": "NEVER", "a2": "2"}));
        assert_eq!(StageMap::from_json(&af, &v).unwrap(), s);
        assert!(StageMap::from_json(&af, &json!({"zz": "1"})).is_err());
        assert!(StageMap::from_json(&af, &json!({"a0": "w+"})).is_err());
    }
}
