use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::GroundedError;
use crate::af::{ArgIndex, AttackerSpec, LazyAf};

/// What the finite iteration learned about one argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Approx {
    Stage(u64),
    /// The iteration reached its fixpoint without accepting the argument.
    Never,
    /// Not accepted within the step budget.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxStages {
    /// One entry per argument of the window.
    pub stages: BTreeMap<ArgIndex, Approx>,
    pub closure_size: usize,
    pub steps_run: usize,
    pub stabilized: bool,
}

/// Iterates the defense function `steps` times on the attacker closure of the
/// window `[0, window)`. The closure contains every attacker of each of its
/// members, so stages found there are stages in the full framework.
pub fn omega_approximation(
    af: &dyn LazyAf,
    window: usize,
    steps: usize,
    closure_cap: usize,
) -> Result<ApproxStages, GroundedError> {
    let roots: Vec<ArgIndex> = (0..window).filter(|&x| af.contains(x)).collect();
    let mut closure: BTreeSet<ArgIndex> = BTreeSet::new();
    let mut attackers: BTreeMap<ArgIndex, Vec<ArgIndex>> = BTreeMap::new();
    let mut queue: VecDeque<ArgIndex> = VecDeque::new();
    for &x in &roots {
        if closure.insert(x) {
            queue.push_back(x);
        }
    }
    if closure.len() > closure_cap {
        return Err(GroundedError::ClosureCap {
            cap: closure_cap,
            argument: af.label(roots[closure_cap]),
        });
    }
    while let Some(x) = queue.pop_front() {
        let list = match af.attackers(x) {
            AttackerSpec::Explicit(xs) => xs,
            AttackerSpec::Families(_) => {
                return Err(GroundedError::FamilyInWindow {
                    argument: af.label(x),
                })
            }
        };
        for &y in &list {
            if closure.insert(y) {
                if closure.len() > closure_cap {
                    return Err(GroundedError::ClosureCap {
                        cap: closure_cap,
                        argument: af.label(y),
                    });
                }
                queue.push_back(y);
            }
        }
        attackers.insert(x, list);
    }

    let mut stage: BTreeMap<ArgIndex, u64> = BTreeMap::new();
    let mut stabilized = false;
    let mut steps_run = 0;
    for k in 1..=steps as u64 {
        steps_run += 1;
        // G_{k-1} is the set of arguments with a recorded stage below k.
        let defended: Vec<ArgIndex> = closure
            .iter()
            .copied()
            .filter(|x| !stage.contains_key(x))
            .filter(|x| {
                attackers[x].iter().all(|y| {
                    attackers[y]
                        .iter()
                        .any(|z| stage.get(z).is_some_and(|&s| s < k))
                })
            })
            .collect();
        if defended.is_empty() {
            stabilized = true;
            break;
        }
        for x in defended {
            stage.insert(x, k);
        }
    }
    let stages = roots
        .iter()
        .map(|&x| {
            let v = match stage.get(&x) {
                Some(&k) => Approx::Stage(k),
                None if stabilized => Approx::Never,
                None => Approx::Unknown,
            };
            (x, v)
        })
        .collect();
    Ok(ApproxStages {
        stages,
        closure_size: closure.len(),
        steps_run,
        stabilized,
    })
}
