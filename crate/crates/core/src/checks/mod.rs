//! Seeded property suites over random instances, with greedy minimisation of
//! finite counterexamples.
//!
//! Trial `t` of a run with seed `s` draws from a ChaCha8 stream `t` keyed by
//! `s`, so a trial can be replayed on its own and trials can run in parallel
//! without changing the report.

mod gen;
mod props;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::af::{to_apx, Extension, FiniteAf};
use crate::constructions::baumann_spanring_finite;
use crate::grounded::{stages_finite, StageMap};
use crate::ordinal::StageValue;

pub use gen::{random_finite_af, random_ordinal, random_tree};
pub use props::{finite_properties, FiniteProperty};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Lemmas,
    Ordinals,
    Constructions,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lemmas" => Ok(Suite::Lemmas),
            "ordinals" => Ok(Suite::Ordinals),
            "constructions" => Ok(Suite::Constructions),
            "all" => Ok(Suite::All),
            _ => Err(format!(
                "unknown suite `{s}` (expected lemmas, ordinals, constructions or all)"
            )),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Lemmas => "lemmas",
            Suite::Ordinals => "ordinals",
            Suite::Constructions => "constructions",
            Suite::All => "all",
        })
    }
}

/// A user-supplied framework, optionally with a claimed stage map.
#[derive(Debug, Clone)]
pub struct Injected {
    pub af: FiniteAf,
    pub stages: Option<StageMap>,
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub suite: Suite,
    pub trials: u64,
    pub max_args: usize,
    pub seed: u64,
    pub inject: Option<Injected>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            suite: Suite::All,
            trials: 100,
            max_args: 10,
            seed: 0,
            inject: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    /// `None` for the injected framework.
    pub trial: Option<u64>,
    pub property: String,
    pub message: String,
    /// Minimised framework in APX form, when the property is about one.
    pub counterexample: Option<String>,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.trial {
            Some(t) => write!(f, "FAIL trial {t} {}: {}", self.property, self.message)?,
            None => write!(f, "FAIL injected {}: {}", self.property, self.message)?,
        }
        if let Some(apx) = &self.counterexample {
            write!(f, "\n  counterexample:")?;
            for line in apx.lines() {
                write!(f, "\n    {line}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    /// Number of passing checks per property.
    pub passed: BTreeMap<String, u64>,
    /// Sorted by trial, injected first.
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(&mut self, other: CheckReport) {
        for (k, v) in other.passed {
            *self.passed.entry(k).or_default() += v;
        }
        self.failures.extend(other.failures);
    }

    fn pass(&mut self, property: &str) {
        *self.passed.entry(property.to_string()).or_default() += 1;
    }

    fn record(&mut self, property: &str, trial: Option<u64>, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => self.pass(property),
            Err(message) => self.failures.push(Failure {
                trial,
                property: property.to_string(),
                message,
                counterexample: None,
            }),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (property, n) in &self.passed {
            writeln!(f, "ok {property} ({n})")?;
        }
        for failure in &self.failures {
            writeln!(f, "{failure}")?;
        }
        let failed = self.failures.len();
        write!(
            f,
            "{} ({} passed, {failed} failed)",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.passed.values().sum::<u64>()
        )
    }
}

/// The random source of trial `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Greedily removes arguments while `fails` keeps holding.
pub fn minimize(af: &FiniteAf, fails: impl Fn(&FiniteAf) -> bool) -> FiniteAf {
    let mut current = af.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for x in (0..current.len()).rev() {
            let keep: Extension = (0..current.len()).filter(|&y| y != x).collect();
            let smaller = current.restrict(&keep).expect("indices in range");
            if fails(&smaller) {
                current = smaller;
                changed = true;
            }
        }
    }
    current
}

fn check_finite(af: &FiniteAf, trial: Option<u64>, report: &mut CheckReport) {
    for prop in finite_properties() {
        if !prop.applies(af) {
            continue;
        }
        match prop.check(af) {
            Ok(()) => report.pass(prop.name()),
            Err(message) => {
                let small = minimize(af, |g| prop.applies(g) && prop.check(g).is_err());
                report.failures.push(Failure {
                    trial,
                    property: prop.name().to_string(),
                    message,
                    counterexample: Some(to_apx(&small)),
                });
            }
        }
    }
}

fn check_injected(inj: &Injected, report: &mut CheckReport) {
    if let Some(claimed) = &inj.stages {
        let exact = stages_finite(&inj.af);
        let mut wrong = Vec::new();
        for x in 0..inj.af.len() {
            let want = exact.get(x).cloned().unwrap_or(StageValue::Never);
            match claimed.get(x) {
                Some(v) if *v == want => {}
                Some(v) => wrong.push(format!("{}: claimed {v}, actual {want}", inj.af.name(x))),
                None => wrong.push(format!("{}: missing, actual {want}", inj.af.name(x))),
            }
        }
        if wrong.is_empty() {
            report.pass("injected stage map");
        } else {
            report.failures.push(Failure {
                trial: None,
                property: "injected stage map".into(),
                message: wrong.join("; "),
                counterexample: Some(to_apx(&inj.af)),
            });
        }
    }
    check_finite(&inj.af, None, report);
}

fn run_trial(config: &CheckConfig, trial: u64) -> CheckReport {
    let mut report = CheckReport::default();
    let mut rng = trial_rng(config.seed, trial);
    if config.suite.includes(Suite::Lemmas) {
        let af = random_finite_af(&mut rng, config.max_args);
        check_finite(&af, Some(trial), &mut report);
    }
    if config.suite.includes(Suite::Ordinals) {
        for (name, outcome) in props::ordinal_checks(&mut rng) {
            report.record(name, Some(trial), outcome);
        }
    }
    if config.suite.includes(Suite::Constructions) {
        for (name, outcome) in props::construction_checks(&mut rng, trial) {
            report.record(name, Some(trial), outcome);
        }
    }
    report
}

/// Runs the configured suite. Trials run in parallel; the report does not
/// depend on scheduling.
pub fn run_checks(config: &CheckConfig) -> CheckReport {
    let mut report = CheckReport::default();
    if let Some(inj) = &config.inject {
        check_injected(inj, &mut report);
    }
    let per_trial: Vec<CheckReport> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();
    for r in per_trial {
        report.merge(r);
    }
    report
}

/// `chain_length,arguments,b0_stage` rows for the two-chain framework cut
/// at chain lengths `1..=max_len`.
pub fn bs_growth_csv(max_len: usize) -> String {
    let mut out = String::from("chain_length,arguments,b0_stage\n");
    for n in 1..=max_len {
        let af = baumann_spanring_finite(n);
        let stage = stages_finite(&af)
            .get(crate::constructions::bs::b(0))
            .cloned()
            .unwrap_or(StageValue::Never);
        out.push_str(&format!("{n},{},{stage}\n", af.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_deterministic() {
        let config = CheckConfig {
            trials: 12,
            max_args: 8,
            seed: 7,
            ..CheckConfig::default()
        };
        let a = run_checks(&config);
        assert!(a.is_ok(), "{a}");
        assert_eq!(a.to_string(), run_checks(&config).to_string());
        assert!(a.passed.len() > 10);
    }

    #[test]
    fn tampered_injection_fails_with_counterexample() {
        let af = FiniteAf::new(3, [(0, 1), (1, 2)]).unwrap();
        let mut stages = stages_finite(&af);
        stages.insert(2, StageValue::nat(1));
        let config = CheckConfig {
            suite: Suite::Lemmas,
            trials: 0,
            inject: Some(Injected { af, stages: Some(stages) }),
            ..CheckConfig::default()
        };
        let r = run_checks(&config);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].property, "injected stage map");
        assert!(r.failures[0].message.contains("a2: claimed 1, actual 2"), "{}", r.failures[0]);
    }

    #[test]
    fn minimize_keeps_the_failure() {
        let af = FiniteAf::new(6, [(0, 1), (1, 2), (3, 3), (4, 5)]).unwrap();
        let has_self_attack = |g: &FiniteAf| (0..g.len()).any(|x| g.attacks(x, x).unwrap());
        let small = minimize(&af, has_self_attack);
        assert_eq!(small.len(), 1);
        assert!(has_self_attack(&small));
    }

    #[test]
    fn growth_csv() {
        let csv = bs_growth_csv(6);
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "chain_length,arguments,b0_stage");
        assert_eq!(rows[6], "6,12,4");
    }

    #[test]
    fn suite_names() {
        for s in ["lemmas", "ordinals", "constructions", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }
}
