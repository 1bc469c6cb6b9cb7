use rand::Rng;

use crate::af::{Extension, FiniteAf};
use crate::constructions::{
    af_from_tree, baumann_spanring_finite, baumann_spanring_stages, bs, ordinal_target_af,
    truncation_grounding_ordinal, BaumannSpanring, Generated,
};
use crate::grounded::{grounded_finite, grounding_sets, stages_finite, verify_symbolic_stages};
use crate::ordinal::{sup, Ordinal, StageValue};
use crate::rank_analysis::{
    complement_of_grounded_plus, largest_self_defending, rank_stage_bridge_check, ts_path_exists,
    witness_path, SelfDefendingWitness, TaTree, TsCertificate, TsTree,
};
use crate::tree::{bounded_path_search, rank_finite, LazyTree, PathSearch};

use super::gen::{random_ordinal, random_tree};

const STATE_CAP: usize = 1_000_000;
const PATH_DEPTH: usize = 100;

/// A decidable property of finite frameworks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteProperty {
    LeastFixpoint,
    StageBound,
    DualCharacterization,
    TsPaths,
    RankStageBridge,
    WitnessPaths,
}

pub fn finite_properties() -> [FiniteProperty; 6] {
    use FiniteProperty::*;
    [
        LeastFixpoint,
        StageBound,
        DualCharacterization,
        TsPaths,
        RankStageBridge,
        WitnessPaths,
    ]
}

impl FiniteProperty {
    pub fn name(self) -> &'static str {
        match self {
            FiniteProperty::LeastFixpoint => "grounded is the least fixpoint",
            FiniteProperty::StageBound => "stage bound and conflict-freeness",
            FiniteProperty::DualCharacterization => "largest self-defending set is A minus G+",
            FiniteProperty::TsPaths => "T_S has a path iff S misses G+",
            FiniteProperty::RankStageBridge => "rank of T^a bounds the stage of a",
            FiniteProperty::WitnessPaths => "witness paths stay outside G+",
        }
    }

    /// Brute force over subsets and over seed pairs is limited to small
    /// frameworks.
    pub fn applies(self, af: &FiniteAf) -> bool {
        match self {
            FiniteProperty::LeastFixpoint => af.len() <= 16,
            FiniteProperty::TsPaths => af.len() <= 8,
            _ => true,
        }
    }

    pub fn check(self, af: &FiniteAf) -> Result<(), String> {
        match self {
            FiniteProperty::LeastFixpoint => least_fixpoint(af),
            FiniteProperty::StageBound => stage_bound(af),
            FiniteProperty::DualCharacterization => dual(af),
            FiniteProperty::TsPaths => ts_paths(af),
            FiniteProperty::RankStageBridge => bridge(af),
            FiniteProperty::WitnessPaths => witnesses(af),
        }
    }
}

fn names(af: &FiniteAf, s: &Extension) -> String {
    format!("{{{}}}", af.names_of(s).join(","))
}

fn least_fixpoint(af: &FiniteAf) -> Result<(), String> {
    let g = grounded_finite(af).grounded;
    if af.defense_step(&g).map_err(|e| e.to_string())? != g {
        return Err(format!("{} is not a fixpoint", names(af, &g)));
    }
    let n = af.len();
    for mask in 0u32..(1 << n) {
        let s: Extension = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if af.defense_step(&s).map_err(|e| e.to_string())? == s && !g.is_subset(&s) {
            return Err(format!(
                "fixpoint {} does not contain G = {}",
                names(af, &s),
                names(af, &g)
            ));
        }
    }
    Ok(())
}

fn stage_bound(af: &FiniteAf) -> Result<(), String> {
    let r = grounded_finite(af);
    if r.grounding_ordinal > Ordinal::from_nat(af.len() as u64) {
        return Err(format!(
            "grounding ordinal {} exceeds {} arguments",
            r.grounding_ordinal,
            af.len()
        ));
    }
    if !af.is_conflict_free(&r.grounded).map_err(|e| e.to_string())? {
        return Err(format!("G = {} has a conflict", names(af, &r.grounded)));
    }
    let sets = grounding_sets(af);
    for w in sets.windows(2) {
        if !w[0].is_subset(&w[1]) {
            return Err("stages are not increasing".into());
        }
    }
    Ok(())
}

fn dual(af: &FiniteAf) -> Result<(), String> {
    let largest = largest_self_defending(af);
    let complement = complement_of_grounded_plus(af);
    if largest != complement {
        return Err(format!(
            "largest self-defending {} differs from A minus G+ {}",
            names(af, &largest),
            names(af, &complement)
        ));
    }
    match SelfDefendingWitness::certify(af, &complement).map_err(|e| e.to_string())? {
        Some(w) if w.verify(af) => Ok(()),
        _ => Err(format!("{} has no defence certificate", names(af, &complement))),
    }
}

fn ts_paths(af: &FiniteAf) -> Result<(), String> {
    let g = grounded_finite(af).grounded;
    let g_plus = af.plus_set(&g).map_err(|e| e.to_string())?;
    let n = af.len();
    let mut seeds = vec![Extension::new()];
    for i in 0..n {
        seeds.push(Extension::from([i]));
        for j in i + 1..n {
            seeds.push(Extension::from([i, j]));
        }
    }
    for s in seeds {
        let misses = s.is_disjoint(&g_plus);
        let cert = ts_path_exists(af, &s, PATH_DEPTH, STATE_CAP).map_err(|e| e.to_string())?;
        let tree = TsTree::new(af, s.clone());
        match (&cert, misses) {
            (TsCertificate::Path(p), true) => {
                if p.len() != PATH_DEPTH || !tree.contains(p) {
                    return Err(format!("path certificate for {} is not in T_S", names(af, &s)));
                }
            }
            (TsCertificate::NoPath { rank, .. }, false) => {
                let depth = *rank as usize + 1;
                if depth <= 6 {
                    if let PathSearch::PathPrefix(p) = bounded_path_search(&tree, depth, n) {
                        return Err(format!(
                            "T_S for {} has rank {rank} but contains {p:?}",
                            names(af, &s)
                        ));
                    }
                }
            }
            _ => {
                return Err(format!(
                    "S = {}: S misses G+ is {misses} but the certificate says path = {}",
                    names(af, &s),
                    cert.path_exists()
                ))
            }
        }
    }
    Ok(())
}

fn bridge(af: &FiniteAf) -> Result<(), String> {
    let report = rank_stage_bridge_check(af, STATE_CAP).map_err(|e| e.to_string())?;
    if let Some(v) = report.violations.first() {
        return Err(v.message.clone());
    }
    let g = grounded_finite(af).grounded;
    for a in (0..af.len()).filter(|&a| !g.contains(a)) {
        let p = witness_path(af, a, PATH_DEPTH).map_err(|e| e.to_string())?;
        if p.len() != PATH_DEPTH || !TaTree::new(af, a).contains(&p) {
            return Err(format!("no verified path prefix in T^{}", af.name(a)));
        }
    }
    Ok(())
}

fn witnesses(af: &FiniteAf) -> Result<(), String> {
    let g = grounded_finite(af).grounded;
    let g_plus = af.plus_set(&g).map_err(|e| e.to_string())?;
    for a in (0..af.len()).filter(|&a| !g.contains(a)) {
        let p = witness_path(af, a, PATH_DEPTH).map_err(|e| e.to_string())?;
        if p != witness_path(af, a, PATH_DEPTH).map_err(|e| e.to_string())? {
            return Err("witness path is not deterministic".into());
        }
        let tree = TaTree::new(af, a);
        for level in 1..=p.len() {
            let prefix = &p[..level];
            let mran = tree
                .mran(prefix)
                .ok_or_else(|| format!("{prefix:?} is not in T^{}", af.name(a)))?;
            if !mran.is_disjoint(&g_plus) {
                return Err(format!(
                    "witness for {} meets G+ at level {level}: mran = {}",
                    af.name(a),
                    names(af, &mran)
                ));
            }
        }
    }
    for a in &g {
        if witness_path(af, a, 5).is_ok() {
            return Err(format!("witness path produced for {} in G", af.name(a)));
        }
    }
    Ok(())
}

type Outcome = (&'static str, Result<(), String>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn ordinal_checks(rng: &mut impl Rng) -> Vec<Outcome> {
    let a = random_ordinal(rng, 3);
    let b = random_ordinal(rng, 3);
    let c = random_ordinal(rng, 3);
    let mut out = Vec::new();

    out.push(("ordinal trichotomy", {
        let ab = a.cmp(&b);
        ensure(
            ab == b.cmp(&a).reverse()
                && (ab.is_eq() == (a == b))
                && (ab.is_eq() == (a.to_string() == b.to_string()))
                && !(a <= b && b <= c && a > c),
            || format!("inconsistent order on {a}, {b}, {c}"),
        )
    }));

    out.push(("ordinal round trip", {
        let back: Result<Ordinal, _> = a.to_string().parse();
        ensure(back.as_ref() == Ok(&a), || format!("{a} parsed back as {back:?}"))
    }));

    out.push(("ordinal sup", {
        let s = sup([&a, &b, &c]);
        ensure(s >= a && s >= b && s >= c && (s == a || s == b || s == c), || {
            format!("sup of {a}, {b}, {c} is {s}")
        })
    }));

    out.push(("ordinal addition", {
        let ab = a.add(&b);
        ensure(
            ab >= a
                && ab >= b
                && ab.add(&c) == a.add(&b.add(&c))
                && a.add(&Ordinal::one()) == a.successor()
                && a.successor() > a
                && (b.is_zero() || ab > a),
            || format!("addition fails on {a}, {b}, {c}"),
        )
    }));

    out.push(("fundamental sequences", fundamental(&a, &b)));
    out
}

fn fundamental(a: &Ordinal, b: &Ordinal) -> Result<(), String> {
    if !a.is_limit() {
        ensure(a.fundamental_sequence(0).is_err(), || {
            format!("{a} is not a limit but has a fundamental sequence")
        })?;
        if a.is_successor() {
            let p = a.predecessor().map_err(|e| e.to_string())?;
            ensure(p.successor() == *a, || format!("{a} is not the successor of {p}"))?;
        }
        return Ok(());
    }
    let fs: Vec<Ordinal> = (0..64)
        .map(|i| a.fundamental_sequence(i))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for i in 0..fs.len() - 1 {
        ensure(fs[i] < fs[i + 1] && fs[i + 1] < *a, || {
            format!("{a}[{i}] = {}, {a}[{}] = {}", fs[i], i + 1, fs[i + 1])
        })?;
    }
    if let Some(fam) = a.fundamental_family().map_err(|e| e.to_string())? {
        for (i, x) in fs.iter().enumerate() {
            ensure(fam.eval(i as u64) == *x, || {
                format!("family form of {a} disagrees at {i}")
            })?;
        }
    }
    if b < a {
        ensure(fs.iter().any(|x| x > b), || {
            format!("no term among {a}[0..64] exceeds {b}")
        })?;
    }
    Ok(())
}

fn finite_stage(v: Option<&StageValue>) -> Option<u64> {
    v.and_then(StageValue::ordinal).and_then(Ordinal::as_nat)
}

pub fn construction_checks(rng: &mut impl Rng, trial: u64) -> Vec<Outcome> {
    let mut out = Vec::new();

    let tree = random_tree(rng, 200);
    let built = af_from_tree(&tree);
    let stages = stages_finite(&built.af);
    let ranks = tree.node_ranks();
    out.push(("F_T stages are ranks plus one", {
        let mut bad = None;
        for (node, r) in &ranks {
            let a = finite_stage(stages.get(built.a_index(node).expect("node")));
            let b = stages.get(built.b_index(node).expect("node"));
            if a != Some(r + 1) || b != Some(&StageValue::Never) {
                bad = Some(format!("node {node:?} of rank {r}: a at {a:?}, b at {b:?}"));
                break;
            }
        }
        bad.map_or(Ok(()), Err)
    }));
    out.push(("finite tree rank is its height", {
        let r = rank_finite(&tree, 10_000).map_err(|e| e.to_string());
        r.and_then(|r| {
            ensure(r == Ordinal::from_nat(tree.height() as u64), || {
                format!("rank {r} but height {}", tree.height())
            })
        })
    }));

    let m = trial % 50 + 1;
    out.push(("two-chain truncation growth", {
        let b0 = |len: u64| {
            finite_stage(stages_finite(&baumann_spanring_finite(len as usize)).get(bs::b(0)))
        };
        let (now, before) = (b0(2 * m), b0(2 * m - 2));
        ensure(
            now.is_some_and(|s| s + 1 > m) && now > before,
            || format!("b0 at chain length {}: {now:?}, previously {before:?}", 2 * m),
        )
    }));

    let k = trial % 10 + 1;
    out.push(("finite ordinal targets", (|| {
        let g = ordinal_target_af(&Ordinal::from_nat(k), None, 1000).map_err(|e| e.to_string())?;
        let got = grounded_finite(g.finite().expect("finite target")).grounding_ordinal;
        ensure(got == Ordinal::from_nat(k), || format!("target {k} grounds at {got}"))
    })()));

    let alpha = random_ordinal(rng, 1).add(&Ordinal::omega());
    out.push(("infinite ordinal targets verify", (|| {
        match ordinal_target_af(&alpha, None, 1000) {
            Ok(Generated::Lazy(l)) => {
                let r = verify_symbolic_stages(l.af.as_ref(), l.candidate.as_ref(), 30)
                    .map_err(|e| e.to_string())?;
                ensure(r.is_ok() && r.grounding_ordinal == alpha, || {
                    format!(
                        "target {alpha}: grounding ordinal {}, violations {:?}",
                        r.grounding_ordinal,
                        r.violations.first().map(ToString::to_string)
                    )
                })
            }
            Ok(Generated::Finite(_)) => Err(format!("target {alpha} was materialised")),
            Err(e) => Err(e.to_string()),
        }
    })()));

    let w = (trial % 29 + 1) as usize;
    out.push(("truncations increase below the target", {
        let mut result = Ok(());
        for alpha in ["w", "w+2", "w*2", "w^2"] {
            let alpha: Ordinal = alpha.parse().expect("literal");
            let lo = truncation_grounding_ordinal(&alpha, w, STATE_CAP);
            let hi = truncation_grounding_ordinal(&alpha, w + 1, STATE_CAP);
            match (lo, hi) {
                (Ok(lo), Ok(hi)) if lo < hi && hi.is_finite() => {}
                (lo, hi) => {
                    result = Err(format!("{alpha} at widths {w}, {}: {lo:?}, {hi:?}", w + 1));
                    break;
                }
            }
        }
        result
    }));

    if trial == 0 {
        out.push(("two-chain stages verify", (|| {
            let r = verify_symbolic_stages(&BaumannSpanring, &baumann_spanring_stages(), 200)
                .map_err(|e| e.to_string())?;
            ensure(r.is_ok() && r.grounding_ordinal == "w*2".parse().expect("literal"), || {
                format!("{:?}", r.violations.first().map(ToString::to_string))
            })
        })()));
    }
    out
}
