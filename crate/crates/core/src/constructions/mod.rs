//! Generated frameworks: `F_T` from trees, frameworks with a prescribed
//! grounding ordinal, the two-chain example with grounding ordinal `w*2`,
//! and disjoint unions. Lazy results come with a candidate stage map for
//! the symbolic verifier.

pub mod bs;
mod tree_af;
mod union;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::af::{parse_apx, AfError, FiniteAf, LazyAf};
use crate::grounded::{grounded_finite, StageCandidate};
use crate::ordinal::{Ordinal, OrdinalError};
use crate::tree::{build_tree_of_rank, truncate, FiniteTree, TreeError};

pub use bs::{baumann_spanring_finite, baumann_spanring_stages, BaumannSpanring};
pub use tree_af::{
    af_from_tree, compressed_truncation, decode_path, drop_root_pair, encode_path,
    FiniteTreeAf, TreeAf,
};
pub use union::{disjoint_union, finite_union, finite_union_index};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid generator spec: {0}")]
    Spec(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("unsupported target: {0}")]
    Unsupported(String),
    #[error("more than {cap} nodes")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Af(#[from] AfError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A lazily presented framework with its claimed stages.
#[derive(Clone)]
pub struct LazyGenerated {
    pub af: Arc<dyn LazyAf>,
    pub candidate: Arc<dyn StageCandidate>,
    pub description: String,
}

impl fmt::Debug for LazyGenerated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LazyGenerated({})", self.description)
    }
}

#[derive(Debug, Clone)]
pub enum Generated {
    Finite(FiniteAf),
    Lazy(LazyGenerated),
}

impl Generated {
    pub fn finite(&self) -> Option<&FiniteAf> {
        match self {
            Generated::Finite(af) => Some(af),
            Generated::Lazy(_) => None,
        }
    }
}

/// `Baumann–Spanring` framework: lazy when `truncate` is `None`, otherwise
/// the first `n` arguments of each chain.
pub fn baumann_spanring(truncate: Option<usize>) -> Generated {
    match truncate {
        Some(n) => Generated::Finite(baumann_spanring_finite(n)),
        None => Generated::Lazy(LazyGenerated {
            af: Arc::new(BaumannSpanring),
            candidate: Arc::new(baumann_spanring_stages()),
            description: "bs".into(),
        }),
    }
}

fn chain_tree(nodes: usize) -> FiniteTree {
    FiniteTree::from_nodes((0..nodes).map(|k| vec![0; k])).expect("chains are prefix closed")
}

/// A framework with grounding ordinal `alpha`.
///
/// * `0`: the empty framework.
/// * finite `k`: `F` of a chain of rank `k-1`.
/// * `b+1`: `F` of the canonical tree of rank `b`; its root `a` is the last
///   argument to enter.
/// * a limit `l`: `F` of the canonical tree of rank `l` without its root
///   pair, i.e. the disjoint union over `i` of `F` of trees of rank `l[i]`.
///
/// Lazy targets must lie below `w^w`.
///
/// With `truncate = Some(w)` an infinite target is replaced by `F` of the
/// width-`w` truncation of its tree (rootless for limits), materialised with
/// at most `cap` nodes.
pub fn ordinal_target_af(
    alpha: &Ordinal,
    truncate_width: Option<usize>,
    cap: usize,
) -> Result<Generated, ConstructionError> {
    if alpha.is_zero() {
        return Ok(Generated::Finite(FiniteAf::empty()));
    }
    if let Some(k) = alpha.as_nat() {
        return Ok(Generated::Finite(af_from_tree(&chain_tree(k as usize)).af));
    }
    let (tree_rank, rootless) = if alpha.is_successor() {
        (alpha.predecessor()?, false)
    } else {
        (alpha.clone(), true)
    };
    let tree = build_tree_of_rank(&tree_rank);
    if let Some(w) = truncate_width {
        let fin = truncate(&tree, w, None, cap).map_err(|e| match e {
            TreeError::CapExceeded { cap } => ConstructionError::CapExceeded { cap },
            other => other.into(),
        })?;
        let af = af_from_tree(&fin).af;
        return Ok(Generated::Finite(if rootless { drop_root_pair(&af) } else { af }));
    }
    if *alpha >= Ordinal::omega_pow(Ordinal::omega()) {
        return Err(ConstructionError::Unsupported(format!(
            "lazy target {alpha}: from w^w on, fundamental sequences have no affine closed \
             form; use :truncate=N"
        )));
    }
    let lazy = Arc::new(if rootless {
        TreeAf::rootless(tree)
    } else {
        TreeAf::new(tree)
    });
    Ok(Generated::Lazy(LazyGenerated {
        af: lazy.clone(),
        candidate: lazy,
        description: format!("ord:{alpha}"),
    }))
}

/// Grounding ordinal of the width-`w` truncation of
/// [`ordinal_target_af`]`(alpha)`, computed on the rank-merged framework of
/// [`compressed_truncation`] so that widths where the explicit truncation is
/// astronomically large stay cheap.
pub fn truncation_grounding_ordinal(
    alpha: &Ordinal,
    width: usize,
    cap: usize,
) -> Result<Ordinal, ConstructionError> {
    if alpha.is_finite() {
        return Ok(alpha.clone());
    }
    let (tree_rank, rootless) = if alpha.is_successor() {
        (alpha.predecessor()?, false)
    } else {
        (alpha.clone(), true)
    };
    let (af, _) = compressed_truncation(&build_tree_of_rank(&tree_rank), width, cap)?;
    let af = if rootless { drop_root_pair(&af) } else { af };
    Ok(grounded_finite(&af).grounding_ordinal)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSource {
    File(PathBuf),
    Inline(String),
}

/// Text form of a generated framework:
///
/// ```text
/// tree:<path.json> | tree:<inline json>
/// bs[:truncate=N]
/// ord:<ordinal>[:truncate=N]
/// union(<spec>,<spec>,...)
/// apx:<path>
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    Tree(TreeSource),
    Bs { truncate: Option<usize> },
    Ord { alpha: Ordinal, truncate: Option<usize> },
    Union(Vec<GeneratorSpec>),
    Apx(PathBuf),
}

fn spec_err(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::Spec(msg.into())
}

fn split_truncate(rest: &str) -> Result<(&str, Option<usize>), ConstructionError> {
    match rest.split_once(":truncate=") {
        None => Ok((rest, None)),
        Some((head, n)) => {
            let n = n
                .parse()
                .map_err(|_| spec_err(format!("truncate must be a natural number, got `{n}`")))?;
            Ok((head, Some(n)))
        }
    }
}

/// Splits on commas outside brackets.
fn split_top_level(s: &str) -> Result<Vec<&str>, ConstructionError> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(spec_err(format!("unbalanced `{c}` in `{s}`")));
                }
            }
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(spec_err(format!("unbalanced brackets in `{s}`")));
    }
    parts.push(s[start..].trim());
    Ok(parts)
}

impl FromStr for GeneratorSpec {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("union(") {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| spec_err("union(...) must end with `)`"))?;
            if inner.trim().is_empty() {
                return Ok(GeneratorSpec::Union(Vec::new()));
            }
            let parts = split_top_level(inner)?
                .into_iter()
                .map(str::parse)
                .collect::<Result<_, _>>()?;
            return Ok(GeneratorSpec::Union(parts));
        }
        if s == "bs" || s.starts_with("bs:") {
            let (head, truncate) = split_truncate(s)?;
            if head != "bs" {
                return Err(spec_err(format!("unknown bs option in `{s}`")));
            }
            return Ok(GeneratorSpec::Bs { truncate });
        }
        if let Some(rest) = s.strip_prefix("ord:") {
            let (text, truncate) = split_truncate(rest)?;
            let alpha = text.parse()?;
            return Ok(GeneratorSpec::Ord { alpha, truncate });
        }
        if let Some(rest) = s.strip_prefix("tree:") {
            let rest = rest.trim();
            return Ok(GeneratorSpec::Tree(if rest.starts_with('{') {
                TreeSource::Inline(rest.to_string())
            } else {
                TreeSource::File(PathBuf::from(rest))
            }));
        }
        if let Some(rest) = s.strip_prefix("apx:") {
            return Ok(GeneratorSpec::Apx(PathBuf::from(rest.trim())));
        }
        Err(spec_err(format!(
            "`{s}` is not one of tree:, bs, ord:, union(...), apx:"
        )))
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trunc = |t: &Option<usize>| t.map(|n| format!(":truncate={n}")).unwrap_or_default();
        match self {
            GeneratorSpec::Tree(TreeSource::File(p)) => write!(f, "tree:{}", p.display()),
            GeneratorSpec::Tree(TreeSource::Inline(j)) => write!(f, "tree:{j}"),
            GeneratorSpec::Bs { truncate } => write!(f, "bs{}", trunc(truncate)),
            GeneratorSpec::Ord { alpha, truncate } => write!(f, "ord:{alpha}{}", trunc(truncate)),
            GeneratorSpec::Union(parts) => {
                let inner: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "union({})", inner.join(","))
            }
            GeneratorSpec::Apx(p) => write!(f, "apx:{}", p.display()),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, ConstructionError> {
    std::fs::read_to_string(path).map_err(|e| ConstructionError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

impl GeneratorSpec {
    /// Builds the framework; `cap` bounds the size of every materialised
    /// framework.
    pub fn build(&self, cap: usize) -> Result<Generated, ConstructionError> {
        let built = self.build_uncapped(cap)?;
        match &built {
            Generated::Finite(af) if af.len() > cap => Err(ConstructionError::CapExceeded { cap }),
            _ => Ok(built),
        }
    }

    fn build_uncapped(&self, cap: usize) -> Result<Generated, ConstructionError> {
        match self {
            GeneratorSpec::Tree(src) => {
                let text = match src {
                    TreeSource::File(p) => read(p)?,
                    TreeSource::Inline(j) => j.clone(),
                };
                let tree = FiniteTree::from_json(&text)?;
                Ok(Generated::Finite(af_from_tree(&tree).af))
            }
            GeneratorSpec::Bs { truncate: Some(n) } if n.saturating_mul(2) > cap => {
                Err(ConstructionError::CapExceeded { cap })
            }
            GeneratorSpec::Bs { truncate } => Ok(baumann_spanring(*truncate)),
            GeneratorSpec::Ord { alpha, truncate } => ordinal_target_af(alpha, *truncate, cap),
            GeneratorSpec::Union(parts) => {
                let built = parts
                    .iter()
                    .map(|p| p.build(cap))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(disjoint_union(built))
            }
            GeneratorSpec::Apx(p) => Ok(Generated::Finite(parse_apx(&read(p)?)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grounded::verify_symbolic_stages;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn spec_parsing_round_trips() {
        for text in [
            "bs",
            "bs:truncate=6",
            "ord:w*2",
            "ord:w^2+1:truncate=3",
            "apx:chain.apx",
            "tree:t.json",
            r#"tree:{"nodes":[[],[0]]}"#,
            r#"union(ord:3,union(bs,tree:{"nodes":[[],[0],[1]]}),apx:x.apx)"#,
        ] {
            let spec: GeneratorSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("bs:truncate=x".parse::<GeneratorSpec>().is_err());
        assert!("ord:w+".parse::<GeneratorSpec>().is_err());
        assert!("union(bs".parse::<GeneratorSpec>().is_err());
        assert!("graph:foo".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn finite_targets_have_exact_grounding_ordinal() {
        for k in 0..=10u64 {
            let g = ordinal_target_af(&Ordinal::from_nat(k), None, 1000).unwrap();
            let af = g.finite().unwrap();
            assert_eq!(grounded_finite(af).grounding_ordinal, Ordinal::from_nat(k));
        }
    }

    #[test]
    fn infinite_targets_verify() {
        for alpha in ["w", "w+1", "w+2", "w*2", "w^2", "w^2*2"] {
            let Generated::Lazy(l) = ordinal_target_af(&o(alpha), None, 1000).unwrap() else {
                panic!("{alpha} should be lazy");
            };
            let r = verify_symbolic_stages(l.af.as_ref(), l.candidate.as_ref(), 60).unwrap();
            assert!(r.is_ok(), "{alpha}: {:?}", r.violations);
            assert_eq!(r.grounding_ordinal, o(alpha), "{alpha}");
        }
    }

    #[test]
    fn truncations_of_infinite_targets() {
        let g = ordinal_target_af(&o("w*2"), Some(4), 100_000).unwrap();
        let explicit = grounded_finite(g.finite().unwrap()).grounding_ordinal;
        assert_eq!(explicit, Ordinal::from_nat(8));
        assert_eq!(
            truncation_grounding_ordinal(&o("w*2"), 4, 100_000).unwrap(),
            explicit
        );
        assert_eq!(
            truncation_grounding_ordinal(&o("w^2"), 30, 100_000).unwrap(),
            Ordinal::from_nat(29 * 30 + 1)
        );
        assert!(matches!(
            ordinal_target_af(&o("w^w"), None, 10),
            Err(ConstructionError::Unsupported(_))
        ));
        assert!(ordinal_target_af(&o("w^w"), Some(2), 100_000).is_ok());
        assert!(matches!(
            ordinal_target_af(&o("w^2"), Some(30), 10_000),
            Err(ConstructionError::CapExceeded { .. })
        ));
    }

    #[test]
    fn build_from_specs() {
        let g: GeneratorSpec = r#"union(tree:{"nodes":[[],[0]]},ord:2)"#.parse().unwrap();
        let af = g.build(1000).unwrap();
        let af = af.finite().unwrap();
        assert_eq!(af.len(), 8);
        assert_eq!(grounded_finite(af).grounding_ordinal, Ordinal::from_nat(2));
        let missing: GeneratorSpec = "apx:/nonexistent/x.apx".parse().unwrap();
        assert!(matches!(missing.build(10), Err(ConstructionError::Io { .. })));
    }
}
