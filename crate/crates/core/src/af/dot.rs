//! Graphviz output for finite frameworks, and a reader for the same dialect.

use std::fmt::Write;

use super::{AfError, FiniteAf};

pub fn to_dot(af: &FiniteAf) -> String {
    let mut out = String::from("digraph af {\n");
    for name in af.names() {
        writeln!(out, "  \"{name}\";").unwrap();
    }
    for (x, y) in af.attack_pairs() {
        writeln!(out, "  \"{}\" -> \"{}\";", af.name(x), af.name(y)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Reads the subset of DOT emitted by [`to_dot`]: quoted node statements and
/// quoted `->` edges, one per line.
pub fn parse_dot(text: &str) -> Result<FiniteAf, AfError> {
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("digraph") || line == "}" {
            continue;
        }
        let err = |message: &str| AfError::Parse {
            line: lineno + 1,
            message: message.to_string(),
        };
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err("missing `;`"))?
            .trim();
        let unquote = |s: &str| -> Result<String, AfError> {
            s.trim()
                .strip_prefix('"')
                .and_then(|s| s.strip_suffix('"'))
                .map(str::to_string)
                .ok_or_else(|| err("expected a quoted name"))
        };
        match stmt.split_once("->") {
            Some((x, y)) => edges.push((unquote(x)?, unquote(y)?)),
            None => names.push(unquote(stmt)?),
        }
    }
    let index: std::collections::HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let attacks = edges
        .iter()
        .map(|(x, y)| {
            let find = |n: &String| {
                index
                    .get(n.as_str())
                    .copied()
                    .ok_or_else(|| AfError::UnknownArgument(n.clone()))
            };
            Ok((find(x)?, find(y)?))
        })
        .collect::<Result<Vec<_>, AfError>>()?;
    FiniteAf::with_names(names, attacks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::{parse_apx, to_apx};

    #[test]
    fn dot_round_trips_through_apx() {
        let af = parse_apx("arg(p).\narg(q).\narg(r).\natt(p,q).\natt(q,p).\natt(r,r).\n").unwrap();
        let dot = to_dot(&af);
        assert!(dot.contains("\"p\" -> \"q\";"));
        let back = parse_dot(&dot).unwrap();
        assert_eq!(back, af);
        assert_eq!(parse_apx(&to_apx(&back)).unwrap(), af);
    }
}
