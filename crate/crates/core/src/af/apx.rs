//! The APX text format: `arg(name).` and `att(x,y).` facts, one per line,
//! with `%` starting a comment. Argument indices follow the order of the
//! `arg` lines.

use std::fmt::Write;

use super::{is_valid_name, AfError, FiniteAf};

pub fn parse_apx(text: &str) -> Result<FiniteAf, AfError> {
    let mut names: Vec<String> = Vec::new();
    let mut index = std::collections::HashMap::new();
    let mut attacks = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('%').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| AfError::Parse {
            line: line_no,
            message: message.to_string(),
        };
        let body = line
            .strip_suffix('.')
            .ok_or_else(|| err("missing terminating `.`"))?
            .trim();
        let (head, args) = body
            .split_once('(')
            .ok_or_else(|| err("expected `arg(...)` or `att(...)`"))?;
        let args = args
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| err("missing `)`"))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        for p in &parts {
            if !is_valid_name(p) {
                return Err(err(&format!("invalid argument name `{p}`")));
            }
        }
        match (head.trim(), parts.as_slice()) {
            ("arg", [name]) => {
                if index.insert(name.to_string(), names.len()).is_some() {
                    return Err(err(&format!("duplicate argument `{name}`")));
                }
                names.push(name.to_string());
            }
            ("att", [x, y]) => {
                let lookup = |n: &str| {
                    index
                        .get(n)
                        .copied()
                        .ok_or_else(|| err(&format!("attack mentions undeclared argument `{n}`")))
                };
                attacks.push((lookup(x)?, lookup(y)?));
            }
            ("arg", _) => return Err(err("`arg` takes one name")),
            ("att", _) => return Err(err("`att` takes two names")),
            (other, _) => return Err(err(&format!("unknown fact `{other}`"))),
        }
    }
    FiniteAf::with_names(names, attacks)
}

pub fn to_apx(af: &FiniteAf) -> String {
    let mut out = String::new();
    for name in af.names() {
        writeln!(out, "arg({name}).").unwrap();
    }
    for (x, y) in af.attack_pairs() {
        writeln!(out, "att({},{}).", af.name(x), af.name(y)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_order_fixes_enumeration() {
        let af = parse_apx(
            "% a chain\narg(z).\narg(y).\narg(x).\natt(z,y).\natt( y , x ). % trailing\n",
        )
        .unwrap();
        assert_eq!(af.names(), ["z", "y", "x"]);
        assert!(af.attacks(0, 1).unwrap());
        assert!(af.attacks(1, 2).unwrap());
        assert_eq!(af.attack_count(), 2);
    }

    #[test]
    fn round_trip() {
        let af = FiniteAf::new(4, [(0, 1), (1, 1), (3, 0)]).unwrap();
        assert_eq!(parse_apx(&to_apx(&af)).unwrap(), af);
    }

    #[test]
    fn errors_report_lines() {
        match parse_apx("arg(a).\natt(a,b).\n") {
            Err(AfError::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("`b`"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_apx("arg(a)\n"),
            Err(AfError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_apx("arg(a).\narg(a).\n"),
            Err(AfError::Parse { line: 2, .. })
        ));
        assert!(parse_apx("arg(a-b).").is_err());
        assert!(parse_apx("foo(a).").is_err());
    }
}
