//! Loading graphs and polynomial systems from the command line.

use std::fs;
use std::path::Path;

use nulla_core::graphs::{parse_dimacs_checked, Graph, GraphSpec};
use nulla_poly::{FieldSpec, Monomial, PolySystem, Polynomial, SourceTag};

use crate::CliError;

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `random:n,p` without a seed takes it from `--seed`.
pub fn graph_from_spec(spec: &str, seed: Option<u64>) -> Result<Graph, CliError> {
    let mut spec = spec.trim().to_string();
    if let (Some(seed), Some(args)) = (seed, spec.strip_prefix("random:")) {
        if args.split(',').count() == 2 {
            spec = format!("{spec},{seed}");
        }
    }
    let parsed: GraphSpec = spec.parse().map_err(|e| CliError::Usage(format!("--gen: {e}")))?;
    parsed.build().map_err(|e| CliError::Usage(format!("--gen: {e}")))
}

pub fn graph_from_dimacs(path: &Path) -> Result<Graph, CliError> {
    let (g, warning) = parse_dimacs_checked(&read_file(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if let Some(w) = warning {
        log::warn!("{}: {w}", path.display());
    }
    Ok(g)
}

/// Largest `x<i>` index mentioned in `text`.
fn max_variable(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if let Ok(v) = text[start..end].parse::<usize>() {
                best = best.max(v);
            }
            i = end.max(i + 1);
        } else {
            i += 1;
        }
    }
    best
}

/// One polynomial per line, optionally preceded by a source tag as printed by
/// `nulla encode`; `#` starts a comment. The variable count is the largest
/// index used unless `n_vars` is given.
pub fn parse_system(text: &str, field: FieldSpec, n_vars: Option<usize>) -> Result<PolySystem, CliError> {
    let body: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let n = match n_vars {
        Some(n) => n,
        None => body.iter().map(|(_, l)| max_variable(l)).max().unwrap_or(0).max(1),
    };
    let mut tags = Vec::new();
    let mut polys = Vec::new();
    for (line, l) in body {
        let err = |msg: String| CliError::Input(format!("line {line}: {msg}"));
        let (tag, poly_text) = match l.split_once(char::is_whitespace) {
            Some((first, rest)) if first.contains(':') => {
                (first.parse::<SourceTag>().map_err(|e| err(e.to_string()))?, rest)
            }
            _ => (SourceTag::User(polys.len()), l),
        };
        tags.push(tag);
        polys.push(Polynomial::parse(poly_text, n, field).map_err(|e| err(e.to_string()))?);
    }
    PolySystem::with_tags(n, field, polys, tags).map_err(|e| CliError::Input(e.to_string()))
}

/// A single monomial with coefficient one, e.g. `x1*x2*x3`.
pub fn parse_monomial(text: &str, n_vars: usize, field: FieldSpec) -> Result<Monomial, CliError> {
    let bad = || CliError::Usage(format!("--alt-g: `{text}` is not a monomial"));
    let p = Polynomial::parse(text, n_vars, field).map_err(|_| bad())?;
    match p.terms().collect::<Vec<_>>().as_slice() {
        [(m, 1)] => Ok((*m).clone()),
        _ => Err(bad()),
    }
}

/// Bytes with an optional `K`, `M`, `G` or `T` suffix (powers of 1024).
pub fn parse_bytes(text: &str) -> Result<u64, String> {
    let t = text.trim();
    let (digits, shift) = match t.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&t[..t.len() - 1], 10),
        Some('M') => (&t[..t.len() - 1], 20),
        Some('G') => (&t[..t.len() - 1], 30),
        Some('T') => (&t[..t.len() - 1], 40),
        _ => (t, 0),
    };
    let n: u64 = digits.trim().parse().map_err(|_| format!("`{text}` is not a byte count"))?;
    n.checked_mul(1 << shift).ok_or_else(|| format!("`{text}` overflows"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn systems_with_and_without_tags() {
        let f = FieldSpec::new(3).unwrap();
        let sys = parse_system("# example\nx1^2+2\nedge:1-2 x1+x2\n\nx1 + x3  # trailing\n", f, None).unwrap();
        assert_eq!(sys.n_vars(), 3);
        assert_eq!(sys.len(), 3);
        assert_eq!(sys.tags()[0], SourceTag::User(0));
        assert_eq!(sys.tags()[1], SourceTag::Edge(1, 2));
        assert!(parse_system("x1+\n", f, None).is_err());
        assert_eq!(parse_system("x1\n", f, Some(4)).unwrap().n_vars(), 4);
    }

    #[test]
    fn byte_counts() {
        assert_eq!(parse_bytes("123").unwrap(), 123);
        assert_eq!(parse_bytes("2k").unwrap(), 2048);
        assert_eq!(parse_bytes("8G").unwrap(), 8 << 30);
        assert!(parse_bytes("eight").is_err());
        assert!(parse_bytes("99999999999T").is_err());
    }

    #[test]
    fn monomials() {
        let f = FieldSpec::gf2();
        assert_eq!(parse_monomial("x1*x2*x3", 3, f).unwrap().degree(), 3);
        assert!(parse_monomial("x1+x2", 3, f).is_err());
    }
}
