use std::fmt::Write as _;

use super::{Graph, GraphError};

/// Parses DIMACS `.col` text. A mismatch between the declared and the distinct
/// edge count is logged, not rejected.
pub fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let (g, warning) = parse_dimacs_checked(text)?;
    if let Some(w) = warning {
        log::warn!("{w}");
    }
    Ok(g)
}

/// Like [`parse_dimacs`] but hands back the edge-count warning instead of logging it.
pub fn parse_dimacs_checked(text: &str) -> Result<(Graph, Option<String>), GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| GraphError::Parse { line, msg };
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate `p` line".into()));
                }
                let fmt = toks.next().ok_or_else(|| err("missing format in `p` line".into()))?;
                if fmt != "edge" && fmt != "col" {
                    return Err(err(format!("unsupported format `{fmt}`")));
                }
                let n = int(toks.next(), line)?;
                let m = int(toks.next(), line)?;
                header = Some((n as usize, m as usize));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| err("edge before `p` line".into()))?;
                let u = int(toks.next(), line)?;
                let v = int(toks.next(), line)?;
                for w in [u, v] {
                    if w == 0 || w as usize > n {
                        return Err(err(format!("vertex {w} outside 1..={n}")));
                    }
                }
                if u == v {
                    return Err(err(format!("self-loop at vertex {u}")));
                }
                edges.push((u, v));
            }
            other => return Err(err(format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or(GraphError::Parse {
        line: text.lines().count().max(1),
        msg: "missing `p edge <n> <m>` line".into(),
    })?;
    let g = Graph::new(n, edges)?;
    let warning = (g.n_edges() != m)
        .then(|| format!("DIMACS header declares {m} edges, found {} distinct", g.n_edges()));
    Ok((g, warning))
}

fn int(tok: Option<&str>, line: usize) -> Result<u32, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse {
        line,
        msg: "missing integer".into(),
    })?;
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("expected an integer, got `{tok}`"),
    })
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n_vertices(), g.n_edges());
    for &(u, v) in g.edges() {
        writeln!(out, "e {u} {v}").expect("writing to a String");
    }
    out
}
