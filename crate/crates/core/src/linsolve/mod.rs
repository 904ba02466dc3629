//! Exact sparse linear solving over GF(p).
//!
//! Solutions set every free variable to zero, so the result for a given
//! system is fully determined.

mod gf2;
mod gfp;
mod markowitz;

use std::io::{BufRead, Write};

use nulla_poly::FieldSpec;
use thiserror::Error;

pub const DEFAULT_MEMORY_BUDGET: u64 = 8 << 30;

#[derive(Debug, Error)]
pub enum LinsolveError {
    #[error("system needs about {needed} bytes, over the budget of {budget}")]
    OverBudget { needed: u64, budget: u64 },
    #[error("malformed system: {0}")]
    Shape(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn shape(msg: impl Into<String>) -> LinsolveError {
    LinsolveError::Shape(msg.into())
}

/// Row-compressed `A y = b` over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSystem {
    n_rows: usize,
    n_cols: usize,
    field: FieldSpec,
    row_ptr: Vec<usize>,
    entries: Vec<(u32, u32)>,
    rhs: Vec<u32>,
}

impl SparseSystem {
    /// Rows are `(column, coefficient)` lists with strictly increasing
    /// columns and reduced nonzero coefficients.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        field: FieldSpec,
        rows: Vec<Vec<(u32, u32)>>,
        rhs: Vec<u32>,
    ) -> Result<Self, LinsolveError> {
        Self::with_budget(n_rows, n_cols, field, rows, rhs, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_budget(
        n_rows: usize,
        n_cols: usize,
        field: FieldSpec,
        rows: Vec<Vec<(u32, u32)>>,
        rhs: Vec<u32>,
        budget: u64,
    ) -> Result<Self, LinsolveError> {
        if rows.len() != n_rows || rhs.len() != n_rows {
            return Err(shape(format!(
                "{n_rows} rows declared, {} rows and {} rhs entries given",
                rows.len(),
                rhs.len()
            )));
        }
        if n_cols > u32::MAX as usize {
            return Err(shape("too many columns"));
        }
        let nnz: usize = rows.iter().map(Vec::len).sum();
        let needed = Self::estimate_bytes(n_rows, n_cols, nnz);
        if needed > budget {
            return Err(LinsolveError::OverBudget { needed, budget });
        }
        let p = field.p();
        let mut row_ptr = Vec::with_capacity(n_rows + 1);
        let mut entries = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for (r, row) in rows.into_iter().enumerate() {
            for (i, &(c, v)) in row.iter().enumerate() {
                if c as usize >= n_cols {
                    return Err(shape(format!("row {r}: column {c} out of range")));
                }
                if v == 0 || v >= p {
                    return Err(shape(format!("row {r}: coefficient {v} not a nonzero residue mod {p}")));
                }
                if i > 0 && row[i - 1].0 >= c {
                    return Err(shape(format!("row {r}: columns not strictly increasing")));
                }
            }
            entries.extend(row);
            row_ptr.push(entries.len());
        }
        if let Some(r) = rhs.iter().position(|&v| v >= p) {
            return Err(shape(format!("rhs {r}: value not reduced mod {p}")));
        }
        Ok(Self {
            n_rows,
            n_cols,
            field,
            row_ptr,
            entries,
            rhs,
        })
    }

    /// Builds from `(row, col, value)` triplets in any order; repeated
    /// positions are summed and values are reduced mod p.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        field: FieldSpec,
        triplets: impl IntoIterator<Item = (u32, u32, i64)>,
        rhs: Vec<i64>,
    ) -> Result<Self, LinsolveError> {
        let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n_rows];
        for (r, c, v) in triplets {
            let row = rows
                .get_mut(r as usize)
                .ok_or_else(|| shape(format!("row {r} out of range")))?;
            row.push((c, field.reduce(v)));
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(u32, u32)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 = field.add(last.1, v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
        let rhs = rhs.into_iter().map(|v| field.reduce(v)).collect();
        Self::new(n_rows, n_cols, field, rows, rhs)
    }

    /// Bytes held by the compressed form plus per-row and per-column
    /// elimination bookkeeping.
    pub fn estimate_bytes(n_rows: usize, n_cols: usize, nnz: usize) -> u64 {
        (nnz as u64) * 12 + (n_rows as u64) * 48 + (n_cols as u64) * 40
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn row(&self, r: usize) -> &[(u32, u32)] {
        &self.entries[self.row_ptr[r]..self.row_ptr[r + 1]]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(u32, u32)]> + '_ {
        (0..self.n_rows).map(|r| self.row(r))
    }

    pub fn rhs(&self) -> &[u32] {
        &self.rhs
    }

    pub fn density(&self) -> f64 {
        if self.n_rows == 0 || self.n_cols == 0 {
            return 0.0;
        }
        self.nnz() as f64 / (self.n_rows as f64 * self.n_cols as f64)
    }

    /// `A y`.
    pub fn multiply(&self, y: &[u32]) -> Vec<u32> {
        assert_eq!(y.len(), self.n_cols, "vector length");
        let f = self.field;
        self.rows()
            .map(|row| row.iter().fold(0, |acc, &(c, v)| f.add(acc, f.mul(v, y[c as usize]))))
            .collect()
    }

    /// Whether `y` satisfies every equation with right-hand side `rhs`.
    pub fn satisfies(&self, y: &[u32], rhs: &[u32]) -> bool {
        self.multiply(y) == rhs
    }

    /// Text dump: a `rows cols p` header, one `r c v` line per entry
    /// (zero-based), then one `b r v` line per nonzero rhs entry.
    pub fn write_coordinates(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.n_rows, self.n_cols, self.field.p())?;
        for r in 0..self.n_rows {
            for &(c, v) in self.row(r) {
                writeln!(w, "{r} {c} {v}")?;
            }
        }
        for (r, &v) in self.rhs.iter().enumerate() {
            if v != 0 {
                writeln!(w, "b {r} {v}")?;
            }
        }
        Ok(())
    }

    pub fn read_coordinates(r: impl BufRead) -> Result<Self, LinsolveError> {
        let mut header: Option<(usize, usize, FieldSpec)> = None;
        let mut triplets = Vec::new();
        let mut rhs_entries = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let err = |msg: &str| LinsolveError::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            let t = line.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err("expected three fields"));
            }
            let num = |s: &str| s.parse::<u64>().map_err(|_| err("not a non-negative integer"));
            match header {
                None => {
                    let field = FieldSpec::new(num(parts[2])? as u32).map_err(|e| err(&e.to_string()))?;
                    header = Some((num(parts[0])? as usize, num(parts[1])? as usize, field));
                }
                Some(_) if parts[0] == "b" => rhs_entries.push((num(parts[1])? as usize, num(parts[2])? as i64, lineno)),
                Some(_) => triplets.push((num(parts[0])? as u32, num(parts[1])? as u32, num(parts[2])? as i64)),
            }
        }
        let (n_rows, n_cols, field) = header.ok_or(LinsolveError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let mut rhs = vec![0i64; n_rows];
        for (r, v, line) in rhs_entries {
            *rhs.get_mut(r).ok_or(LinsolveError::Parse {
                line,
                msg: format!("rhs row {r} out of range"),
            })? += v;
        }
        Self::from_triplets(n_rows, n_cols, field, triplets, rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Consistent,
    Inconsistent,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Consistent => "consistent",
            SolveStatus::Inconsistent => "inconsistent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Present exactly when the system is consistent.
    pub solution: Option<Vec<u32>>,
    /// Columns that received a pivot, ascending. Shared by every rhs.
    pub pivot_cols: Vec<u32>,
}

/// When the binary solver moves the remaining active rows to a dense bit matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenseSwitch {
    /// Once the active block is small or has filled in.
    #[default]
    Auto,
    Never,
    /// Skip sparse elimination entirely.
    Immediately,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Upper bound on the dense block the binary solver may allocate.
    pub memory_budget: u64,
    pub dense_switch: DenseSwitch,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            memory_budget: DEFAULT_MEMORY_BUDGET,
            dense_switch: DenseSwitch::Auto,
        }
    }
}

/// Shared outcome of one elimination, before splitting by rhs.
pub(crate) struct Echelon {
    solutions: Vec<Option<Vec<u32>>>,
    pivot_cols: Vec<u32>,
}

impl Echelon {
    fn from_bits(y: Vec<Vec<u64>>, inconsistent: Vec<bool>, pivot_cols: Vec<u32>, n_rhs: usize) -> Self {
        let solutions = (0..n_rhs)
            .map(|j| {
                (!inconsistent[j]).then(|| y.iter().map(|w| (w[j / 64] >> (j % 64) & 1) as u32).collect())
            })
            .collect();
        Self { solutions, pivot_cols }
    }

    fn from_values(y: Vec<Vec<u32>>, inconsistent: Vec<bool>, pivot_cols: Vec<u32>) -> Self {
        let solutions = inconsistent
            .iter()
            .enumerate()
            .map(|(j, &bad)| (!bad).then(|| y.iter().map(|v| v[j]).collect()))
            .collect();
        Self { solutions, pivot_cols }
    }

    fn into_results(self) -> Vec<SolveResult> {
        let pivot_cols = self.pivot_cols;
        self.solutions
            .into_iter()
            .map(|solution| SolveResult {
                status: if solution.is_some() {
                    SolveStatus::Consistent
                } else {
                    SolveStatus::Inconsistent
                },
                solution,
                pivot_cols: pivot_cols.clone(),
            })
            .collect()
    }
}

pub fn solve(sys: &SparseSystem) -> Result<SolveResult, LinsolveError> {
    solve_with(sys, &SolverConfig::default())
}

pub fn solve_with(sys: &SparseSystem, config: &SolverConfig) -> Result<SolveResult, LinsolveError> {
    let mut out = solve_multi_rhs(sys, std::slice::from_ref(&sys.rhs), config)?;
    Ok(out.pop().expect("one result"))
}

/// Solves `A y = b` for each `b` in one elimination pass. The system's own
/// rhs is ignored.
pub fn solve_multi_rhs(
    sys: &SparseSystem,
    rhs_set: &[Vec<u32>],
    config: &SolverConfig,
) -> Result<Vec<SolveResult>, LinsolveError> {
    let n_rhs = rhs_set.len();
    if n_rhs == 0 {
        return Ok(Vec::new());
    }
    let p = sys.field.p();
    for (j, b) in rhs_set.iter().enumerate() {
        if b.len() != sys.n_rows {
            return Err(shape(format!("rhs {j} has length {}, expected {}", b.len(), sys.n_rows)));
        }
        if b.iter().any(|&v| v >= p) {
            return Err(shape(format!("rhs {j} not reduced mod {p}")));
        }
    }
    let echelon = if sys.field.is_binary() {
        let words = n_rhs.div_ceil(64);
        let rows = sys.rows().map(|r| r.iter().map(|e| e.0).collect()).collect();
        let rhs = (0..sys.n_rows)
            .map(|r| {
                let mut w = vec![0u64; words];
                for (j, b) in rhs_set.iter().enumerate() {
                    w[j / 64] |= (b[r] as u64) << (j % 64);
                }
                w
            })
            .collect();
        gf2::solve_gf2(sys.n_cols, rows, rhs, n_rhs, config.memory_budget, config.dense_switch).map_err(|needed| {
            LinsolveError::OverBudget {
                needed,
                budget: config.memory_budget,
            }
        })?
    } else {
        let rows = sys.rows().map(<[_]>::to_vec).collect();
        let rhs = (0..sys.n_rows).map(|r| rhs_set.iter().map(|b| b[r]).collect()).collect();
        gfp::solve_gfp(sys.field, sys.n_cols, rows, rhs, n_rhs)
    };
    Ok(echelon.into_results())
}
