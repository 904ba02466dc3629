//! Degree-d certificate systems: one column per shifted polynomial `x^δ f_i`,
//! one row per monomial, and the degree loop that searches for `β_i`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nulla_cert::{verify, CertEntry, CertError, Certificate, Provenance};
use nulla_poly::{binomial, monomials_up_to, DegreeFilter, Monomial, PolyError, PolySystem, Polynomial, SourceTag};
use rayon::prelude::*;
use thiserror::Error;

use crate::graphs::{Graph, GraphError};
use crate::linsolve::{
    solve_multi_rhs, LinsolveError, SolveStatus, SolverConfig, SparseSystem, DEFAULT_MEMORY_BUDGET,
};

#[derive(Debug, Error)]
pub enum AssembleError {
    #[error("graded pruning mod {k} needs every polynomial in one degree class; #{index} ({tag}) `{poly}` is not")]
    NotGraded {
        k: u32,
        index: usize,
        tag: SourceTag,
        poly: String,
    },
    #[error("target `{0}` has a term whose degree is not a multiple of the grading modulus")]
    TargetNotGraded(String),
    #[error("target `{target}` has the monomial {monomial}, which is not a row of the system")]
    TargetOutsideRows { target: String, monomial: String },
    #[error("target does not match the system's field or variable count")]
    TargetMismatch,
    #[error("no target polynomials given")]
    NoTargets,
    #[error("degree schedule must be nonempty and strictly increasing")]
    BadSchedule,
    #[error("degree {degree}: system of {rows} rows x {cols} columns with {nnz} nonzeros is too large: {source}")]
    TooLarge {
        degree: u32,
        rows: usize,
        cols: usize,
        nnz: usize,
        source: LinsolveError,
    },
    #[error("certificate entry {0} is not tied to a graph edge, vertex or cutter")]
    NotEdgeIndexed(String),
    #[error("internal error: extracted certificate does not reproduce its target")]
    CertificateMismatch,
    #[error(transparent)]
    Linsolve(#[from] LinsolveError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which rows and columns enter the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pruning {
    /// Every monomial of degree up to `q + d` is a row.
    None,
    /// Rows only for monomials that occur in some column or in a target.
    #[default]
    OccurringRows,
    /// Occurring rows, and columns `(i, δ)` only when `deg δ + class(f_i) ≡ 0 (mod k)`.
    Graded(u32),
}

impl fmt::Display for Pruning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pruning::None => write!(f, "none"),
            Pruning::OccurringRows => write!(f, "rows"),
            Pruning::Graded(k) => write!(f, "graded:{k}"),
        }
    }
}

impl FromStr for Pruning {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "none" => Ok(Pruning::None),
            "rows" => Ok(Pruning::OccurringRows),
            t => match t.strip_prefix("graded:").map(str::parse::<u32>) {
                Some(Ok(k)) if k >= 1 => Ok(Pruning::Graded(k)),
                _ => Err(format!("unknown pruning `{s}` (expected none, rows or graded:<k>)")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnKey {
    pub poly_index: usize,
    pub shift: Monomial,
}

#[derive(Debug, Clone)]
pub struct AssembledSystem {
    /// Carries the rhs of the first target.
    pub system: SparseSystem,
    pub col_keys: Vec<ColumnKey>,
    /// Ascending in monomial order.
    pub row_keys: Vec<Monomial>,
    pub degree: u32,
    pub targets: Vec<Polynomial>,
    pub pruning: Pruning,
}

impl AssembledSystem {
    pub fn row_index(&self, m: &Monomial) -> Option<usize> {
        self.row_keys.binary_search(m).ok()
    }

    /// Right-hand side `b` with `b[x^α]` = coefficient of `x^α` in `g`.
    pub fn rhs_for(&self, g: &Polynomial) -> Result<Vec<u32>, AssembleError> {
        let mut b = vec![0; self.row_keys.len()];
        for (m, c) in g.terms() {
            let r = self.row_index(m).ok_or_else(|| AssembleError::TargetOutsideRows {
                target: g.to_string(),
                monomial: m.to_string(),
            })?;
            b[r] = c;
        }
        Ok(b)
    }

    /// `β_i = Σ_δ y[(i, δ)] x^δ` for every polynomial of `sys`.
    pub fn betas(&self, sys: &PolySystem, y: &[u32]) -> Result<Vec<Polynomial>, AssembleError> {
        let mut terms: Vec<Vec<(Monomial, i64)>> = vec![Vec::new(); sys.len()];
        for (key, &v) in self.col_keys.iter().zip(y) {
            if v != 0 {
                terms[key.poly_index].push((key.shift.clone(), v as i64));
            }
        }
        terms
            .into_iter()
            .map(|t| Polynomial::from_terms(sys.n_vars(), sys.field(), t).map_err(AssembleError::from))
            .collect()
    }
}

fn check_target(sys: &PolySystem, g: &Polynomial) -> Result<(), AssembleError> {
    if g.field() != sys.field() || g.n_vars() != sys.n_vars() {
        return Err(AssembleError::TargetMismatch);
    }
    Ok(())
}

/// Per-polynomial degree filter on shifts, or `None` for all shifts.
fn shift_filters(sys: &PolySystem, pruning: Pruning) -> Result<Vec<Option<DegreeFilter>>, AssembleError> {
    let Pruning::Graded(k) = pruning else {
        return Ok(vec![None; sys.len()]);
    };
    let classes = sys.degree_classes(k).map_err(|index| AssembleError::NotGraded {
        k,
        index,
        tag: sys.tags()[index].clone(),
        poly: sys.polys()[index].to_string(),
    })?;
    Ok(classes
        .into_iter()
        .map(|c| {
            Some(DegreeFilter {
                modulus: k,
                residue: (k - c) % k,
            })
        })
        .collect())
}

/// Column keys in global order: by polynomial, then by shift monomial.
pub fn column_keys(sys: &PolySystem, d: u32, pruning: Pruning) -> Result<Vec<ColumnKey>, AssembleError> {
    let filters = shift_filters(sys, pruning)?;
    let mut cache: Vec<(Option<DegreeFilter>, Vec<Monomial>)> = Vec::new();
    let mut keys = Vec::new();
    for (i, filter) in filters.into_iter().enumerate() {
        let pos = match cache.iter().position(|(f, _)| *f == filter) {
            Some(pos) => pos,
            None => {
                cache.push((filter, monomials_up_to(sys.n_vars(), d, filter)));
                cache.len() - 1
            }
        };
        keys.extend(cache[pos].1.iter().map(|shift| ColumnKey {
            poly_index: i,
            shift: shift.clone(),
        }));
    }
    Ok(keys)
}

pub fn assemble(sys: &PolySystem, d: u32, g: &Polynomial, pruning: Pruning) -> Result<AssembledSystem, AssembleError> {
    assemble_multi(sys, d, std::slice::from_ref(g), pruning, DEFAULT_MEMORY_BUDGET)
}

/// Assembles once for several targets; the row set covers every target.
pub fn assemble_multi(
    sys: &PolySystem,
    d: u32,
    targets: &[Polynomial],
    pruning: Pruning,
    memory_budget: u64,
) -> Result<AssembledSystem, AssembleError> {
    if targets.is_empty() {
        return Err(AssembleError::NoTargets);
    }
    for g in targets {
        check_target(sys, g)?;
        if let Pruning::Graded(k) = pruning {
            if g.degree_class(k) != Some(0) {
                return Err(AssembleError::TargetNotGraded(g.to_string()));
            }
        }
    }
    let col_keys = column_keys(sys, d, pruning)?;
    let products: Vec<Vec<(Monomial, u32)>> = col_keys
        .par_iter()
        .map(|key| {
            sys.polys()[key.poly_index]
                .terms()
                .map(|(m, c)| (m.mul(&key.shift), c))
                .collect()
        })
        .collect();

    let mut row_keys: Vec<Monomial> = match pruning {
        Pruning::None => {
            let q = sys.max_degree().max(0) as u32;
            monomials_up_to(sys.n_vars(), q + d, None)
        }
        _ => products.iter().flatten().map(|(m, _)| m.clone()).collect(),
    };
    row_keys.extend(targets.iter().flat_map(|g| g.terms().map(|(m, _)| m.clone())));
    row_keys.par_sort_unstable();
    row_keys.dedup();

    let nnz: usize = products.iter().map(Vec::len).sum();
    let (n_rows, n_cols) = (row_keys.len(), col_keys.len());
    let too_large = |source| AssembleError::TooLarge {
        degree: d,
        rows: n_rows,
        cols: n_cols,
        nnz,
        source,
    };
    let needed = SparseSystem::estimate_bytes(n_rows, n_cols, nnz);
    if needed > memory_budget {
        return Err(too_large(LinsolveError::OverBudget {
            needed,
            budget: memory_budget,
        }));
    }

    let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n_rows];
    for (j, terms) in products.iter().enumerate() {
        for (m, c) in terms {
            let r = row_keys.binary_search(m).expect("row universe covers every product");
            rows[r].push((j as u32, *c));
        }
    }
    drop(products);
    let mut asm = AssembledSystem {
        system: SparseSystem::new(0, 0, sys.field(), Vec::new(), Vec::new())?,
        col_keys,
        row_keys,
        degree: d,
        targets: targets.to_vec(),
        pruning,
    };
    let rhs = asm.rhs_for(&targets[0])?;
    asm.system =
        SparseSystem::with_budget(n_rows, n_cols, sys.field(), rows, rhs, memory_budget).map_err(too_large)?;
    Ok(asm)
}

/// Closed-form sizes next to the actual sizes after pruning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemStats {
    pub n: usize,
    pub s: usize,
    /// Total number of terms over all polynomials.
    pub m: usize,
    pub d: u32,
    pub predicted_cols: u128,
    pub predicted_nnz: u128,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
}

impl fmt::Display for SystemStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables n        {}", self.n)?;
        writeln!(f, "polynomials s      {}", self.s)?;
        writeln!(f, "terms M            {}", self.m)?;
        writeln!(f, "degree d           {}", self.d)?;
        writeln!(f, "                   predicted  actual")?;
        writeln!(f, "rows               {:>9}  {}", "-", self.rows)?;
        writeln!(f, "cols               {:>9}  {}", self.predicted_cols, self.cols)?;
        write!(f, "nnz                {:>9}  {}", self.predicted_nnz, self.nnz)
    }
}

/// `s·C(n+d, d)` columns and `M·C(n+d, d)` nonzeros before pruning, plus a
/// dry assembly for the actual sizes.
pub fn stats(sys: &PolySystem, d: u32, pruning: Pruning) -> Result<SystemStats, AssembleError> {
    let shifts = binomial(sys.n_vars() as u64 + d as u64, d as u64);
    let m = sys.total_terms();
    let one = Polynomial::one(sys.n_vars(), sys.field());
    let asm = assemble_multi(sys, d, &[one], pruning, DEFAULT_MEMORY_BUDGET)?;
    Ok(SystemStats {
        n: sys.n_vars(),
        s: sys.len(),
        m,
        d,
        predicted_cols: sys.len() as u128 * shifts,
        predicted_nnz: m as u128 * shifts,
        rows: asm.system.n_rows(),
        cols: asm.system.n_cols(),
        nnz: asm.system.nnz(),
    })
}

/// `1, 1+k, 1+2k, ...` up to `cap`: the only degrees at which graded
/// coloring systems gain edge columns.
pub fn coloring_schedule(k: u32, cap: u32) -> Vec<u32> {
    (0..).map(|i| 1 + i * k.max(1)).take_while(|&d| d <= cap).collect()
}

/// `1, 2, ..., cap`.
pub fn generic_schedule(cap: u32) -> Vec<u32> {
    (1..=cap).collect()
}

#[derive(Debug, Clone)]
pub struct ProveOptions {
    pub pruning: Pruning,
    pub memory_budget: u64,
    pub solver: SolverConfig,
    /// Copied into certificates; `degree` and `pruning` are filled in.
    pub provenance: Provenance,
}

impl Default for ProveOptions {
    fn default() -> Self {
        Self {
            pruning: Pruning::OccurringRows,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            solver: SolverConfig::default(),
            provenance: Provenance::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub status: SolveStatus,
    pub millis: u128,
}

impl fmt::Display for DegreeStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "degree={} rows={} cols={} nnz={} status={} millis={}",
            self.degree, self.rows, self.cols, self.nnz, self.status, self.millis
        )
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Infeasible {
        certificate: Box<Certificate>,
        degree: u32,
        /// Position of the successful target among the candidates.
        target_index: usize,
    },
    NoCertificateUpTo(u32),
}

#[derive(Debug, Clone)]
pub struct NullaOutcome {
    pub verdict: Verdict,
    pub stats: Vec<DegreeStats>,
}

impl NullaOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.verdict {
            Verdict::Infeasible { certificate, .. } => Some(certificate),
            Verdict::NoCertificateUpTo(_) => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match self.verdict {
            Verdict::Infeasible { degree, .. } => Some(degree),
            Verdict::NoCertificateUpTo(_) => None,
        }
    }
}

pub fn validate_schedule(schedule: &[u32]) -> Result<(), AssembleError> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AssembleError::BadSchedule);
    }
    Ok(())
}

/// Packs a solution into a certificate, dropping zero coefficients.
pub fn build_certificate(
    sys: &PolySystem,
    asm: &AssembledSystem,
    y: &[u32],
    target: &Polynomial,
    mut provenance: Provenance,
) -> Result<Certificate, AssembleError> {
    let betas = asm.betas(sys, y)?;
    let entries = sys
        .iter()
        .zip(betas)
        .filter(|(_, beta)| !beta.is_zero())
        .map(|((tag, f), beta)| CertEntry {
            tag: tag.clone(),
            f: f.clone(),
            beta,
        })
        .collect();
    provenance.degree = asm.degree;
    provenance.pruning = asm.pruning.to_string();
    Ok(Certificate::new(sys.field(), sys.n_vars(), target.clone(), entries, provenance)?)
}

/// Searches degree by degree for `g = Σ β_i f_i`, trying every candidate `g`
/// against one elimination per degree.
pub fn nulla_prove(
    sys: &PolySystem,
    schedule: &[u32],
    g_candidates: &[Polynomial],
    opts: &ProveOptions,
) -> Result<NullaOutcome, AssembleError> {
    validate_schedule(schedule)?;
    let mut stats = Vec::new();
    for &d in schedule {
        let start = Instant::now();
        let asm = assemble_multi(sys, d, g_candidates, opts.pruning, opts.memory_budget)?;
        let rhs_set = g_candidates
            .iter()
            .map(|g| asm.rhs_for(g))
            .collect::<Result<Vec<_>, _>>()?;
        let results = solve_multi_rhs(&asm.system, &rhs_set, &opts.solver).map_err(|source| AssembleError::TooLarge {
            degree: d,
            rows: asm.system.n_rows(),
            cols: asm.system.n_cols(),
            nnz: asm.system.nnz(),
            source,
        })?;
        let found = results.iter().position(|r| r.status == SolveStatus::Consistent);
        let record = DegreeStats {
            degree: d,
            rows: asm.system.n_rows(),
            cols: asm.system.n_cols(),
            nnz: asm.system.nnz(),
            status: if found.is_some() {
                SolveStatus::Consistent
            } else {
                SolveStatus::Inconsistent
            },
            millis: start.elapsed().as_millis(),
        };
        log::info!("{record}");
        stats.push(record);
        if let Some(j) = found {
            let y = results[j].solution.as_deref().expect("consistent result has a solution");
            let cert = build_certificate(sys, &asm, y, &g_candidates[j], opts.provenance.clone())?;
            if !verify(&cert)? {
                return Err(AssembleError::CertificateMismatch);
            }
            return Ok(NullaOutcome {
                verdict: Verdict::Infeasible {
                    certificate: Box::new(cert),
                    degree: d,
                    target_index: j,
                },
                stats,
            });
        }
    }
    Ok(NullaOutcome {
        verdict: Verdict::NoCertificateUpTo(*schedule.last().expect("nonempty")),
        stats,
    })
}

/// Edges whose polynomial (or triangle/clique cutter) carries a nonzero
/// coefficient, on the full vertex set of `g`.
pub fn isolate_subgraph(cert: &Certificate, g: &Graph) -> Result<Graph, AssembleError> {
    let mut edges = Vec::new();
    for e in cert.entries() {
        match &e.tag {
            SourceTag::Edge(u, v) => edges.push((*u, *v)),
            SourceTag::Cutter(clique) => {
                for (i, &a) in clique.iter().enumerate() {
                    edges.extend(clique[i + 1..].iter().map(|&b| (a, b)));
                }
            }
            SourceTag::Vertex(_) => {}
            SourceTag::User(_) => return Err(AssembleError::NotEdgeIndexed(e.tag.to_string())),
        }
    }
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
        return Err(AssembleError::NotEdgeIndexed(format!("edge:{u}-{v} (not in the graph)")));
    }
    Ok(g.edge_subgraph(edges)?)
}
