//! Orbit reduction under a permutation group acting on the variables.
//!
//! Rows become monomial orbits and columns become orbits of shifted
//! polynomials `x^δ f_i`. The entry for `(Orb(x^α), Orb(x^δ f_i))` sums the
//! original entries `M[x^α, x^γ f_j]` over the column orbit, which does not
//! depend on the chosen row representative. A solution of the orbit system
//! lifts to a solution of the full system by copying each orbit value to
//! its members.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::time::Instant;

use nulla_cert::verify;
use nulla_poly::{PolySystem, Polynomial};
use thiserror::Error;

use crate::assemble::{
    assemble_multi, build_certificate, validate_schedule, AssembleError, AssembledSystem, ColumnKey, DegreeStats,
    NullaOutcome, ProveOptions, Pruning, Verdict,
};
use crate::linsolve::{solve_multi_rhs, LinsolveError, SolveStatus, SparseSystem};

pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("generator {index} is not a permutation of 1..{n}")]
    NotBijection { index: usize, n: usize },
    #[error("permutations act on {perms} points but the system has {vars} variables")]
    SizeMismatch { perms: usize, vars: usize },
    #[error("the polynomial system is not invariant under the group (image of #{index} `{poly}` is missing)")]
    NotInvariant { index: usize, poly: String },
    #[error("target `{0}` is not fixed by the group")]
    TargetNotInvariant(String),
    #[error("polynomial #{0} occurs twice in the system")]
    Duplicate(usize),
    #[error(transparent)]
    Assemble(#[from] AssembleError),
    #[error(transparent)]
    Linsolve(#[from] LinsolveError),
}

/// Generators on the points `0..n` (displayed 1-based in cycle notation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationSet {
    n: usize,
    generators: Vec<Vec<u32>>,
}

impl PermutationSet {
    /// Each generator is an image table: point `i` goes to `g[i]`.
    /// Identity generators are dropped.
    pub fn new(n: usize, generators: Vec<Vec<u32>>) -> Result<Self, SymmetryError> {
        for (index, g) in generators.iter().enumerate() {
            let mut seen = vec![false; n];
            let ok = g.len() == n
                && g.iter().all(|&x| {
                    let fresh = (x as usize) < n && !seen[x as usize];
                    if fresh {
                        seen[x as usize] = true;
                    }
                    fresh
                });
            if !ok {
                return Err(SymmetryError::NotBijection { index, n });
            }
        }
        let generators = generators
            .into_iter()
            .filter(|g| g.iter().enumerate().any(|(i, &x)| i as u32 != x))
            .collect();
        Ok(Self { n, generators })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            generators: Vec::new(),
        }
    }

    /// One generator per line as a product of disjoint cycles on `1..n`,
    /// e.g. `(2,3,4)` or `(1,2)(3,4)`. Blank lines and `#` comments are
    /// skipped; `()` is the identity.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self, SymmetryError> {
        let mut generators = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            if compact.is_empty() {
                continue;
            }
            generators.push(parse_product(n, &compact).map_err(|msg| SymmetryError::Parse { line: i + 1, msg })?);
        }
        Self::new(n, generators)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }
}

fn parse_product(n: usize, s: &str) -> Result<Vec<u32>, String> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut used = vec![false; n];
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| format!("expected `(...)` at `{rest}`"))?;
        rest = body.1;
        if body.0.is_empty() {
            continue;
        }
        let points = body
            .0
            .split(',')
            .map(|t| match t.parse::<usize>() {
                Ok(p) if (1..=n).contains(&p) => Ok(p - 1),
                _ => Err(format!("`{t}` is not a point in 1..{n}")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        for &p in &points {
            if std::mem::replace(&mut used[p], true) {
                return Err(format!("point {} appears twice", p + 1));
            }
        }
        for (k, &p) in points.iter().enumerate() {
            perm[p] = points[(k + 1) % points.len()] as u32;
        }
    }
    Ok(perm)
}

impl fmt::Display for PermutationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "()");
        }
        for (gi, g) in self.generators.iter().enumerate() {
            if gi > 0 {
                write!(f, " ")?;
            }
            let mut seen = vec![false; self.n];
            for start in 0..self.n {
                if seen[start] || g[start] as usize == start {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut p = start;
                while !seen[p] {
                    seen[p] = true;
                    cycle.push((p + 1).to_string());
                    p = g[p] as usize;
                }
                write!(f, "({})", cycle.join(","))?;
            }
        }
        Ok(())
    }
}

fn check_size(sys: &PolySystem, perms: &PermutationSet) -> Result<(), SymmetryError> {
    if perms.n != sys.n_vars() {
        return Err(SymmetryError::SizeMismatch {
            perms: perms.n,
            vars: sys.n_vars(),
        });
    }
    Ok(())
}

/// Index of every polynomial, rejecting repeats.
fn poly_index(sys: &PolySystem) -> Result<HashMap<&Polynomial, usize>, SymmetryError> {
    let mut index = HashMap::with_capacity(sys.len());
    for (i, p) in sys.polys().iter().enumerate() {
        if index.insert(p, i).is_some() {
            return Err(SymmetryError::Duplicate(i));
        }
    }
    Ok(index)
}

/// Image index of each polynomial under each generator.
fn poly_images(sys: &PolySystem, perms: &PermutationSet) -> Result<Vec<Vec<usize>>, SymmetryError> {
    check_size(sys, perms)?;
    let index = poly_index(sys)?;
    perms
        .generators
        .iter()
        .map(|g| {
            sys.polys()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    index
                        .get(&p.permute_vars(g))
                        .copied()
                        .ok_or_else(|| SymmetryError::NotInvariant {
                            index: i,
                            poly: p.to_string(),
                        })
                })
                .collect()
        })
        .collect()
}

/// Whether every generator maps every polynomial into the system.
pub fn check_invariance(sys: &PolySystem, perms: &PermutationSet) -> bool {
    if perms.n != sys.n_vars() {
        return false;
    }
    let set: HashSet<&Polynomial> = sys.polys().iter().collect();
    perms
        .generators
        .iter()
        .all(|g| sys.polys().iter().all(|p| set.contains(&p.permute_vars(g))))
}

/// Size of the generated group by closure, or `None` once it exceeds `cap`.
pub fn group_order(perms: &PermutationSet, cap: u64) -> Option<u64> {
    let identity: Vec<u32> = (0..perms.n as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in &perms.generators {
            let next: Vec<u32> = p.iter().map(|&x| g[x as usize]).collect();
            if !seen.contains(&next) {
                if seen.len() as u64 >= cap {
                    return None;
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Some(seen.len() as u64)
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n as u32).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] as usize != root {
            root = self.0[root] as usize;
        }
        let mut cur = x;
        while self.0[cur] as usize != root {
            let next = self.0[cur] as usize;
            self.0[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// The smaller index becomes the root, so roots are orbit minima.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo as u32;
        }
    }

    /// Orbit number of every element, orbits numbered by their minimum.
    fn labels(mut self) -> (Vec<u32>, Vec<usize>) {
        let n = self.0.len();
        let mut label = vec![u32::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if label[r] == u32::MAX {
                label[r] = reps.len() as u32;
                reps.push(r);
            }
            label[x] = label[r];
        }
        (label, reps)
    }
}

#[derive(Debug, Clone)]
pub struct OrbitSystem {
    pub system: SparseSystem,
    /// Smallest monomial of each row orbit.
    pub row_orbits: Vec<nulla_poly::Monomial>,
    /// Smallest key of each column orbit.
    pub col_orbits: Vec<ColumnKey>,
    /// Orbit sums before reduction mod p, row by row.
    pub integer_rows: Vec<Vec<(u32, u64)>>,
    pub group_order: Option<u64>,
    /// `|G|` is known and prime to the characteristic.
    pub coprime_verified: bool,
    /// Orbit number of every full row / column.
    pub row_orbit_of: Vec<u32>,
    pub col_orbit_of: Vec<u32>,
    /// The full system the orbits were taken from.
    pub full: AssembledSystem,
}

impl OrbitSystem {
    /// Full columns of each orbit, ascending.
    pub fn col_members(&self) -> Vec<Vec<usize>> {
        members(&self.col_orbit_of, self.col_orbits.len())
    }

    pub fn row_members(&self) -> Vec<Vec<usize>> {
        members(&self.row_orbit_of, self.row_orbits.len())
    }

    /// Recomputes every orbit row from every member and checks they agree.
    pub fn is_well_defined(&self) -> bool {
        let p = self.system.field().p() as u64;
        self.row_members().iter().enumerate().all(|(o, rows)| {
            let expected: Vec<(u32, u32)> = self.system.row(o).to_vec();
            rows.iter().all(|&r| {
                let sums = orbit_sums(self.full.system.row(r), &self.col_orbit_of);
                let reduced: Vec<(u32, u32)> = sums
                    .into_iter()
                    .map(|(c, v)| (c, (v % p) as u32))
                    .filter(|e| e.1 != 0)
                    .collect();
                reduced == expected
            })
        })
    }
}

fn members(label: &[u32], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (x, &l) in label.iter().enumerate() {
        out[l as usize].push(x);
    }
    out
}

fn orbit_sums(row: &[(u32, u32)], col_orbit_of: &[u32]) -> Vec<(u32, u64)> {
    let mut sums: Vec<(u32, u64)> = row.iter().map(|&(c, v)| (col_orbit_of[c as usize], v as u64)).collect();
    sums.sort_unstable_by_key(|e| e.0);
    let mut merged: Vec<(u32, u64)> = Vec::with_capacity(sums.len());
    for (c, v) in sums {
        match merged.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => merged.push((c, v)),
        }
    }
    merged
}

pub fn assemble_orbit(
    sys: &PolySystem,
    d: u32,
    g: &Polynomial,
    perms: &PermutationSet,
    pruning: Pruning,
) -> Result<OrbitSystem, SymmetryError> {
    assemble_orbit_multi(sys, d, std::slice::from_ref(g), perms, pruning, crate::linsolve::DEFAULT_MEMORY_BUDGET)
}

pub fn assemble_orbit_multi(
    sys: &PolySystem,
    d: u32,
    targets: &[Polynomial],
    perms: &PermutationSet,
    pruning: Pruning,
    memory_budget: u64,
) -> Result<OrbitSystem, SymmetryError> {
    let images = poly_images(sys, perms)?;
    for t in targets {
        if perms.generators.iter().any(|gen| &t.permute_vars(gen) != t) {
            return Err(SymmetryError::TargetNotInvariant(t.to_string()));
        }
    }
    let full = assemble_multi(sys, d, targets, pruning, memory_budget)?;

    let mut rows_uf = UnionFind::new(full.row_keys.len());
    let mut cols_uf = UnionFind::new(full.col_keys.len());
    for (gen, img) in perms.generators.iter().zip(&images) {
        for (r, m) in full.row_keys.iter().enumerate() {
            let s = full.row_index(&m.permute(gen)).expect("row set is invariant");
            rows_uf.union(r, s);
        }
        for (c, key) in full.col_keys.iter().enumerate() {
            let image = ColumnKey {
                poly_index: img[key.poly_index],
                shift: key.shift.permute(gen),
            };
            let s = full.col_keys.binary_search(&image).expect("column set is invariant");
            cols_uf.union(c, s);
        }
    }
    let (row_orbit_of, row_reps) = rows_uf.labels();
    let (col_orbit_of, col_reps) = cols_uf.labels();

    let p = sys.field().p() as u64;
    let integer_rows: Vec<Vec<(u32, u64)>> =
        row_reps.iter().map(|&r| orbit_sums(full.system.row(r), &col_orbit_of)).collect();
    let rows: Vec<Vec<(u32, u32)>> = integer_rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(c, v)| (c, (v % p) as u32))
                .filter(|e| e.1 != 0)
                .collect()
        })
        .collect();
    let rhs: Vec<u32> = row_reps.iter().map(|&r| full.system.rhs()[r]).collect();
    let system = SparseSystem::with_budget(row_reps.len(), col_reps.len(), sys.field(), rows, rhs, memory_budget)?;

    let order = group_order(perms, DEFAULT_ORDER_CAP);
    Ok(OrbitSystem {
        system,
        row_orbits: row_reps.iter().map(|&r| full.row_keys[r].clone()).collect(),
        col_orbits: col_reps.iter().map(|&c| full.col_keys[c].clone()).collect(),
        integer_rows,
        group_order: order,
        coprime_verified: order.is_some_and(|o| o % p != 0),
        row_orbit_of,
        col_orbit_of,
        full,
    })
}

/// `y[c] = ȳ[Orb(c)]`.
pub fn lift_solution(orb: &OrbitSystem, y_bar: &[u32]) -> Vec<u32> {
    orb.col_orbit_of.iter().map(|&o| y_bar[o as usize]).collect()
}

/// Rhs of the orbit system for a fixed target.
fn orbit_rhs(orb: &OrbitSystem, g: &Polynomial) -> Result<Vec<u32>, SymmetryError> {
    let full = orb.full.rhs_for(g)?;
    let mut b = vec![0; orb.row_orbits.len()];
    for (r, &o) in orb.row_orbit_of.iter().enumerate() {
        if full[r] != 0 {
            b[o as usize] = full[r];
        }
    }
    Ok(b)
}

/// The degree loop on orbit systems. Certificates are lifted to the full
/// system and verified there. When the orbit system is inconsistent and the
/// group order is not known to be prime to p, `fallback_full` re-solves the
/// full system, since the orbit failure alone proves nothing.
pub fn nulla_prove_symmetric(
    sys: &PolySystem,
    schedule: &[u32],
    g_candidates: &[Polynomial],
    perms: &PermutationSet,
    opts: &ProveOptions,
    fallback_full: bool,
) -> Result<NullaOutcome, SymmetryError> {
    validate_schedule(schedule)?;
    let mut stats = Vec::new();
    let mut provenance = opts.provenance.clone();
    provenance.symmetry = Some(perms.to_string());
    for &d in schedule {
        let start = Instant::now();
        let orb = assemble_orbit_multi(sys, d, g_candidates, perms, opts.pruning, opts.memory_budget)?;
        let rhs_set = g_candidates
            .iter()
            .map(|g| orbit_rhs(&orb, g))
            .collect::<Result<Vec<_>, _>>()?;
        let mut results = solve_multi_rhs(&orb.system, &rhs_set, &opts.solver)?;
        let (mut rows, mut cols, mut nnz) = (orb.system.n_rows(), orb.system.n_cols(), orb.system.nnz());
        let mut lift = true;
        if !results.iter().any(|r| r.status == SolveStatus::Consistent) && !orb.coprime_verified && fallback_full {
            log::info!("orbit system inconclusive at degree {d}; solving the full system");
            let full_rhs = g_candidates
                .iter()
                .map(|g| orb.full.rhs_for(g))
                .collect::<Result<Vec<_>, _>>()?;
            results = solve_multi_rhs(&orb.full.system, &full_rhs, &opts.solver)?;
            (rows, cols, nnz) = (orb.full.system.n_rows(), orb.full.system.n_cols(), orb.full.system.nnz());
            lift = false;
        }
        let found = results.iter().position(|r| r.status == SolveStatus::Consistent);
        let record = DegreeStats {
            degree: d,
            rows,
            cols,
            nnz,
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
            let sol = results[j].solution.as_deref().expect("consistent result has a solution");
            let y = if lift { lift_solution(&orb, sol) } else { sol.to_vec() };
            let cert = build_certificate(sys, &orb.full, &y, &g_candidates[j], provenance.clone())?;
            if !verify(&cert).map_err(AssembleError::from)? {
                return Err(AssembleError::CertificateMismatch.into());
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
