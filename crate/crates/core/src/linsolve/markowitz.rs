//! Sparse Gaussian elimination with greedy fill control.
//!
//! Pivots are chosen among singleton rows first, otherwise from the column
//! with the fewest active entries (ties: lowest column index), taking the
//! lightest row in that column (ties: lowest row index). Every choice is a
//! pure function of the input, so the elimination is deterministic.

use std::collections::BTreeSet;

/// Row arithmetic for one coefficient field. Pivot rows are normalized to a
/// unit coefficient at the pivot column before they are used.
pub(crate) trait Arith {
    type Entry: Copy + Send + Sync;
    /// Right-hand sides of one row, one slot per rhs vector.
    type Rhs: Clone + Send + Sync;

    fn col(e: &Self::Entry) -> u32;
    fn zero_rhs(&self) -> Self::Rhs;
    /// Flags every rhs slot that is nonzero.
    fn mark_nonzero(&self, rhs: &Self::Rhs, out: &mut [bool]);

    /// Scales `row`/`rhs` so the coefficient at `col` becomes one.
    fn normalize(&self, row: &mut [Self::Entry], rhs: &mut Self::Rhs, col: u32);

    /// `target -= target[col] * pivot`, writing the new row into `out` and
    /// the columns that appeared or vanished (other than `col`) into
    /// `added`/`removed`.
    #[allow(clippy::too_many_arguments)]
    fn eliminate(
        &self,
        target: &[Self::Entry],
        target_rhs: &mut Self::Rhs,
        pivot: &[Self::Entry],
        pivot_rhs: &Self::Rhs,
        col: u32,
        out: &mut Vec<Self::Entry>,
        added: &mut Vec<u32>,
        removed: &mut Vec<u32>,
    );

    /// Value of the pivot variable: `rhs - Σ coeff * y[c]` over the non-pivot entries.
    fn back_substitute(&self, row: &[Self::Entry], rhs: &Self::Rhs, col: u32, y: &[Self::Rhs]) -> Self::Rhs;
}

pub(crate) struct Pivot<A: Arith> {
    pub col: u32,
    pub row: Vec<A::Entry>,
    pub rhs: A::Rhs,
}

/// Snapshot handed to the stop predicate.
pub(crate) struct Progress {
    pub active_rows: usize,
    pub active_cols: usize,
    pub nnz: usize,
}

pub(crate) struct SparseElim<A: Arith> {
    arith: A,
    rows: Vec<Vec<A::Entry>>,
    rhs: Vec<A::Rhs>,
    active: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    queue: BTreeSet<(u32, u32)>,
    singletons: Vec<u32>,
    pub pivots: Vec<Pivot<A>>,
    pub inconsistent: Vec<bool>,
    active_rows: usize,
    nnz: usize,
}

impl<A: Arith> SparseElim<A> {
    pub fn new(arith: A, n_cols: usize, rows: Vec<Vec<A::Entry>>, rhs: Vec<A::Rhs>, n_rhs: usize) -> Self {
        let mut col_rows = vec![Vec::new(); n_cols];
        let mut col_count = vec![0u32; n_cols];
        let mut active = vec![true; rows.len()];
        let mut inconsistent = vec![false; n_rhs];
        let mut singletons = Vec::new();
        let mut nnz = 0;
        let mut active_rows = 0;
        for (r, row) in rows.iter().enumerate() {
            if row.is_empty() {
                active[r] = false;
                arith.mark_nonzero(&rhs[r], &mut inconsistent);
                continue;
            }
            active_rows += 1;
            nnz += row.len();
            if row.len() == 1 {
                singletons.push(r as u32);
            }
            for e in row {
                let c = A::col(e) as usize;
                col_rows[c].push(r as u32);
                col_count[c] += 1;
            }
        }
        let queue = col_count
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(c, &n)| (n, c as u32))
            .collect();
        singletons.reverse();
        Self {
            arith,
            rows,
            rhs,
            active,
            col_rows,
            col_count,
            queue,
            singletons,
            pivots: Vec::new(),
            inconsistent,
            active_rows,
            nnz,
        }
    }

    pub fn progress(&self) -> Progress {
        Progress {
            active_rows: self.active_rows,
            active_cols: self.queue.len(),
            nnz: self.nnz,
        }
    }

    fn contains(&self, r: u32, c: u32) -> bool {
        self.active[r as usize]
            && self.rows[r as usize]
                .binary_search_by_key(&c, |e| A::col(e))
                .is_ok()
    }

    fn set_count(&mut self, c: u32, new: u32) {
        let old = self.col_count[c as usize];
        if old == new {
            return;
        }
        if old > 0 {
            self.queue.remove(&(old, c));
        }
        if new > 0 {
            self.queue.insert((new, c));
        }
        self.col_count[c as usize] = new;
    }

    fn choose_pivot(&mut self) -> Option<(u32, u32)> {
        while let Some(r) = self.singletons.pop() {
            if self.active[r as usize] && self.rows[r as usize].len() == 1 {
                return Some((r, A::col(&self.rows[r as usize][0])));
            }
        }
        let &(_, c) = self.queue.first()?;
        let mut best: Option<(usize, u32)> = None;
        let mut list = std::mem::take(&mut self.col_rows[c as usize]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| self.contains(r, c));
        for &r in &list {
            let w = self.rows[r as usize].len();
            if best.is_none_or(|(bw, _)| w < bw) {
                best = Some((w, r));
            }
        }
        self.col_rows[c as usize] = list;
        best.map(|(_, r)| (r, c))
    }

    /// Eliminates until no pivot remains or `stop` asks to hand over.
    /// Returns true when every active row has been consumed.
    pub fn run(&mut self, mut stop: impl FnMut(&Progress) -> bool) -> bool {
        let mut out = Vec::new();
        let mut added = Vec::new();
        let mut removed = Vec::new();
        let mut steps = 0usize;
        loop {
            if steps.is_multiple_of(64) && self.active_rows > 0 && stop(&self.progress()) {
                return false;
            }
            let Some((p, c)) = self.choose_pivot() else {
                return true;
            };
            self.pivot_on(p, c, &mut out, &mut added, &mut removed);
            steps += 1;
        }
    }

    fn pivot_on(&mut self, p: u32, c: u32, out: &mut Vec<A::Entry>, added: &mut Vec<u32>, removed: &mut Vec<u32>) {
        let mut prow = std::mem::take(&mut self.rows[p as usize]);
        let mut prhs = std::mem::replace(&mut self.rhs[p as usize], self.arith.zero_rhs());
        self.active[p as usize] = false;
        self.active_rows -= 1;
        self.nnz -= prow.len();
        self.arith.normalize(&mut prow, &mut prhs, c);
        for e in &prow {
            let col = A::col(e);
            if col != c {
                let n = self.col_count[col as usize] - 1;
                self.set_count(col, n);
            }
        }

        let targets = std::mem::take(&mut self.col_rows[c as usize]);
        for &r in &targets {
            if r == p || !self.contains(r, c) {
                continue;
            }
            out.clear();
            added.clear();
            removed.clear();
            let ru = r as usize;
            self.arith
                .eliminate(&self.rows[ru], &mut self.rhs[ru], &prow, &prhs, c, out, added, removed);
            self.nnz = self.nnz + out.len() - self.rows[ru].len();
            std::mem::swap(&mut self.rows[ru], out);
            for &a in added.iter() {
                self.col_rows[a as usize].push(r);
                let n = self.col_count[a as usize] + 1;
                self.set_count(a, n);
            }
            for &d in removed.iter() {
                let n = self.col_count[d as usize] - 1;
                self.set_count(d, n);
            }
            match self.rows[ru].len() {
                0 => {
                    self.active[ru] = false;
                    self.active_rows -= 1;
                    let rhs = std::mem::replace(&mut self.rhs[ru], self.arith.zero_rhs());
                    self.arith.mark_nonzero(&rhs, &mut self.inconsistent);
                }
                1 => self.singletons.push(r),
                _ => {}
            }
        }
        self.set_count(c, 0);
        self.col_rows[c as usize] = Vec::new();
        self.pivots.push(Pivot {
            col: c,
            row: prow,
            rhs: prhs,
        });
    }

    /// Active rows (ascending index) and the columns still in play (ascending).
    pub fn into_remaining(self) -> (A, Vec<Pivot<A>>, Vec<bool>, Vec<(Vec<A::Entry>, A::Rhs)>, Vec<u32>) {
        let mut cols: Vec<u32> = self.queue.iter().map(|&(_, c)| c).collect();
        cols.sort_unstable();
        let remaining = self
            .rows
            .into_iter()
            .zip(self.rhs)
            .zip(self.active)
            .filter(|(_, a)| *a)
            .map(|(rr, _)| rr)
            .collect();
        (self.arith, self.pivots, self.inconsistent, remaining, cols)
    }
}

/// Solves pivots in reverse order with every free variable at zero.
pub(crate) fn back_substitute<A: Arith>(arith: &A, pivots: &[Pivot<A>], y: &mut [A::Rhs]) {
    for piv in pivots.iter().rev() {
        let v = arith.back_substitute(&piv.row, &piv.rhs, piv.col, y);
        y[piv.col as usize] = v;
    }
}
