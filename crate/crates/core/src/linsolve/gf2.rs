//! Binary-field elimination: sparse rows are sorted column lists and the
//! right-hand sides of all rhs vectors travel together as packed bit words.
//! Once the active part fills in, it is finished on a dense bit matrix.

use rayon::prelude::*;

use super::markowitz::{back_substitute, Arith, Pivot, Progress, SparseElim};
use super::{DenseSwitch, Echelon};

pub(crate) struct Gf2 {
    pub words: usize,
}

impl Arith for Gf2 {
    type Entry = u32;
    type Rhs = Vec<u64>;

    fn col(e: &u32) -> u32 {
        *e
    }

    fn zero_rhs(&self) -> Vec<u64> {
        vec![0; self.words]
    }

    fn mark_nonzero(&self, rhs: &Vec<u64>, out: &mut [bool]) {
        for (i, flag) in out.iter_mut().enumerate() {
            if rhs[i / 64] >> (i % 64) & 1 == 1 {
                *flag = true;
            }
        }
    }

    fn normalize(&self, _: &mut [u32], _: &mut Vec<u64>, _: u32) {}

    fn eliminate(
        &self,
        target: &[u32],
        target_rhs: &mut Vec<u64>,
        pivot: &[u32],
        pivot_rhs: &Vec<u64>,
        col: u32,
        out: &mut Vec<u32>,
        added: &mut Vec<u32>,
        removed: &mut Vec<u32>,
    ) {
        for (t, p) in target_rhs.iter_mut().zip(pivot_rhs) {
            *t ^= p;
        }
        let (mut i, mut j) = (0, 0);
        while i < target.len() && j < pivot.len() {
            let (a, b) = (target[i], pivot[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                added.push(b);
                j += 1;
            } else {
                if a != col {
                    removed.push(a);
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&target[i..]);
        for &b in &pivot[j..] {
            out.push(b);
            added.push(b);
        }
    }

    fn back_substitute(&self, row: &[u32], rhs: &Vec<u64>, col: u32, y: &[Vec<u64>]) -> Vec<u64> {
        let mut v = rhs.clone();
        for &c in row {
            if c != col {
                for (a, b) in v.iter_mut().zip(&y[c as usize]) {
                    *a ^= b;
                }
            }
        }
        v
    }
}

/// Fraction of nonzeros in the active block above which the dense tail takes over.
const DENSE_FILL: f64 = 0.03;
/// Active blocks with at most this many cells go dense regardless of fill.
const DENSE_SMALL: usize = 1 << 22;

pub(crate) fn solve_gf2(
    n_cols: usize,
    rows: Vec<Vec<u32>>,
    rhs: Vec<Vec<u64>>,
    n_rhs: usize,
    dense_budget: u64,
    switch: DenseSwitch,
) -> Result<Echelon, u64> {
    let words = n_rhs.div_ceil(64).max(1);
    let mut elim = SparseElim::new(Gf2 { words }, n_cols, rows, rhs, n_rhs);
    let fits = |p: &Progress| dense_bytes(p.active_rows, p.active_cols, words) <= dense_budget;
    let wants_dense = |p: &Progress| {
        let cells = p.active_rows * p.active_cols;
        cells > 0 && (cells <= DENSE_SMALL || p.nnz as f64 >= DENSE_FILL * cells as f64)
    };
    elim.run(|p| match switch {
        DenseSwitch::Auto => wants_dense(p) && fits(p),
        DenseSwitch::Never => false,
        DenseSwitch::Immediately => true,
    });
    let (arith, pivots, mut inconsistent, remaining, cols) = elim.into_remaining();

    let mut y = vec![vec![0u64; words]; n_cols];
    let mut pivot_cols: Vec<u32> = pivots.iter().map(|p: &Pivot<Gf2>| p.col).collect();
    if !remaining.is_empty() {
        let need = dense_bytes(remaining.len(), cols.len(), words);
        if need > dense_budget {
            return Err(need);
        }
        let dense = DenseTail::build(&remaining, &cols, words);
        pivot_cols.extend(dense.finish(&cols, &mut inconsistent, &mut y));
    }
    back_substitute(&arith, &pivots, &mut y);
    pivot_cols.sort_unstable();
    Ok(Echelon::from_bits(y, inconsistent, pivot_cols, n_rhs))
}

fn dense_bytes(rows: usize, cols: usize, words: usize) -> u64 {
    (rows as u64) * ((cols.div_ceil(64) + words) as u64) * 8
}

/// Row-major bit matrix with the rhs words appended to each row.
struct DenseTail {
    stride: usize,
    col_words: usize,
    n_rows: usize,
    data: Vec<u64>,
}

impl DenseTail {
    fn build(remaining: &[(Vec<u32>, Vec<u64>)], cols: &[u32], words: usize) -> Self {
        let col_words = cols.len().div_ceil(64);
        let stride = col_words + words;
        let mut data = vec![0u64; remaining.len() * stride];
        for (r, (row, rhs)) in remaining.iter().enumerate() {
            let base = r * stride;
            for c in row {
                let j = cols.binary_search(c).expect("active column");
                data[base + j / 64] |= 1 << (j % 64);
            }
            data[base + col_words..base + stride].copy_from_slice(rhs);
        }
        Self {
            stride,
            col_words,
            n_rows: remaining.len(),
            data,
        }
    }

    /// Forward elimination, then back-substitution into `y`. Returns the
    /// original indices of the pivot columns.
    fn finish(mut self, cols: &[u32], inconsistent: &mut [bool], y: &mut [Vec<u64>]) -> Vec<u32> {
        let stride = self.stride;
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (dense column, row)
        let mut next = 0;
        for j in 0..cols.len() {
            if next == self.n_rows {
                break;
            }
            let (w, bit) = (j / 64, 1u64 << (j % 64));
            let Some(found) = (next..self.n_rows).find(|&r| self.data[r * stride + w] & bit != 0) else {
                continue;
            };
            if found != next {
                for k in w..stride {
                    self.data.swap(found * stride + k, next * stride + k);
                }
            }
            let (head, tail) = self.data.split_at_mut((next + 1) * stride);
            let prow = &head[next * stride..];
            tail.par_chunks_mut(stride).for_each(|row| {
                if row[w] & bit != 0 {
                    for k in w..stride {
                        row[k] ^= prow[k];
                    }
                }
            });
            pivots.push((j, next));
            next += 1;
        }
        for r in next..self.n_rows {
            let base = r * stride + self.col_words;
            let rhs = &self.data[base..base + stride - self.col_words];
            for (i, flag) in inconsistent.iter_mut().enumerate() {
                if rhs[i / 64] >> (i % 64) & 1 == 1 {
                    *flag = true;
                }
            }
        }
        for &(j, r) in pivots.iter().rev() {
            let base = r * stride;
            let mut v = self.data[base + self.col_words..base + stride].to_vec();
            for w in j / 64..self.col_words {
                let mut bits = self.data[base + w];
                while bits != 0 {
                    let b = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if b != j {
                        for (a, yy) in v.iter_mut().zip(&y[cols[b] as usize]) {
                            *a ^= yy;
                        }
                    }
                }
            }
            y[cols[j] as usize] = v;
        }
        pivots.iter().map(|&(j, _)| cols[j]).collect()
    }
}
