//! Odd-prime elimination on sparse `(column, coefficient)` rows.

use nulla_poly::FieldSpec;

use super::markowitz::{back_substitute, Arith, SparseElim};
use super::Echelon;

pub(crate) struct Gfp {
    pub field: FieldSpec,
    pub n_rhs: usize,
}

impl Arith for Gfp {
    type Entry = (u32, u32);
    type Rhs = Vec<u32>;

    fn col(e: &(u32, u32)) -> u32 {
        e.0
    }

    fn zero_rhs(&self) -> Vec<u32> {
        vec![0; self.n_rhs]
    }

    fn mark_nonzero(&self, rhs: &Vec<u32>, out: &mut [bool]) {
        for (flag, &v) in out.iter_mut().zip(rhs) {
            if v != 0 {
                *flag = true;
            }
        }
    }

    fn normalize(&self, row: &mut [(u32, u32)], rhs: &mut Vec<u32>, col: u32) {
        let at = row.binary_search_by_key(&col, |e| e.0).expect("pivot entry");
        let inv = self.field.inv(row[at].1).expect("nonzero pivot");
        if inv == 1 {
            return;
        }
        for e in row.iter_mut() {
            e.1 = self.field.mul(e.1, inv);
        }
        for v in rhs.iter_mut() {
            *v = self.field.mul(*v, inv);
        }
    }

    fn eliminate(
        &self,
        target: &[(u32, u32)],
        target_rhs: &mut Vec<u32>,
        pivot: &[(u32, u32)],
        pivot_rhs: &Vec<u32>,
        col: u32,
        out: &mut Vec<(u32, u32)>,
        added: &mut Vec<u32>,
        removed: &mut Vec<u32>,
    ) {
        let f = &self.field;
        let at = target.binary_search_by_key(&col, |e| e.0).expect("target entry");
        let factor = target[at].1;
        for (t, &p) in target_rhs.iter_mut().zip(pivot_rhs) {
            *t = f.sub(*t, f.mul(factor, p));
        }
        let (mut i, mut j) = (0, 0);
        while i < target.len() && j < pivot.len() {
            let (a, b) = (target[i], pivot[j]);
            if a.0 < b.0 {
                out.push(a);
                i += 1;
            } else if b.0 < a.0 {
                out.push((b.0, f.neg(f.mul(factor, b.1))));
                added.push(b.0);
                j += 1;
            } else {
                let v = f.sub(a.1, f.mul(factor, b.1));
                if v != 0 {
                    out.push((a.0, v));
                } else if a.0 != col {
                    removed.push(a.0);
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&target[i..]);
        for &(c, v) in &pivot[j..] {
            out.push((c, f.neg(f.mul(factor, v))));
            added.push(c);
        }
    }

    fn back_substitute(&self, row: &[(u32, u32)], rhs: &Vec<u32>, col: u32, y: &[Vec<u32>]) -> Vec<u32> {
        let f = &self.field;
        let mut v = rhs.clone();
        for &(c, a) in row {
            if c != col {
                for (acc, &yy) in v.iter_mut().zip(&y[c as usize]) {
                    *acc = f.sub(*acc, f.mul(a, yy));
                }
            }
        }
        v
    }
}

pub(crate) fn solve_gfp(
    field: FieldSpec,
    n_cols: usize,
    rows: Vec<Vec<(u32, u32)>>,
    rhs: Vec<Vec<u32>>,
    n_rhs: usize,
) -> Echelon {
    let mut elim = SparseElim::new(Gfp { field, n_rhs }, n_cols, rows, rhs, n_rhs);
    elim.run(|_| false);
    let (arith, pivots, inconsistent, remaining, _) = elim.into_remaining();
    debug_assert!(remaining.is_empty());
    let mut y = vec![vec![0u32; n_rhs]; n_cols];
    back_substitute(&arith, &pivots, &mut y);
    let mut pivot_cols: Vec<u32> = pivots.iter().map(|p| p.col).collect();
    pivot_cols.sort_unstable();
    Echelon::from_values(y, inconsistent, pivot_cols)
}
