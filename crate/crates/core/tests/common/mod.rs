//! Helpers shared by the integration tests.
#![allow(dead_code)]

use nulla_core::linsolve::SparseSystem;
use nulla_poly::FieldSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Plain Gauss-Jordan on a dense copy: (consistent, rank).
pub fn reference(sys: &SparseSystem, rhs: &[u32]) -> (bool, usize) {
    let f = sys.field();
    let n = sys.n_cols();
    let mut m: Vec<Vec<u32>> = (0..sys.n_rows())
        .map(|r| {
            let mut row = vec![0; n + 1];
            for &(c, v) in sys.row(r) {
                row[c as usize] = v;
            }
            row[n] = rhs[r];
            row
        })
        .collect();
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = f.inv(m[rank][c]).unwrap();
        for v in m[rank].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let factor = m[r][c];
                for k in 0..=n {
                    let sub = f.mul(factor, m[rank][k]);
                    m[r][k] = f.sub(m[r][k], sub);
                }
            }
        }
        rank += 1;
    }
    let consistent = m[rank..].iter().all(|row| row[n] == 0);
    (consistent, rank)
}

pub fn random_system(rng: &mut ChaCha8Rng, p: u32, max_dim: usize) -> SparseSystem {
    let field = FieldSpec::new(p).unwrap();
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let density = rng.gen_range(0.02..0.5);
    let mut triplets = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(density) {
                triplets.push((r as u32, c as u32, rng.gen_range(1..p) as i64));
            }
        }
    }
    // Make some systems consistent by construction.
    let rhs: Vec<i64> = if rng.gen_bool(0.5) {
        let y: Vec<i64> = (0..cols).map(|_| rng.gen_range(0..p) as i64).collect();
        (0..rows)
            .map(|r| triplets.iter().filter(|t| t.0 as usize == r).map(|t| t.2 * y[t.1 as usize]).sum())
            .collect()
    } else {
        (0..rows).map(|_| rng.gen_range(0..p) as i64).collect()
    };
    SparseSystem::from_triplets(rows, cols, field, triplets, rhs).unwrap()
}
