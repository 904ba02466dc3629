//! Brute-force colorability, independent of the algebraic pipeline.

use super::Graph;

/// Exact k-colorability by backtracking.
///
/// Vertices are taken in descending-degree order and a vertex may only open
/// one new color beyond those already used, which removes color-permutation
/// symmetry. Meant for graphs with up to roughly 20 vertices.
pub fn oracle_colorable(g: &Graph, k: usize) -> bool {
    let n = g.n_vertices();
    if n == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut order: Vec<u32> = g.vertices().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut color = vec![usize::MAX; n + 1];
    assign(g, k, &order, 0, 0, &mut color)
}

fn assign(g: &Graph, k: usize, order: &[u32], idx: usize, used: usize, color: &mut [usize]) -> bool {
    let Some(&v) = order.get(idx) else {
        return true;
    };
    for c in 0..k.min(used + 1) {
        if g.neighbors(v).iter().any(|&w| color[w as usize] == c) {
            continue;
        }
        color[v as usize] = c;
        if assign(g, k, order, idx + 1, used.max(c + 1), color) {
            return true;
        }
    }
    color[v as usize] = usize::MAX;
    false
}

/// Tries all `k^n` assignments; only for very small graphs.
pub fn oracle_colorable_exhaustive(g: &Graph, k: usize) -> bool {
    let n = g.n_vertices();
    let total = (k as u64).checked_pow(n as u32).expect("k^n overflows");
    let mut colors = vec![0usize; n + 1];
    for code in 0..total {
        let mut c = code;
        for v in 1..=n {
            colors[v] = (c % k as u64) as usize;
            c /= k as u64;
        }
        if g.edges().iter().all(|&(u, v)| colors[u as usize] != colors[v as usize]) {
            return true;
        }
    }
    false
}
