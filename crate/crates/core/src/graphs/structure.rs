use std::collections::{BTreeMap, VecDeque};

use super::{Graph, GraphError};

/// Every triangle once, as ascending vertex triples in lexicographic order.
///
/// For each edge `(u, v)` the shorter neighbor list is scanned and probed
/// against the longer one.
pub fn enumerate_triangles(g: &Graph) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        let (nu, nv) = (g.neighbors(u), g.neighbors(v));
        let (short, long) = if nu.len() <= nv.len() { (nu, nv) } else { (nv, nu) };
        let start = short.partition_point(|&w| w <= v);
        for &w in &short[start..] {
            if long.binary_search(&w).is_ok() {
                out.push([u, v, w]);
            }
        }
    }
    out
}

/// Every clique of exactly `size` vertices once, ascending, lexicographic.
pub fn enumerate_cliques(g: &Graph, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    let mut stack = Vec::with_capacity(size);
    for v in g.vertices() {
        let cands: Vec<u32> = g.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        stack.push(v);
        extend_clique(g, size, &mut stack, &cands, &mut out);
        stack.pop();
    }
    out
}

fn extend_clique(g: &Graph, size: usize, stack: &mut Vec<u32>, cands: &[u32], out: &mut Vec<Vec<u32>>) {
    if stack.len() == size {
        out.push(stack.clone());
        return;
    }
    for (i, &w) in cands.iter().enumerate() {
        if cands.len() - i < size - stack.len() {
            break;
        }
        let next: Vec<u32> = cands[i + 1..].iter().copied().filter(|&x| g.has_edge(w, x)).collect();
        stack.push(w);
        extend_clique(g, size, stack, &next, out);
        stack.pop();
    }
}

/// BFS tree from `origin`: maps each other vertex of its component to its parent.
pub fn spanning_tree(g: &Graph, origin: u32) -> Result<BTreeMap<u32, u32>, GraphError> {
    if origin == 0 || origin as usize > g.n_vertices() {
        return Err(GraphError::VertexOutOfRange {
            vertex: origin,
            n: g.n_vertices(),
        });
    }
    let mut parent = BTreeMap::new();
    let mut seen = vec![false; g.n_vertices() + 1];
    seen[origin as usize] = true;
    let mut queue = VecDeque::from([origin]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    Ok(parent)
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn components(g: &Graph) -> Vec<Vec<u32>> {
    let mut seen = vec![false; g.n_vertices() + 1];
    let mut out = Vec::new();
    for v in g.vertices() {
        if seen[v as usize] {
            continue;
        }
        let mut comp = vec![v];
        seen[v as usize] = true;
        let mut i = 0;
        while i < comp.len() {
            for &w in g.neighbors(comp[i]) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
