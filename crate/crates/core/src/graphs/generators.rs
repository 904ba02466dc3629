use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidParams(msg.into())
}

pub fn gen_complete(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(invalid("complete graph needs at least one vertex"));
    }
    let n32 = n as u32;
    Graph::new(n, (1..=n32).flat_map(|u| (u + 1..=n32).map(move |v| (u, v))))
}

pub fn gen_path(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(invalid("path needs at least one vertex"));
    }
    Graph::new(n, (1..n as u32).map(|u| (u, u + 1)))
}

pub fn gen_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(invalid(format!("cycle length {n} < 3")));
    }
    let n32 = n as u32;
    Graph::new(n, (1..=n32).map(|u| (u, u % n32 + 1)))
}

/// Hub is vertex 1; the rim cycle is `2, 3, ..., rim + 1`.
pub fn gen_wheel(rim: usize) -> Result<Graph, GraphError> {
    if rim < 3 {
        return Err(invalid(format!("wheel rim {rim} < 3")));
    }
    let r = rim as u32;
    let spokes = (2..=r + 1).map(|v| (1, v));
    let cycle = (0..r).map(|i| (2 + i, 2 + (i + 1) % r));
    Graph::new(rim + 1, spokes.chain(cycle))
}

/// Vertices are the `r`-subsets of `{1..t}` in lexicographic order; disjoint
/// subsets are adjacent.
pub fn gen_kneser(t: usize, r: usize) -> Result<Graph, GraphError> {
    if r == 0 || t < r {
        return Err(invalid(format!("Kneser({t},{r}) needs t >= r >= 1")));
    }
    if t > 64 {
        return Err(invalid("Kneser ground set limited to 64 elements"));
    }
    let subsets = combinations(t, r);
    let mut edges = Vec::new();
    for (i, a) in subsets.iter().enumerate() {
        for (j, b) in subsets.iter().enumerate().skip(i + 1) {
            if a & b == 0 {
                edges.push((i as u32 + 1, j as u32 + 1));
            }
        }
    }
    Graph::new(subsets.len(), edges)
}

/// `r`-subsets of `{0..t}` as bitmasks, lexicographic by element list.
fn combinations(t: usize, r: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | 1 << i));
        let Some(pos) = (0..r).rev().find(|&p| idx[p] < t - r + p) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..r {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Mycielski graph of order `k` (`m2 = K2`, `m3 = C5`, `m4` = Grötzsch, ...).
///
/// Each step maps `G` on `v_1..v_n` to `v_1..v_n, u_1..u_n, w` where `u_i`
/// copies the neighborhood of `v_i` and `w` is adjacent to every `u_i`.
pub fn gen_mycielski(k: usize) -> Result<Graph, GraphError> {
    if k < 2 {
        return Err(invalid(format!("Mycielski order {k} < 2")));
    }
    if k > 20 {
        return Err(invalid(format!("Mycielski order {k} too large")));
    }
    let mut g = gen_complete(2)?;
    for _ in 2..k {
        let n = g.n_vertices() as u32;
        let mut edges: Vec<(u32, u32)> = g.edges().to_vec();
        for &(a, b) in g.edges() {
            edges.push((a, b + n));
            edges.push((b, a + n));
        }
        let w = 2 * n + 1;
        edges.extend((1..=n).map(|i| (i + n, w)));
        g = Graph::new(w as usize, edges)?;
    }
    Ok(g)
}

/// Erdős–Rényi `G(n, p)`: each pair `(u, v)`, `u < v`, visited in
/// lexicographic order, is kept when a ChaCha8 stream seeded via
/// `seed_from_u64(seed)` yields `gen_bool(edge_prob)`.
pub fn gen_random(n: usize, edge_prob: f64, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(invalid("random graph needs at least one vertex"));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(invalid(format!("edge probability {edge_prob} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n as u32 {
        for v in u + 1..=n as u32 {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Generator selection in text form, e.g. `kneser:8,3`, `mycielski:7`,
/// `wheel:5`, `complete:4`, `cycle:5`, `path:3`, `random:16,0.27,42`.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    Wheel(usize),
    Kneser(usize, usize),
    Mycielski(usize),
    Random { n: usize, p: f64, seed: u64 },
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph, GraphError> {
        match *self {
            GraphSpec::Complete(n) => gen_complete(n),
            GraphSpec::Path(n) => gen_path(n),
            GraphSpec::Cycle(n) => gen_cycle(n),
            GraphSpec::Wheel(r) => gen_wheel(r),
            GraphSpec::Kneser(t, r) => gen_kneser(t, r),
            GraphSpec::Mycielski(k) => gen_mycielski(k),
            GraphSpec::Random { n, p, seed } => gen_random(n, p, seed),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = args.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
        let num = |i: usize| -> Result<usize, GraphError> {
            args.get(i)
                .ok_or_else(|| invalid(format!("`{s}`: missing argument {}", i + 1)))?
                .parse()
                .map_err(|_| invalid(format!("`{s}`: argument {} is not an integer", i + 1)))
        };
        let arity = |k: usize| -> Result<(), GraphError> {
            if args.len() == k {
                Ok(())
            } else {
                Err(invalid(format!("`{s}`: expected {k} argument(s)")))
            }
        };
        match kind.trim() {
            "complete" => arity(1).and(Ok(GraphSpec::Complete(num(0)?))),
            "path" => arity(1).and(Ok(GraphSpec::Path(num(0)?))),
            "cycle" => arity(1).and(Ok(GraphSpec::Cycle(num(0)?))),
            "wheel" => arity(1).and(Ok(GraphSpec::Wheel(num(0)?))),
            "mycielski" => arity(1).and(Ok(GraphSpec::Mycielski(num(0)?))),
            "kneser" => arity(2).and(Ok(GraphSpec::Kneser(num(0)?, num(1)?))),
            "random" => {
                if !(2..=3).contains(&args.len()) {
                    return Err(invalid(format!("`{s}`: expected random:<n>,<p>[,<seed>]")));
                }
                let p = args[1]
                    .parse()
                    .map_err(|_| invalid(format!("`{s}`: bad probability")))?;
                let seed = match args.get(2) {
                    Some(t) => t.parse().map_err(|_| invalid(format!("`{s}`: bad seed")))?,
                    None => 0,
                };
                Ok(GraphSpec::Random { n: num(0)?, p, seed })
            }
            other => Err(invalid(format!("unknown generator `{other}`"))),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Wheel(r) => write!(f, "wheel:{r}"),
            GraphSpec::Kneser(t, r) => write!(f, "kneser:{t},{r}"),
            GraphSpec::Mycielski(k) => write!(f, "mycielski:{k}"),
            GraphSpec::Random { n, p, seed } => write!(f, "random:{n},{p},{seed}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nulla_poly::binomial;

    #[test]
    fn kneser_sizes() {
        for (t, r, v, e) in [(5, 2, 10, 15), (8, 3, 56, 280), (10, 4, 210, 1575)] {
            let g = gen_kneser(t, r).unwrap();
            assert_eq!((g.n_vertices(), g.n_edges()), (v, e), "Kneser({t},{r})");
            let formula = binomial(t as u64, r as u64) * binomial((t - r) as u64, r as u64) / 2;
            assert_eq!(g.n_edges() as u128, formula);
        }
        assert!(gen_kneser(3, 0).is_err());
        assert_eq!(gen_kneser(3, 2).unwrap().n_edges(), 0);
    }

    #[test]
    fn mycielski_sizes() {
        let expected = [(2, 2, 1), (3, 5, 5), (4, 11, 20), (5, 23, 71), (6, 47, 236), (7, 95, 755)];
        for (k, v, e) in expected {
            let g = gen_mycielski(k).unwrap();
            assert_eq!((g.n_vertices(), g.n_edges()), (v, e), "m{k}");
        }
        for k in 2..8 {
            let a = gen_mycielski(k).unwrap().n_vertices();
            let b = gen_mycielski(k + 1).unwrap().n_vertices();
            assert_eq!(b, 2 * a + 1);
        }
        assert!(gen_mycielski(1).is_err());
    }

    #[test]
    fn small_families() {
        let w = gen_wheel(5).unwrap();
        assert_eq!((w.n_vertices(), w.n_edges()), (6, 10));
        assert_eq!(w.degree(1), 5);
        assert!(gen_wheel(2).is_err());
        assert_eq!(gen_complete(4).unwrap().n_edges(), 6);
        assert_eq!(gen_cycle(5).unwrap().edges(), &[(1, 2), (1, 5), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(gen_path(3).unwrap().edges(), &[(1, 2), (2, 3)]);
    }

    #[test]
    fn random_is_reproducible() {
        let a = gen_random(16, 0.27, 9).unwrap();
        assert_eq!(a, gen_random(16, 0.27, 9).unwrap());
        assert_ne!(a, gen_random(16, 0.27, 10).unwrap());
        assert_eq!(gen_random(6, 0.0, 1).unwrap().n_edges(), 0);
        assert_eq!(gen_random(6, 1.0, 1).unwrap().n_edges(), 15);
        assert!(gen_random(6, 1.5, 1).is_err());
    }

    #[test]
    fn spec_strings() {
        assert_eq!("kneser:8,3".parse::<GraphSpec>().unwrap(), GraphSpec::Kneser(8, 3));
        assert_eq!("wheel:5".parse::<GraphSpec>().unwrap(), GraphSpec::Wheel(5));
        assert_eq!(
            "random:16,0.27,4".parse::<GraphSpec>().unwrap(),
            GraphSpec::Random { n: 16, p: 0.27, seed: 4 }
        );
        for bad in ["kneser:8", "wheel", "star:3", "complete:x", "complete:3,4"] {
            assert!(bad.parse::<GraphSpec>().is_err(), "{bad}");
        }
        let spec = GraphSpec::Mycielski(4);
        assert_eq!(spec.to_string().parse::<GraphSpec>().unwrap(), spec);
    }
}
