//! Polynomial encodings of graph k-colorability over GF(p).
//!
//! Vertex `i` contributes `x_i^k - 1` and edge `{i, j}` contributes
//! `x_i^(k-1) + x_i^(k-2) x_j + ... + x_j^(k-1)`. The system has a common zero
//! over the algebraic closure of GF(p) iff the graph is k-colorable, provided
//! `gcd(k, p) = 1`. Over GF(2) the vertex polynomial prints as `x_i^3+1`.

use nulla_poly::{monomials_of_degree, FieldSpec, Monomial, PolyError, PolySystem, Polynomial, SourceTag};
use thiserror::Error;

use crate::graphs::{components, enumerate_cliques, enumerate_triangles, Graph, GraphError};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("k = {k} colors is not coprime to the characteristic {p}")]
    NotCoprime { k: u32, p: u32 },
    #[error("k must be at least 1")]
    ZeroColors,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("triangle cutters are only valid for k = 3 (got k = {0}); use clique cutters")]
    TrianglesNeedK3(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Redundant equations appended to lower the certificate degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Cutters {
    #[default]
    None,
    /// `x_u^2 + x_v^2 + x_w^2` per triangle (k = 3 only).
    Triangles,
    /// `Σ x_v^(k-1)` over each k-clique; coincides with `Triangles` for k = 3.
    Cliques,
}

/// Which right-hand sides `g` in `g = Σ β_i f_i` to try.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum AltTarget {
    #[default]
    Off,
    Monomial(Monomial),
    /// `g = 1` first, then every monomial of the given degree.
    Auto(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingOptions {
    k: u32,
    field: FieldSpec,
    pub preprocess: bool,
    pub cutters: Cutters,
    pub alt_g: AltTarget,
}

impl EncodingOptions {
    pub fn new(k: u32, field: FieldSpec) -> Result<Self, EncodeError> {
        if k == 0 {
            return Err(EncodeError::ZeroColors);
        }
        if k.is_multiple_of(field.p()) {
            // p prime, so gcd(k, p) = 1 iff p does not divide k
            return Err(EncodeError::NotCoprime { k, p: field.p() });
        }
        Ok(Self {
            k,
            field,
            preprocess: false,
            cutters: Cutters::None,
            alt_g: AltTarget::Off,
        })
    }

    /// 3-coloring over GF(2) with vertex-polynomial preprocessing.
    pub fn three_coloring_gf2() -> Self {
        Self {
            preprocess: true,
            ..Self::new(3, FieldSpec::gf2()).expect("gcd(3, 2) = 1")
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

fn vertex_poly(v: u32, n: usize, k: u32, field: FieldSpec) -> Polynomial {
    Polynomial::from_terms(n, field, [(Monomial::var_pow(v as usize - 1, k), 1), (Monomial::one(), -1)])
        .expect("vertex in range")
}

fn edge_poly(u: u32, v: u32, n: usize, k: u32, field: FieldSpec) -> Polynomial {
    let (a, b) = (u as usize - 1, v as usize - 1);
    let terms = (0..k).map(|t| (Monomial::from_pairs([(a, k - 1 - t), (b, t)]), 1));
    Polynomial::from_terms(n, field, terms).expect("edge in range")
}

/// The raw encoding: vertex polynomials by vertex index, then edge
/// polynomials by `(u, v)`. Preprocessing and cutters are not applied.
pub fn encode_coloring(g: &Graph, opts: &EncodingOptions) -> Result<PolySystem, EncodeError> {
    let n = g.n_vertices();
    if n == 0 {
        return Err(EncodeError::EmptyGraph);
    }
    let (k, field) = (opts.k, opts.field);
    let mut polys = Vec::with_capacity(n + g.n_edges());
    let mut tags = Vec::with_capacity(n + g.n_edges());
    for v in g.vertices() {
        polys.push(vertex_poly(v, n, k, field));
        tags.push(SourceTag::Vertex(v));
    }
    for &(u, v) in g.edges() {
        polys.push(edge_poly(u, v, n, k, field));
        tags.push(SourceTag::Edge(u, v));
    }
    Ok(PolySystem::with_tags(n, field, polys, tags)?)
}

/// Drops redundant vertex polynomials.
///
/// `x_i^k - 1 = (x_j^k - 1) + (x_i - x_j) * e_ij` for every edge `{i, j}`, so
/// within a connected component one vertex polynomial generates the others.
/// `origin` keeps its polynomial; every other component keeps its
/// smallest-index vertex.
pub fn preprocess_vertex_polys(sys: &PolySystem, g: &Graph, origin: u32) -> Result<PolySystem, EncodeError> {
    if origin == 0 || origin as usize > g.n_vertices() {
        return Err(GraphError::VertexOutOfRange {
            vertex: origin,
            n: g.n_vertices(),
        }
        .into());
    }
    let mut keep = vec![false; g.n_vertices() + 1];
    for comp in components(g) {
        let rep = if comp.binary_search(&origin).is_ok() { origin } else { comp[0] };
        keep[rep as usize] = true;
    }
    Ok(sys.retain_indices(|_, tag| match tag {
        SourceTag::Vertex(v) => keep.get(*v as usize).copied().unwrap_or(true),
        _ => true,
    })?)
}

/// Degree-cutter `Σ_{v in clique} x_v^(k-1)`.
///
/// Distinct k-th roots of unity `ζ^a` over a full k-clique give
/// `Σ ζ^(a(k-1)) = 0`, so the cutter vanishes on every proper coloring.
fn clique_cutter(clique: &[u32], n: usize, k: u32, field: FieldSpec) -> Polynomial {
    let terms = clique.iter().map(|&v| (Monomial::var_pow(v as usize - 1, k - 1), 1));
    Polynomial::from_terms(n, field, terms).expect("clique in range")
}

/// `x_u^2 + x_v^2 + x_w^2` for every triangle `{u, v, w}`.
pub fn triangle_cutters(g: &Graph, field: FieldSpec) -> Vec<(SourceTag, Polynomial)> {
    enumerate_triangles(g)
        .into_iter()
        .map(|t| (SourceTag::Cutter(t.to_vec()), clique_cutter(&t, g.n_vertices(), 3, field)))
        .collect()
}

/// `Σ x_v^(k-1)` for every k-clique; for k = 3 these are the triangle cutters.
pub fn clique_cutters(g: &Graph, k: u32, field: FieldSpec) -> Vec<(SourceTag, Polynomial)> {
    if k < 3 {
        return Vec::new();
    }
    enumerate_cliques(g, k as usize)
        .into_iter()
        .map(|c| {
            let p = clique_cutter(&c, g.n_vertices(), k, field);
            (SourceTag::Cutter(c), p)
        })
        .collect()
}

/// All monomials of exactly `degree` in `n_vars` variables.
pub fn alt_g_candidates(n_vars: usize, degree: u32) -> Vec<Monomial> {
    monomials_of_degree(n_vars, degree)
}

/// Encoding with the requested preprocessing (origin = vertex 1 for its
/// component) and cutters appended after the edge polynomials.
pub fn build_coloring_system(g: &Graph, opts: &EncodingOptions) -> Result<PolySystem, EncodeError> {
    let mut sys = encode_coloring(g, opts)?;
    if opts.preprocess {
        sys = preprocess_vertex_polys(&sys, g, 1)?;
    }
    let extra = match opts.cutters {
        Cutters::None => Vec::new(),
        Cutters::Triangles if opts.k != 3 => return Err(EncodeError::TrianglesNeedK3(opts.k)),
        Cutters::Triangles => triangle_cutters(g, opts.field),
        Cutters::Cliques => clique_cutters(g, opts.k, opts.field),
    };
    if !extra.is_empty() {
        sys = sys.extended(extra)?;
    }
    Ok(sys)
}

/// Right-hand sides to try, in order.
pub fn target_candidates(alt: &AltTarget, n_vars: usize, field: FieldSpec) -> Result<Vec<Polynomial>, EncodeError> {
    let one = Polynomial::one(n_vars, field);
    Ok(match alt {
        AltTarget::Off => vec![one],
        AltTarget::Monomial(m) => vec![Polynomial::monomial(n_vars, field, m.clone(), 1)?],
        AltTarget::Auto(deg) => std::iter::once(Ok(one))
            .chain(
                alt_g_candidates(n_vars, *deg)
                    .into_iter()
                    .map(|m| Polynomial::monomial(n_vars, field, m, 1)),
            )
            .collect::<Result<_, _>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{gen_complete, gen_kneser};

    fn strings(sys: &PolySystem) -> Vec<String> {
        sys.iter().map(|(t, p)| format!("{t} {p}")).collect()
    }

    #[test]
    fn k4_over_gf2() {
        let sys = encode_coloring(&gen_complete(4).unwrap(), &EncodingOptions::new(3, FieldSpec::gf2()).unwrap()).unwrap();
        assert_eq!(sys.len(), 10);
        let s = strings(&sys);
        assert_eq!(s[0], "vertex:1 x1^3+1");
        assert_eq!(s[3], "vertex:4 x4^3+1");
        assert_eq!(s[4], "edge:1-2 x1^2+x1*x2+x2^2");
        assert_eq!(s[9], "edge:3-4 x3^2+x3*x4+x4^2");
    }

    #[test]
    fn smallest_instances() {
        let k2 = gen_complete(2).unwrap();
        let sys = encode_coloring(&k2, &EncodingOptions::new(3, FieldSpec::gf2()).unwrap()).unwrap();
        assert_eq!(strings(&sys), ["vertex:1 x1^3+1", "vertex:2 x2^3+1", "edge:1-2 x1^2+x1*x2+x2^2"]);
        let f3 = FieldSpec::new(3).unwrap();
        let sys = encode_coloring(&k2, &EncodingOptions::new(2, f3).unwrap()).unwrap();
        assert_eq!(strings(&sys), ["vertex:1 x1^2+2", "vertex:2 x2^2+2", "edge:1-2 x1+x2"]);
    }

    #[test]
    fn coprimality_is_enforced() {
        assert!(matches!(
            EncodingOptions::new(4, FieldSpec::gf2()),
            Err(EncodeError::NotCoprime { k: 4, p: 2 })
        ));
        assert!(EncodingOptions::new(3, FieldSpec::new(3).unwrap()).is_err());
        assert!(EncodingOptions::new(4, FieldSpec::new(5).unwrap()).is_ok());
    }

    #[test]
    fn preprocessing_keeps_one_vertex_poly_per_component() {
        let opts = EncodingOptions::new(3, FieldSpec::gf2()).unwrap();
        let k4 = gen_complete(4).unwrap();
        let pre = preprocess_vertex_polys(&encode_coloring(&k4, &opts).unwrap(), &k4, 1).unwrap();
        assert_eq!(pre.len(), 7);
        assert_eq!(pre.tags()[0], SourceTag::Vertex(1));
        let k2 = gen_complete(2).unwrap();
        assert_eq!(preprocess_vertex_polys(&encode_coloring(&k2, &opts).unwrap(), &k2, 1).unwrap().len(), 2);
        let two = k2.disjoint_union(&k2);
        let pre = preprocess_vertex_polys(&encode_coloring(&two, &opts).unwrap(), &two, 2).unwrap();
        assert_eq!(pre.len(), 4);
        assert_eq!(&pre.tags()[..2], &[SourceTag::Vertex(2), SourceTag::Vertex(3)]);
        assert!(preprocess_vertex_polys(&encode_coloring(&k2, &opts).unwrap(), &k2, 3).is_err());
    }

    #[test]
    fn cutters() {
        let f2 = FieldSpec::gf2();
        let k3 = gen_complete(3).unwrap();
        let c = triangle_cutters(&k3, f2);
        assert_eq!(c.len(), 1);
        assert_eq!(format!("{} {}", c[0].0, c[0].1), "cutter:1-2-3 x1^2+x2^2+x3^2");
        assert!(triangle_cutters(&gen_kneser(5, 2).unwrap(), f2).is_empty());
        assert_eq!(triangle_cutters(&gen_complete(4).unwrap(), f2).len(), 4);
        assert_eq!(clique_cutters(&gen_complete(4).unwrap(), 3, f2), triangle_cutters(&gen_complete(4).unwrap(), f2));
        let f5 = FieldSpec::new(5).unwrap();
        let c4 = clique_cutters(&gen_complete(5).unwrap(), 4, f5);
        assert_eq!(c4.len(), 5);
        assert_eq!(c4[0].1.to_string(), "x1^3+x2^3+x3^3+x4^3");
    }

    #[test]
    fn clique_cutters_vanish_on_colorings() {
        // GF(5) contains all 4th roots of unity, so 4-colorings of K4 are points over GF(5)
        let f5 = FieldSpec::new(5).unwrap();
        let k4 = gen_complete(4).unwrap();
        let cut = &clique_cutters(&k4, 4, f5)[0].1;
        let sys = encode_coloring(&k4, &EncodingOptions::new(4, f5).unwrap()).unwrap();
        let roots = [1u32, 2, 3, 4];
        let mut checked = 0;
        for a in roots {
            for b in roots {
                for c in roots {
                    for d in roots {
                        let pt = [a, b, c, d];
                        let is_zero = sys.polys().iter().all(|p| p.eval(&pt).unwrap() == 0);
                        let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                        assert_eq!(is_zero, distinct);
                        if is_zero {
                            assert_eq!(cut.eval(&pt).unwrap(), 0);
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(checked, 24);
    }

    #[test]
    fn alt_targets() {
        assert_eq!(alt_g_candidates(12, 3).len(), 364);
        assert_eq!(alt_g_candidates(2, 1), vec![Monomial::var(0), Monomial::var(1)]);
        assert_eq!(alt_g_candidates(3, 2).len(), 6);
        let f2 = FieldSpec::gf2();
        let t = target_candidates(&AltTarget::Auto(3), 4, f2).unwrap();
        assert_eq!(t.len(), 21);
        assert_eq!(t[0].to_string(), "1");
        assert_eq!(t[1].to_string(), "x1^3");
    }

    #[test]
    fn triangles_rejected_for_larger_k() {
        let mut opts = EncodingOptions::new(4, FieldSpec::new(5).unwrap()).unwrap();
        opts.cutters = Cutters::Triangles;
        assert!(matches!(
            build_coloring_system(&gen_complete(4).unwrap(), &opts),
            Err(EncodeError::TrianglesNeedK3(4))
        ));
    }
}
