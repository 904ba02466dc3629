use std::cmp::Ordering;

/// A monomial stored as sorted `(variable, exponent)` pairs with nonzero exponents.
///
/// The variable count lives on the owning [`Polynomial`](crate::Polynomial);
/// a bare monomial only guarantees sorted, zero-free storage.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(u32, u32)>,
}

/// Keep only monomials whose total degree is congruent to `residue` mod `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeFilter {
    pub modulus: u32,
    pub residue: u32,
}

impl DegreeFilter {
    pub fn accepts(self, degree: u32) -> bool {
        degree % self.modulus == self.residue % self.modulus
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self { exps: Vec::new() }
    }

    pub fn var(v: usize) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        Self {
            exps: vec![(v as u32, e)],
        }
    }

    /// Builds from a dense exponent vector; index `i` is variable `i`.
    pub fn from_dense(exps: &[u32]) -> Self {
        Self {
            exps: exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (v as u32, e))
                .collect(),
        }
    }

    /// Builds from arbitrary `(variable, exponent)` pairs; repeated variables add up.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Self {
        let mut exps: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .map(|(v, e)| (v as u32, e))
            .collect();
        exps.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Self { exps: merged }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.exps
            .binary_search_by_key(&(v as u32), |&(var, _)| var)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    /// Largest variable index present, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.exps.last().map(|&(v, _)| v as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn to_dense(&self, n_vars: usize) -> Vec<u32> {
        let mut dense = vec![0; n_vars];
        for &(v, e) in &self.exps {
            dense[v as usize] = e;
        }
        dense
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    /// Renames variable `v` to `perm[v]`.
    pub fn permute(&self, perm: &[u32]) -> Monomial {
        let mut exps: Vec<(u32, u32)> = self.exps.iter().map(|&(v, e)| (perm[v as usize], e)).collect();
        exps.sort_unstable_by_key(|&(v, _)| v);
        Monomial { exps }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: lower total degree first; within a degree the
    /// monomial with the larger exponent on the first differing variable
    /// comes first, so `x1^3 < x1^2*x2 < x1*x2^2 < x2^3`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps) {
                if a.0 != b.0 {
                    return a.0.cmp(&b.0);
                }
                if a.1 != b.1 {
                    return b.1.cmp(&a.1);
                }
            }
            self.exps.len().cmp(&other.exps.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of exactly `degree` in `n_vars` variables, in graded order.
pub fn monomials_of_degree(n_vars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fill_degree(n_vars, 0, degree, &mut prefix, &mut out);
    out
}

fn fill_degree(
    n_vars: usize,
    start: usize,
    remaining: u32,
    prefix: &mut Vec<(u32, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(Monomial { exps: prefix.clone() });
        return;
    }
    for v in start..n_vars {
        for e in (1..=remaining).rev() {
            prefix.push((v as u32, e));
            fill_degree(n_vars, v + 1, remaining - e, prefix, out);
            prefix.pop();
        }
    }
}

/// All monomials of total degree `<= d`, sorted in graded order, optionally
/// restricted to one degree class.
pub fn monomials_up_to(n_vars: usize, d: u32, filter: Option<DegreeFilter>) -> Vec<Monomial> {
    (0..=d)
        .filter(|&t| filter.is_none_or(|f| f.accepts(t)))
        .flat_map(|t| monomials_of_degree(n_vars, t))
        .collect()
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
