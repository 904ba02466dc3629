use std::collections::BTreeMap;

use crate::{FieldSpec, Monomial, PolyError, Result};

/// A polynomial over GF(p) in a fixed number of variables.
///
/// Terms are kept in a sorted map from monomial to a nonzero residue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n_vars: usize,
    field: FieldSpec,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(n_vars: usize, field: FieldSpec) -> Self {
        Self {
            n_vars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, field: FieldSpec, c: i64) -> Self {
        Self::monomial(n_vars, field, Monomial::one(), c).expect("constant has no variables")
    }

    pub fn one(n_vars: usize, field: FieldSpec) -> Self {
        Self::constant(n_vars, field, 1)
    }

    /// `c * m`, validated against `n_vars`.
    pub fn monomial(n_vars: usize, field: FieldSpec, m: Monomial, c: i64) -> Result<Self> {
        Self::from_terms(n_vars, field, [(m, c)])
    }

    /// Collects like terms; coefficients are reduced mod p and zeros dropped.
    pub fn from_terms<I>(n_vars: usize, field: FieldSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut poly = Self::zero(n_vars, field);
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                if v >= n_vars {
                    return Err(PolyError::VariableOutOfRange { var: v + 1, n_vars });
                }
            }
            poly.add_term(m, field.reduce(c));
        }
        Ok(poly)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree, `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .next_back()
            .map_or(-1, |m| m.degree() as i64)
    }

    /// Terms in ascending graded order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// The single residue class mod `k` shared by all term degrees, if any.
    /// The zero polynomial is compatible with every class and reports `Some(0)`.
    pub fn degree_class(&self, k: u32) -> Option<u32> {
        let mut classes = self.terms.keys().map(|m| m.degree() % k);
        let first = classes.next().unwrap_or(0);
        classes.all(|c| c == first).then_some(first)
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let field = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.n_vars != other.n_vars {
            return Err(PolyError::VarCountMismatch(self.n_vars, other.n_vars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let c = c % self.field.p();
        let mut out = Self::zero(self.n_vars, self.field);
        if c != 0 {
            for (m, &v) in &self.terms {
                out.terms.insert(m.clone(), self.field.mul(v, c));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let terms = self.terms.iter().map(|(t, &c)| (t.mul(m), c)).collect();
        Polynomial {
            n_vars: self.n_vars,
            field: self.field,
            terms,
        }
    }

    /// Distributive product with like-term collection.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n_vars, self.field);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.mul(b), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// `self += a * b` without materializing the product.
    pub fn add_product(&mut self, a: &Polynomial, b: &Polynomial) -> Result<()> {
        self.check_compatible(a)?;
        self.check_compatible(b)?;
        for (ma, &ca) in &a.terms {
            for (mb, &cb) in &b.terms {
                self.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        Ok(())
    }

    pub fn eval(&self, point: &[u32]) -> Result<u32> {
        if point.len() != self.n_vars {
            return Err(PolyError::PointLength {
                expected: self.n_vars,
                got: point.len(),
            });
        }
        let f = self.field;
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut term = c;
            for (v, e) in m.iter() {
                term = f.mul(term, f.pow(point[v] % f.p(), e as u64));
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    /// Renames variable `v` to `perm[v]` (0-based image table of length `n_vars`).
    pub fn permute_vars(&self, perm: &[u32]) -> Polynomial {
        let terms = self.terms.iter().map(|(m, &c)| (m.permute(perm), c)).collect();
        Polynomial {
            n_vars: self.n_vars,
            field: self.field,
            terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn parse(s: &str, n: usize, p: u32) -> Polynomial {
        Polynomial::parse(s, n, gf(p)).unwrap()
    }

    #[test]
    fn char_two_telescoping() {
        let a = parse("x1+x2", 2, 2);
        let b = parse("x1^2+x1*x2+x2^2", 2, 2);
        assert_eq!(a.mul(&b).unwrap(), parse("x1^3+x2^3", 2, 2));
        let one = Polynomial::one(2, gf(2));
        assert_eq!(one.mul(&b).unwrap(), b);
        let x = parse("x1", 1, 3);
        assert_eq!(x.mul(&x).unwrap(), parse("x1^2", 1, 3));
    }

    #[test]
    fn add_and_eval() {
        let a = parse("x1+1", 1, 2);
        assert!(a.add(&a).unwrap().is_zero());
        assert_eq!(parse("x1^2+x1*x2+x2^2", 2, 2).eval(&[1, 1]).unwrap(), 1);
        assert_eq!(parse("x1^3+1", 1, 2).eval(&[1]).unwrap(), 0);
    }

    #[test]
    fn degree_conventions() {
        assert_eq!(Polynomial::zero(3, gf(2)).degree(), -1);
        assert_eq!(Polynomial::one(3, gf(2)).degree(), 0);
        assert_eq!(parse("x1^3+1", 2, 2).degree(), 3);
        assert_eq!(parse("x1^3+1", 2, 2).degree_class(3), Some(0));
        assert_eq!(parse("x1^2+x2", 2, 2).degree_class(3), None);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = Polynomial::one(2, gf(2));
        let b = Polynomial::one(3, gf(2));
        let c = Polynomial::one(2, gf(3));
        assert_eq!(a.mul(&b), Err(PolyError::VarCountMismatch(2, 3)));
        assert_eq!(a.add(&c), Err(PolyError::FieldMismatch(2, 3)));
        assert!(matches!(a.eval(&[1]), Err(PolyError::PointLength { .. })));
        assert!(matches!(
            Polynomial::monomial(2, gf(2), Monomial::var(2), 1),
            Err(PolyError::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn negative_coefficients_reduce() {
        let p = Polynomial::from_terms(1, gf(3), [(Monomial::var_pow(0, 2), 1), (Monomial::one(), -1)]).unwrap();
        assert_eq!(p.coeff(&Monomial::one()), 2);
        assert_eq!(p.to_string(), "x1^2+2");
    }
}
