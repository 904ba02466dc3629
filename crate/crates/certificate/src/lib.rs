//! Nullstellensatz certificates `g = Σ β_i f_i` over GF(p).
//!
//! Verification re-expands the identity with plain polynomial arithmetic and
//! depends on nothing but `nulla-poly`; the solver that produced the
//! certificate is never consulted.

use nulla_poly::{FieldSpec, PolyError, Polynomial, SourceTag};
use thiserror::Error;

mod file;

pub use file::{read_cert, write_cert, FORMAT_VERSION};

#[derive(Debug, Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("unsupported certificate version {0}")]
    Version(u64),
    #[error("{location}: {source}")]
    Poly {
        location: String,
        #[source]
        source: PolyError,
    },
}

/// One summand `β_i * f_i` together with the origin of `f_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertEntry {
    pub tag: SourceTag,
    pub f: Polynomial,
    pub beta: Polynomial,
}

/// How the certificate was found. Informational; verification ignores it
/// apart from the degree bound on the coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub degree: u32,
    pub pruning: String,
    pub symmetry: Option<String>,
    pub graph_fingerprint: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    field: FieldSpec,
    n_vars: usize,
    target: Polynomial,
    entries: Vec<CertEntry>,
    provenance: Provenance,
}

impl Certificate {
    /// Checks the structural invariants: shared field and variable count,
    /// nonzero coefficients `β_i`, and `deg β_i <= provenance.degree`.
    pub fn new(
        field: FieldSpec,
        n_vars: usize,
        target: Polynomial,
        entries: Vec<CertEntry>,
        provenance: Provenance,
    ) -> Result<Self, CertError> {
        let cert = Self {
            field,
            n_vars,
            target,
            entries,
            provenance,
        };
        cert.check_shape()?;
        Ok(cert)
    }

    fn check_shape(&self) -> Result<(), CertError> {
        let same = |p: &Polynomial| p.field() == self.field && p.n_vars() == self.n_vars;
        if !same(&self.target) {
            return Err(CertError::Malformed("target does not match field/variable count".into()));
        }
        for (i, e) in self.entries.iter().enumerate() {
            if !same(&e.f) || !same(&e.beta) {
                return Err(CertError::Malformed(format!(
                    "entry {i} ({}) does not match field/variable count",
                    e.tag
                )));
            }
            if e.beta.is_zero() {
                return Err(CertError::Malformed(format!("entry {i} ({}) has a zero coefficient", e.tag)));
            }
            if e.beta.degree() > self.provenance.degree as i64 {
                return Err(CertError::Malformed(format!(
                    "entry {i} ({}) has degree {} above the stated degree {}",
                    e.tag,
                    e.beta.degree(),
                    self.provenance.degree
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn target(&self) -> &Polynomial {
        &self.target
    }

    pub fn entries(&self) -> &[CertEntry] {
        &self.entries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Largest coefficient degree, `-1` for an empty certificate.
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|e| e.beta.degree()).max().unwrap_or(-1)
    }

    /// `Σ β_i f_i` expanded exactly.
    pub fn expand(&self) -> Result<Polynomial, CertError> {
        let mut sum = Polynomial::zero(self.n_vars, self.field);
        for (i, e) in self.entries.iter().enumerate() {
            sum.add_product(&e.beta, &e.f).map_err(|source| CertError::Poly {
                location: format!("entries[{i}]"),
                source,
            })?;
        }
        Ok(sum)
    }

    /// Replaces the coefficient of entry `index`; used to build tampered fixtures.
    pub fn with_beta(&self, index: usize, beta: Polynomial) -> Result<Self, CertError> {
        let mut entries = self.entries.clone();
        let entry = entries
            .get_mut(index)
            .ok_or_else(|| CertError::Malformed(format!("no entry {index}")))?;
        entry.beta = beta;
        Self::new(self.field, self.n_vars, self.target.clone(), entries, self.provenance.clone())
    }
}

/// True iff `Σ β_i f_i` equals the target term for term.
///
/// Structural problems are errors, never `false`.
pub fn verify(cert: &Certificate) -> Result<bool, CertError> {
    cert.check_shape()?;
    Ok(cert.expand()? == cert.target)
}
