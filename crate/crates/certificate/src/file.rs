//! Versioned JSON certificate files.
//!
//! ```json
//! {"version": 1, "field_p": 2, "n_vars": 4, "target": "1",
//!  "entries": [{"tag": "vertex:1", "f": "x1^3+1", "beta": "1"}],
//!  "provenance": {"degree": 1, "pruning": "graded(3)", "symmetry": null, "graph_fingerprint": null}}
//! ```

use nulla_poly::{FieldSpec, Polynomial, SourceTag};
use serde::{Deserialize, Serialize};

use crate::{CertEntry, CertError, Certificate, Provenance};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertFile {
    version: u64,
    field_p: u32,
    n_vars: usize,
    target: String,
    entries: Vec<EntryFile>,
    provenance: ProvenanceFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    tag: String,
    f: String,
    beta: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceFile {
    degree: u32,
    pruning: String,
    symmetry: Option<String>,
    graph_fingerprint: Option<String>,
}

pub fn write_cert(cert: &Certificate) -> String {
    let file = CertFile {
        version: FORMAT_VERSION,
        field_p: cert.field().p(),
        n_vars: cert.n_vars(),
        target: cert.target().to_string(),
        entries: cert
            .entries()
            .iter()
            .map(|e| EntryFile {
                tag: e.tag.to_string(),
                f: e.f.to_string(),
                beta: e.beta.to_string(),
            })
            .collect(),
        provenance: ProvenanceFile {
            degree: cert.provenance().degree,
            pruning: cert.provenance().pruning.clone(),
            symmetry: cert.provenance().symmetry.clone(),
            graph_fingerprint: cert.provenance().graph_fingerprint.clone(),
        },
    };
    let mut text = serde_json::to_string_pretty(&file).expect("certificate serializes");
    text.push('\n');
    text
}

pub fn read_cert(text: &str) -> Result<Certificate, CertError> {
    let file: CertFile = serde_json::from_str(text).map_err(|e| CertError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    if file.version != FORMAT_VERSION {
        return Err(CertError::Version(file.version));
    }
    let field = FieldSpec::new(file.field_p).map_err(|source| CertError::Poly {
        location: "field_p".into(),
        source,
    })?;
    let n = file.n_vars;
    let parse = |s: &str, location: String| {
        Polynomial::parse(s, n, field).map_err(|source| CertError::Poly { location, source })
    };
    let target = parse(&file.target, "target".into())?;
    let entries = file
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let tag: SourceTag = e.tag.parse().map_err(|source| CertError::Poly {
                location: format!("entries[{i}].tag"),
                source,
            })?;
            Ok(CertEntry {
                tag,
                f: parse(&e.f, format!("entries[{i}].f"))?,
                beta: parse(&e.beta, format!("entries[{i}].beta"))?,
            })
        })
        .collect::<Result<Vec<_>, CertError>>()?;
    let provenance = Provenance {
        degree: file.provenance.degree,
        pruning: file.provenance.pruning,
        symmetry: file.provenance.symmetry,
        graph_fingerprint: file.provenance.graph_fingerprint,
    };
    Certificate::new(field, n, target, entries, provenance)
}
