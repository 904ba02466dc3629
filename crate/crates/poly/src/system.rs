use std::fmt;
use std::str::FromStr;

use crate::{FieldSpec, PolyError, Polynomial, Result};

/// Where a polynomial of a system came from.
///
/// Text forms: `vertex:i`, `edge:u-v`, `cutter:u-v-w`, `user:k` (vertices 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SourceTag {
    Vertex(u32),
    Edge(u32, u32),
    Cutter(Vec<u32>),
    User(usize),
}

impl fmt::Display for SourceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceTag::Vertex(v) => write!(f, "vertex:{v}"),
            SourceTag::Edge(u, v) => write!(f, "edge:{u}-{v}"),
            SourceTag::Cutter(vs) => {
                write!(f, "cutter:")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "-")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            SourceTag::User(k) => write!(f, "user:{k}"),
        }
    }
}

impl FromStr for SourceTag {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || PolyError::BadTag(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums = || -> Result<Vec<u32>> {
            rest.split('-')
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        match kind.trim() {
            "vertex" => match nums()?.as_slice() {
                [v] => Ok(SourceTag::Vertex(*v)),
                _ => Err(bad()),
            },
            "edge" => match nums()?.as_slice() {
                [u, v] => Ok(SourceTag::Edge(*u, *v)),
                _ => Err(bad()),
            },
            "cutter" => {
                let vs = nums()?;
                if vs.len() < 2 {
                    return Err(bad());
                }
                Ok(SourceTag::Cutter(vs))
            }
            "user" => rest.trim().parse().map(SourceTag::User).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// An ordered, nonempty list of polynomials sharing a variable count and field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    n_vars: usize,
    field: FieldSpec,
    polys: Vec<Polynomial>,
    tags: Vec<SourceTag>,
}

impl PolySystem {
    /// Tags default to `user:0`, `user:1`, ...
    pub fn new(n_vars: usize, field: FieldSpec, polys: Vec<Polynomial>) -> Result<Self> {
        let tags = (0..polys.len()).map(SourceTag::User).collect();
        Self::with_tags(n_vars, field, polys, tags)
    }

    pub fn with_tags(
        n_vars: usize,
        field: FieldSpec,
        polys: Vec<Polynomial>,
        tags: Vec<SourceTag>,
    ) -> Result<Self> {
        if polys.is_empty() {
            return Err(PolyError::EmptySystem);
        }
        if polys.len() != tags.len() {
            return Err(PolyError::TagCount {
                polys: polys.len(),
                tags: tags.len(),
            });
        }
        for p in &polys {
            if p.field() != field {
                return Err(PolyError::FieldMismatch(field.p(), p.field().p()));
            }
            if p.n_vars() != n_vars {
                return Err(PolyError::VarCountMismatch(n_vars, p.n_vars()));
            }
        }
        Ok(Self {
            n_vars,
            field,
            polys,
            tags,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn tags(&self) -> &[SourceTag] {
        &self.tags
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SourceTag, &Polynomial)> + '_ {
        self.tags.iter().zip(&self.polys)
    }

    /// Maximum degree over all polynomials (`-1` only if every member is zero).
    pub fn max_degree(&self) -> i64 {
        self.polys.iter().map(Polynomial::degree).max().unwrap_or(-1)
    }

    /// Sum of term counts over all polynomials.
    pub fn total_terms(&self) -> usize {
        self.polys.iter().map(Polynomial::n_terms).sum()
    }

    /// Degree class mod `k` of every polynomial, or the index of the first
    /// polynomial whose terms straddle classes.
    pub fn degree_classes(&self, k: u32) -> std::result::Result<Vec<u32>, usize> {
        self.polys
            .iter()
            .enumerate()
            .map(|(i, p)| p.degree_class(k).ok_or(i))
            .collect()
    }

    /// Keeps the polynomials whose index satisfies `keep`.
    pub fn retain_indices(&self, mut keep: impl FnMut(usize, &SourceTag) -> bool) -> Result<Self> {
        let (polys, tags) = self
            .iter()
            .enumerate()
            .filter(|(i, (t, _))| keep(*i, t))
            .map(|(_, (t, p))| (p.clone(), t.clone()))
            .unzip();
        Self::with_tags(self.n_vars, self.field, polys, tags)
    }

    /// Appends polynomials with their tags.
    pub fn extended(&self, extra: impl IntoIterator<Item = (SourceTag, Polynomial)>) -> Result<Self> {
        let mut polys = self.polys.clone();
        let mut tags = self.tags.clone();
        for (t, p) in extra {
            tags.push(t);
            polys.push(p);
        }
        Self::with_tags(self.n_vars, self.field, polys, tags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for t in [
            SourceTag::Vertex(3),
            SourceTag::Edge(1, 12),
            SourceTag::Cutter(vec![2, 5, 6]),
            SourceTag::User(0),
        ] {
            assert_eq!(t.to_string().parse::<SourceTag>().unwrap(), t);
        }
        assert_eq!("edge:1-2".parse::<SourceTag>().unwrap(), SourceTag::Edge(1, 2));
        for bad in ["edge:1", "vertex", "node:1", "vertex:x", "cutter:4"] {
            assert!(bad.parse::<SourceTag>().is_err(), "{bad}");
        }
    }

    #[test]
    fn system_validation() {
        let f2 = FieldSpec::gf2();
        assert_eq!(PolySystem::new(2, f2, vec![]), Err(PolyError::EmptySystem));
        let p = Polynomial::one(3, f2);
        assert!(matches!(
            PolySystem::new(2, f2, vec![p]),
            Err(PolyError::VarCountMismatch(2, 3))
        ));
        let sys = PolySystem::new(
            2,
            f2,
            vec![
                Polynomial::parse("x1^3+1", 2, f2).unwrap(),
                Polynomial::parse("x1^2+x1*x2+x2^2", 2, f2).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(sys.max_degree(), 3);
        assert_eq!(sys.total_terms(), 5);
        assert_eq!(sys.degree_classes(3), Ok(vec![0, 2]));
        assert_eq!(sys.tags()[1], SourceTag::User(1));
    }
}
