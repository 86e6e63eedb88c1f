use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgab::{GroupHom, IntMatrix};
use crate::theory::{DegreewiseMap, GradedTheory, TheoryWire};
use crate::wire::{matrix_rows, WireInt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Generic,
    Assembly,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Generic => write!(f, "tau"),
            Role::Assembly => write!(f, "\u{3bc}_A"),
        }
    }
}

/// One algebra's worth of a natural transformation: `τ_n: H_n(A) → H̃_n(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformCase {
    pub algebra: String,
    pub map: DegreewiseMap,
}

/// Per-algebra samples of a natural transformation between two theories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformationSample {
    pub name: String,
    pub role: Role,
    pub cases: Vec<TransformCase>,
}

#[derive(Serialize, Deserialize)]
struct SampleWire {
    name: String,
    role: Role,
    cases: Vec<CaseWire>,
}

#[derive(Serialize, Deserialize)]
struct CaseWire {
    algebra: String,
    source: TheoryWire,
    target: TheoryWire,
    maps: BTreeMap<String, Vec<Vec<WireInt>>>,
}

impl TransformationSample {
    pub fn new(name: impl Into<String>, role: Role, cases: Vec<TransformCase>) -> Self {
        TransformationSample {
            name: name.into(),
            role,
            cases,
        }
    }

    /// Parses and validates a sample; errors name the case, degree and generator.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: SampleWire = serde_json::from_str(text).map_err(|e| Error::Sample(e.to_string()))?;
        let mut cases = Vec::with_capacity(wire.cases.len());
        for c in wire.cases {
            let at = |detail: String| Error::Sample(format!("case {:?}: {detail}", c.algebra));
            let source = GradedTheory::from_wire(c.source).map_err(|e| at(format!("source: {e}")))?;
            let target = GradedTheory::from_wire(c.target).map_err(|e| at(format!("target: {e}")))?;
            let mut homs = Vec::new();
            for n in source.degrees() {
                let rows = c
                    .maps
                    .get(&n.to_string())
                    .ok_or_else(|| at(format!("missing map for degree {n}")))?;
                let (s, t) = (source.group(n), target.group(n));
                let width = rows.first().map_or(s.num_generators(), Vec::len);
                if rows.len() != t.num_generators() || rows.iter().any(|r| r.len() != width) {
                    return Err(at(format!(
                        "degree {n}: matrix must have {} rows of length {}",
                        t.num_generators(),
                        s.num_generators()
                    )));
                }
                let entries = rows.iter().map(|r| r.iter().map(|v| v.0.clone()).collect()).collect();
                let m = IntMatrix::from_big_rows(rows.len(), width, entries);
                let h = GroupHom::new(s.clone(), t.clone(), m).map_err(|e| at(format!("degree {n}: {e}")))?;
                homs.push(h);
            }
            if let Some(extra) = c.maps.keys().find(|k| k.parse::<i64>().map_or(true, |n| !(source.degrees().contains(&n)))) {
                return Err(at(format!("map key {extra:?} is not a degree class")));
            }
            let map = DegreewiseMap::new(source, target, homs).map_err(|e| at(e.to_string()))?;
            cases.push(TransformCase {
                algebra: c.algebra,
                map,
            });
        }
        Ok(TransformationSample {
            name: wire.name,
            role: wire.role,
            cases,
        })
    }

    pub fn to_json(&self) -> String {
        let wire = SampleWire {
            name: self.name.clone(),
            role: self.role,
            cases: self
                .cases
                .iter()
                .map(|c| CaseWire {
                    algebra: c.algebra.clone(),
                    source: c.map.source().to_wire(),
                    target: c.map.target().to_wire(),
                    maps: c
                        .map
                        .homs()
                        .iter()
                        .enumerate()
                        .map(|(n, h)| (n.to_string(), matrix_rows(h.matrix())))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("sample serializes")
    }

    /// Casewise composite `other ∘ self`.
    pub fn then(&self, other: &TransformationSample) -> Result<TransformationSample> {
        if self.cases.len() != other.cases.len() {
            return Err(Error::Sample("composing samples with different case counts".into()));
        }
        let cases = self
            .cases
            .iter()
            .zip(&other.cases)
            .map(|(a, b)| {
                Ok(TransformCase {
                    algebra: a.algebra.clone(),
                    map: a.map.then(&b.map)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TransformationSample::new(
            format!("{} then {}", self.name, other.name),
            self.role,
            cases,
        ))
    }
}
