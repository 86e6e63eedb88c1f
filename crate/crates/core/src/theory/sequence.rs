use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::{verify_exact, GroupHom};

/// A periodic long sequence of finitely generated groups, stored as one full
/// turn of maps `N₀ → N₁ → … → N_{k-1} → N₀`.
#[derive(Clone, Debug)]
pub struct LongSequence {
    name: String,
    labels: Vec<String>,
    maps: Vec<GroupHom>,
}

impl LongSequence {
    /// `steps[i]` is the map out of the node labelled `steps[i].0`.
    pub fn cyclic(name: impl Into<String>, steps: Vec<(String, GroupHom)>) -> Result<Self> {
        let name = name.into();
        let k = steps.len();
        for i in 0..k {
            let (a, b) = (&steps[i].1, &steps[(i + 1) % k].1);
            if a.target() != b.source() {
                return Err(Error::DimensionMismatch {
                    position: i + 1,
                    detail: format!(
                        "{name}: {} lands in {} but {} starts at {}",
                        steps[i].0,
                        a.target(),
                        steps[(i + 1) % k].0,
                        b.source()
                    ),
                });
            }
        }
        let (labels, maps) = steps.into_iter().unzip();
        Ok(LongSequence { name, labels, maps })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[GroupHom] {
        &self.maps
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Checks exactness at every node of the turn.
    pub fn verify(&self) -> Result<SequenceReport> {
        let k = self.maps.len();
        if k == 0 {
            return Ok(SequenceReport {
                name: self.name.clone(),
                nodes: Vec::new(),
                exact: true,
            });
        }
        // one extra map makes every node of the turn interior
        let chain: Vec<GroupHom> = self.maps.iter().chain(self.maps.first()).cloned().collect();
        let report = verify_exact(&chain)?;
        let nodes = report
            .nodes
            .into_iter()
            .map(|n| NodeVerdict {
                label: self.labels[n.position % k].clone(),
                group: n.group.to_string(),
                exact: n.exact,
                detail: match (&n.homology, n.image_in_kernel) {
                    (_, false) => Some("composite of adjacent maps is nonzero".into()),
                    (Some(h), true) if !n.exact => Some(format!("homology {h}")),
                    _ => None,
                },
            })
            .collect();
        Ok(SequenceReport {
            name: self.name.clone(),
            nodes,
            exact: report.exact,
        })
    }
}

/// Per-node outcome of a sequence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeVerdict {
    pub label: String,
    pub group: String,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub name: String,
    pub nodes: Vec<NodeVerdict>,
    pub exact: bool,
}

impl SequenceReport {
    pub fn failing(&self) -> impl Iterator<Item = &NodeVerdict> {
        self.nodes.iter().filter(|n| !n.exact)
    }
}
