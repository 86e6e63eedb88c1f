use serde::Serialize;

use super::lattice::Lattice;
use super::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};

/// Exactness verdict at one interior node `A →f B →g C`.
#[derive(Clone, Debug, Serialize)]
pub struct NodeExactness {
    /// Position of `B` in the chain (the target of map `position - 1`).
    pub position: usize,
    pub group: FgAbGroup,
    /// `g ∘ f = 0`.
    pub image_in_kernel: bool,
    /// Every element of `ker g` lies in `im f`.
    pub kernel_in_image: bool,
    /// `ker g / im f` when `g ∘ f = 0`.
    pub homology: Option<FgAbGroup>,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub nodes: Vec<NodeExactness>,
    pub exact: bool,
}

impl ExactnessReport {
    pub fn failing_positions(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| !n.exact).map(|n| n.position).collect()
    }
}

/// Checks exactness of `G₀ →f₁ G₁ →f₂ … → Gₖ` at every interior node.
///
/// Membership questions are answered on lifts to free groups: `im f` lifts to
/// `span(f, rel(B))` and `ker g` to the integer solutions of `g·x ∈ rel(C)`.
pub fn verify_exact(maps: &[GroupHom]) -> Result<ExactnessReport> {
    for (i, w) in maps.windows(2).enumerate() {
        if w[0].target() != w[1].source() {
            return Err(Error::DimensionMismatch {
                position: i + 1,
                detail: format!("target {} vs source {}", w[0].target(), w[1].source()),
            });
        }
    }
    let nodes: Vec<NodeExactness> = maps
        .windows(2)
        .enumerate()
        .map(|(i, w)| node_exactness(i + 1, &w[0], &w[1]))
        .collect();
    let exact = nodes.iter().all(|n| n.exact);
    Ok(ExactnessReport { nodes, exact })
}

fn node_exactness(position: usize, f: &GroupHom, g: &GroupHom) -> NodeExactness {
    let b = f.target().clone();
    let rel = b.torsion_relations();
    let image_in_kernel = f.then(g).map(|c| c.is_zero()).unwrap_or(false);
    let image = Lattice::span(&f.matrix().hcat(&rel));
    let kernel_gens = g.kernel_lift().hcat(&rel);
    let kernel_in_image = image.contains_all(&kernel_gens);
    let homology = if image_in_kernel {
        Lattice::span(&kernel_gens)
            .quotient(&f.matrix().hcat(&rel))
            .map(|q| q.canonical.group)
    } else {
        None
    };
    NodeExactness {
        position,
        group: b,
        image_in_kernel,
        kernel_in_image,
        homology,
        exact: image_in_kernel && kernel_in_image,
    }
}
