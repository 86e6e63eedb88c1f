use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{smith_normal_form, IntMatrix};
use crate::arith;
use crate::error::{Error, Result};

/// A finitely generated abelian group `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `dᵢ ≥ 2` and `dᵢ | dᵢ₊₁`.
///
/// Canonical generators are ordered free first, then torsion in chain order.
/// Structural equality is isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

/// Wire form of a group: `{"rank": n, "torsion": [d, ...]}`.
///
/// Torsion orders are JSON integers, or decimal strings when they do not fit in 64 bits.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<crate::wire::WireInt>,
}

impl TryFrom<GroupSpec> for FgAbGroup {
    type Error = Error;

    fn try_from(spec: GroupSpec) -> Result<Self> {
        FgAbGroup::new(spec.rank, spec.torsion.into_iter().map(|w| w.0).collect())
    }
}

impl From<FgAbGroup> for GroupSpec {
    fn from(g: FgAbGroup) -> Self {
        GroupSpec {
            rank: g.rank,
            torsion: g.torsion.into_iter().map(crate::wire::WireInt).collect(),
        }
    }
}

impl FgAbGroup {
    /// Validates an invariant-factor description.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (i, d) in torsion.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidGroup(format!(
                    "invariant factor {d} at position {i} is below 2"
                )));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(Error::InvalidGroup(format!(
                    "invariant factor {} does not divide {d}",
                    torsion[i - 1]
                )));
            }
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn zero() -> Self {
        FgAbGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `ℤ/n`; `n = 0` gives `ℤ`, `n = ±1` the zero group.
    pub fn cyclic<N: Into<BigInt>>(n: N) -> Self {
        Self::from_cyclic_orders(&[n.into()])
    }

    /// Normal form of `⊕ ℤ/nᵢ` for arbitrary orders (0 meaning ℤ).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let k = orders.len();
        let rel = IntMatrix::diagonal(k, k, orders.iter().map(|n| n.abs()));
        Presentation::new(k, rel).canonicalize().group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of each canonical generator: 0 for free generators.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        std::iter::repeat(BigInt::zero())
            .take(self.rank)
            .chain(self.torsion.iter().cloned())
            .collect()
    }

    /// Relation lattice of the canonical presentation, one column per generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.num_generators();
        IntMatrix::diagonal(n, n, self.generator_orders())
    }

    /// Only the nonzero relation columns (one per torsion generator).
    pub fn torsion_relations(&self) -> IntMatrix {
        let n = self.num_generators();
        let mut m = IntMatrix::zeros(n, self.torsion.len());
        for (j, d) in self.torsion.iter().enumerate() {
            m.set(self.rank + j, j, d.clone());
        }
        m
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Least `N > 0` with `N·G = 0`; `None` for infinite groups.
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_exponent())
    }

    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn torsion_subgroup(&self) -> FgAbGroup {
        FgAbGroup {
            rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let orders: Vec<BigInt> = self
            .generator_orders()
            .into_iter()
            .chain(other.generator_orders())
            .collect();
        Self::from_cyclic_orders(&orders)
    }

    /// Multiplicities of the p-primary cyclic summands as a partition, largest first.
    pub fn p_type(&self, p: u64) -> Vec<u32> {
        let mut parts: Vec<u32> = self
            .torsion
            .iter()
            .map(|d| arith::valuation(d, p))
            .filter(|&e| e > 0)
            .collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    /// Reduces torsion coordinates of an element into `[0, d)`.
    pub fn reduce(&self, v: &mut [BigInt]) {
        assert_eq!(v.len(), self.num_generators(), "element length mismatch");
        for (j, d) in self.torsion.iter().enumerate() {
            let x = &mut v[self.rank + j];
            *x = x.mod_floor(d);
        }
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.num_generators(), "element length mismatch");
        v[..self.rank].iter().all(Zero::is_zero)
            && self
                .torsion
                .iter()
                .zip(&v[self.rank..])
                .all(|(d, x)| x.is_multiple_of(d))
    }

    /// Reduces the torsion rows of a matrix whose rows are coordinates in this group.
    pub fn reduce_rows(&self, m: &mut IntMatrix) {
        assert_eq!(m.rows(), self.num_generators(), "row count mismatch");
        for (j, d) in self.torsion.iter().enumerate() {
            m.reduce_row_mod(self.rank + j, d);
        }
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self})")
    }
}

/// `ℤ^generators / span(relations)`, relations stored as columns.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: usize,
    pub relations: IntMatrix,
}

/// A presentation brought to normal form together with its coordinate changes.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub group: FgAbGroup,
    /// Old coordinates → canonical coordinates (`k × m`), torsion rows reduced.
    pub to_canon: IntMatrix,
    /// Canonical generators written in old coordinates (`m × k`).
    pub from_canon: IntMatrix,
}

impl Presentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation column length mismatch");
        Presentation {
            generators,
            relations,
        }
    }

    pub fn canonicalize(&self) -> Canonical {
        let snf = smith_normal_form(&self.relations);
        let m = self.generators;
        let free: Vec<usize> = (snf.rank..m).collect();
        let mut torsion_idx = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..snf.rank {
            let d = snf.d.get(i, i);
            if !d.is_one() {
                torsion_idx.push(i);
                torsion.push(d.clone());
            }
        }
        let order: Vec<usize> = free.iter().chain(&torsion_idx).copied().collect();
        let group = FgAbGroup {
            rank: free.len(),
            torsion,
        };
        let mut to_canon = snf.u.select_rows(&order);
        group.reduce_rows(&mut to_canon);
        let from_canon = snf.u_inv.select_cols(&order);
        Canonical {
            group,
            to_canon,
            from_canon,
        }
    }
}

/// Cokernel of a relation matrix given with one row per relation and one column per generator.
pub fn group_from_presentation(relations: &IntMatrix) -> FgAbGroup {
    Presentation::new(relations.cols(), relations.transpose())
        .canonicalize()
        .group
}
