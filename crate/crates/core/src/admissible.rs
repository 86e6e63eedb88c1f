//! Groups of the form `ℤ^a ⊕ ℚ^b ⊕ (ℚ/ℤ)^c ⊕ (finite)`.
//!
//! Only the operations the coefficient theories need are provided: torsion
//! subgroups, kernels and cokernels of multiplication maps, rationalization
//! and prime-power layer profiles.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::fgab::FgAbGroup;
use crate::wire::WireInt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleGroup {
    z_rank: usize,
    q_rank: usize,
    qz_rank: usize,
    torsion: Vec<BigInt>,
}

impl AdmissibleGroup {
    pub fn new(z_rank: usize, q_rank: usize, qz_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        // reuse the invariant-factor validation
        FgAbGroup::new(0, torsion.clone())?;
        Ok(AdmissibleGroup {
            z_rank,
            q_rank,
            qz_rank,
            torsion,
        })
    }

    pub fn zero() -> Self {
        AdmissibleGroup {
            z_rank: 0,
            q_rank: 0,
            qz_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn rationals(n: usize) -> Self {
        AdmissibleGroup {
            q_rank: n,
            ..Self::zero()
        }
    }

    pub fn circle(n: usize) -> Self {
        AdmissibleGroup {
            qz_rank: n,
            ..Self::zero()
        }
    }

    pub fn z_rank(&self) -> usize {
        self.z_rank
    }

    pub fn q_rank(&self) -> usize {
        self.q_rank
    }

    pub fn qz_rank(&self) -> usize {
        self.qz_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.z_rank == 0 && self.q_rank == 0 && self.qz_rank == 0 && self.torsion.is_empty()
    }

    /// The finitely generated part, if there are no ℚ or ℚ/ℤ summands.
    pub fn to_fg(&self) -> Option<FgAbGroup> {
        (self.q_rank == 0 && self.qz_rank == 0)
            .then(|| FgAbGroup::new(self.z_rank, self.torsion.clone()).expect("validated chain"))
    }

    pub fn direct_sum(&self, other: &AdmissibleGroup) -> AdmissibleGroup {
        let finite = FgAbGroup::new(0, self.torsion.clone())
            .expect("validated chain")
            .direct_sum(&FgAbGroup::new(0, other.torsion.clone()).expect("validated chain"));
        AdmissibleGroup {
            z_rank: self.z_rank + other.z_rank,
            q_rank: self.q_rank + other.q_rank,
            qz_rank: self.qz_rank + other.qz_rank,
            torsion: finite.torsion().to_vec(),
        }
    }

    /// Elements of finite order: the ℚ/ℤ and finite summands.
    pub fn torsion_subgroup(&self) -> AdmissibleGroup {
        AdmissibleGroup {
            z_rank: 0,
            q_rank: 0,
            qz_rank: self.qz_rank,
            torsion: self.torsion.clone(),
        }
    }

    /// Kernel and cokernel of multiplication by `q`. Both are finite.
    pub fn mult_kernel_cokernel(&self, q: &BigInt) -> Result<(FgAbGroup, FgAbGroup)> {
        if *q < BigInt::from(2) {
            return Err(Error::InvalidParameter(format!("multiplier {q} must be at least 2")));
        }
        let gcds: Vec<BigInt> = self.torsion.iter().map(|d| d.gcd(q)).collect();
        let mut ker: Vec<BigInt> = vec![q.clone(); self.qz_rank];
        ker.extend(gcds.iter().cloned());
        let mut coker: Vec<BigInt> = vec![q.clone(); self.z_rank];
        coker.extend(gcds);
        Ok((
            FgAbGroup::from_cyclic_orders(&ker),
            FgAbGroup::from_cyclic_orders(&coker),
        ))
    }

    /// Ranks of the layers `G[pᵉ] / G[pᵉ⁻¹]` for every prime power `pᵉ ≤ bound`.
    pub fn truncated_profile(&self, bound: u64) -> Result<TruncatedProfile> {
        if bound < 2 {
            return Err(Error::InvalidParameter(format!("profile bound {bound} must be at least 2")));
        }
        let mut layers = BTreeMap::new();
        for p in arith::primes_up_to(bound) {
            let vals: Vec<u32> = self.torsion.iter().map(|d| arith::valuation(d, p)).collect();
            let mut pe = p;
            let mut e = 1;
            while pe <= bound {
                let rank = self.qz_rank + vals.iter().filter(|&&v| v >= e).count();
                layers.insert(PrimePower { p, e }, rank as u64);
                e += 1;
                pe = match pe.checked_mul(p) {
                    Some(x) => x,
                    None => break,
                };
            }
        }
        Ok(TruncatedProfile { bound, layers })
    }
}

impl From<&FgAbGroup> for AdmissibleGroup {
    fn from(g: &FgAbGroup) -> Self {
        AdmissibleGroup {
            z_rank: g.rank(),
            q_rank: 0,
            qz_rank: 0,
            torsion: g.torsion().to_vec(),
        }
    }
}

/// `g ⊗ ℚ`: torsion dies, free summands become ℚ.
pub fn rationalize(g: &FgAbGroup) -> AdmissibleGroup {
    AdmissibleGroup::rationals(g.rank())
}

/// Kernel and cokernel of `g → g ⊗ ℚ`: the torsion subgroup and `(ℚ/ℤ)^rank`.
pub fn rationalization_kernel_cokernel(g: &FgAbGroup) -> (AdmissibleGroup, AdmissibleGroup) {
    (
        AdmissibleGroup::from(&g.torsion_subgroup()),
        AdmissibleGroup::circle(g.rank()),
    )
}

pub fn torsion_subgroup(g: &AdmissibleGroup) -> AdmissibleGroup {
    g.torsion_subgroup()
}

pub fn truncated_profile(g: &AdmissibleGroup, bound: u64) -> Result<TruncatedProfile> {
    g.truncated_profile(bound)
}

pub fn mult_kernel_cokernel(g: &AdmissibleGroup, q: &BigInt) -> Result<(FgAbGroup, FgAbGroup)> {
    g.mult_kernel_cokernel(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.e)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

impl Serialize for PrimePower {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Prime-power layer ranks up to a bound: a finite certificate of torsion structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedProfile {
    pub bound: u64,
    pub layers: BTreeMap<PrimePower, u64>,
}

impl TruncatedProfile {
    pub fn layer(&self, p: u64, e: u32) -> u64 {
        self.layers.get(&PrimePower { p, e }).copied().unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.layers.values().all(|&r| r == 0)
    }

    /// Nonzero layers only, for compact display.
    pub fn nonzero(&self) -> Vec<(PrimePower, u64)> {
        self.layers.iter().filter(|(_, &r)| r > 0).map(|(k, &r)| (*k, r)).collect()
    }
}

impl fmt::Display for AdmissibleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let mut push = |name: &str, n: usize| match n {
            0 => {}
            1 => parts.push(name.to_string()),
            n if name.contains('/') => parts.push(format!("({name})^{n}")),
            n => parts.push(format!("{name}^{n}")),
        };
        push("Z", self.z_rank);
        push("Q", self.q_rank);
        push("Q/Z", self.qz_rank);
        let finite = FgAbGroup::new(0, self.torsion.clone()).expect("validated chain");
        if !finite.is_zero() {
            parts.push(finite.to_string());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AdmissibleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdmissibleGroup({self})")
    }
}

#[derive(Serialize)]
struct AdmissibleWire {
    z_rank: usize,
    q_rank: usize,
    qz_rank: usize,
    torsion: Vec<WireInt>,
}

impl Serialize for AdmissibleGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AdmissibleWire {
            z_rank: self.z_rank,
            q_rank: self.q_rank,
            qz_rank: self.qz_rank,
            torsion: self.torsion.iter().cloned().map(WireInt).collect(),
        }
        .serialize(s)
    }
}
