use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupHom};

/// Bott period of a theory: 2 in the complex case, 8 in the real case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Period {
    Complex,
    Real,
}

impl Period {
    pub fn len(self) -> usize {
        match self {
            Period::Complex => 2,
            Period::Real => 8,
        }
    }

    pub fn residue(self, n: i64) -> usize {
        n.rem_euclid(self.len() as i64) as usize
    }
}

impl TryFrom<u8> for Period {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            2 => Ok(Period::Complex),
            8 => Ok(Period::Real),
            other => Err(Error::InvalidTheory(format!("period must be 2 or 8, got {other}"))),
        }
    }
}

impl From<Period> for u8 {
    fn from(p: Period) -> u8 {
        p.len() as u8
    }
}

/// Periodic graded group data: the values `H_n(A)` of a homology theory on one algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedTheory {
    name: String,
    period: Period,
    groups: Vec<FgAbGroup>,
    equivariance: Option<String>,
}

impl GradedTheory {
    pub fn new(name: impl Into<String>, period: Period, groups: Vec<FgAbGroup>) -> Result<Self> {
        let name = name.into();
        if groups.len() != period.len() {
            return Err(Error::InvalidTheory(format!(
                "{name}: expected {} degree classes, got {}",
                period.len(),
                groups.len()
            )));
        }
        Ok(GradedTheory {
            name,
            period,
            groups,
            equivariance: None,
        })
    }

    /// Complex-periodic theory with the given even and odd groups.
    pub fn complex(name: impl Into<String>, even: FgAbGroup, odd: FgAbGroup) -> Self {
        Self::new(name, Period::Complex, vec![even, odd]).expect("two degree classes")
    }

    pub fn zero(period: Period) -> Self {
        Self::new("zero", period, vec![FgAbGroup::zero(); period.len()]).expect("full period")
    }

    pub fn point() -> Self {
        Self::complex("point", FgAbGroup::free(1), FgAbGroup::zero())
    }

    pub fn suspension_of_point() -> Self {
        Self::complex("suspension", FgAbGroup::zero(), FgAbGroup::free(1))
    }

    /// `O_{n+1}`: `K₀ = ℤ/n`, `K₁ = 0`.
    pub fn cuntz(generators: u64) -> Result<Self> {
        if generators < 2 {
            return Err(Error::InvalidParameter(format!(
                "Cuntz algebra needs at least 2 generators, got {generators}"
            )));
        }
        Ok(Self::complex(
            format!("cuntz:{generators}"),
            FgAbGroup::cyclic(BigInt::from(generators - 1)),
            FgAbGroup::zero(),
        ))
    }

    pub fn with_equivariance(mut self, label: Option<String>) -> Self {
        self.equivariance = label;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn equivariance(&self) -> Option<&str> {
        self.equivariance.as_deref()
    }

    /// Value in degree `n`, for any integer `n`.
    pub fn group(&self, n: i64) -> &FgAbGroup {
        &self.groups[self.period.residue(n)]
    }

    pub fn groups(&self) -> &[FgAbGroup] {
        &self.groups
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        0..self.period.len() as i64
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_zero)
    }

    /// The theory `n ↦ H_{n+k}`.
    pub fn shifted(&self, k: i64) -> Self {
        let groups = self.degrees().map(|n| self.group(n + k).clone()).collect();
        GradedTheory {
            name: format!("S^{k}({})", self.name),
            period: self.period,
            groups,
            equivariance: self.equivariance.clone(),
        }
    }

    /// `H_n(SA) = H_{n+1}(A)`.
    pub fn suspension(&self) -> Self {
        self.shifted(1).renamed(format!("S({})", self.name))
    }

    /// Same groups up to name and label.
    pub fn same_groups(&self, other: &GradedTheory) -> bool {
        self.period == other.period && self.groups == other.groups
    }

    pub fn to_wire(&self) -> TheoryWire {
        TheoryWire {
            name: self.name.clone(),
            period: self.period,
            groups: self
                .groups
                .iter()
                .enumerate()
                .map(|(i, g)| (i.to_string(), g.clone()))
                .collect(),
            provenance: None,
            equivariance: self.equivariance.clone(),
        }
    }

    pub fn from_wire(w: TheoryWire) -> Result<Self> {
        let mut groups = Vec::with_capacity(w.period.len());
        for n in 0..w.period.len() {
            let g = w.groups.get(&n.to_string()).ok_or_else(|| {
                Error::InvalidTheory(format!("{}: missing degree class {n}", w.name))
            })?;
            groups.push(g.clone());
        }
        if let Some(extra) = w.groups.keys().find(|k| {
            k.parse::<usize>().map_or(true, |n| n >= w.period.len() || k.as_str() != n.to_string())
        }) {
            return Err(Error::InvalidTheory(format!(
                "{}: degree key {extra:?} is not a residue class mod {}",
                w.name,
                w.period.len()
            )));
        }
        Ok(Self::new(w.name, w.period, groups)?.with_equivariance(w.equivariance))
    }
}

impl fmt::Display for GradedTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.name)?;
        for (n, g) in self.groups.iter().enumerate() {
            write!(f, " H{n}={g}")?;
        }
        if let Some(l) = &self.equivariance {
            write!(f, " [G={l}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GradedTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedTheory({self})")
    }
}

/// JSON form shared by catalog files and transformation samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoryWire {
    pub name: String,
    pub period: Period,
    pub groups: BTreeMap<String, FgAbGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default)]
    pub equivariance: Option<String>,
}

/// A family of homomorphisms `H_n(A) → H̃_n(A)`, one per degree class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreewiseMap {
    source: GradedTheory,
    target: GradedTheory,
    homs: Vec<GroupHom>,
}

impl DegreewiseMap {
    pub fn new(source: GradedTheory, target: GradedTheory, homs: Vec<GroupHom>) -> Result<Self> {
        if source.period != target.period {
            return Err(Error::InvalidTheory(format!(
                "period mismatch between {} and {}",
                source.name, target.name
            )));
        }
        if homs.len() != source.period.len() {
            return Err(Error::InvalidTheory(format!(
                "expected {} degreewise maps, got {}",
                source.period.len(),
                homs.len()
            )));
        }
        for (n, h) in homs.iter().enumerate() {
            if h.source() != source.group(n as i64) || h.target() != target.group(n as i64) {
                return Err(Error::InvalidTheory(format!(
                    "degree {n}: map {} -> {} does not match {} -> {}",
                    h.source(),
                    h.target(),
                    source.group(n as i64),
                    target.group(n as i64)
                )));
            }
        }
        Ok(DegreewiseMap {
            source,
            target,
            homs,
        })
    }

    pub fn identity(t: &GradedTheory) -> Self {
        let homs = t.groups.iter().map(GroupHom::identity).collect();
        DegreewiseMap {
            source: t.clone(),
            target: t.clone(),
            homs,
        }
    }

    pub fn zero(source: &GradedTheory, target: &GradedTheory) -> Result<Self> {
        let homs = source
            .degrees()
            .map(|n| GroupHom::zero(source.group(n).clone(), target.group(n).clone()))
            .collect();
        Self::new(source.clone(), target.clone(), homs)
    }

    /// Multiplication by `q` in every degree.
    pub fn multiplication(t: &GradedTheory, q: &BigInt) -> Self {
        let homs = t.groups.iter().map(|g| GroupHom::multiplication(g, q)).collect();
        DegreewiseMap {
            source: t.clone(),
            target: t.clone(),
            homs,
        }
    }

    pub fn source(&self) -> &GradedTheory {
        &self.source
    }

    pub fn target(&self) -> &GradedTheory {
        &self.target
    }

    pub fn at(&self, n: i64) -> &GroupHom {
        &self.homs[self.source.period.residue(n)]
    }

    pub fn homs(&self) -> &[GroupHom] {
        &self.homs
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &DegreewiseMap) -> Result<DegreewiseMap> {
        let homs = self
            .homs
            .iter()
            .zip(&next.homs)
            .map(|(a, b)| a.then(b))
            .collect::<Result<Vec<_>>>()?;
        DegreewiseMap::new(self.source.clone(), next.target.clone(), homs)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.homs.iter().all(GroupHom::is_isomorphism)
    }
}
