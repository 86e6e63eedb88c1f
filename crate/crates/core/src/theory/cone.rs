use num_bigint::BigInt;

use super::graded::{DegreewiseMap, GradedTheory};
use super::sequence::LongSequence;
use crate::error::Result;
use crate::fgab::{solve_extension, DirectSum, ExtensionMode, ExtensionResolution, GroupHom};

/// Values of `H_*(C_f)` together with the split-model Puppe maps.
#[derive(Clone, Debug)]
pub struct MappingCone {
    map: DegreewiseMap,
    theory: GradedTheory,
    resolutions: Vec<ExtensionResolution>,
    /// `H_{n+1}(B) → H_n(C_f)` per degree `n`.
    boundary: Vec<GroupHom>,
    /// `H_n(C_f) → H_n(A)` per degree `n`.
    projection: Vec<GroupHom>,
}

/// Solves `0 → coker f_{n+1} → H_n(C_f) → ker f_n → 0` in every degree.
pub fn mapping_cone(f: &DegreewiseMap) -> MappingCone {
    mapping_cone_bounded(f, None)
}

/// As [`mapping_cone`], recording whether the extensions are forced once the
/// cone groups are known to be annihilated by `bound`.
pub fn mapping_cone_bounded(f: &DegreewiseMap, bound: Option<&BigInt>) -> MappingCone {
    let src = f.source();
    let period = src.period();
    let mut groups = Vec::new();
    let mut resolutions = Vec::new();
    let mut boundary = Vec::new();
    let mut projection = Vec::new();
    for n in src.degrees() {
        let (ker, incl) = f.at(n).kernel_with_inclusion();
        let (coker, proj) = f.at(n + 1).cokernel_with_projection();
        let resolution = solve_extension(&ker, &coker, bound);
        let sum = DirectSum::new(&[coker, ker]);
        let cone = sum.group().clone();
        debug_assert_eq!(cone, resolution.group);
        boundary.push(proj.then(&sum.inclusion(0)).expect("cokernel feeds the first summand"));
        projection.push(sum.projection(1).then(&incl).expect("second summand is the kernel"));
        groups.push(cone);
        resolutions.push(resolution);
    }
    let theory = GradedTheory::new(format!("C({})", src.name()), period, groups)
        .expect("one group per degree class")
        .with_equivariance(src.equivariance().map(str::to_owned));
    MappingCone {
        map: f.clone(),
        theory,
        resolutions,
        boundary,
        projection,
    }
}

impl MappingCone {
    pub fn theory(&self) -> &GradedTheory {
        &self.theory
    }

    pub fn into_theory(self) -> GradedTheory {
        self.theory
    }

    pub fn resolutions(&self) -> &[ExtensionResolution] {
        &self.resolutions
    }

    pub fn resolution(&self, n: i64) -> &ExtensionResolution {
        &self.resolutions[self.theory.period().residue(n)]
    }

    pub fn map(&self) -> &DegreewiseMap {
        &self.map
    }

    /// True when no degree needed a non-forced extension choice.
    pub fn determined(&self) -> bool {
        self.resolutions.iter().all(|r| r.mode != ExtensionMode::Ambiguous)
    }

    /// `… → H_n(A) → H_n(B) → H_{n-1}(C_f) → H_{n-1}(A) → …` over one period.
    pub fn puppe_sequence(&self) -> Result<LongSequence> {
        let a = self.map.source();
        let b = self.map.target();
        let c = &self.theory;
        let period = a.period();
        let mut steps = Vec::with_capacity(3 * period.len());
        for k in 0..period.len() as i64 {
            let n = -k;
            let below = period.residue(n - 1);
            steps.push((format!("{}_{}", a.name(), n), self.map.at(n).clone()));
            steps.push((format!("{}_{}", b.name(), n), self.boundary[below].clone()));
            steps.push((format!("{}_{}", c.name(), n - 1), self.projection[below].clone()));
        }
        LongSequence::cyclic(format!("Puppe sequence of {}", c.name()), steps)
    }
}

/// `H_*(A ⊗ C_q)` as the cone of `×q` on the suspension, in raw cone degrees:
/// degree `n` holds `H_{n+2}/q ⊕ H_{n+1}[q]`.
pub fn tensor_cone_q(t: &GradedTheory, q: &BigInt) -> Result<GradedTheory> {
    check_modulus(q)?;
    let s = t.suspension();
    let cone = mapping_cone(&DegreewiseMap::multiplication(&s, q));
    Ok(cone.into_theory().renamed(format!("{} (x) C_{q}", t.name())))
}

/// `K_*(C_q)`: the cone of the power map `q̂` on the suspension of a point.
pub fn cone_algebra(q: &BigInt) -> Result<GradedTheory> {
    check_modulus(q)?;
    let s = GradedTheory::suspension_of_point();
    let f = power_map(&s, q);
    Ok(mapping_cone(&f).into_theory().renamed(format!("C_q({q})")))
}

/// `q̂_*` on `Sℂ`: zero in degree 0, `×q` on `K₁ = ℤ`.
pub fn power_map(suspension: &GradedTheory, q: &BigInt) -> DegreewiseMap {
    DegreewiseMap::multiplication(suspension, q)
}

/// `(p_q)_*: K_*(C_{pq}) → K_*(C_q)`, the reduction `ℤ/pq → ℤ/q` in degree 0.
///
/// Comparing `ℤ →(pq) ℤ → ℤ/pq` with `ℤ →(q) ℤ → ℤ/q` through `×p` on the left
/// and the identity in the middle forces the induced cokernel map to send the
/// generator to the generator.
pub fn cone_comparison_map(p: &BigInt, q: &BigInt) -> Result<DegreewiseMap> {
    check_modulus(p)?;
    check_modulus(q)?;
    let big = cone_algebra(&(p * q))?;
    let small = cone_algebra(q)?;
    let h0 = GroupHom::new(
        big.group(0).clone(),
        small.group(0).clone(),
        crate::fgab::IntMatrix::from_rows(&[[1i64]]),
    )?;
    let h1 = GroupHom::zero(big.group(1).clone(), small.group(1).clone());
    DegreewiseMap::new(big, small, vec![h0, h1])
}

fn check_modulus(q: &BigInt) -> Result<()> {
    if *q < BigInt::from(2) {
        return Err(crate::Error::InvalidParameter(format!("modulus must be at least 2, got {q}")));
    }
    Ok(())
}
