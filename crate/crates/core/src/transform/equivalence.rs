use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::sample::{TransformCase, TransformationSample};
use crate::arith;
use crate::coefficients::mod_q;
use crate::error::Result;
use crate::fgab::{smith_normal_form, GroupHom, IntMatrix};

/// Rational verdict in one degree: is the free-part block invertible over ℚ?
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalVerdict {
    pub degree: i64,
    pub source_rank: usize,
    pub target_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<String>,
    pub iso: bool,
}

fn square_determinant(m: &IntMatrix) -> Option<BigInt> {
    (m.rows() == m.cols()).then(|| m.determinant())
}

fn rational_verdict(h: &GroupHom, degree: i64) -> RationalVerdict {
    let block = h.free_block();
    let det = square_determinant(&block);
    RationalVerdict {
        degree,
        source_rank: h.source().rank(),
        target_rank: h.target().rank(),
        iso: det.as_ref().map_or(false, |d| !d.is_zero()),
        determinant: det.map(|d| d.to_string()),
    }
}

/// `τ ⊗ ℚ` per case and degree.
pub fn induce_rational(t: &TransformationSample) -> Vec<Vec<RationalVerdict>> {
    t.cases
        .iter()
        .map(|c| c.map.source().degrees().map(|n| rational_verdict(c.map.at(n), n)).collect())
        .collect()
}

/// `τ^{(q)}_n = (τ_n mod q) ⊕ (τ_{n-1} on q-torsion)` on the split models.
pub fn induce_mod_q_case(case: &TransformCase, q: &BigInt) -> Result<Vec<GroupHom>> {
    let source = mod_q(case.map.source(), q)?;
    let target = mod_q(case.map.target(), q)?;
    case.map
        .source()
        .degrees()
        .map(|n| {
            let (a, b) = (source.model(n)?, target.model(n)?);
            let coker = case
                .map
                .at(n)
                .then(&b.reduce)?
                .descend_through(&a.reduce)
                .expect("homomorphisms preserve q-multiples");
            let tor = a
                .include
                .then(case.map.at(n - 1))?
                .lift_through(&b.include)
                .expect("homomorphisms preserve q-torsion");
            Ok(a.sum.block_map(&b.sum, &[(0, 0, coker), (1, 1, tor)]))
        })
        .collect()
}

pub fn induce_mod_q(t: &TransformationSample, q: &BigInt) -> Result<Vec<Vec<GroupHom>>> {
    t.cases.iter().map(|c| induce_mod_q_case(c, q)).collect()
}

/// Verdict on `H^T_n = (ℚ/ℤ)^{rank} ⊕ T(H_{n-1})` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionVerdict {
    pub degree: i64,
    /// The free block is invertible over ℤ, so `τ_n ⊗ ℚ/ℤ` is bijective.
    pub divisible_iso: bool,
    /// `τ_{n-1}` restricted to torsion subgroups is bijective.
    pub torsion_iso: bool,
    pub iso: bool,
}

fn torsion_verdict(case: &TransformCase, n: i64) -> TorsionVerdict {
    let block = case.map.at(n).free_block();
    let divisible_iso = square_determinant(&block).map_or(false, |d| d.abs().is_one());
    let torsion_iso = case.map.at(n - 1).restrict_to_torsion().is_isomorphism();
    TorsionVerdict {
        degree: n,
        divisible_iso,
        torsion_iso,
        iso: divisible_iso && torsion_iso,
    }
}

pub fn induce_torsion(t: &TransformationSample) -> Vec<Vec<TorsionVerdict>> {
    t.cases
        .iter()
        .map(|c| c.map.source().degrees().map(|n| torsion_verdict(c, n)).collect())
        .collect()
}

/// Primes outside which mod-p verdicts agree with rational verdicts.
///
/// Primes of the torsion invariant factors, of the elementary divisors of every
/// `τ_n`, and of the nonzero elementary divisors of every free block. The last
/// set is needed when a zero torsion block makes the whole matrix singular.
pub fn relevant_primes(t: &TransformationSample) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut add = |n: &BigInt| {
        if !n.is_zero() {
            out.extend(arith::prime_factors(n));
        }
    };
    for c in &t.cases {
        for h in c.map.homs() {
            for d in h.source().torsion().iter().chain(h.target().torsion()) {
                add(d);
            }
            for d in smith_normal_form(h.matrix()).elementary_divisors() {
                add(&d);
            }
            for d in smith_normal_form(&h.free_block()).elementary_divisors() {
                add(&d);
            }
        }
    }
    out
}

fn case_mod_q_iso(case: &TransformCase, q: &BigInt) -> Result<bool> {
    Ok(induce_mod_q_case(case, q)?.iter().all(GroupHom::is_isomorphism))
}

/// For each case, whether the mod-p verdict equals the rational verdict at every listed prime.
pub fn soundness_spot_check(t: &TransformationSample, primes: &[u64]) -> Result<Vec<bool>> {
    t.cases
        .iter()
        .map(|c| {
            let rational = c.map.source().degrees().all(|n| rational_verdict(c.map.at(n), n).iso);
            for &p in primes {
                if case_mod_q_iso(c, &BigInt::from(p))? != rational {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub algebra: String,
    pub integral_iso: bool,
    pub rational_iso: bool,
    pub torsion_iso: bool,
    pub mod_p_iso: BTreeMap<String, bool>,
    /// integral ⟺ rational ∧ torsion
    pub integral_iff_rational_and_torsion: bool,
    /// integral ⟺ rational ∧ mod-p for every relevant prime
    pub integral_iff_rational_and_finite: bool,
    pub rational: Vec<RationalVerdict>,
    pub torsion: Vec<TorsionVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub sample: String,
    pub role: String,
    pub primes: Vec<u64>,
    pub cases: Vec<CaseReport>,
    pub biconditionals_hold: bool,
}

impl EquivalenceReport {
    pub fn violations(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases
            .iter()
            .filter(|c| !(c.integral_iff_rational_and_torsion && c.integral_iff_rational_and_finite))
    }
}

pub fn equivalence_report(t: &TransformationSample) -> Result<EquivalenceReport> {
    let primes: Vec<u64> = relevant_primes(t).into_iter().collect();
    let mut cases = Vec::with_capacity(t.cases.len());
    for c in &t.cases {
        let integral_iso = c.map.homs().iter().all(GroupHom::is_isomorphism);
        let rational: Vec<RationalVerdict> =
            c.map.source().degrees().map(|n| rational_verdict(c.map.at(n), n)).collect();
        let torsion: Vec<TorsionVerdict> = c.map.source().degrees().map(|n| torsion_verdict(c, n)).collect();
        let rational_iso = rational.iter().all(|v| v.iso);
        let torsion_iso = torsion.iter().all(|v| v.iso);
        let mut mod_p_iso = BTreeMap::new();
        for &p in &primes {
            mod_p_iso.insert(p.to_string(), case_mod_q_iso(c, &BigInt::from(p))?);
        }
        let finite = mod_p_iso.values().all(|&v| v);
        cases.push(CaseReport {
            algebra: c.algebra.clone(),
            integral_iso,
            rational_iso,
            torsion_iso,
            integral_iff_rational_and_torsion: integral_iso == (rational_iso && torsion_iso),
            integral_iff_rational_and_finite: integral_iso == (rational_iso && finite),
            mod_p_iso,
            rational,
            torsion,
        });
    }
    let biconditionals_hold = cases
        .iter()
        .all(|c| c.integral_iff_rational_and_torsion && c.integral_iff_rational_and_finite);
    Ok(EquivalenceReport {
        sample: t.name.clone(),
        role: t.role.to_string(),
        primes,
        cases,
        biconditionals_hold,
    })
}
