use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use std::collections::BTreeMap;

use super::modq::{mod_q, q_torsion, reduction, transition_between, ModQTheory};
use crate::admissible::{rationalization_kernel_cokernel, rationalize, AdmissibleGroup, TruncatedProfile};
use crate::arith;
use crate::error::{Error, Result};
use crate::fgab::{verify_exact, DirectSum, FgAbGroup, GroupHom, IntMatrix};
use crate::theory::{GradedTheory, NodeVerdict, SequenceReport};

/// `H^T_n ≅ (ℚ/ℤ)^{rank H_n} ⊕ T(H_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionTheory {
    base: GradedTheory,
    groups: Vec<AdmissibleGroup>,
}

pub fn torsion(base: &GradedTheory) -> TorsionTheory {
    let groups = base
        .degrees()
        .map(|n| {
            AdmissibleGroup::new(0, 0, base.group(n).rank(), base.group(n - 1).torsion().to_vec())
                .expect("torsion of a normal form is a chain")
        })
        .collect();
    TorsionTheory {
        base: base.clone(),
        groups,
    }
}

impl TorsionTheory {
    pub fn base(&self) -> &GradedTheory {
        &self.base
    }

    pub fn group(&self, n: i64) -> &AdmissibleGroup {
        &self.groups[self.base.period().residue(n)]
    }

    pub fn groups(&self) -> &[AdmissibleGroup] {
        &self.groups
    }

    pub fn profiles(&self, bound: u64) -> Result<Vec<TruncatedProfile>> {
        self.groups.iter().map(|g| g.truncated_profile(bound)).collect()
    }
}

/// `H_n ⊗ ℚ` in every degree.
pub fn rational(base: &GradedTheory) -> Vec<AdmissibleGroup> {
    base.groups().iter().map(rationalize).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "prime")]
pub enum Chain {
    /// `q_k = k!`, cofinal in the divisibility order.
    Factorial,
    /// `q_k = p^k`, cofinal only in the `p`-power part; sees `p`-primary layers only.
    PrimePower(u64),
}

/// A cofinal chain in `{q ≥ 2}` ordered by divisibility.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DivisibilityIndex {
    pub chain: Chain,
    /// Maximum number of chain steps past the starting index.
    pub cap: usize,
    /// Consecutive equal profiles required to declare stability.
    pub window: usize,
}

impl Default for DivisibilityIndex {
    fn default() -> Self {
        DivisibilityIndex {
            chain: Chain::Factorial,
            cap: 64,
            window: 2,
        }
    }
}

impl DivisibilityIndex {
    pub fn factorial() -> Self {
        Self::default()
    }

    pub fn prime_power(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        Ok(DivisibilityIndex {
            chain: Chain::PrimePower(p),
            ..Self::default()
        })
    }

    pub fn term(&self, k: u64) -> BigInt {
        match self.chain {
            Chain::Factorial => arith::factorial(k),
            Chain::PrimePower(p) => BigInt::from(p).pow(k as u32),
        }
    }

    fn first(&self) -> u64 {
        match self.chain {
            Chain::Factorial => 2,
            Chain::PrimePower(_) => 1,
        }
    }

    /// The first index whose term is a multiple of `q`, if any.
    pub fn index_covering(&self, q: &BigInt) -> Option<u64> {
        match self.chain {
            Chain::Factorial => {
                let mut k = self.first();
                let mut term = self.term(k);
                while !term.is_multiple_of(q) {
                    k += 1;
                    term *= k;
                }
                Some(k)
            }
            Chain::PrimePower(p) => {
                let mut rest = q.clone();
                let bp = BigInt::from(p);
                let mut k = 0;
                while rest.is_multiple_of(&bp) {
                    rest /= &bp;
                    k += 1;
                }
                rest.is_one().then_some(k.max(self.first()))
            }
        }
    }

    /// The largest divisor of `n` that some term of the chain is divisible by.
    fn visible_part(&self, n: &BigInt) -> BigInt {
        match self.chain {
            Chain::Factorial => n.clone(),
            Chain::PrimePower(p) => BigInt::from(p).pow(arith::valuation(n, p)),
        }
    }

    /// First index whose term is divisible by every prime power up to `bound`
    /// that the chain can see.
    pub fn start_for(&self, bound: u64) -> u64 {
        let mut need = BigInt::one();
        for p in arith::primes_up_to(bound) {
            if matches!(self.chain, Chain::PrimePower(c) if c != p) {
                continue;
            }
            let mut pe = p;
            while pe.checked_mul(p).map_or(false, |x| x <= bound) {
                pe *= p;
            }
            need = need.lcm(&BigInt::from(pe));
        }
        self.index_covering(&need).unwrap_or(self.first()).max(self.first())
    }
}

/// Truncated profiles of `lim_k H^{(q_k)}_n` computed from the chain itself.
///
/// For each `k` the image of `H^{(q_k)}` in `H^{(q_{k+d})}` is computed for
/// `d = 1, 2, 4, …` until it repeats and `q_{k+d}/q_k` kills the torsion of
/// the base; `k` then advances until the profiles of these images repeat
/// `window` times.
pub fn colimit_oracle(
    base: &GradedTheory,
    chain: &DivisibilityIndex,
    profile_bound: u64,
) -> Result<Vec<TruncatedProfile>> {
    if profile_bound < 2 {
        return Err(Error::InvalidParameter(format!(
            "profile bound {profile_bound} must be at least 2"
        )));
    }
    let start = chain.start_for(profile_bound);
    let mut stages = Stages {
        base,
        chain,
        cache: BTreeMap::new(),
    };
    let mut previous: Option<Vec<TruncatedProfile>> = None;
    let mut repeats = 0;
    for k in start..=start + chain.cap as u64 {
        let current = stages.image_profiles(k, profile_bound)?;
        if previous.as_ref() == Some(&current) {
            repeats += 1;
            if repeats + 1 >= chain.window {
                return Ok(current);
            }
        } else {
            repeats = 0;
        }
        previous = Some(current);
        stages.cache.retain(|&i, _| i > k);
    }
    Err(Error::NoStabilization(format!(
        "{}: profiles still changing after chain index {}",
        base.name(),
        start + chain.cap as u64
    )))
}

const STEP_CAP: u32 = 10;

struct Stages<'a> {
    base: &'a GradedTheory,
    chain: &'a DivisibilityIndex,
    cache: BTreeMap<u64, ModQTheory>,
}

impl Stages<'_> {
    fn stage(&mut self, k: u64) -> Result<ModQTheory> {
        if let Some(m) = self.cache.get(&k) {
            return Ok(m.clone());
        }
        let m = mod_q(self.base, &self.chain.term(k))?;
        self.cache.insert(k, m.clone());
        Ok(m)
    }

    fn image_profiles(&mut self, k: u64, bound: u64) -> Result<Vec<TruncatedProfile>> {
        let small = self.stage(k)?;
        let killer = self
            .base
            .groups()
            .iter()
            .fold(BigInt::one(), |acc, g| acc.lcm(&g.torsion_exponent()));
        let killer = self.chain.visible_part(&killer);
        let mut last: Option<Vec<FgAbGroup>> = None;
        for j in 0..STEP_CAP {
            let large = self.stage(k + (1 << j))?;
            let t = transition_between(&small, &large)?;
            let images: Vec<FgAbGroup> = t.homs().iter().map(GroupHom::image).collect();
            let settled = (self.chain.term(k + (1 << j)) / self.chain.term(k)).is_multiple_of(&killer);
            if settled && last.as_ref() == Some(&images) {
                return images
                    .iter()
                    .map(|g| AdmissibleGroup::from(g).truncated_profile(bound))
                    .collect();
            }
            last = Some(images);
        }
        Err(Error::NoStabilization(format!(
            "{}: image of stage {k} still shrinking after {STEP_CAP} steps",
            self.base.name()
        )))
    }
}

fn verdict(label: String, group: String, exact: bool, detail: impl FnOnce() -> String) -> NodeVerdict {
    NodeVerdict {
        label,
        group,
        exact,
        detail: (!exact).then(detail),
    }
}

/// Structural check of `… → H^T_{n+1} → H_n →(r) H_n⊗ℚ → H^T_n → H_{n-1} → …`.
pub fn build_rational_torsion_sequence(base: &GradedTheory) -> SequenceReport {
    let t = torsion(base);
    let mut nodes = Vec::new();
    for n in base.degrees() {
        let h = base.group(n);
        let (ker_r, coker_r) = rationalization_kernel_cokernel(h);
        // the boundary H^T_{n+1} → H_n has image T(H_n) and kills the divisible part
        let from_above = finite_part(t.group(n + 1));
        nodes.push(verdict(format!("H_{n}"), h.to_string(), ker_r == from_above, || {
            format!("ker r = {ker_r} but boundary image = {from_above}")
        }));
        let q = rationalize(h);
        let rank_exact = q.q_rank() == h.rank();
        let divisible = AdmissibleGroup::circle(t.group(n).qz_rank());
        nodes.push(verdict(format!("H_{n} (x) Q"), q.to_string(), rank_exact && coker_r == divisible, || {
            format!("coker r = {coker_r} but divisible part of H^T_{n} = {divisible}")
        }));
        let (ker_below, _) = rationalization_kernel_cokernel(base.group(n - 1));
        let finite = finite_part(t.group(n));
        nodes.push(verdict(format!("H^T_{n}"), t.group(n).to_string(), finite == ker_below, || {
            format!("H^T_{n} / divisible = {finite} but ker r at {} = {ker_below}", n - 1)
        }));
    }
    let exact = nodes.iter().all(|v| v.exact);
    SequenceReport {
        name: format!("rational/torsion sequence of {}", base.name()),
        nodes,
        exact,
    }
}

fn finite_part(g: &AdmissibleGroup) -> AdmissibleGroup {
    AdmissibleGroup::new(0, 0, 0, g.torsion().to_vec()).expect("validated chain")
}

/// Projection of a normal-form group onto its free coordinates.
fn free_projection(b: &FgAbGroup) -> GroupHom {
    let r = b.rank();
    let mut m = IntMatrix::zeros(r, b.num_generators());
    for i in 0..r {
        m.set(i, i, 1.into());
    }
    GroupHom::new(b.clone(), FgAbGroup::free(r), m).expect("free coordinates split off")
}

/// Projection of a normal-form group onto its torsion coordinates.
fn torsion_projection(b: &FgAbGroup) -> GroupHom {
    let (r, t) = (b.rank(), b.torsion().len());
    let mut m = IntMatrix::zeros(t, b.num_generators());
    for i in 0..t {
        m.set(i, r + i, 1.into());
    }
    GroupHom::new(b.clone(), b.torsion_subgroup(), m).expect("torsion coordinates split off")
}

fn torsion_inclusion(b: &FgAbGroup) -> GroupHom {
    let (r, t) = (b.rank(), b.torsion().len());
    let mut m = IntMatrix::zeros(b.num_generators(), t);
    for i in 0..t {
        m.set(r + i, i, 1.into());
    }
    GroupHom::new(b.torsion_subgroup(), b.clone(), m).expect("torsion subgroup includes")
}

/// `… → H^{(q)}_n → H^T_n →(×q) H^T_n → H^{(q)}_{n-1} → …`, checked degree by degree
/// as `0 → coker(×q on H^T_{n+1}) → H^{(q)}_n → ker(×q on H^T_n) → 0`.
pub fn build_qz_bockstein_sequence(base: &GradedTheory, q: &BigInt) -> Result<SequenceReport> {
    let t = torsion(base);
    let m = mod_q(base, q)?;
    let mut nodes = Vec::new();
    for n in base.degrees() {
        let b_n = base.group(n);
        let b_below = base.group(n - 1);
        let model = m.model(n)?;

        // T(B_n)/q → B_n/q → H^{(q)}_n
        let tors = b_n.torsion_subgroup();
        let red_t = reduction(&tors, q);
        let into_coker = torsion_inclusion(b_n).then(&model.reduce)?;
        let i = into_coker
            .descend_through(&red_t.map)
            .expect("q·T ⊆ q·B")
            .then(&model.sum.inclusion(0))?;

        // H^{(q)}_n → (ℤ/q)^r ⊕ T(B_{n-1})[q]
        let free = FgAbGroup::free(b_n.rank());
        let red_f = reduction(&free, q);
        let pi_coker = free_projection(b_n)
            .then(&red_f.map)?
            .descend_through(&model.reduce)
            .expect("q·B maps into q·ℤ^r");
        let (tq, tq_incl) = q_torsion(&b_below.torsion_subgroup(), q);
        let pi_tor = model
            .include
            .then(&torsion_projection(b_below))?
            .lift_through(&tq_incl)
            .expect("q-torsion lies in the torsion subgroup");
        let kernel_model = DirectSum::new(&[red_f.canonical.group.clone(), tq]);
        let pi = model.sum.block_map(&kernel_model, &[(0, 0, pi_coker), (1, 1, pi_tor)]);

        let sub = red_t.canonical.group.clone();
        let quotient = kernel_model.group().clone();
        let chain = [
            GroupHom::zero(FgAbGroup::zero(), sub.clone()),
            i,
            pi,
            GroupHom::zero(quotient.clone(), FgAbGroup::zero()),
        ];
        let report = verify_exact(&chain)?;

        let (ker_here, _) = t.group(n).mult_kernel_cokernel(q)?;
        let (_, coker_above) = t.group(n + 1).mult_kernel_cokernel(q)?;
        let labels = [
            format!("coker(x{q} on H^T_{})", n + 1),
            format!("H^({q})_{n}"),
            format!("ker(x{q} on H^T_{n})"),
        ];
        let expected = [&coker_above, m.group(n), &ker_here];
        let actual = [&sub, m.group(n), &quotient];
        for (idx, node) in report.nodes.iter().enumerate() {
            let matches = expected[idx] == actual[idx];
            nodes.push(verdict(labels[idx].clone(), actual[idx].to_string(), node.exact && matches, || {
                if matches {
                    format!("not exact, homology {:?}", node.homology.as_ref().map(|h| h.to_string()))
                } else {
                    format!("expected {} from H^T, found {}", expected[idx], actual[idx])
                }
            }));
        }
    }
    let exact = nodes.iter().all(|v| v.exact);
    Ok(SequenceReport {
        name: format!("Q/Z Bockstein sequence of {} at q = {q}", base.name()),
        nodes,
        exact,
    })
}
