use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::{
    solve_extension, Canonical, DirectSum, ExtensionResolution, FgAbGroup, GroupHom, IntMatrix,
    Presentation,
};
use crate::theory::{DegreewiseMap, GradedTheory, LongSequence};

/// Exponent bound for mod-q groups: `q`, or `2q` when `q ≡ 2 (mod 4)`.
pub fn annihilator_bound(q: &BigInt) -> BigInt {
    if q.mod_floor(&BigInt::from(4)) == BigInt::from(2) {
        q * 2
    } else {
        q.clone()
    }
}

/// `B/q` with the reduction `B → B/q`.
#[derive(Clone, Debug)]
pub(crate) struct Reduction {
    pub canonical: Canonical,
    pub map: GroupHom,
}

pub(crate) fn reduction(b: &FgAbGroup, q: &BigInt) -> Reduction {
    let n = b.num_generators();
    let relations = IntMatrix::diagonal(n, n, b.generator_orders()).hcat(&IntMatrix::identity(n).scale(q));
    let canonical = Presentation::new(n, relations).canonicalize();
    let map = GroupHom::new(b.clone(), canonical.group.clone(), canonical.to_canon.clone())
        .expect("reduction is well defined");
    Reduction { canonical, map }
}

/// `B[q]` with its inclusion into `B`.
pub(crate) fn q_torsion(b: &FgAbGroup, q: &BigInt) -> (FgAbGroup, GroupHom) {
    GroupHom::multiplication(b, q).kernel_with_inclusion()
}

/// One degree of the split model `B_n/q ⊕ B_{n-1}[q]`.
#[derive(Clone, Debug)]
pub(crate) struct SplitModel {
    pub sum: DirectSum,
    /// `B_n → B_n/q`.
    pub reduce: GroupHom,
    /// `B_{n-1}[q] → B_{n-1}`.
    pub include: GroupHom,
}

impl SplitModel {
    fn new(b_n: &FgAbGroup, b_below: &FgAbGroup, q: &BigInt) -> Self {
        let red = reduction(b_n, q);
        let (tor, include) = q_torsion(b_below, q);
        let sum = DirectSum::new(&[red.canonical.group.clone(), tor]);
        SplitModel {
            sum,
            reduce: red.map,
            include,
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sum.group()
    }

    /// `B_n → H^{(q)}_n`: quotient onto the cokernel part.
    pub fn reduction_map(&self) -> GroupHom {
        self.reduce.then(&self.sum.inclusion(0)).expect("reduction lands in the first summand")
    }

    /// `H^{(q)}_n → B_{n-1}`: projection to the Tor part, then inclusion.
    pub fn bockstein_map(&self) -> GroupHom {
        self.sum.projection(1).then(&self.include).expect("Tor part sits in B_{n-1}")
    }
}

/// `H^{(q)}_n ≅ B_n/q ⊕ Tor(B_{n-1}, ℤ/q)` realized as a split model.
#[derive(Clone, Debug)]
pub struct ModQTheory {
    base: GradedTheory,
    q: BigInt,
    theory: GradedTheory,
    resolutions: Vec<ExtensionResolution>,
    models: Option<Vec<SplitModel>>,
}

pub fn mod_q(base: &GradedTheory, q: &BigInt) -> Result<ModQTheory> {
    check_modulus(q)?;
    let bound = annihilator_bound(q);
    let mut models = Vec::new();
    let mut resolutions = Vec::new();
    for n in base.degrees() {
        let model = SplitModel::new(base.group(n), base.group(n - 1), q);
        let resolution = solve_extension(&model.sum.parts[1], &model.sum.parts[0], Some(&bound));
        debug_assert_eq!(&resolution.group, model.group());
        resolutions.push(resolution);
        models.push(model);
    }
    let groups = models.iter().map(|m| m.group().clone()).collect();
    let theory = GradedTheory::new(format!("{} mod {q}", base.name()), base.period(), groups)?
        .with_equivariance(base.equivariance().map(str::to_owned));
    Ok(ModQTheory {
        base: base.clone(),
        q: q.clone(),
        theory,
        resolutions,
        models: Some(models),
    })
}

impl ModQTheory {
    /// Hand-built values without structure maps, for exercising checkers.
    pub fn synthetic(base: &GradedTheory, q: &BigInt, groups: Vec<FgAbGroup>) -> Result<Self> {
        check_modulus(q)?;
        let theory = GradedTheory::new(format!("{} mod {q} (synthetic)", base.name()), base.period(), groups)?;
        let resolutions = theory
            .groups()
            .iter()
            .map(|g| solve_extension(g, &FgAbGroup::zero(), None))
            .collect();
        Ok(ModQTheory {
            base: base.clone(),
            q: q.clone(),
            theory,
            resolutions,
            models: None,
        })
    }

    pub fn base(&self) -> &GradedTheory {
        &self.base
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn theory(&self) -> &GradedTheory {
        &self.theory
    }

    pub fn group(&self, n: i64) -> &FgAbGroup {
        self.theory.group(n)
    }

    pub fn resolutions(&self) -> &[ExtensionResolution] {
        &self.resolutions
    }

    pub fn resolution(&self, n: i64) -> &ExtensionResolution {
        &self.resolutions[self.theory.period().residue(n)]
    }

    pub(crate) fn model(&self, n: i64) -> Result<&SplitModel> {
        let models = self.models.as_ref().ok_or_else(|| {
            Error::InvalidTheory(format!("{} carries no structure maps", self.theory.name()))
        })?;
        Ok(&models[self.theory.period().residue(n)])
    }

    /// `H_n → H^{(q)}_n`.
    pub fn reduction(&self, n: i64) -> Result<GroupHom> {
        Ok(self.model(n)?.reduction_map())
    }

    /// `H^{(q)}_n → H_{n-1}`.
    pub fn bockstein(&self, n: i64) -> Result<GroupHom> {
        Ok(self.model(n)?.bockstein_map())
    }

    /// The cokernel-part and Tor-part summands in degree `n`.
    pub fn parts(&self, n: i64) -> Result<(&FgAbGroup, &FgAbGroup)> {
        let m = self.model(n)?;
        Ok((&m.sum.parts[0], &m.sum.parts[1]))
    }
}

/// `… → H_n →(×q) H_n → H^{(q)}_n → H_{n-1} →(×q) …` over one period.
pub fn build_mod_q_sequence(base: &GradedTheory, q: &BigInt) -> Result<LongSequence> {
    let m = mod_q(base, q)?;
    let period = base.period().len() as i64;
    let mut steps = Vec::new();
    for k in 0..period {
        let n = -k;
        let times_q = GroupHom::multiplication(base.group(n), q);
        steps.push((format!("H_{n}"), times_q));
        steps.push((format!("H_{n}'"), m.reduction(n)?));
        steps.push((format!("H^({q})_{n}"), m.bockstein(n)?));
    }
    LongSequence::cyclic(format!("x{q} sequence of {}", base.name()), steps)
}

/// `τ: H^{(q)} → H^{(q')}` for `q | q'`.
pub fn transition(base: &GradedTheory, q: &BigInt, q_prime: &BigInt) -> Result<DegreewiseMap> {
    check_modulus(q)?;
    if !q_prime.is_multiple_of(q) {
        return Err(Error::Divisibility {
            q: q.to_string(),
            q_prime: q_prime.to_string(),
        });
    }
    let small = mod_q(base, q)?;
    let large = mod_q(base, q_prime)?;
    transition_between(&small, &large)
}

pub(crate) fn transition_between(small: &ModQTheory, large: &ModQTheory) -> Result<DegreewiseMap> {
    let s = &large.q / &small.q;
    let base = &small.base;
    let homs = base
        .degrees()
        .map(|n| {
            let a = small.model(n)?;
            let b = large.model(n)?;
            // ×s on B_n/q → B_n/q'
            let up = GroupHom::multiplication(base.group(n), &s).then(&b.reduce)?;
            let coker = up.descend_through(&a.reduce).expect("×s respects q·B_n");
            // B_{n-1}[q] ⊆ B_{n-1}[q']
            let tor = a.include.lift_through(&b.include).expect("q-torsion is q'-torsion");
            Ok(a.sum.block_map(&b.sum, &[(0, 0, coker), (1, 1, tor)]))
        })
        .collect::<Result<Vec<_>>>()?;
    DegreewiseMap::new(small.theory.clone(), large.theory.clone(), homs)
}

/// Maps of the sequence `H^{(p)}_n → H^{(pq)}_n → H^{(q)}_n → H^{(p)}_{n-1}` in one degree.
#[derive(Clone, Debug)]
pub struct PqMaps {
    pub p_dot: GroupHom,
    pub q_acute: GroupHom,
    pub boundary: GroupHom,
}

pub fn pq_maps(base: &GradedTheory, p: &BigInt, q: &BigInt, n: i64) -> Result<PqMaps> {
    let mp = mod_q(base, p)?;
    let mq = mod_q(base, q)?;
    let mpq = mod_q(base, &(p * q))?;
    pq_maps_between(&mp, &mq, &mpq, n)
}

fn pq_maps_between(mp: &ModQTheory, mq: &ModQTheory, mpq: &ModQTheory, n: i64) -> Result<PqMaps> {
    let base = &mp.base;
    let (p, q) = (&mp.q, &mq.q);
    let (a, b, c) = (mp.model(n)?, mpq.model(n)?, mq.model(n)?);

    // ṗ: ×q on B/p → B/pq, inclusion B[p] ⊆ B[pq]
    let up = GroupHom::multiplication(base.group(n), q).then(&b.reduce)?;
    let dot_coker = up.descend_through(&a.reduce).expect("×q respects p·B");
    let dot_tor = a.include.lift_through(&b.include).expect("p-torsion is pq-torsion");
    let p_dot = a.sum.block_map(&b.sum, &[(0, 0, dot_coker), (1, 1, dot_tor)]);

    // q́: reduction B/pq → B/q, ×p on B[pq] → B[q]
    let acute_coker = c.reduce.descend_through(&b.reduce).expect("pq·B ⊆ q·B");
    let times_p = b.include.then(&GroupHom::multiplication(base.group(n - 1), p))?;
    let acute_tor = times_p.lift_through(&c.include).expect("p·B[pq] ⊆ B[q]");
    let q_acute = b.sum.block_map(&c.sum, &[(0, 0, acute_coker), (1, 1, acute_tor)]);

    let boundary = mq.bockstein(n)?.then(&mp.reduction(n - 1)?)?;
    Ok(PqMaps {
        p_dot,
        q_acute,
        boundary,
    })
}

/// `… → H^{(p)}_n →(ṗ) H^{(pq)}_n →(q́) H^{(q)}_n → H^{(p)}_{n-1} → …` over one period.
pub fn build_pq_sequence(base: &GradedTheory, p: &BigInt, q: &BigInt) -> Result<LongSequence> {
    check_modulus(p)?;
    check_modulus(q)?;
    let pq = p * q;
    let (mp, mq, mpq) = (mod_q(base, p)?, mod_q(base, q)?, mod_q(base, &pq)?);
    let period = base.period().len() as i64;
    let mut steps = Vec::new();
    for k in 0..period {
        let n = -k;
        let maps = pq_maps_between(&mp, &mq, &mpq, n)?;
        steps.push((format!("H^({p})_{n}"), maps.p_dot));
        steps.push((format!("H^({pq})_{n}"), maps.q_acute));
        steps.push((format!("H^({q})_{n}"), maps.boundary));
    }
    LongSequence::cyclic(format!("({p},{q}) sequence of {}", base.name()), steps)
}

/// Exponents of a mod-q theory against the annihilator bound.
#[derive(Clone, Debug, Serialize)]
pub struct OrderBoundReport {
    pub theory: String,
    pub q: String,
    pub bound: String,
    pub degrees: Vec<DegreeExponent>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeExponent {
    pub degree: i64,
    pub group: String,
    pub exponent: String,
    pub pass: bool,
}

impl OrderBoundReport {
    pub fn failing_degrees(&self) -> Vec<i64> {
        self.degrees.iter().filter(|d| !d.pass).map(|d| d.degree).collect()
    }
}

pub fn order_bound_check(m: &ModQTheory) -> OrderBoundReport {
    let bound = annihilator_bound(&m.q);
    let degrees: Vec<DegreeExponent> = m
        .theory
        .degrees()
        .map(|n| {
            let g = m.group(n);
            // an infinite group has no finite exponent
            let exponent = g.exponent();
            let pass = exponent.as_ref().map_or(false, |e| bound.is_multiple_of(e));
            DegreeExponent {
                degree: n,
                group: g.to_string(),
                exponent: exponent.map_or_else(|| "infinite".to_owned(), |e| e.to_string()),
                pass,
            }
        })
        .collect();
    OrderBoundReport {
        theory: m.theory.name().to_owned(),
        q: m.q.to_string(),
        bound: bound.to_string(),
        pass: degrees.iter().all(|d| d.pass),
        degrees,
    }
}

pub(crate) fn check_modulus(q: &BigInt) -> Result<()> {
    if *q < BigInt::from(2) {
        return Err(Error::InvalidParameter(format!("modulus must be at least 2, got {q}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::tor;
    use crate::theory::tensor_cone_q;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn mixed() -> GradedTheory {
        GradedTheory::complex(
            "mixed",
            FgAbGroup::new(1, vec![b(2), b(12)]).unwrap(),
            FgAbGroup::new(2, vec![b(4)]).unwrap(),
        )
    }

    #[test]
    fn values_on_small_examples() {
        let p = mod_q(&GradedTheory::point(), &b(7)).unwrap();
        assert_eq!(p.group(0), &FgAbGroup::cyclic(7));
        assert!(p.group(1).is_zero());
        let o = mod_q(&GradedTheory::cuntz(7).unwrap(), &b(9)).unwrap();
        assert_eq!(o.group(0), &FgAbGroup::cyclic(3));
        assert_eq!(o.group(1), &FgAbGroup::cyclic(3));
        let t = GradedTheory::complex("torus2", FgAbGroup::free(2), FgAbGroup::free(2));
        let m = mod_q(&t, &b(4)).unwrap();
        assert_eq!(m.group(1), &FgAbGroup::from_cyclic_orders(&[b(4), b(4)]));
    }

    #[test]
    fn agrees_with_shifted_tensor_cone() {
        let t = mixed();
        for q in 2..13 {
            let m = mod_q(&t, &b(q)).unwrap();
            let c = tensor_cone_q(&t, &b(q)).unwrap();
            for n in 0..2 {
                assert_eq!(m.group(n), c.group(n - 2));
            }
        }
    }

    #[test]
    fn order_identity() {
        let t = mixed();
        for q in 2..20 {
            let m = mod_q(&t, &b(q)).unwrap();
            for n in 0..2 {
                let coker = reduction(t.group(n), &b(q)).canonical.group;
                let expected = coker.order().unwrap() * tor(t.group(n - 1), &FgAbGroup::cyclic(q)).order().unwrap();
                assert_eq!(m.group(n).order().unwrap(), expected);
            }
        }
    }

    #[test]
    fn sequences_exact() {
        for t in [GradedTheory::point(), mixed(), GradedTheory::zero(crate::theory::Period::Complex)] {
            for q in [2, 3, 4, 6] {
                assert!(build_mod_q_sequence(&t, &b(q)).unwrap().verify().unwrap().exact);
                for p in [2, 3, 4] {
                    let r = build_pq_sequence(&t, &b(p), &b(q)).unwrap().verify().unwrap();
                    assert!(r.exact, "{t} p={p} q={q}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn transition_examples() {
        let point = GradedTheory::point();
        let t = transition(&point, &b(2), &b(6)).unwrap();
        let expected = GroupHom::from_rows(FgAbGroup::cyclic(2), FgAbGroup::cyclic(6), &[[3]]).unwrap();
        assert!(t.at(0).same_map(&expected));
        assert!(t.at(0).is_injective());

        let c4 = GradedTheory::complex("c4", FgAbGroup::cyclic(4), FgAbGroup::zero());
        let t = transition(&c4, &b(2), &b(4)).unwrap();
        let incl = GroupHom::from_rows(FgAbGroup::cyclic(2), FgAbGroup::cyclic(4), &[[2]]).unwrap();
        assert!(t.at(1).same_map(&incl));

        let id = transition(&mixed(), &b(6), &b(6)).unwrap();
        assert_eq!(id, DegreewiseMap::identity(id.source()));
        assert!(transition(&point, &b(4), &b(6)).is_err());
    }

    #[test]
    fn transitions_compose() {
        let t = mixed();
        let (q, q1, q2) = (b(2), b(4), b(24));
        let a = transition(&t, &q, &q1).unwrap();
        let c = transition(&t, &q1, &q2).unwrap();
        let direct = transition(&t, &q, &q2).unwrap();
        let composed = a.then(&c).unwrap();
        for n in 0..2 {
            assert!(direct.at(n).same_map(composed.at(n)));
        }
    }

    #[test]
    fn order_bounds() {
        let r = order_bound_check(&mod_q(&GradedTheory::point(), &b(5)).unwrap());
        assert!(r.pass);
        assert_eq!(r.degrees[0].exponent, "5");
        assert_eq!(r.degrees[1].exponent, "1");
        let planted = ModQTheory::synthetic(
            &GradedTheory::point(),
            &b(3),
            vec![FgAbGroup::cyclic(9), FgAbGroup::zero()],
        )
        .unwrap();
        assert_eq!(order_bound_check(&planted).failing_degrees(), vec![0]);
        let six = ModQTheory::synthetic(&GradedTheory::point(), &b(6), vec![FgAbGroup::cyclic(12), FgAbGroup::zero()])
            .unwrap();
        assert!(order_bound_check(&six).pass);
        assert!(planted.reduction(0).is_err());
    }
}
