use num_bigint::BigInt;
use serde_json::{json, Value};

use super::report::{Anchor, Item};
use crate::arith;
use crate::coefficients::{
    build_mod_q_sequence, build_pq_sequence, build_qz_bockstein_sequence, build_rational_torsion_sequence,
    colimit_oracle, mod_q, order_bound_check, torsion, DivisibilityIndex,
};
use crate::error::Result;
use crate::random::{random_samples, random_theories, GroupShape};
use crate::theory::{cone_algebra, cone_comparison_map, mapping_cone, tensor_cone_q, GradedTheory, SequenceReport};
use crate::transform::{equivalence_report, relevant_primes, soundness_spot_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    ModQ,
    Pq,
    RationalTorsion,
    QzBockstein,
    ConeLemma,
    OrderBound,
    ColimitOracle,
    Equivalence,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::ModQ,
        Suite::Pq,
        Suite::RationalTorsion,
        Suite::QzBockstein,
        Suite::ConeLemma,
        Suite::OrderBound,
        Suite::ColimitOracle,
        Suite::Equivalence,
    ];

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::ModQ => "mod-q",
            Suite::Pq => "pq",
            Suite::RationalTorsion => "rational-torsion",
            Suite::QzBockstein => "qz-bockstein",
            Suite::ConeLemma => "cone-lemma",
            Suite::OrderBound => "order-bound",
            Suite::ColimitOracle => "colimit-oracle",
            Suite::Equivalence => "equivalence",
        }
    }
}

/// Inputs shared by every suite.
#[derive(Clone, Debug)]
pub struct Params {
    pub theories: Vec<GradedTheory>,
    pub q_max: u64,
    pub p_max: u64,
    pub profile_bound: u64,
    pub seed: u64,
    pub random: usize,
    pub samples: usize,
}

impl Params {
    fn with_random(&self) -> Vec<GradedTheory> {
        let mut all = self.theories.clone();
        all.extend(random_theories(self.seed, self.random, GroupShape::default()));
        all
    }
}

pub fn run(suite: Suite, p: &Params) -> Result<Vec<Item>> {
    match suite {
        Suite::ModQ => mod_q_suite(p),
        Suite::Pq => pq_suite(p),
        Suite::RationalTorsion => Ok(p
            .theories
            .iter()
            .map(|t| sequence_item("rational-torsion", t.name().into(), Anchor::RationalTorsion, &build_rational_torsion_sequence(t)))
            .collect()),
        Suite::QzBockstein => qz_suite(p),
        Suite::ConeLemma => cone_suite(p),
        Suite::OrderBound => order_suite(p),
        Suite::ColimitOracle => colimit_suite(p),
        Suite::Equivalence => equivalence_suite(p),
    }
}

fn b(n: u64) -> BigInt {
    BigInt::from(n)
}

fn sequence_item(check: &str, subject: String, anchor: Anchor, r: &SequenceReport) -> Item {
    let failing: Vec<&str> = r.failing().map(|n| n.label.as_str()).collect();
    let summary = if r.exact {
        format!("exact at all {} nodes", r.nodes.len())
    } else {
        format!("not exact at {}", failing.join(", "))
    };
    Item::check(
        check,
        subject,
        anchor,
        r.exact,
        json!({ "nodes": r.nodes.len(), "failing": failing, "summary": summary }),
    )
}

fn mod_q_suite(p: &Params) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    for t in &p.theories {
        for q in 2..=p.q_max {
            let r = build_mod_q_sequence(t, &b(q))?.verify()?;
            out.push(sequence_item("mod-q", format!("{} q={q}", t.name()), Anchor::ModQSequence, &r));
        }
    }
    Ok(out)
}

fn pq_suite(p: &Params) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    for t in &p.theories {
        for pp in 2..=p.p_max {
            for q in 2..=p.q_max {
                let r = build_pq_sequence(t, &b(pp), &b(q))?.verify()?;
                out.push(sequence_item("pq", format!("{} p={pp} q={q}", t.name()), Anchor::PqSequence, &r));
            }
        }
    }
    Ok(out)
}

fn qz_suite(p: &Params) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    for t in &p.theories {
        for q in 2..=p.q_max {
            let r = build_qz_bockstein_sequence(t, &b(q))?;
            out.push(sequence_item("qz-bockstein", format!("{} q={q}", t.name()), Anchor::QzBockstein, &r));
        }
    }
    Ok(out)
}

fn cone_suite(p: &Params) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    for q in 2..=p.q_max {
        let c = cone_algebra(&b(q))?;
        let pass = c.group(0) == &crate::fgab::FgAbGroup::cyclic(q) && c.group(1).is_zero();
        out.push(Item::check(
            "cone-value",
            format!("C_{q}"),
            Anchor::ConeValue,
            pass,
            json!({ "groups": c.groups(), "summary": format!("K0 = {}, K1 = {}", c.group(0), c.group(1)) }),
        ));
    }
    for pp in 2..=p.p_max {
        for q in 2..=p.q_max {
            let cone = mapping_cone(&cone_comparison_map(&b(pp), &b(q))?);
            let expected = cone_algebra(&b(pp))?;
            let same = cone.theory().same_groups(&expected);
            let exact = cone.puppe_sequence()?.verify()?.exact;
            out.push(Item::check(
                "cone-lemma",
                format!("p={pp} q={q}"),
                Anchor::ConeLemma,
                same && exact,
                json!({
                    "groups": cone.theory().groups(),
                    "matches_cone_algebra": same,
                    "puppe_exact": exact,
                    "summary": format!("cone groups {} vs {}", cone.theory(), expected),
                }),
            ));
        }
    }
    for t in &p.theories {
        for q in 2..=p.q_max {
            let raw = tensor_cone_q(t, &b(q))?;
            let m = mod_q(t, &b(q))?;
            let pass = m.theory().same_groups(&raw.shifted(-2));
            out.push(Item::check(
                "tensor-cone",
                format!("{} q={q}", t.name()),
                Anchor::TensorCone,
                pass,
                json!({ "mod_q": m.theory().groups(), "cone": raw.groups() }),
            ));
        }
    }
    Ok(out)
}

fn order_suite(p: &Params) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    for t in p.with_random() {
        for q in 2..=p.q_max {
            let r = order_bound_check(&mod_q(&t, &b(q))?);
            let exps: Vec<String> = r.degrees.iter().map(|d| d.exponent.to_string()).collect();
            out.push(Item::check(
                "order-bound",
                format!("{} q={q}", t.name()),
                Anchor::OrderBound,
                r.pass,
                json!({
                    "bound": r.bound.to_string(),
                    "exponents": exps,
                    "summary": format!("exponents {} divide {}", exps.join(", "), r.bound),
                }),
            ));
        }
    }
    Ok(out)
}

fn colimit_suite(p: &Params) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    let chain = DivisibilityIndex::factorial();
    for t in p.with_random() {
        let oracle = colimit_oracle(&t, &chain, p.profile_bound)?;
        let closed = torsion(&t).profiles(p.profile_bound)?;
        let mismatched: Vec<usize> = (0..oracle.len()).filter(|&n| oracle[n] != closed[n]).collect();
        let layers: Vec<Value> = closed
            .iter()
            .map(|pr| {
                pr.nonzero()
                    .into_iter()
                    .map(|(pp, c)| json!([pp.value(), c]))
                    .collect::<Value>()
            })
            .collect();
        out.push(Item::check(
            "colimit-oracle",
            format!("{} bound={}", t.name(), p.profile_bound),
            Anchor::Colimit,
            mismatched.is_empty(),
            json!({
                "closed_form": torsion(&t).groups(),
                "layers": layers,
                "mismatched_degrees": mismatched,
            }),
        ));
    }
    Ok(out)
}

/// The ten smallest primes outside `skip`.
pub fn outside_primes(skip: &std::collections::BTreeSet<u64>, count: usize) -> Vec<u64> {
    arith::primes_up_to(1000)
        .into_iter()
        .filter(|p| !skip.contains(p))
        .take(count)
        .collect()
}

fn equivalence_suite(p: &Params) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    for s in random_samples(p.seed, p.samples, GroupShape::default(), 20) {
        let r = equivalence_report(&s)?;
        let extra = outside_primes(&relevant_primes(&s), 10);
        let sound = soundness_spot_check(&s, &extra)?.iter().all(|&x| x);
        let verdicts: Vec<Value> = r
            .cases
            .iter()
            .map(|c| {
                json!({
                    "algebra": c.algebra,
                    "integral": c.integral_iso,
                    "rational": c.rational_iso,
                    "torsion": c.torsion_iso,
                    "mod_p": c.mod_p_iso,
                })
            })
            .collect();
        out.push(Item::check(
            "equivalence",
            s.name.clone(),
            Anchor::Equivalence,
            r.biconditionals_hold,
            json!({ "primes": r.primes, "cases": verdicts }),
        ));
        out.push(Item::check(
            "relevant-primes",
            s.name.clone(),
            Anchor::RelevantPrimes,
            sound,
            json!({ "relevant": r.primes, "spot_checked": extra }),
        ));
    }
    Ok(out)
}
