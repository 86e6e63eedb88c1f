//! Acceptance battery: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kkcoeff::cli::outside_primes;
use kkcoeff::coefficients::{
    build_mod_q_sequence, build_pq_sequence, build_qz_bockstein_sequence, build_rational_torsion_sequence,
    colimit_oracle, mod_q, order_bound_check, torsion, DivisibilityIndex, ModQTheory,
};
use kkcoeff::fgab::{smith_normal_form, FgAbGroup, IntMatrix};
use kkcoeff::random::{random_samples, random_theories, rng, GroupShape};
use kkcoeff::theory::{cone_algebra, cone_comparison_map, mapping_cone, Catalog, GradedTheory};
use kkcoeff::transform::{equivalence_report, relevant_primes, soundness_spot_check};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

const SEED: u64 = 20;

const CONE_VALUES_LIMIT: Duration = Duration::from_secs(1);
const CONE_LEMMA_LIMIT: Duration = Duration::from_secs(5);
const COLIMIT_LIMIT: Duration = Duration::from_secs(60);
const EQUIVALENCE_LIMIT: Duration = Duration::from_secs(30);
const COLIMIT_BOUND: u64 = 1 << 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn b(n: u64) -> BigInt {
    BigInt::from(n)
}

fn catalog() -> Vec<GradedTheory> {
    Catalog::builtin().entries().iter().map(|e| e.theory.clone()).collect()
}

fn timed(limit: Duration, run: impl FnOnce() -> (usize, usize)) -> Outcome {
    let start = Instant::now();
    let (failures, total) = run();
    let took = start.elapsed();
    Outcome {
        pass: failures == 0 && took < limit,
        detail: format!("{failures} failures in {total} cases, {:.2?} (limit {limit:?})", took),
    }
}

fn counted(failures: usize, total: usize) -> Outcome {
    Outcome {
        pass: failures == 0,
        detail: format!("{failures} failures in {total} cases"),
    }
}

fn cone_values() -> Outcome {
    timed(CONE_VALUES_LIMIT, || {
        let bad = (2..=200u64)
            .filter(|&q| {
                let c = cone_algebra(&b(q)).unwrap();
                c.group(0) != &FgAbGroup::cyclic(q) || !c.group(1).is_zero()
            })
            .count();
        (bad, 199)
    })
}

fn cone_lemma() -> Outcome {
    timed(CONE_LEMMA_LIMIT, || {
        let mut bad = 0;
        for p in 2..=30u64 {
            let expected = cone_algebra(&b(p)).unwrap();
            for q in 2..=30u64 {
                let cone = mapping_cone(&cone_comparison_map(&b(p), &b(q)).unwrap());
                if !cone.theory().same_groups(&expected) {
                    bad += 1;
                }
            }
        }
        (bad, 29 * 29)
    })
}

fn mod_q_sequences() -> Outcome {
    let mut total = 0;
    let mut bad = 0;
    for t in catalog() {
        for q in 2..=50u64 {
            total += 1;
            if !build_mod_q_sequence(&t, &b(q)).unwrap().verify().unwrap().exact {
                bad += 1;
            }
        }
    }
    counted(bad, total)
}

fn pq_sequences() -> Outcome {
    let mut total = 0;
    let mut bad = 0;
    for t in catalog() {
        for p in 2..=20u64 {
            for q in 2..=20u64 {
                total += 1;
                if !build_pq_sequence(&t, &b(p), &b(q)).unwrap().verify().unwrap().exact {
                    bad += 1;
                }
            }
        }
    }
    counted(bad, total)
}

fn colimit() -> Outcome {
    timed(COLIMIT_LIMIT, || {
        let chain = DivisibilityIndex::factorial();
        let theories = random_theories(SEED, 100, GroupShape::default());
        let bad = theories
            .iter()
            .filter(|t| {
                colimit_oracle(t, &chain, COLIMIT_BOUND).unwrap() != torsion(t).profiles(COLIMIT_BOUND).unwrap()
            })
            .count();
        (bad, theories.len())
    })
}

fn rational_torsion() -> Outcome {
    let all = catalog();
    let bad = all.iter().filter(|t| !build_rational_torsion_sequence(t).exact).count();
    counted(bad, all.len())
}

fn qz_bockstein() -> Outcome {
    let mut total = 0;
    let mut bad = 0;
    for t in catalog() {
        for q in 2..=20u64 {
            total += 1;
            if !build_qz_bockstein_sequence(&t, &b(q)).unwrap().exact {
                bad += 1;
            }
        }
    }
    counted(bad, total)
}

fn order_bounds() -> Outcome {
    let mut bases = catalog();
    bases.extend(random_theories(SEED, 50, GroupShape::default()));
    let mut total = 0;
    let mut bad = 0;
    for t in &bases {
        for q in 2..=100u64 {
            total += 1;
            if !order_bound_check(&mod_q(t, &b(q)).unwrap()).pass {
                bad += 1;
            }
        }
    }
    let planted = ModQTheory::synthetic(&GradedTheory::point(), &b(3), vec![FgAbGroup::cyclic(9), FgAbGroup::zero()])
        .unwrap();
    let planted_fails = !order_bound_check(&planted).pass;
    Outcome {
        pass: bad == 0 && planted_fails,
        detail: format!(
            "{bad} failures in {total} cases, planted Z/9 at q=3 {}",
            if planted_fails { "rejected" } else { "ACCEPTED" }
        ),
    }
}

fn equivalence() -> Outcome {
    let shape = GroupShape {
        max_factor: 60,
        ..GroupShape::default()
    };
    let start = Instant::now();
    let samples = random_samples(SEED, 500, shape, 20);
    let violations = samples
        .iter()
        .filter(|s| !equivalence_report(s).unwrap().biconditionals_hold)
        .count();
    let unsound = samples
        .iter()
        .take(50)
        .filter(|s| {
            let extra = outside_primes(&relevant_primes(s), 10);
            extra.len() != 10 || !soundness_spot_check(s, &extra).unwrap().iter().all(|&x| x)
        })
        .count();
    let took = start.elapsed();
    Outcome {
        pass: violations == 0 && unsound == 0 && took < EQUIVALENCE_LIMIT,
        detail: format!(
            "{violations} violations in 500 samples, {unsound} unsound of 50 spot checks, {took:.2?} (limit {EQUIVALENCE_LIMIT:?})"
        ),
    }
}

fn snf_oracle() -> Outcome {
    let mut r = rng(SEED);
    let mut bad = 0;
    for _ in 0..1000 {
        let (rows, cols) = (r.gen_range(1..=8), r.gen_range(1..=8));
        let entries: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-50..=50)).collect()).collect();
        let m = IntMatrix::from_rows(&entries);
        let s = smith_normal_form(&m);
        let factored = &(&s.u * &m) * &s.v == s.d;
        let unimodular = s.u.determinant().abs().is_one() && s.v.determinant().abs().is_one();
        let diagonal = (0..rows).all(|i| (0..cols).all(|j| i == j || s.d.get(i, j).is_zero()));
        let d = s.elementary_divisors();
        let chain = d.iter().all(|x| x.is_positive()) && d.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if !(factored && unimodular && diagonal && chain) {
            bad += 1;
        }
    }
    counted(bad, 1000)
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_kkcoeff"))
            .args(["verify", "--seed", &SEED.to_string(), "--format", "json"])
            .env_remove("KKCOEFF_CATALOG")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        pass: same && a.status.success(),
        detail: format!(
            "{} bytes, {}, exit {:?}",
            a.stdout.len(),
            if same { "byte-identical" } else { "DIFFERENT" },
            a.status.code()
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("cone values K0(C_q) = Z/q, K1 = 0 for q in 2..200", cone_values),
        ("cone of the comparison map equals C_p for p, q in 2..30", cone_lemma),
        ("mod-q sequences exact, catalog x q <= 50", mod_q_sequences),
        ("p-q sequences exact, catalog x p, q in 2..20", pq_sequences),
        ("torsion closed form equals colimit oracle at bound 1024, 100 theories", colimit),
        ("rational/torsion sequence structurally exact, catalog", rational_torsion),
        ("Q/Z Bockstein sequence exact, catalog x q <= 20", qz_bockstein),
        ("order bounds for q <= 100, catalog and random bases", order_bounds),
        ("equivalence biconditionals on 500 samples, prime soundness", equivalence),
        ("Smith normal form on 1000 random matrices", snf_oracle),
        ("verify battery JSON is deterministic", determinism),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        all &= o.pass;
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
