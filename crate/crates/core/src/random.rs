//! Seeded generators for groups, theories and transformation samples.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fgab::{FgAbGroup, GroupHom, IntMatrix};
use crate::theory::{DegreewiseMap, GradedTheory, Period};
use crate::transform::{Role, TransformCase, TransformationSample};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct GroupShape {
    pub max_rank: usize,
    pub max_factor: u64,
    pub max_cyclic: usize,
}

impl Default for GroupShape {
    fn default() -> Self {
        GroupShape {
            max_rank: 3,
            max_factor: 64,
            max_cyclic: 3,
        }
    }
}

/// A random group whose invariant factors are at most `max_factor`.
pub fn random_group<R: Rng>(rng: &mut R, shape: GroupShape) -> FgAbGroup {
    let rank = rng.gen_range(0..=shape.max_rank);
    let count = rng.gen_range(0..=shape.max_cyclic);
    // a chain d₁ | d₂ | … keeps every factor within the bound
    let mut torsion: Vec<BigInt> = Vec::new();
    let mut current = 1u64;
    for _ in 0..count {
        let choices: Vec<u64> = (2..=shape.max_factor / current).collect();
        let Some(&k) = choices.choose(rng) else { break };
        current *= k;
        torsion.push(current.into());
    }
    let torsion = shuffle_chain(rng, torsion);
    FgAbGroup::new(rank, torsion).expect("constructed chain")
}

// occasionally collapse the chain to a single factor for variety
fn shuffle_chain<R: Rng>(rng: &mut R, torsion: Vec<BigInt>) -> Vec<BigInt> {
    if torsion.len() > 1 && rng.gen_bool(0.25) {
        vec![torsion.last().unwrap().clone()]
    } else {
        torsion
    }
}

pub fn random_theory<R: Rng>(rng: &mut R, name: &str, shape: GroupShape) -> GradedTheory {
    GradedTheory::complex(name, random_group(rng, shape), random_group(rng, shape))
}

/// A random homomorphism with entries roughly bounded by `max_entry`.
pub fn random_hom<R: Rng>(rng: &mut R, source: &FgAbGroup, target: &FgAbGroup, max_entry: i64) -> GroupHom {
    let so = source.generator_orders();
    let to = target.generator_orders();
    let mut m = IntMatrix::zeros(to.len(), so.len());
    for (j, d) in so.iter().enumerate() {
        for (i, e) in to.iter().enumerate() {
            let step = if d == &BigInt::from(0) {
                BigInt::from(1)
            } else if e == &BigInt::from(0) {
                // torsion cannot reach free coordinates
                continue;
            } else {
                e / d.gcd(e)
            };
            let reach = (BigInt::from(max_entry) / &step).max(BigInt::from(1));
            let reach: i64 = reach.try_into().unwrap_or(1);
            m.set(i, j, step * rng.gen_range(-reach..=reach));
        }
    }
    GroupHom::new(source.clone(), target.clone(), m).expect("orders respected by construction")
}

/// A random automorphism: unimodular free block, unit diagonal on torsion, arbitrary shear.
pub fn random_automorphism<R: Rng>(rng: &mut R, g: &FgAbGroup, max_entry: i64) -> GroupHom {
    let r = g.rank();
    let orders = g.generator_orders();
    let n = orders.len();
    let mut m = IntMatrix::identity(n);
    for _ in 0..2 * r {
        let (a, b) = (rng.gen_range(0..r), rng.gen_range(0..r));
        if a != b {
            m.add_row_multiple(a, b, &BigInt::from(rng.gen_range(-2..=2)));
        }
    }
    for i in r..n {
        let d = &orders[i];
        let units: Vec<i64> = (1..=max_entry.max(1)).filter(|u| BigInt::from(*u).gcd(d) == BigInt::from(1)).collect();
        m.set(i, i, BigInt::from(*units.choose(rng).unwrap_or(&1)));
        for j in 0..r {
            m.set(i, j, BigInt::from(rng.gen_range(-max_entry..=max_entry)));
        }
    }
    GroupHom::new(g.clone(), g.clone(), m).expect("block triangular automorphism")
}

/// `count` single-case samples: a third generic, a third automorphisms, a third
/// automorphisms spoiled in one generator by a small prime.
pub fn random_samples(seed: u64, count: usize, shape: GroupShape, max_entry: i64) -> Vec<TransformationSample> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let kind = i % 3;
            let source = random_theory(&mut rng, &format!("random-{i}"), shape);
            let (target, homs) = match kind {
                0 => {
                    let target = random_theory(&mut rng, &format!("random-{i}'"), shape);
                    let homs = source
                        .degrees()
                        .map(|n| random_hom(&mut rng, source.group(n), target.group(n), max_entry))
                        .collect();
                    (target, homs)
                }
                _ => {
                    let homs = source
                        .degrees()
                        .map(|n| {
                            let a = random_automorphism(&mut rng, source.group(n), max_entry);
                            if kind == 2 && rng.gen_bool(0.5) {
                                let p = *[2i64, 3, 5, 7].choose(&mut rng).unwrap();
                                spoil(&mut rng, &a, p)
                            } else {
                                a
                            }
                        })
                        .collect();
                    (source.clone(), homs)
                }
            };
            let map = DegreewiseMap::new(source, target, homs).expect("degreewise shapes match");
            TransformationSample::new(
                format!("random sample {i}"),
                Role::Generic,
                vec![TransformCase {
                    algebra: format!("random-{i}"),
                    map,
                }],
            )
        })
        .collect()
}

fn spoil<R: Rng>(rng: &mut R, h: &GroupHom, p: i64) -> GroupHom {
    let n = h.source().num_generators();
    if n == 0 {
        return h.clone();
    }
    let j = rng.gen_range(0..n);
    let mut m = h.matrix().clone();
    for i in 0..m.rows() {
        let v = m.get(i, j) * p;
        m.set(i, j, v);
    }
    GroupHom::new(h.source().clone(), h.target().clone(), m).expect("scaling a column keeps orders")
}

/// Random complex-periodic theories for property suites.
pub fn random_theories(seed: u64, count: usize, shape: GroupShape) -> Vec<GradedTheory> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| random_theory(&mut rng, &format!("random-{i}"), shape))
        .collect()
}

pub fn random_period8_theory<R: Rng>(rng: &mut R, shape: GroupShape) -> GradedTheory {
    let groups = (0..8).map(|_| random_group(rng, shape)).collect();
    GradedTheory::new("random-real", Period::Real, groups).expect("eight classes")
}
