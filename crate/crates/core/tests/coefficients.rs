use kkcoeff::admissible::AdmissibleGroup;
use kkcoeff::coefficients::{
    annihilator_bound, build_mod_q_sequence, build_pq_sequence, build_qz_bockstein_sequence,
    build_rational_torsion_sequence, colimit_oracle, mod_q, order_bound_check, rational, rational_product_transport,
    torsion, transition, BilinearBlock, DivisibilityIndex, Element, ModQTheory, Pairing, Triple,
};
use kkcoeff::fgab::{FgAbGroup, GroupHom};
use kkcoeff::random::{random_hom, random_theories, random_theory, rng, GroupShape};
use kkcoeff::theory::{mapping_cone, Catalog, DegreewiseMap, GradedTheory, LongSequence};
use kkcoeff::wire::WireInt;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn b(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `B/q ⊕ B[q]` from gcds alone: `ℤ/q` per free summand and `ℤ/gcd(d, q)` per cyclic one, twice.
fn mod_q_oracle(t: &GradedTheory, q: u64, n: i64) -> FgAbGroup {
    let q = b(q);
    let above = t.group(n);
    let below = t.group(n - 1);
    let mut orders: Vec<BigInt> = vec![q.clone(); above.rank()];
    orders.extend(above.torsion().iter().map(|d| d.gcd(&q)));
    orders.extend(below.torsion().iter().map(|d| d.gcd(&q)));
    FgAbGroup::from_cyclic_orders(&orders)
}

fn torsion_oracle(t: &GradedTheory, n: i64) -> AdmissibleGroup {
    AdmissibleGroup::new(0, 0, t.group(n).rank(), t.group(n - 1).torsion().to_vec()).unwrap()
}

fn ranks_add_up(seq: &LongSequence) -> bool {
    let maps = seq.maps();
    (0..maps.len()).all(|i| {
        let into = &maps[i];
        let out = &maps[(i + 1) % maps.len()];
        into.target().rank() == into.image().rank() + out.image().rank()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mod_q_values_match_gcd_oracle(seed in any::<u64>(), q in 2u64..120) {
        let t = random_theory(&mut rng(seed), "t", GroupShape::default());
        let m = mod_q(&t, &b(q)).unwrap();
        for n in t.degrees() {
            prop_assert_eq!(m.group(n), &mod_q_oracle(&t, q, n));
        }
    }

    #[test]
    fn mod_q_sequences_are_exact(seed in any::<u64>(), q in 2u64..40) {
        let t = random_theory(&mut rng(seed), "t", GroupShape::default());
        let seq = build_mod_q_sequence(&t, &b(q)).unwrap();
        prop_assert!(seq.verify().unwrap().exact);
        prop_assert!(ranks_add_up(&seq));
    }

    #[test]
    fn pq_sequences_are_exact(seed in any::<u64>(), p in 2u64..16, q in 2u64..16) {
        let t = random_theory(&mut rng(seed), "t", GroupShape::default());
        let seq = build_pq_sequence(&t, &b(p), &b(q)).unwrap();
        prop_assert!(seq.verify().unwrap().exact);
    }

    #[test]
    fn qz_and_rational_sequences_hold(seed in any::<u64>(), q in 2u64..30) {
        let t = random_theory(&mut rng(seed), "t", GroupShape::default());
        prop_assert!(build_qz_bockstein_sequence(&t, &b(q)).unwrap().exact);
        prop_assert!(build_rational_torsion_sequence(&t).exact);
    }

    #[test]
    fn transitions_compose(seed in any::<u64>(), q in 2u64..8, s in 1u64..6, s2 in 1u64..6) {
        let t = random_theory(&mut rng(seed), "t", GroupShape::default());
        let (q1, q2) = (b(q) * b(s), b(q) * b(s) * b(s2));
        let first = transition(&t, &b(q), &q1).unwrap();
        let second = transition(&t, &q1, &q2).unwrap();
        let direct = transition(&t, &b(q), &q2).unwrap();
        let composite = first.then(&second).unwrap();
        for n in t.degrees() {
            prop_assert!(composite.at(n).same_map(direct.at(n)));
        }
        let id = transition(&t, &b(q), &b(q)).unwrap();
        prop_assert!(id.homs().iter().all(GroupHom::is_isomorphism));
        prop_assert!(transition(&t, &b(q), &(b(q) + 1u32)).is_err());
    }

    #[test]
    fn order_bounds_hold(seed in any::<u64>(), q in 2u64..=100) {
        let t = random_theory(&mut rng(seed), "t", GroupShape::default());
        let m = mod_q(&t, &b(q)).unwrap();
        let r = order_bound_check(&m);
        prop_assert!(r.pass, "{:?}", r);
        for n in t.degrees() {
            prop_assert!(annihilator_bound(&b(q)).is_multiple_of(&m.group(n).torsion_exponent()));
        }
    }

    #[test]
    fn torsion_matches_closed_form(seed in any::<u64>()) {
        let t = random_theory(&mut rng(seed), "t", GroupShape::default());
        let tt = torsion(&t);
        for n in t.degrees() {
            prop_assert_eq!(tt.group(n), &torsion_oracle(&t, n));
            prop_assert_eq!(rational(&t)[n as usize].q_rank(), t.group(n).rank());
        }
    }

    #[test]
    fn rationalization_preserves_rank_exactness(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = GroupShape::default();
        let a = random_theory(&mut r, "a", shape);
        let c = random_theory(&mut r, "c", shape);
        let homs = a.degrees().map(|n| random_hom(&mut r, a.group(n), c.group(n), 5)).collect();
        let cone = mapping_cone(&DegreewiseMap::new(a, c, homs).unwrap());
        prop_assert!(ranks_add_up(&cone.puppe_sequence().unwrap()));
    }

    #[test]
    fn free_products_transport_unchanged(k in -5i64..=5, x in -3i64..=3, y in -3i64..=3) {
        let w = |v: i64| vec![WireInt(v.into())];
        let block = BilinearBlock { left_degree: 0, right_degree: 0, target_degree: 0, values: vec![vec![w(k)]] };
        let pairing = Pairing::product(GradedTheory::point(), vec![block]).unwrap();
        let triple = Triple { x: Element::new(0, &[x]), y: Element::new(0, &[y]), z: Element::new(0, &[1]) };
        let r = rational_product_transport(&pairing, &[triple]).unwrap();
        prop_assert_eq!(&r.rational.blocks[0].values, &vec![vec![w(k)]]);
        prop_assert!(r.consistent);
    }
}

#[test]
fn point_mod_seven() {
    let m = mod_q(&GradedTheory::point(), &b(7)).unwrap();
    assert_eq!(m.group(0), &FgAbGroup::cyclic(7));
    assert!(m.group(1).is_zero());
}

#[test]
fn catalog_torsion_values() {
    let c = Catalog::builtin();
    let point = torsion(&c.get("point").unwrap().theory);
    assert_eq!(point.group(0), &AdmissibleGroup::circle(1));
    assert!(point.group(1).is_zero());
    for n in [2u64, 3, 4, 5, 7, 13] {
        let t = torsion(&c.resolve(&format!("cuntz:{n}")).unwrap().theory);
        assert!(t.group(0).is_zero());
        let expected = if n == 2 { AdmissibleGroup::zero() } else { AdmissibleGroup::new(0, 0, 0, vec![b(n - 1)]).unwrap() };
        assert_eq!(t.group(1), &expected);
    }
}

#[test]
fn catalog_sequences_are_exact() {
    let c = Catalog::builtin();
    for e in c.entries() {
        assert!(build_rational_torsion_sequence(&e.theory).exact, "{}", e.name);
        for q in 2..=50 {
            assert!(build_mod_q_sequence(&e.theory, &b(q)).unwrap().verify().unwrap().exact, "{} {q}", e.name);
        }
        for q in 2..=20 {
            assert!(build_qz_bockstein_sequence(&e.theory, &b(q)).unwrap().exact, "{} {q}", e.name);
        }
    }
}

#[test]
fn colimit_agrees_on_random_theories() {
    let chain = DivisibilityIndex::factorial();
    for t in random_theories(7, 20, GroupShape::default()) {
        for bound in [16, 64] {
            assert_eq!(
                colimit_oracle(&t, &chain, bound).unwrap(),
                torsion(&t).profiles(bound).unwrap(),
                "{t} at {bound}"
            );
        }
    }
    assert!(colimit_oracle(&GradedTheory::point(), &chain, 1).is_err());
}

#[test]
fn planted_exponent_fails_the_order_bound() {
    let planted = ModQTheory::synthetic(&GradedTheory::point(), &b(3), vec![FgAbGroup::cyclic(9), FgAbGroup::zero()])
        .unwrap();
    let r = order_bound_check(&planted);
    assert!(!r.pass);
    assert_eq!(r.failing_degrees(), vec![0]);
}

#[test]
fn annihilator_bound_doubles_at_two_mod_four() {
    for q in 2..200u64 {
        let expected = if q % 4 == 2 { 2 * q } else { q };
        assert_eq!(annihilator_bound(&b(q)), b(expected));
    }
}
