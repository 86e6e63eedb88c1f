use std::collections::{BTreeMap, BTreeSet};

use kkcoeff::fgab::{smith_normal_form, tensor, tor, verify_exact, FgAbGroup, GroupHom, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows).prop_map(move |r| {
        if rows == 0 {
            IntMatrix::zeros(0, cols)
        } else {
            IntMatrix::from_rows(&r)
        }
    })
}

fn any_matrix(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| matrix(r, c, bound))
}

fn finite_group() -> impl Strategy<Value = FgAbGroup> {
    prop::collection::vec(1u64..=12, 0..=3)
        .prop_filter("small order", |v| v.iter().product::<u64>() <= 96)
        .prop_map(|v| FgAbGroup::from_cyclic_orders(&v.into_iter().map(BigInt::from).collect::<Vec<_>>()))
}

/// A random well-defined map: entry `(i, j)` is a multiple of `dᵢ / gcd(dᵢ, oⱼ)`.
fn hom_between(a: FgAbGroup, b: FgAbGroup) -> impl Strategy<Value = GroupHom> {
    let (n, m) = (a.num_generators(), b.num_generators());
    prop::collection::vec(-6i64..=6, n * m).prop_map(move |raw| {
        let (src, tgt) = (a.generator_orders(), b.generator_orders());
        let mut mat = IntMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                let step = if tgt[i].is_zero() {
                    if src[j].is_zero() { BigInt::one() } else { BigInt::zero() }
                } else {
                    &tgt[i] / tgt[i].gcd(&src[j])
                };
                mat.set(i, j, step * raw[i * n + j]);
            }
        }
        GroupHom::new(a.clone(), b.clone(), mat).unwrap()
    })
}

fn finite_hom() -> impl Strategy<Value = GroupHom> {
    (finite_group(), finite_group()).prop_flat_map(|(a, b)| hom_between(a, b))
}

fn elements(g: &FgAbGroup) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for d in g.torsion() {
        let d = d.to_u64().unwrap();
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut w = v.clone();
                    w.push(BigInt::from(x));
                    w
                })
            })
            .collect();
    }
    out
}

fn image_of(h: &GroupHom, x: &[BigInt]) -> Vec<BigInt> {
    let mut y = h.apply(x);
    h.target().reduce(&mut y);
    y
}

fn element_order(g: &FgAbGroup, x: &[BigInt]) -> BigInt {
    g.torsion()
        .iter()
        .zip(x)
        .fold(BigInt::one(), |acc, (d, xi)| acc.lcm(&(d / d.gcd(xi))))
}

/// Number of elements of each order; determines a finite abelian group.
fn order_census<'a>(g: &FgAbGroup, xs: impl Iterator<Item = &'a Vec<BigInt>>) -> BTreeMap<BigInt, usize> {
    let mut m = BTreeMap::new();
    for x in xs {
        *m.entry(element_order(g, x)).or_insert(0) += 1;
    }
    m
}

fn census(g: &FgAbGroup) -> BTreeMap<BigInt, usize> {
    let e = elements(g);
    order_census(g, e.iter())
}

fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (0..n)
            .flat_map(|last| {
                subsets(last, k - 1).into_iter().map(move |mut s| {
                    s.push(last);
                    s
                })
            })
            .collect()
    }
    let mut g = BigInt::zero();
    for r in subsets(m.rows(), k) {
        for c in subsets(m.cols(), k) {
            g = g.gcd(&m.select_rows(&r).select_cols(&c).determinant());
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_factorization(m in any_matrix(8, 50)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&(&s.u * &m) * &s.v), &s.d);
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        prop_assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c {
                    prop_assert!(s.d.get(r, c).is_zero());
                }
            }
        }
        let d = s.elementary_divisors();
        prop_assert!(d.iter().all(|x| x.is_positive()));
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in s.rank..m.rows().min(m.cols()) {
            prop_assert!(s.d.get(i, i).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_matches_determinantal_divisors(m in any_matrix(4, 9)) {
        let d = smith_normal_form(&m).elementary_divisors();
        let mut prod = BigInt::one();
        for k in 1..=m.rows().min(m.cols()) {
            let dk = determinantal_divisor(&m, k);
            if k <= d.len() {
                prod *= &d[k - 1];
                prop_assert_eq!(&dk, &prod);
            } else {
                prop_assert!(dk.is_zero());
            }
        }
    }

    #[test]
    fn kernel_image_cokernel_by_enumeration(h in finite_hom()) {
        let src = elements(h.source());
        let kernel: Vec<Vec<BigInt>> = src
            .iter()
            .filter(|x| h.target().is_zero_element(&h.apply(x)))
            .cloned()
            .collect();
        let image: BTreeSet<Vec<BigInt>> = src.iter().map(|x| image_of(&h, x)).collect();
        let image: Vec<Vec<BigInt>> = image.into_iter().collect();

        prop_assert_eq!(census(&h.kernel()), order_census(h.source(), kernel.iter()));
        prop_assert_eq!(census(&h.image()), order_census(h.target(), image.iter()));
        let target_order = h.target().order().unwrap();
        prop_assert_eq!(h.cokernel().order().unwrap(), target_order / BigInt::from(image.len()));
        prop_assert_eq!(h.is_injective(), kernel.len() == 1);
    }

    #[test]
    fn exactness_by_enumeration(f in finite_hom(), random_g in any::<bool>(), seed in 0u64..1000) {
        let b = f.target().clone();
        let g = if random_g {
            let c = FgAbGroup::from_cyclic_orders(&[BigInt::from(seed % 6 + 2)]);
            let n = b.num_generators();
            let mut mat = IntMatrix::zeros(c.num_generators(), n);
            let d = &c.torsion()[0];
            for j in 0..n {
                let step = d / d.gcd(&b.torsion()[j]);
                mat.set(0, j, step * BigInt::from((seed >> j) % 3));
            }
            GroupHom::new(b.clone(), c, mat).unwrap()
        } else {
            f.cokernel_with_projection().1
        };
        let mid = elements(&b);
        let image: BTreeSet<Vec<BigInt>> = elements(f.source()).iter().map(|x| image_of(&f, x)).collect();
        let kernel: BTreeSet<Vec<BigInt>> = mid
            .iter()
            .filter(|y| g.target().is_zero_element(&g.apply(y)))
            .cloned()
            .collect();
        let report = verify_exact(&[f.clone(), g]).unwrap();
        prop_assert_eq!(report.exact, image == kernel);
    }

    #[test]
    fn tensor_and_tor_of_cyclics(a in 0u64..40, b in 0u64..40) {
        let (ga, gb) = (FgAbGroup::cyclic(a), FgAbGroup::cyclic(b));
        let g = a.gcd(&b);
        prop_assert_eq!(tensor(&ga, &gb), FgAbGroup::cyclic(g));
        let t = if a == 0 || b == 0 { FgAbGroup::zero() } else { FgAbGroup::cyclic(g) };
        prop_assert_eq!(tor(&ga, &gb), t);
    }

    #[test]
    fn bifunctors_are_symmetric_and_additive(a in finite_group(), b in finite_group(), c in finite_group(), r in 0usize..3) {
        let a = a.direct_sum(&FgAbGroup::free(r));
        prop_assert_eq!(tensor(&a, &b), tensor(&b, &a));
        prop_assert_eq!(tor(&a, &b), tor(&b, &a));
        let bc = b.direct_sum(&c);
        prop_assert_eq!(tensor(&a, &bc), tensor(&a, &b).direct_sum(&tensor(&a, &c)));
        prop_assert_eq!(tor(&a, &bc), tor(&a, &b).direct_sum(&tor(&a, &c)));
        prop_assert_eq!(tensor(&a, &FgAbGroup::free(1)), a.clone());
        prop_assert!(tor(&a, &FgAbGroup::free(2)).is_zero());
        if a.is_finite() {
            prop_assert_eq!(tensor(&a, &b).order(), tor(&a, &b).order());
        }
    }

    #[test]
    fn canonical_form_by_census(orders in prop::collection::vec(1u64..=10, 0..=3)) {
        let big: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
        let g = FgAbGroup::from_cyclic_orders(&big);
        // census of the raw product ∏ ℤ/oᵢ
        let mut raw = BTreeMap::new();
        let mut all = vec![Vec::<u64>::new()];
        for &o in &orders {
            all = all.into_iter().flat_map(|v| (0..o).map(move |x| { let mut w = v.clone(); w.push(x); w })).collect();
        }
        for x in &all {
            let ord = orders.iter().zip(x).fold(1u64, |acc, (&o, &xi)| acc.lcm(&(o / o.gcd(&xi))));
            *raw.entry(BigInt::from(ord)).or_insert(0usize) += 1;
        }
        prop_assert_eq!(census(&g), raw);
    }
}

#[test]
fn zero_group_is_total() {
    let z = FgAbGroup::zero();
    let id = GroupHom::identity(&z);
    assert!(id.kernel().is_zero() && id.cokernel().is_zero() && id.is_isomorphism());
    assert!(verify_exact(&[id.clone(), id]).unwrap().exact);
    assert!(tensor(&z, &FgAbGroup::cyclic(5)).is_zero());
}
