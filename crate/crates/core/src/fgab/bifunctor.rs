use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::FgAbGroup;

fn pairwise(a: &FgAbGroup, b: &FgAbGroup, f: impl Fn(&BigInt, &BigInt) -> Option<BigInt>) -> FgAbGroup {
    let mut orders = Vec::new();
    for x in a.generator_orders() {
        for y in b.generator_orders() {
            if let Some(o) = f(&x, &y) {
                orders.push(o);
            }
        }
    }
    FgAbGroup::from_cyclic_orders(&orders)
}

/// `a ⊗ b`, using `ℤ ⊗ G = G` and `ℤ/m ⊗ ℤ/n = ℤ/gcd(m, n)`.
pub fn tensor(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    // gcd(0, n) = n covers the free cases
    pairwise(a, b, |x, y| Some(x.gcd(y)))
}

/// `Tor(a, b)`: only finite cyclic pairs contribute, `Tor(ℤ/m, ℤ/n) = ℤ/gcd(m, n)`.
pub fn tor(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    pairwise(a, b, |x, y| (!x.is_zero() && !y.is_zero()).then(|| x.gcd(y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        assert_eq!(tor(&FgAbGroup::cyclic(6), &FgAbGroup::cyclic(4)), FgAbGroup::cyclic(2));
        assert_eq!(
            tensor(&FgAbGroup::free(2), &FgAbGroup::cyclic(7)),
            FgAbGroup::from_cyclic_orders(&[7.into(), 7.into()])
        );
        assert!(tor(&FgAbGroup::free(3), &FgAbGroup::cyclic(12)).is_zero());
        assert_eq!(tensor(&FgAbGroup::free(2), &FgAbGroup::free(3)), FgAbGroup::free(6));
        assert!(tensor(&FgAbGroup::cyclic(4), &FgAbGroup::cyclic(9)).is_zero());
    }
}
