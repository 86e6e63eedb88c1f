//! Small integer helpers shared by the group modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exponent of `p` in `n` (`n ≠ 0`).
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

/// Distinct prime divisors of `|n|` by trial division, ascending. Empty for 0 and ±1.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p: u64 = 2;
    while BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime cofactor exceeds u64"));
    }
    out
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b)
}

pub fn factorial(k: u64) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_valuation() {
        assert_eq!(prime_factors(&BigInt::from(360)), vec![2, 3, 5]);
        assert_eq!(prime_factors(&BigInt::from(97)), vec![97]);
        assert!(prime_factors(&BigInt::from(1)).is_empty());
        assert_eq!(valuation(&BigInt::from(96), 2), 5);
        assert_eq!(valuation(&factorial(10), 3), 4);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
