//! Middle terms `X` of short exact sequences `0 → C → X → K → 0`.
//!
//! For finite p-groups of types `μ` (sub) and `ν` (quotient) a group of type `λ`
//! is an extension iff the Littlewood–Richardson coefficient `c^λ_{μν}` is
//! positive, so candidates are enumerated prime by prime. When the subgroup has
//! a free part the extension classes in `⊕ C/kᵢC` are enumerated directly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{FgAbGroup, IntMatrix, Presentation};
use crate::arith;

/// Cap on enumerated extension classes when the subgroup is infinite.
const CLASS_ENUMERATION_CAP: usize = 4096;
/// Cap on the number of alternatives listed in a resolution.
const ALTERNATIVES_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMode {
    SplitAssumed,
    ForcedUnique,
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionResolution {
    pub group: FgAbGroup,
    pub mode: ExtensionMode,
    /// Other admissible middle terms (never includes `group`).
    pub alternatives: Vec<FgAbGroup>,
    /// Number of isomorphism types satisfying every constraint, when it was fully counted.
    pub candidate_count: Option<u64>,
}

/// Resolves the middle term of `0 → cokernel_term → X → kernel_term → 0`.
///
/// The direct sum is always returned as the group. The mode records whether it
/// is the only extension whose torsion exponent divides `annihilator_bound`.
pub fn solve_extension(
    kernel_term: &FgAbGroup,
    cokernel_term: &FgAbGroup,
    annihilator_bound: Option<&BigInt>,
) -> ExtensionResolution {
    let split = kernel_term.direct_sum(cokernel_term);
    let fits = |g: &FgAbGroup| {
        annihilator_bound.map_or(true, |b| b.is_multiple_of(&g.torsion_exponent()))
    };

    let (candidates, complete) = if kernel_term.is_free() || cokernel_term.is_zero() {
        (vec![split.clone()], true)
    } else if cokernel_term.is_finite() {
        finite_candidates(kernel_term, cokernel_term, annihilator_bound)
    } else {
        class_candidates(kernel_term, cokernel_term)
    };

    let candidates: Vec<FgAbGroup> = candidates.into_iter().filter(|g| fits(g)).collect();
    let count = complete.then_some(candidates.len() as u64);
    let unique = complete && candidates.len() == 1 && candidates[0] == split;
    let alternatives: Vec<FgAbGroup> = candidates
        .into_iter()
        .filter(|g| *g != split)
        .take(ALTERNATIVES_CAP)
        .collect();
    let mode = if unique {
        ExtensionMode::ForcedUnique
    } else if annihilator_bound.is_some() {
        ExtensionMode::Ambiguous
    } else {
        ExtensionMode::SplitAssumed
    };
    ExtensionResolution {
        group: split,
        mode,
        alternatives,
        candidate_count: count,
    }
}

fn finite_candidates(
    k: &FgAbGroup,
    c: &FgAbGroup,
    bound: Option<&BigInt>,
) -> (Vec<FgAbGroup>, bool) {
    let shared = arith::prime_factors(&k.torsion_exponent().gcd(&c.torsion_exponent()));

    // cyclic orders of both groups with the shared primes stripped out
    let mut fixed: Vec<BigInt> = Vec::new();
    for d in k.torsion().iter().chain(c.torsion()) {
        let mut d = d.clone();
        for &p in &shared {
            let bp = BigInt::from(p);
            while d.is_multiple_of(&bp) {
                d /= &bp;
            }
        }
        fixed.push(d);
    }

    let mut per_prime: Vec<(u64, Vec<Vec<u32>>)> = Vec::new();
    let mut total: u128 = 1;
    for &p in &shared {
        let mut mu = c.p_type(p);
        let mut nu = k.p_type(p);
        let mut rigid = 0;
        let max_part = match bound {
            Some(b) if !b.is_zero() => {
                let m = arith::valuation(b, p);
                // ℤ/pᵐ is injective and projective over ℤ/pᵐ, so summands of the
                // largest admissible exponent split off every bounded extension
                if mu[0] <= m && nu[0] <= m {
                    rigid = mu.iter().chain(&nu).filter(|&&e| e == m).count();
                    mu.retain(|&e| e < m);
                    nu.retain(|&e| e < m);
                }
                m
            }
            _ => mu[0] + nu[0],
        };
        let size: u32 = mu.iter().sum::<u32>() + nu.iter().sum::<u32>();
        let lambdas: Vec<Vec<u32>> = partitions(size, max_part, mu.len() + nu.len())
            .into_iter()
            .filter(|l| lr_positive(l, &mu, &nu))
            .map(|l| std::iter::repeat(max_part).take(rigid).chain(l).collect())
            .collect();
        total = total.saturating_mul(lambdas.len() as u128);
        per_prime.push((p, lambdas));
    }
    if total == 0 {
        return (Vec::new(), true);
    }
    let mut out = BTreeSet::new();
    // the split type is always an extension; the caller filters it against the bound
    out.insert(k.direct_sum(c));
    let fixed = FgAbGroup::from_cyclic_orders(&fixed);
    let mut index = vec![0usize; per_prime.len()];
    let mut produced = 0usize;
    let complete = loop {
        let types = index.iter().zip(&per_prime).map(|(slot, (p, l))| (*p, l[*slot].as_slice()));
        out.insert(with_prime_types(&fixed, k.rank(), types));
        produced += 1;
        if !next_index(&mut index, &per_prime) {
            break true;
        }
        if produced > ALTERNATIVES_CAP {
            break false;
        }
    };
    (out.into_iter().collect(), complete)
}

/// `fixed ⊕ ℤ^rank ⊕ ⊕_p (p-group of the given type)`, for `fixed` prime to every listed `p`.
fn with_prime_types<'a>(
    fixed: &FgAbGroup,
    rank: usize,
    types: impl Iterator<Item = (u64, &'a [u32])>,
) -> FgAbGroup {
    // coprime parts combine by aligning invariant factors from the largest down
    let mut factors: Vec<BigInt> = fixed.torsion().iter().rev().cloned().collect();
    for (p, parts) in types {
        if factors.len() < parts.len() {
            factors.resize(parts.len(), BigInt::one());
        }
        for (f, &e) in factors.iter_mut().zip(parts) {
            *f *= BigInt::from(p).pow(e);
        }
    }
    factors.retain(|f| !f.is_one());
    factors.reverse();
    FgAbGroup::new(rank + fixed.rank(), factors).expect("aligned factors form a chain")
}

/// Mixed-radix increment; false once every combination has been visited.
fn next_index(index: &mut [usize], per_prime: &[(u64, Vec<Vec<u32>>)]) -> bool {
    for (slot, (_, lambdas)) in index.iter_mut().zip(per_prime) {
        *slot += 1;
        if *slot < lambdas.len() {
            return true;
        }
        *slot = 0;
    }
    false
}

fn class_candidates(k: &FgAbGroup, c: &FgAbGroup) -> (Vec<FgAbGroup>, bool) {
    let nc = c.num_generators();
    let kt: Vec<BigInt> = k.torsion().to_vec();
    // representative ranges of C/kᵢC per coordinate
    let mut radices: Vec<BigInt> = Vec::new();
    for ki in &kt {
        for order in c.generator_orders() {
            radices.push(if order.is_zero() { ki.clone() } else { order.gcd(ki) });
        }
    }
    let mut digits = vec![BigInt::zero(); radices.len()];
    let mut out = BTreeSet::new();
    let mut produced = 0usize;
    let mut complete = false;
    loop {
        let gens = nc + kt.len();
        let mut rel = IntMatrix::zeros(gens, c.torsion().len() + kt.len());
        for (j, d) in c.torsion().iter().enumerate() {
            rel.set(c.rank() + j, j, d.clone());
        }
        for (i, ki) in kt.iter().enumerate() {
            let col = c.torsion().len() + i;
            rel.set(nc + i, col, ki.clone());
            for j in 0..nc {
                rel.set(j, col, -digits[i * nc + j].clone());
            }
        }
        let y = Presentation::new(gens, rel).canonicalize().group;
        out.insert(y.direct_sum(&FgAbGroup::free(k.rank())));
        produced += 1;
        if produced >= CLASS_ENUMERATION_CAP {
            break;
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                complete = true;
                break;
            }
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = BigInt::zero();
            i += 1;
        }
        if complete {
            break;
        }
    }
    (out.into_iter().collect(), complete)
}

/// Partitions of `n` with parts `≤ max_part` and at most `max_len` parts, largest first.
pub fn partitions(n: u32, max_part: u32, max_len: usize) -> Vec<Vec<u32>> {
    fn go(n: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if max_len == 0 {
            return;
        }
        for part in (1..=max_part.min(n)).rev() {
            cur.push(part);
            go(n - part, part, max_len - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, max_len, &mut Vec::new(), &mut out);
    out
}

/// Whether the Littlewood–Richardson coefficient `c^λ_{μν}` is positive.
///
/// Searches for one LR tableau of shape `λ/μ` and content `ν`, filling rows top
/// to bottom; within a row only the letter counts are free.
pub fn lr_positive(lambda: &[u32], mu: &[u32], nu: &[u32]) -> bool {
    let rows = lambda.len();
    if mu.len() > rows || nu.len() > rows {
        return false;
    }
    let mu: Vec<u32> = (0..rows).map(|i| mu.get(i).copied().unwrap_or(0)).collect();
    if mu.iter().zip(lambda).any(|(m, l)| m > l)
        || nu.iter().zip(lambda).any(|(n, l)| n > l)
        || lambda.iter().sum::<u32>() != mu.iter().sum::<u32>() + nu.iter().sum::<u32>()
    {
        return false;
    }
    let mut cum = vec![0u32; nu.len()];
    lr_row(0, lambda, &mu, nu, &mut cum, &[])
}

fn lr_row(r: usize, lambda: &[u32], mu: &[u32], nu: &[u32], cum: &mut Vec<u32>, prev: &[usize]) -> bool {
    if r == lambda.len() {
        return cum.as_slice() == nu;
    }
    let len = (lambda[r] - mu[r]) as usize;
    let mut counts = vec![0u32; nu.len()];
    lr_letter(r, 0, len, lambda, mu, nu, cum, prev, &mut counts)
}

#[allow(clippy::too_many_arguments)]
fn lr_letter(
    r: usize,
    j: usize,
    remaining: usize,
    lambda: &[u32],
    mu: &[u32],
    nu: &[u32],
    cum: &mut Vec<u32>,
    prev: &[usize],
    counts: &mut Vec<u32>,
) -> bool {
    if j == nu.len() || j > r {
        if remaining != 0 {
            return false;
        }
        let row: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(l, &c)| std::iter::repeat(l).take(c as usize))
            .collect();
        // column strictness against the skew part of the row above
        if r > 0 {
            let start = mu[r] as usize;
            let prev_start = mu[r - 1] as usize;
            for (offset, &letter) in row.iter().enumerate() {
                let col = start + offset;
                if col >= prev_start {
                    let above = prev[col - prev_start];
                    if letter <= above {
                        return false;
                    }
                }
            }
        }
        for (c, x) in cum.iter_mut().zip(counts.iter()) {
            *c += x;
        }
        let ok = lr_row(r + 1, lambda, mu, nu, cum, &row);
        for (c, x) in cum.iter_mut().zip(counts.iter()) {
            *c -= x;
        }
        return ok;
    }
    let mut max = (nu[j] - cum[j]).min(remaining as u32);
    if j > 0 {
        // lattice condition: reading right to left, the j's of this row come before its (j-1)'s
        max = max.min(cum[j - 1].saturating_sub(cum[j]));
    }
    for x in (0..=max).rev() {
        counts[j] = x;
        if lr_letter(r, j + 1, remaining - x as usize, lambda, mu, nu, cum, prev, counts) {
            counts[j] = 0;
            return true;
        }
    }
    counts[j] = 0;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[i64]) -> FgAbGroup {
        FgAbGroup::from_cyclic_orders(&orders.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn vanishing_term_forces_uniqueness() {
        let r = solve_extension(&FgAbGroup::zero(), &g(&[7]), None);
        assert_eq!(r.group, g(&[7]));
        assert_eq!(r.mode, ExtensionMode::ForcedUnique);
        assert!(r.alternatives.is_empty());
    }

    #[test]
    fn elementary_p_groups_split_under_exponent_p() {
        for p in [2i64, 3, 5, 7] {
            let r = solve_extension(&g(&[p]), &g(&[p]), Some(&BigInt::from(p)));
            assert_eq!(r.group, g(&[p, p]));
            assert_eq!(r.mode, ExtensionMode::ForcedUnique);
        }
    }

    #[test]
    fn unbounded_two_by_two_lists_cyclic_alternative() {
        let r = solve_extension(&g(&[2]), &g(&[2]), None);
        assert_eq!(r.group, g(&[2, 2]));
        assert_eq!(r.mode, ExtensionMode::SplitAssumed);
        assert_eq!(r.alternatives, vec![g(&[4])]);
        let r = solve_extension(&g(&[2]), &g(&[2]), Some(&BigInt::from(4)));
        assert_eq!(r.mode, ExtensionMode::Ambiguous);
    }

    #[test]
    fn infinite_subgroup_classes() {
        // 0 → ℤ → X → ℤ/4 → 0: X ∈ {ℤ ⊕ ℤ/4, ℤ ⊕ ℤ/2, ℤ}
        let r = solve_extension(&g(&[4]), &FgAbGroup::free(1), None);
        assert_eq!(r.group, g(&[0, 4]));
        let mut alts = r.alternatives.clone();
        alts.sort();
        assert_eq!(alts, vec![g(&[0]), g(&[0, 2])]);
    }

    #[test]
    fn top_exponent_summands_split() {
        let r = solve_extension(&g(&[2]), &g(&[4]), Some(&BigInt::from(4)));
        assert_eq!(r.mode, ExtensionMode::ForcedUnique);
        // a huge cyclic summand of full exponent must not blow up the enumeration
        let q = crate::arith::factorial(120);
        let c = FgAbGroup::from_cyclic_orders(&[q.clone(), BigInt::from(2)]);
        let r = solve_extension(&g(&[2]), &c, Some(&q));
        assert_eq!(r.mode, ExtensionMode::Ambiguous);
        assert_eq!(r.candidate_count, Some(2));
    }

    #[test]
    fn lr_small_cases() {
        // c^{(2,1)}_{(1),(1,1)} = 1, c^{(2)}_{(1),(1,1)} = 0
        assert!(lr_positive(&[2, 1], &[1], &[1, 1]));
        assert!(!lr_positive(&[2], &[1], &[1, 1]));
        assert!(lr_positive(&[3, 2, 1], &[2, 1], &[2, 1]));
        // (2,2) ⊄ subgroup chains: c^{(4)}_{(2),(2)} = 1, c^{(3,1)}_{(2),(2)} = 1, c^{(2,2)}_{(2),(2)} = 1
        assert!(lr_positive(&[4], &[2], &[2]));
        assert!(lr_positive(&[3, 1], &[2], &[2]));
        assert!(lr_positive(&[2, 2], &[2], &[2]));
        assert!(!lr_positive(&[2, 1, 1], &[2], &[2]));
    }

    #[test]
    fn partitions_enumerate() {
        assert_eq!(partitions(4, 4, 4).len(), 5);
        assert_eq!(partitions(4, 2, 4), vec![vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(4, 4, 2), vec![vec![4], vec![3, 1], vec![2, 2]]);
    }
}
