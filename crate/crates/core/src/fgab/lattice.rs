//! Sublattices of ℤⁿ given by generating columns.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{smith_normal_form, Canonical, IntMatrix, Presentation};

/// Columns spanning the integer kernel `{x : m·x = 0}`.
pub fn nullspace(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let idx: Vec<usize> = (snf.rank..m.cols()).collect();
    snf.v.select_cols(&idx)
}

/// Integer solutions `x` of `m·x = rhs`, column by column, or `None` if some column has none.
pub fn solve_columns(m: &IntMatrix, rhs: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(m.rows(), rhs.rows(), "right-hand side height mismatch");
    let snf = smith_normal_form(m);
    let divisors = snf.elementary_divisors();
    let urhs = &snf.u * rhs;
    let mut y = IntMatrix::zeros(m.cols(), rhs.cols());
    for c in 0..rhs.cols() {
        for r in 0..m.rows() {
            let v = urhs.get(r, c);
            match divisors.get(r) {
                Some(d) => {
                    let (q, rem) = v.div_rem(d);
                    if !rem.is_zero() {
                        return None;
                    }
                    y.set(r, c, q);
                }
                None if !v.is_zero() => return None,
                None => {}
            }
        }
    }
    Some(&snf.v * &y)
}

/// A lattice `span(generators) ⊆ ℤⁿ` with an explicit basis and coordinate map.
pub struct Lattice {
    ambient: usize,
    /// `u` from the SNF of the generators; coordinates are `(u·w)ᵢ / dᵢ`.
    u: IntMatrix,
    divisors: Vec<BigInt>,
    basis: IntMatrix,
}

impl Lattice {
    pub fn span(generators: &IntMatrix) -> Self {
        let snf = smith_normal_form(generators);
        let divisors = snf.elementary_divisors();
        let mut basis = IntMatrix::zeros(generators.rows(), divisors.len());
        for (i, d) in divisors.iter().enumerate() {
            for r in 0..generators.rows() {
                basis.set(r, i, snf.u_inv.get(r, i) * d);
            }
        }
        Lattice {
            ambient: generators.rows(),
            u: snf.u,
            divisors,
            basis,
        }
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Coordinates of `w` in the basis, or `None` when `w` is outside the lattice.
    pub fn coordinates(&self, w: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(w.len(), self.ambient, "vector length mismatch");
        let uw = self.u.mul_vec(w);
        if uw[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(self.rank());
        for (x, d) in uw.iter().zip(&self.divisors) {
            let (q, r) = x.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    pub fn contains(&self, w: &[BigInt]) -> bool {
        self.coordinates(w).is_some()
    }

    pub fn contains_all(&self, m: &IntMatrix) -> bool {
        (0..m.cols()).all(|c| self.contains(&m.column(c)))
    }

    /// `self / span(sub)` in normal form, with canonical generators written in ambient coordinates.
    /// Returns `None` if `sub` is not contained in `self`.
    pub fn quotient(&self, sub: &IntMatrix) -> Option<LatticeQuotient> {
        let mut coords = Vec::with_capacity(sub.cols());
        for c in 0..sub.cols() {
            coords.push(self.coordinates(&sub.column(c))?);
        }
        let rel = IntMatrix::from_columns(self.rank(), &coords);
        let canonical = Presentation::new(self.rank(), rel).canonicalize();
        let generators = &self.basis * &canonical.from_canon;
        Some(LatticeQuotient {
            canonical,
            generators,
        })
    }
}

pub struct LatticeQuotient {
    pub canonical: Canonical,
    /// Canonical generators of the quotient as ambient vectors (`n × k`).
    pub generators: IntMatrix,
}
