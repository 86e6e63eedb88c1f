use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Result of a Smith normal form computation: `u · m · v = d`.
///
/// `u_inv` is carried along because presentations need the new generators
/// (columns of `u⁻¹`) as well as the coordinate change `u`.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithNormalForm {
    /// Nonzero diagonal entries `d₁ | d₂ | …` (units included).
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// Moves the smallest nonzero entry of the trailing block to `(t, t)`.
    fn pivot_block(&mut self, t: usize) -> bool {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if !x.is_zero() && best.as_ref().map_or(true, |(_, _, b)| x.abs() < *b) {
                    best = Some((i, j, x.abs()));
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                true
            }
            None => false,
        }
    }

    /// Moves the smallest nonzero entry of row `t` / column `t` to the pivot.
    fn pivot_cross(&mut self, t: usize) {
        let mut best = (t, t, self.a.get(t, t).abs());
        for i in t + 1..self.a.rows() {
            let x = self.a.get(i, t);
            if !x.is_zero() && (best.2.is_zero() || x.abs() < best.2) {
                best = (i, t, x.abs());
            }
        }
        for j in t + 1..self.a.cols() {
            let x = self.a.get(t, j);
            if !x.is_zero() && (best.2.is_zero() || x.abs() < best.2) {
                best = (t, j, x.abs());
            }
        }
        self.swap_rows(t, best.0);
        self.swap_cols(t, best.1);
    }

    /// Clears row and column `t` outside the pivot; returns false if a remainder survived.
    fn eliminate(&mut self, t: usize) -> bool {
        let mut clean = true;
        let p = self.a.get(t, t).clone();
        for i in t + 1..self.a.rows() {
            if self.a.get(i, t).is_zero() {
                continue;
            }
            let q = self.a.get(i, t).div_floor(&p);
            self.add_row(i, t, &-q);
            clean &= self.a.get(i, t).is_zero();
        }
        for j in t + 1..self.a.cols() {
            if self.a.get(t, j).is_zero() {
                continue;
            }
            let q = self.a.get(t, j).div_floor(&p);
            self.add_col(j, t, &-q);
            clean &= self.a.get(t, j).is_zero();
        }
        clean
    }

    fn non_dividing_row(&self, t: usize) -> Option<usize> {
        let p = self.a.get(t, t);
        (t + 1..self.a.rows()).find(|&i| {
            (t + 1..self.a.cols()).any(|j| !self.a.get(i, j).is_multiple_of(p))
        })
    }
}

/// Smith normal form over ℤ. Total on every matrix, including empty ones.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(m.rows()),
        u_inv: IntMatrix::identity(m.rows()),
        v: IntMatrix::identity(m.cols()),
    };
    let n = m.rows().min(m.cols());
    let mut t = 0;
    while t < n {
        if !r.pivot_block(t) {
            break;
        }
        loop {
            if !r.eliminate(t) {
                r.pivot_cross(t);
                continue;
            }
            match r.non_dividing_row(t) {
                Some(i) => {
                    let one = BigInt::from(1);
                    r.add_row(t, i, &one);
                    r.pivot_cross(t);
                }
                None => break,
            }
        }
        if r.a.get(t, t).is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    SmithNormalForm {
        u: r.u,
        u_inv: r.u_inv,
        d: r.a,
        v: r.v,
        rank: t,
    }
}
