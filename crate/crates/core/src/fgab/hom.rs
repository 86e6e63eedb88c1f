use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::lattice::{nullspace, solve_columns, Lattice};
use super::{Canonical, FgAbGroup, IntMatrix, Presentation};
use crate::error::{Error, Result};

/// A homomorphism between groups in canonical coordinates.
///
/// Column `j` of the matrix is the image of the `j`-th canonical generator of the
/// source; torsion rows are kept reduced modulo their orders.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FgAbGroup, target: FgAbGroup, mut matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.num_generators() || matrix.cols() != source.num_generators() {
            return Err(Error::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected: format!(
                    "{}x{} for {} -> {}",
                    target.num_generators(),
                    source.num_generators(),
                    source,
                    target
                ),
            });
        }
        for (j, order) in source.generator_orders().iter().enumerate() {
            if order.is_zero() {
                continue;
            }
            let image: Vec<BigInt> = matrix.column(j).iter().map(|x| x * order).collect();
            if !target.is_zero_element(&image) {
                return Err(Error::NotWellDefined(format!(
                    "generator {j} has order {order} but {order} times its image {:?} is nonzero in {target}",
                    matrix.column(j).iter().map(|x| x.to_string()).collect::<Vec<_>>()
                )));
            }
        }
        target.reduce_rows(&mut matrix);
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn from_rows<R: AsRef<[i64]>>(
        source: FgAbGroup,
        target: FgAbGroup,
        rows: &[R],
    ) -> Result<Self> {
        let m = if rows.is_empty() {
            IntMatrix::zeros(0, source.num_generators())
        } else {
            IntMatrix::from_rows(rows)
        };
        let m = if target.num_generators() > 0 && source.num_generators() == 0 {
            IntMatrix::zeros(target.num_generators(), 0)
        } else {
            m
        };
        Self::new(source, target, m)
    }

    pub fn zero(source: FgAbGroup, target: FgAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.num_generators(), source.num_generators());
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.num_generators()),
        }
    }

    /// Multiplication by `q` on `g`.
    pub fn multiplication(g: &FgAbGroup, q: &BigInt) -> Self {
        let n = g.num_generators();
        Self::new(
            g.clone(),
            g.clone(),
            IntMatrix::diagonal(n, n, std::iter::repeat(q.clone()).take(n)),
        )
        .expect("multiplication is always well defined")
    }

    /// Re-expresses a map given in presentation coordinates in canonical coordinates.
    pub fn between_presentations(
        source: &Canonical,
        target: &Canonical,
        raw: &IntMatrix,
    ) -> Result<Self> {
        let m = &(&target.to_canon * raw) * &source.from_canon;
        Self::new(source.group.clone(), target.group.clone(), m)
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.target != next.source {
            return Err(Error::DimensionMismatch {
                position: 0,
                detail: format!("{} -> {} followed by {} -> {}", self.source, self.target, next.source, next.target),
            });
        }
        GroupHom::new(
            self.source.clone(),
            next.target.clone(),
            &next.matrix * &self.matrix,
        )
    }

    pub fn scaled(&self, k: &BigInt) -> GroupHom {
        GroupHom::new(self.source.clone(), self.target.clone(), self.matrix.scale(k))
            .expect("multiple of a homomorphism is a homomorphism")
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.matrix.mul_vec(x);
        self.target.reduce(&mut y);
        y
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|c| self.target.is_zero_element(&self.matrix.column(c)))
    }

    /// `[matrix | target relations]`: its column span is the lift of the image.
    fn image_lift(&self) -> IntMatrix {
        self.matrix.hcat(&self.target.torsion_relations())
    }

    /// Generators (in source coordinates) of `{x ∈ ℤˢ : f(x) = 0 in the target}`.
    pub(crate) fn kernel_lift(&self) -> IntMatrix {
        let s = self.source.num_generators();
        let null = nullspace(&self.image_lift());
        let idx: Vec<usize> = (0..s).collect();
        let projected = null.select_rows(&idx);
        projected.hcat(&self.source.torsion_relations())
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel_with_inclusion(&self) -> (FgAbGroup, GroupHom) {
        let lattice = Lattice::span(&self.kernel_lift());
        let q = lattice
            .quotient(&self.source.torsion_relations())
            .expect("source relations lie in the kernel lift");
        let group = q.canonical.group.clone();
        let inclusion = GroupHom::new(group.clone(), self.source.clone(), q.generators)
            .expect("kernel inclusion is well defined");
        (group, inclusion)
    }

    /// Image with its inclusion into the target.
    pub fn image_with_inclusion(&self) -> (FgAbGroup, GroupHom) {
        let lattice = Lattice::span(&self.image_lift());
        let q = lattice
            .quotient(&self.target.torsion_relations())
            .expect("target relations lie in the image lift");
        let group = q.canonical.group.clone();
        let inclusion = GroupHom::new(group.clone(), self.target.clone(), q.generators)
            .expect("image inclusion is well defined");
        (group, inclusion)
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel_with_projection(&self) -> (FgAbGroup, GroupHom) {
        let c = Presentation::new(self.target.num_generators(), self.image_lift()).canonicalize();
        let group = c.group.clone();
        let projection = GroupHom::new(self.target.clone(), group.clone(), c.to_canon)
            .expect("cokernel projection is well defined");
        (group, projection)
    }

    pub fn kernel(&self) -> FgAbGroup {
        self.kernel_with_inclusion().0
    }

    pub fn image(&self) -> FgAbGroup {
        self.image_with_inclusion().0
    }

    pub fn cokernel(&self) -> FgAbGroup {
        self.cokernel_with_projection().0
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// Equality as homomorphisms (columns compared modulo target relations).
    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.source == other.source && self.target == other.target && {
            let mut a = self.matrix.clone();
            let mut b = other.matrix.clone();
            self.target.reduce_rows(&mut a);
            self.target.reduce_rows(&mut b);
            a == b
        }
    }

    /// Restriction to the torsion subgroups of source and target.
    pub fn restrict_to_torsion(&self) -> GroupHom {
        let s = &self.source;
        let t = &self.target;
        let rows: Vec<usize> = (t.rank()..t.num_generators()).collect();
        let cols: Vec<usize> = (s.rank()..s.num_generators()).collect();
        let m = self.matrix.select_rows(&rows).select_cols(&cols);
        GroupHom::new(s.torsion_subgroup(), t.torsion_subgroup(), m)
            .expect("torsion maps into torsion")
    }

    /// The map `t` with `j ∘ t = self`, if `self` lands in the image of `j` and `t` is well defined.
    pub fn lift_through(&self, j: &GroupHom) -> Option<GroupHom> {
        if self.target != j.target {
            return None;
        }
        let system = j.matrix.hcat(&j.target.torsion_relations());
        let x = solve_columns(&system, &self.matrix)?;
        let rows: Vec<usize> = (0..j.source.num_generators()).collect();
        let t = GroupHom::new(self.source.clone(), j.source.clone(), x.select_rows(&rows)).ok()?;
        t.then(j).ok()?.same_map(self).then_some(t)
    }

    /// The map `t` with `t ∘ p = self`, if `p` is surjective and `self` vanishes on `ker p`.
    pub fn descend_through(&self, p: &GroupHom) -> Option<GroupHom> {
        if self.source != p.source {
            return None;
        }
        let system = p.matrix.hcat(&p.target.torsion_relations());
        let generators = IntMatrix::identity(p.target.num_generators());
        let rows: Vec<usize> = (0..p.source.num_generators()).collect();
        let section = solve_columns(&system, &generators)?.select_rows(&rows);
        let t = GroupHom::new(p.target.clone(), self.target.clone(), &self.matrix * &section).ok()?;
        p.then(&t).ok()?.same_map(self).then_some(t)
    }

    /// The induced map on free quotients `G/T(G)`: the free-by-free block.
    pub fn free_block(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.target.rank()).collect();
        let cols: Vec<usize> = (0..self.source.rank()).collect();
        self.matrix.select_rows(&rows).select_cols(&cols)
    }
}

/// Multiplication by `q` as a homomorphism `g → g`.
pub fn multiplication_hom(g: &FgAbGroup, q: u64) -> GroupHom {
    GroupHom::multiplication(g, &BigInt::from(q))
}

/// Sum of two homomorphisms with common source and target.
pub fn add_homs(a: &GroupHom, b: &GroupHom) -> Result<GroupHom> {
    if a.source != b.source || a.target != b.target {
        return Err(Error::InvalidParameter("adding maps with different endpoints".into()));
    }
    let mut m = a.matrix.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.get(r, c) + b.matrix.get(r, c);
            m.set(r, c, v);
        }
    }
    GroupHom::new(a.source.clone(), a.target.clone(), m)
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({} -> {}, {})", self.source, self.target, self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn lifting_and_descending() {
        // ℤ/2 ↪ ℤ/4 and ℤ/4 ↠ ℤ/2
        let c2 = FgAbGroup::cyclic(2);
        let c4 = FgAbGroup::cyclic(4);
        let incl = GroupHom::from_rows(c2.clone(), c4.clone(), &[[2]]).unwrap();
        let red = GroupHom::from_rows(c4.clone(), c2.clone(), &[[1]]).unwrap();
        let twice = GroupHom::multiplication(&c4, &BigInt::from(2));
        let t = twice.lift_through(&incl).unwrap();
        assert!(t.same_map(&red));
        let d = twice.descend_through(&red).unwrap();
        assert!(d.same_map(&incl));
        assert!(GroupHom::identity(&c4).lift_through(&incl).is_none());
        assert!(GroupHom::identity(&c4).descend_through(&red).is_none());
    }

    #[test]
    fn multiplication_on_integers() {
        let f = multiplication_hom(&z(), 5);
        assert!(f.kernel().is_zero());
        assert_eq!(f.image(), z());
        assert_eq!(f.cokernel(), FgAbGroup::cyclic(5));
    }

    #[test]
    fn reduction_between_cyclics() {
        // ℤ/15 → ℤ/5, 1 ↦ 1
        let f = GroupHom::from_rows(FgAbGroup::cyclic(15), FgAbGroup::cyclic(5), &[[1]]).unwrap();
        assert_eq!(f.kernel(), FgAbGroup::cyclic(3));
        assert!(f.cokernel().is_zero());
    }

    #[test]
    fn zero_endomorphism() {
        let g = FgAbGroup::cyclic(9);
        let f = GroupHom::zero(g.clone(), g.clone());
        assert_eq!(f.kernel(), g);
        assert_eq!(f.cokernel(), g);
        assert!(f.image().is_zero());
    }

    #[test]
    fn multiplication_on_finite_cyclic() {
        let f = multiplication_hom(&FgAbGroup::cyclic(6), 4);
        assert_eq!(f.kernel(), FgAbGroup::cyclic(2));
        assert_eq!(f.cokernel(), FgAbGroup::cyclic(2));
        let trivial = multiplication_hom(&FgAbGroup::zero(), 7);
        assert!(trivial.is_zero() && trivial.kernel().is_zero());
    }

    #[test]
    fn rejects_ill_defined_maps() {
        // ℤ/2 → ℤ, 1 ↦ 1 is not a homomorphism
        assert!(GroupHom::from_rows(FgAbGroup::cyclic(2), z(), &[[1]]).is_err());
        // ℤ/4 → ℤ/6, 1 ↦ 1 fails: 4 ≢ 0 mod 6
        assert!(GroupHom::from_rows(FgAbGroup::cyclic(4), FgAbGroup::cyclic(6), &[[1]]).is_err());
        // ℤ/4 → ℤ/6, 1 ↦ 3 is fine
        assert!(GroupHom::from_rows(FgAbGroup::cyclic(4), FgAbGroup::cyclic(6), &[[3]]).is_ok());
    }

    #[test]
    fn inclusion_maps_are_injective_with_correct_image() {
        let g = FgAbGroup::new(1, vec![BigInt::from(4)]).unwrap();
        let f = multiplication_hom(&g, 2);
        let (k, inc) = f.kernel_with_inclusion();
        assert_eq!(k, FgAbGroup::cyclic(2));
        assert!(inc.is_injective());
        assert!(inc.then(&f).unwrap().is_zero());
        let (im, inc) = f.image_with_inclusion();
        assert_eq!(im, FgAbGroup::new(1, vec![BigInt::from(2)]).unwrap());
        assert!(inc.is_injective());
        let (c, proj) = f.cokernel_with_projection();
        assert_eq!(c, FgAbGroup::new(0, vec![BigInt::from(2), BigInt::from(2)]).unwrap());
        assert!(proj.is_surjective());
        assert!(f.then(&proj).unwrap().is_zero());
    }
}
