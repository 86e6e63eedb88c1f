use super::{add_homs, Canonical, FgAbGroup, GroupHom, IntMatrix, Presentation};

/// `A₁ ⊕ … ⊕ Aₖ` in normal form with its structure maps.
///
/// "Raw" coordinates are the concatenated canonical coordinates of the summands.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub parts: Vec<FgAbGroup>,
    pub canonical: Canonical,
    offsets: Vec<usize>,
}

impl DirectSum {
    pub fn new(parts: &[FgAbGroup]) -> Self {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut orders = Vec::new();
        for p in parts {
            offsets.push(orders.len());
            orders.extend(p.generator_orders());
        }
        let n = orders.len();
        let canonical = Presentation::new(n, IntMatrix::diagonal(n, n, orders)).canonicalize();
        DirectSum {
            parts: parts.to_vec(),
            canonical,
            offsets,
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.canonical.group
    }

    pub fn raw_len(&self) -> usize {
        self.offsets.last().map_or(0, |o| o + self.parts.last().unwrap().num_generators())
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Raw matrix embedding summand `i` (`raw_len × gens(Aᵢ)`).
    pub fn raw_inclusion(&self, i: usize) -> IntMatrix {
        let g = self.parts[i].num_generators();
        let mut m = IntMatrix::zeros(self.raw_len(), g);
        for j in 0..g {
            m.set(self.offsets[i] + j, j, 1.into());
        }
        m
    }

    /// Raw matrix projecting onto summand `i` (`gens(Aᵢ) × raw_len`).
    pub fn raw_projection(&self, i: usize) -> IntMatrix {
        self.raw_inclusion(i).transpose()
    }

    pub fn inclusion(&self, i: usize) -> GroupHom {
        GroupHom::new(
            self.parts[i].clone(),
            self.group().clone(),
            &self.canonical.to_canon * &self.raw_inclusion(i),
        )
        .expect("summand inclusion is well defined")
    }

    pub fn projection(&self, i: usize) -> GroupHom {
        GroupHom::new(
            self.group().clone(),
            self.parts[i].clone(),
            &self.raw_projection(i) * &self.canonical.from_canon,
        )
        .expect("summand projection is well defined")
    }
}

impl DirectSum {
    /// `Σ inclusion_j ∘ h ∘ projection_i` over blocks `(i, j, h)` with `h: Aᵢ → B_j`.
    pub fn block_map(&self, target: &DirectSum, blocks: &[(usize, usize, GroupHom)]) -> GroupHom {
        let mut total = GroupHom::zero(self.group().clone(), target.group().clone());
        for (i, j, h) in blocks {
            let term = self
                .projection(*i)
                .then(h)
                .and_then(|m| m.then(&target.inclusion(*j)))
                .expect("block endpoints match the summands");
            total = add_homs(&total, &term).expect("common endpoints");
        }
        total
    }
}

impl Canonical {
    /// The identity coordinate change of a group already in normal form.
    pub fn trivial(g: &FgAbGroup) -> Canonical {
        let n = g.num_generators();
        Canonical {
            group: g.clone(),
            to_canon: IntMatrix::identity(n),
            from_canon: IntMatrix::identity(n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_maps_split() {
        let s = DirectSum::new(&[FgAbGroup::cyclic(2), FgAbGroup::cyclic(3), FgAbGroup::free(1)]);
        assert_eq!(s.group(), &FgAbGroup::from_cyclic_orders(&[6.into(), 0.into()]));
        for i in 0..3 {
            let round = s.inclusion(i).then(&s.projection(i)).unwrap();
            assert!(round.same_map(&GroupHom::identity(&s.parts[i])));
            for j in 0..3 {
                if i != j {
                    assert!(s.inclusion(i).then(&s.projection(j)).unwrap().is_zero());
                }
            }
        }
    }
}
