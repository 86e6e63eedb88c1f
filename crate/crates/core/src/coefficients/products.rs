use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::modq::mod_q;
use crate::error::{Error, Result};
use crate::theory::GradedTheory;
use crate::wire::WireInt;

/// An element of a graded theory in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub degree: i64,
    pub coords: Vec<WireInt>,
}

impl Element {
    pub fn new(degree: i64, coords: &[i64]) -> Self {
        Element {
            degree,
            coords: coords.iter().map(|&c| WireInt(c.into())).collect(),
        }
    }

    fn big(&self) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.0.clone()).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Triple {
    pub x: Element,
    pub y: Element,
    pub z: Element,
}

/// Values `φ(eᵢ, fⱼ)` on canonical generators for one pair of degree classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BilinearBlock {
    pub left_degree: i64,
    pub right_degree: i64,
    pub target_degree: i64,
    /// `values[i][j]`: target coordinates of `φ(eᵢ, fⱼ)`.
    pub values: Vec<Vec<Vec<WireInt>>>,
}

/// A degreewise bilinear map `L_n × R_m → T_{n+m+shift}` given on generators.
#[derive(Clone, Debug)]
pub struct Pairing {
    left: GradedTheory,
    right: GradedTheory,
    target: GradedTheory,
    shift: i64,
    blocks: Vec<BilinearBlock>,
}

impl Pairing {
    /// Checks shapes only; bilinearity and degrees are reported by the checkers.
    pub fn new(
        left: GradedTheory,
        right: GradedTheory,
        target: GradedTheory,
        shift: i64,
        blocks: Vec<BilinearBlock>,
    ) -> Result<Self> {
        let period = left.period();
        if right.period() != period || target.period() != period {
            return Err(Error::InvalidPairing("theories have different periods".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &blocks {
            let key = (period.residue(b.left_degree), period.residue(b.right_degree));
            if !seen.insert(key) {
                return Err(Error::InvalidPairing(format!("degrees {key:?} given twice")));
            }
            let (l, r, t) = (
                left.group(b.left_degree).num_generators(),
                right.group(b.right_degree).num_generators(),
                target.group(b.target_degree).num_generators(),
            );
            let shape_ok = b.values.len() == l
                && b.values.iter().all(|row| row.len() == r && row.iter().all(|v| v.len() == t));
            if !shape_ok {
                return Err(Error::InvalidPairing(format!(
                    "block ({}, {}) must be {l} x {r} vectors of length {t}",
                    b.left_degree, b.right_degree
                )));
            }
        }
        Ok(Pairing {
            left,
            right,
            target,
            shift,
            blocks,
        })
    }

    /// A pairing on a single theory (`L = R = T`).
    pub fn product(theory: GradedTheory, blocks: Vec<BilinearBlock>) -> Result<Self> {
        Self::new(theory.clone(), theory.clone(), theory, 0, blocks)
    }

    pub fn blocks(&self) -> &[BilinearBlock] {
        &self.blocks
    }

    /// The same pairing multiplied by `k`.
    pub fn scaled(&self, k: i64) -> Pairing {
        let mut out = self.clone();
        for b in &mut out.blocks {
            for row in &mut b.values {
                for v in row {
                    for c in v {
                        c.0 *= k;
                    }
                }
            }
        }
        out
    }

    fn block(&self, n: i64, m: i64) -> Option<&BilinearBlock> {
        let p = self.left.period();
        self.blocks
            .iter()
            .find(|b| p.residue(b.left_degree) == p.residue(n) && p.residue(b.right_degree) == p.residue(m))
    }

    /// Torsion generators whose order does not annihilate their products.
    pub fn bilinearity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let target = self.target.group(b.target_degree);
            let lo = self.left.group(b.left_degree).generator_orders();
            let ro = self.right.group(b.right_degree).generator_orders();
            for (i, row) in b.values.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    for (side, idx, d) in [("left", i, &lo[i]), ("right", j, &ro[j])] {
                        if d.is_zero() {
                            continue;
                        }
                        let scaled: Vec<BigInt> = v.iter().map(|c| &c.0 * d).collect();
                        if !target.is_zero_element(&scaled) {
                            out.push(format!(
                                "degrees ({}, {}): {side} generator {idx} has order {d} but {d} times phi(e{i}, f{j}) is nonzero",
                                b.left_degree, b.right_degree
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Blocks whose target degree is not `n + m + shift` modulo the period.
    pub fn degree_violations(&self) -> Vec<String> {
        let p = self.left.period();
        self.blocks
            .iter()
            .filter(|b| p.residue(b.target_degree) != p.residue(b.left_degree + b.right_degree + self.shift))
            .map(|b| {
                format!(
                    "degrees ({}, {}) land in degree {} instead of {}",
                    b.left_degree,
                    b.right_degree,
                    b.target_degree,
                    b.left_degree + b.right_degree + self.shift
                )
            })
            .collect()
    }

    /// `φ(x, y)`, reduced in the target.
    pub fn apply(&self, x: &Element, y: &Element) -> Result<Element> {
        let (xs, ys) = (x.big(), y.big());
        if xs.len() != self.left.group(x.degree).num_generators()
            || ys.len() != self.right.group(y.degree).num_generators()
        {
            return Err(Error::InvalidPairing(format!(
                "element lengths do not match degrees {} and {}",
                x.degree, y.degree
            )));
        }
        let degree = x.degree + y.degree + self.shift;
        let target = self.target.group(degree);
        let mut out = vec![BigInt::zero(); target.num_generators()];
        if let Some(b) = self.block(x.degree, y.degree) {
            for (i, xi) in xs.iter().enumerate() {
                for (j, yj) in ys.iter().enumerate() {
                    for (o, v) in out.iter_mut().zip(&b.values[i][j]) {
                        *o += xi * yj * &v.0;
                    }
                }
            }
        }
        target.reduce(&mut out);
        Ok(Element {
            degree,
            coords: out.into_iter().map(WireInt).collect(),
        })
    }

    fn associative_on(&self, t: &Triple) -> Result<bool> {
        let lhs = self.apply(&self.apply(&t.x, &t.y)?, &t.z)?;
        let rhs = self.apply(&t.x, &self.apply(&t.y, &t.z)?)?;
        Ok(lhs == rhs)
    }
}

/// The induced pairing on `H ⊗ ℚ`: structure constants on free generators.
#[derive(Clone, Debug, Serialize)]
pub struct RationalPairing {
    pub blocks: Vec<BilinearBlock>,
}

impl RationalPairing {
    fn apply(&self, period: crate::theory::Period, x: &[BigInt], xd: i64, y: &[BigInt], yd: i64, width: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); width];
        if let Some(b) = self
            .blocks
            .iter()
            .find(|b| period.residue(b.left_degree) == period.residue(xd) && period.residue(b.right_degree) == period.residue(yd))
        {
            for (i, xi) in x.iter().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    for (o, v) in out.iter_mut().zip(&b.values[i][j]) {
                        *o += xi * yj * &v.0;
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    pub rational: RationalPairing,
    pub integral_associative: Vec<bool>,
    pub rational_associative: Vec<bool>,
    /// Integral associativity on a triple implies it on the rationalized triple.
    pub consistent: bool,
}

/// Transports a bilinear pairing to rational coefficients and compares associativity.
pub fn rational_product_transport(pairing: &Pairing, triples: &[Triple]) -> Result<TransportReport> {
    let mut problems = pairing.bilinearity_violations();
    problems.extend(pairing.degree_violations());
    if !problems.is_empty() {
        return Err(Error::InvalidPairing(problems.join("; ")));
    }
    let free_rows = |t: &GradedTheory, n: i64| t.group(n).rank();
    let blocks = pairing
        .blocks
        .iter()
        .map(|b| {
            let (l, r, t) = (
                free_rows(&pairing.left, b.left_degree),
                free_rows(&pairing.right, b.right_degree),
                free_rows(&pairing.target, b.target_degree),
            );
            BilinearBlock {
                values: b.values[..l]
                    .iter()
                    .map(|row| row[..r].iter().map(|v| v[..t].to_vec()).collect())
                    .collect(),
                ..b.clone()
            }
        })
        .collect();
    let rational = RationalPairing { blocks };

    let same_theory = pairing.left == pairing.right && pairing.right == pairing.target;
    let mut integral_associative = Vec::new();
    let mut rational_associative = Vec::new();
    for t in triples {
        if !same_theory {
            return Err(Error::InvalidPairing("associativity needs a product on one theory".into()));
        }
        integral_associative.push(pairing.associative_on(t)?);
        let period = pairing.left.period();
        let free = |e: &Element| -> Vec<BigInt> {
            e.big()[..pairing.left.group(e.degree).rank()].to_vec()
        };
        let width = |d: i64| pairing.left.group(d).rank();
        let (x, y, z) = (free(&t.x), free(&t.y), free(&t.z));
        let (xd, yd, zd) = (t.x.degree, t.y.degree, t.z.degree);
        let xy = rational.apply(period, &x, xd, &y, yd, width(xd + yd));
        let lhs = rational.apply(period, &xy, xd + yd, &z, zd, width(xd + yd + zd));
        let yz = rational.apply(period, &y, yd, &z, zd, width(yd + zd));
        let rhs = rational.apply(period, &x, xd, &yz, yd + zd, width(xd + yd + zd));
        rational_associative.push(lhs == rhs);
    }
    let consistent = integral_associative
        .iter()
        .zip(&rational_associative)
        .all(|(i, r)| !i || *r);
    Ok(TransportReport {
        rational,
        integral_associative,
        rational_associative,
        consistent,
    })
}

/// Candidate products `H^{(p)} × H^{(q)} → H^{(pq)}` on one base, plus triples to test.
#[derive(Clone, Debug)]
pub struct ProductData {
    pub base: GradedTheory,
    pub pairings: Vec<(BigInt, BigInt, Vec<BilinearBlock>)>,
    pub triples: Vec<([BigInt; 3], Triple)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractItem {
    pub contract: &'static str,
    pub subject: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractReport {
    pub items: Vec<ContractItem>,
    pub pass: bool,
}

/// Checks bilinearity, target degree `n + m - 2`, `pq`-annihilation and
/// associativity on the supplied triples. Nothing is derived from integral data.
pub fn mod_pq_product_check(data: &ProductData) -> Result<ContractReport> {
    let mut items = Vec::new();
    let mut built = Vec::new();
    for (p, q, blocks) in &data.pairings {
        let pq = p * q;
        let pairing = Pairing::new(
            mod_q(&data.base, p)?.theory().clone(),
            mod_q(&data.base, q)?.theory().clone(),
            mod_q(&data.base, &pq)?.theory().clone(),
            -2,
            blocks.clone(),
        )?;
        let subject = format!("mod {p} x mod {q} -> mod {pq}");
        let mut push = |contract, problems: Vec<String>| {
            items.push(ContractItem {
                contract,
                subject: subject.clone(),
                pass: problems.is_empty(),
                detail: (!problems.is_empty()).then(|| problems.join("; ")),
            })
        };
        push("bilinearity", pairing.bilinearity_violations());
        push("degree", pairing.degree_violations());
        let mut annihilation = Vec::new();
        for b in &pairing.blocks {
            let target = pairing.target.group(b.target_degree);
            for (i, row) in b.values.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let scaled: Vec<BigInt> = v.iter().map(|c| &c.0 * &pq).collect();
                    if !target.is_zero_element(&scaled) {
                        annihilation.push(format!(
                            "degrees ({}, {}): {pq} phi(e{i}, f{j}) is nonzero",
                            b.left_degree, b.right_degree
                        ));
                    }
                }
            }
        }
        push("annihilation", annihilation);
        built.push((p.clone(), q.clone(), pairing));
    }
    let find = |a: &BigInt, b: &BigInt| built.iter().find(|(p, q, _)| p == a && q == b).map(|x| &x.2);
    for ([p, q, r], t) in &data.triples {
        let subject = format!("triple in mod {p}, {q}, {r}");
        let needed = [(p.clone(), q.clone()), (p * q, r.clone()), (q.clone(), r.clone()), (p.clone(), q * r)];
        let pairs: Option<Vec<&Pairing>> = needed.iter().map(|(a, b)| find(a, b)).collect();
        let (pass, detail) = match pairs {
            None => (false, Some("missing one of the four pairings needed".to_owned())),
            Some(ps) => {
                let lhs = ps[1].apply(&ps[0].apply(&t.x, &t.y)?, &t.z)?;
                let rhs = ps[3].apply(&t.x, &ps[2].apply(&t.y, &t.z)?)?;
                let ok = lhs == rhs;
                (ok, (!ok).then(|| format!("(xy)z = {:?} but x(yz) = {:?}", coords(&lhs), coords(&rhs))))
            }
        };
        items.push(ContractItem {
            contract: "associativity",
            subject,
            pass,
            detail,
        });
    }
    let pass = items.iter().all(|i| i.pass);
    Ok(ContractReport { items, pass })
}

fn coords(e: &Element) -> Vec<String> {
    e.coords.iter().map(|c| c.0.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgAbGroup;

    fn w(v: &[i64]) -> Vec<WireInt> {
        v.iter().map(|&x| WireInt(x.into())).collect()
    }

    fn unit_ring() -> Pairing {
        let block = BilinearBlock {
            left_degree: 0,
            right_degree: 0,
            target_degree: 0,
            values: vec![vec![w(&[1])]],
        };
        Pairing::product(GradedTheory::point(), vec![block]).unwrap()
    }

    fn one() -> Element {
        Element::new(0, &[1])
    }

    #[test]
    fn unit_ring_transports() {
        let t = Triple { x: one(), y: one(), z: one() };
        let r = rational_product_transport(&unit_ring(), &[t.clone()]).unwrap();
        assert_eq!(r.rational.blocks[0].values, vec![vec![w(&[1])]]);
        assert!(r.integral_associative[0] && r.rational_associative[0] && r.consistent);
        let scaled = rational_product_transport(&unit_ring().scaled(3), &[t]).unwrap();
        assert_eq!(scaled.rational.blocks[0].values, vec![vec![w(&[3])]]);
        assert!(scaled.integral_associative[0] && scaled.rational_associative[0]);
    }

    #[test]
    fn torsion_factor_dies() {
        let g = FgAbGroup::new(1, vec![BigInt::from(2)]).unwrap();
        let t = GradedTheory::complex("z+z2", g, FgAbGroup::zero());
        let block = BilinearBlock {
            left_degree: 0,
            right_degree: 0,
            target_degree: 0,
            values: vec![vec![w(&[1, 0]), w(&[0, 1])], vec![w(&[0, 1]), w(&[0, 0])]],
        };
        let r = rational_product_transport(&Pairing::product(t.clone(), vec![block]).unwrap(), &[]).unwrap();
        assert_eq!(r.rational.blocks[0].values, vec![vec![w(&[1])]]);

        let bad = BilinearBlock {
            left_degree: 0,
            right_degree: 0,
            target_degree: 0,
            values: vec![vec![w(&[0, 0]), w(&[1, 0])], vec![w(&[0, 0]), w(&[0, 0])]],
        };
        assert!(rational_product_transport(&Pairing::product(t, vec![bad]).unwrap(), &[]).is_err());
    }

    #[test]
    fn mod_pq_contracts() {
        let two = BigInt::from(2);
        let three = BigInt::from(3);
        let block = |v: i64, target: i64| BilinearBlock {
            left_degree: 0,
            right_degree: 0,
            target_degree: target,
            values: vec![vec![w(&[v])]],
        };
        let data = |b: BilinearBlock| ProductData {
            base: GradedTheory::point(),
            pairings: vec![(two.clone(), three.clone(), vec![b])],
            triples: vec![],
        };
        assert!(mod_pq_product_check(&data(block(0, 0))).unwrap().pass);
        let nonzero = mod_pq_product_check(&data(block(1, 0))).unwrap();
        assert!(!nonzero.pass);
        assert!(nonzero.items.iter().any(|i| i.contract == "bilinearity" && !i.pass));
        // degree 0 + 0 - 2 ≡ 0, so degree 1 is wrong
        let odd = GradedTheory::complex("p", FgAbGroup::free(1), FgAbGroup::free(1));
        let d = ProductData {
            base: odd,
            pairings: vec![(two.clone(), three.clone(), vec![block(0, 1)])],
            triples: vec![],
        };
        let r = mod_pq_product_check(&d).unwrap();
        let deg = r.items.iter().find(|i| i.contract == "degree").unwrap();
        assert!(!deg.pass && deg.detail.as_ref().unwrap().contains("degree 1"));
    }
}
