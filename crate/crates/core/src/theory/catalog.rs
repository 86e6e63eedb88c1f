use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;

use super::cone::cone_algebra;
use super::graded::{GradedTheory, TheoryWire};
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../data/catalog.json");

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(skip)]
    pub theory: GradedTheory,
    pub provenance: String,
}

impl CatalogEntry {
    pub fn to_wire(&self) -> TheoryWire {
        let mut w = self.theory.to_wire();
        w.provenance = Some(self.provenance.clone());
        w
    }
}

/// An immutable list of named theories with unique names.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("bundled catalog is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Catalog {
            entry: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    /// Parses entry by entry so errors name the offending entry.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| Error::Catalog {
            entry: "<file>".into(),
            reason: e.to_string(),
        })?;
        let mut entries = Vec::with_capacity(raw.len());
        let mut seen = BTreeSet::new();
        for (i, value) in raw.into_iter().enumerate() {
            let label = value
                .get("name")
                .and_then(|n| n.as_str())
                .map_or_else(|| format!("#{i}"), str::to_owned);
            let fail = |reason: String| Error::Catalog {
                entry: label.clone(),
                reason,
            };
            let wire: TheoryWire = serde_json::from_value(value).map_err(|e| fail(e.to_string()))?;
            let provenance = wire
                .provenance
                .clone()
                .ok_or_else(|| fail("missing provenance".into()))?;
            let theory = GradedTheory::from_wire(wire).map_err(|e| fail(e.to_string()))?;
            if !seen.insert(theory.name().to_owned()) {
                return Err(fail("duplicate name".into()));
            }
            entries.push(CatalogEntry {
                name: theory.name().to_owned(),
                theory,
                provenance,
            });
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Looks up a stored entry or builds one of the generated families
    /// `cuntz:N` (`O_N`) and `C_q(N)` (the cone algebra).
    pub fn resolve(&self, name: &str) -> Result<CatalogEntry> {
        if let Some(e) = self.get(name) {
            return Ok(e.clone());
        }
        let unknown = || Error::UnknownEntry(name.to_owned());
        if let Some(n) = name.strip_prefix("cuntz:") {
            let n: u64 = n.parse().map_err(|_| unknown())?;
            let theory = GradedTheory::cuntz(n)?;
            return Ok(CatalogEntry {
                name: name.to_owned(),
                theory,
                provenance: format!("Cuntz algebra O_{n}: K_0 = Z/{}, K_1 = 0", n - 1),
            });
        }
        if let Some(n) = name.strip_prefix("C_q(").and_then(|s| s.strip_suffix(')')) {
            let q: BigInt = n.parse().map_err(|_| unknown())?;
            let theory = cone_algebra(&q)?;
            return Ok(CatalogEntry {
                name: name.to_owned(),
                theory,
                provenance: format!("mapping cone of the power map z -> z^{q} on C_0(S^1)"),
            });
        }
        Err(unknown())
    }

    /// `all` expands to every stored entry; anything else resolves to one entry.
    pub fn select(&self, selector: &str) -> Result<Vec<CatalogEntry>> {
        if selector == "all" {
            Ok(self.entries.clone())
        } else {
            self.resolve(selector).map(|e| vec![e])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgAbGroup;

    #[test]
    fn builtin_contents() {
        let c = Catalog::builtin();
        let point = c.get("point").unwrap();
        assert_eq!(point.theory.group(0), &FgAbGroup::free(1));
        assert!(point.theory.group(1).is_zero());
        let torus = c.get("torus2").unwrap();
        assert_eq!(torus.theory.group(1), &FgAbGroup::free(2));
        let cq = c.resolve("C_q(6)").unwrap();
        assert_eq!(cq.theory.group(0), &FgAbGroup::cyclic(6));
        assert!(c.resolve("nowhere").is_err());
        assert!(c.resolve("cuntz:1").is_err());
    }

    #[test]
    fn malformed_entry_is_named() {
        let text = r#"[{"name":"good","period":2,"groups":{"0":{"rank":1,"torsion":[]},"1":{"rank":0,"torsion":[]}},"provenance":"x"},
                      {"name":"bad","period":2,"groups":{"0":{"rank":0,"torsion":[4,2]},"1":{"rank":0,"torsion":[]}},"provenance":"x"}]"#;
        match Catalog::from_json(text) {
            Err(Error::Catalog { entry, .. }) => assert_eq!(entry, "bad"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let e = r#"{"name":"a","period":2,"groups":{"0":{"rank":1,"torsion":[]},"1":{"rank":0,"torsion":[]}},"provenance":"x"}"#;
        assert!(Catalog::from_json(&format!("[{e},{e}]")).is_err());
    }
}
