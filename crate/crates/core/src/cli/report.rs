use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA: u32 = 1;

/// The statement each kind of report line instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    ModQValue,
    TorsionValue,
    RationalValue,
    ModQSequence,
    PqSequence,
    RationalTorsion,
    QzBockstein,
    ConeLemma,
    TensorCone,
    ConeValue,
    OrderBound,
    Colimit,
    Equivalence,
    RelevantPrimes,
    Catalog,
}

impl Anchor {
    pub const ALL: [Anchor; 15] = [
        Anchor::ModQValue,
        Anchor::TorsionValue,
        Anchor::RationalValue,
        Anchor::ModQSequence,
        Anchor::PqSequence,
        Anchor::RationalTorsion,
        Anchor::QzBockstein,
        Anchor::ConeLemma,
        Anchor::TensorCone,
        Anchor::ConeValue,
        Anchor::OrderBound,
        Anchor::Colimit,
        Anchor::Equivalence,
        Anchor::RelevantPrimes,
        Anchor::Catalog,
    ];

    pub fn formula(self) -> &'static str {
        match self {
            Anchor::ModQValue => "H^{(q)}_n = H_{n−2}(−⊗C_q)",
            Anchor::TorsionValue => "H^T_n(A) = lim_q H^{(q)}_n(A)",
            Anchor::RationalValue => "KK^G_n(A,B;ℚ) = KK^G_n(A,B)⊗ℚ",
            Anchor::ModQSequence => "H_n(A) →(q·) H_n(A) → H_n^{(q)}(A)",
            Anchor::PqSequence => "H_n^{(pq)}(A) →(q́) H_n^{(p)}(A)",
            Anchor::RationalTorsion => "H_n(A) →(r) H_n(A)⊗ℚ → H_n^T(A)",
            Anchor::QzBockstein => "H_n^T(A) →(q̂) H_n^{(q)}(A)",
            Anchor::ConeLemma => "C_{p_q} → C_p, which is a homotopy equivalence",
            Anchor::TensorCone => "A⊗C_q ≃ C_{id_A⊗q̂}",
            Anchor::ConeValue => "K₀(C_m) = Z_m",
            Anchor::OrderBound => "q·KK^G_n(A,B;ℤ_q) = 0",
            Anchor::Colimit => "lim_q ℤ^{q} ≅ ℚ via (q,r) ↦ r/q",
            Anchor::Equivalence => "The following Conjectures are equivalent",
            Anchor::RelevantPrimes => "τ^{(q)}: H^{(q)} → H̃^{(q)}",
            Anchor::Catalog => "H_n(A) as a function of n",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Echo {
    pub command: String,
    pub args: BTreeMap<String, String>,
}

/// One report line: a computed value (`pass` absent) or a check.
#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub check: String,
    pub subject: String,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub data: Value,
}

impl Item {
    pub fn value(check: &str, subject: impl Into<String>, anchor: Anchor, data: Value) -> Self {
        Item {
            check: check.into(),
            subject: subject.into(),
            anchor: anchor.formula().into(),
            pass: None,
            data,
        }
    }

    pub fn check(check: &str, subject: impl Into<String>, anchor: Anchor, pass: bool, data: Value) -> Self {
        Item {
            pass: Some(pass),
            ..Item::value(check, subject, anchor, data)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Echo,
    pub items: Vec<Item>,
    pub summary: Summary,
    /// Anchor formulas used by the items, keyed by check name.
    pub anchors: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: Echo, items: Vec<Item>, notes: Vec<String>) -> Result<Self> {
        let checks = items.iter().filter(|i| i.pass.is_some()).count();
        let passed = items.iter().filter(|i| i.pass == Some(true)).count();
        let anchors = items.iter().map(|i| (i.check.clone(), i.anchor.clone())).collect();
        let report = Report {
            schema: SCHEMA,
            command,
            summary: Summary {
                checks,
                passed,
                failed: checks - passed,
                verdict: if passed == checks { Verdict::Pass } else { Verdict::Fail },
            },
            items,
            anchors,
            notes,
        };
        report.validate()?;
        Ok(report)
    }

    /// Schema self-check: every line must carry a known anchor formula.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(Error::InvalidParameter(format!("unsupported report schema {}", self.schema)));
        }
        for (i, item) in self.items.iter().enumerate() {
            if !Anchor::ALL.iter().any(|a| a.formula() == item.anchor) {
                return Err(Error::InvalidParameter(format!(
                    "report line {i} ({} {}) has no recognised anchor: {:?}",
                    item.check, item.subject, item.anchor
                )));
            }
        }
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.summary.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let args: Vec<String> = self.command.args.iter().map(|(k, v)| format!("--{k} {v}")).collect();
        let _ = writeln!(out, "kkcoeff {} {}", self.command.command, args.join(" "));
        for item in &self.items {
            let status = match item.pass {
                Some(true) => "PASS ",
                Some(false) => "FAIL ",
                None => "",
            };
            let _ = writeln!(out, "{status}{:<18} {}", item.check, item.subject);
            if let Some(line) = item.data.get("summary").and_then(Value::as_str) {
                let _ = writeln!(out, "      {line}");
            }
        }
        if self.summary.checks > 0 {
            let _ = writeln!(
                out,
                "{}: {}/{} checks passed",
                if self.passed() { "PASS" } else { "FAIL" },
                self.summary.passed,
                self.summary.checks
            );
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn echo() -> Echo {
        Echo {
            command: "verify".into(),
            args: BTreeMap::new(),
        }
    }

    #[test]
    fn unanchored_lines_are_rejected() {
        let mut item = Item::check("mod-q", "point", Anchor::ModQSequence, true, Value::Null);
        assert!(Report::new(echo(), vec![item.clone()], vec![]).is_ok());
        item.anchor = String::new();
        assert!(Report::new(echo(), vec![item], vec![]).is_err());
    }

    #[test]
    fn summary_counts_checks_only() {
        let items = vec![
            Item::value("compute", "H0", Anchor::ModQValue, Value::Null),
            Item::check("order-bound", "point", Anchor::OrderBound, false, Value::Null),
        ];
        let r = Report::new(echo(), items, vec![]).unwrap();
        assert_eq!((r.summary.checks, r.summary.failed), (1, 1));
        assert!(!r.passed());
    }
}
