//! Classification records and their text / JSON renderings.

use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::ramfilt::Filtration;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Status {
    FormulaOnly,
    OracleConfirmed,
    /// The available results do not pin down the filtration; names the hypothesis.
    Undetermined(String),
    /// Two routes that should agree do not.
    DiscrepancyFlag(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::FormulaOnly => "formula_only",
            Status::OracleConfirmed => "oracle_confirmed",
            Status::Undetermined(_) => "undetermined",
            Status::DiscrepancyFlag(_) => "discrepancy_flag",
        }
    }
}

mod rationals {
    use num_rational::Rational64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational64>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| {
                s.parse::<Rational64>()
                    .map_err(|e| D::Error::custom(format!("{s}: {e}")))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamReport {
    pub group: String,
    pub case: String,
    #[serde(with = "rationals")]
    pub upper_jumps: Vec<Rational64>,
    pub lower_jumps: Vec<i64>,
    pub orders: Vec<u64>,
    pub different_degree: Option<i64>,
    pub genus: Option<i64>,
    pub status: Status,
    pub notes: Vec<String>,
}

impl RamReport {
    /// Report for a determined filtration; the different degree is filled in.
    pub fn from_filtration(case: impl Into<String>, f: &Filtration, group: Option<String>) -> Self {
        let lower: Vec<i64> = f.lower.jumps().iter().map(|j| j.to_integer()).collect();
        RamReport {
            group: group.unwrap_or_else(|| f.lower.group().to_string()),
            case: case.into(),
            upper_jumps: f.upper.jumps().to_vec(),
            lower_jumps: lower,
            orders: f.lower.orders().to_vec(),
            different_degree: Some(f.different_degree()),
            genus: None,
            status: Status::FormulaOnly,
            notes: Vec::new(),
        }
    }

    pub fn undetermined(
        group: impl Into<String>,
        case: impl Into<String>,
        hypothesis: impl Into<String>,
    ) -> Self {
        RamReport {
            group: group.into(),
            case: case.into(),
            upper_jumps: Vec::new(),
            lower_jumps: Vec::new(),
            orders: Vec::new(),
            different_degree: None,
            genus: None,
            status: Status::Undetermined(hypothesis.into()),
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        fn list<T: ToString>(v: &[T]) -> String {
            if v.is_empty() {
                "-".into()
            } else {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        }
        fn opt(v: Option<i64>) -> String {
            v.map_or("-".into(), |x| x.to_string())
        }
        let mut out = String::new();
        let _ = writeln!(out, "group:            {}", self.group);
        let _ = writeln!(out, "case:             {}", self.case);
        let _ = writeln!(out, "upper jumps:      {}", list(&self.upper_jumps));
        let _ = writeln!(out, "lower jumps:      {}", list(&self.lower_jumps));
        let _ = writeln!(out, "orders:           {}", list(&self.orders));
        let _ = writeln!(out, "different degree: {}", opt(self.different_degree));
        let _ = writeln!(out, "genus:            {}", opt(self.genus));
        let detail = match &self.status {
            Status::Undetermined(d) | Status::DiscrepancyFlag(d) => format!(" ({d})"),
            _ => String::new(),
        };
        let _ = writeln!(out, "status:           {}{}", self.status.label(), detail);
        if !self.notes.is_empty() {
            let _ = writeln!(out, "notes:");
            for n in &self.notes {
                let _ = writeln!(out, "  - {n}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RamReport {
        RamReport {
            group: "Z/9".into(),
            case: "cyclic p^2".into(),
            upper_jumps: vec![Rational64::from_integer(1), Rational64::new(7, 3)],
            lower_jumps: vec![1, 7],
            orders: vec![9, 3, 1],
            different_degree: Some(24),
            genus: None,
            status: Status::DiscrepancyFlag("a vs b".into()),
            notes: vec!["first".into()],
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let j = r.to_json();
        assert!(j.contains("\"7/3\""));
        assert!(j.contains("\"kind\": \"discrepancy_flag\""));
        assert_eq!(RamReport::from_json(&j).unwrap(), r);
        assert_eq!(r.to_json(), j);
    }

    #[test]
    fn trivial_report_has_empty_arrays() {
        let r = RamReport {
            group: "1".into(),
            case: "trivial".into(),
            upper_jumps: vec![],
            lower_jumps: vec![],
            orders: vec![1],
            different_degree: Some(0),
            genus: None,
            status: Status::FormulaOnly,
            notes: vec![],
        };
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["upper_jumps"], serde_json::json!([]));
        assert_eq!(v["different_degree"], serde_json::json!(0));
        assert_eq!(v["status"], serde_json::json!({"kind": "formula_only"}));
    }

    #[test]
    fn text_lists_everything() {
        let t = sample().to_text();
        assert!(t.contains("upper jumps:      1, 7/3"));
        assert!(t.contains("status:           discrepancy_flag (a vs b)"));
        assert!(t.contains("  - first"));
    }
}
