//! Check reports: per-case records with verdicts and typed quantities.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::numeric::{ExtNonneg, Rat, VecQ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Unsupported,
    Exempt,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Where a number came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    Bracket,
    FloatReference,
}

const SIG: usize = 12;

fn ext_decimal(x: &ExtNonneg) -> String {
    match x {
        ExtNonneg::Finite(q) => q.to_decimal(SIG),
        ExtNonneg::Infinity => "inf".into(),
    }
}

/// A named number. Exact values carry the rational string, brackets carry
/// both ends, float references only a decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
    pub decimal: String,
}

impl Quantity {
    pub fn rat(name: &str, q: &Rat) -> Quantity {
        Quantity {
            name: name.into(),
            provenance: Provenance::Exact,
            exact: Some(q.to_string()),
            lo: None,
            hi: None,
            decimal: q.to_decimal(SIG),
        }
    }

    pub fn ext(name: &str, x: &ExtNonneg) -> Quantity {
        Quantity {
            name: name.into(),
            provenance: Provenance::Exact,
            exact: Some(x.to_string()),
            lo: None,
            hi: None,
            decimal: ext_decimal(x),
        }
    }

    pub fn vector(name: &str, v: &VecQ) -> Quantity {
        let parts = |f: &dyn Fn(&Rat) -> String| v.components().iter().map(f).collect::<Vec<_>>().join(", ");
        Quantity {
            name: name.into(),
            provenance: Provenance::Exact,
            exact: Some(format!("({})", parts(&|q| q.to_string()))),
            lo: None,
            hi: None,
            decimal: format!("({})", parts(&|q| q.to_decimal(SIG))),
        }
    }

    pub fn bracket(name: &str, lo: &ExtNonneg, hi: &ExtNonneg) -> Quantity {
        Quantity {
            name: name.into(),
            provenance: Provenance::Bracket,
            exact: None,
            lo: Some(lo.to_string()),
            hi: Some(hi.to_string()),
            decimal: format!("[{}, {}]", ext_decimal(lo), ext_decimal(hi)),
        }
    }

    pub fn float(name: &str, x: f64) -> Quantity {
        let decimal = match Rat::from_f64(x) {
            Some(q) => q.to_decimal(SIG),
            None => x.to_string(),
        };
        Quantity { name: name.into(), provenance: Provenance::FloatReference, exact: None, lo: None, hi: None, decimal }
    }

    pub fn flag(name: &str, b: bool) -> Quantity {
        Quantity {
            name: name.into(),
            provenance: Provenance::Exact,
            exact: Some(b.to_string()),
            lo: None,
            hi: None,
            decimal: b.to_string(),
        }
    }
}

/// One checked case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub case: usize,
    pub label: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, String>,
    #[serde(default)]
    pub values: Vec<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Rat>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    pub fn new(case: usize, label: impl Into<String>) -> Record {
        Record {
            case,
            label: label.into(),
            inputs: BTreeMap::new(),
            values: Vec::new(),
            residual: None,
            verdict: Verdict::Pass,
            note: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Record {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn value(mut self, q: Quantity) -> Record {
        self.values.push(q);
        self
    }

    pub fn residual(mut self, r: Rat) -> Record {
        self.residual = Some(r);
        self
    }

    pub fn verdict(mut self, v: Verdict) -> Record {
        self.verdict = v;
        self
    }

    pub fn pass_if(self, ok: bool) -> Record {
        self.verdict(Verdict::from_bool(ok))
    }

    pub fn note(mut self, n: impl Into<String>) -> Record {
        self.note = Some(n.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unsupported: usize,
    pub exempt: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<Rat>,
}

impl Summary {
    pub fn absorb(&mut self, other: &Summary) {
        self.pass += other.pass;
        self.fail += other.fail;
        self.unsupported += other.unsupported;
        self.exempt += other.exempt;
        if let Some(r) = &other.max_residual {
            if self.max_residual.as_ref().is_none_or(|m| r > m) {
                self.max_residual = Some(r.clone());
            }
        }
    }
}

/// The records of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub records: Vec<Record>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> CheckReport {
        CheckReport { check: check.into(), records: Vec::new() }
    }

    /// Collects records, numbering cases in order.
    pub fn with_records(check: impl Into<String>, records: impl IntoIterator<Item = Record>) -> CheckReport {
        let mut rep = CheckReport::new(check);
        for r in records {
            rep.push(r);
        }
        rep
    }

    pub fn push(&mut self, mut r: Record) {
        r.case = self.records.len();
        self.records.push(r);
    }

    pub fn extend(&mut self, other: CheckReport) {
        for r in other.records {
            self.push(r);
        }
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for r in &self.records {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Unsupported => s.unsupported += 1,
                Verdict::Exempt => s.exempt += 1,
            }
            if let Some(res) = &r.residual {
                if s.max_residual.as_ref().is_none_or(|m| res > m) {
                    s.max_residual = Some(res.clone());
                }
            }
        }
        s
    }

    /// No record failed. Unsupported and exempt records do not count as
    /// failures.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == v).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantities_render_both_ways() {
        let q = Quantity::rat("h", &"1025/513".parse().unwrap());
        assert_eq!(q.exact.as_deref(), Some("1025/513"));
        assert_eq!(q.decimal, "1.99805068226");
        let b = Quantity::bracket("m", &ExtNonneg::int(1), &ExtNonneg::Infinity);
        assert_eq!(b.decimal, "[1, inf]");
        assert_eq!(Quantity::float("r", 2.0).decimal, "2");
    }

    #[test]
    fn summary_counts() {
        let mut rep = CheckReport::new("demo");
        rep.push(Record::new(0, "a").residual(Rat::new(1, 4)));
        rep.push(Record::new(0, "b").verdict(Verdict::Fail).residual(Rat::new(1, 2)));
        rep.push(Record::new(0, "c").verdict(Verdict::Unsupported));
        let s = rep.summary();
        assert_eq!((s.pass, s.fail, s.unsupported), (1, 1, 1));
        assert_eq!(s.max_residual, Some(Rat::new(1, 2)));
        assert!(!rep.passed());
        assert_eq!(rep.records[2].case, 2);
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<CheckReport>(&json).unwrap(), rep);
    }
}
