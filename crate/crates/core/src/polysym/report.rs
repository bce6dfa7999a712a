//! Verification reports: one entry per identity, rendered as text or JSON.

use std::collections::BTreeMap;
use std::fmt;

use flexlab_algebra::{UnitCertificate, UnitStatus, UnitVerdict};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// `lhs * mu_den = n * rhs * mu_num`, with unit factors named as `(u+1)` etc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: String,
    pub mu_num: BTreeMap<String, u32>,
    pub mu_den: BTreeMap<String, u32>,
}

impl From<&UnitCertificate> for Certificate {
    fn from(c: &UnitCertificate) -> Self {
        Certificate { n: c.n.to_string(), mu_num: c.mu_num.clone(), mu_den: c.mu_den.clone() }
    }
}

impl Certificate {
    /// A bare rational factor.
    pub fn scalar(n: impl ToString) -> Certificate {
        Certificate { n: n.to_string(), mu_num: BTreeMap::new(), mu_den: BTreeMap::new() }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |m: &BTreeMap<String, u32>| {
            if m.is_empty() {
                "1".to_string()
            } else {
                m.iter()
                    .map(|(k, e)| if *e == 1 { k.clone() } else { format!("{k}^{e}") })
                    .collect::<Vec<_>>()
                    .join("*")
            }
        };
        write!(f, "n = {}, mu_num = {}, mu_den = {}", self.n, side(&self.mu_num), side(&self.mu_den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub status: Status,
    pub unit_certificate: Option<Certificate>,
    /// Terms of `lhs - rhs` (or of the residual that should vanish); zero on success.
    pub difference_terms: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl IdentityCheck {
    pub fn exact(identity: impl Into<String>, difference_terms: usize) -> IdentityCheck {
        IdentityCheck {
            identity: identity.into(),
            status: if difference_terms == 0 { Status::Ok } else { Status::Fail },
            unit_certificate: None,
            difference_terms,
            note: String::new(),
        }
    }

    pub fn from_bool(identity: impl Into<String>, holds: bool) -> IdentityCheck {
        IdentityCheck::exact(identity, usize::from(!holds))
    }

    pub fn from_verdict(identity: impl Into<String>, v: &UnitVerdict) -> IdentityCheck {
        let status = match v.status {
            UnitStatus::Equivalent => Status::Ok,
            UnitStatus::NotEquivalent => Status::Fail,
            UnitStatus::Inconclusive => Status::Inconclusive,
        };
        IdentityCheck {
            identity: identity.into(),
            status,
            unit_certificate: v.certificate.as_ref().map(Certificate::from),
            difference_terms: usize::from(status != Status::Ok),
            note: String::new(),
        }
    }

    pub fn failed(identity: impl Into<String>, note: impl Into<String>) -> IdentityCheck {
        IdentityCheck {
            identity: identity.into(),
            status: Status::Fail,
            unit_certificate: None,
            difference_terms: 1,
            note: note.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> IdentityCheck {
        self.note = note.into();
        self
    }

    pub fn with_certificate(mut self, c: Certificate) -> IdentityCheck {
        self.unit_certificate = Some(c);
        self
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<12} {}", self.status, self.identity)?;
        if let Some(c) = &self.unit_certificate {
            write!(f, " [{c}]")?;
        }
        if self.difference_terms > 0 && self.status == Status::Fail {
            write!(f, " (difference has {} terms)", self.difference_terms)?;
        }
        if !self.note.is_empty() {
            write!(f, " -- {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<IdentityCheck>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Report {
        Report { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: IdentityCheck) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// True when every identity has status `ok`.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::is_ok)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {}\n", self.suite);
        for c in &self.checks {
            s.push_str(&format!("  {c}\n"));
        }
        s.push_str(&format!(
            "  {} ok, {} failed, {} inconclusive\n",
            self.count(Status::Ok),
            self.count(Status::Fail),
            self.count(Status::Inconclusive)
        ));
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_and_rendering() {
        let mut r = Report::new("demo");
        r.push(IdentityCheck::exact("a = a", 0));
        assert!(r.passed());
        r.push(IdentityCheck::exact("a = b", 3));
        assert!(!r.passed());
        let text = r.to_text();
        assert!(text.contains(&format!("{:<12} a = a", "ok")));
        assert!(text.contains("difference has 3 terms"));
        let json = r.to_json();
        assert_eq!(json["checks"][1]["status"], "fail");
        assert_eq!(json["checks"][1]["difference_terms"], 3);
        let back: Report = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }
}
