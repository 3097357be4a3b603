//! Machine-readable verification certificates and their canonical JSON
//! serialization.
//!
//! A [`Certificate`] records one claim: an ordered list of steps, each with
//! a human-readable description, a status, an optional rendered witness
//! polynomial, and an `anchor` — the mathematical statement the step checks,
//! in the kernel's own canonical notation. The claim is `verified` exactly
//! when every step either passed or is an explicitly cited assumption.
//!
//! Serialization is deterministic: fields appear in declaration order, output
//! uses LF line endings, and polynomials are rendered in canonical text form.
//! Timings are segregated under a trailing `perf` key that is excluded from
//! the canonical form (see [`canonical_json`]), so the canonical bytes of two
//! runs with identical inputs are identical.

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    /// The computation ran and agreed with the expected outcome.
    Passed,
    /// The computation ran and disagreed.
    Failed,
    /// A resource budget was exhausted before an answer was reached.
    Inconclusive,
    /// Not computed here: a recorded assumption with its statement.
    Cited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Verified,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Step {
    pub description: String,
    pub status: StepStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// The statement being checked, in canonical mathematical notation.
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Step {
    pub fn new(
        description: impl Into<String>,
        status: StepStatus,
        anchor: impl Into<String>,
    ) -> Step {
        Step {
            description: description.into(),
            status,
            witness: None,
            anchor: anchor.into(),
            note: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Step {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Step {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub claim_id: String,
    pub characteristics: Vec<u32>,
    pub overall: Overall,
    pub steps: Vec<Step>,
}

impl Certificate {
    /// Assembles a certificate, deriving `overall` from the steps: verified
    /// when every step passed or is a cited assumption, inconclusive when
    /// any budget ran out (and nothing failed), failed otherwise.
    pub fn from_steps(
        claim_id: impl Into<String>,
        characteristics: Vec<u32>,
        steps: Vec<Step>,
    ) -> Certificate {
        let mut overall = Overall::Verified;
        for s in &steps {
            match s.status {
                StepStatus::Failed => {
                    overall = Overall::Failed;
                    break;
                }
                StepStatus::Inconclusive => overall = Overall::Inconclusive,
                StepStatus::Passed | StepStatus::Cited => {}
            }
        }
        Certificate {
            claim_id: claim_id.into(),
            characteristics,
            overall,
            steps,
        }
    }
}

/// Wall-clock timings for one claim, in step order.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClaimPerf {
    pub claim_id: String,
    pub step_millis: Vec<u64>,
    pub total_millis: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Perf {
    pub claims: Vec<ClaimPerf>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateDocument {
    pub schema_version: &'static str,
    pub tool_version: &'static str,
    pub claims: Vec<Certificate>,
    /// Non-canonical timing data; always the last key, omitted from
    /// canonical bytes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perf: Option<Perf>,
}

impl CertificateDocument {
    pub fn new(claims: Vec<Certificate>, perf: Option<Perf>) -> CertificateDocument {
        CertificateDocument {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            claims,
            perf,
        }
    }

    /// True when every claim verified.
    pub fn all_verified(&self) -> bool {
        self.claims.iter().all(|c| c.overall == Overall::Verified)
    }

    /// Worst outcome across claims, for exit-status mapping.
    pub fn worst(&self) -> Overall {
        let mut worst = Overall::Verified;
        for c in &self.claims {
            match c.overall {
                Overall::Failed => return Overall::Failed,
                Overall::Inconclusive => worst = Overall::Inconclusive,
                Overall::Verified => {}
            }
        }
        worst
    }
}

/// Serializes the full document (including `perf` if present) as pretty
/// JSON with LF line endings and a trailing newline.
pub fn write_certificate(doc: &CertificateDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("certificate serialization");
    s.push('\n');
    s
}

/// Canonical bytes: the document with timings stripped. Two runs over
/// identical inputs produce identical canonical bytes.
pub fn canonical_json(doc: &CertificateDocument) -> String {
    let canon = CertificateDocument {
        schema_version: doc.schema_version,
        tool_version: doc.tool_version,
        claims: doc.claims.clone(),
        perf: None,
    };
    write_certificate(&canon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_serializes() {
        let doc = CertificateDocument::new(vec![], None);
        let s = write_certificate(&doc);
        assert!(s.starts_with("{\n  \"schemaVersion\": \"1\""));
        assert!(s.contains("\"claims\": []"));
        assert!(!s.contains("perf"));
        assert!(s.ends_with("\n"));
        assert!(!s.contains('\r'));
    }

    #[test]
    fn overall_is_derived_from_steps() {
        let pass = Step::new("a", StepStatus::Passed, "x");
        let cite = Step::new("b", StepStatus::Cited, "y");
        let fail = Step::new("c", StepStatus::Failed, "z");
        let inc = Step::new("d", StepStatus::Inconclusive, "w");

        let c = Certificate::from_steps("t", vec![2], vec![pass.clone(), cite.clone()]);
        assert_eq!(c.overall, Overall::Verified);
        let c = Certificate::from_steps("t", vec![2], vec![pass.clone(), inc.clone()]);
        assert_eq!(c.overall, Overall::Inconclusive);
        let c = Certificate::from_steps("t", vec![2], vec![inc, fail]);
        assert_eq!(c.overall, Overall::Failed);
    }

    #[test]
    fn canonical_bytes_ignore_perf() {
        let cert = Certificate::from_steps("t", vec![2], vec![]);
        let perf = Perf {
            claims: vec![ClaimPerf {
                claim_id: "t".into(),
                step_millis: vec![5],
                total_millis: 5,
            }],
        };
        let with = CertificateDocument::new(vec![cert.clone()], Some(perf));
        let without = CertificateDocument::new(vec![cert], None);
        assert_ne!(write_certificate(&with), write_certificate(&without));
        assert_eq!(canonical_json(&with), write_certificate(&without));
    }

    #[test]
    fn serialization_is_deterministic() {
        let step = Step::new("check", StepStatus::Passed, "f = g").with_witness("x + 1");
        let cert = Certificate::from_steps("demo", vec![2, 3], vec![step]);
        let doc = CertificateDocument::new(vec![cert], None);
        assert_eq!(write_certificate(&doc), write_certificate(&doc.clone()));
    }
}
