//! JSON export and import of codeword pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::{CodePair, Construction, KlReport, OperatorChoice};
use crate::error::{Error, Result};
use crate::spin::{Ket, Spin, SpinSystem};

pub const CODEWORD_FORMAT: &str = "spinqec.codeword.v1";

/// Writes each float with 17 significant digits so values round-trip.
fn precise<S: Serializer>(values: &[f64], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    let raw: Vec<Box<RawValue>> = values
        .iter()
        .map(|v| RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom))
        .collect::<std::result::Result<_, _>>()?;
    raw.serialize(serializer)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalStateDocument {
    /// One entry per support element; each lists the `m` of every qudit.
    pub support_levels: Vec<Vec<f64>>,
    #[serde(serialize_with = "precise")]
    pub amplitudes_re: Vec<f64>,
    #[serde(serialize_with = "precise")]
    pub amplitudes_im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KlSummary {
    pub operators: OperatorChoice,
    pub passed: bool,
    pub tolerance: f64,
    pub max_cross_violation: f64,
    pub max_diag_violation: f64,
    pub normalized_cross_violation: f64,
    pub normalized_diag_violation: f64,
    pub gram_orthonormal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordDocument {
    pub format: String,
    pub spins: Vec<f64>,
    pub order: u32,
    pub construction: Construction,
    pub zero_logical: LogicalStateDocument,
    pub one_logical: LogicalStateDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kl: Option<KlSummary>,
}

fn state_document(system: &SpinSystem, ket: &Ket) -> LogicalStateDocument {
    let support = CodePair::support(ket);
    LogicalStateDocument {
        support_levels: support.iter().map(|&i| system.levels(i)).collect(),
        amplitudes_re: support.iter().map(|&i| ket.amplitude(i).re).collect(),
        amplitudes_im: support.iter().map(|&i| ket.amplitude(i).im).collect(),
    }
}

fn state_from_document(system: &SpinSystem, doc: &LogicalStateDocument) -> Result<Ket> {
    let n = doc.support_levels.len();
    if doc.amplitudes_re.len() != n || doc.amplitudes_im.len() != n {
        return Err(Error::Parse(format!(
            "support has {n} levels but {} real and {} imaginary amplitudes",
            doc.amplitudes_re.len(),
            doc.amplitudes_im.len()
        )));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); system.dim()];
    for ((levels, &re), &im) in doc
        .support_levels
        .iter()
        .zip(&doc.amplitudes_re)
        .zip(&doc.amplitudes_im)
    {
        let idx = system
            .basis_index(levels)
            .map_err(|e| Error::Parse(format!("bad support level {levels:?}: {e}")))?;
        amplitudes[idx] += Complex64::new(re, im);
    }
    Ok(Ket::new(amplitudes))
}

impl CodewordDocument {
    pub fn from_code(code: &CodePair, kl: Option<(&KlReport, OperatorChoice)>) -> Self {
        let system = code.system();
        CodewordDocument {
            format: CODEWORD_FORMAT.to_string(),
            spins: system.spins().iter().map(|s| s.value()).collect(),
            order: code.order(),
            construction: code.construction().clone(),
            zero_logical: state_document(system, code.zero_logical()),
            one_logical: state_document(system, code.one_logical()),
            kl: kl.map(|(r, operators)| KlSummary {
                operators,
                passed: r.passed,
                tolerance: r.tolerance,
                max_cross_violation: r.max_cross_violation,
                max_diag_violation: r.max_diag_violation,
                normalized_cross_violation: r.normalized_cross_violation,
                normalized_diag_violation: r.normalized_diag_violation,
                gram_orthonormal: r.gram_orthonormal,
            }),
        }
    }

    /// Rebuilds the code; normalization and orthogonality are re-checked.
    pub fn to_code(&self) -> Result<CodePair> {
        if self.format != CODEWORD_FORMAT {
            return Err(Error::Parse(format!(
                "unsupported format '{}' (expected '{CODEWORD_FORMAT}')",
                self.format
            )));
        }
        let spins = self
            .spins
            .iter()
            .map(|&s| Spin::new(s))
            .collect::<Result<Vec<_>>>()?;
        let system = SpinSystem::new(spins)?;
        let zero = state_from_document(&system, &self.zero_logical)?;
        let one = state_from_document(&system, &self.one_logical)?;
        CodePair::new(system, zero, one, self.order, self.construction.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{
        catalog_code, generate_code, multi_qudit_code, spin72_code, verify_kl, CodeFamily,
        MultiQuditCode,
    };
    use crate::spin::TOL;

    #[test]
    fn round_trip_is_exact() {
        for code in [
            spin72_code(),
            catalog_code("spin472").unwrap(),
            generate_code(2, CodeFamily::Even).unwrap(),
            multi_qudit_code(MultiQuditCode::ThreeSpinThreeHalves),
        ] {
            let doc = CodewordDocument::from_code(&code, None);
            let back = CodewordDocument::from_json(&doc.to_json().unwrap())
                .unwrap()
                .to_code()
                .unwrap();
            assert_eq!(back, code);
        }
    }

    #[test]
    fn amplitudes_carry_seventeen_digits() {
        let doc = CodewordDocument::from_code(&spin72_code(), None);
        let json = doc.to_json().unwrap();
        assert!(json.contains("5.4772255750516607e-1"), "{json}");
        assert!(json.contains("\"kind\": \"catalog\""));
    }

    #[test]
    fn kl_summary_is_embedded() {
        let code = spin72_code();
        let report = verify_kl(&code, 1, OperatorChoice::SingleSpin, TOL).unwrap();
        let doc = CodewordDocument::from_code(&code, Some((&report, OperatorChoice::SingleSpin)));
        let json = doc.to_json().unwrap();
        let back = CodewordDocument::from_json(&json).unwrap();
        assert!(back.kl.unwrap().passed);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let mut doc = CodewordDocument::from_code(&spin72_code(), None);
        doc.zero_logical.amplitudes_im.pop();
        assert!(matches!(doc.to_code(), Err(Error::Parse(_))));

        let mut doc = CodewordDocument::from_code(&spin72_code(), None);
        doc.format = "other".into();
        assert!(doc.to_code().is_err());

        let mut doc = CodewordDocument::from_code(&spin72_code(), None);
        doc.zero_logical.support_levels[0] = vec![4.0];
        assert!(doc.to_code().is_err());

        assert!(CodewordDocument::from_json("{").is_err());
    }
}
