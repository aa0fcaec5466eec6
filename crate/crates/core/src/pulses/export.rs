use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Pulse, PulseKind, PulseSequence};
use crate::error::{Error, Result};
use crate::spin::{Ket, Spin};

pub const SEQUENCE_FORMAT: &str = "spinqec.pulses.v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseDocument {
    pub kind: PulseKind,
    /// `(m_low, m_high)`.
    pub target_pair: [f64; 2],
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub phase_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SequenceDocument {
    format: String,
    name: String,
    spin: f64,
    pulses: Vec<PulseDocument>,
}

pub fn sequence_to_json(seq: &PulseSequence, spin: Spin) -> Result<String> {
    let pulses = seq
        .pulses
        .iter()
        .map(|p| {
            p.validate(spin.dim())?;
            Ok(PulseDocument {
                kind: p.kind,
                target_pair: [spin.m(p.low), spin.m(p.high)],
                cos_theta: p.cos,
                sin_theta: p.sin,
                phase_flag: p.phase_flag,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = SequenceDocument {
        format: SEQUENCE_FORMAT.into(),
        name: seq.name.clone(),
        spin: spin.value(),
        pulses,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a sequence document; checkpoints are not part of the format.
pub fn sequence_from_json(text: &str) -> Result<(PulseSequence, Spin)> {
    let doc: SequenceDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.format != SEQUENCE_FORMAT {
        return Err(Error::Parse(format!("unsupported format '{}'", doc.format)));
    }
    let spin = Spin::new(doc.spin)?;
    let index = |m: f64| {
        spin.index_of(m)
            .ok_or_else(|| Error::Parse(format!("level {m} does not exist for spin {spin}")))
    };
    let pulses = doc
        .pulses
        .iter()
        .map(|p| {
            let pulse = Pulse {
                kind: p.kind,
                low: index(p.target_pair[0])?,
                high: index(p.target_pair[1])?,
                cos: p.cos_theta,
                sin: p.sin_theta,
                phase_flag: p.phase_flag,
            };
            pulse.validate(spin.dim())?;
            Ok(pulse)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((PulseSequence::new(doc.name, pulses), spin))
}

/// One row per basis level per state; index 0 is the input.
pub fn trace_to_csv(input: &Ket, trace: &[Ket], spin: Spin) -> String {
    let mut out = String::from("pulse_index,basis_level,amplitude_re,amplitude_im\n");
    for (i, ket) in std::iter::once(input).chain(trace).enumerate() {
        for level in 0..ket.dim() {
            let a = ket.amplitude(level);
            let _ = writeln!(out, "{i},{},{},{}", spin.m(level), a.re, a.im);
        }
    }
    out
}
