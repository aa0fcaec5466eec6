//! Two-level pulses, the encoding and decoding sequences, and their
//! checkpointed simulation.
//!
//! A pulse on levels `(low, high)` acts on that pair as
//! `[[cos, -sin], [sin, cos]]` and as the identity elsewhere; a pi pulse is
//! the `cos = 0, sin = 1` case. Setting `phase_flag` negates `sin`, which
//! gives both `U_{-theta}` and the inverse pi pulse.

mod export;
mod sequences;
mod synth;

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{DensityMatrix, Ket, Operator};

pub use export::{
    sequence_from_json, sequence_to_json, trace_to_csv, PulseDocument, SEQUENCE_FORMAT,
};
pub use sequences::{
    correction_sequence, decoding_sequence, encoding_sequence, reencoding_sequence, BRANCH_TARGETS,
};
pub use synth::synthesize_pi_targets;

/// Largest checkpoint deviation accepted by [`run_sequence`].
pub const CHECKPOINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseKind {
    Pi,
    Rotation,
}

/// Which level pairs a pulse may address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PulseAlphabet {
    /// Only `Delta m = +-1` transitions.
    #[default]
    Adjacent,
    /// `Delta m = +-1` and `Delta m = +-2` transitions.
    Extended,
}

impl PulseAlphabet {
    pub fn max_level_gap(self) -> usize {
        match self {
            PulseAlphabet::Adjacent => 1,
            PulseAlphabet::Extended => 2,
        }
    }

    pub fn allows(self, low: usize, high: usize) -> bool {
        low != high && low.abs_diff(high) <= self.max_level_gap()
    }

    /// All addressable `(low, high)` pairs in a `dim`-level system.
    pub fn pairs(self, dim: usize) -> Vec<(usize, usize)> {
        (0..dim)
            .flat_map(|lo| (lo + 1..dim).map(move |hi| (lo, hi)))
            .filter(|&(lo, hi)| self.allows(lo, hi))
            .collect()
    }
}

impl fmt::Display for PulseAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseAlphabet::Adjacent => "adjacent",
            PulseAlphabet::Extended => "extended",
        })
    }
}

impl std::str::FromStr for PulseAlphabet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacent" => Ok(PulseAlphabet::Adjacent),
            "extended" => Ok(PulseAlphabet::Extended),
            other => Err(Error::invalid(format!(
                "unknown pulse alphabet '{other}' (expected 'adjacent' or 'extended')"
            ))),
        }
    }
}

/// A rotation angle stored through its cosine and sine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationAngle {
    pub cos: f64,
    pub sin: f64,
}

impl RotationAngle {
    /// Angle in `[0, pi/2]` with the given cosine.
    pub fn from_cos(cos: f64) -> Self {
        RotationAngle {
            cos,
            sin: (1.0 - cos * cos).max(0.0).sqrt(),
        }
    }

    pub fn from_radians(theta: f64) -> Self {
        RotationAngle {
            cos: theta.cos(),
            sin: theta.sin(),
        }
    }

    pub fn radians(self) -> f64 {
        self.sin.atan2(self.cos)
    }

    /// `cos theta_1 = sqrt(3/10)`.
    pub fn theta1() -> Self {
        RotationAngle::from_cos(0.3_f64.sqrt())
    }

    /// `cos theta_2 = sqrt(7/10)`.
    pub fn theta2() -> Self {
        RotationAngle::from_cos(0.7_f64.sqrt())
    }

    /// `cos theta_3 = sqrt(1/5)`.
    pub fn theta3() -> Self {
        RotationAngle::from_cos(0.2_f64.sqrt())
    }

    /// `cos theta_4 = sqrt(1/2)`.
    pub fn theta4() -> Self {
        RotationAngle::from_cos(0.5_f64.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub kind: PulseKind,
    pub low: usize,
    pub high: usize,
    pub cos: f64,
    pub sin: f64,
    pub phase_flag: bool,
}

impl Pulse {
    pub fn pi(low: usize, high: usize) -> Self {
        Pulse {
            kind: PulseKind::Pi,
            low,
            high,
            cos: 0.0,
            sin: 1.0,
            phase_flag: false,
        }
    }

    pub fn rotation(low: usize, high: usize, angle: RotationAngle) -> Self {
        Pulse {
            kind: PulseKind::Rotation,
            low,
            high,
            cos: angle.cos,
            sin: angle.sin,
            phase_flag: false,
        }
    }

    pub fn with_phase_flag(mut self, flag: bool) -> Self {
        self.phase_flag = flag;
        self
    }

    /// The inverse pulse (`U^T` of the real block).
    pub fn inverse(&self) -> Pulse {
        Pulse {
            phase_flag: !self.phase_flag,
            ..*self
        }
    }

    /// `(cos, sin)` of the block actually applied.
    pub fn block(&self) -> (f64, f64) {
        if self.phase_flag {
            (self.cos, -self.sin)
        } else {
            (self.cos, self.sin)
        }
    }

    /// Signed block angle in radians.
    pub fn angle(&self) -> f64 {
        let (c, s) = self.block();
        s.atan2(c)
    }

    /// The same pulse with its block angle shifted by `delta`.
    pub fn rotated_by(&self, delta: f64) -> Pulse {
        let theta = self.angle() + delta;
        Pulse {
            cos: theta.cos(),
            sin: theta.sin(),
            phase_flag: false,
            ..*self
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.low >= self.high {
            return Err(Error::invalid(format!(
                "pulse levels ({}, {}) must satisfy low < high",
                self.low, self.high
            )));
        }
        if self.high >= dim {
            return Err(Error::invalid(format!(
                "pulse level {} outside a {dim}-level system",
                self.high
            )));
        }
        if ((self.cos * self.cos + self.sin * self.sin) - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("pulse block is not a rotation"));
        }
        Ok(())
    }

    /// Applies the pulse to amplitudes in place.
    pub(crate) fn act(&self, amps: &mut [Complex64]) {
        let (c, s) = self.block();
        let (a, b) = (amps[self.low], amps[self.high]);
        amps[self.low] = a * c - b * s;
        amps[self.high] = a * s + b * c;
    }

    pub fn apply_to_ket(&self, ket: &Ket) -> Result<Ket> {
        self.validate(ket.dim())?;
        let mut out = ket.clone();
        self.act(out.amplitudes_mut().as_mut_slice());
        Ok(out)
    }

    /// `U rho U^dagger`, touching only the two affected rows and columns.
    pub fn apply_to_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.validate(rho.dim())?;
        let mut out = rho.clone();
        self.conjugate_in_place(out.matrix_mut());
        Ok(out)
    }

    pub(crate) fn conjugate_in_place(&self, m: &mut DMatrix<Complex64>) {
        let (c, s) = self.block();
        let (lo, hi) = (self.low, self.high);
        for j in 0..m.ncols() {
            let (a, b) = (m[(lo, j)], m[(hi, j)]);
            m[(lo, j)] = a * c - b * s;
            m[(hi, j)] = a * s + b * c;
        }
        for i in 0..m.nrows() {
            let (a, b) = (m[(i, lo)], m[(i, hi)]);
            m[(i, lo)] = a * c - b * s;
            m[(i, hi)] = a * s + b * c;
        }
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.phase_flag { "-" } else { "" };
        match self.kind {
            PulseKind::Pi => write!(f, "{sign}pi({},{})", self.low, self.high),
            PulseKind::Rotation => write!(
                f,
                "U[{sign}{:.4}]({},{})",
                self.sin.atan2(self.cos),
                self.low,
                self.high
            ),
        }
    }
}

/// Embeds a pulse into a `dim`-level identity.
pub fn pulse_unitary(pulse: &Pulse, dim: usize) -> Result<Operator> {
    pulse.validate(dim)?;
    let mut m = DMatrix::<Complex64>::identity(dim, dim);
    let (c, s) = pulse.block();
    m[(pulse.low, pulse.low)] = Complex64::new(c, 0.0);
    m[(pulse.low, pulse.high)] = Complex64::new(-s, 0.0);
    m[(pulse.high, pulse.low)] = Complex64::new(s, 0.0);
    m[(pulse.high, pulse.high)] = Complex64::new(c, 0.0);
    Operator::from_matrix(m)
}

/// A state linear in the qubit amplitudes: `alpha * a + beta * b`, where
/// `beta` already includes the phase `e^{i phi}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricKet {
    pub alpha: Ket,
    pub beta: Ket,
}

impl ParametricKet {
    pub fn new(alpha: Ket, beta: Ket) -> Result<Self> {
        if alpha.dim() != beta.dim() {
            return Err(Error::invalid("parametric components differ in dimension"));
        }
        Ok(ParametricKet { alpha, beta })
    }

    /// From `(index, alpha coefficient, beta coefficient)` triples.
    pub fn from_entries(dim: usize, entries: &[(usize, f64, f64)]) -> Self {
        let mut a = vec![0.0; dim];
        let mut b = vec![0.0; dim];
        for &(i, ca, cb) in entries {
            a[i] += ca;
            b[i] += cb;
        }
        ParametricKet {
            alpha: Ket::from_real(&a),
            beta: Ket::from_real(&b),
        }
    }

    /// `alpha |low> + beta |high>`.
    pub fn pair(dim: usize, low: usize, high: usize) -> Self {
        ParametricKet::from_entries(dim, &[(low, 1.0, 0.0), (high, 0.0, 1.0)])
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn evaluate(&self, alpha: Complex64, beta: Complex64) -> Ket {
        &self.alpha.scale(alpha) + &self.beta.scale(beta)
    }

    pub fn apply(&self, pulse: &Pulse) -> Result<ParametricKet> {
        Ok(ParametricKet {
            alpha: pulse.apply_to_ket(&self.alpha)?,
            beta: pulse.apply_to_ket(&self.beta)?,
        })
    }

    /// Largest coefficient deviation, valid for every `(alpha, beta)`.
    pub fn max_abs_diff(&self, other: &ParametricKet) -> f64 {
        self.alpha
            .max_abs_diff(&other.alpha)
            .max(self.beta.max_abs_diff(&other.beta))
    }

    /// Coordinates of `ket` in the span of the two components, if it lies
    /// in that span within `tol`.
    pub fn coordinates(&self, ket: &Ket, tol: f64) -> Option<(Complex64, Complex64)> {
        if ket.dim() != self.dim() {
            return None;
        }
        let na = self.alpha.norm_sqr();
        let nb = self.beta.norm_sqr();
        if na < 1e-24 || nb < 1e-24 {
            return None;
        }
        let a = self.alpha.inner(ket).ok()? / na;
        let b = self.beta.inner(ket).ok()? / nb;
        let rebuilt = self.evaluate(a, b);
        (rebuilt.max_abs_diff(ket) <= tol).then_some((a, b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    /// Number of pulses applied before the comparison.
    pub after: usize,
    pub expected: ParametricKet,
}

/// One input family with the states expected along the sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointBranch {
    pub name: String,
    pub input: ParametricKet,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub name: String,
    pub pulses: Vec<Pulse>,
    pub branches: Vec<CheckpointBranch>,
}

impl PulseSequence {
    pub fn new(name: impl Into<String>, pulses: Vec<Pulse>) -> Self {
        PulseSequence {
            name: name.into(),
            pulses,
            branches: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// The sequence that undoes this one.
    pub fn inverse(&self) -> PulseSequence {
        PulseSequence::new(
            format!("{}^-1", self.name),
            self.pulses.iter().rev().map(Pulse::inverse).collect(),
        )
    }

    /// Pulses of `self` followed by those of `other`; checkpoints dropped.
    pub fn then(&self, other: &PulseSequence) -> PulseSequence {
        let mut pulses = self.pulses.clone();
        pulses.extend_from_slice(&other.pulses);
        PulseSequence::new(format!("{}+{}", self.name, other.name), pulses)
    }

    /// Product of the pulse unitaries in application order.
    pub fn unitary(&self, dim: usize) -> Result<Operator> {
        let mut m = DMatrix::<Complex64>::identity(dim, dim);
        for p in &self.pulses {
            p.validate(dim)?;
            for j in 0..dim {
                let (c, s) = p.block();
                let (a, b) = (m[(p.low, j)], m[(p.high, j)]);
                m[(p.low, j)] = a * c - b * s;
                m[(p.high, j)] = a * s + b * c;
            }
        }
        Operator::from_matrix(m)
    }

    pub fn apply_to_ket(&self, ket: &Ket) -> Result<Ket> {
        let mut out = ket.clone();
        {
            let amps = out.amplitudes_mut().as_mut_slice();
            for p in &self.pulses {
                p.validate(amps.len())?;
                p.act(amps);
            }
        }
        Ok(out)
    }

    pub fn apply_to_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let mut out = rho.clone();
        for p in &self.pulses {
            p.validate(rho.dim())?;
            p.conjugate_in_place(out.matrix_mut());
        }
        Ok(out)
    }

    /// Propagates every branch parametrically and reports the deviation at
    /// each checkpoint. Holds for all `(alpha, beta)` at once.
    pub fn verify_checkpoints(&self) -> Result<Vec<CheckpointResult>> {
        let mut results = Vec::new();
        for branch in &self.branches {
            let mut state = branch.input.clone();
            let mut applied = 0;
            let mut pending: Vec<&Checkpoint> = branch.checkpoints.iter().collect();
            pending.sort_by_key(|c| c.after);
            for cp in pending {
                while applied < cp.after {
                    let pulse = self.pulses.get(applied).ok_or_else(|| {
                        Error::invalid(format!(
                            "checkpoint after pulse {} is past the end",
                            cp.after
                        ))
                    })?;
                    state = state.apply(pulse)?;
                    applied += 1;
                }
                results.push(CheckpointResult {
                    branch: branch.name.clone(),
                    after: cp.after,
                    deviation: state.max_abs_diff(&cp.expected),
                });
            }
        }
        Ok(results)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointResult {
    pub branch: String,
    pub after: usize,
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct SequenceRun {
    pub output: Ket,
    /// State after each pulse, when recording.
    pub trace: Option<Vec<Ket>>,
    pub checkpoints: Vec<CheckpointResult>,
}

/// Applies `seq` to `input`. If `input` lies in the span of a branch's
/// input, that branch's checkpoints are evaluated at the matching
/// `(alpha, beta)`.
pub fn run_sequence(seq: &PulseSequence, input: &Ket, record: bool) -> Result<SequenceRun> {
    let dim = input.dim();
    for p in &seq.pulses {
        p.validate(dim)?;
    }
    let matched: Vec<(&CheckpointBranch, Complex64, Complex64)> = seq
        .branches
        .iter()
        .filter_map(|b| {
            b.input
                .coordinates(input, CHECKPOINT_TOL)
                .map(|(a, be)| (b, a, be))
        })
        .collect();

    let mut state = input.clone();
    let mut trace = record.then(|| Vec::with_capacity(seq.len()));
    let mut checkpoints = Vec::new();
    let check = |after: usize, state: &Ket, out: &mut Vec<CheckpointResult>| -> Result<()> {
        for (branch, a, b) in &matched {
            for cp in branch.checkpoints.iter().filter(|c| c.after == after) {
                let deviation = cp.expected.evaluate(*a, *b).max_abs_diff(state);
                if deviation > CHECKPOINT_TOL {
                    return Err(Error::CheckpointViolation {
                        pulse_index: after,
                        deviation,
                    });
                }
                out.push(CheckpointResult {
                    branch: branch.name.clone(),
                    after,
                    deviation,
                });
            }
        }
        Ok(())
    };
    check(0, &state, &mut checkpoints)?;
    for (i, p) in seq.pulses.iter().enumerate() {
        p.act(state.amplitudes_mut().as_mut_slice());
        if let Some(t) = trace.as_mut() {
            t.push(state.clone());
        }
        check(i + 1, &state, &mut checkpoints)?;
    }
    Ok(SequenceRun {
        output: state,
        trace,
        checkpoints,
    })
}
