//! The storage cycle for the spin-7/2 code: encode, idle under relaxation,
//! decode, locate the error with subspace measurements, correct and
//! re-encode.
//!
//! Measurements act on the nuclear spin alone by default. The electron
//! ancilla readout (conditional swap, then an electron measurement) gives
//! the same statistics; [`measure_subspace_with_ancilla`] runs it in the
//! joint 16-level space.

mod sweep;

pub use sweep::{
    fidelity_sweep, loglog_slope, sweep_to_csv, threshold_crossings, threshold_estimate,
    SweepConfig, SweepMode, SweepRow, SWEEP_CSV_HEADER,
};

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{spin72_code, CodePair};
use crate::error::{Error, Result};
use crate::noise::{
    imperfect_pulse_in_place, ErrorKind, ErrorRates, PulseErrorModel, RelaxationChannel,
};
use crate::pulses::{
    correction_sequence, decoding_sequence, encoding_sequence, reencoding_sequence, PulseAlphabet,
    PulseSequence, BRANCH_TARGETS,
};
use crate::spin::{conjugate_map, spin_operators, DensityMatrix, Ket, Spin};

/// Probabilities below this are treated as impossible outcomes.
pub const MEASUREMENT_FLOOR: f64 = 1e-14;
/// Relaxation order used by [`qec_cycle`]; the first order alone is fully
/// corrected and leaves no residual infidelity.
pub const DEFAULT_RELAXATION_ORDER: u32 = 2;

const DIM: usize = 8;
const CLEAN_PAIR: (usize, usize) = (0, 7);

type CMatrix = DMatrix<Complex64>;

/// `alpha |0> + beta e^{i phi} |1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl Qubit {
    pub fn new(alpha: f64, beta: f64, phi: f64) -> Result<Self> {
        Qubit::from_amplitudes(Complex64::new(alpha, 0.0), Complex64::from_polar(beta, phi))
    }

    pub fn from_amplitudes(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "|alpha|^2 + |beta|^2 = {norm}, expected 1"
            )));
        }
        Ok(Qubit { alpha, beta })
    }

    /// Uniform on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        Qubit {
            alpha: Complex64::new(((1.0 + z) / 2.0).sqrt(), 0.0),
            beta: Complex64::from_polar(((1.0 - z) / 2.0).sqrt(), phi),
        }
    }

    /// The six eigenstates of X, Y and Z.
    pub fn pauli_states() -> [Qubit; 6] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let c = |a: Complex64, b: Complex64| Qubit { alpha: a, beta: b };
        [
            c(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            c(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            c(Complex64::new(r, 0.0), Complex64::new(r, 0.0)),
            c(Complex64::new(r, 0.0), Complex64::new(-r, 0.0)),
            c(Complex64::new(r, 0.0), Complex64::new(0.0, r)),
            c(Complex64::new(r, 0.0), Complex64::new(0.0, -r)),
        ]
    }

    /// The unencoded qubit on the two lowest levels of a spin-7/2.
    pub fn physical_ket(&self) -> Ket {
        let mut amps = vec![Complex64::new(0.0, 0.0); DIM];
        amps[0] = self.alpha;
        amps[1] = self.beta;
        Ket::new(amps)
    }
}

/// Outcome of the measurement cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diagnosis {
    None,
    X,
    Y,
    Z,
    Uncorrectable,
}

impl From<ErrorKind> for Diagnosis {
    fn from(kind: ErrorKind) -> Self {
        match kind {
            ErrorKind::None => Diagnosis::None,
            ErrorKind::X => Diagnosis::X,
            ErrorKind::Y => Diagnosis::Y,
            ErrorKind::Z => Diagnosis::Z,
        }
    }
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagnosis::None => "none",
            Diagnosis::X => "X",
            Diagnosis::Y => "Y",
            Diagnosis::Z => "Z",
            Diagnosis::Uncorrectable => "uncorrectable",
        })
    }
}

/// Level pair that holds the logical information after decoding, when
/// `kind` occurred.
pub fn branch_pair(kind: ErrorKind) -> (usize, usize) {
    BRANCH_TARGETS
        .iter()
        .find(|(k, _, _)| *k == kind)
        .map(|&(_, lo, hi)| (lo, hi))
        .expect("every error kind has a target pair")
}

/// Which decoded subspaces are probed, and in what order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementCascade {
    /// Errors whose subspace is probed, in order; each maps to its pair
    /// through [`branch_pair`].
    pub order: Vec<ErrorKind>,
    /// Optional number of probes per round for individual errors; errors
    /// not listed are probed once.
    pub schedule: Option<Vec<(ErrorKind, u32)>>,
}

impl Default for MeasurementCascade {
    fn default() -> Self {
        MeasurementCascade {
            order: vec![ErrorKind::Y, ErrorKind::X, ErrorKind::Z],
            schedule: None,
        }
    }
}

impl MeasurementCascade {
    pub fn new(order: Vec<ErrorKind>) -> Result<Self> {
        let cascade = MeasurementCascade {
            order,
            schedule: None,
        };
        cascade.validate()?;
        Ok(cascade)
    }

    /// `Z` probed first and twice as often as the others.
    pub fn z_priority() -> Self {
        MeasurementCascade {
            order: vec![ErrorKind::Z, ErrorKind::Y, ErrorKind::X],
            schedule: Some(vec![(ErrorKind::Z, 2)]),
        }
    }

    pub fn with_schedule(mut self, schedule: Vec<(ErrorKind, u32)>) -> Result<Self> {
        self.schedule = Some(schedule);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, k) in self.order.iter().enumerate() {
            if *k == ErrorKind::None {
                return Err(Error::invalid(
                    "the clean subspace is the cascade remainder, not a probe",
                ));
            }
            if self.order[..i].contains(k) {
                return Err(Error::invalid(format!(
                    "error {k} is probed twice in the order"
                )));
            }
        }
        if let Some(schedule) = &self.schedule {
            for (k, n) in schedule {
                if !self.order.contains(k) {
                    return Err(Error::invalid(format!(
                        "scheduled error {k} is not in the cascade"
                    )));
                }
                if *n == 0 {
                    return Err(Error::invalid(format!(
                        "error {k} has a probe frequency of zero"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The probed level pairs, in order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.order.iter().map(|&k| branch_pair(k)).collect()
    }

    fn frequency(&self, kind: ErrorKind) -> u32 {
        self.schedule
            .as_ref()
            .and_then(|s| s.iter().find(|(k, _)| *k == kind).map(|&(_, n)| n))
            .unwrap_or(1)
    }

    /// Probe sequence: in round `r`, every error with frequency above `r`
    /// in cascade order.
    pub fn probe_plan(&self) -> Vec<ErrorKind> {
        let rounds = self
            .order
            .iter()
            .map(|&k| self.frequency(k))
            .max()
            .unwrap_or(0);
        (0..rounds)
            .flat_map(|r| {
                self.order
                    .iter()
                    .copied()
                    .filter(move |&k| self.frequency(k) > r)
            })
            .collect()
    }

    /// Whether the unprobed levels are exactly the clean pair.
    fn covers_all_errors(&self) -> bool {
        ErrorKind::ERRORS.iter().all(|k| self.order.contains(k))
    }
}

impl FromStr for MeasurementCascade {
    type Err = Error;

    /// Comma-separated errors, e.g. `Y,X,Z`.
    fn from_str(s: &str) -> Result<Self> {
        let order = s
            .split(',')
            .map(|t| t.trim().parse::<ErrorKind>())
            .collect::<Result<Vec<_>>>()?;
        MeasurementCascade::new(order)
    }
}

impl fmt::Display for MeasurementCascade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.order.iter().map(|k| k.to_string()).collect();
        f.write_str(&names.join(","))
    }
}

fn pair_weight(m: &CMatrix, (lo, hi): (usize, usize)) -> f64 {
    m[(lo, lo)].re + m[(hi, hi)].re
}

/// `P m P` for the projector onto `pair`, or `(1 - P) m (1 - P)` when
/// `inside` is false.
fn project(m: &CMatrix, (lo, hi): (usize, usize), inside: bool) -> CMatrix {
    let in_pair = |k: usize| k == lo || k == hi;
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        if in_pair(r) == inside && in_pair(c) == inside {
            m[(r, c)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn check_pair(dim: usize, (lo, hi): (usize, usize)) -> Result<()> {
    if lo >= hi || hi >= dim {
        return Err(Error::invalid(format!(
            "level pair ({lo}, {hi}) is invalid for dimension {dim}"
        )));
    }
    Ok(())
}

/// Probability of outcome 1 (population of `pair`) and the collapsed
/// state for the requested outcome.
pub fn measure_subspace_forced(
    rho: &DensityMatrix,
    pair: (usize, usize),
    outcome: u8,
) -> Result<(f64, DensityMatrix)> {
    check_pair(rho.dim(), pair)?;
    let p1 = pair_weight(rho.matrix(), pair).clamp(0.0, 1.0);
    let probability = if outcome == 1 { p1 } else { 1.0 - p1 };
    if probability < MEASUREMENT_FLOOR {
        return Err(Error::DegenerateMeasurement {
            outcome,
            probability,
        });
    }
    let collapsed = project(rho.matrix(), pair, outcome == 1);
    let tr = collapsed.trace().re;
    Ok((
        probability,
        DensityMatrix::from_matrix_unchecked(collapsed.unscale(tr)),
    ))
}

/// Projective measurement of the population of `pair`: outcome 1 with
/// probability `Tr(P rho)`.
pub fn measure_subspace<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    pair: (usize, usize),
    rng: &mut R,
) -> Result<(u8, DensityMatrix)> {
    check_pair(rho.dim(), pair)?;
    let p1 = pair_weight(rho.matrix(), pair);
    let outcome = u8::from(rng.random::<f64>() < p1);
    let (_, collapsed) = measure_subspace_forced(rho, pair, outcome)?;
    Ok((outcome, collapsed))
}

/// Same measurement with an explicit electron ancilla: the joint state
/// `|0_e><0_e| (x) rho` undergoes a swap of the electron conditioned on the
/// nucleus being in `pair`, the electron is measured, and the nucleus is
/// returned.
pub fn measure_subspace_with_ancilla<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    pair: (usize, usize),
    rng: &mut R,
) -> Result<(u8, DensityMatrix)> {
    check_pair(rho.dim(), pair)?;
    let n = rho.dim();
    let in_pair = |k: usize| k == pair.0 || k == pair.1;
    // joint index = electron * n + nuclear
    let mut joint = CMatrix::zeros(2 * n, 2 * n);
    joint.view_mut((0, 0), (n, n)).copy_from(rho.matrix());
    let swap = CMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (er, nr, ec, nc) = (r / n, r % n, c / n, c % n);
        let hit = if in_pair(nc) { er != ec } else { er == ec };
        if nr == nc && hit {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let joint = &swap * joint * swap.adjoint();
    let p1 = (n..2 * n).map(|k| joint[(k, k)].re).sum::<f64>();
    let outcome = u8::from(rng.random::<f64>() < p1);
    let probability = if outcome == 1 { p1 } else { 1.0 - p1 };
    if probability < MEASUREMENT_FLOOR {
        return Err(Error::DegenerateMeasurement {
            outcome,
            probability,
        });
    }
    let offset = usize::from(outcome) * n;
    let nuclear = joint.view((offset, offset), (n, n)).into_owned();
    let tr = nuclear.trace().re;
    Ok((
        outcome,
        DensityMatrix::from_matrix_unchecked(nuclear.unscale(tr)),
    ))
}

#[derive(Debug, Clone)]
pub struct QecReport {
    pub identified_error: Diagnosis,
    pub recovered_state: DensityMatrix,
    /// `<psi_ideal| rho |psi_ideal>`.
    pub fidelity: f64,
    pub pulse_count: usize,
    pub measurement_outcomes: Vec<u8>,
}

/// Deterministic cycle: all measurement branches summed with their
/// probabilities.
#[derive(Debug, Clone)]
pub struct ExactCycle {
    pub fidelity: f64,
    pub recovered_state: DensityMatrix,
    pub branch_probabilities: Vec<(Diagnosis, f64)>,
    pub mean_pulse_count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub alphabet: PulseAlphabet,
    pub cascade: MeasurementCascade,
    /// Highest power of the spin operators kept in the relaxation channel.
    pub relaxation_order: u32,
    /// Measure through an explicit electron ancilla.
    pub ancilla: bool,
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig {
            alphabet: PulseAlphabet::default(),
            cascade: MeasurementCascade::default(),
            relaxation_order: DEFAULT_RELAXATION_ORDER,
            ancilla: false,
        }
    }
}

/// The frozen sequences and code for one configuration.
#[derive(Debug, Clone)]
pub struct Protocol {
    config: CycleConfig,
    code: CodePair,
    spin: Spin,
    encode: PulseSequence,
    decode: PulseSequence,
    corrections: Vec<(ErrorKind, PulseSequence)>,
    reencode: PulseSequence,
}

fn apply_sequence<R: Rng + ?Sized>(
    seq: &PulseSequence,
    m: &mut CMatrix,
    model: &PulseErrorModel,
    rng: &mut R,
) {
    for p in &seq.pulses {
        imperfect_pulse_in_place(p, m, model, rng);
    }
}

/// Stand-in stream for models that never draw.
fn unused_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0)
}

impl Protocol {
    pub fn new(config: CycleConfig) -> Result<Self> {
        config.cascade.validate()?;
        if config.relaxation_order == 0 {
            return Err(Error::invalid("relaxation order must be at least 1"));
        }
        let alphabet = config.alphabet;
        let corrections = [ErrorKind::None, ErrorKind::X, ErrorKind::Y, ErrorKind::Z]
            .into_iter()
            .map(|k| (k, correction_sequence(k, alphabet)))
            .collect();
        let protocol = Protocol {
            code: spin72_code(),
            spin: Spin::from_twice(7)?,
            encode: encoding_sequence(alphabet),
            decode: decoding_sequence(alphabet),
            corrections,
            reencode: reencoding_sequence(alphabet),
            config,
        };
        for seq in [&protocol.encode, &protocol.decode, &protocol.reencode]
            .into_iter()
            .chain(protocol.corrections.iter().map(|(_, s)| s))
        {
            for p in &seq.pulses {
                p.validate(DIM)?;
            }
        }
        Ok(protocol)
    }

    pub fn config(&self) -> &CycleConfig {
        &self.config
    }

    pub fn code(&self) -> &CodePair {
        &self.code
    }

    pub fn encoding(&self) -> &PulseSequence {
        &self.encode
    }

    pub fn decoding(&self) -> &PulseSequence {
        &self.decode
    }

    pub fn reencoding(&self) -> &PulseSequence {
        &self.reencode
    }

    pub fn correction(&self, kind: ErrorKind) -> &PulseSequence {
        &self
            .corrections
            .iter()
            .find(|(k, _)| *k == kind)
            .expect("corrections exist for every kind")
            .1
    }

    /// Relaxation channel at the configured order.
    pub fn channel(&self, rates: ErrorRates) -> Result<RelaxationChannel> {
        RelaxationChannel::new(self.spin, rates, self.config.relaxation_order)
    }

    /// `alpha |0_L> + beta |1_L>`.
    pub fn ideal_state(&self, qubit: &Qubit) -> Ket {
        self.code.encode(qubit.alpha, qubit.beta)
    }

    /// Encoded state after the storage interval, before decoding.
    pub fn stored_state<R: Rng + ?Sized>(
        &self,
        qubit: &Qubit,
        channel: &RelaxationChannel,
        pmodel: &PulseErrorModel,
        rng: &mut R,
    ) -> Result<DensityMatrix> {
        let mut m = DensityMatrix::from_ket(&qubit.physical_ket())
            .matrix()
            .clone();
        apply_sequence(&self.encode, &mut m, pmodel, rng);
        channel.apply(&DensityMatrix::from_matrix_unchecked(m))
    }

    fn measure<R: Rng + ?Sized>(
        &self,
        rho: &DensityMatrix,
        pair: (usize, usize),
        rng: &mut R,
    ) -> Result<(u8, DensityMatrix)> {
        if self.config.ancilla {
            measure_subspace_with_ancilla(rho, pair, rng)
        } else {
            measure_subspace(rho, pair, rng)
        }
    }

    /// Runs the cascade on a decoded state, then corrects and re-encodes.
    /// `fidelity` is taken against `ideal`.
    pub fn identify_and_correct<R: Rng + ?Sized>(
        &self,
        decoded: &DensityMatrix,
        pmodel: &PulseErrorModel,
        ideal: &Ket,
        rng: &mut R,
    ) -> Result<QecReport> {
        let mut state = decoded.clone();
        let mut outcomes = Vec::new();
        let mut identified = None;
        for kind in self.config.cascade.probe_plan() {
            let (outcome, collapsed) = self.measure(&state, branch_pair(kind), rng)?;
            outcomes.push(outcome);
            state = collapsed;
            if outcome == 1 {
                identified = Some(Diagnosis::from(kind));
                break;
            }
        }
        let identified = match identified {
            Some(d) => d,
            None if self.config.cascade.covers_all_errors() => Diagnosis::None,
            None => {
                let (outcome, collapsed) = self.measure(&state, CLEAN_PAIR, rng)?;
                outcomes.push(outcome);
                state = collapsed;
                if outcome == 1 {
                    Diagnosis::None
                } else {
                    Diagnosis::Uncorrectable
                }
            }
        };
        let mut m = state.matrix().clone();
        let mut pulses = self.reencode.len();
        if let Some(kind) = diagnosis_kind(identified) {
            let corr = self.correction(kind);
            pulses += corr.len();
            apply_sequence(corr, &mut m, pmodel, rng);
        }
        apply_sequence(&self.reencode, &mut m, pmodel, rng);
        let recovered = DensityMatrix::from_matrix_unchecked(m);
        Ok(QecReport {
            identified_error: identified,
            fidelity: recovered.fidelity_with(ideal),
            recovered_state: recovered,
            pulse_count: pulses,
            measurement_outcomes: outcomes,
        })
    }

    /// One sampled cycle.
    pub fn cycle<R: Rng + ?Sized>(
        &self,
        qubit: &Qubit,
        channel: &RelaxationChannel,
        pmodel: &PulseErrorModel,
        rng: &mut R,
    ) -> Result<QecReport> {
        let stored = self.stored_state(qubit, channel, pmodel, rng)?;
        let mut m = stored.matrix().clone();
        apply_sequence(&self.decode, &mut m, pmodel, rng);
        let decoded = DensityMatrix::from_matrix_unchecked(m);
        let mut report =
            self.identify_and_correct(&decoded, pmodel, &self.ideal_state(qubit), rng)?;
        report.pulse_count += self.encode.len() + self.decode.len();
        Ok(report)
    }

    /// One cycle with a single first-order error applied to the stored
    /// state in place of the relaxation channel.
    pub fn cycle_injected<R: Rng + ?Sized>(
        &self,
        qubit: &Qubit,
        error: ErrorKind,
        pmodel: &PulseErrorModel,
        rng: &mut R,
    ) -> Result<QecReport> {
        let mut m = DensityMatrix::from_ket(&qubit.physical_ket())
            .matrix()
            .clone();
        apply_sequence(&self.encode, &mut m, pmodel, rng);
        let rho = DensityMatrix::from_matrix_unchecked(m);
        let corrupted = match error.axis() {
            None => rho,
            Some(axis) => {
                let s = spin_operators(self.spin).axis(axis).clone();
                let image = conjugate_map(&s, &rho)?;
                let tr = image.trace();
                if tr < MEASUREMENT_FLOOR {
                    return Err(Error::DegenerateError);
                }
                DensityMatrix::from_matrix_unchecked(image.matrix().unscale(tr))
            }
        };
        let mut m = corrupted.matrix().clone();
        apply_sequence(&self.decode, &mut m, pmodel, rng);
        let decoded = DensityMatrix::from_matrix_unchecked(m);
        let mut report =
            self.identify_and_correct(&decoded, pmodel, &self.ideal_state(qubit), rng)?;
        report.pulse_count += self.encode.len() + self.decode.len();
        Ok(report)
    }

    /// Cycle with every measurement branch kept; needs a pulse model that
    /// makes no random draws.
    pub fn cycle_exact(
        &self,
        qubit: &Qubit,
        channel: &RelaxationChannel,
        pmodel: &PulseErrorModel,
    ) -> Result<ExactCycle> {
        if !pmodel.is_deterministic() {
            return Err(Error::invalid(format!(
                "the {} pulse model is stochastic; use Monte-Carlo mode",
                pmodel.kind
            )));
        }
        let mut rng = unused_rng();
        let stored = self.stored_state(qubit, channel, pmodel, &mut rng)?;
        let mut rest = stored.matrix().clone();
        apply_sequence(&self.decode, &mut rest, pmodel, &mut rng);

        let mut total = CMatrix::zeros(DIM, DIM);
        let mut branches = Vec::new();
        let mut pulses = 0.0;
        let mut finish = |kind: Option<ErrorKind>, mut part: CMatrix, diagnosis: Diagnosis| {
            let weight = part.trace().re;
            let mut n = self.reencode.len();
            if let Some(k) = kind {
                n += self.correction(k).len();
                apply_sequence(self.correction(k), &mut part, pmodel, &mut rng);
            }
            apply_sequence(&self.reencode, &mut part, pmodel, &mut rng);
            total += part;
            pulses += weight * n as f64;
            branches.push((diagnosis, weight));
        };
        for kind in self.config.cascade.probe_plan() {
            let pair = branch_pair(kind);
            let hit = project(&rest, pair, true);
            rest = project(&rest, pair, false);
            if hit.trace().re > 0.0 {
                finish(Some(kind), hit, Diagnosis::from(kind));
            }
        }
        if self.config.cascade.covers_all_errors() {
            finish(None, rest, Diagnosis::None);
        } else {
            finish(None, project(&rest, CLEAN_PAIR, true), Diagnosis::None);
            finish(
                None,
                project(&rest, CLEAN_PAIR, false),
                Diagnosis::Uncorrectable,
            );
        }
        let recovered = DensityMatrix::from_matrix_unchecked(total);
        Ok(ExactCycle {
            fidelity: recovered.fidelity_with(&self.ideal_state(qubit)),
            recovered_state: recovered,
            branch_probabilities: branches,
            mean_pulse_count: (self.encode.len() + self.decode.len()) as f64 + pulses,
        })
    }

    /// Fidelity of the unencoded qubit on levels `(-7/2, -5/2)` after the
    /// same relaxation channel.
    pub fn uncorrected_fidelity(&self, qubit: &Qubit, channel: &RelaxationChannel) -> Result<f64> {
        let ket = qubit.physical_ket();
        Ok(channel
            .apply(&DensityMatrix::from_ket(&ket))?
            .fidelity_with(&ket))
    }
}

fn diagnosis_kind(d: Diagnosis) -> Option<ErrorKind> {
    match d {
        Diagnosis::X => Some(ErrorKind::X),
        Diagnosis::Y => Some(ErrorKind::Y),
        Diagnosis::Z => Some(ErrorKind::Z),
        Diagnosis::None | Diagnosis::Uncorrectable => None,
    }
}

/// One cycle of the default protocol on `alpha |0> + beta e^{i phi} |1>`.
pub fn qec_cycle<R: Rng + ?Sized>(
    alpha: f64,
    beta: f64,
    phi: f64,
    rates: &ErrorRates,
    pmodel: &PulseErrorModel,
    rng: &mut R,
) -> Result<QecReport> {
    let protocol = Protocol::new(CycleConfig::default())?;
    let channel = protocol.channel(*rates)?;
    protocol.cycle(&Qubit::new(alpha, beta, phi)?, &channel, pmodel, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::corrupt_state;
    use crate::spin::Ket;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn maximally_mixed_probe_probability() {
        let rho = DensityMatrix::maximally_mixed(8);
        let (p, collapsed) = measure_subspace_forced(&rho, (3, 4), 1).unwrap();
        assert!((p - 0.25).abs() < 1e-15);
        assert!((collapsed.population(3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lowest_level_never_hits_middle_pair() {
        let rho = DensityMatrix::from_ket(&Ket::basis(8, 0));
        let (outcome, _) = measure_subspace(&rho, (3, 4), &mut rng()).unwrap();
        assert_eq!(outcome, 0);
        assert!(matches!(
            measure_subspace_forced(&rho, (3, 4), 1),
            Err(Error::DegenerateMeasurement { outcome: 1, .. })
        ));
    }

    #[test]
    fn ancilla_readout_matches_projection() {
        let ket = Ket::new(
            (0..8)
                .map(|k| Complex64::new(1.0 + k as f64, 0.5))
                .collect(),
        )
        .normalize()
        .unwrap();
        let rho = DensityMatrix::from_ket(&ket);
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (o1, s1) = measure_subspace(&rho, (2, 5), &mut a).unwrap();
            let (o2, s2) = measure_subspace_with_ancilla(&rho, (2, 5), &mut b).unwrap();
            assert_eq!(o1, o2);
            assert!(s1.max_abs_diff(&s2) < 1e-14);
        }
    }

    #[test]
    fn probe_plan_follows_schedule() {
        let c = MeasurementCascade::z_priority();
        assert_eq!(
            c.probe_plan(),
            vec![ErrorKind::Z, ErrorKind::Y, ErrorKind::X, ErrorKind::Z]
        );
        assert_eq!(
            MeasurementCascade::default().pairs(),
            vec![(3, 4), (2, 5), (1, 6)]
        );
        assert!("Y,X,Y".parse::<MeasurementCascade>().is_err());
        assert!("none".parse::<MeasurementCascade>().is_err());
        assert_eq!(
            "z, x".parse::<MeasurementCascade>().unwrap().to_string(),
            "Z,X"
        );
    }

    #[test]
    fn single_branches_are_corrected() {
        let protocol = Protocol::new(CycleConfig::default()).unwrap();
        let q = Qubit::new(0.6, 0.8, 0.3).unwrap();
        let ideal = protocol.ideal_state(&q);
        for kind in [ErrorKind::None, ErrorKind::X, ErrorKind::Y, ErrorKind::Z] {
            let corrupted = corrupt_state(&ideal, kind).unwrap();
            let decoded = protocol
                .decoding()
                .apply_to_density(&DensityMatrix::from_ket(&corrupted))
                .unwrap();
            let report = protocol
                .identify_and_correct(&decoded, &PulseErrorModel::ideal(), &ideal, &mut rng())
                .unwrap();
            assert_eq!(report.identified_error, Diagnosis::from(kind));
            assert!(
                (report.fidelity - 1.0).abs() < 1e-10,
                "{kind}: {}",
                report.fidelity
            );
        }
    }

    #[test]
    fn incomplete_cascade_reports_uncorrectable() {
        let config = CycleConfig {
            cascade: MeasurementCascade::new(vec![ErrorKind::Y, ErrorKind::X]).unwrap(),
            ..CycleConfig::default()
        };
        let protocol = Protocol::new(config).unwrap();
        let q = Qubit::new(1.0, 0.0, 0.0).unwrap();
        let ideal = protocol.ideal_state(&q);
        let corrupted = corrupt_state(&ideal, ErrorKind::Z).unwrap();
        let decoded = protocol
            .decoding()
            .apply_to_density(&DensityMatrix::from_ket(&corrupted))
            .unwrap();
        let report = protocol
            .identify_and_correct(&decoded, &PulseErrorModel::ideal(), &ideal, &mut rng())
            .unwrap();
        assert_eq!(report.identified_error, Diagnosis::Uncorrectable);
        assert_eq!(report.measurement_outcomes, vec![0, 0, 0]);
    }

    #[test]
    fn quiet_cycle_is_perfect() {
        let report = qec_cycle(
            0.6,
            0.8,
            1.1,
            &ErrorRates::zero(),
            &PulseErrorModel::ideal(),
            &mut rng(),
        )
        .unwrap();
        assert!((report.fidelity - 1.0).abs() < 1e-10);
        assert_eq!(report.identified_error, Diagnosis::None);
        assert_eq!(report.pulse_count, 12 + 21 + 9);
    }
}
