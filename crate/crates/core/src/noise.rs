//! Relaxation channels and imperfect-pulse models.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulses::Pulse;
use crate::spin::{spin_operators, Axis, DensityMatrix, Ket, Operator, Spin, TOL};

/// Trace below which an error branch is treated as absent.
pub const BRANCH_TRACE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorKind {
    #[serde(rename = "none")]
    None,
    X,
    Y,
    Z,
}

impl ErrorKind {
    pub const ERRORS: [ErrorKind; 3] = [ErrorKind::X, ErrorKind::Y, ErrorKind::Z];

    pub fn axis(self) -> Option<Axis> {
        match self {
            ErrorKind::None => None,
            ErrorKind::X => Some(Axis::X),
            ErrorKind::Y => Some(Axis::Y),
            ErrorKind::Z => Some(Axis::Z),
        }
    }
}

impl From<Axis> for ErrorKind {
    fn from(axis: Axis) -> Self {
        match axis {
            Axis::X => ErrorKind::X,
            Axis::Y => ErrorKind::Y,
            Axis::Z => ErrorKind::Z,
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::None => f.write_str("none"),
            ErrorKind::X => f.write_str("X"),
            ErrorKind::Y => f.write_str("Y"),
            ErrorKind::Z => f.write_str("Z"),
        }
    }
}

impl FromStr for ErrorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" | "I" => Ok(ErrorKind::None),
            "X" | "x" => Ok(ErrorKind::X),
            "Y" | "y" => Ok(ErrorKind::Y),
            "Z" | "z" => Ok(ErrorKind::Z),
            other => Err(Error::invalid(format!("unknown error kind '{other}'"))),
        }
    }
}

/// Per-axis error probabilities for one storage interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRates {
    pub eps_x: f64,
    pub eps_y: f64,
    pub eps_z: f64,
    /// Set when the rates are isotropic and equal to `t / T`.
    pub t_over_t: Option<f64>,
}

impl ErrorRates {
    pub fn new(eps_x: f64, eps_y: f64, eps_z: f64) -> Result<Self> {
        for (name, v) in [("eps_x", eps_x), ("eps_y", eps_y), ("eps_z", eps_z)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        if eps_x + eps_y + eps_z > 1.0 + 1e-15 {
            return Err(Error::invalid("error rates sum to more than 1"));
        }
        Ok(ErrorRates {
            eps_x,
            eps_y,
            eps_z,
            t_over_t: None,
        })
    }

    /// `eps_x = eps_y = eps_z = t / T`.
    pub fn isotropic(t_over_t: f64) -> Result<Self> {
        let mut rates = ErrorRates::new(t_over_t, t_over_t, t_over_t)?;
        rates.t_over_t = Some(t_over_t);
        Ok(rates)
    }

    pub fn zero() -> Self {
        ErrorRates {
            eps_x: 0.0,
            eps_y: 0.0,
            eps_z: 0.0,
            t_over_t: Some(0.0),
        }
    }

    pub fn rate(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.eps_x,
            Axis::Y => self.eps_y,
            Axis::Z => self.eps_z,
        }
    }

    pub fn total(&self) -> f64 {
        self.eps_x + self.eps_y + self.eps_z
    }
}

/// `sqrt((t/T)^k / k!) S_i^k`.
pub fn error_operator(axis: Axis, k: u32, t_over_t: f64, spin: Spin) -> Operator {
    let factorial: f64 = (1..=k).map(f64::from).product();
    let scale = (t_over_t.powi(k as i32) / factorial).sqrt();
    spin_operators(spin)
        .axis(axis)
        .pow(k)
        .scale(Complex64::new(scale, 0.0))
}

fn spin_for_dim(dim: usize) -> Result<Spin> {
    if dim < 2 {
        return Err(Error::invalid("a spin needs at least two levels"));
    }
    Spin::from_twice(dim as u32 - 1)
}

/// Relaxation channel truncated at order `max_order`, with the operator
/// powers prepared once.
///
/// `rho -> w_0 rho + sum_{i,k} (eps_i^k / k!) S_i^k rho S_i^k / Tr(...)`,
/// where `w_0 = 1 - sum_{i,k} eps_i^k / k!`.
#[derive(Debug, Clone)]
pub struct RelaxationChannel {
    rates: ErrorRates,
    /// `(weight, S_i^k)` for every non-zero branch.
    branches: Vec<(f64, DMatrix<Complex64>)>,
    dim: usize,
}

impl RelaxationChannel {
    pub fn new(spin: Spin, rates: ErrorRates, max_order: u32) -> Result<Self> {
        if max_order == 0 {
            return Err(Error::invalid(
                "relaxation channel order must be at least 1",
            ));
        }
        let ops = spin_operators(spin);
        let mut branches = Vec::new();
        let mut total = 0.0;
        for axis in Axis::ALL {
            let eps = rates.rate(axis);
            if eps == 0.0 {
                continue;
            }
            let mut factorial = 1.0;
            let mut power = ops.axis(axis).clone();
            for k in 1..=max_order {
                factorial *= f64::from(k);
                let w = eps.powi(k as i32) / factorial;
                total += w;
                branches.push((w, power.matrix().clone()));
                power = &power * ops.axis(axis);
            }
        }
        if total > 1.0 + 1e-15 {
            return Err(Error::invalid(format!(
                "branch weights sum to {total:.6}, leaving no room for the identity"
            )));
        }
        Ok(RelaxationChannel {
            rates,
            branches,
            dim: spin.dim(),
        })
    }

    pub fn rates(&self) -> &ErrorRates {
        &self.rates
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::invalid(format!(
                "density matrix has dimension {}, channel expects {}",
                rho.dim(),
                self.dim
            )));
        }
        let mut identity_weight = 1.0;
        let mut out = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (w, op) in &self.branches {
            let image = op * rho.matrix() * op.adjoint();
            let tr = image.trace().re;
            if tr < BRANCH_TRACE_FLOOR {
                continue;
            }
            identity_weight -= w;
            out += image.unscale(tr / w);
        }
        out += rho.matrix().scale(identity_weight);
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }
}

/// First-order channel: `(1 - eps) rho + sum_i eps_i S_i rho S_i / Tr(...)`.
pub fn apply_first_order_channel(rho: &DensityMatrix, rates: &ErrorRates) -> Result<DensityMatrix> {
    apply_relaxation_channel(rho, rates, 1)
}

/// Relaxation channel truncated at `max_order`; see [`RelaxationChannel`].
pub fn apply_relaxation_channel(
    rho: &DensityMatrix,
    rates: &ErrorRates,
    max_order: u32,
) -> Result<DensityMatrix> {
    rho.validate()?;
    RelaxationChannel::new(spin_for_dim(rho.dim())?, *rates, max_order)?.apply(rho)
}

/// Normalized `S_i |k>`, or `k` itself for [`ErrorKind::None`].
pub fn corrupt_state(ket: &Ket, which: ErrorKind) -> Result<Ket> {
    if (ket.norm_sqr() - 1.0).abs() > TOL {
        return Err(Error::invalid("corrupt_state expects a normalized ket"));
    }
    let Some(axis) = which.axis() else {
        return Ok(ket.clone());
    };
    let spin = spin_for_dim(ket.dim())?;
    let image = spin_operators(spin).axis(axis).apply(ket)?;
    if image.norm() < 1e-12 {
        return Err(Error::DegenerateError);
    }
    image.normalize()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseErrorKind {
    Ideal,
    DepolarizingPerPulse,
    OverRotation,
}

impl fmt::Display for PulseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseErrorKind::Ideal => "ideal",
            PulseErrorKind::DepolarizingPerPulse => "depolarizing",
            PulseErrorKind::OverRotation => "over-rotation",
        })
    }
}

impl FromStr for PulseErrorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(PulseErrorKind::Ideal),
            "depolarizing" | "depolarizing-per-pulse" => Ok(PulseErrorKind::DepolarizingPerPulse),
            "over-rotation" => Ok(PulseErrorKind::OverRotation),
            other => Err(Error::invalid(format!(
                "unknown pulse error model '{other}'"
            ))),
        }
    }
}

/// How each pulse deviates from its ideal unitary.
///
/// For the over-rotation model the rotation angle (`pi` for a pi pulse,
/// twice the block angle) receives a Gaussian error `delta`; the fidelity
/// of a state inside the pulsed pair is then `cos^2(delta / 2)`, whose mean
/// `(1 + exp(-sigma^2 / 2)) / 2` is matched to `fidelity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseErrorModel {
    pub kind: PulseErrorKind,
    pub fidelity: f64,
    pub over_rotation_sigma: f64,
}

impl PulseErrorModel {
    pub fn ideal() -> Self {
        PulseErrorModel {
            kind: PulseErrorKind::Ideal,
            fidelity: 1.0,
            over_rotation_sigma: 0.0,
        }
    }

    pub fn depolarizing(fidelity: f64) -> Result<Self> {
        if !(fidelity > 0.0 && fidelity <= 1.0) {
            return Err(Error::invalid(format!(
                "pulse fidelity {fidelity} is outside (0, 1]"
            )));
        }
        Ok(PulseErrorModel {
            kind: PulseErrorKind::DepolarizingPerPulse,
            fidelity,
            over_rotation_sigma: 0.0,
        })
    }

    /// Over-rotation with `sigma` calibrated to `fidelity`.
    pub fn over_rotation(fidelity: f64) -> Result<Self> {
        if !(fidelity > 0.5 && fidelity <= 1.0) {
            return Err(Error::invalid(format!(
                "over-rotation fidelity {fidelity} must lie in (0.5, 1]"
            )));
        }
        let sigma = (-2.0 * (2.0 * fidelity - 1.0).ln()).max(0.0).sqrt();
        Ok(PulseErrorModel {
            kind: PulseErrorKind::OverRotation,
            fidelity,
            over_rotation_sigma: sigma,
        })
    }

    pub fn over_rotation_with_sigma(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0) {
            return Err(Error::invalid("sigma must be non-negative"));
        }
        Ok(PulseErrorModel {
            kind: PulseErrorKind::OverRotation,
            fidelity: (1.0 + (-sigma * sigma / 2.0).exp()) / 2.0,
            over_rotation_sigma: sigma,
        })
    }

    pub fn from_kind(kind: PulseErrorKind, fidelity: f64) -> Result<Self> {
        match kind {
            PulseErrorKind::Ideal => Ok(PulseErrorModel::ideal()),
            PulseErrorKind::DepolarizingPerPulse => PulseErrorModel::depolarizing(fidelity),
            PulseErrorKind::OverRotation => PulseErrorModel::over_rotation(fidelity),
        }
    }

    pub fn is_ideal(&self) -> bool {
        match self.kind {
            PulseErrorKind::Ideal => true,
            PulseErrorKind::DepolarizingPerPulse => self.fidelity == 1.0,
            PulseErrorKind::OverRotation => self.over_rotation_sigma == 0.0,
        }
    }

    /// Whether the model is a fixed channel, needing no random draws.
    pub fn is_deterministic(&self) -> bool {
        self.kind != PulseErrorKind::OverRotation || self.over_rotation_sigma == 0.0
    }
}

/// Replaces the pulse's two-level block by its maximally mixed state of
/// the same weight and removes coherences between the block and the rest.
fn block_depolarize(pulse: &Pulse, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (lo, hi) = (pulse.low, pulse.high);
    let mut out = m.clone();
    for k in 0..m.nrows() {
        for (a, b) in [(lo, k), (hi, k), (k, lo), (k, hi)] {
            out[(a, b)] = Complex64::new(0.0, 0.0);
        }
    }
    let weight = (m[(lo, lo)].re + m[(hi, hi)].re) / 2.0;
    out[(lo, lo)] = Complex64::new(weight, 0.0);
    out[(hi, hi)] = Complex64::new(weight, 0.0);
    out
}

/// Applies `pulse` to `rho` under `model`, in place.
pub(crate) fn imperfect_pulse_in_place<R: Rng + ?Sized>(
    pulse: &Pulse,
    m: &mut DMatrix<Complex64>,
    model: &PulseErrorModel,
    rng: &mut R,
) {
    match model.kind {
        PulseErrorKind::Ideal => pulse.conjugate_in_place(m),
        PulseErrorKind::DepolarizingPerPulse => {
            if model.fidelity >= 1.0 {
                pulse.conjugate_in_place(m);
                return;
            }
            let depolarized = block_depolarize(pulse, m);
            pulse.conjugate_in_place(m);
            *m *= Complex64::new(model.fidelity, 0.0);
            *m += depolarized * Complex64::new(1.0 - model.fidelity, 0.0);
        }
        PulseErrorKind::OverRotation => {
            if model.over_rotation_sigma == 0.0 {
                pulse.conjugate_in_place(m);
                return;
            }
            let normal = Normal::new(0.0, model.over_rotation_sigma).expect("sigma is finite");
            let delta: f64 = normal.sample(rng);
            pulse.rotated_by(delta / 2.0).conjugate_in_place(m);
        }
    }
}

/// One pulse under the given error model.
pub fn imperfect_pulse<R: Rng + ?Sized>(
    pulse: &Pulse,
    rho: &DensityMatrix,
    model: &PulseErrorModel,
    rng: &mut R,
) -> Result<DensityMatrix> {
    pulse.validate(rho.dim())?;
    let mut m = rho.matrix().clone();
    imperfect_pulse_in_place(pulse, &mut m, model, rng);
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{error_basis, spin72_code};
    use crate::pulses::{encoding_sequence, pulse_unitary, PulseAlphabet};
    use crate::spin::conjugate_map;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spin72() -> Spin {
        Spin::new(3.5).unwrap()
    }

    #[test]
    fn error_operator_scaling() {
        let s = spin72();
        let ops = spin_operators(s);
        assert!(error_operator(Axis::X, 0, 0.3, s).max_abs_diff(&Operator::identity(8)) < 1e-15);
        let e = error_operator(Axis::Z, 1, 0.01, s);
        assert!(e.max_abs_diff(&ops.z.scale(Complex64::new(0.1, 0.0))) < 1e-15);
        let e2 = error_operator(Axis::X, 2, 0.04, s);
        let want = ops.x.pow(2).scale(Complex64::new(0.04 / 2f64.sqrt(), 0.0));
        assert!(e2.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn zero_rates_leave_state_unchanged() {
        let rho = DensityMatrix::from_ket(spin72_code().zero_logical());
        let out = apply_first_order_channel(&rho, &ErrorRates::zero()).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn z_error_on_zero_codeword() {
        let code = spin72_code();
        let rho = DensityMatrix::from_ket(code.zero_logical());
        let rates = ErrorRates::new(0.0, 0.0, 0.01).unwrap();
        let out = apply_first_order_channel(&rho, &rates).unwrap();
        let z = error_basis(&code)
            .unwrap()
            .into_iter()
            .find(|(l, _)| l == "S_Z|0_L>")
            .unwrap()
            .1;
        let want =
            DensityMatrix::mixture([(0.99, &rho), (0.01, &DensityMatrix::from_ket(&z))]).unwrap();
        assert!(out.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn annihilated_branch_returns_weight_to_identity() {
        // S_Z |m = 0> = 0 for integer spin
        let spin = Spin::new(1.0).unwrap();
        let rho = DensityMatrix::from_ket(&Ket::basis(3, 1));
        let rates = ErrorRates::new(0.0, 0.0, 0.2).unwrap();
        let out = RelaxationChannel::new(spin, rates, 1)
            .unwrap()
            .apply(&rho)
            .unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn invalid_inputs() {
        assert!(ErrorRates::new(-0.1, 0.0, 0.0).is_err());
        assert!(ErrorRates::new(0.5, 0.5, 0.5).is_err());
        let bad = DensityMatrix::from_matrix_unchecked(DMatrix::identity(8, 8));
        assert!(apply_first_order_channel(&bad, &ErrorRates::zero()).is_err());
        assert!(RelaxationChannel::new(spin72(), ErrorRates::isotropic(0.33).unwrap(), 3).is_err());
    }

    #[test]
    fn corrupt_state_branches() {
        let code = spin72_code();
        let psi = code.encode(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        assert_eq!(corrupt_state(&psi, ErrorKind::None).unwrap(), psi);
        let z = corrupt_state(&psi, ErrorKind::Z).unwrap();
        // -sqrt(7/10) alpha at index 0, sqrt(3/10) alpha at index 5
        assert_abs_diff_eq!(z.amplitude(0).re, -0.6 * 0.7f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(z.amplitude(7).im, 0.8 * 0.7f64.sqrt(), epsilon = 1e-14);
        let low = Ket::basis(8, 0);
        let zl = corrupt_state(&low, ErrorKind::Z).unwrap();
        assert!((&zl + &low).norm() < 1e-15);
        let integer = Ket::basis(3, 1);
        assert!(matches!(
            corrupt_state(&integer, ErrorKind::Z),
            Err(Error::DegenerateError)
        ));
    }

    #[test]
    fn corrupted_branches_are_orthonormal() {
        let code = spin72_code();
        let psi = code.encode(Complex64::new(0.8, 0.0), Complex64::from_polar(0.6, 1.1));
        let states: Vec<Ket> = [ErrorKind::None, ErrorKind::X, ErrorKind::Y, ErrorKind::Z]
            .iter()
            .map(|&k| corrupt_state(&psi, k).unwrap())
            .collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let g = a.inner(b).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(g.norm(), want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn unit_fidelity_matches_ideal_pulse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ket = Ket::from_real(&[0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
        let rho = DensityMatrix::from_ket(&ket);
        let p = Pulse::pi(1, 2);
        let ideal = conjugate_map(&pulse_unitary(&p, 8).unwrap(), &rho).unwrap();
        for model in [
            PulseErrorModel::ideal(),
            PulseErrorModel::depolarizing(1.0).unwrap(),
            PulseErrorModel::over_rotation_with_sigma(0.0).unwrap(),
        ] {
            let out = imperfect_pulse(&p, &rho, &model, &mut rng).unwrap();
            assert!(out.max_abs_diff(&ideal) < 1e-15);
        }
    }

    #[test]
    fn depolarizing_pulse_on_block_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = DensityMatrix::from_ket(&Ket::basis(8, 1));
        let model = PulseErrorModel::depolarizing(0.9).unwrap();
        let out = imperfect_pulse(&Pulse::pi(1, 2), &rho, &model, &mut rng).unwrap();
        assert_abs_diff_eq!(out.population(2), 0.9 + 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(out.population(1), 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(out.trace(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn depolarizing_encoder_fidelity_bounds() {
        // every pulse either succeeds (weight f) or scrambles its block
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let seq = encoding_sequence(PulseAlphabet::Adjacent);
        let f = 0.99;
        let model = PulseErrorModel::depolarizing(f).unwrap();
        let input = Ket::from_real(&[0.6, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let mut m = DensityMatrix::from_ket(&input).matrix().clone();
        for p in &seq.pulses {
            imperfect_pulse_in_place(p, &mut m, &model, &mut rng);
        }
        let rho = DensityMatrix::from_matrix_unchecked(m);
        let ideal = seq.apply_to_ket(&input).unwrap();
        let fid = rho.fidelity_with(&ideal);
        assert!(fid >= f.powi(seq.len() as i32) - 1e-12);
        assert!(fid < 1.0);
        rho.validate().unwrap();
    }

    #[test]
    fn over_rotation_calibration() {
        let model = PulseErrorModel::over_rotation(0.99).unwrap();
        let sigma = model.over_rotation_sigma;
        assert_abs_diff_eq!(
            (1.0 + (-sigma * sigma / 2.0).exp()) / 2.0,
            0.99,
            epsilon = 1e-14
        );
        // small-sigma form 1 - sigma^2/4
        assert_abs_diff_eq!(1.0 - sigma * sigma / 4.0, 0.99, epsilon = 2e-4);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = DensityMatrix::from_ket(&Ket::basis(2, 0));
        let target = Ket::basis(2, 1);
        let n = 20000;
        let mean: f64 = (0..n)
            .map(|_| {
                imperfect_pulse(&Pulse::pi(0, 1), &rho, &model, &mut rng)
                    .unwrap()
                    .fidelity_with(&target)
            })
            .sum::<f64>()
            / n as f64;
        assert_abs_diff_eq!(mean, 0.99, epsilon = 1e-3);
    }

    fn arb_density() -> impl Strategy<Value = DensityMatrix> {
        prop::collection::vec(-1.0f64..1.0, 128).prop_map(|v| {
            let a = DMatrix::from_fn(8, 8, |r, c| Complex64::new(v[r * 8 + c], v[64 + r * 8 + c]));
            let m = &a * a.adjoint();
            let tr = m.trace().re;
            DensityMatrix::new(m.unscale(tr)).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn channel_is_trace_preserving_and_positive(
            rho in arb_density(),
            ex in 0.0f64..0.3,
            ey in 0.0f64..0.3,
            ez in 0.0f64..0.3,
        ) {
            let rates = ErrorRates::new(ex, ey, ez).unwrap();
            let out = apply_first_order_channel(&rho, &rates).unwrap();
            prop_assert!((out.trace() - 1.0).abs() < 1e-12);
            prop_assert!(out.hermiticity_error() < 1e-12);
            prop_assert!(out.min_eigenvalue() >= -1e-9);
        }

        #[test]
        fn second_order_channel_is_valid(rho in arb_density(), eps in 0.0f64..0.25) {
            let rates = ErrorRates::isotropic(eps).unwrap();
            let out = apply_relaxation_channel(&rho, &rates, 2).unwrap();
            out.validate().unwrap();
        }

        #[test]
        fn corrupted_states_are_unit_norm(v in prop::collection::vec(-1.0f64..1.0, 8)) {
            let ket = Ket::from_real(&v);
            prop_assume!(ket.norm() > 1e-3);
            let ket = ket.normalize().unwrap();
            for k in ErrorKind::ERRORS {
                if let Ok(out) = corrupt_state(&ket, k) {
                    prop_assert!((out.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
