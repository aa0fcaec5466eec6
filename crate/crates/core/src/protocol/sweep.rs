//! Fidelity sweeps over storage time and pulse fidelity.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CycleConfig, Protocol, Qubit};
use crate::error::{Error, Result};
use crate::noise::{ErrorRates, PulseErrorKind, PulseErrorModel};

pub const SWEEP_CSV_HEADER: &str =
    "t_over_T,pulse_fidelity,model,f_corrected,f_corrected_stderr,f_uncorrected,gain,trials,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// Random input qubits, sampled measurement outcomes and pulse errors.
    MonteCarlo,
    /// Six Pauli input states, all measurement branches summed.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub t_over_t: Vec<f64>,
    pub pulse_fidelities: Vec<f64>,
    pub model: PulseErrorKind,
    pub trials: usize,
    pub seed: u64,
    pub mode: SweepMode,
    pub cycle: CycleConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            t_over_t: vec![1e-2],
            pulse_fidelities: vec![1.0],
            model: PulseErrorKind::DepolarizingPerPulse,
            trials: 10_000,
            seed: 0,
            mode: SweepMode::MonteCarlo,
            cycle: CycleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t_over_t: f64,
    pub pulse_fidelity: f64,
    pub model: PulseErrorKind,
    pub f_corrected: f64,
    pub f_corrected_stderr: f64,
    pub f_uncorrected: f64,
    /// `(1 - f_uncorrected) / (1 - f_corrected)`.
    pub gain: f64,
    pub trials: usize,
    pub seed: u64,
}

impl SweepRow {
    pub fn corrected_infidelity(&self) -> f64 {
        1.0 - self.f_corrected
    }

    pub fn uncorrected_infidelity(&self) -> f64 {
        1.0 - self.f_uncorrected
    }
}

fn gain(f_unc: f64, f_corr: f64) -> f64 {
    let corr = 1.0 - f_corr;
    if corr <= 0.0 {
        f64::INFINITY
    } else {
        (1.0 - f_unc) / corr
    }
}

/// Random stream for trial `trial` at storage-time index `t_index`. The
/// stream does not depend on the pulse fidelity, so all fidelities see the
/// same input qubits.
fn trial_rng(seed: u64, t_index: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((t_index as u64) << 32) | trial as u64);
    rng
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn sweep_point(
    protocol: &Protocol,
    config: &SweepConfig,
    t_index: usize,
    t_over_t: f64,
    fidelity: f64,
) -> Result<SweepRow> {
    let pmodel = PulseErrorModel::from_kind(config.model, fidelity)?;
    let channel = protocol.channel(ErrorRates::isotropic(t_over_t)?)?;
    let (corrected, uncorrected): (Vec<f64>, Vec<f64>) = match config.mode {
        SweepMode::Exact => Qubit::pauli_states()
            .iter()
            .map(|q| {
                Ok((
                    protocol.cycle_exact(q, &channel, &pmodel)?.fidelity,
                    protocol.uncorrected_fidelity(q, &channel)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip(),
        SweepMode::MonteCarlo => (0..config.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(config.seed, t_index, trial);
                let qubit = Qubit::random(&mut rng);
                let report = protocol.cycle(&qubit, &channel, &pmodel, &mut rng)?;
                Ok((
                    report.fidelity,
                    protocol.uncorrected_fidelity(&qubit, &channel)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip(),
    };
    let (f_corrected, stderr) = mean_and_stderr(&corrected);
    let stderr = if config.mode == SweepMode::Exact {
        0.0
    } else {
        stderr
    };
    let (f_uncorrected, _) = mean_and_stderr(&uncorrected);
    Ok(SweepRow {
        t_over_t,
        pulse_fidelity: pmodel.fidelity,
        model: config.model,
        f_corrected,
        f_corrected_stderr: stderr,
        f_uncorrected,
        gain: gain(f_uncorrected, f_corrected),
        trials: corrected.len(),
        seed: config.seed,
    })
}

/// Corrected and uncorrected fidelities on every `(t/T, f)` grid point,
/// ordered by `t/T` and then by `f` as given.
pub fn fidelity_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.t_over_t.is_empty() || config.pulse_fidelities.is_empty() {
        return Err(Error::invalid("sweep grids must be non-empty"));
    }
    if config.mode == SweepMode::MonteCarlo && config.trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let protocol = Protocol::new(config.cycle.clone())?;
    let points: Vec<(usize, f64, f64)> = config
        .t_over_t
        .iter()
        .enumerate()
        .flat_map(|(i, &t)| config.pulse_fidelities.iter().map(move |&f| (i, t, f)))
        .collect();
    points
        .par_iter()
        .map(|&(i, t, f)| sweep_point(&protocol, config, i, t, f))
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`; points with non-positive
/// coordinates are skipped.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// For each `t/T`, the pulse fidelity where the gain reaches 1,
/// interpolated linearly between grid fidelities. `None` when the gain
/// stays below 1; the lowest grid fidelity when it is already above 1
/// there.
pub fn threshold_crossings(rows: &[SweepRow]) -> Vec<(f64, Option<f64>)> {
    let mut ts: Vec<f64> = rows.iter().map(|r| r.t_over_t).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts.into_iter()
        .map(|t| {
            let mut curve: Vec<&SweepRow> = rows.iter().filter(|r| r.t_over_t == t).collect();
            curve.sort_by(|a, b| a.pulse_fidelity.total_cmp(&b.pulse_fidelity));
            let crossing = match curve.first() {
                Some(first) if first.gain >= 1.0 => Some(first.pulse_fidelity),
                _ => curve
                    .windows(2)
                    .find(|w| w[0].gain < 1.0 && w[1].gain >= 1.0)
                    .map(|w| {
                        let (f0, f1) = (w[0].pulse_fidelity, w[1].pulse_fidelity);
                        let (g0, g1) = (w[0].gain.min(1e300), w[1].gain.min(1e300));
                        f0 + (1.0 - g0) * (f1 - f0) / (g1 - g0)
                    }),
            };
            (t, crossing)
        })
        .collect()
}

/// Lowest pulse fidelity at which correction pays off for some sampled
/// `t/T`.
pub fn threshold_estimate(rows: &[SweepRow]) -> Option<f64> {
    threshold_crossings(rows)
        .into_iter()
        .filter_map(|(_, f)| f)
        .min_by(f64::total_cmp)
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.t_over_t,
            r.pulse_fidelity,
            r.model,
            r.f_corrected,
            r.f_corrected_stderr,
            r.f_uncorrected,
            r.gain,
            r.trials,
            r.seed
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1e-3, 1e-2, 1e-1]
            .iter()
            .map(|&x| (x, 3.0 * x * x))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    fn row(f: f64, gain: f64) -> SweepRow {
        SweepRow {
            t_over_t: 0.1,
            pulse_fidelity: f,
            model: PulseErrorKind::DepolarizingPerPulse,
            f_corrected: 0.0,
            f_corrected_stderr: 0.0,
            f_uncorrected: 0.0,
            gain,
            trials: 1,
            seed: 0,
        }
    }

    #[test]
    fn crossing_is_interpolated() {
        let rows = vec![row(0.99, 1.5), row(0.97, 0.5), row(0.98, 0.75)];
        let c = threshold_crossings(&rows);
        assert_eq!(c.len(), 1);
        assert!((c[0].1.unwrap() - (0.98 + 0.01 / 3.0)).abs() < 1e-12);
        assert_eq!(threshold_estimate(&[row(0.99, 0.5)]), None);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = sweep_to_csv(&[row(0.99, 2.0)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines[1], "0.1,0.99,depolarizing,0,0,0,2,1,0");
    }
}
