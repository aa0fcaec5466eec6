//! Logical codeword pairs on spin qudits and their Knill-Laflamme checks.

mod catalog;
mod document;
mod generate;
mod kl;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{inner, Ket, Spin, SpinSystem, TOL};

pub use catalog::{catalog_code, multi_qudit_code, spin72_code, MultiQuditCode, CATALOG_NAMES};
pub use document::{CodewordDocument, LogicalStateDocument};
pub use generate::{generate_code, solve_coefficients, CodeFamily, CoefficientSolution};
pub use kl::{error_basis, verify_kl, KlReport, MomentEntry, OperatorChoice};

/// How a [`CodePair`] was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Construction {
    Catalog {
        name: String,
    },
    /// Periodic support `{-S} U {-S + (A i - B)}`, mirrored for `|1_L>`.
    GeneralAB {
        stride: i64,
        offset: i64,
        /// `a_i`, amplitudes of `|0_L>` in support order.
        zero_coefficients: Vec<f64>,
        /// `b_i`, amplitudes of `|1_L>` in support order.
        one_coefficients: Vec<f64>,
        /// `|a_i|^2` as exact fractions.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        exact_squares: Vec<String>,
    },
    MultiQudit {
        name: String,
    },
    UserSupplied,
}

/// Logical `|0_L>`, `|1_L>` codewords on a spin system.
#[derive(Debug, Clone, PartialEq)]
pub struct CodePair {
    system: SpinSystem,
    zero_logical: Ket,
    one_logical: Ket,
    order: u32,
    construction: Construction,
}

impl CodePair {
    /// Checks dimensions, normalization and orthogonality.
    pub fn new(
        system: SpinSystem,
        zero_logical: Ket,
        one_logical: Ket,
        order: u32,
        construction: Construction,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("code order must be at least 1"));
        }
        for (label, ket) in [("|0_L>", &zero_logical), ("|1_L>", &one_logical)] {
            if ket.dim() != system.dim() {
                return Err(Error::invalid(format!(
                    "{label} has dimension {}, system has {}",
                    ket.dim(),
                    system.dim()
                )));
            }
            if (ket.norm_sqr() - 1.0).abs() > TOL {
                return Err(Error::invalid(format!(
                    "{label} is not normalized (norm^2 = {})",
                    ket.norm_sqr()
                )));
            }
        }
        let overlap = inner(&zero_logical, &one_logical)?;
        if overlap.norm() > TOL {
            return Err(Error::invalid(format!(
                "codewords are not orthogonal (<0_L|1_L> = {overlap})"
            )));
        }
        Ok(CodePair {
            system,
            zero_logical,
            one_logical,
            order,
            construction,
        })
    }

    /// Builds a single-spin code from `(m, amplitude)` lists.
    pub fn from_levels(
        spin: Spin,
        zero: &[(f64, f64)],
        one: &[(f64, f64)],
        order: u32,
        construction: Construction,
    ) -> Result<Self> {
        let system = SpinSystem::single(spin);
        let zero = ket_from_levels(&system, zero.iter().map(|&(m, a)| (vec![m], a)))?;
        let one = ket_from_levels(&system, one.iter().map(|&(m, a)| (vec![m], a)))?;
        CodePair::new(system, zero, one, order, construction)
    }

    pub fn system(&self) -> &SpinSystem {
        &self.system
    }

    pub fn zero_logical(&self) -> &Ket {
        &self.zero_logical
    }

    pub fn one_logical(&self) -> &Ket {
        &self.one_logical
    }

    pub fn codewords(&self) -> [&Ket; 2] {
        [&self.zero_logical, &self.one_logical]
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    /// `alpha |0_L> + beta e^{i phi} |1_L>`.
    pub fn encode(&self, alpha: Complex64, beta: Complex64) -> Ket {
        &self.zero_logical.scale(alpha) + &self.one_logical.scale(beta)
    }

    /// Both codewords with the global phase fixed so their largest
    /// amplitude is positive real.
    pub fn phase_fixed(&self) -> (Ket, Ket) {
        (
            self.zero_logical.phase_fixed(),
            self.one_logical.phase_fixed(),
        )
    }

    /// Basis indices with non-negligible amplitude in `ket`.
    pub fn support(ket: &Ket) -> Vec<usize> {
        (0..ket.dim())
            .filter(|&i| ket.amplitude(i).norm() > 1e-14)
            .collect()
    }
}

pub(crate) fn ket_from_levels(
    system: &SpinSystem,
    entries: impl IntoIterator<Item = (Vec<f64>, f64)>,
) -> Result<Ket> {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); system.dim()];
    for (ms, amp) in entries {
        let idx = system.basis_index(&ms)?;
        amplitudes[idx] += Complex64::new(amp, 0.0);
    }
    Ok(Ket::new(amplitudes))
}

/// `sign * sqrt(num / den)`.
pub(crate) fn signed_sqrt(sign: f64, num: f64, den: f64) -> f64 {
    sign * (num / den).sqrt()
}
