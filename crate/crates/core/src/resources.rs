//! Hilbert-space resource comparisons between qubit codes, GKP-style
//! encodings and single spin qudits.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::codes::CodeFamily;
use crate::error::{Error, Result};

pub const RESOURCE_CSV_HEADER: &str = "scheme,order,family,hilbert_dim,physical_units";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    QubitCode,
    GkpStyle,
    SpinQudit,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::QubitCode => "qubit-code",
            Scheme::GkpStyle => "gkp-style",
            Scheme::SpinQudit => "spin-qudit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceRow {
    pub scheme: Scheme,
    /// Number of correctable errors (qubit codes) or correction order.
    pub order: u32,
    /// Set for spin-qudit rows.
    pub family: Option<CodeFamily>,
    pub hilbert_dim: BigUint,
    /// Physical qubits, or 1 for a single qudit or oscillator.
    pub physical_units: u64,
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Whether `n` qubits satisfy `2^k sum_{l<=t} 3^l C(n, l) <= 2^n`.
pub fn hamming_bound_holds(n: u64, k: u32, t: u32) -> bool {
    let lhs: BigUint = (0..=u64::from(t))
        .map(|l| BigUint::from(3u32).pow(l as u32) * binomial(n, l))
        .sum::<BigUint>()
        << k as usize;
    lhs <= BigUint::one() << n as usize
}

/// Smallest number of physical qubits allowed by the quantum Hamming
/// bound for `k` logical qubits and `t` correctable errors.
pub fn hamming_min_qubits(k: u32, t: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::invalid("at least one logical qubit is required"));
    }
    Ok((u64::from(k)..)
        .find(|&n| hamming_bound_holds(n, k, t))
        .expect("the bound holds for large n"))
}

/// `2 (2N + 1)^2`.
pub fn gkp_dim(order: u32) -> Result<u64> {
    if order == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    let side = 2 * u64::from(order) + 1;
    Ok(2 * side * side)
}

/// `4N(N + 1)` for the even family, `4N(N + 1) + 2` for the odd one.
pub fn qudit_dim(order: u32, family: CodeFamily) -> Result<u64> {
    if order == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    Ok(family.dimension(order))
}

/// Four rows per order: qubit code, GKP-style, even and odd qudit.
pub fn comparison_table(max_order: u32) -> Result<Vec<ResourceRow>> {
    if max_order == 0 {
        return Err(Error::invalid("max order must be at least 1"));
    }
    let mut rows = Vec::new();
    for n in 1..=max_order {
        let qubits = hamming_min_qubits(1, n)?;
        rows.push(ResourceRow {
            scheme: Scheme::QubitCode,
            order: n,
            family: None,
            hilbert_dim: BigUint::one() << qubits as usize,
            physical_units: qubits,
        });
        rows.push(ResourceRow {
            scheme: Scheme::GkpStyle,
            order: n,
            family: None,
            hilbert_dim: gkp_dim(n)?.into(),
            physical_units: 1,
        });
        for family in [CodeFamily::Even, CodeFamily::Odd] {
            rows.push(ResourceRow {
                scheme: Scheme::SpinQudit,
                order: n,
                family: Some(family),
                hilbert_dim: qudit_dim(n, family)?.into(),
                physical_units: 1,
            });
        }
    }
    Ok(rows)
}

fn family_label(row: &ResourceRow) -> String {
    row.family
        .map(|f| f.to_string())
        .unwrap_or_else(|| "-".into())
}

pub fn table_to_csv(rows: &[ResourceRow]) -> String {
    let mut out = String::from(RESOURCE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.scheme,
            r.order,
            family_label(r),
            r.hilbert_dim,
            r.physical_units
        );
    }
    out
}

/// Right-aligned plain-text table.
pub fn table_to_text(rows: &[ResourceRow]) -> String {
    let header = ["scheme", "order", "family", "hilbert_dim", "physical_units"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.scheme.to_string(),
                r.order.to_string(),
                family_label(r),
                r.hilbert_dim.to_string(),
                r.physical_units.to_string(),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..5)
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |fields: &[&str]| {
        fields
            .iter()
            .zip(&widths)
            .map(|(f, w)| format!("{f:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(&header);
    out.push('\n');
    for row in &cells {
        let refs: Vec<&str> = row.iter().map(String::as_str).collect();
        out.push_str(&line(&refs));
        out.push('\n');
    }
    out
}
