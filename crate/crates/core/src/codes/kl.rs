use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CodePair;
use crate::error::{Error, Result};
use crate::spin::{Axis, CollectiveSpin, Ket, I};

/// Which spin operators the error model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorChoice {
    /// Operators of a lone spin; the system must hold exactly one.
    SingleSpin,
    /// Total spin `sum_q S^(q)` over every qudit in the system.
    Collective,
}

/// `<a| S_i^l S_j^k |b>` for the two codewords and between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEntry {
    pub i: Axis,
    pub l: u32,
    pub j: Axis,
    pub k: u32,
    pub zero: Complex64,
    pub one: Complex64,
    pub cross: Complex64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KlReport {
    pub order: u32,
    /// Largest `|<0_L|S_i^l S_j^k|1_L>|`.
    pub max_cross_violation: f64,
    /// Largest `|<0_L|E|0_L> - <1_L|E|1_L>|`.
    pub max_diag_violation: f64,
    /// Cross violation divided by `||S_i^l 0_L|| ||S_j^k 1_L||`.
    pub normalized_cross_violation: f64,
    /// Diagonal violation divided by the larger Cauchy-Schwarz bound.
    pub normalized_diag_violation: f64,
    pub tolerance: f64,
    /// Decided on the normalized violations, which stay meaningful when
    /// `S^{2N}` moments reach `10^12` and beyond.
    pub passed: bool,
    pub moment_table: Vec<MomentEntry>,
    /// Labels of the normalized error states `S_i^l |c_L>`, `l = 0..N`.
    pub gram_labels: Vec<String>,
    pub gram: Vec<Vec<Complex64>>,
    /// Largest deviation of `gram` from the identity.
    pub gram_deviation: f64,
    pub gram_orthonormal: bool,
}

impl KlReport {
    pub fn moment(&self, i: Axis, l: u32, j: Axis, k: u32) -> Option<&MomentEntry> {
        self.moment_table
            .iter()
            .find(|e| e.i == i && e.l == l && e.j == j && e.k == k)
    }
}

fn operators_for(code: &CodePair, choice: OperatorChoice) -> Result<CollectiveSpin> {
    if choice == OperatorChoice::SingleSpin && !code.system().is_single() {
        return Err(Error::invalid(format!(
            "single-spin operators requested for a {}-qudit system",
            code.system().spins().len()
        )));
    }
    Ok(CollectiveSpin::new(code.system()))
}

/// `powers[axis][l] = S_axis^l |ket>` for `l = 0..=order`.
fn power_table(ops: &CollectiveSpin, ket: &Ket, order: u32) -> Result<Vec<Vec<Ket>>> {
    Axis::ALL
        .iter()
        .map(|&axis| {
            let mut row = Vec::with_capacity(order as usize + 1);
            row.push(ket.clone());
            for l in 1..=order as usize {
                let next = ops.apply(axis, &row[l - 1])?;
                row.push(next);
            }
            Ok(row)
        })
        .collect()
}

/// Evaluates the Knill-Laflamme conditions for all products `S_i^l S_j^k`
/// with `0 <= l, k <= order`.
///
/// Moments are evaluated as `<S_i^l a | S_j^k b>`, using the hermiticity of
/// the spin operators, so no dense operator powers are formed.
pub fn verify_kl(
    code: &CodePair,
    order: u32,
    operators: OperatorChoice,
    tolerance: f64,
) -> Result<KlReport> {
    let ops = operators_for(code, operators)?;
    let zero = power_table(&ops, code.zero_logical(), order)?;
    let one = power_table(&ops, code.one_logical(), order)?;

    let mut table = Vec::new();
    let (mut cross_abs, mut diag_abs, mut cross_rel, mut diag_rel) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (ai, &i) in Axis::ALL.iter().enumerate() {
        for l in 0..=order {
            for (aj, &j) in Axis::ALL.iter().enumerate() {
                for k in 0..=order {
                    let (z_l, z_k) = (&zero[ai][l as usize], &zero[aj][k as usize]);
                    let (o_l, o_k) = (&one[ai][l as usize], &one[aj][k as usize]);
                    let ez = z_l.inner(z_k)?;
                    let eo = o_l.inner(o_k)?;
                    let cross = z_l.inner(o_k)?;

                    let cross_bound = z_l.norm() * o_k.norm();
                    let diag_bound = (z_l.norm() * z_k.norm()).max(o_l.norm() * o_k.norm());
                    let c = cross.norm();
                    let d = (ez - eo).norm();
                    cross_abs = cross_abs.max(c);
                    diag_abs = diag_abs.max(d);
                    if cross_bound > 0.0 {
                        cross_rel = cross_rel.max(c / cross_bound);
                    }
                    if diag_bound > 0.0 {
                        diag_rel = diag_rel.max(d / diag_bound);
                    }
                    table.push(MomentEntry {
                        i,
                        l,
                        j,
                        k,
                        zero: ez,
                        one: eo,
                        cross,
                    });
                }
            }
        }
    }

    let mut gram_labels = vec!["|0_L>".to_string(), "|1_L>".to_string()];
    let mut states = vec![code.zero_logical().clone(), code.one_logical().clone()];
    for (ai, axis) in Axis::ALL.iter().enumerate() {
        for l in 1..=order as usize {
            for (c, table) in [("0", &zero), ("1", &one)] {
                let power = if l == 1 {
                    String::new()
                } else {
                    format!("^{l}")
                };
                gram_labels.push(format!("S_{axis}{power}|{c}_L>"));
                states.push(table[ai][l].normalize()?);
            }
        }
    }
    let n = states.len();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut gram_deviation = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let g = states[r].inner(&states[c])?;
            let target = if r == c { 1.0 } else { 0.0 };
            gram_deviation = gram_deviation.max((g - target).norm());
            gram[r][c] = g;
        }
    }

    Ok(KlReport {
        order,
        max_cross_violation: cross_abs,
        max_diag_violation: diag_abs,
        normalized_cross_violation: cross_rel,
        normalized_diag_violation: diag_rel,
        tolerance,
        passed: cross_rel < tolerance && diag_rel < tolerance,
        moment_table: table,
        gram_labels,
        gram,
        gram_deviation,
        gram_orthonormal: gram_deviation < tolerance,
    })
}

/// The eight first-order error-space states of a single-spin code:
/// normalized `S_X`, `-i S_Y` and `S_Z` images of each codeword, then the
/// codewords themselves.
///
/// `-i S_Y` keeps the states real in this basis convention.
pub fn error_basis(code: &CodePair) -> Result<Vec<(String, Ket)>> {
    if !code.system().is_single() {
        return Err(Error::invalid("error basis needs a single-spin code"));
    }
    let ops = CollectiveSpin::new(code.system());
    let mut out = Vec::with_capacity(8);
    for (name, factor, axis) in [
        ("S_X", Complex64::new(1.0, 0.0), Axis::X),
        ("-iS_Y", -I, Axis::Y),
        ("S_Z", Complex64::new(1.0, 0.0), Axis::Z),
    ] {
        for (c, ket) in [("0", code.zero_logical()), ("1", code.one_logical())] {
            let image = ops.apply(axis, ket)?.scale(factor).normalize()?;
            out.push((format!("{name}|{c}_L>"), image));
        }
    }
    out.push(("|0_L>".to_string(), code.zero_logical().clone()));
    out.push(("|1_L>".to_string(), code.one_logical().clone()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{catalog_code, multi_qudit_code, spin72_code, Construction, MultiQuditCode};
    use crate::spin::TOL;
    use approx::assert_abs_diff_eq;

    #[test]
    fn primary_code_passes_first_order() {
        let report = verify_kl(&spin72_code(), 1, OperatorChoice::SingleSpin, TOL).unwrap();
        assert!(report.passed);
        assert!(report.max_cross_violation < 1e-12);
        let sx2 = report.moment(Axis::X, 1, Axis::X, 1).unwrap();
        assert_abs_diff_eq!(sx2.zero.re, 21.0 / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sx2.one.re, 21.0 / 4.0, epsilon = 1e-12);
        assert_eq!(report.moment_table.len(), 36);
        assert!(report.gram_orthonormal);
    }

    #[test]
    fn perturbed_code_fails() {
        let code = spin72_code();
        let mut amps: Vec<f64> = code.zero_logical().to_vec().iter().map(|a| a.re).collect();
        amps[0] += 0.01;
        let zero = Ket::from_real(&amps).normalize().unwrap();
        let perturbed = CodePair::new(
            code.system().clone(),
            zero,
            code.one_logical().clone(),
            1,
            Construction::UserSupplied,
        )
        .unwrap();
        let report = verify_kl(&perturbed, 1, OperatorChoice::SingleSpin, TOL).unwrap();
        assert!(!report.passed);
        let sz = report.moment(Axis::Z, 0, Axis::Z, 1).unwrap();
        assert!(sz.zero.norm() > 1e-3);
    }

    #[test]
    fn three_spin_code_passes_collectively() {
        let code = multi_qudit_code(MultiQuditCode::ThreeSpinThreeHalves);
        let report = verify_kl(&code, 1, OperatorChoice::Collective, TOL).unwrap();
        assert!(report.passed, "{:?}", report.normalized_diag_violation);
    }

    #[test]
    fn single_spin_operators_reject_composite_systems() {
        let code = multi_qudit_code(MultiQuditCode::ThreeSpinThreeHalves);
        assert!(verify_kl(&code, 1, OperatorChoice::SingleSpin, TOL).is_err());
    }

    #[test]
    fn higher_order_catalog_codes_pass() {
        for (name, order) in [("spin252", 2), ("spin232", 2), ("spin92", 1)] {
            let code = catalog_code(name).unwrap();
            let report = verify_kl(&code, order, OperatorChoice::SingleSpin, TOL).unwrap();
            assert!(report.passed, "{name}");
        }
    }

    #[test]
    fn second_order_code_fails_at_third_order() {
        let code = catalog_code("spin252").unwrap();
        let report = verify_kl(&code, 3, OperatorChoice::SingleSpin, TOL).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn error_basis_matches_hand_computation() {
        let basis = error_basis(&spin72_code()).unwrap();
        assert_eq!(basis.len(), 8);
        let get = |label: &str| &basis.iter().find(|(l, _)| l == label).unwrap().1;

        let sz0 = get("S_Z|0_L>");
        assert_abs_diff_eq!(sz0.amplitude(0).re, -(0.7_f64).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(sz0.amplitude(5).re, (0.3_f64).sqrt(), epsilon = 1e-14);

        // m = -5/2, +1/2, +5/2 are indices 1, 4, 6
        let sx0 = get("S_X|0_L>");
        for (idx, sq) in [(1, 0.1), (4, 0.5), (6, 0.4)] {
            assert_abs_diff_eq!(sx0.amplitude(idx).norm_sqr(), sq, epsilon = 1e-14);
        }
        let sx1 = get("S_X|1_L>");
        for (idx, amp) in [
            (1, -(0.4_f64).sqrt()),
            (3, -(0.5_f64).sqrt()),
            (6, (0.1_f64).sqrt()),
        ] {
            assert_abs_diff_eq!(sx1.amplitude(idx).re, amp, epsilon = 1e-14);
        }
        let sy0 = get("-iS_Y|0_L>");
        assert!(sy0.to_vec().iter().all(|a| a.im.abs() < 1e-15));

        for (r, (_, a)) in basis.iter().enumerate() {
            for (c, (_, b)) in basis.iter().enumerate() {
                let g = a.inner(b).unwrap();
                let want = if r == c { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(g.re, want, epsilon = 1e-10);
                assert_abs_diff_eq!(g.im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn error_basis_rejects_composite_code() {
        let code = multi_qudit_code(MultiQuditCode::ThreeSpinThreeHalves);
        assert!(error_basis(&code).is_err());
    }
}
