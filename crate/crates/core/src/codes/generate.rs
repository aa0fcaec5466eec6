//! Generator for the periodic code family on a single large spin.
//!
//! `|0_L> = a_0 |-S> + sum_i a_i |-S + (A i - B)>` with `A = 4N + 2` and
//! `|1_L>` its mirror image. The squared amplitudes solve `N + 1` linear
//! equations: normalization plus `<0_L| S_X^j S_Z S_X^j |0_L> = 0` for
//! `j = 0..N-1`. The support spacing exceeds `2j`, so no cross terms appear
//! and the system is linear in `|a_i|^2`.
//!
//! Every matrix element `<m| S_X^j S_Z S_X^j |m>` is rational (the ladder
//! coefficients enter squared), so the system is assembled and solved in
//! exact rational arithmetic and only the final square roots are taken in
//! floating point.

use std::fmt;
use std::str::FromStr;

use log::warn;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{verify_kl, CodePair, Construction, OperatorChoice};
use crate::error::{Error, Result};
use crate::spin::{Spin, TOL};

/// Condition number above which the generator warns.
pub const CONDITION_WARNING: f64 = 1e12;

/// Which of the two dimension families to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeFamily {
    /// `d = 4N(N+1)`, stride offset `B = 1`, `b_0 = -a_0`.
    Even,
    /// `d = 4N(N+1) + 2`, stride offset `B = 0`.
    Odd,
}

impl CodeFamily {
    pub fn dimension(self, order: u32) -> u64 {
        let n = order as u64;
        match self {
            CodeFamily::Even => 4 * n * (n + 1),
            CodeFamily::Odd => 4 * n * (n + 1) + 2,
        }
    }

    pub fn offset(self) -> i64 {
        match self {
            CodeFamily::Even => 1,
            CodeFamily::Odd => 0,
        }
    }
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeFamily::Even => "even",
            CodeFamily::Odd => "odd",
        })
    }
}

impl FromStr for CodeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(CodeFamily::Even),
            "odd" => Ok(CodeFamily::Odd),
            other => Err(Error::invalid(format!(
                "unknown code family '{other}' (expected 'even' or 'odd')"
            ))),
        }
    }
}

/// Exact solution of the coefficient equations.
#[derive(Debug, Clone)]
pub struct CoefficientSolution {
    pub order: u32,
    pub family: CodeFamily,
    pub spin: Spin,
    /// Basis indices of the `|0_L>` support, in coefficient order.
    pub support: Vec<usize>,
    /// Rows: normalization, then `j = 0..N-1`.
    pub matrix: Vec<Vec<BigRational>>,
    pub squares: Vec<BigRational>,
    pub condition_number: f64,
}

impl CoefficientSolution {
    pub fn squares_f64(&self) -> Vec<f64> {
        self.squares.iter().map(rational_to_f64).collect()
    }

    /// Largest row residual of the linear system at `squares`, relative to
    /// the row's magnitude `sum_i |M_ji| x_i`.
    pub fn relative_residual(&self, squares: &[f64]) -> f64 {
        let rhs = |row: usize| if row == 0 { 1.0 } else { 0.0 };
        self.matrix
            .iter()
            .enumerate()
            .map(|(row, coeffs)| {
                let (mut value, mut scale) = (0.0, 0.0);
                for (c, x) in coeffs.iter().zip(squares) {
                    let c = rational_to_f64(c);
                    value += c * x;
                    scale += c.abs() * x.abs();
                }
                (value - rhs(row)).abs() / scale.max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `<i| S_X^j S_Z S_X^j |i>` for spin `twice/2`, exactly.
///
/// With `P(i,k)` the product of squared ladder coefficients on the edges
/// between levels `i` and `k`, every amplitude of `S_X^j |i>` on level `k`
/// is `sqrt(P(i,k))` times a rational number. The recursion below tracks
/// those rational parts.
fn sandwich_element(twice: u32, level: usize, power: u32) -> BigRational {
    let dim = twice as usize + 1;
    // squared ladder coefficient on edge (k, k+1): (2S - k)(k + 1)
    let edge = |k: usize| int((twice as i64 - k as i64) * (k as i64 + 1));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    let mut r = vec![BigRational::zero(); dim];
    r[level] = BigRational::one();
    for _ in 0..power {
        let mut next = vec![BigRational::zero(); dim];
        for k in 0..dim {
            let dist = k.abs_diff(level);
            let mut acc = BigRational::zero();
            if k > 0 && !r[k - 1].is_zero() {
                let weight = if (k - 1).abs_diff(level) < dist {
                    BigRational::one()
                } else {
                    edge(k - 1)
                };
                acc += weight * &r[k - 1];
            }
            if k + 1 < dim && !r[k + 1].is_zero() {
                let weight = if (k + 1).abs_diff(level) < dist {
                    BigRational::one()
                } else {
                    edge(k)
                };
                acc += weight * &r[k + 1];
            }
            next[k] = acc * &half;
        }
        r = next;
    }

    let mut total = BigRational::zero();
    let mut path_product = vec![BigRational::one(); dim];
    for k in level + 1..dim {
        path_product[k] = &path_product[k - 1] * edge(k - 1);
    }
    for k in (0..level).rev() {
        path_product[k] = &path_product[k + 1] * edge(k);
    }
    for k in 0..dim {
        if r[k].is_zero() {
            continue;
        }
        // m_k = k - S = (2k - 2S)/2
        let m = BigRational::new(BigInt::from(2 * k as i64 - twice as i64), BigInt::from(2));
        total += m * &path_product[k] * &r[k] * &r[k];
    }
    total
}

/// Gaussian elimination with partial pivoting (largest magnitude) over the
/// rationals.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()))?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &a[col][col];
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[row][k] -= delta;
            }
            let delta = &factor * &b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= &a[row][k] * &x[k];
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}

fn condition_number(matrix: &[Vec<BigRational>]) -> f64 {
    let n = matrix.len();
    let m = DMatrix::from_fn(n, n, |r, c| rational_to_f64(&matrix[r][c]));
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Assembles and solves the coefficient equations for order `N`.
pub fn solve_coefficients(order: u32, family: CodeFamily) -> Result<CoefficientSolution> {
    if order == 0 {
        return Err(Error::invalid("code order must be at least 1"));
    }
    let dim = family.dimension(order);
    let twice = u32::try_from(dim - 1)
        .map_err(|_| Error::invalid(format!("order {order} is too large")))?;
    let spin = Spin::from_twice(twice)?;
    let stride = 4 * order as usize + 2;
    let offset = family.offset() as usize;
    let support: Vec<usize> = std::iter::once(0)
        .chain((1..=order as usize).map(|i| stride * i - offset))
        .collect();

    let n = support.len();
    let mut matrix = Vec::with_capacity(n);
    matrix.push(vec![BigRational::one(); n]);
    for j in 0..order {
        matrix.push(
            support
                .iter()
                .map(|&level| sandwich_element(twice, level, j))
                .collect(),
        );
    }
    let mut rhs = vec![BigRational::zero(); n];
    rhs[0] = BigRational::one();

    let condition_number = condition_number(&matrix);
    if condition_number > CONDITION_WARNING {
        warn!(
            "coefficient system for N={order} ({family}) is ill-conditioned: cond = {condition_number:.3e}"
        );
    }
    let squares = solve_exact(matrix.clone(), rhs).ok_or_else(|| {
        Error::ConstructionFailure(format!(
            "coefficient system for N={order} ({family}) is singular"
        ))
    })?;
    if let Some((i, s)) = squares.iter().enumerate().find(|(_, s)| s.is_negative()) {
        return Err(Error::ConstructionFailure(format!(
            "N={order} ({family}): |a_{i}|^2 = {s} is negative"
        )));
    }
    Ok(CoefficientSolution {
        order,
        family,
        spin,
        support,
        matrix,
        squares,
        condition_number,
    })
}

/// Builds the order-`N` code of the requested family and re-verifies it.
///
/// Amplitudes take the principal square root; `|1_L>` mirrors `|0_L>` with
/// `b_0 = -a_0` in the even family.
pub fn generate_code(order: u32, family: CodeFamily) -> Result<CodePair> {
    let solution = solve_coefficients(order, family)?;
    let spin = solution.spin;
    let a: Vec<f64> = solution.squares_f64().iter().map(|s| s.sqrt()).collect();
    let mut b = a.clone();
    if family == CodeFamily::Even {
        b[0] = -a[0];
    }
    let residual = solution.relative_residual(&solution.squares_f64());
    if residual > TOL {
        return Err(Error::ConstructionFailure(format!(
            "coefficient residual {residual:.3e} exceeds tolerance"
        )));
    }

    let top = spin.dim() - 1;
    let zero: Vec<(f64, f64)> = solution
        .support
        .iter()
        .zip(&a)
        .map(|(&idx, &amp)| (spin.m(idx), amp))
        .collect();
    let one: Vec<(f64, f64)> = solution
        .support
        .iter()
        .zip(&b)
        .map(|(&idx, &amp)| (spin.m(top - idx), amp))
        .collect();
    let construction = Construction::GeneralAB {
        stride: 4 * order as i64 + 2,
        offset: family.offset(),
        zero_coefficients: a,
        one_coefficients: b,
        exact_squares: solution.squares.iter().map(|s| s.to_string()).collect(),
    };
    let code = CodePair::from_levels(spin, &zero, &one, order, construction)?;
    let report = verify_kl(&code, order, OperatorChoice::SingleSpin, TOL)?;
    if !report.passed {
        return Err(Error::ConstructionFailure(format!(
            "generated N={order} ({family}) code fails the KL criteria: cross {:.3e}, diagonal {:.3e}",
            report.max_cross_violation, report.max_diag_violation
        )));
    }
    Ok(code)
}
