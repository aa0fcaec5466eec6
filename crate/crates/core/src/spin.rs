//! Dense linear algebra over small Hilbert spaces and angular-momentum
//! operators for single and composite spin systems.
//!
//! Basis convention: every spin is ordered `m = -S, ..., +S`, and composite
//! systems use row-major tensor order (the first spin is the most
//! significant digit of the basis index).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance (max-norm) for state and operator comparisons.
pub const TOL: f64 = 1e-10;
/// Tolerance used for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue tolerated in a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// A spin quantum number, stored as twice its value so that half-integers
/// are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn new(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !value.is_finite() || (twice - twice.round()).abs() > 1e-9 || twice.round() < 1.0 {
            return Err(Error::invalid(format!(
                "spin must be a positive multiple of 1/2, got {value}"
            )));
        }
        Ok(Spin {
            twice: twice.round() as u32,
        })
    }

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::invalid("spin must be positive"));
        }
        Ok(Spin { twice })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Number of levels, `2S + 1`.
    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// Magnetic quantum number of basis level `index`.
    pub fn m(self, index: usize) -> f64 {
        index as f64 - self.value()
    }

    /// Basis index of level `m`, if `m` is a valid projection.
    pub fn index_of(self, m: f64) -> Option<usize> {
        let idx = m + self.value();
        if (idx - idx.round()).abs() > 1e-9 || idx.round() < 0.0 {
            return None;
        }
        let idx = idx.round() as usize;
        (idx < self.dim()).then_some(idx)
    }
}

impl TryFrom<f64> for Spin {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Spin::new(value)
    }
}

impl From<Spin> for f64 {
    fn from(s: Spin) -> f64 {
        s.value()
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// One or more spins sharing a tensor-product Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Spin>", into = "Vec<Spin>")]
pub struct SpinSystem {
    spins: Vec<Spin>,
    dim: usize,
}

impl SpinSystem {
    pub fn new(spins: Vec<Spin>) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::invalid("a spin system needs at least one spin"));
        }
        let dim = spins.iter().map(|s| s.dim()).product();
        Ok(SpinSystem { spins, dim })
    }

    pub fn single(spin: Spin) -> Self {
        SpinSystem {
            dim: spin.dim(),
            spins: vec![spin],
        }
    }

    /// `count` identical spins.
    pub fn uniform(spin: Spin, count: usize) -> Result<Self> {
        SpinSystem::new(vec![spin; count])
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_single(&self) -> bool {
        self.spins.len() == 1
    }

    /// Basis index of the product state with projections `ms` (one per spin).
    pub fn basis_index(&self, ms: &[f64]) -> Result<usize> {
        if ms.len() != self.spins.len() {
            return Err(Error::invalid(format!(
                "expected {} projections, got {}",
                self.spins.len(),
                ms.len()
            )));
        }
        let mut index = 0;
        for (spin, &m) in self.spins.iter().zip(ms) {
            let local = spin
                .index_of(m)
                .ok_or_else(|| Error::invalid(format!("m = {m} is not a level of spin {spin}")))?;
            index = index * spin.dim() + local;
        }
        Ok(index)
    }

    /// Projections of each spin for basis index `index`.
    pub fn levels(&self, mut index: usize) -> Vec<f64> {
        let mut ms = vec![0.0; self.spins.len()];
        for (q, spin) in self.spins.iter().enumerate().rev() {
            ms[q] = spin.m(index % spin.dim());
            index /= spin.dim();
        }
        ms
    }
}

impl TryFrom<Vec<Spin>> for SpinSystem {
    type Error = Error;
    fn try_from(spins: Vec<Spin>) -> Result<Self> {
        SpinSystem::new(spins)
    }
}

impl From<SpinSystem> for Vec<Spin> {
    fn from(sys: SpinSystem) -> Vec<Spin> {
        sys.spins
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        };
        f.write_str(s)
    }
}

/// A state vector in the z basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: DVector<Complex64>,
    normalized: bool,
}

impl Ket {
    /// Wraps raw amplitudes without asserting normalization.
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Ket {
            amplitudes: DVector::from_vec(amplitudes),
            normalized: false,
        }
    }

    /// Wraps amplitudes that must already have unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let ket = Ket::new(amplitudes);
        let norm_sqr = ket.norm_sqr();
        if (norm_sqr - 1.0).abs() > TOL {
            return Err(Error::invalid(format!(
                "state is not normalized: |psi|^2 = {norm_sqr}"
            )));
        }
        Ok(Ket {
            normalized: true,
            ..ket
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Self {
        Ket::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Ket::new(vec![ZERO; dim])
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut ket = Ket::zeros(dim);
        ket.amplitudes[index] = ONE;
        ket.normalized = true;
        ket
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut DVector<Complex64> {
        self.normalized = false;
        &mut self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn to_vec(&self) -> Vec<Complex64> {
        self.amplitudes.iter().copied().collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the unit-norm copy of this vector; fails on the zero vector.
    pub fn normalize(&self) -> Result<Ket> {
        let norm = self.norm();
        if norm < 1e-300 {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        Ok(Ket {
            amplitudes: self.amplitudes.unscale(norm),
            normalized: true,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Ket {
        Ket::new(self.amplitudes.iter().map(|a| a * factor).collect())
    }

    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        inner(self, other)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from `other` after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &Ket) -> f64 {
        let overlap = inner(other, self).expect("dimension mismatch");
        let phase = if overlap.norm() > 1e-300 {
            overlap.conj() / overlap.norm()
        } else {
            ONE
        };
        self.scale(phase).max_abs_diff(other)
    }

    /// Multiplies by the global phase that makes the largest-magnitude
    /// amplitude positive real (ties resolve to the lowest index).
    pub fn phase_fixed(&self) -> Ket {
        let mut best = ZERO;
        for a in self.amplitudes.iter() {
            if a.norm() > best.norm() + 1e-12 {
                best = *a;
            }
        }
        if best.norm() == 0.0 {
            return self.clone();
        }
        let mut out = self.scale(best.conj() / best.norm());
        out.normalized = self.normalized;
        out
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_ket(self)
    }
}

impl Add for &Ket {
    type Output = Ket;
    fn add(self, rhs: &Ket) -> Ket {
        Ket::new(
            (&self.amplitudes + &rhs.amplitudes)
                .iter()
                .copied()
                .collect(),
        )
    }
}

impl Sub for &Ket {
    type Output = Ket;
    fn sub(self, rhs: &Ket) -> Ket {
        Ket::new(
            (&self.amplitudes - &rhs.amplitudes)
                .iter()
                .copied()
                .collect(),
        )
    }
}

/// A dense `dim x dim` complex matrix acting on kets.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: DMatrix<Complex64>,
}

impl Operator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::invalid(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Operator { matrix })
    }

    pub fn from_real_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        Operator {
            matrix: DMatrix::from_fn(dim, dim, |r, c| Complex64::new(f(r, c), 0.0)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Operator {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator {
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            matrix: &self.matrix * factor,
        }
    }

    pub fn pow(&self, k: u32) -> Operator {
        let mut out = Operator::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let product = &self.adjoint() * self;
        product.max_abs_diff(&Operator::identity(self.dim())) <= tol
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        &(self * other) - &(other * self)
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        apply(self, ket)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Operator {
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

/// A positive, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let rho = DensityMatrix { matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        DensityMatrix { matrix }
    }

    pub fn from_ket(ket: &Ket) -> Self {
        let v = ket.amplitudes();
        DensityMatrix {
            matrix: v * v.adjoint(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: DMatrix::identity(dim, dim).unscale(dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn population(&self, index: usize) -> f64 {
        self.matrix[(index, index)].re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let hermitian = (&self.matrix + self.matrix.adjoint()).unscale(2.0);
        hermitian
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.matrix
            .iter()
            .zip(self.matrix.adjoint().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.matrix.is_square() {
            return Err(Error::invalid("density matrix must be square"));
        }
        let trace = self.matrix.trace();
        if (trace.re - 1.0).abs() > TOL || trace.im.abs() > TOL {
            return Err(Error::invalid(format!("trace {trace} differs from 1")));
        }
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::invalid(format!("not Hermitian (error {herm:.3e})")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::invalid(format!(
                "not positive semidefinite (eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(())
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with(&self, ket: &Ket) -> f64 {
        let v = ket.amplitudes();
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Weighted mixture `sum_k w_k rho_k`; weights are used as given.
    pub fn mixture<'a>(parts: impl IntoIterator<Item = (f64, &'a DensityMatrix)>) -> Option<Self> {
        let mut acc: Option<DMatrix<Complex64>> = None;
        for (w, rho) in parts {
            let term = rho.matrix.scale(w);
            acc = Some(match acc {
                Some(m) => m + term,
                None => term,
            });
        }
        acc.map(|matrix| DensityMatrix { matrix })
    }
}

/// The three Cartesian spin operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub x: Operator,
    pub y: Operator,
    pub z: Operator,
}

impl SpinOperators {
    pub fn axis(&self, axis: Axis) -> &Operator {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }
}

/// `sqrt(S(S+1) - m(m+1))`, the `S+` matrix element from `m` to `m + 1`.
pub fn ladder_coefficient(spin: Spin, m: f64) -> f64 {
    let s = spin.value();
    (s * (s + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// The raising operator `S+`.
pub fn raising_operator(spin: Spin) -> Operator {
    let d = spin.dim();
    Operator::from_real_fn(d, |r, c| {
        if r == c + 1 {
            ladder_coefficient(spin, spin.m(c))
        } else {
            0.0
        }
    })
}

pub fn lowering_operator(spin: Spin) -> Operator {
    raising_operator(spin).adjoint()
}

/// `S_X = (S+ + S-)/2`, `S_Y = (S+ - S-)/(2i)`, `S_Z = diag(-S..S)`.
pub fn spin_operators(spin: Spin) -> SpinOperators {
    let plus = raising_operator(spin);
    let minus = plus.adjoint();
    let x = (&plus + &minus).scale(Complex64::new(0.5, 0.0));
    let y = (&plus - &minus).scale(Complex64::new(0.0, -0.5));
    let z = Operator::from_real_fn(spin.dim(), |r, c| if r == c { spin.m(r) } else { 0.0 });
    SpinOperators { x, y, z }
}

/// Collective operators `sum_q I x ... x S^(q) x ... x I` as dense matrices.
///
/// Dense storage grows as `dim^2`; for large composite systems prefer
/// [`CollectiveSpin::apply`], which acts on kets without forming the matrix.
pub fn collective_operators(sys: &SpinSystem) -> SpinOperators {
    let embed = |axis: Axis| {
        let mut total = Operator::zeros(sys.dim());
        for q in 0..sys.spins().len() {
            let mut term = Operator::identity(1);
            for (p, &spin) in sys.spins().iter().enumerate() {
                let factor = if p == q {
                    spin_operators(spin).axis(axis).clone()
                } else {
                    Operator::identity(spin.dim())
                };
                term = kron(&term, &factor);
            }
            total = &total + &term;
        }
        total
    };
    SpinOperators {
        x: embed(Axis::X),
        y: embed(Axis::Y),
        z: embed(Axis::Z),
    }
}

/// Matrix-free action of collective spin operators on a composite system.
#[derive(Debug, Clone)]
pub struct CollectiveSpin {
    system: SpinSystem,
    local: Vec<SpinOperators>,
    strides: Vec<usize>,
}

impl CollectiveSpin {
    pub fn new(system: &SpinSystem) -> Self {
        let local = system.spins().iter().map(|&s| spin_operators(s)).collect();
        let mut strides = vec![1; system.spins().len()];
        for q in (0..system.spins().len().saturating_sub(1)).rev() {
            strides[q] = strides[q + 1] * system.spins()[q + 1].dim();
        }
        CollectiveSpin {
            system: system.clone(),
            local,
            strides,
        }
    }

    pub fn system(&self) -> &SpinSystem {
        &self.system
    }

    /// `S_axis |psi>` summed over all spins.
    pub fn apply(&self, axis: Axis, ket: &Ket) -> Result<Ket> {
        let dim = self.system.dim();
        if ket.dim() != dim {
            return Err(Error::invalid(format!(
                "ket has dimension {}, system has {dim}",
                ket.dim()
            )));
        }
        let input = ket.amplitudes();
        let mut out = vec![ZERO; dim];
        for (q, spin) in self.system.spins().iter().enumerate() {
            let op = self.local[q].axis(axis).matrix();
            let d = spin.dim();
            let stride = self.strides[q];
            for (idx, &amp) in input.iter().enumerate() {
                if amp == ZERO {
                    continue;
                }
                let l = (idx / stride) % d;
                // spin matrices are tridiagonal
                let lo = l.saturating_sub(1);
                let hi = (l + 1).min(d - 1);
                for lp in lo..=hi {
                    let coeff = op[(lp, l)];
                    if coeff != ZERO {
                        out[idx + lp * stride - l * stride] += coeff * amp;
                    }
                }
            }
        }
        Ok(Ket::new(out))
    }

    /// `S_axis^power |psi>`.
    pub fn apply_power(&self, axis: Axis, power: u32, ket: &Ket) -> Result<Ket> {
        let mut out = ket.clone();
        for _ in 0..power {
            out = self.apply(axis, &out)?;
        }
        Ok(out)
    }
}

pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator {
        matrix: a.matrix.kronecker(&b.matrix),
    }
}

pub fn kron_ket(a: &Ket, b: &Ket) -> Ket {
    let v = a.amplitudes().kronecker(b.amplitudes());
    Ket::new(v.iter().copied().collect())
}

/// `<a|b>` (conjugate-linear in the first argument).
pub fn inner(a: &Ket, b: &Ket) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(format!(
            "inner product of kets with dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.amplitudes().dotc(b.amplitudes()))
}

pub fn apply(op: &Operator, ket: &Ket) -> Result<Ket> {
    if op.dim() != ket.dim() {
        return Err(Error::invalid(format!(
            "operator of dimension {} applied to ket of dimension {}",
            op.dim(),
            ket.dim()
        )));
    }
    let v = op.matrix() * ket.amplitudes();
    Ok(Ket::new(v.iter().copied().collect()))
}

/// `Tr(op rho)`.
pub fn expectation(op: &Operator, rho: &DensityMatrix) -> Result<Complex64> {
    if op.dim() != rho.dim() {
        return Err(Error::invalid("dimension mismatch in expectation"));
    }
    Ok((op.matrix() * rho.matrix()).trace())
}

/// `op rho op^dagger`, without renormalization.
pub fn conjugate_map(op: &Operator, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if op.dim() != rho.dim() {
        return Err(Error::invalid("dimension mismatch in conjugate_map"));
    }
    let m = op.matrix() * rho.matrix() * op.matrix().adjoint();
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
