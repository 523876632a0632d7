//! Dense complex operators on qubit registers, plus the Pauli, exchange and
//! collective-spin constructors everything else is built from.
//!
//! Computational basis ordering puts qubit 1 in the most significant bit, and
//! `|0⟩` is spin up (`σ_z|0⟩ = +|0⟩`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I_UNIT: C64 = C64::new(0.0, 1.0);

/// Square complex matrix with an optional human-readable label.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
    label: Option<String>,
}

impl Operator {
    /// Wraps a matrix, rejecting non-square or non-finite input.
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::NotSquare { rows: mat.nrows(), cols: mat.ncols() });
        }
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                let z = mat[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { mat, label: None })
    }

    pub(crate) fn from_matrix(mat: DMatrix<C64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat, label: None }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(DMatrix::zeros(dim, dim))
    }

    /// Builds an operator from row-major real entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        Self::new(DMatrix::from_fn(dim, dim, |i, j| C64::new(entries[i * dim + j], 0.0)))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self::from_matrix(DMatrix::from_fn(dim, dim, f))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { C64::new(values[i], 0.0) } else { ZERO })
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &DVector<C64>, b: &DVector<C64>) -> Self {
        Self::from_matrix(a * b.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.mat.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_matrix(&self.mat * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).norm()
    }

    /// `‖A†A − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        (self.mat.adjoint() * &self.mat - DMatrix::<C64>::identity(n, n)).norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// Frobenius distance `‖A − B‖_F`; panics on dimension mismatch.
    pub fn distance(&self, other: &Operator) -> f64 {
        (&self.mat - &other.mat).norm()
    }

    /// Largest entrywise modulus of `A − B`.
    pub fn max_entry_diff(&self, other: &Operator) -> f64 {
        (&self.mat - &other.mat).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &Operator) -> Self {
        Self::from_matrix(&u.mat * &self.mat * u.mat.adjoint())
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut acc = DMatrix::<C64>::identity(self.dim(), self.dim());
        let mut base = self.mat.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Self::from_matrix(acc)
    }

    /// Eigen-decomposition of the Hermitian part, eigenvalues ascending.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<C64>) {
        let sym = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
        (values, vectors)
    }

    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        self.eigh().0
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            writeln!(f, "{label} ({0}x{0})", self.dim())?;
        }
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.mat[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                Operator::from_matrix(&self.mat $op &rhs.mat)
            }
        }
        impl $tr<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                Operator::from_matrix(self.mat $op rhs.mat)
            }
        }
        impl $tr<&Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                Operator::from_matrix(self.mat $op &rhs.mat)
            }
        }
        impl $tr<Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                Operator::from_matrix(&self.mat $op rhs.mat)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale_real(rhs)
    }
}

impl Mul<f64> for Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        Operator::from_matrix(self.mat * C64::new(rhs, 0.0))
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        self.scale(rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator::from_matrix(-&self.mat)
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator::from_matrix(-self.mat)
    }
}

fn check_same_dim(a: &Operator, b: &Operator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator::from_matrix(a.mat.kronecker(&b.mat))
}

/// Left-to-right Kronecker product; the first factor is the most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a Operator>) -> Operator {
    factors
        .into_iter()
        .fold(Operator::identity(1), |acc, f| kron(&acc, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Operator {
        let m = match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I_UNIT], [I_UNIT, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        };
        Operator::from_fn(2, |i, j| m[i][j])
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;
    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::Parse(c.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

/// Tensor product of single-qubit Paulis with a complex prefactor.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    factors: Vec<Pauli>,
    coefficient: C64,
}

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Self {
        Self { factors, coefficient: ONE }
    }

    pub fn with_coefficient(mut self, c: C64) -> Self {
        self.coefficient = c;
        self
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn coefficient(&self) -> C64 {
        self.coefficient
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|&p| p == Pauli::I)
    }

    /// All `4ⁿ` unit-coefficient strings in lexicographic `I < X < Y < Z` order.
    pub fn all(n: usize) -> Vec<PauliString> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Pauli>| {
                    Pauli::ALL.into_iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.push(p);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(PauliString::new).collect()
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let factors = s.chars().map(Pauli::try_from).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(factors))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient != ONE {
            write!(f, "({}) ", self.coefficient)?;
        }
        for p in &self.factors {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

/// Formal linear combination of Pauli strings on a common register.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OperatorSum {
    terms: Vec<(C64, PauliString)>,
}

impl OperatorSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coefficient: C64, term: PauliString) -> Result<()> {
        if let Some((_, first)) = self.terms.first() {
            if first.len() != term.len() {
                return Err(Error::LengthMismatch { expected: first.len(), found: term.len() });
            }
        }
        self.terms.push((coefficient, term));
        Ok(())
    }

    pub fn terms(&self) -> &[(C64, PauliString)] {
        &self.terms
    }

    pub fn to_operator(&self) -> Option<Operator> {
        let (_, first) = self.terms.first()?;
        let n = first.len();
        let mut acc = Operator::zeros(1 << n);
        for (c, s) in &self.terms {
            acc = acc + pauli(n, s).expect("lengths checked on push").scale(*c);
        }
        Some(acc)
    }
}

pub fn pauli(n: usize, string: &PauliString) -> Result<Operator> {
    if string.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: string.len() });
    }
    let mats: Vec<Operator> = string.factors().iter().map(|p| p.matrix()).collect();
    Ok(kron_all(&mats).scale(string.coefficient()))
}

/// `σ^p` acting on `qubit` (1-based) of an `n`-qubit register.
pub fn single_qubit(n: usize, qubit: usize, p: Pauli) -> Operator {
    assert!(qubit >= 1 && qubit <= n, "qubit {qubit} out of range for {n} qubits");
    let mats: Vec<Operator> = (1..=n)
        .map(|k| if k == qubit { p.matrix() } else { Pauli::I.matrix() })
        .collect();
    kron_all(&mats)
}

pub(crate) fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || i >= j || j > n {
        return Err(Error::InvalidPair { n, i, j });
    }
    Ok(())
}

/// `σ⃗_i · σ⃗_j` for qubits `i < j` (1-based).
pub fn heisenberg(n: usize, i: usize, j: usize) -> Result<Operator> {
    check_pair(n, i, j)?;
    let mut acc = Operator::zeros(1 << n);
    for axis in Axis::ALL {
        acc = acc + single_qubit(n, i, axis.pauli()) * single_qubit(n, j, axis.pauli());
    }
    Ok(acc)
}

/// Exchange (swap) operator `E_ij = ½(I + σ⃗_i·σ⃗_j)`.
pub fn exchange(n: usize, i: usize, j: usize) -> Result<Operator> {
    let dot = heisenberg(n, i, j)?;
    Ok(((Operator::identity(1 << n) + dot) * 0.5).with_label(format!("E{i}{j}")))
}

/// Unnormalised collective generator `S_α = Σ_i σ_i^α`.
pub fn collective(n: usize, axis: Axis) -> Operator {
    let mut acc = Operator::zeros(1 << n);
    for q in 1..=n {
        acc = acc + single_qubit(n, q, axis.pauli());
    }
    acc.with_label(format!("S{axis:?}").to_lowercase())
}

/// Total spin squared `S² = ¼ (Σ_i σ⃗_i)²`, eigenvalue `S(S+1)`.
pub fn total_spin_squared(n: usize) -> Operator {
    let mut acc = Operator::zeros(1 << n);
    for axis in Axis::ALL {
        let s = collective(n, axis);
        acc = acc + &s * &s;
    }
    acc * 0.25
}

/// Absolute Hermiticity tolerance applied before exponentiation, scaled by `max(1, ‖h‖)`.
pub const EXPM_HERMITIAN_TOL: f64 = 1e-10;

/// `exp(−i·scale·h)` for Hermitian `h`, via eigendecomposition.
pub fn expm_hermitian(h: &Operator, scale: f64) -> Result<Operator> {
    let residual = h.hermiticity_residual();
    if residual > EXPM_HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let (values, vectors) = h.eigh();
    let phases = DVector::from_iterator(
        values.len(),
        values.iter().map(|&l| C64::from_polar(1.0, -scale * l)),
    );
    let mut scaled = vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(Operator::from_matrix(scaled * vectors.adjoint()))
}

/// Unnormalised Hilbert–Schmidt product `Tr(a† b)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<C64> {
    check_same_dim(a, b)?;
    Ok(a.mat.dotc(&b.mat))
}

pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    check_same_dim(a, b)?;
    Ok(a * b - b * a)
}

pub fn anticommutator(a: &Operator, b: &Operator) -> Result<Operator> {
    check_same_dim(a, b)?;
    Ok(a * b + b * a)
}

/// Computational basis vector `|bits⟩`, `bits` read most-significant first.
pub fn basis_ket(bits: &str) -> DVector<C64> {
    let n = bits.len();
    let idx = usize::from_str_radix(bits, 2).expect("binary string");
    let mut v = DVector::zeros(1 << n);
    v[idx] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_op(dim: usize, seed: u64) -> Operator {
        // small LCG; enough for unit tests
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        Operator::from_fn(dim, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn identity_kron_identity() {
        let i2 = Operator::identity(2);
        assert_eq!(kron(&i2, &i2), Operator::identity(4));
    }

    #[test]
    fn xx_flips_both_bits() {
        let xx = kron(&Pauli::X.matrix(), &Pauli::X.matrix());
        assert_eq!(xx.apply(&basis_ket("00")), basis_ket("11"));
    }

    #[test]
    fn kron_mixed_product() {
        let (a, b, c, d) = (random_op(2, 1), random_op(2, 2), random_op(2, 3), random_op(2, 4));
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        assert!(lhs.distance(&rhs) < 1e-14);
    }

    #[test]
    fn pauli_examples() {
        let z = pauli(1, &"Z".parse().unwrap()).unwrap();
        assert_eq!(z, Operator::diagonal(&[1.0, -1.0]));
        let xii = pauli(3, &"XII".parse().unwrap()).unwrap();
        assert_eq!(xii.apply(&basis_ket("000")), basis_ket("100"));
        assert!(matches!(
            pauli(3, &"XI".parse().unwrap()),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn pauli_strings_are_trace_orthogonal() {
        let all = PauliString::all(2);
        assert_eq!(all.len(), 16);
        let ops: Vec<_> = all.iter().map(|s| pauli(2, s).unwrap()).collect();
        for (a, pa) in ops.iter().enumerate() {
            for (b, pb) in ops.iter().enumerate() {
                let expected = if a == b { 4.0 } else { 0.0 };
                assert!((hs_inner(pa, pb).unwrap() - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn exchange_swaps_and_squares_to_identity() {
        let e12 = exchange(2, 1, 2).unwrap();
        assert_eq!(e12.apply(&basis_ket("01")), basis_ket("10"));
        assert_eq!(e12.apply(&basis_ket("00")), basis_ket("00"));
        assert!((&e12 * &e12).distance(&Operator::identity(4)) < 1e-14);
        assert!(matches!(exchange(3, 2, 2), Err(Error::InvalidPair { .. })));
        assert!(matches!(exchange(3, 0, 1), Err(Error::InvalidPair { .. })));
        assert!(matches!(exchange(3, 2, 4), Err(Error::InvalidPair { .. })));
    }

    #[test]
    fn collective_examples() {
        assert!(collective(1, Axis::Z).distance(&Pauli::Z.matrix()) == 0.0);
        let sz = collective(3, Axis::Z);
        assert_eq!(sz.apply(&basis_ket("000")), basis_ket("000") * C64::new(3.0, 0.0));
        let lhs = commutator(&collective(3, Axis::X), &collective(3, Axis::Y)).unwrap();
        assert!(lhs.distance(&collective(3, Axis::Z).scale(C64::new(0.0, 2.0))) < 1e-13);
    }

    #[test]
    fn spin_squared_small_cases() {
        assert!(total_spin_squared(1).distance(&(Operator::identity(2) * 0.75)) < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = (basis_ket("01") - basis_ket("10")) * C64::new(s, 0.0);
        assert!(total_spin_squared(2).apply(&singlet).norm() < 1e-14);
    }

    #[test]
    fn expm_examples() {
        let h = Operator::diagonal(&[1.0, 0.0]);
        assert!(expm_hermitian(&h, 0.0).unwrap().distance(&Operator::identity(2)) < 1e-14);
        let u = expm_hermitian(&h, std::f64::consts::PI).unwrap();
        assert!(u.distance(&Operator::diagonal(&[-1.0, 1.0])) < 1e-14);
        let nonherm = Operator::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(expm_hermitian(&nonherm, 1.0), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn hs_and_commutator_examples() {
        let (i2, x, y, z) = (Operator::identity(2), Pauli::X.matrix(), Pauli::Y.matrix(), Pauli::Z.matrix());
        assert_eq!(hs_inner(&i2, &z).unwrap(), ZERO);
        assert_eq!(hs_inner(&x, &x).unwrap(), C64::new(2.0, 0.0));
        assert!(commutator(&z, &z).unwrap().frobenius_norm() < 1e-15);
        assert!(anticommutator(&x, &z).unwrap().frobenius_norm() < 1e-15);
        let xy = commutator(&x, &y).unwrap();
        assert!(xy.distance(&z.scale(C64::new(0.0, 2.0))) < 1e-15);
        assert!(matches!(hs_inner(&x, &Operator::identity(4)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(Operator::new(DMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(Operator::new(m), Err(Error::NonFinite { row: 1, col: 0 })));
    }

    #[test]
    fn operator_sum_rejects_mixed_lengths() {
        let mut sum = OperatorSum::new();
        sum.push(ONE, "XZ".parse().unwrap()).unwrap();
        assert!(sum.push(ONE, "X".parse().unwrap()).is_err());
        sum.push(C64::new(0.5, 0.0), "ZX".parse().unwrap()).unwrap();
        let op = sum.to_operator().unwrap();
        assert!(op.is_hermitian(1e-15));
        assert_eq!(op.dim(), 4);
    }
}
