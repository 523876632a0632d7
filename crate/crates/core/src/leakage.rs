//! Code/complement block structure, Z₂ grading with respect to a leakage
//! elimination operator (LEO), and the canonical and generalized LEO
//! constructors.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::io::{ComplexJson, OperatorJson};
use crate::operator::{anticommutator, commutator, expm_hermitian, Operator, ONE, ZERO};
use crate::{DEFAULT_TOL, INTEGER_TOL};

/// Splits the Hilbert space into a code subspace `C` and its complement `C⊥`.
///
/// `basis_change` maps computational coordinates to the DFS-ordered frame in
/// which the first `code_dim` basis vectors span `C`. Within `C` the frame is
/// ordered logical ⊗ gauge, so `code_dim = 2·gauge_dim`.
#[derive(Clone, Debug)]
pub struct BlockPartition {
    pub total_dim: usize,
    pub code_dim: usize,
    pub gauge_dim: usize,
    pub basis_change: Operator,
    pub tol: f64,
}

impl BlockPartition {
    pub fn new(basis_change: Operator, code_dim: usize, gauge_dim: usize) -> Result<Self> {
        let total_dim = basis_change.dim();
        if code_dim == 0 || code_dim >= total_dim {
            return Err(Error::InvalidPartition(format!(
                "code dimension {code_dim} must lie strictly between 0 and {total_dim}"
            )));
        }
        if gauge_dim == 0 || code_dim != 2 * gauge_dim {
            return Err(Error::InvalidPartition(format!(
                "code dimension {code_dim} is not 2 x gauge dimension {gauge_dim}"
            )));
        }
        let residual = basis_change.unitarity_residual();
        if residual > DEFAULT_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { total_dim, code_dim, gauge_dim, basis_change, tol: DEFAULT_TOL })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn perp_dim(&self) -> usize {
        self.total_dim - self.code_dim
    }

    fn check_dim(&self, op: &Operator) -> Result<()> {
        if op.dim() != self.total_dim {
            return Err(Error::DimensionMismatch { expected: self.total_dim, found: op.dim() });
        }
        Ok(())
    }

    /// `U op U†`: physical operator expressed in the DFS frame.
    pub fn to_frame(&self, op: &Operator) -> Operator {
        op.conjugate_by(&self.basis_change)
    }

    /// `U† op U`: DFS-frame operator expressed physically.
    pub fn from_frame(&self, op: &Operator) -> Operator {
        op.conjugate_by(&self.basis_change.adjoint())
    }

    pub fn frame_code_projector(&self) -> Operator {
        let c = self.code_dim;
        Operator::from_fn(self.total_dim, |i, j| if i == j && i < c { ONE } else { ZERO })
    }

    pub fn code_projector(&self) -> Operator {
        self.from_frame(&self.frame_code_projector())
    }

    pub fn perp_projector(&self) -> Operator {
        Operator::identity(self.total_dim) - self.code_projector()
    }

    /// `diag(−I_code, I_perp)` in the DFS frame.
    pub fn frame_parity(&self) -> Operator {
        let c = self.code_dim;
        Operator::from_fn(self.total_dim, |i, j| match (i == j, i < c) {
            (true, true) => -ONE,
            (true, false) => ONE,
            _ => ZERO,
        })
    }
}

/// The four blocks of an operator in the DFS frame:
/// `[[code, leak_out], [leak_in, complement]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Blocks {
    /// `C → C` (the `B` block).
    pub code: DMatrix<C64>,
    /// `C⊥ → C⊥`.
    pub complement: DMatrix<C64>,
    /// Rows in `C`, columns in `C⊥`.
    pub code_from_complement: DMatrix<C64>,
    /// Rows in `C⊥`, columns in `C`.
    pub complement_from_code: DMatrix<C64>,
}

impl Blocks {
    pub fn leakage_norm(&self) -> f64 {
        (self.code_from_complement.norm_squared() + self.complement_from_code.norm_squared()).sqrt()
    }

    /// Reassembles the DFS-frame matrix.
    pub fn reassemble(&self) -> Operator {
        let c = self.code.nrows();
        let n = c + self.complement.nrows();
        Operator::from_fn(n, |i, j| match (i < c, j < c) {
            (true, true) => self.code[(i, j)],
            (true, false) => self.code_from_complement[(i, j - c)],
            (false, true) => self.complement_from_code[(i - c, j)],
            (false, false) => self.complement[(i - c, j - c)],
        })
    }
}

pub fn frame_blocks(frame_op: &Operator, code_dim: usize) -> Blocks {
    let n = frame_op.dim();
    let m = frame_op.matrix();
    let p = n - code_dim;
    Blocks {
        code: m.view((0, 0), (code_dim, code_dim)).into_owned(),
        complement: m.view((code_dim, code_dim), (p, p)).into_owned(),
        code_from_complement: m.view((0, code_dim), (code_dim, p)).into_owned(),
        complement_from_code: m.view((code_dim, 0), (p, code_dim)).into_owned(),
    }
}

/// Splits a physical operator into code, complement and leakage blocks.
pub fn block_partition(op: &Operator, p: &BlockPartition) -> Result<Blocks> {
    p.check_dim(op)?;
    Ok(frame_blocks(&p.to_frame(op), p.code_dim))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GradedClass {
    Even,
    Odd,
    Mixed,
}

/// Grading read off the block structure: leakage blocks only is odd,
/// no leakage blocks is even.
pub fn classify_blocks(op: &Operator, p: &BlockPartition) -> Result<GradedClass> {
    let b = block_partition(op, p)?;
    let tol = p.tol * op.frobenius_norm().max(1.0);
    let diag = (b.code.norm_squared() + b.complement.norm_squared()).sqrt();
    Ok(if b.leakage_norm() <= tol {
        GradedClass::Even
    } else if diag <= tol {
        GradedClass::Odd
    } else {
        GradedClass::Mixed
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct GradingResiduals {
    /// Largest `‖[R, E]‖_F` over the even probes.
    pub max_even_commutator: f64,
    /// Largest `‖{R, L}‖_F` over the odd probes.
    pub max_odd_anticommutator: f64,
    pub probes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockName {
    Code,
    Complement,
}

/// Why a candidate generator was refused.
#[derive(Clone, Debug, PartialEq, Error, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum LeoRejection {
    #[error("dimension {found} does not match partition dimension {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("generator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("generator acts on the complement: |sigma P_perp| = {residual:.3e}")]
    ActsOnComplement { residual: f64 },
    #[error("generator does not square to the code projector: |sigma^2 - P_C| = {residual:.3e}")]
    NotCodeInvolution { residual: f64 },
    #[error("generator couples code and complement (leakage norm {residual:.3e})")]
    LeakageBlocks { residual: f64 },
    #[error("{block:?} block has non-integer eigenvalue {value}")]
    NonIntegerEigenvalue { block: BlockName, value: f64 },
    #[error("{block:?} block mixes even and odd eigenvalues {values:?}")]
    MixedParity { block: BlockName, values: Vec<f64> },
    #[error("code and complement eigenvalues share parity ({parity})")]
    SameParity { parity: &'static str },
    #[error("unitary is not a parity operator in the partition frame (residual {residual:.3e})")]
    NotParity { residual: f64 },
}

/// Leakage elimination operator: `e^{iφ}·diag(−I_code, I_perp)` in the DFS frame.
#[derive(Clone, Debug)]
pub struct Leo {
    pub unitary: Operator,
    pub phase: C64,
    pub partition: BlockPartition,
    pub grading_residuals: GradingResiduals,
}

impl Leo {
    /// Wraps a unitary after checking that it has the parity form.
    pub fn from_unitary(unitary: Operator, p: &BlockPartition) -> std::result::Result<Self, LeoRejection> {
        if unitary.dim() != p.total_dim {
            return Err(LeoRejection::Dimension { expected: p.total_dim, found: unitary.dim() });
        }
        let frame = p.to_frame(&unitary);
        let parity = p.frame_parity();
        // Tr(P·R) = e^{iφ}·dim
        let mut phase = (0..p.total_dim).map(|k| parity.get(k, k) * frame.get(k, k)).sum::<C64>();
        phase /= phase.norm().max(f64::MIN_POSITIVE);
        let residual = frame.distance(&parity.scale(phase));
        if residual > p.tol * (p.total_dim as f64).sqrt() {
            return Err(LeoRejection::NotParity { residual });
        }
        let grading_residuals = grading_residuals(&unitary, p);
        Ok(Self { unitary, phase, partition: p.clone(), grading_residuals })
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    pub fn phase_angle(&self) -> f64 {
        self.phase.arg()
    }

    /// `‖R² − e^{2iφ} I‖_F`.
    pub fn parity_residual(&self) -> f64 {
        let sq = &self.unitary * &self.unitary;
        sq.distance(&Operator::identity(self.dim()).scale(self.phase * self.phase))
    }

    pub fn report(&self) -> LeoReport {
        LeoReport {
            dim: self.dim(),
            code_dim: self.partition.code_dim,
            phase: self.phase.into(),
            phase_angle: self.phase_angle(),
            parity_residual: self.parity_residual(),
            grading_residuals: self.grading_residuals,
            unitary: (&self.unitary).into(),
            dfs_frame: (&self.partition.to_frame(&self.unitary)).into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeoReport {
    pub dim: usize,
    pub code_dim: usize,
    pub phase: ComplexJson,
    pub phase_angle: f64,
    pub parity_residual: f64,
    pub grading_residuals: GradingResiduals,
    pub unitary: OperatorJson,
    pub dfs_frame: OperatorJson,
}

/// Hermitian matrix units of the DFS frame, split into block-diagonal
/// (even) and leakage (odd) probes, returned in the physical frame.
pub fn grading_probes(p: &BlockPartition) -> (Vec<Operator>, Vec<Operator>) {
    let n = p.total_dim;
    let c = p.code_dim;
    let unit = |i: usize, j: usize, imag: bool| {
        let (a, b) = if imag { (C64::new(0.0, -1.0), C64::new(0.0, 1.0)) } else { (ONE, ONE) };
        let m = Operator::from_fn(n, |r, s| {
            if i == j {
                if r == i && s == i { ONE } else { ZERO }
            } else if r == i && s == j {
                a
            } else if r == j && s == i {
                b
            } else {
                ZERO
            }
        });
        p.from_frame(&m)
    };
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for i in 0..n {
        for j in i..n {
            let same_block = (i < c) == (j < c);
            let target = if same_block { &mut even } else { &mut odd };
            target.push(unit(i, j, false));
            if i != j {
                target.push(unit(i, j, true));
            }
        }
    }
    (even, odd)
}

pub fn grading_residuals(r: &Operator, p: &BlockPartition) -> GradingResiduals {
    let (even, odd) = grading_probes(p);
    let max_even_commutator = even
        .iter()
        .map(|e| commutator(r, e).map(|c| c.frobenius_norm()).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let max_odd_anticommutator = odd
        .iter()
        .map(|l| anticommutator(r, l).map(|c| c.frobenius_norm()).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    GradingResiduals { max_even_commutator, max_odd_anticommutator, probes: even.len() + odd.len() }
}

/// Even if `[R, X] ≈ 0`, odd if `{R, X} ≈ 0`, otherwise mixed.
pub fn grade(op: &Operator, leo: &Leo) -> GradedClass {
    let tol = leo.partition.tol * op.frobenius_norm().max(1.0);
    let comm = commutator(&leo.unitary, op).map(|c| c.frobenius_norm()).unwrap_or(f64::INFINITY);
    if comm <= tol {
        return GradedClass::Even;
    }
    let anti = anticommutator(&leo.unitary, op).map(|c| c.frobenius_norm()).unwrap_or(f64::INFINITY);
    if anti <= tol {
        GradedClass::Odd
    } else {
        GradedClass::Mixed
    }
}

fn check_generator(op: &Operator, p: &BlockPartition) -> std::result::Result<(), LeoRejection> {
    if op.dim() != p.total_dim {
        return Err(LeoRejection::Dimension { expected: p.total_dim, found: op.dim() });
    }
    let residual = op.hermiticity_residual();
    if residual > p.tol * op.frobenius_norm().max(1.0) {
        return Err(LeoRejection::NotHermitian { residual });
    }
    Ok(())
}

/// `R = exp(−iπσ_L)` for a canonical logical operation `σ_L`.
///
/// `σ_L` must vanish on `C⊥` and square to the code projector.
pub fn make_canonical_leo(sigma_l: &Operator, p: &BlockPartition) -> std::result::Result<Leo, LeoRejection> {
    check_generator(sigma_l, p)?;
    let perp = p.perp_projector();
    let residual = (sigma_l * &perp).frobenius_norm();
    if residual > p.tol {
        return Err(LeoRejection::ActsOnComplement { residual });
    }
    let residual = (sigma_l * sigma_l).distance(&p.code_projector());
    if residual > p.tol {
        return Err(LeoRejection::NotCodeInvolution { residual });
    }
    let r = expm_hermitian(sigma_l, std::f64::consts::PI)
        .map_err(|_| LeoRejection::NotHermitian { residual: sigma_l.hermiticity_residual() })?;
    Leo::from_unitary(r, p)
}

fn integer_parity(block: BlockName, values: &[f64]) -> std::result::Result<i64, LeoRejection> {
    let mut parity = None;
    for &v in values {
        let k = v.round();
        if (v - k).abs() > INTEGER_TOL {
            return Err(LeoRejection::NonIntegerEigenvalue { block, value: v });
        }
        let par = (k as i64).rem_euclid(2);
        match parity {
            None => parity = Some(par),
            Some(q) if q != par => return Err(LeoRejection::MixedParity { block, values: values.to_vec() }),
            _ => {}
        }
    }
    Ok(parity.unwrap_or(0))
}

/// `R = exp(−iπh)` for `h` block diagonal with integer spectra of opposite
/// parity on code and complement.
pub fn make_generalized_leo(h: &Operator, p: &BlockPartition) -> std::result::Result<Leo, LeoRejection> {
    check_generator(h, p)?;
    let blocks = frame_blocks(&p.to_frame(h), p.code_dim);
    let residual = blocks.leakage_norm();
    if residual > p.tol * h.frobenius_norm().max(1.0) {
        return Err(LeoRejection::LeakageBlocks { residual });
    }
    let code_vals = Operator::from_matrix(blocks.code).eigenvalues_hermitian();
    let perp_vals = Operator::from_matrix(blocks.complement).eigenvalues_hermitian();
    let code_par = integer_parity(BlockName::Code, &code_vals)?;
    let perp_par = integer_parity(BlockName::Complement, &perp_vals)?;
    if code_par == perp_par {
        let parity = if code_par == 0 { "even" } else { "odd" };
        return Err(LeoRejection::SameParity { parity });
    }
    let r = expm_hermitian(h, std::f64::consts::PI)
        .map_err(|_| LeoRejection::NotHermitian { residual: h.hermiticity_residual() })?;
    Leo::from_unitary(r, p)
}

/// True iff `op` commutes with every generator within `tol` (Frobenius).
pub fn is_in_commutant(op: &Operator, generators: &[Operator], tol: f64) -> bool {
    generators.iter().all(|g| match commutator(op, g) {
        Ok(c) => c.frobenius_norm() <= tol * op.frobenius_norm().max(1.0) * g.frobenius_norm().max(1.0),
        Err(_) => false,
    })
}

/// Largest entrywise difference between `a` and `b` after removing the
/// best global phase.
pub fn phase_aligned_distance(a: &Operator, b: &Operator) -> f64 {
    let overlap = a.matrix().dotc(b.matrix());
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
    a.scale(phase).max_entry_diff(b)
}
