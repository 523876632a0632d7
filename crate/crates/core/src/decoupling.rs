//! Bang-bang decoupling: average Hamiltonians, parity-kick sequences,
//! encoded-group symmetrization and system–bath leakage dynamics.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::basis::gauge_part;
use crate::error::{Error, Result};
use crate::leakage::{frame_blocks, BlockPartition, Leo};
use crate::operator::{expm_hermitian, kron, Operator, Pauli};

fn check_unitary(u: &Operator) -> Result<()> {
    let residual = u.unitarity_residual();
    if residual > crate::DEFAULT_TOL * (u.dim() as f64).sqrt() {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// `(1/N) Σ_k U_k h U_k†`.
pub fn effective_hamiltonian(h: &Operator, pulses: &[Operator]) -> Result<Operator> {
    if pulses.is_empty() {
        return Err(Error::InvalidSchedule("no pulses".into()));
    }
    let mut acc = Operator::zeros(h.dim());
    for u in pulses {
        if u.dim() != h.dim() {
            return Err(Error::DimensionMismatch { expected: h.dim(), found: u.dim() });
        }
        check_unitary(u)?;
        acc = acc + h.conjugate_by(u);
    }
    Ok(acc * (1.0 / pulses.len() as f64))
}

/// `(h + R h R†)/2`.
pub fn even_part(h: &Operator, leo: &Leo) -> Operator {
    (h + h.conjugate_by(&leo.unitary)) * 0.5
}

/// `(h − R h R†)/2`.
pub fn odd_part(h: &Operator, leo: &Leo) -> Operator {
    (h - h.conjugate_by(&leo.unitary)) * 0.5
}

#[derive(Clone, Debug)]
pub struct PulseSchedule {
    pub leo: Leo,
    pub total_time: f64,
    pub cycles: usize,
}

impl PulseSchedule {
    pub fn new(leo: Leo, total_time: f64, cycles: usize) -> Result<Self> {
        if !total_time.is_finite() || total_time < 0.0 {
            return Err(Error::InvalidSchedule(format!("total time {total_time} must be finite and >= 0")));
        }
        if cycles == 0 {
            return Err(Error::InvalidSchedule("cycles must be >= 1".into()));
        }
        Ok(Self { leo, total_time, cycles })
    }

    /// Free-evolution time per segment; two segments per cycle.
    pub fn segment_time(&self) -> f64 {
        self.total_time / (2 * self.cycles) as f64
    }
}

/// One row of a sweep over the number of cycles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n: usize,
    pub leakage_norm: f64,
    pub fidelity: f64,
    /// `‖U_eff − U_ideal‖_F` (closed system) or leaked population (open).
    pub limit_error: f64,
}

/// Leakage norms below this are treated as roundoff.
pub const LEAKAGE_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    pub kind: String,
    pub total_time: f64,
    pub points: Vec<SweepPoint>,
    /// Same quantities with no pulses applied.
    pub unpulsed: Option<SweepPoint>,
    /// Least-squares slope of `log leakage` against `log n`; absent when
    /// any point is below [`LEAKAGE_FLOOR`].
    pub slope: Option<f64>,
    pub monotone_non_increasing: bool,
    pub max_norm_residual: f64,
    pub fidelity_formula: String,
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl SimulationReport {
    fn finish(kind: &str, total_time: f64, points: Vec<SweepPoint>, unpulsed: Option<SweepPoint>, norm_res: f64, formula: &str, start: Instant) -> Self {
        let ns: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
        let ls: Vec<f64> = points.iter().map(|p| p.leakage_norm).collect();
        let monotone = ls.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + LEAKAGE_FLOOR);
        let resolved = ls.iter().all(|&l| l > LEAKAGE_FLOOR);
        Self {
            kind: kind.into(),
            total_time,
            slope: if resolved { loglog_slope(&ns, &ls) } else { None },
            points,
            unpulsed,
            monotone_non_increasing: monotone,
            max_norm_residual: norm_res,
            fidelity_formula: formula.into(),
            wall_time_s: start.elapsed().as_secs_f64(),
        }
    }
}

/// Least-squares slope of `ln y` against `ln x`; `None` if fewer than two
/// points or any value is non-positive.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() || x.iter().chain(y).any(|v| *v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub const CLOSED_FIDELITY_FORMULA: &str = "F = max(0, 1 - |P_C (U - U_ideal) P_C|_F^2 / (2 d_C)), U_ideal = exp(-i H_even t)";
pub const OPEN_FIDELITY_FORMULA: &str =
    "F = (1/(4 g b)) sum_{m',b',m,b} |sum_l <l m' b'|U|l m b>|^2 (logical entanglement fidelity, gauge and bath maximally mixed)";

/// Closed-system code fidelity of `u` against `ideal`.
pub fn code_fidelity(u: &Operator, ideal: &Operator, p: &BlockPartition) -> f64 {
    let pc = p.code_projector();
    let diff = &pc * (u - ideal) * &pc;
    (1.0 - diff.frobenius_norm().powi(2) / (2.0 * p.code_dim as f64)).clamp(0.0, 1.0)
}

/// `(e^{−iHτ} R† e^{−iHτ} R)ⁿ` with `τ = t/(2n)`.
pub fn parity_kick_unitary(h: &Operator, schedule: &PulseSchedule) -> Result<Operator> {
    let r = &schedule.leo.unitary;
    if h.dim() != r.dim() {
        return Err(Error::DimensionMismatch { expected: r.dim(), found: h.dim() });
    }
    let e = expm_hermitian(h, schedule.segment_time())?;
    let cycle = &e * r.adjoint() * &e * r;
    Ok(cycle.powi(schedule.cycles))
}

/// Runs one parity-kick schedule and measures leakage and fidelity against
/// `exp(−i H_even t)`.
pub fn parity_kick(h: &Operator, schedule: &PulseSchedule) -> Result<(Operator, SimulationReport)> {
    let start = Instant::now();
    let u = parity_kick_unitary(h, schedule)?;
    let ideal = expm_hermitian(&even_part(h, &schedule.leo), schedule.total_time)?;
    let point = closed_point(&u, &ideal, schedule.cycles, &schedule.leo.partition);
    let report = SimulationReport::finish(
        "parity_kick",
        schedule.total_time,
        vec![point],
        None,
        u.unitarity_residual(),
        CLOSED_FIDELITY_FORMULA,
        start,
    );
    Ok((u, report))
}

fn closed_point(u: &Operator, ideal: &Operator, n: usize, p: &BlockPartition) -> SweepPoint {
    SweepPoint {
        n,
        leakage_norm: frame_blocks(&p.to_frame(u), p.code_dim).leakage_norm(),
        fidelity: code_fidelity(u, ideal, p),
        limit_error: u.distance(ideal),
    }
}

pub fn parity_kick_sweep(h: &Operator, leo: &Leo, total_time: f64, n_list: &[usize]) -> Result<SimulationReport> {
    let start = Instant::now();
    let ideal = expm_hermitian(&even_part(h, leo), total_time)?;
    let mut points = Vec::with_capacity(n_list.len());
    let mut norm_res: f64 = 0.0;
    for &n in n_list {
        let schedule = PulseSchedule::new(leo.clone(), total_time, n)?;
        let u = parity_kick_unitary(h, &schedule)?;
        norm_res = norm_res.max(u.unitarity_residual());
        points.push(closed_point(&u, &ideal, n, &leo.partition));
    }
    let free = expm_hermitian(h, total_time)?;
    let unpulsed = closed_point(&free, &ideal, 0, &leo.partition);
    Ok(SimulationReport::finish(
        "parity_kick",
        total_time,
        points,
        Some(unpulsed),
        norm_res,
        CLOSED_FIDELITY_FORMULA,
        start,
    ))
}

/// Code-block Pauli matrices for `k = 0, 1, 2` (x, y, z).
fn pauli_k(k: usize) -> DMatrix<C64> {
    [Pauli::X, Pauli::Y, Pauli::Z][k].matrix().into_matrix()
}

/// Projects onto the code and checks the code block is `σ ⊗ I_gauge`
/// (logical) or `I₂ ⊗ σ` (gauge).
fn canonical_pulse(op: &Operator, expected: &DMatrix<C64>, name: &str, p: &BlockPartition) -> Result<Operator> {
    let blocks = frame_blocks(&p.to_frame(op), p.code_dim);
    let residual = (&blocks.code - expected).norm();
    if residual > p.tol * (p.code_dim as f64).sqrt() || blocks.leakage_norm() > p.tol {
        return Err(Error::NonPauliCodeBlock { name: name.into(), residual: residual.max(blocks.leakage_norm()) });
    }
    let pc = p.code_projector();
    let canonical = &pc * op * &pc;
    expm_hermitian(&canonical, std::f64::consts::FRAC_PI_2)
}

fn twirl(h: &Operator, pulses: &[Operator]) -> Operator {
    let mut acc = h.clone();
    for v in pulses {
        acc = acc + h.conjugate_by(v);
    }
    acc * (1.0 / (pulses.len() + 1) as f64)
}

/// Averages `h` over `{I, V_x, V_y, V_z}`, `V_k = exp(−iπ σ̄_k/2)` built from
/// the code-projected logical operators. The code block of the result is
/// `I₂ ⊗ M`.
pub fn symmetrize_logical_group(h: &Operator, logical: (&Operator, &Operator, &Operator), p: &BlockPartition) -> Result<Operator> {
    if h.dim() != p.total_dim {
        return Err(Error::DimensionMismatch { expected: p.total_dim, found: h.dim() });
    }
    let g = Operator::identity(p.gauge_dim);
    let ops = [logical.0, logical.1, logical.2];
    let names = ["X_L", "Y_L", "Z_L"];
    let mut pulses = Vec::with_capacity(3);
    for k in 0..3 {
        let expected = Operator::from_matrix(pauli_k(k));
        let expected = kron(&expected, &g).into_matrix();
        pulses.push(canonical_pulse(ops[k], &expected, names[k], p)?);
    }
    Ok(twirl(h, &pulses))
}

/// Follows the logical twirl with a twirl over gauge Paulis, given
/// operators whose code blocks are `I₂ ⊗ σ_{x,y,z}`. With a two-dimensional
/// gauge the code block of the result is proportional to `I`.
pub fn symmetrize_code_group(
    h: &Operator,
    logical: (&Operator, &Operator, &Operator),
    gauge: (&Operator, &Operator, &Operator),
    p: &BlockPartition,
) -> Result<Operator> {
    let first = symmetrize_logical_group(h, logical, p)?;
    if p.gauge_dim != 2 {
        return Err(Error::InvalidPartition(format!("gauge twirl needs a qubit gauge, found dimension {}", p.gauge_dim)));
    }
    let ops = [gauge.0, gauge.1, gauge.2];
    let names = ["gauge_x", "gauge_y", "gauge_z"];
    let id = Operator::identity(2);
    let mut pulses = Vec::with_capacity(3);
    for k in 0..3 {
        let expected = kron(&id, &Operator::from_matrix(pauli_k(k))).into_matrix();
        pulses.push(canonical_pulse(ops[k], &expected, names[k], p)?);
    }
    Ok(twirl(&first, &pulses))
}

/// Distance of the code block of `h` from `I₂ ⊗ M`.
pub fn logical_identity_residual(h: &Operator, p: &BlockPartition) -> f64 {
    let b = frame_blocks(&p.to_frame(h), p.code_dim);
    (&b.code - gauge_part(&b.code, p.gauge_dim)).norm()
}

/// Distance of the code block of `h` from `(Tr B / d_C)·I`.
pub fn code_identity_residual(h: &Operator, p: &BlockPartition) -> f64 {
    let b = frame_blocks(&p.to_frame(h), p.code_dim);
    let mean = b.code.trace() / p.code_dim as f64;
    (&b.code - DMatrix::<C64>::identity(p.code_dim, p.code_dim) * mean).norm()
}

/// Gaussian Hermitian matrix scaled to unit spectral radius.
pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> Operator {
    let mut sample = || -> f64 { StandardNormal.sample(rng) };
    let a = Operator::from_fn(dim, |_, _| C64::new(sample(), sample()));
    let h = (&a + a.adjoint()) * 0.5;
    let radius = h.eigenvalues_hermitian().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if radius > 0.0 {
        h * (1.0 / radius)
    } else {
        h
    }
}

/// System–bath couplings `Σ S_γ ⊗ B_γ` plus a bath Hamiltonian.
#[derive(Clone, Debug)]
pub struct BathModel {
    pub dim: usize,
    pub couplings: Vec<(Operator, Operator)>,
    pub h_b: Operator,
    pub seed: u64,
}

impl BathModel {
    pub fn new(dim: usize, couplings: Vec<(Operator, Operator)>, h_b: Operator, seed: u64) -> Result<Self> {
        if dim == 0 || h_b.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: h_b.dim() });
        }
        let tol = crate::DEFAULT_TOL;
        let check = |op: &Operator| {
            let residual = op.hermiticity_residual();
            if residual > tol * op.frobenius_norm().max(1.0) {
                return Err(Error::NotHermitian { residual });
            }
            Ok(())
        };
        check(&h_b)?;
        let sys_dim = couplings.first().map(|(s, _)| s.dim());
        for (s, b) in &couplings {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: b.dim() });
            }
            if Some(s.dim()) != sys_dim {
                return Err(Error::DimensionMismatch { expected: sys_dim.unwrap_or(0), found: s.dim() });
            }
            check(s)?;
            check(b)?;
        }
        Ok(Self { dim, couplings, h_b, seed })
    }

    /// Draws `H_B` and one `B_γ` per system operator from a seeded ensemble.
    pub fn random(dim: usize, seed: u64, system_ops: Vec<Operator>) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h_b = random_hermitian(dim, &mut rng);
        let couplings = system_ops.into_iter().map(|s| (s, random_hermitian(dim, &mut rng))).collect();
        Self::new(dim, couplings, h_b, seed)
    }

    /// `H_S ⊗ I + I ⊗ H_B + Σ S_γ ⊗ B_γ`.
    pub fn joint_hamiltonian(&self, h_s: &Operator) -> Result<Operator> {
        for (s, _) in &self.couplings {
            if s.dim() != h_s.dim() {
                return Err(Error::DimensionMismatch { expected: h_s.dim(), found: s.dim() });
            }
        }
        let ib = Operator::identity(self.dim);
        let mut h = kron(h_s, &ib) + kron(&Operator::identity(h_s.dim()), &self.h_b);
        for (s, b) in &self.couplings {
            h = h + kron(s, b);
        }
        Ok(h)
    }
}

struct OpenMetrics {
    leaked: f64,
    fidelity: f64,
    norm_residual: f64,
}

fn open_metrics(u: &Operator, p: &BlockPartition, b: usize) -> OpenMetrics {
    let v = kron(&p.basis_change, &Operator::identity(b));
    let f = u.conjugate_by(&v);
    let dc = p.code_dim * b;
    let m = f.matrix();
    let leaked = m.view((dc, 0), (m.nrows() - dc, dc)).norm_squared() / dc as f64;
    let g = p.gauge_dim;
    let idx = |l: usize, mu: usize, beta: usize| (l * g + mu) * b + beta;
    let mut sum = 0.0;
    for mp in 0..g {
        for bp in 0..b {
            for mu in 0..g {
                for beta in 0..b {
                    let tr: C64 = (0..2).map(|l| m[(idx(l, mp, bp), idx(l, mu, beta))]).sum();
                    sum += tr.norm_sqr();
                }
            }
        }
    }
    let fidelity = sum / (4 * g * b) as f64;
    let norm_residual = (0..dc)
        .map(|k| (m.column(k).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    OpenMetrics { leaked, fidelity, norm_residual }
}

fn open_point(metrics: &OpenMetrics, n: usize) -> SweepPoint {
    SweepPoint { n, leakage_norm: metrics.leaked.sqrt(), fidelity: metrics.fidelity, limit_error: metrics.leaked }
}

/// Joint evolution with `R ⊗ I` pulses; `n = 0` in the schedule list means
/// free evolution.
fn open_unitary(h: &Operator, r: &Operator, b: usize, total_time: f64, n: usize) -> Result<Operator> {
    if n == 0 {
        return expm_hermitian(h, total_time);
    }
    let rj = kron(r, &Operator::identity(b));
    let e = expm_hermitian(h, total_time / (2 * n) as f64)?;
    Ok((&e * rj.adjoint() * &e * &rj).powi(n))
}

/// Population leaked out of `C ⊗ bath` and logical fidelity from initial
/// code states, for the given schedule and with no pulses.
pub fn simulate_open_system(bath: &BathModel, h_s: &Operator, schedule: &PulseSchedule, p: &BlockPartition) -> Result<SimulationReport> {
    simulate_open_system_sweep(bath, h_s, &schedule.leo, schedule.total_time, &[schedule.cycles], p)
}

pub fn simulate_open_system_sweep(
    bath: &BathModel,
    h_s: &Operator,
    leo: &Leo,
    total_time: f64,
    n_list: &[usize],
    p: &BlockPartition,
) -> Result<SimulationReport> {
    let start = Instant::now();
    if h_s.dim() != p.total_dim {
        return Err(Error::DimensionMismatch { expected: p.total_dim, found: h_s.dim() });
    }
    if leo.dim() != p.total_dim {
        return Err(Error::DimensionMismatch { expected: p.total_dim, found: leo.dim() });
    }
    let h = bath.joint_hamiltonian(h_s)?;
    let mut points = Vec::with_capacity(n_list.len());
    let mut norm_res: f64 = 0.0;
    for &n in n_list {
        if n == 0 {
            return Err(Error::InvalidSchedule("cycles must be >= 1".into()));
        }
        let u = open_unitary(&h, &leo.unitary, bath.dim, total_time, n)?;
        let m = open_metrics(&u, p, bath.dim);
        norm_res = norm_res.max(m.norm_residual);
        points.push(open_point(&m, n));
    }
    let u0 = open_unitary(&h, &leo.unitary, bath.dim, total_time, 0)?;
    let m0 = open_metrics(&u0, p, bath.dim);
    norm_res = norm_res.max(m0.norm_residual);
    Ok(SimulationReport::finish(
        "open_system",
        total_time,
        points,
        Some(open_point(&m0, 0)),
        norm_res,
        OPEN_FIDELITY_FORMULA,
        start,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leakage::make_generalized_leo;

    fn toy() -> (BlockPartition, Leo) {
        let p = BlockPartition::new(Operator::identity(4), 2, 1).unwrap();
        let leo = make_generalized_leo(&Operator::diagonal(&[1.0, 1.0, 0.0, 0.0]), &p).unwrap();
        (p, leo)
    }

    #[test]
    fn parity_kick_kills_odd_hamiltonian() {
        let (_, leo) = toy();
        let odd = Operator::from_real_rows(4, &[0., 0., 1., 0., 0., 0., 0., 1., 1., 0., 0., 0., 0., 1., 0., 0.]).unwrap();
        let avg = effective_hamiltonian(&odd, &[Operator::identity(4), leo.unitary.clone()]).unwrap();
        assert!(avg.frobenius_norm() < 1e-14);
        let even = Operator::diagonal(&[0.3, -0.1, 0.7, 0.2]);
        let avg = effective_hamiltonian(&even, &[Operator::identity(4), leo.unitary.clone()]).unwrap();
        assert!(avg.distance(&even) < 1e-14);
    }

    #[test]
    fn schedule_validation() {
        let (_, leo) = toy();
        assert!(PulseSchedule::new(leo.clone(), -1.0, 1).is_err());
        assert!(PulseSchedule::new(leo.clone(), 1.0, 0).is_err());
        assert!(PulseSchedule::new(leo, f64::NAN, 1).is_err());
    }

    #[test]
    fn even_hamiltonian_is_untouched() {
        let (_, leo) = toy();
        let h = Operator::diagonal(&[0.3, -0.1, 0.7, 0.2]);
        for n in [1, 3, 8] {
            let s = PulseSchedule::new(leo.clone(), 0.4, n).unwrap();
            let (u, rep) = parity_kick(&h, &s).unwrap();
            assert!(u.distance(&expm_hermitian(&h, 0.4).unwrap()) < 1e-13);
            assert!(rep.points[0].leakage_norm < 1e-13);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 / v).collect();
        assert!((loglog_slope(&x, &y).unwrap() + 1.0).abs() < 1e-12);
        assert!(loglog_slope(&x, &[1.0, 0.0, 1.0, 1.0]).is_none());
    }

    #[test]
    fn random_hermitian_is_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let (ha, hb) = (random_hermitian(3, &mut a), random_hermitian(3, &mut b));
        assert_eq!(ha, hb);
        let r = ha.eigenvalues_hermitian().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((r - 1.0).abs() < 1e-12);
    }
}
