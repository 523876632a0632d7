//! Named numerical checks grouped into suites.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{classify, normalized_overlap, verify_stabilizer, BasisElement, DfsBasis, ErrorClass};
use crate::decoupling::{
    code_identity_residual, logical_identity_residual, parity_kick_sweep, random_hermitian, simulate_open_system_sweep,
    symmetrize_code_group, symmetrize_logical_group, BathModel,
};
use crate::dfs3::{self, build_basis64, canonical_leo3, collective_tilde, logical_ops3, partition3};
use crate::dfs4::{self, build_basis256, canonical_ops4, dfs4_states, leo4, leo4_modified_z, logical_ops4, partition4};
use crate::error::Result;
use crate::error_decomp::{
    check_terms, decompose_error, dm_error, expected_dm_terms3, expected_product_terms3, expected_product_terms4,
    logical_y_dominance_check, product_error, IdentityCheck, Vec3,
};
use crate::leakage::{frame_blocks, make_canonical_leo, phase_aligned_distance, BlockPartition, Leo, LeoRejection};
use crate::operator::{collective, exchange, total_spin_squared, Axis, Operator};
use crate::tilde::{FactorNorm, TildeSum};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    /// Passes when `value <= threshold`.
    pub fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value <= threshold, value, threshold, detail: String::new() }
    }

    pub fn flag(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, value: if passed { 1.0 } else { 0.0 }, threshold: 1.0, detail: detail.into() }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Dfs3,
    Dfs4,
    Leo,
    Decoupling,
    Errors,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "dfs3" => Suite::Dfs3,
            "dfs4" => Suite::Dfs4,
            "leo" => Suite::Leo,
            "decoupling" => Suite::Decoupling,
            "errors" => Suite::Errors,
            _ => return Err(crate::Error::Parse(s.to_string())),
        })
    }
}

pub fn run_suite(suite: Suite, tol: f64) -> Vec<Check> {
    match suite {
        Suite::All => {
            let mut all = dfs3_suite(tol);
            all.extend(dfs4_suite(tol));
            all.extend(leo_suite(tol));
            all.extend(decoupling_suite(tol));
            all.extend(errors_suite(tol));
            all
        }
        Suite::Dfs3 => dfs3_suite(tol),
        Suite::Dfs4 => dfs4_suite(tol),
        Suite::Leo => leo_suite(tol),
        Suite::Decoupling => decoupling_suite(tol),
        Suite::Errors => errors_suite(tol),
    }
}

fn tilde_op(s: &str, c: f64) -> Operator {
    TildeSum::single(c, s.parse().expect("static")).to_operator(FactorNorm::Literal).expect("non-empty")
}

/// Maximum resynthesis residual over `count` seeded random operators.
pub fn resynthesis_residual(basis: &DfsBasis, count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = basis.dim();
    (0..count)
        .map(|_| {
            let a = random_hermitian(d, &mut rng);
            let b = random_hermitian(d, &mut rng);
            let op = &a + b.scale(crate::C64::new(0.0, 1.0));
            classify(&op, basis).map(|c| c.reconstruction_residual).unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

fn coefficient_vector(sum: &TildeSum, products: &[&str]) -> Vec<f64> {
    products
        .iter()
        .map(|p| {
            let target: crate::tilde::TildeProduct = p.parse().expect("static");
            sum.terms.iter().filter(|(_, q)| *q == target).map(|(c, _)| *c).sum()
        })
        .collect()
}

pub fn dfs3_suite(tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let p = partition3();
    let basis = build_basis64();
    out.push(Check::below("dfs3.udfs_unitary", p.basis_change.unitarity_residual(), 1e-12));
    out.push(Check::flag("dfs3.basis_count", basis.len() == 64, format!("{} elements", basis.len())));
    let (gram, pair) = basis.max_gram_offdiag();
    let detail = pair.map(|(a, b)| format!("worst pair {} / {}", basis.elements[a].name, basis.elements[b].name)).unwrap_or_default();
    out.push(Check::below("dfs3.gram_offdiag", gram, tol).with_detail(detail));
    out.push(Check::below("dfs3.resynthesis_100_random", resynthesis_residual(&basis, 100, 11), tol));

    let (x, y, z) = logical_ops3();
    for (name, op, t) in [("x", &x, "(I+Z)XI"), ("y", &y, "(I+Z)YI"), ("z", &z, "(I+Z)ZI")] {
        let d = p.to_frame(op).max_entry_diff(&tilde_op(t, 0.5));
        out.push(Check::below(&format!("dfs3.logical_{name}_block_form"), d, 1e-12));
    }
    for axis in Axis::ALL {
        let frame = p.to_frame(&collective(3, axis));
        let expect = collective_tilde(axis).to_operator(FactorNorm::Literal).expect("non-empty");
        out.push(Check::below(&format!("dfs3.collective_{axis:?}_tilde_identity").to_lowercase(), frame.max_entry_diff(&expect), tol));
    }

    let products_x = ["(I+Z)IX", "(I-Z)IX", "(I-Z)XX", "(I-Z)YY"];
    let products_y = ["(I+Z)IY", "(I-Z)IY", "(I-Z)XY", "(I-Z)YX"];
    let mut so4_err: f64 = 0.0;
    let mut stab_ok = true;
    for (axis, products) in [(Axis::X, products_x), (Axis::Y, products_y)] {
        let s = coefficient_vector(&collective_tilde(axis), &products);
        let s_norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rows: Vec<Vec<f64>> = (1..=3).map(|k| coefficient_vector(&dfs3::stabilizer_tilde(axis, k), &products)).collect();
        for (a, ra) in rows.iter().enumerate() {
            let ns: f64 = ra.iter().map(|v| v * v).sum();
            so4_err = so4_err.max((ns - 1.0).abs());
            let ds: f64 = ra.iter().zip(&s).map(|(u, v)| u * v).sum::<f64>() / s_norm;
            so4_err = so4_err.max(ds.abs());
            for rb in rows.iter().skip(a + 1) {
                let d: f64 = ra.iter().zip(rb).map(|(u, v)| u * v).sum();
                so4_err = so4_err.max(d.abs());
            }
        }
        for k in 1..=3 {
            let el = stabilizer_element(&basis, axis, k);
            stab_ok &= verify_stabilizer(&p.from_frame(&el.op), &p);
            let collective_el = basis.get(if axis == Axis::X { "S_X" } else { "S_Y" }).expect("present");
            so4_err = so4_err.max(normalized_overlap(&el.op, &collective_el.op).unwrap_or(1.0));
        }
    }
    out.push(Check::below("dfs3.so4_completion_orthonormal", so4_err, tol));
    out.push(Check::flag("dfs3.so4_elements_are_stabilizers", stab_ok, ""));
    out.push(Check::flag("dfs3.logical_x_not_stabilizer", !verify_stabilizer(&x, &p), ""));

    let zp = basis.get("Z_perp").expect("present");
    let sz = basis.get("S_Z").expect("present");
    let zl = basis.get("Z_L").expect("present");
    let ov = normalized_overlap(&zp.op, &sz.op).unwrap_or(1.0).max(normalized_overlap(&zp.op, &zl.op).unwrap_or(1.0));
    out.push(Check::below("dfs3.z_perp_orthogonal_to_sz_and_z", ov, tol));

    let diag_names = ["I", "Z_L", "Z_perp", "S_Z", "ZIZ", "ZII", "(I-Z)ZZ", "(I+Z)ZZ"];
    let diags: Vec<&BasisElement> = diag_names.iter().map(|n| basis.get(n).expect("present")).collect();
    let rank = diagonal_rank(&diags.iter().map(|e| &e.op).collect::<Vec<_>>());
    out.push(Check::flag("dfs3.cartan_span", rank == 8, format!("rank {rank}")));

    let cls = classify(&collective(3, Axis::X), &basis).map(|c| c.classes).unwrap_or_default();
    let allowed: BTreeSet<ErrorClass> = [ErrorClass::Collective, ErrorClass::Stabilizer].into_iter().collect();
    let ok = cls.contains(&ErrorClass::Collective) && cls.is_subset(&allowed);
    out.push(Check::flag("dfs3.classify_sx_collective_or_stabilizer", ok, format!("{cls:?}")));
    out
}

fn stabilizer_element(basis: &DfsBasis, axis: Axis, k: usize) -> &BasisElement {
    let label = if axis == Axis::X { "X" } else { "Y" };
    basis.get(&format!("S_{label}{k}")).expect("present")
}

/// Rank of the diagonals of a set of operators.
pub fn diagonal_rank(ops: &[&Operator]) -> usize {
    let d = ops.first().map(|o| o.dim()).unwrap_or(0);
    let m = nalgebra::DMatrix::from_fn(d, ops.len(), |i, j| ops[j].get(i, i).re);
    m.svd(false, false).singular_values.iter().filter(|s| **s > 1e-9).count()
}

pub fn dfs4_suite(tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let s = dfs4_states();
    let p = partition4();
    out.push(Check::below("dfs4.states_orthonormal", s.udfs.unitarity_residual(), 1e-12));
    let s2 = p.to_frame(&total_spin_squared(4));
    let expect: Vec<f64> = (0..16).map(|k| if k < 2 { 0.0 } else if k < 11 { 2.0 } else { 6.0 }).collect();
    out.push(Check::below("dfs4.spin_squared_diagonal", s2.max_entry_diff(&Operator::diagonal(&expect)), 1e-12));
    let ann = Axis::ALL
        .iter()
        .flat_map(|a| s.code.iter().map(move |v| collective(4, *a).apply(v).norm()))
        .fold(0.0, f64::max);
    out.push(Check::below("dfs4.code_annihilated_by_collective", ann, 1e-12));

    let (x, y, z) = logical_ops4();
    for (name, op, k) in [("x", &x, 0usize), ("y", &y, 1), ("z", &z, 2)] {
        let b = frame_blocks(&p.to_frame(op), 2);
        let pauli = [crate::Pauli::X, crate::Pauli::Y, crate::Pauli::Z][k].matrix().into_matrix();
        let d = (&b.code - pauli).iter().map(|v| v.norm()).fold(0.0, f64::max);
        out.push(Check::below(&format!("dfs4.logical_{name}_code_block"), d, 1e-12));
        out.push(Check::below(&format!("dfs4.logical_{name}_no_leakage"), b.leakage_norm(), 1e-12));
    }
    let zf = p.to_frame(&z);
    let zperp: Vec<f64> = (2..16).map(|k| zf.get(k, k).re).collect();
    let t3_plus = zperp[6..9].iter().all(|v| (v - 1.0).abs() < 1e-12);
    let rest_minus = zperp[..6].iter().chain(&zperp[9..]).all(|v| (v + 1.0).abs() < 1e-12);
    out.push(Check::flag(
        "dfs4.z_complement_eigenvalues",
        t3_plus && rest_minus,
        format!("diag on complement {zperp:?}; T3 = +1, all other complement states = -1"),
    ));
    let half = p.to_frame(&dfs4::spin_squared_half4());
    let want: Vec<f64> = expect.iter().map(|v| v / 2.0).collect();
    out.push(Check::below("dfs4.spin_squared_half_spectrum", half.max_entry_diff(&Operator::diagonal(&want)), 1e-12));

    let mut leak: f64 = 0.0;
    for i in 1..=4 {
        for j in (i + 1)..=4 {
            let e = exchange(4, i, j).expect("valid");
            leak = leak.max(frame_blocks(&p.to_frame(&e), 2).leakage_norm());
        }
    }
    out.push(Check::below("dfs4.exchange_preserves_code", leak, 1e-12));

    let (cx, cy, cz) = canonical_ops4();
    for (name, op, k) in [("x", &cx, 0usize), ("y", &cy, 1), ("z", &cz, 2)] {
        let mut target = Operator::zeros(16);
        let pm = [crate::Pauli::X, crate::Pauli::Y, crate::Pauli::Z][k].matrix();
        target = target + Operator::from_fn(16, |r, c| if r < 2 && c < 2 { pm.get(r, c) } else { crate::C64::new(0.0, 0.0) });
        out.push(Check::below(&format!("dfs4.canonical_{name}_block_form"), p.to_frame(op).max_entry_diff(&target), tol));
    }
    let pc = p.code_projector();
    let sq = (&cx * &cx).distance(&pc).max((&cz * &cz).distance(&pc));
    out.push(Check::below("dfs4.canonical_square_to_projector", sq, tol));

    let basis = build_basis256();
    out.push(Check::flag("dfs4.basis_count", basis.len() == 256, format!("{} elements", basis.len())));
    let (gram, _) = basis.max_gram_offdiag();
    out.push(Check::below("dfs4.gram_offdiag", gram, tol));
    out.push(Check::below("dfs4.resynthesis_20_random", resynthesis_residual(&basis, 20, 12), tol));
    out
}

/// Max `‖{R, L}‖` over leakage elements and `‖[R, E]‖` over the rest.
pub fn basis_grading(leo: &Leo, basis: &DfsBasis) -> (f64, f64) {
    let r = leo.partition.to_frame(&leo.unitary);
    let mut odd: f64 = 0.0;
    let mut even: f64 = 0.0;
    for e in &basis.elements {
        let u = e.orthonormal();
        if e.class == ErrorClass::Leakage {
            odd = odd.max((&r * &u + &u * &r).frobenius_norm());
        } else {
            even = even.max((&r * &u - &u * &r).frobenius_norm());
        }
    }
    (odd, even)
}

pub fn leo_suite(tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let p3 = partition3();
    let r3 = canonical_leo3();
    out.push(Check::below("leo.dfs3_parity_form", p3.to_frame(&r3.unitary).distance(&p3.frame_parity().scale(r3.phase)), tol));
    out.push(Check::below("leo.dfs3_squares_to_identity", r3.parity_residual(), tol));
    let (odd, even) = basis_grading(&r3, &build_basis64());
    out.push(Check::below("leo.dfs3_anticommutes_with_leakage", odd, tol));
    out.push(Check::below("leo.dfs3_commutes_with_rest", even, tol));

    let (_, _, z3) = logical_ops3();
    match make_canonical_leo(&z3, &p3) {
        Ok(l) => out.push(Check::below("leo.dfs3_z_accepted_as_canonical", phase_aligned_distance(&l.unitary, &r3.unitary), tol)),
        Err(e) => out.push(Check::flag("leo.dfs3_z_accepted_as_canonical", false, e.to_string())),
    }
    let (_, _, z4) = logical_ops4();
    let p4 = partition4();
    let rej = make_canonical_leo(&z4, &p4);
    out.push(Check::flag(
        "leo.dfs4_z_rejected_on_complement",
        matches!(rej, Err(LeoRejection::ActsOnComplement { .. })),
        match &rej {
            Ok(_) => "accepted".to_string(),
            Err(e) => e.to_string(),
        },
    ));
    let l4 = leo4();
    let (odd, even) = basis_grading(&l4, &build_basis256());
    out.push(Check::below("leo.dfs4_anticommutes_with_leakage", odd, tol));
    out.push(Check::below("leo.dfs4_commutes_with_rest", even, tol));
    let lz = leo4_modified_z();
    out.push(Check::below("leo.dfs4_s2_vs_modified_z", phase_aligned_distance(&l4.unitary, &lz.unitary), tol));
    out.push(Check::below("leo.dfs4_squares_to_identity", l4.parity_residual().max(lz.parity_residual()), tol));
    let (cx, _, cz) = canonical_ops4();
    for (name, op) in [("x", &cx), ("z", &cz)] {
        let ok = make_canonical_leo(op, &p4).map(|l| phase_aligned_distance(&l.unitary, &l4.unitary));
        match ok {
            Ok(d) => out.push(Check::below(&format!("leo.dfs4_canonical_{name}_gives_leo"), d, tol)),
            Err(e) => out.push(Check::flag(&format!("leo.dfs4_canonical_{name}_gives_leo"), false, e.to_string())),
        }
    }
    out
}

/// A drift with even and leakage parts in the three-qubit DFS frame.
pub fn demo_drift3() -> (Operator, Operator) {
    let even = tilde_op("(I+Z)XI", 0.5) + tilde_op("(I-Z)ZX", 0.5) + tilde_op("ZIZ", 0.3);
    let leak = tilde_op("XXI", 0.25) + tilde_op("YIZ", 0.25);
    let p = partition3();
    (p.from_frame(&even), p.from_frame(&leak))
}

pub const SWEEP_N: [usize; 8] = [1, 2, 4, 8, 16, 32, 64, 128];

pub fn decoupling_suite(tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let p = partition3();
    let leo = canonical_leo3();
    let (even, leak) = demo_drift3();
    let h = &even + &leak;
    match parity_kick_sweep(&h, &leo, 0.2, &SWEEP_N) {
        Ok(rep) => {
            let slope = rep.slope.unwrap_or(f64::NAN);
            out.push(Check::below("decoupling.parity_kick_slope", (slope + 1.0).abs(), 0.15).with_detail(format!("slope {slope:.4}")));
            out.push(Check::flag("decoupling.parity_kick_monotone", rep.monotone_non_increasing, ""));
            let last = rep.points.last().map(|q| q.limit_error).unwrap_or(f64::INFINITY);
            out.push(Check::below("decoupling.parity_kick_limit_n128", last, 1e-3));
        }
        Err(e) => out.push(Check::flag("decoupling.parity_kick", false, e.to_string())),
    }

    let (x, y, z) = logical_ops3();
    let gauge: Vec<Operator> = Axis::ALL.iter().map(|a| collective(3, *a)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_logical: f64 = 0.0;
    let mut worst_full: f64 = 0.0;
    for _ in 0..50 {
        let h = random_hermitian(8, &mut rng);
        match symmetrize_logical_group(&h, (&x, &y, &z), &p) {
            Ok(s) => worst_logical = worst_logical.max(logical_identity_residual(&s, &p)),
            Err(_) => worst_logical = f64::INFINITY,
        }
        match symmetrize_code_group(&h, (&x, &y, &z), (&gauge[0], &gauge[1], &gauge[2]), &p) {
            Ok(s) => worst_full = worst_full.max(code_identity_residual(&s, &p)),
            Err(_) => worst_full = f64::INFINITY,
        }
    }
    out.push(Check::below("decoupling.logical_twirl_code_block", worst_logical, tol));
    out.push(Check::below("decoupling.code_group_twirl_identity", worst_full, tol));

    let n_list = [1, 8];
    let bath = BathModel::random(2, 7, vec![tilde_frame(&p, "XXI")]);
    match bath.and_then(|b| simulate_open_system_sweep(&b, &Operator::zeros(8), &leo, 0.5, &n_list, &p)) {
        Ok(rep) => {
            let ratio = rep.points[0].limit_error / rep.points[1].limit_error;
            out.push(Check::flag("decoupling.open_leakage_ratio_n1_n8", (40.0..100.0).contains(&ratio), format!("ratio {ratio:.2}")));
            out.push(Check::below("decoupling.open_probability_conserved", rep.max_norm_residual, tol));
        }
        Err(e) => out.push(Check::flag("decoupling.open_leakage", false, e.to_string())),
    }
    out.push(dfs_guarantee_check(&p, &leo, 1e-8));
    out
}

fn tilde_frame(p: &BlockPartition, s: &str) -> Operator {
    p.from_frame(&tilde_op(s, 1.0))
}

/// Collective couplings, no pulses: code fidelity stays at one.
pub fn dfs_guarantee_check(p: &BlockPartition, leo: &Leo, tol: f64) -> Check {
    let sys: Vec<Operator> = Axis::ALL.iter().map(|a| collective(3, *a)).collect();
    let h_s = collective(3, Axis::Z) * 0.4;
    let res = BathModel::random(2, 21, sys).and_then(|b| simulate_open_system_sweep(&b, &h_s, leo, 1.0, &[1], p));
    match res {
        Ok(rep) => {
            let u = rep.unpulsed.expect("always present");
            let dev = (1.0 - u.fidelity).abs().max(u.limit_error);
            Check::below("decoupling.dfs_guarantee_no_pulses", dev, tol).with_detail(format!("fidelity {}", u.fidelity))
        }
        Err(e) => Check::flag("decoupling.dfs_guarantee_no_pulses", false, e.to_string()),
    }
}

pub const BETA: Vec3 = [0.3, -0.7, 0.45];
pub const GAMMA1: Vec3 = [0.2, -0.5, 0.9];
pub const GAMMA2: Vec3 = [0.6, 0.4, -0.3];

fn set(classes: &[ErrorClass]) -> BTreeSet<ErrorClass> {
    classes.iter().copied().collect()
}

/// Reference coefficient identities for both codes.
pub fn error_identity_checks(beta: Vec3, g1: Vec3, g2: Vec3, tol: f64) -> Result<Vec<IdentityCheck>> {
    let b3 = build_basis64();
    let b4 = build_basis256();
    let leak_perp = set(&[ErrorClass::Leakage, ErrorClass::OrthoLogical, ErrorClass::OrthoAnnihilator]);
    let leak = set(&[ErrorClass::Leakage]);
    let mut out = Vec::new();

    let dm = decompose_error(&dm_error(beta, (1, 2), 3)?, &b3, &leak_perp)?;
    out.push(check_terms("dfs3.dm_pair12_code_terms", &dm.surviving, &expected_dm_terms3(beta), tol));

    let pr = decompose_error(&product_error(g1, g2, (1, 2), 3)?, &b3, &leak)?;
    out.push(check_terms("dfs3.product_pair12_ten_terms", &pr.surviving, &expected_product_terms3(g1, g2), tol));

    for pair in [(1, 2), (2, 3)] {
        let r = decompose_error(&product_error(g1, g2, pair, 4)?, &b4, &leak_perp)?;
        let name = format!("dfs4.product_pair{}{}_logical_terms", pair.0, pair.1);
        out.push(check_terms(&name, &r.surviving_after_stabilizer, &expected_product_terms4(g1, g2, pair), tol));
        let d = decompose_error(&dm_error(beta, pair, 4)?, &b4, &leak_perp)?;
        let name = format!("dfs4.dm_pair{}{}_no_logical_terms", pair.0, pair.1);
        out.push(check_terms(&name, &d.surviving_after_stabilizer, &[], tol));
    }
    Ok(out)
}

pub fn errors_suite(tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    match error_identity_checks(BETA, GAMMA1, GAMMA2, tol) {
        Ok(checks) => {
            for c in checks {
                let detail = if c.unexpected.is_empty() { String::new() } else { format!("unexpected terms {:?}", c.unexpected) };
                let mut ch = Check::below(&format!("errors.{}", c.name), c.max_error, tol).with_detail(detail);
                ch.passed = c.passed;
                out.push(ch);
            }
        }
        Err(e) => out.push(Check::flag("errors.identities", false, e.to_string())),
    }
    let b3 = build_basis64();
    let drop = set(&[ErrorClass::Leakage, ErrorClass::OrthoLogical, ErrorClass::OrthoAnnihilator]);
    let dm = dm_error(BETA, (1, 2), 3).and_then(|op| decompose_error(&op, &b3, &drop));
    let pr = product_error(GAMMA1, GAMMA2, (1, 2), 3).and_then(|op| decompose_error(&op, &b3, &drop));
    match (dm, pr) {
        (Ok(dm), Ok(pr)) => {
            out.push(Check::flag("errors.dm_logical_y_only", logical_y_dominance_check(&dm, false), ""));
            out.push(Check::flag("errors.product_y_only_without_logical_z", logical_y_dominance_check(&pr, true), ""));
            out.push(Check::flag("errors.product_not_y_only_with_logical_z", !logical_y_dominance_check(&pr, false), ""));
            out.push(Check::below("errors.parseval", dm.parseval_residual.max(pr.parseval_residual), tol));
        }
        (Err(e), _) | (_, Err(e)) => out.push(Check::flag("errors.y_dominance", false, e.to_string())),
    }
    let b4 = build_basis256();
    let mut worst: f64 = 0.0;
    for pair in [(1, 2), (1, 3), (2, 3), (3, 4)] {
        if let Ok(r) = crate::error_decomp::scalar_error(1.0, pair, 4).and_then(|op| decompose_error(&op, &b4, &BTreeSet::new())) {
            let code_weight: f64 = r
                .terms
                .iter()
                .filter(|t| matches!(t.class, ErrorClass::Leakage))
                .map(|t| crate::C64::from(t.orthonormal_coefficient).norm_sqr())
                .sum();
            worst = worst.max(code_weight);
        } else {
            worst = f64::INFINITY;
        }
    }
    out.push(Check::below("errors.dfs4_scalar_coupling_no_leakage", worst, tol));
    out
}
