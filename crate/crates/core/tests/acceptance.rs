//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dfslab::basis::{verify_stabilizer, ErrorClass};
use dfslab::decoupling::{
    code_identity_residual, even_part, logical_identity_residual, parity_kick_sweep, random_hermitian,
    simulate_open_system_sweep, symmetrize_code_group, symmetrize_logical_group, BathModel,
};
use dfslab::dfs3::{build_basis64, canonical_leo3, logical_ops3, partition3, udfs3};
use dfslab::dfs4::{build_basis256, canonical_ops4, leo4, leo4_modified_z, logical_ops4, partition4};
use dfslab::error_decomp::{dm_error, product_error, Vec3};
use dfslab::leakage::{make_canonical_leo, phase_aligned_distance, Leo, LeoRejection};
use dfslab::operator::{collective, commutator, expm_hermitian, hs_inner, Axis, Operator, Pauli};
use dfslab::tilde::{FactorNorm, TildeProduct};
use dfslab::{DfsBasis, C64};

struct Outcome {
    passed: bool,
    detail: String,
}

fn report(id: usize, name: &str, o: &Outcome) -> bool {
    println!("criterion {id:>2} [{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    o.passed
}

fn tilde(s: &str, norm: FactorNorm) -> Operator {
    s.parse::<TildeProduct>().expect("valid tilde string").to_operator(norm)
}

fn frame_of(basis_change: &Operator, op: &Operator) -> Operator {
    op.conjugate_by(basis_change)
}

/// Entry `(r, c)` of `σ ⊗ I_g` on the code block, zero elsewhere.
fn code_pauli(dim: usize, gauge: usize, p: Pauli) -> Operator {
    let s = p.matrix();
    let code = 2 * gauge;
    Operator::from_fn(dim, |r, c| {
        if r < code && c < code && r % gauge == c % gauge {
            s.get(r / gauge, c / gauge)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn c1_basis_integrity() -> Outcome {
    let start = Instant::now();
    let b = build_basis64();
    let mut worst: f64 = 0.0;
    for (i, a) in b.elements.iter().enumerate() {
        for e in &b.elements[i + 1..] {
            worst = worst.max(hs_inner(&a.op, &e.op).unwrap().norm());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut resyn: f64 = 0.0;
    for _ in 0..100 {
        let m = Operator::from_fn(8, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let mut acc = Operator::zeros(8);
        for e in &b.elements {
            let c = hs_inner(&e.op, &m).unwrap() / hs_inner(&e.op, &e.op).unwrap();
            acc = acc + e.op.scale(c);
        }
        resyn = resyn.max(acc.distance(&m));
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: b.len() == 64 && worst < 1e-10 && resyn < 1e-10 && secs < 1.0,
        detail: format!("{} elements, max gram off-diagonal {worst:.2e}, resynthesis {resyn:.2e}, {secs:.3} s", b.len()),
    }
}

fn c2_logical_gates() -> Outcome {
    let u = udfs3();
    let (x, _, z) = logical_ops3();
    let ex = frame_of(&u, &x).max_entry_diff(&code_pauli(8, 2, Pauli::X));
    let ez = frame_of(&u, &z).max_entry_diff(&code_pauli(8, 2, Pauli::Z));
    let p4 = partition4();
    let (x4, _, z4) = logical_ops4();
    let ex4 = p4.to_frame(&x4).max_entry_diff(&code_pauli(16, 1, Pauli::X));
    // only the code block is fixed for the four-qubit operators
    let code_diff = |op: &Operator, s: Pauli| {
        let f = p4.to_frame(op);
        let m = s.matrix();
        (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| (f.get(r, c) - m.get(r, c)).norm()).fold(0.0, f64::max)
    };
    let ex4c = code_diff(&x4, Pauli::X);
    let ez4c = code_diff(&z4, Pauli::Z);
    let worst = ex.max(ez).max(ex4c).max(ez4c);
    Outcome {
        passed: worst < 1e-12,
        detail: format!("3q X {ex:.1e} Z {ez:.1e}; 4q code X {ex4c:.1e} Z {ez4c:.1e} (4q X full frame {ex4:.1e})"),
    }
}

fn c3_collective() -> Outcome {
    let u = udfs3();
    let l = FactorNorm::Literal;
    let s3 = 3f64.sqrt();
    let sx = tilde("(I+Z)IX", l) * 0.5 + tilde("(I-Z)IX", l) * (0.5 * s3) + tilde("(I-Z)XX", l) * 0.5 + tilde("(I-Z)YY", l) * 0.5;
    let sy = tilde("(I+Z)IY", l) * 0.5 + tilde("(I-Z)IY", l) * (0.5 * s3) - tilde("(I-Z)XY", l) * 0.5 + tilde("(I-Z)YX", l) * 0.5;
    let sz = tilde("IIZ", l) + tilde("(I-Z)ZI", l);
    let dx = frame_of(&u, &collective(3, Axis::X)).distance(&sx);
    let dy = frame_of(&u, &collective(3, Axis::Y)).distance(&sy);
    let dz = frame_of(&u, &collective(3, Axis::Z)).distance(&sz);
    Outcome { passed: dx.max(dy).max(dz) < 1e-10, detail: format!("x {dx:.1e}, y {dy:.1e}, z {dz:.1e}") }
}

fn c4_so4() -> Outcome {
    let b = build_basis64();
    let p = partition3();
    let names = ["S_X1", "S_X2", "S_X3", "S_Y1", "S_Y2", "S_Y3"];
    let unit = |op: &Operator| op.scale_real(1.0 / op.frobenius_norm());
    let ops: Vec<Operator> = names.iter().map(|n| b.get(n).unwrap().op.clone()).collect();
    // norms measured relative to a single (I-Z)PP product
    let ref_norm = tilde("(I-Z)IX", FactorNorm::Literal).frobenius_norm();
    let norm_dev = ops.iter().map(|o| (o.frobenius_norm() / ref_norm - 1.0).abs()).fold(0.0, f64::max);
    let mut overlap: f64 = 0.0;
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            overlap = overlap.max(hs_inner(&unit(&ops[i]), &unit(&ops[j])).unwrap().norm());
        }
    }
    let sx = unit(&frame_of(&udfs3(), &collective(3, Axis::X)));
    let sy = unit(&frame_of(&udfs3(), &collective(3, Axis::Y)));
    let vs_coll = ops
        .iter()
        .map(|o| hs_inner(&unit(o), &sx).unwrap().norm().max(hs_inner(&unit(o), &sy).unwrap().norm()))
        .fold(0.0, f64::max);
    let stab = ops.iter().all(|o| verify_stabilizer(&p.from_frame(o), &p));
    Outcome {
        passed: norm_dev < 1e-12 && overlap < 1e-12 && vs_coll < 1e-12 && stab,
        detail: format!("norm dev {norm_dev:.1e}, mutual overlap {overlap:.1e}, overlap with S_X/S_Y {vs_coll:.1e}, stabilizers {stab}"),
    }
}

fn grading_over_basis(leo: &Leo, basis: &DfsBasis) -> (f64, f64) {
    let r = basis.partition.to_frame(&leo.unitary);
    let mut anti: f64 = 0.0;
    let mut comm: f64 = 0.0;
    for e in &basis.elements {
        if e.class == ErrorClass::Leakage {
            anti = anti.max((&r * &e.op + &e.op * &r).frobenius_norm());
        } else {
            comm = comm.max(commutator(&r, &e.op).unwrap().frobenius_norm());
        }
    }
    (anti, comm)
}

fn c5_leo_grading() -> Outcome {
    let (a3, c3) = grading_over_basis(&canonical_leo3(), &build_basis64());
    let (a4, c4) = grading_over_basis(&leo4(), &build_basis256());
    let agree = phase_aligned_distance(&leo4().unitary, &leo4_modified_z().unitary);
    let worst = a3.max(c3).max(a4).max(c4).max(agree);
    Outcome {
        passed: worst < 1e-10,
        detail: format!("3q anti {a3:.1e} comm {c3:.1e}; 4q anti {a4:.1e} comm {c4:.1e}; S^2 vs Z' {agree:.1e}"),
    }
}

fn c6_canonicity() -> Outcome {
    let (_, _, z3) = logical_ops3();
    let accepted = make_canonical_leo(&z3, &partition3()).is_ok();
    let (_, _, z4) = logical_ops4();
    let rejection = make_canonical_leo(&z4, &partition4());
    let rejected = matches!(rejection, Err(LeoRejection::ActsOnComplement { .. }));
    let p4 = partition4();
    let (x, y, z) = canonical_ops4();
    let worst = [(x, Pauli::X), (y, Pauli::Y), (z, Pauli::Z)]
        .iter()
        .map(|(op, s)| p4.to_frame(op).distance(&code_pauli(16, 1, *s)))
        .fold(0.0, f64::max);
    Outcome {
        passed: accepted && rejected && worst < 1e-10,
        detail: format!(
            "3q Z accepted {accepted}; 4q Z rejection: {}; canonical ops vs diag(sigma, 0) {worst:.1e}",
            match &rejection {
                Err(e) => e.to_string(),
                Ok(_) => "accepted".into(),
            }
        ),
    }
}

fn c7_parity_kick() -> Outcome {
    let start = Instant::now();
    let p = partition3();
    let leo = canonical_leo3();
    let l = FactorNorm::Literal;
    let n_list = [1, 2, 4, 8, 16, 32, 64, 128];
    // a Hamiltonian with only leakage blocks is cancelled exactly by every cycle
    let leak = p.from_frame(&(tilde("XXI", l) * 0.25 + tilde("YIZ", l) * 0.25));
    let pure = parity_kick_sweep(&leak, &leo, 0.2, &n_list).unwrap();
    let pure_max = pure.points.iter().map(|q| q.leakage_norm.max(q.limit_error)).fold(0.0, f64::max);
    // with a non-commuting even drift the leakage decays as 1/n
    let even = p.from_frame(&(tilde("(I+Z)XI", l) * 0.5 + tilde("(I-Z)ZX", l) * 0.5 + tilde("ZIZ", l) * 0.3));
    let h = &even + &leak;
    let rep = parity_kick_sweep(&h, &leo, 0.2, &n_list).unwrap();
    let slope = rep.slope.unwrap_or(f64::NAN);
    let ideal = expm_hermitian(&even_part(&h, &leo), 0.2).unwrap();
    let ideal_direct = expm_hermitian(&even, 0.2).unwrap();
    let limit = rep.points.last().unwrap().limit_error;
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: pure_max < 1e-12
            && (slope + 1.0).abs() <= 0.15
            && rep.monotone_non_increasing
            && limit < 1e-3
            && ideal.distance(&ideal_direct) < 1e-12
            && secs < 5.0,
        detail: format!(
            "pure leakage max residual {pure_max:.1e}; with drift slope {slope:.4}, monotone {}, limit n=128 {limit:.2e}, {secs:.3} s",
            rep.monotone_non_increasing
        ),
    }
}

fn c8_symmetrization() -> Outcome {
    let p = partition3();
    let (x, y, z) = logical_ops3();
    let gauge: Vec<Operator> = [Axis::X, Axis::Y, Axis::Z].iter().map(|a| collective(3, *a)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut logical: f64 = 0.0;
    let mut full: f64 = 0.0;
    for _ in 0..50 {
        let h = random_hermitian(8, &mut rng);
        let s = symmetrize_logical_group(&h, (&x, &y, &z), &p).unwrap();
        // code block must be I_2 ⊗ M
        let f = p.to_frame(&s);
        let code = f.matrix().view((0, 0), (4, 4)).into_owned();
        let m: DMatrix<C64> = (code.view((0, 0), (2, 2)) + code.view((2, 2), (2, 2))) * C64::new(0.5, 0.0);
        let mut expected = DMatrix::zeros(4, 4);
        expected.view_mut((0, 0), (2, 2)).copy_from(&m);
        expected.view_mut((2, 2), (2, 2)).copy_from(&m);
        let r = (&code - expected).norm();
        logical = logical.max(r.max(logical_identity_residual(&s, &p)));
        let g = symmetrize_code_group(&h, (&x, &y, &z), (&gauge[0], &gauge[1], &gauge[2]), &p).unwrap();
        full = full.max(code_identity_residual(&g, &p));
    }
    Outcome {
        passed: logical < 1e-10 && full < 1e-10,
        detail: format!("logical factor identity {logical:.1e}; with gauge twirl, code block prop. to I_4 {full:.1e}"),
    }
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

/// Coefficient of `op` (physical) on a single tilde product in the frame.
fn coeff(u: &Operator, op: &Operator, product: &str, norm: FactorNorm) -> C64 {
    let t = tilde(product, norm);
    let f = frame_of(u, op);
    hs_inner(&t, &f).unwrap() / hs_inner(&t, &t).unwrap()
}

fn c9_decompositions() -> Outcome {
    let start = Instant::now();
    let beta: Vec3 = [0.37, -0.81, 0.52];
    let g1: Vec3 = [0.3, -1.1, 0.7];
    let g2: Vec3 = [-0.4, 0.6, 0.9];
    let l = FactorNorm::Literal;
    let u3 = udfs3();
    let mut worst: f64 = 0.0;

    // (a) DM error on qubits 1, 2
    let dm = dm_error(beta, (1, 2), 3).unwrap();
    let s3 = 1.0 / 3f64.sqrt();
    for (k, t) in ["(I+Z)YX", "(I+Z)YY", "(I+Z)YZ"].iter().enumerate() {
        worst = worst.max((coeff(&u3, &dm, t, l) - s3 * beta[k]).norm());
    }
    let code_rest = ["(I+Z)XX", "(I+Z)XY", "(I+Z)XZ", "(I+Z)ZX", "(I+Z)ZY", "(I+Z)ZZ", "(I+Z)XI", "(I+Z)YI", "(I+Z)ZI"]
        .iter()
        .map(|t| coeff(&u3, &dm, t, l).norm())
        .fold(0.0, f64::max);
    let a_err = worst.max(code_rest);

    // (b) product error on qubits 1, 2
    let pr = product_error(g1, g2, (1, 2), 3).unwrap();
    let [x1, y1, z1] = g1;
    let [x2, y2, z2] = g2;
    let d = 2.0 * 3f64.sqrt();
    let gg = dot(g1, g2);
    let ten = [
        ("(I-Z)XI", (x1 * x2 - y1 * y2) / d),
        ("(I-Z)YI", (y1 * x2 + x1 * y2) / d),
        ("(I+Z)YX", (y1 * z2 - z1 * y2) / d),
        ("(I+Z)YY", (z1 * x2 - x1 * z2) / d),
        ("(I+Z)YZ", (x1 * y2 - y1 * x2) / d),
        ("(I+Z)ZI", -gg / 3.0),
        ("(I-Z)ZX", (z1 * x2 + x1 * z2) / d),
        ("(I-Z)ZY", (z1 * y2 + y1 * z2) / d),
        ("(I-Z)ZZ", (2.0 * z1 * z2 - x1 * x2 - y1 * y2) / 6.0),
        ("ZII", -gg / 3.0),
    ];
    let b_err = ten.iter().map(|(t, e)| (coeff(&u3, &pr, t, l) - e).norm()).fold(0.0, f64::max);
    // the ten terms and the leakage part exhaust the operator
    let frame = frame_of(&u3, &pr);
    let mut rebuilt = Operator::zeros(8);
    for (t, e) in &ten {
        rebuilt = rebuilt + tilde(t, l) * *e;
    }
    let blocks = dfslab::leakage::frame_blocks(&(&frame - &rebuilt), 4);
    let b_rest = blocks.code.norm().max(blocks.complement.norm());

    // (c) four-qubit product errors, logical content
    let pn = FactorNorm::PauliNormalized;
    let u4 = partition4().basis_change.clone();
    let r2 = 2f64.sqrt();
    let p12 = product_error(g1, g2, (1, 2), 4).unwrap();
    let p23 = product_error(g1, g2, (2, 3), 4).unwrap();
    let c_checks = [
        (coeff(&u4, &p12, "(I+Z)(I+Z)(I+Z)Z", pn), -gg / (3.0 * r2)),
        (coeff(&u4, &p12, "(I+Z)(I+Z)(I+Z)X", pn), 0.0),
        (coeff(&u4, &p12, "(I+Z)(I+Z)(I+Z)Y", pn), 0.0),
        (coeff(&u4, &p23, "(I+Z)(I+Z)(I+Z)Z", pn), gg / (6.0 * r2)),
        (coeff(&u4, &p23, "(I+Z)(I+Z)(I+Z)X", pn), gg / (2.0 * 6f64.sqrt())),
        (coeff(&u4, &p23, "(I+Z)(I+Z)(I+Z)Y", pn), 0.0),
    ];
    let c_err = c_checks.iter().map(|(f, e)| (f - e).norm()).fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    let worst = a_err.max(b_err).max(b_rest).max(c_err);
    Outcome {
        passed: worst < 1e-10 && secs < 2.0,
        detail: format!("(a) {a_err:.1e} (b) {b_err:.1e}, remainder {b_rest:.1e} (c) {c_err:.1e}; {secs:.3} s"),
    }
}

fn c10_dfs_guarantee() -> Outcome {
    let p = partition3();
    let leo = canonical_leo3();
    let sys: Vec<Operator> = [Axis::X, Axis::Y, Axis::Z].iter().map(|a| collective(3, *a)).collect();
    let mut worst: f64 = 0.0;
    for seed in [1u64, 2, 3] {
        let bath = BathModel::random(3, seed, sys.clone()).unwrap();
        let h_s = collective(3, Axis::X) * 0.3 + collective(3, Axis::Z) * 0.7;
        let rep = simulate_open_system_sweep(&bath, &h_s, &leo, 2.0, &[1], &p).unwrap();
        let u = rep.unpulsed.unwrap();
        worst = worst.max((1.0 - u.fidelity).abs()).max(u.limit_error);
    }
    Outcome { passed: worst < 1e-8, detail: format!("max |1 - F| and leaked population over 3 baths {worst:.1e}") }
}

fn main() -> std::process::ExitCode {
    let results = [
        report(1, "3-qubit basis integrity", &c1_basis_integrity()),
        report(2, "logical gate identities", &c2_logical_gates()),
        report(3, "collective operator identities", &c3_collective()),
        report(4, "SO(4) stabilizer completion", &c4_so4()),
        report(5, "LEO grading", &c5_leo_grading()),
        report(6, "canonicity gate", &c6_canonicity()),
        report(7, "parity-kick convergence", &c7_parity_kick()),
        report(8, "logical-group symmetrization", &c8_symmetrization()),
        report(9, "error decompositions", &c9_decompositions()),
        report(10, "DFS guarantee", &c10_dfs_guarantee()),
    ];
    let failed: BTreeSet<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
        std::process::ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
