//! Four-qubit decoherence-free subspace: two singlets form the code, the
//! complement holds three triplets and the quintuplet.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::basis::{BasisElement, DfsBasis, ErrorClass};
use crate::leakage::{make_generalized_leo, BlockPartition, Leo};
use crate::operator::{basis_ket, collective, commutator, exchange, heisenberg, Axis, Operator, ONE, ZERO};
use crate::tilde::{FactorNorm, TildeProduct, TildeSum};

const N: usize = 4;
const DIM: usize = 16;

#[derive(Clone, Debug)]
pub struct Dfs4States {
    /// `S⁰, S¹`.
    pub code: [DVector<C64>; 2],
    /// `T¹, T², T³`, each with `μ = 1, 0, −1`.
    pub triplets: [[DVector<C64>; 3]; 3],
    /// `μ = 2 .. −2`.
    pub quintuplet: [DVector<C64>; 5],
    pub udfs: Operator,
}

impl Dfs4States {
    /// All sixteen states in DFS order.
    pub fn ordered(&self) -> Vec<(String, &DVector<C64>)> {
        let mut out = vec![("S0".to_string(), &self.code[0]), ("S1".to_string(), &self.code[1])];
        for (k, t) in self.triplets.iter().enumerate() {
            for (m, v) in [1, 0, -1].iter().zip(t) {
                out.push((format!("T{}[{m}]", k + 1), v));
            }
        }
        for (m, v) in [2, 1, 0, -1, -2].iter().zip(&self.quintuplet) {
            out.push((format!("Q[{m}]"), v));
        }
        out
    }
}

fn state(terms: &[(f64, &str)]) -> DVector<C64> {
    terms
        .iter()
        .fold(DVector::zeros(DIM), |acc, (c, bits)| acc + basis_ket(bits) * C64::new(*c, 0.0))
}

pub fn dfs4_states() -> Dfs4States {
    let h = 0.5;
    let r2 = 1.0 / 2f64.sqrt();
    let c12 = 1.0 / 12f64.sqrt();
    let c6 = 1.0 / 6f64.sqrt();
    let code = [
        state(&[(h, "0101"), (h, "1010"), (-h, "0110"), (-h, "1001")]),
        state(&[
            (2.0 * c12, "0011"),
            (2.0 * c12, "1100"),
            (-c12, "0110"),
            (-c12, "1001"),
            (-c12, "0101"),
            (-c12, "1010"),
        ]),
    ];
    let triplets = [
        [
            state(&[(h, "0100"), (h, "1000"), (-h, "0001"), (-h, "0010")]),
            state(&[(r2, "1100"), (-r2, "0011")]),
            state(&[(h, "1110"), (h, "1101"), (-h, "1011"), (-h, "0111")]),
        ],
        [
            state(&[(r2, "0001"), (-r2, "0010")]),
            state(&[(h, "1001"), (h, "0101"), (-h, "1010"), (-h, "0110")]),
            state(&[(r2, "1101"), (-r2, "1110")]),
        ],
        [
            state(&[(r2, "0100"), (-r2, "1000")]),
            state(&[(h, "0110"), (h, "0101"), (-h, "1010"), (-h, "1001")]),
            state(&[(r2, "0111"), (-r2, "1011")]),
        ],
    ];
    let quintuplet = [
        basis_ket("0000"),
        state(&[(h, "1000"), (h, "0100"), (h, "0010"), (h, "0001")]),
        state(&[(c6, "1100"), (c6, "1010"), (c6, "1001"), (c6, "0110"), (c6, "0101"), (c6, "0011")]),
        state(&[(h, "0111"), (h, "1011"), (h, "1101"), (h, "1110")]),
        basis_ket("1111"),
    ];
    let mut rows: Vec<&DVector<C64>> = code.iter().collect();
    rows.extend(triplets.iter().flatten());
    rows.extend(quintuplet.iter());
    let udfs = Operator::from_fn(DIM, |i, j| rows[i][j].conj()).with_label("U_dfs4");
    Dfs4States { code, triplets, quintuplet, udfs }
}

pub fn udfs4() -> Operator {
    dfs4_states().udfs
}

pub fn partition4() -> BlockPartition {
    BlockPartition::new(udfs4(), 2, 1).expect("U_dfs4 is unitary")
}

/// `(X̄, Ȳ, Z̄)` with `Z̄ = −E₁₂`; these act on the complement too.
pub fn logical_ops4() -> (Operator, Operator, Operator) {
    let e = |i, j| exchange(N, i, j).expect("valid pair");
    let x = (e(2, 3) - e(1, 3)) * (1.0 / 3f64.sqrt());
    let z = -e(1, 2);
    let y = commutator(&z, &x).expect("same dim").scale(C64::new(0.0, -0.5));
    (x.with_label("X_L"), y.with_label("Y_L"), z.with_label("Z_L"))
}

/// `S²/2 = (12 + 2 Σ_{i<j} σ⃗_i·σ⃗_j) / 8`.
pub fn spin_squared_half4() -> Operator {
    let mut acc = Operator::identity(DIM) * 12.0;
    for i in 1..=N {
        for j in (i + 1)..=N {
            acc = acc + heisenberg(N, i, j).expect("valid pair") * 2.0;
        }
    }
    (acc * 0.125).with_label("S2/2")
}

/// `Z̄′ = Z̄ + S²/2`.
pub fn modified_z4() -> Operator {
    (logical_ops4().2 + spin_squared_half4()).with_label("Z_L'")
}

/// `exp(−iπ S²/2)`.
pub fn leo4() -> Leo {
    make_generalized_leo(&spin_squared_half4(), &partition4()).expect("S2/2 has integer spectra")
}

/// `exp(−iπ Z̄′)`.
pub fn leo4_modified_z() -> Leo {
    make_generalized_leo(&modified_z4(), &partition4()).expect("Z_L' has integer spectra")
}

/// `I + σ⃗_i·σ⃗_j`, the exchange normalization under which the four-body
/// polynomials below vanish on the complement.
fn pair_term(i: usize, j: usize) -> Operator {
    exchange(N, i, j).expect("valid pair") * 2.0
}

/// Unnormalized four-body polynomials `(σ̄_x, σ̄_z)` before scaling.
pub fn canonical_polynomials4() -> (Operator, Operator) {
    let two = Operator::identity(DIM) * 2.0;
    let f = |i, j| &two - pair_term(i, j);
    let sx = f(1, 3) * f(2, 4) - f(2, 3) * f(1, 4);
    let sz = f(3, 4) * f(1, 2) * 2.0 - f(1, 3) * f(2, 4) - f(2, 3) * f(1, 4);
    (sx, sz)
}

/// Code-block scale of the raw polynomials.
pub const CANONICAL_X_SCALE: f64 = 13.856406460551018; // 8√3
pub const CANONICAL_Z_SCALE: f64 = 24.0;

/// Canonical `(σ̄_x, σ̄_y, σ̄_z)`: Pauli on the code, zero on the complement.
pub fn canonical_ops4() -> (Operator, Operator, Operator) {
    let (sx, sz) = canonical_polynomials4();
    let x = sx * (1.0 / CANONICAL_X_SCALE);
    let z = sz * (1.0 / CANONICAL_Z_SCALE);
    let y = commutator(&z, &x).expect("same dim").scale(C64::new(0.0, -0.5));
    (x.with_label("X_c"), y.with_label("Y_c"), z.with_label("Z_c"))
}

fn frame_unit(i: usize, j: usize, imag: bool) -> Operator {
    let (a, b) = if imag { (C64::new(0.0, -1.0), C64::new(0.0, 1.0)) } else { (ONE, ONE) };
    Operator::from_fn(DIM, |r, s| {
        if r == i && s == j {
            a
        } else if r == j && s == i {
            b
        } else {
            ZERO
        }
    })
}

/// Traceless Hermitian matrices spanning the complement block (generalized
/// Gell-Mann), embedded in the DFS frame.
fn complement_gell_mann(code_dim: usize) -> Vec<Operator> {
    let p = DIM - code_dim;
    let mut out = Vec::new();
    for j in 0..p {
        for k in (j + 1)..p {
            out.push(frame_unit(code_dim + j, code_dim + k, false));
            out.push(frame_unit(code_dim + j, code_dim + k, true));
        }
    }
    for l in 1..p {
        let mut d = vec![0.0; DIM];
        d[code_dim..code_dim + l].iter_mut().for_each(|v| *v = 1.0);
        d[code_dim + l] = -(l as f64);
        out.push(Operator::diagonal(&d));
    }
    out
}

/// The 256-element basis.
///
/// Identity; the three logical Paulis `⅛(I+Z)³O`; the code-balance diagonal
/// `Π_C − Π⊥/7`; 56 leakage units; the collective generators restricted to
/// the complement followed by a Gram–Schmidt completion of that block.
pub fn build_basis256() -> DfsBasis {
    let norm = FactorNorm::PauliNormalized;
    let p = partition4();
    let c = p.code_dim;
    let mut el = Vec::with_capacity(256);
    el.push(BasisElement::from_tilde(
        "I",
        ErrorClass::Identity,
        TildeSum::single(1.0, "IIII".parse().expect("static")),
        norm,
    ));
    let logical_scale = 1.0 / (2.0 * 2f64.sqrt());
    for (name, f) in [("X_L", "X"), ("Y_L", "Y"), ("Z_L", "Z")] {
        let prod: TildeProduct = format!("(I+Z)(I+Z)(I+Z){f}").parse().expect("static");
        el.push(BasisElement::from_tilde(name, ErrorClass::Logical, TildeSum::single(logical_scale, prod), norm));
    }
    let perp_weight = -(c as f64) / (DIM - c) as f64;
    let balance: Vec<f64> = (0..DIM).map(|k| if k < c { 1.0 } else { perp_weight }).collect();
    el.push(BasisElement::new("code_balance", ErrorClass::Collective, Operator::diagonal(&balance), TildeSum::default()));
    for a in 0..c {
        for b in c..DIM {
            for (axis, imag) in [("x", false), ("y", true)] {
                el.push(BasisElement::new(
                    format!("L{axis}[{a},{b}]"),
                    ErrorClass::Leakage,
                    frame_unit(a, b, imag),
                    TildeSum::default(),
                ));
            }
        }
    }
    let mut perp: Vec<Operator> = Vec::new();
    for (name, axis) in [("S_X", Axis::X), ("S_Y", Axis::Y), ("S_Z", Axis::Z)] {
        let s = p.to_frame(&collective(N, axis));
        perp.push(s.clone());
        el.push(BasisElement::new(name, ErrorClass::Collective, s, TildeSum::default()));
    }
    let mut k = 0;
    for cand in complement_gell_mann(c) {
        let mut v = cand.into_matrix();
        for q in &perp {
            let proj = q.matrix().dotc(&v) / q.matrix().norm_squared();
            v -= q.matrix() * proj;
        }
        let nv = v.norm();
        if nv < 1e-8 {
            continue;
        }
        let unit = Operator::from_matrix(v / C64::new(nv, 0.0));
        perp.push(unit.clone());
        k += 1;
        el.push(BasisElement::new(format!("perp{k}"), ErrorClass::OrthoAnnihilator, unit, TildeSum::default()));
    }
    debug_assert_eq!(el.len(), 256);
    DfsBasis { n: N, elements: el, partition: p, factor_norm: norm, logical_slot: 3 }
}

#[derive(Clone, Debug, Serialize)]
pub struct StateRow {
    pub name: String,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// All sixteen states as computational-basis vectors.
pub fn states_dump() -> Vec<StateRow> {
    dfs4_states()
        .ordered()
        .into_iter()
        .map(|(name, v)| StateRow { name, re: v.iter().map(|z| z.re).collect(), im: v.iter().map(|z| z.im).collect() })
        .collect()
}
