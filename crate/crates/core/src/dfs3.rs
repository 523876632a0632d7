//! Three-qubit decoherence-free subsystem.
//!
//! DFS frame index `4J + 2λ + μ`: `J = 0` is the pair of `S = 1/2` doublets
//! (the code), `λ` labels the logical state and `μ` the gauge spin
//! projection. The `J = 1` block holds the `S = 3/2` quartet.

use num_complex::Complex64 as C64;

use crate::basis::{BasisElement, DfsBasis, ErrorClass};
use crate::leakage::{make_canonical_leo, BlockPartition, Leo};
use crate::operator::{collective, commutator, exchange, Axis, Operator};
use crate::tilde::{FactorNorm, TildeFactor, TildeProduct, TildeSum};

const N: usize = 3;

/// Change of basis from computational to DFS-ordered coordinates.
pub fn udfs3() -> Operator {
    let r2 = 1.0 / 2f64.sqrt();
    let r3 = 1.0 / 3f64.sqrt();
    let r6 = 1.0 / 6f64.sqrt();
    #[rustfmt::skip]
    let rows = [
        0.0, 0.0, r2, 0.0, -r2, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, r2, 0.0, -r2, 0.0, 0.0,
        0.0, 2.0 * r6, -r6, 0.0, -r6, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, r6, 0.0, r6, -2.0 * r6, 0.0,
        1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, r3, r3, 0.0, r3, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, r3, 0.0, r3, r3, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
    ];
    Operator::from_real_rows(8, &rows).expect("8x8").with_label("U_dfs3")
}

pub fn partition3() -> BlockPartition {
    BlockPartition::new(udfs3(), 4, 2).expect("U_dfs3 is unitary")
}

/// Exchange-built logical Paulis `(X̄, Ȳ, Z̄)`.
pub fn logical_ops3() -> (Operator, Operator, Operator) {
    let e = |i, j| exchange(N, i, j).expect("valid pair");
    let x = (e(2, 3) - e(1, 3)) * (1.0 / 3f64.sqrt());
    let z = (e(1, 3) + e(2, 3) - e(1, 2) * 2.0) * (1.0 / 3.0);
    let y = commutator(&z, &x).expect("same dim").scale(C64::new(0.0, -0.5));
    (x.with_label("X_L"), y.with_label("Y_L"), z.with_label("Z_L"))
}

/// `R = exp(−iπZ̄)`.
pub fn canonical_leo3() -> Leo {
    let (_, _, z) = logical_ops3();
    make_canonical_leo(&z, &partition3()).expect("Z_L is canonical")
}

fn t(s: &str) -> TildeProduct {
    s.parse().expect("static tilde string")
}

/// `U S_α U†` written as tilde products.
pub fn collective_tilde(axis: Axis) -> TildeSum {
    let s3 = 3f64.sqrt();
    match axis {
        Axis::X => TildeSum::from_terms(vec![
            (0.5, t("(I+Z)IX")),
            (0.5 * s3, t("(I-Z)IX")),
            (0.5, t("(I-Z)XX")),
            (0.5, t("(I-Z)YY")),
        ]),
        Axis::Y => TildeSum::from_terms(vec![
            (0.5, t("(I+Z)IY")),
            (0.5 * s3, t("(I-Z)IY")),
            (-0.5, t("(I-Z)XY")),
            (0.5, t("(I-Z)YX")),
        ]),
        Axis::Z => TildeSum::from_terms(vec![(1.0, t("IIZ")), (1.0, t("(I-Z)ZI"))]),
    }
}

/// Rows of the orthogonal completion of `(1, √3, 1, 1)/√6`.
pub fn so4_rows() -> [[f64; 4]; 3] {
    let s5 = 5f64.sqrt();
    [
        [1.0 / 30f64.sqrt(), 1.0 / 10f64.sqrt(), 1.0 / 30f64.sqrt(), -(5.0f64 / 6.0).sqrt()],
        [-(3f64.sqrt()) / 2.0, 0.5, 0.0, 0.0],
        [-1.0 / (2.0 * s5), -0.5 * (3.0f64 / 5.0).sqrt(), 2.0 / s5, 0.0],
    ]
}

/// The four products spanned by `S_X` (or `S_Y`), signed so that the
/// collective operator has coefficients proportional to `(1, √3, 1, 1)`.
pub fn stabilizer_products(axis: Axis) -> [(f64, TildeProduct); 4] {
    match axis {
        Axis::X => [(1.0, t("(I+Z)IX")), (1.0, t("(I-Z)IX")), (1.0, t("(I-Z)XX")), (1.0, t("(I-Z)YY"))],
        Axis::Y => [(1.0, t("(I+Z)IY")), (1.0, t("(I-Z)IY")), (-1.0, t("(I-Z)XY")), (1.0, t("(I-Z)YX"))],
        Axis::Z => panic!("no SO(4) completion for the diagonal collective operator"),
    }
}

/// `S_{α k}` for `α ∈ {X, Y}` and `k ∈ {1, 2, 3}`.
pub fn stabilizer_tilde(axis: Axis, k: usize) -> TildeSum {
    let row = so4_rows()[k - 1];
    let terms = stabilizer_products(axis)
        .into_iter()
        .zip(row)
        .filter(|(_, c)| *c != 0.0)
        .map(|((sign, p), c)| (sign * c, p))
        .collect();
    TildeSum::from_terms(terms)
}

fn product(factors: [TildeFactor; 3]) -> TildeProduct {
    TildeProduct::new(factors.to_vec())
}

/// The 64-element classified basis, stored in the DFS frame.
pub fn build_basis64() -> DfsBasis {
    use TildeFactor::{Minus, Plus, I, X, Y, Z};
    let norm = FactorNorm::Literal;
    let paulis = [I, X, Y, Z];
    let mut el = Vec::with_capacity(64);
    let single = |name: String, class, c: f64, p: TildeProduct| {
        BasisElement::from_tilde(name, class, TildeSum::single(c, p), norm)
    };

    el.push(single("I".into(), ErrorClass::Identity, 1.0, product([I, I, I])));
    for (name, f) in [("X_L", X), ("Y_L", Y), ("Z_L", Z)] {
        el.push(single(name.into(), ErrorClass::Logical, 0.5, product([Plus, f, I])));
    }
    el.push(single("X_perp".into(), ErrorClass::OrthoLogical, 1.0, product([Minus, X, I])));
    el.push(single("Y_perp".into(), ErrorClass::OrthoLogical, 1.0, product([Minus, Y, I])));
    el.push(BasisElement::from_tilde(
        "Z_perp",
        ErrorClass::OrthoLogical,
        TildeSum::from_terms(vec![(2.0, t("IIZ")), (-1.0, t("(I-Z)ZI"))]),
        norm,
    ));
    let inv6 = 1.0 / 6f64.sqrt();
    for (name, axis) in [("S_X", Axis::X), ("S_Y", Axis::Y), ("S_Z", Axis::Z)] {
        let mut sum = collective_tilde(axis);
        sum.terms.iter_mut().for_each(|(c, _)| *c *= inv6);
        el.push(BasisElement::from_tilde(name, ErrorClass::Collective, sum, norm));
    }
    for (label, axis) in [("X", Axis::X), ("Y", Axis::Y)] {
        for k in 1..=3 {
            el.push(BasisElement::from_tilde(
                format!("S_{label}{k}"),
                ErrorClass::Stabilizer,
                stabilizer_tilde(axis, k),
                norm,
            ));
        }
    }
    for p in [product([Z, I, Z]), product([Z, I, I])] {
        el.push(single(p.to_string(), ErrorClass::Collective, 1.0, p));
    }
    for (a, b) in [(X, Z), (Y, Z), (Z, X), (Z, Y), (Z, Z)] {
        let p = product([Minus, a, b]);
        el.push(single(p.to_string(), ErrorClass::OrthoAnnihilator, 1.0, p));
    }
    for a in [X, Y, Z] {
        for b in [X, Y, Z] {
            let p = product([Plus, a, b]);
            el.push(single(p.to_string(), ErrorClass::LogicalCollectiveProduct, 1.0, p));
        }
    }
    for j in [X, Y] {
        for a in paulis {
            for b in paulis {
                let p = product([j, a, b]);
                el.push(single(p.to_string(), ErrorClass::Leakage, 1.0, p));
            }
        }
    }
    debug_assert_eq!(el.len(), 64);
    DfsBasis { n: N, elements: el, partition: partition3(), factor_norm: norm, logical_slot: 1 }
}

/// Physical collective operator `S_α` in the DFS frame.
pub fn collective_frame(axis: Axis) -> Operator {
    partition3().to_frame(&collective(N, axis))
}
