//! Anisotropic exchange errors between a pair of qubits and their expansion
//! in a classified DFS basis.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::basis::{frame_coefficients, resynthesize, DfsBasis, ErrorClass};
use crate::error::{Error, Result};
use crate::io::ComplexJson;
use crate::operator::{check_pair, single_qubit, Axis, Operator};
use crate::tilde::{FactorNorm, TildeFactor};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Levi-Civita symbol on `{0, 1, 2}`.
pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `g^{αβ}` coupling `σ_i^α σ_j^β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingTensor {
    pub pair: (usize, usize),
    pub g: Mat3,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorSplit {
    pub scalar: f64,
    pub dm_vector: Vec3,
    pub symmetric_traceless: Mat3,
}

impl TensorSplit {
    /// `g₀δ^{αβ} + ε^{αβγ}β^γ + sym^{αβ}`.
    pub fn reconstruct(&self) -> Mat3 {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let dm: f64 = (0..3).map(|c| levi_civita(a, b, c) * self.dm_vector[c]).sum();
                (if a == b { self.scalar } else { 0.0 }) + dm + self.symmetric_traceless[a][b]
            })
        })
    }
}

pub fn split_tensor(t: &CouplingTensor) -> TensorSplit {
    let g = &t.g;
    let scalar = (g[0][0] + g[1][1] + g[2][2]) / 3.0;
    let mut dm_vector = [0.0; 3];
    for (c, slot) in dm_vector.iter_mut().enumerate() {
        *slot = 0.5 * (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| levi_civita(a, b, c) * g[a][b]).sum::<f64>();
    }
    let mut sym = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            sym[a][b] = 0.5 * (g[a][b] + g[b][a]) - if a == b { scalar } else { 0.0 };
        }
    }
    TensorSplit { scalar, dm_vector, symmetric_traceless: sym }
}

fn sigma(n: usize, q: usize, a: usize) -> Operator {
    single_qubit(n, q, Axis::ALL[a].pauli())
}

/// `Σ g^{αβ} σ_i^α σ_j^β`.
pub fn tensor_error(t: &CouplingTensor, n: usize) -> Result<Operator> {
    let (i, j) = t.pair;
    check_pair(n, i, j)?;
    let mut acc = Operator::zeros(1 << n);
    for a in 0..3 {
        for b in 0..3 {
            if t.g[a][b] != 0.0 {
                acc = acc + (sigma(n, i, a) * sigma(n, j, b)) * t.g[a][b];
            }
        }
    }
    Ok(acc)
}

/// `β⃗·(σ⃗_i × σ⃗_j)` with `(σ⃗_i × σ⃗_j)^γ = ε^{γαβ} σ_i^α σ_j^β`.
pub fn dm_error(beta: Vec3, pair: (usize, usize), n: usize) -> Result<Operator> {
    let mut g = [[0.0; 3]; 3];
    for (a, row) in g.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|c| beta[c] * levi_civita(c, a, b)).sum();
        }
    }
    tensor_error(&CouplingTensor { pair, g }, n)
}

/// `(σ⃗_i·γ⃗_i)(σ⃗_j·γ⃗_j)`.
pub fn product_error(gamma_i: Vec3, gamma_j: Vec3, pair: (usize, usize), n: usize) -> Result<Operator> {
    let mut g = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            g[a][b] = gamma_i[a] * gamma_j[b];
        }
    }
    tensor_error(&CouplingTensor { pair, g }, n)
}

/// `g σ⃗_i·σ⃗_j`.
pub fn scalar_error(g: f64, pair: (usize, usize), n: usize) -> Result<Operator> {
    let mut m = [[0.0; 3]; 3];
    (0..3).for_each(|a| m[a][a] = g);
    tensor_error(&CouplingTensor { pair, g: m }, n)
}

/// Conventions used when turning coefficients into tilde-product weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionInfo {
    pub cross_product: String,
    pub tilde_order: String,
    pub factor_norm: FactorNorm,
    /// Global sign applied to reported coefficients (always `1` here).
    pub sign: f64,
}

impl ConventionInfo {
    pub fn for_basis(basis: &DfsBasis) -> Self {
        let tilde_order = match basis.n {
            3 => "(J, lambda, mu)",
            _ => "(sector, sector, sector, logical)",
        };
        Self {
            cross_product: "(s_i x s_j)^c = eps^{cab} s_i^a s_j^b".into(),
            tilde_order: tilde_order.into(),
            factor_norm: basis.factor_norm,
            sign: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub element: String,
    pub class: ErrorClass,
    /// Coefficient on the element as stored in the basis.
    pub coefficient: ComplexJson,
    pub orthonormal_coefficient: ComplexJson,
    /// Single tilde product the element is proportional to, if any.
    pub tilde: Option<String>,
    /// Coefficient on that tilde product.
    pub tilde_coefficient: Option<ComplexJson>,
}

impl Term {
    /// The tilde-product coefficient when available, else the raw one.
    pub fn display_coefficient(&self) -> C64 {
        self.tilde_coefficient.unwrap_or(self.coefficient).into()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub convention: ConventionInfo,
    pub drop: BTreeSet<ErrorClass>,
    pub terms: Vec<Term>,
    /// Sum of squared orthonormal coefficients per class.
    pub class_weights: BTreeMap<ErrorClass, f64>,
    /// Terms left after removing the dropped classes.
    pub surviving: Vec<Term>,
    /// Surviving terms that change the logical state.
    pub surviving_after_stabilizer: Vec<Term>,
    pub reconstruction_residual: f64,
    pub parseval_residual: f64,
    pub logical_slot: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl DecompositionReport {
    pub fn term(&self, tilde_or_name: &str) -> Option<&Term> {
        let parsed: Option<crate::tilde::TildeProduct> = tilde_or_name.parse().ok();
        self.terms.iter().find(|t| {
            t.element == tilde_or_name
                || (parsed.is_some()
                    && t.tilde.as_deref().and_then(|s| s.parse().ok()).as_ref() == parsed.as_ref())
        })
    }

    pub fn coefficient(&self, tilde_or_name: &str) -> C64 {
        self.term(tilde_or_name).map(Term::display_coefficient).unwrap_or_default()
    }
}

/// Expands a physical error operator on `basis`.
///
/// Terms below `basis.partition.tol` (orthonormal weight, relative to
/// `max(1, ‖op‖)`) are omitted.
pub fn decompose_error(op: &Operator, basis: &DfsBasis, drop: &BTreeSet<ErrorClass>) -> Result<DecompositionReport> {
    if op.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: op.dim() });
    }
    let frame = basis.partition.to_frame(op);
    let coeffs = frame_coefficients(&frame, basis);
    let reconstruction_residual = resynthesize(&coeffs, basis).distance(&frame);
    let tol = basis.partition.tol * op.frobenius_norm().max(1.0);
    let mut class_weights: BTreeMap<ErrorClass, f64> = BTreeMap::new();
    let mut parseval = 0.0;
    let mut terms = Vec::new();
    for (c, e) in coeffs.iter().zip(&basis.elements) {
        let orth = *c * e.norm();
        parseval += orth.norm_sqr();
        *class_weights.entry(e.class).or_default() += orth.norm_sqr();
        if orth.norm() <= tol {
            continue;
        }
        let single = e.tilde.as_single();
        terms.push(Term {
            element: e.name.clone(),
            class: e.class,
            coefficient: (*c).into(),
            orthonormal_coefficient: orth.into(),
            tilde: single.map(|(_, p)| p.to_string()),
            tilde_coefficient: single.map(|(s, _)| (*c * s).into()),
        });
    }
    let surviving: Vec<Term> = terms.iter().filter(|t| !drop.contains(&t.class)).cloned().collect();
    let surviving_after_stabilizer = surviving
        .iter()
        .filter(|t| !t.class.is_trivial_on_code() && !t.class.is_complement_only())
        .cloned()
        .collect();
    let norm_sq = op.frobenius_norm().powi(2);
    Ok(DecompositionReport {
        n: basis.n,
        convention: ConventionInfo::for_basis(basis),
        drop: drop.clone(),
        terms,
        class_weights,
        surviving,
        surviving_after_stabilizer,
        reconstruction_residual,
        parseval_residual: (parseval - norm_sq).abs(),
        logical_slot: basis.logical_slot,
        notes: Vec::new(),
    })
}

/// Four-qubit variant; the basis must be the 256-element one.
pub fn decompose_error4(op: &Operator, basis4: &DfsBasis, drop: &BTreeSet<ErrorClass>) -> Result<DecompositionReport> {
    if basis4.n != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: basis4.n });
    }
    decompose_error(op, basis4, drop)
}

/// True when every code-acting surviving term has `Y` in the logical slot.
/// With `exclude_logical_z`, the bare logical `Z` element is ignored.
pub fn logical_y_dominance_check(report: &DecompositionReport, exclude_logical_z: bool) -> bool {
    report.surviving_after_stabilizer.iter().all(|t| {
        let Some(prod) = t.tilde.as_deref().and_then(|s| s.parse::<crate::tilde::TildeProduct>().ok()) else {
            return false;
        };
        let f = prod.factors();
        if exclude_logical_z && t.class == ErrorClass::Logical && f.get(report.logical_slot) == Some(&TildeFactor::Z) {
            return true;
        }
        f.get(report.logical_slot) == Some(&TildeFactor::Y)
    })
}

/// One expected tilde-product coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct ExpectedTerm {
    pub tilde: String,
    pub expected: f64,
    pub found: ComplexJson,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    /// Surviving terms not in the expected list.
    pub unexpected: Vec<String>,
    pub terms: Vec<ExpectedTerm>,
}

/// Compares the given view of a report against expected tilde coefficients.
pub fn check_terms(name: &str, view: &[Term], expected: &[(&str, f64)], tol: f64) -> IdentityCheck {
    let find = |tilde: &str| {
        let p: crate::tilde::TildeProduct = tilde.parse().expect("expected terms use valid tilde strings");
        view.iter()
            .find(|t| t.tilde.as_deref().and_then(|s| s.parse().ok()).as_ref() == Some(&p))
            .map(Term::display_coefficient)
            .unwrap_or_default()
    };
    let terms: Vec<ExpectedTerm> = expected
        .iter()
        .map(|(tilde, e)| {
            let found = find(tilde);
            ExpectedTerm { tilde: tilde.to_string(), expected: *e, found: found.into(), error: (found - e).norm() }
        })
        .collect();
    let expected_set: Vec<crate::tilde::TildeProduct> =
        expected.iter().map(|(t, _)| t.parse().expect("valid")).collect();
    let unexpected: Vec<String> = view
        .iter()
        .filter(|t| {
            let p = t.tilde.as_deref().and_then(|s| s.parse().ok());
            !p.is_some_and(|p| expected_set.contains(&p))
        })
        .map(|t| t.tilde.clone().unwrap_or_else(|| t.element.clone()))
        .collect();
    let max_error = terms.iter().map(|t| t.error).fold(0.0, f64::max);
    IdentityCheck { name: name.into(), passed: max_error <= tol && unexpected.is_empty(), max_error, unexpected, terms }
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

/// Expected non-leakage terms of the product error on qubits (1, 2) of the
/// three-qubit code.
pub fn expected_product_terms3(g1: Vec3, g2: Vec3) -> Vec<(&'static str, f64)> {
    let [x1, y1, z1] = g1;
    let [x2, y2, z2] = g2;
    let d = 2.0 * 3f64.sqrt();
    let gg = dot(g1, g2);
    vec![
        ("(I-Z)XI", (x1 * x2 - y1 * y2) / d),
        ("(I-Z)YI", (y1 * x2 + x1 * y2) / d),
        ("(I+Z)YX", (-z1 * y2 + y1 * z2) / d),
        ("(I+Z)YY", (z1 * x2 - x1 * z2) / d),
        ("(I+Z)YZ", (-y1 * x2 + x1 * y2) / d),
        ("(I+Z)ZI", -gg / 3.0),
        ("(I-Z)ZX", (z1 * x2 + x1 * z2) / d),
        ("(I-Z)ZY", (z1 * y2 + y1 * z2) / d),
        ("(I-Z)ZZ", (-x1 * x2 - y1 * y2 + 2.0 * z1 * z2) / 6.0),
        ("ZII", -gg / 3.0),
    ]
}

/// Expected code-acting terms of the DM error on qubits (1, 2) of the
/// three-qubit code.
pub fn expected_dm_terms3(beta: Vec3) -> Vec<(&'static str, f64)> {
    let s = 1.0 / 3f64.sqrt();
    vec![("(I+Z)YX", s * beta[0]), ("(I+Z)YY", s * beta[1]), ("(I+Z)YZ", s * beta[2])]
}

/// Expected logical terms of the product error on the four-qubit code.
pub fn expected_product_terms4(g1: Vec3, g2: Vec3, pair: (usize, usize)) -> Vec<(&'static str, f64)> {
    let gg = dot(g1, g2);
    let r2 = 2f64.sqrt();
    match pair {
        (1, 2) => vec![("(I+Z)(I+Z)(I+Z)Z", -gg / (3.0 * r2))],
        (2, 3) => vec![("(I+Z)(I+Z)(I+Z)Z", gg / (6.0 * r2)), ("(I+Z)(I+Z)(I+Z)X", gg / (2.0 * 6f64.sqrt()))],
        _ => Vec::new(),
    }
}
