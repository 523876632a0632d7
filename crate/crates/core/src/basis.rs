//! Classified operator bases adapted to a DFS block structure, and
//! projection of arbitrary operators onto them.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{ComplexJson, OperatorJson};
use crate::leakage::{frame_blocks, BlockPartition};
use crate::operator::{hs_inner, Operator, ZERO};
use crate::tilde::{FactorNorm, TildeSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorClass {
    Identity,
    Logical,
    OrthoLogical,
    Collective,
    Stabilizer,
    OrthoAnnihilator,
    LogicalCollectiveProduct,
    Leakage,
}

impl ErrorClass {
    pub const ALL: [ErrorClass; 8] = [
        ErrorClass::Identity,
        ErrorClass::Logical,
        ErrorClass::OrthoLogical,
        ErrorClass::Collective,
        ErrorClass::Stabilizer,
        ErrorClass::OrthoAnnihilator,
        ErrorClass::LogicalCollectiveProduct,
        ErrorClass::Leakage,
    ];

    /// Classes with no effect on the encoded information.
    pub fn is_trivial_on_code(self) -> bool {
        matches!(self, ErrorClass::Identity | ErrorClass::Collective | ErrorClass::Stabilizer)
    }

    /// Classes supported only on the complement.
    pub fn is_complement_only(self) -> bool {
        matches!(self, ErrorClass::OrthoLogical | ErrorClass::OrthoAnnihilator)
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for ErrorClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        Ok(match key.as_str() {
            "identity" => ErrorClass::Identity,
            "logical" => ErrorClass::Logical,
            "ortho" | "orthological" => ErrorClass::OrthoLogical,
            "collective" => ErrorClass::Collective,
            "stabilizer" => ErrorClass::Stabilizer,
            "annihilator" | "orthoannihilator" => ErrorClass::OrthoAnnihilator,
            "mixer" | "logicalcollectiveproduct" => ErrorClass::LogicalCollectiveProduct,
            "leakage" => ErrorClass::Leakage,
            _ => return Err(Error::Parse(s.to_string())),
        })
    }
}

/// Parses a comma-separated class list; `cperp` expands to both
/// complement-only classes.
pub fn parse_class_list(s: &str) -> Result<BTreeSet<ErrorClass>> {
    let mut out = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.to_lowercase().as_str() {
            "cperp" | "c_perp" | "perp" => {
                out.insert(ErrorClass::OrthoLogical);
                out.insert(ErrorClass::OrthoAnnihilator);
            }
            _ => {
                out.insert(part.parse()?);
            }
        }
    }
    Ok(out)
}

/// One named basis operator, stored in the DFS frame.
#[derive(Clone, Debug)]
pub struct BasisElement {
    pub name: String,
    pub class: ErrorClass,
    /// DFS-frame matrix at its natural (display) normalization.
    pub op: Operator,
    /// Tilde form; empty for elements built numerically.
    pub tilde: TildeSum,
    norm_sq: f64,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, class: ErrorClass, op: Operator, tilde: TildeSum) -> Self {
        let norm_sq = op.frobenius_norm().powi(2);
        Self { name: name.into(), class, op, tilde, norm_sq }
    }

    pub fn from_tilde(name: impl Into<String>, class: ErrorClass, tilde: TildeSum, norm: FactorNorm) -> Self {
        let op = tilde.to_operator(norm).expect("non-empty tilde form");
        Self::new(name, class, op, tilde)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq.sqrt()
    }

    pub fn orthonormal(&self) -> Operator {
        self.op.scale_real(1.0 / self.norm())
    }

    /// Coefficient of `frame_op` along this element: `⟨e, A⟩ / ⟨e, e⟩`.
    pub fn coefficient(&self, frame_op: &Operator) -> C64 {
        self.op.matrix().dotc(frame_op.matrix()) / self.norm_sq
    }
}

#[derive(Clone, Debug)]
pub struct DfsBasis {
    pub n: usize,
    pub elements: Vec<BasisElement>,
    pub partition: BlockPartition,
    pub factor_norm: FactorNorm,
    /// Slot of the tilde product that carries the logical qubit.
    pub logical_slot: usize,
}

impl DfsBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.partition.total_dim
    }

    pub fn udfs(&self) -> &Operator {
        &self.partition.basis_change
    }

    pub fn get(&self, name: &str) -> Result<&BasisElement> {
        self.elements
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Element whose single-product tilde form prints as `tilde`.
    pub fn find_tilde(&self, tilde: &str) -> Option<&BasisElement> {
        let target: crate::tilde::TildeProduct = tilde.parse().ok()?;
        self.elements
            .iter()
            .find(|e| e.tilde.as_single().is_some_and(|(_, p)| *p == target))
    }

    pub fn count(&self, class: ErrorClass) -> usize {
        self.elements.iter().filter(|e| e.class == class).count()
    }

    /// Largest normalized off-diagonal Gram entry, with the offending pair.
    pub fn max_gram_offdiag(&self) -> (f64, Option<(usize, usize)>) {
        let units: Vec<Operator> = self.elements.iter().map(BasisElement::orthonormal).collect();
        let mut worst = (0.0, None);
        for a in 0..units.len() {
            for b in (a + 1)..units.len() {
                let v = units[a].matrix().dotc(units[b].matrix()).norm();
                if v > worst.0 {
                    worst = (v, Some((a, b)));
                }
            }
        }
        worst
    }

    /// Every pair whose normalized overlap exceeds `tol`.
    pub fn orthogonality_violations(&self, tol: f64) -> Vec<(String, String, f64)> {
        let units: Vec<Operator> = self.elements.iter().map(BasisElement::orthonormal).collect();
        let mut out = Vec::new();
        for a in 0..units.len() {
            for b in (a + 1)..units.len() {
                let v = units[a].matrix().dotc(units[b].matrix()).norm();
                if v > tol {
                    out.push((self.elements[a].name.clone(), self.elements[b].name.clone(), v));
                }
            }
        }
        out
    }

    pub fn dump(&self) -> BasisDump {
        BasisDump {
            n: self.n,
            dim: self.dim(),
            frame: "dfs".into(),
            factor_norm: self.factor_norm,
            udfs: self.udfs().into(),
            elements: self
                .elements
                .iter()
                .enumerate()
                .map(|(index, e)| BasisRow {
                    index,
                    name: e.name.clone(),
                    class: e.class,
                    tilde: if e.tilde.terms.is_empty() { None } else { Some(e.tilde.to_string()) },
                    hs_norm: e.norm(),
                    matrix: (&e.op).into(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisRow {
    pub index: usize,
    pub name: String,
    pub class: ErrorClass,
    pub tilde: Option<String>,
    pub hs_norm: f64,
    pub matrix: OperatorJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisDump {
    pub n: usize,
    pub dim: usize,
    pub frame: String,
    pub factor_norm: FactorNorm,
    pub udfs: OperatorJson,
    pub elements: Vec<BasisRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Coefficient {
    pub element: String,
    pub class: ErrorClass,
    /// `⟨e, A⟩ / ⟨e, e⟩` for the element as stored.
    pub raw: ComplexJson,
    /// `⟨e/‖e‖, A⟩`.
    pub orthonormal: ComplexJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub coefficients: Vec<Coefficient>,
    pub classes: BTreeSet<ErrorClass>,
    pub reconstruction_residual: f64,
}

impl Classification {
    pub fn raw(&self, name: &str) -> Option<C64> {
        self.coefficients.iter().find(|c| c.element == name).map(|c| c.raw.into())
    }
}

/// Raw coefficients of a DFS-frame operator on every basis element.
pub(crate) fn frame_coefficients(frame_op: &Operator, basis: &DfsBasis) -> Vec<C64> {
    basis.elements.iter().map(|e| e.coefficient(frame_op)).collect()
}

pub(crate) fn resynthesize(coeffs: &[C64], basis: &DfsBasis) -> Operator {
    let mut acc = DMatrix::<C64>::zeros(basis.dim(), basis.dim());
    for (c, e) in coeffs.iter().zip(&basis.elements) {
        if *c != ZERO {
            acc += e.op.matrix() * *c;
        }
    }
    Operator::from_matrix(acc)
}

/// Expands a physical operator on `basis`.
///
/// A class is listed when its orthonormal weight exceeds `basis.partition.tol`
/// relative to `max(1, ‖op‖)`.
pub fn classify(op: &Operator, basis: &DfsBasis) -> Result<Classification> {
    if op.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: op.dim() });
    }
    let frame = basis.partition.to_frame(op);
    let coeffs = frame_coefficients(&frame, basis);
    let residual = resynthesize(&coeffs, basis).distance(&frame);
    let tol = basis.partition.tol * op.frobenius_norm().max(1.0);
    let mut classes = BTreeSet::new();
    let coefficients = coeffs
        .iter()
        .zip(&basis.elements)
        .filter_map(|(c, e)| {
            let orth = *c * e.norm();
            if orth.norm() <= tol {
                return None;
            }
            classes.insert(e.class);
            Some(Coefficient { element: e.name.clone(), class: e.class, raw: (*c).into(), orthonormal: orth.into() })
        })
        .collect();
    Ok(Classification { coefficients, classes, reconstruction_residual: residual })
}

/// `I₂ ⊗ M` with `M = Tr_logical(B)/2`, for a code block ordered logical ⊗ gauge.
pub fn gauge_part(code: &DMatrix<C64>, gauge_dim: usize) -> DMatrix<C64> {
    let g = gauge_dim;
    let m = DMatrix::from_fn(g, g, |a, b| (code[(a, b)] + code[(g + a, g + b)]) * 0.5);
    DMatrix::from_fn(2 * g, 2 * g, |i, j| if i / g == j / g { m[(i % g, j % g)] } else { ZERO })
}

/// How far `op` is from acting trivially on the logical qubit: leakage
/// blocks plus the departure of the code block from `I₂ ⊗ M`.
pub fn stabilizer_residual(op: &Operator, p: &BlockPartition) -> Result<f64> {
    if op.dim() != p.total_dim {
        return Err(Error::DimensionMismatch { expected: p.total_dim, found: op.dim() });
    }
    let b = frame_blocks(&p.to_frame(op), p.code_dim);
    let off = (&b.code - gauge_part(&b.code, p.gauge_dim)).norm();
    Ok((off * off + b.leakage_norm().powi(2)).sqrt())
}

pub fn verify_stabilizer(op: &Operator, p: &BlockPartition) -> bool {
    stabilizer_residual(op, p).is_ok_and(|r| r <= p.tol * op.frobenius_norm().max(1.0))
}

/// Normalized Hilbert–Schmidt overlap `|⟨a,b⟩| / (‖a‖‖b‖)`.
pub fn normalized_overlap(a: &Operator, b: &Operator) -> Result<f64> {
    let denom = a.frobenius_norm() * b.frobenius_norm();
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(hs_inner(a, b)?.norm() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_names_parse() {
        assert_eq!("leakage".parse::<ErrorClass>().unwrap(), ErrorClass::Leakage);
        assert_eq!("Ortho-Annihilator".parse::<ErrorClass>().unwrap(), ErrorClass::OrthoAnnihilator);
        let set = parse_class_list("leakage, cperp").unwrap();
        assert_eq!(set.len(), 3);
        assert!(parse_class_list("leakage,bogus").is_err());
    }

    #[test]
    fn gauge_part_of_product() {
        let x = crate::operator::Pauli::X.matrix();
        let z = crate::operator::Pauli::Z.matrix();
        let b = crate::operator::kron(&z, &x);
        assert!(gauge_part(b.matrix(), 2).norm() < 1e-15);
        let c = crate::operator::kron(&Operator::identity(2), &x);
        assert!((gauge_part(c.matrix(), 2) - c.matrix()).norm() < 1e-15);
    }
}
