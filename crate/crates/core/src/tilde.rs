//! Tensor products written in the DFS ("tilde") frame, such as `(I+Z)YX`.
//!
//! A product lists one factor per two-dimensional slot of the DFS-ordered
//! basis, most significant first. For the three-qubit code the slots are
//! (J sector, λ, μ); for the four-qubit code the first three slots pick out
//! one of eight four-state sectors and the last slot is the logical qubit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{kron_all, Operator, Pauli};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TildeFactor {
    I,
    X,
    Y,
    Z,
    /// `I + Z`
    Plus,
    /// `I − Z`
    Minus,
}

/// How the `(I ± Z)` factors are scaled when turned into matrices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorNorm {
    /// `I ± Z` as written (twice a projector).
    #[default]
    Literal,
    /// `(I ± Z)/√2`, the same Hilbert–Schmidt norm as a Pauli matrix.
    PauliNormalized,
}

impl TildeFactor {
    pub fn matrix(self, norm: FactorNorm) -> Operator {
        let s = match norm {
            FactorNorm::Literal => 1.0,
            FactorNorm::PauliNormalized => std::f64::consts::FRAC_1_SQRT_2,
        };
        match self {
            TildeFactor::I => Pauli::I.matrix(),
            TildeFactor::X => Pauli::X.matrix(),
            TildeFactor::Y => Pauli::Y.matrix(),
            TildeFactor::Z => Pauli::Z.matrix(),
            TildeFactor::Plus => Operator::diagonal(&[2.0 * s, 0.0]),
            TildeFactor::Minus => Operator::diagonal(&[0.0, 2.0 * s]),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            TildeFactor::I => "I",
            TildeFactor::X => "X",
            TildeFactor::Y => "Y",
            TildeFactor::Z => "Z",
            TildeFactor::Plus => "(I+Z)",
            TildeFactor::Minus => "(I-Z)",
        }
    }
}

impl From<Pauli> for TildeFactor {
    fn from(p: Pauli) -> Self {
        match p {
            Pauli::I => TildeFactor::I,
            Pauli::X => TildeFactor::X,
            Pauli::Y => TildeFactor::Y,
            Pauli::Z => TildeFactor::Z,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TildeProduct(pub Vec<TildeFactor>);

impl TildeProduct {
    pub fn new(factors: impl Into<Vec<TildeFactor>>) -> Self {
        Self(factors.into())
    }

    pub fn factors(&self) -> &[TildeFactor] {
        &self.0
    }

    pub fn to_operator(&self, norm: FactorNorm) -> Operator {
        let mats: Vec<Operator> = self.0.iter().map(|f| f.matrix(norm)).collect();
        kron_all(&mats)
    }
}

impl fmt::Display for TildeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.0 {
            f.write_str(factor.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for TildeProduct {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '~')
            .map(|c| if c == '−' { '-' } else { c })
            .collect();
        let mut rest = cleaned.as_str();
        let mut out = Vec::new();
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix("(I+Z)") {
                out.push(TildeFactor::Plus);
                rest = r;
            } else if let Some(r) = rest.strip_prefix("(I-Z)") {
                out.push(TildeFactor::Minus);
                rest = r;
            } else {
                let c = rest.chars().next().expect("non-empty");
                out.push(Pauli::try_from(c).map_err(|_| Error::Parse(s.to_string()))?.into());
                rest = &rest[c.len_utf8()..];
            }
        }
        if out.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(Self(out))
    }
}

impl Serialize for TildeProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TildeProduct {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Real linear combination of tilde products.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TildeSum {
    pub terms: Vec<(f64, TildeProduct)>,
}

impl TildeSum {
    pub fn single(coefficient: f64, product: TildeProduct) -> Self {
        Self { terms: vec![(coefficient, product)] }
    }

    pub fn from_terms(terms: Vec<(f64, TildeProduct)>) -> Self {
        Self { terms }
    }

    /// The lone product and its coefficient, if the sum has exactly one term.
    pub fn as_single(&self) -> Option<(f64, &TildeProduct)> {
        match self.terms.as_slice() {
            [(c, p)] => Some((*c, p)),
            _ => None,
        }
    }

    pub fn to_operator(&self, norm: FactorNorm) -> Option<Operator> {
        let mut iter = self.terms.iter();
        let (c0, p0) = iter.next()?;
        let mut acc = p0.to_operator(norm).scale_real(*c0);
        for (c, p) in iter {
            acc = acc + p.to_operator(norm).scale(C64::new(*c, 0.0));
        }
        Some(acc)
    }
}

impl fmt::Display for TildeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(if *c < 0.0 { " - " } else { " + " })?;
            } else if *c < 0.0 {
                f.write_str("-")?;
            }
            let a = c.abs();
            if (a - 1.0).abs() > 1e-15 {
                write!(f, "{a:.6}*")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["(I+Z)YX", "(I-Z)ZZ", "XIZ", "(I+Z)(I+Z)(I+Z)Z"] {
            let p: TildeProduct = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let p: TildeProduct = "(I−Z)X~I".parse().unwrap();
        assert_eq!(p.factors(), &[TildeFactor::Minus, TildeFactor::X, TildeFactor::I]);
        assert!("(I+X)".parse::<TildeProduct>().is_err());
        assert!("".parse::<TildeProduct>().is_err());
    }

    #[test]
    fn plus_minus_are_scaled_projectors() {
        let plus = TildeFactor::Plus.matrix(FactorNorm::Literal);
        assert_eq!(plus, Operator::diagonal(&[2.0, 0.0]));
        let minus = TildeFactor::Minus.matrix(FactorNorm::PauliNormalized);
        assert!((minus.frobenius_norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sum_matches_manual_kron() {
        let sum = TildeSum::from_terms(vec![(1.0, "IIZ".parse().unwrap()), (1.0, "(I-Z)ZI".parse().unwrap())]);
        let op = sum.to_operator(FactorNorm::Literal).unwrap();
        assert!(op.is_hermitian(0.0));
        assert_eq!(op.dim(), 8);
        assert_eq!(op.get(0, 0), C64::new(1.0, 0.0));
        assert_eq!(op.get(4, 4), C64::new(3.0, 0.0));
        assert_eq!(sum.to_string(), "IIZ + (I-Z)ZI");
    }
}
