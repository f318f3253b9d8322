//! JSON tensor files.
//!
//! ```json
//! { "degrees": [3], "dims": [1],
//!   "terms": [ { "exponents": [[3, 0]], "coeff": "1" },
//!              { "exponents": [[0, 3]], "coeff": [1.0, -0.5] } ] }
//! ```
//!
//! Exact coefficients are `"p/q"` strings. A file with any `[re, im]`
//! coefficient is read as a complex tensor.

use super::{ComplexTensor, RationalTensor, SymTensor, TensorFormat};
use crate::error::{Error, Result};
use crate::poly::{parse_rational, rational_to_f64, Coefficient};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub degrees: Vec<u32>,
    pub dims: Vec<u32>,
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub exponents: Vec<Vec<u32>>,
    pub coeff: CoeffEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffEntry {
    Exact(String),
    Complex([f64; 2]),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Exact(RationalTensor),
    Complex(ComplexTensor),
}

impl AnyTensor {
    pub fn format(&self) -> &TensorFormat {
        match self {
            AnyTensor::Exact(t) => t.format(),
            AnyTensor::Complex(t) => t.format(),
        }
    }

    pub fn to_complex(&self) -> ComplexTensor {
        match self {
            AnyTensor::Exact(t) => t.to_complex(),
            AnyTensor::Complex(t) => t.clone(),
        }
    }
}

impl TensorFile {
    pub fn from_exact(t: &RationalTensor) -> Self {
        Self::from_tensor(t, |c| CoeffEntry::Exact(c.render()))
    }

    pub fn from_complex(t: &ComplexTensor) -> Self {
        Self::from_tensor(t, |c| CoeffEntry::Complex([c.re, c.im]))
    }

    fn from_tensor<C: Coefficient>(t: &SymTensor<C>, f: impl Fn(&C) -> CoeffEntry) -> Self {
        Self {
            degrees: t.format().degrees().to_vec(),
            dims: t.format().dims().to_vec(),
            terms: t
                .block_terms()
                .into_iter()
                .map(|(exponents, c)| TermEntry {
                    exponents,
                    coeff: f(&c),
                })
                .collect(),
        }
    }

    pub fn into_tensor(self) -> Result<AnyTensor> {
        let format = TensorFormat::new(self.degrees, self.dims)?;
        let exact = self
            .terms
            .iter()
            .all(|t| matches!(t.coeff, CoeffEntry::Exact(_)));
        if exact {
            let terms = self
                .terms
                .into_iter()
                .map(|t| match t.coeff {
                    CoeffEntry::Exact(s) => parse_rational(&s)
                        .map(|c| (t.exponents, c))
                        .ok_or_else(|| Error::TensorFile(format!("bad coefficient {s:?}"))),
                    CoeffEntry::Complex(_) => unreachable!(),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTensor::Exact(SymTensor::from_block_terms(
                &format, terms,
            )?))
        } else {
            let terms = self
                .terms
                .into_iter()
                .map(|t| {
                    let c = match t.coeff {
                        CoeffEntry::Exact(s) => parse_rational(&s)
                            .map(|r| Complex64::new(rational_to_f64(&r), 0.0))
                            .ok_or_else(|| Error::TensorFile(format!("bad coefficient {s:?}")))?,
                        CoeffEntry::Complex([re, im]) => Complex64::new(re, im),
                    };
                    Ok((t.exponents, c))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTensor::Complex(SymTensor::from_block_terms(
                &format, terms,
            )?))
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::TensorFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn read_tensor_file(path: impl AsRef<Path>) -> Result<AnyTensor> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::TensorFile(format!("{}: {e}", path.display())))?;
    TensorFile::from_json(&text)?.into_tensor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    #[test]
    fn exact_round_trip() {
        let json = r#"{"degrees":[3],"dims":[1],"terms":[
            {"exponents":[[3,0]],"coeff":"1"},
            {"exponents":[[0,3]],"coeff":"-2/4"}]}"#;
        let t = TensorFile::from_json(json).unwrap().into_tensor().unwrap();
        let AnyTensor::Exact(t) = t else {
            panic!("expected exact")
        };
        assert_eq!(t.polynomial().coefficient_of(&[0, 3]), rational(-1, 2));
        let back = TensorFile::from_exact(&t);
        assert_eq!(back.terms[1].coeff, CoeffEntry::Exact("-1/2".into()));
        let again = TensorFile::from_json(&back.to_json())
            .unwrap()
            .into_tensor()
            .unwrap();
        assert_eq!(again, AnyTensor::Exact(t));
    }

    #[test]
    fn mixed_file_is_complex() {
        let json = r#"{"degrees":[1,1],"dims":[1,1],"terms":[
            {"exponents":[[1,0],[1,0]],"coeff":"1/2"},
            {"exponents":[[0,1],[1,0]],"coeff":[0.0,1.5]}]}"#;
        let t = TensorFile::from_json(json).unwrap().into_tensor().unwrap();
        let AnyTensor::Complex(t) = t else {
            panic!("expected complex")
        };
        assert_eq!(
            t.polynomial().coefficient_of(&[1, 0, 1, 0]),
            Complex64::new(0.5, 0.0)
        );
    }

    #[test]
    fn malformed_files() {
        assert!(TensorFile::from_json("{").is_err());
        let bad_degree =
            r#"{"degrees":[2],"dims":[1],"terms":[{"exponents":[[3,0]],"coeff":"1"}]}"#;
        assert!(TensorFile::from_json(bad_degree)
            .unwrap()
            .into_tensor()
            .is_err());
        let bad_coeff =
            r#"{"degrees":[1],"dims":[1],"terms":[{"exponents":[[1,0]],"coeff":"a/b"}]}"#;
        assert!(TensorFile::from_json(bad_coeff)
            .unwrap()
            .into_tensor()
            .is_err());
        assert!(read_tensor_file("/nonexistent/tensor.json").is_err());
    }
}
