//! Multisymmetric tensors in `Sym^{d_1} V_1 (x) ... (x) Sym^{d_k} V_k`.
//!
//! A tensor is stored as a multihomogeneous polynomial in the joint
//! variables of all blocks, in the monomial basis. The contraction with a
//! point is realized through differentiation.

mod io;
mod section;

pub use io::{read_tensor_file, AnyTensor, CoeffEntry, TensorFile, TermEntry};
pub use section::{build_singular_section, contract, phi_kernel_check, Minor, SingularSection};

use crate::error::{Error, Result};
use crate::poly::{
    monomials_of_degree, quadric, Coefficient, Monomial, Polynomial, RationalPoly, VariableLayout,
};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// The format `(k; d_1..d_k; m_1..m_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorFormat {
    degrees: Vec<u32>,
    dims: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormatReport {
    pub triangle_ok: bool,
    pub theorem_applicable: bool,
    pub excluded_case: Option<String>,
}

impl TensorFormat {
    pub fn new(degrees: Vec<u32>, dims: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidFormat("k must be at least 1".into()));
        }
        if degrees.len() != dims.len() {
            return Err(Error::InvalidFormat(format!(
                "{} degrees but {} dims",
                degrees.len(),
                dims.len()
            )));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidFormat("degrees must be >= 1".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidFormat("dims must be >= 1".into()));
        }
        Ok(Self { degrees, dims })
    }

    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn layout(&self) -> VariableLayout {
        VariableLayout::projective(&self.dims).expect("dims validated")
    }

    pub fn all_even(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 0)
    }

    /// `prod_l binom(d_l + m_l, m_l)`.
    pub fn ambient_dimension(&self) -> BigUint {
        self.degrees
            .iter()
            .zip(&self.dims)
            .map(|(&d, &m)| binomial(d + m, m))
            .product()
    }

    /// Ambient dimension as a machine integer. Panics beyond `usize`, which
    /// dense routines could not handle anyway.
    pub fn dense_dimension(&self) -> usize {
        self.ambient_dimension()
            .to_usize()
            .expect("tensor space too large for dense storage")
    }

    /// Monomial basis of the tensor space: products of one degree-`d_l`
    /// monomial per block, ordered lexicographically by block, each block in
    /// descending monomial order.
    pub fn basis(&self) -> Vec<Monomial> {
        let mut out: Vec<Vec<u32>> = vec![Vec::new()];
        for (&d, &m) in self.degrees.iter().zip(&self.dims) {
            let block = monomials_of_degree(m as usize + 1, d);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    block.iter().map(move |b| {
                        let mut e = prefix.clone();
                        e.extend_from_slice(b.exponents());
                        e
                    })
                })
                .collect();
        }
        out.into_iter().map(Monomial::new).collect()
    }

    /// Checks the hypotheses under which the singular-tuple locus determines
    /// the tensor: `m_l <= sum_{j != l} m_j` for every slot with `d_l = 1`,
    /// and the excluded small cases.
    pub fn validate(&self) -> FormatReport {
        let total: u32 = self.dims.iter().sum();
        let failing_slot = self
            .degrees
            .iter()
            .zip(&self.dims)
            .position(|(&d, &m)| d == 1 && m > total - m);
        let triangle_ok = failing_slot.is_none();
        let k_clause = match self.k() {
            1 if self.degrees[0] < 3 => Some("symmetric case requires d >= 3".to_string()),
            2 if self.degrees == [1, 1] => Some("(1,1) matrix case".to_string()),
            _ => None,
        };
        let excluded_case = match failing_slot {
            Some(l) => Some(format!(
                "triangle inequality fails at slot {l}: m = {} exceeds {}",
                self.dims[l],
                total - self.dims[l]
            )),
            None => k_clause,
        };
        FormatReport {
            triangle_ok,
            theorem_applicable: excluded_case.is_none(),
            excluded_case,
        }
    }

    /// Joint coordinate vector from per-block coordinates.
    pub fn flatten_point(&self, blocks: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
        if blocks.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: blocks.len(),
            });
        }
        let mut out = Vec::with_capacity(self.layout().num_vars());
        for (b, &m) in blocks.iter().zip(&self.dims) {
            if b.len() != m as usize + 1 {
                return Err(Error::LengthMismatch {
                    expected: m as usize + 1,
                    got: b.len(),
                });
            }
            out.extend_from_slice(b);
        }
        Ok(out)
    }
}

pub fn binomial(n: u32, r: u32) -> BigUint {
    if r > n {
        return BigUint::from(0u32);
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// A tensor of a fixed format, stored as its multihomogeneous polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor<C: Coefficient> {
    format: TensorFormat,
    poly: Polynomial<C>,
}

pub type RationalTensor = SymTensor<BigRational>;
pub type ComplexTensor = SymTensor<Complex64>;

impl<C: Coefficient> SymTensor<C> {
    pub fn from_polynomial(format: &TensorFormat, poly: Polynomial<C>) -> Result<Self> {
        let layout = format.layout();
        if poly.layout() != &layout {
            return Err(Error::LayoutMismatch(
                layout.block_sizes().to_vec(),
                poly.layout().block_sizes().to_vec(),
            ));
        }
        if !poly.is_zero() && poly.multidegree().as_deref() != Some(format.degrees()) {
            return Err(Error::NotMultihomogeneous(format.degrees().to_vec()));
        }
        Ok(Self {
            format: format.clone(),
            poly,
        })
    }

    /// Builds from `(block exponent vectors, coefficient)` pairs.
    pub fn from_block_terms<I>(format: &TensorFormat, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Vec<u32>>, C)>,
    {
        let mut joint = Vec::new();
        for (blocks, c) in terms {
            if blocks.len() != format.k() {
                return Err(Error::LengthMismatch {
                    expected: format.k(),
                    got: blocks.len(),
                });
            }
            let mut e = Vec::new();
            for (l, b) in blocks.iter().enumerate() {
                if b.len() != format.dims[l] as usize + 1 {
                    return Err(Error::LengthMismatch {
                        expected: format.dims[l] as usize + 1,
                        got: b.len(),
                    });
                }
                if b.iter().sum::<u32>() != format.degrees[l] {
                    return Err(Error::NotMultihomogeneous(format.degrees.clone()));
                }
                e.extend_from_slice(b);
            }
            joint.push((Monomial::new(e), c));
        }
        Self::from_polynomial(format, Polynomial::from_terms(&format.layout(), joint)?)
    }

    /// Coefficients against [`TensorFormat::basis`].
    pub fn from_coefficients(format: &TensorFormat, coeffs: &[C]) -> Result<Self> {
        let basis = format.basis();
        if coeffs.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                got: coeffs.len(),
            });
        }
        let poly = Polynomial::from_terms(
            &format.layout(),
            basis.into_iter().zip(coeffs.iter().cloned()),
        )?;
        Self::from_polynomial(format, poly)
    }

    pub fn format(&self) -> &TensorFormat {
        &self.format
    }

    pub fn polynomial(&self) -> &Polynomial<C> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coefficients(&self) -> Vec<C> {
        self.format
            .basis()
            .iter()
            .map(|m| self.poly.coefficient_of(m.exponents()))
            .collect()
    }

    pub fn block_terms(&self) -> Vec<(Vec<Vec<u32>>, C)> {
        let layout = self.poly.layout();
        self.poly
            .terms()
            .rev()
            .map(|(m, c)| {
                let blocks = (0..self.format.k())
                    .map(|l| m.exponents()[layout.block_range(l)].to_vec())
                    .collect();
                (blocks, c.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::from_polynomial(&self.format, self.poly.add(&other.poly)?)
    }

    pub fn scale(&self, s: &C) -> Self {
        Self {
            format: self.format.clone(),
            poly: self.poly.scale(s),
        }
    }

    pub fn to_complex(&self) -> ComplexTensor {
        SymTensor {
            format: self.format.clone(),
            poly: self.poly.to_complex(),
        }
    }
}

impl ComplexTensor {
    /// Independent standard complex Gaussian coefficients in the monomial
    /// basis.
    pub fn random_gaussian<R: Rng + ?Sized>(format: &TensorFormat, rng: &mut R) -> Self {
        let coeffs: Vec<Complex64> = (0..format.dense_dimension())
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) / std::f64::consts::SQRT_2
            })
            .collect();
        Self::from_coefficients(format, &coeffs).expect("basis length")
    }
}

impl RationalTensor {
    /// Integer coefficients drawn uniformly from `-bound..=bound`.
    pub fn random_integer<R: Rng + ?Sized>(format: &TensorFormat, bound: i64, rng: &mut R) -> Self {
        let coeffs: Vec<BigRational> = (0..format.dense_dimension())
            .map(|_| BigRational::from_integer(rng.random_range(-bound..=bound).into()))
            .collect();
        Self::from_coefficients(format, &coeffs).expect("basis length")
    }
}

/// `q_1^{d_1/2} (x) ... (x) q_k^{d_k/2}` with `q_l` the sum of squares of
/// block `l`.
pub fn q_product_tensor(format: &TensorFormat) -> Result<RationalTensor> {
    if let Some((slot, &degree)) = format.degrees.iter().enumerate().find(|(_, d)| *d % 2 == 1) {
        return Err(Error::QProductUndefined { slot, degree });
    }
    let layout = format.layout();
    let mut poly = RationalPoly::one(&layout);
    for (l, &d) in format.degrees.iter().enumerate() {
        poly = poly.mul(&quadric(&layout, l).pow(d / 2))?;
    }
    SymTensor::from_polynomial(format, poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    fn fmt(d: &[u32], m: &[u32]) -> TensorFormat {
        TensorFormat::new(d.to_vec(), m.to_vec()).unwrap()
    }

    #[test]
    fn format_validation() {
        assert!(TensorFormat::new(vec![], vec![]).is_err());
        assert!(TensorFormat::new(vec![1, 2], vec![1]).is_err());
        assert!(TensorFormat::new(vec![0], vec![1]).is_err());
        assert!(TensorFormat::new(vec![1], vec![0]).is_err());

        let r = fmt(&[1, 1, 1], &[1, 1, 1]).validate();
        assert!(r.triangle_ok && r.theorem_applicable);
        assert_eq!(r.excluded_case, None);

        let r = fmt(&[1, 1], &[2, 2]).validate();
        assert!(r.triangle_ok);
        assert!(!r.theorem_applicable);
        assert_eq!(r.excluded_case.as_deref(), Some("(1,1) matrix case"));

        let r = fmt(&[1, 1, 1], &[1, 1, 3]).validate();
        assert!(!r.triangle_ok && !r.theorem_applicable);

        assert!(!fmt(&[2], &[2]).validate().theorem_applicable);
        assert!(fmt(&[3], &[2]).validate().theorem_applicable);
        // degree 1 in the lone slot can never satisfy the triangle inequality
        assert!(!fmt(&[1], &[1]).validate().triangle_ok);
        // triangle only constrains degree-1 slots
        assert!(fmt(&[2, 2, 2], &[1, 1, 3]).validate().triangle_ok);
    }

    #[test]
    fn ambient_dimension_and_basis() {
        let f = fmt(&[2, 1], &[2, 1]);
        assert_eq!(f.ambient_dimension(), BigUint::from(12u32));
        let b = f.basis();
        assert_eq!(b.len(), 12);
        assert_eq!(b[0].exponents(), &[2, 0, 0, 1, 0]);
        assert_eq!(b[1].exponents(), &[2, 0, 0, 0, 1]);
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::from(0u32));
    }

    #[test]
    fn q_product_examples() {
        let q = q_product_tensor(&fmt(&[2], &[1])).unwrap();
        assert_eq!(q.polynomial().to_canonical_string(), "1*x0^2 + 1*x1^2");
        let q2 = q_product_tensor(&fmt(&[4], &[1])).unwrap();
        assert_eq!(
            q2.polynomial().to_canonical_string(),
            "1*x0^4 + 2*x0^2*x1^2 + 1*x1^4"
        );
        let qq = q_product_tensor(&fmt(&[2, 2], &[1, 1])).unwrap();
        assert_eq!(qq.polynomial().num_terms(), 4);
        assert!(matches!(
            q_product_tensor(&fmt(&[2, 3], &[1, 1])),
            Err(Error::QProductUndefined { slot: 1, degree: 3 })
        ));
    }

    #[test]
    fn block_terms_round_trip() {
        let f = fmt(&[1, 2], &[1, 1]);
        let t = SymTensor::from_block_terms(
            &f,
            vec![
                (vec![vec![1, 0], vec![0, 2]], rational(3, 2)),
                (vec![vec![0, 1], vec![1, 1]], rational(-1, 1)),
            ],
        )
        .unwrap();
        let back = SymTensor::from_block_terms(&f, t.block_terms()).unwrap();
        assert_eq!(back, t);
        assert!(SymTensor::from_block_terms(
            &f,
            vec![(vec![vec![1, 0], vec![1, 0]], rational(1, 1))]
        )
        .is_err());
    }

    #[test]
    fn rejects_wrong_multidegree() {
        let f = fmt(&[2], &[1]);
        let p = Polynomial::var(&f.layout(), 0).unwrap();
        assert!(matches!(
            SymTensor::<BigRational>::from_polynomial(&f, p),
            Err(Error::NotMultihomogeneous(_))
        ));
    }
}
