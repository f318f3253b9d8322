use super::{residual, SingularTuple};
use crate::error::{Error, Result};
use crate::poly::rational_to_f64;
use crate::tensor::{build_singular_section, RationalTensor};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense univariate polynomial over the rationals, ascending coefficients,
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<BigRational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero")
    }

    pub fn monic(&self) -> Self {
        let l = self.lead().clone();
        UniPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.0.clone();
        let dd = d.0.len();
        if rem.len() < dd {
            return (UniPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd - 1] / d.lead();
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Yun's algorithm: `(multiplicity, square-free factor)` pairs of
    /// positive degree.
    pub fn square_free_factors(&self) -> Vec<(u32, UniPoly)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = sub(&c, &b.derivative());
        let mut i = 1;
        while b.degree() >= 1 {
            a = b.gcd(&d);
            if a.degree() >= 1 {
                out.push((i, a.clone()));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = sub(&c, &b.derivative());
            i += 1;
        }
        out
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::zero(), |acc, c| {
            acc * z + Complex64::new(rational_to_f64(c), 0.0)
        })
    }

    /// Complex roots from companion-matrix eigenvalues, polished by a few
    /// Newton steps.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n < 1 {
            return Vec::new();
        }
        let n = n as usize;
        let monic = self.monic();
        let c: Vec<f64> = monic.0.iter().map(rational_to_f64).collect();
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            comp[(i, n - 1)] = -c[i];
        }
        let dp = monic.derivative();
        comp.complex_eigenvalues()
            .iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..3 {
                    let d = dp.eval(z);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let step = monic.eval(z) / d;
                    if !step.re.is_finite() || !step.im.is_finite() {
                        break;
                    }
                    z -= step;
                }
                z
            })
            .collect()
    }
}

fn sub(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let n = a.0.len().max(b.0.len());
    let get = |p: &UniPoly, i: usize| p.0.get(i).cloned().unwrap_or_else(BigRational::zero);
    UniPoly::new((0..n).map(|i| get(a, i) - get(b, i)).collect())
}

/// Eigenpoints of a binary form `f(x0, x1)` with exact multiplicities: the
/// roots of `x1 df/dx0 - x0 df/dx1`, including `[1:0]` when the degree in
/// `x0` drops.
pub fn binary_eigenvectors(f: &RationalTensor) -> Result<Vec<SingularTuple>> {
    let format = f.format();
    if format.k() != 1 || format.dims() != [1] {
        return Err(Error::NotBinaryForm {
            k: format.k(),
            m: format.dims().to_vec(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let d = format.degrees()[0] as usize;
    let section = build_singular_section(f);
    let minor = &section.minors[0][0].poly;
    if minor.is_zero() {
        return Err(Error::EigenschemeIsLine);
    }
    // minor is a binary form of degree d; dehomogenize at x1 = 1
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (m, c) in minor.terms() {
        coeffs[m.exponents()[0] as usize] = c.clone();
    }
    let g = UniPoly::new(coeffs);
    let at_infinity = d as i64 - g.degree();

    let mut out = Vec::new();
    for (mult, factor) in g.square_free_factors() {
        for r in factor.roots() {
            let mut t = SingularTuple::new(vec![vec![r, Complex64::one()]]).expect("finite root");
            t.multiplicity = mult;
            out.push(t);
        }
    }
    if at_infinity > 0 {
        let mut t =
            SingularTuple::new(vec![vec![Complex64::one(), Complex64::zero()]]).expect("nonzero");
        t.multiplicity = at_infinity as u32;
        out.push(t);
    }
    for t in &mut out {
        t.residual = residual(f, t);
    }
    out.sort_by_cached_key(SingularTuple::canonical_key);
    Ok(out)
}
