//! Sparse multivariate polynomials over blocks of variables.
//!
//! Variables are flattened across blocks: block `l` owns the contiguous
//! index range returned by [`VariableLayout::block_range`]. Terms are kept in
//! a `BTreeMap` keyed by [`Monomial`], whose ordering is graded
//! lexicographic, so iteration order and the canonical text form are fixed.

mod coefficient;

pub use coefficient::{parse_rational, rational, rational_to_f64, Coefficient};

use crate::error::{Error, Result};
use num_complex::Complex64;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

pub type RationalPoly = Polynomial<BigRational>;
pub type ComplexPoly = Polynomial<Complex64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableLayout {
    block_sizes: Vec<usize>,
}

impl VariableLayout {
    /// Blocks of projective coordinates; every block needs at least two
    /// variables.
    pub fn new(block_sizes: Vec<usize>) -> Result<Self> {
        if block_sizes.is_empty() {
            return Err(Error::InvalidLayout(
                "at least one block is required".into(),
            ));
        }
        if let Some(s) = block_sizes.iter().find(|&&s| s < 2) {
            return Err(Error::InvalidLayout(format!(
                "block of size {s} (need >= 2)"
            )));
        }
        Ok(Self { block_sizes })
    }

    /// Layout for `Sym^{d_1} V_1 (x) ... ` with `dim V_l = m_l + 1`.
    pub fn projective(dims: &[u32]) -> Result<Self> {
        Self::new(dims.iter().map(|&m| m as usize + 1).collect())
    }

    /// A single block of `n >= 1` affine variables. Used for auxiliary rings
    /// such as the generating variables of the ED-degree formula.
    pub fn flat(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLayout("flat layout needs a variable".into()));
        }
        Ok(Self {
            block_sizes: vec![n],
        })
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn num_vars(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn block_range(&self, block: usize) -> Range<usize> {
        let start: usize = self.block_sizes[..block].iter().sum();
        start..start + self.block_sizes[block]
    }

    pub fn block_of(&self, var: usize) -> Option<usize> {
        let mut start = 0;
        for (b, &s) in self.block_sizes.iter().enumerate() {
            if var < start + s {
                return Some(b);
            }
            start += s;
        }
        None
    }
}

/// Exponent vector. Ordered by total degree, then lexicographically with
/// `x0 > x1 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(point)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, z)| z.powu(e))
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `degree` in `n` variables, in
/// descending monomial order.
pub fn monomials_of_degree(n: usize, degree: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, degree, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<C: Coefficient> {
    layout: VariableLayout,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(layout: &VariableLayout) -> Self {
        Self {
            layout: layout.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(layout: &VariableLayout, c: C) -> Self {
        Self::monomial(layout, Monomial::one(layout.num_vars()), c)
    }

    pub fn one(layout: &VariableLayout) -> Self {
        Self::constant(layout, C::one())
    }

    pub fn var(layout: &VariableLayout, index: usize) -> Result<Self> {
        check_var(layout, index)?;
        Ok(Self::monomial(
            layout,
            Monomial::var(layout.num_vars(), index),
            C::one(),
        ))
    }

    /// Panics if the exponent length does not match the layout.
    pub fn monomial(layout: &VariableLayout, m: Monomial, c: C) -> Self {
        assert_eq!(m.0.len(), layout.num_vars(), "exponent length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self {
            layout: layout.clone(),
            terms,
        }
    }

    /// Sums duplicate monomials and drops zeros.
    pub fn from_terms<I>(layout: &VariableLayout, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut p = Self::zero(layout);
        for (m, c) in terms {
            if m.0.len() != layout.num_vars() {
                return Err(Error::LengthMismatch {
                    expected: layout.num_vars(),
                    got: m.0.len(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .next_back()
            .map_or(-1, |m| i64::from(m.degree()))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Per-block degrees if every term shares them. `None` for the zero
    /// polynomial or a polynomial that is not multihomogeneous.
    pub fn multidegree(&self) -> Option<Vec<u32>> {
        let block_degs = |m: &Monomial| -> Vec<u32> {
            (0..self.layout.num_blocks())
                .map(|b| m.0[self.layout.block_range(b)].iter().sum())
                .collect()
        };
        let mut it = self.terms.keys();
        let first = block_degs(it.next()?);
        it.all(|m| block_degs(m) == first).then_some(first)
    }

    pub fn coefficient_of(&self, exponents: &[u32]) -> C {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(
                self.layout.block_sizes.clone(),
                other.layout.block_sizes.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            layout: self.layout.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(&self.layout);
        }
        let mut out = Self::zero(&self.layout);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        let mut out = Self::zero(&self.layout);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.layout);
        for _ in 0..e {
            acc = acc.mul(self).expect("same layout");
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        check_var(&self.layout, var)?;
        let mut out = Self::zero(&self.layout);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c.clone() * C::from_integer(i64::from(e)));
        }
        Ok(out)
    }

    /// Gradient with respect to the variables of one block.
    pub fn block_gradient(&self, block: usize) -> Result<Vec<Self>> {
        if block >= self.layout.num_blocks() {
            return Err(Error::SlotOutOfRange {
                slot: block,
                k: self.layout.num_blocks(),
            });
        }
        self.layout
            .block_range(block)
            .map(|v| self.partial_derivative(v))
            .collect()
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        let n = self.layout.num_vars();
        if point.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| c.to_complex() * m.evaluate(point))
            .sum())
    }

    pub fn to_complex(&self) -> ComplexPoly {
        Polynomial {
            layout: self.layout.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.to_complex()))
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    /// Same terms read in a different layout with the same variable count.
    pub fn relayout(&self, layout: &VariableLayout) -> Result<Self> {
        if layout.num_vars() != self.layout.num_vars() {
            return Err(Error::LengthMismatch {
                expected: layout.num_vars(),
                got: self.layout.num_vars(),
            });
        }
        Ok(Self {
            layout: layout.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Canonical text form: terms in descending monomial order joined by
    /// `" + "`, each rendered as `coeff*x{i}^{e}*...`.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut s = c.render();
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        s.push_str(&format!("*x{i}^{e}"));
                    }
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

fn check_var(layout: &VariableLayout, index: usize) -> Result<()> {
    if index >= layout.num_vars() {
        return Err(Error::VariableOutOfRange {
            index,
            count: layout.num_vars(),
        });
    }
    Ok(())
}

/// `x_0^2 + ... + x_m^2` on one block of `layout`.
pub fn quadric<C: Coefficient>(layout: &VariableLayout, block: usize) -> Polynomial<C> {
    let n = layout.num_vars();
    let mut p = Polynomial::zero(layout);
    for v in layout.block_range(block) {
        let mut e = vec![0; n];
        e[v] = 2;
        p.add_term(Monomial(e), C::one());
    }
    p
}
