//! Decomposition `f = sum_j q^j h_j` with every `h_j` harmonic.

use crate::error::{Error, Result};
use crate::exact::{rank, solve_unique};
use crate::poly::{monomials_of_degree, quadric, Monomial, Polynomial, RationalPoly};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicDecomposition {
    pub degree: u32,
    /// `(j, h_j)` with `h_j` of degree `degree - 2j`; zero components are
    /// omitted.
    pub components: Vec<(u32, RationalPoly)>,
}

/// Serializable view with components in canonical text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentText {
    pub j: u32,
    pub degree: u32,
    pub harmonic: String,
}

impl HarmonicDecomposition {
    pub fn to_text(&self) -> Vec<ComponentText> {
        self.components
            .iter()
            .map(|(j, h)| ComponentText {
                j: *j,
                degree: self.degree - 2 * j,
                harmonic: h.to_canonical_string(),
            })
            .collect()
    }

    /// `sum_j q^j h_j`.
    pub fn reconstruct(&self) -> Option<RationalPoly> {
        let (_, first) = self.components.first()?;
        let q = quadric(first.layout(), 0);
        let mut acc = RationalPoly::zero(first.layout());
        for (j, h) in &self.components {
            acc = acc.add(&q.pow(*j).mul(h).ok()?).ok()?;
        }
        Some(acc)
    }
}

fn require_single_block(f: &RationalPoly) -> Result<()> {
    match f.layout().num_blocks() {
        1 => Ok(()),
        n => Err(Error::MultiBlock(n)),
    }
}

pub fn laplacian(f: &RationalPoly) -> Result<RationalPoly> {
    require_single_block(f)?;
    let mut acc = RationalPoly::zero(f.layout());
    for v in 0..f.layout().num_vars() {
        acc = acc.add(&f.partial_derivative(v)?.partial_derivative(v)?)?;
    }
    Ok(acc)
}

/// Exact decomposition by one linear solve: unknowns are the coefficients of
/// every `h_j`; equations are the reconstruction identity and `Delta h_j = 0`.
pub fn harmonic_decompose(f: &RationalPoly, degree: u32) -> Result<HarmonicDecomposition> {
    require_single_block(f)?;
    if !f.is_homogeneous() || (!f.is_zero() && f.degree() != i64::from(degree)) {
        return Err(Error::NotHomogeneous);
    }
    let layout = f.layout().clone();
    let n = layout.num_vars();
    let q = quadric::<BigRational>(&layout, 0);

    struct Unknown {
        j: u32,
        mono: Monomial,
    }
    let mut unknowns = Vec::new();
    for j in 0..=degree / 2 {
        for mono in monomials_of_degree(n, degree - 2 * j) {
            unknowns.push(Unknown { j, mono });
        }
    }

    let top = monomials_of_degree(n, degree);
    let top_index: HashMap<&Monomial, usize> =
        top.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut harmonic_rows: Vec<(u32, HashMap<Monomial, usize>)> = Vec::new();
    let mut row_count = top.len();
    for j in 0..=degree / 2 {
        let hd = degree - 2 * j;
        if hd >= 2 {
            let idx = monomials_of_degree(n, hd - 2)
                .into_iter()
                .enumerate()
                .map(|(i, m)| (m, row_count + i))
                .collect::<HashMap<_, _>>();
            row_count += idx.len();
            harmonic_rows.push((j, idx));
        }
    }

    let zero = BigRational::zero();
    let mut a = vec![vec![zero.clone(); unknowns.len()]; row_count];
    let mut q_pows: Vec<RationalPoly> = vec![RationalPoly::one(&layout)];
    for _ in 0..degree / 2 {
        let next = q_pows.last().expect("nonempty").mul(&q)?;
        q_pows.push(next);
    }
    for (col, u) in unknowns.iter().enumerate() {
        let basis =
            Polynomial::monomial(&layout, u.mono.clone(), BigRational::from_integer(1.into()));
        for (m, c) in q_pows[u.j as usize].mul(&basis)?.terms() {
            a[top_index[m]][col] = c.clone();
        }
        if let Some((_, idx)) = harmonic_rows.iter().find(|(j, _)| *j == u.j) {
            for (m, c) in laplacian(&basis)?.terms() {
                a[idx[m]][col] = c.clone();
            }
        }
    }
    let mut b = vec![zero; row_count];
    for (m, c) in f.terms() {
        b[top_index[m]] = c.clone();
    }

    let x = solve_unique(&a, &b).expect("harmonic decomposition exists and is unique");
    let mut components: Vec<(u32, RationalPoly)> = Vec::new();
    for (u, v) in unknowns.iter().zip(x) {
        if v.is_zero() {
            continue;
        }
        let term = Polynomial::monomial(&layout, u.mono.clone(), v);
        match components.iter_mut().find(|(j, _)| *j == u.j) {
            Some((_, h)) => *h = h.add(&term)?,
            None => components.push((u.j, term)),
        }
    }
    components.sort_by_key(|(j, _)| *j);
    Ok(HarmonicDecomposition { degree, components })
}

/// The constant `c` in the `q^{d/2}` component; `None` for odd `d`.
pub fn kernel_component(f: &RationalPoly, degree: u32) -> Result<Option<BigRational>> {
    if degree % 2 == 1 {
        return Ok(None);
    }
    let dec = harmonic_decompose(f, degree)?;
    let c = dec
        .components
        .iter()
        .find(|(j, _)| *j == degree / 2)
        .map(|(_, h)| h.coefficient_of(&vec![0; h.layout().num_vars()]))
        .unwrap_or_else(BigRational::zero);
    Ok(Some(c))
}

/// `dim ker(Delta: Sym^d -> Sym^{d-2})` on `m + 1` variables, computed from
/// the rank of the Laplacian matrix.
pub fn harmonic_dimension(degree: u32, m: u32) -> usize {
    let n = m as usize + 1;
    let source = monomials_of_degree(n, degree);
    if degree < 2 {
        return source.len();
    }
    let target = monomials_of_degree(n, degree - 2);
    let tindex: HashMap<&Monomial, usize> =
        target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let layout = crate::poly::VariableLayout::new(vec![n]).expect("n >= 2");
    let mut rows = vec![vec![BigRational::zero(); source.len()]; target.len()];
    for (col, mono) in source.iter().enumerate() {
        let p = Polynomial::monomial(&layout, mono.clone(), BigRational::from_integer(1.into()));
        for (m, c) in laplacian(&p).expect("single block").terms() {
            rows[tindex[m]][col] = c.clone();
        }
    }
    source.len() - rank(&rows)
}
