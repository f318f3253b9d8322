//! Number of singular tuples of a general tensor.
//!
//! With generating variables `t_1..t_k` and `s_l = (sum_i d_i t_i) - t_l`,
//! the count equals the coefficient of `t_1^{m_1} ... t_k^{m_k}` in
//! `prod_l sum_{i=0}^{m_l} s_l^i t_l^{m_l - i}`.

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalPoly, VariableLayout};
use crate::tensor::TensorFormat;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::RangeInclusive;

pub fn ed_degree(format: &TensorFormat) -> BigUint {
    let k = format.k();
    let dims = format.dims();
    let layout = VariableLayout::flat(k).expect("k >= 1");
    let t: Vec<RationalPoly> = (0..k)
        .map(|l| Polynomial::var(&layout, l).expect("in range"))
        .collect();
    let weighted =
        format
            .degrees()
            .iter()
            .zip(&t)
            .fold(RationalPoly::zero(&layout), |acc, (&d, tl)| {
                acc.add(&tl.scale(&BigRational::from_integer(d.into())))
                    .expect("same layout")
            });

    let mut product = RationalPoly::one(&layout);
    for l in 0..k {
        let hat = weighted.sub(&t[l]).expect("same layout");
        let m = dims[l];
        // geometric sum written out, so s_l = t_l needs no special case
        let mut factor = RationalPoly::zero(&layout);
        let mut hat_pow = RationalPoly::one(&layout);
        for i in 0..=m {
            let term = hat_pow.mul(&t[l].pow(m - i)).expect("same layout");
            factor = factor.add(&term).expect("same layout");
            hat_pow = truncate(&hat_pow.mul(&hat).expect("same layout"), dims);
        }
        product = truncate(
            &product.mul(&truncate(&factor, dims)).expect("same layout"),
            dims,
        );
    }

    let c = product.coefficient_of(dims);
    debug_assert!(c.is_integer());
    c.to_integer()
        .to_biguint()
        .expect("coefficient is a non-negative integer")
}

/// Drops terms that can no longer contribute to `t^dims`.
fn truncate(p: &RationalPoly, dims: &[u32]) -> RationalPoly {
    Polynomial::from_terms(
        p.layout(),
        p.terms()
            .filter(|(m, _)| m.exponents().iter().zip(dims).all(|(e, b)| e <= b))
            .map(|(m, c)| (m.clone(), c.clone())),
    )
    .expect("same layout")
}

/// Closed form for `k = 1`: `sum_{i=0}^{m} (d-1)^i`.
pub fn ed_degree_symmetric(d: u32, m: u32) -> BigUint {
    let base = BigUint::from(d.saturating_sub(1));
    let mut acc = BigUint::zero();
    let mut p = BigUint::one();
    for _ in 0..=m {
        acc += &p;
        p *= &base;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationReport {
    pub slot: usize,
    /// `(m_slot, ed_degree)` for each swept value.
    pub values: Vec<(u32, BigUint)>,
    /// `sum_{i != slot} m_i`, where the boundary format sits.
    pub boundary: u32,
    pub boundary_value: Option<BigUint>,
    /// Smallest swept `m_slot` from which every later value equals it, when
    /// at least two values take part.
    pub constant_from: Option<u32>,
    /// Whether all swept values with `m_slot >= boundary` agree. `None` when
    /// fewer than two swept values lie at or beyond the boundary.
    pub constant_beyond_boundary: Option<bool>,
}

/// Sweeps `m_slot` over `range` with the other dims fixed. The entry of
/// `base_dims` at `slot` is ignored.
pub fn stabilization_check(
    degrees: &[u32],
    base_dims: &[u32],
    slot: usize,
    range: RangeInclusive<u32>,
) -> Result<StabilizationReport> {
    if slot >= degrees.len() {
        return Err(Error::SlotOutOfRange {
            slot,
            k: degrees.len(),
        });
    }
    if degrees[slot] != 1 {
        return Err(Error::NotDegreeOneSlot {
            slot,
            degree: degrees[slot],
        });
    }
    let mut values = Vec::new();
    for m in range {
        let mut dims = base_dims.to_vec();
        if dims.len() != degrees.len() {
            return Err(Error::InvalidFormat(
                "degrees and dims differ in length".into(),
            ));
        }
        dims[slot] = m;
        let format = TensorFormat::new(degrees.to_vec(), dims)?;
        values.push((m, ed_degree(&format)));
    }
    let boundary: u32 = base_dims
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != slot)
        .map(|(_, &m)| m)
        .sum();
    let boundary_value = values
        .iter()
        .find(|(m, _)| *m == boundary)
        .map(|(_, v)| v.clone());

    let mut constant_from = None;
    if values.len() >= 2 {
        let last = &values[values.len() - 1].1;
        let mut start = values.len() - 1;
        while start > 0 && &values[start - 1].1 == last {
            start -= 1;
        }
        if start < values.len() - 1 {
            constant_from = Some(values[start].0);
        }
    }
    let beyond: Vec<&BigUint> = values
        .iter()
        .filter(|(m, _)| *m >= boundary)
        .map(|(_, v)| v)
        .collect();
    let constant_beyond_boundary =
        (beyond.len() >= 2).then(|| beyond.iter().all(|v| *v == beyond[0]));

    Ok(StabilizationReport {
        slot,
        values,
        boundary,
        boundary_value,
        constant_from,
        constant_beyond_boundary,
    })
}
