//! Linear reconstruction of a tensor from its singular tuples.
//!
//! Every minor is linear in the tensor, so the tensors sharing a set of
//! singular tuples form the kernel of a complex matrix with one column per
//! monomial basis element. For general tensors this kernel should be the
//! line through the tensor, plus the q-product direction when every degree
//! is even.

use crate::eigen::SingularTuple;
use crate::error::{Error, Result};
use crate::poly::{rational_to_f64, Monomial};
use crate::tensor::{binomial, q_product_tensor, ComplexTensor, SymTensor, TensorFormat};
use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;
/// Gap ratios below this are flagged.
pub const GAP_THRESHOLD: f64 = 1e4;
/// Relative residual below which the q-product counts as a kernel member.
pub const MEMBERSHIP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QMembership {
    pub claimed: bool,
    /// Distance from the q-product to the kernel span.
    pub residual: f64,
    pub q_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub format: TensorFormat,
    pub num_points: usize,
    pub matrix_shape: (usize, usize),
    /// Descending, one per column; rows are zero-padded when fewer than
    /// columns, so the tail includes the structural zeros.
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    /// `sigma_rank / sigma_{rank+1}` (1-based). Infinite when
    /// `sigma_{rank+1}` is zero or absent; serialized as `null` then.
    #[serde(with = "infinite_as_null")]
    pub gap_ratio: f64,
    /// Orthonormal kernel vectors, coefficients in [`TensorFormat::basis`]
    /// order.
    pub kernel_basis: Vec<Vec<Complex64>>,
    /// Present when every degree is even.
    pub q_membership: Option<QMembership>,
    pub flags: Vec<String>,
}

impl FiberReport {
    pub fn kernel_dimension(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn kernel_tensors(&self) -> Vec<ComplexTensor> {
        self.kernel_basis
            .iter()
            .map(|v| SymTensor::from_coefficients(&self.format, v).expect("basis length"))
            .collect()
    }

    /// Relative distance from `t` to the kernel span.
    pub fn projection_residual(&self, t: &ComplexTensor) -> f64 {
        let v = DVector::from_vec(t.coefficients());
        relative_residual(&self.kernel_basis, &v)
    }
}

fn relative_residual(basis: &[Vec<Complex64>], v: &DVector<Complex64>) -> f64 {
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    projection_distance(basis, v) / norm
}

/// `|v - P v|` for the orthogonal projection onto an orthonormal basis.
fn projection_distance(basis: &[Vec<Complex64>], v: &DVector<Complex64>) -> f64 {
    let mut r = v.clone();
    for b in basis {
        let b = DVector::from_column_slice(b);
        let c = b.dotc(v);
        r -= b * c;
    }
    r.norm()
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Index of the largest-modulus coordinate, lowest index on ties.
fn chart_index(block: &[Complex64]) -> usize {
    let mut best = 0;
    for (i, z) in block.iter().enumerate() {
        if z.norm() > block[best].norm() {
            best = i;
        }
    }
    best
}

/// `d/dx_var` of a monomial evaluated at `x`.
fn monomial_partial(m: &Monomial, var: usize, x: &[Complex64]) -> Complex64 {
    let e = m.exponents()[var];
    if e == 0 {
        return Complex64::zero();
    }
    let mut out = Complex64::new(f64::from(e), 0.0);
    for (i, (&ei, &xi)) in m.exponents().iter().zip(x).enumerate() {
        let p = if i == var { ei - 1 } else { ei };
        if p > 0 {
            out *= xi.powu(p);
        }
    }
    out
}

fn check_tuple(format: &TensorFormat, t: &SingularTuple) -> Result<()> {
    if t.points.len() != format.k() {
        return Err(Error::TupleMismatch(format!(
            "{} blocks for k = {}",
            t.points.len(),
            format.k()
        )));
    }
    for (l, (p, &m)) in t.points.iter().zip(format.dims()).enumerate() {
        if p.len() != m as usize + 1 {
            return Err(Error::TupleMismatch(format!(
                "block {l} has {} coordinates, expected {}",
                p.len(),
                m + 1
            )));
        }
        if p.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::TupleMismatch(format!("block {l} is zero")));
        }
    }
    Ok(())
}

/// One row per (tuple, slot `l`, non-chart coordinate `a`): the functional
/// `T -> F_{l,a}(z) z_{l,b} - F_{l,b}(z) z_{l,a}` with `b` the tuple's chart
/// coordinate in block `l`, applied to each basis monomial.
pub fn conditions_matrix(
    format: &TensorFormat,
    tuples: &[SingularTuple],
) -> Result<DMatrix<Complex64>> {
    if tuples.is_empty() {
        return Err(Error::NoTuples);
    }
    for t in tuples {
        check_tuple(format, t)?;
    }
    let basis = format.basis();
    let layout = format.layout();
    let per_tuple: usize = format.dims().iter().map(|&m| m as usize).sum();
    let blocks: Vec<Vec<Vec<Complex64>>> = tuples
        .par_iter()
        .map(|t| {
            let x = t.joint();
            let mut rows = Vec::with_capacity(per_tuple);
            for (l, p) in t.points.iter().enumerate() {
                let offset = layout.block_range(l).start;
                let b = chart_index(p);
                for a in (0..p.len()).filter(|&a| a != b) {
                    let row = basis
                        .iter()
                        .map(|m| {
                            monomial_partial(m, offset + a, &x) * p[b]
                                - monomial_partial(m, offset + b, &x) * p[a]
                        })
                        .collect();
                    rows.push(row);
                }
            }
            rows
        })
        .collect();
    let rows: Vec<Vec<Complex64>> = blocks.into_iter().flatten().collect();
    Ok(DMatrix::from_fn(rows.len(), basis.len(), |i, j| rows[i][j]))
}

/// Rank, spectrum and kernel of [`conditions_matrix`].
pub fn fiber_dimension(format: &TensorFormat, tuples: &[SingularTuple]) -> Result<FiberReport> {
    let a = conditions_matrix(format, tuples)?;
    let (rows, cols) = a.shape();
    // pad so that the SVD returns a full set of right singular vectors
    let padded = if rows < cols {
        a.clone().resize_vertically(cols, Complex64::zero())
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();

    let top = sigma.first().copied().unwrap_or(0.0);
    let rank = sigma.iter().filter(|&&s| s > RANK_TOL * top).count();
    let gap_ratio = match (rank.checked_sub(1).map(|i| sigma[i]), sigma.get(rank)) {
        (Some(s), Some(&next)) if next > 0.0 => s / next,
        (None, _) => 1.0,
        _ => f64::INFINITY,
    };
    let kernel_basis: Vec<Vec<Complex64>> = order[rank..]
        .iter()
        .map(|&i| v_t.row(i).iter().map(|z| z.conj()).collect())
        .collect();

    let mut flags = Vec::new();
    if gap_ratio < GAP_THRESHOLD {
        flags.push("rank ambiguous".to_string());
    }
    let q_membership = format.all_even().then(|| {
        let q = q_product_tensor(format).expect("all degrees even");
        let v = DVector::from_iterator(
            cols,
            q.coefficients()
                .iter()
                .map(|c| Complex64::new(rational_to_f64(c), 0.0)),
        );
        let q_norm = v.norm();
        let residual = projection_distance(&kernel_basis, &v);
        QMembership {
            claimed: residual < MEMBERSHIP_TOL * q_norm,
            residual,
            q_norm,
        }
    });
    Ok(FiberReport {
        format: format.clone(),
        num_points: tuples.len(),
        matrix_shape: (rows, cols),
        singular_values: sigma,
        numerical_rank: rank,
        gap_ratio,
        kernel_basis,
        q_membership,
        flags,
    })
}

/// Dimension of the image of the map sending a tensor to its singular-tuple
/// locus: the projective dimension of the tensor space, less one more when
/// every degree is even.
pub fn image_dimension(format: &TensorFormat) -> Result<BigUint> {
    let report = format.validate();
    if !report.theorem_applicable {
        return Err(Error::TheoremNotApplicable(
            report.excluded_case.unwrap_or_default(),
        ));
    }
    let total = format
        .degrees()
        .iter()
        .zip(format.dims())
        .fold(BigUint::one(), |acc, (&d, &m)| acc * binomial(d + m, m));
    let drop: u32 = if format.all_even() { 2 } else { 1 };
    Ok(total - BigUint::from(drop))
}
