//! Singular tuples of a given tensor.
//!
//! [`binary_eigenvectors`] is exact up to the final root extraction and
//! reports multiplicities; [`solve_singular_tuples`] is a seeded
//! random-restart Newton solver for small general formats.

mod binary;
mod newton;

pub use binary::{binary_eigenvectors, UniPoly};
pub use newton::{solve_singular_tuples, SolveConfig, SolveResult};

use crate::poly::Coefficient;
use crate::tensor::{build_singular_section, SymTensor};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One projective point per block, each scaled so that its largest-modulus
/// coordinate is exactly 1 (lowest index on ties).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularTuple {
    pub points: Vec<Vec<Complex64>>,
    /// Max modulus over every evaluated minor.
    pub residual: f64,
    /// Exact multiplicity when known (binary forms), 1 otherwise.
    pub multiplicity: u32,
}

impl SingularTuple {
    /// Normalizes `points`; `None` if a block is zero or not finite.
    pub fn new(points: Vec<Vec<Complex64>>) -> Option<Self> {
        let points = points
            .into_iter()
            .map(normalize_block)
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            points,
            residual: 0.0,
            multiplicity: 1,
        })
    }

    pub fn joint(&self) -> Vec<Complex64> {
        self.points.iter().flatten().copied().collect()
    }

    /// Max over blocks of the sine of the Hermitian angle between
    /// representatives.
    pub fn distance(&self, other: &SingularTuple) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(u, v)| hermitian_sine(u, v))
            .fold(0.0, f64::max)
    }

    /// Coordinates rounded to a `1e-8` grid, used for canonical ordering.
    pub fn canonical_key(&self) -> Vec<i64> {
        self.points
            .iter()
            .flatten()
            .flat_map(|z| [round_grid(z.re), round_grid(z.im)])
            .collect()
    }
}

fn round_grid(x: f64) -> i64 {
    (x * 1e8).round() as i64
}

pub fn normalize_block(mut v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() == 0.0 {
        return None;
    }
    for z in v.iter_mut() {
        *z /= pivot;
    }
    v[best] = Complex64::new(1.0, 0.0);
    Some(v)
}

pub fn hermitian_sine(u: &[Complex64], v: &[Complex64]) -> f64 {
    let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let uv: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let cos2 = (uv.norm_sqr() / (uu * vv)).min(1.0);
    (1.0 - cos2).max(0.0).sqrt()
}

/// Max modulus of all minors of `s_T` at the tuple's (normalized)
/// coordinates.
pub fn residual<C: Coefficient>(t: &SymTensor<C>, tuple: &SingularTuple) -> f64 {
    let section = build_singular_section(t);
    let joint = tuple.joint();
    section
        .evaluate_minors(&joint)
        .expect("tuple matches format")
        .into_iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Keeps the first of every group of tuples closer than `tol`.
pub fn dedup_tuples(tuples: Vec<SingularTuple>, tol: f64) -> Vec<SingularTuple> {
    let mut out: Vec<SingularTuple> = Vec::new();
    for t in tuples {
        if out.iter().all(|u| u.distance(&t) >= tol) {
            out.push(t);
        }
    }
    out
}

/// Whether two lists describe the same projective point set up to `tol`.
pub fn same_point_set(a: &[SingularTuple], b: &[SingularTuple], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| x.distance(y) < tol))
        && b.iter().all(|y| a.iter().any(|x| x.distance(y) < tol))
}
