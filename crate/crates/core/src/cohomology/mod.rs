//! Bott vanishing on products of projective spaces.
//!
//! Three bundle families on a single `P^m` are supported: line bundles
//! `O(t)`, twisted cotangent powers `Omega^r(t)`, and `wedge^{m-r} Q (x) Q(t)`
//! with `Q` the universal quotient bundle. Supports are computed from the
//! pairings `(lambda + delta, alpha_1 + ... + alpha_s)`, `s = 1..m`, of each
//! irreducible summand: a zero pairing means every cohomology group
//! vanishes, otherwise only `H^p` survives with `p` the number of negative
//! pairings.

mod koszul;
pub mod tables;

pub use koszul::{
    enumerate_koszul_summands, vanishing_scan, KoszulSummand, VanishingReport, Witness,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BundleFamily {
    /// `O(t)`.
    LineBundle { t: i64 },
    /// `Omega^r(t)`.
    CotangentPower { r: u32, t: i64 },
    /// `wedge^{m-r} Q (x) Q(t)`.
    WedgeQTensorQ { r: u32, t: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleDescriptor {
    #[serde(flatten)]
    pub family: BundleFamily,
    /// Dimension of the ambient projective space.
    pub m: u32,
}

impl BundleDescriptor {
    pub fn new(family: BundleFamily, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidBundle(
                "ambient dimension must be >= 1".into(),
            ));
        }
        match family {
            BundleFamily::CotangentPower { r, .. } | BundleFamily::WedgeQTensorQ { r, .. }
                if r > m =>
            {
                Err(Error::InvalidBundle(format!("r = {r} exceeds m = {m}")))
            }
            _ => Ok(Self { family, m }),
        }
    }

    pub fn line(m: u32, t: i64) -> Result<Self> {
        Self::new(BundleFamily::LineBundle { t }, m)
    }

    pub fn cotangent(m: u32, r: u32, t: i64) -> Result<Self> {
        Self::new(BundleFamily::CotangentPower { r, t }, m)
    }

    pub fn wedge_q_tensor_q(m: u32, r: u32, t: i64) -> Result<Self> {
        Self::new(BundleFamily::WedgeQTensorQ { r, t }, m)
    }
}

/// Degrees `q` with `H^q != 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohomologySupport(pub BTreeSet<u32>);

impl CohomologySupport {
    pub fn contains(&self, q: u32) -> bool {
        self.0.contains(&q)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl FromIterator<u32> for CohomologySupport {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        CohomologySupport(iter.into_iter().collect())
    }
}

/// `None` if some pairing vanishes (singular weight), otherwise the number of
/// negative pairings.
fn index_from_pairings(pairings: impl IntoIterator<Item = i64>) -> Option<u32> {
    let mut negative = 0;
    for p in pairings {
        if p == 0 {
            return None;
        }
        if p < 0 {
            negative += 1;
        }
    }
    Some(negative)
}

/// Pairings of `Q(t)`: `s + t` for `s < m`, `s + t + 1` at `s = m`.
fn quotient_pairings(m: i64, t: i64) -> impl Iterator<Item = i64> {
    (1..=m).map(move |s| if s < m { s + t } else { s + t + 1 })
}

/// Highest summand `lambda_{r+1} + lambda_m + t lambda_1` of
/// `wedge^{m-r} Q (x) Q(t)`, for `1 <= r <= m - 1`.
fn wedge_upper_pairings(m: i64, r: i64, t: i64) -> impl Iterator<Item = i64> {
    (1..=m).map(move |s| {
        if s <= r {
            s + t
        } else if s < m {
            s + t + 1
        } else {
            s + t + 2
        }
    })
}

/// Lower summand `lambda_r + t lambda_1`, for `1 <= r <= m - 1`.
fn wedge_lower_pairings(m: i64, r: i64, t: i64) -> impl Iterator<Item = i64> {
    (1..=m).map(move |s| if s < r { s + t } else { s + t + 1 })
}

/// `Omega^r(t)`: `s - 1 - r + t` for `s <= r`, `s - r + t` beyond.
fn cotangent_pairings(m: i64, r: i64, t: i64) -> impl Iterator<Item = i64> {
    (1..=m).map(move |s| if s <= r { s - 1 - r + t } else { s - r + t })
}

pub fn bott_support(b: &BundleDescriptor) -> CohomologySupport {
    let m = i64::from(b.m);
    match b.family {
        BundleFamily::LineBundle { t } => index_from_pairings((1..=m).map(|s| s + t))
            .into_iter()
            .collect(),
        BundleFamily::CotangentPower { r, t } => {
            index_from_pairings(cotangent_pairings(m, i64::from(r), t))
                .into_iter()
                .collect()
        }
        BundleFamily::WedgeQTensorQ { r, t } => {
            let r = i64::from(r);
            if r == m {
                // wedge^0 Q = O
                index_from_pairings(quotient_pairings(m, t))
                    .into_iter()
                    .collect()
            } else if r == 0 {
                // wedge^m Q = O(1)
                index_from_pairings(quotient_pairings(m, t + 1))
                    .into_iter()
                    .collect()
            } else {
                index_from_pairings(wedge_upper_pairings(m, r, t))
                    .into_iter()
                    .chain(index_from_pairings(wedge_lower_pairings(m, r, t)))
                    .collect()
            }
        }
    }
}

/// Whether `H^q` of the external tensor product is nonzero, by Kunneth.
pub fn kunneth_nonvanishing(factors: &[BundleDescriptor], q: u32) -> bool {
    let supports: Vec<CohomologySupport> = factors.iter().map(bott_support).collect();
    let mut reachable: BTreeSet<u32> = BTreeSet::from([0]);
    for s in &supports {
        reachable = reachable
            .iter()
            .flat_map(|&a| s.iter().map(move |b| a + b))
            .filter(|&v| v <= q)
            .collect();
        if reachable.is_empty() {
            return false;
        }
    }
    !factors.is_empty() && reachable.contains(&q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support(b: BundleDescriptor) -> Vec<u32> {
        bott_support(&b).iter().collect()
    }

    #[test]
    fn serre_anchor() {
        for m in 1..=6 {
            assert_eq!(
                support(BundleDescriptor::line(m, -(m as i64) - 1).unwrap()),
                vec![m]
            );
        }
    }

    #[test]
    fn hodge_anchor() {
        for m in 1..=6 {
            for r in 0..=m {
                assert_eq!(
                    support(BundleDescriptor::cotangent(m, r, 0).unwrap()),
                    vec![r]
                );
            }
        }
    }

    #[test]
    fn wedge_example() {
        let s = bott_support(&BundleDescriptor::wedge_q_tensor_q(3, 2, -2).unwrap());
        assert!(s.contains(1));
    }

    #[test]
    fn reductions_at_the_ends() {
        for m in 1..=5u32 {
            for t in -(m as i64) - 5..=4 {
                // r = m is Q(t), r = 0 is Q(t + 1)
                let q_t = support(BundleDescriptor::wedge_q_tensor_q(m, m, t).unwrap());
                let q_t1 = support(BundleDescriptor::wedge_q_tensor_q(m, 0, t - 1).unwrap());
                assert_eq!(q_t, q_t1);
                // Omega^0(t) = O(t)
                assert_eq!(
                    support(BundleDescriptor::cotangent(m, 0, t).unwrap()),
                    support(BundleDescriptor::line(m, t).unwrap())
                );
            }
        }
    }

    #[test]
    fn quotient_twisted_down_is_acyclic() {
        // Q(-m-1) has no cohomology: the Euler sequence map
        // H^m(O(-m-2)) -> H^m(O(-m-1))^{m+1} is an isomorphism.
        for m in 1..=6u32 {
            assert!(bott_support(
                &BundleDescriptor::wedge_q_tensor_q(m, m, -(m as i64) - 1).unwrap()
            )
            .is_empty());
            assert!(bott_support(
                &BundleDescriptor::wedge_q_tensor_q(m, 0, -(m as i64) - 2).unwrap()
            )
            .is_empty());
        }
    }

    #[test]
    fn invalid_ranges() {
        assert!(BundleDescriptor::cotangent(2, 3, 0).is_err());
        assert!(BundleDescriptor::wedge_q_tensor_q(2, 3, 0).is_err());
        assert!(BundleDescriptor::line(0, 0).is_err());
    }

    #[test]
    fn kunneth_examples() {
        let o = |m, t| BundleDescriptor::line(m, t).unwrap();
        assert!(kunneth_nonvanishing(&[o(1, 0), o(1, 0)], 0));
        assert!(!kunneth_nonvanishing(&[o(1, -2), o(1, 0)], 0));
        assert!(kunneth_nonvanishing(&[o(1, -2), o(1, 0)], 1));
        let om = BundleDescriptor::cotangent(2, 1, 0).unwrap();
        assert!(kunneth_nonvanishing(&[om, om], 2));
        assert!(!kunneth_nonvanishing(&[om, om], 1));
        assert!(!kunneth_nonvanishing(&[], 0));
    }

    #[test]
    fn supports_are_bounded() {
        for m in 1..=6u32 {
            for t in -(m as i64) - 6..=6 {
                for r in 0..=m {
                    let w = bott_support(&BundleDescriptor::wedge_q_tensor_q(m, r, t).unwrap());
                    assert!(w.len() <= 2 && w.iter().all(|q| q <= m));
                    let c = bott_support(&BundleDescriptor::cotangent(m, r, t).unwrap());
                    assert!(c.len() <= 1 && c.iter().all(|q| q <= m));
                }
                let l = bott_support(&BundleDescriptor::line(m, t).unwrap());
                let expected: Vec<u32> = if t >= 0 {
                    vec![0]
                } else if t < -(m as i64) {
                    vec![m]
                } else {
                    vec![]
                };
                assert_eq!(l.iter().collect::<Vec<_>>(), expected);
            }
        }
    }
}
