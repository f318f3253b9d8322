use super::{bott_support, BundleDescriptor, BundleFamily};
use crate::error::{Error, Result};
use crate::tensor::TensorFormat;
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One summand of `wedge^r E^* (x) Q_j(d_1, .., d_j - 1, .., d_k)`, indexed
/// by a composition `r_1 + ... + r_k = r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulSummand {
    pub r: u32,
    pub j: usize,
    pub composition: Vec<u32>,
    /// Slot `j` carries `wedge^{m_j - r_j} Q_j (x) Q_j(-d_j(r-1) + r_j - 2)`,
    /// every other slot `Omega^{r_l}(2 r_l - d_l(r-1))`.
    pub factors: Vec<BundleDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub r: u32,
    pub j: usize,
    pub composition: Vec<u32>,
    pub q_assignment: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub all_clear: bool,
    pub summands_checked: usize,
    pub witnesses: Vec<Witness>,
}

/// Compositions of `r` with `r_l <= m_l`, in descending lexicographic order.
fn bounded_compositions(r: u32, dims: &[u32]) -> Vec<Vec<u32>> {
    dims.iter()
        .map(|&m| (0..=m.min(r)).rev())
        .multi_cartesian_product()
        .filter(|c| c.iter().sum::<u32>() == r)
        .collect()
}

pub fn enumerate_koszul_summands(
    format: &TensorFormat,
    r: u32,
    j: usize,
) -> Result<Vec<KoszulSummand>> {
    let k = format.k();
    if j >= k {
        return Err(Error::SlotOutOfRange { slot: j, k });
    }
    let max = format.dims().iter().sum::<u32>() + 1;
    if r < 2 || r > max {
        return Err(Error::KoszulIndexOutOfRange { r, max });
    }
    let rm1 = i64::from(r) - 1;
    Ok(bounded_compositions(r, format.dims())
        .into_iter()
        .map(|composition| {
            let factors = (0..k)
                .map(|l| {
                    let (d, m, rl) = (
                        i64::from(format.degrees()[l]),
                        format.dims()[l],
                        composition[l],
                    );
                    let family = if l == j {
                        BundleFamily::WedgeQTensorQ {
                            r: rl,
                            t: -d * rm1 + i64::from(rl) - 2,
                        }
                    } else {
                        BundleFamily::CotangentPower {
                            r: rl,
                            t: 2 * i64::from(rl) - d * rm1,
                        }
                    };
                    BundleDescriptor::new(family, m).expect("r_l <= m_l")
                })
                .collect();
            KoszulSummand {
                r,
                j,
                composition,
                factors,
            }
        })
        .collect())
}

/// Searches every Koszul summand with `2 <= r <= sum m_l` for a choice of
/// nonvanishing degrees `q_l` with `sum q_l <= r - 1`.
pub fn vanishing_scan(format: &TensorFormat) -> VanishingReport {
    let top: u32 = format.dims().iter().sum();
    let cells: Vec<(u32, usize)> = (2..=top).cartesian_product(0..format.k()).collect();
    let per_cell: Vec<(usize, Vec<Witness>)> = cells
        .par_iter()
        .map(|&(r, j)| {
            let summands = enumerate_koszul_summands(format, r, j).expect("r and j in range");
            let mut witnesses = Vec::new();
            for s in &summands {
                let supports: Vec<Vec<u32>> = s
                    .factors
                    .iter()
                    .map(|b| bott_support(b).iter().collect())
                    .collect();
                for qs in supports
                    .iter()
                    .map(|v| v.iter().copied())
                    .multi_cartesian_product()
                {
                    if qs.iter().sum::<u32>() < r {
                        witnesses.push(Witness {
                            r,
                            j,
                            composition: s.composition.clone(),
                            q_assignment: qs,
                        });
                    }
                }
            }
            (summands.len(), witnesses)
        })
        .collect();
    let summands_checked = per_cell.iter().map(|(n, _)| n).sum();
    let witnesses: Vec<Witness> = per_cell.into_iter().flat_map(|(_, w)| w).collect();
    VanishingReport {
        all_clear: witnesses.is_empty(),
        summands_checked,
        witnesses,
    }
}
