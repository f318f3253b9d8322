//! The summary tables of nonvanishing cohomology, row by row, as stated.
//!
//! These are kept apart from [`bott_support`](super::bott_support), which
//! derives supports from weight pairings, so each route can check the
//! other. They do not agree everywhere: see [`table_one_disagreements`].

use super::{bott_support, BundleDescriptor, CohomologySupport};

/// One row of a table: the degree it asserts and whether it applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub line: u8,
    pub q: u32,
}

/// Rows of the table for `wedge^{m-r} Q (x) Q(t)` on `P^m` that apply:
///
/// 1. `q = 0`, `t >= 0`
/// 2. `q = r - 1`, `t = -r`, `1 <= r <= m`
/// 3. `q = r`, `t = -r - 1`, `0 <= r <= m - 1`
/// 4. `q = m - 1`, `t = -m - 1`, `0 <= r <= m - 1`
/// 5. `q = m`, `t <= -m - 2`
pub fn table_one_rows(m: u32, r: u32, t: i64) -> Vec<TableRow> {
    let (mi, ri) = (i64::from(m), i64::from(r));
    let mut rows = Vec::new();
    if t >= 0 {
        rows.push(TableRow { line: 1, q: 0 });
    }
    if t == -ri && (1..=m).contains(&r) {
        rows.push(TableRow { line: 2, q: r - 1 });
    }
    if t == -ri - 1 && r < m {
        rows.push(TableRow { line: 3, q: r });
    }
    if t == -mi - 1 && r < m {
        rows.push(TableRow { line: 4, q: m - 1 });
    }
    if t <= -mi - 2 {
        rows.push(TableRow { line: 5, q: m });
    }
    rows
}

pub fn table_one(m: u32, r: u32, t: i64) -> CohomologySupport {
    table_one_rows(m, r, t)
        .into_iter()
        .map(|row| row.q)
        .collect()
}

/// Rows of the table for `Omega^r(t)` on `P^m` that apply:
///
/// 1. `q = 0`, `t > r`
/// 2. `q = r`, `t = 0`
/// 3. `q = m`, `t < r - m`
pub fn table_two_rows(m: u32, r: u32, t: i64) -> Vec<TableRow> {
    let (mi, ri) = (i64::from(m), i64::from(r));
    let mut rows = Vec::new();
    if t > ri {
        rows.push(TableRow { line: 1, q: 0 });
    }
    if t == 0 {
        rows.push(TableRow { line: 2, q: r });
    }
    if t < ri - mi {
        rows.push(TableRow { line: 3, q: m });
    }
    rows
}

pub fn table_two(m: u32, r: u32, t: i64) -> CohomologySupport {
    table_two_rows(m, r, t)
        .into_iter()
        .map(|row| row.q)
        .collect()
}

/// A cell where the stated table and the weight computation differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub m: u32,
    pub r: u32,
    pub t: i64,
    pub table: CohomologySupport,
    pub computed: CohomologySupport,
}

/// Every `(m, r, t)` with `m <= max_m`, `0 <= r <= m`, `-m-4 <= t <= 3`
/// where [`table_one`] and [`bott_support`] differ.
///
/// Line 5 claims `H^m != 0` at `t = -m - 2` also for `r = 0`, where the
/// bundle is `Q(-m-1)` and all cohomology vanishes.
pub fn table_one_disagreements(max_m: u32) -> Vec<Disagreement> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for r in 0..=m {
            for t in -i64::from(m) - 4..=3 {
                let table = table_one(m, r, t);
                let computed =
                    bott_support(&BundleDescriptor::wedge_q_tensor_q(m, r, t).expect("valid"));
                if table != computed {
                    out.push(Disagreement {
                        m,
                        r,
                        t,
                        table,
                        computed,
                    });
                }
            }
        }
    }
    out
}
