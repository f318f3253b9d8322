//! Reference computations that share no code with the library routines
//! they check.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::BTreeSet;

/// Cohomology of `S_b Q (x) O(a)` on `P^m` by Borel-Weil-Bott on the full
/// `GL_{m+1}` weight: `None` when `weight + rho` has a repeated entry,
/// otherwise the number of inversions (the only nonzero degree).
pub fn bwb(b: &[i64], a: i64) -> Option<u32> {
    let m = b.len() as i64;
    let mut g: Vec<i64> = b
        .iter()
        .enumerate()
        .map(|(i, bi)| m + 1 - (i as i64 + 1) + bi)
        .collect();
    g.push(-a);
    let distinct: BTreeSet<i64> = g.iter().copied().collect();
    if distinct.len() != g.len() {
        return None;
    }
    let mut inv = 0;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if g[i] < g[j] {
                inv += 1;
            }
        }
    }
    Some(inv)
}

fn padded(m: u32, head: &[i64]) -> Vec<i64> {
    let mut v = head.to_vec();
    v.resize(m as usize, 0);
    v
}

/// Support of `wedge^{m-r} Q (x) Q(t)` from its irreducible summands.
pub fn bwb_wedge(m: u32, r: u32, t: i64) -> BTreeSet<u32> {
    let s = m - r;
    let mut parts: Vec<Vec<i64>> = Vec::new();
    if s == 0 {
        parts.push(padded(m, &[1]));
    } else {
        let mut hook = vec![2];
        hook.extend(std::iter::repeat_n(1, s as usize - 1));
        parts.push(padded(m, &hook));
        if s < m {
            parts.push(padded(m, &vec![1; s as usize + 1]));
        }
    }
    parts.iter().filter_map(|b| bwb(b, t)).collect()
}

/// Support of `Omega^r(t) = wedge^r Q^* (t - r)`, with `wedge^r Q^*` the
/// Schur functor of `(0, .., 0, -1, .., -1)`.
pub fn bwb_cotangent(m: u32, r: u32, t: i64) -> BTreeSet<u32> {
    let mut b = vec![0i64; (m - r) as usize];
    b.extend(std::iter::repeat_n(-1, r as usize));
    bwb(&b, t - r as i64).into_iter().collect()
}

pub fn bwb_line(m: u32, t: i64) -> BTreeSet<u32> {
    bwb(&vec![0; m as usize], t).into_iter().collect()
}

/// Rank of a random complex `p x q` matrix by counting nonzero singular
/// values: the number of its singular pairs.
pub fn matrix_singular_pairs(p: usize, q: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::<Complex64>::from_fn(p, q, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let s = a.singular_values();
    let top = s.max();
    s.iter().filter(|&&x| x > 1e-10 * top).count()
}

/// `((d-1)^{m+1} - 1) / (d-2)`, or `m + 1` when `d = 2`.
pub fn symmetric_count(d: u32, m: u32) -> BigUint {
    match d {
        1 => BigUint::from(1u32),
        2 => BigUint::from(m + 1),
        _ => (BigUint::from(d - 1).pow(m + 1) - 1u32) / BigUint::from(d - 2),
    }
}

/// `n choose r` by a running product.
pub fn choose(n: u32, r: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
