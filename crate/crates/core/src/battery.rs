//! The reproduction battery: eight end-to-end checks, each reporting
//! pass/fail with the numbers behind it.

use crate::cohomology::tables::{table_one, table_two};
use crate::cohomology::{bott_support, vanishing_scan, BundleDescriptor};
use crate::ed::{ed_degree, stabilization_check};
use crate::eigen::{solve_singular_tuples, SolveConfig};
use crate::fiber::{fiber_dimension, image_dimension, GAP_THRESHOLD, MEMBERSHIP_TOL};
use crate::harmonic::{harmonic_decompose, harmonic_dimension, laplacian};
use crate::poly::{
    monomials_of_degree, quadric, rational, Polynomial, RationalPoly, VariableLayout,
};
use crate::tensor::{
    binomial, phi_kernel_check, ComplexTensor, RationalTensor, SymTensor, TensorFormat,
};
use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub seconds: f64,
    /// Time budget for the criterion, if any.
    pub budget_seconds: Option<f64>,
    pub details: Vec<String>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {}: {} ({}, {:.2}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds
        )
    }
}

struct Check {
    details: Vec<String>,
    ok: bool,
}

impl Check {
    fn new() -> Self {
        Self {
            details: Vec::new(),
            ok: true,
        }
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.details.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }
}

fn timed(
    id: u8,
    title: &str,
    budget: Option<f64>,
    body: impl FnOnce(&mut Check),
) -> CriterionResult {
    let start = Instant::now();
    let mut check = Check::new();
    body(&mut check);
    let seconds = start.elapsed().as_secs_f64();
    if let Some(b) = budget {
        check.expect(seconds < b, format!("runtime {seconds:.2}s exceeds {b}s"));
    }
    CriterionResult {
        id,
        title: title.to_string(),
        passed: check.ok,
        seconds,
        budget_seconds: budget,
        details: check.details,
    }
}

fn fmt(d: &[u32], m: &[u32]) -> TensorFormat {
    TensorFormat::new(d.to_vec(), m.to_vec()).expect("valid format")
}

/// Formats of the fiber dichotomy check, as `(degrees, dims)`.
pub const FIBER_FORMATS: [(&[u32], &[u32]); 8] = [
    (&[3], &[1]),
    (&[5], &[1]),
    (&[3], &[2]),
    (&[4], &[1]),
    (&[4], &[2]),
    (&[1, 1, 1], &[1, 1, 1]),
    (&[2, 1], &[1, 1]),
    (&[2, 2], &[1, 1]),
];

pub fn ed_degrees() -> CriterionResult {
    timed(1, "ED-degree reproduction", None, |c| {
        let start = Instant::now();
        let segre = ed_degree(&fmt(&[1, 1, 1], &[1, 1, 1]));
        let elapsed = start.elapsed().as_secs_f64();
        c.expect(
            segre == BigUint::from(6u32),
            format!("(1,1,1;1,1,1) gave {segre}"),
        );
        c.expect(elapsed < 1.0, format!("(1,1,1;1,1,1) took {elapsed:.3}s"));
        for p in 2..=7u32 {
            for q in 2..=7u32 {
                let v = ed_degree(&fmt(&[1, 1], &[p - 1, q - 1]));
                c.expect(
                    v == BigUint::from(p.min(q)),
                    format!("{p}x{q} matrix gave {v}"),
                );
            }
        }
        for d in 1..=6u32 {
            for m in 1..=4u32 {
                let expected: BigUint = (0..=m).map(|i| BigUint::from(d - 1).pow(i)).sum();
                let v = ed_degree(&fmt(&[d], &[m]));
                c.expect(
                    v == expected,
                    format!("(d={d}, m={m}) gave {v}, expected {expected}"),
                );
            }
        }
        c.note(format!("(1,1,1;1,1,1) -> {segre} in {elapsed:.4}s"));
    })
}

pub fn stabilization() -> CriterionResult {
    timed(2, "boundary-format stabilization", Some(5.0), |c| {
        let report = stabilization_check(&[1, 1, 1], &[1, 1, 0], 2, 1..=5).expect("degree-1 slot");
        let values: Vec<String> = report
            .values
            .iter()
            .map(|(m, v)| format!("m3={m}: {v}"))
            .collect();
        c.note(values.join(", "));
        let beyond: Vec<&BigUint> = report
            .values
            .iter()
            .filter(|(m, _)| *m >= 2)
            .map(|(_, v)| v)
            .collect();
        c.expect(beyond.iter().all_equal(), "values for m3 in 2..=5 differ");
        c.expect(
            report.constant_beyond_boundary == Some(true),
            "stabilization report disagrees",
        );
        let at_one = &report.values[0].1;
        let direct = ed_degree(&fmt(&[1, 1, 1], &[1, 1, 1]));
        c.expect(*at_one == direct, "value at m3=1 is not the formula's");
        c.note(format!(
            "m3=1 {} the stable value",
            if at_one == beyond[0] {
                "equals"
            } else {
                "differs from"
            }
        ));
    })
}

/// Outcome of one random tensor in the fiber check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberTrial {
    pub complete: bool,
    pub kernel_dimension: Option<usize>,
    pub gap_ratio: Option<f64>,
    pub input_residual: Option<f64>,
    pub q_residual: Option<f64>,
    pub ok: bool,
}

/// Solves, reconstructs and checks one random tensor of `format`.
pub fn fiber_trial(format: &TensorFormat, tensor_seed: u64, solver_seed: u64) -> FiberTrial {
    let t = ComplexTensor::random_gaussian(format, &mut ChaCha8Rng::seed_from_u64(tensor_seed));
    let solved = solve_singular_tuples(&t, &SolveConfig::with_seed(solver_seed));
    if !solved.complete {
        return FiberTrial {
            complete: false,
            kernel_dimension: None,
            gap_ratio: None,
            input_residual: None,
            q_residual: None,
            ok: false,
        };
    }
    let report = fiber_dimension(format, &solved.tuples).expect("tuples match format");
    let expected = if format.all_even() { 2 } else { 1 };
    let input_residual = report.projection_residual(&t);
    let q_residual = report.q_membership.as_ref().map(|q| q.residual / q.q_norm);
    let ok = report.kernel_dimension() == expected
        && report.gap_ratio > GAP_THRESHOLD
        && input_residual < MEMBERSHIP_TOL
        && q_residual.is_none_or(|r| r < MEMBERSHIP_TOL);
    FiberTrial {
        complete: true,
        kernel_dimension: Some(report.kernel_dimension()),
        gap_ratio: Some(report.gap_ratio),
        input_residual: Some(input_residual),
        q_residual,
        ok,
    }
}

pub fn fiber_dichotomy(seed: u64) -> CriterionResult {
    timed(3, "fiber dichotomy", Some(300.0), |c| {
        for (fi, (d, m)) in FIBER_FORMATS.iter().enumerate() {
            let format = fmt(d, m);
            let trials: Vec<FiberTrial> = (0..10u64)
                .map(|i| {
                    let s = seed.wrapping_mul(1000).wrapping_add(fi as u64 * 100 + i);
                    fiber_trial(&format, s, s)
                })
                .collect();
            let complete = trials.iter().filter(|t| t.complete).count();
            let bad = trials.iter().filter(|t| t.complete && !t.ok).count();
            let min_gap = trials
                .iter()
                .filter_map(|t| t.gap_ratio)
                .fold(f64::INFINITY, f64::min);
            let max_res = trials
                .iter()
                .filter_map(|t| t.input_residual)
                .chain(trials.iter().filter_map(|t| t.q_residual))
                .fold(0.0, f64::max);
            c.note(format!(
                "({d:?}; {m:?}): complete {complete}/10, kernel dims {:?}, min gap {min_gap:.3e}, max residual {max_res:.3e}",
                trials.iter().filter_map(|t| t.kernel_dimension).collect::<Vec<_>>()
            ));
            c.expect(
                complete >= 8,
                format!("({d:?}; {m:?}) complete on only {complete}/10"),
            );
            c.expect(
                bad == 0,
                format!("({d:?}; {m:?}) {bad} complete runs violate the dichotomy"),
            );
        }
    })
}

pub fn phi_kernel(seed: u64) -> CriterionResult {
    timed(4, "exact kernel of phi", Some(10.0), |c| {
        for d in [2u32, 4, 6] {
            for m in 1..=3u32 {
                let f = fmt(&[d], &[m]);
                let q: RationalPoly = quadric(&f.layout(), 0).pow(d / 2);
                let t = SymTensor::from_polynomial(&f, q).expect("degree d");
                c.expect(phi_kernel_check(&t), format!("q^{} on P^{m}", d / 2));
            }
        }
        for d in [[2u32, 2], [2, 4]] {
            for m in (1..=2u32).cartesian_product(1..=2u32) {
                let f = fmt(&d, &[m.0, m.1]);
                let l = f.layout();
                let p: RationalPoly = quadric(&l, 0)
                    .pow(d[0] / 2)
                    .mul(&quadric(&l, 1).pow(d[1] / 2))
                    .expect("same layout");
                let t = SymTensor::from_polynomial(&f, p).expect("multidegree");
                c.expect(phi_kernel_check(&t), format!("q-product on {d:?}, {m:?}"));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let odd: [(&[u32], &[u32]); 5] = [
            (&[3], &[1]),
            (&[3], &[2]),
            (&[5], &[1]),
            (&[2, 1], &[1, 1]),
            (&[1, 1, 1], &[1, 1, 1]),
        ];
        let mut falses = 0;
        for i in 0..20 {
            let (d, m) = odd[i % odd.len()];
            let t = RationalTensor::random_integer(&fmt(d, m), 10, &mut rng);
            if !phi_kernel_check(&t) {
                falses += 1;
            }
        }
        c.note(format!(
            "{falses}/20 random odd-degree tensors outside the kernel"
        ));
        c.expect(
            falses == 20,
            "a random odd-degree tensor passed the kernel check",
        );
    })
}

pub fn bott_tables() -> CriterionResult {
    timed(5, "Bott tables", Some(5.0), |c| {
        let mut mismatches_one = Vec::new();
        let mut mismatches_two = 0;
        for m in 1..=6u32 {
            for t in -i64::from(m) - 4..=3 {
                for r in 0..=m {
                    let computed =
                        bott_support(&BundleDescriptor::wedge_q_tensor_q(m, r, t).expect("valid"));
                    let table = table_one(m, r, t);
                    if computed != table {
                        mismatches_one.push(format!(
                            "m={m} r={r} t={t}: computed {:?}, table {:?}",
                            computed.0, table.0
                        ));
                    }
                    let computed =
                        bott_support(&BundleDescriptor::cotangent(m, r, t).expect("valid"));
                    if computed != table_two(m, r, t) {
                        mismatches_two += 1;
                    }
                }
            }
            let serre = bott_support(&BundleDescriptor::line(m, -i64::from(m) - 1).expect("valid"));
            c.expect(
                serre.iter().collect::<Vec<_>>() == vec![m],
                format!("Serre anchor on P^{m}"),
            );
        }
        c.expect(
            mismatches_one.is_empty(),
            format!("{} cells differ from the wedge table", mismatches_one.len()),
        );
        c.expect(
            mismatches_two == 0,
            format!("{mismatches_two} cells differ from the cotangent table"),
        );
        for line in mismatches_one {
            c.note(line);
        }
    })
}

pub fn vanishing() -> CriterionResult {
    timed(6, "vanishing scan", Some(120.0), |c| {
        let mut applicable = 0;
        for k in 1..=3usize {
            let values: Vec<Vec<u32>> = (0..k)
                .map(|_| (1..=3u32).collect::<Vec<_>>())
                .multi_cartesian_product()
                .collect();
            for d in &values {
                for m in &values {
                    let f = fmt(d, m);
                    if !f.validate().theorem_applicable {
                        continue;
                    }
                    applicable += 1;
                    let report = vanishing_scan(&f);
                    c.expect(
                        report.all_clear,
                        format!("({d:?}; {m:?}) has {} witnesses", report.witnesses.len()),
                    );
                }
            }
        }
        c.note(format!("{applicable} applicable formats scanned"));
        let bad = vanishing_scan(&fmt(&[1, 1, 1], &[1, 1, 3]));
        c.expect(
            !bad.all_clear && !bad.witnesses.is_empty(),
            "(1,1,1; 1,1,3) shows no witness",
        );
        if let Some(w) = bad.witnesses.first() {
            c.note(format!(
                "(1,1,1; 1,1,3): {} witnesses, first r={} j={} composition {:?} q {:?}",
                bad.witnesses.len(),
                w.r,
                w.j,
                w.composition,
                w.q_assignment
            ));
        }
    })
}

/// A dense random single-block form with small rational coefficients.
fn random_form<R: Rng>(rng: &mut R, d: u32, m: u32) -> RationalPoly {
    let layout = VariableLayout::new(vec![m as usize + 1]).expect("m >= 1");
    let terms = monomials_of_degree(m as usize + 1, d)
        .into_iter()
        .map(|mono| {
            (
                mono,
                rational(rng.random_range(-9..=9), rng.random_range(1..=4)),
            )
        });
    Polynomial::from_terms(&layout, terms).expect("layout")
}

pub fn harmonic(seed: u64) -> CriterionResult {
    timed(7, "harmonic decomposition", None, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..50 {
            let d = 1 + (i % 6) as u32;
            let m = 1 + ((i / 6) % 3) as u32;
            let f = random_form(&mut rng, d, m);
            let dec = harmonic_decompose(&f, d).expect("homogeneous");
            let back = dec
                .reconstruct()
                .unwrap_or_else(|| RationalPoly::zero(f.layout()));
            c.expect(back == f, format!("reconstruction failed at d={d} m={m}"));
            for (j, h) in &dec.components {
                c.expect(
                    laplacian(h).expect("single block").is_zero(),
                    format!("h_{j} not harmonic at d={d} m={m}"),
                );
            }
        }
        for d in 2..=6u32 {
            for m in 1..=3u32 {
                let expected = binomial(d + m, m) - binomial(d - 2 + m, m);
                let got = BigUint::from(harmonic_dimension(d, m));
                c.expect(
                    got == expected,
                    format!("dim H_{d} on P^{m}: {got} vs {expected}"),
                );
            }
        }
        c.note("50 forms decomposed, 15 dimension identities checked");
    })
}

pub fn image_dimensions() -> CriterionResult {
    timed(8, "image-dimension formulas", None, |c| {
        let formats: [(&[u32], &[u32]); 10] = [
            (&[3], &[2]),
            (&[4], &[2]),
            (&[5], &[1]),
            (&[6], &[3]),
            (&[2, 2], &[1, 1]),
            (&[2, 1], &[1, 1]),
            (&[1, 1, 1], &[1, 1, 1]),
            (&[2, 2, 2], &[1, 2, 1]),
            (&[1, 2], &[2, 3]),
            (&[4, 2], &[2, 2]),
        ];
        for (d, m) in formats {
            let f = fmt(d, m);
            let ambient = BigUint::from(f.basis().len());
            let expected = if d.iter().all(|x| x % 2 == 0) {
                ambient - 2u32
            } else {
                ambient - BigUint::one()
            };
            match image_dimension(&f) {
                Ok(v) => c.expect(
                    v == expected,
                    format!("({d:?}; {m:?}) gave {v}, expected {expected}"),
                ),
                Err(e) => c.expect(false, format!("({d:?}; {m:?}): {e}")),
            }
        }
    })
}

/// Runs every criterion in order.
pub fn run_battery(seed: u64) -> Vec<CriterionResult> {
    vec![
        ed_degrees(),
        stabilization(),
        fiber_dichotomy(seed),
        phi_kernel(seed),
        bott_tables(),
        vanishing(),
        harmonic(seed),
        image_dimensions(),
    ]
}
