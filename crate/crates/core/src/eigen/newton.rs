use super::{dedup_tuples, normalize_block, SingularTuple};
use crate::ed::ed_degree;
use crate::poly::Polynomial;
use crate::tensor::{build_singular_section, ComplexTensor, SingularSection};
use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Restarts are evaluated in parallel batches of this size and merged in
/// index order, so the outcome does not depend on the thread count.
const BATCH: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub seed: u64,
    /// Defaults to `200 * target`.
    pub max_restarts: Option<usize>,
    pub newton_iters: usize,
    pub residual_tol: f64,
    pub dedup_tol: f64,
}

impl SolveConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            max_restarts: None,
            newton_iters: 50,
            residual_tol: 1e-10,
            dedup_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Distinct tuples, sorted by [`SingularTuple::canonical_key`].
    pub tuples: Vec<SingularTuple>,
    /// Whether as many tuples were found as the expected count.
    pub complete: bool,
    pub target: BigUint,
    pub restarts_used: usize,
}

/// Sparse polynomial flattened for repeated evaluation.
#[derive(Debug, Clone)]
struct Compiled(Vec<(Vec<(usize, i32)>, Complex64)>);

impl Compiled {
    fn new(p: &Polynomial<Complex64>) -> Self {
        Compiled(
            p.terms()
                .map(|(m, c)| {
                    let vars = m
                        .exponents()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e as i32))
                        .collect();
                    (vars, *c)
                })
                .collect(),
        )
    }

    fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .map(|(vars, c)| vars.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }
}

/// Block gradients and Hessian rows of `f`, indexed by global variable.
struct System {
    blocks: Vec<std::ops::Range<usize>>,
    grad: Vec<Compiled>,
    hess: Vec<Vec<Compiled>>,
    section: SingularSection<Complex64>,
}

impl System {
    fn new(t: &ComplexTensor) -> Self {
        let layout = t.format().layout();
        let n = layout.num_vars();
        let f = t.polynomial();
        let grads: Vec<_> = (0..n)
            .map(|i| f.partial_derivative(i).expect("in range"))
            .collect();
        let hess = grads
            .iter()
            .map(|g| {
                (0..n)
                    .map(|j| Compiled::new(&g.partial_derivative(j).expect("in range")))
                    .collect()
            })
            .collect();
        Self {
            blocks: (0..layout.num_blocks())
                .map(|l| layout.block_range(l))
                .collect(),
            grad: grads.iter().map(Compiled::new).collect(),
            hess,
            section: build_singular_section(t),
        }
    }

    /// Unknowns: every coordinate except the chart coordinate of each block.
    fn unknowns(&self, chart: &[usize]) -> Vec<usize> {
        self.blocks
            .iter()
            .zip(chart)
            .flat_map(|(r, &b)| r.clone().filter(move |&v| v != b))
            .collect()
    }

    fn residual(&self, x: &[Complex64]) -> f64 {
        self.section
            .all_minors()
            .map(|m| m.poly.evaluate(x).expect("length").norm())
            .fold(0.0, f64::max)
    }

    /// `E_{l,a} = G_a - G_b x_a` and its Jacobian in the unknowns.
    fn equations(
        &self,
        x: &[Complex64],
        chart: &[usize],
        unknowns: &[usize],
    ) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let n = unknowns.len();
        let g: Vec<Complex64> = self.grad.iter().map(|p| p.eval(x)).collect();
        let mut e = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        let mut row = 0;
        for (range, &b) in self.blocks.iter().zip(chart) {
            for a in range.clone().filter(|&a| a != b) {
                e[row] = g[a] - g[b] * x[a];
                for (col, &v) in unknowns.iter().enumerate() {
                    let mut entry = self.hess[a][v].eval(x) - self.hess[b][v].eval(x) * x[a];
                    if v == a {
                        entry -= g[b];
                    }
                    jac[(row, col)] = entry;
                }
                row += 1;
            }
        }
        (e, jac)
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn solve_linear(jac: DMatrix<Complex64>, rhs: &DVector<Complex64>) -> Option<DVector<Complex64>> {
    let lu = jac.lu();
    let diag = lu.u().diagonal();
    let max = diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min = diag.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if max == 0.0 || min / max < 1e-13 {
        return None;
    }
    lu.solve(rhs)
}

/// One Newton run from a complex-Gaussian start, in the chart where each
/// block of the start has its largest coordinate.
fn restart(sys: &System, config: &SolveConfig, index: usize) -> Option<SingularTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let start: Vec<Vec<Complex64>> = sys
        .blocks
        .iter()
        .map(|r| r.clone().map(|_| gaussian(&mut rng)).collect())
        .collect();
    let mut x = Vec::with_capacity(sys.grad.len());
    let mut chart = Vec::with_capacity(sys.blocks.len());
    for (block, range) in start.into_iter().zip(&sys.blocks) {
        let block = normalize_block(block)?;
        let b = block
            .iter()
            .position(|z| *z == Complex64::new(1.0, 0.0))
            .expect("normalized");
        chart.push(range.start + b);
        x.extend(block);
    }
    let unknowns = sys.unknowns(&chart);
    for _ in 0..config.newton_iters {
        let (e, jac) = sys.equations(&x, &chart, &unknowns);
        let step = solve_linear(jac, &e)?;
        let mut size = 0.0f64;
        for (i, &v) in unknowns.iter().enumerate() {
            x[v] -= step[i];
            size = size.max(step[i].norm());
        }
        let norm = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !norm.is_finite() || norm > 1e8 {
            return None;
        }
        if size < 1e-14 * norm.max(1.0) {
            break;
        }
    }
    let points = sys.blocks.iter().map(|r| x[r.clone()].to_vec()).collect();
    let mut tuple = SingularTuple::new(points)?;
    tuple.residual = sys.residual(&tuple.joint());
    (tuple.residual < config.residual_tol).then_some(tuple)
}

/// Seeded random-restart Newton search for the singular tuples of `t`.
///
/// Stops as soon as the expected generic count is reached or after
/// `max_restarts`. The result depends only on `t` and `config`.
pub fn solve_singular_tuples(t: &ComplexTensor, config: &SolveConfig) -> SolveResult {
    let target = ed_degree(t.format());
    let target_n = target.to_usize().unwrap_or(usize::MAX);
    let max_restarts = config
        .max_restarts
        .unwrap_or_else(|| target_n.saturating_mul(200));
    let sys = System::new(t);
    let mut found: Vec<SingularTuple> = Vec::new();
    let mut used = 0;
    'outer: while used < max_restarts && found.len() < target_n {
        let end = (used + BATCH).min(max_restarts);
        let batch: Vec<Option<SingularTuple>> = (used..end)
            .into_par_iter()
            .map(|i| restart(&sys, config, i))
            .collect();
        for candidate in batch {
            used += 1;
            if let Some(c) = candidate {
                if found.iter().all(|f| f.distance(&c) >= config.dedup_tol) {
                    found.push(c);
                    if found.len() >= target_n {
                        break 'outer;
                    }
                }
            }
        }
    }
    let mut tuples = dedup_tuples(found, config.dedup_tol);
    tuples.sort_by_cached_key(SingularTuple::canonical_key);
    SolveResult {
        complete: BigUint::from(tuples.len()) == target,
        tuples,
        target,
        restarts_used: used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{binary_eigenvectors, same_point_set};
    use crate::poly::{rational, Monomial, RationalPoly};
    use crate::tensor::{RationalTensor, SymTensor, TensorFormat};

    fn fmt(d: &[u32], m: &[u32]) -> TensorFormat {
        TensorFormat::new(d.to_vec(), m.to_vec()).unwrap()
    }

    fn random(format: &TensorFormat, seed: u64) -> ComplexTensor {
        ComplexTensor::random_gaussian(format, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn three_qubit_tensor() {
        let t = random(&fmt(&[1, 1, 1], &[1, 1, 1]), 1);
        let r = solve_singular_tuples(&t, &SolveConfig::with_seed(7));
        assert!(r.complete);
        assert_eq!(r.tuples.len(), 6);
        assert!(r.tuples.iter().all(|x| x.residual <= 1e-10));
    }

    #[test]
    fn binary_cubic_matches_exact_roots() {
        let f = fmt(&[3], &[1]);
        let p = RationalPoly::from_terms(
            &f.layout(),
            vec![
                (Monomial::new(vec![3, 0]), rational(1, 1)),
                (Monomial::new(vec![0, 3]), rational(1, 1)),
            ],
        )
        .unwrap();
        let t = SymTensor::from_polynomial(&f, p).unwrap();
        let exact = binary_eigenvectors(&t).unwrap();
        let r = solve_singular_tuples(&t.to_complex(), &SolveConfig::with_seed(3));
        assert!(r.complete);
        assert!(same_point_set(&r.tuples, &exact, 1e-6));
    }

    #[test]
    fn ternary_cubic_has_seven() {
        let t = random(&fmt(&[3], &[2]), 11);
        let r = solve_singular_tuples(&t, &SolveConfig::with_seed(5));
        assert_eq!(r.tuples.len(), 7);
    }

    #[test]
    fn agrees_with_binary_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for i in 0..20u64 {
            let d = 2 + (i % 7) as u32;
            let f = fmt(&[d], &[1]);
            let t = RationalTensor::random_integer(&f, 9, &mut rng);
            let Ok(exact) = binary_eigenvectors(&t) else {
                continue;
            };
            if exact.iter().any(|e| e.multiplicity > 1) {
                continue;
            }
            let r = solve_singular_tuples(&t.to_complex(), &SolveConfig::with_seed(i));
            assert!(same_point_set(&r.tuples, &exact, 1e-6), "case {i}");
        }
    }

    #[test]
    fn conjugate_tensor_gives_conjugate_tuples() {
        let t = random(&fmt(&[2, 1], &[1, 1]), 4);
        let conj = SymTensor::from_polynomial(
            t.format(),
            Polynomial::from_terms(
                &t.format().layout(),
                t.polynomial().terms().map(|(m, c)| (m.clone(), c.conj())),
            )
            .unwrap(),
        )
        .unwrap();
        let a = solve_singular_tuples(&t, &SolveConfig::with_seed(1));
        let b = solve_singular_tuples(&conj, &SolveConfig::with_seed(2));
        assert!(a.complete && b.complete);
        let conj_a: Vec<SingularTuple> = a
            .tuples
            .iter()
            .map(|x| {
                SingularTuple::new(
                    x.points
                        .iter()
                        .map(|p| p.iter().map(|z| z.conj()).collect())
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        assert!(same_point_set(&conj_a, &b.tuples, 1e-6));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let t = random(&fmt(&[2, 2], &[1, 1]), 8);
        let config = SolveConfig::with_seed(42);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| solve_singular_tuples(&t, &config));
        let b = four.install(|| solve_singular_tuples(&t, &config));
        assert_eq!(a.tuples, b.tuples);
        assert_eq!(a.restarts_used, b.restarts_used);
    }
}
