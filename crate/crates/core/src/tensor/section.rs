use super::{SymTensor, TensorFormat};
use crate::error::{Error, Result};
use crate::poly::{Coefficient, Polynomial};
use num_complex::Complex64;

/// One 2x2 minor `F_a * x_b - F_b * x_a` of a slot, with `a < b` (indices
/// local to the block).
#[derive(Debug, Clone, PartialEq)]
pub struct Minor<C: Coefficient> {
    pub a: usize,
    pub b: usize,
    pub poly: Polynomial<C>,
}

/// The section `s_T` as an explicit polynomial system: per slot, the block
/// gradient of `T` and every 2x2 minor of the matrix `[F_l; x_l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSection<C: Coefficient> {
    pub format: TensorFormat,
    pub gradients: Vec<Vec<Polynomial<C>>>,
    pub minors: Vec<Vec<Minor<C>>>,
}

impl<C: Coefficient> SingularSection<C> {
    pub fn is_zero(&self) -> bool {
        self.minors.iter().flatten().all(|m| m.poly.is_zero())
    }

    pub fn all_minors(&self) -> impl Iterator<Item = &Minor<C>> {
        self.minors.iter().flatten()
    }

    pub fn evaluate_minors(&self, joint_point: &[Complex64]) -> Result<Vec<Complex64>> {
        self.all_minors()
            .map(|m| m.poly.evaluate(joint_point))
            .collect()
    }
}

/// Unnormalized block gradients and all minors `a < b` in every slot.
pub fn build_singular_section<C: Coefficient>(t: &SymTensor<C>) -> SingularSection<C> {
    let format = t.format().clone();
    let layout = format.layout();
    let mut gradients = Vec::with_capacity(format.k());
    let mut minors = Vec::with_capacity(format.k());
    for l in 0..format.k() {
        let grad = t.polynomial().block_gradient(l).expect("slot in range");
        let vars: Vec<Polynomial<C>> = layout
            .block_range(l)
            .map(|v| Polynomial::var(&layout, v).expect("in range"))
            .collect();
        let n = grad.len();
        let mut slot = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                let poly = grad[a]
                    .mul(&vars[b])
                    .and_then(|lhs| lhs.sub(&grad[b].mul(&vars[a])?))
                    .expect("same layout");
                slot.push(Minor { a, b, poly });
            }
        }
        gradients.push(grad);
        minors.push(slot);
    }
    SingularSection {
        format,
        gradients,
        minors,
    }
}

/// The slot-`l` flattening applied to `v_1^{d_1} (x) .. v_l^{d_l - 1} .. (x)
/// v_k^{d_k}`, computed as the block gradient divided by `d_l`.
pub fn contract<C: Coefficient>(
    t: &SymTensor<C>,
    slot: usize,
    point: &[Vec<Complex64>],
) -> Result<Vec<Complex64>> {
    let format = t.format();
    if slot >= format.k() {
        return Err(Error::SlotOutOfRange {
            slot,
            k: format.k(),
        });
    }
    let joint = format.flatten_point(point)?;
    let d = f64::from(format.degrees()[slot]);
    t.polynomial()
        .block_gradient(slot)?
        .iter()
        .map(|g| g.evaluate(&joint).map(|v| v / d))
        .collect()
}

/// True iff `T` lies in the kernel of `T -> s_T`, i.e. every minor vanishes
/// identically. Exact for rational coefficients.
pub fn phi_kernel_check<C: Coefficient>(t: &SymTensor<C>) -> bool {
    build_singular_section(t).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rational, Monomial, RationalPoly};
    use crate::tensor::{q_product_tensor, RationalTensor};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fmt(d: &[u32], m: &[u32]) -> TensorFormat {
        TensorFormat::new(d.to_vec(), m.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn binary(coeffs: &[(u32, i64)], d: u32) -> RationalTensor {
        let f = fmt(&[d], &[1]);
        let p = RationalPoly::from_terms(
            &f.layout(),
            coeffs
                .iter()
                .map(|&(e0, n)| (Monomial::new(vec![e0, d - e0]), rational(n, 1))),
        )
        .unwrap();
        SymTensor::from_polynomial(&f, p).unwrap()
    }

    #[test]
    fn contract_examples() {
        let f = fmt(&[1, 1], &[1, 1]);
        let t = RationalTensor::from_block_terms(
            &f,
            vec![(vec![vec![1, 0], vec![1, 0]], rational(1, 1))],
        )
        .unwrap();
        // slot 0 contracted against y = (1, 0)
        let v = contract(
            &t,
            0,
            &[
                vec![c(0.3, 0.0), c(0.7, 0.0)],
                vec![c(1.0, 0.0), c(0.0, 0.0)],
            ],
        )
        .unwrap();
        assert_eq!(v, vec![c(1.0, 0.0), c(0.0, 0.0)]);

        let q = q_product_tensor(&fmt(&[2], &[1])).unwrap();
        let v = contract(&q, 0, &[vec![c(2.0, 1.0), c(-3.0, 0.5)]]).unwrap();
        assert_eq!(v, vec![c(2.0, 1.0), c(-3.0, 0.5)]);

        let cube = binary(&[(3, 1)], 3);
        let v = contract(&cube, 0, &[vec![c(1.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert_eq!(v, vec![c(1.0, 0.0), c(0.0, 0.0)]);

        assert!(contract(&cube, 1, &[vec![c(1.0, 0.0), c(1.0, 0.0)]]).is_err());
        assert!(contract(&cube, 0, &[vec![c(1.0, 0.0)]]).is_err());
    }

    #[test]
    fn section_examples() {
        let f = binary(&[(3, 1), (0, 1)], 3);
        let s = build_singular_section(&f);
        assert_eq!(s.minors[0].len(), 1);
        assert_eq!(
            s.minors[0][0].poly.to_canonical_string(),
            "3*x0^2*x1^1 + -3*x0^1*x1^2"
        );

        let q = q_product_tensor(&fmt(&[2], &[1])).unwrap();
        assert!(build_singular_section(&q).is_zero());

        let xy = RationalTensor::from_block_terms(
            &fmt(&[1, 1], &[1, 1]),
            vec![(vec![vec![1, 0], vec![1, 0]], rational(1, 1))],
        )
        .unwrap();
        let s = build_singular_section(&xy);
        // x0 y0 with variables (x0, x1, y0, y1)
        assert_eq!(s.minors[0][0].poly.to_canonical_string(), "1*x1^1*x2^1");
        assert_eq!(s.minors[1][0].poly.to_canonical_string(), "1*x0^1*x3^1");
    }

    #[test]
    fn minors_count_all_pairs() {
        let t = RationalTensor::random_integer(
            &fmt(&[2, 1], &[3, 2]),
            5,
            &mut ChaCha8Rng::seed_from_u64(1),
        );
        let s = build_singular_section(&t);
        assert_eq!(s.minors[0].len(), 6);
        assert_eq!(s.minors[1].len(), 3);
        assert!(s.all_minors().all(|m| m.a < m.b));
    }

    #[test]
    fn kernel_examples() {
        let q2 = q_product_tensor(&fmt(&[4], &[2])).unwrap();
        assert!(phi_kernel_check(&q2));
        let x4 = binary(&[(4, 1)], 4);
        assert!(!phi_kernel_check(&x4));
        let qq = q_product_tensor(&fmt(&[2, 2], &[1, 1])).unwrap();
        assert!(phi_kernel_check(&qq));
        let zero = x4.scale(&BigRational::from_integer(0.into()));
        assert!(phi_kernel_check(&zero));
    }

    #[test]
    fn minors_match_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (d, m) in [
            (vec![3], vec![2]),
            (vec![2, 1], vec![1, 2]),
            (vec![1, 1, 2], vec![1, 1, 1]),
        ] {
            let f = fmt(&d, &m);
            let t = RationalTensor::random_integer(&f, 7, &mut rng);
            let s = build_singular_section(&t);
            let point: Vec<Vec<Complex64>> = m
                .iter()
                .map(|&mi| {
                    (0..=mi)
                        .map(|i| c(0.3 + i as f64, -0.2 * i as f64))
                        .collect()
                })
                .collect();
            let joint = f.flatten_point(&point).unwrap();
            for l in 0..f.k() {
                let fl = contract(&t, l, &point).unwrap();
                let dl = f64::from(d[l]);
                for minor in &s.minors[l] {
                    let direct = minor.poly.evaluate(&joint).unwrap();
                    let via =
                        dl * (fl[minor.a] * point[l][minor.b] - fl[minor.b] * point[l][minor.a]);
                    assert!((direct - via).norm() <= 1e-10 * (1.0 + direct.norm()));
                }
            }
        }
    }
}
