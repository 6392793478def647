//! The Bochner curvature term on diagonal real (1,1)-forms.
//!
//! In a frame diagonalizing the form, the term reduces to the quadratic
//! Σ_{i<j} (a_i - a_j)^2 `R[i,i,j,j]` in the form's eigenvalues; only the
//! off-diagonal orthogonal bisectional components enter, so nonnegativity of
//! the cone forces the term nonnegative. The overall positive convention
//! constant is fixed to one — sign and vanishing locus are all that matter
//! downstream.

use crate::error::{Error, Result};
use crate::tensor::KahlerCurvatureTensor;

/// Diagonal real (1,1)-form, stored as its eigenvalue vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOneOneForm {
    coefficients: Vec<f64>,
}

impl DiagonalOneOneForm {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|a| !a.is_finite()) {
            return Err(Error::Precondition(
                "form coefficients must be finite".into(),
            ));
        }
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Σ_{i<j} (a_i - a_j)^2 `R[i,i,j,j]`.
pub fn curvature_term(t: &KahlerCurvatureTensor, form: &DiagonalOneOneForm) -> Result<f64> {
    let n = t.n();
    if form.len() != n {
        return Err(Error::Dimension {
            tensor: n,
            vector: form.len(),
        });
    }
    let a = form.coefficients();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = a[i] - a[j];
            acc += gap * gap * t.entry(i, i, j, j).re;
        }
    }
    Ok(acc)
}

/// One inconsistent pair: the form separates the indices but the
/// corresponding off-diagonal component did not vanish.
#[derive(Debug, Clone)]
pub struct InconsistentPair {
    pub i: usize,
    pub j: usize,
    pub gap_squared: f64,
    pub component: f64,
}

#[derive(Debug, Clone)]
pub struct ParallelConsequenceReport {
    /// Whether the vanishing argument applies (the curvature term itself is
    /// below tolerance). When false the report is vacuous.
    pub applicable: bool,
    pub curvature_term: f64,
    pub inconsistent_pairs: Vec<InconsistentPair>,
}

impl ParallelConsequenceReport {
    pub fn consistent(&self) -> bool {
        self.inconsistent_pairs.is_empty()
    }
}

/// For a tensor inside the orthogonal-bisectional cone, a vanishing
/// curvature term with separated eigenvalues forces every separated
/// off-diagonal component `R[i,i,j,j]` to vanish: each summand is a product
/// of nonnegative factors. Reports any pair where that fails.
pub fn parallel_consequence_check(
    t: &KahlerCurvatureTensor,
    form: &DiagonalOneOneForm,
    tol: f64,
) -> Result<ParallelConsequenceReport> {
    let value = curvature_term(t, form)?;
    let applicable = value <= tol;
    let mut inconsistent_pairs = Vec::new();
    if applicable {
        let a = form.coefficients();
        for i in 0..t.n() {
            for j in (i + 1)..t.n() {
                let gap_squared = (a[i] - a[j]).powi(2);
                let component = t.entry(i, i, j, j).re;
                if gap_squared > tol && component > tol {
                    inconsistent_pairs.push(InconsistentPair {
                        i,
                        j,
                        gap_squared,
                        component,
                    });
                }
            }
        }
    }
    Ok(ParallelConsequenceReport {
        applicable,
        curvature_term: value,
        inconsistent_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::rng;

    fn form(v: &[f64]) -> DiagonalOneOneForm {
        DiagonalOneOneForm::new(v.to_vec()).unwrap()
    }

    #[test]
    fn fubini_study_unit_gap() {
        let t = models::fubini_study(2, 4.0);
        assert!((curvature_term(&t, &form(&[1.0, 0.0])).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn constant_forms_and_flat_tensors_vanish() {
        let mut r = rng::seeded(3);
        let t = models::random_tensor(&mut r, 3, 1.0);
        assert_eq!(curvature_term(&t, &form(&[0.7, 0.7, 0.7])).unwrap(), 0.0);
        let flat = models::flat(4);
        assert_eq!(
            curvature_term(&flat, &form(&[1.0, -2.0, 0.5, 3.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn length_mismatch_is_structural() {
        let t = models::flat(3);
        assert!(curvature_term(&t, &form(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn quadratic_homogeneity_and_permutation_equivariance() {
        let mut r = rng::seeded(5);
        let t = models::random_tensor(&mut r, 3, 1.0);
        let a = [0.3, -1.2, 0.9];
        let base = curvature_term(&t, &form(&a)).unwrap();
        let lam = 2.5;
        let scaled = curvature_term(&t, &form(&a.map(|x| lam * x))).unwrap();
        assert!((scaled - lam * lam * base).abs() < 1e-10 * (1.0 + base.abs()));

        // Swap indices 0 and 1 in both the form and the tensor frame.
        let perm = [1usize, 0, 2];
        let tp = KahlerCurvatureTensor::from_fn(3, |x, y, z, w| {
            t.entry(perm[x], perm[y], perm[z], perm[w])
        });
        let ap = [a[1], a[0], a[2]];
        let permuted = curvature_term(&tp, &form(&ap)).unwrap();
        assert!((permuted - base).abs() < 1e-12);
    }

    #[test]
    fn polarization_recovers_every_off_diagonal_component() {
        // q(e_i) + q(e_j) - q(e_i + e_j) = 2 R[i,i,j,j], so the quadratic
        // vanishes identically iff the off-diagonal components do.
        let mut r = rng::seeded(7);
        let t = models::random_tensor(&mut r, 4, 1.0);
        let n = 4;
        let basis = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        for i in 0..n {
            for j in (i + 1)..n {
                let qi = curvature_term(&t, &form(&basis(i))).unwrap();
                let qj = curvature_term(&t, &form(&basis(j))).unwrap();
                let mut both = basis(i);
                both[j] = 1.0;
                let qij = curvature_term(&t, &form(&both)).unwrap();
                let recovered = 0.5 * (qi + qj - qij);
                assert!(
                    (recovered - t.entry(i, i, j, j).re).abs() < 1e-10,
                    "pair ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn product_zero_term_reports_consistent() {
        // Mixed components of a product vanish, so the term is zero and the
        // consequence report is empty.
        let t = models::counterexample_product(1);
        let report = parallel_consequence_check(&t, &form(&[1.0, 2.0]), 1e-10).unwrap();
        assert!(report.applicable);
        assert!(report.curvature_term.abs() < 1e-14);
        assert!(report.consistent());
    }

    #[test]
    fn positive_term_is_vacuous() {
        let t = models::fubini_study(2, 4.0);
        let report = parallel_consequence_check(&t, &form(&[1.0, 2.0]), 1e-10).unwrap();
        assert!(!report.applicable);
        assert!((report.curvature_term - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nonzero_component_makes_zero_term_unreachable_with_distinct_eigenvalues() {
        // Block tensor with R[0,0,1,1] = 0.5 (full symmetry orbit): any
        // distinct-eigenvalue form gives a strictly positive term.
        let t = KahlerCurvatureTensor::from_fn(2, |a, b, c, d| {
            if (a == b && c == d && a != c) || (a == d && b == c && a != b) {
                num_complex::Complex64::new(0.5, 0.0)
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            }
        });
        let v = curvature_term(&t, &form(&[2.0, -1.0])).unwrap();
        assert!((v - 9.0 * 0.5).abs() < 1e-12);
        assert!(v > 0.0);
    }
}
