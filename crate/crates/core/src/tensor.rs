//! Kähler curvature tensors in a fixed unitary frame.
//!
//! The central object is [`KahlerCurvatureTensor`]: a dense complex 4-index
//! array holding components `R[a,b,c,d]` read as R_{a b̄ c d̄}. The invariants
//! are
//!
//! * unbarred-pair exchange: `R[a,b,c,d] = R[c,b,a,d]`
//! * barred-pair exchange:   `R[a,b,c,d] = R[a,d,c,b]`
//! * Hermitian symmetry:     `conj(R[a,b,c,d]) = R[b,a,d,c]`
//!
//! Together these generate a symmetry group of order eight. Constructors
//! symmetrize their input by averaging over the full orbit, so every value
//! built through the public API validates exactly; arithmetic downstream only
//! has to keep the drift small and re-symmetrize where it matters.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Default absolute tolerance for symmetry validation.
pub const VALIDATE_TOL: f64 = 1e-10;

/// Tolerance for orthonormal-frame invariants.
pub const FRAME_TOL: f64 = 1e-12;

/// Hermitian inner product ⟨x, y⟩ = Σ x_i conj(y_i).
pub fn hdot(x: &CVector, y: &CVector) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

type IndexOp = fn([usize; 4]) -> [usize; 4];

/// The eight symmetry-group elements: an index permutation plus a
/// conjugation flag. Applying `op` to a tuple gives the slot the same
/// curvature value (conjugated when flagged) must live in.
const SYMMETRY_OPS: [(IndexOp, bool); 8] = [
    (|[a, b, c, d]| [a, b, c, d], false),
    (|[a, b, c, d]| [c, b, a, d], false),
    (|[a, b, c, d]| [a, d, c, b], false),
    (|[a, b, c, d]| [c, d, a, b], false),
    (|[a, b, c, d]| [b, a, d, c], true),
    (|[a, b, c, d]| [b, c, d, a], true),
    (|[a, b, c, d]| [d, a, b, c], true),
    (|[a, b, c, d]| [d, c, b, a], true),
];

/// Which invariant a defect was found against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    UnbarredPair,
    BarredPair,
    Hermitian,
}

/// One validation failure: the index tuple checked and the defect magnitude.
#[derive(Debug, Clone)]
pub struct Violation {
    pub kind: SymmetryKind,
    pub indices: [usize; 4],
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KahlerCurvatureTensor {
    n: usize,
    entries: Vec<C64>,
}

#[inline(always)]
fn idx(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

impl KahlerCurvatureTensor {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "complex dimension must be at least 1");
        Self {
            n,
            entries: vec![C64::new(0.0, 0.0); n * n * n * n],
        }
    }

    /// Builds a tensor from a flat entry array in `(a, b, c, d)` row-major
    /// order, then symmetrizes by orbit averaging.
    pub fn from_entries(n: usize, entries: Vec<C64>) -> Result<Self> {
        let expected = n * n * n * n;
        if n == 0 || entries.len() != expected {
            return Err(Error::Shape {
                n,
                expected,
                got: entries.len(),
            });
        }
        let mut t = Self { n, entries };
        t.symmetrize();
        Ok(t)
    }

    /// Builds a tensor from raw entries without symmetrizing, rejecting the
    /// input when it violates the invariants beyond `tol`. Used by the
    /// loader, which must preserve file entries bit-exactly.
    pub fn from_entries_checked(n: usize, entries: Vec<C64>, tol: f64) -> Result<Self> {
        let expected = n * n * n * n;
        if n == 0 || entries.len() != expected {
            return Err(Error::Shape {
                n,
                expected,
                got: entries.len(),
            });
        }
        let t = Self { n, entries };
        let violations = t.validate(tol);
        if violations.is_empty() {
            Ok(t)
        } else {
            let v = &violations[0];
            Err(Error::Symmetry(format!(
                "{} violations beyond {:.1e}; first: {:?} at {:?} defect {:.3e}",
                violations.len(),
                tol,
                v.kind,
                v.indices,
                v.defect
            )))
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> C64) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        entries[idx(n, a, b, c, d)] = f(a, b, c, d);
                    }
                }
            }
        }
        let mut t = Self { n, entries };
        t.symmetrize();
        t
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, a: usize, b: usize, c: usize, d: usize) -> C64 {
        self.entries[idx(self.n, a, b, c, d)]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [C64] {
        &mut self.entries
    }

    /// Projects onto the symmetric subspace by averaging over the orbit.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        let old = self.entries.clone();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = C64::new(0.0, 0.0);
                        for (op, conj) in SYMMETRY_OPS {
                            let [p, q, r, s] = op([a, b, c, d]);
                            let v = old[idx(n, p, q, r, s)];
                            acc += if conj { v.conj() } else { v };
                        }
                        self.entries[idx(n, a, b, c, d)] = acc / 8.0;
                    }
                }
            }
        }
    }

    /// Largest defect against any of the three generating invariants.
    pub fn symmetry_defect(&self) -> f64 {
        self.validate(-1.0)
            .iter()
            .map(|v| v.defect)
            .fold(0.0, f64::max)
    }

    /// Scans all index tuples against the three invariants and reports every
    /// defect above `tol`. Each unordered relation is reported once, at the
    /// lexicographically smaller tuple.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let t = [a, b, c, d];
                        let v = self.entries[idx(n, a, b, c, d)];
                        let checks = [
                            (SymmetryKind::UnbarredPair, [c, b, a, d], false),
                            (SymmetryKind::BarredPair, [a, d, c, b], false),
                            (SymmetryKind::Hermitian, [b, a, d, c], true),
                        ];
                        for (kind, img, conj) in checks {
                            if t > img {
                                continue;
                            }
                            let w = self.entries[idx(n, img[0], img[1], img[2], img[3])];
                            let defect = if conj {
                                (v.conj() - w).norm()
                            } else {
                                (v - w).norm()
                            };
                            if defect > tol {
                                out.push(Violation {
                                    kind,
                                    indices: t,
                                    defect,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.validate(tol).is_empty()
    }

    /// Raw complex value of R(X, X̄, Y, Ȳ); real for a validating tensor.
    pub fn bisectional_raw(&self, x: &CVector, y: &CVector) -> C64 {
        let n = self.n;
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(y.len(), n);
        // Outer products keep the quadruple loop to one multiply per term.
        let mut px = vec![C64::new(0.0, 0.0); n * n];
        let mut py = vec![C64::new(0.0, 0.0); n * n];
        for a in 0..n {
            for b in 0..n {
                px[a * n + b] = x[a] * x[b].conj();
                py[a * n + b] = y[a] * y[b].conj();
            }
        }
        let mut acc = C64::new(0.0, 0.0);
        for (ab, &w) in px.iter().enumerate() {
            if w.norm_sqr() == 0.0 {
                continue;
            }
            let base = ab * n * n;
            for (cd, &v) in py.iter().enumerate() {
                acc += self.entries[base + cd] * w * v;
            }
        }
        acc
    }

    /// R(X, X̄, Y, Ȳ) = Σ `R[a,b,c,d]` X_a conj(X_b) Y_c conj(Y_d), returned
    /// as its real part. A large imaginary residue means the tensor does not
    /// actually carry the Hermitian symmetry and is reported as an error.
    pub fn bisectional(&self, x: &CVector, y: &CVector) -> Result<f64> {
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::Dimension {
                tensor: self.n,
                vector: if x.len() != self.n { x.len() } else { y.len() },
            });
        }
        let v = self.bisectional_raw(x, y);
        let scale = 1.0 + v.re.abs();
        if v.im.abs() > 1e-9 * scale {
            return Err(Error::Symmetry(format!(
                "bisectional value has imaginary residue {:.3e} (scale {:.3e})",
                v.im, scale
            )));
        }
        Ok(v.re)
    }

    /// Holomorphic sectional curvature R(X, X̄, X, X̄) at a unit vector.
    pub fn holomorphic_sectional(&self, x: &CVector) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                tensor: self.n,
                vector: x.len(),
            });
        }
        let norm = hdot(x, x).re;
        if (norm - 1.0).abs() > FRAME_TOL {
            return Err(Error::Precondition(format!(
                "holomorphic sectional curvature needs a unit vector, |X|^2 = {norm}"
            )));
        }
        self.bisectional(x, x)
    }

    /// Changes the unitary frame:
    /// `R'[a,b,c,d] = Σ U[a,p] conj(U[b,q]) U[c,r] conj(U[d,s]) R[p,q,r,s]`.
    /// Row `a` of `U` holds the components
    /// of the new frame vector e'_a in the old frame.
    pub fn conjugate_frame(&self, u: &CMatrix) -> Result<Self> {
        let n = self.n;
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::Dimension {
                tensor: n,
                vector: u.nrows(),
            });
        }
        let uh = u * u.adjoint();
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                defect = defect.max((uh[(i, j)] - target).norm());
            }
        }
        if defect > 1e-10 {
            return Err(Error::Precondition(format!(
                "frame change is not unitary: max |UU* - I| = {defect:.3e}"
            )));
        }

        // Contract one index at a time; four O(n^5) passes.
        let nn = n * n * n * n;
        let mut cur = self.entries.clone();
        let mut next = vec![C64::new(0.0, 0.0); nn];
        // slot 0 (unbarred): multiply by U
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = C64::new(0.0, 0.0);
                        for p in 0..n {
                            acc += u[(a, p)] * cur[idx(n, p, b, c, d)];
                        }
                        next[idx(n, a, b, c, d)] = acc;
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        // slot 1 (barred): multiply by conj(U)
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = C64::new(0.0, 0.0);
                        for q in 0..n {
                            acc += u[(b, q)].conj() * cur[idx(n, a, q, c, d)];
                        }
                        next[idx(n, a, b, c, d)] = acc;
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        // slot 2 (unbarred)
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = C64::new(0.0, 0.0);
                        for r in 0..n {
                            acc += u[(c, r)] * cur[idx(n, a, b, r, d)];
                        }
                        next[idx(n, a, b, c, d)] = acc;
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        // slot 3 (barred)
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = C64::new(0.0, 0.0);
                        for s in 0..n {
                            acc += u[(d, s)].conj() * cur[idx(n, a, b, c, s)];
                        }
                        next[idx(n, a, b, c, d)] = acc;
                    }
                }
            }
        }
        let mut out = Self { n, entries: next };
        out.symmetrize();
        Ok(out)
    }

    /// Ricci contraction `Ric[a,b]` = Σ_m `R[a,b,m,m]`, Hermitized against
    /// floating-point drift.
    pub fn ricci(&self) -> HermitianMatrix {
        let n = self.n;
        let mut m = CMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for mu in 0..n {
                    acc += self.entries[idx(n, a, b, mu, mu)];
                }
                m[(a, b)] = acc;
            }
        }
        HermitianMatrix::hermitize(m)
    }

    /// Scalar curvature Σ_{a,b} `R[a,a,b,b]`; agrees with the Ricci trace.
    pub fn scalar(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                acc += self.entries[idx(n, a, a, b, b)].re;
            }
        }
        let trace = self.ricci().trace();
        // Rounding in the two summation orders scales with the entries,
        // not with the (possibly cancelling) result.
        let scale = 1.0 + acc.abs() + self.max_abs() * (n * n) as f64;
        assert!(
            (acc - trace).abs() <= 1e-10 * scale,
            "scalar/Ricci-trace mismatch: {acc} vs {trace}"
        );
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Restriction to a subset of frame indices (the block subtensor).
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        let mut out = Self::zeros(k);
        for (a, &pa) in indices.iter().enumerate() {
            for (b, &pb) in indices.iter().enumerate() {
                for (c, &pc) in indices.iter().enumerate() {
                    for (d, &pd) in indices.iter().enumerate() {
                        out.entries[idx(k, a, b, c, d)] = self.entries[idx(self.n, pa, pb, pc, pd)];
                    }
                }
            }
        }
        out
    }

    pub(crate) fn scale_in_place(&mut self, s: f64) {
        for z in &mut self.entries {
            *z *= s;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut t = self.clone();
        t.scale_in_place(s);
        t
    }

    /// self + s * other, entrywise.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension {
                tensor: self.n,
                vector: other.n,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a + b * s)
            .collect();
        Ok(Self { n: self.n, entries })
    }
}

/// Pair of Hermitian-orthonormal complex vectors, the argument of the
/// orthogonal bisectional curvature.
#[derive(Debug, Clone)]
pub struct OrthonormalTwoFrame {
    x: CVector,
    y: CVector,
}

impl OrthonormalTwoFrame {
    pub fn new(x: CVector, y: CVector) -> Result<Self> {
        Self::with_tolerance(x, y, FRAME_TOL)
    }

    /// Accepts frames whose orthonormality defect is below `tol`; used by
    /// the second-order variation curves, which are orthonormal only to
    /// third order in the curve parameter.
    pub fn with_tolerance(x: CVector, y: CVector, tol: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Dimension {
                tensor: x.len(),
                vector: y.len(),
            });
        }
        let nx = (hdot(&x, &x).re - 1.0).abs();
        let ny = (hdot(&y, &y).re - 1.0).abs();
        let xy = hdot(&x, &y).norm();
        let defect = nx.max(ny).max(xy);
        if defect > tol {
            return Err(Error::Precondition(format!(
                "frame defect {defect:.3e} exceeds tolerance {tol:.1e}"
            )));
        }
        Ok(Self { x, y })
    }

    /// Gram–Schmidt from two raw vectors.
    pub fn orthonormalize(x: CVector, y: CVector) -> Result<Self> {
        let nx = hdot(&x, &x).re.sqrt();
        if nx < 1e-14 {
            return Err(Error::Degenerate(
                "first frame vector is numerically zero".into(),
            ));
        }
        let x = x / C64::new(nx, 0.0);
        let mut y = y.clone();
        let overlap = hdot(&y, &x);
        y -= x.clone() * overlap;
        let ny = hdot(&y, &y).re.sqrt();
        if ny < 1e-14 {
            return Err(Error::Degenerate(
                "frame vectors are numerically dependent".into(),
            ));
        }
        let y = y / C64::new(ny, 0.0);
        Self::new(x, y)
    }

    pub fn x(&self) -> &CVector {
        &self.x
    }

    pub fn y(&self) -> &CVector {
        &self.y
    }
}

/// Complex square matrix equal to its conjugate transpose.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let defect = (&mat - mat.adjoint()).map(|z| z.norm()).max();
        if defect > FRAME_TOL {
            return Err(Error::Precondition(format!(
                "matrix is not Hermitian: max |M - M*| = {defect:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    /// (M + M*) / 2.
    pub fn hermitize(mat: CMatrix) -> Self {
        let adj = mat.adjoint();
        Self {
            mat: (mat + adj) * C64::new(0.5, 0.0),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.mat.clone().symmetric_eigenvalues();
        let mut v: Vec<f64> = eig.iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::rng;
    use rand::SeedableRng;

    #[test]
    fn zero_tensor_validates() {
        let t = KahlerCurvatureTensor::zeros(3);
        assert!(t.validate(VALIDATE_TOL).is_empty());
    }

    #[test]
    fn symmetrized_random_entries_validate() {
        let mut r = rng::seeded(7);
        for n in 1..=4 {
            let entries = (0..n * n * n * n)
                .map(|_| rng::standard_complex(&mut r))
                .collect();
            let t = KahlerCurvatureTensor::from_entries(n, entries).unwrap();
            assert!(t.validate(VALIDATE_TOL).is_empty(), "n = {n}");
        }
    }

    #[test]
    fn constructed_defect_is_reported() {
        // R[0,0,1,1] = 1 but R[1,1,0,0] = 0 breaks the pair symmetries.
        let n = 2;
        let mut entries = vec![C64::new(0.0, 0.0); 16];
        entries[idx(n, 0, 0, 1, 1)] = C64::new(1.0, 0.0);
        let t = KahlerCurvatureTensor { n, entries };
        let violations = t.validate(1e-10);
        assert!(!violations.is_empty());
        assert!(violations
            .iter()
            .any(|v| v.indices == [0, 0, 1, 1] && (v.defect - 1.0).abs() < 1e-15));
        assert!(KahlerCurvatureTensor::from_entries_checked(n, t.entries.clone(), 1e-10).is_err());
    }

    #[test]
    fn shape_mismatch_is_structural_error() {
        let err = KahlerCurvatureTensor::from_entries(2, vec![C64::new(1.0, 0.0); 3]).unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }

    #[test]
    fn bisectional_fubini_study_basis_pair() {
        let t = models::fubini_study(2, 4.0);
        let e0 = rng::basis_vector(2, 0);
        let e1 = rng::basis_vector(2, 1);
        assert!((t.bisectional(&e0, &e1).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bisectional_flat_is_zero() {
        let t = models::flat(3);
        let mut r = rng::seeded(1);
        let x = rng::random_unit_vector(&mut r, 3);
        let y = rng::random_unit_vector(&mut r, 3);
        assert_eq!(t.bisectional(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn bisectional_across_product_blocks_vanishes() {
        let t = models::counterexample_product(2);
        let e0 = rng::basis_vector(3, 0);
        let e1 = rng::basis_vector(3, 1);
        assert!(t.bisectional(&e0, &e1).unwrap().abs() < 1e-14);
    }

    #[test]
    fn bisectional_dimension_mismatch() {
        let t = models::flat(3);
        let x = rng::basis_vector(2, 0);
        assert!(matches!(
            t.bisectional(&x, &x),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn holomorphic_sectional_values() {
        let fs = models::fubini_study(2, 4.0);
        let mut r = rng::seeded(3);
        for _ in 0..10 {
            let x = rng::random_unit_vector(&mut r, 2);
            assert!((fs.holomorphic_sectional(&x).unwrap() - 4.0).abs() < 1e-10);
        }
        let surf = models::surface(-4.0);
        let e0 = rng::basis_vector(1, 0);
        assert!((surf.holomorphic_sectional(&e0).unwrap() + 4.0).abs() < 1e-14);
        let flat = models::flat(2);
        let x = rng::random_unit_vector(&mut r, 2);
        assert_eq!(flat.holomorphic_sectional(&x).unwrap(), 0.0);
    }

    #[test]
    fn holomorphic_sectional_rejects_non_unit() {
        let fs = models::fubini_study(2, 4.0);
        let x = rng::basis_vector(2, 0) * C64::new(1.5, 0.0);
        assert!(matches!(
            fs.holomorphic_sectional(&x),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fubini_study_is_unitarily_invariant() {
        let t = models::fubini_study(3, 4.0);
        let mut r = rng::seeded(11);
        let u = rng::random_unitary(&mut r, 3);
        let tc = t.conjugate_frame(&u).unwrap();
        let diff = t
            .entries()
            .iter()
            .zip(tc.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10, "max entry difference {diff}");
    }

    #[test]
    fn conjugation_by_identity_is_identity() {
        let t = models::counterexample_product(2);
        let id = CMatrix::identity(3, 3);
        let tc = t.conjugate_frame(&id).unwrap();
        for (a, b) in t.entries().iter().zip(tc.entries().iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn conjugation_preserves_scalar_and_ricci_spectrum() {
        let mut r = rng::seeded(23);
        let t = models::random_tensor(&mut r, 3, 1.0);
        let u = rng::random_unitary(&mut r, 3);
        let tc = t.conjugate_frame(&u).unwrap();
        assert!((t.scalar() - tc.scalar()).abs() < 1e-9);
        let e1 = t.ricci().eigenvalues();
        let e2 = tc.ricci().eigenvalues();
        for (a, b) in e1.iter().zip(e2.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn conjugation_is_a_group_action() {
        let mut r = rng::seeded(29);
        let t = models::random_tensor(&mut r, 3, 1.0);
        let u = rng::random_unitary(&mut r, 3);
        let v = rng::random_unitary(&mut r, 3);
        let lhs = t.conjugate_frame(&u).unwrap().conjugate_frame(&v).unwrap();
        let rhs = t.conjugate_frame(&(&v * &u)).unwrap();
        for (a, b) in lhs.entries().iter().zip(rhs.entries().iter()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn conjugation_rejects_non_unitary() {
        let t = models::flat(2);
        let m = CMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(matches!(t.conjugate_frame(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn ricci_of_fubini_study_is_scalar_multiple_of_identity() {
        let t = models::fubini_study(2, 4.0);
        let ric = t.ricci();
        for a in 0..2 {
            for b in 0..2 {
                let expect = if a == b { 6.0 } else { 0.0 };
                assert!((ric.matrix()[(a, b)] - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ricci_of_product_is_block_diagonal() {
        let a = models::surface(-4.0);
        let b = models::fubini_study(2, 4.0);
        let p = models::product(&a, &b);
        let ric = p.ricci();
        assert!((ric.matrix()[(0, 0)].re - (-4.0)).abs() < 1e-12);
        for j in 1..3 {
            assert!(ric.matrix()[(0, j)].norm() < 1e-13);
            assert!((ric.matrix()[(j, j)].re - 6.0).abs() < 1e-12);
        }
        assert!(models::flat(3).ricci().frobenius_norm() < 1e-15);
    }

    #[test]
    fn scalar_values() {
        assert!((models::fubini_study(2, 4.0).scalar() - 12.0).abs() < 1e-12);
        assert_eq!(models::flat(4).scalar(), 0.0);
        assert!((models::counterexample_product(2).scalar() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn bisectional_is_phase_invariant_and_biquadratic() {
        let mut r = rng::seeded(5);
        let t = models::random_tensor(&mut r, 3, 1.0);
        let x = rng::random_unit_vector(&mut r, 3);
        let y = rng::random_unit_vector(&mut r, 3);
        let base = t.bisectional(&x, &y).unwrap();
        for _ in 0..100 {
            let th: f64 = rand::Rng::gen_range(&mut r, 0.0..std::f64::consts::TAU);
            let ph: f64 = rand::Rng::gen_range(&mut r, 0.0..std::f64::consts::TAU);
            let xs = &x * C64::new(0.0, th).exp();
            let ys = &y * C64::new(0.0, ph).exp();
            assert!((t.bisectional(&xs, &ys).unwrap() - base).abs() < 1e-10);
        }
        let s = 1.7;
        let u = 0.3;
        let scaled = t
            .bisectional(&(&x * C64::new(s, 0.0)), &(&y * C64::new(u, 0.0)))
            .unwrap();
        assert!((scaled - s * s * u * u * base).abs() < 1e-10);
    }

    #[test]
    fn restriction_picks_out_blocks() {
        let p = models::product(&models::surface(-4.0), &models::fubini_study(2, 4.0));
        let fs = p.restrict(&[1, 2]);
        let expect = models::fubini_study(2, 4.0);
        for (a, b) in fs.entries().iter().zip(expect.entries().iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_matrix_eigenvalues_are_sorted() {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let m = rng::random_unitary(&mut r, 3);
        let mut h = CMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                h[(i, j)] = m[(i, j)] + m[(j, i)].conj();
            }
        }
        let hm = HermitianMatrix::new(h).unwrap();
        let ev = hm.eigenvalues();
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        assert!((hm.trace() - ev.iter().sum::<f64>()).abs() < 1e-10);
    }
}
