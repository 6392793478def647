//! The underlying real (Riemannian) curvature tensor of a Kähler tensor.
//!
//! A complex dimension-n tensor realifies to real dimension m = 2n with the
//! basis ordering `(u_1, …, u_n, Ju_1, …, Ju_n)` and the complex structure
//! J u_i = u_{n+i}, J u_{n+i} = -u_i. The embedding convention is
//! e_i = (u_i - i·Ju_i)/√2, which pins the identity
//! `R_real(u_i, Ju_i, Ju_j, u_j) = R[i,i,j,j]` and puts the sectional range
//! of the holomorphic-sectional-4 Fubini–Study tensor at [1, 4].

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::tensor::{KahlerCurvatureTensor, C64};

pub type RVector = DVector<f64>;

/// Real curvature 4-tensor with Riemannian symmetries.
#[derive(Debug, Clone)]
pub struct RealCurvatureTensor {
    m: usize,
    entries: Vec<f64>,
}

/// Maxima of the defects against each Riemannian invariant.
#[derive(Debug, Clone, Copy)]
pub struct RealSymmetryDefects {
    pub antisymmetry_first_pair: f64,
    pub antisymmetry_last_pair: f64,
    pub pair_exchange: f64,
    pub first_bianchi: f64,
}

impl RealSymmetryDefects {
    pub fn max(&self) -> f64 {
        self.antisymmetry_first_pair
            .max(self.antisymmetry_last_pair)
            .max(self.pair_exchange)
            .max(self.first_bianchi)
    }
}

#[inline(always)]
fn idx(m: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * m + b) * m + c) * m + d
}

impl RealCurvatureTensor {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            entries: vec![0.0; m * m * m * m],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn entry(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.entries[idx(self.m, a, b, c, d)]
    }

    /// Image of basis vector `p` under the complex structure, as
    /// (index, sign).
    pub fn j_image(&self, p: usize) -> (usize, f64) {
        let n = self.m / 2;
        if p < n {
            (p + n, 1.0)
        } else {
            (p - n, -1.0)
        }
    }

    /// Applies J to a real vector.
    pub fn apply_j(&self, v: &RVector) -> RVector {
        let mut out = RVector::zeros(self.m);
        for p in 0..self.m {
            let (q, s) = self.j_image(p);
            out[q] = s * v[p];
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn max_defects(&self) -> RealSymmetryDefects {
        let m = self.m;
        let mut d = RealSymmetryDefects {
            antisymmetry_first_pair: 0.0,
            antisymmetry_last_pair: 0.0,
            pair_exchange: 0.0,
            first_bianchi: 0.0,
        };
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for e in 0..m {
                        let v = self.entries[idx(m, a, b, c, e)];
                        d.antisymmetry_first_pair = d
                            .antisymmetry_first_pair
                            .max((v + self.entries[idx(m, b, a, c, e)]).abs());
                        d.antisymmetry_last_pair = d
                            .antisymmetry_last_pair
                            .max((v + self.entries[idx(m, a, b, e, c)]).abs());
                        d.pair_exchange = d
                            .pair_exchange
                            .max((v - self.entries[idx(m, c, e, a, b)]).abs());
                        let bianchi =
                            v + self.entries[idx(m, b, c, a, e)] + self.entries[idx(m, c, a, b, e)];
                        d.first_bianchi = d.first_bianchi.max(bianchi.abs());
                    }
                }
            }
        }
        d
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.max_defects().max() <= tol
    }

    /// Full contraction R(v1, v2, v3, v4).
    pub fn evaluate(&self, v1: &RVector, v2: &RVector, v3: &RVector, v4: &RVector) -> f64 {
        let m = self.m;
        let mut acc = 0.0;
        for a in 0..m {
            let x1 = v1[a];
            if x1 == 0.0 {
                continue;
            }
            for b in 0..m {
                let x12 = x1 * v2[b];
                if x12 == 0.0 {
                    continue;
                }
                for c in 0..m {
                    let x123 = x12 * v3[c];
                    if x123 == 0.0 {
                        continue;
                    }
                    let base = idx(m, a, b, c, 0);
                    for d in 0..m {
                        acc += x123 * v4[d] * self.entries[base + d];
                    }
                }
            }
        }
        acc
    }

    /// Partial contraction `out[p] = Σ R[p,q,r,s] u_q w_r z_s`, the building
    /// block for gradients of frame objectives.
    pub fn contract3(&self, u: &RVector, w: &RVector, z: &RVector) -> RVector {
        let m = self.m;
        let mut out = RVector::zeros(m);
        for p in 0..m {
            let mut acc = 0.0;
            for q in 0..m {
                let uq = u[q];
                if uq == 0.0 {
                    continue;
                }
                for r in 0..m {
                    let uw = uq * w[r];
                    if uw == 0.0 {
                        continue;
                    }
                    let base = idx(m, p, q, r, 0);
                    for s in 0..m {
                        acc += uw * z[s] * self.entries[base + s];
                    }
                }
            }
            out[p] = acc;
        }
        out
    }

    /// Unnormalized sectional numerator K(v, w) = R(v, w, w, v).
    pub fn sectional_numerator(&self, v: &RVector, w: &RVector) -> f64 {
        self.evaluate(v, w, w, v)
    }

    /// Sectional curvature of the plane spanned by v, w.
    pub fn sectional(&self, v: &RVector, w: &RVector) -> Result<f64> {
        let gram = v.dot(v) * w.dot(w) - v.dot(w).powi(2);
        if gram < 1e-12 {
            return Err(Error::Degenerate(format!(
                "plane is numerically degenerate, Gram determinant {gram:.3e}"
            )));
        }
        Ok(self.sectional_numerator(v, w) / gram)
    }

    /// Isotropic-curvature objective on an orthonormal 4-frame:
    /// K13 + K14 + K23 + K24 - 2 R(v1, v2, v3, v4).
    pub fn isotropic(&self, frame: &[RVector; 4]) -> f64 {
        let [v1, v2, v3, v4] = frame;
        self.sectional_numerator(v1, v3)
            + self.sectional_numerator(v1, v4)
            + self.sectional_numerator(v2, v3)
            + self.sectional_numerator(v2, v4)
            - 2.0 * self.evaluate(v1, v2, v3, v4)
    }
}

impl KahlerCurvatureTensor {
    /// Produces the Riemannian curvature tensor on the underlying real
    /// 2n-dimensional space.
    pub fn realify(&self) -> RealCurvatureTensor {
        let n = self.n();
        let m = 2 * n;
        let mut out = RealCurvatureTensor::zeros(m);

        // Basis vector p corresponds to the (1,0)-component coefficient
        // c_p at complex index i_p: u_i -> 1/√2 at i, Ju_i -> i/√2 at i.
        let coeff = |p: usize| -> (usize, C64) {
            if p < n {
                (p, C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
            } else {
                (p - n, C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2))
            }
        };

        // A(p,q) = z_p ⊗ conj(z_q) - z_q ⊗ conj(z_p) has at most two nonzero
        // entries because each z has a single nonzero component.
        let pair_entries = |p: usize, q: usize| -> [(usize, usize, C64); 2] {
            let (ip, cp) = coeff(p);
            let (iq, cq) = coeff(q);
            [(ip, iq, cp * cq.conj()), (iq, ip, -(cq * cp.conj()))]
        };

        for p in 0..m {
            for q in 0..m {
                let a12 = pair_entries(p, q);
                for r in 0..m {
                    for s in 0..m {
                        let a34 = pair_entries(r, s);
                        let mut acc = C64::new(0.0, 0.0);
                        for &(al, be, w1) in &a12 {
                            for &(ga, de, w2) in &a34 {
                                acc += w1 * w2 * self.entry(al, be, ga, de);
                            }
                        }
                        out.entries[idx(m, p, q, r, s)] = acc.re;
                    }
                }
            }
        }
        out
    }
}
