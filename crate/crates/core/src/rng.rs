//! Seeded randomness helpers. Every experiment takes an explicit seed and
//! all sampling goes through [`ChaCha8Rng`] so that runs are reproducible
//! bit for bit across platforms and thread schedules.

use nalgebra::DVector;
use rand::Rng;
pub use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::{hdot, CMatrix, CVector, C64};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Derives an independent stream for substream `k` of a base seed.
pub fn substream(seed: u64, k: u64) -> ChaCha8Rng {
    seeded(seed ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn standard_complex<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn basis_vector(n: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[k] = C64::new(1.0, 0.0);
    v
}

pub fn random_complex_vector<R: Rng>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| standard_complex(rng))
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = random_complex_vector(rng, n);
        let norm = hdot(&v, &v).re.sqrt();
        if norm > 1e-8 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// Two Hermitian-orthonormal vectors via Gram–Schmidt on Gaussian draws.
pub fn random_orthonormal_pair<R: Rng>(rng: &mut R, n: usize) -> (CVector, CVector) {
    assert!(n >= 2);
    loop {
        let x = random_unit_vector(rng, n);
        let mut y = random_complex_vector(rng, n);
        let overlap = hdot(&y, &x);
        y -= &x * overlap;
        let norm = hdot(&y, &y).re.sqrt();
        if norm > 1e-8 {
            return (x, y / C64::new(norm, 0.0));
        }
    }
}

/// Haar-ish random unitary: Gram–Schmidt of a Gaussian matrix, rows
/// orthonormalized in order.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let mut rows: Vec<CVector> = (0..n).map(|_| random_complex_vector(rng, n)).collect();
        let mut ok = true;
        for i in 0..n {
            for j in 0..i {
                let overlap = hdot(&rows[i], &rows[j]);
                let rj = rows[j].clone();
                rows[i] -= rj * overlap;
            }
            let norm = hdot(&rows[i], &rows[i]).re.sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            rows[i] /= C64::new(norm, 0.0);
        }
        if !ok {
            continue;
        }
        let mut u = CMatrix::zeros(n, n);
        for (i, r) in rows.iter().enumerate() {
            for (j, z) in r.iter().enumerate() {
                u[(i, j)] = *z;
            }
        }
        return u;
    }
}

/// `k` orthonormal columns in real dimension `m`.
pub fn random_real_frame<R: Rng>(rng: &mut R, m: usize, k: usize) -> Vec<DVector<f64>> {
    assert!(k <= m);
    loop {
        let mut cols: Vec<DVector<f64>> = (0..k)
            .map(|_| DVector::from_fn(m, |_, _| rng.sample(StandardNormal)))
            .collect();
        let mut ok = true;
        for i in 0..k {
            for j in 0..i {
                let overlap = cols[i].dot(&cols[j]);
                let cj = cols[j].clone();
                cols[i] -= cj * overlap;
            }
            let norm = cols[i].norm();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols[i] /= norm;
        }
        if ok {
            return cols;
        }
    }
}
