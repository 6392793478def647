//! First and second variations of the frame function
//! u({X, Y}) = R(X, X̄, Y, Ȳ) along explicit curves of orthonormal 2-frames,
//! with closed-form derivatives and centered finite-difference oracles.
//!
//! Default steps: 1e-4 for first derivatives, 1e-3 for second; centered
//! stencils balance truncation against cancellation at 64-bit precision.

use crate::error::{Error, Result};
use crate::flow;
use crate::rng;
use crate::tensor::{hdot, CVector, KahlerCurvatureTensor, OrthonormalTwoFrame, C64};

pub const FD_STEP_FIRST: f64 = 1e-4;
pub const FD_STEP_SECOND: f64 = 1e-3;

/// A one-parameter family of orthonormal 2-frames through the basis pair
/// (e_alpha, e_beta) at s = 0.
#[derive(Debug, Clone)]
pub enum VariationFamily {
    /// {cos s · e_a + sin s · e_b, -sin s · e_a + cos s · e_b}
    RotationReal { alpha: usize, beta: usize },
    /// The same rotation with e_b replaced by i e_b.
    RotationImag { alpha: usize, beta: usize },
    /// {(e_a + s e_m)/norm, e_b} for m outside {a, b}.
    TranslationReal {
        alpha: usize,
        beta: usize,
        mu: usize,
    },
    /// {(e_a + s i e_m)/norm, e_b}.
    TranslationImag {
        alpha: usize,
        beta: usize,
        mu: usize,
    },
    /// {e_a, (e_b + s e_m)/norm}.
    TranslationBetaSlot {
        alpha: usize,
        beta: usize,
        mu: usize,
    },
    /// Second-order Taylor curve along directions orthogonal to the pair:
    /// v_a(s) = e_a + s ω_a - s²/2 (⟨ω_a,ω_a⟩ e_a + ⟨ω_a,ω_b⟩ e_b), and
    /// symmetrically for v_b; orthonormal to third order in s.
    SecondOrder {
        alpha: usize,
        beta: usize,
        omega_alpha: CVector,
        omega_beta: CVector,
    },
}

impl VariationFamily {
    pub fn alpha(&self) -> usize {
        match self {
            Self::RotationReal { alpha, .. }
            | Self::RotationImag { alpha, .. }
            | Self::TranslationReal { alpha, .. }
            | Self::TranslationImag { alpha, .. }
            | Self::TranslationBetaSlot { alpha, .. }
            | Self::SecondOrder { alpha, .. } => *alpha,
        }
    }

    pub fn beta(&self) -> usize {
        match self {
            Self::RotationReal { beta, .. }
            | Self::RotationImag { beta, .. }
            | Self::TranslationReal { beta, .. }
            | Self::TranslationImag { beta, .. }
            | Self::TranslationBetaSlot { beta, .. }
            | Self::SecondOrder { beta, .. } => *beta,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let (alpha, beta) = (self.alpha(), self.beta());
        if alpha >= n || beta >= n || alpha == beta {
            return Err(Error::Precondition(format!(
                "need two distinct frame indices below {n}, got ({alpha}, {beta})"
            )));
        }
        match self {
            Self::TranslationReal { mu, .. }
            | Self::TranslationImag { mu, .. }
            | Self::TranslationBetaSlot { mu, .. } => {
                if *mu >= n || *mu == alpha || *mu == beta {
                    return Err(Error::Precondition(format!(
                        "translation direction must avoid the frame pair, got mu = {mu}"
                    )));
                }
            }
            Self::SecondOrder {
                omega_alpha,
                omega_beta,
                ..
            } => {
                for (name, w) in [("omega_alpha", omega_alpha), ("omega_beta", omega_beta)] {
                    if w.len() != n {
                        return Err(Error::Dimension {
                            tensor: n,
                            vector: w.len(),
                        });
                    }
                    if w[alpha].norm() > 1e-12 || w[beta].norm() > 1e-12 {
                        return Err(Error::Precondition(format!(
                            "{name} must be orthogonal to the frame pair"
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// The frame at parameter `s`. Rotations are exactly orthonormal,
/// translations are normalized exactly, and the second-order curve carries
/// an O(s^3) defect by construction.
pub fn frame_curve(family: &VariationFamily, n: usize, s: f64) -> Result<OrthonormalTwoFrame> {
    family.validate(n)?;
    let (alpha, beta) = (family.alpha(), family.beta());
    let ea = rng::basis_vector(n, alpha);
    let eb = rng::basis_vector(n, beta);
    let re = |v: f64| C64::new(v, 0.0);
    match family {
        VariationFamily::RotationReal { .. } => {
            let (sin, cos) = s.sin_cos();
            OrthonormalTwoFrame::new(
                &ea * re(cos) + &eb * re(sin),
                &ea * re(-sin) + &eb * re(cos),
            )
        }
        VariationFamily::RotationImag { .. } => {
            let (sin, cos) = s.sin_cos();
            let ib = &eb * C64::new(0.0, 1.0);
            OrthonormalTwoFrame::new(
                &ea * re(cos) + &ib * re(sin),
                &ea * re(-sin) + &ib * re(cos),
            )
        }
        VariationFamily::TranslationReal { mu, .. } => {
            let norm = re(1.0 / (1.0 + s * s).sqrt());
            let em = rng::basis_vector(n, *mu);
            OrthonormalTwoFrame::new((&ea + &em * re(s)) * norm, eb)
        }
        VariationFamily::TranslationImag { mu, .. } => {
            let norm = re(1.0 / (1.0 + s * s).sqrt());
            let em = rng::basis_vector(n, *mu) * C64::new(0.0, 1.0);
            OrthonormalTwoFrame::new((&ea + &em * re(s)) * norm, eb)
        }
        VariationFamily::TranslationBetaSlot { mu, .. } => {
            let norm = re(1.0 / (1.0 + s * s).sqrt());
            let em = rng::basis_vector(n, *mu);
            OrthonormalTwoFrame::new(ea, (&eb + &em * re(s)) * norm)
        }
        VariationFamily::SecondOrder {
            omega_alpha,
            omega_beta,
            ..
        } => {
            let haa = hdot(omega_alpha, omega_alpha);
            let hab = hdot(omega_alpha, omega_beta);
            let hba = hdot(omega_beta, omega_alpha);
            let hbb = hdot(omega_beta, omega_beta);
            let half_s2 = re(0.5 * s * s);
            let va = &ea + omega_alpha * re(s) - (&ea * haa + &eb * hab) * half_s2;
            let vb = &eb + omega_beta * re(s) - (&ea * hba + &eb * hbb) * half_s2;
            let scale = omega_alpha.norm().max(omega_beta.norm()).max(1.0);
            let tol = 1e-9 + 4.0 * (scale * s.abs()).powi(3);
            OrthonormalTwoFrame::with_tolerance(va, vb, tol)
        }
    }
}

/// u evaluated along the family.
pub fn u_along(t: &KahlerCurvatureTensor, family: &VariationFamily, s: f64) -> Result<f64> {
    let frame = frame_curve(family, t.n(), s)?;
    Ok(t.bisectional_raw(frame.x(), frame.y()).re)
}

/// Closed-form derivative du/ds at s = 0.
pub fn first_variation(t: &KahlerCurvatureTensor, family: &VariationFamily) -> Result<f64> {
    family.validate(t.n())?;
    let (a, b) = (family.alpha(), family.beta());
    Ok(match family {
        VariationFamily::RotationReal { .. } => {
            2.0 * (t.entry(a, b, b, b) - t.entry(a, a, a, b)).re
        }
        VariationFamily::RotationImag { .. } => {
            2.0 * (t.entry(a, b, b, b) - t.entry(a, a, a, b)).im
        }
        VariationFamily::TranslationReal { mu, .. } => 2.0 * t.entry(a, *mu, b, b).re,
        VariationFamily::TranslationImag { mu, .. } => 2.0 * t.entry(a, *mu, b, b).im,
        VariationFamily::TranslationBetaSlot { mu, .. } => 2.0 * t.entry(a, a, b, *mu).re,
        VariationFamily::SecondOrder {
            omega_alpha,
            omega_beta,
            ..
        } => {
            let n = t.n();
            let mut acc = C64::new(0.0, 0.0);
            for p in 0..n {
                acc += t.entry(p, a, b, b) * omega_alpha[p];
                acc += t.entry(a, a, p, b) * omega_beta[p];
            }
            2.0 * acc.re
        }
    })
}

/// Closed-form half second derivative (1/2) d²u/ds² at s = 0 along a
/// second-order family: the two diagonal curvature terms, the two real
/// cross terms, the norm correction, and the mixed inner-product term.
pub fn second_variation(t: &KahlerCurvatureTensor, family: &VariationFamily) -> Result<f64> {
    let VariationFamily::SecondOrder {
        alpha,
        beta,
        omega_alpha,
        omega_beta,
    } = family
    else {
        return Err(Error::Precondition(
            "second variations are defined along second-order families".into(),
        ));
    };
    family.validate(t.n())?;
    let (a, b) = (*alpha, *beta);
    let n = t.n();
    let wa = omega_alpha;
    let wb = omega_beta;

    let mut term_aa = C64::new(0.0, 0.0); // R(ω_a, ω̄_a, e_b, ē_b)
    let mut term_bb = C64::new(0.0, 0.0); // R(e_a, ē_a, ω_b, ω̄_b)
    let mut cross_1 = C64::new(0.0, 0.0); // R(ω_a, ē_a, e_b, ω̄_b)
    let mut cross_2 = C64::new(0.0, 0.0); // R(e_a, ω̄_a, e_b, ω̄_b)
    for p in 0..n {
        for q in 0..n {
            term_aa += t.entry(p, q, b, b) * wa[p] * wa[q].conj();
            term_bb += t.entry(a, a, p, q) * wb[p] * wb[q].conj();
            cross_1 += t.entry(p, a, b, q) * wa[p] * wb[q].conj();
            cross_2 += t.entry(a, p, b, q) * wa[p].conj() * wb[q].conj();
        }
    }
    let norms = hdot(wa, wa).re + hdot(wb, wb).re;
    let mixed = hdot(wa, wb) * t.entry(b, a, b, b) + hdot(wb, wa) * t.entry(a, a, a, b);
    Ok(
        term_aa.re + term_bb.re + 2.0 * cross_1.re + 2.0 * cross_2.re
            - norms * t.entry(a, a, b, b).re
            - mixed.re,
    )
}

/// Centered finite difference of u along the family.
pub fn fd_first_variation(
    t: &KahlerCurvatureTensor,
    family: &VariationFamily,
    h: f64,
) -> Result<f64> {
    Ok((u_along(t, family, h)? - u_along(t, family, -h)?) / (2.0 * h))
}

/// Half the centered second difference, directly comparable with
/// [`second_variation`].
pub fn fd_second_variation(
    t: &KahlerCurvatureTensor,
    family: &VariationFamily,
    h: f64,
) -> Result<f64> {
    let plus = u_along(t, family, h)?;
    let zero = u_along(t, family, 0.0)?;
    let minus = u_along(t, family, -h)?;
    Ok(0.5 * (plus - 2.0 * zero + minus) / (h * h))
}

/// tr(AC) - tr(B conj(B)) for the three complement-block matrices
/// A = `R[·,·,b,b]`, C = `R[a,a,·,·]`, B = `R[·,a,·,b]` on the orthogonal
/// complement of the frame pair; equal (and asserted equal) to the direct
/// sum Σ_{m,v outside} (`R[a,a,m,v]` `R[v,m,b,b]` - |`R[a,m,b,v]`|²).
pub fn block_psd_gap(t: &KahlerCurvatureTensor, alpha: usize, beta: usize) -> Result<f64> {
    let n = t.n();
    if alpha >= n || beta >= n || alpha == beta {
        return Err(Error::Precondition(format!(
            "need two distinct frame indices below {n}, got ({alpha}, {beta})"
        )));
    }
    if n < 3 {
        return Err(Error::Degenerate(
            "the complement of the frame pair is empty for n < 3".into(),
        ));
    }
    let comp: Vec<usize> = (0..n).filter(|&i| i != alpha && i != beta).collect();
    let k = comp.len();

    let mut trace_ac = C64::new(0.0, 0.0);
    let mut trace_bb = C64::new(0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            let (m, v) = (comp[i], comp[j]);
            let a_mv = t.entry(m, v, beta, beta);
            let c_vm = t.entry(alpha, alpha, v, m);
            trace_ac += a_mv * c_vm;
            let b_mv = t.entry(m, alpha, v, beta);
            let b_vm = t.entry(v, alpha, m, beta);
            trace_bb += b_mv * b_vm.conj();
        }
    }
    let matrix_route = (trace_ac - trace_bb).re;

    let mut direct = C64::new(0.0, 0.0);
    for &m in &comp {
        for &v in &comp {
            direct += t.entry(alpha, alpha, m, v) * t.entry(v, m, beta, beta);
            direct -= C64::new(t.entry(alpha, m, beta, v).norm_sqr(), 0.0);
        }
    }
    let scale = 1.0 + t.max_abs().powi(2) * (k * k) as f64;
    if (matrix_route - direct.re).abs() > 1e-10 * scale {
        return Err(Error::Internal(format!(
            "trace and sum routes disagree: {matrix_route} vs {}",
            direct.re
        )));
    }
    Ok(direct.re)
}

#[derive(Debug, Clone)]
pub struct RotationPropagation {
    pub expansion_value: f64,
    pub predicted_value: f64,
    pub residual: f64,
}

/// Expands R(ẽ_a, …, ẽ_b, …) at angle θ for the rotated pair
/// ẽ_a = sin θ e_a - cos θ e_b, ẽ_b = cos θ e_a + sin θ e_b term by term
/// (all sixteen), and compares with cos²θ sin²θ (`R[a,a,a,a]` + `R[b,b,b,b]`),
/// which the vanishing conditions at a boundary zero force it to equal.
pub fn rotation_propagation(
    t: &KahlerCurvatureTensor,
    alpha: usize,
    beta: usize,
    theta: f64,
    tol: f64,
) -> Result<RotationPropagation> {
    let zero_set = flow::zero_set_conditions(t, alpha, beta, tol)?;
    if let Some(which) = zero_set.first_failure() {
        return Err(Error::Precondition(format!(
            "zero-set conditions fail at ({alpha}, {beta}): {which} exceed tolerance {tol:.1e}"
        )));
    }
    let (sin, cos) = theta.sin_cos();
    // Coefficients of ẽ_a and ẽ_b on (e_a, e_b); all real.
    let x = [sin, -cos];
    let y = [cos, sin];
    let pick = |i: usize| if i == 0 { alpha } else { beta };
    let mut expansion = C64::new(0.0, 0.0);
    for ia in 0..2 {
        for ib in 0..2 {
            for ic in 0..2 {
                for id in 0..2 {
                    let coeff = x[ia] * x[ib] * y[ic] * y[id];
                    expansion += t.entry(pick(ia), pick(ib), pick(ic), pick(id)) * coeff;
                }
            }
        }
    }
    let predicted = cos
        * cos
        * sin
        * sin
        * (t.entry(alpha, alpha, alpha, alpha).re + t.entry(beta, beta, beta, beta).re);
    let expansion_value = expansion.re;
    Ok(RotationPropagation {
        expansion_value,
        predicted_value: predicted,
        residual: (expansion_value - predicted).abs(),
    })
}
