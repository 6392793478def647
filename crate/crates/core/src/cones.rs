//! Certification of curvature-positivity cones.
//!
//! Each cone condition is a smooth low-degree objective on a compact frame
//! manifold; membership is certified by multi-start projected gradient
//! descent (gradient step in ambient coordinates, Gram–Schmidt retraction,
//! step halving on increase). "Certified" is a numerical statement — every
//! start converged to a value above `-tolerance` — and the result carries
//! the start count and tolerance so reports stay honest.

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::ProductStructure;
use crate::error::{Error, Result};
use crate::real::{RVector, RealCurvatureTensor};
use crate::rng;
use crate::tensor::{hdot, CVector, KahlerCurvatureTensor, C64};

/// Which positivity condition is being certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Bisectional curvature over Hermitian-orthonormal 2-frames.
    Ohb,
    /// Bisectional curvature over independent unit pairs.
    Hb,
    /// Holomorphic sectional curvature over unit vectors.
    HolSec,
    /// Isotropic objective over real orthonormal 4-frames of the realified
    /// tensor: K13 + K14 + K23 + K24 - 2 R(v1,v2,v3,v4).
    Isotropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    CertifiedNonnegative,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub starts: usize,
    pub max_iters: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            starts: 64,
            max_iters: 800,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

/// The frame realizing the reported minimum.
#[derive(Debug, Clone)]
pub enum ArgminFrame {
    Pair { x: CVector, y: CVector },
    UnitPair { x: CVector, y: CVector },
    Single { x: CVector },
    RealFrame { vectors: Vec<RVector> },
}

#[derive(Debug, Clone)]
pub struct CertificationResult {
    pub condition: Condition,
    pub min_value: f64,
    pub argmin: ArgminFrame,
    pub status: Status,
    pub starts: usize,
    pub tolerance: f64,
}

// ---------------------------------------------------------------------------
// Frame-manifold minimization

trait FrameProblem: Sync {
    type State: Clone + Send;
    fn random_state(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Self::State;
    fn objective(&self, s: &Self::State) -> f64;
    /// Ambient (unconstrained) gradient.
    fn gradient(&self, s: &Self::State) -> Self::State;
    /// Removes the components along the constraint normals at `s`.
    fn project_tangent(&self, s: &Self::State, g: &Self::State) -> Self::State;
    /// Projects an ambient point back onto the frame manifold.
    fn retract(&self, s: &Self::State) -> Self::State;
    fn step(&self, s: &Self::State, g: &Self::State, step: f64) -> Self::State;
    /// Real ambient inner product.
    fn dot(&self, a: &Self::State, b: &Self::State) -> f64;
    fn norm(&self, g: &Self::State) -> f64 {
        self.dot(g, g).sqrt()
    }
}

struct StartResult<S> {
    value: f64,
    state: S,
    converged: bool,
}

fn minimize_one<P: FrameProblem>(
    p: &P,
    rng: &mut rand_chacha::ChaCha8Rng,
    max_iters: usize,
    gtol: f64,
) -> StartResult<P::State> {
    let mut s = p.retract(&p.random_state(rng));
    let mut f = p.objective(&s);
    let mut step = 0.1;
    let mut converged = false;
    let mut stall = 0u32;
    let mut prev: Option<(P::State, P::State)> = None;
    for _ in 0..max_iters {
        let g = p.project_tangent(&s, &p.gradient(&s));
        let gn = p.norm(&g);
        if !gn.is_finite() || !f.is_finite() {
            return StartResult {
                value: f64::NAN,
                state: s,
                converged: false,
            };
        }
        if gn <= gtol {
            converged = true;
            break;
        }
        // Barzilai–Borwein step from the last accepted move, safeguarded by
        // the Armijo halving below; plain fixed steps crawl on the
        // ill-conditioned flat basins these objectives have. A useless
        // curvature estimate resets the step instead of freezing it small.
        if let Some((s_prev, g_prev)) = &prev {
            let dx = p.step(&s, s_prev, 1.0);
            let dg = p.step(&g, g_prev, 1.0);
            let num = p.dot(&dx, &dx);
            let den = p.dot(&dx, &dg);
            step = if den > 0.0 && num.is_finite() && den.is_finite() {
                (num / den).clamp(1e-10, 1e2)
            } else {
                (step * 4.0).clamp(1e-4, 1e2)
            };
        }
        let mut accepted = false;
        for _ in 0..60 {
            let trial = p.retract(&p.step(&s, &g, step));
            let ft = p.objective(&trial);
            if !ft.is_finite() {
                return StartResult {
                    value: f64::NAN,
                    state: trial,
                    converged: false,
                };
            }
            if ft <= f - 1e-4 * step * gn * gn {
                // Linear convergence toward a flat minimum shrinks the
                // improvements geometrically; a run of negligible ones with
                // the gradient already small is as stationary as gtol.
                if f - ft <= 1e-13 * (1.0 + f.abs()) {
                    stall += 1;
                } else {
                    stall = 0;
                }
                prev = Some((s.clone(), g.clone()));
                s = trial;
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
            if step < 1e-16 {
                break;
            }
        }
        if !accepted {
            // No descent at any step size: stationary to precision.
            converged = true;
            break;
        }
        if stall >= 8 && gn <= 1e3 * gtol {
            converged = true;
            break;
        }
    }
    StartResult {
        value: f,
        state: s,
        converged,
    }
}

fn run_multistart<P: FrameProblem>(
    p: &P,
    opts: &CertifyOptions,
    gtol: f64,
) -> Vec<StartResult<P::State>> {
    // Indexed substreams keep the reduction deterministic no matter how the
    // starts are scheduled.
    (0..opts.starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng::substream(opts.seed, k as u64);
            minimize_one(p, &mut rng, opts.max_iters, gtol)
        })
        .collect()
}

// --- OHB: Hermitian-orthonormal pairs --------------------------------------

struct OhbProblem<'a> {
    t: &'a KahlerCurvatureTensor,
    orthogonal: bool,
}

type PairState = (CVector, CVector);

impl OhbProblem<'_> {
    fn grad_pair(&self, x: &CVector, y: &CVector) -> PairState {
        let n = self.t.n();
        let mut gx = CVector::zeros(n);
        let mut gy = CVector::zeros(n);
        for b in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        acc += self.t.entry(a, b, c, d) * x[a] * y[c] * y[d].conj();
                    }
                }
            }
            gx[b] = acc * 2.0;
        }
        for d in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        acc += self.t.entry(a, b, c, d) * x[a] * x[b].conj() * y[c];
                    }
                }
            }
            gy[d] = acc * 2.0;
        }
        (gx, gy)
    }
}

impl FrameProblem for OhbProblem<'_> {
    type State = PairState;

    fn random_state(&self, rng: &mut rand_chacha::ChaCha8Rng) -> PairState {
        if self.orthogonal {
            rng::random_orthonormal_pair(rng, self.t.n())
        } else {
            (
                rng::random_unit_vector(rng, self.t.n()),
                rng::random_unit_vector(rng, self.t.n()),
            )
        }
    }

    fn objective(&self, (x, y): &PairState) -> f64 {
        self.t.bisectional_raw(x, y).re
    }

    fn gradient(&self, (x, y): &PairState) -> PairState {
        self.grad_pair(x, y)
    }

    fn project_tangent(&self, (x, y): &PairState, (gx, gy): &PairState) -> PairState {
        let mut gx = gx.clone();
        let mut gy = gy.clone();
        // Sphere constraints.
        let cx = hdot(&gx, x).re;
        gx -= x * C64::new(cx, 0.0);
        let cy = hdot(&gy, y).re;
        gy -= y * C64::new(cy, 0.0);
        if self.orthogonal {
            // ⟨X, Y⟩ = 0: two real constraints with normals (y, x)/√2 and
            // (iy, -ix)/√2, orthonormal to the sphere normals at frames.
            let c3 = 0.5 * (hdot(&gx, y).re + hdot(&gy, x).re);
            let iy = y * C64::new(0.0, 1.0);
            let ix = x * C64::new(0.0, 1.0);
            let c4 = 0.5 * (hdot(&gx, &iy).re - hdot(&gy, &ix).re);
            gx -= y * C64::new(c3, 0.0) + &iy * C64::new(c4, 0.0);
            gy -= x * C64::new(c3, 0.0) - &ix * C64::new(c4, 0.0);
        }
        (gx, gy)
    }

    fn retract(&self, (x, y): &PairState) -> PairState {
        let nx = hdot(x, x).re.sqrt();
        let x = x / C64::new(nx.max(1e-300), 0.0);
        let mut y = y.clone();
        if self.orthogonal {
            let overlap = hdot(&y, &x);
            y -= &x * overlap;
        }
        let ny = hdot(&y, &y).re.sqrt();
        (x, y / C64::new(ny.max(1e-300), 0.0))
    }

    fn step(&self, (x, y): &PairState, (gx, gy): &PairState, step: f64) -> PairState {
        (x - gx * C64::new(step, 0.0), y - gy * C64::new(step, 0.0))
    }

    fn dot(&self, (ax, ay): &PairState, (bx, by): &PairState) -> f64 {
        hdot(ax, bx).re + hdot(ay, by).re
    }
}

// --- Holomorphic sectional: unit vectors ------------------------------------

struct HolSecProblem<'a> {
    t: &'a KahlerCurvatureTensor,
}

impl FrameProblem for HolSecProblem<'_> {
    type State = CVector;

    fn random_state(&self, rng: &mut rand_chacha::ChaCha8Rng) -> CVector {
        rng::random_unit_vector(rng, self.t.n())
    }

    fn objective(&self, x: &CVector) -> f64 {
        self.t.bisectional_raw(x, x).re
    }

    fn gradient(&self, x: &CVector) -> CVector {
        let n = self.t.n();
        let mut g = CVector::zeros(n);
        for b in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        acc += self.t.entry(a, b, c, d) * x[a] * x[c] * x[d].conj();
                    }
                }
            }
            g[b] = acc * 4.0;
        }
        g
    }

    fn project_tangent(&self, x: &CVector, g: &CVector) -> CVector {
        let c = hdot(g, x).re;
        g - x * C64::new(c, 0.0)
    }

    fn retract(&self, x: &CVector) -> CVector {
        let n = hdot(x, x).re.sqrt();
        x / C64::new(n.max(1e-300), 0.0)
    }

    fn step(&self, x: &CVector, g: &CVector, step: f64) -> CVector {
        x - g * C64::new(step, 0.0)
    }

    fn dot(&self, a: &CVector, b: &CVector) -> f64 {
        hdot(a, b).re
    }
}

// --- Isotropic: real orthonormal 4-frames -----------------------------------

struct IsoProblem {
    rt: RealCurvatureTensor,
}

type Frame4 = Vec<RVector>;

impl FrameProblem for IsoProblem {
    type State = Frame4;

    fn random_state(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Frame4 {
        rng::random_real_frame(rng, self.rt.dim(), 4)
    }

    fn objective(&self, v: &Frame4) -> f64 {
        let frame = [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()];
        self.rt.isotropic(&frame)
    }

    fn gradient(&self, v: &Frame4) -> Frame4 {
        let (v1, v2, v3, v4) = (&v[0], &v[1], &v[2], &v[3]);
        let g1 = (self.rt.contract3(v3, v3, v1) + self.rt.contract3(v4, v4, v1)) * 2.0
            - self.rt.contract3(v2, v3, v4) * 2.0;
        let g2 = (self.rt.contract3(v3, v3, v2) + self.rt.contract3(v4, v4, v2)) * 2.0
            + self.rt.contract3(v1, v3, v4) * 2.0;
        let g3 = (self.rt.contract3(v1, v1, v3) + self.rt.contract3(v2, v2, v3)) * 2.0
            - self.rt.contract3(v4, v1, v2) * 2.0;
        let g4 = (self.rt.contract3(v1, v1, v4) + self.rt.contract3(v2, v2, v4)) * 2.0
            + self.rt.contract3(v3, v1, v2) * 2.0;
        vec![g1, g2, g3, g4]
    }

    fn project_tangent(&self, v: &Frame4, g: &Frame4) -> Frame4 {
        let mut out = g.clone();
        for i in 0..4 {
            let c = out[i].dot(&v[i]);
            out[i] -= &v[i] * c;
        }
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let c = 0.5 * (g[i].dot(&v[j]) + g[j].dot(&v[i]));
                out[i] -= &v[j] * c;
            }
        }
        out
    }

    fn retract(&self, v: &Frame4) -> Frame4 {
        let mut out = v.clone();
        for i in 0..4 {
            for j in 0..i {
                let c = out[i].dot(&out[j]);
                let prev = out[j].clone();
                out[i] -= prev * c;
            }
            let n = out[i].norm();
            out[i] /= n.max(1e-300);
        }
        out
    }

    fn step(&self, v: &Frame4, g: &Frame4, step: f64) -> Frame4 {
        v.iter().zip(g.iter()).map(|(a, b)| a - b * step).collect()
    }

    fn dot(&self, a: &Frame4, b: &Frame4) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| x.dot(y)).sum()
    }
}

// ---------------------------------------------------------------------------

fn summarize<S: Clone>(
    condition: Condition,
    results: Vec<StartResult<S>>,
    opts: &CertifyOptions,
    reeval: impl Fn(&S) -> f64,
    to_frame: impl Fn(&S) -> ArgminFrame,
) -> Result<CertificationResult> {
    let any_nan = results.iter().any(|r| r.value.is_nan());
    let all_converged = results.iter().all(|r| r.converged);
    let best = results
        .iter()
        .enumerate()
        .filter(|(_, r)| r.value.is_finite())
        .min_by(|(i, a), (j, b)| a.value.partial_cmp(&b.value).unwrap().then(i.cmp(j)));
    let Some((_, best)) = best else {
        return Err(Error::Degenerate(
            "every start produced a non-finite value".into(),
        ));
    };
    let min_value = best.value;
    let check = reeval(&best.state);
    if (check - min_value).abs() > 1e-9 * (1.0 + min_value.abs()) {
        return Err(Error::Internal(format!(
            "argmin re-evaluation mismatch: {check} vs {min_value}"
        )));
    }
    let status = if min_value < -opts.tolerance {
        Status::Violated
    } else if any_nan || !all_converged {
        Status::Inconclusive
    } else {
        Status::CertifiedNonnegative
    };
    Ok(CertificationResult {
        condition,
        min_value,
        argmin: to_frame(&best.state),
        status,
        starts: opts.starts,
        tolerance: opts.tolerance,
    })
}

/// Minimizes the chosen condition's objective over its frame manifold and
/// reports the best value found across all starts. Deterministic given the
/// seed; never panics on hard instances (they come back `Inconclusive`).
pub fn certify(
    t: &KahlerCurvatureTensor,
    condition: Condition,
    opts: &CertifyOptions,
) -> Result<CertificationResult> {
    if opts.starts == 0 {
        return Err(Error::Precondition(
            "certification needs at least one start".into(),
        ));
    }
    let gtol = 1e-9 * (1.0 + t.max_abs());
    match condition {
        Condition::Ohb | Condition::Hb => {
            let orthogonal = condition == Condition::Ohb;
            if t.n() < 2 && orthogonal {
                return Err(Error::Precondition(
                    "orthogonal 2-frames need complex dimension at least 2".into(),
                ));
            }
            let p = OhbProblem { t, orthogonal };
            let results = run_multistart(&p, opts, gtol);
            summarize(
                condition,
                results,
                opts,
                |s| p.objective(s),
                |(x, y)| {
                    if orthogonal {
                        ArgminFrame::Pair {
                            x: x.clone(),
                            y: y.clone(),
                        }
                    } else {
                        ArgminFrame::UnitPair {
                            x: x.clone(),
                            y: y.clone(),
                        }
                    }
                },
            )
        }
        Condition::HolSec => {
            let p = HolSecProblem { t };
            let results = run_multistart(&p, opts, gtol);
            summarize(
                condition,
                results,
                opts,
                |s| p.objective(s),
                |x| ArgminFrame::Single { x: x.clone() },
            )
        }
        Condition::Isotropic => {
            if t.n() < 2 {
                return Err(Error::Precondition(
                    "isotropic 4-frames need real dimension at least 4".into(),
                ));
            }
            let p = IsoProblem { rt: t.realify() };
            let results = run_multistart(&p, opts, gtol);
            summarize(
                condition,
                results,
                opts,
                |s| p.objective(s),
                |v| ArgminFrame::RealFrame { vectors: v.clone() },
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Derived pairwise inequalities

/// Values of the three pairwise quantities for one index pair. With
/// h_a = `R[a,a,a,a]` and w = Re `R[a,b,a,b]`:
/// `difference_pair` is R on the orthogonal pair (e_a - e_b, e_a + e_b),
/// `phase_pair` the same with e_b phase-rotated by i, and `sectional_sum`
/// their mean h_a + h_b.
#[derive(Debug, Clone, Serialize)]
pub struct PairInequalities {
    pub alpha: usize,
    pub beta: usize,
    pub difference_pair: f64,
    pub phase_pair: f64,
    pub sectional_sum: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityViolation {
    pub which: &'static str,
    pub alpha: usize,
    pub beta: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub pairs: Vec<PairInequalities>,
    pub scalar: f64,
    pub min_value: f64,
    pub tol: f64,
    pub violations: Vec<InequalityViolation>,
}

impl InequalityReport {
    pub fn all_nonnegative(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates, for every index pair, the bisectional values on the
/// difference/sum and phase-rotated orthogonal pairs plus the holomorphic
/// sectional sum, and the scalar curvature; anything below `-tol` is
/// reported as a violation.
pub fn derived_inequalities(t: &KahlerCurvatureTensor, tol: f64) -> InequalityReport {
    let n = t.n();
    let mut pairs = Vec::new();
    let mut violations = Vec::new();
    let mut min_value = f64::INFINITY;
    for alpha in 0..n {
        for beta in 0..n {
            if alpha == beta {
                continue;
            }
            let ha = t.entry(alpha, alpha, alpha, alpha).re;
            let hb = t.entry(beta, beta, beta, beta).re;
            let w = t.entry(alpha, beta, alpha, beta).re;
            let p = PairInequalities {
                alpha,
                beta,
                difference_pair: ha + hb - 2.0 * w,
                phase_pair: ha + hb + 2.0 * w,
                sectional_sum: ha + hb,
            };
            for (which, v) in [
                ("difference-pair", p.difference_pair),
                ("phase-pair", p.phase_pair),
                ("sectional-sum", p.sectional_sum),
            ] {
                min_value = min_value.min(v);
                if v < -tol {
                    violations.push(InequalityViolation {
                        which,
                        alpha,
                        beta,
                        value: v,
                    });
                }
            }
            pairs.push(p);
        }
    }
    let scalar = t.scalar();
    min_value = min_value.min(scalar);
    if scalar < -tol {
        violations.push(InequalityViolation {
            which: "scalar",
            alpha: 0,
            beta: 0,
            value: scalar,
        });
    }
    InequalityReport {
        pairs,
        scalar,
        min_value,
        tol,
        violations,
    }
}

// ---------------------------------------------------------------------------
// Cross-factor bound for product tensors

#[derive(Debug, Clone, Serialize)]
pub struct CrossFactorPair {
    pub block_i: usize,
    pub block_j: usize,
    pub min_sum: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossFactorReport {
    pub per_block_min_hol_sec: Vec<f64>,
    pub pairs: Vec<CrossFactorPair>,
}

impl CrossFactorReport {
    pub fn any_flagged(&self) -> bool {
        self.pairs.iter().any(|p| p.flagged)
    }
}

/// For each ordered block pair reports the minimum of
/// `hol_sec(X) + hol_sec(Y)` over unit X in one block, Y in the other;
/// a negative value means the product tensor leaves the orthogonal
/// bisectional cone.
pub fn cross_factor_bound(
    t: &KahlerCurvatureTensor,
    structure: &ProductStructure,
    opts: &CertifyOptions,
) -> Result<CrossFactorReport> {
    // Block indices refer to the block-adapted frame.
    let t = t.conjugate_frame(&structure.change_of_frame)?;
    let n = t.n();
    let mut seen = vec![false; n];
    for block in &structure.blocks {
        for &i in &block.indices {
            if i >= n || seen[i] {
                return Err(Error::Precondition(format!(
                    "blocks do not partition the index range: index {i} repeated or out of range"
                )));
            }
            seen[i] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::Precondition(
            "blocks do not cover every index".into(),
        ));
    }
    // The tensor must actually be block-diagonal for the bound to be about
    // its blocks.
    let assignment: Vec<usize> = {
        let mut a = vec![0usize; n];
        for (bi, block) in structure.blocks.iter().enumerate() {
            for &i in &block.indices {
                a[i] = bi;
            }
        }
        a
    };
    let cross_tol = 1e-8 * (1.0 + t.max_abs());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let blocks = [assignment[a], assignment[b], assignment[c], assignment[d]];
                    if blocks.iter().any(|&x| x != blocks[0])
                        && t.entry(a, b, c, d).norm() > cross_tol
                    {
                        return Err(Error::Precondition(format!(
                            "tensor is not block-diagonal: component at ({a},{b},{c},{d}) has modulus {:.3e}",
                            t.entry(a, b, c, d).norm()
                        )));
                    }
                }
            }
        }
    }

    let mut per_block_min = Vec::with_capacity(structure.blocks.len());
    for (bi, block) in structure.blocks.iter().enumerate() {
        let sub = t.restrict(&block.indices);
        let mut o = opts.clone();
        o.seed = opts.seed ^ (bi as u64).wrapping_mul(0x9e37_79b9);
        let res = certify(&sub, Condition::HolSec, &o)?;
        per_block_min.push(res.min_value);
    }
    let mut pairs = Vec::new();
    for i in 0..per_block_min.len() {
        for j in 0..per_block_min.len() {
            if i == j {
                continue;
            }
            let min_sum = per_block_min[i] + per_block_min[j];
            pairs.push(CrossFactorPair {
                block_i: i,
                block_j: j,
                min_sum,
                flagged: min_sum < -opts.tolerance,
            });
        }
    }
    Ok(CrossFactorReport {
        per_block_min_hol_sec: per_block_min,
        pairs,
    })
}

// ---------------------------------------------------------------------------
// Sampling baselines (search-free evaluations used to sanity-check the
// optimizer from an independent direction)

pub mod brute {
    use super::*;

    /// Minimum of the isotropic objective over `samples` random orthonormal
    /// 4-frames of the realified tensor.
    pub fn sample_isotropic_min(rt: &RealCurvatureTensor, samples: usize, seed: u64) -> f64 {
        let mut rng = rng::seeded(seed);
        let mut best = f64::INFINITY;
        for _ in 0..samples {
            let f = rng::random_real_frame(&mut rng, rt.dim(), 4);
            let frame = [f[0].clone(), f[1].clone(), f[2].clone(), f[3].clone()];
            best = best.min(rt.isotropic(&frame));
        }
        best
    }

    /// Minimum of the orthogonal bisectional value over random
    /// Hermitian-orthonormal pairs.
    pub fn sample_ohb_min(t: &KahlerCurvatureTensor, samples: usize, seed: u64) -> f64 {
        let mut rng = rng::seeded(seed);
        let mut best = f64::INFINITY;
        for _ in 0..samples {
            let (x, y) = rng::random_orthonormal_pair(&mut rng, t.n());
            best = best.min(t.bisectional_raw(&x, &y).re);
        }
        best
    }

    /// Exhaustive quasi-random grid for n = 2, where the orthogonal-pair
    /// manifold reduces to the complex projective line: a Fibonacci lattice
    /// over (θ, φ) with X = (cos θ/2, sin θ/2 e^{iφ}) and Y its orthogonal
    /// complement.
    pub fn ohb_grid_min_n2(t: &KahlerCurvatureTensor, points: usize) -> Result<f64> {
        if t.n() != 2 {
            return Err(Error::Precondition(
                "the grid baseline is specific to n = 2".into(),
            ));
        }
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        let mut best = f64::INFINITY;
        let mut x = CVector::zeros(2);
        let mut y = CVector::zeros(2);
        for k in 0..points {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / points as f64;
            let theta = z.acos();
            let phi = std::f64::consts::TAU * ((k as f64 / golden) % 1.0);
            let (s, c) = (theta / 2.0).sin_cos();
            let e = C64::new(0.0, phi).exp();
            x[0] = C64::new(c, 0.0);
            x[1] = e * s;
            y[0] = -(e.conj()) * s;
            y[1] = C64::new(c, 0.0);
            best = best.min(t.bisectional_raw(&x, &y).re);
        }
        Ok(best)
    }
}
