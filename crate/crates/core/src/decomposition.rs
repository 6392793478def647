//! Product (block) structure detection and the classification case logic.
//!
//! A product tensor has no component mixing indices from different factors.
//! Detection diagonalizes a random Hermitian combination of the curvature
//! endomorphisms `M^{(c,d)}[a,b] = R[a,b,c,d]`, conjugates the tensor into the
//! eigenbasis, and takes connected components of the index-linking graph of
//! the surviving entries: the finest orthogonal splitting compatible with
//! the whole endomorphism family. Degenerate eigenvalue clusters can merge
//! blocks that a luckier combination would separate, so detection retries
//! with fresh randomness and reports a warning when degeneracy persists.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models;
use crate::rng;
use crate::tensor::{CMatrix, KahlerCurvatureTensor, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum BlockTag {
    Flat,
    /// Shape c (δδ + δδ); the payload is c, half the holomorphic sectional
    /// curvature.
    FubiniStudyLike(f64),
    /// Complex one-dimensional block with the given curvature.
    Surface(f64),
    Unclassified,
}

impl fmt::Display for BlockTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockTag::Flat => write!(f, "flat"),
            BlockTag::FubiniStudyLike(c) => write!(f, "fubini-study-like(c={c})"),
            BlockTag::Surface(k) => write!(f, "surface(kappa={k})"),
            BlockTag::Unclassified => write!(f, "unclassified"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Block {
    /// Indices in the block-adapted frame (contiguous, ascending).
    pub indices: Vec<usize>,
    pub tag: BlockTag,
}

#[derive(Debug, Clone)]
pub struct ProductStructure {
    pub blocks: Vec<Block>,
    /// Unitary whose row `k` holds the k-th block-adapted frame vector in
    /// the input frame; conjugating by it makes cross-block components
    /// vanish within the detection tolerance.
    pub change_of_frame: CMatrix,
    pub degeneracy_warning: bool,
}

impl ProductStructure {
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.blocks.iter().map(|b| b.indices.len()).collect();
        v.sort_unstable();
        v
    }
}

/// Flat iff the norm is below tolerance; a single index is a surface with
/// its one curvature component; otherwise match against the c (δδ + δδ)
/// shape with c read off the scalar curvature.
pub fn classify_block(t: &KahlerCurvatureTensor, tol: f64) -> BlockTag {
    if t.frobenius_norm() <= tol {
        return BlockTag::Flat;
    }
    let n = t.n();
    if n == 1 {
        return BlockTag::Surface(t.entry(0, 0, 0, 0).re);
    }
    let c = t.scalar() / (n * (n + 1)) as f64;
    let shape = models::fubini_study(n, 2.0 * c);
    let dist = t
        .entries()
        .iter()
        .zip(shape.entries().iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if dist <= tol {
        BlockTag::FubiniStudyLike(c)
    } else {
        BlockTag::Unclassified
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }
    fn union(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

pub fn detect_blocks(t: &KahlerCurvatureTensor, tol: f64) -> Result<ProductStructure> {
    detect_blocks_seeded(t, tol, 0x5b0c)
}

pub fn detect_blocks_seeded(
    t: &KahlerCurvatureTensor,
    tol: f64,
    seed: u64,
) -> Result<ProductStructure> {
    let n = t.n();
    if t.max_abs() <= tol {
        // Zero curvature: every splitting is invariant, return the maximal one.
        let blocks = (0..n)
            .map(|i| Block {
                indices: vec![i],
                tag: BlockTag::Flat,
            })
            .collect();
        return Ok(ProductStructure {
            blocks,
            change_of_frame: CMatrix::identity(n, n),
            degeneracy_warning: false,
        });
    }

    let mut best: Option<ProductStructure> = None;
    for attempt in 0..3u64 {
        let candidate = detect_once(t, tol, rng::substream(seed, attempt))?;
        if !candidate.degeneracy_warning {
            return Ok(candidate);
        }
        let better = match &best {
            None => true,
            Some(b) => candidate.blocks.len() > b.blocks.len(),
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("three attempts ran"))
}

fn detect_once(
    t: &KahlerCurvatureTensor,
    tol: f64,
    mut rng: rand_chacha::ChaCha8Rng,
) -> Result<ProductStructure> {
    let n = t.n();
    // Random Hermitian weights give a Hermitian combination because the
    // adjoint of M^{(c,d)} is M^{(d,c)}.
    let mut w = CMatrix::from_fn(n, n, |_, _| rng::standard_complex(&mut rng));
    w = (w.clone() + w.adjoint()) * C64::new(0.5, 0.0);
    let mut h = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..n {
                for d in 0..n {
                    acc += w[(c, d)] * t.entry(a, b, c, d);
                }
            }
            h[(a, b)] = acc;
        }
    }
    let h = (h.clone() + h.adjoint()) * C64::new(0.5, 0.0);

    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let lambda: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lam_scale = lambda.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let cluster_tol = 1e-6 * (1.0 + lam_scale);

    // Rows are the adjoint of the eigenvector matrix: the sesquilinear
    // curvature endomorphisms transform as U M U*, so U = V* diagonalizes
    // the combination in the new frame.
    let mut u = CMatrix::zeros(n, n);
    for (k, &col) in order.iter().enumerate() {
        for a in 0..n {
            u[(k, a)] = eig.eigenvectors[(a, col)].conj();
        }
    }
    let rotated = t.conjugate_frame(&u)?;

    // Link every pair of indices touched by a surviving component; the
    // connected components are the finest valid splitting in this frame.
    let mut uf = UnionFind::new(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if rotated.entry(a, b, c, d).norm() > tol {
                        uf.union(a, b);
                        uf.union(a, c);
                        uf.union(a, d);
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = uf.find(i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }

    // Split blocks whose restriction is flat into singletons (the zero
    // tensor is invariant under any further splitting), classify the rest.
    let mut final_groups: Vec<(Vec<usize>, BlockTag)> = Vec::new();
    let mut warning = false;
    for g in groups {
        let sub = rotated.restrict(&g);
        let tag = classify_block(&sub, tol.max(1e-8));
        if tag == BlockTag::Flat && g.len() > 1 {
            for &i in &g {
                final_groups.push((vec![i], BlockTag::Flat));
            }
        } else {
            if g.len() > 1 {
                // A merged block supported only by near-degenerate
                // eigenvalues may be a failed split.
                let mut lams: Vec<f64> = g.iter().map(|&i| lambda[i]).collect();
                lams.sort_by(|x, y| x.partial_cmp(y).unwrap());
                if lams.windows(2).any(|p| (p[1] - p[0]).abs() < cluster_tol)
                    && tag == BlockTag::Unclassified
                {
                    warning = true;
                }
            }
            final_groups.push((g, tag));
        }
    }
    final_groups.sort_by_key(|(g, _)| g[0]);

    // Reorder the frame so block indices are contiguous.
    let perm: Vec<usize> = final_groups
        .iter()
        .flat_map(|(g, _)| g.iter().copied())
        .collect();
    let mut u_final = CMatrix::zeros(n, n);
    for (k, &p) in perm.iter().enumerate() {
        for a in 0..n {
            u_final[(k, a)] = u[(p, a)];
        }
    }
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for (g, tag) in final_groups {
        blocks.push(Block {
            indices: (offset..offset + g.len()).collect(),
            tag,
        });
        offset += g.len();
    }

    // Final invariance check of the reordered frame.
    let rotated = t.conjugate_frame(&u_final)?;
    let mut assignment = vec![0usize; n];
    for (bi, b) in blocks.iter().enumerate() {
        for &i in &b.indices {
            assignment[i] = bi;
        }
    }
    let mut max_cross = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let blk = [assignment[a], assignment[b], assignment[c], assignment[d]];
                    if blk.iter().any(|&x| x != blk[0]) {
                        max_cross = max_cross.max(rotated.entry(a, b, c, d).norm());
                    }
                }
            }
        }
    }
    if max_cross > tol {
        return Err(Error::Internal(format!(
            "block detection produced a non-invariant partition: cross component {max_cross:.3e}"
        )));
    }

    Ok(ProductStructure {
        blocks,
        change_of_frame: u_final,
        degeneracy_warning: warning,
    })
}

// ---------------------------------------------------------------------------
// Case logic for the classification of products

const NEGATIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CaseOutcome {
    /// Every factor has nonnegative minimum holomorphic sectional
    /// curvature (flat factors allowed).
    AllFactorsNonnegative,
    /// Exactly one factor dips negative and every other factor compensates:
    /// min_i >= -min_Y for all i.
    OneNegativeFactor { negative_block: usize },
    /// The compensation inequality fails (or two factors are negative,
    /// which already breaks the product's orthogonal-bisectional cone).
    Violation { witness: (usize, usize), sum: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockSummary {
    pub block: usize,
    pub size: usize,
    pub min_hol_sec: f64,
    pub compact: bool,
    pub tag: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossBound {
    pub i: usize,
    pub j: usize,
    pub sum: f64,
    pub ok: bool,
    pub tight: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub outcome: CaseOutcome,
    pub blocks: Vec<BlockSummary>,
    pub cross_bounds: Vec<CrossBound>,
}

/// Applies the product case logic to caller-supplied per-block minimum
/// holomorphic sectional curvatures. Compactness is metadata echoed into
/// the report; a pointwise tensor cannot decide it.
pub fn classification_case(
    structure: &ProductStructure,
    per_block_min_hol_sec: &[f64],
    compact_flags: &[bool],
) -> Result<CaseReport> {
    let k = structure.blocks.len();
    if per_block_min_hol_sec.len() != k || compact_flags.len() != k {
        return Err(Error::Precondition(format!(
            "need one minimum and one compactness flag per block ({k} blocks, got {} and {})",
            per_block_min_hol_sec.len(),
            compact_flags.len()
        )));
    }
    let blocks: Vec<BlockSummary> = structure
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| BlockSummary {
            block: i,
            size: b.indices.len(),
            min_hol_sec: per_block_min_hol_sec[i],
            compact: compact_flags[i],
            tag: b.tag.to_string(),
        })
        .collect();

    let mut cross_bounds = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let sum = per_block_min_hol_sec[i] + per_block_min_hol_sec[j];
            cross_bounds.push(CrossBound {
                i,
                j,
                sum,
                ok: sum >= -NEGATIVITY_TOL,
                tight: sum.abs() <= NEGATIVITY_TOL,
            });
        }
    }

    let negatives: Vec<usize> = (0..k)
        .filter(|&i| per_block_min_hol_sec[i] < -NEGATIVITY_TOL)
        .collect();
    let outcome = match negatives.as_slice() {
        [] => CaseOutcome::AllFactorsNonnegative,
        [y] => {
            let y = *y;
            let mut failure: Option<(usize, f64)> = None;
            for i in 0..k {
                if i == y {
                    continue;
                }
                let sum = per_block_min_hol_sec[i] + per_block_min_hol_sec[y];
                if sum < -NEGATIVITY_TOL && failure.is_none() {
                    failure = Some((i, sum));
                }
            }
            match failure {
                None => CaseOutcome::OneNegativeFactor { negative_block: y },
                Some((i, sum)) => CaseOutcome::Violation {
                    witness: (y, i),
                    sum,
                },
            }
        }
        more => {
            // Two negative factors already violate the pairwise bound.
            let mut sorted = more.to_vec();
            sorted.sort_by(|&a, &b| {
                per_block_min_hol_sec[a]
                    .partial_cmp(&per_block_min_hol_sec[b])
                    .unwrap()
            });
            let (a, b) = (sorted[0], sorted[1]);
            CaseOutcome::Violation {
                witness: (a, b),
                sum: per_block_min_hol_sec[a] + per_block_min_hol_sec[b],
            }
        }
    };
    Ok(CaseReport {
        outcome,
        blocks,
        cross_bounds,
    })
}
