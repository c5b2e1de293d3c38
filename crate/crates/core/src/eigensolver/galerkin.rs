//! P1 Galerkin discretization of the quadratic form with duplicated nodes at
//! interaction sites, solved by inertia (Sturm) bisection on the symmetric
//! tridiagonal pencil (A, M).
//!
//! Nodes are ordered left to right and jump coupling only ties the two trace
//! nodes of one site, so both A and M stay tridiagonal; M is SPD for any mesh
//! width, which keeps inertia counting valid for indefinite β.

use super::{merge_block_eigs, Bc, Block, BlockItem, Engine, SolveError, SpectralResult, TruncatedProblem};

/// Symmetric tridiagonal pencil (A, M): diagonals and subdiagonals.
#[derive(Clone, Debug)]
pub struct TridiagPencil {
    ad: Vec<f64>,
    ae: Vec<f64>,
    md: Vec<f64>,
    me: Vec<f64>,
}

impl TridiagPencil {
    pub fn n(&self) -> usize {
        self.ad.len()
    }

    /// Number of pencil eigenvalues strictly below λ, by the inertia of
    /// A − λM (LDLᵀ pivot signs, tridiagonal recurrence).
    pub fn inertia_below(&self, lambda: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * 1e16;
        let mut count = 0;
        let mut prev_piv = 1.0;
        for i in 0..self.n() {
            let d = self.ad[i] - lambda * self.md[i];
            let mut piv = if i == 0 {
                d
            } else {
                let e = self.ae[i - 1] - lambda * self.me[i - 1];
                d - e * e / prev_piv
            };
            if piv.abs() < pivmin {
                piv = -pivmin;
            }
            if piv < 0.0 {
                count += 1;
            }
            prev_piv = piv;
        }
        count
    }

    /// All pencil eigenvalues in (lo, hi], each bisected to
    /// |Δλ| ≤ tol·max(1, |λ|).
    pub fn eigs_in_window(&self, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
        let n_lo = self.inertia_below(lo);
        let n_hi = self.inertia_below(hi);
        let mut out = Vec::with_capacity(n_hi.saturating_sub(n_lo));
        for target in n_lo..n_hi {
            let (mut a, mut b) = (lo, hi);
            while b - a > tol * a.abs().max(1.0) {
                let mid = 0.5 * (a + b);
                if self.inertia_below(mid) > target {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    }
}

/// Assembles one block's pencil with target element width `h`. The mesh
/// refines the partition and every potential breakpoint; potential entries
/// are exact elementwise integrals of the affine law against P1 hats.
pub fn assemble_block(block: &Block, h: f64, right_bc: Bc) -> Result<TridiagPencil, SolveError> {
    assemble_block_refined(block, h, 1, right_bc)
}

/// Like `assemble_block`, with subdivision counts multiplied by `refine` so
/// that successive levels nest exactly (needed for clean extrapolation).
pub fn assemble_block_refined(
    block: &Block,
    h: f64,
    refine: usize,
    right_bc: Bc,
) -> Result<TridiagPencil, SolveError> {
    let mut p = TridiagPencil {
        ad: vec![0.0],
        ae: Vec::new(),
        md: vec![0.0],
        me: Vec::new(),
    };
    let push_node = |p: &mut TridiagPencil| {
        p.ad.push(0.0);
        p.md.push(0.0);
        p.ae.push(0.0);
        p.me.push(0.0);
    };
    for item in &block.items {
        match *item {
            BlockItem::Piece { len, q0, q1 } => {
                let n_el = ((len / h).ceil().max(1.0) as usize) * refine;
                let he = len / n_el as f64;
                for j in 0..n_el {
                    let t0 = he * j as f64;
                    let qa = q0 + q1 * t0;
                    let qb = q0 + q1 * (t0 + he);
                    let i = p.n() - 1;
                    push_node(&mut p);
                    p.ad[i] += 1.0 / he + he * (3.0 * qa + qb) / 12.0;
                    p.ad[i + 1] += 1.0 / he + he * (qa + 3.0 * qb) / 12.0;
                    p.ae[i] += -1.0 / he + he * (qa + qb) / 12.0;
                    p.md[i] += he / 3.0;
                    p.md[i + 1] += he / 3.0;
                    p.me[i] += he / 6.0;
                }
            }
            BlockItem::Interface { beta } => {
                if beta == 0.0 {
                    return Err(SolveError::Model(crate::model::ModelError::Config(
                        "zero β reached the solver; must be normalized away".into(),
                    )));
                }
                let i = p.n() - 1;
                push_node(&mut p);
                let ib = 1.0 / beta;
                p.ad[i] += ib;
                p.ad[i + 1] += ib;
                p.ae[i] += -ib;
            }
        }
    }
    if matches!(right_bc, Bc::Dirichlet) {
        p.ad.pop();
        p.md.pop();
        p.ae.pop();
        p.me.pop();
    }
    if p.md.iter().any(|&m| m <= 0.0) {
        return Err(SolveError::SingularMass);
    }
    Ok(p)
}

/// Default mesh width for resolving eigenvalues up to `lambda_hi` on a block.
pub fn default_mesh(block: &Block, lambda_hi: f64) -> f64 {
    let freq = (lambda_hi - block.min_q()).max(1.0).sqrt();
    (0.2 / freq).min(block.len() / 4.0).min(0.25)
}

fn block_err_est(h: f64, lambda: f64, min_q: f64) -> f64 {
    let omega2 = (lambda - min_q).abs().max(1.0);
    h * h * omega2 * omega2 / 12.0
}

/// Window-restricted spectrum at a single mesh width.
pub fn galerkin_spectrum(
    problem: &TruncatedProblem,
    h: f64,
    window: (f64, f64),
) -> Result<SpectralResult, SolveError> {
    let (lo, hi) = window;
    let mut per_block = Vec::with_capacity(problem.blocks.len());
    for block in &problem.blocks {
        let pencil = assemble_block(block, h, block.right_bc)?;
        let eigs = pencil.eigs_in_window(lo, hi, 1e-12);
        per_block.push(
            eigs.into_iter()
                .map(|l| (l, block_err_est(h, l, block.min_q())))
                .collect(),
        );
    }
    Ok(merge_block_eigs(per_block, Engine::Galerkin))
}

/// Two-level Richardson extrapolation of the Galerkin spectrum (the P1
/// eigenvalue error is c·h² + O(h⁴)).
pub fn galerkin_extrapolated(
    problem: &TruncatedProblem,
    h: f64,
    window: (f64, f64),
) -> Result<SpectralResult, SolveError> {
    let (lo, hi) = window;
    let mut per_block = Vec::with_capacity(problem.blocks.len());
    for block in &problem.blocks {
        let coarse =
            assemble_block_refined(block, h, 1, block.right_bc)?.eigs_in_window(lo, hi, 1e-13);
        let fine =
            assemble_block_refined(block, h, 2, block.right_bc)?.eigs_in_window(lo, hi, 1e-13);
        let list = if coarse.len() == fine.len() {
            coarse
                .iter()
                .zip(&fine)
                .map(|(&c, &f)| ((4.0 * f - c) / 3.0, (f - c).abs() / 3.0 + 1e-12))
                .collect()
        } else {
            // a coarse-mesh eigenvalue drifted across the window edge
            fine.into_iter()
                .map(|l| (l, block_err_est(h / 2.0, l, block.min_q())))
                .collect()
        };
        per_block.push(list);
    }
    Ok(merge_block_eigs(per_block, Engine::Galerkin))
}

/// Counts eigenvalues of the truncated problem strictly below λ via inertia,
/// requiring two successive mesh levels to agree.
pub fn counting_function(problem: &TruncatedProblem, lambda: f64) -> Result<usize, SolveError> {
    let mut total_prev: Option<usize> = None;
    let mut level = 1.0;
    for _ in 0..4 {
        let mut total = 0;
        for block in &problem.blocks {
            let h = default_mesh(block, lambda) / level;
            let pencil = assemble_block(block, h, block.right_bc)?;
            total += pencil.inertia_below(lambda);
        }
        if total_prev == Some(total) {
            return Ok(total);
        }
        total_prev = Some(total);
        level *= 2.0;
    }
    Err(SolveError::NearEigenvalue { lambda })
}

/// Stable per-block count in a window (two agreeing mesh levels; falls back
/// to the finest level after four refinements).
pub fn stable_block_count(block: &Block, lo: f64, hi: f64) -> Result<usize, SolveError> {
    let mut prev: Option<usize> = None;
    let mut level = 1.0;
    let mut last = 0;
    for _ in 0..4 {
        let h = default_mesh(block, hi) / level;
        let pencil = assemble_block(block, h, block.right_bc)?;
        last = pencil
            .inertia_below(hi)
            .saturating_sub(pencil.inertia_below(lo));
        if prev == Some(last) {
            return Ok(last);
        }
        prev = Some(last);
        level *= 2.0;
    }
    Ok(last)
}
