//! Shooting engine: secular-function root scan per decoupled block.
//!
//! Each block is self-contained: β = +∞ imposes f′ = 0 on both sides, so the
//! initial state is always (1, 0). The secular value is the terminal f′
//! (Neumann) or f (Dirichlet); its zeros are the block eigenvalues, all
//! simple. Inertia counts from the Galerkin pencil are the ground truth for
//! how many roots a window must contain; the scan step is refined until the
//! root count matches.

use rayon::prelude::*;

use super::galerkin::stable_block_count;
use super::{
    merge_block_eigs, transfer, Bc, Block, BlockItem, Engine, SolveError, SpectralResult,
    TruncatedProblem,
};

/// Per-slab width criterion for sub-slicing affine pieces: |c₁|·h³ ≤ 1e−8.
fn slab_count(len: f64, q1: f64) -> usize {
    if q1 == 0.0 {
        return 1;
    }
    let h = (1e-8 / q1.abs()).cbrt();
    ((len / h).ceil() as usize).clamp(1, 100_000)
}

/// Secular value at λ. `slab_scale` multiplies the sub-slab counts of affine
/// pieces (used for Richardson extrapolation). Rescaling against overflow
/// preserves zeros and signs.
pub fn secular(block: &Block, lambda: f64, slab_scale: usize) -> f64 {
    let mut state = [1.0_f64, 0.0_f64];
    for item in &block.items {
        match *item {
            BlockItem::Piece { len, q0, q1 } => {
                if q1 == 0.0 {
                    transfer::propagate_piece(&mut state, len, q0, lambda);
                } else {
                    let n = slab_count(len, q1) * slab_scale;
                    let h = len / n as f64;
                    for i in 0..n {
                        let c_mid = q0 + q1 * (i as f64 + 0.5) * h;
                        transfer::propagate_piece(&mut state, h, c_mid, lambda);
                    }
                }
            }
            BlockItem::Interface { beta } => transfer::propagate_interface(&mut state, beta),
        }
        let mag = state[0].abs().max(state[1].abs());
        if mag > 1e150 {
            state[0] *= 1e-150;
            state[1] *= 1e-150;
        }
    }
    match block.right_bc {
        Bc::Neumann => state[1],
        Bc::Dirichlet => state[0],
    }
}

fn bisect(block: &Block, scale: usize, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= tol * mid.abs().max(1.0) {
            return mid;
        }
        let fm = secular(block, mid, scale);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Scans a window for secular roots with `steps` samples.
fn scan_roots(block: &Block, scale: usize, lo: f64, hi: f64, steps: usize, tol: f64) -> Vec<f64> {
    let dx = (hi - lo) / steps as f64;
    let samples: Vec<f64> = (0..=steps)
        .map(|i| secular(block, lo + dx * i as f64, scale))
        .collect();
    let mut roots = Vec::new();
    for i in 0..=steps {
        let x = lo + dx * i as f64;
        if samples[i] == 0.0 {
            roots.push(x);
        } else if i < steps && samples[i + 1] != 0.0 && (samples[i] > 0.0) != (samples[i + 1] > 0.0)
        {
            roots.push(bisect(block, scale, x, x + dx, samples[i], tol));
        }
    }
    roots
}

fn block_roots(
    block_index: usize,
    block: &Block,
    window: (f64, f64),
    tol: f64,
) -> Result<Vec<(f64, f64)>, SolveError> {
    let (lo, hi) = window;
    // Roots within `band` of a window edge are kept but exempt from the
    // inertia cross-check: the discrete count is ambiguous there.
    let band = 1e-6 * lo.abs().max(hi.abs()).max(1.0);
    let expected = stable_block_count(block, lo + band, hi - band)?;

    let find = |scale: usize| -> Result<Vec<f64>, SolveError> {
        let mut steps = 256;
        loop {
            let roots = scan_roots(block, scale, lo, hi, steps, tol);
            let inner = roots
                .iter()
                .filter(|&&r| r > lo + band && r < hi - band)
                .count();
            if inner == expected {
                return Ok(roots);
            }
            if steps >= 1 << 17 {
                return Err(SolveError::InconsistentCount {
                    block: block_index,
                    expected,
                    found: inner,
                });
            }
            steps *= 2;
        }
    };

    if !block.has_affine_piece() {
        let roots = find(1)?;
        return Ok(roots
            .into_iter()
            .map(|r| (r, tol * r.abs().max(1.0)))
            .collect());
    }
    // Richardson over slab-doubling for affine pieces.
    let coarse = find(1)?;
    let fine = find(2)?;
    if coarse.len() == fine.len() {
        Ok(coarse
            .iter()
            .zip(&fine)
            .map(|(&c, &f)| ((4.0 * f - c) / 3.0, (f - c).abs() / 3.0 + tol * f.abs().max(1.0)))
            .collect())
    } else {
        Ok(fine
            .into_iter()
            .map(|r| (r, 10.0 * tol * r.abs().max(1.0)))
            .collect())
    }
}

/// All eigenvalues of the truncated problem in `window`, each polished to
/// |Δλ| ≤ tol·max(1, |λ|), merged across blocks with multiplicity.
pub fn eigenvalues_shooting(
    problem: &TruncatedProblem,
    window: (f64, f64),
    tol: f64,
) -> Result<SpectralResult, SolveError> {
    if !(window.1 > window.0) || !window.0.is_finite() || !window.1.is_finite() {
        return Err(SolveError::WindowTooWide { lo: window.0, hi: window.1 });
    }
    let per_block: Result<Vec<_>, SolveError> = problem
        .blocks
        .par_iter()
        .enumerate()
        .map(|(i, b)| block_roots(i, b, window, tol))
        .collect();
    Ok(merge_block_eigs(per_block?, Engine::Shooting))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::builders;
    use std::f64::consts::PI;

    #[test]
    fn free_block_secular_values() {
        // single cell [0,1], q≡0: secular(λ) = −√λ sin √λ; at λ = 1: −sin 1
        let spec = builders::explicit(&[1.0], &[1.0], None).unwrap();
        let p = TruncatedProblem::new(&spec, Bc::Neumann);
        let s = secular(&p.blocks[0], 1.0, 1);
        assert!((s - (-(1.0f64).sin())).abs() < 1e-14);
        // λ = (πn/L)² are roots
        for n in 0..4 {
            let lam = (PI * n as f64).powi(2);
            assert!(secular(&p.blocks[0], lam, 1).abs() < 1e-10 * lam.max(1.0));
        }
    }

    #[test]
    fn free_interval_neumann_lattice() {
        let spec = builders::explicit(&[10.0], &[1.0], None).unwrap();
        let p = TruncatedProblem::new(&spec, Bc::Neumann);
        let r = eigenvalues_shooting(&p, (-1.0, 5.0), 1e-12).unwrap();
        let expect: Vec<f64> = (0..)
            .map(|n| (PI * n as f64 / 10.0).powi(2))
            .take_while(|&l| l <= 5.0)
            .collect();
        assert_eq!(r.eigenvalues.len(), expect.len());
        for (e, ex) in r.eigenvalues.iter().zip(&expect) {
            assert!(
                (e.lambda - ex).abs() <= 1e-10 * ex.max(1.0),
                "{} vs {ex}",
                e.lambda
            );
        }
    }

    #[test]
    fn single_delta_prime_bound_state_matches_transcendental_root() {
        // β = −1 at x = 1 on [0,2]: bound state at λ = −κ² with κ tanh κ = 2.
        let spec = builders::explicit(&[1.0, 2.0], &[-1.0, 1.0], None).unwrap();
        let p = TruncatedProblem::new(&spec, Bc::Neumann);
        let r = eigenvalues_shooting(&p, (-10.0, -1e-6), 1e-12).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        // independent root of κ·tanh(κ) = 2 by bisection
        let g = |k: f64| k * k.tanh() - 2.0;
        let (mut a, mut b) = (1.0, 3.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if g(m) > 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let kappa = 0.5 * (a + b);
        let expect = -kappa * kappa;
        assert!(
            (r.eigenvalues[0].lambda - expect).abs() < 1e-9 * expect.abs(),
            "{} vs {expect}",
            r.eigenvalues[0].lambda
        );
    }

    #[test]
    fn dirichlet_right_end_raises_eigenvalues() {
        let spec = builders::explicit_with_potential(
            &[1.0, 2.5],
            &[0.8, 1.0],
            &[(0.0, 2.5, -1.0, 0.6)],
        )
        .unwrap();
        let pn = TruncatedProblem::new(&spec, Bc::Neumann);
        let pd = TruncatedProblem::new(&spec, Bc::Dirichlet);
        let rn = eigenvalues_shooting(&pn, (-8.0, 40.0), 1e-11).unwrap();
        let rd = eigenvalues_shooting(&pd, (-8.0, 40.0), 1e-11).unwrap();
        for (n, d) in rn.flattened().iter().zip(rd.flattened().iter()) {
            assert!(d >= n, "dirichlet {d} below neumann {n}");
        }
    }
}
