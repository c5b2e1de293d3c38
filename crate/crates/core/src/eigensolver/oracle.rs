//! Dense finite-difference oracle: an independent verification path.
//!
//! Second-order differences per cell with ghost-eliminated interface rows
//! (f′ continuity and jump = β f′), symmetrized by the diagonal half-cell
//! weights, then a full dense symmetric eigensolve and Richardson
//! extrapolation over grid halving. Discretization (lumped nodal potential)
//! and algorithm (Householder + implicit QL) are both disjoint from the
//! Galerkin and shooting paths.

use nalgebra::DMatrix;

use super::{merge_block_eigs, Bc, Block, BlockItem, Engine, SolveError, SpectralResult, TruncatedProblem};

pub const MAX_ORACLE_NODES: usize = 20_000;

struct FdBlock {
    a_diag: Vec<f64>,
    a_off: Vec<f64>,
    weight: Vec<f64>,
}

/// `refine` multiplies the per-piece subdivision counts chosen at the base
/// width `h`, so successive levels nest exactly and Richardson extrapolation
/// sees the same h² coefficient.
fn assemble_fd(block: &Block, h: f64, refine: usize, right_bc: Bc) -> FdBlock {
    let mut a_diag = vec![0.0];
    let mut a_off: Vec<f64> = Vec::new();
    let mut weight = vec![0.0];
    // nodal potential: average of the side limits meeting at the node
    let mut q_sum = vec![0.0];
    let mut q_cnt = vec![0usize];

    for item in &block.items {
        match *item {
            BlockItem::Piece { len, q0, q1 } => {
                let n = ((len / h).ceil().max(1.0) as usize) * refine;
                let hp = len / n as f64;
                let left = a_diag.len() - 1;
                q_sum[left] += q0;
                q_cnt[left] += 1;
                for j in 1..=n {
                    a_diag.push(0.0);
                    a_off.push(0.0);
                    weight.push(0.0);
                    q_sum.push(q0 + q1 * hp * j as f64);
                    q_cnt.push(1);
                    let i = a_diag.len() - 2;
                    a_diag[i] += 1.0 / hp;
                    a_diag[i + 1] += 1.0 / hp;
                    a_off[i] -= 1.0 / hp;
                    weight[i] += hp / 2.0;
                    weight[i + 1] += hp / 2.0;
                }
            }
            BlockItem::Interface { beta } => {
                a_diag.push(0.0);
                a_off.push(0.0);
                weight.push(0.0);
                q_sum.push(0.0);
                q_cnt.push(0);
                let i = a_diag.len() - 2;
                let ib = 1.0 / beta;
                a_diag[i] += ib;
                a_diag[i + 1] += ib;
                a_off[i] -= ib;
            }
        }
    }
    for i in 0..a_diag.len() {
        if q_cnt[i] > 0 {
            a_diag[i] += weight[i] * q_sum[i] / q_cnt[i] as f64;
        }
    }
    if matches!(right_bc, Bc::Dirichlet) {
        a_diag.pop();
        weight.pop();
        a_off.pop();
    }
    FdBlock { a_diag, a_off, weight }
}

fn eigs_dense(fd: &FdBlock) -> Vec<f64> {
    let n = fd.a_diag.len();
    let s: Vec<f64> = fd.weight.iter().map(|w| 1.0 / w.sqrt()).collect();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = fd.a_diag[i] * s[i] * s[i];
        if i + 1 < n {
            let v = fd.a_off[i] * s[i] * s[i + 1];
            m[(i, i + 1)] = v;
            m[(i + 1, i)] = v;
        }
    }
    let mut eigs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Dense-oracle spectrum inside `window`, Richardson-extrapolated over
/// (h, h/2). Grid totals above `MAX_ORACLE_NODES` are rejected.
pub fn dense_oracle(
    problem: &TruncatedProblem,
    h: f64,
    window: (f64, f64),
) -> Result<SpectralResult, SolveError> {
    let nodes: usize = problem
        .blocks
        .iter()
        .map(|b| {
            b.items
                .iter()
                .map(|it| match it {
                    BlockItem::Piece { len, .. } => (len / (h / 2.0)).ceil() as usize + 1,
                    BlockItem::Interface { .. } => 1,
                })
                .sum::<usize>()
        })
        .sum();
    if nodes > MAX_ORACLE_NODES {
        return Err(SolveError::TooLarge { nodes, max: MAX_ORACLE_NODES });
    }
    let (lo, hi) = window;
    let mut per_block = Vec::with_capacity(problem.blocks.len());
    for block in &problem.blocks {
        let coarse = eigs_dense(&assemble_fd(block, h, 1, block.right_bc));
        let fine = eigs_dense(&assemble_fd(block, h, 2, block.right_bc));
        let m = coarse.len().min(fine.len());
        let mut list = Vec::new();
        for i in 0..m {
            let ex = (4.0 * fine[i] - coarse[i]) / 3.0;
            if ex >= lo && ex <= hi {
                list.push((ex, (fine[i] - coarse[i]).abs() / 3.0 + 1e-12));
            }
        }
        per_block.push(list);
    }
    Ok(merge_block_eigs(per_block, Engine::Oracle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::builders;
    use crate::eigensolver::TruncatedProblem;
    use std::f64::consts::PI;

    #[test]
    fn free_interval_extrapolated_lattice() {
        let spec = builders::explicit(&[1.0], &[1.0], None).unwrap();
        let p = TruncatedProblem::new(&spec, Bc::Neumann);
        let r = dense_oracle(&p, 1.0 / 200.0, (-1.0, 260.0)).unwrap();
        for (n, e) in r.eigenvalues.iter().enumerate().take(5) {
            let exact = (PI * n as f64).powi(2);
            assert!(
                (e.lambda - exact).abs() < 1e-5 * exact.max(1.0),
                "n={n}: {} vs {exact}",
                e.lambda
            );
        }
    }

    #[test]
    fn beta_zero_matrix_equals_no_interaction() {
        // normalized-away couplings leave the same single-block assembly
        let a = builders::explicit(&[1.0, 2.0], &[0.0, 0.0], None).unwrap();
        let b = builders::explicit(&[2.0], &[0.0], None).unwrap();
        let pa = TruncatedProblem::new(&a, Bc::Neumann);
        let pb = TruncatedProblem::new(&b, Bc::Neumann);
        let fa = assemble_fd(&pa.blocks[0], 0.125, 1, Bc::Neumann);
        let fb = assemble_fd(&pb.blocks[0], 0.125, 1, Bc::Neumann);
        assert_eq!(fa.a_diag, fb.a_diag);
        assert_eq!(fa.a_off, fb.a_off);
        assert_eq!(fa.weight, fb.weight);
    }

    #[test]
    fn oracle_too_large_is_rejected() {
        let spec = builders::explicit(&[1.0], &[1.0], None).unwrap();
        let p = TruncatedProblem::new(&spec, Bc::Neumann);
        assert!(matches!(
            dense_oracle(&p, 1e-6, (-1.0, 1.0)),
            Err(SolveError::TooLarge { .. })
        ));
    }
}
