//! Truncated spectra of H_{X,β,q} on [0, x_K] by three engines: shooting with
//! interface transfer matrices, P1 Galerkin with inertia bisection, and a
//! dense finite-difference oracle.
//!
//! The problem decouples at every β = +∞ site into blocks; within a block all
//! eigenvalues are simple, so multiplicity ≥ 2 only arises across blocks.

mod galerkin;
mod oracle;
mod shooting;
mod transfer;

pub use galerkin::{counting_function, galerkin_extrapolated, galerkin_spectrum, TridiagPencil};
pub use oracle::dense_oracle;
pub use shooting::eigenvalues_shooting;
pub use transfer::{interface_matrix, piece_matrix, propagate_interface, propagate_piece};

use serde::Serialize;
use thiserror::Error;

use crate::model::{Coupling, ModelError, OperatorSpec};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("cutoff Λ = {lambda_max} is not above the cell potential minimum {q_min}")]
    CutoffTooLow { lambda_max: f64, q_min: f64 },
    #[error("scan budget exceeded for window [{lo}, {hi}]")]
    WindowTooWide { lo: f64, hi: f64 },
    #[error("block {block}: found {found} secular roots but inertia count is {expected}")]
    InconsistentCount { block: usize, expected: usize, found: usize },
    #[error("mass matrix is singular")]
    SingularMass,
    #[error("λ = {lambda} is too close to a discrete eigenvalue; perturb and retry")]
    NearEigenvalue { lambda: f64 },
    #[error("problem size {nodes} exceeds the dense-oracle limit {max}")]
    TooLarge { nodes: usize, max: usize },
    #[error("interface has β = ∞; route through block splitting")]
    InfiniteBeta,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Shooting,
    Galerkin,
    Oracle,
}

/// Ordered content of one decoupled block.
#[derive(Clone, Debug)]
pub enum BlockItem {
    /// Constant-or-affine piece: q(t) = q0 + q1·t in piece-local coordinates.
    Piece { len: f64, q0: f64, q1: f64 },
    /// Finite-β interface.
    Interface { beta: f64 },
}

/// Maximal sub-interval between β = +∞ sites. Both block ends carry f′ = 0
/// except the final block, whose right end uses the problem's right BC.
#[derive(Clone, Debug)]
pub struct Block {
    pub left: f64,
    pub right: f64,
    pub items: Vec<BlockItem>,
    pub right_bc: Bc,
    /// 1-based inclusive cell range covered by this block.
    pub cells: (usize, usize),
}

impl Block {
    pub fn min_q(&self) -> f64 {
        self.items
            .iter()
            .filter_map(|it| match it {
                BlockItem::Piece { len, q0, q1 } => {
                    Some((q0).min(q0 + q1 * len))
                }
                BlockItem::Interface { .. } => None,
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_piece_len(&self) -> f64 {
        self.items
            .iter()
            .filter_map(|it| match it {
                BlockItem::Piece { len, .. } => Some(*len),
                BlockItem::Interface { .. } => None,
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> f64 {
        self.right - self.left
    }

    pub fn has_affine_piece(&self) -> bool {
        self.items
            .iter()
            .any(|it| matches!(it, BlockItem::Piece { q1, .. } if *q1 != 0.0))
    }
}

/// The truncated boundary-value problem on [0, x_K].
#[derive(Clone, Debug)]
pub struct TruncatedProblem {
    pub spec: OperatorSpec,
    pub right_bc: Bc,
    pub blocks: Vec<Block>,
}

impl TruncatedProblem {
    /// Splits the spec at β = +∞ sites. The left boundary condition is always
    /// f′(0) = 0; the interface at x_K (if any) is superseded by the right BC.
    pub fn new(spec: &OperatorSpec, right_bc: Bc) -> Self {
        let k_max = spec.num_cells();
        let mut blocks = Vec::new();
        let mut items = Vec::new();
        let mut left = 0.0;
        let mut first_cell = 1;
        for k in 1..=k_max {
            for piece in spec.cell_pieces(k).expect("valid cell index") {
                items.push(BlockItem::Piece {
                    len: piece.len(),
                    q0: piece.q(piece.from),
                    q1: piece.c1,
                });
            }
            if k == k_max {
                break;
            }
            match spec.coupling(k) {
                Coupling::NoInteraction => {}
                Coupling::Finite(beta) => items.push(BlockItem::Interface { beta }),
                Coupling::Neumann => {
                    blocks.push(Block {
                        left,
                        right: spec.x(k),
                        items: std::mem::take(&mut items),
                        right_bc: Bc::Neumann,
                        cells: (first_cell, k),
                    });
                    left = spec.x(k);
                    first_cell = k + 1;
                }
            }
        }
        blocks.push(Block {
            left,
            right: spec.x(k_max),
            items,
            right_bc,
            cells: (first_cell, k_max),
        });
        TruncatedProblem { spec: spec.clone(), right_bc, blocks }
    }

    pub fn min_q(&self) -> f64 {
        self.blocks.iter().map(Block::min_q).fold(f64::INFINITY, f64::min)
    }
}

/// One computed eigenvalue with provenance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigVal {
    pub lambda: f64,
    pub multiplicity: usize,
    pub err_est: f64,
    /// Index of one block contributing this eigenvalue.
    pub block: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralResult {
    pub method: Engine,
    pub eigenvalues: Vec<EigVal>,
    /// Optional sampled counting function (λ, N(λ)).
    pub counting: Vec<(f64, usize)>,
}

impl SpectralResult {
    /// Flattens multiplicities into a sorted list of λ values.
    pub fn flattened(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for e in &self.eigenvalues {
            for _ in 0..e.multiplicity {
                out.push(e.lambda);
            }
        }
        out
    }
}

/// Merges per-block simple eigenvalues into a multiset, grouping values that
/// agree within tolerance; multiplicity counts contributing blocks.
pub fn merge_block_eigs(per_block: Vec<Vec<(f64, f64)>>, method: Engine) -> SpectralResult {
    let mut all: Vec<(f64, f64, usize)> = Vec::new();
    for (bi, list) in per_block.into_iter().enumerate() {
        for (lam, err) in list {
            all.push((lam, err, bi));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut eigenvalues: Vec<EigVal> = Vec::new();
    for (lam, err, bi) in all {
        if let Some(last) = eigenvalues.last_mut() {
            let tol = 1e-9 * last.lambda.abs().max(1.0) + 2.0 * (last.err_est + err);
            if (lam - last.lambda).abs() <= tol {
                last.multiplicity += 1;
                last.err_est = last.err_est.max(err);
                continue;
            }
        }
        eigenvalues.push(EigVal { lambda: lam, multiplicity: 1, err_est: err, block: bi });
    }
    SpectralResult { method, eigenvalues, counting: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::builders;

    #[test]
    fn blocks_split_at_neumann_sites() {
        let spec =
            builders::explicit(&[1.0, 2.0, 3.0, 4.0], &[1.0, f64::INFINITY, -2.0, 1.0], None)
                .unwrap();
        let p = TruncatedProblem::new(&spec, Bc::Neumann);
        assert_eq!(p.blocks.len(), 2);
        assert_eq!(p.blocks[0].cells, (1, 2));
        assert_eq!(p.blocks[1].cells, (3, 4));
        assert_eq!(p.blocks[0].right, 2.0);
        assert!(matches!(p.blocks[1].items[1], BlockItem::Interface { beta } if beta == -2.0));
    }

    #[test]
    fn continuity_points_do_not_split_or_couple() {
        let spec = builders::explicit(&[1.0, 2.0], &[0.0, 0.0], None).unwrap();
        let p = TruncatedProblem::new(&spec, Bc::Neumann);
        assert_eq!(p.blocks.len(), 1);
        assert!(p.blocks[0]
            .items
            .iter()
            .all(|it| matches!(it, BlockItem::Piece { .. })));
    }
}
