//! The decoupled Neumann direct sum ⊕_k H^N_{q,k} and the predicted
//! essential spectrum {0} ∪ {π²n²/λ² : λ ∈ 𝒟} built from the set 𝒟 of
//! recurrent/accumulating cell lengths.
//!
//! 𝒟 is declaration-driven: a finite length list cannot distinguish "occurs
//! infinitely often" from "occurs 10⁶ times", so without a recognized
//! partition generator or tail declarations the set is undecidable and that
//! is a first-class outcome.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

use crate::config::builders;
use crate::criteria;
use crate::eigensolver::{self, Bc, SolveError, TruncatedProblem};
use crate::model::{ExtReal, ModelError, OperatorSpec, PartitionClass};

#[derive(Debug, Error)]
pub enum NeumannError {
    #[error("cutoff Λ = {lambda_max} is not above the cell potential minimum {q_min}")]
    CutoffTooLow { lambda_max: f64, q_min: f64 },
    #[error("the set 𝒟 is undecidable: no tail declaration or recognized partition generator")]
    UndecidableTail,
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellMethod {
    AnalyticConstant,
    ShootingAffine,
}

/// Neumann spectrum of one cell up to a cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct CellSpectrum {
    pub cell: usize,
    pub eigenvalues: Vec<f64>,
    pub method: CellMethod,
    pub err_est: f64,
}

/// One point of the direct-sum spectrum with contributing cells.
#[derive(Clone, Debug, Serialize)]
pub struct DirectSumPoint {
    pub lambda: f64,
    pub multiplicity: usize,
    pub cells: Vec<usize>,
}

/// Predicted essential spectrum of the Neumann comparison operator.
#[derive(Clone, Debug, Serialize)]
pub struct EssSpectrumModel {
    pub d_set: Vec<f64>,
    pub points: Vec<f64>,
    pub provenance: String,
}

/// Eigenvalues ≤ Λ of the Neumann realization on cell k: exact lattice
/// {c + (πn/d)²} for constant q, shooting with slab extrapolation otherwise.
pub fn cell_neumann_eigs(
    spec: &OperatorSpec,
    k: usize,
    lambda_max: f64,
) -> Result<CellSpectrum, NeumannError> {
    let pieces = spec.cell_pieces(k)?;
    let d = spec.d(k);
    let min_q = pieces
        .iter()
        .map(|p| p.q(p.from).min(p.q(p.to)))
        .fold(f64::INFINITY, f64::min);
    if lambda_max <= min_q {
        return Err(NeumannError::CutoffTooLow { lambda_max, q_min: min_q });
    }
    let constant = pieces
        .iter()
        .all(|p| p.c1 == 0.0 && p.c0 == pieces[0].c0)
        .then(|| pieces[0].c0);
    if let Some(c) = constant {
        let mut eigenvalues = Vec::new();
        let mut n = 0u32;
        loop {
            let lam = c + (PI * n as f64 / d).powi(2);
            if lam > lambda_max {
                break;
            }
            eigenvalues.push(lam);
            n += 1;
        }
        return Ok(CellSpectrum {
            cell: k,
            eigenvalues,
            method: CellMethod::AnalyticConstant,
            err_est: 0.0,
        });
    }
    // affine pieces: delegate to the shooting engine on a one-cell spec
    let a = spec.x(k - 1);
    let local: Vec<(f64, f64, f64, f64)> = pieces
        .iter()
        .map(|p| (p.from - a, p.to - a, p.c0 + p.c1 * a, p.c1))
        .collect();
    let cell_spec = builders::explicit_with_potential(&[d], &[1.0], &local)?;
    let problem = TruncatedProblem::new(&cell_spec, Bc::Neumann);
    let r = eigensolver::eigenvalues_shooting(&problem, (min_q - 1.0, lambda_max), 1e-12)?;
    Ok(CellSpectrum {
        cell: k,
        eigenvalues: r.flattened(),
        method: CellMethod::ShootingAffine,
        err_est: r
            .eigenvalues
            .iter()
            .map(|e| e.err_est)
            .fold(0.0, f64::max),
    })
}

/// Merged sorted multiset of all cell eigenvalues ≤ Λ, with multiplicity
/// equal to the number of contributing cells.
pub fn direct_sum_spectrum(
    spec: &OperatorSpec,
    lambda_max: f64,
) -> Result<Vec<DirectSumPoint>, NeumannError> {
    let cells: Result<Vec<CellSpectrum>, NeumannError> = (1..=spec.num_cells())
        .into_par_iter()
        .map(|k| cell_neumann_eigs(spec, k, lambda_max))
        .collect();
    let mut entries: Vec<(f64, usize)> = Vec::new();
    for cs in cells? {
        for lam in cs.eigenvalues {
            entries.push((lam, cs.cell));
        }
    }
    entries.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut out: Vec<DirectSumPoint> = Vec::new();
    for (lam, cell) in entries {
        if let Some(last) = out.last_mut() {
            if (lam - last.lambda).abs() <= 1e-9 * lam.abs().max(1.0) {
                last.multiplicity += 1;
                last.cells.push(cell);
                continue;
            }
        }
        out.push(DirectSumPoint { lambda: lam, multiplicity: 1, cells: vec![cell] });
    }
    Ok(out)
}

/// The set 𝒟 of lengths occurring infinitely often plus nonzero
/// accumulation points, from declarations or a recognized generator.
pub fn compute_d_set(spec: &OperatorSpec) -> Result<Vec<f64>, NeumannError> {
    let mut d_set: Vec<f64> = Vec::new();
    let mut decided = false;
    match spec.partition_class() {
        PartitionClass::Arithmetic { step } => {
            d_set.push(step);
            decided = true;
        }
        PartitionClass::SumPower { exponent } => {
            if exponent < 0.0 {
                decided = true; // d_k → 0: contributes nothing
            } else if exponent == 0.0 {
                d_set.push(1.0);
                decided = true;
            }
        }
        PartitionClass::Explicit => {}
    }
    if let Some(rec) = &spec.tail().recurrent_lengths {
        d_set.extend(rec.iter().copied().filter(|&r| r > 0.0));
        decided = true;
    }
    match spec.tail().d_limit {
        Some(ExtReal::Finite(l)) => {
            if l > 0.0 {
                d_set.push(l);
            }
            decided = true;
        }
        Some(_) => decided = true,
        None => {}
    }
    if !decided {
        return Err(NeumannError::UndecidableTail);
    }
    d_set.sort_by(f64::total_cmp);
    d_set.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    Ok(d_set)
}

/// σ_ess(H^N_X) = {0} ∪ ⋃_{λ∈𝒟} {π²n²/λ²}, truncated at Λ. Requires the
/// vanishing mean-|q| hypothesis and d* < ∞.
pub fn ess_spectrum_n(spec: &OperatorSpec, lambda_max: f64) -> Result<EssSpectrumModel, NeumannError> {
    let qv = criteria::check_q_mean_vanishes(spec);
    if !qv.is_holds() {
        return Err(NeumannError::HypothesisNotMet(format!(
            "mean |q| must vanish along cells; verdict is {:?}",
            qv.status
        )));
    }
    let stats = spec.extent_stats();
    if !stats.d_sup.is_finite() {
        return Err(NeumannError::HypothesisNotMet("d* must be finite".into()));
    }
    let d_set = compute_d_set(spec)?;
    let mut points = vec![0.0];
    for &l in &d_set {
        let mut n = 1u32;
        loop {
            let p = (PI * n as f64 / l).powi(2);
            if p > lambda_max {
                break;
            }
            points.push(p);
            n += 1;
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    let provenance = match spec.partition_class() {
        PartitionClass::Arithmetic { step } => format!("arithmetic generator, d ≡ {step}"),
        PartitionClass::SumPower { exponent } => format!("power-law generator, d_k = k^{exponent}"),
        PartitionClass::Explicit => "tail declarations".into(),
    };
    Ok(EssSpectrumModel { d_set, points, provenance })
}
