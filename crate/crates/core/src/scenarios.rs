//! Named end-to-end runs: each builds a spec family, evaluates criteria and
//! spectra across a truncation ladder, and compares computed outcomes against
//! the expected verdict patterns. Pass/fail is always computed from the run,
//! never hard-coded.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::config::{
    builders, MolchanovDecl, PartitionConfig, PartitionGenerator, PieceConfig, PotentialConfig,
    SpecConfig, StrengthsConfig, StrengthsGenerator, SubseqDecl, TailSpec,
};
use crate::criteria::{self, CriteriaParams, CriterionReport, VerdictStatus};
use crate::eigensolver::{self, Bc, SolveError, TruncatedProblem};
use crate::forms::{self, FormError, Segment, TestFunctionKind};
use crate::model::{Coupling, ExtReal, ModelError, OperatorSpec};
use crate::neumann::{self, NeumannError};

pub const SCENARIOS: &[&str] = &[
    "kronig_penney",
    "shrinking_cells",
    "ramp_with_gaps",
    "gated_ramp",
    "negative_coupling_pairs",
    "sparse_deep_wells",
    "gradient_blowup",
    "h_stability",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`; run `dspec scenario --list` for the available names")]
    Unknown(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Neumann(#[from] NeumannError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Free-form `key=value` parameters plus ladder/stabilization thresholds.
#[derive(Clone, Debug, Default)]
pub struct ScenarioParams {
    pub raw: BTreeMap<String, String>,
}

impl ScenarioParams {
    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        match self.raw.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| ScenarioError::BadParam(format!("{key}={s} is not a number"))),
        }
    }

    pub fn get_usize_list(
        &self,
        key: &str,
        default: &[usize],
    ) -> Result<Vec<usize>, ScenarioError> {
        match self.raw.get(key) {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| ScenarioError::BadParam(format!("{key}: bad entry `{t}`")))
                })
                .collect(),
        }
    }

    pub fn get_f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, ScenarioError> {
        match self.raw.get(key) {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| ScenarioError::BadParam(format!("{key}: bad entry `{t}`")))
                })
                .collect(),
        }
    }

    pub fn get_str(&self, key: &str, default: &str) -> String {
        self.raw.get(key).cloned().unwrap_or_else(|| default.to_string())
    }

    /// Stabilization threshold: counts may move by max(abs, rel·count).
    pub fn stab_threshold(&self, count: usize) -> f64 {
        let abs = self.raw.get("stab_abs").and_then(|s| s.parse::<f64>().ok()).unwrap_or(2.0);
        let rel = self.raw.get("stab_rel").and_then(|s| s.parse::<f64>().ok()).unwrap_or(0.05);
        abs.max(rel * count as f64)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub pass: bool,
    pub observed: String,
    pub expected: String,
}

impl NamedCheck {
    fn new(name: &str, pass: bool, observed: impl Into<String>, expected: impl Into<String>) -> Self {
        NamedCheck { name: name.into(), pass, observed: observed.into(), expected: expected.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RungData {
    pub truncation: usize,
    /// Sampled counting function (λ, N(λ)).
    pub counting: Vec<(f64, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lowest_eigenvalue: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub config: SpecConfig,
    pub criteria: CriterionReport,
    pub rungs: Vec<RungData>,
    pub checks: Vec<NamedCheck>,
    pub pass: bool,
}

impl ScenarioReport {
    fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }
}

fn status_check(name: &str, v: &crate::criteria::Verdict, want: VerdictStatus) -> NamedCheck {
    NamedCheck::new(
        name,
        v.status == want,
        format!("{:?} (source: {})", v.status, v.source),
        format!("{want:?}"),
    )
}

/// Runs a scenario by name.
pub fn run(name: &str, params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    match name {
        "kronig_penney" => kronig_penney(params),
        "shrinking_cells" => shrinking_cells(params),
        "ramp_with_gaps" => ramp_with_gaps(params),
        "gated_ramp" => gated_ramp(params),
        "negative_coupling_pairs" => negative_coupling_pairs(params),
        "sparse_deep_wells" => sparse_deep_wells(params),
        "gradient_blowup" => gradient_blowup(params),
        "h_stability" => h_stability(params),
        other => Err(ScenarioError::Unknown(other.into())),
    }
}

// ---------------------------------------------------------------------------
// periodic lattice with weakening couplings
// ---------------------------------------------------------------------------

fn kronig_penney(params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    let a = params.get_f64("a", 1.0)?;
    let c = params.get_f64("c", 0.0)?;
    let slope = params.get_f64("beta_slope", 1.0)?;
    let truncations = params.get_usize_list("truncations", &[50, 100])?;
    let k_big = *truncations.iter().max().unwrap();

    let cfg = builders::kronig_penney(a, c, slope, k_big);
    let spec = OperatorSpec::build(cfg.clone())?;
    let report = criteria::evaluate(&spec);

    let mut checks = vec![
        status_check(
            "coupling ratio vanishes",
            &report.conditions.coupling_vanishes,
            VerdictStatus::Holds,
        ),
        status_check(
            "essential spectrum transfers to the decoupled comparison operator",
            &report.derived.ess_spectrum_transfer,
            VerdictStatus::Holds,
        ),
    ];

    // predicted lattice = Neumann spectrum of one period cell
    let lambda_max = params.get_f64("lambda_max", (4.0 * std::f64::consts::PI.powi(2) / (a * a)) + c - 1.0)?;
    let lattice = neumann::cell_neumann_eigs(&spec, 1, lambda_max)?.eigenvalues;
    if c == 0.0 {
        let model = neumann::ess_spectrum_n(&spec, lambda_max)?;
        let agree = model.points.len() == lattice.len()
            && model
                .points
                .iter()
                .zip(&lattice)
                .all(|(m, l)| (m - l).abs() <= 1e-10 * l.abs().max(1.0));
        checks.push(NamedCheck::new(
            "lattice model agrees with the recurrent-length prediction",
            agree,
            format!("{} vs {} points", lattice.len(), model.points.len()),
            "identical point sets",
        ));
    }

    // ladder: counts near each lattice point grow; counts in between stay put
    let delta = params.get_f64("delta", 0.75)?;
    let mut rungs = Vec::new();
    let mut near_counts: Vec<Vec<usize>> = Vec::new();
    let mut gap_counts: Vec<usize> = Vec::new();
    for &k in &truncations {
        let spec_k = OperatorSpec::build(builders::kronig_penney(a, c, slope, k))?;
        let problem = TruncatedProblem::new(&spec_k, Bc::Neumann);
        let mut counting = Vec::new();
        let mut near = Vec::new();
        for &p in lattice.iter().filter(|&&p| p <= lambda_max) {
            let below = eigensolver::counting_function(&problem, p - delta)?;
            let above = eigensolver::counting_function(&problem, p + delta)?;
            counting.push((p - delta, below));
            counting.push((p + delta, above));
            near.push(above - below);
        }
        // gap window between the first two lattice points
        let gap = if lattice.len() >= 2 {
            let lo = lattice[0] + delta;
            let hi = lattice[1] - delta;
            eigensolver::counting_function(&problem, hi)?
                - eigensolver::counting_function(&problem, lo)?
        } else {
            0
        };
        gap_counts.push(gap);
        near_counts.push(near);
        rungs.push(RungData { truncation: k, counting, lowest_eigenvalue: None });
    }
    if truncations.len() >= 2 {
        let first = &near_counts[0];
        let last = &near_counts[near_counts.len() - 1];
        let grew = first.iter().zip(last).all(|(f, l)| l > f);
        checks.push(NamedCheck::new(
            "eigenvalue clusters near lattice points grow with the truncation",
            grew,
            format!("{first:?} → {last:?}"),
            "strict growth at every lattice point",
        ));
        let g0 = gap_counts[0] as f64;
        let g1 = gap_counts[gap_counts.len() - 1] as f64;
        let thr = params.stab_threshold(gap_counts[gap_counts.len() - 1]);
        checks.push(NamedCheck::new(
            "count between lattice points stabilizes",
            (g1 - g0).abs() <= thr,
            format!("{g0} → {g1}"),
            format!("change ≤ {thr}"),
        ));
    }

    Ok(ScenarioReport {
        id: "kronig_penney".into(),
        params: params.raw.clone(),
        config: cfg,
        criteria: report,
        rungs,
        checks,
        pass: false,
    }
    .finish())
}

// ---------------------------------------------------------------------------
// shrinking cells: d_k = k^{−p}
// ---------------------------------------------------------------------------

fn shrinking_cells(params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    let p = params.get_f64("p", 0.5)?;
    if !(p > 0.0 && p <= 0.5) {
        return Err(ScenarioError::BadParam("need 0 < p ≤ 1/2".into()));
    }
    let beta_slope = params.get_f64("beta_slope", 1.0)?;
    let beta_const = params.raw.get("beta_const").map(|s| s.parse::<f64>());
    let truncations = params.get_usize_list("truncations", &[200, 400])?;
    let k_big = *truncations.iter().max().unwrap();

    let make_cfg = |count: usize| -> Result<SpecConfig, ScenarioError> {
        let mut cfg = builders::sum_power_config(-p, count, beta_slope, 0.0);
        if let Some(c) = &beta_const {
            let c = *c
                .as_ref()
                .map_err(|_| ScenarioError::BadParam("beta_const must be a number".into()))?;
            cfg.strengths = StrengthsConfig {
                values: None,
                generator: Some(StrengthsGenerator::Linear { slope: 0.0, intercept: c }),
            };
        }
        Ok(cfg)
    };
    let cfg = make_cfg(k_big)?;
    let spec = OperatorSpec::build(cfg.clone())?;
    let report = criteria::evaluate(&spec);

    let mut checks = Vec::new();
    if beta_const.is_none() {
        checks.push(status_check(
            "coupling ratio vanishes",
            &report.conditions.coupling_vanishes,
            VerdictStatus::Holds,
        ));
        let model = neumann::ess_spectrum_n(&spec, params.get_f64("lambda_max", 50.0)?)?;
        checks.push(NamedCheck::new(
            "predicted essential spectrum is {0}",
            model.points == vec![0.0],
            format!("{:?}", model.points),
            "[0.0]",
        ));
    } else {
        checks.push(status_check(
            "constant couplings: coupling ratio fails to vanish",
            &report.conditions.coupling_vanishes,
            VerdictStatus::Fails,
        ));
        checks.push(status_check(
            "transfer not licensed",
            &report.derived.ess_spectrum_transfer,
            VerdictStatus::Inconclusive,
        ));
    }

    // counting ladder: growth at λ = 1, stability on [1, 50]
    let mut rungs = Vec::new();
    let mut at_one = Vec::new();
    let mut band = Vec::new();
    for &k in &truncations {
        let spec_k = OperatorSpec::build(make_cfg(k)?)?;
        let problem = TruncatedProblem::new(&spec_k, Bc::Neumann);
        let n1 = eigensolver::counting_function(&problem, 1.0)?;
        let n50 = eigensolver::counting_function(&problem, 50.0)?;
        at_one.push(n1);
        band.push(n50 - n1);
        rungs.push(RungData {
            truncation: k,
            counting: vec![(1.0, n1), (50.0, n50)],
            lowest_eigenvalue: None,
        });
    }
    if truncations.len() >= 2 {
        let grew = at_one.windows(2).all(|w| w[1] > w[0]);
        checks.push(NamedCheck::new(
            "counting function at λ = 1 grows with the truncation",
            grew,
            format!("{at_one:?}"),
            "strict growth",
        ));
        let b0 = band[0] as f64;
        let b1 = band[band.len() - 1] as f64;
        let thr = params.stab_threshold(band[band.len() - 1]);
        checks.push(NamedCheck::new(
            "count in [1, 50] stabilizes",
            (b1 - b0).abs() <= thr,
            format!("{b0} → {b1}"),
            format!("change ≤ {thr}"),
        ));
    }

    Ok(ScenarioReport {
        id: "shrinking_cells".into(),
        params: params.raw.clone(),
        config: cfg,
        criteria: report,
        rungs,
        checks,
        pass: false,
    }
    .finish())
}

// ---------------------------------------------------------------------------
// linear ramp with shrinking zero-potential gap cells
// ---------------------------------------------------------------------------

fn paired_points(pairs: usize) -> Vec<f64> {
    let mut points = Vec::with_capacity(2 * pairs);
    for j in 1..=pairs {
        let j_f = j as f64;
        points.push(j_f);
        points.push(j_f + 0.5 / j_f);
    }
    points
}

fn ramp_with_gaps(params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    let pairs = params.get_f64("pairs", 40.0)? as usize;
    let points = paired_points(pairs);
    let mut pieces = Vec::new();
    let mut prev = 0.0;
    for j in 1..=pairs {
        let j_f = j as f64;
        pieces.push(PieceConfig { from: prev, to: j_f, c0: 0.0, c1: 1.0 });
        pieces.push(PieceConfig { from: j_f, to: j_f + 0.5 / j_f, c0: 0.0, c1: 0.0 });
        prev = j_f + 0.5 / j_f;
    }
    let cfg = SpecConfig {
        partition: PartitionConfig { points: Some(points), generator: None },
        strengths: StrengthsConfig { values: None, generator: Some(StrengthsGenerator::Neumann) },
        potential: Some(PotentialConfig { pieces, repeat: None }),
        tail: Some(TailSpec {
            // every ε-window eventually carries ramp mass ~ εx: declared divergent
            molchanov: Some(vec![MolchanovDecl { eps_min: None, eps_max: None, limit: ExtReal::PosInf }]),
            // even cells have zero integral for all j
            q_mean_bounded_subseq: Some(SubseqDecl { modulus: 2, residue: 0, bound: 0.0 }),
            ..TailSpec::default()
        }),
    };
    let spec = OperatorSpec::build(cfg.clone())?;
    let report = criteria::evaluate(&spec);

    let mut checks = vec![
        status_check("window condition holds", &report.conditions.molchanov, VerdictStatus::Holds),
        status_check(
            "cell-mean divergence fails",
            &report.conditions.mean_q_divergence,
            VerdictStatus::Fails,
        ),
    ];
    // witness subsequence is computable: even-cell integrals vanish exactly
    let zero_even = (1..=pairs).all(|j| {
        spec.cell_integrals(2 * j).map(|ci| ci.q == 0.0).unwrap_or(false)
    });
    checks.push(NamedCheck::new(
        "even cells carry zero potential mass",
        zero_even,
        format!("{zero_even}"),
        "true",
    ));

    Ok(ScenarioReport {
        id: "ramp_with_gaps".into(),
        params: params.raw.clone(),
        config: cfg,
        criteria: report,
        rungs: Vec::new(),
        checks,
        pass: false,
    }
    .finish())
}

// ---------------------------------------------------------------------------
// ramp gated to the first half of every unit cell
// ---------------------------------------------------------------------------

fn gated_ramp(params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    let count = params.get_f64("count", 60.0)? as usize;
    let mut pieces = Vec::new();
    for n in 1..=count {
        let n_f = n as f64;
        pieces.push(PieceConfig { from: n_f - 1.0, to: n_f - 0.5, c0: 0.0, c1: 2.0 });
        pieces.push(PieceConfig { from: n_f - 0.5, to: n_f, c0: 0.0, c1: 0.0 });
    }
    let cfg = SpecConfig {
        partition: PartitionConfig {
            points: None,
            generator: Some(PartitionGenerator::Arithmetic { start: 1.0, step: 1.0, count }),
        },
        strengths: StrengthsConfig { values: None, generator: Some(StrengthsGenerator::Neumann) },
        potential: Some(PotentialConfig { pieces, repeat: None }),
        tail: Some(TailSpec {
            // windows of width ≤ 1/2 fit inside the gated-off half-cells
            molchanov: Some(vec![
                MolchanovDecl { eps_min: None, eps_max: Some(0.5), limit: ExtReal::Finite(0.0) },
                MolchanovDecl { eps_min: Some(0.5), eps_max: None, limit: ExtReal::PosInf },
            ]),
            q_mean_signed_limit: Some(ExtReal::PosInf),
            q_mean_limit: Some(ExtReal::PosInf),
            ..TailSpec::default()
        }),
    };
    let spec = OperatorSpec::build(cfg.clone())?;
    let report = criteria::evaluate(&spec);

    let mut checks = vec![
        status_check(
            "window condition fails (small windows fit the gated-off halves)",
            &report.conditions.molchanov,
            VerdictStatus::Fails,
        ),
        status_check(
            "cell-mean divergence holds",
            &report.conditions.mean_q_divergence,
            VerdictStatus::Holds,
        ),
    ];
    let quarter = report
        .conditions
        .molchanov_per_eps
        .iter()
        .find(|e| (e.epsilon - 0.25).abs() < 1e-12);
    checks.push(NamedCheck::new(
        "per-ε verdict fails at ε = 1/4",
        quarter.map_or(false, |e| e.verdict.is_fails()),
        format!("{:?}", quarter.map(|e| e.verdict.status)),
        "Fails",
    ));
    let unit = report
        .conditions
        .molchanov_per_eps
        .iter()
        .find(|e| (e.epsilon - 1.0).abs() < 1e-12);
    checks.push(NamedCheck::new(
        "per-ε verdict holds at ε = 1",
        unit.map_or(false, |e| e.verdict.is_holds()),
        format!("{:?}", unit.map(|e| e.verdict.status)),
        "Holds",
    ));
    // exact cell means: m_k = k − 3/4
    let means_ok = (1..=count).all(|k| {
        let m = spec.cell_integrals(k).unwrap().q / spec.d(k);
        (m - (k as f64 - 0.75)).abs() < 1e-10 * (k as f64)
    });
    checks.push(NamedCheck::new(
        "cell means equal k − 3/4 exactly",
        means_ok,
        format!("{means_ok}"),
        "true",
    ));
    // computed window integral at ε = 1/4 inside a gated-off half vanishes
    let w = criteria::window_integral(&spec, count as f64 - 0.5, 0.25);
    checks.push(NamedCheck::new(
        "a width-1/4 window inside the gate carries no mass",
        w == 0.0,
        format!("{w}"),
        "0",
    ));

    Ok(ScenarioReport {
        id: "gated_ramp".into(),
        params: params.raw.clone(),
        config: cfg,
        criteria: report,
        rungs: Vec::new(),
        checks,
        pass: false,
    }
    .finish())
}

// ---------------------------------------------------------------------------
// alternating strong-negative / weakening-positive couplings
// ---------------------------------------------------------------------------

fn negative_pairs_config(pairs: usize) -> SpecConfig {
    let points = paired_points(pairs);
    let mut values = Vec::with_capacity(2 * pairs);
    for j in 1..=pairs {
        values.push(crate::config::BetaValue::Finite(-1.0));
        values.push(crate::config::BetaValue::Finite(j as f64));
    }
    SpecConfig {
        partition: PartitionConfig { points: Some(points), generator: None },
        strengths: StrengthsConfig { values: Some(values), generator: None },
        potential: None,
        tail: Some(TailSpec {
            // the negative coupling ratio 1/min{d} blows up on the odd sites
            sup_c1: Some(ExtReal::PosInf),
            ..TailSpec::default()
        }),
    }
}

fn negative_coupling_pairs(params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    let ladders = params.get_usize_list("pairs", &[20, 40])?;
    let big = *ladders.iter().max().unwrap();
    let cfg = negative_pairs_config(big);
    let spec = OperatorSpec::build(cfg.clone())?;
    let report = criteria::evaluate(&spec);

    let nec1 = criteria::check_necessary_semibounded(&spec, 1.0);
    // the violation at bound −C appears once j > C/2 + 1, so any fixed C
    // fails as soon as the ladder is long enough
    let c_big = (big - 4) as f64;
    let mut checks = vec![
        status_check("pair-gap inequality holds at C = 1", &nec1.nec_1, VerdictStatus::Holds),
        status_check("step inequality fails at C = 1", &nec1.nec_2, VerdictStatus::Fails),
        status_check(
            &format!("step inequality fails at C = {c_big}"),
            &criteria::check_necessary_semibounded(&spec, c_big).nec_2,
            VerdictStatus::Fails,
        ),
        status_check("semiboundedness fails", &report.derived.semibounded, VerdictStatus::Fails),
    ];
    let cert = criteria::unboundedness_certificate(&spec, &CriteriaParams::default());
    checks.push(NamedCheck::new(
        "certificate family with strictly decreasing energies",
        cert.as_ref().map_or(false, |c| {
            c.members.windows(2).all(|w| w[1].energy < w[0].energy)
        }),
        format!("{} members", cert.as_ref().map_or(0, |c| c.members.len())),
        "nonempty, strictly decreasing",
    ));

    // truncated ground states dive with the ladder
    let mut rungs = Vec::new();
    let mut lows = Vec::new();
    for &pairs in &ladders {
        let spec_k = OperatorSpec::build(negative_pairs_config(pairs))?;
        let problem = TruncatedProblem::new(&spec_k, Bc::Neumann);
        let mut lo = -(5.0 * pairs as f64).max(50.0);
        while eigensolver::counting_function(&problem, lo)? > 0 {
            lo *= 2.0;
        }
        let r = eigensolver::eigenvalues_shooting(&problem, (lo, 0.0), 1e-10)?;
        let lowest = r.eigenvalues.first().map(|e| e.lambda);
        lows.push(lowest);
        rungs.push(RungData { truncation: 2 * pairs, counting: Vec::new(), lowest_eigenvalue: lowest });
    }
    if let Some(Some(l0)) = lows.first() {
        checks.push(NamedCheck::new(
            "lowest eigenvalue is deep at the first rung",
            *l0 < -10.0,
            format!("{l0}"),
            "< −10",
        ));
    }
    let monotone = lows.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    });
    if ladders.len() >= 2 {
        checks.push(NamedCheck::new(
            "lowest eigenvalue strictly decreases along the ladder",
            monotone,
            format!("{lows:?}"),
            "strictly decreasing",
        ));
    }

    Ok(ScenarioReport {
        id: "negative_coupling_pairs".into(),
        params: params.raw.clone(),
        config: cfg,
        criteria: report,
        rungs,
        checks,
        pass: false,
    }
    .finish())
}

// ---------------------------------------------------------------------------
// sparse deep wells: q = −k on the short cells, decoupled realization
// ---------------------------------------------------------------------------

fn sparse_deep_wells(params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    let pairs = params.get_f64("pairs", 30.0)? as usize;
    // wells of depth k and width 1/(2(k+1)) starting at the integers: the
    // cell-aligned means diverge like k while every unit window carries q₋
    // mass k·w_k + w_{k+1} < 1/2, so the free realization stays semibounded
    let width = |j: f64| 0.5 / (j + 1.0);
    let mut points = Vec::with_capacity(2 * pairs);
    let mut pieces = Vec::new();
    let mut prev = 0.0;
    for j in 1..=pairs {
        let j_f = j as f64;
        points.push(j_f);
        points.push(j_f + width(j_f));
        pieces.push(PieceConfig { from: prev, to: j_f, c0: 0.0, c1: 0.0 });
        pieces.push(PieceConfig { from: j_f, to: j_f + width(j_f), c0: -j_f, c1: 0.0 });
        prev = j_f + width(j_f);
    }
    let cfg = SpecConfig {
        partition: PartitionConfig { points: Some(points), generator: None },
        strengths: StrengthsConfig { values: None, generator: Some(StrengthsGenerator::Neumann) },
        potential: Some(PotentialConfig { pieces, repeat: None }),
        tail: Some(TailSpec {
            sup_c0: Some(ExtReal::PosInf),
            ..TailSpec::default()
        }),
    };
    let spec = OperatorSpec::build(cfg.clone())?;
    let report = criteria::evaluate(&spec);

    let mut checks = vec![status_check(
        "cell-aligned mean of q₋ diverges (C0 fails)",
        &report.conditions.c0_finite,
        VerdictStatus::Fails,
    )];
    // per-cell mean on the well cells is exactly k
    let means_ok = (1..=pairs).all(|j| {
        let ci = spec.cell_integrals(2 * j).unwrap();
        (ci.q_minus / spec.d(2 * j) - j as f64).abs() < 1e-10 * j as f64
    });
    checks.push(NamedCheck::new(
        "well-cell mean of q₋ equals the well index",
        means_ok,
        format!("{means_ok}"),
        "true",
    ));
    // unit-window sup of q₋ stays below 1/2 (and approaches it): the free
    // realization stays semibounded while the cell-aligned means diverge
    let sup = criteria::brinck_window_sup(&spec, 1.0);
    checks.push(NamedCheck::new(
        "unit-window sup of q₋ is at most 1/2",
        sup <= 0.5 + 1e-12 && sup > 0.45,
        format!("{sup}"),
        "in (0.45, 0.5]",
    ));
    // decoupled indicator energies dive: t[h_{2j}] = −j exactly
    let ind_ok = (1..=pairs).all(|j| {
        forms::indicator_form_value(&spec, 2 * j)
            .map(|v| (v + j as f64).abs() < 1e-10 * j as f64)
            .unwrap_or(false)
    });
    checks.push(NamedCheck::new(
        "indicator energies on well cells equal −k",
        ind_ok,
        format!("{ind_ok}"),
        "true",
    ));
    // cell Neumann ground states equal −k for the constant wells
    let grounds_ok = (1..=pairs.min(10)).all(|j| {
        neumann::cell_neumann_eigs(&spec, 2 * j, 1.0)
            .map(|cs| (cs.eigenvalues[0] + j as f64).abs() < 1e-12 * j as f64)
            .unwrap_or(false)
    });
    checks.push(NamedCheck::new(
        "well-cell Neumann ground states equal −k",
        grounds_ok,
        format!("{grounds_ok}"),
        "true",
    ));

    Ok(ScenarioReport {
        id: "sparse_deep_wells".into(),
        params: params.raw.clone(),
        config: cfg,
        criteria: report,
        rungs: Vec::new(),
        checks,
        pass: false,
    }
    .finish())
}

// ---------------------------------------------------------------------------
// sawtooth with finite L² norm and divergent gradient energy
// ---------------------------------------------------------------------------

fn gradient_blowup_config(count: usize) -> SpecConfig {
    let mut values = Vec::with_capacity(count);
    values.push(crate::config::BetaValue::Finite(-0.5));
    for k in 2..=count {
        values.push(crate::config::BetaValue::Finite(-((k as f64).powf(-0.5))));
    }
    SpecConfig {
        partition: PartitionConfig {
            points: None,
            generator: Some(PartitionGenerator::SumPower { exponent: -0.5, count }),
        },
        strengths: StrengthsConfig { values: Some(values), generator: None },
        potential: None,
        tail: Some(TailSpec {
            d_limit: Some(ExtReal::Finite(0.0)),
            d_tol: Some(1.0),
            sup_c1: Some(ExtReal::PosInf),
            ..TailSpec::default()
        }),
    }
}

const ZETA_3_HALVES: f64 = 2.612_375_348_685_488_3;

fn gradient_blowup(params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    let truncations = params.get_usize_list("truncations", &[10_000, 100_000])?;
    let mut checks = Vec::new();
    let mut rungs = Vec::new();
    let mut grad_energies = Vec::new();
    let mut l2_norms = Vec::new();
    let mut cfg_big = None;
    for &count in &truncations {
        let cfg = gradient_blowup_config(count);
        let spec = OperatorSpec::build(cfg.clone())?;
        // pure sawtooth with a_k = d_k: slope 1 on every cell
        let ramp = forms::make_test_function(&spec, &TestFunctionKind::Ramp { coeffs: vec![] })?;
        let e = forms::form_energy(&spec, &ramp)?;
        let l2 = ramp.l2_norm_sq();
        grad_energies.push(e.dirichlet);
        l2_norms.push(l2);
        rungs.push(RungData { truncation: count, counting: Vec::new(), lowest_eigenvalue: None });
        cfg_big = Some(cfg);

        // composite function: x²/2 on the first cell, then the sawtooth,
        // satisfying every interface condition exactly
        if count == *truncations.iter().max().unwrap() {
            let mut segments = vec![Segment { a: 0.0, b: 1.0, coef: [0.0, 0.0, 0.5, 0.0] }];
            for k in 2..=count {
                segments.push(Segment {
                    a: spec.x(k - 1),
                    b: spec.x(k),
                    coef: [0.0, 1.0, 0.0, 0.0],
                });
            }
            let f = forms::PiecewiseFunction::from_segments(&spec, segments)?;
            let all_ok = (1..count).all(|k| {
                let tr = f.trace(k).copied().unwrap_or_default();
                let beta = match spec.coupling(k) {
                    Coupling::Finite(b) => b,
                    _ => return false,
                };
                (tr.deriv_left - tr.deriv_right).abs() < 1e-12
                    && (tr.jump() - beta * tr.deriv_left).abs() < 1e-9
            });
            checks.push(NamedCheck::new(
                "composite sawtooth satisfies every interface condition",
                all_ok,
                format!("{all_ok}"),
                "true",
            ));
        }
    }
    // ‖f‖² = (1/3)Σ_{k≤K} k^{−3/2}: converges to ζ(3/2)/3
    if let Some(&l2) = l2_norms.last() {
        let target = ZETA_3_HALVES / 3.0;
        checks.push(NamedCheck::new(
            "sawtooth L² norm approaches ζ(3/2)/3",
            (l2 - target).abs() < 0.01 * target,
            format!("{l2}"),
            format!("within 1% of {target}"),
        ));
    }
    if grad_energies.len() >= 2 {
        let ratio = grad_energies[grad_energies.len() - 1] / grad_energies[0];
        let expect = (truncations[truncations.len() - 1] as f64 / truncations[0] as f64).sqrt();
        checks.push(NamedCheck::new(
            "gradient energy grows like √K",
            (ratio - expect).abs() < 0.1 * expect,
            format!("ratio {ratio}"),
            format!("≈ {expect}"),
        ));
        let l2_drift = (l2_norms[l2_norms.len() - 1] - l2_norms[0]).abs() / l2_norms[0];
        checks.push(NamedCheck::new(
            "L² norm converges along the ladder",
            l2_drift < 0.01,
            format!("relative drift {l2_drift}"),
            "< 1%",
        ));
    }

    let cfg = cfg_big.expect("at least one truncation");
    let spec = OperatorSpec::build(cfg.clone())?;
    let report = criteria::evaluate(&spec);
    Ok(ScenarioReport {
        id: "gradient_blowup".into(),
        params: params.raw.clone(),
        config: cfg,
        criteria: report,
        rungs,
        checks,
        pass: false,
    }
    .finish())
}

// ---------------------------------------------------------------------------
// h-stability of the essential spectrum under β → hβ
// ---------------------------------------------------------------------------

fn h_stability(params: &ScenarioParams) -> Result<ScenarioReport, ScenarioError> {
    let hs = params.get_f64_list("h", &[0.5, 1.0, 2.0])?;
    let base = params.get_str("base", "growing");
    let count = params.get_f64("count", 60.0)? as usize;
    let (slope, intercept) = match base.as_str() {
        "growing" => (1.0, 0.0),
        "negative_const" => (0.0, -1.0),
        "negative_growing" => (-1.0, 0.0),
        other => return Err(ScenarioError::BadParam(format!("unknown base `{other}`"))),
    };
    let make_cfg = |h: f64| SpecConfig {
        partition: PartitionConfig {
            points: None,
            generator: Some(PartitionGenerator::Arithmetic { start: 1.0, step: 1.0, count }),
        },
        strengths: StrengthsConfig {
            values: None,
            generator: Some(StrengthsGenerator::Linear {
                slope: h * slope,
                intercept: h * intercept,
            }),
        },
        potential: None,
        tail: None,
    };

    let cfg = make_cfg(1.0);
    let spec = OperatorSpec::build(cfg.clone())?;
    let report = criteria::evaluate(&spec);
    let mut checks = Vec::new();
    let mut rungs = Vec::new();

    match base.as_str() {
        "growing" | "negative_growing" => {
            checks.push(status_check(
                "scaled-coupling condition holds",
                &report.conditions.coupling_neg_vanishes,
                VerdictStatus::Holds,
            ));
            checks.push(status_check(
                "h-stability holds",
                &report.derived.h_stable,
                VerdictStatus::Holds,
            ));
            // predictions identical across h
            let mut models = Vec::new();
            for &h in &hs {
                let spec_h = OperatorSpec::build(make_cfg(h))?;
                models.push(neumann::ess_spectrum_n(&spec_h, 50.0)?.points);
            }
            let identical = models.windows(2).all(|w| w[0] == w[1]);
            checks.push(NamedCheck::new(
                "predicted essential spectrum identical for every h",
                identical,
                format!("{} models", models.len()),
                "identical point sets",
            ));
            // counting near the first nonzero lattice point, per h
            let p = std::f64::consts::PI.powi(2);
            let mut counts = Vec::new();
            for &h in &hs {
                let spec_h = OperatorSpec::build(make_cfg(h))?;
                let problem = TruncatedProblem::new(&spec_h, Bc::Neumann);
                let n = eigensolver::counting_function(&problem, p + 0.5)?
                    - eigensolver::counting_function(&problem, p - 0.5)?;
                counts.push(n);
                rungs.push(RungData {
                    truncation: count,
                    counting: vec![(p - 0.5, 0), (p + 0.5, n)],
                    lowest_eigenvalue: None,
                });
            }
            let base_count = counts[0];
            let thr = params.stab_threshold(base_count);
            let stable = counts
                .iter()
                .all(|&n| (n as f64 - base_count as f64).abs() <= thr);
            checks.push(NamedCheck::new(
                "cluster near the first lattice point is h-independent",
                stable,
                format!("{counts:?}"),
                format!("within {thr} of each other"),
            ));
        }
        _ => {
            checks.push(status_check(
                "scaled-coupling condition fails",
                &report.conditions.coupling_neg_vanishes,
                VerdictStatus::Fails,
            ));
            checks.push(status_check(
                "all-negative strengths: h-stability fails (necessity direction)",
                &report.derived.h_stable,
                VerdictStatus::Fails,
            ));
        }
    }

    Ok(ScenarioReport {
        id: "h_stability".into(),
        params: params.raw.clone(),
        config: cfg,
        criteria: report,
        rungs,
        checks,
        pass: false,
    }
    .finish())
}
