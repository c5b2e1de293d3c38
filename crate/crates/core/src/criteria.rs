//! Three-valued evaluation of the spectral criteria on an operator spec, and
//! their composition into theorem-level verdicts.
//!
//! Every condition here is a limit or supremum over infinite data. A finite
//! truncation cannot certify one, so Holds/Fails always cites a source: a
//! tail declaration, a recognized generator (arithmetic partition, periodic
//! potential, power-law strengths, a uniform affine law), or — for the
//! per-index necessary inequalities — the truncation itself, where a single
//! violated inequality is an explicit test function and therefore sound.
//! Anything else is Inconclusive with the observed trend attached.

use serde::Serialize;


use crate::forms::{self, TestFunctionKind};
use crate::model::{
    Coupling, ExtReal, OperatorSpec, PartitionClass, PotentialClass, StrengthsClass,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    pub quantity: f64,
    pub description: String,
}

/// Numeric trend over the truncation, reported as supporting evidence only.
#[derive(Clone, Debug, Serialize, Default)]
pub struct Evidence {
    pub samples: Vec<(usize, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_decile_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_decile_min: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verdict {
    pub fn holds(source: impl Into<String>) -> Self {
        Verdict {
            status: VerdictStatus::Holds,
            value: None,
            witness: None,
            evidence: None,
            source: source.into(),
            reason: None,
        }
    }

    pub fn fails(witness: Witness, source: impl Into<String>) -> Self {
        Verdict {
            status: VerdictStatus::Fails,
            value: None,
            witness: Some(witness),
            evidence: None,
            source: source.into(),
            reason: None,
        }
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Verdict {
            status: VerdictStatus::Inconclusive,
            value: None,
            witness: None,
            evidence: None,
            source: "undecided".into(),
            reason: Some(reason.into()),
        }
    }

    pub fn with_value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn with_evidence(mut self, e: Evidence) -> Self {
        self.evidence = Some(e);
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == VerdictStatus::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == VerdictStatus::Fails
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsVerdict {
    pub epsilon: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Conditions {
    #[serde(rename = "C0_finite")]
    pub c0_finite: Verdict,
    #[serde(rename = "C1_finite")]
    pub c1_finite: Verdict,
    pub molchanov: Verdict,
    pub molchanov_per_eps: Vec<EpsVerdict>,
    pub mean_q_divergence: Verdict,
    pub combined_divergence: Verdict,
    pub coupling_vanishes: Verdict,
    pub q_mean_vanishes: Verdict,
    pub qminus_mean_vanishes: Verdict,
    pub coupling_neg_vanishes: Verdict,
    pub nec_inf_b: Verdict,
    pub nec_1: Verdict,
    pub nec_2: Verdict,
    pub nec_3: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedVerdicts {
    pub semibounded: Verdict,
    pub self_adjoint: Verdict,
    pub discrete: Verdict,
    pub ess_spectrum_transfer: Verdict,
    pub ess_equals_free_n: Verdict,
    pub negative_discrete: Verdict,
    pub h_stable: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub conditions: Conditions,
    pub derived: DerivedVerdicts,
    /// The bound −C used for the per-index necessary inequalities.
    pub nec_c: f64,
}

#[derive(Clone, Debug)]
pub struct CriteriaParams {
    pub epsilons: Vec<f64>,
    pub nec_c: f64,
    pub cert_min_members: usize,
    pub cert_energy_threshold: f64,
}

impl Default for CriteriaParams {
    fn default() -> Self {
        CriteriaParams {
            epsilons: vec![1.0, 0.5, 0.25, 0.125],
            nec_c: 1.0,
            cert_min_members: 8,
            cert_energy_threshold: -10.0,
        }
    }
}

// ---------------------------------------------------------------------------
// asymptotic limits of recognized sequences
// ---------------------------------------------------------------------------

/// Asymptotic behaviour of a recognized positive-index sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Asym {
    Zero,
    Const(f64),
    /// ~ coef·k^exp with exp ≠ 0, coef ≠ 0.
    Power { coef: f64, exp: f64 },
    PlusInf,
    MinusInf,
    Unknown,
}

impl Asym {
    fn constant(c: f64) -> Asym {
        if c == 0.0 {
            Asym::Zero
        } else {
            Asym::Const(c)
        }
    }

    fn limit(self) -> Option<ExtReal> {
        match self {
            Asym::Zero => Some(ExtReal::Finite(0.0)),
            Asym::Const(c) => Some(ExtReal::Finite(c)),
            Asym::Power { coef, exp } => {
                if exp < 0.0 {
                    Some(ExtReal::Finite(0.0))
                } else if coef > 0.0 {
                    Some(ExtReal::PosInf)
                } else {
                    Some(ExtReal::NegInf)
                }
            }
            Asym::PlusInf => Some(ExtReal::PosInf),
            Asym::MinusInf => Some(ExtReal::NegInf),
            Asym::Unknown => None,
        }
    }

    /// Limit of a/b for positive denominators b.
    fn div(self, b: Asym) -> Asym {
        use Asym::*;
        match (self, b) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (Zero, Zero) => Unknown,
            (Zero, _) => Zero,
            (a, Const(c)) => match a {
                Const(x) => Asym::constant(x / c),
                Power { coef, exp } => Power { coef: coef / c, exp },
                PlusInf => PlusInf,
                MinusInf => MinusInf,
                _ => Unknown,
            },
            (Const(x), Zero) => {
                if x > 0.0 {
                    PlusInf
                } else {
                    MinusInf
                }
            }
            (Const(x), Power { coef, exp }) => Power { coef: x / coef, exp: -exp },
            (Power { coef: c1, exp: e1 }, Power { coef: c2, exp: e2 }) => {
                if e1 == e2 {
                    Asym::constant(c1 / c2)
                } else {
                    Power { coef: c1 / c2, exp: e1 - e2 }
                }
            }
            (Power { coef, exp }, Zero) => {
                // positive denominator → 0⁺; sign from the numerator limit
                if exp > 0.0 {
                    if coef > 0.0 { PlusInf } else { MinusInf }
                } else {
                    Unknown
                }
            }
            (PlusInf, Zero) | (PlusInf, Power { .. }) => Unknown,
            (MinusInf, Zero) | (MinusInf, Power { .. }) => Unknown,
            (_, PlusInf) | (_, MinusInf) => Unknown,
        }
    }
}

fn lim_add(a: Option<ExtReal>, b: Option<ExtReal>) -> Option<ExtReal> {
    match (a?, b?) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => Some(ExtReal::Finite(x + y)),
        (ExtReal::PosInf, ExtReal::NegInf) | (ExtReal::NegInf, ExtReal::PosInf) => None,
        (ExtReal::PosInf, _) | (_, ExtReal::PosInf) => Some(ExtReal::PosInf),
        (ExtReal::NegInf, _) | (_, ExtReal::NegInf) => Some(ExtReal::NegInf),
    }
}

/// d_k asymptote, from the partition generator or the declared d_limit.
fn d_asym(spec: &OperatorSpec) -> Asym {
    match spec.partition_class() {
        PartitionClass::Arithmetic { step } => Asym::Const(step),
        PartitionClass::SumPower { exponent } => {
            if exponent == 0.0 {
                Asym::Const(1.0)
            } else {
                Asym::Power { coef: 1.0, exp: exponent }
            }
        }
        PartitionClass::Explicit => match spec.tail().d_limit {
            Some(ExtReal::Finite(l)) if l > 0.0 => Asym::Const(l),
            Some(ExtReal::Finite(_)) => Asym::Zero,
            Some(ExtReal::PosInf) => Asym::PlusInf,
            _ => Asym::Unknown,
        },
    }
}

/// |β_k| asymptote.
fn abs_beta_asym(spec: &OperatorSpec) -> Asym {
    match spec.strengths_class() {
        StrengthsClass::AllNeumann => Asym::PlusInf,
        StrengthsClass::Linear { slope, intercept } => {
            if slope != 0.0 {
                Asym::Power { coef: slope.abs(), exp: 1.0 }
            } else {
                Asym::constant(intercept.abs())
            }
        }
        StrengthsClass::Power { coeff, exponent } => {
            if exponent != 0.0 {
                Asym::Power { coef: coeff.abs(), exp: exponent }
            } else {
                Asym::constant(coeff.abs())
            }
        }
        StrengthsClass::Explicit => Asym::Unknown,
    }
}

/// Signed 1/β_k asymptote.
fn inv_beta_asym(spec: &OperatorSpec) -> Asym {
    match spec.strengths_class() {
        StrengthsClass::AllNeumann => Asym::Zero,
        StrengthsClass::Linear { slope, intercept } => {
            if slope != 0.0 {
                Asym::Power { coef: 1.0 / slope, exp: -1.0 }
            } else if intercept != 0.0 {
                Asym::Const(1.0 / intercept)
            } else {
                Asym::Zero
            }
        }
        StrengthsClass::Power { coeff, exponent } => {
            if coeff == 0.0 {
                Asym::Zero
            } else if exponent != 0.0 {
                Asym::Power { coef: 1.0 / coeff, exp: -exponent }
            } else {
                Asym::Const(1.0 / coeff)
            }
        }
        StrengthsClass::Explicit => Asym::Unknown,
    }
}

/// (β_k⁻¹)⁻ asymptote: zero when the strengths tail is eventually
/// nonnegative, |β|⁻¹ when eventually negative.
fn neg_inv_beta_asym(spec: &OperatorSpec) -> Asym {
    let eventually_positive = match spec.strengths_class() {
        StrengthsClass::AllNeumann => Some(true),
        StrengthsClass::Linear { slope, intercept } => {
            if slope != 0.0 {
                Some(slope > 0.0)
            } else if intercept != 0.0 {
                Some(intercept > 0.0)
            } else {
                Some(true)
            }
        }
        StrengthsClass::Power { coeff, .. } => {
            if coeff == 0.0 {
                Some(true)
            } else {
                Some(coeff > 0.0)
            }
        }
        StrengthsClass::Explicit => None,
    };
    match eventually_positive {
        Some(true) => Asym::Zero,
        Some(false) => abs_beta_asym(spec).recip_guard(spec),
        None => Asym::Unknown,
    }
}

impl Asym {
    /// helper used only by `neg_inv_beta_asym`: 1/|β| from |β|.
    fn recip_guard(self, spec: &OperatorSpec) -> Asym {
        let _ = spec;
        match self {
            Asym::Const(c) => Asym::Const(1.0 / c),
            Asym::Power { coef, exp } => Asym::Power { coef: 1.0 / coef, exp: -exp },
            Asym::PlusInf => Asym::Zero,
            Asym::Zero => Asym::PlusInf,
            other => other,
        }
    }
}

/// Whether the potential is q ≥ 0 as a global structural fact.
fn potential_nonneg_structurally(spec: &OperatorSpec) -> bool {
    match spec.potential_class() {
        PotentialClass::Zero => true,
        PotentialClass::Constant(c) => *c >= 0.0,
        PotentialClass::Affine { c0, c1 } => *c0 >= 0.0 && *c1 >= 0.0,
        PotentialClass::Periodic { pattern, .. } => pattern
            .iter()
            .all(|p| p.q(p.from) >= 0.0 && p.q(p.to) >= 0.0),
        PotentialClass::Explicit => false,
    }
}

/// Whether q is bounded as a global structural fact.
fn potential_bounded_structurally(spec: &OperatorSpec) -> bool {
    matches!(
        spec.potential_class(),
        PotentialClass::Zero | PotentialClass::Constant(_) | PotentialClass::Periodic { .. }
    )
}

/// Cell means aligned with a periodic potential exist when the partition is
/// arithmetic starting at its step and the period divides the step.
fn periodic_cell_mean(spec: &OperatorSpec) -> Option<(f64, f64, f64)> {
    let PotentialClass::Periodic { period, pattern } = spec.potential_class() else {
        return None;
    };
    let PartitionClass::Arithmetic { step } = spec.partition_class() else {
        return None;
    };
    if (spec.x(1) - step).abs() > 1e-12 * step.abs().max(1.0) {
        return None;
    }
    let ratio = step / period;
    if (ratio - ratio.round()).abs() > 1e-12 || ratio < 1.0 - 1e-12 {
        return None;
    }
    let mut neg = 0.0;
    let mut pos = 0.0;
    for p in pattern {
        let (n, q) = p.split_integrals(p.from, p.to);
        neg += n;
        pos += q;
    }
    let scale = ratio.round() / step;
    Some(((pos - neg) * scale, (pos + neg) * scale, neg * scale))
}

/// (lim (1/d)∫q, lim (1/d)∫|q|, lim (1/d)∫q₋) from the potential structure.
fn q_mean_asyms(spec: &OperatorSpec) -> (Asym, Asym, Asym) {
    match spec.potential_class() {
        PotentialClass::Zero => (Asym::Zero, Asym::Zero, Asym::Zero),
        PotentialClass::Constant(c) => (
            Asym::constant(*c),
            Asym::constant(c.abs()),
            Asym::constant((-c).max(0.0)),
        ),
        PotentialClass::Affine { c1, .. } => {
            if *c1 > 0.0 {
                (Asym::PlusInf, Asym::PlusInf, Asym::Zero)
            } else {
                (Asym::MinusInf, Asym::PlusInf, Asym::PlusInf)
            }
        }
        PotentialClass::Periodic { .. } => match periodic_cell_mean(spec) {
            Some((mean, abs_mean, minus_mean)) => (
                Asym::constant(mean),
                Asym::constant(abs_mean),
                Asym::constant(minus_mean),
            ),
            None => (Asym::Unknown, Asym::Unknown, Asym::Unknown),
        },
        PotentialClass::Explicit => (Asym::Unknown, Asym::Unknown, Asym::Unknown),
    }
}

// ---------------------------------------------------------------------------
// truncation sequences (exact per-cell data)
// ---------------------------------------------------------------------------

fn seq_evidence(values: &[(usize, f64)]) -> Evidence {
    let n = values.len();
    let mut samples = Vec::new();
    if n <= 12 {
        samples.extend_from_slice(values);
    } else {
        samples.extend_from_slice(&values[..3]);
        samples.extend_from_slice(&values[n / 2 - 1..n / 2 + 2]);
        samples.extend_from_slice(&values[n - 6..]);
    }
    let decile = &values[n - (n / 10).max(1)..];
    Evidence {
        samples,
        last_decile_max: decile
            .iter()
            .map(|&(_, v)| v)
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v)))),
        last_decile_min: decile
            .iter()
            .map(|&(_, v)| v)
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v)))),
    }
}

fn neg_inv(c: Coupling) -> f64 {
    match c {
        Coupling::Finite(b) if b < 0.0 => 1.0 / b.abs(),
        _ => 0.0,
    }
}

fn abs_inv(c: Coupling) -> f64 {
    match c {
        Coupling::Finite(b) => 1.0 / b.abs(),
        _ => 0.0,
    }
}

fn min_gap(spec: &OperatorSpec, k: usize) -> f64 {
    let k_max = spec.num_cells();
    let next = if k < k_max {
        spec.d(k + 1)
    } else {
        match spec.tail().d_limit {
            Some(ExtReal::Finite(l)) if l > 0.0 => l,
            _ => spec.d(k_max),
        }
    };
    spec.d(k).min(next)
}

/// (1/d_k)∫_{Δ_k} q for every cell.
pub fn cell_q_means(spec: &OperatorSpec) -> Vec<(usize, f64)> {
    (1..=spec.num_cells())
        .map(|k| (k, spec.cell_integrals(k).expect("valid index").q / spec.d(k)))
        .collect()
}

fn cell_qminus_means(spec: &OperatorSpec) -> Vec<(usize, f64)> {
    (1..=spec.num_cells())
        .map(|k| (k, spec.cell_integrals(k).expect("valid index").q_minus / spec.d(k)))
        .collect()
}

fn cell_absq_means(spec: &OperatorSpec) -> Vec<(usize, f64)> {
    (1..=spec.num_cells())
        .map(|k| (k, spec.cell_integrals(k).expect("valid index").abs_q / spec.d(k)))
        .collect()
}

fn coupling_ratios(spec: &OperatorSpec) -> Vec<(usize, f64)> {
    (1..=spec.num_cells())
        .map(|k| (k, abs_inv(spec.coupling(k)) / min_gap(spec, k)))
        .collect()
}

fn coupling_neg_ratios(spec: &OperatorSpec) -> Vec<(usize, f64)> {
    (1..=spec.num_cells())
        .map(|k| (k, neg_inv(spec.coupling(k)) / min_gap(spec, k)))
        .collect()
}

/// The combined sequence (1/d_k)(∫q + β_{k−1}⁻¹ + β_k⁻¹); continuity points
/// contribute no jump term.
pub fn combined_values(spec: &OperatorSpec) -> Vec<(usize, f64)> {
    (1..=spec.num_cells())
        .map(|k| {
            let prev = spec.inv_beta(k - 1).unwrap_or(0.0);
            let next = spec.inv_beta(k).unwrap_or(0.0);
            let ci = spec.cell_integrals(k).expect("valid index");
            (k, (ci.q + prev + next) / spec.d(k))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// sup conditions
// ---------------------------------------------------------------------------

fn sup_condition(
    values: &[(usize, f64)],
    limit: Asym,
    declared: Option<ExtReal>,
    label: &str,
) -> (f64, Verdict) {
    let (arg, sup) = values
        .iter()
        .fold((0usize, f64::NEG_INFINITY), |(ai, av), &(i, v)| {
            if v > av {
                (i, v)
            } else {
                (ai, av)
            }
        });
    let ev = seq_evidence(values);
    let verdict = match declared {
        Some(ExtReal::PosInf) => Verdict::fails(
            Witness {
                index: Some(arg),
                x: None,
                quantity: sup,
                description: format!("{label} declared divergent; truncation max at k={arg}"),
            },
            "declaration",
        ),
        Some(ExtReal::Finite(bound)) => Verdict::holds("declaration")
            .with_value(sup.max(bound).max(0.0)),
        _ => match limit.limit() {
            Some(ExtReal::Finite(_)) => {
                Verdict::holds("structure: recognized tail").with_value(sup.max(0.0))
            }
            Some(ExtReal::PosInf) => Verdict::fails(
                Witness {
                    index: Some(arg),
                    x: None,
                    quantity: sup,
                    description: format!("{label} diverges along the recognized tail"),
                },
                "structure: recognized tail",
            ),
            Some(ExtReal::NegInf) | None => Verdict::inconclusive(format!(
                "{label}: no declaration or recognized structure decides the sup"
            )),
        },
    };
    (sup.max(0.0), verdict.with_evidence(ev))
}

/// C₀ = sup_k (1/d_k)∫_{Δ_k} q₋.
pub fn sup_c0(spec: &OperatorSpec) -> (f64, Verdict) {
    let values = cell_qminus_means(spec);
    let (_, _, qminus) = q_mean_asyms(spec);
    sup_condition(&values, qminus, spec.tail().sup_c0, "C0")
}

/// C₁ = sup_k (β_k⁻¹)⁻ / min{d_k, d_{k+1}}.
pub fn sup_c1(spec: &OperatorSpec) -> (f64, Verdict) {
    let values = coupling_neg_ratios(spec);
    let asym = neg_inv_beta_asym(spec).div(d_asym(spec));
    sup_condition(&values, asym, spec.tail().sup_c1, "C1")
}

// ---------------------------------------------------------------------------
// limit conditions
// ---------------------------------------------------------------------------

fn vanishing_condition(
    values: &[(usize, f64)],
    limit: Option<ExtReal>,
    declared: Option<ExtReal>,
    label: &str,
) -> Verdict {
    let ev = seq_evidence(values);
    let decided = declared.map(|d| (d, "declaration")).or_else(|| {
        limit.map(|l| (l, "structure: recognized tail"))
    });
    match decided {
        Some((ExtReal::Finite(l), src)) if l == 0.0 => {
            Verdict::holds(src).with_value(0.0).with_evidence(ev)
        }
        Some((l, src)) => Verdict::fails(
            Witness {
                index: None,
                x: None,
                quantity: l.as_f64(),
                description: format!("{label} tends to {} ≠ 0", l.as_f64()),
            },
            src,
        )
        .with_evidence(ev),
        None => Verdict::inconclusive(format!(
            "{label}: limit undeclared and not derivable from generators"
        ))
        .with_evidence(ev),
    }
}

/// Condition |β_k|⁻¹/min{d_k,d_{k+1}} → 0.
pub fn check_coupling_vanishes(spec: &OperatorSpec) -> Verdict {
    let values = coupling_ratios(spec);
    let asym = abs_beta_asym(spec).recip_guard(spec).div(d_asym(spec));
    vanishing_condition(
        &values,
        asym.limit(),
        spec.tail().beta_coupling_limit,
        "coupling ratio",
    )
}

/// Condition (β_k⁻¹)⁻/min{d_k,d_{k+1}} → 0.
pub fn check_coupling_neg_vanishes(spec: &OperatorSpec) -> Verdict {
    let values = coupling_neg_ratios(spec);
    let asym = neg_inv_beta_asym(spec).div(d_asym(spec));
    let mut v = vanishing_condition(
        &values,
        asym.limit(),
        spec.tail().coupling_neg_limit,
        "negative coupling ratio",
    );
    // (β⁻¹)⁻ ≤ |β|⁻¹, so the full-strength condition is a valid source.
    if v.status == VerdictStatus::Inconclusive && check_coupling_vanishes(spec).is_holds() {
        v = Verdict::holds("dominated by |β|⁻¹ condition").with_value(0.0);
    }
    v
}

/// Condition (1/d_k)∫|q| → 0.
pub fn check_q_mean_vanishes(spec: &OperatorSpec) -> Verdict {
    let values = cell_absq_means(spec);
    let (_, abs_asym, _) = q_mean_asyms(spec);
    vanishing_condition(&values, abs_asym.limit(), spec.tail().q_mean_limit, "mean |q|")
}

/// Condition (1/d_k)∫q₋ → 0.
pub fn check_qminus_mean_vanishes(spec: &OperatorSpec) -> Verdict {
    let values = cell_qminus_means(spec);
    let (_, _, qminus_asym) = q_mean_asyms(spec);
    let declared = match spec.tail().q_mean_limit {
        Some(ExtReal::Finite(l)) if l == 0.0 => Some(ExtReal::Finite(0.0)),
        _ => None,
    };
    vanishing_condition(&values, qminus_asym.limit(), declared, "mean q₋")
}

fn divergence_verdict(
    values: &[(usize, f64)],
    limit: Option<ExtReal>,
    declared: Option<ExtReal>,
    bounded_subseq: Option<&crate::config::SubseqDecl>,
    label: &str,
) -> Verdict {
    let ev = seq_evidence(values);
    if let Some(decl) = bounded_subseq {
        return Verdict::fails(
            Witness {
                index: Some(decl.residue),
                x: None,
                quantity: decl.bound,
                description: format!(
                    "{label} stays ≤ {} on the subsequence k ≡ {} (mod {})",
                    decl.bound, decl.residue, decl.modulus
                ),
            },
            "declaration",
        )
        .with_evidence(ev);
    }
    let decided = declared
        .map(|d| (d, "declaration"))
        .or_else(|| limit.map(|l| (l, "structure: recognized tail")));
    match decided {
        Some((ExtReal::PosInf, src)) => Verdict::holds(src).with_evidence(ev),
        Some((l, src)) => Verdict::fails(
            Witness {
                index: None,
                x: None,
                quantity: l.as_f64(),
                description: format!("{label} tends to {}, not +∞", l.as_f64()),
            },
            src,
        )
        .with_evidence(ev),
        None => Verdict::inconclusive(format!(
            "{label}: divergence undeclared and not derivable from generators"
        ))
        .with_evidence(ev),
    }
}

/// Condition (1/d_k)∫q → +∞.
pub fn check_mean_q_divergence(spec: &OperatorSpec) -> Verdict {
    let values = cell_q_means(spec);
    let (mean_asym, _, _) = q_mean_asyms(spec);
    divergence_verdict(
        &values,
        mean_asym.limit(),
        spec.tail().q_mean_signed_limit,
        spec.tail().q_mean_bounded_subseq.as_ref(),
        "cell mean of q",
    )
}

/// Condition (1/d_k)(∫q + β_{k−1}⁻¹ + β_k⁻¹) → +∞.
pub fn check_combined_divergence(spec: &OperatorSpec) -> Verdict {
    let values = combined_values(spec);
    let (mean_asym, _, _) = q_mean_asyms(spec);
    // sum of two consecutive 1/β values divided by d_k
    let coupling_term = match inv_beta_asym(spec) {
        Asym::Const(c) => Asym::Const(2.0 * c),
        Asym::Power { coef, exp } => Asym::Power { coef: 2.0 * coef, exp },
        other => other,
    }
    .div(d_asym(spec));
    let limit = lim_add(mean_asym.limit(), coupling_term.limit());
    divergence_verdict(
        &values,
        limit,
        spec.tail().combined_limit,
        None,
        "combined cell sequence",
    )
}

// ---------------------------------------------------------------------------
// Molchanov windows
// ---------------------------------------------------------------------------

/// ∫_x^{x+ε} q, exact for the truncated piecewise-affine data.
pub fn window_integral(spec: &OperatorSpec, x: f64, eps: f64) -> f64 {
    let (lo, hi) = (x, x + eps);
    let mut acc = 0.0;
    for p in spec.pieces() {
        let a = p.from.max(lo);
        let b = p.to.min(hi);
        if b > a {
            acc += (b - a) * (p.c0 + p.c1 * 0.5 * (a + b));
        }
    }
    acc
}

/// Exact sup over x ∈ [0, x_K − w] of ∫_x^{x+w} q₋ (Brinck-type window).
pub fn brinck_window_sup(spec: &OperatorSpec, width: f64) -> f64 {
    let x_end = spec.x(spec.num_cells());
    if width >= x_end {
        return qminus_window(spec, 0.0, x_end);
    }
    // breakpoints of q₋: piece ends and zero crossings
    let mut bps = vec![0.0];
    for p in spec.pieces() {
        bps.push(p.from);
        bps.push(p.to);
        if p.c1 != 0.0 {
            let x0 = -p.c0 / p.c1;
            if x0 > p.from && x0 < p.to {
                bps.push(x0);
            }
        }
    }
    let mut candidates: Vec<f64> = bps
        .iter()
        .flat_map(|&b| [b, b - width])
        .filter(|&x| (0.0..=x_end - width).contains(&x))
        .collect();
    candidates.push(0.0);
    candidates.push(x_end - width);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * x_end.max(1.0));

    let qminus_at = |x: f64| -> f64 {
        let q = spec.q_at(x);
        (-q).max(0.0)
    };
    let mut best = f64::NEG_INFINITY;
    for w in candidates.windows(2) {
        let (a, b) = (w[0], w[1]);
        for x in [a, b] {
            best = best.max(qminus_window(spec, x, x + width));
        }
        // W′(x) = q₋(x+w) − q₋(x) is affine between candidates
        let da = qminus_at(a + width) - qminus_at(a);
        let db = qminus_at(b + width) - qminus_at(b);
        if (da > 0.0) != (db > 0.0) && (da - db).abs() > 0.0 {
            let t = da / (da - db);
            let x = a + t * (b - a);
            best = best.max(qminus_window(spec, x, x + width));
        }
    }
    best
}

fn qminus_window(spec: &OperatorSpec, lo: f64, hi: f64) -> f64 {
    let mut acc = 0.0;
    for p in spec.pieces() {
        let a = p.from.max(lo);
        let b = p.to.min(hi);
        if b > a {
            acc += p.split_integrals(a, b).0;
        }
    }
    acc
}

/// Molchanov condition: ∫_x^{x+ε} q → ∞ for every ε in the list.
pub fn check_molchanov(spec: &OperatorSpec, epsilons: &[f64]) -> (Verdict, Vec<EpsVerdict>) {
    let x_end = spec.x(spec.num_cells());
    let per_eps: Vec<EpsVerdict> = epsilons
        .iter()
        .map(|&eps| EpsVerdict { epsilon: eps, verdict: molchanov_at_eps(spec, eps, x_end) })
        .collect();
    let any_fails = per_eps.iter().find(|e| e.verdict.is_fails());
    let all_hold = per_eps.iter().all(|e| e.verdict.is_holds());
    let aggregate = if let Some(f) = any_fails {
        Verdict::fails(
            Witness {
                index: None,
                x: Some(f.epsilon),
                quantity: f.verdict.witness.as_ref().map_or(f64::NAN, |w| w.quantity),
                description: format!("window integrals stay bounded at ε = {}", f.epsilon),
            },
            f.verdict.source.clone(),
        )
    } else if all_hold {
        Verdict::holds(per_eps[0].verdict.source.clone())
    } else {
        Verdict::inconclusive("some ε-windows undecided")
    };
    (aggregate, per_eps)
}

fn molchanov_at_eps(spec: &OperatorSpec, eps: f64, x_end: f64) -> Verdict {
    // trend samples near the truncation end
    let mut samples = Vec::new();
    let n_s = 8;
    for i in 0..n_s {
        let x = (x_end - eps) * (0.6 + 0.4 * i as f64 / (n_s - 1) as f64);
        if x >= 0.0 {
            samples.push((i, window_integral(spec, x, eps)));
        }
    }
    let ev = seq_evidence(&samples);

    if let Some(decls) = &spec.tail().molchanov {
        if let Some(d) = decls.iter().find(|d| d.covers(eps)) {
            return match d.limit {
                ExtReal::PosInf => Verdict::holds("declaration").with_evidence(ev),
                other => Verdict::fails(
                    Witness {
                        index: None,
                        x: Some(eps),
                        quantity: other.as_f64(),
                        description: format!(
                            "declared window liminf {} at ε = {eps}",
                            other.as_f64()
                        ),
                    },
                    "declaration",
                )
                .with_evidence(ev),
            };
        }
    }
    match spec.potential_class() {
        PotentialClass::Zero | PotentialClass::Constant(_) => {
            let c = if let PotentialClass::Constant(c) = spec.potential_class() {
                *c
            } else {
                0.0
            };
            Verdict::fails(
                Witness {
                    index: None,
                    x: Some(eps),
                    quantity: eps * c,
                    description: format!("constant potential: window integral ≡ {}", eps * c),
                },
                "structure: constant potential",
            )
            .with_evidence(ev)
        }
        PotentialClass::Affine { c1, .. } => {
            if *c1 > 0.0 {
                Verdict::holds("structure: affine growth").with_evidence(ev)
            } else {
                Verdict::fails(
                    Witness {
                        index: None,
                        x: Some(eps),
                        quantity: f64::NEG_INFINITY,
                        description: "affine decay: window integrals → −∞".into(),
                    },
                    "structure: affine decay",
                )
                .with_evidence(ev)
            }
        }
        PotentialClass::Periodic { period, .. } => {
            // periodic windows are bounded; liminf realized over one period
            let mut liminf = f64::INFINITY;
            let base = (x_end - eps - period).max(0.0);
            for i in 0..64 {
                let x = base + period * i as f64 / 64.0;
                if x + eps <= x_end {
                    liminf = liminf.min(window_integral(spec, x, eps));
                }
            }
            Verdict::fails(
                Witness {
                    index: None,
                    x: Some(eps),
                    quantity: liminf,
                    description: format!("periodic potential: window liminf ≈ {liminf}"),
                },
                "structure: periodic potential",
            )
            .with_evidence(ev)
        }
        PotentialClass::Explicit => Verdict::inconclusive(format!(
            "window behaviour at ε = {eps} undeclared for explicit pieces"
        ))
        .with_evidence(ev),
    }
}

// ---------------------------------------------------------------------------
// necessary conditions for semiboundedness (per-index, truncation-sound)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct NecReport {
    pub inf_b: Verdict,
    pub nec_1: Verdict,
    pub nec_2: Verdict,
    pub nec_3: Verdict,
}

impl NecReport {
    pub fn all_hold(&self) -> bool {
        self.inf_b.is_holds()
            && self.nec_1.is_holds()
            && self.nec_2.is_holds()
            && self.nec_3.is_holds()
    }
}

/// Interface indices (finite or Neumann couplings participate; continuity
/// points cannot carry a step-function jump).
fn interface_indices(spec: &OperatorSpec) -> Vec<usize> {
    (1..=spec.num_cells())
        .filter(|&k| !matches!(spec.coupling(k), Coupling::NoInteraction))
        .collect()
}

fn negative_sites(spec: &OperatorSpec) -> Vec<usize> {
    (1..=spec.num_cells())
        .filter(|&k| matches!(spec.coupling(k), Coupling::Finite(b) if b < 0.0))
        .collect()
}

/// ∫ q·f² for the width-w tent at x (f = (x + w − t)/w on [x, x+w]), using
/// the global potential law when the tent leaves the truncation. `None` when
/// the potential is undeclared there.
fn tent_q_energy(spec: &OperatorSpec, x: f64, w: f64) -> Option<f64> {
    let x_end = spec.x(spec.num_cells());
    let tent_sq_int = |piece_c0: f64, piece_c1: f64, lo: f64, hi: f64| -> f64 {
        // ∫_{lo}^{hi} (c0 + c1 t)·((x + w − t)/w)² dt, expanded in s = x + w − t
        let g = |s: f64| {
            let c0 = piece_c0 + piece_c1 * (x + w);
            // t = x + w − s ⇒ q = c0 − c1·s; integrand (c0 − c1 s)s²/w², ds
            (c0 * s * s * s / 3.0 - piece_c1 * s * s * s * s / 4.0) / (w * w)
        };
        g(x + w - lo) - g(x + w - hi)
    };
    if x + w <= x_end + 1e-12 {
        let mut acc = 0.0;
        for p in spec.pieces() {
            let lo = p.from.max(x);
            let hi = p.to.min(x + w);
            if hi > lo {
                acc += tent_sq_int(p.c0, p.c1, lo, hi);
            }
        }
        return Some(acc);
    }
    match spec.potential_class() {
        PotentialClass::Zero => Some(0.0),
        PotentialClass::Constant(c) => Some(c * w / 3.0),
        PotentialClass::Affine { c0, c1 } => Some(tent_sq_int(*c0, *c1, x, x + w)),
        PotentialClass::Periodic { period, pattern } => {
            let mut acc = 0.0;
            let mut shift = (x / period).floor() * period;
            while shift < x + w {
                for p in pattern {
                    let lo = (p.from + shift).max(x);
                    let hi = (p.to + shift).min(x + w);
                    if hi > lo {
                        acc += tent_sq_int(p.c0 - p.c1 * shift, p.c1, lo, hi);
                    }
                }
                shift += period;
            }
            Some(acc)
        }
        PotentialClass::Explicit => None,
    }
}

/// Checks the four necessary inequality families for t ≥ −C over the
/// truncation. Each inequality is the exact energy of an explicit test
/// function (tent or step, potential term included), so a violation is a
/// Rayleigh quotient below −C and Fails is sound; Holds means no violation
/// in the given data. For q ≡ 0 the quantities reduce to the displayed
/// coupling inequalities.
pub fn check_necessary_semibounded(spec: &OperatorSpec, c: f64) -> NecReport {
    let tol = 1e-12;
    let neg = negative_sites(spec);

    // (i): tent of width 1 at x_k has energy 1 + 1/β_k + ∫q·f², norm² = 1/3
    let mut inf_b = Verdict::holds("truncation");
    for &k in &neg {
        let v = neg_inv(spec.coupling(k));
        let Some(q_term) = tent_q_energy(spec, spec.x(k), 1.0) else {
            continue;
        };
        if v > 1.0 + c / 3.0 + q_term + tol {
            inf_b = Verdict::fails(
                Witness {
                    index: Some(k),
                    x: Some(spec.x(k)),
                    quantity: v,
                    description: format!("(1/β)⁻ = {v} > 1 + C/3 + ∫q·f² at x_{k}"),
                },
                "truncation",
            );
            break;
        }
    }

    // (ii): 1/|β_{k_j}| ≤ C·min{gap to previous/next negative site}
    let mut nec_1 = Verdict::holds("truncation");
    'outer1: for (j, &kj) in neg.iter().enumerate() {
        let prev_x = if j == 0 { 0.0 } else { spec.x(neg[j - 1]) };
        let mut gap = spec.x(kj) - prev_x;
        if j + 1 < neg.len() {
            gap = gap.min(spec.x(neg[j + 1]) - spec.x(kj));
        }
        let v = neg_inv(spec.coupling(kj));
        if v > c * gap + tol {
            nec_1 = Verdict::fails(
                Witness {
                    index: Some(kj),
                    x: Some(spec.x(kj)),
                    quantity: v,
                    description: format!("1/|β| = {v} > C·min gap = {}", c * gap),
                },
                "truncation",
            );
            break 'outer1;
        }
    }

    // (iii)/(iv): the step χ_{[x_i, x_j]} has energy 1/β_i + 1/β_j + ∫q and
    // norm² = x_j − x_i; check it against −C(x_j − x_i) for interfaces up to
    // the neighbouring negative site on each side
    let mut q_prefix = vec![0.0; spec.num_cells() + 1];
    for k in 1..=spec.num_cells() {
        q_prefix[k] = q_prefix[k - 1] + spec.cell_integrals(k).expect("valid index").q;
    }
    let interfaces = interface_indices(spec);
    let mut nec_2 = Verdict::holds("truncation");
    let mut nec_3 = Verdict::holds("truncation");
    for (j, &kj) in neg.iter().enumerate() {
        let inv_j = spec.inv_beta(kj).unwrap_or(0.0);
        let next_neg = neg.get(j + 1).copied().unwrap_or(usize::MAX);
        let prev_neg = if j == 0 { 0 } else { neg[j - 1] };
        let lo = interfaces.partition_point(|&m| m < prev_neg.max(1));
        let hi = interfaces.partition_point(|&m| m <= next_neg.min(spec.num_cells()));
        for &m in &interfaces[lo..hi] {
            if m > kj && m <= next_neg && nec_2.is_holds() {
                let s = inv_j + spec.inv_beta(m).unwrap_or(0.0) + q_prefix[m] - q_prefix[kj];
                let bound = -c * (spec.x(m) - spec.x(kj));
                if s < bound - tol {
                    nec_2 = Verdict::fails(
                        Witness {
                            index: Some(kj),
                            x: Some(spec.x(m)),
                            quantity: s,
                            description: format!(
                                "1/β_{kj} + 1/β_{m} + ∫q = {s} < −C·(x_{m} − x_{kj}) = {bound}"
                            ),
                        },
                        "truncation",
                    );
                }
            }
            if m < kj && m >= prev_neg.max(1) && nec_3.is_holds() {
                let s = spec.inv_beta(m).unwrap_or(0.0) + inv_j + q_prefix[kj] - q_prefix[m];
                let bound = -c * (spec.x(kj) - spec.x(m));
                if s < bound - tol {
                    nec_3 = Verdict::fails(
                        Witness {
                            index: Some(m),
                            x: Some(spec.x(kj)),
                            quantity: s,
                            description: format!(
                                "1/β_{m} + 1/β_{kj} + ∫q = {s} < −C·(x_{kj} − x_{m}) = {bound}"
                            ),
                        },
                        "truncation",
                    );
                }
            }
        }
    }
    NecReport { inf_b, nec_1, nec_2, nec_3 }
}

// ---------------------------------------------------------------------------
// unboundedness certificates
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub enum CertificateFamily {
    /// Normalized indicators h_k with diverging negative energies.
    Indicators,
    /// Step functions χ_{[x_i, x_j]} with diverging negative quotients.
    Steps,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertMember {
    pub description: String,
    pub energy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub family: CertificateFamily,
    pub members: Vec<CertMember>,
}

/// Searches for an explicit test-function family whose Rayleigh quotients
/// decrease without bound over the truncation. Every reported energy is the
/// numerically evaluated quotient of the actual test function.
pub fn unboundedness_certificate(
    spec: &OperatorSpec,
    params: &CriteriaParams,
) -> Option<Certificate> {
    let indicators = indicator_certificate(spec, params);
    let steps = step_certificate(spec, params);
    match (indicators, steps) {
        (Some(a), Some(b)) => {
            let ea = a.members.last().map_or(0.0, |m| m.energy);
            let eb = b.members.last().map_or(0.0, |m| m.energy);
            Some(if ea <= eb { a } else { b })
        }
        (a, b) => a.or(b),
    }
}

fn descending_envelope(cands: Vec<(String, f64)>, params: &CriteriaParams) -> Option<Vec<CertMember>> {
    let mut env: Vec<CertMember> = Vec::new();
    for (description, energy) in cands {
        if env.last().map_or(energy < 0.0, |l| energy < l.energy) {
            env.push(CertMember { description, energy });
        }
    }
    let n = env.len();
    if n < params.cert_min_members {
        return None;
    }
    if env[n - 1].energy > params.cert_energy_threshold {
        return None;
    }
    // decrements must not flatten out: compare median decrements of halves
    let decs: Vec<f64> = env.windows(2).map(|w| w[0].energy - w[1].energy).collect();
    let mut first: Vec<f64> = decs[..decs.len() / 2].to_vec();
    let mut last: Vec<f64> = decs[decs.len() / 2..].to_vec();
    first.sort_by(f64::total_cmp);
    last.sort_by(f64::total_cmp);
    let med = |v: &[f64]| v[v.len() / 2];
    if med(&last) < 0.25 * med(&first) {
        return None;
    }
    Some(env)
}

fn indicator_certificate(spec: &OperatorSpec, params: &CriteriaParams) -> Option<Certificate> {
    let mut cands = Vec::new();
    for k in 1..=spec.num_cells() {
        if let Ok(v) = forms::indicator_form_value(spec, k) {
            cands.push((format!("h_{k} on cell {k}"), v));
        }
    }
    descending_envelope(cands, params).map(|members| Certificate {
        family: CertificateFamily::Indicators,
        members,
    })
}

fn step_certificate(spec: &OperatorSpec, params: &CriteriaParams) -> Option<Certificate> {
    let neg = negative_sites(spec);
    let interfaces = interface_indices(spec);
    let mut cands = Vec::new();
    for (j, &kj) in neg.iter().enumerate() {
        let next_neg = neg.get(j + 1).copied().unwrap_or(usize::MAX);
        let lo = interfaces.partition_point(|&m| m <= kj);
        let hi = interfaces.partition_point(|&m| m <= next_neg.min(spec.num_cells()));
        for &m in &interfaces[lo..hi] {
            let f = match forms::make_test_function(spec, &TestFunctionKind::Step { i: kj, j: m })
            {
                Ok(f) => f,
                Err(_) => continue,
            };
            if let Ok(q) = forms::rayleigh_quotient(spec, &f) {
                if q < 0.0 {
                    cands.push((format!("χ on [x_{kj}, x_{m}]"), q));
                }
            }
        }
    }
    descending_envelope(cands, params).map(|members| Certificate {
        family: CertificateFamily::Steps,
        members,
    })
}

// ---------------------------------------------------------------------------
// theorem-level composition
// ---------------------------------------------------------------------------

/// Evaluates all conditions and applies the implication table. Unreachable
/// combinations yield Inconclusive, never a guess.
pub fn theorem_verdicts(spec: &OperatorSpec, params: &CriteriaParams) -> CriterionReport {
    let stats = spec.extent_stats();
    let d_sup_finite = stats.d_sup.is_finite();

    let (_c0_val, c0) = sup_c0(spec);
    let (_c1_val, c1) = sup_c1(spec);
    let (molchanov, per_eps) = check_molchanov(spec, &params.epsilons);
    let mean_q = check_mean_q_divergence(spec);
    let combined = check_combined_divergence(spec);
    let coupling = check_coupling_vanishes(spec);
    let q_mean_v = check_q_mean_vanishes(spec);
    let qminus_v = check_qminus_mean_vanishes(spec);
    let coupling_neg = check_coupling_neg_vanishes(spec);
    let nec = check_necessary_semibounded(spec, params.nec_c);
    let certificate = unboundedness_certificate(spec, params);

    let q_bounded = potential_bounded_structurally(spec);
    let q_nonneg = potential_nonneg_structurally(spec);

    // semiboundedness
    let semibounded = if c0.is_holds() && c1.is_holds() && d_sup_finite {
        Verdict::holds("C0 and C1 finite with d* < ∞")
    } else if let Some(cert) = &certificate {
        let last = cert.members.last().expect("nonempty certificate");
        Verdict::fails(
            Witness {
                index: None,
                x: None,
                quantity: last.energy,
                description: format!(
                    "{} family of {} test functions with energies diverging to −∞ (last: {})",
                    match cert.family {
                        CertificateFamily::Indicators => "indicator",
                        CertificateFamily::Steps => "step",
                    },
                    cert.members.len(),
                    last.energy
                ),
            },
            "certificate: evaluated Rayleigh quotients",
        )
    } else {
        Verdict::inconclusive("sufficient conditions not established; no certificate found")
    };

    // self-adjointness
    let self_adjoint = if semibounded.is_holds() {
        Verdict::holds("lower semibounded ⇒ self-adjoint")
    } else if q_bounded {
        Verdict::holds("bounded potential: realization is self-adjoint")
    } else {
        Verdict::inconclusive("not known semibounded; q unbounded")
    };

    // discreteness
    let suff_discrete = d_sup_finite
        && c0.is_holds()
        && c1.is_holds()
        && molchanov.is_holds()
        && mean_q.is_holds();
    let fails_via_combined = semibounded.is_holds() && combined.is_fails();
    let fails_via_bounded_q = q_bounded && semibounded.is_holds();
    let discrete = match (suff_discrete, fails_via_combined || fails_via_bounded_q) {
        (true, false) => Verdict::holds("d* < ∞, C0, C1, Molchanov and cell-mean divergence"),
        (false, true) => {
            let (desc, src) = if fails_via_combined {
                (
                    "semibounded while the combined cell sequence does not diverge",
                    "necessity of combined divergence",
                )
            } else {
                (
                    "semibounded with bounded potential",
                    "bounded-q non-discreteness",
                )
            };
            Verdict::fails(
                Witness { index: None, x: None, quantity: f64::NAN, description: desc.into() },
                src,
            )
        }
        (false, false) => {
            if molchanov.is_holds() && combined.is_holds() && !mean_q.is_holds() {
                Verdict::inconclusive(
                    "inside the gap between necessary and sufficient conditions",
                )
            } else {
                Verdict::inconclusive("neither sufficiency nor a necessity violation established")
            }
        }
        (true, true) => Verdict::inconclusive(
            "contradictory implications; report both sides for inspection",
        ),
    };

    // essential-spectrum transfer
    let ess_transfer = if d_sup_finite && c0.is_holds() && coupling.is_holds() {
        Verdict::holds("d* < ∞, C0 finite, coupling ratio vanishes")
    } else if coupling.is_fails() {
        Verdict::inconclusive(
            "coupling ratio does not vanish; transfer not licensed (necessity only under h-stability)",
        )
    } else {
        Verdict::inconclusive("hypotheses not established")
    };
    let ess_free = if ess_transfer.is_holds() && q_mean_v.is_holds() {
        Verdict::holds("additionally mean |q| vanishes")
    } else {
        Verdict::inconclusive("requires transfer plus vanishing mean |q|")
    };

    // negative spectrum discrete
    let negative_discrete = if d_sup_finite && qminus_v.is_holds() && coupling_neg.is_holds() {
        Verdict::holds("mean q₋ and negative coupling ratio vanish")
    } else {
        Verdict::inconclusive("hypotheses not established")
    };

    // h-stability
    let all_beta_negative = !spec.couplings().is_empty()
        && spec
            .couplings()
            .iter()
            .all(|c| matches!(c, Coupling::Finite(b) if *b < 0.0));
    let sup_absq_finite = {
        let (_, abs_asym, _) = q_mean_asyms(spec);
        matches!(abs_asym.limit(), Some(ExtReal::Finite(_)))
            || matches!(spec.tail().q_mean_limit, Some(ExtReal::Finite(_)))
    };
    let h_stable = if d_sup_finite && q_nonneg && sup_absq_finite && coupling_neg.is_holds() {
        Verdict::holds("negative coupling ratio vanishes (stable for every h > 0)")
    } else if all_beta_negative && coupling_neg.is_fails() && semibounded.is_holds() {
        Verdict::fails(
            Witness {
                index: None,
                x: None,
                quantity: coupling_neg.witness.as_ref().map_or(f64::NAN, |w| w.quantity),
                description:
                    "all-negative strengths: vanishing coupling ratio is also necessary and fails"
                        .into(),
            },
            "h-stability necessity for β = −β⁻",
        )
    } else {
        Verdict::inconclusive("hypotheses not established")
    };

    CriterionReport {
        conditions: Conditions {
            c0_finite: c0,
            c1_finite: c1,
            molchanov,
            molchanov_per_eps: per_eps,
            mean_q_divergence: mean_q,
            combined_divergence: combined,
            coupling_vanishes: coupling,
            q_mean_vanishes: q_mean_v,
            qminus_mean_vanishes: qminus_v,
            coupling_neg_vanishes: coupling_neg,
            nec_inf_b: nec.inf_b,
            nec_1: nec.nec_1,
            nec_2: nec.nec_2,
            nec_3: nec.nec_3,
        },
        derived: DerivedVerdicts {
            semibounded,
            self_adjoint,
            discrete,
            ess_spectrum_transfer: ess_transfer,
            ess_equals_free_n: ess_free,
            negative_discrete,
            h_stable,
        },
        nec_c: params.nec_c,
    }
}

/// Evaluates the full report with default parameters.
pub fn evaluate(spec: &OperatorSpec) -> CriterionReport {
    theorem_verdicts(spec, &CriteriaParams::default())
}
