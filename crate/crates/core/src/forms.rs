//! The quadratic form t_{X,β,q} and the named test functions on which the
//! criteria are built.
//!
//! t[f] = ∫(|f′|² + q|f|²)dx + Σ_k |f(x_k+) − f(x_k−)|²/β_k, split into a
//! nonnegative part (β_k > 0) and a subtracted nonnegative part (β_k < 0).
//! Functions are piecewise polynomials of degree ≤ 3 with explicit one-sided
//! traces at interaction sites, so every integral here is closed-form.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Coupling, ModelError, OperatorSpec};

const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FormError {
    #[error("nonzero jump {jump} at continuity point x_{k} (β = 0)")]
    JumpAtContinuityPoint { k: usize, jump: f64 },
    #[error("function has zero L² norm")]
    ZeroFunction,
    #[error("function violates the operator domain: {0}")]
    DomainViolation(String),
    #[error("unsupported test function: {0}")]
    UnsupportedKind(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One polynomial segment f(x) = Σ coef[i]·(x − a)^i on [a, b].
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub coef: [f64; 4],
}

impl Segment {
    pub fn constant(a: f64, b: f64, value: f64) -> Self {
        Segment { a, b, coef: [value, 0.0, 0.0, 0.0] }
    }

    pub fn value_at(&self, x: f64) -> f64 {
        let t = x - self.a;
        self.coef[0] + t * (self.coef[1] + t * (self.coef[2] + t * self.coef[3]))
    }

    pub fn deriv_at(&self, x: f64) -> f64 {
        let t = x - self.a;
        self.coef[1] + t * (2.0 * self.coef[2] + t * 3.0 * self.coef[3])
    }

    fn poly(&self) -> Vec<f64> {
        self.coef.to_vec()
    }

    fn deriv_poly(&self) -> Vec<f64> {
        vec![self.coef[1], 2.0 * self.coef[2], 3.0 * self.coef[3]]
    }

    fn second_deriv_poly(&self) -> Vec<f64> {
        vec![2.0 * self.coef[2], 6.0 * self.coef[3]]
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// ∫_{t0}^{t1} p(t) dt for monomial coefficients p.
fn poly_int(p: &[f64], t0: f64, t1: f64) -> f64 {
    let mut acc = 0.0;
    let mut p0 = t0;
    let mut p1 = t1;
    for (i, &c) in p.iter().enumerate() {
        acc += c * (p1 - p0) / (i as f64 + 1.0);
        p0 *= t0;
        p1 *= t1;
    }
    acc
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Trace {
    pub value_left: f64,
    pub value_right: f64,
    pub deriv_left: f64,
    pub deriv_right: f64,
}

impl Trace {
    pub fn jump(&self) -> f64 {
        self.value_right - self.value_left
    }
}

/// Compactly supported piecewise polynomial with explicit traces at the
/// interaction sites inside its support. Traces are stored, not recomputed,
/// so deliberately inconsistent functions can be built for negative tests;
/// consistency is enforced at the validated entry points.
#[derive(Clone, Debug)]
pub struct PiecewiseFunction {
    segments: Vec<Segment>,
    traces: BTreeMap<usize, Trace>,
    support: (f64, f64),
}

/// Named test-function families.
#[derive(Clone, Debug)]
pub enum TestFunctionKind {
    /// h_k = d_k^{−1/2}·χ_{Δ_k}; unit L² norm.
    Indicator { k: usize },
    /// Height-1 linear decay on [x_k, x_k + width], jump +1 at x_k.
    Tent { k: usize, width: f64 },
    /// χ_{[x_i, x_j]}: jumps +1 at x_i and −1 at x_j.
    Step { i: usize, j: usize },
    /// Sawtooth Σ (a_k/d_k)(x − x_{k−1}) per cell; `coeffs` empty means a_k = d_k.
    Ramp { coeffs: Vec<f64> },
}

impl PiecewiseFunction {
    /// Builds from raw segments, deriving all traces from segment data.
    pub fn from_segments(spec: &OperatorSpec, segments: Vec<Segment>) -> Result<Self, FormError> {
        if segments.is_empty() {
            return Err(FormError::ZeroFunction);
        }
        let mut segs = segments;
        segs.sort_by(|u, v| u.a.total_cmp(&v.a));
        for w in segs.windows(2) {
            if (w[0].b - w[1].a).abs() > TRACE_TOL * w[1].a.abs().max(1.0) {
                return Err(FormError::DomainViolation(format!(
                    "segments not contiguous at {}",
                    w[0].b
                )));
            }
        }
        let support = (segs[0].a, segs[segs.len() - 1].b);
        let mut f = PiecewiseFunction { segments: segs, traces: BTreeMap::new(), support };
        let mut traces = BTreeMap::new();
        for k in 1..=spec.num_cells() {
            let x = spec.x(k);
            if x >= support.0 - TRACE_TOL && x <= support.1 + TRACE_TOL {
                traces.insert(
                    k,
                    Trace {
                        value_left: f.eval_side(x, true).0,
                        value_right: f.eval_side(x, false).0,
                        deriv_left: f.eval_side(x, true).1,
                        deriv_right: f.eval_side(x, false).1,
                    },
                );
            }
        }
        f.traces = traces;
        Ok(f)
    }

    /// Builds with explicit (possibly inconsistent) traces. Used by negative
    /// tests; validated entry points will reject inconsistencies.
    pub fn with_traces(
        segments: Vec<Segment>,
        traces: BTreeMap<usize, Trace>,
        support: (f64, f64),
    ) -> Self {
        PiecewiseFunction { segments, traces, support }
    }

    fn eval_side(&self, x: f64, left: bool) -> (f64, f64) {
        let tol = TRACE_TOL * x.abs().max(1.0);
        for seg in &self.segments {
            let inside = if left {
                x > seg.a + tol && x <= seg.b + tol
            } else {
                x >= seg.a - tol && x < seg.b - tol
            };
            if inside {
                return (seg.value_at(x), seg.deriv_at(x));
            }
        }
        (0.0, 0.0)
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn trace(&self, k: usize) -> Option<&Trace> {
        self.traces.get(&k)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| {
                let p = poly_mul(&s.poly(), &s.poly());
                poly_int(&p, 0.0, s.b - s.a)
            })
            .sum()
    }

    pub fn value_at(&self, x: f64) -> f64 {
        for seg in &self.segments {
            if x >= seg.a && x <= seg.b {
                return seg.value_at(x);
            }
        }
        0.0
    }
}

fn pieces_overlapping<'s>(
    spec: &'s OperatorSpec,
    a: f64,
    b: f64,
) -> impl Iterator<Item = &'s crate::model::Piece> {
    let pieces = spec.pieces();
    let start = pieces.partition_point(|p| p.to <= a);
    pieces[start..].iter().take_while(move |p| p.from < b)
}

/// The four constituents of t[f]; `total = dirichlet + potential +
/// jump_plus − jump_minus` holds bitwise.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FormBreakdown {
    pub dirichlet: f64,
    pub potential: f64,
    pub jump_plus: f64,
    pub jump_minus: f64,
    pub total: f64,
}

/// Evaluates t_{X,β,q}[f] by exact polynomial integration. Jumps at β = +∞
/// contribute nothing; any jump at a continuity point is an error.
pub fn form_energy(spec: &OperatorSpec, f: &PiecewiseFunction) -> Result<FormBreakdown, FormError> {
    let mut dirichlet = 0.0;
    let mut potential = 0.0;
    for seg in f.segments() {
        let dp = seg.deriv_poly();
        dirichlet += poly_int(&poly_mul(&dp, &dp), 0.0, seg.b - seg.a);
        let ff = poly_mul(&seg.poly(), &seg.poly());
        for piece in pieces_overlapping(spec, seg.a, seg.b) {
            let lo = piece.from.max(seg.a);
            let hi = piece.to.min(seg.b);
            if hi <= lo {
                continue;
            }
            // q in segment-local coordinates: q(t) = (c0 + c1·a) + c1·t
            let q_local = [piece.c0 + piece.c1 * seg.a, piece.c1];
            let integrand = poly_mul(&q_local, &ff);
            potential += poly_int(&integrand, lo - seg.a, hi - seg.a);
        }
    }

    let mut jump_plus = 0.0;
    let mut jump_minus = 0.0;
    let (s0, s1) = f.support();
    let pts = spec.points();
    let k_first = pts.partition_point(|&x| x < s0 - TRACE_TOL) + 1;
    let k_last = pts.partition_point(|&x| x <= s1 + TRACE_TOL);
    for k in k_first..=k_last {
        let x = spec.x(k);
        let jump = f.trace(k).map_or(0.0, Trace::jump);
        match spec.coupling(k) {
            Coupling::NoInteraction => {
                if jump.abs() > TRACE_TOL * (1.0 + jump.abs()) {
                    return Err(FormError::JumpAtContinuityPoint { k, jump });
                }
            }
            Coupling::Neumann => {}
            Coupling::Finite(b) => {
                let term = jump * jump / b.abs();
                if b > 0.0 {
                    jump_plus += term;
                } else {
                    jump_minus += term;
                }
            }
        }
    }

    let total = dirichlet + potential + jump_plus - jump_minus;
    Ok(FormBreakdown { dirichlet, potential, jump_plus, jump_minus, total })
}

/// Closed form of t[h_k] for the normalized indicator h_k:
/// (1/d_k)(∫_{Δ_k} q + β_{k−1}⁻¹ + β_k⁻¹), with β₀⁻¹ = 0.
pub fn indicator_form_value(spec: &OperatorSpec, k: usize) -> Result<f64, FormError> {
    let max = spec.num_cells();
    if k == 0 || k > max {
        return Err(ModelError::IndexOutOfRange { index: k, max }.into());
    }
    let prev = spec
        .inv_beta(k - 1)
        .ok_or(FormError::JumpAtContinuityPoint { k: k - 1, jump: 1.0 })?;
    let next = spec
        .inv_beta(k)
        .ok_or(FormError::JumpAtContinuityPoint { k, jump: 1.0 })?;
    let ci = spec.cell_integrals(k)?;
    Ok((ci.q + prev + next) / spec.d(k))
}

/// Builds one of the named test functions.
pub fn make_test_function(
    spec: &OperatorSpec,
    kind: &TestFunctionKind,
) -> Result<PiecewiseFunction, FormError> {
    let kmax = spec.num_cells();
    match kind {
        TestFunctionKind::Indicator { k } => {
            let k = *k;
            if k == 0 || k > kmax {
                return Err(ModelError::IndexOutOfRange { index: k, max: kmax }.into());
            }
            let (a, b) = (spec.x(k - 1), spec.x(k));
            let h = 1.0 / spec.d(k).sqrt();
            let mut traces = BTreeMap::new();
            if k > 1 {
                traces.insert(k - 1, Trace { value_right: h, ..Trace::default() });
            }
            traces.insert(k, Trace { value_left: h, ..Trace::default() });
            Ok(PiecewiseFunction::with_traces(
                vec![Segment::constant(a, b, h)],
                traces,
                (a, b),
            ))
        }
        TestFunctionKind::Tent { k, width } => {
            let (k, w) = (*k, *width);
            if k == 0 || k > kmax {
                return Err(ModelError::IndexOutOfRange { index: k, max: kmax }.into());
            }
            if !(w > 0.0) || spec.x(k) + w > spec.x(kmax) + TRACE_TOL {
                return Err(FormError::UnsupportedKind(format!(
                    "tent of width {w} at x_{k} leaves the truncation"
                )));
            }
            let a = spec.x(k);
            let seg = Segment { a, b: a + w, coef: [1.0, -1.0 / w, 0.0, 0.0] };
            let mut traces = BTreeMap::new();
            traces.insert(
                k,
                Trace { value_right: 1.0, deriv_right: -1.0 / w, ..Trace::default() },
            );
            for m in k + 1..=kmax {
                let x = spec.x(m);
                if x >= a + w - TRACE_TOL {
                    break;
                }
                let v = seg.value_at(x);
                traces.insert(
                    m,
                    Trace {
                        value_left: v,
                        value_right: v,
                        deriv_left: -1.0 / w,
                        deriv_right: -1.0 / w,
                    },
                );
            }
            Ok(PiecewiseFunction::with_traces(vec![seg], traces, (a, a + w)))
        }
        TestFunctionKind::Step { i, j } => {
            let (i, j) = (*i, *j);
            if i >= j || j > kmax || i == 0 {
                return Err(FormError::UnsupportedKind(format!(
                    "step needs interface indices 1 ≤ i < j ≤ {kmax}, got ({i}, {j})"
                )));
            }
            let (a, b) = (spec.x(i), spec.x(j));
            let mut traces = BTreeMap::new();
            traces.insert(i, Trace { value_right: 1.0, ..Trace::default() });
            traces.insert(j, Trace { value_left: 1.0, ..Trace::default() });
            for m in i + 1..j {
                traces.insert(
                    m,
                    Trace { value_left: 1.0, value_right: 1.0, ..Trace::default() },
                );
            }
            Ok(PiecewiseFunction::with_traces(
                vec![Segment::constant(a, b, 1.0)],
                traces,
                (a, b),
            ))
        }
        TestFunctionKind::Ramp { coeffs } => {
            let a: Vec<f64> = if coeffs.is_empty() {
                (1..=kmax).map(|k| spec.d(k)).collect()
            } else {
                if coeffs.len() != kmax {
                    return Err(FormError::UnsupportedKind(format!(
                        "ramp needs {kmax} coefficients, got {}",
                        coeffs.len()
                    )));
                }
                coeffs.clone()
            };
            let mut segments = Vec::with_capacity(kmax);
            let mut traces = BTreeMap::new();
            for k in 1..=kmax {
                let (lo, hi) = (spec.x(k - 1), spec.x(k));
                let slope = a[k - 1] / spec.d(k);
                segments.push(Segment { a: lo, b: hi, coef: [0.0, slope, 0.0, 0.0] });
                let next_slope = if k < kmax { a[k] / spec.d(k + 1) } else { 0.0 };
                traces.insert(
                    k,
                    Trace {
                        value_left: a[k - 1],
                        value_right: 0.0,
                        deriv_left: slope,
                        deriv_right: next_slope,
                    },
                );
            }
            Ok(PiecewiseFunction::with_traces(segments, traces, (0.0, spec.x(kmax))))
        }
    }
}

/// t[f] / ‖f‖².
pub fn rayleigh_quotient(spec: &OperatorSpec, f: &PiecewiseFunction) -> Result<f64, FormError> {
    let norm = f.l2_norm_sq();
    if norm <= 0.0 {
        return Err(FormError::ZeroFunction);
    }
    Ok(form_energy(spec, f)?.total / norm)
}

/// Residual |(H⁰f, f) − t[f]| of the operator/form identity, for f in the
/// minimal operator domain. The left side integrates (−f″ + qf)·f segment by
/// segment; the identity transfers the interface terms into the jump
/// penalties, so for admissible polynomial data the residual is round-off.
pub fn operator_form_identity_check(
    spec: &OperatorSpec,
    f: &PiecewiseFunction,
) -> Result<f64, FormError> {
    validate_domain(spec, f)?;
    let mut lhs = 0.0;
    for seg in f.segments() {
        let minus_fpp: Vec<f64> =
            seg.second_deriv_poly().iter().map(|c| -c).collect();
        lhs += poly_int(&poly_mul(&minus_fpp, &seg.poly()), 0.0, seg.b - seg.a);
        let ff = poly_mul(&seg.poly(), &seg.poly());
        for piece in pieces_overlapping(spec, seg.a, seg.b) {
            let lo = piece.from.max(seg.a);
            let hi = piece.to.min(seg.b);
            if hi <= lo {
                continue;
            }
            let q_local = [piece.c0 + piece.c1 * seg.a, piece.c1];
            lhs += poly_int(&poly_mul(&q_local, &ff), lo - seg.a, hi - seg.a);
        }
    }
    let rhs = form_energy(spec, f)?.total;
    Ok((lhs - rhs).abs())
}

fn validate_domain(spec: &OperatorSpec, f: &PiecewiseFunction) -> Result<(), FormError> {
    let (s0, s1) = f.support();
    let x_end = spec.x(spec.num_cells());
    let scale = |v: f64| TRACE_TOL * (1.0 + v.abs());

    let fail = |msg: String| Err(FormError::DomainViolation(msg));

    // Left end: f′(0) = 0 at the origin, otherwise smooth vanishing.
    let first = &f.segments()[0];
    if s0 <= TRACE_TOL {
        if first.deriv_at(s0).abs() > scale(first.coef[0]) {
            return fail("f'(0) ≠ 0".into());
        }
    } else if first.value_at(s0).abs() > TRACE_TOL || first.deriv_at(s0).abs() > TRACE_TOL {
        return fail(format!("support starts at {s0} with nonzero value or slope"));
    }
    // Right end: compact support (or Neumann at the truncation edge).
    let last = &f.segments()[f.segments().len() - 1];
    let at_edge = (s1 - x_end).abs() <= TRACE_TOL * x_end.max(1.0);
    if last.deriv_at(s1).abs() > scale(last.value_at(s1)) {
        return fail(format!("f'({s1}) ≠ 0 at the right support end"));
    }
    if !at_edge && last.value_at(s1).abs() > TRACE_TOL {
        return fail(format!("support ends at {s1} < {x_end} with nonzero value"));
    }

    // Internal segment joints away from interfaces must be C¹.
    let interface_xs: Vec<f64> = (1..=spec.num_cells()).map(|k| spec.x(k)).collect();
    for w in f.segments().windows(2) {
        let t = w[0].b;
        let is_interface = interface_xs
            .iter()
            .any(|&x| (x - t).abs() <= TRACE_TOL * x.max(1.0));
        if is_interface {
            continue;
        }
        if (w[0].value_at(t) - w[1].value_at(t)).abs() > scale(w[0].value_at(t))
            || (w[0].deriv_at(t) - w[1].deriv_at(t)).abs() > scale(w[0].deriv_at(t))
        {
            return fail(format!("segment joint at {t} is not C¹"));
        }
    }

    // Interface conditions at every site inside the support.
    for k in 1..=spec.num_cells() {
        let x = spec.x(k);
        if x <= s0 + TRACE_TOL || x >= s1 - TRACE_TOL {
            continue;
        }
        let tr = f.trace(k).copied().unwrap_or_default();
        match spec.coupling(k) {
            Coupling::Finite(b) => {
                if (tr.deriv_left - tr.deriv_right).abs() > scale(tr.deriv_left) {
                    return fail(format!("f' jumps at x_{k}"));
                }
                let expected = b * tr.deriv_left;
                if (tr.jump() - expected).abs() > scale(expected) {
                    return fail(format!(
                        "jump {} at x_{k} differs from β·f' = {expected}",
                        tr.jump()
                    ));
                }
            }
            Coupling::Neumann => {
                if tr.deriv_left.abs() > TRACE_TOL || tr.deriv_right.abs() > TRACE_TOL {
                    return fail(format!("f' must vanish on both sides of x_{k} (β = ∞)"));
                }
            }
            Coupling::NoInteraction => {
                if tr.jump().abs() > scale(tr.value_left)
                    || (tr.deriv_left - tr.deriv_right).abs() > scale(tr.deriv_left)
                {
                    return fail(format!("f must be C¹ at continuity point x_{k}"));
                }
            }
        }
        // stored traces must match segment data at interfaces the segments span
        let (vl, dl) = f.eval_side(x, true);
        let (vr, dr) = f.eval_side(x, false);
        if (vl - tr.value_left).abs() > scale(vl)
            || (vr - tr.value_right).abs() > scale(vr)
            || (dl - tr.deriv_left).abs() > scale(dl)
            || (dr - tr.deriv_right).abs() > scale(dr)
        {
            return fail(format!("stored trace at x_{k} disagrees with segments"));
        }
    }
    Ok(())
}
