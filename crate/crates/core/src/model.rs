//! Operator data: partition of the half-line, interaction strengths, and a
//! piecewise-affine potential, with all derived per-cell quantities.
//!
//! A spec is the triple (X, β, q) truncated to finitely many cells, plus
//! optional tail declarations. Finite data cannot decide asymptotic
//! conditions, so every limit-type verdict downstream consumes either a
//! declaration or a recognized generator; the truncation itself only supplies
//! exact per-cell integrals and trends.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{
    PartitionGenerator, PotentialConfig, SpecConfig, StrengthsGenerator, TailSpec,
};

/// Relative tolerance used when validating geometric consistency of configs.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("partition points must be positive and strictly increasing (index {index}, value {value})")]
    NonMonotonePartition { index: usize, value: f64 },
    #[error("strengths list has {strengths} entries but partition has {points} points")]
    LengthMismatch { strengths: usize, points: usize },
    #[error("potential pieces leave a gap near x = {at}")]
    PieceGap { at: f64 },
    #[error("potential pieces overlap near x = {at}")]
    PieceOverlap { at: f64 },
    #[error("cell index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("tail declaration `{field}` contradicts the truncation: {detail}")]
    DeclarationMismatch { field: &'static str, detail: String },
    #[error("invalid config: {0}")]
    Config(String),
}

/// Extended real line value. Serialized as a JSON number or the literal
/// strings "inf" / "-inf".
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
    NegInf,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::NegInf => f64::NEG_INFINITY,
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::PosInf => s.serialize_str("inf"),
            ExtReal::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> de::Visitor<'de> for V {
            type Value = ExtReal;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(f, "a number or \"inf\"/\"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                Ok(ExtReal::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
                match v {
                    "inf" | "+inf" => Ok(ExtReal::PosInf),
                    "-inf" => Ok(ExtReal::NegInf),
                    other => Err(E::custom(format!("unknown extended real `{other}`"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Interaction strength at one partition point.
///
/// β = 0 is normalized at load into `NoInteraction`: the point stays in the
/// partition for cell bookkeeping but carries no interface condition beyond
/// continuity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coupling {
    NoInteraction,
    Finite(f64),
    /// β = +∞: full Neumann decoupling, f′ vanishes on both sides.
    Neumann,
}

impl Coupling {
    /// 1/β with the conventions 1/∞ = 0. `None` for a continuity point,
    /// where the jump term of the form is not defined (jumps are forbidden).
    pub fn inv_beta(self) -> Option<f64> {
        match self {
            Coupling::NoInteraction => None,
            Coupling::Finite(b) => Some(1.0 / b),
            Coupling::Neumann => Some(0.0),
        }
    }

    pub fn is_neumann(self) -> bool {
        matches!(self, Coupling::Neumann)
    }
}

/// One affine potential piece: q(x) = c0 + c1·x on [from, to).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub from: f64,
    pub to: f64,
    pub c0: f64,
    pub c1: f64,
}

impl Piece {
    pub fn q(&self, x: f64) -> f64 {
        self.c0 + self.c1 * x
    }

    pub fn len(&self) -> f64 {
        self.to - self.from
    }

    /// (∫q₋, ∫q₊) over [a, b] ⊆ [from, to], exact for the affine law,
    /// splitting at the zero crossing.
    pub fn split_integrals(&self, a: f64, b: f64) -> (f64, f64) {
        debug_assert!(a <= b + 1e-15);
        let seg = |lo: f64, hi: f64| (hi - lo) * (self.c0 + self.c1 * 0.5 * (lo + hi));
        let mut neg = 0.0;
        let mut pos = 0.0;
        let mut accumulate = |lo: f64, hi: f64| {
            if hi <= lo {
                return;
            }
            let v = seg(lo, hi);
            if self.q(0.5 * (lo + hi)) >= 0.0 {
                pos += v.max(0.0);
            } else {
                neg += (-v).max(0.0);
            }
        };
        if self.c1 != 0.0 {
            let x0 = -self.c0 / self.c1;
            if x0 > a && x0 < b {
                accumulate(a, x0);
                accumulate(x0, b);
                return (neg, pos);
            }
        }
        accumulate(a, b);
        (neg, pos)
    }
}

/// Exact integrals of the potential over one cell. `q` and `abs_q` are
/// derived from the signed parts so that q = q₊ − q₋ and |q| = q₊ + q₋ hold
/// bit for bit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellIntegrals {
    pub q: f64,
    pub q_minus: f64,
    pub q_plus: f64,
    pub abs_q: f64,
}

/// Structural class of the partition, carried over from the generator.
/// Explicit point lists stay `Explicit`: a finite list certifies nothing
/// about the tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PartitionClass {
    Arithmetic { step: f64 },
    /// d_k = k^exponent.
    SumPower { exponent: f64 },
    Explicit,
}

/// Structural class of the strengths sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StrengthsClass {
    AllNeumann,
    /// β_k = slope·k + intercept.
    Linear { slope: f64, intercept: f64 },
    /// β_k = coeff·k^exponent.
    Power { coeff: f64, exponent: f64 },
    Explicit,
}

/// Structural class of the potential. Piece lists sharing a single affine
/// law declare that law globally; a `repeat` period declares periodicity.
/// Anything else is `Explicit` (no extension claim).
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialClass {
    Zero,
    Constant(f64),
    Affine { c0: f64, c1: f64 },
    Periodic { period: f64, pattern: Vec<Piece> },
    Explicit,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExtentStats {
    /// inf d_k combined with tail declarations.
    pub d_star: f64,
    /// sup d_k combined with tail declarations (+∞ possible).
    pub d_sup: f64,
    /// min/max over the finite truncation only.
    pub d_min_finite: f64,
    pub d_max_finite: f64,
    pub nonincreasing: bool,
    pub nondecreasing: bool,
}

/// Validated operator data (X, β, q) plus tail declarations.
///
/// Immutable after construction; shared freely across threads.
#[derive(Clone, Debug)]
pub struct OperatorSpec {
    config: SpecConfig,
    points: Vec<f64>,
    couplings: Vec<Coupling>,
    pieces: Vec<Piece>,
    /// Per cell k (0-based): half-open range into `pieces`.
    cell_pieces: Vec<(usize, usize)>,
    tail: TailSpec,
    part_class: PartitionClass,
    str_class: StrengthsClass,
    pot_class: PotentialClass,
}

impl OperatorSpec {
    /// Validates and builds a spec from its config. All derived per-cell
    /// quantities (lengths, piece ranges, classes) are precomputed here.
    pub fn build(config: SpecConfig) -> Result<Self, ModelError> {
        let points = config.partition.expand()?;
        if points.is_empty() {
            return Err(ModelError::Config("partition must contain at least one point".into()));
        }
        let mut prev = 0.0;
        for (i, &x) in points.iter().enumerate() {
            if !(x > prev) || !x.is_finite() {
                return Err(ModelError::NonMonotonePartition { index: i, value: x });
            }
            prev = x;
        }

        let couplings = config.strengths.expand(points.len())?;
        if couplings.len() != points.len() {
            return Err(ModelError::LengthMismatch {
                strengths: couplings.len(),
                points: points.len(),
            });
        }

        let (pieces, pot_class) = normalize_potential(config.potential.as_ref(), &points)?;
        let cell_pieces = index_pieces(&pieces, &points);

        let tail = config.tail.clone().unwrap_or_default();
        let part_class = match &config.partition.generator {
            Some(PartitionGenerator::Arithmetic { step, .. }) => {
                PartitionClass::Arithmetic { step: *step }
            }
            Some(PartitionGenerator::SumPower { exponent, .. }) => {
                PartitionClass::SumPower { exponent: *exponent }
            }
            None => PartitionClass::Explicit,
        };
        let str_class = strengths_class(&config.strengths.generator, &couplings);

        let spec = OperatorSpec {
            config,
            points,
            couplings,
            pieces,
            cell_pieces,
            tail,
            part_class,
            str_class,
            pot_class,
        };
        spec.validate_tail_declarations()?;
        Ok(spec)
    }

    fn validate_tail_declarations(&self) -> Result<(), ModelError> {
        if let Some(limit) = self.tail.d_limit {
            let tol = self.tail.d_tol.unwrap_or(0.1);
            let k = self.num_cells();
            let from = k - (k / 10).max(1);
            if let ExtReal::Finite(l) = limit {
                for j in from..=k {
                    let d = self.d(j);
                    if (d - l).abs() > tol {
                        return Err(ModelError::DeclarationMismatch {
                            field: "d_limit",
                            detail: format!("d_{j} = {d} is farther than {tol} from {l}"),
                        });
                    }
                }
            }
        }
        if let Some(decl) = &self.tail.q_mean_bounded_subseq {
            if decl.modulus == 0 {
                return Err(ModelError::Config("subsequence modulus must be positive".into()));
            }
            let k = self.num_cells();
            let from = k.saturating_sub(k / 5).max(1);
            for j in from..=k {
                if j % decl.modulus == decl.residue % decl.modulus {
                    let m = self.cell_integrals(j)?.q / self.d(j);
                    if m > decl.bound + 1e-9 * (1.0 + decl.bound.abs()) {
                        return Err(ModelError::DeclarationMismatch {
                            field: "q_mean_bounded_subseq",
                            detail: format!("cell {j} has mean {m} > bound {}", decl.bound),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn config(&self) -> &SpecConfig {
        &self.config
    }

    pub fn tail(&self) -> &TailSpec {
        &self.tail
    }

    pub fn num_cells(&self) -> usize {
        self.points.len()
    }

    /// x_k for k = 0..=K (x_0 = 0).
    pub fn x(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.points[k - 1]
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Cell length d_k = x_k − x_{k−1}, k = 1..=K.
    pub fn d(&self, k: usize) -> f64 {
        self.x(k) - self.x(k - 1)
    }

    pub fn coupling(&self, k: usize) -> Coupling {
        self.couplings[k - 1]
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    /// 1/β_k with the conventions β₀⁻¹ = 0 (no interaction at the origin)
    /// and 1/∞ = 0. `None` when x_k is a continuity point.
    pub fn inv_beta(&self, k: usize) -> Option<f64> {
        if k == 0 {
            Some(0.0)
        } else {
            self.coupling(k).inv_beta()
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn q_at(&self, x: f64) -> f64 {
        match self.pieces.binary_search_by(|p| {
            if x < p.from {
                std::cmp::Ordering::Greater
            } else if x >= p.to {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Equal
            }
        }) {
            Ok(i) => self.pieces[i].q(x),
            Err(_) => 0.0,
        }
    }

    /// Pieces of cell k (1-based).
    pub fn cell_pieces(&self, k: usize) -> Result<&[Piece], ModelError> {
        let max = self.num_cells();
        if k == 0 || k > max {
            return Err(ModelError::IndexOutOfRange { index: k, max });
        }
        let (a, b) = self.cell_pieces[k - 1];
        Ok(&self.pieces[a..b])
    }

    /// Exact signed-part integrals of q over cell k.
    pub fn cell_integrals(&self, k: usize) -> Result<CellIntegrals, ModelError> {
        let pieces = self.cell_pieces(k)?;
        let mut neg = 0.0;
        let mut pos = 0.0;
        for p in pieces {
            let (n, q) = p.split_integrals(p.from, p.to);
            neg += n;
            pos += q;
        }
        Ok(CellIntegrals {
            q: pos - neg,
            q_minus: neg,
            q_plus: pos,
            abs_q: pos + neg,
        })
    }

    pub fn extent_stats(&self) -> ExtentStats {
        let k = self.num_cells();
        let mut dmin = f64::INFINITY;
        let mut dmax: f64 = 0.0;
        let mut noninc = true;
        let mut nondec = true;
        let mut prev = None;
        for j in 1..=k {
            let d = self.d(j);
            dmin = dmin.min(d);
            dmax = dmax.max(d);
            if let Some(p) = prev {
                if d > p {
                    noninc = false;
                }
                if d < p {
                    nondec = false;
                }
            }
            prev = Some(d);
        }
        let mut d_star = dmin;
        let mut d_sup = dmax;
        match self.tail.d_limit {
            Some(ExtReal::Finite(l)) => {
                d_star = d_star.min(l);
                d_sup = d_sup.max(l);
            }
            Some(ExtReal::PosInf) => d_sup = f64::INFINITY,
            _ => {}
        }
        if let Some(rec) = &self.tail.recurrent_lengths {
            for &r in rec {
                d_star = d_star.min(r);
                d_sup = d_sup.max(r);
            }
        }
        ExtentStats {
            d_star,
            d_sup,
            d_min_finite: dmin,
            d_max_finite: dmax,
            nonincreasing: noninc,
            nondecreasing: nondec,
        }
    }

    pub fn partition_class(&self) -> PartitionClass {
        self.part_class
    }

    pub fn strengths_class(&self) -> StrengthsClass {
        self.str_class
    }

    pub fn potential_class(&self) -> &PotentialClass {
        &self.pot_class
    }

    /// True when every truncation coupling is nonnegative or Neumann.
    pub fn no_negative_couplings(&self) -> bool {
        self.couplings.iter().all(|c| match c {
            Coupling::Finite(b) => *b > 0.0,
            _ => true,
        })
    }

    /// True when q ≥ 0 on the whole truncation (exact, piecewise check).
    pub fn potential_nonnegative(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.q(p.from) >= 0.0 && p.q(p.to) >= 0.0)
    }
}

fn strengths_class(
    gen: &Option<StrengthsGenerator>,
    couplings: &[Coupling],
) -> StrengthsClass {
    match gen {
        Some(StrengthsGenerator::Linear { slope, intercept }) => StrengthsClass::Linear {
            slope: *slope,
            intercept: *intercept,
        },
        Some(StrengthsGenerator::Power { coeff, exponent }) => StrengthsClass::Power {
            coeff: *coeff,
            exponent: *exponent,
        },
        Some(StrengthsGenerator::Neumann) => StrengthsClass::AllNeumann,
        None => {
            if !couplings.is_empty() && couplings.iter().all(|c| c.is_neumann()) {
                StrengthsClass::AllNeumann
            } else {
                StrengthsClass::Explicit
            }
        }
    }
}

fn normalize_potential(
    config: Option<&PotentialConfig>,
    points: &[f64],
) -> Result<(Vec<Piece>, PotentialClass), ModelError> {
    let x_end = *points.last().unwrap();
    let raw: Vec<Piece> = match config {
        None => vec![Piece { from: 0.0, to: x_end, c0: 0.0, c1: 0.0 }],
        Some(cfg) => {
            let mut pieces: Vec<Piece> = cfg
                .pieces
                .iter()
                .map(|p| Piece { from: p.from, to: p.to, c0: p.c0, c1: p.c1 })
                .collect();
            pieces.sort_by(|a, b| a.from.total_cmp(&b.from));
            if let Some(period) = cfg.repeat {
                if period <= 0.0 {
                    return Err(ModelError::Config("repeat period must be positive".into()));
                }
                check_tiling(&pieces, period)?;
                let mut tiled = Vec::new();
                let mut shift = 0.0;
                'outer: loop {
                    for p in &pieces {
                        let from = p.from + shift;
                        if from >= x_end - GEOM_TOL * x_end.max(1.0) {
                            break 'outer;
                        }
                        let to = (p.to + shift).min(x_end);
                        // periodic extension: same offsets within each period
                        tiled.push(Piece {
                            from,
                            to,
                            c0: p.c0 - p.c1 * shift,
                            c1: p.c1,
                        });
                    }
                    shift += period;
                }
                tiled
            } else {
                check_tiling(&pieces, x_end)?;
                pieces
            }
        }
    };

    let pot_class = classify_potential(config, &raw);

    // Split pieces at partition points so each piece lies in one cell.
    let mut cut = Vec::new();
    let mut idx = 0;
    let tol = GEOM_TOL * x_end.max(1.0);
    for p in raw {
        let mut from = p.from;
        while idx < points.len() && points[idx] <= from + tol {
            idx += 1;
        }
        let mut j = idx;
        while j < points.len() && points[j] < p.to - tol {
            cut.push(Piece { from, to: points[j], c0: p.c0, c1: p.c1 });
            from = points[j];
            j += 1;
        }
        if p.to > from + tol {
            cut.push(Piece { from, to: p.to, c0: p.c0, c1: p.c1 });
        }
    }
    Ok((cut, pot_class))
}

fn classify_potential(config: Option<&PotentialConfig>, pieces: &[Piece]) -> PotentialClass {
    match config {
        None => PotentialClass::Zero,
        Some(cfg) => {
            if let Some(period) = cfg.repeat {
                return PotentialClass::Periodic {
                    period,
                    pattern: cfg
                        .pieces
                        .iter()
                        .map(|p| Piece { from: p.from, to: p.to, c0: p.c0, c1: p.c1 })
                        .collect(),
                };
            }
            let first = pieces[0];
            let uniform = pieces.iter().all(|p| p.c0 == first.c0 && p.c1 == first.c1);
            if uniform {
                if first.c1 == 0.0 {
                    if first.c0 == 0.0 {
                        PotentialClass::Zero
                    } else {
                        PotentialClass::Constant(first.c0)
                    }
                } else {
                    PotentialClass::Affine { c0: first.c0, c1: first.c1 }
                }
            } else {
                PotentialClass::Explicit
            }
        }
    }
}

fn check_tiling(pieces: &[Piece], end: f64) -> Result<(), ModelError> {
    let tol = GEOM_TOL * end.max(1.0);
    let mut cursor = 0.0;
    for p in pieces {
        if p.to <= p.from {
            return Err(ModelError::Config(format!(
                "piece [{}, {}) has nonpositive length",
                p.from, p.to
            )));
        }
        if p.from > cursor + tol {
            return Err(ModelError::PieceGap { at: cursor });
        }
        if p.from < cursor - tol {
            return Err(ModelError::PieceOverlap { at: p.from });
        }
        cursor = p.to;
    }
    if cursor < end - tol {
        return Err(ModelError::PieceGap { at: cursor });
    }
    if cursor > end + tol {
        return Err(ModelError::Config(format!(
            "pieces extend to {cursor}, beyond the declared end {end}"
        )));
    }
    Ok(())
}

fn index_pieces(pieces: &[Piece], points: &[f64]) -> Vec<(usize, usize)> {
    let mut ranges = Vec::with_capacity(points.len());
    let mut start = 0;
    for (k, &x) in points.iter().enumerate() {
        let lo = if k == 0 { 0.0 } else { points[k - 1] };
        let tol = GEOM_TOL * x.max(1.0);
        let mut end = start;
        while end < pieces.len() && pieces[end].to <= x + tol {
            debug_assert!(pieces[end].from >= lo - tol);
            end += 1;
        }
        ranges.push((start, end));
        start = end;
    }
    ranges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::builders;

    #[test]
    fn build_valid_spec() {
        let spec = builders::explicit(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0], None).unwrap();
        assert_eq!(spec.num_cells(), 3);
        for k in 1..=3 {
            assert_eq!(spec.d(k), 1.0);
        }
        // telescoping sum
        let total: f64 = (1..=3).map(|k| spec.d(k)).sum();
        assert_eq!(total, spec.x(3));
    }

    #[test]
    fn rejects_non_monotone() {
        let err = builders::explicit(&[1.0, 0.5], &[1.0, 1.0], None).unwrap_err();
        assert!(matches!(err, ModelError::NonMonotonePartition { .. }));
    }

    #[test]
    fn rejects_length_mismatch() {
        let err = builders::explicit(&[1.0, 2.0], &[1.0, 1.0, 1.0], None).unwrap_err();
        assert!(matches!(err, ModelError::LengthMismatch { .. }));
    }

    #[test]
    fn cell_integrals_constant() {
        // q ≡ −2 on a cell of length 3
        let spec = builders::explicit_with_potential(
            &[3.0],
            &[1.0],
            &[(0.0, 3.0, -2.0, 0.0)],
        )
        .unwrap();
        let ci = spec.cell_integrals(1).unwrap();
        assert_eq!(ci.q, -6.0);
        assert_eq!(ci.q_minus, 6.0);
        assert_eq!(ci.q_plus, 0.0);
        assert_eq!(ci.abs_q, 6.0);
    }

    #[test]
    fn cell_integrals_ramp() {
        // q(x) = x on [0,1]
        let spec =
            builders::explicit_with_potential(&[1.0], &[1.0], &[(0.0, 1.0, 0.0, 1.0)]).unwrap();
        let ci = spec.cell_integrals(1).unwrap();
        assert!((ci.q - 0.5).abs() < 1e-15);
        assert_eq!(ci.q_minus, 0.0);
        assert!((ci.q_plus - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cell_integrals_zero_crossing() {
        // q(x) = x − 1/2 on [0,1]: crossing at 1/2
        let spec =
            builders::explicit_with_potential(&[1.0], &[1.0], &[(0.0, 1.0, -0.5, 1.0)]).unwrap();
        let ci = spec.cell_integrals(1).unwrap();
        assert!(ci.q.abs() < 1e-16);
        assert!((ci.q_minus - 0.125).abs() < 1e-15);
        assert!((ci.q_plus - 0.125).abs() < 1e-15);
        assert!((ci.abs_q - 0.25).abs() < 1e-15);
        // identities hold bitwise by construction
        assert_eq!(ci.q, ci.q_plus - ci.q_minus);
        assert_eq!(ci.abs_q, ci.q_plus + ci.q_minus);
    }

    #[test]
    fn extent_stats_basic() {
        let spec = builders::explicit(&[1.0, 2.5, 4.0], &[1.0, 1.0, 1.0], None).unwrap();
        let st = spec.extent_stats();
        assert_eq!(st.d_star, 1.0);
        assert_eq!(st.d_sup, 1.5);
    }

    #[test]
    fn extent_stats_with_declared_limit() {
        // d_k = 1/sqrt(k), declared limit 0
        let cfg = builders::sum_power_config(-0.5, 100, 1.0, 0.0);
        let spec = OperatorSpec::build(cfg).unwrap();
        let st = spec.extent_stats();
        assert_eq!(st.d_star, 0.0);
        assert_eq!(st.d_sup, 1.0);
        assert!(st.nonincreasing);
    }

    #[test]
    fn beta_zero_normalized() {
        let spec = builders::explicit(&[1.0, 2.0], &[0.0, 5.0], None).unwrap();
        assert_eq!(spec.coupling(1), Coupling::NoInteraction);
        assert_eq!(spec.coupling(2), Coupling::Finite(5.0));
        assert_eq!(spec.inv_beta(0), Some(0.0));
        assert_eq!(spec.inv_beta(1), None);
    }

    #[test]
    fn declared_d_limit_mismatch_rejected() {
        let mut cfg = builders::sum_power_config(-0.5, 100, 1.0, 0.0);
        if let Some(t) = cfg.tail.as_mut() {
            t.d_limit = Some(ExtReal::Finite(3.0));
            t.d_tol = Some(0.01);
        }
        assert!(matches!(
            OperatorSpec::build(cfg),
            Err(ModelError::DeclarationMismatch { .. })
        ));
    }
}
