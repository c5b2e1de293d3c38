//! Config schema: the JSON (or TOML, same keys) description of a spec.
//!
//! Partitions and strengths are given either as explicit lists or as
//! generators; the potential is a list of affine pieces with an optional
//! periodic repeat; the tail block carries declarations about the infinite
//! continuation that finite data cannot decide. "inf" is the literal string
//! for β_k = +∞ and for infinite declared limits.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::model::{Coupling, ExtReal, ModelError};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpecConfig {
    pub partition: PartitionConfig,
    pub strengths: StrengthsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailSpec>,
}

impl SpecConfig {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self, ModelError> {
        toml::from_str(text).map_err(|e| ModelError::Config(e.to_string()))
    }

    /// Canonical JSON form: fixed field order, shortest round-trip floats.
    /// Two configs with identical canonical JSON build identical specs.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serialization cannot fail")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Default)]
pub struct PartitionConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<PartitionGenerator>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionGenerator {
    /// x_k = start + (k−1)·step.
    Arithmetic { start: f64, step: f64, count: usize },
    /// d_k = k^exponent, x_k = Σ_{j≤k} j^exponent.
    SumPower { exponent: f64, count: usize },
}

impl PartitionConfig {
    pub fn expand(&self) -> Result<Vec<f64>, ModelError> {
        match (&self.points, &self.generator) {
            (Some(p), None) => Ok(p.clone()),
            (None, Some(PartitionGenerator::Arithmetic { start, step, count })) => {
                if *count == 0 {
                    return Err(ModelError::Config("generator count must be positive".into()));
                }
                Ok((0..*count).map(|i| start + step * i as f64).collect())
            }
            (None, Some(PartitionGenerator::SumPower { exponent, count })) => {
                if *count == 0 {
                    return Err(ModelError::Config("generator count must be positive".into()));
                }
                let mut x = 0.0;
                Ok((1..=*count)
                    .map(|k| {
                        x += (k as f64).powf(*exponent);
                        x
                    })
                    .collect())
            }
            _ => Err(ModelError::Config(
                "partition needs exactly one of `points` or `generator`".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Default)]
pub struct StrengthsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<BetaValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<StrengthsGenerator>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrengthsGenerator {
    /// β_k = slope·k + intercept.
    Linear {
        slope: f64,
        #[serde(default)]
        intercept: f64,
    },
    /// β_k = coeff·k^exponent.
    Power { coeff: f64, exponent: f64 },
    /// β_k = +∞ for all k.
    Neumann,
}

impl StrengthsConfig {
    pub fn expand(&self, count: usize) -> Result<Vec<Coupling>, ModelError> {
        match (&self.values, &self.generator) {
            (Some(v), None) => Ok(v.iter().map(|b| b.to_coupling()).collect()),
            (None, Some(gen)) => Ok((1..=count)
                .map(|k| {
                    let beta = match gen {
                        StrengthsGenerator::Linear { slope, intercept } => {
                            slope * k as f64 + intercept
                        }
                        StrengthsGenerator::Power { coeff, exponent } => {
                            coeff * (k as f64).powf(*exponent)
                        }
                        StrengthsGenerator::Neumann => f64::INFINITY,
                    };
                    BetaValue::Finite(beta).to_coupling()
                })
                .collect()),
            _ => Err(ModelError::Config(
                "strengths needs exactly one of `values` or `generator`".into(),
            )),
        }
    }
}

/// One strength entry: a finite real or the literal string "inf".
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BetaValue {
    Finite(f64),
    Infinite,
}

impl BetaValue {
    pub fn to_coupling(self) -> Coupling {
        match self {
            BetaValue::Infinite => Coupling::Neumann,
            BetaValue::Finite(b) if b == 0.0 => Coupling::NoInteraction,
            BetaValue::Finite(b) if b.is_infinite() && b > 0.0 => Coupling::Neumann,
            BetaValue::Finite(b) => Coupling::Finite(b),
        }
    }

    pub fn from_coupling(c: Coupling) -> Self {
        match c {
            Coupling::Neumann => BetaValue::Infinite,
            Coupling::NoInteraction => BetaValue::Finite(0.0),
            Coupling::Finite(b) => BetaValue::Finite(b),
        }
    }
}

impl Serialize for BetaValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BetaValue::Finite(v) => s.serialize_f64(*v),
            BetaValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BetaValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> de::Visitor<'de> for V {
            type Value = BetaValue;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(f, "a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<BetaValue, E> {
                Ok(BetaValue::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<BetaValue, E> {
                Ok(BetaValue::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<BetaValue, E> {
                Ok(BetaValue::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<BetaValue, E> {
                match v {
                    "inf" | "+inf" => Ok(BetaValue::Infinite),
                    other => Err(E::custom(format!("unknown strength `{other}`"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PotentialConfig {
    pub pieces: Vec<PieceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeat: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct PieceConfig {
    pub from: f64,
    pub to: f64,
    pub c0: f64,
    pub c1: f64,
}

/// Declarations about the infinite tail. Limits that finite data cannot
/// decide become verdicts only through these fields (or through recognized
/// generators); the truncation contributes supporting evidence.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Default)]
pub struct TailSpec {
    /// Declared lim d_k.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_limit: Option<ExtReal>,
    /// Tolerance for validating `d_limit` against the last decile of cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_tol: Option<f64>,
    /// Cell lengths that occur infinitely often.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recurrent_lengths: Option<Vec<f64>>,
    /// Declared lim |β_k|⁻¹ / min{d_k, d_{k+1}}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_coupling_limit: Option<ExtReal>,
    /// Declared lim (β_k⁻¹)⁻ / min{d_k, d_{k+1}}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_neg_limit: Option<ExtReal>,
    /// Declared lim (1/d_k)∫|q|.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_mean_limit: Option<ExtReal>,
    /// Declared lim (1/d_k)∫q (signed).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_mean_signed_limit: Option<ExtReal>,
    /// Declared sup bound for C₀ = sup (1/d_k)∫q₋ ("inf" declares divergence).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_c0: Option<ExtReal>,
    /// Declared sup bound for C₁ = sup (β_k⁻¹)⁻/min{d_k,d_{k+1}}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_c1: Option<ExtReal>,
    /// Declared residue class of cells whose means (1/d_k)∫q stay ≤ bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_mean_bounded_subseq: Option<SubseqDecl>,
    /// Declared per-ε limits of the window integrals ∫_x^{x+ε} q.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molchanov: Option<Vec<MolchanovDecl>>,
    /// Declared lim of (1/d_k)(∫q + β_{k−1}⁻¹ + β_k⁻¹).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combined_limit: Option<ExtReal>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SubseqDecl {
    pub modulus: usize,
    pub residue: usize,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct MolchanovDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_max: Option<f64>,
    pub limit: ExtReal,
}

impl MolchanovDecl {
    pub fn covers(&self, eps: f64) -> bool {
        self.eps_min.map_or(true, |lo| eps >= lo) && self.eps_max.map_or(true, |hi| eps <= hi)
    }
}

/// Convenience constructors used across tests and scenarios.
pub mod builders {
    use super::*;
    use crate::model::OperatorSpec;

    pub fn config_explicit(
        points: &[f64],
        betas: &[f64],
        potential: Option<PotentialConfig>,
    ) -> SpecConfig {
        SpecConfig {
            partition: PartitionConfig { points: Some(points.to_vec()), generator: None },
            strengths: StrengthsConfig {
                values: Some(betas.iter().map(|&b| BetaValue::Finite(b)).collect()),
                generator: None,
            },
            potential,
            tail: None,
        }
    }

    pub fn explicit(
        points: &[f64],
        betas: &[f64],
        potential: Option<PotentialConfig>,
    ) -> Result<OperatorSpec, ModelError> {
        OperatorSpec::build(config_explicit(points, betas, potential))
    }

    /// Explicit spec with raw (from, to, c0, c1) pieces.
    pub fn explicit_with_potential(
        points: &[f64],
        betas: &[f64],
        pieces: &[(f64, f64, f64, f64)],
    ) -> Result<OperatorSpec, ModelError> {
        let potential = PotentialConfig {
            pieces: pieces
                .iter()
                .map(|&(from, to, c0, c1)| PieceConfig { from, to, c0, c1 })
                .collect(),
            repeat: None,
        };
        explicit(points, betas, Some(potential))
    }

    /// All-Neumann spec (β ≡ +∞).
    pub fn neumann(points: &[f64], potential: Option<PotentialConfig>) -> SpecConfig {
        SpecConfig {
            partition: PartitionConfig { points: Some(points.to_vec()), generator: None },
            strengths: StrengthsConfig {
                values: None,
                generator: Some(StrengthsGenerator::Neumann),
            },
            potential,
            tail: None,
        }
    }

    /// d_k = k^exponent partition with linear strengths, d_limit declared.
    pub fn sum_power_config(
        exponent: f64,
        count: usize,
        beta_slope: f64,
        beta_intercept: f64,
    ) -> SpecConfig {
        let d_last = (count as f64).powf(exponent);
        SpecConfig {
            partition: PartitionConfig {
                points: None,
                generator: Some(PartitionGenerator::SumPower { exponent, count }),
            },
            strengths: StrengthsConfig {
                values: None,
                generator: Some(StrengthsGenerator::Linear {
                    slope: beta_slope,
                    intercept: beta_intercept,
                }),
            },
            potential: None,
            tail: Some(TailSpec {
                d_limit: Some(ExtReal::Finite(if exponent < 0.0 {
                    0.0
                } else if exponent == 0.0 {
                    1.0
                } else {
                    d_last
                })),
                d_tol: Some(if exponent < 0.0 { 1.5 * d_last } else { 1e-9 }),
                ..TailSpec::default()
            }),
        }
    }

    /// Kronig–Penney config: X = aℕ (count cells), q ≡ c, β_k = slope·k.
    pub fn kronig_penney(a: f64, c: f64, slope: f64, count: usize) -> SpecConfig {
        SpecConfig {
            partition: PartitionConfig {
                points: None,
                generator: Some(PartitionGenerator::Arithmetic { start: a, step: a, count }),
            },
            strengths: StrengthsConfig {
                values: None,
                generator: Some(StrengthsGenerator::Linear { slope, intercept: 0.0 }),
            },
            potential: Some(PotentialConfig {
                pieces: vec![PieceConfig { from: 0.0, to: a, c0: c, c1: 0.0 }],
                repeat: Some(a),
            }),
            tail: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OperatorSpec;

    #[test]
    fn json_round_trip_is_exact() {
        let cfg = builders::kronig_penney(1.0, 0.5, 1.0, 10);
        let spec = OperatorSpec::build(cfg.clone()).unwrap();
        let json = cfg.canonical_json();
        let cfg2 = SpecConfig::from_json(&json).unwrap();
        let spec2 = OperatorSpec::build(cfg2).unwrap();
        for k in 1..=10 {
            assert_eq!(spec.d(k), spec2.d(k));
            let a = spec.cell_integrals(k).unwrap();
            let b = spec2.cell_integrals(k).unwrap();
            assert_eq!(a.q, b.q);
            assert_eq!(a.abs_q, b.abs_q);
        }
        assert_eq!(json, spec2.config().canonical_json());
    }

    #[test]
    fn toml_accepts_same_keys() {
        let text = r#"
            [partition]
            points = [1.0, 2.0]
            [strengths]
            values = [1.0, "inf"]
            [[potential.pieces]]
            from = 0.0
            to = 2.0
            c0 = -1.0
            c1 = 0.0
        "#;
        let cfg = SpecConfig::from_toml(text).unwrap();
        let spec = OperatorSpec::build(cfg).unwrap();
        assert_eq!(spec.coupling(2), crate::model::Coupling::Neumann);
        assert_eq!(spec.cell_integrals(1).unwrap().q, -1.0);
    }

    #[test]
    fn inf_literal_parses() {
        let json = r#"{"partition":{"points":[1.0]},"strengths":{"values":["inf"]}}"#;
        let cfg = SpecConfig::from_json(json).unwrap();
        let spec = OperatorSpec::build(cfg).unwrap();
        assert!(spec.coupling(1).is_neumann());
    }

    #[test]
    fn periodic_potential_expands_with_global_law() {
        // pattern q(x) = 2x on [0, 1/2), 0 on [1/2, 1), repeated: on [n, n+1/2)
        // the periodic extension takes the value 2(x − n).
        let cfg = SpecConfig {
            partition: PartitionConfig {
                points: Some(vec![1.0, 2.0, 3.0]),
                generator: None,
            },
            strengths: StrengthsConfig {
                values: Some(vec![BetaValue::Finite(1.0); 3]),
                generator: None,
            },
            potential: Some(PotentialConfig {
                pieces: vec![
                    PieceConfig { from: 0.0, to: 0.5, c0: 0.0, c1: 2.0 },
                    PieceConfig { from: 0.5, to: 1.0, c0: 0.0, c1: 0.0 },
                ],
                repeat: Some(1.0),
            }),
            tail: None,
        };
        let spec = OperatorSpec::build(cfg).unwrap();
        assert!((spec.q_at(2.25) - 0.5).abs() < 1e-12);
        assert_eq!(spec.q_at(2.75), 0.0);
    }
}
