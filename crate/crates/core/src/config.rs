//! JSON documents describing a Bethe system or a polynomial.
//!
//! ```json
//! {"system": {"type": "B", "kind": "trigonometric", "alpha": 0, "epsilon": 0,
//!             "a_params": [0.3, -0.2, {"magnitude": "inf", "sign": 1}],
//!             "b_params": [0.1], "mu": [3, 2, 1]}}
//! {"polynomial": {"family": "askey-wilson", "n": 5,
//!                 "params": [0.3, -0.2, 0.15, 0.1, 0.1]}}
//! ```
//!
//! A bare number in a parameter list is the value `a` itself for rational
//! and hyperbolic systems, and the family value `p = e^{-a}` in `(-1, 1)`
//! for trigonometric systems. Emitted documents always use the object form
//! `{"magnitude", "sign", "pair_offset"}`, with `"inf"` for the free
//! trigonometric limit.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::bethe_system::{BetheSystem, SystemType, WeightVector};
use crate::error::{Error, Result};
use crate::polyzeros::PolynomialSpec;
use crate::potentials::{CoupledParameter, PotentialKind};

/// `f64` that may be infinite; infinities travel as `"inf"` / `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtF64(pub f64);

impl Serialize for ExtF64 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtF64 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtF64(v)),
            Raw::Text(s) => match s.as_str() {
                "inf" | "+inf" => Ok(ExtF64(f64::INFINITY)),
                "-inf" => Ok(ExtF64(f64::NEG_INFINITY)),
                other => Err(de::Error::custom(format!("expected a number or \"inf\", got \"{other}\""))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamObject {
    pub magnitude: ExtF64,
    #[serde(default = "default_sign")]
    pub sign: i8,
    #[serde(default)]
    pub pair_offset: f64,
}

fn default_sign() -> i8 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamEntry {
    Value(f64),
    Object(ParamObject),
}

impl ParamEntry {
    pub fn to_parameter(&self, kind: PotentialKind) -> Result<CoupledParameter> {
        match (self, kind) {
            (ParamEntry::Value(p), PotentialKind::Trigonometric) => CoupledParameter::from_trig_family_value(*p),
            (ParamEntry::Value(a), _) => CoupledParameter::new(kind, *a, 1, 0.0),
            (ParamEntry::Object(o), _) => CoupledParameter::new(kind, o.magnitude.0, o.sign, o.pair_offset),
        }
    }

    pub fn from_parameter(p: &CoupledParameter) -> Self {
        ParamEntry::Object(ParamObject {
            magnitude: ExtF64(p.magnitude),
            sign: p.trig_sign,
            pair_offset: p.pair_offset,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(rename = "type")]
    pub stype: SystemType,
    pub kind: PotentialKind,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<u8>,
    #[serde(default)]
    pub a_params: Vec<ParamEntry>,
    #[serde(default)]
    pub b_params: Vec<ParamEntry>,
    pub mu: Vec<i64>,
}

impl SystemConfig {
    pub fn to_system(&self) -> Result<BetheSystem> {
        let conv = |v: &[ParamEntry]| v.iter().map(|e| e.to_parameter(self.kind)).collect::<Result<Vec<_>>>();
        let sys = BetheSystem {
            stype: self.stype,
            kind: self.kind,
            n: self.mu.len(),
            alpha: self.alpha,
            beta: self.beta,
            epsilon: self.epsilon,
            a_params: conv(&self.a_params)?,
            b_params: conv(&self.b_params)?,
            mu: WeightVector(self.mu.clone()),
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn from_system(sys: &BetheSystem) -> Self {
        SystemConfig {
            stype: sys.stype,
            kind: sys.kind,
            alpha: sys.alpha,
            beta: sys.beta,
            epsilon: sys.epsilon,
            a_params: sys.a_params.iter().map(ParamEntry::from_parameter).collect(),
            b_params: sys.b_params.iter().map(ParamEntry::from_parameter).collect(),
            mu: sys.mu.0.clone(),
        }
    }
}

/// Top-level document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Config {
    System(SystemConfig),
    Polynomial(PolynomialSpec),
}

/// A parsed and validated document.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    System(BetheSystem),
    Polynomial(PolynomialSpec),
}

impl Problem {
    /// Normalized document for this problem.
    pub fn to_config(&self) -> Config {
        match self {
            Problem::System(s) => Config::System(SystemConfig::from_system(s)),
            Problem::Polynomial(p) => Config::Polynomial(p.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_config()).expect("config serializes")
    }
}

/// Parses a configuration document. A JSON run report is accepted too; its
/// `input` echo is used.
pub fn parse_config(text: &str) -> Result<Problem> {
    let bad = |e: serde_json::Error| Error::Validation(format!("invalid configuration: {e}"));
    let mut value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
    if value.get("tool").is_some() {
        if let Some(input) = value.get_mut("input") {
            value = input.take();
        }
    }
    let cfg: Config = serde_json::from_value(value).map_err(bad)?;
    match cfg {
        Config::System(s) => Ok(Problem::System(s.to_system()?)),
        Config::Polynomial(p) => {
            p.validate()?;
            Ok(Problem::Polynomial(p))
        }
    }
}
