//! JSON file formats for polytopes, effects, measurements and degree results.
//! Effects and points are written in ambient coordinates.

use serde::{Deserialize, Serialize};

use crate::compat::{DegreeResult, IncompatibilityCertificate};
use crate::effects::{AffineFunction, Effect, FiniteMeasurement, TwoOutcomeMeasurement};
use crate::error::{Error, Result};
use crate::geometry::Polytope;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub vertices: Vec<Vec<f64>>,
}

impl PolytopeJson {
    pub fn from_polytope(k: &Polytope) -> Self {
        Self {
            vertices: k.vertices().iter().map(|v| v.0.clone()).collect(),
        }
    }

    pub fn build(&self, tol: f64) -> Result<Polytope> {
        Polytope::from_coords(&self.vertices, tol)
    }
}

/// `{"linear": [...], "offset": b}` or `{"vertex_values": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum EffectJson {
    Affine { linear: Vec<f64>, offset: f64 },
    VertexValues { vertex_values: Vec<f64> },
}

impl EffectJson {
    pub fn from_function(k: &Polytope, f: &AffineFunction) -> Self {
        let (linear, offset) = f.to_ambient(k);
        EffectJson::Affine { linear, offset }
    }

    pub fn to_function(&self, k: &Polytope) -> Result<AffineFunction> {
        match self {
            EffectJson::Affine { linear, offset } => {
                AffineFunction::from_ambient(k, linear, *offset)
            }
            EffectJson::VertexValues { vertex_values } => {
                AffineFunction::from_vertex_values(k, vertex_values)
            }
        }
    }

    pub fn to_effect(&self, k: &Polytope) -> Result<Effect> {
        Effect::new(self.to_function(k)?, k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurementJson {
    TwoOutcome {
        effect: EffectJson,
    },
    Finite {
        outcomes: Vec<String>,
        effects: Vec<EffectJson>,
    },
}

impl MeasurementJson {
    pub fn two_outcome(&self, k: &Polytope) -> Result<TwoOutcomeMeasurement> {
        match self {
            MeasurementJson::TwoOutcome { effect } => {
                Ok(TwoOutcomeMeasurement::new(effect.to_effect(k)?))
            }
            MeasurementJson::Finite { .. } => Err(Error::Parse(
                "expected a two-outcome measurement {\"effect\": ...}".into(),
            )),
        }
    }

    pub fn finite(&self, k: &Polytope) -> Result<FiniteMeasurement> {
        match self {
            MeasurementJson::TwoOutcome { .. } => Ok(self.two_outcome(k)?.to_finite()),
            MeasurementJson::Finite { outcomes, effects } => {
                let effects = effects
                    .iter()
                    .map(|e| e.to_effect(k))
                    .collect::<Result<Vec<_>>>()?;
                FiniteMeasurement::new(outcomes.clone(), effects, k)
            }
        }
    }

    pub fn from_two_outcome(k: &Polytope, m: &TwoOutcomeMeasurement) -> Self {
        MeasurementJson::TwoOutcome {
            effect: EffectJson::from_function(k, m.f()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub a: [f64; 3],
    pub z: [Vec<f64>; 3],
    pub violation: f64,
}

impl From<&IncompatibilityCertificate> for CertificateJson {
    fn from(c: &IncompatibilityCertificate) -> Self {
        Self {
            a: c.a,
            z: c.z.clone().map(|p| p.0),
            violation: c.violation,
        }
    }
}

impl From<&CertificateJson> for IncompatibilityCertificate {
    fn from(c: &CertificateJson) -> Self {
        Self {
            a: c.a,
            z: c.z.clone().map(crate::geometry::Point),
            violation: c.violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeResultJson {
    pub lambda: f64,
    pub mu: f64,
    pub p: EffectJson,
    pub certificate: Option<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coin_biases: Option<[f64; 2]>,
}

impl DegreeResultJson {
    /// `coin_biases` is emitted only when they were optimized.
    pub fn new(k: &Polytope, r: &DegreeResult, with_biases: bool) -> Self {
        Self {
            lambda: r.lambda,
            mu: r.mu,
            p: EffectJson::from_function(k, &r.p),
            certificate: r.certificate.as_ref().map(CertificateJson::from),
            coin_biases: with_biases.then_some([r.coin_biases.0, r.coin_biases.1]),
        }
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
