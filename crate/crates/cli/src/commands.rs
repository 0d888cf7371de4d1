//! Subcommand implementations. Each returns its output and an exit code.

use std::path::Path;

use anyhow::{bail, Context, Result};
use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use gptcompat::compat::{
    construct_incompatible_pair, degree, degree_free_coin, half_coin_joint, is_compatible,
    simplex_product_joint, verify_certificate, DegreeResult, JointMeasurement,
};
use gptcompat::io::{
    parse, CertificateJson, DegreeResultJson, EffectJson, MeasurementJson, PolytopeJson,
};
use gptcompat::{shapes, Error, Partner, Polytope, TwoOutcomeMeasurement};

use crate::format::sig9;
use crate::shape::{Family, ShapeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCOMPATIBLE: i32 = 2;
pub const EXIT_SIMPLEX: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum JointMethod {
    /// Product joint on a simplex, otherwise the interpolating function.
    Auto,
    /// Interpolating function found by LP.
    P,
    /// Product joint (simplices only).
    Product,
    /// Joint of the measurements mixed with coins at weight ½.
    HalfCoin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PairKind {
    /// `f₁ = (1 + x)/2`, `f₂ = (1 + y)/2`.
    Axes,
    /// Effects read from `--m1` and `--m2` (ambient affine form).
    Files,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tol: f64,
    pub gap_tol: f64,
    pub output: Option<OutputFormat>,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if [self.tol, self.gap_tol]
            .iter()
            .any(|t| t.is_nan() || *t <= 0.0)
        {
            bail!("tolerances must be positive");
        }
        Ok(())
    }

    fn build(&self, shape: &ShapeSpec) -> Result<Polytope> {
        shape.build(self.tol, self.seed)
    }

    fn json_only(&self, command: &str) -> Result<()> {
        if self.output == Some(OutputFormat::Csv) {
            bail!("{command} only supports JSON output");
        }
        Ok(())
    }

    fn check_gap(&self, r: &DegreeResult) -> Result<()> {
        if r.duality_gap > self.gap_tol {
            bail!(
                "duality gap {:e} exceeds --gap-tol {:e}",
                r.duality_gap,
                self.gap_tol
            );
        }
        Ok(())
    }
}

pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: EXIT_OK,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// A measurement file: `{"effect": ...}` or a bare effect.
#[derive(Deserialize)]
#[serde(untagged)]
enum MeasurementFile {
    Measurement(MeasurementJson),
    Effect(EffectJson),
}

fn read_measurement(path: &Path, k: &Polytope) -> Result<TwoOutcomeMeasurement> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file: MeasurementFile =
        parse(&text).with_context(|| format!("cannot parse {}", path.display()))?;
    let m = match file {
        MeasurementFile::Measurement(m) => m.two_outcome(k),
        MeasurementFile::Effect(e) => e.to_effect(k).map(TwoOutcomeMeasurement::new),
    };
    m.with_context(|| format!("invalid measurement in {}", path.display()))
}

#[derive(Serialize)]
struct VertexReport {
    vertex: usize,
    containing: usize,
    disjoint: usize,
}

#[derive(Serialize)]
struct AnalyzeReport {
    shape: String,
    vertices: usize,
    ambient_dim: usize,
    intrinsic_dim: usize,
    facets: usize,
    is_simplex: bool,
    per_vertex: Vec<VertexReport>,
}

pub fn analyze(cfg: &RunConfig, shape: &ShapeSpec, dump: Option<&Path>) -> Result<Output> {
    cfg.json_only("analyze")?;
    let k = cfg.build(shape)?;
    let (facets, per_vertex) = if k.intrinsic_dim() == 0 {
        (
            0,
            vec![VertexReport {
                vertex: 0,
                containing: 0,
                disjoint: 0,
            }],
        )
    } else {
        let per_vertex = (0..k.num_vertices())
            .map(|v| {
                let (on, off) = k.facets_at_vertex(v)?;
                Ok(VertexReport {
                    vertex: v,
                    containing: on.len(),
                    disjoint: off.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        (k.facets()?.len(), per_vertex)
    };
    if let Some(path) = dump {
        std::fs::write(path, to_json(&PolytopeJson::from_polytope(&k))?)
            .with_context(|| format!("cannot write {}", path.display()))?;
        info!("wrote {} vertices to {}", k.num_vertices(), path.display());
    }
    let report = AnalyzeReport {
        shape: shape.to_string(),
        vertices: k.num_vertices(),
        ambient_dim: k.ambient_dim(),
        intrinsic_dim: k.intrinsic_dim(),
        facets,
        is_simplex: k.is_simplex(),
        per_vertex,
    };
    Ok(Output::ok(to_json(&report)?))
}

fn run_degree(
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    k: &Polytope,
    free_coin: bool,
) -> Result<DegreeResult> {
    Ok(if free_coin {
        degree_free_coin(m1, m2, k)?
    } else {
        degree(m1, m2, k)?
    })
}

fn violation(r: &DegreeResult) -> f64 {
    r.certificate.as_ref().map_or(0.0, |c| c.violation)
}

pub fn degree_cmd(
    cfg: &RunConfig,
    shape: &ShapeSpec,
    m1: &Path,
    m2: &Path,
    free_coin: bool,
) -> Result<Output> {
    let k = cfg.build(shape)?;
    let (m1, m2) = (read_measurement(m1, &k)?, read_measurement(m2, &k)?);
    let r = run_degree(&m1, &m2, &k, free_coin)?;
    cfg.check_gap(&r)?;
    let text = match cfg.output.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json(&DegreeResultJson::new(&k, &r, free_coin))?,
        OutputFormat::Csv => format!(
            "lambda,mu,violation\n{},{},{}\n",
            sig9(r.lambda),
            sig9(r.mu),
            sig9(violation(&r))
        ),
    };
    let code = if r.lambda >= 1.0 - cfg.tol {
        EXIT_OK
    } else {
        EXIT_INCOMPATIBLE
    };
    Ok(Output { text, code })
}

pub fn witness(cfg: &RunConfig, shape: &ShapeSpec) -> Result<Output> {
    cfg.json_only("witness")?;
    let k = cfg.build(shape)?;
    let pair = match construct_incompatible_pair(&k) {
        Ok(p) => p,
        Err(Error::SimplexInput) => {
            return Ok(Output {
                text: format!(
                    "{shape} is a simplex: every pair of measurements on it is compatible\n"
                ),
                code: EXIT_SIMPLEX,
            })
        }
        Err(e) => return Err(e.into()),
    };
    cfg.check_gap(&pair.degree)?;
    let cert = pair
        .degree
        .certificate
        .as_ref()
        .context("witness pair carries no certificate")?;
    let verified = verify_certificate(cert, &pair.first, &pair.second, &k)?;
    let partner = match pair.partner {
        Partner::Vertex(v) => json!({ "vertex": v }),
        Partner::Facet(f) => json!({ "facet": f }),
    };
    let report = json!({
        "shape": shape.to_string(),
        "facet": pair.facet,
        "partner": partner,
        "searched": pair.searched,
        "m1": MeasurementJson::from_two_outcome(&k, &pair.first),
        "m2": MeasurementJson::from_two_outcome(&k, &pair.second),
        "degree": DegreeResultJson::new(&k, &pair.degree, false),
        "certificate": CertificateJson::from(cert),
        "verified_violation": verified,
    });
    Ok(Output::ok(to_json(&report)?))
}

struct SweepRow {
    param: u64,
    lambda: f64,
    mu: f64,
    violation: f64,
}

pub struct SweepArgs<'a> {
    pub family: &'a Family,
    pub pair: PairKind,
    pub m1: Option<&'a Path>,
    pub m2: Option<&'a Path>,
    pub free_coin: bool,
}

pub fn sweep(cfg: &RunConfig, args: &SweepArgs) -> Result<Output> {
    let members = args.family.members();
    let files = match args.pair {
        PairKind::Axes => None,
        PairKind::Files => {
            let read = |p: Option<&Path>| -> Result<MeasurementFile> {
                let p = p.context("--pair files needs --m1 and --m2")?;
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read {}", p.display()))?;
                parse(&text).with_context(|| format!("cannot parse {}", p.display()))
            };
            Some((read(args.m1)?, read(args.m2)?))
        }
    };
    let rows = members
        .par_iter()
        .map(|(param, spec)| {
            let k = cfg.build(spec)?;
            let (m1, m2) = match &files {
                None => shapes::axes_pair(&k)?,
                Some((a, b)) => (file_measurement(a, &k)?, file_measurement(b, &k)?),
            };
            let r = run_degree(&m1, &m2, &k, args.free_coin).with_context(|| format!("{spec}"))?;
            if r.duality_gap > cfg.gap_tol {
                warn!("{spec}: duality gap {:e}", r.duality_gap);
            }
            Ok(SweepRow {
                param: *param,
                lambda: r.lambda,
                mu: r.mu,
                violation: violation(&r),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match cfg.output.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let mut out = String::from("param,lambda,mu,violation\n");
            for r in &rows {
                out.push_str(&format!("{},{},{},{}\n", r.param, sig9(r.lambda), sig9(r.mu), sig9(r.violation)));
            }
            out
        }
        OutputFormat::Json => to_json(
            &rows
                .iter()
                .map(|r| json!({ "param": r.param, "lambda": r.lambda, "mu": r.mu, "violation": r.violation }))
                .collect::<Vec<_>>(),
        )?,
    };
    Ok(Output::ok(text))
}

fn file_measurement(file: &MeasurementFile, k: &Polytope) -> Result<TwoOutcomeMeasurement> {
    Ok(match file {
        MeasurementFile::Measurement(m) => m.two_outcome(k)?,
        MeasurementFile::Effect(e) => TwoOutcomeMeasurement::new(e.to_effect(k)?),
    })
}

pub struct JointArgs<'a> {
    pub shape: &'a ShapeSpec,
    pub m1: &'a Path,
    pub m2: &'a Path,
    pub method: JointMethod,
    pub t1: f64,
    pub t2: f64,
}

fn joint_json(method: &str, k: &Polytope, joint: &JointMeasurement) -> serde_json::Value {
    let labels = ["1,1", "1,2", "2,1", "2,2"];
    let effects: Vec<_> = joint
        .effects()
        .iter()
        .map(|e| EffectJson::from_function(k, e.function()))
        .collect();
    let (a, b) = joint.marginals();
    json!({
        "method": method,
        "outcomes": labels,
        "effects": effects,
        "marginals": [MeasurementJson::from_two_outcome(k, &a), MeasurementJson::from_two_outcome(k, &b)],
    })
}

pub fn joint(cfg: &RunConfig, args: &JointArgs) -> Result<Output> {
    cfg.json_only("joint")?;
    let k = cfg.build(args.shape)?;
    let (m1, m2) = (
        read_measurement(args.m1, &k)?,
        read_measurement(args.m2, &k)?,
    );
    let method = match args.method {
        JointMethod::Auto if k.is_simplex() => JointMethod::Product,
        JointMethod::Auto => JointMethod::P,
        m => m,
    };
    let value = match method {
        JointMethod::Product => {
            let joint = simplex_product_joint(&m1.to_finite(), &m2.to_finite(), &k)?;
            let effects: Vec<_> = joint
                .to_measurement()
                .effects()
                .iter()
                .map(|e| EffectJson::from_function(&k, e.function()))
                .collect();
            json!({
                "method": "product",
                "outcomes": joint.to_measurement().outcomes(),
                "effects": effects,
            })
        }
        JointMethod::HalfCoin => joint_json(
            "half-coin",
            &k,
            &half_coin_joint(&m1, &m2, args.t1, args.t2, &k)?,
        ),
        JointMethod::P | JointMethod::Auto => {
            let c = is_compatible(&m1, &m2, &k)?;
            match c.joint {
                Some(j) => joint_json("p", &k, &j),
                None => {
                    return Ok(Output {
                        text: "measurements are incompatible: no joint measurement exists\n".into(),
                        code: EXIT_INCOMPATIBLE,
                    })
                }
            }
        }
    };
    Ok(Output::ok(to_json(&value)?))
}
