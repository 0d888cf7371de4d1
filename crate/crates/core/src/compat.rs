//! Compatibility of two-outcome measurements.
//!
//! Two measurements with effects `f₁, f₂` are compatible iff some affine
//! `p` satisfies `0 ≤ p`, `p ≤ f₁`, `p ≤ f₂` and `f₁ + f₂ − 1 ≤ p` on the
//! state space; the joint measurement is then `(p, f₁ − p, f₂ − p,
//! 1 − f₁ − f₂ + p)`. Mixing both measurements with a fair coin at weight
//! `1 − λ` and substituting `μ = (1 − λ)/λ` turns the largest compatible `λ`
//! into a linear program in `(μ, p)`. Since an inequality between affine
//! functions holds on a polytope iff it holds at every vertex, each
//! functional inequality becomes one matrix row per vertex.
//!
//! The dual of that program yields incompatibility certificates
//! `(a₁, a₂, a₃, z₁, z₂, z₃)`.

use crate::effects::{
    effect_exposing_vertex, effect_vanishing_on_facet, mix_with_coin, AffineFunction, Effect,
    FiniteMeasurement, SignedFunctional, TwoOutcomeMeasurement,
};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polytope};
use crate::lp::{duality_gap, solve_lp, LinearProgram, LpSolution, LpStatus};

/// `|μ|` below this is solver noise and reported as exactly zero.
pub const MU_ZERO: f64 = 1e-9;

/// Degree LP rows come in four families of one row per vertex, in this order.
pub const DEGREE_FAMILIES: usize = 4;

/// Joint measurement with outcomes `(ω₁,ω₁), (ω₁,ω₂), (ω₂,ω₁), (ω₂,ω₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMeasurement {
    pub g11: Effect,
    pub g12: Effect,
    pub g21: Effect,
    pub g22: Effect,
}

impl JointMeasurement {
    /// Validates nonnegativity of each effect and normalization of the sum.
    pub fn new(g: [AffineFunction; 4], k: &Polytope) -> Result<Self> {
        const NAMES: [&str; 4] = ["g11", "g12", "g21", "g22"];
        let t = k.tol();
        let dim = k.intrinsic_dim();
        let mut sum = AffineFunction::zero(dim);
        for (f, name) in g.iter().zip(NAMES) {
            f.check(k)?;
            if f.range_on(k).0 < -t {
                return Err(Error::InfeasibleP(name));
            }
            sum = &sum + f;
        }
        if !sum.approx_eq(&AffineFunction::constant(dim, 1.0), 4.0 * t) {
            return Err(Error::NotNormalized);
        }
        let [g11, g12, g21, g22] = g.map(Effect::new_unchecked);
        Ok(Self { g11, g12, g21, g22 })
    }

    pub fn effects(&self) -> [&Effect; 4] {
        [&self.g11, &self.g12, &self.g21, &self.g22]
    }

    /// First marginal `g11 + g12`, second marginal `g11 + g21`.
    pub fn marginals(&self) -> (TwoOutcomeMeasurement, TwoOutcomeMeasurement) {
        let first = self.g11.function() + self.g12.function();
        let second = self.g11.function() + self.g21.function();
        (
            TwoOutcomeMeasurement::new(Effect::new_unchecked(first)),
            TwoOutcomeMeasurement::new(Effect::new_unchecked(second)),
        )
    }
}

pub fn marginals(joint: &JointMeasurement) -> (TwoOutcomeMeasurement, TwoOutcomeMeasurement) {
    joint.marginals()
}

/// The joint measurement `(p, f₁ − p, f₂ − p, 1 − f₁ − f₂ + p)`.
pub fn joint_from_p(
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    p: &AffineFunction,
    k: &Polytope,
) -> Result<JointMeasurement> {
    let (f1, f2) = (m1.f(), m2.f());
    let g12 = f1 - p;
    let g21 = f2 - p;
    let g22 = &(&(p - f1) - f2) + 1.0;
    JointMeasurement::new([p.clone(), g12, g21, g22], k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityResult {
    pub compatible: bool,
    pub p: Option<AffineFunction>,
    pub joint: Option<JointMeasurement>,
}

fn same_space(m1: &TwoOutcomeMeasurement, m2: &TwoOutcomeMeasurement, k: &Polytope) -> Result<()> {
    m1.f().check(k)?;
    m2.f().check(k)
}

/// Columns `q⁺, q⁻` of a free affine function split into nonnegative parts.
fn split_row(local: &[f64], sign: f64) -> Vec<f64> {
    let mut row: Vec<f64> = local.iter().map(|v| sign * v).collect();
    row.push(sign);
    let neg: Vec<f64> = row.iter().map(|v| -v).collect();
    row.extend(neg);
    row
}

fn unsplit(x: &[f64], dim: usize) -> AffineFunction {
    let q: Vec<f64> = (0..=dim).map(|j| x[j] - x[dim + 1 + j]).collect();
    AffineFunction::new(q[..dim].to_vec(), q[dim])
}

/// Decides compatibility by searching for an interpolating function `p`.
pub fn is_compatible(
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    k: &Polytope,
) -> Result<CompatibilityResult> {
    same_space(m1, m2, k)?;
    let d = k.intrinsic_dim();
    let mut lp = LinearProgram::new(vec![0.0; 2 * (d + 1)]);
    for v in k.local_vertices() {
        let (a, b) = (m1.f().at_local(v), m2.f().at_local(v));
        lp.add_row(split_row(v, 1.0), 0.0);
        lp.add_row(split_row(v, -1.0), -a);
        lp.add_row(split_row(v, -1.0), -b);
        lp.add_row(split_row(v, 1.0), a + b - 1.0);
    }
    let sol = solve_lp(&lp).map_err(|e| Error::SolverFailure(e.to_string()))?;
    if sol.status != LpStatus::Optimal {
        return Ok(CompatibilityResult {
            compatible: false,
            p: None,
            joint: None,
        });
    }
    let p = unsplit(&sol.x, d);
    let joint = joint_from_p(m1, m2, &p, k)?;
    Ok(CompatibilityResult {
        compatible: true,
        p: Some(p),
        joint: Some(joint),
    })
}

/// Dual witness of incompatibility: `l = (a₁φ_{z₁}, a₂φ_{z₂}, a₃φ_{z₃})`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompatibilityCertificate {
    pub a: [f64; 3],
    pub z: [Point; 3],
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeResult {
    pub lambda: f64,
    pub mu: f64,
    /// Optimal `p` of the program in `(μ, p)`; `λp` interpolates the mixed pair.
    pub p: AffineFunction,
    pub joint_at_lambda: JointMeasurement,
    pub certificate: Option<IncompatibilityCertificate>,
    /// Coin biases `(t₁, t₂)` mixed in; `(½, ½)` for the uniform coin.
    pub coin_biases: (f64, f64),
    /// `|c·x − y·b|` of the solved program.
    pub duality_gap: f64,
}

impl DegreeResult {
    pub fn is_compatible(&self, tol: f64) -> bool {
        self.lambda >= 1.0 - tol
    }
}

/// The degree program in standard form.
///
/// Columns: `[μ, q⁺ (d+1), q⁻ (d+1)]` with `p(y) = (q⁺ − q⁻)·[y; 1]`.
/// Rows: four families of `n` rows (one per vertex `v`, in vertex order):
/// `μ/2 − p(v) ≥ −f₁(v)`, `μ/2 − p(v) ≥ −f₂(v)`, `p(v) ≥ f₁(v) + f₂(v) − 1`,
/// `p(v) ≥ 0`. Row index is `family · n + v`.
pub fn degree_program(
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    k: &Polytope,
) -> Result<LinearProgram> {
    same_space(m1, m2, k)?;
    let d = k.intrinsic_dim();
    let mut cost = vec![0.0; 1 + 2 * (d + 1)];
    cost[0] = 1.0;
    let mut lp = LinearProgram::new(cost);
    let local = k.local_vertices();
    let f1: Vec<f64> = m1.f().vertex_values(k);
    let f2: Vec<f64> = m2.f().vertex_values(k);
    let with_mu = |mu: f64, v: &[f64], sign: f64| {
        let mut row = vec![mu];
        row.extend(split_row(v, sign));
        row
    };
    for (v, a) in local.iter().zip(&f1) {
        lp.add_row(with_mu(0.5, v, -1.0), -a);
    }
    for (v, b) in local.iter().zip(&f2) {
        lp.add_row(with_mu(0.5, v, -1.0), -b);
    }
    for ((v, a), b) in local.iter().zip(&f1).zip(&f2) {
        lp.add_row(with_mu(0.0, v, 1.0), a + b - 1.0);
    }
    for v in local {
        lp.add_row(with_mu(0.0, v, 1.0), 0.0);
    }
    Ok(lp)
}

fn clean_mu(mu: f64) -> f64 {
    if mu <= MU_ZERO {
        0.0
    } else {
        mu
    }
}

fn solve_checked(lp: &LinearProgram) -> Result<LpSolution> {
    let sol = solve_lp(lp).map_err(|e| Error::SolverFailure(e.to_string()))?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::SolverFailure(format!(
            "degree program reported {:?}",
            sol.status
        )));
    }
    Ok(sol)
}

/// Degree of compatibility with respect to the fair coin.
pub fn degree(
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    k: &Polytope,
) -> Result<DegreeResult> {
    let lp = degree_program(m1, m2, k)?;
    let sol = solve_checked(&lp)?;
    let d = k.intrinsic_dim();
    let mu = clean_mu(sol.x[0]);
    let lambda = 1.0 / (1.0 + mu);
    let p = unsplit(&sol.x[1..], d);
    let joint_at_lambda = joint_from_p(
        &mix_with_coin(m1, lambda, 0.5)?,
        &mix_with_coin(m2, lambda, 0.5)?,
        &(&p * lambda),
        k,
    )?;
    let certificate = if mu > 0.0 {
        Some(extract_certificate(&sol, k, m1, m2)?)
    } else {
        None
    };
    Ok(DegreeResult {
        lambda,
        mu,
        p,
        joint_at_lambda,
        certificate,
        coin_biases: (0.5, 0.5),
        duality_gap: duality_gap(&sol, &lp)?,
    })
}

/// Aggregates the dual multipliers of the first three row families of the
/// degree program into a certificate and checks it.
///
/// Rows of one family merge into a single weighted point: `aᵢ` is the total
/// weight and `zᵢ` the weighted barycenter (the centroid of `K` when the
/// family carries no weight). Affine functions cannot tell a positive
/// combination of evaluations from its barycenter, so nothing is lost.
pub fn extract_certificate(
    sol: &LpSolution,
    k: &Polytope,
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
) -> Result<IncompatibilityCertificate> {
    if !sol.is_optimal() {
        return Err(Error::NotOptimal);
    }
    let n = k.num_vertices();
    if sol.y.len() != DEGREE_FAMILIES * n {
        return Err(Error::DimensionMismatch {
            expected: DEGREE_FAMILIES * n,
            got: sol.y.len(),
        });
    }
    if clean_mu(sol.objective) == 0.0 {
        return Err(Error::NotIncompatible);
    }
    let verts = k.vertices();
    let mut a = [0.0; 3];
    let mut z: [Point; 3] = std::array::from_fn(|_| k.interior_point());
    for fam in 0..3 {
        let w: Vec<f64> = sol.y[fam * n..(fam + 1) * n]
            .iter()
            .map(|y| y.max(0.0))
            .collect();
        let total: f64 = w.iter().sum();
        a[fam] = total;
        if total > k.tol() {
            let mut bary = vec![0.0; k.ambient_dim()];
            for (wi, v) in w.iter().zip(verts) {
                bary.iter_mut()
                    .zip(v.coords())
                    .for_each(|(b, c)| *b += wi * c);
            }
            bary.iter_mut().for_each(|b| *b /= total);
            z[fam] = Point(bary);
        }
    }
    let mut cert = IncompatibilityCertificate {
        a,
        z,
        violation: 0.0,
    };
    cert.violation = certificate_violation(&cert, m1, m2, k)?;
    match verify_certificate(&cert, m1, m2, k) {
        Ok(v) if v > 0.0 => Ok(cert),
        Ok(v) => Err(Error::DegenerateDual(format!(
            "violation {v:e} is not positive"
        ))),
        Err(Error::InvalidCertificate(msg)) => Err(Error::DegenerateDual(msg)),
        Err(e) => Err(e),
    }
}

fn certificate_violation(
    cert: &IncompatibilityCertificate,
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    k: &Polytope,
) -> Result<f64> {
    let [a1, a2, a3] = cert.a;
    let [z1, z2, z3] = &cert.z;
    let (f1, f2) = (m1.f(), m2.f());
    Ok(
        -a1 * f1.evaluate(k, z1.coords())? - a2 * f2.evaluate(k, z2.coords())?
            + a3 * (f1.evaluate(k, z3.coords())? + f2.evaluate(k, z3.coords())? - 1.0),
    )
}

/// Checks every certificate condition from scratch, without any LP, and
/// returns `−a₁f₁(z₁) − a₂f₂(z₂) + a₃(f₁(z₃) + f₂(z₃) − 1)`. A positive value
/// proves the pair incompatible.
pub fn verify_certificate(
    cert: &IncompatibilityCertificate,
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    k: &Polytope,
) -> Result<f64> {
    same_space(m1, m2, k)?;
    let t = k.tol();
    let [a1, a2, a3] = cert.a;
    if cert.a.iter().any(|a| !a.is_finite() || *a < -t) {
        return Err(Error::InvalidCertificate(format!(
            "coefficients {:?} must be nonnegative",
            cert.a
        )));
    }
    if 0.5 * (a1 + a2) > 1.0 + t {
        return Err(Error::InvalidCertificate(format!(
            "(a1 + a2)/2 = {} exceeds 1",
            0.5 * (a1 + a2)
        )));
    }
    for (i, z) in cert.z.iter().enumerate() {
        if !k.contains(z.coords())? {
            return Err(Error::InvalidCertificate(format!(
                "z{} lies outside the state space",
                i + 1
            )));
        }
    }
    let psi = SignedFunctional::new(vec![
        (cert.z[0].clone(), a1),
        (cert.z[1].clone(), a2),
        (cert.z[2].clone(), -a3),
    ]);
    if !psi.is_positive(k) {
        return Err(Error::InvalidCertificate(
            "a3 φ(z3) is not dominated by a1 φ(z1) + a2 φ(z2)".into(),
        ));
    }
    certificate_violation(cert, m1, m2, k)
}

/// The free-coin degree program. Columns: `[μ, s₁, s₂, q⁺, q⁻]` where
/// `sᵢ = μ tᵢ`. Rows: per vertex `sᵢ − p(v) ≥ −fᵢ(v)` (two families),
/// `μ − s₁ − s₂ + p(v) ≥ f₁(v) + f₂(v) − 1`, `p(v) ≥ 0`; then `μ − sᵢ ≥ 0`.
pub fn degree_free_coin_program(
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    k: &Polytope,
) -> Result<LinearProgram> {
    same_space(m1, m2, k)?;
    let d = k.intrinsic_dim();
    let mut cost = vec![0.0; 3 + 2 * (d + 1)];
    cost[0] = 1.0;
    let mut lp = LinearProgram::new(cost);
    let local = k.local_vertices();
    let f1 = m1.f().vertex_values(k);
    let f2 = m2.f().vertex_values(k);
    let with = |head: [f64; 3], v: &[f64], sign: f64| {
        let mut row = head.to_vec();
        row.extend(split_row(v, sign));
        row
    };
    for (v, a) in local.iter().zip(&f1) {
        lp.add_row(with([0.0, 1.0, 0.0], v, -1.0), -a);
    }
    for (v, b) in local.iter().zip(&f2) {
        lp.add_row(with([0.0, 0.0, 1.0], v, -1.0), -b);
    }
    for ((v, a), b) in local.iter().zip(&f1).zip(&f2) {
        lp.add_row(with([1.0, -1.0, -1.0], v, 1.0), a + b - 1.0);
    }
    for v in local {
        lp.add_row(with([0.0, 0.0, 0.0], v, 1.0), 0.0);
    }
    let zeros = vec![0.0; 2 * (d + 1)];
    for head in [[1.0, -1.0, 0.0], [1.0, 0.0, -1.0]] {
        let mut row = head.to_vec();
        row.extend(&zeros);
        lp.add_row(row, 0.0);
    }
    Ok(lp)
}

/// Degree of compatibility with the coin biases optimized as well.
///
/// The certificate, when present, comes from the fair-coin program: the pair
/// is incompatible in either formulation exactly when `λ < 1`.
pub fn degree_free_coin(
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    k: &Polytope,
) -> Result<DegreeResult> {
    let lp = degree_free_coin_program(m1, m2, k)?;
    let sol = solve_checked(&lp)?;
    let d = k.intrinsic_dim();
    let mu = clean_mu(sol.x[0]);
    let lambda = 1.0 / (1.0 + mu);
    let biases = if mu > 0.0 {
        (
            (sol.x[1] / mu).clamp(0.0, 1.0),
            (sol.x[2] / mu).clamp(0.0, 1.0),
        )
    } else {
        (0.5, 0.5)
    };
    let p = unsplit(&sol.x[3..], d);
    let joint_at_lambda = joint_from_p(
        &mix_with_coin(m1, lambda, biases.0)?,
        &mix_with_coin(m2, lambda, biases.1)?,
        &(&p * lambda),
        k,
    )?;
    let certificate = if mu > 0.0 {
        degree(m1, m2, k)?.certificate
    } else {
        None
    };
    Ok(DegreeResult {
        lambda,
        mu,
        p,
        joint_at_lambda,
        certificate,
        coin_biases: biases,
        duality_gap: duality_gap(&sol, &lp)?,
    })
}

/// Joint measurement on the product outcome set, indexed `[j][k]` by the
/// outcomes of the two factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductJoint {
    pub first_outcomes: Vec<String>,
    pub second_outcomes: Vec<String>,
    pub effects: Vec<Vec<Effect>>,
}

impl ProductJoint {
    pub fn marginals(&self) -> (FiniteMeasurement, FiniteMeasurement) {
        let dim = self.effects[0][0].function().dim();
        let rows = self.effects.len();
        let cols = self.effects[0].len();
        let first = (0..rows)
            .map(|j| {
                let f = (0..cols).fold(AffineFunction::zero(dim), |acc, c| {
                    &acc + self.effects[j][c].function()
                });
                Effect::new_unchecked(f)
            })
            .collect();
        let second = (0..cols)
            .map(|c| {
                let f = (0..rows).fold(AffineFunction::zero(dim), |acc, j| {
                    &acc + self.effects[j][c].function()
                });
                Effect::new_unchecked(f)
            })
            .collect();
        (
            FiniteMeasurement::new_unchecked(self.first_outcomes.clone(), first),
            FiniteMeasurement::new_unchecked(self.second_outcomes.clone(), second),
        )
    }

    /// Flattened in row-major order with outcome labels `"a,b"`.
    pub fn to_measurement(&self) -> FiniteMeasurement {
        let mut labels = Vec::new();
        let mut effects = Vec::new();
        for (j, a) in self.first_outcomes.iter().enumerate() {
            for (c, b) in self.second_outcomes.iter().enumerate() {
                labels.push(format!("{a},{b}"));
                effects.push(self.effects[j][c].clone());
            }
        }
        FiniteMeasurement::new_unchecked(labels, effects)
    }
}

/// On a simplex: `g_{jk} = Σᵢ bᵢ · m₁ⱼ(xᵢ) · m₂ₖ(xᵢ)` with `bᵢ` the
/// barycentric coordinate functions of the vertices `xᵢ`.
pub fn simplex_product_joint(
    m1: &FiniteMeasurement,
    m2: &FiniteMeasurement,
    k: &Polytope,
) -> Result<ProductJoint> {
    let inv = k.barycentric_matrix()?;
    let d = k.intrinsic_dim();
    let n = k.num_vertices();
    let bary: Vec<AffineFunction> = (0..n)
        .map(|i| AffineFunction::new((0..d).map(|c| inv[(i, c)]).collect(), inv[(i, d)]))
        .collect();
    let local = k.local_vertices();
    let mut effects = Vec::with_capacity(m1.len());
    for e1 in m1.effects() {
        let mut row = Vec::with_capacity(m2.len());
        for e2 in m2.effects() {
            let g = bary
                .iter()
                .zip(local)
                .fold(AffineFunction::zero(d), |acc, (b, v)| {
                    &acc + &(b * (e1.at_local(v) * e2.at_local(v)))
                });
            row.push(Effect::new_unchecked(g));
        }
        effects.push(row);
    }
    Ok(ProductJoint {
        first_outcomes: m1.outcomes().to_vec(),
        second_outcomes: m2.outcomes().to_vec(),
        effects,
    })
}

/// `½ (τ₁ × m₂ + m₁ × τ₂)` for coin tosses `τᵢ` of bias `tᵢ`; its marginals
/// are the measurements mixed at weight ½ with their coins.
pub fn half_coin_joint(
    m1: &TwoOutcomeMeasurement,
    m2: &TwoOutcomeMeasurement,
    t1: f64,
    t2: f64,
    k: &Polytope,
) -> Result<JointMeasurement> {
    for (name, t) in [("t1", t1), ("t2", t2)] {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange { name, value: t });
        }
    }
    let (f1, f2) = (m1.f(), m2.f());
    let (h1, h2) = (
        m1.effect().complement().into_function(),
        m2.effect().complement().into_function(),
    );
    let combine =
        |a: f64, g2: &AffineFunction, g1: &AffineFunction, b: f64| &(&(g2 * a) + &(g1 * b)) * 0.5;
    JointMeasurement::new(
        [
            combine(t1, f2, f1, t2),
            combine(t1, &h2, f1, 1.0 - t2),
            combine(1.0 - t1, f2, &h1, t2),
            combine(1.0 - t1, &h2, &h1, 1.0 - t2),
        ],
        k,
    )
}

/// What the facet effect of a witness is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    /// The effect exposing this vertex.
    Vertex(usize),
    /// The effect vanishing on this facet.
    Facet(usize),
}

/// A constructed incompatible pair: the effect vanishing on facet `facet`
/// and the effect of `partner`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompatiblePair {
    pub facet: usize,
    pub partner: Partner,
    pub first: TwoOutcomeMeasurement,
    pub second: TwoOutcomeMeasurement,
    pub degree: DegreeResult,
    pub searched: usize,
}

/// Searches for the least compatible pair among facet effects paired with
/// vertex-exposing effects and with other facet effects.
///
/// For every facet `F` missing at least two vertices, the effect vanishing on
/// `F` is paired with the effect exposing each vertex off `F`; at least one
/// of these pairs is incompatible when `K` is not a simplex. Pairs of facet
/// effects `(F, G)` with `G` after `F` are tried as well. Facets are visited
/// in enumeration order, vertex partners before facet partners, each in index
/// order; the first pair attaining the minimal degree wins.
pub fn construct_incompatible_pair(k: &Polytope) -> Result<IncompatiblePair> {
    if k.is_simplex() {
        return Err(Error::SimplexInput);
    }
    let facets = k.facets()?;
    let n = k.num_vertices();
    let facet_meas = facets
        .iter()
        .map(|f| effect_vanishing_on_facet(k, f).map(TwoOutcomeMeasurement::new))
        .collect::<Result<Vec<_>>>()?;
    let mut exposing: Vec<Option<TwoOutcomeMeasurement>> = vec![None; n];
    let mut best: Option<IncompatiblePair> = None;
    let mut searched = 0;
    let mut consider = |fi: usize, partner: Partner, m2: &TwoOutcomeMeasurement| -> Result<()> {
        let m1 = &facet_meas[fi];
        let deg = degree(m1, m2, k)?;
        searched += 1;
        if best
            .as_ref()
            .is_none_or(|b| deg.lambda < b.degree.lambda - 1e-12)
        {
            best = Some(IncompatiblePair {
                facet: fi,
                partner,
                first: m1.clone(),
                second: m2.clone(),
                degree: deg,
                searched: 0,
            });
        }
        Ok(())
    };
    for (fi, facet) in facets.iter().enumerate() {
        let off: Vec<usize> = (0..n).filter(|&v| !facet.contains_vertex(v)).collect();
        if off.len() >= 2 {
            for &x in &off {
                if exposing[x].is_none() {
                    exposing[x] = Some(TwoOutcomeMeasurement::new(effect_exposing_vertex(k, x)?));
                }
                consider(
                    fi,
                    Partner::Vertex(x),
                    exposing[x].as_ref().expect("filled above"),
                )?;
            }
        }
        for (gi, other) in facet_meas.iter().enumerate().skip(fi + 1) {
            consider(fi, Partner::Facet(gi), other)?;
        }
    }
    match best {
        Some(mut b) if b.degree.lambda < 1.0 - MU_ZERO => {
            b.searched = searched;
            Ok(b)
        }
        other => Err(Error::SearchExhausted {
            searched,
            best: other.map_or(1.0, |b| b.degree.lambda),
        }),
    }
}
