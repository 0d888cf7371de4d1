//! Affine functions on a state space and the order structure built on them:
//! the positive cone, effects, measurements, coin tosses and positive
//! functionals.
//!
//! All functions are stored in chart coordinates of their polytope, as
//! `f(y) = linear·y + offset`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{dot, Facet, Point, Polytope};
use crate::lp::{solve_lp, LinearProgram, LpStatus};

/// Largest residual accepted when converting vertex values to an affine
/// function.
pub const VERTEX_VALUE_RESIDUAL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineFunction {
    pub linear: Vec<f64>,
    pub offset: f64,
}

impl AffineFunction {
    pub fn new(linear: Vec<f64>, offset: f64) -> Self {
        Self { linear, offset }
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Self {
            linear: vec![0.0; dim],
            offset: value,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    /// Value at a point given in chart coordinates.
    pub fn at_local(&self, local: &[f64]) -> f64 {
        dot(&self.linear, local) + self.offset
    }

    /// Value at an ambient point of `k`'s affine hull.
    pub fn evaluate(&self, k: &Polytope, x: &[f64]) -> Result<f64> {
        self.check(k)?;
        Ok(self.at_local(&k.to_local(x)?))
    }

    pub fn vertex_values(&self, k: &Polytope) -> Vec<f64> {
        k.local_vertices()
            .iter()
            .map(|v| self.at_local(v))
            .collect()
    }

    /// Minimum and maximum over `k`, attained at vertices.
    pub fn range_on(&self, k: &Polytope) -> (f64, f64) {
        self.vertex_values(k)
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn sup_norm(&self, k: &Polytope) -> f64 {
        let (lo, hi) = self.range_on(k);
        lo.abs().max(hi.abs())
    }

    /// Membership in the positive cone.
    pub fn is_positive(&self, k: &Polytope, tol: f64) -> bool {
        self.range_on(k).0 >= -tol
    }

    /// Interior of the positive cone: strictly positive on `k`.
    pub fn is_order_unit(&self, k: &Polytope) -> bool {
        self.range_on(k).0 > k.tol()
    }

    /// Coefficient-wise comparison.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && (self.offset - other.offset).abs() <= tol
            && self
                .linear
                .iter()
                .zip(&other.linear)
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        self.linear
            .iter()
            .zip(&other.linear)
            .map(|(a, b)| (a - b).abs())
            .fold((self.offset - other.offset).abs(), f64::max)
    }

    pub fn check(&self, k: &Polytope) -> Result<()> {
        if self.dim() != k.intrinsic_dim() {
            return Err(Error::DimensionMismatch {
                expected: k.intrinsic_dim(),
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// Converts `x ↦ a·x + b` on ambient coordinates to chart coordinates.
    pub fn from_ambient(k: &Polytope, linear: &[f64], offset: f64) -> Result<Self> {
        if linear.len() != k.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: k.ambient_dim(),
                got: linear.len(),
            });
        }
        let chart = k.chart();
        Ok(Self {
            linear: chart.restrict_direction(linear),
            offset: offset + dot(linear, &chart.origin),
        })
    }

    /// Ambient coefficients `(a, b)` with `f(x) = a·x + b` on the affine hull;
    /// `a` is orthogonal to the hull's complement.
    pub fn to_ambient(&self, k: &Polytope) -> (Vec<f64>, f64) {
        let chart = k.chart();
        let a = chart.lift_direction(&self.linear);
        let b = self.offset - dot(&a, &chart.origin);
        (a, b)
    }

    /// Least-squares affine fit to one value per vertex, rejected when the
    /// values are not those of an affine function.
    pub fn from_vertex_values(k: &Polytope, values: &[f64]) -> Result<Self> {
        let n = k.num_vertices();
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.len(),
            });
        }
        let d = k.intrinsic_dim();
        let local = k.local_vertices();
        let a = DMatrix::from_fn(n, d + 1, |r, c| if c < d { local[r][c] } else { 1.0 });
        let rhs = DVector::from_column_slice(values);
        let sol = a
            .clone()
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::Parse(format!("least squares failed: {e}")))?;
        let residual = (&a * &sol - &rhs).amax();
        if residual > VERTEX_VALUE_RESIDUAL {
            return Err(Error::InconsistentVertexValues { residual });
        }
        Ok(Self {
            linear: sol.rows(0, d).iter().copied().collect(),
            offset: sol[d],
        })
    }
}

impl Add for &AffineFunction {
    type Output = AffineFunction;
    fn add(self, rhs: &AffineFunction) -> AffineFunction {
        AffineFunction {
            linear: self
                .linear
                .iter()
                .zip(&rhs.linear)
                .map(|(a, b)| a + b)
                .collect(),
            offset: self.offset + rhs.offset,
        }
    }
}

impl Sub for &AffineFunction {
    type Output = AffineFunction;
    fn sub(self, rhs: &AffineFunction) -> AffineFunction {
        AffineFunction {
            linear: self
                .linear
                .iter()
                .zip(&rhs.linear)
                .map(|(a, b)| a - b)
                .collect(),
            offset: self.offset - rhs.offset,
        }
    }
}

impl Mul<f64> for &AffineFunction {
    type Output = AffineFunction;
    fn mul(self, s: f64) -> AffineFunction {
        AffineFunction {
            linear: self.linear.iter().map(|a| a * s).collect(),
            offset: self.offset * s,
        }
    }
}

impl Add<f64> for &AffineFunction {
    type Output = AffineFunction;
    fn add(self, c: f64) -> AffineFunction {
        AffineFunction {
            linear: self.linear.clone(),
            offset: self.offset + c,
        }
    }
}

impl Neg for &AffineFunction {
    type Output = AffineFunction;
    fn neg(self) -> AffineFunction {
        self * -1.0
    }
}

/// An affine function with values in `[0, 1]` on its state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect(AffineFunction);

impl Effect {
    /// Validates `0 ≤ f ≤ 1` on `k` within `k.tol()`; violations are rejected,
    /// never clamped.
    pub fn new(f: AffineFunction, k: &Polytope) -> Result<Self> {
        f.check(k)?;
        let (min, max) = f.range_on(k);
        let t = k.tol();
        if min < -t || max > 1.0 + t {
            return Err(Error::EffectOutOfRange { min, max });
        }
        Ok(Self(f))
    }

    /// Wraps a function known to be an effect by construction.
    pub(crate) fn new_unchecked(f: AffineFunction) -> Self {
        Self(f)
    }

    pub fn function(&self) -> &AffineFunction {
        &self.0
    }

    pub fn into_function(self) -> AffineFunction {
        self.0
    }

    /// `1 − f`.
    pub fn complement(&self) -> Effect {
        Effect(&(-&self.0) + 1.0)
    }

    pub fn at_local(&self, local: &[f64]) -> f64 {
        self.0.at_local(local)
    }
}

/// `f δ_{ω₁} + (1 − f) δ_{ω₂}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoOutcomeMeasurement {
    effect: Effect,
}

impl TwoOutcomeMeasurement {
    pub fn new(effect: Effect) -> Self {
        Self { effect }
    }

    pub fn from_function(f: AffineFunction, k: &Polytope) -> Result<Self> {
        Ok(Self::new(Effect::new(f, k)?))
    }

    /// Effect of the first outcome.
    pub fn effect(&self) -> &Effect {
        &self.effect
    }

    pub fn f(&self) -> &AffineFunction {
        self.effect.function()
    }

    pub fn to_finite(&self) -> FiniteMeasurement {
        FiniteMeasurement {
            outcomes: vec!["1".into(), "2".into()],
            effects: vec![self.effect.clone(), self.effect.complement()],
        }
    }
}

/// Measurement with finitely many labelled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasurement {
    outcomes: Vec<String>,
    effects: Vec<Effect>,
}

impl FiniteMeasurement {
    pub fn new(outcomes: Vec<String>, effects: Vec<Effect>, k: &Polytope) -> Result<Self> {
        if outcomes.len() != effects.len() {
            return Err(Error::DimensionMismatch {
                expected: outcomes.len(),
                got: effects.len(),
            });
        }
        let dim = k.intrinsic_dim();
        let mut sum = AffineFunction::zero(dim);
        for e in &effects {
            e.function().check(k)?;
            sum = &sum + e.function();
        }
        if !sum.approx_eq(
            &AffineFunction::constant(dim, 1.0),
            k.tol() * effects.len().max(1) as f64,
        ) {
            return Err(Error::NotNormalized);
        }
        Ok(Self { outcomes, effects })
    }

    pub(crate) fn new_unchecked(outcomes: Vec<String>, effects: Vec<Effect>) -> Self {
        Self { outcomes, effects }
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }
}

/// Constant measurement with first-outcome probability `bias`.
pub fn coin_toss(k: &Polytope, bias: f64) -> Result<TwoOutcomeMeasurement> {
    if !(0.0..=1.0).contains(&bias) {
        return Err(Error::BiasOutOfRange(bias));
    }
    Ok(TwoOutcomeMeasurement::new(Effect(
        AffineFunction::constant(k.intrinsic_dim(), bias),
    )))
}

/// `λ m + (1 − λ) coin_toss(t)`.
pub fn mix_with_coin(
    m: &TwoOutcomeMeasurement,
    lambda: f64,
    bias: f64,
) -> Result<TwoOutcomeMeasurement> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::ParameterOutOfRange {
            name: "lambda",
            value: lambda,
        });
    }
    if !(0.0..=1.0).contains(&bias) {
        return Err(Error::ParameterOutOfRange {
            name: "bias",
            value: bias,
        });
    }
    Ok(TwoOutcomeMeasurement::new(Effect(
        &(m.f() * lambda) + (1.0 - lambda) * bias,
    )))
}

/// The effect vanishing exactly on facet `facet`, normalized to maximum 1.
pub fn effect_vanishing_on_facet(k: &Polytope, facet: &Facet) -> Result<Effect> {
    let f = AffineFunction::new(facet.normal.clone(), -facet.offset);
    let (_, max) = f.range_on(k);
    if max <= k.geom_tol() {
        return Err(Error::DegenerateFacet);
    }
    Ok(Effect(&f * (1.0 / max)))
}

/// An effect whose zero set on `k` is exactly vertex `v`, normalized to
/// maximum 1.
///
/// The separating direction is `v` minus the centroid of the other vertices.
/// When that direction fails to separate `v` strictly, a margin-maximizing
/// direction is obtained from a small LP instead.
pub fn effect_exposing_vertex(k: &Polytope, v: usize) -> Result<Effect> {
    let n = k.num_vertices();
    if v >= n {
        return Err(Error::InvalidVertex(v));
    }
    if n < 2 {
        return Err(Error::CannotExpose(v));
    }
    let local = k.local_vertices();
    let target = &local[v];
    let others = crate::geometry::centroid(
        local
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, p)| p.as_slice()),
    );
    let dir: Vec<f64> = target.iter().zip(&others).map(|(a, b)| a - b).collect();
    let candidate = exposing_from_direction(k, v, &dir);
    let f = match candidate {
        Some(f) => f,
        None => {
            let dir = separating_direction(k, v)?.ok_or(Error::CannotExpose(v))?;
            exposing_from_direction(k, v, &dir).ok_or(Error::CannotExpose(v))?
        }
    };
    Ok(Effect(f))
}

/// `x ↦ dir·(v − x)`, normalized; `None` unless it is strictly positive off `v`.
fn exposing_from_direction(k: &Polytope, v: usize, dir: &[f64]) -> Option<AffineFunction> {
    let target = &k.local_vertices()[v];
    let f = AffineFunction::new(dir.iter().map(|d| -d).collect(), dot(dir, target));
    let values = f.vertex_values(k);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max <= 0.0 {
        return None;
    }
    let f = &f * (1.0 / max);
    let t = k.geom_tol();
    let ok =
        f.vertex_values(k)
            .iter()
            .enumerate()
            .all(|(i, &val)| if i == v { val.abs() <= t } else { val > t });
    ok.then_some(f)
}

/// Direction `a` with `a·(v − w) ≥ 1` for every other vertex `w`, of minimal
/// ℓ₁ norm. Free coordinates are split into nonnegative pairs.
fn separating_direction(k: &Polytope, v: usize) -> Result<Option<Vec<f64>>> {
    let d = k.intrinsic_dim();
    let local = k.local_vertices();
    let mut lp = LinearProgram::new(vec![1.0; 2 * d]);
    for (i, w) in local.iter().enumerate() {
        if i == v {
            continue;
        }
        let diff: Vec<f64> = local[v].iter().zip(w).map(|(a, b)| a - b).collect();
        let row = diff
            .iter()
            .copied()
            .chain(diff.iter().map(|x| -x))
            .collect();
        lp.add_row(row, 1.0);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Ok(None);
    }
    Ok(Some((0..d).map(|j| sol.x[j] - sol.x[d + j]).collect()))
}

/// `Σ cᵢ φ_{xᵢ}` with arbitrary-sign coefficients, where `φ_x(f) = f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedFunctional {
    terms: Vec<(Point, f64)>,
}

impl SignedFunctional {
    pub fn new(terms: Vec<(Point, f64)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(Point, f64)] {
        &self.terms
    }

    /// `ψ(1) = Σ cᵢ`.
    pub fn mass(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn apply(&self, k: &Polytope, f: &AffineFunction) -> Result<f64> {
        let mut total = 0.0;
        for (x, c) in &self.terms {
            total += c * f.evaluate(k, x.coords())?;
        }
        Ok(total)
    }

    /// Positivity on `A(K)⁺`.
    ///
    /// Writing `c = Σcᵢ` and `M = Σcᵢyᵢ` in chart coordinates, the functional
    /// is positive iff `c ≥ 0` and `n·M − h·c ≥ 0` for every facet `(n, h)`.
    /// For `c > 0` this says the barycenter `M/c` lies in `K`; for `c = 0` it
    /// forces `M = 0`, i.e. the functional vanishes. The homogeneous form
    /// avoids dividing by a small mass.
    pub fn is_positive(&self, k: &Polytope) -> bool {
        let d = k.intrinsic_dim();
        let weight: f64 = self
            .terms
            .iter()
            .map(|(_, c)| c.abs())
            .sum::<f64>()
            .max(1.0);
        let t = k.geom_tol() * weight;
        let mut moment = vec![0.0; d];
        for (x, c) in &self.terms {
            match k.to_local_in_hull(x.coords()) {
                Ok(Some(y)) => moment.iter_mut().zip(&y).for_each(|(m, yi)| *m += c * yi),
                _ => return false,
            }
        }
        let mass = self.mass();
        if mass < -t {
            return false;
        }
        if d == 0 {
            return true;
        }
        match k.facets() {
            Ok(facets) => facets
                .iter()
                .all(|f| dot(&f.normal, &moment) - f.offset * mass >= -t),
            Err(_) => false,
        }
    }
}

/// `ψ = Σ wᵢ φ_{xᵢ}` with `wᵢ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveFunctional(SignedFunctional);

impl PositiveFunctional {
    pub fn new(terms: Vec<(Point, f64)>) -> Result<Self> {
        if let Some((_, w)) = terms.iter().find(|(_, w)| *w < 0.0) {
            return Err(Error::ParameterOutOfRange {
                name: "weight",
                value: *w,
            });
        }
        Ok(Self(SignedFunctional::new(terms)))
    }

    /// Weights attached to vertices of `k`.
    pub fn on_vertices(k: &Polytope, weights: &[(usize, f64)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(weights.len());
        for &(i, w) in weights {
            let v = k.vertices().get(i).ok_or(Error::InvalidVertex(i))?;
            terms.push((v.clone(), w));
        }
        Self::new(terms)
    }

    pub fn mass(&self) -> f64 {
        self.0.mass()
    }

    pub fn apply(&self, k: &Polytope, f: &AffineFunction) -> Result<f64> {
        self.0.apply(k, f)
    }

    pub fn as_signed(&self) -> &SignedFunctional {
        &self.0
    }
}

pub fn apply_functional(psi: &PositiveFunctional, k: &Polytope, f: &AffineFunction) -> Result<f64> {
    psi.apply(k, f)
}

pub fn functional_is_positive(psi: &SignedFunctional, k: &Polytope) -> bool {
    psi.is_positive(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_TOL;

    fn poly(pts: &[&[f64]]) -> Polytope {
        Polytope::from_coords(
            &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
            DEFAULT_TOL,
        )
        .unwrap()
    }

    fn square() -> Polytope {
        poly(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]])
    }

    fn triangle() -> Polytope {
        poly(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])
    }

    fn amb(k: &Polytope, a: &[f64], b: f64) -> AffineFunction {
        AffineFunction::from_ambient(k, a, b).unwrap()
    }

    #[test]
    fn evaluation() {
        let k = square();
        let x = amb(&k, &[1.0, 0.0], 0.0);
        assert!((x.evaluate(&k, &[0.3, 0.9]).unwrap() - 0.3).abs() < 1e-15);
        let one = AffineFunction::constant(2, 1.0);
        assert_eq!(one.evaluate(&k, &[0.7, 0.1]).unwrap(), 1.0);
        let f = amb(&k, &[1.0, 1.0], -1.0);
        assert!((f.evaluate(&k, &[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            f.evaluate(&k, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ranges() {
        let k = square();
        let (lo, hi) = amb(&k, &[1.0, 0.0], 0.0).range_on(&k);
        assert!(lo.abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        let (lo, hi) = amb(&k, &[1.0, 1.0], -1.0).range_on(&k);
        assert!((lo + 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        let t = triangle();
        let (lo, hi) = amb(&t, &[1.0, 0.0], 0.0).range_on(&t);
        assert!(lo.abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_checks() {
        let k = square();
        assert!(amb(&k, &[1.0, 0.0], 0.0).is_positive(&k, k.tol()));
        assert!(!amb(&k, &[1.0, 0.0], -0.5).is_positive(&k, k.tol()));
        assert!(AffineFunction::zero(2).is_positive(&k, k.tol()));
        assert!(AffineFunction::constant(2, 1.0).is_order_unit(&k));
        assert!(!amb(&k, &[1.0, 0.0], 0.0).is_order_unit(&k));
        assert!(amb(&k, &[1.0, 0.0], 0.1).is_order_unit(&k));
    }

    #[test]
    fn facet_effects() {
        let k = square();
        let facets = k.facets().unwrap();
        let x = amb(&k, &[1.0, 0.0], 0.0);
        let one_minus_y = amb(&k, &[0.0, -1.0], 1.0);
        let mut found = (false, false);
        for f in facets {
            let e = effect_vanishing_on_facet(&k, f).unwrap();
            found.0 |= e.function().approx_eq(&x, 1e-12);
            found.1 |= e.function().approx_eq(&one_minus_y, 1e-12);
        }
        assert_eq!(found, (true, true));

        let t = triangle();
        let hyp = amb(&t, &[-1.0, -1.0], 1.0);
        assert!(t
            .facets()
            .unwrap()
            .iter()
            .any(|f| effect_vanishing_on_facet(&t, f)
                .unwrap()
                .function()
                .approx_eq(&hyp, 1e-12)));
    }

    #[test]
    fn exposing_effects() {
        let k = square();
        let e = effect_exposing_vertex(&k, 3).unwrap();
        assert!(e.function().approx_eq(&amb(&k, &[-0.5, -0.5], 1.0), 1e-12));
        let seg = poly(&[&[0.0], &[1.0]]);
        let e = effect_exposing_vertex(&seg, 0).unwrap();
        assert!(e.function().approx_eq(&amb(&seg, &[1.0], 0.0), 1e-12));
        let t = triangle();
        let e = effect_exposing_vertex(&t, 0).unwrap();
        assert!(e.function().approx_eq(&amb(&t, &[1.0, 1.0], 0.0), 1e-12));
        assert_eq!(
            effect_exposing_vertex(&poly(&[&[1.0]]), 0).unwrap_err(),
            Error::CannotExpose(0)
        );
    }

    #[test]
    fn exposing_needs_lp_fallback() {
        // The centroid of the other vertices sits far along the flat edge
        // direction, so v − centroid does not separate v from its neighbour.
        let k = poly(&[
            &[0.0, 0.0],
            &[1.0, 0.001],
            &[-1.0, 0.001],
            &[50.0, 1.0],
            &[51.0, 2.0],
        ]);
        let v = 0;
        assert_eq!(k.vertices()[v].0, vec![0.0, 0.0]);
        let e = effect_exposing_vertex(&k, v).unwrap();
        let vals = e.function().vertex_values(&k);
        assert!(vals[v].abs() < 1e-9);
        assert!(vals.iter().enumerate().all(|(i, &x)| i == v || x > 1e-9));
        assert!((vals.iter().cloned().fold(0.0, f64::max) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coins_and_mixing() {
        let k = square();
        let c = coin_toss(&k, 0.5).unwrap();
        assert_eq!(c.f(), &AffineFunction::constant(2, 0.5));
        assert_eq!(coin_toss(&k, 0.0).unwrap().f().offset, 0.0);
        assert_eq!(coin_toss(&k, 1.0).unwrap().f().offset, 1.0);
        assert_eq!(coin_toss(&k, 1.5).unwrap_err(), Error::BiasOutOfRange(1.5));

        let m = TwoOutcomeMeasurement::from_function(amb(&k, &[1.0, 0.0], 0.0), &k).unwrap();
        assert_eq!(mix_with_coin(&m, 1.0, 0.3).unwrap(), m);
        assert_eq!(
            mix_with_coin(&m, 0.0, 0.3).unwrap().f(),
            &AffineFunction::constant(2, 0.3)
        );
        let half = mix_with_coin(&m, 0.5, 0.5).unwrap();
        assert!(half.f().approx_eq(&amb(&k, &[0.5, 0.0], 0.25), 1e-15));
        assert!(matches!(
            mix_with_coin(&m, 1.2, 0.5),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn effect_validation_rejects_out_of_range() {
        let k = square();
        let f = amb(&k, &[1.0, 1.0], 0.0);
        assert!(matches!(
            Effect::new(f, &k),
            Err(Error::EffectOutOfRange { .. })
        ));
        let e = Effect::new(amb(&k, &[1.0, 0.0], 0.0), &k).unwrap();
        assert!(Effect::new(e.complement().into_function(), &k).is_ok());
    }

    #[test]
    fn vertex_value_input() {
        let k = square();
        let f = AffineFunction::from_vertex_values(&k, &[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(f.approx_eq(&amb(&k, &[1.0, 0.0], 0.0), 1e-12));
        let err = AffineFunction::from_vertex_values(&k, &[0.0, 0.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::InconsistentVertexValues { .. }));
    }

    #[test]
    fn finite_measurements_normalize() {
        let k = square();
        let e = Effect::new(amb(&k, &[1.0, 0.0], 0.0), &k).unwrap();
        let ok = FiniteMeasurement::new(
            vec!["a".into(), "b".into()],
            vec![e.clone(), e.complement()],
            &k,
        );
        assert!(ok.is_ok());
        let bad = FiniteMeasurement::new(vec!["a".into(), "b".into()], vec![e.clone(), e], &k);
        assert_eq!(bad.unwrap_err(), Error::NotNormalized);
    }

    #[test]
    fn functionals() {
        let k = square();
        let x = amb(&k, &[1.0, 0.0], 0.0);
        let psi = PositiveFunctional::new(vec![(Point::from([0.5, 0.5]), 1.0)]).unwrap();
        assert!((apply_functional(&psi, &k, &x).unwrap() - 0.5).abs() < 1e-15);
        let psi = PositiveFunctional::on_vertices(&k, &[(2, 2.0)]).unwrap();
        assert_eq!(
            psi.apply(&k, &AffineFunction::constant(2, 1.0)).unwrap(),
            2.0
        );
        assert_eq!(psi.mass(), 2.0);
        let f = amb(&k, &[0.3, -0.7], 0.2);
        let psi = PositiveFunctional::new(vec![
            (Point::from([0.0, 1.0]), 1.0),
            (Point::from([1.0, 0.0]), 1.0),
        ])
        .unwrap();
        let mid = f.evaluate(&k, &[0.5, 0.5]).unwrap();
        assert!((psi.apply(&k, &f).unwrap() - 2.0 * mid).abs() < 1e-15);
        assert!(PositiveFunctional::new(vec![(Point::from([0.0, 0.0]), -1.0)]).is_err());
    }

    #[test]
    fn functional_positivity() {
        let k = square();
        let psi = SignedFunctional::new(vec![
            (Point::from([0.0, 1.0]), 1.0),
            (Point::from([1.0, 0.0]), 1.0),
            (Point::from([1.0, 1.0]), -1.0),
        ]);
        assert!(functional_is_positive(&psi, &k));
        let psi = SignedFunctional::new(vec![
            (Point::from([0.0, 0.0]), 1.0),
            (Point::from([1.0, 1.0]), -1.0),
        ]);
        assert!(!functional_is_positive(&psi, &k));
        for v in k.vertices() {
            assert!(functional_is_positive(
                &SignedFunctional::new(vec![(v.clone(), 2.0)]),
                &k
            ));
        }
        let neg = SignedFunctional::new(vec![(Point::from([0.5, 0.5]), -0.1)]);
        assert!(!functional_is_positive(&neg, &k));
        assert!(functional_is_positive(&SignedFunctional::new(vec![]), &k));
    }
}
