//! Generators for standard state spaces.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::effects::{AffineFunction, TwoOutcomeMeasurement};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polytope};

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "dimension",
            value: 0.0,
        });
    }
    Ok(())
}

/// `conv{0, e₁, …, e_d}`.
pub fn simplex(d: usize, tol: f64) -> Result<Polytope> {
    check_dim(d)?;
    let mut pts = vec![vec![0.0; d]];
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        pts.push(e);
    }
    Polytope::from_coords(&pts, tol)
}

/// `[0, 1]^d`.
pub fn hypercube(d: usize, tol: f64) -> Result<Polytope> {
    check_dim(d)?;
    let pts: Vec<Vec<f64>> = (0..1usize << d)
        .map(|mask| (0..d).map(|i| ((mask >> i) & 1) as f64).collect())
        .collect();
    Polytope::from_coords(&pts, tol)
}

/// `conv{±e₁, …, ±e_d}`.
pub fn crosspolytope(d: usize, tol: f64) -> Result<Polytope> {
    check_dim(d)?;
    let mut pts = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; d];
            e[i] = s;
            pts.push(e);
        }
    }
    Polytope::from_coords(&pts, tol)
}

/// Regular `n`-gon with vertices at angles `2πk/n` on the unit circle.
pub fn ngon(n: usize, tol: f64) -> Result<Polytope> {
    if n < 3 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    Polytope::from_coords(&pts, tol)
}

/// `count` points drawn uniformly on the unit sphere in dimension `d`
/// (normalized standard Gaussians from a ChaCha8 stream seeded with `seed`),
/// then pruned to their extreme points.
pub fn random(d: usize, count: usize, seed: u64, tol: f64) -> Result<Polytope> {
    check_dim(d)?;
    if count == 0 {
        return Err(Error::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = (0..count)
        .map(|_| {
            let g: Vec<f64> = (0..d)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let len = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            Point(g.into_iter().map(|v| v / len).collect())
        })
        .collect();
    Polytope::build(&pts, tol)
}

/// `f₁ = (1 + x)/2`, `f₂ = (1 + y)/2` in the first two ambient coordinates.
/// Valid effects whenever `|x|, |y| ≤ 1` on the state space.
pub fn axes_pair(k: &Polytope) -> Result<(TwoOutcomeMeasurement, TwoOutcomeMeasurement)> {
    let n = k.ambient_dim();
    if n < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: n,
        });
    }
    let axis = |i: usize| {
        let mut a = vec![0.0; n];
        a[i] = 0.5;
        AffineFunction::from_ambient(k, &a, 0.5)
            .and_then(|f| TwoOutcomeMeasurement::from_function(f, k))
    };
    Ok((axis(0)?, axis(1)?))
}
