//! Fixtures shared by the benchmarks.

use gptcompat::{shapes, Polytope, TwoOutcomeMeasurement, DEFAULT_TOL};

/// A state space with the axes pair `f₁ = (1 + x)/2`, `f₂ = (1 + y)/2`.
pub struct Instance {
    pub name: String,
    pub k: Polytope,
    pub m1: TwoOutcomeMeasurement,
    pub m2: TwoOutcomeMeasurement,
}

fn with_axes(name: String, k: Polytope) -> Instance {
    let (m1, m2) = shapes::axes_pair(&k).expect("axes pair is valid on the fixtures");
    Instance { name, k, m1, m2 }
}

/// Regular polygons with `n` vertices.
pub fn ngon(n: usize) -> Instance {
    with_axes(
        format!("ngon:{n}"),
        shapes::ngon(n, DEFAULT_TOL).expect("n ≥ 3"),
    )
}

/// The cross-polytope of dimension `d`.
pub fn crosspolytope(d: usize) -> Instance {
    with_axes(
        format!("crosspolytope:{d}"),
        shapes::crosspolytope(d, DEFAULT_TOL).expect("d ≥ 2"),
    )
}

/// `count` random vertices on the unit sphere in dimension `d`.
pub fn random(d: usize, count: usize, seed: u64) -> Instance {
    with_axes(
        format!("random:{d}:{count}:{seed}"),
        shapes::random(d, count, seed, DEFAULT_TOL).expect("d ≥ 2"),
    )
}
