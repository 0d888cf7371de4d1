//! Reference implementations used to cross-check the library.
//!
//! Nothing here calls the library's solver or facet code: linear programs are
//! solved by enumerating basic solutions and the degree is located by
//! bisection over an exact vertex-enumeration feasibility test.

#![allow(dead_code)]

use gptcompat::{shapes, AffineFunction, Polytope, TwoOutcomeMeasurement, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. `None` when a pivot falls below `1e-12`.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let factor = a[r][col] / a[col][col];
                if factor != 0.0 {
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                        *x -= factor * p;
                    }
                    b[r] -= factor * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Every `k`-subset of `0..n`, lexicographically.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Minimizes `c·x` over `A x ≥ b, x ≥ 0` by checking every basic solution.
/// Assumes the program is bounded; `None` when infeasible.
pub fn lp_by_enumeration(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<(f64, Vec<f64>)> {
    let n = c.len();
    let m = a.len();
    let row = |i: usize| -> (Vec<f64>, f64) {
        if i < m {
            (a[i].clone(), b[i])
        } else {
            let mut e = vec![0.0; n];
            e[i - m] = 1.0;
            (e, 0.0)
        }
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for set in subsets(m + n, n) {
        let (mat, rhs): (Vec<_>, Vec<_>) = set.iter().map(|&i| row(i)).unzip();
        let Some(x) = solve_square(mat, rhs) else {
            continue;
        };
        let feasible = x.iter().all(|&v| v >= -1e-9)
            && a.iter().zip(b).all(|(r, &bi)| dot(r, &x) >= bi - 1e-9);
        if feasible {
            let obj = dot(c, &x);
            if best.as_ref().is_none_or(|(o, _)| obj < *o) {
                best = Some((obj, x));
            }
        }
    }
    best
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Ambient vertex coordinates of `k`.
pub fn coords(k: &Polytope) -> Vec<Vec<f64>> {
    k.vertices().iter().map(|p| p.coords().to_vec()).collect()
}

/// Whether some `q` with `p(v) = q·[v; 1]` satisfies `0 ≤ p ≤ e₁, e₂` and
/// `p ≥ e₁ + e₂ − 1` at every vertex, given vertex values of `e₁, e₂` and
/// vertices in affinely independent coordinates.
///
/// The vertex rows span `ℝ^{d+1}`, so the feasible set is pointed and is
/// nonempty exactly when one of its basic points is feasible.
pub fn p_feasible(verts: &[Vec<f64>], e1: &[f64], e2: &[f64], tol: f64) -> bool {
    let d = verts[0].len();
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (i, v) in verts.iter().enumerate() {
        let mut h = v.clone();
        h.push(1.0);
        let neg: Vec<f64> = h.iter().map(|x| -x).collect();
        rows.push((h.clone(), 0.0));
        rows.push((neg.clone(), -e1[i]));
        rows.push((neg, -e2[i]));
        rows.push((h, e1[i] + e2[i] - 1.0));
    }
    for set in subsets(rows.len(), d + 1) {
        let (mat, rhs): (Vec<_>, Vec<_>) = set.iter().map(|&i| rows[i].clone()).unzip();
        let Some(q) = solve_square(mat, rhs) else {
            continue;
        };
        if rows.iter().all(|(r, b)| dot(r, &q) >= b - tol) {
            return true;
        }
    }
    false
}

/// Degree of compatibility of effects given by their vertex values, located
/// by bisection on `λ` over [`p_feasible`].
pub fn degree_by_bisection(verts: &[Vec<f64>], f1: &[f64], f2: &[f64]) -> f64 {
    let mix =
        |f: &[f64], l: f64| -> Vec<f64> { f.iter().map(|x| l * x + (1.0 - l) * 0.5).collect() };
    let feasible = |l: f64| p_feasible(verts, &mix(f1, l), &mix(f2, l), 1e-11);
    if feasible(1.0) {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..45 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Random convex combination of the vertices of `k` (ambient coordinates).
pub fn random_point(k: &Polytope, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..k.num_vertices())
        .map(|_| -rng.random::<f64>().ln())
        .collect();
    let total: f64 = w.iter().sum();
    let mut x = vec![0.0; k.ambient_dim()];
    for (wi, v) in w.iter().zip(k.vertices()) {
        for (xj, vj) in x.iter_mut().zip(v.coords()) {
            *xj += wi / total * vj;
        }
    }
    x
}

/// Random effect: a random linear functional rescaled so that its vertex
/// values span `[lo, hi] ⊂ [0, 1]`. With `sharp` the range is all of `[0, 1]`.
pub fn random_effect(k: &Polytope, rng: &mut ChaCha8Rng, sharp: bool) -> AffineFunction {
    let n = k.ambient_dim();
    let dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let s: Vec<f64> = k.vertices().iter().map(|v| dot(&dir, v.coords())).collect();
    let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if sharp {
        (0.0, 1.0)
    } else {
        let a: f64 = rng.random();
        let b: f64 = rng.random();
        (a.min(b), a.max(b))
    };
    let scale = if smax - smin > 1e-12 {
        (hi - lo) / (smax - smin)
    } else {
        0.0
    };
    let linear: Vec<f64> = dir.iter().map(|x| x * scale).collect();
    AffineFunction::from_ambient(k, &linear, lo - scale * smin).unwrap()
}

pub fn measurement(k: &Polytope, f: AffineFunction) -> TwoOutcomeMeasurement {
    TwoOutcomeMeasurement::from_function(f, k).unwrap()
}

/// Random pair of measurements; roughly half the pairs are sharp.
pub fn random_pair(
    k: &Polytope,
    rng: &mut ChaCha8Rng,
) -> (TwoOutcomeMeasurement, TwoOutcomeMeasurement) {
    let sharp = rng.random_bool(0.5);
    let f1 = random_effect(k, rng, sharp);
    let f2 = random_effect(k, rng, sharp);
    (measurement(k, f1), measurement(k, f2))
}

/// Simplex of dimension `d` with Gaussian vertices in `ℝ^ambient`.
pub fn random_simplex(d: usize, ambient: usize, rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let pts: Vec<Vec<f64>> = (0..=d)
            .map(|_| (0..ambient).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        if let Ok(k) = Polytope::from_coords(&pts, DEFAULT_TOL) {
            if k.is_simplex() && k.intrinsic_dim() == d {
                return k;
            }
        }
    }
}

/// Random non-simplex polytope of dimension `d` with between `d + 2` and
/// `d + 6` vertices on the unit sphere.
pub fn random_nonsimplex(d: usize, rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let count = rng.random_range(d + 2..=d + 6);
        let k = shapes::random(d, count, rng.random(), DEFAULT_TOL).unwrap();
        if !k.is_simplex() && k.intrinsic_dim() == d {
            return k;
        }
    }
}

/// Named polytopes covering every generator.
pub fn corpus() -> Vec<(String, Polytope)> {
    let t = DEFAULT_TOL;
    let mut out: Vec<(String, Polytope)> = Vec::new();
    for d in 1..=4 {
        out.push((format!("simplex:{d}"), shapes::simplex(d, t).unwrap()));
    }
    for d in 2..=3 {
        out.push((format!("hypercube:{d}"), shapes::hypercube(d, t).unwrap()));
        out.push((
            format!("crosspolytope:{d}"),
            shapes::crosspolytope(d, t).unwrap(),
        ));
    }
    for n in 3..=12 {
        out.push((format!("ngon:{n}"), shapes::ngon(n, t).unwrap()));
    }
    for (d, count, seed) in [(2, 7, 1), (3, 9, 2), (3, 12, 3), (4, 10, 4)] {
        out.push((
            format!("random:{d}:{count}:{seed}"),
            shapes::random(d, count, seed, t).unwrap(),
        ));
    }
    out
}

/// Whether `x` is a convex combination of `verts`, decided by enumerating
/// basic solutions of `Σwᵢvᵢ = x, Σwᵢ = 1, w ≥ 0`.
pub fn in_convex_hull(verts: &[Vec<f64>], x: &[f64], tol: f64) -> bool {
    let n = verts.len();
    let dim = x.len();
    let mut eqs: Vec<(Vec<f64>, f64)> = (0..dim)
        .map(|j| (verts.iter().map(|v| v[j]).collect(), x[j]))
        .collect();
    eqs.push((vec![1.0; n], 1.0));
    // Basic solutions use at most `dim + 1` positive weights drawn from an
    // independent set of columns; try every support of that size.
    let m = eqs.len();
    let size = m.min(n);
    for support in subsets(n, size) {
        for rows in subsets(m, size) {
            let mat: Vec<Vec<f64>> = rows
                .iter()
                .map(|&r| support.iter().map(|&c| eqs[r].0[c]).collect())
                .collect();
            let rhs: Vec<f64> = rows.iter().map(|&r| eqs[r].1).collect();
            let Some(w) = solve_square(mat, rhs) else {
                continue;
            };
            if w.iter().any(|&wi| wi < -tol) {
                continue;
            }
            let ok = eqs.iter().all(|(row, b)| {
                let s: f64 = support.iter().zip(&w).map(|(&c, wi)| row[c] * wi).sum();
                (s - b).abs() <= tol
            });
            if ok {
                return true;
            }
        }
    }
    false
}
