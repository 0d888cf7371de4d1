//! Polytopal state spaces in V-representation.
//!
//! A [`Polytope`] keeps its extreme points in ambient coordinates together
//! with an orthonormal chart of their affine hull. Everything downstream
//! (facets, affine functions, LP rows) works in chart coordinates, so a flat
//! polytope embedded in a larger space behaves exactly like its
//! full-dimensional copy.

use std::collections::HashSet;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus};

/// Default equality threshold for geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Self(v.to_vec())
    }
}

/// Origin plus an orthonormal basis of the affine hull's direction space.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub origin: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl Chart {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection onto the chart, and the distance to the hull.
    pub fn project(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let diff: Vec<f64> = x.iter().zip(&self.origin).map(|(a, o)| a - o).collect();
        let local: Vec<f64> = self.basis.iter().map(|b| dot(b, &diff)).collect();
        let mut resid = diff;
        for (b, c) in self.basis.iter().zip(&local) {
            for (r, bi) in resid.iter_mut().zip(b) {
                *r -= c * bi;
            }
        }
        (local, norm(&resid))
    }

    pub fn lift(&self, local: &[f64]) -> Vec<f64> {
        let mut x = self.origin.clone();
        for (b, c) in self.basis.iter().zip(local) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += c * bi;
            }
        }
        x
    }

    /// Maps a chart-space direction to an ambient direction.
    pub fn lift_direction(&self, local: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.origin.len()];
        for (b, c) in self.basis.iter().zip(local) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += c * bi;
            }
        }
        x
    }

    /// Restricts an ambient direction to the chart (`Bᵀ`-transpose action).
    pub fn restrict_direction(&self, ambient: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| dot(b, ambient)).collect()
    }
}

/// A facet `{x ∈ K : normal·x = offset}` in chart coordinates. The normal
/// points inward and has unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub vertex_indices: Vec<usize>,
}

impl Facet {
    /// Value of the positive affine function `normal·y − offset`.
    pub fn slack(&self, local: &[f64]) -> f64 {
        dot(&self.normal, local) - self.offset
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertex_indices.binary_search(&v).is_ok()
    }
}

#[derive(Debug)]
pub struct Polytope {
    vertices: Vec<Point>,
    local: Vec<Vec<f64>>,
    chart: Chart,
    tol: f64,
    scale: f64,
    facets: OnceLock<Vec<Facet>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        let facets = OnceLock::new();
        if let Some(f) = self.facets.get() {
            let _ = facets.set(f.clone());
        }
        Self {
            vertices: self.vertices.clone(),
            local: self.local.clone(),
            chart: self.chart.clone(),
            tol: self.tol,
            scale: self.scale,
            facets,
        }
    }
}

impl Polytope {
    /// Builds the polytope spanned by `points`: duplicates are merged and
    /// points lying in the hull of the others are dropped. Input order of the
    /// surviving points is preserved.
    pub fn build(points: &[Point], tol: f64) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let dim = first.dim();
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if p.0.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse("non-finite coordinate".into()));
            }
        }

        let mut uniq: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if !uniq.iter().any(|q| dist(&p.0, &q.0) <= tol) {
                uniq.push(p.clone());
            }
        }

        let mut keep = vec![true; uniq.len()];
        if uniq.len() > 1 {
            for i in 0..uniq.len() {
                let others: Vec<&[f64]> = (0..uniq.len())
                    .filter(|&j| j != i && keep[j])
                    .map(|j| uniq[j].coords())
                    .collect();
                if in_hull(uniq[i].coords(), &others)? {
                    keep[i] = false;
                }
            }
        }
        let vertices: Vec<Point> = uniq
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(p, _)| p)
            .collect();

        let chart = fit_chart(&vertices, tol);
        let local: Vec<Vec<f64>> = vertices.iter().map(|v| chart.project(&v.0).0).collect();
        let scale = local.iter().map(|l| norm(l)).fold(0.0, f64::max);
        Ok(Self {
            vertices,
            local,
            chart,
            tol,
            scale,
            facets: OnceLock::new(),
        })
    }

    pub fn from_coords(points: &[Vec<f64>], tol: f64) -> Result<Self> {
        let pts: Vec<Point> = points.iter().cloned().map(Point).collect();
        Self::build(&pts, tol)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.chart.origin.len()
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Vertex coordinates in the chart.
    pub fn local_vertices(&self) -> &[Vec<f64>] {
        &self.local
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Tolerance for comparisons of coordinates, scaled with the polytope's
    /// extent.
    pub fn geom_tol(&self) -> f64 {
        self.tol * self.scale.max(1.0)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Chart coordinates of an ambient point (orthogonal projection).
    pub fn to_local(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.chart.project(x).0)
    }

    /// Chart coordinates if `x` lies in the affine hull within tolerance.
    pub fn to_local_in_hull(&self, x: &[f64]) -> Result<Option<Vec<f64>>> {
        self.check_dim(x)?;
        let (local, resid) = self.chart.project(x);
        Ok((resid <= self.geom_tol()).then_some(local))
    }

    pub fn to_ambient(&self, local: &[f64]) -> Point {
        Point(self.chart.lift(local))
    }

    /// The facets (maximal faces), computed on first use.
    pub fn facets(&self) -> Result<&[Facet]> {
        if self.intrinsic_dim() == 0 {
            return Err(Error::DegeneratePolytope);
        }
        Ok(self
            .facets
            .get_or_init(|| enumerate_facets(&self.local, self.geom_tol())))
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        let Some(local) = self.to_local_in_hull(x)? else {
            return Ok(false);
        };
        self.contains_local(&local)
    }

    pub fn contains_local(&self, local: &[f64]) -> Result<bool> {
        if self.intrinsic_dim() == 0 {
            return Ok(true);
        }
        let t = self.geom_tol();
        Ok(self.facets()?.iter().all(|f| f.slack(local) >= -t))
    }

    /// Vertex centroid, which lies in the relative interior.
    pub fn interior_point(&self) -> Point {
        Point(centroid(self.vertices.iter().map(|v| v.coords())))
    }

    pub fn local_centroid(&self) -> Vec<f64> {
        centroid(self.local.iter().map(|v| v.as_slice()))
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.intrinsic_dim() + 1
    }

    /// Splits the facets into those containing vertex `v` and those missing it.
    pub fn facets_at_vertex(&self, v: usize) -> Result<(Vec<Facet>, Vec<Facet>)> {
        if v >= self.num_vertices() {
            return Err(Error::InvalidVertex(v));
        }
        Ok(self
            .facets()?
            .iter()
            .cloned()
            .partition(|f| f.contains_vertex(v)))
    }

    /// Barycentric weights of `x` with respect to the vertices of a simplex.
    pub fn barycentric_coordinates(&self, x: &[f64]) -> Result<Vec<f64>> {
        if !self.is_simplex() {
            return Err(Error::NotASimplex);
        }
        if !self.contains(x)? {
            return Err(Error::OutsidePolytope);
        }
        let local = self.to_local(x)?;
        self.barycentric_local(&local)
    }

    pub(crate) fn barycentric_local(&self, local: &[f64]) -> Result<Vec<f64>> {
        let inv = self.barycentric_matrix()?;
        let mut rhs = local.to_vec();
        rhs.push(1.0);
        Ok((inv * DVector::from_vec(rhs)).iter().copied().collect())
    }

    /// Inverse of the `(d+1)×(d+1)` matrix whose columns are `[vᵢ; 1]`. Row `i`
    /// holds the coefficients of the barycentric function `bᵢ` on `[y; 1]`.
    pub(crate) fn barycentric_matrix(&self) -> Result<DMatrix<f64>> {
        if !self.is_simplex() {
            return Err(Error::NotASimplex);
        }
        let n = self.num_vertices();
        let d = self.intrinsic_dim();
        let m = DMatrix::from_fn(n, n, |r, c| if r < d { self.local[c][r] } else { 1.0 });
        m.try_inverse().ok_or(Error::NotASimplex)
    }
}

/// Greedy modified Gram–Schmidt on the differences to the first vertex,
/// always taking the direction with the largest remaining component.
fn fit_chart(vertices: &[Point], tol: f64) -> Chart {
    let origin = vertices[0].0.clone();
    let mut residuals: Vec<Vec<f64>> = vertices[1..]
        .iter()
        .map(|v| v.0.iter().zip(&origin).map(|(a, o)| a - o).collect())
        .collect();
    let extent = residuals.iter().map(|r| norm(r)).fold(0.0, f64::max);
    let cutoff = tol * extent.max(1.0);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while let Some((idx, len)) = residuals
        .iter()
        .map(|r| norm(r))
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
    {
        if len <= cutoff {
            break;
        }
        let dir: Vec<f64> = residuals[idx].iter().map(|v| v / len).collect();
        for r in residuals.iter_mut() {
            let c = dot(r, &dir);
            for (ri, di) in r.iter_mut().zip(&dir) {
                *ri -= c * di;
            }
        }
        basis.push(dir);
    }
    Chart { origin, basis }
}

/// Whether `p` is a convex combination of `others`: a phase-one feasibility
/// problem over the combination weights.
fn in_hull(p: &[f64], others: &[&[f64]]) -> Result<bool> {
    if others.is_empty() {
        return Ok(false);
    }
    let k = others.len();
    let mut lp = LinearProgram::new(vec![0.0; k]);
    for c in 0..p.len() {
        lp.add_equality(others.iter().map(|o| o[c]).collect(), p[c]);
    }
    lp.add_equality(vec![1.0; k], 1.0);
    let sol = solve_lp(&lp)?;
    Ok(sol.status == LpStatus::Optimal)
}

/// Brute force over subsets of `d` vertices: each affinely independent subset
/// spans a hyperplane, which is kept when all vertices lie on one side.
/// Duplicates are recognized by their vertex sets; each kept hyperplane is
/// refitted to all vertices it contains.
fn enumerate_facets(local: &[Vec<f64>], tol: f64) -> Vec<Facet> {
    let d = local[0].len();
    let n = local.len();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut facets = Vec::new();
    for subset in Combinations::new(n, d) {
        let Some(normal) = hyperplane_normal(local, &subset, tol) else {
            continue;
        };
        let offset = dot(&normal, &local[subset[0]]);
        let Some(facet) = classify(local, normal, offset, tol) else {
            continue;
        };
        if !seen.insert(facet.vertex_indices.clone()) {
            continue;
        }
        let refined = refit(local, &facet.vertex_indices)
            .and_then(|(nrm, off)| classify(local, nrm, off, tol))
            .filter(|f| f.vertex_indices == facet.vertex_indices)
            .unwrap_or(facet);
        facets.push(refined);
    }
    facets
}

/// Orients the hyperplane `normal·y = offset` so that all vertices are on the
/// nonnegative side, or returns `None` when it separates them.
fn classify(local: &[Vec<f64>], mut normal: Vec<f64>, mut offset: f64, tol: f64) -> Option<Facet> {
    let slacks: Vec<f64> = local.iter().map(|v| dot(&normal, v) - offset).collect();
    let below = slacks.iter().any(|&s| s < -tol);
    let above = slacks.iter().any(|&s| s > tol);
    if below && above || !below && !above {
        return None;
    }
    if below {
        normal.iter_mut().for_each(|v| *v = -*v);
        offset = -offset;
    }
    let vertex_indices: Vec<usize> = slacks
        .iter()
        .enumerate()
        .filter(|(_, s)| s.abs() <= tol)
        .map(|(i, _)| i)
        .collect();
    Some(Facet {
        normal,
        offset,
        vertex_indices,
    })
}

/// Unit normal of the hyperplane through the chosen `d` points in `d`-space,
/// via the generalized cross product of the `d − 1` difference vectors.
fn hyperplane_normal(local: &[Vec<f64>], subset: &[usize], tol: f64) -> Option<Vec<f64>> {
    let d = subset.len();
    let base = &local[subset[0]];
    let rows: Vec<Vec<f64>> = subset[1..]
        .iter()
        .map(|&i| local[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = vec![0.0; d];
    for (k, nk) in normal.iter_mut().enumerate() {
        let minor = DMatrix::from_fn(d - 1, d - 1, |r, c| rows[r][if c < k { c } else { c + 1 }]);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *nk = sign * if d == 1 { 1.0 } else { minor.determinant() };
    }
    let len = norm(&normal);
    let volume: f64 = rows.iter().map(|r| norm(r)).product();
    if len <= tol * volume.max(1.0) {
        return None;
    }
    Some(normal.into_iter().map(|v| v / len).collect())
}

/// Least-squares hyperplane through the given points: normal is the right
/// singular vector of smallest singular value of the centred point matrix.
fn refit(local: &[Vec<f64>], idx: &[usize]) -> Option<(Vec<f64>, f64)> {
    let d = local[0].len();
    if d == 1 {
        return None;
    }
    let c = centroid(idx.iter().map(|&i| local[i].as_slice()));
    let m = DMatrix::from_fn(idx.len().max(d), d, |r, k| {
        if r < idx.len() {
            local[idx[r]][k] - c[k]
        } else {
            0.0
        }
    });
    let svd = m.svd(false, true);
    let vt = svd.v_t?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    let normal: Vec<f64> = vt.row(imin).iter().copied().collect();
    let offset = dot(&normal, &c);
    Some((normal, offset))
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            idx: (0..k).collect(),
            done: k > n || k == 0,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn centroid<'a>(pts: impl Iterator<Item = &'a [f64]>) -> Vec<f64> {
    let mut sum: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for p in pts {
        if sum.is_empty() {
            sum = vec![0.0; p.len()];
        }
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
        count += 1;
    }
    sum.iter_mut().for_each(|s| *s /= count.max(1) as f64);
    sum
}
