//! Dense two-phase primal simplex.
//!
//! Programs have the form `minimize c·x subject to Ax ≥ b, x ≥ 0`. Every
//! optimal solution carries one dual multiplier per row (`y ≥ 0`,
//! `yᵀA ≤ cᵀ`), read off the reduced costs of the surplus columns in the
//! final tableau. Infeasible programs carry a Farkas vector from phase one,
//! unbounded programs a recession ray.

use log::{debug, trace};

use crate::error::{Error, Result};

/// `minimize cost·x` subject to `matrix·x ≥ rhs`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub cost: Vec<f64>,
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn new(cost: Vec<f64>) -> Self {
        Self {
            cost,
            matrix: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// Appends the row `coeffs·x ≥ rhs` and returns its index.
    pub fn add_row(&mut self, coeffs: Vec<f64>, rhs: f64) -> usize {
        self.matrix.push(coeffs);
        self.rhs.push(rhs);
        self.matrix.len() - 1
    }

    /// Appends `coeffs·x = rhs` as a pair of opposite inequalities.
    pub fn add_equality(&mut self, coeffs: Vec<f64>, rhs: f64) {
        let neg = coeffs.iter().map(|a| -a).collect();
        self.add_row(coeffs, rhs);
        self.add_row(neg, -rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.rhs.len() != self.matrix.len() {
            return Err(Error::MalformedProgram(format!(
                "{} rows but {} right-hand sides",
                self.matrix.len(),
                self.rhs.len()
            )));
        }
        let n = self.num_vars();
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedProgram(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
        }
        let finite = self
            .cost
            .iter()
            .chain(self.rhs.iter())
            .chain(self.matrix.iter().flatten());
        if finite.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedProgram("non-finite entry".into()));
        }
        Ok(())
    }

    /// Row activities `A x`.
    pub fn activities(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.iter().map(|row| dot(row, x)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal point (the last phase-one point when infeasible).
    pub x: Vec<f64>,
    pub objective: f64,
    /// Dual multipliers, one per row. Meaningful only when optimal.
    pub y: Vec<f64>,
    /// For unbounded programs: `d ≥ 0`, `A d ≥ 0`, `c·d < 0`.
    pub ray: Option<Vec<f64>>,
    /// For infeasible programs: `y ≥ 0`, `yᵀA ≤ 0`, `y·b > 0`.
    pub farkas: Option<Vec<f64>>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Dual objective `y·b`.
    pub fn dual_objective(&self, p: &LinearProgram) -> f64 {
        dot(&self.y, &p.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Smallest admissible pivot magnitude.
    pub pivot_tol: f64,
    /// Phase-one objective below which the program counts as feasible.
    pub feas_tol: f64,
    /// Reduced costs above `-opt_tol` are treated as nonnegative.
    pub opt_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            pivot_tol: 1e-10,
            feas_tol: 1e-9,
            opt_tol: 1e-11,
        }
    }
}

/// Solves `p` with default options.
pub fn solve_lp(p: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(p, &SolverOptions::default())
}

pub fn solve_lp_with(p: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution> {
    p.validate()?;
    Tableau::build(p, *opts).solve()
}

/// `|c·x − y·b|` for an optimal solution.
pub fn duality_gap(sol: &LpSolution, p: &LinearProgram) -> Result<f64> {
    if !sol.is_optimal() {
        return Err(Error::NotOptimal);
    }
    Ok((dot(&p.cost, &sol.x) - sol.dual_objective(p)).abs())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

/// Columns: `n` structural, `m` surplus (one per row), then artificials.
/// Row `i` is stored as `aᵢx − sᵢ = bᵢ`, negated when `bᵢ ≤ 0` so that the
/// right-hand side is nonnegative and `sᵢ` can start in the basis.
struct Tableau {
    n: usize,
    m: usize,
    cols: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry holds the negated objective value.
    reduced: Vec<f64>,
    cost: Vec<f64>,
    opts: SolverOptions,
    iterations: usize,
    bnorm: f64,
}

impl Tableau {
    fn build(p: &LinearProgram, opts: SolverOptions) -> Self {
        let n = p.num_vars();
        let m = p.num_rows();
        let needs_art: Vec<bool> = p.rhs.iter().map(|&b| b > 0.0).collect();
        let n_art = needs_art.iter().filter(|&&a| a).count();
        let cols = n + m + n_art;
        let width = cols + 1;
        let mut data = vec![0.0; m * width];
        let mut basis = vec![0; m];
        let mut art = n + m;
        for i in 0..m {
            let row = &mut data[i * width..(i + 1) * width];
            let sign = if needs_art[i] { 1.0 } else { -1.0 };
            for (r, a) in row.iter_mut().zip(&p.matrix[i]) {
                *r = sign * a;
            }
            row[n + i] = -sign;
            row[cols] = sign * p.rhs[i];
            if needs_art[i] {
                row[art] = 1.0;
                basis[i] = art;
                art += 1;
            } else {
                basis[i] = n + i;
            }
        }
        let bnorm = p.rhs.iter().fold(1.0_f64, |acc, b| acc.max(b.abs()));
        Self {
            n,
            m,
            cols,
            data,
            basis,
            reduced: vec![0.0; width],
            cost: p.cost.clone(),
            opts,
            iterations: 0,
            bnorm,
        }
    }

    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width() + j]
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n + self.m
    }

    fn objective(&self) -> f64 {
        -self.reduced[self.cols]
    }

    /// Recomputes reduced costs for column costs `c`.
    fn price(&mut self, c: &[f64]) {
        let w = self.width();
        let mut red = vec![0.0; w];
        red[..self.cols].copy_from_slice(&c[..self.cols]);
        for i in 0..self.m {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                let row = &self.data[i * w..(i + 1) * w];
                for (r, a) in red.iter_mut().zip(row) {
                    *r -= cb * a;
                }
            }
        }
        self.reduced = red;
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width();
        let piv = self.data[r * w + e];
        for j in 0..w {
            self.data[r * w + j] /= piv;
        }
        self.data[r * w + e] = 1.0;
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + e];
            if factor != 0.0 {
                let row = &mut self.data[i * w..(i + 1) * w];
                for (a, p) in row.iter_mut().zip(&pivot_row) {
                    *a -= factor * p;
                }
                row[e] = 0.0;
            }
        }
        let factor = self.reduced[e];
        if factor != 0.0 {
            for (d, p) in self.reduced.iter_mut().zip(&pivot_row) {
                *d -= factor * p;
            }
            self.reduced[e] = 0.0;
        }
        self.basis[r] = e;
        self.iterations += 1;
    }

    fn entering(&self, bland: bool, allowed: &dyn Fn(usize) -> bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols {
            let d = self.reduced[j];
            if d >= -self.opts.opt_tol || !allowed(j) {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        best.map(|(j, _)| j)
    }

    fn leaving(&self, e: usize, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, e);
            if a <= self.opts.pivot_tol {
                continue;
            }
            let ratio = self.at(i, self.cols).max(0.0) / a;
            best = match best {
                None => Some((i, ratio, a)),
                Some((bi, br, ba)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                    let better = if tie {
                        if bland {
                            self.basis[i] < self.basis[bi]
                        } else {
                            a > ba
                        }
                    } else {
                        ratio < br
                    };
                    if better {
                        Some((i, ratio, a))
                    } else {
                        Some((bi, br, ba))
                    }
                }
            };
        }
        best.map(|(i, _, _)| i)
    }

    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<PhaseEnd> {
        let stall_limit = 3 * (self.m + self.cols);
        let max_iter = 50 * (self.m + self.cols) + 1000;
        let mut bland = false;
        let mut stall = 0;
        let start = self.iterations;
        loop {
            if self.iterations - start > max_iter {
                return Err(Error::NumericalBreakdown {
                    iterations: self.iterations,
                });
            }
            let Some(e) = self.entering(bland, allowed) else {
                return Ok(PhaseEnd::Optimal);
            };
            let Some(r) = self.leaving(e, bland) else {
                return Ok(PhaseEnd::Unbounded(e));
            };
            let before = self.objective();
            trace!(
                "pivot {}: enter {e} leave {} (row {r}), objective {before:.12e}",
                self.iterations,
                self.basis[r]
            );
            self.pivot(r, e);
            if before - self.objective() > 1e-13 * (1.0 + before.abs()) {
                stall = 0;
            } else {
                stall += 1;
                if !bland && stall > stall_limit {
                    debug!("no progress for {stall} pivots, switching to Bland's rule");
                    bland = true;
                }
            }
        }
    }

    fn surplus_reduced_costs(&self) -> Vec<f64> {
        (0..self.m).map(|i| self.reduced[self.n + i]).collect()
    }

    fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for i in 0..self.m {
            let b = self.basis[i];
            if b < self.n {
                x[b] = self.at(i, self.cols);
            }
        }
        x
    }

    /// Pivots zero-level artificials out of the basis where possible. Rows in
    /// which every non-artificial entry vanishes are redundant and kept.
    fn drive_out_artificials(&mut self) {
        for i in 0..self.m {
            if !self.is_artificial(self.basis[i]) {
                continue;
            }
            let candidate = (0..self.n + self.m)
                .filter(|&j| self.at(i, j).abs() > self.opts.pivot_tol)
                .max_by(|&a, &b| self.at(i, a).abs().total_cmp(&self.at(i, b).abs()));
            if let Some(j) = candidate {
                self.pivot(i, j);
            }
        }
    }

    fn solve(mut self) -> Result<LpSolution> {
        let n_art = self.cols - self.n - self.m;
        if n_art > 0 {
            let mut c1 = vec![0.0; self.cols];
            for c in c1.iter_mut().skip(self.n + self.m) {
                *c = 1.0;
            }
            self.price(&c1);
            match self.run(&|_| true)? {
                PhaseEnd::Optimal => {}
                PhaseEnd::Unbounded(_) => {
                    return Err(Error::SolverFailure(
                        "phase one reported unboundedness".into(),
                    ));
                }
            }
            let infeas = self.objective();
            debug!(
                "phase one done after {} pivots, infeasibility {infeas:.3e}",
                self.iterations
            );
            if infeas > self.opts.feas_tol * self.bnorm {
                let farkas = self.surplus_reduced_costs();
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    x: self.primal(),
                    objective: f64::NAN,
                    y: vec![0.0; self.m],
                    ray: None,
                    farkas: Some(farkas),
                    iterations: self.iterations,
                });
            }
            self.drive_out_artificials();
        }

        let mut c2 = vec![0.0; self.cols];
        c2[..self.n].copy_from_slice(&self.cost);
        self.price(&c2);
        let first_art = self.n + self.m;
        let end = self.run(&|j| j < first_art)?;
        let x = self.primal();
        let objective = dot(&self.cost, &x);
        debug!(
            "phase two done after {} pivots, objective {objective:.12e}",
            self.iterations
        );
        match end {
            PhaseEnd::Optimal => Ok(LpSolution {
                status: LpStatus::Optimal,
                x,
                objective,
                y: self.surplus_reduced_costs(),
                ray: None,
                farkas: None,
                iterations: self.iterations,
            }),
            PhaseEnd::Unbounded(e) => {
                let mut ray = vec![0.0; self.n];
                if e < self.n {
                    ray[e] = 1.0;
                }
                for i in 0..self.m {
                    let b = self.basis[i];
                    if b < self.n {
                        ray[b] = -self.at(i, e);
                    }
                }
                Ok(LpSolution {
                    status: LpStatus::Unbounded,
                    x,
                    objective: f64::NEG_INFINITY,
                    y: vec![0.0; self.m],
                    ray: Some(ray),
                    farkas: None,
                    iterations: self.iterations,
                })
            }
        }
    }
}
