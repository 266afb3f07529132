//! Dense linear programming with verifiable certificates.
//!
//! A two-phase revised simplex over general row operators and variable
//! bounds. Small by design: every problem in this crate has at most a few
//! hundred rows, and what matters is not speed but that each answer ships
//! with a certificate a third party can re-check from the problem data
//! alone. Optimal solutions carry row duals; infeasible ones carry a Farkas
//! ray. [`verify`] re-derives both checks without trusting solver state.
//!
//! Determinism: Bland's rule everywhere (lowest eligible index enters,
//! lowest basic index breaks ratio ties) and a fixed refactorization
//! schedule, so identical inputs take identical pivot paths.

use thiserror::Error;

/// Feasibility and certificate tolerance.
pub const FEAS_TOL: f64 = 1e-9;
/// Acceptable relative primal-dual objective gap at optimality.
pub const GAP_TOL: f64 = 1e-7;
/// Hard cap on the number of variables a problem may declare.
pub const MAX_VARIABLES: usize = 5000;

const PIVOT_TOL: f64 = 1e-9;
const RC_TOL: f64 = 1e-10;
const REFACTOR_PERIOD: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RowOp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("malformed problem: {0}")]
    Malformed(String),
    #[error("too many variables: {got} exceeds cap {max}")]
    TooManyVariables { got: usize, max: usize },
    #[error("iteration limit {limit} reached after {phase} phase")]
    IterationLimit { limit: usize, phase: &'static str },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub feas_tol: f64,
    pub iter_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            feas_tol: FEAS_TOL,
            iter_limit: 50_000,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `x`, `objective`, and `duals` are meaningful for
/// `Optimal`; `farkas` holds an infeasibility ray (one multiplier per row)
/// for `Infeasible`; `Unbounded` reports the status alone.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub duals: Vec<f64>,
    pub farkas: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    sense: Sense,
    objective: Vec<f64>,
    lower: Vec<Option<f64>>,
    upper: Vec<Option<f64>>,
    rows: Vec<(RowOp, Vec<f64>, f64)>,
}

impl LpProblem {
    /// A problem over `num_vars` variables, each defaulting to `x >= 0`,
    /// with zero objective.
    pub fn new(sense: Sense, num_vars: usize) -> Self {
        LpProblem {
            sense,
            objective: vec![0.0; num_vars],
            lower: vec![Some(0.0); num_vars],
            upper: vec![None; num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    /// `None` means unbounded on that side.
    pub fn set_bounds(&mut self, var: usize, lower: Option<f64>, upper: Option<f64>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    /// Appends `coeffs . x (op) rhs`; returns the row index.
    pub fn add_row(&mut self, op: RowOp, coeffs: Vec<f64>, rhs: f64) -> usize {
        assert_eq!(coeffs.len(), self.num_vars(), "row arity mismatch");
        self.rows.push((op, coeffs, rhs));
        self.rows.len() - 1
    }

    pub fn row(&self, i: usize) -> (&RowOp, &[f64], f64) {
        let (op, coeffs, rhs) = &self.rows[i];
        (op, coeffs, *rhs)
    }

    pub fn objective_coeffs(&self) -> &[f64] {
        &self.objective
    }

    pub fn bounds(&self, var: usize) -> (Option<f64>, Option<f64>) {
        (self.lower[var], self.upper[var])
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        self.solve_with(&SolveOptions::default())
    }

    pub fn solve_with(&self, options: &SolveOptions) -> Result<LpSolution, LpError> {
        self.validate()?;
        let raw = Simplex::build(self, options)?.run()?;
        Ok(self.finish(raw))
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if n > MAX_VARIABLES {
            return Err(LpError::TooManyVariables {
                got: n,
                max: MAX_VARIABLES,
            });
        }
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(LpError::Malformed(format!("objective[{j}] not finite")));
            }
        }
        for j in 0..n {
            if let Some(l) = self.lower[j] {
                if !l.is_finite() {
                    return Err(LpError::Malformed(format!("lower[{j}] not finite")));
                }
            }
            if let Some(u) = self.upper[j] {
                if !u.is_finite() {
                    return Err(LpError::Malformed(format!("upper[{j}] not finite")));
                }
            }
            if let (Some(l), Some(u)) = (self.lower[j], self.upper[j]) {
                if l > u {
                    return Err(LpError::Malformed(format!(
                        "bounds crossed on variable {j}: [{l}, {u}]"
                    )));
                }
            }
        }
        for (i, (_, coeffs, rhs)) in self.rows.iter().enumerate() {
            if coeffs.len() != n {
                return Err(LpError::Malformed(format!("row {i} arity mismatch")));
            }
            if !rhs.is_finite() || coeffs.iter().any(|a| !a.is_finite()) {
                return Err(LpError::Malformed(format!("row {i} not finite")));
            }
        }
        Ok(())
    }

    /// Plain-text dump of the full problem for debugging failed instances.
    pub fn dump(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        };
        let _ = writeln!(out, "{sense} {:?}", self.objective);
        for (op, coeffs, rhs) in &self.rows {
            let sym = match op {
                RowOp::Le => "<=",
                RowOp::Eq => "==",
                RowOp::Ge => ">=",
            };
            let _ = writeln!(out, "  {coeffs:?} {sym} {rhs}");
        }
        for j in 0..self.num_vars() {
            let _ = writeln!(out, "  x{j} in [{:?}, {:?}]", self.lower[j], self.upper[j]);
        }
        out
    }
}

/// How a caller variable maps onto the internal nonnegative columns.
#[derive(Clone, Copy, Debug)]
enum VarMap {
    /// `x = lower + z[col]`
    Shifted { col: usize, lower: f64 },
    /// `x = upper - z[col]` (upper bound only)
    Mirrored { col: usize, upper: f64 },
    /// `x = z[pos] - z[neg]` (free)
    Split { pos: usize, neg: usize },
}

struct Simplex {
    m: usize,
    num_cols: usize,    // structural + slack columns (artificials come after)
    cols: Vec<Vec<f64>>, // column-major constraint matrix, length m each
    b: Vec<f64>,        // rhs, normalized nonnegative
    cost: Vec<f64>,     // phase-2 cost per internal column (minimization)
    var_map: Vec<VarMap>,
    row_flip: Vec<f64>,      // +-1 applied to each internal row
    caller_rows: usize,      // rows 0..caller_rows mirror the problem rows
    sense_sign: f64,         // +1 minimize, -1 maximize
    feas_tol: f64,
    iter_limit: usize,
    // mutable solver state
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<f64>, // m x m row-major
    xb: Vec<f64>,
}

impl Simplex {
    fn build(p: &LpProblem, options: &SolveOptions) -> Result<Simplex, LpError> {
        let n = p.num_vars();
        let sense_sign = match p.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };

        // Variable transforms onto z >= 0 columns.
        let mut var_map = Vec::with_capacity(n);
        let mut cost: Vec<f64> = Vec::new();
        let mut upper_rows: Vec<(usize, f64)> = Vec::new(); // (col, width)
        for j in 0..n {
            let c = sense_sign * p.objective[j];
            match (p.lower[j], p.upper[j]) {
                (Some(l), u) => {
                    let col = cost.len();
                    var_map.push(VarMap::Shifted { col, lower: l });
                    cost.push(c);
                    if let Some(u) = u {
                        upper_rows.push((col, u - l));
                    }
                }
                (None, Some(u)) => {
                    let col = cost.len();
                    var_map.push(VarMap::Mirrored { col, upper: u });
                    cost.push(-c);
                }
                (None, None) => {
                    let pos = cost.len();
                    var_map.push(VarMap::Split { pos, neg: pos + 1 });
                    cost.push(c);
                    cost.push(-c);
                }
            }
        }
        let structural = cost.len();

        // Assemble rows: caller rows first, then internal upper-bound rows.
        let caller_rows = p.num_rows();
        let m = caller_rows + upper_rows.len();
        let mut dense: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut ops: Vec<RowOp> = Vec::with_capacity(m);
        let mut b: Vec<f64> = Vec::with_capacity(m);
        for (op, coeffs, rhs) in &p.rows {
            let mut row = vec![0.0; structural];
            let mut shift = 0.0;
            for (j, &a) in coeffs.iter().enumerate() {
                match var_map[j] {
                    VarMap::Shifted { col, lower } => {
                        row[col] += a;
                        shift += a * lower;
                    }
                    VarMap::Mirrored { col, upper } => {
                        row[col] -= a;
                        shift += a * upper;
                    }
                    VarMap::Split { pos, neg } => {
                        row[pos] += a;
                        row[neg] -= a;
                    }
                }
            }
            dense.push(row);
            ops.push(*op);
            b.push(rhs - shift);
        }
        for &(col, width) in &upper_rows {
            let mut row = vec![0.0; structural];
            row[col] = 1.0;
            dense.push(row);
            ops.push(RowOp::Le);
            b.push(width);
        }

        // Slack columns, then rhs sign normalization.
        let mut num_cols = structural;
        let mut slack_of_row: Vec<Option<usize>> = vec![None; m];
        for i in 0..m {
            match ops[i] {
                RowOp::Le | RowOp::Ge => {
                    slack_of_row[i] = Some(num_cols);
                    num_cols += 1;
                }
                RowOp::Eq => {}
            }
        }
        let mut cols: Vec<Vec<f64>> = vec![vec![0.0; m]; num_cols];
        let mut row_flip = vec![1.0; m];
        for i in 0..m {
            if b[i] < 0.0 {
                row_flip[i] = -1.0;
                b[i] = -b[i];
                for a in dense[i].iter_mut() {
                    *a = -*a;
                }
            }
        }
        for i in 0..m {
            for j in 0..structural {
                cols[j][i] = dense[i][j];
            }
            if let Some(s) = slack_of_row[i] {
                let dir = match ops[i] {
                    RowOp::Le => 1.0,
                    RowOp::Ge => -1.0,
                    RowOp::Eq => unreachable!(),
                };
                cols[s][i] = row_flip[i] * dir;
            }
        }
        cost.resize(num_cols, 0.0);

        // Initial basis: slacks with +1 coefficient where available,
        // artificial columns elsewhere.
        let mut basis = Vec::with_capacity(m);
        let mut needs_artificial = Vec::new();
        for i in 0..m {
            match slack_of_row[i] {
                Some(s) if cols[s][i] > 0.0 => basis.push(s),
                _ => {
                    basis.push(usize::MAX); // patched below
                    needs_artificial.push(i);
                }
            }
        }
        for &i in &needs_artificial {
            let mut col = vec![0.0; m];
            col[i] = 1.0;
            cols.push(col);
            cost.push(0.0);
            basis[i] = cols.len() - 1;
        }

        let total = cols.len();
        let mut in_basis = vec![false; total];
        for &bi in &basis {
            in_basis[bi] = true;
        }

        Ok(Simplex {
            m,
            num_cols,
            cols,
            b,
            cost,
            var_map,
            row_flip,
            caller_rows,
            sense_sign,
            feas_tol: options.feas_tol,
            iter_limit: options.iter_limit,
            basis,
            in_basis,
            binv: Vec::new(),
            xb: Vec::new(),
        })
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        // Gauss-Jordan inversion of the basis matrix with partial pivoting.
        let mut work = vec![0.0; m * 2 * m];
        for i in 0..m {
            for (k, &bk) in self.basis.iter().enumerate() {
                work[i * 2 * m + k] = self.cols[bk][i];
            }
            work[i * 2 * m + m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = work[col * 2 * m + col].abs();
            for r in col + 1..m {
                let v = work[r * 2 * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-12 {
                return Err(LpError::Numerical("singular basis matrix".into()));
            }
            if piv != col {
                for k in 0..2 * m {
                    work.swap(col * 2 * m + k, piv * 2 * m + k);
                }
            }
            let d = work[col * 2 * m + col];
            for k in 0..2 * m {
                work[col * 2 * m + k] /= d;
            }
            for r in 0..m {
                if r != col {
                    let f = work[r * 2 * m + col];
                    if f != 0.0 {
                        for k in 0..2 * m {
                            work[r * 2 * m + k] -= f * work[col * 2 * m + k];
                        }
                    }
                }
            }
        }
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                self.binv[i * m + k] = work[i * 2 * m + m + k];
            }
        }
        self.xb = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| self.binv[i * m + k] * self.b[k])
                    .sum::<f64>()
                    .max(0.0)
            })
            .collect();
        Ok(())
    }

    /// Row duals `y = c_B B^{-1}` for the given per-column costs.
    fn price(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (k, &bk) in self.basis.iter().enumerate() {
            let cb = cost[bk];
            if cb != 0.0 {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi += cb * self.binv[k * m + i];
                }
            }
        }
        y
    }

    fn direction(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let col = &self.cols[j];
        (0..m)
            .map(|i| {
                let mut w = 0.0;
                for k in 0..m {
                    w += self.binv[i * m + k] * col[k];
                }
                w
            })
            .collect()
    }

    fn pivot(&mut self, r: usize, entering: usize, w: &[f64]) {
        let m = self.m;
        let wr = w[r];
        for k in 0..m {
            self.binv[r * m + k] /= wr;
        }
        self.xb[r] /= wr;
        let xr = self.xb[r];
        for i in 0..m {
            if i != r && w[i] != 0.0 {
                for k in 0..m {
                    let v = self.binv[r * m + k] * w[i];
                    self.binv[i * m + k] -= v;
                }
                self.xb[i] -= w[i] * xr;
            }
        }
        self.in_basis[self.basis[r]] = false;
        self.basis[r] = entering;
        self.in_basis[entering] = true;
    }

    /// Textbook minimum-ratio test: lowest basic index on ties. Together
    /// with lowest-index entering this is Bland's rule, which cannot cycle.
    fn ratio_bland(&self, w: &[f64]) -> Option<(usize, f64)> {
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..self.m {
            if w[i] > PIVOT_TOL {
                let t = self.xb[i].max(0.0) / w[i];
                match leave {
                    None => leave = Some((i, t)),
                    Some((li, lt)) => {
                        if t < lt - 1e-12 || (t <= lt + 1e-12 && self.basis[i] < self.basis[li]) {
                            leave = Some((i, t));
                        }
                    }
                }
            }
        }
        leave
    }

    /// Two-pass ratio test: relax the minimum ratio by feas_tol, then pick
    /// the admissible row with the largest pivot magnitude. Any transient
    /// bound violation is at most feas_tol per row and is rinsed out at the
    /// next refactor; the payoff is that the basis never absorbs a
    /// near-zero pivot merely because of a ratio tie.
    fn ratio_harris(&self, w: &[f64]) -> Option<(usize, f64)> {
        let mut theta_max = f64::INFINITY;
        let mut any = false;
        for i in 0..self.m {
            if w[i] > PIVOT_TOL {
                any = true;
                let t = (self.xb[i].max(0.0) + self.feas_tol) / w[i];
                if t < theta_max {
                    theta_max = t;
                }
            }
        }
        if !any {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            if w[i] > PIVOT_TOL {
                let t = self.xb[i].max(0.0) / w[i];
                if t <= theta_max {
                    let better = match best {
                        None => true,
                        Some((bi, _)) => {
                            w[i] > w[bi] || (w[i] == w[bi] && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, t));
                    }
                }
            }
        }
        best
    }

    /// Simplex over columns `0..active_cols` with costs `cost`. Entering
    /// rule: most negative reduced cost (ties to the lowest index), falling
    /// back to Bland's rule after a run of degenerate pivots so cycling is
    /// impossible; a nondegenerate step restores the fast rule. Both rules
    /// are index-deterministic, so pivot paths are reproducible.
    /// Returns `Ok(true)` at optimum, `Ok(false)` when unbounded.
    fn optimize(
        &mut self,
        cost: &[f64],
        active_cols: usize,
        phase: &'static str,
    ) -> Result<bool, LpError> {
        let stall_limit = 2 * self.m + 16;
        let mut stall = 0usize;
        let mut bland_mode = false;
        let mut since_refactor = 0usize;
        self.refactor()?;
        for _ in 0..self.iter_limit {
            if since_refactor >= REFACTOR_PERIOD {
                self.refactor()?;
                since_refactor = 0;
            }
            let y = self.price(cost);
            let mut entering: Option<(f64, usize)> = None;
            for j in 0..active_cols {
                if self.in_basis[j] {
                    continue;
                }
                let mut d = cost[j];
                for (i, &yi) in y.iter().enumerate() {
                    d -= yi * self.cols[j][i];
                }
                if d < -RC_TOL {
                    if bland_mode {
                        entering = Some((d, j));
                        break;
                    }
                    match entering {
                        Some((bd, _)) if d >= bd => {}
                        _ => entering = Some((d, j)),
                    }
                }
            }
            let Some((_, j)) = entering else {
                self.refactor()?;
                return Ok(true);
            };
            let w = self.direction(j);
            let leave = if bland_mode {
                self.ratio_bland(&w)
            } else {
                self.ratio_harris(&w)
            };
            let Some((r, step)) = leave else {
                return Ok(false);
            };
            self.pivot(r, j, &w);
            since_refactor += 1;
            if step <= 1e-12 {
                stall += 1;
                if stall >= stall_limit {
                    bland_mode = true;
                }
            } else {
                stall = 0;
                bland_mode = false;
            }
        }
        Err(LpError::IterationLimit {
            limit: self.iter_limit,
            phase,
        })
    }

    fn run(mut self) -> Result<LpSolution, LpError> {
        let total = self.cols.len();
        // Phase 1: minimize the sum of artificial variables.
        let mut phase1_cost = vec![0.0; total];
        for c in phase1_cost.iter_mut().skip(self.num_cols) {
            *c = 1.0;
        }
        let has_artificials = total > self.num_cols;
        if has_artificials {
            let optimal = self.optimize(&phase1_cost, total, "first")?;
            debug_assert!(optimal, "phase 1 is bounded below by zero");
            let infeas: f64 = (0..self.m)
                .filter(|&i| self.basis[i] >= self.num_cols)
                .map(|i| self.xb[i])
                .sum();
            if infeas > self.feas_tol {
                // Farkas ray from the phase-1 duals: y A <= 0 on every real
                // column while y b > 0.
                let y = self.price(&phase1_cost);
                let ray: Vec<f64> = (0..self.caller_rows)
                    .map(|i| self.row_flip[i] * y[i])
                    .collect();
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    x: Vec::new(),
                    objective: f64::NAN,
                    duals: Vec::new(),
                    farkas: ray,
                });
            }
            self.drive_out_artificials();
        } else {
            self.refactor()?;
        }

        // Phase 2 over the real columns only.
        let cost = self.cost.clone();
        let optimal = self.optimize(&cost, self.num_cols, "second")?;
        if !optimal {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: Vec::new(),
                objective: f64::NAN,
                duals: Vec::new(),
                farkas: Vec::new(),
            });
        }

        // Read out the caller-space solution.
        let mut z = vec![0.0; total];
        for (i, &bi) in self.basis.iter().enumerate() {
            z[bi] = self.xb[i].max(0.0);
        }
        let x: Vec<f64> = self
            .var_map
            .iter()
            .map(|vm| match *vm {
                VarMap::Shifted { col, lower } => lower + z[col],
                VarMap::Mirrored { col, upper } => upper - z[col],
                VarMap::Split { pos, neg } => z[pos] - z[neg],
            })
            .collect();
        let y = self.price(&cost);
        let duals: Vec<f64> = (0..self.caller_rows)
            .map(|i| self.sense_sign * self.row_flip[i] * y[i])
            .collect();
        Ok(LpSolution {
            status: LpStatus::Optimal,
            objective: 0.0, // patched by caller-space dot below
            x,
            duals,
            farkas: Vec::new(),
        })
    }

    /// Replace basic artificials (necessarily at level zero after a feasible
    /// phase 1) with real columns where possible; rows that admit none are
    /// linearly dependent and keep their zero artificial permanently.
    fn drive_out_artificials(&mut self) {
        let m = self.m;
        for r in 0..m {
            if self.basis[r] < self.num_cols {
                continue;
            }
            let mut entering = None;
            for j in 0..self.num_cols {
                if self.in_basis[j] {
                    continue;
                }
                let mut w = 0.0;
                for k in 0..m {
                    w += self.binv[r * m + k] * self.cols[j][k];
                }
                if w.abs() > PIVOT_TOL {
                    entering = Some(j);
                    break;
                }
            }
            if let Some(j) = entering {
                let w = self.direction(j);
                self.pivot(r, j, &w);
            }
        }
    }
}

/// Solve, then fill in the caller-space objective value.
impl LpProblem {
    fn finish(&self, mut sol: LpSolution) -> LpSolution {
        if sol.status == LpStatus::Optimal {
            sol.objective = dot(&self.objective, &sol.x);
        }
        sol
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve and re-verify in one step; this is the entry point the rest of the
/// crate uses.
pub fn solve_verified(p: &LpProblem, options: &SolveOptions) -> Result<LpSolution, LpError> {
    let sol = p.solve_with(options)?;
    verify(p, &sol, options.feas_tol)
        .map_err(|e| LpError::Numerical(format!("certificate failed re-verification: {e}")))?;
    Ok(sol)
}

/// Independent certificate check from problem data alone.
///
/// Optimal: primal feasibility, dual sign conditions, approximate
/// complementary slackness, and a relative primal-dual gap within
/// [`GAP_TOL`]. Infeasible: the Farkas ray aggregates the rows into an
/// inequality no point in the variable box can satisfy. Unbounded solutions
/// carry no certificate and pass vacuously.
pub fn verify(p: &LpProblem, sol: &LpSolution, feas_tol: f64) -> Result<(), String> {
    match sol.status {
        LpStatus::Optimal => verify_optimal(p, sol, feas_tol),
        LpStatus::Infeasible => verify_farkas(p, &sol.farkas, feas_tol),
        LpStatus::Unbounded => Ok(()),
    }
}

fn scale_of(p: &LpProblem) -> f64 {
    let mut s: f64 = 1.0;
    for (_, coeffs, rhs) in &p.rows {
        for &a in coeffs {
            s = s.max(a.abs());
        }
        s = s.max(rhs.abs());
    }
    for &c in &p.objective {
        s = s.max(c.abs());
    }
    s
}

pub fn verify_optimal(p: &LpProblem, sol: &LpSolution, feas_tol: f64) -> Result<(), String> {
    let n = p.num_vars();
    let x = &sol.x;
    let duals = &sol.duals;
    if x.len() != n || duals.len() != p.num_rows() {
        return Err("solution arity mismatch".into());
    }
    let scale = scale_of(p);
    let tol = feas_tol * scale * (n.max(1) as f64);

    // Primal feasibility.
    for j in 0..n {
        if let Some(l) = p.lower[j] {
            if x[j] < l - tol {
                return Err(format!("x[{j}] = {} below lower bound {l}", x[j]));
            }
        }
        if let Some(u) = p.upper[j] {
            if x[j] > u + tol {
                return Err(format!("x[{j}] = {} above upper bound {u}", x[j]));
            }
        }
    }
    for (i, (op, coeffs, rhs)) in p.rows.iter().enumerate() {
        let lhs = dot(coeffs, x);
        let viol = match op {
            RowOp::Le => lhs - rhs,
            RowOp::Ge => rhs - lhs,
            RowOp::Eq => (lhs - rhs).abs(),
        };
        if viol > tol {
            return Err(format!("row {i} violated by {viol:.3e}"));
        }
    }

    // Dual sign conditions. For minimization: Ge rows carry y >= 0, Le rows
    // y <= 0; maximization flips both.
    let pos_on_ge = match p.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    for (i, (op, _, _)) in p.rows.iter().enumerate() {
        let want = match op {
            RowOp::Ge => pos_on_ge,
            RowOp::Le => -pos_on_ge,
            RowOp::Eq => 0.0,
        };
        if want > 0.0 && duals[i] < -tol {
            return Err(format!("dual {i} sign: {} on a binding-side row", duals[i]));
        }
        if want < 0.0 && duals[i] > tol {
            return Err(format!("dual {i} sign: {}", duals[i]));
        }
    }

    // Complementary slackness.
    for (i, (_, coeffs, rhs)) in p.rows.iter().enumerate() {
        let slack = dot(coeffs, x) - rhs;
        if (duals[i] * slack).abs() > tol * (1.0 + duals[i].abs()) {
            return Err(format!(
                "complementary slackness on row {i}: dual {} slack {slack:.3e}",
                duals[i]
            ));
        }
    }

    // Reduced costs and the dual objective.
    let mut dual_obj: f64 = p
        .rows
        .iter()
        .enumerate()
        .map(|(i, (_, _, rhs))| duals[i] * rhs)
        .sum();
    for j in 0..n {
        let mut d = p.objective[j];
        for (i, (_, coeffs, _)) in p.rows.iter().enumerate() {
            d -= duals[i] * coeffs[j];
        }
        // Where the reduced cost is nonzero, the variable must sit at the
        // bound its sign selects, and that bound contributes to the dual
        // objective.
        let at_lower = d * match p.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        } > 0.0;
        if d.abs() <= tol {
            continue;
        }
        let bound = if at_lower { p.lower[j] } else { p.upper[j] };
        match bound {
            Some(v) => {
                if (x[j] - v).abs() > tol * (1.0 + v.abs()) {
                    return Err(format!(
                        "variable {j} has reduced cost {d:.3e} but sits at {} not {v}",
                        x[j]
                    ));
                }
                dual_obj += d * v;
            }
            None => {
                return Err(format!(
                    "variable {j} has reduced cost {d:.3e} toward an infinite bound"
                ));
            }
        }
    }
    let gap = (sol.objective - dual_obj).abs();
    if gap > GAP_TOL * (1.0 + sol.objective.abs()) {
        return Err(format!(
            "duality gap {gap:.3e} (primal {}, dual {dual_obj})",
            sol.objective
        ));
    }
    Ok(())
}

/// Check a Farkas ray: one multiplier per row, `>= 0` on Ge rows, `<= 0` on
/// Le rows, free on Eq rows, such that the aggregated inequality
/// `sum_i ray_i (a_i . x) >= sum_i ray_i b_i` fails for every `x` in the
/// variable box by a strict margin.
pub fn verify_farkas(p: &LpProblem, ray: &[f64], feas_tol: f64) -> Result<(), String> {
    if ray.len() != p.num_rows() {
        return Err("ray arity mismatch".into());
    }
    let scale = scale_of(p);
    let tol = feas_tol * scale;
    let maxmult = ray.iter().fold(0.0f64, |a, &r| a.max(r.abs()));
    if maxmult <= 0.0 {
        return Err("zero ray".into());
    }
    for (i, (op, _, _)) in p.rows.iter().enumerate() {
        match op {
            RowOp::Ge if ray[i] < -tol * maxmult => {
                return Err(format!("ray[{i}] = {} negative on a >= row", ray[i]));
            }
            RowOp::Le if ray[i] > tol * maxmult => {
                return Err(format!("ray[{i}] = {} positive on a <= row", ray[i]));
            }
            _ => {}
        }
    }
    // Aggregate coefficients and maximize over the box.
    let n = p.num_vars();
    let rhs: f64 = p
        .rows
        .iter()
        .enumerate()
        .map(|(i, (_, _, b))| ray[i] * b)
        .sum();
    let mut sup = 0.0;
    for j in 0..n {
        let mut d = 0.0;
        for (i, (_, coeffs, _)) in p.rows.iter().enumerate() {
            d += ray[i] * coeffs[j];
        }
        let term = if d > tol {
            match p.upper[j] {
                Some(u) => d * u,
                None => return Err(format!("aggregated coefficient {d:.3e} on unbounded x{j}")),
            }
        } else if d < -tol {
            match p.lower[j] {
                Some(l) => d * l,
                None => {
                    return Err(format!(
                        "aggregated coefficient {d:.3e} on lower-unbounded x{j}"
                    ))
                }
            }
        } else {
            // Treat as zero; a box endpoint can still contribute dust.
            match (p.lower[j], p.upper[j]) {
                (Some(l), Some(u)) => d.max(0.0) * u + d.min(0.0) * l,
                _ => 0.0,
            }
        };
        sup += term;
    }
    let margin = rhs - sup;
    if margin <= feas_tol * 0.5 * maxmult.max(1.0) {
        return Err(format!(
            "aggregated inequality not strictly violated: sup {sup:.6e} vs rhs {rhs:.6e}"
        ));
    }
    Ok(())
}
