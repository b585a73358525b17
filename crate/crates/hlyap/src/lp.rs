//! Self-contained dense linear-programming solver.
//!
//! Two-phase revised simplex over a dense LU factorization of the basis with
//! product-form eta updates in between refactorizations. Pricing is Dantzig
//! (most negative reduced cost) with Bland's anti-cycling rule engaged after
//! a run of degenerate pivots. Everything is deterministic: identical input
//! produces the identical pivot sequence.
//!
//! The builder API stores rows sparsely because the cone relaxations
//! generate large, very sparse constraint blocks; the simplex itself is
//! dense in the basis dimension, which matches the problem sizes this crate
//! produces (hundreds to a few thousand rows).

use crate::{Error, Result};

/// Linear program
/// `min cᵀx  s.t.  A_eq·x = b_eq,  A_ub·x ≤ b_ub,  l ≤ x ≤ u`.
///
/// Bounds may be infinite on either side; variables default to free.
#[derive(Debug, Clone)]
pub struct LpProblem {
    ncols: usize,
    c: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    eq_rows: Vec<(Vec<(usize, f64)>, f64)>,
    ub_rows: Vec<(Vec<(usize, f64)>, f64)>,
}

impl LpProblem {
    /// Problem with `n` free variables and zero objective.
    pub fn new(n: usize) -> Self {
        Self {
            ncols: n,
            c: vec![0.0; n],
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
            eq_rows: Vec::new(),
            ub_rows: Vec::new(),
        }
    }

    /// Appends a variable, returning its index.
    pub fn add_var(&mut self, lower: f64, upper: f64, obj: f64) -> usize {
        self.ncols += 1;
        self.c.push(obj);
        self.lower.push(lower);
        self.upper.push(upper);
        self.ncols - 1
    }

    pub fn num_vars(&self) -> usize {
        self.ncols
    }

    pub fn set_objective(&mut self, j: usize, coeff: f64) {
        self.c[j] = coeff;
    }

    pub fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    fn check_row(&self, coeffs: &[(usize, f64)], b: f64) -> Result<()> {
        if !b.is_finite() {
            return Err(Error::Dimension(format!("non-finite right-hand side {b}")));
        }
        for &(j, v) in coeffs {
            if j >= self.ncols {
                return Err(Error::Dimension(format!(
                    "row references variable {j}, problem has {}",
                    self.ncols
                )));
            }
            if !v.is_finite() {
                return Err(Error::Dimension(format!("non-finite coefficient {v}")));
            }
        }
        Ok(())
    }

    /// Adds `Σ coeffs·x = b` from sparse coefficients.
    pub fn add_eq_sparse(&mut self, coeffs: Vec<(usize, f64)>, b: f64) -> Result<()> {
        self.check_row(&coeffs, b)?;
        self.eq_rows.push((coeffs, b));
        Ok(())
    }

    /// Adds `Σ coeffs·x ≤ b` from sparse coefficients.
    pub fn add_ub_sparse(&mut self, coeffs: Vec<(usize, f64)>, b: f64) -> Result<()> {
        self.check_row(&coeffs, b)?;
        self.ub_rows.push((coeffs, b));
        Ok(())
    }

    /// Adds `Σ coeffs·x = b` from a dense coefficient row.
    pub fn add_eq_row(&mut self, coeffs: &[f64], b: f64) -> Result<()> {
        let sparse = dense_to_sparse(coeffs);
        self.add_eq_sparse(sparse, b)
    }

    /// Adds `Σ coeffs·x ≤ b` from a dense coefficient row.
    pub fn add_ub_row(&mut self, coeffs: &[f64], b: f64) -> Result<()> {
        let sparse = dense_to_sparse(coeffs);
        self.add_ub_sparse(sparse, b)
    }

    pub fn num_eq_rows(&self) -> usize {
        self.eq_rows.len()
    }

    pub fn num_ub_rows(&self) -> usize {
        self.ub_rows.len()
    }
}

fn dense_to_sparse(coeffs: &[f64]) -> Vec<(usize, f64)> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(j, &v)| (j, v))
        .collect()
}

/// Outcome classification of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solution report. `x` and `objective` are meaningful only when `status`
/// is [`LpStatus::Optimal`]; `duals` holds one multiplier per original row,
/// equality rows first.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub duals: Vec<f64>,
}

/// Solver tolerances.
#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Feasibility tolerance: phase-1 objective above this means infeasible.
    pub feas_tol: f64,
    /// Optimality tolerance on reduced costs.
    pub opt_tol: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-8,
            opt_tol: 1e-8,
        }
    }
}

// ── standard-form conversion ─────────────────────────────────────────────

/// How an original variable maps into standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = shift + x', one column.
    Shifted { col: usize, shift: f64 },
    /// x = shift − x', one column with negated coefficients.
    Mirrored { col: usize, shift: f64 },
    /// x = x⁺ − x⁻, two columns.
    Split { pos: usize, neg: usize },
    /// Presolved to a constant.
    Fixed { value: f64 },
}

struct Standard {
    m: usize,
    /// sparse columns of the standard-form matrix
    cols: Vec<Vec<(usize, f64)>>,
    b: Vec<f64>,
    /// phase-2 cost per column
    cost: Vec<f64>,
    /// first artificial column index; columns ≥ this are artificials
    art_start: usize,
    /// artificial column for each row (unit column on that row)
    art_of_row: Vec<usize>,
    /// initial basis, one column per row
    basis0: Vec<usize>,
    var_map: Vec<VarMap>,
    /// constant objective contribution from shifts and fixed variables
    obj_offset: f64,
    /// for each original row (eq rows then ub rows): (standard row, sign)
    row_map: Vec<(usize, f64)>,
}

fn build_standard(p: &LpProblem, feas_tol: f64) -> Result<std::result::Result<Standard, LpStatus>> {
    // Fixed-variable presolve.
    let mut var_map = vec![VarMap::Fixed { value: 0.0 }; p.ncols];
    let mut cols: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut cost: Vec<f64> = Vec::new();
    let mut obj_offset = 0.0;
    for j in 0..p.ncols {
        let (lo, up) = (p.lower[j], p.upper[j]);
        if lo > up {
            return Ok(Err(LpStatus::Infeasible));
        }
        if lo == up {
            var_map[j] = VarMap::Fixed { value: lo };
            obj_offset += p.c[j] * lo;
            continue;
        }
        if lo.is_finite() {
            let col = cols.len();
            cols.push(Vec::new());
            cost.push(p.c[j]);
            obj_offset += p.c[j] * lo;
            var_map[j] = VarMap::Shifted { col, shift: lo };
        } else if up.is_finite() {
            let col = cols.len();
            cols.push(Vec::new());
            cost.push(-p.c[j]);
            obj_offset += p.c[j] * up;
            var_map[j] = VarMap::Mirrored { col, shift: up };
        } else {
            let pos = cols.len();
            cols.push(Vec::new());
            cost.push(p.c[j]);
            let neg = cols.len();
            cols.push(Vec::new());
            cost.push(-p.c[j]);
            var_map[j] = VarMap::Split { pos, neg };
        }
    }

    // Assemble rows: equalities, inequalities, then upper-bound rows
    // x' ≤ u − l for doubly-bounded variables.
    struct RawRow {
        coeffs: Vec<(usize, f64)>, // in standard columns
        b: f64,
        is_eq: bool,
        orig: Option<usize>, // index into row_map
    }
    let mut raw: Vec<RawRow> = Vec::new();
    let mut orig_count = 0usize;
    for (kind_eq, rows) in [(true, &p.eq_rows), (false, &p.ub_rows)] {
        for (coeffs, b) in rows.iter() {
            let mut b_adj = *b;
            let mut std_coeffs: Vec<(usize, f64)> = Vec::new();
            for &(j, v) in coeffs {
                match var_map[j] {
                    VarMap::Fixed { value } => b_adj -= v * value,
                    VarMap::Shifted { col, shift } => {
                        b_adj -= v * shift;
                        push_coeff(&mut std_coeffs, col, v);
                    }
                    VarMap::Mirrored { col, shift } => {
                        b_adj -= v * shift;
                        push_coeff(&mut std_coeffs, col, -v);
                    }
                    VarMap::Split { pos, neg } => {
                        push_coeff(&mut std_coeffs, pos, v);
                        push_coeff(&mut std_coeffs, neg, -v);
                    }
                }
            }
            std_coeffs.retain(|&(_, v)| v != 0.0);
            raw.push(RawRow {
                coeffs: std_coeffs,
                b: b_adj,
                is_eq: kind_eq,
                orig: Some(orig_count),
            });
            orig_count += 1;
        }
    }
    for j in 0..p.ncols {
        if let VarMap::Shifted { col, shift } = var_map[j] {
            if p.upper[j].is_finite() {
                raw.push(RawRow {
                    coeffs: vec![(col, 1.0)],
                    b: p.upper[j] - shift,
                    is_eq: false,
                    orig: None,
                });
            }
        }
    }

    // Empty-row presolve.
    let mut row_map = vec![(usize::MAX, 1.0); orig_count];
    let mut kept: Vec<RawRow> = Vec::new();
    for row in raw {
        if row.coeffs.is_empty() {
            let violated = if row.is_eq {
                row.b.abs() > feas_tol
            } else {
                row.b < -feas_tol
            };
            if violated {
                return Ok(Err(LpStatus::Infeasible));
            }
            continue; // vacuous row dropped
        }
        kept.push(row);
    }

    let m = kept.len();
    let nstruct = cols.len();
    let mut b = vec![0.0; m];
    let mut basis0 = vec![usize::MAX; m];
    let mut slack_cols: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();
    let mut sign_of_row = vec![1.0; m];

    for (i, row) in kept.iter().enumerate() {
        let sign = if row.b < 0.0 { -1.0 } else { 1.0 };
        sign_of_row[i] = sign;
        b[i] = row.b * sign;
        for &(col, v) in &row.coeffs {
            cols[col].push((i, v * sign));
        }
        if let Some(orig) = row.orig {
            row_map[orig] = (i, sign);
        }
        if !row.is_eq {
            // slack with coefficient `sign` (basic only when sign = +1)
            slack_cols.push((i, vec![(i, sign)]));
        }
    }
    for (row, col) in slack_cols {
        let idx = cols.len();
        cols.push(col);
        cost.push(0.0);
        if sign_of_row[row] > 0.0 {
            basis0[row] = idx;
        }
    }
    let _ = nstruct;

    // Artificial columns: one per row; initial basis where no slack serves.
    let art_start = cols.len();
    let mut art_of_row = vec![0usize; m];
    for i in 0..m {
        let idx = cols.len();
        cols.push(vec![(i, 1.0)]);
        cost.push(0.0);
        art_of_row[i] = idx;
        if basis0[i] == usize::MAX {
            basis0[i] = idx;
        }
    }

    Ok(Ok(Standard {
        m,
        cols,
        b,
        cost,
        art_start,
        art_of_row,
        basis0,
        var_map,
        obj_offset,
        row_map,
    }))
}

fn push_coeff(coeffs: &mut Vec<(usize, f64)>, col: usize, v: f64) {
    if let Some(entry) = coeffs.iter_mut().find(|(c, _)| *c == col) {
        entry.1 += v;
    } else {
        coeffs.push((col, v));
    }
}

// ── dense LU with partial pivoting ───────────────────────────────────────

struct DenseLu {
    n: usize,
    lu: Vec<f64>, // row-major, L below diagonal (unit), U on and above
    piv: Vec<usize>,
}

impl DenseLu {
    fn factor(n: usize, fill: impl Fn(&mut [f64])) -> Result<Self> {
        let mut lu = vec![0.0; n * n];
        fill(&mut lu);
        let mut piv = vec![0usize; n];
        for k in 0..n {
            // partial pivot
            let mut best = k;
            let mut best_val = lu[k * n + k].abs();
            for i in (k + 1)..n {
                let v = lu[i * n + k].abs();
                if v > best_val {
                    best = i;
                    best_val = v;
                }
            }
            piv[k] = best;
            if best != k {
                for j in 0..n {
                    lu.swap(k * n + j, best * n + j);
                }
            }
            let pivot = lu[k * n + k];
            if best_val <= 1e-12 {
                return Err(Error::Numerical(format!(
                    "singular basis: pivot {pivot:.3e} at elimination step {k}"
                )));
            }
            for i in (k + 1)..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != 0.0 {
                    for j in (k + 1)..n {
                        lu[i * n + j] -= f * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, piv })
    }

    /// Solves `B x = v` in place.
    fn solve(&self, v: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            v.swap(k, self.piv[k]);
        }
        for i in 1..n {
            let mut acc = v[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * v[j];
            }
            v[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = v[i];
            for j in (i + 1)..n {
                acc -= self.lu[i * n + j] * v[j];
            }
            v[i] = acc / self.lu[i * n + i];
        }
    }

    /// Solves `Bᵀ y = v` in place.
    fn solve_t(&self, v: &mut [f64]) {
        let n = self.n;
        // B = P⁻¹ L U  ⇒  Bᵀ = Uᵀ Lᵀ P; solve Uᵀ z = v, Lᵀ w = z, x = P⁻¹w.
        for i in 0..n {
            let mut acc = v[i];
            for j in 0..i {
                acc -= self.lu[j * n + i] * v[j];
            }
            v[i] = acc / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut acc = v[i];
            for j in (i + 1)..n {
                acc -= self.lu[j * n + i] * v[j];
            }
            v[i] = acc;
        }
        for k in (0..n).rev() {
            v.swap(k, self.piv[k]);
        }
    }
}

// ── revised simplex ──────────────────────────────────────────────────────

struct Eta {
    row: usize,
    col: Vec<f64>, // transformed entering column B⁻¹a
}

struct Simplex<'a> {
    std: &'a Standard,
    opts: LpOptions,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    xb: Vec<f64>,
    lu: DenseLu,
    etas: Vec<Eta>,
    iterations: usize,
    enterable: Vec<bool>,
    cost: Vec<f64>, // active phase costs
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Pivoted,
}

const MAX_ETAS: usize = 96;
const PIV_TOL: f64 = 1e-9;
const DEGEN_TOL: f64 = 1e-11;

impl<'a> Simplex<'a> {
    fn new(std: &'a Standard, opts: LpOptions) -> Result<Self> {
        let basis = std.basis0.clone();
        let mut in_basis = vec![false; std.cols.len()];
        for &j in &basis {
            in_basis[j] = true;
        }
        let lu = Self::factor_basis(std, &basis)?;
        let mut xb = std.b.clone();
        lu.solve(&mut xb);
        Ok(Self {
            std,
            opts,
            basis,
            in_basis,
            xb,
            lu,
            etas: Vec::new(),
            iterations: 0,
            enterable: vec![true; std.cols.len()],
            cost: vec![0.0; std.cols.len()],
        })
    }

    fn factor_basis(std: &Standard, basis: &[usize]) -> Result<DenseLu> {
        let m = std.m;
        DenseLu::factor(m, |dense| {
            for (slot, &j) in basis.iter().enumerate() {
                for &(i, v) in &std.cols[j] {
                    dense[i * m + slot] = v;
                }
            }
        })
    }

    /// Refactorizes the basis, repairing numerically dependent columns by
    /// swapping in their rows' artificial columns. Errors after 3 attempts.
    fn refactorize(&mut self) -> Result<()> {
        for attempt in 0..3 {
            match Self::factor_basis(self.std, &self.basis) {
                Ok(lu) => {
                    self.lu = lu;
                    self.etas.clear();
                    let mut xb = self.std.b.clone();
                    self.lu.solve(&mut xb);
                    self.xb = xb;
                    return Ok(());
                }
                Err(_) if attempt < 2 => {
                    // Replace the slot whose column is most nearly dependent
                    // with that row's artificial unit column: crude but keeps
                    // the basis invertible.
                    let mut replaced = false;
                    for slot in 0..self.basis.len() {
                        let j = self.basis[slot];
                        if j >= self.std.art_start {
                            continue;
                        }
                        let art = self.std.art_of_row[slot];
                        if !self.in_basis[art] {
                            self.in_basis[j] = false;
                            self.in_basis[art] = true;
                            self.basis[slot] = art;
                            replaced = true;
                            break;
                        }
                    }
                    if !replaced {
                        return Err(Error::Numerical(
                            "singular basis could not be repaired".into(),
                        ));
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::Numerical(
            "basis still singular after 3 refactorization attempts".into(),
        ))
    }

    fn ftran(&self, col: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.std.m];
        for &(i, val) in &self.std.cols[col] {
            v[i] = val;
        }
        self.lu.solve(&mut v);
        for eta in &self.etas {
            let vr = v[eta.row] / eta.col[eta.row];
            if vr != 0.0 {
                for i in 0..v.len() {
                    v[i] -= eta.col[i] * vr;
                }
            }
            v[eta.row] = vr;
        }
        v
    }

    fn btran_costs(&self) -> Vec<f64> {
        let mut y: Vec<f64> = self.basis.iter().map(|&j| self.cost[j]).collect();
        for eta in self.etas.iter().rev() {
            let mut acc = y[eta.row];
            for i in 0..y.len() {
                if i != eta.row {
                    acc -= eta.col[i] * y[i];
                }
            }
            y[eta.row] = acc / eta.col[eta.row];
        }
        self.lu.solve_t(&mut y);
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        let mut d = self.cost[j];
        for &(i, v) in &self.std.cols[j] {
            d -= y[i] * v;
        }
        d
    }

    fn step(&mut self, bland: bool) -> Result<(StepOutcome, bool)> {
        let y = self.btran_costs();
        // entering variable
        let mut entering = None;
        let mut best = -self.opts.opt_tol;
        for j in 0..self.std.cols.len() {
            if self.in_basis[j] || !self.enterable[j] {
                continue;
            }
            let d = self.reduced_cost(j, &y);
            if bland {
                if d < -self.opts.opt_tol {
                    entering = Some(j);
                    break;
                }
            } else if d < best {
                best = d;
                entering = Some(j);
            }
        }
        let Some(e) = entering else {
            return Ok((StepOutcome::Optimal, false));
        };

        let w = self.ftran(e);
        // ratio test
        let mut leave: Option<(usize, f64)> = None; // (slot, ratio)
        for i in 0..self.std.m {
            let basic = self.basis[i];
            let wi = w[i];
            // A basic artificial resting at zero must never rise again; a
            // degenerate ratio-0 pivot swaps it out exactly at its bound.
            // (Positive artificial levels occur only in phase 1, where the
            // objective prices their movement and the plain test applies.)
            let artificial_guard = basic >= self.std.art_start
                && self.xb[i] <= DEGEN_TOL
                && wi.abs() > PIV_TOL;
            if wi > PIV_TOL || artificial_guard {
                let ratio = if artificial_guard && wi < 0.0 {
                    0.0
                } else {
                    (self.xb[i].max(0.0)) / wi
                };
                let better = match leave {
                    None => true,
                    Some((cur, best_ratio)) => {
                        if ratio < best_ratio - 1e-12 {
                            true
                        } else if ratio > best_ratio + 1e-12 {
                            false
                        } else if bland {
                            self.basis[i] < self.basis[cur]
                        } else {
                            wi.abs() > w[cur].abs()
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, t)) = leave else {
            return Ok((StepOutcome::Unbounded, false));
        };

        // pivot
        let leaving = self.basis[r];
        self.in_basis[leaving] = false;
        self.in_basis[e] = true;
        self.basis[r] = e;
        for i in 0..self.std.m {
            self.xb[i] -= t * w[i];
        }
        self.xb[r] = t;
        self.etas.push(Eta { row: r, col: w });
        self.iterations += 1;
        if self.etas.len() >= MAX_ETAS {
            self.refactorize()?;
        }
        Ok((StepOutcome::Pivoted, t.abs() <= DEGEN_TOL))
    }

    /// Runs the simplex to optimality for the currently loaded costs.
    fn optimize(&mut self) -> Result<StepOutcome> {
        let mut degenerate_run = 0usize;
        let mut bland = false;
        let mut unbounded_retry = false;
        let iter_cap = 50_000 + 200 * (self.std.m + self.std.cols.len());
        loop {
            if self.iterations > iter_cap {
                return Err(Error::Numerical(format!(
                    "simplex iteration cap {iter_cap} exceeded"
                )));
            }
            match self.step(bland)? {
                (StepOutcome::Optimal, _) => return Ok(StepOutcome::Optimal),
                (StepOutcome::Unbounded, _) => {
                    // Product-form drift can fake an unblocked ray. A real
                    // one is structural and survives a fresh factorization.
                    if !unbounded_retry && !self.etas.is_empty() {
                        self.refactorize()?;
                        unbounded_retry = true;
                        continue;
                    }
                    return Ok(StepOutcome::Unbounded);
                }
                (StepOutcome::Pivoted, degenerate) => {
                    unbounded_retry = false;
                    if degenerate {
                        degenerate_run += 1;
                        if degenerate_run >= 50 {
                            bland = true;
                        }
                    } else {
                        degenerate_run = 0;
                        bland = false;
                    }
                }
            }
        }
    }

    /// Pivots basic artificials out wherever a structural column can take
    /// their place (end of phase 1).
    fn drive_out_artificials(&mut self) -> Result<()> {
        for slot in 0..self.std.m {
            if self.basis[slot] < self.std.art_start {
                continue;
            }
            // row `slot` of B⁻¹A: e_slotᵀ B⁻¹ then dot each candidate column
            let mut e = vec![0.0; self.std.m];
            e[slot] = 1.0;
            for eta in self.etas.iter().rev() {
                let mut acc = e[eta.row];
                for i in 0..e.len() {
                    if i != eta.row {
                        acc -= eta.col[i] * e[i];
                    }
                }
                e[eta.row] = acc / eta.col[eta.row];
            }
            self.lu.solve_t(&mut e);
            let mut found = None;
            for j in 0..self.std.art_start {
                if self.in_basis[j] || !self.enterable[j] {
                    continue;
                }
                let mut piv = 0.0;
                for &(i, v) in &self.std.cols[j] {
                    piv += e[i] * v;
                }
                if piv.abs() > 1e-7 {
                    found = Some(j);
                    break;
                }
            }
            if let Some(j) = found {
                let w = self.ftran(j);
                let leaving = self.basis[slot];
                self.in_basis[leaving] = false;
                self.in_basis[j] = true;
                self.basis[slot] = j;
                let t = self.xb[slot] / w[slot];
                for i in 0..self.std.m {
                    self.xb[i] -= t * w[i];
                }
                self.xb[slot] = t;
                self.etas.push(Eta { row: slot, col: w });
                if self.etas.len() >= MAX_ETAS {
                    self.refactorize()?;
                }
            }
            // otherwise: redundant row; the artificial stays basic at zero
            // and the phase-2 ratio guard keeps it there.
        }
        Ok(())
    }
}

/// Solves the linear program with a deterministic two-phase revised simplex.
pub fn solve_lp(p: &LpProblem, opts: LpOptions) -> Result<LpSolution> {
    let std = match build_standard(p, opts.feas_tol)? {
        Ok(std) => std,
        Err(status) => {
            return Ok(LpSolution {
                status,
                x: vec![0.0; p.ncols],
                objective: 0.0,
                iterations: 0,
                duals: vec![0.0; p.eq_rows.len() + p.ub_rows.len()],
            })
        }
    };

    // Degenerate corner: every row presolved away. Each variable then
    // minimizes independently at one of its bounds.
    if std.m == 0 {
        let mut x = vec![0.0; p.ncols];
        let mut objective = 0.0;
        for j in 0..p.ncols {
            if let VarMap::Fixed { value } = std.var_map[j] {
                x[j] = value;
            } else if p.c[j] > opts.opt_tol {
                if !p.lower[j].is_finite() {
                    return Ok(unbounded_solution(p, 0));
                }
                x[j] = p.lower[j];
            } else if p.c[j] < -opts.opt_tol {
                if !p.upper[j].is_finite() {
                    return Ok(unbounded_solution(p, 0));
                }
                x[j] = p.upper[j];
            } else {
                x[j] = if p.lower[j].is_finite() {
                    p.lower[j]
                } else if p.upper[j].is_finite() {
                    p.upper[j]
                } else {
                    0.0
                };
            }
            objective += p.c[j] * x[j];
        }
        return Ok(LpSolution {
            status: LpStatus::Optimal,
            x,
            objective,
            iterations: 0,
            duals: vec![0.0; p.eq_rows.len() + p.ub_rows.len()],
        });
    }

    let mut sx = Simplex::new(&std, opts)?;

    // Phase 1: minimize the sum of initially-basic artificials. Artificials
    // that did not make the initial basis stay barred.
    let needs_phase1 = std.basis0.iter().any(|&j| j >= std.art_start);
    if needs_phase1 {
        for j in 0..std.cols.len() {
            sx.cost[j] = if j >= std.art_start { 1.0 } else { 0.0 };
            sx.enterable[j] = j < std.art_start || sx.in_basis[j];
        }
        match sx.optimize()? {
            StepOutcome::Unbounded => {
                return Err(Error::Numerical(
                    "phase-1 objective unbounded below zero".into(),
                ))
            }
            _ => {}
        }
        let infeas: f64 = sx
            .basis
            .iter()
            .zip(&sx.xb)
            .filter(|(&j, _)| j >= std.art_start)
            .map(|(_, &v)| v.max(0.0))
            .sum();
        if infeas > opts.feas_tol {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: vec![0.0; p.ncols],
                objective: 0.0,
                iterations: sx.iterations,
                duals: vec![0.0; p.eq_rows.len() + p.ub_rows.len()],
            });
        }
        sx.drive_out_artificials()?;
        // Snap residual artificial levels to exactly zero.
        for i in 0..std.m {
            if sx.basis[i] >= std.art_start {
                sx.xb[i] = 0.0;
            }
        }
    }

    // Phase 2: original costs, artificials barred from entering.
    for j in 0..std.cols.len() {
        sx.cost[j] = std.cost[j];
        sx.enterable[j] = j < std.art_start;
    }
    let outcome = sx.optimize()?;
    if matches!(outcome, StepOutcome::Unbounded) {
        return Ok(unbounded_solution(p, sx.iterations));
    }

    // Recover the original-variable solution and duals.
    let mut std_x = vec![0.0; std.cols.len()];
    for (slot, &j) in sx.basis.iter().enumerate() {
        std_x[j] = sx.xb[slot].max(0.0);
    }
    let x = recover_x(p, &std, &std_x);
    let y = sx.btran_costs();
    let mut duals = vec![0.0; p.eq_rows.len() + p.ub_rows.len()];
    for (orig, &(row, sign)) in std.row_map.iter().enumerate() {
        if row != usize::MAX {
            duals[orig] = y[row] * sign;
        }
    }
    let objective = std.obj_offset
        + std_x
            .iter()
            .zip(&std.cost)
            .map(|(x, c)| x * c)
            .sum::<f64>();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        iterations: sx.iterations,
        duals,
    })
}

fn unbounded_solution(p: &LpProblem, iterations: usize) -> LpSolution {
    LpSolution {
        status: LpStatus::Unbounded,
        x: vec![0.0; p.ncols],
        objective: f64::NEG_INFINITY,
        iterations,
        duals: vec![0.0; p.eq_rows.len() + p.ub_rows.len()],
    }
}

fn recover_x(p: &LpProblem, std: &Standard, std_x: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; p.ncols];
    for j in 0..p.ncols {
        x[j] = match std.var_map[j] {
            VarMap::Fixed { value } => value,
            VarMap::Shifted { col, shift } => shift + std_x.get(col).copied().unwrap_or(0.0),
            VarMap::Mirrored { col, shift } => shift - std_x.get(col).copied().unwrap_or(0.0),
            VarMap::Split { pos, neg } => {
                std_x.get(pos).copied().unwrap_or(0.0) - std_x.get(neg).copied().unwrap_or(0.0)
            }
        };
    }
    x
}

/// Maximum violation of the problem's rows and bounds at `x`.
pub fn feasibility_residual(p: &LpProblem, x: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for (coeffs, b) in &p.eq_rows {
        let lhs: f64 = coeffs.iter().map(|&(j, v)| v * x[j]).sum();
        worst = worst.max((lhs - b).abs());
    }
    for (coeffs, b) in &p.ub_rows {
        let lhs: f64 = coeffs.iter().map(|&(j, v)| v * x[j]).sum();
        worst = worst.max(lhs - b);
    }
    for j in 0..p.ncols {
        worst = worst.max(p.lower[j] - x[j]).max(x[j] - p.upper[j]);
    }
    worst.max(0.0)
}
