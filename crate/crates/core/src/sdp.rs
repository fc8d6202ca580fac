//! Semidefinite programs over complex Hermitian blocks: a small problem IR,
//! builders for every program used by the measure layer, and a solve contract
//! with certified duality gaps.
//!
//! Variables are Hermitian matrix blocks (optionally constrained to the PSD
//! cone) and free or nonnegative real scalars. Constraints are affine matrix
//! equations, affine scalar equations, and affine PSD-cone memberships.
//!
//! Solving delegates to the Clarabel interior-point solver. Each Hermitian
//! block of size n is parametrized by its n^2 real coordinates (diagonal,
//! then re/im of the upper triangle); PSD memberships are passed to the
//! solver through the standard symmetric embedding
//! `H -> [[Re H, -Im H], [Im H, Re H]]`, which is PSD exactly when `H` is.
//! The affine maps are extracted numerically by evaluating each expression
//! on coordinate basis vectors, which keeps one evaluation path for both the
//! compiler and the feasibility checks.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

use crate::channel::{LinearMapRep, DEFAULT_CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::matrix::{partial_trace, tensor_product, CMatrix, Subsystem};

/// Interior-point tolerance used when callers do not override it. Acceptance
/// comparisons run at 1e-6, one order looser than the solve.
pub const DEFAULT_SOLVER_TOL: f64 = 1e-8;

/// Handle to a declared variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarId(usize);

#[derive(Debug, Clone)]
enum VarDecl {
    Hermitian { dim: usize, psd: bool },
    Scalar { nonneg: bool },
}

/// Optimization sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Affine real functional of the variables. Matrix terms contribute
/// `Re tr(C X)`.
#[derive(Debug, Clone, Default)]
pub struct ScalarExpr {
    constant: f64,
    scalars: Vec<(VarId, f64)>,
    traces: Vec<(VarId, CMatrix)>,
}

impl ScalarExpr {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            ..Self::default()
        }
    }

    pub fn from_scalars(terms: &[(VarId, f64)]) -> Self {
        Self {
            scalars: terms.to_vec(),
            ..Self::default()
        }
    }

    /// `Re tr(C X)` for a Hermitian block `X`.
    pub fn trace_product(var: VarId, coeff: CMatrix) -> Self {
        Self {
            traces: vec![(var, coeff)],
            ..Self::default()
        }
    }

    /// `tr X` for a Hermitian block of the given dimension.
    pub fn trace_of(var: VarId, dim: usize) -> Self {
        Self::trace_product(var, CMatrix::identity(dim))
    }

    pub fn plus_constant(mut self, c: f64) -> Self {
        self.constant += c;
        self
    }
}

/// Affine Hermitian-matrix expression.
#[derive(Debug, Clone)]
pub enum MatrixExpr {
    Const(CMatrix),
    Var(VarId),
    /// `factor * s * I_dim` for a scalar variable `s`.
    ScaledIdentity {
        scalar: VarId,
        dim: usize,
        factor: f64,
    },
    Scale(f64, Box<MatrixExpr>),
    Add(Box<MatrixExpr>, Box<MatrixExpr>),
    Sub(Box<MatrixExpr>, Box<MatrixExpr>),
    /// Partial trace over the second tensor factor.
    TraceOutSecond {
        inner: Box<MatrixExpr>,
        dims: (usize, usize),
    },
    /// `X (x) I_k`.
    KronIdRight {
        inner: Box<MatrixExpr>,
        id_dim: usize,
    },
}

impl MatrixExpr {
    pub fn var(id: VarId) -> Self {
        MatrixExpr::Var(id)
    }

    pub fn constant(m: CMatrix) -> Self {
        MatrixExpr::Const(m)
    }

    pub fn scaled_identity(scalar: VarId, dim: usize, factor: f64) -> Self {
        MatrixExpr::ScaledIdentity {
            scalar,
            dim,
            factor,
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        MatrixExpr::Scale(factor, Box::new(self))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Self) -> Self {
        MatrixExpr::Add(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: Self) -> Self {
        MatrixExpr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn trace_out_second(self, dims: (usize, usize)) -> Self {
        MatrixExpr::TraceOutSecond {
            inner: Box::new(self),
            dims,
        }
    }

    pub fn kron_id_right(self, id_dim: usize) -> Self {
        MatrixExpr::KronIdRight {
            inner: Box::new(self),
            id_dim,
        }
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            MatrixExpr::Const(_) => {}
            MatrixExpr::Var(id) => out.push(id.0),
            MatrixExpr::ScaledIdentity { scalar, .. } => out.push(scalar.0),
            MatrixExpr::Scale(_, inner) => inner.collect_vars(out),
            MatrixExpr::Add(a, b) | MatrixExpr::Sub(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            MatrixExpr::TraceOutSecond { inner, .. } | MatrixExpr::KronIdRight { inner, .. } => {
                inner.collect_vars(out)
            }
        }
    }
}

/// Solve status, reduced to what callers act on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    NumericalFailure(String),
}

/// Value of one variable in a solution.
#[derive(Debug, Clone)]
pub enum VarValue {
    Matrix(CMatrix),
    Scalar(f64),
}

/// Solver output: objective values on both sides of the interior-point
/// iteration, the relative gap between them, and the variable assignment.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    /// `|primal - dual| / max(1, |primal|)`.
    pub gap: f64,
    values: Vec<VarValue>,
}

impl SdpSolution {
    pub fn matrix(&self, id: VarId) -> &CMatrix {
        match &self.values[id.0] {
            VarValue::Matrix(m) => m,
            VarValue::Scalar(_) => panic!("variable {} is a scalar", id.0),
        }
    }

    pub fn scalar(&self, id: VarId) -> f64 {
        match &self.values[id.0] {
            VarValue::Scalar(s) => *s,
            VarValue::Matrix(_) => panic!("variable {} is a matrix", id.0),
        }
    }
}

/// A semidefinite program over Hermitian blocks and real scalars.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    sense: Sense,
    vars: Vec<VarDecl>,
    objective: ScalarExpr,
    matrix_eqs: Vec<MatrixExpr>,
    scalar_eqs: Vec<ScalarExpr>,
    psd_constraints: Vec<MatrixExpr>,
}

impl SdpProblem {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            vars: Vec::new(),
            objective: ScalarExpr::default(),
            matrix_eqs: Vec::new(),
            scalar_eqs: Vec::new(),
            psd_constraints: Vec::new(),
        }
    }

    /// Declare a Hermitian `dim x dim` block, optionally PSD-constrained.
    pub fn hermitian_var(&mut self, dim: usize, psd: bool) -> VarId {
        self.vars.push(VarDecl::Hermitian { dim, psd });
        VarId(self.vars.len() - 1)
    }

    /// Declare a real scalar, optionally nonnegative.
    pub fn scalar_var(&mut self, nonneg: bool) -> VarId {
        self.vars.push(VarDecl::Scalar { nonneg });
        VarId(self.vars.len() - 1)
    }

    pub fn set_objective(&mut self, objective: ScalarExpr) {
        self.objective = objective;
    }

    /// Add the constraint `expr == 0` (entrywise, Hermitian expression).
    pub fn add_matrix_eq(&mut self, expr: MatrixExpr) {
        self.matrix_eqs.push(expr);
    }

    /// Add the constraint `expr == 0`.
    pub fn add_scalar_eq(&mut self, expr: ScalarExpr) {
        self.scalar_eqs.push(expr);
    }

    /// Add the constraint `expr >= 0` in the PSD order.
    pub fn add_psd(&mut self, expr: MatrixExpr) {
        self.psd_constraints.push(expr);
    }

    fn coord_count(var: &VarDecl) -> usize {
        match var {
            VarDecl::Hermitian { dim, .. } => dim * dim,
            VarDecl::Scalar { .. } => 1,
        }
    }

    fn offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.vars.len() + 1);
        let mut acc = 0;
        for v in &self.vars {
            offsets.push(acc);
            acc += Self::coord_count(v);
        }
        offsets.push(acc);
        offsets
    }

    /// Reconstruct a variable value from the coordinate vector.
    fn extract(&self, var: usize, offsets: &[usize], x: &[f64]) -> VarValue {
        let off = offsets[var];
        match &self.vars[var] {
            VarDecl::Scalar { .. } => VarValue::Scalar(x[off]),
            VarDecl::Hermitian { dim, .. } => {
                let n = *dim;
                let mut m = CMatrix::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = crate::matrix::C64::new(x[off + i], 0.0);
                }
                let mut idx = off + n;
                for i in 0..n {
                    for j in (i + 1)..n {
                        let re = x[idx];
                        let im = x[idx + 1];
                        idx += 2;
                        m[(i, j)] = crate::matrix::C64::new(re, im);
                        m[(j, i)] = crate::matrix::C64::new(re, -im);
                    }
                }
                VarValue::Matrix(m)
            }
        }
    }

    fn eval_matrix(&self, expr: &MatrixExpr, offsets: &[usize], x: &[f64]) -> CMatrix {
        match expr {
            MatrixExpr::Const(m) => m.clone(),
            MatrixExpr::Var(id) => match self.extract(id.0, offsets, x) {
                VarValue::Matrix(m) => m,
                VarValue::Scalar(_) => panic!("matrix expression references a scalar variable"),
            },
            MatrixExpr::ScaledIdentity {
                scalar,
                dim,
                factor,
            } => CMatrix::identity(*dim).scale_re(factor * x[offsets[scalar.0]]),
            MatrixExpr::Scale(f, inner) => self.eval_matrix(inner, offsets, x).scale_re(*f),
            MatrixExpr::Add(a, b) => self
                .eval_matrix(a, offsets, x)
                .add(&self.eval_matrix(b, offsets, x)),
            MatrixExpr::Sub(a, b) => self
                .eval_matrix(a, offsets, x)
                .sub(&self.eval_matrix(b, offsets, x)),
            MatrixExpr::TraceOutSecond { inner, dims } => partial_trace(
                &self.eval_matrix(inner, offsets, x),
                *dims,
                Subsystem::First,
            )
            .expect("builder dimensions are consistent"),
            MatrixExpr::KronIdRight { inner, id_dim } => tensor_product(
                &self.eval_matrix(inner, offsets, x),
                &CMatrix::identity(*id_dim),
            ),
        }
    }

    fn eval_scalar(&self, expr: &ScalarExpr, offsets: &[usize], x: &[f64]) -> f64 {
        let mut acc = expr.constant;
        for (id, coeff) in &expr.scalars {
            acc += coeff * x[offsets[id.0]];
        }
        for (id, coeff) in &expr.traces {
            if let VarValue::Matrix(m) = self.extract(id.0, offsets, x) {
                acc += coeff.re_trace_product(&m);
            }
        }
        acc
    }

    /// Coordinates touched by the given variables.
    fn coords_of_vars(&self, vars: &[usize], offsets: &[usize]) -> Vec<usize> {
        let mut coords = Vec::new();
        let mut seen = vec![false; self.vars.len()];
        for &v in vars {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            coords.extend(offsets[v]..offsets[v] + Self::coord_count(&self.vars[v]));
        }
        coords
    }

    /// Solve the program with interior-point tolerance `tol`.
    pub fn solve(&self, tol: f64) -> Result<SdpSolution> {
        let offsets = self.offsets();
        let n_coords = *offsets.last().unwrap();
        let zero = vec![0.0f64; n_coords];
        let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
        let mut b: Vec<f64> = Vec::new();
        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
        let mut row = 0usize;

        // --- Equality block (zero cone) ------------------------------------
        let eq_start = row;
        for expr in &self.matrix_eqs {
            let mut vars = Vec::new();
            expr.collect_vars(&mut vars);
            let coords = self.coords_of_vars(&vars, &offsets);
            let c0 = self.eval_matrix(expr, &offsets, &zero);
            let m = c0.rows();
            // Row layout per constraint: diagonal (real), then upper
            // triangle (re, im).
            let rows_here = m * m;
            for (ci, &coord) in coords.iter().enumerate() {
                let mut x = zero.clone();
                x[coord] = 1.0;
                let lk = self.eval_matrix(expr, &offsets, &x).sub(&c0);
                let _ = ci;
                let mut r = row;
                for i in 0..m {
                    push_nonzero(&mut triplets, r, coord, lk[(i, i)].re);
                    r += 1;
                }
                for i in 0..m {
                    for j in (i + 1)..m {
                        push_nonzero(&mut triplets, r, coord, lk[(i, j)].re);
                        push_nonzero(&mut triplets, r + 1, coord, lk[(i, j)].im);
                        r += 2;
                    }
                }
            }
            for i in 0..m {
                b.push(-c0[(i, i)].re);
            }
            for i in 0..m {
                for j in (i + 1)..m {
                    b.push(-c0[(i, j)].re);
                    b.push(-c0[(i, j)].im);
                }
            }
            row += rows_here;
        }
        for expr in &self.scalar_eqs {
            let c0 = self.eval_scalar(expr, &offsets, &zero);
            for coord in 0..n_coords {
                let mut x = zero.clone();
                x[coord] = 1.0;
                let lk = self.eval_scalar(expr, &offsets, &x) - c0;
                push_nonzero(&mut triplets, row, coord, lk);
            }
            b.push(-c0);
            row += 1;
        }
        if row > eq_start {
            cones.push(SupportedConeT::ZeroConeT(row - eq_start));
        }

        // --- Nonnegative scalars -------------------------------------------
        let nonneg_start = row;
        for (v, decl) in self.vars.iter().enumerate() {
            if let VarDecl::Scalar { nonneg: true } = decl {
                // s = x >= 0  =>  -x + s = 0.
                triplets.push((row, offsets[v], -1.0));
                b.push(0.0);
                row += 1;
            }
        }
        if row > nonneg_start {
            cones.push(SupportedConeT::NonnegativeConeT(row - nonneg_start));
        }

        // --- PSD memberships ------------------------------------------------
        let mut psd_exprs: Vec<MatrixExpr> = Vec::new();
        for (v, decl) in self.vars.iter().enumerate() {
            if let VarDecl::Hermitian { psd: true, .. } = decl {
                psd_exprs.push(MatrixExpr::Var(VarId(v)));
            }
        }
        psd_exprs.extend(self.psd_constraints.iter().cloned());

        for expr in &psd_exprs {
            let mut vars = Vec::new();
            expr.collect_vars(&mut vars);
            let coords = self.coords_of_vars(&vars, &offsets);
            let c0 = self.eval_matrix(expr, &offsets, &zero);
            let m = c0.rows();
            let side = 2 * m;
            let svec_len = side * (side + 1) / 2;
            for &coord in &coords {
                let mut x = zero.clone();
                x[coord] = 1.0;
                let lk = self.eval_matrix(expr, &offsets, &x).sub(&c0);
                for (r_off, val) in svec_realified(&lk) {
                    push_nonzero(&mut triplets, row + r_off, coord, -val);
                }
            }
            let mut b_block = vec![0.0; svec_len];
            for (r_off, val) in svec_realified(&c0) {
                b_block[r_off] = val;
            }
            b.extend_from_slice(&b_block);
            row += svec_len;
            cones.push(SupportedConeT::PSDTriangleConeT(side));
        }

        // --- Objective -------------------------------------------------------
        let obj0 = self.eval_scalar(&self.objective, &offsets, &zero);
        let mut q = vec![0.0f64; n_coords];
        for coord in 0..n_coords {
            let mut x = zero.clone();
            x[coord] = 1.0;
            q[coord] = self.eval_scalar(&self.objective, &offsets, &x) - obj0;
        }
        let sense_sign = match self.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        for qi in q.iter_mut() {
            *qi *= sense_sign;
        }

        let a = csc_from_triplets(row, n_coords, &triplets);
        let p = CscMatrix::<f64>::zeros((n_coords, n_coords));
        // Feasibility is requested one order tighter than the gap: the
        // solution contract below promises PSD variables within 10 tol, and
        // the solver's scaled feasibility norm leaves roughly that factor of
        // slack on raw variable blocks.
        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .tol_gap_abs(tol)
            .tol_gap_rel(tol)
            .tol_feas(tol * 0.1)
            .build()
            .map_err(|e| Error::Solver(format!("settings: {e:?}")))?;
        let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings)
            .map_err(|e| Error::Solver(format!("problem assembly: {e:?}")))?;
        solver.solve();

        let mut status = match solver.solution.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => SdpStatus::Optimal,
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
                SdpStatus::Infeasible
            }
            other => SdpStatus::NumericalFailure(format!("{other:?}")),
        };
        let primal_value = sense_sign * solver.solution.obj_val + obj0;
        let dual_value = sense_sign * solver.solution.obj_val_dual + obj0;
        let gap = (primal_value - dual_value).abs() / primal_value.abs().max(1.0);
        let values: Vec<VarValue> = (0..self.vars.len())
            .map(|v| self.extract(v, &offsets, &solver.solution.x))
            .collect();

        // Solution contract: an optimal status promises a certified gap and
        // PSD variables whose negativity stays within two orders of the
        // requested tolerance at the block's own scale (equilibration keeps
        // raw variable blocks from doing better than that); downgrade
        // otherwise.
        if status == SdpStatus::Optimal {
            if gap > 10.0 * tol {
                status = SdpStatus::NumericalFailure(format!("uncertified gap {gap:.3e}"));
            }
            for (decl, value) in self.vars.iter().zip(&values) {
                if let (VarDecl::Hermitian { psd: true, .. }, VarValue::Matrix(m)) = (decl, value) {
                    let min = crate::matrix::min_eigenvalue(&m.hermitian_part())
                        .expect("hermitian by construction");
                    let scale = m.frobenius_norm().max(1.0);
                    if min < -100.0 * tol * scale {
                        status = SdpStatus::NumericalFailure(format!(
                            "PSD variable with eigenvalue {min:.3e} at scale {scale:.3e}"
                        ));
                    }
                }
            }
        }
        Ok(SdpSolution {
            status,
            primal_value,
            dual_value,
            gap,
            values,
        })
    }

    /// Solve, requiring an optimal status.
    pub fn solve_optimal(&self, tol: f64) -> Result<SdpSolution> {
        let sol = self.solve(tol)?;
        match sol.status {
            SdpStatus::Optimal => Ok(sol),
            SdpStatus::Infeasible => Err(Error::Infeasible),
            SdpStatus::NumericalFailure(ref msg) => Err(Error::Solver(msg.clone())),
        }
    }
}

fn push_nonzero(triplets: &mut Vec<(usize, usize, f64)>, row: usize, col: usize, val: f64) {
    if val != 0.0 {
        triplets.push((row, col, val));
    }
}

/// Scaled upper-triangle vectorization of the symmetric embedding of a
/// Hermitian matrix, as (offset, value) pairs in the solver's column-wise
/// svec order with sqrt(2)-scaled off-diagonals.
fn svec_realified(h: &CMatrix) -> Vec<(usize, f64)> {
    let m = h.rows();
    let side = 2 * m;
    let sqrt2 = std::f64::consts::SQRT_2;
    // Entry (i, j) of [[Re H, -Im H], [Im H, Re H]], averaged with its
    // transpose partner to strip floating-point asymmetry.
    let entry = |i: usize, j: usize| -> f64 {
        let block = |r: usize, c: usize| -> f64 {
            let (br, bc) = (r / m, c / m);
            let (rr, cc) = (r % m, c % m);
            match (br, bc) {
                (0, 0) | (1, 1) => h[(rr, cc)].re,
                (0, 1) => -h[(rr, cc)].im,
                (1, 0) => h[(rr, cc)].im,
                _ => unreachable!(),
            }
        };
        0.5 * (block(i, j) + block(j, i))
    };
    let mut out = Vec::with_capacity(side * (side + 1) / 2);
    let mut offset = 0;
    for j in 0..side {
        for i in 0..=j {
            let v = entry(i, j);
            let scaled = if i == j { v } else { sqrt2 * v };
            if scaled != 0.0 {
                out.push((offset, scaled));
            }
            offset += 1;
        }
    }
    out
}

fn csc_from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> CscMatrix<f64> {
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); cols];
    for &(r, c, v) in triplets {
        by_col[c].push((r, v));
    }
    let mut colptr = Vec::with_capacity(cols + 1);
    let mut rowval = Vec::with_capacity(triplets.len());
    let mut nzval = Vec::with_capacity(triplets.len());
    colptr.push(0);
    for col in by_col.iter_mut() {
        col.sort_by_key(|&(r, _)| r);
        for &(r, v) in col.iter() {
            rowval.push(r);
            nzval.push(v);
        }
        colptr.push(rowval.len());
    }
    CscMatrix::new(rows, cols, colptr, rowval, nzval)
}

// ---------------------------------------------------------------------------
// Problem builders
// ---------------------------------------------------------------------------

/// Variables of the primal implementability program.
pub struct NuPrimalVars {
    pub j1: VarId,
    pub j2: VarId,
    pub p1: VarId,
    pub p2: VarId,
}

/// Primal program for the linear-scale implementability `2^nu`:
///
/// ```text
/// min  p1 + p2
/// s.t. J_N = J1 - J2
///      tr_out J1 = p1 I,  tr_out J2 = p2 I
///      J1 >= 0,  J2 >= 0
/// ```
///
/// `p1` and `p2` are kept as explicit scalars tied by the marginal equations
/// rather than eliminated, so the built problem matches the program above
/// line for line.
pub fn build_primal_nu(map: &LinearMapRep) -> Result<(SdpProblem, NuPrimalVars)> {
    map.require_hptp(DEFAULT_CLASSIFY_TOL)?;
    let d = map.dim();
    let mut p = SdpProblem::new(Sense::Minimize);
    let j1 = p.hermitian_var(d * d, true);
    let j2 = p.hermitian_var(d * d, true);
    let p1 = p.scalar_var(false);
    let p2 = p.scalar_var(false);
    p.set_objective(ScalarExpr::from_scalars(&[(p1, 1.0), (p2, 1.0)]));
    p.add_matrix_eq(
        MatrixExpr::var(j1)
            .sub(MatrixExpr::var(j2))
            .sub(MatrixExpr::constant(map.choi().clone())),
    );
    p.add_matrix_eq(
        MatrixExpr::var(j1)
            .trace_out_second((d, d))
            .sub(MatrixExpr::scaled_identity(p1, d, 1.0)),
    );
    p.add_matrix_eq(
        MatrixExpr::var(j2)
            .trace_out_second((d, d))
            .sub(MatrixExpr::scaled_identity(p2, d, 1.0)),
    );
    Ok((p, NuPrimalVars { j1, j2, p1, p2 }))
}

/// Variables of the dual implementability program.
pub struct NuDualVars {
    pub m: VarId,
    pub n: VarId,
    pub k: VarId,
}

/// Dual program for `2^nu`:
///
/// ```text
/// max  tr[M J_N]
/// s.t. tr N = 1,  tr K = 1
///      M + N (x) I >= 0
///      -M + K (x) I >= 0
/// ```
///
/// with Hermitian `M` on the doubled system and Hermitian `N`, `K` on the
/// input copy (the first Choi factor).
pub fn build_dual_nu(map: &LinearMapRep) -> Result<(SdpProblem, NuDualVars)> {
    map.require_hptp(DEFAULT_CLASSIFY_TOL)?;
    let d = map.dim();
    let mut p = SdpProblem::new(Sense::Maximize);
    let m = p.hermitian_var(d * d, false);
    let n = p.hermitian_var(d, false);
    let k = p.hermitian_var(d, false);
    p.set_objective(ScalarExpr::trace_product(m, map.choi().clone()));
    p.add_scalar_eq(ScalarExpr::trace_of(n, d).plus_constant(-1.0));
    p.add_scalar_eq(ScalarExpr::trace_of(k, d).plus_constant(-1.0));
    p.add_psd(MatrixExpr::var(m).add(MatrixExpr::var(n).kron_id_right(d)));
    p.add_psd(
        MatrixExpr::var(m)
            .scale(-1.0)
            .add(MatrixExpr::var(k).kron_id_right(d)),
    );
    Ok((p, NuDualVars { m, n, k }))
}

/// Relaxation of the primal program from channels to subchannels: the
/// marginal equalities become `tr_out J_i <= p_i I`. The optimum is unchanged.
pub fn build_cptn_nu(map: &LinearMapRep) -> Result<(SdpProblem, NuPrimalVars)> {
    map.require_hptp(DEFAULT_CLASSIFY_TOL)?;
    let d = map.dim();
    let mut p = SdpProblem::new(Sense::Minimize);
    let j1 = p.hermitian_var(d * d, true);
    let j2 = p.hermitian_var(d * d, true);
    let p1 = p.scalar_var(false);
    let p2 = p.scalar_var(false);
    p.set_objective(ScalarExpr::from_scalars(&[(p1, 1.0), (p2, 1.0)]));
    p.add_matrix_eq(
        MatrixExpr::var(j1)
            .sub(MatrixExpr::var(j2))
            .sub(MatrixExpr::constant(map.choi().clone())),
    );
    p.add_psd(
        MatrixExpr::scaled_identity(p1, d, 1.0).sub(MatrixExpr::var(j1).trace_out_second((d, d))),
    );
    p.add_psd(
        MatrixExpr::scaled_identity(p2, d, 1.0).sub(MatrixExpr::var(j2).trace_out_second((d, d))),
    );
    Ok((p, NuPrimalVars { j1, j2, p1, p2 }))
}

/// Variables of the simplified robustness primal.
pub struct RobustnessPrimalVars {
    pub j_tilde: VarId,
    pub s: VarId,
}

/// Simplified primal for the robustness `R`:
///
/// ```text
/// min  s
/// s.t. Jt >= J_N
///      tr_out Jt = (s + 1) I
///      Jt >= 0,  s >= 0
/// ```
pub fn build_robustness_primal(map: &LinearMapRep) -> Result<(SdpProblem, RobustnessPrimalVars)> {
    map.require_hptp(DEFAULT_CLASSIFY_TOL)?;
    let d = map.dim();
    let mut p = SdpProblem::new(Sense::Minimize);
    let j_tilde = p.hermitian_var(d * d, true);
    let s = p.scalar_var(true);
    p.set_objective(ScalarExpr::from_scalars(&[(s, 1.0)]));
    p.add_psd(MatrixExpr::var(j_tilde).sub(MatrixExpr::constant(map.choi().clone())));
    p.add_matrix_eq(
        MatrixExpr::var(j_tilde)
            .trace_out_second((d, d))
            .sub(MatrixExpr::scaled_identity(s, d, 1.0))
            .sub(MatrixExpr::constant(CMatrix::identity(d))),
    );
    Ok((p, RobustnessPrimalVars { j_tilde, s }))
}

/// Variables of the robustness dual.
pub struct RobustnessDualVars {
    pub m: VarId,
    pub n: VarId,
}

/// Dual of the simplified robustness program:
///
/// ```text
/// max  tr[M J_N] - 1
/// s.t. tr N = 1
///      M <= N (x) I
///      M >= 0
/// ```
pub fn build_robustness_dual(map: &LinearMapRep) -> Result<(SdpProblem, RobustnessDualVars)> {
    map.require_hptp(DEFAULT_CLASSIFY_TOL)?;
    let d = map.dim();
    let mut p = SdpProblem::new(Sense::Maximize);
    let m = p.hermitian_var(d * d, true);
    let n = p.hermitian_var(d, false);
    p.set_objective(ScalarExpr::trace_product(m, map.choi().clone()).plus_constant(-1.0));
    p.add_scalar_eq(ScalarExpr::trace_of(n, d).plus_constant(-1.0));
    p.add_psd(MatrixExpr::var(n).kron_id_right(d).sub(MatrixExpr::var(m)));
    Ok((p, RobustnessDualVars { m, n }))
}

/// Variables of the unsimplified robustness program.
pub struct RobustnessFullVars {
    pub y_t: VarId,
    pub y_k: VarId,
    pub s: VarId,
}

/// The three-variable robustness program before simplification, over the
/// mixing channel `T` and the mixture channel `K`:
///
/// ```text
/// min  s
/// s.t. J_N + s J_T = (1 + s) J_K
///      J_T, J_K channel Choi operators,  s >= 0
/// ```
///
/// Stated as an SDP through the scaled variables `Y_T = s J_T` and
/// `Y_K = (1 + s) J_K`, whose marginals must equal `s I` and `(1 + s) I`.
/// Used as a spot-check that the simplification step preserves the optimum.
pub fn build_robustness_unsimplified(
    map: &LinearMapRep,
) -> Result<(SdpProblem, RobustnessFullVars)> {
    map.require_hptp(DEFAULT_CLASSIFY_TOL)?;
    let d = map.dim();
    let mut p = SdpProblem::new(Sense::Minimize);
    let y_t = p.hermitian_var(d * d, true);
    let y_k = p.hermitian_var(d * d, true);
    let s = p.scalar_var(true);
    p.set_objective(ScalarExpr::from_scalars(&[(s, 1.0)]));
    p.add_matrix_eq(
        MatrixExpr::constant(map.choi().clone())
            .add(MatrixExpr::var(y_t))
            .sub(MatrixExpr::var(y_k)),
    );
    p.add_matrix_eq(
        MatrixExpr::var(y_t)
            .trace_out_second((d, d))
            .sub(MatrixExpr::scaled_identity(s, d, 1.0)),
    );
    p.add_matrix_eq(
        MatrixExpr::var(y_k)
            .trace_out_second((d, d))
            .sub(MatrixExpr::scaled_identity(s, d, 1.0))
            .sub(MatrixExpr::constant(CMatrix::identity(d))),
    );
    Ok((p, RobustnessFullVars { y_t, y_k, s }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;
    use crate::testutil::{sigma_x, sigma_y};
    use crate::zoo;

    #[test]
    fn scalar_bound_program() {
        // minimize x subject to x >= 1, as a 1x1 PSD block.
        let mut p = SdpProblem::new(Sense::Minimize);
        let x = p.hermitian_var(1, false);
        p.set_objective(ScalarExpr::trace_of(x, 1));
        p.add_psd(MatrixExpr::var(x).sub(MatrixExpr::constant(CMatrix::identity(1))));
        let sol = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        assert!((sol.primal_value - 1.0).abs() < 1e-7);
        assert!(sol.gap < 1e-6);
    }

    #[test]
    fn minimum_eigenvalue_program_pins_conventions() {
        // min tr(C X) s.t. tr X = 1, X >= 0 equals the smallest eigenvalue
        // of C; run with both a real and an imaginary off-diagonal C so the
        // symmetric embedding and svec scaling are both exercised.
        for c in [sigma_x(), sigma_y()] {
            let mut p = SdpProblem::new(Sense::Minimize);
            let x = p.hermitian_var(2, true);
            p.set_objective(ScalarExpr::trace_product(x, c.clone()));
            p.add_scalar_eq(ScalarExpr::trace_of(x, 2).plus_constant(-1.0));
            let sol = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
            assert!(
                (sol.primal_value - (-1.0)).abs() < 1e-7,
                "got {}",
                sol.primal_value
            );
            // The optimizer is the projector onto the minimal eigenvector.
            let xv = sol.matrix(x);
            assert!((xv.trace().re - 1.0).abs() < 1e-7);
            assert!((c.re_trace_product(xv) - (-1.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn maximize_sense_round_trips() {
        // max tr(C X) with the same constraints gives the largest eigenvalue.
        let mut p = SdpProblem::new(Sense::Maximize);
        let x = p.hermitian_var(2, true);
        p.set_objective(ScalarExpr::trace_product(x, sigma_y()).plus_constant(3.0));
        p.add_scalar_eq(ScalarExpr::trace_of(x, 2).plus_constant(-1.0));
        let sol = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        assert!((sol.primal_value - 4.0).abs() < 1e-7);
    }

    #[test]
    fn primal_nu_of_identity_is_one() {
        let id = LinearMapRep::identity(2);
        let (p, vars) = build_primal_nu(&id).unwrap();
        let sol = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        assert!((sol.primal_value - 1.0).abs() < 1e-7);
        assert!((sol.scalar(vars.p1) - sol.scalar(vars.p2) - 1.0).abs() < 1e-6);

        let (dual, _) = build_dual_nu(&id).unwrap();
        let dsol = dual.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        assert!((dsol.primal_value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn primal_and_dual_agree_on_inverse_amplitude_damping() {
        let inv = zoo::amplitude_damping(0.5)
            .unwrap()
            .to_map()
            .inverse(crate::channel::DEFAULT_COND_LIMIT)
            .unwrap();
        let (p, vars) = build_primal_nu(&inv).unwrap();
        let psol = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        let (d, _) = build_dual_nu(&inv).unwrap();
        let dsol = d.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        // 2^nu = (1 + eps) / (1 - eps) = 3 at eps = 1/2.
        assert!(
            (psol.primal_value - 3.0).abs() < 1e-6,
            "primal {}",
            psol.primal_value
        );
        assert!(
            (dsol.primal_value - 3.0).abs() < 1e-6,
            "dual {}",
            dsol.primal_value
        );

        // Feasibility of the returned primal certificate.
        let j1 = psol.matrix(vars.j1);
        let j2 = psol.matrix(vars.j2);
        assert!(j1.sub(j2).max_abs_diff(inv.choi()) < 1e-7);
        let marg = partial_trace(j1, (2, 2), Subsystem::First).unwrap();
        let target = CMatrix::identity(2).scale_re(psol.scalar(vars.p1));
        assert!(marg.max_abs_diff(&target) < 1e-7);
        assert!(crate::matrix::min_eigenvalue(j1).unwrap() > -1e-7);
        assert!(crate::matrix::min_eigenvalue(j2).unwrap() > -1e-7);
    }

    #[test]
    fn cptn_relaxation_matches_channel_program() {
        let inv = zoo::amplitude_damping(0.5)
            .unwrap()
            .to_map()
            .inverse(crate::channel::DEFAULT_COND_LIMIT)
            .unwrap();
        let (relaxed, _) = build_cptn_nu(&inv).unwrap();
        let rsol = relaxed.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        assert!((rsol.primal_value - 3.0).abs() < 1e-6);

        for seed in [1u64, 2, 3] {
            let map = zoo::random_hptp(2, seed);
            let a = build_primal_nu(&map)
                .unwrap()
                .0
                .solve_optimal(DEFAULT_SOLVER_TOL)
                .unwrap();
            let b = build_cptn_nu(&map)
                .unwrap()
                .0
                .solve_optimal(DEFAULT_SOLVER_TOL)
                .unwrap();
            assert!(
                (a.primal_value - b.primal_value).abs() < 1e-6,
                "seed {seed}: {} vs {}",
                a.primal_value,
                b.primal_value
            );
        }
    }

    #[test]
    fn robustness_programs_agree() {
        // A channel has zero robustness.
        let cptp = zoo::amplitude_damping(0.3).unwrap().to_map();
        let (p, _) = build_robustness_primal(&cptp).unwrap();
        let sol = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        assert!(sol.primal_value.abs() < 1e-6);

        // Inverse dephasing at eps = 1/4: R = 1/2.
        let inv = zoo::dephasing_qubit(0.25)
            .unwrap()
            .inverse(crate::channel::DEFAULT_COND_LIMIT)
            .unwrap();
        let primal = build_robustness_primal(&inv)
            .unwrap()
            .0
            .solve_optimal(DEFAULT_SOLVER_TOL)
            .unwrap();
        let dual = build_robustness_dual(&inv)
            .unwrap()
            .0
            .solve_optimal(DEFAULT_SOLVER_TOL)
            .unwrap();
        let full = build_robustness_unsimplified(&inv)
            .unwrap()
            .0
            .solve_optimal(DEFAULT_SOLVER_TOL)
            .unwrap();
        assert!(
            (primal.primal_value - 0.5).abs() < 1e-6,
            "primal {}",
            primal.primal_value
        );
        assert!(
            (dual.primal_value - 0.5).abs() < 1e-6,
            "dual {}",
            dual.primal_value
        );
        assert!(
            (full.primal_value - 0.5).abs() < 1e-6,
            "unsimplified {}",
            full.primal_value
        );
    }

    #[test]
    fn builders_reject_non_hptp_maps() {
        // A non-TP map: halved dephasing Choi.
        let half =
            LinearMapRep::from_choi(2, zoo::dephasing_qubit(0.25).unwrap().choi().scale_re(0.5))
                .unwrap();
        assert!(build_primal_nu(&half).is_err());
        assert!(build_dual_nu(&half).is_err());
        assert!(build_cptn_nu(&half).is_err());
        assert!(build_robustness_primal(&half).is_err());

        // A non-HP map: random Choi.
        let raw = LinearMapRep::from_choi(2, crate::testutil::test_matrix(4, 4, 3)).unwrap();
        assert!(build_primal_nu(&raw).is_err());
    }

    #[test]
    fn solve_is_deterministic() {
        let inv = zoo::dephasing_qubit(0.25)
            .unwrap()
            .inverse(crate::channel::DEFAULT_COND_LIMIT)
            .unwrap();
        let (p, vars) = build_primal_nu(&inv).unwrap();
        let a = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        let b = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        assert_eq!(a.primal_value.to_bits(), b.primal_value.to_bits());
        assert_eq!(a.matrix(vars.j1), b.matrix(vars.j1));
    }

    #[test]
    fn gaussian_elimination_edge_infeasible() {
        // x >= 1 and x <= 0 simultaneously: infeasible.
        let mut p = SdpProblem::new(Sense::Minimize);
        let x = p.hermitian_var(1, false);
        p.set_objective(ScalarExpr::trace_of(x, 1));
        p.add_psd(MatrixExpr::var(x).sub(MatrixExpr::constant(CMatrix::identity(1))));
        p.add_psd(MatrixExpr::var(x).scale(-1.0));
        let sol = p.solve(DEFAULT_SOLVER_TOL).unwrap();
        assert_eq!(sol.status, SdpStatus::Infeasible);
    }

    #[test]
    fn certified_gap_and_psd_vars() {
        let inv = zoo::depolarizing(2, 0.2)
            .unwrap()
            .inverse(crate::channel::DEFAULT_COND_LIMIT)
            .unwrap();
        let (p, vars) = build_primal_nu(&inv).unwrap();
        let sol = p.solve_optimal(DEFAULT_SOLVER_TOL).unwrap();
        assert!(sol.gap <= 1e-6);
        for id in [vars.j1, vars.j2] {
            let min = crate::matrix::min_eigenvalue(sol.matrix(id)).unwrap();
            assert!(min >= -10.0 * DEFAULT_SOLVER_TOL, "min eig {min}");
        }
        let _ = C64::new(0.0, 0.0);
    }
}
