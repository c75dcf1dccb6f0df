//! Stage 1: the Carleman-weighted Tikhonov functional on the transformed
//! field `q(x, t)`, its gradient, the initial guess built from the boundary
//! data, gradient descent and extraction of the potential `r(x)`.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    h2_parts, pairwise_sum, simpson, GridFn1D, GridFn2D, NaturalCubicSpline, UniformGrid1D, UniformGrid2D,
};
use crate::preprocess::DerivedData;

/// Node count of the refined grid that `r` is resampled onto.
pub const REFINED_NODES: usize = 450;

/// Finite-difference form of the operator `M(q) = q_xx - 2 q_xt + 4 q_x(x,0) q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Central `q_xx` at `(i, j)`, forward mixed difference over the cell
    /// `[i, i+1] x [j, j+1]`, forward row difference for `q_x(x_i, 0)`.
    /// First order.
    Forward,
    /// Everything centred at `(x_i, t_{j+1/2})`: `q_xx` and `q` averaged
    /// over `j, j+1`, mixed difference over `[i-1, i+1] x [j, j+1]`, central
    /// row difference for `q_x(x_i, 0)`. Second order.
    #[default]
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CarlemanParams {
    pub lambda: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub scheme: Scheme,
}

impl Default for CarlemanParams {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            alpha: 0.5,
            gamma: 1e-6,
            scheme: Scheme::default(),
        }
    }
}

impl CarlemanParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 1.0) || !self.lambda.is_finite() {
            return Err(Error::Config(format!("lambda must be >= 1, got {}", self.lambda)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(Error::Config(format!("alpha must lie in (0, 0.5], got {}", self.alpha)));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Config(format!("gamma must lie in (0, 1), got {}", self.gamma)));
        }
        Ok(())
    }

    /// Lower end `2 exp(-λ α T̃)` of the regularization range covered by the
    /// convexity theory.
    pub fn theoretical_gamma_floor(&self, ttilde: f64) -> f64 {
        2.0 * (-self.lambda * self.alpha * ttilde).exp()
    }

    pub fn warn_if_below_theory(&self, ttilde: f64) {
        let floor = self.theoretical_gamma_floor(ttilde);
        if self.gamma < floor {
            log::warn!(
                "gamma = {:e} is below the convexity-theory floor {:.3e}; using it anyway",
                self.gamma,
                floor
            );
        }
    }
}

/// The Carleman weight `exp(-2λ(x + αt))`.
pub fn cwf(x: f64, t: f64, p: &CarlemanParams) -> f64 {
    (-2.0 * p.lambda * (x + p.alpha * t)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionDomain {
    pub cbar: f64,
    pub a: f64,
    pub ttilde: f64,
    pub grid: UniformGrid2D,
}

impl InversionDomain {
    pub const DEFAULT_NODES: usize = 100;

    pub fn new(cbar: f64) -> Result<Self> {
        Self::with_resolution(cbar, Self::DEFAULT_NODES, Self::DEFAULT_NODES)
    }

    /// `a = 1.1 √c̄`, `T̃ = 2a`, `nx × nt` cells.
    pub fn with_resolution(cbar: f64, nx: usize, nt: usize) -> Result<Self> {
        if !(cbar > 1.0) || !cbar.is_finite() {
            return Err(Error::Config(format!(
                "cbar must be > 1 (coefficients live in c ∈ [1, c̄]), got {cbar}"
            )));
        }
        if nx < 6 || nt < 6 {
            return Err(Error::Config(format!(
                "inversion grid needs at least 6 cells per axis, got {nx} x {nt}"
            )));
        }
        let a = 1.1 * cbar.sqrt();
        let ttilde = 2.0 * a;
        let grid = UniformGrid2D::new(
            UniformGrid1D::spanning(0.0, a, nx + 1)?,
            UniformGrid1D::spanning(0.0, ttilde, nt + 1)?,
        );
        Ok(Self { cbar, a, ttilde, grid })
    }

    pub fn x_grid(&self) -> UniformGrid1D {
        self.grid.x
    }

    pub fn t_grid(&self) -> UniformGrid1D {
        self.grid.t
    }
}

/// The unknown field together with the data it is pinned to: rows `i = 0`
/// and `i = 1` carry `s0` and `s0 + h_x s1`, and the last row copies the one
/// before it (zero Neumann derivative at `x = a`).
#[derive(Debug, Clone, PartialEq)]
pub struct QField {
    pub q: GridFn2D,
    pub s0: Vec<f64>,
    pub s1: Vec<f64>,
}

impl QField {
    pub fn new(q: GridFn2D, s0: Vec<f64>, s1: Vec<f64>) -> Result<Self> {
        let (nx, nt) = q.grid.shape();
        if s0.len() != nt || s1.len() != nt {
            return Err(Error::Argument(format!(
                "boundary data length {}/{} does not match {} time nodes",
                s0.len(),
                s1.len(),
                nt
            )));
        }
        if nx < 4 {
            return Err(Error::Argument("field needs at least 4 rows in x".into()));
        }
        let mut f = Self { q, s0, s1 };
        f.enforce();
        Ok(f)
    }

    /// A field with zero boundary data, for tests and probes.
    pub fn unconstrained_zero(grid: UniformGrid2D) -> Self {
        let nt = grid.t.count();
        Self {
            q: GridFn2D::zeros(grid),
            s0: vec![0.0; nt],
            s1: vec![0.0; nt],
        }
    }

    pub fn grid(&self) -> UniformGrid2D {
        self.q.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.q.values
    }

    /// Overwrite the pinned rows so the field satisfies its constraints.
    pub fn enforce(&mut self) {
        let (nx, nt) = self.q.grid.shape();
        let hx = self.q.grid.hx();
        let v = &mut self.q.values;
        for j in 0..nt {
            v[[0, j]] = self.s0[j];
            v[[1, j]] = self.s0[j] + hx * self.s1[j];
            v[[nx - 1, j]] = v[[nx - 2, j]];
        }
    }

    /// Largest violation of the pinned-row constraints.
    pub fn constraint_violation(&self) -> f64 {
        let (nx, nt) = self.q.grid.shape();
        let hx = self.q.grid.hx();
        let v = &self.q.values;
        (0..nt)
            .map(|j| {
                let a = (v[[0, j]] - self.s0[j]).abs();
                let b = ((v[[1, j]] - v[[0, j]]) / hx - self.s1[j]).abs();
                let c = ((v[[nx - 1, j]] - v[[nx - 2, j]]) / hx).abs();
                a.max(b).max(c)
            })
            .fold(0.0, f64::max)
    }

    /// Zero the components of `g` along pinned rows and replace the two
    /// Neumann-tied rows by their common reduced gradient.
    pub fn project_gradient(&self, g: &mut Array2<f64>) {
        let (nx, nt) = g.dim();
        for j in 0..nt {
            g[[0, j]] = 0.0;
            g[[1, j]] = 0.0;
            let tied = g[[nx - 2, j]] + g[[nx - 1, j]];
            g[[nx - 2, j]] = tied;
            g[[nx - 1, j]] = tied;
        }
    }
}

/// The discrete operator `M` at node `(i, j)`; valid for `1 <= i <= N_x - 1`
/// and `0 <= j <= N_t - 1` (0-based, `N_x + 1` rows).
pub fn operator_m(q: &GridFn2D, i: usize, j: usize) -> Result<f64> {
    let (nx, nt) = q.grid.shape();
    if !(i >= 1 && i + 1 < nx && j + 1 < nt) {
        return Err(Error::Bounds {
            stencil: "operator_M",
            index: (i, j),
            shape: (nx, nt),
        });
    }
    Ok(m_at(&q.values, i, j, q.grid.hx(), q.grid.ht(), Scheme::Forward))
}

/// [`operator_m`] for either scheme; same index range.
pub fn operator_m_scheme(q: &GridFn2D, i: usize, j: usize, scheme: Scheme) -> Result<f64> {
    operator_m(q, i, j)?;
    Ok(m_at(&q.values, i, j, q.grid.hx(), q.grid.ht(), scheme))
}

#[inline]
fn m_at(v: &Array2<f64>, i: usize, j: usize, hx: f64, ht: f64, scheme: Scheme) -> f64 {
    let dxx = |j: usize| (v[[i - 1, j]] - 2.0 * v[[i, j]] + v[[i + 1, j]]) / (hx * hx);
    match scheme {
        Scheme::Forward => {
            let dxt = ((v[[i + 1, j + 1]] - v[[i + 1, j]]) - (v[[i, j + 1]] - v[[i, j]])) / (hx * ht);
            let row = (v[[i + 1, 0]] - v[[i, 0]]) / hx;
            dxx(j) - 2.0 * dxt + 4.0 * row * v[[i, j]]
        }
        Scheme::Centered => {
            let dxt = ((v[[i + 1, j + 1]] - v[[i + 1, j]]) - (v[[i - 1, j + 1]] - v[[i - 1, j]])) / (2.0 * hx * ht);
            let row = (v[[i + 1, 0]] - v[[i - 1, 0]]) / (2.0 * hx);
            0.5 * (dxx(j) + dxx(j + 1)) - 2.0 * dxt + 2.0 * row * (v[[i, j]] + v[[i, j + 1]])
        }
    }
}

fn weights(grid: &UniformGrid2D, p: &CarlemanParams) -> Array2<f64> {
    let (nx, nt) = grid.shape();
    Array2::from_shape_fn((nx, nt), |(i, j)| cwf(grid.x.node(i), grid.t.node(j), p))
}

fn weighted_residual_sum(v: &Array2<f64>, grid: &UniformGrid2D, psi: &Array2<f64>, scheme: Scheme) -> f64 {
    let (nx, nt) = v.dim();
    let (hx, ht) = (grid.hx(), grid.ht());
    let rows: Vec<f64> = (1..nx - 1)
        .map(|i| {
            let terms: Vec<f64> = (0..nt - 1)
                .map(|j| {
                    let m = m_at(v, i, j, hx, ht, scheme);
                    m * m * psi[[i, j]]
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&rows) * grid.cell()
}

/// `K(q) = Σ M² ψ h_x h_t + γ ‖q‖²_{H²,h}`.
pub fn functional_k(q: &QField, p: &CarlemanParams) -> f64 {
    let grid = q.grid();
    let psi = weights(&grid, p);
    functional_k_with(&q.q.values, &grid, &psi, p)
}

fn functional_k_with(v: &Array2<f64>, grid: &UniformGrid2D, psi: &Array2<f64>, p: &CarlemanParams) -> f64 {
    weighted_residual_sum(v, grid, psi, p.scheme) + p.gamma * h2_parts(v, grid.hx(), grid.ht()).total()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    /// Exact derivative of the discrete functional at every node.
    #[default]
    Exact,
    /// Exact in the interior; the two outermost rows and columns on each
    /// side are replaced by the second-order Taylor extrapolation
    /// `g_k ≈ 5/2 g_{k+1} - 2 g_{k+2} + 1/2 g_{k+3}` from inside.
    Extrapolated,
}

/// Derivative of [`functional_k`] with respect to every node value, before
/// any constraint projection.
pub fn gradient_k(q: &QField, p: &CarlemanParams) -> GridFn2D {
    gradient_k_mode(q, p, GradientMode::Exact)
}

pub fn gradient_k_mode(q: &QField, p: &CarlemanParams, mode: GradientMode) -> GridFn2D {
    let grid = q.grid();
    let psi = weights(&grid, p);
    let mut g = exact_gradient(&q.q.values, &grid, &psi, p);
    if mode == GradientMode::Extrapolated {
        extrapolate_boundary(&mut g);
    }
    GridFn2D { grid, values: g }
}

fn exact_gradient(v: &Array2<f64>, grid: &UniformGrid2D, psi: &Array2<f64>, p: &CarlemanParams) -> Array2<f64> {
    let (nx, nt) = v.dim();
    let (hx, ht) = (grid.hx(), grid.ht());
    let cell = grid.cell();
    let gamma = p.gamma;
    let mut g = Array2::<f64>::zeros((nx, nt));

    let cxx = 1.0 / (hx * hx);
    match p.scheme {
        Scheme::Forward => {
            let cxt = 2.0 / (hx * ht);
            for i in 1..nx - 1 {
                let row = (v[[i + 1, 0]] - v[[i, 0]]) / hx;
                let mut row_adj = 0.0;
                for j in 0..nt - 1 {
                    let w = 2.0 * m_at(v, i, j, hx, ht, Scheme::Forward) * psi[[i, j]] * cell;
                    g[[i - 1, j]] += w * cxx;
                    g[[i, j]] += w * (-2.0 * cxx - cxt + 4.0 * row);
                    g[[i + 1, j]] += w * (cxx + cxt);
                    g[[i, j + 1]] += w * cxt;
                    g[[i + 1, j + 1]] -= w * cxt;
                    row_adj += w * 4.0 * v[[i, j]] / hx;
                }
                g[[i + 1, 0]] += row_adj;
                g[[i, 0]] -= row_adj;
            }
        }
        Scheme::Centered => {
            let cxt = 1.0 / (hx * ht);
            let hxx = 0.5 * cxx;
            for i in 1..nx - 1 {
                let row = (v[[i + 1, 0]] - v[[i - 1, 0]]) / (2.0 * hx);
                let mut row_adj = 0.0;
                for j in 0..nt - 1 {
                    let w = 2.0 * m_at(v, i, j, hx, ht, Scheme::Centered) * psi[[i, j]] * cell;
                    for jj in [j, j + 1] {
                        g[[i - 1, jj]] += w * hxx;
                        g[[i, jj]] += w * (-2.0 * hxx + 2.0 * row);
                        g[[i + 1, jj]] += w * hxx;
                    }
                    g[[i + 1, j + 1]] -= w * cxt;
                    g[[i + 1, j]] += w * cxt;
                    g[[i - 1, j + 1]] += w * cxt;
                    g[[i - 1, j]] -= w * cxt;
                    row_adj += w * (v[[i, j]] + v[[i, j + 1]]) / hx;
                }
                g[[i + 1, 0]] += row_adj;
                g[[i - 1, 0]] -= row_adj;
            }
        }
    }

    let s = 2.0 * gamma * cell;
    let (ix2, it2) = (1.0 / (hx * hx), 1.0 / (ht * ht));
    for i in 0..nx {
        for j in 0..nt {
            g[[i, j]] += s * v[[i, j]];
            if i + 1 < nx && j + 1 < nt {
                let dx = (v[[i + 1, j]] - v[[i, j]]) * ix2;
                let dt = (v[[i, j + 1]] - v[[i, j]]) * it2;
                g[[i + 1, j]] += s * dx;
                g[[i, j]] -= s * (dx + dt);
                g[[i, j + 1]] += s * dt;
            }
            if i >= 1 && i + 1 < nx && j >= 1 && j + 1 < nt {
                let dxx = (v[[i - 1, j]] - 2.0 * v[[i, j]] + v[[i + 1, j]]) * ix2 * ix2;
                let dtt = (v[[i, j - 1]] - 2.0 * v[[i, j]] + v[[i, j + 1]]) * it2 * it2;
                g[[i - 1, j]] += s * dxx;
                g[[i + 1, j]] += s * dxx;
                g[[i, j - 1]] += s * dtt;
                g[[i, j + 1]] += s * dtt;
                g[[i, j]] -= 2.0 * s * (dxx + dtt);
            }
        }
    }
    g
}

fn extrapolate_boundary(g: &mut Array2<f64>) {
    let (nx, nt) = g.dim();
    let ext = |a: f64, b: f64, c: f64| 2.5 * a - 2.0 * b + 0.5 * c;
    for j in 0..nt {
        for i in [1, 0] {
            g[[i, j]] = ext(g[[i + 1, j]], g[[i + 2, j]], g[[i + 3, j]]);
        }
        for i in [nx - 2, nx - 1] {
            g[[i, j]] = ext(g[[i - 1, j]], g[[i - 2, j]], g[[i - 3, j]]);
        }
    }
    for i in 0..nx {
        for j in [1, 0] {
            g[[i, j]] = ext(g[[i, j + 1]], g[[i, j + 2]], g[[i, j + 3]]);
        }
        for j in [nt - 2, nt - 1] {
            g[[i, j]] = ext(g[[i, j - 1]], g[[i, j - 2]], g[[i, j - 3]]);
        }
    }
}

/// `q⁰(x, t) = s0(t) + ½ ∫_t^{t+2x} s1(τ) dτ`, with the integral taken by
/// composite Simpson on panels no wider than `h_t / 8`.
pub fn initial_guess(data: &DerivedData, dom: &InversionDomain) -> Result<QField> {
    initial_guess_with(|t| data.s0_at(t), |t| data.s1_at(t), dom)
}

pub fn initial_guess_with(s0: impl Fn(f64) -> f64, s1: impl Fn(f64) -> f64, dom: &InversionDomain) -> Result<QField> {
    let grid = dom.grid;
    let panel = grid.ht() / 8.0;
    let q = GridFn2D::from_fn(grid, |x, t| {
        let mut n = ((2.0 * x / panel).ceil() as usize).max(2);
        n += n % 2;
        s0(t) + 0.5 * simpson(&s1, t, t + 2.0 * x, n)
    });
    let s0v = grid.t.nodes().map(&s0).collect();
    let s1v = grid.t.nodes().map(&s1).collect();
    QField::new(q, s0v, s1v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StoppingRule {
    /// Stop once `K ≤ k_ratio · K(q⁰)` ...
    pub k_ratio: f64,
    /// ... and `‖∇K‖∞ ≤ grad_ratio · ‖∇K(q⁰)‖∞`.
    pub grad_ratio: f64,
    pub max_iterations: usize,
    pub min_step: f64,
    pub gradient: GradientMode,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            k_ratio: 1e-2,
            grad_ratio: 1e-2,
            max_iterations: 5000,
            min_step: 1e-12,
            gradient: GradientMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescentRecord {
    pub iter: usize,
    pub k: f64,
    pub gradnorm: f64,
    pub step: f64,
    /// Discrete L2 norm of the iterate.
    pub qnorm: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DescentTrace {
    pub records: Vec<DescentRecord>,
    /// True when both thresholds were met before the iteration cap.
    pub converged: bool,
}

impl DescentTrace {
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn initial_k(&self) -> Option<f64> {
        self.records.first().map(|r| r.k)
    }

    pub fn final_k(&self) -> Option<f64> {
        self.records.last().map(|r| r.k)
    }
}

fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Projected gradient descent with step halving on non-decrease. The
/// halved step is kept for later iterations.
pub fn gdm_minimize(q0: &QField, p: &CarlemanParams, step: f64, caps: &StoppingRule) -> Result<(QField, DescentTrace)> {
    p.validate()?;
    if !(step > 0.0) {
        return Err(Error::Config(format!("descent step must be positive, got {step}")));
    }
    let grid = q0.grid();
    let psi = weights(&grid, p);
    let mut q = q0.clone();
    q.enforce();

    let grad = |q: &QField| {
        let mut g = exact_gradient(&q.q.values, &grid, &psi, p);
        if caps.gradient == GradientMode::Extrapolated {
            extrapolate_boundary(&mut g);
        }
        q.project_gradient(&mut g);
        g
    };

    let mut k = functional_k_with(&q.q.values, &grid, &psi, p);
    let mut g = grad(&q);
    let k0 = k;
    let g0 = max_abs(&g);
    let mut step = step;
    let mut trace = DescentTrace::default();
    trace.records.push(DescentRecord {
        iter: 0,
        k,
        gradnorm: g0,
        step,
        qnorm: q.q.discrete_l2().sqrt(),
    });
    let done = |k: f64, gn: f64| k <= caps.k_ratio * k0 && gn <= caps.grad_ratio * g0;
    if done(k, g0) {
        trace.converged = true;
        return Ok((q, trace));
    }

    for iter in 1..=caps.max_iterations {
        loop {
            let mut trial = q.clone();
            trial.q.values.scaled_add(-step, &g);
            trial.enforce();
            let kt = functional_k_with(&trial.q.values, &grid, &psi, p);
            if kt < k {
                q = trial;
                k = kt;
                break;
            }
            step *= 0.5;
            if step < caps.min_step {
                return Err(Error::Divergence {
                    min_step: caps.min_step,
                    trace: Box::new(trace),
                });
            }
        }
        g = grad(&q);
        let gn = max_abs(&g);
        trace.records.push(DescentRecord {
            iter,
            k,
            gradnorm: gn,
            step,
            qnorm: q.q.discrete_l2().sqrt(),
        });
        if done(k, gn) {
            trace.converged = true;
            break;
        }
    }
    if !trace.converged {
        log::info!(
            "descent stopped at the iteration cap {} with K = {:.3e} (K0 = {:.3e})",
            caps.max_iterations,
            k,
            k0
        );
    }
    Ok((q, trace))
}

/// Samples of `r(x)` plus an optional resampling onto [`REFINED_NODES`]
/// nodes over `[0, a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    pub profile: GridFn1D,
    pub refined: Option<GridFn1D>,
}

impl PotentialProfile {
    pub fn new(profile: GridFn1D) -> Self {
        Self { profile, refined: None }
    }

    pub fn grid(&self) -> UniformGrid1D {
        self.profile.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.profile.values
    }

    /// Natural cubic spline through the samples, held constant beyond the
    /// first and last node.
    pub fn interpolant(&self) -> Result<impl Fn(f64) -> f64> {
        let g = self.profile.grid;
        let spline = NaturalCubicSpline::new(g.nodes().collect(), self.profile.values.clone())?;
        let (lo, hi) = (g.start(), g.end());
        Ok(move |x: f64| spline.eval(x.clamp(lo, hi)))
    }

    /// Attach the resampling onto `count` uniform nodes spanning `[0, end]`.
    pub fn with_refined(mut self, end: f64, count: usize) -> Result<Self> {
        let target = UniformGrid1D::spanning(0.0, end, count)?;
        let f = self.interpolant()?;
        self.refined = Some(GridFn1D::from_fn(target, f));
        Ok(self)
    }

    /// The refined samples if present, otherwise the raw ones.
    pub fn finest(&self) -> &GridFn1D {
        self.refined.as_ref().unwrap_or(&self.profile)
    }
}

/// `‖f - g‖ / ‖g‖` in L2 over `[lo, hi]`, by Simpson on `2·panels` panels.
pub fn relative_l2_error(f: impl Fn(f64) -> f64, truth: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let n = 2 * panels.max(1);
    let num = simpson(|x| (f(x) - truth(x)).powi(2), lo, hi, n);
    let den = simpson(|x| truth(x).powi(2), lo, hi, n);
    if den == 0.0 {
        return if num == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (num / den).sqrt()
}

/// `r_i = 4 (q[i+1, 0] - q[i, 0]) / h_x`. Each forward difference is placed
/// at the cell midpoint `x_i + h_x/2`, where it is second-order accurate;
/// the result is then resampled onto [`REFINED_NODES`] nodes over `[0, a]`.
pub fn extract_r(q: &QField) -> Result<PotentialProfile> {
    let grid = q.grid();
    let (nx, _) = grid.shape();
    let hx = grid.hx();
    let v = &q.q.values;
    let values: Vec<f64> = (0..nx - 1).map(|i| 4.0 * (v[[i + 1, 0]] - v[[i, 0]]) / hx).collect();
    let mids = UniformGrid1D::new(grid.x.start() + 0.5 * hx, hx, nx - 1)?;
    PotentialProfile::new(GridFn1D::new(mids, values)?).with_refined(grid.x.end(), REFINED_NODES)
}
