//! Stage 2: from the potential `r(x)` back to the dielectric profile
//! `c(y)`. With `p(x) = c(y(x))^{-1/2}` and `S = sqrt(p)` the potential
//! `r = S''/S - 2 (S'/S)^2` satisfies `p'' p / 2 - 3 p'^2 / 4 = r p^2`,
//! `p(0) = 1`, `p'(0) = 0` (see [`Relation`]). Intervals where
//! `r <= 0` are integrated as an initial value problem; where `r > 0` the
//! forward integration is unstable, so `p` is fitted by exponentially
//! weighted least squares. Depth follows from `y' = p`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::convexify::PotentialProfile;
use crate::error::{Error, Result};
use crate::grid::{GridFn1D, NaturalCubicSpline, UniformGrid1D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    /// `r <= 0` (within the dead-band): Runge-Kutta.
    Negative,
    /// `r > 0`: weighted least squares.
    Positive,
}

/// A run of nodes `start..=end` of the refined grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start: usize,
    pub end: usize,
    pub x_start: f64,
    pub x_end: f64,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.x_end - self.x_start
    }
}

/// Abutting sign intervals tiling the grid; consecutive segments share
/// their boundary node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalPartition {
    pub segments: Vec<Segment>,
}

impl IntervalPartition {
    pub fn neg_intervals(&self) -> Vec<(f64, f64)> {
        self.of_kind(SegmentKind::Negative)
    }

    pub fn pos_intervals(&self) -> Vec<(f64, f64)> {
        self.of_kind(SegmentKind::Positive)
    }

    fn of_kind(&self, kind: SegmentKind) -> Vec<(f64, f64)> {
        self.segments
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| (s.x_start, s.x_end))
            .collect()
    }
}

/// Relative dead-band below which `r` counts as non-positive.
pub const DEAD_BAND: f64 = 0.02;
/// Runs shorter than this many nodes are merged into a neighbour.
pub const MIN_RUN: usize = 3;

/// Split the grid by the sign of `r`, with `|r| < threshold · max|r|`
/// counted as non-positive.
pub fn segment_intervals(r: &GridFn1D, threshold: f64) -> IntervalPartition {
    let n = r.values.len();
    let g = r.grid;
    let peak = r.max_abs();
    let whole = |kind| IntervalPartition {
        segments: vec![Segment {
            kind,
            start: 0,
            end: n - 1,
            x_start: g.start(),
            x_end: g.end(),
        }],
    };
    if peak == 0.0 || n < 2 {
        return whole(SegmentKind::Negative);
    }
    let kind_of = |v: f64| {
        if v > threshold * peak {
            SegmentKind::Positive
        } else {
            SegmentKind::Negative
        }
    };
    // Runs as (kind, first node, node count).
    let mut runs: Vec<(SegmentKind, usize, usize)> = Vec::new();
    for (k, v) in r.values.iter().enumerate() {
        let kind = kind_of(*v);
        match runs.last_mut() {
            Some(run) if run.0 == kind => run.2 += 1,
            _ => runs.push((kind, k, 1)),
        }
    }
    loop {
        let short = runs.iter().position(|run| run.2 < MIN_RUN);
        let Some(idx) = short else { break };
        if runs.len() == 1 {
            break;
        }
        let run = runs.remove(idx);
        if idx == 0 {
            runs[0].1 = run.1;
            runs[0].2 += run.2;
        } else {
            runs[idx - 1].2 += run.2;
        }
        // Merge neighbours that now share a kind.
        let mut merged: Vec<(SegmentKind, usize, usize)> = Vec::with_capacity(runs.len());
        for r in runs {
            match merged.last_mut() {
                Some(m) if m.0 == r.0 => m.2 += r.2,
                _ => merged.push(r),
            }
        }
        runs = merged;
    }
    if runs.len() == 1 {
        return whole(runs[0].0);
    }
    let segments = runs
        .iter()
        .enumerate()
        .map(|(k, &(kind, first, count))| {
            let end = if k + 1 == runs.len() { n - 1 } else { first + count };
            Segment {
                kind,
                start: first,
                end,
                x_start: g.node(first),
                x_end: g.node(end),
            }
        })
        .collect();
    IntervalPartition { segments }
}

/// `ρ*(l) = (2.1457/l + 2.1081/l + 14.40) / 2`.
pub fn rho_star(l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::Argument(format!("interval length must be positive, got {l}")));
    }
    Ok((2.1457 / l + 2.1081 / l + 14.40) / 2.0)
}

/// Which ODE links `p` to `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `p'' p / 2 - 3 p'^2 / 4 = r p^2`, exact for `r = S''/S - 2 (S'/S)^2`.
    #[default]
    Liouville,
    /// `p'' p / 2 - p'^2 / 4 = r`.
    Reduced,
}

impl Relation {
    fn kappa(self) -> f64 {
        match self {
            Relation::Liouville => 3.0,
            Relation::Reduced => 1.0,
        }
    }

    /// Power of `p` multiplying `r`.
    fn beta(self) -> i32 {
        match self {
            Relation::Liouville => 2,
            Relation::Reduced => 0,
        }
    }

    /// `p'' p / 2 - κ p'^2 / 4 - r p^β`.
    pub fn residual(self, r: f64, p: f64, dp: f64, d2p: f64) -> f64 {
        0.5 * d2p * p - 0.25 * self.kappa() * dp * dp - r * p.powi(self.beta())
    }

    /// `p''` solving the ODE.
    pub fn second_derivative(self, r: f64, p: f64, dp: f64) -> f64 {
        2.0 / p * (r * p.powi(self.beta()) + 0.25 * self.kappa() * dp * dp)
    }

    /// `r` produced by a given `p`.
    pub fn potential(self, p: f64, dp: f64, d2p: f64) -> f64 {
        (0.5 * d2p * p - 0.25 * self.kappa() * dp * dp) / p.powi(self.beta())
    }
}

impl std::str::FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "liouville" => Ok(Relation::Liouville),
            "reduced" => Ok(Relation::Reduced),
            other => Err(Error::Argument(format!(
                "unknown relation `{other}` (liouville|reduced)"
            ))),
        }
    }
}

/// `p`, `p'`, `p''` on a run of nodes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PtildeProfile {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    pub d2p: Vec<f64>,
}

impl PtildeProfile {
    pub fn last(&self) -> Option<(f64, f64, f64)> {
        let k = self.x.len().checked_sub(1)?;
        Some((self.p[k], self.dp[k], self.d2p[k]))
    }

    /// Append `other`, dropping its first node when it repeats our last.
    fn extend(&mut self, other: &PtildeProfile) {
        let skip = match (self.x.last(), other.x.first()) {
            (Some(a), Some(b)) if (a - b).abs() <= 1e-12 * (1.0 + a.abs()) => 1,
            _ => 0,
        };
        self.x.extend_from_slice(&other.x[skip..]);
        self.p.extend_from_slice(&other.p[skip..]);
        self.dp.extend_from_slice(&other.dp[skip..]);
        self.d2p.extend_from_slice(&other.d2p[skip..]);
    }
}

/// Classical RK4 for the ODE of `rel` over `[x0, x1]` in `steps` equal
/// steps. `r` is evaluated at the half steps as well.
pub fn rk_advance(
    rel: Relation,
    r: &dyn Fn(f64) -> f64,
    x0: f64,
    x1: f64,
    steps: usize,
    init: (f64, f64),
) -> Result<PtildeProfile> {
    if !(init.0 > 0.0) {
        return Err(Error::PhysicalBreakdown { x: x0, value: init.0 });
    }
    let steps = steps.max(1);
    let h = (x1 - x0) / steps as f64;
    let f = |x: f64, p: f64, dp: f64| (dp, rel.second_derivative(r(x), p, dp));
    let mut out = PtildeProfile::default();
    let (mut p, mut dp) = init;
    let push = |out: &mut PtildeProfile, x: f64, p: f64, dp: f64| {
        out.x.push(x);
        out.p.push(p);
        out.dp.push(dp);
        out.d2p.push(rel.second_derivative(r(x), p, dp));
    };
    push(&mut out, x0, p, dp);
    for k in 0..steps {
        let x = x0 + k as f64 * h;
        let k1 = f(x, p, dp);
        let k2 = f(x + 0.5 * h, p + 0.5 * h * k1.0, dp + 0.5 * h * k1.1);
        let k3 = f(x + 0.5 * h, p + 0.5 * h * k2.0, dp + 0.5 * h * k2.1);
        let k4 = f(x + h, p + h * k3.0, dp + h * k3.1);
        p += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dp += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        let xn = if k + 1 == steps { x1 } else { x0 + (k + 1) as f64 * h };
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::PhysicalBreakdown { x: xn, value: p });
        }
        push(&mut out, xn, p, dp);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WlsReport {
    pub rho: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Weighted residual norm of the cubic initial iterate and of the result.
    pub initial_residual: f64,
    pub final_residual: f64,
    /// `|p'' p/2 - p'^2/4 - r|` at the first free residual node, before and
    /// after the fit.
    pub initial_left_residual: f64,
    pub final_left_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WlsOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for WlsOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: 1e-9,
        }
    }
}

/// Residuals `F_k` of the ODE at `k = 1..n`, with central differences
/// inside and second-order backward differences at the right end.
fn wls_residuals(rel: Relation, p: &[f64], r: &[f64], h: f64) -> Vec<f64> {
    let n = p.len() - 1;
    (1..=n)
        .map(|k| {
            let (d1, d2) = if k < n {
                (
                    (p[k + 1] - p[k - 1]) / (2.0 * h),
                    (p[k + 1] - 2.0 * p[k] + p[k - 1]) / (h * h),
                )
            } else {
                (
                    (3.0 * p[n] - 4.0 * p[n - 1] + p[n - 2]) / (2.0 * h),
                    (2.0 * p[n] - 5.0 * p[n - 1] + 4.0 * p[n - 2] - p[n - 3]) / (h * h),
                )
            };
            rel.residual(r[k], p[k], d1, d2)
        })
        .collect()
}

/// Jacobian of [`wls_residuals`] with respect to every node value.
fn wls_jacobian(rel: Relation, p: &[f64], r: &[f64], h: f64) -> DMatrix<f64> {
    let n = p.len() - 1;
    let (kappa, beta) = (rel.kappa(), rel.beta());
    let mut jac = DMatrix::zeros(n, n + 1);
    for k in 1..=n {
        let row = k - 1;
        // (node, weight in p', weight in p'')
        let stencil: Vec<(usize, f64, f64)> = if k < n {
            vec![
                (k - 1, -0.5 / h, 1.0 / (h * h)),
                (k, 0.0, -2.0 / (h * h)),
                (k + 1, 0.5 / h, 1.0 / (h * h)),
            ]
        } else {
            vec![
                (n, 1.5 / h, 2.0 / (h * h)),
                (n - 1, -2.0 / h, -5.0 / (h * h)),
                (n - 2, 0.5 / h, 4.0 / (h * h)),
                (n - 3, 0.0, -1.0 / (h * h)),
            ]
        };
        let d1: f64 = stencil.iter().map(|&(m, c1, _)| c1 * p[m]).sum();
        let d2: f64 = stencil.iter().map(|&(m, _, c2)| c2 * p[m]).sum();
        for &(m, c1, c2) in &stencil {
            jac[(row, m)] += 0.5 * p[k] * c2 - 0.5 * kappa * d1 * c1;
        }
        let own = if beta == 0 {
            0.0
        } else {
            beta as f64 * r[k] * p[k].powi(beta - 1)
        };
        jac[(row, k)] += 0.5 * d2 - own;
    }
    jac
}

/// Fit `p` on the nodes `x_0 = b1, ..., x_n = b2` (step `h`) by minimizing
/// `Σ_k |F_k|^2 exp(-2ρ(x_k - b1)) h`, `F` the residual of `rel`. The values at the
/// first three nodes are fixed by the Taylor expansion of `init = (p, p',
/// p'')` at `b1`; the rest start from the cubic that matches `init` at `b1`
/// and equals 1 at `b2`, and are refined by damped Gauss-Newton.
pub fn wls_fit(
    rel: Relation,
    r: &[f64],
    b1: f64,
    h: f64,
    init: (f64, f64, f64),
    rho: f64,
    opts: WlsOptions,
) -> Result<(PtildeProfile, WlsReport)> {
    let n = r.len().saturating_sub(1);
    if n < 4 {
        return Err(Error::Argument(format!(
            "weighted fit needs at least 5 nodes, got {}",
            r.len()
        )));
    }
    if !(rho >= 0.0) {
        return Err(Error::Argument(format!("rho must be >= 0, got {rho}")));
    }
    if !(init.0 > 0.0) {
        return Err(Error::PhysicalBreakdown { x: b1, value: init.0 });
    }
    let (p0, dp0, d2p0) = init;
    let l = n as f64 * h;
    let cubic = (1.0 - p0 - dp0 * l - 0.5 * d2p0 * l * l) / (l * l * l);
    let mut p: Vec<f64> = (0..=n)
        .map(|k| {
            let d = k as f64 * h;
            p0 + dp0 * d + 0.5 * d2p0 * d * d + cubic * d * d * d
        })
        .collect();
    for (k, pk) in p.iter_mut().take(3).enumerate() {
        let d = k as f64 * h;
        *pk = p0 + dp0 * d + 0.5 * d2p0 * d * d;
    }
    let w: Vec<f64> = (1..=n).map(|k| (-2.0 * rho * k as f64 * h).exp() * h).collect();
    let cost = |p: &[f64]| -> f64 {
        wls_residuals(rel, p, r, h)
            .iter()
            .zip(&w)
            .map(|(f, w)| w * f * f)
            .sum::<f64>()
    };
    let initial_residual = cost(&p).sqrt();
    let initial_left_residual = wls_residuals(rel, &p, r, h)[1].abs();

    let free = n - 2;
    let mut c = cost(&p);
    let mut mu = 1e-3;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        let f = DVector::from_vec(wls_residuals(rel, &p, r, h));
        let jfull = wls_jacobian(rel, &p, r, h);
        let sw = DVector::from_iterator(n, w.iter().map(|v| v.sqrt()));
        let mut j = jfull.columns(3, free).into_owned();
        for row in 0..n {
            for col in 0..free {
                j[(row, col)] *= sw[row];
            }
        }
        let fw = f.component_mul(&sw);
        let jtj = j.transpose() * &j;
        let jtf = j.transpose() * fw;
        let mut accepted = false;
        for _ in 0..40 {
            let mut lhs = jtj.clone();
            for d in 0..free {
                lhs[(d, d)] += mu * jtj[(d, d)].max(1e-300);
            }
            let Some(step) = lhs.cholesky().map(|ch| ch.solve(&(-&jtf))) else {
                mu *= 10.0;
                continue;
            };
            let mut trial = p.clone();
            for d in 0..free {
                trial[3 + d] += step[d];
            }
            let ct = cost(&trial);
            if ct.is_finite() && ct <= c {
                let pmax = trial.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let smax = step.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                p = trial;
                c = ct;
                mu = (mu / 10.0).max(1e-15);
                accepted = true;
                if smax < opts.tolerance * (1.0 + pmax) {
                    converged = true;
                }
                break;
            }
            mu *= 10.0;
        }
        if !accepted {
            // No descent direction left at working precision.
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged {
        log::warn!(
            "weighted fit on [{b1:.4}, {:.4}] stopped after {iterations} iterations (residual {:.3e})",
            b1 + l,
            c.sqrt()
        );
    }
    if let Some(k) = p.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::PhysicalBreakdown {
            x: b1 + k as f64 * h,
            value: p[k],
        });
    }
    let resid = wls_residuals(rel, &p, r, h);
    let report = WlsReport {
        rho,
        iterations,
        converged,
        initial_residual,
        final_residual: c.sqrt(),
        initial_left_residual,
        final_left_residual: resid[1].abs(),
    };
    let mut out = PtildeProfile::default();
    for k in 0..=n {
        let (d1, d2) = match k {
            0 => (dp0, d2p0),
            k if k < n => (
                (p[k + 1] - p[k - 1]) / (2.0 * h),
                (p[k + 1] - 2.0 * p[k] + p[k - 1]) / (h * h),
            ),
            _ => (
                (3.0 * p[n] - 4.0 * p[n - 1] + p[n - 2]) / (2.0 * h),
                (2.0 * p[n] - 5.0 * p[n - 1] + 4.0 * p[n - 2] - p[n - 3]) / (h * h),
            ),
        };
        out.x.push(b1 + k as f64 * h);
        out.p.push(p[k]);
        out.dp.push(d1);
        out.d2p.push(d2);
    }
    Ok((out, report))
}

/// Cumulative `y(x) = ∫_0^x p` by the trapezoid rule on the nodes of
/// `profile`, and the first `x` where `y` reaches `y_target` (linearly
/// interpolated), or the last node.
pub fn integrate_depth(profile: &PtildeProfile, y_target: f64) -> (Vec<f64>, f64) {
    let mut y = Vec::with_capacity(profile.x.len());
    let mut acc = 0.0;
    let mut x_stop = profile.x.last().copied().unwrap_or(0.0);
    let mut found = false;
    for k in 0..profile.x.len() {
        if k > 0 {
            let h = profile.x[k] - profile.x[k - 1];
            let prev = acc;
            acc += 0.5 * h * (profile.p[k] + profile.p[k - 1]);
            if !found && acc >= y_target {
                let frac = (y_target - prev) / (acc - prev);
                x_stop = profile.x[k - 1] + frac * h;
                found = true;
            }
        }
        y.push(acc);
    }
    (y, x_stop)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub segment: Segment,
    /// Present for weighted-fit segments.
    pub wls: Option<WlsReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RecoveryConfig {
    pub relation: Relation,
    /// Fixed `ρ` for every positive interval instead of `ρ*(l)`.
    pub rho_override: Option<f64>,
    pub dead_band: f64,
    /// Depth at which recovery stops.
    pub y_max: f64,
    /// Nodes of the output depth grid on `[0, y_max]`.
    pub output_nodes: usize,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self {
            relation: Relation::default(),
            rho_override: None,
            dead_band: DEAD_BAND,
            y_max: 1.0,
            output_nodes: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DielectricProfile {
    /// `c(y)` on a uniform depth grid over `[0, y_max]`.
    pub profile: GridFn1D,
    pub ptilde: PtildeProfile,
    pub partition: IntervalPartition,
    pub segments: Vec<SegmentReport>,
    pub x_stop: f64,
}

impl DielectricProfile {
    pub fn max_c(&self) -> f64 {
        self.profile.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_c(&self) -> f64 {
        self.profile.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Stage two with default settings.
pub fn run_algorithm2(r: &PotentialProfile) -> Result<DielectricProfile> {
    run_algorithm2_with(r, &RecoveryConfig::default())
}

pub fn run_algorithm2_with(r: &PotentialProfile, cfg: &RecoveryConfig) -> Result<DielectricProfile> {
    let fine = r.finest();
    let g = fine.grid;
    if g.start().abs() > 1e-12 {
        return Err(Error::Argument("potential grid must start at x = 0".into()));
    }
    if let Some(rho) = cfg.rho_override {
        if !(rho >= 0.0) {
            return Err(Error::Config(format!("rho override must be >= 0, got {rho}")));
        }
    }
    let h = g.step();
    let spline = NaturalCubicSpline::new(g.nodes().collect(), fine.values.clone())?;
    let (lo, hi) = (g.start(), g.end());
    let r_at = move |x: f64| spline.eval(x.clamp(lo, hi));
    let partition = segment_intervals(fine, cfg.dead_band);

    let mut ptilde = PtildeProfile::default();
    let mut reports = Vec::new();
    let mut state = (1.0, 0.0, 0.0);
    for seg in &partition.segments {
        let piece = match seg.kind {
            SegmentKind::Negative => {
                let piece = rk_advance(
                    cfg.relation,
                    &r_at,
                    seg.x_start,
                    seg.x_end,
                    seg.end - seg.start,
                    (state.0, state.1),
                )
                .map_err(|e| e.context(format!("RK on [{:.4}, {:.4}]", seg.x_start, seg.x_end)))?;
                reports.push(SegmentReport {
                    segment: *seg,
                    wls: None,
                });
                piece
            }
            SegmentKind::Positive => {
                let rho = match cfg.rho_override {
                    Some(v) => v,
                    None => rho_star(seg.length())?,
                };
                let rs = &fine.values[seg.start..=seg.end];
                let fit = if rs.len() >= 5 {
                    wls_fit(cfg.relation, rs, seg.x_start, h, state, rho, WlsOptions::default())
                        .map(|(p, rep)| (p, Some(rep)))
                } else {
                    rk_advance(
                        cfg.relation,
                        &r_at,
                        seg.x_start,
                        seg.x_end,
                        seg.end - seg.start,
                        (state.0, state.1),
                    )
                    .map(|p| (p, None))
                };
                let (piece, rep) =
                    fit.map_err(|e| e.context(format!("fit on [{:.4}, {:.4}]", seg.x_start, seg.x_end)))?;
                reports.push(SegmentReport {
                    segment: *seg,
                    wls: rep,
                });
                piece
            }
        };
        ptilde.extend(&piece);
        state = piece.last().expect("non-empty segment");
        let (y, _) = integrate_depth(&ptilde, cfg.y_max);
        if y.last().copied().unwrap_or(0.0) >= cfg.y_max {
            break;
        }
    }

    let (y, x_stop) = integrate_depth(&ptilde, cfg.y_max);
    if y.last().copied().unwrap_or(0.0) < cfg.y_max {
        log::warn!(
            "depth only reached y = {:.4} at x = {:.4}; holding c constant beyond",
            y.last().copied().unwrap_or(0.0),
            x_stop
        );
    }
    let c: Vec<f64> = ptilde.p.iter().map(|p| p.powi(-2)).collect();
    let out_grid = UniformGrid1D::spanning(0.0, cfg.y_max, cfg.output_nodes.max(2))?;
    let table = NaturalCubicSpline::new(y.clone(), c)?;
    let y_end = *y.last().unwrap();
    let profile = GridFn1D::from_fn(out_grid, |yy| table.eval(yy.min(y_end)));
    Ok(DielectricProfile {
        profile,
        ptilde,
        partition,
        segments: reports,
        x_stop,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonMode {
    /// Target denser than the background.
    #[default]
    Max,
    /// Target less dense than the background.
    Min,
}

impl std::str::FromStr for EpsilonMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "max" => Ok(EpsilonMode::Max),
            "min" => Ok(EpsilonMode::Min),
            other => Err(Error::Argument(format!("unknown epsilon mode `{other}` (max|min)"))),
        }
    }
}

/// Dielectric constant interval of a target: the extreme computed relative
/// value times the background interval.
pub fn epsilon_interval(extreme: f64, background: (f64, f64)) -> Result<(f64, f64)> {
    if !(background.0 <= background.1) {
        return Err(Error::Argument(format!(
            "background interval must satisfy lo <= hi, got [{}, {}]",
            background.0, background.1
        )));
    }
    Ok((extreme * background.0, extreme * background.1))
}

pub fn estimate_epsilon(c: &DielectricProfile, background: (f64, f64), mode: EpsilonMode) -> Result<(f64, f64)> {
    let extreme = match mode {
        EpsilonMode::Max => c.max_c(),
        EpsilonMode::Min => c.min_c(),
    };
    epsilon_interval(extreme, background)
}
