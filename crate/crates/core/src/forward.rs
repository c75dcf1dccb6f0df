//! Forward problem: explicit finite differences for `c(y) u_tt = u_yy` on
//! `(-ỹ, ỹ) × (0, T)` with first-order absorbing ends, plus the travel-time
//! change of variables that turns a dielectric profile into the potential
//! `r(x)` seen by the inversion.

use std::f64::consts::PI;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::convexify::PotentialProfile;
use crate::error::{Error, Result};
use crate::grid::{simpson, GridFn1D, GridFn2D, MonotoneCubic, NaturalCubicSpline, UniformGrid1D, UniformGrid2D};
use crate::preprocess::TimeSeries;

/// `2 sqrt(2 ln 2)`: ratio between a Gaussian's full width at half maximum
/// and its standard deviation.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBump {
    pub center: f64,
    /// Full width at half maximum of the bump in `c^{-1/2}`.
    pub fwhm: f64,
}

impl GaussianBump {
    pub fn sigma(&self) -> f64 {
        self.fwhm / FWHM_PER_SIGMA
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// Homogeneous medium, `c ≡ value` everywhere (including outside `[0, 1]`).
    Constant { value: f64 },
    /// `c(y) = (1 - A Σ_k exp(-(y - m_k)^2 / (2 σ_k^2)))^{-2}` on `(0, 1)`,
    /// `c = 1` outside.
    Gaussians { amplitude: f64, bumps: Vec<GaussianBump> },
    /// Natural-spline interpolation of tabulated values on `(0, 1)`,
    /// `c = 1` outside.
    Tabulated { start: f64, step: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DielectricModel {
    pub profile: Profile,
    /// Known upper bound `c̄ > 1` of the coefficient.
    pub cbar: f64,
}

impl DielectricModel {
    pub fn constant(value: f64, cbar: f64) -> Result<Self> {
        Self::new(Profile::Constant { value }, cbar)
    }

    pub fn single_gaussian(amplitude: f64, fwhm: f64, cbar: f64) -> Result<Self> {
        Self::new(
            Profile::Gaussians {
                amplitude,
                bumps: vec![GaussianBump { center: 0.5, fwhm }],
            },
            cbar,
        )
    }

    /// The two-bump profile: bumps at 0.3 and 0.7.
    pub fn double_gaussian(amplitude: f64, fwhm_first: f64, fwhm_second: f64, cbar: f64) -> Result<Self> {
        Self::new(
            Profile::Gaussians {
                amplitude,
                bumps: vec![
                    GaussianBump {
                        center: 0.3,
                        fwhm: fwhm_first,
                    },
                    GaussianBump {
                        center: 0.7,
                        fwhm: fwhm_second,
                    },
                ],
            },
            cbar,
        )
    }

    pub fn tabulated(table: &GridFn1D, cbar: f64) -> Result<Self> {
        Self::new(
            Profile::Tabulated {
                start: table.grid.start(),
                step: table.grid.step(),
                values: table.values.clone(),
            },
            cbar,
        )
    }

    pub fn new(profile: Profile, cbar: f64) -> Result<Self> {
        let model = Self { profile, cbar };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cbar > 1.0) {
            return Err(Error::Config(format!(
                "cbar = {} violates the constraint c ∈ [1, c̄] with c̄ > 1",
                self.cbar
            )));
        }
        match &self.profile {
            Profile::Gaussians { bumps, .. } if bumps.iter().any(|b| !(b.fwhm > 0.0)) => {
                return Err(Error::Config("Gaussian bump widths must be positive".into()));
            }
            Profile::Tabulated { step, values, .. } if !(*step > 0.0) || values.len() < 2 => {
                return Err(Error::Config(
                    "tabulated profile needs >= 2 values and a positive step".into(),
                ));
            }
            _ => {}
        }
        let (lo, hi) = self.range_on(0.0, 1.0, 4001);
        if !(lo > 0.0) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Config(format!(
                "dielectric profile must stay positive and finite (min {lo})"
            )));
        }
        if hi > self.cbar * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "max c = {hi:.6} exceeds c̄ = {} (c ∈ [1, c̄] is required)",
                self.cbar
            )));
        }
        if lo < 1.0 - 1e-12 {
            log::warn!("dielectric profile dips below 1 (min c = {lo:.4}); only relative contrasts are meaningful");
        }
        Ok(())
    }

    fn range_on(&self, a: f64, b: f64, n: usize) -> (f64, f64) {
        (0..n)
            .map(|k| self.eval(a + (b - a) * k as f64 / (n - 1) as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c), hi.max(c)))
    }

    pub fn max_c(&self) -> f64 {
        self.range_on(0.0, 1.0, 20001).1
    }

    /// `c(y)`.
    pub fn eval(&self, y: f64) -> f64 {
        match &self.profile {
            Profile::Constant { value } => *value,
            _ if y <= 0.0 || y >= 1.0 => 1.0,
            Profile::Gaussians { amplitude, bumps } => {
                let dip: f64 = bumps
                    .iter()
                    .map(|b| {
                        let s = b.sigma();
                        (-(y - b.center).powi(2) / (2.0 * s * s)).exp()
                    })
                    .sum();
                (1.0 - amplitude * dip).powi(-2)
            }
            Profile::Tabulated { start, step, values } => {
                let end = start + step * (values.len() - 1) as f64;
                if y <= *start || y >= end {
                    return 1.0;
                }
                let xs = (0..values.len()).map(|k| start + step * k as f64).collect();
                // Rebuilt per call; tabulated models are small and not on hot paths.
                NaturalCubicSpline::new(xs, values.clone())
                    .map(|s| s.eval(y))
                    .unwrap_or(1.0)
            }
        }
    }

    /// Depth-coordinate representation `p(y) = c(y)^{-1/2}` with its first
    /// two derivatives, when available in closed form.
    pub fn p_and_derivatives(&self, y: f64) -> Option<(f64, f64, f64)> {
        match &self.profile {
            Profile::Constant { value } => Some((value.powf(-0.5), 0.0, 0.0)),
            _ if y <= 0.0 || y >= 1.0 => Some((1.0, 0.0, 0.0)),
            Profile::Gaussians { amplitude, bumps } => {
                let (mut g, mut g1, mut g2) = (0.0, 0.0, 0.0);
                for b in bumps {
                    let s2 = b.sigma().powi(2);
                    let d = y - b.center;
                    let e = (-d * d / (2.0 * s2)).exp();
                    g += e;
                    g1 += -d / s2 * e;
                    g2 += (d * d / (s2 * s2) - 1.0 / s2) * e;
                }
                Some((1.0 - amplitude * g, -amplitude * g1, -amplitude * g2))
            }
            Profile::Tabulated { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForwardConfig {
    /// Half width `ỹ` of the simulation interval `(-ỹ, ỹ)`.
    pub y_half_width: f64,
    pub duration: f64,
    /// Number of spatial cells `N_y` (nodes = `N_y + 1`).
    pub ny: usize,
    /// Number of time steps `N_t`.
    pub nt: usize,
    /// Exponent `k` of the initial velocity `exp(-k y^2)`.
    pub source_exponent: f64,
    /// Scale the source by `sqrt(k / π)` so that it has unit mass.
    pub normalize_source: bool,
}

impl Default for ForwardConfig {
    fn default() -> Self {
        Self {
            y_half_width: 1.1,
            duration: 2.0,
            ny: 1600,
            nt: 3200,
            source_exponent: 1e6,
            normalize_source: true,
        }
    }
}

impl ForwardConfig {
    pub fn hy(&self) -> f64 {
        2.0 * self.y_half_width / self.ny as f64
    }

    pub fn ht(&self) -> f64 {
        self.duration / self.nt as f64
    }

    /// The same problem with both steps halved.
    pub fn refined(&self) -> Self {
        Self {
            ny: self.ny * 2,
            nt: self.nt * 2,
            ..*self
        }
    }

    pub fn validate(&self, model: &DielectricModel) -> Result<()> {
        if !(self.y_half_width > 0.0) || !(self.duration > 0.0) || self.ny < 4 || self.nt < 2 {
            return Err(Error::Config(format!("invalid forward grid {self:?}")));
        }
        if !self.ny.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "N_y = {} must be even so that y = 0 is a grid node",
                self.ny
            )));
        }
        let cmax = match &model.profile {
            Profile::Constant { value } => *value,
            _ => model.max_c().max(1.0),
        };
        let bound = self.hy() / cmax.sqrt();
        if self.ht() > bound * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "CFL condition violated: h_t = {:.4e} but h_t·sqrt(max c) <= h_y requires h_t <= {bound:.4e}",
                self.ht()
            )));
        }
        Ok(())
    }

    fn source(&self, y: f64) -> f64 {
        let scale = if self.normalize_source {
            (self.source_exponent / PI).sqrt()
        } else {
            1.0
        };
        scale * (-self.source_exponent * y * y).exp()
    }
}

/// Solution `u(y, t)` on the simulation grid; rows are `y` nodes, columns
/// time levels.
#[derive(Debug, Clone)]
pub struct WaveField {
    pub field: GridFn2D,
    /// `c` at each `y` node, kept for energy diagnostics.
    pub coefficient: Vec<f64>,
}

impl WaveField {
    pub fn ygrid(&self) -> &UniformGrid1D {
        &self.field.grid.x
    }

    pub fn tgrid(&self) -> &UniformGrid1D {
        &self.field.grid.t
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.field.values
    }
}

pub fn solve_forward(model: &DielectricModel, cfg: &ForwardConfig) -> Result<WaveField> {
    cfg.validate(model)?;
    let ny = cfg.ny + 1;
    let nt = cfg.nt + 1;
    let (hy, ht) = (cfg.hy(), cfg.ht());
    let ygrid = UniformGrid1D::new(-cfg.y_half_width, hy, ny)?;
    let tgrid = UniformGrid1D::new(0.0, ht, nt)?;
    let c: Vec<f64> = ygrid.nodes().map(|y| model.eval(y)).collect();
    let gain: Vec<f64> = c.iter().map(|ci| ht * ht / (ci * hy * hy)).collect();
    // Outgoing characteristic speed at the two ends.
    let nu_left = ht / (hy * c[0].sqrt());
    let nu_right = ht / (hy * c[ny - 1].sqrt());

    let mut u = Array2::<f64>::zeros((ny, nt));
    let v0: Vec<f64> = ygrid.nodes().map(|y| cfg.source(y)).collect();

    // First level from the Taylor expansion u(h) = h u_t + h^3/6 u_ttt.
    let mut prev = vec![0.0; ny];
    let mut cur = vec![0.0; ny];
    for i in 1..ny - 1 {
        let lap = v0[i - 1] - 2.0 * v0[i] + v0[i + 1];
        cur[i] = ht * v0[i] + ht * gain[i] * lap / 6.0;
    }
    cur[0] = ht * v0[0];
    cur[ny - 1] = ht * v0[ny - 1];
    for i in 0..ny {
        u[[i, 1]] = cur[i];
    }

    let mut next = vec![0.0; ny];
    for n in 1..nt - 1 {
        for i in 1..ny - 1 {
            next[i] = 2.0 * cur[i] - prev[i] + gain[i] * (cur[i - 1] - 2.0 * cur[i] + cur[i + 1]);
        }
        // u_y - sqrt(c) u_t = 0 on the left, u_y + sqrt(c) u_t = 0 on the right.
        next[0] = cur[0] + nu_left * (cur[1] - cur[0]);
        next[ny - 1] = cur[ny - 1] - nu_right * (cur[ny - 1] - cur[ny - 2]);
        for i in 0..ny {
            u[[i, n + 1]] = next[i];
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("forward solution blew up".into()));
    }
    Ok(WaveField {
        field: GridFn2D {
            grid: UniformGrid2D::new(ygrid, tgrid),
            values: u,
        },
        coefficient: c,
    })
}

/// Traces `g0(t) = u(0, t)` and `g1(t) = u_y(0, t)` recorded at the source.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub g0: TimeSeries,
    pub g1: TimeSeries,
}

impl BoundaryData {
    pub fn dt(&self) -> f64 {
        self.g0.dt
    }

    pub fn duration(&self) -> f64 {
        self.g0.dt * (self.g0.samples.len().saturating_sub(1)) as f64
    }

    /// Backscattered part: subtract the traces of a homogeneous reference run.
    pub fn scattered(&self, incident: &BoundaryData) -> Result<BoundaryData> {
        Ok(BoundaryData {
            g0: self.g0.minus(&incident.g0)?,
            g1: self.g1.minus(&incident.g1)?,
        })
    }
}

pub fn extract_boundary_data(field: &WaveField) -> Result<BoundaryData> {
    let yg = field.ygrid();
    let i0 = yg
        .index_of(0.0, 1e-9)
        .ok_or_else(|| Error::Config("y = 0 is not a node of the simulation grid".into()))?;
    if i0 + 2 >= yg.count() {
        return Err(Error::Config("need two nodes beyond y = 0 for u_y".into()));
    }
    let u = field.values();
    let h = yg.step();
    let tg = field.tgrid();
    let g0: Vec<f64> = u.row(i0).to_vec();
    let g1: Vec<f64> = (0..tg.count())
        .map(|n| (-3.0 * u[[i0, n]] + 4.0 * u[[i0 + 1, n]] - u[[i0 + 2, n]]) / (2.0 * h))
        .collect();
    Ok(BoundaryData {
        g0: TimeSeries::new(tg.start(), tg.step(), g0)?,
        g1: TimeSeries::new(tg.start(), tg.step(), g1)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// `max_t |u_y ± sqrt(c) u_t|` at one end of the simulation interval,
/// normalized by `max_t |sqrt(c) u_t|` there. Second-order one-sided
/// differences in `y`, central differences in `t`.
pub fn absorbing_residual(field: &WaveField, side: Side) -> f64 {
    let u = field.values();
    let (ny, nt) = u.dim();
    if nt < 3 || ny < 3 {
        return 0.0;
    }
    let hy = field.ygrid().step();
    let ht = field.tgrid().step();
    let (b, i1, i2, sign) = match side {
        Side::Left => (0, 1, 2, -1.0),
        Side::Right => (ny - 1, ny - 2, ny - 3, 1.0),
    };
    let s = field.coefficient[b].sqrt();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for n in 1..nt - 1 {
        // Outward-pointing one-sided derivative, converted back to d/dy.
        let outward = (3.0 * u[[b, n]] - 4.0 * u[[i1, n]] + u[[i2, n]]) / (2.0 * hy);
        let uy = sign * outward;
        let ut = s * (u[[b, n + 1]] - u[[b, n - 1]]) / (2.0 * ht);
        worst = worst.max((uy + sign * ut).abs());
        scale = scale.max(ut.abs());
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}

/// Discrete energy `Σ (c u_t^2 + u_y^2) h_y` at each interior time level.
pub fn energy_history(field: &WaveField) -> Vec<f64> {
    let u = field.values();
    let (ny, nt) = u.dim();
    let hy = field.ygrid().step();
    let ht = field.tgrid().step();
    (1..nt - 1)
        .map(|n| {
            let mut e = 0.0;
            for i in 0..ny - 1 {
                let ut = (u[[i, n + 1]] - u[[i, n - 1]]) / (2.0 * ht);
                let uy = (u[[i + 1, n]] - u[[i, n]]) / hy;
                e += field.coefficient[i] * ut * ut + uy * uy;
            }
            e * hy
        })
        .collect()
}

/// Travel-time map `x(y) = ∫_0^y sqrt(c(s)) ds` tabulated on a dense depth
/// grid, with its monotone inverse.
#[derive(Debug, Clone)]
pub struct TravelTime {
    ys: Vec<f64>,
    xs: Vec<f64>,
    inverse: MonotoneCubic,
    forward: MonotoneCubic,
    /// `b = x(1)`.
    pub b: f64,
}

impl TravelTime {
    /// Tabulate on `[0, y_max]`, with `y_max >= 1`.
    pub fn new(model: &DielectricModel, y_max: f64, nodes: usize) -> Result<Self> {
        let y_max = y_max.max(1.0);
        let grid = UniformGrid1D::spanning(0.0, y_max, nodes.max(3))?;
        let xmap = travel_time_map(model, &grid)?;
        let ys: Vec<f64> = grid.nodes().collect();
        let xs = xmap.values;
        let inverse = MonotoneCubic::new(xs.clone(), ys.clone())?;
        let forward = MonotoneCubic::new(ys.clone(), xs.clone())?;
        let b = forward.eval(1.0);
        Ok(Self {
            ys,
            xs,
            inverse,
            forward,
            b,
        })
    }

    pub fn x_of_y(&self, y: f64) -> f64 {
        let y_max = *self.ys.last().unwrap();
        if y <= 0.0 {
            y
        } else if y > y_max {
            self.xs.last().unwrap() + (y - y_max)
        } else {
            self.forward.eval(y)
        }
    }

    pub fn y_of_x(&self, x: f64) -> f64 {
        let x_max = *self.xs.last().unwrap();
        if x <= 0.0 {
            x
        } else if x > x_max {
            self.ys.last().unwrap() + (x - x_max)
        } else {
            self.inverse.eval(x)
        }
    }
}

pub fn travel_time_map(model: &DielectricModel, ygrid: &UniformGrid1D) -> Result<GridFn1D> {
    if ygrid.start().abs() > 1e-12 {
        return Err(Error::Argument(format!(
            "travel-time map needs a depth grid starting at 0, got {}",
            ygrid.start()
        )));
    }
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(ygrid.count());
    values.push(0.0);
    for k in 1..ygrid.count() {
        acc += simpson(|s| model.eval(s).sqrt(), ygrid.node(k - 1), ygrid.node(k), 8);
        values.push(acc);
    }
    GridFn1D::new(*ygrid, values)
}

/// Ground-truth potential `r*(x) = S''/S - 2 (S'/S)^2`, `S = c^{-1/4}(y(x))`,
/// sampled on `xgrid`. Derivatives use central differences on an auxiliary
/// grid `refine` times finer than `xgrid`.
pub fn true_potential_with(model: &DielectricModel, xgrid: &UniformGrid1D, refine: usize) -> Result<PotentialProfile> {
    let refine = refine.max(1);
    let y_max = xgrid.end().max(1.0) + 0.1;
    let tt = TravelTime::new(model, y_max, 40_001)?;
    let h = xgrid.step() / refine as f64;
    let s_of = |x: f64| model.eval(tt.y_of_x(x)).powf(-0.25);
    let values = xgrid
        .nodes()
        .map(|x| {
            if x <= 0.0 || x >= tt.b {
                return 0.0;
            }
            let (sm, s0, sp) = (s_of(x - h), s_of(x), s_of(x + h));
            let d1 = (sp - sm) / (2.0 * h);
            let d2 = (sp - 2.0 * s0 + sm) / (h * h);
            d2 / s0 - 2.0 * (d1 / s0).powi(2)
        })
        .collect();
    Ok(PotentialProfile::new(GridFn1D::new(*xgrid, values)?))
}

pub fn true_potential(model: &DielectricModel, xgrid: &UniformGrid1D) -> Result<PotentialProfile> {
    true_potential_with(model, xgrid, 8)
}
