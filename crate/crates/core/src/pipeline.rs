//! End-to-end orchestration: configuration, the stage functions, and the
//! file-level commands behind the `convexwave` binary.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::convexify::{
    extract_r, gdm_minimize, initial_guess, relative_l2_error, CarlemanParams, DescentTrace, InversionDomain,
    PotentialProfile, StoppingRule,
};
use crate::error::{Error, Result};
use crate::forward::{
    extract_boundary_data, solve_forward, true_potential, BoundaryData, DielectricModel, ForwardConfig, GaussianBump,
    Profile, TravelTime,
};
use crate::grid::{GridFn1D, UniformGrid1D};
use crate::io;
use crate::preprocess::{
    add_multiplicative_noise, envelopes_from_traces, ingest_experimental, DerivedData, PreprocessConfig,
};
use crate::recover::{
    estimate_epsilon, run_algorithm2_with, DielectricProfile, EpsilonMode, RecoveryConfig, Segment, WlsReport,
};

/// Prefix of the environment variables read by [`PipelineConfig::apply_env`].
pub const ENV_PREFIX: &str = "CONVEXWAVE_";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseConfig {
    /// Multiplicative noise level `δ`; 0 disables noise.
    pub level: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { level: 0.05, seed: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InversionSettings {
    pub nx: usize,
    pub nt: usize,
    /// Initial descent step.
    pub step: f64,
    pub stopping: StoppingRule,
    /// Nodes of the sampled `s0`, `s1` grid over `[0, T̃ + 2a]`.
    pub data_nodes: usize,
}

impl Default for InversionSettings {
    fn default() -> Self {
        Self {
            nx: 100,
            nt: 100,
            step: 0.1,
            stopping: StoppingRule::default(),
            data_nodes: 2001,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RecoverySettings {
    #[serde(flatten)]
    pub algorithm: RecoveryConfig,
    /// Dielectric constant interval of the background medium.
    pub background: (f64, f64),
    pub polarity_mode: EpsilonMode,
}

impl Default for RecoverySettings {
    fn default() -> Self {
        Self {
            algorithm: RecoveryConfig::default(),
            background: (1.0, 1.0),
            polarity_mode: EpsilonMode::Max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Known upper bound `c̄` of the coefficient; fixes the inversion domain.
    pub cbar: f64,
    /// Ground-truth profile for `simulate` and `pipeline`.
    pub model: Option<Profile>,
    pub forward: ForwardConfig,
    pub preprocess: PreprocessConfig,
    pub carleman: CarlemanParams,
    pub inversion: InversionSettings,
    pub noise: NoiseConfig,
    pub recovery: RecoverySettings,
    pub output_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            cbar: 1.6,
            model: Some(single_gaussian_profile()),
            forward: ForwardConfig::default(),
            preprocess: PreprocessConfig::default(),
            carleman: CarlemanParams::default(),
            inversion: InversionSettings::default(),
            noise: NoiseConfig::default(),
            recovery: RecoverySettings::default(),
            output_dir: PathBuf::from("out"),
        }
    }
}

/// One bump at depth 0.5: `A = 0.2`, FWHM 0.075.
pub fn single_gaussian_profile() -> Profile {
    Profile::Gaussians {
        amplitude: 0.2,
        bumps: vec![GaussianBump {
            center: 0.5,
            fwhm: 0.075,
        }],
    }
}

/// Bumps at 0.3 (FWHM 0.1) and 0.7 (FWHM 0.075), `A = 0.2`.
pub fn double_gaussian_profile() -> Profile {
    Profile::Gaussians {
        amplitude: 0.2,
        bumps: vec![
            GaussianBump { center: 0.3, fwhm: 0.1 },
            GaussianBump {
                center: 0.7,
                fwhm: 0.075,
            },
        ],
    }
}

impl PipelineConfig {
    /// Read a JSON config (or start from the defaults) and apply
    /// environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg: Self = match path {
            Some(p) => io::read_json(p).map_err(|e| match e {
                Error::Parse { what, detail } => Error::Config(format!("{what}: {detail}")),
                other => other,
            })?,
            None => Self::default(),
        };
        cfg.apply_env(std::env::vars())?;
        Ok(cfg)
    }

    /// Apply `CONVEXWAVE_*` overrides: `LAMBDA`, `ALPHA`, `GAMMA`, `SEED`,
    /// `NOISE`, `CBAR`, `MAX_ITER`, `STEP`, `RHO`, `OUTPUT_DIR`.
    pub fn apply_env(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
        let vars: HashMap<String, String> = vars
            .into_iter()
            .filter_map(|(k, v)| k.strip_prefix(ENV_PREFIX).map(|k| (k.to_owned(), v)))
            .collect();
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.trim()
                .parse()
                .map_err(|_| Error::Config(format!("{ENV_PREFIX}{key} = `{v}` is not a valid number")))
        }
        for (key, v) in &vars {
            match key.as_str() {
                "LAMBDA" => self.carleman.lambda = num(key, v)?,
                "ALPHA" => self.carleman.alpha = num(key, v)?,
                "GAMMA" => self.carleman.gamma = num(key, v)?,
                "SEED" => self.noise.seed = num(key, v)?,
                "NOISE" => self.noise.level = num(key, v)?,
                "CBAR" => self.cbar = num(key, v)?,
                "MAX_ITER" => self.inversion.stopping.max_iterations = num(key, v)?,
                "STEP" => self.inversion.step = num(key, v)?,
                "RHO" => self.recovery.algorithm.rho_override = Some(num(key, v)?),
                "OUTPUT_DIR" => self.output_dir = PathBuf::from(v),
                other => log::warn!("ignoring unknown variable {ENV_PREFIX}{other}"),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cbar > 1.0) {
            return Err(Error::Config(format!(
                "cbar = {} violates the constraint c ∈ [1, c̄] with c̄ > 1",
                self.cbar
            )));
        }
        self.carleman.validate()?;
        if !(self.noise.level >= 0.0) {
            return Err(Error::Config(format!(
                "noise.level must be >= 0, got {}",
                self.noise.level
            )));
        }
        let inv = &self.inversion;
        if inv.nx < 4 || inv.nt < 4 {
            return Err(Error::Config(format!(
                "inversion grid {}x{} is too small",
                inv.nx, inv.nt
            )));
        }
        if !(inv.step > 0.0) {
            return Err(Error::Config(format!(
                "inversion.step must be positive, got {}",
                inv.step
            )));
        }
        if inv.data_nodes < 3 {
            return Err(Error::Config("inversion.data_nodes must be >= 3".into()));
        }
        let rec = &self.recovery;
        if !(rec.background.0 > 0.0 && rec.background.0 <= rec.background.1) {
            return Err(Error::Config(format!(
                "recovery.background must satisfy 0 < lo <= hi, got [{}, {}]",
                rec.background.0, rec.background.1
            )));
        }
        if !(0.0..1.0).contains(&rec.algorithm.dead_band) {
            return Err(Error::Config("recovery.dead_band must lie in [0, 1)".into()));
        }
        if !(rec.algorithm.y_max > 0.0) || rec.algorithm.output_nodes < 2 {
            return Err(Error::Config(
                "recovery.y_max must be positive and output_nodes >= 2".into(),
            ));
        }
        if let Some(rho) = rec.algorithm.rho_override {
            if !(rho >= 0.0) {
                return Err(Error::Config(format!("recovery.rho_override must be >= 0, got {rho}")));
            }
        }
        if self.model.is_some() {
            self.forward.validate(&self.dielectric_model()?)?;
        }
        Ok(())
    }

    pub fn dielectric_model(&self) -> Result<DielectricModel> {
        let profile = self
            .model
            .clone()
            .ok_or_else(|| Error::Config("no model configured".into()))?;
        DielectricModel::new(profile, self.cbar)
    }

    pub fn domain(&self) -> Result<InversionDomain> {
        InversionDomain::with_resolution(self.cbar, self.inversion.nx, self.inversion.nt)
    }
}

/// Backscattered traces of a simulation, clean and (optionally) noisy.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub clean: BoundaryData,
    pub noisy: Option<BoundaryData>,
}

impl Simulation {
    /// The traces the inversion should see.
    pub fn measured(&self) -> &BoundaryData {
        self.noisy.as_ref().unwrap_or(&self.clean)
    }
}

/// Simulate `model` and a homogeneous reference run, keep the difference,
/// and add multiplicative noise seeded from `noise.seed` (`g0`) and
/// `noise.seed + 1` (`g1`).
pub fn simulate(model: &DielectricModel, forward: &ForwardConfig, noise: &NoiseConfig) -> Result<Simulation> {
    let total = extract_boundary_data(&solve_forward(model, forward)?)?;
    let reference = DielectricModel::constant(1.0, model.cbar)?;
    let incident = extract_boundary_data(&solve_forward(&reference, forward)?)?;
    let clean = total.scattered(&incident)?;
    let noisy = if noise.level > 0.0 {
        Some(BoundaryData {
            g0: add_multiplicative_noise(&clean.g0, noise.level, noise.seed)?,
            g1: add_multiplicative_noise(&clean.g1, noise.level, noise.seed.wrapping_add(1))?,
        })
    } else {
        None
    };
    Ok(Simulation { clean, noisy })
}

/// Envelope fit and differentiation, sampled on `nodes` points over
/// `[0, T̃ + 2a]`.
pub fn derive(data: &BoundaryData, pre: &PreprocessConfig, dom: &InversionDomain, nodes: usize) -> Result<DerivedData> {
    let closed = envelopes_from_traces(data, pre)?;
    let grid = UniformGrid1D::spanning(0.0, dom.ttilde + 2.0 * dom.a, nodes)?;
    let s0 = grid.nodes().map(|t| closed.s0(t)).collect();
    let s1 = grid.nodes().map(|t| closed.s1(t)).collect();
    DerivedData::from_samples(grid, s0, s1)
}

#[derive(Debug, Clone)]
pub struct Inversion {
    /// `r` of the initial guess.
    pub born: PotentialProfile,
    pub r: PotentialProfile,
    pub trace: DescentTrace,
}

pub fn invert(
    data: &DerivedData,
    dom: &InversionDomain,
    carleman: &CarlemanParams,
    settings: &InversionSettings,
) -> Result<Inversion> {
    carleman.validate()?;
    carleman.warn_if_below_theory(dom.ttilde);
    let q0 = initial_guess(data, dom)?;
    let born = extract_r(&q0)?;
    let (q, trace) = gdm_minimize(&q0, carleman, settings.step, &settings.stopping)?;
    let r = extract_r(&q)?;
    Ok(Inversion { born, r, trace })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSummary {
    pub kind: crate::recover::SegmentKind,
    pub x_start: f64,
    pub x_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub x_start: f64,
    pub x_end: f64,
    #[serde(flatten)]
    pub report: WlsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverySummary {
    pub max_c: f64,
    pub min_c: f64,
    pub epsilon_interval: (f64, f64),
    pub polarity_mode: EpsilonMode,
    pub background: (f64, f64),
    pub x_stop: f64,
    pub intervals: Vec<IntervalSummary>,
    pub residuals: Vec<ResidualSummary>,
}

pub fn recover(r: &PotentialProfile, settings: &RecoverySettings) -> Result<(DielectricProfile, RecoverySummary)> {
    let c = run_algorithm2_with(r, &settings.algorithm)?;
    let epsilon_interval = estimate_epsilon(&c, settings.background, settings.polarity_mode)?;
    let seg = |s: &Segment| (s.x_start, s.x_end);
    let summary = RecoverySummary {
        max_c: c.max_c(),
        min_c: c.min_c(),
        epsilon_interval,
        polarity_mode: settings.polarity_mode,
        background: settings.background,
        x_stop: c.x_stop,
        intervals: c
            .partition
            .segments
            .iter()
            .map(|s| IntervalSummary {
                kind: s.kind,
                x_start: s.x_start,
                x_end: s.x_end,
            })
            .collect(),
        residuals: c
            .segments
            .iter()
            .filter_map(|s| {
                s.wls.map(|report| {
                    let (x_start, x_end) = seg(&s.segment);
                    ResidualSummary { x_start, x_end, report }
                })
            })
            .collect(),
    };
    Ok((c, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageTimings {
    pub simulate: f64,
    pub preprocess: f64,
    pub invert: f64,
    pub recover: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescentSummary {
    pub iterations: usize,
    pub converged: bool,
    pub initial_k: f64,
    pub final_k: f64,
    pub final_gradnorm: f64,
    pub final_step: f64,
}

impl DescentSummary {
    pub fn of(trace: &DescentTrace) -> Self {
        let last = trace.records.last();
        Self {
            iterations: trace.iterations(),
            converged: trace.converged,
            initial_k: trace.initial_k().unwrap_or(0.0),
            final_k: trace.final_k().unwrap_or(0.0),
            final_gradnorm: last.map_or(0.0, |r| r.gradnorm),
            final_step: last.map_or(0.0, |r| r.step),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub timings: StageTimings,
    pub descent: Option<DescentSummary>,
    /// `‖r_comp - r*‖ / ‖r*‖` in L2 over `(0, x(1))`.
    pub relative_error: Option<f64>,
    /// The same for the initial guess.
    pub initial_guess_error: Option<f64>,
    /// `‖c_comp - c‖ / ‖c‖` in L2 over `(0, 1)`.
    pub profile_error: Option<f64>,
    pub max_c: Option<f64>,
    pub min_c: Option<f64>,
    pub epsilon_interval: Option<(f64, f64)>,
}

/// Ground truth used for error reporting.
pub struct Truth {
    pub r: PotentialProfile,
    /// `x(1)`.
    pub b: f64,
    pub model: DielectricModel,
}

impl Truth {
    pub fn new(model: &DielectricModel, dom: &InversionDomain) -> Result<Self> {
        let fine = UniformGrid1D::spanning(0.0, dom.a, 2001)?;
        let r = true_potential(model, &fine)?;
        let b = TravelTime::new(model, 2.0, 20001)?.b;
        Ok(Self {
            r,
            b,
            model: model.clone(),
        })
    }

    pub fn r_error(&self, r: &PotentialProfile) -> Result<f64> {
        let f = r.interpolant()?;
        let truth = self.r.interpolant()?;
        Ok(relative_l2_error(f, truth, 0.0, self.b, 2000))
    }

    pub fn c_error(&self, c: &GridFn1D) -> Result<f64> {
        let g = c.grid;
        let spline = crate::grid::NaturalCubicSpline::new(g.nodes().collect(), c.values.clone())?;
        let hi = g.end().min(1.0);
        Ok(relative_l2_error(
            |y| spline.eval(y),
            |y| self.model.eval(y),
            0.0,
            hi,
            2000,
        ))
    }

    pub fn c_on(&self, grid: UniformGrid1D) -> GridFn1D {
        GridFn1D::from_fn(grid, |y| self.model.eval(y))
    }
}

/// Everything `pipeline` computes, in memory.
pub struct PipelineRun {
    pub simulation: Simulation,
    pub derived: DerivedData,
    pub inversion: Inversion,
    pub profile: DielectricProfile,
    pub summary: RecoverySummary,
    pub report: RunReport,
    pub truth: Truth,
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineRun> {
    cfg.validate()?;
    let model = cfg.dielectric_model()?;
    let dom = cfg.domain()?;
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let simulation = simulate(&model, &cfg.forward, &cfg.noise)?;
    timings.simulate = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let derived = derive(simulation.measured(), &cfg.preprocess, &dom, cfg.inversion.data_nodes)
        .map_err(|e| e.context("preprocessing"))?;
    timings.preprocess = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let inversion = invert(&derived, &dom, &cfg.carleman, &cfg.inversion).map_err(|e| e.context("inversion"))?;
    timings.invert = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let (profile, summary) = recover(&inversion.r, &cfg.recovery).map_err(|e| e.context("recovery"))?;
    timings.recover = t.elapsed().as_secs_f64();

    let truth = Truth::new(&model, &dom)?;
    let report = RunReport {
        timings,
        descent: Some(DescentSummary::of(&inversion.trace)),
        relative_error: Some(truth.r_error(&inversion.r)?),
        initial_guess_error: Some(truth.r_error(&inversion.born)?),
        profile_error: Some(truth.c_error(&profile.profile)?),
        max_c: Some(summary.max_c),
        min_c: Some(summary.min_c),
        epsilon_interval: Some(summary.epsilon_interval),
    };
    Ok(PipelineRun {
        simulation,
        derived,
        inversion,
        profile,
        summary,
        report,
        truth,
    })
}

fn prepare_output(cfg: &PipelineConfig) -> Result<&Path> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    Ok(&cfg.output_dir)
}

/// `simulate`: writes `g.csv` (clean backscattered traces), with noise
/// enabled `g_noisy.csv`, and with `wavefield` the total field `u.csv`.
pub fn cmd_simulate(cfg: &PipelineConfig, wavefield: bool) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let model = cfg.dielectric_model()?;
    let sim = simulate(&model, &cfg.forward, &cfg.noise)?;
    let out = prepare_output(cfg)?;
    let mut written = vec![out.join("g.csv")];
    io::write_boundary_data(&written[0], &sim.clean)?;
    if let Some(noisy) = &sim.noisy {
        written.push(out.join("g_noisy.csv"));
        io::write_boundary_data(&written[1], noisy)?;
    }
    if wavefield {
        let path = out.join("u.csv");
        io::write_grid_fn_2d(&path, &solve_forward(&model, &cfg.forward)?.field)?;
        written.push(path);
    }
    Ok(written)
}

/// Traces (`t,g0,g1`) or derived data (`t,s0,s1`), by header.
fn read_inversion_input(path: &Path, cfg: &PipelineConfig, dom: &InversionDomain) -> Result<DerivedData> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::error::parse_err(path.display().to_string(), e))?;
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    match header.replace(' ', "").as_str() {
        "t,s0,s1" => io::read_derived(path),
        "t,g0,g1" => {
            let bd = io::read_boundary_data(path)?;
            derive(&bd, &cfg.preprocess, dom, cfg.inversion.data_nodes)
        }
        other => Err(crate::error::parse_err(
            path.display().to_string(),
            format!("expected header `t,s0,s1` or `t,g0,g1`, found `{other}`"),
        )),
    }
}

fn write_inversion(out: &Path, derived: &DerivedData, inv: &Inversion) -> Result<()> {
    io::write_derived(&out.join("derived.csv"), derived)?;
    io::write_potential(&out.join("r_initial.csv"), &inv.born)?;
    io::write_potential(&out.join("r.csv"), &inv.r)?;
    io::write_descent_trace(&out.join("descent.csv"), &inv.trace)
}

/// `invert`: derived data or traces → `r.csv`, `r_initial.csv`,
/// `descent.csv`, `derived.csv`.
pub fn cmd_invert(cfg: &PipelineConfig, input: &Path) -> Result<DescentSummary> {
    cfg.validate()?;
    let dom = cfg.domain()?;
    let derived = read_inversion_input(input, cfg, &dom)?;
    let inv = invert(&derived, &dom, &cfg.carleman, &cfg.inversion)?;
    write_inversion(prepare_output(cfg)?, &derived, &inv)?;
    Ok(DescentSummary::of(&inv.trace))
}

/// `recover`: `r.csv` → `c.csv` and `summary.json`.
pub fn cmd_recover(cfg: &PipelineConfig, input: &Path) -> Result<RecoverySummary> {
    cfg.validate()?;
    let r = io::read_potential(input)?;
    let (c, summary) = recover(&r, &cfg.recovery)?;
    let out = prepare_output(cfg)?;
    io::write_profile(&out.join("c.csv"), &c.profile)?;
    io::write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

/// `pipeline`: model → every intermediate file, the ground truth
/// (`r_true.csv`, `c_true.csv`) and `report.json`.
pub fn cmd_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    let run = run_pipeline(cfg)?;
    let out = prepare_output(cfg)?;
    io::write_boundary_data(&out.join("g.csv"), &run.simulation.clean)?;
    if let Some(noisy) = &run.simulation.noisy {
        io::write_boundary_data(&out.join("g_noisy.csv"), noisy)?;
    }
    write_inversion(out, &run.derived, &run.inversion)?;
    io::write_potential(&out.join("r_true.csv"), &run.truth.r)?;
    io::write_profile(&out.join("c.csv"), &run.profile.profile)?;
    io::write_profile(&out.join("c_true.csv"), &run.truth.c_on(run.profile.profile.grid))?;
    io::write_json(&out.join("summary.json"), &run.summary)?;
    io::write_json(&out.join("report.json"), &run.report)?;
    Ok(run.report)
}

/// `experimental`: radar trace file → ε interval. The background interval
/// comes from the trace header.
pub fn cmd_experimental(cfg: &PipelineConfig, trace_path: &Path) -> Result<RunReport> {
    cfg.validate()?;
    let trace = io::read_experimental_trace(trace_path)?;
    let dom = cfg.domain()?;
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let data = ingest_experimental(&trace)?;
    let pre = PreprocessConfig {
        polarity: trace.polarity,
        ..cfg.preprocess
    };
    let derived = derive(&data, &pre, &dom, cfg.inversion.data_nodes)?;
    timings.preprocess = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let inv = invert(&derived, &dom, &cfg.carleman, &cfg.inversion)?;
    timings.invert = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let settings = RecoverySettings {
        background: trace.background,
        ..cfg.recovery
    };
    let (c, summary) = recover(&inv.r, &settings)?;
    timings.recover = t.elapsed().as_secs_f64();

    let out = prepare_output(cfg)?;
    io::write_boundary_data(&out.join("g.csv"), &data)?;
    write_inversion(out, &derived, &inv)?;
    io::write_profile(&out.join("c.csv"), &c.profile)?;
    io::write_json(&out.join("summary.json"), &summary)?;
    let report = RunReport {
        timings,
        descent: Some(DescentSummary::of(&inv.trace)),
        relative_error: None,
        initial_guess_error: None,
        profile_error: None,
        max_c: Some(summary.max_c),
        min_c: Some(summary.min_c),
        epsilon_interval: Some(summary.epsilon_interval),
    };
    io::write_json(&out.join("report.json"), &report)?;
    Ok(report)
}

/// Sample the backscattered `g0` of a simulation the way a radar would:
/// `samples` values `dt_ns` apart, divided by `scale`.
pub fn synthetic_radar_trace(
    sim: &BoundaryData,
    samples: usize,
    dt_ns: f64,
    scale: f64,
    background: (f64, f64),
    polarity: crate::preprocess::Polarity,
) -> crate::preprocess::ExperimentalTrace {
    let dt = crate::preprocess::TIME_SCALE * dt_ns * 1e-9;
    crate::preprocess::ExperimentalTrace {
        samples: (0..samples)
            .map(|k| sim.g0.interpolate(k as f64 * dt) / scale)
            .collect(),
        dt_ns,
        scale,
        background,
        polarity,
    }
}
