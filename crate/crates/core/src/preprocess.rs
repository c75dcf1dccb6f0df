//! Turning raw boundary traces into the inversion inputs `s0(t)`, `s1(t)`:
//! noise injection, polarity selection with truncation, Gaussian envelope
//! fitting, closed-form differentiation and the experimental-data scaling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::BoundaryData;
use crate::grid::{NaturalCubicSpline, UniformGrid1D};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl TimeSeries {
    pub fn new(t0: f64, dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("time series has non-finite samples".into()));
        }
        Ok(Self { t0, dt, samples })
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            samples: vec![0.0; self.samples.len()],
            ..*self
        }
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(move |k| self.time(k))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn minus(&self, other: &TimeSeries) -> Result<TimeSeries> {
        if self.samples.len() != other.samples.len() || (self.dt - other.dt).abs() > 1e-12 * self.dt {
            return Err(Error::Argument("time series sampling does not match".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(TimeSeries { samples, ..*self })
    }

    /// Linear interpolation, zero outside the sampled window.
    pub fn interpolate(&self, t: f64) -> f64 {
        let s = (t - self.t0) / self.dt;
        let n = self.samples.len();
        if s < 0.0 || s > (n - 1) as f64 || n == 0 {
            return 0.0;
        }
        let k = (s.floor() as usize).min(n.saturating_sub(2));
        let w = s - k as f64;
        if n == 1 {
            return self.samples[0];
        }
        self.samples[k] * (1.0 - w) + self.samples[k + 1] * w
    }
}

/// `samples[j] · (1 + level·η_j)` with `η_j` i.i.d. uniform on `[-1, 1]`.
pub fn add_multiplicative_noise(ts: &TimeSeries, level: f64, seed: u64) -> Result<TimeSeries> {
    if !(level >= 0.0) {
        return Err(Error::Argument(format!("noise level must be >= 0, got {level}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = ts
        .samples
        .iter()
        .map(|v| v * (1.0 + level * rng.gen_range(-1.0..=1.0)))
        .collect();
    Ok(TimeSeries { samples, ..*ts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    #[default]
    Negative,
    Positive,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Negative => -1.0,
            Polarity::Positive => 1.0,
        }
    }
}

impl std::str::FromStr for Polarity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "negative" => Ok(Polarity::Negative),
            "positive" => Ok(Polarity::Positive),
            other => Err(Error::Argument(format!("unknown polarity `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub series: TimeSeries,
    pub no_signal: bool,
}

/// Keep samples of the chosen sign whose magnitude is at least a tenth of
/// the trace's peak magnitude; zero the rest.
pub fn truncate_and_select(ts: &TimeSeries, polarity: Polarity) -> Truncated {
    let threshold = 0.1 * ts.max_abs();
    let sign = polarity.sign();
    let samples: Vec<f64> = ts
        .samples
        .iter()
        .map(|&v| if v * sign > 0.0 && v.abs() >= threshold { v } else { 0.0 })
        .collect();
    let no_signal = samples.iter().all(|v| *v == 0.0);
    Truncated {
        series: TimeSeries { samples, ..*ts },
        no_signal,
    }
}

/// One signed Gaussian pulse `±A exp(-k (t - m)^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    pub amplitude: f64,
    /// The exponent rate `k`.
    pub width: f64,
    pub center: f64,
    pub polarity: Polarity,
}

impl EnvelopeParams {
    fn parts(&self, t: f64) -> (f64, f64) {
        let d = t - self.center;
        (d, self.polarity.sign() * self.amplitude * (-self.width * d * d).exp())
    }

    pub fn value(&self, t: f64) -> f64 {
        self.parts(t).1
    }

    pub fn d1(&self, t: f64) -> f64 {
        let (d, e) = self.parts(t);
        -2.0 * self.width * d * e
    }

    pub fn d2(&self, t: f64) -> f64 {
        let (d, e) = self.parts(t);
        let k = self.width;
        (4.0 * k * k * d * d - 2.0 * k) * e
    }

    pub fn d3(&self, t: f64) -> f64 {
        let (d, e) = self.parts(t);
        let k = self.width;
        (12.0 * k * k * d - 8.0 * k * k * k * d * d * d) * e
    }
}

/// A sum of Gaussian pulses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Envelope {
    pub pulses: Vec<EnvelopeParams>,
}

impl Envelope {
    pub fn single(p: EnvelopeParams) -> Self {
        Self { pulses: vec![p] }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.pulses.iter().map(|p| p.value(t)).sum()
    }

    pub fn d1(&self, t: f64) -> f64 {
        self.pulses.iter().map(|p| p.d1(t)).sum()
    }

    pub fn d2(&self, t: f64) -> f64 {
        self.pulses.iter().map(|p| p.d2(t)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: 1e-12,
        }
    }
}

/// Weighted nonlinear least-squares fit of one signed Gaussian to the
/// non-zero samples of `ts` (normally the output of [`truncate_and_select`]).
/// Weights are `|ts_j| / max|ts|`. When the support holds several separated
/// pulses the fit starts from, and normally settles on, the one carrying the
/// larger total weight.
pub fn fit_envelope(ts: &TimeSeries, polarity: Polarity) -> Result<EnvelopeParams> {
    fit_envelope_with(ts, polarity, FitOptions::default())
}

pub fn fit_envelope_with(ts: &TimeSeries, polarity: Polarity, opts: FitOptions) -> Result<EnvelopeParams> {
    let support: Vec<(f64, f64)> = ts
        .times()
        .zip(&ts.samples)
        .filter(|(_, v)| **v != 0.0)
        .map(|(t, v)| (t, *v))
        .collect();
    if support.len() < 3 {
        return Err(Error::Fit {
            reason: format!("need at least 3 support samples, got {}", support.len()),
            residual: f64::NAN,
        });
    }
    let vmax = support.iter().fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    let weights: Vec<f64> = support.iter().map(|(_, v)| v.abs() / vmax).collect();
    let init = initial_guess(ts, &support, polarity);
    levenberg_marquardt(&support, &weights, init, polarity, opts)
}

/// Peak amplitude and location, width from the second moment of the
/// contiguous run with the larger total weight.
fn initial_guess(ts: &TimeSeries, support: &[(f64, f64)], polarity: Polarity) -> [f64; 3] {
    let mut runs: Vec<Vec<(f64, f64)>> = Vec::new();
    for &(t, v) in support {
        match runs.last_mut() {
            Some(run) if (t - run.last().unwrap().0) <= 1.5 * ts.dt => run.push((t, v)),
            _ => runs.push(vec![(t, v)]),
        }
    }
    let best = runs
        .iter()
        .max_by(|a, b| {
            let wa: f64 = a.iter().map(|(_, v)| v.abs()).sum();
            let wb: f64 = b.iter().map(|(_, v)| v.abs()).sum();
            wa.total_cmp(&wb)
        })
        .unwrap();
    let (tp, vp) = best
        .iter()
        .copied()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .unwrap();
    let w: f64 = best.iter().map(|(_, v)| v.abs()).sum();
    let mean: f64 = best.iter().map(|(t, v)| t * v.abs()).sum::<f64>() / w;
    let var: f64 = best.iter().map(|(t, v)| (t - mean).powi(2) * v.abs()).sum::<f64>() / w;
    let var = var.max(ts.dt * ts.dt);
    let _ = polarity;
    [vp.abs(), 1.0 / (2.0 * var), tp]
}

fn weighted_residual(support: &[(f64, f64)], weights: &[f64], p: &[f64; 3], sign: f64) -> f64 {
    support
        .iter()
        .zip(weights)
        .map(|((t, v), w)| {
            let m = sign * p[0] * (-p[1] * (t - p[2]).powi(2)).exp();
            w * (m - v).powi(2)
        })
        .sum()
}

fn levenberg_marquardt(
    support: &[(f64, f64)],
    weights: &[f64],
    init: [f64; 3],
    polarity: Polarity,
    opts: FitOptions,
) -> Result<EnvelopeParams> {
    let sign = polarity.sign();
    let mut p = init;
    let mut cost = weighted_residual(support, weights, &p, sign);
    let scale: f64 = support.iter().zip(weights).map(|((_, v), w)| w * v * v).sum();
    let mut mu = 1e-3;
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for ((t, v), w) in support.iter().zip(weights) {
            let d = t - p[2];
            let e = (-p[1] * d * d).exp();
            let m = sign * p[0] * e;
            let jac = [sign * e, -m * d * d, m * 2.0 * p[1] * d];
            let r = m - v;
            for a in 0..3 {
                jtr[a] += w * jac[a] * r;
                for b in 0..3 {
                    jtj[a][b] += w * jac[a] * jac[b];
                }
            }
        }
        let mut improved = false;
        for _ in 0..60 {
            let mut lhs = jtj;
            for a in 0..3 {
                lhs[a][a] += mu * jtj[a][a].max(1e-300);
            }
            let Some(step) = solve3(lhs, [-jtr[0], -jtr[1], -jtr[2]]) else {
                mu *= 10.0;
                continue;
            };
            let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
            if trial[0] < 0.0 || trial[1] <= 0.0 {
                mu *= 10.0;
                continue;
            }
            let trial_cost = weighted_residual(support, weights, &trial, sign);
            if trial_cost <= cost {
                let rel = (0..3)
                    .map(|a| step[a].abs() / (p[a].abs() + 1e-300))
                    .fold(0.0, f64::max);
                p = trial;
                let drop = cost - trial_cost;
                cost = trial_cost;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                if rel < opts.tolerance.sqrt() * 1e-2 || drop <= opts.tolerance * scale || cost <= 1e-30 * scale {
                    converged = true;
                }
                break;
            }
            mu *= 10.0;
        }
        if converged || !improved {
            converged = true;
            break;
        }
    }
    if !converged || !p.iter().all(|v| v.is_finite()) {
        return Err(Error::Fit {
            reason: format!("no convergence after {} iterations", opts.max_iterations),
            residual: (cost / scale.max(1e-300)).sqrt(),
        });
    }
    Ok(EnvelopeParams {
        amplitude: p[0],
        width: p[1],
        center: p[2],
        polarity,
    })
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let m = nalgebra::Matrix3::from_fn(|i, j| a[i][j]);
    let x = m.lu().solve(&nalgebra::Vector3::from(b))?;
    x.iter().all(|v| v.is_finite()).then(|| [x[0], x[1], x[2]])
}

/// Fit one Gaussian per separated pulse of a truncated trace. Support
/// samples closer than `min_gap` in time belong to the same pulse; pulses
/// with fewer than 3 samples or under 5% of the strongest pulse's weight are
/// dropped.
pub fn fit_pulse_train(ts: &TimeSeries, polarity: Polarity, min_gap: f64) -> Result<Envelope> {
    let support: Vec<usize> = (0..ts.samples.len()).filter(|&k| ts.samples[k] != 0.0).collect();
    if support.is_empty() {
        return Err(Error::NoSignal);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in support {
        match groups.last_mut() {
            Some(g) if ts.time(k) - ts.time(*g.last().unwrap()) < min_gap => g.push(k),
            _ => groups.push(vec![k]),
        }
    }
    let weight = |g: &Vec<usize>| g.iter().map(|&k| ts.samples[k].abs()).sum::<f64>();
    let strongest = groups.iter().map(weight).fold(0.0, f64::max);
    let mut pulses = Vec::new();
    for g in groups.iter().filter(|g| g.len() >= 3 && weight(g) >= 0.05 * strongest) {
        let mut part = ts.zeros_like();
        for &k in g {
            part.samples[k] = ts.samples[k];
        }
        pulses.push(fit_envelope(&part, polarity)?);
    }
    if pulses.is_empty() {
        return Err(Error::Fit {
            reason: "no pulse has 3 or more support samples".into(),
            residual: f64::NAN,
        });
    }
    Ok(Envelope { pulses })
}

/// How the envelope of `g1` is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum G1Model {
    /// Fitted Gaussian envelope(s) of the measured `g1`.
    Fitted(Envelope),
    /// `g1 = g0'` from the absorbing condition `u_y - u_t = 0` at the
    /// receiver, applied to the fitted `g0` envelope.
    Absorbing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub env0: Envelope,
    pub g1: G1Model,
}

impl ClosedForm {
    pub fn s0(&self, t: f64) -> f64 {
        self.env0.d1(t)
    }

    pub fn s1(&self, t: f64) -> f64 {
        let g1_prime = match &self.g1 {
            G1Model::Fitted(env1) => env1.d1(t),
            G1Model::Absorbing => self.env0.d2(t),
        };
        self.env0.d2(t) + g1_prime
    }
}

/// `s0 = g̃0'`, `s1 = g̃0'' + g̃1'`, both in closed form when they came from
/// envelopes, and sampled on a uniform time grid.
#[derive(Debug, Clone)]
pub struct DerivedData {
    pub grid: UniformGrid1D,
    pub s0: Vec<f64>,
    pub s1: Vec<f64>,
    pub closed_form: Option<ClosedForm>,
    splines: Option<(NaturalCubicSpline, NaturalCubicSpline)>,
}

impl DerivedData {
    pub fn from_closed_form(closed_form: ClosedForm, grid: UniformGrid1D) -> Self {
        let s0 = grid.nodes().map(|t| closed_form.s0(t)).collect();
        let s1 = grid.nodes().map(|t| closed_form.s1(t)).collect();
        Self {
            grid,
            s0,
            s1,
            closed_form: Some(closed_form),
            splines: None,
        }
    }

    /// Sampled data only; values between nodes come from natural cubic
    /// splines, and both functions vanish outside the sampled window.
    pub fn from_samples(grid: UniformGrid1D, s0: Vec<f64>, s1: Vec<f64>) -> Result<Self> {
        if s0.len() != grid.count() || s1.len() != grid.count() {
            return Err(Error::Argument("s0/s1 length does not match the time grid".into()));
        }
        let nodes: Vec<f64> = grid.nodes().collect();
        let splines = (
            NaturalCubicSpline::new(nodes.clone(), s0.clone())?,
            NaturalCubicSpline::new(nodes, s1.clone())?,
        );
        Ok(Self {
            grid,
            s0,
            s1,
            closed_form: None,
            splines: Some(splines),
        })
    }

    fn inside(&self, t: f64) -> bool {
        let slack = 1e-9 * self.grid.step();
        t >= self.grid.start() - slack && t <= self.grid.end() + slack
    }

    pub fn s0_at(&self, t: f64) -> f64 {
        match (&self.closed_form, &self.splines) {
            (Some(cf), _) => cf.s0(t),
            (None, Some((s0, _))) if self.inside(t) => s0.eval(t),
            _ => 0.0,
        }
    }

    pub fn s1_at(&self, t: f64) -> f64 {
        match (&self.closed_form, &self.splines) {
            (Some(cf), _) => cf.s1(t),
            (None, Some((_, s1))) if self.inside(t) => s1.eval(t),
            _ => 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.s0.iter().chain(&self.s1).all(|v| *v == 0.0)
    }
}

pub fn derive_s0_s1(env0: &EnvelopeParams, env1: &EnvelopeParams, grid: UniformGrid1D) -> DerivedData {
    DerivedData::from_closed_form(
        ClosedForm {
            env0: Envelope::single(*env0),
            g1: G1Model::Fitted(Envelope::single(*env1)),
        },
        grid,
    )
}

/// Settings for turning boundary traces into [`DerivedData`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    pub polarity: Polarity,
    /// Use `g1 = g0'` instead of fitting the measured `g1`.
    pub g1_from_absorbing: bool,
    /// Minimum time gap separating two pulses of one trace.
    pub pulse_gap: f64,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            polarity: Polarity::Negative,
            g1_from_absorbing: true,
            pulse_gap: 0.15,
        }
    }
}

/// Truncate, fit and differentiate a pair of (backscattered) traces.
pub fn envelopes_from_traces(data: &BoundaryData, cfg: &PreprocessConfig) -> Result<ClosedForm> {
    let t0 = truncate_and_select(&data.g0, cfg.polarity);
    if t0.no_signal {
        return Err(Error::NoSignal);
    }
    let env0 = fit_pulse_train(&t0.series, cfg.polarity, cfg.pulse_gap)?;
    let g1 = if cfg.g1_from_absorbing {
        G1Model::Absorbing
    } else {
        let t1 = truncate_and_select(&data.g1, cfg.polarity);
        if t1.no_signal {
            return Err(Error::NoSignal);
        }
        G1Model::Fitted(fit_pulse_train(&t1.series, cfg.polarity, cfg.pulse_gap)?)
    };
    Ok(ClosedForm { env0, g1 })
}

/// One radar trace as recorded: uniformly spaced samples in nanoseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentalTrace {
    pub samples: Vec<f64>,
    pub dt_ns: f64,
    pub scale: f64,
    /// Dielectric constant interval of the background medium.
    pub background: (f64, f64),
    pub polarity: Polarity,
}

/// Real time (seconds) to the dimensionless time used by the inversion.
pub const TIME_SCALE: f64 = 0.19e9;
pub const EXPECTED_SAMPLES: usize = 80;

/// Default inversion-side sampling of experimental traces: `[0, 2]` in
/// steps of 0.005.
pub fn experimental_time_grid() -> UniformGrid1D {
    UniformGrid1D::spanning(0.0, 2.0, 401).expect("static grid")
}

pub fn ingest_experimental(trace: &ExperimentalTrace) -> Result<BoundaryData> {
    ingest_experimental_on(trace, &experimental_time_grid())
}

pub fn ingest_experimental_on(trace: &ExperimentalTrace, grid: &UniformGrid1D) -> Result<BoundaryData> {
    if trace.samples.is_empty() {
        return Err(Error::Ingest("experimental trace has no samples".into()));
    }
    if !(trace.dt_ns > 0.0) {
        return Err(Error::Ingest(format!("dt_ns must be positive, got {}", trace.dt_ns)));
    }
    if trace.samples.len() != EXPECTED_SAMPLES {
        log::warn!(
            "experimental trace has {} samples, {} expected",
            trace.samples.len(),
            EXPECTED_SAMPLES
        );
    }
    let dt_scaled = TIME_SCALE * trace.dt_ns * 1e-9;
    let raw = TimeSeries::new(0.0, dt_scaled, trace.samples.iter().map(|v| v * trace.scale).collect())?;
    let g0: Vec<f64> = grid
        .nodes()
        .map(|t| if t > 0.0 && t < 2.0 { raw.interpolate(t) } else { 0.0 })
        .collect();
    let g0 = TimeSeries::new(grid.start(), grid.step(), g0)?;
    let truncated = truncate_and_select(&g0, trace.polarity);
    let g1 = if truncated.no_signal {
        g0.zeros_like()
    } else {
        let env = fit_envelope(&truncated.series, trace.polarity)?;
        TimeSeries::new(grid.start(), grid.step(), grid.nodes().map(|t| env.d1(t)).collect())?
    };
    Ok(BoundaryData { g0, g1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gaussian_series(a: f64, k: f64, m: f64, sign: f64) -> TimeSeries {
        let dt = 0.005;
        let samples = (0..401)
            .map(|j| sign * a * (-k * (j as f64 * dt - m).powi(2)).exp())
            .collect();
        TimeSeries::new(0.0, dt, samples).unwrap()
    }

    #[test]
    fn noise_level_zero_and_zero_series() {
        let ts = gaussian_series(0.3, 50.0, 1.0, -1.0);
        assert_eq!(add_multiplicative_noise(&ts, 0.0, 7).unwrap(), ts);
        let z = ts.zeros_like();
        assert_eq!(add_multiplicative_noise(&z, 0.05, 7).unwrap(), z);
        assert!(matches!(
            add_multiplicative_noise(&ts, -0.1, 7),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn noise_is_bounded_and_reproducible() {
        let ts = gaussian_series(0.3, 50.0, 1.0, -1.0);
        for seed in 0..50 {
            let a = add_multiplicative_noise(&ts, 0.05, seed).unwrap();
            let b = add_multiplicative_noise(&ts, 0.05, seed).unwrap();
            assert_eq!(a, b);
            for (x, y) in ts.samples.iter().zip(&a.samples) {
                if *x != 0.0 {
                    assert!(((y - x) / x).abs() <= 0.05 + 1e-15);
                }
            }
        }
    }

    #[test]
    fn truncation_examples() {
        let ts = TimeSeries::new(0.0, 1.0, vec![-1.0, -0.05, 0.5]).unwrap();
        let neg = truncate_and_select(&ts, Polarity::Negative);
        assert_eq!(neg.series.samples, vec![-1.0, 0.0, 0.0]);
        assert!(!neg.no_signal);
        let pos = truncate_and_select(&ts, Polarity::Positive);
        assert_eq!(pos.series.samples, vec![0.0, 0.0, 0.5]);
        let all_pos = TimeSeries::new(0.0, 1.0, vec![0.2, 0.4, 0.1]).unwrap();
        let t = truncate_and_select(&all_pos, Polarity::Negative);
        assert!(t.no_signal);
        assert!(t.series.samples.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn exact_gaussian_is_recovered() {
        let ts = gaussian_series(0.3, 50.0, 1.0, -1.0);
        let tr = truncate_and_select(&ts, Polarity::Negative);
        let p = fit_envelope(&tr.series, Polarity::Negative).unwrap();
        assert_relative_eq!(p.amplitude, 0.3, max_relative = 1e-8);
        assert_relative_eq!(p.width, 50.0, max_relative = 1e-8);
        assert_relative_eq!(p.center, 1.0, epsilon = 1e-9);
        assert_eq!(p.polarity, Polarity::Negative);
        let resid: f64 = tr
            .series
            .times()
            .zip(&tr.series.samples)
            .filter(|(_, v)| **v != 0.0)
            .map(|(t, v)| (p.value(t) - v).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = tr.series.samples.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(resid / norm < 1e-10);
    }

    #[test]
    fn noisy_gaussian_fit_stays_close() {
        let ts = gaussian_series(0.3, 50.0, 1.0, -1.0);
        for seed in 0..20 {
            let noisy = add_multiplicative_noise(&ts, 0.05, seed).unwrap();
            let tr = truncate_and_select(&noisy, Polarity::Negative);
            let p = fit_envelope(&tr.series, Polarity::Negative).unwrap();
            assert!((p.amplitude - 0.3).abs() < 0.03, "{p:?}");
            assert!((p.width - 50.0).abs() < 5.0, "{p:?}");
            assert!((p.center - 1.0).abs() < 0.1, "{p:?}");
        }
    }

    #[test]
    fn two_pulses_fit_the_dominant_one() {
        let a = gaussian_series(0.4, 200.0, 0.6, -1.0);
        let b = gaussian_series(1.0, 200.0, 1.4, -1.0);
        let sum = TimeSeries::new(
            0.0,
            a.dt,
            a.samples.iter().zip(&b.samples).map(|(x, y)| x + y).collect(),
        )
        .unwrap();
        let tr = truncate_and_select(&sum, Polarity::Negative);
        let p = fit_envelope(&tr.series, Polarity::Negative).unwrap();
        assert!((p.center - 1.4).abs() < 0.02, "{p:?}");
        assert!((p.amplitude - 1.0).abs() < 0.05, "{p:?}");

        let train = fit_pulse_train(&tr.series, Polarity::Negative, 0.15).unwrap();
        assert_eq!(train.pulses.len(), 2);
        assert!((train.pulses[0].center - 0.6).abs() < 1e-6);
        assert!((train.pulses[1].center - 1.4).abs() < 1e-6);
    }

    #[test]
    fn fit_needs_three_points() {
        let mut s = vec![0.0; 20];
        s[4] = -1.0;
        s[5] = -0.5;
        let ts = TimeSeries::new(0.0, 0.1, s).unwrap();
        assert!(matches!(fit_envelope(&ts, Polarity::Negative), Err(Error::Fit { .. })));
    }

    #[test]
    fn derived_data_closed_forms() {
        let grid = UniformGrid1D::spanning(0.0, 2.0, 201).unwrap();
        let (a, k, m) = (0.3, 40.0, 1.0);
        let env0 = EnvelopeParams {
            amplitude: a,
            width: k,
            center: m,
            polarity: Polarity::Negative,
        };
        let zero = EnvelopeParams { amplitude: 0.0, ..env0 };
        let d = derive_s0_s1(&env0, &zero, grid);
        for t in [0.3, 0.9, 1.0, 1.37] {
            let expect = 2.0 * a * k * (t - m) * (-k * (t - m) * (t - m)).exp();
            assert_relative_eq!(d.s0_at(t), expect, epsilon = 1e-12);
        }
        assert_relative_eq!(d.s1_at(m), 2.0 * a * k, epsilon = 1e-12);
        for (j, t) in grid.nodes().enumerate() {
            assert!((d.s0[j] - d.s0_at(t)).abs() <= 1e-12);
            assert!((d.s1[j] - d.s1_at(t)).abs() <= 1e-12);
        }
        let flat = derive_s0_s1(&zero, &zero, grid);
        assert!(flat.is_zero());
    }

    #[test]
    fn closed_form_derivatives_match_finite_differences() {
        let env = EnvelopeParams {
            amplitude: 0.7,
            width: 30.0,
            center: 0.8,
            polarity: Polarity::Positive,
        };
        let disc = |h: f64| {
            (0..50)
                .map(|k| {
                    let t = 0.5 + 0.012 * k as f64;
                    let fd1 = (env.value(t + h) - env.value(t - h)) / (2.0 * h);
                    let fd2 = (env.value(t + h) - 2.0 * env.value(t) + env.value(t - h)) / (h * h);
                    (fd1 - env.d1(t)).abs().max((fd2 - env.d2(t)).abs())
                })
                .fold(0.0, f64::max)
        };
        let ratio = disc(1e-3) / disc(5e-4);
        assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
    }

    #[test]
    fn experimental_ingestion() {
        let base = ExperimentalTrace {
            samples: vec![0.0; 80],
            dt_ns: 0.133,
            scale: 1e-7,
            background: (3.0, 5.0),
            polarity: Polarity::Negative,
        };
        let z = ingest_experimental(&base).unwrap();
        assert!(z.g0.samples.iter().chain(&z.g1.samples).all(|v| *v == 0.0));

        let span = TIME_SCALE * 79.0 * 0.133e-9;
        assert!((span - 1.996).abs() < 1e-3 && span < 2.0);

        let mut imp = base.clone();
        // Put the impulse on a sample that lands on a grid node after scaling.
        imp.samples[10] = 1.0;
        let raw_t = TIME_SCALE * 10.0 * 0.133e-9;
        let g = UniformGrid1D::new(0.0, raw_t / 50.0, 201).unwrap();
        let bd = ingest_experimental_on(&imp, &g).unwrap();
        assert_relative_eq!(bd.g0.max_abs(), 1e-7, max_relative = 1e-12);

        let empty = ExperimentalTrace {
            samples: vec![],
            ..base
        };
        assert!(matches!(ingest_experimental(&empty), Err(Error::Ingest(_))));
    }

    proptest! {
        #[test]
        fn truncation_is_idempotent_and_shrinks_support(v in prop::collection::vec(-1.0f64..1.0, 1..60)) {
            let ts = TimeSeries::new(0.0, 0.1, v).unwrap();
            for pol in [Polarity::Negative, Polarity::Positive] {
                let once = truncate_and_select(&ts, pol).series;
                for (a, b) in ts.samples.iter().zip(&once.samples) {
                    prop_assert!(*b == 0.0 || a == b);
                }
                let twice = truncate_and_select(&once, pol).series;
                prop_assert_eq!(&twice.samples, &once.samples);
            }
        }
    }
}
