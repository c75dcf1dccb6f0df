//! Fast invariant checks behind `convexwave selftest`. Each check runs on
//! a reduced problem and reports a measured value against its threshold.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convexify::{functional_k, gradient_k, CarlemanParams, InversionDomain, QField, Scheme, REFINED_NODES};
use crate::error::Result;
use crate::forward::{extract_boundary_data, solve_forward, true_potential, DielectricModel, ForwardConfig};
use crate::grid::{GridFn2D, UniformGrid1D, UniformGrid2D};
use crate::pipeline::{recover, RecoverySettings, Truth};
use crate::recover::{epsilon_interval, rho_star};

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

/// A smooth random field on `grid` with the given amplitude.
pub fn smooth_random_field(grid: UniformGrid2D, amplitude: f64, rng: &mut impl Rng) -> Array2<f64> {
    let modes: Vec<[f64; 4]> = (0..4)
        .map(|_| {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.5..3.0),
                rng.gen_range(0.5..3.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            ]
        })
        .collect();
    let (lx, lt) = (grid.x.end(), grid.t.end());
    GridFn2D::from_fn(grid, |x, t| {
        amplitude
            * modes
                .iter()
                .map(|[a, k, l, ph]| a * (k * x / lx * 3.0 + ph).sin() * (l * t / lt * 3.0).cos())
                .sum::<f64>()
    })
    .values
}

/// Five-point central difference of `K` along node `(i, j)`. Exact up to
/// rounding for the quartic `K`.
pub fn fd_derivative(q: &QField, p: &CarlemanParams, i: usize, j: usize, h: f64) -> f64 {
    let at = |s: f64| {
        let mut t = q.clone();
        t.q.values[[i, j]] += s;
        functional_k(&t, p)
    };
    (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h)
}

fn gradient_check(scheme: Scheme, samples: usize, seed: u64) -> Result<CheckOutcome> {
    let dom = InversionDomain::with_resolution(1.6, 24, 24)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = CarlemanParams {
        scheme,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mut q = QField::unconstrained_zero(dom.grid);
        q.q.values = smooth_random_field(dom.grid, 0.5, &mut rng);
        let g = gradient_k(&q, &p);
        let gmax = g.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let (nx, nt) = dom.grid.shape();
        let (i, j) = (rng.gen_range(0..nx), rng.gen_range(0..nt));
        let fd = fd_derivative(&q, &p, i, j, 1e-3);
        let an = g.values[[i, j]];
        worst = worst.max((fd - an).abs() / an.abs().max(1e-6 * gmax));
    }
    Ok(CheckOutcome::new(
        match scheme {
            Scheme::Centered => "gradient vs finite differences (centered)",
            Scheme::Forward => "gradient vs finite differences (forward)",
        },
        worst < 1e-5,
        format!("max relative error {worst:.2e} over {samples} samples (< 1e-5)"),
    ))
}

fn bregman_check(pairs: usize, seed: u64) -> Result<CheckOutcome> {
    let dom = InversionDomain::with_resolution(1.6, 24, 24)?;
    let p = CarlemanParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nt = dom.grid.t.count();
    let s0: Vec<f64> = (0..nt).map(|j| 0.2 * (j as f64 * 0.3).sin()).collect();
    let s1: Vec<f64> = (0..nt).map(|j| 0.1 * (j as f64 * 0.2).cos()).collect();
    let mut worst = f64::INFINITY;
    for _ in 0..pairs {
        let field = |rng: &mut ChaCha8Rng| -> Result<QField> {
            let v = smooth_random_field(dom.grid, 0.5, rng);
            QField::new(GridFn2D::new(dom.grid, v)?, s0.clone(), s1.clone())
        };
        let a = field(&mut rng)?;
        let b = field(&mut rng)?;
        let d = &b.q.values - &a.q.values;
        let gap = functional_k(&b, &p) - functional_k(&a, &p) - (&gradient_k(&a, &p).values * &d).sum();
        let floor = 0.5 * p.gamma * d.iter().map(|v| v * v).sum::<f64>() * dom.grid.cell();
        worst = worst.min(gap / floor);
    }
    Ok(CheckOutcome::new(
        "Bregman gap >= (γ/2)‖Δq‖²",
        worst >= 1.0,
        format!("min gap / ((γ/2)‖Δq‖²) = {worst:.3e} over {pairs} pairs"),
    ))
}

fn plateau_check() -> Result<CheckOutcome> {
    // Wider source so that a coarse grid resolves it.
    let cfg = ForwardConfig {
        ny: 800,
        nt: 1600,
        source_exponent: 1e5,
        ..Default::default()
    };
    let field = solve_forward(&DielectricModel::constant(1.0, 1.6)?, &cfg)?;
    let g = extract_boundary_data(&field)?.g0;
    let dev = g
        .samples
        .iter()
        .enumerate()
        .filter(|(k, _)| (0.1..=1.9).contains(&g.time(*k)))
        .fold(0.0f64, |m, (_, v)| m.max((v - 0.5).abs()));
    Ok(CheckOutcome::new(
        "homogeneous plateau u(0,t) = 1/2",
        dev <= 1e-2,
        format!("max |u(0,t) - 1/2| on [0.1, 1.9] = {dev:.2e} (<= 1e-2, N_y = 800, k = 1e5)"),
    ))
}

fn stage_two_check() -> Result<CheckOutcome> {
    let model = DielectricModel::single_gaussian(0.2, 0.075, 1.6)?;
    let dom = InversionDomain::new(1.6)?;
    let r = true_potential(&model, &UniformGrid1D::spanning(0.0, dom.a, REFINED_NODES)?)?;
    let (c, _) = recover(&r, &RecoverySettings::default())?;
    let err = Truth::new(&model, &dom)?.c_error(&c.profile)?;
    Ok(CheckOutcome::new(
        "c(y) from the exact potential",
        err <= 0.05,
        format!("relative L2 error {err:.4} (<= 0.05)"),
    ))
}

fn rho_check() -> CheckOutcome {
    let a = rho_star(0.1).unwrap_or(f64::NAN);
    let b = rho_star(0.073).unwrap_or(f64::NAN);
    CheckOutcome::new(
        "ρ*(l) schedule",
        (a - 28.469).abs() < 1e-9 && (b - 36.33).abs() < 1e-2,
        format!("ρ*(0.1) = {a:.4}, ρ*(0.073) = {b:.4}"),
    )
}

fn epsilon_check() -> CheckOutcome {
    let rows = [
        (6.27, (1.0, 1.0), (6.27, 6.27)),
        (3.21, (1.0, 1.0), (3.21, 3.21)),
        (4.12, (3.0, 5.0), (12.36, 20.60)),
        (5.39, (3.0, 5.0), (16.17, 26.95)),
        (0.26, (3.0, 5.0), (0.78, 1.30)),
    ];
    let ok = rows.iter().all(|&(c, bg, (lo, hi))| {
        epsilon_interval(c, bg).is_ok_and(|(a, b)| (a - lo).abs() < 1e-9 && (b - hi).abs() < 1e-9)
    });
    CheckOutcome::new("ε interval arithmetic", ok, format!("{} reference rows", rows.len()))
}

/// Run every check; failures inside a check are reported as failed checks.
pub fn run_selftest() -> Vec<CheckOutcome> {
    let wrap = |name: &'static str, r: Result<CheckOutcome>| {
        r.unwrap_or_else(|e| CheckOutcome::new(name, false, format!("error: {e}")))
    };
    vec![
        wrap("gradient (centered)", gradient_check(Scheme::Centered, 100, 11)),
        wrap("gradient (forward)", gradient_check(Scheme::Forward, 100, 12)),
        wrap("Bregman gap", bregman_check(50, 13)),
        wrap("plateau", plateau_check()),
        wrap("stage two", stage_two_check()),
        rho_check(),
        epsilon_check(),
    ]
}
