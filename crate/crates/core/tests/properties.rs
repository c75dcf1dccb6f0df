use proptest::prelude::*;

use convexwave::convexify::{functional_k, gradient_k, CarlemanParams, InversionDomain, QField, Scheme, REFINED_NODES};
use convexwave::forward::{true_potential, DielectricModel};
use convexwave::grid::{simpson, GridFn1D, GridFn2D, NaturalCubicSpline, UniformGrid1D};
use convexwave::io;
use convexwave::recover::{epsilon_interval, rho_star, run_algorithm2, segment_intervals, DEAD_BAND};

fn field(dom: &InversionDomain, seeds: &[f64]) -> QField {
    let lx = dom.grid.x.end();
    let lt = dom.grid.t.end();
    let q = GridFn2D::from_fn(dom.grid, |x, t| {
        seeds
            .chunks(3)
            .enumerate()
            .map(|(k, s)| s[0] * ((k + 1) as f64 * x / lx * s[1] * 4.0 + s[2]).sin() * (t / lt * (k + 1) as f64).cos())
            .sum()
    });
    let nt = dom.grid.t.count();
    let s0 = (0..nt).map(|j| q.values[[0, j]]).collect();
    let s1 = (0..nt)
        .map(|j| (q.values[[1, j]] - q.values[[0, j]]) / dom.grid.hx())
        .collect();
    QField::new(q, s0, s1).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn functional_is_convex_along_segments(a in coeffs(), b in coeffs(), s in 0.05f64..0.95) {
        let dom = InversionDomain::with_resolution(1.6, 16, 16).unwrap();
        let p = CarlemanParams::default();
        let (qa, qb) = (field(&dom, &a), field(&dom, &b));
        let mut mid = qa.clone();
        mid.q.values = &qa.q.values * (1.0 - s) + &qb.q.values * s;
        let (ka, kb, km) = (functional_k(&qa, &p), functional_k(&qb, &p), functional_k(&mid, &p));
        prop_assert!(km <= (1.0 - s) * ka + s * kb + 1e-9 * (ka + kb));
    }

    #[test]
    fn gradient_matches_directional_derivative(a in coeffs(), d in coeffs(), forward in any::<bool>()) {
        let dom = InversionDomain::with_resolution(1.6, 16, 16).unwrap();
        let scheme = if forward { Scheme::Forward } else { Scheme::Centered };
        let p = CarlemanParams { scheme, ..Default::default() };
        let q = field(&dom, &a);
        let dir = field(&dom, &d).q.values;
        let at = |s: f64| {
            let mut t = q.clone();
            t.q.values = &q.q.values + &(&dir * s);
            functional_k(&t, &p)
        };
        let h = 1e-3;
        let numeric = (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h);
        let analytic = (&gradient_k(&q, &p).values * &dir).sum();
        prop_assert!((numeric - analytic).abs() <= 1e-7 * analytic.abs().max(numeric.abs()).max(1e-8));
    }

    #[test]
    fn rho_schedule_decreases_with_length(l in 0.01f64..2.0, dl in 0.001f64..1.0) {
        let a = rho_star(l).unwrap();
        let b = rho_star(l + dl).unwrap();
        prop_assert!(b < a);
        prop_assert!(b > 7.2);
    }

    #[test]
    fn epsilon_interval_is_ordered_and_linear(c in 0.1f64..10.0, lo in 1.0f64..5.0, w in 0.0f64..5.0, k in 0.5f64..4.0) {
        let (a, b) = epsilon_interval(c, (lo, lo + w)).unwrap();
        prop_assert!(a <= b);
        let (a2, b2) = epsilon_interval(k * c, (lo, lo + w)).unwrap();
        prop_assert!((a2 - k * a).abs() <= 1e-12 * a2.abs().max(1.0));
        prop_assert!((b2 - k * b).abs() <= 1e-12 * b2.abs().max(1.0));
    }

    #[test]
    fn segments_tile_the_grid(values in prop::collection::vec(-1.0f64..1.0, 5..200)) {
        let n = values.len();
        let r = GridFn1D::new(UniformGrid1D::spanning(0.0, 1.0, n).unwrap(), values).unwrap();
        let part = segment_intervals(&r, DEAD_BAND);
        let segs = &part.segments;
        prop_assert_eq!(segs.first().unwrap().start, 0);
        prop_assert_eq!(segs.last().unwrap().end, n - 1);
        for w in segs.windows(2) {
            prop_assert_eq!(w[0].end, w[1].start);
            prop_assert!(w[0].kind != w[1].kind);
        }
        if segs.len() > 1 {
            prop_assert!(segs.iter().all(|s| s.end > s.start));
        }
    }

    #[test]
    fn profile_csv_round_trip_is_exact(values in prop::collection::vec(0.5f64..3.0, 2..60), step in 1e-4f64..0.1) {
        let grid = UniformGrid1D::new(0.0, step, values.len()).unwrap();
        let c = GridFn1D::new(grid, values).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        io::write_profile(&path, &c).unwrap();
        let back = io::read_profile(&path).unwrap();
        prop_assert_eq!(back.values, c.values);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// Stage two inverts the exact potential of smooth single inclusions.
    #[test]
    fn exact_potential_recovers_profile(amplitude in 0.05f64..0.2, fwhm in 0.07f64..0.12, center in 0.35f64..0.6) {
        let profile = convexwave::forward::Profile::Gaussians {
            amplitude,
            bumps: vec![convexwave::forward::GaussianBump { center, fwhm }],
        };
        let model = DielectricModel::new(profile, 1.6).unwrap();
        let dom = InversionDomain::new(1.6).unwrap();
        let r = true_potential(&model, &UniformGrid1D::spanning(0.0, dom.a, REFINED_NODES).unwrap()).unwrap();
        let c = run_algorithm2(&r).unwrap().profile;
        let spline = NaturalCubicSpline::new(c.grid.nodes().collect(), c.values.clone()).unwrap();
        let num = simpson(|y| (spline.eval(y) - model.eval(y)).powi(2), 0.0, 1.0, 2000);
        let den = simpson(|y| model.eval(y).powi(2), 0.0, 1.0, 2000);
        prop_assert!((num / den).sqrt() <= 0.05, "error {}", (num / den).sqrt());
    }
}
