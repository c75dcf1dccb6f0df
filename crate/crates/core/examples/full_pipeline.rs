//! Simulate, invert and recover for the one- and two-inclusion models.

use convexwave::pipeline::{double_gaussian_profile, run_pipeline, single_gaussian_profile, PipelineConfig};

fn main() -> convexwave::Result<()> {
    for (name, model) in [
        ("single", single_gaussian_profile()),
        ("double", double_gaussian_profile()),
    ] {
        let cfg = PipelineConfig {
            model: Some(model),
            ..Default::default()
        };
        let run = run_pipeline(&cfg)?;
        let rep = &run.report;
        println!(
            "{name}: r error {:.4} (initial {:.4}), c error {:.4}, max c {:.3}, {:.1}s",
            rep.relative_error.unwrap_or(f64::NAN),
            rep.initial_guess_error.unwrap_or(f64::NAN),
            rep.profile_error.unwrap_or(f64::NAN),
            run.summary.max_c,
            rep.timings.simulate + rep.timings.preprocess + rep.timings.invert + rep.timings.recover,
        );
    }
    Ok(())
}
