//! Turn a simulated inclusion into an 80-sample radar trace file, then run
//! the experimental-data path on it and print the ε interval.

use convexwave::forward::{DielectricModel, ForwardConfig};
use convexwave::io::write_experimental_trace;
use convexwave::pipeline::{cmd_experimental, simulate, synthetic_radar_trace, NoiseConfig, PipelineConfig};
use convexwave::preprocess::Polarity;

fn main() -> convexwave::Result<()> {
    let dir = std::env::temp_dir().join("convexwave-experimental");
    std::fs::create_dir_all(&dir)?;
    let model = DielectricModel::single_gaussian(0.2, 0.075, 1.6)?;
    let sim = simulate(&model, &ForwardConfig::default(), &NoiseConfig { level: 0.0, seed: 1 })?;
    let trace = synthetic_radar_trace(&sim.clean, 80, 0.133, 1e-7, (3.0, 5.0), Polarity::Negative);
    let path = dir.join("trace.txt");
    write_experimental_trace(&path, &trace)?;

    let cfg = PipelineConfig {
        output_dir: dir.clone(),
        ..Default::default()
    };
    let rep = cmd_experimental(&cfg, &path)?;
    let (lo, hi) = rep.epsilon_interval.unwrap_or((f64::NAN, f64::NAN));
    println!(
        "computed max c {:.3} (model {:.3})",
        rep.max_c.unwrap_or(f64::NAN),
        model.max_c()
    );
    println!(
        "epsilon in [{lo:.2}, {hi:.2}], model value x background midpoint = {:.2}",
        model.max_c() * 4.0
    );
    println!("outputs in {}", dir.display());
    Ok(())
}
