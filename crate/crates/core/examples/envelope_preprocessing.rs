//! Fit the Gaussian envelope to a noisy backscattered trace and sample the
//! derived boundary data s0, s1.

use convexwave::convexify::InversionDomain;
use convexwave::forward::{DielectricModel, ForwardConfig};
use convexwave::pipeline::{derive, simulate, NoiseConfig};
use convexwave::preprocess::{fit_envelope, truncate_and_select, Polarity, PreprocessConfig};

fn main() -> convexwave::Result<()> {
    let model = DielectricModel::single_gaussian(0.2, 0.075, 1.6)?;
    let sim = simulate(&model, &ForwardConfig::default(), &NoiseConfig::default())?;
    let g0 = &sim.measured().g0;

    let kept = truncate_and_select(g0, Polarity::Negative);
    println!(
        "samples kept after truncation: {}",
        kept.series.samples.iter().filter(|v| **v != 0.0).count()
    );
    let env = fit_envelope(g0, Polarity::Negative)?;
    println!("envelope: {env:?}");

    let dom = InversionDomain::new(1.6)?;
    let data = derive(sim.measured(), &PreprocessConfig::default(), &dom, 2001)?;
    for t in [0.8, 0.9, 0.95, 1.0, 1.1] {
        println!("t = {t:.2}: s0 = {:+.5}, s1 = {:+.5}", data.s0_at(t), data.s1_at(t));
    }
    Ok(())
}
