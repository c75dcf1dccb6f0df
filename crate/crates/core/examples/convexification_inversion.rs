//! Stage one on its own: derived data in, r(x) out, with the descent
//! history and the error against the exact potential.

use convexwave::convexify::{CarlemanParams, InversionDomain};
use convexwave::forward::{DielectricModel, ForwardConfig};
use convexwave::pipeline::{derive, invert, simulate, InversionSettings, NoiseConfig, Truth};
use convexwave::preprocess::PreprocessConfig;

fn main() -> convexwave::Result<()> {
    let model = DielectricModel::single_gaussian(0.2, 0.075, 1.6)?;
    let dom = InversionDomain::new(1.6)?;
    let sim = simulate(&model, &ForwardConfig::default(), &NoiseConfig::default())?;
    let data = derive(sim.measured(), &PreprocessConfig::default(), &dom, 2001)?;

    let inv = invert(&data, &dom, &CarlemanParams::default(), &InversionSettings::default())?;
    for rec in inv.trace.records.iter().step_by(1000) {
        println!("iter {:>5}  K = {:.4e}  |grad| = {:.3e}", rec.iter, rec.k, rec.gradnorm);
    }
    let truth = Truth::new(&model, &dom)?;
    println!("initial guess error {:.4}", truth.r_error(&inv.born)?);
    println!("final error         {:.4}", truth.r_error(&inv.r)?);
    Ok(())
}
