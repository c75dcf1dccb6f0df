//! Solve the forward problem for the single-inclusion model and print the
//! backscattered trace at a few times, plus the boundary diagnostics.

use convexwave::forward::{
    absorbing_residual, extract_boundary_data, solve_forward, DielectricModel, ForwardConfig, Side,
};

fn main() -> convexwave::Result<()> {
    let model = DielectricModel::single_gaussian(0.2, 0.075, 1.6)?;
    let cfg = ForwardConfig::default();
    let field = solve_forward(&model, &cfg)?;
    let total = extract_boundary_data(&field)?;
    let incident = extract_boundary_data(&solve_forward(&DielectricModel::constant(1.0, 1.6)?, &cfg)?)?;
    let scattered = total.scattered(&incident)?;

    println!("max c = {:.4}", model.max_c());
    println!("{:>6} {:>12} {:>12}", "t", "u(0,t)", "scattered");
    for t in [0.2, 0.6, 0.9, 1.0, 1.1, 1.4, 1.9] {
        println!(
            "{t:>6.2} {:>12.5} {:>12.5}",
            total.g0.interpolate(t),
            scattered.g0.interpolate(t)
        );
    }
    println!(
        "absorbing residual: left {:.3}, right {:.3}",
        absorbing_residual(&field, Side::Left),
        absorbing_residual(&field, Side::Right)
    );
    Ok(())
}
