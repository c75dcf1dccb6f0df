//! Stage two from the exact potential of a known profile. Compares the
//! ρ*(l) schedule with an unweighted fit.

use convexwave::convexify::{InversionDomain, REFINED_NODES};
use convexwave::forward::{true_potential, DielectricModel};
use convexwave::grid::UniformGrid1D;
use convexwave::pipeline::Truth;
use convexwave::recover::{run_algorithm2_with, RecoveryConfig};

fn main() -> convexwave::Result<()> {
    let model = DielectricModel::single_gaussian(0.2, 0.075, 1.6)?;
    let dom = InversionDomain::new(1.6)?;
    let r = true_potential(&model, &UniformGrid1D::spanning(0.0, dom.a, REFINED_NODES)?)?;
    let truth = Truth::new(&model, &dom)?;

    for (label, rho) in [("rho*(l)", None), ("rho = 0", Some(0.0))] {
        let cfg = RecoveryConfig {
            rho_override: rho,
            ..Default::default()
        };
        let c = run_algorithm2_with(&r, &cfg)?;
        println!(
            "{label}: max c {:.4}, L2 error {:.5}",
            c.max_c(),
            truth.c_error(&c.profile)?
        );
        for seg in &c.segments {
            if let Some(w) = &seg.wls {
                println!(
                    "  [{:.3}, {:.3}] rho {:.2}, residual {:.2e} -> {:.2e}",
                    seg.segment.x_start, seg.segment.x_end, w.rho, w.initial_residual, w.final_residual
                );
            }
        }
    }
    Ok(())
}
