//! RMSE of both estimators as the phase-shifter error grows.
//!
//! `cargo run --release --example impairment_sweep`

use rainbow_ttd::impairments::sensitivity_sweep;
use rainbow_ttd::{Scenario, ScenarioConfig, SweepAxis};

fn main() -> rainbow_ttd::Result<()> {
    let scenario = Scenario::new(ScenarioConfig::default())?;
    let grid = [0.0, 15.0, 30.0, 45.0];
    let rows = sensitivity_sweep(&scenario, SweepAxis::Phase, &grid, 100, 1)?;
    println!("{:>10} {:>12} {:>12}", "sigma_P", "coarse", "refined");
    for r in &rows {
        println!("{:>8} deg {:>8.3} deg {:>8.3} deg", r.grid_value, r.coarse_rmse_deg, r.refined_rmse_deg);
    }
    Ok(())
}
