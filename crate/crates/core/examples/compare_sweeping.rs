//! Single-symbol TTD training against exhaustive PAA beam sweeping over the
//! same channel draws.
//!
//! `cargo run --release --example compare_sweeping`

use rainbow_ttd::experiments::compare_sweeping;
use rainbow_ttd::{Scenario, ScenarioConfig};

fn main() -> rainbow_ttd::Result<()> {
    let scenario = Scenario::new(ScenarioConfig::default())?;
    for row in compare_sweeping(&scenario, 100, 1)? {
        println!("{:<12} {:>3} symbol(s)  RMSE {:.3} deg", row.method, row.overhead_symbols, row.rmse_deg);
    }
    Ok(())
}
