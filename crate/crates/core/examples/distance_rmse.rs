//! Link budget, SNR per subcarrier and TTD detectability versus distance.
//!
//! `cargo run --release --example distance_rmse`

use rainbow_ttd::channel::snr_per_subcarrier;
use rainbow_ttd::experiments::analytic_cutoff_m;
use rainbow_ttd::scenario::{paa_rmse, rmse_of};
use rainbow_ttd::{Scenario, ScenarioConfig};

fn main() -> rainbow_ttd::Result<()> {
    let mut cfg = ScenarioConfig::default();
    cfg.link.from_budget = true;
    let scenario = Scenario::new(cfg)?;

    let budget = scenario.config.link_budget();
    let sparse = snr_per_subcarrier(&budget, 128)?;
    let full = snr_per_subcarrier(&budget, 4096)?;
    println!("sparse loading gains {:.2} dB per subcarrier", 10.0 * (sparse / full).log10());
    println!("element SNR reaches 0 dB at {:.1} m", analytic_cutoff_m(&scenario)?);

    for d in [50.0, 150.0, 250.0] {
        let at = scenario.at_distance(d)?;
        let ttd = at.run_trials(&Default::default(), 1, 40)?;
        let paa = at.run_paa_trials(1, 40)?;
        let (coarse, _) = rmse_of(&ttd)?;
        let detected = ttd.iter().filter(|r| r.detectable()).count();
        println!(
            "{d:>5} m: element SNR {:>6.2} dB, TTD coarse {coarse:.2} deg, PAA {:.2} deg, detected {detected}/40",
            10.0 * at.element_snr()?.log10(),
            paa_rmse(&paa)?
        );
    }
    Ok(())
}
