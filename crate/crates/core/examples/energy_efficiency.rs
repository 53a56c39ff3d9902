//! Low-SNR energy efficiency: closed-form minimum energy per bit and
//! wideband slope next to the values recovered from the throughput curve.
//!
//! ```text
//! cargo run --release --example energy_efficiency
//! ```

use secure_qos::channel::{FadingScenario, MessageIndex, PowerSplit};
use secure_qos::energy::{fitted_low_snr_metrics, low_snr_metrics_closed_form, FIT_STENCIL};
use secure_qos::expectation::ExpectationMethod;
use secure_qos::sources::{ContinuousChain, DiscreteChain, SourceModel};

fn main() -> secure_qos::Result<()> {
    let method = ExpectationMethod::GaussLaguerre { nodes_per_axis: 128 };
    let split = PowerSplit::uniform(0.5)?;
    let sources = [
        ("constant", SourceModel::ConstantRate),
        ("discrete", SourceModel::DiscreteMarkov(DiscreteChain::new(0.8, 0.8)?)),
        ("fluid", SourceModel::MarkovFluid(ContinuousChain::new(9.0, 1.0)?)),
        ("discrete MMPP", SourceModel::DiscreteMmpp(DiscreteChain::new(0.1, 0.9)?)),
    ];
    let theta = 1.0;
    println!("{:<14} {:>3} {:>5} {:>12} {:>12} {:>10} {:>10}", "source", "msg", "gamma", "EbN0 closed", "EbN0 fit", "S0 closed", "S0 fit");
    for gamma in [0.5, 2.0] {
        let scenario = FadingScenario::independent(gamma)?;
        for (name, source) in &sources {
            for i in MessageIndex::ALL {
                let closed = low_snr_metrics_closed_form(source, i, theta, &scenario, split, method)?;
                let fit = fitted_low_snr_metrics(source, i, theta, &scenario, split, method, &FIT_STENCIL)?;
                println!(
                    "{name:<14} {:>3} {gamma:>5} {:>9.4} dB {:>9.4} dB {:>10.5} {:>10.5}",
                    i.index(),
                    closed.ebn0_min_db(),
                    fit.ebn0_min_db(),
                    closed.slope_s0,
                    fit.slope_s0
                );
            }
        }
    }
    Ok(())
}
