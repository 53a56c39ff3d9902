//! Fixed-rate secure transmission without transmitter CSI: the secure-ON
//! probability, its Monte Carlo check, and the energy cost of not knowing
//! the channel.
//!
//! ```text
//! cargo run --release --example no_csi
//! ```

use secure_qos::channel::{FadingScenario, MessageIndex, PowerSplit};
use secure_qos::energy::{min_ebn0_closed_form, to_db};
use secure_qos::expectation::ExpectationMethod;
use secure_qos::nocsi::{
    nocsi_low_snr_metrics_with_coefficient, nocsi_throughput, secure_on_probability, secure_on_probability_mc,
    FixedRatePolicy, NoCsiScenario,
};
use secure_qos::sources::{DiscreteChain, SourceModel};

fn main() -> secure_qos::Result<()> {
    let scenario = NoCsiScenario::new(1.0)?;
    let source = SourceModel::DiscreteMarkov(DiscreteChain::new(0.8, 0.8)?);
    let theta = 0.5;

    let (snr, lambda) = (1.0, 0.4);
    let exact = secure_on_probability(snr, FixedRatePolicy::Fixed { lambda }, &scenario)?;
    let mc = secure_on_probability_mc(snr, lambda, &scenario.fading(), 1_000_000, 5)?;
    println!("Pr{{secure}} at snr={snr}, lambda={lambda}: exact {exact:.5}, MC {:.5} ± {:.5}", mc.mean, mc.std_error);

    let perfect = min_ebn0_closed_form(
        source.family(),
        MessageIndex::Confidential1,
        theta,
        &FadingScenario::independent(1.0)?,
        PowerSplit::uniform(0.5)?,
        ExpectationMethod::GaussLaguerre { nodes_per_axis: 64 },
    )?;
    println!("perfect CSI minimum Eb/N0: {:.3} dB", to_db(perfect));

    println!("\n{:>4} {:>12} {:>10} {:>14} {:>14}", "a", "EbN0_min dB", "S0", "r_avg@-3dB", "r_avg@0dB");
    for a in [0.6, 0.8, 1.0, 1.2] {
        let m = nocsi_low_snr_metrics_with_coefficient(&source, theta, scenario.gamma(), a)?;
        let policy = FixedRatePolicy::LowSnr { a };
        let lo = nocsi_throughput(&source, 0.5, theta, policy, &scenario)?;
        let hi = nocsi_throughput(&source, 1.0, theta, policy, &scenario)?;
        println!("{a:>4} {:>12.4} {:>10.5} {lo:>14.6} {hi:>14.6}", m.ebn0_min_db(), m.slope_s0);
    }
    Ok(())
}
