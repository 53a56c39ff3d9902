//! Effective capacity and maximum average arrival rate of each message
//! against SNR, by quadrature (independent fading) and Monte Carlo
//! (correlated fading).
//!
//! ```text
//! cargo run --release --example throughput
//! ```

use secure_qos::channel::{FadingScenario, MessageIndex, PowerSplit};
use secure_qos::expectation::{Averager, ExpectationMethod};
use secure_qos::qos::throughput_point;
use secure_qos::sources::{DiscreteChain, SourceModel};

fn main() -> secure_qos::Result<()> {
    let source = SourceModel::DiscreteMarkov(DiscreteChain::with_on_probability(0.5)?);
    let split = PowerSplit::uniform(0.5)?;
    let theta = 1.0;
    let independent = FadingScenario::independent(1.0)?;
    let quad = Averager::new(&independent, ExpectationMethod::GaussLaguerre { nodes_per_axis: 64 })?;
    let correlated = independent.with_correlation(0.5)?;
    let mc = Averager::new(&correlated, ExpectationMethod::MonteCarlo { samples: 200_000, seed: 3 })?;

    println!("r_avg (bit/block), theta = {theta}, s = 0.5, delta = 0.5");
    println!("{:>8} {:>10} {:>10} {:>10} | {:>10} {:>10}", "snr_dB", "common", "conf 1", "conf 2", "conf1 ρ=.5", "± se(C_E)");
    for db in [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0] {
        let snr = 10f64.powf(db / 10.0);
        let mut row = Vec::new();
        for i in MessageIndex::ALL {
            row.push(throughput_point(&quad, &source, i, snr, theta, split)?.avg_rate);
        }
        let p = throughput_point(&mc, &source, MessageIndex::Confidential1, snr, theta, split)?;
        println!(
            "{db:>8} {:>10.5} {:>10.5} {:>10.5} | {:>10.5} {:>10.2e}",
            row[0], row[1], row[2], p.avg_rate, p.capacity_std_error
        );
    }
    Ok(())
}
