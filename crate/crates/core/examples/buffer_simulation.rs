//! Buffer simulation: calibrate the source to the effective capacity, run
//! the queue, and compare the fitted overflow exponent and the delay tail
//! with the predictions.
//!
//! ```text
//! cargo run --release --example buffer_simulation
//! ```

use secure_qos::channel::{FadingScenario, MessageIndex, PowerSplit};
use secure_qos::simqueue::{
    calibrate_on_rate, default_thresholds, predict_delay_tail, run_buffer_sim, Service, SimConfig,
};
use secure_qos::sources::{DiscreteChain, SourceModel};

fn main() -> secure_qos::Result<()> {
    let source = SourceModel::DiscreteMarkov(DiscreteChain::new(0.8, 0.8)?);
    let service = Service::PerfectCsi {
        i: MessageIndex::Common,
        snr: 1.0,
        scenario: FadingScenario::independent(1.0)?,
        split: PowerSplit::uniform(0.7)?,
    };
    let theta = 1.0;
    let horizon = 4_000_000;
    let r_on = calibrate_on_rate(&source, &service, theta)?;
    let delays: Vec<f64> = (1..=8).map(|k| 10.0 * k as f64).collect();
    let config = SimConfig {
        source,
        service,
        horizon,
        seed: 11,
        thresholds: default_thresholds(theta, horizon, 40)?,
        delay_thresholds: Some(delays.clone()),
        replicas: 8,
    };
    let report = run_buffer_sim(&config, r_on)?;
    println!("r_on = {r_on:.6} bit/block");
    println!("{}", report.fit_summary());
    println!(
        "mean arrival {:.5}, mean service {:.5} bit/block",
        report.mean_arrival_rate(),
        report.mean_service_rate()
    );

    let predicted = predict_delay_tail(&source, r_on, theta, &delays, report.sigma_nonempty())?;
    println!("\n{:>6} {:>12} {:>12}", "delay", "simulated", "predicted");
    for ((d, sim), pred) in delays.iter().zip(report.delay_tail().unwrap_or_default()).zip(predicted) {
        println!("{d:>6} {sim:>12.4e} {pred:>12.4e}");
    }
    Ok(())
}
