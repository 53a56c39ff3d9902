//! Effective bandwidth of every source family, checked against the Monte
//! Carlo log-MGF oracle, and the closed-form ON-rate inversion checked
//! against plain bisection.
//!
//! ```text
//! cargo run --release --example effective_bandwidth
//! ```

use secure_qos::qos::{on_rate_for_capacity, solve_on_rate_bisection};
use secure_qos::sources::{effective_bandwidth_mc_oracle, ContinuousChain, DiscreteChain, SourceModel};

fn main() -> secure_qos::Result<()> {
    let sources = [
        ("constant", SourceModel::ConstantRate),
        ("discrete", SourceModel::DiscreteMarkov(DiscreteChain::new(0.8, 0.8)?)),
        ("fluid", SourceModel::MarkovFluid(ContinuousChain::new(1.0, 1.0)?)),
        ("discrete MMPP", SourceModel::DiscreteMmpp(DiscreteChain::new(0.6, 0.7)?)),
        ("continuous MMPP", SourceModel::ContinuousMmpp(ContinuousChain::new(2.0, 1.0)?)),
    ];
    let (theta, r) = (0.5, 1.0);

    println!("{:<16} {:>10} {:>12} {:>10} {:>8}", "source", "a(θ,r)", "oracle", "± se", "burst");
    for (name, source) in &sources {
        let exact = source.effective_bandwidth(theta, r)?;
        let mc = effective_bandwidth_mc_oracle(source, theta, r, 2_000, 64_000, 1)?;
        println!(
            "{name:<16} {exact:>10.6} {:>12.6} {:>10.6} {:>8.4}",
            mc.estimate,
            mc.std_error,
            source.burstiness()?
        );
    }

    // the largest ON rate whose effective bandwidth equals a given capacity
    let capacity = 0.7;
    println!("\nON rate supporting C = {capacity} bit/block at θ = {theta}");
    for (name, source) in &sources {
        let closed = on_rate_for_capacity(source, theta, capacity)?;
        let bisect = solve_on_rate_bisection(source, capacity, theta)?;
        println!("{name:<16} closed {closed:.12}  bisection {bisect:.12}");
    }
    Ok(())
}
