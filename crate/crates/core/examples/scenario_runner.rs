//! Driving the experiment runner from code: parse a scenario, run a
//! command, and write its CSV table and SVG plot.
//!
//! ```text
//! cargo run --release --example scenario_runner -- /tmp/secure-qos-demo
//! ```

use std::path::PathBuf;

use secure_qos::experiment::{Command, Scenario};

const SCENARIO: &str = r#"
seed = 3
notes = ["demo sweep over source burstiness"]

[[sources]]
kind = "discrete_markov"
s = 0.3

[[sources]]
kind = "discrete_markov"
s = 0.9

[qos]
theta = [0.5]
messages = [0, 1]

[grid]
snr_db = { from = -20.0, to = 10.0, points = 16 }
"#;

fn main() -> secure_qos::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("secure-qos-demo"));
    let scenario = Scenario::from_toml_str(SCENARIO)?;
    let output = Command::Energy.run(&scenario)?;
    for line in &output.summary {
        println!("{line}");
    }
    for path in output.write(&out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
