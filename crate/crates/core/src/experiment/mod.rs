//! Experiment runner: scenario files in, CSV tables and SVG plots out.
//!
//! Four commands cover the library: [`cmd_analyze`] (throughput against
//! SNR), [`cmd_energy`] (throughput against energy per bit, with closed-form
//! reference values), [`cmd_simulate`] (buffer simulation and exponent fit)
//! and [`cmd_nocsi`] (fixed-rate transmission without transmitter CSI).
//! [`reproduce`] runs one of the bundled figure scenarios.
//!
//! Series are computed in parallel but always emitted in scenario order, and
//! every random stream derives from the scenario's root seed, so a rerun
//! with the same seed writes byte-identical tables.

mod figures;
pub mod plot;
pub mod scenario;
pub mod table;

use std::path::{Path, PathBuf};

use rand::RngCore;
use rayon::prelude::*;

pub use figures::{reproduce, Figure};
pub use plot::Plot;
pub use scenario::{MethodKind, Scenario};
pub use table::Table;

use crate::energy::{energy_curve, low_snr_metrics_closed_form, to_db};
use crate::error::{Error, Result};
use crate::expectation::Averager;
use crate::nocsi::{nocsi_low_snr_metrics_with_coefficient, nocsi_throughput, secure_on_probability, FixedRatePolicy};
use crate::qos::{avg_rate_for_capacity, effective_capacity_with, on_rate_for_capacity};
use crate::rng::substream;
use crate::simqueue::{calibrate_on_rate_with, default_thresholds, run_buffer_sim, Service, SimConfig};
use scenario::{at, source_label, ChannelCase, NoCsiSpec, ServiceKind};
use table::num;

/// The four analysis commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Energy,
    Simulate,
    NoCsi,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Energy => "energy",
            Command::Simulate => "simulate",
            Command::NoCsi => "nocsi",
        }
    }

    pub fn run(self, scenario: &Scenario) -> Result<RunOutput> {
        match self {
            Command::Analyze => cmd_analyze(scenario),
            Command::Energy => cmd_energy(scenario),
            Command::Simulate => cmd_simulate(scenario),
            Command::NoCsi => cmd_nocsi(scenario),
        }
    }
}

/// Command-line settings that take precedence over the scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub method: Option<MethodKind>,
    pub samples: Option<usize>,
}

impl Scenario {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(kind) = o.method {
            self.method.kind = kind;
        }
        if let Some(samples) = o.samples {
            self.method.samples = samples;
        }
    }
}

/// One table and, optionally, its plot; written as `<stem>.csv` / `<stem>.svg`.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub stem: String,
    pub table: Table,
    pub plot: Option<Plot>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    /// Human-readable result lines, also printed by the binary.
    pub summary: Vec<String>,
}

impl RunOutput {
    /// Prefixes every artifact stem, e.g. `fig3` turns `overflow` into
    /// `fig3_overflow`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for a in &mut self.artifacts {
            a.stem = format!("{prefix}_{}", a.stem);
        }
        self
    }

    pub fn artifact(&self, stem_suffix: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.stem.ends_with(stem_suffix))
    }

    /// Writes every artifact into `dir` (created if needed) and returns the
    /// paths in order.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for a in &self.artifacts {
            let csv = dir.join(format!("{}.csv", a.stem));
            a.table.write(std::io::BufWriter::new(std::fs::File::create(&csv)?))?;
            paths.push(csv);
            if let Some(p) = &a.plot {
                let svg = dir.join(format!("{}.svg", a.stem));
                std::fs::write(&svg, p.to_svg())?;
                paths.push(svg);
            }
        }
        Ok(paths)
    }
}

fn new_table(command: Command, scenario: &Scenario, columns: &[(&'static str, &'static str)]) -> Table {
    let mut t = Table::new(command.name(), scenario.seed, columns);
    for n in &scenario.notes {
        t.note(n.clone());
    }
    t
}

/// Seed of the `k`-th independent task under `root`.
fn derive_seed(root: u64, k: u64) -> u64 {
    substream(root, 1 << 32 | k).next_u64()
}

fn case_label(case: &ChannelCase, source: &str) -> String {
    format!(
        "{source} i={} th={} g={} rho={} d={}/{}",
        case.message.index(),
        case.theta,
        case.gamma,
        case.rho,
        case.split.delta1,
        case.split.delta2
    )
}

fn case_cells(k: usize, case: &ChannelCase, source: &str) -> Vec<String> {
    vec![
        k.to_string(),
        source.to_string(),
        case.message.index().to_string(),
        num(case.theta),
        num(case.gamma),
        num(case.rho),
        num(case.split.delta1),
        num(case.split.delta2),
    ]
}

const CASE_COLUMNS: [(&str, &str); 8] = [
    ("series", "-"),
    ("source", "-"),
    ("message", "-"),
    ("theta", "1/bit"),
    ("gamma", "-"),
    ("rho", "-"),
    ("delta1", "-"),
    ("delta2", "-"),
];

fn columns(extra: &[(&'static str, &'static str)]) -> Vec<(&'static str, &'static str)> {
    CASE_COLUMNS.iter().chain(extra).copied().collect()
}

/// Effective capacity and maximum arrival rates against SNR.
///
/// The capacity of each channel case is computed once per SNR and shared by
/// all sources.
pub fn cmd_analyze(scenario: &Scenario) -> Result<RunOutput> {
    let sources = scenario.source_models()?;
    let grid = scenario.snr_grid()?;
    let cases = scenario.channel_cases()?;
    let mut table = new_table(
        Command::Analyze,
        scenario,
        &columns(&[
            ("snr", "linear"),
            ("snr_db", "dB"),
            ("c_e", "bit/block"),
            ("c_e_std_error", "bit/block"),
            ("r_on", "bit/block"),
            ("r_avg", "bit/block"),
        ]),
    );
    let mut plot = Plot::new("Maximum average arrival rate", "SNR (dB)", "r_avg (bit/block)");
    let mut series = 0;
    for case in &cases {
        let method = scenario.method.resolve(&case.fading, scenario.seed);
        let averager = at("method".into(), Averager::new(&case.fading, method))?;
        let caps = grid
            .par_iter()
            .map(|&snr| effective_capacity_with(&averager, case.message, snr, case.theta, case.split))
            .collect::<Result<Vec<_>>>()?;
        for source in &sources {
            let label = source_label(source);
            let mut points = Vec::with_capacity(grid.len());
            for (&snr, c) in grid.iter().zip(&caps) {
                let r_on = on_rate_for_capacity(source, case.theta, c.value)?;
                let r_avg = avg_rate_for_capacity(source, case.theta, c.value)?;
                let mut row = case_cells(series, case, &label);
                row.extend([
                    num(snr),
                    num(to_db(snr)),
                    num(c.value),
                    num(c.std_error),
                    num(r_on),
                    num(r_avg),
                ]);
                table.push(row);
                points.push((to_db(snr), r_avg));
            }
            plot.add(case_label(case, &label), points);
            series += 1;
        }
    }
    Ok(RunOutput {
        artifacts: vec![Artifact {
            stem: "analyze".into(),
            table,
            plot: Some(plot),
        }],
        summary: vec![format!("{series} series x {} snr points", grid.len())],
    })
}

/// Throughput against energy per bit, with the closed-form minimum energy
/// per bit and wideband slope of each series as reference columns.
pub fn cmd_energy(scenario: &Scenario) -> Result<RunOutput> {
    let sources = scenario.source_models()?;
    let grid = scenario.snr_grid()?;
    let cases = scenario.channel_cases()?;
    let jobs: Vec<(ChannelCase, crate::sources::SourceModel)> = cases
        .iter()
        .flat_map(|c| sources.iter().map(move |s| (*c, *s)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|(case, source)| {
            let method = scenario.method.resolve(&case.fading, scenario.seed);
            let curve = energy_curve(source, case.message, case.theta, &case.fading, case.split, method, &grid)?;
            let metrics =
                low_snr_metrics_closed_form(source, case.message, case.theta, &case.fading, case.split, method)?;
            Ok((curve, metrics))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = new_table(
        Command::Energy,
        scenario,
        &columns(&[
            ("snr", "linear"),
            ("eb_n0_db", "dB"),
            ("r_avg", "bit/block"),
            ("ebn0_min_db", "dB"),
            ("s0", "bit/block/3dB"),
        ]),
    );
    let mut plot = Plot::new("Throughput vs energy per bit", "Eb/N0 (dB)", "r_avg (bit/block)");
    let mut summary = Vec::new();
    for (k, ((case, source), (curve, metrics))) in jobs.iter().zip(&results).enumerate() {
        let label = source_label(source);
        for p in curve {
            let mut row = case_cells(k, case, &label);
            row.extend([
                num(p.snr),
                num(p.eb_n0_db),
                num(p.r_avg),
                num(metrics.ebn0_min_db()),
                num(metrics.slope_s0),
            ]);
            table.push(row);
        }
        plot.add(case_label(case, &label), curve.iter().map(|p| (p.eb_n0_db, p.r_avg)).collect());
        summary.push(format!(
            "{}: ebn0_min={:.4} dB S0={:.6}",
            case_label(case, &label),
            metrics.ebn0_min_db(),
            metrics.slope_s0
        ));
    }
    Ok(RunOutput {
        artifacts: vec![Artifact {
            stem: "energy".into(),
            table,
            plot: Some(plot),
        }],
        summary,
    })
}

/// Fitted exponents are accepted when within this relative distance of θ.
pub const THETA_SIM_TOLERANCE: f64 = 0.10;

/// Buffer simulations, one per `(θ, message)` pair, with the fitted decay
/// rate of the overflow probability.
pub fn cmd_simulate(scenario: &Scenario) -> Result<RunOutput> {
    let sim = scenario
        .simulation
        .ok_or_else(|| Error::Config("simulation: section is required by this command".into()))?;
    let source = scenario.source_models()?[0];
    let thetas = scenario.thetas()?;
    let messages = scenario.messages()?;
    let (_, _, fading) = scenario.fading_scenarios()?[0];
    let split = scenario.power_splits()?[0];
    let nocsi = scenario.nocsi.clone().unwrap_or_default();
    let policy = nocsi.policies()?[0];
    let nocsi_scenario = nocsi.scenario()?;
    let method = scenario.method.resolve(&fading, scenario.seed);

    let mut overflow = new_table(
        Command::Simulate,
        scenario,
        &[
            ("theta", "1/bit"),
            ("message", "-"),
            ("q", "bit"),
            ("count", "blocks"),
            ("events", "busy periods"),
            ("prob", "-"),
            ("ln_prob", "-"),
            ("model_prob", "-"),
        ],
    );
    let mut fits = new_table(
        Command::Simulate,
        scenario,
        &[
            ("theta", "1/bit"),
            ("message", "-"),
            ("r_on", "bit/block"),
            ("theta_sim", "1/bit"),
            ("std_error", "1/bit"),
            ("relative_error", "-"),
            ("ln_intercept", "-"),
            ("residual", "-"),
            ("points", "-"),
            ("sigma_nonempty", "-"),
            ("blocks", "-"),
            ("mean_arrival", "bit/block"),
            ("mean_service", "bit/block"),
        ],
    );
    let mut plot = Plot::new("Buffer overflow probability", "q (bit)", "Pr{Q >= q}").log_y();
    let mut summary = Vec::new();
    for (k, &theta) in thetas.iter().enumerate() {
        let message = if messages.len() == 1 { messages[0] } else { messages[k] };
        let service = match sim.service {
            ServiceKind::PerfectCsi => Service::PerfectCsi {
                i: message,
                snr: sim.snr,
                scenario: fading,
                split,
            },
            ServiceKind::NoCsi => Service::NoCsi {
                snr: sim.snr,
                policy,
                scenario: nocsi_scenario,
            },
        };
        let r_on = calibrate_on_rate_with(&source, &service, theta, method)?;
        let config = SimConfig {
            source,
            service,
            horizon: sim.horizon,
            seed: derive_seed(scenario.seed, k as u64),
            thresholds: default_thresholds(theta, sim.horizon, sim.thresholds)?,
            delay_thresholds: None,
            replicas: sim.replicas,
        };
        let report = run_buffer_sim(&config, r_on)?;
        let fit = report
            .theta_fit
            .ok_or_else(|| Error::Fit(format!("no usable tail at theta = {theta}")))?;
        let sigma = report.sigma_nonempty();
        let tally = &report.overflow;
        let probs = report.overflow_prob();
        for j in 0..tally.thresholds.len() {
            let q = tally.thresholds[j];
            overflow.push(vec![
                num(theta),
                message.index().to_string(),
                num(q),
                tally.counts[j].to_string(),
                tally.events[j].to_string(),
                num(probs[j]),
                num(probs[j].ln()),
                num(sigma * (-theta * q).exp()),
            ]);
        }
        let rel = fit.theta_sim / theta - 1.0;
        fits.push(vec![
            num(theta),
            message.index().to_string(),
            num(r_on),
            num(fit.theta_sim),
            num(fit.std_error),
            num(rel),
            num(fit.intercept),
            num(fit.residual),
            fit.points.to_string(),
            num(sigma),
            report.blocks().to_string(),
            num(report.mean_arrival_rate()),
            num(report.mean_service_rate()),
        ]);
        plot.add(
            format!("theta={theta} (sim {:.3})", fit.theta_sim),
            tally.thresholds.iter().copied().zip(probs.iter().copied()).collect(),
        );
        summary.push(format!(
            "theta={theta} message={} r_on={r_on:.6} {} [{}]",
            message.index(),
            report.fit_summary(),
            if rel.abs() <= THETA_SIM_TOLERANCE { "within 10%" } else { "outside 10%" }
        ));
    }
    Ok(RunOutput {
        artifacts: vec![
            Artifact {
                stem: "overflow".into(),
                table: overflow,
                plot: Some(plot),
            },
            Artifact {
                stem: "fit".into(),
                table: fits,
                plot: None,
            },
        ],
        summary,
    })
}

impl Default for NoCsiSpec {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            a: vec![1.0],
            lambda: None,
        }
    }
}

/// Fixed-rate throughput and energy per bit for every source, θ and rate
/// rule, with closed-form low-SNR metrics for the `a·snr/ln 2` rules.
pub fn cmd_nocsi(scenario: &Scenario) -> Result<RunOutput> {
    let sources = scenario.source_models()?;
    let grid = scenario.snr_grid()?;
    let thetas = scenario.thetas()?;
    let spec = scenario
        .nocsi
        .clone()
        .ok_or_else(|| Error::Config("nocsi: section is required by this command".into()))?;
    let policies = spec.policies()?;
    let fading = spec.scenario()?;
    let mut table = new_table(
        Command::NoCsi,
        scenario,
        &[
            ("series", "-"),
            ("source", "-"),
            ("theta", "1/bit"),
            ("a", "-"),
            ("gamma", "-"),
            ("snr", "linear"),
            ("lambda", "bit/block"),
            ("p_secure", "-"),
            ("r_avg", "bit/block"),
            ("eb_n0_db", "dB"),
            ("ebn0_min_db", "dB"),
            ("s0", "bit/block/3dB"),
        ],
    );
    let mut plot = Plot::new("Fixed-rate throughput vs energy per bit", "Eb/N0 (dB)", "r_avg (bit/block)");
    let mut summary = Vec::new();
    let mut series = 0;
    for (sk, source) in sources.iter().enumerate() {
        let label = source_label(source);
        for &theta in &thetas {
            for &policy in &policies {
                let (a, metrics) = match policy {
                    FixedRatePolicy::LowSnr { a } => (
                        a,
                        Some(at(
                            format!("sources[{sk}]"),
                            nocsi_low_snr_metrics_with_coefficient(source, theta, fading.gamma(), a),
                        )?),
                    ),
                    FixedRatePolicy::Fixed { .. } => (f64::NAN, None),
                };
                let (ebn0_min_db, s0) = metrics.map_or((f64::NAN, f64::NAN), |m| (m.ebn0_min_db(), m.slope_s0));
                let mut points = Vec::with_capacity(grid.len());
                for &snr in &grid {
                    let r_avg = at(format!("sources[{sk}]"), nocsi_throughput(source, snr, theta, policy, &fading))?;
                    let eb_n0_db = to_db(snr / r_avg);
                    table.push(vec![
                        series.to_string(),
                        label.clone(),
                        num(theta),
                        num(a),
                        num(fading.gamma()),
                        num(snr),
                        num(policy.lambda(snr)?),
                        num(secure_on_probability(snr, policy, &fading)?),
                        num(r_avg),
                        num(eb_n0_db),
                        num(ebn0_min_db),
                        num(s0),
                    ]);
                    points.push((eb_n0_db, r_avg));
                }
                let name = format!("{label} th={theta} a={a}");
                plot.add(name.clone(), points);
                summary.push(format!("{name}: ebn0_min={ebn0_min_db:.4} dB S0={s0:.6}"));
                series += 1;
            }
        }
    }
    Ok(RunOutput {
        artifacts: vec![Artifact {
            stem: "nocsi".into(),
            table,
            plot: Some(plot),
        }],
        summary,
    })
}
