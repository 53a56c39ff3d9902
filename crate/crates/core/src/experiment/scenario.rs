//! Scenario files: one TOML table per model component.
//!
//! ```toml
//! seed = 7
//! notes = ["gamma is not given for this setting; 1 is assumed"]
//!
//! [[sources]]
//! kind = "discrete_markov"
//! s = 0.5                 # or p11 / p22
//!
//! [channel]
//! gamma = [1.0]           # E z2, with E z1 = 1
//! rho = [0.0, 0.5]        # power correlation
//!
//! [[splits]]
//! delta1 = 0.5
//! delta2 = 0.5
//!
//! [qos]
//! theta = [1.0]
//! messages = [1]          # 0 common, 1 and 2 confidential
//!
//! [grid]
//! snr_db = { from = -10.0, to = 20.0, points = 31 }
//!
//! [method]
//! kind = "auto"           # auto | mc | quad
//! ```
//!
//! Every list is a sweep axis; the series of a run are their cartesian
//! product. Validation errors carry the path of the offending field.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{FadingScenario, MessageIndex, PowerSplit};
use crate::error::{Error, Result};
use crate::expectation::ExpectationMethod;
use crate::nocsi::{FixedRatePolicy, NoCsiScenario};
use crate::sources::{ContinuousChain, DiscreteChain, SourceModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub seed: u64,
    /// Free-text assumptions, copied into every output header.
    #[serde(default)]
    pub notes: Vec<String>,
    pub sources: Vec<SourceSpec>,
    #[serde(default)]
    pub channel: ChannelSpec,
    #[serde(default = "default_splits")]
    pub splits: Vec<SplitSpec>,
    #[serde(default)]
    pub qos: QosSpec,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub method: MethodSpec,
    #[serde(default)]
    pub simulation: Option<SimulationSpec>,
    #[serde(default)]
    pub nocsi: Option<NoCsiSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Constant,
    DiscreteMarkov,
    MarkovFluid,
    DiscreteMmpp,
    ContinuousMmpp,
}

/// Discrete chains take either `s` (`p11 = 1 − s`, `p22 = s`) or both of
/// `p11`, `p22`; continuous chains take `alpha` (OFF→ON) and `beta` (ON→OFF).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub kind: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p11: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p22: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl SourceSpec {
    pub fn build(&self) -> Result<SourceModel> {
        let discrete = || -> Result<DiscreteChain> {
            match (self.s, self.p11, self.p22) {
                (Some(s), None, None) => DiscreteChain::with_on_probability(s),
                (None, Some(p11), Some(p22)) => DiscreteChain::new(p11, p22),
                _ => Err(Error::Config("give either `s` or both `p11` and `p22`".into())),
            }
        };
        let continuous = || -> Result<ContinuousChain> {
            match (self.alpha, self.beta) {
                (Some(a), Some(b)) => ContinuousChain::new(a, b),
                _ => Err(Error::Config("give both `alpha` and `beta`".into())),
            }
        };
        Ok(match self.kind {
            SourceKind::Constant => SourceModel::ConstantRate,
            SourceKind::DiscreteMarkov => SourceModel::DiscreteMarkov(discrete()?),
            SourceKind::MarkovFluid => SourceModel::MarkovFluid(continuous()?),
            SourceKind::DiscreteMmpp => SourceModel::DiscreteMmpp(discrete()?),
            SourceKind::ContinuousMmpp => SourceModel::ContinuousMmpp(continuous()?),
        })
    }
}

/// Short human-readable name of a source, used as a series label.
pub fn source_label(source: &SourceModel) -> String {
    match source {
        SourceModel::ConstantRate => "constant".into(),
        SourceModel::DiscreteMarkov(c) => format!("discrete(p11={},p22={})", short(c.p11()), short(c.p22())),
        SourceModel::MarkovFluid(c) => format!("fluid(alpha={},beta={})", short(c.alpha()), short(c.beta())),
        SourceModel::DiscreteMmpp(c) => format!("dmmpp(p11={},p22={})", short(c.p11()), short(c.p22())),
        SourceModel::ContinuousMmpp(c) => format!("cmmpp(alpha={},beta={})", short(c.alpha()), short(c.beta())),
    }
}

/// At most six decimals, trailing zeros dropped (`1 - 0.8` prints as `0.2`).
fn short(x: f64) -> String {
    let s = format!("{x:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(default = "one")]
    pub gamma: Vec<f64>,
    #[serde(default = "zero")]
    pub rho: Vec<f64>,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self {
            gamma: one(),
            rho: zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    pub delta1: f64,
    pub delta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QosSpec {
    #[serde(default = "one")]
    pub theta: Vec<f64>,
    #[serde(default = "default_messages")]
    pub messages: Vec<usize>,
}

impl Default for QosSpec {
    fn default() -> Self {
        Self {
            theta: one(),
            messages: default_messages(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub snr: Option<Vec<f64>>,
    #[serde(default)]
    pub snr_db: Option<DbRange>,
}

/// `points` values evenly spaced in dB over `[from, to]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DbRange {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        let grid = match (&self.snr, &self.snr_db) {
            (Some(v), None) => v.clone(),
            (None, Some(r)) => {
                if r.points == 0 || !(r.from.is_finite() && r.to.is_finite()) {
                    return Err(Error::Config("snr_db needs finite bounds and points >= 1".into()));
                }
                if r.points == 1 {
                    vec![db_to_linear(r.from)]
                } else {
                    let step = (r.to - r.from) / (r.points - 1) as f64;
                    (0..r.points)
                        .map(|k| db_to_linear(r.from + step * k as f64))
                        .collect()
                }
            }
            _ => return Err(Error::Config("give exactly one of `snr` and `snr_db`".into())),
        };
        if grid.is_empty() {
            return Err(Error::Config("snr grid is empty".into()));
        }
        if grid.iter().any(|s| !(s.is_finite() && *s > 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("snr values must be positive and strictly ascending".into()));
        }
        Ok(grid)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    /// Quadrature for independent fading, Monte Carlo otherwise.
    #[default]
    Auto,
    Mc,
    Quad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    #[serde(default)]
    pub kind: MethodKind,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_nodes")]
    pub nodes_per_axis: usize,
}

impl Default for MethodSpec {
    fn default() -> Self {
        Self {
            kind: MethodKind::Auto,
            samples: default_samples(),
            nodes_per_axis: default_nodes(),
        }
    }
}

impl MethodSpec {
    /// Expectation method for one fading scenario; Monte Carlo uses `seed`.
    pub fn resolve(&self, scenario: &FadingScenario, seed: u64) -> ExpectationMethod {
        let quad = match self.kind {
            MethodKind::Auto => scenario.is_independent(),
            MethodKind::Mc => false,
            MethodKind::Quad => true,
        };
        if quad {
            ExpectationMethod::GaussLaguerre {
                nodes_per_axis: self.nodes_per_axis,
            }
        } else {
            ExpectationMethod::MonteCarlo {
                samples: self.samples,
                seed,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServiceKind {
    PerfectCsi,
    NoCsi,
}

/// Buffer simulation settings. `qos.theta` and `qos.messages` are paired
/// (a single message applies to every θ); the first source, channel and
/// split entries are used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    pub service: ServiceKind,
    pub snr: f64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default = "default_threshold_count")]
    pub thresholds: usize,
}

/// Fixed-rate (no transmitter CSI) settings: either a list of low-SNR
/// coefficients `a` (`λ = a·snr/ln 2`) or one explicit rate `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoCsiSpec {
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "one")]
    pub a: Vec<f64>,
    #[serde(default)]
    pub lambda: Option<f64>,
}

impl NoCsiSpec {
    pub fn policies(&self) -> Result<Vec<FixedRatePolicy>> {
        let policies: Vec<_> = match self.lambda {
            Some(lambda) => vec![FixedRatePolicy::Fixed { lambda }],
            None => self.a.iter().map(|&a| FixedRatePolicy::LowSnr { a }).collect(),
        };
        if policies.is_empty() {
            return Err(Error::Config("nocsi.a: must not be empty".into()));
        }
        for (k, p) in policies.iter().enumerate() {
            at(format!("nocsi.policy[{k}]"), p.lambda(1.0))?;
        }
        Ok(policies)
    }

    pub fn scenario(&self) -> Result<NoCsiScenario> {
        at("nocsi.gamma".into(), NoCsiScenario::new(self.gamma))
    }
}

fn default_splits() -> Vec<SplitSpec> {
    vec![SplitSpec {
        delta1: 0.5,
        delta2: 0.5,
    }]
}

fn one() -> Vec<f64> {
    vec![1.0]
}

fn zero() -> Vec<f64> {
    vec![0.0]
}

fn default_messages() -> Vec<usize> {
    vec![1]
}

fn default_samples() -> usize {
    1_000_000
}

fn default_nodes() -> usize {
    128
}

fn default_horizon() -> usize {
    10_000_000
}

fn default_replicas() -> usize {
    8
}

fn default_threshold_count() -> usize {
    40
}

fn default_gamma() -> f64 {
    1.0
}

/// Prefixes configuration-type errors with the field path they came from.
pub(crate) fn at<T>(path: String, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parameter { .. } | Error::Config(_) | Error::Unsupported(_) => {
            Error::Config(format!("{path}: {e}"))
        }
        other => other,
    })
}

/// One point of the sweep over channel, split, θ and message.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelCase {
    pub gamma: f64,
    pub rho: f64,
    pub fading: FadingScenario,
    pub split: PowerSplit,
    pub theta: f64,
    pub message: MessageIndex,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Checks every section that is present; sections a command needs but
    /// that are absent are reported by the command itself.
    pub fn validate(&self) -> Result<()> {
        self.source_models()?;
        self.channel_cases()?;
        if let Some(g) = &self.grid {
            at("grid".into(), g.resolve())?;
        }
        if let Some(n) = &self.nocsi {
            n.policies()?;
            n.scenario()?;
        }
        if let Some(sim) = &self.simulation {
            if !(sim.snr.is_finite() && sim.snr > 0.0) {
                return Err(Error::Config(format!("simulation.snr: must be > 0, got {}", sim.snr)));
            }
            if sim.horizon < crate::simqueue::MIN_HORIZON {
                return Err(Error::Config(format!(
                    "simulation.horizon: must be >= {}, got {}",
                    crate::simqueue::MIN_HORIZON,
                    sim.horizon
                )));
            }
            if sim.replicas == 0 {
                return Err(Error::Config("simulation.replicas: must be >= 1".into()));
            }
            if sim.thresholds < 2 {
                return Err(Error::Config("simulation.thresholds: must be >= 2".into()));
            }
            let (t, m) = (self.qos.theta.len(), self.qos.messages.len());
            if m != 1 && m != t {
                return Err(Error::Config(format!(
                    "qos.messages: simulation pairs messages with theta; need 1 or {t} entries, got {m}"
                )));
            }
        }
        Ok(())
    }

    pub fn source_models(&self) -> Result<Vec<SourceModel>> {
        if self.sources.is_empty() {
            return Err(Error::Config("sources: at least one source is required".into()));
        }
        self.sources
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let model = at(format!("sources[{k}]"), s.build())?;
                at(format!("sources[{k}]"), model.on_probability())?;
                Ok(model)
            })
            .collect()
    }

    pub fn snr_grid(&self) -> Result<Vec<f64>> {
        match &self.grid {
            Some(g) => at("grid".into(), g.resolve()),
            None => Err(Error::Config("grid: section is required by this command".into())),
        }
    }

    pub fn thetas(&self) -> Result<Vec<f64>> {
        if self.qos.theta.is_empty() {
            return Err(Error::Config("qos.theta: must not be empty".into()));
        }
        for (k, &t) in self.qos.theta.iter().enumerate() {
            at(format!("qos.theta[{k}]"), crate::sources::validate_theta(t))?;
        }
        Ok(self.qos.theta.clone())
    }

    pub fn messages(&self) -> Result<Vec<MessageIndex>> {
        if self.qos.messages.is_empty() {
            return Err(Error::Config("qos.messages: must not be empty".into()));
        }
        self.qos
            .messages
            .iter()
            .enumerate()
            .map(|(k, &i)| at(format!("qos.messages[{k}]"), MessageIndex::from_index(i)))
            .collect()
    }

    pub fn fading_scenarios(&self) -> Result<Vec<(f64, f64, FadingScenario)>> {
        let c = &self.channel;
        if c.gamma.is_empty() || c.rho.is_empty() {
            return Err(Error::Config("channel: gamma and rho must not be empty".into()));
        }
        let mut out = Vec::new();
        for (gk, &gamma) in c.gamma.iter().enumerate() {
            let base = at(format!("channel.gamma[{gk}]"), FadingScenario::independent(gamma))?;
            for (rk, &rho) in c.rho.iter().enumerate() {
                let fading = at(format!("channel.rho[{rk}]"), base.with_correlation(rho))?;
                out.push((gamma, rho, fading));
            }
        }
        Ok(out)
    }

    pub fn power_splits(&self) -> Result<Vec<PowerSplit>> {
        if self.splits.is_empty() {
            return Err(Error::Config("splits: must not be empty".into()));
        }
        self.splits
            .iter()
            .enumerate()
            .map(|(k, s)| at(format!("splits[{k}]"), PowerSplit::new(s.delta1, s.delta2)))
            .collect()
    }

    /// Cartesian product of channel, split, θ and message, in file order.
    pub fn channel_cases(&self) -> Result<Vec<ChannelCase>> {
        let fadings = self.fading_scenarios()?;
        let splits = self.power_splits()?;
        let thetas = self.thetas()?;
        let messages = self.messages()?;
        let mut out = Vec::new();
        for &(gamma, rho, fading) in &fadings {
            for &split in &splits {
                for &theta in &thetas {
                    for &message in &messages {
                        out.push(ChannelCase {
                            gamma,
                            rho,
                            fading,
                            split,
                            theta,
                            message,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}
