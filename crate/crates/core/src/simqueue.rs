//! Block-by-block buffer simulation.
//!
//! A source feeds a buffer at a calibrated ON-rate and the channel drains it
//! with the instantaneous service of one message stream:
//! `Q ← max(Q + A_k − S_k, 0)`. The tail `Pr{Q ≥ q}` should decay as
//! `ς e^{−θq}` with the QoS exponent the ON-rate was calibrated for, which
//! `fit_qos_exponent` checks.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{message_rate, sample_fading, FadingScenario, MessageIndex, PowerSplit};
use crate::error::{Error, Result};
use crate::expectation::{Averager, ExpectationMethod};
use crate::nocsi::{nocsi_throughput, FixedRatePolicy, NoCsiScenario};
use crate::qos::{effective_capacity_with, on_rate_for_capacity};
use crate::rng::{substream, StreamRng};
use crate::sources::{validate_theta, SourceModel};

/// Service process draining the buffer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Service {
    /// Instantaneous rate of stream `i` under perfect transmitter CSI.
    PerfectCsi {
        i: MessageIndex,
        snr: f64,
        scenario: FadingScenario,
        split: PowerSplit,
    },
    /// Fixed-rate secure transmission: `λ` when secure, 0 otherwise.
    NoCsi {
        snr: f64,
        policy: FixedRatePolicy,
        scenario: NoCsiScenario,
    },
}

impl Service {
    fn sampler(&self) -> Result<ServiceSampler> {
        Ok(match *self {
            Service::PerfectCsi {
                i,
                snr,
                scenario,
                split,
            } => {
                if !(snr.is_finite() && snr >= 0.0) {
                    return Err(Error::param("snr", format!("must be finite and >= 0, got {snr}")));
                }
                ServiceSampler::Perfect {
                    i,
                    snr,
                    scenario,
                    split,
                }
            }
            Service::NoCsi {
                snr,
                policy,
                scenario,
            } => {
                if !(snr.is_finite() && snr > 0.0) {
                    return Err(Error::param("snr", format!("must be finite and > 0, got {snr}")));
                }
                let lambda = policy.lambda(snr)?;
                let two_l = (lambda * std::f64::consts::LN_2).exp();
                ServiceSampler::Fixed {
                    lambda,
                    slope: two_l,
                    offset: (lambda * std::f64::consts::LN_2).exp_m1() / snr,
                    fading: scenario.fading(),
                }
            }
        })
    }
}

enum ServiceSampler {
    Perfect {
        i: MessageIndex,
        snr: f64,
        scenario: FadingScenario,
        split: PowerSplit,
    },
    Fixed {
        lambda: f64,
        slope: f64,
        offset: f64,
        fading: FadingScenario,
    },
}

impl ServiceSampler {
    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            ServiceSampler::Perfect {
                i,
                snr,
                scenario,
                split,
            } => message_rate(sample_fading(scenario, rng), *snr, *split, *i),
            ServiceSampler::Fixed {
                lambda,
                slope,
                offset,
                fading,
            } => {
                let z = sample_fading(fading, rng);
                if z.z1 > slope * z.z2 + offset {
                    *lambda
                } else {
                    0.0
                }
            }
        }
    }
}

/// Simulation set-up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub source: SourceModel,
    pub service: Service,
    /// Total blocks across all replicas.
    pub horizon: usize,
    pub seed: u64,
    /// Ascending buffer levels (bits) whose exceedance is tallied.
    pub thresholds: Vec<f64>,
    /// Optional ascending delays (blocks) for the virtual-delay tail.
    #[serde(default)]
    pub delay_thresholds: Option<Vec<f64>>,
    /// Independent replicas the horizon is split into.
    #[serde(default = "default_replicas")]
    pub replicas: usize,
}

fn default_replicas() -> usize {
    1
}

/// Shortest horizon accepted for tail estimation.
pub const MIN_HORIZON: usize = 1_000_000;

/// Blocks between two virtual-delay probes.
pub const PROBE_INTERVAL: usize = 100;

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon < MIN_HORIZON {
            return Err(Error::param(
                "horizon",
                format!("must be >= {MIN_HORIZON} blocks, got {}", self.horizon),
            ));
        }
        if self.replicas == 0 || self.replicas > self.horizon {
            return Err(Error::param("replicas", format!("must be in 1..=horizon, got {}", self.replicas)));
        }
        check_ascending("thresholds", &self.thresholds)?;
        if let Some(d) = &self.delay_thresholds {
            check_ascending("delay_thresholds", d)?;
        }
        self.source.on_probability()?;
        self.service.sampler()?;
        Ok(())
    }
}

fn check_ascending(name: &'static str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::param(name, "must not be empty"));
    }
    if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(name, "must be finite, nonnegative and strictly ascending"));
    }
    Ok(())
}

/// `n` evenly spaced thresholds on `[0, ln(horizon/100)/θ]`, where about 100
/// exceedances are expected at the top if the tail is `e^{−θq}`.
pub fn default_thresholds(theta: f64, horizon: usize, n: usize) -> Result<Vec<f64>> {
    validate_theta(theta)?;
    if n < 2 {
        return Err(Error::param("n", "need at least 2 thresholds"));
    }
    let top = ((horizon as f64 / 100.0).max(std::f64::consts::E)).ln() / theta;
    Ok((0..n).map(|k| top * k as f64 / (n - 1) as f64).collect())
}

/// Exceedance counts `#{X ≥ t_j}` over a fixed threshold list.
#[derive(Debug, Clone, PartialEq)]
pub struct Tally {
    pub thresholds: Vec<f64>,
    pub counts: Vec<u64>,
    /// Independent exceedance events per threshold. For the buffer these are
    /// busy periods (empty to empty) whose maximum reaches the threshold; for
    /// sparse probes every exceedance is its own event.
    pub events: Vec<u64>,
    pub samples: u64,
}

impl Tally {
    fn from_buckets(thresholds: &[f64], buckets: &[u64], samples: u64) -> Self {
        // buckets[k] counts values exceeding exactly k thresholds
        let mut counts = vec![0; thresholds.len()];
        let mut acc = 0;
        for j in (0..thresholds.len()).rev() {
            acc += buckets[j + 1];
            counts[j] = acc;
        }
        Self {
            thresholds: thresholds.to_vec(),
            events: counts.clone(),
            counts,
            samples,
        }
    }

    /// Per-threshold events from a difference array over bucket indices.
    fn with_events(mut self, diff: &[i64]) -> Self {
        let mut acc = 0i64;
        for (j, e) in self.events.iter_mut().enumerate() {
            acc += diff[j];
            *e = acc as u64;
        }
        self
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.samples.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.events.iter_mut().zip(&other.events) {
            *a += b;
        }
        self.samples += other.samples;
    }
}

/// Outcome of a buffer simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub r_on: f64,
    pub overflow: Tally,
    pub nonempty: u64,
    pub total_arrivals: f64,
    pub total_service: f64,
    pub delay: Option<Tally>,
    pub theta_fit: Option<QosFit>,
}

impl SimReport {
    pub fn blocks(&self) -> u64 {
        self.overflow.samples
    }

    /// Frequency of `{Q ≥ q}` per threshold.
    pub fn overflow_prob(&self) -> Vec<f64> {
        self.overflow.probabilities()
    }

    /// `ς`: frequency of a non-empty buffer.
    pub fn sigma_nonempty(&self) -> f64 {
        self.nonempty as f64 / self.blocks().max(1) as f64
    }

    pub fn delay_tail(&self) -> Option<Vec<f64>> {
        self.delay.as_ref().map(Tally::probabilities)
    }

    pub fn mean_arrival_rate(&self) -> f64 {
        self.total_arrivals / self.blocks().max(1) as f64
    }

    pub fn mean_service_rate(&self) -> f64 {
        self.total_service / self.blocks().max(1) as f64
    }

    fn merge(&mut self, other: &SimReport) {
        self.overflow.merge(&other.overflow);
        self.nonempty += other.nonempty;
        self.total_arrivals += other.total_arrivals;
        self.total_service += other.total_service;
        if let (Some(a), Some(b)) = (self.delay.as_mut(), other.delay.as_ref()) {
            a.merge(b);
        }
    }

    /// Writes `q,count,prob,ln_prob` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["q_bits", "count", "prob", "ln_prob"])?;
        for ((q, c), p) in self
            .overflow
            .thresholds
            .iter()
            .zip(&self.overflow.counts)
            .zip(self.overflow_prob())
        {
            w.write_record([q.to_string(), c.to_string(), p.to_string(), p.ln().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// One-line description of the exponent fit.
    pub fn fit_summary(&self) -> String {
        match &self.theta_fit {
            Some(f) => format!(
                "theta_sim={:.4} std_error={:.4} ln_sigma={:.4} residual={:.3e} points={} sigma_nonempty={:.4} blocks={}",
                f.theta_sim,
                f.std_error,
                f.intercept,
                f.residual,
                f.points,
                self.sigma_nonempty(),
                self.blocks()
            ),
            None => format!("theta_sim=unavailable blocks={}", self.blocks()),
        }
    }
}

/// ON-state rate matching the service's effective capacity at `theta`.
///
/// Perfect-CSI capacities are evaluated by 128-node quadrature for
/// independent fading and by 10^6-sample Monte Carlo otherwise.
pub fn calibrate_on_rate(source: &SourceModel, service: &Service, theta: f64) -> Result<f64> {
    let method = match service {
        Service::PerfectCsi { scenario, .. } if scenario.is_independent() => {
            ExpectationMethod::GaussLaguerre { nodes_per_axis: 128 }
        }
        _ => ExpectationMethod::default(),
    };
    calibrate_on_rate_with(source, service, theta, method)
}

pub fn calibrate_on_rate_with(
    source: &SourceModel,
    service: &Service,
    theta: f64,
    method: ExpectationMethod,
) -> Result<f64> {
    validate_theta(theta)?;
    match *service {
        Service::PerfectCsi {
            i,
            snr,
            scenario,
            split,
        } => {
            let averager = Averager::new(&scenario, method)?;
            let c = effective_capacity_with(&averager, i, snr, theta, split)?;
            on_rate_for_capacity(source, theta, c.value)
        }
        Service::NoCsi {
            snr,
            policy,
            scenario,
        } => Ok(nocsi_throughput(source, snr, theta, policy, &scenario)? / source.on_probability()?),
    }
}

/// Runs the buffer recursion with ON-rate `r_on` and tallies the tails.
pub fn run_buffer_sim(config: &SimConfig, r_on: f64) -> Result<SimReport> {
    config.validate()?;
    if !(r_on.is_finite() && r_on >= 0.0) {
        return Err(Error::param("r_on", format!("must be finite and >= 0, got {r_on}")));
    }
    let base = config.horizon / config.replicas;
    let extra = config.horizon % config.replicas;
    let parts: Vec<SimReport> = (0..config.replicas)
        .into_par_iter()
        .map(|k| {
            let blocks = base + usize::from(k < extra);
            let mut rng = substream(config.seed, k as u64);
            run_replica(config, r_on, blocks, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut parts = parts.into_iter();
    let mut report = parts.next().expect("at least one replica");
    for p in parts {
        report.merge(&p);
    }
    report.theta_fit = fit_qos_exponent(&report, None).ok();
    Ok(report)
}

/// Credits a finished busy period to every threshold its maximum reached.
fn close_cycle(cycles: &mut [i64], zero_level: usize, cycle_max: &mut usize) {
    if *cycle_max > zero_level {
        cycles[zero_level] += 1;
        cycles[*cycle_max] -= 1;
    }
    *cycle_max = zero_level;
}

struct Probe {
    start: usize,
    remaining: f64,
}

fn run_replica(config: &SimConfig, r_on: f64, blocks: usize, rng: &mut StreamRng) -> Result<SimReport> {
    let source = &config.source;
    let service = config.service.sampler()?;
    let thresholds = &config.thresholds;
    let mut buckets = vec![0u64; thresholds.len() + 1];
    let mut cycles = vec![0i64; thresholds.len() + 1];
    let zero_level = thresholds.partition_point(|&t| t <= 0.0);
    let mut cycle_max = zero_level;
    let mut delay_buckets = config
        .delay_thresholds
        .as_ref()
        .map(|d| vec![0u64; d.len() + 1]);
    let mut probes: Vec<Probe> = Vec::new();
    let mut delay_samples = 0u64;
    let mut on = source.start_state(rng)?;
    let (mut q, mut nonempty, mut arrived, mut served) = (0.0f64, 0u64, 0.0, 0.0);
    for k in 0..blocks {
        let a = source.block_arrivals(&mut on, r_on, rng);
        let s = service.draw(rng);
        arrived += a;
        served += s;
        q = (q + a - s).max(0.0);
        let level = thresholds.partition_point(|&t| t <= q);
        buckets[level] += 1;
        cycle_max = cycle_max.max(level);
        if q == 0.0 {
            close_cycle(&mut cycles, zero_level, &mut cycle_max);
        }
        if q > 0.0 {
            nonempty += 1;
        }
        if let (Some(db), Some(dt)) = (delay_buckets.as_mut(), config.delay_thresholds.as_ref()) {
            // service of this block drains older backlogs first
            probes.retain_mut(|p| {
                p.remaining -= s;
                if p.remaining <= 0.0 {
                    let d = (k - p.start) as f64;
                    db[dt.partition_point(|&t| t <= d)] += 1;
                    false
                } else {
                    true
                }
            });
            if k % PROBE_INTERVAL == 0 {
                delay_samples += 1;
                if q > 0.0 {
                    probes.push(Probe {
                        start: k,
                        remaining: q,
                    });
                } else {
                    db[dt.partition_point(|&t| t <= 0.0)] += 1;
                }
            }
        }
    }
    close_cycle(&mut cycles, zero_level, &mut cycle_max);
    // probes still waiting at the end have delay at least the elapsed time
    if let (Some(db), Some(dt)) = (delay_buckets.as_mut(), config.delay_thresholds.as_ref()) {
        for p in &probes {
            let d = (blocks - p.start) as f64;
            db[dt.partition_point(|&t| t <= d)] += 1;
        }
    }
    Ok(SimReport {
        r_on,
        overflow: Tally::from_buckets(thresholds, &buckets, blocks as u64).with_events(&cycles),
        nonempty,
        total_arrivals: arrived,
        total_service: served,
        delay: config
            .delay_thresholds
            .as_ref()
            .zip(delay_buckets)
            .map(|(dt, db)| Tally::from_buckets(dt, &db, delay_samples)),
        theta_fit: None,
    })
}

/// Least-squares line through `(q, ln Pr{Q ≥ q})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosFit {
    /// Negative slope.
    pub theta_sim: f64,
    pub std_error: f64,
    /// Estimate of `ln ς`.
    pub intercept: f64,
    /// Weighted RMS residual of `ln` probability.
    pub residual: f64,
    pub points: usize,
}

/// Minimum exceedance events for a threshold to enter the default fit range.
pub const MIN_FIT_COUNT: u64 = 200;

/// Fits the tail exponent on `range` (indices into the thresholds, half-open),
/// or by default on the positive thresholds with at least 200 exceedance
/// events. Events rather than blocks are counted because one busy period
/// above `q` spans many correlated blocks.
///
/// The line is fitted by least squares weighted with the event counts, since
/// the variance of `ln Pr{Q ≥ q}` grows roughly as 1/events.
pub fn fit_qos_exponent(report: &SimReport, range: Option<(usize, usize)>) -> Result<QosFit> {
    fit_tail(&report.overflow, range)
}

/// Same fit on any exceedance tally, e.g. the delay tail.
pub fn fit_tail(tally: &Tally, range: Option<(usize, usize)>) -> Result<QosFit> {
    let n = tally.thresholds.len();
    let (lo, hi) = match range {
        Some((lo, hi)) => {
            if lo >= hi || hi > n {
                return Err(Error::param("fit_range", format!("invalid range {lo}..{hi} of {n} thresholds")));
            }
            if let Some(j) = (lo..hi).find(|&j| tally.counts[j] == 0) {
                return Err(Error::Fit(format!(
                    "threshold {} has no exceedances; use smaller thresholds",
                    tally.thresholds[j]
                )));
            }
            (lo, hi)
        }
        None => {
            // Pr{X ≥ 0} = 1 carries no information
            let start = tally.thresholds.partition_point(|&t| t <= 0.0);
            let usable = tally.events[start..]
                .iter()
                .take_while(|&&c| c >= MIN_FIT_COUNT)
                .count();
            (start, start + usable)
        }
    };
    let points = hi - lo;
    if points < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 thresholds with >= {MIN_FIT_COUNT} exceedances, got {points}; use smaller thresholds or a longer horizon"
        )));
    }
    let probs = tally.probabilities();
    let xs = &tally.thresholds[lo..hi];
    let ys: Vec<f64> = probs[lo..hi].iter().map(|p| p.ln()).collect();
    let ws: Vec<f64> = tally.events[lo..hi].iter().map(|&e| e.max(1) as f64).collect();
    let sw: f64 = ws.iter().sum();
    let mx = xs.iter().zip(&ws).map(|(x, w)| w * x).sum::<f64>() / sw;
    let my = ys.iter().zip(&ws).map(|(y, w)| w * y).sum::<f64>() / sw;
    let sxx: f64 = xs.iter().zip(&ws).map(|(x, w)| w * (x - mx).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .zip(&ws)
        .map(|((x, y), w)| w * (x - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .zip(&ws)
        .map(|((x, y), w)| w * (y - intercept - slope * x).powi(2))
        .sum();
    Ok(QosFit {
        theta_sim: -slope,
        std_error: (sse / (points as f64 - 2.0) / sxx).sqrt(),
        intercept,
        residual: (sse / sw).sqrt(),
        points,
    })
}

/// `ς·e^{−θ a(θ, r_on) d}` for each `d`.
pub fn predict_delay_tail(
    source: &SourceModel,
    r_on: f64,
    theta: f64,
    d_grid: &[f64],
    sigma: f64,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::param("sigma", format!("must lie in [0, 1], got {sigma}")));
    }
    let rate = theta * source.effective_bandwidth(theta, r_on)?;
    Ok(d_grid.iter().map(|d| sigma * (-rate * d).exp()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::DiscreteChain;
    use approx::assert_relative_eq;

    fn fig3_service(i: MessageIndex) -> Service {
        Service::PerfectCsi {
            i,
            snr: 1.0,
            scenario: FadingScenario::independent(1.0).unwrap(),
            split: PowerSplit::uniform(0.7).unwrap(),
        }
    }

    fn disc() -> SourceModel {
        SourceModel::DiscreteMarkov(DiscreteChain::new(0.8, 0.8).unwrap())
    }

    fn config(source: SourceModel, service: Service, thresholds: Vec<f64>) -> SimConfig {
        SimConfig {
            source,
            service,
            horizon: MIN_HORIZON,
            seed: 1,
            thresholds,
            delay_thresholds: None,
            replicas: 4,
        }
    }

    #[test]
    fn zero_arrivals_keep_buffer_empty() {
        let c = config(disc(), fig3_service(MessageIndex::Common), vec![0.0, 0.5, 1.0]);
        let r = run_buffer_sim(&c, 0.0).unwrap();
        // Q ≡ 0 still satisfies Q ≥ 0
        assert_eq!(r.overflow.counts, vec![MIN_HORIZON as u64, 0, 0]);
        assert_eq!(r.nonempty, 0);
    }

    #[test]
    fn zero_service_overflows_everything() {
        let service = Service::PerfectCsi {
            i: MessageIndex::Confidential1,
            snr: 1.0,
            scenario: FadingScenario::independent(1.0).unwrap(),
            split: PowerSplit::uniform(0.0).unwrap(),
        };
        let c = config(SourceModel::ConstantRate, service, vec![1.0, 10.0, 100.0]);
        let r = run_buffer_sim(&c, 1.0).unwrap();
        for p in r.overflow_prob() {
            assert!(p > 0.99);
        }
    }

    #[test]
    fn reports_are_reproducible_and_monotone() {
        let service = fig3_service(MessageIndex::Confidential1);
        let r_on = calibrate_on_rate(&disc(), &service, 1.0).unwrap();
        let mut c = config(disc(), service, default_thresholds(1.0, MIN_HORIZON, 20).unwrap());
        c.delay_thresholds = Some(vec![0.0, 1.0, 2.0, 4.0, 8.0]);
        let a = run_buffer_sim(&c, r_on).unwrap();
        let b = run_buffer_sim(&c, r_on).unwrap();
        assert_eq!(a, b);
        let p = a.overflow_prob();
        assert!(p.windows(2).all(|w| w[1] <= w[0]));
        assert!(p.iter().all(|x| (0.0..=1.0).contains(x)));
        let d = a.delay_tail().unwrap();
        assert!(d.windows(2).all(|w| w[1] <= w[0]));
        assert!(a.mean_arrival_rate() <= a.mean_service_rate());
        assert!(a.theta_fit.is_some());
    }

    #[test]
    fn constant_rate_calibration_is_capacity() {
        let service = fig3_service(MessageIndex::Common);
        let r = calibrate_on_rate(&SourceModel::ConstantRate, &service, 1.0).unwrap();
        let a = Averager::new(
            &FadingScenario::independent(1.0).unwrap(),
            ExpectationMethod::GaussLaguerre { nodes_per_axis: 128 },
        )
        .unwrap();
        let c = effective_capacity_with(&a, MessageIndex::Common, 1.0, 1.0, PowerSplit::uniform(0.7).unwrap())
            .unwrap();
        assert_eq!(r, c.value);
    }

    #[test]
    fn exact_exponential_tally_fits_exactly() {
        let theta = 0.8;
        let sigma = 0.3;
        let thresholds: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let samples = 1u64 << 52;
        let counts: Vec<u64> = thresholds
            .iter()
            .map(|q| (sigma * (-theta * q).exp() * samples as f64).round() as u64)
            .collect();
        let t = Tally {
            thresholds,
            events: counts.clone(),
            counts,
            samples,
        };
        let f = fit_tail(&t, Some((0, 10))).unwrap();
        assert_relative_eq!(f.theta_sim, theta, max_relative = 1e-9);
        assert_relative_eq!(f.intercept, sigma.ln(), max_relative = 1e-9);
    }

    #[test]
    fn fit_reports_empty_thresholds() {
        let t = Tally {
            thresholds: vec![0.0, 1.0, 2.0, 3.0, 4.0],
            counts: vec![100, 50, 20, 0, 0],
            events: vec![100, 50, 20, 0, 0],
            samples: 1000,
        };
        assert!(matches!(fit_tail(&t, Some((0, 5))), Err(Error::Fit(_))));
        assert!(matches!(fit_tail(&t, None), Err(Error::Fit(_))));
    }

    #[test]
    fn delay_prediction() {
        let p = predict_delay_tail(&SourceModel::ConstantRate, 2.0, 1.5, &[0.0, 1.0], 0.4).unwrap();
        assert_eq!(p[0], 0.4);
        assert_relative_eq!(p[1], 0.4 * (-3.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = config(disc(), fig3_service(MessageIndex::Common), vec![1.0, 0.5]);
        assert!(run_buffer_sim(&c, 1.0).is_err());
        c.thresholds = vec![0.5, 1.0];
        c.horizon = 10;
        assert!(run_buffer_sim(&c, 1.0).is_err());
    }
}
