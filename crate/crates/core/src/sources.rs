//! Two-state Markovian traffic models and their effective bandwidths.
//!
//! All models are ON/OFF: no arrivals in OFF, and in ON either a constant
//! `r` bits per block (discrete Markov, Markov fluid) or Poisson arrivals of
//! intensity `r` per block (the two MMPP variants). Time is measured in
//! fading blocks; the continuous-time chains have rates per block.
//!
//! Effective bandwidths are evaluated in the log domain so that `e^{θr}`
//! never has to be formed explicitly.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::rng::{substream, StreamRng};

/// Discrete-time ON/OFF chain. `p11` is the probability of staying OFF,
/// `p22` of staying ON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteChain {
    p11: f64,
    p22: f64,
}

impl DiscreteChain {
    pub fn new(p11: f64, p22: f64) -> Result<Self> {
        for (name, p) in [("p11", p11), ("p22", p22)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(name, format!("must lie in [0, 1], got {p}")));
            }
        }
        Ok(Self { p11, p22 })
    }

    /// The `p11 = 1 − s`, `p22 = s` family, whose ON probability is `s`.
    pub fn with_on_probability(s: f64) -> Result<Self> {
        Self::new(1.0 - s, s)
    }

    pub fn p11(&self) -> f64 {
        self.p11
    }

    pub fn p22(&self) -> f64 {
        self.p22
    }

    pub fn on_probability(&self) -> Result<f64> {
        if self.p11 == 1.0 {
            return Err(Error::param(
                "p11",
                "OFF state is absorbing (p11 = 1); ON-state quantities are undefined",
            ));
        }
        Ok((1.0 - self.p11) / (2.0 - self.p11 - self.p22))
    }

    /// Burstiness parameter η of the wideband slope.
    pub fn eta(&self) -> Result<f64> {
        burstiness_eta(self.p11, self.p22)
    }

    /// `ln` of the spectral radius of `J·diag(1, e^u)`.
    fn log_spectral_radius(&self, u: f64) -> f64 {
        let (p11, p22) = (self.p11, self.p22);
        let cross = 4.0 * (1.0 - p11) * (1.0 - p22);
        if u <= 1.0 {
            // λ = 1 + μ, e^u = 1 + v: μ² + bμ − (1 − p11)v = 0
            let v = u.exp_m1();
            let b = 2.0 - p11 - p22 - p22 * v;
            let c = 4.0 * (1.0 - p11) * v;
            let root = (b * b + c).max(0.0).sqrt();
            let mu = if b > 0.0 {
                c / (2.0 * (b + root))
            } else {
                0.5 * (root - b)
            };
            mu.ln_1p()
        } else {
            // divide through by e^u
            let e = (-u).exp();
            let disc = (p11 * e - p22).powi(2) + cross * e;
            u + (0.5 * (p11 * e + p22 + disc.sqrt())).ln()
        }
    }
}

/// Continuous-time ON/OFF chain with generator `[[-α, α], [β, -β]]`:
/// `alpha` is the OFF→ON rate, `beta` the ON→OFF rate (per block).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousChain {
    alpha: f64,
    beta: f64,
}

impl ContinuousChain {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        ensure_finite("alpha", alpha)?;
        ensure_finite("beta", beta)?;
        if alpha <= 0.0 {
            return Err(Error::param("alpha", format!("must be > 0, got {alpha}")));
        }
        if beta < 0.0 {
            return Err(Error::param("beta", format!("must be >= 0, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn on_probability(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Burstiness parameter ζ of the wideband slope.
    pub fn zeta(&self) -> f64 {
        2.0 * self.beta / (self.alpha * (self.alpha + self.beta))
    }

    /// Transition matrix `exp(G·Δ)` as `[[p_off_off, p_off_on], [p_on_off, p_on_on]]`.
    pub fn transition_matrix(&self, delta: f64) -> [[f64; 2]; 2] {
        let total = self.alpha + self.beta;
        let decay = -(-total * delta).exp_m1();
        let p_off_on = self.alpha / total * decay;
        let p_on_off = self.beta / total * decay;
        [[1.0 - p_off_on, p_off_on], [p_on_off, 1.0 - p_on_off]]
    }

    /// `θ·a` of the fluid source at `x = θ·r`: the largest eigenvalue of `G + diag(0, x)`.
    fn log_growth(&self, x: f64) -> f64 {
        let d = x - (self.alpha + self.beta);
        let disc = (d * d + 4.0 * self.alpha * x).sqrt();
        if d >= 0.0 {
            0.5 * (d + disc)
        } else {
            2.0 * self.alpha * x / (disc - d)
        }
    }

    /// Simulates one block starting in `on`; returns the time spent ON and
    /// updates `on` to the state at the end of the block.
    fn simulate_block<R: Rng>(&self, on: &mut bool, rng: &mut R) -> f64 {
        let mut t = 0.0;
        let mut on_time = 0.0;
        loop {
            let rate = if *on { self.beta } else { self.alpha };
            let sojourn = if rate > 0.0 {
                -(1.0 - rng.random::<f64>()).ln() / rate
            } else {
                f64::INFINITY
            };
            let end = (t + sojourn).min(1.0);
            if *on {
                on_time += end - t;
            }
            if t + sojourn >= 1.0 {
                return on_time;
            }
            t += sojourn;
            *on = !*on;
        }
    }
}

/// Coarse source family, used where only the family (not its parameters) matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceFamily {
    Constant,
    DiscreteMarkov,
    MarkovFluid,
    DiscreteMmpp,
    ContinuousMmpp,
}

impl SourceFamily {
    pub fn is_mmpp(self) -> bool {
        matches!(self, SourceFamily::DiscreteMmpp | SourceFamily::ContinuousMmpp)
    }
}

/// A traffic source. The ON-state rate `r` is supplied per call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SourceModel {
    ConstantRate,
    DiscreteMarkov(DiscreteChain),
    MarkovFluid(ContinuousChain),
    DiscreteMmpp(DiscreteChain),
    ContinuousMmpp(ContinuousChain),
}

impl SourceModel {
    pub fn family(&self) -> SourceFamily {
        match self {
            SourceModel::ConstantRate => SourceFamily::Constant,
            SourceModel::DiscreteMarkov(_) => SourceFamily::DiscreteMarkov,
            SourceModel::MarkovFluid(_) => SourceFamily::MarkovFluid,
            SourceModel::DiscreteMmpp(_) => SourceFamily::DiscreteMmpp,
            SourceModel::ContinuousMmpp(_) => SourceFamily::ContinuousMmpp,
        }
    }

    pub fn on_probability(&self) -> Result<f64> {
        match self {
            SourceModel::ConstantRate => Ok(1.0),
            SourceModel::DiscreteMarkov(c) | SourceModel::DiscreteMmpp(c) => c.on_probability(),
            SourceModel::MarkovFluid(c) | SourceModel::ContinuousMmpp(c) => Ok(c.on_probability()),
        }
    }

    /// Long-run arrival rate `P_on · r`.
    pub fn mean_rate(&self, r: f64) -> Result<f64> {
        check_rate(r)?;
        Ok(self.on_probability()? * r)
    }

    /// η for discrete chains, ζ for continuous chains, 0 for constant rate.
    pub fn burstiness(&self) -> Result<f64> {
        match self {
            SourceModel::ConstantRate => Ok(0.0),
            SourceModel::DiscreteMarkov(c) | SourceModel::DiscreteMmpp(c) => c.eta(),
            SourceModel::MarkovFluid(c) | SourceModel::ContinuousMmpp(c) => Ok(c.zeta()),
        }
    }

    /// Effective bandwidth `a(θ, r)` in bits per block.
    pub fn effective_bandwidth(&self, theta: f64, r: f64) -> Result<f64> {
        check_theta(theta)?;
        check_rate(r)?;
        self.on_probability()?;
        let value = match self {
            SourceModel::ConstantRate => return Ok(r),
            SourceModel::DiscreteMarkov(c) => c.log_spectral_radius(theta * r) / theta,
            SourceModel::DiscreteMmpp(c) => {
                let u = r * theta.exp_m1();
                check_exponent(u)?;
                c.log_spectral_radius(u) / theta
            }
            SourceModel::MarkovFluid(c) => c.log_growth(theta * r) / theta,
            SourceModel::ContinuousMmpp(c) => {
                let x = r * theta.exp_m1();
                check_exponent(x)?;
                c.log_growth(x) / theta
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Domain(format!(
                "effective bandwidth is not finite at theta = {theta}, r = {r} (exponent {})",
                theta * r
            )))
        }
    }

    /// Draws the initial state from the stationary distribution.
    fn initial_state<R: Rng>(&self, rng: &mut R) -> Result<bool> {
        let p_on = self.on_probability()?;
        Ok(rng.random::<f64>() < p_on)
    }

    /// Arrivals of one block given the state at its start; advances the state.
    pub(crate) fn block_arrivals<R: Rng>(&self, on: &mut bool, r: f64, rng: &mut R) -> f64 {
        match self {
            SourceModel::ConstantRate => r,
            SourceModel::DiscreteMarkov(c) => {
                let a = if *on { r } else { 0.0 };
                discrete_step(c, on, rng);
                a
            }
            SourceModel::DiscreteMmpp(c) => {
                let a = if *on { poisson(r, rng) } else { 0.0 };
                discrete_step(c, on, rng);
                a
            }
            SourceModel::MarkovFluid(c) => r * c.simulate_block(on, rng),
            SourceModel::ContinuousMmpp(c) => {
                let on_time = c.simulate_block(on, rng);
                poisson(r * on_time, rng)
            }
        }
    }

    pub(crate) fn start_state<R: Rng>(&self, rng: &mut R) -> Result<bool> {
        self.initial_state(rng)
    }
}

fn discrete_step<R: Rng>(chain: &DiscreteChain, on: &mut bool, rng: &mut R) {
    let stay = if *on { chain.p22 } else { chain.p11 };
    if rng.random::<f64>() >= stay {
        *on = !*on;
    }
}

fn poisson<R: Rng>(mean: f64, rng: &mut R) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    Poisson::new(mean).map(|d| d.sample(rng)).unwrap_or(0.0)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 {
        Ok(())
    } else {
        Err(Error::param("theta", format!("QoS exponent must be finite and > 0, got {theta}")))
    }
}

fn check_rate(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::param("r", format!("ON-state rate must be finite and >= 0, got {r}")))
    }
}

fn check_exponent(u: f64) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("MGF exponent overflowed: {u}")))
    }
}

pub(crate) fn validate_theta(theta: f64) -> Result<()> {
    check_theta(theta)
}

/// η = (1−p22)(p11+p22) / [(1−p11)(2−p11−p22)].
pub fn burstiness_eta(p11: f64, p22: f64) -> Result<f64> {
    DiscreteChain::new(p11, p22)?;
    if p11 >= 1.0 {
        return Err(Error::param("p11", "η is undefined for p11 = 1"));
    }
    Ok((1.0 - p22) * (p11 + p22) / ((1.0 - p11) * (2.0 - p11 - p22)))
}

/// ζ = 2β / [α(α+β)].
pub fn burstiness_zeta(alpha: f64, beta: f64) -> Result<f64> {
    Ok(ContinuousChain::new(alpha, beta)?.zeta())
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Independent replicas the oracle's paths are split into.
const ORACLE_REPLICAS: usize = 16;

/// Monte Carlo estimate of the effective bandwidth from its log-MGF definition.
///
/// The source is simulated block by block (continuous-time chains exactly,
/// with the ON occupation time of each block). `E{e^{θA(t)}}` is estimated
/// with an interacting particle system: each path is weighted by
/// `e^{θ a(k)}` at every block and the population is resampled, so the
/// product of the mean weights is an unbiased estimate of the MGF that
/// stays accurate where plain averaging of `e^{θA(t)}` would be dominated
/// by a handful of paths. The first tenth of the horizon is discarded as
/// transient and the growth rate of the remainder is reported.
///
/// `paths` are split into 16 independent replicas on deterministic
/// substreams of `seed`; the standard error is taken across replicas.
pub fn effective_bandwidth_mc_oracle(
    model: &SourceModel,
    theta: f64,
    r: f64,
    horizon: usize,
    paths: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_theta(theta)?;
    check_rate(r)?;
    if horizon < 1000 {
        return Err(Error::param("horizon", format!("must be >= 1000 blocks, got {horizon}")));
    }
    if paths < 10_000 {
        return Err(Error::param("paths", format!("must be >= 10^4, got {paths}")));
    }
    model.on_probability()?;
    if matches!(model, SourceModel::ConstantRate) {
        return Ok(McEstimate {
            estimate: r,
            std_error: 0.0,
        });
    }
    let particles = paths / ORACLE_REPLICAS;
    let burn_in = horizon / 10;
    let replicas: Vec<f64> = (0..ORACLE_REPLICAS as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k);
            particle_log_growth(model, theta, r, horizon, burn_in, particles, &mut rng)
        })
        .collect::<Result<_>>()?;
    let n = replicas.len() as f64;
    let mean = replicas.iter().sum::<f64>() / n;
    let var = replicas.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        estimate: mean / theta,
        std_error: (var / n).sqrt() / theta,
    })
}

/// Per-block growth rate of `ln E{e^{θA(t)}}` after `burn_in` blocks.
fn particle_log_growth(
    model: &SourceModel,
    theta: f64,
    r: f64,
    horizon: usize,
    burn_in: usize,
    particles: usize,
    rng: &mut StreamRng,
) -> Result<f64> {
    let mut states = (0..particles)
        .map(|_| model.start_state(rng))
        .collect::<Result<Vec<_>>>()?;
    let mut next = vec![false; particles];
    let mut weights = vec![0.0; particles];
    let ln_n = (particles as f64).ln();
    let mut acc = 0.0;
    for k in 0..horizon {
        for (state, w) in states.iter_mut().zip(weights.iter_mut()) {
            *w = theta * model.block_arrivals(state, r, rng);
        }
        let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for w in weights.iter_mut() {
            *w = (*w - max).exp();
            sum += *w;
        }
        if k >= burn_in {
            acc += max + sum.ln() - ln_n;
        }
        // systematic resampling
        let step = sum / particles as f64;
        let mut u = rng.random::<f64>() * step;
        let mut j = 0;
        let mut cum = weights[0];
        for slot in next.iter_mut() {
            while u > cum && j + 1 < particles {
                j += 1;
                cum += weights[j];
            }
            *slot = states[j];
            u += step;
        }
        std::mem::swap(&mut states, &mut next);
    }
    Ok(acc / (horizon - burn_in) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn disc(p11: f64, p22: f64) -> SourceModel {
        SourceModel::DiscreteMarkov(DiscreteChain::new(p11, p22).unwrap())
    }

    fn fluid(a: f64, b: f64) -> SourceModel {
        SourceModel::MarkovFluid(ContinuousChain::new(a, b).unwrap())
    }

    fn all_models() -> Vec<SourceModel> {
        let dc = DiscreteChain::new(0.8, 0.7).unwrap();
        let cc = ContinuousChain::new(2.0, 3.0).unwrap();
        vec![
            SourceModel::ConstantRate,
            SourceModel::DiscreteMarkov(dc),
            SourceModel::MarkovFluid(cc),
            SourceModel::DiscreteMmpp(dc),
            SourceModel::ContinuousMmpp(cc),
        ]
    }

    #[test]
    fn always_on_chains_are_constant() {
        assert_relative_eq!(disc(0.0, 1.0).effective_bandwidth(1.0, 3.0).unwrap(), 3.0, max_relative = 1e-14);
        assert_relative_eq!(fluid(2.0, 0.0).effective_bandwidth(1.0, 5.0).unwrap(), 5.0, max_relative = 1e-14);
    }

    #[test]
    fn discrete_matches_textbook_quadratic() {
        // direct evaluation of the closed form in a range where nothing overflows
        let (p11, p22, theta, r) = (0.8_f64, 0.6_f64, 0.7_f64, 2.0_f64);
        let y = (theta * r).exp();
        let t = p11 + p22 * y;
        let direct = ((t + (t * t - 4.0 * (p11 + p22 - 1.0) * y).sqrt()) / 2.0).ln() / theta;
        assert_relative_eq!(disc(p11, p22).effective_bandwidth(theta, r).unwrap(), direct, max_relative = 1e-13);
    }

    #[test]
    fn large_exponents_stay_finite() {
        let a = disc(0.8, 0.8).effective_bandwidth(1.0, 800.0).unwrap();
        assert!(a.is_finite() && a <= 800.0 && a > 400.0);
        let f = fluid(1.0, 1.0).effective_bandwidth(2.0, 1e6).unwrap();
        assert!(f.is_finite() && f <= 1e6);
        let err = SourceModel::DiscreteMmpp(DiscreteChain::new(0.5, 0.5).unwrap())
            .effective_bandwidth(800.0, 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn small_theta_gives_mean_rate() {
        for m in all_models() {
            let a = m.effective_bandwidth(1e-6, 1.0).unwrap();
            let mean = m.mean_rate(1.0).unwrap();
            assert_relative_eq!(a, mean, max_relative = 1e-4);
        }
    }

    #[test]
    fn on_probability_examples() {
        let s = 0.4;
        let c = DiscreteChain::with_on_probability(s).unwrap();
        assert_relative_eq!(c.on_probability().unwrap(), 0.4, max_relative = 1e-15);
        assert_relative_eq!(fluid(9.0, 1.0).on_probability().unwrap(), 0.9);
        assert_eq!(SourceModel::ConstantRate.on_probability().unwrap(), 1.0);
        assert!(disc(1.0, 1.0).on_probability().is_err());
        assert!(disc(1.0, 0.5).on_probability().is_err());
        // i.i.d. ON/OFF is allowed
        assert_relative_eq!(disc(0.3, 0.7).on_probability().unwrap(), 0.7, max_relative = 1e-15);
    }

    #[test]
    fn mean_rate_examples() {
        assert_relative_eq!(disc(0.8, 0.8).mean_rate(2.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(fluid(1.0, 9.0).mean_rate(10.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(SourceModel::ConstantRate.mean_rate(0.7).unwrap(), 0.7);
        assert!(SourceModel::ConstantRate.mean_rate(-1.0).is_err());
    }

    #[test]
    fn eta_and_zeta_examples() {
        assert_eq!(burstiness_eta(0.0, 1.0).unwrap(), 0.0);
        assert_relative_eq!(burstiness_eta(0.8, 0.8).unwrap(), 4.0, max_relative = 1e-12);
        assert_relative_eq!(burstiness_eta(0.5, 0.5).unwrap(), 1.0, max_relative = 1e-15);
        assert!(burstiness_eta(1.0, 0.5).is_err());
        assert_eq!(burstiness_zeta(1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(burstiness_zeta(9.0, 1.0).unwrap(), 2.0 / 90.0, max_relative = 1e-15);
        assert_relative_eq!(burstiness_zeta(1.0, 9.0).unwrap(), 1.8, max_relative = 1e-15);
        assert!(burstiness_zeta(0.0, 1.0).is_err());
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(DiscreteChain::new(1.2, 0.5).is_err());
        assert!(ContinuousChain::new(1.0, -0.1).is_err());
        let m = disc(0.5, 0.5);
        assert!(m.effective_bandwidth(0.0, 1.0).is_err());
        assert!(m.effective_bandwidth(1.0, -1.0).is_err());
        assert!(disc(1.0, 0.3).effective_bandwidth(1.0, 1.0).is_err());
    }

    #[test]
    fn transition_matrix_rows_sum_to_one() {
        let c = ContinuousChain::new(2.0, 3.0).unwrap();
        let m = c.transition_matrix(1.0);
        for row in m {
            assert_relative_eq!(row[0] + row[1], 1.0, max_relative = 1e-15);
        }
        // long blocks forget the initial state
        let m = c.transition_matrix(100.0);
        assert_relative_eq!(m[0][1], 0.4, max_relative = 1e-12);
        assert_relative_eq!(m[1][1], 0.4, max_relative = 1e-12);
    }

    #[test]
    fn block_simulation_matches_transition_matrix() {
        let c = ContinuousChain::new(0.7, 1.3).unwrap();
        let m = c.transition_matrix(1.0);
        let mut rng = substream(3, 0);
        let n = 200_000;
        let mut ends_on = 0usize;
        let mut on_time = 0.0;
        for _ in 0..n {
            let mut on = false;
            on_time += c.simulate_block(&mut on, &mut rng);
            ends_on += on as usize;
        }
        let p = ends_on as f64 / n as f64;
        let se = (m[0][1] * (1.0 - m[0][1]) / n as f64).sqrt();
        assert!((p - m[0][1]).abs() < 4.0 * se, "{p} vs {}", m[0][1]);
        // E[time ON in [0,1] | start OFF] = P_on (1 - (1 - e^{-s})/s), s = α+β
        let s = 2.0;
        let expected = 0.35 * (1.0 - (1.0 - (-s as f64).exp()) / s);
        assert!((on_time / n as f64 - expected).abs() < 3e-3);
    }

    #[test]
    fn oracle_constant_is_exact() {
        let e = effective_bandwidth_mc_oracle(&SourceModel::ConstantRate, 1.0, 2.0, 1000, 10_000, 1).unwrap();
        assert_eq!(e.estimate, 2.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn oracle_preconditions() {
        let m = disc(0.8, 0.8);
        assert!(effective_bandwidth_mc_oracle(&m, 1.0, 1.0, 999, 10_000, 1).is_err());
        assert!(effective_bandwidth_mc_oracle(&m, 1.0, 1.0, 1000, 9_999, 1).is_err());
    }

    #[test]
    fn oracle_matches_discrete_closed_form() {
        let m = disc(0.8, 0.8);
        let est = effective_bandwidth_mc_oracle(&m, 1.0, 1.0, 2000, 100_000, 11).unwrap();
        let exact = m.effective_bandwidth(1.0, 1.0).unwrap();
        assert!(
            (est.estimate - exact).abs() <= 3.0 * est.std_error,
            "oracle {} ± {} vs closed form {exact}",
            est.estimate,
            est.std_error
        );
        // reproducible
        let again = effective_bandwidth_mc_oracle(&m, 1.0, 1.0, 2000, 100_000, 11).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn oracle_matches_discrete_mmpp_closed_form() {
        let m = SourceModel::DiscreteMmpp(DiscreteChain::new(0.8, 0.8).unwrap());
        let est = effective_bandwidth_mc_oracle(&m, 0.5, 1.0, 2000, 50_000, 5).unwrap();
        let exact = m.effective_bandwidth(0.5, 1.0).unwrap();
        assert!(
            (est.estimate - exact).abs() <= 3.0 * est.std_error,
            "oracle {} ± {} vs closed form {exact}",
            est.estimate,
            est.std_error
        );
    }
}
