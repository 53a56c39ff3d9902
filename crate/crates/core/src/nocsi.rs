//! Secure transmission at a fixed rate without channel knowledge at the
//! transmitter.
//!
//! The transmitter sends confidential data to receiver 1 at a fixed rate `λ`
//! with full power. A block is delivered securely only when receiver 1 can
//! decode and the eavesdropping receiver 2 cannot, i.e. when
//! `log2(1 + snr·z1) − log2(1 + snr·z2) ≥ λ`; otherwise nothing is served.
//! The service is therefore an ON/OFF process with ON probability `P{Γ}` and
//! `E{e^{−θR}} = 1 − P{Γ}(1 − e^{−θλ})`. Fading powers are independent
//! exponentials with means 1 and γ.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{sample_fading, FadingScenario};
use crate::energy::{fit_low_snr_metrics, LowSnrMetrics, MetricsMethod};
use crate::error::{Error, Result};
use crate::expectation::Estimate;
use crate::qos::avg_rate_for_capacity;
use crate::rng::{chunk_sizes, substream};
use crate::sources::{validate_theta, SourceModel};

use rayon::prelude::*;

/// How the fixed transmission rate is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedRatePolicy {
    /// Explicit rate in bits per block.
    Fixed { lambda: f64 },
    /// `λ(snr) = a·snr/ln 2`, the first-order low-SNR rule. The second-order
    /// coefficient is taken as zero.
    LowSnr { a: f64 },
}

impl FixedRatePolicy {
    pub fn lambda(&self, snr: f64) -> Result<f64> {
        let lambda = match *self {
            FixedRatePolicy::Fixed { lambda } => lambda,
            FixedRatePolicy::LowSnr { a } => {
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::param("a", format!("must be finite and > 0, got {a}")));
                }
                a * snr / LN_2
            }
        };
        if lambda.is_finite() && lambda > 0.0 {
            Ok(lambda)
        } else {
            Err(Error::param("lambda", format!("fixed rate must be > 0, got {lambda} at snr = {snr}")))
        }
    }

    /// `2^λ − 1`, accurate for small `λ`.
    fn excess(&self, snr: f64) -> Result<f64> {
        Ok(match *self {
            FixedRatePolicy::LowSnr { a } => {
                self.lambda(snr)?;
                (a * snr).exp_m1()
            }
            FixedRatePolicy::Fixed { .. } => (self.lambda(snr)? * LN_2).exp_m1(),
        })
    }
}

/// Independent exponential fading with `E z1 = 1`, `E z2 = γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoCsiScenario {
    gamma: f64,
}

impl NoCsiScenario {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::param("gamma", format!("must be finite and > 0, got {gamma}")))
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn fading(&self) -> FadingScenario {
        FadingScenario::independent(self.gamma).expect("gamma validated")
    }
}

fn check_snr(snr: f64) -> Result<()> {
    if snr.is_finite() && snr > 0.0 {
        Ok(())
    } else {
        Err(Error::param("snr", format!("must be finite and > 0, got {snr}")))
    }
}

/// `P{z1 > 2^λ z2 + (2^λ − 1)/snr} = e^{−(2^λ−1)/snr} / (γ 2^λ + 1)`.
pub fn secure_on_probability(snr: f64, policy: FixedRatePolicy, scenario: &NoCsiScenario) -> Result<f64> {
    check_snr(snr)?;
    let excess = policy.excess(snr)?;
    Ok((-excess / snr).exp() / (scenario.gamma * (1.0 + excess) + 1.0))
}

/// Monte Carlo estimate of the secure-ON probability under any fading law.
pub fn secure_on_probability_mc(
    snr: f64,
    lambda: f64,
    fading: &FadingScenario,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    check_snr(snr)?;
    let two_l = FixedRatePolicy::Fixed { lambda }.excess(snr)? + 1.0;
    if samples < 2 {
        return Err(Error::param("samples", format!("need at least 2, got {samples}")));
    }
    let hits: u64 = chunk_sizes(samples, 1 << 16)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, n)| {
            let mut rng = substream(seed, k);
            (0..n)
                .filter(|_| {
                    let z = sample_fading(fading, &mut rng);
                    z.z1 > two_l * z.z2 + (two_l - 1.0) / snr
                })
                .count() as u64
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(Estimate {
        mean: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

/// `1 − g` of the ON/OFF secure service: `P{Γ}(1 − e^{−θλ})`.
pub fn nocsi_g_complement(
    snr: f64,
    theta: f64,
    policy: FixedRatePolicy,
    scenario: &NoCsiScenario,
) -> Result<f64> {
    validate_theta(theta)?;
    let p = secure_on_probability(snr, policy, scenario)?;
    Ok(p * -(-theta * policy.lambda(snr)?).exp_m1())
}

/// `E{e^{−θR}} = 1 − P{Γ}(1 − e^{−θλ})`.
pub fn nocsi_g(snr: f64, theta: f64, policy: FixedRatePolicy, scenario: &NoCsiScenario) -> Result<f64> {
    Ok(1.0 - nocsi_g_complement(snr, theta, policy, scenario)?)
}

/// `C_E = −ln(1 − P{Γ}(1 − e^{−θλ}))/θ`, bits per block.
pub fn effective_capacity_nocsi(
    snr: f64,
    theta: f64,
    policy: FixedRatePolicy,
    scenario: &NoCsiScenario,
) -> Result<f64> {
    let c = nocsi_g_complement(snr, theta, policy, scenario)?;
    Ok(-(-c).ln_1p() / theta)
}

fn check_family(source: &SourceModel) -> Result<()> {
    if source.family().is_mmpp() {
        Err(Error::Unsupported(format!(
            "{:?} sources are not covered by the fixed-rate analysis",
            source.family()
        )))
    } else {
        Ok(())
    }
}

/// Maximum average arrival rate under fixed-rate secure service.
pub fn nocsi_throughput(
    source: &SourceModel,
    snr: f64,
    theta: f64,
    policy: FixedRatePolicy,
    scenario: &NoCsiScenario,
) -> Result<f64> {
    check_family(source)?;
    let c = effective_capacity_nocsi(snr, theta, policy, scenario)?;
    avg_rate_for_capacity(source, theta, c)
}

/// Minimum energy per bit and wideband slope with `λ = a·snr/ln 2`.
///
/// `Eb/N0_min = (γ+1) ln2 · e^a / a`, smallest at `a = 1`, and
/// `S0 = 1 / [θ(b−1)/(2ln2) + θ(γ+1)e^a/(2ln2) + e^a((γ+1)a + 2γ)/2]`
/// with `b` the source burstiness (η, ζ, or 0 for constant rate).
pub fn nocsi_low_snr_metrics_with_coefficient(
    source: &SourceModel,
    theta: f64,
    gamma: f64,
    a: f64,
) -> Result<LowSnrMetrics> {
    check_family(source)?;
    validate_theta(theta)?;
    NoCsiScenario::new(gamma)?;
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::param("a", format!("must be finite and > 0, got {a}")));
    }
    let b = source.burstiness()?;
    let ea = a.exp();
    let denom = theta * (b - 1.0) / (2.0 * LN_2)
        + theta * (gamma + 1.0) * ea / (2.0 * LN_2)
        + ea * ((gamma + 1.0) * a + 2.0 * gamma) / 2.0;
    Ok(LowSnrMetrics {
        ebn0_min: (gamma + 1.0) * LN_2 * ea / a,
        slope_s0: 1.0 / denom,
        method: MetricsMethod::ClosedForm,
    })
}

/// Low-SNR metrics at the optimal coefficient `a = 1`.
pub fn nocsi_low_snr_metrics(source: &SourceModel, theta: f64, gamma: f64) -> Result<LowSnrMetrics> {
    nocsi_low_snr_metrics_with_coefficient(source, theta, gamma, 1.0)
}

/// `ġ(0) = −e^{−a} θ a / ((γ+1) ln 2)`.
pub fn nocsi_g_slope_at_zero(theta: f64, gamma: f64, a: f64) -> f64 {
    -(-a).exp() * theta * a / ((gamma + 1.0) * LN_2)
}

/// Fits the low-SNR metrics to the fixed-rate throughput curve (full power,
/// numerator weight 1).
pub fn nocsi_fitted_metrics(
    source: &SourceModel,
    theta: f64,
    policy: FixedRatePolicy,
    scenario: &NoCsiScenario,
    stencil: &[f64],
) -> Result<LowSnrMetrics> {
    let curve = stencil
        .iter()
        .map(|&snr| Ok((snr, nocsi_throughput(source, snr, theta, policy, scenario)?)))
        .collect::<Result<Vec<_>>>()?;
    fit_low_snr_metrics(&curve, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{to_db, FIT_STENCIL};
    use crate::qos::solve_on_rate_bisection;
    use crate::sources::{ContinuousChain, DiscreteChain};
    use approx::assert_relative_eq;

    fn disc(p11: f64, p22: f64) -> SourceModel {
        SourceModel::DiscreteMarkov(DiscreteChain::new(p11, p22).unwrap())
    }

    fn sc(gamma: f64) -> NoCsiScenario {
        NoCsiScenario::new(gamma).unwrap()
    }

    #[test]
    fn on_probability_small_rate_is_half() {
        let p = secure_on_probability(3.0, FixedRatePolicy::Fixed { lambda: 1e-12 }, &sc(1.0)).unwrap();
        assert_relative_eq!(p, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn on_probability_matches_unit_mean_form() {
        let (snr, lambda) = (2.5, 0.7);
        let p = secure_on_probability(snr, FixedRatePolicy::Fixed { lambda }, &sc(1.0)).unwrap();
        let t = 2f64.powf(lambda);
        assert_relative_eq!(p, (-(t - 1.0) / snr).exp() / (t + 1.0), max_relative = 1e-14);
    }

    #[test]
    fn on_probability_matches_monte_carlo() {
        let s = sc(2.0);
        let p = secure_on_probability(1.0, FixedRatePolicy::Fixed { lambda: 1.0 }, &s).unwrap();
        assert_relative_eq!(p, (-1f64).exp() / 5.0, max_relative = 1e-14);
        let mc = secure_on_probability_mc(1.0, 1.0, &s.fading(), 10_000_000, 17).unwrap();
        assert!((mc.mean - p).abs() <= 3.0 * mc.std_error, "{} ± {} vs {p}", mc.mean, mc.std_error);
    }

    #[test]
    fn capacity_limits() {
        let s = sc(1.0);
        let tiny = effective_capacity_nocsi(1.0, 1.0, FixedRatePolicy::Fixed { lambda: 1e-12 }, &s).unwrap();
        assert!(tiny < 1e-12);
        // near-certain ON: tiny eavesdropper, huge snr
        let lambda = 0.3;
        let s = sc(1e-9);
        let c = effective_capacity_nocsi(1e9, 1e-6, FixedRatePolicy::Fixed { lambda }, &s).unwrap();
        assert_relative_eq!(c, lambda, max_relative = 1e-5);
        let c = effective_capacity_nocsi(
            0.05,
            1.0,
            FixedRatePolicy::LowSnr { a: 1.0 },
            &sc(1.0),
        )
        .unwrap();
        assert!(c > 0.0 && c < 0.05 / LN_2);
    }

    #[test]
    fn throughput_cases() {
        let s = sc(1.0);
        let policy = FixedRatePolicy::Fixed { lambda: 0.8 };
        let c = effective_capacity_nocsi(2.0, 1.0, policy, &s).unwrap();
        assert_eq!(nocsi_throughput(&SourceModel::ConstantRate, 2.0, 1.0, policy, &s).unwrap(), c);
        let src = disc(0.8, 0.8);
        let r = solve_on_rate_bisection(&src, c, 1.0).unwrap();
        let avg = nocsi_throughput(&src, 2.0, 1.0, policy, &s).unwrap();
        assert_relative_eq!(avg, 0.5 * r, max_relative = 1e-9);
        let outage = nocsi_throughput(&src, 1e-3, 1.0, FixedRatePolicy::Fixed { lambda: 20.0 }, &s).unwrap();
        assert!(outage < 1e-100);
        let mmpp = SourceModel::DiscreteMmpp(DiscreteChain::new(0.5, 0.5).unwrap());
        assert!(matches!(
            nocsi_throughput(&mmpp, 1.0, 1.0, policy, &s),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn min_energy_per_bit_values() {
        let m = nocsi_low_snr_metrics(&disc(0.8, 0.8), 1.0, 1.0).unwrap();
        assert_relative_eq!(m.ebn0_min, 2.0 * std::f64::consts::E * LN_2, max_relative = 1e-14);
        assert!((m.ebn0_min_db() - 5.76).abs() < 0.005);
        for &gamma in &[0.5, 1.0, 3.0] {
            let m = nocsi_low_snr_metrics(&SourceModel::ConstantRate, 1.0, gamma).unwrap();
            let excess = m.ebn0_min - LN_2;
            assert_relative_eq!(excess, (std::f64::consts::E * (gamma + 1.0) - 1.0) * LN_2, max_relative = 1e-14);
        }
    }

    #[test]
    fn min_energy_ignores_theta_and_source() {
        let reference = nocsi_low_snr_metrics(&SourceModel::ConstantRate, 1.0, 1.5).unwrap().ebn0_min;
        let sources = [
            disc(0.2, 0.9),
            disc(0.8, 0.8),
            SourceModel::MarkovFluid(ContinuousChain::new(1.0, 9.0).unwrap()),
        ];
        for src in &sources {
            for &theta in &[0.1, 1.0, 5.0] {
                assert_eq!(nocsi_low_snr_metrics(src, theta, 1.5).unwrap().ebn0_min, reference);
            }
        }
    }

    #[test]
    fn slope_monotonicity() {
        let mut prev = f64::INFINITY;
        for &theta in &[0.1, 0.5, 1.0, 4.0] {
            let v = nocsi_low_snr_metrics(&disc(0.8, 0.8), theta, 1.0).unwrap().slope_s0;
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for (p11, p22) in [(0.0, 1.0), (0.5, 0.5), (0.8, 0.8), (0.95, 0.95)] {
            let v = nocsi_low_snr_metrics(&disc(p11, p22), 1.0, 1.0).unwrap().slope_s0;
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for &beta in &[0.0, 1.0, 9.0] {
            let f = SourceModel::MarkovFluid(ContinuousChain::new(1.0, beta).unwrap());
            let v = nocsi_low_snr_metrics(&f, 1.0, 1.0).unwrap().slope_s0;
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for &gamma in &[0.1, 1.0, 10.0] {
            let v = nocsi_low_snr_metrics(&disc(0.8, 0.8), 1.0, gamma).unwrap().slope_s0;
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn fit_matches_closed_form() {
        let s = sc(1.0);
        for &a in &[0.6, 1.0, 1.2] {
            for src in [disc(0.8, 0.8), SourceModel::MarkovFluid(ContinuousChain::new(2.0, 3.0).unwrap())] {
                let closed = nocsi_low_snr_metrics_with_coefficient(&src, 0.5, 1.0, a).unwrap();
                let fit = nocsi_fitted_metrics(&src, 0.5, FixedRatePolicy::LowSnr { a }, &s, &FIT_STENCIL)
                    .unwrap();
                assert!((fit.slope_s0 / closed.slope_s0 - 1.0).abs() < 0.05, "a={a}: {} vs {}", fit.slope_s0, closed.slope_s0);
                assert!((to_db(fit.ebn0_min) - to_db(closed.ebn0_min)).abs() < 0.05);
            }
        }
    }

    #[test]
    fn g_slope_matches_finite_difference() {
        for &gamma in &[1.0, 2.5] {
            for &a in &[0.5, 1.0] {
                let theta = 0.7;
                let h = 1e-8;
                let c = nocsi_g_complement(h, theta, FixedRatePolicy::LowSnr { a }, &sc(gamma)).unwrap();
                assert_relative_eq!(-c / h, nocsi_g_slope_at_zero(theta, gamma, a), max_relative = 1e-4);
            }
        }
    }

    #[test]
    fn coefficient_sweep() {
        let s = sc(1.0);
        let src = disc(0.8, 0.8);
        let minima: Vec<f64> = [0.6, 0.8, 1.0, 1.2]
            .iter()
            .map(|&a| {
                nocsi_fitted_metrics(&src, 0.5, FixedRatePolicy::LowSnr { a }, &s, &FIT_STENCIL)
                    .unwrap()
                    .ebn0_min
            })
            .collect();
        let best = minima.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(best, minima[2]);
        let r08 = nocsi_throughput(&src, 1.0, 0.5, FixedRatePolicy::LowSnr { a: 0.8 }, &s).unwrap();
        let r10 = nocsi_throughput(&src, 1.0, 0.5, FixedRatePolicy::LowSnr { a: 1.0 }, &s).unwrap();
        assert!(r08 > r10);
    }
}
