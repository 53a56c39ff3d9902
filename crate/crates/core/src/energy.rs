//! Energy efficiency in the low-SNR regime.
//!
//! Near `snr = 0` the throughput behaves as `r_avg ≈ ṙ·snr + ½ r̈·snr²`. The
//! minimum energy per bit is `w/ṙ` (with `w` the fraction of power spent on
//! the stream) and the wideband slope is `S0 = −2ṙ² ln 2 / r̈`. Both follow
//! from the first two derivatives `ḟ, f̈` of the per-block rate in nats at
//! `snr = 0`, averaged over the fading; they can also be recovered
//! numerically from the throughput curve, which is how the closed forms are
//! checked.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::channel::{FadingSample, FadingScenario, MessageIndex, PowerSplit};
use crate::error::{Error, Result};
use crate::expectation::{Averager, ExpectationMethod};
use crate::qos::throughput_point;
use crate::sources::{validate_theta, SourceFamily, SourceModel};

/// `ḟ_i(0)` and `f̈_i(0)` of one fading realization, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDerivatives {
    pub fdot: f64,
    pub fddot: f64,
}

pub fn f_derivatives(sample: FadingSample, split: PowerSplit, i: MessageIndex) -> FDerivatives {
    let FadingSample { z1, z2 } = sample;
    let gamma1 = z1 >= z2;
    let zero = FDerivatives {
        fdot: 0.0,
        fddot: 0.0,
    };
    match i {
        MessageIndex::Confidential1 if gamma1 => {
            let d = split.delta1;
            FDerivatives {
                fdot: d * (z1 - z2),
                fddot: -d * d * (z1 * z1 - z2 * z2),
            }
        }
        MessageIndex::Confidential2 if !gamma1 => {
            let d = split.delta2;
            FDerivatives {
                fdot: d * (z2 - z1),
                fddot: -d * d * (z2 * z2 - z1 * z1),
            }
        }
        MessageIndex::Common => {
            let (weak, d) = if gamma1 {
                (z2, split.delta1)
            } else {
                (z1, split.delta2)
            };
            FDerivatives {
                fdot: (1.0 - d) * weak,
                fddot: -(1.0 - d * d) * weak * weak,
            }
        }
        _ => zero,
    }
}

/// Fading averages that determine the low-SNR behaviour of one stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowSnrMoments {
    /// `E{ḟ}`
    pub mean_fdot: f64,
    /// `E{ḟ²}`
    pub mean_fdot_sq: f64,
    /// `E{f̈}`
    pub mean_fddot: f64,
    /// Share of the transmit power carrying the stream: `δ_i Pr(Γ_i)` for
    /// confidential streams, `(1−δ1)Pr(Γ1) + (1−δ2)Pr(Γ2)` for the common one.
    pub power_weight: f64,
}

impl LowSnrMoments {
    pub fn var_fdot(&self) -> f64 {
        (self.mean_fdot_sq - self.mean_fdot * self.mean_fdot).max(0.0)
    }

    /// Averages over the fading law with the given averager.
    pub fn estimate(averager: &Averager, i: MessageIndex, split: PowerSplit) -> Self {
        let [f1, f2, f3, w] = averager.mean_many(|z| {
            let d = f_derivatives(z, split, i);
            [d.fdot, d.fdot * d.fdot, d.fddot, power_share(z, split, i)]
        });
        Self {
            mean_fdot: f1.mean,
            mean_fdot_sq: f2.mean,
            mean_fddot: f3.mean,
            power_weight: w.mean,
        }
    }

    /// Exact values for independent exponential fading.
    pub fn exact_independent(
        i: MessageIndex,
        scenario: &FadingScenario,
        split: PowerSplit,
    ) -> Result<Self> {
        if !scenario.is_independent() {
            return Err(Error::Config(
                "exact low-SNR moments need independent fading".into(),
            ));
        }
        let (m1, m2) = (scenario.mean_z1(), scenario.mean_z2());
        let m_min = m1 * m2 / (m1 + m2);
        let (p1, p2) = (m1 / (m1 + m2), m2 / (m1 + m2));
        let (d1, d2) = (split.delta1, split.delta2);
        // on Γ1, z1 − z2 ~ Exp(m1) and z2 ~ Exp(m_min), independently
        Ok(match i {
            MessageIndex::Confidential1 => Self {
                mean_fdot: d1 * m1 * p1,
                mean_fdot_sq: 2.0 * d1 * d1 * m1 * m1 * p1,
                mean_fddot: -d1 * d1 * p1 * (2.0 * m1 * m1 + 2.0 * m1 * m_min),
                power_weight: d1 * p1,
            },
            MessageIndex::Confidential2 => Self {
                mean_fdot: d2 * m2 * p2,
                mean_fdot_sq: 2.0 * d2 * d2 * m2 * m2 * p2,
                mean_fddot: -d2 * d2 * p2 * (2.0 * m2 * m2 + 2.0 * m2 * m_min),
                power_weight: d2 * p2,
            },
            MessageIndex::Common => {
                let (c1, c2) = (1.0 - d1, 1.0 - d2);
                Self {
                    mean_fdot: m_min * (c1 * p1 + c2 * p2),
                    mean_fdot_sq: 2.0 * m_min * m_min * (c1 * c1 * p1 + c2 * c2 * p2),
                    mean_fddot: -2.0
                        * m_min
                        * m_min
                        * ((1.0 - d1 * d1) * p1 + (1.0 - d2 * d2) * p2),
                    power_weight: c1 * p1 + c2 * p2,
                }
            }
        })
    }

    /// Exact values when fading is independent, otherwise `method`.
    pub fn for_scenario(
        i: MessageIndex,
        scenario: &FadingScenario,
        split: PowerSplit,
        method: ExpectationMethod,
    ) -> Result<Self> {
        if scenario.is_independent() {
            Self::exact_independent(i, scenario, split)
        } else {
            Ok(Self::estimate(&Averager::new(scenario, method)?, i, split))
        }
    }

    fn check_active(&self, i: MessageIndex) -> Result<()> {
        if self.power_weight > 0.0 && self.mean_fdot > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "stream {} carries no power at low SNR (E{{f'(0)}} = {}, power share = {})",
                i.index(),
                self.mean_fdot,
                self.power_weight
            )))
        }
    }
}

fn power_share(z: FadingSample, split: PowerSplit, i: MessageIndex) -> f64 {
    let gamma1 = z.z1 >= z.z2;
    match i {
        MessageIndex::Confidential1 if gamma1 => split.delta1,
        MessageIndex::Confidential2 if !gamma1 => split.delta2,
        MessageIndex::Common if gamma1 => 1.0 - split.delta1,
        MessageIndex::Common => 1.0 - split.delta2,
        _ => 0.0,
    }
}

/// `θ/(e^θ − 1)`: throughput scale of Poisson-modulated sources.
pub fn mmpp_scale(theta: f64) -> f64 {
    theta / theta.exp_m1()
}

fn family_scale(family: SourceFamily, theta: f64) -> f64 {
    if family.is_mmpp() {
        mmpp_scale(theta)
    } else {
        1.0
    }
}

/// How a pair of low-SNR metrics was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricsMethod {
    ClosedForm,
    NumericFit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowSnrMetrics {
    /// Minimum energy per bit, linear.
    pub ebn0_min: f64,
    /// Wideband slope; infinite when the curve shows no curvature.
    pub slope_s0: f64,
    pub method: MetricsMethod,
}

impl LowSnrMetrics {
    pub fn ebn0_min_db(&self) -> f64 {
        to_db(self.ebn0_min)
    }

    pub fn slope_is_degenerate(&self) -> bool {
        !self.slope_s0.is_finite()
    }
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Minimum energy per bit from low-SNR moments.
pub fn min_ebn0_from_moments(
    family: SourceFamily,
    i: MessageIndex,
    theta: f64,
    m: &LowSnrMoments,
) -> Result<f64> {
    validate_theta(theta)?;
    m.check_active(i)?;
    Ok(m.power_weight * LN_2 / (m.mean_fdot * family_scale(family, theta)))
}

/// Wideband slope from low-SNR moments.
pub fn wideband_slope_from_moments(
    source: &SourceModel,
    i: MessageIndex,
    theta: f64,
    m: &LowSnrMoments,
) -> Result<f64> {
    validate_theta(theta)?;
    m.check_active(i)?;
    let b = source.burstiness()?;
    let mean_sq = m.mean_fdot * m.mean_fdot;
    let denom = theta / LN_2 * (m.var_fdot() + b * mean_sq) - m.mean_fddot;
    if !(denom > 0.0) {
        return Err(Error::Domain(format!("wideband slope denominator is {denom}")));
    }
    Ok(family_scale(source.family(), theta) * 2.0 * mean_sq / denom)
}

/// Minimum energy per bit (linear) of stream `i`.
///
/// Independent of θ except for Poisson-modulated sources, which pay a factor
/// `(e^θ − 1)/θ`.
pub fn min_ebn0_closed_form(
    family: SourceFamily,
    i: MessageIndex,
    theta: f64,
    scenario: &FadingScenario,
    split: PowerSplit,
    method: ExpectationMethod,
) -> Result<f64> {
    let m = LowSnrMoments::for_scenario(i, scenario, split, method)?;
    min_ebn0_from_moments(family, i, theta, &m)
}

/// Wideband slope of stream `i` for `source`.
pub fn wideband_slope_closed_form(
    source: &SourceModel,
    i: MessageIndex,
    theta: f64,
    scenario: &FadingScenario,
    split: PowerSplit,
    method: ExpectationMethod,
) -> Result<f64> {
    let m = LowSnrMoments::for_scenario(i, scenario, split, method)?;
    wideband_slope_from_moments(source, i, theta, &m)
}

/// Both metrics from the closed forms.
pub fn low_snr_metrics_closed_form(
    source: &SourceModel,
    i: MessageIndex,
    theta: f64,
    scenario: &FadingScenario,
    split: PowerSplit,
    method: ExpectationMethod,
) -> Result<LowSnrMetrics> {
    let m = LowSnrMoments::for_scenario(i, scenario, split, method)?;
    Ok(LowSnrMetrics {
        ebn0_min: min_ebn0_from_moments(source.family(), i, theta, &m)?,
        slope_s0: wideband_slope_from_moments(source, i, theta, &m)?,
        method: MetricsMethod::ClosedForm,
    })
}

/// Wideband slope for independent exponential fading with `γ = E z2 / E z1`,
/// written out in terms of γ, θ and the source burstiness `b` (η, ζ or 0).
///
/// Confidential streams do not depend on the power split. The common stream
/// has a short form only for `δ1 = δ2`; other splits return a configuration
/// error and must go through [`wideband_slope_closed_form`].
pub fn wideband_slope_simplified(
    source: &SourceModel,
    i: MessageIndex,
    theta: f64,
    gamma: f64,
    split: PowerSplit,
) -> Result<f64> {
    validate_theta(theta)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::param("gamma", format!("must be > 0, got {gamma}")));
    }
    let b = source.burstiness()?;
    let t = theta / LN_2;
    let slope = match i {
        MessageIndex::Confidential1 => {
            let k = 2.0 * gamma + 1.0;
            2.0 / (t * (k + b) + 2.0 * k)
        }
        MessageIndex::Confidential2 => {
            let k = 2.0 / gamma + 1.0;
            2.0 / (t * (k + b) + 2.0 * k)
        }
        MessageIndex::Common => {
            if split.delta1 != split.delta2 {
                return Err(Error::Config(
                    "the short common-stream slope needs delta1 = delta2".into(),
                ));
            }
            let d = split.delta1;
            if d >= 1.0 {
                return Err(Error::Domain("common stream has no power with delta = 1".into()));
            }
            2.0 / (t * (1.0 + b) + 2.0 * (1.0 + d) / (1.0 - d))
        }
    };
    Ok(family_scale(source.family(), theta) * slope)
}

/// One point of an energy-per-bit curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyPoint {
    pub snr: f64,
    pub r_avg: f64,
    pub eb_n0: f64,
    pub eb_n0_db: f64,
}

/// Power share of stream `i`, exact for independent fading.
pub fn power_weight(
    averager: &Averager,
    i: MessageIndex,
    scenario: &FadingScenario,
    split: PowerSplit,
) -> Result<f64> {
    let w = if scenario.is_independent() {
        LowSnrMoments::exact_independent(i, scenario, split)?.power_weight
    } else {
        averager.mean(|z| power_share(z, split, i)).mean
    };
    if w > 0.0 {
        Ok(w)
    } else {
        Err(Error::param(
            "split",
            format!("stream {} receives no transmit power", i.index()),
        ))
    }
}

/// Throughput and energy per bit `w·snr / r_avg` along `snr_grid`.
pub fn energy_curve(
    source: &SourceModel,
    i: MessageIndex,
    theta: f64,
    scenario: &FadingScenario,
    split: PowerSplit,
    method: ExpectationMethod,
    snr_grid: &[f64],
) -> Result<Vec<EnergyPoint>> {
    check_grid(snr_grid)?;
    let averager = Averager::new(scenario, method)?;
    let weight = power_weight(&averager, i, scenario, split)?;
    snr_grid
        .iter()
        .map(|&snr| {
            let p = throughput_point(&averager, source, i, snr, theta, split)?;
            let eb_n0 = weight * snr / p.avg_rate;
            Ok(EnergyPoint {
                snr,
                r_avg: p.avg_rate,
                eb_n0,
                eb_n0_db: to_db(eb_n0),
            })
        })
        .collect()
}

fn check_grid(snr_grid: &[f64]) -> Result<()> {
    if snr_grid.is_empty() {
        return Err(Error::param("snr_grid", "must not be empty"));
    }
    if snr_grid.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
        return Err(Error::param("snr_grid", "values must be finite and > 0"));
    }
    if snr_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("snr_grid", "must be strictly ascending"));
    }
    Ok(())
}

/// Default SNR stencil of the low-SNR fit.
pub const FIT_STENCIL: [f64; 4] = [1e-4, 2e-4, 4e-4, 8e-4];

/// Largest accepted RMS residual of `r/snr`, relative to the fitted slope.
pub const FIT_TOLERANCE: f64 = 1e-3;

/// Recovers both metrics from throughput samples `(snr, r_avg)`.
///
/// Fits `r_avg = ṙ·snr + ½r̈·snr²` by least squares on `r_avg/snr`, which
/// weights every point by `1/snr²`.
pub fn fit_low_snr_metrics(curve: &[(f64, f64)], numerator_weight: f64) -> Result<LowSnrMetrics> {
    if curve.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 points, got {}", curve.len())));
    }
    if !(numerator_weight.is_finite() && numerator_weight > 0.0) {
        return Err(Error::param("numerator_weight", format!("must be > 0, got {numerator_weight}")));
    }
    let snrs: Vec<f64> = curve.iter().map(|p| p.0).collect();
    check_grid(&snrs)?;
    if curve.windows(2).any(|w| w[1].1 < w[0].1) || curve.iter().any(|p| !(p.1 > 0.0)) {
        return Err(Error::Fit(format!(
            "throughput must be positive and nondecreasing in snr, got {curve:?}"
        )));
    }
    let n = curve.len() as f64;
    let ys: Vec<f64> = curve.iter().map(|&(s, r)| r / s).collect();
    let sx = snrs.iter().sum::<f64>() / n;
    let sy = ys.iter().sum::<f64>() / n;
    let sxx: f64 = snrs.iter().map(|x| (x - sx).powi(2)).sum();
    let sxy: f64 = snrs.iter().zip(&ys).map(|(x, y)| (x - sx) * (y - sy)).sum();
    let c2 = sxy / sxx;
    let c1 = sy - c2 * sx;
    if !(c1 > 0.0) {
        return Err(Error::Fit(format!("fitted first derivative {c1} is not positive")));
    }
    let rms = (snrs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - c1 - c2 * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    if rms > FIT_TOLERANCE * c1 {
        return Err(Error::Fit(format!(
            "residual {:.3e} of the quadratic fit exceeds {FIT_TOLERANCE:e} of the slope {c1:.6e}",
            rms
        )));
    }
    // r̈ = 2·c2, S0 = −2ṙ² ln2 / r̈
    let slope_s0 = if c2 < 0.0 {
        -c1 * c1 * LN_2 / c2
    } else {
        f64::INFINITY
    };
    Ok(LowSnrMetrics {
        ebn0_min: numerator_weight / c1,
        slope_s0,
        method: MetricsMethod::NumericFit,
    })
}

/// Fits the metrics to a throughput curve computed on `stencil`.
pub fn fitted_low_snr_metrics(
    source: &SourceModel,
    i: MessageIndex,
    theta: f64,
    scenario: &FadingScenario,
    split: PowerSplit,
    method: ExpectationMethod,
    stencil: &[f64],
) -> Result<LowSnrMetrics> {
    let averager = Averager::new(scenario, method)?;
    let weight = power_weight(&averager, i, scenario, split)?;
    let curve = stencil
        .iter()
        .map(|&snr| Ok((snr, throughput_point(&averager, source, i, snr, theta, split)?.avg_rate)))
        .collect::<Result<Vec<_>>>()?;
    fit_low_snr_metrics(&curve, weight)
}
