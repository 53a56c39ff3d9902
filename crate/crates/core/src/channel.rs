//! Two-receiver fading broadcast channel.
//!
//! Fading powers `z1`, `z2` are exponential (Rayleigh amplitudes). The
//! transmitter sends the confidential message of the stronger receiver
//! (region Γ1 = {z1 ≥ z2} or Γ2 = {z1 < z2}) with a fraction δ_i of the power
//! and a common message with the rest, decoded by both receivers under
//! interference from the confidential signal. All rates are in bits per
//! block.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Distribution family of the fading powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingFamily {
    #[default]
    Rayleigh,
}

/// Statistics of the two fading powers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingScenario {
    family: FadingFamily,
    mean_z1: f64,
    mean_z2: f64,
    power_correlation: f64,
}

impl FadingScenario {
    pub fn new(mean_z1: f64, mean_z2: f64, power_correlation: f64) -> Result<Self> {
        ensure_finite("mean_z1", mean_z1)?;
        ensure_finite("mean_z2", mean_z2)?;
        if mean_z1 <= 0.0 {
            return Err(Error::param("mean_z1", format!("must be > 0, got {mean_z1}")));
        }
        if mean_z2 <= 0.0 {
            return Err(Error::param("mean_z2", format!("must be > 0, got {mean_z2}")));
        }
        if !(0.0..1.0).contains(&power_correlation) {
            return Err(Error::param(
                "power_correlation",
                format!("must lie in [0, 1), got {power_correlation}"),
            ));
        }
        Ok(Self {
            family: FadingFamily::Rayleigh,
            mean_z1,
            mean_z2,
            power_correlation,
        })
    }

    /// Unit-mean `z1`, `E{z2} = γ`, independent.
    pub fn independent(gamma: f64) -> Result<Self> {
        Self::new(1.0, gamma, 0.0)
    }

    pub fn family(&self) -> FadingFamily {
        self.family
    }

    pub fn mean_z1(&self) -> f64 {
        self.mean_z1
    }

    pub fn mean_z2(&self) -> f64 {
        self.mean_z2
    }

    /// Mean of `z2` relative to `z1` (γ when `z1` has unit mean).
    pub fn gamma(&self) -> f64 {
        self.mean_z2 / self.mean_z1
    }

    pub fn power_correlation(&self) -> f64 {
        self.power_correlation
    }

    pub fn is_independent(&self) -> bool {
        self.power_correlation == 0.0
    }

    /// Returns a copy with a different power correlation.
    pub fn with_correlation(&self, rho: f64) -> Result<Self> {
        Self::new(self.mean_z1, self.mean_z2, rho)
    }
}

/// Fractions of the power spent on the confidential message in Γ1 and Γ2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub delta1: f64,
    pub delta2: f64,
}

impl PowerSplit {
    pub fn new(delta1: f64, delta2: f64) -> Result<Self> {
        for (name, d) in [("delta1", delta1), ("delta2", delta2)] {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::param(name, format!("must lie in [0, 1], got {d}")));
            }
        }
        Ok(Self { delta1, delta2 })
    }

    pub fn uniform(delta: f64) -> Result<Self> {
        Self::new(delta, delta)
    }
}

/// One realization of the fading powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSample {
    pub z1: f64,
    pub z2: f64,
}

/// Region selecting which confidential stream is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Gamma1,
    Gamma2,
}

/// Message streams: common (0) and confidential to receiver 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MessageIndex {
    Common,
    Confidential1,
    Confidential2,
}

impl MessageIndex {
    pub const ALL: [MessageIndex; 3] = [
        MessageIndex::Common,
        MessageIndex::Confidential1,
        MessageIndex::Confidential2,
    ];

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            0 => Ok(MessageIndex::Common),
            1 => Ok(MessageIndex::Confidential1),
            2 => Ok(MessageIndex::Confidential2),
            _ => Err(Error::param("message", format!("must be 0, 1 or 2, got {i}"))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            MessageIndex::Common => 0,
            MessageIndex::Confidential1 => 1,
            MessageIndex::Confidential2 => 2,
        }
    }
}

/// Instantaneous rates of one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizationRates {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub region: Region,
}

impl RealizationRates {
    pub fn get(&self, i: MessageIndex) -> f64 {
        match i {
            MessageIndex::Common => self.r0,
            MessageIndex::Confidential1 => self.r1,
            MessageIndex::Confidential2 => self.r2,
        }
    }
}

/// Draws `(z1, z2)` through jointly circular Gaussian gains with correlation
/// coefficient `√ρ`, which yields power correlation `ρ`.
pub fn sample_fading<R: Rng + ?Sized>(scenario: &FadingScenario, rng: &mut R) -> FadingSample {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    let c: f64 = rng.sample(StandardNormal);
    let d: f64 = rng.sample(StandardNormal);
    // gain correlation √ρ; the power correlation is its square
    let keep = scenario.power_correlation.sqrt();
    let fresh = (1.0 - scenario.power_correlation).sqrt();
    // unit-variance complex gains: real and imaginary parts have variance 1/2
    let (h1r, h1i) = (a * std::f64::consts::FRAC_1_SQRT_2, b * std::f64::consts::FRAC_1_SQRT_2);
    let (wr, wi) = (c * std::f64::consts::FRAC_1_SQRT_2, d * std::f64::consts::FRAC_1_SQRT_2);
    let (h2r, h2i) = (keep * h1r + fresh * wr, keep * h1i + fresh * wi);
    FadingSample {
        z1: scenario.mean_z1 * (h1r * h1r + h1i * h1i),
        z2: scenario.mean_z2 * (h2r * h2r + h2i * h2i),
    }
}

/// Γ1 iff `z1 ≥ z2`.
pub fn classify_region(sample: FadingSample) -> Region {
    if sample.z1 >= sample.z2 {
        Region::Gamma1
    } else {
        Region::Gamma2
    }
}

/// Common and confidential rates for one realization.
pub fn instantaneous_rates(sample: FadingSample, snr: f64, split: PowerSplit) -> RealizationRates {
    let region = classify_region(sample);
    let (strong, weak, delta) = match region {
        Region::Gamma1 => (sample.z1, sample.z2, split.delta1),
        Region::Gamma2 => (sample.z2, sample.z1, split.delta2),
    };
    let common = ((1.0 - delta) * snr * weak / (1.0 + delta * snr * weak)).ln_1p();
    let secret = (delta * snr * strong).ln_1p() - (delta * snr * weak).ln_1p();
    let (common, secret) = (common / std::f64::consts::LN_2, secret / std::f64::consts::LN_2);
    match region {
        Region::Gamma1 => RealizationRates {
            r0: common,
            r1: secret,
            r2: 0.0,
            region,
        },
        Region::Gamma2 => RealizationRates {
            r0: common,
            r1: 0.0,
            r2: secret,
            region,
        },
    }
}

/// Rate of one message stream; cheaper than computing all three.
pub fn message_rate(sample: FadingSample, snr: f64, split: PowerSplit, i: MessageIndex) -> f64 {
    let gamma1 = sample.z1 >= sample.z2;
    match i {
        MessageIndex::Common => {
            let (weak, delta) = if gamma1 {
                (sample.z2, split.delta1)
            } else {
                (sample.z1, split.delta2)
            };
            ((1.0 - delta) * snr * weak / (1.0 + delta * snr * weak)).ln_1p() / std::f64::consts::LN_2
        }
        MessageIndex::Confidential1 if gamma1 => {
            let ds = split.delta1 * snr;
            ((ds * sample.z1).ln_1p() - (ds * sample.z2).ln_1p()) / std::f64::consts::LN_2
        }
        MessageIndex::Confidential2 if !gamma1 => {
            let ds = split.delta2 * snr;
            ((ds * sample.z2).ln_1p() - (ds * sample.z1).ln_1p()) / std::f64::consts::LN_2
        }
        _ => 0.0,
    }
}

/// `[log2(1 + snr·z_main) − log2(1 + snr·z_eve)]⁺`.
pub fn secrecy_rate_generic(z_main: f64, z_eve: f64, snr: f64) -> f64 {
    let diff = (snr * z_main).ln_1p() - (snr * z_eve).ln_1p();
    diff.max(0.0) / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use approx::assert_relative_eq;

    fn moments(scenario: &FadingScenario, n: usize, seed: u64) -> (f64, f64, f64) {
        let mut rng = substream(seed, 0);
        let (mut s1, mut s2, mut s11, mut s22, mut s12) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let FadingSample { z1, z2 } = sample_fading(scenario, &mut rng);
            s1 += z1;
            s2 += z2;
            s11 += z1 * z1;
            s22 += z2 * z2;
            s12 += z1 * z2;
        }
        let nf = n as f64;
        let (m1, m2) = (s1 / nf, s2 / nf);
        let cov = s12 / nf - m1 * m2;
        let corr = cov / ((s11 / nf - m1 * m1) * (s22 / nf - m2 * m2)).sqrt();
        (m1, m2, corr)
    }

    #[test]
    fn independent_samples_are_uncorrelated() {
        let (_, _, corr) = moments(&FadingScenario::independent(1.0).unwrap(), 1_000_000, 1);
        assert!(corr.abs() <= 0.01, "{corr}");
    }

    #[test]
    fn power_correlation_is_reproduced() {
        let s = FadingScenario::new(1.0, 1.0, 0.8).unwrap();
        let (_, _, corr) = moments(&s, 1_000_000, 2);
        assert!((0.79..=0.81).contains(&corr), "{corr}");
    }

    #[test]
    fn marginal_mean_is_reproduced() {
        let (m1, m2, _) = moments(&FadingScenario::independent(2.0).unwrap(), 1_000_000, 3);
        assert!((1.99..=2.01).contains(&m2), "{m2}");
        assert!((0.99..=1.01).contains(&m1), "{m1}");
    }

    #[test]
    fn region_probability_matches_exponential_race() {
        let gamma = 2.0;
        let s = FadingScenario::independent(gamma).unwrap();
        let mut rng = substream(4, 0);
        let n = 400_000;
        let hits = (0..n)
            .filter(|_| classify_region(sample_fading(&s, &mut rng)) == Region::Gamma1)
            .count();
        let p = 1.0 / (gamma + 1.0);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - p).abs() < 3.0 * se);
    }

    #[test]
    fn region_boundary_goes_to_gamma1() {
        assert_eq!(classify_region(FadingSample { z1: 1.0, z2: 1.0 }), Region::Gamma1);
        assert_eq!(classify_region(FadingSample { z1: 3.0, z2: 1.0 }), Region::Gamma1);
        assert_eq!(classify_region(FadingSample { z1: 0.2, z2: 0.5 }), Region::Gamma2);
    }

    #[test]
    fn rate_examples() {
        let split = PowerSplit::uniform(0.5).unwrap();
        let r = instantaneous_rates(FadingSample { z1: 3.0, z2: 1.0 }, 1.0, split);
        assert_relative_eq!(r.r1, (2.5f64 / 1.5).log2(), max_relative = 1e-14);
        assert_relative_eq!(r.r0, (4.0f64 / 3.0).log2(), max_relative = 1e-14);
        assert_eq!(r.r2, 0.0);
        assert!((r.r1 - 0.7370).abs() < 1e-4 && (r.r0 - 0.4150).abs() < 1e-4);

        let full = PowerSplit::uniform(1.0).unwrap();
        let r = instantaneous_rates(FadingSample { z1: 3.0, z2: 1.0 }, 1.0, full);
        assert_eq!(r.r0, 0.0);
        assert_relative_eq!(r.r1, 1.0, max_relative = 1e-14);

        let z = 0.7;
        let r = instantaneous_rates(FadingSample { z1: z, z2: z }, 4.0, split);
        assert_eq!(r.r1, 0.0);
        assert_eq!(r.r2, 0.0);
        assert_relative_eq!(r.r0, (1.0 + 0.5 * 4.0 * z / (1.0 + 0.5 * 4.0 * z)).log2(), max_relative = 1e-14);
    }

    #[test]
    fn generic_secrecy_rate() {
        assert_eq!(secrecy_rate_generic(2.0, 2.0, 3.0), 0.0);
        assert_eq!(secrecy_rate_generic(1.0, 3.0, 5.0), 0.0);
        assert_relative_eq!(secrecy_rate_generic(3.0, 1.0, 1.0), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn message_rate_agrees_with_full_rates() {
        let split = PowerSplit::new(0.3, 0.6).unwrap();
        let s = FadingScenario::new(1.0, 1.5, 0.4).unwrap();
        let mut rng = substream(5, 0);
        for _ in 0..1000 {
            let z = sample_fading(&s, &mut rng);
            let all = instantaneous_rates(z, 2.5, split);
            for i in MessageIndex::ALL {
                assert_eq!(message_rate(z, 2.5, split, i), all.get(i));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn sample() -> impl Strategy<Value = FadingSample> {
            (0.0..20.0f64, 0.0..20.0f64).prop_map(|(z1, z2)| FadingSample { z1, z2 })
        }

        proptest! {
            #[test]
            fn exactly_one_confidential_stream(z in sample(), snr in 0.0..100.0f64, d1 in 0.0..=1.0f64, d2 in 0.0..=1.0f64) {
                let r = instantaneous_rates(z, snr, PowerSplit::new(d1, d2).unwrap());
                prop_assert_eq!(r.r1 * r.r2, 0.0);
                prop_assert!(r.r0 >= 0.0 && r.r1 >= 0.0 && r.r2 >= 0.0);
            }

            #[test]
            fn rates_grow_with_snr(z in sample(), snr in 0.0..50.0f64, extra in 0.0..50.0f64, d1 in 0.0..=1.0f64, d2 in 0.0..=1.0f64) {
                let split = PowerSplit::new(d1, d2).unwrap();
                let lo = instantaneous_rates(z, snr, split);
                let hi = instantaneous_rates(z, snr + extra, split);
                prop_assert!(hi.r0 >= lo.r0 - 1e-12);
                prop_assert!(hi.r1 >= lo.r1 - 1e-12);
                prop_assert!(hi.r2 >= lo.r2 - 1e-12);
            }

            #[test]
            fn delta1_trades_common_for_secret(z in sample(), snr in 0.0..50.0f64, d in 0.0..=1.0f64, extra in 0.0..=1.0f64) {
                prop_assume!(z.z1 >= z.z2);
                let hi_d = (d + extra).min(1.0);
                let lo = instantaneous_rates(z, snr, PowerSplit::new(d, 0.5).unwrap());
                let hi = instantaneous_rates(z, snr, PowerSplit::new(hi_d, 0.5).unwrap());
                prop_assert!(hi.r1 >= lo.r1 - 1e-12);
                prop_assert!(hi.r0 <= lo.r0 + 1e-12);
            }

            #[test]
            fn full_power_reduces_to_generic_secrecy(z in sample(), snr in 0.0..50.0f64) {
                prop_assume!(z.z1 >= z.z2);
                let r = instantaneous_rates(z, snr, PowerSplit::uniform(1.0).unwrap());
                let g = secrecy_rate_generic(z.z1, z.z2, snr);
                prop_assert!((r.r1 - g).abs() <= 1e-12 * (1.0 + g));
            }
        }
    }
}
