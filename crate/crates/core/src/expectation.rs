//! Averages over the fading distribution.
//!
//! Monte Carlo draws are regenerated from deterministic substreams on every
//! call, so two averages with the same seed see the same fading realizations
//! (common random numbers across SNR or θ sweeps). Gauss–Laguerre quadrature
//! is exact up to the rule's degree and needs independent fading: each region
//! is mapped to a product of two exponentials (on Γ1, `z1 = z2 + u` with
//! `u ~ Exp(E z1)` and `z2 ~ Exp(E z1·E z2 / (E z1 + E z2))`).

use gauss_quad::GaussLaguerre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{sample_fading, FadingSample, FadingScenario};
use crate::error::{Error, Result};
use crate::rng::{chunk_sizes, substream};

/// Smallest Gauss–Laguerre rule accepted per axis.
pub const MIN_NODES_PER_AXIS: usize = 16;

const MC_CHUNK: usize = 1 << 16;

/// How fading expectations are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpectationMethod {
    MonteCarlo { samples: usize, seed: u64 },
    GaussLaguerre { nodes_per_axis: usize },
}

impl Default for ExpectationMethod {
    fn default() -> Self {
        ExpectationMethod::MonteCarlo {
            samples: 1_000_000,
            seed: 0,
        }
    }
}

/// An average together with its standard error (zero for quadrature).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone)]
enum Rule {
    Ensemble {
        scenario: FadingScenario,
        samples: usize,
        seed: u64,
    },
    Quadrature(Vec<(FadingSample, f64)>),
}

/// Reusable averaging rule for one fading scenario.
#[derive(Debug, Clone)]
pub struct Averager {
    rule: Rule,
}

impl Averager {
    pub fn new(scenario: &FadingScenario, method: ExpectationMethod) -> Result<Self> {
        let rule = match method {
            ExpectationMethod::MonteCarlo { samples, seed } => {
                if samples < 2 {
                    return Err(Error::param("samples", format!("need at least 2, got {samples}")));
                }
                Rule::Ensemble {
                    scenario: *scenario,
                    samples,
                    seed,
                }
            }
            ExpectationMethod::GaussLaguerre { nodes_per_axis } => {
                if nodes_per_axis < MIN_NODES_PER_AXIS {
                    return Err(Error::param(
                        "nodes_per_axis",
                        format!("must be >= {MIN_NODES_PER_AXIS}, got {nodes_per_axis}"),
                    ));
                }
                if !scenario.is_independent() {
                    return Err(Error::Config(format!(
                        "Gauss-Laguerre quadrature requires independent fading, got power correlation {}",
                        scenario.power_correlation()
                    )));
                }
                Rule::Quadrature(wedge_rule(scenario, nodes_per_axis)?)
            }
        };
        Ok(Self { rule })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.rule, Rule::Quadrature(_))
    }

    /// `E{f(z1, z2)}`.
    pub fn mean<F>(&self, f: F) -> Estimate
    where
        F: Fn(FadingSample) -> f64 + Sync,
    {
        let [e] = self.mean_many(|z| [f(z)]);
        e
    }

    /// Several expectations from one pass over the same realizations.
    pub fn mean_many<const N: usize, F>(&self, f: F) -> [Estimate; N]
    where
        F: Fn(FadingSample) -> [f64; N] + Sync,
    {
        match &self.rule {
            Rule::Quadrature(points) => {
                let mut acc = [0.0; N];
                for &(z, w) in points {
                    let v = f(z);
                    for k in 0..N {
                        acc[k] += w * v[k];
                    }
                }
                acc.map(|mean| Estimate {
                    mean,
                    std_error: 0.0,
                })
            }
            Rule::Ensemble {
                scenario,
                samples,
                seed,
            } => {
                let chunks: Vec<(u64, usize)> = chunk_sizes(*samples, MC_CHUNK).collect();
                let sums = chunks
                    .into_par_iter()
                    .map(|(k, n)| {
                        let mut rng = substream(*seed, k);
                        let mut s = [(0.0, 0.0); N];
                        for _ in 0..n {
                            let v = f(sample_fading(scenario, &mut rng));
                            for k in 0..N {
                                s[k].0 += v[k];
                                s[k].1 += v[k] * v[k];
                            }
                        }
                        s
                    })
                    // chunk order is fixed, so the reduction is deterministic
                    .collect::<Vec<_>>();
                let n = *samples as f64;
                let mut out = [Estimate::default(); N];
                for k in 0..N {
                    let (s1, s2) = sums
                        .iter()
                        .fold((0.0, 0.0), |(a, b), s| (a + s[k].0, b + s[k].1));
                    let mean = s1 / n;
                    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
                    out[k] = Estimate {
                        mean,
                        std_error: (var / n).sqrt(),
                    };
                }
                out
            }
        }
    }
}

/// Tensor Gauss–Laguerre nodes covering Γ1 and Γ2 of independent exponentials.
fn wedge_rule(scenario: &FadingScenario, n: usize) -> Result<Vec<(FadingSample, f64)>> {
    let gl = GaussLaguerre::new(n, 0.0)
        .map_err(|e| Error::Config(format!("cannot build Gauss-Laguerre rule: {e}")))?;
    let pairs = gl.as_node_weight_pairs();
    let (m1, m2) = (scenario.mean_z1(), scenario.mean_z2());
    let m_min = m1 * m2 / (m1 + m2);
    let (p1, p2) = (m1 / (m1 + m2), m2 / (m1 + m2));
    let mut points = Vec::with_capacity(2 * n * n);
    for &(xu, wu) in pairs {
        for &(xv, wv) in pairs {
            let w = wu * wv;
            let v = m_min * xv;
            points.push((FadingSample { z1: v + m1 * xu, z2: v }, p1 * w));
            points.push((FadingSample { z1: v, z2: v + m2 * xu }, p2 * w));
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quad(gamma: f64) -> Averager {
        let s = FadingScenario::independent(gamma).unwrap();
        Averager::new(&s, ExpectationMethod::GaussLaguerre { nodes_per_axis: 128 }).unwrap()
    }

    #[test]
    fn quadrature_integrates_moments() {
        let a = quad(2.0);
        assert_relative_eq!(a.mean(|_| 1.0).mean, 1.0, max_relative = 1e-12);
        assert_relative_eq!(a.mean(|z| z.z1).mean, 1.0, max_relative = 1e-12);
        assert_relative_eq!(a.mean(|z| z.z2).mean, 2.0, max_relative = 1e-12);
        assert_relative_eq!(a.mean(|z| z.z1 * z.z2).mean, 2.0, max_relative = 1e-12);
        assert_relative_eq!(a.mean(|z| z.z1.min(z.z2)).mean, 2.0 / 3.0, max_relative = 1e-12);
        let p1 = a.mean(|z| if z.z1 >= z.z2 { 1.0 } else { 0.0 }).mean;
        assert_relative_eq!(p1, 1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_handles_smooth_non_polynomials() {
        // E{ln(1+z)} for unit-mean exponential z is e·E1(1)
        let e1_at_1 = 0.219_383_934_395_520_3;
        let a = quad(1.0);
        let v = a.mean(|z| z.z1.ln_1p()).mean;
        assert_relative_eq!(v, std::f64::consts::E * e1_at_1, max_relative = 1e-6);
    }

    #[test]
    fn monte_carlo_is_reproducible_and_covers_truth() {
        let s = FadingScenario::new(1.0, 1.0, 0.5).unwrap();
        let m = ExpectationMethod::MonteCarlo {
            samples: 200_000,
            seed: 9,
        };
        let a = Averager::new(&s, m).unwrap();
        let [x, y] = a.mean_many(|z| [z.z1, z.z1 * z.z2]);
        let again = Averager::new(&s, m).unwrap().mean(|z| z.z1);
        assert_eq!(x, again);
        assert!((x.mean - 1.0).abs() < 4.0 * x.std_error);
        // E{z1 z2} = 1 + ρ for unit means
        assert!((y.mean - 1.5).abs() < 4.0 * y.std_error);
    }

    #[test]
    fn quadrature_rejected_for_correlated_fading() {
        let s = FadingScenario::new(1.0, 1.0, 0.3).unwrap();
        let err = Averager::new(&s, ExpectationMethod::GaussLaguerre { nodes_per_axis: 64 });
        assert!(matches!(err, Err(Error::Config(_))));
        let s = FadingScenario::independent(1.0).unwrap();
        let err = Averager::new(&s, ExpectationMethod::GaussLaguerre { nodes_per_axis: 8 });
        assert!(matches!(err, Err(Error::Parameter { .. })));
    }
}
