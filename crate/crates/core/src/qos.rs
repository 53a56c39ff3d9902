//! Effective capacity of the message streams and the throughput they support.
//!
//! The service of stream `i` in a block is its instantaneous rate `R_i`. Its
//! effective capacity at QoS exponent `θ_i` is `C_E = −ln E{e^{−θ_i R_i}} / θ_i`,
//! and the largest ON-rate a source can offer is the `r*` solving
//! `a(θ_i, r*) = C_E`. Closed forms exist for every source family; a generic
//! bisection on the effective bandwidth is kept as an independent check.

pub use crate::channel::MessageIndex;
use crate::channel::{message_rate, FadingScenario, PowerSplit};
use crate::error::{Error, Result};
use crate::expectation::{Averager, ExpectationMethod};
use crate::sources::{validate_theta, SourceModel};

/// `g = E{e^{−θ R_i}}`.
///
/// `1 − g` is averaged separately through `expm1`, so both `ln g` and `1 − g`
/// stay accurate when `θ R_i` is tiny (low SNR).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue {
    pub value: f64,
    pub std_error: f64,
    complement: f64,
}

impl GValue {
    fn one() -> Self {
        Self {
            value: 1.0,
            std_error: 0.0,
            complement: 0.0,
        }
    }

    /// `1 − g`.
    pub fn complement(&self) -> f64 {
        self.complement
    }

    /// `ln g`.
    pub fn ln(&self) -> f64 {
        if self.value < 0.5 {
            self.value.ln()
        } else {
            (-self.complement).ln_1p()
        }
    }
}

fn check_snr(snr: f64) -> Result<()> {
    if snr.is_finite() && snr >= 0.0 {
        Ok(())
    } else {
        Err(Error::param("snr", format!("must be finite and >= 0, got {snr}")))
    }
}

/// `g_i(snr)` with a prepared averager.
pub fn g_value_with(
    averager: &Averager,
    i: MessageIndex,
    snr: f64,
    theta: f64,
    split: PowerSplit,
) -> Result<GValue> {
    check_snr(snr)?;
    validate_theta(theta)?;
    if snr == 0.0 {
        return Ok(GValue::one());
    }
    let [g, c] = averager.mean_many(|z| {
        let x = -theta * message_rate(z, snr, split, i);
        [x.exp(), -x.exp_m1()]
    });
    let value = if g.mean < 0.5 { g.mean } else { 1.0 - c.mean };
    if !(value > 0.0) {
        return Err(Error::Domain(format!(
            "E{{exp(-θR)}} underflowed at snr = {snr}, theta = {theta}"
        )));
    }
    Ok(GValue {
        value,
        std_error: g.std_error,
        complement: if g.mean < 0.5 { 1.0 - g.mean } else { c.mean },
    })
}

/// `g_i(snr) = E{e^{−θ_i R_i(snr)}}`.
pub fn g_value(
    i: MessageIndex,
    snr: f64,
    theta: f64,
    scenario: &FadingScenario,
    split: PowerSplit,
    method: ExpectationMethod,
) -> Result<GValue> {
    g_value_with(&Averager::new(scenario, method)?, i, snr, theta, split)
}

/// Effective capacity with its standard error (delta method).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity {
    pub value: f64,
    pub std_error: f64,
}

/// `C_E = −ln(g)/θ`, bits per block.
pub fn capacity_from_g(g: GValue, theta: f64) -> Capacity {
    Capacity {
        value: (-g.ln() / theta).max(0.0),
        std_error: g.std_error / (theta * g.value),
    }
}

pub fn effective_capacity_with(
    averager: &Averager,
    i: MessageIndex,
    snr: f64,
    theta: f64,
    split: PowerSplit,
) -> Result<Capacity> {
    let g = g_value_with(averager, i, snr, theta, split)?;
    Ok(capacity_from_g(g, theta))
}

/// Effective capacity of stream `i`, bits per block.
pub fn effective_capacity(
    i: MessageIndex,
    snr: f64,
    theta: f64,
    scenario: &FadingScenario,
    split: PowerSplit,
    method: ExpectationMethod,
) -> Result<f64> {
    let a = Averager::new(scenario, method)?;
    Ok(effective_capacity_with(&a, i, snr, theta, split)?.value)
}

/// ON-state rate `r*` whose effective bandwidth equals `capacity`.
pub fn on_rate_for_capacity(source: &SourceModel, theta: f64, capacity: f64) -> Result<f64> {
    Ok(avg_rate_for_capacity(source, theta, capacity)? / source.on_probability()?)
}

/// Maximum average arrival rate `P_on·r*` sustained by effective capacity `capacity`.
pub fn avg_rate_for_capacity(source: &SourceModel, theta: f64, capacity: f64) -> Result<f64> {
    validate_theta(theta)?;
    if !(capacity.is_finite() && capacity >= 0.0) {
        return Err(Error::param("capacity", format!("must be finite and >= 0, got {capacity}")));
    }
    let p_on = source.on_probability()?;
    if capacity == 0.0 {
        return Ok(0.0);
    }
    let tc = theta * capacity;
    let mmpp_scale = theta / theta.exp_m1();
    let value = match source {
        SourceModel::ConstantRate => capacity,
        SourceModel::DiscreteMarkov(c) => p_on * discrete_log_ratio(c.p11(), c.p22(), tc) / theta,
        SourceModel::DiscreteMmpp(c) => {
            mmpp_scale * p_on * discrete_log_ratio(c.p11(), c.p22(), tc) / theta
        }
        SourceModel::MarkovFluid(c) => {
            p_on * capacity * (tc + c.alpha() + c.beta()) / (tc + c.alpha())
        }
        SourceModel::ContinuousMmpp(c) => {
            mmpp_scale * p_on * capacity * (tc + c.alpha() + c.beta()) / (tc + c.alpha())
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!(
            "throughput is not finite at theta = {theta}, capacity = {capacity}"
        )))
    }
}

/// `ln[(1 − p11 g) / ((1 − p11 − p22) g² + p22 g)]` with `g = e^{−θC}`,
/// rearranged around `x = 1 − g` to avoid cancellation.
fn discrete_log_ratio(p11: f64, p22: f64, tc: f64) -> f64 {
    let x = -(-tc).exp_m1();
    let q = 1.0 - p11;
    let c = 1.0 - p11 - p22;
    (p11 * x / q).ln_1p() + tc - (-c * x / q).ln_1p()
}

/// Maximum average arrival rate of stream `i`, bits per block.
pub fn max_avg_arrival_rate(
    source: &SourceModel,
    i: MessageIndex,
    snr: f64,
    theta: f64,
    scenario: &FadingScenario,
    split: PowerSplit,
    method: ExpectationMethod,
) -> Result<f64> {
    source.on_probability()?;
    let c = effective_capacity(i, snr, theta, scenario, split, method)?;
    avg_rate_for_capacity(source, theta, c)
}

/// Everything computed for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputPoint {
    pub snr: f64,
    pub capacity: f64,
    pub capacity_std_error: f64,
    pub on_rate: f64,
    pub avg_rate: f64,
}

pub fn throughput_point(
    averager: &Averager,
    source: &SourceModel,
    i: MessageIndex,
    snr: f64,
    theta: f64,
    split: PowerSplit,
) -> Result<ThroughputPoint> {
    let p_on = source.on_probability()?;
    let c = effective_capacity_with(averager, i, snr, theta, split)?;
    let avg_rate = avg_rate_for_capacity(source, theta, c.value)?;
    Ok(ThroughputPoint {
        snr,
        capacity: c.value,
        capacity_std_error: c.std_error,
        on_rate: avg_rate / p_on,
        avg_rate,
    })
}

/// Bisection tolerance on `|a(θ, r) − target|`, bits per block.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

/// Solves `a(θ, r) = target` for `r` by bracketing and bisection.
pub fn solve_on_rate_bisection(source: &SourceModel, target: f64, theta: f64) -> Result<f64> {
    validate_theta(theta)?;
    if !(target.is_finite() && target >= 0.0) {
        return Err(Error::param("target_capacity", format!("must be finite and >= 0, got {target}")));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    let eb = |r: f64| source.effective_bandwidth(theta, r);
    // a(θ, r) ≤ r, so the root is at least `target`
    let mut lo = 0.0;
    let mut hi = target;
    let mut grown = 0;
    while eb(hi)? < target {
        lo = hi;
        hi *= 2.0;
        grown += 1;
        if grown > 200 || !hi.is_finite() {
            return Err(Error::Solver(format!(
                "could not bracket a(theta, r) = {target} at theta = {theta}; last bracket [{lo}, {hi}]"
            )));
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eb(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (r, res) = [lo, hi]
        .into_iter()
        .map(|r| eb(r).map(|a| (r, (a - target).abs())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("two candidates");
    let tol = BISECTION_TOLERANCE.max(4.0 * f64::EPSILON * target);
    if res > tol {
        return Err(Error::Solver(format!(
            "bisection stalled at r = {r} with residual {res:e} (bracket [{lo}, {hi}])"
        )));
    }
    Ok(r)
}

/// Decay rate `θ·a(θ, r_on)` of the delay-violation probability, per block.
pub fn delay_exponent(source: &SourceModel, theta: f64, r_on: f64) -> Result<f64> {
    Ok(theta * source.effective_bandwidth(theta, r_on)?)
}
