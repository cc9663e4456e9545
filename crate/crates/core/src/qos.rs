//! Transmission delays, deadline success and closed-form success gains.

use serde::{Deserialize, Serialize};

use crate::correlation::ContentFormat;
use crate::error::{Error, Result};

/// Cloud→SBS→user delay: `G_120 / c_down + M / (U_a · V_i^B)`.
///
/// The backhaul transmission of a content is shared by its `requesters`, so
/// each of them sees the payload over the pooled rate. A zero downlink rate
/// yields `+∞`.
pub fn downlink_delay(
    content_bits: f64,
    rate_down: f64,
    payload: f64,
    requesters: usize,
    per_user_backhaul: f64,
) -> f64 {
    let radio = if rate_down > 0.0 {
        content_bits / rate_down
    } else {
        f64::INFINITY
    };
    let backhaul = if payload > 0.0 {
        payload / (requesters.max(1) as f64 * per_user_backhaul)
    } else {
        0.0
    };
    radio + backhaul
}

/// Tracking upload delay `K_i / c_up`; `+∞` when a non-empty payload has no rate.
pub fn uplink_delay(tracking_bits: f64, rate_up: f64) -> f64 {
    if tracking_bits <= 0.0 {
        0.0
    } else if rate_up > 0.0 {
        tracking_bits / rate_up
    } else {
        f64::INFINITY
    }
}

/// Whether the round trip meets the deadline (closed inequality).
pub fn success_indicator(d_down: f64, d_up: f64, gamma_d: f64) -> bool {
    d_down + d_up <= gamma_d
}

/// What happened to one user in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotOutcome {
    pub downlink_delay: f64,
    pub uplink_delay: f64,
    pub success: bool,
    pub content: usize,
    pub format: ContentFormat,
}

impl SlotOutcome {
    pub fn new(
        downlink_delay: f64,
        uplink_delay: f64,
        gamma_d: f64,
        content: usize,
        format: ContentFormat,
    ) -> Self {
        SlotOutcome {
            downlink_delay,
            uplink_delay,
            success: success_indicator(downlink_delay, uplink_delay, gamma_d),
            content,
            format,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessEstimate {
    pub probability: f64,
    pub horizon: usize,
}

/// Fraction of successful slots.
pub fn success_probability(outcomes: &[SlotOutcome]) -> Result<SuccessEstimate> {
    if outcomes.is_empty() {
        return Err(Error::contract("success probability over zero slots"));
    }
    let hits = outcomes.iter().filter(|o| o.success).count();
    Ok(SuccessEstimate {
        probability: hits as f64 / outcomes.len() as f64,
        horizon: outcomes.len(),
    })
}

/// One slot of a user's link history, as needed by the gain formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkSlot {
    /// `c(s)`, bits/s.
    pub downlink_rate: f64,
    /// `c(v)`, bits/s.
    pub uplink_rate: f64,
    /// `K_i(σ_max)`, bits.
    pub tracking_bits: f64,
    /// Backhaul payload under the current format, bits.
    pub payload: f64,
    /// Pooled backhaul rate of the requester group, `U_a · V_i^B`.
    pub backhaul_rate: f64,
}

/// Deadline and visible-content size shared by a history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayBudget {
    pub gamma_d: f64,
    pub content_bits: f64,
}

impl LinkSlot {
    pub fn downlink_delay(&self, budget: &DelayBudget) -> f64 {
        downlink_delay(
            budget.content_bits,
            self.downlink_rate,
            self.payload,
            1,
            self.backhaul_rate,
        )
    }

    pub fn uplink_delay(&self) -> f64 {
        uplink_delay(self.tracking_bits, self.uplink_rate)
    }

    pub fn succeeds(&self, budget: &DelayBudget) -> bool {
        success_indicator(
            self.downlink_delay(budget),
            self.uplink_delay(),
            budget.gamma_d,
        )
    }
}

fn check_aligned(history: &[LinkSlot], delta: &[f64]) -> Result<()> {
    if history.is_empty() {
        return Err(Error::contract("gain over an empty history"));
    }
    if history.len() != delta.len() {
        return Err(Error::contract(format!(
            "{} slots but {} delta rates",
            history.len(),
            delta.len()
        )));
    }
    Ok(())
}

/// Success-probability gain of adding uplink blocks whose per-slot rate is
/// `delta_rate[t]`: `(1/T) Σ 1{γ_DU - c(Δv) ≤ c(v) < γ_DU}` with
/// `γ_DU = K / (γ_D - D_t)`.
pub fn gain_uplink_rbs(
    history: &[LinkSlot],
    delta_rate: &[f64],
    budget: &DelayBudget,
) -> Result<f64> {
    check_aligned(history, delta_rate)?;
    let hits = history
        .iter()
        .zip(delta_rate)
        .filter(|(slot, &dv)| {
            let slack = budget.gamma_d - slot.downlink_delay(budget);
            if !(slack > 0.0) {
                return false;
            }
            let threshold = slot.tracking_bits / slack;
            threshold - dv <= slot.uplink_rate && slot.uplink_rate < threshold
        })
        .count();
    Ok(hits as f64 / history.len() as f64)
}

/// Success-probability gain of adding downlink blocks:
/// `(1/T) Σ 1{γ_DD - c(Δs) ≤ c(s) < γ_DD}` with
/// `γ_DD = G_120 / (γ_D - D^U - M / R)`.
pub fn gain_downlink_rbs(
    history: &[LinkSlot],
    delta_rate: &[f64],
    budget: &DelayBudget,
) -> Result<f64> {
    check_aligned(history, delta_rate)?;
    let hits = history
        .iter()
        .zip(delta_rate)
        .filter(|(slot, &ds)| {
            let backhaul = if slot.payload > 0.0 {
                slot.payload / slot.backhaul_rate
            } else {
                0.0
            };
            let slack = budget.gamma_d - slot.uplink_delay() - backhaul;
            if !(slack > 0.0) {
                return false;
            }
            let threshold = budget.content_bits / slack;
            threshold - ds <= slot.downlink_rate && slot.downlink_rate < threshold
        })
        .count();
    Ok(hits as f64 / history.len() as f64)
}

/// Gain of switching the backhaul format to the one with the smaller
/// payload. Zero when both payloads are equal.
pub fn gain_format_change(
    history: &[LinkSlot],
    m120: f64,
    m360: f64,
    budget: &DelayBudget,
) -> Result<f64> {
    if history.is_empty() {
        return Err(Error::contract("gain over an empty history"));
    }
    if m120 == m360 {
        return Ok(0.0);
    }
    let (small, large) = if m360 > m120 {
        (m120, m360)
    } else {
        (m360, m120)
    };
    let hits = history
        .iter()
        .filter(|slot| {
            let radio = if slot.downlink_rate > 0.0 {
                budget.content_bits / slot.downlink_rate
            } else {
                f64::INFINITY
            };
            let room = (budget.gamma_d - radio - slot.uplink_delay()) * slot.backhaul_rate;
            small <= room && room < large
        })
        .count();
    Ok(hits as f64 / history.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn downlink_delay_cases() {
        let d = downlink_delay(12e6, 36e6, 12e6, 1, 0.4e9);
        assert!((d - (1.0 / 3.0 + 0.03)).abs() < 1e-12);
        assert!((d - 0.3633).abs() < 1e-4);
        assert_eq!(downlink_delay(12e6, 36e6, 0.0, 1, 0.4e9), 12e6 / 36e6);
        let one = downlink_delay(12e6, 36e6, 12e6, 1, 0.4e9) - 12e6 / 36e6;
        let two = downlink_delay(12e6, 36e6, 12e6, 2, 0.4e9) - 12e6 / 36e6;
        assert!((two - one / 2.0).abs() < 1e-15);
        assert_eq!(downlink_delay(12e6, 0.0, 12e6, 1, 0.4e9), f64::INFINITY);
    }

    #[test]
    fn uplink_delay_cases() {
        assert!((uplink_delay(0.1e6, 10e6) - 0.01).abs() < 1e-15);
        assert_eq!(uplink_delay(0.0, 10e6), 0.0);
        assert_eq!(uplink_delay(0.0, 0.0), 0.0);
        assert_eq!(uplink_delay(1.0, 0.0), f64::INFINITY);
        assert!(!success_indicator(0.0, uplink_delay(1.0, 0.0), 0.02));
    }

    #[test]
    fn indicator_cases() {
        assert!(success_indicator(0.005, 0.005, 0.02));
        assert!(!success_indicator(0.02, 0.001, 0.02));
        assert!(success_indicator(0.015, 0.005, 0.02));
    }

    fn outcome(success: bool) -> SlotOutcome {
        SlotOutcome {
            downlink_delay: 0.0,
            uplink_delay: 0.0,
            success,
            content: 0,
            format: ContentFormat::Visible120,
        }
    }

    #[test]
    fn probability_cases() {
        let all: Vec<_> = (0..10).map(|_| outcome(true)).collect();
        assert_eq!(success_probability(&all).unwrap().probability, 1.0);
        let none: Vec<_> = (0..10).map(|_| outcome(false)).collect();
        assert_eq!(success_probability(&none).unwrap().probability, 0.0);
        let mixed: Vec<_> = (0..1000).map(|i| outcome(i < 700)).collect();
        let est = success_probability(&mixed).unwrap();
        assert_eq!(est.probability, 0.7);
        assert_eq!(est.horizon, 1000);
        assert!(success_probability(&[]).is_err());
    }

    fn budget() -> DelayBudget {
        DelayBudget {
            gamma_d: 0.02,
            content_bits: 12e3,
        }
    }

    #[test]
    fn zero_delta_means_zero_gain() {
        let slot = LinkSlot {
            downlink_rate: 1e6,
            uplink_rate: 0.1e6,
            tracking_bits: 1e3,
            payload: 12e3,
            backhaul_rate: 4e6,
        };
        let h = vec![slot; 5];
        assert_eq!(gain_uplink_rbs(&h, &[0.0; 5], &budget()).unwrap(), 0.0);
        assert_eq!(gain_downlink_rbs(&h, &[0.0; 5], &budget()).unwrap(), 0.0);
        assert_eq!(gain_format_change(&h, 12e3, 12e3, &budget()).unwrap(), 0.0);
    }

    #[test]
    fn already_succeeding_slot_contributes_nothing() {
        let slot = LinkSlot {
            downlink_rate: 10e6,
            uplink_rate: 10e6,
            tracking_bits: 1e3,
            payload: 12e3,
            backhaul_rate: 40e6,
        };
        assert!(slot.succeeds(&budget()));
        let h = [slot];
        assert_eq!(gain_uplink_rbs(&h, &[5e6], &budget()).unwrap(), 0.0);
        assert_eq!(gain_downlink_rbs(&h, &[5e6], &budget()).unwrap(), 0.0);
        // both formats feasible
        assert_eq!(gain_format_change(&h, 12e3, 50e3, &budget()).unwrap(), 0.0);
    }

    #[test]
    fn rescued_slot_counts() {
        // downlink 12e3/1e6 = 12 ms, backhaul 12e3/4e6 = 3 ms, uplink 1e3/0.1e6 = 10 ms -> fails
        let slot = LinkSlot {
            downlink_rate: 1e6,
            uplink_rate: 0.1e6,
            tracking_bits: 1e3,
            payload: 12e3,
            backhaul_rate: 4e6,
        };
        assert!(!slot.succeeds(&budget()));
        // doubling the uplink rate: 5 ms uplink -> 20 ms total, meets the closed deadline
        let g = gain_uplink_rbs(&[slot], &[0.1e6 + 1.0], &budget()).unwrap();
        assert_eq!(g, 1.0);
    }

    #[test]
    fn uplink_limited_slot_gets_no_downlink_gain() {
        let slot = LinkSlot {
            downlink_rate: 1e6,
            uplink_rate: 0.0,
            tracking_bits: 1e3,
            payload: 12e3,
            backhaul_rate: 4e6,
        };
        assert_eq!(gain_downlink_rbs(&[slot], &[1e9], &budget()).unwrap(), 0.0);
    }

    #[test]
    fn misaligned_inputs_rejected() {
        let slot = LinkSlot {
            downlink_rate: 1e6,
            uplink_rate: 1e6,
            tracking_bits: 1e3,
            payload: 12e3,
            backhaul_rate: 4e6,
        };
        assert!(gain_uplink_rbs(&[slot], &[1.0, 2.0], &budget()).is_err());
        assert!(gain_downlink_rbs(&[], &[], &budget()).is_err());
    }
}
