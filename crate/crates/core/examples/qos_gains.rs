//! Delay budget of a user and the closed-form success gains of adding radio
//! blocks or switching the backhaul format, checked against recounting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vrnetsim::qos::{
    downlink_delay, gain_downlink_rbs, gain_format_change, gain_uplink_rbs, success_indicator,
    uplink_delay, DelayBudget, LinkSlot,
};

fn main() -> vrnetsim::Result<()> {
    let d_down = downlink_delay(12e3, 2e6, 12e3, 2, 4e6);
    let d_up = uplink_delay(1e3, 0.2e6);
    println!(
        "12 kbit at 2 Mb/s, payload shared by 2 requesters at 4 Mb/s each: downlink {:.2} ms, uplink {:.2} ms, success {}",
        d_down * 1e3,
        d_up * 1e3,
        success_indicator(d_down, d_up, 0.02)
    );

    let budget = DelayBudget {
        gamma_d: 0.02,
        content_bits: 12e3,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let history: Vec<LinkSlot> = (0..1000)
        .map(|_| LinkSlot {
            downlink_rate: rng.random_range(0.5e6..3e6),
            uplink_rate: rng.random_range(0.05e6..0.5e6),
            tracking_bits: 1e3,
            payload: 50e3,
            backhaul_rate: rng.random_range(2e6..20e6),
        })
        .collect();
    let hits =
        |h: &[LinkSlot]| h.iter().filter(|s| s.succeeds(&budget)).count() as f64 / h.len() as f64;
    let base = hits(&history);
    println!("\nsuccess probability over 1000 slots: {base:.3}");

    let extra: Vec<f64> = (0..1000).map(|_| rng.random_range(0.0..0.3e6)).collect();
    let up: Vec<LinkSlot> = history
        .iter()
        .zip(&extra)
        .map(|(s, d)| LinkSlot {
            uplink_rate: s.uplink_rate + d,
            ..*s
        })
        .collect();
    let down: Vec<LinkSlot> = history
        .iter()
        .zip(&extra)
        .map(|(s, d)| LinkSlot {
            downlink_rate: s.downlink_rate + d,
            ..*s
        })
        .collect();
    let visible: Vec<LinkSlot> = history
        .iter()
        .map(|s| LinkSlot {
            payload: 20e3,
            ..*s
        })
        .collect();

    println!("gain                closed form  recount");
    println!(
        "extra uplink        {:.3}        {:.3}",
        gain_uplink_rbs(&history, &extra, &budget)?,
        hits(&up) - base
    );
    println!(
        "extra downlink      {:.3}        {:.3}",
        gain_downlink_rbs(&history, &extra, &budget)?,
        hits(&down) - base
    );
    println!(
        "360° -> visible     {:.3}        {:.3}",
        gain_format_change(&history, 20e3, 50e3, &budget)?,
        hits(&visible) - base
    );
    Ok(())
}
