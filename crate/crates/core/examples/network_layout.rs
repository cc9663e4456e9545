//! Drop SBSs and users on a disc, associate each user with its nearest SBS
//! and draw one slot of downlink and uplink SINRs.
//!
//! `cargo run --release --example network_layout -- [seed]`

use vrnetsim::channel::{backhaul_rate, rb_rate, ChannelRealization, RadioParams};
use vrnetsim::rng;
use vrnetsim::topology::generate_topology;

fn main() -> vrnetsim::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let topo = generate_topology(5, 25, 500.0, seed)?;
    println!(
        "{} SBSs, {} users on a {} m disc (seed {seed})",
        topo.num_sbs(),
        topo.num_users(),
        topo.area_radius
    );

    for (j, users) in topo.partition().iter().enumerate() {
        let p = topo.sbs_positions[j];
        let mean_d = if users.is_empty() {
            0.0
        } else {
            users.iter().map(|&u| topo.distance(u, j)).sum::<f64>() / users.len() as f64
        };
        println!(
            "  SBS {j} at ({:7.1}, {:7.1}): {:2} users, mean distance {mean_d:6.1} m",
            p.x,
            p.y,
            users.len()
        );
    }

    let radio = RadioParams::default();
    let mut fading = rng::fork(seed, rng::FADING, 0);
    let ch = ChannelRealization::draw(&topo, radio, 5, 5, &mut fading);

    println!(
        "\nblock-0 rates of the users of SBS 0 (one uplink user per block, no co-channel users):"
    );
    for &u in topo.users_of(0).iter().take(5) {
        let dl = ch.sinr_downlink(u, 0, 0);
        let ul = ch.sinr_uplink(u, 0, 0, &[u]);
        println!(
            "  user {u:2}: downlink SINR {:8.2} dB -> {:6.2} Mb/s, uplink SINR {:8.2} dB -> {:6.2} Mb/s",
            10.0 * dl.log10(),
            rb_rate(radio.rb_bandwidth, dl) / 1e6,
            10.0 * ul.log10(),
            rb_rate(radio.rb_bandwidth, ul) / 1e6
        );
    }
    println!(
        "\nbackhaul share per user at 10 Gb/s: {} Gb/s",
        backhaul_rate(10e9, topo.num_users())? / 1e9
    );
    Ok(())
}
