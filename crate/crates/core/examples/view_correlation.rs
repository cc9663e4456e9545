//! Tracking-data correlation between nearby users and the backhaul format
//! decision for overlapping 120° views.

use vrnetsim::correlation::{
    arc_union_measure, choose_format, covariance, overlap_sets, tracking_data_size,
    visible_payload, TrackingSize, ViewState,
};

fn main() {
    println!("covariance with σ = 1, α = 2, κ = 5:");
    for d in [0.0, 0.5, 1.0, 5f64.sqrt(), 3.0, 10.0] {
        let c = covariance(1.0, 1.0, d, 2.0, 5.0);
        let k = tracking_data_size(
            c,
            &TrackingSize {
                k_min: 0.1e6,
                k_max: 1e6,
                sigma_ref: 1.0,
            },
        );
        println!(
            "  d = {d:5.2} m  σ = {c:.4}  tracking = {:.3} Mbit",
            k / 1e6
        );
    }

    let g120 = 12e6;
    let g360 = 50e6;
    let groups: [&[f64]; 4] = [
        &[90.0],
        &[90.0, 150.0],
        &[0.0, 100.0, 200.0],
        &[0.0, 70.0, 140.0, 210.0, 280.0],
    ];
    println!("\nvisible payload of a requester group (G_120 = 12 Mbit, G_360 = 50 Mbit):");
    for centers in groups {
        let views: Vec<ViewState> = centers
            .iter()
            .map(|&c| ViewState::new(0, c, 120.0))
            .collect();
        let sets = overlap_sets(&views);
        let pairs: Vec<String> = sets
            .orders
            .first()
            .map(|o| {
                o.iter()
                    .map(|p| format!("{:.2}", p.coefficient.max(0.0)))
                    .collect()
            })
            .unwrap_or_default();
        let l = visible_payload(&views, g120);
        let d = choose_format(g360, l);
        println!(
            "  centers {centers:?}: union {:.0}°, pairwise overlaps [{}], L = {:.1} Mbit -> {:?}",
            arc_union_measure(&views),
            pairs.join(" "),
            l / 1e6,
            d.format
        );
    }

    println!("\nformat threshold:");
    for l in [12.0, 24.0, 36.0, 48.0, 50.0, 52.0, 60.0] {
        println!(
            "  L = {l:4} Mbit -> {:?}",
            choose_format(g360, l * 1e6).format
        );
    }
}
