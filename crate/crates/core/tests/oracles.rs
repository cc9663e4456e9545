use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vrnetsim::channel::{backhaul_rate, rb_rate, Allocation};
use vrnetsim::correlation::{
    choose_format, overlap_sets, visible_payload, visible_union_size, ContentFormat, ViewState,
};
use vrnetsim::learning::{action_space_size, enumerate_actions};
use vrnetsim::qos::{
    gain_downlink_rbs, gain_format_change, gain_uplink_rbs, DelayBudget, LinkSlot,
};

const G120: f64 = 12e6;

fn view(center: f64) -> ViewState {
    ViewState::new(0, center, 120.0)
}

fn grid_measure(views: &[ViewState]) -> f64 {
    let n = 100_000;
    let step = 360.0 / n as f64;
    (0..n)
        .filter(|&i| views.iter().any(|v| v.contains((i as f64 + 0.5) * step)))
        .count() as f64
        * step
}

#[test]
fn union_of_known_layouts() {
    assert_eq!(visible_payload(&[view(60.0)], G120), G120);
    let same = visible_payload(&[view(60.0), view(60.0)], G120);
    assert!((same - G120).abs() < 1e-3);
    let apart = visible_payload(&[view(60.0), view(240.0)], G120);
    assert!((apart - 2.0 * G120).abs() < 1e-3);
    let half = visible_payload(&[view(60.0), view(120.0)], G120);
    assert!((half - 1.5 * G120).abs() < 1e-3);
    let circle = visible_payload(&[view(60.0), view(180.0), view(300.0)], G120);
    assert!((circle - 3.0 * G120).abs() < 1e-3);
    let wrap = visible_payload(&[view(350.0), view(10.0)], G120);
    assert!((wrap - G120 * 140.0 / 120.0).abs() < 1e-3);
}

#[test]
fn inclusion_exclusion_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let n = rng.random_range(2..=6);
        let views: Vec<ViewState> = (0..n).map(|_| view(rng.random_range(0.0..360.0))).collect();
        let sets = overlap_sets(&views);
        let l = visible_union_size(&sets, n, G120).unwrap();
        let grid = grid_measure(&views) / 120.0 * G120;
        assert!((l - grid).abs() <= 0.01 * grid, "{l} vs {grid}");
    }
}

#[test]
fn incomplete_sets_are_rejected() {
    let views = [view(10.0), view(50.0), view(90.0)];
    let sets = overlap_sets(&views);
    assert!(visible_union_size(&sets, 4, G120).is_err());
    assert!(visible_union_size(&sets, 0, G120).is_err());
}

#[test]
fn format_follows_threshold() {
    assert_eq!(choose_format(50e6, 50e6).format, ContentFormat::Visible120);
    assert_eq!(
        choose_format(50e6, 50e6 + 1.0).format,
        ContentFormat::Full360
    );
    assert_eq!(choose_format(50e6, 24e6).payload, 24e6);
    assert_eq!(choose_format(50e6, 60e6).payload, 50e6);
}

#[test]
fn link_arithmetic() {
    assert!((backhaul_rate(10e9, 25).unwrap() - 0.4e9).abs() < 1e-3);
    assert!(backhaul_rate(10e9, 0).is_err());
    // 1 Hz at SINR 1 carries one bit per second
    assert!((rb_rate(1.0, 1.0) - 1.0).abs() < 1e-15);
    assert!((rb_rate(1.8e6, 3.0) - 3.6e6).abs() < 1e-6);
}

#[test]
fn action_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let one = enumerate_actions(1, 5, 5, 256, &mut rng);
    assert_eq!(
        one,
        vec![Allocation::new(1, vec![0; 5], vec![0; 5]).unwrap()]
    );
    let two = enumerate_actions(2, 5, 5, 4096, &mut rng);
    assert_eq!(two.len(), 1024);
    assert!(two.iter().all(|a| a.validate().is_ok()));
    let five = enumerate_actions(5, 5, 5, 4096, &mut rng);
    assert_eq!(five.len(), 4096);
    let mut uniq = five.clone();
    uniq.dedup();
    assert_eq!(uniq.len(), 4096);
    assert_eq!(action_space_size(5, 5, 5), Some(9_765_625));
}

fn history(rng: &mut ChaCha8Rng, t: usize, payload: f64) -> Vec<LinkSlot> {
    (0..t)
        .map(|_| LinkSlot {
            downlink_rate: rng.random_range(0.3e6..4e6),
            uplink_rate: rng.random_range(0.03e6..0.8e6),
            tracking_bits: rng.random_range(0.1e3..1e3),
            payload,
            backhaul_rate: rng.random_range(1e6..30e6),
        })
        .collect()
}

fn count(h: &[LinkSlot], b: &DelayBudget) -> i64 {
    h.iter().filter(|s| s.succeeds(b)).count() as i64
}

#[test]
fn gains_equal_before_after_difference() {
    let b = DelayBudget {
        gamma_d: 0.02,
        content_bits: 12e3,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let h = history(&mut rng, 400, 50e3);
        let before = count(&h, &b);
        let dv: Vec<f64> = (0..h.len()).map(|_| rng.random_range(0.0..0.5e6)).collect();
        let ds: Vec<f64> = (0..h.len()).map(|_| rng.random_range(0.0..3e6)).collect();
        let up: Vec<LinkSlot> = h
            .iter()
            .zip(&dv)
            .map(|(s, d)| LinkSlot {
                uplink_rate: s.uplink_rate + d,
                ..*s
            })
            .collect();
        let down: Vec<LinkSlot> = h
            .iter()
            .zip(&ds)
            .map(|(s, d)| LinkSlot {
                downlink_rate: s.downlink_rate + d,
                ..*s
            })
            .collect();
        let m120 = rng.random_range(12e3..49e3);
        let fmt: Vec<LinkSlot> = h
            .iter()
            .map(|s| LinkSlot {
                payload: m120,
                ..*s
            })
            .collect();
        let t = h.len() as f64;
        assert_eq!(
            gain_uplink_rbs(&h, &dv, &b).unwrap(),
            (count(&up, &b) - before) as f64 / t
        );
        assert_eq!(
            gain_downlink_rbs(&h, &ds, &b).unwrap(),
            (count(&down, &b) - before) as f64 / t
        );
        assert_eq!(
            gain_format_change(&h, m120, 50e3, &b).unwrap(),
            (count(&fmt, &b) - before) as f64 / t
        );
    }
}
