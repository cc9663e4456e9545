//! Path loss, Rayleigh fading, SINR and achievable rates.
//!
//! Downlink interference comes from every other transmitting SBS on the same
//! resource block (full frequency reuse). Uplink interference on block `k`
//! comes from the users of other SBSs that were assigned uplink block `k`.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::Topology;

/// Static radio parameters, SI units (watts, hertz, meters).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    pub pathloss_exponent: f64,
    pub noise_power: f64,
    pub rb_bandwidth: f64,
    pub sbs_power: f64,
    pub user_power: f64,
    /// Distances below this are evaluated at `min_distance`.
    pub min_distance: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            pathloss_exponent: 3.0,
            noise_power: dbm_to_watts(-105.0),
            rb_bandwidth: 1.8e6,
            sbs_power: dbm_to_watts(30.0),
            user_power: dbm_to_watts(20.0),
            min_distance: 1.0,
        }
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// `g · max(d, d_min)^(-β)`.
pub fn path_gain(distance: f64, fading: f64, beta: f64, min_distance: f64) -> f64 {
    fading * distance.max(min_distance).powf(-beta)
}

/// Unit-mean exponential fading power (Rayleigh amplitude).
pub fn draw_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let g: f64 = rng.sample(Exp1);
    // Exp1 can return exactly 0 with negligible probability; gains must stay positive.
    g.max(f64::MIN_POSITIVE)
}

/// Fading and path gains of one slot for every (user, SBS, block) triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub radio: RadioParams,
    num_users: usize,
    num_sbs: usize,
    num_dl: usize,
    num_ul: usize,
    /// Composite gain `h = g · d^-β`, indexed `(user * K + sbs) * S + rb`.
    downlink_gain: Vec<f64>,
    /// Indexed `(user * K + sbs) * V + rb`.
    uplink_gain: Vec<f64>,
    /// SBSs serving at least one user; idle SBSs neither transmit nor interfere.
    active: Vec<bool>,
}

impl ChannelRealization {
    /// Draw i.i.d. fading for every link and block of one slot.
    pub fn draw<R: Rng + ?Sized>(
        topology: &Topology,
        radio: RadioParams,
        num_dl: usize,
        num_ul: usize,
        rng: &mut R,
    ) -> Self {
        let (u_n, k_n) = (topology.num_users(), topology.num_sbs());
        let mut downlink_gain = Vec::with_capacity(u_n * k_n * num_dl);
        let mut uplink_gain = Vec::with_capacity(u_n * k_n * num_ul);
        for u in 0..u_n {
            for j in 0..k_n {
                let pl = path_gain(
                    topology.distance(u, j),
                    1.0,
                    radio.pathloss_exponent,
                    radio.min_distance,
                );
                for _ in 0..num_dl {
                    downlink_gain.push(draw_fading(rng) * pl);
                }
                for _ in 0..num_ul {
                    uplink_gain.push(draw_fading(rng) * pl);
                }
            }
        }
        let mut active = vec![false; k_n];
        for &j in &topology.association {
            active[j] = true;
        }
        ChannelRealization {
            radio,
            num_users: u_n,
            num_sbs: k_n,
            num_dl,
            num_ul,
            downlink_gain,
            uplink_gain,
            active,
        }
    }

    /// Build a realization from explicit fading values (`fading[user][sbs][rb]`).
    pub fn from_fading(
        topology: &Topology,
        radio: RadioParams,
        downlink_fading: &[Vec<Vec<f64>>],
        uplink_fading: &[Vec<Vec<f64>>],
    ) -> Self {
        let (u_n, k_n) = (topology.num_users(), topology.num_sbs());
        let num_dl = downlink_fading[0][0].len();
        let num_ul = uplink_fading[0][0].len();
        let mut downlink_gain = Vec::new();
        let mut uplink_gain = Vec::new();
        for u in 0..u_n {
            for j in 0..k_n {
                let d = topology.distance(u, j);
                let beta = radio.pathloss_exponent;
                downlink_gain.extend(
                    downlink_fading[u][j]
                        .iter()
                        .map(|&g| path_gain(d, g, beta, radio.min_distance)),
                );
                uplink_gain.extend(
                    uplink_fading[u][j]
                        .iter()
                        .map(|&g| path_gain(d, g, beta, radio.min_distance)),
                );
            }
        }
        let mut active = vec![false; k_n];
        for &j in &topology.association {
            active[j] = true;
        }
        ChannelRealization {
            radio,
            num_users: u_n,
            num_sbs: k_n,
            num_dl,
            num_ul,
            downlink_gain,
            uplink_gain,
            active,
        }
    }

    pub fn num_downlink_rbs(&self) -> usize {
        self.num_dl
    }

    pub fn num_uplink_rbs(&self) -> usize {
        self.num_ul
    }

    pub fn is_active(&self, sbs: usize) -> bool {
        self.active[sbs]
    }

    pub fn downlink_gain(&self, user: usize, sbs: usize, rb: usize) -> f64 {
        self.downlink_gain[(user * self.num_sbs + sbs) * self.num_dl + rb]
    }

    pub fn uplink_gain(&self, user: usize, sbs: usize, rb: usize) -> f64 {
        self.uplink_gain[(user * self.num_sbs + sbs) * self.num_ul + rb]
    }

    /// Downlink SINR of `user` served by `sbs` on block `rb`.
    pub fn sinr_downlink(&self, user: usize, sbs: usize, rb: usize) -> f64 {
        debug_assert!(user < self.num_users && rb < self.num_dl);
        let p = self.radio.sbs_power;
        let interference: f64 = (0..self.num_sbs)
            .filter(|&l| l != sbs && self.active[l])
            .map(|l| p * self.downlink_gain(user, l, rb))
            .sum();
        p * self.downlink_gain(user, sbs, rb) / (self.radio.noise_power + interference)
    }

    /// Uplink SINR at `sbs` of `user` on block `rb`, given the users of other
    /// SBSs that transmit on the same block.
    pub fn sinr_uplink(&self, user: usize, sbs: usize, rb: usize, co_channel: &[usize]) -> f64 {
        let p = self.radio.user_power;
        let interference: f64 = co_channel
            .iter()
            .filter(|&&u| u != user)
            .map(|&u| p * self.uplink_gain(u, sbs, rb))
            .sum();
        p * self.uplink_gain(user, sbs, rb) / (self.radio.noise_power + interference)
    }
}

/// Shannon rate of one block, bits/s.
#[inline]
pub fn rb_rate(bandwidth: f64, sinr: f64) -> f64 {
    bandwidth * (1.0 + sinr).log2()
}

/// `Σ_k s_k · B · log2(1 + γ_k)`.
pub fn rate(alloc_row: &[bool], sinrs: &[f64], bandwidth: f64) -> f64 {
    assert_eq!(
        alloc_row.len(),
        sinrs.len(),
        "allocation and SINR lengths differ"
    );
    alloc_row
        .iter()
        .zip(sinrs)
        .filter(|(&s, _)| s)
        .map(|(_, &g)| rb_rate(bandwidth, g))
        .sum()
}

/// Per-user share of the cloud backhaul, `V^B / U`.
pub fn backhaul_rate(total_backhaul: f64, num_users: usize) -> Result<f64> {
    if num_users == 0 {
        return Err(Error::config(
            "num_users",
            "backhaul share needs at least one user",
        ));
    }
    Ok(total_backhaul / num_users as f64)
}

/// One SBS's resource-block assignment.
///
/// Each downlink and uplink block is owned by exactly one of the SBS's users,
/// so the binary matrices `s` and `v` have a single 1 per column by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Allocation {
    /// Local user slot that owns each downlink block.
    pub downlink: Vec<usize>,
    /// Local user slot that owns each uplink block.
    pub uplink: Vec<usize>,
    /// Number of users the SBS serves.
    pub num_users: usize,
}

impl Allocation {
    pub fn new(num_users: usize, downlink: Vec<usize>, uplink: Vec<usize>) -> Result<Self> {
        let a = Allocation {
            downlink,
            uplink,
            num_users,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_users == 0 {
            return Err(Error::contract("allocation over zero users"));
        }
        if let Some(&u) = self
            .downlink
            .iter()
            .chain(&self.uplink)
            .find(|&&u| u >= self.num_users)
        {
            return Err(Error::contract(format!(
                "block assigned to user slot {u} of {}",
                self.num_users
            )));
        }
        Ok(())
    }

    /// Downlink row `s_i` of local user `local`.
    pub fn s_row(&self, local: usize) -> Vec<bool> {
        self.downlink.iter().map(|&u| u == local).collect()
    }

    /// Uplink row `v_i` of local user `local`.
    pub fn v_row(&self, local: usize) -> Vec<bool> {
        self.uplink.iter().map(|&u| u == local).collect()
    }

    /// Binary matrix `users × S`.
    pub fn s_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.num_users).map(|i| self.s_row(i)).collect()
    }

    /// Binary matrix `users × V`.
    pub fn v_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.num_users).map(|i| self.v_row(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Point;
    use rand::SeedableRng;

    fn radio() -> RadioParams {
        RadioParams {
            pathloss_exponent: 2.0,
            noise_power: 1e-3,
            rb_bandwidth: 1.8e6,
            sbs_power: 1.0,
            user_power: 0.1,
            min_distance: 1.0,
        }
    }

    #[test]
    fn path_gain_cases() {
        assert_eq!(path_gain(1.0, 1.0, 2.0, 1.0), 1.0);
        assert!((path_gain(10.0, 1.0, 2.0, 1.0) - 0.01).abs() < 1e-15);
        assert_eq!(path_gain(0.05, 1.0, 2.0, 1.0), 1.0);
        assert_eq!(path_gain(0.0, 1.0, 2.0, 1.0), 1.0);
    }

    fn unit_fading(u: usize, k: usize, rbs: usize) -> Vec<Vec<Vec<f64>>> {
        vec![vec![vec![1.0; rbs]; k]; u]
    }

    #[test]
    fn single_sbs_has_no_interference() {
        let topo = Topology::from_positions(
            vec![Point::new(0.0, 0.0)],
            vec![Point::new(10.0, 0.0)],
            500.0,
        );
        let ch = ChannelRealization::from_fading(
            &topo,
            radio(),
            &unit_fading(1, 1, 2),
            &unit_fading(1, 1, 2),
        );
        let h = 0.01;
        assert!((ch.sinr_downlink(0, 0, 0) - 1.0 * h / 1e-3).abs() < 1e-9);
        assert!((ch.sinr_uplink(0, 0, 1, &[]) - 0.1 * h / 1e-3).abs() < 1e-9);
    }

    #[test]
    fn symmetric_interferer() {
        // user midway between two SBSs, each with a user of its own
        let topo = Topology::from_positions(
            vec![Point::new(-10.0, 0.0), Point::new(10.0, 0.0)],
            vec![Point::new(-0.0, 0.0), Point::new(20.0, 0.0)],
            500.0,
        );
        let ch = ChannelRealization::from_fading(
            &topo,
            radio(),
            &unit_fading(2, 2, 1),
            &unit_fading(2, 2, 1),
        );
        let ph = 1.0 * 0.01;
        let expected = ph / (1e-3 + ph);
        assert!((ch.sinr_downlink(0, 0, 0) - expected).abs() < 1e-12);
        assert!(ch.sinr_downlink(0, 0, 0) < 1.0);
    }

    #[test]
    fn vanishing_interferer_recovers_snr() {
        let topo = Topology::from_positions(
            vec![Point::new(0.0, 0.0), Point::new(1e6, 0.0)],
            vec![Point::new(10.0, 0.0), Point::new(1e6 + 1.0, 0.0)],
            2e6,
        );
        let ch = ChannelRealization::from_fading(
            &topo,
            radio(),
            &unit_fading(2, 2, 1),
            &unit_fading(2, 2, 1),
        );
        let snr = 0.01 / 1e-3;
        assert!((ch.sinr_downlink(0, 0, 0) - snr).abs() / snr < 1e-6);
    }

    #[test]
    fn uplink_equal_co_channel_user() {
        let mut r = radio();
        r.noise_power = 1e-15;
        let topo = Topology::from_positions(
            vec![Point::new(0.0, 0.0), Point::new(100.0, 0.0)],
            vec![Point::new(0.0, 10.0), Point::new(0.0, -10.0)],
            500.0,
        );
        // both users 10 m from SBS 0; user 1 is treated as a co-channel user of another SBS
        let ch =
            ChannelRealization::from_fading(&topo, r, &unit_fading(2, 2, 1), &unit_fading(2, 2, 1));
        let alone = ch.sinr_uplink(0, 0, 0, &[]);
        let shared = ch.sinr_uplink(0, 0, 0, &[1]);
        assert!((shared - 1.0).abs() < 1e-9);
        assert!(alone > 1e9);
    }

    #[test]
    fn rate_cases() {
        assert_eq!(rate(&[false; 5], &[3.0; 5], 1.8e6), 0.0);
        let one = rate(&[true, false], &[3.0, 3.0], 1.8e6);
        assert!((one - 3.6e6).abs() < 1e-6);
        let two = rate(&[true, true], &[3.0, 3.0], 1.8e6);
        assert_eq!(two, 2.0 * one);
    }

    #[test]
    fn backhaul_share() {
        assert!((backhaul_rate(10e9, 25).unwrap() - 0.4e9).abs() < 1e-3);
        assert_eq!(backhaul_rate(7.0, 1).unwrap(), 7.0);
        assert_eq!(
            backhaul_rate(8.0, 4).unwrap(),
            2.0 * backhaul_rate(8.0, 8).unwrap()
        );
        assert!(backhaul_rate(1.0, 0).is_err());
    }

    #[test]
    fn fading_has_unit_mean() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| draw_fading(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn allocation_rows() {
        let a = Allocation::new(2, vec![0, 1, 1], vec![1, 1]).unwrap();
        assert_eq!(a.s_row(1), vec![false, true, true]);
        assert_eq!(a.v_row(0), vec![false, false]);
        for col in 0..3 {
            assert_eq!(a.s_matrix().iter().filter(|r| r[col]).count(), 1);
        }
        assert!(Allocation::new(2, vec![2], vec![0]).is_err());
    }

    #[test]
    fn dbm_conversion() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-12);
        assert!((dbm_to_watts(20.0) - 0.1).abs() < 1e-12);
    }
}
