//! Uplink tracking-data correlation and downlink visible-content overlap.
//!
//! Uplink: tracking variables are Gaussian with a power-exponential spatial
//! covariance; the largest covariance against co-associated peers sets the
//! size of the tracking payload.
//!
//! Downlink: a visible content is one arc of the 360° panorama (yaw only).
//! The n-way overlap coefficient of a group of users is the measure of the
//! common intersection of their arcs divided by the arc width, and the
//! backhaul payload of shipping visible contents is the inclusion–exclusion
//! sum over all such coefficients, which equals the measure of the arc union.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::Topology;

/// Degrees in a full turn.
pub const FULL_TURN: f64 = 360.0;

/// Largest group handled by explicit subset enumeration in the simulator;
/// larger groups use the closed-form arc union (same value).
pub const ENUMERATION_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserTrackingModel {
    /// Standard deviation of the tracking variable.
    pub sigma: f64,
    /// Mean of the tracking variable; not used by the delay model.
    pub mu: f64,
    pub alpha: f64,
    pub kappa: f64,
}

impl UserTrackingModel {
    pub fn new(sigma: f64, mu: f64, alpha: f64, kappa: f64) -> Result<Self> {
        for (key, v) in [
            ("tracking_sigma", sigma),
            ("alpha", alpha),
            ("kappa", kappa),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(key, "must be positive"));
            }
        }
        Ok(UserTrackingModel {
            sigma,
            mu,
            alpha,
            kappa,
        })
    }
}

/// `σ_i σ_j exp(-d^α / κ)`.
pub fn covariance(sigma_i: f64, sigma_j: f64, distance: f64, alpha: f64, kappa: f64) -> f64 {
    sigma_i * sigma_j * (-distance.powf(alpha) / kappa).exp()
}

/// Largest covariance between `user` and any other member of `co_associated`.
/// A user alone at its SBS gets 0.
pub fn sigma_max(
    user: usize,
    co_associated: &[usize],
    topology: &Topology,
    models: &[UserTrackingModel],
) -> f64 {
    let me = &models[user];
    co_associated
        .iter()
        .filter(|&&k| k != user)
        .map(|&k| {
            covariance(
                me.sigma,
                models[k].sigma,
                topology.user_distance(user, k),
                me.alpha,
                me.kappa,
            )
        })
        .fold(0.0, f64::max)
}

/// Linear-with-clamps tracking payload model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackingSize {
    /// Payload at zero peer covariance, bits.
    pub k_min: f64,
    /// Payload at or above `sigma_ref`, bits.
    pub k_max: f64,
    pub sigma_ref: f64,
}

/// `K_min + (K_max - K_min) · min(σ_max / σ_ref, 1)`.
pub fn tracking_data_size(sigma_max: f64, size: &TrackingSize) -> f64 {
    let frac = (sigma_max.max(0.0) / size.sigma_ref).min(1.0);
    size.k_min + (size.k_max - size.k_min) * frac
}

/// One user's request: which content and where the user is looking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViewState {
    pub content_id: usize,
    /// Yaw of the arc center, degrees in `[0, 360)`.
    pub view_center: f64,
    /// Arc width, degrees in `(0, 360]`.
    pub view_width: f64,
}

impl ViewState {
    pub fn new(content_id: usize, view_center: f64, view_width: f64) -> Self {
        debug_assert!(view_width > 0.0 && view_width <= FULL_TURN);
        ViewState {
            content_id,
            view_center: view_center.rem_euclid(FULL_TURN),
            view_width,
        }
    }

    /// View covering `[start, start + width]`.
    pub fn from_start(content_id: usize, start: f64, view_width: f64) -> Self {
        Self::new(content_id, start + view_width / 2.0, view_width)
    }

    /// Start of the arc, degrees in `[0, 360)`.
    pub fn start(&self) -> f64 {
        (self.view_center - self.view_width / 2.0).rem_euclid(FULL_TURN)
    }

    /// The arc as at most two disjoint intervals of `[0, 360]`.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        if self.view_width >= FULL_TURN {
            return vec![(0.0, FULL_TURN)];
        }
        let s = self.start();
        let e = s + self.view_width;
        if e <= FULL_TURN {
            vec![(s, e)]
        } else {
            vec![(0.0, e - FULL_TURN), (s, FULL_TURN)]
        }
    }

    /// Whether the yaw `deg` falls on the arc (closed).
    pub fn contains(&self, deg: f64) -> bool {
        let off = (deg - self.start()).rem_euclid(FULL_TURN);
        off <= self.view_width
    }
}

fn intersect(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a0, a1) in a {
        for &(b0, b1) in b {
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                out.push((lo, hi));
            }
        }
    }
    out
}

fn measure(iv: &[(f64, f64)]) -> f64 {
    iv.iter().map(|(lo, hi)| hi - lo).sum()
}

/// Measure, in degrees, of the common intersection of all arcs.
pub fn intersection_measure(views: &[ViewState]) -> f64 {
    let Some(first) = views.first() else {
        return 0.0;
    };
    let mut acc = first.intervals();
    for v in &views[1..] {
        acc = intersect(&acc, &v.intervals());
        if acc.is_empty() {
            return 0.0;
        }
    }
    measure(&acc)
}

/// Measure, in degrees, of the union of all arcs (sweep over sorted intervals).
pub fn arc_union_measure(views: &[ViewState]) -> f64 {
    let mut iv: Vec<(f64, f64)> = views.iter().flat_map(|v| v.intervals()).collect();
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (lo, hi) in iv {
        match cur {
            Some((clo, chi)) if lo <= chi => cur = Some((clo, chi.max(hi))),
            Some((clo, chi)) => {
                total += chi - clo;
                cur = Some((lo, hi));
            }
            None => cur = Some((lo, hi)),
        }
    }
    if let Some((clo, chi)) = cur {
        total += chi - clo;
    }
    total
}

/// One n-way overlap coefficient and the users it covers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    /// Bit `i` set when the i-th view of the group belongs to the subset.
    pub members: u64,
    pub coefficient: f64,
}

/// All n-way overlap coefficients of one content's requester group,
/// `orders[n - 2]` holding the subsets of size `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSets {
    pub num_users: usize,
    pub orders: Vec<Vec<Overlap>>,
}

impl CorrelationSets {
    /// Coefficients of order `n` (n ≥ 2).
    pub fn order(&self, n: usize) -> &[Overlap] {
        &self.orders[n - 2]
    }

    /// Pairwise coefficient between group members `a` and `b`.
    pub fn pair(&self, a: usize, b: usize) -> Option<f64> {
        let mask = (1u64 << a) | (1u64 << b);
        self.orders
            .first()?
            .iter()
            .find(|o| o.members == mask)
            .map(|o| o.coefficient)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Every n-way overlap coefficient (n ≥ 2) among the views of one content.
///
/// All views must share the same arc width; coefficients are normalized by it.
/// Groups larger than 63 users are not representable.
pub fn overlap_sets(views: &[ViewState]) -> CorrelationSets {
    let n = views.len();
    assert!(n < 64, "group of {n} views exceeds the subset mask");
    let width = views.first().map_or(1.0, |v| v.view_width);
    debug_assert!(views.iter().all(|v| v.view_width == width));
    debug_assert!(views.iter().all(|v| v.content_id == views[0].content_id));

    let mut orders: Vec<Vec<Overlap>> = (2..=n.max(1)).map(|_| Vec::new()).collect();
    if n < 2 {
        return CorrelationSets {
            num_users: n,
            orders: Vec::new(),
        };
    }
    let arcs: Vec<Vec<(f64, f64)>> = views.iter().map(ViewState::intervals).collect();

    // depth-first over subsets in lexicographic order, carrying the running intersection
    fn walk(
        arcs: &[Vec<(f64, f64)>],
        next: usize,
        mask: u64,
        size: usize,
        acc: &[(f64, f64)],
        width: f64,
        orders: &mut [Vec<Overlap>],
    ) {
        for i in next..arcs.len() {
            let inter = intersect(acc, &arcs[i]);
            let m = mask | (1u64 << i);
            if size + 1 >= 2 {
                let c = (measure(&inter) / width).clamp(0.0, 1.0);
                orders[size + 1 - 2].push(Overlap {
                    members: m,
                    coefficient: c,
                });
            }
            walk(arcs, i + 1, m, size + 1, &inter, width, orders);
        }
    }
    for i in 0..n {
        walk(&arcs, i + 1, 1u64 << i, 1, &arcs[i], width, &mut orders);
    }
    CorrelationSets {
        num_users: n,
        orders,
    }
}

/// Inclusion–exclusion payload of shipping the visible contents of a group:
/// `G_120 · (U - Σ_{n≥2} Σ_{C ∈ C^n} (-1)^(n-1) C)`.
pub fn visible_union_size(sets: &CorrelationSets, num_users: usize, g120: f64) -> Result<f64> {
    if num_users == 0 {
        return Err(Error::contract(
            "visible_union_size needs at least one user",
        ));
    }
    if num_users == 1 {
        return Ok(g120);
    }
    if sets.num_users != num_users || sets.orders.len() != num_users - 1 {
        return Err(Error::contract(format!(
            "correlation sets cover {} orders for a group of {num_users}",
            sets.orders.len()
        )));
    }
    let mut shared = 0.0;
    for (idx, order) in sets.orders.iter().enumerate() {
        let n = idx + 2;
        if order.len() != binomial(num_users, n) {
            return Err(Error::contract(format!(
                "order {n} has {} coefficients, expected {}",
                order.len(),
                binomial(num_users, n)
            )));
        }
        let sum: f64 = order.iter().map(|o| o.coefficient).sum();
        if n % 2 == 0 {
            shared += sum;
        } else {
            shared -= sum;
        }
    }
    Ok(g120 * (num_users as f64 - shared))
}

/// Visible-format payload of a requester group: inclusion–exclusion for
/// small groups, the closed-form arc union above [`ENUMERATION_LIMIT`].
pub fn visible_payload(views: &[ViewState], g120: f64) -> f64 {
    match views.len() {
        0 => 0.0,
        1 => g120,
        n if n <= ENUMERATION_LIMIT => {
            let sets = overlap_sets(views);
            visible_union_size(&sets, n, g120).expect("complete sets by construction")
        }
        _ => g120 * arc_union_measure(views) / views[0].view_width,
    }
}

/// Backhaul transmission format chosen by the cloud for one content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContentFormat {
    Visible120,
    Full360,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormatDecision {
    pub format: ContentFormat,
    /// Bits shipped over the backhaul, `min(G_360, L_a)`.
    pub payload: f64,
}

/// Visible contents whenever `G_360 ≥ L_a` (ties go visible), else the full
/// panorama.
pub fn choose_format(g360: f64, l_a: f64) -> FormatDecision {
    if g360 >= l_a {
        FormatDecision {
            format: ContentFormat::Visible120,
            payload: l_a,
        }
    } else {
        FormatDecision {
            format: ContentFormat::Full360,
            payload: g360,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Point;

    const G120: f64 = 12e6;

    #[test]
    fn covariance_cases() {
        assert_eq!(covariance(1.0, 1.0, 0.0, 2.0, 5.0), 1.0);
        assert!(covariance(1.0, 1.0, 1e6, 2.0, 5.0) < 1e-300);
        let c = covariance(1.0, 1.0, 5f64.sqrt(), 2.0, 5.0);
        assert!((c - (-1f64).exp()).abs() < 1e-12);
        assert!((c - 0.36788).abs() < 1e-5);
        assert_eq!(
            covariance(0.7, 1.3, 3.0, 2.0, 5.0).to_bits(),
            covariance(1.3, 0.7, 3.0, 2.0, 5.0).to_bits()
        );
    }

    fn models(n: usize) -> Vec<UserTrackingModel> {
        vec![UserTrackingModel::new(1.0, 0.0, 2.0, 5.0).unwrap(); n]
    }

    #[test]
    fn sigma_max_cases() {
        let s5 = 5f64.sqrt();
        let users = vec![
            Point::new(0.0, 0.0),
            Point::new(s5, 0.0),
            Point::new(0.0, 10.0 * s5),
            Point::new(0.0, 0.0),
        ];
        let topo = Topology::from_positions(vec![Point::new(0.0, 0.0)], users, 500.0);
        let m = models(4);
        assert_eq!(sigma_max(0, &[0], &topo, &m), 0.0);
        let v = sigma_max(0, &[0, 1, 2], &topo, &m);
        assert!((v - (-1f64).exp()).abs() < 1e-12);
        assert_eq!(sigma_max(0, &[0, 1, 2, 3], &topo, &m), 1.0);
    }

    #[test]
    fn tracking_size_clamps() {
        let ts = TrackingSize {
            k_min: 0.1e6,
            k_max: 1e6,
            sigma_ref: 1.0,
        };
        assert_eq!(tracking_data_size(0.0, &ts), 0.1e6);
        assert_eq!(tracking_data_size(1.0, &ts), 1e6);
        assert_eq!(tracking_data_size(3.0, &ts), 1e6);
        assert!((tracking_data_size(0.5, &ts) - 0.55e6).abs() < 1e-6);
    }

    #[test]
    fn overlap_examples() {
        let a = ViewState::from_start(0, 0.0, 120.0);
        let b = ViewState::from_start(0, 0.0, 120.0);
        assert_eq!(overlap_sets(&[a, b]).pair(0, 1), Some(1.0));
        let c = ViewState::from_start(0, 180.0, 120.0);
        assert_eq!(overlap_sets(&[a, c]).pair(0, 1), Some(0.0));
        let d = ViewState::from_start(0, 60.0, 120.0);
        assert!((overlap_sets(&[a, d]).pair(0, 1).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn wrapped_arcs_overlap() {
        let a = ViewState::from_start(0, 300.0, 120.0); // [300, 60]
        let b = ViewState::from_start(0, 0.0, 120.0);
        assert!((intersection_measure(&[a, b]) - 60.0).abs() < 1e-12);
        assert!((arc_union_measure(&[a, b]) - 180.0).abs() < 1e-12);
    }

    #[test]
    fn union_size_examples() {
        let a = ViewState::from_start(0, 0.0, 120.0);
        let d = ViewState::from_start(0, 60.0, 120.0);
        let sets = overlap_sets(&[a, d]);
        let l = visible_union_size(&sets, 2, G120).unwrap();
        assert!((l - 18e6).abs() < 1e-6);

        let same = [a; 4];
        let l = visible_union_size(&overlap_sets(&same), 4, G120).unwrap();
        assert!((l - G120).abs() < 1e-6);

        let disjoint = [
            ViewState::from_start(0, 0.0, 100.0),
            ViewState::from_start(0, 120.0, 100.0),
            ViewState::from_start(0, 240.0, 100.0),
        ];
        let l = visible_union_size(&overlap_sets(&disjoint), 3, G120).unwrap();
        assert!((l - 3.0 * G120).abs() < 1e-6);

        assert_eq!(
            visible_union_size(&overlap_sets(&[a]), 1, G120).unwrap(),
            G120
        );
    }

    #[test]
    fn incomplete_sets_rejected() {
        let views = [
            ViewState::new(0, 10.0, 120.0),
            ViewState::new(0, 50.0, 120.0),
            ViewState::new(0, 90.0, 120.0),
        ];
        let mut sets = overlap_sets(&views);
        sets.orders[0].pop();
        assert!(matches!(
            visible_union_size(&sets, 3, G120),
            Err(Error::Contract(_))
        ));
        assert!(visible_union_size(&overlap_sets(&views), 4, G120).is_err());
    }

    #[test]
    fn subset_counts() {
        let views: Vec<_> = (0..5)
            .map(|i| ViewState::new(0, 37.0 * i as f64, 120.0))
            .collect();
        let sets = overlap_sets(&views);
        let counts: Vec<usize> = sets.orders.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![10, 10, 5, 1]);
    }

    #[test]
    fn format_examples() {
        assert_eq!(choose_format(50e6, 36e6).format, ContentFormat::Visible120);
        assert_eq!(choose_format(50e6, 60e6).format, ContentFormat::Full360);
        assert_eq!(choose_format(50e6, 50e6).format, ContentFormat::Visible120);
        assert_eq!(choose_format(50e6, 60e6).payload, 50e6);
        assert_eq!(choose_format(50e6, 36e6).payload, 36e6);
    }

    #[test]
    fn contains_handles_wrap() {
        let v = ViewState::from_start(0, 300.0, 120.0);
        assert!(v.contains(330.0));
        assert!(v.contains(30.0));
        assert!(!v.contains(90.0));
    }
}
