//! Random network layout and nearest-SBS association.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// SBS and user positions inside a deployment disc, plus the user→SBS map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub sbs_positions: Vec<Point>,
    pub user_positions: Vec<Point>,
    /// Radius of the deployment disc, meters.
    pub area_radius: f64,
    /// `association[i]` is the SBS serving user `i`.
    pub association: Vec<usize>,
}

/// Uniform point on the disc of the given radius (inverse-CDF on the radius).
fn sample_disc<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Point {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Point::new(r * theta.cos(), r * theta.sin())
}

/// Place `num_sbs` SBSs and `num_users` users i.i.d. uniformly on a disc and
/// associate every user with its nearest SBS.
pub fn generate_topology(
    num_sbs: usize,
    num_users: usize,
    area_radius: f64,
    seed: u64,
) -> Result<Topology> {
    if num_sbs == 0 {
        return Err(Error::config("num_sbs", "must be at least 1"));
    }
    if num_users == 0 {
        return Err(Error::config("num_users", "must be at least 1"));
    }
    if !(area_radius > 0.0 && area_radius.is_finite()) {
        return Err(Error::config("area_radius", "must be positive and finite"));
    }
    let mut rng = rng::fork(seed, rng::TOPOLOGY, 0);
    let sbs_positions: Vec<Point> = (0..num_sbs)
        .map(|_| sample_disc(&mut rng, area_radius))
        .collect();
    let user_positions: Vec<Point> = (0..num_users)
        .map(|_| sample_disc(&mut rng, area_radius))
        .collect();
    Ok(Topology::from_positions(
        sbs_positions,
        user_positions,
        area_radius,
    ))
}

impl Topology {
    /// Build a topology from explicit positions; association is computed.
    pub fn from_positions(
        sbs_positions: Vec<Point>,
        user_positions: Vec<Point>,
        area_radius: f64,
    ) -> Self {
        let mut topo = Topology {
            sbs_positions,
            user_positions,
            area_radius,
            association: Vec::new(),
        };
        topo.association = associate(&topo);
        topo
    }

    pub fn num_sbs(&self) -> usize {
        self.sbs_positions.len()
    }

    pub fn num_users(&self) -> usize {
        self.user_positions.len()
    }

    /// Distance between user `user` and SBS `sbs`, meters.
    pub fn distance(&self, user: usize, sbs: usize) -> f64 {
        self.user_positions[user].distance(&self.sbs_positions[sbs])
    }

    /// Distance between two users, meters.
    pub fn user_distance(&self, a: usize, b: usize) -> f64 {
        self.user_positions[a].distance(&self.user_positions[b])
    }

    /// Users served by `sbs`, in ascending global index order.
    pub fn users_of(&self, sbs: usize) -> Vec<usize> {
        self.association
            .iter()
            .enumerate()
            .filter_map(|(u, &j)| (j == sbs).then_some(u))
            .collect()
    }

    /// `users_of` for every SBS.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.num_sbs()];
        for (u, &j) in self.association.iter().enumerate() {
            parts[j].push(u);
        }
        parts
    }
}

/// Nearest-SBS association; ties go to the lowest SBS index. Users outside
/// every SBS's coverage radius still attach to the nearest one.
pub fn associate(topology: &Topology) -> Vec<usize> {
    topology
        .user_positions
        .iter()
        .map(|u| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (j, s) in topology.sbs_positions.iter().enumerate() {
                let d = u.distance(s);
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
            best
        })
        .collect()
}
