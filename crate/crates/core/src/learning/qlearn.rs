use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::policy::argmax;
use crate::channel::Allocation;

/// `Q ← (1 - ζ) Q + ζ r`.
pub fn q_update(q: f64, reward: f64, zeta: f64) -> f64 {
    (1.0 - zeta) * q + zeta * reward
}

/// Tabular baseline. Rows are created on first visit; unseen values are 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QAgent {
    pub zeta: f64,
    pub actions: Vec<Allocation>,
    pub table: BTreeMap<String, Vec<f64>>,
}

impl QAgent {
    pub fn new(zeta: f64, actions: Vec<Allocation>) -> Self {
        assert!(zeta > 0.0 && zeta <= 1.0, "zeta must lie in (0, 1]");
        QAgent {
            zeta,
            actions,
            table: BTreeMap::new(),
        }
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn value(&self, state: &str, action: usize) -> f64 {
        self.table.get(state).map_or(0.0, |row| row[action])
    }

    /// Action values of `state`, zeros when the state was never visited.
    pub fn values(&self, state: &str) -> Vec<f64> {
        self.table
            .get(state)
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.actions.len()])
    }

    pub fn greedy(&self, state: &str) -> usize {
        self.table.get(state).map_or(0, |row| argmax(row))
    }

    pub fn update(&mut self, state: &str, action: usize, reward: f64) -> f64 {
        let n = self.actions.len();
        let row = self
            .table
            .entry(state.to_string())
            .or_insert_with(|| vec![0.0; n]);
        row[action] = q_update(row[action], reward, self.zeta);
        debug_assert!(row[action].is_finite());
        row[action]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agent(zeta: f64) -> QAgent {
        let a = Allocation {
            downlink: vec![0],
            uplink: vec![0],
            num_users: 1,
        };
        QAgent::new(zeta, vec![a.clone(), a.clone(), a])
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q_update(0.0, 1.0, 0.5), 0.5);
        assert_eq!(q_update(0.3, 2.0, 1.0), 2.0);
    }

    #[test]
    fn geometric_approach() {
        let mut q = agent(0.3);
        let mut gap_prev = 1.0;
        for _ in 0..20 {
            let v = q.update("s", 1, 1.0);
            let gap = 1.0 - v;
            assert!(gap < gap_prev);
            assert!((gap / gap_prev - 0.7).abs() < 1e-6);
            gap_prev = gap;
        }
    }

    #[test]
    fn unseen_is_zero_and_greedy_is_low() {
        let mut q = agent(0.5);
        assert_eq!(q.value("x", 2), 0.0);
        assert_eq!(q.greedy("x"), 0);
        q.update("x", 2, 1.0);
        assert_eq!(q.greedy("x"), 2);
        assert_eq!(q.values("x"), vec![0.0, 0.0, 0.5]);
        assert_eq!(q.greedy("y"), 0);
    }
}
