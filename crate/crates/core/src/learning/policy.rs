use rand::Rng;
use serde::{Deserialize, Serialize};

/// Index of the largest value; the lowest index wins ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// ε-greedy: the argmax with probability `1 - ε`, a uniform index otherwise.
pub fn select_action<R: Rng + ?Sized>(predicted: &[f64], epsilon: f64, rng: &mut R) -> usize {
    assert!(!predicted.is_empty(), "no actions to select from");
    if epsilon > 0.0 && rng.random::<f64>() < epsilon {
        rng.random_range(0..predicted.len())
    } else {
        argmax(predicted)
    }
}

/// Exploration rate, optionally decaying per iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exploration {
    pub epsilon: f64,
    /// Multiplier applied per iteration (1.0 keeps ε fixed).
    pub decay: f64,
    pub floor: f64,
}

impl Exploration {
    pub fn fixed(epsilon: f64) -> Self {
        Exploration {
            epsilon,
            decay: 1.0,
            floor: 0.0,
        }
    }

    /// ε at iteration `t` (0-based) of a period.
    pub fn at(&self, t: usize) -> f64 {
        (self.epsilon * self.decay.powi(t as i32)).max(self.floor.min(self.epsilon))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn greedy_when_epsilon_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let y = [0.1, 0.7, 0.3];
        for _ in 0..100 {
            assert_eq!(select_action(&y, 0.0, &mut rng), 1);
        }
    }

    #[test]
    fn ties_go_low() {
        assert_eq!(argmax(&[0.2, 0.9, 0.9, 0.1]), 1);
        assert_eq!(argmax(&[0.0; 6]), 0);
    }

    #[test]
    fn uniform_when_epsilon_one() {
        // chi-square goodness of fit over 10^4 draws, 8 actions (7 dof, 0.1% critical value 24.32)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let y = [5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let mut counts = [0usize; 8];
        let n = 10_000;
        for _ in 0..n {
            counts[select_action(&y, 1.0, &mut rng)] += 1;
        }
        let expected = n as f64 / 8.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 24.32, "chi2 = {chi2}, counts {counts:?}");
    }

    #[test]
    fn decaying_exploration() {
        let e = Exploration {
            epsilon: 0.4,
            decay: 0.5,
            floor: 0.05,
        };
        assert_eq!(e.at(0), 0.4);
        assert_eq!(e.at(1), 0.2);
        assert_eq!(e.at(10), 0.05);
        assert_eq!(Exploration::fixed(0.1).at(500), 0.1);
    }
}
