//! Echo-state learner on its own: fading memory of the reservoir and online
//! training of the utility readout under both learning-rate schedules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vrnetsim::channel::Allocation;
use vrnetsim::learning::{EsnAgent, EsnParams, LearningRate};

fn agent(params: EsnParams, actions: usize, seed: u64) -> EsnAgent {
    let table = (0..actions)
        .map(|k| Allocation::new(actions, vec![k], vec![k]).unwrap())
        .collect();
    EsnAgent::new(params, 4, table, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let params = EsnParams {
        recurrent_weight: 0.5,
        ..EsnParams::default()
    };
    let mut a = agent(params, 1, 7);
    let mut b = agent(params, 1, 7);
    a.state = (0..params.neurons)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    b.state = (0..params.neurons)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    println!("state distance of two reservoirs fed the same inputs (w = 0.5):");
    for t in 0..=20 {
        if t % 4 == 0 {
            let d: f64 = a
                .state
                .iter()
                .zip(&b.state)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
            println!("  step {t:2}: {d:.3e}");
        }
        let x: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        a.update_state(&x);
        b.update_state(&x);
    }

    let targets = [0.9, 2.4, 1.1, 3.7, 0.2, 4.5, 2.0, 3.1];
    let x = [0.3, 0.6, 0.1, 0.8];
    for (label, rate) in [
        ("constant 0.3", LearningRate::constant(0.3)),
        (
            "0.3 / (1 + t/100)",
            LearningRate::RobbinsMonro {
                initial: 0.3,
                tau: 100.0,
            },
        ),
    ] {
        let mut esn = agent(
            EsnParams {
                utility_rate: rate,
                ..EsnParams::default()
            },
            8,
            3,
        );
        println!("\nreadout training, rate {label}:");
        for u in 1..=2000 {
            esn.update_state(&x);
            let k = (u - 1) % 8;
            esn.train_utility(k, targets[k], &x);
            if u % 400 == 0 {
                let err = esn
                    .predict(&x)
                    .iter()
                    .zip(&targets)
                    .map(|(p, t)| (p - t).abs())
                    .fold(0.0, f64::max);
                println!("  after {u:4} updates: worst error {err:.2e}");
            }
        }
    }
}
