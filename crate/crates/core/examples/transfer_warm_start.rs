//! A synthetic task whose per-action utilities drift by a fixed amount every
//! period. The echo-state learner folds the learned drift into its readout
//! at the boundary; tabular Q-learning starts each period from scratch.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vrnetsim::channel::Allocation;
use vrnetsim::learning::{
    argmax, convergence_iteration, select_action, EsnAgent, EsnParams, QAgent,
};

const X: [f64; 3] = [0.2, 0.7, 0.5];
const ITERS: usize = 400;

fn utilities(period: usize) -> Vec<f64> {
    let base = [0.2, 0.4, 0.3, 0.1, 0.5, 0.35, 0.25, 0.45];
    let drift = [0.1, -0.1, 0.0, 0.05, -0.2, 0.2, 0.0, 0.3];
    base.iter()
        .zip(drift)
        .map(|(b, d)| b + (period - 1) as f64 * d)
        .collect()
}

fn main() {
    let table: Vec<Allocation> = (0..8)
        .map(|k| Allocation::new(8, vec![k], vec![k]).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut esn = EsnAgent::new(EsnParams::default(), X.len(), table.clone(), &mut rng);
    let mut q = QAgent::new(0.3, table);

    println!("period  best  esn start  esn conv  q conv");
    for period in 1..=4 {
        let u = utilities(period);
        if period > 1 {
            esn.begin_period();
            esn.transfer_warm_start(period, &X).unwrap();
        }
        let state = format!("n={period}");
        let start = argmax(&esn.predict(&X));
        let (mut esn_trace, mut q_trace) = (Vec::new(), Vec::new());
        for _ in 0..ITERS {
            let y = esn.predict(&X);
            esn_trace.push(u[argmax(&y)]);
            let k = select_action(&y, 0.1, &mut rng);
            esn.update_state(&X);
            esn.train_utility(k, u[k], &X);
            if period > 1 {
                if let Some(before) = esn.previous_utility(k) {
                    esn.train_delta(k, u[k], before, &X, period).unwrap();
                }
            }

            q_trace.push(u[q.greedy(&state)]);
            let k = select_action(&q.values(&state), 0.1, &mut rng);
            q.update(&state, k, u[k]);
        }
        println!(
            "{period:6}  {:4}  {start:9}  {:8}  {:6}",
            argmax(&u),
            convergence_iteration(&esn_trace, 100, 0.01),
            convergence_iteration(&q_trace, 100, 0.01)
        );
    }
}
