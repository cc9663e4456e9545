//! Echo state network with a utility readout and a cross-period delta readout.
//!
//! The reservoir is a single cycle: neuron `n` feeds neuron `n + 1` with a
//! constant weight `w`, so the recurrent matrix is a scaled cyclic
//! permutation with spectral radius `w`. Input weights are fixed at
//! construction. Both readouts map `[μ; x]` to one value per action and are
//! trained one row at a time by a delta rule on the state part.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::Allocation;
use crate::error::{Error, Result};

/// Learning-rate schedule of a readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearningRate {
    Constant {
        rate: f64,
    },
    /// `λ0 / (1 + t / τ)`: positive, not summable, square-summable.
    RobbinsMonro {
        initial: f64,
        tau: f64,
    },
}

impl LearningRate {
    pub fn constant(rate: f64) -> Self {
        LearningRate::Constant { rate }
    }

    /// Rate for the `t`-th update (0-based) of a row.
    pub fn at(&self, t: u64) -> f64 {
        match *self {
            LearningRate::Constant { rate } => rate,
            LearningRate::RobbinsMonro { initial, tau } => initial / (1.0 + t as f64 / tau),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsnParams {
    pub neurons: usize,
    /// Weight on the reservoir cycle, in `[0, 1]`.
    pub recurrent_weight: f64,
    /// Input weights are drawn uniformly from `[-input_scale, input_scale]`.
    pub input_scale: f64,
    pub utility_rate: LearningRate,
    pub delta_rate: LearningRate,
}

impl Default for EsnParams {
    fn default() -> Self {
        EsnParams {
            neurons: 100,
            recurrent_weight: 0.9,
            input_scale: 0.12,
            utility_rate: LearningRate::constant(0.3),
            delta_rate: LearningRate::constant(0.03),
        }
    }
}

/// Row-major `rows × cols` weight matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Readout {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Readout {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Readout {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `row_r · [state; input]`.
    pub fn apply_row(&self, r: usize, state: &[f64], input: &[f64]) -> f64 {
        let row = self.row(r);
        let (ws, wx) = row.split_at(state.len());
        dot(ws, state) + dot(wx, input)
    }

    /// Full product `W · [state; input]`.
    pub fn apply(&self, state: &[f64], input: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| self.apply_row(r, state, input))
            .collect()
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators let the compiler vectorize the loop
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for l in 0..4 {
            acc[l] += a[4 * c + l] * b[4 * c + l];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

/// Scale strategy indices and the period into `[0, 1]`:
/// `π_k / (N_k - 1)` for 0-based indices and `n / N`.
pub fn build_input(
    strategy: &[usize],
    table_sizes: &[usize],
    period: usize,
    num_periods: usize,
) -> Vec<f64> {
    debug_assert_eq!(strategy.len(), table_sizes.len());
    let mut x: Vec<f64> = strategy
        .iter()
        .zip(table_sizes)
        .map(|(&pi, &n)| {
            if n > 1 {
                pi as f64 / (n - 1) as f64
            } else {
                0.0
            }
        })
        .collect();
    x.push(if num_periods > 0 {
        period as f64 / num_periods as f64
    } else {
        0.0
    });
    x
}

/// One SBS's echo-state transfer learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsnAgent {
    pub params: EsnParams,
    pub num_inputs: usize,
    /// `N_w × num_inputs`, row-major.
    pub w_in: Vec<f64>,
    pub state: Vec<f64>,
    /// Utility readout, one row per action.
    pub w_out: Readout,
    /// Cross-period utility-change readout.
    pub w_out_delta: Readout,
    pub actions: Vec<Allocation>,
    utility_updates: Vec<u64>,
    delta_updates: Vec<u64>,
    /// Last realized utility of each action in the previous period.
    previous_period: Vec<Option<f64>>,
    /// Last realized utility of each action in the current period.
    current_period: Vec<Option<f64>>,
}

impl EsnAgent {
    pub fn new<R: Rng + ?Sized>(
        params: EsnParams,
        num_inputs: usize,
        actions: Vec<Allocation>,
        rng: &mut R,
    ) -> Self {
        let n = params.neurons;
        let s = params.input_scale;
        let w_in = (0..n * num_inputs)
            .map(|_| {
                if s > 0.0 {
                    rng.random_range(-s..=s)
                } else {
                    0.0
                }
            })
            .collect();
        let na = actions.len();
        let cols = n + num_inputs;
        EsnAgent {
            params,
            num_inputs,
            w_in,
            state: vec![0.0; n],
            w_out: Readout::zeros(na, cols),
            w_out_delta: Readout::zeros(na, cols),
            actions,
            utility_updates: vec![0; na],
            delta_updates: vec![0; na],
            previous_period: vec![None; na],
            current_period: vec![None; na],
        }
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// Dense recurrent matrix (for inspection; updates use the cycle directly).
    pub fn recurrent_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.params.neurons;
        let mut m = vec![vec![0.0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[(i + n - 1) % n] = self.params.recurrent_weight;
        }
        m
    }

    /// `μ(t) = tanh(W μ(t-1) + W_in x(t))`.
    pub fn update_state(&mut self, input: &[f64]) -> &[f64] {
        assert_eq!(input.len(), self.num_inputs, "input dimension");
        let n = self.params.neurons;
        let w = self.params.recurrent_weight;
        let prev = std::mem::take(&mut self.state);
        self.state = (0..n)
            .map(|i| {
                let rec = if n > 0 {
                    w * prev[(i + n - 1) % n]
                } else {
                    0.0
                };
                let row = &self.w_in[i * self.num_inputs..(i + 1) * self.num_inputs];
                (rec + dot(row, input)).tanh()
            })
            .collect();
        &self.state
    }

    /// Predicted utility of every action, `W_out [μ; x]`.
    pub fn predict(&self, input: &[f64]) -> Vec<f64> {
        self.w_out.apply(&self.state, input)
    }

    /// Predicted cross-period utility change of every action.
    pub fn predict_delta(&self, input: &[f64]) -> Vec<f64> {
        self.w_out_delta.apply(&self.state, input)
    }

    /// Delta-rule step on row `action` of the utility readout toward
    /// `realized`. Only the state-aligned columns move. Returns the
    /// prediction error before the step.
    pub fn train_utility(&mut self, action: usize, realized: f64, input: &[f64]) -> f64 {
        let err = realized - self.w_out.apply_row(action, &self.state, input);
        let rate = self.params.utility_rate.at(self.utility_updates[action]);
        self.utility_updates[action] += 1;
        let n = self.params.neurons;
        let step = rate * err;
        for (w, &m) in self.w_out.row_mut(action)[..n].iter_mut().zip(&self.state) {
            *w += step * m;
        }
        self.current_period[action] = Some(realized);
        err
    }

    /// Delta-rule step on row `action` of the delta readout toward
    /// `utility_now - utility_before`. Only valid after the first period.
    pub fn train_delta(
        &mut self,
        action: usize,
        utility_now: f64,
        utility_before: f64,
        input: &[f64],
        period: usize,
    ) -> Result<f64> {
        if period <= 1 {
            return Err(Error::contract(
                "delta readout is trained from the second period on",
            ));
        }
        let target = utility_now - utility_before;
        let err = target - self.w_out_delta.apply_row(action, &self.state, input);
        let rate = self.params.delta_rate.at(self.delta_updates[action]);
        self.delta_updates[action] += 1;
        let n = self.params.neurons;
        let step = rate * err;
        for (w, &m) in self.w_out_delta.row_mut(action)[..n]
            .iter_mut()
            .zip(&self.state)
        {
            *w += step * m;
        }
        Ok(err)
    }

    /// Utility of `action` realized in the previous period, if it was played.
    pub fn previous_utility(&self, action: usize) -> Option<f64> {
        self.previous_period[action]
    }

    /// Roll the per-action utility memory over to a new period.
    pub fn begin_period(&mut self) {
        for (prev, cur) in self
            .previous_period
            .iter_mut()
            .zip(&mut self.current_period)
        {
            if let Some(v) = cur.take() {
                *prev = Some(v);
            } else {
                *prev = None;
            }
        }
    }

    /// Fold the learned cross-period change into the utility readout, so the
    /// new period starts from `y + y'`. The delta readout is consumed and
    /// starts the new period at zero; the reservoir state is kept.
    /// Returns the warm-started predictions for `input`.
    pub fn transfer_warm_start(&mut self, period: usize, input: &[f64]) -> Result<Vec<f64>> {
        if period <= 1 {
            return Err(Error::contract("transfer needs a previous period"));
        }
        for (w, d) in self.w_out.data.iter_mut().zip(&mut self.w_out_delta.data) {
            *w += *d;
            *d = 0.0;
        }
        Ok(self.predict(input))
    }
}
