//! Kinetic Monte Carlo of the particle/hole jump chain on `B_0`.
//!
//! Every exchange fires at rate `kappa exp(-(H^0 + gamma H^1)/eps)` with a
//! single prefactor `kappa` taken from the zero-coupling `C_1` saddle.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::interface::{classify_b0_state, h0, h1_numer, move_type, InterfaceState, TransitionType};
use crate::hierarchy::families::to_f64;
use crate::rates::hessian::hessian_closed_forms;
use crate::simulate::seeded;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateModel {
    pub n: usize,
    pub gamma: f64,
    pub eps: f64,
    pub kappa: f64,
}

impl RateModel {
    pub fn new(n: usize, gamma: f64, eps: f64) -> Result<RateModel> {
        if n < 8 || n % 2 != 0 || n > 64 {
            return Err(Error::input(format!("jump chain needs even n in [8, 64], got {n}")));
        }
        if !(eps > 0.0) || !(gamma >= 0.0) || !eps.is_finite() || !gamma.is_finite() {
            return Err(Error::input("need eps > 0 and gamma >= 0"));
        }
        let cf = hessian_closed_forms(n / 2)?;
        let kappa = cf.lambda_minus.abs() / (2.0 * PI) * (cf.det_min / cf.det_saddle.abs()).sqrt();
        Ok(RateModel { n, gamma, eps, kappa })
    }

    pub fn height(&self, t: TransitionType, p: usize) -> Result<f64> {
        let m = (self.n / 2) as f64;
        let d4 = 4.0 * (m * m - 3.0 * m + 3.0);
        Ok(to_f64(&h0(self.n)?) + self.gamma * h1_numer(t, self.n, p)? as f64 / d4)
    }

    pub fn rate(&self, t: TransitionType, p: usize) -> Result<f64> {
        Ok(self.kappa * (-self.height(t, p)? / self.eps).exp())
    }
}

/// Exponential waiting time with the total rate, then an index drawn with
/// probability proportional to its rate.
pub fn sample_event(rates: &[f64], rng: &mut ChaCha8Rng) -> Result<(f64, usize)> {
    let total: f64 = rates.iter().sum();
    if rates.is_empty() || !(total > 0.0) || !total.is_finite() {
        return Err(Error::Numeric("empty or degenerate rate table".into()));
    }
    let u: f64 = rng.random();
    let wait = -(1.0 - u).ln() / total;
    let mut target = rng.random::<f64>() * total;
    for (i, &r) in rates.iter().enumerate() {
        if target < r {
            return Ok((wait, i));
        }
        target -= r;
    }
    Ok((wait, rates.iter().rposition(|&r| r > 0.0).unwrap_or(0)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub t_wait: f64,
    pub site_i: usize,
    pub site_j: usize,
    pub transition_type: TransitionType,
    pub delta_p: i32,
}

pub fn kmc_step(state: &InterfaceState, model: &RateModel, rng: &mut ChaCha8Rng) -> Result<(JumpEvent, InterfaceState)> {
    if state.n() != model.n {
        return Err(Error::SizeMismatch { expected: model.n, got: state.n() });
    }
    let n = state.n();
    let mut moves = Vec::with_capacity(n * n / 4);
    let mut rates = Vec::with_capacity(n * n / 4);
    for i in (0..n).filter(|&i| state.bits[i] == 1) {
        for j in (0..n).filter(|&j| state.bits[j] == -1) {
            let t = move_type(n, |s| state.bits[s] == 1, i, j);
            moves.push((i, j, t));
            rates.push(model.rate(t, state.p)?);
        }
    }
    let (wait, k) = sample_event(&rates, rng)?;
    let (i, j, t) = moves[k];
    let next = state.exchanged(i, j)?;
    let event = JumpEvent {
        t_wait: wait,
        site_i: i,
        site_j: j,
        transition_type: t,
        delta_p: next.p as i32 - state.p as i32,
    };
    if event.delta_p != t.delta_p() {
        return Err(Error::Numeric(format!("move {t} changed p by {}", event.delta_p)));
    }
    Ok((event, next))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpRun {
    pub initial: InterfaceState,
    pub model: RateModel,
    pub seed: u64,
    pub events: Vec<JumpEvent>,
    pub final_state: InterfaceState,
}

pub fn run_jump(initial: &InterfaceState, model: &RateModel, events: usize, seed: u64) -> Result<JumpRun> {
    let mut rng = seeded(seed, 0);
    let mut s = initial.clone();
    let mut log = Vec::with_capacity(events);
    for _ in 0..events {
        let (e, next) = kmc_step(&s, model, &mut rng)?;
        log.push(e);
        s = next;
    }
    Ok(JumpRun {
        initial: initial.clone(),
        model: *model,
        seed,
        events: log,
        final_state: s,
    })
}

/// `+-+-...`, the state with `p = N`.
pub fn alternating_state(n: usize) -> Result<InterfaceState> {
    classify_b0_state(&(0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect::<Vec<_>>())
}

impl JumpRun {
    /// `(t, p)` after every event, starting at `(0, p_0)`.
    pub fn trace(&self) -> Vec<(f64, usize)> {
        let mut t = 0.0;
        let mut p = self.initial.p as i64;
        let mut out = vec![(0.0, self.initial.p)];
        for e in &self.events {
            t += e.t_wait;
            p += e.delta_p as i64;
            out.push((t, p as usize));
        }
        out
    }
}

/// Coarsening trace from the alternating state.
pub fn run_interface_trace(n: usize, gamma: f64, eps: f64, events: usize, seed: u64) -> Result<Vec<(f64, usize)>> {
    let model = RateModel::new(n, gamma, eps)?;
    Ok(run_jump(&alternating_state(n)?, &model, events, seed)?.trace())
}
