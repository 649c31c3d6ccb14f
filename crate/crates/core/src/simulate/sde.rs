//! Projected Euler-Maruyama for `dx = -grad V dt + sqrt(2 eps) dW` on the
//! zero-sum plane.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, LatticeConfig, Params, ZERO_SUM_TOL};
use crate::simulate::seeded;

/// Stability guard for the quartic drift.
pub const MAX_DT: f64 = 0.01;

pub(crate) fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::input(format!("dt must lie in (0, {MAX_DT}], got {dt}")));
    }
    Ok(())
}

/// One step in place. `noise` is scratch space of length `n`.
pub(crate) fn advance(gamma: f64, eps: f64, dt: f64, x: &mut [f64], noise: &mut [f64], rng: &mut ChaCha8Rng) {
    let n = x.len();
    let amp = (2.0 * eps * dt).sqrt();
    let mut nm = 0.0;
    for v in noise.iter_mut() {
        *v = if eps > 0.0 { rng.sample::<f64, _>(StandardNormal) } else { 0.0 };
        nm += *v;
    }
    nm /= n as f64;
    let mut gm = 0.0;
    let g = model::gradient_raw(gamma, x);
    for gi in &g {
        gm += gi;
    }
    gm /= n as f64;
    for i in 0..n {
        x[i] += -(g[i] - gm) * dt + amp * (noise[i] - nm);
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

/// `x' = P(x + drift dt + sqrt(2 eps dt) P xi)`.
pub fn step_em(params: &Params, x: &LatticeConfig, dt: f64, rng: &mut ChaCha8Rng) -> Result<LatticeConfig> {
    check_dt(dt)?;
    if x.len() != params.n {
        return Err(Error::SizeMismatch { expected: params.n, got: x.len() });
    }
    let mut v = x.values().to_vec();
    let mut noise = vec![0.0; v.len()];
    advance(params.gamma, params.eps, dt, &mut v, &mut noise, rng);
    if v.iter().any(|a| !a.is_finite()) {
        return Err(Error::BlowUp { step: 1 });
    }
    Ok(LatticeConfig::projected(v))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdeRun {
    pub params: Params,
    pub dt: f64,
    pub steps: u64,
    pub seed: u64,
    pub record_stride: u64,
    /// `(t, x)` every `record_stride` steps, starting with the initial point.
    pub trajectory: Vec<(f64, Vec<f64>)>,
    /// Largest `|sum x_i|` over recorded points.
    pub max_mass_error: f64,
}

pub fn run_sde(params: &Params, x0: &LatticeConfig, dt: f64, steps: u64, seed: u64, record_stride: u64) -> Result<SdeRun> {
    check_dt(dt)?;
    if record_stride == 0 {
        return Err(Error::input("record stride must be >= 1"));
    }
    if x0.len() != params.n {
        return Err(Error::SizeMismatch { expected: params.n, got: x0.len() });
    }
    let mut rng = seeded(seed, 0);
    let mut x = x0.values().to_vec();
    let mut noise = vec![0.0; x.len()];
    let mut traj = vec![(0.0, x.clone())];
    let mut mass = x.iter().sum::<f64>().abs();
    for s in 1..=steps {
        advance(params.gamma, params.eps, dt, &mut x, &mut noise, &mut rng);
        if x.iter().any(|a| !a.is_finite()) {
            return Err(Error::BlowUp { step: s });
        }
        if s % record_stride == 0 {
            mass = mass.max(x.iter().sum::<f64>().abs());
            traj.push((s as f64 * dt, x.clone()));
        }
    }
    if mass > ZERO_SUM_TOL {
        return Err(Error::Numeric(format!("mass drift {mass:e} exceeds tolerance")));
    }
    Ok(SdeRun {
        params: *params,
        dt,
        steps,
        seed,
        record_stride,
        trajectory: traj,
        max_mass_error: mass,
    })
}
