//! Mean first-passage times by direct simulation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::sde::{advance, check_dt};
use crate::simulate::seeded;

/// Max-norm radius of a target neighbourhood.
pub const EXIT_RADIUS: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Target {
    /// Neighbourhoods of the listed points.
    Points(Vec<Vec<f64>>),
    /// Any `+-1` word except `start`.
    OtherB0 { start: Vec<i8> },
    /// Any `+-1` word.
    AnyB0,
}

impl Target {
    fn hit(&self, x: &[f64]) -> bool {
        let near = |p: &[f64]| x.iter().zip(p).all(|(a, b)| (a - b).abs() < EXIT_RADIUS);
        match self {
            Target::Points(ps) => ps.iter().any(|p| near(p)),
            Target::AnyB0 => x.iter().all(|v| (v.abs() - 1.0).abs() < EXIT_RADIUS),
            Target::OtherB0 { start } => {
                x.iter().all(|v| (v.abs() - 1.0).abs() < EXIT_RADIUS)
                    && x.iter().zip(start).any(|(&v, &s)| (v > 0.0) != (s > 0))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitOptions {
    pub gamma: f64,
    pub dt: f64,
    pub replicas: usize,
    /// Replicas still running after this many steps are censored.
    pub max_steps: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsStats {
    pub eps: f64,
    pub replicas: usize,
    /// Exit times of uncensored replicas, by replica index.
    pub times: Vec<f64>,
    pub censored: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(replicas)`.
    pub std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitTimeStats {
    pub per_eps: Vec<EpsStats>,
    /// Least-squares slope of `log(mean)` against `1/eps`.
    pub arrhenius_slope: Option<f64>,
    pub intercept: Option<f64>,
}

fn one_replica(start: &[f64], target: &Target, eps: f64, o: &ExitOptions, stream: u64) -> Option<f64> {
    let mut rng = seeded(o.seed, stream);
    let mut x = start.to_vec();
    let mut noise = vec![0.0; x.len()];
    for s in 1..=o.max_steps {
        advance(o.gamma, eps, o.dt, &mut x, &mut noise, &mut rng);
        if target.hit(&x) {
            return Some(s as f64 * o.dt);
        }
        if !x[0].is_finite() {
            return None;
        }
    }
    None
}

/// Replica `r` at the `e`-th noise level starts from `starts[r % len]` and
/// uses stream `(e << 32) | r`.
pub fn mean_exit_time(starts: &[Vec<f64>], target: &Target, eps_list: &[f64], opts: &ExitOptions) -> Result<ExitTimeStats> {
    check_dt(opts.dt)?;
    if starts.is_empty() || opts.replicas < 2 {
        return Err(Error::input("need at least one start point and two replicas"));
    }
    if let Some(e) = eps_list.iter().find(|e| !(**e > 0.0)) {
        return Err(Error::input(format!("eps must be > 0, got {e}")));
    }
    if starts.iter().any(|s| target.hit(s)) {
        return Err(Error::input("a start point lies inside the target"));
    }
    let mut per_eps = Vec::new();
    for (e, &eps) in eps_list.iter().enumerate() {
        let out: Vec<Option<f64>> = (0..opts.replicas)
            .into_par_iter()
            .map(|r| one_replica(&starts[r % starts.len()], target, eps, opts, ((e as u64) << 32) | r as u64))
            .collect();
        let times: Vec<f64> = out.iter().flatten().copied().collect();
        let k = times.len();
        let mean = times.iter().sum::<f64>() / k.max(1) as f64;
        let var = if k > 1 {
            times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            f64::NAN
        };
        per_eps.push(EpsStats {
            eps,
            replicas: opts.replicas,
            censored: opts.replicas - k,
            mean: if k > 0 { mean } else { f64::NAN },
            std_err: (var / k as f64).sqrt(),
            times,
        });
    }
    let pts: Vec<(f64, f64)> = per_eps
        .iter()
        .filter(|s| s.mean.is_finite() && s.mean > 0.0)
        .map(|s| (1.0 / s.eps, s.mean.ln()))
        .collect();
    let (slope, intercept) = least_squares(&pts).unzip();
    Ok(ExitTimeStats {
        per_eps,
        arrhenius_slope: slope,
        intercept,
    })
}

pub fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
