//! Continuation of zero-coupling stationary points to positive coupling.
//!
//! Each step first runs Newton on the bordered system
//! `grad V_gamma(x) = lambda 1, sum x = 0` in `(x, lambda)`, whose Jacobian
//! is regular exactly when the Hessian restricted to S is. If that fails the
//! step falls back to two levels: damped Newton on `grad V_gamma(x) =
//! lambda 1` at fixed `lambda`, then bisection on `lambda` for the zero of
//! the mean `Sigma_gamma(lambda)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::horseshoe::{check_domain, HorseshoeDomain};
use crate::landscape::points::{StationaryPoint, STATIONARY_TOL};
use crate::landscape::triples::Family;
use crate::linalg::{max_abs, Lu};
use crate::model::{self, LatticeConfig, LAMBDA_C};

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 60;
const MAX_HALVINGS: usize = 30;
const SIGMA_TOL: f64 = 1e-12;
/// Smallest step is `gamma_step / MAX_STEP_HALVINGS`.
const MAX_STEP_HALVINGS: f64 = 64.0;
/// Largest coordinate change accepted in one step; larger moves mean the
/// corrector landed on a neighbouring branch.
const MAX_JUMP: f64 = 0.05;

/// Persistence bound of the `B_0` family.
pub fn b0_persistence_bound() -> f64 {
    7.0 / 3.0 - 5f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuationOptions {
    /// Largest increment in gamma between accepted points.
    pub gamma_step: f64,
    /// Constant `c` of the persistence bound `gamma <= c (1/6 - k/n)^2` for
    /// `B_k`/`C_k`, `k >= 1`. `None` skips the a priori check and relies on
    /// the index and residual checks at every step.
    pub persistence_c: Option<f64>,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions {
            gamma_step: 0.01,
            persistence_c: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub gamma: f64,
    pub lambda: f64,
    pub residual: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationReport {
    pub point: StationaryPoint,
    pub steps: Vec<StepRecord>,
    /// Domain diagnostics at the final `(gamma, lambda)`; `None` when gamma
    /// exceeds the domain's rectangle.
    pub domain: Option<HorseshoeDomain>,
}

fn residual(gamma: f64, lambda: f64, x: &[f64]) -> Vec<f64> {
    model::gradient_raw(gamma, x).into_iter().map(|g| g - lambda).collect()
}

/// Damped Newton for `grad V_gamma(x) = lambda 1` on the whole of R^n.
pub fn newton_fixed_lambda(gamma: f64, lambda: f64, x0: &[f64]) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    let mut f = residual(gamma, lambda, &x);
    let mut r = max_abs(&f);
    for it in 0..NEWTON_MAX_ITER {
        if r <= NEWTON_TOL {
            return Ok(x);
        }
        let lu = Lu::new(&model::hessian_raw(gamma, &x)).map_err(|_| Error::NewtonDiverged {
            residual: r,
            iterations: it,
        })?;
        let dx = lu.solve(&f);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a - t * d).collect();
            let ft = residual(gamma, lambda, &trial);
            let rt = max_abs(&ft);
            if rt.is_finite() && rt < r {
                x = trial;
                f = ft;
                r = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // No decrease possible: accept a converged-to-rounding iterate.
            if r <= 1e3 * NEWTON_TOL {
                return Ok(x);
            }
            return Err(Error::NewtonDiverged {
                residual: r,
                iterations: it,
            });
        }
    }
    if r <= NEWTON_TOL {
        Ok(x)
    } else {
        Err(Error::NewtonDiverged {
            residual: r,
            iterations: NEWTON_MAX_ITER,
        })
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Stationary point on S at coupling `gamma`, starting from a solution `x0`
/// at multiplier `lambda0` for a nearby coupling.
fn solve_on_s(gamma: f64, lambda0: f64, x0: &[f64]) -> Result<(f64, Vec<f64>)> {
    let eval = |lambda: f64, seed: &[f64]| -> Result<(f64, Vec<f64>)> {
        let x = newton_fixed_lambda(gamma, lambda, seed)?;
        Ok((mean(&x), x))
    };
    let (s0, x_mid) = eval(lambda0, x0)?;
    if s0.abs() <= SIGMA_TOL {
        return Ok((lambda0, x_mid));
    }
    // Expand a bracket on both sides until Sigma changes sign.
    let mut delta = 1e-4;
    let mut bracket = None;
    'expand: for _ in 0..40 {
        for dir in [-1.0, 1.0] {
            let l = lambda0 + dir * delta;
            if l.abs() >= LAMBDA_C {
                continue;
            }
            if let Ok((s, x)) = eval(l, &x_mid) {
                if s.signum() != s0.signum() || s == 0.0 {
                    bracket = Some(if dir < 0.0 {
                        ((l, s, x), (lambda0, s0, x_mid.clone()))
                    } else {
                        ((lambda0, s0, x_mid.clone()), (l, s, x))
                    });
                    break 'expand;
                }
            }
        }
        delta *= 2.0;
    }
    let ((mut la, mut sa, mut xa), (mut lb, mut sb, mut xb)) =
        bracket.ok_or_else(|| Error::Numeric("no sign change of the mean found".into()))?;
    for _ in 0..200 {
        if sa.abs() <= SIGMA_TOL {
            return Ok((la, xa));
        }
        if sb.abs() <= SIGMA_TOL {
            return Ok((lb, xb));
        }
        let lm = 0.5 * (la + lb);
        if lm == la || lm == lb {
            break;
        }
        let seed = if sa.abs() < sb.abs() { &xa } else { &xb };
        let (sm, xm) = eval(lm, seed)?;
        if sm.signum() == sa.signum() {
            la = lm;
            sa = sm;
            xa = xm;
        } else {
            lb = lm;
            sb = sm;
            xb = xm;
        }
    }
    let (l, s, x) = if sa.abs() < sb.abs() { (la, sa, xa) } else { (lb, sb, xb) };
    if s.abs() <= SIGMA_TOL {
        Ok((l, x))
    } else {
        Err(Error::Numeric(format!("bisection stalled with |mean| = {:e}", s.abs())))
    }
}

/// Undamped Newton on the bordered system, seeded at the previous point.
fn solve_bordered(gamma: f64, lambda0: f64, x0: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = x0.len();
    let mut x = x0.to_vec();
    model::remove_mean(&mut x);
    let mut lambda = lambda0;
    let eval = |x: &[f64], l: f64| -> Vec<f64> {
        let mut f = residual(gamma, l, x);
        f.push(x.iter().sum());
        f
    };
    let mut f = eval(&x, lambda);
    for it in 0..NEWTON_MAX_ITER {
        let r = max_abs(&f);
        if r <= NEWTON_TOL {
            return Ok((lambda, x));
        }
        let h = model::hessian_raw(gamma, &x);
        let mut j = crate::linalg::Matrix::zeros(n + 1, n + 1);
        for a in 0..n {
            for b in 0..n {
                j[(a, b)] = h[(a, b)];
            }
            j[(a, n)] = -1.0;
            j[(n, a)] = 1.0;
        }
        let d = Lu::new(&j)
            .map_err(|_| Error::NewtonDiverged { residual: r, iterations: it })?
            .solve(&f);
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi -= di;
        }
        lambda -= d[n];
        f = eval(&x, lambda);
        if !f.iter().all(|v| v.is_finite()) || max_abs(&f) > 1e3 * r.max(1e-8) {
            return Err(Error::NewtonDiverged { residual: max_abs(&f), iterations: it });
        }
    }
    let r = max_abs(&f);
    if r <= 1e3 * NEWTON_TOL {
        Ok((lambda, x))
    } else {
        Err(Error::NewtonDiverged { residual: r, iterations: NEWTON_MAX_ITER })
    }
}

fn check_persistence(p: &StationaryPoint, gamma: f64, opts: &ContinuationOptions) -> Result<()> {
    let n = p.n() as f64;
    match (p.family, opts.persistence_c) {
        (Family::B(0), _) if gamma >= b0_persistence_bound() => Err(Error::input(format!(
            "gamma = {gamma} beyond the B0 persistence bound {:.6}",
            b0_persistence_bound()
        ))),
        (Family::B(k) | Family::C(k), Some(c)) if k >= 1 => {
            let bound = c * (1.0 / 6.0 - k as f64 / n).powi(2);
            if gamma > bound {
                Err(Error::input(format!(
                    "gamma = {gamma} beyond the configured persistence bound {bound:e} for {}",
                    p.family
                )))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

/// One accepted point at coupling `g`: solution on S, residual and index
/// checked.
fn continuation_step(g: f64, lambda: f64, x: &[f64], index: usize) -> std::result::Result<(f64, Vec<f64>, f64), String> {
    let (l, mut xs) = solve_bordered(g, lambda, x)
        .or_else(|_| solve_on_s(g, lambda, x))
        .map_err(|e| e.to_string())?;
    model::remove_mean(&mut xs);
    let jump = xs.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if jump > MAX_JUMP {
        return Err(format!("step moved a coordinate by {jump:.3} at gamma = {g}"));
    }
    let mut d = model::gradient_raw(g, &xs);
    model::remove_mean(&mut d);
    let res = max_abs(&d);
    if res > STATIONARY_TOL {
        return Err(format!("residual {res:e} at gamma = {g}"));
    }
    let idx = model::morse_index(&model::constrained_hessian_raw(g, &xs)).map_err(|e| e.to_string())?;
    if idx != index {
        return Err(format!("index changed from {index} to {idx} at gamma = {g}"));
    }
    Ok((l, xs, res))
}

pub fn continue_to_gamma(point0: &StationaryPoint, gamma_target: f64) -> Result<StationaryPoint> {
    Ok(continue_with(point0, gamma_target, &ContinuationOptions::default())?.point)
}

pub fn continue_with(
    point0: &StationaryPoint,
    gamma_target: f64,
    opts: &ContinuationOptions,
) -> Result<ContinuationReport> {
    if !(gamma_target >= point0.gamma) || !gamma_target.is_finite() {
        return Err(Error::input(format!(
            "target gamma {gamma_target} must be finite and >= the starting coupling {}",
            point0.gamma
        )));
    }
    if !(opts.gamma_step > 0.0) {
        return Err(Error::input("gamma step must be positive"));
    }
    check_persistence(point0, gamma_target, opts)?;
    let mut steps = Vec::new();
    if gamma_target == point0.gamma {
        return Ok(ContinuationReport {
            point: point0.clone(),
            steps,
            domain: check_domain(point0.gamma, point0.lambda).ok(),
        });
    }
    let mut x = point0.values().to_vec();
    let mut lambda = point0.lambda;
    let mut last_good = point0.gamma;
    let mut step = opts.gamma_step;
    let min_step = opts.gamma_step / MAX_STEP_HALVINGS;
    let fail = |g: f64, reason: String| Error::ContinuationFailed {
        gamma_reached: g,
        gamma_target,
        reason,
    };
    while last_good < gamma_target {
        let g = if last_good + step >= gamma_target - 1e-15 {
            gamma_target
        } else {
            last_good + step
        };
        match continuation_step(g, lambda, &x, point0.morse_index) {
            Ok((l, xs, res)) => {
                steps.push(StepRecord {
                    gamma: g,
                    lambda: l,
                    residual: res,
                    mean: mean(&xs),
                });
                x = xs;
                lambda = l;
                last_good = g;
                step = (2.0 * step).min(opts.gamma_step);
            }
            // A shorter step stays closer to the branch being followed.
            Err(_) if step > min_step => step /= 2.0,
            Err(reason) => return Err(fail(last_good, reason)),
        }
    }
    let coords = LatticeConfig::projected(x);
    let potential = model::potential_raw(gamma_target, coords.values());
    let point = StationaryPoint {
        coords,
        gamma: gamma_target,
        lambda,
        potential,
        ..point0.clone()
    };
    Ok(ContinuationReport {
        domain: check_domain(gamma_target, lambda).ok(),
        point,
        steps,
    })
}

/// Sign changes of `lambda -> Sigma_gamma(lambda)` along the branch through
/// `point`, scanned on a grid of spacing `h` out to `|lambda - lambda*| <=
/// half_width`. The grid is walked outward from `point.lambda`, each solve
/// seeded from its neighbour; the walk stops where Newton fails.
pub fn sigma_brackets(point: &StationaryPoint, half_width: f64, h: f64) -> Result<Vec<(f64, f64)>> {
    if !(h > 0.0) || !(half_width > 0.0) {
        return Err(Error::input("grid spacing and half width must be positive"));
    }
    let gamma = point.gamma;
    let steps = (half_width / h).ceil() as usize;
    let mut samples: Vec<(f64, f64)> = vec![(point.lambda, mean(point.values()))];
    for dir in [-1.0, 1.0] {
        let mut x = point.values().to_vec();
        for i in 1..=steps {
            let l = point.lambda + dir * h * i as f64;
            if l.abs() >= LAMBDA_C {
                break;
            }
            match newton_fixed_lambda(gamma, l, &x) {
                Ok(xn) => {
                    samples.push((l, mean(&xn)));
                    x = xn;
                }
                Err(_) => break,
            }
        }
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.1 == 0.0 || a.1.signum() != b.1.signum() {
            out.push((a.0, b.0));
        }
    }
    out.dedup();
    Ok(out)
}
