use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::continuation::newton_fixed_lambda;
use crate::landscape::triples::cubic_roots;
use crate::model::LAMBDA_C;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }
}

/// Existence domain check and the x-ranges of the three vertical strips of
/// the horseshoe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorseshoeDomain {
    pub gamma: f64,
    pub lambda: f64,
    pub in_d: bool,
    pub in_d_prime: bool,
    /// Strips around `alpha_min`, `alpha_c` and `alpha_max`.
    pub strips: [Interval; 3],
}

/// Largest root of `s^3 - s - |lambda|`.
pub fn alpha_hat(lambda: f64) -> f64 {
    cubic_roots(lambda.abs())[2]
}

pub fn check_domain(gamma: f64, lambda: f64) -> Result<HorseshoeDomain> {
    if !(0.0..=0.25).contains(&gamma) {
        return Err(Error::input(format!("gamma = {gamma} outside [0, 1/4]")));
    }
    if !(lambda.abs() <= LAMBDA_C) {
        return Err(Error::input(format!("|lambda| = {} exceeds lambda_c", lambda.abs())));
    }
    let in_d = lambda.abs() + gamma * alpha_hat(lambda) <= LAMBDA_C * (1.0 - gamma).powf(1.5);
    let in_d_prime = gamma <= 2.0 / 9.0 && lambda.abs() <= LAMBDA_C * (1.0 - 4.5 * gamma);
    Ok(HorseshoeDomain {
        gamma,
        lambda,
        in_d,
        in_d_prime,
        strips: strip_bounds(gamma, lambda),
    })
}

/// Refined strip bounds. Inside D the outer strips have width at most
/// `sqrt(gamma)` and the middle one lies within `sqrt(gamma)` of `alpha_c`.
pub fn strip_bounds(gamma: f64, lambda: f64) -> [Interval; 3] {
    let [amin, ac, amax] = cubic_roots(lambda);
    let z0 = ((1.0 - gamma) / 3.0).max(0.0).sqrt();
    let w = |num: f64, den: f64| (gamma * num / den).max(0.0).sqrt();
    [
        Interval {
            lo: amin,
            hi: amin + w(amax - amin, 2.0 * z0 - amin),
        },
        Interval {
            lo: ac - w(amax - ac, 2.0 * z0 - ac),
            hi: ac + w(ac - amin, 2.0 * z0 + ac),
        },
        Interval {
            lo: amax - w(amax - amin, 2.0 * z0 + amax),
            hi: amax,
        },
    ]
}

fn f_lambda(lambda: f64, x: f64) -> f64 {
    x - x * x * x + lambda
}

/// `T(x, y) = (2x - y - (2/gamma) f_lambda(x), x)`.
pub fn horseshoe_map(gamma: f64, lambda: f64, p: (f64, f64)) -> Result<(f64, f64)> {
    if gamma <= 0.0 {
        return Err(Error::SingularMap);
    }
    let (x, y) = p;
    Ok((2.0 * x - y - 2.0 / gamma * f_lambda(lambda, x), x))
}

/// Inverse map, obtained by conjugating with the coordinate swap.
pub fn horseshoe_map_inverse(gamma: f64, lambda: f64, p: (f64, f64)) -> Result<(f64, f64)> {
    let (a, b) = horseshoe_map(gamma, lambda, (p.1, p.0))?;
    Ok((b, a))
}

/// Solutions of `grad V_gamma(x) = lambda 1` on a ring of `n` sites found by
/// Newton continuation in `gamma` from all `3^n` symbol words, deduplicated
/// at distance `1e-6`. The ring size is unrestricted here.
pub fn periodic_solutions(n: usize, gamma: f64, lambda: f64, gamma_step: f64) -> Result<Vec<Vec<f64>>> {
    if n == 0 || n > 12 {
        return Err(Error::input("periodic orbit search supports 1 <= n <= 12"));
    }
    if !(gamma_step > 0.0) {
        return Err(Error::input("gamma step must be positive"));
    }
    let roots = cubic_roots(lambda);
    let steps = (gamma / gamma_step).ceil().max(1.0) as usize;
    let mut found: Vec<Vec<f64>> = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut x: Vec<f64> = (0..n)
            .map(|_| {
                let r = roots[c % 3];
                c /= 3;
                r
            })
            .collect();
        for s in 1..=steps {
            let g = gamma * s as f64 / steps as f64;
            x = newton_fixed_lambda(g, lambda, &x)?;
        }
        let dup = found.iter().any(|y| {
            y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) <= 1e-6
        });
        if !dup {
            found.push(x);
        }
    }
    Ok(found)
}
