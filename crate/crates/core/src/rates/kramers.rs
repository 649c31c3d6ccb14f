//! Eyring-Kramers transition times between a minimum and a 1-saddle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::continuation::continue_to_gamma;
use crate::landscape::points::StationaryPoint;
use crate::landscape::triples::k_max;
use crate::model::check_size;
use crate::rates::hessian::point_hessian;

/// Attached to every estimate; the correction is never applied.
pub const ERROR_NOTE: &str = "leading order only; relative correction O(eps^(1/2) |log eps|^(3/2))";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub transition: String,
    pub n: usize,
    pub gamma: f64,
    pub eps: f64,
    /// `V(saddle) - V(minimum)`.
    pub barrier: f64,
    /// `2 pi / |lambda_-| * sqrt(|det saddle| / det minimum)`.
    pub prefactor: f64,
    pub symmetry_factor: f64,
    pub symmetry_exact: Option<String>,
    /// Expected transition time.
    pub time: f64,
    pub rate: f64,
    pub error_note: String,
}

impl RateEstimate {
    /// Expected time at another noise strength.
    pub fn time_at(&self, eps: f64) -> f64 {
        self.symmetry_factor * self.prefactor * (self.barrier / eps).exp()
    }

    pub fn rate_at(&self, eps: f64) -> f64 {
        1.0 / self.time_at(eps)
    }

    fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self.time = self.time_at(eps);
        self.rate = 1.0 / self.time;
        self
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::input(format!("eps must be finite and > 0, got {eps}")));
    }
    Ok(())
}

/// Determinants come from the numerically assembled Hessians.
pub fn kramers_time(min: &StationaryPoint, saddle: &StationaryPoint, eps: f64) -> Result<RateEstimate> {
    check_eps(eps)?;
    if min.gamma != saddle.gamma || min.n() != saddle.n() {
        return Err(Error::input("minimum and saddle must share n and gamma"));
    }
    let hm = point_hessian(min)?;
    let hs = point_hessian(saddle)?;
    if hm.index != 0 || hs.index != 1 {
        return Err(Error::input(format!(
            "index mismatch: minimum has index {}, saddle has index {}",
            hm.index, hs.index
        )));
    }
    let lm = hs.lambda_minus.ok_or_else(|| Error::Numeric("saddle has no unique negative eigenvalue".into()))?;
    let prefactor = 2.0 * PI / lm.abs() * (hs.det.abs() / hm.det).sqrt();
    let est = RateEstimate {
        transition: format!("{} -> {}", min.family, saddle.family),
        n: min.n(),
        gamma: min.gamma,
        eps,
        barrier: saddle.potential - min.potential,
        prefactor,
        symmetry_factor: 1.0,
        symmetry_exact: None,
        time: 0.0,
        rate: 0.0,
        error_note: ERROR_NOTE.into(),
    };
    Ok(est.with_eps(eps))
}

/// A `B_k` minimum and the `C_k` saddle on its way down to `B_{k-1}`, both
/// at zero coupling. The saddle puts its `alpha'_0` on site `M - k`.
pub fn bk_pair(n: usize, k: usize) -> Result<(StationaryPoint, StationaryPoint)> {
    check_size(n)?;
    if k == 0 || k > k_max(n) {
        return Err(Error::input(format!("k must lie in 1..={}, got {k}", k_max(n))));
    }
    let m = n / 2;
    let mut labels: Vec<u8> = (0..n).map(|i| if i < m - k { 1 } else { 2 }).collect();
    let x = StationaryPoint::from_labels(labels.clone(), 1)?;
    labels[m - k] = 0;
    let z = StationaryPoint::from_labels(labels, 1)?;
    Ok((x, z))
}

/// Mean exit time from `B_k` into `B_0 u ... u B_{k-1}` under a
/// symmetric start, at zero coupling: the Eyring-Kramers time times
/// `1/(M+k)`.
pub fn symmetric_transition_time(n: usize, k: usize, eps: f64) -> Result<RateEstimate> {
    let (x, z) = bk_pair(n, k)?;
    let m = n / 2;
    let mut est = kramers_time(&x, &z, eps)?;
    est.transition = format!("B{k} -> B{}", k - 1);
    est.symmetry_factor = 1.0 / (m + k) as f64;
    est.symmetry_exact = Some(format!("1/{}", m + k));
    Ok(est.with_eps(eps))
}

/// `B_k -> B_{k-1}` for every admissible `k` at coupling `gamma`. The
/// symmetry factor is applied at zero coupling only.
pub fn rate_table(n: usize, gamma: f64, eps: f64) -> Result<Vec<RateEstimate>> {
    check_size(n)?;
    check_eps(eps)?;
    let mut out = Vec::new();
    for k in 1..=k_max(n) {
        if gamma == 0.0 {
            out.push(symmetric_transition_time(n, k, eps)?);
            continue;
        }
        let (x, z) = bk_pair(n, k)?;
        let mut est = kramers_time(&continue_to_gamma(&x, gamma)?, &continue_to_gamma(&z, gamma)?, eps)?;
        est.transition = format!("B{k} -> B{}", k - 1);
        out.push(est);
    }
    Ok(out)
}
