use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::families::{to_f64, Q};
use crate::landscape::points::StationaryPoint;
use crate::model;

/// Hessian data at the zero-coupling representatives `x*` (two blocks of
/// `+-1`) and `z*` (the three-interface `C_1` saddle), `N = 2M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HessianClosedForms {
    pub m: usize,
    pub det_min: f64,
    pub det_saddle: f64,
    pub lambda_minus: f64,
    pub lambda_minus_exact: String,
    /// Saddle spectrum as `(eigenvalue, multiplicity)`, exact.
    pub saddle_spectrum: Vec<(String, usize)>,
}

/// Saddle eigenvalues `M(2M-3)/D` (x `M-2`), `(M-3)(2M-3)/D` (x `M-1`),
/// `2` and `lambda_-`, with `D = M^2 - 3M + 3`.
pub fn saddle_spectrum_exact(m: usize) -> Result<Vec<(Q, usize)>> {
    if m < 4 {
        return Err(Error::input(format!("closed forms need M >= 4, got {m}")));
    }
    let mi = m as i128;
    let d = mi * mi - 3 * mi + 3;
    Ok(vec![
        (Q::new(mi * (2 * mi - 3), d), m - 2),
        (Q::new((mi - 3) * (2 * mi - 3), d), m - 1),
        (Q::from_integer(2), 1),
        (Q::new(-(mi - 3) * (2 * mi - 3), 2 * d), 1),
    ])
}

pub fn hessian_closed_forms(m: usize) -> Result<HessianClosedForms> {
    let spec = saddle_spectrum_exact(m)?;
    let mf = m as f64;
    let d = mf * mf - 3.0 * mf + 3.0;
    // Evaluated as a product of ratios to stay finite for large M.
    let det_saddle = -(mf * (2.0 * mf - 3.0) / d).powi(m as i32 - 2)
        * ((mf - 3.0) * (2.0 * mf - 3.0) / d).powi(m as i32);
    let lm = spec[3].0;
    Ok(HessianClosedForms {
        m,
        det_min: 2f64.powi(2 * m as i32 - 1),
        det_saddle,
        lambda_minus: to_f64(&lm),
        lambda_minus_exact: lm.to_string(),
        saddle_spectrum: spec.iter().map(|(v, k)| (v.to_string(), *k)).collect(),
    })
}

/// Determinant, index and negative eigenvalue of the constrained Hessian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianData {
    pub det: f64,
    pub index: usize,
    pub lambda_minus: Option<f64>,
}

pub fn hessian_data(gamma: f64, x: &[f64]) -> Result<HessianData> {
    let h = model::constrained_hessian_raw(gamma, x);
    let ev = h.eigenvalues()?;
    let neg: Vec<f64> = ev.iter().copied().filter(|&l| l < 0.0).collect();
    Ok(HessianData {
        det: ev.iter().product(),
        index: model::morse_index(&h)?,
        lambda_minus: (neg.len() == 1).then(|| neg[0]),
    })
}

pub fn point_hessian(p: &StationaryPoint) -> Result<HessianData> {
    hessian_data(p.gamma, p.values())
}
