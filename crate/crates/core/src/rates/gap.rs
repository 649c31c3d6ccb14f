//! Spectral gap of the jump chain on `A_2` and the `B_1` orbit it feeds.
//!
//! The chain lives on two orbits: `O_x = A_2` (`N` states) and `O_y`, the
//! orbit of the upper endpoint of a three-interface `C_1` saddle (`2N`
//! states). Each state of `O_x` leaves at rate `q_x` through four saddles,
//! each state of `O_y` returns at rate `q_y` through two. Every irreducible
//! representation gives an invariant subspace; eliminating the fast `O_y`
//! block leaves the slow eigenvalue of that subspace.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::families::{to_f64, Q};
use crate::hierarchy::interface::{h0, saddle_first_order_exact, SaddleInterfaceTriple};
use crate::landscape::continuation::continue_to_gamma;
use crate::landscape::points::{connect_saddle, quantize, StationaryPoint};
use crate::linalg::Matrix;
use crate::model::check_size;
use crate::rates::hessian::{hessian_closed_forms, point_hessian};
use crate::rates::kramers::{check_eps, RateEstimate, ERROR_NOTE};
use crate::rates::symmetry::{active_orbits, group, irreps, representatives, ActiveOrbits, IrrepSpec};

type M2 = [[f64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn inv(a: &M2) -> Option<M2> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    (det != 0.0).then(|| [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]])
}

/// Generator restricted to a two-dimensional irrep in the basis
/// `u^x, u^{rx}, u^y, u^{ry}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedBlock {
    pub n: usize,
    pub l: usize,
    pub parity: i8,
    pub chi_r: f64,
    pub q_x: f64,
    pub q_y: f64,
    pub l_xx: M2,
    pub l_yy: M2,
    pub l_xy: M2,
    pub l_yx: M2,
}

pub fn reduced_block(n: usize, irrep: IrrepSpec, q_x: f64, q_y: f64) -> Result<ReducedBlock> {
    let IrrepSpec::TwoDim { l, parity } = irrep else {
        return Err(Error::input(format!("{irrep} is not two-dimensional")));
    };
    if n < 4 || n % 2 != 0 || l == 0 || l >= n / 2 {
        return Err(Error::input(format!("need even n >= 4 and 1 <= l < n/2, got n = {n}, l = {l}")));
    }
    if !(q_x > 0.0 && q_y > 0.0) {
        return Err(Error::input("q_x and q_y must be positive"));
    }
    let chi = 2.0 * (2.0 * PI * l as f64 / n as f64).cos();
    Ok(ReducedBlock {
        n,
        l,
        parity,
        chi_r: chi,
        q_x,
        q_y,
        l_xx: [[-4.0 * q_x, 0.0], [0.0, -4.0 * q_x]],
        l_yy: [[-2.0 * q_y, 0.0], [0.0, -2.0 * q_y]],
        l_xy: [[2.0 * (chi + 1.0) * q_x, 2.0 * q_x], [-2.0 * q_x, 2.0 * q_x]],
        l_yx: [[q_y, -q_y], [q_y, (chi + 1.0) * q_y]],
    })
}

impl ReducedBlock {
    /// `l_xx - l_xy l_yy^{-1} l_yx`.
    pub fn schur(&self) -> Result<M2> {
        let yinv = inv(&self.l_yy).ok_or_else(|| Error::Numeric("singular l_yy".into()))?;
        let p = mul(&mul(&self.l_xy, &yinv), &self.l_yx);
        let mut s = self.l_xx;
        for i in 0..2 {
            for j in 0..2 {
                s[i][j] -= p[i][j];
            }
        }
        Ok(s)
    }

    /// Slow eigenvalue of `-L` in this irrep, `4 sin^2(l pi / N) q_x`.
    pub fn gap_eigenvalue(&self) -> Result<f64> {
        let s = self.schur()?;
        Ok(-0.5 * (s[0][0] + s[1][1]))
    }
}

/// Generator on `O_x u O_y`, assembled from the group action on the
/// representatives; the first `N` indices are `O_x`.
#[derive(Debug, Clone)]
pub struct TwoOrbitChain {
    pub n: usize,
    pub x_states: Vec<Vec<f64>>,
    pub y_states: Vec<Vec<f64>>,
    pub generator: Matrix,
}

fn orbit_index(orbit: &mut Vec<Vec<f64>>, keys: &mut Vec<Vec<i64>>, x: Vec<f64>) -> usize {
    let k = quantize(&x);
    if let Some(i) = keys.iter().position(|q| *q == k) {
        return i;
    }
    keys.push(k);
    orbit.push(x);
    orbit.len() - 1
}

pub fn two_orbit_chain(n: usize, q_x: f64, q_y: f64) -> Result<TwoOrbitChain> {
    check_size(n)?;
    if n < 8 {
        return Err(Error::input(format!("two-orbit chain needs n >= 8, got {n}")));
    }
    let r = representatives(n)?;
    let ends = connect_saddle(&r.z)?;
    if quantize(ends.lower.values()) != quantize(r.x.values()) || quantize(ends.upper.values()) != quantize(r.y.values()) {
        return Err(Error::Numeric("representative saddle does not join x* and y*".into()));
    }
    let (mut xs, mut xk, mut ys, mut yk) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut arcs = Vec::new();
    // Saddles have trivial stabiliser, so each group element gives one saddle.
    for g in group(n) {
        let a = orbit_index(&mut xs, &mut xk, g.apply(r.x.values()));
        let b = orbit_index(&mut ys, &mut yk, g.apply(r.y.values()));
        arcs.push((a, b));
    }
    let nx = xs.len();
    let mut l = Matrix::zeros(nx + ys.len(), nx + ys.len());
    for (a, b) in arcs {
        l[(a, nx + b)] += q_x;
        l[(nx + b, a)] += q_y;
    }
    for i in 0..l.rows() {
        let out: f64 = (0..l.cols()).filter(|&j| j != i).map(|j| l[(i, j)]).sum();
        l[(i, i)] = -out;
    }
    Ok(TwoOrbitChain {
        n,
        x_states: xs,
        y_states: ys,
        generator: l,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepGap {
    pub irrep: String,
    pub spec: IrrepSpec,
    pub dim: usize,
    pub active: ActiveOrbits,
    /// Slow eigenvalue of `-L` in this irrep; `None` when `O_x` is inactive.
    pub slow_eigenvalue: Option<f64>,
}

/// Slow eigenvalue per irrep to leading order in `q_x / q_y`.
pub fn irrep_gap_table(n: usize, q_x: f64, q_y: f64) -> Result<Vec<IrrepGap>> {
    let mut out = Vec::new();
    for p in irreps(n)? {
        let active = active_orbits(&p, n)?;
        let slow = match (active.x, active.y, p) {
            (false, _, _) => None,
            (true, false, _) => Some(4.0 * q_x),
            (true, true, IrrepSpec::TwoDim { .. }) => Some(reduced_block(n, p, q_x, q_y)?.gap_eigenvalue()?),
            (true, true, _) if p.is_trivial() => Some(0.0),
            (true, true, _) => {
                return Err(Error::Numeric(format!("unexpected one-dimensional irrep {p} active on both orbits")))
            }
        };
        out.push(IrrepGap {
            irrep: p.to_string(),
            spec: p,
            dim: p.dim(),
            active,
            slow_eigenvalue: slow,
        });
    }
    Ok(out)
}

/// `V(z*) - V(x*)` to first order in the coupling, exact.
pub fn gap_exponent_closed_form(n: usize) -> Result<(Q, Q)> {
    let z = SaddleInterfaceTriple { i01: 1, i02: 1, i12: 1 };
    Ok((h0(n)?, saddle_first_order_exact(z, n)? - Q::from_integer(2)))
}

/// `|lambda_-| sqrt(det x* / |det z*|)` at zero coupling.
pub fn prefactor_ratio_closed_form(m: usize) -> f64 {
    let mf = m as f64;
    let d = mf * mf - 3.0 * mf + 3.0;
    2f64.sqrt() * (d / ((mf - 1.5) * (mf * (mf - 3.0)).sqrt())).powi(m as i32 - 2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub n: usize,
    pub gamma: f64,
    pub eps: f64,
    pub barrier: f64,
    pub barrier_zero_coupling: String,
    pub barrier_first_order: String,
    pub lambda_minus: f64,
    pub det_min: f64,
    pub det_saddle: f64,
    pub prefactor_ratio: f64,
    pub prefactor_ratio_zero_coupling: f64,
    pub prefactor_ratio_limit: f64,
    pub q_x: f64,
    pub q_y: f64,
    pub q_y_default: bool,
    pub sin2_factor: f64,
    pub lambda2: f64,
    pub lambda2_irrep: String,
    pub irreps: Vec<IrrepGap>,
    pub estimate: RateEstimate,
}

fn relative_mismatch(a: f64, b: f64) -> bool {
    (a - b).abs() > 1e-8 * b.abs()
}

/// Smallest nonzero eigenvalue of `-L`. `q_y` defaults to the
/// Eyring-Kramers rate from `y*` over `z*`.
pub fn spectral_gap(n: usize, gamma: f64, eps: f64, q_y: Option<f64>) -> Result<GapReport> {
    check_size(n)?;
    check_eps(eps)?;
    if n < 8 {
        return Err(Error::input(format!("spectral gap needs n >= 8, got {n}")));
    }
    if let Some(q) = q_y {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::input(format!("q_y must be finite and > 0, got {q}")));
        }
    }
    let r = representatives(n)?;
    let lift = |p: &StationaryPoint| if gamma > 0.0 { continue_to_gamma(p, gamma) } else { Ok(p.clone()) };
    let (x, y, z) = (lift(&r.x)?, lift(&r.y)?, lift(&r.z)?);
    let (hx, hy, hz) = (point_hessian(&x)?, point_hessian(&y)?, point_hessian(&z)?);
    if hx.index != 0 || hy.index != 0 || hz.index != 1 {
        return Err(Error::Numeric("representatives lost their Morse indices".into()));
    }
    let lm = hz.lambda_minus.ok_or_else(|| Error::Numeric("saddle has no unique negative eigenvalue".into()))?;
    let m = n / 2;
    if gamma == 0.0 {
        let cf = hessian_closed_forms(m)?;
        if relative_mismatch(hx.det, cf.det_min)
            || relative_mismatch(hz.det, cf.det_saddle)
            || relative_mismatch(lm, cf.lambda_minus)
        {
            return Err(Error::Numeric("numeric Hessians disagree with the closed forms".into()));
        }
    }
    let ratio = lm.abs() * (hx.det / hz.det.abs()).sqrt();
    let barrier = z.potential - x.potential;
    let q_x = ratio / (2.0 * PI) * (-barrier / eps).exp();
    let q_y_default = q_y.is_none();
    let q_y = match q_y {
        Some(q) => q,
        None => lm.abs() / (2.0 * PI) * (hy.det / hz.det.abs()).sqrt() * (-(z.potential - y.potential) / eps).exp(),
    };
    let table = irrep_gap_table(n, q_x, q_y)?;
    let (lambda2, irrep) = table
        .iter()
        .filter_map(|g| g.slow_eigenvalue.filter(|&v| v > 0.0).map(|v| (v, g.irrep.clone())))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::Numeric("no nonzero slow eigenvalue".into()))?;
    let (e0, e1) = gap_exponent_closed_form(n)?;
    let sin2 = 4.0 * (PI / n as f64).sin().powi(2);
    let estimate = RateEstimate {
        transition: "spectral gap".into(),
        n,
        gamma,
        eps,
        barrier,
        prefactor: 2.0 * PI / (sin2 * ratio),
        symmetry_factor: 1.0,
        symmetry_exact: None,
        time: 1.0 / lambda2,
        rate: lambda2,
        error_note: ERROR_NOTE.into(),
    };
    Ok(GapReport {
        n,
        gamma,
        eps,
        barrier,
        barrier_zero_coupling: e0.to_string(),
        barrier_first_order: e1.to_string(),
        lambda_minus: lm,
        det_min: hx.det,
        det_saddle: hz.det,
        prefactor_ratio: ratio,
        prefactor_ratio_zero_coupling: prefactor_ratio_closed_form(m),
        prefactor_ratio_limit: 2f64.sqrt(),
        q_x,
        q_y,
        q_y_default,
        sin2_factor: sin2,
        lambda2,
        lambda2_irrep: irrep,
        irreps: table,
        estimate,
    })
}

/// `H^0` at zero coupling as a float, for callers without exact types.
pub fn gap_barrier_zero_coupling(n: usize) -> Result<f64> {
    Ok(to_f64(&h0(n)?))
}
