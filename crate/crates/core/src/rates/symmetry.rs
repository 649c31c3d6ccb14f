//! The ring symmetry group `D_N x Z_2`, its irreducible representations and
//! the orbits they see.
//!
//! An element `(i, j, k)` acts by rotating `i` times, then reflecting `j`
//! times, then flipping the sign `k` times, with `(r x)_m = x_{m+1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::points::{quantize, StationaryPoint};
use crate::model::{negate, reflect, rotate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub i: usize,
    pub j: u8,
    pub k: u8,
}

impl GroupElement {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for _ in 0..self.i {
            y = rotate(&y);
        }
        if self.j == 1 {
            y = reflect(&y);
        }
        if self.k == 1 {
            y = negate(&y);
        }
        y
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.i {
            0 => {}
            1 => parts.push("r".to_string()),
            i => parts.push(format!("r^{i}")),
        }
        if self.j == 1 {
            parts.push("s".into());
        }
        if self.k == 1 {
            parts.push("c".into());
        }
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join(""))
        }
    }
}

/// All `4N` elements.
pub fn group(n: usize) -> Vec<GroupElement> {
    let mut g = Vec::with_capacity(4 * n);
    for i in 0..n {
        for j in 0..2 {
            for k in 0..2 {
                g.push(GroupElement { i, j, k });
            }
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IrrepSpec {
    OneDim { rho: i8, sigma: i8, tau: i8 },
    TwoDim { l: usize, parity: i8 },
}

fn sign_char(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

impl fmt::Display for IrrepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IrrepSpec::OneDim { rho, sigma, tau } => {
                write!(f, "pi{}{}{}", sign_char(rho), sign_char(sigma), sign_char(tau))
            }
            IrrepSpec::TwoDim { l, parity } => write!(f, "pi{l},{}", sign_char(parity)),
        }
    }
}

impl IrrepSpec {
    pub fn dim(&self) -> usize {
        match self {
            IrrepSpec::OneDim { .. } => 1,
            IrrepSpec::TwoDim { .. } => 2,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, IrrepSpec::OneDim { rho: 1, sigma: 1, tau: 1 })
    }

    pub fn character(&self, g: GroupElement, n: usize) -> f64 {
        let pow = |s: i8, e: usize| if s < 0 && e % 2 == 1 { -1.0 } else { 1.0 };
        match *self {
            IrrepSpec::OneDim { rho, sigma, tau } => {
                pow(rho, g.i) * pow(sigma, g.j as usize) * pow(tau, g.k as usize)
            }
            IrrepSpec::TwoDim { l, parity } => {
                if g.j == 1 {
                    0.0
                } else {
                    let angle = 2.0 * std::f64::consts::PI * (g.i * l % n) as f64 / n as f64;
                    2.0 * angle.cos() * pow(parity, g.k as usize)
                }
            }
        }
    }
}

fn check_even(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::input(format!("n must be even and >= 4, got {n}")));
    }
    Ok(())
}

/// Eight characters `rho^i sigma^j tau^k`, then the `N - 2` two-dimensional
/// ones for `l` in `1..N/2`.
pub fn irreps(n: usize) -> Result<Vec<IrrepSpec>> {
    check_even(n)?;
    let mut v = Vec::with_capacity(n + 6);
    for rho in [1, -1] {
        for sigma in [1, -1] {
            for tau in [1, -1] {
                v.push(IrrepSpec::OneDim { rho, sigma, tau });
            }
        }
    }
    for l in 1..n / 2 {
        for parity in [1, -1] {
            v.push(IrrepSpec::TwoDim { l, parity });
        }
    }
    Ok(v)
}

/// Elements fixing `x`, compared after rounding to `1e-8`.
pub fn stabiliser(x: &[f64]) -> Vec<GroupElement> {
    let key = quantize(x);
    group(x.len()).into_iter().filter(|g| quantize(&g.apply(x)) == key).collect()
}

/// Zero-coupling representatives: `x*` in `A_2`, the saddle `z*` with
/// three interfaces, and its upper endpoint `y*` in `B_1`.
#[derive(Debug, Clone)]
pub struct Representatives {
    pub x: StationaryPoint,
    pub y: StationaryPoint,
    pub z: StationaryPoint,
}

pub fn representatives(n: usize) -> Result<Representatives> {
    check_even(n)?;
    let m = n / 2;
    let block = |a: u8, ca: usize, b: u8, cb: usize| {
        std::iter::repeat(a).take(ca).chain(std::iter::repeat(b).take(cb)).collect::<Vec<u8>>()
    };
    let x = StationaryPoint::from_labels(block(1, m, 2, m), 1)?;
    let y = StationaryPoint::from_labels(block(1, m - 1, 2, m + 1), 1)?;
    let mut zl = block(1, m - 1, 2, m + 1);
    zl[m - 1] = 0;
    let z = StationaryPoint::from_labels(zl, 1)?;
    Ok(Representatives { x, y, z })
}

/// Multiplicity of `pi` in the permutation representation on an orbit with
/// stabiliser `stab`: the average of the character over `stab`.
pub fn activity(irrep: &IrrepSpec, stab: &[GroupElement], n: usize) -> f64 {
    stab.iter().map(|&g| irrep.character(g, n)).sum::<f64>() / stab.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveOrbits {
    pub x: bool,
    pub y: bool,
}

/// Stabilisers of `x*` and `y*` from the explicit group action.
pub fn representative_stabilisers(n: usize) -> Result<(Vec<GroupElement>, Vec<GroupElement>)> {
    let r = representatives(n)?;
    Ok((stabiliser(r.x.values()), stabiliser(r.y.values())))
}

pub fn active_orbits(irrep: &IrrepSpec, n: usize) -> Result<ActiveOrbits> {
    let (gx, gy) = representative_stabilisers(n)?;
    Ok(ActiveOrbits {
        x: activity(irrep, &gx, n) > 0.5,
        y: activity(irrep, &gy, n) > 0.5,
    })
}

/// Activity predicted by the parity rules alone.
pub fn parity_rule(irrep: &IrrepSpec, n: usize) -> ActiveOrbits {
    let m_even = (n / 2) % 2 == 0;
    match *irrep {
        IrrepSpec::OneDim { rho, sigma, tau } => {
            let x = if m_even {
                sigma == 1 && tau == 1
            } else {
                rho == sigma && sigma == tau
            };
            let y = if m_even { rho == sigma } else { sigma == 1 };
            ActiveOrbits { x, y }
        }
        IrrepSpec::TwoDim { l, parity } => ActiveOrbits {
            x: (parity > 0) == (l % 2 == 0),
            y: true,
        },
    }
}
