//! Potential values of the `B_k` and `C_k` families at zero coupling and the
//! barrier chain that orders them.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::triples::{family_k_range, k_max, FamilyKind};
use crate::model::check_size;

pub type Q = Ratio<i128>;

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn check_n(n: usize) -> Result<()> {
    check_size(n)?;
    if n > 2000 {
        return Err(Error::input("exact family values are limited to n <= 2000"));
    }
    Ok(())
}

/// `V_0(B_k)` with `a = M - k`.
fn v_b(n: i128, a: i128) -> Q {
    Q::new(-a * n * (n - a), 4 * (n * n - 3 * a * n + 3 * a * a))
}

/// `V_0(C_{k+1})` with `a = M - k`.
fn v_c_next(n: i128, a: i128) -> Q {
    Q::new(
        -(a * n * n - (a * a + 8 * a - 8) * n + 9 * a * (a - 1)),
        4 * (n * n - 3 * a * n + 3 * a * a - 3 * a + 3),
    )
}

pub fn family_potential_exact(n: usize, k: usize, kind: FamilyKind) -> Result<Q> {
    check_n(n)?;
    if !family_k_range(n, kind).contains(&k) {
        return Err(Error::input(format!("k = {k} out of range for {kind:?} at n = {n}")));
    }
    let (ni, m) = (n as i128, (n / 2) as i128);
    Ok(match kind {
        FamilyKind::B => v_b(ni, m - k as i128),
        FamilyKind::C => v_c_next(ni, m - k as i128 + 1),
    })
}

pub fn family_potential(n: usize, k: usize, kind: FamilyKind) -> Result<f64> {
    Ok(to_f64(&family_potential_exact(n, k, kind)?))
}

/// `h1(a) = V_0(C_{k+1}) - V_0(B_k)` and `h2(a) = V_0(C_k) - V_0(B_k)`,
/// `a = M - k`, for `n/3 < a <= n/2`.
pub fn barrier_functions_exact(n: usize, a: usize) -> Result<(Q, Q)> {
    check_n(n)?;
    if !(3 * a > n && 2 * a <= n) {
        return Err(Error::input(format!("a = {a} outside (n/3, n/2] for n = {n}")));
    }
    let (n, a) = (n as i128, a as i128);
    let d1 = n * n - 3 * a * n + 3 * a * a;
    let h1 = Q::new(
        (a - 1) * (2 * n - 3 * a).pow(3),
        4 * d1 * (n * n - 3 * a * n + 3 * a * a - 3 * a + 3),
    );
    let h2 = Q::new(
        (n - a - 1) * (3 * a - n).pow(3),
        4 * d1 * (n * n - 3 * (a + 1) * n + 3 * a * a + 3 * a + 3),
    );
    Ok((h1, h2))
}

pub fn barrier_functions(n: usize, a: usize) -> Result<(f64, f64)> {
    let (h1, h2) = barrier_functions_exact(n, a)?;
    Ok((to_f64(&h1), to_f64(&h2)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub label: String,
    pub value: f64,
    pub exact: String,
}

/// Barriers ordered as `V(C_kmax) - V(B_kmax) < ... < V(C_1) - V(B_1) <
/// V(C_1) - V(B_0) < V(C_2) - V(B_1) < ...`, computed exactly from the
/// family potentials. Fails if the chain is not strictly increasing.
pub fn bk_chain(n: usize) -> Result<Vec<ChainLink>> {
    check_n(n)?;
    let km = k_max(n);
    let mut items: Vec<(String, Q)> = Vec::new();
    let vb = |k| family_potential_exact(n, k, FamilyKind::B);
    let vc = |k| family_potential_exact(n, k, FamilyKind::C);
    for k in (1..=km).rev() {
        items.push((format!("V(C{k})-V(B{k})"), vc(k)? - vb(k)?));
    }
    for k in 0..km {
        items.push((format!("V(C{})-V(B{k})", k + 1), vc(k + 1)? - vb(k)?));
    }
    for w in items.windows(2) {
        if w[0].1 >= w[1].1 {
            return Err(Error::Numeric(format!(
                "barrier chain broken at n = {n}: {} = {} >= {} = {}",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    Ok(items
        .into_iter()
        .map(|(label, v)| ChainLink {
            label,
            value: to_f64(&v),
            exact: v.to_string(),
        })
        .collect())
}

/// Ordered blocks with the margin of the metastable hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub n: usize,
    pub gamma: f64,
    pub blocks: Vec<String>,
    /// Escape height of each block towards all lower blocks; `None` for the
    /// bottom block.
    pub escape_heights: Vec<Option<f64>>,
    /// Smallest margin; `None` with a single block.
    pub theta: Option<f64>,
    /// Exact margin when available.
    pub theta_exact: Option<String>,
    pub valid: bool,
}

/// Zero-coupling hierarchy `B_0 < B_1 < ... < B_kmax` from the closed-form
/// barriers. Block `B_k`, `k >= 1`, escapes over `V(C_k) - V(B_k)`; lower
/// blocks need at least `V(C_1) - V(B_0)` (for `B_0`) or
/// `V(C_l) - V(B_l)` (for `B_l`) to reach any other block.
pub fn bk_hierarchy_exact(n: usize) -> Result<HierarchyReport> {
    bk_chain(n)?;
    let km = k_max(n);
    let vb = |k| family_potential_exact(n, k, FamilyKind::B);
    let vc = |k| family_potential_exact(n, k, FamilyKind::C);
    let mut escape = vec![None];
    let mut theta: Option<Q> = None;
    for k in 1..=km {
        let e = vc(k)? - vb(k)?;
        let mut floor = vc(1)? - vb(0)?;
        for l in 1..k {
            floor = floor.min(vc(l)? - vb(l)?);
        }
        let t = floor - e;
        theta = Some(theta.map_or(t, |th: Q| th.min(t)));
        escape.push(Some(to_f64(&e)));
    }
    let valid = theta.is_none_or(|t| t > q(0));
    Ok(HierarchyReport {
        n,
        gamma: 0.0,
        blocks: (0..=km).map(|k| format!("B{k}")).collect(),
        escape_heights: escape,
        theta: theta.map(|t| to_f64(&t)),
        theta_exact: theta.map(|t| t.to_string()),
        valid,
    })
}
