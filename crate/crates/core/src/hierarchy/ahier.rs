//! Ordering of the `B_0` minima by interface classes at first order in the
//! coupling.
//!
//! Every exchange crosses a `C_1` saddle whose zeroth-order height is the
//! same, so communication heights differ only in the first-order term.
//! Levels are integers in units of `1/(4D)`: a state with `p` interfaces sits
//! at `4D p`, the saddle of an exchange at `H0_LEVEL + 4D p + num(H^1)`. The
//! offset stands in for the zeroth-order height and keeps every saddle above
//! both of its endpoints.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hierarchy::families::{to_f64, HierarchyReport, Q};
use crate::hierarchy::interface::{h1_numer, move_type, StateClass, TransitionType};
use crate::hierarchy::minimax::{hierarchy_margin, LevelGraph};

/// Largest ring for which the `B_0` state graph is built.
pub const A_HIERARCHY_MAX_N: usize = 24;

/// Exceeds any first-order level difference on rings up to the size limit.
pub const H0_LEVEL: i128 = 1 << 80;

fn d4(n: usize) -> i128 {
    let m = (n / 2) as i128;
    4 * (m * m - 3 * m + 3)
}

fn check(n: usize) -> Result<()> {
    if n < 8 || n % 2 != 0 || n > A_HIERARCHY_MAX_N {
        return Err(Error::input(format!(
            "interface hierarchy needs even n in [8, {A_HIERARCHY_MAX_N}], got {n}"
        )));
    }
    Ok(())
}

fn rotl(w: u64, n: usize) -> u64 {
    let full = (1u64 << n) - 1;
    ((w << 1) | (w >> (n - 1))) & full
}

fn reverse(w: u64, n: usize) -> u64 {
    w.reverse_bits() >> (64 - n)
}

/// Smallest image of the bit word under rotations, reflections and
/// particle/hole exchange.
pub fn canonical_mask(w: u64, n: usize) -> u64 {
    let full = (1u64 << n) - 1;
    let mut best = u64::MAX;
    for base in [w, reverse(w, n), !w & full, reverse(!w & full, n)] {
        let mut x = base;
        for _ in 0..n {
            best = best.min(x);
            x = rotl(x, n);
        }
    }
    best
}

fn bit(w: u64, i: usize) -> bool {
    w >> i & 1 == 1
}

fn mask_class(w: u64, n: usize) -> (usize, StateClass) {
    let p = (0..n).filter(|&i| bit(w, i) != bit(w, (i + 1) % n)).count();
    let iso = (0..n).any(|i| bit(w, (i + n - 1) % n) != bit(w, i) && bit(w, (i + 1) % n) != bit(w, i));
    let c = if p >= 4 && !iso { StateClass::APrime(p) } else { StateClass::A(p) };
    (p, c)
}

/// Orbit representatives of the balanced words with the minimax levels of
/// their exchanges.
#[derive(Debug, Clone)]
pub struct InterfaceGraph {
    pub n: usize,
    pub reps: Vec<u64>,
    pub class: Vec<StateClass>,
    pub graph: LevelGraph<i128>,
}

pub fn interface_graph(n: usize) -> Result<InterfaceGraph> {
    check(n)?;
    let m = n / 2;
    let reps: Vec<u64> = (0u64..1 << n)
        .filter(|w| w.count_ones() as usize == m && canonical_mask(*w, n) == *w)
        .collect();
    let index: HashMap<u64, usize> = reps.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let d = d4(n);
    let class: Vec<StateClass> = reps.iter().map(|&w| mask_class(w, n).1).collect();
    let level = reps.iter().map(|&w| d * mask_class(w, n).0 as i128).collect();
    let mut graph = LevelGraph::new(level);
    for (a, &w) in reps.iter().enumerate() {
        let p = mask_class(w, n).0;
        for i in (0..n).filter(|&i| bit(w, i)) {
            for j in (0..n).filter(|&j| !bit(w, j)) {
                let t = move_type(n, |s| bit(w, s), i, j);
                let b = index[&canonical_mask(w ^ (1 << i) ^ (1 << j), n)];
                let h = H0_LEVEL + graph.level[a] + h1_numer(t, n, p)?;
                // The reverse exchange contributes the opposite arc.
                graph.adj[a].push((b, h));
            }
        }
    }
    Ok(InterfaceGraph { n, reps, class, graph })
}

/// `A_2, A'_4, ..., A'_{M'}, A_4, ..., A_N` with `M'` the largest even number
/// not above `M`.
pub fn a_block_order(n: usize) -> Vec<StateClass> {
    let m = n / 2;
    let mut v = vec![StateClass::A(2)];
    v.extend((4..=m).step_by(2).map(StateClass::APrime));
    v.extend((4..=n).step_by(2).map(StateClass::A));
    v
}

/// Closed-form first-order escape height of a block towards the blocks
/// below it.
pub fn a_escape_closed_form(n: usize, c: StateClass) -> Option<Q> {
    let p = match c {
        StateClass::A(2) => return None,
        StateClass::APrime(p) => p,
        StateClass::A(p) => p,
    };
    let t = match c {
        StateClass::APrime(_) => TransitionType::III,
        _ => TransitionType::VI,
    };
    h1_numer(t, n, p).ok().map(|num| Q::new(num, d4(n)))
}

/// Checks `A_2 < A'_4 < ... < A'_{M'} < A_4 < ... < A_N` on the full state
/// graph. The margin is the coefficient of `gamma` in the first-order
/// expansion. Fails if a block is empty or escapes differently from the
/// closed forms.
pub fn verify_a_hierarchy(n: usize) -> Result<HierarchyReport> {
    let g = interface_graph(n)?;
    let order = a_block_order(n);
    let blocks: Vec<Vec<usize>> = order
        .iter()
        .map(|c| (0..g.reps.len()).filter(|&i| g.class[i] == *c).collect())
        .collect();
    if let Some(k) = blocks.iter().position(|b| b.is_empty()) {
        return Err(Error::Numeric(format!("block {} has no states at n = {n}", order[k])));
    }
    let margin = hierarchy_margin(&g.graph, &blocks);
    let d = d4(n);
    let mut escape = Vec::new();
    for (k, e) in margin.escape.iter().enumerate() {
        let e = &e.map(|e| e - H0_LEVEL);
        if let (Some(e), Some(cf)) = (e, a_escape_closed_form(n, order[k])) {
            if Q::new(*e, d) != cf {
                return Err(Error::Numeric(format!(
                    "escape of {} is {} on the state graph, closed form {}",
                    order[k],
                    Q::new(*e, d),
                    cf
                )));
            }
        }
        escape.push(e.map(|e| e as f64 / d as f64));
    }
    let theta = margin.theta.map(|t| Q::new(t, d));
    Ok(HierarchyReport {
        n,
        gamma: 0.0,
        blocks: order.iter().map(|c| c.to_string()).collect(),
        escape_heights: escape,
        theta: theta.map(|t| to_f64(&t)),
        theta_exact: theta.map(|t| t.to_string()),
        valid: theta.is_some_and(|t| t > Q::from_integer(0)),
    })
}
