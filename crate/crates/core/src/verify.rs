//! Named invariant checks behind `metastable verify`.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::families::{barrier_functions_exact, bk_chain};
use crate::hierarchy::{allowed_moves, classify_b0_state, verify_a_hierarchy, verify_bk_hierarchy};
use crate::landscape::continuation::continue_to_gamma;
use crate::landscape::graph::{build_transition_graph, GraphMode};
use crate::landscape::horseshoe::periodic_solutions;
use crate::landscape::points::StationaryPoint;
use crate::landscape::triples::{cubic_roots, family_cardinality, FamilyKind};
use crate::landscape::Family;
use crate::model;
use crate::rates::gap::{gap_exponent_closed_form, prefactor_ratio_closed_form, two_orbit_chain};
use crate::rates::hessian::{hessian_closed_forms, hessian_data};
use crate::rates::symmetry::representatives;
use crate::rates::{irreps, reduced_block, IrrepSpec};
use crate::simulate::kmc::{alternating_state, run_jump, RateModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Numeric(msg.into()))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn landscape_n4() -> Result<String> {
    let g = build_transition_graph(4, GraphMode::Full)?;
    ensure(g.nodes.len() == 6 && g.edges.len() == 12, "expected 6 minima and 12 saddles")?;
    ensure((0..6).all(|i| g.degree(i) == 4), "octahedron needs degree 4 everywhere")?;
    Ok("6 minima, 12 saddles, all degrees 4".into())
}

fn hessians() -> Result<String> {
    for m in [4usize, 5, 7, 8] {
        let r = representatives(2 * m)?;
        let cf = hessian_closed_forms(m)?;
        let hx = hessian_data(0.0, r.x.values())?;
        let hz = hessian_data(0.0, r.z.values())?;
        let lm = hz.lambda_minus.unwrap_or(f64::NAN);
        ensure(
            rel(hx.det, cf.det_min) < 1e-10 && rel(hz.det, cf.det_saddle) < 1e-10 && rel(lm, cf.lambda_minus) < 1e-10,
            format!("closed forms disagree at M = {m}"),
        )?;
    }
    Ok("M in {4,5,7,8} within 1e-10".into())
}

fn cardinalities() -> Result<String> {
    let b0 = family_cardinality(8, 0, FamilyKind::B)?;
    let b1 = family_cardinality(8, 1, FamilyKind::B)?;
    let c1 = family_cardinality(8, 1, FamilyKind::C)?;
    ensure((b0, b1, c1) == (70, 112, 560) && c1 == b1 * 5, format!("got {b0}/{b1}/{c1}"))?;
    let g = build_transition_graph(8, GraphMode::Full)?;
    ensure(g.edges.len() == 560, "saddle count")?;
    for e in &g.edges {
        let (a, b) = (&g.nodes[e.lower], &g.nodes[e.upper]);
        ensure(a.family == Family::B(0) && b.family == Family::B(1), format!("saddle {} misconnected", e.saddle.key))?;
    }
    Ok("70 / 112 / 560, every saddle joins B0 and B1".into())
}

fn finite_differences() -> Result<String> {
    let mut worst: (f64, f64) = (0.0, 0.0);
    for n in [4usize, 8, 10, 14] {
        for gamma in [0.0, 0.05] {
            let x: Vec<f64> = (0..n).map(|i| 0.9 * ((i as f64 * 1.7).sin() + 0.3 * (i as f64 * 0.4).cos())).collect();
            let g = model::gradient_raw(gamma, &x);
            let h = model::hessian_raw(gamma, &x);
            let step = 1e-5;
            for i in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += step;
                xm[i] -= step;
                let fd = (model::potential_raw(gamma, &xp) - model::potential_raw(gamma, &xm)) / (2.0 * step);
                let e = (fd - g[i]).abs() / g[i].abs().max(1.0);
                worst.0 = worst.0.max(e);
                let (gp, gm) = (model::gradient_raw(gamma, &xp), model::gradient_raw(gamma, &xm));
                for j in 0..n {
                    let fd = (gp[j] - gm[j]) / (2.0 * step);
                    let e = (fd - h[(j, i)]).abs() / h[(j, i)].abs().max(1.0);
                    worst.1 = worst.1.max(e);
                }
            }
        }
    }
    ensure(worst.0 <= 1e-6 && worst.1 <= 1e-5, format!("worst errors {:e} / {:e}", worst.0, worst.1))?;
    Ok(format!("worst relative errors {:.1e} (gradient), {:.1e} (Hessian)", worst.0, worst.1))
}

/// Continues every point of `pts` to `gamma`; residual, index and the
/// `sqrt(gamma)` strips are checked. Returns the largest residual.
fn continue_all(pts: &[&StationaryPoint], gamma: f64) -> Result<f64> {
    let h = gamma.sqrt();
    Ok(pts
        .par_iter()
        .map(|p| -> Result<f64> {
            let q = continue_to_gamma(p, gamma)?;
            ensure(q.numeric_index()? == p.morse_index, "index changed")?;
            let roots = cubic_roots(q.lambda);
            for (x, s) in q.values().iter().zip(p.root_symbols()) {
                ensure((x - roots[s]).abs() <= h, "coordinate left its strip")?;
            }
            Ok(q.drift_residual())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Non-contiguous `B1`/`C1` points at n = 8 fold or lose their index near
/// gamma = 0.0265, 0.0341 and 0.0413, so the whole graph is continued to
/// 0.02 and only the orbit representatives to 0.05.
fn continuation_n8() -> Result<String> {
    let full = build_transition_graph(8, GraphMode::Full)?;
    let all: Vec<&StationaryPoint> = full.nodes.iter().map(|n| &n.point).chain(full.edges.iter().map(|e| &e.saddle.point)).collect();
    let r1 = continue_all(&all, 0.02)?;
    let quot = build_transition_graph(8, GraphMode::OrbitQuotient)?;
    let reps: Vec<&StationaryPoint> = quot.nodes.iter().map(|n| &n.point).chain(quot.edges.iter().map(|e| &e.saddle.point)).collect();
    let r2 = continue_all(&reps, 0.05)?;
    let worst = r1.max(r2);
    ensure(worst <= 1e-10, format!("residual {worst:e}"))?;
    Ok(format!("{} points to 0.02, {} representatives to 0.05, max residual {worst:.1e}", all.len(), reps.len()))
}

fn horseshoe() -> Result<String> {
    let s = periodic_solutions(5, 0.05, 0.0, 0.01)?;
    ensure(s.len() == 243, format!("found {} solutions", s.len()))?;
    Ok("243 solutions".into())
}

fn chain() -> Result<String> {
    let mut count = 0;
    for n in (8..=200).step_by(2).filter(|n| n % 3 != 0) {
        bk_chain(n)?;
        let m = n / 2;
        let admissible: Vec<usize> = (n / 3 + 1..=m).collect();
        for w in admissible.windows(2) {
            let (h1a, h2a) = barrier_functions_exact(n, w[0])?;
            let (h1b, h2b) = barrier_functions_exact(n, w[1])?;
            ensure(h1b < h1a && h2b > h2a, format!("barrier monotonicity fails at n = {n}"))?;
        }
        ensure(verify_bk_hierarchy(n, 0.0)?.valid, format!("B_k order fails at n = {n}"))?;
        count += 1;
    }
    Ok(format!("{count} ring sizes"))
}

fn a_hierarchy() -> Result<String> {
    for n in [8, 10, 14, 16] {
        ensure(verify_a_hierarchy(n)?.valid, format!("A order fails at n = {n}"))?;
    }
    Ok("n in {8,10,14,16}".into())
}

/// Continued saddles of the two particle/hole exchange paths for `(i, j)`.
fn exchange_paths(bits: &[i8], i: usize, j: usize) -> Result<[[StationaryPoint; 2]; 2]> {
    let labels = |zero: usize, ones: i8, skip: usize| -> Vec<u8> {
        (0..bits.len())
            .map(|s| match s {
                _ if s == zero => 0,
                _ if bits[s] == ones && s != skip => 1,
                _ => 2,
            })
            .collect()
    };
    Ok([
        [
            StationaryPoint::from_labels(labels(i, 1, i), 1)?,
            StationaryPoint::from_labels(labels(j, 1, i), 1)?,
        ],
        [
            StationaryPoint::from_labels(labels(j, -1, j), -1)?,
            StationaryPoint::from_labels(labels(i, -1, j), -1)?,
        ],
    ])
}

fn comm_height_table() -> Result<String> {
    let gamma = 0.02;
    let mut rows = 0;
    let mut worst: f64 = 0.0;
    for w in ["+-++--+-", "++--++--", "+-+-+-+-", "+++-+---", "++-+--+-"] {
        let bits: Vec<i8> = w.chars().map(|c| if c == '+' { 1 } else { -1 }).collect();
        let s = classify_b0_state(&bits)?;
        let start = StationaryPoint::from_labels(bits.iter().map(|&b| if b == 1 { 1 } else { 2 }).collect(), 1)?;
        let x = continue_to_gamma(&start, gamma)?;
        let errs = allowed_moves(&s)
            .par_iter()
            .map(|mv| -> Result<f64> {
                let (i, j) = mv.site_pair;
                let mut h = f64::INFINITY;
                for path in exchange_paths(&bits, i, j)? {
                    let mut top = f64::NEG_INFINITY;
                    for z in path {
                        top = top.max(continue_to_gamma(&z, gamma)?.potential);
                    }
                    h = h.min(top);
                }
                Ok((h - x.potential - mv.comm_height.at(gamma)).abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        rows += errs.len();
        worst = errs.into_iter().fold(worst, f64::max);
    }
    ensure(worst <= 10.0 * gamma * gamma, format!("worst deviation {worst:e}"))?;
    Ok(format!("{rows} moves, worst deviation {worst:.1e} <= 10 gamma^2"))
}

fn gap_identities() -> Result<String> {
    for n in [8usize, 10, 14] {
        for p in irreps(n)?.into_iter().filter(|p| p.dim() == 2) {
            let IrrepSpec::TwoDim { l, .. } = p else { continue };
            let target = 4.0 * (l as f64 * PI / n as f64).sin().powi(2);
            for e in -3..=3 {
                let b = reduced_block(n, p, 1.0, 10f64.powi(e))?;
                ensure((b.gap_eigenvalue()? - target).abs() < 1e-12, format!("Schur complement off at n = {n}, l = {l}"))?;
            }
        }
    }
    let c = two_orbit_chain(8, 1.0, 1.0)?;
    ensure(c.x_states.len() == 8 && c.y_states.len() == 16, "two-orbit chain size")?;
    let (e0, _) = gap_exponent_closed_form(100)?;
    let e0 = *e0.numer() as f64 / *e0.denom() as f64;
    ensure((e0 - 0.25).abs() <= 0.02, "exponent at n = 100")?;
    let dev = (prefactor_ratio_closed_form(50) - 2f64.sqrt()).abs();
    Ok(format!("Schur identities hold; n = 100 exponent {e0:.5}, prefactor deviation {dev:.4} (O(1/N))"))
}

fn kmc() -> Result<String> {
    let model = RateModel::new(16, 0.09, 0.05)?;
    let finals = (0..100u64)
        .into_par_iter()
        .map(|s| -> Result<(usize, bool)> {
            let run = run_jump(&alternating_state(16)?, &model, 10_000, s)?;
            ensure(run.events.iter().all(|e| e.delta_p.abs() <= 4 && e.delta_p % 2 == 0), "bad delta p")?;
            Ok((run.final_state.p, run.final_state.p == 2))
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = finals.iter().map(|f| f.0 as f64).sum::<f64>() / finals.len() as f64;
    ensure(mean <= 6.0, format!("mean final interface count {mean}"))?;
    Ok(format!("mean final p = {mean:.2}"))
}

type CheckFn = fn() -> Result<String>;

pub fn checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("landscape_n4_octahedron", landscape_n4 as CheckFn),
        ("hessian_closed_forms", hessians),
        ("cardinalities_n8", cardinalities),
        ("finite_differences", finite_differences),
        ("continuation_n8", continuation_n8),
        ("horseshoe_n5", horseshoe),
        ("bk_chain_n_le_200", chain),
        ("a_hierarchy", a_hierarchy),
        ("comm_height_table_n8", comm_height_table),
        ("gap_identities", gap_identities),
        ("kmc_coarsening", kmc),
    ]
}

pub fn run_suite() -> Vec<Check> {
    checks()
        .into_iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let r = f();
            Check {
                name: name.into(),
                passed: r.is_ok(),
                detail: match r {
                    Ok(s) => s,
                    Err(e) => e.to_string(),
                },
                seconds: t.elapsed().as_secs_f64(),
            }
        })
        .collect()
}
