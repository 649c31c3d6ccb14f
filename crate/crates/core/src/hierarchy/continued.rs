//! Transition graph with potentials continued to positive coupling.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::hierarchy::families::{bk_hierarchy_exact, HierarchyReport};
use crate::hierarchy::minimax::{hierarchy_margin, LevelGraph};
use crate::landscape::continuation::continue_to_gamma;
use crate::landscape::graph::{build_transition_graph, GraphMode, TransitionGraph};
use crate::landscape::points::StationaryPoint;
use crate::landscape::triples::{k_max, Family};

#[derive(Debug, Clone)]
pub struct ContinuedLandscape {
    pub gamma: f64,
    pub graph: TransitionGraph,
    pub node_potential: Vec<f64>,
    pub saddle_potential: Vec<f64>,
}

/// Continues one representative per symmetry orbit and assigns its
/// potential to the whole orbit. Requires the full graph (`n <= 10`).
pub fn continued_landscape(n: usize, gamma: f64) -> Result<ContinuedLandscape> {
    let graph = build_transition_graph(n, GraphMode::Full)?;
    let mut reps: HashMap<Vec<i64>, &StationaryPoint> = HashMap::new();
    for p in graph.nodes.iter().map(|nd| &nd.point).chain(graph.edges.iter().map(|e| &e.saddle.point)) {
        reps.entry(p.orbit_key()).or_insert(p);
    }
    let reps: Vec<(Vec<i64>, &StationaryPoint)> = reps.into_iter().collect();
    let values: Vec<(Vec<i64>, f64)> = reps
        .par_iter()
        .map(|(k, p)| continue_to_gamma(p, gamma).map(|q| (k.clone(), q.potential)))
        .collect::<Result<_>>()?;
    let values: HashMap<Vec<i64>, f64> = values.into_iter().collect();
    let node_potential = graph.nodes.iter().map(|nd| values[&nd.point.orbit_key()]).collect();
    let saddle_potential = graph.edges.iter().map(|e| values[&e.saddle.point.orbit_key()]).collect();
    Ok(ContinuedLandscape {
        gamma,
        graph,
        node_potential,
        saddle_potential,
    })
}

impl ContinuedLandscape {
    pub fn level_graph(&self) -> LevelGraph<f64> {
        let mut g = LevelGraph::new(self.node_potential.clone());
        for (e, &v) in self.graph.edges.iter().zip(&self.saddle_potential) {
            g.add_edge(e.lower, e.upper, v);
        }
        g
    }
}

/// Verifies `B_0 < B_1 < ... < B_kmax`. At zero coupling the exact closed
/// forms are used; otherwise the potentials of the continued graph
/// (`n <= 10`).
pub fn verify_bk_hierarchy(n: usize, gamma: f64) -> Result<HierarchyReport> {
    if gamma == 0.0 {
        return bk_hierarchy_exact(n);
    }
    let land = continued_landscape(n, gamma)?;
    let km = k_max(n);
    let blocks: Vec<Vec<usize>> = (0..=km)
        .map(|k| {
            (0..land.graph.nodes.len())
                .filter(|&i| land.graph.nodes[i].family == Family::B(k))
                .collect()
        })
        .collect();
    let margin = hierarchy_margin(&land.level_graph(), &blocks);
    Ok(HierarchyReport {
        n,
        gamma,
        blocks: (0..=km).map(|k| format!("B{k}")).collect(),
        escape_heights: margin.escape,
        theta: margin.theta,
        theta_exact: None,
        valid: margin.theta.is_none_or(|t| t > 0.0),
    })
}
