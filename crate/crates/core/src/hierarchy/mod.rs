pub mod ahier;
pub mod continued;
pub mod families;
pub mod interface;
pub mod minimax;
pub mod tree;

pub use ahier::{a_block_order, a_escape_closed_form, verify_a_hierarchy};
pub use continued::{continued_landscape, verify_bk_hierarchy, ContinuedLandscape};
pub use families::{
    barrier_functions, barrier_functions_exact, bk_chain, family_potential, family_potential_exact,
    HierarchyReport,
};
pub use interface::{
    allowed_moves, classify_b0_state, saddle_first_order, CommHeight, InterfaceState, Move,
    SaddleInterfaceTriple, StateClass, TransitionType,
};
pub use tree::{disconnectivity_tree, DisconnectivityTree, TreeLeaf, TreeSaddle};

use crate::error::Result;
use crate::landscape::graph::{build_transition_graph, GraphMode};

/// Family-level tree at zero coupling from the orbit-quotient graph.
pub fn family_tree(n: usize) -> Result<DisconnectivityTree> {
    let g = build_transition_graph(n, GraphMode::OrbitQuotient)?;
    let leaves = g
        .nodes
        .iter()
        .map(|nd| TreeLeaf {
            key: nd.key.clone(),
            potential: nd.point.potential,
        })
        .collect();
    let saddles: Vec<TreeSaddle> = g
        .edges
        .iter()
        .map(|e| TreeSaddle {
            key: e.saddle.key.clone(),
            potential: e.saddle.point.potential,
            a: e.lower,
            b: e.upper,
        })
        .collect();
    Ok(disconnectivity_tree(leaves, &saddles))
}
