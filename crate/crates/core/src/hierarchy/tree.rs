//! Disconnectivity tree: minima joined in order of the lowest saddle
//! between their components.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeLeaf {
    pub key: String,
    pub potential: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSaddle {
    pub key: String,
    pub potential: f64,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeMerge {
    pub saddle: String,
    pub height: f64,
    /// Leaf indices of the lowest minimum on each side; `deeper` survives.
    pub deeper: usize,
    pub shallower: usize,
    /// `height` minus the potential of `shallower`.
    pub escape_depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisconnectivityTree {
    pub leaves: Vec<TreeLeaf>,
    pub merges: Vec<TreeMerge>,
    /// Number of connected components; above 1 the result is a forest.
    pub components: usize,
    pub warning: Option<String>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Ties in potential are broken by key so that the result does not depend
/// on the input order.
pub fn disconnectivity_tree(leaves: Vec<TreeLeaf>, saddles: &[TreeSaddle]) -> DisconnectivityTree {
    let n = leaves.len();
    let lower = |a: usize, b: usize| -> bool {
        let (x, y) = (&leaves[a], &leaves[b]);
        (x.potential, &x.key) < (y.potential, &y.key)
    };
    let mut order: Vec<&TreeSaddle> = saddles.iter().filter(|s| s.a < n && s.b < n).collect();
    order.sort_by(|x, y| x.potential.total_cmp(&y.potential).then_with(|| x.key.cmp(&y.key)));
    let mut parent: Vec<usize> = (0..n).collect();
    // Lowest leaf of each component, stored at its root.
    let mut bottom: Vec<usize> = (0..n).collect();
    let mut merges = Vec::new();
    for s in order {
        let (ra, rb) = (find(&mut parent, s.a), find(&mut parent, s.b));
        if ra == rb {
            continue;
        }
        let (ba, bb) = (bottom[ra], bottom[rb]);
        let (deep, shallow) = if lower(ba, bb) { (ba, bb) } else { (bb, ba) };
        parent[rb] = ra;
        bottom[ra] = deep;
        merges.push(TreeMerge {
            saddle: s.key.clone(),
            height: s.potential,
            deeper: deep,
            shallower: shallow,
            escape_depth: s.potential - leaves[shallow].potential,
        });
    }
    let components = (0..n).filter(|&i| find(&mut parent, i) == i).count();
    let warning = (components > 1).then(|| format!("landscape is disconnected: {components} components"));
    DisconnectivityTree {
        leaves,
        merges,
        components,
        warning,
    }
}

impl DisconnectivityTree {
    /// Metastable order: the lowest minimum of each component first, then
    /// the remaining minima by decreasing escape depth.
    pub fn metastable_order(&self) -> Vec<String> {
        let absorbed: Vec<usize> = self.merges.iter().map(|m| m.shallower).collect();
        let mut roots: Vec<usize> = (0..self.leaves.len()).filter(|i| !absorbed.contains(i)).collect();
        roots.sort_by(|&a, &b| {
            self.leaves[a]
                .potential
                .total_cmp(&self.leaves[b].potential)
                .then_with(|| self.leaves[a].key.cmp(&self.leaves[b].key))
        });
        let mut ms: Vec<&TreeMerge> = self.merges.iter().collect();
        ms.sort_by(|a, b| {
            b.escape_depth
                .total_cmp(&a.escape_depth)
                .then_with(|| self.leaves[a.shallower].key.cmp(&self.leaves[b.shallower].key))
        });
        roots
            .into_iter()
            .chain(ms.into_iter().map(|m| m.shallower))
            .map(|i| self.leaves[i].key.clone())
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph disconnectivity {\n  rankdir=BT;\n");
        for (i, l) in self.leaves.iter().enumerate() {
            let _ = writeln!(s, "  l{i} [shape=point, xlabel=\"{}\\nV={:.6}\"];", l.key, l.potential);
        }
        // Each merge node hangs above the two components it joins.
        let mut top: Vec<String> = (0..self.leaves.len()).map(|i| format!("l{i}")).collect();
        let mut owner: Vec<usize> = (0..self.leaves.len()).collect();
        for (k, m) in self.merges.iter().enumerate() {
            let _ = writeln!(s, "  s{k} [shape=box, label=\"{}\\nV={:.6}\"];", m.saddle, m.height);
            let (a, b) = (owner[m.deeper], owner[m.shallower]);
            let _ = writeln!(s, "  {} -> s{k};", top[a]);
            let _ = writeln!(s, "  {} -> s{k};", top[b]);
            top[a] = format!("s{k}");
            for o in owner.iter_mut() {
                if *o == b {
                    *o = a;
                }
            }
        }
        s.push_str("}\n");
        s
    }
}
