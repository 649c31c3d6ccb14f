use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::points::{connect_saddle, StationaryPoint};
use crate::landscape::triples::{
    family_k_range, family_triple, triple_cardinality, Family, FamilyKind, Triple,
};
use crate::model::check_size;

/// Largest lattice for which every point is listed explicitly.
pub const FULL_ENUMERATION_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphMode {
    Full,
    OrbitQuotient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub key: String,
    pub family: Family,
    pub multiplicity: u128,
    pub point: StationaryPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub saddle: GraphNode,
    pub lower: usize,
    pub upper: usize,
}

/// Minima joined through index-1 saddles. In quotient mode each node stands
/// for all points sharing a triple and branch, i.e. an orbit of the full
/// permutation-and-sign symmetry of the uncoupled landscape; multiplicities
/// give orbit sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionGraph {
    pub n: usize,
    pub mode: GraphMode,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

fn key_string(p: &StationaryPoint) -> String {
    let sym: String = p
        .labels
        .iter()
        .zip(p.values())
        .map(|(&l, &v)| {
            if v.abs() < 1e-12 {
                '0'
            } else if v > 0.0 {
                (b'a' + l) as char
            } else {
                (b'A' + l) as char
            }
        })
        .collect();
    format!("{}:{}", p.family, sym)
}

/// Every word over `{0,1,2}` with the given label counts, in lexicographic order.
pub fn label_words(counts: [usize; 3]) -> Vec<Vec<u8>> {
    fn rec(rem: &mut [usize; 3], cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rem.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for l in 0..3u8 {
            if rem[l as usize] > 0 {
                rem[l as usize] -= 1;
                cur.push(l);
                rec(rem, cur, out);
                cur.pop();
                rem[l as usize] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut rem = counts;
    rec(&mut rem, &mut Vec::new(), &mut out);
    out
}

/// All points with the given triple, both sign branches, deduplicated.
pub fn points_of_triple(t: &Triple) -> Result<Vec<StationaryPoint>> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    let signs: &[i8] = if t.is_sign_symmetric() { &[1] } else { &[1, -1] };
    for &s in signs {
        for w in label_words(t.counts()) {
            let p = StationaryPoint::from_labels(w, s)?;
            if seen.insert(p.site_key(), ()).is_none() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn representative(t: &Triple) -> Result<StationaryPoint> {
    // Labels sorted so that the alpha_1 block comes first.
    let mut labels = vec![1u8; t.a1];
    labels.extend(std::iter::repeat_n(0u8, t.a0));
    labels.extend(std::iter::repeat_n(2u8, t.a2));
    StationaryPoint::from_labels(labels, 1)
}

pub fn build_transition_graph(n: usize, mode: GraphMode) -> Result<TransitionGraph> {
    check_size(n)?;
    match mode {
        GraphMode::Full => build_full(n),
        GraphMode::OrbitQuotient => build_quotient(n),
    }
}

fn build_full(n: usize) -> Result<TransitionGraph> {
    if n > FULL_ENUMERATION_MAX_N {
        return Err(Error::input(format!(
            "full enumeration is limited to n <= {FULL_ENUMERATION_MAX_N}; use the orbit quotient"
        )));
    }
    let mut nodes = Vec::new();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    for k in family_k_range(n, FamilyKind::B) {
        for p in points_of_triple(&family_triple(n, k, FamilyKind::B)?)? {
            index.insert(p.site_key(), nodes.len());
            nodes.push(GraphNode {
                key: key_string(&p),
                family: p.family,
                multiplicity: 1,
                point: p,
            });
        }
    }
    let mut edges = Vec::new();
    for k in family_k_range(n, FamilyKind::C) {
        for z in points_of_triple(&family_triple(n, k, FamilyKind::C)?)? {
            let ends = connect_saddle(&z)?;
            let find = |p: &StationaryPoint| {
                index.get(&p.site_key()).copied().ok_or_else(|| {
                    Error::Numeric(format!("endpoint of saddle {} is not an enumerated minimum", key_string(&z)))
                })
            };
            let (lower, upper) = (find(&ends.lower)?, find(&ends.upper)?);
            edges.push(GraphEdge {
                saddle: GraphNode {
                    key: key_string(&z),
                    family: z.family,
                    multiplicity: 1,
                    point: z,
                },
                lower,
                upper,
            });
        }
    }
    Ok(TransitionGraph {
        n,
        mode: GraphMode::Full,
        nodes,
        edges,
    })
}

fn build_quotient(n: usize) -> Result<TransitionGraph> {
    let mut nodes = Vec::new();
    for k in family_k_range(n, FamilyKind::B) {
        let t = family_triple(n, k, FamilyKind::B)?;
        let p = representative(&t)?;
        nodes.push(GraphNode {
            key: p.family.to_string(),
            family: p.family,
            multiplicity: triple_cardinality(&t)?,
            point: p,
        });
    }
    let mut edges = Vec::new();
    for k in family_k_range(n, FamilyKind::C) {
        let t = family_triple(n, k, FamilyKind::C)?;
        let z = representative(&t)?;
        let ends = connect_saddle(&z)?;
        let find = |f: Family| nodes.iter().position(|nd: &GraphNode| nd.family == f);
        let (lower, upper) = match (find(ends.lower.family), find(ends.upper.family)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Numeric("saddle endpoint family missing".into())),
        };
        edges.push(GraphEdge {
            saddle: GraphNode {
                key: z.family.to_string(),
                family: z.family,
                multiplicity: triple_cardinality(&t)?,
                point: z,
            },
            lower,
            upper,
        });
    }
    Ok(TransitionGraph {
        n,
        mode: GraphMode::OrbitQuotient,
        nodes,
        edges,
    })
}

impl TransitionGraph {
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.lower == node) as usize + (e.upper == node) as usize)
            .sum()
    }

    /// Edge multiplicity summed over all saddles.
    pub fn edge_count(&self) -> u128 {
        self.edges.iter().map(|e| e.saddle.multiplicity).sum()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph transitions_n{} {{", self.n);
        for (i, nd) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                s,
                "  m{i} [label=\"{}\\nV={:.6}\\nx{}\"];",
                nd.key, nd.point.potential, nd.multiplicity
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  m{} -- m{} [label=\"{}\"];",
                e.lower, e.upper, e.saddle.family
            );
        }
        s.push_str("}\n");
        s
    }
}
