//! Communication heights on a graph of minima joined by saddles, and the
//! margin of a partition into blocks.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::Sub;

/// Minima as nodes with their potential levels; an edge carries the level of
/// the saddle joining its endpoints.
#[derive(Debug, Clone)]
pub struct LevelGraph<T> {
    pub level: Vec<T>,
    pub adj: Vec<Vec<(usize, T)>>,
}

struct Entry<T>(T, usize);

impl<T: PartialOrd> PartialEq for Entry<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for Entry<T> {}
impl<T: PartialOrd> PartialOrd for Entry<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: PartialOrd> Ord for Entry<T> {
    // Reversed: BinaryHeap pops the lowest level first.
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.partial_cmp(&self.0).unwrap_or(Ordering::Equal).then(o.1.cmp(&self.1))
    }
}

impl<T: Copy + PartialOrd + Sub<Output = T>> LevelGraph<T> {
    pub fn new(level: Vec<T>) -> Self {
        let adj = vec![Vec::new(); level.len()];
        LevelGraph { level, adj }
    }

    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize, saddle: T) {
        self.adj[a].push((b, saddle));
        if a != b {
            self.adj[b].push((a, saddle));
        }
    }

    /// For every node, the lowest possible highest level on a path to the
    /// target set; `None` if no path exists.
    pub fn bottleneck(&self, targets: &[bool]) -> Vec<Option<T>> {
        let mut best: Vec<Option<T>> = vec![None; self.len()];
        let mut heap = BinaryHeap::new();
        for (v, _) in targets.iter().enumerate().filter(|(_, &t)| t) {
            best[v] = Some(self.level[v]);
            heap.push(Entry(self.level[v], v));
        }
        while let Some(Entry(h, u)) = heap.pop() {
            if best[u].is_some_and(|b| b < h) {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let cand = if w > h { w } else { h };
                if best[v].is_none_or(|b| cand < b) {
                    best[v] = Some(cand);
                    heap.push(Entry(cand, v));
                }
            }
        }
        best
    }

    /// `H(x, targets)` for every node.
    pub fn comm_heights(&self, targets: &[bool]) -> Vec<Option<T>> {
        self.bottleneck(targets)
            .into_iter()
            .zip(&self.level)
            .map(|(b, &l)| b.map(|b| b - l))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Margin<T> {
    /// Largest `H(x, P_1 u ... u P_{k-1})` over `x` in `P_k`; `None` for the
    /// first block.
    pub escape: Vec<Option<T>>,
    /// Smallest slack over all `k` and `l < k`; `None` with one block.
    pub theta: Option<T>,
    /// Pairs `(k, l)` at which the slack is attained.
    pub tight: Vec<(usize, usize)>,
}

fn mask(n: usize, blocks: &[Vec<usize>], pick: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut m = vec![false; n];
    for (b, nodes) in blocks.iter().enumerate() {
        if pick(b) {
            for &v in nodes {
                m[v] = true;
            }
        }
    }
    m
}

/// Evaluates the block-ordering condition: for `k >= 2` every `x` in `P_k`
/// must reach the lower blocks more easily than any `y` in a lower block
/// `P_l` reaches the rest of `P_1 u ... u P_k`. Unreachable targets count as
/// infinitely high.
pub fn hierarchy_margin<T>(g: &LevelGraph<T>, blocks: &[Vec<usize>]) -> Margin<T>
where
    T: Copy + PartialOrd + Sub<Output = T>,
{
    let n = g.len();
    let mut escape = vec![None];
    let mut theta: Option<T> = None;
    let mut tight = Vec::new();
    for k in 1..blocks.len() {
        let down = g.comm_heights(&mask(n, blocks, |b| b < k));
        let mut e: Option<T> = None;
        let mut stuck = false;
        for &x in &blocks[k] {
            match down[x] {
                Some(h) => {
                    if e.is_none_or(|e| h > e) {
                        e = Some(h)
                    }
                }
                None => stuck = true,
            }
        }
        escape.push(if stuck { None } else { e });
        let Some(e) = e else { continue };
        for l in 0..k {
            let other = g.comm_heights(&mask(n, blocks, |b| b <= k && b != l));
            let r = blocks[l].iter().filter_map(|&y| other[y]).fold(None, |acc: Option<T>, h| {
                Some(match acc {
                    Some(a) if a < h => a,
                    _ => h,
                })
            });
            let Some(r) = r else { continue };
            let slack = r - e;
            match theta {
                Some(t) if t < slack => {}
                Some(t) if !(slack < t) => tight.push((k, l)),
                _ => {
                    theta = Some(slack);
                    tight = vec![(k, l)];
                }
            }
        }
    }
    Margin { escape, theta, tight }
}
