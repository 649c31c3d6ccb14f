use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hierarchy::interface::{classify_b0_state, InterfaceState};
use crate::landscape::continuation::continue_to_gamma;
use crate::landscape::triples::k_max;
use crate::model::check_size;
use crate::rates::kramers::bk_pair;

/// Distance to `+-1` below which every site counts as settled.
pub const B0_RADIUS: f64 = 0.3;
/// Tolerance on sorted coordinates when matching a `B_k` family.
pub const FAMILY_TOL: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Label {
    B0(InterfaceState),
    Family(usize),
    Transient,
}

impl Label {
    pub fn interfaces(&self) -> Option<usize> {
        match self {
            Label::B0(s) => Some(s.p),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::B0(s) => write!(f, "{}", s.klass),
            Label::Family(k) => write!(f, "B{k}"),
            Label::Transient => write!(f, "transient"),
        }
    }
}

/// Sorted coordinates of one `B_k` point per `k >= 1`, with both signs.
#[derive(Debug, Clone)]
pub struct Classifier {
    pub n: usize,
    pub gamma: f64,
    families: Vec<(usize, Vec<f64>)>,
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

impl Classifier {
    pub fn new(n: usize, gamma: f64) -> Result<Classifier> {
        check_size(n)?;
        let mut families = Vec::new();
        for k in 1..=k_max(n) {
            let (x, _) = bk_pair(n, k)?;
            let x = if gamma > 0.0 { continue_to_gamma(&x, gamma)? } else { x };
            let neg: Vec<f64> = x.values().iter().map(|v| -v).collect();
            families.push((k, sorted(x.values())));
            families.push((k, sorted(&neg)));
        }
        Ok(Classifier { n, gamma, families })
    }

    pub fn classify(&self, x: &[f64]) -> Label {
        classify_with(&self.families, x)
    }
}

fn classify_with(families: &[(usize, Vec<f64>)], x: &[f64]) -> Label {
    if x.iter().all(|v| (v.abs() - 1.0).abs() < B0_RADIUS) {
        let bits: Vec<i8> = x.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect();
        if let Ok(s) = classify_b0_state(&bits) {
            return Label::B0(s);
        }
    }
    let s = sorted(x);
    for (k, f) in families {
        if f.len() == s.len() && f.iter().zip(&s).all(|(a, b)| (a - b).abs() < FAMILY_TOL) {
            return Label::Family(*k);
        }
    }
    Label::Transient
}

/// Nearest-family label at zero coupling.
pub fn classify_configuration(x: &[f64]) -> Result<Label> {
    Ok(Classifier::new(x.len(), 0.0)?.classify(x))
}
