use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_size, LAMBDA_C};

/// Multiplicities of the three cubic roots among the coordinates of a
/// stationary point at zero coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub a0: usize,
    pub a1: usize,
    pub a2: usize,
}

impl Triple {
    pub fn new(a0: usize, a1: usize, a2: usize) -> Result<Triple> {
        if !(a0 <= a1 && a1 <= a2) {
            return Err(Error::input(format!("triple ({a0},{a1},{a2}) is not ordered")));
        }
        if 2 * a1 == a0 + a2 {
            return Err(Error::input(format!(
                "triple ({a0},{a1},{a2}) is degenerate (2 a1 = a0 + a2)"
            )));
        }
        Ok(Triple { a0, a1, a2 })
    }

    pub fn n(&self) -> usize {
        self.a0 + self.a1 + self.a2
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.a0, self.a1, self.a2]
    }

    /// Morse index of the constrained potential at zero coupling.
    pub fn index(&self) -> usize {
        let (a0, a1, a2) = (self.a0, self.a1, self.a2);
        if a0 == 0 && a1 == 0 {
            a2 - 1
        } else if 2 * a1 > a0 + a2 {
            a0
        } else {
            a2 - 1
        }
    }

    /// Both sign branches give the same point when two roots are opposite
    /// and the remaining one vanishes.
    pub fn is_sign_symmetric(&self) -> bool {
        self.a0 == self.a1 || self.a1 == self.a2
    }

    pub fn family(&self) -> Family {
        let n = self.n();
        let m = n / 2;
        let idx = self.index();
        if idx == 0 && self.a0 == 0 && self.a1 <= m && self.a2 == n - self.a1 {
            return Family::B(m - self.a1);
        }
        // a0 = 1 forces a2 = M + k - 1 with k = M - a1.
        if idx == 1 && self.a0 == 1 && self.a1 <= m {
            return Family::C(m - self.a1);
        }
        Family::Other { index: idx }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a0, self.a1, self.a2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    B(usize),
    C(usize),
    Other { index: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::B(k) => write!(f, "B{k}"),
            Family::C(k) => write!(f, "C{k}"),
            Family::Other { index } => write!(f, "other(index {index})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    B,
    C,
}

pub fn k_max(n: usize) -> usize {
    n / 6
}

/// Largest admissible `k` for the family. At `n = 4` the single saddle
/// triple `(1,1,2)` is reported as `C1` although `n/6 = 0`.
pub fn family_k_range(n: usize, kind: FamilyKind) -> std::ops::RangeInclusive<usize> {
    match kind {
        FamilyKind::B => 0..=k_max(n),
        FamilyKind::C => 1..=k_max(n).max(1),
    }
}

pub fn family_triple(n: usize, k: usize, kind: FamilyKind) -> Result<Triple> {
    check_size(n)?;
    if !family_k_range(n, kind).contains(&k) {
        return Err(Error::input(format!("k = {k} out of range for {kind:?} at n = {n}")));
    }
    let m = n / 2;
    match kind {
        FamilyKind::B => Triple::new(0, m - k, m + k),
        FamilyKind::C => Triple::new(1, m - k, m + k - 1),
    }
}

/// All ordered triples summing to `n`, with their index at zero coupling.
pub fn enumerate_triples(n: usize) -> Result<Vec<(Triple, usize)>> {
    if n % 3 == 0 {
        return Err(Error::UnsupportedSize(n));
    }
    let mut out = Vec::new();
    for a0 in 0..=n / 3 {
        for a1 in a0..=(n - a0) / 2 {
            let a2 = n - a0 - a1;
            let t = Triple { a0, a1, a2 };
            out.push((t, t.index()));
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Number of points sharing a triple: the multinomial coefficient, doubled
/// unless the two sign branches coincide.
pub fn triple_cardinality(t: &Triple) -> Result<u128> {
    let overflow = || Error::input(format!("cardinality of {t} overflows u128"));
    let n = t.n();
    let c = binomial(n, t.a0)
        .and_then(|b| b.checked_mul(binomial(n - t.a0, t.a1)?))
        .ok_or_else(overflow)?;
    if t.is_sign_symmetric() {
        Ok(c)
    } else {
        c.checked_mul(2).ok_or_else(overflow)
    }
}

pub fn family_cardinality(n: usize, k: usize, kind: FamilyKind) -> Result<u128> {
    triple_cardinality(&family_triple(n, k, kind)?)
}

/// The three roots of `s^3 - s = lambda` attached to a triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaRoots {
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub lambda: f64,
    pub sign: i8,
}

impl AlphaRoots {
    pub fn get(&self, j: usize) -> f64 {
        match j {
            0 => self.alpha0,
            1 => self.alpha1,
            _ => self.alpha2,
        }
    }
}

/// Both sign branches, `+` first.
pub fn alpha_from_triple(t: &Triple) -> Result<[AlphaRoots; 2]> {
    if t.a0 == 0 && t.a1 == 0 {
        return Err(Error::input("the triple (0,0,n) has no root assignment"));
    }
    let (a0, a1, a2) = (t.a0 as f64, t.a1 as f64, t.a2 as f64);
    let q = a0 * a0 + a1 * a1 + a2 * a2 - a0 * a1 - a0 * a2 - a1 * a2;
    if q <= 0.0 {
        return Err(Error::Numeric(format!("nonpositive quadratic form for {t}")));
    }
    let r = (1.0 / q).sqrt();
    let branch = |s: f64| {
        let alpha0 = s * (a1 - a2) * r;
        let alpha1 = s * (a2 - a0) * r;
        let alpha2 = s * (a0 - a1) * r;
        let lambda = [alpha0, alpha1, alpha2]
            .iter()
            .map(|a| a * a * a - a)
            .sum::<f64>()
            / 3.0;
        AlphaRoots {
            alpha0,
            alpha1,
            alpha2,
            lambda,
            sign: s as i8,
        }
    };
    let out = [branch(1.0), branch(-1.0)];
    debug_assert!(out[0].lambda.abs() < LAMBDA_C);
    Ok(out)
}

/// Roots of `s^3 - s - lambda` in increasing order, `|lambda| <= lambda_c`.
pub fn cubic_roots(lambda: f64) -> [f64; 3] {
    let c = (lambda / LAMBDA_C).clamp(-1.0, 1.0);
    let phi = c.acos() / 3.0;
    let s = 2.0 / 3f64.sqrt();
    let third = 2.0 * std::f64::consts::PI / 3.0;
    let mut r = [s * phi.cos(), s * (phi - third).cos(), s * (phi + third).cos()];
    r.sort_by(|a, b| a.partial_cmp(b).unwrap());
    r
}
