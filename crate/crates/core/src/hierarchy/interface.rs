//! Particle/hole description of the `B_0` minima and the Kawasaki-type
//! moves between them.
//!
//! A `B_0` minimum at zero coupling is a balanced word over `{+1, -1}`; `+1`
//! sites are particles and `-1` sites holes. A transition exchanges one
//! particle with one hole through two consecutive `C_1` saddles. Heights of
//! the first-order term are kept as exact rationals with denominator `4D`,
//! `D = M^2 - 3M + 3`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::families::{to_f64, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateClass {
    /// `A_p`: two clusters (`p = 2`) or at least one isolated site.
    A(usize),
    /// `A'_p`: `p >= 4` interfaces and no isolated site.
    APrime(usize),
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateClass::A(p) => write!(f, "A{p}"),
            StateClass::APrime(p) => write!(f, "A'{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceState {
    pub bits: Vec<i8>,
    pub p: usize,
    pub isolated_count: usize,
    pub klass: StateClass,
}

impl InterfaceState {
    pub fn n(&self) -> usize {
        self.bits.len()
    }

    /// Word after exchanging particle `i` and hole `j`.
    pub fn exchanged(&self, i: usize, j: usize) -> Result<InterfaceState> {
        let mut b = self.bits.clone();
        b.swap(i, j);
        classify_b0_state(&b)
    }
}

fn ring_counts(bits: &[i8]) -> (usize, usize) {
    let n = bits.len();
    let p = (0..n).filter(|&i| bits[i] != bits[(i + 1) % n]).count();
    let isolated = (0..n)
        .filter(|&i| bits[(i + n - 1) % n] != bits[i] && bits[(i + 1) % n] != bits[i])
        .count();
    (p, isolated)
}

pub fn classify_b0_state(bits: &[i8]) -> Result<InterfaceState> {
    let n = bits.len();
    if n < 4 || n % 2 != 0 {
        return Err(Error::input(format!("B0 words need even length >= 4, got {n}")));
    }
    if bits.iter().any(|&b| b != 1 && b != -1) {
        return Err(Error::input("B0 words are made of +1 and -1"));
    }
    let plus = bits.iter().filter(|&&b| b == 1).count();
    if 2 * plus != n {
        return Err(Error::input(format!("unbalanced word: {plus} particles on {n} sites")));
    }
    let (p, isolated_count) = ring_counts(bits);
    let klass = if p >= 4 && isolated_count == 0 {
        StateClass::APrime(p)
    } else {
        StateClass::A(p)
    };
    Ok(InterfaceState {
        bits: bits.to_vec(),
        p,
        isolated_count,
        klass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransitionType {
    I,
    IIa,
    IIb,
    IIc,
    III,
    IVa,
    IVb,
    IVc,
    IVd,
    Va,
    Vb,
    Vc,
    VI,
}

impl TransitionType {
    pub fn delta_p(self) -> i32 {
        use TransitionType::*;
        match self {
            I => 4,
            IIa | IIb | IIc => 2,
            III | IVa | IVb | IVc | IVd => 0,
            Va | Vb | Vc => -2,
            VI => -4,
        }
    }

    /// Saddle of the dominating step for a state with `p` interfaces.
    pub fn saddle_class(self, p: usize) -> SaddleInterfaceTriple {
        use TransitionType::*;
        let t = |i01, i02, i12| SaddleInterfaceTriple { i01, i02, i12 };
        match self {
            I => t(0, 2, p + 2),
            IIa | IIb | IIc => t(0, 2, p),
            III => t(1, 1, p - 1),
            _ => t(0, 2, p - 2),
        }
    }

    /// Types V and VI are not separated at first order: both pass through
    /// a `[0, 2, p - 2]` saddle.
    pub fn is_grouped(self) -> bool {
        use TransitionType::*;
        matches!(self, Va | Vb | Vc | VI)
    }

    /// The type of the exchange that undoes this one.
    pub fn reverse(self) -> TransitionType {
        use TransitionType::*;
        match self {
            I => VI,
            VI => I,
            IIa => Va,
            IIb => Vb,
            Va => IIa,
            Vb => IIb,
            IIc => Vc,
            Vc => IIc,
            IVa => IVa,
            IVb => IVb,
            IVc => IVc,
            IVd => IVd,
            III => III,
        }
    }
}

impl fmt::Display for TransitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TransitionType::*;
        let s = match self {
            I => "I",
            IIa => "II.a",
            IIb => "II.b",
            IIc => "II.c",
            III => "III",
            IVa => "IV.a",
            IVb => "IV.b",
            IVc => "IV.c",
            IVd => "IV.d",
            Va => "V.a",
            Vb => "V.b",
            Vc => "V.c",
            VI => "VI",
        };
        f.write_str(s)
    }
}

/// Interface counts of a `C_1` saddle between sites carrying
/// `alpha'_0/alpha'_1`, `alpha'_0/alpha'_2` and `alpha'_1/alpha'_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SaddleInterfaceTriple {
    pub i01: usize,
    pub i02: usize,
    pub i12: usize,
}

impl fmt::Display for SaddleInterfaceTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.i01, self.i02, self.i12)
    }
}

fn d_of(m: i128) -> i128 {
    m * m - 3 * m + 3
}

fn check_even_n(n: usize) -> Result<i128> {
    if n < 4 || n % 2 != 0 || n > 100_000 {
        return Err(Error::input(format!("n = {n} must be even and >= 4")));
    }
    Ok((n / 2) as i128)
}

/// Numerator of the first-order saddle value over `4D`.
fn saddle_numer(m: i128, z: SaddleInterfaceTriple) -> i128 {
    m * m * z.i01 as i128 + (m - 3).pow(2) * z.i02 as i128 + (2 * m - 3).pow(2) * z.i12 as i128
}

pub fn saddle_first_order_exact(z: SaddleInterfaceTriple, n: usize) -> Result<Q> {
    let m = check_even_n(n)?;
    if z.i01 + z.i02 != 2 {
        return Err(Error::input(format!("saddle class {z} must have i01 + i02 = 2")));
    }
    if z.i12 > n {
        return Err(Error::input(format!("saddle class {z} has more interfaces than sites")));
    }
    Ok(Q::new(saddle_numer(m, z), 4 * d_of(m)))
}

pub fn saddle_first_order(z: SaddleInterfaceTriple, n: usize) -> Result<f64> {
    Ok(to_f64(&saddle_first_order_exact(z, n)?))
}

/// Zeroth-order height `V_0(C_1) - V_0(B_0)` common to every exchange.
pub fn h0(n: usize) -> Result<Q> {
    let m = check_even_n(n)?;
    Ok(Q::new(m * (m - 1), 4 * d_of(m)))
}

/// First-order communication height of an exchange of type `t` from a
/// state with `p` interfaces, as a numerator over `4D`.
pub fn h1_numer(t: TransitionType, n: usize, p: usize) -> Result<i128> {
    let m = check_even_n(n)?;
    let s = saddle_numer(m, t.saddle_class(p));
    Ok(s - 4 * d_of(m) * p as i128)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommHeight {
    pub h0: f64,
    pub h1: f64,
    pub h1_exact: String,
    pub transition_type: TransitionType,
    pub delta_p: i32,
    pub saddle_class: SaddleInterfaceTriple,
}

impl CommHeight {
    /// `H^0 + gamma H^1`.
    pub fn at(&self, gamma: f64) -> f64 {
        self.h0 + gamma * self.h1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Move {
    /// Particle site, hole site.
    pub site_pair: (usize, usize),
    pub transition_type: TransitionType,
    pub delta_p: i32,
    pub comm_height: CommHeight,
}

/// Type of the exchange of particle `i` and hole `j` in the word given by
/// `is_particle`.
pub(crate) fn move_type(n: usize, is_particle: impl Fn(usize) -> bool, i: usize, j: usize) -> TransitionType {
    use TransitionType::*;
    let nb = |s: usize| [(s + n - 1) % n, (s + 1) % n];
    let eta_i = nb(i).iter().filter(|&&s| !is_particle(s)).count();
    let eta_j = nb(j).iter().filter(|&&s| is_particle(s)).count();
    let adjacent = nb(i).contains(&j);
    match (adjacent, eta_i, eta_j) {
        (false, 0, 0) => I,
        (false, 0, 1) => IIa,
        (false, 1, 0) => IIb,
        (false, 1, 1) => III,
        (false, 0, 2) => IVa,
        (false, 2, 0) => IVb,
        (false, 1, 2) => Va,
        (false, 2, 1) => Vb,
        (false, 2, 2) => VI,
        (true, 1, 1) => IIc,
        (true, 1, 2) => IVc,
        (true, 2, 1) => IVd,
        (true, 2, 2) => Vc,
        _ => unreachable!("neighbour counts are bounded by 2 and adjacency forces >= 1"),
    }
}

pub fn allowed_moves(state: &InterfaceState) -> Vec<Move> {
    let n = state.n();
    let h0v = h0(n).map(|q| to_f64(&q)).unwrap_or(f64::NAN);
    let m = (n / 2) as i128;
    let den = 4 * d_of(m);
    let mut out = Vec::new();
    for i in (0..n).filter(|&i| state.bits[i] == 1) {
        for j in (0..n).filter(|&j| state.bits[j] == -1) {
            let t = move_type(n, |s| state.bits[s] == 1, i, j);
            let num = h1_numer(t, n, state.p).expect("n validated by classify_b0_state");
            let h1 = Q::new(num, den);
            out.push(Move {
                site_pair: (i, j),
                transition_type: t,
                delta_p: t.delta_p(),
                comm_height: CommHeight {
                    h0: h0v,
                    h1: to_f64(&h1),
                    h1_exact: h1.to_string(),
                    transition_type: t,
                    delta_p: t.delta_p(),
                    saddle_class: t.saddle_class(state.p),
                },
            });
        }
    }
    out
}
