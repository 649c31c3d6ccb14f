use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::triples::{alpha_from_triple, cubic_roots, Family, Triple};
use crate::linalg::max_abs;
use crate::model::{self, LatticeConfig, LAMBDA_C};

/// Residual bound on the constrained drift at an accepted stationary point.
pub const STATIONARY_TOL: f64 = 1e-10;

/// Stationary point of the constrained potential.
///
/// `labels[i]` records which root (0, 1 or 2 in the triple's order) site `i`
/// carries at zero coupling; continuation keeps the labels of the branch it
/// started from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub coords: LatticeConfig,
    pub triple: Triple,
    pub family: Family,
    pub morse_index: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub potential: f64,
    pub labels: Vec<u8>,
    pub sign: i8,
}

impl StationaryPoint {
    /// Builds the zero-coupling point whose site `i` carries root
    /// `labels[i]` of the branch `sign`.
    ///
    /// Label counts must be non-decreasing in the label. When the two sign
    /// branches coincide the representation is normalised to `sign = +1`.
    pub fn from_labels(labels: Vec<u8>, sign: i8) -> Result<StationaryPoint> {
        let mut counts = [0usize; 3];
        for &l in &labels {
            if l > 2 {
                return Err(Error::input(format!("root label {l} is not in 0..=2")));
            }
            counts[l as usize] += 1;
        }
        if sign != 1 && sign != -1 {
            return Err(Error::input("sign must be +1 or -1"));
        }
        let triple = Triple::new(counts[0], counts[1], counts[2])?;
        let (mut labels, mut sign) = (labels, sign);
        if sign < 0 && triple.is_sign_symmetric() {
            // Swapping the two opposite roots undoes the sign flip.
            let (p, q) = if triple.a1 == triple.a2 { (1, 2) } else { (0, 1) };
            for l in labels.iter_mut() {
                if *l == p {
                    *l = q;
                } else if *l == q {
                    *l = p;
                }
            }
            sign = 1;
        }
        let roots = alpha_from_triple(&triple)?;
        let r = if sign > 0 { roots[0] } else { roots[1] };
        let values: Vec<f64> = labels.iter().map(|&l| r.get(l as usize)).collect();
        let coords = LatticeConfig::projected(values);
        let potential = model::potential_raw(0.0, coords.values());
        Ok(StationaryPoint {
            coords,
            triple,
            family: triple.family(),
            morse_index: triple.index(),
            lambda: r.lambda,
            gamma: 0.0,
            potential,
            labels,
            sign,
        })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn values(&self) -> &[f64] {
        self.coords.values()
    }

    /// Per site, which root of `s^3 - s = lambda` (0 = smallest, 1 = middle,
    /// 2 = largest) the coordinate is closest to.
    pub fn root_symbols(&self) -> Vec<usize> {
        let r = cubic_roots(self.lambda.clamp(-LAMBDA_C, LAMBDA_C));
        self.values()
            .iter()
            .map(|&x| {
                (0..3)
                    .min_by(|&a, &b| (r[a] - x).abs().partial_cmp(&(r[b] - x).abs()).unwrap())
                    .unwrap()
            })
            .collect()
    }

    pub fn drift_residual(&self) -> f64 {
        let mut g = model::gradient_raw(self.gamma, self.values());
        model::remove_mean(&mut g);
        max_abs(&g)
    }

    /// Morse index from the numerically assembled constrained Hessian.
    pub fn numeric_index(&self) -> Result<usize> {
        model::morse_index(&model::constrained_hessian_raw(self.gamma, self.values()))
    }

    /// Key identifying the point's coordinates, insensitive to rounding
    /// below `1e-8`.
    pub fn site_key(&self) -> Vec<i64> {
        quantize(self.values())
    }

    /// Key of the point's orbit under rotations, reflections and sign flip.
    pub fn orbit_key(&self) -> Vec<i64> {
        canonical_word(&quantize(self.values()), |v| -v)
    }
}

pub fn quantize(x: &[f64]) -> Vec<i64> {
    x.iter().map(|v| (v * 1e8).round() as i64).collect()
}

/// Lexicographically smallest image of `w` under the dihedral group of the
/// ring combined with the involution `neg`.
pub fn canonical_word<T: Ord + Copy>(w: &[T], neg: impl Fn(T) -> T) -> Vec<T> {
    let n = w.len();
    let negated: Vec<T> = w.iter().map(|&v| neg(v)).collect();
    let mut best: Option<Vec<T>> = None;
    for base in [w, &negated[..]] {
        for dir in [false, true] {
            for shift in 0..n {
                let img: Vec<T> = (0..n)
                    .map(|i| {
                        let j = if dir { (shift + n - i) % n } else { (shift + i) % n };
                        base[j]
                    })
                    .collect();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img);
                }
            }
        }
    }
    best.unwrap_or_default()
}

/// The two minima joined by a saddle at zero coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleEndpoints {
    pub lower: StationaryPoint,
    pub upper: StationaryPoint,
}

/// Endpoints of the unstable manifold of a `C_k` saddle at zero coupling.
///
/// The lower endpoint lies in `B_{k-1}`: the `alpha'_0` site joins the
/// `alpha'_1` sites. The upper endpoint lies in `B_k`: it joins the
/// `alpha'_2` sites. At `n = 4` both endpoints lie in `B_0`, obtained by
/// sending the two vanishing coordinates to opposite signs.
pub fn connect_saddle(z: &StationaryPoint) -> Result<SaddleEndpoints> {
    if z.gamma != 0.0 {
        return Err(Error::input("connect_saddle requires a zero-coupling point"));
    }
    let Family::C(_) = z.family else {
        return Err(Error::input(format!("point of family {} is not a C_k saddle", z.family)));
    };
    let (lower, upper) = if z.n() == 4 {
        // Saddle (alpha0, alpha1, 0, 0) up to permutation; label 2 sites vanish.
        let zero_sites: Vec<usize> = (0..4).filter(|&i| z.labels[i] == 2).collect();
        let signs: Vec<f64> = z.values().iter().map(|v| v.signum()).collect();
        let mk = |first: f64| -> Result<StationaryPoint> {
            let mut s = signs.clone();
            s[zero_sites[0]] = first;
            s[zero_sites[1]] = -first;
            let labels = s.iter().map(|&v| if v > 0.0 { 1 } else { 2 }).collect();
            StationaryPoint::from_labels(labels, 1)
        };
        (mk(1.0)?, mk(-1.0)?)
    } else {
        let lower_labels = z.labels.iter().map(|&l| if l == 2 { 2 } else { 1 }).collect();
        let upper_labels = z.labels.iter().map(|&l| if l == 1 { 1 } else { 2 }).collect();
        (
            StationaryPoint::from_labels(lower_labels, z.sign)?,
            StationaryPoint::from_labels(upper_labels, z.sign)?,
        )
    };
    for end in [&lower, &upper] {
        let res = end.drift_residual();
        if res > STATIONARY_TOL {
            return Err(Error::Numeric(format!("endpoint residual {res:e} too large")));
        }
        let idx = end.numeric_index()?;
        if idx != 0 {
            return Err(Error::Numeric(format!("endpoint has index {idx}, expected 0")));
        }
    }
    Ok(SaddleEndpoints { lower, upper })
}

/// True if the potential decreases strictly along the straight segment from
/// `from` to `to`, sampled at `samples + 1` points.
pub fn segment_is_descending(gamma: f64, from: &[f64], to: &[f64], samples: usize) -> bool {
    let mut prev = model::potential_raw(gamma, from);
    let mut x = vec![0.0; from.len()];
    for s in 1..=samples {
        let t = s as f64 / samples as f64;
        for i in 0..x.len() {
            x[i] = from[i] + t * (to[i] - from[i]);
        }
        let v = model::potential_raw(gamma, &x);
        if v >= prev {
            return false;
        }
        prev = v;
    }
    true
}
