//! The double-well ring potential, its constrained drift and Hessian on
//! the zero-sum hyperplane.
//!
//! The potential is
//! `V(x) = sum_i U(x_i) + gamma/4 * sum_i (x_{i+1} - x_i)^2`, with
//! `U(s) = s^4/4 - s^2/2` and periodic indices. The dynamics is confined to
//! `S = { x : sum_i x_i = 0 }`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Critical Lagrange multiplier `2 / (3 sqrt 3)`: the cubic `s^3 - s = lambda`
/// has three real roots iff `|lambda| < LAMBDA_C`.
pub const LAMBDA_C: f64 = 0.384_900_179_459_750_5;

/// Tolerance below which an eigenvalue counts as zero for Morse indices.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Zero-sum tolerance for `LatticeConfig` membership in S.
pub const ZERO_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub gamma: f64,
    pub eps: f64,
}

impl Params {
    /// Validates the lattice size and coupling. `eps` may be zero here;
    /// rate and simulation entry points check positivity themselves.
    pub fn new(n: usize, gamma: f64, eps: f64) -> Result<Params> {
        check_size(n)?;
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::input(format!("gamma must be a finite value >= 0, got {gamma}")));
        }
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::input(format!("eps must be a finite value >= 0, got {eps}")));
        }
        Ok(Params { n, gamma, eps })
    }

    pub fn m(&self) -> usize {
        self.n / 2
    }

    pub fn with_gamma(self, gamma: f64) -> Params {
        Params { gamma, ..self }
    }

    pub fn require_positive_eps(&self) -> Result<()> {
        if self.eps > 0.0 {
            Ok(())
        } else {
            Err(Error::input("eps must be > 0 for rates and simulations"))
        }
    }
}

/// Even, at least 4, not a multiple of 3.
pub fn check_size(n: usize) -> Result<()> {
    if n % 3 == 0 {
        return Err(Error::UnsupportedSize(n));
    }
    if n < 4 || n % 2 != 0 {
        return Err(Error::input(format!("n must be even and >= 4, got {n}")));
    }
    Ok(())
}

/// A configuration on the zero-sum hyperplane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    values: Vec<f64>,
}

impl LatticeConfig {
    /// Accepts `values` only if they already sum to zero within `ZERO_SUM_TOL`.
    pub fn new(values: Vec<f64>) -> Result<LatticeConfig> {
        let s: f64 = values.iter().sum();
        if s.abs() > ZERO_SUM_TOL * (values.len().max(1) as f64).max(1.0) {
            return Err(Error::input(format!("configuration is not on S: sum = {s:e}")));
        }
        Ok(LatticeConfig { values })
    }

    /// Projects arbitrary values onto S.
    pub fn projected(values: Vec<f64>) -> LatticeConfig {
        project_to_s(&values)
    }

    pub fn zeros(n: usize) -> LatticeConfig {
        LatticeConfig { values: vec![0.0; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

impl AsRef<[f64]> for LatticeConfig {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

#[inline]
pub fn double_well(s: f64) -> f64 {
    0.25 * s * s * s * s - 0.5 * s * s
}

#[inline]
pub fn double_well_prime(s: f64) -> f64 {
    s * s * s - s
}

#[inline]
pub fn double_well_second(s: f64) -> f64 {
    3.0 * s * s - 1.0
}

fn check_len(params: &Params, x: &[f64]) -> Result<()> {
    if x.len() != params.n {
        return Err(Error::SizeMismatch {
            expected: params.n,
            got: x.len(),
        });
    }
    Ok(())
}

/// Potential on arbitrary coordinates (no hyperplane requirement), used by
/// the unconstrained horseshoe analysis as well.
pub fn potential_raw(gamma: f64, x: &[f64]) -> f64 {
    let n = x.len();
    let mut v = 0.0;
    for i in 0..n {
        let d = x[(i + 1) % n] - x[i];
        v += double_well(x[i]) + 0.25 * gamma * d * d;
    }
    v
}

pub fn gradient_raw(gamma: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let lap = x[(i + 1) % n] - 2.0 * x[i] + x[(i + n - 1) % n];
            double_well_prime(x[i]) - 0.5 * gamma * lap
        })
        .collect()
}

/// Full `n x n` Hessian of the unconstrained potential.
pub fn hessian_raw(gamma: f64, x: &[f64]) -> Matrix {
    let n = x.len();
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] += double_well_second(x[i]) + gamma;
        let j = (i + 1) % n;
        h[(i, j)] -= 0.5 * gamma;
        h[(j, i)] -= 0.5 * gamma;
    }
    h
}

pub fn potential(params: &Params, x: &[f64]) -> Result<f64> {
    check_len(params, x)?;
    Ok(potential_raw(params.gamma, x))
}

pub fn unconstrained_gradient(params: &Params, x: &[f64]) -> Result<Vec<f64>> {
    check_len(params, x)?;
    Ok(gradient_raw(params.gamma, x))
}

/// `-grad V + mean(grad V) * 1`; the mean of the result is subtracted last
/// so the output sums to zero up to rounding of a single mean.
pub fn constrained_drift(params: &Params, x: &[f64]) -> Result<Vec<f64>> {
    check_len(params, x)?;
    let mut d: Vec<f64> = gradient_raw(params.gamma, x).into_iter().map(|g| -g).collect();
    remove_mean(&mut d);
    Ok(d)
}

pub(crate) fn remove_mean(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

pub fn project_to_s(v: &[f64]) -> LatticeConfig {
    let mut values = v.to_vec();
    remove_mean(&mut values);
    LatticeConfig { values }
}

/// Orthonormal basis of S: the first `n - 1` canonical vectors with their
/// mean removed, then Gram-Schmidt. Returned as an `n x (n-1)` matrix whose
/// columns are the basis vectors.
pub fn hyperplane_basis(n: usize) -> Matrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let mut v = vec![-1.0 / n as f64; n];
        v[k] += 1.0;
        for c in &cols {
            let p = linalg::dot(&v, c);
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= p * ci;
            }
        }
        let nv = linalg::norm(&v);
        for vi in v.iter_mut() {
            *vi /= nv;
        }
        cols.push(v);
    }
    let mut b = Matrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            b[(i, j)] = c[i];
        }
    }
    b
}

/// Hessian restricted to S in an explicit orthonormal basis.
#[derive(Debug, Clone)]
pub struct HessianView {
    pub matrix: Matrix,
    pub basis: Matrix,
}

impl HessianView {
    /// Conjugates the full Hessian with `basis` (columns orthonormal, in S).
    pub fn with_basis(full: &Matrix, basis: Matrix) -> HessianView {
        let mut m = basis.transpose().matmul(full).matmul(&basis);
        let k = m.rows();
        for i in 0..k {
            for j in 0..i {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        HessianView { matrix: m, basis }
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(linalg::sym_eigen(&self.matrix)?.values)
    }

    pub fn determinant(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().product())
    }

    /// The unique negative eigenvalue, if the spectrum has exactly one.
    pub fn negative_eigenvalue(&self) -> Result<Option<f64>> {
        let ev = self.eigenvalues()?;
        let neg: Vec<f64> = ev.into_iter().filter(|&l| l < 0.0).collect();
        Ok(if neg.len() == 1 { Some(neg[0]) } else { None })
    }
}

pub fn constrained_hessian(params: &Params, x: &[f64]) -> Result<HessianView> {
    check_len(params, x)?;
    Ok(constrained_hessian_raw(params.gamma, x))
}

pub(crate) fn constrained_hessian_raw(gamma: f64, x: &[f64]) -> HessianView {
    HessianView::with_basis(&hessian_raw(gamma, x), hyperplane_basis(x.len()))
}

/// Number of eigenvalues below `-tol`; fails if any `|eigenvalue| <= tol`.
pub fn morse_index_with_tol(h: &HessianView, tol: f64) -> Result<usize> {
    let ev = h.eigenvalues()?;
    if let Some(&bad) = ev.iter().find(|l| l.abs() <= tol) {
        return Err(Error::Degenerate {
            eigenvalue: bad,
            tolerance: tol,
        });
    }
    Ok(ev.iter().filter(|&&l| l < -tol).count())
}

pub fn morse_index(h: &HessianView) -> Result<usize> {
    morse_index_with_tol(h, DEGENERACY_TOL)
}

/// Ring symmetries: rotation `r`, reflection `s`, sign flip `c`.
pub fn rotate<T: Clone>(x: &[T]) -> Vec<T> {
    let n = x.len();
    (0..n).map(|i| x[(i + 1) % n].clone()).collect()
}

pub fn reflect<T: Clone>(x: &[T]) -> Vec<T> {
    x.iter().rev().cloned().collect()
}

pub fn negate(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, gamma: f64) -> Params {
        Params::new(n, gamma, 0.0).unwrap()
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(Params::new(9, 0.0, 0.1), Err(Error::UnsupportedSize(9)));
        assert!(Params::new(6, 0.0, 0.1).is_err());
        assert!(Params::new(7, 0.0, 0.1).is_err());
        assert!(Params::new(2, 0.0, 0.1).is_err());
        assert!(Params::new(8, -0.1, 0.1).is_err());
        assert!(Params::new(8, 0.0, 0.1).is_ok());
    }

    #[test]
    fn block_minimum_potential() {
        let x = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
        assert!((potential(&p(8, 0.0), &x).unwrap() + 2.0).abs() < 1e-15);
        assert_eq!(potential(&p(8, 0.3), &[0.0; 8]).unwrap(), 0.0);
    }

    #[test]
    fn spurious_minimum_potential() {
        let a = 5.0 / 19f64.sqrt();
        let b = -3.0 / 19f64.sqrt();
        let x = [a, a, a, b, b, b, b, b];
        // 3 U(5/sqrt19) + 5 U(-3/sqrt19) summed by hand: -30/19
        let direct = 3.0 * double_well(a) + 5.0 * double_well(b);
        assert!((direct + 30.0 / 19.0).abs() < 1e-14);
        assert!((potential(&p(8, 0.0), &x).unwrap() + 30.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn size_mismatch_is_an_input_error() {
        let e = potential(&p(8, 0.0), &[0.0; 4]).unwrap_err();
        assert!(e.is_input());
    }

    #[test]
    fn gradient_vanishes_on_sign_patterns_and_origin() {
        let g = unconstrained_gradient(&p(8, 0.0), &[1.0, -1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!(g.iter().all(|v| *v == 0.0));
        let g = unconstrained_gradient(&p(8, 0.0), &[0.0; 8]).unwrap();
        assert!(g.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn drift_of_block_pattern_is_scaled_laplacian() {
        let x = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
        let d = constrained_drift(&p(8, 0.05), &x).unwrap();
        // discrete Laplacian of the block pattern, worked by hand
        let lap = [-2.0, 0.0, 0.0, -2.0, 2.0, 0.0, 0.0, 2.0];
        for (di, li) in d.iter().zip(lap) {
            assert!((di - 0.025 * li).abs() < 1e-15, "{d:?}");
        }
        assert!(d.iter().sum::<f64>().abs() < 1e-15);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_to_s(&[1.0; 6]).values(), &[0.0; 6]);
        assert_eq!(project_to_s(&[2.0, 0.0, 0.0, 0.0]).values(), &[1.5, -0.5, -0.5, -0.5]);
        let v = [0.5, -0.25, -0.25, 0.0];
        assert_eq!(project_to_s(&v).values(), &v);
    }

    #[test]
    fn basis_is_orthonormal_and_in_s() {
        for n in [4, 8, 10] {
            let b = hyperplane_basis(n);
            let g = b.transpose().matmul(&b);
            assert!(g.sub(&Matrix::identity(n - 1)).frobenius() < 1e-13);
            for j in 0..n - 1 {
                let s: f64 = (0..n).map(|i| b[(i, j)]).sum();
                assert!(s.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn b0_hessian_is_twice_identity() {
        let x = [1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0];
        let h = constrained_hessian(&p(8, 0.0), &x).unwrap();
        assert!(h.matrix.sub(&Matrix::identity(7).scale(2.0)).frobenius() < 1e-13);
        assert_eq!(morse_index(&h).unwrap(), 0);
    }

    #[test]
    fn c1_saddle_spectrum_at_m4() {
        let w = 1.0 / 7f64.sqrt();
        let z = [3.0 * w, 3.0 * w, 3.0 * w, -w, -2.0 * w, -2.0 * w, -2.0 * w, -2.0 * w];
        let h = constrained_hessian(&p(8, 0.0), &z).unwrap();
        let ev = h.eigenvalues().unwrap();
        let want = [-5.0 / 14.0, 5.0 / 7.0, 5.0 / 7.0, 5.0 / 7.0, 2.0, 20.0 / 7.0, 20.0 / 7.0];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
        assert_eq!(morse_index(&h).unwrap(), 1);
    }

    #[test]
    fn origin_has_index_n_minus_one() {
        let h = constrained_hessian(&p(8, 0.0), &[0.0; 8]).unwrap();
        assert_eq!(morse_index(&h).unwrap(), 7);
    }

    #[test]
    fn degenerate_spectrum_is_rejected() {
        let x = [1.0 / 3f64.sqrt(), -1.0 / 3f64.sqrt(), 1.0, -1.0];
        let h = constrained_hessian_raw(0.0, &x);
        assert!(matches!(morse_index(&h), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn lattice_config_checks_membership() {
        assert!(LatticeConfig::new(vec![1.0, 1.0]).is_err());
        assert!(LatticeConfig::new(vec![1.0, -1.0]).is_ok());
    }
}
