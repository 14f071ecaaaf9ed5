//! Matrix realizations of the algebra used as independent ground truth.
//!
//! Two representations are provided: a faithful (non-unitary) 2×2 defining
//! representation, and the truncated Fock space of a single bosonic mode
//! where `K_+ = a†²/2`, `K_- = a²/2` and `K_o = (a†a + ½)/2`. Squeezing is not
//! exactly representable in finite dimension, so Fock-space identities are
//! only meaningful on the low-lying block, see [`DenseMatrix::leading_block`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::su11::{Fragmentation, GeneratorCoeffs, SqueezeParam};

/// Remainder bound required of the truncated exponential series, measured in
/// the scaled 1-norm.
pub const EXPM_SERIES_TOLERANCE: f64 = 1e-16;

/// 1-norm the exponent is scaled down to before summing the series.
const EXPM_SCALED_NORM: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("matrix exponential of a matrix with non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Fock basis needs at least 4 states, got {0}")]
    BasisTooSmall(usize),
    #[error("Fock basis constant {name} must be positive and finite, got {value}")]
    BadConstant { name: &'static str, value: f64 },
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim.min(8) {
            let row: Vec<String> = (0..self.dim.min(8)).map(|j| format!("{:.4}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are not square.
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square matrix");
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Top-left `n×n` block: the compression onto the first `n` basis states.
    pub fn leading_block(&self, n: usize) -> Self {
        assert!(n > 0 && n <= self.dim, "block size {n} out of range for dim {}", self.dim);
        Self::from_fn(n, |i, j| self[(i, j)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Spectral norm (largest singular value), by power iteration on `A†A`.
    pub fn operator_norm(&self) -> f64 {
        let gram = &self.adjoint() * self;
        let n = self.dim;
        // Deterministic start vector with support on every basis state.
        let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0, 0.1 * i as f64)).collect();
        normalize(&mut v);
        let mut estimate = 0.0;
        for _ in 0..5000 {
            let mut w = gram.apply(&v);
            let rayleigh: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
            let norm = normalize(&mut w);
            v = w;
            if norm == 0.0 {
                return 0.0;
            }
            let converged = (rayleigh - estimate).abs() <= 1e-15 * rayleigh.abs();
            estimate = rayleigh;
            if converged {
                break;
            }
        }
        estimate.max(0.0).sqrt()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .expect("non-empty range");
            if a[pivot * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                for j in col..n {
                    let sub = factor * a[col * n + j];
                    a[row * n + j] -= sub;
                }
            }
        }
        det
    }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        DenseMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        DenseMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Matrix exponential by scaling and squaring around a truncated Taylor series.
///
/// The exponent is scaled by `2^-s` until its 1-norm is at most ½; the series
/// is then summed until the tail bound `‖B‖^{k+1}/(k+1)! · 1/(1 − ‖B‖/(k+2))`
/// drops below [`EXPM_SERIES_TOLERANCE`], and the result is squared `s` times.
pub fn expm(m: &DenseMatrix) -> Result<DenseMatrix, OracleError> {
    if let Some(pos) = m.data.iter().position(|x| !(x.re.is_finite() && x.im.is_finite())) {
        return Err(OracleError::NonFinite { row: pos / m.dim, col: pos % m.dim });
    }
    let norm = m.one_norm();
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > EXPM_SCALED_NORM {
        scaled_norm /= 2.0;
        squarings += 1;
    }
    let b = m.scale_real(0.5_f64.powi(squarings as i32));

    let mut sum = DenseMatrix::identity(m.dim);
    let mut term = DenseMatrix::identity(m.dim);
    let mut k = 0u32;
    loop {
        k += 1;
        term = (&term * &b).scale_real(1.0 / f64::from(k));
        sum = &sum + &term;
        // ‖B^{k+1}‖/(k+1)! bounded through the scaled norm.
        let next = scaled_norm.powi(k as i32 + 1) / factorial(k + 1);
        let tail = next / (1.0 - scaled_norm / f64::from(k + 2));
        if tail < EXPM_SERIES_TOLERANCE || scaled_norm == 0.0 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Matrices realizing `K_o`, `K_+`, `K_-` in some representation.
#[derive(Debug, Clone)]
pub struct GeneratorTriple {
    pub k_o: DenseMatrix,
    pub k_plus: DenseMatrix,
    pub k_minus: DenseMatrix,
}

impl GeneratorTriple {
    pub fn dim(&self) -> usize {
        self.k_o.dim()
    }

    /// Matrix of `c_o K_o + c_+ K_+ + c_- K_-`.
    pub fn combination(&self, g: &GeneratorCoeffs) -> DenseMatrix {
        let a = self.k_o.scale(g.c_o);
        let b = self.k_plus.scale(g.c_plus);
        let c = self.k_minus.scale(g.c_minus);
        &(&a + &b) + &c
    }

    /// Matrix of `ρK_+ − ρ*K_-`.
    pub fn squeeze_exponent(&self, rho: Complex64) -> DenseMatrix {
        &self.k_plus.scale(rho) - &self.k_minus.scale(rho.conj())
    }
}

/// Defining 2×2 representation:
///
/// ```text
/// K_o = ½·diag(1, −1),   K_+ = [[0, 1], [0, 0]],   K_- = [[0, 0], [−1, 0]]
/// ```
///
/// It is not unitary: `K_-` is minus the transpose of `K_+`.
pub fn defining_generators() -> GeneratorTriple {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let half = Complex64::new(0.5, 0.0);
    GeneratorTriple {
        k_o: DenseMatrix::from_rows(&[&[half, z], &[z, -half]]),
        k_plus: DenseMatrix::from_rows(&[&[z, one], &[z, z]]),
        k_minus: DenseMatrix::from_rows(&[&[z, z], &[-one, z]]),
    }
}

/// Truncated number basis `|0⟩ … |dim−1⟩` of an oscillator with mass `m`,
/// frequency `omega0` and action constant `hbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockBasis {
    dim: usize,
    m: f64,
    omega0: f64,
    hbar: f64,
}

impl FockBasis {
    pub fn new(dim: usize, m: f64, omega0: f64, hbar: f64) -> Result<Self, OracleError> {
        if dim < 4 {
            return Err(OracleError::BasisTooSmall(dim));
        }
        for (name, value) in [("m", m), ("omega0", omega0), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(OracleError::BadConstant { name, value });
            }
        }
        Ok(Self { dim, m, omega0, hbar })
    }

    /// Natural units, `m = ω₀ = ħ = 1`.
    pub fn natural(dim: usize) -> Result<Self, OracleError> {
        Self::new(dim, 1.0, 1.0, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

#[derive(Debug, Clone)]
pub struct FockOperators {
    pub generators: GeneratorTriple,
    pub a: DenseMatrix,
    pub a_dag: DenseMatrix,
}

/// Truncated ladder operators and the quadratic generators built from them.
///
/// Products are formed in the truncated space, so the commutation relations
/// hold exactly only away from the top two basis states.
pub fn fock_generators(basis: &FockBasis) -> FockOperators {
    let n = basis.dim;
    let mut a = DenseMatrix::zeros(n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    let k_plus = (&a_dag * &a_dag).scale_real(0.5);
    let k_minus = (&a * &a).scale_real(0.5);
    let number = &a_dag * &a;
    let k_o = (&number + &DenseMatrix::identity(n).scale_real(0.5)).scale_real(0.5);
    FockOperators { generators: GeneratorTriple { k_o, k_plus, k_minus }, a, a_dag }
}

/// `x̂ = √(ħ/2mω₀)(a + a†)` and `p̂ = i√(mħω₀/2)(a† − a)`.
pub fn position_momentum(basis: &FockBasis) -> (DenseMatrix, DenseMatrix) {
    let ops = fock_generators(basis);
    let x_scale = (basis.hbar / (2.0 * basis.m * basis.omega0)).sqrt();
    let p_scale = (basis.m * basis.hbar * basis.omega0 / 2.0).sqrt();
    let x = (&ops.a + &ops.a_dag).scale_real(x_scale);
    let p = (&ops.a_dag - &ops.a).scale(Complex64::new(0.0, p_scale));
    (x, p)
}

/// `expm(2iθK_o)·expm(ρK_+ − ρ*K_-)` in the given representation.
pub fn realize(s: &SqueezeParam, gens: &GeneratorTriple) -> Result<DenseMatrix, OracleError> {
    let rotation = expm(&gens.k_o.scale(Complex64::new(0.0, 2.0 * s.theta())))?;
    let squeeze = expm(&gens.squeeze_exponent(s.rho()))?;
    Ok(&rotation * &squeeze)
}

/// Which form the final factor of the normal-ordered product takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LastFactor {
    /// `exp{−η* K_-}`, the form that reproduces `S(θ, ρ)` for every phase.
    Conjugated,
    /// `exp{−η K_-}` as the factor is often written; correct only for real `η`.
    Literal,
}

/// `expm(2iθK_o)·expm(ηK_+)·expm(γK_o)·expm(−ζK_-)` with `ζ = η*` or `η`.
pub fn realize_fragmented(
    f: &Fragmentation,
    gens: &GeneratorTriple,
    last: LastFactor,
) -> Result<DenseMatrix, OracleError> {
    let eta = f.eta.eta();
    let zeta = match last {
        LastFactor::Conjugated => eta.conj(),
        LastFactor::Literal => eta,
    };
    let rotation = expm(&gens.k_o.scale(Complex64::new(0.0, 2.0 * f.theta)))?;
    let raise = expm(&gens.k_plus.scale(eta))?;
    let middle = expm(&gens.k_o.scale_real(f.gamma_frag))?;
    let lower = expm(&gens.k_minus.scale(-zeta))?;
    Ok(&(&(&rotation * &raise) * &middle) * &lower)
}

/// `M g M⁻¹` for the realization `M` of `s`; with the 2×2 representation
/// `M⁻¹` is the adjugate since `det M = 1`.
pub fn conjugate_generator_2x2(s: &SqueezeParam, g: &GeneratorCoeffs) -> Result<GeneratorCoeffs, OracleError> {
    let gens = defining_generators();
    let m = realize(s, &gens)?;
    let inv = DenseMatrix::from_rows(&[&[m[(1, 1)], -m[(0, 1)]], &[-m[(1, 0)], m[(0, 0)]]]);
    let image = &(&m * &gens.combination(g)) * &inv;
    Ok(coeffs_from_2x2(&image))
}

/// Reads generator coefficients off a traceless 2×2 matrix
/// `[[c_o/2, c_+], [−c_-, −c_o/2]]`.
pub fn coeffs_from_2x2(m: &DenseMatrix) -> GeneratorCoeffs {
    assert_eq!(m.dim(), 2);
    GeneratorCoeffs::new(m[(0, 0)] - m[(1, 1)], m[(0, 1)], -m[(1, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su11::{compose_full, fragment};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expm_examples() {
        let zero = DenseMatrix::zeros(3);
        assert_eq!(expm(&zero).unwrap(), DenseMatrix::identity(3));

        let d = expm(&DenseMatrix::diagonal(&[c(1.5, 0.0), c(-0.25, 2.0)])).unwrap();
        assert!((d[(0, 0)] - c(1.5, 0.0).exp()).norm() < 1e-14);
        assert!((d[(1, 1)] - c(-0.25, 2.0).exp()).norm() < 1e-14);
        assert_eq!(d[(0, 1)], c(0.0, 0.0));

        let nil = DenseMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        let e = expm(&nil).unwrap();
        let expected = DenseMatrix::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(e.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn expm_large_norm_diagonal() {
        let d = expm(&DenseMatrix::diagonal(&[c(20.0, 0.0), c(0.0, 37.0)])).unwrap();
        assert!((d[(0, 0)] / 20.0_f64.exp() - 1.0).norm() < 1e-12);
        assert!((d[(1, 1)] - c(0.0, 37.0).exp()).norm() < 1e-12);
    }

    #[test]
    fn expm_rejects_nan() {
        let mut m = DenseMatrix::zeros(2);
        m[(1, 0)] = c(f64::NAN, 0.0);
        assert_eq!(expm(&m), Err(OracleError::NonFinite { row: 1, col: 0 }));
    }

    #[test]
    fn defining_commutators_exact() {
        let g = defining_generators();
        let lhs = &g.k_plus.commutator(&g.k_minus) + &g.k_o.scale_real(2.0);
        assert_eq!(lhs.max_abs(), 0.0);
        assert_eq!((&g.k_o.commutator(&g.k_plus) - &g.k_plus).max_abs(), 0.0);
        assert_eq!((&g.k_o.commutator(&g.k_minus) + &g.k_minus).max_abs(), 0.0);
    }

    #[test]
    fn defining_k_o_eigenvalues() {
        // Roots of the characteristic polynomial λ² − tr·λ + det.
        let k_o = defining_generators().k_o;
        let tr = k_o.trace();
        let det = k_o.determinant();
        let disc = (tr * tr - 4.0 * det).sqrt();
        let mut roots = [((tr + disc) / 2.0).re, ((tr - disc) / 2.0).re];
        roots.sort_by(f64::total_cmp);
        assert_eq!(roots, [-0.5, 0.5]);
    }

    #[test]
    fn fock_entries() {
        let ops = fock_generators(&FockBasis::natural(10).unwrap());
        let g = &ops.generators;
        assert_eq!(g.k_o[(0, 0)], c(0.25, 0.0));
        assert!((g.k_plus[(2, 0)] - c(2.0_f64.sqrt() / 2.0, 0.0)).norm() < 1e-15);
        assert!((g.k_plus[(2, 0)].re - 0.70711).abs() < 1e-5);
        assert_eq!(ops.a[(0, 1)], c(1.0, 0.0));
        assert_eq!(ops.a[(2, 3)], c(3.0_f64.sqrt(), 0.0));
    }

    #[test]
    fn fock_commutators_below_cutoff() {
        let n = 12;
        let g = fock_generators(&FockBasis::natural(n).unwrap()).generators;
        let c1 = &g.k_plus.commutator(&g.k_minus) + &g.k_o.scale_real(2.0);
        let c2 = &g.k_o.commutator(&g.k_plus) - &g.k_plus;
        let c3 = &g.k_o.commutator(&g.k_minus) + &g.k_minus;
        for m in [&c1, &c2, &c3] {
            assert!(m.leading_block(n - 2).max_abs() < 1e-12);
        }
        // the truncation defect sits in the top corner
        assert!(c1.max_abs() > 1.0);
    }

    #[test]
    fn position_momentum_properties() {
        let basis = FockBasis::natural(16).unwrap();
        let (x, p) = position_momentum(&basis);
        assert!((x[(0, 1)] - c(0.5_f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(x.max_abs_diff(&x.adjoint()) < 1e-15);
        assert!(p.max_abs_diff(&p.adjoint()) < 1e-15);
        let comm = &x.commutator(&p) - &DenseMatrix::identity(16).scale(c(0.0, 1.0));
        assert!(comm.leading_block(15).max_abs() < 1e-12);

        let other = FockBasis::new(16, 2.0, 3.0, 0.5).unwrap();
        let (x, p) = position_momentum(&other);
        assert!((x[(0, 1)].re - (0.5 / 12.0_f64).sqrt()).abs() < 1e-15);
        let comm = &x.commutator(&p) - &DenseMatrix::identity(16).scale(c(0.0, 0.5));
        assert!(comm.leading_block(15).max_abs() < 1e-12);
    }

    #[test]
    fn basis_validation() {
        assert_eq!(FockBasis::natural(3), Err(OracleError::BasisTooSmall(3)));
        assert!(matches!(FockBasis::new(10, 1.0, -1.0, 1.0), Err(OracleError::BadConstant { name: "omega0", .. })));
    }

    #[test]
    fn realize_identity_and_real_squeeze() {
        let gens = defining_generators();
        assert!(realize(&SqueezeParam::identity(), &gens).unwrap().max_abs_diff(&DenseMatrix::identity(2)) < 1e-15);
        let m = realize(&SqueezeParam::new(0.0, 0.9, 0.0).unwrap(), &gens).unwrap();
        assert!((0..2).all(|i| (0..2).all(|j| m[(i, j)].im.abs() < 1e-15)));
        assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn fock_pure_squeeze_unitary_on_low_block() {
        let dim = 60;
        let gens = fock_generators(&FockBasis::natural(dim).unwrap()).generators;
        let s = SqueezeParam::new(0.0, 0.5, 0.8).unwrap();
        let u = realize(&s, &gens).unwrap();
        let defect = &(&u.adjoint() * &u) - &DenseMatrix::identity(dim);
        assert!(defect.leading_block(dim / 3).max_abs() < 1e-6);
    }

    #[test]
    fn fragmentation_needs_conjugate_for_complex_eta() {
        let gens = defining_generators();
        let s = SqueezeParam::new(0.4, 0.8, 1.1).unwrap();
        let target = realize(&s, &gens).unwrap();
        let f = fragment(&s);
        let good = realize_fragmented(&f, &gens, LastFactor::Conjugated).unwrap();
        let literal = realize_fragmented(&f, &gens, LastFactor::Literal).unwrap();
        assert!(good.max_abs_diff(&target) < 1e-12);
        assert!(literal.max_abs_diff(&target) > 0.1);

        let real = SqueezeParam::new(0.4, 0.8, 0.0).unwrap();
        let f = fragment(&real);
        let literal = realize_fragmented(&f, &gens, LastFactor::Literal).unwrap();
        assert!(literal.max_abs_diff(&realize(&real, &gens).unwrap()) < 1e-12);
    }

    #[test]
    fn operator_norm_matches_known_values() {
        let d = DenseMatrix::diagonal(&[c(0.5, 0.0), c(0.0, -3.0), c(1.0, 1.0)]);
        assert!((d.operator_norm() - 3.0).abs() < 1e-12);
        // [[1, 1], [0, 1]] has largest singular value the golden ratio
        let m = DenseMatrix::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!((m.operator_norm() - (1.0 + 5.0_f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(DenseMatrix::zeros(3).operator_norm(), 0.0);
    }

    fn random_matrix(dim: usize, max_norm: f64) -> impl Strategy<Value = DenseMatrix> {
        proptest::collection::vec(-1.0..1.0f64, 2 * dim * dim).prop_map(move |v| {
            let m = DenseMatrix::from_fn(dim, |i, j| c(v[2 * (i * dim + j)], v[2 * (i * dim + j) + 1]));
            let norm = m.one_norm();
            if norm > max_norm {
                m.scale_real(max_norm / norm)
            } else {
                m
            }
        })
    }

    proptest! {
        #[test]
        fn expm_inverse_pair(a in random_matrix(3, 5.0)) {
            let prod = &expm(&a).unwrap() * &expm(&a.scale_real(-1.0)).unwrap();
            prop_assert!(prod.max_abs_diff(&DenseMatrix::identity(3)) < 1e-12);
        }

        #[test]
        fn expm_determinant_is_exp_trace(a in random_matrix(2, 5.0)) {
            let det = expm(&a).unwrap().determinant();
            let expected = a.trace().exp();
            prop_assert!((det - expected).norm() < 1e-10 * (1.0 + expected.norm()));
        }

        #[test]
        fn defining_realization_unimodular(t in -PI..PI, r in 0.0..3.0f64, phi in -PI..PI) {
            let m = realize(&SqueezeParam::new(t, r, phi).unwrap(), &defining_generators()).unwrap();
            prop_assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-10);
        }

        #[test]
        fn group_law_matches_2x2_product(
            t1 in -PI..PI, r1 in 0.0..1.5f64, p1 in -PI..PI,
            t2 in -PI..PI, r2 in 0.0..1.5f64, p2 in -PI..PI,
        ) {
            let gens = defining_generators();
            let s1 = SqueezeParam::new(t1, r1, p1).unwrap();
            let s2 = SqueezeParam::new(t2, r2, p2).unwrap();
            let product = &realize(&s2, &gens).unwrap() * &realize(&s1, &gens).unwrap();
            let composed = realize(&compose_full(&s2, &s1).unwrap(), &gens).unwrap();
            prop_assert!(product.max_abs_diff(&composed) < 1e-10);
        }

        #[test]
        fn adjoint_action_matches_2x2_conjugation(
            t in -PI..PI, r in 0.0..1.5f64, phi in -PI..PI,
            v in proptest::array::uniform6(-2.0..2.0f64),
        ) {
            let s = SqueezeParam::new(t, r, phi).unwrap();
            let g = GeneratorCoeffs::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]));
            let closed = crate::su11::adjoint_action(&s, &g);
            let oracle = conjugate_generator_2x2(&s, &g).unwrap();
            prop_assert!(closed.max_abs_diff(&oracle) < 1e-10);
        }
    }
}
