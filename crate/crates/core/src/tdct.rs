//! Time-dependent canonical transformation of a quadratic Hamiltonian
//!
//! ```text
//! H(t) = (1/2m)·{β₃ p̂² + β₂ mω₀ [x̂p̂ + p̂x̂] + β₁ m²ω₀² x̂²}
//! ```
//!
//! onto a harmonic oscillator `H_o = p̂²/2m + ½mΩ²(t)x̂²`, in two squeezing
//! steps `W = W₂·W₁`:
//!
//! - `W₁ = exp{(i/4ħ)·ln β₃·[x̂p̂ + p̂x̂]}`, a pure real squeeze;
//! - `W₂ = exp{(im/2ħ)·(ω₀β₂ − β̇₃/2β₃)·x̂²} = exp{iγ[K_+ + K_- + 2K_o]}`.
//!
//! Each step acts as `H ↦ WHW† − iħWẆ†`. The fused squeeze is available both
//! from the generic group law and from a closed form; the former is treated as
//! ground truth.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::oracle::{self, DenseMatrix, FockBasis, OracleError};
use crate::su11::{self, argtanh, AlgebraError, SqueezeParam};

/// Agreement required between the closed-form and the generically composed
/// fused squeeze.
pub const FUSION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TdctError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("system constant {name} must be positive and finite, got {value}")]
    BadConstant { name: &'static str, value: f64 },
    #[error("beta3 must be positive, got {value} at t = {t}")]
    NonPositiveBeta3 { t: f64, value: f64 },
    #[error("non-finite coefficient {name} = {value} at t = {t}")]
    NonFiniteCoefficient { name: &'static str, t: f64, value: f64 },
    #[error("closed-form fused squeeze {closed_form} disagrees with group composition {generic} (distance {distance:e})")]
    FusionMismatch { closed_form: SqueezeParam, generic: SqueezeParam, distance: f64 },
    #[error("Fock basis constants (m={basis_m}, omega0={basis_omega0}, hbar={basis_hbar}) differ from the system constants")]
    BasisMismatch { basis_m: f64, basis_omega0: f64, basis_hbar: f64 },
    #[error("Fock basis of dimension {0} is too small; need at least 40")]
    BasisTooSmall(usize),
    #[error("truncation noise {noise:e} exceeds half the mismatch distance {distance:e}")]
    UnreliableMismatch { distance: f64, noise: f64 },
    #[error("coefficient evaluation failed at t = {t}: {message}")]
    Coefficients { t: f64, message: String },
}

/// Mass, oscillator frequency and the action constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConstants {
    m: f64,
    omega0: f64,
    hbar: f64,
}

impl SystemConstants {
    pub fn new(m: f64, omega0: f64, hbar: f64) -> Result<Self, TdctError> {
        for (name, value) in [("m", m), ("omega0", omega0), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(TdctError::BadConstant { name, value });
            }
        }
        Ok(Self { m, omega0, hbar })
    }

    pub fn natural() -> Self {
        Self { m: 1.0, omega0: 1.0, hbar: 1.0 }
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

    /// Truncated Fock basis sharing these constants.
    pub fn fock_basis(&self, dim: usize) -> Result<FockBasis, OracleError> {
        FockBasis::new(dim, self.m, self.omega0, self.hbar)
    }
}

impl Default for SystemConstants {
    fn default() -> Self {
        Self::natural()
    }
}

/// Values of `β₁, β₂, β₃` and the derivatives the pipeline needs, at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSample {
    t: f64,
    beta1: f64,
    beta2: f64,
    beta3: f64,
    beta2_dot: f64,
    beta3_dot: f64,
    beta3_ddot: f64,
}

impl CoefficientSample {
    pub fn new(
        t: f64,
        beta1: f64,
        beta2: f64,
        beta3: f64,
        beta2_dot: f64,
        beta3_dot: f64,
        beta3_ddot: f64,
    ) -> Result<Self, TdctError> {
        let named = [
            ("t", t),
            ("beta1", beta1),
            ("beta2", beta2),
            ("beta3", beta3),
            ("beta2_dot", beta2_dot),
            ("beta3_dot", beta3_dot),
            ("beta3_ddot", beta3_ddot),
        ];
        if let Some(&(name, value)) = named.iter().find(|(_, v)| !v.is_finite()) {
            return Err(TdctError::NonFiniteCoefficient { name, t, value });
        }
        if beta3 <= 0.0 {
            return Err(TdctError::NonPositiveBeta3 { t, value: beta3 });
        }
        Ok(Self { t, beta1, beta2, beta3, beta2_dot, beta3_dot, beta3_ddot })
    }

    /// Time-independent coefficients at `t = 0`.
    pub fn constant(beta1: f64, beta2: f64, beta3: f64) -> Result<Self, TdctError> {
        Self::new(0.0, beta1, beta2, beta3, 0.0, 0.0, 0.0)
    }

    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn beta1(&self) -> f64 {
        self.beta1
    }
    pub fn beta2(&self) -> f64 {
        self.beta2
    }
    pub fn beta3(&self) -> f64 {
        self.beta3
    }
    pub fn beta2_dot(&self) -> f64 {
        self.beta2_dot
    }
    pub fn beta3_dot(&self) -> f64 {
        self.beta3_dot
    }
    pub fn beta3_ddot(&self) -> f64 {
        self.beta3_ddot
    }
}

/// Anything that yields coefficient samples at arbitrary times.
pub trait CoefficientSource {
    fn sample(&self, t: f64) -> Result<CoefficientSample, TdctError>;
}

impl<F> CoefficientSource for F
where
    F: Fn(f64) -> Result<CoefficientSample, TdctError>,
{
    fn sample(&self, t: f64) -> Result<CoefficientSample, TdctError> {
        self(t)
    }
}

/// `c_pp·p̂²/2m + c_xp·[x̂p̂ + p̂x̂] + c_xx·x̂²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadForm {
    pub c_pp: f64,
    pub c_xp: f64,
    pub c_xx: f64,
}

impl QuadForm {
    /// Realizes the form with the given position and momentum matrices.
    pub fn to_operator(&self, x: &DenseMatrix, p: &DenseMatrix, k: &SystemConstants) -> DenseMatrix {
        let pp = (p * p).scale_real(self.c_pp / (2.0 * k.m));
        let xp = (&(x * p) + &(p * x)).scale_real(self.c_xp);
        let xx = (x * x).scale_real(self.c_xx);
        &(&pp + &xp) + &xx
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.c_pp - other.c_pp).abs().max((self.c_xp - other.c_xp).abs()).max((self.c_xx - other.c_xx).abs())
    }
}

/// A point `(x, p)` of classical phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }
}

/// `ω₀β₂ − β̇₃/(2β₃)`, the rate shared by `W₂`, `H₁` and the phase-space map.
fn shear_rate(s: &CoefficientSample, k: &SystemConstants) -> f64 {
    k.omega0 * s.beta2 - s.beta3_dot / (2.0 * s.beta3)
}

/// `γ(t) = (1/2ω₀)·{ω₀β₂ − β̇₃/(2β₃)}`.
pub fn gamma_mix(s: &CoefficientSample, k: &SystemConstants) -> f64 {
    shear_rate(s, k) / (2.0 * k.omega0)
}

/// Signed real squeeze argument of `W₁`: `argtanh{(1 − β₃)/(1 + β₃)} = −½·ln β₃`.
pub fn w1_rho(s: &CoefficientSample) -> Result<f64, TdctError> {
    Ok(argtanh((1.0 - s.beta3) / (1.0 + s.beta3))?)
}

/// `W₁ = S(0, ρ₁)`; a negative `ρ₁` is stored as `φ = π`.
pub fn w1_params(s: &CoefficientSample) -> Result<SqueezeParam, TdctError> {
    Ok(SqueezeParam::pure(Complex64::new(w1_rho(s)?, 0.0))?)
}

/// `W₂ = S(θ₂, ρ₂)` with `θ₂ = arctan γ` and `ρ₂ = arcsinh(γ)·e^{i(π/2 − θ₂)}`.
pub fn w2_params(s: &CoefficientSample, k: &SystemConstants) -> Result<SqueezeParam, TdctError> {
    let gamma = gamma_mix(s, k);
    let theta2 = gamma.atan();
    // argtanh(γ/√(1+γ²)) = arcsinh γ, and the latter needs no guard
    let rho2 = Complex64::from_polar(gamma.asinh(), FRAC_PI_2 - theta2);
    Ok(SqueezeParam::from_rho(theta2, rho2)?)
}

/// Closed form of the fused squeeze `W = W₂W₁ = S(θ_o, ρ_o)`:
///
/// ```text
/// θ_o   = arctan{2γ/(1 + β₃)}
/// |ρ_o| = argtanh √{(4γ² + (1 − β₃)²)/(4γ² + (1 + β₃)²)}
/// arg ρ_o = arg{(1 − β₃) + 2iγ} − θ_o
/// ```
///
/// The phase term `arg{(1 − β₃) + 2iγ}` is the quadrant-aware reading of
/// `arctan{2γ/(1 − β₃)}`; the principal-branch reading is off by `π` whenever
/// `β₃ > 1`, see [`w_combined_principal_branch`].
pub fn w_combined_closed_form(s: &CoefficientSample, k: &SystemConstants) -> Result<SqueezeParam, TdctError> {
    let gamma = gamma_mix(s, k);
    let (lo, hi) = (1.0 - s.beta3, 1.0 + s.beta3);
    let theta_o = (2.0 * gamma / hi).atan();
    let g2 = 4.0 * gamma * gamma;
    let modulus = argtanh(((g2 + lo * lo) / (g2 + hi * hi)).sqrt())?;
    let phase = (2.0 * gamma).atan2(lo) - theta_o;
    Ok(SqueezeParam::new(theta_o, modulus, phase)?)
}

/// The closed form with `arctan{2γ/(1 − β₃)}` taken on its principal branch.
/// Kept as a diagnostic: it disagrees with the group law for `β₃ > 1`.
pub fn w_combined_principal_branch(s: &CoefficientSample, k: &SystemConstants) -> Result<SqueezeParam, TdctError> {
    let gamma = gamma_mix(s, k);
    let (lo, hi) = (1.0 - s.beta3, 1.0 + s.beta3);
    let theta_o = (2.0 * gamma / hi).atan();
    let g2 = 4.0 * gamma * gamma;
    let modulus = argtanh(((g2 + lo * lo) / (g2 + hi * hi)).sqrt())?;
    let ratio = 2.0 * gamma / lo;
    let first = if ratio.is_nan() { 0.0 } else { ratio.atan() };
    Ok(SqueezeParam::new(theta_o, modulus, first - theta_o)?)
}

/// `W₂·W₁` by the generic composition law.
pub fn w_generic(s: &CoefficientSample, k: &SystemConstants) -> Result<SqueezeParam, TdctError> {
    Ok(su11::compose_full(&w2_params(s, k)?, &w1_params(s)?)?)
}

/// The fused squeeze `W(t)`. Returns the closed form after checking it against
/// the group composition, and fails with both values if they disagree by more
/// than [`FUSION_TOLERANCE`].
pub fn w_combined(s: &CoefficientSample, k: &SystemConstants) -> Result<SqueezeParam, TdctError> {
    let closed_form = w_combined_closed_form(s, k)?;
    let generic = w_generic(s, k)?;
    let distance = closed_form.distance(&generic);
    if distance > FUSION_TOLERANCE {
        return Err(TdctError::FusionMismatch { closed_form, generic, distance });
    }
    Ok(closed_form)
}

/// The original Hamiltonian `H(t)`.
pub fn hamiltonian_of(s: &CoefficientSample, k: &SystemConstants) -> QuadForm {
    QuadForm {
        c_pp: s.beta3,
        c_xp: s.beta2 * k.omega0 / 2.0,
        c_xx: s.beta1 * k.m * k.omega0 * k.omega0 / 2.0,
    }
}

/// `H₁ = p̂²/2m + ½{ω₀β₂ − β̇₃/(2β₃)}[x̂p̂ + p̂x̂] + ½mω₀²β₁β₃x̂²`.
pub fn h1_of(s: &CoefficientSample, k: &SystemConstants) -> QuadForm {
    QuadForm {
        c_pp: 1.0,
        c_xp: 0.5 * shear_rate(s, k),
        c_xx: 0.5 * k.m * k.omega0 * k.omega0 * s.beta1 * s.beta3,
    }
}

/// `Ω²(t) = ω₀²(β₁β₃ − β₂²) + ω₀(β̇₃β₂ − β̇₂β₃)/β₃ + β̈₃/(2β₃) − ¾(β̇₃/β₃)²`.
pub fn omega_squared(s: &CoefficientSample, k: &SystemConstants) -> f64 {
    let w = k.omega0;
    let ratio = s.beta3_dot / s.beta3;
    w * w * (s.beta1 * s.beta3 - s.beta2 * s.beta2)
        + w * (s.beta3_dot * s.beta2 - s.beta2_dot * s.beta3) / s.beta3
        + s.beta3_ddot / (2.0 * s.beta3)
        - 0.75 * ratio * ratio
}

/// `Ω²` grouped as in the classical derivation:
/// `… + ½(β̈₃/β₃ − β̇₃²/β₃²) − ¼β̇₃²/β₃²`.
pub fn omega_squared_classical(s: &CoefficientSample, k: &SystemConstants) -> f64 {
    let w = k.omega0;
    let sq = (s.beta3_dot * s.beta3_dot) / (s.beta3 * s.beta3);
    w * w * (s.beta1 * s.beta3 - s.beta2 * s.beta2)
        + w * ((s.beta3_dot * s.beta2 - s.beta2_dot * s.beta3) / s.beta3)
        + (0.5 * (s.beta3_ddot / s.beta3 - sq) - 0.25 * sq)
}

/// `H_o = p̂²/2m + ½mΩ²x̂²`.
pub fn ho_of(s: &CoefficientSample, k: &SystemConstants) -> QuadForm {
    QuadForm { c_pp: 1.0, c_xp: 0.0, c_xx: 0.5 * k.m * omega_squared(s, k) }
}

/// `X = β₃^{−½}x`, `P = β₃^{½}{p + (m/β₃)(ω₀β₂ − β̇₃/(2β₃))x}`.
pub fn phase_space_map(pt: &PhasePoint, s: &CoefficientSample, k: &SystemConstants) -> PhasePoint {
    let root = s.beta3.sqrt();
    PhasePoint {
        x: pt.x / root,
        p: root * (pt.p + k.m / s.beta3 * shear_rate(s, k) * pt.x),
    }
}

/// Old momentum `p` from old position `x` and new momentum `P`.
pub fn old_momentum(x: f64, new_p: f64, s: &CoefficientSample, k: &SystemConstants) -> f64 {
    new_p / s.beta3.sqrt() - k.m / s.beta3 * shear_rate(s, k) * x
}

/// Jacobian determinant `∂(X, P)/∂(x, p)` of [`phase_space_map`], in closed form.
pub fn phase_space_jacobian(s: &CoefficientSample) -> f64 {
    let root = s.beta3.sqrt();
    // ∂X/∂x·∂P/∂p − ∂X/∂p·∂P/∂x with ∂X/∂p = 0
    (1.0 / root) * root
}

/// Type-two generating function
/// `F₂(x, P) = (m/2β₃){β̇₃/(2β₃) − ω₀β₂}x² + β₃^{−½}xP`.
pub fn f2_eval(x: f64, new_p: f64, s: &CoefficientSample, k: &SystemConstants) -> f64 {
    -k.m / (2.0 * s.beta3) * shear_rate(s, k) * x * x + x * new_p / s.beta3.sqrt()
}

/// Fock-space realization of the fused squeeze.
pub fn w_operator(s: &CoefficientSample, k: &SystemConstants, basis: &FockBasis) -> Result<DenseMatrix, TdctError> {
    check_basis(k, basis)?;
    let gens = oracle::fock_generators(basis).generators;
    Ok(oracle::realize(&w_combined(s, k)?, &gens)?)
}

fn check_basis(k: &SystemConstants, basis: &FockBasis) -> Result<(), TdctError> {
    if basis.m() != k.m || basis.omega0() != k.omega0 || basis.hbar() != k.hbar {
        return Err(TdctError::BasisMismatch {
            basis_m: basis.m(),
            basis_omega0: basis.omega0(),
            basis_hbar: basis.hbar(),
        });
    }
    Ok(())
}

/// `W(t)H(t)W†(t) − iħW(t)Ẇ†(t)` in the truncated Fock space, with `Ẇ†`
/// from a central difference of step `delta`.
///
/// The difference quotient carries an `O(δ²)` truncation error and an
/// `O(ε/δ)` rounding error; `δ ≈ 1e-4` balances the two for `ε ≈ 1e-13`.
pub fn transformed_hamiltonian(
    source: &impl CoefficientSource,
    t: f64,
    delta: f64,
    k: &SystemConstants,
    basis: &FockBasis,
) -> Result<DenseMatrix, TdctError> {
    check_basis(k, basis)?;
    let (x, p) = oracle::position_momentum(basis);
    let gens = oracle::fock_generators(basis).generators;
    let w_at = |time: f64| -> Result<DenseMatrix, TdctError> {
        let sample = source.sample(time)?;
        Ok(oracle::realize(&w_combined(&sample, k)?, &gens)?)
    };
    let sample = source.sample(t)?;
    let w = w_at(t)?;
    let w_dag_dot = (&w_at(t + delta)?.adjoint() - &w_at(t - delta)?.adjoint()).scale_real(1.0 / (2.0 * delta));
    let h = hamiltonian_of(&sample, k).to_operator(&x, &p, k);
    let conjugated = &(&w * &h) * &w.adjoint();
    let frame_term = (&w * &w_dag_dot).scale(Complex64::new(0.0, -k.hbar));
    Ok(&conjugated + &frame_term)
}

/// Result of comparing `exp{(i/ħ)F₂(x̂, P̂)}` with the fused squeeze `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMismatch {
    /// Operator-norm distance on the leading block, Weyl-ordered `x̂P̂`.
    pub distance: f64,
    /// Same distance with the cross term ordered as `x̂P̂`.
    pub distance_xp_ordered: f64,
    /// Truncation noise floor of the comparison.
    pub noise: f64,
    /// Size of the leading block compared.
    pub block: usize,
}

/// Ordering of the `x̂P̂` cross term when promoting `F₂` to an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossOrdering {
    Weyl,
    XFirst,
}

/// The operator `F₂(x̂, P̂)` with `P̂ = β₃^{½}{p̂ + (m/β₃)(ω₀β₂ − β̇₃/(2β₃))x̂}`.
pub fn f2_operator(
    s: &CoefficientSample,
    k: &SystemConstants,
    basis: &FockBasis,
    ordering: CrossOrdering,
) -> DenseMatrix {
    let (x, p) = oracle::position_momentum(basis);
    let root = s.beta3.sqrt();
    let rate = shear_rate(s, k);
    let new_p = (&p + &x.scale_real(k.m / s.beta3 * rate)).scale_real(root);
    let quadratic = (&x * &x).scale_real(-k.m / (2.0 * s.beta3) * rate);
    let cross = match ordering {
        CrossOrdering::Weyl => (&(&x * &new_p) + &(&new_p * &x)).scale_real(0.5),
        CrossOrdering::XFirst => &x * &new_p,
    };
    &quadratic + &cross.scale_real(1.0 / root)
}

/// Distance between the naive quantization `exp{(i/ħ)F₂(x̂, P̂)}` of the
/// classical generating function and the squeeze `W(t)`, measured on the first
/// `dim/3` Fock states.
///
/// The noise floor is the larger of the unitarity defect of both operators on
/// that block and the change of both blocks when the basis grows by half.
pub fn dirac_mismatch(
    s: &CoefficientSample,
    k: &SystemConstants,
    basis: &FockBasis,
) -> Result<DiracMismatch, TdctError> {
    check_basis(k, basis)?;
    if basis.dim() < 40 {
        return Err(TdctError::BasisTooSmall(basis.dim()));
    }
    let block = basis.dim() / 3;
    let larger = k.fock_basis(basis.dim() + basis.dim() / 2)?;

    let naive = |b: &FockBasis, ordering| -> Result<DenseMatrix, TdctError> {
        let f = f2_operator(s, k, b, ordering);
        Ok(oracle::expm(&f.scale(Complex64::new(0.0, 1.0 / k.hbar)))?)
    };
    let u_f = naive(basis, CrossOrdering::Weyl)?;
    let u_w = w_operator(s, k, basis)?;
    let u_f_big = naive(&larger, CrossOrdering::Weyl)?;
    let u_w_big = w_operator(s, k, &larger)?;
    let u_xp = naive(basis, CrossOrdering::XFirst)?;

    let distance = (&u_f - &u_w).leading_block(block).operator_norm();
    let distance_xp_ordered = (&u_xp - &u_w).leading_block(block).operator_norm();

    let eye = DenseMatrix::identity(block);
    let unitarity = |u: &DenseMatrix| (&(&u.adjoint() * u).leading_block(block) - &eye).operator_norm();
    let drift = |small: &DenseMatrix, big: &DenseMatrix| {
        (&small.leading_block(block) - &big.leading_block(block)).operator_norm()
    };
    let noise = unitarity(&u_f)
        .max(unitarity(&u_w))
        .max(drift(&u_f, &u_f_big))
        .max(drift(&u_w, &u_w_big));

    if noise > 0.5 * distance {
        return Err(TdctError::UnreliableMismatch { distance, noise });
    }
    Ok(DiracMismatch { distance, distance_xp_ordered, noise, block })
}
