//! Closed-form calculus of SU(1,1) squeezing operators.
//!
//! A squeezing operator is parameterized as
//!
//! ```text
//! S(θ, ρ) = exp{2iθ K_o} · exp{ρ K_+ − ρ* K_-},      ρ = r·e^{iφ}
//! ```
//!
//! with generators obeying `[K_+, K_-] = −2K_o` and `[K_o, K_±] = ±K_±`.
//! Products of squeezes are computed through the unit-disk coordinate
//! `η = tanh(r)·e^{iφ}`, where the group law becomes a Möbius-type addition.
//!
//! Everything here is a pure function over `Copy` values. The numerical
//! ground truth for all of it lives in [`crate::oracle`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Largest `|x|` accepted by [`argtanh`].
pub const ARGTANH_LIMIT: f64 = 1.0 - 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("non-finite {what}: {value}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("squeeze magnitude must be non-negative, got {0}")]
    NegativeMagnitude(f64),
    #[error("disk coordinate has |eta| = {0}, must be < 1")]
    OutsideDisk(f64),
    #[error("argtanh argument {0} is beyond the representable range |x| <= 1 - 1e-15")]
    ArgtanhDomain(f64),
}

/// Reduces an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Absolute distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Inverse hyperbolic tangent as `½·ln((1+x)/(1−x))`, refusing arguments whose
/// result would be dominated by rounding.
pub fn argtanh(x: f64) -> Result<f64, AlgebraError> {
    if !x.is_finite() {
        return Err(AlgebraError::NonFinite { what: "argtanh argument", value: x });
    }
    if x.abs() > ARGTANH_LIMIT {
        return Err(AlgebraError::ArgtanhDomain(x));
    }
    // ln_1p keeps full relative precision for small |x|.
    Ok(0.5 * (x.ln_1p() - (-x).ln_1p()))
}

fn check_finite(what: &'static str, value: f64) -> Result<f64, AlgebraError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(AlgebraError::NonFinite { what, value })
    }
}

/// Parameters `(θ, ρ = r·e^{iφ})` of `S(θ, ρ)`.
///
/// Stored canonically: `θ, φ ∈ (−π, π]`, `r ≥ 0`, and `φ = 0` whenever `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    theta: f64,
    r: f64,
    phi: f64,
}

impl SqueezeParam {
    pub fn new(theta: f64, r: f64, phi: f64) -> Result<Self, AlgebraError> {
        let theta = check_finite("theta", theta)?;
        let r = check_finite("r", r)?;
        let phi = check_finite("phi", phi)?;
        if r < 0.0 {
            return Err(AlgebraError::NegativeMagnitude(r));
        }
        Ok(Self::canonical(theta, r, phi))
    }

    /// Builds the parameter from a complex squeeze argument `ρ`.
    pub fn from_rho(theta: f64, rho: Complex64) -> Result<Self, AlgebraError> {
        check_finite("Re rho", rho.re)?;
        check_finite("Im rho", rho.im)?;
        let theta = check_finite("theta", theta)?;
        Ok(Self::canonical(theta, rho.norm(), rho.arg()))
    }

    fn canonical(theta: f64, r: f64, phi: f64) -> Self {
        let phi = if r == 0.0 { 0.0 } else { wrap_angle(phi) };
        Self { theta: wrap_angle(theta), r, phi }
    }

    pub const fn identity() -> Self {
        Self { theta: 0.0, r: 0.0, phi: 0.0 }
    }

    /// The pure rotation `exp{2iθK_o}`.
    pub fn rotation(theta: f64) -> Result<Self, AlgebraError> {
        Self::new(theta, 0.0, 0.0)
    }

    /// The pure squeeze `exp{ρK_+ − ρ*K_-}`.
    pub fn pure(rho: Complex64) -> Result<Self, AlgebraError> {
        Self::from_rho(0.0, rho)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn rho(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.phi)
    }

    /// Parameter-space distance: the larger of the circular distance between
    /// the θ's and `|ρ − ρ'|`. Comparing `ρ` as a complex number keeps the
    /// measure continuous through `r = 0`, where `φ` is meaningless.
    pub fn distance(&self, other: &Self) -> f64 {
        angle_distance(self.theta, other.theta).max((self.rho() - other.rho()).norm())
    }
}

impl Default for SqueezeParam {
    fn default() -> Self {
        Self::identity()
    }
}

impl fmt::Display for SqueezeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(theta={}, r={}, phi={})", self.theta, self.r, self.phi)
    }
}

/// A point `η` of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    eta: Complex64,
}

impl DiskPoint {
    pub fn new(eta: Complex64) -> Result<Self, AlgebraError> {
        check_finite("Re eta", eta.re)?;
        check_finite("Im eta", eta.im)?;
        let modulus = eta.norm();
        if modulus >= 1.0 {
            return Err(AlgebraError::OutsideDisk(modulus));
        }
        Ok(Self { eta })
    }

    pub fn origin() -> Self {
        Self { eta: Complex64::new(0.0, 0.0) }
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }
}

/// Normal-ordered factors of `S(θ, ρ)`:
///
/// ```text
/// S(θ, ρ) = exp{2iθK_o} · exp{ηK_+} · exp{γ K_o} · exp{−η* K_-}
/// ```
///
/// The last factor carries `η*`; only for real `η` does it coincide with
/// `exp{−ηK_-}`. See [`crate::oracle::LastFactor`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragmentation {
    pub theta: f64,
    pub eta: DiskPoint,
    /// `ln(1 − |η|²)`, always `≤ 0`.
    pub gamma_frag: f64,
}

/// Element `c_o K_o + c_+ K_+ + c_- K_-` of the complexified algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorCoeffs {
    pub c_o: Complex64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

impl GeneratorCoeffs {
    pub fn new(c_o: Complex64, c_plus: Complex64, c_minus: Complex64) -> Self {
        Self { c_o, c_plus, c_minus }
    }

    pub fn k_o() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn k_plus() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn k_minus() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// Invariant quadratic form `c_o² − 4·c_+·c_-`.
    pub fn killing_form(&self) -> Complex64 {
        self.c_o * self.c_o - 4.0 * self.c_plus * self.c_minus
    }

    /// Deviation from being a Hermitian combination (`c_o` real and
    /// `c_- = c_+*`); zero for Hermitian combinations.
    pub fn hermiticity_defect(&self) -> f64 {
        self.c_o.im.abs().max((self.c_minus - self.c_plus.conj()).norm())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.c_o * k, self.c_plus * k, self.c_minus * k)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.c_o - other.c_o)
            .norm()
            .max((self.c_plus - other.c_plus).norm())
            .max((self.c_minus - other.c_minus).norm())
    }
}

impl std::ops::Add for GeneratorCoeffs {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.c_o + rhs.c_o, self.c_plus + rhs.c_plus, self.c_minus + rhs.c_minus)
    }
}

/// `η = tanh(r)·e^{iφ}`.
pub fn to_disk(p: &SqueezeParam) -> DiskPoint {
    DiskPoint { eta: Complex64::from_polar(p.r.tanh(), p.phi) }
}

/// Inverse of [`to_disk`] on the `(r, φ)` part; the returned `θ` is zero.
pub fn from_disk(d: &DiskPoint) -> Result<SqueezeParam, AlgebraError> {
    let modulus = d.eta.norm();
    if modulus >= 1.0 {
        return Err(AlgebraError::OutsideDisk(modulus));
    }
    let r = argtanh(modulus)?;
    Ok(SqueezeParam::canonical(0.0, r, d.eta.arg()))
}

/// Squeeze argument after commuting `exp{2iθK_o}` from the left of the squeeze
/// factor to its right: `ρ ↦ ρ·e^{2iθ}`.
pub fn transpose_phase(theta: f64, rho: Complex64) -> Complex64 {
    rho * Complex64::from_polar(1.0, 2.0 * theta)
}

fn rho_to_eta(rho: Complex64) -> Complex64 {
    let r = rho.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        rho * (r.tanh() / r)
    }
}

/// Composes two pure squeezes:
///
/// ```text
/// exp{ρ₂K_+ − ρ₂*K_-} · exp{ρ₁K_+ − ρ₁*K_-} = exp{2iθ_o K_o} · exp{ρ_o K_+ − ρ_o* K_-}
/// ```
///
/// with `η_o = (η₁ + η₂)/(1 + η₁*η₂)` and `2iθ_o = log{(1 + η₁*η₂)/(1 + η₁η₂*)}`.
pub fn compose_pure(rho2: Complex64, rho1: Complex64) -> Result<SqueezeParam, AlgebraError> {
    for (what, v) in [("Re rho1", rho1.re), ("Im rho1", rho1.im), ("Re rho2", rho2.re), ("Im rho2", rho2.im)] {
        check_finite(what, v)?;
    }
    let eta1 = rho_to_eta(rho1);
    let eta2 = rho_to_eta(rho2);
    let denom = Complex64::new(1.0, 0.0) + eta1.conj() * eta2;
    // |η₁*η₂| < 1, so the denominator sits in the right half-plane and the
    // principal logarithm below never meets its branch cut.
    debug_assert!(denom.re > 0.0);
    let eta_o = (eta1 + eta2) / denom;
    let two_i_theta = (denom / denom.conj()).ln();
    let theta_o = two_i_theta.im / 2.0;
    let rho_part = from_disk(&DiskPoint::new(eta_o)?)?;
    Ok(SqueezeParam::canonical(theta_o, rho_part.r, rho_part.phi))
}

/// Returns `s` with `S(s) = S(s2)·S(s1)`.
pub fn compose_full(s2: &SqueezeParam, s1: &SqueezeParam) -> Result<SqueezeParam, AlgebraError> {
    // exp{ρ₂…}·exp{2iθ₁K_o} = exp{2iθ₁K_o}·exp{ρ₂e^{−2iθ₁}…}
    let rho2_moved = transpose_phase(-s1.theta, s2.rho());
    let pure = compose_pure(rho2_moved, s1.rho())?;
    Ok(SqueezeParam::canonical(s2.theta + s1.theta + pure.theta, pure.r, pure.phi))
}

/// Group inverse: `(θ, ρ) ↦ (−θ, −ρ·e^{2iθ})`.
pub fn inverse(s: &SqueezeParam) -> SqueezeParam {
    let rho = -transpose_phase(s.theta, s.rho());
    SqueezeParam::canonical(-s.theta, rho.norm(), rho.arg())
}

/// Normal-ordered decomposition of `S(s)`.
pub fn fragment(s: &SqueezeParam) -> Fragmentation {
    let eta = to_disk(s);
    // ln(1 − tanh²r) = −2·ln cosh r, written to stay finite for large r.
    let r = s.r;
    let ln_cosh = r + (-2.0 * r).exp().ln_1p() - std::f64::consts::LN_2;
    Fragmentation { theta: s.theta, eta, gamma_frag: -2.0 * ln_cosh }
}

/// Coefficients of `S g S†`.
pub fn adjoint_action(s: &SqueezeParam, g: &GeneratorCoeffs) -> GeneratorCoeffs {
    let theta_plus = s.theta;
    let theta_minus = s.phi + s.theta;
    let (r2_sinh, r2_cosh) = ((2.0 * s.r).sinh(), (2.0 * s.r).cosh());
    let cosh_sq = s.r.cosh().powi(2);
    let sinh_sq = s.r.sinh().powi(2);
    let e = |angle: f64| Complex64::from_polar(1.0, angle);
    let real = |x: f64| Complex64::new(x, 0.0);

    let image_o = GeneratorCoeffs::new(
        real(r2_cosh),
        -0.5 * r2_sinh * e(theta_plus + theta_minus),
        -0.5 * r2_sinh * e(-(theta_plus + theta_minus)),
    );
    let image_plus = GeneratorCoeffs::new(
        -r2_sinh * e(theta_plus - theta_minus),
        cosh_sq * e(2.0 * theta_plus),
        sinh_sq * e(-2.0 * theta_minus),
    );
    let image_minus = GeneratorCoeffs::new(
        -r2_sinh * e(-(theta_plus - theta_minus)),
        sinh_sq * e(2.0 * theta_minus),
        cosh_sq * e(-2.0 * theta_plus),
    );
    image_o.scale(g.c_o) + image_plus.scale(g.c_plus) + image_minus.scale(g.c_minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn param(theta: f64, r: f64, phi: f64) -> SqueezeParam {
        SqueezeParam::new(theta, r, phi).unwrap()
    }

    #[test]
    fn canonicalization() {
        let p = param(3.0 * PI, 0.0, 2.0);
        assert!((p.theta() - PI).abs() < 1e-15);
        assert_eq!(p.phi(), 0.0);
        assert!((param(0.0, 1.0, -PI).phi() - PI).abs() < 1e-15);
        assert_eq!(SqueezeParam::new(0.0, -0.1, 0.0), Err(AlgebraError::NegativeMagnitude(-0.1)));
        assert!(SqueezeParam::new(f64::NAN, 0.1, 0.0).is_err());
        assert!((SqueezeParam::from_rho(0.0, c(-1.0, -0.0)).unwrap().phi() - PI).abs() < 1e-15);
    }

    #[test]
    fn disk_examples() {
        assert_eq!(to_disk(&SqueezeParam::identity()).eta(), c(0.0, 0.0));
        let eta = to_disk(&param(0.0, 0.5, 0.0)).eta();
        assert!((eta - c(0.462_117_157_260_009_8, 0.0)).norm() < 1e-15);
        let eta = to_disk(&param(0.0, 0.3, FRAC_PI_2)).eta();
        assert!((eta - c(0.0, 0.291_312_612_451_590_7)).norm() < 1e-15);

        let p = from_disk(&DiskPoint::origin()).unwrap();
        assert_eq!((p.r(), p.phi()), (0.0, 0.0));
        let p = from_disk(&DiskPoint::new(c(0.462_117_157_260_009_8, 0.0)).unwrap()).unwrap();
        assert!((p.r() - 0.5).abs() < 1e-15);
        assert_eq!(p.phi(), 0.0);
    }

    #[test]
    fn disk_rejects_boundary() {
        assert!(matches!(DiskPoint::new(c(1.0, 0.0)), Err(AlgebraError::OutsideDisk(_))));
        assert!(matches!(DiskPoint::new(c(0.8, 0.8)), Err(AlgebraError::OutsideDisk(_))));
        let near = DiskPoint::new(c(1.0 - 1e-17, 0.0));
        // 1 − 1e-17 rounds to 1.0 in f64
        assert!(near.is_err());
        assert!(matches!(argtanh(1.0 - 1e-16), Err(AlgebraError::ArgtanhDomain(_))));
        assert!(argtanh(0.999_999_999_999).is_ok());
    }

    #[test]
    fn transpose_phase_examples() {
        let rho = c(0.3, -0.7);
        assert_eq!(transpose_phase(0.0, rho), rho);
        assert!((transpose_phase(FRAC_PI_2, c(0.5, 0.0)) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((transpose_phase(PI / 4.0, c(0.5, 0.0)) - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn compose_pure_examples() {
        let rho = c(0.2, -0.4);
        let out = compose_pure(c(0.0, 0.0), rho).unwrap();
        assert_eq!(out.theta(), 0.0);
        assert!((out.rho() - rho).norm() < 1e-15);

        // real arguments add
        let out = compose_pure(c(0.2, 0.0), c(0.3, 0.0)).unwrap();
        assert_eq!(out.theta(), 0.0);
        assert!((out.r() - 0.5).abs() < 1e-15);
        assert_eq!(out.phi(), 0.0);

        let rho1 = c(argtanh(0.3).unwrap(), 0.0);
        let rho2 = c(0.0, argtanh(0.4).unwrap());
        let out = compose_pure(rho2, rho1).unwrap();
        let eta = to_disk(&out).eta();
        // (0.3 + 0.4i)/(1 + 0.12i), θ = arctan 0.12
        assert!((eta - c(0.348 / 1.0144, 0.364 / 1.0144)).norm() < 1e-14);
        assert!((eta - c(0.34306, 0.35883)).norm() < 1e-5);
        assert!((out.theta() - 0.12_f64.atan()).abs() < 1e-15);
        assert!((out.theta() - 0.11943).abs() < 1e-5);
    }

    #[test]
    fn compose_full_examples() {
        let a = param(0.0, 0.4, 1.1);
        let b = param(0.0, 0.7, -2.0);
        assert_eq!(compose_full(&a, &b).unwrap(), compose_pure(a.rho(), b.rho()).unwrap());

        let out = compose_full(&param(2.0, 0.0, 0.0), &param(2.5, 0.0, 0.0)).unwrap();
        assert!((out.theta() - wrap_angle(4.5)).abs() < 1e-15);
        assert_eq!(out.r(), 0.0);
    }

    #[test]
    fn fragment_examples() {
        let f = fragment(&SqueezeParam::identity());
        assert_eq!(f.eta.eta(), c(0.0, 0.0));
        assert_eq!(f.gamma_frag, 0.0);

        let f = fragment(&param(0.0, 0.5, 0.0));
        let sech = 1.0 / 0.5_f64.cosh();
        assert!((f.gamma_frag - 2.0 * sech.ln()).abs() < 1e-15);
        assert!((f.gamma_frag + 0.24023).abs() < 1e-5);

        let g = fragment(&param(0.0, 0.5, 1.0));
        assert!((g.gamma_frag - f.gamma_frag).abs() < 1e-15);
        let rotated = f.eta.eta() * Complex64::from_polar(1.0, 1.0);
        assert!((g.eta.eta() - rotated).norm() < 1e-15);

        // stays finite where 1 − |η|² underflows
        let big = fragment(&param(0.0, 40.0, 0.0));
        assert!((big.gamma_frag - (-2.0 * (40.0 - std::f64::consts::LN_2))).abs() < 1e-12);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&SqueezeParam::identity()), SqueezeParam::identity());
        let s = param(0.0, 0.8, 0.3);
        let inv = inverse(&s);
        assert_eq!(inv.theta(), 0.0);
        assert!((inv.r() - 0.8).abs() < 1e-15);
        assert!(angle_distance(inv.phi(), 0.3 + PI) < 1e-15);
    }

    #[test]
    fn adjoint_examples() {
        let g = GeneratorCoeffs::new(c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.0));
        let out = adjoint_action(&SqueezeParam::identity(), &g);
        assert!(out.max_abs_diff(&g) < 1e-15);

        let out = adjoint_action(&param(0.0, 0.5, 0.0), &GeneratorCoeffs::k_o());
        let half_sinh1 = 0.5 * 1.0_f64.sinh();
        let expected = GeneratorCoeffs::new(c(1.0_f64.cosh(), 0.0), c(-half_sinh1, 0.0), c(-half_sinh1, 0.0));
        assert!(out.max_abs_diff(&expected) < 1e-15);
        assert!((out.c_o.re - 1.54308).abs() < 1e-5 && (out.c_plus.re + 0.58760).abs() < 1e-5);

        let theta = 0.7;
        let out = adjoint_action(&param(theta, 0.0, 0.0), &GeneratorCoeffs::k_plus());
        let expected = GeneratorCoeffs::new(c(0.0, 0.0), Complex64::from_polar(1.0, 2.0 * theta), c(0.0, 0.0));
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    fn any_param(max_r: f64) -> impl Strategy<Value = SqueezeParam> {
        (-PI..PI, 0.0..max_r, -PI..PI).prop_map(|(t, r, p)| SqueezeParam::new(t, r, p).unwrap())
    }

    fn any_coeffs() -> impl Strategy<Value = GeneratorCoeffs> {
        proptest::array::uniform6(-2.0..2.0f64)
            .prop_map(|v| GeneratorCoeffs::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5])))
    }

    proptest! {
        #[test]
        fn disk_round_trip(p in any_param(5.0)) {
            let back = from_disk(&to_disk(&p)).unwrap();
            prop_assert!((back.r() - p.r()).abs() < 1e-9 * (1.0 + p.r()));
            prop_assert!(p.r() < 1e-12 || angle_distance(back.phi(), p.phi()) < 1e-12);
        }

        #[test]
        fn eta_round_trip(m in 0.0..0.999f64, arg in -PI..PI) {
            let d = DiskPoint::new(Complex64::from_polar(m, arg)).unwrap();
            let again = to_disk(&from_disk(&d).unwrap());
            prop_assert!((again.eta() - d.eta()).norm() < 1e-12);
        }

        #[test]
        fn inverse_is_two_sided(s in any_param(3.0)) {
            let inv = inverse(&s);
            prop_assert!(compose_full(&inv, &s).unwrap().distance(&SqueezeParam::identity()) < 1e-12);
            prop_assert!(compose_full(&s, &inv).unwrap().distance(&SqueezeParam::identity()) < 1e-12);
        }

        #[test]
        fn associativity(a in any_param(1.5), b in any_param(1.5), cc in any_param(1.5)) {
            let left = compose_full(&a, &compose_full(&b, &cc).unwrap()).unwrap();
            let right = compose_full(&compose_full(&a, &b).unwrap(), &cc).unwrap();
            prop_assert!(left.distance(&right) < 1e-10);
        }

        #[test]
        fn fragmentation_gamma_invariant(s in any_param(5.0)) {
            let f = fragment(&s);
            let direct = (1.0 - f.eta.eta().norm_sqr()).ln();
            prop_assert!((f.gamma_frag - direct).abs() < 1e-12 * (1.0 + direct.abs()) + 1e-12);
            prop_assert!(f.gamma_frag <= 0.0);
        }

        #[test]
        fn adjoint_preserves_killing_form(s in any_param(1.5), g in any_coeffs()) {
            let before = g.killing_form();
            let after = adjoint_action(&s, &g).killing_form();
            prop_assert!((before - after).norm() < 1e-10 * (1.0 + before.norm()));
        }

        #[test]
        fn adjoint_preserves_hermiticity(s in any_param(1.5), x in -2.0..2.0f64, re in -2.0..2.0f64, im in -2.0..2.0f64) {
            let z = c(re, im);
            let g = GeneratorCoeffs::new(c(x, 0.0), z, z.conj());
            prop_assert!(adjoint_action(&s, &g).hermiticity_defect() < 1e-12);
        }

        #[test]
        fn adjoint_is_a_homomorphism(a in any_param(1.0), b in any_param(1.0), g in any_coeffs()) {
            let composed = adjoint_action(&compose_full(&a, &b).unwrap(), &g);
            let nested = adjoint_action(&a, &adjoint_action(&b, &g));
            prop_assert!(composed.max_abs_diff(&nested) < 1e-9);
        }
    }
}
