//! SU(1,1) squeezing operators and time-dependent canonical transformations
//! of quadratic Hamiltonians.
//!
//! - [`su11`]: closed-form squeezing-operator calculus (composition,
//!   fragmentation, inversion, adjoint action).
//! - [`oracle`]: 2×2 and truncated Fock-space matrix realizations used as
//!   ground truth.
//! - [`tdct`]: the two-step squeeze construction that maps a quadratic
//!   Hamiltonian onto a harmonic oscillator with frequency `Ω(t)`, plus the
//!   classical phase-space picture.
//! - [`timefunc`]: a tiny expression language for coefficient functions of `t`
//!   with exact symbolic derivatives.
//! - [`scenario`] and [`verify`]: scenario files, CSV scans and the
//!   self-verification suites behind the command-line tool.

pub mod oracle;
pub mod scenario;
pub mod su11;
pub mod tdct;
pub mod timefunc;
pub mod verify;
