//! Self-check suites run by `squeeze verify`.
//!
//! Each suite draws its random inputs from a ChaCha8 stream seeded by the
//! caller, so a given seed always exercises the same points.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::oracle::{self, DenseMatrix, LastFactor};
use crate::scenario::{self, Coefficients, Scan, Scenario};
use crate::su11::{self, GeneratorCoeffs, SqueezeParam};
use crate::tdct::{self, CoefficientSample, CoefficientSource, SystemConstants, TdctError};
use crate::timefunc::TimeFunction;

/// Smallest Fock dimension accepted by [`run_verify`].
pub const MIN_FOCK_DIM: usize = 40;

/// Recorded `dirac_mismatch` distance for `β = (1, 0, 4)`, natural units,
/// 60 Fock states.
pub const DIRAC_REGRESSION_DIM: usize = 60;
pub const DIRAC_REGRESSION_VALUE: f64 = 1.6643732172632524;
pub const DIRAC_REGRESSION_TOLERANCE: f64 = 1e-6;

/// Expressions whose symbolic derivatives are checked against finite differences.
pub const DERIVATIVE_CORPUS: [&str; 20] = [
    "3",
    "t",
    "2*t - 5",
    "t^2",
    "t^5 - 3*t^3 + t",
    "1/(1 + t^2)",
    "sin(t)",
    "cos(3*t)",
    "exp(-t^2)",
    "sinh(t) + cosh(t)",
    "tanh(2*t)",
    "sqrt(2 + t)",
    "ln(3 + t)",
    "sin(t)*cos(t)",
    "exp(sin(t))",
    "1 + 0.1*sin(t)",
    "0.2*cos(t)",
    "t*exp(-t)/(2 + cos(t))",
    "-(t - 1)^3",
    "sqrt(1 + sin(t)^2)*ln(2 + t^2)",
];

const SCAN_SCENARIO: &str = "\
[system]
m = 1.0
omega0 = 1.0
hbar = 1.0

[coefficients]
beta1 = \"1\"
beta2 = \"0.2*cos(t)\"
beta3 = \"1 + 0.1*sin(t)\"

[scan]
t_start = 0.0
t_end = 6.283185307179586
steps = 50
";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub fock_dim: usize,
    /// Perturbs the closed-form fused squeeze so the fusion suite must fail.
    pub corrupt_fusion: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 1, fock_dim: DIRAC_REGRESSION_DIM, corrupt_fusion: false }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("fock dimension {0} is below the minimum of {MIN_FOCK_DIM}")]
    FockDimTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// The error must stay below the tolerance.
    Below,
    /// The value must exceed the threshold.
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
}

impl Check {
    fn below(label: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { label: label.into(), value, threshold, bound: Bound::Below }
    }

    fn above(label: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { label: label.into(), value, threshold, bound: Bound::Above }
    }

    fn failed(label: impl Into<String>, message: impl fmt::Display) -> Self {
        Self::below(format!("{} ({message})", label.into()), f64::INFINITY, 0.0)
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::Below => self.value < self.threshold,
            Bound::Above => self.value > self.threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub index: usize,
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub fock_dim: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify: seed {} fock_dim {}", self.seed, self.fock_dim)?;
        for suite in &self.suites {
            let status = if suite.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "[{:>2}] {:<28} {status}", suite.index, suite.name)?;
            for c in &suite.checks {
                let rel = match c.bound {
                    Bound::Below => "<",
                    Bound::Above => ">",
                };
                let mark = if c.passed() { "ok" } else { "FAILED" };
                writeln!(f, "     {:<52} {:>12.3e} {rel} {:<9.1e} {mark}", c.label, c.value, c.threshold)?;
            }
        }
        let passed = self.suites.iter().filter(|s| s.passed()).count();
        write!(f, "{passed}/{} suites passed", self.suites.len())
    }
}

/// Runs all ten suites in a fixed order.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    if cfg.fock_dim < MIN_FOCK_DIM {
        return Err(VerifyError::FockDimTooSmall(cfg.fock_dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let suites: [(&'static str, Vec<Check>); 10] = [
        ("group law", group_law(&mut rng)),
        ("pure composition", pure_composition(&mut rng)),
        ("fragmentation", fragmentation(&mut rng, cfg.fock_dim)),
        ("adjoint action", adjoint(&mut rng)),
        ("squeeze fusion", fusion(&mut rng, cfg.corrupt_fusion)),
        ("transformed hamiltonian", end_to_end(cfg.fock_dim)),
        ("phase-space operators", phase_space_operators(cfg.fock_dim)),
        ("generating function", generating_function(&mut rng)),
        ("dirac mismatch", dirac(cfg.fock_dim)),
        ("time functions", time_functions()),
    ];
    let suites = suites
        .into_iter()
        .enumerate()
        .map(|(i, (name, checks))| SuiteResult { index: i + 1, name, checks })
        .collect();
    Ok(VerifyReport { seed: cfg.seed, fock_dim: cfg.fock_dim, suites })
}

fn random_param(rng: &mut impl Rng, r_max: f64) -> SqueezeParam {
    SqueezeParam::new(rng.gen_range(-PI..PI), rng.gen_range(0.0..r_max), rng.gen_range(-PI..PI))
        .expect("finite sampled parameters")
}

fn random_coeffs(rng: &mut impl Rng) -> GeneratorCoeffs {
    let mut c = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    GeneratorCoeffs::new(c(), c(), c())
}

/// Folds fallible per-sample errors into a single check.
fn max_check(label: &str, tol: f64, errors: impl IntoIterator<Item = Result<f64, String>>) -> Check {
    let mut worst = 0.0f64;
    for e in errors {
        match e {
            Ok(v) if v.is_nan() => return Check::failed(label, "NaN"),
            Ok(v) => worst = worst.max(v),
            Err(msg) => return Check::failed(label, msg),
        }
    }
    Check::below(label, worst, tol)
}

fn group_law(rng: &mut impl Rng) -> Vec<Check> {
    let gens = oracle::defining_generators();
    let errors: Vec<_> = (0..1000)
        .map(|_| {
            let (s2, s1) = (random_param(rng, 1.5), random_param(rng, 1.5));
            let composed = su11::compose_full(&s2, &s1).map_err(|e| e.to_string())?;
            let lhs = oracle::realize(&composed, &gens).map_err(|e| e.to_string())?;
            let m2 = oracle::realize(&s2, &gens).map_err(|e| e.to_string())?;
            let m1 = oracle::realize(&s1, &gens).map_err(|e| e.to_string())?;
            Ok(lhs.max_abs_diff(&(&m2 * &m1)))
        })
        .collect();
    vec![max_check("compose_full vs 2x2 product (1000 pairs)", 1e-10, errors)]
}

fn pure_composition(rng: &mut impl Rng) -> Vec<Check> {
    let gens = oracle::defining_generators();
    let errors: Vec<_> = (0..1000)
        .map(|_| {
            let rho2 = random_param(rng, 1.5).rho();
            let rho1 = random_param(rng, 1.5).rho();
            let composed = su11::compose_pure(rho2, rho1).map_err(|e| e.to_string())?;
            let lhs = oracle::realize(&composed, &gens).map_err(|e| e.to_string())?;
            let m2 = oracle::expm(&gens.squeeze_exponent(rho2)).map_err(|e| e.to_string())?;
            let m1 = oracle::expm(&gens.squeeze_exponent(rho1)).map_err(|e| e.to_string())?;
            Ok(lhs.max_abs_diff(&(&m2 * &m1)))
        })
        .collect();
    let collinear: Vec<_> = (0..200)
        .map(|_| {
            let (r1, r2, phi) = (rng.gen_range(0.0..1.5), rng.gen_range(0.0..1.5), rng.gen_range(-PI..PI));
            let composed = su11::compose_pure(Complex64::from_polar(r2, phi), Complex64::from_polar(r1, phi))
                .map_err(|e| e.to_string())?;
            Ok((composed.r() - (r1 + r2)).abs() + composed.theta().abs())
        })
        .collect();
    vec![
        max_check("compose_pure vs 2x2 product (1000 pairs)", 1e-10, errors),
        max_check("equal phases: r_o = r1 + r2, theta_o = 0", 1e-12, collinear),
    ]
}

fn fragmentation(rng: &mut impl Rng, fock_dim: usize) -> Vec<Check> {
    let gens2 = oracle::defining_generators();
    let defining: Vec<_> = (0..1000)
        .map(|_| {
            let s = random_param(rng, 1.5);
            let f = su11::fragment(&s);
            let a = oracle::realize_fragmented(&f, &gens2, LastFactor::Conjugated).map_err(|e| e.to_string())?;
            let b = oracle::realize(&s, &gens2).map_err(|e| e.to_string())?;
            Ok(a.max_abs_diff(&b))
        })
        .collect();

    let basis = match oracle::FockBasis::natural(fock_dim) {
        Ok(b) => b,
        Err(e) => return vec![Check::failed("fock basis", e)],
    };
    let gens = oracle::fock_generators(&basis).generators;
    let block = fock_dim / 3;
    let mut literal_worst = 0.0f64;
    let fock: Vec<_> = (0..12)
        .map(|_| {
            let s = random_param(rng, 0.5);
            let f = su11::fragment(&s);
            let a = oracle::realize_fragmented(&f, &gens, LastFactor::Conjugated).map_err(|e| e.to_string())?;
            let b = oracle::realize(&s, &gens).map_err(|e| e.to_string())?;
            let lit = oracle::realize_fragmented(&f, &gens, LastFactor::Literal).map_err(|e| e.to_string())?;
            literal_worst = literal_worst.max(lit.leading_block(block).max_abs_diff(&b.leading_block(block)));
            Ok(a.leading_block(block).max_abs_diff(&b.leading_block(block)))
        })
        .collect();
    let fock_check = max_check(&format!("normal-ordered product, fock {fock_dim} block {block}"), 1e-6, fock);
    vec![
        max_check("normal-ordered product vs S in 2x2 (1000)", 1e-10, defining),
        fock_check,
        Check::above("literal exp(-eta K-) deviation (must be large)", literal_worst, 1e-3),
    ]
}

fn adjoint(rng: &mut impl Rng) -> Vec<Check> {
    let mut conj = Vec::new();
    let mut killing = Vec::new();
    let mut herm = Vec::new();
    for _ in 0..1000 {
        let s = random_param(rng, 1.5);
        let g = random_coeffs(rng);
        let image = su11::adjoint_action(&s, &g);
        conj.push(oracle::conjugate_generator_2x2(&s, &g).map(|c| c.max_abs_diff(&image)).map_err(|e| e.to_string()));
        let k0 = g.killing_form();
        killing.push(Ok((image.killing_form() - k0).norm() / (1.0 + k0.norm())));
        let x = rng.gen_range(-2.0..2.0);
        let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let hermitian = GeneratorCoeffs::new(Complex64::new(x, 0.0), c, c.conj());
        herm.push(Ok(su11::adjoint_action(&s, &hermitian).hermiticity_defect()));
    }
    vec![
        max_check("adjoint_action vs 2x2 conjugation", 1e-10, conj),
        max_check("Killing form invariance (relative)", 1e-10, killing),
        max_check("hermiticity preserved", 1e-12, herm),
    ]
}

fn fusion(rng: &mut impl Rng, corrupt: bool) -> Vec<Check> {
    let k = SystemConstants::natural();
    let gens = oracle::defining_generators();
    let mut closed = Vec::new();
    let mut two_step = Vec::new();
    for _ in 0..1000 {
        let beta3 = rng.gen_range(0.2..5.0);
        let gamma: f64 = rng.gen_range(-2.0..2.0);
        let result = (|| -> Result<(f64, f64), TdctError> {
            // with ω₀ = 1 and constant β₃, γ = β₂/2
            let s = CoefficientSample::constant(1.0, 2.0 * gamma, beta3)?;
            let mut cf = tdct::w_combined_closed_form(&s, &k)?;
            if corrupt {
                cf = SqueezeParam::new(cf.theta() + 1e-6, cf.r(), cf.phi())?;
            }
            let generic = tdct::w_generic(&s, &k)?;
            let one = oracle::realize(&cf, &gens)?;
            let two = &oracle::realize(&tdct::w2_params(&s, &k)?, &gens)? * &oracle::realize(&tdct::w1_params(&s)?, &gens)?;
            Ok((cf.distance(&generic), one.max_abs_diff(&two)))
        })();
        match result {
            Ok((a, b)) => {
                closed.push(Ok(a));
                two_step.push(Ok(b));
            }
            Err(e) => closed.push(Err(e.to_string())),
        }
    }
    vec![
        max_check("closed form vs compose_full(W2, W1)", tdct::FUSION_TOLERANCE, closed),
        max_check("S(W) vs S(W2)S(W1) in 2x2", 1e-10, two_step),
    ]
}

fn reference_coefficients() -> Coefficients {
    Coefficients::parse("1", "0.2*cos(t)", "1 + 0.1*sin(t)").expect("valid reference expressions")
}

fn end_to_end(fock_dim: usize) -> Vec<Check> {
    let k = SystemConstants::natural();
    let coeffs = reference_coefficients();
    let block = fock_dim.min(60) / 3;
    let errors = [0.3, 1.0, 2.5].map(|t| -> Result<f64, String> {
        let basis = k.fock_basis(fock_dim).map_err(|e| e.to_string())?;
        let (x, p) = oracle::position_momentum(&basis);
        let transformed = tdct::transformed_hamiltonian(&coeffs, t, 1e-4, &k, &basis).map_err(|e| e.to_string())?;
        let s = coeffs.sample(t).map_err(|e| e.to_string())?;
        let ho = tdct::ho_of(&s, &k).to_operator(&x, &p, &k).leading_block(block);
        Ok((&transformed.leading_block(block) - &ho).operator_norm() / ho.operator_norm())
    });
    vec![max_check(&format!("W H W^+ - i hbar W dW^+/dt vs H_o, block {block}"), 1e-3, errors)]
}

fn phase_space_operators(fock_dim: usize) -> Vec<Check> {
    let k = SystemConstants::natural();
    let block = fock_dim / 3;
    let result = (|| -> Result<(f64, f64), TdctError> {
        let basis = k.fock_basis(fock_dim)?;
        let s = reference_coefficients().sample(1.0)?;
        let (x, p) = oracle::position_momentum(&basis);
        let w = tdct::w_operator(&s, &k, &basis)?;
        let root = s.beta3().sqrt();
        let shear = k.omega0() * s.beta2() - s.beta3_dot() / (2.0 * s.beta3());
        let new_x = x.scale_real(1.0 / root);
        let new_p = (&p + &x.scale_real(k.m() / s.beta3() * shear)).scale_real(root);
        let heis = |op: &DenseMatrix| (&(&w.adjoint() * op) * &w).leading_block(block);
        Ok((heis(&x).max_abs_diff(&new_x.leading_block(block)), heis(&p).max_abs_diff(&new_p.leading_block(block))))
    })();
    match result {
        Ok((ex, ep)) => vec![
            Check::below(format!("W^+ x W = X, block {block}"), ex, 1e-6),
            Check::below(format!("W^+ p W = P, block {block}"), ep, 1e-6),
        ],
        Err(e) => vec![Check::failed("phase-space operators", e)],
    }
}

fn generating_function(rng: &mut impl Rng) -> Vec<Check> {
    let k = SystemConstants::new(1.3, 0.7, 1.0).expect("valid constants");
    let h = 1e-5;
    let mut grad = Vec::new();
    let mut bracket = Vec::new();
    let mut jac = Vec::new();
    for _ in 0..100 {
        let s = CoefficientSample::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.2..5.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
        .expect("finite sample with positive beta3");
        let (x, np) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let p = tdct::old_momentum(x, np, &s, &k);
        let new_x = tdct::phase_space_map(&tdct::PhasePoint::new(x, p), &s, &k).x;
        let dfdx = (tdct::f2_eval(x + h, np, &s, &k) - tdct::f2_eval(x - h, np, &s, &k)) / (2.0 * h);
        let dfdp = (tdct::f2_eval(x, np + h, &s, &k) - tdct::f2_eval(x, np - h, &s, &k)) / (2.0 * h);
        grad.push(Ok(((dfdx - p).abs() / p.abs().max(1.0)).max((dfdp - new_x).abs() / new_x.abs().max(1.0))));

        let map = |x: f64, p: f64| tdct::phase_space_map(&tdct::PhasePoint::new(x, p), &s, &k);
        let (xp, xm, pp, pm) = (map(x + h, p), map(x - h, p), map(x, p + h), map(x, p - h));
        let (dxx, dxp) = ((xp.x - xm.x) / (2.0 * h), (pp.x - pm.x) / (2.0 * h));
        let (dpx, dpp) = ((xp.p - xm.p) / (2.0 * h), (pp.p - pm.p) / (2.0 * h));
        bracket.push(Ok((dxx * dpp - dxp * dpx - 1.0).abs()));
        jac.push(Ok((tdct::phase_space_jacobian(&s) - 1.0).abs()));
    }
    vec![
        max_check("dF2/dx = p, dF2/dP = X (relative)", 1e-8, grad),
        max_check("Poisson bracket {X, P} = 1", 1e-8, bracket),
        max_check("Jacobian determinant = 1", 1e-12, jac),
    ]
}

fn dirac(fock_dim: usize) -> Vec<Check> {
    let k = SystemConstants::natural();
    let result = (|| -> Result<tdct::DiracMismatch, TdctError> {
        let s = CoefficientSample::constant(1.0, 0.0, 4.0)?;
        tdct::dirac_mismatch(&s, &k, &k.fock_basis(fock_dim)?)
    })();
    let report = match result {
        Ok(r) => r,
        Err(e) => return vec![Check::failed("dirac mismatch", e)],
    };
    let mut checks = vec![
        Check::above("distance (Weyl-ordered F2)", report.distance, 0.0),
        Check::below("noise / distance", report.noise / report.distance, 0.1),
    ];
    if fock_dim == DIRAC_REGRESSION_DIM {
        checks.push(Check::below(
            "distance vs recorded regression value",
            (report.distance - DIRAC_REGRESSION_VALUE).abs(),
            DIRAC_REGRESSION_TOLERANCE,
        ));
    }
    checks
}

fn time_functions() -> Vec<Check> {
    let h = 1e-5;
    let errors = DERIVATIVE_CORPUS.iter().flat_map(|src| {
        let parsed = TimeFunction::parse(src).map_err(|e| format!("{src}: {e}"));
        [-1.2, -0.4, 0.0, 0.5, 1.3].map(move |t| {
            let f = parsed.clone()?;
            let eval = |g: &TimeFunction, t: f64| g.eval(t).map_err(|e| format!("{src}: {e}"));
            let symbolic = eval(&f.derivative(), t)?;
            let numeric = (eval(&f, t + h)? - eval(&f, t - h)?) / (2.0 * h);
            Ok((symbolic - numeric).abs() / symbolic.abs().max(1.0))
        })
    });
    let corpus = max_check("symbolic vs central difference, 20 expressions", 1e-6, errors.collect::<Vec<_>>());

    let deterministic = (|| -> Result<bool, String> {
        let sc: Scenario = scenario::parse_scenario(SCAN_SCENARIO).map_err(|e| e.to_string())?;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        scenario::run_scan(&sc, &mut a).map_err(|e| e.to_string())?;
        scenario::run_scan(&sc, &mut b).map_err(|e| e.to_string())?;
        Ok(a == b && sc.scan == Scan::new(0.0, 2.0 * PI, 50).map_err(|e| e.to_string())?)
    })();
    let determinism = match deterministic {
        Ok(same) => Check::below("scan CSV byte-identical across runs", if same { 0.0 } else { 1.0 }, 0.5),
        Err(e) => Check::failed("scan CSV", e),
    };
    vec![corpus, determinism]
}
