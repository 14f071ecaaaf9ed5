use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use squeeze::scenario::{self, fmt_float};
use squeeze::su11::{self, SqueezeParam};
use squeeze::verify::{self, VerifyConfig};

/// SU(1,1) squeeze algebra and time-dependent canonical transformations.
#[derive(Parser)]
#[command(name = "squeeze", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose S(theta2, rho2)·S(theta1, rho1) into a single squeeze.
    #[command(allow_negative_numbers = true)]
    Compose {
        #[arg(long)]
        theta1: f64,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        phi1: f64,
        #[arg(long)]
        theta2: f64,
        #[arg(long)]
        r2: f64,
        #[arg(long)]
        phi2: f64,
    },
    /// Normal-ordered factorization of S(theta, r e^{i phi}).
    #[command(allow_negative_numbers = true)]
    Fragment {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        phi: f64,
    },
    /// Scan a scenario file and write CSV.
    Tdct {
        #[arg(long)]
        config: PathBuf,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the self-check suites.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = verify::DIRAC_REGRESSION_DIM)]
        fock_dim: usize,
        /// Perturb the closed-form fused squeeze (negative control).
        #[arg(long, hide = true)]
        corrupt_fusion: bool,
    },
}

fn print_fields(fields: &[(&str, f64)]) {
    for (name, value) in fields {
        println!("{name} = {}", fmt_float(*value));
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Compose { theta1, r1, phi1, theta2, r2, phi2 } => {
            let s1 = SqueezeParam::new(theta1, r1, phi1).map_err(|e| e.to_string())?;
            let s2 = SqueezeParam::new(theta2, r2, phi2).map_err(|e| e.to_string())?;
            let out = su11::compose_full(&s2, &s1).map_err(|e| e.to_string())?;
            print_fields(&[("theta_o", out.theta()), ("r_o", out.r()), ("phi_o", out.phi())]);
        }
        Command::Fragment { theta, r, phi } => {
            let s = SqueezeParam::new(theta, r, phi).map_err(|e| e.to_string())?;
            let f = su11::fragment(&s);
            print_fields(&[("eta_re", f.eta.eta().re), ("eta_im", f.eta.eta().im), ("gamma_frag", f.gamma_frag)]);
        }
        Command::Tdct { config, out } => {
            let sc = scenario::load_scenario(&config).map_err(|e| e.to_string())?;
            match out {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
                    scenario::run_scan(&sc, &mut BufWriter::new(file)).map_err(|e| e.to_string())?;
                }
                None => {
                    scenario::run_scan(&sc, &mut io::stdout().lock()).map_err(|e| e.to_string())?;
                }
            }
        }
        Command::Verify { seed, fock_dim, corrupt_fusion } => {
            let report = verify::run_verify(&VerifyConfig { seed, fock_dim, corrupt_fusion })
                .map_err(|e| e.to_string())?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{report}").map_err(|e| e.to_string())?;
            return Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
