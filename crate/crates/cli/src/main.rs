mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quartlab::experiments::{emit_report, Format};
use quartlab::Error;

#[derive(Parser)]
#[command(name = "quartlab", version, about = "Exact arithmetic toolkit for quartic norm forms and sieve harnesses")]
struct Cli {
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; output does not depend on this
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "json", value_parser = parse::format)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Galois class, ordered roots, derived constants and the norm-form split
    Analyze {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::poly)]
        poly: [i64; 4],
        #[arg(long = "deltaP")]
        delta_p: Option<num_bigint::BigInt>,
    },
    /// Cofactor, norm-form and product identities
    Verify {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::poly)]
        poly: [i64; 4],
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Local lemmas against brute-force enumeration
    Local {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::poly)]
        poly: [i64; 4],
        #[arg(long, default_value_t = 200)]
        pmax: u64,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 60)]
        points: usize,
    },
    /// Direction and pair lattices in a quartic field
    Lattice(LatticeArgs),
    /// Sieve constant files
    #[command(subcommand)]
    Config(ConfigCommand),
    /// Largest prime factor scan of P(n) for x < n <= 2x
    Scan {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::poly)]
        poly: [i64; 4],
        #[arg(long, default_value_t = 10_000)]
        x: u64,
        /// Exponents c, comma separated
        #[arg(long, default_value = "-1/100,0,1/100,1/50,1/20,1/10,1/5,1/2", allow_hyphen_values = true, value_parser = parse::rationals)]
        c: ::std::vec::Vec<quartlab::exactalg::Rational>,
    },
    /// Window-prime counts on a box
    Distrinorm(DistriNormArgs),
    /// Divisibility counts by a product of degree-one primes on a box
    Gamma(GammaArgs),
    /// Full battery on the six reference quartics
    Selftest,
}

#[derive(Args)]
pub struct LatticeArgs {
    /// Minimal polynomial in x; defaults to the theta polynomial of --poly
    #[arg(long, required_unless_present = "poly")]
    minpoly: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::poly, conflicts_with = "minpoly")]
    poly: Option<[i64; 4]>,
    /// Four elements separated by ';', e.g. "1; x; x^2; x^3"
    #[arg(long)]
    basis: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::vec4)]
    d: Option<[i64; 4]>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::vec4, requires = "b2")]
    b1: Option<[i64; 4]>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::vec4, requires = "b1")]
    b2: Option<[i64; 4]>,
}

#[derive(Subcommand)]
pub enum ConfigCommand {
    /// Verify every constraint family and the hypothesis checks
    Check {
        path: PathBuf,
        /// Also run the single-parameter mutation table
        #[arg(long)]
        mutations: bool,
    },
    /// Print the shipped constants as TOML
    Explicit,
}

#[derive(Args)]
pub struct DistriNormArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse::poly)]
    poly: [i64; 4],
    #[arg(long, default_value = "20,20,20", allow_hyphen_values = true, value_parser = parse::vec3)]
    corner: [i64; 3],
    #[arg(long, default_value = "40,40,40", value_parser = parse::side3)]
    side: [u64; 3],
    #[arg(long, default_value_t = 1000)]
    x: u64,
    /// Exponent windows lo:hi, comma separated
    #[arg(long, default_value = "1/5:3/10,1/3:2/5", allow_hyphen_values = true, value_parser = parse::windows)]
    windows: ::std::vec::Vec<(quartlab::exactalg::Rational, quartlab::exactalg::Rational)>,
    #[arg(long, default_value = "1/5:3/5", allow_hyphen_values = true, value_parser = parse::window)]
    p_window: (quartlab::exactalg::Rational, quartlab::exactalg::Rational),
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true, value_parser = parse::vec3)]
    u0: [i64; 3],
}

#[derive(Args)]
pub struct GammaArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse::poly)]
    poly: [i64; 4],
    #[arg(long, default_value = "1,1,1", allow_hyphen_values = true, value_parser = parse::vec3)]
    corner: [i64; 3],
    #[arg(long, default_value = "50,50,50", value_parser = parse::side3)]
    side: [u64; 3],
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true, value_parser = parse::vec3)]
    u0: [i64; 3],
    #[arg(long, default_value_t = 1)]
    q: u64,
    /// Degree-one primes p:c, comma separated; empty for the unit ideal
    #[arg(long, default_value = "", value_parser = parse::primes)]
    d: ::std::vec::Vec<(u64, i64)>,
}

fn failure_code(e: &Error) -> u8 {
    match e {
        Error::InternalIdentityViolation { .. }
        | Error::IdentityViolation(_)
        | Error::NormFormViolation(_)
        | Error::TheoryViolation(_)
        | Error::OrderingInconsistent(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match commands::run(&cli.command, cli.seed) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(failure_code(&e));
        }
    };
    let written = match &out {
        commands::Output::Report(r) => emit_report(r, cli.format, cli.out.as_deref()),
        commands::Output::Text(t) => match &cli.out {
            Some(p) => std::fs::write(p, t).map_err(Error::from),
            None => {
                print!("{t}");
                Ok(())
            }
        },
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match out {
        commands::Output::Report(r) if !r.all_pass() => {
            for c in r.identities.iter().filter(|c| !c.pass) {
                eprintln!("failed: {}", c.name);
            }
            ExitCode::from(1)
        }
        _ => ExitCode::SUCCESS,
    }
}
