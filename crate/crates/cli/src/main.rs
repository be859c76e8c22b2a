use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sdbar::homology::Coeffs;
use sdbar::{Error, Signature};

mod commands;
mod config;
mod selfcheck;

use config::RunConfig;

#[derive(Parser)]
#[command(name = "sdbar", version, about = "Cell complexes of string diagrams: enumeration, homology, slide quotients, gluing")]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoeffArg {
    Z,
    Q,
    Fp,
}

#[derive(Args, Clone, Debug)]
struct SigArgs {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
}

#[derive(Args, Clone, Debug)]
struct CommonArgs {
    /// Directory for cached complexes.
    #[arg(long, env = sdbar::moduli::CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Write the JSON result here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
struct CoeffArgs {
    #[arg(long, value_enum, default_value = "z")]
    coeffs: CoeffArg,
    /// The prime for `--coeffs fp`.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the complex and print its statistics.
    Enumerate {
        #[command(flatten)]
        sig: SigArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Write the barycentric subdivision instead.
        #[arg(long)]
        subdivide: bool,
    },
    /// Homology of the complex, or of its slide quotient.
    Homology {
        #[command(flatten)]
        sig: SigArgs,
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Cross-check rational Betti numbers on the subdivided complex.
        #[arg(long)]
        subdivide: bool,
        /// Use the slide quotient.
        #[arg(long)]
        quotient: bool,
        /// Allow a chord to slide over itself.
        #[arg(long)]
        slide_self: bool,
    },
    /// Slide classes and the homology of the quotient complex.
    Quotient {
        #[command(flatten)]
        sig: SigArgs,
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        slide_self: bool,
    },
    /// Glue two metric diagrams along a spec of (output, input) pairs.
    Glue {
        first: PathBuf,
        second: PathBuf,
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Slide endpoints that land inside a chord to its second endpoint.
        #[arg(long)]
        slide_second: bool,
        /// Skip computing the slide class of the result.
        #[arg(long)]
        no_classes: bool,
        #[arg(long)]
        slide_self: bool,
    },
    /// Run the invariant suite and print a JSON report.
    Selfcheck {
        #[arg(long, requires_all = ["k", "l"])]
        g: Option<usize>,
        #[arg(long, requires_all = ["g", "l"])]
        k: Option<usize>,
        #[arg(long, requires_all = ["g", "k"])]
        l: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
        /// Also run the subdivision oracle.
        #[arg(long)]
        subdivide: bool,
        #[arg(long)]
        slide_self: bool,
        /// Well-definedness samples per gluing check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Treat known failures as failures.
        #[arg(long)]
        strict: bool,
        #[arg(long, hide = true)]
        inject_sign_fault: bool,
    },
}

fn coeffs(a: &CoeffArgs) -> Result<Coeffs, Error> {
    match (a.coeffs, a.p) {
        (CoeffArg::Z, None) => Ok(Coeffs::Z),
        (CoeffArg::Q, None) => Ok(Coeffs::Q),
        (CoeffArg::Fp, Some(p)) => Ok(Coeffs::Fp { p }),
        (CoeffArg::Fp, None) => Err(Error::Domain("--coeffs fp needs --p".into())),
        (_, Some(_)) => Err(Error::Domain("--p only applies to --coeffs fp".into())),
    }
}

fn sig(s: &SigArgs) -> Signature {
    Signature::new(s.g, s.k, s.l)
}

/// Exit status of a library error.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Domain(_)) => 2,
        Some(Error::SignConsistency { .. }) => 3,
        Some(Error::QuotientConsistency(_)) => 4,
        Some(Error::GluingSpec(_)) => 5,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Enumerate { sig: s, common, subdivide } => {
            let cfg = RunConfig::new(sig(&s), Coeffs::Z, common.cache_dir, common.out).subdivide(subdivide);
            commands::enumerate(&cfg)
        }
        Command::Homology { sig: s, coeffs: c, common, subdivide, quotient, slide_self } => {
            let cfg = RunConfig::new(sig(&s), coeffs(&c)?, common.cache_dir, common.out)
                .subdivide(subdivide)
                .quotient(quotient)
                .slide_self(slide_self);
            commands::homology(&cfg)
        }
        Command::Quotient { sig: s, coeffs: c, common, slide_self } => {
            let cfg = RunConfig::new(sig(&s), coeffs(&c)?, common.cache_dir, common.out)
                .quotient(true)
                .slide_self(slide_self);
            commands::homology(&cfg)
        }
        Command::Glue { first, second, spec, common, slide_second, no_classes, slide_self } => {
            commands::glue(&commands::GlueArgs {
                first,
                second,
                spec,
                cache_dir: common.cache_dir,
                out: common.out,
                slide_second,
                classes: !no_classes,
                slide_self,
            })
        }
        Command::Selfcheck { g, k, l, common, subdivide, slide_self, samples, seed, strict, inject_sign_fault } => {
            let only = match (g, k, l) {
                (Some(g), Some(k), Some(l)) => Some(Signature::new(g, k, l)),
                _ => None,
            };
            selfcheck::run(&selfcheck::Options {
                only,
                cache_dir: common.cache_dir,
                out: common.out,
                subdivide,
                slide_self,
                samples,
                seed,
                strict,
                inject_sign_fault,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
