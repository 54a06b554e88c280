use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kahler_phase::cli::{self, Command, RunConfig};
use kahler_phase::{Error, LevelSpec};

/// Dynamical and geometric phases of coherent-state motion.
///
/// Angles are reported wrapped into (-pi, pi] next to their raw values.
/// JSON goes to stdout, diagnostics to stderr. Exit codes: 0 ok, 2 input or
/// domain error, 3 no cycle, 4 cross-check failure.
#[derive(Parser)]
#[command(name = "kphase", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Reproducing kernel K(Z, W̄).
    Kernel(Common),
    /// Phase of the geodesic triangle (0, z, w).
    Triangle(Common),
    /// Classical orbit, cycle detection and phase decomposition.
    Evolve(Common),
    /// Line integral versus geodesic fan on a closed loop.
    Stokes(Common),
    /// Poincaré polynomial of G/H, or a minimal-orbit row.
    Poincare(Common),
    /// Spin-j Schrödinger evolution against the classical CP1 flow.
    OracleCompare(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON array of configurations, run in parallel; output keeps input order.
    #[arg(long, conflicts_with = "config")]
    sweep: Option<PathBuf>,
    /// Manifold as JSON, e.g. '{"family":"AIII","p":1,"q":1,"compact":true}'.
    #[arg(long)]
    manifold: Option<String>,
    #[arg(long)]
    dt: Option<f64>,
    /// Integration span.
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    cyclicity_tol: Option<f64>,
    /// Level λ (or a JSON weight list for flag manifolds).
    #[arg(long)]
    level: Option<String>,
    /// Point as `re,im` or a nested JSON matrix.
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    z0: Option<String>,
    #[arg(long)]
    period: Option<f64>,
    /// Compare against the spin-j oracle (CP1 only).
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    samples: Option<usize>,
    /// Quotient such as "SU(4)/SU(2)xSU(2)xU(1)".
    #[arg(long)]
    quotient: Option<String>,
    /// Simple group whose minimal coadjoint orbit to report.
    #[arg(long)]
    min_orbit: Option<String>,
}

impl Common {
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), Error> {
        if let Some(m) = &self.manifold {
            cfg.manifold = Some(serde_json::from_str(m).map_err(|e| Error::Parse(format!("--manifold: {e}")))?);
        }
        let i = &mut cfg.integration;
        if let Some(x) = self.dt {
            i.dt = x;
        }
        if let Some(x) = self.t_end {
            i.t = x;
        }
        if let Some(x) = self.stride {
            i.stride = x;
        }
        if let Some(x) = self.cyclicity_tol {
            i.cyclicity_tol = x;
        }
        if let Some(l) = &self.level {
            cfg.level = serde_json::from_str::<LevelSpec>(l).map_err(|e| Error::Parse(format!("--level: {e}")))?;
        }
        for (arg, slot) in [(&self.z, &mut cfg.z), (&self.w, &mut cfg.w), (&self.z0, &mut cfg.z0)] {
            if let Some(text) = arg {
                *slot = Some(cli::parse_point_arg(text)?);
            }
        }
        if self.period.is_some() {
            cfg.period = self.period;
        }
        cfg.oracle |= self.oracle;
        if self.samples.is_some() {
            cfg.samples = self.samples;
        }
        if self.quotient.is_some() {
            cfg.quotient = self.quotient.clone();
        }
        if self.min_orbit.is_some() {
            cfg.min_orbit = self.min_orbit.clone();
        }
        Ok(())
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("kphase: {e}");
    println!("{}", cli::to_line(&cli::error_json(e)));
    ExitCode::from(cli::exit_code(e) as u8)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (cmd, common) = match args.command {
        Sub::Kernel(c) => (Command::Kernel, c),
        Sub::Triangle(c) => (Command::Triangle, c),
        Sub::Evolve(c) => (Command::Evolve, c),
        Sub::Stokes(c) => (Command::Stokes, c),
        Sub::Poincare(c) => (Command::Poincare, c),
        Sub::OracleCompare(c) => (Command::OracleCompare, c),
    };

    if let Some(path) = &common.sweep {
        let configs = read(path).and_then(|text| {
            serde_json::from_str::<Vec<RunConfig>>(&text).map_err(|e| Error::Parse(format!("sweep: {e}")))
        });
        let mut configs = match configs {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        for c in &mut configs {
            if let Err(e) = common.apply(c) {
                return fail(&e);
            }
        }
        let results = cli::sweep(cmd, &configs);
        let mut code = 0;
        for (k, r) in results.iter().enumerate() {
            let rc = match r {
                Ok(out) => out.exit_code,
                Err(e) => {
                    eprintln!("kphase: config {k}: {e}");
                    cli::exit_code(e)
                }
            };
            code = code.max(rc);
            println!("{}", cli::to_line(&cli::sweep_record(k, r)));
        }
        return ExitCode::from(code as u8);
    }

    let mut cfg = match &common.config {
        Some(path) => match read(path).and_then(|t| RunConfig::from_json(&t)) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        },
        None => RunConfig::default(),
    };
    if let Err(e) = common.apply(&mut cfg) {
        return fail(&e);
    }
    match cli::run(cmd, &cfg) {
        Ok(out) => {
            for r in &out.records {
                println!("{}", cli::to_line(r));
            }
            if out.exit_code != 0 {
                eprintln!("kphase: cross-check tolerance exceeded");
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => fail(&e),
    }
}
