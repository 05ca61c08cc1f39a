use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qna_core::nascalar::rational::parse_rational;
use qna_core::nascalar::{LaurentScalar, PadicScalar, Scalar, ScalarError, DEFAULT_PRECISION};
use qna_core::qgl2::{Gl2Error, Gl2NormInput};
use qna_core::qtorus::{NormRequest, TorusError};
use qna_core::scattering::{DiagramJson, Preset, ScatterError};
use qna_core::singmodel::{spectrum_grid, AxisSpec, GridSpec, SingError};

#[derive(Parser, Debug)]
#[command(name = "qna", version, about = "Exact computations in non-archimedean quantum algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complete a wall diagram by all collisions up to the given order.
    Scatter(RunConfig),
    /// Gauss norm or point seminorm of a quantum-torus series.
    Norm(RunConfig),
    /// Sample the spectrum maps on a grid of seminorms.
    Spectrum(RunConfig),
    /// Sup-norm of a quantum GL2 element over admissible leaves.
    Gl2norm(RunConfig),
    /// Print the version.
    Version,
}

#[derive(Args, Debug, Clone, Default)]
struct RunConfig {
    /// Input file, `-` for stdin, or inline JSON.
    #[arg(long = "in", value_name = "PATH|JSON")]
    input: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation order N.
    #[arg(long)]
    order: Option<u64>,
    /// Precision of ℚ((t)) scalars.
    #[arg(long)]
    precision: Option<i64>,
    /// Work over ℚ_p.
    #[arg(long)]
    prime: Option<u64>,
    /// The parameter q: a rational (in ℚ_p with --prime) or a scalar JSON object.
    #[arg(long)]
    q: Option<String>,
    /// Seed for random sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Named diagram: pentagon or squared.
    #[arg(long)]
    preset: Option<String>,
}

/// Input-side failure: malformed JSON, inconsistent fields, mismatched twists.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct InputError(String);

impl RunConfig {
    fn positive(&self) -> Result<()> {
        if self.precision.is_some_and(|p| p <= 0) {
            return Err(InputError("--precision must be positive".into()).into());
        }
        if self.prime.is_some_and(|p| p < 2) {
            return Err(InputError("--prime must be a prime".into()).into());
        }
        Ok(())
    }

    fn precision(&self) -> i64 {
        self.precision.unwrap_or(DEFAULT_PRECISION)
    }

    fn read_input(&self) -> Result<Option<String>> {
        let Some(src) = &self.input else {
            return Ok(None);
        };
        let text = if src == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        } else if src.trim_start().starts_with('{') {
            src.clone()
        } else {
            std::fs::read_to_string(src).with_context(|| format!("reading {src}"))?
        };
        Ok(Some(text))
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<Option<T>> {
        match self.read_input()? {
            None => Ok(None),
            Some(text) => Ok(Some(
                serde_json::from_str(&text).map_err(|e| InputError(format!("malformed input JSON: {e}")))?,
            )),
        }
    }

    fn q(&self) -> Result<Option<Scalar>> {
        let q = match (&self.q, self.prime) {
            (None, None) => return Ok(None),
            (None, Some(p)) => PadicScalar::default_q(p)?.into(),
            (Some(s), _) if s.trim_start().starts_with('{') => serde_json::from_str(s)
                .map_err(|e| InputError(format!("malformed --q: {e}")))?,
            (Some(s), Some(p)) => PadicScalar::new(parse_rational(s)?, p)?.into(),
            (Some(s), None) => LaurentScalar::constant(&parse_rational(s)?, self.precision()).into(),
        };
        Ok(Some(q))
    }

    fn write<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        match &self.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn cmd_scatter(cfg: &RunConfig) -> Result<()> {
    let diagram = match (&cfg.preset, cfg.parse::<DiagramJson>()?) {
        (Some(_), Some(_)) => bail!(InputError("give either --preset or --in".into())),
        (None, None) => bail!(InputError("scatter needs --preset or --in".into())),
        (Some(name), None) => {
            let preset: Preset = name.parse()?;
            DiagramJson::preset(preset, cfg.order.unwrap_or(8), cfg.q()?, cfg.precision)?
        }
        (None, Some(mut d)) => {
            if let Some(q) = cfg.q()? {
                d.q = q;
            }
            d
        }
    };
    cfg.write(&diagram.scatter(cfg.order)?)
}

fn cmd_norm(cfg: &RunConfig) -> Result<()> {
    let Some(req) = cfg.parse::<NormRequest>()? else {
        bail!(InputError("norm needs --in".into()));
    };
    cfg.write(&req.evaluate()?)
}

fn default_grid() -> GridSpec {
    let axis = || AxisSpec {
        min: "-2".into(),
        max: "2".into(),
        steps: 10,
    };
    GridSpec {
        u: axis(),
        v: axis(),
        random: 0,
        shift: None,
    }
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<()> {
    let spec = cfg.parse::<GridSpec>()?.unwrap_or_else(default_grid);
    let seed = cfg.seed.unwrap_or(0);
    let report = match cfg.q()? {
        None => spectrum_grid(&spec, &LaurentScalar::default_q(cfg.precision()), seed)?,
        Some(Scalar::Laurent(q)) => spectrum_grid(&spec, &q, seed)?,
        Some(Scalar::Padic(q)) => spectrum_grid(&spec, &q, seed)?,
    };
    cfg.write(&report)
}

fn cmd_gl2norm(cfg: &RunConfig) -> Result<()> {
    let Some(mut input) = cfg.parse::<Gl2NormInput>()? else {
        bail!(InputError("gl2norm needs --in".into()));
    };
    if let Some(p) = cfg.prime {
        if p != input.p {
            input.p = p;
            input.q = None;
        }
    }
    if let Some(q) = &cfg.q {
        input.q = Some(q.clone());
    }
    cfg.write(&input.run()?)
}

/// `3` for inadmissible input, `2` for malformed or inconsistent input, `1` otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(e) = cause.downcast_ref::<ScatterError>() {
            return match e {
                ScatterError::Inadmissible { .. } => 3,
                ScatterError::InvalidInput(_) | ScatterError::Scalar(_) | ScatterError::Torus(_) => 2,
                _ => 1,
            };
        }
        if let Some(e) = cause.downcast_ref::<Gl2Error>() {
            return match e {
                Gl2Error::Inadmissible { .. } => 3,
                Gl2Error::Scalar(_) | Gl2Error::QMismatch | Gl2Error::InvalidQ(_) | Gl2Error::InvalidInput(_) => 2,
                _ => 1,
            };
        }
        if let Some(e) = cause.downcast_ref::<TorusError>() {
            return match e {
                TorusError::TwistMismatch
                | TorusError::InvalidTwist(_)
                | TorusError::RankMismatch { .. }
                | TorusError::InvalidRadius(_)
                | TorusError::Scalar(_) => 2,
                _ => 1,
            };
        }
        if let Some(e) = cause.downcast_ref::<SingError>() {
            return match e {
                SingError::InvalidInput(_) | SingError::Scalar(_) => 2,
                _ => 1,
            };
        }
        if cause.is::<ScalarError>() || cause.is::<InputError>() || cause.is::<serde_json::Error>() {
            return 2;
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Version => {
            println!("{}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
        Command::Scatter(cfg) => cfg.positive().and_then(|_| cmd_scatter(&cfg)),
        Command::Norm(cfg) => cfg.positive().and_then(|_| cmd_norm(&cfg)),
        Command::Spectrum(cfg) => cfg.positive().and_then(|_| cmd_spectrum(&cfg)),
        Command::Gl2norm(cfg) => cfg.positive().and_then(|_| cmd_gl2norm(&cfg)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
