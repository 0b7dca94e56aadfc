use clap::Parser;
use flatcone::report::{
    self, CliError, GridConfig, JobConfig, Mode, OutputFormat, ProblemInput, Tolerances,
};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

/// Cone-metric obstruction analysis for complex polynomials.
#[derive(Parser, Debug)]
#[command(name = "flatcone", version)]
struct Cli {
    /// Input kind: "poly" (coefficients) or "algebra" (structure constants).
    #[arg(long, default_value = "poly")]
    mode: String,

    /// Read the input from this file ("-" for stdin).
    #[arg(long)]
    input: Option<PathBuf>,

    /// Inline input, e.g. "1 0 1" or a JSON object.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,

    /// Half-width of the square sampling window in the standard chart.
    #[arg(long, default_value_t = 3.0)]
    extent: f64,

    /// Grid points per axis.
    #[arg(long, default_value_t = 41)]
    resolution: usize,

    /// Finite-difference step for Laplacian stencils.
    #[arg(long, default_value_t = 1e-3)]
    stencil_h: f64,

    /// Emit the report as JSON (default).
    #[arg(long, conflicts_with = "text")]
    json: bool,

    /// Emit the report as plain text.
    #[arg(long)]
    text: bool,

    /// Write grid_standard.csv and grid_infinity.csv to the output directory.
    #[arg(long)]
    emit_grids: bool,

    /// Directory for grid dumps.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,

    /// Seed echoed into the report for reproducibility bookkeeping.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Relative residual tolerance for accepted roots.
    #[arg(long, default_value_t = 1e-10)]
    tol_root: f64,

    /// Reporting tolerance for harmonicity residuals.
    #[arg(long, default_value_t = 1e-4)]
    tol_harmonic: f64,
}

fn read_input(cli: &Cli) -> Result<String, CliError> {
    if let Some(text) = &cli.coeffs {
        return Ok(text.clone());
    }
    match &cli.input {
        Some(path) if path.as_os_str() == "-" => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => Err(CliError::Validation(
            "no input: pass --coeffs or --input".into(),
        )),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let mode = match cli.mode.as_str() {
        "poly" => Mode::Poly,
        "algebra" => Mode::Algebra,
        other => {
            return Err(CliError::Validation(format!(
                "unknown mode {other:?}, expected \"poly\" or \"algebra\""
            )))
        }
    };
    let config = JobConfig {
        mode,
        grid: GridConfig {
            extent: cli.extent,
            resolution: cli.resolution,
            stencil_h: cli.stencil_h,
        },
        tolerances: Tolerances {
            tol_root: cli.tol_root,
            tol_harmonic: cli.tol_harmonic,
            ..Tolerances::default()
        },
        output: if cli.text {
            OutputFormat::Text
        } else {
            OutputFormat::Json
        },
        emit_grids: cli.emit_grids,
        out_dir: cli.out_dir.clone(),
        rng_seed: cli.seed,
    };
    let raw = read_input(cli)?;
    let input = match mode {
        Mode::Poly => ProblemInput::Poly(report::parse_poly_input(&raw)?),
        Mode::Algebra => {
            let (algebra, element) = report::parse_algebra_input(&raw)?;
            ProblemInput::Algebra { algebra, element }
        }
    };
    let out = report::run(&config, input)?;
    if let Some((std_csv, inf_csv)) = &out.grids {
        std::fs::create_dir_all(&config.out_dir)?;
        std::fs::write(config.out_dir.join("grid_standard.csv"), std_csv)?;
        std::fs::write(config.out_dir.join("grid_infinity.csv"), inf_csv)?;
    }
    let body = match config.output {
        OutputFormat::Json => format!("{}\n", out.json),
        OutputFormat::Text => report::render_text(&out.report),
    };
    use std::io::Write;
    match std::io::stdout().write_all(body.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other.map_err(CliError::from),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
