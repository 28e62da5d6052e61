use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use qdirac::error::{Error, Result};
use qdirac::matcher::{solve, verify_matching};
use qdirac::model::{JumpVariant, ScatteringParams};
use qdirac::observables::conservation_check;
use qdirac::oracle::{integrate, RegularizedProblem};
use qdirac::quat::Complex;
use qdirac::sweep::{emit, emit_figures, run_sweep, Axis, OutputFormat, SweepSpec};

/// Scattering of a relativistic fermion by a quaternionic double-delta
/// potential: single solves, parameter sweeps and cross-validation runs.
#[derive(Parser)]
#[command(name = "qdirac", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one parameter point and print amplitudes and diagnostics.
    Solve(SolveArgs),
    /// Sweep one parameter over a uniform grid and emit CSV or JSON.
    Sweep(SweepArgs),
    /// Compare the matching solver against the regularized-delta integrator.
    Oracle(OracleArgs),
    /// Emit the canonical sweep datasets (fig1 .. fig4 presets).
    Figures(FiguresArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// Jump conditions obtained by integrating the coupled equations.
    OdeDerived,
    /// Both jump conditions share the combination Va*phi_a + Vb*phi_b.
    CommonRhs,
}

impl From<VariantArg> for JumpVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::OdeDerived => JumpVariant::OdeDerived,
            VariantArg::CommonRhs => JumpVariant::CommonRhs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    E,
    Va,
    Vb,
    A0,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::E => Axis::E,
            AxisArg::Va => Axis::Va,
            AxisArg::Vb => Axis::Vb,
            AxisArg::A0 => Axis::A0,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Physical parameters shared by the subcommands. Flags override the optional
/// JSON config file; environment variables are never consulted.
#[derive(Args)]
struct ParamArgs {
    /// Total energy E (natural units, must exceed the mass to scatter).
    #[arg(long)]
    e: Option<f64>,
    /// Fermion mass m > 0.
    #[arg(long)]
    m: Option<f64>,
    /// Strength of the real potential channel.
    #[arg(long)]
    va: Option<f64>,
    /// Strength of the quaternionic potential channel.
    #[arg(long)]
    vb: Option<f64>,
    /// Half-separation of the deltas (positions -a0 and +a0).
    #[arg(long)]
    a0: Option<f64>,
    /// Which b-channel jump condition to use.
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// JSON file with default parameter values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    e: Option<f64>,
    m: Option<f64>,
    va: Option<f64>,
    vb: Option<f64>,
    a0: Option<f64>,
    variant: Option<JumpVariant>,
}

/// Resolved parameters: flag, else config, else default (E has no default).
struct Resolved {
    e: Option<f64>,
    m: f64,
    va: f64,
    vb: f64,
    a0: f64,
    variant: JumpVariant,
}

impl ParamArgs {
    fn resolve(&self) -> Result<Resolved> {
        let config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                serde_json::from_str::<ConfigFile>(&text)?
            }
            None => ConfigFile::default(),
        };
        Ok(Resolved {
            e: self.e.or(config.e),
            m: self.m.or(config.m).unwrap_or(1.0),
            va: self.va.or(config.va).unwrap_or(1.0),
            vb: self.vb.or(config.vb).unwrap_or(1.0),
            a0: self.a0.or(config.a0).unwrap_or(1.0),
            variant: self
                .variant
                .map(JumpVariant::from)
                .or(config.variant)
                .unwrap_or_default(),
        })
    }

    fn scattering_params(&self) -> Result<ScatteringParams> {
        let r = self.resolve()?;
        let e = r
            .e
            .ok_or_else(|| Error::InvalidParams("--e is required".into()))?;
        Ok(ScatteringParams::new(e, r.m, r.va, r.vb, r.a0)?.with_variant(r.variant))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Swept parameter.
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Lower bound of the grid.
    #[arg(long)]
    lo: f64,
    /// Upper bound of the grid.
    #[arg(long)]
    hi: f64,
    /// Number of grid points (>= 2 unless lo == hi).
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Width of the Gaussian bumps standing in for the deltas.
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
}

#[derive(Args)]
struct FiguresArgs {
    /// Directory for the emitted CSV files.
    #[arg(long, default_value = "figures")]
    out_dir: PathBuf,
}

fn fmt_complex(z: Complex) -> String {
    format!("{:+.16e} {:+.16e}i", z.re, z.im)
}

fn run_solve(args: &SolveArgs) -> Result<()> {
    let params = args.params.scattering_params()?;
    let sol = solve(&params)?;
    let report = conservation_check(&sol);
    let matching = verify_matching(&sol);
    let p = params.wavenumber()?.0;

    println!(
        "E = {} m = {} Va = {} Vb = {} a0 = {} variant = {:?}",
        params.e, params.m, params.va, params.vb, params.a0, params.variant
    );
    println!("p = {p:.16e}");
    for (label, z) in [
        ("r      ", sol.r),
        ("r_tilde", sol.r_tilde),
        ("c1     ", sol.c1),
        ("c2     ", sol.c2),
        ("c3     ", sol.c3),
        ("c4     ", sol.c4),
        ("t      ", sol.t),
        ("t_tilde", sol.t_tilde),
    ] {
        println!("{label} = {}", fmt_complex(z));
    }
    println!("R = {:.16e}", report.reflection);
    println!("T = {:.16e}", report.transmission);
    println!("R+T = {:.16e}", report.reflection + report.transmission);
    println!("defect = {:.3e}", report.defect);
    println!(
        "J_left = {:.16e}  J_right = {:.16e}",
        report.j_left, report.j_right
    );
    println!(
        "solve_residual = {:.3e}  max_matching_violation = {:.3e}",
        sol.residual_norm, matching.max_violation
    );
    Ok(())
}

fn run_sweep_cmd(args: &SweepArgs) -> Result<()> {
    let resolved = args.params.resolve()?;
    // for an energy sweep the nominal E is never used; seed it above the
    // mass so parameter validation passes before the axis overwrites it
    let e = match Axis::from(args.axis) {
        Axis::E => resolved.e.unwrap_or(resolved.m + 1.0),
        _ => resolved.e.ok_or_else(|| {
            Error::InvalidParams("--e is required for sweeps over va, vb or a0".into())
        })?,
    };
    let base = ScatteringParams::new(e, resolved.m, resolved.va, resolved.vb, resolved.a0)?
        .with_variant(resolved.variant);
    let spec = SweepSpec {
        base,
        axis: args.axis.into(),
        lo: args.lo,
        hi: args.hi,
        steps: args.steps,
    };
    let result = run_sweep(&spec)?;
    for failure in &result.failures {
        eprintln!(
            "warning: point {} failed: {}",
            failure.axis_value, failure.message
        );
    }
    match &args.out {
        Some(path) => {
            let format = match args.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
            emit(&result, format, path)?;
            eprintln!("wrote {} rows to {}", result.rows.len(), path.display());
        }
        None => {
            let body = match args.format {
                FormatArg::Csv => qdirac::sweep::render_csv(&result),
                FormatArg::Json => qdirac::sweep::render_json(&result)?,
            };
            print!("{body}");
        }
    }
    Ok(())
}

fn run_oracle(args: &OracleArgs) -> Result<()> {
    let params = args.params.scattering_params()?;
    let matched = solve(&params)?;
    let problem = RegularizedProblem::new(params, args.epsilon)?;
    let oracle = integrate(&problem)?;

    println!(
        "E = {} m = {} Va = {} Vb = {} a0 = {} epsilon = {}",
        params.e, params.m, params.va, params.vb, params.a0, args.epsilon
    );
    println!("matcher r = {}", fmt_complex(matched.r));
    println!("oracle  r = {}", fmt_complex(oracle.r));
    println!("matcher t = {}", fmt_complex(matched.t));
    println!("oracle  t = {}", fmt_complex(oracle.t));
    println!(
        "|r| difference = {:.3e}   |t| difference = {:.3e}",
        (oracle.r.norm() - matched.r.norm()).abs(),
        (oracle.t.norm() - matched.t.norm()).abs()
    );
    println!(
        "complex differences: r {:.3e}, t {:.3e}",
        (oracle.r - matched.r).norm(),
        (oracle.t - matched.t).norm()
    );
    println!(
        "integration: {} steps per run, truncation estimate {:.3e}",
        oracle.steps, oracle.truncation_estimate
    );
    Ok(())
}

fn run_figures(args: &FiguresArgs) -> Result<()> {
    let written = emit_figures(&args.out_dir)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Sweep(args) => run_sweep_cmd(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Figures(args) => run_figures(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
