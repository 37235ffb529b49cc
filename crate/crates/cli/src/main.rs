// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bwdecay_core::config::Config;
use bwdecay_core::crossover::{self, CrossoverOptions, CrossoverResult};
use bwdecay_core::quad::QuadratureSettings;
use bwdecay_core::scan::{self, Grid, Method, ScanSpec};
use bwdecay_core::{BreitWignerModel, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bwdecay", version, about = "Decay of a truncated Breit-Wigner unstable state")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Survival probability, energy and decay rate on a time grid.
    Scan(ScanArgs),
    /// Time at which the exponential and power-law parts of P become comparable.
    Crossover(CrossoverArgs),
    /// Normalization, lifetime and reference levels of a model.
    Info(InfoArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Key=value file; command-line flags override its entries.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// (E0 - Emin)/gamma0; alternative to --e0.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    e0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    hbar: Option<f64>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_negative_numbers = true)]
    tau_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    grid: Option<Grid>,
    #[arg(long)]
    method: Option<Method>,
    /// Series order for the asymptotic method (1..5).
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
    output: ScanFormat,
    /// Write to a file instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Omit the leading `# ...` metadata line.
    #[arg(long)]
    no_metadata: bool,
    #[arg(long, allow_negative_numbers = true)]
    rel_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    abs_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eta_max: Option<f64>,
}

#[derive(Args)]
struct CrossoverArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Order of the late-time amplitude (1..4).
    #[arg(long)]
    terms: Option<usize>,
    /// Constant A of the exponential part; defaults to N.
    #[arg(long, allow_negative_numbers = true)]
    amp_const: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = crossover::DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    output: ReportFormat,
}

#[derive(Args)]
struct InfoArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    output: ReportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) | Failure::Io(_) => 3,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn numerical(e: Error) -> Failure {
    Failure::Numerical(e.to_string())
}

fn load_config(path: Option<&PathBuf>) -> Result<Config, Failure> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    Config::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn build_model(args: &ModelArgs, config: &Config) -> Result<BreitWignerModel, Failure> {
    let beta = args.beta.or(config.beta);
    let e0 = args.e0.or(config.e0);
    let gamma0 = args.gamma0.or(config.gamma0).unwrap_or(1.0);
    let emin = args.emin.or(config.emin).unwrap_or(0.0);
    let hbar = args.hbar.or(config.hbar).unwrap_or(1.0);
    let e0 = match (beta, e0) {
        (Some(_), Some(_)) => return Err(Failure::Usage("give either beta or e0, not both".into())),
        (None, None) => return Err(Failure::Usage("a model needs beta or e0".into())),
        (Some(b), None) => {
            if !(b > 0.0) || !b.is_finite() {
                return Err(Failure::Usage(format!("beta must be a finite positive number, got {b}")));
            }
            emin + b * gamma0
        }
        (None, Some(e)) => e,
    };
    BreitWignerModel::with_hbar(e0, gamma0, emin, hbar).map_err(usage)
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Usage(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_scan(args: &ScanArgs) -> Result<(), Failure> {
    let config = load_config(args.model.config.as_ref())?;
    let model = build_model(&args.model, &config)?;
    let defaults = ScanSpec::default();
    let q = QuadratureSettings::default();
    let spec = ScanSpec {
        tau_min: args.tau_min.or(config.tau_min).unwrap_or(defaults.tau_min),
        tau_max: args.tau_max.or(config.tau_max).unwrap_or(defaults.tau_max),
        points: args.points.or(config.points).unwrap_or(defaults.points),
        grid: args.grid.or(config.grid).unwrap_or(defaults.grid),
        method: args.method.or(config.method).unwrap_or(defaults.method),
        terms: args.terms.or(config.terms).unwrap_or(defaults.terms),
        quadrature: QuadratureSettings {
            rel_tol: args.rel_tol.or(config.rel_tol).unwrap_or(q.rel_tol),
            abs_tol: args.abs_tol.or(config.abs_tol).unwrap_or(q.abs_tol),
            eta_max: args.eta_max.or(config.eta_max).unwrap_or(q.eta_max),
            ..q
        },
    };
    spec.validate().map_err(usage)?;
    let rows = scan::run_scan(&model, &spec).map_err(numerical)?;
    let meta = (!args.no_metadata).then(|| scan::metadata_line(&model, &spec));
    let mut out = open_output(args.out.as_ref())?;
    match args.output {
        ScanFormat::Csv => scan::write_csv(&mut out, &rows, meta.as_deref())?,
        ScanFormat::Json => {
            out.write_all(scan::to_json_string(&rows, meta.as_deref()).as_bytes())?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn render_crossover(r: &CrossoverResult, model: &BreitWignerModel, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => format!(
            "beta       {}\ntau_T      {:.12}\nT          {:.12e}\nbracket    [{}, {}]\nresidual   {:e}\norder      {}\niterations {}\n",
            model.beta(),
            r.tau_t,
            r.time,
            r.bracket.0,
            r.bracket.1,
            r.residual,
            r.order,
            r.iterations
        ),
        ReportFormat::Csv => format!(
            "beta,tau_t,time,bracket_lo,bracket_hi,residual,order,iterations\n{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
            model.beta(),
            r.tau_t,
            r.time,
            r.bracket.0,
            r.bracket.1,
            r.residual,
            r.order,
            r.iterations
        ),
        ReportFormat::Json => {
            let v = json!({
                "beta": model.beta(),
                "tau_t": r.tau_t,
                "time": r.time,
                "bracket": [r.bracket.0, r.bracket.1],
                "residual": r.residual,
                "order": r.order,
                "iterations": r.iterations,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("plain values serialize"))
        }
    }
}

fn run_crossover(args: &CrossoverArgs) -> Result<(), Failure> {
    let config = load_config(args.model.config.as_ref())?;
    let model = build_model(&args.model, &config)?;
    let order = args.terms.or(config.terms).unwrap_or(1);
    if !(1..=4).contains(&order) {
        return Err(Failure::Usage(format!("terms must be in 1..=4, got {order}")));
    }
    if !(args.tol > 0.0) {
        return Err(Failure::Usage(format!("tol must be positive, got {}", args.tol)));
    }
    let amplitude_constant = args.amp_const.or(config.amp_const);
    if let Some(a) = amplitude_constant {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Failure::Usage(format!("amp-const must be a finite positive number, got {a}")));
        }
    }
    let options = CrossoverOptions {
        order,
        tolerance: args.tol,
        amplitude_constant,
    };
    let r = crossover::crossover_time(&model, &options).map_err(numerical)?;
    let mut out = io::stdout().lock();
    out.write_all(render_crossover(&r, &model, args.output).as_bytes())?;
    Ok(())
}

fn run_info(args: &InfoArgs) -> Result<(), Failure> {
    let config = load_config(args.model.config.as_ref())?;
    let m = build_model(&args.model, &config)?;
    let text = match args.output {
        ReportFormat::Text => format!(
            "beta                 {}\nnormalization        {:.15}\nlifetime             {:e}\npeak_density         {:e}\nreference_gamma_ratio 1\nreference_kappa      1\n",
            m.beta(),
            m.normalization(),
            m.lifetime(),
            m.peak_density()
        ),
        ReportFormat::Csv => format!(
            "beta,normalization,lifetime,peak_density,reference_gamma_ratio,reference_kappa\n{:.16e},{:.16e},{:.16e},{:.16e},1,1\n",
            m.beta(),
            m.normalization(),
            m.lifetime(),
            m.peak_density()
        ),
        ReportFormat::Json => {
            let v = json!({
                "beta": m.beta(),
                "normalization": m.normalization(),
                "lifetime": m.lifetime(),
                "peak_density": m.peak_density(),
                "e0": m.e0(),
                "gamma0": m.gamma0(),
                "emin": m.emin(),
                "hbar": m.hbar(),
                "reference_gamma_ratio": 1.0,
                "reference_kappa": 1.0,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("plain values serialize"))
        }
    };
    io::stdout().lock().write_all(text.as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let result = match &cli.command {
        Command::Scan(a) => run_scan(a),
        Command::Crossover(a) => run_crossover(a),
        Command::Info(a) => run_info(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => format!("error: {m}"),
                Failure::Numerical(m) => format!("numerical failure: {m}"),
                Failure::Io(e) => format!("i/o error: {e}"),
            };
            eprintln!("{msg}");
            ExitCode::from(f.code())
        }
    }
}
