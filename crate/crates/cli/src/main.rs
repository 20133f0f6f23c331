use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use recasym::numeric::{self, ConnectionConstant, NumericError};
use recasym::preset::{self, Preset};
use recasym::rational;
use recasym::render;
use recasym::seq::digit_summary;
use recasym::{frame_solve, residual_check, solve_expansion, EngineError, Expansion, Frame, Recurrence};

const WORKDIR_VAR: &str = "RECASYM_WORKDIR";

#[derive(Parser)]
#[command(name = "recasym", version, about = "Asymptotic expansions of P-recursive sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print t_0 ..= t_N from the recurrence and its initial values.
    Seq(SeqArgs),
    /// Solve for a_1 ..= a_K and verify the residual.
    Coeffs(CoeffsArgs),
    /// Re-render an expansion (from a JSON file or freshly solved).
    Render(RenderArgs),
    /// Evaluate C F(n) (1 + sum_{i<=k} a_i n^(-i/2)).
    Eval(EvalArgs),
    /// Compare the truncated expansion with the exact term t_n.
    Check(CheckArgs),
    /// Determine beta, c and alpha from the recurrence.
    SolveFrame(SolveFrameArgs),
}

#[derive(Args)]
struct Source {
    /// Built-in problem (recurrence, frame, initial values, constant).
    #[arg(long, conflicts_with = "recurrence")]
    preset: Option<String>,
    /// Recurrence JSON file: {"order": d, "coeffs": [[...], ...]}.
    #[arg(long)]
    recurrence: Option<PathBuf>,
    /// Frame JSON file; without it the frame is solved from the recurrence.
    #[arg(long)]
    frame: Option<PathBuf>,
    /// Initial values t_0, ..., t_(d-1), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    initial: Option<Vec<String>>,
    /// Connection constant: a rational `p/q` or `1/sqrt2`.
    #[arg(long)]
    constant: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args)]
struct SeqArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    n: usize,
    /// Only print t_N.
    #[arg(long)]
    last: bool,
    /// Print the digit count and leading 20 digits instead of the full value.
    #[arg(long)]
    digits_only: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long = "K", value_parser = clap::value_parser!(u64).range(1..))]
    k_max: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Expansion JSON file to render.
    #[arg(long, conflicts_with_all = ["preset", "recurrence"])]
    input: Option<PathBuf>,
    #[command(flatten)]
    source: Source,
    #[arg(long = "K")]
    k_max: Option<usize>,
    #[arg(long, value_enum, default_value = "latex")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    n: u64,
    /// Series terms through n^(-k/2).
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 20)]
    digits: u32,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also write a plain-text report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveFrameArgs {
    #[command(flatten)]
    source: Source,
    /// Solve K terms under the found frame and report the verified order.
    #[arg(long)]
    verify: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Computation(String),
    Precision(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Computation(_) => 2,
            Failure::Precision(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Computation(m) | Failure::Precision(m) => m,
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Computation(e.to_string())
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::PrecisionUnachievable { .. } | NumericError::TruncationDominates { .. } => {
                Failure::Precision(e.to_string())
            }
            NumericError::InvalidPoint(_) | NumericError::OrderUnavailable { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Computation(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(WORKDIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Outcome<T> {
    let p = resolve(path);
    let text = fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid {what} in {}: {e}", p.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Outcome<()> {
    match output {
        Some(path) => {
            let p = resolve(path);
            fs::write(&p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Everything a command may need, merged from a preset and explicit flags.
struct Problem {
    recurrence: Recurrence,
    frame: Option<Frame>,
    initial: Option<Vec<BigInt>>,
    constant: Option<ConnectionConstant>,
}

impl Source {
    fn preset(&self) -> Outcome<Option<Preset>> {
        match &self.preset {
            None => Ok(None),
            Some(name) => Preset::by_name(name).map(Some).ok_or_else(|| {
                Failure::Usage(format!("unknown preset {name:?} (available: {})", preset::NAMES.join(", ")))
            }),
        }
    }

    fn load(&self) -> Outcome<Problem> {
        let preset = self.preset()?;
        let recurrence = match (&preset, &self.recurrence) {
            (_, Some(path)) => read_json(path, "recurrence")?,
            (Some(p), None) => p.recurrence.clone(),
            (None, None) => return Err(Failure::Usage("one of --preset or --recurrence is required".into())),
        };
        let frame = match &self.frame {
            Some(path) => Some(read_json(path, "frame")?),
            None => preset.as_ref().map(|p| p.frame.clone()),
        };
        let initial = match &self.initial {
            Some(v) => Some(
                v.iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigInt>()
                            .map_err(|_| Failure::Usage(format!("invalid initial value {s:?}")))
                    })
                    .collect::<Outcome<Vec<_>>>()?,
            ),
            None => preset.as_ref().map(|p| p.initial.clone()),
        };
        let constant = match &self.constant {
            Some(s) => Some(
                ConnectionConstant::parse(s).ok_or_else(|| Failure::Usage(format!("invalid constant {s:?}")))?,
            ),
            None => preset.as_ref().map(|p| p.constant.clone()),
        };
        Ok(Problem {
            recurrence,
            frame,
            initial,
            constant,
        })
    }
}

impl Problem {
    fn frame(&self) -> Outcome<Frame> {
        match &self.frame {
            Some(f) => Ok(f.clone()),
            None => Ok(frame_solve(&self.recurrence)?),
        }
    }

    fn initial(&self) -> Outcome<&[BigInt]> {
        self.initial
            .as_deref()
            .ok_or_else(|| Failure::Usage("initial values are required (--initial)".into()))
    }

    fn terms(&self, n_max: usize) -> Outcome<Vec<BigInt>> {
        self.recurrence
            .unroll(self.initial()?, n_max)
            .map_err(|e| Failure::Computation(e.to_string()))
    }

    /// Solves `k_max` terms and insists that the residual vanishes through them.
    fn verified_expansion(&self, k_max: usize) -> Outcome<Expansion> {
        let exp = solve_expansion(&self.recurrence, &self.frame()?, k_max)?;
        let m = residual_check(&self.recurrence, &exp)?;
        if m < k_max {
            return Err(Failure::Computation(format!(
                "residual check failed: vanishes through {m} orders, expected {k_max}"
            )));
        }
        Ok(exp)
    }

    fn constant(&self) -> ConnectionConstant {
        self.constant.clone().unwrap_or_else(ConnectionConstant::one)
    }
}

fn summary(v: &BigInt) -> String {
    let (count, lead) = digit_summary(v, 20);
    let sign = if v.sign() == num_bigint::Sign::Minus { "-" } else { "" };
    let mut mantissa = lead[..1].to_string();
    if lead.len() > 1 {
        mantissa.push('.');
        mantissa.push_str(&lead[1..]);
    }
    let exponent = if count > 1 { format!("e{}", count - 1) } else { String::new() };
    format!("{count} digits; {sign}{mantissa}{exponent}")
}

fn cmd_seq(a: &SeqArgs) -> Outcome<String> {
    let problem = a.source.load()?;
    let terms = problem.terms(a.n)?;
    let shown = if a.last { &terms[a.n..] } else { &terms[..] };
    let mut out = String::new();
    for t in shown {
        if a.digits_only {
            writeln!(out, "{}", summary(t)).unwrap();
        } else {
            writeln!(out, "{t}").unwrap();
        }
    }
    Ok(out)
}

fn format_expansion(exp: &Expansion, format: Format, constant: Option<&ConnectionConstant>) -> String {
    match format {
        Format::Text => exp
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| format!("{}: {}\n", i + 1, rational::to_string(a)))
            .collect(),
        Format::Json => format!("{}\n", serde_json::to_string(exp).expect("expansion serializes")),
        Format::Latex => format!("{}\n", render::expansion_latex(exp, constant)),
    }
}

fn cmd_coeffs(a: &CoeffsArgs) -> Outcome<String> {
    let problem = a.source.load()?;
    let exp = problem.verified_expansion(a.k_max as usize)?;
    Ok(format_expansion(&exp, a.format, problem.constant.as_ref()))
}

fn cmd_render(a: &RenderArgs) -> Outcome<String> {
    if let Some(path) = &a.input {
        let exp: Expansion = read_json(path, "expansion")?;
        let constant = match &a.source.constant {
            Some(s) => Some(ConnectionConstant::parse(s).ok_or_else(|| Failure::Usage(format!("invalid constant {s:?}")))?),
            None => None,
        };
        return Ok(format_expansion(&exp, a.format, constant.as_ref()));
    }
    let k = a
        .k_max
        .ok_or_else(|| Failure::Usage("--K is required without --input".into()))?;
    let problem = a.source.load()?;
    let exp = problem.verified_expansion(k)?;
    Ok(format_expansion(&exp, a.format, problem.constant.as_ref()))
}

fn cmd_eval(a: &EvalArgs) -> Outcome<String> {
    let problem = a.source.load()?;
    let p = &a.point;
    let exp = problem.verified_expansion(p.k)?;
    let v = numeric::eval_expansion(&exp, &problem.constant(), p.n, p.k, p.digits)?;
    let s = v.to_sci(p.digits as usize);
    Ok(match a.format {
        Format::Json => format!(
            "{}\n",
            serde_json::json!({"n": p.n, "k": p.k, "asy": s, "digits": p.digits})
        ),
        _ => format!("{s}\n"),
    })
}

fn cmd_check(a: &CheckArgs) -> Outcome<String> {
    let problem = a.source.load()?;
    let p = &a.point;
    let exp = problem.verified_expansion(p.k)?;
    let terms = problem.terms(p.n as usize)?;
    let report = numeric::ratio_check(&exp, &problem.constant(), &terms[p.n as usize], p.n, p.k, p.digits)?;
    if let Some(path) = &a.report {
        let title = match &a.source.preset {
            Some(name) => format!("ratio check, preset {name}"),
            None => "ratio check".to_string(),
        };
        emit(Some(path), &report.to_text(&title))?;
    }
    Ok(match a.format {
        Format::Json => format!("{}\n", report.to_json()),
        _ => format!(
            "asy: {}\nexact: {}\nratio: {}\nratio - 1: {}\n",
            report.asy_string(),
            report.exact_string(),
            report.ratio_string(),
            report.deviation().to_sci(6)
        ),
    })
}

fn cmd_solve_frame(a: &SolveFrameArgs) -> Outcome<String> {
    let problem = a.source.load()?;
    let frame = frame_solve(&problem.recurrence)?;
    let mut out = format!("{}\n", serde_json::to_string(&frame).expect("frame serializes"));
    if let Some(k) = a.verify {
        let exp = solve_expansion(&problem.recurrence, &frame, k)?;
        let m = residual_check(&problem.recurrence, &exp)?;
        if m < k {
            return Err(Failure::Computation(format!(
                "residual check failed: vanishes through {m} orders, expected {k}"
            )));
        }
        writeln!(out, "verified: residual vanishes through {m} orders (K = {k})").unwrap();
    }
    Ok(out)
}

fn run(cli: &Cli) -> Outcome<()> {
    let (text, output) = match &cli.command {
        Command::Seq(a) => (cmd_seq(a)?, a.output.as_deref()),
        Command::Coeffs(a) => (cmd_coeffs(a)?, a.output.as_deref()),
        Command::Render(a) => (cmd_render(a)?, a.output.as_deref()),
        Command::Eval(a) => (cmd_eval(a)?, a.output.as_deref()),
        Command::Check(a) => (cmd_check(a)?, a.output.as_deref()),
        Command::SolveFrame(a) => (cmd_solve_frame(a)?, a.output.as_deref()),
    };
    emit(output, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if informational { 0 } else { 1 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
