//! Command-line front end: `value`, `check`, `gen`, `verify` and `replay`.
//!
//! Exit codes: 0 when the value was computed, the sample passed or the suite
//! was confirmed; 1 when a violation or refutation was found; 2 on usage,
//! input or domain errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::axioms::{check, Axiom, Probe, Relation, SamplePlan};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::io::{emit_game, parse_game, parse_weights};
use crate::sample::Generator;
use crate::scalar::{Rational, Scalar, TAU_CHECK};
use crate::theorems::verify;
use crate::values::{LsWeights, SolutionRule, Weights};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tugames", version, about = "Allocation rules and axiom checks for TU-games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a rule on a game file.
    Value {
        /// Game file (JSON).
        game: PathBuf,
        /// Rule name, e.g. shapley, psi:2, dictator:1, power:2, affine:weights.json.
        #[arg(long, short)]
        rule: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for a violation of an axiom by a rule.
    Check {
        rule: String,
        /// E, L, SYM, IGP, RNP, CU, CDI, CDO, AC, TLB, CM, EG, MR, HM-NGC, F-NGC, M-NGC.
        axiom: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a generated game file to stdout.
    Gen {
        /// uniform, additive, unanimity_mixture, two_active:i,j, single_active:i, symmetric.
        generator: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rational: bool,
    },
    /// Run a verification suite: t1, t2, t3, c2, t4, lemmas.
    Verify {
        suite: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Re-evaluate the witness of a saved JSON check report.
    Replay {
        report: PathBuf,
        /// Rule to replay against; defaults to the rule named in the report.
        #[arg(long, short)]
        rule: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Exact rational arithmetic.
    #[arg(long)]
    pub rational: bool,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Player count or inclusive range such as 3..5.
    #[arg(long, default_value = "3..5")]
    pub n: PlayerRange,
    /// Float-mode tolerance.
    #[arg(long, default_value_t = TAU_CHECK)]
    pub tol: f64,
    /// Run trials on one thread.
    #[arg(long)]
    pub serial: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl RunArgs {
    fn plan(&self) -> SamplePlan {
        let plan = SamplePlan::new(self.trials, self.n.0, self.n.1, self.seed).with_tol(self.tol);
        if self.serial {
            plan.serial()
        } else {
            plan
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlayerRange(pub usize, pub usize);

impl FromStr for PlayerRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad player count {x:?}"));
        let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')) {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Self(lo, hi))
    }
}

/// Resolves a rule name from the registry. File-backed rules read a
/// `{"weights": [...]}` file.
pub fn parse_rule<T: Scalar>(spec: &str) -> Result<SolutionRule<T>> {
    let unknown = || Error::UnknownRule(spec.to_string());
    let (name, arg) = match spec.split_once(':') {
        Some((name, arg)) => (name.trim(), Some(arg.trim())),
        None => (spec.trim(), None),
    };
    let weights = |arg: Option<&str>| -> Result<Vec<T>> {
        let path = arg.ok_or_else(unknown)?;
        parse_weights(&read_file(Path::new(path))?)
    };
    let rule = match (name.to_ascii_lowercase().as_str(), arg) {
        ("ed", None) => SolutionRule::ed(),
        ("cis", None) => SolutionRule::cis(),
        ("ensc", None) => SolutionRule::ensc(),
        ("shapley" | "sh", None) => SolutionRule::shapley(),
        ("standalone", None) => SolutionRule::standalone(),
        ("marginal", None) => SolutionRule::marginal(),
        ("propdiv", None) => SolutionRule::prop_division(),
        ("psi", Some(s)) => match s.parse::<usize>() {
            Ok(s) if s >= 1 => SolutionRule::psi(s),
            _ => return Err(unknown()),
        },
        ("dictator", Some(i)) => match i.parse::<usize>() {
            Ok(i) if i >= 1 => SolutionRule::dictator(i - 1),
            _ => return Err(unknown()),
        },
        ("power", Some(a)) => match a.parse::<f64>() {
            Ok(a) if a.is_finite() => SolutionRule::power(a),
            _ => return Err(unknown()),
        },
        ("sigma-shapley", file) => SolutionRule::sigma_shapley(Weights::Fixed(weights(file)?)),
        ("affine", file) => SolutionRule::affine(Weights::Fixed(weights(file)?)),
        ("least-square", file) => SolutionRule::least_square(LsWeights::new(Weights::Fixed(weights(file)?))),
        _ => return Err(unknown()),
    };
    Ok(rule)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn render(out: &mut dyn Write, format: Format, value: &Value, human: &str) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json values serialize")),
        Format::Human => write!(out, "{human}"),
    }
}

fn cmd_value<T: Scalar>(game: &Path, rule: &str, format: Format, out: &mut dyn Write) -> Result<i32> {
    let v: Game<T> = parse_game(&read_file(game)?)?;
    let rule = parse_rule::<T>(rule)?;
    let pay = rule.evaluate(&v)?;
    let total = pay.total();
    let value = json!({
        "rule": rule.name(),
        "mode": T::MODE,
        "n": v.n(),
        "payoffs": pay.0.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "total": total.to_string(),
        "grand_worth": v.grand_worth().to_string(),
    });
    let mut human = String::new();
    for (i, x) in pay.0.iter().enumerate() {
        human.push_str(&format!("player {}: {x}\n", i + 1));
    }
    human.push_str(&format!("total: {total} (v(N) = {})\n", v.grand_worth()));
    render(out, format, &value, &human).map_err(io_error)?;
    Ok(EXIT_OK)
}

fn cmd_check<T: Scalar>(rule: &str, axiom: &str, run: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let rule = parse_rule::<T>(rule)?;
    let axiom: Axiom = axiom.parse()?;
    let report = check(axiom, &rule, &run.plan())?;
    render(out, run.output.format, &report.to_json(), &format!("{}\n", report.summary())).map_err(io_error)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATED })
}

fn cmd_verify<T: Scalar>(suite: &str, run: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let result = verify::<T>(suite, &run.plan())?;
    render(out, run.output.format, &result.to_json(), &result.summary()).map_err(io_error)?;
    Ok(if result.confirmed() { EXIT_OK } else { EXIT_VIOLATED })
}

fn cmd_gen<T: Scalar>(generator: &str, n: usize, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let g: Generator = generator.parse()?;
    let v: Game<T> = g.generate(n, seed)?;
    write!(out, "{}", emit_game(&v)).map_err(io_error)?;
    Ok(EXIT_OK)
}

/// Replays the probe stored in a check report (or a bare witness object).
fn cmd_replay<T: Scalar>(report: &Path, rule: Option<&str>, format: Format, out: &mut dyn Write) -> Result<i32> {
    let text = read_file(report)?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    let witness = match doc.get("witness") {
        Some(Value::Null) => return Err(Error::InvalidGameFile("report has no witness to replay".into())),
        Some(w) => w,
        None => &doc,
    };
    let probe_json = witness.get("probe").ok_or_else(|| Error::InvalidGameFile("witness has no probe".into()))?;
    let probe = Probe::<T>::from_json(probe_json)?;
    let rule_name = match (rule, doc.get("rule").and_then(Value::as_str)) {
        (Some(r), _) | (None, Some(r)) => r.to_string(),
        (None, None) => return Err(Error::UnknownRule("no rule given and none in the report".into())),
    };
    let rule = parse_rule::<T>(&rule_name)?;
    let outcome = probe.evaluate(&rule)?;
    let tol = doc.get("tol").and_then(Value::as_f64).filter(|t| *t > 0.0).unwrap_or(TAU_CHECK);
    let holds = outcome.holds(tol);
    let strings = |xs: &[T]| xs.iter().map(ToString::to_string).collect::<Vec<_>>();
    let value = json!({
        "rule": rule.name(),
        "probe": probe.kind(),
        "n": probe.n(),
        "expected": strings(&outcome.expected),
        "actual": strings(&outcome.actual),
        "relation": match outcome.relation { Relation::Equal => "equal", Relation::AtLeast => "at_least" },
        "deviation": outcome.deviation(),
        "reproduced": !holds,
    });
    let human = format!(
        "{} probe on n={} against {}: {}\n  expected {:?}\n  actual   {:?}\n",
        probe.kind(),
        probe.n(),
        rule.name(),
        if holds { "holds" } else { "violation reproduced" },
        strings(&outcome.expected),
        strings(&outcome.actual),
    );
    render(out, format, &value, &human).map_err(io_error)?;
    Ok(if holds { EXIT_OK } else { EXIT_VIOLATED })
}

fn io_error(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn dispatch<T: Scalar>(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Value { game, rule, output } => cmd_value::<T>(game, rule, output.format, out),
        Command::Check { rule, axiom, run } => cmd_check::<T>(rule, axiom, run, out),
        Command::Gen { generator, n, seed, .. } => cmd_gen::<T>(generator, *n, *seed, out),
        Command::Verify { suite, run } => cmd_verify::<T>(suite, run, out),
        Command::Replay { report, rule, output } => cmd_replay::<T>(report, rule.as_deref(), output.format, out),
    }
}

fn rational_mode(command: &Command) -> bool {
    match command {
        Command::Value { output, .. } | Command::Replay { output, .. } => output.rational,
        Command::Check { run, .. } | Command::Verify { run, .. } => run.output.rational,
        Command::Gen { rational, .. } => *rational,
    }
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = if rational_mode(&cli.command) {
        dispatch::<Rational>(&cli.command, out)
    } else {
        dispatch::<f64>(&cli.command, out)
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn player_ranges() {
        assert_eq!("4".parse::<PlayerRange>().unwrap(), PlayerRange(4, 4));
        assert_eq!("3..5".parse::<PlayerRange>().unwrap(), PlayerRange(3, 5));
        assert_eq!("3..=6".parse::<PlayerRange>().unwrap(), PlayerRange(3, 6));
        assert_eq!("2-4".parse::<PlayerRange>().unwrap(), PlayerRange(2, 4));
        assert!("5..3".parse::<PlayerRange>().is_err());
    }

    #[test]
    fn registry_names() {
        for (spec, name) in [
            ("shapley", "shapley"),
            ("psi:2", "psi:2"),
            ("dictator:1", "dictator:1"),
            ("power:2", "power:2"),
            ("propdiv", "propdiv"),
        ] {
            assert_eq!(parse_rule::<f64>(spec).unwrap().name(), name);
        }
        for bad in ["psi:0", "dictator:x", "nucleolus", "ed:3", "affine"] {
            assert!(matches!(parse_rule::<f64>(bad), Err(Error::UnknownRule(_))), "{bad}");
        }
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["tugames", "check", "ed"], &mut out, &mut err), EXIT_ERROR);
        assert_eq!(run(["tugames", "check", "ed", "XYZ"], &mut out, &mut err), EXIT_ERROR);
    }
}
