//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 domain or I/O error, 2 usage error, 3 failed
//! verification. Numbers are printed with 17 significant digits; `--json`
//! prints the same fields as one JSON object.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::config::{parse_config, ScenarioConfig};
use crate::equilibrium::{naive_recommendation, optimal_recommendation};
use crate::oracle::mc_expected_loss;
use crate::sweep::{emit_csv, emit_svg_chart, format_sig17, preset, run_sweep, Extremum};
use crate::trust::{alpha_ratio, invest_decision, threshold_slope_condition};
use crate::verify::{verify, VerifyOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "advisor-game",
    version,
    about = "Equilibrium of an advisor facing a predictable personal AI"
)]
struct Cli {
    /// Print a JSON object instead of `key = value` lines.
    #[arg(long, global = true)]
    json: bool,

    /// Progress messages on stderr.
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

/// Scenario source: a config file, with individual flags taking precedence.
#[derive(Debug, Args)]
struct ScenarioArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    mu0: Option<f64>,
    #[arg(long = "rE")]
    r_e: Option<f64>,
    #[arg(long = "rP")]
    r_p: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long = "sP", allow_negative_numbers = true)]
    s_p: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Human decision for a given advisor recommendation.
    Decide {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Use the rule for a human who also consulted the AI.
        #[arg(long = "with-ai")]
        with_ai: bool,
        #[arg(long = "sE", allow_negative_numbers = true)]
        s_e: f64,
    },
    /// Optimal strategic recommendation, counteraction intensity and loss.
    Optimal {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Recommendation of an advisor that ignores the AI.
    Naive {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// One-parameter sweep written as CSV (and optionally SVG).
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Named layout used instead of the config's sweep block.
        #[arg(long)]
        preset: Option<String>,
    },
    /// Trust-investment threshold, alpha ratio and slope condition.
    Trust {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long = "rE-high")]
        r_e_high: Option<f64>,
        #[arg(long)]
        cost: Option<f64>,
    },
    /// Check the closed forms against the numerical oracles.
    Verify {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value = "golden")]
        minimizer: String,
        #[arg(long = "grid-points")]
        grid_points: Option<usize>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte Carlo estimate of the loss of a given recommendation.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long = "sE", allow_negative_numbers = true)]
        s_e: f64,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

/// Ordered output fields of one command.
#[derive(Debug, Default)]
struct Report(Vec<(&'static str, Field)>);

impl Report {
    fn num(mut self, key: &'static str, v: f64) -> Self {
        self.0.push((key, Field::Num(v)));
        self
    }
    fn int(mut self, key: &'static str, v: u64) -> Self {
        self.0.push((key, Field::Int(v)));
        self
    }
    fn flag(mut self, key: &'static str, v: bool) -> Self {
        self.0.push((key, Field::Bool(v)));
        self
    }
    fn text(mut self, key: &'static str, v: impl Into<String>) -> Self {
        self.0.push((key, Field::Text(v.into())));
        self
    }

    fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self
                .0
                .iter()
                .map(|(k, f)| {
                    let v = match f {
                        Field::Num(x) => Value::from(*x),
                        Field::Int(x) => Value::from(*x),
                        Field::Bool(b) => Value::from(*b),
                        Field::Text(s) => Value::from(s.as_str()),
                    };
                    (k.to_string(), v)
                })
                .collect();
            let mut s = Value::Object(map).to_string();
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for (k, f) in &self.0 {
                let v = match f {
                    Field::Num(x) => format_sig17(*x),
                    Field::Int(x) => x.to_string(),
                    Field::Bool(b) => b.to_string(),
                    Field::Text(t) => t.clone(),
                };
                s.push_str(&format!("{k} = {v}\n"));
            }
            s
        }
    }
}

/// Failure of a command, mapped to an exit code.
enum Failure {
    Domain(String),
    Verification(Report),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn load_config(args: &ScenarioArgs) -> Result<ScenarioConfig, Failure> {
    let mut config = match &args.config {
        Some(path) => {
            let bytes = std::fs::read(path)
                .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&bytes)?
        }
        None => ScenarioConfig::default(),
    };
    config.override_ratios(args.r_e, args.r_p)?;
    if let Some(v) = args.mu0 {
        config.mu0 = v;
    }
    if let Some(v) = args.p {
        config.p = v;
    }
    if let Some(v) = args.r {
        config.r = v;
    }
    if let Some(v) = args.s_p {
        config.s_p = v;
    }
    Ok(config)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Domain(format!("cannot create {}: {e}", path.display())))
}

fn extremum(report: Report, prefix: &'static [&'static str; 4], e: &Option<Extremum>) -> Report {
    match e {
        Some(e) => report
            .num(prefix[0], e.param)
            .num(prefix[1], e.value)
            .num(prefix[2], e.refined_param)
            .num(prefix[3], e.refined_value),
        None => report,
    }
}

fn execute(cmd: Command, verbose: bool, err: &mut dyn Write) -> Result<Report, Failure> {
    let mut progress = |msg: String| {
        if verbose {
            let _ = writeln!(err, "{msg}");
        }
    };
    match cmd {
        Command::Decide {
            scenario,
            with_ai,
            s_e,
        } => {
            let config = load_config(&scenario)?;
            let b = config.beliefs()?;
            let s = config.scenario()?;
            let report = Report::default().num("sE", s_e);
            Ok(if with_ai {
                report.num("sP", s.s_p()).num("d1", b.decide_with_ai(s_e, s.s_p()))
            } else {
                report.num("d0", b.decide_without_ai(s_e))
            })
        }
        Command::Optimal { scenario } => {
            let s = load_config(&scenario)?.scenario()?;
            let o = optimal_recommendation(&s)?;
            Ok(Report::default()
                .num("sE_star", o.s_e_star)
                .num("delta", o.delta)
                .num("loss", o.loss)
                .num("d0", o.d0)
                .num("d1", o.d1))
        }
        Command::Naive { scenario } => {
            let s = load_config(&scenario)?.scenario()?;
            Ok(Report::default().num("sE_star", naive_recommendation(s.r())))
        }
        Command::Sweep {
            scenario,
            out,
            svg,
            preset: preset_name,
        } => {
            let config = load_config(&scenario)?;
            let spec = match preset_name {
                Some(name) => {
                    let mut spec = preset(&name)?.spec(config.scenario()?);
                    spec.trust = config.trust_supplement();
                    spec
                }
                None => config.sweep_spec()?.ok_or_else(|| {
                    Failure::Domain("config has no sweep block and no --preset was given".into())
                })?,
            };
            progress(format!(
                "sweep: {} over {} with {} steps",
                spec.quantity, spec.param, spec.steps
            ));
            let res = run_sweep(&spec)?;
            emit_csv(&res, create(&out)?)?;
            if let Some(path) = &svg {
                emit_svg_chart(&res, create(path)?)?;
            }
            let report = Report::default()
                .text("quantity", res.quantity)
                .text("param", res.param.as_str())
                .int("rows", res.rows.len() as u64);
            let report = extremum(
                report,
                &["argmax_param", "argmax_value", "argmax_refined_param", "argmax_refined_value"],
                &res.argmax,
            );
            Ok(extremum(
                report,
                &["argmin_param", "argmin_value", "argmin_refined_param", "argmin_refined_value"],
                &res.argmin,
            ))
        }
        Command::Trust {
            scenario,
            r_e_high,
            cost,
        } => {
            let mut config = load_config(&scenario)?;
            if r_e_high.is_some() || cost.is_some() {
                let block = config.trust.get_or_insert(crate::config::TrustBlock {
                    r_e_high: f64::NAN,
                    cost: 0.0,
                });
                if let Some(v) = r_e_high {
                    block.r_e_high = v;
                }
                if let Some(v) = cost {
                    block.cost = v;
                }
            }
            let tp = config.trust_problem()?.ok_or_else(|| {
                Failure::Domain("trust needs a trust block or --rE-high".into())
            })?;
            let d = invest_decision(&tp)?;
            let alpha = alpha_ratio(tp.r_e_base(), tp.r_e_high(), tp.scenario().beliefs().r_p())?;
            let slope = threshold_slope_condition(&tp)?;
            Ok(Report::default()
                .num("threshold", d.threshold)
                .num("loss_base", d.loss_base)
                .num("loss_high", d.loss_high)
                .num("cost", tp.cost())
                .flag("invest", d.invest)
                .num("alpha", alpha)
                .num("slope_lhs", slope.lhs)
                .num("slope_rhs", slope.rhs)
                .flag("decreasing_in_p", slope.decreasing))
        }
        Command::Verify {
            scenario,
            trials,
            minimizer,
            grid_points,
            n,
            seed,
        } => {
            let config = load_config(&scenario)?;
            let base = config.scenario()?;
            let defaults = VerifyOptions::default();
            let opts = VerifyOptions {
                trials: trials.unwrap_or(defaults.trials),
                seed: seed.unwrap_or(config.mc.seed),
                minimizer,
                grid_points: grid_points.unwrap_or(defaults.grid_points),
                mc_n: n.unwrap_or(config.mc.n),
            };
            if opts.grid_points < 3 {
                return Err(Failure::Domain("--grid-points must be at least 3".into()));
            }
            progress(format!(
                "verify: {} trials with the {} minimizer",
                opts.trials, opts.minimizer
            ));
            let r = verify(&base, &opts)?;
            let report = Report::default()
                .int("trials", r.trials as u64)
                .text("minimizer", r.minimizer.clone())
                .num("max_argmin_dev", r.max_argmin_dev)
                .num("max_loss_dev", r.max_loss_dev)
                .int("argmin_failures", r.argmin_failures as u64)
                .int("loss_failures", r.loss_failures as u64)
                .int("grid_failures", r.grid_failures as u64)
                .num("mc_mean", r.mc.mean)
                .num("mc_std_error", r.mc.std_error)
                .int("mc_n", r.mc.n)
                .int("seed", r.mc.seed)
                .num("mc_target", r.mc_target)
                .flag("mc_ok", r.mc_ok)
                .flag("passed", r.passed);
            if r.passed {
                Ok(report)
            } else {
                Err(Failure::Verification(report))
            }
        }
        Command::Simulate {
            scenario,
            s_e,
            n,
            seed,
        } => {
            let config = load_config(&scenario)?;
            let s = config.scenario()?;
            let n = n.unwrap_or(config.mc.n);
            let seed = seed.unwrap_or(config.mc.seed);
            progress(format!("simulate: {n} draws, seed {seed}"));
            let est = mc_expected_loss(&s, s_e, n, seed)?;
            Ok(Report::default()
                .num("sE", s_e)
                .num("mean", est.mean)
                .num("std_error", est.std_error)
                .int("n", est.n)
                .int("seed", est.seed))
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Nothing numeric is written unless the command succeeds, except the
/// report of a failed verification.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let json = cli.json;
    match execute(cli.command, cli.verbose, err) {
        Ok(report) => {
            let _ = out.write_all(report.render(json).as_bytes());
            EXIT_OK
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Verification(report)) => {
            let _ = out.write_all(report.render(json).as_bytes());
            let _ = writeln!(err, "error: closed forms disagree with the oracles");
            EXIT_VERIFY_FAILED
        }
    }
}
