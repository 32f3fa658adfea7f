//! Command-line front end.
//!
//! Exit codes: 0 success, 2 verification mismatch, 64 usage error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::closed_form::{dof_theorem1, dof_theorem1_n1_special, dof_theorem2};
use crate::config::{FdConfig, HdSplitConfig, RngSeed};
use crate::error::DofError;
use crate::figures::{figure_data, FigureName, FigureParams, DECIMAL_PLACES};
use crate::ia::{monte_carlo, DEFAULT_TOL};
use crate::lp::{solve_achievable, solve_converse};
use crate::rate::{default_power_ladder, estimate_dof_slope};
use crate::rational::Rational;
use crate::verify::{verify_grid, CHECKS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "fd-dof", version, about = "Sum DoF of full-duplex multiantenna cellular networks")]
pub struct Cli {
    /// Output format (figures default to csv, reports to text)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sum DoF of one configuration, cross-checked against both LPs
    Dof(DofArgs),
    /// Exhaustive checks over [1..B]^4
    VerifyGrid {
        #[arg(long, short = 'B', default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// Sweep data for a comparison plot
    Figure(FigureArgs),
    /// Monte-Carlo check of the single-DL-user alignment scheme
    Ia(IaArgs),
    /// DoF estimate from the high-SNR slope of the simulated sum rate
    Slope(SlopeArgs),
}

#[derive(Debug, Args)]
pub struct DofArgs {
    /// FD BS with half-duplex DL/UL users (needs -M1 -M2 -N1 -N2)
    #[arg(long, conflicts_with = "fd_users")]
    pub hd_users: bool,
    /// FD BS with full-duplex users (needs -M1 -M2 -N)
    #[arg(long)]
    pub fd_users: bool,
    #[arg(long = "m1")]
    pub m1: usize,
    #[arg(long = "m2")]
    pub m2: usize,
    #[arg(long = "n1")]
    pub n1: Option<usize>,
    #[arg(long = "n2")]
    pub n2: Option<usize>,
    #[arg(long = "n")]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// ex1 | fd-sweep | split-curve | optimal-split
    pub name: String,
    #[arg(long = "m")]
    pub m: Option<usize>,
    #[arg(long = "m1")]
    pub m1: Option<usize>,
    #[arg(long = "m2")]
    pub m2: Option<usize>,
    #[arg(long = "n")]
    pub n: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub ratio: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IaArgs {
    #[arg(long = "m1", default_value_t = 2)]
    pub m1: usize,
    #[arg(long = "m2")]
    pub m2: usize,
    #[arg(long = "n1", default_value_t = 1)]
    pub n1: usize,
    #[arg(long = "n2")]
    pub n2: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SlopeArgs {
    #[arg(long = "m1", default_value_t = 2)]
    pub m1: usize,
    #[arg(long = "m2")]
    pub m2: usize,
    #[arg(long = "n2")]
    pub n2: usize,
    /// Comma-separated transmit powers (default 1e2,1e3,...,1e10)
    #[arg(long, value_delimiter = ',')]
    pub powers: Option<Vec<f64>>,
    /// Allowed relative error of the slope against the exact DoF
    #[arg(long, default_value_t = 0.10)]
    pub tolerance: f64,
}

/// Rewrites the short antenna/user flags (`-M1 5`) to their long forms.
pub fn normalize_flags<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    args.into_iter()
        .map(|a| match a.as_str() {
            "-M" => "--m".into(),
            "-M1" => "--m1".into(),
            "-M2" => "--m2".into(),
            "-N" => "--n".into(),
            "-N1" => "--n1".into(),
            "-N2" => "--n2".into(),
            _ => a,
        })
        .collect()
}

struct Outcome {
    text: String,
    code: i32,
}

fn usage(msg: impl Into<String>) -> DofError {
    DofError::InvalidArgument(msg.into())
}

fn dec(r: &Rational) -> String {
    r.to_decimal_string(DECIMAL_PLACES)
}

fn cmd_dof(args: &DofArgs, format: Format) -> Result<Outcome, DofError> {
    if args.fd_users == args.hd_users {
        return Err(usage("choose exactly one of --hd-users or --fd-users"));
    }
    if args.fd_users {
        let n = args.n.ok_or_else(|| usage("--fd-users needs -N"))?;
        if args.n1.is_some() || args.n2.is_some() {
            return Err(usage("--fd-users takes -N, not -N1/-N2"));
        }
        let cfg = FdConfig::new(args.m1, args.m2, n);
        let value = dof_theorem2(&cfg);
        let binding = if args.m1 + args.m2 <= n { "M1+M2" } else { "N" };
        let text = match format {
            Format::Json => serde_json::to_string_pretty(&json!({
                "network": "fd-bs-fd-user",
                "config": cfg,
                "value": { "exact": value.to_fraction_string(), "decimal": dec(&value) },
                "binding": binding,
            }))
            .expect("json") + "\n",
            _ => format!(
                "network: fd-bs-fd-user (M1={}, M2={}, N={})\nsum DoF: {} (= {}, {})\nbinding: {}\n",
                cfg.m1,
                cfg.m2,
                cfg.n,
                value,
                value.to_fraction_string(),
                dec(&value),
                binding
            ),
        };
        return Ok(Outcome { text, code: EXIT_OK });
    }

    let (n1, n2) = match (args.n1, args.n2) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(usage("--hd-users needs -N1 and -N2")),
    };
    if args.n.is_some() {
        return Err(usage("--hd-users takes -N1/-N2, not -N"));
    }
    let cfg = HdSplitConfig::new(args.m1, args.m2, n1, n2);
    let closed = dof_theorem1(&cfg);
    let (ach, con) = if cfg.has_both_directions() {
        (Some(solve_achievable(&cfg)?), Some(solve_converse(&cfg)?))
    } else {
        (None, None)
    };
    let agree = match (&ach, &con) {
        (Some(a), Some(c)) => a.value == closed.value && c.value == closed.value,
        _ => true,
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "network": "fd-bs-hd-user",
            "config": cfg,
            "value": { "exact": closed.value.to_fraction_string(), "decimal": dec(&closed.value) },
            "binding": closed.binding_term.label(),
            "achievable_lp": ach,
            "converse_lp": con,
            "agree": agree,
        }))
        .expect("json") + "\n",
        _ => {
            let mut s = format!(
                "network: fd-bs-hd-user (M1={}, M2={}, N1={}, N2={})\nsum DoF: {} (= {}, {})\nbinding: {}\n",
                cfg.m1,
                cfg.m2,
                cfg.n1,
                cfg.n2,
                closed.value,
                closed.value.to_fraction_string(),
                dec(&closed.value),
                closed.binding_term
            );
            match (&ach, &con) {
                (Some(a), Some(c)) => {
                    s += &format!(
                        "achievable LP: {} at (lambda1, lambda2) = ({}, {})\n",
                        a.value, a.argmax.lambda1, a.argmax.lambda2
                    );
                    s += &format!(
                        "converse LP: {} at (d_dl, d_ul) = ({}, {})\n",
                        c.value, c.argmax.d_dl_sum, c.argmax.d_ul_sum
                    );
                }
                _ => s += "achievable LP: n/a (users in one direction only)\nconverse LP: n/a (users in one direction only)\n",
            }
            s += if agree { "LPs agree: yes\n" } else { "LPs agree: NO\n" };
            s
        }
    };
    Ok(Outcome { text, code: if agree { EXIT_OK } else { EXIT_MISMATCH } })
}

fn cmd_verify_grid(bound: usize, format: Format) -> Result<Outcome, DofError> {
    let rep = verify_grid(bound)?;
    let bad = rep.mismatched_configs();
    let text = match format {
        Format::Json => {
            let mut v = serde_json::to_value(&rep).expect("json");
            v["mismatched_configs"] = json!(bad);
            v["first_counterexample"] = json!(rep.first_counterexample());
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        _ => {
            let noun = if rep.configs == 1 { "config" } else { "configs" };
            let mut s = format!("{} {noun}, {bad} mismatches\n", rep.configs);
            for (c, name) in rep.checks.iter().zip(CHECKS) {
                s += &format!("  {name}: {} checked, {} mismatches\n", c.checked, c.mismatches);
                if let Some(cfg) = c.first_counterexample {
                    s += &format!(
                        "    first counterexample: M1={} M2={} N1={} N2={}\n",
                        cfg.m1, cfg.m2, cfg.n1, cfg.n2
                    );
                }
            }
            s += &format!(
                "observation: self-interference DoF below HD-only DoF in {} {noun}\n",
                rep.si_below_hd_only
            );
            s
        }
    };
    Ok(Outcome { text, code: if bad == 0 { EXIT_OK } else { EXIT_MISMATCH } })
}

fn cmd_figure(args: &FigureArgs, format: Format) -> Result<Outcome, DofError> {
    let name: FigureName = args.name.parse()?;
    let params = FigureParams {
        m: args.m,
        m1: args.m1,
        m2: args.m2,
        n: args.n,
        n_max: args.n_max,
        ratio: args.ratio,
    };
    let data = figure_data(name, &params);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&data.to_json()).expect("json") + "\n",
        _ => {
            let mut buf = Vec::new();
            data.write_csv(&mut buf).map_err(|e| DofError::InvalidState(e.to_string()))?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    Ok(Outcome { text, code: EXIT_OK })
}

fn cmd_ia(args: &IaArgs, trials: usize, seed: u64, format: Format) -> Result<Outcome, DofError> {
    if args.n1 != 1 {
        return Err(DofError::UnsupportedRegime(
            "only a single DL user (N1 = 1) has a finite-extension construction".into(),
        ));
    }
    let rep = monte_carlo(args.m1, args.m2, args.n2, trials, RngSeed(seed), args.tol)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("json") + "\n",
        _ => format!(
            "ia: M1={} M2={} N1=1 N2={} trials={} seed={} tol={:e}\n\
             {} failures, max residual {:.3e} (tol {:e}), symbols/slot = {}\n\
             min DL-user rank: {} / {}\nmin interference rank: {} / {}\nmin BS rank: {} / {}\n",
            rep.m1,
            rep.m2,
            rep.n2,
            rep.trials,
            rep.seed,
            rep.tol,
            rep.failures,
            rep.max_residual,
            rep.tol,
            rep.symbols_per_slot,
            rep.min_dl_rank,
            rep.n2,
            rep.min_interference_rank,
            rep.m2,
            rep.min_bs_rank,
            rep.m2 * rep.n2
        ),
    };
    Ok(Outcome { text, code: if rep.failures == 0 { EXIT_OK } else { EXIT_MISMATCH } })
}

fn cmd_slope(args: &SlopeArgs, trials: usize, seed: u64, format: Format) -> Result<Outcome, DofError> {
    let powers = args.powers.clone().unwrap_or_else(default_power_ladder);
    let est = estimate_dof_slope(args.m1, args.m2, args.n2, &powers, RngSeed(seed), trials)?;
    let expected = dof_theorem1_n1_special(args.m2, args.n2);
    let rel_err = (est.slope - expected.to_f64()).abs() / expected.to_f64();
    let within = rel_err <= args.tolerance;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "m1": args.m1, "m2": args.m2, "n2": args.n2, "trials": trials, "seed": seed,
            "estimate": est,
            "expected": { "exact": expected.to_fraction_string(), "decimal": dec(&expected) },
            "relative_error": rel_err,
            "tolerance": args.tolerance,
            "within_tolerance": within,
        }))
        .expect("json") + "\n",
        _ => {
            let mut s = format!(
                "slope: M1={} M2={} N2={} trials={} seed={}\n\
                 slope {:.6} (expected {} = {}, relative error {:.4}, tolerance {})\n\
                 intercept {:.6}, r^2 {:.6}\nwithin tolerance: {}\npower,mean_sum_rate\n",
                args.m1,
                args.m2,
                args.n2,
                trials,
                seed,
                est.slope,
                expected,
                dec(&expected),
                rel_err,
                args.tolerance,
                est.intercept,
                est.r_squared,
                if within { "yes" } else { "no" }
            );
            for (p, r) in &est.points {
                s += &format!("{p:e},{r:.6}\n");
            }
            s
        }
    };
    Ok(Outcome { text, code: if within { EXIT_OK } else { EXIT_MISMATCH } })
}

fn dispatch(cli: &Cli) -> Result<Outcome, DofError> {
    let text_default = cli.format.unwrap_or(Format::Text);
    match &cli.command {
        Command::Dof(a) => cmd_dof(a, text_default),
        Command::VerifyGrid { bound } => cmd_verify_grid(*bound as usize, text_default),
        Command::Figure(a) => cmd_figure(a, cli.format.unwrap_or(Format::Csv)),
        Command::Ia(a) => cmd_ia(a, cli.trials.unwrap_or(100), cli.seed, text_default),
        Command::Slope(a) => cmd_slope(a, cli.trials.unwrap_or(20), cli.seed, text_default),
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, O, E>(args: I, stdout: &mut O, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = String>,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(normalize_flags(args)) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            let msg = match &e {
                DofError::UnsupportedRegime(m) => format!("unsupported regime: {m}\n"),
                other => format!("error: {other}\n"),
            };
            let _ = stderr.write_all(msg.as_bytes());
            return match e {
                DofError::InvalidState(_) => EXIT_MISMATCH,
                _ => EXIT_USAGE,
            };
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(outcome.text.as_bytes())),
        None => stdout.write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_IO;
    }
    outcome.code
}

/// [`run`] against the process's own arguments and standard streams.
pub fn main_exit_code() -> i32 {
    run(std::env::args(), &mut io::stdout().lock(), &mut io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fd-dof").chain(args.iter().copied()).map(String::from);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn normalizes_short_flags() {
        let v = normalize_flags(["x", "-M1", "5", "-N", "3", "-Mx"].map(String::from));
        assert_eq!(v, vec!["x", "--m1", "5", "--n", "3", "-Mx"]);
    }

    #[test]
    fn dof_hd_users() {
        let (code, out, _) = run_args(&["dof", "--hd-users", "-M1", "5", "-M2", "5", "-N1", "12", "-N2", "12"]);
        assert_eq!(code, 0);
        assert!(out.contains("sum DoF: 10 (= 10/1, 10.000000)"), "{out}");
        assert!(out.contains("binding: M1+M2"));
        assert!(out.contains("achievable LP: 10"));
        assert!(out.contains("converse LP: 10"));
        assert!(out.contains("LPs agree: yes"));
    }

    #[test]
    fn dof_fd_users_and_zero_antennas() {
        let (code, out, _) = run_args(&["dof", "--fd-users", "-M1", "16", "-M2", "8", "-N", "20"]);
        assert_eq!(code, 0);
        assert!(out.contains("sum DoF: 20 "), "{out}");
        let (code, out, _) = run_args(&["dof", "--hd-users", "-M1", "0", "-M2", "0", "-N1", "1", "-N2", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("sum DoF: 0 "), "{out}");
    }

    #[test]
    fn dof_json() {
        let (code, out, _) = run_args(&["dof", "--hd-users", "-M1", "2", "-M2", "2", "-N1", "1", "-N2", "4", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"]["exact"], "5/2");
        assert_eq!(v["achievable_lp"]["value"], "5/2");
        assert_eq!(v["agree"], true);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["dof", "--hd-users", "-M1", "x"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["dof", "-M1", "1", "-M2", "1", "-N", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify-grid", "--bound", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["figure", "fig99"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["nope"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn verify_grid_small() {
        let (code, out, _) = run_args(&["verify-grid", "--bound", "1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("1 config, 0 mismatches\n"), "{out}");
    }

    #[test]
    fn ia_unsupported() {
        let (code, _, err) = run_args(&["ia", "-M2", "5", "-N2", "3"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("unsupported regime: M2 > N2 uses pure UL reception"), "{err}");
        assert_eq!(run_args(&["ia", "-M2", "1", "-N1", "2", "-N2", "3"]).0, EXIT_USAGE);
    }

    #[test]
    fn ia_report() {
        let (code, out, _) = run_args(&["ia", "-M2", "2", "-N2", "4", "--trials", "100", "--seed", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("0 failures"), "{out}");
        assert!(out.contains("symbols/slot = 5/2"), "{out}");
    }
}
