//! Command-line surface: expansion, grid operators, lifts, identity checks,
//! worked examples, and newform-record access.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage/input error,
//! 3 environment (network/cache/io) error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use qlift::forms::{eta_quotient_series, fixtures_examples, named_series, EtaQuotient};
use qlift::lmfdb::{fetch_with, FetchOptions};
use qlift::shimura::{s_eta, sh_theta, LiftSpec, LiftVariant};
use qlift::verify::{check_example, run_selected, CheckStatus, Eigen};
use qlift::{Error, RealChar, Series24};

#[derive(Parser)]
#[command(
    name = "qlift",
    version,
    about = "Exact q-expansion toolkit: eta quotients, half-integral lifts, identity checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the q-expansion of a product literal
    ///
    /// A literal is a '*'-separated product of `eta(d)^e` factors and named
    /// forms: E4, E6, delta, eta, theta:even:1..6, theta:odd:1..6, or
    /// fixture entries ex1.f0..f3, ex1.g1..g4, ex1.input (same for ex2).
    Expand {
        /// e.g. "eta(1)^24", "eta(1)^5 * E4", "theta:odd:1", "ex1.f0"
        literal: String,
        /// Grid precision (universal q^(1/24) indices), at least 24
        #[arg(long, default_value_t = 120)]
        prec: u64,
        /// Write the output to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply grid operators to an expansion, left to right
    Op {
        /// Product literal, as for `expand`
        literal: String,
        /// Operators: U<m>, V<m>, theta, twist<d> (e.g. U2 V3 twist-4 theta)
        #[arg(required = true)]
        ops: Vec<String>,
        #[arg(long, default_value_t = 120)]
        prec: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a half-integral-weight input to the integer-weight series
    Lift {
        /// Product literal of odd total weight2, e.g. "eta(1)^5 * E4"
        literal: String,
        /// Square-free lift index
        #[arg(long, default_value_t = 1)]
        t: u64,
        /// Multiplier family: theta, eta24, eta8
        #[arg(long, default_value = "eta24")]
        variant: String,
        #[arg(long, default_value_t = 2400)]
        prec: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run identity checks; one tab-separated line per check:
    /// id<TAB>status<TAB>verified-through<TAB>millis
    Verify {
        /// all | T13[:case] | T14[:part] | T15[:ex1|:custom:<r>] | T16[:ex2]
        /// | T17[:case[:wN]] | selberg | theta[:even:N|:odd:N]
        /// | comm24[:part[:param]] | comm8[...] | bridge[:24|:8]
        /// | lmfdb[:label]
        #[arg(default_value = "all")]
        selector: String,
        #[arg(long, default_value_t = 2400)]
        prec: u64,
        /// Eigenform for the families that take one: delta, E4, E6
        #[arg(long, default_value = "delta")]
        g: String,
        /// Run independent checks on worker threads
        #[arg(long)]
        parallel: bool,
        /// Append a wall-clock millis column (output no longer byte-stable)
        #[arg(long)]
        timings: bool,
    },
    /// Reproduce one worked example end to end (pipeline + database check)
    Example {
        /// 1 or 2
        which: u8,
        #[arg(long, default_value_t = 2400)]
        prec: u64,
        /// Append a wall-clock millis column (output no longer byte-stable)
        #[arg(long)]
        timings: bool,
    },
    /// Print coefficients of a newform record (bundled or cached)
    Fetch {
        /// e.g. 6.12.a.a
        label: String,
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Allow a network download on cache miss
        #[arg(long)]
        network: bool,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Network(_) | Error::NetworkDisabled | Error::Io(_)
                | Error::CacheParse { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32, Error> {
    match cmd {
        Cmd::Expand { literal, prec, out } => {
            check_prec(prec)?;
            let (series, _) = parse_literal(&literal, prec)?;
            emit(&format!("{series}"), out.as_deref())?;
            Ok(0)
        }
        Cmd::Op {
            literal,
            ops,
            prec,
            out,
        } => {
            check_prec(prec)?;
            let (series, _) = parse_literal(&literal, prec)?;
            let series = apply_ops(series, &ops)?;
            emit(&format!("{series}"), out.as_deref())?;
            Ok(0)
        }
        Cmd::Lift {
            literal,
            t,
            variant,
            prec,
            out,
        } => {
            check_prec(prec)?;
            let variant = parse_variant(&variant)?;
            let (f, weight2) = parse_literal(&literal, prec)?;
            if weight2.rem_euclid(2) == 0 {
                return Err(Error::Usage(format!(
                    "lift input must have half-integral weight; {literal:?} has weight {}",
                    weight2 / 2
                )));
            }
            let kappa = (weight2 - 1) / 2;
            let spec = LiftSpec::new(t, kappa, RealChar::trivial(), variant)?;
            let lift = match variant {
                LiftVariant::Theta => sh_theta(&f, &spec)?,
                _ => s_eta(&f, &spec)?,
            };
            emit(&format!("{lift}"), out.as_deref())?;
            Ok(0)
        }
        Cmd::Verify {
            selector,
            prec,
            g,
            parallel,
            timings,
        } => {
            check_prec(prec)?;
            let g = Eigen::parse(&g)?;
            let reports = run_selected(&selector, g, prec, parallel)?;
            let (text, failed) = render_reports(&reports, timings);
            emit_raw(&text);
            Ok(if failed { 1 } else { 0 })
        }
        Cmd::Example {
            which,
            prec,
            timings,
        } => {
            check_prec(prec)?;
            let reports = check_example(which, prec)?;
            let (mut text, failed) = render_reports(&reports, timings);
            if !failed {
                let cat = fixtures_examples(26);
                let fx = if which == 1 { cat.ex1 } else { cat.ex2 };
                let coords: Vec<String> = fx.alphas.iter().map(|a| a.to_string()).collect();
                text.push_str(&format!("coordinates: {}\n", coords.join(", ")));
            }
            emit_raw(&text);
            Ok(if failed { 1 } else { 0 })
        }
        Cmd::Fetch {
            label,
            count,
            network,
        } => {
            let opts = if network {
                FetchOptions::network()
            } else {
                FetchOptions::offline()
            };
            let record = fetch_with(&label, count, &opts)?;
            let mut text = format!(
                "{} weight={} level={} coefficients={}\n",
                record.label,
                record.weight,
                record.level,
                record.count()
            );
            for (i, c) in record.coeffs().iter().enumerate() {
                text.push_str(&format!("a({})\t{}\n", i + 1, c));
            }
            emit_raw(&text);
            Ok(0)
        }
    }
}

/// One line per report; returns the block and whether any check failed.
fn render_reports(reports: &[qlift::verify::CheckReport], timings: bool) -> (String, bool) {
    let mut text = String::new();
    let mut failed = false;
    for r in reports {
        text.push_str(&if timings { r.line() } else { r.line_stable() });
        text.push('\n');
        if matches!(r.status, CheckStatus::Fail { .. }) {
            failed = true;
        }
    }
    (text, failed)
}

fn check_prec(prec: u64) -> Result<(), Error> {
    if prec < 24 {
        return Err(Error::Usage(format!(
            "precision {prec} is below 24 (one integer coefficient)"
        )));
    }
    Ok(())
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => emit_raw(&format!("{text}\n")),
    }
    Ok(())
}

/// Write to stdout; a closed pipe downstream ends the process quietly,
/// any other write failure is an environment error.
fn emit_raw(text: &str) {
    use std::io::Write;
    let mut so = std::io::stdout().lock();
    let res = so.write_all(text.as_bytes()).and_then(|()| so.flush());
    if let Err(e) = res {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(3);
    }
}

fn parse_variant(s: &str) -> Result<LiftVariant, Error> {
    match s {
        "theta" => Ok(LiftVariant::Theta),
        "eta24" => Ok(LiftVariant::Eta24),
        "eta8" => Ok(LiftVariant::Eta8),
        other => Err(Error::Usage(format!(
            "unknown variant {other:?} (expected theta, eta24 or eta8)"
        ))),
    }
}

/// Twice the weight of a named form.
fn named_weight2(name: &str) -> Result<i64, Error> {
    Ok(match name {
        "E4" | "e4" => 8,
        "E6" | "e6" => 12,
        "delta" => 24,
        "eta" => 1,
        _ if name.starts_with("theta:even:") => 1,
        _ if name.starts_with("theta:odd:") => 3,
        "ex1.input" => 13,
        "ex2.input" => 21,
        _ if name.starts_with("ex1.") => 12,
        _ if name.starts_with("ex2.") => 20,
        other => return Err(Error::UnknownLabel(other.to_string())),
    })
}

/// Parse a '*'-separated product of eta factors and named forms; returns
/// the expansion and twice its weight.
fn parse_literal(s: &str, prec: u64) -> Result<(Series24, i64), Error> {
    let mut eta_factors: Vec<(u64, i64)> = Vec::new();
    let mut named: Vec<(Series24, i64)> = Vec::new();
    for raw in s.split('*') {
        let term = raw.trim();
        if term.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "empty factor in product literal".into(),
            });
        }
        if term == "1" {
            continue;
        }
        if term.starts_with("eta(") {
            let quo: EtaQuotient = term.parse()?;
            eta_factors.extend_from_slice(quo.factors());
        } else {
            let w2 = named_weight2(term)?;
            named.push((named_series(term, prec)?, w2));
        }
    }
    let quo = EtaQuotient::new(&eta_factors);
    let mut weight2 = quo.weight2();
    let mut series = eta_quotient_series(&quo, prec)?;
    for (f, w2) in named {
        series = &series * &f;
        weight2 += w2;
    }
    Ok((series, weight2))
}

/// Apply operators left to right: `U<m>`, `V<m>`, `theta`, `twist<d>`.
fn apply_ops(mut f: Series24, ops: &[String]) -> Result<Series24, Error> {
    for op in ops {
        let op = op.trim();
        if op == "theta" {
            f = f.op_theta();
        } else if let Some(m) = op.strip_prefix('U').and_then(|x| x.parse::<u64>().ok()) {
            if m == 0 {
                return Err(Error::Usage("U index must be positive".into()));
            }
            f = f.op_u_class(m);
        } else if let Some(m) = op.strip_prefix('V').and_then(|x| x.parse::<u64>().ok()) {
            if m == 0 {
                return Err(Error::Usage("V index must be positive".into()));
            }
            f = f.op_v(m);
        } else if let Some(d) = op.strip_prefix("twist").and_then(|x| x.parse::<i64>().ok()) {
            if d == 0 {
                return Err(Error::Usage("twist discriminant must be nonzero".into()));
            }
            let stride = f.stride().max(1);
            f = f.twist(&RealChar::kron(d), stride);
        } else {
            return Err(Error::Usage(format!(
                "unknown operator {op:?} (expected U<m>, V<m>, theta, twist<d>)"
            )));
        }
    }
    Ok(f)
}
