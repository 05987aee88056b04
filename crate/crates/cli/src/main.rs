//! `repsieve` — residue cycles of second-order linear recurrences and an
//! automated congruence-sieve prover for repdigit questions.
//!
//! Subcommands: `tables`, `period`, `residues`, `repunit-cycle`, `scan`,
//! `prove`, `verify`. Every subcommand honours `--format json|tsv|human`;
//! `tsv` output is byte-stable across runs and across thread counts.
//!
//! Exit codes: `prove` exits 0 when the certificate concludes emptiness,
//! 2 when residual constraints remain (a residual is not an error), and
//! 1 on error. `verify` exits 0 when the certificate is accepted and 1
//! otherwise. All other subcommands exit 0 on success and 1 on error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use repsieve_core::modular;
use repsieve_core::recurrence::RecurrenceSpec;
use repsieve_core::scan::{scan, ScanResult};
use repsieve_core::sieve::{
    prove, verify_certificate, Certificate, Conclusion, DigitSpec, SmallCaseBound, Step,
    Strategy, TargetForm, WindowSpec, DEFAULT_LATTICE_CAP,
};
use repsieve_core::tables::{table, TableRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Human,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    /// Apply pool moduli in the order given.
    PoolOrder,
    /// Pick, at each step, the pool modulus leaving the fewest survivors.
    Greedy,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::PoolOrder => Strategy::PoolOrder,
            StrategyArg::Greedy => Strategy::GreedySmallestSurvivor,
        }
    }
}

/// Recurrence selection shared by the inspection subcommands: either a
/// built-in name or a full inline definition.
#[derive(Args, Debug)]
struct SpecArgs {
    /// Built-in recurrence: `balancing` or `lucas_balancing`.
    #[arg(long, conflicts_with_all = ["p", "q", "seed0", "seed1"])]
    spec: Option<String>,

    /// Inline recurrence coefficient p in x_{n+1} = p·x_n + q·x_{n−1}.
    #[arg(long, allow_hyphen_values = true, requires_all = ["q", "seed0", "seed1"])]
    p: Option<i64>,

    /// Inline recurrence coefficient q.
    #[arg(long, allow_hyphen_values = true, requires_all = ["p", "seed0", "seed1"])]
    q: Option<i64>,

    /// Inline seed x_0.
    #[arg(long, allow_hyphen_values = true, requires_all = ["p", "q", "seed1"])]
    seed0: Option<i64>,

    /// Inline seed x_1.
    #[arg(long, allow_hyphen_values = true, requires_all = ["p", "q", "seed0"])]
    seed1: Option<i64>,
}

impl SpecArgs {
    fn resolve(&self) -> Result<RecurrenceSpec> {
        if let (Some(p), Some(q), Some(s0), Some(s1)) = (self.p, self.q, self.seed0, self.seed1) {
            return Ok(RecurrenceSpec {
                name: "custom".to_string(),
                coeff_p: p,
                coeff_q: q,
                seed0: s0,
                seed1: s1,
            });
        }
        let name = self.spec.as_deref().unwrap_or("balancing");
        let canonical = name.replace('-', "_");
        RecurrenceSpec::builtin(&canonical).ok_or_else(|| {
            anyhow!(
                "unknown recurrence `{name}`; use balancing, lucas_balancing, \
                 or inline --p/--q/--seed0/--seed1"
            )
        })
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "repsieve",
    version,
    about = "Residue cycles of second-order recurrences and a congruence-sieve prover for repdigit questions"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render the four classical residue-cycle tables.
    Tables {
        /// Table number 1–4; omit to render all four.
        #[arg(long)]
        which: Option<u8>,
    },
    /// Minimal period of a recurrence's residue cycle modulo `--mod`.
    Period {
        #[command(flatten)]
        spec: SpecArgs,
        /// Modulus (≥ 2).
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// One minimal period of a recurrence's residues modulo `--mod`.
    Residues {
        #[command(flatten)]
        spec: SpecArgs,
        /// Modulus (≥ 2).
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Tail and cycle of base-`g` repunit residues modulo `--mod`.
    RepunitCycle {
        /// Number base g ≥ 2.
        #[arg(long, default_value_t = 10)]
        base: u64,
        /// Modulus (≥ 2).
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Exhaustively scan window products of recurrence terms for repdigits.
    Scan {
        #[command(flatten)]
        spec: SpecArgs,
        /// Fixed window size: the product x_n ⋯ x_{n+k} of k+1 consecutive
        /// terms (k = 0 scans single terms).
        #[arg(long, conflicts_with = "all_from")]
        k: Option<u64>,
        /// Scan every window size k ≥ this bound jointly.
        #[arg(long)]
        all_from: Option<u64>,
        /// Restrict to one repdigit digit a (1 ≤ a < base).
        #[arg(long)]
        digit: Option<u64>,
        /// Number base for repdigit classification.
        #[arg(long, default_value_t = 10)]
        base: u64,
        /// Largest starting index n to scan.
        #[arg(long)]
        max_n: u64,
        /// Largest repdigit length m to classify; larger hits are reported
        /// as out-of-range. Defaults to the decimal length of the largest
        /// smallest-window product scanned, so fixed-window scans classify
        /// every value they visit.
        #[arg(long)]
        max_digits: Option<u64>,
        /// Smallest repdigit length m to report.
        #[arg(long, default_value_t = 1)]
        min_m: u64,
    },
    /// Run the congruence sieve and emit a verifiable certificate.
    Prove {
        /// Target family 1–4: (1) balancing terms vs. repdigits of length
        /// ≥ 2, (2) products of ≥ 2 consecutive balancing terms vs. the
        /// same, (3) Lucas-balancing terms vs. all repdigits, (4) products
        /// of ≥ 2 consecutive Lucas-balancing terms vs. all repdigits.
        #[arg(long)]
        eq: u8,
        /// Restrict the run to a single digit a.
        #[arg(long)]
        digit: Option<u64>,
        /// Comma-separated moduli, with ranges: `5,7,8` or `2-1000`.
        /// Defaults to the family's standard pool.
        #[arg(long)]
        pool: Option<String>,
        #[arg(long, value_enum, default_value_t = StrategyArg::PoolOrder)]
        strategy: StrategyArg,
        /// Upper bound on the joint constraint-lattice size L·M.
        #[arg(long, default_value_t = DEFAULT_LATTICE_CAP)]
        lattice_cap: u64,
        /// Small-case scan bound on the starting index n.
        #[arg(long, default_value_t = SmallCaseBound::DEFAULT.max_n)]
        max_n: u64,
        /// Small-case scan bound on the repdigit length m.
        #[arg(long, default_value_t = SmallCaseBound::DEFAULT.max_m)]
        max_m: u64,
        /// Write the certificate JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file; exit 0 iff it is accepted.
    Verify {
        /// Path to a certificate JSON file.
        path: PathBuf,
    },
}

/// Parses `5,7,8` / `2-1000` / mixtures of both, preserving order.
fn parse_pool(text: &str) -> Result<Vec<u64>> {
    let mut pool = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            bail!("empty entry in pool list `{text}`");
        }
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: u64 = lo
                    .trim()
                    .parse()
                    .with_context(|| format!("bad pool range start `{part}`"))?;
                let hi: u64 = hi
                    .trim()
                    .parse()
                    .with_context(|| format!("bad pool range end `{part}`"))?;
                if lo > hi {
                    bail!("descending pool range `{part}`");
                }
                pool.extend(lo..=hi);
            }
            None => pool.push(
                part.parse()
                    .with_context(|| format!("bad pool modulus `{part}`"))?,
            ),
        }
    }
    Ok(pool)
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn render_tables(out: &mut String, which: Option<u8>, format: Format) -> Result<()> {
    let numbers: Vec<u8> = match which {
        Some(w) => vec![w],
        None => vec![1, 2, 3, 4],
    };
    let mut rendered: Vec<(u8, Vec<TableRow>)> = Vec::new();
    for w in numbers {
        rendered.push((w, table(w)?));
    }
    match format {
        Format::Json => {
            let doc: Vec<serde_json::Value> = rendered
                .iter()
                .map(|(w, rows)| serde_json::json!({ "table": w, "rows": rows }))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Tsv => {
            writeln!(out, "table\trow\tmodulus\tperiod\tvalues\tproduct_set")?;
            for (w, rows) in &rendered {
                for row in rows {
                    writeln!(
                        out,
                        "{w}\t{}\t{}\t{}\t{}\t{}",
                        row.row_no.map(|r| r.to_string()).unwrap_or_default(),
                        row.modulus,
                        row.period.map(|p| p.to_string()).unwrap_or_default(),
                        join(&row.values),
                        row.product_set.as_deref().map(join).unwrap_or_default(),
                    )?;
                }
            }
        }
        Format::Human => {
            for (w, rows) in &rendered {
                writeln!(out, "table {w}")?;
                for row in rows {
                    let mut line = String::new();
                    if let Some(r) = row.row_no {
                        write!(line, "  row {r}: ")?;
                    } else {
                        line.push_str("  ");
                    }
                    write!(line, "mod {}", row.modulus)?;
                    if let Some(p) = row.period {
                        write!(line, " (period {p})")?;
                    }
                    write!(line, ": {}", join(&row.values))?;
                    if let Some(set) = &row.product_set {
                        write!(line, " | products: {}", join(set))?;
                    }
                    writeln!(out, "{line}")?;
                }
            }
        }
    }
    Ok(())
}

fn render_scan(out: &mut String, result: &ScanResult, format: Format) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(result)?)?,
        Format::Tsv => {
            writeln!(out, "kind\tn\tm\ta\tvalue")?;
            for h in &result.hits {
                writeln!(out, "hit\t{}\t{}\t{}\t{}", h.n, h.m, h.a, h.value)?;
            }
            for o in &result.out_of_range {
                writeln!(out, "out_of_range\t{}\t{}\t{}\t", o.n, o.m, o.a)?;
            }
        }
        Format::Human => {
            if result.hits.is_empty() && result.out_of_range.is_empty() {
                writeln!(out, "no repdigit values found")?;
            }
            for h in &result.hits {
                writeln!(out, "hit: n={} m={} a={} value={}", h.n, h.m, h.a, h.value)?;
            }
            for o in &result.out_of_range {
                writeln!(out, "out of range: n={} m={} a={}", o.n, o.m, o.a)?;
            }
        }
    }
    Ok(())
}

fn describe_step(step: &Step) -> String {
    match step {
        Step::ResidueIntersection { modulus, state_after, .. } => {
            format!("mod {modulus} -> {} classes", state_after.feasible.len())
        }
        Step::DivisibilityCascade { divisor_d, prime_p, state_after, .. } => format!(
            "cascade d={divisor_d} p={prime_p} -> {} classes",
            state_after.feasible.len()
        ),
        Step::WindowExtension { base_window, modulus, .. } => {
            format!("window extension k>={base_window} mod {modulus} -> 0 classes")
        }
    }
}

fn render_certificate(out: &mut String, cert: &Certificate, format: Format) -> Result<()> {
    match format {
        Format::Json => out.push_str(&cert.to_json()),
        Format::Tsv => {
            writeln!(out, "digit\twindow\tsteps\tsurvivors")?;
            for sp in &cert.subproofs {
                for br in &sp.branches {
                    let steps: Vec<String> = br
                        .steps
                        .iter()
                        .map(|s| s.modulus_label().to_string())
                        .collect();
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}",
                        sp.digit,
                        br.window,
                        steps.join(","),
                        br.final_state.feasible.len()
                    )?;
                }
            }
            for e in &cert.exceptions {
                writeln!(out, "exception\t{}\t{}\t{}", e.n, e.m, e.a)?;
            }
            match &cert.conclusion {
                Conclusion::Empty => writeln!(out, "conclusion\tempty")?,
                Conclusion::Residual { residual } => {
                    writeln!(out, "conclusion\tresidual\t{}", residual.len())?
                }
            }
        }
        Format::Human => {
            for sp in &cert.subproofs {
                for br in &sp.branches {
                    let steps: Vec<String> = br.steps.iter().map(describe_step).collect();
                    let end = if br.final_state.is_empty() { "empty" } else { "open" };
                    writeln!(
                        out,
                        "digit {} ({}): {} [{end}]",
                        sp.digit,
                        br.window,
                        steps.join("; ")
                    )?;
                }
            }
            if cert.exceptions.is_empty() {
                writeln!(out, "exceptions: none")?;
            } else {
                let list: Vec<String> = cert
                    .exceptions
                    .iter()
                    .map(|e| format!("(n={}, m={}, a={})", e.n, e.m, e.a))
                    .collect();
                writeln!(out, "exceptions: {}", list.join(" "))?;
            }
            match &cert.conclusion {
                Conclusion::Empty => {
                    writeln!(out, "conclusion: empty beyond the listed exceptions")?
                }
                Conclusion::Residual { residual } => {
                    writeln!(out, "conclusion: residual — unresolved classes remain")?;
                    for r in residual {
                        writeln!(
                            out,
                            "  digit {} ({}): L={} M={} classes={:?}",
                            r.digit,
                            r.window,
                            r.state.l,
                            r.state.m,
                            r.state.feasible.iter().collect::<Vec<_>>()
                        )?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_prove(
    out: &mut String,
    eq: u8,
    digit: Option<u64>,
    pool: Option<String>,
    strategy: StrategyArg,
    lattice_cap: u64,
    max_n: u64,
    max_m: u64,
    out_path: Option<PathBuf>,
    format: Format,
) -> Result<u8> {
    let mut target = TargetForm::family(eq)?;
    if let Some(a) = digit {
        target = target.with_digit(a);
    }
    let pool = match pool {
        Some(text) => parse_pool(&text)?,
        None => TargetForm::default_pool(eq)?,
    };
    let bound = SmallCaseBound { max_n, max_m };
    let cert = prove(&target, &pool, strategy.into(), lattice_cap, bound)?;
    if let Some(path) = &out_path {
        std::fs::write(path, cert.to_json())
            .with_context(|| format!("writing certificate to {}", path.display()))?;
        if format == Format::Human {
            writeln!(out, "certificate written to {}", path.display())?;
        }
    }
    render_certificate(out, &cert, format)?;
    Ok(if cert.claims_empty() { 0 } else { 2 })
}

fn cmd_verify(out: &mut String, path: &PathBuf, format: Format) -> Result<u8> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading certificate {}", path.display()))?;
    let cert = Certificate::from_json(&text).context("certificate does not parse")?;
    let outcome = verify_certificate(&cert);
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&outcome)?)?,
        Format::Tsv => match &outcome.divergence {
            None => writeln!(out, "accepted")?,
            Some(d) => writeln!(out, "rejected\t{}\t{}", d.field, d.detail)?,
        },
        Format::Human => match &outcome.divergence {
            None => writeln!(out, "accepted")?,
            Some(d) => {
                let mut place = String::new();
                if let Some(a) = d.digit {
                    write!(place, " digit {a}")?;
                }
                if let Some(b) = d.branch {
                    write!(place, " branch {b}")?;
                }
                if let Some(s) = d.step {
                    write!(place, " step {s}")?;
                }
                writeln!(out, "rejected at{place}: {} — {}", d.field, d.detail)?;
            }
        },
    }
    Ok(if outcome.accepted { 0 } else { 1 })
}

/// Default classification ceiling for `scan`: the decimal-digit count of the
/// largest smallest-window product the scan will visit.
fn default_max_digits(spec: &RecurrenceSpec, min_k: u64, max_n: u64) -> Result<u64> {
    let largest = spec.consecutive_product(max_n.max(1), min_k)?;
    Ok(largest.to_string().trim_start_matches('-').len() as u64)
}

fn run(cli: Cli, out: &mut String) -> Result<u8> {
    let format = cli.format;
    match cli.command {
        Command::Tables { which } => {
            render_tables(out, which, format)?;
            Ok(0)
        }
        Command::Period { spec, modulus } => {
            let cycle = modular::residue_cycle(&spec.resolve()?, modulus)?;
            match format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({ "modulus": modulus, "period": cycle.period })
                )?,
                Format::Tsv => writeln!(out, "{modulus}\t{}", cycle.period)?,
                Format::Human => writeln!(out, "{}", cycle.period)?,
            }
            Ok(0)
        }
        Command::Residues { spec, modulus } => {
            let cycle = modular::residue_cycle(&spec.resolve()?, modulus)?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&cycle)?)?,
                Format::Tsv => {
                    writeln!(out, "{modulus}\t{}\t{}", cycle.period, join(&cycle.values))?
                }
                Format::Human => writeln!(out, "{}", join(&cycle.values))?,
            }
            Ok(0)
        }
        Command::RepunitCycle { base, modulus } => {
            let cycle = modular::repunit_cycle(base, modulus)?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&cycle)?)?,
                Format::Tsv => writeln!(
                    out,
                    "{base}\t{modulus}\t{}\t{}",
                    join(&cycle.tail),
                    join(&cycle.values)
                )?,
                Format::Human => writeln!(
                    out,
                    "tail: [{}] cycle: [{}]",
                    join(&cycle.tail),
                    join(&cycle.values)
                )?,
            }
            Ok(0)
        }
        Command::Scan { spec, k, all_from, digit, base, max_n, max_digits, min_m } => {
            let recurrence = spec.resolve()?;
            let window = match (k, all_from) {
                (Some(k), None) => WindowSpec::Fixed { k },
                (None, Some(min_k)) => WindowSpec::AllFrom { min_k },
                (None, None) => WindowSpec::Fixed { k: 0 },
                (Some(_), Some(_)) => unreachable!("clap forbids --k with --all-from"),
            };
            let digit_spec = match digit {
                Some(a) => DigitSpec::Fixed(a),
                None => DigitSpec::All,
            };
            let max_digits = match max_digits {
                Some(d) => d,
                None => default_max_digits(&recurrence, window.min_k(), max_n)?,
            };
            let target = TargetForm {
                spec: recurrence,
                window,
                digit: digit_spec,
                base_g: base,
                min_m,
                min_n: 1,
            };
            let result = scan(&target, max_n, max_digits)?;
            render_scan(out, &result, format)?;
            Ok(0)
        }
        Command::Prove { eq, digit, pool, strategy, lattice_cap, max_n, max_m, out: out_path } => {
            cmd_prove(
                out,
                eq,
                digit,
                pool,
                strategy,
                lattice_cap,
                max_n,
                max_m,
                out_path,
                format,
            )
        }
        Command::Verify { path } => cmd_verify(out, &path, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let mut out = String::new();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    // One buffered write; a closed pipe downstream is not our error.
    use std::io::Write as _;
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
