//! Command-line front end. [`run`] parses arguments, dispatches, and maps
//! outcomes to exit codes.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constants::{
    brute_force_modified_constant, conjecture_value, formula_modified_cyclic,
    formula_modified_square, parse_list, verify_theorem, ConstantReport, Por2pReport,
    PropertyReport, SearchConfig, SearchStrategy, Suite, SuiteRow, VerifyOutcome,
    VerifyParams, DEFAULT_WINDOW,
};
use crate::engine::{count_zero_sum_subseqs, find_zero_sum_subseq, CountValue, TargetLengths};
use crate::error::{Error, Result};
use crate::extremal::{
    build_cyclic_extremal, build_power2_extremal, build_square_extremal, validate_extremal,
};
use crate::group::{min_nondivisor, Group};
use crate::proofs::{
    extract_cyclic_block, extract_cyclic_nt, extract_square_3n, extract_square_block,
    extract_square_n,
};
use crate::sequence::{Sequence, Witness};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "zerosum", version, about = "Zero-sum subsequences over finite abelian groups")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Reduce out-of-range residues instead of rejecting them.
    #[arg(long, global = true)]
    pub lenient: bool,
    /// Seed for sampling modes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for `constant` and `verify`.
    #[arg(long, global = true, env = "ZEROSUM_WORKERS")]
    pub workers: Option<usize>,
    /// Search budget in visited nodes.
    #[arg(long, global = true, env = "ZEROSUM_BUDGET")]
    pub budget: Option<u64>,
    /// Wall-clock limit for searches, in seconds.
    #[arg(long, global = true)]
    pub timeout: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct SeqInput {
    /// Group, e.g. `Z/6`, `Z/3^2`, `Z/2xZ/4`.
    #[arg(long)]
    pub group: Option<String>,
    /// Inline sequence: `0^4 1^2` with `--group`, or `Z/3: 0^4 1^2`.
    #[arg(long, conflicts_with = "seq_file")]
    pub seq: Option<String>,
    /// Sequence file in text or JSON form; `-` reads standard input.
    #[arg(long)]
    pub seq_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Block,
    Nt,
    Square3n,
    Squareblock,
    Dp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Cyclic,
    Square,
    Power2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claimed {
    Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Pruned,
    Enumerate,
    Symmetric,
}

impl From<StrategyArg> for SearchStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Pruned => SearchStrategy::Pruned,
            StrategyArg::Enumerate => SearchStrategy::Enumerate { symmetry: false },
            StrategyArg::Symmetric => SearchStrategy::Enumerate { symmetry: true },
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find a zero-sum subsequence of length K.
    Detect {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long)]
        k: usize,
    },
    /// Count zero-sum subsequences of length K, optionally modulo M.
    Count {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long)]
        k: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Extract a zero-sum subsequence of length exp(G)*T along a proof.
    Extract {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Block size for `block`/`squareblock`; inferred from the length by default.
        #[arg(long)]
        d: Option<u64>,
    },
    /// Build and validate an extremal sequence.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Determine s'_T(G) by exhaustive search.
    Constant {
        #[arg(long)]
        group: String,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long, value_enum)]
        claimed_from: Option<Claimed>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Pruned)]
        strategy: StrategyArg,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Values of n: `2..8`, `2..=8`, `5`, or `2,3,4,6`.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        /// Lemma (3n) sizes up to this n are enumerated in full.
        #[arg(long)]
        exhaustive_max: Option<u64>,
        /// Include the larger square case.
        #[arg(long)]
        extended: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::Pruned)]
        strategy: StrategyArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Cyclic,
    Square,
    Egz,
    Reiher,
    Lemma3n,
    Por2p,
    Conjecture,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Cyclic => Suite::Cyclic,
            SuiteArg::Square => Suite::Square,
            SuiteArg::Egz => Suite::Egz,
            SuiteArg::Reiher => Suite::Reiher,
            SuiteArg::Lemma3n => Suite::Lemma3n,
            SuiteArg::Por2p => Suite::Por2p,
            SuiteArg::Conjecture => Suite::Conjecture,
        }
    }
}

/// Rendered result of a subcommand.
struct Output {
    json: Value,
    text: String,
    csv: Option<String>,
    code: i32,
}

/// Runs the CLI on `args` (program name first). Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(err, "ERROR:usage:{first}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let body = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&o.json).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Csv => o.csv.unwrap_or_else(|| csv_from_json(&o.json)),
                Format::Text => o.text,
            };
            let _ = out.write_all(body.as_bytes());
            o.code
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "ERROR:{}:{msg}", e.kind());
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted(_) => EXIT_BUDGET,
        Error::InvariantViolated(_) | Error::NotZeroSum | Error::Containment => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Detect { input, k } => detect(cli, input, *k),
        Command::Count { input, k, modulus } => count(cli, input, *k, *modulus),
        Command::Extract { input, t, method, d } => extract(cli, input, *t, *method, *d),
        Command::Construct { family, n, t, r } => construct(*family, *n, *t, *r),
        Command::Constant {
            group,
            t,
            window,
            claimed_from,
            strategy,
        } => constant(cli, group, *t, *window, *claimed_from, *strategy),
        Command::Verify {
            suite,
            n,
            t,
            r,
            p,
            window,
            samples,
            exhaustive_max,
            extended,
            strategy,
        } => {
            let params = VerifyParams {
                n: n.as_deref().map(parse_list::<u64>).transpose()?,
                t: t.as_deref().map(parse_list::<u64>).transpose()?,
                r: r.as_deref().map(parse_list::<u32>).transpose()?,
                p: p.as_deref().map(parse_list::<u64>).transpose()?,
                window: *window,
                samples: *samples,
                seed: cli.seed,
                exhaustive_max_n: *exhaustive_max,
                extended: *extended,
            };
            let config = search_config(cli, *strategy);
            let outcome = verify_theorem((*suite).into(), &params, &config)?;
            Ok(verify_output(&outcome))
        }
    }
}

fn search_config(cli: &Cli, strategy: StrategyArg) -> SearchConfig {
    let mut config = SearchConfig {
        strategy: strategy.into(),
        ..SearchConfig::default()
    };
    if let Some(w) = cli.workers {
        config.workers = w.max(1);
    }
    if let Some(b) = cli.budget {
        config.budget.max_visited = b;
    }
    if let Some(s) = cli.timeout {
        config.budget.max_wall = Duration::from_secs(s);
    }
    config
}

/// Loads the input sequence from `--seq` or `--seq-file`.
pub fn read_sequence(input: &SeqInput, lenient: bool) -> Result<Sequence> {
    let text = match (&input.seq, &input.seq_file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) if path.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            s
        }
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
        (None, None) => return Err(Error::Parse("one of --seq or --seq-file is required".into())),
    };
    let group = input.group.as_deref().map(str::parse::<Group>).transpose()?;
    let text = text.trim();
    let seq = if text.starts_with('{') {
        Sequence::from_json(text)?
    } else if text.contains(':') {
        Sequence::parse(text, lenient)?
    } else {
        let g = group
            .clone()
            .ok_or_else(|| Error::Parse("--group is required for a bare sequence body".into()))?;
        Sequence::parse_body(&g, text, lenient)?
    };
    if let Some(g) = group {
        if &g != seq.group() {
            return Err(Error::Parse(format!(
                "sequence is over {} but --group is {g}",
                seq.group()
            )));
        }
    }
    Ok(seq)
}

fn envelope(command: &str, mut body: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    if let Value::Object(m) = body.take() {
        obj.extend(m);
    }
    Value::Object(obj)
}

fn count_json(v: &CountValue) -> Value {
    match v {
        CountValue::Exact(n) => json!({ "exact": n.to_string() }),
        CountValue::Residue { value, modulus } => json!({ "residue": value, "modulus": modulus }),
    }
}

fn detect(cli: &Cli, input: &SeqInput, k: usize) -> Result<Output> {
    let seq = read_sequence(input, cli.lenient)?;
    let w = find_zero_sum_subseq(&seq, k)?;
    let text = match &w {
        Some(w) => format!("{}\n", w.as_sequence().to_text()),
        None => "none\n".to_string(),
    };
    let json = envelope(
        "detect",
        json!({
            "sequence": seq,
            "k": k,
            "found": w.is_some(),
            "witness": w,
        }),
    );
    let csv = format!(
        "group,k,found,witness\n{},{k},{},{}\n",
        seq.group(),
        w.is_some(),
        csv_field(&w.as_ref().map(|w| w.as_sequence().body_text()).unwrap_or_default())
    );
    Ok(Output {
        json,
        text,
        csv: Some(csv),
        code: EXIT_OK,
    })
}

fn count(cli: &Cli, input: &SeqInput, k: usize, modulus: Option<u64>) -> Result<Output> {
    let seq = read_sequence(input, cli.lenient)?;
    let c = count_zero_sum_subseqs(&seq, k, modulus)?;
    let json = envelope(
        "count",
        json!({ "sequence": seq, "k": k, "count": count_json(&c.value) }),
    );
    let (value, m) = match &c.value {
        CountValue::Exact(v) => (v.to_string(), String::new()),
        CountValue::Residue { value, modulus } => (value.to_string(), modulus.to_string()),
    };
    Ok(Output {
        json,
        text: format!("{c}\n"),
        csv: Some(format!("group,k,count,modulus\n{},{k},{value},{m}\n", seq.group())),
        code: EXIT_OK,
    })
}

fn extract(cli: &Cli, input: &SeqInput, t: u64, method: Method, d: Option<u64>) -> Result<Output> {
    let seq = read_sequence(input, cli.lenient)?;
    if t == 0 {
        return Err(Error::Precondition("t must be >= 1".into()));
    }
    let g = seq.group();
    let n = g.exponent();
    let k = (n * t) as usize;
    let len = seq.len() as u64;
    let cyclic = g.rank() == 1;
    let square = g.rank() == 2 && g.homogeneous_modulus().is_some();
    let need_single = |name: &str| {
        if t == 1 {
            Ok(())
        } else {
            Err(Error::Precondition(format!("method {name} extracts length n only (t = 1)")))
        }
    };
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("method requires a group of the form {what}")))
        }
    };
    let (used, w): (&str, Witness) = match method {
        Method::Dp => ("dp", dp_witness(&seq, k)?),
        Method::Nt => {
            need(cyclic, "Z/n")?;
            ("nt", extract_cyclic_nt(&seq, t)?)
        }
        Method::Block => {
            need(cyclic, "Z/n")?;
            need_single("block")?;
            let d = d.unwrap_or_else(|| (2 * n).saturating_sub(len));
            ("block", extract_cyclic_block(&seq, d)?)
        }
        Method::Square3n => {
            need(square, "(Z/n)^2")?;
            need_single("square3n")?;
            ("square3n", extract_square_3n(&seq)?)
        }
        Method::Squareblock => {
            need(square, "(Z/n)^2")?;
            need_single("squareblock")?;
            let d = d.unwrap_or_else(|| (4 * n).saturating_sub(len));
            ("squareblock", extract_square_block(&seq, d)?)
        }
        Method::Auto => {
            let zero_sum = seq.is_zero_sum();
            if cyclic && zero_sum && len + min_nondivisor(n, 1) > (t + 1) * n {
                ("nt", extract_cyclic_nt(&seq, t)?)
            } else if square && zero_sum && t == 1 && len == 3 * n {
                ("square3n", extract_square_3n(&seq)?)
            } else if square && zero_sum && t == 1 && len + min_nondivisor(n, 4) > 4 * n {
                ("squaren", extract_square_n(&seq)?)
            } else {
                ("dp", dp_witness(&seq, k)?)
            }
        }
    };
    let validated = w.validates(&seq, k);
    let json = envelope(
        "extract",
        json!({
            "sequence": seq,
            "t": t,
            "k": k,
            "method": used,
            "witness": w,
            "validated": validated,
        }),
    );
    let text = format!("{}\nmethod: {used}, size: {}, validated: {validated}\n", w.as_sequence().to_text(), w.size());
    let csv = format!(
        "group,k,method,witness,validated\n{},{k},{used},{},{validated}\n",
        seq.group(),
        csv_field(&w.as_sequence().body_text())
    );
    Ok(Output {
        json,
        text,
        csv: Some(csv),
        code: if validated { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn dp_witness(seq: &Sequence, k: usize) -> Result<Witness> {
    find_zero_sum_subseq(seq, k)?.ok_or_else(|| {
        Error::InvariantViolated(format!("no zero-sum subsequence of length {k}"))
    })
}

fn construct(family: Family, n: u64, t: u64, r: usize) -> Result<Output> {
    let (seq, forbidden) = match family {
        Family::Cyclic => (build_cyclic_extremal(n, t)?, n * t),
        Family::Square => (build_square_extremal(n)?, n),
        Family::Power2 => {
            if !n.is_power_of_two() || n < 2 {
                return Err(Error::Precondition(format!("power2 needs n = 2^k (got {n})")));
            }
            (build_power2_extremal(n.trailing_zeros(), r)?, n)
        }
    };
    let forbidden = TargetLengths::single(forbidden as usize)?;
    let report = validate_extremal(&seq, &forbidden);

    let family_name = match family {
        Family::Cyclic => "cyclic",
        Family::Square => "square",
        Family::Power2 => "power2",
    };
    let json = envelope(
        "construct",
        json!({ "family": family_name, "n": n, "t": t, "r": r, "sequence": seq, "validation": report }),
    );
    let text = format!(
        "{}\nlength: {}, zero_sum: {}, forbidden: {:?}, forbidden_witness: {}, valid: {}\n",
        seq.to_text(),
        report.length,
        report.zero_sum,
        report.forbidden,
        report.has_forbidden_witness,
        report.valid
    );
    let csv = format!(
        "family,group,length,zero_sum,forbidden_witness,valid,sequence\n{family_name},{},{},{},{},{},{}\n",
        seq.group(),
        report.length,
        report.zero_sum,
        report.has_forbidden_witness,
        report.valid,
        csv_field(&seq.body_text())
    );
    Ok(Output {
        json,
        text,
        csv: Some(csv),
        code: if report.valid { EXIT_OK } else { EXIT_VIOLATION },
    })
}

/// The closed-form value, where one is known for `(group, t)`.
pub fn claimed_by_formula(group: &Group, t: usize) -> Result<u64> {
    let t = t as u64;
    let none = || Error::Precondition(format!("no closed form for s'_{t}({group})"));
    let n = group.homogeneous_modulus().ok_or_else(none)?;
    match group.rank() {
        1 if t % n == 0 => Ok(formula_modified_cyclic(n, t / n)),
        2 if t == n => Ok(formula_modified_square(n)),
        r if n == 2 && t == 2 => conjecture_value(2, r as u32),
        _ => Err(none()),
    }
}

fn constant(
    cli: &Cli,
    group: &str,
    t: usize,
    window: usize,
    claimed_from: Option<Claimed>,
    strategy: StrategyArg,
) -> Result<Output> {
    let group: Group = group.parse()?;
    let claimed = match claimed_from {
        Some(Claimed::Formula) => Some(claimed_by_formula(&group, t)?),
        None => None,
    };
    let config = search_config(cli, strategy);
    let report = brute_force_modified_constant(&group, t, window, claimed, &config)?;
    let code = if report.is_match() && report.extremal_check.valid {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    let json = envelope("constant", json!({ "report": report }));
    let mut text = String::new();
    text.push_str(&constant_line(&report));
    text.push('\n');
    Ok(Output {
        json,
        text,
        csv: Some(format!("{CSV_HEADER}\n{}\n", constant_csv(&report))),
        code,
    })
}

const CSV_HEADER: &str =
    "kind,group,t,claimed,computed,status,window_lo,window_hi,witness,wall_ms,sequences_checked";

fn constant_line(r: &ConstantReport) -> String {
    let claimed = r.claimed_value.map_or("-".to_string(), |c| c.to_string());
    format!(
        "{} t={} claimed={claimed} computed={} {} window=[{},{}] witness={} wall_ms={}",
        r.group,
        r.t,
        r.computed_value,
        status_name(r),
        r.verified_window[0],
        r.verified_window[1],
        r.extremal_witness.body_text(),
        r.wall_ms
    )
}

fn status_name(r: &ConstantReport) -> String {
    serde_json::to_value(r.status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn constant_csv(r: &ConstantReport) -> String {
    format!(
        "constant,{},{},{},{},{},{},{},{},{},{}",
        r.group,
        r.t,
        r.claimed_value.map_or(String::new(), |c| c.to_string()),
        r.computed_value,
        status_name(r),
        r.verified_window[0],
        r.verified_window[1],
        csv_field(&r.extremal_witness.body_text()),
        r.wall_ms,
        r.stats.sequences_checked
    )
}

fn property_line(p: &PropertyReport) -> String {
    format!(
        "{} length={} k={} {} {} covered={} engine_failures={} extractor_failures={} wall_ms={}",
        p.group,
        p.length,
        p.k,
        p.mode,
        if p.holds { "HOLDS" } else { "VIOLATED" },
        p.multisets_covered,
        p.engine_failures,
        p.extractor_failures,
        p.wall_ms
    )
}

fn property_csv(p: &PropertyReport) -> String {
    format!(
        "property,{},{},,,{},,,{},{},{}",
        p.group,
        p.k,
        if p.holds { "HOLDS" } else { "VIOLATED" },
        csv_field(&p.counterexample.as_ref().map(Sequence::body_text).unwrap_or_default()),
        p.wall_ms,
        p.sequences_checked
    )
}

fn por2p_line(p: &Por2pReport) -> String {
    format!(
        "(Z/{})^2 sizes={:?} {} tested={} vacuous={} violations={}",
        p.p,
        p.sizes,
        match p.mode {
            crate::constants::CheckMode::Exhaustive => "exhaustive".to_string(),
            crate::constants::CheckMode::Sample { count, seed } => format!("sample:{count}:seed{seed}"),
        },
        p.tested,
        p.vacuous,
        p.violations
    )
}

fn por2p_csv(p: &Por2pReport) -> String {
    format!(
        "por2p,Z/{}^2,{},,,{},,,{},,{}",
        p.p,
        2 * p.p,
        if p.violations == 0 { "HOLDS" } else { "VIOLATED" },
        csv_field(&p.first_violation.as_ref().map(Sequence::body_text).unwrap_or_default()),
        p.tested
    )
}

fn verify_output(outcome: &VerifyOutcome) -> Output {
    let mut text = String::new();
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &outcome.rows {
        let (line, c) = match row {
            SuiteRow::Constant(r) => (constant_line(r), constant_csv(r)),
            SuiteRow::Property(p) => (property_line(p), property_csv(p)),
            SuiteRow::Por2p(p) => (por2p_line(p), por2p_csv(p)),
        };
        text.push_str(&line);
        text.push('\n');
        csv.push_str(&c);
        csv.push('\n');
    }
    text.push_str(&format!(
        "suite {}: {}\n",
        outcome.suite,
        if outcome.all_passed { "PASS" } else { "FAIL" }
    ));
    Output {
        json: envelope("verify", serde_json::to_value(outcome).expect("serializable")),
        text,
        csv: Some(csv),
        code: if outcome.all_passed { EXIT_OK } else { EXIT_VIOLATION },
    }
}

fn csv_field(s: &str) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
    w.write_record([s]).expect("in-memory write");
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("utf-8").trim_end().to_string()
}

/// Flat key/value CSV for outputs without a dedicated table.
fn csv_from_json(v: &Value) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(m) = v {
        for (k, val) in m {
            out.push_str(&format!("{k},{}\n", csv_field(&val.to_string())));
        }
    }
    out
}

/// Removes every `wall_ms` field, for comparing runs.
pub fn strip_wall_time(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_ms");
            m.values_mut().for_each(strip_wall_time);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_wall_time),
        _ => {}
    }
}
