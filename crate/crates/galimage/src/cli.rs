//! Command-line front end.
//!
//! Exit codes: 0 on success; `check-prime` returns 1 when the prime is not
//! admissible and 3 when the threshold comparison is the only open
//! condition and did not resolve within the precision cap; 2 for any input
//! error. Cap overruns inside a computation are reported as `Unknown` fields
//! and never change the exit code.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use galimage_core::bounds::{
    check_prime_admissible, good_prime_bound, quaternion_index_bound, threshold_for, AdmissibilityVerdict, Comparison,
    EndoType, FailedCondition, DEFAULT_PRECISION_CAP, MIN_PRECISION,
};
use galimage_core::classify::{classify_gsp4, ClassifyOptions, DEFAULT_RANDOM_WORDS};
use galimage_core::dickson::{dickson_classify, DEFAULT_CAP};
use galimage_core::field::FqField;
use galimage_core::inertia::{
    verify_lower_bound, verify_no_twisted_cubic, CubicVerdict, LowerBoundVerdict, LOWER_BOUND_MAX_L, SURFACE_MAX_L,
};
use galimage_core::primes::is_prime;
use galimage_core::products::{build_h_ell, product_surjectivity, PairOptions, ProductGroup};
use galimage_core::symplectic::EXHAUSTIVE_CAP;
use galimage_core::DEFAULT_SEED;
use serde_json::{json, Value};

use crate::formats::{self, DescriptorDoc, Gl2Doc, Gsp4Doc, InertiaDoc, InputError, ProductDoc, ProductInput, Schema};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_ADMISSIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

/// Smallest prime the twisted-cubic campaign covers.
const CUBIC_MIN_L: u64 = 11;
const DEFAULT_SAMPLES: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "galimage",
    version,
    about = "Surjectivity thresholds and finite image checks for mod-l Galois representations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for the ChaCha8 generator behind every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest working precision, in bits, for certified comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP,
          value_parser = clap::value_parser!(u32).range(MIN_PRECISION as i64..))]
    pub precision_cap: u32,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Threshold, its bit length and the remaining side conditions.
    Bound {
        #[arg(long)]
        input: PathBuf,
    },
    /// Decide whether a prime meets every hypothesis.
    CheckPrime {
        #[arg(long)]
        input: PathBuf,
        /// The prime to test.
        #[arg(long = "l")]
        l: String,
    },
    /// Classify a subgroup of GSp4(F_l) against the maximal subgroup classes.
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Random words for the twisted-cubic test.
        #[arg(long, default_value_t = DEFAULT_RANDOM_WORDS)]
        words: usize,
        /// Largest l for the exhaustive invariant-subspace search.
        #[arg(long, default_value_t = EXHAUSTIVE_CAP)]
        exhaustive_cap: u64,
    },
    /// Place a subgroup of GL2(F_q) in the subgroup classification.
    Dickson {
        #[arg(long)]
        input: PathBuf,
        /// Element cap for group enumeration.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        exhaustive_cap: u64,
    },
    /// Run the tame-inertia campaigns.
    VerifyInertia {
        #[arg(long)]
        input: Option<PathBuf>,
        /// A prime `p` or a range `a..b`.
        #[arg(long = "l", conflicts_with = "lmax")]
        l: Option<String>,
        #[arg(long)]
        lmax: Option<u64>,
    },
    /// Check surjectivity onto a product of SL2's pair by pair.
    VerifyProducts {
        #[arg(long)]
        input: PathBuf,
        /// Random commutator samples per pair.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        words: u32,
        /// Element cap for the projections' enumeration.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        exhaustive_cap: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bound { .. } => "bound",
            Command::CheckPrime { .. } => "check-prime",
            Command::Classify { .. } => "classify",
            Command::Dickson { .. } => "dickson",
            Command::VerifyInertia { .. } => "verify-inertia",
            Command::VerifyProducts { .. } => "verify-products",
        }
    }

    fn input(&self) -> Option<&Path> {
        match self {
            Command::Bound { input }
            | Command::CheckPrime { input, .. }
            | Command::Classify { input, .. }
            | Command::Dickson { input, .. }
            | Command::VerifyProducts { input, .. } => Some(input),
            Command::VerifyInertia { input, .. } => input.as_deref(),
        }
    }
}

/// Settings shared by every command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: &'static str,
    pub input_path: Option<PathBuf>,
    pub seed: u64,
    pub precision_cap: u32,
    pub output_format: OutputFormat,
}

impl From<&Cli> for RunConfig {
    fn from(c: &Cli) -> Self {
        Self {
            command: c.command.name(),
            input_path: c.command.input().map(Path::to_path_buf),
            seed: c.seed,
            precision_cap: c.precision_cap,
            output_format: c.format,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: String, source: InputError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
}

/// A finished report and its exit code.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

fn read_doc<T: for<'de> serde::Deserialize<'de>>(path: &Path, schema: Schema) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Read { path: path.display().to_string(), source: e })?;
    formats::from_json_checked(schema, &text).map_err(|e| input_err(path, e))
}

fn input_err(path: &Path, e: InputError) -> CliError {
    CliError::Input { path: path.display().to_string(), source: e }
}

fn header(cfg: &RunConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(cfg.command));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("precision_cap".into(), json!(cfg.precision_cap));
    m
}

fn finish(mut head: serde_json::Map<String, Value>, body: Value, code: i32) -> Outcome {
    if let Value::Object(b) = body {
        head.extend(b);
    }
    Outcome { report: Value::Object(head), code }
}

pub fn cmd_bound(cfg: &RunConfig, input: &Path) -> Result<Outcome, CliError> {
    let desc =
        read_doc::<DescriptorDoc>(input, Schema::Descriptor)?.to_descriptor().map_err(|e| input_err(input, e))?;
    let t = threshold_for(&desc).map_err(|e| CliError::Precondition(e.to_string()))?;
    let mut aux = Vec::new();
    match desc.endo_type {
        EndoType::Gl2Type { .. } | EndoType::RealMultSurface { .. } => {
            let b = good_prime_bound(&desc).map_err(|e| CliError::Precondition(e.to_string()))?;
            aux.push(json!({
                "name": "good_prime_bound",
                "text": "primes above this bound do not divide the index of End(A) in O_E",
                "symbol": format!("b({},{},{})^{{{}}}", desc.degree_k, desc.dim, report::rational(&desc.faltings_height), desc.dim),
                "bit_length": report::bit_length(&b, cfg.precision_cap),
            }));
        }
        EndoType::QuaternionMult { .. } => {
            let b = quaternion_index_bound(&desc).map_err(|e| CliError::Precondition(e.to_string()))?;
            aux.push(json!({
                "name": "quaternion_index_bound",
                "text": "bound on the index of End(A) in a maximal order of D",
                "symbol": format!("b({},2,{})^{{4}}", desc.degree_k, report::rational(&desc.faltings_height)),
                "bit_length": report::bit_length(&b, cfg.precision_cap),
            }));
        }
        EndoType::TrivialEndo => {}
    }
    let body = json!({
        "descriptor": report::descriptor(&desc),
        "threshold": {
            "symbol": report::threshold_symbol(&desc),
            "expression": report::expr(&t),
            "bit_length": report::bit_length(&t, cfg.precision_cap),
        },
        "auxiliary_bounds": aux,
        "side_conditions": report::side_conditions(&desc),
    });
    Ok(finish(header(cfg), body, EXIT_OK))
}

/// 0 if admissible, 3 if the open threshold comparison is the only failed
/// condition, 1 otherwise.
pub fn admissibility_exit_code(v: &AdmissibilityVerdict) -> i32 {
    let only_open = v.failed_conditions == [FailedCondition::BelowThreshold { indeterminate: true }];
    if v.admissible {
        EXIT_OK
    } else if only_open && matches!(v.comparison, Comparison::Indeterminate(_)) {
        EXIT_INDETERMINATE
    } else {
        EXIT_NOT_ADMISSIBLE
    }
}

pub fn cmd_check_prime(cfg: &RunConfig, input: &Path, l: &str) -> Result<Outcome, CliError> {
    let l: u64 = l
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--l: expected a decimal integer below 2^64, got {l:?}")))?;
    if !is_prime(l) {
        return Err(CliError::Usage(format!("--l: {l} is not prime")));
    }
    let desc =
        read_doc::<DescriptorDoc>(input, Schema::Descriptor)?.to_descriptor().map_err(|e| input_err(input, e))?;
    let v = check_prime_admissible(&desc, l, cfg.precision_cap).map_err(|e| CliError::Precondition(e.to_string()))?;
    let code = admissibility_exit_code(&v);
    let body = json!({
        "descriptor": report::descriptor(&desc),
        "threshold_symbol": report::threshold_symbol(&desc),
        "verdict": report::admissibility(&v, cfg.precision_cap),
    });
    Ok(finish(header(cfg), body, code))
}

pub fn cmd_classify(cfg: &RunConfig, input: &Path, words: usize, exhaustive_cap: u64) -> Result<Outcome, CliError> {
    let doc = read_doc::<Gsp4Doc>(input, Schema::Gsp4Generators)?;
    let g = doc.to_group().map_err(|e| input_err(input, e))?;
    let opts = ClassifyOptions { random_words: words, seed: cfg.seed, exhaustive_cap };
    let r = classify_gsp4(&g, &opts).map_err(|e| CliError::Precondition(e.to_string()))?;
    let body = json!({
        "form": match doc.form { formats::FormKind::Standard => "standard", formats::FormKind::Cubic => "cubic" },
        "generators": g.generators.len(),
        "options": {"words": words, "exhaustive_cap": exhaustive_cap},
        "report": report::class_report(&g.field, &r),
    });
    Ok(finish(header(cfg), body, EXIT_OK))
}

pub fn cmd_dickson(cfg: &RunConfig, input: &Path, cap: u64) -> Result<Outcome, CliError> {
    let g = read_doc::<Gl2Doc>(input, Schema::Gl2Generators)?.to_group().map_err(|e| input_err(input, e))?;
    let r = dickson_classify(&g, cap).map_err(|e| CliError::Precondition(e.to_string()))?;
    let body = json!({
        "field": report::field(&g.field),
        "generators": g.generators.len(),
        "options": {"exhaustive_cap": cap},
        "report": report::dickson_report(&g.field, &r),
    });
    Ok(finish(header(cfg), body, EXIT_OK))
}

pub fn cmd_verify_products(cfg: &RunConfig, input: &Path, samples: u32, cap: u64) -> Result<Outcome, CliError> {
    let doc = read_doc::<ProductDoc>(input, Schema::Products)?;
    let (group, expected_order) = match doc.to_input().map_err(|e| input_err(input, e))? {
        ProductInput::Explicit { fields, generators } => {
            (ProductGroup::new(fields, generators).map_err(|e| CliError::Precondition(e.to_string()))?, None)
        }
        ProductInput::HEll(h) => {
            let h = build_h_ell(h.l, &h.residue_degrees).map_err(|e| CliError::Precondition(e.to_string()))?;
            (h.group, Some(h.order))
        }
    };
    let opts = PairOptions { cap, samples, seed: cfg.seed };
    let r = product_surjectivity(&group, &opts).map_err(|e| CliError::Precondition(e.to_string()))?;
    let body = json!({
        "factors": group.fields.iter().map(report::field).collect::<Vec<_>>(),
        "generators": group.generators.len(),
        "h_ell_order": expected_order.map(|o| o.to_string()),
        "options": {"words": samples, "exhaustive_cap": cap},
        "report": report::product_report(&group.fields, &r),
    });
    Ok(finish(header(cfg), body, EXIT_OK))
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("--l: expected a prime or a range a..b, got {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let p: u64 = s.trim().parse().map_err(|_| bad())?;
            if !is_prime(p) {
                return Err(CliError::Usage(format!("--l: {p} is not prime")));
            }
            (p, p)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| is_prime(p)).collect()
}

pub fn cmd_verify_inertia(
    cfg: &RunConfig,
    input: Option<&Path>,
    l: Option<&str>,
    lmax: Option<u64>,
) -> Result<Outcome, CliError> {
    let mut doc = match input {
        Some(p) => read_doc::<InertiaDoc>(p, Schema::InertiaCampaign)?,
        None => InertiaDoc { l_min: None, l_max: 0, genera: formats::all_genera() },
    };
    match (l, lmax) {
        (Some(s), _) => {
            let (a, b) = parse_range(s)?;
            doc.l_min = Some(a);
            doc.l_max = b;
        }
        (None, Some(m)) => doc.l_max = m,
        (None, None) if input.is_none() => {
            return Err(CliError::Usage("verify-inertia needs --input, --l or --lmax".into()))
        }
        _ => {}
    }
    if doc.l_max > SURFACE_MAX_L {
        return Err(CliError::Usage(format!("l_max = {} exceeds {SURFACE_MAX_L}", doc.l_max)));
    }
    if let Some(g) = doc.genera.iter().find(|g| !(1..=4).contains(*g)) {
        return Err(CliError::Usage(format!("genera: {g} outside 1..=4")));
    }
    let l_min = doc.l_min.unwrap_or(0);
    let mut all_verified = true;

    let cubic_lo = l_min.max(CUBIC_MIN_L);
    let mut cubic = Vec::new();
    for p in primes_in(cubic_lo, doc.l_max) {
        let f = FqField::new(p, 2).map_err(|e| CliError::Precondition(e.to_string()))?;
        let entry = match verify_no_twisted_cubic(p).map_err(|e| CliError::Precondition(e.to_string()))? {
            CubicVerdict::Verified(ws) => json!({
                "l": p,
                "field": report::field(&f),
                "verdict": "Verified",
                "witnesses": ws.iter().map(|w| report::cubic_witness(&f, w)).collect::<Vec<_>>(),
            }),
            CubicVerdict::Failed(pat) => {
                all_verified = false;
                json!({"l": p, "verdict": "Failed", "pattern": report::pattern(&pat)})
            }
        };
        cubic.push(entry);
    }

    let mut lower = Vec::new();
    let mut genera = doc.genera.clone();
    genera.sort_unstable();
    genera.dedup();
    for &g in &genera {
        let lo = l_min.max(g as u64 + 2);
        let hi = doc.l_max.min(LOWER_BOUND_MAX_L);
        for p in primes_in(lo, hi) {
            let entry = match verify_lower_bound(p, g).map_err(|e| CliError::Precondition(e.to_string()))? {
                LowerBoundVerdict::Verified { patterns, contradictions, min_n } => json!({
                    "g": g,
                    "l": p,
                    "verdict": "Verified",
                    "patterns": patterns,
                    "contradictions": contradictions,
                    "min_n": if min_n == u128::MAX { None } else { Some(min_n.to_string()) },
                }),
                LowerBoundVerdict::Failed(pat, n) => {
                    all_verified = false;
                    json!({
                        "g": g,
                        "l": p,
                        "verdict": "Failed",
                        "pattern": pat.iter().map(report::character).collect::<Vec<_>>(),
                        "min_n": n.to_string(),
                    })
                }
            };
            lower.push(entry);
        }
    }
    let body = json!({
        "ranges": {
            "cubic": [cubic_lo, doc.l_max],
            "lower_bound": [l_min, doc.l_max.min(LOWER_BOUND_MAX_L)],
            "genera": genera,
        },
        "twisted_cubic": cubic,
        "lower_bound": lower,
        "all_verified": all_verified,
    });
    Ok(finish(header(cfg), body, EXIT_OK))
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::from(cli);
    match &cli.command {
        Command::Bound { input } => cmd_bound(&cfg, input),
        Command::CheckPrime { input, l } => cmd_check_prime(&cfg, input, l),
        Command::Classify { input, words, exhaustive_cap } => cmd_classify(&cfg, input, *words, *exhaustive_cap),
        Command::Dickson { input, exhaustive_cap } => cmd_dickson(&cfg, input, *exhaustive_cap),
        Command::VerifyInertia { input, l, lmax } => cmd_verify_inertia(&cfg, input.as_deref(), l.as_deref(), *lmax),
        Command::VerifyProducts { input, words, exhaustive_cap } => {
            cmd_verify_products(&cfg, input, *words, *exhaustive_cap)
        }
    }
}

/// Indented `key: value` rendering of a report.
pub fn render_text(v: &Value) -> String {
    fn scalar(v: &Value) -> Option<String> {
        match v {
            Value::Null => Some("-".into()),
            Value::Bool(b) => Some(b.to_string()),
            Value::Number(n) => Some(n.to_string()),
            Value::String(s) => Some(s.clone()),
            Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array()) => {
                Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
            }
            Value::Array(a) if a.iter().all(|x| x.is_array() && scalar(x).is_some()) => {
                Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
            }
            _ => None,
        }
    }
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    match scalar(x) {
                        Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            walk(x, indent + 1, out);
                        }
                    }
                }
            }
            Value::Array(a) => {
                for x in a {
                    match scalar(x) {
                        Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}-\n"));
                            walk(x, indent + 1, out);
                        }
                    }
                }
            }
            _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
        }
    }
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

fn emit(cli: &Cli, outcome: &Outcome, stdout: &mut dyn Write) -> std::io::Result<()> {
    let mut text = match cli.format {
        OutputFormat::Json => serde_json::to_string_pretty(&outcome.report).expect("reports serialize"),
        OutputFormat::Text => render_text(&outcome.report),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(p) => fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => match emit(&cli, &outcome, stdout) {
            Ok(()) => outcome.code,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write report: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_of_verdicts() {
        use galimage_core::bounds::{int, ExactExpr, IndeterminateReason};
        let v = |admissible, comparison, failed: Vec<FailedCondition>| AdmissibilityVerdict {
            prime: 13,
            admissible,
            threshold: ExactExpr::constant(int(11)),
            comparison,
            failed_conditions: failed,
            expected_image: String::new(),
        };
        let open = Comparison::Indeterminate(IndeterminateReason::PrecisionCap);
        let below_open = FailedCondition::BelowThreshold { indeterminate: true };
        assert_eq!(admissibility_exit_code(&v(true, Comparison::PrimeAbove, vec![])), EXIT_OK);
        assert_eq!(admissibility_exit_code(&v(false, open, vec![below_open])), EXIT_INDETERMINATE);
        assert_eq!(
            admissibility_exit_code(&v(false, open, vec![FailedCondition::RamifiedInK, below_open])),
            EXIT_NOT_ADMISSIBLE
        );
        assert_eq!(
            admissibility_exit_code(&v(false, Comparison::PrimeAbove, vec![FailedCondition::DividesDelta])),
            EXIT_NOT_ADMISSIBLE
        );
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("11..47").unwrap(), (11, 47));
        assert_eq!(parse_range("13").unwrap(), (13, 13));
        assert!(parse_range("12").is_err());
        assert!(parse_range("47..11").is_err());
    }

    #[test]
    fn precision_cap_floor() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["galimage", "verify-inertia", "--l", "11", "--precision-cap", "32"], &mut out, &mut err);
        assert_eq!(code, EXIT_INPUT);
        assert!(String::from_utf8(err).unwrap().contains("precision-cap"));
    }

    #[test]
    fn run_config_defaults() {
        let cli = Cli::try_parse_from(["galimage", "bound", "--input", "d.json"]).unwrap();
        let cfg = RunConfig::from(&cli);
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.precision_cap, DEFAULT_PRECISION_CAP);
        assert_eq!(cfg.output_format, OutputFormat::Json);
        assert_eq!(cfg.input_path, Some(PathBuf::from("d.json")));
        assert_eq!(cfg.command, "bound");
    }

    #[test]
    fn text_rendering() {
        let v = json!({"a": 1, "b": {"c": [1, 2]}, "m": [[1, 2], [3, 4]], "d": [{"e": null}]});
        assert_eq!(render_text(&v), "a: 1\nb:\n  c: [1, 2]\nm: [[1, 2], [3, 4]]\nd:\n  -\n    e: -\n");
    }
}
