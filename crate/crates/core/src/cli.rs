//! Command-line front end.

use std::path::PathBuf;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::census::{census, CensusOptions, CensusReport, Strategy, Tier};
use crate::classify::{
    mds_by_minors, mds_fast, mds_oracle, nmds_check, parity_check, selfdual_direct, selfdual_sufficient,
};
use crate::code::{min_distance, TgrsCode};
use crate::config::{parse_strategy, JobConfig};
use crate::error::{Error, Result};
use crate::ff::{Felt, Field};
use crate::grs::{grs_classify, schur_square_dim, systematic_form, triangular_twist_shape, GrsStatus};
use crate::matrix::Matrix;
use crate::symbolic::{big_p, census_classify, count_zeros, default_selection, find_reference, symbolic_system};

#[derive(Parser, Debug, Clone)]
#[command(name = "tgrs", version, about = "Twisted GRS code toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Job configuration file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for the census (0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_parser = parse_tier)]
    pub tier: Option<Tier>,
    /// Number of member matrices to list in census output.
    #[arg(long, global = true)]
    pub limit: Option<usize>,
    /// Census strategy: sieve, early-exit or exhaustive.
    #[arg(long, global = true, value_parser = parse_strategy_arg)]
    pub strategy: Option<Strategy>,
    /// Resume a census from this prefix index.
    #[arg(long, global = true)]
    pub resume: Option<u64>,
    /// Reference assignment of the wildcards for `polyp`, comma separated.
    #[arg(long, global = true)]
    pub reference: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Classify a single code.
    Check,
    /// Count wildcard assignments yielding MDS codes.
    Census,
    /// Emit the parity-check matrix.
    Parity,
    /// Describe the dual code.
    Dual,
    /// Schur-square dimension and the non-GRS structural test.
    Schur,
    /// GRS membership via the systematic form.
    Grs,
    /// Symbolic systematic form, minor polynomial and its census.
    Polyp,
    /// Describe a finite field.
    FieldInfo {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Modulus coefficients, constant first, comma separated.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u64>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn parse_tier(s: &str) -> std::result::Result<Tier, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_strategy_arg(s: &str) -> std::result::Result<Strategy, String> {
    parse_strategy(s).map_err(|e| e.to_string())
}

/// A rendered report.
#[derive(Debug, Clone)]
pub struct Output {
    pub body: String,
    /// Set when an interrupted census produced a checkpoint.
    pub interrupted: bool,
}

/// Value of a sub-check, or the reason it was not computed.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Value(T),
    Error { error: String },
}

impl<T> From<Result<T>> for Outcome<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Value(v),
            Err(e) => Outcome::Error { error: e.to_string() },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeSummary {
    pub field: String,
    pub n: usize,
    pub k: usize,
    pub alpha: Vec<String>,
    pub nu: Vec<String>,
    #[serde(rename = "B")]
    pub b: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NmdsSummary {
    pub is_nmds: bool,
    pub defect: usize,
    pub dual_defect: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfDualSummary {
    pub holds: bool,
    pub multipliers_ok: bool,
    pub matrix_identity_ok: bool,
    pub lambda: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceSummary {
    pub d: usize,
    pub defect: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub code: CodeSummary,
    pub is_mds: bool,
    pub witness_subset: Option<Vec<usize>>,
    pub mds_oracle: Outcome<bool>,
    pub nmds: Outcome<NmdsSummary>,
    pub is_selfdual: bool,
    pub selfdual_sufficient: Outcome<SelfDualSummary>,
    pub grs_status: GrsStatus,
    pub schur_dim: usize,
    pub nongrs_shape: Option<usize>,
    pub distance: Outcome<DistanceSummary>,
}

pub fn field_name(f: &Field) -> String {
    if f.is_prime_field() {
        format!("GF({})", f.order())
    } else {
        format!("GF({}^{})", f.characteristic(), f.degree())
    }
}

fn summary(code: &TgrsCode) -> CodeSummary {
    let f = code.field();
    CodeSummary {
        field: field_name(f),
        n: code.n(),
        k: code.k(),
        alpha: code.params().alpha().iter().map(|&a| f.format(a)).collect(),
        nu: code.params().nu().iter().map(|&a| f.format(a)).collect(),
        b: code.b().to_string(),
    }
}

pub fn classification_report(code: &TgrsCode) -> ClassificationReport {
    let f = code.field();
    let verdict = mds_fast(code);
    let g = code.generator_matrix();
    let sd = selfdual_sufficient(code).map(|s| SelfDualSummary {
        holds: s.holds,
        multipliers_ok: s.multipliers_ok,
        matrix_identity_ok: s.matrix_identity_ok,
        lambda: s.lambda.map(|l| f.format(l)),
    });
    ClassificationReport {
        code: summary(code),
        is_mds: verdict.is_mds,
        witness_subset: verdict.witness,
        mds_oracle: mds_oracle(code).map(|v| v.is_mds).into(),
        nmds: nmds_check(code)
            .map(|v| NmdsSummary { is_nmds: v.is_nmds, defect: v.defect, dual_defect: v.dual_defect })
            .into(),
        is_selfdual: selfdual_direct(code),
        selfdual_sufficient: sd.into(),
        grs_status: grs_classify(code),
        schur_dim: schur_square_dim(&g),
        nongrs_shape: triangular_twist_shape(code.b(), code.n(), code.k()),
        distance: code
            .brute_min_distance()
            .map(|d| DistanceSummary { d: d.d, defect: d.defect })
            .into(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusOutput {
    pub field: String,
    pub n: usize,
    pub k: usize,
    pub alpha: Vec<String>,
    pub pattern: String,
    pub tier: Tier,
    pub strategy: Strategy,
    #[serde(flatten)]
    pub report: CensusReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityOutput {
    pub code: CodeSummary,
    #[serde(rename = "H")]
    pub h: String,
    pub rank: usize,
    pub rank_is_n_minus_k: bool,
    pub orthogonal: bool,
    pub matches_null_space: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualOutput {
    pub code: CodeSummary,
    pub generator: String,
    pub dimension: usize,
    pub mds: Outcome<bool>,
    pub min_distance: Outcome<usize>,
    pub selfdual_direct: bool,
    pub selfdual_sufficient: Outcome<SelfDualSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurOutput {
    pub code: CodeSummary,
    pub dim: usize,
    pub grs_dim: usize,
    pub upper_bound: usize,
    pub mds: bool,
    pub nongrs_shape: Option<usize>,
    pub nongrs_certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrsOutput {
    pub code: CodeSummary,
    pub status: GrsStatus,
    #[serde(rename = "M")]
    pub m: Option<String>,
    #[serde(rename = "M_inverse_entries")]
    pub m_prime: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolypOutput {
    pub field: String,
    pub n: usize,
    pub k: usize,
    /// Variable name to coefficient cell.
    pub variables: Vec<String>,
    pub reference: Vec<String>,
    pub rows: [usize; 3],
    pub cols: [usize; 3],
    pub p: String,
    pub pij: Vec<Vec<String>>,
    #[serde(rename = "P")]
    pub big_p: String,
    pub p_terms: usize,
    pub p_zeros: u64,
    pub mds: u64,
    pub grs: u64,
    pub nongrs: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldInfo {
    pub field: String,
    pub p: u32,
    pub m: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub default_modulus: bool,
    pub primitive_element: String,
    /// Coefficient vectors (constant first) of `z^0, z^1, ...` for small fields.
    pub powers: Option<Vec<String>>,
}

fn load(cli: &Cli) -> Result<JobConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("--config is required for this command".into()))?;
    let mut cfg = JobConfig::from_path(path)?;
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(t) = cli.tier {
        cfg.tier = t;
    }
    if let Some(l) = cli.limit {
        cfg.limit = l;
    }
    if let Some(s) = cli.strategy {
        cfg.strategy = s;
    }
    if let Some(r) = &cli.reference {
        cfg.reference = Some(parse_elements(&cfg.field, r)?);
    }
    Ok(cfg)
}

fn fixed_code(cfg: &JobConfig) -> Result<TgrsCode> {
    TgrsCode::from_b(cfg.params.clone(), cfg.fixed_b()?)
}

/// Runs a parsed command. `stop` interrupts a running census.
pub fn run(cli: &Cli, stop: Option<Arc<AtomicBool>>) -> Result<Output> {
    let done = |v: Value| Ok(Output { body: render(&v, cli.format), interrupted: false });
    match &cli.command {
        Command::Check => {
            let code = fixed_code(&load(cli)?)?;
            done(to_value(&classification_report(&code)))
        }
        Command::Census => {
            let cfg = load(cli)?;
            let opts = CensusOptions {
                threads: cfg.threads,
                limit: cfg.limit,
                strategy: cfg.strategy,
                tier: cfg.tier,
                start_prefix: cli.resume.unwrap_or(0),
                stop,
            };
            let report = census(&cfg.params, &cfg.pattern, &opts)?;
            let interrupted = !report.completed;
            let f = &cfg.field;
            let out = CensusOutput {
                field: field_name(f),
                n: cfg.params.n(),
                k: cfg.params.k(),
                alpha: cfg.params.alpha().iter().map(|&a| f.format(a)).collect(),
                pattern: cfg.pattern.to_string(),
                tier: cfg.tier,
                strategy: cfg.strategy,
                report,
            };
            let body = if cli.format == Format::Csv {
                census_csv(&out.report)
            } else {
                render(&to_value(&out), cli.format)
            };
            Ok(Output { body, interrupted })
        }
        Command::Parity => {
            let code = fixed_code(&load(cli)?)?;
            let h = parity_check(&code);
            let g = code.generator_matrix();
            let orthogonal = g.mul(&h.transpose())?.is_zero();
            let rank = h.rank();
            let matches = h.row_space_basis() == g.null_space().row_space_basis();
            done(to_value(&ParityOutput {
                code: summary(&code),
                h: h.to_string(),
                rank,
                rank_is_n_minus_k: rank == code.n() - code.k(),
                orthogonal,
                matches_null_space: matches,
            }))
        }
        Command::Dual => {
            let code = fixed_code(&load(cli)?)?;
            let f = code.field().clone();
            let h = parity_check(&code);
            let sd = selfdual_sufficient(&code).map(|s| SelfDualSummary {
                holds: s.holds,
                multipliers_ok: s.multipliers_ok,
                matrix_identity_ok: s.matrix_identity_ok,
                lambda: s.lambda.map(|l| f.format(l)),
            });
            done(to_value(&DualOutput {
                code: summary(&code),
                generator: h.to_string(),
                dimension: h.rank(),
                mds: mds_by_minors(&h).map(|v| v.is_mds).into(),
                min_distance: min_distance(&h).into(),
                selfdual_direct: selfdual_direct(&code),
                selfdual_sufficient: sd.into(),
            }))
        }
        Command::Schur => {
            let code = fixed_code(&load(cli)?)?;
            let (n, k) = (code.n(), code.k());
            let dim = schur_square_dim(&code.generator_matrix());
            let mds = mds_fast(&code).is_mds;
            let shape = triangular_twist_shape(code.b(), n, k);
            done(to_value(&SchurOutput {
                code: summary(&code),
                dim,
                grs_dim: n.min(2 * k - 1),
                upper_bound: n.min(k * (k + 1) / 2),
                mds,
                nongrs_shape: shape,
                nongrs_certified: mds && shape.is_some(),
            }))
        }
        Command::Grs => {
            let code = fixed_code(&load(cli)?)?;
            let status = grs_classify(&code);
            let sf = if status == GrsStatus::NotMds {
                None
            } else {
                Some(systematic_form(&code.generator_matrix())?)
            };
            done(to_value(&GrsOutput {
                code: summary(&code),
                status,
                m: sf.as_ref().map(|s| s.m.to_string()),
                m_prime: sf.as_ref().and_then(|s| s.m_prime.as_ref().map(Matrix::to_string)),
            }))
        }
        Command::Polyp => done(to_value(&polyp(&load(cli)?)?)),
        Command::FieldInfo { p, m, modulus } => {
            let field = match (p, &cli.config) {
                (Some(p), _) => Field::new(*p, *m, modulus.as_deref())?,
                (None, Some(_)) => load(cli)?.field,
                (None, None) => return Err(Error::InvalidParams("give --p or --config".into())),
            };
            done(to_value(&field_info(&field)))
        }
    }
}

fn polyp(cfg: &JobConfig) -> Result<PolypOutput> {
    let f = &cfg.field;
    let sys = symbolic_system(&cfg.params, &cfg.pattern)?;
    if sys.vars.is_empty() {
        return Err(Error::InvalidParams("B has no wildcard cells, so there are no variables".into()));
    }
    let reference = match &cfg.reference {
        Some(r) => r.clone(),
        None => find_reference(&sys)?
            .ok_or_else(|| Error::Precondition("no assignment gives a non-GRS MDS code".into()))?,
    };
    if reference.len() != sys.vars.len() {
        return Err(Error::InvalidParams(format!(
            "reference has {} values for {} wildcards",
            reference.len(),
            sys.vars.len()
        )));
    }
    let sel = match cfg.selection {
        Some(s) => s,
        None => default_selection(&sys, &reference)?,
    };
    let big = big_p(&sys, &sel)?.monic();
    let zeros = count_zeros(&big)?;
    let tally = census_classify(&sys, &big)?;
    Ok(PolypOutput {
        field: field_name(f),
        n: cfg.params.n(),
        k: cfg.params.k(),
        variables: sys.vars.iter().enumerate().map(|(v, (i, j))| format!("x{v}=B[{i}][{j}]")).collect(),
        reference: reference.iter().map(|&v| f.format(v)).collect(),
        rows: sel.0,
        cols: sel.1,
        p: sys.p.to_string(),
        pij: sys.pij.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect(),
        big_p: big.to_string(),
        p_terms: big.len(),
        p_zeros: zeros,
        mds: tally.mds,
        grs: tally.grs,
        nongrs: tally.nongrs,
    })
}

pub fn field_info(field: &Field) -> FieldInfo {
    let g = field.primitive_root();
    let q = field.order();
    let powers = (q <= 64).then(|| {
        (0..q - 1)
            .map(|e| {
                let v = field.pow_u(g, e as u64);
                let c = field.to_coeffs(v);
                format!("[{}]", c.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            })
            .collect()
    });
    FieldInfo {
        field: field_name(field),
        p: field.characteristic(),
        m: field.degree(),
        q,
        modulus: field.modulus().to_vec(),
        default_modulus: field.has_default_modulus(),
        primitive_element: field.format(g),
        powers,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn census_csv(r: &CensusReport) -> String {
    let mut out = String::from("index,member\n");
    for (i, m) in r.sample_members.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", csv_field(m)));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', ';']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    if let Some(s) = scalar_text(v) {
        out.push((prefix.to_string(), s));
        return;
    }
    match v {
        Value::Array(items) => {
            if let Some(parts) = items.iter().map(scalar_text).collect::<Option<Vec<_>>>() {
                out.push((prefix.to_string(), parts.join(", ")));
            } else {
                for (i, item) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), item, out);
                }
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, item, out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

/// Renders a report. Key order follows the report structs.
pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("json") + "\n",
        Format::Text | Format::Csv => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let mut out = String::new();
            if format == Format::Csv {
                out.push_str("key,value\n");
                for (k, val) in rows {
                    out.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&val)));
                }
            } else {
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, val) in rows {
                    out.push_str(&format!("{k:<width$}  {val}\n"));
                }
            }
            out
        }
    }
}

/// Parses arguments, runs the command and writes the report. Returns the
/// process exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stop = Arc::new(AtomicBool::new(false));
    if matches!(cli.command, Command::Census) {
        let flag = stop.clone();
        // a second handler registration fails harmlessly when embedded
        let _ = ctrlc::set_handler(move || flag.store(true, std::sync::atomic::Ordering::Relaxed));
    }
    let started = std::time::Instant::now();
    match run(&cli, Some(stop)) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.body) {
                eprintln!("error: {e}");
                return 1;
            }
            if matches!(cli.command, Command::Census) {
                eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
            }
            if out.interrupted {
                eprintln!("interrupted: partial checkpoint written; rerun with --resume <resume_prefix>");
                return Error::Interrupted.exit_code();
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, body),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(body.as_bytes())
        }
    }
}

/// Parses `a,b,...` into field elements.
pub fn parse_elements(field: &Field, text: &str) -> Result<Vec<Felt>> {
    text.split(',').map(|t| field.parse(t)).collect()
}
