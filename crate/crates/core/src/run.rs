//! Config-driven runs behind the command-line front end.
//!
//! Each command reads one JSON document (absent fields take defaults),
//! writes its artifacts into the output directory and reports the
//! certificate failures it found. Artifacts depend only on the config and
//! the seed; the wall-clock timestamp lives in `run.json` alone.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codebook::{self, audit, BuildOptions, CodebookSpec, DEFAULT_RATE_HORIZON};
use crate::error::{Error, Result};
use crate::lang::{self, Budget, ConcatSubshift};
use crate::measures::{self, CoverMethod};
use crate::schedule::DELTA;
use crate::seq::{self, ArithmeticSequence, SeqKind};
use crate::sequences::Sequence;
use crate::thm1::{self, LevelFamily, Thm1Params};
use crate::thm2::{self, MaterializeOptions, Status};
use crate::words::{frac_text, Alphabet, Frac, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Thm1Build,
    Thm1Verify,
    Thm2Ledger,
    Thm2Build,
    Codebook,
    Complexity,
    Cover,
    QuietCheck,
    Liouville,
    Report,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Thm1Build,
        Command::Thm1Verify,
        Command::Thm2Ledger,
        Command::Thm2Build,
        Command::Codebook,
        Command::Complexity,
        Command::Cover,
        Command::QuietCheck,
        Command::Liouville,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Thm1Build => "thm1-build",
            Command::Thm1Verify => "thm1-verify",
            Command::Thm2Ledger => "thm2-ledger",
            Command::Thm2Build => "thm2-build",
            Command::Codebook => "codebook",
            Command::Complexity => "complexity",
            Command::Cover => "cover",
            Command::QuietCheck => "quiet-check",
            Command::Liouville => "liouville",
            Command::Report => "report",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub out: PathBuf,
    pub seed: u64,
    pub threads: Option<usize>,
}

/// Artifacts written and certificate failures found by a completed run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub artifacts: Vec<String>,
    pub failures: Vec<String>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERTIFICATE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub fn exit_code(result: &Result<RunReport>) -> i32 {
    match result {
        Ok(r) if r.failures.is_empty() => EXIT_OK,
        Ok(_) => EXIT_CERTIFICATE,
        Err(Error::Budget { .. }) => EXIT_BUDGET,
        Err(Error::Horizon(_) | Error::NotRepresentable(_)) => EXIT_CERTIFICATE,
        Err(_) => EXIT_USAGE,
    }
}

#[derive(Serialize)]
struct RunRecord<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    threads: Option<usize>,
    config: &'a Value,
    status: &'a str,
    exit_code: i32,
    reason: Option<&'a str>,
    message: Option<String>,
    artifacts: &'a [String],
    failures: &'a [String],
    timestamp: u64,
}

/// Runs `command` and always writes `run.json`, returning the exit code.
pub fn run_and_record(command: Command, config: &Value, opts: &RunOptions) -> (i32, Result<RunReport>) {
    let result = fs::create_dir_all(&opts.out)
        .map_err(Error::from)
        .and_then(|_| run(command, config, opts));
    let code = exit_code(&result);
    let empty = RunReport::default();
    let report = result.as_ref().unwrap_or(&empty);
    let (status, reason, message) = match &result {
        Ok(r) if r.failures.is_empty() => ("ok", None, None),
        Ok(_) => ("certificate_failure", Some("certificate_failure"), None),
        Err(e) => ("error", Some(e.reason()), Some(e.to_string())),
    };
    let record = RunRecord {
        command: command.name(),
        version: env!("CARGO_PKG_VERSION"),
        seed: opts.seed,
        threads: opts.threads,
        config,
        status,
        exit_code: code,
        reason,
        message,
        artifacts: &report.artifacts,
        failures: &report.failures,
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    let written = serde_json::to_string_pretty(&record)
        .map_err(Error::from)
        .and_then(|s| fs::write(opts.out.join("run.json"), s + "\n").map_err(Error::from));
    match written {
        Ok(()) => (code, result),
        Err(e) => (EXIT_USAGE, Err(e)),
    }
}

pub fn run(command: Command, config: &Value, opts: &RunOptions) -> Result<RunReport> {
    let mut ctx = Ctx {
        out: opts.out.clone(),
        seed: opts.seed,
        report: RunReport::default(),
    };
    match command {
        Command::Thm1Build => thm1_build(&mut ctx, parse(config)?)?,
        Command::Thm1Verify => thm1_verify(&mut ctx, parse(config)?)?,
        Command::Thm2Ledger => thm2_ledger(&mut ctx, parse(config)?)?,
        Command::Thm2Build => thm2_build(&mut ctx, parse(config)?)?,
        Command::Codebook => codebook_cmd(&mut ctx, parse(config)?)?,
        Command::Complexity => complexity_cmd(&mut ctx, parse(config)?)?,
        Command::Cover => cover_cmd(&mut ctx, parse(config)?)?,
        Command::QuietCheck => quiet_cmd(&mut ctx, parse(config)?)?,
        Command::Liouville => liouville_cmd(&mut ctx, parse(config)?)?,
        Command::Report => report_cmd(&mut ctx, parse(config)?)?,
    }
    Ok(ctx.report)
}

fn parse<T: DeserializeOwned + Default>(config: &Value) -> Result<T> {
    if config.is_null() {
        return Ok(T::default());
    }
    serde_json::from_value(config.clone()).map_err(|e| Error::Parse(format!("config: {e}")))
}

struct Ctx {
    out: PathBuf,
    seed: u64,
    report: RunReport,
}

impl Ctx {
    fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<()> {
        fs::write(self.out.join(name), bytes)?;
        self.report.artifacts.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let s = serde_json::to_string_pretty(value)? + "\n";
        self.write(name, s)
    }

    fn csv(&mut self, name: &str, fill: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        fill(&mut buf)?;
        self.write(name, buf)
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.report.failures.push(what.into());
    }

    fn check(&mut self, holds: bool, what: impl Into<String>) {
        if !holds {
            self.fail(what);
        }
    }
}

fn words_text<'a>(words: impl IntoIterator<Item = &'a Word>) -> String {
    words.into_iter().map(|w| w.render() + "\n").collect()
}

fn parse_words(texts: &[String], alphabet: u32) -> Result<Vec<Word>> {
    let a = Alphabet::new(alphabet)?;
    texts.iter().map(|t| Word::parse(t, a)).collect()
}

fn square() -> Sequence {
    Sequence::polynomial(Frac::from_integer(1), 2)
}

fn log_seq() -> Sequence {
    Sequence::log(Frac::from_integer(1), 1)
}

// ---------------------------------------------------------------- thm1

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thm1Config {
    pub p: Sequence,
    pub levels: usize,
    pub balanced: bool,
    pub horizon: u64,
    pub symbol_budget: u64,
    /// Previously written parameter file to verify instead of re-deriving.
    pub params: Option<PathBuf>,
    pub complexity_budget: u64,
    /// Branch sample length; default `max(100 |w^1|, 4 |w^2|)`.
    pub branch_length: Option<usize>,
}

impl Default for Thm1Config {
    fn default() -> Self {
        Thm1Config {
            p: square(),
            levels: 2,
            balanced: false,
            horizon: thm1::DEFAULT_HORIZON,
            symbol_budget: thm1::DEFAULT_SYMBOL_BUDGET as u64,
            params: None,
            complexity_budget: 1_000_000_000,
            branch_length: None,
        }
    }
}

fn thm1_params(cfg: &Thm1Config) -> Result<Thm1Params> {
    match &cfg.params {
        Some(path) => Ok(serde_json::from_str(&fs::read_to_string(path)?)?),
        None => thm1::auto_params(&cfg.p, cfg.levels, DELTA, cfg.balanced, cfg.horizon),
    }
}

fn thm1_build(ctx: &mut Ctx, cfg: Thm1Config) -> Result<()> {
    let params = thm1_params(&cfg)?;
    ctx.json("thm1_params.json", &params)?;
    let families = thm1::build_families(&params, cfg.symbol_budget as u128)?;
    for f in &families {
        ctx.write(&format!("thm1_level{}_words.txt", f.level), words_text(&f.words))?;
    }
    if families.len() < params.levels.len() {
        return Err(Error::budget(
            "level materialization",
            format!("{} levels", params.levels.len()),
            cfg.symbol_budget,
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct Thm1Certificates<'a> {
    params: &'a Thm1Params,
    distinct: Vec<thm1::DistinctCertificate>,
    containment: Vec<thm1::ContainmentCertificate>,
    complexity: Vec<thm1::ComplexityCertificate>,
    branch: Option<thm1::BranchCertificate>,
}

fn thm1_verify(ctx: &mut Ctx, cfg: Thm1Config) -> Result<()> {
    let params = thm1_params(&cfg)?;
    let ineqs = thm1::verify_params(&params, &cfg.p)?;
    ctx.csv("thm1_inequalities.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["level", "name", "lhs", "rhs", "holds"])?;
        for i in &ineqs {
            w.write_record([i.level.to_string(), i.name.clone(), i.lhs.clone(), i.rhs.clone(), i.holds.to_string()])?;
        }
        w.flush()?;
        Ok(())
    })?;
    for i in ineqs.iter().filter(|i| !i.holds) {
        ctx.fail(format!("level {} {}: {} vs {}", i.level, i.name, i.lhs, i.rhs));
    }
    let families = thm1::build_families(&params, cfg.symbol_budget as u128)?;
    if families.len() < params.levels.len() {
        return Err(Error::budget(
            "level materialization",
            format!("{} levels", params.levels.len()),
            cfg.symbol_budget,
        ));
    }
    let distinct: Vec<_> = families.iter().map(thm1::verify_distinct_subwords).collect();
    let containment = families
        .windows(2)
        .map(|w| thm1::verify_containment(&w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    let complexity = families
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let prev: Option<&LevelFamily> = i.checked_sub(1).map(|j| &families[j]);
            thm1::complexity_certificate(f, prev, Budget(cfg.complexity_budget))
        })
        .collect::<Result<Vec<_>>>()?;
    let branch = if families.len() >= 2 {
        let len = cfg
            .branch_length
            .unwrap_or((100 * families[0].word_len).max(4 * families[1].word_len));
        Some(thm1::branch_separation(&families, len)?)
    } else {
        None
    };
    for d in &distinct {
        ctx.check(d.holds, format!("level {} distinct subwords", d.level));
    }
    for c in &containment {
        ctx.check(c.holds, format!("level {} containment", c.level));
    }
    for c in &complexity {
        let lv = c.level;
        ctx.check(c.base_formula_holds != Some(false), format!(
            "level {lv} p(n_1) = {:?} differs from 4 n_1 - 2 = {:?}",
            c.exact, c.base_formula
        ));
        ctx.check(c.structural_holds != Some(false), format!(
            "level {lv} p(n_k) = {:?} exceeds the structural bound {:?}",
            c.exact, c.structural_bound
        ));
        ctx.check(c.headline_holds != Some(false), format!(
            "level {lv} p(n_k) = {:?} exceeds (C(2^k, 2) + 1) n_k = {}",
            c.exact, c.headline_bound
        ));
    }
    if let Some(b) = &branch {
        ctx.check(b.separated, "branch separation > 1/2");
        ctx.check(b.own_holds, "own-pattern frequency >= delta_1 - |w^1| / length");
    }
    ctx.json(
        "thm1_certificates.json",
        &Thm1Certificates {
            params: &params,
            distinct,
            containment,
            complexity,
            branch,
        },
    )
}

// ---------------------------------------------------------------- thm2

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thm2Config {
    pub a: Sequence,
    pub b: Sequence,
    pub levels: u32,
    pub max_symbols_per_word: u64,
    pub max_words: u64,
}

impl Default for Thm2Config {
    fn default() -> Self {
        let m = MaterializeOptions::default();
        Thm2Config {
            a: log_seq(),
            b: square(),
            levels: 2,
            max_symbols_per_word: m.max_symbols_per_word,
            max_words: m.max_words,
        }
    }
}

fn ledger_outputs(ctx: &mut Ctx, ledger: &thm2::PhaseLedger) -> Result<()> {
    ctx.json("thm2_ledger.json", ledger)?;
    ctx.csv("thm2_checks.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["level", "condition", "status", "detail"])?;
        for (level, c) in ledger.all_checks() {
            let status = serde_json::to_value(c.status)?;
            w.write_record([
                level.to_string(),
                c.condition.clone(),
                status.as_str().unwrap_or_default().to_string(),
                c.detail.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    for v in ledger.violations() {
        ctx.fail(v);
    }
    Ok(())
}

fn thm2_ledger(ctx: &mut Ctx, cfg: Thm2Config) -> Result<()> {
    let ledger = thm2::build_ledger(&cfg.a, &cfg.b, cfg.levels)?;
    ledger_outputs(ctx, &ledger)
}

fn thm2_build(ctx: &mut Ctx, cfg: Thm2Config) -> Result<()> {
    let mut ledger = thm2::build_ledger(&cfg.a, &cfg.b, cfg.levels)?;
    let opts = MaterializeOptions {
        max_symbols_per_word: cfg.max_symbols_per_word,
        max_words: cfg.max_words,
        seed: ctx.seed,
    };
    let words = thm2::materialize_level1(&mut ledger, &opts);
    ledger_outputs(ctx, &ledger)?;
    let words = words?;
    ctx.write("thm2_level1_words.txt", words_text(&words))?;
    let c3 = ledger.levels[0].checks.iter().find(|c| c.condition == "c3");
    ctx.check(c3.is_some_and(|c| c.status == Status::Satisfied), "level 1 c3 on materialized words");
    Ok(())
}

// ---------------------------------------------------------------- codebook

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodebookConfig {
    pub symbols: u32,
    pub n: usize,
    #[serde(with = "frac_text")]
    pub alpha: Frac,
    #[serde(with = "frac_text")]
    pub eps: Frac,
    pub enumeration_budget: u64,
    pub sample_budget: u64,
    pub max_words: Option<usize>,
    pub rate_horizon: usize,
}

impl Default for CodebookConfig {
    fn default() -> Self {
        let b = BuildOptions::default();
        CodebookConfig {
            symbols: 2,
            n: 16,
            alpha: Frac::new(1, 4),
            eps: Frac::new(1, 2),
            enumeration_budget: b.enumeration_budget,
            sample_budget: b.sample_budget,
            max_words: None,
            rate_horizon: DEFAULT_RATE_HORIZON,
        }
    }
}

impl CodebookConfig {
    fn build(&self, seed: u64) -> Result<(CodebookSpec, codebook::Codebook)> {
        let spec = CodebookSpec::new(self.symbols, self.n, self.alpha, self.eps)?;
        let opts = BuildOptions {
            enumeration_budget: self.enumeration_budget,
            sample_budget: self.sample_budget,
            max_words: self.max_words,
        };
        let book = codebook::build_codebook(&spec, seed, &opts)?;
        Ok((spec, book))
    }
}

fn codebook_cmd(ctx: &mut Ctx, cfg: CodebookConfig) -> Result<()> {
    let (spec, book) = cfg.build(ctx.seed)?;
    let rates = codebook::growth_params(&spec, cfg.rate_horizon).ok();
    let mut buf = Vec::new();
    book.write(&mut buf, rates.as_ref())?;
    ctx.write("codebook.txt", buf)?;
    let report = audit::verify(&book.words, &spec);
    ctx.json("codebook_audit.json", &report)?;
    ctx.check(report.ok(), "codebook audit");
    if cfg.max_words.is_some_and(|m| book.words.len() < m) {
        ctx.fail(format!("sampling found {} of {:?} words", book.words.len(), cfg.max_words));
    }
    Ok(())
}

// ---------------------------------------------------------------- complexity

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComplexityConfig {
    pub generators: Vec<String>,
    pub alphabet: u32,
    pub n_min: usize,
    pub n_max: usize,
    pub budget: u64,
}

impl Default for ComplexityConfig {
    fn default() -> Self {
        ComplexityConfig {
            generators: vec!["000000001".into(), "011111111".into()],
            alphabet: 2,
            n_min: 1,
            n_max: 16,
            budget: lang::DEFAULT_BUDGET,
        }
    }
}

fn complexity_cmd(ctx: &mut Ctx, cfg: ComplexityConfig) -> Result<()> {
    let x = ConcatSubshift::new(parse_words(&cfg.generators, cfg.alphabet)?)?;
    let rows = lang::complexity_table(&x, cfg.n_min..=cfg.n_max, Budget(cfg.budget))?;
    ctx.csv("complexity.csv", |buf| lang::write_complexity_csv(buf, &rows))
}

// ---------------------------------------------------------------- measures

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub generators: Vec<String>,
    pub alphabet: u32,
    pub length: usize,
    /// Uniform when absent.
    pub weights: Option<Vec<f64>>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            generators: vec!["000000001".into(), "011111111".into()],
            alphabet: 2,
            length: 100_000,
            weights: None,
        }
    }
}

impl SampleConfig {
    fn sample(&self, seed: u64) -> Result<Word> {
        let x = ConcatSubshift::new(parse_words(&self.generators, self.alphabet)?)?;
        let w = self
            .weights
            .clone()
            .unwrap_or_else(|| measures::uniform_weights(x.generators().len()));
        measures::sample_point(&x, self.length, seed, &w)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoverConfig {
    pub sample: SampleConfig,
    pub n: usize,
    pub eps: Vec<String>,
    pub method: CoverMethod,
    /// Ball centers; the measure's support when absent.
    pub universe: Option<Vec<String>>,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            sample: SampleConfig::default(),
            n: 6,
            eps: vec!["1/10".into(), "1/5".into(), "3/10".into()],
            method: CoverMethod::Greedy,
            universe: None,
        }
    }
}

fn cover_cmd(ctx: &mut Ctx, cfg: CoverConfig) -> Result<()> {
    let x = cfg.sample.sample(ctx.seed)?;
    let m = measures::empirical_measure(&x, cfg.n)?.with_provenance(Some(ctx.seed), None);
    let universe = match &cfg.universe {
        Some(u) => parse_words(u, cfg.sample.alphabet)?,
        None => m.support().cloned().collect(),
    };
    let results = cfg
        .eps
        .iter()
        .map(|e| measures::covering_number(&m, crate::words::parse_frac(e)?, &universe, cfg.method))
        .collect::<Result<Vec<_>>>()?;
    for r in &results {
        ctx.check(
            r.covered_mass + r.epsilon > Frac::from_integer(1),
            format!("cover at eps = {} carries only {}", r.epsilon, r.covered_mass),
        );
    }
    ctx.csv("measure.csv", |buf| m.write_csv(buf))?;
    ctx.json("cover.json", &results)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuietConfig {
    /// Base words `w_i`; drawn from `codebook` when absent.
    pub base: Option<Vec<String>>,
    pub codebook: CodebookConfig,
    pub alphabet: u32,
    /// Repetitions `M`; generators are `v_i = w_i^M`.
    pub reps: usize,
    /// Window length `P`; `2 N` when absent.
    pub p: Option<usize>,
    pub sample_len: usize,
    #[serde(with = "frac_text")]
    pub tolerance: Frac,
}

impl Default for QuietConfig {
    fn default() -> Self {
        QuietConfig {
            base: None,
            codebook: CodebookConfig {
                n: 320,
                max_words: Some(8),
                ..CodebookConfig::default()
            },
            alphabet: 2,
            reps: 50,
            p: None,
            sample_len: 1_000_000,
            tolerance: Frac::new(1, 100),
        }
    }
}

fn quiet_cmd(ctx: &mut Ctx, cfg: QuietConfig) -> Result<()> {
    let base = match &cfg.base {
        Some(b) => parse_words(b, cfg.alphabet)?,
        None => cfg.codebook.build(ctx.seed)?.1.words,
    };
    let n = base
        .first()
        .ok_or_else(|| Error::Precondition("no base words".into()))?
        .len();
    let gens: Vec<Word> = base.iter().map(|w| w.repeat(cfg.reps)).collect();
    let x = ConcatSubshift::new(gens.clone())?;
    let p = cfg.p.unwrap_or(2 * n);
    let sample = measures::sample_point(&x, cfg.sample_len, ctx.seed, &measures::uniform_weights(gens.len()))?;
    let m = measures::empirical_measure(&sample, p)?;
    let cert = measures::quiet_bound_check(&m, &gens, p, n, cfg.reps)?;
    ctx.write("quiet_base_words.txt", words_text(&base))?;
    ctx.json("quiet.json", &cert)?;
    ctx.check(cert.holds, "mass >= 1 - (P-1)/(NM) - boundary slack");
    ctx.check(cert.holds_within(cfg.tolerance), format!("mass >= 1 - (P-1)/(NM) - {}", cfg.tolerance));
    Ok(())
}

// ---------------------------------------------------------------- liouville

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LiouvilleConfig {
    pub kind: SeqKind,
    pub n_max: u64,
    pub n_range: Vec<usize>,
    pub oracle_prefix: usize,
    pub sieve_budget: u64,
    pub cache: bool,
}

impl Default for LiouvilleConfig {
    fn default() -> Self {
        LiouvilleConfig {
            kind: SeqKind::Liouville,
            n_max: 10_000_000,
            n_range: (1..=16).collect(),
            oracle_prefix: 10_000,
            sieve_budget: seq::DEFAULT_SIEVE_BUDGET,
            cache: true,
        }
    }
}

#[derive(Serialize)]
struct SeqChecks {
    nondecreasing: bool,
    submultiplicative: Vec<(usize, usize)>,
    oracle_mismatches: Vec<usize>,
}

fn liouville_cmd(ctx: &mut Ctx, cfg: LiouvilleConfig) -> Result<()> {
    let s = match cfg.kind {
        SeqKind::Liouville => seq::liouville(cfg.n_max, cfg.sieve_budget)?,
        SeqKind::Mobius => seq::mobius(cfg.n_max, cfg.sieve_budget)?,
        SeqKind::Custom => return Err(Error::Precondition("custom sequences are not generated".into())),
    };
    if cfg.cache {
        let mut buf = Vec::new();
        s.write_cache(&mut buf)?;
        ctx.write("sequence.bin", buf)?;
    }
    let rows = seq::growth_report(&s, &cfg.n_range)?;
    ctx.csv("growth.csv", |buf| seq::write_growth_csv(buf, &rows))?;
    let checks = sequence_checks(&s, &rows, cfg.oracle_prefix)?;
    ctx.check(checks.nondecreasing, "window counts nondecreasing in n");
    ctx.check(checks.submultiplicative.is_empty(), format!("submultiplicativity fails at {:?}", checks.submultiplicative));
    ctx.check(checks.oracle_mismatches.is_empty(), format!("oracle disagrees at n = {:?}", checks.oracle_mismatches));
    ctx.json("sequence_checks.json", &checks)
}

fn sequence_checks(s: &ArithmeticSequence, rows: &[seq::GrowthRow], prefix: usize) -> Result<SeqChecks> {
    let count = |n: usize| rows.iter().find(|r| r.n == n).map(|r| r.count);
    let mut sorted: Vec<&seq::GrowthRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let nondecreasing = sorted.windows(2).all(|w| w[0].count <= w[1].count);
    let mut bad = Vec::new();
    for r in &sorted {
        for m in 1..r.n {
            if let (Some(a), Some(b)) = (count(m), count(r.n - m)) {
                if r.count > a * b {
                    bad.push((m, r.n - m));
                }
            }
        }
    }
    let symbols = s.symbols();
    let head = &symbols[..prefix.min(symbols.len())];
    let sigma = s.alphabet().size();
    let mut mismatches = Vec::new();
    for r in &sorted {
        if r.n <= head.len() && seq::window_count(head, sigma, r.n)? != seq::naive_window_count(head, r.n) {
            mismatches.push(r.n);
        }
    }
    Ok(SeqChecks {
        nondecreasing,
        submultiplicative: bad,
        oracle_mismatches: mismatches,
    })
}

// ---------------------------------------------------------------- report

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub a: Sequence,
    pub b: Sequence,
    pub sample: SampleConfig,
    pub ns: Vec<usize>,
    #[serde(with = "frac_text")]
    pub eps: Frac,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            a: log_seq(),
            b: square(),
            sample: SampleConfig::default(),
            ns: vec![4, 8, 12],
            eps: Frac::new(1, 8),
        }
    }
}

fn report_cmd(ctx: &mut Ctx, cfg: ReportConfig) -> Result<()> {
    let x = cfg.sample.sample(ctx.seed)?;
    let ks = cfg
        .ns
        .iter()
        .map(|&n| {
            let m = measures::empirical_measure(&x, n)?;
            let universe: Vec<Word> = m.support().cloned().collect();
            let r = measures::covering_number(&m, cfg.eps, &universe, CoverMethod::Greedy)?;
            Ok((n as u64, cfg.eps, r.k() as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = measures::slow_entropy_report(&ks, &cfg.a, &cfg.b)?;
    ctx.csv("slow_entropy.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["n", "eps", "k", "a_n", "b_n", "k_over_a", "k_over_b"])?;
        for r in &rows {
            w.write_record([
                r.n.to_string(),
                r.eps.to_string(),
                r.k.to_string(),
                r.a_n.clone(),
                r.b_n.clone(),
                r.k_over_a.clone(),
                r.k_over_b.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })
}

/// Reads a config file, or returns `null` for defaults.
pub fn load_config(path: Option<&Path>) -> Result<Value> {
    match path {
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => Ok(Value::Null),
    }
}
