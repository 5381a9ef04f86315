//! The `mglab` command line. [`run`] takes the argument list and returns the
//! exit code with everything that would be printed, so it can be tested
//! without spawning a process.
//!
//! Exit codes: 0 success, 1 a grammar or suite verdict went against the input
//! (invalid lexicon, rejected sentence, imperfect benchmark), 2 usage or I/O
//! errors.
//!
//! With `--format machine` every command prints one JSON document whose
//! shape is given by the `*Output` types below; `command` and `config` are
//! always present.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bench::{load_suite, run_suite, BenchConfig, Engine, SuiteResult, TestSuite};
use crate::bundled;
use crate::classic::{
    count_steps, derive_all, recognize, unconstrained_merge_demo, ClassicConfig, DisplayTree, Recognition,
    RejectReason, StepsMode,
};
use crate::emg::{emg_parse, EmgConfig, EmgOutcome};
use crate::lexicon::Lexicon;
use crate::metrics::{compare_adequacy, grammar_size_bits, AdequacyReport, GrammarMetrics};

/// Environment variable naming a TOML file with default settings.
pub const CONFIG_ENV: &str = "MGLAB_CONFIG";

#[derive(Parser, Debug)]
#[command(name = "mglab", version, about = "Minimalist Grammar laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GlobalOpts {
    /// TOML file with default settings
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub engine: Option<EngineArg>,
    /// Largest number of lexical selections when enumerating
    #[arg(long, global = true)]
    pub max_leaves: Option<usize>,
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    /// Enumeration stops with an error after this many expressions
    #[arg(long, global = true)]
    pub state_cap: Option<usize>,
    /// Extra (silent) selections allowed beyond sentence length
    #[arg(long, global = true)]
    pub silent_allowance: Option<usize>,
    /// States the incremental parser may explore
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, global = true, value_enum)]
    pub steps_mode: Option<StepsArg>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a lexicon (and optionally a suite) for errors
    Validate {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        suite: Option<PathBuf>,
    },
    /// Derive a sentence and print the step trace
    Derive {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// List every sentence the lexicon derives within the bounds
    Generate {
        #[arg(long)]
        lexicon: PathBuf,
    },
    /// Accept or reject a sentence
    Recognize {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Score a lexicon on a suite
    Bench {
        #[arg(long, required_unless_present = "bundled")]
        lexicon: Option<PathBuf>,
        #[arg(long, required_unless_present = "bundled")]
        suite: Option<PathBuf>,
        /// Use a shipped grammar and suite instead of files
        #[arg(long, conflicts_with_all = ["lexicon", "suite"])]
        bundled: Option<String>,
    },
    /// Compare two lexicons by size and coverage on one suite
    Mdl {
        /// Given twice
        #[arg(long, required = true)]
        lexicon: Vec<PathBuf>,
        #[arg(long)]
        suite: PathBuf,
    },
    /// Compare checked derivations with feature-blind Merge
    Overgen {
        #[arg(long)]
        lexicon: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineArg {
    Classic,
    Emg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepsArg {
    PerItem,
    Batch,
}

/// Settings after merging defaults, the config file and flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub engine: EngineArg,
    pub max_leaves: usize,
    pub max_steps: usize,
    pub state_cap: usize,
    pub silent_allowance: usize,
    pub budget: usize,
    pub format: FormatArg,
    pub steps_mode: StepsArg,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = ClassicConfig::default();
        RunConfig {
            engine: EngineArg::Classic,
            max_leaves: 6,
            max_steps: c.max_steps,
            state_cap: c.state_cap,
            silent_allowance: c.silent_allowance,
            budget: EmgConfig::default().budget,
            format: FormatArg::Text,
            steps_mode: StepsArg::Batch,
        }
    }
}

/// Config file contents; every key is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    engine: Option<EngineArg>,
    max_leaves: Option<usize>,
    max_steps: Option<usize>,
    state_cap: Option<usize>,
    silent_allowance: Option<usize>,
    budget: Option<usize>,
    format: Option<FormatArg>,
    steps_mode: Option<StepsArg>,
}

impl RunConfig {
    fn resolve(opts: &GlobalOpts) -> Result<RunConfig, String> {
        let file = match &opts.config {
            Some(p) => {
                let text = read(p)?;
                toml::from_str::<FileConfig>(&text).map_err(|e| format!("{}: {e}", p.display()))?
            }
            None => FileConfig::default(),
        };
        let d = RunConfig::default();
        let cfg = RunConfig {
            engine: opts.engine.or(file.engine).unwrap_or(d.engine),
            max_leaves: opts.max_leaves.or(file.max_leaves).unwrap_or(d.max_leaves),
            max_steps: opts.max_steps.or(file.max_steps).unwrap_or(d.max_steps),
            state_cap: opts.state_cap.or(file.state_cap).unwrap_or(d.state_cap),
            silent_allowance: opts.silent_allowance.or(file.silent_allowance).unwrap_or(d.silent_allowance),
            budget: opts.budget.or(file.budget).unwrap_or(d.budget),
            format: opts.format.or(file.format).unwrap_or(d.format),
            steps_mode: opts.steps_mode.or(file.steps_mode).unwrap_or(d.steps_mode),
        };
        for (name, v) in [
            ("max-leaves", cfg.max_leaves),
            ("max-steps", cfg.max_steps),
            ("state-cap", cfg.state_cap),
            ("budget", cfg.budget),
        ] {
            if v == 0 {
                return Err(format!("--{name} must be positive"));
            }
        }
        Ok(cfg)
    }

    pub fn classic(&self) -> ClassicConfig {
        ClassicConfig { max_steps: self.max_steps, state_cap: self.state_cap, silent_allowance: self.silent_allowance }
    }

    pub fn emg(&self) -> EmgConfig {
        EmgConfig { budget: self.budget, ..EmgConfig::default() }
    }

    pub fn bench(&self) -> BenchConfig {
        BenchConfig { classic: self.classic(), emg: self.emg() }
    }

    fn engine(&self) -> Engine {
        match self.engine {
            EngineArg::Classic => Engine::Classic,
            EngineArg::Emg => Engine::Emg,
        }
    }

    fn steps(&self) -> StepsMode {
        match self.steps_mode {
            StepsArg::PerItem => StepsMode::PerItem,
            StepsArg::Batch => StepsMode::Batch,
        }
    }

    /// One-line summary printed at the top of every text report.
    pub fn header(&self) -> String {
        format!(
            "# engine={:?} max_leaves={} max_steps={} state_cap={} silent_allowance={} budget={} steps_mode={}\n",
            self.engine,
            self.max_leaves,
            self.max_steps,
            self.state_cap,
            self.silent_allowance,
            self.budget,
            steps_label(self.steps()),
        )
        .to_lowercase()
    }
}

fn steps_label(m: StepsMode) -> &'static str {
    match m {
        StepsMode::PerItem => "PER_ITEM",
        StepsMode::Batch => "BATCH",
    }
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: msg.into() }
    }

    fn failure(msg: impl Into<String>) -> Self {
        Outcome { code: 1, stdout: String::new(), stderr: msg.into() }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Reads and parses a lexicon: I/O problems are usage errors (2), an
/// invalid lexicon is a grammar failure (1).
fn load_lexicon(path: &Path) -> Result<Lexicon, Outcome> {
    let text = read(path).map_err(Outcome::usage)?;
    Lexicon::parse(&text).map_err(|e| Outcome::failure(format!("{}: {e}\n", path.display())))
}

fn load_suite_file(path: &Path) -> Result<TestSuite, Outcome> {
    let text = read(path).map_err(Outcome::usage)?;
    load_suite(&text).map_err(|e| Outcome::failure(format!("{}: {e}\n", path.display())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateOutput {
    pub command: String,
    pub config: RunConfig,
    pub lexicon: String,
    pub valid: bool,
    pub items: usize,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeriveOutput {
    pub command: String,
    pub config: RunConfig,
    pub sentence: Vec<String>,
    pub derivable: bool,
    pub derivations: usize,
    pub trace: Vec<String>,
    pub brackets: Option<String>,
    pub sets: Option<String>,
    pub tree: Option<DisplayTree>,
    pub steps: Option<usize>,
    pub steps_mode: String,
    pub peak_memory: Option<usize>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerateOutput {
    pub command: String,
    pub config: RunConfig,
    pub sentences: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchOutput {
    pub command: String,
    pub config: RunConfig,
    pub result: SuiteResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MdlOutput {
    pub command: String,
    pub config: RunConfig,
    pub metrics: Vec<GrammarMetrics>,
    pub accuracy: Vec<Option<f64>>,
    pub comparison: AdequacyReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OvergenOutput {
    pub command: String,
    pub config: RunConfig,
    pub checked: Vec<String>,
    pub unconstrained: Vec<String>,
    /// Unconstrained yields the checked grammar does not derive.
    pub extra: Vec<String>,
    pub strict_superset: bool,
}

fn emit<T: Serialize>(cfg: &RunConfig, value: &T, text: impl FnOnce() -> String) -> String {
    match cfg.format {
        FormatArg::Machine => {
            let mut s = serde_json::to_string_pretty(value).expect("output serializes");
            s.push('\n');
            s
        }
        FormatArg::Text => format!("{}{}", cfg.header(), text()),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let msg = e.render().to_string();
            return if code == 0 { Outcome::ok(0, msg) } else { Outcome::usage(msg) };
        }
    };
    let cfg = match RunConfig::resolve(&cli.opts) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("{e}\n")),
    };
    let result = match &cli.command {
        Command::Validate { lexicon, suite } => validate(&cfg, lexicon, suite.as_deref()),
        Command::Derive { lexicon, words } => derive(&cfg, lexicon, words),
        Command::Recognize { lexicon, words } => recognize_cmd(&cfg, lexicon, words),
        Command::Generate { lexicon } => generate(&cfg, lexicon),
        Command::Bench { lexicon, suite, bundled } => bench(&cfg, lexicon.as_deref(), suite.as_deref(), bundled.as_deref()),
        Command::Mdl { lexicon, suite } => match lexicon.as_slice() {
            [a, b] => mdl(&cfg, a, b, suite),
            _ => Err(Outcome::usage("mdl takes exactly two --lexicon files\n")),
        },
        Command::Overgen { lexicon } => overgen(&cfg, lexicon),
    };
    result.unwrap_or_else(|o| o)
}

fn validate(cfg: &RunConfig, path: &Path, suite: Option<&Path>) -> Result<Outcome, Outcome> {
    let text = read(path).map_err(Outcome::usage)?;
    let mut diagnostics = Vec::new();
    let mut items = 0;
    match Lexicon::parse(&text) {
        Ok(lex) => items = lex.len(),
        Err(e) => diagnostics.push(format!("{}: {e}", path.display())),
    }
    if let Some(sp) = suite {
        let st = read(sp).map_err(Outcome::usage)?;
        if let Err(e) = load_suite(&st) {
            diagnostics.push(format!("{}: {e}", sp.display()));
        }
    }
    let out = ValidateOutput {
        command: "validate".into(),
        config: cfg.clone(),
        lexicon: path.display().to_string(),
        valid: diagnostics.is_empty(),
        items,
        diagnostics,
    };
    let code = if out.valid { 0 } else { 1 };
    Ok(Outcome::ok(
        code,
        emit(cfg, &out, || {
            if out.valid {
                format!("{}: ok, {} items\n", out.lexicon, out.items)
            } else {
                out.diagnostics.iter().map(|d| format!("{d}\n")).collect()
            }
        }),
    ))
}

fn derive(cfg: &RunConfig, path: &Path, words: &[String]) -> Result<Outcome, Outcome> {
    let lex = load_lexicon(path)?;
    let mut out = DeriveOutput {
        command: "derive".into(),
        config: cfg.clone(),
        sentence: words.to_vec(),
        derivable: false,
        derivations: 0,
        trace: Vec::new(),
        brackets: None,
        sets: None,
        tree: None,
        steps: None,
        steps_mode: steps_label(cfg.steps()).into(),
        peak_memory: None,
        reason: None,
    };
    match cfg.engine() {
        Engine::Classic => match recognize(&lex, words, &cfg.classic()).map_err(|e| Outcome::failure(format!("{e}\n")))? {
            Recognition::Accept(ds) => {
                let d = &ds[0];
                let root = d.result().expect("nonempty derivation");
                out.derivable = true;
                out.derivations = ds.len();
                out.trace = d.trace(&lex).lines().map(String::from).collect();
                out.brackets = Some(root.tree().brackets(&lex));
                out.sets = Some(root.tree().sets(&lex));
                out.tree = Some(root.tree().to_display(&lex));
                out.steps = Some(count_steps(d, cfg.steps()));
            }
            Recognition::Reject(r) => out.reason = Some(reject_text(&r)),
        },
        Engine::Emg => match emg_parse(&lex, words, &cfg.emg()).map_err(|e| Outcome::failure(format!("{e}\n")))? {
            EmgOutcome::Success(s) => {
                out.derivable = true;
                out.derivations = 1;
                out.brackets = Some(s.state.brackets(&lex));
                out.sets = Some(s.state.sets(&lex));
                out.trace = s.trace;
                out.peak_memory = Some(s.peak_memory);
            }
            EmgOutcome::Failure(f) => out.reason = Some(format!("failed at word {}: {}", f.position, f.reason)),
        },
    }
    let code = if out.derivable { 0 } else { 1 };
    Ok(Outcome::ok(
        code,
        emit(cfg, &out, || {
            let mut s = String::new();
            for l in &out.trace {
                s.push_str(l);
                s.push('\n');
            }
            if let Some(b) = &out.brackets {
                s.push_str(&format!("tree: {b}\n"));
            }
            if let Some(b) = &out.sets {
                s.push_str(&format!("sets: {b}\n"));
            }
            if let Some(n) = out.steps {
                s.push_str(&format!("steps({})={n}\n", out.steps_mode));
            }
            if let Some(m) = out.peak_memory {
                s.push_str(&format!("peak_memory={m}\n"));
            }
            if let Some(r) = &out.reason {
                s.push_str(&format!("no derivation: {r}\n"));
            }
            s
        }),
    ))
}

fn reject_text(r: &RejectReason) -> String {
    match r {
        RejectReason::UnknownToken(w) => format!("unknown word '{w}'"),
        RejectReason::NoDerivation => "no derivation within the bounds".into(),
    }
}

fn recognize_cmd(cfg: &RunConfig, path: &Path, words: &[String]) -> Result<Outcome, Outcome> {
    let out = derive(cfg, path, words)?;
    if cfg.format == FormatArg::Machine {
        let mut doc: DeriveOutput = serde_json::from_str(&out.stdout).expect("own output parses");
        doc.command = "recognize".into();
        return Ok(Outcome::ok(out.code, emit(cfg, &doc, String::new)));
    }
    let verdict = if out.code == 0 { "ACCEPT" } else { "REJECT" };
    let reason = out.stdout.lines().find_map(|l| l.strip_prefix("no derivation: ")).map(|r| format!(" ({r})"));
    Ok(Outcome::ok(out.code, format!("{}{verdict}{}\n", cfg.header(), reason.unwrap_or_default())))
}

fn generate(cfg: &RunConfig, path: &Path) -> Result<Outcome, Outcome> {
    let lex = load_lexicon(path)?;
    let ds = derive_all(&lex, cfg.max_leaves, &cfg.classic()).map_err(|e| Outcome::failure(format!("{e}\n")))?;
    let set: BTreeSet<String> = ds.into_iter().map(|(y, _)| y.join(" ")).collect();
    let out = GenerateOutput { command: "generate".into(), config: cfg.clone(), sentences: set.into_iter().collect() };
    Ok(Outcome::ok(0, emit(cfg, &out, || out.sentences.iter().map(|s| format!("{s}\n")).collect())))
}

fn bench(
    cfg: &RunConfig,
    lexicon: Option<&Path>,
    suite: Option<&Path>,
    name: Option<&str>,
) -> Result<Outcome, Outcome> {
    let (lex, suite) = match (name, lexicon, suite) {
        (Some(n), _, _) => {
            let b = bundled::bundled(n).ok_or_else(|| {
                let names: Vec<_> = bundled::bundled_suites().iter().map(|b| b.name).collect();
                Outcome::usage(format!("no bundled suite `{n}`; available: {}\n", names.join(", ")))
            })?;
            (b.lexicon, b.suite)
        }
        (None, Some(l), Some(s)) => (load_lexicon(l)?, load_suite_file(s)?),
        _ => return Err(Outcome::usage("bench needs --bundled or both --lexicon and --suite\n")),
    };
    let result = run_suite(&lex, cfg.engine(), &suite, &cfg.bench());
    let code = if result.is_perfect() { 0 } else { 1 };
    let out = BenchOutput { command: "bench".into(), config: cfg.clone(), result };
    Ok(Outcome::ok(code, emit(cfg, &out, || out.result.report())))
}

fn mdl(cfg: &RunConfig, a: &Path, b: &Path, suite: &Path) -> Result<Outcome, Outcome> {
    let (la, lb) = (load_lexicon(a)?, load_lexicon(b)?);
    let suite = load_suite_file(suite)?;
    let bc = cfg.bench();
    let ra = run_suite(&la, cfg.engine(), &suite, &bc);
    let rb = run_suite(&lb, cfg.engine(), &suite, &bc);
    let comparison = compare_adequacy((&la, &ra), (&lb, &rb)).map_err(|e| Outcome::failure(format!("{e}\n")))?;
    let out = MdlOutput {
        command: "mdl".into(),
        config: cfg.clone(),
        metrics: vec![grammar_size_bits(&la), grammar_size_bits(&lb)],
        accuracy: vec![ra.accuracy, rb.accuracy],
        comparison,
    };
    Ok(Outcome::ok(
        0,
        emit(cfg, &out, || {
            let mut s = format!("{:<20} {:>6} {:>10} {:>10}\n", "grammar", "items", "total_bits", "accuracy");
            for (m, acc) in out.metrics.iter().zip(&out.accuracy) {
                let acc = acc.map(|a| format!("{a:.3}")).unwrap_or_else(|| "n/a".into());
                s.push_str(&format!("{:<20} {:>6} {:>10} {:>10}\n", m.name, m.item_count, m.total_bits, acc));
            }
            s.push_str(&out.comparison.text());
            s
        }),
    ))
}

fn overgen(cfg: &RunConfig, path: &Path) -> Result<Outcome, Outcome> {
    let lex = load_lexicon(path)?;
    let fail = |e: crate::classic::DerivationError| Outcome::failure(format!("{e}\n"));
    let checked: BTreeSet<String> =
        derive_all(&lex, cfg.max_leaves, &cfg.classic()).map_err(fail)?.into_iter().map(|(y, _)| y.join(" ")).collect();
    let free: BTreeSet<String> = unconstrained_merge_demo(&lex, cfg.max_leaves, cfg.state_cap)
        .map_err(fail)?
        .into_iter()
        .map(|y| y.join(" "))
        .collect();
    let out = OvergenOutput {
        command: "overgen".into(),
        config: cfg.clone(),
        extra: free.difference(&checked).cloned().collect(),
        strict_superset: checked.is_subset(&free) && free.len() > checked.len(),
        checked: checked.into_iter().collect(),
        unconstrained: free.into_iter().collect(),
    };
    Ok(Outcome::ok(
        0,
        emit(cfg, &out, || {
            let mut s = format!(
                "checked Merge: {} sentences\nfeature-blind Merge: {} sentences\nstrict superset: {}\n",
                out.checked.len(),
                out.unconstrained.len(),
                out.strict_superset
            );
            s.push_str("only feature-blind Merge derives:\n");
            for e in &out.extra {
                s.push_str(&format!("  {e}\n"));
            }
            s
        }),
    ))
}
