//! Minimal-pair suites and a categorical scorer.
//!
//! Suite files are line based:
//!
//! ```text
//! suite: agreement
//! phenomenon: nonlocal-agreement
//! source: where the judgments come from
//! good author-is :: the author that the senators hurt is good | score: 7
//! bad author-are :: the author that the senators hurt are good
//! pair author = author-is / author-are
//! item lone :: *the good author
//! ```
//!
//! `phenomenon:` and `source:` apply to the items that follow. An `item` line
//! is grammatical unless its first token is starred. Scores (1 to 7) are kept
//! but never used for scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classic::{recognize, ClassicConfig, Recognition, RejectReason, StepsMode};
use crate::emg::{emg_parse, EmgConfig, EmgOutcome};
use crate::lexicon::Lexicon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Expected {
    Grammatical,
    Ungrammatical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestItem {
    pub id: String,
    pub tokens: Vec<String>,
    pub expected: Expected,
    pub phenomenon: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPair {
    pub id: String,
    pub good: String,
    pub bad: String,
    pub phenomenon: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSuite {
    pub name: String,
    pub items: Vec<TestItem>,
    pub pairs: Vec<MinimalPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: unknown item `{id}`")]
    UnknownItem { line: usize, id: String },
    #[error("line {line}: pair `{id}` needs a grammatical and an ungrammatical member")]
    PairExpectation { line: usize, id: String },
}

impl TestSuite {
    pub fn parse(text: &str) -> Result<Self, SuiteError> {
        load_suite(text)
    }

    pub fn item(&self, id: &str) -> Option<&TestItem> {
        self.items.iter().find(|i| i.id == id)
    }

    /// Scored units: every pair, then every item that belongs to no pair.
    pub fn units(&self) -> Vec<Unit<'_>> {
        let paired: BTreeSet<&str> = self.pairs.iter().flat_map(|p| [p.good.as_str(), p.bad.as_str()]).collect();
        let mut out: Vec<Unit<'_>> = self.pairs.iter().map(Unit::Pair).collect();
        out.extend(self.items.iter().filter(|i| !paired.contains(i.id.as_str())).map(Unit::Item));
        out
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("suite: {}\n", self.name);
        let mut phen = None;
        let mut src = String::new();
        for it in &self.items {
            if phen != Some(&it.phenomenon) {
                let _ = writeln!(out, "phenomenon: {}", it.phenomenon);
                phen = Some(&it.phenomenon);
            }
            if src != it.source {
                let _ = writeln!(out, "source: {}", it.source);
                src = it.source.clone();
            }
            let kind = match it.expected {
                Expected::Grammatical => "good",
                Expected::Ungrammatical => "bad",
            };
            let _ = write!(out, "{kind} {} :: {}", it.id, it.tokens.join(" "));
            if let Some(s) = it.score {
                let _ = write!(out, " | score: {s}");
            }
            out.push('\n');
        }
        for p in &self.pairs {
            let _ = writeln!(out, "pair {} = {} / {}", p.id, p.good, p.bad);
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Unit<'a> {
    Pair(&'a MinimalPair),
    Item(&'a TestItem),
}

pub fn load_suite(text: &str) -> Result<TestSuite, SuiteError> {
    let mut suite = TestSuite { name: "suite".into(), ..Default::default() };
    let mut phenomenon = String::from("unspecified");
    let mut source = String::new();
    let mut ids = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let syntax = |msg: &str| SuiteError::Syntax { line, msg: msg.into() };
        let trimmed = raw.split('#').next().unwrap_or("").trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("suite:") {
            suite.name = rest.trim().to_string();
        } else if let Some(rest) = trimmed.strip_prefix("phenomenon:") {
            phenomenon = rest.trim().to_string();
        } else if let Some(rest) = trimmed.strip_prefix("source:") {
            source = rest.trim().to_string();
        } else if let Some(rest) = trimmed.strip_prefix("pair ") {
            let (id, members) = rest.split_once('=').ok_or_else(|| syntax("expected `pair ID = GOOD / BAD`"))?;
            let (good, bad) = members.split_once('/').ok_or_else(|| syntax("expected `pair ID = GOOD / BAD`"))?;
            let (id, good, bad) = (id.trim(), good.trim(), bad.trim());
            if id.is_empty() || good.is_empty() || bad.is_empty() {
                return Err(syntax("empty id in pair"));
            }
            if !ids.insert(id.to_string()) {
                return Err(SuiteError::DuplicateId { line, id: id.into() });
            }
            let expected = |m: &str| {
                suite
                    .item(m)
                    .map(|i| i.expected)
                    .ok_or_else(|| SuiteError::UnknownItem { line, id: m.into() })
            };
            if expected(good)? != Expected::Grammatical || expected(bad)? != Expected::Ungrammatical {
                return Err(SuiteError::PairExpectation { line, id: id.into() });
            }
            let phenomenon = suite.item(good).map(|i| i.phenomenon.clone()).unwrap_or_default();
            suite.pairs.push(MinimalPair { id: id.into(), good: good.into(), bad: bad.into(), phenomenon });
        } else {
            let (kind, rest) = trimmed.split_once(' ').ok_or_else(|| syntax("unrecognized line"))?;
            if !matches!(kind, "good" | "bad" | "item") {
                return Err(syntax(&format!("unrecognized line starting with `{kind}`")));
            }
            let (id, body) = rest.split_once("::").ok_or_else(|| syntax("expected `ID :: tokens`"))?;
            let id = id.trim();
            if id.is_empty() || id.contains(char::is_whitespace) {
                return Err(syntax("item id must be one word"));
            }
            let (toks, score) = match body.split_once('|') {
                Some((t, s)) => {
                    let s = s.trim().strip_prefix("score:").ok_or_else(|| syntax("expected `| score: N`"))?;
                    let n: u8 = s.trim().parse().map_err(|_| syntax("score must be a number"))?;
                    if !(1..=7).contains(&n) {
                        return Err(syntax("score must be between 1 and 7"));
                    }
                    (t, Some(n))
                }
                None => (body, None),
            };
            let mut tokens: Vec<String> = toks.split_whitespace().map(String::from).collect();
            let expected = match kind {
                "good" => Expected::Grammatical,
                "bad" => Expected::Ungrammatical,
                _ => match tokens.first_mut() {
                    Some(t) if t.starts_with('*') => {
                        t.remove(0);
                        if t.is_empty() {
                            tokens.remove(0);
                        }
                        Expected::Ungrammatical
                    }
                    _ => Expected::Grammatical,
                },
            };
            if tokens.is_empty() {
                return Err(syntax("item has no tokens"));
            }
            if !ids.insert(id.to_string()) {
                return Err(SuiteError::DuplicateId { line, id: id.into() });
            }
            suite.items.push(TestItem {
                id: id.into(),
                tokens,
                expected,
                phenomenon: phenomenon.clone(),
                source: source.clone(),
                score,
            });
        }
    }
    Ok(suite)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Engine {
    Classic,
    Emg,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Classic => "CLASSIC",
            Engine::Emg => "EMG",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Correct,
    Wrong,
    Tie,
    Indeterminate,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub classic: ClassicConfig,
    pub emg: EmgConfig,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemOutcome {
    pub id: String,
    /// `None` when a search bound was hit.
    pub derivable: Option<bool>,
    pub note: String,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitResult {
    pub id: String,
    pub phenomenon: String,
    pub paired: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub lexicon: String,
    pub engine: Engine,
    pub items: Vec<ItemOutcome>,
    pub units: Vec<UnitResult>,
    pub correct: usize,
    pub total: usize,
    /// `None` for an empty suite.
    pub accuracy: Option<f64>,
}

impl SuiteResult {
    pub fn verdict(&self, unit: &str) -> Option<Verdict> {
        self.units.iter().find(|u| u.id == unit).map(|u| u.verdict)
    }

    pub fn is_perfect(&self) -> bool {
        self.correct == self.total
    }

    pub fn report(&self) -> String {
        let mut out = format!("suite {}  lexicon {}  engine {}\n", self.suite, self.lexicon, self.engine.name());
        let w = self.units.iter().map(|u| u.id.len()).max().unwrap_or(4).max(4);
        for u in &self.units {
            let kind = if u.paired { "pair" } else { "item" };
            let _ = writeln!(out, "  {kind} {:w$}  {:24} {:?}", u.id, u.phenomenon, u.verdict);
        }
        let acc = match self.accuracy {
            Some(a) => format!("{a:.3}"),
            None => "undefined (N=0)".into(),
        };
        let _ = writeln!(out, "accuracy {acc}  ({}/{})", self.correct, self.total);
        out
    }
}

/// Decides one sentence with the chosen engine.
pub fn judge(lex: &Lexicon, engine: Engine, tokens: &[String], cfg: &BenchConfig) -> ItemOutcome {
    let mut out = ItemOutcome { id: String::new(), derivable: None, note: String::new(), trace: Vec::new() };
    match engine {
        Engine::Classic => match recognize(lex, tokens, &cfg.classic) {
            Ok(Recognition::Accept(ds)) => {
                let d = &ds[0];
                out.derivable = Some(true);
                out.note = format!(
                    "{} derivation(s), steps {}",
                    ds.len(),
                    crate::classic::count_steps(d, StepsMode::Batch)
                );
                out.trace = d.trace(lex).lines().map(String::from).collect();
            }
            Ok(Recognition::Reject(r)) => {
                out.derivable = Some(false);
                out.note = match r {
                    RejectReason::UnknownToken(w) => format!("unknown word '{w}'"),
                    RejectReason::NoDerivation => "no derivation".into(),
                };
            }
            Err(e) => out.note = e.to_string(),
        },
        Engine::Emg => match emg_parse(lex, tokens, &cfg.emg) {
            Ok(EmgOutcome::Success(s)) => {
                out.derivable = Some(true);
                out.note = format!("peak memory {}", s.peak_memory);
                out.trace = s.trace;
            }
            Ok(EmgOutcome::Failure(f)) => {
                out.derivable = Some(false);
                out.note = format!("failed at {}: {}", f.position, f.reason);
            }
            Err(e) => out.note = e.to_string(),
        },
    }
    out
}

/// Scores every unit of `suite`. Items are judged on parallel threads;
/// the result does not depend on scheduling.
pub fn run_suite(lex: &Lexicon, engine: Engine, suite: &TestSuite, cfg: &BenchConfig) -> SuiteResult {
    let n = suite.items.len();
    let workers = thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(n.max(1));
    let mut outcomes: Vec<Option<ItemOutcome>> = vec![None; n];
    thread::scope(|s| {
        let chunk = n.div_ceil(workers).max(1);
        let handles: Vec<_> = suite
            .items
            .chunks(chunk)
            .map(|items| {
                s.spawn(move || {
                    items
                        .iter()
                        .map(|it| ItemOutcome { id: it.id.clone(), ..judge(lex, engine, &it.tokens, cfg) })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut k = 0;
        for h in handles {
            for o in h.join().expect("judging thread panicked") {
                outcomes[k] = Some(o);
                k += 1;
            }
        }
    });
    let items: Vec<ItemOutcome> = outcomes.into_iter().map(|o| o.expect("every item judged")).collect();
    let by_id: BTreeMap<&str, Option<bool>> = items.iter().map(|o| (o.id.as_str(), o.derivable)).collect();

    let units: Vec<UnitResult> = suite
        .units()
        .into_iter()
        .map(|u| match u {
            Unit::Pair(p) => {
                let verdict = match (by_id[p.good.as_str()], by_id[p.bad.as_str()]) {
                    (Some(true), Some(false)) => Verdict::Correct,
                    (Some(false), Some(true)) => Verdict::Wrong,
                    (Some(_), Some(_)) => Verdict::Tie,
                    _ => Verdict::Indeterminate,
                };
                UnitResult { id: p.id.clone(), phenomenon: p.phenomenon.clone(), paired: true, verdict }
            }
            Unit::Item(it) => {
                let verdict = match by_id[it.id.as_str()] {
                    None => Verdict::Indeterminate,
                    Some(d) if d == (it.expected == Expected::Grammatical) => Verdict::Correct,
                    Some(_) => Verdict::Wrong,
                };
                UnitResult { id: it.id.clone(), phenomenon: it.phenomenon.clone(), paired: false, verdict }
            }
        })
        .collect();
    let correct = units.iter().filter(|u| u.verdict == Verdict::Correct).count();
    let total = units.len();
    SuiteResult {
        suite: suite.name.clone(),
        lexicon: lex.name().to_string(),
        engine,
        items,
        units,
        correct,
        total,
        accuracy: (total > 0).then(|| correct as f64 / total as f64),
    }
}

const NOUNS: [&str; 6] = ["mouse", "cat", "dog", "fox", "wolf", "bear"];
const VERBS: [&str; 5] = ["chased", "bit", "scared", "followed", "watched"];

/// Deepest nesting the generators support.
pub const MAX_NESTING: usize = 5;

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

/// Right-branching relatives, `depth` of them:
/// `I saw a dog that bit a cat that chased a mouse that ran away`.
pub fn right_branching(depth: usize) -> Vec<String> {
    assert!((1..=MAX_NESTING).contains(&depth), "depth must be 1..={MAX_NESTING}");
    fn np(k: usize) -> String {
        if k == 1 {
            format!("a {} that ran away", NOUNS[0])
        } else {
            format!("a {} that {} {}", NOUNS[k - 1], VERBS[k - 2], np(k - 1))
        }
    }
    words(&format!("I saw {}", np(depth)))
}

/// Center-embedded relatives, `depth` of them:
/// `a mouse that a cat that a dog bit chased ran away`.
pub fn center_embedded(depth: usize) -> Vec<String> {
    assert!((1..=MAX_NESTING).contains(&depth), "depth must be 1..={MAX_NESTING}");
    let mut s = format!("a {}", NOUNS[0]);
    for noun in &NOUNS[1..=depth] {
        let _ = write!(s, " that a {noun}");
    }
    for verb in VERBS[..depth].iter().rev() {
        let _ = write!(s, " {verb}");
    }
    s.push_str(" ran away");
    words(&s)
}

/// Nesting suite at one depth. From depth 2 on, the center-embedded sentence
/// is paired with a variant missing its innermost verb.
pub fn nesting_suite(depth: usize) -> TestSuite {
    let item = |id: &str, tokens: Vec<String>, expected, phenomenon: &str| TestItem {
        id: id.into(),
        tokens,
        expected,
        phenomenon: phenomenon.into(),
        source: format!("relative clauses nested {depth} deep"),
        score: None,
    };
    let mut suite = TestSuite {
        name: format!("nesting-{depth}"),
        items: vec![
            item("right", right_branching(depth), Expected::Grammatical, "right-recursion"),
            item("center", center_embedded(depth), Expected::Grammatical, "center-embedding"),
        ],
        pairs: Vec::new(),
    };
    if depth >= 2 {
        let mut bad = center_embedded(depth);
        let innermost = VERBS[depth - 1];
        let at = bad.iter().position(|w| w == innermost).expect("innermost verb present");
        bad.remove(at);
        suite.items.push(item("center-short", bad, Expected::Ungrammatical, "center-embedding"));
        suite.pairs.push(MinimalPair {
            id: "center-pair".into(),
            good: "center".into(),
            bad: "center-short".into(),
            phenomenon: "center-embedding".into(),
        });
    }
    suite
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "suite: toy\nphenomenon: order\ngood a :: Alice scolds Bill | score: 7\nbad b :: Alice Bill scolds\npair p = a / b\nitem c :: *scolds Alice Bill\nitem d :: Bill scolds Alice\n";

    #[test]
    fn loads_items_pairs_and_scores() {
        let s = load_suite(TOY).unwrap();
        assert_eq!(s.name, "toy");
        assert_eq!(s.items.len(), 4);
        assert_eq!(s.items[0].score, Some(7));
        assert_eq!(s.items[2].expected, Expected::Ungrammatical);
        assert_eq!(s.items[2].tokens, vec!["scolds", "Alice", "Bill"]);
        assert_eq!(s.pairs[0].phenomenon, "order");
        assert_eq!(s.units().len(), 3);
        assert_eq!(load_suite(&s.serialize()).unwrap(), s);
    }

    #[test]
    fn suite_errors() {
        assert!(matches!(
            load_suite("good a :: x\ngood a :: y\n"),
            Err(SuiteError::DuplicateId { line: 2, .. })
        ));
        assert!(matches!(
            load_suite("good a :: x\ngood b :: y\npair p = a / b\n"),
            Err(SuiteError::PairExpectation { line: 3, .. })
        ));
        assert!(matches!(load_suite("pair p = a / b\n"), Err(SuiteError::UnknownItem { .. })));
        assert!(matches!(load_suite("maybe a :: x\n"), Err(SuiteError::Syntax { line: 1, .. })));
        assert!(matches!(load_suite("good a ::   \n"), Err(SuiteError::Syntax { .. })));
        assert!(matches!(load_suite("good a :: x | score: 9\n"), Err(SuiteError::Syntax { .. })));
    }

    #[test]
    fn nesting_goldens() {
        assert_eq!(right_branching(1).join(" "), "I saw a mouse that ran away");
        assert_eq!(right_branching(3).join(" "), "I saw a dog that bit a cat that chased a mouse that ran away");
        assert_eq!(center_embedded(1).join(" "), "a mouse that a cat chased ran away");
        assert_eq!(center_embedded(2).join(" "), "a mouse that a cat that a dog bit chased ran away");
        assert_eq!(
            center_embedded(3).join(" "),
            "a mouse that a cat that a dog that a fox scared bit chased ran away"
        );
        let s1 = nesting_suite(1);
        assert!(s1.items.iter().all(|i| i.expected == Expected::Grammatical));
        let s3 = nesting_suite(3);
        assert_eq!(s3.item("center-short").unwrap().tokens.join(" "), "a mouse that a cat that a dog that a fox bit chased ran away");
    }
}
