//! Grammar size in bits, derivation cost, and grammar comparison.
//!
//! Size uses a fixed-field encoding:
//!
//! * the character alphabet is every character in a pronunciation or an
//!   inventory symbol; a character costs `char_width = max(1, ⌈log2 |alphabet|⌉)` bits
//! * a symbol reference costs `sym_width = max(1, ⌈log2 |inventory|⌉)` bits
//! * a feature costs a 3-bit kind field plus a symbol reference
//! * an item costs its pronunciation characters (words joined by one space,
//!   nothing for silent items) plus its features
//! * the inventory costs a 16-bit header, its symbol characters, and one
//!   symbol reference for the start category
//!
//! Every item has at least one feature, so adding an item always costs bits.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::bench::{run_suite, BenchConfig, Engine, SuiteResult, TestSuite, Verdict};
use crate::classic::{count_steps, Derivation, StepsMode};
use crate::lexicon::Lexicon;

pub const KIND_BITS: u64 = 3;
pub const INVENTORY_HEADER_BITS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarMetrics {
    pub name: String,
    pub inventory_bits: u64,
    pub lexicon_bits: u64,
    pub total_bits: u64,
    pub item_count: usize,
    pub feature_token_count: usize,
    pub char_width: u64,
    pub sym_width: u64,
}

fn width(n: usize) -> u64 {
    // ⌈log2 n⌉, at least one bit
    let mut w = 0u64;
    while (1usize << w) < n {
        w += 1;
    }
    w.max(1)
}

fn phon_text(lex: &Lexicon, id: usize) -> String {
    lex.render(lex.item_phon(id)).join(" ")
}

pub fn grammar_size_bits(lex: &Lexicon) -> GrammarMetrics {
    let mut alphabet = BTreeSet::new();
    for id in 0..lex.len() {
        alphabet.extend(phon_text(lex, id).chars());
    }
    for s in lex.inventory() {
        alphabet.extend(s.chars());
    }
    let char_width = width(alphabet.len());
    let sym_width = width(lex.inventory().len());
    let mut lexicon_bits = 0;
    let mut feature_token_count = 0;
    for id in 0..lex.len() {
        let nf = lex.item(id).features.len();
        feature_token_count += nf;
        lexicon_bits += phon_text(lex, id).chars().count() as u64 * char_width + nf as u64 * (KIND_BITS + sym_width);
    }
    let symbol_chars: u64 = lex.inventory().iter().map(|s| s.chars().count() as u64).sum();
    let inventory_bits = INVENTORY_HEADER_BITS + symbol_chars * char_width + sym_width;
    GrammarMetrics {
        name: lex.name().to_string(),
        inventory_bits,
        lexicon_bits,
        total_bits: inventory_bits + lexicon_bits,
        item_count: lex.len(),
        feature_token_count,
        char_width,
        sym_width,
    }
}

/// Steps of a derivation, with a run of selections counted once.
pub fn efficiency(d: &Derivation) -> usize {
    count_steps(d, StepsMode::Batch)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Adequacy {
    Dominates,
    DominatedBy,
    Equal,
    Incomparable,
}

impl Adequacy {
    pub fn flip(self) -> Self {
        match self {
            Adequacy::Dominates => Adequacy::DominatedBy,
            Adequacy::DominatedBy => Adequacy::Dominates,
            other => other,
        }
    }
}

/// Coverage and size of one grammar on one suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdequacyPoint {
    pub correct: usize,
    pub total_bits: u64,
}

/// Pareto order: more correct units is better, fewer bits is better.
pub fn compare_points(a: AdequacyPoint, b: AdequacyPoint) -> Adequacy {
    let no_worse = a.correct >= b.correct && a.total_bits <= b.total_bits;
    let no_better = a.correct <= b.correct && a.total_bits >= b.total_bits;
    match (no_worse, no_better) {
        (true, true) => Adequacy::Equal,
        (true, false) => Adequacy::Dominates,
        (false, true) => Adequacy::DominatedBy,
        (false, false) => Adequacy::Incomparable,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("results come from different suites ({0} and {1})")]
    SuiteMismatch(String, String),
    #[error("no contrast `{0}` in the suite")]
    ContrastAbsent(String),
    #[error("extended grammar lacks item {0}")]
    NotSuperset(String),
    #[error("extended grammar adds no items")]
    NoExtension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdequacyReport {
    pub a: String,
    pub b: String,
    pub a_point: AdequacyPoint,
    pub b_point: AdequacyPoint,
    pub verdict: Adequacy,
}

impl AdequacyReport {
    pub fn text(&self) -> String {
        format!(
            "{}: {} correct, {} bits\n{}: {} correct, {} bits\nverdict: {} {:?} {}\n",
            self.a,
            self.a_point.correct,
            self.a_point.total_bits,
            self.b,
            self.b_point.correct,
            self.b_point.total_bits,
            self.a,
            self.verdict,
            self.b
        )
    }
}

fn same_suite(a: &SuiteResult, b: &SuiteResult) -> bool {
    a.suite == b.suite && a.units.len() == b.units.len() && a.units.iter().zip(&b.units).all(|(x, y)| x.id == y.id)
}

pub fn compare_adequacy(
    a: (&Lexicon, &SuiteResult),
    b: (&Lexicon, &SuiteResult),
) -> Result<AdequacyReport, MetricsError> {
    if !same_suite(a.1, b.1) {
        return Err(MetricsError::SuiteMismatch(a.1.suite.clone(), b.1.suite.clone()));
    }
    let point = |(lex, r): (&Lexicon, &SuiteResult)| AdequacyPoint {
        correct: r.correct,
        total_bits: grammar_size_bits(lex).total_bits,
    };
    let (pa, pb) = (point(a), point(b));
    Ok(AdequacyReport {
        a: a.0.name().to_string(),
        b: b.0.name().to_string(),
        a_point: pa,
        b_point: pb,
        verdict: compare_points(pa, pb),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Dust {
    Covered,
    RelevantExtension,
    Dust,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DustVerdict {
    pub contrast_id: String,
    pub verdict: Dust,
    pub size_delta_bits: i64,
    /// Suite units wrong under the base grammar and correct under the extension.
    pub new_items_captured: usize,
}

/// Was growing `base` into `extended` worth it for `contrast_id`? Covered if
/// the base already gets the contrast right; otherwise a relevant extension
/// when the added items fix at least two units of the suite, dust when they
/// fix at most one.
pub fn classify_data_dust(
    base: &Lexicon,
    extended: &Lexicon,
    suite: &TestSuite,
    contrast_id: &str,
    engine: Engine,
    cfg: &BenchConfig,
) -> Result<DustVerdict, MetricsError> {
    if !suite.units().iter().any(|u| match u {
        crate::bench::Unit::Pair(p) => p.id == contrast_id,
        crate::bench::Unit::Item(i) => i.id == contrast_id,
    }) {
        return Err(MetricsError::ContrastAbsent(contrast_id.into()));
    }
    for (id, it) in base.items().iter().enumerate() {
        if !extended.items().contains(it) {
            return Err(MetricsError::NotSuperset(base.show_item(id)));
        }
    }
    if extended.len() == base.len() {
        return Err(MetricsError::NoExtension);
    }
    let before = run_suite(base, engine, suite, cfg);
    if before.verdict(contrast_id) == Some(Verdict::Correct) {
        return Ok(DustVerdict {
            contrast_id: contrast_id.into(),
            verdict: Dust::Covered,
            size_delta_bits: 0,
            new_items_captured: 0,
        });
    }
    let after = run_suite(extended, engine, suite, cfg);
    let captured = before
        .units
        .iter()
        .zip(&after.units)
        .filter(|(b, a)| b.verdict != Verdict::Correct && a.verdict == Verdict::Correct)
        .count();
    let delta = grammar_size_bits(extended).total_bits as i64 - grammar_size_bits(base).total_bits as i64;
    Ok(DustVerdict {
        contrast_id: contrast_id.into(),
        verdict: if captured >= 2 { Dust::RelevantExtension } else { Dust::Dust },
        size_delta_bits: delta,
        new_items_captured: captured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use proptest::prelude::*;

    #[test]
    fn transitive_grammar_size_by_hand() {
        // alphabet: A l i c e B s o d + D V = 11 characters -> 4 bits each
        // inventory of 2 symbols -> 1 bit per reference, 4 bits per feature
        // Alice 5*4 + 1*4 = 24, Bill 4*4 + 4 = 20, scolds 6*4 + 3*4 = 36
        // inventory 16 + 2*4 + 1 = 25
        let m = grammar_size_bits(&bundled::transitive_lexicon());
        assert_eq!((m.char_width, m.sym_width), (4, 1));
        assert_eq!(m.lexicon_bits, 80);
        assert_eq!(m.inventory_bits, 25);
        assert_eq!(m.total_bits, 105);
        assert_eq!((m.item_count, m.feature_token_count), (3, 5));
    }

    #[test]
    fn empty_lexicon_costs_only_inventory() {
        let lex = Lexicon::parse("inventory: D V\nstart: V\n").unwrap();
        let m = grammar_size_bits(&lex);
        assert_eq!(m.lexicon_bits, 0);
        // alphabet {D, V}: 1 bit per character
        assert_eq!(m.total_bits, 16 + 2 + 1);
    }

    #[test]
    fn width_is_ceil_log2() {
        let expect = [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (11, 4), (17, 5)];
        for (n, w) in expect {
            assert_eq!(width(n), w, "n = {n}");
        }
    }

    #[test]
    fn item_order_does_not_matter() {
        let lex = bundled::transitive_lexicon();
        let mut items = lex.items().to_vec();
        items.reverse();
        let shuffled = lex.with_items(items).unwrap();
        assert_eq!(grammar_size_bits(&lex), grammar_size_bits(&shuffled));
    }

    #[test]
    fn pareto_examples() {
        let p = |correct, total_bits| AdequacyPoint { correct, total_bits };
        assert_eq!(compare_points(p(3, 100), p(3, 120)), Adequacy::Dominates);
        assert_eq!(compare_points(p(3, 100), p(3, 100)), Adequacy::Equal);
        assert_eq!(compare_points(p(4, 130), p(3, 100)), Adequacy::Incomparable);
        assert_eq!(compare_points(p(2, 130), p(3, 100)), Adequacy::DominatedBy);
    }

    #[test]
    fn mismatched_suites() {
        let b = bundled::bundled("transitive").unwrap();
        let w = bundled::bundled("wh").unwrap();
        let cfg = BenchConfig::default();
        let rb = run_suite(&b.lexicon, Engine::Classic, &b.suite, &cfg);
        let rw = run_suite(&w.lexicon, Engine::Classic, &w.suite, &cfg);
        assert!(matches!(compare_adequacy((&b.lexicon, &rb), (&w.lexicon, &rw)), Err(MetricsError::SuiteMismatch(..))));
        let r = compare_adequacy((&b.lexicon, &rb), (&b.lexicon, &rb)).unwrap();
        assert_eq!(r.verdict, Adequacy::Equal);
    }

    #[test]
    fn dust_errors() {
        let b = bundled::bundled("transitive").unwrap();
        let cfg = BenchConfig::default();
        let small = b.lexicon.with_items(b.lexicon.items()[..2].to_vec()).unwrap();
        let e = classify_data_dust(&b.lexicon, &small, &b.suite, "order", Engine::Classic, &cfg);
        assert!(matches!(e, Err(MetricsError::NotSuperset(_))));
        let e = classify_data_dust(&b.lexicon, &b.lexicon, &b.suite, "order", Engine::Classic, &cfg);
        assert_eq!(e, Err(MetricsError::NoExtension));
        let e = classify_data_dust(&small, &b.lexicon, &b.suite, "nope", Engine::Classic, &cfg);
        assert_eq!(e, Err(MetricsError::ContrastAbsent("nope".into())));
    }

    proptest! {
        #[test]
        fn comparison_is_antisymmetric(a in (0usize..5, 0u64..5), b in (0usize..5, 0u64..5)) {
            let (pa, pb) = (AdequacyPoint { correct: a.0, total_bits: a.1 }, AdequacyPoint { correct: b.0, total_bits: b.1 });
            prop_assert_eq!(compare_points(pa, pb), compare_points(pb, pa).flip());
        }
    }
}
