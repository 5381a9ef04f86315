//! Grammars and suites shipped with the crate.

use crate::bench::{load_suite, nesting_suite, Engine, TestSuite};
use crate::lexicon::Lexicon;

pub const TRANSITIVE_LEX: &str = include_str!("../data/transitive.lex");
pub const TRANSITIVE_SUITE: &str = include_str!("../data/transitive.suite");
pub const WH_LEX: &str = include_str!("../data/wh.lex");
pub const WH_SUITE: &str = include_str!("../data/wh.suite");
pub const AGREEMENT_LEX: &str = include_str!("../data/agreement.lex");
pub const AGREEMENT_SUITE: &str = include_str!("../data/agreement.suite");
pub const FILLED_GAP_LEX: &str = include_str!("../data/filled_gap.lex");
pub const FILLED_GAP_SUITE: &str = include_str!("../data/filled_gap.suite");
pub const NPI_LEX: &str = include_str!("../data/npi.lex");
pub const NPI_SUITE: &str = include_str!("../data/npi.suite");
pub const ATB_LEX: &str = include_str!("../data/atb.lex");
pub const ATB_SUITE: &str = include_str!("../data/atb.suite");
pub const NESTING_LEX: &str = include_str!("../data/nesting.lex");

/// Depth of the nesting suite in [`bundled_suites`].
pub const DEFAULT_NESTING_DEPTH: usize = 3;

#[derive(Clone, Debug)]
pub struct Bundle {
    pub name: &'static str,
    pub lexicon: Lexicon,
    pub suite: TestSuite,
    /// Engines the grammar is meant for.
    pub engines: Vec<Engine>,
    /// No licensors or licensees anywhere in the lexicon.
    pub movement_free: bool,
    pub note: &'static str,
}

fn lex(text: &str) -> Lexicon {
    Lexicon::parse(text).expect("bundled lexicon parses")
}

fn suite(text: &str) -> TestSuite {
    load_suite(text).expect("bundled suite parses")
}

/// The three-item grammar of "Alice scolds Bill".
pub fn transitive_lexicon() -> Lexicon {
    lex(TRANSITIVE_LEX)
}

pub fn nesting_lexicon() -> Lexicon {
    lex(NESTING_LEX)
}

fn bundle(
    name: &'static str,
    lex_text: &str,
    suite: TestSuite,
    engines: &[Engine],
    note: &'static str,
) -> Bundle {
    let lexicon = lex(lex_text);
    let movement_free = lexicon.items().iter().all(|it| {
        it.features.iter().all(|f| {
            !matches!(f.kind, crate::features::FeatureKind::LicPlus | crate::features::FeatureKind::LicMinus)
        })
    });
    Bundle { name, lexicon, suite, engines: engines.to_vec(), movement_free, note }
}

pub fn agreement_lexicon() -> Lexicon {
    lex(AGREEMENT_LEX)
}

/// The agreement grammar with every plural item removed.
pub fn agreement_singular() -> Lexicon {
    let full = agreement_lexicon();
    let plural = |f: &crate::features::Feature| full.sym_name(f.symbol).ends_with("_pl");
    let items = full.items().iter().filter(|it| !it.features.iter().any(plural)).cloned().collect();
    full.with_items(items).expect("subset stays valid").renamed("agreement-sg")
}

/// The agreement grammar without the items pronounced `word`.
pub fn agreement_without(word: &str) -> Lexicon {
    let full = agreement_lexicon();
    let items = full.items().iter().filter(|it| it.phon_str() != word).cloned().collect();
    full.with_items(items).expect("subset stays valid").renamed(format!("agreement-no-{word}"))
}

pub fn bundled_suites() -> Vec<Bundle> {
    let both = [Engine::Classic, Engine::Emg];
    vec![
        bundle("transitive", TRANSITIVE_LEX, suite(TRANSITIVE_SUITE), &both, "word order of a transitive clause"),
        bundle("wh", WH_LEX, suite(WH_SUITE), &both, "a fronted object leaves a gap"),
        bundle(
            "agreement",
            AGREEMENT_LEX,
            suite(AGREEMENT_SUITE),
            &both,
            "number lives in the category (D_sg, D_pl); verbs select the subject number",
        ),
        bundle(
            "filled-gap",
            FILLED_GAP_LEX,
            suite(FILLED_GAP_SUITE),
            &both,
            "the clitic is a second object, so the moved wh-phrase finds no gap",
        ),
        bundle(
            "npi",
            NPI_LEX,
            suite(NPI_SUITE),
            &both,
            "mai heads a separate category chain that only a negative subject selects",
        ),
        bundle(
            "atb",
            ATB_LEX,
            suite(ATB_SUITE),
            &[Engine::Emg],
            "stipulated: the second conjunct's gap is a silent bound object (Dg); uses adjunction",
        ),
        bundle(
            "nesting",
            NESTING_LEX,
            nesting_suite(DEFAULT_NESTING_DEPTH),
            &[Engine::Emg],
            "right-branching and center-embedded relatives, generated per depth",
        ),
    ]
}

pub fn bundled(name: &str) -> Option<Bundle> {
    bundled_suites().into_iter().find(|b| b.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundles_load() {
        let names: Vec<_> = bundled_suites().iter().map(|b| b.name).collect();
        assert_eq!(names, ["transitive", "wh", "agreement", "filled-gap", "npi", "atb", "nesting"]);
        assert!(bundled("npi").unwrap().movement_free);
        assert!(!bundled("agreement").unwrap().movement_free);
        assert_eq!(transitive_lexicon().len(), 3);
    }

    #[test]
    fn suite_phenomena() {
        let agr = bundled("agreement").unwrap().suite;
        assert_eq!(agr.pairs[0].phenomenon, "nonlocal-agreement");
        assert_eq!(bundled("atb").unwrap().suite.pairs[0].phenomenon, "atb-extraction");
        let npi = bundled("npi").unwrap().suite;
        let mai_a = npi.item("maria-mai").unwrap();
        assert_eq!(mai_a.expected, crate::bench::Expected::Ungrammatical);
        assert!(mai_a.tokens.contains(&"mai".to_string()));
        assert_eq!(npi.item("nessuno-mai").unwrap().expected, crate::bench::Expected::Grammatical);
        let fg = bundled("filled-gap").unwrap().suite;
        assert_eq!(fg.item("che-clitic").unwrap().tokens.last().unwrap(), "-lo");
        assert_eq!(fg.item("che-clitic").unwrap().expected, crate::bench::Expected::Ungrammatical);
    }
}
