//! A small laboratory for Minimalist Grammars: lexicons, bottom-up and
//! incremental derivations, grammar-size metrics and minimal-pair benchmarks.

pub mod bench;
pub mod bundled;
pub mod classic;
pub mod cli;
pub mod emg;
pub mod features;
pub mod lexicon;
pub mod metrics;

pub use bench::{load_suite, run_suite, BenchConfig, Engine, SuiteResult, TestSuite, Verdict};
pub use classic::{
    count_steps, derive_all, linearize, merge, move_, recognize, select, ClassicConfig, Derivation,
    DerivationError, Expression, Recognition, StepsMode,
};
pub use emg::{emg_parse, EmgConfig, EmgOutcome, ExpectationState};
pub use features::{check_match, Feature, FeatureKind, Sym};
pub use lexicon::{parse_lexicon, serialize_lexicon, LexicalItem, Lexicon, LexiconError};
pub use metrics::{classify_data_dust, compare_adequacy, efficiency, grammar_size_bits, GrammarMetrics};
