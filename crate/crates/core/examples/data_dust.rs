//! Is a lexicon extension worth its bits? Three extensions of agreement
//! grammars judged against single contrasts of the agreement suite.

use mglab::bundled::{agreement_lexicon, agreement_singular, agreement_without, bundled};
use mglab::metrics::classify_data_dust;
use mglab::{BenchConfig, Engine};

fn main() {
    let suite = bundled("agreement").unwrap().suite;
    let cfg = BenchConfig::default();
    let full = agreement_lexicon();
    for (base, contrast) in [
        (agreement_singular(), "local"),
        (agreement_singular(), "author"),
        (agreement_without("news"), "news"),
    ] {
        let v = classify_data_dust(&base, &full, &suite, contrast, Engine::Classic, &cfg).unwrap();
        println!(
            "{} -> {} on {contrast}: {:?} (+{} bits, {} units fixed)",
            base.name(),
            full.name(),
            v.verdict,
            v.size_delta_bits,
            v.new_items_captured
        );
    }
}
