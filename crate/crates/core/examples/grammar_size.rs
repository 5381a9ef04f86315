//! Size in bits of each bundled grammar, and a size/accuracy comparison of two
//! agreement grammars on the same suite.

use mglab::bundled::{agreement_lexicon, agreement_singular, bundled, bundled_suites};
use mglab::metrics::{compare_adequacy, grammar_size_bits};
use mglab::{run_suite, BenchConfig, Engine};

fn main() {
    println!("{:<12} {:>6} {:>10} {:>8} {:>6}", "grammar", "items", "inventory", "lexicon", "total");
    for b in bundled_suites() {
        let m = grammar_size_bits(&b.lexicon);
        println!(
            "{:<12} {:>6} {:>10} {:>8} {:>6}",
            b.name, m.item_count, m.inventory_bits, m.lexicon_bits, m.total_bits
        );
    }

    let suite = bundled("agreement").unwrap().suite;
    let cfg = BenchConfig::default();
    let (full, small) = (agreement_lexicon(), agreement_singular());
    let rf = run_suite(&full, Engine::Classic, &suite, &cfg);
    let rs = run_suite(&small, Engine::Classic, &suite, &cfg);
    println!();
    print!("{}", compare_adequacy((&full, &rf), (&small, &rs)).unwrap().text());
}
