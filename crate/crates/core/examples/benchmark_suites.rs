//! Scores every bundled grammar on its own suite with each engine it supports.

use mglab::bundled::bundled_suites;
use mglab::{run_suite, BenchConfig};

fn main() {
    let cfg = BenchConfig::default();
    for b in bundled_suites() {
        println!("== {} ({})", b.name, b.note);
        for &engine in &b.engines {
            let r = run_suite(&b.lexicon, engine, &b.suite, &cfg);
            print!("{}", r.report());
            for it in r.items.iter().filter(|o| o.derivable.is_none()) {
                println!("  {} undecided: {}", it.id, it.note);
            }
        }
    }
}
