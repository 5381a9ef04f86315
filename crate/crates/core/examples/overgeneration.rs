//! Every order feature-blind Merge can build from three words, against the
//! orders the feature-checked grammar allows.

use mglab::bundled::transitive_lexicon;
use mglab::classic::{derive_yields, unconstrained_merge_demo, ClassicConfig};

fn main() {
    let lex = transitive_lexicon();
    let checked = derive_yields(&lex, 3, &ClassicConfig::default()).unwrap();
    let free = unconstrained_merge_demo(&lex, 3, 100_000).unwrap();
    for s in &free {
        let mark = if checked.contains(s) { " " } else { "*" };
        println!("{mark} {}", s.join(" "));
    }
    println!("{} of {} orders survive feature checking", checked.len(), free.len());
}
