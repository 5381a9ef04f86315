//! Negative polarity "mai" is licensed by a c-commanding negative subject.

use mglab::bundled;
use mglab::classic::{recognize, ClassicConfig, Recognition};

fn main() {
    let b = bundled::bundled("npi").unwrap();
    let lex = &b.lexicon;
    for id in ["nessuno-mai", "maria-gia", "maria-mai"] {
        let item = b.suite.item(id).unwrap();
        let Recognition::Accept(ds) = recognize(lex, &item.tokens, &ClassicConfig::default()).unwrap() else {
            println!("{id}: no derivation");
            continue;
        };
        let d = &ds[0];
        for adverb in ["mai", "già"] {
            let Some(a) = d.leaf(lex, adverb) else { continue };
            for subject in ["Nessuno", "Maria"] {
                if let Some(s) = d.leaf(lex, subject) {
                    println!("{id}: {subject} c-commands {adverb}: {}", d.c_commands(s, a).unwrap());
                }
            }
        }
    }
}
