//! A fronted object: "what Alice describes" needs Move to check +wh, and the
//! in-situ order is rejected.

use mglab::bundled;
use mglab::classic::{recognize, ClassicConfig, Recognition};

fn main() {
    let b = bundled::bundled("wh").unwrap();
    let lex = &b.lexicon;
    let cfg = ClassicConfig::default();
    for s in ["what Alice describes", "Alice describes what", "Alice describes Alice"] {
        let words: Vec<&str> = s.split(' ').collect();
        match recognize(lex, &words, &cfg).unwrap() {
            Recognition::Accept(ds) => {
                println!("ACCEPT {s}");
                println!("{}", ds[0].trace(lex));
                println!("{}\n", ds[0].brackets(lex));
            }
            Recognition::Reject(why) => println!("REJECT {s}: {why:?}\n"),
        }
    }
}
