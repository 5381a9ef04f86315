//! Word-by-word parsing of nested relatives. Right-branching relatives keep
//! at most one phrase in memory however deep they go; center-embedded ones
//! hold one more per level.

use mglab::bench::{center_embedded, right_branching, MAX_NESTING};
use mglab::bundled::nesting_lexicon;
use mglab::emg::{emg_parse, EmgConfig, EmgOutcome, EmgParser};

fn main() {
    let lex = nesting_lexicon();
    let cfg = EmgConfig::default();

    println!("depth  right-branching  center-embedded  (peak memory)");
    for depth in 1..=MAX_NESTING {
        let peak = |s: Vec<String>| match emg_parse(&lex, &s, &cfg).expect("within budget") {
            EmgOutcome::Success(ok) => ok.peak_memory.to_string(),
            EmgOutcome::Failure(f) => format!("failed: {}", f.reason),
        };
        println!("{depth:>5}  {:>15}  {:>15}", peak(right_branching(depth)), peak(center_embedded(depth)));
    }

    let sentence = center_embedded(2);
    println!("\n{}", sentence.join(" "));
    let mut parser = EmgParser::new(&lex, cfg);
    for w in &sentence {
        parser.feed(w).expect("within budget");
        println!("  after {w:<8} {} live analyses", parser.live().len());
    }
    if let EmgOutcome::Success(ok) = parser.finish().expect("within budget") {
        for line in &ok.trace {
            println!("  {line}");
        }
        println!("  {}", ok.state.brackets(&lex));
    }
}
