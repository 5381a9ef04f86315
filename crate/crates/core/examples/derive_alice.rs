//! "Alice scolds Bill" built by hand with select and merge, then the same
//! derivation replayed as a numbered trace.

use mglab::bundled::transitive_lexicon;
use mglab::classic::{count_steps, merge, select, Derivation, Step, StepsMode};

fn main() {
    let lex = transitive_lexicon();
    let id = |w: &str| lex.items().iter().position(|it| it.phon_str() == w).unwrap();

    let scolds = select(&lex, id("scolds")).unwrap();
    let bill = select(&lex, id("Bill")).unwrap();
    let alice = select(&lex, id("Alice")).unwrap();
    let vp = merge(&lex, &scolds, &bill).unwrap();
    println!("{}", vp.describe(&lex));
    let clause = merge(&lex, &vp, &alice).unwrap();
    println!("{}", clause.describe(&lex));
    println!("complete: {}", clause.is_complete(&lex));

    // merging a complete clause into anything is refused
    if let Err(e) = merge(&lex, &scolds, &clause) {
        println!("merge(scolds, clause): {e}");
    }

    let steps = vec![
        Step::Select(id("scolds")),
        Step::Select(id("Bill")),
        Step::Select(id("Alice")),
        Step::Merge { head: 0, arg: 1 },
        Step::Merge { head: 3, arg: 2 },
    ];
    let d = Derivation::replay(&lex, steps).unwrap();
    println!("\n{}", d.trace(&lex));
    let tree = d.result().unwrap().tree();
    println!("tree: {}", tree.brackets(&lex));
    println!("sets: {}", tree.sets(&lex));
    println!(
        "steps: {} per item, {} with selections batched",
        count_steps(&d, StepsMode::PerItem),
        count_steps(&d, StepsMode::Batch)
    );
}
