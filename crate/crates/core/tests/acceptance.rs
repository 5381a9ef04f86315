//! Acceptance checks, one line of output per criterion. Runs without the
//! libtest harness so the lines show up in plain `cargo test` output.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use mglab::bench::{center_embedded, right_branching, run_suite, BenchConfig, Engine, TestSuite, Verdict};
use mglab::bundled::{self, agreement_lexicon, agreement_singular, agreement_without, bundled_suites};
use mglab::classic::{
    count_steps, derive_all, derive_yields, recognize, unconstrained_merge_demo, ClassicConfig, Recognition,
    StepsMode,
};
use mglab::emg::{emg_parse, EmgConfig};
use mglab::features::{Feature, FeatureKind, Sym};
use mglab::lexicon::{LexicalItem, Lexicon};
use mglab::metrics::{
    classify_data_dust, compare_adequacy, compare_points, grammar_size_bits, Adequacy, AdequacyPoint, Dust,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn derivation_of_alice_scolds_bill() -> Result<String, String> {
    let t0 = Instant::now();
    let lex = bundled::transitive_lexicon();
    let Recognition::Accept(ds) = recognize(&lex, &words("Alice scolds Bill"), &ClassicConfig::default()).unwrap()
    else {
        return Err("sentence rejected".into());
    };
    let d = &ds[0];
    let root = d.result().unwrap();
    let checks = [
        (d.yield_(&lex) == words("Alice scolds Bill"), "yield"),
        (root.tree().sets(&lex) == "{Alice, {scolds, Bill}}", "set display"),
        (root.tree().brackets(&lex) == "[scolds [Alice] [scolds [scolds] [Bill]]]", "tree"),
        (count_steps(d, StepsMode::Batch) == 3, "batch step count"),
        (ds.len() == 1, "unique derivation"),
    ];
    for (ok, what) in checks {
        if !ok {
            return Err(format!("{what} differs"));
        }
    }
    // derive_all finds the same single sentence
    let all = derive_yields(&lex, 3, &ClassicConfig::default()).unwrap();
    if !all.contains(&words("Alice scolds Bill")) {
        return Err("missing from enumeration".into());
    }
    let took = t0.elapsed();
    if took > Duration::from_secs(1) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} in {took:?}", root.tree().sets(&lex)))
}

/// Every sequence over `vocab` up to length `n`, the empty one included.
fn sequences(vocab: &[String], n: usize) -> Vec<Vec<String>> {
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &frontier {
            for w in vocab {
                let mut t: Vec<String> = s.clone();
                t.push(w.clone());
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

fn recognizer_matches_enumeration() -> Result<String, String> {
    let t0 = Instant::now();
    let cfg = ClassicConfig::default();
    let small: Vec<_> = bundled_suites().into_iter().filter(|b| b.lexicon.len() <= 6).collect();
    let mut checked = 0;
    for b in &small {
        let lex = &b.lexicon;
        // yields by number of selections, from one enumeration at 9 leaves
        let mut by_leaves: BTreeMap<usize, BTreeSet<Vec<String>>> = BTreeMap::new();
        for (y, d) in derive_all(lex, 9, &cfg).map_err(|e| e.to_string())? {
            let leaves = d.steps().iter().filter(|s| matches!(s, mglab::classic::Step::Select(_))).count();
            by_leaves.entry(leaves).or_default().insert(y);
        }
        for s in sequences(lex.vocab(), 6) {
            let bound = s.len() + cfg.silent_allowance;
            let expected = by_leaves.range(..=bound).any(|(_, ys)| ys.contains(&s));
            let got = recognize(lex, &s, &cfg).map_err(|e| e.to_string())?.accepted();
            if got != expected {
                return Err(format!("{}: '{}' recognize={got} enumeration={expected}", b.name, s.join(" ")));
            }
            checked += 1;
        }
    }
    let took = t0.elapsed();
    if took > Duration::from_secs(60) {
        return Err(format!("took {took:?}"));
    }
    let names: Vec<_> = small.iter().map(|b| b.name).collect();
    Ok(format!("{checked} sequences over {} in {took:?}", names.join(", ")))
}

fn feature_blind_merge_overgenerates() -> Result<String, String> {
    let lex = bundled::transitive_lexicon();
    let checked = derive_yields(&lex, 3, &ClassicConfig::default()).unwrap();
    let free = unconstrained_merge_demo(&lex, 3, 100_000).unwrap();
    if !(checked.is_subset(&free) && free.len() > checked.len()) {
        return Err("not a strict superset".into());
    }
    for order in ["scolds Alice Bill", "scolds Bill Alice", "Alice Bill scolds", "Bill Alice scolds"] {
        if !free.contains(&words(order)) || checked.contains(&words(order)) {
            return Err(format!("'{order}' misclassified"));
        }
    }
    Ok(format!("{} checked vs {} unconstrained yields", checked.len(), free.len()))
}

fn bundled_suites_are_perfect() -> Result<String, String> {
    let cfg = BenchConfig::default();
    let mut runs = Vec::new();
    for name in ["agreement", "filled-gap", "npi"] {
        let b = bundled::bundled(name).unwrap();
        for &engine in &b.engines {
            let r = run_suite(&b.lexicon, engine, &b.suite, &cfg);
            if r.accuracy != Some(1.0) {
                return Err(format!("{name} with {}: {}", engine.name(), r.report()));
            }
            runs.push(format!("{name}/{}", engine.name()));
        }
    }
    Ok(format!("accuracy 1.0 on {}", runs.join(" ")))
}

fn random_item(rng: &mut ChaCha8Rng, n_syms: u16) -> LexicalItem {
    let letters = "abcdefghijklmnopqrstuvwxyz";
    let len = rng.gen_range(0..6);
    let word: String = (0..len).map(|_| letters.as_bytes()[rng.gen_range(0..26)] as char).collect();
    let sym = |rng: &mut ChaCha8Rng| Sym(rng.gen_range(0..n_syms));
    let mut features = Vec::new();
    for _ in 0..rng.gen_range(0..3) {
        let kind = [FeatureKind::SelR, FeatureKind::SelL, FeatureKind::LicPlus][rng.gen_range(0..3)];
        features.push(Feature::new(kind, sym(rng)));
    }
    features.push(Feature::cat(sym(rng)));
    for _ in 0..rng.gen_range(0..2) {
        features.push(Feature::new(FeatureKind::LicMinus, sym(rng)));
    }
    let phon: Vec<&str> = if word.is_empty() { vec![] } else { vec![word.as_str()] };
    LexicalItem::new(&phon, features)
}

fn size_is_monotone_and_deterministic() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let starts = [bundled::transitive_lexicon(), agreement_lexicon(), bundled::nesting_lexicon()];
    let mut extensions = 0;
    for round in 0..40 {
        let mut lex = starts[round % starts.len()].clone();
        let n = lex.inventory().len() as u16;
        for _ in 0..3 {
            let item = random_item(&mut rng, n);
            let Ok(bigger) = lex.with_item(item) else { continue };
            let (before, after) = (grammar_size_bits(&lex), grammar_size_bits(&bigger));
            if after.total_bits <= before.total_bits {
                return Err(format!("{} -> {} bits after adding an item", before.total_bits, after.total_bits));
            }
            let again = serde_json::to_string(&grammar_size_bits(&bigger)).unwrap();
            if again != serde_json::to_string(&after).unwrap() {
                return Err("recomputation differs".into());
            }
            // a reparsed copy encodes to the same numbers
            let reparsed = Lexicon::parse(&bigger.serialize()).map_err(|e| e.to_string())?;
            if grammar_size_bits(&reparsed) != after {
                return Err("serialization round trip changed the size".into());
            }
            extensions += 1;
            lex = bigger;
        }
    }
    if extensions < 100 {
        return Err(format!("only {extensions} extensions"));
    }
    Ok(format!("{extensions} extensions, all strictly larger"))
}

fn memory_tracks_center_embedding() -> Result<String, String> {
    let lex = bundled::nesting_lexicon();
    let cfg = EmgConfig::default();
    let peak = |s: Vec<String>| -> Result<usize, String> {
        let out = emg_parse(&lex, &s, &cfg).map_err(|e| e.to_string())?;
        out.peak_memory().ok_or_else(|| format!("'{}' failed to parse", s.join(" ")))
    };
    let mut right = Vec::new();
    let mut center = Vec::new();
    for depth in 1..=5 {
        right.push(peak(right_branching(depth))?);
        center.push(peak(center_embedded(depth))?);
    }
    if right.iter().any(|&p| p != right[0]) {
        return Err(format!("right-branching peaks vary: {right:?}"));
    }
    if center.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("center-embedding peaks not increasing: {center:?}"));
    }
    Ok(format!("right {right:?}, center {center:?}"))
}

fn engines_agree_without_movement() -> Result<String, String> {
    let cfg = BenchConfig::default();
    let mut compared = 0;
    for b in bundled_suites().into_iter().filter(|b| b.movement_free) {
        let c = run_suite(&b.lexicon, Engine::Classic, &b.suite, &cfg);
        let e = run_suite(&b.lexicon, Engine::Emg, &b.suite, &cfg);
        for (x, y) in c.units.iter().zip(&e.units) {
            if x.verdict != y.verdict || x.verdict == Verdict::Indeterminate {
                return Err(format!("{} unit {}: {:?} vs {:?}", b.name, x.id, x.verdict, y.verdict));
            }
        }
        for (x, y) in c.items.iter().zip(&e.items) {
            if x.derivable != y.derivable {
                return Err(format!("{} item {} differs", b.name, x.id));
            }
            compared += 1;
        }
    }
    // every short sentence over the transitive vocabulary
    let lex = bundled::transitive_lexicon();
    for s in sequences(lex.vocab(), 5) {
        let c = recognize(&lex, &s, &cfg.classic).unwrap().accepted();
        let e = emg_parse(&lex, &s, &cfg.emg).unwrap().is_success();
        if c != e {
            return Err(format!("'{}': classic {c}, emg {e}", s.join(" ")));
        }
        compared += 1;
    }
    Ok(format!("{compared} identical judgments"))
}

fn random_subgrammar(rng: &mut ChaCha8Rng, full: &Lexicon, k: usize) -> Lexicon {
    let items = full.items().iter().filter(|_| rng.gen_bool(0.75)).cloned().collect();
    full.with_items(items).unwrap().renamed(format!("sub{k}"))
}

fn pareto_order_and_dust() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // random points, small ranges so ties and dominance both occur
    for _ in 0..2000 {
        let mut p = || AdequacyPoint { correct: rng.gen_range(0..4), total_bits: rng.gen_range(0..4) };
        let (a, b, c) = (p(), p(), p());
        check_order(a, b, c, compare_points)?;
    }
    // real grammars on the agreement suite
    let full = agreement_lexicon();
    let suite: TestSuite = bundled::bundled("agreement").unwrap().suite;
    let cfg = BenchConfig::default();
    let pool: Vec<_> = (0..16)
        .map(|k| {
            let g = random_subgrammar(&mut rng, &full, k);
            let r = run_suite(&g, Engine::Classic, &suite, &cfg);
            (g, r)
        })
        .collect();
    let mut triples = 0;
    for _ in 0..1000 {
        let i = [rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len())];
        let cmp = |x: usize, y: usize| {
            compare_adequacy((&pool[x].0, &pool[x].1), (&pool[y].0, &pool[y].1)).unwrap().verdict
        };
        if cmp(i[0], i[0]) != Adequacy::Equal {
            return Err("grammar not equal to itself".into());
        }
        let (ab, ba, bc, ac) = (cmp(i[0], i[1]), cmp(i[1], i[0]), cmp(i[1], i[2]), cmp(i[0], i[2]));
        if ab == Adequacy::Dominates && ba == Adequacy::Dominates {
            return Err("dominance is not antisymmetric".into());
        }
        if ab == Adequacy::Dominates && bc == Adequacy::Dominates && ac != Adequacy::Dominates {
            return Err("dominance is not transitive".into());
        }
        triples += 1;
    }

    let scenarios = [
        (agreement_singular(), full.clone(), "local", Dust::Covered),
        (agreement_singular(), full.clone(), "author", Dust::RelevantExtension),
        (agreement_without("news"), full.clone(), "news", Dust::Dust),
    ];
    let mut seen = Vec::new();
    for (base, ext, contrast, want) in scenarios {
        let v = classify_data_dust(&base, &ext, &suite, contrast, Engine::Classic, &cfg).map_err(|e| e.to_string())?;
        if v.verdict != want {
            return Err(format!("{contrast}: {:?}, expected {want:?}", v.verdict));
        }
        let row_holds = match v.verdict {
            Dust::Covered => v.size_delta_bits == 0,
            Dust::Dust => v.size_delta_bits > 0 && v.new_items_captured <= 1,
            Dust::RelevantExtension => v.size_delta_bits > 0 && v.new_items_captured >= 2,
        };
        if !row_holds {
            return Err(format!("{contrast}: invariant fails for {v:?}"));
        }
        seen.push(format!("{contrast}={:?}", v.verdict));
    }
    Ok(format!("{triples} grammar triples + 2000 point triples; {}", seen.join(" ")))
}

fn check_order(
    a: AdequacyPoint,
    b: AdequacyPoint,
    c: AdequacyPoint,
    cmp: fn(AdequacyPoint, AdequacyPoint) -> Adequacy,
) -> Result<(), String> {
    if cmp(a, a) != Adequacy::Equal {
        return Err(format!("{a:?} not equal to itself"));
    }
    if cmp(a, b) == Adequacy::Dominates && cmp(b, a) != Adequacy::DominatedBy {
        return Err(format!("{a:?} / {b:?} not antisymmetric"));
    }
    let at_least = |x, y| matches!(cmp(x, y), Adequacy::Dominates | Adequacy::Equal);
    if cmp(a, b) == Adequacy::Dominates && at_least(b, c) && cmp(a, c) != Adequacy::Dominates {
        return Err(format!("{a:?} {b:?} {c:?} not transitive"));
    }
    if at_least(a, b) && at_least(b, c) && !at_least(a, c) {
        return Err(format!("{a:?} {b:?} {c:?} not transitive"));
    }
    Ok(())
}

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("derivation of 'Alice scolds Bill'", derivation_of_alice_scolds_bill),
        ("recognizer agrees with exhaustive enumeration", recognizer_matches_enumeration),
        ("feature-blind Merge overgenerates", feature_blind_merge_overgenerates),
        ("bundled suites score 1.0", bundled_suites_are_perfect),
        ("grammar size is monotone and deterministic", size_is_monotone_and_deterministic),
        ("memory load: right-branching flat, center-embedding growing", memory_tracks_center_embedding),
        ("engines agree on movement-free grammars", engines_agree_without_movement),
        ("Pareto comparison is a partial order; dust trichotomy", pareto_order_and_dust),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
