use mglab::bundled::bundled_suites;
use mglab::classic::{recognize, ClassicConfig};
use mglab::emg::{emg_parse, EmgConfig};
use mglab::features::{Feature, FeatureKind, Sym};
use mglab::lexicon::{LexicalItem, Lexicon};
use mglab::metrics::{compare_points, grammar_size_bits, Adequacy, AdequacyPoint};
use mglab::TestSuite;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = AdequacyPoint> {
    (0usize..5, 0u64..5).prop_map(|(correct, total_bits)| AdequacyPoint { correct, total_bits })
}

fn item() -> impl Strategy<Value = LexicalItem> {
    let kind = prop::sample::select(vec![FeatureKind::SelR, FeatureKind::SelL, FeatureKind::LicPlus]);
    let pre = prop::collection::vec((kind, 0u16..4), 0..3);
    let post = prop::collection::vec(0u16..4, 0..2);
    let word = prop::sample::select(vec!["", "x", "yy", "zeta", "ā"]);
    (word, pre, 0u16..4, post).prop_map(|(w, pre, cat, post)| {
        let mut fs: Vec<Feature> = pre.into_iter().map(|(k, s)| Feature::new(k, Sym(s))).collect();
        fs.push(Feature::cat(Sym(cat)));
        fs.extend(post.into_iter().map(|s| Feature::new(FeatureKind::LicMinus, Sym(s))));
        let phon: Vec<&str> = if w.is_empty() { vec![] } else { vec![w] };
        LexicalItem::new(&phon, fs)
    })
}

fn lexicon() -> impl Strategy<Value = Option<Lexicon>> {
    prop::collection::vec(item(), 1..8).prop_map(|items| {
        let inv = ["C", "D", "V", "wh"].map(String::from).to_vec();
        Lexicon::new("prop", inv, Sym(0), items).ok()
    })
}

proptest! {
    #[test]
    fn adequacy_is_a_partial_order(a in point(), b in point(), c in point()) {
        prop_assert_eq!(compare_points(a, a), Adequacy::Equal);
        prop_assert_eq!(compare_points(b, a), compare_points(a, b).flip());
        if compare_points(a, b) == Adequacy::Dominates && compare_points(b, c) == Adequacy::Dominates {
            prop_assert_eq!(compare_points(a, c), Adequacy::Dominates);
        }
    }

    #[test]
    fn lexicon_text_round_trips(lex in lexicon()) {
        let Some(lex) = lex else { return Ok(()) };
        let back = Lexicon::parse(&lex.serialize()).unwrap();
        prop_assert_eq!(&back, &lex);
        prop_assert_eq!(grammar_size_bits(&back), grammar_size_bits(&lex));
    }

    #[test]
    fn adding_an_item_costs_bits(lex in lexicon(), extra in item()) {
        let Some(lex) = lex else { return Ok(()) };
        let Ok(bigger) = lex.with_item(extra) else { return Ok(()) };
        prop_assert!(grammar_size_bits(&bigger).total_bits > grammar_size_bits(&lex).total_bits);
    }

    #[test]
    fn recognition_is_deterministic(idx in 0usize..5, picks in prop::collection::vec(0usize..64, 0..5)) {
        let b = &bundled_suites()[idx];
        let vocab = b.lexicon.vocab();
        let s: Vec<&str> = picks.iter().map(|&i| vocab[i % vocab.len()].as_str()).collect();
        let cfg = ClassicConfig::default();
        let first = recognize(&b.lexicon, &s, &cfg).unwrap();
        let again = recognize(&b.lexicon, &s, &cfg).unwrap();
        prop_assert_eq!(first.accepted(), again.accepted());
        if let (mglab::Recognition::Accept(x), mglab::Recognition::Accept(y)) = (&first, &again) {
            prop_assert_eq!(x, y);
            for d in x {
                prop_assert_eq!(d.yield_(&b.lexicon), s.iter().map(|w| w.to_string()).collect::<Vec<_>>());
            }
        }
        let e = emg_parse(&b.lexicon, &s, &EmgConfig::default()).unwrap();
        let e2 = emg_parse(&b.lexicon, &s, &EmgConfig::default()).unwrap();
        prop_assert_eq!(e.is_success(), e2.is_success());
        prop_assert_eq!(e.peak_memory(), e2.peak_memory());
    }
}

#[test]
fn bundled_suites_round_trip() {
    for b in bundled_suites() {
        let back = TestSuite::parse(&b.suite.serialize()).unwrap();
        assert_eq!(back, b.suite, "{}", b.name);
        assert_eq!(Lexicon::parse(&b.lexicon.serialize()).unwrap(), b.lexicon, "{}", b.name);
    }
}
