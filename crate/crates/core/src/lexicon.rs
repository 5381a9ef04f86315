//! Lexical items, lexicons and the plain-text lexicon file format.
//!
//! ```text
//! # comments start with '#'
//! name: transitive            (optional)
//! inventory: D V
//! start: V
//! Alice :: D
//! scolds :: =D =D V
//! ε :: =V +wh C               (ε = silent head)
//! emg:
//! accidentally adjoin: V,Vg right
//! ```
//!
//! Every item carries exactly one category. Features before it are selectors
//! or licensors, features after it are licensees, so checking order equals
//! list order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{is_symbol, split_surface, Feature, FeatureKind, Sym};

/// Interned phonetic token.
pub type Tok = u32;

/// Index of an item in [`Lexicon::items`].
pub type ItemId = usize;

pub const SILENT: &str = "ε";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Adjunction declaration for the incremental engine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Adjunction {
    pub hosts: Vec<Sym>,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexicalItem {
    pub phon: Vec<String>,
    pub features: Vec<Feature>,
    pub adjoin: Option<Adjunction>,
}

impl LexicalItem {
    pub fn new(phon: &[&str], features: Vec<Feature>) -> Self {
        LexicalItem {
            phon: phon.iter().map(|s| s.to_string()).collect(),
            features,
            adjoin: None,
        }
    }

    pub fn is_silent(&self) -> bool {
        self.phon.is_empty()
    }

    /// Position of the single category feature.
    pub fn category_index(&self) -> usize {
        self.features
            .iter()
            .position(|f| f.kind == FeatureKind::Cat)
            .expect("validated item has a category")
    }

    pub fn category(&self) -> Sym {
        self.features[self.category_index()].symbol
    }

    /// Licensees following the category, in checking order.
    pub fn licensees(&self) -> &[Feature] {
        &self.features[self.category_index() + 1..]
    }

    pub fn phon_str(&self) -> String {
        if self.phon.is_empty() {
            SILENT.to_string()
        } else {
            self.phon.join(" ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}, column {col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: feature symbol `{symbol}` is not in the inventory")]
    UndeclaredSymbol { line: usize, col: usize, symbol: String },
    #[error("line {line}: duplicate item `{item}`")]
    DuplicateItem { line: usize, item: String },
    #[error("line {line}: item `{item}` must have exactly one category, preceded only by selectors/licensors and followed only by licensees")]
    FeatureOrder { line: usize, item: String },
    #[error("missing `start:` declaration")]
    MissingStart,
    #[error("missing `inventory:` declaration")]
    MissingInventory,
    #[error("line {line}: start category `{symbol}` is not in the inventory")]
    StartNotDeclared { line: usize, symbol: String },
    #[error("line {line}: adjunction declared for `{phon}`, which names no item")]
    UnknownAdjunct { line: usize, phon: String },
}

/// A validated, immutable lexicon.
#[derive(Clone, Debug)]
pub struct Lexicon {
    name: String,
    inventory: Vec<String>,
    sym_index: HashMap<String, Sym>,
    start: Sym,
    items: Vec<LexicalItem>,
    vocab: Vec<String>,
    vocab_index: HashMap<String, Tok>,
    item_phon: Vec<Vec<Tok>>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.inventory == other.inventory
            && self.start == other.start
            && self.items == other.items
    }
}

impl Lexicon {
    /// Builds and validates a lexicon from already-interned parts.
    pub fn new(
        name: impl Into<String>,
        inventory: Vec<String>,
        start: Sym,
        items: Vec<LexicalItem>,
    ) -> Result<Self, LexiconError> {
        let mut sym_index = HashMap::new();
        for (i, s) in inventory.iter().enumerate() {
            sym_index.insert(s.clone(), Sym(i as u16));
        }
        if start.0 as usize >= inventory.len() {
            return Err(LexiconError::StartNotDeclared { line: 0, symbol: format!("#{}", start.0) });
        }
        let mut seen = HashSet::new();
        for item in &items {
            for f in &item.features {
                if f.symbol.0 as usize >= inventory.len() {
                    return Err(LexiconError::UndeclaredSymbol {
                        line: 0,
                        col: 0,
                        symbol: format!("#{}", f.symbol.0),
                    });
                }
            }
            if !valid_order(&item.features) {
                return Err(LexiconError::FeatureOrder { line: 0, item: item.phon_str() });
            }
            if !seen.insert((item.phon.clone(), item.features.clone())) {
                return Err(LexiconError::DuplicateItem { line: 0, item: item.phon_str() });
            }
        }
        let mut vocab = Vec::new();
        let mut vocab_index = HashMap::new();
        let mut item_phon = Vec::with_capacity(items.len());
        for item in &items {
            let ids = item
                .phon
                .iter()
                .map(|t| {
                    *vocab_index.entry(t.clone()).or_insert_with(|| {
                        vocab.push(t.clone());
                        (vocab.len() - 1) as Tok
                    })
                })
                .collect();
            item_phon.push(ids);
        }
        Ok(Lexicon {
            name: name.into(),
            inventory,
            sym_index,
            start,
            items,
            vocab,
            vocab_index,
            item_phon,
        })
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        parse_lexicon(text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inventory(&self) -> &[String] {
        &self.inventory
    }

    pub fn start(&self) -> Sym {
        self.start
    }

    pub fn items(&self) -> &[LexicalItem] {
        &self.items
    }

    pub fn item(&self, id: ItemId) -> &LexicalItem {
        &self.items[id]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn sym(&self, name: &str) -> Option<Sym> {
        self.sym_index.get(name).copied()
    }

    pub fn sym_name(&self, s: Sym) -> &str {
        &self.inventory[s.0 as usize]
    }

    /// Parses a single surface feature against this lexicon's inventory.
    pub fn feature(&self, surface: &str) -> Option<Feature> {
        let (kind, sym) = split_surface(surface)?;
        Some(Feature::new(kind, self.sym(sym)?))
    }

    /// Parses a space-separated feature string such as `=D =D V`.
    pub fn features(&self, surface: &str) -> Option<Vec<Feature>> {
        surface.split_whitespace().map(|t| self.feature(t)).collect()
    }

    pub fn show_feature(&self, f: Feature) -> String {
        f.kind.spell(self.sym_name(f.symbol))
    }

    pub fn show_features(&self, fs: &[Feature]) -> String {
        fs.iter().map(|f| self.show_feature(*f)).collect::<Vec<_>>().join(" ")
    }

    /// `phon::features`, as used in derivation traces.
    pub fn show_item(&self, id: ItemId) -> String {
        let item = &self.items[id];
        format!("{}::{}", item.phon_str(), self.show_features(&item.features))
    }

    /// Finds the item with this phon and feature string.
    pub fn find(&self, phon: &str, features: &str) -> Option<ItemId> {
        let fs = self.features(features)?;
        let phon: Vec<String> = if phon == SILENT {
            Vec::new()
        } else {
            phon.split_whitespace().map(str::to_string).collect()
        };
        self.items.iter().position(|it| it.phon == phon && it.features == fs)
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn tok(&self, word: &str) -> Option<Tok> {
        self.vocab_index.get(word).copied()
    }

    pub fn word(&self, t: Tok) -> &str {
        &self.vocab[t as usize]
    }

    pub fn item_phon(&self, id: ItemId) -> &[Tok] {
        &self.item_phon[id]
    }

    pub fn render(&self, toks: &[Tok]) -> Vec<String> {
        toks.iter().map(|t| self.word(*t).to_string()).collect()
    }

    /// Returns the interned sentence, or the first unknown word.
    pub fn intern_sentence<S: AsRef<str>>(&self, words: &[S]) -> Result<Vec<Tok>, String> {
        words
            .iter()
            .map(|w| self.tok(w.as_ref()).ok_or_else(|| w.as_ref().to_string()))
            .collect()
    }

    /// A copy with one more item, re-validated.
    pub fn with_item(&self, item: LexicalItem) -> Result<Lexicon, LexiconError> {
        let mut items = self.items.clone();
        items.push(item);
        Lexicon::new(self.name.clone(), self.inventory.clone(), self.start, items)
    }

    /// A copy with the given items, keeping name, inventory and start.
    pub fn with_items(&self, items: Vec<LexicalItem>) -> Result<Lexicon, LexiconError> {
        Lexicon::new(self.name.clone(), self.inventory.clone(), self.start, items)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Lexicon {
        self.name = name.into();
        self
    }

    pub fn serialize(&self) -> String {
        serialize_lexicon(self)
    }
}

fn valid_order(fs: &[Feature]) -> bool {
    let cats = fs.iter().filter(|f| f.kind == FeatureKind::Cat).count();
    if cats != 1 {
        return false;
    }
    let ci = fs.iter().position(|f| f.kind == FeatureKind::Cat).unwrap();
    fs[..ci]
        .iter()
        .all(|f| matches!(f.kind, FeatureKind::SelR | FeatureKind::SelL | FeatureKind::LicPlus))
        && fs[ci + 1..].iter().all(|f| f.kind == FeatureKind::LicMinus)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn col_of(line: &str, needle: &str) -> usize {
    line.find(needle).map(|i| line[..i].chars().count() + 1).unwrap_or(1)
}

struct PendingItem {
    line: usize,
    raw: String,
    phon: Vec<String>,
    features: Vec<(FeatureKind, String, usize)>,
}

/// An `adjoin` line: line number, item, (host, column) pairs, side.
type PendingAdjoin = (usize, String, Vec<(String, usize)>, Side);

/// Parses and validates lexicon-file text.
pub fn parse_lexicon(text: &str) -> Result<Lexicon, LexiconError> {
    let mut name = String::from("lexicon");
    let mut inventory: Option<Vec<String>> = None;
    let mut start: Option<(String, usize)> = None;
    let mut pending: Vec<PendingItem> = Vec::new();
    let mut adjoins: Vec<PendingAdjoin> = Vec::new();
    let mut in_emg = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "emg:" {
            in_emg = true;
            continue;
        }
        if in_emg {
            let Some((phon, rest)) = trimmed.split_once(" adjoin:") else {
                return Err(LexiconError::Syntax {
                    line: line_no,
                    col: 1,
                    msg: "expected `phon adjoin: HOST,HOST [left|right]` in emg section".into(),
                });
            };
            let mut parts = rest.split_whitespace();
            let hosts_text = parts.next().ok_or_else(|| LexiconError::Syntax {
                line: line_no,
                col: col_of(raw, "adjoin:") + 7,
                msg: "missing host categories".into(),
            })?;
            let side = match parts.next() {
                None | Some("left") => Side::Left,
                Some("right") => Side::Right,
                Some(other) => {
                    return Err(LexiconError::Syntax {
                        line: line_no,
                        col: col_of(raw, other),
                        msg: format!("adjunction side must be `left` or `right`, found `{other}`"),
                    })
                }
            };
            if let Some(extra) = parts.next() {
                return Err(LexiconError::Syntax {
                    line: line_no,
                    col: col_of(raw, extra),
                    msg: "trailing text after adjunction side".into(),
                });
            }
            let hosts = hosts_text
                .split(',')
                .map(|h| (h.trim().to_string(), col_of(raw, h.trim())))
                .collect();
            adjoins.push((line_no, phon.trim().to_string(), hosts, side));
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("name:") {
            name = rest.trim().to_string();
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("inventory:") {
            let mut syms = Vec::new();
            for s in rest.split_whitespace() {
                if !is_symbol(s) {
                    return Err(LexiconError::Syntax {
                        line: line_no,
                        col: col_of(raw, s),
                        msg: format!("`{s}` is not a valid feature symbol"),
                    });
                }
                if !syms.iter().any(|x: &String| x == s) {
                    syms.push(s.to_string());
                }
            }
            inventory = Some(syms);
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("start:") {
            start = Some((rest.trim().to_string(), line_no));
            continue;
        }
        let Some((phon_text, feat_text)) = trimmed.split_once("::") else {
            return Err(LexiconError::Syntax {
                line: line_no,
                col: 1,
                msg: "expected `phon :: features`, `inventory:`, `start:` or `emg:`".into(),
            });
        };
        let phon_text = phon_text.trim();
        let phon: Vec<String> = if phon_text == SILENT {
            Vec::new()
        } else if phon_text.is_empty() {
            return Err(LexiconError::Syntax {
                line: line_no,
                col: 1,
                msg: "empty phon; write `ε` for a silent head".into(),
            });
        } else {
            phon_text.split_whitespace().map(str::to_string).collect()
        };
        let feat_col0 = col_of(raw, "::") + 2;
        let mut features = Vec::new();
        for tok in feat_text.split_whitespace() {
            let col = raw
                .get(raw.find("::").unwrap() + 2..)
                .and_then(|tail| tail.find(tok).map(|i| feat_col0 + tail[..i].chars().count()))
                .unwrap_or(feat_col0);
            let Some((kind, sym)) = split_surface(tok) else {
                return Err(LexiconError::Syntax {
                    line: line_no,
                    col,
                    msg: format!("malformed feature `{tok}`"),
                });
            };
            features.push((kind, sym.to_string(), col));
        }
        if features.is_empty() {
            return Err(LexiconError::Syntax {
                line: line_no,
                col: feat_col0,
                msg: "item has no features".into(),
            });
        }
        pending.push(PendingItem { line: line_no, raw: trimmed.to_string(), phon, features });
    }

    let inventory = inventory.ok_or(LexiconError::MissingInventory)?;
    let sym_index: HashMap<&str, Sym> =
        inventory.iter().enumerate().map(|(i, s)| (s.as_str(), Sym(i as u16))).collect();
    let (start_name, start_line) = start.ok_or(LexiconError::MissingStart)?;
    let start = *sym_index.get(start_name.as_str()).ok_or(LexiconError::StartNotDeclared {
        line: start_line,
        symbol: start_name.clone(),
    })?;

    let mut items = Vec::with_capacity(pending.len());
    let mut seen = HashSet::new();
    for p in pending {
        let mut fs = Vec::with_capacity(p.features.len());
        for (kind, sym, col) in &p.features {
            let s = sym_index.get(sym.as_str()).ok_or_else(|| LexiconError::UndeclaredSymbol {
                line: p.line,
                col: *col,
                symbol: sym.clone(),
            })?;
            fs.push(Feature::new(*kind, *s));
        }
        if !valid_order(&fs) {
            return Err(LexiconError::FeatureOrder { line: p.line, item: p.raw });
        }
        if !seen.insert((p.phon.clone(), fs.clone())) {
            return Err(LexiconError::DuplicateItem { line: p.line, item: p.raw });
        }
        items.push(LexicalItem { phon: p.phon, features: fs, adjoin: None });
    }

    for (line, phon, hosts, side) in adjoins {
        let phon_toks: Vec<String> = if phon == SILENT {
            Vec::new()
        } else {
            phon.split_whitespace().map(str::to_string).collect()
        };
        let mut host_syms = Vec::new();
        for (h, col) in hosts {
            let s = sym_index.get(h.as_str()).ok_or_else(|| LexiconError::UndeclaredSymbol {
                line,
                col,
                symbol: h.clone(),
            })?;
            host_syms.push(*s);
        }
        let mut found = false;
        for item in items.iter_mut().filter(|it| it.phon == phon_toks) {
            item.adjoin = Some(Adjunction { hosts: host_syms.clone(), side });
            found = true;
        }
        if !found {
            return Err(LexiconError::UnknownAdjunct { line, phon });
        }
    }

    Lexicon::new(name, inventory, start, items)
}

/// Writes a lexicon back in file format. `parse_lexicon(serialize_lexicon(l)) == l`
/// whenever adjunction declarations agree across items sharing a phon.
pub fn serialize_lexicon(lex: &Lexicon) -> String {
    let mut out = String::new();
    out.push_str(&format!("name: {}\n", lex.name));
    out.push_str(&format!("inventory: {}\n", lex.inventory.join(" ")));
    out.push_str(&format!("start: {}\n", lex.sym_name(lex.start)));
    for item in &lex.items {
        out.push_str(&format!("{} :: {}\n", item.phon_str(), lex.show_features(&item.features)));
    }
    let mut emitted = HashSet::new();
    let mut emg = String::new();
    for item in &lex.items {
        if let Some(adj) = &item.adjoin {
            if emitted.insert(item.phon.clone()) {
                let hosts: Vec<&str> = adj.hosts.iter().map(|h| lex.sym_name(*h)).collect();
                let side = match adj.side {
                    Side::Left => "left",
                    Side::Right => "right",
                };
                emg.push_str(&format!("{} adjoin: {} {}\n", item.phon_str(), hosts.join(","), side));
            }
        }
    }
    if !emg.is_empty() {
        out.push_str("emg:\n");
        out.push_str(&emg);
    }
    out
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_lexicon(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ALICE: &str = "inventory: D V\nstart: V\nAlice :: D\nBill :: D\nscolds :: =D =D V\n";

    #[test]
    fn single_feature_item() {
        let lex = parse_lexicon(ALICE).unwrap();
        let alice = &lex.items()[0];
        assert_eq!(alice.phon, vec!["Alice"]);
        assert_eq!(alice.features, vec![Feature::cat(lex.sym("D").unwrap())]);
    }

    #[test]
    fn transitive_selector_item() {
        let lex = parse_lexicon(ALICE).unwrap();
        let d = lex.sym("D").unwrap();
        let v = lex.sym("V").unwrap();
        assert_eq!(
            lex.items()[2].features,
            vec![
                Feature::new(FeatureKind::SelR, d),
                Feature::new(FeatureKind::SelR, d),
                Feature::cat(v)
            ]
        );
    }

    #[test]
    fn undeclared_symbol_reports_position() {
        let err = parse_lexicon("inventory: D V\nstart: V\nscolds :: =Q V\n").unwrap_err();
        assert_eq!(err, LexiconError::UndeclaredSymbol { line: 3, col: 11, symbol: "Q".into() });
    }

    #[test]
    fn duplicate_item_rejected() {
        let err = parse_lexicon("inventory: D\nstart: D\nAlice :: D\nAlice :: D\n").unwrap_err();
        assert!(matches!(err, LexiconError::DuplicateItem { line: 4, .. }));
    }

    #[test]
    fn missing_start_rejected() {
        assert_eq!(parse_lexicon("inventory: D\nAlice :: D\n").unwrap_err(), LexiconError::MissingStart);
        assert!(matches!(
            parse_lexicon("inventory: D\nstart: C\n").unwrap_err(),
            LexiconError::StartNotDeclared { line: 2, .. }
        ));
    }

    #[test]
    fn one_category_only() {
        let err = parse_lexicon("inventory: D V\nstart: V\nx :: D V\n").unwrap_err();
        assert!(matches!(err, LexiconError::FeatureOrder { line: 3, .. }));
        let err = parse_lexicon("inventory: D V\nstart: V\nx :: =D\n").unwrap_err();
        assert!(matches!(err, LexiconError::FeatureOrder { .. }));
        let err = parse_lexicon("inventory: D V wh\nstart: V\nx :: D =V\n").unwrap_err();
        assert!(matches!(err, LexiconError::FeatureOrder { .. }));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_lexicon("inventory: D\nstart: D\nAlice D\n").unwrap_err(),
            LexiconError::Syntax { line: 3, .. }
        ));
        assert!(matches!(
            parse_lexicon("inventory: D\nstart: D\nAlice :: =\n").unwrap_err(),
            LexiconError::Syntax { line: 3, col: 10, .. }
        ));
    }

    #[test]
    fn silent_heads_comments_and_emg_section() {
        let text = "# toy\ninventory: V C wh D Adv\nstart: C\nε :: =V +wh C # silent\nwhat :: D -wh\nfast :: Adv\nemg:\nfast adjoin: V,C right\n";
        let lex = parse_lexicon(text).unwrap();
        assert!(lex.items()[0].is_silent());
        assert_eq!(lex.item_phon(0), &[] as &[Tok]);
        let adj = lex.items()[2].adjoin.as_ref().unwrap();
        assert_eq!(adj.side, Side::Right);
        assert_eq!(adj.hosts, vec![lex.sym("V").unwrap(), lex.sym("C").unwrap()]);
        assert!(matches!(
            parse_lexicon("inventory: D\nstart: D\nx :: D\nemg:\ny adjoin: D\n").unwrap_err(),
            LexiconError::UnknownAdjunct { line: 5, .. }
        ));
        // side defaults to left
        let lex = parse_lexicon("inventory: D\nstart: D\nx :: D\nemg:\nx adjoin: D\n").unwrap();
        assert_eq!(lex.items()[0].adjoin.as_ref().unwrap().side, Side::Left);
    }

    fn arb_lexicon() -> impl Strategy<Value = Lexicon> {
        let inv = prop::collection::btree_set("[A-Z][a-z_]{0,2}", 1..5);
        (inv, any::<u16>()).prop_flat_map(|(inv, start_seed)| {
            let inv: Vec<String> = inv.into_iter().collect();
            let n = inv.len() as u16;
            let start = Sym(start_seed % n);
            let item = (
                prop::collection::vec("[a-z]{1,5}", 0..3),
                prop::collection::vec((0u8..3, 0..n), 0..3),
                0..n,
                prop::collection::vec(0..n, 0..2),
            )
                .prop_map(|(phon, pre, cat, lic)| {
                    let mut fs: Vec<Feature> = pre
                        .into_iter()
                        .map(|(k, s)| {
                            let kind = [FeatureKind::SelR, FeatureKind::SelL, FeatureKind::LicPlus][k as usize];
                            Feature::new(kind, Sym(s))
                        })
                        .collect();
                    fs.push(Feature::cat(Sym(cat)));
                    fs.extend(lic.into_iter().map(|s| Feature::new(FeatureKind::LicMinus, Sym(s))));
                    LexicalItem { phon, features: fs, adjoin: None }
                });
            (Just(inv), Just(start), prop::collection::vec(item, 0..6))
        })
        .prop_map(|(inv, start, items)| {
            let mut seen = HashSet::new();
            let items: Vec<_> =
                items.into_iter().filter(|it| seen.insert((it.phon.clone(), it.features.clone()))).collect();
            Lexicon::new("random", inv, start, items).unwrap()
        })
    }

    proptest! {
        #[test]
        fn serialize_round_trip(lex in arb_lexicon()) {
            let text = serialize_lexicon(&lex);
            let back = parse_lexicon(&text).unwrap();
            prop_assert_eq!(back, lex);
        }
    }
}
