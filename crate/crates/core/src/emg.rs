//! Expectation-based incremental derivation: top-down, left to right, each
//! incoming word is merged into the structure already built.
//!
//! A state keeps a frontier of pending slots (leftmost on top) and a memory
//! buffer of phrases met at a landing site that still owe a gap further right.
//! An item's slots come from its features read in checking order: a first `=x`
//! expects its complement to the right of the head, every other selector or
//! licensor opens a slot on the left, later features further left.
//!
//! Items that differ only in pronunciation are predicted together and told
//! apart when their word is scanned, so a category with many nouns or verbs
//! costs one prediction, not one per word.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::rc::Rc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Feature, FeatureKind, Sym};
use crate::lexicon::{Adjunction, ItemId, Lexicon, Side, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmgError {
    #[error("expectation mismatch: {0}")]
    ExpectationMismatch(String),
    #[error("item cannot adjoin here: {0}")]
    NotAdjoinable(String),
    #[error("no host to adjoin to")]
    NoHost,
    #[error("memory is empty")]
    EmptyMemory,
    #[error("memory holds no {0} to discharge")]
    UnmatchedMemory(String),
    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemoryDiscipline {
    Lifo,
    Fifo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmgConfig {
    pub discipline: MemoryDiscipline,
    /// States explored before giving up.
    pub budget: usize,
    /// How often one item may be predicted between two scanned words.
    pub left_recursion_limit: usize,
}

impl Default for EmgConfig {
    fn default() -> Self {
        EmgConfig { discipline: MemoryDiscipline::Lifo, budget: 100_000, left_recursion_limit: 1 }
    }
}

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// A phrase of this category is expected.
    Expect { cat: Sym, parent: Option<NodeId> },
    /// The head word(s) of a node; `pos` words already scanned.
    Head { node: NodeId, pos: usize },
    /// A moved phrase with this licensee lands here.
    Landing { lic: Sym, parent: NodeId },
    /// Optional right adjuncts of a finished phrase.
    AdjunctSite { cat: Sym, host: NodeId },
    /// Phrases that landed inside `node` must have found their gap by now.
    Close { node: NodeId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    Head,
    Node(NodeId),
    Gap(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ENode {
    /// Items still compatible with the words scanned so far.
    pub candidates: Rc<Vec<ItemId>>,
    pub parent: Option<NodeId>,
    pub children: Vec<Child>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoryEntry {
    pub id: usize,
    pub cat: Sym,
    /// Licensees still to check at lower landing sites, in checking order.
    pub pending: Vec<Sym>,
    pub landed_in: NodeId,
}

#[derive(Debug)]
struct TraceLine {
    text: String,
    prev: Option<Rc<TraceLine>>,
}

#[derive(Clone, Debug)]
pub struct ExpectationState {
    frontier: Vec<Slot>,
    memory: Vec<MemoryEntry>,
    nodes: Vec<ENode>,
    consumed: usize,
    peak_memory: usize,
    next_entry: usize,
    predicted: Vec<(usize, usize)>,
    trace: Option<Rc<TraceLine>>,
}

fn template(features: &[Feature]) -> (Vec<Feature>, Option<Feature>) {
    let cat = features.iter().position(|f| f.kind == FeatureKind::Cat).unwrap_or(features.len());
    let pre = &features[..cat];
    let mut left = Vec::new();
    let mut right = None;
    for (j, f) in pre.iter().enumerate().rev() {
        if j == 0 && f.kind == FeatureKind::SelR {
            right = Some(*f);
        } else {
            left.push(*f);
        }
    }
    (left, right)
}

impl ExpectationState {
    /// Empty structure expecting one phrase of the start category.
    pub fn new(lex: &Lexicon) -> Self {
        ExpectationState {
            frontier: vec![Slot::Expect { cat: lex.start(), parent: None }],
            memory: Vec::new(),
            nodes: Vec::new(),
            consumed: 0,
            peak_memory: 0,
            next_entry: 0,
            predicted: Vec::new(),
            trace: None,
        }
    }

    pub fn frontier(&self) -> &[Slot] {
        &self.frontier
    }

    pub fn memory(&self) -> &[MemoryEntry] {
        &self.memory
    }

    pub fn nodes(&self) -> &[ENode] {
        &self.nodes
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn peak_memory(&self) -> usize {
        self.peak_memory
    }

    /// Pending expectations (categories and landing sites), leftmost first.
    pub fn expectations(&self, lex: &Lexicon) -> Vec<String> {
        self.frontier
            .iter()
            .rev()
            .filter_map(|s| match s {
                Slot::Expect { cat, .. } => Some(lex.sym_name(*cat).to_string()),
                Slot::Landing { lic, .. } => Some(format!("+{}", lex.sym_name(*lic))),
                _ => None,
            })
            .collect()
    }

    pub fn trace(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = self.trace.as_ref();
        while let Some(t) = cur {
            out.push(t.text.clone());
            cur = t.prev.as_ref();
        }
        out.reverse();
        out
    }

    fn snapshot(&self, lex: &Lexicon) -> String {
        let mut s = String::from("[");
        for (i, slot) in self.frontier.iter().rev().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = match slot {
                Slot::Expect { cat, .. } => write!(s, "{}", lex.sym_name(*cat)),
                Slot::Head { node, .. } => write!(s, "·{}", self.label(lex, *node)),
                Slot::Landing { lic, .. } => write!(s, "+{}", lex.sym_name(*lic)),
                Slot::AdjunctSite { cat, .. } => write!(s, "adj:{}", lex.sym_name(*cat)),
                Slot::Close { .. } => write!(s, "⌋"),
            };
        }
        s.push(']');
        s
    }

    fn log(&mut self, lex: &Lexicon, tag: &str, what: &str) {
        let text = format!("{tag} {what} {} |memory|={}", self.snapshot(lex), self.memory.len());
        self.trace = Some(Rc::new(TraceLine { text, prev: self.trace.take() }));
    }

    /// Pronunciation of a node: its word once scanned, alternatives otherwise.
    pub fn label(&self, lex: &Lexicon, node: NodeId) -> String {
        let c = &self.nodes[node].candidates;
        if c.len() == 1 {
            lex.item(c[0]).phon_str()
        } else {
            c.iter().map(|&i| lex.item(i).phon_str()).collect::<Vec<_>>().join("|")
        }
    }

    /// Brackets of the structure built so far; gaps print as `[t]`.
    pub fn brackets(&self, lex: &Lexicon) -> String {
        fn go(st: &ExpectationState, lex: &Lexicon, n: NodeId, out: &mut String) {
            let label = st.label(lex, n);
            if st.nodes[n].children == [Child::Head] {
                let _ = write!(out, "[{label}]");
                return;
            }
            let _ = write!(out, "[{label}");
            for c in &st.nodes[n].children {
                out.push(' ');
                match c {
                    Child::Head => {
                        let _ = write!(out, "[{label}]");
                    }
                    Child::Node(m) => go(st, lex, *m, out),
                    Child::Gap(_) => out.push_str("[t]"),
                }
            }
            out.push(']');
        }
        let mut out = String::new();
        if !self.nodes.is_empty() {
            go(self, lex, 0, &mut out);
        }
        out
    }

    /// Binary set notation: the head combines with its right material first,
    /// then with its left material from the inside out.
    pub fn sets(&self, lex: &Lexicon) -> String {
        fn go(st: &ExpectationState, lex: &Lexicon, n: NodeId) -> String {
            let kids = &st.nodes[n].children;
            let show = |c: &Child| match c {
                Child::Head => st.label(lex, n),
                Child::Node(m) => go(st, lex, *m),
                Child::Gap(_) => "t".into(),
            };
            let Some(h) = kids.iter().position(|c| *c == Child::Head) else {
                return match kids.len() {
                    0 => st.label(lex, n),
                    1 => show(&kids[0]),
                    _ => format!("{{{}}}", kids.iter().map(show).collect::<Vec<_>>().join(", ")),
                };
            };
            let mut inner = show(&kids[h]);
            for c in &kids[h + 1..] {
                inner = format!("{{{inner}, {}}}", show(c));
            }
            for c in kids[..h].iter().rev() {
                inner = format!("{{{}, {inner}}}", show(c));
            }
            inner
        }
        if self.nodes.is_empty() {
            String::new()
        } else {
            go(self, lex, 0)
        }
    }

    fn attach(&mut self, parent: Option<NodeId>, child: Child) {
        if let Some(p) = parent {
            self.nodes[p].children.push(child);
        }
    }

    fn count_prediction(&mut self, class: usize, limit: usize) -> bool {
        match self.predicted.iter_mut().find(|(c, _)| *c == class) {
            Some((_, n)) if *n >= limit => false,
            Some((_, n)) => {
                *n += 1;
                true
            }
            None => {
                self.predicted.push((class, 1));
                true
            }
        }
    }

    /// Opens a node for `candidates` (items sharing features) and pushes its
    /// slots: left slots, head, right slot, closing check, adjunct site.
    fn open(&mut self, lex: &Lexicon, candidates: Rc<Vec<ItemId>>, parent: Option<NodeId>) -> NodeId {
        let it = lex.item(candidates[0]);
        let adjoinable = lex.items().iter().any(|a| {
            a.adjoin.as_ref().is_some_and(|adj| adj.side == Side::Right && adj.hosts.contains(&it.category()))
        });
        let node = self.nodes.len();
        self.nodes.push(ENode { candidates, parent, children: Vec::new() });
        self.attach(parent, Child::Node(node));
        let (left, right) = template(&it.features);
        if adjoinable {
            self.frontier.push(Slot::AdjunctSite { cat: it.category(), host: node });
        }
        if left.iter().any(|f| f.kind == FeatureKind::LicPlus) || right.is_some_and(|f| f.kind == FeatureKind::LicPlus) {
            self.frontier.push(Slot::Close { node });
        }
        if let Some(f) = right {
            self.frontier.push(Slot::Expect { cat: f.symbol, parent: Some(node) });
        }
        self.frontier.push(Slot::Head { node, pos: 0 });
        for f in left.iter().rev() {
            self.frontier.push(match f.kind {
                FeatureKind::LicPlus => Slot::Landing { lic: f.symbol, parent: node },
                _ => Slot::Expect { cat: f.symbol, parent: Some(node) },
            });
        }
        node
    }

    fn memory_top(&self, discipline: MemoryDiscipline) -> Option<usize> {
        if self.memory.is_empty() {
            None
        } else {
            Some(match discipline {
                MemoryDiscipline::Lifo => self.memory.len() - 1,
                MemoryDiscipline::Fifo => 0,
            })
        }
    }

    /// Fills the expected complement with a fresh item.
    pub fn merge_complement(&mut self, lex: &Lexicon, item: ItemId) -> Result<NodeId, EmgError> {
        self.complement(lex, Rc::new(vec![item]))
    }

    fn complement(&mut self, lex: &Lexicon, cands: Rc<Vec<ItemId>>) -> Result<NodeId, EmgError> {
        let it = lex.item(cands[0]);
        let Some(&Slot::Expect { cat, parent }) = self.frontier.last() else {
            return Err(EmgError::ExpectationMismatch("no category expected".into()));
        };
        if it.category() != cat || !it.licensees().is_empty() {
            return Err(EmgError::ExpectationMismatch(format!(
                "{} expected, {} offered",
                lex.sym_name(cat),
                lex.show_features(&it.features)
            )));
        }
        self.frontier.pop();
        let node = self.open(lex, cands, parent);
        let what = format!("{}::{}", self.label(lex, node), lex.show_features(&it.features));
        self.log(lex, "CPL", &what);
        Ok(node)
    }

    /// Attaches an adjunct without touching the host's expectations. Right
    /// adjuncts need a finished phrase of a host category on top of the
    /// frontier, left adjuncts an expected one.
    pub fn merge_adjunct(&mut self, lex: &Lexicon, item: ItemId) -> Result<NodeId, EmgError> {
        self.adjunct(lex, Rc::new(vec![item]))
    }

    fn adjunct(&mut self, lex: &Lexicon, cands: Rc<Vec<ItemId>>) -> Result<NodeId, EmgError> {
        let it = lex.item(cands[0]);
        let Some(Adjunction { hosts, side }) = &it.adjoin else {
            return Err(EmgError::NotAdjoinable(format!("{} is not an adjunct", it.phon_str())));
        };
        let top = *self.frontier.last().ok_or(EmgError::NoHost)?;
        let (cat, parent) = match (side, top) {
            (Side::Right, Slot::AdjunctSite { cat, host }) => (cat, Some(host)),
            (Side::Left, Slot::Expect { cat, parent }) => (cat, parent),
            _ => return Err(EmgError::NoHost),
        };
        if !hosts.contains(&cat) {
            return Err(EmgError::NotAdjoinable(format!("{} does not adjoin to {}", it.phon_str(), lex.sym_name(cat))));
        }
        let node = self.open(lex, cands, parent);
        let what = format!("{} on {}", self.label(lex, node), lex.sym_name(cat));
        self.log(lex, "ADJ", &what);
        Ok(node)
    }

    /// A phrase with licensee `-f` as its last feature fills the landing site
    /// `+f` and waits in memory for its gap.
    pub fn move_store(&mut self, lex: &Lexicon, item: ItemId) -> Result<NodeId, EmgError> {
        self.store(lex, Rc::new(vec![item]))
    }

    fn store(&mut self, lex: &Lexicon, cands: Rc<Vec<ItemId>>) -> Result<NodeId, EmgError> {
        let it = lex.item(cands[0]);
        let Some(&Slot::Landing { lic, parent }) = self.frontier.last() else {
            return Err(EmgError::ExpectationMismatch("no landing site here".into()));
        };
        let lics = it.licensees();
        if lics.last().map(|f| f.symbol) != Some(lic) {
            return Err(EmgError::ExpectationMismatch(format!(
                "+{} cannot host {}",
                lex.sym_name(lic),
                lex.show_features(&it.features)
            )));
        }
        self.frontier.pop();
        let id = self.next_entry;
        self.next_entry += 1;
        self.memory.push(MemoryEntry {
            id,
            cat: it.category(),
            pending: lics[..lics.len() - 1].iter().map(|f| f.symbol).collect(),
            landed_in: parent,
        });
        self.peak_memory = self.peak_memory.max(self.memory.len());
        let node = self.open(lex, cands, Some(parent));
        let what = format!("{}::{}", self.label(lex, node), lex.show_features(&it.features));
        self.log(lex, "STORE", &what);
        Ok(node)
    }

    /// Lets a stored phrase pass through a lower landing site.
    fn relay(&mut self, lex: &Lexicon, discipline: MemoryDiscipline) -> Result<(), EmgError> {
        let Some(&Slot::Landing { lic, parent }) = self.frontier.last() else {
            return Err(EmgError::ExpectationMismatch("no landing site here".into()));
        };
        let top = self.memory_top(discipline).ok_or(EmgError::EmptyMemory)?;
        if self.memory[top].pending.last() != Some(&lic) {
            return Err(EmgError::UnmatchedMemory(format!("-{}", lex.sym_name(lic))));
        }
        self.frontier.pop();
        let e = &mut self.memory[top];
        e.pending.pop();
        e.landed_in = parent;
        let id = e.id;
        self.attach(Some(parent), Child::Gap(id));
        self.log(lex, "STORE", &format!("relay at +{}", lex.sym_name(lic)));
        Ok(())
    }

    /// Satisfies the expected category with a gap bound by the memory entry.
    pub fn move_discharge(&mut self, lex: &Lexicon) -> Result<(), EmgError> {
        self.discharge(lex, MemoryDiscipline::Lifo)
    }

    fn discharge(&mut self, lex: &Lexicon, discipline: MemoryDiscipline) -> Result<(), EmgError> {
        let Some(&Slot::Expect { cat, parent }) = self.frontier.last() else {
            return Err(EmgError::ExpectationMismatch("no category expected".into()));
        };
        let top = self.memory_top(discipline).ok_or(EmgError::EmptyMemory)?;
        let e = &self.memory[top];
        if e.cat != cat || !e.pending.is_empty() {
            return Err(EmgError::UnmatchedMemory(lex.sym_name(cat).to_string()));
        }
        let e = self.memory.remove(top);
        self.frontier.pop();
        self.attach(parent, Child::Gap(e.id));
        self.log(lex, "DISCH", &format!("gap {}", lex.sym_name(cat)));
        Ok(())
    }

    /// Integrates one word at the head on top of the frontier.
    fn scan(&mut self, lex: &Lexicon, tok: Tok) -> bool {
        let Some(&Slot::Head { node, pos }) = self.frontier.last() else {
            return false;
        };
        let kept: Vec<ItemId> =
            self.nodes[node].candidates.iter().copied().filter(|&i| lex.item_phon(i).get(pos) == Some(&tok)).collect();
        if kept.is_empty() {
            return false;
        }
        self.nodes[node].candidates = Rc::new(kept);
        if pos == 0 {
            self.nodes[node].children.push(Child::Head);
        }
        self.consumed += 1;
        self.predicted.clear();
        self.frontier.pop();
        self.frontier.push(Slot::Head { node, pos: pos + 1 });
        self.log(lex, "SCAN", lex.word(tok));
        true
    }

    /// Pops a head whose words are all scanned (or that is silent).
    fn finish_head(&mut self, lex: &Lexicon) -> bool {
        let Some(&Slot::Head { node, pos }) = self.frontier.last() else {
            return false;
        };
        let done: Vec<ItemId> =
            self.nodes[node].candidates.iter().copied().filter(|&i| lex.item_phon(i).len() == pos).collect();
        if done.is_empty() {
            return false;
        }
        self.nodes[node].candidates = Rc::new(done);
        if pos == 0 {
            self.nodes[node].children.push(Child::Head);
        }
        self.frontier.pop();
        true
    }

    /// Input exhausted, nothing pending, memory empty.
    pub fn is_success(&self) -> bool {
        self.frontier.is_empty() && self.memory.is_empty() && !self.nodes.is_empty()
    }
}

/// Items grouped by everything but pronunciation, in lexicon order.
fn item_classes(lex: &Lexicon) -> Vec<Rc<Vec<ItemId>>> {
    let mut order: Vec<Vec<ItemId>> = Vec::new();
    let mut index = BTreeMap::new();
    for (i, it) in lex.items().iter().enumerate() {
        let key = (it.features.clone(), it.adjoin.clone().map(|a| (a.hosts, a.side == Side::Left)), it.is_silent());
        let k = *index.entry(key).or_insert_with(|| {
            order.push(Vec::new());
            order.len() - 1
        });
        order[k].push(i);
    }
    order.into_iter().map(Rc::new).collect()
}

#[derive(Clone, Debug)]
pub struct EmgSuccess {
    pub state: ExpectationState,
    pub peak_memory: usize,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmgFailure {
    /// Index of the word no analysis could integrate; the sentence length
    /// when the input ran out first.
    pub position: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub enum EmgOutcome {
    Success(EmgSuccess),
    Failure(EmgFailure),
}

impl EmgOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, EmgOutcome::Success(_))
    }

    pub fn peak_memory(&self) -> Option<usize> {
        match self {
            EmgOutcome::Success(s) => Some(s.peak_memory),
            EmgOutcome::Failure(_) => None,
        }
    }
}

/// Word-by-word driver. [`EmgParser::feed`] sees one word at a time and
/// keeps, in depth-first lexicon order, every analysis that integrated it.
pub struct EmgParser<'a> {
    lex: &'a Lexicon,
    cfg: EmgConfig,
    classes: Vec<Rc<Vec<ItemId>>>,
    live: Vec<ExpectationState>,
    position: usize,
    explored: usize,
    failure: Option<EmgFailure>,
}

enum Goal {
    Scan(Tok),
    End,
}

impl<'a> EmgParser<'a> {
    pub fn new(lex: &'a Lexicon, cfg: EmgConfig) -> Self {
        EmgParser {
            lex,
            cfg,
            classes: item_classes(lex),
            live: vec![ExpectationState::new(lex)],
            position: 0,
            explored: 0,
            failure: None,
        }
    }

    /// Analyses still alive after the words fed so far.
    pub fn live(&self) -> &[ExpectationState] {
        &self.live
    }

    pub fn position(&self) -> usize {
        self.position
    }

    /// Integrates the next word. Returns false once no analysis survives.
    pub fn feed(&mut self, word: &str) -> Result<bool, EmgError> {
        if self.failure.is_some() {
            return Ok(false);
        }
        let Some(tok) = self.lex.tok(word) else {
            self.fail(format!("unknown word '{word}'"));
            return Ok(false);
        };
        let states = std::mem::take(&mut self.live);
        let mut next = Vec::new();
        for st in states {
            next.extend(self.expand(st, Goal::Scan(tok))?.0);
        }
        if next.is_empty() {
            self.fail(format!("no analysis integrates '{word}'"));
            return Ok(false);
        }
        self.live = next;
        self.position += 1;
        Ok(true)
    }

    fn fail(&mut self, reason: String) {
        self.live.clear();
        self.failure = Some(EmgFailure { position: self.position, reason });
    }

    /// Closes silent material after the last word and returns the first
    /// analysis that satisfies the success predicate.
    pub fn finish(mut self) -> Result<EmgOutcome, EmgError> {
        if let Some(f) = self.failure.take() {
            return Ok(EmgOutcome::Failure(f));
        }
        let mut memory_left = false;
        for st in std::mem::take(&mut self.live) {
            let (done, stranded) = self.expand(st, Goal::End)?;
            memory_left |= stranded;
            if let Some(state) = done.into_iter().next() {
                let peak_memory = state.peak_memory;
                let trace = state.trace();
                return Ok(EmgOutcome::Success(EmgSuccess { state, peak_memory, trace }));
            }
        }
        let reason = if memory_left {
            "input ended with a stored phrase still in memory"
        } else {
            "input ended with open expectations"
        };
        Ok(EmgOutcome::Failure(EmgFailure { position: self.position, reason: reason.into() }))
    }

    /// Depth-first expansion of one state up to the next scan (or to an empty
    /// frontier at the end). The flag reports an empty frontier reached with
    /// memory still full.
    fn expand(&mut self, start: ExpectationState, goal: Goal) -> Result<(Vec<ExpectationState>, bool), EmgError> {
        let lex = self.lex;
        let limit = self.cfg.left_recursion_limit;
        let discipline = self.cfg.discipline;
        let mut out = Vec::new();
        let mut stranded = false;
        let mut stack = vec![start];
        while let Some(mut st) = stack.pop() {
            self.explored += 1;
            if self.explored > self.cfg.budget {
                return Err(EmgError::BudgetExceeded(self.cfg.budget));
            }
            let Some(&top) = st.frontier.last() else {
                if matches!(goal, Goal::End) {
                    if st.memory.is_empty() {
                        out.push(st);
                    } else {
                        stranded = true;
                    }
                }
                continue;
            };
            // alternatives are collected in preference order, then pushed reversed
            let mut alts: Vec<ExpectationState> = Vec::new();
            match top {
                Slot::Head { .. } => {
                    if let Goal::Scan(tok) = goal {
                        let mut s = st.clone();
                        if s.scan(lex, tok) {
                            out.push(s);
                        }
                    }
                    if st.finish_head(lex) {
                        alts.push(st);
                    }
                }
                Slot::Close { node } => {
                    if st.memory.iter().any(|e| e.landed_in == node) {
                        stranded |= matches!(goal, Goal::End);
                    } else {
                        st.frontier.pop();
                        alts.push(st);
                    }
                }
                Slot::AdjunctSite { cat, .. } => {
                    let mut skip = st.clone();
                    skip.frontier.pop();
                    alts.push(skip);
                    for (k, class) in self.classes.iter().enumerate() {
                        let it = lex.item(class[0]);
                        let fits = it.adjoin.as_ref().is_some_and(|a| a.side == Side::Right && a.hosts.contains(&cat));
                        if fits {
                            let mut s = st.clone();
                            if s.count_prediction(k, limit) && s.adjunct(lex, class.clone()).is_ok() {
                                alts.push(s);
                            }
                        }
                    }
                }
                Slot::Expect { cat, .. } => {
                    let mut s = st.clone();
                    if s.discharge(lex, discipline).is_ok() {
                        alts.push(s);
                    }
                    for (k, class) in self.classes.iter().enumerate() {
                        let it = lex.item(class[0]);
                        let left_adjunct =
                            it.adjoin.as_ref().is_some_and(|a| a.side == Side::Left && a.hosts.contains(&cat));
                        let complement = it.adjoin.is_none() && it.category() == cat && it.licensees().is_empty();
                        if !(left_adjunct || complement) {
                            continue;
                        }
                        let mut s = st.clone();
                        if !s.count_prediction(k, limit) {
                            continue;
                        }
                        let ok = if left_adjunct {
                            s.adjunct(lex, class.clone()).is_ok()
                        } else {
                            s.complement(lex, class.clone()).is_ok()
                        };
                        if ok {
                            alts.push(s);
                        }
                    }
                }
                Slot::Landing { lic, .. } => {
                    let mut s = st.clone();
                    if s.relay(lex, discipline).is_ok() {
                        alts.push(s);
                    }
                    for (k, class) in self.classes.iter().enumerate() {
                        let it = lex.item(class[0]);
                        if it.adjoin.is_some() || it.licensees().last().map(|f| f.symbol) != Some(lic) {
                            continue;
                        }
                        let mut s = st.clone();
                        if s.count_prediction(k, limit) && s.store(lex, class.clone()).is_ok() {
                            alts.push(s);
                        }
                    }
                }
            }
            stack.extend(alts.into_iter().rev());
        }
        Ok((out, stranded))
    }
}

/// Parses a whole sentence, feeding it one word at a time.
pub fn emg_parse<S: AsRef<str>>(lex: &Lexicon, sentence: &[S], cfg: &EmgConfig) -> Result<EmgOutcome, EmgError> {
    let mut p = EmgParser::new(lex, cfg.clone());
    for w in sentence {
        if !p.feed(w.as_ref())? {
            break;
        }
    }
    p.finish()
}
