//! Bottom-up derivations: Select, feature-checked Merge and Move over the
//! chain decomposition of expressions, plus exhaustive enumeration.
//!
//! An [`Expression`] is a main chain and a list of movers. A chain never
//! stores its remaining features: it points at its head item and counts how
//! many of that item's features were checked, which keeps expressions cheap to
//! copy during enumeration.
//!
//! Linear order follows the argumental-shell convention. A head's first
//! checked feature, if it is `=x`, puts the argument on its right; every later
//! merge and every `x=` puts it on the left. A mover whose last licensee is
//! checked lands on the left edge.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{check_match, Feature, FeatureKind};
use crate::lexicon::{ItemId, LexicalItem, Lexicon, Tok};

/// Object number in a derivation: the result of step `k` (0-based) is `#k`.
pub type ObjectId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("item is not in the lexicon")]
    NotInLexicon,
    #[error("feature mismatch: {probe} cannot check {goal}")]
    FeatureMismatch { probe: String, goal: String },
    #[error("shortest move constraint: two movers would start with -{symbol}")]
    Smc { symbol: String },
    #[error("an input expression is already complete")]
    AlreadyComplete,
    #[error("no mover starts with -{symbol}")]
    NoMatchingMover { symbol: String },
    #[error("head feature is not a licensor")]
    NotLicensor,
    #[error("expression is not complete")]
    NotComplete,
    #[error("explored more than {cap} states")]
    StateCapExceeded { cap: usize },
    #[error("bounds must be positive")]
    InvalidBounds,
    #[error("unknown node #{0}")]
    UnknownNode(ObjectId),
    #[error("malformed derivation: {0}")]
    BadReplay(String),
}

/// Display structure. Children of a node are in linear order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Leaf { id: Option<ObjectId>, item: ItemId },
    Node { id: Option<ObjectId>, label: ItemId, children: Vec<Arc<Tree>> },
    Trace { of: Option<ObjectId> },
}

impl Tree {
    pub fn id(&self) -> Option<ObjectId> {
        match self {
            Tree::Leaf { id, .. } | Tree::Node { id, .. } => *id,
            Tree::Trace { .. } => None,
        }
    }

    /// Labeled brackets, e.g. `[scolds [Alice] [scolds [scolds] [Bill]]]`.
    pub fn brackets(&self, lex: &Lexicon) -> String {
        let mut out = String::new();
        self.write_brackets(lex, &mut out);
        out
    }

    fn write_brackets(&self, lex: &Lexicon, out: &mut String) {
        match self {
            Tree::Leaf { item, .. } => {
                let _ = write!(out, "[{}]", lex.item(*item).phon_str());
            }
            Tree::Trace { .. } => out.push_str("[t]"),
            Tree::Node { label, children, .. } => {
                let _ = write!(out, "[{}", lex.item(*label).phon_str());
                for c in children {
                    out.push(' ');
                    c.write_brackets(lex, out);
                }
                out.push(']');
            }
        }
    }

    /// Unordered-set notation with linear order kept: `{Alice, {scolds, Bill}}`.
    pub fn sets(&self, lex: &Lexicon) -> String {
        match self {
            Tree::Leaf { item, .. } => lex.item(*item).phon_str(),
            Tree::Trace { .. } => "t".into(),
            Tree::Node { children, .. } => {
                format!("{{{}}}", children.iter().map(|c| c.sets(lex)).collect::<Vec<_>>().join(", "))
            }
        }
    }

    pub fn to_display(&self, lex: &Lexicon) -> DisplayTree {
        match self {
            Tree::Leaf { id, item } => DisplayTree {
                label: lex.item(*item).phon_str(),
                id: *id,
                features: Some(lex.show_features(&lex.item(*item).features)),
                trace_of: None,
                children: Vec::new(),
            },
            Tree::Trace { of } => DisplayTree {
                label: "t".into(),
                id: None,
                features: None,
                trace_of: *of,
                children: Vec::new(),
            },
            Tree::Node { id, label, children } => DisplayTree {
                label: lex.item(*label).phon_str(),
                id: *id,
                features: None,
                trace_of: None,
                children: children.iter().map(|c| c.to_display(lex)).collect(),
            },
        }
    }
}

/// Machine-readable tree, serialized as JSON by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayTree {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<ObjectId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_of: Option<ObjectId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DisplayTree>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub yield_: Vec<Tok>,
    pub head: ItemId,
    pub checked: usize,
    pub tree: Arc<Tree>,
    /// Object that became this chain, for movers.
    pub origin: Option<ObjectId>,
}

impl Chain {
    pub fn features<'a>(&self, lex: &'a Lexicon) -> &'a [Feature] {
        &lex.item(self.head).features[self.checked..]
    }

    fn next(&self, lex: &Lexicon) -> Option<Feature> {
        self.features(lex).first().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expression {
    pub main: Chain,
    pub movers: Vec<Chain>,
    pub id: Option<ObjectId>,
}

impl Expression {
    /// No movers and exactly the start category left.
    pub fn is_complete(&self, lex: &Lexicon) -> bool {
        self.movers.is_empty() && self.main.features(lex) == [Feature::cat(lex.start())]
    }

    pub fn features<'a>(&self, lex: &'a Lexicon) -> &'a [Feature] {
        self.main.features(lex)
    }

    pub fn tree(&self) -> &Tree {
        &self.main.tree
    }

    /// `⟨Alice scolds Bill⟩ :: V`, with pending movers in braces.
    pub fn describe(&self, lex: &Lexicon) -> String {
        let mut s = format!(
            "⟨{}⟩ :: {}",
            lex.render(&self.main.yield_).join(" "),
            lex.show_features(self.main.features(lex))
        );
        for m in &self.movers {
            let _ = write!(
                s,
                " {{⟨{}⟩ :: {}}}",
                lex.render(&m.yield_).join(" "),
                lex.show_features(m.features(lex))
            );
        }
        s
    }
}

pub fn select(lex: &Lexicon, item: ItemId) -> Result<Expression, DerivationError> {
    select_at(lex, item, None)
}

/// Select by value; fails if the item is not one of the lexicon's items.
pub fn select_item(lex: &Lexicon, item: &LexicalItem) -> Result<Expression, DerivationError> {
    let id = lex.items().iter().position(|it| it == item).ok_or(DerivationError::NotInLexicon)?;
    select(lex, id)
}

fn select_at(lex: &Lexicon, item: ItemId, id: Option<ObjectId>) -> Result<Expression, DerivationError> {
    if item >= lex.len() {
        return Err(DerivationError::NotInLexicon);
    }
    Ok(Expression {
        main: Chain {
            yield_: lex.item_phon(item).to_vec(),
            head: item,
            checked: 0,
            tree: Arc::new(Tree::Leaf { id, item }),
            origin: None,
        },
        movers: Vec::new(),
        id,
    })
}

pub fn merge(lex: &Lexicon, head: &Expression, arg: &Expression) -> Result<Expression, DerivationError> {
    merge_at(lex, head, arg, None)
}

fn mismatch(lex: &Lexicon, probe: Option<Feature>, goal: Option<Feature>) -> DerivationError {
    let show = |f: Option<Feature>| f.map(|f| lex.show_feature(f)).unwrap_or_else(|| "nothing".into());
    DerivationError::FeatureMismatch { probe: show(probe), goal: show(goal) }
}

fn smc_insert(lex: &Lexicon, movers: &mut Vec<Chain>, chain: Chain) -> Result<(), DerivationError> {
    let lead = chain.next(lex).expect("mover has a licensee");
    if movers.iter().any(|m| m.next(lex).map(|f| f.symbol) == Some(lead.symbol)) {
        return Err(DerivationError::Smc { symbol: lex.sym_name(lead.symbol).to_string() });
    }
    movers.push(chain);
    Ok(())
}

fn merge_at(
    lex: &Lexicon,
    head: &Expression,
    arg: &Expression,
    id: Option<ObjectId>,
) -> Result<Expression, DerivationError> {
    if head.is_complete(lex) || arg.is_complete(lex) {
        return Err(DerivationError::AlreadyComplete);
    }
    let probe = head.main.next(lex);
    let goal = arg.main.next(lex);
    let (Some(p), Some(g)) = (probe, goal) else {
        return Err(mismatch(lex, probe, goal));
    };
    if !p.kind.is_selector() || !check_match(p, g) {
        return Err(mismatch(lex, probe, goal));
    }
    let to_right = p.kind == FeatureKind::SelR && head.main.checked == 0;

    let mut movers = head.movers.clone();
    for m in &arg.movers {
        smc_insert(lex, &mut movers, m.clone())?;
    }
    let arg_chain = Chain { checked: arg.main.checked + 1, ..arg.main.clone() };
    let arg_moves = !arg_chain.features(lex).is_empty();

    let (yield_, arg_tree) = if arg_moves {
        let trace = Arc::new(Tree::Trace { of: arg.id });
        smc_insert(lex, &mut movers, Chain { origin: arg.id, ..arg_chain })?;
        (head.main.yield_.clone(), trace)
    } else {
        let mut y = Vec::with_capacity(head.main.yield_.len() + arg_chain.yield_.len());
        if to_right {
            y.extend_from_slice(&head.main.yield_);
            y.extend_from_slice(&arg_chain.yield_);
        } else {
            y.extend_from_slice(&arg_chain.yield_);
            y.extend_from_slice(&head.main.yield_);
        }
        (y, arg.main.tree.clone())
    };
    let children = if to_right {
        vec![head.main.tree.clone(), arg_tree]
    } else {
        vec![arg_tree, head.main.tree.clone()]
    };
    Ok(Expression {
        main: Chain {
            yield_,
            head: head.main.head,
            checked: head.main.checked + 1,
            tree: Arc::new(Tree::Node { id, label: head.main.head, children }),
            origin: None,
        },
        movers,
        id,
    })
}

/// Move: `+f` on the main chain attracts the unique mover starting with `-f`.
pub fn move_(lex: &Lexicon, e: &Expression) -> Result<Expression, DerivationError> {
    move_at(lex, e, None).map(|(e, _)| e)
}

fn move_at(
    lex: &Lexicon,
    e: &Expression,
    id: Option<ObjectId>,
) -> Result<(Expression, Option<ObjectId>), DerivationError> {
    let Some(p) = e.main.next(lex).filter(|f| f.kind == FeatureKind::LicPlus) else {
        return Err(DerivationError::NotLicensor);
    };
    let idx = e
        .movers
        .iter()
        .position(|m| m.next(lex).is_some_and(|g| check_match(p, g)))
        .ok_or_else(|| DerivationError::NoMatchingMover { symbol: lex.sym_name(p.symbol).to_string() })?;
    let mut movers = e.movers.clone();
    let mover = movers.remove(idx);
    let origin = mover.origin;
    let mover = Chain { checked: mover.checked + 1, ..mover };
    let (yield_, children) = if mover.features(lex).is_empty() {
        let mut y = mover.yield_.clone();
        y.extend_from_slice(&e.main.yield_);
        (y, vec![mover.tree.clone(), e.main.tree.clone()])
    } else {
        let trace = Arc::new(Tree::Trace { of: origin });
        smc_insert(lex, &mut movers, mover)?;
        (e.main.yield_.clone(), vec![trace, e.main.tree.clone()])
    };
    Ok((
        Expression {
            main: Chain {
                yield_,
                head: e.main.head,
                checked: e.main.checked + 1,
                tree: Arc::new(Tree::Node { id, label: e.main.head, children }),
                origin: None,
            },
            movers,
            id,
        },
        origin,
    ))
}

pub fn linearize(lex: &Lexicon, e: &Expression) -> Result<Vec<String>, DerivationError> {
    if !e.is_complete(lex) {
        return Err(DerivationError::NotComplete);
    }
    Ok(lex.render(&e.main.yield_))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    Select(ItemId),
    Merge { head: ObjectId, arg: ObjectId },
    /// `mover` is the object that re-merges; filled in by replay.
    Move { target: ObjectId, mover: Option<ObjectId> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepsMode {
    PerItem,
    Batch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    steps: Vec<Step>,
    objects: Vec<Expression>,
}

impl Derivation {
    /// Executes `steps` against the lexicon. Every object but the last must be
    /// consumed exactly once.
    pub fn replay(lex: &Lexicon, steps: Vec<Step>) -> Result<Derivation, DerivationError> {
        let mut objects: Vec<Expression> = Vec::with_capacity(steps.len());
        let mut used = vec![false; steps.len()];
        let take = |i: ObjectId, k: usize, used: &mut Vec<bool>| -> Result<(), DerivationError> {
            if i >= k || used[i] {
                return Err(DerivationError::BadReplay(format!("object #{i} unavailable at step {}", k + 1)));
            }
            used[i] = true;
            Ok(())
        };
        let mut out_steps = Vec::with_capacity(steps.len());
        for (k, step) in steps.into_iter().enumerate() {
            let (e, step) = match step {
                Step::Select(item) => (select_at(lex, item, Some(k))?, step),
                Step::Merge { head, arg } => {
                    take(head, k, &mut used)?;
                    take(arg, k, &mut used)?;
                    (merge_at(lex, &objects[head], &objects[arg], Some(k))?, step)
                }
                Step::Move { target, .. } => {
                    take(target, k, &mut used)?;
                    let (e, mover) = move_at(lex, &objects[target], Some(k))?;
                    (e, Step::Move { target, mover })
                }
            };
            objects.push(e);
            out_steps.push(step);
        }
        if let Some(last) = used.len().checked_sub(1) {
            if used[last] || used[..last].iter().any(|u| !u) {
                return Err(DerivationError::BadReplay("derivation does not form a single object".into()));
            }
        }
        Ok(Derivation { steps: out_steps, objects })
    }

    pub fn empty() -> Derivation {
        Derivation { steps: Vec::new(), objects: Vec::new() }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn objects(&self) -> &[Expression] {
        &self.objects
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn result(&self) -> Option<&Expression> {
        self.objects.last()
    }

    pub fn yield_(&self, lex: &Lexicon) -> Vec<String> {
        self.result().map(|e| lex.render(&e.main.yield_)).unwrap_or_default()
    }

    /// Numbered step trace, one line per step.
    pub fn trace(&self, lex: &Lexicon) -> String {
        let mut out = String::new();
        for (k, (step, obj)) in self.steps.iter().zip(&self.objects).enumerate() {
            let _ = match step {
                Step::Select(item) => writeln!(out, "{} SELECT {}", k + 1, lex.show_item(*item)),
                Step::Merge { head, arg } => {
                    writeln!(out, "{} MERGE #{head} #{arg} → {}", k + 1, obj.describe(lex))
                }
                Step::Move { target, .. } => writeln!(out, "{} MOVE #{target} → {}", k + 1, obj.describe(lex)),
            };
        }
        out
    }

    pub fn brackets(&self, lex: &Lexicon) -> String {
        self.result().map(|e| e.tree().brackets(lex)).unwrap_or_default()
    }

    fn terms(&self, x: ObjectId, out: &mut Vec<ObjectId>) {
        out.push(x);
        match self.steps[x] {
            Step::Select(_) => {}
            Step::Merge { head, arg } => {
                self.terms(head, out);
                self.terms(arg, out);
            }
            Step::Move { target, .. } => self.terms(target, out),
        }
    }

    /// Derivational c-command: `x` c-commands every term of each object it was
    /// paired with by a Merge or Move step, except itself.
    pub fn c_commands(&self, x: ObjectId, y: ObjectId) -> Result<bool, DerivationError> {
        for n in [x, y] {
            if n >= self.steps.len() {
                return Err(DerivationError::UnknownNode(n));
            }
        }
        if x == y {
            return Ok(false);
        }
        for step in &self.steps {
            let partner = match *step {
                Step::Merge { head, arg } if head == x => Some(arg),
                Step::Merge { head, arg } if arg == x => Some(head),
                Step::Move { target, mover: Some(m) } if m == x => Some(target),
                Step::Move { target, mover: Some(m) } if target == x => Some(m),
                _ => None,
            };
            if let Some(p) = partner {
                let mut ts = Vec::new();
                self.terms(p, &mut ts);
                if ts.contains(&y) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Object number of the SELECT step for the first item with this phon.
    pub fn leaf(&self, lex: &Lexicon, phon: &str) -> Option<ObjectId> {
        self.steps.iter().position(|s| matches!(s, Step::Select(i) if lex.item(*i).phon_str() == phon))
    }
}

pub fn count_steps(d: &Derivation, mode: StepsMode) -> usize {
    match mode {
        StepsMode::PerItem => d.steps.len(),
        StepsMode::Batch => {
            let mut n = 0;
            let mut prev_select = false;
            for s in &d.steps {
                let is_select = matches!(s, Step::Select(_));
                if !(is_select && prev_select) {
                    n += 1;
                }
                prev_select = is_select;
            }
            n
        }
    }
}

/// How an enumerated expression was built.
#[derive(Debug)]
enum Recipe {
    Select(ItemId),
    Merge(Arc<Recipe>, Arc<Recipe>),
    Move(Arc<Recipe>),
}

impl Recipe {
    /// Canonical step order: all selections first (head before argument),
    /// then the operations bottom-up.
    fn to_steps(&self) -> Vec<Step> {
        fn selects(r: &Recipe, out: &mut Vec<Step>) {
            match r {
                Recipe::Select(i) => out.push(Step::Select(*i)),
                Recipe::Merge(h, a) => {
                    selects(h, out);
                    selects(a, out);
                }
                Recipe::Move(t) => selects(t, out),
            }
        }
        fn ops(r: &Recipe, next_leaf: &mut usize, out: &mut Vec<Step>) -> ObjectId {
            match r {
                Recipe::Select(_) => {
                    *next_leaf += 1;
                    *next_leaf - 1
                }
                Recipe::Merge(h, a) => {
                    let h = ops(h, next_leaf, out);
                    let a = ops(a, next_leaf, out);
                    out.push(Step::Merge { head: h, arg: a });
                    out.len() - 1
                }
                Recipe::Move(t) => {
                    let t = ops(t, next_leaf, out);
                    out.push(Step::Move { target: t, mover: None });
                    out.len() - 1
                }
            }
        }
        let mut steps = Vec::new();
        selects(self, &mut steps);
        let mut next_leaf = 0;
        ops(self, &mut next_leaf, &mut steps);
        steps
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicConfig {
    pub max_steps: usize,
    pub state_cap: usize,
    /// Leaves allowed beyond sentence length when recognizing.
    pub silent_allowance: usize,
}

impl Default for ClassicConfig {
    fn default() -> Self {
        ClassicConfig { max_steps: 64, state_cap: 500_000, silent_allowance: 3 }
    }
}

#[derive(Clone)]
struct Entry {
    expr: Expression,
    recipe: Arc<Recipe>,
    steps: usize,
}

/// Applies Move while the main chain starts with a licensor. `None` if a
/// licensor finds no mover.
fn settle(lex: &Lexicon, mut entry: Entry) -> Option<Entry> {
    while entry.expr.main.next(lex).is_some_and(|f| f.kind == FeatureKind::LicPlus) {
        let moved = move_(lex, &entry.expr).ok()?;
        entry = Entry { expr: moved, recipe: Arc::new(Recipe::Move(entry.recipe)), steps: entry.steps + 1 };
    }
    Some(entry)
}

/// Bottom-up closure by number of leaves. `keep` prunes expressions,
/// `usable` restricts which items may be selected.
fn enumerate(
    lex: &Lexicon,
    max_leaves: usize,
    cfg: &ClassicConfig,
    usable: &dyn Fn(ItemId) -> bool,
    keep: &dyn Fn(&Expression) -> bool,
) -> Result<Vec<Vec<Entry>>, DerivationError> {
    let mut levels: Vec<Vec<Entry>> = vec![Vec::new(); max_leaves + 1];
    let mut states = 0usize;
    let mut bump = |n: usize| -> Result<(), DerivationError> {
        states += n;
        if states > cfg.state_cap {
            Err(DerivationError::StateCapExceeded { cap: cfg.state_cap })
        } else {
            Ok(())
        }
    };
    for item in 0..lex.len() {
        if !usable(item) {
            continue;
        }
        let e = select(lex, item)?;
        let entry = Entry { expr: e, recipe: Arc::new(Recipe::Select(item)), steps: 1 };
        if let Some(entry) = settle(lex, entry) {
            if entry.steps <= cfg.max_steps && keep(&entry.expr) {
                bump(1)?;
                levels[1].push(entry);
            }
        }
    }
    for n in 2..=max_leaves {
        let mut fresh = Vec::new();
        for a in 1..n {
            let b = n - a;
            // index arguments by offered category
            let mut by_cat: HashMap<u16, Vec<&Entry>> = HashMap::new();
            for y in &levels[b] {
                if let Some(f) = y.expr.main.next(lex) {
                    if f.kind == FeatureKind::Cat && !y.expr.is_complete(lex) {
                        by_cat.entry(f.symbol.0).or_default().push(y);
                    }
                }
            }
            for x in &levels[a] {
                let Some(p) = x.expr.main.next(lex) else { continue };
                if !p.kind.is_selector() {
                    continue;
                }
                let Some(args) = by_cat.get(&p.symbol.0) else { continue };
                for y in args {
                    let steps = x.steps + y.steps + 1;
                    if steps > cfg.max_steps {
                        continue;
                    }
                    let Ok(m) = merge(lex, &x.expr, &y.expr) else { continue };
                    let entry =
                        Entry { expr: m, recipe: Arc::new(Recipe::Merge(x.recipe.clone(), y.recipe.clone())), steps };
                    if let Some(entry) = settle(lex, entry) {
                        if entry.steps <= cfg.max_steps && keep(&entry.expr) {
                            bump(1)?;
                            fresh.push(entry);
                        }
                    }
                }
            }
        }
        levels[n] = fresh;
    }
    Ok(levels)
}

fn finish(lex: &Lexicon, entries: Vec<&Entry>) -> Result<Vec<(Vec<String>, Derivation)>, DerivationError> {
    let mut out: Vec<(Vec<String>, String, Derivation)> = Vec::with_capacity(entries.len());
    for e in entries {
        // enumeration runs without object ids; replay assigns them
        let d = Derivation::replay(lex, e.recipe.to_steps())?;
        debug_assert_eq!(d.result().map(|r| &r.main.yield_), Some(&e.expr.main.yield_));
        let trace = d.trace(lex);
        out.push((d.yield_(lex), trace, d));
    }
    out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Ok(out.into_iter().map(|(y, _, d)| (y, d)).collect())
}

/// Every complete derivation with at most `max_leaves` selections and
/// `cfg.max_steps` steps, ordered by yield and then by trace.
pub fn derive_all(
    lex: &Lexicon,
    max_leaves: usize,
    cfg: &ClassicConfig,
) -> Result<Vec<(Vec<String>, Derivation)>, DerivationError> {
    if max_leaves == 0 || cfg.max_steps == 0 {
        return Err(DerivationError::InvalidBounds);
    }
    let levels = enumerate(lex, max_leaves, cfg, &|_| true, &|_| true)?;
    let complete: Vec<&Entry> = levels.iter().flatten().filter(|e| e.expr.is_complete(lex)).collect();
    finish(lex, complete)
}

/// Distinct yields of [`derive_all`], without building derivations.
pub fn derive_yields(
    lex: &Lexicon,
    max_leaves: usize,
    cfg: &ClassicConfig,
) -> Result<BTreeSet<Vec<String>>, DerivationError> {
    Ok(derive_all(lex, max_leaves, cfg)?.into_iter().map(|(y, _)| y).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    UnknownToken(String),
    NoDerivation,
}

#[derive(Clone, Debug)]
pub enum Recognition {
    Accept(Vec<Derivation>),
    Reject(RejectReason),
}

impl Recognition {
    pub fn accepted(&self) -> bool {
        matches!(self, Recognition::Accept(_))
    }
}

fn occurs_in(hay: &[Tok], needle: &[Tok]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

/// Goal-directed recognition. Only items whose words occur in the sentence are
/// selected, and every chain must spell a contiguous piece of the sentence;
/// the accepted set coincides with the matching yields of [`derive_all`] with
/// `max_leaves = |sentence| + silent_allowance`.
pub fn recognize<S: AsRef<str>>(
    lex: &Lexicon,
    sentence: &[S],
    cfg: &ClassicConfig,
) -> Result<Recognition, DerivationError> {
    let toks = match lex.intern_sentence(sentence) {
        Ok(t) => t,
        Err(w) => return Ok(Recognition::Reject(RejectReason::UnknownToken(w))),
    };
    let max_leaves = toks.len() + cfg.silent_allowance;
    if max_leaves == 0 {
        return Ok(Recognition::Reject(RejectReason::NoDerivation));
    }
    let mut counts: HashMap<Tok, usize> = HashMap::new();
    for t in &toks {
        *counts.entry(*t).or_default() += 1;
    }
    let usable = |item: ItemId| occurs_in(&toks, lex.item_phon(item));
    let keep = |e: &Expression| {
        let mut used: HashMap<Tok, usize> = HashMap::new();
        for c in std::iter::once(&e.main).chain(&e.movers) {
            if !occurs_in(&toks, &c.yield_) {
                return false;
            }
            for t in &c.yield_ {
                let n = used.entry(*t).or_default();
                *n += 1;
                if *n > counts[t] {
                    return false;
                }
            }
        }
        true
    };
    let levels = enumerate(lex, max_leaves, cfg, &usable, &keep)?;
    let hits: Vec<&Entry> = levels
        .iter()
        .flatten()
        .filter(|e| e.expr.is_complete(lex) && e.expr.main.yield_ == toks)
        .collect();
    if hits.is_empty() {
        return Ok(Recognition::Reject(RejectReason::NoDerivation));
    }
    Ok(Recognition::Accept(finish(lex, hits)?.into_iter().map(|(_, d)| d).collect()))
}

/// Yields reachable when Merge ignores features: any two objects combine,
/// in either linear order. Items may be reused, as in [`derive_all`].
pub fn unconstrained_merge_demo(
    lex: &Lexicon,
    max_leaves: usize,
    state_cap: usize,
) -> Result<BTreeSet<Vec<String>>, DerivationError> {
    if max_leaves == 0 {
        return Err(DerivationError::InvalidBounds);
    }
    let mut levels: Vec<BTreeSet<Vec<Tok>>> = vec![BTreeSet::new(); max_leaves + 1];
    levels[1] = (0..lex.len()).map(|i| lex.item_phon(i).to_vec()).collect();
    let mut total = levels[1].len();
    for n in 2..=max_leaves {
        let mut fresh = BTreeSet::new();
        for a in 1..n {
            for x in &levels[a] {
                for y in &levels[n - a] {
                    let mut xy = x.clone();
                    xy.extend_from_slice(y);
                    fresh.insert(xy);
                }
            }
        }
        total += fresh.len();
        if total > state_cap {
            return Err(DerivationError::StateCapExceeded { cap: state_cap });
        }
        levels[n] = fresh;
    }
    Ok(levels.iter().flatten().map(|y| lex.render(y)).collect())
}
