//! Feature atoms and the matching relation that licenses Merge and Move.
//!
//! Five kinds are distinguished, written in lexicon files as
//!
//! | surface | kind       | role                                   |
//! |---------|------------|----------------------------------------|
//! | `x`     | `Cat`      | category offered to a selector         |
//! | `=x`    | `SelR`     | selects a category, first one to the right |
//! | `x=`    | `SelL`     | selects a category to the left         |
//! | `+x`    | `LicPlus`  | licensor, triggers Move                |
//! | `-x`    | `LicMinus` | licensee, marks a phrase that must move |
//!
//! Symbols are interned per lexicon (see [`crate::Lexicon::sym`]), so a
//! [`Feature`] is a small `Copy` value. Strong/weak flavours are not modelled.

use serde::{Deserialize, Serialize};

/// Index of a feature symbol in a lexicon's inventory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sym(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureKind {
    Cat,
    SelR,
    SelL,
    LicPlus,
    LicMinus,
}

impl FeatureKind {
    pub fn is_selector(self) -> bool {
        matches!(self, FeatureKind::SelR | FeatureKind::SelL)
    }

    /// Spells a symbol with this kind's surface syntax.
    pub fn spell(self, symbol: &str) -> String {
        match self {
            FeatureKind::Cat => symbol.to_string(),
            FeatureKind::SelR => format!("={symbol}"),
            FeatureKind::SelL => format!("{symbol}="),
            FeatureKind::LicPlus => format!("+{symbol}"),
            FeatureKind::LicMinus => format!("-{symbol}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Feature {
    pub kind: FeatureKind,
    pub symbol: Sym,
}

impl Feature {
    pub const fn new(kind: FeatureKind, symbol: Sym) -> Self {
        Feature { kind, symbol }
    }

    pub const fn cat(symbol: Sym) -> Self {
        Feature::new(FeatureKind::Cat, symbol)
    }
}

/// True iff `probe` may check `goal`: a selector against the category of the
/// same symbol, or a licensor against the licensee of the same symbol.
pub fn check_match(probe: Feature, goal: Feature) -> bool {
    if probe.symbol != goal.symbol {
        return false;
    }
    match probe.kind {
        FeatureKind::SelR | FeatureKind::SelL => goal.kind == FeatureKind::Cat,
        FeatureKind::LicPlus => goal.kind == FeatureKind::LicMinus,
        FeatureKind::Cat | FeatureKind::LicMinus => false,
    }
}

/// Splits a surface feature token (`=D`, `D=`, `+wh`, `-wh`, `V`) into kind and symbol text.
pub fn split_surface(token: &str) -> Option<(FeatureKind, &str)> {
    let (kind, sym) = if let Some(rest) = token.strip_prefix('=') {
        (FeatureKind::SelR, rest)
    } else if let Some(rest) = token.strip_prefix('+') {
        (FeatureKind::LicPlus, rest)
    } else if let Some(rest) = token.strip_prefix('-') {
        (FeatureKind::LicMinus, rest)
    } else if let Some(rest) = token.strip_suffix('=') {
        (FeatureKind::SelL, rest)
    } else {
        (FeatureKind::Cat, token)
    };
    if is_symbol(sym) {
        Some((kind, sym))
    } else {
        None
    }
}

pub(crate) fn is_symbol(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const D: Sym = Sym(0);
    const V: Sym = Sym(1);
    const WH: Sym = Sym(2);

    #[test]
    fn selector_checks_same_category() {
        assert!(check_match(Feature::new(FeatureKind::SelR, D), Feature::cat(D)));
        assert!(check_match(Feature::new(FeatureKind::SelL, D), Feature::cat(D)));
        assert!(!check_match(Feature::new(FeatureKind::SelR, D), Feature::cat(V)));
    }

    #[test]
    fn licensor_checks_licensee() {
        assert!(check_match(
            Feature::new(FeatureKind::LicPlus, WH),
            Feature::new(FeatureKind::LicMinus, WH)
        ));
        assert!(!check_match(Feature::new(FeatureKind::LicPlus, WH), Feature::cat(WH)));
        assert!(!check_match(Feature::cat(D), Feature::new(FeatureKind::SelR, D)));
    }

    #[test]
    fn surface_syntax() {
        assert_eq!(split_surface("=D"), Some((FeatureKind::SelR, "D")));
        assert_eq!(split_surface("D="), Some((FeatureKind::SelL, "D")));
        assert_eq!(split_surface("+wh"), Some((FeatureKind::LicPlus, "wh")));
        assert_eq!(split_surface("-wh"), Some((FeatureKind::LicMinus, "wh")));
        assert_eq!(split_surface("D_sg"), Some((FeatureKind::Cat, "D_sg")));
        assert_eq!(split_surface("="), None);
        assert_eq!(split_surface("=D="), None);
    }

    fn any_kind() -> impl Strategy<Value = FeatureKind> {
        prop_oneof![
            Just(FeatureKind::Cat),
            Just(FeatureKind::SelR),
            Just(FeatureKind::SelL),
            Just(FeatureKind::LicPlus),
            Just(FeatureKind::LicMinus),
        ]
    }

    proptest! {
        #[test]
        fn never_matches_same_kind(k in any_kind(), a in 0u16..4, b in 0u16..4) {
            prop_assert!(!check_match(Feature::new(k, Sym(a)), Feature::new(k, Sym(b))));
        }

        #[test]
        fn match_requires_equal_symbols(k1 in any_kind(), k2 in any_kind(), a in 0u16..4, b in 0u16..4) {
            if check_match(Feature::new(k1, Sym(a)), Feature::new(k2, Sym(b))) {
                prop_assert_eq!(a, b);
                // swapping symbols together keeps the verdict
                prop_assert!(check_match(Feature::new(k1, Sym(b)), Feature::new(k2, Sym(a))));
            }
        }
    }
}
