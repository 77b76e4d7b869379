//! Letters and variables: the two disjoint namespaces labels are drawn from.
//!
//! Letters model elements of an infinite alphabet; any non-reserved token is a
//! letter, so the toolkit can always mint one outside a given finite set.
//! Variables live in their own namespace and are serialized with a `$` prefix.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Reserved token for the epsilon label.
pub const EPSILON_TOKEN: &str = "@eps";

/// Reserved token for the empty word on the command line.
pub const EMPTY_WORD_TOKEN: &str = "@empty";

/// A letter of the (conceptually infinite) alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(Arc<str>);

/// A variable name, without its serialization prefix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(Arc<str>);

fn token_error(token: &str) -> Option<String> {
    if token.is_empty() {
        return Some("token is empty".into());
    }
    if token.chars().any(char::is_whitespace) {
        return Some(format!("token {token:?} contains whitespace"));
    }
    if token == EPSILON_TOKEN || token == EMPTY_WORD_TOKEN {
        return Some(format!("token {token:?} is reserved"));
    }
    None
}

impl Letter {
    /// Creates a letter, rejecting empty/whitespace/reserved tokens and the
    /// `$` variable prefix.
    pub fn new(token: &str) -> Result<Self, String> {
        if let Some(e) = token_error(token) {
            return Err(e);
        }
        if token.starts_with('$') {
            return Err(format!(
                "letter {token:?} starts with '$', which is reserved for variables"
            ));
        }
        Ok(Letter(token.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Variable {
    /// Creates a variable from its bare name (no `$` prefix).
    pub fn new(name: &str) -> Result<Self, String> {
        if let Some(e) = token_error(name) {
            return Err(e);
        }
        if name.starts_with('$') {
            return Err(format!("variable name {name:?} must not repeat the '$' prefix"));
        }
        Ok(Variable(name.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The serialized form, `$name`.
    pub fn prefixed(&self) -> String {
        format!("${}", self.0)
    }

    /// Parses the serialized form `$name`.
    pub fn from_prefixed(token: &str) -> Result<Self, String> {
        match token.strip_prefix('$') {
            Some(name) => Variable::new(name),
            None => Err(format!("variable token {token:?} is missing the '$' prefix")),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Letter({})", self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${}", self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Variable(${})", self.0)
    }
}

impl Borrow<str> for Letter {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Mints a letter outside `occupied`, deterministically: `#f0`, `#f1`, ...
pub fn mint_letter(occupied: &BTreeSet<Letter>) -> Letter {
    mint_letters(occupied, 1).pop().unwrap()
}

/// Mints `count` pairwise-distinct letters, all outside `occupied`.
pub fn mint_letters(occupied: &BTreeSet<Letter>, count: usize) -> Vec<Letter> {
    let mut out = Vec::with_capacity(count);
    let mut k = 0usize;
    while out.len() < count {
        let candidate = Letter(format!("#f{k}").into());
        k += 1;
        if !occupied.contains(&candidate) && !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

/// Mints a letter named after `stem`, falling back to primed variants if the
/// stem itself is occupied. Used for the game's pair letters.
pub fn mint_named_letter(stem: &str, occupied: &BTreeSet<Letter>) -> Letter {
    let mut name = stem.to_string();
    loop {
        if let Ok(l) = Letter::new(&name) {
            if !occupied.contains(&l) {
                return l;
            }
        }
        name.push('\'');
    }
}

/// Mints a variable distinct from everything in `occupied`, preferring
/// `base`, then `base_1`, `base_2`, ...
pub fn mint_variable(base: &str, occupied: &BTreeSet<Variable>) -> Variable {
    if let Ok(v) = Variable::new(base) {
        if !occupied.contains(&v) {
            return v;
        }
    }
    let mut k = 1usize;
    loop {
        if let Ok(v) = Variable::new(&format!("{base}_{k}")) {
            if !occupied.contains(&v) {
                return v;
            }
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tokens() {
        assert!(Letter::new("").is_err());
        assert!(Letter::new("a b").is_err());
        assert!(Letter::new(EPSILON_TOKEN).is_err());
        assert!(Letter::new("$x").is_err());
        assert!(Variable::new("@eps").is_err());
        assert!(Variable::new("$x").is_err());
        assert!(Letter::new("a").is_ok());
        assert!(Variable::new("x").is_ok());
    }

    #[test]
    fn minted_letter_is_fresh() {
        let occupied: BTreeSet<Letter> = ["a", "#f0", "#f2"]
            .iter()
            .map(|s| Letter::new(s).unwrap())
            .collect();
        let l = mint_letter(&occupied);
        assert!(!occupied.contains(&l));
        assert_eq!(l.as_str(), "#f1");
        let many = mint_letters(&occupied, 3);
        assert_eq!(many.len(), 3);
        for m in &many {
            assert!(!occupied.contains(m));
        }
    }

    #[test]
    fn variable_prefix_roundtrip() {
        let v = Variable::new("cart").unwrap();
        assert_eq!(v.prefixed(), "$cart");
        assert_eq!(Variable::from_prefixed("$cart").unwrap(), v);
        assert!(Variable::from_prefixed("cart").is_err());
    }
}
