//! Transition labels: plain (letter / variable / epsilon) and polarized.

use std::fmt;

use crate::alphabet::{Letter, Variable, EPSILON_TOKEN};

/// A plain transition label. The ordering (letter < var < eps, then token)
/// is the tie-break order used by deterministic searches.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Letter(Letter),
    Var(Variable),
    Epsilon,
}

impl Label {
    pub fn is_epsilon(&self) -> bool {
        matches!(self, Label::Epsilon)
    }

    pub fn letter(&self) -> Option<&Letter> {
        match self {
            Label::Letter(l) => Some(l),
            _ => None,
        }
    }

    pub fn variable(&self) -> Option<&Variable> {
        match self {
            Label::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Letter(l) => write!(f, "{l}"),
            Label::Var(v) => write!(f, "{v}"),
            Label::Epsilon => f.write_str(EPSILON_TOKEN),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({self})")
    }
}

/// Send (`!`) or receive (`?`) direction of a communicating label.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Polarity {
    Send,
    Recv,
}

impl Polarity {
    pub fn symbol(self) -> char {
        match self {
            Polarity::Send => '!',
            Polarity::Recv => '?',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '!' => Some(Polarity::Send),
            '?' => Some(Polarity::Recv),
            _ => None,
        }
    }

    /// Swaps `!` and `?`.
    pub fn dual(self) -> Self {
        match self {
            Polarity::Send => Polarity::Recv,
            Polarity::Recv => Polarity::Send,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A polarized label, as used by communicating automata.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolLabel {
    pub polarity: Polarity,
    pub label: Label,
}

impl PolLabel {
    pub fn send(label: Label) -> Self {
        PolLabel { polarity: Polarity::Send, label }
    }

    pub fn recv(label: Label) -> Self {
        PolLabel { polarity: Polarity::Recv, label }
    }
}

impl fmt::Display for PolLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.polarity, self.label)
    }
}

impl fmt::Debug for PolLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolLabel({self})")
    }
}

/// An n-tuple of labels, as used by n-FVA transitions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LabelTuple(pub Vec<Label>);

impl LabelTuple {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for LabelTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_order_is_letter_var_eps() {
        let a = Label::Letter(Letter::new("a").unwrap());
        let z = Label::Letter(Letter::new("z").unwrap());
        let x = Label::Var(Variable::new("a").unwrap());
        assert!(a < z);
        assert!(z < x);
        assert!(x < Label::Epsilon);
    }
}
