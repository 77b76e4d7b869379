//! Automaton records: plain, epsilon, n-labeled and communicating variants,
//! together with structural validation and variable renaming.
//!
//! All automata are immutable values; constructions return new automata.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{mint_variable, Letter, Variable};
use crate::label::{Label, LabelTuple, PolLabel};

/// A state identifier. Plain text token; constructions mint fresh ones.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(Arc<str>);

impl StateId {
    pub fn new(token: &str) -> Result<Self, String> {
        if token.is_empty() {
            return Err("state id is empty".into());
        }
        if token.chars().any(char::is_whitespace) {
            return Err(format!("state id {token:?} contains whitespace"));
        }
        Ok(StateId(token.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateId({})", self.0)
    }
}

/// One transition, in canonical `(from, label, to)` order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Transition<L> {
    pub from: StateId,
    pub label: L,
    pub to: StateId,
}

/// Behavior shared by the label kinds an automaton can carry.
pub trait LabelKind: Clone + Ord + fmt::Display {
    fn variables(&self) -> Vec<&Variable>;
    fn letters(&self) -> Vec<&Letter>;
    fn mentions_epsilon(&self) -> bool;
    fn rename_variables(&self, map: &BTreeMap<Variable, Variable>) -> Self;
}

impl LabelKind for Label {
    fn variables(&self) -> Vec<&Variable> {
        match self {
            Label::Var(v) => vec![v],
            _ => vec![],
        }
    }

    fn letters(&self) -> Vec<&Letter> {
        match self {
            Label::Letter(l) => vec![l],
            _ => vec![],
        }
    }

    fn mentions_epsilon(&self) -> bool {
        self.is_epsilon()
    }

    fn rename_variables(&self, map: &BTreeMap<Variable, Variable>) -> Self {
        match self {
            Label::Var(v) => Label::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            other => other.clone(),
        }
    }
}

impl LabelKind for PolLabel {
    fn variables(&self) -> Vec<&Variable> {
        self.label.variables()
    }

    fn letters(&self) -> Vec<&Letter> {
        self.label.letters()
    }

    fn mentions_epsilon(&self) -> bool {
        self.label.is_epsilon()
    }

    fn rename_variables(&self, map: &BTreeMap<Variable, Variable>) -> Self {
        PolLabel { polarity: self.polarity, label: self.label.rename_variables(map) }
    }
}

impl LabelKind for LabelTuple {
    fn variables(&self) -> Vec<&Variable> {
        self.0.iter().flat_map(|l| l.variables()).collect()
    }

    fn letters(&self) -> Vec<&Letter> {
        self.0.iter().flat_map(|l| l.letters()).collect()
    }

    fn mentions_epsilon(&self) -> bool {
        self.0.iter().any(Label::is_epsilon)
    }

    fn rename_variables(&self, map: &BTreeMap<Variable, Variable>) -> Self {
        LabelTuple(self.0.iter().map(|l| l.rename_variables(map)).collect())
    }
}

/// A structural invariant violation, reported as data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    UnknownState { context: String, state: String },
    UnknownVariable { context: String, variable: String },
    EpsilonNotAllowed { from: String, to: String },
    SingleInitialRequired { found: usize },
    AllStatesAccepting { state: String },
    ArityMismatch { expected: usize, found: usize, from: String },
    BadToken { context: String, message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownState { context, state } => {
                write!(f, "unknown state {state:?} in {context}")
            }
            Violation::UnknownVariable { context, variable } => {
                write!(f, "unknown variable {variable:?} in {context}")
            }
            Violation::EpsilonNotAllowed { from, to } => {
                write!(f, "epsilon label not allowed on transition {from} -> {to}")
            }
            Violation::SingleInitialRequired { found } => {
                write!(f, "single initial required, found {found}")
            }
            Violation::AllStatesAccepting { state } => {
                write!(f, "all states must be accepting, {state} is not")
            }
            Violation::ArityMismatch { expected, found, from } => {
                write!(f, "label tuple of arity {found} (expected {expected}) on transition from {from}")
            }
            Violation::BadToken { context, message } => write!(f, "{context}: {message}"),
        }
    }
}

/// The record shared by all automaton variants.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Machine<L> {
    variables: BTreeSet<Variable>,
    states: BTreeSet<StateId>,
    initial: BTreeSet<StateId>,
    accepting: BTreeSet<StateId>,
    delta: BTreeMap<StateId, BTreeSet<(L, StateId)>>,
    refresh: BTreeMap<Variable, BTreeSet<StateId>>,
}

impl<L: LabelKind> Machine<L> {
    pub fn from_parts(
        variables: BTreeSet<Variable>,
        states: BTreeSet<StateId>,
        initial: BTreeSet<StateId>,
        accepting: BTreeSet<StateId>,
        transitions: impl IntoIterator<Item = Transition<L>>,
        refresh: BTreeMap<Variable, BTreeSet<StateId>>,
    ) -> Self {
        let mut delta: BTreeMap<StateId, BTreeSet<(L, StateId)>> = BTreeMap::new();
        for t in transitions {
            delta.entry(t.from).or_default().insert((t.label, t.to));
        }
        Machine { variables, states, initial, accepting, delta, refresh }
    }

    pub fn variables(&self) -> &BTreeSet<Variable> {
        &self.variables
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: &StateId) -> bool {
        self.accepting.contains(q)
    }

    pub fn refresh(&self) -> &BTreeMap<Variable, BTreeSet<StateId>> {
        &self.refresh
    }

    /// States refreshing `x`: the set kappa(x).
    pub fn refresh_states(&self, x: &Variable) -> Option<&BTreeSet<StateId>> {
        self.refresh.get(x)
    }

    /// Is `x` refreshed upon entering `q`?
    pub fn refreshed_at(&self, x: &Variable, q: &StateId) -> bool {
        self.refresh.get(x).is_some_and(|s| s.contains(q))
    }

    /// Variables dropped upon entering `q`: the preimage kappa^{-1}(q).
    pub fn refreshed_vars(&self, q: &StateId) -> BTreeSet<Variable> {
        self.refresh
            .iter()
            .filter(|(_, states)| states.contains(q))
            .map(|(v, _)| v.clone())
            .collect()
    }

    pub fn outgoing(&self, q: &StateId) -> impl Iterator<Item = (&L, &StateId)> {
        self.delta.get(q).into_iter().flatten().map(|(l, t)| (l, t))
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition<L>> + '_ {
        self.delta.iter().flat_map(|(from, outs)| {
            outs.iter().map(move |(l, to)| Transition {
                from: from.clone(),
                label: l.clone(),
                to: to.clone(),
            })
        })
    }

    pub fn transition_count(&self) -> usize {
        self.delta.values().map(BTreeSet::len).sum()
    }

    /// Letters appearing in the transitions (the finite set Sigma_A).
    pub fn letters(&self) -> BTreeSet<Letter> {
        self.transitions()
            .flat_map(|t| t.label.letters().into_iter().cloned().collect::<Vec<_>>())
            .collect()
    }

    /// States reachable from the initial set, ignoring label semantics.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen: BTreeSet<StateId> = self.initial.clone();
        let mut stack: Vec<StateId> = seen.iter().cloned().collect();
        while let Some(q) = stack.pop() {
            for (_, to) in self.outgoing(&q) {
                if seen.insert(to.clone()) {
                    stack.push(to.clone());
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> BTreeSet<StateId> {
        let mut preds: BTreeMap<&StateId, Vec<&StateId>> = BTreeMap::new();
        for (from, outs) in &self.delta {
            for (_, to) in outs {
                preds.entry(to).or_default().push(from);
            }
        }
        let mut seen: BTreeSet<StateId> = self.accepting.clone();
        let mut stack: Vec<StateId> = seen.iter().cloned().collect();
        while let Some(q) = stack.pop() {
            for &p in preds.get(&q).into_iter().flatten() {
                if seen.insert(p.clone()) {
                    stack.push(p.clone());
                }
            }
        }
        seen
    }

    /// Keeps only the given states, dropping dangling transitions, initial,
    /// accepting and refresh entries.
    pub fn restrict_states(&self, keep: &BTreeSet<StateId>) -> Self {
        let transitions = self
            .transitions()
            .filter(|t| keep.contains(&t.from) && keep.contains(&t.to));
        Machine::from_parts(
            self.variables.clone(),
            self.states.intersection(keep).cloned().collect(),
            self.initial.intersection(keep).cloned().collect(),
            self.accepting.intersection(keep).cloned().collect(),
            transitions,
            self.refresh
                .iter()
                .map(|(v, s)| (v.clone(), s.intersection(keep).cloned().collect()))
                .collect(),
        )
    }

    fn structural_violations(&self, allow_eps: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        for q in &self.initial {
            if !self.states.contains(q) {
                out.push(Violation::UnknownState {
                    context: "initial set".into(),
                    state: q.to_string(),
                });
            }
        }
        for q in &self.accepting {
            if !self.states.contains(q) {
                out.push(Violation::UnknownState {
                    context: "accepting set".into(),
                    state: q.to_string(),
                });
            }
        }
        for t in self.transitions() {
            let ctx = format!("transition {} -{}-> {}", t.from, t.label, t.to);
            for q in [&t.from, &t.to] {
                if !self.states.contains(q) {
                    out.push(Violation::UnknownState { context: ctx.clone(), state: q.to_string() });
                }
            }
            for v in t.label.variables() {
                if !self.variables.contains(v) {
                    out.push(Violation::UnknownVariable {
                        context: ctx.clone(),
                        variable: v.to_string(),
                    });
                }
            }
            if !allow_eps && t.label.mentions_epsilon() {
                out.push(Violation::EpsilonNotAllowed {
                    from: t.from.to_string(),
                    to: t.to.to_string(),
                });
            }
        }
        for (v, states) in &self.refresh {
            if !self.variables.contains(v) {
                out.push(Violation::UnknownVariable {
                    context: "refresh map".into(),
                    variable: v.to_string(),
                });
            }
            for q in states {
                if !self.states.contains(q) {
                    out.push(Violation::UnknownState {
                        context: format!("refresh set of {v}"),
                        state: q.to_string(),
                    });
                }
            }
        }
        out
    }

    /// Renames variables according to `map`, in labels and refresh alike.
    pub fn rename_variables(&self, map: &BTreeMap<Variable, Variable>) -> Self {
        let rename = |v: &Variable| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Machine::from_parts(
            self.variables.iter().map(rename).collect(),
            self.states.clone(),
            self.initial.clone(),
            self.accepting.clone(),
            self.transitions().map(|t| Transition {
                from: t.from,
                label: t.label.rename_variables(map),
                to: t.to,
            }),
            self.refresh.iter().map(|(v, s)| (rename(v), s.clone())).collect(),
        )
    }

    /// Renames states according to `map` (total on `states`).
    pub fn rename_states(&self, map: &BTreeMap<StateId, StateId>) -> Self {
        let rename = |q: &StateId| map.get(q).cloned().unwrap_or_else(|| q.clone());
        Machine::from_parts(
            self.variables.clone(),
            self.states.iter().map(rename).collect(),
            self.initial.iter().map(rename).collect(),
            self.accepting.iter().map(rename).collect(),
            self.transitions().map(|t| Transition {
                from: rename(&t.from),
                label: t.label,
                to: rename(&t.to),
            }),
            self.refresh
                .iter()
                .map(|(v, s)| (v.clone(), s.iter().map(rename).collect()))
                .collect(),
        )
    }
}

macro_rules! forward_machine_accessors {
    () => {
        pub fn variables(&self) -> &BTreeSet<Variable> {
            self.m.variables()
        }

        pub fn states(&self) -> &BTreeSet<StateId> {
            self.m.states()
        }

        pub fn initial(&self) -> &BTreeSet<StateId> {
            self.m.initial()
        }

        pub fn accepting(&self) -> &BTreeSet<StateId> {
            self.m.accepting()
        }

        pub fn is_accepting(&self, q: &StateId) -> bool {
            self.m.is_accepting(q)
        }

        pub fn refresh(&self) -> &BTreeMap<Variable, BTreeSet<StateId>> {
            self.m.refresh()
        }

        pub fn refreshed_at(&self, x: &Variable, q: &StateId) -> bool {
            self.m.refreshed_at(x, q)
        }

        pub fn refreshed_vars(&self, q: &StateId) -> BTreeSet<Variable> {
            self.m.refreshed_vars(q)
        }

        pub fn letters(&self) -> BTreeSet<Letter> {
            self.m.letters()
        }

        pub fn reachable(&self) -> BTreeSet<StateId> {
            self.m.reachable()
        }

        pub fn transition_count(&self) -> usize {
            self.m.transition_count()
        }
    };
}

/// A fresh-variable automaton. Labels are letters or variables, never epsilon.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fva {
    m: Machine<Label>,
}

impl Fva {
    pub fn new(m: Machine<Label>) -> Result<Self, Vec<Violation>> {
        let violations = m.structural_violations(false);
        if violations.is_empty() {
            Ok(Fva { m })
        } else {
            Err(violations)
        }
    }

    pub fn machine(&self) -> &Machine<Label> {
        &self.m
    }

    pub fn outgoing(&self, q: &StateId) -> impl Iterator<Item = (&Label, &StateId)> {
        self.m.outgoing(q)
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition<Label>> + '_ {
        self.m.transitions()
    }

    /// True when no transition is labeled by a variable, i.e. the automaton
    /// is a classical finite automaton.
    pub fn is_classical(&self) -> bool {
        self.transitions().all(|t| t.label.variable().is_none())
    }

    forward_machine_accessors!();
}

/// A fresh-variable automaton that may carry epsilon transitions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EpsFva {
    m: Machine<Label>,
}

impl EpsFva {
    pub fn new(m: Machine<Label>) -> Result<Self, Vec<Violation>> {
        let violations = m.structural_violations(true);
        if violations.is_empty() {
            Ok(EpsFva { m })
        } else {
            Err(violations)
        }
    }

    pub fn machine(&self) -> &Machine<Label> {
        &self.m
    }

    pub fn outgoing(&self, q: &StateId) -> impl Iterator<Item = (&Label, &StateId)> {
        self.m.outgoing(q)
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition<Label>> + '_ {
        self.m.transitions()
    }

    pub fn epsilon_count(&self) -> usize {
        self.transitions().filter(|t| t.label.is_epsilon()).count()
    }

    /// Every FVA is trivially an epsilon-FVA.
    pub fn from_fva(f: &Fva) -> Self {
        EpsFva { m: f.m.clone() }
    }

    /// Succeeds once all epsilon transitions are gone.
    pub fn into_fva(self) -> Result<Fva, Vec<Violation>> {
        Fva::new(self.m)
    }

    forward_machine_accessors!();
}

/// An n-FVA: transitions carry n-tuples of labels; a step consumes one letter
/// that must be consistent with every tuple component at once.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NFva {
    m: Machine<LabelTuple>,
    arity: usize,
}

impl NFva {
    pub fn new(m: Machine<LabelTuple>, arity: usize) -> Result<Self, Vec<Violation>> {
        let mut violations = m.structural_violations(false);
        if arity == 0 {
            violations.push(Violation::BadToken {
                context: "arity".into(),
                message: "arity must be at least 1".into(),
            });
        }
        for t in m.transitions() {
            if t.label.arity() != arity {
                violations.push(Violation::ArityMismatch {
                    expected: arity,
                    found: t.label.arity(),
                    from: t.from.to_string(),
                });
            }
        }
        if violations.is_empty() {
            Ok(NFva { m, arity })
        } else {
            Err(violations)
        }
    }

    pub fn machine(&self) -> &Machine<LabelTuple> {
        &self.m
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn outgoing(&self, q: &StateId) -> impl Iterator<Item = (&LabelTuple, &StateId)> {
        self.m.outgoing(q)
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition<LabelTuple>> + '_ {
        self.m.transitions()
    }

    forward_machine_accessors!();
}

/// A communicating FVA: polarized labels, a unique initial state, and every
/// state accepting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cfva {
    m: Machine<PolLabel>,
}

impl Cfva {
    pub fn new(m: Machine<PolLabel>) -> Result<Self, Vec<Violation>> {
        let mut violations = m.structural_violations(false);
        if m.initial().len() != 1 {
            violations.push(Violation::SingleInitialRequired { found: m.initial().len() });
        }
        for q in m.states() {
            if !m.accepting().contains(q) {
                violations.push(Violation::AllStatesAccepting { state: q.to_string() });
            }
        }
        if violations.is_empty() {
            Ok(Cfva { m })
        } else {
            Err(violations)
        }
    }

    pub fn machine(&self) -> &Machine<PolLabel> {
        &self.m
    }

    pub fn initial_state(&self) -> &StateId {
        self.m.initial().iter().next().expect("validated single initial")
    }

    pub fn outgoing(&self, q: &StateId) -> impl Iterator<Item = (&PolLabel, &StateId)> {
        self.m.outgoing(q)
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition<PolLabel>> + '_ {
        self.m.transitions()
    }

    forward_machine_accessors!();
}

/// Renames the second machine's variables away from the first's, leaving
/// inputs with already-disjoint variable sets untouched.
pub fn rename_apart<L: LabelKind, R: LabelKind>(
    a: &Machine<L>,
    b: &Machine<R>,
) -> Option<Machine<R>> {
    let clashes: BTreeSet<&Variable> = a.variables().intersection(b.variables()).collect();
    if clashes.is_empty() {
        return None;
    }
    let mut occupied: BTreeSet<Variable> =
        a.variables().union(b.variables()).cloned().collect();
    let mut map = BTreeMap::new();
    for v in clashes {
        let fresh = mint_variable(v.as_str(), &occupied);
        occupied.insert(fresh.clone());
        map.insert(v.clone(), fresh);
    }
    Some(b.rename_variables(&map))
}

/// `rename_apart` specialized to plain FVAs, as exposed to callers.
pub fn rename_apart_fva(a: &Fva, b: &Fva) -> (Fva, Fva) {
    match rename_apart(a.machine(), b.machine()) {
        None => (a.clone(), b.clone()),
        Some(m) => (a.clone(), Fva::new(m).expect("renaming preserves structure")),
    }
}

/// `rename_apart` specialized to CFVAs.
pub fn rename_apart_cfva(a: &Cfva, b: &Cfva) -> (Cfva, Cfva) {
    match rename_apart(a.machine(), b.machine()) {
        None => (a.clone(), b.clone()),
        Some(m) => (a.clone(), Cfva::new(m).expect("renaming preserves structure")),
    }
}

/// Mints state ids for `wanted` that avoid `occupied`, keeping names stable
/// where possible and appending `_k` suffixes otherwise.
pub fn disjoint_state_names(
    wanted: &BTreeSet<StateId>,
    occupied: &BTreeSet<StateId>,
) -> BTreeMap<StateId, StateId> {
    let mut taken: BTreeSet<StateId> = occupied.clone();
    let mut map = BTreeMap::new();
    for q in wanted {
        let fresh = if !taken.contains(q) {
            q.clone()
        } else {
            let mut k = 1usize;
            loop {
                let candidate = StateId::new(&format!("{q}_{k}")).expect("valid id");
                if !taken.contains(&candidate) && !wanted.contains(&candidate) {
                    break candidate;
                }
                k += 1;
            }
        };
        taken.insert(fresh.clone());
        map.insert(q.clone(), fresh);
    }
    map
}

/// Convenience builder used by fixtures and tests.
pub struct Builder<L> {
    variables: BTreeSet<Variable>,
    states: BTreeSet<StateId>,
    initial: BTreeSet<StateId>,
    accepting: BTreeSet<StateId>,
    transitions: Vec<Transition<L>>,
    refresh: BTreeMap<Variable, BTreeSet<StateId>>,
}

impl<L: LabelKind> Default for Builder<L> {
    fn default() -> Self {
        Builder {
            variables: BTreeSet::new(),
            states: BTreeSet::new(),
            initial: BTreeSet::new(),
            accepting: BTreeSet::new(),
            transitions: Vec::new(),
            refresh: BTreeMap::new(),
        }
    }
}

impl<L: LabelKind> Builder<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(mut self, q: &str) -> Self {
        self.states.insert(StateId::new(q).expect("valid state id"));
        self
    }

    pub fn initial(mut self, q: &str) -> Self {
        let q = StateId::new(q).expect("valid state id");
        self.states.insert(q.clone());
        self.initial.insert(q);
        self
    }

    pub fn accepting(mut self, q: &str) -> Self {
        let q = StateId::new(q).expect("valid state id");
        self.states.insert(q.clone());
        self.accepting.insert(q);
        self
    }

    pub fn transition(mut self, from: &str, label: L, to: &str) -> Self {
        for v in label.variables() {
            self.variables.insert(v.clone());
        }
        let from = StateId::new(from).expect("valid state id");
        let to = StateId::new(to).expect("valid state id");
        self.states.insert(from.clone());
        self.states.insert(to.clone());
        self.transitions.push(Transition { from, label, to });
        self
    }

    pub fn variable(mut self, v: &str) -> Self {
        self.variables.insert(Variable::new(v).expect("valid variable"));
        self
    }

    pub fn refresh(mut self, v: &str, states: &[&str]) -> Self {
        let v = Variable::new(v).expect("valid variable");
        self.variables.insert(v.clone());
        let entry = self.refresh.entry(v).or_default();
        for q in states {
            let q = StateId::new(q).expect("valid state id");
            self.states.insert(q.clone());
            entry.insert(q);
        }
        self
    }

    pub fn machine(self) -> Machine<L> {
        Machine::from_parts(
            self.variables,
            self.states,
            self.initial,
            self.accepting,
            self.transitions,
            self.refresh,
        )
    }
}

impl Builder<Label> {
    pub fn fva(self) -> Fva {
        Fva::new(self.machine()).expect("builder produced invalid FVA")
    }

    pub fn eps_fva(self) -> EpsFva {
        EpsFva::new(self.machine()).expect("builder produced invalid eps-FVA")
    }
}

impl Builder<PolLabel> {
    pub fn cfva(self) -> Cfva {
        Cfva::new(self.machine()).expect("builder produced invalid CFVA")
    }
}

impl Builder<LabelTuple> {
    pub fn nfva(self, arity: usize) -> NFva {
        NFva::new(self.machine(), arity).expect("builder produced invalid n-FVA")
    }
}

/// Shorthand label constructors for fixtures and tests.
pub mod short {
    use super::*;
    use crate::label::Polarity;

    pub fn lt(token: &str) -> Label {
        Label::Letter(Letter::new(token).expect("valid letter"))
    }

    pub fn vr(name: &str) -> Label {
        Label::Var(Variable::new(name).expect("valid variable"))
    }

    pub fn eps() -> Label {
        Label::Epsilon
    }

    pub fn snd(l: Label) -> PolLabel {
        PolLabel { polarity: Polarity::Send, label: l }
    }

    pub fn rcv(l: Label) -> PolLabel {
        PolLabel { polarity: Polarity::Recv, label: l }
    }

    pub fn tup(labels: Vec<Label>) -> LabelTuple {
        LabelTuple(labels)
    }

    pub fn letter(token: &str) -> Letter {
        Letter::new(token).expect("valid letter")
    }

    pub fn var(name: &str) -> Variable {
        Variable::new(name).expect("valid variable")
    }

    pub fn state(token: &str) -> StateId {
        StateId::new(token).expect("valid state id")
    }
}

#[cfg(test)]
mod tests {
    use super::short::*;
    use super::*;

    fn a1() -> Fva {
        Builder::new()
            .initial("p0")
            .accepting("p0")
            .transition("p0", vr("x"), "p1")
            .transition("p1", vr("x"), "p0")
            .refresh("x", &["p0"])
            .fva()
    }

    #[test]
    fn a1_validates() {
        let a = a1();
        assert_eq!(a.states().len(), 2);
        assert_eq!(a.variables().len(), 1);
        assert!(a.refreshed_at(&var("x"), &state("p0")));
        assert!(!a.refreshed_at(&var("x"), &state("p1")));
    }

    #[test]
    fn unknown_state_is_reported() {
        let m = Machine::from_parts(
            [var("x")].into(),
            [state("q0")].into(),
            [state("q0")].into(),
            [state("qf")].into(),
            vec![Transition { from: state("q0"), label: vr("x"), to: state("qf") }],
            BTreeMap::new(),
        );
        let err = Fva::new(m).unwrap_err();
        assert!(err.iter().any(|v| matches!(v, Violation::UnknownState { .. })));
    }

    #[test]
    fn epsilon_rejected_outside_eps_fva() {
        let m = Builder::new()
            .initial("q0")
            .accepting("q1")
            .transition("q0", eps(), "q1")
            .machine();
        assert!(Fva::new(m.clone()).is_err());
        assert!(EpsFva::new(m).is_ok());
    }

    #[test]
    fn cfva_requires_single_initial_and_all_accepting() {
        let m = Builder::new()
            .initial("q0")
            .initial("q1")
            .accepting("q0")
            .accepting("q1")
            .transition("q0", snd(lt("a")), "q1")
            .machine();
        let err = Cfva::new(m).unwrap_err();
        assert!(err.iter().any(|v| matches!(v, Violation::SingleInitialRequired { found: 2 })));

        let m = Builder::new()
            .initial("q0")
            .accepting("q0")
            .transition("q0", snd(lt("a")), "q1")
            .machine();
        let err = Cfva::new(m).unwrap_err();
        assert!(err.iter().any(|v| matches!(v, Violation::AllStatesAccepting { .. })));
    }

    #[test]
    fn rename_apart_keeps_disjoint_inputs() {
        let a = a1();
        let b = Builder::new()
            .initial("r0")
            .accepting("r1")
            .transition("r0", vr("y"), "r1")
            .fva();
        let (a2, b2) = rename_apart_fva(&a, &b);
        assert_eq!(a, a2);
        assert_eq!(b, b2);
    }

    #[test]
    fn rename_apart_renames_clash() {
        let a = a1();
        let b = a1();
        let (a2, b2) = rename_apart_fva(&a, &b);
        assert_eq!(a, a2);
        assert!(a2.variables().is_disjoint(b2.variables()));
        // refresh map follows the renaming
        let v = b2.variables().iter().next().unwrap().clone();
        assert!(b2.refreshed_at(&v, &state("p0")));
    }
}
