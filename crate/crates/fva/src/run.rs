//! Run semantics: configurations, the one-letter step relation, membership
//! with witness runs, nonemptiness, and the brute-force language sampler that
//! anchors the differential tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::alphabet::{Letter, Variable, EMPTY_WORD_TOKEN};
use crate::automaton::{EpsFva, Fva, Machine, NFva, StateId};
use crate::label::{Label, LabelTuple};

/// A word over the alphabet.
pub type Word = Vec<Letter>;

/// Parses a whitespace-separated word; the literal `@empty` is the empty word.
pub fn parse_word(text: &str) -> Result<Word, String> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == [EMPTY_WORD_TOKEN] {
        return Ok(Vec::new());
    }
    if tokens.is_empty() {
        return Err(format!("empty input; write {EMPTY_WORD_TOKEN} for the empty word"));
    }
    tokens.iter().map(|t| Letter::new(t)).collect()
}

pub fn format_word(w: &Word) -> String {
    if w.is_empty() {
        EMPTY_WORD_TOKEN.to_string()
    } else {
        w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// A partial assignment of letters to variables, kept sorted for canonical
/// hashing and display.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Memory(BTreeMap<Variable, Letter>);

impl Memory {
    pub fn empty() -> Self {
        Memory::default()
    }

    pub fn get(&self, x: &Variable) -> Option<&Letter> {
        self.0.get(x)
    }

    pub fn binds(&self, x: &Variable) -> bool {
        self.0.contains_key(x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Letter)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Variable> {
        self.0.keys()
    }

    pub fn bind(&self, x: Variable, a: Letter) -> Self {
        let mut m = self.0.clone();
        m.insert(x, a);
        Memory(m)
    }

    /// Merge that must agree on the shared domain.
    pub fn merge(&self, other: &Memory) -> Option<Memory> {
        let mut m = self.0.clone();
        for (x, a) in &other.0 {
            match m.insert(x.clone(), a.clone()) {
                Some(prev) if &prev != a => return None,
                _ => {}
            }
        }
        Some(Memory(m))
    }

    /// Drops every binding of a variable in `dropped`.
    pub fn without(&self, dropped: &BTreeSet<Variable>) -> Self {
        if dropped.is_empty() {
            return self.clone();
        }
        Memory(self.0.iter().filter(|(x, _)| !dropped.contains(*x)).map(|(x, a)| (x.clone(), a.clone())).collect())
    }

    pub fn from_iter(pairs: impl IntoIterator<Item = (Variable, Letter)>) -> Self {
        Memory(pairs.into_iter().collect())
    }
}

impl fmt::Display for Memory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, a)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}={a}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Memory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Memory{self}")
    }
}

/// A state paired with the current variable memory.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Configuration {
    pub state: StateId,
    pub memory: Memory,
}

impl Configuration {
    pub fn initial(q: StateId) -> Self {
        Configuration { state: q, memory: Memory::empty() }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.state, self.memory)
    }
}

/// One step of a witness run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunStep {
    pub label: Label,
    pub letter: Letter,
    pub config: Configuration,
}

/// A witness run: starting configuration plus one step per consumed letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Run {
    pub start: Configuration,
    pub steps: Vec<RunStep>,
}

impl Run {
    pub fn word(&self) -> Word {
        self.steps.iter().map(|s| s.letter.clone()).collect()
    }

    pub fn last_config(&self) -> &Configuration {
        self.steps.last().map(|s| &s.config).unwrap_or(&self.start)
    }
}

/// Fires one labeled transition on `letter` if the label permits it,
/// applying the target's refreshing. Shared with the simulation games.
pub(crate) fn fire_label(
    m: &Machine<Label>,
    memory: &Memory,
    label: &Label,
    to: &StateId,
    letter: &Letter,
) -> Option<Configuration> {
    let next_memory = match label {
        Label::Letter(l) if l == letter => memory.clone(),
        Label::Var(x) => match memory.get(x) {
            Some(bound) if bound == letter => memory.clone(),
            Some(_) => return None,
            None => memory.bind(x.clone(), letter.clone()),
        },
        _ => return None,
    };
    Some(Configuration { state: to.clone(), memory: next_memory.without(&m.refreshed_vars(to)) })
}

/// All configurations reachable from `c` by consuming `letter`.
pub fn step(a: &Fva, c: &Configuration, letter: &Letter) -> BTreeSet<Configuration> {
    let mut out = BTreeSet::new();
    for (label, to) in a.outgoing(&c.state) {
        if let Some(next) = fire_label(a.machine(), &c.memory, label, to, letter) {
            out.insert(next);
        }
    }
    out
}

/// Depth-first membership with memoization; returns the canonical witness run
/// (successors explored in label order: letters before variables).
pub fn membership(a: &Fva, w: &Word) -> Option<Run> {
    for q0 in a.initial() {
        let start = Configuration::initial(q0.clone());
        let mut dead: BTreeSet<(usize, Configuration)> = BTreeSet::new();
        let mut steps = Vec::new();
        if search(a, &start, 0, w, &mut dead, &mut steps) {
            return Some(Run { start, steps });
        }
    }
    None
}

fn search(
    a: &Fva,
    c: &Configuration,
    pos: usize,
    w: &Word,
    dead: &mut BTreeSet<(usize, Configuration)>,
    steps: &mut Vec<RunStep>,
) -> bool {
    if pos == w.len() {
        return a.is_accepting(&c.state);
    }
    if dead.contains(&(pos, c.clone())) {
        return false;
    }
    let letter = &w[pos];
    for (label, to) in a.outgoing(&c.state) {
        if let Some(next) = fire_label(a.machine(), &c.memory, label, to, letter) {
            steps.push(RunStep { label: label.clone(), letter: letter.clone(), config: next.clone() });
            if search(a, &next, pos + 1, w, dead, steps) {
                return true;
            }
            steps.pop();
        }
    }
    dead.insert((pos, c.clone()));
    false
}

/// Counts complete runs on `w` (full consumption from an initial state),
/// up to `cap`. Deterministic automata admit at most one.
pub fn count_runs(a: &Fva, w: &Word, cap: usize) -> usize {
    fn go(a: &Fva, c: &Configuration, pos: usize, w: &Word, cap: usize, acc: &mut usize) {
        if *acc >= cap {
            return;
        }
        if pos == w.len() {
            *acc += 1;
            return;
        }
        for (label, to) in a.outgoing(&c.state) {
            if let Some(next) = fire_label(a.machine(), &c.memory, label, to, &w[pos]) {
                go(a, &next, pos + 1, w, cap, acc);
            }
        }
    }
    let mut acc = 0;
    for q0 in a.initial() {
        go(a, &Configuration::initial(q0.clone()), 0, w, cap, &mut acc);
    }
    acc
}

/// True iff the language is nonempty: plain graph reachability from an
/// initial to an accepting state (variables always instantiable).
pub fn nonempty(a: &Fva) -> bool {
    a.reachable().iter().any(|q| a.is_accepting(q))
}

fn step_set(a: &Fva, configs: &BTreeSet<Configuration>, letter: &Letter) -> BTreeSet<Configuration> {
    configs.iter().flat_map(|c| step(a, c, letter)).collect()
}

/// Exactly the words of `pool`^{<= max_len} accepted by `a`. Configuration
/// sets are threaded down the prefix tree so shared prefixes are explored
/// once; the result agrees with per-word `membership` by construction.
pub fn sample_language(a: &Fva, pool: &BTreeSet<Letter>, max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let configs: BTreeSet<Configuration> =
        a.initial().iter().map(|q| Configuration::initial(q.clone())).collect();
    let mut prefix = Vec::new();
    sample_rec(a, pool, max_len, &configs, &mut prefix, &mut out);
    out
}

fn sample_rec(
    a: &Fva,
    pool: &BTreeSet<Letter>,
    max_len: usize,
    configs: &BTreeSet<Configuration>,
    prefix: &mut Word,
    out: &mut BTreeSet<Word>,
) {
    if configs.iter().any(|c| a.is_accepting(&c.state)) {
        out.insert(prefix.clone());
    }
    if prefix.len() == max_len {
        return;
    }
    for letter in pool {
        let next = step_set(a, configs, letter);
        if next.is_empty() {
            continue;
        }
        prefix.push(letter.clone());
        sample_rec(a, pool, max_len, &next, prefix, out);
        prefix.pop();
    }
}

// ---------------------------------------------------------------------------
// Epsilon semantics
// ---------------------------------------------------------------------------

/// Closes a configuration set under epsilon steps (which consume no letter
/// and only apply the target state's refreshing).
pub fn eps_closure(e: &EpsFva, configs: &BTreeSet<Configuration>) -> BTreeSet<Configuration> {
    let mut closed = configs.clone();
    let mut stack: Vec<Configuration> = configs.iter().cloned().collect();
    while let Some(c) = stack.pop() {
        for (label, to) in e.outgoing(&c.state) {
            if label.is_epsilon() {
                let next = Configuration {
                    state: to.clone(),
                    memory: c.memory.without(&e.refreshed_vars(to)),
                };
                if closed.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
    }
    closed
}

fn eps_step_set(
    e: &EpsFva,
    configs: &BTreeSet<Configuration>,
    letter: &Letter,
) -> BTreeSet<Configuration> {
    let mut out = BTreeSet::new();
    for c in configs {
        for (label, to) in e.outgoing(&c.state) {
            if label.is_epsilon() {
                continue;
            }
            if let Some(next) = fire_label(e.machine(), &c.memory, label, to, letter) {
                out.insert(next);
            }
        }
    }
    eps_closure(e, &out)
}

/// Membership under epsilon semantics.
pub fn membership_eps(e: &EpsFva, w: &Word) -> bool {
    let mut configs = eps_closure(
        e,
        &e.initial().iter().map(|q| Configuration::initial(q.clone())).collect(),
    );
    for letter in w {
        configs = eps_step_set(e, &configs, letter);
        if configs.is_empty() {
            return false;
        }
    }
    configs.iter().any(|c| e.is_accepting(&c.state))
}

/// The sampling oracle under epsilon semantics.
pub fn sample_language_eps(e: &EpsFva, pool: &BTreeSet<Letter>, max_len: usize) -> BTreeSet<Word> {
    fn rec(
        e: &EpsFva,
        pool: &BTreeSet<Letter>,
        max_len: usize,
        configs: &BTreeSet<Configuration>,
        prefix: &mut Word,
        out: &mut BTreeSet<Word>,
    ) {
        if configs.iter().any(|c| e.is_accepting(&c.state)) {
            out.insert(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        for letter in pool {
            let next = eps_step_set(e, configs, letter);
            if next.is_empty() {
                continue;
            }
            prefix.push(letter.clone());
            rec(e, pool, max_len, &next, prefix, out);
            prefix.pop();
        }
    }
    let mut out = BTreeSet::new();
    let configs = eps_closure(
        e,
        &e.initial().iter().map(|q| Configuration::initial(q.clone())).collect(),
    );
    rec(e, pool, max_len, &configs, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// n-FVA semantics
// ---------------------------------------------------------------------------

/// A tuple fires iff one substitution makes every component denote the input
/// letter: letters must equal it, bound variables must hold it, and all free
/// variables of the tuple bind it at once.
fn fire_tuple(
    m: &Machine<LabelTuple>,
    memory: &Memory,
    tuple: &LabelTuple,
    to: &StateId,
    letter: &Letter,
) -> Option<Configuration> {
    let mut next_memory = memory.clone();
    for component in &tuple.0 {
        match component {
            Label::Letter(l) => {
                if l != letter {
                    return None;
                }
            }
            Label::Var(x) => match memory.get(x) {
                Some(bound) if bound == letter => {}
                Some(_) => return None,
                None => next_memory = next_memory.bind(x.clone(), letter.clone()),
            },
            Label::Epsilon => return None,
        }
    }
    Some(Configuration { state: to.clone(), memory: next_memory.without(&m.refreshed_vars(to)) })
}

/// All configurations reachable from `c` in one n-FVA step.
pub fn step_n(n: &NFva, c: &Configuration, letter: &Letter) -> BTreeSet<Configuration> {
    let mut out = BTreeSet::new();
    for (tuple, to) in n.outgoing(&c.state) {
        if let Some(next) = fire_tuple(n.machine(), &c.memory, tuple, to, letter) {
            out.insert(next);
        }
    }
    out
}

/// Membership for n-FVAs.
pub fn membership_n(n: &NFva, w: &Word) -> bool {
    let mut configs: BTreeSet<Configuration> =
        n.initial().iter().map(|q| Configuration::initial(q.clone())).collect();
    for letter in w {
        configs = configs.iter().flat_map(|c| step_n(n, c, letter)).collect();
        if configs.is_empty() {
            return false;
        }
    }
    configs.iter().any(|c| n.is_accepting(&c.state))
}

/// The sampling oracle for n-FVAs.
pub fn sample_language_n(n: &NFva, pool: &BTreeSet<Letter>, max_len: usize) -> BTreeSet<Word> {
    fn rec(
        n: &NFva,
        pool: &BTreeSet<Letter>,
        max_len: usize,
        configs: &BTreeSet<Configuration>,
        prefix: &mut Word,
        out: &mut BTreeSet<Word>,
    ) {
        if configs.iter().any(|c| n.is_accepting(&c.state)) {
            out.insert(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        for letter in pool {
            let next: BTreeSet<Configuration> =
                configs.iter().flat_map(|c| step_n(n, c, letter)).collect();
            if next.is_empty() {
                continue;
            }
            prefix.push(letter.clone());
            rec(n, pool, max_len, &next, prefix, out);
            prefix.pop();
        }
    }
    let mut out = BTreeSet::new();
    let configs = n.initial().iter().map(|q| Configuration::initial(q.clone())).collect();
    rec(n, pool, max_len, &configs, &mut Vec::new(), &mut out);
    out
}

/// The default sampling pool for an automaton: its own letters plus |X|+1
/// fresh ones.
pub fn default_pool(a: &Fva) -> BTreeSet<Letter> {
    let mut pool = a.letters();
    let fresh = crate::alphabet::mint_letters(&pool, a.variables().len() + 1);
    pool.extend(fresh);
    pool
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::short::*;
    use crate::automaton::Builder;
    use crate::fixtures;

    fn w(text: &str) -> Word {
        parse_word(text).unwrap()
    }

    #[test]
    fn word_parsing() {
        assert_eq!(w("@empty"), Vec::<Letter>::new());
        assert_eq!(w("a a b"), vec![letter("a"), letter("a"), letter("b")]);
        assert!(parse_word("").is_err());
        assert!(parse_word("a @empty").is_err());
    }

    #[test]
    fn step_on_a1_binds_and_refreshes() {
        let a1 = fixtures::a1();
        let p0 = Configuration::initial(state("p0"));
        // fresh x binds the letter; x is not refreshed at p1
        let next = step(&a1, &p0, &letter("a"));
        assert_eq!(next.len(), 1);
        let c1 = next.into_iter().next().unwrap();
        assert_eq!(c1.state, state("p1"));
        assert_eq!(c1.memory.get(&var("x")), Some(&letter("a")));
        // bound x rejects a different letter
        assert!(step(&a1, &c1, &letter("b")).is_empty());
        // bound x matches and is dropped on re-entering p0
        let back = step(&a1, &c1, &letter("a"));
        assert_eq!(back.len(), 1);
        let c2 = back.into_iter().next().unwrap();
        assert_eq!(c2.state, state("p0"));
        assert!(c2.memory.is_empty());
    }

    #[test]
    fn membership_on_paper_examples() {
        let a1 = fixtures::a1();
        assert!(membership(&a1, &w("a a b b")).is_some());
        assert!(membership(&a1, &w("a b")).is_none());
        assert!(membership(&a1, &w("@empty")).is_some());

        let a2 = fixtures::a2();
        assert!(membership(&a2, &w("a b a")).is_some());
        assert!(membership(&a2, &w("a b")).is_none());
    }

    #[test]
    fn witness_replays_through_step() {
        let a1 = fixtures::a1();
        let word = w("a a b b");
        let run = membership(&a1, &word).unwrap();
        assert_eq!(run.word(), word);
        assert!(run.start.memory.is_empty());
        let mut current = run.start.clone();
        for s in &run.steps {
            let nexts = step(&a1, &current, &s.letter);
            assert!(nexts.contains(&s.config));
            current = s.config.clone();
        }
        assert!(a1.is_accepting(&current.state));
    }

    #[test]
    fn nonemptiness() {
        let a1 = fixtures::a1();
        assert!(nonempty(&a1));
        let dead = Builder::new()
            .initial("q0")
            .accepting("qf")
            .transition("q0", lt("a"), "q1")
            .fva();
        assert!(!nonempty(&dead));
        let one = Builder::new()
            .initial("q0")
            .accepting("qf")
            .transition("q0", vr("x"), "qf")
            .fva();
        assert!(nonempty(&one));
        assert!(membership(&one, &w("z")).is_some());
    }

    #[test]
    fn sample_matches_a1_closed_form() {
        let a1 = fixtures::a1();
        let pool: BTreeSet<Letter> = [letter("a"), letter("b")].into();
        let sample = sample_language(&a1, &pool, 4);
        let expected: BTreeSet<Word> =
            ["@empty", "a a", "b b", "a a a a", "a a b b", "b b a a", "b b b b"]
                .iter()
                .map(|t| w(t))
                .collect();
        assert_eq!(sample, expected);
        assert_eq!(sample_language(&a1, &pool, 1), [w("@empty")].into());
    }

    #[test]
    fn sample_agrees_with_membership() {
        let a2 = fixtures::a2();
        let pool: BTreeSet<Letter> = [letter("a"), letter("b")].into();
        let sample = sample_language(&a2, &pool, 4);
        for len in 0..=4usize {
            for word in all_words(&pool, len) {
                assert_eq!(sample.contains(&word), membership(&a2, &word).is_some());
            }
        }
    }

    fn all_words(pool: &BTreeSet<Letter>, len: usize) -> Vec<Word> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let shorter = all_words(pool, len - 1);
        let mut out = Vec::new();
        for word in shorter {
            for l in pool {
                let mut next = word.clone();
                next.push(l.clone());
                out.push(next);
            }
        }
        out
    }

    #[test]
    fn nfva_membership_on_appendix_example() {
        let two = fixtures::appendix_two_fva();
        assert!(membership_n(&two, &w("@empty")));
        assert!(membership_n(&two, &w("a b")));
        assert!(membership_n(&two, &w("a b a b")));
        assert!(!membership_n(&two, &w("a b a c")));
        assert!(!membership_n(&two, &w("a")));
        assert!(!membership_n(&two, &w("b a")));
    }

    #[test]
    fn eps_membership_basics() {
        let e = Builder::new()
            .initial("q0")
            .accepting("q2")
            .transition("q0", lt("a"), "q1")
            .transition("q1", eps(), "q2")
            .eps_fva();
        assert!(membership_eps(&e, &w("a")));
        assert!(!membership_eps(&e, &w("@empty")));
        assert!(!membership_eps(&e, &w("a a")));
    }
}
