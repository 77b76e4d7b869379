//! Decision procedures: universality, determinism, DFVA checks, containment
//! against classical finite automata, and the FVA simulation preorder.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::alphabet::{mint_named_letter, Letter, Variable};
use crate::automaton::{rename_apart, Fva, Machine, StateId};
use crate::game::solve::{abelard_attractor, Owner};
use crate::label::Label;
use crate::run::{fire_label, Configuration, Memory};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("the automaton is not deterministic (offending state {0})")]
    NotDeterministic(String),
    #[error("the automaton is not a classical finite automaton")]
    NotFiniteAutomaton,
}

// ---------------------------------------------------------------------------
// Universality
// ---------------------------------------------------------------------------

/// A state of the free-variable-tracking automaton: the base state plus the
/// set of variables still free along every run reaching it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FreeVarState {
    pub base: StateId,
    pub free: BTreeSet<Variable>,
}

struct FreeTracking {
    initial: Vec<usize>,
    accepting: Vec<bool>,
    successors: Vec<Vec<usize>>,
}

/// Builds the tracking automaton: transitions survive only when labeled by a
/// currently-free variable, and the free set is updated with the target's
/// refreshes. Dropping letter labels is sound for universality because a
/// fresh probe letter can never match them.
fn free_tracking(a: &Fva) -> FreeTracking {
    let mut index: BTreeMap<FreeVarState, usize> = BTreeMap::new();
    let mut nodes: Vec<FreeVarState> = Vec::new();
    let mut successors: Vec<Vec<usize>> = Vec::new();
    let mut worklist: Vec<usize> = Vec::new();

    fn materialize(
        node: FreeVarState,
        index: &mut BTreeMap<FreeVarState, usize>,
        nodes: &mut Vec<FreeVarState>,
        successors: &mut Vec<Vec<usize>>,
        worklist: &mut Vec<usize>,
    ) -> usize {
        if let Some(&i) = index.get(&node) {
            return i;
        }
        let i = nodes.len();
        index.insert(node.clone(), i);
        nodes.push(node);
        successors.push(Vec::new());
        worklist.push(i);
        i
    }

    let mut initial = Vec::new();
    for q0 in a.initial() {
        let node = FreeVarState { base: q0.clone(), free: a.variables().clone() };
        initial.push(materialize(node, &mut index, &mut nodes, &mut successors, &mut worklist));
    }

    while let Some(i) = worklist.pop() {
        let node = nodes[i].clone();
        let mut next = Vec::new();
        for (label, to) in a.outgoing(&node.base) {
            let Label::Var(x) = label else { continue };
            if !node.free.contains(x) {
                continue;
            }
            let mut free = node.free.clone();
            free.remove(x);
            free.extend(a.refreshed_vars(to));
            let j = materialize(
                FreeVarState { base: to.clone(), free },
                &mut index,
                &mut nodes,
                &mut successors,
                &mut worklist,
            );
            next.push(j);
        }
        next.sort_unstable();
        next.dedup();
        successors[i] = next;
    }

    let accepting = nodes.iter().map(|n| a.is_accepting(&n.base)).collect();
    FreeTracking { initial, accepting, successors }
}

/// The shortest word length with no all-free path, or `None` when every
/// length has one (i.e. the automaton is universal). The layer sequence of
/// the unary projection is eventually periodic; it is walked until the first
/// repeated layer set, which is exact.
pub fn non_universal_length(a: &Fva) -> Option<usize> {
    let tracking = free_tracking(a);
    let mut layer: BTreeSet<usize> = tracking.initial.iter().copied().collect();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut step = 0usize;
    loop {
        if seen.contains(&layer) {
            return None;
        }
        if !layer.iter().any(|&i| tracking.accepting[i]) {
            return Some(step);
        }
        seen.insert(layer.clone());
        layer = layer.iter().flat_map(|&i| tracking.successors[i].iter().copied()).collect();
        step += 1;
    }
}

/// True iff the automaton accepts every word over the infinite alphabet.
pub fn universal(a: &Fva) -> bool {
    non_universal_length(a).is_none()
}

// ---------------------------------------------------------------------------
// Determinism
// ---------------------------------------------------------------------------

/// The first accessible state with two outgoing transitions that share a
/// letter or involve a variable, or `None` when the automaton is
/// deterministic. Accessibility is label-blind reachability.
pub fn determinism_offender(a: &Fva) -> Option<StateId> {
    for q in a.reachable() {
        let outs: Vec<(&Label, &StateId)> = a.outgoing(&q).collect();
        if outs.len() < 2 {
            continue;
        }
        if outs.iter().any(|(l, _)| matches!(l, Label::Var(_))) {
            return Some(q);
        }
        let mut letters_seen: BTreeSet<&Letter> = BTreeSet::new();
        for (l, _) in &outs {
            if let Label::Letter(c) = l {
                if !letters_seen.insert(c) {
                    return Some(q);
                }
            }
        }
    }
    None
}

pub fn is_deterministic(a: &Fva) -> bool {
    determinism_offender(a).is_none()
}

/// Universality specialized to deterministic automata: letter-labeled
/// transitions are discarded first, leaving a variable-only tail-cycle
/// (asserted), on which the general decider runs.
pub fn dfva_universal(d: &Fva) -> Result<bool, DecideError> {
    if let Some(q) = determinism_offender(d) {
        return Err(DecideError::NotDeterministic(q.to_string()));
    }
    let m = d.machine();
    let stripped = Machine::from_parts(
        m.variables().clone(),
        m.states().clone(),
        m.initial().clone(),
        m.accepting().clone(),
        m.transitions().filter(|t| matches!(t.label, Label::Var(_))),
        m.refresh().clone(),
    );
    let stripped = stripped.restrict_states(&stripped.reachable());
    for q in stripped.states() {
        let degree = stripped.outgoing(q).count();
        assert!(
            degree <= 1,
            "deterministic variable-only structure must be a tail-cycle, state {q} has out-degree {degree}"
        );
    }
    Ok(universal(&Fva::new(stripped).expect("stripping preserves structure")))
}

// ---------------------------------------------------------------------------
// FVA simulation (unpolarized safety game)
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum SimPosition {
    /// The spoiler picks a transition of the left automaton and a letter.
    Abelard { left: Configuration, right: Configuration },
    /// The duplicator must match the committed letter; the left
    /// configuration has already advanced.
    Eloise { left: Configuration, right: Configuration, letter: Letter },
}

/// The instantiation pool for the simulation game: both automata's letters
/// plus one synthetic letter per ordered variable pair, mirroring the
/// finite-game pool of the polarized case.
fn sim_pool(a: &Fva, b: &Machine<Label>) -> BTreeSet<Letter> {
    let mut pool: BTreeSet<Letter> = a.letters().union(&b.letters()).cloned().collect();
    let occupied = pool.clone();
    for x in a.variables() {
        for y in b.variables() {
            pool.insert(mint_named_letter(&format!("#p({},{})", x.as_str(), y.as_str()), &occupied));
            pool.insert(mint_named_letter(&format!("#p({},{})", y.as_str(), x.as_str()), &occupied));
        }
    }
    pool
}

/// Letters an Abelard-side transition can consume at `memory`: the label's
/// own letter, the bound value, or every pool letter when free.
fn abelard_letters(memory: &Memory, label: &Label, pool: &BTreeSet<Letter>) -> Vec<Letter> {
    match label {
        Label::Letter(c) => vec![c.clone()],
        Label::Var(x) => match memory.get(x) {
            Some(bound) => vec![bound.clone()],
            None => pool.iter().cloned().collect(),
        },
        Label::Epsilon => Vec::new(),
    }
}

/// Decides whether `b` simulates `a`: every letter move of `a` must be
/// matched by `b`, acceptance included, with the spoiler instantiating free
/// variables from the finite pool.
pub fn fva_simulates(a: &Fva, b: &Fva) -> bool {
    let b_machine = rename_apart(a.machine(), b.machine()).unwrap_or_else(|| b.machine().clone());
    let pool = sim_pool(a, &b_machine);

    struct Arena {
        index: BTreeMap<SimPosition, usize>,
        positions: Vec<SimPosition>,
        worklist: Vec<usize>,
    }

    impl Arena {
        fn materialize(&mut self, p: SimPosition) -> usize {
            if let Some(&i) = self.index.get(&p) {
                return i;
            }
            let i = self.positions.len();
            self.index.insert(p.clone(), i);
            self.positions.push(p);
            self.worklist.push(i);
            i
        }
    }

    let mut arena =
        Arena { index: BTreeMap::new(), positions: Vec::new(), worklist: Vec::new() };

    let mut roots: Vec<Vec<usize>> = Vec::new();
    for q1 in a.initial() {
        let mut choices = Vec::new();
        for q2 in b_machine.initial() {
            let p = SimPosition::Abelard {
                left: Configuration::initial(q1.clone()),
                right: Configuration::initial(q2.clone()),
            };
            choices.push(arena.materialize(p));
        }
        roots.push(choices);
    }

    let mut successors: Vec<Vec<usize>> = Vec::new();
    while let Some(i) = arena.worklist.pop() {
        let position = arena.positions[i].clone();
        let mut next = Vec::new();
        match position {
            SimPosition::Abelard { left, right } => {
                for (label, to) in a.outgoing(&left.state) {
                    for letter in abelard_letters(&left.memory, label, &pool) {
                        let Some(advanced) =
                            fire_label(a.machine(), &left.memory, label, to, &letter)
                        else {
                            continue;
                        };
                        let p =
                            SimPosition::Eloise { left: advanced, right: right.clone(), letter };
                        next.push(arena.materialize(p));
                    }
                }
            }
            SimPosition::Eloise { left, right, letter } => {
                for (label, to) in b_machine.outgoing(&right.state) {
                    let Some(advanced) =
                        fire_label(&b_machine, &right.memory, label, to, &letter)
                    else {
                        continue;
                    };
                    let p = SimPosition::Abelard { left: left.clone(), right: advanced };
                    next.push(arena.materialize(p));
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if successors.len() < arena.positions.len() {
            successors.resize(arena.positions.len(), Vec::new());
        }
        successors[i] = next;
    }
    successors.resize(arena.positions.len(), Vec::new());

    let owner: Vec<Owner> = arena
        .positions
        .iter()
        .map(|p| match p {
            SimPosition::Abelard { .. } => Owner::Abelard,
            SimPosition::Eloise { .. } => Owner::Eloise,
        })
        .collect();
    let bad: Vec<bool> = arena
        .positions
        .iter()
        .enumerate()
        .map(|(i, p)| match p {
            SimPosition::Abelard { left, right } => {
                a.is_accepting(&left.state) && !b_machine.is_accepting(&right.state)
            }
            SimPosition::Eloise { .. } => successors[i].is_empty(),
        })
        .collect();
    let attractor = abelard_attractor(&owner, &successors, &bad);

    // every spoiler start must be answerable by some duplicator start
    roots.iter().all(|choices| choices.iter().any(|&i| !attractor[i]))
}

/// Containment of an FVA in a deterministic FVA, decided through the
/// simulation preorder.
pub fn contains_dfva(a: &Fva, d: &Fva) -> Result<bool, DecideError> {
    if let Some(q) = determinism_offender(d) {
        return Err(DecideError::NotDeterministic(q.to_string()));
    }
    Ok(fva_simulates(a, d))
}

// ---------------------------------------------------------------------------
// Containment against classical finite automata
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FaDirection {
    /// Is the FVA's language included in the FA's?
    FvaInFa,
    /// Is the FA's language included in the FVA's?
    FaInFva,
}

/// A small explicit-alphabet automaton used only by the containment checks.
#[derive(Clone, Debug)]
struct ClassicalFa {
    alphabet: BTreeSet<Letter>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    delta: BTreeMap<(usize, Letter), BTreeSet<usize>>,
}

impl ClassicalFa {
    fn from_fva(a: &Fva, alphabet: &BTreeSet<Letter>) -> Self {
        let states: Vec<StateId> = a.states().iter().cloned().collect();
        let index: BTreeMap<&StateId, usize> =
            states.iter().enumerate().map(|(i, q)| (q, i)).collect();
        let mut delta: BTreeMap<(usize, Letter), BTreeSet<usize>> = BTreeMap::new();
        for t in a.transitions() {
            let Label::Letter(c) = &t.label else {
                panic!("classical automaton with a variable transition")
            };
            delta.entry((index[&t.from], c.clone())).or_default().insert(index[&t.to]);
        }
        ClassicalFa {
            alphabet: alphabet.clone(),
            initial: a.initial().iter().map(|q| index[q]).collect(),
            accepting: a.accepting().iter().map(|q| index[q]).collect(),
            delta,
        }
    }

    /// Subset construction; the result is total over the alphabet.
    fn determinize(&self) -> DeterministicFa {
        let mut subsets: Vec<BTreeSet<usize>> = vec![self.initial.clone()];
        let mut index: BTreeMap<BTreeSet<usize>, usize> = [(self.initial.clone(), 0)].into();
        let mut delta: Vec<BTreeMap<Letter, usize>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let current = subsets[i].clone();
            let mut row = BTreeMap::new();
            for c in &self.alphabet {
                let next: BTreeSet<usize> = current
                    .iter()
                    .flat_map(|&q| self.delta.get(&(q, c.clone())).into_iter().flatten().copied())
                    .collect();
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next);
                    subsets.len() - 1
                });
                row.insert(c.clone(), j);
            }
            delta.push(row);
            i += 1;
        }
        let accepting =
            subsets.iter().map(|s| s.iter().any(|q| self.accepting.contains(q))).collect();
        DeterministicFa { delta, accepting }
    }
}

struct DeterministicFa {
    delta: Vec<BTreeMap<Letter, usize>>,
    accepting: Vec<bool>,
}

/// L(sub) included in L(sup), both read over the same alphabet.
fn fa_included(sub: &ClassicalFa, sup: &ClassicalFa) -> bool {
    debug_assert_eq!(sub.alphabet, sup.alphabet);
    let det = sup.determinize();
    // product of sub with the determinization of sup: a reachable pair that
    // sub accepts and sup rejects witnesses non-inclusion
    let mut seen: BTreeSet<(usize, usize)> = sub.initial.iter().map(|&q| (q, 0usize)).collect();
    let mut stack: Vec<(usize, usize)> = seen.iter().copied().collect();
    while let Some((q, d)) = stack.pop() {
        if sub.accepting.contains(&q) && !det.accepting[d] {
            return false;
        }
        for c in &sub.alphabet {
            let d2 = det.delta[d][c];
            for &q2 in sub.delta.get(&(q, c.clone())).into_iter().flatten() {
                if seen.insert((q2, d2)) {
                    stack.push((q2, d2));
                }
            }
        }
    }
    true
}

/// The intersection of a classical FA with an FVA is regular: its states
/// pair an FA state with an FVA configuration whose memory only holds the
/// FA's letters.
fn fa_intersect_fva(f: &Fva, a: &Fva, alphabet: &BTreeSet<Letter>) -> ClassicalFa {
    type Node = (StateId, Configuration);
    let mut index: BTreeMap<Node, usize> = BTreeMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut delta: BTreeMap<(usize, Letter), BTreeSet<usize>> = BTreeMap::new();
    let mut worklist = Vec::new();
    for qf in f.initial() {
        for qa in a.initial() {
            let node = (qf.clone(), Configuration::initial(qa.clone()));
            if !index.contains_key(&node) {
                index.insert(node.clone(), nodes.len());
                nodes.push(node.clone());
                worklist.push(node);
            }
        }
    }
    let initial: BTreeSet<usize> = (0..nodes.len()).collect();
    while let Some((qf, cfg)) = worklist.pop() {
        let i = index[&(qf.clone(), cfg.clone())];
        for (lf, tf) in f.outgoing(&qf) {
            let Label::Letter(c) = lf else {
                panic!("classical automaton with a variable transition")
            };
            for (la, ta) in a.outgoing(&cfg.state) {
                let Some(advanced) = fire_label(a.machine(), &cfg.memory, la, ta, c) else {
                    continue;
                };
                let node = (tf.clone(), advanced);
                let j = *index.entry(node.clone()).or_insert_with(|| {
                    nodes.push(node.clone());
                    worklist.push(node.clone());
                    nodes.len() - 1
                });
                delta.entry((i, c.clone())).or_default().insert(j);
            }
        }
    }
    let accepting = nodes
        .iter()
        .enumerate()
        .filter(|(_, (qf, cfg))| f.is_accepting(qf) && a.is_accepting(&cfg.state))
        .map(|(i, _)| i)
        .collect();
    ClassicalFa { alphabet: alphabet.clone(), initial, accepting, delta }
}

/// Containment between an FVA and a classical FA, in either direction.
pub fn fa_containment(a: &Fva, f: &Fva, direction: FaDirection) -> Result<bool, DecideError> {
    if !f.is_classical() {
        return Err(DecideError::NotFiniteAutomaton);
    }
    let alphabet: BTreeSet<Letter> = a.letters().union(&f.letters()).cloned().collect();
    match direction {
        FaDirection::FaInFva => {
            // L(f) inside L(a) iff L(f) equals their (regular) intersection
            let inter = fa_intersect_fva(f, a, &alphabet);
            let f_fa = ClassicalFa::from_fva(f, &alphabet);
            Ok(fa_included(&f_fa, &inter))
        }
        FaDirection::FvaInFa => {
            // a variable on a useful path admits a letter outside any finite
            // alphabet, so containment demands a letter-only useful part
            let m = a.machine();
            let useful: BTreeSet<StateId> =
                m.reachable().intersection(&m.coreachable()).cloned().collect();
            let trimmed = m.restrict_states(&useful);
            if trimmed.transitions().any(|t| matches!(t.label, Label::Var(_))) {
                return Ok(false);
            }
            let a_fa = ClassicalFa::from_fva(
                &Fva::new(trimmed).expect("trimming preserves validity"),
                &alphabet,
            );
            let f_fa = ClassicalFa::from_fva(f, &alphabet);
            Ok(fa_included(&a_fa, &f_fa))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::short::*;
    use crate::automaton::Builder;
    use crate::fixtures;
    use crate::run::{membership, parse_word, sample_language};

    fn universal_loop() -> Fva {
        Builder::new()
            .initial("u")
            .accepting("u")
            .transition("u", vr("k"), "u")
            .refresh("k", &["u"])
            .fva()
    }

    fn single_letter(l: &str) -> Fva {
        Builder::new().initial("q0").accepting("qf").transition("q0", lt(l), "qf").fva()
    }

    #[test]
    fn universality_verdicts() {
        assert!(universal(&universal_loop()));
        assert!(!universal(&single_letter("a")));
        assert!(!universal(&fixtures::a1()));
        assert_eq!(non_universal_length(&single_letter("a")), Some(0));
        assert_eq!(non_universal_length(&fixtures::a1()), Some(1));
    }

    #[test]
    fn universal_implies_membership_of_fresh_words() {
        let u = universal_loop();
        for text in ["@empty", "zzz", "a b c", "q q q q q q"] {
            let w = parse_word(text).unwrap();
            assert!(membership(&u, &w).is_some());
        }
    }

    #[test]
    fn determinism_conditions() {
        assert!(is_deterministic(&fixtures::a1()));
        let var_conflict = Builder::new()
            .initial("q0")
            .accepting("q1")
            .transition("q0", vr("x"), "q1")
            .transition("q0", lt("a"), "q2")
            .state("q2")
            .fva();
        assert_eq!(determinism_offender(&var_conflict), Some(state("q0")));
        let same_letter = Builder::new()
            .initial("q0")
            .accepting("q1")
            .transition("q0", lt("a"), "q1")
            .transition("q0", lt("a"), "q2")
            .state("q2")
            .fva();
        assert_eq!(determinism_offender(&same_letter), Some(state("q0")));
        // conflicts on an unreachable state do not count
        let unreachable = Builder::new()
            .initial("q0")
            .accepting("q0")
            .transition("island", vr("x"), "q1")
            .transition("island", lt("a"), "q1")
            .state("q1")
            .fva();
        assert!(is_deterministic(&unreachable));
        assert!(!is_deterministic(&fixtures::dfva_counterexample()));
    }

    #[test]
    fn dfva_universality_agrees_with_general_decider() {
        let u = universal_loop();
        assert!(dfva_universal(&u).unwrap());
        let a = single_letter("a");
        assert!(!dfva_universal(&a).unwrap());
        let a1 = fixtures::a1();
        assert_eq!(dfva_universal(&a1).unwrap(), universal(&a1));
        assert!(matches!(
            dfva_universal(&fixtures::dfva_counterexample()),
            Err(DecideError::NotDeterministic(_))
        ));
    }

    #[test]
    fn simulation_is_reflexive_and_sound() {
        let a1 = fixtures::a1();
        assert!(fva_simulates(&a1, &a1));
        assert!(fva_simulates(&a1, &universal_loop()));
        assert!(!fva_simulates(&universal_loop(), &single_letter("a")));
    }

    #[test]
    fn simulation_implies_sample_inclusion() {
        let a1 = fixtures::a1();
        let u = universal_loop();
        assert!(fva_simulates(&a1, &u));
        let pool: BTreeSet<Letter> = [letter("a"), letter("b"), letter("c")].into();
        let sa = sample_language(&a1, &pool, 4);
        let su = sample_language(&u, &pool, 4);
        assert!(sa.is_subset(&su));
    }

    #[test]
    fn contains_dfva_cases() {
        let a1 = fixtures::a1();
        assert!(contains_dfva(&a1, &a1).unwrap());
        let u = universal_loop();
        assert!(contains_dfva(&single_letter("a"), &u).unwrap());
        assert!(!contains_dfva(&u, &single_letter("a")).unwrap());
        assert!(contains_dfva(&u, &fixtures::dfva_counterexample()).is_err());
    }

    #[test]
    fn fa_containment_cases() {
        // f accepts {a b}; A2 requires a repeated letter, so f is not inside
        let f = Builder::new()
            .initial("f0")
            .accepting("f2")
            .transition("f0", lt("a"), "f1")
            .transition("f1", lt("b"), "f2")
            .fva();
        assert!(!fa_containment(&fixtures::a2(), &f, FaDirection::FaInFva).unwrap());
        // f accepts {a a}; A1 contains it
        let faa = Builder::new()
            .initial("f0")
            .accepting("f2")
            .transition("f0", lt("a"), "f1")
            .transition("f1", lt("a"), "f2")
            .fva();
        assert!(fa_containment(&fixtures::a1(), &faa, FaDirection::FaInFva).unwrap());
        // a letter-only FVA equal to f is contained both ways
        let copy = faa.clone();
        assert!(fa_containment(&copy, &faa, FaDirection::FvaInFa).unwrap());
        // A1 uses variables on useful paths, so it cannot fit inside an FA
        assert!(!fa_containment(&fixtures::a1(), &faa, FaDirection::FvaInFa).unwrap());
        // error on a non-classical right-hand side
        assert!(fa_containment(&fixtures::a1(), &fixtures::a2(), FaDirection::FaInFva).is_err());
    }
}
