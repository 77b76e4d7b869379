//! Closure constructions: union, concatenation and Kleene star (through
//! epsilon wiring and elimination), the Cartesian 2-FVA product, and the
//! n-FVA to FVA reduction chain.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::alphabet::{mint_variable, Letter, Variable};
use crate::automaton::{
    disjoint_state_names, rename_apart, EpsFva, Fva, Machine, NFva, StateId, Transition,
};
use crate::label::{Label, LabelTuple};

/// Default bound on materialized states for the reduction constructions.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("{construction} exceeded the state cap of {cap}")]
    StateCap { construction: &'static str, cap: usize },
}

/// Mints state ids that stay unique across a whole construction.
struct NameMint {
    taken: BTreeSet<StateId>,
}

impl NameMint {
    fn new(taken: impl IntoIterator<Item = StateId>) -> Self {
        NameMint { taken: taken.into_iter().collect() }
    }

    fn fresh(&mut self, candidate: String) -> StateId {
        let mut name = candidate;
        loop {
            if let Ok(id) = StateId::new(&name) {
                if !self.taken.contains(&id) {
                    self.taken.insert(id.clone());
                    return id;
                }
            }
            name.push('\'');
        }
    }

    fn reserve(&mut self, ids: impl IntoIterator<Item = StateId>) {
        self.taken.extend(ids);
    }
}

/// Disjoint union of the two machines after renaming variables and states
/// apart; recognizes the union of the languages.
pub fn union(a: &Fva, b: &Fva) -> Fva {
    let b_machine = rename_apart(a.machine(), b.machine()).unwrap_or_else(|| b.machine().clone());
    let state_map = disjoint_state_names(b_machine.states(), a.machine().states());
    let b_machine = b_machine.rename_states(&state_map);

    let transitions = a
        .machine()
        .transitions()
        .chain(b_machine.transitions())
        .collect::<Vec<_>>();
    let machine = Machine::from_parts(
        a.variables().union(b_machine.variables()).cloned().collect(),
        a.states().union(b_machine.states()).cloned().collect(),
        a.initial().union(b_machine.initial()).cloned().collect(),
        a.accepting().union(b_machine.accepting()).cloned().collect(),
        transitions,
        merge_refresh(a.machine().refresh(), b_machine.refresh()),
    );
    Fva::new(machine).expect("union of valid automata is valid")
}

fn merge_refresh(
    a: &BTreeMap<Variable, BTreeSet<StateId>>,
    b: &BTreeMap<Variable, BTreeSet<StateId>>,
) -> BTreeMap<Variable, BTreeSet<StateId>> {
    let mut out = a.clone();
    for (v, qs) in b {
        out.entry(v.clone()).or_default().extend(qs.iter().cloned());
    }
    out
}

/// Concatenation: epsilon seams from the first automaton's accepting states
/// to the second's initial states, then epsilon elimination.
pub fn concat(a: &Fva, b: &Fva) -> Fva {
    let b_machine = rename_apart(a.machine(), b.machine()).unwrap_or_else(|| b.machine().clone());
    let state_map = disjoint_state_names(b_machine.states(), a.machine().states());
    let b_machine = b_machine.rename_states(&state_map);

    let mut transitions: Vec<Transition<Label>> =
        a.machine().transitions().chain(b_machine.transitions()).collect();
    for qf in a.accepting() {
        for q0 in b_machine.initial() {
            transitions.push(Transition { from: qf.clone(), label: Label::Epsilon, to: q0.clone() });
        }
    }
    let machine = Machine::from_parts(
        a.variables().union(b_machine.variables()).cloned().collect(),
        a.states().union(b_machine.states()).cloned().collect(),
        a.initial().clone(),
        b_machine.accepting().clone(),
        transitions,
        merge_refresh(a.machine().refresh(), b_machine.refresh()),
    );
    let eps = EpsFva::new(machine).expect("concatenation wiring is valid");
    eliminate_eps(&eps)
}

/// Kleene star: a fresh hub state is both initial and accepting, epsilon
/// seams run through it, and every variable is additionally refreshed there
/// so bindings cannot leak across iterations.
pub fn star(a: &Fva) -> Fva {
    let mut mint = NameMint::new(a.states().iter().cloned());
    let hub = mint.fresh("*hub".into());

    let mut transitions: Vec<Transition<Label>> = a.machine().transitions().collect();
    for q0 in a.initial() {
        transitions.push(Transition { from: hub.clone(), label: Label::Epsilon, to: q0.clone() });
    }
    for qf in a.accepting() {
        transitions.push(Transition { from: qf.clone(), label: Label::Epsilon, to: hub.clone() });
    }
    let mut refresh = a.machine().refresh().clone();
    for v in a.variables() {
        refresh.entry(v.clone()).or_default().insert(hub.clone());
    }
    let mut states = a.states().clone();
    states.insert(hub.clone());
    let machine = Machine::from_parts(
        a.variables().clone(),
        states,
        [hub.clone()].into(),
        [hub].into(),
        transitions,
        refresh,
    );
    let eps = EpsFva::new(machine).expect("star wiring is valid");
    eliminate_eps(&eps)
}

// ---------------------------------------------------------------------------
// Epsilon elimination
// ---------------------------------------------------------------------------

/// A state entered together with the union of every refresh preimage
/// collected along a pending epsilon path. This is the canonical form of the
/// elimination operator's pair states: a nested pair `((q,r),s)` behaves
/// like `s` with the refreshes of all components merged, so only the final
/// state and the merged drop set matter.
type DropState = (StateId, BTreeSet<Variable>);

/// All `(state, merged drops)` composites reachable from `q` by first
/// entering it and then following any epsilon path. Drop sets only grow
/// along a path, so the walk is over a finite space.
fn eps_reach_with_drops(m: &Machine<Label>, q: &StateId) -> BTreeSet<DropState> {
    let start: DropState = (q.clone(), m.refreshed_vars(q));
    let mut seen: BTreeSet<DropState> = [start.clone()].into();
    let mut stack = vec![start];
    while let Some((r, drops)) = stack.pop() {
        for (label, to) in m.outgoing(&r) {
            if !label.is_epsilon() {
                continue;
            }
            let mut next_drops = drops.clone();
            next_drops.extend(m.refreshed_vars(to));
            let next = (to.clone(), next_drops);
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    seen
}

fn eps_forward_closure(m: &Machine<Label>, from: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let mut seen = from.clone();
    let mut stack: Vec<StateId> = seen.iter().cloned().collect();
    while let Some(q) = stack.pop() {
        for (label, to) in m.outgoing(&q) {
            if label.is_epsilon() && seen.insert(to.clone()) {
                stack.push(to.clone());
            }
        }
    }
    seen
}

/// Eliminates every epsilon transition, preserving the recognized language.
/// The state space is the composite `(state, drop set)` space, bounded by
/// |Q| * 2^|X|; exceeding that bound is impossible and asserted.
pub fn eliminate_eps(e: &EpsFva) -> Fva {
    let m = e.machine().restrict_states(&e.machine().reachable());

    // states whose epsilon closure meets the accepting set; acceptance is
    // memory-independent, so a pending epsilon suffix can always be taken
    let accepts_by_eps: BTreeSet<StateId> = {
        let mut eps_preds: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
        for t in m.transitions().filter(|t| t.label.is_epsilon()) {
            eps_preds.entry(t.to).or_default().push(t.from);
        }
        let mut seen = m.accepting().clone();
        let mut stack: Vec<StateId> = seen.iter().cloned().collect();
        while let Some(q) = stack.pop() {
            for p in eps_preds.get(&q).cloned().into_iter().flatten() {
                if seen.insert(p.clone()) {
                    stack.push(p);
                }
            }
        }
        seen
    };

    let bound = m
        .states()
        .len()
        .saturating_mul(1usize.checked_shl(m.variables().len() as u32).unwrap_or(usize::MAX));

    let mut mint = NameMint::new([]);
    let mut ids: BTreeMap<DropState, StateId> = BTreeMap::new();
    let mut worklist: Vec<DropState> = Vec::new();
    let mut materialize = |c: &DropState,
                           mint: &mut NameMint,
                           worklist: &mut Vec<DropState>,
                           ids: &mut BTreeMap<DropState, StateId>|
     -> StateId {
        if let Some(id) = ids.get(c) {
            return id.clone();
        }
        let candidate = if c.1.is_empty() {
            c.0.to_string()
        } else {
            let drops: Vec<&str> = c.1.iter().map(Variable::as_str).collect();
            format!("{}+{}", c.0, drops.join(","))
        };
        let id = mint.fresh(candidate);
        ids.insert(c.clone(), id.clone());
        worklist.push(c.clone());
        id
    };

    // initial entries carry the empty memory, so pending drops are moot
    let mut initial = BTreeSet::new();
    for q in eps_forward_closure(&m, m.initial()) {
        let c = (q, BTreeSet::new());
        initial.insert(materialize(&c, &mut mint, &mut worklist, &mut ids));
    }

    let mut transitions: Vec<Transition<Label>> = Vec::new();
    while let Some((q, drops)) = worklist.pop() {
        assert!(
            ids.len() <= bound,
            "epsilon elimination exceeded its |Q| * 2^|X| state bound"
        );
        let from = ids[&(q.clone(), drops.clone())].clone();
        for (label, target) in m.outgoing(&q) {
            if label.is_epsilon() {
                continue;
            }
            for composite in eps_reach_with_drops(&m, target) {
                let to = materialize(&composite, &mut mint, &mut worklist, &mut ids);
                transitions.push(Transition { from: from.clone(), label: label.clone(), to });
            }
        }
    }

    let accepting: BTreeSet<StateId> = ids
        .iter()
        .filter(|((q, _), _)| accepts_by_eps.contains(q))
        .map(|(_, id)| id.clone())
        .collect();

    let mut refresh: BTreeMap<Variable, BTreeSet<StateId>> = BTreeMap::new();
    for ((_, drops), id) in &ids {
        for v in drops {
            refresh.entry(v.clone()).or_default().insert(id.clone());
        }
    }

    let machine = Machine::from_parts(
        m.variables().clone(),
        ids.values().cloned().collect(),
        initial,
        accepting,
        transitions,
        refresh,
    );
    Fva::new(machine).expect("elimination removed every epsilon label")
}

// ---------------------------------------------------------------------------
// Products and the n-FVA reduction
// ---------------------------------------------------------------------------

/// Cartesian product as a 2-FVA: a step must satisfy both components'
/// labels at once, and a pair state refreshes a variable when either
/// component does. Recognizes the intersection.
pub fn product2(a: &Fva, b: &Fva) -> NFva {
    let b_machine = rename_apart(a.machine(), b.machine()).unwrap_or_else(|| b.machine().clone());

    let mut mint = NameMint::new([]);
    let mut pair_id: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
    let mut id_of = |q1: &StateId, q2: &StateId, mint: &mut NameMint| -> StateId {
        pair_id
            .entry((q1.clone(), q2.clone()))
            .or_insert_with(|| mint.fresh(format!("({q1},{q2})")))
            .clone()
    };

    let mut transitions = Vec::new();
    for t1 in a.machine().transitions() {
        for t2 in b_machine.transitions() {
            transitions.push(Transition {
                from: id_of(&t1.from, &t2.from, &mut mint),
                label: LabelTuple(vec![t1.label.clone(), t2.label.clone()]),
                to: id_of(&t1.to, &t2.to, &mut mint),
            });
        }
    }
    let mut initial = BTreeSet::new();
    for q1 in a.initial() {
        for q2 in b_machine.initial() {
            initial.insert(id_of(q1, q2, &mut mint));
        }
    }
    let mut accepting = BTreeSet::new();
    for q1 in a.accepting() {
        for q2 in b_machine.accepting() {
            accepting.insert(id_of(q1, q2, &mut mint));
        }
    }

    let mut refresh: BTreeMap<Variable, BTreeSet<StateId>> = BTreeMap::new();
    for ((q1, q2), id) in &pair_id {
        for (v, qs) in a.machine().refresh() {
            if qs.contains(q1) {
                refresh.entry(v.clone()).or_default().insert(id.clone());
            }
        }
        for (v, qs) in b_machine.refresh() {
            if qs.contains(q2) {
                refresh.entry(v.clone()).or_default().insert(id.clone());
            }
        }
    }

    let machine = Machine::from_parts(
        a.variables().union(b_machine.variables()).cloned().collect(),
        pair_id.values().cloned().collect(),
        initial,
        accepting,
        transitions,
        refresh,
    );
    let keep: BTreeSet<StateId> =
        machine.reachable().intersection(&machine.coreachable()).cloned().collect();
    NFva::new(machine.restrict_states(&keep), 2).expect("product of valid automata is valid")
}

/// A class-index guess for every variable; letters are implicitly mapped to
/// their fixed enumeration index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct PsiIndex(BTreeMap<Variable, usize>);

struct PsiSpace {
    letters: Vec<Letter>,
    variables: Vec<Variable>,
    classes: usize,
}

impl PsiSpace {
    fn new(m: &Machine<LabelTuple>) -> Self {
        let letters: Vec<Letter> = m.letters().into_iter().collect();
        let variables: Vec<Variable> = m.variables().iter().cloned().collect();
        let classes = letters.len() + variables.len();
        PsiSpace { letters, variables, classes }
    }

    /// Class of a label under `psi`: a letter's enumeration index, or the
    /// guessed index of a variable. Classes are 1-based as usual.
    fn class(&self, psi: &PsiIndex, label: &Label) -> usize {
        match label {
            Label::Letter(l) => {
                self.letters.iter().position(|k| k == l).expect("letter enumerated") + 1
            }
            Label::Var(v) => *psi.0.get(v).expect("psi total on variables"),
            Label::Epsilon => unreachable!("n-FVA labels are epsilon-free"),
        }
    }

    /// All full guesses, for the initial states.
    fn all(&self) -> Vec<PsiIndex> {
        let mut out = vec![PsiIndex(BTreeMap::new())];
        for v in &self.variables {
            let mut next = Vec::with_capacity(out.len() * self.classes);
            for psi in &out {
                for i in 1..=self.classes {
                    let mut m = psi.0.clone();
                    m.insert(v.clone(), i);
                    next.push(PsiIndex(m));
                }
            }
            out = next;
        }
        out
    }

    /// Re-guesses exactly the variables of `dropped`, everything else fixed.
    fn reguess(&self, psi: &PsiIndex, dropped: &BTreeSet<Variable>) -> Vec<PsiIndex> {
        let mut out = vec![psi.clone()];
        for v in dropped {
            let mut next = Vec::with_capacity(out.len() * self.classes);
            for p in &out {
                for i in 1..=self.classes {
                    let mut m = p.0.clone();
                    m.insert(v.clone(), i);
                    next.push(PsiIndex(m));
                }
            }
            out = next;
        }
        out
    }

    fn render(&self, psi: &PsiIndex) -> String {
        psi.0
            .iter()
            .map(|(v, i)| format!("{}:{i}", v.as_str()))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Contracts the first two label components of an n-FVA (n >= 2) into one,
/// yielding an (n-1)-FVA over class labels: letters keep their identity and
/// classes beyond the letters become fresh variables. Only reachable
/// `(state, guess)` pairs are materialized.
fn contract_two(n: &NFva, cap: usize) -> Result<NFva, ClosureError> {
    let m = n.machine();
    let space = PsiSpace::new(m);
    let n_letters = space.letters.len();

    // one fresh variable per non-letter class
    let mut occupied: BTreeSet<Variable> = m.variables().clone();
    let class_vars: Vec<Variable> = (n_letters + 1..=space.classes)
        .map(|i| {
            let v = mint_variable(&format!("cls{i}"), &occupied);
            occupied.insert(v.clone());
            v
        })
        .collect();
    let class_label = |i: usize| -> Label {
        if i <= n_letters {
            Label::Letter(space.letters[i - 1].clone())
        } else {
            Label::Var(class_vars[i - n_letters - 1].clone())
        }
    };

    struct Frontier {
        mint: NameMint,
        ids: BTreeMap<(StateId, PsiIndex), StateId>,
        worklist: Vec<(StateId, PsiIndex)>,
    }

    impl Frontier {
        fn materialize(&mut self, space: &PsiSpace, q: &StateId, psi: &PsiIndex) -> StateId {
            if let Some(id) = self.ids.get(&(q.clone(), psi.clone())) {
                return id.clone();
            }
            let id = self.mint.fresh(format!("({q}|{})", space.render(psi)));
            self.ids.insert((q.clone(), psi.clone()), id.clone());
            self.worklist.push((q.clone(), psi.clone()));
            id
        }
    }

    let mut frontier =
        Frontier { mint: NameMint::new([]), ids: BTreeMap::new(), worklist: Vec::new() };
    let mut initial = BTreeSet::new();
    for q0 in m.initial() {
        for psi in space.all() {
            let id = frontier.materialize(&space, q0, &psi);
            initial.insert(id);
        }
    }

    let mut transitions: Vec<Transition<LabelTuple>> = Vec::new();
    while let Some((q, psi)) = frontier.worklist.pop() {
        if frontier.ids.len() > cap {
            return Err(ClosureError::StateCap { construction: "reduce_nfva", cap });
        }
        let from = frontier.ids[&(q.clone(), psi.clone())].clone();
        for (tuple, to) in m.outgoing(&q) {
            let (l1, l2) = (&tuple.0[0], &tuple.0[1]);
            let i1 = space.class(&psi, l1);
            if i1 != space.class(&psi, l2) {
                continue;
            }
            let mut new_labels = vec![class_label(i1)];
            new_labels.extend(tuple.0[2..].iter().cloned());
            let dropped = m.refreshed_vars(to);
            for psi2 in space.reguess(&psi, &dropped) {
                let to_id = frontier.materialize(&space, to, &psi2);
                transitions.push(Transition {
                    from: from.clone(),
                    label: LabelTuple(new_labels.clone()),
                    to: to_id,
                });
            }
        }
    }
    let ids = frontier.ids;

    let accepting: BTreeSet<StateId> = ids
        .iter()
        .filter(|((q, _), _)| m.accepting().contains(q))
        .map(|(_, id)| id.clone())
        .collect();

    let mut refresh: BTreeMap<Variable, BTreeSet<StateId>> = BTreeMap::new();
    // original variables keep their refresh states, lifted to every guess
    for (v, qs) in m.refresh() {
        let entry = refresh.entry(v.clone()).or_default();
        for ((q, _), id) in &ids {
            if qs.contains(q) {
                entry.insert(id.clone());
            }
        }
    }
    // a class variable is refreshed where every original symbol of its class
    // is refreshed; an empty class is refreshed vacuously everywhere
    for (offset, cv) in class_vars.iter().enumerate() {
        let i = n_letters + 1 + offset;
        let entry = refresh.entry(cv.clone()).or_default();
        for ((q, psi), id) in &ids {
            let preimage_refreshed = psi
                .0
                .iter()
                .filter(|(_, class)| **class == i)
                .all(|(v, _)| m.refreshed_at(v, q));
            if preimage_refreshed {
                entry.insert(id.clone());
            }
        }
    }

    let mut variables: BTreeSet<Variable> = class_vars.iter().cloned().collect();
    if n.arity() > 2 {
        variables.extend(m.variables().iter().cloned());
    } else {
        // contracted away entirely; keep the refresh map consistent
        refresh.retain(|v, _| class_vars.contains(v));
    }

    let machine = Machine::from_parts(
        variables,
        ids.values().cloned().collect(),
        initial,
        accepting,
        transitions,
        refresh,
    );
    let keep: BTreeSet<StateId> =
        machine.reachable().intersection(&machine.coreachable()).cloned().collect();
    Ok(NFva::new(machine.restrict_states(&keep), n.arity() - 1)
        .expect("contraction preserves structure"))
}

/// Reduces an n-FVA to a plain FVA with the same language.
pub fn reduce_nfva(n: &NFva) -> Result<Fva, ClosureError> {
    reduce_nfva_with_cap(n, DEFAULT_STATE_CAP)
}

pub fn reduce_nfva_with_cap(n: &NFva, cap: usize) -> Result<Fva, ClosureError> {
    let mut current = n.clone();
    while current.arity() > 1 {
        current = contract_two(&current, cap)?;
    }
    let m = current.machine();
    let machine = Machine::from_parts(
        m.variables().clone(),
        m.states().clone(),
        m.initial().clone(),
        m.accepting().clone(),
        m.transitions().map(|t| Transition {
            from: t.from,
            label: t.label.0.into_iter().next().expect("arity one"),
            to: t.to,
        }),
        m.refresh().clone(),
    );
    Ok(Fva::new(machine).expect("arity-one relabeling is valid"))
}

/// Intersection: Cartesian product followed by the reduction, pruned to
/// accessible and co-accessible states.
pub fn intersect(a: &Fva, b: &Fva) -> Result<Fva, ClosureError> {
    intersect_with_cap(a, b, DEFAULT_STATE_CAP)
}

pub fn intersect_with_cap(a: &Fva, b: &Fva, cap: usize) -> Result<Fva, ClosureError> {
    let reduced = reduce_nfva_with_cap(&product2(a, b), cap)?;
    let m = reduced.machine();
    let keep: BTreeSet<StateId> = m.reachable().intersection(&m.coreachable()).cloned().collect();
    Ok(Fva::new(m.restrict_states(&keep)).expect("pruning preserves validity"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::short::*;
    use crate::automaton::Builder;
    use crate::fixtures;
    use crate::run::{
        membership, membership_n, parse_word, sample_language, sample_language_eps,
        sample_language_n,
    };

    fn pool(letters: &[&str]) -> BTreeSet<Letter> {
        letters.iter().map(|l| letter(l)).collect()
    }

    fn singleton(label_from: &str, l: Label, label_to: &str) -> Fva {
        Builder::new().initial(label_from).accepting(label_to).transition(label_from, l, label_to).fva()
    }

    #[test]
    fn union_matches_sample_union() {
        let a1 = fixtures::a1();
        let a2 = fixtures::a2();
        let p = pool(&["a", "b"]);
        let u = union(&a1, &a2);
        let expected: BTreeSet<_> = sample_language(&a1, &p, 4)
            .union(&sample_language(&a2, &p, 4))
            .cloned()
            .collect();
        assert_eq!(sample_language(&u, &p, 4), expected);
    }

    #[test]
    fn union_with_empty_is_identity_on_samples() {
        let a1 = fixtures::a1();
        let empty = Builder::new().initial("e0").state("e1").accepting("e1").fva();
        let p = pool(&["a", "b"]);
        assert_eq!(
            sample_language(&union(&a1, &empty), &p, 4),
            sample_language(&a1, &p, 4)
        );
        assert_eq!(
            sample_language(&union(&a1, &a1), &p, 4),
            sample_language(&a1, &p, 4)
        );
    }

    #[test]
    fn concat_of_singletons() {
        let a = singleton("q0", lt("a"), "qf");
        let b = singleton("r0", lt("b"), "rf");
        let c = concat(&a, &b);
        let p = pool(&["a", "b"]);
        let expected: BTreeSet<_> = [parse_word("a b").unwrap()].into();
        assert_eq!(sample_language(&c, &p, 3), expected);
    }

    #[test]
    fn star_of_empty_language_is_epsilon() {
        let empty = Builder::new().initial("e0").state("e1").accepting("e1").fva();
        let s = star(&empty);
        let p = pool(&["a"]);
        assert_eq!(sample_language(&s, &p, 3), [Vec::new()].into());
    }

    #[test]
    fn star_refreshes_across_iterations() {
        // q0 -x-> qf with x refreshed at qf: single arbitrary letters
        let a = Builder::new()
            .initial("q0")
            .accepting("qf")
            .transition("q0", vr("x"), "qf")
            .refresh("x", &["qf"])
            .fva();
        let s = star(&a);
        let p = pool(&["a", "b"]);
        let all: BTreeSet<_> = sample_language(&s, &p, 3);
        // every word over the pool up to length 3
        assert_eq!(all.len(), 1 + 2 + 4 + 8);
    }

    #[test]
    fn star_does_not_leak_bindings_without_refresh() {
        // q0 -x-> qf with x never refreshed: L = single letters, L* must
        // still contain "a b" because iterations are independent copies.
        let a = singleton("q0", vr("x"), "qf");
        let s = star(&a);
        let p = pool(&["a", "b"]);
        let sample = sample_language(&s, &p, 2);
        assert!(sample.contains(&parse_word("a b").unwrap()));
        assert!(sample.contains(&parse_word("a a").unwrap()));
    }

    #[test]
    fn eliminate_eps_single_epsilon() {
        let e = Builder::new()
            .initial("q0")
            .accepting("qf")
            .transition("q0", eps(), "qf")
            .eps_fva();
        let f = eliminate_eps(&e);
        let p = pool(&["a"]);
        assert_eq!(sample_language(&f, &p, 3), [Vec::new()].into());
    }

    #[test]
    fn eliminate_eps_pair_state_case() {
        let e = Builder::new()
            .initial("q0")
            .accepting("q2")
            .transition("q0", lt("a"), "q1")
            .transition("q1", eps(), "q2")
            .eps_fva();
        let f = eliminate_eps(&e);
        let p = pool(&["a", "b"]);
        assert_eq!(sample_language(&f, &p, 2), [parse_word("a").unwrap()].into());
    }

    #[test]
    fn eliminate_eps_preserves_sampling_on_chains_and_cycles() {
        let chain = Builder::new()
            .initial("q0")
            .accepting("q3")
            .transition("q0", lt("a"), "q1")
            .transition("q1", eps(), "q2")
            .transition("q2", eps(), "q3")
            .transition("q3", vr("x"), "q3")
            .refresh("x", &["q3"])
            .eps_fva();
        let cycle = Builder::new()
            .initial("q0")
            .accepting("q2")
            .transition("q0", lt("a"), "q1")
            .transition("q1", eps(), "q2")
            .transition("q2", eps(), "q1")
            .transition("q2", lt("b"), "q0")
            .eps_fva();
        let p = pool(&["a", "b"]);
        for e in [chain, cycle] {
            let f = eliminate_eps(&e);
            assert_eq!(
                sample_language(&f, &p, 4),
                sample_language_eps(&e, &p, 4),
                "elimination changed the language"
            );
        }
    }

    #[test]
    fn eliminate_eps_on_eps_free_input() {
        let a1 = fixtures::a1();
        let f = eliminate_eps(&EpsFva::from_fva(&a1));
        let p = pool(&["a", "b"]);
        assert_eq!(sample_language(&f, &p, 4), sample_language(&a1, &p, 4));
    }

    #[test]
    fn eliminate_eps_refresh_at_pair_states() {
        // epsilon target refreshes x: a bound x must be dropped when the
        // epsilon is folded into a pair state.
        let e = Builder::new()
            .initial("q0")
            .accepting("q3")
            .transition("q0", vr("x"), "q1")
            .transition("q1", eps(), "q2")
            .transition("q2", vr("x"), "q3")
            .refresh("x", &["q2"])
            .eps_fva();
        let f = eliminate_eps(&e);
        let p = pool(&["a", "b"]);
        assert_eq!(sample_language(&f, &p, 2), sample_language_eps(&e, &p, 2));
        // "a b" is accepted: the epsilon refreshes x in between
        assert!(membership(&f, &parse_word("a b").unwrap()).is_some());
    }

    #[test]
    fn product2_matches_membership_conjunction() {
        let a1 = fixtures::a1();
        let a2 = fixtures::a2();
        let prod = product2(&a1, &a2);
        assert!(membership_n(&prod, &parse_word("a a").unwrap()));
        assert!(!membership_n(&prod, &parse_word("a b").unwrap()));
        let p = pool(&["a", "b"]);
        let expected: BTreeSet<_> = sample_language(&a1, &p, 4)
            .intersection(&sample_language(&a2, &p, 4))
            .cloned()
            .collect();
        assert_eq!(sample_language_n(&prod, &p, 4), expected);
    }

    #[test]
    fn reduce_arity_one_is_relabeling() {
        let one = Builder::new()
            .initial("q0")
            .accepting("qf")
            .transition("q0", tup(vec![vr("x")]), "qf")
            .nfva(1);
        let f = reduce_nfva(&one).unwrap();
        let p = pool(&["a", "b"]);
        assert_eq!(sample_language(&f, &p, 2), sample_language_n(&one, &p, 2));
    }

    #[test]
    fn reduce_appendix_two_fva() {
        let two = fixtures::appendix_two_fva();
        let f = reduce_nfva(&two).unwrap();
        let p = pool(&["a", "b", "c"]);
        let reduced = sample_language(&f, &p, 6);
        let direct = sample_language_n(&two, &p, 6);
        assert_eq!(reduced, direct);
        // closed form: empty word plus (a z)^n for a fixed z
        let mut expected: BTreeSet<Vec<Letter>> = [Vec::new()].into();
        for z in ["a", "b", "c"] {
            for n in 1..=3usize {
                let mut w = Vec::new();
                for _ in 0..n {
                    w.push(letter("a"));
                    w.push(letter(z));
                }
                expected.insert(w);
            }
        }
        assert_eq!(reduced, expected);
    }

    #[test]
    fn intersect_matches_sample_intersection() {
        let a1 = fixtures::a1();
        let a2 = fixtures::a2();
        let p = pool(&["a", "b"]);
        let i = intersect(&a1, &a2).unwrap();
        let expected: BTreeSet<_> = sample_language(&a1, &p, 4)
            .intersection(&sample_language(&a2, &p, 4))
            .cloned()
            .collect();
        assert_eq!(sample_language(&i, &p, 4), expected);
        // intersect(a, a) is sample-equal to a
        let ii = intersect(&a1, &a1).unwrap();
        assert_eq!(sample_language(&ii, &p, 4), sample_language(&a1, &p, 4));
    }
}
