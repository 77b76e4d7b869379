//! The JSON automaton format shared by every tool in the kit.
//!
//! Serialization is canonical: set-like arrays come out sorted, transitions
//! in `(from, label, to)` order, variables carry their `$` prefix. Parsing a
//! canonical document and re-serializing it reproduces the bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::alphabet::{Letter, Variable};
use crate::automaton::{Cfva, EpsFva, Fva, Machine, NFva, StateId, Transition, Violation};
use crate::label::{Label, LabelTuple, PolLabel, Polarity};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AutomatonDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    pub variables: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub accepting: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
    #[serde(default)]
    pub refresh: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    pub label: LabelField,
    pub to: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelField {
    One(LabelDoc),
    Tuple(Vec<LabelDoc>),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LabelDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarity: Option<String>,
}

/// Any of the four automaton variants, as loaded from a document.
#[derive(Clone, Debug)]
pub enum AnyAutomaton {
    Fva(Fva),
    EpsFva(EpsFva),
    NFva(NFva),
    Cfva(Cfva),
}

impl AnyAutomaton {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyAutomaton::Fva(_) => "fva",
            AnyAutomaton::EpsFva(_) => "eps-fva",
            AnyAutomaton::NFva(_) => "nfva",
            AnyAutomaton::Cfva(_) => "cfva",
        }
    }
}

fn bad(context: &str, message: String) -> Violation {
    Violation::BadToken { context: context.into(), message }
}

struct LabelCtx<'a> {
    polarized: bool,
    violations: &'a mut Vec<Violation>,
}

fn parse_label(doc: &LabelDoc, ctx: &mut LabelCtx) -> Option<(Label, Option<Polarity>)> {
    let polarity = match (&doc.polarity, ctx.polarized) {
        (Some(p), true) => match p.as_str() {
            "!" => Some(Polarity::Send),
            "?" => Some(Polarity::Recv),
            other => {
                ctx.violations.push(bad("label", format!("unknown polarity {other:?}")));
                return None;
            }
        },
        (None, true) => {
            ctx.violations.push(bad("label", "cfva label is missing its polarity".into()));
            return None;
        }
        (Some(_), false) => {
            ctx.violations.push(bad("label", "only cfva labels carry a polarity".into()));
            return None;
        }
        (None, false) => None,
    };
    let label = match doc.kind.as_str() {
        "eps" => {
            if doc.value.is_some() {
                ctx.violations.push(bad("label", "eps label must not carry a value".into()));
                return None;
            }
            Label::Epsilon
        }
        "letter" => {
            let Some(value) = &doc.value else {
                ctx.violations.push(bad("label", "letter label is missing its value".into()));
                return None;
            };
            match Letter::new(value) {
                Ok(l) => Label::Letter(l),
                Err(e) => {
                    ctx.violations.push(bad("label", e));
                    return None;
                }
            }
        }
        "var" => {
            let Some(value) = &doc.value else {
                ctx.violations.push(bad("label", "var label is missing its value".into()));
                return None;
            };
            match Variable::from_prefixed(value) {
                Ok(v) => Label::Var(v),
                Err(e) => {
                    ctx.violations.push(bad("label", e));
                    return None;
                }
            }
        }
        other => {
            ctx.violations.push(bad("label", format!("unknown label kind {other:?}")));
            return None;
        }
    };
    Some((label, polarity))
}

fn label_to_doc(label: &Label, polarity: Option<Polarity>) -> LabelDoc {
    let (kind, value) = match label {
        Label::Letter(l) => ("letter", Some(l.to_string())),
        Label::Var(v) => ("var", Some(v.prefixed())),
        Label::Epsilon => ("eps", None),
    };
    LabelDoc {
        kind: kind.into(),
        value,
        polarity: polarity.map(|p| p.symbol().to_string()),
    }
}

struct ParsedParts {
    variables: BTreeSet<Variable>,
    states: BTreeSet<StateId>,
    initial: BTreeSet<StateId>,
    accepting: BTreeSet<StateId>,
    refresh: BTreeMap<Variable, BTreeSet<StateId>>,
}

fn parse_common(doc: &AutomatonDoc, violations: &mut Vec<Violation>) -> ParsedParts {
    let mut variables = BTreeSet::new();
    for v in &doc.variables {
        match Variable::from_prefixed(v) {
            Ok(v) => {
                variables.insert(v);
            }
            Err(e) => violations.push(bad("variables", e)),
        }
    }
    fn state(token: &str, context: &str, violations: &mut Vec<Violation>) -> Option<StateId> {
        match StateId::new(token) {
            Ok(s) => Some(s),
            Err(e) => {
                violations.push(bad(context, e));
                None
            }
        }
    }
    let states: BTreeSet<StateId> =
        doc.states.iter().filter_map(|s| state(s, "states", violations)).collect();
    let initial: BTreeSet<StateId> =
        doc.initial.iter().filter_map(|s| state(s, "initial", violations)).collect();
    let accepting: BTreeSet<StateId> =
        doc.accepting.iter().filter_map(|s| state(s, "accepting", violations)).collect();
    let mut refresh: BTreeMap<Variable, BTreeSet<StateId>> = BTreeMap::new();
    for (v, qs) in &doc.refresh {
        match Variable::from_prefixed(v) {
            Ok(v) => {
                let entry = refresh.entry(v).or_default();
                for q in qs {
                    if let Some(q) = state(q, "refresh", violations) {
                        entry.insert(q);
                    }
                }
            }
            Err(e) => violations.push(bad("refresh", e)),
        }
    }
    ParsedParts { variables, states, initial, accepting, refresh }
}

fn parse_plain_transitions(
    doc: &AutomatonDoc,
    violations: &mut Vec<Violation>,
) -> Vec<Transition<Label>> {
    let mut out = Vec::new();
    for t in &doc.transitions {
        let LabelField::One(label_doc) = &t.label else {
            violations.push(bad("transitions", "label tuples are only for nfva documents".into()));
            continue;
        };
        let mut ctx = LabelCtx { polarized: false, violations };
        let Some((label, _)) = parse_label(label_doc, &mut ctx) else { continue };
        let (Ok(from), Ok(to)) = (StateId::new(&t.from), StateId::new(&t.to)) else {
            violations.push(bad("transitions", format!("bad endpoint in {} -> {}", t.from, t.to)));
            continue;
        };
        out.push(Transition { from, label, to });
    }
    out
}

fn machine_from_doc<L: crate::automaton::LabelKind>(
    parts: ParsedParts,
    transitions: Vec<Transition<L>>,
) -> Machine<L> {
    Machine::from_parts(
        parts.variables,
        parts.states,
        parts.initial,
        parts.accepting,
        transitions,
        parts.refresh,
    )
}

/// Converts a document into the typed automaton it claims to be, reporting
/// every violation found on the way.
pub fn automaton_from_doc(doc: &AutomatonDoc) -> Result<AnyAutomaton, Vec<Violation>> {
    let mut violations = Vec::new();
    let parts = parse_common(doc, &mut violations);
    match doc.kind.as_str() {
        "fva" | "eps-fva" => {
            if doc.arity.is_some() {
                violations.push(bad("arity", "arity is only for nfva documents".into()));
            }
            let transitions = parse_plain_transitions(doc, &mut violations);
            let machine = machine_from_doc(parts, transitions);
            if doc.kind == "fva" {
                match Fva::new(machine) {
                    Ok(f) if violations.is_empty() => Ok(AnyAutomaton::Fva(f)),
                    Ok(_) => Err(violations),
                    Err(mut v) => {
                        violations.append(&mut v);
                        Err(violations)
                    }
                }
            } else {
                match EpsFva::new(machine) {
                    Ok(f) if violations.is_empty() => Ok(AnyAutomaton::EpsFva(f)),
                    Ok(_) => Err(violations),
                    Err(mut v) => {
                        violations.append(&mut v);
                        Err(violations)
                    }
                }
            }
        }
        "cfva" => {
            if doc.arity.is_some() {
                violations.push(bad("arity", "arity is only for nfva documents".into()));
            }
            let mut transitions = Vec::new();
            for t in &doc.transitions {
                let LabelField::One(label_doc) = &t.label else {
                    violations
                        .push(bad("transitions", "label tuples are only for nfva documents".into()));
                    continue;
                };
                let mut ctx = LabelCtx { polarized: true, violations: &mut violations };
                let Some((label, Some(polarity))) = parse_label(label_doc, &mut ctx) else {
                    continue;
                };
                let (Ok(from), Ok(to)) = (StateId::new(&t.from), StateId::new(&t.to)) else {
                    violations
                        .push(bad("transitions", format!("bad endpoint in {} -> {}", t.from, t.to)));
                    continue;
                };
                transitions.push(Transition { from, label: PolLabel { polarity, label }, to });
            }
            let machine = machine_from_doc(parts, transitions);
            match Cfva::new(machine) {
                Ok(c) if violations.is_empty() => Ok(AnyAutomaton::Cfva(c)),
                Ok(_) => Err(violations),
                Err(mut v) => {
                    violations.append(&mut v);
                    Err(violations)
                }
            }
        }
        "nfva" => {
            let arity = doc.arity.unwrap_or_else(|| {
                violations.push(bad("arity", "nfva documents must declare an arity".into()));
                1
            });
            let mut transitions = Vec::new();
            for t in &doc.transitions {
                let LabelField::Tuple(label_docs) = &t.label else {
                    violations.push(bad("transitions", "nfva labels must be arrays".into()));
                    continue;
                };
                let mut labels = Vec::with_capacity(label_docs.len());
                let mut ok = true;
                for l in label_docs {
                    let mut ctx = LabelCtx { polarized: false, violations: &mut violations };
                    match parse_label(l, &mut ctx) {
                        Some((label, _)) => labels.push(label),
                        None => ok = false,
                    }
                }
                if !ok {
                    continue;
                }
                let (Ok(from), Ok(to)) = (StateId::new(&t.from), StateId::new(&t.to)) else {
                    violations
                        .push(bad("transitions", format!("bad endpoint in {} -> {}", t.from, t.to)));
                    continue;
                };
                transitions.push(Transition { from, label: LabelTuple(labels), to });
            }
            let machine = machine_from_doc(parts, transitions);
            match NFva::new(machine, arity) {
                Ok(n) if violations.is_empty() => Ok(AnyAutomaton::NFva(n)),
                Ok(_) => Err(violations),
                Err(mut v) => {
                    violations.append(&mut v);
                    Err(violations)
                }
            }
        }
        other => {
            violations.push(bad("type", format!("unknown automaton type {other:?}")));
            Err(violations)
        }
    }
}

/// Validates a document: the empty list means every invariant holds.
pub fn validate_doc(doc: &AutomatonDoc) -> Vec<Violation> {
    match automaton_from_doc(doc) {
        Ok(_) => Vec::new(),
        Err(v) => v,
    }
}

fn machine_to_doc_parts<L: crate::automaton::LabelKind>(
    m: &Machine<L>,
) -> (Vec<String>, Vec<String>, Vec<String>, Vec<String>, BTreeMap<String, Vec<String>>) {
    (
        m.variables().iter().map(Variable::prefixed).collect(),
        m.states().iter().map(ToString::to_string).collect(),
        m.initial().iter().map(ToString::to_string).collect(),
        m.accepting().iter().map(ToString::to_string).collect(),
        m.refresh()
            .iter()
            .filter(|(_, qs)| !qs.is_empty())
            .map(|(v, qs)| (v.prefixed(), qs.iter().map(ToString::to_string).collect()))
            .collect(),
    )
}

/// Converts a typed automaton back into its canonical document.
pub fn automaton_to_doc(a: &AnyAutomaton) -> AutomatonDoc {
    match a {
        AnyAutomaton::Fva(f) => plain_to_doc(f.machine(), "fva"),
        AnyAutomaton::EpsFva(f) => plain_to_doc(f.machine(), "eps-fva"),
        AnyAutomaton::NFva(n) => {
            let m = n.machine();
            let (variables, states, initial, accepting, refresh) = machine_to_doc_parts(m);
            let transitions = m
                .transitions()
                .map(|t| TransitionDoc {
                    from: t.from.to_string(),
                    label: LabelField::Tuple(
                        t.label.0.iter().map(|l| label_to_doc(l, None)).collect(),
                    ),
                    to: t.to.to_string(),
                })
                .collect();
            AutomatonDoc {
                kind: "nfva".into(),
                arity: Some(n.arity()),
                variables,
                states,
                initial,
                accepting,
                transitions,
                refresh,
            }
        }
        AnyAutomaton::Cfva(c) => {
            let m = c.machine();
            let (variables, states, initial, accepting, refresh) = machine_to_doc_parts(m);
            let transitions = m
                .transitions()
                .map(|t| TransitionDoc {
                    from: t.from.to_string(),
                    label: LabelField::One(label_to_doc(&t.label.label, Some(t.label.polarity))),
                    to: t.to.to_string(),
                })
                .collect();
            AutomatonDoc {
                kind: "cfva".into(),
                arity: None,
                variables,
                states,
                initial,
                accepting,
                transitions,
                refresh,
            }
        }
    }
}

fn plain_to_doc(m: &Machine<Label>, kind: &str) -> AutomatonDoc {
    let (variables, states, initial, accepting, refresh) = machine_to_doc_parts(m);
    let transitions = m
        .transitions()
        .map(|t| TransitionDoc {
            from: t.from.to_string(),
            label: LabelField::One(label_to_doc(&t.label, None)),
            to: t.to.to_string(),
        })
        .collect();
    AutomatonDoc {
        kind: kind.into(),
        arity: None,
        variables,
        states,
        initial,
        accepting,
        transitions,
        refresh,
    }
}

pub fn fva_to_doc(f: &Fva) -> AutomatonDoc {
    automaton_to_doc(&AnyAutomaton::Fva(f.clone()))
}

pub fn cfva_to_doc(c: &Cfva) -> AutomatonDoc {
    automaton_to_doc(&AnyAutomaton::Cfva(c.clone()))
}

/// Canonical pretty-printed JSON, newline-terminated.
pub fn to_canonical_json(doc: &AutomatonDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<AutomatonDoc, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::short::*;
    use crate::automaton::Builder;

    fn a1_doc() -> AutomatonDoc {
        let fva = Builder::new()
            .initial("p0")
            .accepting("p0")
            .transition("p0", vr("x"), "p1")
            .transition("p1", vr("x"), "p0")
            .refresh("x", &["p0"])
            .fva();
        fva_to_doc(&fva)
    }

    #[test]
    fn roundtrip_is_byte_stable() {
        let doc = a1_doc();
        let json = to_canonical_json(&doc);
        let reparsed = parse_json(&json).unwrap();
        assert_eq!(doc, reparsed);
        assert_eq!(to_canonical_json(&reparsed), json);
    }

    #[test]
    fn variables_carry_prefix() {
        let doc = a1_doc();
        assert_eq!(doc.variables, vec!["$x".to_string()]);
        assert!(doc.refresh.contains_key("$x"));
    }

    #[test]
    fn cfva_with_two_initials_reports_violation() {
        let mut doc = a1_doc();
        doc.kind = "cfva".into();
        doc.initial = vec!["p0".into(), "p1".into()];
        doc.accepting = vec!["p0".into(), "p1".into()];
        // plain labels lack polarities, which is also reported
        let violations = validate_doc(&doc);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::SingleInitialRequired { found: 2 })));
    }

    #[test]
    fn fva_label_with_polarity_is_rejected() {
        let mut doc = a1_doc();
        if let LabelField::One(l) = &mut doc.transitions[0].label {
            l.polarity = Some("!".into());
        }
        assert!(!validate_doc(&doc).is_empty());
    }
}
