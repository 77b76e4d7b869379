use fva::automaton::short::*;
use fva::automaton::Builder;
use fva::closure::star;
use fva::run::sample_language;
use fva::wire;
use std::collections::BTreeSet;

fn main() {
    let a = Builder::new()
        .initial("q0")
        .accepting("qf")
        .transition("q0", vr("x"), "qf")
        .refresh("x", &["qf"])
        .fva();
    let s = star(&a);
    println!("{}", wire::to_canonical_json(&wire::fva_to_doc(&s)));
    let p: BTreeSet<_> = [letter("a"), letter("b")].into();
    for w in sample_language(&s, &p, 3) {
        println!("{:?}", w.iter().map(|l| l.to_string()).collect::<Vec<_>>());
    }
}
