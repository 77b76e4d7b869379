//! Shipped example automata, also available as JSON under `fixtures/`.

use crate::automaton::short::*;
use crate::automaton::{Builder, Cfva, Fva, NFva};

/// Two-state loop on a variable refreshed at `p0`; accepts the words
/// `a1 a1 a2 a2 ... an an`.
pub fn a1() -> Fva {
    Builder::new()
        .initial("p0")
        .accepting("p0")
        .transition("p0", vr("x"), "p1")
        .transition("p1", vr("x"), "p0")
        .refresh("x", &["p0"])
        .fva()
}

/// Accepts the words in which some letter appears at least twice: `y` pins
/// the repeated letter, `z` loops over everything else and is refreshed at
/// every state it loops on.
pub fn a2() -> Fva {
    Builder::new()
        .initial("q0")
        .accepting("q2")
        .transition("q0", vr("z"), "q0")
        .transition("q0", vr("y"), "q1")
        .transition("q1", vr("z"), "q1")
        .transition("q1", vr("y"), "q2")
        .transition("q2", vr("z"), "q2")
        .refresh("z", &["q0", "q1", "q2"])
        .fva()
}

/// The appendix 2-FVA with labels `(a,y)` and `(x,y)`, `y` refreshed
/// everywhere and `x` never; accepts `(az)^n` for a fixed `z`, plus the
/// empty word since `q0` is accepting.
pub fn appendix_two_fva() -> NFva {
    Builder::new()
        .initial("q0")
        .accepting("q0")
        .transition("q0", tup(vec![lt("a"), vr("y")]), "q1")
        .transition("q1", tup(vec![vr("x"), vr("y")]), "q0")
        .refresh("y", &["q0", "q1"])
        .variable("x")
        .nfva(2)
}

/// The receive-only CFVA of the simulation-game figure: a cycle on `?x ?y`
/// with `?x`/`?z` exits, `x` refreshed at `p1` and `y` at `p0`.
pub fn fig_sim_client() -> Cfva {
    Builder::new()
        .initial("p0")
        .accepting("p0")
        .accepting("p1")
        .accepting("p2")
        .transition("p0", rcv(vr("x")), "p1")
        .transition("p1", rcv(vr("y")), "p2")
        .transition("p2", rcv(vr("x")), "p1")
        .transition("p2", rcv(vr("z")), "p0")
        .refresh("x", &["p1"])
        .refresh("y", &["p0"])
        .variable("z")
        .cfva()
}

/// The send-only CFVA of the same figure: `!a` loop on `q0`, `!b`/`!c`
/// round trip to `q1`.
pub fn fig_sim_service() -> Cfva {
    Builder::new()
        .initial("q0")
        .accepting("q0")
        .accepting("q1")
        .transition("q0", snd(lt("a")), "q0")
        .transition("q0", snd(lt("b")), "q1")
        .transition("q1", snd(lt("c")), "q0")
        .cfva()
}

// The CART example. Parameterized messages are encoded in the flat
// subclass: `f(arg1,..)` becomes the tag letter `f` followed by one label
// per argument, all with the message's polarity.

/// CLIENT of the CART example: create a cart, search and add items, close
/// the cart. `y` (the cart) is refreshed at `p0`, `x` (the item) at `p1`.
pub fn cart_client() -> Cfva {
    Builder::new()
        .initial("p0")
        .accepting("p0")
        .accepting("p0a")
        .accepting("p1")
        .accepting("p1a")
        .accepting("p1b")
        .accepting("p2")
        .accepting("p2a")
        .accepting("p3")
        .accepting("p3a")
        .accepting("p3b")
        .transition("p0", snd(lt("Create_Cart")), "p0a")
        .transition("p0a", snd(vr("y")), "p1")
        .transition("p1", snd(lt("Search")), "p1a")
        .transition("p1a", snd(vr("x")), "p2")
        .transition("p2", rcv(lt("Fail")), "p1")
        .transition("p2", rcv(lt("Num")), "p2a")
        .transition("p2a", rcv(vr("x")), "p3")
        .transition("p3", snd(lt("Add_Cart")), "p3a")
        .transition("p3a", snd(vr("y")), "p3b")
        .transition("p3b", snd(vr("x")), "p1")
        .transition("p1", rcv(lt("End_Cart")), "p1b")
        .transition("p1b", rcv(vr("y")), "p0")
        .refresh("y", &["p0"])
        .refresh("x", &["p1"])
        .cfva()
}

/// CART service: receives a cart creation, item additions, and announces
/// the cart closure. `z` (the cart) is refreshed at `q0`, `u` (the item)
/// at `q1`.
pub fn cart_service() -> Cfva {
    Builder::new()
        .initial("q0")
        .accepting("q0")
        .accepting("q0a")
        .accepting("q1")
        .accepting("q1a")
        .accepting("q1b")
        .accepting("q1c")
        .transition("q0", rcv(lt("Create_Cart")), "q0a")
        .transition("q0a", rcv(vr("z")), "q1")
        .transition("q1", rcv(lt("Add_Cart")), "q1a")
        .transition("q1a", rcv(vr("z")), "q1b")
        .transition("q1b", rcv(vr("u")), "q1")
        .transition("q1", snd(lt("End_Cart")), "q1c")
        .transition("q1c", snd(vr("z")), "q0")
        .refresh("z", &["q0"])
        .refresh("u", &["q1"])
        .cfva()
}

/// SEARCH service: answers a search request with the item count or a
/// failure. `w` is refreshed at `r0`.
pub fn search_service() -> Cfva {
    Builder::new()
        .initial("r0")
        .accepting("r0")
        .accepting("r0a")
        .accepting("r1")
        .accepting("r1a")
        .transition("r0", rcv(lt("Search")), "r0a")
        .transition("r0a", rcv(vr("w")), "r1")
        .transition("r1", snd(lt("Num")), "r1a")
        .transition("r1a", snd(vr("w")), "r0")
        .transition("r1", snd(lt("Fail")), "r0")
        .refresh("w", &["r0"])
        .cfva()
}

/// Recognizes `{z | z a letter} + {a b}`; no deterministic FVA recognizes
/// this language, and this automaton is itself nondeterministic at `s0`.
pub fn dfva_counterexample() -> Fva {
    Builder::new()
        .initial("s0")
        .accepting("sf")
        .transition("s0", vr("x"), "sf")
        .transition("s0", lt("a"), "s1")
        .transition("s1", lt("b"), "sf")
        .fva()
}

/// The choreography monitor: alternates a receive with the matching send
/// (or the converse), refreshing its variable on every return to `p0`.
pub fn choreography_monitor() -> Cfva {
    Builder::new()
        .initial("p0")
        .accepting("p0")
        .accepting("p1")
        .accepting("p2")
        .transition("p0", rcv(vr("x")), "p1")
        .transition("p1", snd(vr("x")), "p0")
        .transition("p0", snd(vr("x")), "p2")
        .transition("p2", rcv(vr("x")), "p0")
        .refresh("x", &["p0"])
        .cfva()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        a1();
        a2();
        appendix_two_fva();
        fig_sim_client();
        fig_sim_service();
        cart_client();
        cart_service();
        search_service();
        dfva_counterexample();
        choreography_monitor();
    }
}
