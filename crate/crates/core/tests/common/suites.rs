//! Kill/protection and priority cases, shared by the unit-style tests and
//! the acceptance target.

use std::collections::HashSet;
use std::sync::Arc;

use cows_adapt::explorer::canonicalize;
use cows_adapt::semantics::Config;
use cows_adapt::syntax::parse_model;

pub const KILL: &[(&str, fn())] = &[
    ("kill_keeps_protected_invoke", kill_keeps_protected_invoke),
    ("inner_kill_leaves_outer_scope", inner_kill_leaves_outer_scope),
    ("outer_kill_reaches_nested_scopes", outer_kill_reaches_nested_scopes),
    ("protection_survives_with_its_continuation", protection_survives_with_its_continuation),
    ("protected_inside_killed_inside_protected", protected_inside_killed_inside_protected),
    ("kill_under_prefix_waits", kill_under_prefix_waits),
    ("kill_erases_choice_and_replication_body", kill_erases_choice_and_replication_body),
];

pub const PRIORITY: &[(&str, fn())] = &[
    ("literal_receive_beats_binding_receive", literal_receive_beats_binding_receive),
    ("most_literals_win_among_three", most_literals_win_among_three),
    ("equal_priority_receives_both_fire", equal_priority_receives_both_fire),
    ("priority_is_per_invoke", priority_is_per_invoke),
];

pub fn config(src: &str) -> Config {
    Config::initial(Arc::new(parse_model(src).unwrap()))
}

pub fn key(c: &Config) -> String {
    canonicalize(c).0
}

pub fn steps(c: &Config) -> Vec<(String, String)> {
    let mut out: Vec<_> = c
        .enabled_transitions()
        .steps
        .iter()
        .map(|(l, n)| (l.to_string(), key(n)))
        .collect();
    out.sort();
    out
}

pub fn labels(c: &Config) -> Vec<String> {
    steps(c).into_iter().map(|(l, _)| l).collect()
}

/// The single successor reached by `label`.
pub fn after(c: &Config, label: &str) -> Config {
    let mut found: Vec<Config> = c
        .enabled_transitions()
        .steps
        .into_iter()
        .filter(|(l, _)| l.to_string() == label)
        .map(|(_, n)| n)
        .collect();
    assert_eq!(found.len(), 1, "expected one `{}` step, got {:?}", label, labels(c));
    found.pop().unwrap()
}

pub fn same_state(c: &Config, src: &str) {
    assert_eq!(key(c), key(&config(src)), "state is {}", c.term);
}

pub fn kill_keeps_protected_invoke() {
    let c = config("let in [k] (kill(k) | a.b!<> | {| c.d!<> |}) | a.b?<>.nil | c.d?<>.nil end");
    assert_eq!(labels(&c), ["comm:a.b<>", "comm:c.d<>", "kill:k"]);
    let killed = after(&c, "kill:k");
    assert_eq!(labels(&killed), ["comm:c.d<>"]);
    same_state(&killed, "let in c.d!<> | a.b?<>.nil | c.d?<>.nil end");
}

pub fn inner_kill_leaves_outer_scope() {
    let c = config("let in [k] ([h] (kill(h) | a.b!<>) | c.d!<>) end");
    same_state(&after(&c, "kill:h"), "let in c.d!<> end");
}

pub fn outer_kill_reaches_nested_scopes() {
    let c = config("let in [k] (kill(k) | [h] (a.b!<> | kill(h) | {| c.d!<> |}) | e.f?<>.nil) end");
    same_state(&after(&c, "kill:k"), "let in c.d!<> end");
}

pub fn protection_survives_with_its_continuation() {
    let c = config("let in [k] (kill(k) | {| a.b?<>.c.d!<> |} | e.f!<>) | a.b!<> end");
    let c = after(&c, "kill:k");
    same_state(&c, "let in a.b?<>.c.d!<> | a.b!<> end");
    same_state(&after(&c, "comm:a.b<>"), "let in c.d!<> end");
}

pub fn protected_inside_killed_inside_protected() {
    let c = config("let in {| [k] (kill(k) | {| a.b!<> |} | c.d!<>) |} | [h] (kill(h) | e.f!<>) end");
    let c = after(&c, "kill:k");
    same_state(&c, "let in {| a.b!<> |} | [h] (kill(h) | e.f!<>) end");
    same_state(&after(&c, "kill:h"), "let in {| a.b!<> |} end");
}

pub fn kill_under_prefix_waits() {
    let c = config("let in [k] (a.b?<>.kill(k) | c.d!<>) | a.b!<> end");
    assert_eq!(labels(&c), ["comm:a.b<>"]);
    let c = after(&c, "comm:a.b<>");
    same_state(&after(&c, "kill:k"), "let in nil end");
}

pub fn kill_erases_choice_and_replication_body() {
    let c = config("let in [k] (kill(k) | (a.b?<>.nil + c.d?<>.nil) | * {| e.f!<> |}) end");
    same_state(&after(&c, "kill:k"), "let in * e.f!<> end");
}

pub fn literal_receive_beats_binding_receive() {
    let c = config("let in a.b!<1> | [X] a.b?<X>.c.d!<> | a.b?<1>.e.f!<> end");
    let ss = steps(&c);
    assert_eq!(ss.len(), 1);
    same_state(&after(&c, "comm:a.b<1>"), "let in [X] a.b?<X>.c.d!<> | e.f!<> end");
}

pub fn most_literals_win_among_three() {
    let c = config("let in a.b!<1,2> | [X][Y] a.b?<X,Y>.c.d!<> | [X] a.b?<1,X>.e.f!<> | a.b?<1,2>.g.h!<> end");
    assert_eq!(steps(&c).len(), 1);
    let n = after(&c, "comm:a.b<1,2>");
    assert!(n.term.to_string().contains("g.h!<>"));
    same_state(
        &n,
        "let in [X][Y] a.b?<X,Y>.c.d!<> | [X] a.b?<1,X>.e.f!<> | g.h!<> end",
    );
}

pub fn equal_priority_receives_both_fire() {
    let c = config("let in a.b!<1,2> | [X] a.b?<1,X>.c.d!<> | [Y] a.b?<Y,2>.e.f!<> | [X][Y] a.b?<X,Y>.nil end");
    let ss = steps(&c);
    assert_eq!(ss.len(), 2);
    let keys: HashSet<_> = ss.iter().map(|(_, k)| k.clone()).collect();
    assert!(keys.contains(&key(&config(
        "let in c.d!<> | [Y] a.b?<Y,2>.e.f!<> | [X][Y] a.b?<X,Y>.nil end"
    ))));
    assert!(keys.contains(&key(&config(
        "let in [X] a.b?<1,X>.c.d!<> | e.f!<> | [X][Y] a.b?<X,Y>.nil end"
    ))));
}

pub fn priority_is_per_invoke() {
    let c = config("let in a.b!<1> | a.b!<2> | * [X] a.b?<X>.c.d!<X> | * a.b?<1>.e.f!<> end");
    let ss = steps(&c);
    assert_eq!(ss.len(), 2, "{:?}", ss);
    let n1 = after(&c, "comm:a.b<1>");
    assert!(n1.term.to_string().contains("e.f!<>"));
    assert!(!n1.term.to_string().contains("c.d!<1>"));
    let n2 = after(&c, "comm:a.b<2>");
    assert!(n2.term.to_string().contains("c.d!<2>"));
}
