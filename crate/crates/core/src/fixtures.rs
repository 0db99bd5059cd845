//! Automata shared by the tests and the shipped fixture files.

use crate::pa::PolyAutomaton;
use crate::semiring::{Element, Semiring};
use crate::tree::TreeHomomorphism;
use crate::wafa::Wafa;

/// States (q, p) over {a, b}: P_0 = q, δ(q,a) = q², δ(q,b) = p,
/// δ(p,b) = 2p, τ = (1, 2). Its behavior is (2^j)^(2^i) on a^i b^j and 0
/// elsewhere.
pub fn running() -> Wafa {
    Wafa::from_text(
        Semiring::Nat,
        &["q", "p"],
        "ab",
        "x1",
        &[("q", 'a', "x1^2"), ("q", 'b', "x2"), ("p", 'b', "2*x2")],
        &["1", "2"],
    )
    .expect("well-formed fixture")
}

/// [`running`] over ℚ.
pub fn running_rat() -> Wafa {
    running()
        .to_rationals()
        .expect("naturals embed into rationals")
}

/// [`running`] over ℚ with τ(p) = 3; the two first differ on `b`.
pub fn running_perturbed() -> Wafa {
    running_rat()
        .with_final(1, Element::rat(3, 1))
        .expect("state p exists")
}

/// Over 𝔹[x] with letters a, $, c, d: a^i $ c^k d^l ↦ x^(ki), everything
/// else ↦ 0. State A multiplies in one copy of the c-counter E per a.
pub fn witness_r() -> Wafa {
    Wafa::from_text(
        Semiring::poly(Semiring::Bool, 1),
        &["A", "E", "C", "F", "D"],
        "a$cd",
        "x1",
        &[
            ("A", 'a', "x1*x2"),
            ("A", '$', "x4"),
            ("E", 'a', "x2"),
            ("E", '$', "x3"),
            ("C", 'c', "(x1)*x3"),
            ("C", 'd', "x5"),
            ("F", 'c', "x4"),
            ("F", 'd', "x5"),
            ("D", 'd', "x5"),
        ],
        &["0", "0", "1", "1", "1"],
    )
    .expect("well-formed fixture")
}

/// The word homomorphism c, d ↦ b fixing a and $, as a rank-1 tree
/// homomorphism.
pub fn witness_hom() -> TreeHomomorphism {
    TreeHomomorphism::from_word_map(
        &['a', '$', 'c', 'd'],
        &['a', '$', 'b'],
        &[
            ('a', vec!['a']),
            ('$', vec!['$']),
            ('c', vec!['b']),
            ('d', vec!['b']),
        ],
    )
    .expect("well-formed fixture")
}

/// A one-letter automaton whose output is first nonzero at length 7 while
/// its saturation generators have degree 1 + 2^k at depth k: a shift
/// register y1..y8 that releases a 1 after seven steps, times a squaring
/// register z.
pub fn stress_pa() -> PolyAutomaton {
    PolyAutomaton::from_text(
        Semiring::Rat,
        "a",
        &["0", "0", "0", "0", "0", "0", "0", "1", "2"],
        &[(
            'a',
            &["x2", "x3", "x4", "x5", "x6", "x7", "x8", "x8", "x9^2"],
        )],
        "x1*x9",
    )
    .expect("well-formed fixture")
}

/// w ↦ 2^|w| with a single doubling state.
pub fn doubling_single() -> PolyAutomaton {
    PolyAutomaton::from_text(Semiring::Rat, "a", &["1"], &[('a', &["2*x1"])], "x1")
        .expect("fixture")
}

/// w ↦ 2^|w| as the sum of two halves that both take the total each step.
pub fn doubling_split() -> PolyAutomaton {
    PolyAutomaton::from_text(
        Semiring::Rat,
        "a",
        &["1/2", "1/2"],
        &[('a', &["x1 + x2", "x1 + x2"])],
        "x1 + x2",
    )
    .expect("fixture")
}

fn pa(alphabet: &str, initial: &[&str], maps: &[(char, &[&str])], output: &str) -> PolyAutomaton {
    PolyAutomaton::from_text(Semiring::Rat, alphabet, initial, maps, output).expect("fixture")
}

/// Rational polynomial automata with constantly zero behavior.
pub fn zero_fixtures() -> Vec<(&'static str, PolyAutomaton)> {
    let ex = running_rat();
    let zero_tau = ex
        .with_final(0, Element::rat(0, 1))
        .and_then(|a| a.with_final(1, Element::rat(0, 1)))
        .expect("fixture");
    vec![
        ("running with zero final weights", zero_tau.to_pa()),
        (
            "zero output",
            pa(
                "ab",
                &["1", "2"],
                &[('a', &["x1^2", "x2"]), ('b', &["x2", "x1"])],
                "0",
            ),
        ),
        (
            "squaring from zero",
            pa("a", &["0"], &[('a', &["x1^2"])], "x1"),
        ),
        (
            "running minus itself",
            ex.to_pa().difference(&ex.to_pa()).expect("fixture"),
        ),
        (
            "twin registers",
            pa(
                "ab",
                &["1", "1"],
                &[('a', &["2*x1", "2*x2"]), ('b', &["x1^2", "x2^2"])],
                "x1 - x2",
            ),
        ),
        (
            "opposite registers",
            pa(
                "ab",
                &["1", "-1"],
                &[('a', &["x1^2", "-x2^2"]), ('b', &["3*x1", "3*x2"])],
                "x1 + x2",
            ),
        ),
        (
            "doubling encodings",
            doubling_single()
                .difference(&doubling_split())
                .expect("fixture"),
        ),
        (
            "nilpotent pair",
            pa("a", &["1", "0"], &[('a', &["x2", "0"])], "x1*x2"),
        ),
        (
            "absorbing zero register",
            pa(
                "a",
                &["1", "1", "0"],
                &[('a', &["x1*x2", "x2^2", "x3*x1"])],
                "x3",
            ),
        ),
        (
            "rational proportion",
            pa(
                "a",
                &["1/2", "1/3"],
                &[('a', &["x1 + x2", "2/3*x1 + 2/3*x2"])],
                "2*x1 - 3*x2",
            ),
        ),
    ]
}

/// Rational polynomial automata with a nonzero value, and the length of
/// their shortest nonzero word.
pub fn nonzero_fixtures() -> Vec<(&'static str, PolyAutomaton, usize)> {
    let ex = running_rat();
    vec![
        ("running", ex.to_pa(), 0),
        ("running perturbed", running_perturbed().to_pa(), 0),
        ("doubling", doubling_single(), 0),
        (
            "counter from zero",
            pa("a", &["0"], &[('a', &["x1 + 1"])], "x1"),
            1,
        ),
        (
            "opposite registers broken by b",
            pa(
                "ab",
                &["1", "-1"],
                &[('a', &["x1^2", "-x2^2"]), ('b', &["x1", "x2^2"])],
                "x1 + x2",
            ),
            1,
        ),
        (
            "shift register",
            pa("a", &["0", "0", "1"], &[('a', &["x2", "x3", "x3"])], "x1"),
            2,
        ),
        (
            "running against its perturbation",
            ex.to_pa()
                .difference(&running_perturbed().to_pa())
                .expect("fixture"),
            1,
        ),
        (
            "running squared",
            ex.hadamard(&ex).expect("fixture").to_pa(),
            0,
        ),
        (
            "affine drift",
            pa("a", &["1/2"], &[('a', &["2*x1 - 1"])], "x1 - 1/2"),
            1,
        ),
        (
            "swap",
            pa(
                "ab",
                &["1", "0"],
                &[('a', &["x1", "x2"]), ('b', &["x2", "x1"])],
                "x2",
            ),
            1,
        ),
    ]
}
