//! Seeded random generators and independent oracles shared by the
//! integration tests and the acceptance suite.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alterweight::semiring::SemiringOps;
use alterweight::tree::{Label, RankedAlphabet};
use alterweight::wfta::Dta;
use alterweight::{Element, Polynomial, Semiring, Tree, TreeHomomorphism, Wafa, Wfta};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---- random data ----

pub fn element(rng: &mut ChaCha8Rng, sr: &Semiring) -> Element {
    match sr {
        Semiring::Nat => Element::nat(rng.gen_range(0..4)),
        Semiring::Rat => Element::rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
        Semiring::Bool => Element::Bool(rng.gen_bool(0.6)),
        Semiring::MinPlus => match rng.gen_range(0..5) {
            0 => Element::MinPlus(None),
            k => Element::MinPlus(Some(num_bigint::BigUint::from(k as u32 - 1))),
        },
        Semiring::Poly { base, vars } => {
            let p = polynomial(rng, *vars, base, 1, 2, true);
            Element::Poly(p)
        }
    }
}

pub fn nonzero_element(rng: &mut ChaCha8Rng, sr: &Semiring) -> Element {
    loop {
        let e = element(rng, sr);
        if !sr.is_zero(&e) {
            return e;
        }
    }
}

/// A polynomial with at most `max_terms` terms of degree at most
/// `max_deg`; constants only if `constants`.
pub fn polynomial(
    rng: &mut ChaCha8Rng,
    n: usize,
    sr: &Semiring,
    max_deg: u32,
    max_terms: usize,
    constants: bool,
) -> Polynomial {
    let k = rng.gen_range(0..=max_terms);
    let mut terms = Vec::new();
    for _ in 0..k {
        let mut exps = vec![0u32; n];
        let lo = u32::from(!constants);
        let deg = rng.gen_range(lo..=max_deg);
        for _ in 0..deg {
            exps[rng.gen_range(0..n)] += 1;
        }
        terms.push((exps, nonzero_element(rng, sr)));
    }
    Polynomial::from_terms(n, terms, sr)
}

pub const SEMIRINGS: [Semiring; 3] = [Semiring::Nat, Semiring::Rat, Semiring::Bool];

/// At most three states, at most two letters, transitions of degree at
/// most two. The initial polynomial is linear unless `quadratic_initial`.
pub fn wafa(rng: &mut ChaCha8Rng, sr: &Semiring, quadratic_initial: bool) -> Wafa {
    let n = rng.gen_range(1..=3);
    let letters: Vec<char> = if rng.gen_bool(0.5) {
        vec!['a']
    } else {
        vec!['a', 'b']
    };
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut delta = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(letters.len());
        for _ in &letters {
            let constants = rng.gen_bool(0.3);
            row.push(polynomial(rng, n, sr, 2, 3, constants));
        }
        delta.push(row);
    }
    let init_deg = if quadratic_initial { 2 } else { 1 };
    let constants = rng.gen_bool(0.2);
    let initial = polynomial(rng, n, sr, init_deg, 2, constants);
    let finals = (0..n).map(|_| element(rng, sr)).collect();
    Wafa::new(sr.clone(), states, letters, delta, initial, finals)
        .expect("generator is well formed")
}

/// The two-symbol alphabets used for tree-level checks.
pub fn small_alphabet(rng: &mut ChaCha8Rng) -> RankedAlphabet {
    let decls: &[&str] = match rng.gen_range(0..3) {
        0 => &["f/2", "c/0"],
        1 => &["g/1", "c/0"],
        _ => &["f/2", "g/1", "c/0"],
    };
    RankedAlphabet::parse_decls(decls).unwrap()
}

/// A WFTA whose tables have roughly `density` of their entries nonzero.
pub fn wfta(rng: &mut ChaCha8Rng, sr: &Semiring, alphabet: &RankedAlphabet, density: f64) -> Wfta {
    let n = rng.gen_range(1..=3);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let root = (0..n).map(|_| element(rng, sr)).collect();
    let mut b = Wfta::new(sr.clone(), states, alphabet.clone(), root).unwrap();
    for (name, rank) in alphabet.symbols() {
        for args in alterweight::tree::tuples(n, *rank) {
            for q in 0..n {
                if rng.gen_bool(density) {
                    b.set(name, &args, q, nonzero_element(rng, sr)).unwrap();
                }
            }
        }
    }
    b
}

/// A random term over `alphabet` with variables x1..x`vars`, of height at
/// most `height`.
pub fn pattern(
    rng: &mut ChaCha8Rng,
    alphabet: &RankedAlphabet,
    vars: usize,
    height: usize,
) -> Tree {
    let leaves: Vec<&(String, usize)> = alphabet.symbols().iter().filter(|s| s.1 == 0).collect();
    let inner: Vec<&(String, usize)> = alphabet.symbols().iter().filter(|s| s.1 > 0).collect();
    if height == 0 || inner.is_empty() || rng.gen_bool(0.35) {
        if vars > 0 && rng.gen_bool(0.7) {
            return Tree::var(rng.gen_range(1..=vars));
        }
        return Tree::leaf(leaves.choose(rng).unwrap().0.clone());
    }
    let (name, rank) = inner.choose(rng).unwrap();
    let children = (0..*rank)
        .map(|_| pattern(rng, alphabet, vars, height - 1))
        .collect();
    Tree::node(name.clone(), children)
}

/// A homomorphism from `source` into `target`; may be deleting and
/// non-linear.
pub fn hom(
    rng: &mut ChaCha8Rng,
    source: &RankedAlphabet,
    target: &RankedAlphabet,
) -> TreeHomomorphism {
    let patterns = source
        .symbols()
        .iter()
        .map(|(name, rank)| (name.clone(), pattern(rng, target, *rank, 2)))
        .collect();
    TreeHomomorphism::new(source.clone(), target.clone(), patterns).unwrap()
}

/// A complete DTA with 1..=3 states and random accepting set.
pub fn dta(rng: &mut ChaCha8Rng, alphabet: &RankedAlphabet) -> Dta {
    let n = rng.gen_range(1..=3);
    let states: Vec<String> = (0..n).map(|i| format!("d{i}")).collect();
    let mut entries = Vec::new();
    for (name, rank) in alphabet.symbols() {
        for args in alterweight::tree::tuples(n, *rank) {
            entries.push((name.clone(), args, rng.gen_range(0..n)));
        }
    }
    let accepting = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    Dta::new(states, alphabet.clone(), entries, accepting, None).unwrap()
}

/// Word homomorphism images: each letter of `source` maps to a word of
/// length 0..=2 over `target`.
pub fn word_images(
    rng: &mut ChaCha8Rng,
    source: &[char],
    target: &[char],
) -> Vec<(char, Vec<char>)> {
    source
        .iter()
        .map(|&c| {
            let len = rng.gen_range(0..=2);
            (c, (0..len).map(|_| *target.choose(rng).unwrap()).collect())
        })
        .collect()
}

// ---- oracles ----

fn eval_poly(p: &Polynomial, values: &[Element], sr: &Semiring) -> Element {
    let mut acc = sr.zero();
    for m in p.terms() {
        let mut t = m.coeff().clone();
        for (i, &k) in m.exponents().iter().enumerate() {
            for _ in 0..k {
                t = sr.mul(&t, &values[i]);
            }
        }
        acc = sr.add(&acc, &t);
    }
    acc
}

/// ⟦A⟧(w) straight from the definition: the state vector for the suffix
/// starting at position i, by recursion on i.
pub fn wafa_behavior(a: &Wafa, w: &[char]) -> Element {
    fn vector(a: &Wafa, w: &[char]) -> Vec<Element> {
        match w.split_first() {
            None => a.finals().to_vec(),
            Some((c, rest)) => {
                let k = a.alphabet().iter().position(|x| x == c).expect("letter");
                let v = vector(a, rest);
                (0..a.n())
                    .map(|q| eval_poly(a.delta(q, k), &v, a.semiring()))
                    .collect()
            }
        }
    }
    eval_poly(a.initial(), &vector(a, w), a.semiring())
}

/// Σ over all runs r: pos(t) → Q of λ(r(ε)) · Π_u δ(r(children of u), r(u)),
/// enumerating runs top-down through nonzero entries only.
pub fn wfta_runs(b: &Wfta, t: &Tree) -> Element {
    let sr = b.semiring();
    // run weights of the subtree t rooted in state q
    fn runs(b: &Wfta, t: &Tree, q: usize) -> Vec<Element> {
        let sr = b.semiring();
        let symbol = t.symbol().expect("ground tree");
        let mut out = Vec::new();
        for (g, args, target, w) in b.transitions() {
            if g != symbol || target != q || args.len() != t.children().len() {
                continue;
            }
            let mut partial = vec![w.clone()];
            for (child, &p) in t.children().iter().zip(args) {
                let below = runs(b, child, p);
                partial = partial
                    .iter()
                    .flat_map(|x| below.iter().map(move |y| sr.mul(x, y)))
                    .collect();
            }
            out.extend(partial);
        }
        out
    }
    let mut acc = sr.zero();
    for q in 0..b.n() {
        for r in runs(b, t, q) {
            acc = sr.add(&acc, &sr.mul(&b.root_weights()[q], &r));
        }
    }
    acc
}

/// h(t) by direct recursion.
pub fn apply_hom(h: &TreeHomomorphism, t: &Tree) -> Tree {
    fn subst(p: &Tree, args: &[Tree]) -> Tree {
        match p.label() {
            Label::Var(i) => args[i - 1].clone(),
            Label::Symbol(s) => Tree::node(
                s.clone(),
                p.children().iter().map(|c| subst(c, args)).collect(),
            ),
        }
    }
    let symbol = t.symbol().expect("ground tree");
    let args: Vec<Tree> = t.children().iter().map(|c| apply_hom(h, c)).collect();
    subst(h.pattern(symbol).expect("source symbol"), &args)
}

/// The word tree of w: w1(w2(...wn(#))).
pub fn word_tree(w: &[char]) -> Tree {
    w.iter()
        .rev()
        .fold(Tree::leaf("#"), |t, c| Tree::node(c.to_string(), vec![t]))
}

/// The full r-ary tree of w with # leaves.
pub fn full_tree(w: &[char], r: usize) -> Tree {
    w.iter().rev().fold(Tree::leaf("#"), |t, c| {
        Tree::node(c.to_string(), vec![t; r])
    })
}

/// All words of length at most `max_len` in length-lexicographic order.
pub fn words(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out: Vec<Vec<char>> = vec![vec![]];
    let mut start = 0;
    for _ in 0..max_len {
        let end = out.len();
        for i in start..end {
            for &c in alphabet {
                let mut w = out[i].clone();
                w.push(c);
                out.push(w);
            }
        }
        start = end;
    }
    out
}

/// Ground trees of height at most `h`, built independently of the library.
pub fn trees(alphabet: &RankedAlphabet, h: usize) -> Vec<Tree> {
    if h == 0 {
        return alphabet
            .symbols()
            .iter()
            .filter(|s| s.1 == 0)
            .map(|s| Tree::leaf(s.0.clone()))
            .collect();
    }
    let smaller = trees(alphabet, h - 1);
    let mut out = Vec::new();
    for (name, rank) in alphabet.symbols() {
        let mut combos: Vec<Vec<Tree>> = vec![vec![]];
        for _ in 0..*rank {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    smaller.iter().map(move |t| {
                        let mut c = c.clone();
                        c.push(t.clone());
                        c
                    })
                })
                .collect();
        }
        out.extend(combos.into_iter().map(|c| Tree::node(name.clone(), c)));
    }
    out
}
