//! Compilations between WAFA and tree automata composed with tree
//! homomorphisms, and the Nivat decomposition of the resulting WFTA.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::semiring::{Element, Semiring, SemiringOps};
use crate::tree::{word_tree, RankedAlphabet, Tree, TreeHomomorphism, END};
use crate::wafa::{fresh_name, Wafa};
use crate::wfta::{Dta, Wfta};

/// Result of compiling a WAFA into a WFTA over Σ^r_#.
#[derive(Clone, Debug)]
pub struct ToWfta {
    pub wfta: Wfta,
    pub rank: usize,
    /// The nice, equalized automaton the WFTA was read from.
    pub normalized: Wafa,
    /// For every WFTA state, the input state it stems from, if any.
    pub origin: Vec<Option<usize>>,
}

/// Compiles A into B with ⟦B⟧(t^r_w) = ⟦A⟧(w).
///
/// A monomial s·p_1···p_r of δ(q, a), with the p_i listed in state order,
/// becomes β_a((p_1..p_r), q) = s; every other tuple has weight zero.
pub fn wafa_to_wfta(a: &Wafa) -> Result<ToWfta> {
    let normalized = a.nice_equalized()?;
    let rank = normalized
        .equalized_degree()
        .expect("equalized automata have transitions") as usize;
    let sr = normalized.semiring().clone();
    let alphabet = RankedAlphabet::words(normalized.alphabet(), rank)?;
    let n = normalized.n();
    let mut root = vec![sr.zero(); n];
    root[0] = sr.one();
    let mut b = Wfta::new(sr, normalized.states().to_vec(), alphabet, root)?;
    for (q, tau) in normalized.finals().iter().enumerate() {
        b.set(END, &[], q, tau.clone())?;
    }
    for (q, row) in normalized.transitions().iter().enumerate() {
        for (l, p) in row.iter().enumerate() {
            let symbol = normalized.alphabet()[l].to_string();
            for m in p.terms() {
                let args: Vec<usize> = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize))
                    .collect();
                b.set(&symbol, &args, q, m.coeff().clone())?;
            }
        }
    }
    let origin = normalized
        .states()
        .iter()
        .map(|s| a.state_index(s))
        .collect();
    Ok(ToWfta {
        wfta: b,
        rank,
        normalized,
        origin,
    })
}

/// Builds a WAFA over the letters of h's (word-tree) source alphabet with
/// behavior w ↦ ⟦B⟧(h(w)).
pub fn wfta_hom_to_wafa(b: &Wfta, h: &TreeHomomorphism) -> Result<Wafa> {
    if !h.target().same_symbols(b.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "homomorphism targets {:?}, automaton reads {:?}",
            h.target().decls(),
            b.alphabet().decls()
        )));
    }
    let mut letters = Vec::new();
    for (name, rank) in h.source().symbols() {
        if name == END {
            if *rank != 0 {
                return Err(Error::InvalidHomomorphism("# must have rank 0".into()));
            }
            continue;
        }
        let mut chars = name.chars();
        match (chars.next(), chars.next(), rank) {
            (Some(c), None, 1) => letters.push(c),
            _ => {
                return Err(Error::InvalidHomomorphism(format!(
                    "source symbol {name}/{rank} is not a word letter"
                )))
            }
        }
    }
    let end = h
        .pattern(END)
        .ok_or_else(|| Error::InvalidHomomorphism("no pattern for #".into()))?;
    let sr = b.semiring().clone();
    let n = b.n();

    let end_table = b.extended_table(end)?;
    let finals: Vec<Element> = match end_table.get(&Vec::new()) {
        Some(v) => v.clone(),
        None => vec![sr.zero(); n],
    };
    let initial = Polynomial::from_terms(
        n,
        b.root_weights().iter().enumerate().map(|(i, l)| {
            let mut e = vec![0; n];
            e[i] = 1;
            (e, l.clone())
        }),
        &sr,
    );
    let mut delta = vec![Vec::with_capacity(letters.len()); n];
    for &c in &letters {
        let pattern = h.pattern(&c.to_string()).expect("source symbol");
        let table = b.extended_table(pattern)?;
        let mut raw: Vec<Vec<(Vec<u32>, Element)>> = vec![Vec::new(); n];
        for (leaves, values) in &table {
            let mut exps = vec![0u32; n];
            for &p in leaves {
                exps[p] = exps[p].checked_add(1).ok_or(Error::DegreeOverflow)?;
            }
            for (q, v) in values.iter().enumerate() {
                if !sr.is_zero(v) {
                    raw[q].push((exps.clone(), v.clone()));
                }
            }
        }
        for (q, terms) in raw.into_iter().enumerate() {
            delta[q].push(Polynomial::from_terms(n, terms, &sr));
        }
    }
    Wafa::new(sr, b.states().to_vec(), letters, delta, initial, finals)
}

/// `h1` followed by `h2`, as one tree homomorphism.
pub fn compose_homs(h1: &TreeHomomorphism, h2: &TreeHomomorphism) -> Result<TreeHomomorphism> {
    h1.then(h2)
}

impl Wafa {
    /// A WAFA over the source letters of `h` with behavior w ↦ ⟦A⟧(h(w)).
    /// `h` is the rank-1 tree homomorphism of a word homomorphism and may
    /// be deleting.
    pub fn inverse_word_hom(&self, h: &TreeHomomorphism) -> Result<Wafa> {
        let compiled = wafa_to_wfta(self)?;
        let generic = TreeHomomorphism::generic(self.alphabet(), compiled.rank)?;
        let composed = compose_homs(h, &generic)?;
        wfta_hom_to_wafa(&compiled.wfta, &composed)
    }

    /// h(A)(w) = Σ_{v ∈ h⁻¹(w)} ⟦A⟧(v) for a non-deleting word
    /// homomorphism h from A's letters, by explicit preimage enumeration
    /// (at most `cap` preimages).
    pub fn image_behavior(&self, h: &TreeHomomorphism, w: &[char], cap: usize) -> Result<Element> {
        let sr = self.semiring();
        let mut acc = sr.zero();
        for v in h.preimages(&word_tree(w), cap)? {
            let word = v
                .to_word()
                .ok_or_else(|| Error::InvalidHomomorphism("preimage is not a word".into()))?;
            acc = sr.add(&acc, &self.behavior(&word)?);
        }
        Ok(acc)
    }
}

/// A letter of the run alphabet: one nonzero transition of the WFTA, with
/// a flag for its root-marked copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLetter {
    pub symbol: String,
    pub args: Vec<usize>,
    pub target: usize,
    pub root: bool,
}

impl RunLetter {
    pub fn name(&self) -> String {
        let args: Vec<String> = self.args.iter().map(ToString::to_string).collect();
        format!(
            "{}[{}>{}]{}",
            self.symbol,
            args.join("."),
            self.target,
            if self.root { "^" } else { "" }
        )
    }
}

/// ⟦B⟧ = h(⟦A_w⟧ ⊙ χ_L) with a one-state A_w and a relabelling h.
#[derive(Clone, Debug)]
pub struct NivatDecomposition {
    pub rank: usize,
    pub source: Wfta,
    pub letters: Vec<RunLetter>,
    pub hom: TreeHomomorphism,
    pub consistency: Dta,
    pub weights: Wfta,
}

/// Decomposes the WFTA compiled from A.
pub fn nivat_decompose(a: &Wafa) -> Result<NivatDecomposition> {
    let compiled = wafa_to_wfta(a)?;
    let mut d = nivat_decompose_wfta(&compiled.wfta)?;
    d.rank = compiled.rank;
    Ok(d)
}

/// Decomposes an arbitrary WFTA. Run letters are its nonzero transitions;
/// the root-marked copies carry the root weight, and L admits them only at
/// the root.
pub fn nivat_decompose_wfta(b: &Wfta) -> Result<NivatDecomposition> {
    let sr = b.semiring().clone();
    let n = b.n();
    let mut letters = Vec::new();
    for root in [false, true] {
        for (symbol, args, target, _) in b.transitions() {
            letters.push(RunLetter {
                symbol: symbol.to_string(),
                args: args.to_vec(),
                target,
                root,
            });
        }
    }
    if letters.is_empty() {
        // keep Λ non-empty so that the alphabet is well defined; this
        // letter never occurs in any preimage
        let (name, rank) = b.alphabet().symbols()[0].clone();
        letters.push(RunLetter {
            symbol: name,
            args: vec![0; rank],
            target: 0,
            root: false,
        });
    }
    let run_alphabet =
        RankedAlphabet::new(letters.iter().map(|l| (l.name(), l.args.len())).collect())?;
    let patterns = letters
        .iter()
        .map(|l| {
            let children = (1..=l.args.len()).map(Tree::var).collect();
            (l.name(), Tree::node(l.symbol.clone(), children))
        })
        .collect();
    let hom = TreeHomomorphism::new(run_alphabet.clone(), b.alphabet().clone(), patterns)?;

    let top = n;
    let mut states = b.states().to_vec();
    let taken = states.iter().cloned().collect();
    states.push(fresh_name("root", &taken));
    let entries = letters
        .iter()
        .map(|l| {
            (
                l.name(),
                l.args.clone(),
                if l.root { top } else { l.target },
            )
        })
        .collect();
    let mut accepting = vec![false; n + 1];
    accepting[top] = true;
    let consistency = Dta::new(states, run_alphabet.clone(), entries, accepting, None)?;

    let mut weights = Wfta::new(sr.clone(), vec!["w".into()], run_alphabet, vec![sr.one()])?;
    for l in &letters {
        let mut w = b.weight(&l.symbol, &l.args, l.target);
        if l.root {
            w = sr.mul(&w, &b.root_weights()[l.target]);
        }
        weights.set(&l.name(), &vec![0; l.args.len()], 0, w)?;
    }
    let rank = b.alphabet().max_rank();
    Ok(NivatDecomposition {
        rank,
        source: b.clone(),
        letters,
        hom,
        consistency,
        weights,
    })
}

impl NivatDecomposition {
    /// h(⟦A_w⟧ ⊙ χ_L)(t), summing over the shared preimage forest of t.
    /// For every preimage node the pair (L state, A_w weight) is tracked,
    /// so no preimage is materialized.
    pub fn eval(&self, t: &Tree) -> Result<Element> {
        let sr = self.weights.semiring();
        let forest = self.hom.preimage_forest(t)?;
        let letter_weight: Vec<Element> = self
            .letters
            .iter()
            .map(|l| self.weights.weight(&l.name(), &vec![0; l.args.len()], 0))
            .collect();
        let letter_index: Vec<usize> = self
            .hom
            .source()
            .symbols()
            .iter()
            .map(|(name, _)| {
                self.letters
                    .iter()
                    .position(|l| &l.name() == name)
                    .expect("one letter per symbol")
            })
            .collect();
        let dta_index: Vec<usize> = self
            .hom
            .source()
            .symbols()
            .iter()
            .map(|(name, _)| {
                self.consistency
                    .alphabet()
                    .index_of(name)
                    .expect("same alphabet")
            })
            .collect();
        // forest nodes are stored children first
        let mut values: Vec<HashMap<usize, Element>> = Vec::with_capacity(forest.nodes.len());
        for node in &forest.nodes {
            let mut acc: HashMap<usize, Element> = HashMap::new();
            for (g, children) in &node.alternatives {
                let w = &letter_weight[letter_index[*g]];
                if sr.is_zero(w) {
                    continue;
                }
                let options: Vec<Vec<(&usize, &Element)>> = children
                    .iter()
                    .map(|&c| values[c].iter().collect())
                    .collect();
                let sizes: Vec<usize> = options.iter().map(Vec::len).collect();
                for combo in crate::tree::mixed_tuples(&sizes) {
                    let mut prod = w.clone();
                    let mut states = Vec::with_capacity(combo.len());
                    for (i, &j) in combo.iter().enumerate() {
                        let (s, x) = options[i][j];
                        states.push(*s);
                        prod = sr.mul(&prod, x);
                    }
                    let q = self.consistency.next(dta_index[*g], &states);
                    let slot = acc.entry(q).or_insert_with(|| sr.zero());
                    *slot = sr.add(slot, &prod);
                }
            }
            acc.retain(|_, v| !sr.is_zero(v));
            values.push(acc);
        }
        let accepting = self.consistency.accepting();
        Ok(values[forest.root]
            .iter()
            .filter(|(q, _)| accepting[**q])
            .fold(sr.zero(), |acc, (_, v)| sr.add(&acc, v)))
    }

    /// The same value by listing h⁻¹(t) explicitly and evaluating A_w and L
    /// on every preimage; fails when there are more than `cap` preimages.
    pub fn eval_enumerated(&self, t: &Tree, cap: usize) -> Result<Element> {
        let sr = self.weights.semiring();
        let mut acc = sr.zero();
        for s in self.hom.preimages(t, cap)? {
            if self.consistency.accepts(&s)? {
                acc = sr.add(&acc, &self.weights.behavior(&s)?);
            }
        }
        Ok(acc)
    }

    pub fn semiring(&self) -> &Semiring {
        self.weights.semiring()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tree::generic_tree;
    use crate::wafa::words_up_to;

    fn w(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn nat(n: u64) -> Element {
        Element::nat(n)
    }

    #[test]
    fn running_compiles_to_the_rank_two_automaton() {
        let c = wafa_to_wfta(&fixtures::running()).unwrap();
        assert_eq!(c.rank, 2);
        let b = &c.wfta;
        assert_eq!(b.alphabet().decls(), ["a/2", "b/2", "#/0"]);
        let (q, p, h) = (0, 1, 2);
        assert_eq!(b.weight("b", &[p, h], q), nat(1));
        assert_eq!(b.weight("b", &[h, p], q), nat(0));
        assert_eq!(b.weight("b", &[p, h], p), nat(2));
        assert_eq!(b.weight("#", &[], p), nat(2));
        assert_eq!(c.origin, [Some(0), Some(1), None]);
        assert_eq!(b.behavior(&generic_tree(&w("ab"), 2)).unwrap(), nat(4));
    }

    #[test]
    fn run_weights_on_a_small_tree() {
        // the only nonzero run on t²_ab: q at the root, q at both b-nodes,
        // and (p, h1) at the two leaf pairs
        let b = wafa_to_wfta(&fixtures::running()).unwrap().wfta;
        let (q, p, h) = (0, 1, 2);
        let run = [
            b.weight("a", &[q, q], q),
            b.weight("b", &[p, h], q),
            b.weight("#", &[], p),
            b.weight("#", &[], h),
            b.weight("b", &[p, h], q),
            b.weight("#", &[], p),
            b.weight("#", &[], h),
        ];
        assert_eq!(
            run,
            [nat(1), nat(1), nat(2), nat(1), nat(1), nat(2), nat(1)]
        );
        assert_eq!(Semiring::Nat.product(&run), nat(4));
    }

    #[test]
    fn wfa_compiles_to_rank_one() {
        let a = Wafa::from_text(
            Semiring::Nat,
            &["q"],
            "a",
            "x1",
            &[("q", 'a', "2*x1")],
            &["1"],
        )
        .unwrap();
        let c = wafa_to_wfta(&a).unwrap();
        assert_eq!(c.rank, 1);
        for word in words_up_to(&['a'], 5) {
            assert_eq!(
                c.wfta.behavior(&word_tree(&word)).unwrap(),
                a.behavior(&word).unwrap()
            );
        }
    }

    #[test]
    fn generic_round_trip() {
        let a = fixtures::running();
        let c = wafa_to_wfta(&a).unwrap();
        let h = TreeHomomorphism::generic(a.alphabet(), c.rank).unwrap();
        let back = wfta_hom_to_wafa(&c.wfta, &h).unwrap();
        for word in words_up_to(a.alphabet(), 5) {
            assert_eq!(back.behavior(&word).unwrap(), a.behavior(&word).unwrap());
        }
    }

    #[test]
    fn deleting_hom_gives_constant_behavior() {
        let c = wafa_to_wfta(&fixtures::running()).unwrap();
        let t0 = generic_tree(&w("ab"), 2);
        let source = RankedAlphabet::words(&['a', 'b'], 1).unwrap();
        let h = TreeHomomorphism::new(
            source,
            c.wfta.alphabet().clone(),
            vec![
                ("a".into(), Tree::var(1)),
                ("b".into(), Tree::var(1)),
                ("#".into(), t0.clone()),
            ],
        )
        .unwrap();
        let back = wfta_hom_to_wafa(&c.wfta, &h).unwrap();
        let want = c.wfta.behavior(&t0).unwrap();
        for word in words_up_to(&['a', 'b'], 3) {
            assert_eq!(back.behavior(&word).unwrap(), want);
        }
    }

    #[test]
    fn boolean_coefficients_stay_boolean() {
        let b = Wfta::from_text(
            Semiring::Bool,
            &["p", "q"],
            &["f/2", "#/0"],
            &["f(p,q) -> q", "f(q,p) -> q", "# -> p"],
            &[("q", "1")],
        )
        .unwrap();
        let source = RankedAlphabet::words(&['a'], 1).unwrap();
        let h = TreeHomomorphism::new(
            source,
            b.alphabet().clone(),
            vec![
                ("a".into(), "f(x1,f(x1,#))".parse().unwrap()),
                ("#".into(), "#".parse().unwrap()),
            ],
        )
        .unwrap();
        let back = wfta_hom_to_wafa(&b, &h).unwrap();
        assert_eq!(back.semiring(), &Semiring::Bool);
    }

    #[test]
    fn inverse_word_homs() {
        let a = fixtures::running();
        let id = TreeHomomorphism::from_word_map(
            &['a', 'b'],
            &['a', 'b'],
            &[('a', w("a")), ('b', w("b"))],
        )
        .unwrap();
        let same = a.inverse_word_hom(&id).unwrap();
        for word in words_up_to(&['a', 'b'], 5) {
            assert_eq!(same.behavior(&word).unwrap(), a.behavior(&word).unwrap());
        }
        let hc = TreeHomomorphism::from_word_map(&['c'], &['a', 'b'], &[('c', w("ab"))]).unwrap();
        assert_eq!(
            a.inverse_word_hom(&hc).unwrap().behavior(&w("cc")).unwrap(),
            nat(0)
        );
        let relabel = TreeHomomorphism::from_word_map(
            &['c', 'd'],
            &['a', 'b'],
            &[('c', w("a")), ('d', w("b"))],
        )
        .unwrap();
        assert_eq!(
            a.inverse_word_hom(&relabel)
                .unwrap()
                .behavior(&w("ccdd"))
                .unwrap(),
            nat(256)
        );
    }

    #[test]
    fn composing_word_hom_with_generic() {
        let hc = TreeHomomorphism::from_word_map(&['c'], &['a', 'b'], &[('c', w("ab"))]).unwrap();
        let g = TreeHomomorphism::generic(&['a', 'b'], 2).unwrap();
        let c = compose_homs(&hc, &g).unwrap();
        assert_eq!(c.pattern("c").unwrap().to_string(), "a(b(x1,x1),b(x1,x1))");
    }

    #[test]
    fn nivat_on_running() {
        let a = fixtures::running();
        let d = nivat_decompose(&a).unwrap();
        assert!(d.hom.is_linear() && d.hom.is_non_deleting());
        assert_eq!(d.weights.n(), 1);
        assert!(d.consistency.audit().is_ok());
        assert_eq!(d.eval(&generic_tree(&w("aabb"), 2)).unwrap(), nat(256));
        for word in words_up_to(a.alphabet(), 4) {
            assert_eq!(
                d.eval(&generic_tree(&word, d.rank)).unwrap(),
                a.behavior(&word).unwrap()
            );
        }
        let off: Tree = "a(#,b(#,#))".parse().unwrap();
        assert_eq!(d.eval(&off).unwrap(), d.source.behavior(&off).unwrap());
        assert_eq!(
            d.eval_enumerated(&off, 10_000).unwrap(),
            d.eval(&off).unwrap()
        );
    }

    #[test]
    fn nivat_on_zero_automaton() {
        let a = fixtures::running()
            .with_final(0, nat(0))
            .unwrap()
            .with_final(1, nat(0))
            .unwrap();
        let d = nivat_decompose(&a).unwrap();
        for word in words_up_to(a.alphabet(), 3) {
            assert_eq!(d.eval(&generic_tree(&word, d.rank)).unwrap(), nat(0));
        }
    }

    #[test]
    fn trees_without_preimages_evaluate_to_zero() {
        let b = Wfta::from_text(
            Semiring::Nat,
            &["q"],
            &["f/1", "#/0"],
            &["# -> q"],
            &[("q", "1")],
        )
        .unwrap();
        let d = nivat_decompose_wfta(&b).unwrap();
        assert_eq!(d.eval(&"f(#)".parse().unwrap()).unwrap(), nat(0));
        assert_eq!(d.eval(&"#".parse().unwrap()).unwrap(), nat(1));
    }
}
