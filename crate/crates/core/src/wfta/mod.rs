//! Weighted bottom-up finite tree automata.

mod dta;
mod step;

pub use dta::Dta;
pub use step::StepFunction;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::semiring::{Element, Semiring, SemiringOps};
use crate::tree::{Label, RankedAlphabet, Tree};

/// Transition table of one symbol: (p̄, q) ↦ weight, nonzero entries only.
pub type Table = BTreeMap<(Vec<usize>, usize), Element>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wfta {
    semiring: Semiring,
    states: Vec<String>,
    alphabet: RankedAlphabet,
    /// One table per symbol, in alphabet order.
    tables: Vec<Table>,
    root: Vec<Element>,
}

/// Leaf-state tuple ↦ per-state values of δ′ for a pattern.
pub type ExtendedTable = BTreeMap<Vec<usize>, Vec<Element>>;

impl Wfta {
    /// An automaton with no transitions and the given root weights.
    pub fn new(
        semiring: Semiring,
        states: Vec<String>,
        alphabet: RankedAlphabet,
        root: Vec<Element>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = states.iter().find(|s| s.is_empty() || !seen.insert(*s)) {
            return Err(Error::InvalidAutomaton(format!(
                "bad or duplicate state {dup:?}"
            )));
        }
        if root.len() != states.len() {
            return Err(Error::ArityMismatch {
                expected: states.len(),
                found: root.len(),
            });
        }
        for r in &root {
            semiring.check_element(r)?;
        }
        let tables = vec![Table::new(); alphabet.len()];
        Ok(Wfta {
            semiring,
            states,
            alphabet,
            tables,
            root,
        })
    }

    /// Builds an automaton from rules such as `a(q,p) -> q : 2`; a missing
    /// weight means one.
    pub fn from_text(
        semiring: Semiring,
        states: &[&str],
        decls: &[&str],
        rules: &[&str],
        root: &[(&str, &str)],
    ) -> Result<Self> {
        let alphabet = RankedAlphabet::parse_decls(decls)?;
        let states: Vec<String> = states.iter().map(ToString::to_string).collect();
        let mut lambda = vec![semiring.zero(); states.len()];
        for (q, w) in root {
            let i = index_of(&states, q)?;
            lambda[i] = semiring.parse_element(w)?;
        }
        let mut b = Wfta::new(semiring, states, alphabet, lambda)?;
        for r in rules {
            let rule = Rule::parse(r)?;
            let args = rule
                .args
                .iter()
                .map(|a| index_of(&b.states, a))
                .collect::<Result<Vec<_>>>()?;
            let q = index_of(&b.states, &rule.target)?;
            let w = match &rule.weight {
                Some(w) => b.semiring.parse_element(w)?,
                None => b.semiring.one(),
            };
            b.set(&rule.symbol, &args, q, w)?;
        }
        Ok(b)
    }

    /// Sets δ_g(p̄, q); a zero weight removes the entry.
    pub fn set(&mut self, symbol: &str, args: &[usize], q: usize, w: Element) -> Result<()> {
        let g = self
            .alphabet
            .index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        let rank = self.alphabet.symbols()[g].1;
        if args.len() != rank {
            return Err(Error::RankMismatch {
                symbol: symbol.to_string(),
                expected: rank,
                found: args.len(),
            });
        }
        let n = self.states.len();
        if let Some(bad) = args.iter().chain(std::iter::once(&q)).find(|&&i| i >= n) {
            return Err(Error::UnknownState(bad.to_string()));
        }
        self.semiring.check_element(&w)?;
        let key = (args.to_vec(), q);
        if self.semiring.is_zero(&w) {
            self.tables[g].remove(&key);
        } else {
            self.tables[g].insert(key, w);
        }
        Ok(())
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn root_weights(&self) -> &[Element] {
        &self.root
    }

    pub fn set_root(&mut self, q: usize, w: Element) -> Result<()> {
        self.semiring.check_element(&w)?;
        *self
            .root
            .get_mut(q)
            .ok_or_else(|| Error::UnknownState(q.to_string()))? = w;
        Ok(())
    }

    pub fn table(&self, symbol: &str) -> Option<&Table> {
        self.alphabet.index_of(symbol).map(|g| &self.tables[g])
    }

    /// All nonzero transitions as (symbol, p̄, q, weight), in alphabet then
    /// key order.
    pub fn transitions(&self) -> impl Iterator<Item = (&str, &[usize], usize, &Element)> {
        self.alphabet
            .symbols()
            .iter()
            .zip(&self.tables)
            .flat_map(|((name, _), t)| {
                t.iter()
                    .map(move |((args, q), w)| (name.as_str(), args.as_slice(), *q, w))
            })
    }

    pub fn weight(&self, symbol: &str, args: &[usize], q: usize) -> Element {
        self.table(symbol)
            .and_then(|t| t.get(&(args.to_vec(), q)).cloned())
            .unwrap_or_else(|| self.semiring.zero())
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// (⟦B⟧_{q}(t))_q, by a bottom-up pass that visits each shared subtree
    /// once.
    pub fn state_behavior(&self, t: &Tree) -> Result<Vec<Element>> {
        self.alphabet.check_ground(t)?;
        Ok(self.behavior_memo(t, &mut HashMap::new()))
    }

    fn behavior_memo(&self, t: &Tree, memo: &mut HashMap<usize, Vec<Element>>) -> Vec<Element> {
        if let Some(v) = memo.get(&t.id()) {
            return v.clone();
        }
        let children: Vec<Vec<Element>> = t
            .children()
            .iter()
            .map(|c| self.behavior_memo(c, memo))
            .collect();
        let g = self
            .alphabet
            .index_of(t.symbol().expect("checked ground"))
            .expect("checked symbol");
        let v = self.combine(g, &children);
        memo.insert(t.id(), v.clone());
        v
    }

    /// One bottom-up step: the state vector of g(t_1..t_k) from the state
    /// vectors of the t_i.
    fn combine(&self, g: usize, children: &[Vec<Element>]) -> Vec<Element> {
        let sr = &self.semiring;
        let mut v = vec![sr.zero(); self.n()];
        for ((args, q), w) in &self.tables[g] {
            let mut prod = w.clone();
            for (i, &p) in args.iter().enumerate() {
                if sr.is_zero(&prod) {
                    break;
                }
                prod = sr.mul(&prod, &children[i][p]);
            }
            v[*q] = sr.add(&v[*q], &prod);
        }
        v
    }

    pub fn behavior(&self, t: &Tree) -> Result<Element> {
        let v = self.state_behavior(t)?;
        Ok(self.weigh_root(&v))
    }

    fn weigh_root(&self, v: &[Element]) -> Element {
        let sr = &self.semiring;
        v.iter()
            .zip(&self.root)
            .fold(sr.zero(), |acc, (x, l)| sr.add(&acc, &sr.mul(l, x)))
    }

    /// The sparse table of δ′_pattern: for every tuple p̄ of states at the
    /// variable leaves (lexicographic leaf order) with a nonzero entry, the
    /// vector (δ′(p̄, q))_q. Only the variable x_1 may occur.
    pub fn extended_table(&self, pattern: &Tree) -> Result<ExtendedTable> {
        self.alphabet.check_term(pattern, usize::MAX)?;
        if let Some(v) = pattern.var_occurrences().into_iter().find(|&v| v != 1) {
            return Err(Error::InvalidHomomorphism(format!(
                "extended transitions take patterns in x1 only, found x{v}"
            )));
        }
        Ok(self.extended_memo(pattern, &mut HashMap::new()))
    }

    fn extended_memo(&self, t: &Tree, memo: &mut HashMap<usize, ExtendedTable>) -> ExtendedTable {
        if let Some(done) = memo.get(&t.id()) {
            return done.clone();
        }
        let sr = &self.semiring;
        let n = self.n();
        let out = match t.label() {
            Label::Var(_) => (0..n)
                .map(|p| {
                    let mut e = vec![sr.zero(); n];
                    e[p] = sr.one();
                    (vec![p], e)
                })
                .collect(),
            Label::Symbol(s) => {
                let g = self.alphabet.index_of(s).expect("checked term");
                let children: Vec<ExtendedTable> = t
                    .children()
                    .iter()
                    .map(|c| self.extended_memo(c, memo))
                    .collect();
                // child i, state p' ↦ entries (leaf tuple, δ′_{t_i}(tuple, p')) that are nonzero
                let index: Vec<Vec<Vec<(&Vec<usize>, &Element)>>> = children
                    .iter()
                    .map(|tab| {
                        let mut by_state = vec![Vec::new(); n];
                        for (leaves, v) in tab {
                            for (p, x) in v.iter().enumerate() {
                                if !sr.is_zero(x) {
                                    by_state[p].push((leaves, x));
                                }
                            }
                        }
                        by_state
                    })
                    .collect();
                let mut acc: ExtendedTable = BTreeMap::new();
                for ((args, q), w) in &self.tables[g] {
                    let lists: Vec<&Vec<(&Vec<usize>, &Element)>> = args
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| &index[i][p])
                        .collect();
                    if lists.iter().any(|l| l.is_empty()) {
                        continue;
                    }
                    let sizes: Vec<usize> = lists.iter().map(|l| l.len()).collect();
                    for combo in crate::tree::mixed_tuples(&sizes) {
                        let mut leaves = Vec::new();
                        let mut prod = w.clone();
                        for (i, &j) in combo.iter().enumerate() {
                            let (ls, x) = lists[i][j];
                            leaves.extend_from_slice(ls);
                            prod = sr.mul(&prod, x);
                        }
                        let entry = acc.entry(leaves).or_insert_with(|| vec![sr.zero(); n]);
                        entry[*q] = sr.add(&entry[*q], &prod);
                    }
                }
                acc.retain(|_, v| v.iter().any(|x| !sr.is_zero(x)));
                if t.children().is_empty() {
                    // ground leaves always get an entry so callers can read zero vectors
                    acc.entry(Vec::new()).or_insert_with(|| vec![sr.zero(); n]);
                }
                acc
            }
        };
        memo.insert(t.id(), out.clone());
        out
    }

    /// δ′_pattern(p̄, q).
    pub fn extended_delta(&self, pattern: &Tree, leaves: &[usize], q: usize) -> Result<Element> {
        let ra = pattern.ra();
        if leaves.len() != ra {
            return Err(Error::ArityMismatch {
                expected: ra,
                found: leaves.len(),
            });
        }
        if q >= self.n() {
            return Err(Error::UnknownState(q.to_string()));
        }
        let table = self.extended_table(pattern)?;
        Ok(table
            .get(leaves)
            .map(|v| v[q].clone())
            .unwrap_or_else(|| self.semiring.zero()))
    }

    /// Product automaton with behavior ⟦self⟧ · ⟦other⟧.
    pub fn hadamard(&self, other: &Wfta) -> Result<Wfta> {
        if self.semiring != other.semiring {
            return Err(Error::SemiringMismatch(
                self.semiring.name(),
                other.semiring.name(),
            ));
        }
        if !self.alphabet.same_symbols(&other.alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet.decls(),
                other.alphabet.decls()
            )));
        }
        let sr = &self.semiring;
        let m = other.n();
        let pair = |a: usize, b: usize| a * m + b;
        let mut states = Vec::with_capacity(self.n() * m);
        let mut root = Vec::with_capacity(self.n() * m);
        for (i, s) in self.states.iter().enumerate() {
            for (j, t) in other.states.iter().enumerate() {
                states.push(format!("({s},{t})"));
                root.push(sr.mul(&self.root[i], &other.root[j]));
            }
        }
        let mut out = Wfta::new(sr.clone(), states, self.alphabet.clone(), root)?;
        for (g, (name, _)) in self.alphabet.symbols().iter().enumerate() {
            let theirs = other.table(name).expect("same symbols");
            for ((a1, q1), w1) in &self.tables[g] {
                for ((a2, q2), w2) in theirs {
                    let args: Vec<usize> = a1.iter().zip(a2).map(|(&x, &y)| pair(x, y)).collect();
                    out.tables[g].insert((args, pair(*q1, *q2)), sr.mul(w1, w2));
                }
            }
            out.tables[g].retain(|_, w| !sr.is_zero(w));
        }
        Ok(out)
    }

    /// The automaton with every weight equal to one over every symbol; its
    /// behavior is constantly 1 when it has a single accepting state.
    pub fn constant_one(semiring: Semiring, alphabet: RankedAlphabet) -> Wfta {
        let one = semiring.one();
        let mut b = Wfta::new(
            semiring,
            vec!["u".into()],
            alphabet.clone(),
            vec![one.clone()],
        )
        .expect("one state");
        for (name, rank) in alphabet.symbols() {
            b.set(name, &vec![0; *rank], 0, one.clone()).expect("valid");
        }
        b
    }
}

fn index_of(states: &[String], name: &str) -> Result<usize> {
    states
        .iter()
        .position(|s| s == name)
        .ok_or_else(|| Error::UnknownState(name.to_string()))
}

/// A textual transition `g(p1,...,pk) -> q [: weight]` or `g -> q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub symbol: String,
    pub args: Vec<String>,
    pub target: String,
    pub weight: Option<String>,
}

impl Rule {
    pub fn parse(text: &str) -> Result<Rule> {
        let bad = || Error::Parse(format!("malformed transition {text:?}"));
        let (lhs, rhs) = text.split_once("->").ok_or_else(bad)?;
        let (target, weight) = match rhs.split_once(':') {
            Some((t, w)) => (t.trim(), Some(w.trim().to_string())),
            None => (rhs.trim(), None),
        };
        let lhs = lhs.trim();
        let (symbol, args) = match lhs.split_once('(') {
            Some((s, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(bad)?;
                let args: Vec<String> = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner.split(',').map(|a| a.trim().to_string()).collect()
                };
                (s.trim(), args)
            }
            None => (lhs, Vec::new()),
        };
        if symbol.is_empty() || target.is_empty() || args.iter().any(String::is_empty) {
            return Err(bad());
        }
        Ok(Rule {
            symbol: symbol.to_string(),
            args,
            target: target.to_string(),
            weight,
        })
    }

    pub fn render(symbol: &str, args: &[&str], target: &str, weight: Option<&str>) -> String {
        let mut s = symbol.to_string();
        if !args.is_empty() {
            s.push('(');
            s.push_str(&args.join(","));
            s.push(')');
        }
        s.push_str(" -> ");
        s.push_str(target);
        if let Some(w) = weight {
            s.push_str(" : ");
            s.push_str(w);
        }
        s
    }
}
