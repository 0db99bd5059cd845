use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::semiring::{Semiring, SemiringOps};
use crate::tree::{tuples, Label, RankedAlphabet, Tree, TreeHomomorphism};
use crate::wafa::fresh_name;

use super::Wfta;

/// A deterministic complete bottom-up tree automaton.
///
/// The explicit table may be partial; every missing entry leads to the
/// designated sink state, which is created on construction if needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dta {
    states: Vec<String>,
    alphabet: RankedAlphabet,
    tables: Vec<BTreeMap<Vec<usize>, usize>>,
    accepting: Vec<bool>,
    sink: Option<usize>,
}

impl Dta {
    /// `entries` are (symbol, p̄, q). A `sink` names the state that receives
    /// every unlisted tuple; without one, an incomplete table gets a fresh
    /// non-accepting sink.
    pub fn new(
        states: Vec<String>,
        alphabet: RankedAlphabet,
        entries: Vec<(String, Vec<usize>, usize)>,
        accepting: Vec<bool>,
        sink: Option<usize>,
    ) -> Result<Self> {
        let mut states = states;
        let mut accepting = accepting;
        if states.is_empty() && sink.is_none() && !entries.is_empty() {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if accepting.len() != states.len() {
            return Err(Error::ArityMismatch {
                expected: states.len(),
                found: accepting.len(),
            });
        }
        let n = states.len();
        if sink.is_some_and(|s| s >= n) {
            return Err(Error::UnknownState(format!("sink {}", sink.unwrap_or(0))));
        }
        let mut tables = vec![BTreeMap::new(); alphabet.len()];
        for (symbol, args, q) in entries {
            let g = alphabet
                .index_of(&symbol)
                .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
            let rank = alphabet.symbols()[g].1;
            if args.len() != rank {
                return Err(Error::RankMismatch {
                    symbol,
                    expected: rank,
                    found: args.len(),
                });
            }
            if let Some(bad) = args.iter().chain(std::iter::once(&q)).find(|&&i| i >= n) {
                return Err(Error::UnknownState(bad.to_string()));
            }
            if let Some(prev) = tables[g].insert(args.clone(), q) {
                if prev != q {
                    return Err(Error::NotDeterministic(format!(
                        "{symbol}{args:?} leads to both {} and {}",
                        states[prev], states[q]
                    )));
                }
            }
        }
        let mut dta = Dta {
            states: Vec::new(),
            alphabet,
            tables,
            accepting: Vec::new(),
            sink,
        };
        if sink.is_none() && !dta.is_complete_for(n) {
            let taken = states.iter().cloned().collect();
            states.push(fresh_name("sink", &taken));
            accepting.push(false);
            dta.sink = Some(n);
        }
        dta.states = states;
        dta.accepting = accepting;
        Ok(dta)
    }

    fn is_complete_for(&self, n: usize) -> bool {
        self.alphabet
            .symbols()
            .iter()
            .zip(&self.tables)
            .all(|((_, rank), t)| {
                n.checked_pow(*rank as u32)
                    .is_some_and(|need| t.len() == need)
            })
    }

    /// Builds a DTA from rules `g(p1,..,pk) -> q`.
    pub fn from_text(
        states: &[&str],
        decls: &[&str],
        rules: &[&str],
        accepting: &[&str],
    ) -> Result<Self> {
        let alphabet = RankedAlphabet::parse_decls(decls)?;
        let names: Vec<String> = states.iter().map(ToString::to_string).collect();
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::UnknownState(s.to_string()))
        };
        let entries = rules
            .iter()
            .map(|r| {
                let rule = super::Rule::parse(r)?;
                let args = rule
                    .args
                    .iter()
                    .map(|a| idx(a))
                    .collect::<Result<Vec<_>>>()?;
                Ok((rule.symbol, args, idx(&rule.target)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = vec![false; names.len()];
        for a in accepting {
            acc[idx(a)?] = true;
        }
        Self::new(names, alphabet, entries, acc, None)
    }

    /// The one-state automaton accepting every tree (or none).
    pub fn universal(alphabet: &RankedAlphabet, accept: bool) -> Dta {
        let entries = alphabet
            .symbols()
            .iter()
            .map(|(name, rank)| (name.clone(), vec![0; *rank], 0))
            .collect();
        Dta::new(
            vec!["all".into()],
            alphabet.clone(),
            entries,
            vec![accept],
            None,
        )
        .expect("complete by construction")
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

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn sink(&self) -> Option<usize> {
        self.sink
    }

    /// Explicit entries as (symbol, p̄, q), in alphabet and tuple order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &[usize], usize)> {
        self.alphabet
            .symbols()
            .iter()
            .zip(&self.tables)
            .flat_map(|((name, _), t)| {
                t.iter()
                    .map(move |(args, &q)| (name.as_str(), args.as_slice(), q))
            })
    }

    /// The successor state of g on p̄.
    pub fn next(&self, g: usize, args: &[usize]) -> usize {
        match self.tables[g].get(args) {
            Some(&q) => q,
            None => self
                .sink
                .expect("complete automata always have a sink or a full table"),
        }
    }

    /// The state reached at the root of `t`.
    pub fn run(&self, t: &Tree) -> Result<usize> {
        self.alphabet.check_ground(t)?;
        Ok(self.run_memo(t, &mut HashMap::new()))
    }

    fn run_memo(&self, t: &Tree, memo: &mut HashMap<usize, usize>) -> usize {
        if let Some(&q) = memo.get(&t.id()) {
            return q;
        }
        let args: Vec<usize> = t
            .children()
            .iter()
            .map(|c| self.run_memo(c, memo))
            .collect();
        let g = self
            .alphabet
            .index_of(t.symbol().expect("ground"))
            .expect("checked");
        let q = self.next(g, &args);
        memo.insert(t.id(), q);
        q
    }

    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        Ok(self.accepting[self.run(t)?])
    }

    /// Structural audit: every stored transition is in range and, together
    /// with the sink, the table is total.
    pub fn audit(&self) -> Result<()> {
        let n = self.n();
        for (g, t) in self.tables.iter().enumerate() {
            let rank = self.alphabet.symbols()[g].1;
            for (args, &q) in t {
                if args.len() != rank || q >= n || args.iter().any(|&p| p >= n) {
                    return Err(Error::NotDeterministic(format!(
                        "malformed entry for {}",
                        self.alphabet.symbols()[g].0
                    )));
                }
            }
        }
        if self.sink.is_none() && !self.is_complete_for(n) {
            return Err(Error::NotDeterministic("table is not total".into()));
        }
        Ok(())
    }

    /// The sink is dead when it rejects and is never read by an explicit
    /// entry, so runs through it never reach an accepting root.
    fn dead_sink(&self) -> Option<usize> {
        let s = self.sink?;
        let read = self
            .tables
            .iter()
            .flat_map(|t| t.keys())
            .any(|args| args.contains(&s));
        (!self.accepting[s] && !read).then_some(s)
    }

    /// The WFTA over `semiring` whose behavior is χ_L for the language of
    /// this automaton.
    pub fn char_lift(&self, semiring: &Semiring) -> Wfta {
        let root = self
            .accepting
            .iter()
            .map(|&a| crate::semiring::lift_bool(a, semiring))
            .collect();
        let mut b = Wfta::new(
            semiring.clone(),
            self.states.clone(),
            self.alphabet.clone(),
            root,
        )
        .expect("valid state list");
        let one = semiring.one();
        let dead = self.dead_sink();
        if dead.is_none() && self.sink.is_some() {
            for (g, (name, rank)) in self.alphabet.symbols().iter().enumerate() {
                for args in tuples(self.n(), *rank) {
                    let q = self.next(g, &args);
                    b.set(name, &args, q, one.clone()).expect("in range");
                }
            }
            return b;
        }
        for (name, args, q) in self.entries() {
            if Some(q) != dead {
                b.set(name, args, q, one.clone()).expect("in range");
            }
        }
        b
    }

    /// The automaton over h's source alphabet accepting t iff this one
    /// accepts h(t). Each new transition runs this automaton on the pattern
    /// t_g with its variables read as states.
    pub fn inverse_hom(&self, h: &TreeHomomorphism) -> Result<Dta> {
        if !h.target().same_symbols(&self.alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "homomorphism targets {:?}, automaton reads {:?}",
                h.target().decls(),
                self.alphabet.decls()
            )));
        }
        let mut entries = Vec::new();
        for (name, pattern) in h.patterns() {
            let rank = h.source().rank(name).expect("pattern per symbol");
            for args in tuples(self.n(), rank) {
                entries.push((
                    name.to_string(),
                    args.clone(),
                    self.eval_pattern(pattern, &args),
                ));
            }
        }
        Dta::new(
            self.states.clone(),
            h.source().clone(),
            entries,
            self.accepting.clone(),
            None,
        )
    }

    fn eval_pattern(&self, pattern: &Tree, vars: &[usize]) -> usize {
        match pattern.label() {
            Label::Var(i) => vars[i - 1],
            Label::Symbol(s) => {
                let args: Vec<usize> = pattern
                    .children()
                    .iter()
                    .map(|c| self.eval_pattern(c, vars))
                    .collect();
                self.next(self.alphabet.index_of(s).expect("same symbols"), &args)
            }
        }
    }

    /// The reachable part of the product of `dtas`, as a DTA over their
    /// common alphabet with product states named by tuples. Acceptance is
    /// left false; `components` reports each product state's tuple.
    pub fn product(dtas: &[Dta]) -> Result<(Dta, Vec<Vec<usize>>)> {
        let first = dtas
            .first()
            .ok_or_else(|| Error::Precondition("product of no automata".into()))?;
        let alphabet = first.alphabet.clone();
        for d in dtas {
            if !d.alphabet.same_symbols(&alphabet) {
                return Err(Error::AlphabetMismatch(
                    "product over different alphabets".into(),
                ));
            }
        }
        let gidx: Vec<Vec<usize>> = dtas
            .iter()
            .map(|d| {
                alphabet
                    .symbols()
                    .iter()
                    .map(|(n, _)| d.alphabet.index_of(n).expect("same symbols"))
                    .collect()
            })
            .collect();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut table: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        loop {
            let before = comps.len();
            for (g, (_, rank)) in alphabet.symbols().iter().enumerate() {
                for args in tuples(comps.len(), *rank) {
                    if table.contains_key(&(g, args.clone())) {
                        continue;
                    }
                    let tuple: Vec<usize> = dtas
                        .iter()
                        .enumerate()
                        .map(|(k, d)| {
                            let local: Vec<usize> = args.iter().map(|&a| comps[a][k]).collect();
                            d.next(gidx[k][g], &local)
                        })
                        .collect();
                    let id = *index.entry(tuple.clone()).or_insert_with(|| {
                        comps.push(tuple);
                        comps.len() - 1
                    });
                    table.insert((g, args), id);
                }
            }
            if comps.len() == before {
                break;
            }
        }
        let names = comps
            .iter()
            .map(|c| {
                let parts: Vec<&str> = c
                    .iter()
                    .enumerate()
                    .map(|(k, &s)| dtas[k].states[s].as_str())
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let mut entries: Vec<(String, Vec<usize>, usize)> = table
            .into_iter()
            .map(|((g, args), q)| (alphabet.symbols()[g].0.clone(), args, q))
            .collect();
        entries.sort();
        let accepting = vec![false; comps.len()];
        let dta = Dta::new(names, alphabet, entries, accepting, None)?;
        Ok((dta, comps))
    }

    /// Same automaton with a new acceptance vector.
    pub fn with_accepting(&self, accepting: Vec<bool>) -> Result<Dta> {
        if accepting.len() != self.n() {
            return Err(Error::ArityMismatch {
                expected: self.n(),
                found: accepting.len(),
            });
        }
        let mut d = self.clone();
        d.accepting = accepting;
        Ok(d)
    }
}
