//! Weighted alternating finite automata.
//!
//! States are ordered; state `i` is the indeterminate x_{i+1} in every
//! transition polynomial. Behaviors are computed numerically from the end
//! of the word backwards, never by composing polynomials along the word.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::semiring::{Element, Semiring, SemiringOps};
use crate::tree::END;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wafa {
    semiring: Semiring,
    states: Vec<String>,
    alphabet: Vec<char>,
    /// `delta[q][a]`, indexed by state and letter position.
    delta: Vec<Vec<Polynomial>>,
    initial: Polynomial,
    finals: Vec<Element>,
}

impl Wafa {
    pub fn new(
        semiring: Semiring,
        states: Vec<String>,
        alphabet: Vec<char>,
        delta: Vec<Vec<Polynomial>>,
        initial: Polynomial,
        finals: Vec<Element>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        let mut seen = HashSet::new();
        for s in &states {
            if s.is_empty() || !seen.insert(s) {
                return Err(Error::InvalidAutomaton(format!(
                    "bad or duplicate state name {s:?}"
                )));
            }
        }
        let mut seen = HashSet::new();
        for &c in &alphabet {
            if c.to_string() == END || c.is_whitespace() || !seen.insert(c) {
                return Err(Error::InvalidAutomaton(format!(
                    "bad or duplicate letter {c:?}"
                )));
            }
        }
        if delta.len() != n || delta.iter().any(|row| row.len() != alphabet.len()) {
            return Err(Error::InvalidAutomaton(
                "transition table must have one polynomial per state and letter".into(),
            ));
        }
        if finals.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: finals.len(),
            });
        }
        for p in delta.iter().flatten().chain(std::iter::once(&initial)) {
            if p.n() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: p.n(),
                });
            }
            for m in p.terms() {
                semiring.check_element(m.coeff())?;
            }
        }
        for f in &finals {
            semiring.check_element(f)?;
        }
        Ok(Wafa {
            semiring,
            states,
            alphabet,
            delta,
            initial,
            finals,
        })
    }

    /// Builds an automaton from polynomial text in x1..xn (x_i is the i-th
    /// state). Missing transitions are zero.
    pub fn from_text(
        semiring: Semiring,
        states: &[&str],
        alphabet: &str,
        initial: &str,
        transitions: &[(&str, char, &str)],
        finals: &[&str],
    ) -> Result<Self> {
        let n = states.len();
        let alphabet: Vec<char> = alphabet.chars().collect();
        let mut delta = vec![vec![Polynomial::zero(n); alphabet.len()]; n];
        for &(q, a, p) in transitions {
            let qi = states
                .iter()
                .position(|s| *s == q)
                .ok_or_else(|| Error::UnknownState(q.to_string()))?;
            let ai = alphabet
                .iter()
                .position(|&c| c == a)
                .ok_or(Error::UnknownLetter(a))?;
            delta[qi][ai] = Polynomial::parse(p, n, &semiring)?;
        }
        let initial = Polynomial::parse(initial, n, &semiring)?;
        let finals = finals
            .iter()
            .map(|f| semiring.parse_element(f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            semiring,
            states.iter().map(ToString::to_string).collect(),
            alphabet,
            delta,
            initial,
            finals,
        )
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

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn initial(&self) -> &Polynomial {
        &self.initial
    }

    pub fn finals(&self) -> &[Element] {
        &self.finals
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, a: char) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|&c| c == a)
            .ok_or(Error::UnknownLetter(a))
    }

    /// δ(q, a) by indices.
    pub fn delta(&self, q: usize, a: usize) -> &Polynomial {
        &self.delta[q][a]
    }

    pub fn transitions(&self) -> &[Vec<Polynomial>] {
        &self.delta
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<char>> {
        let w: Vec<char> = text.chars().collect();
        for &c in &w {
            self.letter_index(c)?;
        }
        Ok(w)
    }

    /// (⟦A⟧_{q_1}(w), ..., ⟦A⟧_{q_n}(w)).
    pub fn state_behavior(&self, w: &[char]) -> Result<Vec<Element>> {
        let letters = w
            .iter()
            .map(|&c| self.letter_index(c))
            .collect::<Result<Vec<_>>>()?;
        let mut v = self.finals.clone();
        for &a in letters.iter().rev() {
            v = self
                .delta
                .iter()
                .map(|row| row[a].evaluate(&v, &self.semiring))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(v)
    }

    pub fn behavior(&self, w: &[char]) -> Result<Element> {
        let v = self.state_behavior(w)?;
        self.initial.evaluate(&v, &self.semiring)
    }

    fn all_polys(&self) -> impl Iterator<Item = &Polynomial> {
        self.delta
            .iter()
            .flatten()
            .chain(std::iter::once(&self.initial))
    }

    /// Normal form (ii): no constant monomials in P_0 or δ.
    pub fn has_no_constants(&self) -> bool {
        self.all_polys().all(Polynomial::is_non_constant_sum)
    }

    /// Normal form (iii): P_0 = q_1.
    pub fn initial_is_first_state(&self) -> bool {
        self.initial.is_var(0, &self.semiring)
    }

    /// Normal forms (i)-(iii). (i) holds by construction of [`Polynomial`].
    pub fn is_nice(&self) -> bool {
        self.has_no_constants() && self.initial_is_first_state()
    }

    /// Normal form (iv): every monomial has coefficient one.
    pub fn is_pure(&self) -> bool {
        self.all_polys()
            .flat_map(Polynomial::terms)
            .all(|m| self.semiring.is_one(m.coeff()))
    }

    /// The common degree of all transition monomials, if there is one.
    pub fn equalized_degree(&self) -> Option<u64> {
        let mut degrees = self
            .delta
            .iter()
            .flatten()
            .flat_map(Polynomial::terms)
            .map(|m| m.degree());
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    /// P_0 and every transition are linear combinations of single states.
    pub fn is_wfa(&self) -> bool {
        self.all_polys().all(Polynomial::is_linear_form)
    }

    fn taken_names(&self) -> HashSet<String> {
        self.states.iter().cloned().collect()
    }

    /// Appends a state with the given transitions and final weight; the
    /// polynomials of every existing state gain one indeterminate.
    fn push_state(
        &mut self,
        name: String,
        row: impl Fn(usize) -> Polynomial,
        fin: Element,
    ) -> Result<usize> {
        let n = self.n();
        let widen = |p: &Polynomial| p.shift(n + 1, 0, &self.semiring);
        let mut delta = Vec::with_capacity(n + 1);
        for r in &self.delta {
            delta.push(r.iter().map(widen).collect::<Result<Vec<_>>>()?);
        }
        self.initial = widen(&self.initial)?;
        delta.push((0..self.alphabet.len()).map(row).collect());
        self.delta = delta;
        self.states.push(name);
        self.finals.push(fin);
        Ok(n)
    }

    /// Adds a deadlock state whose behavior is the constant `c`.
    fn push_constant_state(&mut self, prefix: &str, c: &Element) -> Result<usize> {
        let name = fresh_name(
            &format!("{prefix}{}", sanitize(&c.to_string())),
            &self.taken_names(),
        );
        let n = self.n() + 1;
        let sr = self.semiring.clone();
        self.push_state(name, |_| Polynomial::var(n, n - 1, &sr), c.clone())
    }

    fn map_polys(&mut self, mut f: impl FnMut(&Polynomial) -> Result<Polynomial>) -> Result<()> {
        for row in &mut self.delta {
            for p in row.iter_mut() {
                *p = f(p)?;
            }
        }
        self.initial = f(&self.initial)?;
        Ok(())
    }

    fn remove_constants(&mut self) -> Result<()> {
        let mut constants: Vec<Element> = Vec::new();
        for p in self.all_polys() {
            if let Some(c) = p.constant_term() {
                if !constants.contains(c) {
                    constants.push(c.clone());
                }
            }
        }
        let mut slots = Vec::new();
        for c in &constants {
            slots.push((c.clone(), self.push_constant_state("q_", c)?));
        }
        let n = self.n();
        let sr = self.semiring.clone();
        self.map_polys(|p| {
            let raw = p.terms().iter().map(|m| {
                let mut exps = m.exponents().to_vec();
                if m.is_constant() {
                    let slot = slots
                        .iter()
                        .find(|(c, _)| c == m.coeff())
                        .expect("collected")
                        .1;
                    exps[slot] = 1;
                    (exps, sr.one())
                } else {
                    (exps, m.coeff().clone())
                }
            });
            Ok(Polynomial::from_terms(n, raw, &sr))
        })
    }

    /// Moves state `k` to the front, keeping the others in order.
    fn move_to_front(&mut self, k: usize) -> Result<()> {
        let n = self.n();
        let mut order: Vec<usize> = vec![k];
        order.extend((0..n).filter(|&i| i != k));
        let mut mapping = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            mapping[old] = new;
        }
        let sr = self.semiring.clone();
        self.map_polys(|p| p.remap(n, &mapping, &sr))?;
        self.delta = order.iter().map(|&i| self.delta[i].clone()).collect();
        self.states = order.iter().map(|&i| self.states[i].clone()).collect();
        self.finals = order.iter().map(|&i| self.finals[i].clone()).collect();
        Ok(())
    }

    /// An equivalent automaton in normal forms (i)-(iii).
    ///
    /// Constants become deadlock states; if P_0 is not already a single
    /// state, a fresh first state simulating P_0 is added.
    pub fn make_nice(&self) -> Result<Wafa> {
        let mut a = self.clone();
        a.remove_constants()?;
        if a.initial_is_first_state() {
            return Ok(a);
        }
        if let Some(k) = (0..a.n()).find(|&k| a.initial.is_var(k, &a.semiring)) {
            a.move_to_front(k)?;
            return Ok(a);
        }
        let sr = a.semiring.clone();
        let n = a.n();
        let tau0 = a.initial.evaluate(&a.finals, &sr)?;
        let rows = (0..a.alphabet.len())
            .map(|l| {
                let column: Vec<Polynomial> = (0..n).map(|q| a.delta[q][l].clone()).collect();
                a.initial.substitute(&column, n, &sr)
            })
            .collect::<Result<Vec<_>>>()?;
        let name = fresh_name("init", &a.taken_names());
        let k = a.push_state(
            name,
            |l| rows[l].shift(n + 1, 0, &sr).expect("widening"),
            tau0,
        )?;
        a.initial = Polynomial::var(n + 1, k, &sr);
        a.move_to_front(k)?;
        a.remove_constants()?;
        Ok(a)
    }

    /// An equivalent automaton in normal forms (i)-(iv): every coefficient
    /// s ≠ 1 is moved into a fresh deadlock state with final weight s.
    pub fn make_pure(&self) -> Result<Wafa> {
        if !self.is_nice() {
            return Err(Error::Precondition(
                "make_pure needs a nice automaton".into(),
            ));
        }
        let mut a = self.clone();
        let mut coeffs: Vec<Element> = Vec::new();
        for p in a.all_polys() {
            for m in p.terms() {
                if !a.semiring.is_one(m.coeff()) && !coeffs.contains(m.coeff()) {
                    coeffs.push(m.coeff().clone());
                }
            }
        }
        let mut slots = Vec::new();
        for c in &coeffs {
            slots.push((c.clone(), a.push_constant_state("q_", c)?));
        }
        let n = a.n();
        let sr = a.semiring.clone();
        a.map_polys(|p| {
            let raw = p.terms().iter().map(|m| {
                let mut exps = m.exponents().to_vec();
                if let Some((_, slot)) = slots.iter().find(|(c, _)| c == m.coeff()) {
                    exps[*slot] += 1;
                    (exps, sr.one())
                } else {
                    (exps, m.coeff().clone())
                }
            });
            Ok(Polynomial::from_terms(n, raw, &sr))
        })?;
        Ok(a)
    }

    /// An equivalent nice automaton whose transition monomials all have
    /// degree d = max(1, max degree), padded with a fresh sink state
    /// (final weight 1, δ(h, a) = h^d). The sink is added even when the
    /// input is already equalized.
    pub fn equalize(&self) -> Result<Wafa> {
        if !self.is_nice() {
            return Err(Error::Precondition(
                "equalize needs a nice automaton".into(),
            ));
        }
        let d = self
            .delta
            .iter()
            .flatten()
            .map(Polynomial::max_degree)
            .max()
            .unwrap_or(0)
            .max(1);
        let d = u32::try_from(d).map_err(|_| Error::DegreeOverflow)?;
        let mut a = self.clone();
        let n = a.n() + 1;
        let sr = a.semiring.clone();
        let name = fresh_name("h1", &a.taken_names());
        let mut sink_exps = vec![0; n];
        sink_exps[n - 1] = d;
        let sink = Polynomial::monomial(sr.one(), sink_exps, &sr);
        let h = a.push_state(name, |_| sink.clone(), sr.one())?;
        for row in &mut a.delta[..h] {
            for p in row.iter_mut() {
                let raw = p.terms().iter().map(|m| {
                    let mut exps = m.exponents().to_vec();
                    exps[h] = d - m.degree() as u32;
                    (exps, m.coeff().clone())
                });
                *p = Polynomial::from_terms(n, raw, &sr);
            }
        }
        Ok(a)
    }

    /// make_nice followed by equalize.
    pub fn nice_equalized(&self) -> Result<Wafa> {
        self.make_nice()?.equalize()
    }

    fn check_compatible(&self, other: &Wafa) -> Result<()> {
        if self.semiring != other.semiring {
            return Err(Error::SemiringMismatch(
                self.semiring.name(),
                other.semiring.name(),
            ));
        }
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet, other.alphabet
            )));
        }
        Ok(())
    }

    /// Disjoint union of the state sets with P_0 := P_0^A · P_0^B, so the
    /// behavior is the pointwise product.
    pub fn hadamard(&self, other: &Wafa) -> Result<Wafa> {
        self.check_compatible(other)?;
        let (n1, n2) = (self.n(), other.n());
        let n = n1 + n2;
        let sr = &self.semiring;
        let mut taken = self.taken_names();
        let mut states = self.states.clone();
        for s in &other.states {
            let name = fresh_name(s, &taken);
            taken.insert(name.clone());
            states.push(name);
        }
        let mut delta = Vec::with_capacity(n);
        for row in &self.delta {
            delta.push(
                row.iter()
                    .map(|p| p.shift(n, 0, sr))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        for row in &other.delta {
            delta.push(
                row.iter()
                    .map(|p| p.shift(n, n1, sr))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let initial = self
            .initial
            .shift(n, 0, sr)?
            .mul(&other.initial.shift(n, n1, sr)?, sr)?;
        let mut finals = self.finals.clone();
        finals.extend(other.finals.iter().cloned());
        Wafa::new(
            sr.clone(),
            states,
            self.alphabet.clone(),
            delta,
            initial,
            finals,
        )
    }

    /// The same automaton with every weight mapped into `target`.
    pub fn map_weights(
        &self,
        target: Semiring,
        mut f: impl FnMut(&Element) -> Result<Element>,
    ) -> Result<Wafa> {
        let mut delta = Vec::with_capacity(self.n());
        for row in &self.delta {
            delta.push(
                row.iter()
                    .map(|p| p.map_coeffs(&target, &mut f))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let initial = self.initial.map_coeffs(&target, &mut f)?;
        let finals = self.finals.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Wafa::new(
            target,
            self.states.clone(),
            self.alphabet.clone(),
            delta,
            initial,
            finals,
        )
    }

    /// Embeds a ℕ-weighted automaton into ℚ; ℚ automata are returned as is.
    pub fn to_rationals(&self) -> Result<Wafa> {
        match self.semiring {
            Semiring::Rat => Ok(self.clone()),
            Semiring::Nat => self.map_weights(Semiring::Rat, |e| {
                Semiring::to_rational(e)
                    .map(Element::Rat)
                    .ok_or_else(|| Error::ForeignElement {
                        element: e.to_string(),
                        semiring: "nat".into(),
                    })
            }),
            ref other => Err(Error::NotAField(other.name())),
        }
    }

    /// Copy with one final weight replaced.
    pub fn with_final(&self, state: usize, value: Element) -> Result<Wafa> {
        self.semiring.check_element(&value)?;
        let mut a = self.clone();
        *a.finals
            .get_mut(state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))? = value;
        Ok(a)
    }

    /// Graphviz rendering: one (possibly multi-headed) arrow per monomial,
    /// labelled with the letter and the coefficient.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph wafa {\n  rankdir=LR;\n");
        for (i, s) in self.states.iter().enumerate() {
            let _ = writeln!(
                out,
                "  s{i} [shape=circle, label=\"{} / {}\"];",
                escape(s),
                self.finals[i]
            );
        }
        let mut junctions = 0usize;
        let mut arrow = |out: &mut String, from: &str, label: String, exps: &[u32]| {
            let heads: Vec<usize> = exps
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize))
                .collect();
            match heads.as_slice() {
                [single] => {
                    let _ = writeln!(out, "  {from} -> s{single} [label=\"{label}\"];");
                }
                _ => {
                    let j = format!("j{junctions}");
                    junctions += 1;
                    let shape = if heads.is_empty() { "box" } else { "point" };
                    let jlabel = if heads.is_empty() {
                        label.clone()
                    } else {
                        String::new()
                    };
                    let _ = writeln!(out, "  {j} [shape={shape}, label=\"{jlabel}\"];");
                    let _ = writeln!(out, "  {from} -> {j} [label=\"{label}\", arrowhead=none];");
                    for h in heads {
                        let _ = writeln!(out, "  {j} -> s{h};");
                    }
                }
            }
        };
        let _ = writeln!(out, "  start [shape=none, label=\"\"];");
        for m in self.initial.terms() {
            arrow(&mut out, "start", m.coeff().to_string(), m.exponents());
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (a, p) in row.iter().enumerate() {
                for m in p.terms() {
                    let label = if self.semiring.is_one(m.coeff()) {
                        self.alphabet[a].to_string()
                    } else {
                        format!("{} | {}", self.alphabet[a], m.coeff())
                    };
                    arrow(&mut out, &format!("s{q}"), label, m.exponents());
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Transition table in text form, handy for debugging and golden tests.
    pub fn describe(&self) -> BTreeMap<(String, char), String> {
        let mut out = BTreeMap::new();
        for (q, row) in self.delta.iter().enumerate() {
            for (a, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    out.insert(
                        (self.states[q].clone(), self.alphabet[a]),
                        self.poly_text(p),
                    );
                }
            }
        }
        out
    }

    /// Polynomial text with state names in place of x1..xn.
    pub fn poly_text(&self, p: &Polynomial) -> String {
        let mut text = p.to_string();
        // longest indices first so that x12 is not rewritten as x1 + "2"
        for i in (0..self.n()).rev() {
            text = text.replace(&format!("x{}", i + 1), &self.states[i]);
        }
        text
    }
}

/// Every word over `alphabet` of length at most `max_len`, shortest first
/// and in alphabet order within one length.
pub fn words_up_to(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<char>| {
                alphabet.iter().map(move |&c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub(crate) fn fresh_name(base: &str, taken: &HashSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
