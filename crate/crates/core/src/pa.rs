//! Polynomial automata and the zeroness / equivalence decisions over ℚ.
//!
//! A polynomial automaton reads a word forwards: the configuration starts at
//! α and every letter a applies the polynomial map p(a); the output is γ of
//! the final configuration. Reading a WAFA's data this way computes the
//! WAFA's behavior on the reversed word.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, MonomialOrder};
use crate::polynomial::{degree_cap, Polynomial};
use crate::semiring::{Element, Semiring, SemiringOps};
use crate::wafa::{fresh_name, Wafa};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyAutomaton {
    semiring: Semiring,
    labels: Vec<String>,
    alphabet: Vec<char>,
    initial: Vec<Element>,
    /// `maps[a][i]` is the i-th component of p(a).
    maps: Vec<Vec<Polynomial>>,
    output: Polynomial,
}

impl PolyAutomaton {
    pub fn new(
        semiring: Semiring,
        labels: Vec<String>,
        alphabet: Vec<char>,
        initial: Vec<Element>,
        maps: Vec<Vec<Polynomial>>,
        output: Polynomial,
    ) -> Result<Self> {
        let n = initial.len();
        if labels.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        if maps.len() != alphabet.len() || maps.iter().any(|m| m.len() != n) {
            return Err(Error::InvalidAutomaton(
                "one polynomial map of size n per letter".into(),
            ));
        }
        let mut seen = HashSet::new();
        if let Some(c) = alphabet.iter().find(|c| !seen.insert(**c)) {
            return Err(Error::InvalidAutomaton(format!("duplicate letter {c:?}")));
        }
        for p in maps.iter().flatten().chain(std::iter::once(&output)) {
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
        for e in &initial {
            semiring.check_element(e)?;
        }
        Ok(PolyAutomaton {
            semiring,
            labels,
            alphabet,
            initial,
            maps,
            output,
        })
    }

    /// Builds an automaton from element and polynomial text; states are
    /// labelled x1..xn.
    pub fn from_text(
        semiring: Semiring,
        alphabet: &str,
        initial: &[&str],
        maps: &[(char, &[&str])],
        output: &str,
    ) -> Result<Self> {
        let n = initial.len();
        let alphabet: Vec<char> = alphabet.chars().collect();
        let initial = initial
            .iter()
            .map(|e| semiring.parse_element(e))
            .collect::<Result<Vec<_>>>()?;
        let mut table = vec![Vec::new(); alphabet.len()];
        for (a, polys) in maps {
            let k = alphabet
                .iter()
                .position(|c| c == a)
                .ok_or(Error::UnknownLetter(*a))?;
            table[k] = polys
                .iter()
                .map(|p| Polynomial::parse(p, n, &semiring))
                .collect::<Result<Vec<_>>>()?;
        }
        let output = Polynomial::parse(output, n, &semiring)?;
        let labels = (1..=n).map(|i| format!("x{i}")).collect();
        Self::new(semiring, labels, alphabet, initial, table, output)
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn n(&self) -> usize {
        self.initial.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn initial(&self) -> &[Element] {
        &self.initial
    }

    pub fn map(&self, a: usize) -> &[Polynomial] {
        &self.maps[a]
    }

    pub fn output(&self) -> &Polynomial {
        &self.output
    }

    fn letter_index(&self, a: char) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|&c| c == a)
            .ok_or(Error::UnknownLetter(a))
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<char>> {
        let w: Vec<char> = text.chars().collect();
        for &c in &w {
            self.letter_index(c)?;
        }
        Ok(w)
    }

    /// The configuration after reading `w` from α.
    pub fn configuration(&self, w: &[char]) -> Result<Vec<Element>> {
        let mut c = self.initial.clone();
        for &a in w {
            let k = self.letter_index(a)?;
            c = self.maps[k]
                .iter()
                .map(|p| p.evaluate(&c, &self.semiring))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(c)
    }

    pub fn behavior(&self, w: &[char]) -> Result<Element> {
        let c = self.configuration(w)?;
        self.output.evaluate(&c, &self.semiring)
    }

    /// α = τ, p_i(a) = δ(q_i, a), γ = P_0.
    pub fn from_wafa(a: &Wafa) -> PolyAutomaton {
        let maps = (0..a.alphabet().len())
            .map(|l| (0..a.n()).map(|q| a.delta(q, l).clone()).collect())
            .collect();
        PolyAutomaton {
            semiring: a.semiring().clone(),
            labels: a.states().to_vec(),
            alphabet: a.alphabet().to_vec(),
            initial: a.finals().to_vec(),
            maps,
            output: a.initial().clone(),
        }
    }

    /// The inverse reading of [`PolyAutomaton::from_wafa`].
    pub fn to_wafa(&self) -> Result<Wafa> {
        let delta = (0..self.n())
            .map(|q| self.maps.iter().map(|m| m[q].clone()).collect())
            .collect();
        Wafa::new(
            self.semiring.clone(),
            self.labels.clone(),
            self.alphabet.clone(),
            delta,
            self.output.clone(),
            self.initial.clone(),
        )
    }

    fn require_rationals(&self) -> Result<()> {
        match self.semiring {
            Semiring::Rat => Ok(()),
            ref other => Err(Error::NotAField(other.name())),
        }
    }

    /// Decides whether the behavior is constantly zero.
    ///
    /// Generators g_u = γ ∘ p(u) are explored breadth first from g_ε = γ;
    /// g_u(α) is the value on u. A generator inside the ideal of those kept
    /// so far is dropped together with its descendants; once nothing is left
    /// the kept ideal is invariant under every p(a) and vanishes at α.
    pub fn zeroness(&self, budget: &Budget) -> Result<ZeronessVerdict> {
        self.require_rationals()?;
        let sr = &self.semiring;
        let n = self.n();
        let mut basis = GroebnerBasis::empty(n, MonomialOrder::GradedLex);
        let mut queue: VecDeque<(Polynomial, Vec<char>)> = VecDeque::new();
        queue.push_back((self.output.clone(), Vec::new()));
        let mut steps = 0usize;
        while let Some((g, u)) = queue.pop_front() {
            let value = g.evaluate(&self.initial, sr)?;
            if !sr.is_zero(&value) {
                return Ok(ZeronessVerdict::NonZero { witness: u, value });
            }
            steps += 1;
            if steps > budget.max_steps {
                return Err(Error::ResourceExhausted(format!(
                    "more than {} generators examined",
                    budget.max_steps
                )));
            }
            if g.max_degree() > budget.max_degree {
                return Err(Error::ResourceExhausted(format!(
                    "generator degree {} exceeds {}",
                    g.max_degree(),
                    budget.max_degree
                )));
            }
            if basis.contains(&g)? {
                continue;
            }
            basis.extend(&g)?;
            for (k, &a) in self.alphabet.iter().enumerate() {
                let next = g.substitute(&self.maps[k], n, sr).map_err(|e| match e {
                    Error::DegreeCap { degree, cap } => Error::ResourceExhausted(format!(
                        "polynomial degree {degree} exceeds the global cap {cap}"
                    )),
                    other => other,
                })?;
                let mut word = Vec::with_capacity(u.len() + 1);
                word.push(a);
                word.extend_from_slice(&u);
                queue.push_back((next, word));
            }
        }
        Ok(ZeronessVerdict::Zero { certificate: basis })
    }

    /// Checks a zeroness certificate: γ lies in the ideal, every basis
    /// element vanishes at α, and the ideal is closed under every p(a).
    pub fn audit_certificate(&self, basis: &GroebnerBasis) -> Result<bool> {
        self.require_rationals()?;
        let sr = &self.semiring;
        if !basis.contains(&self.output)? {
            return Ok(false);
        }
        for g in basis.generators() {
            if !sr.is_zero(&g.evaluate(&self.initial, sr)?) {
                return Ok(false);
            }
            for m in &self.maps {
                if !basis.contains(&g.substitute(m, self.n(), sr)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The automaton computing self − other, on the disjoint union of the
    /// two state sets.
    pub fn difference(&self, other: &PolyAutomaton) -> Result<PolyAutomaton> {
        self.require_rationals()?;
        other.require_rationals()?;
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet, other.alphabet
            )));
        }
        let sr = &self.semiring;
        let (n1, n2) = (self.n(), other.n());
        let n = n1 + n2;
        let mut labels = self.labels.clone();
        let mut taken: HashSet<String> = labels.iter().cloned().collect();
        for l in &other.labels {
            let name = fresh_name(l, &taken);
            taken.insert(name.clone());
            labels.push(name);
        }
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().cloned());
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(m1, m2)| {
                m1.iter()
                    .map(|p| p.shift(n, 0, sr))
                    .chain(m2.iter().map(|p| p.shift(n, n1, sr)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let minus = other
            .output
            .shift(n, n1, sr)?
            .neg(sr)
            .expect("rationals have subtraction");
        let output = self.output.shift(n, 0, sr)?.add(&minus, sr)?;
        PolyAutomaton::new(
            sr.clone(),
            labels,
            self.alphabet.clone(),
            initial,
            maps,
            output,
        )
    }

    pub fn equivalence(
        &self,
        other: &PolyAutomaton,
        budget: &Budget,
    ) -> Result<EquivalenceVerdict> {
        let diff = self.difference(other)?;
        Ok(match diff.zeroness(budget)? {
            ZeronessVerdict::Zero { certificate } => EquivalenceVerdict::Equal { certificate },
            ZeronessVerdict::NonZero { witness, .. } => {
                let left = self.behavior(&witness)?;
                let right = other.behavior(&witness)?;
                EquivalenceVerdict::NotEqual {
                    witness,
                    left,
                    right,
                }
            }
        })
    }
}

/// Limits for the saturation loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Generators examined before giving up.
    pub max_steps: usize,
    /// Largest total degree a generator may have.
    pub max_degree: u64,
}

impl Default for Budget {
    /// 10 000 steps; the degree bound is the global polynomial cap when one
    /// is set, 64 otherwise.
    fn default() -> Self {
        Budget {
            max_steps: 10_000,
            max_degree: degree_cap().map_or(64, u64::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeronessVerdict {
    Zero { certificate: GroebnerBasis },
    NonZero { witness: Vec<char>, value: Element },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equal {
        certificate: GroebnerBasis,
    },
    NotEqual {
        witness: Vec<char>,
        left: Element,
        right: Element,
    },
}

impl Wafa {
    pub fn to_pa(&self) -> PolyAutomaton {
        PolyAutomaton::from_wafa(self)
    }

    /// Zeroness of a ℚ-weighted WAFA; a witness is reported as a word for
    /// this automaton.
    pub fn zeroness(&self, budget: &Budget) -> Result<ZeronessVerdict> {
        Ok(match self.to_pa().zeroness(budget)? {
            ZeronessVerdict::NonZero { mut witness, value } => {
                witness.reverse();
                ZeronessVerdict::NonZero { witness, value }
            }
            zero => zero,
        })
    }

    pub fn equivalence(&self, other: &Wafa, budget: &Budget) -> Result<EquivalenceVerdict> {
        Ok(match self.to_pa().equivalence(&other.to_pa(), budget)? {
            EquivalenceVerdict::NotEqual {
                mut witness,
                left,
                right,
            } => {
                witness.reverse();
                EquivalenceVerdict::NotEqual {
                    witness,
                    left,
                    right,
                }
            }
            eq => eq,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::wafa::words_up_to;

    fn w(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn running_reversal() {
        let a = fixtures::running();
        let p = a.to_pa();
        assert_eq!(p.initial(), [Element::nat(1), Element::nat(2)]);
        assert_eq!(p.behavior(&[]).unwrap(), Element::nat(1));
        assert_eq!(
            p.configuration(&w("bb")).unwrap(),
            [Element::nat(4), Element::nat(8)]
        );
        assert_eq!(p.behavior(&w("bb")).unwrap(), Element::nat(4));
        assert_eq!(p.behavior(&w("bbaa")).unwrap(), Element::nat(256));
        assert_eq!(p.to_wafa().unwrap(), a);
        for word in words_up_to(a.alphabet(), 6) {
            let mut rev = word.clone();
            rev.reverse();
            assert_eq!(p.behavior(&rev).unwrap(), a.behavior(&word).unwrap());
        }
    }

    #[test]
    fn zero_output_is_zero() {
        let p =
            PolyAutomaton::from_text(Semiring::Rat, "a", &["1"], &[('a', &["x1"])], "0").unwrap();
        let v = p.zeroness(&Budget::default()).unwrap();
        let ZeronessVerdict::Zero { certificate } = v else {
            panic!("expected zero")
        };
        assert!(certificate.is_empty());
        assert!(p.audit_certificate(&certificate).unwrap());
    }

    #[test]
    fn squaring_from_zero_is_zero() {
        let p = PolyAutomaton::from_text(Semiring::Rat, "a", &["0"], &[('a', &["x1^2"])], "x1")
            .unwrap();
        let ZeronessVerdict::Zero { certificate } = p.zeroness(&Budget::default()).unwrap() else {
            panic!("expected zero")
        };
        assert!(p.audit_certificate(&certificate).unwrap());
    }

    #[test]
    fn running_is_nonzero_at_the_empty_word() {
        let a = fixtures::running().to_rationals().unwrap();
        let v = a.zeroness(&Budget::default()).unwrap();
        assert_eq!(
            v,
            ZeronessVerdict::NonZero {
                witness: vec![],
                value: Element::rat(1, 1)
            }
        );
    }

    #[test]
    fn naturals_are_rejected() {
        assert!(matches!(
            fixtures::running().zeroness(&Budget::default()),
            Err(Error::NotAField(_))
        ));
    }

    #[test]
    fn perturbed_running_is_separated_by_b() {
        let a = fixtures::running().to_rationals().unwrap();
        let b = a.with_final(1, Element::rat(3, 1)).unwrap();
        match a.equivalence(&b, &Budget::default()).unwrap() {
            EquivalenceVerdict::NotEqual {
                witness,
                left,
                right,
            } => {
                assert_eq!(witness, w("b"));
                assert_eq!((left, right), (Element::rat(2, 1), Element::rat(3, 1)));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            a.equivalence(&a, &Budget::default()).unwrap(),
            EquivalenceVerdict::Equal { .. }
        ));
    }

    #[test]
    fn perturbed_initial_vector_on_the_pa_side() {
        let p1 = fixtures::running().to_rationals().unwrap().to_pa();
        let mut init = p1.initial().to_vec();
        init[1] = Element::rat(3, 1);
        let p2 = PolyAutomaton::new(
            Semiring::Rat,
            p1.labels().to_vec(),
            p1.alphabet().to_vec(),
            init,
            (0..2).map(|a| p1.map(a).to_vec()).collect(),
            p1.output().clone(),
        )
        .unwrap();
        let EquivalenceVerdict::NotEqual { witness, .. } =
            p1.equivalence(&p2, &Budget::default()).unwrap()
        else {
            panic!("expected a witness")
        };
        assert_eq!(witness, w("b"));
    }

    #[test]
    fn two_encodings_of_doubling() {
        let p1 = PolyAutomaton::from_text(Semiring::Rat, "a", &["1"], &[('a', &["2*x1"])], "x1")
            .unwrap();
        let p2 = PolyAutomaton::from_text(
            Semiring::Rat,
            "a",
            &["1/2", "1/2"],
            &[('a', &["x1 + x2", "x1 + x2"])],
            "x1 + x2",
        )
        .unwrap();
        let EquivalenceVerdict::Equal { certificate } =
            p1.equivalence(&p2, &Budget::default()).unwrap()
        else {
            panic!("expected equal")
        };
        assert!(p1
            .difference(&p2)
            .unwrap()
            .audit_certificate(&certificate)
            .unwrap());
    }

    #[test]
    fn stress_fixture_exhausts_the_budget() {
        let p = fixtures::stress_pa();
        assert!(matches!(
            p.zeroness(&Budget {
                max_steps: 10_000,
                max_degree: 64
            }),
            Err(Error::ResourceExhausted(_))
        ));
        // the behavior is nonzero, first at length 7, so exhaustion is not a wrong verdict
        assert_ne!(p.behavior(&w("aaaaaaa")).unwrap(), Element::rat(0, 1));
    }
}
