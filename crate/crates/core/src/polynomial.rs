//! Sparse multivariate polynomials over a commutative semiring.
//!
//! Terms are kept in canonical form: exponent vectors are pairwise distinct,
//! no coefficient is zero, and terms are sorted by descending graded
//! lexicographic order with x1 > x2 > ... > xn. Structural equality is
//! therefore polynomial equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::semiring::{Element, Semiring, SemiringOps};

static DEGREE_CAP: AtomicU32 = AtomicU32::new(0);

/// Sets a process-wide cap on the total degree of polynomials produced by
/// multiplication and substitution. `None` removes the cap.
pub fn set_degree_cap(cap: Option<u32>) {
    DEGREE_CAP.store(cap.unwrap_or(0), AtomicOrdering::Relaxed);
}

pub fn degree_cap() -> Option<u32> {
    match DEGREE_CAP.load(AtomicOrdering::Relaxed) {
        0 => None,
        c => Some(c),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    coeff: Element,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn coeff(&self) -> &Element {
        &self.coeff
    }

    /// Dense exponent vector, one entry per indeterminate.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// Graded lexicographic comparison of exponent vectors.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| u64::from(e)).sum();
    let db: u64 = b.iter().map(|&e| u64::from(e)).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    n: usize,
    terms: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeInfo {
    pub max_degree: u64,
    pub min_degree: u64,
    pub is_uniform_degree: bool,
    /// `(coefficient, exponents, degree)` in canonical order.
    pub monomials: Vec<(Element, Vec<u32>, u64)>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: Vec::new(),
        }
    }

    pub fn constant(n: usize, c: Element, sr: &Semiring) -> Self {
        Self::from_terms(n, [(vec![0; n], c)], sr)
    }

    pub fn one(n: usize, sr: &Semiring) -> Self {
        Self::constant(n, sr.one(), sr)
    }

    /// The indeterminate x_{i+1} (0-based `i`).
    pub fn var(n: usize, i: usize, sr: &Semiring) -> Self {
        assert!(i < n, "indeterminate x{} out of range for n = {n}", i + 1);
        let mut exps = vec![0; n];
        exps[i] = 1;
        Polynomial {
            n,
            terms: vec![Monomial {
                coeff: sr.one(),
                exps,
            }],
        }
    }

    /// Single monomial `c · x^exps`.
    pub fn monomial(c: Element, exps: Vec<u32>, sr: &Semiring) -> Self {
        let n = exps.len();
        Self::from_terms(n, [(exps, c)], sr)
    }

    /// Builds the canonical form of a sum of (possibly repeated or zero)
    /// terms.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Element)>,
        sr: &Semiring,
    ) -> Self {
        let mut acc: HashMap<Vec<u32>, Element> = HashMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), n, "exponent vector length must equal n");
            match acc.get_mut(&exps) {
                Some(v) => *v = sr.add(v, &c),
                None => {
                    acc.insert(exps, c);
                }
            }
        }
        let mut terms: Vec<Monomial> = acc
            .into_iter()
            .filter(|(_, c)| !sr.is_zero(c))
            .map(|(exps, coeff)| Monomial { coeff, exps })
            .collect();
        terms.sort_by(|a, b| grlex(&b.exps, &a.exps));
        Polynomial { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> u64 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True iff every monomial has degree at least one.
    pub fn is_non_constant_sum(&self) -> bool {
        self.terms.iter().all(|m| !m.is_constant())
    }

    /// The coefficient of the constant monomial, if present.
    pub fn constant_term(&self) -> Option<&Element> {
        self.terms
            .iter()
            .find(|m| m.is_constant())
            .map(|m| &m.coeff)
    }

    /// True iff the polynomial is exactly the indeterminate x_{i+1}.
    pub fn is_var(&self, i: usize, sr: &Semiring) -> bool {
        self.terms.len() == 1
            && sr.is_one(&self.terms[0].coeff)
            && self.terms[0]
                .exps
                .iter()
                .enumerate()
                .all(|(j, &e)| e == u32::from(j == i))
    }

    /// True iff every monomial has degree exactly one (an S-linear form).
    pub fn is_linear_form(&self) -> bool {
        self.terms.iter().all(|m| m.degree() == 1)
    }

    pub fn degree_info(&self) -> DegreeInfo {
        let monomials: Vec<_> = self
            .terms
            .iter()
            .map(|m| (m.coeff.clone(), m.exps.clone(), m.degree()))
            .collect();
        let max_degree = monomials.iter().map(|m| m.2).max().unwrap_or(0);
        let min_degree = monomials.iter().map(|m| m.2).min().unwrap_or(0);
        DegreeInfo {
            max_degree,
            min_degree,
            is_uniform_degree: max_degree == min_degree,
            monomials,
        }
    }

    fn check_n(&self, other: &Polynomial) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                expected: self.n,
                found: other.n,
            })
        }
    }

    pub fn add(&self, other: &Polynomial, sr: &Semiring) -> Result<Polynomial> {
        self.check_n(other)?;
        Ok(Self::from_terms(
            self.n,
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|m| (m.exps.clone(), m.coeff.clone())),
            sr,
        ))
    }

    /// Product, subject to the process-wide degree cap.
    pub fn mul(&self, other: &Polynomial, sr: &Semiring) -> Result<Polynomial> {
        let p = self.mul_uncapped(other, sr)?;
        check_cap(&p)?;
        Ok(p)
    }

    pub(crate) fn mul_uncapped(&self, other: &Polynomial, sr: &Semiring) -> Result<Polynomial> {
        self.check_n(other)?;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exps = a
                    .exps
                    .iter()
                    .zip(&b.exps)
                    .map(|(x, y)| x.checked_add(*y).ok_or(Error::DegreeOverflow))
                    .collect::<Result<Vec<u32>>>()?;
                raw.push((exps, sr.mul(&a.coeff, &b.coeff)));
            }
        }
        Ok(Self::from_terms(self.n, raw, sr))
    }

    pub fn pow(&self, mut k: u32, sr: &Semiring) -> Result<Polynomial> {
        let mut acc = Polynomial::one(self.n, sr);
        let mut sq = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq, sr)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq, sr)?;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Element, sr: &Semiring) -> Polynomial {
        Self::from_terms(
            self.n,
            self.terms
                .iter()
                .map(|m| (m.exps.clone(), sr.mul(c, &m.coeff))),
            sr,
        )
    }

    /// Coefficient-wise additive inverse; `None` without subtraction.
    pub fn neg(&self, sr: &Semiring) -> Option<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|m| {
                Some(Monomial {
                    coeff: sr.neg(&m.coeff)?,
                    exps: m.exps.clone(),
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Polynomial { n: self.n, terms })
    }

    /// Simultaneous substitution p⟨p_1, ..., p_n⟩ where every `subs[i]` is
    /// a polynomial in `target_vars` indeterminates.
    pub fn substitute(
        &self,
        subs: &[Polynomial],
        target_vars: usize,
        sr: &Semiring,
    ) -> Result<Polynomial> {
        if subs.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: subs.len(),
            });
        }
        for s in subs {
            if s.n != target_vars {
                return Err(Error::ArityMismatch {
                    expected: target_vars,
                    found: s.n,
                });
            }
        }
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut raw = Vec::new();
        for m in &self.terms {
            let mut prod = Polynomial::constant(target_vars, m.coeff.clone(), sr);
            for (i, &k) in m.exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = match powers.get(&(i, k)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = subs[i].pow(k, sr)?;
                        powers.insert((i, k), p.clone());
                        p
                    }
                };
                prod = prod.mul(&pw, sr)?;
                if prod.is_zero() {
                    break;
                }
            }
            raw.extend(prod.terms.into_iter().map(|t| (t.exps, t.coeff)));
        }
        Ok(Self::from_terms(target_vars, raw, sr))
    }

    /// Value at `point`.
    pub fn evaluate(&self, point: &[Element], sr: &Semiring) -> Result<Element> {
        if point.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: point.len(),
            });
        }
        let mut powers: HashMap<(usize, u32), Element> = HashMap::new();
        let mut acc = sr.zero();
        for m in &self.terms {
            let mut prod = m.coeff.clone();
            for (i, &k) in m.exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, k))
                    .or_insert_with(|| sr.pow(&point[i], u64::from(k)));
                prod = sr.mul(&prod, pw);
            }
            acc = sr.add(&acc, &prod);
        }
        Ok(acc)
    }

    /// Renames x_{i+1} to x_{mapping[i]+1} in a polynomial ring with
    /// `new_n` indeterminates.
    pub fn remap(&self, new_n: usize, mapping: &[usize], sr: &Semiring) -> Result<Polynomial> {
        if mapping.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: mapping.len(),
            });
        }
        let mut raw = Vec::with_capacity(self.terms.len());
        for m in &self.terms {
            let mut exps = vec![0u32; new_n];
            for (i, &k) in m.exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = *mapping
                    .get(i)
                    .filter(|&&j| j < new_n)
                    .ok_or(Error::ArityMismatch {
                        expected: new_n,
                        found: mapping[i] + 1,
                    })?;
                exps[j] = exps[j].checked_add(k).ok_or(Error::DegreeOverflow)?;
            }
            raw.push((exps, m.coeff.clone()));
        }
        Ok(Self::from_terms(new_n, raw, sr))
    }

    /// Embeds into `new_n >= n` indeterminates, shifting indices by `offset`.
    pub fn shift(&self, new_n: usize, offset: usize, sr: &Semiring) -> Result<Polynomial> {
        let mapping: Vec<usize> = (0..self.n).map(|i| i + offset).collect();
        self.remap(new_n, &mapping, sr)
    }

    /// Applies `f` to every coefficient, producing a polynomial over `target`.
    pub fn map_coeffs(
        &self,
        target: &Semiring,
        mut f: impl FnMut(&Element) -> Result<Element>,
    ) -> Result<Polynomial> {
        let raw = self
            .terms
            .iter()
            .map(|m| Ok((m.exps.clone(), f(&m.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(self.n, raw, target))
    }

    /// Parses text such as `x1^2 + 2*x1*x2 - 1/2` over the base semiring.
    pub fn parse(text: &str, n: usize, sr: &Semiring) -> Result<Polynomial> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut raw = Vec::new();
        for (negative, term) in split_signed_terms(text)? {
            let mut coeff = sr.one();
            let mut exps = vec![0u32; n];
            for factor in split_top_level(term, '*') {
                let factor = factor.trim();
                if let Some(inner) = factor.strip_prefix('(').and_then(|f| f.strip_suffix(')')) {
                    coeff = sr.mul(&coeff, &sr.parse_element(inner)?);
                } else if let Some((i, k)) = parse_var_power(factor)? {
                    if i == 0 || i > n {
                        return Err(Error::Parse(format!(
                            "indeterminate x{i} out of range in {text:?} (n = {n})"
                        )));
                    }
                    exps[i - 1] = exps[i - 1].checked_add(k).ok_or(Error::DegreeOverflow)?;
                } else {
                    coeff = sr.mul(&coeff, &sr.parse_element(factor)?);
                }
            }
            if negative {
                coeff = sr.neg(&coeff).ok_or_else(|| {
                    Error::Parse(format!("semiring {sr} has no subtraction: {text:?}"))
                })?;
            }
            raw.push((exps, coeff));
        }
        Ok(Self::from_terms(n, raw, sr))
    }
}

fn check_cap(p: &Polynomial) -> Result<()> {
    if let Some(cap) = degree_cap() {
        let degree = p.max_degree();
        if degree > u64::from(cap) {
            return Err(Error::DegreeCap { degree, cap });
        }
    }
    Ok(())
}

fn split_signed_terms(text: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut negative = false;
    let mut start = 0;
    let mut seen_content = false;
    let mut depth = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {text:?}")))?
            }
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            let piece = text[start..i].trim();
            if piece.is_empty() {
                if seen_content {
                    return Err(Error::Parse(format!("dangling operator in {text:?}")));
                }
                // leading sign
                negative ^= ch == '-';
            } else {
                out.push((negative, piece));
                negative = ch == '-';
                seen_content = false;
            }
            start = i + ch.len_utf8();
            continue;
        }
        if !ch.is_whitespace() {
            seen_content = true;
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {text:?}")));
    }
    let piece = text[start..].trim();
    if piece.is_empty() {
        return Err(Error::Parse(format!("dangling operator in {text:?}")));
    }
    out.push((negative, piece));
    Ok(out)
}

/// Splits on `sep` outside parentheses.
fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

fn parse_var_power(factor: &str) -> Result<Option<(usize, u32)>> {
    let Some(rest) = factor.strip_prefix('x') else {
        return Ok(None);
    };
    let (idx, pow) = match rest.split_once('^') {
        Some((i, p)) => (i.trim(), Some(p.trim())),
        None => (rest.trim(), None),
    };
    let bad = || Error::Parse(format!("malformed indeterminate {factor:?}"));
    let i: usize = idx.parse().map_err(|_| bad())?;
    let k: u32 = match pow {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 1,
    };
    Ok(Some((i, k)))
}

fn is_unit(c: &Element) -> bool {
    match c {
        Element::Nat(n) => n.is_one(),
        Element::Rat(r) => r.abs().is_one(),
        Element::Bool(b) => *b,
        Element::MinPlus(v) => v.as_ref().is_some_and(|n| n.bits() == 0),
        Element::Poly(p) => {
            p.terms.len() == 1 && p.terms[0].is_constant() && is_unit(&p.terms[0].coeff)
        }
    }
}

fn fmt_coeff(c: &Element) -> String {
    match c {
        Element::Rat(r) if r.denom().is_one() => r.numer().abs().to_string(),
        Element::Rat(r) => format!("{}/{}", r.numer().abs(), r.denom()),
        Element::Poly(p) => format!("({p})"),
        other => other.to_string(),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, m) in self.terms.iter().enumerate() {
            let negative = Semiring::is_negative(&m.coeff);
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{k}", i + 1)
                    }
                })
                .collect();
            let coeff = fmt_coeff(&m.coeff);
            let unit = is_unit(&m.coeff);
            if vars.is_empty() {
                f.write_str(&coeff)?;
            } else if unit {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::check_axioms;

    fn nat(text: &str, n: usize) -> Polynomial {
        Polynomial::parse(text, n, &Semiring::Nat).unwrap()
    }

    #[test]
    fn product_distributes() {
        let p = nat("x1 + x2", 2);
        let q = nat("x1", 2);
        assert_eq!(p.mul(&q, &Semiring::Nat).unwrap(), nat("x1^2 + x1*x2", 2));
    }

    #[test]
    fn additive_identity() {
        let p = nat("3*x1*x2 + x2^2 + 7", 2);
        assert_eq!(p.add(&Polynomial::zero(2), &Semiring::Nat).unwrap(), p);
    }

    #[test]
    fn boolean_coefficients_collapse() {
        let b = Semiring::Bool;
        let p = Polynomial::parse("x1 + 1", 1, &b).unwrap();
        let sq = p.mul(&p, &b).unwrap();
        assert_eq!(sq, Polynomial::parse("x1^2 + x1 + 1", 1, &b).unwrap());
    }

    #[test]
    fn substitution_examples() {
        let sr = Semiring::Nat;
        let p = nat("x1^2", 1);
        let got = p.substitute(&[nat("x1 + x2", 2)], 2, &sr).unwrap();
        assert_eq!(got, nat("x1^2 + 2*x1*x2 + x2^2", 2));

        let c = nat("5", 3);
        let subs = [nat("x1", 1), nat("x1^2", 1), nat("4", 1)];
        assert_eq!(c.substitute(&subs, 1, &sr).unwrap(), nat("5", 1));

        let p = nat("x1*x2", 2);
        let got = p.substitute(&[nat("2", 2), nat("x1", 2)], 2, &sr).unwrap();
        assert_eq!(got, nat("2*x1", 2));

        assert!(matches!(
            p.substitute(&[nat("x1", 2)], 2, &sr),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let sr = Semiring::Nat;
        assert_eq!(
            nat("x1^2", 1).evaluate(&[Element::nat(2)], &sr).unwrap(),
            Element::nat(4)
        );
        assert_eq!(
            nat("2*x2", 2)
                .evaluate(&[Element::nat(7), Element::nat(3)], &sr)
                .unwrap(),
            Element::nat(6)
        );
        let q = Semiring::Rat;
        let p = Polynomial::parse("x1 - x2", 2, &q).unwrap();
        assert_eq!(
            p.evaluate(&[Element::rat(1, 2), Element::rat(1, 3)], &q)
                .unwrap(),
            Element::rat(1, 6)
        );
        assert!(p.evaluate(&[Element::rat(1, 2)], &q).is_err());
    }

    #[test]
    fn degree_information() {
        let info = nat("x1^2*x2", 2).degree_info();
        assert_eq!(info.max_degree, 3);
        assert!(!nat("x1 + x2^2", 2).degree_info().is_uniform_degree);
        let zero = Polynomial::zero(2).degree_info();
        assert_eq!((zero.max_degree, zero.min_degree), (0, 0));
        assert!(zero.monomials.is_empty());
    }

    #[test]
    fn non_constant_sums() {
        assert!(nat("x1 + x2^2", 2).is_non_constant_sum());
        assert!(!nat("x1 + 1", 2).is_non_constant_sum());
        assert!(Polynomial::zero(2).is_non_constant_sum());
    }

    #[test]
    fn mismatched_indeterminates() {
        let sr = Semiring::Nat;
        assert!(nat("x1", 1).add(&nat("x1", 2), &sr).is_err());
        assert!(nat("x1", 1).mul(&nat("x1", 2), &sr).is_err());
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let sr = Semiring::Nat;
        let big = Polynomial::monomial(Element::nat(1), vec![u32::MAX], &sr);
        assert_eq!(big.mul(&nat("x1", 1), &sr), Err(Error::DegreeOverflow));
    }

    #[test]
    fn text_round_trip() {
        let q = Semiring::Rat;
        for text in ["x1^2 - 1/2*x1*x2 + 3", "-x2", "0", "x1*x2^3 - x1"] {
            let p = Polynomial::parse(text, 2, &q).unwrap();
            assert_eq!(Polynomial::parse(&p.to_string(), 2, &q).unwrap(), p);
        }
        assert!(Polynomial::parse("x3", 2, &q).is_err());
        assert!(Polynomial::parse("x1 - x2", 2, &Semiring::Nat).is_err());
        assert!(Polynomial::parse("x1 +", 2, &q).is_err());

        let bx = Semiring::poly(Semiring::Bool, 1);
        let p = Polynomial::parse("(x1^2 + x1)*x3 + x1 + (1)", 3, &bx).unwrap();
        assert_eq!(p.to_string(), "x1 + (x1^2 + x1)*x3 + (1)");
        assert_eq!(Polynomial::parse(&p.to_string(), 3, &bx).unwrap(), p);
        assert!(Polynomial::parse("(x1*x3", 3, &bx).is_err());
    }

    #[test]
    fn polynomials_form_a_semiring() {
        let base = Semiring::Nat;
        let sr = Semiring::poly(base.clone(), 2);
        let samples: Vec<Element> = ["0", "1", "x1", "x1 + x2", "2*x1*x2 + 1", "x2^2"]
            .iter()
            .map(|t| Element::Poly(Polynomial::parse(t, 2, &base).unwrap()))
            .collect();
        assert!(check_axioms(&sr, &samples).is_empty());

        let bx = Semiring::poly(Semiring::Bool, 1);
        let samples: Vec<Element> = ["0", "1", "x1", "x1 + 1", "x1^2", "x1^3 + x1"]
            .iter()
            .map(|t| bx.parse_element(t).unwrap())
            .collect();
        assert!(check_axioms(&bx, &samples).is_empty());
    }
}
