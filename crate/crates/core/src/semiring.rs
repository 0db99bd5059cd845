//! Commutative semirings.
//!
//! Elements carry no semiring context of their own: every operation goes
//! through a [`Semiring`] value, so automata over different weight
//! structures can live side by side in one program.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;

/// The operations of a commutative semiring over some element type.
///
/// [`Semiring`] is the runtime-selectable implementation used throughout the
/// crate; the trait exists so that [`check_axioms`] can also audit
/// hand-written descriptors.
pub trait SemiringOps {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// Additive inverse, for semirings that are rings.
    fn neg(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    fn has_subtraction(&self) -> bool {
        false
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.eq(a, &self.zero())
    }
}

/// The semirings shipped with the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Semiring {
    /// (ℕ, +, ·, 0, 1) with arbitrary precision.
    Nat,
    /// Exact rationals; the only instance with subtraction.
    Rat,
    /// ({0,1}, ∨, ∧, 0, 1).
    Bool,
    /// (ℕ ∪ {∞}, min, +, ∞, 0).
    MinPlus,
    /// Polynomials over `base` in the indeterminates x1..x`vars`.
    Poly { base: Box<Semiring>, vars: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Nat(BigUint),
    Rat(BigRational),
    Bool(bool),
    /// `None` is ∞.
    MinPlus(Option<BigUint>),
    Poly(Polynomial),
}

impl Element {
    pub fn nat(n: u64) -> Self {
        Element::Nat(BigUint::from(n))
    }

    pub fn rat(num: i64, den: i64) -> Self {
        Element::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_nat(&self) -> Option<&BigUint> {
        match self {
            Element::Nat(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            Element::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        match self {
            Element::Poly(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Nat(n) => write!(f, "{n}"),
            Element::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Element::Bool(b) => write!(f, "{}", u8::from(*b)),
            Element::MinPlus(None) => write!(f, "inf"),
            Element::MinPlus(Some(n)) => write!(f, "{n}"),
            Element::Poly(p) => write!(f, "{p}"),
        }
    }
}

impl Semiring {
    pub fn poly(base: Semiring, vars: usize) -> Self {
        Semiring::Poly {
            base: Box::new(base),
            vars,
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Whether `e` is a well-formed element of this semiring.
    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (Semiring::Nat, Element::Nat(_))
            | (Semiring::Rat, Element::Rat(_))
            | (Semiring::Bool, Element::Bool(_))
            | (Semiring::MinPlus, Element::MinPlus(_)) => true,
            (Semiring::Poly { base, vars }, Element::Poly(p)) => {
                p.n() == *vars && p.terms().iter().all(|m| base.contains(m.coeff()))
            }
            _ => false,
        }
    }

    pub fn check_element(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                element: format!("{e:?}"),
                semiring: self.to_string(),
            })
        }
    }

    /// Sums of ones: the image of `n` under the unique semiring map from ℕ.
    pub fn from_nat(&self, n: u64) -> Element {
        match self {
            Semiring::Nat => Element::nat(n),
            Semiring::Rat => Element::rat(n as i64, 1),
            Semiring::Bool => Element::Bool(n > 0),
            Semiring::MinPlus => lift_bool(n > 0, self),
            Semiring::Poly { base, vars } => {
                Element::Poly(Polynomial::constant(*vars, base.from_nat(n), base))
            }
        }
    }

    /// Parses the textual form of an element: decimal naturals, `a/b`
    /// rationals, `0`/`1` booleans, `inf` for min-plus infinity, and
    /// polynomial text such as `x1^2 + x1 + 1` for polynomial semirings.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t = text.trim();
        let bad = || Error::Parse(format!("{t:?} is not an element of {self}"));
        match self {
            Semiring::Nat => BigUint::from_str(t).map(Element::Nat).map_err(|_| bad()),
            Semiring::Rat => parse_rational(t).map(Element::Rat).ok_or_else(bad),
            Semiring::Bool => match t {
                "0" | "false" => Ok(Element::Bool(false)),
                "1" | "true" => Ok(Element::Bool(true)),
                _ => Err(bad()),
            },
            Semiring::MinPlus => {
                if t == "inf" || t == "∞" {
                    Ok(Element::MinPlus(None))
                } else {
                    BigUint::from_str(t)
                        .map(|n| Element::MinPlus(Some(n)))
                        .map_err(|_| bad())
                }
            }
            Semiring::Poly { base, vars } => Polynomial::parse(t, *vars, base).map(Element::Poly),
        }
    }
}

pub(crate) fn parse_rational(t: &str) -> Option<BigRational> {
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semiring::Nat => f.write_str("nat"),
            Semiring::Rat => f.write_str("rat"),
            Semiring::Bool => f.write_str("bool"),
            Semiring::MinPlus => f.write_str("minplus"),
            Semiring::Poly { base, vars } => write!(f, "poly({base},{vars})"),
        }
    }
}

impl FromStr for Semiring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "nat" => Ok(Semiring::Nat),
            "rat" => Ok(Semiring::Rat),
            "bool" => Ok(Semiring::Bool),
            "minplus" => Ok(Semiring::MinPlus),
            _ => {
                let inner = s
                    .strip_prefix("poly(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown semiring {s:?}")))?;
                let (base, k) = inner
                    .rsplit_once(',')
                    .ok_or_else(|| Error::Parse(format!("malformed semiring {s:?}")))?;
                let vars = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad indeterminate count in {s:?}")))?;
                Ok(Semiring::poly(base.parse()?, vars))
            }
        }
    }
}

impl SemiringOps for Semiring {
    type Elem = Element;

    fn zero(&self) -> Element {
        match self {
            Semiring::Nat => Element::Nat(BigUint::zero()),
            Semiring::Rat => Element::Rat(BigRational::zero()),
            Semiring::Bool => Element::Bool(false),
            Semiring::MinPlus => Element::MinPlus(None),
            Semiring::Poly { vars, .. } => Element::Poly(Polynomial::zero(*vars)),
        }
    }

    fn one(&self) -> Element {
        match self {
            Semiring::Nat => Element::Nat(BigUint::one()),
            Semiring::Rat => Element::Rat(BigRational::one()),
            Semiring::Bool => Element::Bool(true),
            Semiring::MinPlus => Element::MinPlus(Some(BigUint::zero())),
            Semiring::Poly { base, vars } => {
                Element::Poly(Polynomial::constant(*vars, base.one(), base))
            }
        }
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Semiring::Nat, Element::Nat(x), Element::Nat(y)) => Element::Nat(x + y),
            (Semiring::Rat, Element::Rat(x), Element::Rat(y)) => Element::Rat(x + y),
            (Semiring::Bool, Element::Bool(x), Element::Bool(y)) => Element::Bool(*x || *y),
            (Semiring::MinPlus, Element::MinPlus(x), Element::MinPlus(y)) => {
                Element::MinPlus(match (x, y) {
                    (None, v) | (v, None) => v.clone(),
                    (Some(x), Some(y)) => Some(x.min(y).clone()),
                })
            }
            (Semiring::Poly { base, .. }, Element::Poly(p), Element::Poly(q)) => Element::Poly(
                p.add(q, base)
                    .expect("coefficient polynomials share their indeterminates"),
            ),
            _ => panic!("elements {a:?} and {b:?} do not belong to semiring {self}"),
        }
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Semiring::Nat, Element::Nat(x), Element::Nat(y)) => Element::Nat(x * y),
            (Semiring::Rat, Element::Rat(x), Element::Rat(y)) => Element::Rat(x * y),
            (Semiring::Bool, Element::Bool(x), Element::Bool(y)) => Element::Bool(*x && *y),
            (Semiring::MinPlus, Element::MinPlus(x), Element::MinPlus(y)) => {
                Element::MinPlus(match (x, y) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                })
            }
            (Semiring::Poly { base, .. }, Element::Poly(p), Element::Poly(q)) => Element::Poly(
                p.mul_uncapped(q, base)
                    .expect("exponent overflow in coefficient"),
            ),
            _ => panic!("elements {a:?} and {b:?} do not belong to semiring {self}"),
        }
    }

    fn eq(&self, a: &Element, b: &Element) -> bool {
        a == b
    }

    fn neg(&self, a: &Element) -> Option<Element> {
        match (self, a) {
            (Semiring::Rat, Element::Rat(x)) => Some(Element::Rat(-x)),
            (Semiring::Poly { base, .. }, Element::Poly(p)) if base.has_subtraction() => {
                Some(Element::Poly(p.neg(base)?))
            }
            _ => None,
        }
    }

    fn has_subtraction(&self) -> bool {
        match self {
            Semiring::Rat => true,
            Semiring::Poly { base, .. } => base.has_subtraction(),
            _ => false,
        }
    }

    fn is_zero(&self, a: &Element) -> bool {
        match a {
            Element::Nat(n) => n.is_zero(),
            Element::Rat(r) => r.is_zero(),
            Element::Bool(b) => !b,
            Element::MinPlus(v) => v.is_none(),
            Element::Poly(p) => p.is_zero(),
        }
    }
}

impl Semiring {
    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Element {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Element {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, base: &Element, mut exp: u64) -> Element {
        let mut acc = self.one();
        let mut sq = base.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `a - b`, available only when the semiring has subtraction.
    pub fn sub(&self, a: &Element, b: &Element) -> Option<Element> {
        Some(self.add(a, &self.neg(b)?))
    }

    pub fn is_one(&self, a: &Element) -> bool {
        *a == self.one()
    }

    /// Rational value of a natural or rational element, used to embed
    /// ℕ-weighted automata into ℚ.
    pub fn to_rational(e: &Element) -> Option<BigRational> {
        match e {
            Element::Nat(n) => Some(BigRational::from_integer(BigInt::from(n.clone()))),
            Element::Rat(r) => Some(r.clone()),
            Element::Bool(b) => Some(BigRational::from_integer(BigInt::from(u8::from(*b)))),
            _ => None,
        }
    }

    pub fn is_negative(e: &Element) -> bool {
        matches!(e, Element::Rat(r) if r.is_negative())
    }
}

/// Maps `true` to one and `false` to zero.
pub fn lift_bool<S: SemiringOps>(b: bool, desc: &S) -> S::Elem {
    if b {
        desc.one()
    } else {
        desc.zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    AddAssociative,
    AddCommutative,
    AddIdentity,
    MulAssociative,
    MulCommutative,
    MulIdentity,
    LeftDistributive,
    RightDistributive,
    ZeroAnnihilates,
    AdditiveInverse,
}

#[derive(Clone, Debug)]
pub struct AxiomViolation<E> {
    pub axiom: Axiom,
    pub witnesses: Vec<E>,
}

/// Checks every commutative-semiring axiom on all triples drawn from
/// `samples`. The report holds one entry per failing axiom with the first
/// witness found; an empty report means every check passed.
pub fn check_axioms<S: SemiringOps>(desc: &S, samples: &[S::Elem]) -> Vec<AxiomViolation<S::Elem>> {
    let mut report: Vec<AxiomViolation<S::Elem>> = Vec::new();
    let mut fail = |axiom: Axiom, witnesses: Vec<S::Elem>| {
        if !report.iter().any(|v| v.axiom == axiom) {
            report.push(AxiomViolation { axiom, witnesses });
        }
    };
    let zero = desc.zero();
    let one = desc.one();

    for a in samples {
        if !desc.eq(&desc.add(a, &zero), a) || !desc.eq(&desc.add(&zero, a), a) {
            fail(Axiom::AddIdentity, vec![a.clone()]);
        }
        if !desc.eq(&desc.mul(a, &one), a) || !desc.eq(&desc.mul(&one, a), a) {
            fail(Axiom::MulIdentity, vec![a.clone()]);
        }
        if !desc.is_zero(&desc.mul(a, &zero)) || !desc.is_zero(&desc.mul(&zero, a)) {
            fail(Axiom::ZeroAnnihilates, vec![a.clone()]);
        }
        if desc.has_subtraction() {
            match desc.neg(a) {
                Some(n) if desc.is_zero(&desc.add(a, &n)) => {}
                _ => fail(Axiom::AdditiveInverse, vec![a.clone()]),
            }
        }
        for b in samples {
            if !desc.eq(&desc.add(a, b), &desc.add(b, a)) {
                fail(Axiom::AddCommutative, vec![a.clone(), b.clone()]);
            }
            if !desc.eq(&desc.mul(a, b), &desc.mul(b, a)) {
                fail(Axiom::MulCommutative, vec![a.clone(), b.clone()]);
            }
            for c in samples {
                let w = || vec![a.clone(), b.clone(), c.clone()];
                if !desc.eq(&desc.add(&desc.add(a, b), c), &desc.add(a, &desc.add(b, c))) {
                    fail(Axiom::AddAssociative, w());
                }
                if !desc.eq(&desc.mul(&desc.mul(a, b), c), &desc.mul(a, &desc.mul(b, c))) {
                    fail(Axiom::MulAssociative, w());
                }
                if !desc.eq(
                    &desc.mul(c, &desc.add(a, b)),
                    &desc.add(&desc.mul(c, a), &desc.mul(c, b)),
                ) {
                    fail(Axiom::LeftDistributive, w());
                }
                if !desc.eq(
                    &desc.mul(&desc.add(a, b), c),
                    &desc.add(&desc.mul(a, c), &desc.mul(b, c)),
                ) {
                    fail(Axiom::RightDistributive, w());
                }
            }
        }
    }
    report
}
