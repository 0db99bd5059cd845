//! Exact Gröbner bases over ℚ[x_1..x_n].
//!
//! Works on its own sparse representation with an explicit monomial order;
//! conversion from and to [`Polynomial`] happens at the boundary and
//! rejects anything that is not a rational polynomial.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polynomial::{grlex, Polynomial};
use crate::semiring::{Element, Semiring};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Total degree first, ties broken lexicographically (x1 > x2 > ...).
    #[default]
    GradedLex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::GradedLex => grlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    exps: Vec<u32>,
    coeff: BigRational,
}

/// Terms sorted by decreasing monomial, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
struct RPoly {
    n: usize,
    terms: Vec<Term>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

fn quotient(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

impl RPoly {
    fn zero(n: usize) -> Self {
        RPoly {
            n,
            terms: Vec::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &Term {
        &self.terms[0]
    }

    fn from_poly(p: &Polynomial, order: MonomialOrder) -> Result<Self> {
        let mut terms = p
            .terms()
            .iter()
            .map(|m| match m.coeff() {
                Element::Rat(r) => Ok(Term {
                    exps: m.exponents().to_vec(),
                    coeff: r.clone(),
                }),
                other => Err(Error::NotAField(format!(
                    "coefficient {other} is not rational"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        terms.sort_by(|a, b| order.cmp(&b.exps, &a.exps));
        Ok(RPoly { n: p.n(), terms })
    }

    fn to_poly(&self) -> Polynomial {
        Polynomial::from_terms(
            self.n,
            self.terms
                .iter()
                .map(|t| (t.exps.clone(), Element::Rat(t.coeff.clone()))),
            &Semiring::Rat,
        )
    }

    /// self − c · x^shift · g.
    fn sub_scaled(&self, c: &BigRational, shift: &[u32], g: &RPoly, order: MonomialOrder) -> RPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let shifted = g.terms.iter().map(|t| Term {
            exps: t.exps.iter().zip(shift).map(|(a, b)| a + b).collect(),
            coeff: -(&t.coeff * c),
        });
        for t in shifted {
            while i < self.terms.len()
                && order.cmp(&self.terms[i].exps, &t.exps) == Ordering::Greater
            {
                out.push(self.terms[i].clone());
                i += 1;
            }
            if i < self.terms.len() && self.terms[i].exps == t.exps {
                let s = &self.terms[i].coeff + &t.coeff;
                if !s.is_zero() {
                    out.push(Term {
                        exps: t.exps,
                        coeff: s,
                    });
                }
                i += 1;
            } else {
                out.push(t);
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        RPoly {
            n: self.n,
            terms: out,
        }
    }

    fn scale(&self, c: &BigRational) -> RPoly {
        RPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: &t.coeff * c,
                })
                .collect(),
        }
    }

    fn monic(&self) -> RPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().coeff.recip();
        self.scale(&inv)
    }

    /// Integer coefficients with gcd 1 and a positive leading coefficient.
    fn primitive(&self) -> RPoly {
        if self.is_zero() {
            return self.clone();
        }
        let den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.coeff.denom()));
        let nums: Vec<BigInt> = self
            .terms
            .iter()
            .map(|t| t.coeff.numer() * (&den / t.coeff.denom()))
            .collect();
        let mut g = nums.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if nums[0].is_negative() {
            g = -g;
        }
        RPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .zip(nums)
                .map(|(t, x)| Term {
                    exps: t.exps.clone(),
                    coeff: BigRational::from_integer(x / &g),
                })
                .collect(),
        }
    }

    fn s_poly(&self, other: &RPoly, order: MonomialOrder) -> RPoly {
        let (f, g) = (self.lead(), other.lead());
        let l = lcm(&f.exps, &g.exps);
        let left = RPoly::zero(self.n).sub_scaled(
            &(-f.coeff.recip()),
            &quotient(&l, &f.exps),
            self,
            order,
        );
        left.sub_scaled(&g.coeff.recip(), &quotient(&l, &g.exps), other, order)
    }
}

/// Full reduction of `p` modulo `basis`; with `cofactors`, the quotients
/// are accumulated as well.
fn reduce(
    p: &RPoly,
    basis: &[RPoly],
    order: MonomialOrder,
    mut cofactors: Option<&mut Vec<RPoly>>,
) -> RPoly {
    let mut rest = p.clone();
    let mut remainder: Vec<Term> = Vec::new();
    while !rest.is_zero() {
        let lt = rest.lead().clone();
        match basis
            .iter()
            .enumerate()
            .find(|(_, g)| divides(&g.lead().exps, &lt.exps))
        {
            Some((k, g)) => {
                let c = &lt.coeff / &g.lead().coeff;
                let shift = quotient(&lt.exps, &g.lead().exps);
                rest = rest.sub_scaled(&c, &shift, g, order);
                if let Some(cf) = cofactors.as_deref_mut() {
                    let t = RPoly {
                        n: p.n,
                        terms: vec![Term {
                            exps: shift,
                            coeff: c,
                        }],
                    };
                    cf[k] = cf[k].sub_scaled(&-BigRational::one(), &vec![0; p.n], &t, order);
                }
            }
            None => {
                remainder.push(lt);
                rest.terms.remove(0);
            }
        }
    }
    RPoly {
        n: p.n,
        terms: remainder,
    }
}

fn check_n(polys: &[&Polynomial]) -> Result<usize> {
    let n = polys.first().map(|p| p.n()).unwrap_or(0);
    for p in polys {
        if p.n() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: p.n(),
            });
        }
    }
    Ok(n)
}

/// Remainder of multivariate division of `p` by the list `g`, in order.
pub fn normal_form(p: &Polynomial, g: &[Polynomial], order: MonomialOrder) -> Result<Polynomial> {
    Ok(divide(p, g, order)?.remainder)
}

/// p = Σ quotients[i]·g[i] + remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

pub fn divide(p: &Polynomial, g: &[Polynomial], order: MonomialOrder) -> Result<Division> {
    let mut all: Vec<&Polynomial> = vec![p];
    all.extend(g.iter());
    let n = check_n(&all)?;
    let rp = RPoly::from_poly(p, order)?;
    let divisors: Vec<RPoly> = g
        .iter()
        .map(|x| RPoly::from_poly(x, order))
        .collect::<Result<_>>()?;
    // a zero divisor has no leading term; it never divides anything
    let live: Vec<usize> = (0..divisors.len())
        .filter(|&i| !divisors[i].is_zero())
        .collect();
    let live_polys: Vec<RPoly> = live.iter().map(|&i| divisors[i].clone()).collect();
    let mut cof = vec![RPoly::zero(n); live.len()];
    let r = reduce(&rp, &live_polys, order, Some(&mut cof));
    let mut quotients = vec![Polynomial::zero(n); g.len()];
    for (k, &i) in live.iter().enumerate() {
        quotients[i] = cof[k].to_poly();
    }
    Ok(Division {
        quotients,
        remainder: r.to_poly(),
    })
}

/// A reduced Gröbner basis: monic, inter-reduced, sorted by decreasing
/// leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    n: usize,
    gens: Vec<RPoly>,
}

impl GroebnerBasis {
    /// The basis of the zero ideal.
    pub fn empty(n: usize, order: MonomialOrder) -> Self {
        GroebnerBasis {
            order,
            n,
            gens: Vec::new(),
        }
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].lead().exps.iter().all(|&e| e == 0)
    }

    pub fn generators(&self) -> Vec<Polynomial> {
        self.gens.iter().map(RPoly::to_poly).collect()
    }

    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        self.check(p)?;
        Ok(reduce(
            &RPoly::from_poly(p, self.order)?,
            &self.gens,
            self.order,
            None,
        )
        .to_poly())
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        self.check(p)?;
        Ok(reduce(
            &RPoly::from_poly(p, self.order)?,
            &self.gens,
            self.order,
            None,
        )
        .is_zero())
    }

    fn check(&self, p: &Polynomial) -> Result<()> {
        if p.n() == self.n {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                expected: self.n,
                found: p.n(),
            })
        }
    }

    /// Adds `p` to the ideal and restores a reduced basis. Only pairs that
    /// involve new elements are examined.
    pub fn extend(&mut self, p: &Polynomial) -> Result<()> {
        self.check(p)?;
        let rp = RPoly::from_poly(p, self.order)?;
        let h = reduce(&rp, &self.gens, self.order, None);
        if h.is_zero() {
            return Ok(());
        }
        let mut gens = std::mem::take(&mut self.gens);
        let old = gens.len();
        gens.push(h.primitive());
        let pairs: Vec<(usize, usize)> = (0..old).map(|i| (i, old)).collect();
        self.gens = complete(gens, pairs, self.order);
        Ok(())
    }

    /// Every S-polynomial of the basis reduces to zero.
    pub fn audit(&self) -> bool {
        (0..self.gens.len()).all(|i| {
            (i + 1..self.gens.len()).all(|j| {
                let s = self.gens[i].s_poly(&self.gens[j], self.order);
                reduce(&s, &self.gens, self.order, None).is_zero()
            })
        })
    }
}

/// Buchberger completion followed by reduction. A pair is skipped when
/// its leading monomials are coprime, or when some third generator's
/// leading monomial divides their lcm and both of its pairs with them are
/// already done (the chain criterion).
fn complete(
    mut gens: Vec<RPoly>,
    initial_pairs: Vec<(usize, usize)>,
    order: MonomialOrder,
) -> Vec<RPoly> {
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let weight = |g: &[RPoly], i: usize, j: usize| -> u64 {
        lcm(&g[i].lead().exps, &g[j].lead().exps)
            .iter()
            .map(|&e| u64::from(e))
            .sum()
    };
    for (i, j) in initial_pairs {
        pairs.insert((weight(&gens, i, j), i, j));
        pending.insert((i.min(j), i.max(j)));
    }
    while let Some(pair) = pairs.pop_first() {
        let (_, i, j) = pair;
        pending.remove(&(i.min(j), i.max(j)));
        let (li, lj) = (&gens[i].lead().exps, &gens[j].lead().exps);
        if coprime(li, lj) {
            continue;
        }
        let l = lcm(li, lj);
        let chained = (0..gens.len()).any(|k| {
            k != i
                && k != j
                && divides(&gens[k].lead().exps, &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chained {
            continue;
        }
        let s = gens[i].s_poly(&gens[j], order);
        let h = reduce(&s, &gens, order, None);
        if h.is_zero() {
            continue;
        }
        let h = h.primitive();
        if h.lead().exps.iter().all(|&e| e == 0) {
            return vec![h.monic()];
        }
        let k = gens.len();
        gens.push(h);
        for i in 0..k {
            pairs.insert((weight(&gens, i, k), i, k));
            pending.insert((i, k));
        }
    }
    reduce_basis(gens, order)
}

fn reduce_basis(gens: Vec<RPoly>, order: MonomialOrder) -> Vec<RPoly> {
    let mut minimal: Vec<RPoly> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let lm = &g.lead().exps;
        let redundant = gens
            .iter()
            .enumerate()
            .any(|(j, o)| j != i && divides(&o.lead().exps, lm) && (o.lead().exps != *lm || j < i));
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced: Vec<RPoly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<RPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        // leading terms are untouched since no other leading monomial divides them
        reduced.push(reduce(&minimal[i], &others, order, None).monic());
    }
    reduced.sort_by(|a, b| order.cmp(&b.lead().exps, &a.lead().exps));
    reduced
}

/// A reduced Gröbner basis of the ideal generated by `f`.
pub fn buchberger(f: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis> {
    let refs: Vec<&Polynomial> = f.iter().collect();
    let n = check_n(&refs)?;
    let gens: Vec<RPoly> = f
        .iter()
        .map(|p| RPoly::from_poly(p, order).map(|r| r.primitive()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    if let Some(c) = gens.iter().find(|g| g.lead().exps.iter().all(|&e| e == 0)) {
        return Ok(GroebnerBasis {
            order,
            n,
            gens: vec![c.monic()],
        });
    }
    let pairs = (0..gens.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    Ok(GroebnerBasis {
        order,
        n,
        gens: complete(gens, pairs, order),
    })
}

/// True iff p reduces to zero modulo the basis.
pub fn ideal_member(p: &Polynomial, basis: &GroebnerBasis) -> Result<bool> {
    basis.contains(p)
}
