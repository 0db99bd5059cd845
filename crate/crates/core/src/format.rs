//! JSON documents for automata, homomorphisms, trees and polynomial lists.
//!
//! Every document is an object with a `kind` tag. Unknown fields are
//! rejected. Elements are strings (`"12"`, `"3/4"`, `"0"`/`"1"`, `"inf"`)
//! except in polynomial semirings, where they are nested polynomials.
//! Polynomials are `{"n": n, "terms": [{"c": elem, "e": {"i": pow}}]}` with
//! 1-based indeterminate indices; plain polynomial text is accepted on load.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::convert::NivatDecomposition;
use crate::error::{Error, Result};
use crate::groebner::MonomialOrder;
use crate::pa::PolyAutomaton;
use crate::polynomial::Polynomial;
use crate::semiring::{Element, Semiring};
use crate::tree::{RankedAlphabet, Tree, TreeHomomorphism};
use crate::wafa::Wafa;
use crate::wfta::{Dta, Rule, Wfta};

/// A list of polynomials over a common ring, as fed to `groebner basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySet {
    pub semiring: Semiring,
    pub n: usize,
    pub order: MonomialOrder,
    pub polys: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub enum Document {
    Wafa(Wafa),
    Wfta(Wfta),
    Dta(Dta),
    Pa(PolyAutomaton),
    Hom(TreeHomomorphism),
    Tree(Tree),
    Polys(PolySet),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Wafa(_) => "wafa",
            Document::Wfta(_) => "wfta",
            Document::Dta(_) => "dta",
            Document::Pa(_) => "pa",
            Document::Hom(_) => "hom",
            Document::Tree(_) => "tree",
            Document::Polys(_) => "polys",
        }
    }

    pub fn parse(text: &str) -> Result<Document> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Document> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| doc("missing \"kind\" tag"))?;
        match kind {
            "wafa" => wafa_from_value(v).map(Document::Wafa),
            "wfta" => wfta_from_value(v).map(Document::Wfta),
            "dta" => dta_from_value(v).map(Document::Dta),
            "pa" => pa_from_value(v).map(Document::Pa),
            "hom" => hom_from_value(v).map(Document::Hom),
            "tree" => tree_from_value(v).map(Document::Tree),
            "polys" => polys_from_value(v).map(Document::Polys),
            other => Err(doc(format!("unknown kind {other:?}"))),
        }
    }

    pub fn to_value(&self) -> Result<Value> {
        match self {
            Document::Wafa(a) => Ok(wafa_to_value(a)),
            Document::Wfta(b) => wfta_to_value(b),
            Document::Dta(d) => dta_to_value(d),
            Document::Pa(p) => Ok(pa_to_value(p)),
            Document::Hom(h) => Ok(hom_to_value(h)),
            Document::Tree(t) => Ok(json!({"kind": "tree", "tree": t.to_string()})),
            Document::Polys(s) => Ok(polys_to_value(s)),
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> Result<String> {
        Ok(pretty(&self.to_value()?))
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn doc(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

/// Field access that remembers which keys were read.
struct Fields<'a> {
    kind: &'a str,
    map: &'a Map<String, Value>,
    allowed: &'static [&'static str],
}

impl<'a> Fields<'a> {
    fn new(v: &'a Value, kind: &'a str, allowed: &'static [&'static str]) -> Result<Self> {
        let map = v
            .as_object()
            .ok_or_else(|| doc("document must be a JSON object"))?;
        if let Some(k) = map
            .keys()
            .find(|k| k.as_str() != "kind" && !allowed.contains(&k.as_str()))
        {
            return Err(doc(format!("unknown field {k:?} in {kind} document")));
        }
        Ok(Fields { kind, map, allowed })
    }

    fn opt(&self, key: &str) -> Option<&'a Value> {
        debug_assert!(self.allowed.contains(&key));
        self.map.get(key).filter(|v| !v.is_null())
    }

    fn req(&self, key: &str) -> Result<&'a Value> {
        self.opt(key)
            .ok_or_else(|| doc(format!("{} document lacks field {key:?}", self.kind)))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.req(key)?
            .as_str()
            .ok_or_else(|| doc(format!("field {key:?} must be a string")))
    }

    fn strings(&self, key: &str) -> Result<Vec<String>> {
        strings(self.req(key)?, key)
    }

    fn semiring(&self) -> Result<Semiring> {
        self.str("semiring")?.parse()
    }
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| doc(format!("{what:?} must be an array of strings")))?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| doc(format!("{what:?} must be an array of strings")))
        })
        .collect()
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| doc(format!("{what:?} must be an object")))
}

fn index_of(names: &[String], name: &str) -> Result<usize> {
    names
        .iter()
        .position(|s| s == name)
        .ok_or_else(|| Error::UnknownState(name.to_string()))
}

fn single_char(s: &str) -> Result<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(doc(format!("{s:?} is not a single letter"))),
    }
}

// ---- elements and polynomials ----

pub fn element_to_value(e: &Element) -> Value {
    match e {
        Element::Poly(p) => poly_to_value(p),
        other => Value::String(other.to_string()),
    }
}

pub fn element_from_value(v: &Value, sr: &Semiring) -> Result<Element> {
    let e = match (v, sr) {
        (Value::String(s), _) => sr.parse_element(s)?,
        (Value::Number(n), _) => sr.parse_element(&n.to_string())?,
        (Value::Bool(b), Semiring::Bool) => Element::Bool(*b),
        (Value::Object(_), Semiring::Poly { base, vars }) => {
            let p = poly_from_value(v, *vars, base)?;
            Element::Poly(p)
        }
        _ => return Err(doc(format!("{v} is not an element of {sr}"))),
    };
    sr.check_element(&e)?;
    Ok(e)
}

pub fn poly_to_value(p: &Polynomial) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .iter()
        .map(|m| {
            let e: Map<String, Value> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| ((i + 1).to_string(), json!(k)))
                .collect();
            json!({"c": element_to_value(m.coeff()), "e": e})
        })
        .collect();
    json!({"n": p.n(), "terms": terms})
}

/// Reads a polynomial in `n` indeterminates from its object or text form.
pub fn poly_from_value(v: &Value, n: usize, sr: &Semiring) -> Result<Polynomial> {
    if let Some(s) = v.as_str() {
        return Polynomial::parse(s, n, sr);
    }
    let f = Fields::new(v, "polynomial", &["n", "terms"])?;
    let declared =
        f.req("n")?
            .as_u64()
            .ok_or_else(|| doc("polynomial \"n\" must be a natural number"))? as usize;
    if declared != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: declared,
        });
    }
    let terms = f
        .req("terms")?
        .as_array()
        .ok_or_else(|| doc("\"terms\" must be an array"))?;
    let mut raw = Vec::with_capacity(terms.len());
    for t in terms {
        let tf = Fields::new(t, "term", &["c", "e"])?;
        let c = element_from_value(tf.req("c")?, sr)?;
        let mut exps = vec![0u32; n];
        if let Some(e) = tf.opt("e") {
            for (k, pow) in object(e, "e")? {
                let i: usize = k
                    .parse()
                    .ok()
                    .filter(|i| (1..=n).contains(i))
                    .ok_or_else(|| doc(format!("indeterminate index {k:?} outside 1..={n}")))?;
                let pow = pow
                    .as_u64()
                    .and_then(|p| u32::try_from(p).ok())
                    .ok_or_else(|| doc(format!("bad exponent {pow}")))?;
                exps[i - 1] += pow;
            }
        }
        raw.push((exps, c));
    }
    Ok(Polynomial::from_terms(n, raw, sr))
}

// ---- WAFA ----

fn wafa_from_value(v: &Value) -> Result<Wafa> {
    let f = Fields::new(
        v,
        "wafa",
        &[
            "semiring",
            "states",
            "alphabet",
            "initial",
            "transitions",
            "final",
        ],
    )?;
    let sr = f.semiring()?;
    let states = f.strings("states")?;
    let alphabet: Vec<char> = f.str("alphabet")?.chars().collect();
    let n = states.len();
    let initial = poly_from_value(f.req("initial")?, n, &sr)?;
    let mut delta = vec![vec![Polynomial::zero(n); alphabet.len()]; n];
    let mut seen = vec![vec![false; alphabet.len()]; n];
    if let Some(ts) = f.opt("transitions") {
        for t in ts
            .as_array()
            .ok_or_else(|| doc("\"transitions\" must be an array"))?
        {
            let tf = Fields::new(t, "transition", &["state", "letter", "poly"])?;
            let q = index_of(&states, tf.str("state")?)?;
            let c = single_char(tf.str("letter")?)?;
            let a = alphabet
                .iter()
                .position(|&x| x == c)
                .ok_or(Error::UnknownLetter(c))?;
            if std::mem::replace(&mut seen[q][a], true) {
                return Err(doc(format!("two transitions for ({}, {c})", states[q])));
            }
            delta[q][a] = poly_from_value(tf.req("poly")?, n, &sr)?;
        }
    }
    let mut finals = vec![None; n];
    for (name, e) in object(f.req("final")?, "final")? {
        finals[index_of(&states, name)?] = Some(element_from_value(e, &sr)?);
    }
    let finals = finals
        .into_iter()
        .map(|e| e.unwrap_or_else(|| crate::semiring::SemiringOps::zero(&sr)))
        .collect();
    Wafa::new(sr, states, alphabet, delta, initial, finals)
}

fn wafa_to_value(a: &Wafa) -> Value {
    let mut transitions = Vec::new();
    for (q, row) in a.transitions().iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            if !p.is_zero() {
                transitions.push(json!({
                    "state": a.states()[q],
                    "letter": a.alphabet()[k].to_string(),
                    "poly": poly_to_value(p),
                }));
            }
        }
    }
    let finals: Map<String, Value> = a
        .states()
        .iter()
        .zip(a.finals())
        .map(|(s, e)| (s.clone(), element_to_value(e)))
        .collect();
    json!({
        "kind": "wafa",
        "semiring": a.semiring().to_string(),
        "states": a.states(),
        "alphabet": a.alphabet().iter().collect::<String>(),
        "initial": poly_to_value(a.initial()),
        "transitions": transitions,
        "final": finals,
    })
}

// ---- WFTA and DTA ----

/// State names must survive the `g(p1,...,pk) -> q : w` rule syntax.
fn check_rule_names<'a>(names: impl IntoIterator<Item = &'a String>) -> Result<()> {
    for s in names {
        if s.is_empty() || s.contains(['(', ')', ',', ':', ' ']) || s.contains("->") {
            return Err(doc(format!(
                "state name {s:?} cannot be written in rule syntax"
            )));
        }
    }
    Ok(())
}

fn wfta_from_value(v: &Value) -> Result<Wfta> {
    let f = Fields::new(
        v,
        "wfta",
        &["semiring", "states", "alphabet", "rules", "root"],
    )?;
    let sr = f.semiring()?;
    let states = f.strings("states")?;
    let alphabet = RankedAlphabet::parse_decls(&f.strings("alphabet")?)?;
    let mut lambda = vec![crate::semiring::SemiringOps::zero(&sr); states.len()];
    for (name, e) in object(f.req("root")?, "root")? {
        lambda[index_of(&states, name)?] = element_from_value(e, &sr)?;
    }
    let mut b = Wfta::new(sr.clone(), states.clone(), alphabet, lambda)?;
    let rules = match f.opt("rules") {
        Some(r) => strings(r, "rules")?,
        None => Vec::new(),
    };
    let mut seen = std::collections::HashSet::new();
    for text in rules {
        let rule = Rule::parse(&text)?;
        let args = rule
            .args
            .iter()
            .map(|a| index_of(&states, a))
            .collect::<Result<Vec<_>>>()?;
        let q = index_of(&states, &rule.target)?;
        if !seen.insert((rule.symbol.clone(), args.clone(), q)) {
            return Err(doc(format!("duplicate rule {text:?}")));
        }
        let w = match &rule.weight {
            Some(w) => sr.parse_element(w)?,
            None => crate::semiring::SemiringOps::one(&sr),
        };
        b.set(&rule.symbol, &args, q, w)?;
    }
    Ok(b)
}

fn wfta_to_value(b: &Wfta) -> Result<Value> {
    check_rule_names(b.states())?;
    let rules: Vec<String> = b
        .transitions()
        .map(|(g, args, q, w)| {
            let names: Vec<&str> = args.iter().map(|&i| b.states()[i].as_str()).collect();
            Rule::render(g, &names, &b.states()[q], Some(&w.to_string()))
        })
        .collect();
    let root: Map<String, Value> = b
        .states()
        .iter()
        .zip(b.root_weights())
        .filter(|(_, e)| !crate::semiring::SemiringOps::is_zero(b.semiring(), e))
        .map(|(s, e)| (s.clone(), element_to_value(e)))
        .collect();
    Ok(json!({
        "kind": "wfta",
        "semiring": b.semiring().to_string(),
        "states": b.states(),
        "alphabet": b.alphabet().decls(),
        "rules": rules,
        "root": root,
    }))
}

fn dta_from_value(v: &Value) -> Result<Dta> {
    let f = Fields::new(
        v,
        "dta",
        &[
            "semiring",
            "states",
            "alphabet",
            "rules",
            "accepting",
            "sink",
        ],
    )?;
    if f.opt("semiring").is_some() {
        f.semiring()?;
    }
    let states = f.strings("states")?;
    let alphabet = RankedAlphabet::parse_decls(&f.strings("alphabet")?)?;
    let rules = match f.opt("rules") {
        Some(r) => strings(r, "rules")?,
        None => Vec::new(),
    };
    let entries = rules
        .iter()
        .map(|text| {
            let rule = Rule::parse(text)?;
            if rule.weight.is_some() {
                return Err(doc(format!("DTA rule {text:?} carries a weight")));
            }
            let args = rule
                .args
                .iter()
                .map(|a| index_of(&states, a))
                .collect::<Result<Vec<_>>>()?;
            Ok((rule.symbol, args, index_of(&states, &rule.target)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut accepting = vec![false; states.len()];
    for a in f.strings("accepting")? {
        accepting[index_of(&states, &a)?] = true;
    }
    let sink = match f.opt("sink") {
        Some(s) => Some(index_of(
            &states,
            s.as_str()
                .ok_or_else(|| doc("\"sink\" must be a state name"))?,
        )?),
        None => None,
    };
    Dta::new(states, alphabet, entries, accepting, sink)
}

fn dta_to_value(d: &Dta) -> Result<Value> {
    check_rule_names(d.states())?;
    let rules: Vec<String> = d
        .entries()
        .map(|(g, args, q)| {
            let names: Vec<&str> = args.iter().map(|&i| d.states()[i].as_str()).collect();
            Rule::render(g, &names, &d.states()[q], None)
        })
        .collect();
    let accepting: Vec<&String> = d
        .states()
        .iter()
        .zip(d.accepting())
        .filter(|(_, &acc)| acc)
        .map(|(s, _)| s)
        .collect();
    Ok(json!({
        "kind": "dta",
        "states": d.states(),
        "alphabet": d.alphabet().decls(),
        "rules": rules,
        "accepting": accepting,
        "sink": d.sink().map(|s| d.states()[s].clone()),
    }))
}

// ---- polynomial automata ----

fn pa_from_value(v: &Value) -> Result<PolyAutomaton> {
    let f = Fields::new(
        v,
        "pa",
        &[
            "semiring", "n", "labels", "alphabet", "initial", "maps", "output",
        ],
    )?;
    let sr = f.semiring()?;
    let n = f
        .req("n")?
        .as_u64()
        .ok_or_else(|| doc("\"n\" must be a natural number"))? as usize;
    let labels = match f.opt("labels") {
        Some(l) => strings(l, "labels")?,
        None => (1..=n).map(|i| format!("x{i}")).collect(),
    };
    let alphabet: Vec<char> = f.str("alphabet")?.chars().collect();
    let initial = f
        .req("initial")?
        .as_array()
        .ok_or_else(|| doc("\"initial\" must be an array"))?
        .iter()
        .map(|e| element_from_value(e, &sr))
        .collect::<Result<Vec<_>>>()?;
    if initial.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: initial.len(),
        });
    }
    let maps_obj = object(f.req("maps")?, "maps")?;
    let mut maps = vec![None; alphabet.len()];
    for (letter, polys) in maps_obj {
        let c = single_char(letter)?;
        let a = alphabet
            .iter()
            .position(|&x| x == c)
            .ok_or(Error::UnknownLetter(c))?;
        let tuple = polys
            .as_array()
            .ok_or_else(|| doc(format!("map of {c:?} must be an array")))?
            .iter()
            .map(|p| poly_from_value(p, n, &sr))
            .collect::<Result<Vec<_>>>()?;
        maps[a] = Some(tuple);
    }
    let maps = maps
        .into_iter()
        .zip(&alphabet)
        .map(|(m, c)| m.ok_or_else(|| doc(format!("no map for letter {c:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let output = poly_from_value(f.req("output")?, n, &sr)?;
    PolyAutomaton::new(sr, labels, alphabet, initial, maps, output)
}

fn pa_to_value(p: &PolyAutomaton) -> Value {
    let maps: Map<String, Value> = p
        .alphabet()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            (
                c.to_string(),
                Value::Array(p.map(k).iter().map(poly_to_value).collect()),
            )
        })
        .collect();
    json!({
        "kind": "pa",
        "semiring": p.semiring().to_string(),
        "n": p.n(),
        "labels": p.labels(),
        "alphabet": p.alphabet().iter().collect::<String>(),
        "initial": p.initial().iter().map(element_to_value).collect::<Vec<_>>(),
        "maps": maps,
        "output": poly_to_value(p.output()),
    })
}

// ---- homomorphisms and trees ----

fn hom_from_value(v: &Value) -> Result<TreeHomomorphism> {
    let f = Fields::new(v, "hom", &["semiring", "source", "target", "patterns"])?;
    let source = RankedAlphabet::parse_decls(&f.strings("source")?)?;
    let target = RankedAlphabet::parse_decls(&f.strings("target")?)?;
    let patterns = object(f.req("patterns")?, "patterns")?
        .iter()
        .map(|(g, t)| {
            let text = t
                .as_str()
                .ok_or_else(|| doc(format!("pattern of {g:?} must be a tree string")))?;
            Ok((g.clone(), text.parse::<Tree>()?))
        })
        .collect::<Result<Vec<_>>>()?;
    TreeHomomorphism::new(source, target, patterns)
}

fn hom_to_value(h: &TreeHomomorphism) -> Value {
    let patterns: Map<String, Value> = h
        .patterns()
        .map(|(g, t)| (g.to_string(), Value::String(t.to_string())))
        .collect();
    json!({
        "kind": "hom",
        "source": h.source().decls(),
        "target": h.target().decls(),
        "patterns": patterns,
    })
}

fn tree_from_value(v: &Value) -> Result<Tree> {
    let f = Fields::new(v, "tree", &["semiring", "alphabet", "tree"])?;
    let t: Tree = f.str("tree")?.parse()?;
    if f.opt("alphabet").is_some() {
        RankedAlphabet::parse_decls(&f.strings("alphabet")?)?.check_ground(&t)?;
    }
    Ok(t)
}

// ---- polynomial sets ----

fn polys_from_value(v: &Value) -> Result<PolySet> {
    let f = Fields::new(v, "polys", &["semiring", "n", "order", "polys"])?;
    let semiring = match f.opt("semiring") {
        Some(_) => f.semiring()?,
        None => Semiring::Rat,
    };
    let n = f
        .req("n")?
        .as_u64()
        .ok_or_else(|| doc("\"n\" must be a natural number"))? as usize;
    let order = match f.opt("order").map(|o| o.as_str()) {
        None | Some(Some("grlex")) => MonomialOrder::GradedLex,
        Some(Some("lex")) => MonomialOrder::Lex,
        Some(other) => return Err(doc(format!("unknown monomial order {other:?}"))),
    };
    let polys = f
        .req("polys")?
        .as_array()
        .ok_or_else(|| doc("\"polys\" must be an array"))?
        .iter()
        .map(|p| poly_from_value(p, n, &semiring))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolySet {
        semiring,
        n,
        order,
        polys,
    })
}

fn polys_to_value(s: &PolySet) -> Value {
    json!({
        "kind": "polys",
        "semiring": s.semiring.to_string(),
        "n": s.n,
        "order": match s.order {
            MonomialOrder::GradedLex => "grlex",
            MonomialOrder::Lex => "lex",
        },
        "polys": s.polys.iter().map(poly_to_value).collect::<Vec<_>>(),
    })
}

// ---- decomposition output ----

/// The three components of a decomposition plus the run alphabet, as one
/// JSON object. Output only.
pub fn nivat_to_value(d: &NivatDecomposition) -> Result<Value> {
    let letters: BTreeMap<usize, Value> = d
        .letters
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let args: Vec<&String> = l.args.iter().map(|&a| &d.source.states()[a]).collect();
            (
                i,
                json!({
                    "name": l.name(),
                    "symbol": l.symbol,
                    "args": args,
                    "target": d.source.states()[l.target],
                    "root": l.root,
                }),
            )
        })
        .collect();
    Ok(json!({
        "kind": "nivat",
        "rank": d.rank,
        "letters": letters.into_values().collect::<Vec<_>>(),
        "hom": hom_to_value(&d.hom),
        "consistency": dta_to_value(&d.consistency)?,
        "weights": wfta_to_value(&d.weights)?,
    }))
}
