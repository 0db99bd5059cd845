//! Ranked alphabets, terms with variables, positions and tree homomorphisms.
//!
//! [`Tree`] is a cheap reference-counted handle: cloning shares structure,
//! so full r-ary word embeddings such as `a(b(#,#),b(#,#))` store each
//! distinct subtree once. Evaluators memoize on node identity to exploit
//! that sharing.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Name of the rank-0 end marker used by word embeddings.
pub const END: &str = "#";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Symbol(String),
    /// The variable x_i, 1-based.
    Var(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Symbol(s) => f.write_str(s),
            Label::Var(i) => write!(f, "x{i}"),
        }
    }
}

#[derive(PartialEq, Eq, Hash)]
struct Node {
    label: Label,
    children: Vec<Tree>,
}

#[derive(Clone)]
pub struct Tree(Arc<Node>);

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Tree {}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.label)?;
        if !self.0.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.0.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A node address: the sequence of 1-based child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|p| match p.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(Error::InvalidPosition(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Position)
    }
}

impl Tree {
    pub fn new(label: Label, children: Vec<Tree>) -> Self {
        Tree(Arc::new(Node { label, children }))
    }

    pub fn node(symbol: impl Into<String>, children: Vec<Tree>) -> Self {
        Self::new(Label::Symbol(symbol.into()), children)
    }

    pub fn leaf(symbol: impl Into<String>) -> Self {
        Self::node(symbol, Vec::new())
    }

    pub fn var(i: usize) -> Self {
        assert!(i >= 1, "variables are 1-based");
        Self::new(Label::Var(i), Vec::new())
    }

    pub fn label(&self) -> &Label {
        &self.0.label
    }

    pub fn symbol(&self) -> Option<&str> {
        match &self.0.label {
            Label::Symbol(s) => Some(s),
            Label::Var(_) => None,
        }
    }

    pub fn children(&self) -> &[Tree] {
        &self.0.children
    }

    /// Identity of the shared node, stable while the tree is alive.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Tree::size).sum::<usize>()
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    /// pos(t), in lexicographic (pre-)order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.collect_positions(&mut prefix, &mut out);
        out
    }

    fn collect_positions(&self, prefix: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(prefix.clone()));
        for (i, c) in self.children().iter().enumerate() {
            prefix.push(i + 1);
            c.collect_positions(prefix, out);
            prefix.pop();
        }
    }

    pub fn subtree_at(&self, w: &Position) -> Result<&Tree> {
        let mut t = self;
        for &i in &w.0 {
            t = t
                .children()
                .get(i.wrapping_sub(1))
                .ok_or_else(|| Error::InvalidPosition(w.to_string()))?;
        }
        Ok(t)
    }

    pub fn label_at(&self, w: &Position) -> Result<&Label> {
        self.subtree_at(w).map(Tree::label)
    }

    /// t⟨w ← replacement⟩.
    pub fn substitute_at(&self, w: &Position, replacement: &Tree) -> Result<Tree> {
        self.replace_path(&w.0, replacement)
            .ok_or_else(|| Error::InvalidPosition(w.to_string()))
    }

    fn replace_path(&self, path: &[usize], replacement: &Tree) -> Option<Tree> {
        match path.split_first() {
            None => Some(replacement.clone()),
            Some((&i, rest)) => {
                let child = self.children().get(i.checked_sub(1)?)?;
                let mut children = self.children().to_vec();
                children[i - 1] = child.replace_path(rest, replacement)?;
                Some(Tree::new(self.label().clone(), children))
            }
        }
    }

    /// t⟨M ← (t'_1, ..., t'_l)⟩: the i-th position of `positions` in
    /// lexicographic order receives `replacements[i]`; substitutions are
    /// applied from the last position to the first.
    pub fn substitute_many(&self, positions: &[Position], replacements: &[Tree]) -> Result<Tree> {
        if positions.len() != replacements.len() {
            return Err(Error::ArityMismatch {
                expected: positions.len(),
                found: replacements.len(),
            });
        }
        let mut order: Vec<usize> = (0..positions.len()).collect();
        order.sort_by(|&a, &b| positions[a].cmp(&positions[b]));
        let mut pairs: Vec<(&Position, &Tree)> = order
            .iter()
            .enumerate()
            .map(|(rank, &idx)| (&positions[idx], &replacements[rank]))
            .collect();
        pairs.reverse();
        let mut t = self.clone();
        for (w, r) in pairs {
            t = t.substitute_at(w, r)?;
        }
        Ok(t)
    }

    /// t⟨t'_1, ..., t'_n⟩: every occurrence of x_i is replaced by `args[i-1]`.
    pub fn substitute_vars(&self, args: &[Tree]) -> Result<Tree> {
        match self.label() {
            Label::Var(i) => args.get(i - 1).cloned().ok_or(Error::ArityMismatch {
                expected: *i,
                found: args.len(),
            }),
            Label::Symbol(_) if self.children().is_empty() => Ok(self.clone()),
            Label::Symbol(_) => {
                let children = self
                    .children()
                    .iter()
                    .map(|c| c.substitute_vars(args))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Tree::new(self.label().clone(), children))
            }
        }
    }

    /// Variable indices of the variable leaves in lexicographic order.
    pub fn var_occurrences(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self.label() {
            Label::Var(i) => out.push(*i),
            Label::Symbol(_) => self.children().iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// ra(t): the number of variable occurrences.
    pub fn ra(&self) -> usize {
        self.var_occurrences().len()
    }

    pub fn is_ground(&self) -> bool {
        self.var_occurrences().is_empty()
    }

    pub fn contains_symbol(&self) -> bool {
        self.symbol().is_some()
    }

    /// Reads a word back from a rank-1 word tree `a(b(...(#)))`.
    pub fn to_word(&self) -> Option<Vec<char>> {
        let mut word = Vec::new();
        let mut t = self;
        loop {
            let s = t.symbol()?;
            if s == END && t.children().is_empty() {
                return Some(word);
            }
            let mut chars = s.chars();
            let c = chars.next()?;
            if chars.next().is_some() || t.children().len() != 1 {
                return None;
            }
            word.push(c);
            t = &t.children()[0];
        }
    }
}

impl FromStr for Tree {
    type Err = Error;

    /// Parses s-expressions such as `a(b(#,#),x1)`.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        let t = parse_tree(&chars, &mut pos)?;
        skip_ws(&chars, &mut pos);
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        Ok(t)
    }
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_tree(chars: &[char], pos: &mut usize) -> Result<Tree> {
    skip_ws(chars, pos);
    let start = *pos;
    while *pos < chars.len()
        && !matches!(chars[*pos], '(' | ')' | ',')
        && !chars[*pos].is_whitespace()
    {
        *pos += 1;
    }
    let name: String = chars[start..*pos].iter().collect();
    if name.is_empty() {
        return Err(Error::Parse(format!("expected a symbol at offset {start}")));
    }
    skip_ws(chars, pos);
    let mut children = Vec::new();
    if *pos < chars.len() && chars[*pos] == '(' {
        *pos += 1;
        skip_ws(chars, pos);
        if *pos < chars.len() && chars[*pos] == ')' {
            *pos += 1;
        } else {
            loop {
                children.push(parse_tree(chars, pos)?);
                skip_ws(chars, pos);
                match chars.get(*pos) {
                    Some(',') => *pos += 1,
                    Some(')') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(Error::Parse(format!("expected ',' or ')' at offset {pos}"))),
                }
            }
        }
    }
    let label = match name.strip_prefix('x').map(str::parse::<usize>) {
        Some(Ok(i)) if i >= 1 => {
            if !children.is_empty() {
                return Err(Error::Parse(format!(
                    "variable {name} cannot have children"
                )));
            }
            Label::Var(i)
        }
        _ => Label::Symbol(name),
    };
    Ok(Tree::new(label, children))
}

/// t^r_w: the word `w` as a full r-ary tree with `#` at the leaves.
pub fn generic_tree(w: &[char], r: usize) -> Tree {
    assert!(r >= 1, "generic trees need rank at least one");
    w.iter().rev().fold(Tree::leaf(END), |t, &a| {
        Tree::node(a.to_string(), vec![t; r])
    })
}

/// The rank-1 embedding of a word.
pub fn word_tree(w: &[char]) -> Tree {
    generic_tree(w, 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedAlphabet {
    symbols: Vec<(String, usize)>,
    index: HashMap<String, usize>,
}

impl RankedAlphabet {
    pub fn new(symbols: Vec<(String, usize)>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::AlphabetMismatch("ranked alphabet is empty".into()));
        }
        let mut index = HashMap::new();
        for (i, (name, _)) in symbols.iter().enumerate() {
            if name.is_empty() || name.contains(['(', ')', ',']) {
                return Err(Error::Parse(format!("invalid symbol name {name:?}")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::AlphabetMismatch(format!(
                    "duplicate symbol {name:?}"
                )));
            }
        }
        Ok(RankedAlphabet { symbols, index })
    }

    /// Parses declarations of the form `name/rank`.
    pub fn parse_decls<S: AsRef<str>>(decls: &[S]) -> Result<Self> {
        let symbols = decls
            .iter()
            .map(|d| {
                let d = d.as_ref().trim();
                let (name, rank) = d
                    .rsplit_once('/')
                    .ok_or_else(|| Error::Parse(format!("expected name/rank, got {d:?}")))?;
                let rank = rank
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rank in {d:?}")))?;
                Ok((name.trim().to_string(), rank))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }

    /// Σ^r_#: every letter with rank `r` plus the end marker of rank 0.
    pub fn words(letters: &[char], r: usize) -> Result<Self> {
        let mut symbols: Vec<(String, usize)> =
            letters.iter().map(|c| (c.to_string(), r)).collect();
        symbols.push((END.to_string(), 0));
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn rank(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].1)
    }

    pub fn max_rank(&self) -> usize {
        self.symbols.iter().map(|s| s.1).max().unwrap_or(0)
    }

    pub fn decls(&self) -> Vec<String> {
        self.symbols
            .iter()
            .map(|(n, r)| format!("{n}/{r}"))
            .collect()
    }

    /// Same symbols with the same ranks, in any order.
    pub fn same_symbols(&self, other: &RankedAlphabet) -> bool {
        self.symbols.len() == other.symbols.len()
            && self.symbols.iter().all(|(n, r)| other.rank(n) == Some(*r))
    }

    /// Checks that `t` is a term over this alphabet with variables drawn
    /// from x_1..x_`max_var`.
    pub fn check_term(&self, t: &Tree, max_var: usize) -> Result<()> {
        match t.label() {
            Label::Var(i) if *i <= max_var => Ok(()),
            Label::Var(i) => Err(Error::InvalidHomomorphism(format!(
                "variable x{i} exceeds the allowed x1..x{max_var}"
            ))),
            Label::Symbol(s) => {
                let rank = self
                    .rank(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.clone()))?;
                if rank != t.children().len() {
                    return Err(Error::RankMismatch {
                        symbol: s.clone(),
                        expected: rank,
                        found: t.children().len(),
                    });
                }
                t.children()
                    .iter()
                    .try_for_each(|c| self.check_term(c, max_var))
            }
        }
    }

    pub fn check_ground(&self, t: &Tree) -> Result<()> {
        self.check_term(t, 0)
    }

    /// Every ground tree of height at most `max_height`, shallow trees first.
    pub fn trees_up_to_height(&self, max_height: usize) -> Vec<Tree> {
        let mut levels: Vec<Tree> = self
            .symbols
            .iter()
            .filter(|s| s.1 == 0)
            .map(|s| Tree::leaf(s.0.clone()))
            .collect();
        for _ in 0..max_height {
            let prev = levels.clone();
            let mut next: Vec<Tree> = self
                .symbols
                .iter()
                .filter(|s| s.1 == 0)
                .map(|s| Tree::leaf(s.0.clone()))
                .collect();
            for (name, rank) in self.symbols.iter().filter(|s| s.1 > 0) {
                for combo in tuples(prev.len(), *rank) {
                    let children = combo.iter().map(|&i| prev[i].clone()).collect();
                    next.push(Tree::node(name.clone(), children));
                }
            }
            levels = next;
        }
        levels
    }
}

/// All tuples in {0..base}^len in lexicographic order.
pub fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// A tree homomorphism given by one pattern t_g ∈ T_Λ[X_rank(g)] per
/// source symbol g.
#[derive(Clone, Debug)]
pub struct TreeHomomorphism {
    source: RankedAlphabet,
    target: RankedAlphabet,
    patterns: Vec<Tree>,
    non_deleting: bool,
    linear: bool,
}

impl TreeHomomorphism {
    pub fn new(
        source: RankedAlphabet,
        target: RankedAlphabet,
        patterns: Vec<(String, Tree)>,
    ) -> Result<Self> {
        let mut slots: Vec<Option<Tree>> = vec![None; source.len()];
        for (name, pattern) in patterns {
            let idx = source
                .index_of(&name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            let rank = source.symbols[idx].1;
            target.check_term(&pattern, rank)?;
            if slots[idx].replace(pattern).is_some() {
                return Err(Error::InvalidHomomorphism(format!(
                    "two patterns for {name:?}"
                )));
            }
        }
        let patterns = slots
            .into_iter()
            .zip(source.symbols())
            .map(|(p, (name, _))| {
                p.ok_or_else(|| Error::InvalidHomomorphism(format!("no pattern for {name:?}")))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut non_deleting = true;
        let mut linear = true;
        for (p, (_, rank)) in patterns.iter().zip(source.symbols()) {
            let occ = p.var_occurrences();
            let counts: Vec<usize> = (1..=*rank)
                .map(|i| occ.iter().filter(|&&v| v == i).count())
                .collect();
            let nd = p.contains_symbol() && counts.iter().all(|&c| c >= 1);
            non_deleting &= nd;
            linear &= nd && counts.iter().all(|&c| c <= 1);
        }
        Ok(TreeHomomorphism {
            source,
            target,
            patterns,
            non_deleting,
            linear,
        })
    }

    pub fn identity(alphabet: &RankedAlphabet) -> Self {
        let patterns = alphabet
            .symbols()
            .iter()
            .map(|(n, r)| {
                (
                    n.clone(),
                    Tree::node(n.clone(), (1..=*r).map(Tree::var).collect()),
                )
            })
            .collect();
        Self::new(alphabet.clone(), alphabet.clone(), patterns).expect("identity is well formed")
    }

    /// h^r on word trees: a ↦ a(x1, ..., x1), # ↦ #.
    pub fn generic(letters: &[char], r: usize) -> Result<Self> {
        let source = RankedAlphabet::words(letters, 1)?;
        let target = RankedAlphabet::words(letters, r)?;
        let mut patterns: Vec<(String, Tree)> = letters
            .iter()
            .map(|a| {
                (
                    a.to_string(),
                    Tree::node(a.to_string(), vec![Tree::var(1); r]),
                )
            })
            .collect();
        patterns.push((END.to_string(), Tree::leaf(END)));
        Self::new(source, target, patterns)
    }

    /// The rank-1 tree homomorphism induced by a word homomorphism: a
    /// letter mapped to u_1...u_k becomes u_1(u_2(...u_k(x1))), the empty
    /// word becomes x1, and # is fixed.
    pub fn from_word_map(
        source_letters: &[char],
        target_letters: &[char],
        images: &[(char, Vec<char>)],
    ) -> Result<Self> {
        let source = RankedAlphabet::words(source_letters, 1)?;
        let target = RankedAlphabet::words(target_letters, 1)?;
        let mut patterns: Vec<(String, Tree)> = images
            .iter()
            .map(|(a, u)| {
                let pattern = u
                    .iter()
                    .rev()
                    .fold(Tree::var(1), |t, &c| Tree::node(c.to_string(), vec![t]));
                (a.to_string(), pattern)
            })
            .collect();
        patterns.push((END.to_string(), Tree::leaf(END)));
        Self::new(source, target, patterns)
    }

    pub fn source(&self) -> &RankedAlphabet {
        &self.source
    }

    pub fn target(&self) -> &RankedAlphabet {
        &self.target
    }

    pub fn pattern(&self, symbol: &str) -> Option<&Tree> {
        self.source.index_of(symbol).map(|i| &self.patterns[i])
    }

    pub fn patterns(&self) -> impl Iterator<Item = (&str, &Tree)> {
        self.source
            .symbols()
            .iter()
            .zip(&self.patterns)
            .map(|((n, _), p)| (n.as_str(), p))
    }

    pub fn is_non_deleting(&self) -> bool {
        self.non_deleting
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// h(t) for a ground source tree.
    pub fn apply(&self, t: &Tree) -> Result<Tree> {
        if !t.is_ground() {
            return Err(Error::Precondition(format!("{t} is not ground")));
        }
        self.apply_open(t, &mut HashMap::new())
    }

    // variables of `t` are kept in place, which is what composition needs
    fn apply_open(&self, t: &Tree, memo: &mut HashMap<usize, Tree>) -> Result<Tree> {
        if let Some(done) = memo.get(&t.id()) {
            return Ok(done.clone());
        }
        let out = match t.label() {
            Label::Var(_) => t.clone(),
            Label::Symbol(s) => {
                let idx = self
                    .source
                    .index_of(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.clone()))?;
                let rank = self.source.symbols[idx].1;
                if rank != t.children().len() {
                    return Err(Error::RankMismatch {
                        symbol: s.clone(),
                        expected: rank,
                        found: t.children().len(),
                    });
                }
                let args = t
                    .children()
                    .iter()
                    .map(|c| self.apply_open(c, memo))
                    .collect::<Result<Vec<_>>>()?;
                self.patterns[idx].substitute_vars(&args)?
            }
        };
        memo.insert(t.id(), out.clone());
        Ok(out)
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &TreeHomomorphism) -> Result<TreeHomomorphism> {
        if !self.target.same_symbols(&next.source) {
            return Err(Error::AlphabetMismatch(format!(
                "cannot compose: target {:?} differs from source {:?}",
                self.target.decls(),
                next.source.decls()
            )));
        }
        let patterns = self
            .patterns()
            .map(|(name, p)| Ok((name.to_string(), next.apply_open(p, &mut HashMap::new())?)))
            .collect::<Result<Vec<_>>>()?;
        TreeHomomorphism::new(self.source.clone(), next.target.clone(), patterns)
    }

    /// The shared forest of all source trees `s` with h(s) = t. Requires a
    /// non-deleting homomorphism, which makes the preimage set finite.
    pub fn preimage_forest(&self, t: &Tree) -> Result<PreimageForest> {
        if !self.non_deleting {
            return Err(Error::DeletingHomomorphism);
        }
        let mut forest = PreimageForest {
            nodes: Vec::new(),
            root: 0,
        };
        let mut memo = HashMap::new();
        forest.root = self.build_forest(t, &mut forest, &mut memo);
        Ok(forest)
    }

    fn build_forest(
        &self,
        t: &Tree,
        forest: &mut PreimageForest,
        memo: &mut HashMap<usize, usize>,
    ) -> usize {
        if let Some(&id) = memo.get(&t.id()) {
            return id;
        }
        let mut alternatives = Vec::new();
        for (g, (pattern, (_, rank))) in self.patterns.iter().zip(self.source.symbols()).enumerate()
        {
            let mut binds: Vec<Option<Tree>> = vec![None; *rank];
            if !match_pattern(pattern, t, &mut binds) {
                continue;
            }
            let mut children = Vec::with_capacity(*rank);
            let mut viable = true;
            for b in binds {
                let sub = b.expect("non-deleting patterns bind every variable");
                let child = self.build_forest(&sub, forest, memo);
                if forest.nodes[child].alternatives.is_empty() {
                    viable = false;
                    break;
                }
                children.push(child);
            }
            if viable {
                alternatives.push((g, children));
            }
        }
        let id = forest.nodes.len();
        forest.nodes.push(ForestNode { alternatives });
        memo.insert(t.id(), id);
        id
    }

    /// Explicit preimage set h⁻¹(t), failing with a resource error when it
    /// has more than `cap` members.
    pub fn preimages(&self, t: &Tree, cap: usize) -> Result<Vec<Tree>> {
        let forest = self.preimage_forest(t)?;
        let count = forest.count();
        if count > cap as u128 {
            return Err(Error::ResourceExhausted(format!(
                "{count} preimages exceed the cap of {cap}"
            )));
        }
        let names: Vec<&str> = self.source.symbols().iter().map(|s| s.0.as_str()).collect();
        let mut cache = HashMap::new();
        Ok(forest.expand(forest.root, &names, &mut cache))
    }
}

fn match_pattern(pattern: &Tree, t: &Tree, binds: &mut [Option<Tree>]) -> bool {
    match pattern.label() {
        Label::Var(i) => match &binds[i - 1] {
            Some(bound) => bound == t,
            None => {
                binds[i - 1] = Some(t.clone());
                true
            }
        },
        Label::Symbol(s) => {
            t.symbol() == Some(s)
                && t.children().len() == pattern.children().len()
                && pattern
                    .children()
                    .iter()
                    .zip(t.children())
                    .all(|(p, c)| match_pattern(p, c, binds))
        }
    }
}

#[derive(Clone, Debug)]
pub struct ForestNode {
    /// `(source symbol index, child forest nodes)`; one entry per way the
    /// subtree can be produced.
    pub alternatives: Vec<(usize, Vec<usize>)>,
}

/// Packed representation of h⁻¹(t): every forest node stands for the
/// preimages of one subtree of t.
#[derive(Clone, Debug)]
pub struct PreimageForest {
    pub nodes: Vec<ForestNode>,
    pub root: usize,
}

impl PreimageForest {
    /// Number of preimages, saturating at `u128::MAX`.
    pub fn count(&self) -> u128 {
        let mut counts = vec![0u128; self.nodes.len()];
        // children are always created before their parents
        for (i, node) in self.nodes.iter().enumerate() {
            counts[i] = node
                .alternatives
                .iter()
                .map(|(_, ch)| {
                    ch.iter()
                        .fold(1u128, |acc, &c| acc.saturating_mul(counts[c]))
                })
                .fold(0u128, u128::saturating_add);
        }
        counts[self.root]
    }

    fn expand(
        &self,
        id: usize,
        names: &[&str],
        cache: &mut HashMap<usize, Vec<Tree>>,
    ) -> Vec<Tree> {
        if let Some(v) = cache.get(&id) {
            return v.clone();
        }
        let mut out = Vec::new();
        for (g, children) in &self.nodes[id].alternatives {
            let options: Vec<Vec<Tree>> = children
                .iter()
                .map(|&c| self.expand(c, names, cache))
                .collect();
            let sizes: Vec<usize> = options.iter().map(Vec::len).collect();
            for combo in mixed_tuples(&sizes) {
                let kids = combo
                    .iter()
                    .zip(&options)
                    .map(|(&i, opts)| opts[i].clone())
                    .collect();
                out.push(Tree::node(names[*g], kids));
            }
        }
        cache.insert(id, out.clone());
        out
    }
}

/// All index tuples with the i-th entry below `sizes[i]`.
pub fn mixed_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(sizes.len())];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..s).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Distinct trees among `trees`, preserving first occurrences.
pub fn dedup_trees(trees: Vec<Tree>) -> Vec<Tree> {
    let mut seen = HashSet::new();
    trees
        .into_iter()
        .filter(|t| seen.insert(t.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn pos(s: &str) -> Position {
        s.parse().unwrap()
    }

    #[test]
    fn positions_of_small_tree() {
        let ps: Vec<String> = t("a(#,#)")
            .positions()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(ps, ["", "1", "2"]);
    }

    #[test]
    fn labels_and_subtrees() {
        let tree = t("a(b(#,#),#)");
        assert_eq!(
            tree.label_at(&pos("1")).unwrap(),
            &Label::Symbol("b".into())
        );
        assert_eq!(tree.subtree_at(&pos("1")).unwrap(), &t("b(#,#)"));
        assert!(matches!(
            t("#").label_at(&pos("1")),
            Err(Error::InvalidPosition(_))
        ));
    }

    #[test]
    fn substitution_at_positions() {
        let base = t("a(#,#)");
        assert_eq!(
            base.substitute_at(&pos("2"), &t("b(#,#)")).unwrap(),
            t("a(#,b(#,#))")
        );
        assert_eq!(
            base.substitute_many(&[pos("2"), pos("1")], &[t("b(#,#)"), t("#")])
                .unwrap(),
            t("a(b(#,#),#)")
        );
        assert!(base.substitute_at(&pos("3"), &t("#")).is_err());
    }

    #[test]
    fn variable_substitution() {
        assert_eq!(t("x1").substitute_vars(&[t("c(#)")]).unwrap(), t("c(#)"));
        assert_eq!(
            t("g(x1,x1)").substitute_vars(&[t("#")]).unwrap(),
            t("g(#,#)")
        );
        assert_eq!(
            t("g(x2,x1)")
                .substitute_vars(&[t("#"), t("b(#,#)")])
                .unwrap(),
            t("g(b(#,#),#)")
        );
        assert!(t("g(x2,x1)").substitute_vars(&[t("#")]).is_err());
    }

    #[test]
    fn generic_trees() {
        assert_eq!(generic_tree(&[], 3), t("#"));
        assert_eq!(generic_tree(&['a', 'b'], 2), t("a(b(#,#),b(#,#))"));
        let w = generic_tree(&['a', 'b'], 1);
        assert_eq!(w, t("a(b(#))"));
        assert_eq!(w.to_word(), Some(vec!['a', 'b']));
    }

    #[test]
    fn generic_homomorphism_applies() {
        let h = TreeHomomorphism::generic(&['a', 'b'], 2).unwrap();
        assert_eq!(h.apply(&t("a(b(#))")).unwrap(), t("a(b(#,#),b(#,#))"));
        assert!(h.is_non_deleting());
        assert!(!h.is_linear());
    }

    #[test]
    fn identity_and_duplicating_patterns() {
        let alpha = RankedAlphabet::parse_decls(&["a/2", "b/1", "#/0"]).unwrap();
        let id = TreeHomomorphism::identity(&alpha);
        let tree = t("a(b(#),#)");
        assert_eq!(id.apply(&tree).unwrap(), tree);
        assert!(id.is_linear());

        let src = RankedAlphabet::parse_decls(&["a/1", "#/0"]).unwrap();
        let tgt = RankedAlphabet::parse_decls(&["c/2", "d/0"]).unwrap();
        let h = TreeHomomorphism::new(
            src,
            tgt,
            vec![("a".into(), t("c(x1,x1)")), ("#".into(), t("d"))],
        )
        .unwrap();
        assert_eq!(h.apply(&t("a(#)")).unwrap(), t("c(d,d)"));
    }

    #[test]
    fn pattern_validation() {
        let src = RankedAlphabet::parse_decls(&["a/1", "#/0"]).unwrap();
        let tgt = RankedAlphabet::parse_decls(&["c/2", "#/0"]).unwrap();
        let bad_var = TreeHomomorphism::new(
            src.clone(),
            tgt.clone(),
            vec![("a".into(), t("c(x1,x2)")), ("#".into(), t("#"))],
        );
        assert!(bad_var.is_err());
        let missing = TreeHomomorphism::new(src, tgt, vec![("a".into(), t("c(x1,x1)"))]);
        assert!(missing.is_err());
    }

    #[test]
    fn preimages_of_generic_images() {
        let h = TreeHomomorphism::generic(&['a', 'b'], 2).unwrap();
        let pre = h.preimages(&generic_tree(&['a', 'b'], 2), 100).unwrap();
        assert_eq!(pre, vec![word_tree(&['a', 'b'])]);
        assert!(h.preimages(&t("a(#,b(#,#))"), 100).unwrap().is_empty());
    }

    #[test]
    fn preimages_of_relabelling() {
        let h = TreeHomomorphism::from_word_map(
            &['a', '$', 'c', 'd'],
            &['a', '$', 'b'],
            &[
                ('a', vec!['a']),
                ('$', vec!['$']),
                ('c', vec!['b']),
                ('d', vec!['b']),
            ],
        )
        .unwrap();
        let mut words: Vec<String> = h
            .preimages(&word_tree(&['a', '$', 'b', 'b']), 100)
            .unwrap()
            .iter()
            .map(|p| p.to_word().unwrap().into_iter().collect())
            .collect();
        words.sort();
        assert_eq!(words, ["a$cc", "a$cd", "a$dc", "a$dd"]);
        assert!(h.preimages(&word_tree(&['b'; 12]), 100).is_err());
    }

    #[test]
    fn deleting_homomorphisms_have_no_preimage_forest() {
        let h = TreeHomomorphism::from_word_map(&['c'], &['a'], &[('c', vec![])]).unwrap();
        assert!(!h.is_non_deleting());
        assert_eq!(h.apply(&word_tree(&['c', 'c'])).unwrap(), t("#"));
        assert!(matches!(
            h.preimage_forest(&t("#")),
            Err(Error::DeletingHomomorphism)
        ));
    }

    #[test]
    fn composing_with_generic() {
        let word =
            TreeHomomorphism::from_word_map(&['c'], &['a', 'b'], &[('c', vec!['a', 'b'])]).unwrap();
        let generic = TreeHomomorphism::generic(&['a', 'b'], 2).unwrap();
        let composed = word.then(&generic).unwrap();
        assert_eq!(composed.pattern("c").unwrap(), &t("a(b(x1,x1),b(x1,x1))"));

        let erase = TreeHomomorphism::from_word_map(&['c'], &['a', 'b'], &[('c', vec![])]).unwrap();
        assert_eq!(
            erase.then(&generic).unwrap().pattern("c").unwrap(),
            &t("x1")
        );

        let id = TreeHomomorphism::identity(word.source());
        let same = id.then(&word).unwrap();
        assert_eq!(same.pattern("c"), word.pattern("c"));
    }

    #[test]
    fn tree_text_round_trip() {
        for s in ["#", "a(b(#,#),#)", "g(x2,x1)", "f(x1)"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert!("a(#,".parse::<Tree>().is_err());
        assert!("x1(#)".parse::<Tree>().is_err());
    }

    #[test]
    fn enumerating_trees_by_height() {
        let alpha = RankedAlphabet::parse_decls(&["a/2", "#/0"]).unwrap();
        let counts: Vec<usize> = (0..4).map(|h| alpha.trees_up_to_height(h).len()).collect();
        assert_eq!(counts, [1, 2, 5, 26]);
    }
}
