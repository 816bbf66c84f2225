//! Groups given by wreath recursions `g = (g_0, …, g_{d-1})α`, acting by
//! `(xw)^g = x^α (w^{g_x})`.
//!
//! Elements are words in the generators. The word problem is decided by
//! building the element's Mealy automaton and testing its initial state for
//! triviality, so it always terminates for finite-state generators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mealy::{InitialAutomaton, MealyAutomaton};
use crate::perm::{group_order, Permutation};
use crate::words::{Letter, OmegaWord, Word};

/// Size of the level used to bound element orders from below.
const ORDER_LEVEL_POINTS: usize = 1 << 16;

fn automaton_power(a: &InitialAutomaton, mut k: u64) -> InitialAutomaton {
    let mut result = InitialAutomaton::identity(a.degree());
    let mut square = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = result.compose(&square).expect("same alphabet").canonical();
        }
        k >>= 1;
        if k > 0 {
            square = square.compose(&square).expect("same alphabet").canonical();
        }
    }
    result
}

/// Default bound on the number of vertices `d^n` of a level.
pub const DEFAULT_MAX_POINTS: usize = 65536;

/// Default bound on the number of distinct restriction words explored when
/// building the generators' automaton.
pub const DEFAULT_STATE_CAP: usize = 4096;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub index: usize,
    pub inverse: bool,
}

impl Gen {
    pub fn new(index: usize) -> Self {
        Gen { index, inverse: false }
    }

    pub fn inv(self) -> Self {
        Gen { index: self.index, inverse: !self.inverse }
    }
}

/// Cancels adjacent `s s⁻¹` pairs.
pub fn free_reduce(word: impl IntoIterator<Item = Gen>) -> Vec<Gen> {
    let mut out: Vec<Gen> = Vec::new();
    for g in word {
        if out.last() == Some(&g.inv()) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// A group element as a freely reduced word in the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element {
    word: Vec<Gen>,
}

impl Element {
    pub fn identity() -> Self {
        Element { word: Vec::new() }
    }

    pub fn from_word(word: impl IntoIterator<Item = Gen>) -> Self {
        Element { word: free_reduce(word) }
    }

    pub fn generator(index: usize) -> Self {
        Element { word: vec![Gen::new(index)] }
    }

    pub fn word(&self) -> &[Gen] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Element { word: self.word.iter().rev().map(|g| g.inv()).collect() }
    }

    /// `self` followed by `other`.
    pub fn mul(&self, other: &Element) -> Self {
        Element::from_word(self.word.iter().chain(other.word.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            out.extend_from_slice(&base.word);
        }
        Element::from_word(out)
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Element) -> Self {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDef {
    pub name: String,
    pub perm: Permutation,
    pub restrictions: Vec<Element>,
}

/// Wreath-recursion data: a root permutation and one restriction word per
/// letter for every generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDef {
    name: String,
    degree: usize,
    generators: Vec<GeneratorDef>,
}

impl GroupDef {
    pub fn new(name: impl Into<String>, degree: usize, generators: Vec<GeneratorDef>) -> Result<Self> {
        if degree == 0 || degree > 62 {
            return Err(Error::InvalidAlphabet(format!("alphabet size {degree} not supported")));
        }
        for (i, g) in generators.iter().enumerate() {
            if !valid_name(&g.name) {
                return Err(Error::Parse(format!("bad generator name {:?}", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Parse(format!("generator {:?} declared twice", g.name)));
            }
            if g.perm.degree() != degree || g.restrictions.len() != degree {
                return Err(Error::Parse(format!("generator {:?} needs a permutation and {degree} restrictions", g.name)));
            }
            for r in &g.restrictions {
                if let Some(s) = r.word().iter().find(|s| s.index >= generators.len()) {
                    return Err(Error::UnknownGenerator(format!("#{}", s.index)));
                }
            }
        }
        Ok(Self { name: name.into(), degree, generators })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[GeneratorDef] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// One step of the recursion: `(x, s) ↦ (x^s, s|_x)`.
    fn step(&self, s: Gen, x: Letter) -> (Letter, &[Gen], bool) {
        let g = &self.generators[s.index];
        if s.inverse {
            let y = g.perm.inverse().image(x as usize) as Letter;
            (y, g.restrictions[y as usize].word(), true)
        } else {
            (g.perm.image(x as usize) as Letter, g.restrictions[x as usize].word(), false)
        }
    }

    /// Image of `x` under `w` together with `w|_x`, freely reduced.
    pub fn thread(&self, w: &[Gen], mut x: Letter) -> (Letter, Element) {
        let mut rest = Vec::new();
        for &s in w {
            let (y, r, inverted) = self.step(s, x);
            if inverted {
                rest.extend(r.iter().rev().map(|g| g.inv()));
            } else {
                rest.extend_from_slice(r);
            }
            x = y;
        }
        (x, Element::from_word(rest))
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_group(text)
    }

    pub fn parse_word(&self, text: &str) -> Result<Element> {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        WordParser::new(text, &names).parse()
    }

    pub fn render_word(&self, e: &Element) -> String {
        render_word(e, &self.generators.iter().map(|g| g.name.as_str()).collect::<Vec<_>>())
    }

    /// DSL text; `parse(render())` reproduces the definition.
    pub fn render(&self) -> String {
        let mut out = format!("group {} alphabet {}\n", self.name, self.degree);
        for g in &self.generators {
            let restr: Vec<String> = g.restrictions.iter().map(|r| self.render_word(r)).collect();
            let cycles: String = g
                .perm
                .cycles()
                .iter()
                .map(|c| format!("({})", c.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")))
                .collect();
            let cycles = if cycles.is_empty() { "()".to_string() } else { cycles };
            out.push_str(&format!("{} = perm{} [{}]\n", g.name, cycles, restr.join(", ")));
        }
        out
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn render_word(e: &Element, names: &[&str]) -> String {
    if e.is_empty() {
        return "1".into();
    }
    let mut out = String::new();
    for g in e.word() {
        out.push_str(names[g.index]);
        if g.inverse {
            out.push('\'');
        }
    }
    out
}

struct WordParser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [&'a str],
    text: &'a str,
}

impl<'a> WordParser<'a> {
    fn new(text: &'a str, names: &'a [&'a str]) -> Self {
        WordParser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, names, text }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in word {:?}", self.pos, self.text))
    }

    fn parse(mut self) -> Result<Element> {
        let e = self.word()?;
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected character"));
        }
        Ok(e)
    }

    fn word(&mut self) -> Result<Element> {
        let mut acc = Element::identity();
        while let Some(&c) = self.chars.get(self.pos) {
            if c == ')' || c == ',' || c == ']' {
                break;
            }
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element> {
        let mut e = self.atom()?;
        loop {
            match self.chars.get(self.pos) {
                Some('\'') => {
                    self.pos += 1;
                    e = e.inverse();
                }
                Some('^') => {
                    self.pos += 1;
                    let start = self.pos;
                    if self.chars.get(self.pos) == Some(&'-') {
                        self.pos += 1;
                    }
                    while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let n: String = self.chars[start..self.pos].iter().collect();
                    let k: i64 = n.parse().map_err(|_| self.err("bad exponent"))?;
                    e = e.pow(k);
                }
                _ => return Ok(e),
            }
        }
    }

    fn atom(&mut self) -> Result<Element> {
        match self.chars.get(self.pos) {
            Some('1') => {
                self.pos += 1;
                Ok(Element::identity())
            }
            Some('(') => {
                self.pos += 1;
                let e = self.word()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                Ok(u.commutator(&v))
            }
            Some(_) => {
                let rest: String = self.chars[self.pos..].iter().collect();
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(**n))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((i, n)) => {
                        self.pos += n.chars().count();
                        Ok(Element::generator(i))
                    }
                    None => {
                        let tok: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
                        Err(Error::UnknownGenerator(if tok.is_empty() { rest } else { tok }))
                    }
                }
            }
            None => Err(self.err("unexpected end")),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }
}

fn parse_group(text: &str) -> Result<GroupDef> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty group definition".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (name, degree) = match parts.as_slice() {
        ["group", name, "alphabet", d] => {
            (name.to_string(), d.parse::<usize>().map_err(|_| Error::Parse(format!("bad alphabet size {d:?}")))?)
        }
        _ => return Err(Error::Parse(format!("expected `group NAME alphabet d`, got {header:?}"))),
    };
    let mut raw = Vec::new();
    for line in lines {
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| Error::Parse(format!("expected `gen = …` in {line:?}")))?;
        let rhs = rhs.trim();
        let rhs = rhs.strip_prefix("perm").ok_or_else(|| Error::Parse(format!("expected perm(..) in {line:?}")))?;
        let open = rhs.find('[').ok_or_else(|| Error::Parse(format!("missing restriction list in {line:?}")))?;
        let cycles = parse_cycles(rhs[..open].trim(), degree)?;
        let list = rhs[open..].trim();
        let inner = list
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("malformed restriction list in {line:?}")))?;
        raw.push((lhs.trim().to_string(), cycles, split_top_level(inner)));
    }
    let names: Vec<&str> = raw.iter().map(|(n, _, _)| n.as_str()).collect();
    let mut generators = Vec::new();
    for (name, perm, restr) in &raw {
        let restrictions = restr.iter().map(|w| WordParser::new(w, &names).parse()).collect::<Result<Vec<_>>>()?;
        generators.push(GeneratorDef { name: name.clone(), perm: perm.clone(), restrictions });
    }
    GroupDef::new(name, degree, generators)
}

/// `(0 1)(2 3)`, `()` or empty.
fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    let mut cycles = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("bad cycle list {text:?}")))?;
        let close = body.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let points = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u32>().map_err(|_| Error::Parse(format!("bad point {s:?} in {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if !points.is_empty() {
            cycles.push(points);
        }
        rest = body[close + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles)
}

fn split_top_level(text: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(String::new());
                continue;
            }
            _ => {}
        }
        out.last_mut().unwrap().push(c);
    }
    out.into_iter().map(|s| s.trim().to_string()).collect()
}

/// Result of [`Group::order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    /// No `k ≤ cap` with `e^k = 1`.
    Unbounded(u64),
}

/// Dimension estimate of the closure from a single level.
#[derive(Debug, Clone, PartialEq)]
pub enum Hausdorff {
    Exact(BigRational),
    Approx(f64),
}

impl Hausdorff {
    pub fn to_f64(&self) -> f64 {
        match self {
            Hausdorff::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Hausdorff::Approx(x) => *x,
        }
    }
}

impl fmt::Display for Hausdorff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hausdorff::Exact(q) => write!(f, "{q}"),
            Hausdorff::Approx(x) => write!(f, "{x:.12}"),
        }
    }
}

/// Root permutations of all restrictions `g|_v` for `|v| < depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    degree: usize,
    depth: usize,
    labels: BTreeMap<Word, Permutation>,
}

impl Portrait {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn label(&self, v: &[Letter]) -> Option<&Permutation> {
        self.labels.get(v)
    }

    pub fn labels(&self) -> &BTreeMap<Word, Permutation> {
        &self.labels
    }

    /// `(a_1 a_2 …)^g = a_1^{α_∅} a_2^{α_{a_1}} …` for `|w| ≤ depth`.
    pub fn act(&self, w: &[Letter]) -> Result<Word> {
        if w.len() > self.depth {
            return Err(Error::InvalidArgument(format!("word longer than portrait depth {}", self.depth)));
        }
        if let Some(&x) = w.iter().find(|&&x| x as usize >= self.degree) {
            return Err(Error::AlphabetMismatch { letter: x as usize, size: self.degree });
        }
        Ok((0..w.len()).map(|i| self.labels[&w[..i]].image(w[i] as usize) as Letter).collect())
    }
}

/// Checks `d^n ≤ max_points` and returns `d^n`.
pub fn level_size(d: usize, n: usize, max_points: usize) -> Result<usize> {
    let points = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if points > max_points as u128 {
        return Err(Error::SizeBound { points, bound: max_points });
    }
    Ok(points as usize)
}

/// A group definition together with the minimized automata of its
/// generators and their inverses.
#[derive(Debug, Clone)]
pub struct Group {
    def: GroupDef,
    /// `automata[2i]` is generator `i`, `automata[2i+1]` its inverse.
    automata: Vec<InitialAutomaton>,
}

impl Group {
    pub fn new(def: GroupDef) -> Result<Self> {
        Self::with_state_cap(def, DEFAULT_STATE_CAP)
    }

    /// Explores restriction words of the generators breadth-first; fails with
    /// `NotFiniteState` once more than `cap` distinct words appear.
    pub fn with_state_cap(def: GroupDef, cap: usize) -> Result<Self> {
        let d = def.degree;
        let mut states: Vec<Vec<Gen>> = vec![Vec::new()];
        let mut index: HashMap<Vec<Gen>, usize> = HashMap::new();
        index.insert(Vec::new(), 0);
        let mut starts = Vec::new();
        for i in 0..def.generators.len() {
            for s in [Gen::new(i), Gen::new(i).inv()] {
                let w = vec![s];
                let id = *index.entry(w.clone()).or_insert_with(|| {
                    states.push(w);
                    states.len() - 1
                });
                starts.push(id);
            }
        }
        let mut output = Vec::new();
        let mut next = Vec::new();
        let mut k = 0;
        while k < states.len() {
            let w = states[k].clone();
            for x in 0..d as Letter {
                let (y, r) = def.thread(&w, x);
                output.push(y);
                let id = match index.get(r.word()) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= cap {
                            let name = w.first().map_or("1".to_string(), |g| def.generators[g.index].name.clone());
                            return Err(Error::NotFiniteState { generator: name, cap });
                        }
                        index.insert(r.word().to_vec(), states.len());
                        states.push(r.word().to_vec());
                        states.len() - 1
                    }
                };
                next.push(id);
            }
            k += 1;
        }
        let machine = MealyAutomaton::new(d, output, next)?;
        if let Some(q) = (0..machine.num_states()).find(|&q| {
            let mut seen = vec![false; d];
            machine.output_row(q).iter().any(|&y| std::mem::replace(&mut seen[y as usize], true))
        }) {
            return Err(Error::NotInvertible { state: q });
        }
        let automata = starts
            .into_iter()
            .map(|q| InitialAutomaton::new(machine.clone(), q).map(|a| a.canonical()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Group { def, automata })
    }

    pub fn def(&self) -> &GroupDef {
        &self.def
    }

    pub fn degree(&self) -> usize {
        self.def.degree
    }

    pub fn num_generators(&self) -> usize {
        self.def.generators.len()
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.def.generators[i].name
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        self.def.parse_word(text)
    }

    pub fn render(&self, e: &Element) -> String {
        self.def.render_word(e)
    }

    pub fn generator_automaton(&self, s: Gen) -> &InitialAutomaton {
        &self.automata[2 * s.index + s.inverse as usize]
    }

    /// Minimized automaton of `e`, numbered breadth-first from its initial state.
    pub fn element_automaton(&self, e: &Element) -> InitialAutomaton {
        let mut acc = InitialAutomaton::identity(self.degree());
        for &s in e.word() {
            acc = acc.compose(self.generator_automaton(s)).expect("same alphabet").canonical();
        }
        acc
    }

    pub fn restriction(&self, e: &Element, v: &[Letter]) -> Result<Element> {
        self.check_letters(v)?;
        let mut cur = e.clone();
        for &x in v {
            cur = self.def.thread(cur.word(), x).1;
        }
        Ok(cur)
    }

    /// Root permutation of `e` as a map on letters.
    pub fn root_permutation(&self, e: &Element) -> Permutation {
        let images = (0..self.degree() as Letter).map(|x| self.def.thread(e.word(), x).0 as u32).collect();
        Permutation::from_images(images).expect("generators are invertible")
    }

    fn check_letters(&self, v: &[Letter]) -> Result<()> {
        match v.iter().find(|&&x| x as usize >= self.degree()) {
            Some(&x) => Err(Error::AlphabetMismatch { letter: x as usize, size: self.degree() }),
            None => Ok(()),
        }
    }

    pub fn act(&self, e: &Element, w: &[Letter]) -> Result<Word> {
        self.element_automaton(e).act(w)
    }

    pub fn act_omega(&self, e: &Element, w: &OmegaWord) -> Result<OmegaWord> {
        self.element_automaton(e).act_omega(w)
    }

    pub fn is_trivial(&self, e: &Element) -> bool {
        e.is_empty() || self.element_automaton(e).is_trivial()
    }

    pub fn equal(&self, e: &Element, f: &Element) -> bool {
        self.is_trivial(&e.mul(&f.inverse()))
    }

    /// Least `k ≤ cap` with `e^k = 1`.
    ///
    /// The order is a multiple of the order `m` of the action on a finite
    /// level, so only `m, 2m, …` are tested on the automaton.
    pub fn order(&self, e: &Element, cap: u64) -> Order {
        let base = self.element_automaton(e);
        let mut n = 0;
        while level_size(self.degree(), n + 1, ORDER_LEVEL_POINTS).is_ok() {
            n += 1;
        }
        let size = level_size(self.degree(), n, ORDER_LEVEL_POINTS).expect("level fits");
        let m = self.automaton_level(&base, n, size).map(|p| p.order()).unwrap_or(1);
        if m > cap as u128 {
            return Order::Unbounded(cap);
        }
        let m = m as u64;
        let step = automaton_power(&base, m);
        let mut power = step.clone();
        let mut k = m;
        while k <= cap {
            if power.is_trivial() {
                return Order::Finite(k);
            }
            power = power.compose(&step).expect("same alphabet").canonical();
            k += m;
        }
        Order::Unbounded(cap)
    }

    /// Permutation induced on `X^n`, vertices indexed lexicographically.
    pub fn act_level(&self, e: &Element, n: usize, max_points: usize) -> Result<Permutation> {
        let size = level_size(self.degree(), n, max_points)?;
        self.automaton_level(&self.element_automaton(e), n, size)
    }

    fn automaton_level(&self, a: &InitialAutomaton, n: usize, size: usize) -> Result<Permutation> {
        let d = self.degree();
        let m = a.automaton();
        let mut images = vec![0u32; size];
        // depth-first over the tree, tracking (state, input index, output index)
        let mut stack = vec![(a.initial(), 0usize, 0usize, 0usize)];
        while let Some((q, level, inp, out)) = stack.pop() {
            if level == n {
                images[inp] = out as u32;
                continue;
            }
            for x in 0..d as Letter {
                let y = m.output(q, x) as usize;
                stack.push((m.next(q, x), level + 1, inp * d + x as usize, out * d + y));
            }
        }
        Permutation::from_images(images)
    }

    /// Level-`n` permutations of the generators.
    pub fn level_generators(&self, n: usize, max_points: usize) -> Result<Vec<Permutation>> {
        let size = level_size(self.degree(), n, max_points)?;
        (0..self.num_generators()).map(|i| self.automaton_level(&self.automata[2 * i], n, size)).collect()
    }

    /// `|G / (G ∩ stab_n)|`, the order of the action on level `n`.
    pub fn level_quotient_order(&self, n: usize, max_points: usize) -> Result<BigUint> {
        let gens = self.level_generators(n, max_points)?;
        group_order(level_size(self.degree(), n, max_points)?, &gens)
    }

    /// `log|G_n| / log|Aut(X^n)|`, exact when `|G_n|` is a power of `d!`.
    pub fn hausdorff_estimate(&self, n: usize, max_points: usize) -> Result<Hausdorff> {
        if n == 0 {
            return Err(Error::InvalidArgument("level 0 has a trivial automorphism group".into()));
        }
        let order = self.level_quotient_order(n, max_points)?;
        let d = self.degree();
        if d == 1 {
            return Ok(Hausdorff::Exact(BigRational::zero()));
        }
        // log_{d!} |Aut(X^n)| = 1 + d + … + d^{n-1}
        let denom: BigUint = (0..n).map(|k| BigUint::from(d).pow(k as u32)).sum();
        let fact: BigUint = (1..=d as u32).map(BigUint::from).product();
        let mut rest = order.clone();
        let mut exponent = 0u64;
        while rest > BigUint::one() && (&rest % &fact).is_zero() {
            rest /= &fact;
            exponent += 1;
        }
        if rest.is_one() {
            return Ok(Hausdorff::Exact(BigRational::new(BigUint::from(exponent).into(), denom.into())));
        }
        let log_order = big_log(&order);
        let log_aut = denom.to_f64().unwrap_or(f64::INFINITY) * (fact.to_f64().unwrap()).ln();
        Ok(Hausdorff::Approx(log_order / log_aut))
    }

    pub fn portrait(&self, e: &Element, depth: usize, max_points: usize) -> Result<Portrait> {
        if depth == 0 {
            return Err(Error::InvalidArgument("portrait depth must be at least 1".into()));
        }
        level_size(self.degree(), depth - 1, max_points)?;
        let a = self.element_automaton(e);
        let m = a.automaton();
        let d = self.degree();
        let mut labels = BTreeMap::new();
        let mut frontier = vec![(Vec::new(), a.initial())];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (v, q) in frontier {
                let images = m.output_row(q).iter().map(|&y| y as u32).collect();
                labels.insert(v.clone(), Permutation::from_images(images)?);
                for x in 0..d as Letter {
                    let mut u = v.clone();
                    u.push(x);
                    next.push((u, m.next(q, x)));
                }
            }
            frontier = next;
        }
        Ok(Portrait { degree: d, depth, labels })
    }

    /// Checks that `σ^i(r)` is trivial for every relator `r` and `0 ≤ i ≤ iterations`;
    /// generators without a rule are fixed by `σ`.
    pub fn verify_substitution_relators(
        &self,
        relators: &[Element],
        substitution: &[(usize, Element)],
        iterations: usize,
    ) -> Result<bool> {
        let mut images: Vec<Element> = (0..self.num_generators()).map(Element::generator).collect();
        for (i, w) in substitution {
            if *i >= self.num_generators() {
                return Err(Error::UnknownGenerator(format!("#{i}")));
            }
            images[*i] = w.clone();
        }
        let sigma = |e: &Element| {
            Element::from_word(e.word().iter().flat_map(|s| {
                let img = &images[s.index];
                if s.inverse {
                    img.inverse().word
                } else {
                    img.word.clone()
                }
            }))
        };
        for r in relators {
            let mut cur = r.clone();
            for i in 0..=iterations {
                if !self.is_trivial(&cur) {
                    return Ok(false);
                }
                if i < iterations {
                    cur = sigma(&cur);
                }
            }
        }
        Ok(true)
    }

    /// Generators and those inverses that differ from them, labelled `s` and `s'`.
    pub fn symmetric_generators(&self) -> Vec<(String, Element)> {
        let mut out = Vec::new();
        for i in 0..self.num_generators() {
            let s = Element::generator(i);
            out.push((self.generator_name(i).to_string(), s.clone()));
            if !self.is_trivial(&s.pow(2)) {
                out.push((format!("{}'", self.generator_name(i)), s.inverse()));
            }
        }
        out
    }
}

fn big_log(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}
