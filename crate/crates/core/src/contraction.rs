//! Nucleus search, contraction estimates, the open set condition and the
//! asymptotic equivalence relation on left-infinite words.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{level_size, Element, Gen, Group};
use crate::mealy::{InitialAutomaton, MealyAutomaton};
use crate::schreier::LabeledGraph;
use crate::words::{index_to_word, Alphabet, LeftWord, Letter};

/// Default bound on the candidate set of the nucleus search.
pub const DEFAULT_NUCLEUS_CAP: usize = 1000;

/// A finite set of elements closed under restriction, indexed by their
/// canonical automata.
#[derive(Debug, Clone)]
struct ElementSet {
    reps: Vec<Element>,
    keys: Vec<InitialAutomaton>,
    index: HashMap<InitialAutomaton, usize>,
    /// `succ[i][x]` is the index of `reps[i]|_x`.
    succ: Vec<Vec<usize>>,
}

impl ElementSet {
    fn new() -> Self {
        ElementSet { reps: Vec::new(), keys: Vec::new(), index: HashMap::new(), succ: Vec::new() }
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    /// Inserts an element; keeps the shortest representative word.
    fn insert(&mut self, key: InitialAutomaton, rep: Element) -> (usize, bool) {
        if let Some(&i) = self.index.get(&key) {
            if (rep.len(), &rep) < (self.reps[i].len(), &self.reps[i]) {
                self.reps[i] = rep;
            }
            return (i, false);
        }
        let i = self.reps.len();
        self.index.insert(key.clone(), i);
        self.keys.push(key);
        self.reps.push(rep);
        self.succ.push(Vec::new());
        (i, true)
    }
}

/// Smallest restriction-closed superset of `seed`, or `Exceeded` once it has
/// more than `cap` elements.
fn closure(group: &Group, seed: impl IntoIterator<Item = (InitialAutomaton, Element)>, cap: usize) -> Result<ElementSet> {
    let mut set = ElementSet::new();
    for (key, rep) in seed {
        set.insert(key, rep);
        if set.len() > cap {
            return Err(Error::Exceeded { cap });
        }
    }
    let d = group.degree();
    let mut k = 0;
    while k < set.len() {
        let mut succ = Vec::with_capacity(d);
        for x in 0..d as Letter {
            let key = set.keys[k].restrict(x).canonical();
            let rep = group.restriction(&set.reps[k], &[x])?;
            let (j, _) = set.insert(key, rep);
            if set.len() > cap {
                return Err(Error::Exceeded { cap });
            }
            succ.push(j);
        }
        set.succ[k] = succ;
        k += 1;
    }
    Ok(set)
}

/// Elements lying on a cycle of the restriction graph, and everything
/// reachable from them.
fn recurrent(set: &ElementSet) -> Vec<usize> {
    let n = set.len();
    let comp = scc(&set.succ);
    let mut size = vec![0usize; n];
    for &c in &comp {
        size[c] += 1;
    }
    let mut keep: Vec<bool> =
        (0..n).map(|v| size[comp[v]] > 1 || set.succ[v].contains(&v)).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
    while let Some(v) = stack.pop() {
        for &u in &set.succ[v] {
            if !keep[u] {
                keep[u] = true;
                stack.push(u);
            }
        }
    }
    (0..n).filter(|&v| keep[v]).collect()
}

/// Iterative Tarjan; returns the component id of every vertex.
fn scc(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < succ[v].len() {
                let w = succ[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// The nucleus: elements with their restriction table.
#[derive(Debug, Clone)]
pub struct Nucleus {
    degree: usize,
    elements: Vec<Element>,
    names: Vec<String>,
    automata: Vec<InitialAutomaton>,
    /// `restriction[i][x]` is the index of `elements[i]|_x`.
    restriction: Vec<Vec<usize>>,
    /// `output[i][x] = x^{elements[i]}`.
    output: Vec<Vec<Letter>>,
    identity: usize,
}

impl Nucleus {
    fn from_set(group: &Group, set: &ElementSet, members: &[usize]) -> Self {
        let mut order: Vec<usize> = members.to_vec();
        order.sort_by(|&i, &j| {
            let (a, b) = (&set.reps[i], &set.reps[j]);
            (a.len(), a.word()).cmp(&(b.len(), b.word()))
        });
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let restriction = order.iter().map(|&i| set.succ[i].iter().map(|j| pos[j]).collect()).collect();
        let output = order.iter().map(|&i| set.keys[i].root_permutation().to_vec()).collect();
        let identity = order.iter().position(|&i| set.keys[i].is_trivial()).expect("identity is recurrent");
        Nucleus {
            degree: group.degree(),
            elements: order.iter().map(|&i| set.reps[i].clone()).collect(),
            names: order.iter().map(|&i| group.render(&set.reps[i])).collect(),
            automata: order.iter().map(|&i| set.keys[i].clone()).collect(),
            restriction,
            output,
            identity,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Shortest representative words, rendered.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn restrict(&self, i: usize, x: Letter) -> usize {
        self.restriction[i][x as usize]
    }

    pub fn output(&self, i: usize, x: Letter) -> Letter {
        self.output[i][x as usize]
    }

    /// Index of the element acting like `a`, if any.
    pub fn find(&self, a: &InitialAutomaton) -> Option<usize> {
        let key = a.canonical();
        self.automata.iter().position(|k| *k == key)
    }

    pub fn contains(&self, group: &Group, e: &Element) -> bool {
        self.find(&group.element_automaton(e)).is_some()
    }

    /// The nucleus as one Mealy automaton, state `i` being element `i`.
    pub fn automaton(&self) -> MealyAutomaton {
        let output = self.output.iter().flatten().copied().collect();
        let next = self.restriction.iter().flatten().copied().collect();
        MealyAutomaton::new(self.degree, output, next).expect("nucleus tables are total")
    }

    pub fn to_dot(&self) -> String {
        self.automaton().to_dot(Some(&self.names), None)
    }

    /// A group definition with one generator `h<i>` per element; comments
    /// map each back to its word.
    pub fn to_dsl(&self, name: &str) -> String {
        let mut out = format!("group {name}_nucleus alphabet {}\n", self.degree);
        for i in 0..self.len() {
            let perm = crate::perm::Permutation::from_images(self.output[i].iter().map(|&y| y as u32).collect()).unwrap();
            let cycles = perm.to_string();
            let restr: Vec<String> = self.restriction[i].iter().map(|j| format!("h{j}")).collect();
            out.push_str(&format!("# h{i} = {}\nh{i} = perm{cycles} [{}]\n", self.names[i], restr.join(", ")));
        }
        out
    }
}

fn seed_generators(group: &Group) -> Vec<(InitialAutomaton, Element)> {
    let mut seed = vec![(InitialAutomaton::identity(group.degree()), Element::identity())];
    for i in 0..group.num_generators() {
        for s in [Gen::new(i), Gen::new(i).inv()] {
            seed.push((group.generator_automaton(s).clone(), Element::from_word([s])));
        }
    }
    seed
}

/// Smallest superset of `seed` closed under restriction by single letters.
pub fn restriction_closure(group: &Group, seed: &[Element], cap: usize) -> Result<Vec<Element>> {
    let set = closure(group, seed.iter().map(|e| (group.element_automaton(e), e.clone())), cap)?;
    let mut reps = set.reps;
    reps.sort_by(|a, b| (a.len(), a.word()).cmp(&(b.len(), b.word())));
    Ok(reps)
}

/// Fixpoint search: start from the recurrent part of the closure of the
/// symmetrized generators and the identity, then repeatedly add pairwise
/// products and keep the recurrent part of the closure.
pub fn nucleus(group: &Group, cap: usize) -> Result<Nucleus> {
    let set = closure(group, seed_generators(group), cap)?;
    let mut current: Vec<(InitialAutomaton, Element)> =
        recurrent(&set).into_iter().map(|i| (set.keys[i].clone(), set.reps[i].clone())).collect();
    loop {
        let mut seed = current.clone();
        for (ka, ea) in &current {
            for (kb, eb) in &current {
                seed.push((ka.compose(kb)?.canonical(), ea.mul(eb)));
            }
        }
        let set = closure(group, seed, cap)?;
        let members = recurrent(&set);
        let keys: BTreeSet<usize> = members.iter().copied().collect();
        let same = members.len() == current.len() && current.iter().all(|(k, _)| keys.contains(&set.index[k]));
        if same {
            return Ok(Nucleus::from_set(group, &set, &members));
        }
        current = members.into_iter().map(|i| (set.keys[i].clone(), set.reps[i].clone())).collect();
    }
}

#[derive(Debug, Clone)]
pub enum Contracting {
    Yes(Nucleus),
    /// The search passed the cap; this proves nothing.
    Inconclusive { cap: usize },
}

pub fn is_contracting(group: &Group, cap: usize) -> Result<Contracting> {
    match nucleus(group, cap) {
        Ok(n) => Ok(Contracting::Yes(n)),
        Err(Error::Exceeded { cap }) => Ok(Contracting::Inconclusive { cap }),
        Err(e) => Err(e),
    }
}

/// Length reduction by the relations among pairs of (inverted) generators
/// that hold in the group: trivial products are deleted and products equal
/// to a single generator are merged.
pub struct Reducer {
    /// `rule[s][t]`: `None` if `st` cannot be shortened, `Some(None)` if it
    /// is trivial, `Some(Some(u))` if it equals `u`.
    rule: Vec<Vec<Option<Option<usize>>>>,
    trivial: Vec<bool>,
    tokens: Vec<Gen>,
}

impl Reducer {
    pub fn new(group: &Group) -> Self {
        let tokens: Vec<Gen> = (0..group.num_generators()).flat_map(|i| [Gen::new(i), Gen::new(i).inv()]).collect();
        let keys: Vec<InitialAutomaton> = tokens.iter().map(|&s| group.generator_automaton(s).clone()).collect();
        let trivial: Vec<bool> = keys.iter().map(|k| k.is_trivial()).collect();
        let rule = keys
            .iter()
            .map(|ks| {
                keys.iter()
                    .map(|kt| {
                        let p = ks.compose(kt).expect("same alphabet").canonical();
                        if p.is_trivial() {
                            Some(None)
                        } else {
                            keys.iter().position(|k| *k == p).map(Some)
                        }
                    })
                    .collect()
            })
            .collect();
        Reducer { rule, trivial, tokens }
    }

    fn token(&self, g: Gen) -> usize {
        2 * g.index + g.inverse as usize
    }

    /// Pushes `g` onto a reduced word kept as a stack of tokens.
    fn push(&self, stack: &mut Vec<usize>, g: Gen) {
        let mut t = self.token(g);
        if self.trivial[t] {
            return;
        }
        while let Some(&top) = stack.last() {
            match self.rule[top][t] {
                None => break,
                Some(None) => {
                    stack.pop();
                    return;
                }
                Some(Some(u)) => {
                    stack.pop();
                    t = u;
                    if self.trivial[t] {
                        return;
                    }
                }
            }
        }
        stack.push(t);
    }

    pub fn reduce(&self, e: &Element) -> Element {
        let mut stack = Vec::new();
        for &g in e.word() {
            self.push(&mut stack, g);
        }
        Element::from_word(stack.into_iter().map(|t| self.tokens[t]))
    }

    pub fn length(&self, e: &Element) -> usize {
        self.reduce(e).len()
    }

    /// A random reduced word of the given length (`None` if every
    /// generator is trivial).
    pub fn random_word(&self, rng: &mut impl Rng, len: usize) -> Option<Element> {
        if self.trivial.iter().all(|&t| t) {
            return None;
        }
        let mut stack = Vec::new();
        while stack.len() < len {
            let t = rng.gen_range(0..self.tokens.len());
            self.push(&mut stack, self.tokens[t]);
        }
        Some(Element::from_word(stack.into_iter().map(|t| self.tokens[t])))
    }
}

/// Empirical contraction estimate `max (|g|_v| / |g|)^{1/depth}` over random
/// reduced words `g` of length `word_len` and all `v` of length `depth`.
/// This is an estimate of the contraction coefficient, not its exact value.
pub fn contraction_estimate(
    group: &Group,
    samples: usize,
    depth: usize,
    word_len: usize,
    seed: u64,
    max_points: usize,
) -> Result<f64> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be positive".into()));
    }
    let size = level_size(group.degree(), depth, max_points)?;
    let reducer = Reducer::new(group);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let Some(e) = reducer.random_word(&mut rng, word_len) else { return Ok(0.0) };
        best = best.max(estimate_for(group, &reducer, &e, depth, size)?);
    }
    Ok(best)
}

fn estimate_for(group: &Group, reducer: &Reducer, e: &Element, depth: usize, size: usize) -> Result<f64> {
    let len = reducer.length(e);
    if len == 0 {
        return Ok(0.0);
    }
    let mut best = 0usize;
    for idx in 0..size {
        let v = index_to_word(idx, group.degree(), depth);
        best = best.max(reducer.length(&group.restriction(e, &v)?));
    }
    Ok((best as f64 / len as f64).powf(1.0 / depth as f64))
}

/// Same estimate over explicitly given elements (0 when all are trivial).
pub fn contraction_estimate_for(group: &Group, elements: &[Element], depth: usize, max_points: usize) -> Result<f64> {
    let size = level_size(group.degree(), depth, max_points)?;
    let reducer = Reducer::new(group);
    let mut best: f64 = 0.0;
    for e in elements {
        best = best.max(estimate_for(group, &reducer, e, depth, size)?);
    }
    Ok(best)
}

/// True iff from every element some restriction is trivial.
pub fn open_set_condition(n: &Nucleus) -> bool {
    let len = n.len();
    let mut reaches = vec![false; len];
    reaches[n.identity] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..len {
            if !reaches[i] && n.restriction[i].iter().any(|&j| reaches[j]) {
                reaches[i] = true;
                changed = true;
            }
        }
    }
    reaches.into_iter().all(|r| r)
}

/// Decides whether `…x_2x_1` and `…y_2y_1` are asymptotically equivalent:
/// whether the nucleus Moore diagram has a left-infinite path whose edges
/// read the pairs `(x_i, y_i)`.
pub fn asymptotically_equivalent(n: &Nucleus, u: &LeftWord, v: &LeftWord) -> Result<bool> {
    u.check(n.degree)?;
    v.check(n.degree)?;
    let m = u.suffix.len().max(v.suffix.len());
    let u = u.padded(m - u.suffix.len());
    let v = v.padded(m - v.suffix.len());
    let period = u.tail.len().lcm(&v.tail.len());
    let len = n.len();
    let step = |set: &[bool], x: Letter, y: Letter| -> Vec<bool> {
        let mut out = vec![false; len];
        for h in (0..len).filter(|&h| set[h]) {
            if n.output(h, x) == y {
                out[n.restrict(h, x)] = true;
            }
        }
        out
    };
    // alive[j]: states h_{m+j} admitting an infinite past, j = 0..period
    let mut alive = vec![vec![true; len]; period];
    loop {
        let mut changed = false;
        for j in (1..=period).rev() {
            let (x, y) = (u.letter(m + j), v.letter(m + j));
            let image = step(&alive[j % period], x, y);
            for h in 0..len {
                if alive[j - 1][h] && !image[h] {
                    alive[j - 1][h] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut current = alive.swap_remove(0);
    for i in (1..=m).rev() {
        current = step(&current, u.letter(i), v.letter(i));
    }
    Ok(current.into_iter().any(|b| b))
}

/// Graph on `X^level` with an edge `{u, v}` whenever some nucleus element
/// maps `v` to `u`; loops and repeated edges are kept, so the simplicial view
/// is the tile graph.
pub fn tile_graph(group: &Group, n: &Nucleus, level: usize, max_points: usize) -> Result<LabeledGraph> {
    let d = group.degree();
    let size = level_size(d, level, max_points)?;
    let alphabet = Alphabet::new(d)?;
    let names = (0..size).map(|i| alphabet.render(&index_to_word(i, d, level))).collect();
    let mut graph = LabeledGraph::new(names);
    for (h, e) in n.elements().iter().enumerate() {
        let p = group.act_level(e, level, max_points)?;
        for v in 0..size {
            graph.add_edge(v, p.image(v), n.names()[h].clone());
        }
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDef;

    fn group(text: &str) -> Group {
        Group::new(GroupDef::parse(text).unwrap()).unwrap()
    }

    fn grigorchuk() -> Group {
        group("group g alphabet 2\na = perm(0 1) [1, 1]\nb = perm() [a, c]\nc = perm() [a, d]\nd = perm() [1, b]\n")
    }

    fn adding() -> Group {
        group("group z alphabet 2\na = perm(0 1) [1, a]\n")
    }

    fn sorted(mut v: Vec<String>) -> Vec<String> {
        v.sort();
        v
    }

    #[test]
    fn closures() {
        let a = adding();
        let c = restriction_closure(&a, &[Element::generator(0)], 100).unwrap();
        assert_eq!(c.iter().map(|e| a.render(e)).collect::<Vec<_>>(), ["1", "a"]);
        let g = grigorchuk();
        let gens: Vec<Element> = (0..4).map(Element::generator).collect();
        assert_eq!(restriction_closure(&g, &gens, 100).unwrap().len(), 5);
        assert_eq!(restriction_closure(&g, &[Element::identity()], 100).unwrap().len(), 1);
    }

    #[test]
    fn nuclei() {
        let a = adding();
        let n = nucleus(&a, 100).unwrap();
        assert_eq!(sorted(n.names().to_vec()), ["1", "a", "a'"]);
        let g = grigorchuk();
        let n = nucleus(&g, 100).unwrap();
        assert_eq!(sorted(n.names().to_vec()), ["1", "a", "b", "c", "d"]);
        let lamp = group("group l alphabet 2\na = perm(0 1) [b, a]\nb = perm() [b, a]\n");
        assert!(matches!(nucleus(&lamp, 50), Err(Error::Exceeded { cap: 50 })));
        assert!(matches!(is_contracting(&lamp, 50).unwrap(), Contracting::Inconclusive { .. }));
        let trivial = group("group t alphabet 2\ne = perm() [e, e]\n");
        match is_contracting(&trivial, 10).unwrap() {
            Contracting::Yes(n) => assert_eq!(n.names(), ["1"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nucleus_is_closed() {
        let g = grigorchuk();
        let n = nucleus(&g, 100).unwrap();
        for e in n.elements() {
            assert!(n.contains(&g, &e.inverse()));
            for x in 0..2 {
                assert!(n.contains(&g, &g.restriction(e, &[x]).unwrap()));
            }
        }
    }

    #[test]
    fn open_set() {
        assert!(open_set_condition(&nucleus(&adding(), 100).unwrap()));
        assert!(open_set_condition(&nucleus(&grigorchuk(), 100).unwrap()));
        let s = group("group s alphabet 2\na = perm(0 1) [a, a]\n");
        assert!(!open_set_condition(&nucleus(&s, 100).unwrap()));
    }

    #[test]
    fn equivalence_examples() {
        let bin = Alphabet::new(2).unwrap();
        let a = adding();
        let n = nucleus(&a, 100).unwrap();
        let u = LeftWord::parse(&bin, "(0)10110").unwrap();
        let v = LeftWord::parse(&bin, "(1)00110").unwrap();
        assert!(asymptotically_equivalent(&n, &u, &v).unwrap());
        assert!(asymptotically_equivalent(&n, &u, &u).unwrap());
        let w = LeftWord::parse(&bin, "(01)").unwrap();
        assert!(!asymptotically_equivalent(&n, &LeftWord::parse(&bin, "(0)").unwrap(), &w).unwrap());
        let g = grigorchuk();
        let n = nucleus(&g, 100).unwrap();
        let u = LeftWord::parse(&bin, "(1)0110").unwrap();
        let v = LeftWord::parse(&bin, "(1)0010").unwrap();
        assert!(asymptotically_equivalent(&n, &u, &v).unwrap());
    }

    #[test]
    fn left_word_padding() {
        let bin = Alphabet::new(2).unwrap();
        let u = LeftWord::parse(&bin, "(01)1").unwrap();
        let p = u.padded(3);
        assert_eq!(p.render(&bin), "(10)1011");
        for i in 1..10 {
            assert_eq!(u.letter(i), p.letter(i));
        }
    }

    #[test]
    fn tile_graphs() {
        let g = grigorchuk();
        let n = nucleus(&g, 100).unwrap();
        assert!(tile_graph(&g, &n, 3, 64).unwrap().simplicial().is_path());
        let a = adding();
        let n = nucleus(&a, 100).unwrap();
        assert!(tile_graph(&a, &n, 4, 64).unwrap().simplicial().is_cycle());
        let t = tile_graph(&a, &n, 0, 64).unwrap();
        assert_eq!(t.num_vertices(), 1);
        assert_eq!(t.simplicial().num_edges(), 0);
    }

    #[test]
    fn contraction_estimates() {
        let g = grigorchuk();
        let est = contraction_estimate(&g, 20, 4, 64, 7, 1 << 16).unwrap();
        assert!(est > 0.0 && est <= 0.85, "{est}");
        let a = adding();
        let est = contraction_estimate(&a, 20, 6, 64, 7, 1 << 16).unwrap();
        assert!(est <= 0.75, "{est}");
        assert_eq!(contraction_estimate_for(&a, &[Element::identity()], 3, 64).unwrap(), 0.0);
    }

    #[test]
    fn reducer_uses_involutions() {
        let g = grigorchuk();
        let r = Reducer::new(&g);
        assert_eq!(r.length(&g.parse_element("abcab").unwrap()), 4);
        assert_eq!(r.length(&g.parse_element("bb").unwrap()), 0);
    }

    #[test]
    fn nucleus_exports() {
        let n = nucleus(&adding(), 100).unwrap();
        let dsl = n.to_dsl("z");
        let parsed = GroupDef::parse(&dsl).unwrap();
        assert_eq!(parsed.generators().len(), 3);
        assert!(n.to_dot().starts_with("digraph moore {"));
    }
}
