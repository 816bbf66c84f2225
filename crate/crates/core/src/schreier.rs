//! Schreier graphs of self-similar actions: finite levels `X^n`, balls in
//! orbits of eventually periodic boundary points, growth and covering maps.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::{level_size, Element, Group};
use crate::words::{index_to_word, Alphabet, OmegaWord};

/// Directed multigraph with labelled edges and named vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize, String)>,
}

impl LabeledGraph {
    pub fn new(names: Vec<String>) -> Self {
        LabeledGraph { names, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, label: impl Into<String>) {
        assert!(src < self.names.len() && dst < self.names.len(), "edge endpoint out of range");
        self.edges.push((src, dst, label.into()));
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize, String)] {
        &self.edges
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    /// Undirected graph without loops and parallel edges.
    pub fn simplicial(&self) -> SimplicialGraph {
        let mut g = SimplicialGraph::new(self.names.len());
        for &(s, t, _) in &self.edges {
            g.add_edge(s, t);
        }
        g
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn sorted_edges(&self) -> Vec<&(usize, usize, String)> {
        let mut edges: Vec<_> = self.edges.iter().collect();
        edges.sort();
        edges
    }

    /// DOT text with vertices in index order and edges sorted by
    /// `(source, target, label)`; the simplicial variant is an undirected
    /// `graph` without labels.
    pub fn to_dot(&self, simplicial: bool) -> String {
        let mut out = String::from(if simplicial { "graph {\n" } else { "digraph {\n" });
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", escape(name));
        }
        if simplicial {
            for (s, t) in self.simplicial().edges() {
                let _ = writeln!(out, "  v{s} -- v{t};");
            }
        } else {
            for (s, t, l) in self.sorted_edges() {
                let _ = writeln!(out, "  v{s} -> v{t} [label=\"{}\"];", escape(l));
            }
        }
        out.push_str("}\n");
        out
    }

    /// `src,dst,label` rows (vertex names), sorted like the DOT export.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("src,dst,label\n");
        for (s, t, l) in self.sorted_edges() {
            let _ = writeln!(out, "{},{},{}", self.names[*s], self.names[*t], l);
        }
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    adjacency: Vec<BTreeSet<usize>>,
}

impl SimplicialGraph {
    pub fn new(n: usize) -> Self {
        SimplicialGraph { adjacency: vec![BTreeSet::new(); n] }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adjacency[u].insert(v);
            self.adjacency[v].insert(u);
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_vertices()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() == 0 || self.distances(0).iter().all(Option::is_some)
    }

    /// Connected, with `n - 1` edges and maximum degree 2.
    pub fn is_path(&self) -> bool {
        let n = self.num_vertices();
        n > 0 && self.is_connected() && self.num_edges() == n - 1 && (0..n).all(|v| self.degree(v) <= 2)
    }

    pub fn is_cycle(&self) -> bool {
        let n = self.num_vertices();
        n >= 3 && self.is_connected() && (0..n).all(|v| self.degree(v) == 2)
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_vertices()];
        let mut out = Vec::new();
        for s in 0..self.num_vertices() {
            if seen[s] {
                continue;
            }
            let comp: Vec<usize> = self
                .distances(s)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect();
            for &v in &comp {
                seen[v] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Lengths of the cycles left after repeatedly pruning degree-one
    /// vertices, provided what remains is a disjoint union of cycles.
    pub fn core_cycle_lengths(&self) -> Option<Vec<usize>> {
        let n = self.num_vertices();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        while let Some(v) = queue.pop_front() {
            if removed[v] {
                continue;
            }
            removed[v] = true;
            for &u in &self.adjacency[v] {
                if !removed[u] {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        queue.push_back(u);
                    }
                }
            }
        }
        let core: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
        if core.iter().any(|&v| deg[v] != 2) {
            return None;
        }
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for &s in &core {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                len += 1;
                for &u in &self.adjacency[v] {
                    if !removed[u] && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        Some(lengths)
    }
}

/// `|B(v, k)|` for `k = 0..=r_max` in the simplicial view.
pub fn ball_growth(graph: &LabeledGraph, v: usize, r_max: usize) -> Result<Vec<usize>> {
    if v >= graph.num_vertices() {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
    }
    let dist = graph.simplicial().distances(v);
    let mut counts = vec![0usize; r_max + 1];
    for d in dist.into_iter().flatten() {
        if d <= r_max {
            counts[d] += 1;
        }
    }
    for k in 1..=r_max {
        counts[k] += counts[k - 1];
    }
    Ok(counts)
}

/// The symmetrized generators among `subset` (all generators when `None`).
pub fn generator_set(group: &Group, subset: Option<&[usize]>) -> Result<Vec<(String, Element)>> {
    let all = group.symmetric_generators();
    match subset {
        None => Ok(all),
        Some(idx) => {
            if let Some(&i) = idx.iter().find(|&&i| i >= group.num_generators()) {
                return Err(Error::UnknownGenerator(format!("#{i}")));
            }
            Ok(all
                .into_iter()
                .filter(|(_, e)| idx.contains(&e.word()[0].index))
                .collect())
        }
    }
}

fn level_names(alphabet: &Alphabet, d: usize, n: usize, size: usize) -> Vec<String> {
    (0..size).map(|i| alphabet.render(&index_to_word(i, d, n))).collect()
}

/// `Γ_n(G, S)` on `X^n`: one edge `(v, v^s, s)` per vertex and generator.
pub fn level_schreier(group: &Group, gens: &[(String, Element)], n: usize, max_points: usize) -> Result<LabeledGraph> {
    let d = group.degree();
    let size = level_size(d, n, max_points)?;
    let alphabet = Alphabet::new(d)?;
    let mut graph = LabeledGraph::new(level_names(&alphabet, d, n, size));
    let perms = gens
        .iter()
        .map(|(_, e)| group.act_level(e, n, max_points))
        .collect::<Result<Vec<_>>>()?;
    for v in 0..size {
        for ((label, _), p) in gens.iter().zip(&perms) {
            graph.add_edge(v, p.image(v), label.clone());
        }
    }
    Ok(graph)
}

/// Breadth-first ball of radius `radius` around `basepoint` in its orbit,
/// with all generator edges between vertices of the ball.
pub fn orbit_ball(group: &Group, gens: &[(String, Element)], basepoint: &OmegaWord, radius: usize) -> Result<LabeledGraph> {
    let d = group.degree();
    if basepoint.max_letter() as usize >= d {
        return Err(Error::AlphabetMismatch { letter: basepoint.max_letter() as usize, size: d });
    }
    let alphabet = Alphabet::new(d)?;
    let automata: Vec<_> = gens.iter().map(|(_, e)| group.element_automaton(e)).collect();
    let mut index: HashMap<OmegaWord, usize> = HashMap::new();
    let mut points = vec![basepoint.clone()];
    let mut dist = vec![0usize];
    index.insert(basepoint.clone(), 0);
    let mut edges = Vec::new();
    let mut k = 0;
    while k < points.len() {
        let p = points[k].clone();
        for (g, a) in automata.iter().enumerate() {
            let q = a.act_omega(&p)?;
            let target = match index.get(&q) {
                Some(&t) => Some(t),
                None if dist[k] < radius => {
                    index.insert(q.clone(), points.len());
                    points.push(q);
                    dist.push(dist[k] + 1);
                    Some(points.len() - 1)
                }
                None => None,
            };
            if let Some(t) = target {
                edges.push((k, t, g));
            }
        }
        k += 1;
    }
    let mut graph = LabeledGraph::new(points.iter().map(|p| alphabet.render_omega(p)).collect());
    for (s, t, g) in edges {
        graph.add_edge(s, t, gens[g].0.clone());
    }
    Ok(graph)
}

/// Checks that deleting the last letter is a labelled-graph morphism
/// `Γ_{n+1} → Γ_n` onto `Γ_n`.
pub fn covering_check(group: &Group, gens: &[(String, Element)], n: usize, max_points: usize) -> Result<bool> {
    let d = group.degree();
    let upper = level_schreier(group, gens, n + 1, max_points)?;
    let lower = level_schreier(group, gens, n, max_points)?;
    let lower_edges: BTreeSet<(usize, usize, &str)> = lower.edges().iter().map(|(s, t, l)| (*s, *t, l.as_str())).collect();
    let mut hit = BTreeSet::new();
    for (s, t, l) in upper.edges() {
        let image = (s / d, t / d, l.as_str());
        if !lower_edges.contains(&image) {
            return Ok(false);
        }
        hit.insert(image);
    }
    Ok(hit.len() == lower_edges.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDef;

    fn grigorchuk() -> Group {
        Group::new(
            GroupDef::parse("group g alphabet 2\na = perm(0 1) [1, 1]\nb = perm() [a, c]\nc = perm() [a, d]\nd = perm() [1, b]\n")
                .unwrap(),
        )
        .unwrap()
    }

    fn adding() -> Group {
        Group::new(GroupDef::parse("group z alphabet 2\na = perm(0 1) [1, a]\n").unwrap()).unwrap()
    }

    #[test]
    fn grigorchuk_levels_are_paths() {
        let g = grigorchuk();
        let gens = generator_set(&g, None).unwrap();
        for n in 1..=5 {
            let graph = level_schreier(&g, &gens, n, 1 << 16).unwrap();
            assert!(graph.simplicial().is_path(), "level {n}");
            assert!((0..graph.num_vertices()).all(|v| graph.out_degree(v) == 4));
        }
        let zero = level_schreier(&g, &gens, 0, 16).unwrap();
        assert_eq!(zero.num_vertices(), 1);
        assert_eq!(zero.edges().len(), 4);
    }

    #[test]
    fn dot_golden() {
        let mut g = LabeledGraph::new(vec!["x".into()]);
        g.add_edge(0, 0, "a");
        assert_eq!(g.to_dot(false), "digraph {\n  v0 [label=\"x\"];\n  v0 -> v0 [label=\"a\"];\n}\n");
        let gr = grigorchuk();
        let gamma1 = level_schreier(&gr, &generator_set(&gr, None).unwrap(), 1, 16).unwrap();
        let dot = gamma1.to_dot(false);
        assert!(dot.contains("v0 -> v1 [label=\"a\"];"));
        assert!(dot.contains("v0 -> v0 [label=\"d\"];"));
        assert_eq!(gamma1.simplicial().num_edges(), 1);
        assert_eq!(gamma1.to_dot(true).lines().filter(|l| l.contains("--")).count(), 1);
    }

    #[test]
    fn adding_machine_orbit_is_a_line() {
        let a = adding();
        let gens = generator_set(&a, None).unwrap();
        let ball = orbit_ball(&a, &gens, &OmegaWord::constant(0), 5).unwrap();
        assert_eq!(ball.num_vertices(), 11);
        assert!(ball.simplicial().is_path());
        let single = orbit_ball(&a, &gens, &OmegaWord::constant(0), 0).unwrap();
        assert_eq!(single.num_vertices(), 1);
    }

    #[test]
    fn grigorchuk_ray() {
        let g = grigorchuk();
        let gens = generator_set(&g, None).unwrap();
        let ball = orbit_ball(&g, &gens, &OmegaWord::constant(1), 3).unwrap();
        let s = ball.simplicial();
        assert!(s.is_path());
        assert_eq!(s.degree(0), 1);
        assert_eq!(ball_growth(&ball, 0, 3).unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn growth_on_cycle() {
        let a = adding();
        let graph = level_schreier(&a, &generator_set(&a, None).unwrap(), 4, 64).unwrap();
        assert!(graph.simplicial().is_cycle());
        assert_eq!(ball_growth(&graph, 3, 4).unwrap(), vec![1, 3, 5, 7, 9]);
        assert!(ball_growth(&graph, 99, 1).is_err());
    }

    #[test]
    fn coverings() {
        let g = grigorchuk();
        let gens = generator_set(&g, None).unwrap();
        for n in 0..4 {
            assert!(covering_check(&g, &gens, n, 1 << 12).unwrap());
        }
    }

    #[test]
    fn csv_export() {
        let a = adding();
        let graph = level_schreier(&a, &generator_set(&a, None).unwrap(), 1, 64).unwrap();
        assert_eq!(graph.to_csv(), "src,dst,label\n0,1,a\n0,1,a'\n1,0,a\n1,0,a'\n");
    }
}
