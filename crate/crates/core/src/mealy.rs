//! Finite Mealy transducers `⟨Q, λ, π⟩` over a finite alphabet.
//!
//! A state `q` reading a letter `x` writes `λ(q, x)` and moves to
//! `π(q, x)`. Every group-theoretic operation in this crate ends up as a
//! composition, inversion or triviality test of these machines.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::words::{Letter, OmegaWord, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MealyAutomaton {
    degree: usize,
    /// `output[q * degree + x] = λ(q, x)`
    output: Vec<Letter>,
    /// `next[q * degree + x] = π(q, x)`
    next: Vec<usize>,
}

impl MealyAutomaton {
    pub fn new(degree: usize, output: Vec<Letter>, next: Vec<usize>) -> Result<Self> {
        if degree == 0 || output.len() != next.len() || !output.len().is_multiple_of(degree) || output.is_empty() {
            return Err(Error::InvalidArgument("output and transition tables must be nonempty and total".into()));
        }
        let states = output.len() / degree;
        if let Some(&x) = output.iter().find(|&&x| x as usize >= degree) {
            return Err(Error::AlphabetMismatch { letter: x as usize, size: degree });
        }
        if let Some(&q) = next.iter().find(|&&q| q >= states) {
            return Err(Error::InvalidArgument(format!("transition to undefined state {q}")));
        }
        Ok(Self { degree, output, next })
    }

    /// The one-state automaton acting trivially.
    pub fn identity(degree: usize) -> Self {
        Self { degree, output: (0..degree as Letter).collect(), next: vec![0; degree] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_states(&self) -> usize {
        self.output.len() / self.degree
    }

    pub fn output(&self, q: usize, x: Letter) -> Letter {
        self.output[q * self.degree + x as usize]
    }

    pub fn next(&self, q: usize, x: Letter) -> usize {
        self.next[q * self.degree + x as usize]
    }

    /// The map `x ↦ λ(q, x)`.
    pub fn output_row(&self, q: usize) -> &[Letter] {
        &self.output[q * self.degree..(q + 1) * self.degree]
    }

    pub fn next_row(&self, q: usize) -> &[usize] {
        &self.next[q * self.degree..(q + 1) * self.degree]
    }

    pub fn is_invertible(&self) -> bool {
        self.first_non_permutation().is_none()
    }

    fn first_non_permutation(&self) -> Option<usize> {
        (0..self.num_states()).find(|&q| {
            let mut seen = vec![false; self.degree];
            self.output_row(q).iter().any(|&y| std::mem::replace(&mut seen[y as usize], true))
        })
    }

    /// Marks every state that acts as the identity on `X^ω`.
    ///
    /// Greatest fixpoint: states moving some letter are removed first, then
    /// states with a transition into a removed state, until stable.
    pub fn trivial_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut alive: Vec<bool> =
            (0..n).map(|q| self.output_row(q).iter().enumerate().all(|(x, &y)| x == y as usize)).collect();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for &r in self.next_row(q) {
                preds[r].push(q);
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| !alive[q]).collect();
        while let Some(r) = queue.pop_front() {
            for &q in &preds[r] {
                if alive[q] {
                    alive[q] = false;
                    queue.push_back(q);
                }
            }
        }
        alive
    }

    pub fn acts_trivially(&self, q: usize) -> bool {
        self.trivial_states()[q]
    }

    /// Partition-refinement quotient. Returns the quotient automaton and the
    /// class of every original state; classes are numbered by first occurrence.
    pub fn minimize(&self) -> (MealyAutomaton, Vec<usize>) {
        let n = self.num_states();
        let mut class = renumber(&(0..n).map(|q| self.output_row(q).to_vec()).collect::<Vec<_>>());
        let mut count = class.iter().max().map_or(0, |m| m + 1);
        loop {
            let signatures: Vec<(usize, Vec<usize>)> = (0..n)
                .map(|q| (class[q], self.next_row(q).iter().map(|&r| class[r]).collect()))
                .collect();
            let refined = renumber(&signatures);
            let refined_count = refined.iter().max().map_or(0, |m| m + 1);
            class = refined;
            if refined_count == count {
                break;
            }
            count = refined_count;
        }
        let mut output = vec![0; count * self.degree];
        let mut next = vec![0; count * self.degree];
        for q in 0..n {
            let c = class[q];
            for x in 0..self.degree {
                output[c * self.degree + x] = self.output[q * self.degree + x];
                next[c * self.degree + x] = class[self.next[q * self.degree + x]];
            }
        }
        (MealyAutomaton { degree: self.degree, output, next }, class)
    }

    /// Moore diagram in DOT: one node per state, one edge per `(q, x)`
    /// labelled `x|λ(q,x)`.
    pub fn to_dot(&self, names: Option<&[String]>, symbols: Option<&crate::words::Alphabet>) -> String {
        let name = |q: usize| names.and_then(|n| n.get(q).cloned()).unwrap_or_else(|| format!("q{q}"));
        let sym = |x: Letter| symbols.map(|a| a.symbol(x).to_string()).unwrap_or_else(|| x.to_string());
        let mut out = String::from("digraph moore {\n");
        for q in 0..self.num_states() {
            let _ = writeln!(out, "  s{q} [label=\"{}\"];", name(q));
        }
        for q in 0..self.num_states() {
            for x in 0..self.degree as Letter {
                let _ = writeln!(out, "  s{q} -> s{} [label=\"{}|{}\"];", self.next(q, x), sym(x), sym(self.output(q, x)));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn renumber<K: std::hash::Hash + Eq + Clone>(keys: &[K]) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k.clone()).or_insert(next)
        })
        .collect()
}

/// A Mealy automaton with a chosen initial state; it defines a single
/// length- and prefix-preserving transformation of words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InitialAutomaton {
    automaton: MealyAutomaton,
    initial: usize,
}

impl InitialAutomaton {
    pub fn new(automaton: MealyAutomaton, initial: usize) -> Result<Self> {
        if initial >= automaton.num_states() {
            return Err(Error::InvalidArgument(format!("initial state {initial} out of range")));
        }
        Ok(Self { automaton, initial })
    }

    pub fn identity(degree: usize) -> Self {
        Self { automaton: MealyAutomaton::identity(degree), initial: 0 }
    }

    pub fn automaton(&self) -> &MealyAutomaton {
        &self.automaton
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn degree(&self) -> usize {
        self.automaton.degree
    }

    fn check(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|&&x| x as usize >= self.degree()) {
            Some(&x) => Err(Error::AlphabetMismatch { letter: x as usize, size: self.degree() }),
            None => Ok(()),
        }
    }

    pub fn act(&self, w: &[Letter]) -> Result<Word> {
        self.check(w)?;
        let mut q = self.initial;
        Ok(w.iter()
            .map(|&x| {
                let y = self.automaton.output(q, x);
                q = self.automaton.next(q, x);
                y
            })
            .collect())
    }

    /// State reached after reading `w`.
    pub fn state_after(&self, w: &[Letter]) -> Result<usize> {
        self.check(w)?;
        Ok(w.iter().fold(self.initial, |q, &x| self.automaton.next(q, x)))
    }

    /// Exact image of an eventually periodic word: after the preperiod the
    /// run is periodic in `(state, position in period)`, and the first
    /// repeated pair closes the output period.
    pub fn act_omega(&self, w: &OmegaWord) -> Result<OmegaWord> {
        self.check(w.preperiod())?;
        self.check(w.period())?;
        let mut q = self.initial;
        let mut out = Vec::new();
        for &x in w.preperiod() {
            out.push(self.automaton.output(q, x));
            q = self.automaton.next(q, x);
        }
        let p = w.period().len();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pos = 0;
        loop {
            if let Some(&start) = seen.get(&(q, pos)) {
                let period = out[start..].to_vec();
                out.truncate(start);
                return OmegaWord::new(out, period);
            }
            seen.insert((q, pos), out.len());
            let x = w.period()[pos];
            out.push(self.automaton.output(q, x));
            q = self.automaton.next(q, x);
            pos = (pos + 1) % p;
        }
    }

    /// The transformation "first `self`, then `other`", on the reachable part
    /// of the product automaton, states numbered breadth-first.
    pub fn compose(&self, other: &InitialAutomaton) -> Result<InitialAutomaton> {
        if self.degree() != other.degree() {
            return Err(Error::AlphabetMismatch { letter: other.degree(), size: self.degree() });
        }
        let d = self.degree();
        let (a, b) = (&self.automaton, &other.automaton);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut order = vec![(self.initial, other.initial)];
        index.insert(order[0], 0);
        let mut output = Vec::new();
        let mut next = Vec::new();
        let mut k = 0;
        while k < order.len() {
            let (s, r) = order[k];
            for x in 0..d as Letter {
                let y = a.output(s, x);
                output.push(b.output(r, y));
                let pair = (a.next(s, x), b.next(r, y));
                let id = *index.entry(pair).or_insert_with(|| {
                    order.push(pair);
                    order.len() - 1
                });
                next.push(id);
            }
            k += 1;
        }
        Ok(InitialAutomaton { automaton: MealyAutomaton { degree: d, output, next }, initial: 0 })
    }

    pub fn invert(&self) -> Result<InitialAutomaton> {
        if let Some(state) = self.automaton.first_non_permutation() {
            return Err(Error::NotInvertible { state });
        }
        let d = self.degree();
        let n = self.automaton.num_states();
        let mut output = vec![0; n * d];
        let mut next = vec![0; n * d];
        for q in 0..n {
            for x in 0..d as Letter {
                let y = self.automaton.output(q, x) as usize;
                output[q * d + y] = x;
                next[q * d + y] = self.automaton.next(q, x);
            }
        }
        Ok(InitialAutomaton { automaton: MealyAutomaton { degree: d, output, next }, initial: self.initial })
    }

    pub fn is_trivial(&self) -> bool {
        self.automaton.acts_trivially(self.initial)
    }

    /// The same automaton started at `π(initial, x)`.
    pub fn restrict(&self, x: Letter) -> InitialAutomaton {
        InitialAutomaton { automaton: self.automaton.clone(), initial: self.automaton.next(self.initial, x) }
    }

    pub fn root_permutation(&self) -> &[Letter] {
        self.automaton.output_row(self.initial)
    }

    /// Reachable, minimized and renumbered breadth-first from the initial
    /// state. Two initial automata define the same transformation iff their
    /// canonical forms are equal.
    pub fn canonical(&self) -> InitialAutomaton {
        let (min, class) = self.automaton.minimize();
        let d = self.degree();
        let start = class[self.initial];
        let mut index = vec![usize::MAX; min.num_states()];
        let mut order = vec![start];
        index[start] = 0;
        let mut k = 0;
        while k < order.len() {
            let q = order[k];
            for &r in min.next_row(q) {
                if index[r] == usize::MAX {
                    index[r] = order.len();
                    order.push(r);
                }
            }
            k += 1;
        }
        let mut output = Vec::with_capacity(order.len() * d);
        let mut next = Vec::with_capacity(order.len() * d);
        for &q in &order {
            output.extend_from_slice(min.output_row(q));
            next.extend(min.next_row(q).iter().map(|&r| index[r]));
        }
        InitialAutomaton { automaton: MealyAutomaton { degree: d, output, next }, initial: 0 }
    }

    pub fn num_states(&self) -> usize {
        self.automaton.num_states()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    /// States: 0 = identity, 1 = a with (0w)^a = 1w, (1w)^a = 0w^a.
    fn adding_machine() -> InitialAutomaton {
        let m = MealyAutomaton::new(2, vec![0, 1, 1, 0], vec![0, 0, 0, 1]).unwrap();
        InitialAutomaton::new(m, 1).unwrap()
    }

    fn w(s: &str) -> Word {
        Alphabet::new(2).unwrap().parse_word(s).unwrap()
    }

    fn all_words(max_len: usize) -> Vec<Word> {
        let a = Alphabet::new(2).unwrap();
        (0..=max_len).flat_map(|n| a.words_of_length(n).collect::<Vec<_>>()).collect()
    }

    #[test]
    fn adding_machine_action() {
        let a = adding_machine();
        assert_eq!(a.act(&w("000")).unwrap(), w("100"));
        assert_eq!(a.act(&w("111")).unwrap(), w("000"));
        let id = InitialAutomaton::identity(2);
        assert_eq!(id.act(&w("0110")).unwrap(), w("0110"));
        assert!(matches!(a.act(&[0, 2]), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn adding_machine_on_omega_words() {
        let a = adding_machine();
        let alph = Alphabet::new(2).unwrap();
        assert_eq!(a.act_omega(&alph.parse_omega("(1)").unwrap()).unwrap(), alph.parse_omega("(0)").unwrap());
        assert_eq!(a.act_omega(&alph.parse_omega("0(1)").unwrap()).unwrap(), alph.parse_omega("1(1)").unwrap());
        // 1 + (01)∞ = 1 + (-1/3)·... check against finite truncation instead
        let x = alph.parse_omega("11(011)").unwrap();
        let img = a.act_omega(&x).unwrap();
        assert_eq!(img.prefix(20), a.act(&x.prefix(20)).unwrap());
    }

    #[test]
    fn composition_and_inverse() {
        let a = adding_machine();
        let aa = a.compose(&a).unwrap();
        assert_eq!(aa.act(&w("00")).unwrap(), w("01"));
        let inv = a.invert().unwrap();
        assert_eq!(inv.act(&w("100")).unwrap(), w("000"));
        let id = a.compose(&inv).unwrap();
        assert!(id.is_trivial());
        let ai = a.compose(&InitialAutomaton::identity(2)).unwrap();
        let twice = inv.invert().unwrap();
        for v in all_words(8) {
            assert_eq!(id.act(&v).unwrap(), v);
            assert_eq!(ai.act(&v).unwrap(), a.act(&v).unwrap());
            assert_eq!(twice.act(&v).unwrap(), a.act(&v).unwrap());
        }
        assert_eq!(InitialAutomaton::identity(2).invert().unwrap(), InitialAutomaton::identity(2));
    }

    #[test]
    fn invertibility() {
        assert!(adding_machine().automaton().is_invertible());
        let m = MealyAutomaton::new(2, vec![0, 0], vec![0, 0]).unwrap();
        assert!(!m.is_invertible());
        let ia = InitialAutomaton::new(m, 0).unwrap();
        assert!(matches!(ia.invert(), Err(Error::NotInvertible { state: 0 })));
        // lamplighter: a = (b, a)σ, b = (b, a); states a=0, b=1
        let lamp = MealyAutomaton::new(2, vec![1, 0, 0, 1], vec![1, 0, 1, 0]).unwrap();
        assert!(lamp.is_invertible());
    }

    #[test]
    fn triviality() {
        let a = adding_machine();
        assert!(a.automaton().acts_trivially(0));
        assert!(!a.is_trivial());
        assert!(a.compose(&a.invert().unwrap()).unwrap().is_trivial());
    }

    #[test]
    fn minimization() {
        let a = adding_machine();
        let id = a.compose(&a.invert().unwrap()).unwrap();
        let (m, _) = id.automaton().minimize();
        assert_eq!(m.num_states(), 1);
        assert!(m.acts_trivially(0));
        let (m, _) = MealyAutomaton::identity(3).minimize();
        assert_eq!(m, MealyAutomaton::identity(3));
    }

    #[test]
    fn canonical_forms_identify_equal_transformations() {
        let a = adding_machine();
        let inv = a.invert().unwrap();
        // a·a·a⁻¹ == a
        let e = a.compose(&a).unwrap().compose(&inv).unwrap();
        assert_eq!(e.canonical(), a.canonical());
        assert_ne!(a.canonical(), inv.canonical());
        assert_eq!(a.canonical().num_states(), 2);
    }

    #[test]
    fn dot_export() {
        let dot = adding_machine().automaton().to_dot(None, None);
        assert!(dot.contains("s1 -> s0 [label=\"0|1\"];"));
        assert!(dot.contains("s1 -> s1 [label=\"1|0\"];"));
        assert_eq!(dot.lines().count(), 2 + 2 + 4);
    }
}
