//! Transformations of subshifts given by letter-rewriting rule tables: the
//! Fibonacci adding maps, the Penrose neighbour maps `L`, `M`, `S` and the
//! Apollonian inversions.
//!
//! A rule `x[y] -> z N` applies to words starting with `xy`: it consumes `x`,
//! writes `z` and continues with map `N` on the rest (`=` copies the rest).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, OmegaWord, Sft, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Continuation {
    /// The rest of the word is copied.
    Copy,
    Map(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub consume: Word,
    pub lookahead: Word,
    pub output: Word,
    pub next: Continuation,
}

impl Rule {
    fn pattern_len(&self) -> usize {
        self.consume.len() + self.lookahead.len()
    }

    fn matches(&self, w: &OmegaWord, pos: usize) -> bool {
        self.consume.iter().chain(&self.lookahead).enumerate().all(|(k, &x)| w.letter(pos + k) == x)
    }

    fn matches_block(&self, block: &[Letter]) -> bool {
        self.consume.iter().chain(&self.lookahead).zip(block).all(|(a, b)| a == b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDef {
    pub name: String,
    pub rules: Vec<Rule>,
}

/// Something that transforms admissible omega words by named maps.
pub trait OmegaTransform {
    fn sft(&self) -> &Sft;
    fn map_names(&self) -> Vec<String>;
    fn apply(&self, map: &str, w: &OmegaWord) -> Result<OmegaWord>;

    fn alphabet(&self) -> &Alphabet {
        self.sft().alphabet()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTable {
    name: String,
    sft: Sft,
    maps: Vec<MapDef>,
}

impl RuleTable {
    /// Validates the rules: each consumes and emits at least one letter,
    /// and every admissible block starting with a letter of the map's domain
    /// matches exactly one rule.
    pub fn new(name: &str, sft: Sft, maps: Vec<MapDef>) -> Result<Self> {
        let table = RuleTable { name: name.to_string(), sft, maps };
        for m in &table.maps {
            for r in &m.rules {
                if r.consume.is_empty() || r.output.is_empty() {
                    return Err(Error::Parse(format!("rule of {} must consume and emit letters", m.name)));
                }
                for w in [&r.consume, &r.lookahead, &r.output] {
                    table.alphabet().check(w)?;
                }
                if let Continuation::Map(k) = r.next {
                    if k >= table.maps.len() {
                        return Err(Error::Parse(format!("rule of {} continues with unknown map {k}", m.name)));
                    }
                }
            }
            let len = m.rules.iter().map(Rule::pattern_len).max().unwrap_or(1).max(table.sft.block_len());
            let domain: BTreeSet<Letter> = m.rules.iter().map(|r| r.consume[0]).collect();
            for block in table.alphabet().words_of_length(len) {
                if !domain.contains(&block[0]) || !table.sft.is_admissible(&block)? {
                    continue;
                }
                let hits = m.rules.iter().filter(|r| r.matches_block(&block)).count();
                if hits != 1 {
                    return Err(Error::Parse(format!(
                        "map {}: block {} matches {hits} rules",
                        m.name,
                        table.alphabet().render(&block)
                    )));
                }
            }
        }
        Ok(table)
    }

    /// Reads the dump format, one `MAP: PATTERN -> OUTPUT CONT` per line.
    pub fn parse(name: &str, sft: Sft, text: &str) -> Result<Self> {
        let alphabet = sft.alphabet().clone();
        let mut names: Vec<String> = Vec::new();
        let mut raw: Vec<(String, Word, Word, Word, String)> = Vec::new();
        for line in text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty()) {
            let bad = || Error::Parse(format!("bad rule line {line:?}"));
            let (map, rest) = line.split_once(':').ok_or_else(bad)?;
            let (pattern, rhs) = rest.split_once("->").ok_or_else(bad)?;
            let pattern = pattern.trim();
            let (consume, lookahead) = match pattern.split_once('[') {
                Some((c, l)) => (c, l.strip_suffix(']').ok_or_else(bad)?),
                None => (pattern, ""),
            };
            let mut rhs = rhs.split_whitespace();
            let output = rhs.next().ok_or_else(bad)?;
            let cont = rhs.next().ok_or_else(bad)?;
            if rhs.next().is_some() {
                return Err(bad());
            }
            let map = map.trim().to_string();
            if !names.contains(&map) {
                names.push(map.clone());
            }
            raw.push((
                map,
                alphabet.parse_word(consume)?,
                alphabet.parse_word(lookahead)?,
                alphabet.parse_word(output)?,
                cont.to_string(),
            ));
        }
        let mut maps: Vec<MapDef> = names.iter().map(|n| MapDef { name: n.clone(), rules: Vec::new() }).collect();
        for (map, consume, lookahead, output, cont) in raw {
            let next = if cont == "=" {
                Continuation::Copy
            } else {
                Continuation::Map(
                    names.iter().position(|n| *n == cont).ok_or_else(|| Error::Parse(format!("unknown map {cont}")))?,
                )
            };
            let k = names.iter().position(|n| *n == map).unwrap();
            maps[k].rules.push(Rule { consume, lookahead, output, next });
        }
        Self::new(name, sft, maps)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn maps(&self) -> &[MapDef] {
        &self.maps
    }

    fn map_index(&self, name: &str) -> Result<usize> {
        self.maps
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("table {} has no map {name:?}", self.name)))
    }

    /// Runs the rules from `map`, detecting the cycle of (map, position in
    /// the period) that makes the output eventually periodic.
    pub fn apply_map(&self, map: &str, w: &OmegaWord) -> Result<OmegaWord> {
        if !self.sft.is_admissible_omega(w)? {
            return Err(Error::Inadmissible(self.alphabet().render_omega(w)));
        }
        let pre = w.preperiod().len();
        let p = w.period().len();
        let mut current = self.map_index(map)?;
        let mut pos = 0;
        let mut out: Word = Vec::new();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        loop {
            if pos >= pre {
                let key = (current, pre + (pos - pre) % p);
                if let Some(&start) = seen.get(&key) {
                    return OmegaWord::new(out[..start].to_vec(), out[start..].to_vec());
                }
                seen.insert(key, out.len());
            }
            let m = &self.maps[current];
            let rule = m.rules.iter().find(|r| r.matches(w, pos)).ok_or_else(|| Error::OutOfDomain {
                map: m.name.clone(),
                word: self.alphabet().render_omega(&suffix_from(w, pos)),
            })?;
            out.extend_from_slice(&rule.output);
            pos += rule.consume.len();
            match rule.next {
                Continuation::Copy => return Ok(suffix_from(w, pos).prepend(&out)),
                Continuation::Map(k) => current = k,
            }
        }
    }

    /// One rule per line in the format read by [`RuleTable::parse`].
    pub fn dump(&self) -> String {
        let a = self.alphabet();
        let mut s = String::new();
        for m in &self.maps {
            for r in &m.rules {
                let look = if r.lookahead.is_empty() { String::new() } else { format!("[{}]", a.render(&r.lookahead)) };
                let cont = match r.next {
                    Continuation::Copy => "=".to_string(),
                    Continuation::Map(k) => self.maps[k].name.clone(),
                };
                s += &format!("{}: {}{} -> {} {}\n", m.name, a.render(&r.consume), look, a.render(&r.output), cont);
            }
        }
        s
    }
}

impl OmegaTransform for RuleTable {
    fn sft(&self) -> &Sft {
        &self.sft
    }

    fn map_names(&self) -> Vec<String> {
        self.maps.iter().map(|m| m.name.clone()).collect()
    }

    fn apply(&self, map: &str, w: &OmegaWord) -> Result<OmegaWord> {
        self.apply_map(map, w)
    }
}

fn suffix_from(w: &OmegaWord, pos: usize) -> OmegaWord {
    let pre = w.preperiod();
    if pos < pre.len() {
        OmegaWord::new(pre[pos..].to_vec(), w.period().to_vec()).unwrap()
    } else {
        let mut period = w.period().to_vec();
        let k = (pos - pre.len()) % period.len();
        period.rotate_left(k);
        OmegaWord::periodic(period).unwrap()
    }
}

pub const FIBONACCI_RULES: &str = "\
a: 0[0] -> 1 =
a: 0[1] -> 0 b
b: 1 -> 0 a
";

pub const PENROSE_RULES: &str = "\
S: a -> c =
S: b -> b M
S: c -> a =
M: a -> a L
M: b -> c =
M: c[a] -> c M
M: c[b] -> b =
M: c[c] -> b =
L: a[a] -> b S
L: a[b] -> a M
L: a[c] -> a M
L: b[b] -> b S
L: b[c] -> a S
L: c -> c L
";

/// Binary words without `11`.
pub fn fibonacci_shift() -> Sft {
    Sft::forbidding(Alphabet::new(2).unwrap(), 2, &[vec![1, 1]]).unwrap()
}

/// Words over `{a, b, c}` without `ba`.
pub fn penrose_shift() -> Sft {
    Sft::forbidding(Alphabet::with_symbols("abc").unwrap(), 2, &[vec![1, 0]]).unwrap()
}

pub fn fibonacci_table() -> RuleTable {
    RuleTable::parse("fibonacci", fibonacci_shift(), FIBONACCI_RULES).unwrap()
}

pub fn penrose_table() -> RuleTable {
    RuleTable::parse("penrose", penrose_shift(), PENROSE_RULES).unwrap()
}

/// Inversions `γ_1 … γ_4` of the Apollonian net on codes without equal
/// consecutive letters; letter `k` is the symbol `k+1`.
#[derive(Debug, Clone)]
pub struct Apollonian {
    sft: Sft,
}

impl Default for Apollonian {
    fn default() -> Self {
        Self::new()
    }
}

impl Apollonian {
    pub fn new() -> Self {
        let alphabet = Alphabet::with_symbols("1234").unwrap();
        let forbidden: Vec<Word> = (0..4).map(|x| vec![x, x]).collect();
        Apollonian { sft: Sft::forbidding(alphabet, 2, &forbidden).unwrap() }
    }

    /// `γ_i` strips a leading `i` and prepends `i` otherwise.
    pub fn apply_gamma(&self, i: Letter, w: &OmegaWord) -> Result<OmegaWord> {
        self.sft.alphabet().check(&[i])?;
        if !self.sft.is_admissible_omega(w)? {
            return Err(Error::Inadmissible(self.sft.alphabet().render_omega(w)));
        }
        Ok(if w.first() == i { w.shift() } else { w.prepend(&[i]) })
    }

    pub fn dump(&self) -> String {
        (1..=4).map(|i| format!("g{i}: {i}w -> w\ng{i}: xw -> {i}xw  (x != {i})\n")).collect()
    }
}

impl OmegaTransform for Apollonian {
    fn sft(&self) -> &Sft {
        &self.sft
    }

    fn map_names(&self) -> Vec<String> {
        (1..=4).map(|i| format!("g{i}")).collect()
    }

    fn apply(&self, map: &str, w: &OmegaWord) -> Result<OmegaWord> {
        let i = map
            .strip_prefix('g')
            .unwrap_or(map)
            .parse::<u8>()
            .ok()
            .filter(|i| (1..=4).contains(i))
            .ok_or_else(|| Error::InvalidArgument(format!("no Apollonian map {map:?}; use g1..g4")))?;
        self.apply_gamma(i - 1, w)
    }
}

/// `γ_i` with `i` in `0..4`.
pub fn apollonian_apply(i: Letter, w: &OmegaWord) -> Result<OmegaWord> {
    Apollonian::new().apply_gamma(i, w)
}

/// All admissible purely periodic words with period at most `max_period`.
pub fn tail_basis(sft: &Sft, max_period: usize) -> Vec<OmegaWord> {
    let mut tails = BTreeSet::new();
    for p in 1..=max_period {
        for period in sft.alphabet().words_of_length(p) {
            let w = OmegaWord::periodic(period).unwrap();
            if sft.is_admissible_omega(&w).unwrap() {
                tails.insert(w);
            }
        }
    }
    tails.into_iter().collect()
}

/// Admissible words of length `n`, built by extending admissible prefixes.
pub fn admissible_words(sft: &Sft, n: usize) -> Vec<Word> {
    let mut words = vec![Vec::new()];
    for _ in 0..n {
        let mut longer = Vec::new();
        for w in &words {
            for x in sft.alphabet().letters() {
                let mut v = w.clone();
                v.push(x);
                let start = v.len().saturating_sub(sft.block_len());
                if v.len() < sft.block_len() || sft.admits_block(&v[start..]) {
                    longer.push(v);
                }
            }
        }
        words = longer;
    }
    words
}

/// `map` applied twice fixes `u · t` for every admissible `u` of length
/// `depth` and every admissible tail `t` of period at most 3 such that
/// `u · t` is admissible and lies in the domain of `map`.
pub fn involution_check(table: &dyn OmegaTransform, map: &str, depth: usize) -> Result<bool> {
    let tails = tail_basis(table.sft(), 3);
    for u in admissible_words(table.sft(), depth) {
        for t in &tails {
            let w = t.prepend(&u);
            if !table.sft().is_admissible_omega(&w)? {
                continue;
            }
            let once = match table.apply(map, &w) {
                Ok(v) => v,
                Err(Error::OutOfDomain { .. }) => continue,
                Err(e) => return Err(e),
            };
            match table.apply(map, &once) {
                Ok(twice) if twice == w => {}
                Ok(_) | Err(Error::OutOfDomain { .. }) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(true)
}

/// A random admissible omega word with the given preperiod length and a
/// period of length `1..=max_period`.
pub fn random_admissible<R: Rng>(sft: &Sft, pre_len: usize, max_period: usize, rng: &mut R) -> OmegaWord {
    let d = sft.alphabet().size() as Letter;
    loop {
        let p = rng.gen_range(1..=max_period.max(1));
        let pre: Word = (0..pre_len).map(|_| rng.gen_range(0..d)).collect();
        let period: Word = (0..p).map(|_| rng.gen_range(0..d)).collect();
        let w = OmegaWord::new(pre, period).unwrap();
        if sft.is_admissible_omega(&w).unwrap() {
            return w;
        }
    }
}

/// Fibonacci numeration `m = Σ a_i u_i` with `u_1 = 1, u_2 = 2, u_{i+2} = u_i + u_{i+1}`,
/// written least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeckendorfCodec {
    weights: Vec<u64>,
}

impl ZeckendorfCodec {
    pub fn new(length: usize) -> Result<Self> {
        let mut weights: Vec<u64> = Vec::with_capacity(length);
        for i in 0..length {
            let u = match i {
                0 => 1,
                1 => 2,
                _ => weights[i - 1]
                    .checked_add(weights[i - 2])
                    .ok_or_else(|| Error::InvalidArgument(format!("length {length} overflows u64")))?,
            };
            weights.push(u);
        }
        Ok(ZeckendorfCodec { weights })
    }

    pub fn length(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Greedy decomposition, padded with zeros to the codec length.
    pub fn encode(&self, mut m: u64) -> Result<Word> {
        let mut w = vec![0; self.weights.len()];
        for i in (0..self.weights.len()).rev() {
            if self.weights[i] <= m {
                w[i] = 1;
                m -= self.weights[i];
            }
        }
        if m > 0 {
            return Err(Error::InvalidArgument(format!("value does not fit in {} Fibonacci digits", self.length())));
        }
        Ok(w)
    }

    pub fn decode(&self, w: &[Letter]) -> Result<u64> {
        if w.len() > self.weights.len() {
            return Err(Error::InvalidArgument(format!("word longer than {} digits", self.length())));
        }
        Ok(w.iter().zip(&self.weights).filter(|(&x, _)| x == 1).map(|(_, &u)| u).sum())
    }
}

impl fmt::Display for ZeckendorfCodec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fibonacci codec with {} digits", self.length())
    }
}

/// Adds one to `m` by applying `a + b` to its Fibonacci representation
/// followed by zeros.
pub fn fibonacci_successor(m: u64, length: usize) -> Result<u64> {
    fibonacci_successor_with(&fibonacci_table(), &ZeckendorfCodec::new(length)?, m)
}

pub fn fibonacci_successor_with(table: &RuleTable, codec: &ZeckendorfCodec, m: u64) -> Result<u64> {
    let w = OmegaWord::new(codec.encode(m)?, vec![0])?;
    let map = if w.first() == 0 { "a" } else { "b" };
    let image = table.apply_map(map, &w)?;
    if image.period() != [0] || image.preperiod().len() > codec.length() {
        return Err(Error::InvalidArgument(format!("{m}+1 does not fit in {} Fibonacci digits", codec.length())));
    }
    codec.decode(image.preperiod())
}

/// Families of Penrose codes fixed by one of the maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricCode {
    /// `v_0 c^{n_1} v_1 c^{n_2} v_2 …` with `v_0 ∈ {ca, a}`, fixed by `M`.
    M,
    /// `c^{n_1} v_1 c^{n_2} v_2 …`, fixed by `L`.
    L,
    /// `bca c^{n_1} v_1 c^{n_2} v_2 …`, fixed by `S`: `(bw)^S = b·w^M` forces
    /// `w` to be fixed by `M`, and those words start with `ca` or `a`.
    S,
}

/// A code of the given family whose blocks `c^{n_i} v_i` are drawn at random,
/// the last `periodic` of them repeating forever; `v_i ∈ {aca, bbca}`.
pub fn symmetric_code<R: Rng>(kind: SymmetricCode, blocks: usize, periodic: usize, rng: &mut R) -> OmegaWord {
    let a = penrose_shift().alphabet().clone();
    let block = |rng: &mut R| -> Word {
        let mut w = vec![2; rng.gen_range(1..=3)];
        w.extend(a.parse_word(if rng.gen_bool(0.5) { "aca" } else { "bbca" }).unwrap());
        w
    };
    let mut pre = match kind {
        SymmetricCode::M => a.parse_word(if rng.gen_bool(0.5) { "ca" } else { "a" }).unwrap(),
        SymmetricCode::L => Vec::new(),
        SymmetricCode::S => a.parse_word("bca").unwrap(),
    };
    for _ in 0..blocks {
        pre.extend(block(rng));
    }
    let mut period = Vec::new();
    for _ in 0..periodic.max(1) {
        period.extend(block(rng));
    }
    OmegaWord::new(pre, period).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fib(s: &str) -> OmegaWord {
        Alphabet::new(2).unwrap().parse_omega(s).unwrap()
    }

    fn pen(s: &str) -> OmegaWord {
        penrose_shift().alphabet().parse_omega(s).unwrap()
    }

    fn apo(s: &str) -> OmegaWord {
        Apollonian::new().alphabet().parse_omega(s).unwrap()
    }

    #[test]
    fn fibonacci_rules() {
        let t = fibonacci_table();
        assert_eq!(t.apply_map("a", &fib("0100(0)")).unwrap(), fib("0010(0)"));
        assert_eq!(t.apply_map("a", &fib("0100(10)")).unwrap(), fib("0010(10)"));
        assert_eq!(t.apply_map("a", &fib("(01)")).unwrap(), fib("(0)"));
        assert_eq!(t.apply_map("b", &fib("(10)")).unwrap(), fib("(0)"));
        assert_eq!(t.apply_map("a", &fib("(0)")).unwrap(), fib("1(0)"));
        assert!(matches!(t.apply_map("a", &fib("1(0)")), Err(Error::OutOfDomain { .. })));
        assert!(matches!(t.apply_map("a", &fib("011(0)")), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn penrose_rules() {
        let t = penrose_table();
        assert_eq!(t.apply_map("M", &pen("(ca)")).unwrap(), pen("(ca)"));
        assert_eq!(t.apply_map("L", &pen("(ca)")).unwrap(), pen("(ca)"));
        assert_eq!(t.apply_map("S", &pen("a(c)")).unwrap(), pen("c(c)"));
        assert_eq!(t.apply_map("M", &pen("cb(c)")).unwrap(), pen("bb(c)"));
        assert_eq!(t.dump(), PENROSE_RULES);
        assert_eq!(RuleTable::parse("penrose", penrose_shift(), &t.dump()).unwrap(), t);
    }

    #[test]
    fn coverage_audit_rejects_gaps_and_overlaps() {
        assert!(RuleTable::parse("x", penrose_shift(), "M: a -> a =\nM: c[a] -> c =\nM: c[b] -> b =\n").is_err());
        assert!(RuleTable::parse("x", penrose_shift(), "M: a -> a =\nM: a[a] -> c =\n").is_err());
    }

    #[test]
    fn involutions() {
        let t = penrose_table();
        for m in ["S", "M", "L"] {
            assert!(involution_check(&t, m, 6).unwrap(), "{m}");
        }
        assert!(involution_check(&Apollonian::new(), "g2", 6).unwrap());
        assert!(!involution_check(&fibonacci_table(), "a", 4).unwrap());
    }

    #[test]
    fn apollonian() {
        assert_eq!(apollonian_apply(0, &apo("12(34)")).unwrap(), apo("2(34)"));
        assert_eq!(apollonian_apply(0, &apo("2(34)")).unwrap(), apo("12(34)"));
        assert!(matches!(apollonian_apply(0, &apo("11(34)")), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn zeckendorf() {
        let c = ZeckendorfCodec::new(8).unwrap();
        assert_eq!(c.encode(4).unwrap(), vec![1, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(c.encode(5).unwrap(), vec![0, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(fibonacci_successor(0, 8).unwrap(), 1);
        assert_eq!(fibonacci_successor(1, 8).unwrap(), 2);
        assert_eq!(fibonacci_successor(4, 8).unwrap(), 5);
        let top = c.weights().iter().sum::<u64>();
        assert!(fibonacci_successor(top, 8).is_err());
    }

    #[test]
    fn symmetric_codes_are_fixed() {
        let t = penrose_table();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (kind, map) in [(SymmetricCode::M, "M"), (SymmetricCode::L, "L"), (SymmetricCode::S, "S")] {
            for _ in 0..20 {
                let w = symmetric_code(kind, 3, 2, &mut rng);
                assert_eq!(t.apply_map(map, &w).unwrap(), w, "{map} {}", t.alphabet().render_omega(&w));
            }
        }
    }
}
