//! Alphabets, finite words, eventually periodic infinite words and
//! subshifts of finite type.
//!
//! Letters are dense indices `0..d`. An [`Alphabet`] optionally carries a
//! display table so that, e.g., the Penrose alphabet prints as `abc` while
//! still being indexed `0, 1, 2` internally.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A single letter, an index into an [`Alphabet`].
pub type Letter = u8;

/// A finite word.
pub type Word = Vec<Letter>;

const DEFAULT_SYMBOLS: &str = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// Alphabet `{0, …, d-1}` with the default digit/letter display table.
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlphabet("alphabet must have at least one letter".into()));
        }
        if size > DEFAULT_SYMBOLS.len() {
            return Err(Error::InvalidAlphabet(format!(
                "alphabets larger than {} letters are not supported",
                DEFAULT_SYMBOLS.len()
            )));
        }
        Ok(Self { symbols: DEFAULT_SYMBOLS.chars().take(size).collect() })
    }

    /// Alphabet whose letter `i` is displayed as `symbols[i]`.
    pub fn with_symbols(symbols: &str) -> Result<Self> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must have at least one letter".into()));
        }
        let distinct: BTreeSet<char> = symbols.iter().copied().collect();
        if distinct.len() != symbols.len() || symbols.iter().any(|c| "()' ".contains(*c)) {
            return Err(Error::InvalidAlphabet(format!("bad symbol table {:?}", symbols)));
        }
        Ok(Self { symbols })
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize]
    }

    pub fn letter(&self, symbol: char) -> Option<Letter> {
        self.symbols.iter().position(|&c| c == symbol).map(|i| i as Letter)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size()).map(|i| i as Letter)
    }

    pub fn check(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&x| x as usize >= self.size()) {
            Some(&x) => Err(Error::AlphabetMismatch { letter: x as usize, size: self.size() }),
            None => Ok(()),
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.letter(c).ok_or_else(|| Error::Parse(format!("unknown letter {c:?} in {text:?}"))))
            .collect()
    }

    pub fn render(&self, word: &[Letter]) -> String {
        word.iter().map(|&x| self.symbol(x)).collect()
    }

    /// Parses `PRE(PERIOD)`; a bare word `w` is read as `w(0)` only when
    /// `allow_finite` is set.
    pub fn parse_omega(&self, text: &str) -> Result<OmegaWord> {
        let text = text.trim();
        let open = text
            .find('(')
            .ok_or_else(|| Error::Parse(format!("omega word {text:?} needs the form PRE(PERIOD)")))?;
        if !text.ends_with(')') {
            return Err(Error::Parse(format!("omega word {text:?} must end with ')'")));
        }
        let pre = self.parse_word(&text[..open])?;
        let period = self.parse_word(&text[open + 1..text.len() - 1])?;
        OmegaWord::new(pre, period)
    }

    pub fn render_omega(&self, w: &OmegaWord) -> String {
        format!("{}({})", self.render(w.preperiod()), self.render(w.period()))
    }

    /// All words of length `n` in lexicographic order (last letter fastest).
    pub fn words_of_length(&self, n: usize) -> impl Iterator<Item = Word> + '_ {
        let d = self.size();
        let total = d.checked_pow(n as u32).unwrap_or(usize::MAX);
        (0..total).map(move |idx| index_to_word(idx, d, n))
    }
}

/// Lexicographic index of a word of length `n` (first letter most significant).
pub fn word_index(word: &[Letter], d: usize) -> usize {
    word.iter().fold(0, |acc, &x| acc * d + x as usize)
}

pub fn index_to_word(mut idx: usize, d: usize, n: usize) -> Word {
    let mut w = vec![0; n];
    for slot in w.iter_mut().rev() {
        *slot = (idx % d) as Letter;
        idx /= d;
    }
    w
}

/// An eventually periodic one-sided infinite word `pre · period^∞`, always
/// stored in canonical form (minimal period, then minimal preperiod).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaWord {
    pre: Word,
    period: Word,
}

impl OmegaWord {
    pub fn new(pre: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("omega word period must be nonempty".into()));
        }
        Ok(Self::canonical(pre, period))
    }

    /// The constant word `x^∞`.
    pub fn constant(x: Letter) -> Self {
        Self { pre: Vec::new(), period: vec![x] }
    }

    pub fn periodic(period: Word) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    fn canonical(mut pre: Word, period: Word) -> Self {
        let p = period.len();
        let minimal = (1..=p)
            .filter(|k| p.is_multiple_of(*k))
            .find(|&k| (k..p).all(|i| period[i] == period[i - k]))
            .unwrap_or(p);
        let mut period: Word = period[..minimal].to_vec();
        while let Some(&last) = pre.last() {
            if last != *period.last().unwrap() {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Self { pre, period }
    }

    pub fn preperiod(&self) -> &[Letter] {
        &self.pre
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn letter(&self, i: usize) -> Letter {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, k: usize) -> Word {
        (0..k).map(|i| self.letter(i)).collect()
    }

    pub fn first(&self) -> Letter {
        self.letter(0)
    }

    /// Deletes the first letter.
    pub fn shift(&self) -> Self {
        if self.pre.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            Self { pre: Vec::new(), period }
        } else {
            Self::canonical(self.pre[1..].to_vec(), self.period.clone())
        }
    }

    /// `prefix · self`.
    pub fn prepend(&self, prefix: &[Letter]) -> Self {
        let mut pre = prefix.to_vec();
        pre.extend_from_slice(&self.pre);
        Self::canonical(pre, self.period.clone())
    }

    /// Largest letter index used, for alphabet checks.
    pub fn max_letter(&self) -> Letter {
        self.pre.iter().chain(self.period.iter()).copied().max().unwrap_or(0)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.pre.iter().chain(self.period.iter()).copied()
    }
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: String = self.pre.iter().map(|&x| DEFAULT_SYMBOLS.as_bytes()[x as usize] as char).collect();
        let p: String = self.period.iter().map(|&x| DEFAULT_SYMBOLS.as_bytes()[x as usize] as char).collect();
        write!(f, "{w}({p})")
    }
}

/// Equality of the infinite sequences denoted by two omega words.
pub fn omega_eq(a: &OmegaWord, b: &OmegaWord) -> bool {
    a == b
}

/// A subshift of finite type given by its admissible blocks of length `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    block_len: usize,
    admissible: BTreeSet<Word>,
}

impl Sft {
    pub fn new(alphabet: Alphabet, block_len: usize, admissible: impl IntoIterator<Item = Word>) -> Result<Self> {
        if block_len == 0 {
            return Err(Error::InvalidAlphabet("block length must be positive".into()));
        }
        let admissible: BTreeSet<Word> = admissible.into_iter().collect();
        for block in &admissible {
            if block.len() != block_len {
                return Err(Error::Parse(format!("admissible block {block:?} has length != {block_len}")));
            }
            alphabet.check(block)?;
        }
        Ok(Self { alphabet, block_len, admissible })
    }

    /// The full shift `X^ω`.
    pub fn full(alphabet: Alphabet) -> Self {
        let admissible = alphabet.letters().map(|x| vec![x]).collect();
        Self { alphabet, block_len: 1, admissible }
    }

    /// SFT of all words avoiding the given blocks, all of length `block_len`.
    pub fn forbidding(alphabet: Alphabet, block_len: usize, forbidden: &[Word]) -> Result<Self> {
        let forbidden: BTreeSet<&Word> = forbidden.iter().collect();
        let blocks: Vec<Word> = alphabet.words_of_length(block_len).filter(|w| !forbidden.contains(w)).collect();
        Self::new(alphabet, block_len, blocks)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn admits_block(&self, block: &[Letter]) -> bool {
        self.admissible.contains(block)
    }

    pub fn is_admissible(&self, w: &[Letter]) -> Result<bool> {
        self.alphabet.check(w)?;
        Ok(w.windows(self.block_len).all(|b| self.admissible.contains(b)))
    }

    /// Admissibility of `pre · period^∞`: every factor of length `m` occurs
    /// in `pre · period^k` for `k` large enough to wrap around once.
    pub fn is_admissible_omega(&self, w: &OmegaWord) -> Result<bool> {
        self.alphabet.check(w.preperiod())?;
        self.alphabet.check(w.period())?;
        let reps = self.block_len.div_ceil(w.period().len()) + 1;
        let mut unrolled = w.preperiod().to_vec();
        for _ in 0..reps {
            unrolled.extend_from_slice(w.period());
        }
        Ok(unrolled.windows(self.block_len).all(|b| self.admissible.contains(b)))
    }
}

/// A left-infinite eventually periodic word `…TTT·S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeftWord {
    pub tail: Word,
    pub suffix: Word,
}

impl LeftWord {
    pub fn new(tail: Word, suffix: Word) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::InvalidArgument("left tail must be nonempty".into()));
        }
        Ok(LeftWord { tail, suffix })
    }

    /// Parses `(T)S`.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        let body = text.strip_prefix('(').ok_or_else(|| Error::Parse(format!("left word {text:?} needs the form (TAIL)SUFFIX")))?;
        let close = body.find(')').ok_or_else(|| Error::Parse(format!("unclosed tail in {text:?}")))?;
        LeftWord::new(alphabet.parse_word(&body[..close])?, alphabet.parse_word(&body[close + 1..])?)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!("({}){}", alphabet.render(&self.tail), alphabet.render(&self.suffix))
    }

    /// The same sequence with the suffix lengthened by `k` letters taken
    /// from the tail.
    pub fn padded(&self, k: usize) -> LeftWord {
        let mut tail = self.tail.clone();
        let mut suffix = self.suffix.clone();
        for _ in 0..k {
            let last = *tail.last().unwrap();
            tail.rotate_right(1);
            suffix.insert(0, last);
        }
        LeftWord { tail, suffix }
    }

    /// `x_i`, counting from the right end starting at 1.
    pub fn letter(&self, i: usize) -> Letter {
        let m = self.suffix.len();
        if i <= m {
            self.suffix[m - i]
        } else {
            let p = self.tail.len();
            self.tail[p - 1 - (i - m - 1) % p]
        }
    }

    pub fn check(&self, d: usize) -> Result<()> {
        match self.tail.iter().chain(&self.suffix).find(|&&x| x as usize >= d) {
            Some(&x) => Err(Error::AlphabetMismatch { letter: x as usize, size: d }),
            None => Ok(()),
        }
    }
}
