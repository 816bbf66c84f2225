//! Self-similar actions of `ℤⁿ` given by a rational contraction matrix `A`
//! and a digit set `R`: digit automata, fraction sets and tile rasters.
//!
//! The vector `g` acts on `x_1 x_2 …` by writing the unique digit `y_1` with
//! `A(r_{x_1} + g − r_{y_1}) ∈ ℤⁿ` and continuing with that vector.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mealy::{InitialAutomaton, MealyAutomaton};
use crate::words::{LeftWord, Letter};

pub type Rational = BigRational;
pub type IntVector = Vec<i64>;
pub type RatVector = Vec<Rational>;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Square matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDigits("matrix must be square and nonempty".into()));
        }
        Ok(RationalMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn parse(rows: &[Vec<String>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|s| parse_rational(s)).collect()).collect::<Result<_>>()?)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        RationalMatrix { n, entries }
    }

    /// `c · I`.
    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = Self::identity(n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        RationalMatrix { n, entries }
    }

    pub fn pow(&self, k: usize) -> RationalMatrix {
        (0..k).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn apply(&self, v: &[Rational]) -> RatVector {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum()).collect()
    }

    pub fn apply_int(&self, v: &[i64]) -> RatVector {
        self.apply(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    pub fn sub(&self, other: &RationalMatrix) -> RationalMatrix {
        RationalMatrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> Rational {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).abs()).sum::<Rational>())
            .max()
            .unwrap()
    }

    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else { return Rational::zero() };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det *= &pivot;
            for i in k + 1..n {
                let f = &a[i * n + k] / &pivot;
                if !f.is_zero() {
                    for j in k..n {
                        let t = &f * &a[k * n + j];
                        a[i * n + j] -= t;
                    }
                }
            }
        }
        det
    }

    /// Solves `self · x = b` exactly.
    pub fn solve(&self, b: &[Rational]) -> Result<RatVector> {
        let n = self.n;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.push(b[i].clone());
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::Singular)?;
            a.swap(k, p);
            let pivot = a[k][k].clone();
            for v in a[k].iter_mut() {
                *v /= &pivot;
            }
            for i in 0..n {
                if i != k && !a[i][k].is_zero() {
                    let f = a[i][k].clone();
                    for j in k..=n {
                        let t = &f * &a[k][j];
                        a[i][j] -= t;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|row| row[n].clone()).collect())
    }

    fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

fn integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

fn to_int(v: &[Rational]) -> Result<IntVector> {
    v.iter()
        .map(|x| x.to_integer().to_i64().ok_or_else(|| Error::InvalidDigits("state vector overflows i64".into())))
        .collect()
}

pub const GELFAND_ITERATIONS: usize = 40;
const DIVERGENCE_BOUND: f64 = 1e100;

/// Whether the spectral radius of `A` is below one, which makes every
/// digit automaton finite.
///
/// Exact for `n ≤ 2` (for `n = 2` both roots of `λ² − tλ + D` lie in the unit
/// disk iff `|D| < 1` and `|t| < 1 + D`); for larger `n` the norms of
/// `A^{2^k}` are tracked until they fall below one or diverge.
pub fn is_finite_state(a: &RationalMatrix) -> Result<bool> {
    if a.determinant().is_zero() {
        return Err(Error::Singular);
    }
    match a.dim() {
        1 => Ok(a.get(0, 0).abs() < Rational::one()),
        2 => {
            let t = a.get(0, 0) + a.get(1, 1);
            let d = a.determinant();
            Ok(d.abs() < Rational::one() && t.abs() < Rational::one() + d)
        }
        n => {
            let mut m = a.to_f64();
            for _ in 0..=GELFAND_ITERATIONS {
                let norm = (0..n).map(|i| (0..n).map(|j| m[i * n + j].abs()).sum::<f64>()).fold(0.0, f64::max);
                if norm < 1.0 {
                    return Ok(true);
                }
                if norm > DIVERGENCE_BOUND || !norm.is_finite() {
                    return Ok(false);
                }
                let mut sq = vec![0.0; n * n];
                for i in 0..n {
                    for k in 0..n {
                        for j in 0..n {
                            sq[i * n + j] += m[i * n + k] * m[k * n + j];
                        }
                    }
                }
                m = sq;
            }
            Err(Error::Indeterminate { iterations: GELFAND_ITERATIONS })
        }
    }
}

/// Matrix `A` of the virtual endomorphism with digit vectors `r_0 = 0, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSystem {
    a: RationalMatrix,
    digits: Vec<IntVector>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DigitSystemJson {
    matrix: Vec<Vec<String>>,
    digits: Vec<IntVector>,
}

impl DigitSystem {
    /// Checks that the digits are distinct cosets of `{v : Av ∈ ℤⁿ}` and that
    /// there are `1/|det A|` of them, starting with the zero vector.
    pub fn new(a: RationalMatrix, digits: Vec<IntVector>) -> Result<Self> {
        let ds = Self::unchecked(a, digits)?;
        let n = ds.dim();
        if ds.digits[0].iter().any(|&x| x != 0) {
            return Err(Error::InvalidDigits("r_0 must be the zero vector".into()));
        }
        for i in 0..ds.digits.len() {
            for j in 0..i {
                let diff: Vec<i64> = (0..n).map(|k| ds.digits[i][k] - ds.digits[j][k]).collect();
                if integral(&ds.a.apply_int(&diff)) {
                    return Err(Error::InvalidDigits(format!("digits {j} and {i} lie in the same coset")));
                }
            }
        }
        let det = ds.a.determinant();
        if det.is_zero() || (Rational::one() / det.abs()) != rat(ds.digits.len() as i64) {
            return Err(Error::InvalidDigits(format!(
                "{} digits do not match the index 1/|det A| = {}",
                ds.digits.len(),
                if det.is_zero() { "∞".to_string() } else { (Rational::one() / det.abs()).to_string() }
            )));
        }
        Ok(ds)
    }

    /// Only checks dimensions; used for degenerate pictures such as a
    /// single digit.
    pub fn unchecked(a: RationalMatrix, digits: Vec<IntVector>) -> Result<Self> {
        if digits.is_empty() || digits.iter().any(|r| r.len() != a.dim()) {
            return Err(Error::InvalidDigits("digits must be nonempty vectors of the matrix dimension".into()));
        }
        if digits.len() > 62 {
            return Err(Error::InvalidDigits("at most 62 digits are supported".into()));
        }
        Ok(DigitSystem { a, digits })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DigitSystemJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(RationalMatrix::parse(&raw.matrix)?, raw.digits)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DigitSystemJson { matrix: self.a.rows(), digits: self.digits.clone() }).unwrap()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn digits(&self) -> &[IntVector] {
        &self.digits
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn degree(&self) -> usize {
        self.digits.len()
    }

    /// The output digit and next state for state `g` reading digit `i`.
    pub fn step(&self, g: &[i64], i: Letter) -> Result<(Letter, IntVector)> {
        let n = self.dim();
        let mut found = None;
        for (j, rj) in self.digits.iter().enumerate() {
            let v: Vec<i64> = (0..n).map(|k| self.digits[i as usize][k] + g[k] - rj[k]).collect();
            let img = self.a.apply_int(&v);
            if integral(&img) {
                if found.is_some() {
                    return Err(Error::InvalidDigits(format!("two output digits for input {i} in state {g:?}")));
                }
                found = Some((j as Letter, to_int(&img)?));
            }
        }
        found.ok_or_else(|| Error::InvalidDigits(format!("no output digit for input {i} in state {g:?}")))
    }

    fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|&&x| x as usize >= self.degree()) {
            Some(&x) => Err(Error::AlphabetMismatch { letter: x as usize, size: self.degree() }),
            None => Ok(()),
        }
    }
}

/// The automaton of `g` with its states labelled by vectors.
#[derive(Debug, Clone)]
pub struct DigitAutomaton {
    pub automaton: InitialAutomaton,
    pub states: Vec<IntVector>,
}

/// Breadth-first over the vectors reachable from `g`; `Exceeded` beyond `cap`.
pub fn digit_automaton(ds: &DigitSystem, g: &[i64], cap: usize) -> Result<DigitAutomaton> {
    if g.len() != ds.dim() {
        return Err(Error::InvalidArgument(format!("vector of length {} in dimension {}", g.len(), ds.dim())));
    }
    let d = ds.degree();
    let mut states = vec![g.to_vec()];
    let mut index: HashMap<IntVector, usize> = HashMap::from([(g.to_vec(), 0)]);
    let mut output = Vec::new();
    let mut next = Vec::new();
    let mut k = 0;
    while k < states.len() {
        for i in 0..d as Letter {
            let (j, h) = ds.step(&states[k], i)?;
            output.push(j);
            let id = match index.get(&h) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(Error::Exceeded { cap });
                    }
                    index.insert(h.clone(), states.len());
                    states.push(h);
                    states.len() - 1
                }
            };
            next.push(id);
        }
        k += 1;
    }
    let automaton = InitialAutomaton::new(MealyAutomaton::new(d, output, next)?, 0)?;
    Ok(DigitAutomaton { automaton, states })
}

/// `Σ_{k=1}^{|w|} A^k r_{w_k}`.
pub fn fraction_point(ds: &DigitSystem, w: &[Letter]) -> Result<RatVector> {
    ds.check_word(w)?;
    let mut power = ds.a.clone();
    let mut sum = vec![Rational::zero(); ds.dim()];
    for &x in w {
        for (s, t) in sum.iter_mut().zip(power.apply_int(&ds.digits[x as usize])) {
            *s += t;
        }
        power = power.mul(&ds.a);
    }
    Ok(sum)
}

/// Exact value of `Σ_{k≥1} A^k r_{x_k}` for `…x_2 x_1`, summing the tail
/// geometrically.
pub fn left_word_value(ds: &DigitSystem, w: &LeftWord) -> Result<RatVector> {
    w.check(ds.degree())?;
    let n = ds.dim();
    let m = w.suffix.len();
    let p = w.tail.len();
    let mut sum = vec![Rational::zero(); n];
    let mut power = ds.a.clone();
    for k in 1..=m {
        for (s, t) in sum.iter_mut().zip(power.apply_int(&ds.digits[w.letter(k) as usize])) {
            *s += t;
        }
        power = power.mul(&ds.a);
    }
    let mut period_sum = vec![Rational::zero(); n];
    let mut pj = ds.a.clone();
    for j in 1..=p {
        for (s, t) in period_sum.iter_mut().zip(pj.apply_int(&ds.digits[w.letter(m + j) as usize])) {
            *s += t;
        }
        pj = pj.mul(&ds.a);
    }
    let geom = RationalMatrix::identity(n).sub(&ds.a.pow(p)).solve(&period_sum)?;
    let tail = ds.a.pow(m).apply(&geom);
    Ok(sum.into_iter().zip(tail).map(|(a, b)| a + b).collect())
}

/// Two left-infinite words are equivalent iff their values differ by an
/// integer vector.
pub fn abelian_asymptotic_eq(ds: &DigitSystem, u: &LeftWord, v: &LeftWord) -> Result<bool> {
    let a = left_word_value(ds, u)?;
    let b = left_word_value(ds, v)?;
    Ok(a.iter().zip(&b).all(|(x, y)| (x - y).is_integer()))
}

/// Depth-limited necessary condition for faithfulness: each basis vector
/// moves some word of length `depth`.
pub fn basis_acts_nontrivially(ds: &DigitSystem, depth: usize, cap: usize) -> Result<bool> {
    let n = ds.dim();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        let a = digit_automaton(ds, &e, cap)?.automaton;
        // the first letter where it differs from the identity is at most
        // the distance to a moving state
        let m = a.automaton();
        let mut seen = vec![usize::MAX; m.num_states()];
        seen[a.initial()] = 0;
        let mut queue = std::collections::VecDeque::from([a.initial()]);
        let mut moves = false;
        while let Some(q) = queue.pop_front() {
            if seen[q] >= depth {
                continue;
            }
            if m.output_row(q).iter().enumerate().any(|(x, &y)| x != y as usize) {
                moves = true;
                break;
            }
            for &r in m.next_row(q) {
                if seen[r] == usize::MAX {
                    seen[r] = seen[q] + 1;
                    queue.push_back(r);
                }
            }
        }
        if !moves {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Radius `ρ` in the max-norm with the fraction set inside `[−ρ, ρ]ⁿ`:
/// for `m` with `‖A^m‖ < 1`, `ρ = Σ_{j≤m}‖A^j‖ · max‖r‖ / (1 − ‖A^m‖)`.
pub fn tile_radius(ds: &DigitSystem) -> Result<Rational> {
    let max_digit = ds.digits.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let mut power = ds.a.clone();
    let mut sum = Rational::zero();
    for _ in 0..64 {
        let norm = power.norm_inf();
        sum += &norm;
        if norm < Rational::one() {
            return Ok(sum * rat(max_digit as i64) / (Rational::one() - norm));
        }
        power = power.mul(&ds.a);
    }
    Err(Error::InvalidDigits("no power of A below norm one; the fraction set is unbounded".into()))
}

/// A square bitmap over `[−ρ, ρ]²`; row 0 is the top edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileRaster {
    pub radius: Rational,
    pub resolution: usize,
    pub depth: usize,
    /// Deepest level reached while refining pieces down to pixel size.
    pub refined_depth: usize,
    pixels: Vec<bool>,
}

impl TileRaster {
    pub fn filled(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.resolution + col]
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.resolution, self.resolution).into_bytes();
        out.extend(self.pixels.iter().map(|&p| if p { 255u8 } else { 0 }));
        out
    }
}

/// The fraction set as a raster (dimension 2) or as an interval (dimension 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TileImage {
    Raster(TileRaster),
    /// Smallest and largest depth-`k` fraction point.
    Interval(Rational, Rational),
}

pub const MAX_REFINEMENT: usize = 8;
pub const POINT_BUDGET: u64 = 1 << 24;

/// Draws the fraction set. Every depth-`depth` piece `p_w + A^k 𝒯` is split
/// further until its bounding box is below half a pixel, so the picture
/// depends on `depth` only through pieces that are already pixel-sized.
pub fn render_tile(ds: &DigitSystem, depth: usize, resolution: usize) -> Result<TileImage> {
    let d = ds.degree() as u64;
    if d.checked_pow(depth as u32).is_none_or(|c| c > POINT_BUDGET) {
        return Err(Error::InvalidArgument(format!("{d}^{depth} fraction points exceed the budget of {POINT_BUDGET}")));
    }
    match ds.dim() {
        1 => {
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            let total = d.pow(depth as u32) as usize;
            for idx in 0..total {
                let w = crate::words::index_to_word(idx, d as usize, depth);
                let x = fraction_point(ds, &w)?.remove(0);
                if lo.as_ref().is_none_or(|l| x < *l) {
                    lo = Some(x.clone());
                }
                if hi.as_ref().is_none_or(|h| x > *h) {
                    hi = Some(x);
                }
            }
            Ok(TileImage::Interval(lo.unwrap(), hi.unwrap()))
        }
        2 => render_plane(ds, depth, resolution).map(TileImage::Raster),
        n => Err(Error::InvalidArgument(format!("tiles of dimension {n} cannot be drawn"))),
    }
}

fn render_plane(ds: &DigitSystem, depth: usize, resolution: usize) -> Result<TileRaster> {
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    if !is_finite_state(&ds.a)? {
        return Err(Error::InvalidDigits("A is not a contraction".into()));
    }
    let radius = tile_radius(ds)?;
    let rho = radius.to_f64().unwrap().max(f64::MIN_POSITIVE);
    let half_width = if rho > 0.0 { rho } else { 1.0 };
    let pixel = 2.0 * half_width / resolution as f64;
    let max_depth = depth + MAX_REFINEMENT;
    // offsets[k][x] = A^{k+1} r_x, radii[k] = ‖A^k‖·ρ
    let mut offsets: Vec<Vec<[f64; 2]>> = Vec::new();
    let mut radii = Vec::new();
    let mut power = RationalMatrix::identity(2);
    for _ in 0..=max_depth {
        radii.push(power.norm_inf().to_f64().unwrap() * rho);
        power = power.mul(&ds.a);
        offsets.push(
            ds.digits
                .iter()
                .map(|r| {
                    let v = power.apply_int(r);
                    [v[0].to_f64().unwrap(), v[1].to_f64().unwrap()]
                })
                .collect(),
        );
    }
    let mut pixels = vec![false; resolution * resolution];
    let mut plotted: u64 = 0;
    let mut refined_depth = depth;
    let mut stack = vec![(0usize, [0.0f64, 0.0f64])];
    while let Some((k, p)) = stack.pop() {
        if k >= depth && radii[k] < pixel / 2.0 {
            plotted += 1;
            if plotted > POINT_BUDGET {
                return Err(Error::InvalidArgument("tile refinement exceeded the point budget".into()));
            }
            let col = ((p[0] + half_width) / pixel).floor().clamp(0.0, (resolution - 1) as f64) as usize;
            let row = ((half_width - p[1]) / pixel).floor().clamp(0.0, (resolution - 1) as f64) as usize;
            pixels[row * resolution + col] = true;
            refined_depth = refined_depth.max(k);
            continue;
        }
        if k == max_depth {
            return Err(Error::InvalidArgument(format!(
                "pieces are still larger than a pixel after {MAX_REFINEMENT} extra levels; increase depth"
            )));
        }
        for off in &offsets[k] {
            stack.push((k + 1, [p[0] + off[0], p[1] + off[1]]));
        }
    }
    Ok(TileRaster { radius, resolution, depth, refined_depth, pixels })
}

/// Text rendering of a raster, `#` for filled pixels, downsampled to `width`.
pub fn ascii_art(r: &TileRaster, width: usize) -> String {
    let step = r.resolution.div_ceil(width.max(1));
    let mut out = String::new();
    for row in (0..r.resolution).step_by(step * 2) {
        for col in (0..r.resolution).step_by(step) {
            let any = (row..(row + 2 * step).min(r.resolution))
                .any(|i| (col..(col + step).min(r.resolution)).any(|j| r.get(i, j)));
            out.push(if any { '#' } else { ' ' });
        }
        let _ = writeln!(out);
    }
    out
}
