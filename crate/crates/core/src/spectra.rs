//! Hecke-type operators on finite levels, a cyclic Jacobi eigensolver, and
//! pointwise checks of determinant recursions for the Fabrykowski–Gupta
//! group and for `a = (b, 1)σ, b = (a, 1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupDef};

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        Ok(Matrix { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale_add(&mut self, c: f64, other: &Matrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.n.max(1)).map(|r| r.iter().sum()).collect()
    }

    /// `blockdiag(blocks…)`.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Matrix::zeros(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.n;
        }
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let n = self.n * other.n;
        let mut m = Matrix::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let c = self[(i, j)];
                if c == 0.0 {
                    continue;
                }
                for k in 0..other.n {
                    for l in 0..other.n {
                        m[(i * other.n + k, j * other.n + l)] = c * other[(k, l)];
                    }
                }
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Determinant by LU decomposition with partial pivoting.
pub fn determinant(m: &Matrix) -> Result<f64> {
    let n = m.n;
    let mut a = m.data.clone();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs())).unwrap();
        let pivot = a[p * n + k];
        if pivot.abs() < 1e-300 {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f != 0.0 {
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
    }
    Ok(det)
}

/// A matrix with `m[i][j] == m[j][i]` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::InvalidArgument("matrix is not symmetric".into()));
        }
        Ok(SymMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }
}

/// Sorted eigenvalues with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// All eigenvalues in increasing order, repeated by multiplicity.
    pub eigenvalues: Vec<f64>,
    /// Distinct values after merging eigenvalues closer than `grouping`.
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub tol: f64,
    pub grouping: f64,
    pub dim: usize,
}

impl Spectrum {
    fn from_sorted(eigenvalues: Vec<f64>, tol: f64) -> Self {
        let grouping = (1e3 * tol).max(1e-12);
        let mut values: Vec<f64> = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        let mut sum = 0.0;
        for &x in &eigenvalues {
            match values.last() {
                Some(&last) if x - last <= grouping => {
                    let k = multiplicities.last_mut().unwrap();
                    *k += 1;
                    sum += x;
                    *values.last_mut().unwrap() = sum / *k as f64;
                }
                _ => {
                    values.push(x);
                    multiplicities.push(1);
                    sum = x;
                }
            }
        }
        let dim = eigenvalues.len();
        Spectrum { eigenvalues, values, multiplicities, tol, grouping, dim }
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |r, x| r.max(x.abs()))
    }

    /// Every eigenvalue of `self` lies within `tol` of one of `other`.
    pub fn embeds_in(&self, other: &Spectrum, tol: f64) -> bool {
        self.values.iter().all(|x| other.values.iter().any(|y| (x - y).abs() <= tol))
    }
}

pub const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below `tol`, which bounds the error of every eigenvalue.
pub fn eigenvalues_sym(m: &SymMatrix, tol: f64) -> Result<Spectrum> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let n = m.dim();
    let mut a = m.0.data.clone();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    let mut residual = off(&a);
    while residual >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence { sweeps, residual });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
        sweeps += 1;
        residual = off(&a);
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(Spectrum::from_sorted(eig, tol))
}

/// `Σ_{s∈S} π_n(s)`, divided by `|S|` when `normalized`.
pub fn hecke_matrix(group: &Group, gens: &[(String, Element)], n: usize, normalized: bool, max_points: usize) -> Result<SymMatrix> {
    let size = crate::group::level_size(group.degree(), n, max_points)?;
    let mut m = Matrix::zeros(size);
    let w = if normalized { 1.0 / gens.len() as f64 } else { 1.0 };
    for (_, e) in gens {
        let p = group.act_level(e, n, max_points)?;
        for v in 0..size {
            m[(v, p.image(v))] += w;
        }
    }
    SymMatrix::new(m)
}

/// `F(θ) = 4 − 2θ − θ²`.
pub fn fg_f(theta: f64) -> f64 {
    4.0 - 2.0 * theta - theta * theta
}

/// `X_2 = {−1}`, `X_m = F⁻¹(X_{m−1})`.
pub fn fg_level_set(m: usize) -> Vec<f64> {
    if m < 2 {
        return Vec::new();
    }
    let mut x: Vec<f64> = vec![-1.0];
    for _ in 2..m {
        // θ² + 2θ + (c − 4) = 0  ⇒  θ = −1 ± √(5 − c)
        x = x.iter().flat_map(|&c| {
            let r = (5.0 - c).sqrt();
            [-1.0 - r, -1.0 + r]
        }).collect();
    }
    x.sort_by(f64::total_cmp);
    x
}

/// Distinct eigenvalues of `Δ_n = a + a⁻¹ + s + s⁻¹` from the closed form
/// `{1, 4} ∪ ⋃_{2≤m≤n} π_±(X_m)` with `π_±(θ) = 1 ± √(5 − θ)`.
pub fn fg_spectrum_closed(n: usize) -> Vec<f64> {
    let mut out = vec![4.0];
    if n >= 1 {
        out.push(1.0);
    }
    for m in 2..=n {
        for theta in fg_level_set(m) {
            let r = (5.0 - theta).sqrt();
            out.push(1.0 - r);
            out.push(1.0 + r);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Level-`n` matrices `(a_n, s_n)` of `a = (0 1 2)`, `s = (a, 1, s)`.
pub fn fg_matrices(n: usize) -> (Matrix, Matrix) {
    if n == 0 {
        return (Matrix::identity(1), Matrix::identity(1));
    }
    let (a_prev, s_prev) = fg_matrices(n - 1);
    let mut cyc = Matrix::zeros(3);
    for i in 0..3 {
        cyc[(i, (i + 1) % 3)] = 1.0;
    }
    let a = cyc.kron(&Matrix::identity(a_prev.dim()));
    let s = Matrix::block_diag(&[&a_prev, &Matrix::identity(a_prev.dim()), &s_prev]);
    (a, s)
}

/// `Q_n(λ, μ) = S_n + λA_n − μI` with `A = a + aᵀ`, `S = s + sᵀ`.
pub fn fg_q(n: usize, lambda: f64, mu: f64) -> Matrix {
    let (a, s) = fg_matrices(n);
    let mut q = s.clone();
    q.scale_add(1.0, &s.transpose());
    q.scale_add(lambda, &a);
    q.scale_add(lambda, &a.transpose());
    q.scale_add(-mu, &Matrix::identity(a.dim()));
    q
}

fn fg_coefficients(l: f64, m: f64) -> [f64; 4] {
    let alpha = 2.0 - m + l;
    let beta = 2.0 - m - l;
    let gamma = m * m - l * l - m - 2.0;
    let delta = m * m - l * l - 2.0 * m - l;
    [alpha, beta, gamma, delta]
}

/// `det Q_n` by the recursion down to the closed forms for `n ≤ 1`; also
/// returns the smallest `|factor|` met on the way, to steer sampling away
/// from poles and zeros.
pub fn fg_detq_recursive(n: usize, lambda: f64, mu: f64) -> (f64, f64) {
    match n {
        0 => {
            let v = 2.0 + 2.0 * lambda - mu;
            (v, v.abs())
        }
        1 => {
            let (u, w) = (2.0 + 2.0 * lambda - mu, 2.0 - lambda - mu);
            (u * w * w, u.abs().min(w.abs()))
        }
        _ => {
            let [alpha, beta, gamma, delta] = fg_coefficients(lambda, mu);
            let ag = alpha * gamma;
            let l2 = lambda * lambda * beta / ag;
            let m2 = mu + 2.0 * lambda * lambda * delta / ag;
            let (inner, small) = fg_detq_recursive(n - 1, l2, m2);
            let factor = (alpha * beta * gamma * gamma).powi(3i32.pow(n as u32 - 2));
            let local = alpha.abs().min(beta.abs()).min(gamma.abs());
            (factor * inner, small.min(local))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub point: Vec<f64>,
    pub direct: f64,
    pub recursion: f64,
    pub relative_error: f64,
}

/// Outcome of a sampled identity check, with every sample for reproduction.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub passed: bool,
    pub seed: u64,
    pub tol: f64,
    pub samples: Vec<Sample>,
}

impl IdentityCheck {
    pub fn worst(&self) -> Option<&Sample> {
        self.samples.iter().max_by(|a, b| a.relative_error.total_cmp(&b.relative_error))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Rational sample point `p/64` with `|p| ≤ 64·range`.
fn sample(rng: &mut ChaCha8Rng, range: f64) -> f64 {
    let k = (64.0 * range) as i64;
    rng.gen_range(-k..=k) as f64 / 64.0
}

const RESAMPLE_CAP: usize = 10_000;
const POLE_MARGIN: f64 = 1e-2;

/// Compares LU determinants of `Q_n` with the recursion at seeded sample
/// points, and the two closed-form base cases at the same points.
pub fn fg_detq_check(n: usize, samples: usize, seed: u64, tol: f64) -> Result<IdentityCheck> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidArgument("det Q_n check supports 2 ≤ n ≤ 5".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    let mut points = 0;
    while points < samples {
        attempts += 1;
        if attempts > RESAMPLE_CAP {
            return Err(Error::Resampling { attempts: RESAMPLE_CAP });
        }
        let (l, m) = (sample(&mut rng, 2.0), sample(&mut rng, 3.0));
        let (recursion, small) = fg_detq_recursive(n, l, m);
        if small < POLE_MARGIN || !recursion.is_finite() {
            continue;
        }
        let direct = determinant(&fg_q(n, l, m))?;
        for k in 0..=1 {
            let base = determinant(&fg_q(k, l, m))?;
            let closed = fg_detq_recursive(k, l, m).0;
            out.push(Sample { point: vec![k as f64, l, m], direct: base, recursion: closed, relative_error: rel(base, closed) });
        }
        out.push(Sample { point: vec![n as f64, l, m], direct, recursion, relative_error: rel(direct, recursion) });
        points += 1;
    }
    let passed = out.iter().all(|s| s.relative_error < tol);
    Ok(IdentityCheck { passed, seed, tol, samples: out })
}

/// Level-`k` matrices of `a + a⁻¹` and `b + b⁻¹` for `a = (b,1)σ, b = (a,1)`.
pub fn img_matrices(k: usize) -> Result<(Matrix, Matrix)> {
    let def = GroupDef::parse("group img_z2_minus_1 alphabet 2\na = perm(0 1) [b, 1]\nb = perm() [a, 1]\n")?;
    let group = Group::new(def)?;
    let size = 1usize << k;
    let sym = |i: usize| -> Result<Matrix> {
        let p = group.act_level(&Element::generator(i), k, usize::MAX)?;
        let mut m = Matrix::zeros(size);
        for v in 0..size {
            m[(v, p.image(v))] += 1.0;
            m[(p.image(v), v)] += 1.0;
        }
        Ok(m)
    };
    Ok((sym(0)?, sym(1)?))
}

/// `Φ_k(λ; λ₁, λ₂) = det(λ + λ₁(a + a⁻¹) + λ₂(b + b⁻¹))` on level `k`.
pub fn img_phi_direct(k: usize, lambda: f64, l1: f64, l2: f64) -> Result<f64> {
    let (a, b) = img_matrices(k)?;
    let mut m = Matrix::identity(a.dim());
    for i in 0..m.dim() {
        m[(i, i)] = lambda;
    }
    m.scale_add(l1, &a);
    m.scale_add(l2, &b);
    match determinant(&m) {
        Err(Error::Singular) => Ok(0.0),
        other => other,
    }
}

/// `(λ; λ₁, λ₂) ↦ (Λλ − 2λ₁²; Λλ₂, −λ₁²)` with `Λ = λ + 2λ₂`.
pub fn img_phi_step(lambda: f64, l1: f64, l2: f64) -> (f64, f64, f64) {
    let cap = lambda + 2.0 * l2;
    (cap * lambda - 2.0 * l1 * l1, cap * l2, -l1 * l1)
}

/// `Φ_k` by applying the recursion `k` times down to `Φ_0 = λ + 2λ₁ + 2λ₂`.
pub fn img_phi_unrolled(k: usize, lambda: f64, l1: f64, l2: f64) -> f64 {
    let (mut x, mut y, mut z) = (lambda, l1, l2);
    for _ in 0..k {
        (x, y, z) = img_phi_step(x, y, z);
    }
    x + 2.0 * y + 2.0 * z
}

/// Compares `Φ_{k+1}(λ; λ₁, λ₂)` with `Φ_k(Λλ − 2λ₁²; Λλ₂, −λ₁²)`, both as
/// determinants, and with the fully unrolled recursion.
pub fn img_phi_recursion_check(k: usize, samples: usize, seed: u64, tol: f64) -> Result<IdentityCheck> {
    if !(1..=5).contains(&k) {
        return Err(Error::InvalidArgument("Φ_k check supports 1 ≤ k ≤ 5".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < 2 * samples {
        attempts += 1;
        if attempts > RESAMPLE_CAP {
            return Err(Error::Resampling { attempts: RESAMPLE_CAP });
        }
        let (l, l1, l2) = (sample(&mut rng, 4.0), sample(&mut rng, 2.0), sample(&mut rng, 2.0));
        let lhs = img_phi_direct(k + 1, l, l1, l2)?;
        if lhs.abs() < 1e-6 {
            continue;
        }
        let (x, y, z) = img_phi_step(l, l1, l2);
        let rhs = img_phi_direct(k, x, y, z)?;
        let unrolled = img_phi_unrolled(k + 1, l, l1, l2);
        out.push(Sample { point: vec![l, l1, l2], direct: lhs, recursion: rhs, relative_error: rel(lhs, rhs) });
        out.push(Sample { point: vec![l, l1, l2], direct: lhs, recursion: unrolled, relative_error: rel(lhs, unrolled) });
    }
    let passed = out.iter().all(|s| s.relative_error < tol);
    Ok(IdentityCheck { passed, seed, tol, samples: out })
}
