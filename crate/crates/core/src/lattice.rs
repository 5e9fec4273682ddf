//! Lattices given by exact Gram matrices, theta coefficients by short-vector
//! enumeration, and the catalog of named lattices.
//!
//! Enumeration bounds each coordinate with a floating-point Cholesky-style
//! decomposition of the quadratic form (Fincke-Pohst), widened by a guard
//! band, and accepts a vector only after its norm has been recomputed in
//! exact integer arithmetic. The float side can therefore only cost extra
//! nodes, never miss or invent a vector.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rational::{format_rational, int, parse_rational, rat, to_f64};

/// Default cap on enumeration tree nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Symmetric positive-definite matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: Vec<Vec<BigRational>>,
}

impl GramMatrix {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::Dimension("gram matrix must be non-empty".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {n}", row.len())));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let g = GramMatrix { entries };
        if let Some(k) = g.first_nonpositive_minor() {
            return Err(Error::NotPositiveDefinite(k));
        }
        Ok(g)
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
            .collect();
        GramMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn determinant(&self) -> BigRational {
        determinant(&self.entries)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_integer())
    }

    /// An integral lattice is even iff every diagonal Gram entry is even, since
    /// `|sum x_i b_i|^2 = sum x_i^2 G_ii + 2 sum_{i<j} x_i x_j G_ij`.
    pub fn is_even(&self) -> Result<bool> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_integer() {
                    return Err(Error::NotIntegral { row: i, col: j, value: v.clone() });
                }
            }
        }
        Ok(self
            .entries
            .iter()
            .enumerate()
            .all(|(i, row)| row[i].to_integer().is_even()))
    }

    /// `U G U^T` for an integer change of basis `U`.
    pub fn transform(&self, u: &[Vec<i64>]) -> Result<Self> {
        let n = self.dim();
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("transform must be square of the gram's size".into()));
        }
        let ur: Vec<Vec<BigRational>> = u.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let ug = mat_mul(&ur, &self.entries);
        let ut = transpose(&ur);
        GramMatrix::new(mat_mul(&ug, &ut))
    }

    fn first_nonpositive_minor(&self) -> Option<usize> {
        // exact LDL^T: pivots are ratios of consecutive leading minors
        let n = self.dim();
        let mut a = self.entries.clone();
        for k in 0..n {
            if !a[k][k].is_positive() {
                return Some(k + 1);
            }
            for i in k + 1..n {
                let factor = &a[i][k] / &a[k][k];
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let delta = &factor * &a[k][j];
                    a[i][j] -= delta;
                }
            }
        }
        None
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|row| row.iter().map(format_rational).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }

    /// Whitespace-separated rows; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            rows.push(line.split_whitespace().map(parse_rational).collect::<Result<Vec<_>>>()?);
        }
        Self::new(rows)
    }

    pub fn to_json(&self) -> Result<String> {
        let wire = GramWire {
            n: self.dim(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        };
        Ok(serde_json::to_string(&wire)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: GramWire = serde_json::from_str(s)?;
        if wire.entries.len() != wire.n {
            return Err(Error::Dimension(format!("declared n = {} but {} rows", wire.n, wire.entries.len())));
        }
        let rows = wire
            .entries
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    /// Reads a Gram from JSON if the text starts with `{`, else from the text form.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GramWire {
    n: usize,
    entries: Vec<Vec<String>>,
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(BigRational::zero(), |acc, k| {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc + &row[k] * &b[k][j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn transpose(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Exact determinant by fraction-preserving Gaussian elimination.
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let factor = &a[i][k] / &a[k][k];
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let delta = &factor * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

/// `M M^T` for a rational generator matrix.
pub fn gram_from_generator(rows: &[Vec<BigRational>]) -> Result<GramMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    gram_from_weighted_generator(rows, &vec![int(1); cols], &int(1))
}

/// Gram of the real generator whose entry `(i, k)` is
/// `rows[i][k] * sqrt(weights[k]) * sqrt(scale)`; the result is the exact
/// rational `scale * sum_k weights[k] rows[i][k] rows[j][k]`.
///
/// This covers realified ring elements such as `a + b sqrt(-2) -> (a, b sqrt 2)`
/// with an overall `1/sqrt 3`, where the generator itself is irrational.
pub fn gram_from_weighted_generator(
    rows: &[Vec<BigRational>],
    weights: &[BigRational],
    scale: &BigRational,
) -> Result<GramMatrix> {
    if rows.is_empty() {
        return Err(Error::RankDeficient);
    }
    let cols = weights.len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension(format!("every generator row must have {cols} entries")));
    }
    if rows.len() > cols {
        return Err(Error::RankDeficient);
    }
    let m = rows.len();
    let mut entries = vec![vec![BigRational::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let mut acc = BigRational::zero();
            for k in 0..cols {
                if rows[i][k].is_zero() || rows[j][k].is_zero() {
                    continue;
                }
                acc += &rows[i][k] * &rows[j][k] * &weights[k];
            }
            acc *= scale;
            entries[i][j] = acc.clone();
            entries[j][i] = acc;
        }
    }
    if determinant(&entries).is_zero() {
        return Err(Error::RankDeficient);
    }
    GramMatrix::new(entries)
}

/// Row-style Hermite normal form of the integer span of `generators`;
/// returns a basis (the nonzero HNF rows).
pub fn hermite_basis(generators: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let cols = generators.first().map_or(0, Vec::len);
    if generators.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("generators must share a length".into()));
    }
    let mut a: Vec<Vec<i128>> = generators
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if pivot_row >= a.len() {
            break;
        }
        // Euclid down the column until one nonzero entry remains at pivot_row
        loop {
            let nonzero: Vec<usize> = (pivot_row..a.len()).filter(|&i| a[i][col] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&i| a[i][col].abs()).expect("non-empty");
            a.swap(pivot_row, best);
            if a[pivot_row][col] < 0 {
                a[pivot_row].iter_mut().for_each(|x| *x = -*x);
            }
            let p = a[pivot_row][col];
            let mut done = true;
            for i in pivot_row + 1..a.len() {
                let q = a[i][col].div_euclid(p);
                if q != 0 {
                    let (head, tail) = a.split_at_mut(i);
                    let prow = &head[pivot_row];
                    for (x, y) in tail[0].iter_mut().zip(prow) {
                        *x -= q * y;
                    }
                }
                if a[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col] != 0 {
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    // reduce entries above each pivot into [0, pivot)
    for &(r, c) in &pivots {
        let p = a[r][c];
        for i in 0..r {
            let q = a[i][c].div_euclid(p);
            if q != 0 {
                let prow = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&prow) {
                    *x -= q * y;
                }
            }
        }
    }
    a.truncate(pivot_row);
    a.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::InvalidArgument("HNF entry overflow".into())))
                .collect()
        })
        .collect()
}

/// Counts of lattice vectors on the norm grid `k * step`, `k = 0..counts.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCounts {
    pub step: BigRational,
    pub counts: Vec<u64>,
}

impl ThetaCounts {
    pub fn max_norm(&self) -> BigRational {
        &self.step * int(self.counts.len() as i64 - 1)
    }

    pub fn pairs(&self) -> Vec<(BigRational, u64)> {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| (&self.step * int(k as i64), c))
            .collect()
    }

    /// Count at an exact norm (zero off the grid); `None` beyond the enumerated range.
    pub fn count_at(&self, norm: &BigRational) -> Option<u64> {
        if norm > &self.max_norm() || norm.is_negative() {
            return None;
        }
        let k = norm / &self.step;
        if !k.is_integer() {
            return Some(0);
        }
        k.to_integer().to_usize().map(|k| self.counts[k])
    }

    /// The theta series, exact below `max_norm + step`.
    pub fn to_qseries(&self) -> QSeries {
        let order = self.max_norm() + &self.step;
        let d = self.step.denom().to_u64().expect("fits");
        let s = self.step.numer().to_i64().expect("fits");
        QSeries::from_terms(
            d,
            self.counts.iter().enumerate().map(|(k, &c)| (k as i64 * s, int(c as i64))),
            order,
        )
    }

    pub fn min_nonzero_norm(&self) -> Option<BigRational> {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c > 0)
            .map(|(k, _)| &self.step * int(k as i64))
    }
}

impl fmt::Display for ThetaCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(n, c)| format!("({}, {})", format_rational(&n), c))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Exact counts `A_m` of vectors of norm `m` for every grid norm `m <= max_norm`.
pub fn theta_coefficients(gram: &GramMatrix, max_norm: &BigRational, budget: u64) -> Result<ThetaCounts> {
    if max_norm.is_negative() {
        return Err(Error::InvalidArgument("max_norm must be non-negative".into()));
    }
    let n = gram.dim();
    // norms x^T G x lie on (1/L) Z with L = lcm of denominators of G_ii and 2 G_ij
    let mut l = BigInt::one();
    for i in 0..n {
        for j in i..n {
            let v = if i == j { gram.entry(i, i).clone() } else { gram.entry(i, j) * int(2) };
            l = l.lcm(v.denom());
        }
    }
    let l_rat = BigRational::from_integer(l.clone());
    let step = BigRational::new(BigInt::one(), l.clone());
    let kmax = (max_norm * &l_rat).floor().to_integer().to_i64().ok_or(Error::BoundTooLarge { budget })?;

    // integer form: diag_i = G_ii L, off_ij = 2 G_ij L (i < j)
    let mut form = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = if i == j { gram.entry(i, i) * &l_rat } else { gram.entry(i, j) * &l_rat * int(2) };
            form[i][j] = v
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::InvalidArgument("gram entry too large".into()))?;
        }
    }

    let q = quadratic_form_decomposition(gram);
    let bound = to_f64(max_norm) * (1.0 + 1e-9) + 1e-9;

    let counts: Vec<AtomicU64> = (0..=kmax).map(|_| AtomicU64::new(0)).collect();
    counts[0].store(1, Ordering::Relaxed);
    let nodes = AtomicU64::new(0);
    let over = AtomicBool::new(false);

    let top = n - 1;
    let radius = (bound / q[top][top]).sqrt() + 1e-9;
    let hi = radius.floor() as i64;
    let ctx = EnumCtx {
        q: &q,
        form: &form,
        kmax,
        counts: &counts,
        nodes: &nodes,
        over: &over,
        budget,
    };
    (0..=hi).into_par_iter().for_each(|top_value| {
        let mut x = vec![0i64; n];
        x[top] = top_value;
        let used = q[top][top] * (top_value as f64) * (top_value as f64);
        ctx.descend(top, &mut x, bound - used, top_value == 0);
    });
    if over.load(Ordering::Relaxed) {
        return Err(Error::BoundTooLarge { budget });
    }
    Ok(ThetaCounts {
        step,
        counts: counts.into_iter().map(AtomicU64::into_inner).collect(),
    })
}

struct EnumCtx<'a> {
    q: &'a [Vec<f64>],
    form: &'a [Vec<i128>],
    kmax: i64,
    counts: &'a [AtomicU64],
    nodes: &'a AtomicU64,
    over: &'a AtomicBool,
    budget: u64,
}

impl EnumCtx<'_> {
    /// Coordinates `level..n` of `x` are fixed; enumerate `level-1` downwards.
    /// `zero_above` means every fixed coordinate is zero, in which case the next
    /// coordinate is restricted to be non-negative (each +-x pair counted once).
    fn descend(&self, level: usize, x: &mut [i64], remaining: f64, zero_above: bool) {
        if self.over.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.over.store(true, Ordering::Relaxed);
            return;
        }
        if level == 0 {
            if zero_above {
                return; // the zero vector is pre-counted
            }
            let norm = self.exact_norm(x);
            if norm <= i128::from(self.kmax) {
                self.counts[norm as usize].fetch_add(2, Ordering::Relaxed);
            }
            return;
        }
        let i = level - 1;
        let n = x.len();
        let center: f64 = (i + 1..n).map(|j| self.q[i][j] * x[j] as f64).sum();
        let r = (remaining.max(0.0) / self.q[i][i]).sqrt() + 1e-9;
        let mut lo = (-center - r).ceil() as i64;
        let hi = (-center + r).floor() as i64;
        if zero_above {
            lo = lo.max(0);
        }
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 + center;
            let rem = remaining - self.q[i][i] * t * t;
            if rem < -1e-7 * (1.0 + remaining.abs()) {
                continue;
            }
            self.descend(i, x, rem, zero_above && v == 0);
        }
        x[i] = 0;
    }

    fn exact_norm(&self, x: &[i64]) -> i128 {
        let n = x.len();
        let mut acc = 0i128;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let xi = i128::from(x[i]);
            acc += self.form[i][i] * xi * xi;
            for j in i + 1..n {
                if x[j] != 0 {
                    acc += self.form[i][j] * xi * i128::from(x[j]);
                }
            }
        }
        acc
    }
}

/// Upper bound on `sum_x exp(-pi t Q(x))`: summing one coordinate at a time,
/// each shifted Gaussian sum is at most its peak plus its integral,
/// `1 + 1/sqrt(t q_ii)`.
pub fn gaussian_mass_bound(gram: &GramMatrix, t: f64) -> f64 {
    let q = quadratic_form_decomposition(gram);
    (0..gram.dim())
        .map(|i| 1.0 + 1.0 / (t * q[i][i] * (1.0 - 1e-9)).sqrt())
        .product()
}

/// `Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2` in floating point.
fn quadratic_form_decomposition(gram: &GramMatrix) -> Vec<Vec<f64>> {
    let n = gram.dim();
    let mut q: Vec<Vec<f64>> = gram.entries().iter().map(|r| r.iter().map(to_f64).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    q
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Gram matrix printed in the reference material.
    Paper,
    /// Built here from a standard construction and validated.
    Derived,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub gram: GramMatrix,
    pub ell: u32,
    pub parity: Parity,
    pub source: Source,
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn is_even(&self) -> Result<bool> {
        self.gram.is_even()
    }

    /// `det^2 == ell^n`, i.e. `det = ell^{n/2}`.
    pub fn has_modular_determinant(&self) -> bool {
        let det = self.gram.determinant();
        let lhs = &det * &det;
        let rhs = num_traits::pow(int(i64::from(self.ell)), self.dim());
        lhs == rhs
    }
}

pub const CATALOG_NAMES: [&str; 10] = ["Zn", "A2", "D4", "E8", "C1", "C2", "C3", "K12", "BW16", "ExampleDim8"];

/// Looks up a named lattice. `Zn` is spelled with its dimension, e.g. `Z16`.
pub fn catalog(name: &str) -> Result<CatalogEntry> {
    if let Some(rest) = name.strip_prefix('Z') {
        if let Ok(n) = rest.parse::<usize>() {
            if n == 0 {
                return Err(Error::UnknownLattice(name.to_string()));
            }
            return Ok(entry(name, GramMatrix::identity(n), 1, Parity::Odd, Source::Derived));
        }
    }
    let e = match name {
        "A2" => entry("A2", GramMatrix::from_integers(&[vec![2, 1], vec![1, 2]])?, 3, Parity::Even, Source::Derived),
        "D4" => entry(
            "D4",
            GramMatrix::from_integers(&[
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, -1],
                vec![0, -1, 2, 0],
                vec![0, -1, 0, 2],
            ])?,
            2,
            Parity::Even,
            Source::Derived,
        ),
        "E8" => entry("E8", e8_gram(), 1, Parity::Even, Source::Derived),
        "C1" => entry("C1", GramMatrix::from_integers(&[vec![1]])?, 1, Parity::Odd, Source::Paper),
        "C2" => entry("C2", GramMatrix::from_integers(&[vec![1, 0], vec![0, 2]])?, 2, Parity::Odd, Source::Paper),
        "C3" => entry("C3", GramMatrix::from_integers(&[vec![1, 0], vec![0, 3]])?, 3, Parity::Odd, Source::Paper),
        "K12" => entry("K12", cached(&K12, coxeter_todd_gram), 3, Parity::Even, Source::Derived),
        "BW16" => entry("BW16", cached(&BW16, barnes_wall_gram), 2, Parity::Even, Source::Derived),
        "ExampleDim8" => entry("ExampleDim8", example_dim8_gram(), 2, Parity::Odd, Source::Paper),
        _ => return Err(Error::UnknownLattice(name.to_string())),
    };
    Ok(e)
}

fn entry(name: &str, gram: GramMatrix, ell: u32, parity: Parity, source: Source) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        gram,
        ell,
        parity,
        source,
    }
}

static K12: OnceLock<GramMatrix> = OnceLock::new();
static BW16: OnceLock<GramMatrix> = OnceLock::new();

fn cached(cell: &'static OnceLock<GramMatrix>, build: fn() -> GramMatrix) -> GramMatrix {
    cell.get_or_init(build).clone()
}

fn e8_gram() -> GramMatrix {
    // Cartan matrix of E8 (Bourbaki numbering)
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    for (a, b) in edges {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    GramMatrix::from_integers(&g).expect("E8 Cartan matrix is positive definite")
}

fn example_dim8_gram() -> GramMatrix {
    GramMatrix::from_text(include_str!("../data/example_dim8.gram")).expect("shipped gram is valid")
}

/// Gram of the basis `rows` (integer coordinates) under the bilinear form `form`.
fn gram_in_form(rows: &[Vec<i64>], form: &[Vec<BigRational>]) -> GramMatrix {
    let b: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let bf = mat_mul(&b, form);
    GramMatrix::new(mat_mul(&bf, &transpose(&b))).expect("basis of a lattice gives a positive definite gram")
}

/// Barnes-Wall lattice: `{x in Z^16 : x mod 2 in RM(1,4), sum x = 0 mod 4}`
/// with norms halved, so the minimum norm is 4 and `det = 2^8`.
fn barnes_wall_gram() -> GramMatrix {
    let n = 16;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    // 2 D16, spanned by 2(e_i +- e_16)
    for i in 0..n - 1 {
        for sign in [1, -1] {
            let mut v = vec![0i64; n];
            v[i] = 2;
            v[n - 1] = 2 * sign;
            gens.push(v);
        }
    }
    // first-order Reed-Muller code of length 16: all-ones and the 4 coordinate functions
    gens.push(vec![1; n]);
    for bit in 0..4 {
        gens.push((0..n).map(|p| ((p >> bit) & 1) as i64).collect());
    }
    let basis = hermite_basis(&gens).expect("integer generators");
    let form: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1, 2) } else { int(0) }).collect())
        .collect();
    gram_in_form(&basis, &form)
}

/// Coxeter-Todd lattice as an Eisenstein lattice: `x in E^6` with all
/// coordinates congruent mod `theta = sqrt(-3)` and `sum x_i = 0 mod 3`,
/// norms scaled by 2/3 so the minimum norm is 4 and `det = 3^6`.
/// Coordinates are `a + b w` with `w^2 + w + 1 = 0`, stored as `(a, b)`.
fn coxeter_todd_gram() -> GramMatrix {
    fn emul((a, b): (i64, i64), (c, d): (i64, i64)) -> (i64, i64) {
        (a * c - b * d, a * d + b * c - b * d)
    }
    fn flatten(v: &[(i64, i64)]) -> Vec<i64> {
        v.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
    let theta = (1, 2);
    let omega = (0, 1);
    let one = (1, 0);
    let mut gens = vec![flatten(&[one; 6])];
    for i in 1..6 {
        for u in [one, omega] {
            let c = emul(theta, u);
            let mut v = [(0, 0); 6];
            v[0] = c;
            v[i] = (-c.0, -c.1);
            gens.push(flatten(&v));
        }
    }
    for u in [one, omega] {
        let mut v = [(0, 0); 6];
        v[0] = emul(emul(theta, theta), u);
        gens.push(flatten(&v));
    }
    let basis = hermite_basis(&gens).expect("integer generators");
    // |a + b w|^2 = a^2 - ab + b^2, times 2/3
    let mut form = vec![vec![int(0); 12]; 12];
    for k in 0..6 {
        form[2 * k][2 * k] = rat(2, 3);
        form[2 * k + 1][2 * k + 1] = rat(2, 3);
        form[2 * k][2 * k + 1] = rat(-1, 3);
        form[2 * k + 1][2 * k] = rat(-1, 3);
    }
    gram_in_form(&basis, &form)
}
