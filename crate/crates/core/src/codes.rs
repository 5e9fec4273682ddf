//! Linear codes over `R = F3 + vF3` (`v^2 = 1`), identified with `O_K / 3 O_K`
//! for `K = Q(sqrt -2)` through `v <-> sqrt(-2)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{gram_from_weighted_generator, GramMatrix};
use crate::qseries::QSeries;
use crate::rational::{int, rat};
use crate::theta::{expand, split_residue_theta, FormKind, NamedForm};

/// Default cap on the number of coefficient combinations tried.
pub const DEFAULT_CODE_BUDGET: u128 = 10_000_000;

/// `a + b v` with `a, b` in `F3`, stored as `0..3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElem {
    a: u8,
    b: u8,
}

impl RingElem {
    pub const ZERO: RingElem = RingElem { a: 0, b: 0 };
    pub const ONE: RingElem = RingElem { a: 1, b: 0 };
    pub const V: RingElem = RingElem { a: 0, b: 1 };

    pub fn new(a: i64, b: i64) -> Self {
        RingElem {
            a: a.rem_euclid(3) as u8,
            b: b.rem_euclid(3) as u8,
        }
    }

    pub fn all() -> impl Iterator<Item = RingElem> {
        (0..9).map(|i| RingElem::new(i / 3, i % 3))
    }

    pub fn parts(self) -> (u8, u8) {
        (self.a, self.b)
    }

    /// Representatives in `{-1, 0, 1}`.
    pub fn centered(self) -> (i64, i64) {
        let c = |x: u8| if x == 2 { -1 } else { i64::from(x) };
        (c(self.a), c(self.b))
    }

    pub fn conj(self) -> Self {
        RingElem::new(i64::from(self.a), -i64::from(self.b))
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl std::ops::Add for RingElem {
    type Output = RingElem;
    fn add(self, o: RingElem) -> RingElem {
        RingElem::new(i64::from(self.a + o.a), i64::from(self.b + o.b))
    }
}

impl std::ops::Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::new(-i64::from(self.a), -i64::from(self.b))
    }
}

impl std::ops::Mul for RingElem {
    type Output = RingElem;
    fn mul(self, o: RingElem) -> RingElem {
        let (a, b, c, d) = (i64::from(self.a), i64::from(self.b), i64::from(o.a), i64::from(o.b));
        RingElem::new(a * c + b * d, a * d + b * c)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => f.write_str("v"),
            (0, b) => write!(f, "{b}v"),
            (a, 1) => write!(f, "{a}+v"),
            (a, b) => write!(f, "{a}+{b}v"),
        }
    }
}

impl FromStr for RingElem {
    type Err = Error;

    /// Accepts sums such as `1+v`, `-1-v`, `2v`, `-v`, or a pair `a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad ring element `{s}`"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once(',') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            return Ok(RingElem::new(a, b));
        }
        if s.is_empty() {
            return Err(bad());
        }
        let (mut a, mut b) = (0i64, 0i64);
        let mut rest = s;
        while !rest.is_empty() {
            let mut sign = 1;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            }
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            rest = tail;
            if let Some(num) = term.strip_suffix('v') {
                let k: i64 = if num.is_empty() { 1 } else { num.parse().map_err(|_| bad())? };
                b += sign * k;
            } else {
                let k: i64 = term.parse().map_err(|_| bad())?;
                a += sign * k;
            }
        }
        Ok(RingElem::new(a, b))
    }
}

/// Minimum of `N(x)/1` over the lift class `x + 3 O_K`: 0, 1 (`+-1`), 2 (`+-v`), 3 (`+-1+-v`).
pub fn length_of(r: RingElem) -> u32 {
    match (r.a, r.b) {
        (0, 0) => 0,
        (_, 0) => 1,
        (0, _) => 2,
        _ => 3,
    }
}

pub type Codeword = Vec<RingElem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeOverR {
    length: usize,
    rows: Vec<Codeword>,
}

impl CodeOverR {
    pub fn new(length: usize, rows: Vec<Codeword>) -> Result<Self> {
        if length == 0 {
            return Err(Error::Dimension("code length must be positive".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != length) {
            return Err(Error::Dimension(format!("generator row has {} entries, expected {length}", r.len())));
        }
        Ok(CodeOverR { length, rows })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn rows(&self) -> &[Codeword] {
        &self.rows
    }

    /// One generator row per line, entries separated by whitespace; `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            rows.push(line.split_whitespace().map(str::parse).collect::<Result<Vec<RingElem>>>()?);
        }
        let length = rows.first().map_or(0, Vec::len);
        Self::new(length, rows)
    }

    /// Named codes shipped with the crate.
    pub fn fixture(name: &str) -> Result<Self> {
        match name {
            "PSole_dim8" => Self::parse(include_str!("../data/psole_dim8.code")),
            _ => Err(Error::InvalidArgument(format!("unknown code fixture `{name}`"))),
        }
    }

    pub fn to_text(&self) -> String {
        self.rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }
}

/// Every `R`-linear combination of the generator rows, sorted.
pub fn enumerate_codewords(code: &CodeOverR, budget: u128) -> Result<Vec<Codeword>> {
    let m = code.rows.len() as u32;
    let size = 9u128.checked_pow(m).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::EnumerationTooLarge { size, budget });
    }
    let elems: Vec<RingElem> = RingElem::all().collect();
    let mut words = BTreeSet::new();
    let mut digits = vec![0usize; m as usize];
    loop {
        let mut w = vec![RingElem::ZERO; code.length];
        for (row, &d) in code.rows.iter().zip(&digits) {
            let s = elems[d];
            if s.is_zero() {
                continue;
            }
            for (x, &g) in w.iter_mut().zip(row) {
                *x = *x + s * g;
            }
        }
        words.insert(w);
        // odometer over 9^m coefficient choices
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < 9 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }
    Ok(words.into_iter().collect())
}

/// Composition counts `(n0, n1, n2, n3)`: how many coordinates have length 0..3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthWeightEnumerator {
    pub k: usize,
    pub counts: BTreeMap<[u32; 4], u64>,
}

impl LengthWeightEnumerator {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Terms in descending lexicographic order of composition.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &u64)> {
        self.counts.iter().rev()
    }

    pub fn to_json(&self) -> Result<String> {
        let wire = LweWire {
            k: self.k,
            terms: self.terms().map(|(c, &m)| LweTerm { n: *c, count: m }).collect(),
        };
        Ok(serde_json::to_string(&wire)?)
    }
}

#[derive(Serialize, Deserialize)]
struct LweWire {
    k: usize,
    terms: Vec<LweTerm>,
}

#[derive(Serialize, Deserialize)]
struct LweTerm {
    n: [u32; 4],
    count: u64,
}

impl fmt::Display for LengthWeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (comp, &mult) in self.terms() {
            let mut s = if mult == 1 { String::new() } else { mult.to_string() };
            for (var, &e) in ["a", "b", "c", "d"].iter().zip(comp) {
                match e {
                    0 => {}
                    1 => s.push_str(var),
                    e => s.push_str(&format!("{var}^{e}")),
                }
            }
            if s.is_empty() {
                s.push('1');
            }
            parts.push(s);
        }
        f.write_str(&parts.join(" + "))
    }
}

pub fn lwe_of_words(k: usize, words: &[Codeword]) -> LengthWeightEnumerator {
    let mut counts = BTreeMap::new();
    for w in words {
        let mut comp = [0u32; 4];
        for &x in w {
            comp[length_of(x) as usize] += 1;
        }
        *counts.entry(comp).or_insert(0) += 1;
    }
    LengthWeightEnumerator { k, counts }
}

pub fn length_weight_enumerator(code: &CodeOverR, budget: u128) -> Result<LengthWeightEnumerator> {
    Ok(lwe_of_words(code.length, &enumerate_codewords(code, budget)?))
}

pub fn hermitian_product(x: &[RingElem], y: &[RingElem]) -> RingElem {
    x.iter().zip(y).fold(RingElem::ZERO, |acc, (&a, &b)| acc + a * b.conj())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelfDualWitness {
    NotOrthogonal { row_i: usize, row_j: usize, product: RingElem },
    WrongSize { size: u128, expected: u128 },
}

impl fmt::Display for SelfDualWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelfDualWitness::NotOrthogonal { row_i, row_j, product } => {
                write!(f, "rows {row_i} and {row_j} have Hermitian product {product}")
            }
            SelfDualWitness::WrongSize { size, expected } => {
                write!(f, "code has {size} words, self-dual needs {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualReport {
    pub self_dual: bool,
    pub size: u128,
    pub witness: Option<SelfDualWitness>,
}

/// Self-orthogonal generator rows plus `|C|^2 = 9^k` means `C` equals its dual.
pub fn check_hermitian_self_dual(code: &CodeOverR, budget: u128) -> Result<SelfDualReport> {
    let size = enumerate_codewords(code, budget)?.len() as u128;
    for i in 0..code.rows.len() {
        for j in i..code.rows.len() {
            let p = hermitian_product(&code.rows[i], &code.rows[j]);
            if !p.is_zero() {
                return Ok(SelfDualReport {
                    self_dual: false,
                    size,
                    witness: Some(SelfDualWitness::NotOrthogonal { row_i: i, row_j: j, product: p }),
                });
            }
        }
    }
    let expected = 3u128.pow(code.length as u32);
    if size != expected {
        return Ok(SelfDualReport {
            self_dual: false,
            size,
            witness: Some(SelfDualWitness::WrongSize { size, expected }),
        });
    }
    Ok(SelfDualReport { self_dual: true, size, witness: None })
}

/// Element `a + b sqrt(-2)` of `Z[sqrt -2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Zs2 {
    a: i64,
    b: i64,
}

impl Zs2 {
    const ZERO: Zs2 = Zs2 { a: 0, b: 0 };

    fn norm(self) -> i64 {
        self.a * self.a + 2 * self.b * self.b
    }

    fn mul(self, o: Zs2) -> Zs2 {
        Zs2 {
            a: self.a * o.a - 2 * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }

    fn sub(self, o: Zs2) -> Zs2 {
        Zs2 { a: self.a - o.a, b: self.b - o.b }
    }

    /// Nearest-integer rounding of `self / d`; the remainder has smaller norm
    /// since `(1/2)^2 + 2 (1/2)^2 < 1`.
    fn round_div(self, d: Zs2) -> Zs2 {
        let n = d.norm();
        let num = self.mul(Zs2 { a: d.a, b: -d.b });
        let round = |x: i64| (2 * x + n).div_euclid(2 * n);
        Zs2 { a: round(num.a), b: round(num.b) }
    }
}

/// Square `O_K`-basis of the preimage of `code` under reduction mod 3:
/// lifted generator rows together with `3 e_i`, Hermite-reduced over `Z[sqrt -2]`.
fn construction_a_basis(code: &CodeOverR) -> Vec<Vec<Zs2>> {
    let k = code.length;
    let mut rows: Vec<Vec<Zs2>> = code
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let (a, b) = x.centered();
                    Zs2 { a, b }
                })
                .collect()
        })
        .collect();
    for i in 0..k {
        let mut r = vec![Zs2::ZERO; k];
        r[i] = Zs2 { a: 3, b: 0 };
        rows.push(r);
    }
    let mut pivot = 0;
    for col in 0..k {
        loop {
            let live: Vec<usize> = (pivot..rows.len()).filter(|&i| rows[i][col] != Zs2::ZERO).collect();
            let Some(&best) = live.iter().min_by_key(|&&i| rows[i][col].norm()) else {
                break;
            };
            rows.swap(pivot, best);
            let p = rows[pivot][col];
            let mut clean = true;
            for i in pivot + 1..rows.len() {
                if rows[i][col] == Zs2::ZERO {
                    continue;
                }
                let q = rows[i][col].round_div(p);
                let prow = rows[pivot].clone();
                for (x, y) in rows[i].iter_mut().zip(&prow) {
                    *x = x.sub(q.mul(*y));
                }
                if rows[i][col] != Zs2::ZERO {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        pivot += 1;
    }
    rows.truncate(k);
    rows
}

/// Gram of `(1/sqrt 3) * preimage(C)` realified through `a + b sqrt(-2) -> (a, b sqrt 2)`.
/// The result is integral with determinant `2^k` when `C` is Hermitian self-dual.
pub fn construction_a_gram(code: &CodeOverR) -> Result<GramMatrix> {
    let basis = construction_a_basis(code);
    let s = Zs2 { a: 0, b: 1 };
    let mut real_rows = Vec::with_capacity(2 * code.length);
    for row in &basis {
        for mult in [Zs2 { a: 1, b: 0 }, s] {
            real_rows.push(
                row.iter()
                    .flat_map(|x| {
                        let y = x.mul(mult);
                        [int(y.a), int(y.b)]
                    })
                    .collect::<Vec<BigRational>>(),
            );
        }
    }
    let weights: Vec<BigRational> = (0..2 * code.length).map(|i| int(if i % 2 == 0 { 1 } else { 2 })).collect();
    gram_from_weighted_generator(&real_rows, &weights, &rat(1, 3))
}

/// The four coset theta series: sum of `q^{N(x)/3}` over `x` in the lift of
/// an element of length 0, 1, 2, 3 respectively.
pub fn coset_thetas(order: &BigRational) -> Result<[QSeries; 4]> {
    let t3 = |c: BigRational| expand(&NamedForm::new(FormKind::Theta3, c).expect("positive scale"), order);
    // a-part runs over a residue class mod 3 with weight 1/3, b-part with weight 2/3
    let a0 = t3(int(3));
    let b0 = t3(int(6));
    let a1 = split_residue_theta(1, &rat(1, 3), order)?;
    let b1 = split_residue_theta(1, &rat(2, 3), order)?;
    Ok([&a0 * &b0, &a1 * &b0, &a0 * &b1, &a1 * &b1])
}

/// Substitutes the coset thetas into the enumerator; exact below `order`.
pub fn theta_from_lwe(lwe: &LengthWeightEnumerator, order: &BigRational) -> Result<QSeries> {
    let th = coset_thetas(order)?;
    let mut total = QSeries::zero(order.clone());
    for (comp, &mult) in &lwe.counts {
        let mut term = QSeries::one(order.clone());
        for (t, &e) in th.iter().zip(comp) {
            if e > 0 {
                term = &term * &t.pow(e);
            }
        }
        total = &total + &term.scale(&int(mult as i64));
    }
    Ok(total)
}

/// `theta0 + 2 theta1 + 2 theta2 + 4 theta3` against `theta3(tau/3) theta3(2tau/3)`.
pub fn coset_completeness(order: &BigRational) -> Result<(QSeries, QSeries)> {
    let [t0, t1, t2, t3] = coset_thetas(order)?;
    let lhs = &(&(&t0 + &t1.scale(&int(2))) + &t2.scale(&int(2))) + &t3.scale(&int(4));
    let full = &expand(&NamedForm::scaled(FormKind::Theta3, 1, 3), order)
        * &expand(&NamedForm::scaled(FormKind::Theta3, 2, 3), order);
    Ok((lhs, full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{catalog, theta_coefficients, DEFAULT_BUDGET};

    fn psole() -> CodeOverR {
        CodeOverR::fixture("PSole_dim8").unwrap()
    }

    /// `a(v-1) + b(v+1) -> (a, b)`. Here `(v-1)^2 = v-1` but `(v+1)^2 = -(v+1)`,
    /// so products map to `(a a', -b b')`.
    fn delta(x: RingElem) -> (i64, i64) {
        // x = (b - a) + (a + b) v, so a = (x_v - x_1)/2 and b = (x_v + x_1)/2 over F3
        let (x1, xv) = (i64::from(x.parts().0), i64::from(x.parts().1));
        let half = 2; // 2 * 2 = 1 mod 3
        (((xv - x1) * half).rem_euclid(3), ((xv + x1) * half).rem_euclid(3))
    }

    #[test]
    fn ring_axioms_and_split_form() {
        for x in RingElem::all() {
            for y in RingElem::all() {
                let (xa, xb) = delta(x);
                let (ya, yb) = delta(y);
                assert_eq!(delta(x * y), ((xa * ya) % 3, (-xb * yb).rem_euclid(3)));
                assert_eq!(delta(x + y), ((xa + ya) % 3, (xb + yb) % 3));
                for z in RingElem::all() {
                    assert_eq!(x * (y + z), x * y + x * z);
                }
            }
        }
        assert_eq!(RingElem::V * RingElem::V, RingElem::ONE);
        assert_eq!(RingElem::all().collect::<BTreeSet<_>>().len(), 9);
        assert_eq!(RingElem::all().map(delta).collect::<BTreeSet<_>>().len(), 9);
    }

    #[test]
    fn lengths() {
        let l = |s: &str| length_of(s.parse().unwrap());
        assert_eq!((l("0"), l("1"), l("-1"), l("v"), l("-v"), l("1+v"), l("-1-v"), l("1-v")), (0, 1, 1, 2, 2, 3, 3, 3));
        for x in RingElem::all() {
            assert_eq!(length_of(x), length_of(x.conj()));
        }
    }

    #[test]
    fn parses_elements() {
        assert_eq!("-1-v".parse::<RingElem>().unwrap(), RingElem::new(2, 2));
        assert_eq!("-1+v".parse::<RingElem>().unwrap(), RingElem::new(2, 1));
        assert_eq!("2v".parse::<RingElem>().unwrap(), RingElem::new(0, 2));
        assert_eq!("1,2".parse::<RingElem>().unwrap(), RingElem::new(1, 2));
        assert!("w".parse::<RingElem>().is_err());
        for x in RingElem::all() {
            assert_eq!(x.to_string().parse::<RingElem>().unwrap(), x);
        }
    }

    #[test]
    fn psole_code() {
        let c = psole();
        let words = enumerate_codewords(&c, DEFAULT_CODE_BUDGET).unwrap();
        assert_eq!(words.len(), 81);
        let lwe = lwe_of_words(4, &words);
        assert_eq!(
            lwe.to_string(),
            "a^4 + 4a^2d^2 + 16abcd + 8ad^3 + 8b^3d + 4b^2c^2 + 24bcd^2 + 8c^3d + 8d^4"
        );
        assert_eq!(lwe.total(), 81);
        assert_eq!(lwe.counts[&[4, 0, 0, 0]], 1);
        assert!(check_hermitian_self_dual(&c, DEFAULT_CODE_BUDGET).unwrap().self_dual);
        // closure under addition
        let set: BTreeSet<_> = words.iter().cloned().collect();
        for x in words.iter().take(9) {
            for y in &words {
                let s: Codeword = x.iter().zip(y).map(|(&a, &b)| a + b).collect();
                assert!(set.contains(&s));
            }
        }
    }

    #[test]
    fn trivial_codes() {
        let zero = CodeOverR::new(2, vec![vec![RingElem::ZERO; 2]]).unwrap();
        assert_eq!(enumerate_codewords(&zero, 100).unwrap().len(), 1);
        assert_eq!(length_weight_enumerator(&zero, 100).unwrap().to_string(), "a^2");
        let r = check_hermitian_self_dual(&zero, 100).unwrap();
        assert!(!r.self_dual);
        assert!(matches!(r.witness, Some(SelfDualWitness::WrongSize { size: 1, expected: 9 })));

        let full = CodeOverR::parse("1").unwrap();
        assert_eq!(length_weight_enumerator(&full, 100).unwrap().to_string(), "a + 2b + 2c + 4d");
        let r = check_hermitian_self_dual(&full, 100).unwrap();
        assert!(matches!(r.witness, Some(SelfDualWitness::NotOrthogonal { .. })));

        let big = CodeOverR::parse("1 0\n0 1\n1 1\n1 v\nv 1\nv v\nv 0\n0 v").unwrap();
        assert!(matches!(enumerate_codewords(&big, 1000), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn lwe_json() {
        let lwe = length_weight_enumerator(&CodeOverR::parse("1").unwrap(), 100).unwrap();
        assert_eq!(
            lwe.to_json().unwrap(),
            r#"{"k":1,"terms":[{"n":[1,0,0,0],"count":1},{"n":[0,1,0,0],"count":2},{"n":[0,0,1,0],"count":2},{"n":[0,0,0,1],"count":4}]}"#
        );
    }

    #[test]
    fn construction_a_of_psole() {
        let g = construction_a_gram(&psole()).unwrap();
        assert!(g.is_integral());
        assert_eq!(g.determinant(), int(16));
        let mine = theta_coefficients(&g, &int(6), DEFAULT_BUDGET).unwrap();
        let printed = theta_coefficients(&catalog("ExampleDim8").unwrap().gram, &int(6), DEFAULT_BUDGET).unwrap();
        assert_eq!(mine, printed);
        assert_eq!(&mine.counts[..5], &[1, 0, 32, 128, 240]);
    }

    #[test]
    fn construction_a_edge_cases() {
        let zero = CodeOverR::new(1, vec![vec![RingElem::ZERO]]).unwrap();
        let g = construction_a_gram(&zero).unwrap();
        assert_eq!(g, GramMatrix::from_integers(&[vec![3, 0], vec![0, 6]]).unwrap());
        let full = CodeOverR::parse("1").unwrap();
        let g = construction_a_gram(&full).unwrap();
        assert_eq!(g.entries(), &[vec![rat(1, 3), int(0)], vec![int(0), rat(2, 3)]]);
        assert!(!g.is_integral());
    }

    #[test]
    fn theta_from_lwe_matches_lattice() {
        let c = psole();
        let lwe = length_weight_enumerator(&c, DEFAULT_CODE_BUDGET).unwrap();
        let s = theta_from_lwe(&lwe, &int(5)).unwrap();
        assert_eq!(s.to_string(), "1 + 32q^2 + 128q^3 + 240q^4");
        let zero = CodeOverR::new(2, vec![vec![RingElem::ZERO; 2]]).unwrap();
        let z = theta_from_lwe(&length_weight_enumerator(&zero, 100).unwrap(), &int(5)).unwrap();
        assert_eq!(z, coset_thetas(&int(5)).unwrap()[0].pow(2));
    }

    #[test]
    fn cosets_cover_the_ring_of_integers() {
        let (lhs, rhs) = coset_completeness(&int(12)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
