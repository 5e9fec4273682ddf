//! Exact truncated q-expansions with fractional exponents.
//!
//! Nome convention: `q = exp(pi * i * tau)`. With this choice the theta series
//! of a lattice is `sum q^{|x|^2}`, so integer exponents are squared norms.
//! Many references use `exp(2 pi i tau)` instead; every expansion in this crate
//! uses the single convention above.
//!
//! A [`QSeries`] stores the coefficient of `q^{n/D}` under key `n` for a common
//! denominator `D`, together with a truncation order `T`: every exponent below
//! `T` is exact and nothing at or above `T` is stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ceil_i64, format_rational, int, parse_rational};

/// Truncation order used when callers do not ask for one.
pub const DEFAULT_ORDER: i64 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    denom: u64,
    coeffs: BTreeMap<i64, BigRational>,
    order: BigRational,
}

impl QSeries {
    /// Builds a series from `(numerator, coefficient)` pairs over `denom`.
    /// Terms at or beyond `order` and zero coefficients are dropped.
    pub fn from_terms<I>(denom: u64, terms: I, order: BigRational) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        assert!(denom > 0, "exponent denominator must be positive");
        let bound = numer_bound(&order, denom);
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (n, c) in terms {
            if n >= bound || c.is_zero() {
                continue;
            }
            let entry = coeffs.entry(n).or_insert_with(BigRational::zero);
            *entry += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let mut s = QSeries { denom, coeffs, order };
        s.normalize();
        s
    }

    /// Integer-exponent series from a dense coefficient list starting at `q^0`.
    pub fn from_int_coeffs(coeffs: &[i64], order: BigRational) -> Self {
        Self::from_terms(
            1,
            coeffs.iter().enumerate().map(|(i, &c)| (i as i64, int(c))),
            order,
        )
    }

    pub fn zero(order: BigRational) -> Self {
        QSeries {
            denom: 1,
            coeffs: BTreeMap::new(),
            order,
        }
    }

    pub fn one(order: BigRational) -> Self {
        Self::monomial(BigRational::one(), &BigRational::zero(), order)
    }

    /// `coeff * q^exponent`, truncated at `order`.
    pub fn monomial(coeff: BigRational, exponent: &BigRational, order: BigRational) -> Self {
        let denom = exponent.denom().to_u64().expect("exponent denominator fits in u64");
        let numer = exponent.numer().to_i64().expect("exponent numerator fits in i64");
        Self::from_terms(denom, [(numer, coeff)], order)
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn order(&self) -> &BigRational {
        &self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored terms as `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (BigRational, &BigRational)> + '_ {
        let d = BigInt::from(self.denom);
        self.coeffs
            .iter()
            .map(move |(&n, c)| (BigRational::new(BigInt::from(n), d.clone()), c))
    }

    /// Lowest exponent carrying a nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<BigRational> {
        self.terms().next().map(|(e, _)| e)
    }

    pub fn coeff_at(&self, exponent: &BigRational) -> Result<BigRational> {
        if exponent >= &self.order {
            return Err(Error::QueryBeyondTruncation {
                exponent: Box::new(exponent.clone()),
                order: Box::new(self.order.clone()),
            });
        }
        let scaled = exponent * BigRational::from_integer(BigInt::from(self.denom));
        if !scaled.is_integer() {
            return Ok(BigRational::zero());
        }
        let n = scaled.to_integer().to_i64().expect("exponent fits in i64");
        Ok(self.coeffs.get(&n).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Coefficient at an integer exponent.
    pub fn coeff(&self, exponent: i64) -> Result<BigRational> {
        self.coeff_at(&int(exponent))
    }

    /// Drops every term at or beyond `order` (which may only shrink the order).
    pub fn truncate(&self, order: &BigRational) -> Self {
        let order = if order < &self.order { order.clone() } else { self.order.clone() };
        Self::from_terms(
            self.denom,
            self.coeffs.iter().map(|(&n, c)| (n, c.clone())),
            order,
        )
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::from_terms(
            self.denom,
            self.coeffs.iter().map(|(&n, c)| (n, c * factor)),
            self.order.clone(),
        )
    }

    /// Multiplies by `q^exponent`; the truncation order moves with it.
    pub fn shift(&self, exponent: &BigRational) -> Self {
        let e_denom = exponent.denom().to_u64().expect("denominator fits in u64");
        let l = self.denom.lcm(&e_denom);
        let factor = (l / self.denom) as i64;
        let offset = (exponent * BigRational::from_integer(BigInt::from(l)))
            .to_integer()
            .to_i64()
            .expect("shift fits in i64");
        Self::from_terms(
            l,
            self.coeffs.iter().map(|(&n, c)| (n * factor + offset, c.clone())),
            &self.order + exponent,
        )
    }

    /// Realizes `tau -> c * tau`: every exponent and the order are multiplied by `c`.
    ///
    /// Panics if `c` is not positive.
    pub fn scale_argument(&self, c: &BigRational) -> Self {
        assert!(c.is_positive(), "argument scale must be positive");
        let p = c.numer().to_i64().expect("scale numerator fits in i64");
        let r = c.denom().to_u64().expect("scale denominator fits in u64");
        Self::from_terms(
            self.denom * r,
            self.coeffs.iter().map(|(&n, v)| (n * p, v.clone())),
            &self.order * c,
        )
    }

    /// `a^e` by binary exponentiation; `a^0` is the constant series 1.
    pub fn pow(&self, e: u32) -> Self {
        let mut result = QSeries::one(self.order.clone());
        if e == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    /// Multiplicative inverse of a series with nonzero leading term `c q^{e0}`.
    ///
    /// The result may carry negative exponents (down to `-e0`) and is exact
    /// below `T - 2 e0`.
    pub fn invert_unit(&self) -> Result<Self> {
        let (&lead, lead_coeff) = self.coeffs.iter().next().ok_or(Error::NotInvertible)?;
        let inv_lead = lead_coeff.recip();
        // unit part u = a / q^{e0}, known for numerators below `bound`
        let bound = numer_bound(&self.order, self.denom) - lead;
        let unit: Vec<(i64, &BigRational)> = self
            .coeffs
            .iter()
            .map(|(&n, c)| (n - lead, c))
            .filter(|(n, _)| *n > 0)
            .collect();
        let len = bound.max(0) as usize;
        let mut inv: Vec<BigRational> = Vec::with_capacity(len);
        for m in 0..len as i64 {
            if m == 0 {
                inv.push(inv_lead.clone());
                continue;
            }
            let mut acc = BigRational::zero();
            for &(j, c) in &unit {
                if j > m {
                    break;
                }
                let prev = &inv[(m - j) as usize];
                if !prev.is_zero() {
                    acc += c * prev;
                }
            }
            inv.push(-(acc * &inv_lead));
        }
        let e0 = BigRational::new(BigInt::from(lead), BigInt::from(self.denom));
        let order = &self.order - &e0 - &e0;
        Ok(Self::from_terms(
            self.denom,
            inv.into_iter().enumerate().map(|(m, c)| (m as i64 - lead, c)),
            order,
        ))
    }

    /// First exponent below the common truncation order at which the two
    /// series differ, or `None` if they agree there.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<BigRational> {
        let order = if self.order < other.order { &self.order } else { &other.order };
        let a = self.truncate(order);
        let b = other.truncate(order);
        let mut exps: Vec<BigRational> = a.terms().map(|(e, _)| e).chain(b.terms().map(|(e, _)| e)).collect();
        exps.sort();
        exps.dedup();
        exps.into_iter()
            .find(|e| a.coeff_at(e).ok() != b.coeff_at(e).ok())
    }

    /// True if both series agree below their common truncation order.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// Coefficients at `q^0, q^1, ..., q^{m}` for integer exponents below the order.
    pub fn integer_coeffs(&self) -> Vec<BigRational> {
        let top = ceil_i64(&self.order);
        (0..top.max(0))
            .map(|m| self.coeff(m).unwrap_or_else(|_| BigRational::zero()))
            .collect()
    }

    /// Evaluates the stored polynomial at a real nome `q` (no tail estimate).
    pub fn eval_partial(&self, q: f64) -> f64 {
        self.terms()
            .map(|(e, c)| crate::rational::to_f64(c) * q.powf(crate::rational::to_f64(&e)))
            .sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("qseries\n");
        out.push_str(&format!("order {}\n", format_rational(&self.order)));
        for (e, c) in self.terms() {
            out.push_str(&format!("{} {} {}\n", e.numer(), e.denom(), format_rational(c)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some("qseries") => {}
            other => return Err(Error::Parse(format!("expected `qseries` header, got {other:?}"))),
        }
        let order = match lines.next().and_then(|l| l.strip_prefix("order ")) {
            Some(t) => parse_rational(t)?,
            None => return Err(Error::Parse("missing `order` line".into())),
        };
        let mut triples = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad term line `{line}`")));
            }
            let n: i64 = parts[0].parse().map_err(|_| Error::Parse(format!("bad numerator in `{line}`")))?;
            let d: u64 = parts[1].parse().map_err(|_| Error::Parse(format!("bad denominator in `{line}`")))?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in `{line}`")));
            }
            triples.push((n, d, parse_rational(parts[2])?));
        }
        Ok(Self::from_triples(triples, order))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&QSeriesWire::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: QSeriesWire = serde_json::from_str(s)?;
        wire.try_into()
    }

    fn from_triples(triples: Vec<(i64, u64, BigRational)>, order: BigRational) -> Self {
        let l = triples.iter().fold(1u64, |acc, (_, d, _)| acc.lcm(d));
        Self::from_terms(
            l,
            triples.into_iter().map(|(n, d, c)| (n * (l / d) as i64, c)),
            order,
        )
    }

    fn normalize(&mut self) {
        let mut g = self.denom;
        for &n in self.coeffs.keys() {
            g = g.gcd(&n.unsigned_abs());
            if g == 1 {
                break;
            }
        }
        if self.coeffs.is_empty() {
            g = self.denom;
        }
        if g > 1 {
            let gi = g as i64;
            self.coeffs = std::mem::take(&mut self.coeffs)
                .into_iter()
                .map(|(n, c)| (n / gi, c))
                .collect();
            self.denom /= g;
        }
    }

    fn rescaled(&self, l: u64) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        let f = (l / self.denom) as i64;
        self.coeffs.iter().map(move |(&n, c)| (n * f, c))
    }
}

/// Smallest numerator `n` (over `denom`) whose exponent `n/denom` reaches `order`.
fn numer_bound(order: &BigRational, denom: u64) -> i64 {
    ceil_i64(&(order * BigRational::from_integer(BigInt::from(denom))))
}

fn min_order(a: &QSeries, b: &QSeries) -> BigRational {
    if a.order < b.order {
        a.order.clone()
    } else {
        b.order.clone()
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let l = self.denom.lcm(&rhs.denom);
        let terms: Vec<(i64, BigRational)> = self
            .rescaled(l)
            .chain(rhs.rescaled(l))
            .map(|(n, c)| (n, c.clone()))
            .collect();
        QSeries::from_terms(l, terms, min_order(self, rhs))
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            denom: self.denom,
            coeffs: self.coeffs.iter().map(|(&n, c)| (n, -c)).collect(),
            order: self.order.clone(),
        }
    }
}

/// Cauchy product. The result order is `min(T_a, T_b)`; sharper bounds that
/// hold when one factor has a positive leading exponent are not claimed.
impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let l = self.denom.lcm(&rhs.denom);
        let order = min_order(self, rhs);
        let bound = numer_bound(&order, l);
        let a: Vec<(i64, &BigRational)> = self.rescaled(l).collect();
        let b: Vec<(i64, &BigRational)> = rhs.rescaled(l).collect();
        let mut acc: BTreeMap<i64, BigRational> = BTreeMap::new();
        for &(i, x) in &a {
            for &(j, y) in &b {
                let n = i + j;
                if n >= bound {
                    break;
                }
                let entry = acc.entry(n).or_insert_with(BigRational::zero);
                *entry += x * y;
            }
        }
        QSeries::from_terms(l, acc, order)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Ascending exponents, coefficients as fractions: `1 + 24q^2 - (1/2)q^(7/3)`.
impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "q".to_string()
            } else if e.is_integer() {
                format!("q^{}", e.numer())
            } else {
                format!("q^({})", format_rational(&e))
            };
            let coeff = if mag.is_one() && !mono.is_empty() {
                String::new()
            } else if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("({})", format_rational(&mag))
            };
            write!(f, "{coeff}{mono}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesWire {
    order: String,
    terms: Vec<(i64, u64, String)>,
}

impl From<&QSeries> for QSeriesWire {
    fn from(s: &QSeries) -> Self {
        QSeriesWire {
            order: format_rational(&s.order),
            terms: s
                .terms()
                .map(|(e, c)| {
                    (
                        e.numer().to_i64().expect("numerator fits"),
                        e.denom().to_u64().expect("denominator fits"),
                        format_rational(c),
                    )
                })
                .collect(),
        }
    }
}

impl TryFrom<QSeriesWire> for QSeries {
    type Error = Error;
    fn try_from(w: QSeriesWire) -> Result<Self> {
        let order = parse_rational(&w.order)?;
        let mut triples = Vec::with_capacity(w.terms.len());
        for (n, d, c) in w.terms {
            if d == 0 {
                return Err(Error::Parse("zero exponent denominator".into()));
            }
            triples.push((n, d, parse_rational(&c)?));
        }
        Ok(QSeries::from_triples(triples, order))
    }
}
