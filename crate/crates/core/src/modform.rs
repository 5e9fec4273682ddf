//! Theta series as polynomials in two generator forms of a given level, and
//! exact recovery of the polynomial from a few leading theta coefficients.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::ThetaCounts;
use crate::qseries::QSeries;
use crate::rational::{format_rational, int, parse_rational};
use crate::theta::{expand_kind, FormKind};

pub use crate::tables::{verify_table, TableId};

/// Norms checked against a solved decomposition whenever known data reaches them.
pub const SURPLUS_DEPTH: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    /// Even lattices: monomials `g0^l g1^m` of weight `n/2` in the level's
    /// theta series and cusp form.
    #[serde(rename = "even-lemma1")]
    EvenLemma1,
    /// Level 2, any parity: `f1^(k-2i) Delta_4^i`.
    #[serde(rename = "general-lemma2")]
    GeneralLemma2,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::EvenLemma1 => "even-lemma1",
            BasisKind::GeneralLemma2 => "general-lemma2",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "even-lemma1" | "lemma1" => Ok(BasisKind::EvenLemma1),
            "general" | "general-lemma2" | "lemma2" => Ok(BasisKind::GeneralLemma2),
            _ => Err(Error::Parse(format!("unknown basis kind `{s}` (expected even or general)"))),
        }
    }
}

/// The two generator forms for a level and basis kind, with their weights.
pub fn generators(ell: u32, kind: BasisKind) -> Result<[(FormKind, u32); 2]> {
    match (kind, ell) {
        (BasisKind::EvenLemma1, 1) => Ok([(FormKind::ThetaE8, 4), (FormKind::Delta24, 12)]),
        (BasisKind::EvenLemma1, 2) => Ok([(FormKind::ThetaD4, 2), (FormKind::Delta16, 8)]),
        (BasisKind::EvenLemma1, 3) => Ok([(FormKind::ThetaA2, 1), (FormKind::Delta12, 6)]),
        (BasisKind::GeneralLemma2, 2) => Ok([(FormKind::F1Ell2, 1), (FormKind::Delta4, 2)]),
        _ => Err(Error::UnsupportedLevel(ell)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    pub ell: u32,
    pub kind: BasisKind,
    pub n: u32,
    /// `(lambda, mu)` exponents of the two generators, `mu` ascending.
    pub terms: Vec<(u32, u32)>,
}

impl BasisSpec {
    pub fn generators(&self) -> [(FormKind, u32); 2] {
        generators(self.ell, self.kind).expect("validated at construction")
    }

    /// Exponents whose coefficients determine the decomposition.
    pub fn solving_exponents(&self) -> Vec<i64> {
        let step = match self.kind {
            BasisKind::EvenLemma1 => 2,
            BasisKind::GeneralLemma2 => 1,
        };
        (0..self.terms.len() as i64).map(|i| step * i).collect()
    }

    /// Each basis monomial expanded below `order`.
    pub fn expand_terms(&self, order: i64) -> Vec<QSeries> {
        let [(g0, _), (g1, _)] = self.generators();
        let a = expand_kind(g0, order);
        let b = expand_kind(g1, order);
        self.terms.iter().map(|&(l, m)| &a.pow(l) * &b.pow(m)).collect()
    }
}

pub fn build_basis(ell: u32, n: u32, kind: BasisKind) -> Result<BasisSpec> {
    let [(_, k0), (_, k1)] = generators(ell, kind)?;
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("dimension must be even and positive, got {n}")));
    }
    let k = n / 2;
    let terms: Vec<(u32, u32)> = (0..=k / k1)
        .filter(|mu| (k - k1 * mu).is_multiple_of(k0))
        .map(|mu| ((k - k1 * mu) / k0, mu))
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptyBasis { ell, weight: k });
    }
    Ok(BasisSpec { ell, kind, n, terms })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaDecomposition {
    pub basis: BasisSpec,
    pub coeffs: Vec<BigRational>,
}

impl ThetaDecomposition {
    pub fn new(basis: BasisSpec, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != basis.terms.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} basis terms",
                coeffs.len(),
                basis.terms.len()
            )));
        }
        Ok(ThetaDecomposition { basis, coeffs })
    }

    /// Parses the polynomial notation, e.g. `Theta_A2^12 - 72*Theta_A2^6*Delta_12 - 216*Delta_12^2`.
    /// Level, kind and dimension are read off the generator names and weights.
    pub fn parse(text: &str) -> Result<Self> {
        let monomials = parse_polynomial(text)?;
        let first = monomials
            .iter()
            .flat_map(|m| m.1.iter().map(|(name, _)| name.clone()))
            .next()
            .ok_or_else(|| Error::Parse(format!("no generator in `{text}`")))?;
        let (ell, kind) = family_of(&first)?;
        let gens = generators(ell, kind)?;
        let mut placed: Vec<((u32, u32), BigRational)> = Vec::new();
        for (coeff, factors) in monomials {
            let mut exps = (0u32, 0u32);
            for (name, e) in factors {
                if name == gens[0].0.short_name() {
                    exps.0 += e;
                } else if name == gens[1].0.short_name() {
                    exps.1 += e;
                } else {
                    return Err(Error::Parse(format!("`{name}` does not belong with `{first}`")));
                }
            }
            placed.push((exps, coeff));
        }
        let weights: Vec<u32> = placed.iter().map(|((l, m), _)| gens[0].1 * l + gens[1].1 * m).collect();
        if weights.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Parse(format!("terms of `{text}` have different weights")));
        }
        let basis = build_basis(ell, 2 * weights[0], kind)?;
        let mut coeffs = vec![BigRational::zero(); basis.terms.len()];
        for (exps, c) in placed {
            let slot = basis
                .terms
                .iter()
                .position(|t| *t == exps)
                .ok_or_else(|| Error::Parse(format!("monomial {exps:?} is not in the basis")))?;
            coeffs[slot] += c;
        }
        Ok(ThetaDecomposition { basis, coeffs })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&DecompositionWire::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: DecompositionWire = serde_json::from_str(s)?;
        let basis = build_basis(w.ell, w.n, w.kind)?;
        if basis.terms != w.terms {
            return Err(Error::Parse("terms do not match the basis for this level and dimension".into()));
        }
        let coeffs = w.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        Self::new(basis, coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct DecompositionWire {
    ell: u32,
    kind: BasisKind,
    n: u32,
    terms: Vec<(u32, u32)>,
    coeffs: Vec<String>,
}

impl From<&ThetaDecomposition> for DecompositionWire {
    fn from(d: &ThetaDecomposition) -> Self {
        DecompositionWire {
            ell: d.basis.ell,
            kind: d.basis.kind,
            n: d.basis.n,
            terms: d.basis.terms.clone(),
            coeffs: d.coeffs.iter().map(format_rational).collect(),
        }
    }
}

fn family_of(name: &str) -> Result<(u32, BasisKind)> {
    for (ell, kind) in [
        (1, BasisKind::EvenLemma1),
        (2, BasisKind::EvenLemma1),
        (3, BasisKind::EvenLemma1),
        (2, BasisKind::GeneralLemma2),
    ] {
        let gens = generators(ell, kind)?;
        if gens.iter().any(|(g, _)| g.short_name() == name) {
            return Ok((ell, kind));
        }
    }
    Err(Error::Parse(format!("unknown generator `{name}`")))
}

type Monomial = (BigRational, Vec<(String, u32)>);

fn parse_polynomial(text: &str) -> Result<Vec<Monomial>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split on + and - that start a new term
    let mut pieces = Vec::new();
    let mut current = String::new();
    for c in compact.chars() {
        if (c == '+' || c == '-') && !current.is_empty() && !current.ends_with(['+', '-']) {
            pieces.push(std::mem::take(&mut current));
        }
        current.push(c);
    }
    pieces.push(current);

    let mut out = Vec::new();
    for piece in pieces {
        let mut sign = BigRational::one();
        let mut body = piece.as_str();
        while let Some(c) = body.chars().next().filter(|c| *c == '+' || *c == '-') {
            if c == '-' {
                sign = -sign;
            }
            body = &body[1..];
        }
        let mut coeff = sign;
        let mut factors = Vec::new();
        for part in body.split('*') {
            if part.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{text}`")));
            }
            if part.starts_with(|c: char| c.is_ascii_digit() || c == '(') {
                coeff *= parse_rational(part.trim_matches(['(', ')']))?;
                continue;
            }
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in `{part}`")))?),
                None => (part, 1),
            };
            factors.push((name.to_string(), exp));
        }
        out.push((coeff, factors));
    }
    Ok(out)
}

impl fmt::Display for ThetaDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [(g0, _), (g1, _)] = self.basis.generators();
        let mut first = true;
        for (&(l, m), c) in self.basis.terms.iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mut factors = Vec::new();
            for (g, e) in [(g0, l), (g1, m)] {
                match e {
                    0 => {}
                    1 => factors.push(g.short_name().to_string()),
                    e => factors.push(format!("{}^{}", g.short_name(), e)),
                }
            }
            let mag = c.abs();
            let body = if mag.is_one() {
                factors.join("*")
            } else if factors.is_empty() {
                format_rational(&mag)
            } else {
                format!("{}*{}", format_rational(&mag), factors.join("*"))
            };
            if first {
                let sign = if c.is_negative() { "-" } else { "" };
                write!(f, "{sign}{body}")?;
            } else {
                let sign = if c.is_negative() { " - " } else { " + " };
                write!(f, "{sign}{body}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Known coefficients as `(norm, count)` pairs from enumeration output.
pub fn known_from_counts(counts: &ThetaCounts) -> Vec<(BigRational, BigRational)> {
    counts
        .pairs()
        .into_iter()
        .map(|(n, c)| (n, int(c as i64)))
        .collect()
}

/// Parses `norm:count` pairs such as `0:1 2:0`.
pub fn parse_known(text: &str) -> Result<Vec<(BigRational, BigRational)>> {
    text.split_whitespace()
        .map(|p| {
            let (n, c) = p
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected norm:count, got `{p}`")))?;
            Ok((parse_rational(n)?, parse_rational(c)?))
        })
        .collect()
}

pub fn solve_coefficients(basis: &BasisSpec, known: &[(BigRational, BigRational)]) -> Result<ThetaDecomposition> {
    let exps = basis.solving_exponents();
    let lookup = |e: &BigRational| known.iter().find(|(n, _)| n == e).map(|(_, c)| c.clone());
    let mut rhs = Vec::with_capacity(exps.len());
    for &e in &exps {
        let norm = int(e);
        rhs.push(lookup(&norm).ok_or(Error::MissingCoefficient { norm })?);
    }
    let max_known = known
        .iter()
        .map(|(n, _)| n.ceil().to_integer().to_i64().unwrap_or(i64::MAX))
        .filter(|&n| n <= SURPLUS_DEPTH)
        .max()
        .unwrap_or(0);
    let order = max_known.max(*exps.last().expect("non-empty basis")) + 1;
    let expansions = basis.expand_terms(order);
    let matrix: Vec<Vec<BigRational>> = exps
        .iter()
        .map(|&e| expansions.iter().map(|s| s.coeff(e).expect("within order")).collect())
        .collect();
    let coeffs = solve_exact(matrix, rhs)?;

    for (norm, count) in known {
        if exps.iter().any(|&e| &int(e) == norm) || norm >= &int(order) {
            continue;
        }
        let predicted = expansions
            .iter()
            .zip(&coeffs)
            .fold(BigRational::zero(), |acc, (s, a)| acc + a * s.coeff_at(norm).expect("within order"));
        if &predicted != count {
            return Err(Error::InconsistentSurplus {
                norm: Box::new(norm.clone()),
                predicted: Box::new(predicted),
                known: Box::new(count.clone()),
            });
        }
    }
    ThetaDecomposition::new(basis.clone(), coeffs)
}

/// Solves the square system `a x = b` exactly.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularSystem)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// `sum a_i * term_i`, exact below `order`.
pub fn expand_decomposition(d: &ThetaDecomposition, order: i64) -> QSeries {
    let terms = d.basis.expand_terms(order);
    terms
        .iter()
        .zip(&d.coeffs)
        .fold(QSeries::zero(int(order)), |acc, (s, a)| &acc + &s.scale(a))
}
