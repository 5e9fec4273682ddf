//! Theta series and secrecy functions evaluated on the imaginary axis
//! `tau = iy`, `q = exp(-pi y)`, with explicit error bounds.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Sub};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{gaussian_mass_bound, theta_coefficients, GramMatrix, DEFAULT_BUDGET};
use crate::modform::ThetaDecomposition;
use crate::rational::{rat, to_f64};
use crate::theta::{FormKind, NamedForm};

pub const DEFAULT_EPS: f64 = 1e-12;

/// A float together with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Approx {
    pub value: f64,
    pub err: f64,
}

fn ulp(x: f64) -> f64 {
    x.abs() * f64::EPSILON
}

impl Approx {
    pub fn exact(value: f64) -> Self {
        Approx { value, err: 0.0 }
    }

    pub fn scale(self, c: f64) -> Self {
        let value = self.value * c;
        Approx { value, err: self.err * c.abs() + ulp(value) + ulp(c) * self.value.abs() }
    }

    pub fn powi(self, e: u32) -> Self {
        (0..e).fold(Approx::exact(1.0), |acc, _| acc * self)
    }
}

impl Add for Approx {
    type Output = Approx;
    fn add(self, o: Approx) -> Approx {
        let value = self.value + o.value;
        Approx { value, err: self.err + o.err + ulp(value) }
    }
}

impl Sub for Approx {
    type Output = Approx;
    fn sub(self, o: Approx) -> Approx {
        let value = self.value - o.value;
        Approx { value, err: self.err + o.err + ulp(value) }
    }
}

impl Mul for Approx {
    type Output = Approx;
    fn mul(self, o: Approx) -> Approx {
        let value = self.value * o.value;
        let err = self.value.abs() * o.err + o.value.abs() * self.err + self.err * o.err + ulp(value);
        Approx { value, err }
    }
}

impl Div for Approx {
    type Output = Approx;
    fn div(self, o: Approx) -> Approx {
        let value = self.value / o.value;
        let floor = o.value.abs() - o.err;
        let err = if floor > 0.0 {
            (self.err + value.abs() * o.err) / floor + ulp(value)
        } else {
            f64::INFINITY
        };
        Approx { value, err }
    }
}

/// Sum of `weight(m) * exp(-pi y (m + offset)^2)` over `m >= 0`, doubled for `m > 0`
/// when `offset = 0` (the terms for `m` and `-m` agree) and doubled for every `m`
/// when `offset = 1/2` (`m` and `-m-1` agree).
fn gaussian_sum(y: f64, offset: f64, sign: impl Fn(i64) -> f64) -> Approx {
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut m = 0i64;
    loop {
        let x = m as f64 + offset;
        let term = (-PI * y * x * x).exp();
        let mult = if offset == 0.0 && m == 0 { 1.0 } else { 2.0 };
        sum += mult * sign(m) * term;
        abs_sum += mult * term;
        m += 1;
        let next_x = m as f64 + offset;
        let next = (-PI * y * next_x * next_x).exp();
        // geometric tail: ratio of consecutive terms beyond `next` is below exp(-pi y (2 next_x + 1))
        let ratio = (-PI * y * (2.0 * next_x + 1.0)).exp();
        let tail = 2.0 * next / (1.0 - ratio);
        if tail <= 1e-3 * f64::EPSILON * abs_sum || next == 0.0 {
            let rounding = (m as f64 + 1.0) * f64::EPSILON * abs_sum;
            return Approx { value: sum, err: tail + rounding };
        }
    }
}

pub fn theta3(y: f64) -> Approx {
    gaussian_sum(y, 0.0, |_| 1.0)
}

pub fn theta4(y: f64) -> Approx {
    gaussian_sum(y, 0.0, |m| if m % 2 == 0 { 1.0 } else { -1.0 })
}

pub fn theta2(y: f64) -> Approx {
    gaussian_sum(y, 0.5, |_| 1.0)
}

/// `eta(iy) = exp(-pi y / 12) prod (1 - exp(-2 pi y m))`.
pub fn eta(y: f64) -> Approx {
    let q2 = (-2.0 * PI * y).exp();
    let mut prod = 1.0;
    let mut p = q2;
    let mut m = 0u32;
    while p > 1e-3 * f64::EPSILON {
        prod *= 1.0 - p;
        p *= q2;
        m += 1;
    }
    // omitted factors lie in [1 - sum p^j, 1]
    let tail = p / (1.0 - q2);
    let value = (-PI * y / 12.0).exp() * prod;
    Approx { value, err: value * (tail + f64::from(m + 2) * f64::EPSILON) }
}

/// A named form at `tau = iy`.
pub fn form_value(kind: FormKind, y: f64) -> Approx {
    match kind {
        FormKind::Theta2 => theta2(y),
        FormKind::Theta3 => theta3(y),
        FormKind::Theta4 => theta4(y),
        FormKind::Eta => eta(y),
        FormKind::ThetaD4 => (theta3(y).powi(4) + theta4(y).powi(4)).scale(0.5),
        FormKind::Delta16 => (eta(y) * eta(2.0 * y)).powi(8),
        FormKind::ThetaA2 => theta2(2.0 * y) * theta2(6.0 * y) + theta3(2.0 * y) * theta3(6.0 * y),
        FormKind::Delta12 => (eta(y) * eta(3.0 * y)).powi(6),
        FormKind::ThetaE8 => (theta2(y).powi(8) + theta3(y).powi(8) + theta4(y).powi(8)).scale(0.5),
        FormKind::Delta24 => eta(y).powi(24),
        FormKind::F1Ell2 => theta3(y) * theta3(2.0 * y),
        FormKind::Delta4 => (theta2(2.0 * y).powi(2) * theta4(y).powi(2)).scale(0.25),
    }
}

/// What to evaluate a theta series from.
#[derive(Clone, Copy, Debug)]
pub enum ThetaSource<'a> {
    Form(&'a NamedForm),
    Decomposition(&'a ThetaDecomposition),
    Gram(&'a GramMatrix),
    /// `Z^n`, evaluated as `theta3^n`.
    Cubic(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaEval {
    pub value: f64,
    pub bound_on_tail: f64,
    pub terms_used: usize,
}

impl ThetaEval {
    fn from_approx(a: Approx, terms_used: usize) -> Self {
        ThetaEval { value: a.value, bound_on_tail: a.err, terms_used }
    }

    fn approx(&self) -> Approx {
        Approx { value: self.value, err: self.bound_on_tail }
    }
}

pub fn eval_theta_numeric(source: ThetaSource<'_>, y: f64, eps: f64) -> Result<ThetaEval> {
    eval_theta_numeric_with_budget(source, y, eps, DEFAULT_BUDGET)
}

pub fn eval_theta_numeric_with_budget(source: ThetaSource<'_>, y: f64, eps: f64, budget: u64) -> Result<ThetaEval> {
    check_point(y, eps)?;
    match source {
        ThetaSource::Form(f) => Ok(ThetaEval::from_approx(form_value(f.kind, y * to_f64(&f.scale)), 1)),
        ThetaSource::Decomposition(d) => Ok(ThetaEval::from_approx(decomposition_value(d, y), d.coeffs.len())),
        ThetaSource::Cubic(n) => Ok(ThetaEval::from_approx(theta3(y).powi(n), n as usize)),
        ThetaSource::Gram(g) => gram_value(g, y, eps, budget),
    }
}

fn check_point(y: f64, eps: f64) -> Result<()> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::InvalidArgument(format!("y must be positive, got {y}")));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

pub fn decomposition_value(d: &ThetaDecomposition, y: f64) -> Approx {
    let [(g0, _), (g1, _)] = d.basis.generators();
    let a = form_value(g0, y);
    let b = form_value(g1, y);
    d.basis
        .terms
        .iter()
        .zip(&d.coeffs)
        .fold(Approx::exact(0.0), |acc, (&(l, m), c)| acc + (a.powi(l) * b.powi(m)).scale(to_f64(c)))
}

/// Tail bound `exp(-pi (y - t) M) * mass(t)` minimised over a few `t < y`;
/// returns the norm cutoff `M` reaching `target`.
fn gram_cutoff(g: &GramMatrix, y: f64, target: f64) -> f64 {
    (1..10)
        .map(|j| {
            let t = y * f64::from(j) / 10.0;
            let log_mass = gaussian_mass_bound(g, t).ln();
            (log_mass - target.ln()) / (PI * (y - t))
        })
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
}

fn gram_tail(g: &GramMatrix, y: f64, cutoff: f64) -> f64 {
    (1..10)
        .map(|j| {
            let t = y * f64::from(j) / 10.0;
            (-PI * (y - t) * cutoff).exp() * gaussian_mass_bound(g, t)
        })
        .fold(f64::INFINITY, f64::min)
}

fn gram_value(g: &GramMatrix, y: f64, eps: f64, budget: u64) -> Result<ThetaEval> {
    let target = 0.5 * eps;
    let cutoff = gram_cutoff(g, y, target);
    let sum_to = |m: f64| -> Result<(Approx, usize)> {
        let max_norm = rat((m.ceil() as i64).max(0), 1);
        let counts = theta_coefficients(g, &max_norm, budget)?;
        let step = to_f64(&counts.step);
        let mut sum = 0.0;
        let mut used = 0;
        for (k, &c) in counts.counts.iter().enumerate() {
            if c > 0 {
                sum += c as f64 * (-PI * y * k as f64 * step).exp();
                used += 1;
            }
        }
        let rounding = (used as f64 + 1.0) * f64::EPSILON * sum;
        let tail = gram_tail(g, y, m.ceil());
        Ok((Approx { value: sum, err: tail + rounding }, used))
    };
    match sum_to(cutoff) {
        Ok((a, used)) => Ok(ThetaEval::from_approx(a, used)),
        Err(Error::BoundTooLarge { .. }) => {
            // report what a smaller enumeration would have achieved
            let bound = match sum_to(cutoff / 2.0) {
                Ok((a, _)) => a.err,
                Err(_) => f64::INFINITY,
            };
            Err(Error::TailBoundNotMet { bound, eps })
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SecrecyEvaluation {
    pub y: f64,
    pub xi: f64,
    pub xi_err: f64,
    pub theta_lattice: f64,
    pub theta_reference: f64,
    pub terms_used: usize,
    pub bound_on_tail: f64,
}

/// `Xi(iy) = theta3(sqrt(ell) y)^n / Theta(iy)`.
pub fn secrecy_function(source: ThetaSource<'_>, ell: u32, n: u32, y: f64, eps: f64) -> Result<SecrecyEvaluation> {
    let lattice = eval_theta_numeric(source, y, eps)?;
    let reference = theta3(f64::from(ell).sqrt() * y).powi(n);
    let xi = reference / lattice.approx();
    Ok(SecrecyEvaluation {
        y,
        xi: xi.value,
        xi_err: xi.err,
        theta_lattice: lattice.value,
        theta_reference: reference.value,
        terms_used: lattice.terms_used,
        bound_on_tail: lattice.bound_on_tail,
    })
}

/// `Xi` at the symmetry point `y = 1/sqrt(ell)`.
pub fn weak_secrecy_gain(source: ThetaSource<'_>, ell: u32, n: u32, eps: f64) -> Result<SecrecyEvaluation> {
    if ell == 0 {
        return Err(Error::UnsupportedLevel(0));
    }
    secrecy_function(source, ell, n, 1.0 / f64::from(ell).sqrt(), eps)
}

pub fn db_to_y(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn y_to_db(y: f64) -> f64 {
    10.0 * y.log10()
}

/// Location of the symmetry point in dB.
pub fn symmetry_point_db(ell: u32) -> f64 {
    y_to_db(1.0 / f64::from(ell).sqrt())
}

/// `(y_dB, Xi)` on a uniform dB grid.
pub fn secrecy_curve(
    source: ThetaSource<'_>,
    ell: u32,
    n: u32,
    range_db: (f64, f64),
    samples: usize,
    eps: f64,
) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = range_db;
    if !(lo < hi) || samples < 2 {
        return Err(Error::InvalidArgument("curve needs lo < hi and at least 2 samples".into()));
    }
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let db = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            secrecy_function(source, ell, n, db_to_y(db), eps).map(|e| (db, e.xi))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MaximumReport {
    pub y_db: f64,
    pub y: f64,
    pub xi: f64,
    /// Strict local maxima seen on the pre-scan grid; more than one means the
    /// golden-section bracket may hold only a local peak.
    pub grid_peaks: usize,
    pub multimodal: bool,
}

const SCAN_POINTS: usize = 49;

/// Grid pre-scan, then golden-section search on the dB axis around the best grid point.
pub fn locate_maximum(
    source: ThetaSource<'_>,
    ell: u32,
    n: u32,
    range_db: (f64, f64),
    tol_db: f64,
    eps: f64,
) -> Result<MaximumReport> {
    let grid = secrecy_curve(source, ell, n, range_db, SCAN_POINTS, eps)?;
    let f = |db: f64| secrecy_function(source, ell, n, db_to_y(db), eps).map(|e| e.xi);

    let noise = 1e-12;
    let grid_peaks = (0..grid.len())
        .filter(|&i| {
            let v = grid[i].1;
            let left = i == 0 || v > grid[i - 1].1 + noise;
            let right = i + 1 == grid.len() || v > grid[i + 1].1 + noise;
            left && right && (i > 0 || i + 1 < grid.len())
        })
        .count();
    let best = (0..grid.len())
        .max_by(|&a, &b| grid[a].1.total_cmp(&grid[b].1))
        .expect("grid has points");
    let mut a = grid[best.saturating_sub(1)].0;
    let mut b = grid[(best + 1).min(grid.len() - 1)].0;

    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol_db {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d)?;
        }
    }
    let y_db = (a + b) / 2.0;
    let mut xi = f(y_db)?;
    let mut at = y_db;
    if grid[best].1 > xi {
        at = grid[best].0;
        xi = grid[best].1;
    }
    Ok(MaximumReport {
        y_db: at,
        y: db_to_y(at),
        xi,
        grid_peaks,
        multimodal: grid_peaks > 1,
    })
}
