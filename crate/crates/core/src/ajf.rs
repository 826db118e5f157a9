//! Evaluation of Jacobi polynomials, algebraic Jacobi functions (AJF), their
//! normalized variant (NAJF), derivatives, and the Jacobi harmonics on S^3.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IndexTriple, Sector};

/// Which normalization a function or coefficient vector refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `J_j^{m,q}`, normalized to `2/(2j+1)` on `[-1, 1]`.
    Ajf,
    /// `sqrt(j + 1/2) J_j^{m,q}`, orthonormal on `[-1, 1]`.
    Najf,
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ajf" => Ok(Basis::Ajf),
            "najf" => Ok(Basis::Najf),
            other => Err(Error::UnknownKind(format!("basis {other:?}"))),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Ajf => "ajf",
            Basis::Najf => "najf",
        })
    }
}

/// Range convention for the `chi` angle of the integer sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiRange {
    /// `chi in [0, pi]` on the integer sector, `[0, 2 pi)` on the half-integer one.
    Half,
    /// `chi in [0, 2 pi)` on both sectors.
    Full,
}

impl std::str::FromStr for ChiRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "half" | "paper" => Ok(ChiRange::Half),
            "full" => Ok(ChiRange::Full),
            other => Err(Error::UnknownKind(format!("chi range {other:?}"))),
        }
    }
}

impl fmt::Display for ChiRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChiRange::Half => "half",
            ChiRange::Full => "full",
        })
    }
}

/// Upper ends of the `(phi, chi)` parameter box for a sector.
pub fn angle_ranges(sector: Sector, chi_range: ChiRange) -> (f64, f64) {
    match (sector, chi_range) {
        (Sector::H, ChiRange::Half) => (2.0 * PI, PI),
        (Sector::H, ChiRange::Full) => (2.0 * PI, 2.0 * PI),
        (Sector::F, _) => (4.0 * PI, 2.0 * PI),
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_nan() || !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
    }
    Ok(())
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)`.
///
/// Non-negative parameters use the three-term recurrence. Negative integer
/// parameters (which arise only outside the canonical region) fall back to
/// summing the terminating hypergeometric series directly.
pub fn jacobi_poly(n: u32, alpha: i32, beta: i32, x: f64) -> f64 {
    if alpha >= 0 && beta >= 0 {
        jacobi_recurrence(n, f64::from(alpha), f64::from(beta), x)
    } else {
        jacobi_series(n, alpha, beta, x)
    }
}

fn jacobi_recurrence(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut prev = p0;
    let mut cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = f64::from(k);
        let s = 2.0 * k + a + b;
        let c0 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

fn binomial_f64(n: i64, k: i64) -> f64 {
    if k < 0 || k > n || n < 0 {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn jacobi_series(n: u32, alpha: i32, beta: i32, x: f64) -> f64 {
    let n = i64::from(n);
    let (a, b) = (i64::from(alpha), i64::from(beta));
    let plus = (x + 1.0) / 2.0;
    let minus = (x - 1.0) / 2.0;
    (0..=n)
        .map(|s| {
            binomial_f64(n + a, s)
                * binomial_f64(n + b, n - s)
                * plus.powi(s as i32)
                * minus.powi((n - s) as i32)
        })
        .sum()
}

/// `base^(e2 / 2)` for a doubled exponent, with `0^0 = 1`.
fn half_pow(base: f64, e2: i32) -> Result<f64> {
    if e2 == 0 {
        return Ok(1.0);
    }
    if base == 0.0 {
        if e2 > 0 {
            return Ok(0.0);
        }
        return Err(Error::Domain("singular at the interval endpoint".into()));
    }
    let whole = base.powi(e2.div_euclid(2));
    Ok(if e2.rem_euclid(2) == 1 {
        whole * base.sqrt()
    } else {
        whole
    })
}

/// Square root of the Gamma-function ratio for a canonical triple
/// (`m >= q >= 0`): `sqrt(Gamma(j+m+1) Gamma(j-m+1) / (Gamma(j+q+1) Gamma(j-q+1)))`.
fn gamma_prefactor(t: &IndexTriple) -> f64 {
    let (j2, m2, q2) = (t.j2(), t.m2(), t.q2());
    let steps = (m2 - q2) / 2;
    let mut ratio = 1.0;
    for i in 1..=steps {
        let num = f64::from(j2 + q2 + 2 * i);
        let den = f64::from(j2 - m2 + 2 * i);
        ratio *= num / den;
    }
    ratio.sqrt()
}

/// Value and first two derivatives of a function of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Evaluates the canonical triple at `x`; the derivative passes are optional
/// so the plain value path never fails at the endpoints.
fn canonical_eval(t: &IndexTriple, x: f64, order: u8) -> Result<EvalResult> {
    let p = t.to_classic();
    let (n, alpha, beta) = (p.n, p.alpha, p.beta);
    let g = gamma_prefactor(t);
    let u = (1.0 - x) / 2.0;
    let v = (1.0 + x) / 2.0;
    // w = u^(alpha/2) v^(beta/2), exponents kept doubled
    let w = half_pow(u, alpha)? * half_pow(v, beta)?;
    let poly = jacobi_poly(n, alpha, beta, x);
    let value = g * w * poly;
    if order == 0 {
        return Ok(EvalResult {
            value,
            d1: f64::NAN,
            d2: f64::NAN,
        });
    }

    let a = f64::from(alpha) / 2.0;
    let b = f64::from(beta) / 2.0;
    let mut w1 = 0.0;
    if alpha != 0 {
        w1 -= a / 2.0 * half_pow(u, alpha - 2)? * half_pow(v, beta)?;
    }
    if beta != 0 {
        w1 += b / 2.0 * half_pow(u, alpha)? * half_pow(v, beta - 2)?;
    }
    let s = f64::from(n) + f64::from(alpha) + f64::from(beta);
    let poly1 = if n >= 1 {
        (s + 1.0) / 2.0 * jacobi_poly(n - 1, alpha + 1, beta + 1, x)
    } else {
        0.0
    };
    let d1 = g * (w1 * poly + w * poly1);
    if order == 1 {
        return Ok(EvalResult {
            value,
            d1,
            d2: f64::NAN,
        });
    }

    let mut w2 = 0.0;
    if alpha != 0 && alpha != 2 {
        w2 += a * (a - 1.0) / 4.0 * half_pow(u, alpha - 4)? * half_pow(v, beta)?;
    }
    if alpha != 0 && beta != 0 {
        w2 -= a * b / 2.0 * half_pow(u, alpha - 2)? * half_pow(v, beta - 2)?;
    }
    if beta != 0 && beta != 2 {
        w2 += b * (b - 1.0) / 4.0 * half_pow(u, alpha)? * half_pow(v, beta - 4)?;
    }
    let poly2 = if n >= 2 {
        (s + 1.0) * (s + 2.0) / 4.0 * jacobi_poly(n - 2, alpha + 2, beta + 2, x)
    } else {
        0.0
    };
    let d2 = g * (w2 * poly + 2.0 * w1 * poly1 + w * poly2);
    Ok(EvalResult { value, d1, d2 })
}

fn eval_general(t: &IndexTriple, x: f64, order: u8) -> Result<EvalResult> {
    check_x(x)?;
    let c = t.canonicalize();
    let xc = if c.reflect_x { -x } else { x };
    let r = canonical_eval(&c.canonical, xc, order)?;
    let sign = f64::from(c.sign);
    let d1_sign = if c.reflect_x { -sign } else { sign };
    Ok(EvalResult {
        value: sign * r.value,
        d1: d1_sign * r.d1,
        d2: sign * r.d2,
    })
}

/// Algebraic Jacobi function `J_j^{m,q}(x)`.
pub fn ajf(t: &IndexTriple, x: f64) -> Result<f64> {
    Ok(eval_general(t, x, 0)?.value)
}

/// Normalized algebraic Jacobi function `sqrt(j + 1/2) J_j^{m,q}(x)`.
pub fn najf(t: &IndexTriple, x: f64) -> Result<f64> {
    Ok(najf_factor(t) * ajf(t, x)?)
}

/// `sqrt(j + 1/2)`, the factor taking an AJF to its NAJF.
pub fn najf_factor(t: &IndexTriple) -> f64 {
    (t.j() + 0.5).sqrt()
}

pub fn evaluate(basis: Basis, t: &IndexTriple, x: f64) -> Result<f64> {
    match basis {
        Basis::Ajf => ajf(t, x),
        Basis::Najf => najf(t, x),
    }
}

/// Value with first and second derivatives. Fails with a domain error where
/// a derivative diverges, which happens only at `x = +-1`.
pub fn ajf_derivatives(t: &IndexTriple, x: f64) -> Result<EvalResult> {
    eval_general(t, x, 2)
}

pub fn najf_derivatives(t: &IndexTriple, x: f64) -> Result<EvalResult> {
    let r = ajf_derivatives(t, x)?;
    let k = najf_factor(t);
    Ok(EvalResult {
        value: k * r.value,
        d1: k * r.d1,
        d2: k * r.d2,
    })
}

/// Residual of the second-order equation satisfied by every AJF:
///
/// `-(1-x^2) f'' + 2x f' + ((2mqx + m^2 + q^2) / (1-x^2) - j(j+1)) f`.
pub fn ode_residual(t: &IndexTriple, x: f64) -> Result<f64> {
    check_x(x)?;
    let one_minus = (1.0 - x) * (1.0 + x);
    if one_minus == 0.0 {
        return Err(Error::Domain("equation is singular at x = +-1".into()));
    }
    let r = ajf_derivatives(t, x)?;
    let (j, m, q) = (t.j(), t.m(), t.q());
    let potential = (2.0 * m * q * x + m * m + q * q) / one_minus - j * (j + 1.0);
    Ok(-one_minus * r.d2 + 2.0 * x * r.d1 + potential * r.value)
}

/// One bound evaluated at a point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    pub lhs: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub triple: IndexTriple,
    pub x: f64,
    pub value: f64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }
}

/// Sharp uniform bound `[((j-a+1)(j+a+1)) / ((j-b+1)(j+b+1))]^(1/4)` with
/// `a = max(|m|,|q|)`, `b = min(|m|,|q|)`.
pub fn sharp_bound(t: &IndexTriple) -> f64 {
    let j = t.j();
    let a = t.m().abs().max(t.q().abs());
    let b = t.m().abs().min(t.q().abs());
    (((j - a + 1.0) * (j + a + 1.0)) / ((j - b + 1.0) * (j + b + 1.0))).powf(0.25)
}

/// Polynomial bound `(j + |m| + 1)(j + |q| + 1)`.
pub fn polynomial_bound(t: &IndexTriple) -> f64 {
    (t.j() + t.m().abs() + 1.0) * (t.j() + t.q().abs() + 1.0)
}

/// Checks the uniform bounds at one point, with an absolute slack `tol`.
pub fn bound_check(t: &IndexTriple, x: f64, tol: f64) -> Result<BoundReport> {
    let value = ajf(t, x)?;
    let abs = value.abs();
    let najf_abs = najf_factor(t) * abs;
    let entry = |name, lhs: f64, bound: f64| BoundEntry {
        name,
        lhs,
        bound,
        holds: lhs <= bound + tol,
    };
    let entries = vec![
        entry("unit", abs, 1.0),
        entry("sharp", abs, sharp_bound(t)),
        entry("polynomial", abs, polynomial_bound(t)),
        entry(
            "normalized-polynomial",
            najf_abs,
            najf_factor(t) * polynomial_bound(t),
        ),
    ];
    Ok(BoundReport {
        triple: *t,
        x,
        value,
        entries,
    })
}

/// Evaluates a Jacobi harmonic without checking the angle box.
pub fn jacobi_harmonic_unchecked(t: &IndexTriple, x: f64, phi: f64, chi: f64) -> Result<Complex64> {
    let radial = najf(t, x)?;
    Ok(Complex64::from_polar(radial, t.m() * phi + t.q() * chi))
}

/// Jacobi harmonic `NJ_j^{m,q}(x) e^{i m phi} e^{i q chi}` on the angle box of
/// the triple's sector.
pub fn jacobi_harmonic(
    t: &IndexTriple,
    x: f64,
    phi: f64,
    chi: f64,
    chi_range: ChiRange,
) -> Result<Complex64> {
    let (phi_max, chi_max) = angle_ranges(t.sector(), chi_range);
    if !(0.0..=phi_max).contains(&phi) {
        return Err(Error::Domain(format!("phi = {phi} outside [0, {phi_max}]")));
    }
    if !(0.0..=chi_max).contains(&chi) {
        return Err(Error::Domain(format!("chi = {chi} outside [0, {chi_max}]")));
    }
    jacobi_harmonic_unchecked(t, x, phi, chi)
}
