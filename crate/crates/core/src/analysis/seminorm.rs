use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{CoeffVector, Generator, HarmonicState, LadderState};
use crate::error::{Error, Result};
use crate::lattice::IndexTriple;

/// States whose NAJF coefficients can be listed by triple.
pub trait Coefficients {
    fn coefficient_terms(&self) -> Vec<(IndexTriple, Complex64)>;
}

impl Coefficients for CoeffVector {
    fn coefficient_terms(&self) -> Vec<(IndexTriple, Complex64)> {
        let v = self.to_najf();
        v.iter()
            .map(|(j2, c)| (v.triple(j2).expect("entries are valid triples"), c))
            .collect()
    }
}

impl Coefficients for HarmonicState {
    fn coefficient_terms(&self) -> Vec<(IndexTriple, Complex64)> {
        self.iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeminormKind {
    P,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormValue {
    pub r: u32,
    pub s: u32,
    pub kind: SeminormKind,
    pub value: f64,
}

/// `(j + |m| + 1)^r (j + |q| + 1)^s`.
pub fn weight(t: &IndexTriple, r: u32, s: u32) -> f64 {
    (t.j() + t.m().abs() + 1.0).powi(r as i32) * (t.j() + t.q().abs() + 1.0).powi(s as i32)
}

/// Weighted l2 seminorm `sqrt(sum |f|^2 w^2)`.
pub fn p_seminorm<S: Coefficients>(state: &S, r: u32, s: u32) -> SeminormValue {
    let sum: f64 = state
        .coefficient_terms()
        .iter()
        .map(|(t, c)| (c.norm() * weight(t, r, s)).powi(2))
        .sum();
    SeminormValue {
        r,
        s,
        kind: SeminormKind::P,
        value: sum.sqrt(),
    }
}

/// Weighted l1 seminorm `sum |f| w`.
pub fn t_seminorm<S: Coefficients>(state: &S, r: u32, s: u32) -> SeminormValue {
    let value = state
        .coefficient_terms()
        .iter()
        .map(|(t, c)| c.norm() * weight(t, r, s))
        .sum();
    SeminormValue {
        r,
        s,
        kind: SeminormKind::T,
        value,
    }
}

/// The continuity inequalities checked by [`seminorm_bound_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    /// `p_{r,s}(J f) <= p_{r+1,s}(f)`
    JP,
    /// `p_{r,s}(K+ f) <= 2^(r+s) p_{r+1,s}(f)`
    KPlusP,
    /// `p_{r,s}(A+ f) <= 2 p_{r+1,s}(f)`
    APlusP,
    /// `t_{r,s}(K+ f) <= 2^(r+s) t_{r+2,s+1}(f)`
    KPlusT,
    /// `||f|| <= t_{0,0}(f)`, independent of `(r, s)`
    L2T,
    /// `p_{r,s}(f) <= t_{r,s}(f)`
    PT,
}

pub const ALL_BOUNDS: [BoundKind; 6] = [
    BoundKind::JP,
    BoundKind::KPlusP,
    BoundKind::APlusP,
    BoundKind::KPlusT,
    BoundKind::L2T,
    BoundKind::PT,
];

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::JP => "J-p",
            BoundKind::KPlusP => "K+-p",
            BoundKind::APlusP => "A+-p",
            BoundKind::KPlusT => "K+-t",
            BoundKind::L2T => "l2-t",
            BoundKind::PT => "p-t",
        })
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_BOUNDS
            .iter()
            .copied()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownKind(format!("bound {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResidual {
    pub kind: BoundKind,
    pub r: u32,
    pub s: u32,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; the inequality holds when this is non-negative.
    pub slack: f64,
}

pub fn seminorm_bound_check<S>(kind: BoundKind, state: &S, r: u32, s: u32) -> Result<BoundResidual>
where
    S: Coefficients + LadderState,
{
    let scale = |k: u32| 2f64.powi(k as i32);
    let (lhs, rhs) = match kind {
        BoundKind::JP => (
            p_seminorm(&state.apply(Generator::J)?, r, s).value,
            p_seminorm(state, r + 1, s).value,
        ),
        BoundKind::KPlusP => (
            p_seminorm(&state.apply(Generator::KPlus)?, r, s).value,
            scale(r + s) * p_seminorm(state, r + 1, s).value,
        ),
        BoundKind::APlusP => (
            p_seminorm(&state.apply(Generator::APlus)?, r, s).value,
            2.0 * p_seminorm(state, r + 1, s).value,
        ),
        BoundKind::KPlusT => (
            t_seminorm(&state.apply(Generator::KPlus)?, r, s).value,
            scale(r + s) * t_seminorm(state, r + 2, s + 1).value,
        ),
        BoundKind::L2T => (p_seminorm(state, 0, 0).value, t_seminorm(state, 0, 0).value),
        BoundKind::PT => (p_seminorm(state, r, s).value, t_seminorm(state, r, s).value),
    };
    Ok(BoundResidual {
        kind,
        r,
        s,
        lhs,
        rhs,
        slack: rhs - lhs,
    })
}
