//! Index lattice of the algebraic Jacobi functions.
//!
//! Half-integer indices are stored doubled so that all lattice arithmetic is
//! exact: `j = j2 / 2` and so on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated index triple `(j, m, q)` in doubled form.
///
/// Invariants: `j2 >= |m2|`, `j2 >= |q2|`, and `j2 - m2`, `j2 - q2` even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTriple", into = "RawTriple")]
pub struct IndexTriple {
    j2: i32,
    m2: i32,
    q2: i32,
}

#[derive(Serialize, Deserialize)]
struct RawTriple {
    j2: i32,
    m2: i32,
    q2: i32,
}

impl TryFrom<RawTriple> for IndexTriple {
    type Error = Error;

    fn try_from(raw: RawTriple) -> Result<Self> {
        IndexTriple::new(raw.j2, raw.m2, raw.q2)
    }
}

impl From<IndexTriple> for RawTriple {
    fn from(t: IndexTriple) -> Self {
        RawTriple {
            j2: t.j2,
            m2: t.m2,
            q2: t.q2,
        }
    }
}

/// Which of the two disjoint families a triple belongs to.
///
/// `H` holds the integer-`j` triples, `F` the half-integer ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Sector {
    H,
    F,
}

impl Sector {
    pub fn of_j2(j2: i32) -> Sector {
        if j2.rem_euclid(2) == 0 {
            Sector::H
        } else {
            Sector::F
        }
    }

    pub fn flipped(self) -> Sector {
        match self {
            Sector::H => Sector::F,
            Sector::F => Sector::H,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::H => "H",
            Sector::F => "F",
        })
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Sector::H),
            "F" | "f" => Ok(Sector::F),
            other => Err(Error::UnknownKind(format!("sector {other:?}"))),
        }
    }
}

pub fn validate(j2: i32, m2: i32, q2: i32) -> Result<()> {
    if (j2 - m2).rem_euclid(2) != 0 || (j2 - q2).rem_euclid(2) != 0 {
        return Err(Error::ParityMismatch { j2, m2, q2 });
    }
    if j2 < m2.abs() || j2 < q2.abs() {
        return Err(Error::RangeViolation { j2, m2, q2 });
    }
    Ok(())
}

impl IndexTriple {
    pub fn new(j2: i32, m2: i32, q2: i32) -> Result<Self> {
        validate(j2, m2, q2)?;
        Ok(IndexTriple { j2, m2, q2 })
    }

    /// Parses decimal indices such as `1.5`; each must be a multiple of 1/2.
    pub fn from_halves(j: f64, m: f64, q: f64) -> Result<Self> {
        let double = |v: f64| -> Result<i32> {
            let d = 2.0 * v;
            if (d - d.round()).abs() > 1e-9 || !d.is_finite() || d.abs() > 1e6 {
                return Err(Error::Domain(format!("{v} is not a multiple of 1/2")));
            }
            Ok(d.round() as i32)
        };
        IndexTriple::new(double(j)?, double(m)?, double(q)?)
    }

    pub fn j2(&self) -> i32 {
        self.j2
    }

    pub fn m2(&self) -> i32 {
        self.m2
    }

    pub fn q2(&self) -> i32 {
        self.q2
    }

    pub fn j(&self) -> f64 {
        f64::from(self.j2) / 2.0
    }

    pub fn m(&self) -> f64 {
        f64::from(self.m2) / 2.0
    }

    pub fn q(&self) -> f64 {
        f64::from(self.q2) / 2.0
    }

    pub fn sector(&self) -> Sector {
        Sector::of_j2(self.j2)
    }

    /// Shifts all three doubled indices; the result is validated.
    pub fn shifted(&self, dj2: i32, dm2: i32, dq2: i32) -> Result<Self> {
        IndexTriple::new(self.j2 + dj2, self.m2 + dm2, self.q2 + dq2)
    }

    pub fn to_classic(&self) -> ClassicParams {
        ClassicParams {
            n: ((self.j2 - self.m2) / 2) as u32,
            alpha: (self.m2 + self.q2) / 2,
            beta: (self.m2 - self.q2) / 2,
        }
    }

    /// Maps to the canonical region `m >= q >= 0` using the three
    /// symmetries: negation of both labels, reflection `x -> -x` with
    /// `q -> -q`, and the swap `m <-> q`.
    pub fn canonicalize(&self) -> Canonicalization {
        let (j2, mut m2, mut q2) = (self.j2, self.m2, self.q2);
        let mut sign = 1i8;
        let mut reflect_x = false;
        if m2 < 0 {
            if ((m2 + q2) / 2).rem_euclid(2) == 1 {
                sign = -sign;
            }
            m2 = -m2;
            q2 = -q2;
        }
        if q2 < 0 {
            if ((j2 - m2) / 2).rem_euclid(2) == 1 {
                sign = -sign;
            }
            q2 = -q2;
            reflect_x = true;
        }
        if q2 > m2 {
            std::mem::swap(&mut m2, &mut q2);
        }
        Canonicalization {
            canonical: IndexTriple { j2, m2, q2 },
            sign,
            reflect_x,
        }
    }
}

impl fmt::Display for IndexTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn half(v: i32) -> String {
            if v % 2 == 0 {
                format!("{}", v / 2)
            } else {
                format!("{}/2", v)
            }
        }
        write!(
            f,
            "({}, {}, {})",
            half(self.j2),
            half(self.m2),
            half(self.q2)
        )
    }
}

/// Classical Jacobi-polynomial parameters: `n = j - m`, `alpha = m + q`,
/// `beta = m - q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicParams {
    pub n: u32,
    pub alpha: i32,
    pub beta: i32,
}

impl ClassicParams {
    pub fn new(n: i64, alpha: i32, beta: i32) -> Result<Self> {
        let p = ClassicParams {
            n: u32::try_from(n).map_err(|_| Error::InvalidParams { n, alpha, beta })?,
            alpha,
            beta,
        };
        p.to_triple()?;
        Ok(p)
    }

    /// Inverse of [`IndexTriple::to_classic`].
    pub fn to_triple(&self) -> Result<IndexTriple> {
        let m2 = self.alpha + self.beta;
        let q2 = self.alpha - self.beta;
        let j2 = 2 * self.n as i32 + m2;
        IndexTriple::new(j2, m2, q2).map_err(|_| Error::InvalidParams {
            n: i64::from(self.n),
            alpha: self.alpha,
            beta: self.beta,
        })
    }
}

pub fn from_classic(n: i64, alpha: i32, beta: i32) -> Result<IndexTriple> {
    ClassicParams::new(n, alpha, beta)?.to_triple()
}

/// Result of [`IndexTriple::canonicalize`]:
/// `J(original; x) = sign * J(canonical; if reflect_x { -x } else { x })`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Canonicalization {
    pub canonical: IndexTriple,
    pub sign: i8,
    pub reflect_x: bool,
}

/// Doubled `j` values of the family `(m2, q2)` from the lowest admissible
/// one up to `j2max`.
pub fn family_j2(m2: i32, q2: i32, j2max: i32) -> Result<Vec<i32>> {
    if (m2 - q2).rem_euclid(2) != 0 {
        return Err(Error::ParityMismatch { j2: j2max, m2, q2 });
    }
    let lo = m2.abs().max(q2.abs());
    Ok((lo..=j2max).step_by(2).collect())
}

/// All valid triples with `j2 <= j2max`, ordered by `(j2, m2, q2)`.
pub fn triples_up_to(j2max: i32) -> Vec<IndexTriple> {
    let mut out = Vec::new();
    for j2 in 0..=j2max {
        for m2 in (-j2..=j2).step_by(2) {
            for q2 in (-j2..=j2).step_by(2) {
                out.push(IndexTriple { j2, m2, q2 });
            }
        }
    }
    out
}

/// Valid triples of one sector with `j2 <= j2max`.
pub fn sector_triples(sector: Sector, j2max: i32) -> Vec<IndexTriple> {
    triples_up_to(j2max)
        .into_iter()
        .filter(|t| t.sector() == sector)
        .collect()
}
