//! Ladder, Cartan and su(1,1) operators acting on coefficient states.
//!
//! Coefficients live in the orthonormal (NAJF) basis. The closed-form AJF
//! coefficients are converted on the fly: a generator taking `j` to `j'`
//! picks up `sqrt((j + 1/2) / (j' + 1/2))`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ajf::{self, Basis};
use crate::error::{Error, Result};
use crate::lattice::{IndexTriple, Sector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    APlus,
    AMinus,
    BPlus,
    BMinus,
    CPlus,
    CMinus,
    DPlus,
    DMinus,
    EPlus,
    EMinus,
    FPlus,
    FMinus,
    J,
    M,
    Q,
    KPlus,
    KMinus,
    K3,
}

use Generator::*;

/// The fifteen su(2,2) generators in monomial order.
pub const MONOMIAL_ORDER: [Generator; 15] = [
    APlus, BPlus, CPlus, DPlus, EPlus, FPlus, J, M, Q, FMinus, EMinus, DMinus, CMinus, BMinus,
    AMinus,
];

pub const ALL_GENERATORS: [Generator; 18] = [
    APlus, AMinus, BPlus, BMinus, CPlus, CMinus, DPlus, DMinus, EPlus, EMinus, FPlus, FMinus, J, M,
    Q, KPlus, KMinus, K3,
];

impl Generator {
    /// Index shift `(dj2, dm2, dq2)` in doubled units.
    pub fn shift(self) -> (i32, i32, i32) {
        match self {
            APlus => (0, 2, 0),
            AMinus => (0, -2, 0),
            BPlus => (0, 0, 2),
            BMinus => (0, 0, -2),
            CPlus => (1, 1, 1),
            CMinus => (-1, -1, -1),
            DPlus => (1, 1, -1),
            DMinus => (-1, -1, 1),
            EPlus => (1, -1, 1),
            EMinus => (-1, 1, -1),
            FPlus => (1, -1, -1),
            FMinus => (-1, 1, 1),
            KPlus => (2, 0, 0),
            KMinus => (-2, 0, 0),
            J | M | Q | K3 => (0, 0, 0),
        }
    }

    /// The formal adjoint under the pairing `<C+ f | g> = <f | C- g>`.
    pub fn adjoint(self) -> Generator {
        match self {
            APlus => AMinus,
            AMinus => APlus,
            BPlus => BMinus,
            BMinus => BPlus,
            CPlus => CMinus,
            CMinus => CPlus,
            DPlus => DMinus,
            DMinus => DPlus,
            EPlus => EMinus,
            EMinus => EPlus,
            FPlus => FMinus,
            FMinus => FPlus,
            KPlus => KMinus,
            KMinus => KPlus,
            g => g,
        }
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, J | M | Q | K3)
    }

    /// Shifts `j` by a half integer and so swaps the two sectors.
    pub fn is_half_shift(self) -> bool {
        self.shift().0.rem_euclid(2) == 1
    }

    /// Four times the squared AJF-basis coefficient, an exact integer.
    fn ajf_coefficient_sq4(self, t: &IndexTriple) -> i64 {
        let (j, m, q) = (i64::from(t.j2()), i64::from(t.m2()), i64::from(t.q2()));
        let mu = m.abs().max(q.abs());
        match self {
            APlus => (j - m) * (j + m + 2),
            AMinus => (j + m) * (j - m + 2),
            BPlus => (j - q) * (j + q + 2),
            BMinus => (j + q) * (j - q + 2),
            CPlus => (j + m + 2) * (j + q + 2),
            CMinus => (j + m) * (j + q),
            DPlus => (j + m + 2) * (j - q + 2),
            DMinus => (j + m) * (j - q),
            EPlus => (j - m + 2) * (j + q + 2),
            EMinus => (j - m) * (j + q),
            FPlus => (j - m + 2) * (j - q + 2),
            FMinus => (j - m) * (j - q),
            KPlus => (j + 2) * (j + 2) - mu * mu,
            KMinus => j * j - mu * mu,
            J | M | Q | K3 => 0,
        }
    }

    fn eigenvalue(self, t: &IndexTriple) -> f64 {
        match self {
            J => t.j(),
            M => t.m(),
            Q => t.q(),
            K3 => t.j() + 0.5,
            _ => unreachable!("not a diagonal generator"),
        }
    }

    /// Coefficient of the generator on a basis function of the given
    /// normalization, together with the target triple. `None` means the
    /// image is exactly zero.
    pub fn coefficient(self, t: &IndexTriple, basis: Basis) -> Result<Option<(IndexTriple, f64)>> {
        if self.is_diagonal() {
            let ev = self.eigenvalue(t);
            return Ok((ev != 0.0).then_some((*t, ev)));
        }
        let sq4 = self.ajf_coefficient_sq4(t);
        if sq4 == 0 {
            return Ok(None);
        }
        let (dj, dm, dq) = self.shift();
        let target = t.shifted(dj, dm, dq).map_err(|e| {
            Error::InvalidShift(format!("{self} on {t} has nonzero coefficient but {e}"))
        })?;
        if sq4 < 0 {
            return Err(Error::InvalidShift(format!(
                "{self} on {t}: negative squared coefficient"
            )));
        }
        let mut c = (sq4 as f64 / 4.0).sqrt();
        if basis == Basis::Najf && dj != 0 {
            c *= (f64::from(t.j2() + 1) / f64::from(target.j2() + 1)).sqrt();
        }
        Ok(Some((target, c)))
    }

    /// Action on the function `J_j^{m,q}(x)` itself (AJF normalization),
    /// evaluated at `x`. A+-, B+- and K+- use their first-order differential
    /// realizations, the Cartan operators multiply, and C+-..F+- map one AJF
    /// to a multiple of another.
    pub fn function_image(self, t: &IndexTriple, x: f64) -> Result<f64> {
        let (j, m, q) = (t.j(), t.m(), t.q());
        match self {
            APlus | AMinus | BPlus | BMinus => {
                let r = ajf::ajf_derivatives(t, x)?;
                let s = ((1.0 - x) * (1.0 + x)).sqrt();
                if s == 0.0 {
                    return Err(Error::Domain(
                        "ladder realization singular at x = +-1".into(),
                    ));
                }
                let sign = if matches!(self, APlus | BPlus) {
                    1.0
                } else {
                    -1.0
                };
                let mult = match self {
                    APlus | AMinus => m * x + q,
                    _ => q * x + m,
                };
                Ok(sign * s * r.d1 + mult / s * r.value)
            }
            KPlus | KMinus => {
                // with |m| >= |q| the normalization involves q; otherwise m
                let other = if m.abs() >= q.abs() { q } else { m };
                let r = ajf::ajf_derivatives(t, x)?;
                let one_minus = (1.0 - x) * (1.0 + x);
                if self == KPlus {
                    let jp = j + 1.0;
                    let norm = jp / (jp * jp - other * other).sqrt();
                    Ok(norm * (-one_minus * r.d1 + x * jp * r.value + m * q / jp * r.value))
                } else {
                    if j == other.abs() {
                        return Ok(0.0);
                    }
                    let norm = j / (j * j - other * other).sqrt();
                    Ok(norm * (one_minus * r.d1 + x * j * r.value + m * q / j * r.value))
                }
            }
            J | M | Q | K3 => Ok(self.eigenvalue(t) * ajf::ajf(t, x)?),
            _ => match self.coefficient(t, Basis::Ajf)? {
                Some((target, c)) => Ok(c * ajf::ajf(&target, x)?),
                None => Ok(0.0),
            },
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            APlus => "A+",
            AMinus => "A-",
            BPlus => "B+",
            BMinus => "B-",
            CPlus => "C+",
            CMinus => "C-",
            DPlus => "D+",
            DMinus => "D-",
            EPlus => "E+",
            EMinus => "E-",
            FPlus => "F+",
            FMinus => "F-",
            J => "J",
            M => "M",
            Q => "Q",
            KPlus => "K+",
            KMinus => "K-",
            K3 => "K3",
        };
        f.write_str(s)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_GENERATORS
            .iter()
            .copied()
            .find(|g| g.to_string() == s.replace('−', "-"))
            .ok_or_else(|| Error::UnknownKind(format!("generator {s:?}")))
    }
}

/// Coefficients of a function of `x` in one `(m, q)` family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffVector {
    m2: i32,
    q2: i32,
    basis: Basis,
    entries: BTreeMap<i32, Complex64>,
}

impl CoeffVector {
    pub fn new(m2: i32, q2: i32, basis: Basis) -> Result<Self> {
        if (m2 - q2).rem_euclid(2) != 0 {
            return Err(Error::ParityMismatch {
                j2: m2.abs().max(q2.abs()),
                m2,
                q2,
            });
        }
        Ok(CoeffVector {
            m2,
            q2,
            basis,
            entries: BTreeMap::new(),
        })
    }

    pub fn unit(t: &IndexTriple, basis: Basis) -> Self {
        let mut v = CoeffVector {
            m2: t.m2(),
            q2: t.q2(),
            basis,
            entries: BTreeMap::new(),
        };
        v.entries.insert(t.j2(), Complex64::new(1.0, 0.0));
        v
    }

    pub fn m2(&self) -> i32 {
        self.m2
    }

    pub fn q2(&self) -> i32 {
        self.q2
    }

    pub fn labels(&self) -> (i32, i32) {
        (self.m2, self.q2)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn triple(&self, j2: i32) -> Result<IndexTriple> {
        IndexTriple::new(j2, self.m2, self.q2)
    }

    pub fn set(&mut self, j2: i32, value: Complex64) -> Result<()> {
        self.triple(j2)?;
        self.entries.insert(j2, value);
        Ok(())
    }

    pub fn add(&mut self, j2: i32, value: Complex64) -> Result<()> {
        self.triple(j2)?;
        *self.entries.entry(j2).or_default() += value;
        Ok(())
    }

    pub fn get(&self, j2: i32) -> Complex64 {
        self.entries.get(&j2).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.entries.iter().map(|(&j2, &c)| (j2, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_j2(&self) -> Option<i32> {
        self.entries.keys().next_back().copied()
    }

    /// Re-expresses the same function in the other normalization.
    pub fn to_basis(&self, basis: Basis) -> CoeffVector {
        if basis == self.basis {
            return self.clone();
        }
        let entries = self
            .entries
            .iter()
            .map(|(&j2, &c)| {
                let k = (f64::from(j2 + 1) / 2.0).sqrt();
                // f = sum a_j J_j = sum (a_j / k_j) NJ_j
                let c = if basis == Basis::Najf { c / k } else { c * k };
                (j2, c)
            })
            .collect();
        CoeffVector {
            m2: self.m2,
            q2: self.q2,
            basis,
            entries,
        }
    }

    pub fn to_najf(&self) -> CoeffVector {
        self.to_basis(Basis::Najf)
    }

    pub fn to_ajf(&self) -> CoeffVector {
        self.to_basis(Basis::Ajf)
    }

    pub fn scaled(&self, c: Complex64) -> CoeffVector {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= c;
        }
        out
    }

    /// Evaluates the represented function at `x`.
    pub fn evaluate(&self, x: f64) -> Result<Complex64> {
        let mut acc = Complex64::default();
        for (&j2, &c) in &self.entries {
            acc += c * ajf::evaluate(self.basis, &self.triple(j2)?, x)?;
        }
        Ok(acc)
    }

    /// `sum conj(self_j) other_j`; both vectors must share labels and basis.
    pub fn inner(&self, other: &CoeffVector) -> Result<Complex64> {
        if self.labels() != other.labels() || self.basis != other.basis {
            return Err(Error::LabelMismatch(format!(
                "labels {:?}/{:?} vs {:?}/{:?}",
                self.labels(),
                self.basis,
                other.labels(),
                other.basis
            )));
        }
        Ok(self.iter().map(|(j2, c)| c.conj() * other.get(j2)).sum())
    }
}

/// Coefficients of a function on the three-sphere in the Jacobi harmonics
/// of one sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicState {
    sector: Sector,
    #[serde(with = "triple_map")]
    entries: BTreeMap<IndexTriple, Complex64>,
}

mod triple_map {
    use std::collections::BTreeMap;

    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::lattice::IndexTriple;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        #[serde(flatten)]
        triple: IndexTriple,
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<IndexTriple, Complex64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> = map
            .iter()
            .map(|(t, c)| Entry {
                triple: *t,
                re: c.re,
                im: c.im,
            })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<IndexTriple, Complex64>, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(v.into_iter()
            .map(|e| (e.triple, Complex64::new(e.re, e.im)))
            .collect())
    }
}

impl HarmonicState {
    pub fn new(sector: Sector) -> Self {
        HarmonicState {
            sector,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(t: &IndexTriple) -> Self {
        let mut s = HarmonicState::new(t.sector());
        s.entries.insert(*t, Complex64::new(1.0, 0.0));
        s
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    fn check(&self, t: &IndexTriple) -> Result<()> {
        if t.sector() != self.sector {
            return Err(Error::SectorMismatch(format!(
                "{t} is not in sector {}",
                self.sector
            )));
        }
        Ok(())
    }

    pub fn set(&mut self, t: IndexTriple, value: Complex64) -> Result<()> {
        self.check(&t)?;
        self.entries.insert(t, value);
        Ok(())
    }

    pub fn add(&mut self, t: IndexTriple, value: Complex64) -> Result<()> {
        self.check(&t)?;
        *self.entries.entry(t).or_default() += value;
        Ok(())
    }

    pub fn get(&self, t: &IndexTriple) -> Complex64 {
        self.entries.get(t).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (IndexTriple, Complex64)> + '_ {
        self.entries.iter().map(|(&t, &c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, c: Complex64) -> HarmonicState {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn inner(&self, other: &HarmonicState) -> Result<Complex64> {
        if self.sector != other.sector {
            return Err(Error::SectorMismatch("inner product across sectors".into()));
        }
        Ok(self.iter().map(|(t, c)| c.conj() * other.get(&t)).sum())
    }
}

/// States on which generators act.
pub trait LadderState: Sized + Clone {
    fn apply(&self, g: Generator) -> Result<Self>;

    /// `self += c * other`; fails if the two states are not comparable.
    fn add_scaled(&mut self, other: &Self, c: Complex64) -> Result<()>;

    fn max_abs(&self) -> f64;

    fn sector_hint(&self) -> Option<Sector> {
        None
    }
}

impl LadderState for CoeffVector {
    fn apply(&self, g: Generator) -> Result<Self> {
        let src = self.to_najf();
        let (_, dm, dq) = g.shift();
        let mut out = CoeffVector::new(src.m2 + dm, src.q2 + dq, Basis::Najf)?;
        for (j2, c) in src.iter() {
            let t = src.triple(j2)?;
            if let Some((target, k)) = g.coefficient(&t, Basis::Najf)? {
                out.add(target.j2(), c * k)?;
            }
        }
        Ok(out)
    }

    fn add_scaled(&mut self, other: &Self, c: Complex64) -> Result<()> {
        let other = other.to_basis(self.basis);
        if other.labels() != self.labels() {
            return Err(Error::LabelMismatch(format!(
                "cannot combine labels {:?} and {:?}",
                self.labels(),
                other.labels()
            )));
        }
        for (j2, v) in other.iter() {
            self.add(j2, c * v)?;
        }
        Ok(())
    }

    fn max_abs(&self) -> f64 {
        self.entries.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl LadderState for HarmonicState {
    fn apply(&self, g: Generator) -> Result<Self> {
        let sector = if g.is_half_shift() {
            self.sector.flipped()
        } else {
            self.sector
        };
        let mut out = HarmonicState::new(sector);
        for (t, c) in self.iter() {
            if let Some((target, k)) = g.coefficient(&t, Basis::Najf)? {
                out.add(target, c * k)?;
            }
        }
        Ok(out)
    }

    fn add_scaled(&mut self, other: &Self, c: Complex64) -> Result<()> {
        if other.sector != self.sector {
            return Err(Error::SectorMismatch("cannot combine sectors".into()));
        }
        for (t, v) in other.iter() {
            self.add(t, c * v)?;
        }
        Ok(())
    }

    fn max_abs(&self) -> f64 {
        self.entries.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn sector_hint(&self) -> Option<Sector> {
        Some(self.sector)
    }
}

pub fn apply_generator<S: LadderState>(g: Generator, s: &S) -> Result<S> {
    s.apply(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A product of generator powers, written left to right as an operator
/// product: the rightmost factor acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorWord {
    factors: Vec<(Generator, u32)>,
}

impl OperatorWord {
    pub fn identity() -> Self {
        OperatorWord::default()
    }

    pub fn new(factors: Vec<(Generator, u32)>) -> Self {
        OperatorWord { factors }
    }

    pub fn single(g: Generator) -> Self {
        OperatorWord {
            factors: vec![(g, 1)],
        }
    }

    /// Monomial with the given exponents for the generators in
    /// [`MONOMIAL_ORDER`]; zero exponents are dropped.
    pub fn monomial(exponents: [u32; 15]) -> Self {
        let factors = MONOMIAL_ORDER
            .iter()
            .zip(exponents)
            .filter(|(_, e)| *e > 0)
            .map(|(&g, e)| (g, e))
            .collect();
        OperatorWord { factors }
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn parity(&self) -> Parity {
        word_parity(self)
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for OperatorWord {
    type Err = Error;

    /// Parses words such as `"A+^3 B-^2"` or `"C+D-E+"`.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .collect();
        if chars == ['1'] {
            return Ok(OperatorWord::identity());
        }
        let mut factors = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let mut tag = chars[i].to_string();
            i += 1;
            if i < chars.len() && matches!(chars[i], '+' | '-' | '−' | '3') {
                tag.push(chars[i]);
                i += 1;
            }
            let g: Generator = tag.parse()?;
            let mut power = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                power = digits
                    .parse()
                    .map_err(|_| Error::UnknownKind(format!("bad exponent in {s:?}")))?;
            }
            factors.push((g, power));
        }
        Ok(OperatorWord { factors })
    }
}

pub fn word_parity(w: &OperatorWord) -> Parity {
    let odd: u32 = w
        .factors
        .iter()
        .filter(|(g, _)| g.is_half_shift())
        .map(|(_, e)| e % 2)
        .sum();
    if odd.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Applies a word to a state, rightmost factor first.
pub fn apply_word<S: LadderState>(w: &OperatorWord, s: &S) -> Result<S> {
    let mut cur = s.clone();
    for (g, e) in w.factors.iter().rev() {
        for _ in 0..*e {
            cur = cur.apply(*g)?;
        }
    }
    Ok(cur)
}

/// Max-norm of `([g1, g2] - sum_k c_k w_k) s`.
pub fn commutator_residual<S: LadderState>(
    g1: Generator,
    g2: Generator,
    expected: &[(f64, OperatorWord)],
    s: &S,
) -> Result<f64> {
    let mut r = s.apply(g2)?.apply(g1)?;
    r.add_scaled(&s.apply(g1)?.apply(g2)?, Complex64::new(-1.0, 0.0))?;
    for (c, w) in expected {
        r.add_scaled(&apply_word(w, s)?, Complex64::new(-c, 0.0))?;
    }
    Ok(r.max_abs())
}

/// Returns `(<h, g f>, <g^dagger h, f>)` with the coefficient pairing, where
/// `g^dagger` is [`Generator::adjoint`].
pub fn adjoint_pairing(
    g: Generator,
    f: &CoeffVector,
    h: &CoeffVector,
) -> Result<(Complex64, Complex64)> {
    let f = f.to_najf();
    let h = h.to_najf();
    let (_, dm, dq) = g.shift();
    if h.labels() != (f.m2 + dm, f.q2 + dq) {
        return Err(Error::LabelMismatch(format!(
            "{g} maps labels {:?} to {:?}, but h has {:?}",
            f.labels(),
            (f.m2 + dm, f.q2 + dq),
            h.labels()
        )));
    }
    let lhs = h.inner(&f.apply(g)?)?;
    let rhs = h.apply(g.adjoint())?.inner(&f)?;
    Ok((lhs, rhs))
}
