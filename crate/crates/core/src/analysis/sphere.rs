use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{gauss_legendre, trapezoid, QuadratureRule};
use crate::ajf::{self, angle_ranges, ChiRange};
use crate::algebra::HarmonicState;
use crate::error::{Error, Result};
use crate::lattice::{sector_triples, IndexTriple, Sector};

/// Product quadrature over `(x, phi, chi)` for one sector.
///
/// `x` uses Gauss-Legendre. `phi` always covers a full period and uses the
/// trapezoid rule. `chi` uses the trapezoid rule over a full period, except
/// on the half range `[0, pi]` of the integer sector, where odd Fourier
/// modes are not periodic and Gauss-Legendre is used instead.
#[derive(Clone, Debug, PartialEq)]
pub struct S3Grid {
    pub sector: Sector,
    pub chi_range: ChiRange,
    pub j2max: i32,
    pub x: QuadratureRule,
    pub phi: QuadratureRule,
    pub chi: QuadratureRule,
    /// Measure of the angle box, so that the harmonics have unit norm.
    pub normalization: f64,
}

impl S3Grid {
    pub fn new(sector: Sector, j2max: i32, chi_range: ChiRange) -> S3Grid {
        let j2max = j2max.max(0);
        let (phi_len, chi_len) = angle_ranges(sector, chi_range);
        let modes = 2 * j2max as usize + 3;
        let chi = if sector == Sector::H && chi_range == ChiRange::Half {
            gauss_legendre(2 * j2max as usize + 16).mapped(0.0, PI)
        } else {
            trapezoid(modes, chi_len)
        };
        S3Grid {
            sector,
            chi_range,
            j2max,
            x: gauss_legendre((j2max as usize + 8).max(48)),
            phi: trapezoid(modes, phi_len),
            chi,
            normalization: phi_len * chi_len,
        }
    }

    pub fn triples(&self) -> Vec<IndexTriple> {
        sector_triples(self.sector, self.j2max)
    }

    fn phase_sum(rule: &QuadratureRule, k2: i32) -> Complex64 {
        let k = f64::from(k2) / 2.0;
        rule.iter()
            .map(|(t, w)| Complex64::from_polar(w, k * t))
            .sum()
    }
}

fn basis_values(grid: &S3Grid, triples: &[IndexTriple]) -> Result<Vec<Vec<f64>>> {
    triples
        .iter()
        .map(|t| grid.x.nodes.iter().map(|&x| ajf::najf(t, x)).collect())
        .collect()
}

/// `(1 / normalization) * integral of conj(N_t) f` for every triple.
fn raw_projections(
    grid: &S3Grid,
    triples: &[IndexTriple],
    values: &[Vec<f64>],
    f: impl Fn(f64, f64, f64) -> Complex64,
) -> Vec<Complex64> {
    let (nx, nphi, nchi) = (grid.x.len(), grid.phi.len(), grid.chi.len());
    let mut samples = vec![Complex64::default(); nx * nphi * nchi];
    for (i, &x) in grid.x.nodes.iter().enumerate() {
        for (a, &phi) in grid.phi.nodes.iter().enumerate() {
            for (b, &chi) in grid.chi.nodes.iter().enumerate() {
                samples[(i * nphi + a) * nchi + b] = f(x, phi, chi);
            }
        }
    }

    // phi sums per m, then chi sums per (m, q)
    let mut by_m: HashMap<i32, Vec<Complex64>> = HashMap::new();
    let mut by_mq: HashMap<(i32, i32), Vec<Complex64>> = HashMap::new();
    let mut out = Vec::with_capacity(triples.len());
    for (t, vals) in triples.iter().zip(values) {
        let g = by_m.entry(t.m2()).or_insert_with(|| {
            let m = t.m();
            let phases: Vec<Complex64> = grid
                .phi
                .iter()
                .map(|(p, w)| Complex64::from_polar(w, -m * p))
                .collect();
            let mut g = vec![Complex64::default(); nx * nchi];
            for i in 0..nx {
                for b in 0..nchi {
                    g[i * nchi + b] = (0..nphi)
                        .map(|a| phases[a] * samples[(i * nphi + a) * nchi + b])
                        .sum();
                }
            }
            g
        });
        let h = by_mq.entry((t.m2(), t.q2())).or_insert_with(|| {
            let q = t.q();
            let phases: Vec<Complex64> = grid
                .chi
                .iter()
                .map(|(c, w)| Complex64::from_polar(w, -q * c))
                .collect();
            (0..nx)
                .map(|i| (0..nchi).map(|b| phases[b] * g[i * nchi + b]).sum())
                .collect()
        });
        let acc: Complex64 = grid
            .x
            .weights
            .iter()
            .zip(vals)
            .zip(h.iter())
            .map(|((w, v), hv)| hv * (w * v))
            .sum();
        out.push(acc / grid.normalization);
    }
    out
}

fn grid_gram(grid: &S3Grid, triples: &[IndexTriple], values: &[Vec<f64>]) -> DMatrix<Complex64> {
    let n = triples.len();
    let mut phi_cache: HashMap<i32, Complex64> = HashMap::new();
    let mut chi_cache: HashMap<i32, Complex64> = HashMap::new();
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let (ta, tb) = (&triples[a], &triples[b]);
            let dm = tb.m2() - ta.m2();
            let dq = tb.q2() - ta.q2();
            let pf = *phi_cache
                .entry(dm)
                .or_insert_with(|| S3Grid::phase_sum(&grid.phi, dm));
            let cf = *chi_cache
                .entry(dq)
                .or_insert_with(|| S3Grid::phase_sum(&grid.chi, dq));
            if pf.norm() < 1e-300 || cf.norm() < 1e-300 {
                continue;
            }
            let radial: f64 = grid
                .x
                .weights
                .iter()
                .zip(&values[a])
                .zip(&values[b])
                .map(|((w, u), v)| w * u * v)
                .sum();
            g[(a, b)] = pf * cf * radial / grid.normalization;
        }
    }
    g
}

fn triples_or_err(grid: &S3Grid) -> Result<Vec<IndexTriple>> {
    let t = grid.triples();
    if t.is_empty() {
        return Err(Error::SectorMismatch(format!(
            "sector {} has no triples with j2 <= {}",
            grid.sector, grid.j2max
        )));
    }
    Ok(t)
}

/// Coefficients by direct projection onto each Jacobi harmonic.
pub fn analyze_s3(
    f: impl Fn(f64, f64, f64) -> Complex64,
    sector: Sector,
    j2max: i32,
    chi_range: ChiRange,
) -> Result<HarmonicState> {
    let grid = S3Grid::new(sector, j2max, chi_range);
    let triples = triples_or_err(&grid)?;
    let values = basis_values(&grid, &triples)?;
    let raw = raw_projections(&grid, &triples, &values, f);
    let mut out = HarmonicState::new(sector);
    for (t, c) in triples.into_iter().zip(raw) {
        out.set(t, c)?;
    }
    Ok(out)
}

/// Coefficients by projection followed by a solve against the measured Gram
/// matrix. Agrees with [`analyze_s3`] whenever the harmonics are orthonormal
/// on the chosen range, and still inverts synthesis when they are not.
pub fn analyze_s3_dual(
    f: impl Fn(f64, f64, f64) -> Complex64,
    sector: Sector,
    j2max: i32,
    chi_range: ChiRange,
) -> Result<HarmonicState> {
    let grid = S3Grid::new(sector, j2max, chi_range);
    let triples = triples_or_err(&grid)?;
    let values = basis_values(&grid, &triples)?;
    let raw = raw_projections(&grid, &triples, &values, f);
    let gram = grid_gram(&grid, &triples, &values);
    let rhs = DVector::from_vec(raw);
    let sol = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Domain("singular Gram matrix".into()))?;
    let mut out = HarmonicState::new(sector);
    for (t, c) in triples.into_iter().zip(sol.iter()) {
        out.set(t, *c)?;
    }
    Ok(out)
}

/// Finite sum `sum c N_j^{m,q}(x, phi, chi)`.
pub fn synthesize_s3(s: &HarmonicState, x: f64, phi: f64, chi: f64) -> Result<Complex64> {
    let mut acc = Complex64::default();
    for (t, c) in s.iter() {
        acc += c * ajf::jacobi_harmonic_unchecked(&t, x, phi, chi)?;
    }
    Ok(acc)
}

/// Measured Gram matrix of the Jacobi harmonics of one sector, broken down
/// by block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct S3GramReport {
    pub sector: Sector,
    pub chi_range: ChiRange,
    pub j2max: i32,
    pub size: usize,
    pub max_diagonal_deviation: f64,
    /// Entries with `m != m'`.
    pub max_m_mismatch: f64,
    /// Entries with `(m, q) = (m', q')` and `j != j'`.
    pub max_same_labels: f64,
    /// Entries with `m = m'`, `q != q'` and `q - q'` even.
    pub max_q_even: f64,
    /// Entries with `m = m'` and `q - q'` odd. Measured, not asserted.
    pub max_q_odd: f64,
    /// Largest off-diagonal entry outside the odd-`q` block.
    pub max_offdiagonal_excluding_odd: f64,
    #[serde(skip)]
    pub triples: Vec<IndexTriple>,
    #[serde(skip)]
    pub gram: DMatrix<Complex64>,
}

pub fn s3_gram_check(sector: Sector, j2max: i32, chi_range: ChiRange) -> Result<S3GramReport> {
    let grid = S3Grid::new(sector, j2max, chi_range);
    let triples = triples_or_err(&grid)?;
    let values = basis_values(&grid, &triples)?;
    let gram = grid_gram(&grid, &triples, &values);
    let mut rep = S3GramReport {
        sector,
        chi_range,
        j2max,
        size: triples.len(),
        max_diagonal_deviation: 0.0,
        max_m_mismatch: 0.0,
        max_same_labels: 0.0,
        max_q_even: 0.0,
        max_q_odd: 0.0,
        max_offdiagonal_excluding_odd: 0.0,
        triples: Vec::new(),
        gram: DMatrix::zeros(0, 0),
    };
    for (a, ta) in triples.iter().enumerate() {
        for (b, tb) in triples.iter().enumerate() {
            let v = gram[(a, b)];
            if a == b {
                let dev = (v - Complex64::new(1.0, 0.0)).norm();
                rep.max_diagonal_deviation = rep.max_diagonal_deviation.max(dev);
                continue;
            }
            let mag = v.norm();
            let odd_q = ((ta.q2() - tb.q2()) / 2).rem_euclid(2) == 1;
            if ta.m2() != tb.m2() {
                rep.max_m_mismatch = rep.max_m_mismatch.max(mag);
            } else if ta.q2() == tb.q2() {
                rep.max_same_labels = rep.max_same_labels.max(mag);
            } else if odd_q {
                rep.max_q_odd = rep.max_q_odd.max(mag);
            } else {
                rep.max_q_even = rep.max_q_even.max(mag);
            }
            if !(ta.m2() == tb.m2() && odd_q) {
                rep.max_offdiagonal_excluding_odd = rep.max_offdiagonal_excluding_odd.max(mag);
            }
        }
    }
    rep.triples = triples;
    rep.gram = gram;
    Ok(rep)
}
