//! Verification suites. Each suite runs the invariants of one library
//! module; the individual checks are public so other harnesses can run them
//! with their own ranges.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use clap::ValueEnum;
use jacobi_core::ajf::{self, Basis, ChiRange};
use jacobi_core::algebra::{
    adjoint_pairing, apply_word, commutator_residual, word_parity, CoeffVector, Generator,
    HarmonicState, LadderState, OperatorWord, Parity, ALL_GENERATORS,
};
use jacobi_core::analysis::{
    analyze_interval, analyze_s3, analyze_s3_dual, completeness_projector_check, gauss_legendre,
    gram_matrix, projected_action, s3_gram_check, seminorm_bound_check, synthesize_s3, ALL_BOUNDS,
};
use jacobi_core::lattice::{family_j2, from_classic, sector_triples, triples_up_to, IndexTriple};
use jacobi_core::multiplication::{
    check_grid, combined_phase_factor, combined_phase_mult, contiguous_residuals,
    discrepancy_ledger, mult_coeffs, mult_x_down, mult_x_up, project_x, Branch, Variant,
};
use jacobi_core::{Result, Sector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{Recorder, ReportBundle, VerificationReport, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lattice,
    Ajf,
    Ladder,
    Adjoint,
    Mult,
    Ortho,
    Seminorm,
    S3,
    Parity,
    All,
}

pub const SINGLE_SUITES: [Suite; 9] = [
    Suite::Lattice,
    Suite::Ajf,
    Suite::Ladder,
    Suite::Adjoint,
    Suite::Mult,
    Suite::Ortho,
    Suite::Seminorm,
    Suite::S3,
    Suite::Parity,
];

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

impl Suite {
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Mult | Suite::Ortho | Suite::S3 => 1e-10,
            _ => 1e-12,
        }
    }

    /// Default upper bound on `2j`.
    pub fn default_j2max(self) -> i32 {
        match self {
            Suite::Lattice => 12,
            Suite::Ajf => 30,
            Suite::S3 => 8,
            Suite::Seminorm => 12,
            _ => 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub j2max: Option<i32>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub sector: Option<Sector>,
    pub variant: Variant,
    pub chi_range: Option<ChiRange>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            j2max: None,
            tol: None,
            seed: 42,
            sector: None,
            variant: Variant::Corrected,
            chi_range: None,
        }
    }
}

/// Independent random stream per check.
pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn sectors(cfg: &SuiteConfig) -> Vec<Sector> {
    cfg.sector.map_or(vec![Sector::H, Sector::F], |s| vec![s])
}

fn chi_ranges(cfg: &SuiteConfig) -> Vec<ChiRange> {
    cfg.chi_range
        .map_or(vec![ChiRange::Half, ChiRange::Full], |c| vec![c])
}

fn label(r: ChiRange) -> String {
    r.to_string()
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    if suite == Suite::All {
        return SINGLE_SUITES.iter().map(|&s| run_single(s, cfg)).collect();
    }
    Ok(vec![run_single(suite, cfg)?])
}

pub fn bundle(reports: Vec<VerificationReport>) -> ReportBundle {
    ReportBundle {
        schema_version: SCHEMA_VERSION,
        passed: reports.iter().all(|r| r.passed),
        reports,
    }
}

pub fn run_single(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let tol = cfg.tol.unwrap_or(suite.default_tolerance());
    let j2max = cfg.j2max.unwrap_or(suite.default_j2max());
    let mut rec = Recorder::new(tol);
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    params.insert("jmax".into(), json!(f64::from(j2max) / 2.0));
    params.insert("j2max".into(), json!(j2max));
    params.insert("tolerance_overridden".into(), json!(cfg.tol.is_some()));
    let seed = cfg.seed;
    match suite {
        Suite::Lattice => {
            check_canonical_reflection(&mut rec, j2max)?;
            check_swap_symmetry(&mut rec, j2max)?;
            check_classic_round_trip(&mut rec, &mut stream(seed, 1), 1000, j2max.max(2))?;
            check_validation(&mut rec, j2max)?;
            params.insert("grid_points".into(), json!(101));
            params.insert("classic_samples".into(), json!(1000));
        }
        Suite::Ajf => {
            check_oracle(&mut rec, j2max, 21)?;
            check_legendre(&mut rec, 10)?;
            check_quasi_polynomial(&mut rec, j2max.min(20))?;
            check_ode(&mut rec, j2max.min(20))?;
            check_symmetries(&mut rec, &mut stream(seed, 2), 1000, j2max)?;
            check_bounds(&mut rec, &mut stream(seed, 3), 10_000, 80)?;
            params.insert("ode_j2max".into(), json!(j2max.min(20)));
            params.insert("bound_j2max".into(), json!(80));
            params.insert("bound_samples".into(), json!(10_000));
        }
        Suite::Ladder => {
            check_su11(&mut rec, j2max)?;
            check_su2(&mut rec, j2max)?;
            check_casimir(&mut rec, j2max)?;
            check_k_q_independence(&mut rec, j2max)?;
            check_edge_annihilation(&mut rec, j2max)?;
            check_function_space(&mut rec, j2max)?;
        }
        Suite::Adjoint => {
            check_adjoint(&mut rec, j2max)?;
        }
        Suite::Mult => {
            params.insert("variant".into(), json!(cfg.variant));
            check_mult_pointwise(&mut rec, j2max, cfg.variant)?;
            check_stencil_locality(&mut rec, j2max)?;
            check_contiguous(&mut rec, 8, 4)?;
            check_combined(&mut rec, &mut stream(seed, 4), j2max.min(8), 20)?;
            rec.add_discrepancies(discrepancy_ledger(j2max)?);
        }
        Suite::Ortho => {
            check_gram_identity(&mut rec, 8, 16)?;
            check_parseval(&mut rec, &mut stream(seed, 5), j2max)?;
            check_transition(&mut rec, j2max)?;
            measure_projector(&mut rec, j2max)?;
        }
        Suite::Seminorm => {
            check_seminorms(&mut rec, seed, 100, j2max)?;
            params.insert("states".into(), json!(100));
        }
        Suite::S3 => {
            let secs = sectors(cfg);
            let ranges = chi_ranges(cfg);
            params.insert(
                "sectors".into(),
                json!(secs.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            );
            params.insert(
                "chi_ranges".into(),
                json!(ranges.iter().map(|&r| label(r)).collect::<Vec<_>>()),
            );
            check_s3_gram(&mut rec, &secs, &ranges, j2max)?;
            check_s3_round_trip(&mut rec, &mut stream(seed, 6), &secs, &ranges, j2max)?;
        }
        Suite::Parity => {
            check_parity(&mut rec, &mut stream(seed, 7), 200)?;
            params.insert("words".into(), json!(200));
        }
        Suite::All => unreachable!("expanded by run"),
    }
    let ms = start.elapsed().as_millis() as u64;
    Ok(rec.finish(&suite.to_string(), params, seed, ms))
}

fn grid(n: usize) -> Vec<f64> {
    check_grid(n)
}

fn interior_grid(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| -1.0 + 2.0 * k as f64 / (n as f64 + 1.0))
        .collect()
}

fn exact(t: &IndexTriple, x: f64) -> f64 {
    jacobi_reference::ajf(t.j2(), t.m2(), t.q2(), x)
}

fn random_triple(rng: &mut impl Rng, j2max: i32) -> IndexTriple {
    let j2 = rng.random_range(0..=j2max);
    let m2 = 2 * rng.random_range(0..=j2) - j2;
    let q2 = 2 * rng.random_range(0..=j2) - j2;
    IndexTriple::new(j2, m2, q2).expect("constructed in range")
}

/// Compares two sampled functions relative to the largest `|rhs|` on the grid.
fn compare_scaled(rec: &mut Recorder, t: &IndexTriple, xs: &[f64], lhs: &[f64], rhs: &[f64]) {
    let scale = rhs
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for ((x, l), r) in xs.iter().zip(lhs).zip(rhs) {
        rec.record(|| format!("{t} x={x}"), *l, *r, (l - r).abs() / scale);
    }
}

// lattice

pub fn check_canonical_reflection(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("canonical-reflection", 1.0);
    let xs = grid(101);
    for t in triples_up_to(j2max) {
        let c = t.canonicalize();
        let direct: Vec<f64> = xs.iter().map(|&x| exact(&t, x)).collect();
        let via: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let y = if c.reflect_x { -x } else { x };
                f64::from(c.sign) * exact(&c.canonical, y)
            })
            .collect();
        compare_scaled(rec, &t, &xs, &direct, &via);
    }
    Ok(())
}

pub fn check_swap_symmetry(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("swap-symmetry", 1.0);
    let xs = grid(101);
    for t in triples_up_to(j2max).into_iter().filter(|t| t.m2() > t.q2()) {
        let s = IndexTriple::new(t.j2(), t.q2(), t.m2())?;
        let a: Vec<f64> = xs.iter().map(|&x| ajf::ajf(&t, x)).collect::<Result<_>>()?;
        let b: Vec<f64> = xs.iter().map(|&x| exact(&s, x)).collect();
        compare_scaled(rec, &t, &xs, &a, &b);
    }
    Ok(())
}

pub fn check_classic_round_trip(
    rec: &mut Recorder,
    rng: &mut impl Rng,
    samples: usize,
    j2max: i32,
) -> Result<()> {
    rec.begin("classic-round-trip", 1.0);
    for _ in 0..samples {
        let t = random_triple(rng, j2max);
        let p = t.to_classic();
        let back = from_classic(i64::from(p.n), p.alpha, p.beta);
        rec.require(|| format!("{t} via {p:?}"), back.ok() == Some(t));
    }
    Ok(())
}

pub fn check_validation(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("triple-validation", 1.0);
    for j2 in -1..=j2max + 1 {
        for m2 in -j2max - 2..=j2max + 2 {
            for q2 in -j2max - 2..=j2max + 2 {
                let valid = j2 >= 0
                    && m2.abs() <= j2
                    && q2.abs() <= j2
                    && (j2 - m2) % 2 == 0
                    && (j2 - q2) % 2 == 0;
                let got = IndexTriple::new(j2, m2, q2);
                rec.require(|| format!("({j2}, {m2}, {q2})"), got.is_ok() == valid);
                if let Ok(t) = got {
                    let text = serde_json::to_string(&t).expect("triple serializes");
                    let back: std::result::Result<IndexTriple, _> = serde_json::from_str(&text);
                    rec.require(|| format!("{t} serde"), back.ok() == Some(t));
                }
            }
        }
    }
    Ok(())
}

// ajf

pub fn check_oracle(rec: &mut Recorder, j2max: i32, points: usize) -> Result<()> {
    rec.begin("oracle-equivalence", 1.0);
    let xs = grid(points);
    for t in triples_up_to(j2max) {
        let a: Vec<f64> = xs.iter().map(|&x| ajf::ajf(&t, x)).collect::<Result<_>>()?;
        let o: Vec<f64> = xs.iter().map(|&x| exact(&t, x)).collect();
        compare_scaled(rec, &t, &xs, &a, &o);
    }
    Ok(())
}

pub fn check_legendre(rec: &mut Recorder, lmax: u32) -> Result<()> {
    let scale = 1e-10 / rec.tolerance();
    rec.begin("legendre", scale);
    for l in 0..=lmax {
        for x in grid(21) {
            let t = IndexTriple::new(2 * l as i32, 0, 0)?;
            rec.compare(
                || format!("{t} x={x}"),
                ajf::ajf(&t, x)?,
                jacobi_reference::legendre(l, x),
            );
            for m in 1..=l {
                let t = IndexTriple::new(2 * l as i32, 2 * m as i32, 0)?;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let norm = (jacobi_reference::factorial_f64(l + m)
                    / jacobi_reference::factorial_f64(l - m))
                .sqrt();
                let lhs = sign * norm * ajf::ajf(&t, x)?;
                let rhs = jacobi_reference::assoc_legendre(l, m, x);
                let scale = 1.0 + rhs.abs();
                rec.record(|| format!("{t} x={x}"), lhs, rhs, (lhs - rhs).abs() / scale);
            }
        }
    }
    Ok(())
}

/// Barycentric interpolation through the Chebyshev points of the first kind.
fn chebyshev_interpolant(f: impl Fn(f64) -> f64, degree: usize) -> impl Fn(f64) -> f64 {
    let n = degree + 1;
    let nodes: Vec<(f64, f64, f64)> = (0..n)
        .map(|k| {
            let th = (2 * k + 1) as f64 * PI / (2 * n) as f64;
            let w = if k % 2 == 0 { th.sin() } else { -th.sin() };
            (th.cos(), w, f(th.cos()))
        })
        .collect();
    move |x| {
        let (mut num, mut den) = (0.0, 0.0);
        for &(xk, w, fk) in &nodes {
            if x == xk {
                return fk;
            }
            let c = w / (x - xk);
            num += c * fk;
            den += c;
        }
        num / den
    }
}

/// Integer triples: a polynomial of degree `j` when `m - q` is even, and
/// `sqrt(1 - x^2)` times one of degree `j - 1` otherwise.
pub fn check_quasi_polynomial(rec: &mut Recorder, j2max: i32) -> Result<()> {
    let scale = 1e-10 / rec.tolerance();
    rec.begin("quasi-polynomial", scale);
    for t in triples_up_to(j2max).into_iter().filter(|t| t.j2() % 2 == 0) {
        let j = (t.j2() / 2) as usize;
        let even = ((t.m2() - t.q2()) / 2) % 2 == 0;
        let reduced = |x: f64| {
            let v = ajf::ajf(&t, x).expect("x in range");
            if even {
                v
            } else {
                v / ((1.0 - x) * (1.0 + x)).sqrt()
            }
        };
        let degree = if even { j } else { j - 1 };
        let p = chebyshev_interpolant(reduced, degree);
        let xs = interior_grid(21);
        let a: Vec<f64> = xs.iter().map(|&x| p(x)).collect();
        let b: Vec<f64> = xs.iter().map(|&x| reduced(x)).collect();
        compare_scaled(rec, &t, &xs, &a, &b);
    }
    Ok(())
}

pub fn check_ode(rec: &mut Recorder, j2max: i32) -> Result<()> {
    let scale = 1e-8 / rec.tolerance();
    rec.begin("ode-residual", scale);
    for t in triples_up_to(j2max) {
        let j = t.j();
        for x in interior_grid(99) {
            let r = ajf::ode_residual(&t, x)?;
            let v = ajf::ajf(&t, x)?;
            rec.record(
                || format!("{t} x={x}"),
                r,
                0.0,
                r.abs() / (1.0 + v.abs() * j * j),
            );
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
enum Symmetry {
    Swap,
    Negate,
    Reflect,
}

/// Applies the symmetries left to right to `(sign, m2, q2, x)`, returning
/// the data of an equal value `sign * J(m2', q2', x')`.
fn apply_symmetries(j2: i32, m2: i32, q2: i32, x: f64, ops: &[Symmetry]) -> (f64, i32, i32, f64) {
    let parity = |k: i32| if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let (mut sign, mut m2, mut q2, mut x) = (1.0, m2, q2, x);
    for op in ops {
        match op {
            Symmetry::Swap => (m2, q2) = (q2, m2),
            Symmetry::Negate => {
                sign *= parity((m2 + q2) / 2);
                (m2, q2) = (-m2, -q2);
            }
            Symmetry::Reflect => {
                sign *= parity((j2 - m2) / 2);
                q2 = -q2;
                x = -x;
            }
        }
    }
    (sign, m2, q2, x)
}

/// The three basic symmetries and all their compositions of length up to
/// three on random `(triple, x)` samples.
pub fn check_symmetries(
    rec: &mut Recorder,
    rng: &mut impl Rng,
    samples: usize,
    j2max: i32,
) -> Result<()> {
    use Symmetry::*;
    rec.begin("symmetries", 1.0);
    let basic = [Swap, Negate, Reflect];
    let mut words: Vec<Vec<Symmetry>> = basic.iter().map(|&a| vec![a]).collect();
    for len in 2..=3 {
        let prev: Vec<Vec<Symmetry>> = words
            .iter()
            .filter(|w| w.len() == len - 1)
            .cloned()
            .collect();
        for w in prev {
            for b in basic {
                let mut v = w.clone();
                v.push(b);
                words.push(v);
            }
        }
    }
    for _ in 0..samples {
        let t = random_triple(rng, j2max);
        let x: f64 = rng.random_range(-1.0..=1.0);
        let v = ajf::ajf(&t, x)?;
        let scale = 1.0 + v.abs();
        for w in &words {
            let (sign, m2, q2, y) = apply_symmetries(t.j2(), t.m2(), t.q2(), x, w);
            let image = sign * ajf::ajf(&IndexTriple::new(t.j2(), m2, q2)?, y)?;
            rec.record(
                || format!("{w:?} {t} x={x}"),
                image,
                v,
                (image - v).abs() / scale,
            );
        }
    }
    Ok(())
}

pub fn check_bounds(
    rec: &mut Recorder,
    rng: &mut impl Rng,
    samples: usize,
    j2max: i32,
) -> Result<()> {
    rec.begin("uniform-bounds", 1.0);
    for _ in 0..samples {
        let t = random_triple(rng, j2max);
        let x: f64 = rng.random_range(-1.0..=1.0);
        let report = ajf::bound_check(&t, x, 0.0)?;
        for e in report.entries {
            let excess = (e.lhs - e.bound).max(0.0) / e.bound;
            rec.record(|| format!("{} {t} x={x}", e.name), e.lhs, e.bound, excess);
        }
    }
    Ok(())
}

// ladder

fn unit(t: &IndexTriple) -> CoeffVector {
    CoeffVector::unit(t, Basis::Najf)
}

pub fn check_su11(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("su11-commutators", 1.0);
    let single = OperatorWord::single;
    let cases = [
        (
            Generator::KPlus,
            Generator::KMinus,
            vec![(-2.0, single(Generator::K3))],
        ),
        (
            Generator::K3,
            Generator::KPlus,
            vec![(1.0, single(Generator::KPlus))],
        ),
        (
            Generator::K3,
            Generator::KMinus,
            vec![(-1.0, single(Generator::KMinus))],
        ),
        (Generator::M, Generator::Q, vec![]),
    ];
    for t in triples_up_to(j2max) {
        for (a, b, expected) in &cases {
            let r = commutator_residual(*a, *b, expected, &unit(&t))?;
            rec.record(|| format!("[{a},{b}] on {t}"), r, 0.0, r);
        }
    }
    Ok(())
}

pub fn check_su2(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("su2-closure", 1.0);
    for t in triples_up_to(j2max) {
        for (a, b, d) in [
            (Generator::APlus, Generator::AMinus, Generator::M),
            (Generator::BPlus, Generator::BMinus, Generator::Q),
        ] {
            let r = commutator_residual(a, b, &[(2.0, OperatorWord::single(d))], &unit(&t))?;
            rec.record(|| format!("[{a},{b}] on {t}"), r, 0.0, r);
        }
    }
    Ok(())
}

pub fn check_casimir(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("casimir", 1.0);
    let minus_one = Complex64::new(-1.0, 0.0);
    for t in triples_up_to(j2max)
        .into_iter()
        .filter(|t| t.m2().abs() >= t.q2().abs())
    {
        let s = unit(&t);
        let k3 = s.apply(Generator::K3)?;
        let mut c = k3.apply(Generator::K3)?;
        c.add_scaled(&k3, minus_one)?;
        c.add_scaled(
            &s.apply(Generator::KMinus)?.apply(Generator::KPlus)?,
            minus_one,
        )?;
        let ev = t.m() * t.m() - 0.25;
        let got = c.get(t.j2()).re;
        c.add_scaled(&s, Complex64::new(-ev, 0.0))?;
        rec.record(|| format!("{t}"), got, ev, c.max_abs());
    }
    Ok(())
}

/// K+- coefficients on `(j, m, q)` and `(j, m, q')` agree for
/// `|q|, |q'| <= |m|`, and symmetrically with the roles of m and q swapped.
pub fn check_k_q_independence(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("k-q-independence", 1.0);
    for t in triples_up_to(j2max) {
        let (m2, q2) = (t.m2(), t.q2());
        let swapped = q2.abs() > m2.abs();
        let (fixed, free) = if swapped { (q2, m2) } else { (m2, q2) };
        for other in (-fixed.abs()..=fixed.abs()).step_by(2) {
            if other == free {
                continue;
            }
            let u = if swapped {
                IndexTriple::new(t.j2(), other, q2)?
            } else {
                IndexTriple::new(t.j2(), m2, other)?
            };
            for g in [Generator::KPlus, Generator::KMinus] {
                let a = g.coefficient(&t, Basis::Najf)?.map_or(0.0, |p| p.1);
                let b = g.coefficient(&u, Basis::Najf)?.map_or(0.0, |p| p.1);
                rec.compare(|| format!("{g} on {t} vs {u}"), a, b);
            }
        }
    }
    Ok(())
}

pub fn check_edge_annihilation(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("edge-annihilation", 1.0);
    for t in triples_up_to(j2max + 2) {
        for g in ALL_GENERATORS {
            for basis in [Basis::Ajf, Basis::Najf] {
                let ok = g.coefficient(&t, basis).is_ok();
                rec.require(|| format!("{g} on {t}"), ok);
            }
        }
    }
    Ok(())
}

/// Every generator's coefficients against quadrature projection of its
/// function-space action, including the zero projections off the target.
pub fn check_function_space(rec: &mut Recorder, j2max: i32) -> Result<()> {
    let scale = 1e-10 / rec.tolerance();
    rec.begin("function-space-consistency", scale);
    for t in triples_up_to(j2max) {
        for g in ALL_GENERATORS {
            let (_, dm, dq) = g.shift();
            let (m2, q2) = (t.m2() + dm, t.q2() + dq);
            let Ok(js) = family_j2(m2, q2, j2max) else {
                continue;
            };
            let expected = g.coefficient(&t, Basis::Najf)?;
            for j2 in js {
                let target = IndexTriple::new(j2, m2, q2)?;
                let got = projected_action(g, &t, &target)?;
                let want = match expected {
                    Some((tt, c)) if tt == target => c,
                    _ => 0.0,
                };
                rec.compare(|| format!("<{target}, {g} {t}>"), got, want);
            }
        }
    }
    Ok(())
}

// adjoint

/// `<h, g f> = <g^dagger h, f>` for all basis pairs in the orthonormal
/// pairing. The pairing of AJF-basis coefficients is measured alongside.
pub fn check_adjoint(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("adjoint-pairing", 1.0);
    let mut ajf_worst: f64 = 0.0;
    let mut worst_by_generator: BTreeMap<String, f64> = BTreeMap::new();
    for f in triples_up_to(j2max) {
        for g in ALL_GENERATORS {
            let Some((h, _)) = g.coefficient(&f, Basis::Najf)? else {
                continue;
            };
            let (lhs, rhs) = adjoint_pairing(g, &unit(&f), &unit(&h))?;
            let r = (lhs - rhs).norm() / (1.0 + lhs.norm());
            rec.record(|| format!("{g}: <{h}, {g} {f}>"), lhs.re, rhs.re, r);
            let w = worst_by_generator.entry(g.to_string()).or_default();
            *w = w.max(r);
            let a = g.coefficient(&f, Basis::Ajf)?.map_or(0.0, |p| p.1);
            let b = g
                .adjoint()
                .coefficient(&h, Basis::Ajf)?
                .map_or(0.0, |p| p.1);
            ajf_worst = ajf_worst.max((a - b).abs() / (1.0 + a.abs()));
        }
    }
    rec.measure("ajf_coefficient_pairing_max_residual", ajf_worst);
    rec.measure(
        "orthonormal_pairing_max_residual_by_generator",
        worst_by_generator,
    );
    Ok(())
}

// multiplication

pub fn check_mult_pointwise(rec: &mut Recorder, j2max: i32, variant: Variant) -> Result<()> {
    let scale = 1e-10 / rec.tolerance();
    rec.begin("mult-pointwise", scale);
    let xs = grid(21);
    for t in triples_up_to(j2max) {
        let mc = mult_coeffs(&t, variant)?;
        for b in [Branch::Down, Branch::Up] {
            let dq2 = match b {
                Branch::Down => -2,
                Branch::Up => 2,
            };
            let coeffs = mc.branch(b);
            for &x in &xs {
                let f = ajf::ajf(&t, x)?;
                let mut rhs = b.diagonal() * f;
                let mut invalid = false;
                for (dj, c) in [-2, 0, 2].into_iter().zip(coeffs) {
                    match t.shifted(dj, -2, dq2) {
                        Ok(tt) => rhs += c * ajf::ajf(&tt, x)?,
                        Err(_) => invalid |= c != 0.0,
                    }
                }
                let r = if invalid {
                    f64::INFINITY
                } else {
                    (x * f - rhs).abs()
                };
                rec.record(|| format!("{b:?} {t} x={x}"), x * f, rhs, r);
            }
        }
    }
    Ok(())
}

pub fn check_stencil_locality(rec: &mut Recorder, j2max: i32) -> Result<()> {
    let scale = 1e-12 / rec.tolerance();
    rec.begin("stencil-locality", scale);
    for t in triples_up_to(j2max) {
        for b in [Branch::Down, Branch::Up] {
            let p = project_x(&t, b)?;
            rec.record(|| format!("{b:?} {t}"), p.off_stencil, 0.0, p.off_stencil);
        }
    }
    Ok(())
}

pub fn check_contiguous(rec: &mut Recorder, nmax: u32, abmax: i32) -> Result<()> {
    let scale = 1e-10 / rec.tolerance();
    rec.begin("contiguous-relations", scale);
    for n in 0..=nmax {
        for a in 0..=abmax {
            for b in 0..=abmax {
                for x in grid(21) {
                    let (l, u) = contiguous_residuals(n, a, b, x);
                    rec.record(|| format!("n={n} a={a} b={b} x={x} (1-x)"), l, 0.0, l);
                    rec.record(|| format!("n={n} a={a} b={b} x={x} (1+x)"), u, 0.0, u);
                }
            }
        }
    }
    Ok(())
}

fn random_state(rng: &mut impl Rng, sector: Sector, j2max: i32) -> HarmonicState {
    let mut s = HarmonicState::new(sector);
    for t in sector_triples(sector, j2max) {
        if rng.random_bool(0.5) {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            s.set(t, c).expect("sector triples match");
        }
    }
    s
}

/// The combined operator against the half-difference of the two branches
/// and against pointwise multiplication of the synthesized function.
pub fn check_combined(
    rec: &mut Recorder,
    rng: &mut impl Rng,
    j2max: i32,
    states: usize,
) -> Result<()> {
    let scale = 1e-10 / rec.tolerance();
    rec.begin("combined-operator", scale);
    for k in 0..states {
        let sector = if k % 2 == 0 { Sector::H } else { Sector::F };
        let s = random_state(rng, sector, j2max);
        let out = combined_phase_mult(&s)?;

        let mut half = HarmonicState::new(sector);
        for (t, amp) in s.iter() {
            let v = unit(&t);
            for (img, sign) in [(mult_x_down(&v)?, -0.5), (mult_x_up(&v)?, 0.5)] {
                for (j2, c) in img.shifted.iter() {
                    half.add(img.shifted.triple(j2)?, amp * c * sign)?;
                }
            }
        }
        for t in sector_triples(sector, j2max + 2) {
            let (a, b) = (out.get(&t), half.get(&t));
            rec.record(
                || format!("state {k} {t} half-sum"),
                a.re,
                b.re,
                (a - b).norm(),
            );
        }
        for _ in 0..10 {
            let x = rng.random_range(-1.0..=1.0);
            let phi = rng.random_range(0.0..4.0 * PI);
            let chi = rng.random_range(0.0..4.0 * PI);
            let lhs = combined_phase_factor(x, phi, chi) * synthesize_s3(&s, x, phi, chi)?;
            let rhs = synthesize_s3(&out, x, phi, chi)?;
            rec.record(
                || format!("state {k} ({x}, {phi}, {chi}) pointwise"),
                lhs.re,
                rhs.re,
                (lhs - rhs).norm(),
            );
        }
    }
    Ok(())
}

// analysis

/// Gram matrices of all families with `|m2|, |q2| <= label2` and
/// `j2max = max(|m2|, |q2|) + extra2`.
pub fn check_gram_identity(rec: &mut Recorder, label2: i32, extra2: i32) -> Result<()> {
    rec.begin("gram-identity", 1.0);
    for m2 in -label2..=label2 {
        for q2 in -label2..=label2 {
            if (m2 - q2) % 2 != 0 {
                continue;
            }
            let j2max = m2.abs().max(q2.abs()) + extra2;
            let g = gram_matrix(m2, q2, j2max, Basis::Najf)?;
            for a in 0..g.nrows() {
                for b in 0..g.ncols() {
                    let want = if a == b { 1.0 } else { 0.0 };
                    rec.compare(|| format!("({m2}, {q2}) [{a}, {b}]"), g[(a, b)], want);
                }
            }
        }
    }
    Ok(())
}

fn families(j2max: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for m2 in -j2max..=j2max {
        for q2 in -j2max..=j2max {
            if (m2 - q2) % 2 == 0 && m2.abs() <= 4 && q2.abs() <= 4 {
                out.push((m2, q2));
            }
        }
    }
    out
}

pub fn check_parseval(rec: &mut Recorder, rng: &mut impl Rng, j2max: i32) -> Result<()> {
    rec.begin("parseval", 1.0);
    for (m2, q2) in families(j2max) {
        let Ok(js) = family_j2(m2, q2, j2max) else {
            continue;
        };
        let mut c = CoeffVector::new(m2, q2, Basis::Najf)?;
        for &j2 in &js {
            c.set(j2, Complex64::new(rng.random_range(-1.0..1.0), 0.0))?;
        }
        let rule = gauss_legendre(j2max as usize + 16);
        let samples: Vec<f64> = rule
            .nodes
            .iter()
            .map(|&x| Ok(c.evaluate(x)?.re))
            .collect::<Result<_>>()?;
        let l2: f64 = rule
            .weights
            .iter()
            .zip(&samples)
            .map(|(w, f)| w * f * f)
            .sum();
        let back = analyze_interval(|x| c.evaluate(x).expect("x in range").re, m2, q2, j2max)?;
        let coeff_l2 = back.inner(&back)?.re;
        rec.record(
            || format!("({m2}, {q2})"),
            coeff_l2,
            l2,
            (coeff_l2 - l2).abs() / (1.0 + l2),
        );
    }
    Ok(())
}

/// Analysis after synthesis of each basis vector returns that vector.
pub fn check_transition(rec: &mut Recorder, j2max: i32) -> Result<()> {
    rec.begin("transition-matrix", 1.0);
    for (m2, q2) in families(j2max) {
        let Ok(js) = family_j2(m2, q2, j2max) else {
            continue;
        };
        for &j2 in &js {
            let t = IndexTriple::new(j2, m2, q2)?;
            let e = unit(&t);
            let back = analyze_interval(|x| e.evaluate(x).expect("x in range").re, m2, q2, j2max)?;
            for &k in &js {
                let want = if k == j2 { 1.0 } else { 0.0 };
                rec.compare(|| format!("{t} -> j2={k}"), back.get(k).re, want);
            }
        }
    }
    Ok(())
}

pub fn measure_projector(rec: &mut Recorder, j2max: i32) -> Result<()> {
    let smooth = |x: f64| (1.0 - x * x).sqrt() * x.exp();
    let check = completeness_projector_check(1, 1, j2max.max(1) | 1, smooth)?;
    rec.measure("projector_smooth_function", check);
    Ok(())
}

pub fn check_seminorms(rec: &mut Recorder, seed: u64, states: usize, j2max: i32) -> Result<()> {
    rec.begin("seminorm-bounds", 1.0);
    let mut rng = stream(seed, 8);
    for k in 0..states {
        let sector = if k % 2 == 0 { Sector::H } else { Sector::F };
        let mut s = HarmonicState::new(sector);
        for t in sector_triples(sector, j2max) {
            if rng.random_bool(0.3) {
                let scale = rng.random_range(-3.0..0.0f64).exp();
                let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                s.set(t, c * scale)?;
            }
        }
        for r in 0..3 {
            for q in 0..3 {
                for kind in ALL_BOUNDS {
                    let b = seminorm_bound_check(kind, &s, r, q)?;
                    rec.record(
                        || format!("state {k} {kind} r={r} s={q}"),
                        b.lhs,
                        b.rhs,
                        (-b.slack).max(0.0),
                    );
                }
            }
        }
    }
    Ok(())
}

pub fn check_s3_gram(
    rec: &mut Recorder,
    sectors: &[Sector],
    ranges: &[ChiRange],
    j2max: i32,
) -> Result<()> {
    let mut odd = BTreeMap::new();
    let mut reports = Vec::new();
    for &sector in sectors {
        let j2 = if sector == Sector::F && j2max % 2 == 0 {
            j2max - 1
        } else {
            j2max
        };
        for &range in ranges {
            let r = s3_gram_check(sector, j2, range)?;
            odd.insert(format!("{sector}-{}", label(range)), r.max_q_odd);
            reports.push(r);
        }
    }
    rec.begin("s3-diagonal-normalization", 1.0);
    for r in &reports {
        rec.record(
            || format!("{} {}", r.sector, label(r.chi_range)),
            1.0 + r.max_diagonal_deviation,
            1.0,
            r.max_diagonal_deviation,
        );
    }
    rec.begin("s3-offdiagonal-excluding-odd-q", 1.0);
    for r in &reports {
        let v = r.max_offdiagonal_excluding_odd;
        rec.record(|| format!("{} {}", r.sector, label(r.chi_range)), v, 0.0, v);
    }
    rec.measure("odd_q_block_max", odd);
    rec.measure("gram_reports", &reports);
    Ok(())
}

pub fn check_s3_round_trip(
    rec: &mut Recorder,
    rng: &mut impl Rng,
    sectors: &[Sector],
    ranges: &[ChiRange],
    j2max: i32,
) -> Result<()> {
    let scale = 1e-8 / rec.tolerance();
    rec.begin("s3-round-trip", scale);
    for &sector in sectors {
        let j2 = if sector == Sector::F && j2max % 2 == 0 {
            j2max - 1
        } else {
            j2max
        };
        for &range in ranges {
            let s = random_state(rng, sector, j2);
            let f = |x, p, c| synthesize_s3(&s, x, p, c).expect("x in range");
            // on the half chi range of the integer sector the odd-q harmonics
            // are not orthogonal, so analysis goes through the Gram matrix
            let back = if sector == Sector::H && range == ChiRange::Half {
                analyze_s3_dual(f, sector, j2, range)?
            } else {
                analyze_s3(f, sector, j2, range)?
            };
            for t in sector_triples(sector, j2) {
                let (a, b) = (back.get(&t), s.get(&t));
                rec.record(
                    || format!("{sector} {} {t}", label(range)),
                    a.re,
                    b.re,
                    (a - b).norm(),
                );
            }
        }
    }
    Ok(())
}

pub fn random_word(rng: &mut impl Rng) -> OperatorWord {
    let len = rng.random_range(0..=6);
    let factors = (0..len)
        .map(|_| {
            let g = ALL_GENERATORS[rng.random_range(0..ALL_GENERATORS.len())];
            (g, rng.random_range(0..=3))
        })
        .collect();
    OperatorWord::new(factors)
}

pub fn check_parity(rec: &mut Recorder, rng: &mut impl Rng, words: usize) -> Result<()> {
    rec.begin("sector-parity", 1.0);
    for _ in 0..words {
        let w = random_word(rng);
        let j2 = rng.random_range(0..=6);
        let m2 = 2 * rng.random_range(0..=j2) - j2;
        let q2 = 2 * rng.random_range(0..=j2) - j2;
        let s = HarmonicState::unit(&IndexTriple::new(j2, m2, q2)?);
        let out = apply_word(&w, &s)?;
        let expected = match word_parity(&w) {
            Parity::Even => s.sector(),
            Parity::Odd => s.sector().flipped(),
        };
        rec.require(
            || format!("{w} on ({j2}, {m2}, {q2})"),
            out.sector() == expected,
        );
    }
    Ok(())
}
