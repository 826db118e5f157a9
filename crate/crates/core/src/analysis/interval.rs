use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{gauss_legendre, QuadratureRule};
use crate::ajf::{self, Basis};
use crate::algebra::{CoeffVector, Generator};
use crate::error::{Error, Result};
use crate::lattice::{family_j2, IndexTriple};

/// Gauss-Legendre rule that integrates products of two functions of the
/// family up to `j2max` exactly, with headroom for smooth non-polynomial
/// integrands.
pub fn interval_rule(j2max: i32) -> QuadratureRule {
    gauss_legendre(j2max.max(0) as usize + 16)
}

fn family(m2: i32, q2: i32, j2max: i32) -> Result<Vec<IndexTriple>> {
    family_j2(m2, q2, j2max)?
        .into_iter()
        .map(|j2| IndexTriple::new(j2, m2, q2))
        .collect()
}

/// NAJF coefficients `<NJ_j, f>` for `j <= j2max / 2`.
pub fn analyze_interval(
    f: impl Fn(f64) -> f64,
    m2: i32,
    q2: i32,
    j2max: i32,
) -> Result<CoeffVector> {
    analyze_interval_with(&interval_rule(j2max), f, m2, q2, j2max)
}

pub fn analyze_interval_with(
    rule: &QuadratureRule,
    f: impl Fn(f64) -> f64,
    m2: i32,
    q2: i32,
    j2max: i32,
) -> Result<CoeffVector> {
    let samples: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
    let mut out = CoeffVector::new(m2, q2, Basis::Najf)?;
    for t in family(m2, q2, j2max)? {
        let mut acc = 0.0;
        for ((x, w), fx) in rule.iter().zip(&samples) {
            acc += w * ajf::najf(&t, x)? * fx;
        }
        out.set(t.j2(), Complex64::new(acc, 0.0))?;
    }
    Ok(out)
}

/// Evaluates the expansion at `x`.
pub fn synthesize_interval(c: &CoeffVector, x: f64) -> Result<Complex64> {
    c.evaluate(x)
}

/// Least-squares NAJF coefficients from scattered samples `(x, f(x))`.
pub fn fit_interval(samples: &[(f64, f64)], m2: i32, q2: i32, j2max: i32) -> Result<CoeffVector> {
    let fam = family(m2, q2, j2max)?;
    if samples.len() < fam.len() {
        return Err(Error::Domain(format!(
            "{} samples cannot determine {} coefficients",
            samples.len(),
            fam.len()
        )));
    }
    let mut a = DMatrix::<f64>::zeros(samples.len(), fam.len());
    for (row, &(x, _)) in samples.iter().enumerate() {
        for (col, t) in fam.iter().enumerate() {
            a[(row, col)] = ajf::najf(t, x)?;
        }
    }
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|&(_, f)| f));
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-13)
        .map_err(|e| Error::Domain(format!("least-squares solve failed: {e}")))?;
    let mut out = CoeffVector::new(m2, q2, Basis::Najf)?;
    for (t, c) in fam.iter().zip(sol.iter()) {
        out.set(t.j2(), Complex64::new(*c, 0.0))?;
    }
    Ok(out)
}

/// Matrix of `<phi_j, phi_j'>` over `[-1, 1]` for the family `(m2, q2)` in
/// the given normalization, rows and columns ordered by ascending `j`.
pub fn gram_matrix(m2: i32, q2: i32, j2max: i32, basis: Basis) -> Result<DMatrix<f64>> {
    let fam = family(m2, q2, j2max)?;
    if fam.is_empty() {
        return Err(Error::RangeViolation { j2: j2max, m2, q2 });
    }
    // products are polynomials of degree <= j + j' <= j2max
    let rule = gauss_legendre(j2max as usize / 2 + 8);
    let values: Vec<Vec<f64>> = fam
        .iter()
        .map(|t| {
            rule.nodes
                .iter()
                .map(|&x| ajf::evaluate(basis, t, x))
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = fam.len();
    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let s: f64 = rule
                .weights
                .iter()
                .enumerate()
                .map(|(i, w)| w * values[a][i] * values[b][i])
                .sum();
            g[(a, b)] = s;
            g[(b, a)] = s;
        }
    }
    Ok(g)
}

/// `<NJ_target, g NJ_t>` by Gauss-Legendre quadrature of the function-space
/// action of `g`.
pub fn projected_action(g: Generator, t: &IndexTriple, target: &IndexTriple) -> Result<f64> {
    let rule = interval_rule(t.j2().max(target.j2()));
    let mut acc = 0.0;
    for (x, w) in rule.iter() {
        acc += w * ajf::najf(target, x)? * g.function_image(t, x)?;
    }
    Ok(acc * ajf::najf_factor(t))
}

/// Outcome of applying the truncated reproducing kernel
/// `K(x, y) = sum_{j <= jmax} NJ_j(x) NJ_j(y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectorCheck {
    /// `sup |K g~ - g~|` where `g~` is `g` projected onto the span.
    pub fixed_point_residual: f64,
    /// `sup |K g|` for the raw `g`; zero when `g` is orthogonal to the span.
    pub image_sup: f64,
    /// `sup |K g - g|` for the raw `g`; zero when `g` lies in the span.
    pub raw_residual: f64,
}

pub fn completeness_projector_check(
    m2: i32,
    q2: i32,
    j2max: i32,
    g: impl Fn(f64) -> f64,
) -> Result<ProjectorCheck> {
    let fam = family(m2, q2, j2max)?;
    let rule = interval_rule(j2max);
    let basis_at_nodes: Vec<Vec<f64>> = fam
        .iter()
        .map(|t| rule.nodes.iter().map(|&y| ajf::najf(t, y)).collect())
        .collect::<Result<_>>()?;
    let apply_kernel = |samples: &[f64], x: f64| -> Result<f64> {
        let mut acc = 0.0;
        for (k, t) in fam.iter().enumerate() {
            let bx = ajf::najf(t, x)?;
            for (i, w) in rule.weights.iter().enumerate() {
                acc += w * bx * basis_at_nodes[k][i] * samples[i];
            }
        }
        Ok(acc)
    };
    let raw: Vec<f64> = rule.nodes.iter().map(|&y| g(y)).collect();
    let projected: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&y| apply_kernel(&raw, y))
        .collect::<Result<_>>()?;

    let grid = (0..=200).map(|k| -1.0 + 2.0 * f64::from(k) / 200.0);
    let mut check = ProjectorCheck {
        fixed_point_residual: 0.0,
        image_sup: 0.0,
        raw_residual: 0.0,
    };
    for x in grid {
        let kg = apply_kernel(&raw, x)?;
        let kkg = apply_kernel(&projected, x)?;
        check.fixed_point_residual = check.fixed_point_residual.max((kkg - kg).abs());
        check.image_sup = check.image_sup.max(kg.abs());
        check.raw_residual = check.raw_residual.max((kg - g(x)).abs());
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_single_basis_function() {
        let t = IndexTriple::new(6, 4, 2).unwrap();
        let c = analyze_interval(|x| ajf::najf(&t, x).unwrap(), 4, 2, 12).unwrap();
        for (j2, v) in c.iter() {
            let expected = if j2 == 6 { 1.0 } else { 0.0 };
            assert!((v.re - expected).abs() < 1e-12, "j2={j2}");
        }
    }

    #[test]
    fn analyze_x() {
        let c = analyze_interval(|x| x, 0, 0, 8).unwrap();
        assert!((c.get(2).re - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        for j2 in [0, 4, 8] {
            assert!(c.get(j2).re.abs() < 1e-15);
        }
        assert!(analyze_interval(|_| 0.0, 1, 1, 5)
            .unwrap()
            .iter()
            .all(|(_, v)| v == 0.0.into()));
    }

    #[test]
    fn synthesize_examples() {
        let c = CoeffVector::unit(&IndexTriple::new(4, 0, 0).unwrap(), Basis::Najf);
        let v = synthesize_interval(&c, 0.0).unwrap();
        assert!((v.re + 0.5 * 2.5f64.sqrt()).abs() < 1e-15);
        let empty = CoeffVector::new(0, 0, Basis::Najf).unwrap();
        assert_eq!(
            synthesize_interval(&empty, 0.3).unwrap(),
            Complex64::default()
        );
        assert!(synthesize_interval(&c, 1.01).is_err());
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(0, 0, 10, Basis::Najf).unwrap();
        assert_eq!(g.nrows(), 6);
        assert!((g - DMatrix::identity(6, 6)).amax() < 1e-12);
        let g = gram_matrix(1, 1, 9, Basis::Najf).unwrap();
        assert!((g.clone() - DMatrix::identity(g.nrows(), g.nrows())).amax() < 1e-12);
        let g = gram_matrix(2, 0, 8, Basis::Ajf).unwrap();
        for (k, j2) in (2..=8).step_by(2).enumerate() {
            assert!((g[(k, k)] * (f64::from(j2) / 2.0 + 0.5) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projector_examples() {
        let t4 = IndexTriple::new(8, 0, 0).unwrap();
        let r = completeness_projector_check(0, 0, 12, |x| ajf::najf(&t4, x).unwrap()).unwrap();
        assert!(r.fixed_point_residual < 1e-10 && r.raw_residual < 1e-10);
        let t5 = IndexTriple::new(10, 0, 0).unwrap();
        let r = completeness_projector_check(0, 0, 6, |x| ajf::najf(&t5, x).unwrap()).unwrap();
        assert!(r.image_sup < 1e-12);
    }

    #[test]
    fn least_squares_recovers_expansion() {
        let samples: Vec<(f64, f64)> = (0..30)
            .map(|k| {
                let x = -0.95 + 1.9 * f64::from(k) / 29.0;
                (x, 0.5 * x * x - 0.25)
            })
            .collect();
        let c = fit_interval(&samples, 0, 0, 6).unwrap();
        for &x in &[-0.5, 0.1, 0.77] {
            let v = c.evaluate(x).unwrap().re;
            assert!((v - (0.5 * x * x - 0.25)).abs() < 1e-12);
        }
    }
}
