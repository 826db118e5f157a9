use jacobi_core::ajf::{self, jacobi_harmonic_unchecked, Basis, ChiRange};
use jacobi_core::algebra::{CoeffVector, HarmonicState};
use jacobi_core::analysis::*;
use jacobi_core::lattice::{sector_triples, IndexTriple};
use jacobi_core::Sector;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn families_are_orthonormal() {
    for m2 in -8..=8i32 {
        for q2 in -8..=8i32 {
            if (m2 - q2) % 2 != 0 {
                continue;
            }
            let j2max = m2.abs().max(q2.abs()) + 16;
            let g = gram_matrix(m2, q2, j2max, Basis::Najf).unwrap();
            let n = g.nrows();
            assert_eq!(n, 9);
            let dev = (g - DMatrix::identity(n, n)).amax();
            assert!(dev <= 1e-10, "({m2}, {q2}): {dev}");
        }
    }
}

#[test]
fn gauss_legendre_is_exact_for_polynomials() {
    let rule = gauss_legendre(10);
    for k in 0..20 {
        let exact = if k % 2 == 0 {
            2.0 / (k as f64 + 1.0)
        } else {
            0.0
        };
        assert!(
            (rule.integrate(|x| x.powi(k)) - exact).abs() < 1e-14,
            "x^{k}"
        );
    }
    let rule = trapezoid(9, 2.0 * std::f64::consts::PI);
    assert!((rule.integrate(|t| (3.0 * t).cos()) - 0.0).abs() < 1e-13);
    assert!((rule.integrate(|_| 1.0) - 2.0 * std::f64::consts::PI).abs() < 1e-13);
}

#[test]
fn parseval_for_span_limited_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (m2, q2) in [(0, 0), (1, -1), (3, 1), (4, 4)] {
        let mut c = CoeffVector::new(m2, q2, Basis::Najf).unwrap();
        let lo = i32::max(m2.abs(), q2.abs());
        for j2 in (lo..=lo + 10).step_by(2) {
            c.set(j2, Complex64::new(rng.random_range(-1.0..1.0), 0.0))
                .unwrap();
        }
        let rule = gauss_legendre(40);
        let l2 = rule.integrate(|x| c.evaluate(x).unwrap().norm_sqr());
        let coeff = c.inner(&c).unwrap().re;
        assert!((l2 - coeff).abs() < 1e-12, "{l2} vs {coeff}");
        let back = analyze_interval(|x| c.evaluate(x).unwrap().re, m2, q2, lo + 10).unwrap();
        for (j2, v) in c.iter() {
            assert!((back.get(j2) - v).norm() < 1e-12);
        }
    }
}

#[test]
fn transition_matrix_is_orthogonal_on_gauss_nodes() {
    // T_{j,i} = sqrt(w_i) NJ_j(x_i) has orthonormal rows when the rule is exact
    let (m2, q2, j2max) = (2, 0, 16);
    let rule = gauss_legendre(12);
    let js: Vec<i32> = (2..=j2max).step_by(2).collect();
    let mut t = DMatrix::zeros(js.len(), rule.len());
    for (a, &j2) in js.iter().enumerate() {
        let tr = IndexTriple::new(j2, m2, q2).unwrap();
        for (i, (x, w)) in rule.iter().enumerate() {
            t[(a, i)] = w.sqrt() * ajf::najf(&tr, x).unwrap();
        }
    }
    let g = &t * t.transpose();
    assert!((g - DMatrix::identity(js.len(), js.len())).amax() < 1e-12);
}

#[test]
fn projector_completeness() {
    let r = completeness_projector_check(1, 1, 11, |x| (1.0 - x * x).sqrt() * x.exp()).unwrap();
    assert!(r.fixed_point_residual < 1e-10);
    let t = IndexTriple::new(7, 1, 1).unwrap();
    let r = completeness_projector_check(1, 1, 11, |x| ajf::najf(&t, x).unwrap()).unwrap();
    assert!(r.raw_residual < 1e-10);
}

#[test]
fn projected_action_of_diagonal_generators() {
    use jacobi_core::algebra::Generator;
    let t = IndexTriple::new(5, 3, -1).unwrap();
    let v = projected_action(Generator::M, &t, &t).unwrap();
    assert!((v - 1.5).abs() < 1e-12);
}

fn random_sphere_state(rng: &mut ChaCha8Rng, sector: Sector, j2max: i32) -> HarmonicState {
    let mut s = HarmonicState::new(sector);
    for t in sector_triples(sector, j2max) {
        s.set(
            t,
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        )
        .unwrap();
    }
    s
}

#[test]
fn sphere_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (sector, j2max) in [(Sector::H, 4), (Sector::F, 3)] {
        for range in [ChiRange::Half, ChiRange::Full] {
            let s = random_sphere_state(&mut rng, sector, j2max);
            let f = |x, p, c| synthesize_s3(&s, x, p, c).unwrap();
            let back = analyze_s3_dual(f, sector, j2max, range).unwrap();
            for t in sector_triples(sector, j2max) {
                assert!(
                    (back.get(&t) - s.get(&t)).norm() < 1e-8,
                    "{sector} {range:?} {t}"
                );
            }
            let orthonormal = !(sector == Sector::H && range == ChiRange::Half);
            if orthonormal {
                let back = analyze_s3(f, sector, j2max, range).unwrap();
                for t in sector_triples(sector, j2max) {
                    assert!(
                        (back.get(&t) - s.get(&t)).norm() < 1e-8,
                        "{sector} {range:?} {t}"
                    );
                }
            }
        }
    }
}

#[test]
fn sphere_gram_diagonals() {
    for (sector, j2max) in [(Sector::H, 8), (Sector::F, 7)] {
        for range in [ChiRange::Half, ChiRange::Full] {
            let r = s3_gram_check(sector, j2max, range).unwrap();
            assert!(r.max_diagonal_deviation <= 1e-10, "{sector} {range:?}");
            assert!(r.max_same_labels <= 1e-10);
            assert!(r.max_m_mismatch <= 1e-10);
        }
    }
    let r = s3_gram_check(Sector::H, 4, ChiRange::Full).unwrap();
    assert!(r.max_q_odd <= 1e-10);
    let r = s3_gram_check(Sector::H, 4, ChiRange::Half).unwrap();
    assert!(r.max_q_odd > 0.1);
    assert!(s3_gram_check(Sector::F, 0, ChiRange::Half).is_err());
}

#[test]
fn harmonic_example_value() {
    let t = IndexTriple::new(0, 0, 0).unwrap();
    let v = jacobi_harmonic_unchecked(&t, 0.2, 1.0, 2.0).unwrap();
    assert!((v.re - 0.5f64.sqrt()).abs() < 1e-15);
}

fn random_coeffs(seed: u64, sector: Sector) -> HarmonicState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = HarmonicState::new(sector);
    for t in sector_triples(sector, 12) {
        if rng.random_bool(0.3) {
            let scale = rng.random_range(-3.0..0.0f64).exp();
            s.set(
                t,
                Complex64::new(
                    scale * rng.random_range(-1.0..1.0),
                    scale * rng.random_range(-1.0..1.0),
                ),
            )
            .unwrap();
        }
    }
    s
}

proptest! {
    #[test]
    fn seminorm_bounds_hold(seed in any::<u64>(), odd in any::<bool>(), r in 0u32..3, s in 0u32..3) {
        let sector = if odd { Sector::F } else { Sector::H };
        let state = random_coeffs(seed, sector);
        for kind in [BoundKind::JP, BoundKind::KPlusP, BoundKind::APlusP, BoundKind::KPlusT, BoundKind::L2T, BoundKind::PT] {
            let b = seminorm_bound_check(kind, &state, r, s).unwrap();
            prop_assert!(b.slack >= -1e-12 * (1.0 + b.rhs), "{kind} {r} {s}: {b:?}");
        }
    }

    #[test]
    fn seminorms_are_monotone(seed in any::<u64>(), r in 0u32..3, s in 0u32..3) {
        let state = random_coeffs(seed, Sector::H);
        prop_assert!(p_seminorm(&state, r, s).value <= p_seminorm(&state, r + 1, s).value);
        prop_assert!(t_seminorm(&state, r, s).value <= t_seminorm(&state, r, s + 1).value);
    }
}
