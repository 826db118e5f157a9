use jacobi_core::ajf::{jacobi_harmonic_unchecked, Basis};
use jacobi_core::algebra::{CoeffVector, HarmonicState};
use jacobi_core::analysis::synthesize_s3;
use jacobi_core::lattice::{sector_triples, triples_up_to, IndexTriple};
use jacobi_core::multiplication::*;
use jacobi_core::Sector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle(t: &IndexTriple, x: f64) -> f64 {
    jacobi_reference::ajf(t.j2(), t.m2(), t.q2(), x)
}

#[test]
fn corrected_branches_hold_pointwise_against_exact_values() {
    let grid = check_grid(21);
    for t in triples_up_to(16) {
        let mc = mult_coeffs(&t, Variant::Corrected).unwrap();
        for b in [Branch::Down, Branch::Up] {
            let dq2 = if b == Branch::Down { -2 } else { 2 };
            for &x in &grid {
                let mut rhs = b.diagonal() * oracle(&t, x);
                for (dj, c) in [-2, 0, 2].into_iter().zip(mc.branch(b)) {
                    if let Ok(tt) = t.shifted(dj, -2, dq2) {
                        rhs += c * oracle(&tt, x);
                    } else {
                        assert_eq!(c, 0.0, "{t} {b:?}");
                    }
                }
                let lhs = x * oracle(&t, x);
                assert!(
                    (lhs - rhs).abs() <= 1e-10,
                    "{t} {b:?} x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }
}

#[test]
fn projection_is_local() {
    for t in triples_up_to(16) {
        for b in [Branch::Down, Branch::Up] {
            let p = project_x(&t, b).unwrap();
            assert!(p.off_stencil <= 1e-12, "{t} {b:?}: {}", p.off_stencil);
        }
    }
}

#[test]
fn j_zero_structure() {
    for t in triples_up_to(0) {
        let p = mult_coeffs(&t, Variant::Printed).unwrap();
        assert_eq!((p.c, p.d, p.c_hat, p.d_hat), (0.0, 0.0, 0.0, 0.0));
    }
}

#[test]
fn coefficient_images_evaluate_to_x_times_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (m2, q2) in [(0, 0), (1, 1), (2, 0), (3, -1), (4, 2)] {
        for basis in [Basis::Ajf, Basis::Najf] {
            let mut s = CoeffVector::new(m2, q2, basis).unwrap();
            let lo = i32::max(m2.abs(), q2.abs());
            for j2 in (lo..=lo + 8).step_by(2) {
                s.set(j2, Complex64::new(rng.random_range(-1.0..1.0), 0.0))
                    .unwrap();
            }
            for img in [mult_x_down(&s).unwrap(), mult_x_up(&s).unwrap()] {
                for x in check_grid(11) {
                    let lhs = x * s.evaluate(x).unwrap();
                    assert!((img.evaluate(x).unwrap() - lhs).norm() <= 1e-10);
                }
            }
        }
    }
}

fn random_state(rng: &mut ChaCha8Rng, sector: Sector, j2max: i32) -> HarmonicState {
    let mut s = HarmonicState::new(sector);
    for t in sector_triples(sector, j2max) {
        if rng.random_bool(0.5) {
            s.set(
                t,
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
            .unwrap();
        }
    }
    s
}

#[test]
fn combined_operator_matches_pointwise_multiplication() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for sector in [Sector::H, Sector::F] {
        for _ in 0..10 {
            let s = random_state(&mut rng, sector, 8);
            let out = combined_phase_mult(&s).unwrap();
            assert_eq!(out.sector(), sector);
            for _ in 0..10 {
                let x = rng.random_range(-0.99..0.99);
                let phi = rng.random_range(0.0..4.0 * std::f64::consts::PI);
                let chi = rng.random_range(0.0..2.0 * std::f64::consts::PI);
                let lhs =
                    combined_phase_factor(x, phi, chi) * synthesize_s3(&s, x, phi, chi).unwrap();
                let rhs = synthesize_s3(&out, x, phi, chi).unwrap();
                assert!((lhs - rhs).norm() <= 1e-9, "{lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn combined_operator_is_half_difference_of_branches() {
    let t = IndexTriple::new(4, 2, 0).unwrap();
    let s = HarmonicState::unit(&t);
    let out = combined_phase_mult(&s).unwrap();
    let down = mult_x_down(&CoeffVector::unit(&t, Basis::Najf))
        .unwrap()
        .shifted;
    let up = mult_x_up(&CoeffVector::unit(&t, Basis::Najf))
        .unwrap()
        .shifted;
    for (j2, v) in down.iter() {
        let tt = down.triple(j2).unwrap();
        assert!((out.get(&tt) + 0.5 * v).norm() < 1e-14);
    }
    for (j2, v) in up.iter() {
        let tt = up.triple(j2).unwrap();
        assert!((out.get(&tt) - 0.5 * v).norm() < 1e-14);
    }
}

#[test]
fn combined_operator_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_state(&mut rng, Sector::H, 6);
    let b = random_state(&mut rng, Sector::H, 6);
    let (alpha, beta) = (Complex64::new(0.3, -1.2), Complex64::new(-2.0, 0.5));
    let mut sum = a.scaled(alpha);
    for (t, v) in b.iter() {
        sum.add(t, beta * v).unwrap();
    }
    let lhs = combined_phase_mult(&sum).unwrap();
    let (oa, ob) = (
        combined_phase_mult(&a).unwrap(),
        combined_phase_mult(&b).unwrap(),
    );
    for t in sector_triples(Sector::H, 8) {
        let want = alpha * oa.get(&t) + beta * ob.get(&t);
        assert!((lhs.get(&t) - want).norm() < 1e-12);
    }
}

#[test]
fn stated_combined_form_fails_pointwise() {
    let t = IndexTriple::new(0, 0, 0).unwrap();
    let s = HarmonicState::unit(&t);
    let stated = combined_phase_mult_as_stated(&s).unwrap();
    let (x, phi, chi) = (0.3, 1.1, 0.7);
    let lhs = combined_phase_factor(x, phi, chi)
        * jacobi_harmonic_unchecked(&t, x, phi, chi).unwrap()
        * jacobi_core::ajf::najf_factor(&t);
    let rhs = synthesize_s3(&stated, x, phi, chi).unwrap();
    assert!((lhs - rhs).norm() > 1e-3);
}

#[test]
fn ledger_flags_known_mismatches() {
    let ledger = discrepancy_ledger(16).unwrap();
    let origin = IndexTriple::new(0, 0, 0).unwrap();
    let quoted: Vec<_> = ledger
        .iter()
        .filter(|d| d.triple == origin && d.quantity.contains("quoted"))
        .collect();
    assert_eq!(quoted.len(), 2);
    assert!((quoted[0].corrected + 2.0).abs() < 1e-12);
    assert!((quoted[1].corrected + 2.0 / 3f64.sqrt()).abs() < 1e-12);
    for t in [
        IndexTriple::new(2, 0, 0).unwrap(),
        IndexTriple::new(2, 2, 2).unwrap(),
    ] {
        assert!(
            ledger.iter().any(|d| d.triple == t && d.quantity == "d"),
            "{t}"
        );
    }
    // the d mismatch is a factor 2j + 1
    for d in ledger
        .iter()
        .filter(|d| d.quantity == "d" && d.printed != 0.0)
    {
        let ratio = d.corrected / d.printed;
        assert!((ratio - f64::from(d.triple.j2() + 1)).abs() < 1e-9, "{d:?}");
    }
    assert_eq!(ledger, discrepancy_ledger(16).unwrap());
}

#[test]
fn contiguous_relations_hold() {
    for n in 0..=8 {
        for a in 0..=4 {
            for b in 0..=4 {
                for x in check_grid(21) {
                    let (l, u) = contiguous_residuals(n, a, b, x);
                    assert!(l <= 1e-10 && u <= 1e-10, "{n} {a} {b} {x}");
                }
            }
        }
    }
}
