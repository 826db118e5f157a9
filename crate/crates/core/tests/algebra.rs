use jacobi_core::ajf::Basis;
use jacobi_core::algebra::{
    apply_generator, apply_word, commutator_residual, word_parity, CoeffVector, Generator,
    HarmonicState, LadderState, OperatorWord, Parity, ALL_GENERATORS,
};
use jacobi_core::analysis::projected_action;
use jacobi_core::lattice::{family_j2, triples_up_to, IndexTriple};
use jacobi_core::Sector;
use num_complex::Complex64;
use proptest::prelude::*;
use Generator::*;

fn unit(t: &IndexTriple) -> CoeffVector {
    CoeffVector::unit(t, Basis::Najf)
}

#[test]
fn su11_commutators_on_all_basis_vectors() {
    for t in triples_up_to(16) {
        let s = unit(&t);
        let k3 = OperatorWord::single(K3);
        let r = commutator_residual(KPlus, KMinus, &[(-2.0, k3)], &s).unwrap();
        assert!(r <= 1e-12, "[K+,K-] on {t}: {r}");
        let r = commutator_residual(K3, KPlus, &[(1.0, OperatorWord::single(KPlus))], &s).unwrap();
        assert!(r <= 1e-12, "[K3,K+] on {t}: {r}");
        let r =
            commutator_residual(K3, KMinus, &[(-1.0, OperatorWord::single(KMinus))], &s).unwrap();
        assert!(r <= 1e-12, "[K3,K-] on {t}: {r}");
        for (a, b) in [(M, Q), (J, M), (J, Q)] {
            assert_eq!(commutator_residual(a, b, &[], &s).unwrap(), 0.0);
        }
    }
}

#[test]
fn su2_closure() {
    for t in triples_up_to(16) {
        let s = unit(&t);
        let r = commutator_residual(APlus, AMinus, &[(2.0, OperatorWord::single(M))], &s).unwrap();
        assert!(r <= 1e-12, "[A+,A-] on {t}: {r}");
        let r = commutator_residual(BPlus, BMinus, &[(2.0, OperatorWord::single(Q))], &s).unwrap();
        assert!(r <= 1e-12, "[B+,B-] on {t}: {r}");
    }
}

#[test]
fn casimir_in_dominant_m_case() {
    for t in triples_up_to(16)
        .into_iter()
        .filter(|t| t.m2().abs() >= t.q2().abs())
    {
        let s = unit(&t);
        let mut c = apply_word(&"K3 K3".parse().unwrap(), &s).unwrap();
        c.add_scaled(&s.apply(K3).unwrap(), Complex64::new(-1.0, 0.0))
            .unwrap();
        c.add_scaled(
            &s.apply(KMinus).unwrap().apply(KPlus).unwrap(),
            Complex64::new(-1.0, 0.0),
        )
        .unwrap();
        let ev = t.m() * t.m() - 0.25;
        c.add_scaled(&s, Complex64::new(-ev, 0.0)).unwrap();
        assert!(c.max_abs() <= 1e-12, "{t}: {}", c.max_abs());
    }
}

#[test]
fn k_action_independent_of_q() {
    for t in triples_up_to(24) {
        for q2 in (-t.m2().abs()..=t.m2().abs()).step_by(2) {
            let u = IndexTriple::new(t.j2(), t.m2(), q2).unwrap();
            for g in [KPlus, KMinus] {
                let a = g.coefficient(&t, Basis::Najf).unwrap().map(|p| p.1);
                let b = g.coefficient(&u, Basis::Najf).unwrap().map(|p| p.1);
                if t.q2().abs() <= t.m2().abs() {
                    assert_eq!(a, b, "{g} on {t} vs {u}");
                }
            }
        }
    }
}

#[test]
fn edge_annihilation_is_exact() {
    for t in triples_up_to(30) {
        for g in ALL_GENERATORS {
            // an invalid target with a nonzero coefficient is an error
            g.coefficient(&t, Basis::Najf).unwrap();
            g.coefficient(&t, Basis::Ajf).unwrap();
        }
    }
    let top = IndexTriple::new(4, 4, 0).unwrap();
    assert!(apply_generator(APlus, &unit(&top)).unwrap().is_empty());
    let corner = IndexTriple::new(6, 6, 6).unwrap();
    assert!(apply_generator(KMinus, &unit(&corner)).unwrap().is_empty());
}

#[test]
fn coefficients_match_quadrature_projection() {
    for t in triples_up_to(16) {
        for g in ALL_GENERATORS {
            let (_, dm, dq) = g.shift();
            let (m2, q2) = (t.m2() + dm, t.q2() + dq);
            let Ok(js) = family_j2(m2, q2, 16) else {
                continue;
            };
            let expected = g.coefficient(&t, Basis::Najf).unwrap();
            for j2 in js {
                let target = IndexTriple::new(j2, m2, q2).unwrap();
                let got = projected_action(g, &t, &target).unwrap();
                let want = match expected {
                    Some((tt, c)) if tt == target => c,
                    _ => 0.0,
                };
                assert!(
                    (got - want).abs() <= 1e-10,
                    "{g} {t} -> {target}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn k_plus_factorizes_through_c_and_f() {
    for t in triples_up_to(20)
        .into_iter()
        .filter(|t| t.m2().abs() >= t.q2().abs())
    {
        let k = KPlus
            .coefficient(&t, Basis::Ajf)
            .unwrap()
            .map_or(0.0, |p| p.1);
        let s = CoeffVector::unit(&t, Basis::Ajf);
        let fc = s.apply(CPlus).unwrap().apply(FPlus).unwrap().to_ajf();
        let q = t.q();
        let norm = ((t.j() + 1.0).powi(2) - q * q).sqrt();
        let via = fc.get(t.j2() + 2).re / norm;
        assert!((k - via).abs() <= 1e-12 * (1.0 + k), "{t}: {k} vs {via}");
    }
}

#[test]
fn word_example_composes_coefficients() {
    let s = HarmonicState::unit(&IndexTriple::new(2, 0, 0).unwrap());
    let out = apply_word(&"C+F+".parse().unwrap(), &s).unwrap();
    let mid = FPlus
        .coefficient(&IndexTriple::new(2, 0, 0).unwrap(), Basis::Najf)
        .unwrap()
        .unwrap();
    let last = CPlus.coefficient(&mid.0, Basis::Najf).unwrap().unwrap();
    assert_eq!(out.get(&last.0), Complex64::new(mid.1 * last.1, 0.0));
}

fn word_strategy() -> impl Strategy<Value = OperatorWord> {
    prop::collection::vec((0..ALL_GENERATORS.len(), 0u32..4), 0..6).prop_map(|fs| {
        OperatorWord::new(
            fs.into_iter()
                .map(|(i, e)| (ALL_GENERATORS[i], e))
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn output_sector_follows_parity(w in word_strategy(), j2 in 0..8i32) {
        let s = HarmonicState::unit(&IndexTriple::new(j2, j2 % 2, j2 % 2).unwrap());
        let out = apply_word(&w, &s).unwrap();
        let expected = match word_parity(&w) {
            Parity::Even => s.sector(),
            Parity::Odd => s.sector().flipped(),
        };
        prop_assert_eq!(out.sector(), expected);
    }

    #[test]
    fn word_display_round_trips(w in word_strategy()) {
        let parsed: OperatorWord = w.to_string().parse().unwrap();
        let clean = |w: &OperatorWord| {
            w.factors().iter().filter(|f| f.1 > 0).copied().collect::<Vec<_>>()
        };
        prop_assert_eq!(clean(&parsed), clean(&w));
    }
}

#[test]
fn harmonic_state_sectors() {
    let s = HarmonicState::unit(&IndexTriple::new(1, 1, -1).unwrap());
    assert_eq!(s.sector(), Sector::F);
    let mut h = HarmonicState::new(Sector::H);
    assert!(h
        .add(IndexTriple::new(1, 1, 1).unwrap(), Complex64::new(1.0, 0.0))
        .is_err());
}

/// `(<h, g f>, <g^dagger h, f>)` for basis vectors with the AJF-basis
/// coefficients used directly.
fn ajf_pairing(g: Generator, f: &IndexTriple) -> Option<(f64, f64)> {
    let (h, c) = g.coefficient(f, Basis::Ajf).unwrap()?;
    let (back, d) = g.adjoint().coefficient(&h, Basis::Ajf).unwrap()?;
    assert_eq!(back, *f);
    Some((c, d))
}

#[test]
fn adjoint_pairs_in_both_normalizations() {
    for f in triples_up_to(16) {
        for g in ALL_GENERATORS {
            let Some((a, b)) = ajf_pairing(g, &f) else {
                continue;
            };
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{g} {f}");
            let h = g.coefficient(&f, Basis::Najf).unwrap().unwrap().0;
            let (l, r) = jacobi_core::algebra::adjoint_pairing(g, &unit(&f), &unit(&h)).unwrap();
            // the orthonormal pairings differ by (2j_f + 1) / (2j_h + 1)
            let ratio = f64::from(f.j2() + 1) / f64::from(h.j2() + 1);
            assert!(
                (r.re * ratio - l.re).abs() <= 1e-12 * (1.0 + l.re.abs()),
                "{g} {f}"
            );
        }
    }
}
