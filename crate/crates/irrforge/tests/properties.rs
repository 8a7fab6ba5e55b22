mod common;

use common::*;
use irrforge::cli::{Format, MatrixFile};
use irrforge::generators::{ceiling_feasible, ceiling_m, pair_families, FeasibilityVerdict};
use irrforge::numkernel::{fro, inverse, op_norm, CMatrix, Projection, Tolerances, C};
use irrforge::oracle::{
    certify, default_max_len, ginibre, random_invertible, random_matrix, random_unitary,
    word_algebra_dim, Seed,
};
use irrforge::similarity::{jordan_chevalley, similar_to_irreducible_normal, NormalOutcome};
use irrforge::staralg::commutant;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3..1e3f64,
        Just(0.0),
        Just(-0.0),
    ]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn matrix_files_round_trip_exactly(n in 1usize..5, entries in prop::collection::vec((finite(), finite()), 16)) {
        let m = CMatrix::from_fn(n, n, |i, j| {
            let (re, im) = entries[i * 4 + j];
            C::new(re, im)
        });
        let file = MatrixFile::named(m.clone(), "p");
        for format in [Format::Structured, Format::Text] {
            let back = MatrixFile::parse(&file.render(format)).unwrap();
            for (a, b) in back.matrix.iter().zip(m.iter()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn commutant_of_t_is_similarity_invariant(seed in any::<u64>(), n in 1usize..6, kind in 0u8..3) {
        let s = Seed(seed);
        let t = match kind {
            0 => random_matrix(n, s),
            1 => jordan_instance(n, 3, 0.5, 10.0, s).t,
            _ => {
                let d = 1 + (seed as usize % n);
                let mults = random_mults(n, d, n, s.derive(9)).unwrap();
                normal_with_mults(&mults, 0.1, s).0
            }
        };
        let x = random_invertible(n, 20.0, s.derive(1));
        let conj = &x * &t * inverse(&x).unwrap();
        let a = commutant(n, std::slice::from_ref(&t), false, &tol()).unwrap();
        let b = commutant(n, std::slice::from_ref(&conj), false, &tol()).unwrap();
        prop_assert_eq!(a.dim, b.dim);
    }

    #[test]
    fn irreducibility_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..6) {
        let s = Seed(seed);
        let t = if seed % 2 == 0 { random_matrix(n, s) } else { jordan_instance(n, 2, 0.5, 10.0, s).t };
        let u = random_unitary(n, s.derive(1));
        let a = certify(&t, &tol(), default_max_len(n)).unwrap();
        let b = certify(&(&u * &t * u.adjoint()), &tol(), default_max_len(n)).unwrap();
        prop_assert_eq!(a.commutant_dim, b.commutant_dim);
        prop_assert_eq!(a.word_dim, b.word_dim);
    }

    #[test]
    fn oracles_agree_on_direct_sums(seed in any::<u64>(), n1 in 1usize..4, n2 in 0usize..3) {
        let s = Seed(seed);
        let n = n1 + n2;
        let mut t = CMatrix::zeros(n, n);
        t.view_mut((0, 0), (n1, n1)).copy_from(&ginibre(n1, s));
        if n2 > 0 {
            t.view_mut((n1, n1), (n2, n2)).copy_from(&ginibre(n2, s.derive(1)));
        }
        let u = random_unitary(n, s.derive(2));
        let t = &u * t * u.adjoint();
        let cb = commutant(n, std::slice::from_ref(&t), true, &tol()).unwrap();
        let w = word_algebra_dim(n, std::slice::from_ref(&t), default_max_len(n), &tol()).unwrap();
        let expected = if n2 == 0 { 1 } else { 2 };
        prop_assert_eq!(cb.dim, expected);
        prop_assert_eq!(w.final_dim, n1 * n1 + n2 * n2);
    }

    #[test]
    fn range_projections_are_orthogonal_projections(seed in any::<u64>(), n in 1usize..7, r in 0usize..7) {
        let r = r.min(n);
        let m = random_rank(n, r, Seed(seed));
        let p = irrforge::numkernel::range_projection(&m, &tol());
        let (herm, idem) = p.residuals();
        prop_assert!(herm < 1e-12 && idem < 1e-12);
        prop_assert_eq!(p.rank(), r);
        prop_assert!(fro(&(p.matrix() * &m - &m)) <= 1e-10 * (1.0 + fro(&m)));
    }

    #[test]
    fn dunford_reassembles(seed in any::<u64>(), n in 1usize..7) {
        let data = jordan_instance(n, 3, 0.5, 100.0, Seed(seed));
        let d = jordan_chevalley(&data.t, &tol()).unwrap();
        let r = d.residuals(&data.t);
        prop_assert!(r.reassembly <= 1e-10 && r.commutation <= 1e-10 && r.nilpotency <= 1e-10);
        let mut want = data.blocks.iter().map(|b| b.iter().sum::<usize>()).collect::<Vec<_>>();
        let mut got = d.mults.clone();
        want.sort();
        got.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn normal_pipeline_matches_its_criterion(seed in any::<u64>(), n in 3usize..8, d in 1usize..8) {
        let d = d.min(n);
        let s = Seed(seed);
        let mults = random_mults(n, d, n, s.derive(1)).unwrap();
        let (nm, _) = normal_with_mults(&mults, 0.2, s.derive(2));
        let positive = d >= 3 && mults.iter().all(|&m| 2 * m <= n);
        match similar_to_irreducible_normal(&nm, &tol()).unwrap() {
            NormalOutcome::Similar(r) => {
                prop_assert!(positive);
                prop_assert!(r.certificate.is_irreducible());
                prop_assert!(r.conjugation_residual(&nm) <= 1e-8 * r.cond * (1.0 + op_norm(&nm)));
            }
            NormalOutcome::Obstructed(o) => {
                prop_assert!(!positive);
                prop_assert!(o.verify(&nm, &tol()));
            }
        }
    }

    #[test]
    fn ceiling_feasibility_is_monotone(n in 2usize..40, k in 1usize..20, m in 0usize..45) {
        prop_assume!(2 * k <= n);
        let feasible = |m| ceiling_feasible(n, k, m) == FeasibilityVerdict::Feasible;
        prop_assert_eq!(feasible(m), m >= ceiling_m(n, k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn pair_family_members_are_rank_one(n1 in 1usize..6, n2 in 1usize..6) {
        let pf = pair_families(n1, n2, &tol()).unwrap();
        prop_assert_eq!(pf.e.len(), n1);
        prop_assert_eq!(pf.f.len(), n2);
        prop_assert!(pf.e.iter().chain(&pf.f).all(|p: &Projection| p.rank() == 1));
        prop_assert_eq!(pf.certificate.dim, 1);
    }
}
