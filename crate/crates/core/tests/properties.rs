use orthokit::forms::{equivalence_witness, BilinearForm, FormKind};
use orthokit::graphs::{turan_bound, Graph};
use orthokit::linalg::{Matrix, Vector};
use orthokit::orthosets::{random_greedy_32, OrthoSet};
use orthokit::search::{max_clique, max_induced_kfree, SearchOptions};
use orthokit::{FieldCtx, Rational};
use proptest::prelude::*;

const ODD: [u64; 5] = [3, 5, 7, 9, 25];

fn opts() -> SearchOptions {
    SearchOptions {
        budget_nodes: 10_000_000,
        threads: 1,
    }
}

fn matrix_from(f: &orthokit::Field, n: usize, seed: &[u32]) -> Matrix {
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| seed[i * n + j] % f.q()).collect())
        .collect();
    Matrix::from_rows(f, &rows).unwrap()
}

fn symmetric_from(f: &orthokit::Field, n: usize, seed: &[u32]) -> Matrix {
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            let v = orthokit::Felt(seed[i * n + j] % f.q());
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(qi in 0usize..8, a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let q = [2u64, 3, 4, 5, 8, 9, 25, 27][qi];
        let f = FieldCtx::from_order(q).unwrap();
        let (a, b, c) = (orthokit::Felt(a % f.q()), orthokit::Felt(b % f.q()), orthokit::Felt(c % f.q()));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), orthokit::Felt(0));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), orthokit::Felt(1));
        }
        prop_assert_eq!(f.pow(a, f.q() as u64), a);
    }

    #[test]
    fn classification_is_a_congruence_invariant(
        qi in 0usize..5, n in 1usize..6, seed in prop::collection::vec(0u32..1000, 25), mseed in prop::collection::vec(0u32..1000, 25)
    ) {
        let f = FieldCtx::from_order(ODD[qi]).unwrap();
        let a = BilinearForm::new(symmetric_from(&f, n, &seed)).unwrap();
        let m = matrix_from(&f, n, &mseed);
        prop_assume!(!m.det().unwrap().is_zero());
        let b = BilinearForm::new(a.matrix().congruence(&m).unwrap()).unwrap();
        prop_assert_eq!(a.classify(), b.classify());
        if !a.is_degenerate() {
            let w = equivalence_witness(&b, &a).unwrap();
            prop_assert_eq!(a.matrix().congruence(&w).unwrap(), b.matrix().clone());
        }
    }

    #[test]
    fn diagonalization_round_trips(qi in 0usize..5, n in 1usize..7, seed in prop::collection::vec(0u32..1000, 36)) {
        let f = FieldCtx::from_order(ODD[qi]).unwrap();
        let a = BilinearForm::new(symmetric_from(&f, n, &seed)).unwrap();
        let (d, m) = a.diagonalize().unwrap();
        prop_assert!(d.is_diagonal());
        prop_assert!(!m.det().unwrap().is_zero());
        prop_assert_eq!(a.matrix().congruence(&m).unwrap(), d);
    }

    /// Replacing members by nonzero multiples keeps the (3,2) verdict.
    #[test]
    fn kl_verdict_is_scaling_invariant(qi in 0usize..3, n in 2usize..4, seed in 0u64..1000, scal in prop::collection::vec(1u32..1000, 64)) {
        let q = [3u64, 5, 7][qi];
        let f = FieldCtx::from_order(q).unwrap();
        let s = random_greedy_32(&f, n, FormKind::One, seed).unwrap();
        // adding the next vector may or may not break the property; both sides must agree
        let extra = orthokit::linalg::nonzero_vectors(f.q(), n).find(|v| !s.contains(v)).unwrap();
        let mut vs = s.vectors().to_vec();
        vs.push(extra);
        let base = OrthoSet::new(s.form().clone(), vs.clone()).unwrap();
        let scaled: Vec<Vector> = vs.iter().zip(&scal).map(|(v, &l)| v.scale(&f, orthokit::Felt(1 + l % (f.q() - 1)))).collect();
        let mut dedup = scaled.clone();
        dedup.sort();
        dedup.dedup();
        prop_assume!(dedup.len() == scaled.len());
        let other = OrthoSet::new(s.form().clone(), scaled).unwrap();
        prop_assert_eq!(base.is_kl_orthogonal(3, 2, 1 << 20).unwrap(), other.is_kl_orthogonal(3, 2, 1 << 20).unwrap());
    }

    /// Values are monotone in k and the K_k-free optima obey Turán's bound.
    #[test]
    fn kfree_monotone_and_turan(n in 1usize..16, mask in any::<u64>(), extra in any::<u64>()) {
        let mut bits = mask ^ extra.rotate_left(17);
        let g = Graph::from_fn(n, |_, _| {
            bits = bits.rotate_left(7) ^ 0x9e37_79b9_7f4a_7c15;
            bits & 3 != 0
        });
        let omega = max_clique(&g, opts()).unwrap().size;
        let mut prev = 0;
        for k in 2..=5 {
            let r = max_induced_kfree(&g, k, opts()).unwrap();
            prop_assert!(r.size >= prev);
            prev = r.size;
            let h = g.induced(&r.best_set);
            prop_assert!(!h.has_clique(k));
            if k >= 3 {
                let edges = Rational::from_integer(h.edge_count() as i64);
                prop_assert!(edges <= turan_bound(k as u64 - 1, r.size as u64));
            }
            if k > omega {
                prop_assert_eq!(r.size, n);
            }
        }
    }

    #[test]
    fn greedy_sets_are_maximal_and_closed(qi in 0usize..3, n in 2usize..5, seed in 0u64..10_000, gamma in any::<bool>()) {
        let q = [3u64, 5, 2][qi];
        let f = FieldCtx::from_order(q).unwrap();
        let kind = match (q, gamma) {
            (2, true) if n % 2 == 0 => FormKind::Hyperbolic,
            (2, _) => FormKind::Dot,
            (_, true) => FormKind::Gamma,
            _ => FormKind::One,
        };
        let s = random_greedy_32(&f, n, kind, seed).unwrap();
        prop_assert!(s.is_kl_orthogonal(3, 2, 1 << 20).unwrap());
        prop_assert!(s.is_maximal_32());
        prop_assert_eq!(s.line_closure().len(), s.len());
        let again = random_greedy_32(&f, n, kind, seed).unwrap();
        prop_assert_eq!(again.vectors(), s.vectors());
    }
}
