use proptest::prelude::*;

use cayley_spectra::bounds::{cayley_bound_check, spectrum_minus};
use cayley_spectra::dense::eigenvalues;
use cayley_spectra::graph::{build_graph, dense_spectrum};
use cayley_spectra::lanczos::top_eigenvalue_deflated;
use cayley_spectra::partition::{check_equitable, coset_partition, Side};
use cayley_spectra::perm::{conjugate, factorial, unrank, Permutation};
use cayley_spectra::quotient::quotient_matrix;
use cayley_spectra::sets::{
    build_connection_set, derive_tk, derive_tk_recurrence, ConnectionSet, Provenance,
};
use cayley_spectra::{FamilyIndex, LanczosConfig, Matrix, StabilizerScope, VertexIndex};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    (0..factorial(n)).prop_map(move |r| unrank(VertexIndex(r), n).unwrap())
}

fn sized_perm() -> impl Strategy<Value = (usize, Permutation)> {
    (1usize..=9).prop_flat_map(|n| (Just(n), perm(n)))
}

/// A random inverse-closed set without the identity, possibly empty.
fn inverse_closed(n: usize) -> impl Strategy<Value = ConnectionSet> {
    prop::collection::vec(perm(n), 1..8).prop_map(move |ps| {
        let mut elems = Vec::new();
        for p in ps.into_iter().filter(|p| !p.is_identity()) {
            elems.push(p.inverse());
            elems.push(p);
        }
        elems.sort();
        elems.dedup();
        ConnectionSet::new(n, elems, Provenance::Explicit { depth: 0 }).unwrap()
    })
}

fn family() -> impl Strategy<Value = FamilyIndex> {
    prop::sample::select(FamilyIndex::all())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_a_group((n, p) in sized_perm(), seeds in (0u64..1 << 40, 0u64..1 << 40)) {
        let q = unrank(VertexIndex(seeds.0 % factorial(n)), n).unwrap();
        let r = unrank(VertexIndex(seeds.1 % factorial(n)), n).unwrap();
        let e = Permutation::identity(n);
        prop_assert_eq!(p.compose(&e).unwrap(), p.clone());
        prop_assert_eq!(e.compose(&p).unwrap(), p.clone());
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(
            p.compose(&q.compose(&r).unwrap()).unwrap(),
            p.compose(&q).unwrap().compose(&r).unwrap()
        );
        // (pq)(j) = p(q(j))
        for j in 1..=n {
            prop_assert_eq!(p.compose(&q).unwrap().image(j), p.image(q.image(j)));
        }
    }

    #[test]
    fn conjugation_keeps_cycle_type((n, p) in sized_perm(), s in 0u64..1 << 40) {
        let s = unrank(VertexIndex(s % factorial(n)), n).unwrap();
        let q = conjugate(&p, &s).unwrap();
        prop_assert_eq!(q.cycle_type(), p.cycle_type());
        prop_assert_eq!(q.support_len(), p.support_len());
        prop_assert_eq!(q.order(), p.order());
    }

    #[test]
    fn rank_round_trips((n, p) in sized_perm()) {
        let r = p.rank();
        prop_assert!(r.0 < factorial(n));
        prop_assert_eq!(unrank(r, n).unwrap(), p);
    }

    #[test]
    fn filtering_recurrence_matches_direct_filter(
        f in family(),
        (n, k) in (5usize..=8).prop_flat_map(|n| (Just(n), 0..=n)),
    ) {
        let t = build_connection_set(n, f).unwrap();
        let tk = derive_tk(&t, k);
        prop_assert_eq!(&tk, &derive_tk_recurrence(&t, k));
        prop_assert!(tk.iter().all(|p| (1..=k).all(|j| !p.fixes(j))));
        prop_assert!(t.iter().filter(|p| (1..=k).all(|j| !p.fixes(j))).all(|p| tk.contains(p)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn left_cosets_are_equitable(t in (3usize..=5).prop_flat_map(inverse_closed), point in 1usize..=3) {
        let n = t.degree();
        let g = build_graph(&StabilizerScope::full(n), &t).unwrap();
        let p = coset_partition(&g, point, Side::Left).unwrap();
        let q = check_equitable(&g, &p).unwrap();
        prop_assert!(q.is_ok());
        // b_st counts connection elements with τ(t) = s, whatever the point
        let q = q.unwrap();
        let labels = p.labels();
        for (a, &s) in labels.iter().enumerate() {
            for (b, &u) in labels.iter().enumerate() {
                prop_assert_eq!(q.row(a)[b], t.count_mapping(u, s) as i64);
            }
        }
    }

    #[test]
    fn quotient_eigenvalues_lift(t in (3usize..=5).prop_flat_map(inverse_closed)) {
        let n = t.degree();
        let graph = dense_spectrum(&build_graph(&StabilizerScope::full(n), &t).unwrap()).unwrap();
        let quotient = quotient_matrix(n, &t).unwrap().spectrum().unwrap();
        prop_assert!(spectrum_minus(&graph, &quotient, 1e-7).is_some());
    }

    #[test]
    fn lanczos_agrees_with_dense(
        dim in 2usize..=40,
        entries in prop::collection::vec(-1.0f64..1.0, 40 * 41 / 2),
        c in -3.0f64..3.0,
        seed in any::<u64>(),
    ) {
        // symmetric with constant row sums, so all-ones is an eigenvector
        let mut a = Matrix::from_fn(dim, dim, |i, j| {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            if i == j { 0.0 } else { entries[j * (j + 1) / 2 + i] }
        });
        let sums = a.row_sums();
        a = Matrix::from_fn(dim, dim, |i, j| {
            if i == j { c - sums[i] } else { a.row(i)[j] }
        });
        let rest = spectrum_minus(&eigenvalues(&a).unwrap(), &[c], 1e-8).unwrap();
        let expected = rest.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let config = LanczosConfig::with_seed(seed);
        let got = top_eigenvalue_deflated(&a, 1.0, &config).unwrap();
        prop_assert!((got.value - expected).abs() < 1e-7, "{} vs {}", got.value, expected);
    }
}

#[test]
fn partition_bound_holds_at_five() {
    for f in FamilyIndex::connected() {
        let t = build_connection_set(5, f).unwrap();
        for k in 1..=f.max_support().min(5) {
            let check = cayley_bound_check(&t, k).unwrap();
            assert!(check.holds, "{f} k={k}: {check:?}");
        }
    }
}
