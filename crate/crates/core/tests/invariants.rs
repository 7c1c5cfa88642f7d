use proptest::prelude::*;
use rcw_core::cheby::{cheb_q, p_row, walk_row, walk_row_bruteforce, walk_total};
use rcw_core::gen::{gen_random_regular, RandomRegularParams};
use rcw_core::mixing::{mixing_profile, Starts};
use rcw_core::spectral::{eigendecompose, EigenOptions};
use rcw_core::variance::{variance_direct, variance_spectral_all};
use rcw_core::Graph;

fn graph() -> impl Strategy<Value = Graph> {
    (3usize..=5, 6usize..=16, any::<u64>()).prop_filter_map("odd n d", |(d, n, seed)| {
        (n > d && (n * d) % 2 == 0)
            .then(|| gen_random_regular(RandomRegularParams::new(n, d, seed)).ok())
            .flatten()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recurrence_matches_enumeration(g in graph(), t in 0u32..6) {
        for x in 0..g.n() {
            let fast = walk_row(&g, x, t).unwrap();
            let slow = walk_row_bruteforce(&g, x, t).unwrap();
            prop_assert_eq!(fast.counts(), slow.counts());
            prop_assert_eq!(fast.total(), walk_total(g.p(), t).unwrap());
        }
    }

    #[test]
    fn walk_counts_are_symmetric(g in graph(), t in 1u32..7) {
        let rows: Vec<_> = (0..g.n()).map(|x| walk_row(&g, x, t).unwrap()).collect();
        for x in 0..g.n() {
            for y in 0..g.n() {
                prop_assert_eq!(rows[x].counts()[y], rows[y].counts()[x]);
            }
        }
    }

    #[test]
    fn p_rows_sum_walk_rows(g in graph(), ell in 0u32..9) {
        let x = 0;
        let mut rhs = vec![0u64; g.n()];
        for j in 0..=ell / 2 {
            for (r, c) in rhs.iter_mut().zip(walk_row(&g, x, ell - 2 * j).unwrap().counts()) {
                *r += c;
            }
        }
        prop_assert_eq!(p_row(&g, x, ell).unwrap(), rhs);
    }

    #[test]
    fn variance_routes_agree(g in graph(), t in 1u32..9) {
        let spec = eigendecompose(&g, &EigenOptions::with_vectors()).unwrap();
        let s = variance_spectral_all(&spec, g.p(), t).unwrap();
        for (x, sv) in s.iter().enumerate() {
            let d = variance_direct(&g, x, t).unwrap();
            prop_assert!((d - sv).abs() <= 1e-8 * d.abs().max(1.0), "x={x}: {d} vs {sv}");
        }
    }

    #[test]
    fn q_at_degree_is_walk_total(p in 2u64..12, t in 1u32..12) {
        let exact = walk_total(p, t).unwrap() as f64;
        prop_assert!((cheb_q(t, p, p as f64 + 1.0) - exact).abs() <= 1e-9 * exact);
    }

    #[test]
    fn distance_profile_is_consistent(g in graph()) {
        let prof = mixing_profile(&g, 0, 6, Starts::All, false).unwrap();
        for r in &prof.records {
            prop_assert!(r.d_max >= r.d_mean - 1e-15);
            prop_assert!(r.d_max <= 1.0);
            prop_assert!(r.d_max <= r.l2_bound * (1.0 + 1e-12) + 1e-15);
            if let Some(ok) = r.lowercut_holds(g.n()) {
                prop_assert!(ok);
            }
        }
    }
}
