mod common;

use common::small_strong;
use kecc_core::flow::{lambda_bounded, minimal_mincut_side};
use kecc_core::gen::random_kec;
use kecc_core::local_search::{find_out_paths, OutPaths, Searcher};
use kecc_core::oracle::mset_oracle;
use kecc_core::rng::stream;
use kecc_core::{Digraph, MSetResult, ReversalOverlay};
use proptest::prelude::*;

fn assert_sound(
    g: &Digraph,
    r: &MSetResult,
    v: usize,
    s: usize,
    c: usize,
) -> Result<(), TestCaseError> {
    if let MSetResult::Found(set) = r {
        prop_assert!(set.contains(v));
        prop_assert!(!set.contains(s));
        prop_assert_eq!(set.out_count, c);
        let minimal = minimal_mincut_side(g, v, s);
        prop_assert!(minimal.members.iter().all(|x| set.contains(*x)));
    }
    Ok(())
}

fn no_flips(ov: &ReversalOverlay) -> bool {
    ov.journal().is_empty() && ov.base().edges().all(|e| !ov.is_flipped(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn deterministic_is_sound_and_restores(n in 3usize..=12, k in 1usize..=3, extra in 0usize..20, seed: u64, pick: (usize, usize), delta in 1usize..60) {
        let g = random_kec(n, k, extra, seed);
        let (v, s) = (pick.0 % n, pick.1 % n);
        prop_assume!(v != s);
        let c = lambda_bounded(&g, v, s, k).min(k);
        let mut searcher = Searcher::new(&g);
        let r = searcher.local_search(v, s, c, delta);
        assert_sound(&g, &r, v, s, c)?;
        prop_assert!(no_flips(searcher.overlay()));
        prop_assert_eq!(searcher.stats.path_overruns, 0);
        prop_assert!(searcher.stats.max_path_explored <= (2 * c + 1) * (delta + 1));
    }

    #[test]
    fn randomized_is_sound_and_restores(n in 3usize..=12, k in 1usize..=3, extra in 0usize..20, seed: u64, pick: (usize, usize), delta in 1usize..60) {
        let g = random_kec(n, k, extra, seed);
        let (v, s) = (pick.0 % n, pick.1 % n);
        prop_assume!(v != s);
        let mut rng = stream(seed, "test/rand-search", 0);
        let mut searcher = Searcher::new(&g);
        let r = searcher.repeated(v, s, k, delta, 4, &mut rng);
        assert_sound(&g, &r, v, s, k)?;
        prop_assert!(no_flips(searcher.overlay()));
        prop_assert_eq!(searcher.stats.round_overruns, 0);
    }

    #[test]
    fn paths_respect_budget(n in 2usize..=14, extra in 0usize..30, seed: u64, pick: (usize, usize), k in 0usize..4, delta in 0usize..40) {
        let g = small_strong(n, extra, seed);
        let (v, s) = (pick.0 % n, pick.1 % n);
        prop_assume!(v != s);
        let ov = ReversalOverlay::new(&g);
        let (paths, budget) = find_out_paths(&ov, v, s, k, delta);
        prop_assert_eq!(budget.limit, (2 * k + 1) * (delta + 1));
        prop_assert!(budget.explored <= budget.limit);
        match paths {
            OutPaths::ToSink(p) => {
                prop_assert_eq!(g.tail(p[0]), v);
                prop_assert_eq!(g.head(*p.last().unwrap()), s);
            }
            OutPaths::Candidates(ps) => {
                prop_assert!(ps.len() <= 2 * k);
                for p in ps {
                    prop_assert!(p.iter().all(|&e| g.head(e) != s));
                    if let Some(&first) = p.first() {
                        prop_assert_eq!(g.tail(first), v);
                    }
                }
            }
        }
    }
}

/// Every small case with a reachable minimal set must be found exactly.
#[test]
fn deterministic_completeness_sweep() {
    let mut checked = 0;
    for seed in 0..40u64 {
        for n in 2..=8 {
            for k in 1..=3 {
                let g = random_kec(n, k, (seed as usize * 3) % 10, seed);
                let mut searcher = Searcher::new(&g);
                for v in 0..n {
                    for s in 0..n {
                        if v == s {
                            continue;
                        }
                        for c in 1..=k {
                            let truth = mset_oracle(&g, v, s, c).unwrap();
                            match truth {
                                MSetResult::Found(m) => {
                                    for delta in [m.vol, m.vol + 3] {
                                        let got = searcher.local_search(v, s, c, delta);
                                        assert_eq!(
                                            got,
                                            MSetResult::Found(m.clone()),
                                            "n={n} k={k} seed={seed} v={v} s={s} c={c}"
                                        );
                                    }
                                }
                                _ => assert_eq!(
                                    searcher.local_search(v, s, c, 4 * g.m_live()),
                                    MSetResult::Empty
                                ),
                            }
                            checked += 1;
                        }
                    }
                }
                assert_eq!(searcher.stats.path_overruns, 0);
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn amplified_finds_small_sets() {
    let mut misses = 0;
    for seed in 0..30u64 {
        let g = random_kec(10, 2, 8, seed);
        let mut rng = stream(seed, "test/amplified", 0);
        let mut searcher = Searcher::new(&g);
        for v in 1..10 {
            if let MSetResult::Found(m) = mset_oracle(&g, v, 0, 2).unwrap() {
                if searcher.amplified(v, 0, 2, m.vol, 1e-4, &mut rng) != MSetResult::Found(m) {
                    misses += 1;
                }
            }
        }
    }
    assert!(misses <= 1, "misses {misses}");
}
