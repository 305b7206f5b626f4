mod common;

use std::collections::BTreeSet;

use common::{oracle_order, random_cayley, random_table_band, random_word, small_groups};
use igband::band::{build_bg, dclass_grid, green_classes};
use igband::group::{cayley_relation_multiset, todd_coxeter, verify_homomorphism_with, HomVerdict};
use igband::pipeline::{bg_table_entry, Pipeline, PipelineOptions};
use igband::presentations::{to_cayley_form, GroupPresentation, Relation, Word};
use igband::squares::{is_singular_square_oracle, singular_squares};
use igband::tietze::{simplify, SimplifyOptions, Strategy};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT: usize = 20_000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random presentation over `n` generators with relators of length at most 6.
fn random_presentation(r: &mut ChaCha8Rng, n: usize, rels: usize) -> GroupPresentation {
    let names = &["a", "b", "c"][..n];
    let relations = (0..rels)
        .map(|_| {
            let len = r.gen_range(1..=6);
            Relation::new(random_word(r, n, len), Word::empty())
        })
        .collect();
    GroupPresentation::from_names(names, relations).unwrap()
}

fn cayley_names(p: &igband::presentations::CayleyFormPresentation) -> Vec<(String, String, String)> {
    let mut v: Vec<_> = p.relations.iter().map(|r| p.triple_names(r)).collect();
    v.sort();
    v
}

#[test]
fn group_tables_are_distinct_groups() {
    let groups = small_groups();
    let invariants: BTreeSet<_> = groups.iter().map(|g| g.invariant()).collect();
    assert_eq!(invariants.len(), groups.len());
    for g in &groups {
        assert!(g.is_group(), "{}", g.name);
        let p = g.cayley_presentation().to_group_presentation();
        assert_eq!(oracle_order(&p, 10_000), Some(g.order()), "{}", g.name);
    }
    // counts of groups of order 1..=8
    let mut per_order = [0; 9];
    for g in &groups {
        per_order[g.order()] += 1;
    }
    assert_eq!(per_order, [0, 1, 1, 1, 2, 1, 2, 1, 5]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_reduce_is_idempotent(seed in any::<u64>(), len in 0usize..20) {
        let w = random_word(&mut rng(seed), 3, len);
        let once = w.free_reduce();
        prop_assert_eq!(once.free_reduce(), once.clone());
        prop_assert!(once.letters().windows(2).all(|p| p[0] != p[1].inv()));
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
    }

    #[test]
    fn relator_key_is_invariant_under_rotation_and_inversion(seed in any::<u64>(), len in 1usize..12) {
        let w = random_word(&mut rng(seed), 3, len).cyclic_reduce();
        let key = w.relator_key();
        for r in w.rotations() {
            prop_assert_eq!(r.relator_key(), key.clone());
        }
        prop_assert_eq!(w.inverse().relator_key(), key);
    }

    #[test]
    fn coset_enumeration_matches_oracle(seed in any::<u64>(), n in 1usize..=2, rels in 1usize..=3) {
        let p = random_presentation(&mut rng(seed), n, rels);
        let ours = todd_coxeter(&p, LIMIT).ok().map(|t| t.n);
        let theirs = oracle_order(&p, LIMIT);
        if let (Some(a), Some(b)) = (ours, theirs) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn coset_tables_are_permutations(seed in any::<u64>(), rels in 1usize..=3) {
        let p = random_presentation(&mut rng(seed), 2, rels);
        if let Ok(t) = todd_coxeter(&p, LIMIT) {
            for c in 0..t.n {
                for g in 0..2 {
                    let l = igband::presentations::Letter::pos(g);
                    prop_assert_eq!(t.apply(t.apply(c, l), l.inv()), c);
                }
                for rel in p.relators() {
                    prop_assert_eq!(t.trace(c, &rel), c);
                }
            }
        }
    }

    #[test]
    fn order_is_invariant_under_relator_permutation(seed in any::<u64>(), rels in 2usize..=4) {
        let mut r = rng(seed);
        let p = random_presentation(&mut r, 2, rels);
        let base = todd_coxeter(&p, LIMIT).ok().map(|t| t.n);
        let mut shuffled = p.relations.clone();
        shuffled.shuffle(&mut r);
        let q = GroupPresentation::new(p.generators.clone(), shuffled).unwrap();
        let other = todd_coxeter(&q, LIMIT).ok().map(|t| t.n);
        if let (Some(a), Some(b)) = (base, other) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn cayley_conversion_preserves_order(seed in any::<u64>(), n in 1usize..=2, rels in 1usize..=3) {
        let p = random_presentation(&mut rng(seed), n, rels);
        let conv = to_cayley_form(&p);
        prop_assert!(conv.presentation.validate().iter().all(|v| v.is_warning()));
        let before = oracle_order(&p, LIMIT);
        let after = oracle_order(&conv.presentation.to_group_presentation(), LIMIT);
        if let (Some(a), Some(b)) = (before, after) {
            prop_assert_eq!(a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bg_size_matches_formula(seed in any::<u64>(), n in 1usize..=5, rels in 0usize..=10) {
        let p = random_cayley(&mut rng(seed), n, rels);
        let bg = build_bg(&p).unwrap();
        let r = p.relations.len();
        prop_assert_eq!(bg.len(), (2 * n + 2) * (n + 2) + 1 + 2 * n + r);
    }

    /// The paper elimination order recovers the input relations and the
    /// closed-form grid table.
    #[test]
    fn paper_strategy_recovers_input(seed in any::<u64>(), n in 1usize..=3, rels in 0usize..=5) {
        let cayley = random_cayley(&mut rng(seed), n, rels);
        let p = Pipeline::from_presentation(cayley.to_group_presentation(), PipelineOptions { checkpoints: Some(false), ..Default::default() }).unwrap();
        prop_assert!(p.trace.warnings.is_empty(), "{:?}", p.trace.warnings);
        prop_assert_eq!(cayley_relation_multiset(&p.simplified), Some(cayley_names(&cayley)));
        let idx = p.bg.index_sets();
        for i in 0..p.table.entries.len() {
            for j in 0..p.table.entries[i].len() {
                prop_assert_eq!(&p.table.entries[i][j], &bg_table_entry(idx, i, j), "cell ({}, {})", i, j);
            }
        }
        prop_assert!(!p.any_fail());
    }

    /// Every input relation of the maximal subgroup presentation holds in
    /// the simplified group after substitution.
    #[test]
    fn substitution_replays_into_output(seed in any::<u64>(), n in 1usize..=3, rels in 1usize..=5, greedy in any::<bool>()) {
        let cayley = random_cayley(&mut rng(seed), n, rels);
        let bg = build_bg(&cayley).unwrap();
        let green = green_classes(bg.band());
        let grid = bg.k_grid(&green).unwrap();
        let squares = singular_squares(bg.band(), &green, &grid).unwrap();
        let ig = bg.maximal_subgroup_presentation(&grid, &squares).unwrap();
        let strategy = if greedy { Strategy::Greedy } else { Strategy::Paper };
        let (out, trace) = simplify(&ig, &SimplifyOptions::new(strategy).with_checkpoints(None));
        if let Ok(t) = todd_coxeter(&out, LIMIT) {
            let verdict = verify_homomorphism_with(&ig.to_group_presentation(), &t, &trace.substitution).unwrap();
            prop_assert_eq!(verdict, HomVerdict::Ok);
        }
        for (k, &g) in trace.survivors.iter().enumerate() {
            prop_assert_eq!(trace.substitution[g].free_reduce(), Word::gen(k));
        }
    }

    /// A product of band elements projects onto its value in the band,
    /// whatever witnesses the rewriting uses.
    #[test]
    fn rees_normal_forms_project_to_band_products(seed in any::<u64>(), len in 1usize..8) {
        let mut r = rng(seed);
        let g = &small_groups()[r.gen_range(1..8)];
        let p = Pipeline::from_presentation(g.cayley_presentation().to_group_presentation(), PipelineOptions::default()).unwrap();
        let b = p.bg.band();
        let w: Vec<usize> = (0..len).map(|_| r.gen_range(0..b.len())).collect();
        let nf = p.rees.ig_normal_form(&w).unwrap();
        prop_assert_eq!(p.rees.project(&nf), b.product(&w).unwrap());
        for other in p.rees.normal_forms_all_witnesses(&w).unwrap() {
            prop_assert_eq!(&other, &nf);
        }
    }

    #[test]
    fn squares_agree_with_oracle_on_random_bands(seed in any::<u64>()) {
        let mut r = rng(seed);
        let source = build_bg(&small_groups()[4].cayley_presentation()).unwrap();
        let b = random_table_band(&mut r, 40, source.band());
        let green = green_classes(&b);
        for d in 0..green.num_d_classes() {
            let grid = dclass_grid(&b, &green, d, green.d_classes[d][0]).unwrap();
            let squares = singular_squares(&b, &green, &grid).unwrap();
            for i in 0..grid.nrows() {
                for k in i + 1..grid.nrows() {
                    for j in 0..grid.ncols() {
                        for l in j + 1..grid.ncols() {
                            let fast = squares.iter().any(|s| (s.i, s.k, s.j, s.l) == (i, k, j, l));
                            prop_assert_eq!(fast, is_singular_square_oracle(&b, &grid, (i, k, j, l)).unwrap());
                        }
                    }
                }
            }
        }
    }
}
