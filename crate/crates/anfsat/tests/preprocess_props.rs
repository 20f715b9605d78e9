use std::collections::BTreeSet;

use anfsat::cnf::{code_to_model, model_to_code};
use anfsat::descriptor::{solve, SolveOptions};
use anfsat::dimacs::{emit_dimacs, parse_dimacs, DimacsDocument};
use anfsat::oracle::brute_force;
use anfsat::preprocess::{
    apply_model_back, parse_var_map, permute_trajectories, permute_trajectories_with_state,
    sort_problem, write_var_map,
};
use anfsat::{Clause, Problem};
use proptest::prelude::*;

fn clause(n: u32) -> impl Strategy<Value = Clause> {
    (prop::sample::subsequence((1..=n).collect::<Vec<_>>(), 3), prop::array::uniform3(any::<bool>()))
        .prop_map(|(vs, signs)| {
            let l = |i: usize| if signs[i] { vs[i] as i32 } else { -(vs[i] as i32) };
            Clause::from_dimacs([l(0), l(1), l(2)]).unwrap()
        })
}

fn problem(max_n: u32, max_m: usize) -> impl Strategy<Value = Problem> {
    (3..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(clause(n), 0..=max_m)
            .prop_map(move |cs| Problem::new(n as usize, cs).unwrap())
    })
}

fn models(p: &Problem) -> BTreeSet<u64> {
    brute_force(p).unwrap().models.unwrap()
}

fn mapped_back(q: &Problem) -> BTreeSet<u64> {
    models(q)
        .iter()
        .map(|&c| model_to_code(&apply_model_back(q, &code_to_model(c, q.n())).unwrap()))
        .collect()
}

proptest! {
    #[test]
    fn sort_postconditions(p in problem(12, 40)) {
        let s = sort_problem(&p);
        let counts = s.polarity_counts();
        prop_assert!(counts.windows(2).all(|w| w[0].0 + w[0].1 >= w[1].0 + w[1].1));
        prop_assert!(counts.iter().all(|&(pos, neg)| neg >= pos));
        let keys: Vec<(u32, bool)> =
            s.clauses().iter().map(|c| (c.max_var(), c.highest().positive)).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] <= w[1]));
        let mut remap = s.remap().to_vec();
        remap.sort_unstable();
        prop_assert_eq!(remap, (1..=p.n() as u32).collect::<Vec<_>>());
    }

    #[test]
    fn transformations_preserve_model_sets(p in problem(10, 40)) {
        let original = models(&p);
        let sorted = sort_problem(&p);
        let permuted = permute_trajectories(&sorted);
        for q in [&sorted, &permuted] {
            prop_assert_eq!(models(q).len(), original.len());
            prop_assert_eq!(mapped_back(q), original.clone());
        }
        let out = solve(&permuted, &SolveOptions::default()).unwrap();
        prop_assert_eq!(out.decision.is_sat(), !original.is_empty());
    }

    #[test]
    fn no_two_trajectories_share_a_high_index(p in problem(14, 50)) {
        let (_, st) = permute_trajectories_with_state(&sort_problem(&p));
        for a in &st.hops {
            prop_assert!(a.to < a.from);
            if a.to < st.threshold {
                continue;
            }
            prop_assert!(!a.merged);
            for b in &st.hops {
                if b.to == a.to {
                    prop_assert_eq!(a.trajectory, b.trajectory);
                }
            }
        }
    }

    #[test]
    fn var_map_round_trip(p in problem(12, 30)) {
        let s = permute_trajectories(&sort_problem(&p));
        let (remap, flips) = parse_var_map(&write_var_map(&s)).unwrap();
        prop_assert_eq!(&remap[..], s.remap());
        prop_assert_eq!(&flips[..], s.flips());
    }

    #[test]
    fn dimacs_round_trip(p in problem(20, 30), comments in prop::collection::vec("[a-z ]{0,12}", 0..3)) {
        let comments: Vec<String> = comments.into_iter().map(|c| c.trim().to_string()).collect();
        let doc = DimacsDocument { comments, problem: p };
        prop_assert_eq!(parse_dimacs(&emit_dimacs(&doc)).unwrap(), doc);
    }
}

#[test]
fn joined_chains_are_separated_by_a_swap() {
    // Two trajectories 10 → 8 and 9 → 8 join at x_8; with α = 1 only
    // indices below 3 may stay shared. The swap relabels x_8 as x_7 in every
    // clause, so the index chains separate while the clauses still share it.
    let p = Problem::from_dimacs_clauses(10, &[[-2, -8, -9], [-1, -8, -10]]).unwrap();
    let (q, st) = permute_trajectories_with_state(&p);
    let targets = |t: u32| -> BTreeSet<u32> {
        st.hops.iter().filter(|h| h.trajectory == t).map(|h| h.to).collect()
    };
    assert_eq!(targets(10), BTreeSet::from([8, 1]));
    assert_eq!(targets(9), BTreeSet::from([7, 2]));
    assert!(targets(10).is_disjoint(&targets(9)));
    let hop9 = st.hops.iter().find(|h| h.from == 9).unwrap();
    assert_eq!((hop9.to, hop9.swaps), (7, 1));
    let shown: Vec<String> = q.clauses().iter().map(|c| c.to_string()).collect();
    assert_eq!(shown, ["-2 -7 -9", "-1 -7 -10"]);
    assert_eq!(mapped_back(&q), models(&p));
}

#[test]
fn disjoint_trajectories_keep_labels() {
    let p = Problem::from_dimacs_clauses(10, &[[-3, -4, -9], [-1, -2, -10]]).unwrap();
    let (q, st) = permute_trajectories_with_state(&p);
    assert!(st.hops.iter().all(|h| h.swaps == 0));
    assert_eq!(q.remap(), (1..=10).collect::<Vec<u32>>());
    assert_eq!(q.clauses(), p.clauses());
}

#[test]
fn low_joins_are_left_merged() {
    // m/n rounds up to 1, so joins below index 3 are allowed.
    let p = Problem::from_dimacs_clauses(6, &[[-1, -2, -6], [-1, -2, -5]]).unwrap();
    let (_, st) = permute_trajectories_with_state(&p);
    assert_eq!(st.threshold, 3);
    assert!(st.hops.iter().any(|h| h.merged && h.to == 2));
    assert!(st.hops.iter().all(|h| h.swaps == 0));
}

#[test]
fn relabeled_family_stays_linear() {
    // ∧ (¬y_{2i−1} ∨ ¬y_{2i} ∨ ¬y_{2m+1}) relabeled with z_1 = y_{2m+1}.
    for m in 1..=6 {
        let cs: Vec<[i32; 3]> = (1..=m).map(|i| [-(2 * i), -(2 * i + 1), -1]).collect();
        let p = Problem::from_dimacs_clauses(2 * m as usize + 1, &cs).unwrap();
        assert_eq!(solve(&p, &SolveOptions::default()).unwrap().max_len(), 2);
    }
}
