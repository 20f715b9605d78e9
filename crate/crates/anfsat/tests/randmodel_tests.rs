use anfsat::oracle::brute_force;
use anfsat::randmodel::{
    expected_solutions, expected_solutions_crossing, expected_solutions_log2, feasible_alpha,
    gen_exact_uniform, m_alpha_curve, observed_m_alpha, solution_count_bounds,
    solution_decay_curve, threshold_exact, usual_alpha_correction, GenSpec, TrajectoryDraws,
};
use anfsat::{Clause, Problem};
use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

fn uniform_instance() -> Problem {
    Problem::from_dimacs_clauses(
        3,
        &[
            [1, -2, -3],
            [1, 2, -3],
            [-1, -2, -3],
            [-1, 2, -3],
            [1, -2, 3],
            [1, 2, 3],
            [-1, -2, 3],
            [-1, 2, 3],
        ],
    )
    .unwrap()
}

#[test]
fn decay_on_the_uniform_instance() {
    let d = solution_decay_curve(&uniform_instance()).unwrap();
    let observed: Vec<u64> = d.steps.iter().map(|s| s.observed).collect();
    assert_eq!(observed, [7, 6, 5, 4, 3, 2, 1, 0]);
    assert_eq!(d.steps[0].theoretical, 7.0);
    for s in &d.steps {
        assert!(s.lower <= s.observed && s.observed <= s.upper, "{s:?}");
    }
}

#[test]
fn unsound_minus_one_bound_counterexample() {
    // Three clauses over x_1..x_4 where the third removes nothing new:
    // the count reaches 12, above a "−1" style bound of 11.
    let p = Problem::from_dimacs_clauses(4, &[[1, 2, 3], [1, 2, -3], [1, 2, 4]]).unwrap();
    let d = solution_decay_curve(&p).unwrap();
    assert_eq!(d.steps[2].observed, 12);
    assert!(d.steps[2].upper >= 12);
}

#[test]
fn m_alpha_profile_matches_generated_instances() {
    // α = 4.30 is not exact-uniform feasible at n = 175; the nearest is 4.
    let alpha = feasible_alpha(175, 4.30);
    assert_eq!(alpha, Rational64::from_integer(4));
    let curve = observed_m_alpha(175, alpha, 200, 1).unwrap();
    let inside = curve
        .points
        .iter()
        .filter(|p| {
            let (o, se) = (p.observed.unwrap(), p.stderr.unwrap());
            (o - p.value).abs() <= 3.0 * se.max(1e-9)
        })
        .count();
    // Per-index 3σ coverage is about 99.7%; allow a few misses.
    assert!(inside * 100 >= curve.points.len() * 97, "{inside} of {}", curve.points.len());
    let total: f64 = curve.points.iter().map(|p| p.observed.unwrap()).sum();
    assert!((total - 700.0).abs() < 1e-9);
}

#[test]
fn m_alpha_curve_is_single_peaked() {
    for draws in [TrajectoryDraws::ExpectedSupport, TrajectoryDraws::TwiceExpectedSupport] {
        for n in [10_000usize, 100_000] {
            for alpha in 2..=10 {
                let c = m_alpha_curve(n, alpha as f64, n, draws);
                let v: Vec<f64> = c.points.iter().map(|p| p.m_sum).collect();
                let peak = c.peak().unwrap().k;
                assert!(v[..=peak].windows(2).all(|w| w[0] <= w[1]), "α={alpha} n={n} {draws:?}");
                assert!(v[peak..].windows(2).all(|w| w[0] >= w[1]), "α={alpha} n={n} {draws:?}");
            }
        }
    }
}

#[test]
fn alpha_5_12_peak_is_reported() {
    let c = m_alpha_curve(100_000, 5.12, 100_000, TrajectoryDraws::default());
    let peak = c.peak().unwrap().m_sum;
    assert!((peak - 490.0).abs() <= 0.15 * 490.0, "{peak}");
}

#[test]
fn expected_solutions_decrease_and_cross_one_near_the_threshold() {
    for n in [3usize, 10, 40] {
        for m in 1..4 * n {
            assert!(expected_solutions(n, m + 1).unwrap() < expected_solutions(n, m).unwrap());
        }
    }
    for n in [300usize, 1000, 5000] {
        let x = expected_solutions_crossing(n);
        assert!((x - threshold_exact()).abs() < 0.01, "n={n}: {x}");
        let m = (x * n as f64).floor() as usize;
        assert!(expected_solutions_log2(n, m) >= 0.0);
        assert!(expected_solutions_log2(n, m + 1) < 0.0);
    }
}

#[test]
fn correction_vanishes_at_zero() {
    assert!(usual_alpha_correction(1e-12).abs() < 1e-5);
}

#[test]
fn final_count_bounds_hold_on_generated_instances() {
    for seed in 0..50 {
        let n = 12;
        let spec = GenSpec { n, alpha: Rational64::from_integer(2), seed };
        let p = gen_exact_uniform(&spec).unwrap();
        let (lo, hi) = solution_count_bounds(n, p.m()).unwrap();
        let c = BigInt::from(brute_force(&p).unwrap().count);
        assert!(lo <= c && c <= hi);
    }
}

fn clause(n: u32) -> impl Strategy<Value = Clause> {
    (prop::sample::subsequence((1..=n).collect::<Vec<_>>(), 3), prop::array::uniform3(any::<bool>()))
        .prop_map(|(vs, signs)| {
            let l = |i: usize| if signs[i] { vs[i] as i32 } else { -(vs[i] as i32) };
            Clause::from_dimacs([l(0), l(1), l(2)]).unwrap()
        })
}

proptest! {
    #[test]
    fn decay_bounds_are_sound(cs in prop::collection::vec(clause(9), 1..30)) {
        let p = Problem::new(9, cs).unwrap();
        let d = solution_decay_curve(&p).unwrap();
        for s in &d.steps {
            prop_assert!(s.lower <= s.observed && s.observed <= s.upper, "{:?}", s);
        }
    }

    #[test]
    fn generator_is_exact_uniform(n in 3usize..40, target in 0.5f64..9.0, seed in any::<u64>()) {
        let alpha = feasible_alpha(n, target);
        let p = gen_exact_uniform(&GenSpec { n, alpha, seed }).unwrap();
        let k = (alpha * Rational64::new(3, 2)).to_integer() as usize;
        prop_assert!(p.polarity_counts().iter().all(|&c| c == (k, k)));
        prop_assert_eq!(Rational64::from_integer(p.m() as i64), alpha * Rational64::from_integer(n as i64));
    }
}
