//! Properties of the measurement layer.

use polyassembly::assembly::{simulate, StepRule};
use polyassembly::metrics::{
    box_dimension, density, f_grid, linear_fit, mann_kendall, persistent_transitions, run_batch, Phase, SlopeEstimate,
};
use polyassembly::sweep::with_workers;
use polyassembly::tiles::{enumerate_pairs, Interaction, TileSystem};
use proptest::prelude::*;

fn estimate(f: f64, slope: f64) -> SlopeEstimate {
    SlopeEstimate {
        f,
        slope,
        stderr: 0.0,
        n_eval: 50_000,
        reps: 50,
        terminated_frac: 0.0,
        insufficient: false,
        mean_a_end: if slope < 0.0 { 0.0 } else { 10.0 },
    }
}

proptest! {
    #[test]
    fn linear_fit_recovers_exact_lines(a in -5.0..5.0f64, b in -100.0..100.0f64, n in 3usize..50) {
        let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let (slope, intercept, stderr, _) = linear_fit(&xs, &ys);
        prop_assert!((slope - a).abs() < 1e-9);
        prop_assert!((intercept - b).abs() < 1e-7);
        prop_assert!(stderr < 1e-6);
    }

    #[test]
    fn grid_points_are_ordered_and_in_range(lo in 0.0..0.5f64, span in 0.0..0.5f64, step in 0.01..0.3f64) {
        let g = f_grid(lo, lo + span, step).unwrap();
        prop_assert!((g[0] - lo).abs() < 1e-8);
        prop_assert!(g.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(g.iter().all(|&f| (0.0..=1.0).contains(&f) && f <= lo + span + 1e-8));
    }

    /// Any bound-then-unbound step pattern with runs of two or more on each
    /// side is found at exactly its boundaries.
    #[test]
    fn persistent_transitions_find_clean_boundaries(runs in prop::collection::vec(2usize..6, 1..5), start_bound in any::<bool>()) {
        let mut slopes = Vec::new();
        let mut boundaries = Vec::new();
        let mut bound = start_bound;
        for r in &runs {
            if !slopes.is_empty() {
                boundaries.push(slopes.len() - 1);
            }
            slopes.extend(std::iter::repeat_n(if bound { -1.0 } else { 1.0 }, *r));
            bound = !bound;
        }
        let scan: Vec<SlopeEstimate> =
            slopes.iter().enumerate().map(|(i, &s)| estimate(i as f64 / 100.0, s)).collect();
        prop_assert_eq!(persistent_transitions(&scan), boundaries);
    }

    /// A single-point blip inside a phase is never a transition.
    #[test]
    fn isolated_flips_are_ignored(n in 5usize..20, at in 1usize..4) {
        let mut scan: Vec<SlopeEstimate> = (0..n).map(|i| estimate(i as f64 / 100.0, -1.0)).collect();
        let k = at.min(n - 2);
        scan[k] = estimate(scan[k].f, 1.0);
        scan[k].stderr = 10.0;
        prop_assert!(persistent_transitions(&scan).is_empty());
        prop_assert_eq!(scan[k].phase(), Phase::Unbound);
    }

    #[test]
    fn mann_kendall_detects_strict_trends(n in 8usize..40, up in any::<bool>()) {
        let xs: Vec<f64> = (0..n).map(|i| if up { i as f64 } else { -(i as f64) }).collect();
        let (s, z, p) = mann_kendall(&xs);
        prop_assert_eq!(s.signum(), if up { 1 } else { -1 });
        prop_assert_eq!(z > 0.0, up);
        prop_assert!(p < 0.01);
    }

    #[test]
    fn density_is_a_fraction(i in 0usize..106, asym in any::<bool>(), f in 0.0..=1.0f64, seed in any::<u64>()) {
        let p = enumerate_pairs()[i];
        let mode = if asym { Interaction::Asymmetric } else { Interaction::Symmetric };
        let sys = TileSystem::pair(p.a, p.b, mode, f).unwrap();
        let d = density(&simulate(&sys, seed, 0, 300, 300, StepRule::Conditioned).assembly);
        prop_assert!((0.0..=1.0).contains(&d));
    }
}

#[test]
fn box_dimension_of_two_disjoint_copies_matches_one() {
    // A diagonal staircase: dimension one, but not axis aligned.
    let one: Vec<(i32, i32)> = (0..300).flat_map(|i| [(i, i), (i + 1, i)]).collect();
    let two: Vec<(i32, i32)> = one.iter().flat_map(|&(x, y)| [(x, y), (x + 320, y)]).collect();
    let a = box_dimension(&one, 128).unwrap().dimension;
    let b = box_dimension(&two, 128).unwrap().dimension;
    assert!((a - b).abs() < 0.05, "{a} vs {b}");
}

#[test]
fn sierpinski_carpet_dimension() {
    fn inside(mut x: i32, mut y: i32) -> bool {
        while x > 0 || y > 0 {
            if x % 3 == 1 && y % 3 == 1 {
                return false;
            }
            x /= 3;
            y /= 3;
        }
        true
    }
    let cells: Vec<(i32, i32)> =
        (0..243).flat_map(|x| (0..243).map(move |y| (x, y))).filter(|&(x, y)| inside(x, y)).collect();
    let d = box_dimension(&cells, 128).unwrap().dimension;
    // ln 8 / ln 3 = 1.893; power-of-two boxes on a base-3 set bias it slightly.
    assert!((d - 1.893).abs() < 0.08, "{d}");
}

#[test]
fn batches_do_not_depend_on_worker_count() {
    let p = enumerate_pairs()[40];
    let sys = TileSystem::pair(p.a, p.b, Interaction::Symmetric, 0.4).unwrap();
    let run = |w| {
        with_workers(w, || {
            run_batch(&sys, 16, 2_000, 100, StepRule::Conditioned, 9)
                .into_iter()
                .map(|r| (r.trace, r.density.to_bits()))
                .collect::<Vec<_>>()
        })
    };
    assert_eq!(run(1), run(8));
}
