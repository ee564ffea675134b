mod common;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use quasicop::sample;
use quasicop::{check_q, exact_cap, gamma, l_value, patch_sweep, sandwich_decide, GridFunction};
use rand::Rng;

fn witness_is_valid(w: &GridFunction, a: &GridFunction, b: &GridFunction) -> bool {
    w.classify().holds_c && a.le(w) && w.le(b) && w.margins().unwrap() == a.margins().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sandwich_matches_brute_force(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (fx, fy) = margins(&mut rng, 2, true);
        let (a, b) = sample::quasi_pair(&mut rng, &fx, &fy);
        let brute = brute_bounds(&a, &b, a.mesh().cell_count());
        let cert = sandwich_decide(&a, &b).unwrap();
        prop_assert_eq!(cert.is_feasible(), !brute.min_l.is_negative());
    }

    #[test]
    fn certificates_are_sound(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (fx, fy) = random_margins(&mut rng, 4, 0.5);
        let (a, b) = sample::quasi_pair(&mut rng, &fx, &fy);
        let cert = sandwich_decide(&a, &b).unwrap();
        prop_assert!(cert.verify(&a, &b).is_ok());
        match (cert.witness(), cert.certificate()) {
            (Some(w), None) => prop_assert!(witness_is_valid(w, &a, &b)),
            (None, Some((g, l))) => {
                prop_assert!(l.is_negative());
                prop_assert_eq!(&l_value(&a, &b, g).unwrap(), l);
            }
            _ => prop_assert!(false, "exactly one of witness and certificate"),
        }
    }

    #[test]
    fn patch_replay_matches_gamma(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (fx, fy) = random_margins(&mut rng, 3, 0.5);
        let (a, b) = sample::quasi_pair(&mut rng, &fx, &fy);
        let mesh = a.mesh().clone();
        let cap = exact_cap(&mesh);
        prop_assume!(check_q(&a, &b, cap).unwrap().passes());
        let trace = patch_sweep(&a, &b, cap).unwrap();
        let all_gammas = |f: &GridFunction| -> Vec<quasicop::Rational> {
            (0..=mesh.x().last())
                .flat_map(|i| (0..=mesh.y().last()).map(move |j| (i, j)))
                .map(|pt| gamma(f, &b, pt, cap).unwrap())
                .collect()
        };
        let mut current = a.clone();
        let mut gammas = all_gammas(&current);
        let mut steps = trace.steps.iter().peekable();
        for i in 0..=mesh.x().last() {
            for j in 0..=mesh.y().last() {
                let g = gamma(&current, &b, (i, j), cap).unwrap();
                prop_assert!(!g.is_negative());
                if g.is_zero() {
                    continue;
                }
                let step = steps.next().expect("a step for every positive gamma");
                prop_assert_eq!(step.point, (i, j));
                prop_assert_eq!(&step.t, &g);
                current = current.with_value(i, j, current.get(i, j) + &g).unwrap();
                // (Q) survives every raise and no gamma grows.
                prop_assert!(check_q(&current, &b, cap).unwrap().passes());
                let next = all_gammas(&current);
                prop_assert!(next.iter().zip(&gammas).all(|(n, o)| n <= o));
                gammas = next;
            }
        }
        prop_assert!(steps.next().is_none());
        prop_assert_eq!(&current, &trace.final_grid);
        prop_assert!(witness_is_valid(&current, &a, &b));
        for i in 0..=mesh.x().last() {
            for j in 0..=mesh.y().last() {
                prop_assert!(gamma(&current, &b, (i, j), cap).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn distributions_are_fixed_points(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (fx, fy) = random_margins(&mut rng, 3, 0.5);
        let k = rng.gen_range(1..=3);
        let f = sample::distribution(&mut rng, &fx, &fy, k);
        let trace = patch_sweep(&f, &f, exact_cap(f.mesh())).unwrap();
        prop_assert!(trace.steps.is_empty());
        let cert = sandwich_decide(&f, &f).unwrap();
        prop_assert_eq!(cert.witness(), Some(&f));
    }
}
