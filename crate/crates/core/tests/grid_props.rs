mod common;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use quasicop::sample;
use quasicop::{envelope, Axis, GridFunction, IndexRect, Rational, RectGaggle};
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaggle_volume_is_additive(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let unit = rng.gen_bool(0.5);
        let (fx, fy) = margins(&mut rng, 4, unit);
        let mesh = mesh_of(&fx, &fy);
        let f = arbitrary_grid(&mut rng, &mesh, false, 7);
        let g = sample::gaggle(&mut rng, &mesh, 4);
        let members = g.members();
        let cut = rng.gen_range(0..=members.len());
        let mut total = Rational::zero();
        for part in [&members[..cut], &members[cut..]] {
            if !part.is_empty() {
                total += f.gaggle_volume(&RectGaggle::new(part.to_vec()).unwrap()).unwrap();
            }
        }
        let direct = f.gaggle_volume(&g).unwrap();
        prop_assert_eq!(&direct, &total);
        // Against the corner-sum definition.
        let mut by_corners = Rational::zero();
        for ((i, j), m) in corner_multiplicities(members) {
            by_corners += f.get(i, j) * Rational::from_integer(m.into());
        }
        prop_assert_eq!(direct, by_corners);
    }

    #[test]
    fn classification_is_monotone(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (fx, fy) = random_margins(&mut rng, 4, 0.5);
        let mesh = mesh_of(&fx, &fy);
        let f = match rng.gen_range(0..3) {
            0 => {
                let grounded = rng.gen_bool(0.7);
                arbitrary_grid(&mut rng, &mesh, grounded, 4)
            }
            1 => sample::quasi_distribution(&mut rng, &fx, &fy),
            _ => sample::distribution(&mut rng, &fx, &fy, 2),
        };
        let c = f.classify();
        prop_assert!(!c.holds_c || c.holds_b);
        prop_assert!(!c.holds_b || c.holds_a);
        prop_assert_eq!(c.holds_a, f.is_grounded());
    }

    #[test]
    fn cell_check_matches_exhaustive_rectangle_scan(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (fx, fy) = random_margins(&mut rng, 3, 0.5);
        let mesh = mesh_of(&fx, &fy);
        let f = if rng.gen_bool(0.5) {
            sample::quasi_distribution(&mut rng, &fx, &fy)
        } else {
            arbitrary_grid(&mut rng, &mesh, true, 3)
        };
        let (p, q) = (mesh.x().last(), mesh.y().last());
        let mut all_nonneg = true;
        for i1 in 0..p {
            for i2 in i1 + 1..=p {
                for j1 in 0..q {
                    for j2 in j1 + 1..=q {
                        all_nonneg &= !f.volume(&IndexRect::new(i1, i2, j1, j2).unwrap()).unwrap().is_negative();
                    }
                }
            }
        }
        // Grounded inputs: (C) on cells is equivalent to every rectangle.
        prop_assert_eq!(f.classify().holds_c, all_nonneg);
    }

    #[test]
    fn envelopes_of_quasi_distributions_are_quasi(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (fx, fy) = random_margins(&mut rng, 4, 0.5);
        let n = rng.gen_range(1..=4);
        let fs: Vec<GridFunction> = (0..n).map(|_| sample::quasi_distribution(&mut rng, &fx, &fy)).collect();
        let (lo, hi) = envelope(&fs).unwrap();
        prop_assert!(lo.classify().holds_b);
        prop_assert!(hi.classify().holds_b);
        for f in &fs {
            prop_assert!(lo.le(f) && f.le(&hi));
        }
    }

    #[test]
    fn reflection_is_an_involution(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (fx, fy) = random_margins(&mut rng, 4, 0.5);
        let f = sample::quasi_distribution(&mut rng, &fx, &fy);
        for axis in [Axis::X, Axis::Y] {
            let r = f.reflect(axis).unwrap();
            prop_assert!(r.classify().holds_b);
            prop_assert_eq!(r.reflect(axis).unwrap(), f.clone());
        }
        // The reflected x-margin at index i is 1 - F_X at the mirrored index.
        let r = f.reflect(Axis::X).unwrap();
        let (rx, ry) = r.margins().unwrap();
        let p = fx.values().len() - 1;
        for i in 0..=p {
            prop_assert_eq!(&rx.values()[i], &(Rational::from_integer(1.into()) - &fx.values()[p - i]));
        }
        prop_assert_eq!(ry.values(), fy.values());
    }
}
