use proptest::prelude::*;

use quasilr::diophantine::{circle_gaps, frac, three_distance_gaps};
use quasilr::exact::{IntegerLattice, SymbolTable};
use quasilr::io::{parse_symbolic, preset};
use quasilr::partition::{classify_labels, patch_oracle, window_partition};
use quasilr::shapes::Shape;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn at_most_three_gaps(alpha in 0.001f64..0.999, n in 2usize..3000) {
        let gaps = three_distance_gaps(alpha, n);
        prop_assert!(gaps.len() <= 3);
        if gaps.len() == 3 {
            prop_assert!((gaps[2] - gaps[0] - gaps[1]).abs() < 1e-9, "{gaps:?}");
        }
    }

    #[test]
    fn gaps_sum_to_one(mut pts in prop::collection::vec(0.0f64..1.0, 1..200)) {
        let total: f64 = circle_gaps(&mut pts).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fibonacci_partition_matches_oracle(lo in -30i64..30, len in 1i64..25, start in -200i64..200) {
        let spec = preset("fibonacci").unwrap();
        let shape = Shape::rect(vec![lo], vec![lo + len]).unwrap();
        let part = window_partition(&spec, &shape).unwrap();
        // the cut at 0 is new unless 0 is in the shape
        let expected = len as u128 + 1 + u128::from(!(lo..=lo + len).contains(&0));
        prop_assert_eq!(part.component_count(), expected);
        let arcs: f64 = part.arcs[0].iter().sum();
        prop_assert!((arcs - 1.0).abs() < 1e-9);
        let labels: Vec<Vec<i64>> = (start..start + 300).map(|x| vec![x]).collect();
        prop_assert_eq!(classify_labels(&spec, &part, &labels).unwrap(), patch_oracle(&spec, &shape, &labels).unwrap());
    }

    #[test]
    fn lattice_is_generator_order_free(gens in prop::collection::vec(prop::collection::vec(-6i64..6, 2), 1..4)) {
        let mut rev = gens.clone();
        rev.reverse();
        let a = IntegerLattice::from_generators(2, &gens).unwrap();
        let b = IntegerLattice::from_generators(2, &rev).unwrap();
        prop_assert_eq!(&a, &b);
        for g in &gens {
            prop_assert!(a.contains(g));
        }
    }

    #[test]
    fn intersection_is_membership_and(
        g1 in prop::collection::vec(prop::collection::vec(-4i64..5, 2), 1..3),
        g2 in prop::collection::vec(prop::collection::vec(-4i64..5, 2), 1..3),
    ) {
        let a = IntegerLattice::from_generators(2, &g1).unwrap();
        let b = IntegerLattice::from_generators(2, &g2).unwrap();
        let both = a.intersect(&b).unwrap();
        for x in -6..=6 {
            for y in -6..=6 {
                let v = [x, y];
                prop_assert_eq!(both.contains(&v), a.contains(&v) && b.contains(&v));
            }
        }
    }

    #[test]
    fn rect_point_count(lo in prop::collection::vec(-5i64..5, 2), side in prop::collection::vec(1i64..6, 2)) {
        let hi: Vec<i64> = lo.iter().zip(&side).map(|(a, s)| a + s).collect();
        let shape = Shape::rect(lo, hi).unwrap();
        let expected: usize = side.iter().map(|s| (s + 1) as usize).product();
        prop_assert_eq!(shape.integer_points().len(), expected);
    }

    #[test]
    fn polytope_contains_its_generators(pts in prop::collection::vec(prop::collection::vec(-8i64..8, 2), 3..7)) {
        if let Ok(shape) = Shape::polytope(pts.clone()) {
            for p in &pts {
                prop_assert!(shape.contains(p));
            }
            let inside = shape.integer_points();
            prop_assert!(pts.iter().all(|p| inside.contains(p)));
        }
    }

    #[test]
    fn expression_values(a in -20i64..20, b in 1i64..9, c in -5i64..5, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let mut table = SymbolTable::new();
        let text = format!("{a}/{b} + {c}*sqrt({p})");
        let x = parse_symbolic(&text, &mut table).unwrap();
        let want = a as f64 / b as f64 + c as f64 * (p as f64).sqrt();
        prop_assert!((x.eval(&table) - want).abs() < 1e-9);
        prop_assert_eq!(x.is_rational(), c == 0);
    }

    #[test]
    fn frac_is_in_unit_interval(x in -1e6f64..1e6) {
        let f = frac(x);
        prop_assert!((0.0..1.0).contains(&f));
    }
}
