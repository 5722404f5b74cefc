use bootstrap3d::constructions::{extract_milestones, Region};
use bootstrap3d::engine::percolate_default;
use bootstrap3d::textgrid::{parse_seed_file, write_seeds};
use bootstrap3d::{
    degree_pair_sum, lower_bound, neighbours, percolate, step, surface_quantity, CellSet, GridDims, Transform,
};
use proptest::prelude::*;

fn dims(max: usize) -> impl Strategy<Value = GridDims> {
    (1..=max, 1..=max, 1..=max).prop_map(|(a, b, c)| GridDims::new(a, b, c).unwrap())
}

/// A grid with a random seed set of the given density in percent.
fn seeded(max: usize, density: u32) -> impl Strategy<Value = CellSet> {
    dims(max).prop_flat_map(move |d| {
        proptest::collection::vec(proptest::bool::weighted(f64::from(density) / 100.0), d.cell_count())
            .prop_map(move |bits| CellSet::from_indices(d, bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)))
    })
}

/// Two nested seed sets on the same grid.
fn nested(max: usize) -> impl Strategy<Value = (CellSet, CellSet)> {
    dims(max).prop_flat_map(|d| {
        proptest::collection::vec(0u8..4, d.cell_count()).prop_map(move |v| {
            let small = CellSet::from_indices(d, v.iter().enumerate().filter(|(_, &x)| x == 0).map(|(i, _)| i));
            let big = CellSet::from_indices(d, v.iter().enumerate().filter(|(_, &x)| x <= 1).map(|(i, _)| i));
            (small, big)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn surface_quantity_never_increases(seeds in seeded(6, 30)) {
        let d = seeds.dims();
        let trace = percolate_default(&seeds);
        for t in 0..trace.steps_taken() {
            prop_assert!(surface_quantity(d, &trace.frame(t + 1)) <= surface_quantity(d, &trace.frame(t)));
        }
    }

    #[test]
    fn fixed_point_is_stable(seeds in seeded(6, 25), r in 1usize..=4) {
        let d = seeds.dims();
        let trace = percolate(d, r, &seeds, d.cell_count());
        prop_assert!(!trace.is_truncated());
        let last = trace.final_set();
        prop_assert_eq!(step(d, r, &last), last);
    }

    #[test]
    fn infection_times_are_consistent(seeds in seeded(5, 25), r in 2usize..=3) {
        let d = seeds.dims();
        let trace = percolate(d, r, &seeds, d.cell_count());
        for v in d.cells() {
            let Some(t) = trace.infection_time(v) else { continue };
            if t == 0 {
                prop_assert!(seeds.contains(v));
                continue;
            }
            let earlier = neighbours(d, v)
                .unwrap()
                .into_iter()
                .filter(|&n| trace.infection_time(n).is_some_and(|u| u < t))
                .count();
            prop_assert!(earlier >= r);
            prop_assert_eq!(trace.neighbours_at_infection(v), Some(earlier));
            let before = trace.frame(t - 1);
            for u in d.cells() {
                prop_assert_eq!(before.contains(u), trace.infection_time(u).is_some_and(|s| s < t));
            }
        }
    }

    #[test]
    fn larger_seed_sets_infect_more((small, big) in nested(6)) {
        prop_assert!(small.is_subset(&big));
        let a = percolate_default(&small).final_set();
        let b = percolate_default(&big).final_set();
        prop_assert!(a.is_subset(&b));
    }

    #[test]
    fn automorphisms_preserve_percolation(seeds in seeded(4, 40)) {
        let d = seeds.dims();
        let percolates = percolate_default(&seeds).percolated();
        for t in Transform::automorphisms(d) {
            let moved = seeds.transform(&t);
            prop_assert_eq!(moved.len(), seeds.len());
            prop_assert_eq!(percolate_default(&moved).percolated(), percolates);
        }
    }

    #[test]
    fn bound_is_symmetric(d in dims(30)) {
        let [a, b, c] = d.sides();
        for [x, y, z] in [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            prop_assert_eq!(lower_bound(GridDims::new(x, y, z).unwrap()), lower_bound(d));
        }
    }

    #[test]
    fn seed_file_round_trip(seeds in seeded(8, 35)) {
        let text = write_seeds(&seeds);
        let (d, back) = parse_seed_file(&text).unwrap();
        prop_assert_eq!(d, seeds.dims());
        prop_assert_eq!(&back, &seeds);
        prop_assert_eq!(write_seeds(&back), text);
    }

    #[test]
    fn nested_regions_complete_in_order(seeds in seeded(5, 45), k in 1usize..=5) {
        let trace = percolate_default(&seeds);
        // layer 1 inside the first k layers inside the whole grid
        let regions = [
            Region::full(),
            Region::new("first layers", move |_, c| c.x < k),
            Region::layer(1),
        ];
        let ms = extract_milestones(&trace, &regions).unwrap();
        let time = |name: &str| ms.iter().find(|m| m.region == name).unwrap().time.at(0);
        let (inner, middle, outer) = (time("layer 1"), time("first layers"), time("whole grid"));
        // None means the region never completes, which is ordered last
        let key = |t: Option<_>| (t.is_none(), t);
        prop_assert!(key(inner) <= key(middle));
        prop_assert!(key(middle) <= key(outer));
    }
}

#[test]
fn full_grid_degree_pair_sum_closed_form() {
    for a in 1..=6u64 {
        for b in 1..=6u64 {
            for c in 1..=6u64 {
                let d = GridDims::new(a as usize, b as usize, c as usize).unwrap();
                let expected = 6 * a * b * c - 2 * a * b - 2 * a * c - 2 * b * c;
                assert_eq!(degree_pair_sum(d, &CellSet::full(d)), expected, "{d}");
            }
        }
    }
}
