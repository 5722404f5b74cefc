use bootstrap3d::bounds::{classify, lower_bound, Status};
use bootstrap3d::constructions::builder::{BUNDLED_CATALOG, BUNDLED_FAMILIES};
use bootstrap3d::constructions::family::parse_families;
use bootstrap3d::constructions::milestones::{family_timeline, MilestoneTime};
use bootstrap3d::constructions::{Catalog, Region};
use bootstrap3d::engine::percolate_default;
use bootstrap3d::search::{find_at_bound, min_exhaustive, AnnealParams};
use bootstrap3d::{perfect_audit, GridDims};

#[test]
fn exhaustive_minimum_never_beats_the_bound() {
    for a in 1..=4 {
        for b in a..=6 {
            for c in b..=12 {
                if a * b * c > 24 {
                    continue;
                }
                let d = GridDims::new(a, b, c).unwrap();
                let res = min_exhaustive(d, 3, u64::MAX).unwrap();
                let min = res.min_size.unwrap();
                assert!(min as u64 >= lower_bound(d).1, "{d}: minimum {min}");
                let w = res.witness.unwrap();
                assert_eq!(w.len(), min);
                let class = classify(d, &w).unwrap().with_proven_minimum(min);
                assert!(class.percolates);
                assert_eq!(class.is_grid_minimum(), Some(true));
            }
        }
    }
}

#[test]
fn bundled_catalog_loads_and_verifies() {
    let catalog = Catalog::from_text(BUNDLED_CATALOG).unwrap();
    catalog.verify_all().unwrap();
    assert_eq!(catalog.to_text(), BUNDLED_CATALOG);
    for e in catalog.entries() {
        assert!(e.verified);
        if e.status == Status::Perfect {
            assert!(
                perfect_audit(&percolate_default(&e.seeds), &e.seeds).all_hold(),
                "{}",
                e.dims
            );
        }
    }
    for sides in [[4, 6, 9], [4, 9, 9], [3, 3, 3], [2, 3, 6], [2, 9, 12], [4, 4, 4]] {
        let d = GridDims::from_sides(sides).unwrap();
        assert!(catalog.lookup(d, Status::Perfect).is_some(), "{d} missing");
    }
}

#[test]
fn annealing_is_deterministic_and_verified() {
    let d = GridDims::new(3, 4, 5).unwrap();
    let first = find_at_bound(d, 16, &AnnealParams::default(), 4).unwrap();
    assert_eq!(first, find_at_bound(d, 16, &AnnealParams::default(), 4).unwrap());
    let w = first.witness.unwrap();
    assert_eq!(classify(d, &w).unwrap().status, Status::Optimal);
}

#[test]
fn family_layer_completes_at_affine_time() {
    let patterns = parse_families(BUNDLED_FAMILIES).unwrap();
    let p = patterns.iter().find(|p| p.id == "2x5").unwrap();
    let cs = [11, 17, 23];
    let ms = family_timeline(p, &cs, &[Region::layer(1), Region::full()]).unwrap();
    for m in &ms {
        let MilestoneTime::Affine { .. } = m.time else {
            panic!("{} is not affine: {}", m.region, m.time);
        };
        for c in cs {
            let seeds = p.seeds_for(c).unwrap();
            let trace = percolate_default(&seeds);
            if m.region == "whole grid" {
                assert_eq!(m.time.at(c).unwrap(), (trace.steps_taken() as i64).into());
            }
        }
    }
    assert_eq!(ms.last().unwrap().region, "whole grid");
}
