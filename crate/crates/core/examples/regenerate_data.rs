//! Regenerates `data/families.txt` and `data/catalog.txt`.
//!
//! Both files are committed; this tool only documents and reproduces how
//! they were made. Run with `cargo run --release --example regenerate_data`.

use std::time::Instant;

use bootstrap3d::bounds::{lower_bound, perfect_precondition, Status};
use bootstrap3d::constructions::catalog::{Catalog, CatalogEntry, Provenance};
use bootstrap3d::constructions::family::{
    discover_family, write_families, DiscoveryParams, FamilySpec, STANDARD_FAMILIES,
};
use bootstrap3d::search::{find_at_bound, AnnealParams};
use bootstrap3d::GridDims;

const FAMILY_SEED: u64 = 1;
const SEED_TRIES: u64 = 8;

/// Grids searched at their bound.
fn targets() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    // three-layer grids
    for c in 3..=9 {
        out.push([3, 3, c]);
    }
    for u in 2..=7 {
        out.push([3, u, 9]);
    }
    out.extend([[3, 4, 5], [3, 4, 6]]);
    // thickness-2 ingredients outside the periodic families
    out.extend([[2, 3, 6], [2, 3, 9], [2, 6, 9], [2, 5, 8], [2, 8, 11], [2, 9, 12]]);
    // small thickness-4 grids
    out.extend([[4, 4, 4], [4, 6, 9], [4, 9, 9], [4, 4, 8]]);
    // small optimal grids with a in {4, 5}
    for a in [4, 5] {
        for b in 2..=7 {
            for c in b..=7 {
                out.push([a, b, c]);
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|s| {
        let mut k = *s;
        k.sort_unstable();
        seen.insert(k)
    });
    out
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

    let mut patterns = Vec::new();
    for &(id, ..) in STANDARD_FAMILIES.iter() {
        let spec = FamilySpec::standard(id).expect("standard id");
        let t = Instant::now();
        let d = discover_family(&spec, &DiscoveryParams::default(), FAMILY_SEED)?;
        let p = d.pattern.ok_or_else(|| format!("family {id} not found"))?;
        eprintln!("family {id}: {} attempts, {:?}", d.attempts, t.elapsed());
        patterns.push(p);
    }
    std::fs::write(format!("{data}/families.txt"), write_families(&patterns))?;

    let mut catalog = Catalog::new();
    for sides in targets() {
        let dims = GridDims::from_sides(sides)?;
        let target = lower_bound(dims).1 as usize;
        let status = if perfect_precondition(dims) {
            Status::Perfect
        } else {
            Status::Optimal
        };
        let t = Instant::now();
        let mut done = false;
        for seed in 1..=SEED_TRIES {
            let res = find_at_bound(dims, target, &AnnealParams::default(), seed)?;
            if let Some(w) = res.witness {
                let entry =
                    CatalogEntry::new(w, status, Provenance::SearchedHeuristic { rng_seed: seed }).verified()?;
                eprintln!("{dims} {status} size {target}: seed {seed}, {:?}", t.elapsed());
                catalog.insert(entry);
                done = true;
                break;
            }
        }
        if !done {
            eprintln!("{dims} {status} size {target}: NOT FOUND after {SEED_TRIES} seeds");
        }
    }
    std::fs::write(format!("{data}/catalog.txt"), catalog.to_text())?;
    Ok(())
}
