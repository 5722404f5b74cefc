//! Four-octant composition of witnesses.
//!
//! Parts `p1 = (a1,b1,c1)`, `p2 = (a2,b2,c1)`, `p3 = (a2,b1,c2)` and
//! `p4 = (a1,b2,c2)` sit in alternating corners of the `(a1+a2, b1+b2, c1+c2)`
//! grid: `p1` at the origin, `p2` shifted along the first two axes, `p3` along
//! the first and third, `p4` along the last two. Each part fills its own box,
//! after which every empty box has three full faces around one of its
//! corners and fills as well.

use crate::bounds::{classify, Status};
use crate::constructions::catalog::{CatalogEntry, Provenance};
use crate::error::{Error, Result};
use crate::grid::{Cell, CellSet, GridDims, Transform};

/// Dimensions of the combined grid, checking that the parts fit together.
pub fn combined_dims(p1: GridDims, p2: GridDims, p3: GridDims, p4: GridDims) -> Result<GridDims> {
    let [a1, b1, c1] = p1.sides();
    let [a2, b2, _] = p2.sides();
    let [_, _, c2] = p4.sides();
    let expect = [(p2, [a2, b2, c1]), (p3, [a2, b1, c2]), (p4, [a1, b2, c2])];
    for (found, want) in expect {
        let want = GridDims::from_sides(want)?;
        if found != want {
            return Err(Error::DimsMismatch { expected: want, found });
        }
    }
    GridDims::new(a1 + a2, b1 + b2, c1 + c2)
}

fn place(dims: GridDims, parts: [&CellSet; 4]) -> Result<CellSet> {
    let [a1, b1, c1] = parts[0].dims().sides();
    let offsets = [
        Cell::new(0, 0, 0),
        Cell::new(a1, b1, 0),
        Cell::new(a1, 0, c1),
        Cell::new(0, b1, c1),
    ];
    let mut out = CellSet::empty(dims);
    for (part, offset) in parts.into_iter().zip(offsets) {
        out.union_with(&part.embed(dims, offset)?)?;
    }
    Ok(out)
}

/// Candidate orientations: all parts as given, then each part alone run
/// through its automorphisms in canonical order.
fn orientations(parts: [&CellSet; 4]) -> Vec<[Transform; 4]> {
    let mut out = vec![[Transform::IDENTITY; 4]];
    for (k, part) in parts.iter().enumerate() {
        for t in Transform::automorphisms(part.dims()).into_iter().skip(1) {
            let mut o = [Transform::IDENTITY; 4];
            o[k] = t;
            out.push(o);
        }
    }
    out
}

/// Combines four witnesses into a witness for the summed grid.
///
/// `p2`, `p3` and `p4` must be perfect; the result is perfect when `p1` is
/// perfect and optimal when `p1` is optimal. The combined set is simulated
/// before it is returned.
pub fn combine(p1: &CatalogEntry, p2: &CatalogEntry, p3: &CatalogEntry, p4: &CatalogEntry) -> Result<CatalogEntry> {
    let dims = combined_dims(p1.dims, p2.dims, p3.dims, p4.dims)?;
    for p in [p2, p3, p4] {
        if p.status != Status::Perfect {
            return Err(Error::Construction {
                dims,
                message: format!("part {} must be perfect, is {}", p.id, p.status),
            });
        }
    }
    let status = match p1.status {
        Status::Perfect => Status::Perfect,
        Status::Optimal => Status::Optimal,
        other => {
            return Err(Error::Construction {
                dims,
                message: format!("corner part {} must be perfect or optimal, is {other}", p1.id),
            })
        }
    };
    let parts = [&p1.seeds, &p2.seeds, &p3.seeds, &p4.seeds];
    let size: usize = parts.iter().map(|p| p.len()).sum();
    let mut best_left = usize::MAX;
    for orient in orientations(parts) {
        let moved: Vec<CellSet> = parts.iter().zip(&orient).map(|(p, t)| p.transform(t)).collect();
        let seeds = place(dims, [&moved[0], &moved[1], &moved[2], &moved[3]])?;
        debug_assert_eq!(seeds.len(), size, "octants overlap");
        let class = classify(dims, &seeds)?;
        if class.status >= status {
            let entry = CatalogEntry::new(
                seeds,
                status,
                Provenance::Combined(vec![p1.id.clone(), p2.id.clone(), p3.id.clone(), p4.id.clone()]),
            );
            return entry.verified();
        }
        best_left = best_left.min(dims.cell_count() - crate::engine::percolate_default(&seeds).infected_count());
    }
    Err(Error::Construction {
        dims,
        message: format!(
            "no orientation of {}, {}, {}, {} percolates; best leaves {best_left} cells uninfected",
            p1.id, p2.id, p3.id, p4.id
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::perfect_audit;
    use crate::engine::percolate_default;

    fn diamond() -> CatalogEntry {
        let dims = GridDims::new(1, 3, 3).unwrap();
        let seeds = CellSet::from_cells(
            dims,
            [(0, 0), (0, 2), (1, 1), (2, 0), (2, 2)].map(|(y, z)| Cell::new(0, y, z)),
        )
        .unwrap();
        CatalogEntry::new(seeds, Status::Perfect, Provenance::Thickness1 { k: 2 })
            .verified()
            .unwrap()
    }

    fn single() -> CatalogEntry {
        let dims = GridDims::new(1, 1, 1).unwrap();
        CatalogEntry::new(CellSet::full(dims), Status::Perfect, Provenance::Thickness1 { k: 1 })
            .verified()
            .unwrap()
    }

    #[test]
    fn four_singletons_fill_the_cube() {
        let s = single();
        let out = combine(&s, &s, &s, &s).unwrap();
        assert_eq!(out.dims, GridDims::new(2, 2, 2).unwrap());
        assert_eq!(out.size(), 4);
        assert_eq!(out.status, Status::Perfect);
        assert!(matches!(out.provenance, Provenance::Combined(ref ids) if ids.len() == 4));
    }

    #[test]
    fn squares_double() {
        let d = diamond();
        let out = combine(&d, &d, &d, &d).unwrap();
        assert_eq!(out.dims, GridDims::new(2, 6, 6).unwrap());
        assert_eq!(out.size(), 20);
        let trace = percolate_default(&out.seeds);
        assert!(perfect_audit(&trace, &out.seeds).all_hold());
    }

    #[test]
    fn mismatched_parts_rejected() {
        let d = diamond();
        let s = single();
        assert!(matches!(combine(&d, &s, &d, &d), Err(Error::DimsMismatch { .. })));
    }

    #[test]
    fn non_perfect_side_part_rejected() {
        let s = single();
        let mut opt = s.clone();
        opt.status = Status::Optimal;
        assert!(matches!(combine(&s, &opt, &s, &s), Err(Error::Construction { .. })));
    }
}
