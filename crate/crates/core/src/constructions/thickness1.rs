//! Perfect seed sets for the squares `(1, 2^k − 1, 2^k − 1)`.
//!
//! The square of side `2n + 1` takes four copies of the side-`n` witness in
//! its corner quadrants plus one seed where the middle row and column cross.
//! The quadrants fill on their own; the centre seed and the two filled
//! quadrants beside each cross cell then give it three infected neighbours,
//! so the cross fills outward from the centre.

use crate::bounds::Status;
use crate::constructions::catalog::{CatalogEntry, Provenance};
use crate::error::{Error, Result};
use crate::grid::{Cell, CellSet, GridDims, MAX_CELLS};
use crate::search::{find_at_bound, AnnealParams};

/// Side length `2^k − 1`, if the square fits under the cell cap.
pub fn square_side(k: u32) -> Option<usize> {
    if k == 0 || k > 12 {
        return None;
    }
    let side = (1usize << k) - 1;
    (side * side <= MAX_CELLS).then_some(side)
}

fn doubled(prev: &CellSet) -> Result<CellSet> {
    let n = prev.dims().b();
    let side = 2 * n + 1;
    let dims = GridDims::new(1, side, side)?;
    let mut out = CellSet::empty(dims);
    for (y, z) in [(0, 0), (0, n + 1), (n + 1, 0), (n + 1, n + 1)] {
        out.union_with(&prev.embed(dims, Cell::new(0, y, z))?)?;
    }
    out.insert(Cell::new(0, n, n))?;
    Ok(out)
}

/// A verified perfect witness for `(1, 2^k − 1, 2^k − 1)`.
pub fn gen_thickness1(k: u32) -> Result<CatalogEntry> {
    let side =
        square_side(k).ok_or_else(|| Error::InvalidArgument(format!("k = {k} gives no square within the cell cap")))?;
    let mut seeds = CellSet::full(GridDims::new(1, 1, 1)?);
    for _ in 1..k {
        seeds = doubled(&seeds)?;
    }
    let entry = CatalogEntry::new(seeds, Status::Perfect, Provenance::Thickness1 { k });
    match entry.clone().verified() {
        Ok(e) => Ok(e),
        Err(_) => {
            // fall back to annealing at the bound
            let dims = GridDims::new(1, side, side)?;
            let target = entry.size();
            let res = find_at_bound(dims, target, &AnnealParams::default(), u64::from(k))?;
            let seeds = res.witness.ok_or_else(|| Error::Construction {
                dims,
                message: format!("doubling failed and search {}", res.progress),
            })?;
            CatalogEntry::new(
                seeds,
                Status::Perfect,
                Provenance::SearchedHeuristic { rng_seed: u64::from(k) },
            )
            .verified()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_squares() {
        let one = gen_thickness1(1).unwrap();
        assert_eq!(one.dims, GridDims::new(1, 1, 1).unwrap());
        assert_eq!(one.size(), 1);
        let three = gen_thickness1(2).unwrap();
        assert_eq!(three.size(), 5);
        for k in 3..=6 {
            let e = gen_thickness1(k).unwrap();
            assert_eq!(e.size(), ((1usize << (2 * k)) - 1) / 3);
            assert!(matches!(e.provenance, Provenance::Thickness1 { k: kk } if kk == k));
        }
    }

    #[test]
    fn rejects_zero() {
        assert!(gen_thickness1(0).is_err());
    }
}
