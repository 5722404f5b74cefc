//! Grid graphs `P_a □ P_b □ P_c`, their cells, cell sets and symmetries.
//!
//! Cells use zero-based `(x, y, z)` coordinates meaning (layer, row, column).
//! They are linearized layer-major: `index = (x * b + y) * c + z`. Text formats
//! and user-facing output are one-based.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Largest number of cells a grid may have.
pub const MAX_CELLS: usize = 1 << 24;

/// Side lengths `(a, b, c)` of the grid graph: layers, rows, columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridDims {
    a: usize,
    b: usize,
    c: usize,
}

impl GridDims {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::InvalidDims {
                a,
                b,
                c,
                reason: "side lengths must be positive",
            });
        }
        let cells = a
            .checked_mul(b)
            .and_then(|ab| ab.checked_mul(c))
            .filter(|&n| n <= MAX_CELLS);
        if cells.is_none() {
            return Err(Error::InvalidDims {
                a,
                b,
                c,
                reason: "more than 2^24 cells",
            });
        }
        Ok(GridDims { a, b, c })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn sides(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    pub fn from_sides(sides: [usize; 3]) -> Result<Self> {
        GridDims::new(sides[0], sides[1], sides[2])
    }

    pub fn cell_count(&self) -> usize {
        self.a * self.b * self.c
    }

    /// `min(a, b, c)`.
    pub fn thickness(&self) -> usize {
        self.a.min(self.b).min(self.c)
    }

    /// The same grid with sides in nondecreasing order.
    pub fn sorted(&self) -> GridDims {
        let mut s = self.sides();
        s.sort_unstable();
        GridDims {
            a: s[0],
            b: s[1],
            c: s[2],
        }
    }

    /// `ab + ac + bc`, three times the surface lower bound.
    pub fn pair_sum(&self) -> u64 {
        let (a, b, c) = (self.a as u64, self.b as u64, self.c as u64);
        a * b + a * c + b * c
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.x < self.a && cell.y < self.b && cell.z < self.c
    }

    pub fn check(&self, cell: Cell) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(Error::CellOutOfRange {
                x: cell.x,
                y: cell.y,
                z: cell.z,
                dims: *self,
            })
        }
    }

    #[inline]
    pub fn index(&self, cell: Cell) -> usize {
        (cell.x * self.b + cell.y) * self.c + cell.z
    }

    #[inline]
    pub fn cell(&self, index: usize) -> Cell {
        let z = index % self.c;
        let rest = index / self.c;
        Cell {
            x: rest / self.b,
            y: rest % self.b,
            z,
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cell_count()).map(move |i| self.cell(i))
    }

    /// Number of grid neighbours of `cell` (between 0 and 6).
    pub fn degree(&self, cell: Cell) -> usize {
        let axis = |p: usize, n: usize| usize::from(p > 0) + usize::from(p + 1 < n);
        axis(cell.x, self.a) + axis(cell.y, self.b) + axis(cell.z, self.c)
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// A grid vertex in zero-based (layer, row, column) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Cell {
    pub const fn new(x: usize, y: usize, z: usize) -> Self {
        Cell { x, y, z }
    }

    /// Builds a cell from the one-based coordinates used in printed grids.
    pub fn one_based(x: usize, y: usize, z: usize) -> Self {
        Cell {
            x: x - 1,
            y: y - 1,
            z: z - 1,
        }
    }

    fn coords(&self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }

    fn from_coords(p: [usize; 3]) -> Self {
        Cell {
            x: p[0],
            y: p[1],
            z: p[2],
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x + 1, self.y + 1, self.z + 1)
    }
}

/// All grid-adjacent cells of `cell`, in a fixed axis order.
pub fn neighbours(dims: GridDims, cell: Cell) -> Result<Vec<Cell>> {
    dims.check(cell)?;
    let mut out = Vec::with_capacity(6);
    let sides = dims.sides();
    let p = cell.coords();
    for axis in 0..3 {
        if p[axis] > 0 {
            let mut q = p;
            q[axis] -= 1;
            out.push(Cell::from_coords(q));
        }
        if p[axis] + 1 < sides[axis] {
            let mut q = p;
            q[axis] += 1;
            out.push(Cell::from_coords(q));
        }
    }
    Ok(out)
}

/// Flat adjacency table over linear indices, shared by the simulators.
#[derive(Debug, Clone)]
pub struct Adjacency {
    dims: GridDims,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn new(dims: GridDims) -> Self {
        let n = dims.cell_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(6 * n);
        offsets.push(0);
        for cell in dims.cells() {
            for nb in neighbours(dims, cell).expect("cell enumerated from dims") {
                targets.push(dims.index(nb) as u32);
            }
            offsets.push(targets.len() as u32);
        }
        Adjacency { dims, offsets, targets }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    #[inline]
    pub fn of(&self, index: usize) -> &[u32] {
        &self.targets[self.offsets[index] as usize..self.offsets[index + 1] as usize]
    }
}

/// A set of cells of a fixed grid.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    dims: GridDims,
    bits: FixedBitSet,
}

impl CellSet {
    pub fn empty(dims: GridDims) -> Self {
        CellSet {
            dims,
            bits: FixedBitSet::with_capacity(dims.cell_count()),
        }
    }

    pub fn full(dims: GridDims) -> Self {
        let mut s = CellSet::empty(dims);
        s.bits.insert_range(..);
        s
    }

    pub fn from_cells<I: IntoIterator<Item = Cell>>(dims: GridDims, cells: I) -> Result<Self> {
        let mut s = CellSet::empty(dims);
        for cell in cells {
            s.insert(cell)?;
        }
        Ok(s)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(dims: GridDims, indices: I) -> Self {
        let mut s = CellSet::empty(dims);
        for i in indices {
            s.bits.insert(i);
        }
        s
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn insert(&mut self, cell: Cell) -> Result<bool> {
        self.dims.check(cell)?;
        let i = self.dims.index(cell);
        Ok(!self.bits.put(i))
    }

    pub fn remove(&mut self, cell: Cell) -> bool {
        if !self.dims.contains(cell) {
            return false;
        }
        let i = self.dims.index(cell);
        let was = self.bits.contains(i);
        self.bits.set(i, false);
        was
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.dims.contains(cell) && self.bits.contains(self.dims.index(cell))
    }

    #[inline]
    pub fn contains_index(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub fn insert_index(&mut self, index: usize) {
        self.bits.insert(index);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.dims.cell_count()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.bits.ones().map(move |i| self.dims.cell(i))
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.dims == other.dims && self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &CellSet) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                expected: self.dims,
                found: other.dims,
            });
        }
        self.bits.union_with(&other.bits);
        Ok(())
    }

    /// Cells of the grid not in this set.
    pub fn complement(&self) -> CellSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        CellSet { dims: self.dims, bits }
    }

    /// True when no two members are grid-adjacent.
    pub fn is_independent(&self) -> bool {
        self.iter().all(|cell| {
            neighbours(self.dims, cell)
                .expect("member inside dims")
                .into_iter()
                .all(|nb| !self.contains(nb))
        })
    }

    /// Copies this set into a larger grid, shifted by `offset`.
    pub fn embed(&self, target: GridDims, offset: Cell) -> Result<CellSet> {
        let mut out = CellSet::empty(target);
        for cell in self.iter() {
            out.insert(Cell::new(cell.x + offset.x, cell.y + offset.y, cell.z + offset.z))?;
        }
        Ok(out)
    }

    /// The cells inside the box `[origin, origin + size)`, re-based to the box.
    pub fn restrict(&self, origin: Cell, size: GridDims) -> Result<CellSet> {
        let far = Cell::new(
            origin.x + size.a() - 1,
            origin.y + size.b() - 1,
            origin.z + size.c() - 1,
        );
        self.dims.check(far)?;
        let mut out = CellSet::empty(size);
        for cell in size.cells() {
            let src = Cell::new(cell.x + origin.x, cell.y + origin.y, cell.z + origin.z);
            if self.contains(src) {
                out.insert(cell)?;
            }
        }
        Ok(out)
    }

    pub fn transform(&self, t: &Transform) -> CellSet {
        let target = t.apply_dims(self.dims);
        let mut out = CellSet::empty(target);
        for cell in self.iter() {
            out.bits.insert(target.index(t.apply(self.dims, cell)));
        }
        out
    }
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CellSet")
            .field("dims", &self.dims)
            .field("cells", &self.iter().collect::<Vec<_>>())
            .finish()
    }
}

/// A grid isometry: axis permutation followed by optional reflections.
///
/// Output axis `i` reads input axis `perm[i]`; if `flip[i]` the coordinate is
/// reflected along that output axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transform {
    pub perm: [usize; 3],
    pub flip: [bool; 3],
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

impl Transform {
    pub const IDENTITY: Transform = Transform {
        perm: [0, 1, 2],
        flip: [false; 3],
    };

    /// All 48 transforms in a fixed canonical order (identity first).
    pub fn all() -> Vec<Transform> {
        let mut out = Vec::with_capacity(48);
        for perm in PERMS {
            for mask in 0..8u8 {
                out.push(Transform {
                    perm,
                    flip: [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0],
                });
            }
        }
        out
    }

    /// Transforms mapping `dims` onto itself: the grid's automorphism group.
    pub fn automorphisms(dims: GridDims) -> Vec<Transform> {
        Transform::all()
            .into_iter()
            .filter(|t| t.apply_dims(dims) == dims)
            .collect()
    }

    /// Transforms carrying grid `from` onto grid `to`, if they are congruent.
    pub fn between(from: GridDims, to: GridDims) -> Vec<Transform> {
        Transform::all()
            .into_iter()
            .filter(|t| t.apply_dims(from) == to)
            .collect()
    }

    pub fn apply_dims(&self, dims: GridDims) -> GridDims {
        let s = dims.sides();
        GridDims::from_sides([s[self.perm[0]], s[self.perm[1]], s[self.perm[2]]]).expect("permuted dims stay valid")
    }

    pub fn apply(&self, dims: GridDims, cell: Cell) -> Cell {
        let s = dims.sides();
        let p = cell.coords();
        let mut q = [0; 3];
        for i in 0..3 {
            let v = p[self.perm[i]];
            q[i] = if self.flip[i] { s[self.perm[i]] - 1 - v } else { v };
        }
        Cell::from_coords(q)
    }

    /// Index permutation induced on `dims` (only meaningful for automorphisms).
    pub fn index_map(&self, dims: GridDims) -> Vec<u32> {
        let target = self.apply_dims(dims);
        dims.cells()
            .map(|cell| target.index(self.apply(dims, cell)) as u32)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: usize, b: usize, c: usize) -> GridDims {
        GridDims::new(a, b, c).unwrap()
    }

    #[test]
    fn neighbour_counts() {
        let dims = d(3, 3, 3);
        assert_eq!(neighbours(dims, Cell::one_based(2, 2, 2)).unwrap().len(), 6);
        assert_eq!(neighbours(dims, Cell::one_based(1, 1, 1)).unwrap().len(), 3);
        let mut path = neighbours(d(1, 1, 5), Cell::one_based(1, 1, 3)).unwrap();
        path.sort();
        assert_eq!(path, vec![Cell::one_based(1, 1, 2), Cell::one_based(1, 1, 4)]);
    }

    #[test]
    fn neighbours_reject_outside_cell() {
        assert!(matches!(
            neighbours(d(2, 2, 2), Cell::new(2, 0, 0)),
            Err(Error::CellOutOfRange { .. })
        ));
    }

    #[test]
    fn neighbours_symmetric_and_distinct() {
        let dims = d(3, 4, 2);
        for v in dims.cells() {
            let nv = neighbours(dims, v).unwrap();
            assert_eq!(nv.len(), dims.degree(v));
            let mut sorted = nv.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), nv.len());
            for u in nv {
                assert!(neighbours(dims, u).unwrap().contains(&v));
            }
        }
    }

    #[test]
    fn dims_validation() {
        assert!(GridDims::new(0, 1, 1).is_err());
        assert!(GridDims::new(256, 256, 257).is_err());
        assert!(GridDims::new(256, 256, 256).is_ok());
    }

    #[test]
    fn index_round_trip() {
        let dims = d(2, 3, 5);
        for i in 0..dims.cell_count() {
            assert_eq!(dims.index(dims.cell(i)), i);
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(Transform::automorphisms(d(3, 3, 3)).len(), 48);
        assert_eq!(Transform::automorphisms(d(2, 3, 3)).len(), 16);
        assert_eq!(Transform::automorphisms(d(2, 3, 4)).len(), 8);
        assert_eq!(Transform::all()[0], Transform::IDENTITY);
    }

    #[test]
    fn transform_preserves_adjacency() {
        let dims = d(2, 3, 4);
        for t in Transform::all() {
            let target = t.apply_dims(dims);
            for v in dims.cells() {
                for u in neighbours(dims, v).unwrap() {
                    let (tv, tu) = (t.apply(dims, v), t.apply(dims, u));
                    assert!(neighbours(target, tv).unwrap().contains(&tu));
                }
            }
        }
    }

    #[test]
    fn embed_and_restrict() {
        let small = CellSet::from_cells(d(1, 2, 2), [Cell::new(0, 1, 1)]).unwrap();
        let big = small.embed(d(3, 3, 3), Cell::new(1, 1, 0)).unwrap();
        assert!(big.contains(Cell::new(1, 2, 1)));
        assert_eq!(big.restrict(Cell::new(1, 1, 0), d(1, 2, 2)).unwrap(), small);
        assert!(small.embed(d(1, 2, 2), Cell::new(0, 1, 0)).is_err());
    }
}
