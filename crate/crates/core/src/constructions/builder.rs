//! Planner that resolves perfect and optimal witnesses from the catalog,
//! the thickness-1 squares, the periodic families and four-octant
//! composition.
//!
//! Requests are answered in this order: catalog, square generator, family
//! assembly, the case dispatch for thickness 4 (perfect) or 7 and up
//! (optimal), and finally a search over all splits whose four parts are
//! themselves resolvable. Results and failures are memoised per sorted
//! shape, so every request is deterministic for a fixed catalog.

use std::collections::HashMap;

use crate::bounds::{perfect_precondition, Status};
use crate::constructions::catalog::{Catalog, CatalogEntry};
use crate::constructions::combine::combine;
use crate::constructions::family::{parse_families, FamilyPattern};
use crate::constructions::thickness1::gen_thickness1;
use crate::error::{Error, Result};
use crate::grid::GridDims;

/// Catalog shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../../data/catalog.txt");
/// Family patterns shipped with the crate.
pub const BUNDLED_FAMILIES: &str = include_str!("../../data/families.txt");

type Key = [usize; 3];

fn key(dims: GridDims) -> Key {
    dims.sorted().sides()
}

fn dims_of(k: Key) -> GridDims {
    GridDims::from_sides(k).expect("memo keys are valid dims")
}

fn missing(dims: GridDims, status: Status) -> Error {
    Error::MissingIngredient {
        dims,
        status: status.name(),
    }
}

/// Split of the sides into `(a1,b1,c1)` and `(a2,b2,c2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub first: [usize; 3],
    pub second: [usize; 3],
}

impl Split {
    fn new(first: [usize; 3], second: [usize; 3]) -> Split {
        Split { first, second }
    }

    /// The four part shapes in combiner order.
    pub fn parts(&self) -> [[usize; 3]; 4] {
        let ([a1, b1, c1], [a2, b2, c2]) = (self.first, self.second);
        [[a1, b1, c1], [a2, b2, c1], [a2, b1, c2], [a1, b2, c2]]
    }
}

pub struct Builder {
    catalog: Catalog,
    families: Vec<FamilyPattern>,
    perfect_memo: HashMap<Key, Option<CatalogEntry>>,
    optimal_memo: HashMap<Key, Option<CatalogEntry>>,
}

impl Builder {
    pub fn new(catalog: Catalog, families: Vec<FamilyPattern>) -> Builder {
        Builder {
            catalog,
            families,
            perfect_memo: HashMap::new(),
            optimal_memo: HashMap::new(),
        }
    }

    /// A builder over the bundled catalog and family patterns, re-verified.
    pub fn bundled() -> Result<Builder> {
        Ok(Builder::new(
            Catalog::from_text(BUNDLED_CATALOG)?,
            parse_families(BUNDLED_FAMILIES)?,
        ))
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn families(&self) -> &[FamilyPattern] {
        &self.families
    }

    /// A perfect witness for `dims`.
    pub fn perfect(&mut self, dims: GridDims) -> Result<CatalogEntry> {
        if !perfect_precondition(dims) {
            return Err(Error::Construction {
                dims,
                message: "ab+ac+bc is not divisible by 3, so no perfect set exists".into(),
            });
        }
        self.resolve_perfect(key(dims))?
            .and_then(|e| e.oriented(dims))
            .ok_or_else(|| missing(dims, Status::Perfect))
    }

    /// An optimal (or perfect) witness for `dims`.
    pub fn optimal(&mut self, dims: GridDims) -> Result<CatalogEntry> {
        self.resolve_optimal(key(dims))?
            .and_then(|e| e.oriented(dims))
            .ok_or_else(|| missing(dims, Status::Optimal))
    }

    fn need_perfect(&mut self, k: Key) -> Result<CatalogEntry> {
        self.resolve_perfect(k)?
            .ok_or_else(|| missing(dims_of(k), Status::Perfect))
    }

    fn need_optimal(&mut self, k: Key) -> Result<CatalogEntry> {
        self.resolve_optimal(k)?
            .ok_or_else(|| missing(dims_of(k), Status::Optimal))
    }

    /// Catalog, squares and families; no composition.
    fn leaf_perfect(&self, k: Key) -> Result<Option<CatalogEntry>> {
        let dims = dims_of(k);
        if let Some(e) = self.catalog.lookup(dims, Status::Perfect) {
            return Ok(Some(e));
        }
        let [x, y, z] = k;
        if x == 1 && y == z && (y + 1).is_power_of_two() {
            let e = gen_thickness1((y + 1).trailing_zeros())?;
            return Ok(e.oriented(dims));
        }
        for p in &self.families {
            let rest = if [p.a, p.b] == [x, y] || [p.a, p.b] == [y, x] {
                Some(z)
            } else if [p.a, p.b] == [x, z] || [p.a, p.b] == [z, x] {
                Some(y)
            } else if [p.a, p.b] == [y, z] || [p.a, p.b] == [z, y] {
                Some(x)
            } else {
                None
            };
            if let Some(c) = rest.filter(|&c| p.admits(c)) {
                return Ok(p.assemble(c)?.oriented(dims));
            }
        }
        Ok(None)
    }

    fn resolve_perfect(&mut self, k: Key) -> Result<Option<CatalogEntry>> {
        if let Some(hit) = self.perfect_memo.get(&k) {
            return Ok(hit.clone());
        }
        let dims = dims_of(k);
        let found = if !perfect_precondition(dims) {
            None
        } else if let Some(e) = self.leaf_perfect(k)? {
            Some(e)
        } else {
            let dispatched = if k[0] == 4 && thickness_four_residues(k[1], k[2]) {
                match self.dispatch_perfect_4(k[1], k[2]) {
                    Ok(e) => Some(e),
                    Err(Error::MissingIngredient { .. }) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            match dispatched {
                Some(e) => Some(e),
                None => self.split_search(k, Status::Perfect)?,
            }
        };
        self.perfect_memo.insert(k, found.clone());
        Ok(found)
    }

    fn resolve_optimal(&mut self, k: Key) -> Result<Option<CatalogEntry>> {
        let dims = dims_of(k);
        if perfect_precondition(dims) {
            return self.resolve_perfect(k);
        }
        if let Some(hit) = self.optimal_memo.get(&k) {
            return Ok(hit.clone());
        }
        let found = if let Some(e) = self.catalog.lookup(dims, Status::Optimal) {
            Some(e)
        } else {
            let dispatched = if (7..=9).contains(&k[0]) {
                match self.dispatch_optimal(k) {
                    Ok(e) => Some(e),
                    Err(Error::MissingIngredient { .. }) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            match dispatched {
                Some(e) => Some(e),
                None => self.split_search(k, Status::Optimal)?,
            }
        };
        self.optimal_memo.insert(k, found.clone());
        Ok(found)
    }

    /// Tries every split in increasing `(a1, b1, c1)` order.
    fn split_search(&mut self, k: Key, status: Status) -> Result<Option<CatalogEntry>> {
        let [x, y, z] = k;
        for a1 in 1..x {
            for b1 in 1..y {
                for c1 in 1..z {
                    let split = Split::new([a1, b1, c1], [x - a1, y - b1, z - c1]);
                    let parts = split.parts();
                    let side_ok = parts[1..]
                        .iter()
                        .all(|&p| perfect_precondition(GridDims::from_sides(p).expect("positive sides")));
                    let corner_ok = status == Status::Optimal
                        || perfect_precondition(GridDims::from_sides(parts[0]).expect("positive sides"));
                    if !(side_ok && corner_ok) {
                        continue;
                    }
                    if let Some(e) = self.try_split(split, status)? {
                        return Ok(Some(e));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Resolves the four parts of `split` and combines them, or `None` if
    /// some part is unavailable.
    fn try_split(&mut self, split: Split, status: Status) -> Result<Option<CatalogEntry>> {
        let parts = split.parts();
        let mut found: [Option<CatalogEntry>; 4] = Default::default();
        // smallest parts first so hopeless splits fail cheaply
        let mut order = [0, 1, 2, 3];
        order.sort_by_key(|&i| (parts[i].iter().product::<usize>(), i));
        for i in order {
            let k = {
                let mut s = parts[i];
                s.sort_unstable();
                s
            };
            let e = if i == 0 && status == Status::Optimal {
                self.resolve_optimal(k)?
            } else {
                self.resolve_perfect(k)?
            };
            match e {
                Some(e) => found[i] = e.oriented(GridDims::from_sides(parts[i])?),
                None => return Ok(None),
            }
        }
        let [p1, p2, p3, p4] = found.map(|e| e.expect("all parts resolved"));
        combine(&p1, &p2, &p3, &p4).map(Some)
    }

    fn compose(&mut self, split: Split, status: Status) -> Result<CatalogEntry> {
        let parts = split.parts();
        let mut entries = Vec::with_capacity(4);
        for (i, p) in parts.iter().enumerate() {
            let dims = GridDims::from_sides(*p)?;
            let e = if i == 0 && status == Status::Optimal {
                self.need_optimal(key(dims))?
            } else {
                self.need_perfect(key(dims))?
            };
            entries.push(e.oriented(dims).expect("same shape"));
        }
        combine(&entries[0], &entries[1], &entries[2], &entries[3])
    }

    /// Perfect `(4, b, c)` for `b ≡ c ≡ 0` or `1 (mod 3)`, `b, c ≥ 4`,
    /// following the case analysis on the residues of `b` and `c`.
    pub fn build_perfect_4(&mut self, b: usize, c: usize) -> Result<CatalogEntry> {
        let dims = GridDims::new(4, b, c)?;
        if b < 4 || c < 4 || !thickness_four_residues(b, c) {
            return Err(Error::InvalidArgument(format!(
                "(4,{b},{c}) needs b, c ≥ 4 and b ≡ c ≡ 0 or 1 (mod 3)"
            )));
        }
        let e = self.dispatch_perfect_4(b.min(c), b.max(c))?;
        Ok(e.oriented(dims).expect("same shape"))
    }

    fn dispatch_perfect_4(&mut self, b: usize, c: usize) -> Result<CatalogEntry> {
        debug_assert!(b <= c);
        let k = [4, b, c];
        if b == 4 || b == 7 {
            return self
                .leaf_perfect(k)?
                .ok_or_else(|| missing(dims_of(k), Status::Perfect));
        }
        if c <= 9 {
            if (b, c) == (6, 6) {
                return self.compose(Split::new([1, 3, 3], [3, 3, 3]), Status::Perfect);
            }
            return self
                .leaf_perfect(k)?
                .ok_or_else(|| missing(dims_of(k), Status::Perfect));
        }
        let (b1, c1) = if b.is_multiple_of(3) {
            if b >= 9 && b % 2 != c % 2 {
                (6, 6)
            } else {
                (3, 6)
            }
        } else if b == 10 && c == 10 {
            (5, 5)
        } else if b % 2 == c % 2 && c >= 13 {
            (5, 8)
        } else {
            (5, 5)
        };
        self.compose(Split::new([2, b1, c1], [2, b - b1, c - c1]), Status::Perfect)
    }

    /// Optimal `(a, b, c)` for `min(a, b, c) ≥ 7`.
    pub fn build_optimal(&mut self, dims: GridDims) -> Result<CatalogEntry> {
        let k = key(dims);
        if k[0] < 7 {
            return Err(Error::InvalidArgument(format!("{dims} has thickness {} below 7", k[0])));
        }
        let e = if perfect_precondition(dims) {
            self.need_perfect(k)?
        } else {
            match self.catalog.lookup(dims_of(k), Status::Optimal) {
                Some(e) => e,
                None => match self.dispatch_optimal(k) {
                    Ok(e) => e,
                    Err(Error::MissingIngredient { .. }) if k[0] >= 10 => self.need_optimal(k)?,
                    Err(e) => return Err(e),
                },
            }
        };
        Ok(e.oriented(dims).expect("same shape"))
    }

    /// The split for thickness 7, 8 and 9; thickness 10 and up uses the
    /// general split search.
    fn dispatch_optimal(&mut self, k: Key) -> Result<CatalogEntry> {
        let [a, b, c] = k;
        let split = match a {
            9 => {
                let pick = |s: usize| [2, 4, 5, 7].into_iter().find(|&s1| s > s1 && (s - s1) % 6 == 3);
                let (b1, mut c1) = (pick(b).expect("b ≢ 0 mod 3"), pick(c).expect("c ≢ 0 mod 3"));
                if b - b1 == 3 && c1 == 2 {
                    // (3,3,2) cannot be perfect; move the cut in c by six
                    c1 = 8;
                }
                Split::new([6, b1, c1], [3, b - b1, c - c1])
            }
            7 | 8 => {
                let a1 = a - 3;
                let pick = |s: usize| (2..=7).find(|&s1| s > s1 && (s - s1) % 6 == 3);
                let (mut b1, mut c1) = (pick(b).expect("some residue fits"), pick(c).expect("some residue fits"));
                if b - b1 == 3 && c1 == 2 {
                    if a == 7 && b == 7 {
                        b1 = 4;
                        c1 = if c == 11 { 5 } else { 8 };
                    } else {
                        b1 = b - 6;
                    }
                }
                Split::new([a1, b1, c1], [3, b - b1, c - c1])
            }
            _ => {
                return self
                    .split_search(k, Status::Optimal)?
                    .ok_or_else(|| missing(dims_of(k), Status::Optimal))
            }
        };
        self.compose(split, Status::Optimal)
    }
}

fn thickness_four_residues(b: usize, c: usize) -> bool {
    b % 3 == c % 3 && b % 3 != 2
}
