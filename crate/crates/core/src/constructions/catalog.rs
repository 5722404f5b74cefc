//! Witness catalog: verified seed sets keyed by grid, with provenance, and
//! its plain-text file format.
//!
//! ```text
//! version 1
//!
//! entry 4x6x9-perfect
//! dims 4 6 9
//! status perfect
//! provenance heuristic seed=17
//! verified true
//! grid
//! <a layers of b rows × c glyphs, blank line between layers>
//! end
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::bounds::{classify, Status};
use crate::error::{Error, Result};
use crate::grid::{CellSet, GridDims, Transform};
use crate::textgrid;

/// Where a witness came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Provenance {
    SearchedExhaustive,
    SearchedHeuristic {
        rng_seed: u64,
    },
    /// Four child entry ids, in the order (corner, a·b offset, a·c offset, b·c offset).
    Combined(Vec<String>),
    Family {
        id: String,
        c: usize,
    },
    Thickness1 {
        k: u32,
    },
    /// Re-oriented copy of another entry.
    Oriented {
        from: String,
    },
    /// Read from a seed file outside the catalog.
    Imported {
        source: String,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::SearchedExhaustive => write!(f, "exhaustive"),
            Provenance::SearchedHeuristic { rng_seed } => write!(f, "heuristic seed={rng_seed}"),
            Provenance::Combined(ids) => write!(f, "combined {}", ids.join(" ")),
            Provenance::Family { id, c } => write!(f, "family {id} c={c}"),
            Provenance::Thickness1 { k } => write!(f, "thickness1 k={k}"),
            Provenance::Oriented { from } => write!(f, "oriented {from}"),
            Provenance::Imported { source } => write!(f, "imported {source}"),
        }
    }
}

impl Provenance {
    fn parse(s: &str) -> Option<Provenance> {
        let mut words = s.split_whitespace();
        let kind = words.next()?;
        let rest: Vec<&str> = words.collect();
        let kv = |w: &str, key: &str| w.strip_prefix(key).and_then(|v| v.parse::<u64>().ok());
        match (kind, rest.as_slice()) {
            ("exhaustive", []) => Some(Provenance::SearchedExhaustive),
            ("heuristic", [seed]) => kv(seed, "seed=").map(|rng_seed| Provenance::SearchedHeuristic { rng_seed }),
            ("combined", ids) if ids.len() == 4 => {
                Some(Provenance::Combined(ids.iter().map(|s| s.to_string()).collect()))
            }
            ("family", [id, c]) => kv(c, "c=").map(|c| Provenance::Family {
                id: id.to_string(),
                c: c as usize,
            }),
            ("thickness1", [k]) => kv(k, "k=").map(|k| Provenance::Thickness1 { k: k as u32 }),
            ("oriented", [from]) => Some(Provenance::Oriented { from: from.to_string() }),
            ("imported", [source]) => Some(Provenance::Imported {
                source: source.to_string(),
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub dims: GridDims,
    pub seeds: CellSet,
    /// Claimed status: `Perfect` or `Optimal`.
    pub status: Status,
    pub provenance: Provenance,
    pub verified: bool,
}

pub fn entry_id(dims: GridDims, status: Status) -> String {
    format!("{}x{}x{}-{}", dims.a(), dims.b(), dims.c(), status.name())
}

impl CatalogEntry {
    /// An unverified entry; the id is derived from dims and status.
    pub fn new(seeds: CellSet, status: Status, provenance: Provenance) -> CatalogEntry {
        let dims = seeds.dims();
        CatalogEntry {
            id: entry_id(dims, status),
            dims,
            seeds,
            status,
            provenance,
            verified: false,
        }
    }

    pub fn size(&self) -> usize {
        self.seeds.len()
    }

    /// Simulates the witness and checks it reaches its claimed status.
    pub fn verify(&self) -> Result<()> {
        let class = classify(self.dims, &self.seeds)?;
        if class.status < self.status {
            return Err(Error::Construction {
                dims: self.dims,
                message: format!(
                    "witness {} of size {} classifies as {}, claimed {}",
                    self.id, class.size, class.status, self.status
                ),
            });
        }
        Ok(())
    }

    /// Verifies and marks the entry as verified.
    pub fn verified(mut self) -> Result<CatalogEntry> {
        self.verify()?;
        self.verified = true;
        Ok(self)
    }

    /// This witness carried onto congruent grid `target`.
    pub fn oriented(&self, target: GridDims) -> Option<CatalogEntry> {
        if target == self.dims {
            return Some(self.clone());
        }
        let t = Transform::between(self.dims, target).into_iter().next()?;
        Some(CatalogEntry {
            id: entry_id(target, self.status),
            dims: target,
            seeds: self.seeds.transform(&t),
            status: self.status,
            provenance: Provenance::Oriented { from: self.id.clone() },
            verified: self.verified,
        })
    }
}

/// Witnesses keyed by id. Mutation needs `&mut`, so a shared catalog has a
/// single writer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
}

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.get(id)
    }

    /// Inserts or replaces an entry; replacing keeps the smaller witness.
    pub fn insert(&mut self, entry: CatalogEntry) {
        match self.entries.get(&entry.id) {
            Some(old) if old.size() <= entry.size() && old.verified >= entry.verified => {}
            _ => {
                self.entries.insert(entry.id.clone(), entry);
            }
        }
    }

    /// A witness of at least `status` for `dims` or any permutation of it,
    /// oriented to `dims`. Perfect entries also answer optimal queries.
    pub fn lookup(&self, dims: GridDims, status: Status) -> Option<CatalogEntry> {
        let sorted = dims.sorted();
        self.entries
            .values()
            .filter(|e| e.dims.sorted() == sorted && e.status >= status)
            .max_by_key(|e| (e.status, e.dims == dims, std::cmp::Reverse(e.id.clone())))
            .and_then(|e| e.oriented(dims))
    }

    /// Re-verifies every entry marked verified by simulation.
    pub fn verify_all(&self) -> Result<()> {
        for e in self.entries.values().filter(|e| e.verified) {
            e.verify()?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# witness catalog\nversion 1\n");
        for e in self.entries.values() {
            out.push_str(&format!(
                "\nentry {}\ndims {} {} {}\nstatus {}\nprovenance {}\nverified {}\ngrid\n",
                e.id,
                e.dims.a(),
                e.dims.b(),
                e.dims.c(),
                e.status,
                e.provenance,
                e.verified
            ));
            out.push_str(&textgrid::write_seeds(&e.seeds));
            out.push_str("end\n");
        }
        out
    }

    /// Parses a catalog file and re-verifies entries marked verified.
    pub fn from_text(text: &str) -> Result<Catalog> {
        let cat = Catalog::parse_unverified(text)?;
        cat.verify_all()?;
        Ok(cat)
    }

    /// Parses without simulating.
    pub fn parse_unverified(text: &str) -> Result<Catalog> {
        let lines: Vec<&str> = text.lines().collect();
        let err = |line: usize, msg: String| Error::Parse {
            line,
            column: 1,
            message: msg,
        };
        let mut i = 0;
        let skip = |i: &mut usize| {
            while *i < lines.len() && (lines[*i].trim().is_empty() || lines[*i].starts_with('#')) {
                *i += 1;
            }
        };
        skip(&mut i);
        if lines.get(i).map(|l| l.trim()) != Some("version 1") {
            return Err(err(i + 1, "expected `version 1`".into()));
        }
        i += 1;
        let mut cat = Catalog::new();
        loop {
            skip(&mut i);
            if i >= lines.len() {
                break;
            }
            let field = |j: usize, key: &str| -> Result<&str> {
                lines
                    .get(j)
                    .and_then(|l| l.strip_prefix(key))
                    .map(str::trim)
                    .ok_or_else(|| err(j + 1, format!("expected `{}`", key.trim())))
            };
            let id = field(i, "entry ")?.to_string();
            let dims_line = field(i + 1, "dims ")?;
            let sides: Vec<usize> = dims_line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(i + 2, format!("bad number {t:?}"))))
                .collect::<Result<_>>()?;
            if sides.len() != 3 {
                return Err(err(i + 2, "dims needs three sides".into()));
            }
            let dims = GridDims::new(sides[0], sides[1], sides[2]).map_err(|e| err(i + 2, e.to_string()))?;
            let status = Status::parse(field(i + 2, "status ")?)
                .filter(|s| *s >= Status::Optimal)
                .ok_or_else(|| err(i + 3, "status must be perfect or optimal".into()))?;
            let provenance = Provenance::parse(field(i + 3, "provenance ")?)
                .ok_or_else(|| err(i + 4, "unrecognized provenance".into()))?;
            let verified = match field(i + 4, "verified ")? {
                "true" => true,
                "false" => false,
                other => return Err(err(i + 5, format!("bad verified flag {other:?}"))),
            };
            if lines.get(i + 5).map(|l| l.trim()) != Some("grid") {
                return Err(err(i + 6, "expected `grid`".into()));
            }
            let start = i + 6;
            let end = (start..lines.len())
                .find(|&j| lines[j].trim() == "end")
                .ok_or_else(|| err(start, "missing `end`".into()))?;
            let (found, seeds) = textgrid::parse_seeds_at(&lines[start..end].join("\n"), start + 1)?;
            if found != dims {
                return Err(err(start + 1, format!("grid is {found}, header says {dims}")));
            }
            if cat.entries.contains_key(&id) {
                return Err(err(i + 1, format!("duplicate entry {id}")));
            }
            cat.entries.insert(
                id.clone(),
                CatalogEntry {
                    id,
                    dims,
                    seeds,
                    status,
                    provenance,
                    verified,
                },
            );
            i = end + 1;
        }
        Ok(cat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Cell;

    fn diamond() -> CellSet {
        CellSet::from_cells(
            GridDims::new(1, 3, 3).unwrap(),
            [(0, 0, 0), (0, 0, 2), (0, 1, 1), (0, 2, 0), (0, 2, 2)].map(|(x, y, z)| Cell::new(x, y, z)),
        )
        .unwrap()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut cat = Catalog::new();
        cat.insert(
            CatalogEntry::new(diamond(), Status::Perfect, Provenance::SearchedExhaustive)
                .verified()
                .unwrap(),
        );
        cat.insert(CatalogEntry::new(
            diamond(),
            Status::Optimal,
            Provenance::Combined(vec!["a".into(), "b".into(), "c".into(), "d".into()]),
        ));
        let text = cat.to_text();
        let back = Catalog::from_text(&text).unwrap();
        assert_eq!(back, cat);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn verification_rejects_false_claims() {
        let mut seeds = diamond();
        seeds.remove(Cell::new(0, 1, 1));
        let entry = CatalogEntry::new(seeds, Status::Perfect, Provenance::SearchedExhaustive);
        assert!(entry.verified().is_err());
    }

    #[test]
    fn tampered_file_fails_reverification() {
        let mut cat = Catalog::new();
        cat.insert(
            CatalogEntry::new(diamond(), Status::Perfect, Provenance::SearchedExhaustive)
                .verified()
                .unwrap(),
        );
        let text = cat.to_text().replace("X.X\n.X.", "X.X\n...");
        assert!(Catalog::parse_unverified(&text).is_ok());
        assert!(Catalog::from_text(&text).is_err());
    }

    #[test]
    fn lookup_reorients() {
        let mut cat = Catalog::new();
        cat.insert(
            CatalogEntry::new(diamond(), Status::Perfect, Provenance::SearchedExhaustive)
                .verified()
                .unwrap(),
        );
        let target = GridDims::new(3, 1, 3).unwrap();
        let e = cat.lookup(target, Status::Optimal).unwrap();
        assert_eq!(e.dims, target);
        e.verify().unwrap();
        assert!(cat.lookup(GridDims::new(3, 3, 3).unwrap(), Status::Optimal).is_none());
    }

    #[test]
    fn provenance_text_round_trip() {
        for p in [
            Provenance::SearchedExhaustive,
            Provenance::SearchedHeuristic { rng_seed: 9 },
            Provenance::Family {
                id: "2x5".into(),
                c: 11,
            },
            Provenance::Thickness1 { k: 3 },
            Provenance::Oriented { from: "x".into() },
            Provenance::Imported { source: "a.txt".into() },
        ] {
            assert_eq!(Provenance::parse(&p.to_string()), Some(p));
        }
        assert_eq!(Provenance::parse("combined a b c"), None);
    }
}
