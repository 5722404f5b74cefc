//! One-parameter periodic seed families `(a, b, c)`.
//!
//! A pattern is a left boundary of `L` columns, a block of six columns that
//! repeats, and a right boundary of `R` columns. The instance for
//! `c = L + R + 6k` is `left | block^k | right`. Every block carries
//! `2(a+b)` seeds, which is exactly how much `(ab+ac+bc)/3` grows when `c`
//! grows by six, so a pattern that is tight at its smallest instance stays
//! tight for every `c` in its residue class.

use std::fmt;

use crate::bounds::lower_bound;
use crate::bounds::Status;
use crate::constructions::catalog::{CatalogEntry, Provenance};
use crate::engine::{Simulator, DEFAULT_R};
use crate::error::{Error, Result};
use crate::grid::{Cell, CellSet, GridDims};
use crate::search::anneal::{self, AnnealParams, Domain, Landscape};
use crate::search::find_at_bound;
use crate::textgrid;

pub const PERIOD: usize = 6;

/// The periodic families used by the thickness-2 and thickness-4 arguments.
/// Entries are `(id, a, b, residue of c mod 6, smallest c)`.
pub const STANDARD_FAMILIES: [(&str, usize, usize, usize, usize); 7] = [
    ("2x5", 2, 5, 5, 5),
    ("2x6", 2, 6, 0, 6),
    ("2x8", 2, 8, 2, 8),
    ("4x4c1", 4, 4, 1, 7),
    ("4x4c4", 4, 4, 4, 10),
    ("4x7c1", 4, 7, 1, 7),
    ("4x7c4", 4, 7, 4, 10),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyPattern {
    pub id: String,
    pub a: usize,
    pub b: usize,
    pub left: CellSet,
    pub block: CellSet,
    pub right: CellSet,
}

/// Cross-section and residue data for a family to discover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub id: String,
    pub a: usize,
    pub b: usize,
    pub residue: usize,
    pub min_c: usize,
}

impl FamilySpec {
    pub fn standard(id: &str) -> Option<FamilySpec> {
        STANDARD_FAMILIES
            .iter()
            .find(|f| f.0 == id)
            .map(|&(id, a, b, residue, min_c)| FamilySpec {
                id: id.to_string(),
                a,
                b,
                residue,
                min_c,
            })
    }

    pub fn new(id: &str, a: usize, b: usize, residue: usize, min_c: usize) -> Result<FamilySpec> {
        if min_c % PERIOD != residue % PERIOD || min_c < 2 {
            return Err(Error::InvalidArgument(format!(
                "smallest c {min_c} is not an admissible value for residue {residue}"
            )));
        }
        let dims = GridDims::new(a, b, min_c)?;
        if dims.pair_sum() % 3 != 0 {
            return Err(Error::InvalidArgument(format!("{dims} cannot be perfect")));
        }
        Ok(FamilySpec {
            id: id.to_string(),
            a,
            b,
            residue: residue % PERIOD,
            min_c,
        })
    }

    /// Admissible values of `c`, smallest first.
    pub fn admissible(&self) -> impl Iterator<Item = usize> {
        let start = self.min_c;
        (0..).map(move |k| start + PERIOD * k)
    }
}

impl FamilyPattern {
    /// Builds a pattern and checks its structural invariants.
    pub fn new(id: &str, left: CellSet, block: CellSet, right: CellSet) -> Result<FamilyPattern> {
        let (a, b) = (block.dims().a(), block.dims().b());
        for part in [&left, &right] {
            if part.dims().a() != a || part.dims().b() != b {
                return Err(Error::PatternRejected(format!(
                    "boundary cross-section {} does not match block {}",
                    part.dims(),
                    block.dims()
                )));
            }
        }
        if block.dims().c() != PERIOD {
            return Err(Error::PatternRejected(format!(
                "block spans {} columns instead of {PERIOD}",
                block.dims().c()
            )));
        }
        let expected = 2 * (a + b);
        if block.len() != expected {
            return Err(Error::PatternRejected(format!(
                "block has {} cells, expected 2(a+b) = {expected}",
                block.len()
            )));
        }
        let pattern = FamilyPattern {
            id: id.to_string(),
            a,
            b,
            left,
            block,
            right,
        };
        let dims = pattern.min_dims();
        if 3 * (pattern.left.len() + pattern.right.len()) as u64 != dims.pair_sum() {
            return Err(Error::PatternRejected(format!(
                "boundary has {} cells but {dims} needs {}",
                pattern.left.len() + pattern.right.len(),
                lower_bound(dims).0
            )));
        }
        Ok(pattern)
    }

    pub fn left_width(&self) -> usize {
        self.left.dims().c()
    }

    pub fn right_width(&self) -> usize {
        self.right.dims().c()
    }

    pub fn min_c(&self) -> usize {
        self.left_width() + self.right_width()
    }

    pub fn residue(&self) -> usize {
        self.min_c() % PERIOD
    }

    fn min_dims(&self) -> GridDims {
        GridDims::new(self.a, self.b, self.min_c()).expect("valid pattern dims")
    }

    pub fn admits(&self, c: usize) -> bool {
        c >= self.min_c() && (c - self.min_c()).is_multiple_of(PERIOD)
    }

    /// The seed set for a given `c`, without simulation.
    pub fn seeds_for(&self, c: usize) -> Result<CellSet> {
        if !self.admits(c) {
            return Err(Error::InvalidArgument(format!(
                "family {} needs c ≡ {} (mod 6) with c ≥ {}, got {c}",
                self.id,
                self.residue(),
                self.min_c()
            )));
        }
        let dims = GridDims::new(self.a, self.b, c)?;
        let blocks = (c - self.min_c()) / PERIOD;
        let mut out = self.left.embed(dims, Cell::new(0, 0, 0))?;
        for k in 0..blocks {
            out.union_with(
                &self
                    .block
                    .embed(dims, Cell::new(0, 0, self.left_width() + PERIOD * k))?,
            )?;
        }
        out.union_with(&self.right.embed(dims, Cell::new(0, 0, c - self.right_width()))?)?;
        Ok(out)
    }

    /// Assembles the instance for `c` and verifies it by simulation.
    pub fn assemble(&self, c: usize) -> Result<CatalogEntry> {
        let seeds = self.seeds_for(c)?;
        let entry = CatalogEntry::new(seeds, Status::Perfect, Provenance::Family { id: self.id.clone(), c });
        entry
            .verified()
            .map_err(|e| Error::PatternRejected(format!("family {} fails at c = {c}: {e}", self.id)))
    }
}

impl fmt::Display for FamilyPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family {} ({},{},c), c ≡ {} (mod 6), c ≥ {}",
            self.id,
            self.a,
            self.b,
            self.residue(),
            self.min_c()
        )
    }
}

/// Search budget for pattern discovery.
///
/// Discovery runs in two stages. A tight seed set for the smallest instance
/// is found first; it is then cut at every column into a left and a right
/// boundary, and the block alone is annealed against the longer instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscoveryParams {
    /// Schedule for the smallest-instance search.
    pub boundary: AnnealParams,
    /// Schedule for each block search.
    pub block: AnnealParams,
    /// Smallest-instance witnesses to try before giving up.
    pub boundary_attempts: usize,
    /// Instances (1, 2, ... blocks) in the block energy.
    pub train_instances: usize,
    /// Further instances that must also percolate before a pattern is accepted.
    pub check_instances: usize,
}

impl Default for DiscoveryParams {
    fn default() -> Self {
        DiscoveryParams {
            boundary: AnnealParams {
                restarts: 64,
                iterations: 1_000_000,
                stagnation: 300_000,
                ..AnnealParams::default()
            },
            block: AnnealParams {
                restarts: 4,
                iterations: 200_000,
                stagnation: 60_000,
                ..AnnealParams::default()
            },
            boundary_attempts: 200,
            train_instances: 2,
            check_instances: 3,
        }
    }
}

/// Outcome of a discovery run.
#[derive(Debug, Clone)]
pub struct Discovery {
    pub pattern: Option<FamilyPattern>,
    /// Boundary witnesses tried, including the successful one.
    pub attempts: usize,
    /// Lowest block energy seen over all attempts.
    pub best_energy: u64,
    pub moves: u64,
    pub rng_seed: u64,
}

/// Block energy for a fixed boundary: uninfected cells over the training
/// instances, and over the check instances once training is solved.
struct BlockLandscape {
    /// Boundary seeds as `(xy, z)` in the smallest instance.
    boundary: Vec<(usize, usize)>,
    left_width: usize,
    sims: Vec<Simulator>,
    train: usize,
    buf: Vec<usize>,
}

impl BlockLandscape {
    fn uninfected(&mut self, block: &[u32], k: usize) -> u64 {
        let lw = self.left_width;
        let sim = &mut self.sims[k - 1];
        let c = sim.dims().c();
        self.buf.clear();
        for &(xy, z) in &self.boundary {
            let z = if z < lw { z } else { z + PERIOD * k };
            self.buf.push(xy * c + z);
        }
        for &p in block {
            let (xy, z) = (p as usize / PERIOD, p as usize % PERIOD);
            for j in 0..k {
                self.buf.push(xy * c + lw + PERIOD * j + z);
            }
        }
        let n = sim.dims().cell_count();
        (n - sim.closure_size(self.buf.iter().copied())) as u64
    }
}

impl Landscape for BlockLandscape {
    fn energy(&mut self, chosen: &[Vec<u32>]) -> u64 {
        let train: u64 = (1..=self.train).map(|k| self.uninfected(&chosen[0], k)).sum();
        if train > 0 {
            return train + 1;
        }
        (self.train + 1..=self.sims.len())
            .map(|k| self.uninfected(&chosen[0], k))
            .sum()
    }
}

/// Slot adjacency of the block box, periodic along the long axis.
fn block_near(a: usize, b: usize) -> Vec<Vec<usize>> {
    let idx = |x: usize, y: usize, z: usize| (x * b + y) * PERIOD + z;
    let mut near = Vec::with_capacity(a * b * PERIOD);
    for x in 0..a {
        for y in 0..b {
            for z in 0..PERIOD {
                let mut v = vec![idx(x, y, (z + 1) % PERIOD), idx(x, y, (z + PERIOD - 1) % PERIOD)];
                if x > 0 {
                    v.push(idx(x - 1, y, z));
                }
                if x + 1 < a {
                    v.push(idx(x + 1, y, z));
                }
                if y > 0 {
                    v.push(idx(x, y - 1, z));
                }
                if y + 1 < b {
                    v.push(idx(x, y + 1, z));
                }
                near.push(v);
            }
        }
    }
    near
}

fn cut(dims: GridDims, seeds: &CellSet, left_width: usize) -> Result<(CellSet, CellSet)> {
    let [a, b, c] = dims.sides();
    let left = seeds.restrict(Cell::new(0, 0, 0), GridDims::new(a, b, left_width)?)?;
    let right = seeds.restrict(Cell::new(0, 0, left_width), GridDims::new(a, b, c - left_width)?)?;
    Ok((left, right))
}

/// Searches for a periodic pattern with the given cross-section and residue.
///
/// Deterministic for a fixed `rng_seed` and parameter set.
pub fn discover_family(spec: &FamilySpec, params: &DiscoveryParams, rng_seed: u64) -> Result<Discovery> {
    let (a, b, c0) = (spec.a, spec.b, spec.min_c);
    let dims0 = GridDims::new(a, b, c0)?;
    let target = lower_bound(dims0).1 as usize;
    let instances = params.train_instances.max(1) + params.check_instances;
    let block_domain = [Domain::new((0..(a * b * PERIOD) as u32).collect(), 2 * (a + b)).with_near(block_near(a, b))];
    let mut moves = 0;
    let mut best_energy = u64::MAX;
    for attempt in 0..params.boundary_attempts.max(1) {
        let seed = rng_seed.wrapping_add(attempt as u64);
        let found = find_at_bound(dims0, target, &params.boundary, seed)?;
        moves += found.nodes_explored;
        let Some(witness) = found.witness else {
            continue;
        };
        let boundary: Vec<(usize, usize)> = witness.indices().map(|i| (i / c0, i % c0)).collect();
        for left_width in 1..c0 {
            let make = || BlockLandscape {
                boundary: boundary.clone(),
                left_width,
                sims: (1..=instances)
                    .map(|k| Simulator::new(GridDims::new(a, b, c0 + PERIOD * k).expect("valid dims"), DEFAULT_R))
                    .collect(),
                train: params.train_instances.max(1),
                buf: Vec::new(),
            };
            let block_seed = seed.wrapping_mul(31).wrapping_add(left_width as u64);
            let (trial, m) = anneal::anneal(make, &block_domain, &params.block, block_seed);
            moves += m;
            best_energy = best_energy.min(trial.best_energy);
            if trial.best_energy == 0 {
                let (left, right) = cut(dims0, &witness, left_width)?;
                let block =
                    CellSet::from_indices(GridDims::new(a, b, PERIOD)?, trial.best[0].iter().map(|&p| p as usize));
                let pattern = FamilyPattern::new(&spec.id, left, block, right)?;
                return Ok(Discovery {
                    pattern: Some(pattern),
                    attempts: attempt + 1,
                    best_energy: 0,
                    moves,
                    rng_seed,
                });
            }
        }
    }
    Ok(Discovery {
        pattern: None,
        attempts: params.boundary_attempts.max(1),
        best_energy,
        moves,
        rng_seed,
    })
}

/// Writes patterns in the family file format.
pub fn write_families(patterns: &[FamilyPattern]) -> String {
    let mut out = String::from("# periodic family patterns\nversion 1\n");
    for p in patterns {
        out.push_str(&format!(
            "\nfamily {}\nsection {} {}\nresidue {}\nmin-c {}\n",
            p.id,
            p.a,
            p.b,
            p.residue(),
            p.min_c()
        ));
        for (name, part) in [("left", &p.left), ("block", &p.block), ("right", &p.right)] {
            out.push_str(name);
            out.push('\n');
            out.push_str(&textgrid::write_seeds(part));
            out.push_str("end\n");
        }
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: 1,
        message: message.into(),
    }
}

/// Reads a family file written by [`write_families`].
pub fn parse_families(text: &str) -> Result<Vec<FamilyPattern>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let skip = |i: &mut usize| {
        while *i < lines.len() && (lines[*i].trim().is_empty() || lines[*i].starts_with('#')) {
            *i += 1;
        }
    };
    skip(&mut i);
    if lines.get(i).map(|l| l.trim()) != Some("version 1") {
        return Err(parse_err(i + 1, "expected `version 1`"));
    }
    i += 1;
    loop {
        skip(&mut i);
        if i >= lines.len() {
            break;
        }
        let id = lines[i]
            .strip_prefix("family ")
            .ok_or_else(|| parse_err(i + 1, "expected `family <id>`"))?
            .trim()
            .to_string();
        let header = |i: usize, key: &str| -> Result<Vec<usize>> {
            let rest = lines
                .get(i)
                .and_then(|l| l.strip_prefix(key))
                .ok_or_else(|| parse_err(i + 1, format!("expected `{}`", key.trim())))?;
            rest.split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(i + 1, format!("bad number {t:?}"))))
                .collect()
        };
        let section = header(i + 1, "section ")?;
        let residue = header(i + 2, "residue ")?;
        let min_c = header(i + 3, "min-c ")?;
        if section.len() != 2 || residue.len() != 1 || min_c.len() != 1 {
            return Err(parse_err(i + 2, "malformed family header"));
        }
        i += 4;
        let mut parts = Vec::new();
        for name in ["left", "block", "right"] {
            if lines.get(i).map(|l| l.trim()) != Some(name) {
                return Err(parse_err(i + 1, format!("expected `{name}`")));
            }
            let start = i + 1;
            let end = (start..lines.len())
                .find(|&j| lines[j].trim() == "end")
                .ok_or_else(|| parse_err(start, "missing `end`"))?;
            let (dims, set) = textgrid::parse_seeds_at(&lines[start..end].join("\n"), start + 1)?;
            if dims.a() != section[0] || dims.b() != section[1] {
                return Err(parse_err(start + 1, format!("{name} has cross-section {dims}")));
            }
            parts.push(set);
            i = end + 1;
        }
        let right = parts.pop().expect("three parts");
        let block = parts.pop().expect("three parts");
        let left = parts.pop().expect("three parts");
        let pattern = FamilyPattern::new(&id, left, block, right)?;
        if pattern.residue() != residue[0] || pattern.min_c() != min_c[0] {
            return Err(parse_err(
                i,
                format!("family {id}: residue/min-c disagree with boundary widths"),
            ));
        }
        out.push(pattern);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUNDLED: &str = include_str!("../../data/families.txt");

    fn bundled() -> Vec<FamilyPattern> {
        parse_families(BUNDLED).unwrap()
    }

    fn by_id(id: &str) -> FamilyPattern {
        bundled().into_iter().find(|p| p.id == id).unwrap()
    }

    #[test]
    fn bundled_file_has_every_standard_family() {
        let ids: Vec<String> = bundled().into_iter().map(|p| p.id).collect();
        for (id, ..) in STANDARD_FAMILIES {
            assert!(ids.iter().any(|i| i == id), "{id} missing");
        }
    }

    #[test]
    fn family_file_round_trip() {
        let patterns = bundled();
        let text = write_families(&patterns);
        assert_eq!(parse_families(&text).unwrap(), patterns);
    }

    #[test]
    fn block_with_wrong_count_rejected() {
        let p = by_id("2x5");
        let mut block = p.block.clone();
        let free = block.complement().iter().next().unwrap();
        block.insert(free).unwrap();
        let err = FamilyPattern::new("bad", p.left.clone(), block, p.right.clone()).unwrap_err();
        assert!(matches!(err, Error::PatternRejected(m) if m.contains("2(a+b)")));
    }

    #[test]
    fn seeds_for_layout() {
        let p = by_id("2x6");
        assert!(!p.admits(7));
        assert!(p.seeds_for(7).is_err());
        let s = p.seeds_for(12).unwrap();
        assert_eq!(s.len(), (2 * 6 + 2 * 12 + 6 * 12) / 3);
        // the left boundary sits at column 0
        for cell in p.left.iter() {
            assert!(s.contains(cell));
        }
    }

    #[test]
    fn assembled_instances_are_perfect() {
        for p in bundled() {
            for c in (p.min_c()..).step_by(PERIOD).take(3) {
                let e = p.assemble(c).unwrap();
                assert_eq!(3 * e.size() as u64, e.dims.pair_sum(), "{} at c = {c}", p.id);
            }
        }
    }
}
