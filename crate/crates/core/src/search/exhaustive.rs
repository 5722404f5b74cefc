//! Exhaustive minimum percolating set computation for tiny grids.
//!
//! Sizes are tried from the lower bound upward. For each size the subsets are
//! enumerated in lexicographic index order with three prunings:
//!
//! * cells of degree below `r` can never turn, so they are always seeds;
//! * for `r = 3` a set of size `k` percolates only if `6k − n(A) ≥ 2(ab+ac+bc)`,
//!   and `n` only grows as cells are added;
//! * the first few chosen cells must be minimal under the pointwise
//!   stabilizer of the cells chosen before them, which keeps exactly the
//!   lexicographically least set of each symmetry orbit.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{SearchMode, SearchResult};
use crate::bounds::lower_bound;
use crate::engine::Simulator;
use crate::error::{Error, Result};
use crate::grid::{Adjacency, CellSet, GridDims, Transform};

/// Largest grid the exhaustive search accepts.
pub const EXHAUSTIVE_CELL_CAP: usize = 30;

/// Chosen cells subject to canonical-form pruning.
const SYMMETRY_DEPTH: usize = 3;

struct Enumerator<'a> {
    dims: GridDims,
    adj: &'a Adjacency,
    r: usize,
    size: usize,
    /// Non-forced cells, in increasing index order.
    free: &'a [usize],
    forced: &'a [usize],
    forced_pairs: u64,
    /// `2(ab+ac+bc)` when the surface prune applies.
    surface_floor: Option<i64>,
    maps: &'a [Vec<u32>],
    budget: u64,
    nodes: &'a AtomicU64,
}

struct Worker<'a> {
    en: &'a Enumerator<'a>,
    sim: Simulator,
    member: Vec<bool>,
    chosen: Vec<usize>,
    pairs: u64,
    nodes: u64,
    exhausted: bool,
}

impl<'a> Worker<'a> {
    fn new(en: &'a Enumerator<'a>) -> Self {
        let mut member = vec![false; en.dims.cell_count()];
        for &f in en.forced {
            member[f] = true;
        }
        Worker {
            en,
            sim: Simulator::new(en.dims, en.r),
            member,
            chosen: Vec::with_capacity(en.size),
            pairs: en.forced_pairs,
            nodes: 0,
            exhausted: false,
        }
    }

    fn push(&mut self, cell: usize) {
        let added = self
            .en
            .adj
            .of(cell)
            .iter()
            .filter(|&&u| self.member[u as usize])
            .count() as u64;
        self.pairs += 2 * added;
        self.member[cell] = true;
        self.chosen.push(cell);
    }

    fn pop(&mut self) {
        let cell = self.chosen.pop().expect("nonempty");
        self.member[cell] = false;
        let removed = self
            .en
            .adj
            .of(cell)
            .iter()
            .filter(|&&u| self.member[u as usize])
            .count() as u64;
        self.pairs -= 2 * removed;
    }

    fn surface_ok(&self) -> bool {
        match self.en.surface_floor {
            Some(floor) => 6 * (self.en.size + self.en.forced.len()) as i64 - self.pairs as i64 >= floor,
            None => true,
        }
    }

    /// Canonical test for the newest chosen cell given the stabilizer of the earlier ones.
    fn canonical(&self, stabilizer: &[usize]) -> bool {
        let cell = *self.chosen.last().expect("nonempty") as u32;
        stabilizer.iter().all(|&g| self.en.maps[g][cell as usize] >= cell)
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(64) {
            let total = self.en.nodes.fetch_add(64, Ordering::Relaxed) + 64;
            if total > self.en.budget {
                self.exhausted = true;
            }
        }
        !self.exhausted
    }

    /// Depth-first search below the current prefix; `next` is the first free slot allowed.
    fn dfs(&mut self, next: usize, stabilizer: &[usize]) -> bool {
        if !self.tick() {
            return false;
        }
        let remaining = self.en.size - self.chosen.len();
        if remaining == 0 {
            let seeds = self.en.forced.iter().chain(self.chosen.iter()).copied();
            return self.sim.closure_size(seeds) == self.en.dims.cell_count();
        }
        let free = self.en.free;
        let depth = self.chosen.len();
        for (slot, &cell) in free.iter().enumerate().take(free.len() - remaining + 1).skip(next) {
            self.push(cell);
            let keep = self.surface_ok() && (depth >= SYMMETRY_DEPTH || self.canonical(stabilizer));
            if keep {
                let found = if depth + 1 < SYMMETRY_DEPTH {
                    let narrowed: Vec<usize> = stabilizer
                        .iter()
                        .copied()
                        .filter(|&g| self.en.maps[g][cell] as usize == cell)
                        .collect();
                    self.dfs(slot + 1, &narrowed)
                } else {
                    self.dfs(slot + 1, stabilizer)
                };
                if found {
                    return true;
                }
            }
            self.pop();
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

/// Outcome of one size level for one first-cell prefix.
struct PrefixOutcome {
    witness: Option<Vec<usize>>,
    nodes: u64,
    exhausted: bool,
}

fn search_size(en: &Enumerator<'_>) -> (Option<Vec<usize>>, u64, bool) {
    if en.size == 0 {
        let mut sim = Simulator::new(en.dims, en.r);
        let ok = sim.closure_size(en.forced.iter().copied()) == en.dims.cell_count();
        return (ok.then(|| en.forced.to_vec()), 1, false);
    }
    if en.free.len() < en.size {
        return (None, 0, false);
    }
    let all_group: Vec<usize> = (0..en.maps.len()).collect();
    let prefixes: Vec<usize> = (0..=en.free.len() - en.size).collect();
    let chunk = rayon::current_num_threads().max(1);
    let mut nodes = 0;
    for batch in prefixes.chunks(chunk) {
        let outcomes: Vec<PrefixOutcome> = batch
            .par_iter()
            .map(|&slot| {
                let mut w = Worker::new(en);
                w.push(en.free[slot]);
                let mut witness = None;
                if w.surface_ok() && w.canonical(&all_group) {
                    let narrowed: Vec<usize> = all_group
                        .iter()
                        .copied()
                        .filter(|&g| en.maps[g][en.free[slot]] as usize == en.free[slot])
                        .collect();
                    if w.dfs(slot + 1, &narrowed) {
                        witness = Some(en.forced.iter().chain(w.chosen.iter()).copied().collect());
                    }
                }
                PrefixOutcome {
                    witness,
                    nodes: w.nodes,
                    exhausted: w.exhausted,
                }
            })
            .collect();
        for o in outcomes {
            nodes += o.nodes;
            if o.witness.is_some() {
                return (o.witness, nodes, false);
            }
            if o.exhausted {
                return (None, nodes, true);
            }
        }
    }
    (None, nodes, false)
}

/// Computes the minimum size of a percolating set of `dims` under the
/// `r`-neighbour rule by exhaustive enumeration.
pub fn min_exhaustive(dims: GridDims, r: usize, budget: u64) -> Result<SearchResult> {
    if dims.cell_count() > EXHAUSTIVE_CELL_CAP {
        return Err(Error::Capacity {
            dims,
            cap: EXHAUSTIVE_CELL_CAP,
        });
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let adj = Adjacency::new(dims);
    let n = dims.cell_count();
    let (forced, free): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| adj.of(i).len() < r);
    let forced_pairs = forced
        .iter()
        .map(|&f| adj.of(f).iter().filter(|&&u| forced.contains(&(u as usize))).count() as u64)
        .sum();
    let maps: Vec<Vec<u32>> = Transform::automorphisms(dims)
        .iter()
        .map(|t| t.index_map(dims))
        .collect();
    let surface_floor = (r == 3).then(|| 2 * dims.pair_sum() as i64);
    let start = if r == 3 { lower_bound(dims).1 as usize } else { 0 };
    let start = start.max(forced.len());
    let counter = AtomicU64::new(0);
    let mut total_nodes = 0;
    for size in start..=n {
        let en = Enumerator {
            dims,
            adj: &adj,
            r,
            size: size - forced.len(),
            free: &free,
            forced: &forced,
            forced_pairs,
            surface_floor,
            maps: &maps,
            budget,
            nodes: &counter,
        };
        let (witness, nodes, exhausted) = search_size(&en);
        total_nodes += nodes;
        if let Some(w) = witness {
            return Ok(SearchResult {
                dims,
                mode: SearchMode::ExhaustiveProven,
                min_size: Some(size),
                witness: Some(CellSet::from_indices(dims, w)),
                nodes_explored: total_nodes,
                rng_seed: None,
                progress: format!("minimum {size} proven; sizes {start}..{} exhausted", size),
            });
        }
        if exhausted {
            return Ok(SearchResult {
                dims,
                mode: SearchMode::Failed,
                min_size: None,
                witness: None,
                nodes_explored: total_nodes,
                rng_seed: None,
                progress: format!("budget exhausted at size {size}; sizes below {size} have no percolating set"),
            });
        }
    }
    unreachable!("the full grid always percolates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::percolate_default;

    fn d(a: usize, b: usize, c: usize) -> GridDims {
        GridDims::new(a, b, c).unwrap()
    }

    #[test]
    fn path_needs_every_cell() {
        let res = min_exhaustive(d(1, 1, 4), 3, u64::MAX).unwrap();
        assert_eq!(res.min_size, Some(4));
        assert_eq!(res.mode, SearchMode::ExhaustiveProven);
    }

    #[test]
    fn three_by_three_square() {
        let res = min_exhaustive(d(1, 3, 3), 3, u64::MAX).unwrap();
        assert_eq!(res.min_size, Some(5));
        assert!(percolate_default(res.witness.as_ref().unwrap()).percolated());
    }

    #[test]
    fn refuses_large_grids() {
        assert!(matches!(min_exhaustive(d(2, 4, 4), 3, 10), Err(Error::Capacity { .. })));
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let res = min_exhaustive(d(2, 3, 3), 3, 10).unwrap();
        assert_eq!(res.mode, SearchMode::Failed);
        assert!(res.witness.is_none());
    }

    #[test]
    fn other_thresholds() {
        // r = 2 on a 3x3 square: a diagonal of three cells suffices
        let res = min_exhaustive(d(1, 3, 3), 2, u64::MAX).unwrap();
        assert_eq!(res.min_size, Some(3));
        let res = min_exhaustive(d(1, 2, 3), 1, u64::MAX).unwrap();
        assert_eq!(res.min_size, Some(1));
    }
}
