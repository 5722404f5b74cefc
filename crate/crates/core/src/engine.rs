//! Synchronous r-neighbour bootstrap percolation on grid graphs.
//!
//! `A_t = A_{t-1} ∪ {v : |N(v) ∩ A_{t-1}| ≥ r}`. All cells eligible at a step
//! turn together; counts are always taken against the previous frame.

use crate::error::{Error, Result};
use crate::grid::{neighbours, Adjacency, Cell, CellSet, GridDims};

/// Threshold used throughout unless stated otherwise.
pub const DEFAULT_R: usize = 3;

/// Infection time stored for cells that never turn.
const NEVER: u32 = u32::MAX;

/// One application of the bootstrap rule.
pub fn step(dims: GridDims, r: usize, current: &CellSet) -> CellSet {
    assert_eq!(current.dims(), dims, "cell set belongs to another grid");
    let mut next = current.clone();
    for cell in dims.cells() {
        if current.contains(cell) {
            continue;
        }
        let infected = neighbours(dims, cell)
            .expect("cell enumerated from dims")
            .into_iter()
            .filter(|&nb| current.contains(nb))
            .count();
        if infected >= r {
            next.insert(cell).expect("cell enumerated from dims");
        }
    }
    next
}

/// How a simulation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    FixedPoint,
    /// The step limit was hit while cells were still turning.
    Truncated,
}

/// Full record of one run of the process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PercolationTrace {
    dims: GridDims,
    r: usize,
    infection_time: Vec<u32>,
    neighbours_at_infection: Vec<u8>,
    steps_taken: usize,
    termination: Termination,
}

impl PercolationTrace {
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `None` when the cell is never infected.
    pub fn infection_time(&self, cell: Cell) -> Option<usize> {
        self.time_at(self.dims.index(cell))
    }

    pub fn time_at(&self, index: usize) -> Option<usize> {
        match self.infection_time[index] {
            NEVER => None,
            t => Some(t as usize),
        }
    }

    /// Infected neighbours in the previous frame when the cell turned (0 for seeds).
    pub fn neighbours_at_infection(&self, cell: Cell) -> Option<usize> {
        let i = self.dims.index(cell);
        self.time_at(i).map(|_| self.neighbours_at_infection[i] as usize)
    }

    pub fn percolated(&self) -> bool {
        self.termination == Termination::FixedPoint && self.infection_time.iter().all(|&t| t != NEVER)
    }

    /// Number of productive steps, i.e. the last infection time.
    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn is_truncated(&self) -> bool {
        self.termination == Termination::Truncated
    }

    /// Errors if the run was cut off before its fixed point.
    pub fn complete(self) -> Result<Self> {
        match self.termination {
            Termination::FixedPoint => Ok(self),
            Termination::Truncated => Err(Error::Truncated {
                steps: self.steps_taken,
            }),
        }
    }

    /// `A_t`: every cell infected at time `t` or earlier.
    pub fn frame(&self, t: usize) -> CellSet {
        CellSet::from_indices(
            self.dims,
            self.infection_time
                .iter()
                .enumerate()
                .filter(|&(_, &s)| s != NEVER && s as usize <= t)
                .map(|(i, _)| i),
        )
    }

    pub fn seeds(&self) -> CellSet {
        self.frame(0)
    }

    pub fn final_set(&self) -> CellSet {
        self.frame(self.steps_taken)
    }

    pub fn infected_count(&self) -> usize {
        self.infection_time.iter().filter(|&&t| t != NEVER).count()
    }

    pub fn raw_times(&self) -> &[u32] {
        &self.infection_time
    }
}

/// Runs the process from `seeds` to a fixed point, or for at most `max_steps` steps.
pub fn percolate(dims: GridDims, r: usize, seeds: &CellSet, max_steps: usize) -> PercolationTrace {
    assert_eq!(seeds.dims(), dims, "seed set belongs to another grid");
    let mut sim = Simulator::new(dims, r);
    sim.trace(seeds, max_steps)
}

/// `percolate` with `r = 3` and the `a·b·c` step limit.
pub fn percolate_default(seeds: &CellSet) -> PercolationTrace {
    let dims = seeds.dims();
    percolate(dims, DEFAULT_R, seeds, dims.cell_count())
}

/// Reusable frontier-driven simulator for repeated runs on one grid.
#[derive(Debug, Clone)]
pub struct Simulator {
    adj: Adjacency,
    r: u8,
    counts: Vec<u8>,
    time: Vec<u32>,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl Simulator {
    pub fn new(dims: GridDims, r: usize) -> Self {
        assert!(r >= 1, "threshold must be positive");
        let n = dims.cell_count();
        Simulator {
            adj: Adjacency::new(dims),
            r: r.min(u8::MAX as usize) as u8,
            counts: vec![0; n],
            time: vec![NEVER; n],
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    pub fn dims(&self) -> GridDims {
        self.adj.dims()
    }

    /// Runs to the fixed point and returns the number of infected cells.
    pub fn closure_size<I: IntoIterator<Item = usize>>(&mut self, seeds: I) -> usize {
        self.run(seeds, usize::MAX).0
    }

    /// Core loop; returns (infected count, productive steps, truncated).
    fn run<I: IntoIterator<Item = usize>>(&mut self, seeds: I, max_steps: usize) -> (usize, usize, bool) {
        self.counts.fill(0);
        self.time.fill(NEVER);
        self.frontier.clear();
        for s in seeds {
            if self.time[s] == NEVER {
                self.time[s] = 0;
                self.frontier.push(s as u32);
            }
        }
        let mut infected = self.frontier.len();
        let mut t = 0usize;
        loop {
            self.next.clear();
            for &v in &self.frontier {
                for &u in self.adj.of(v as usize) {
                    let u = u as usize;
                    if self.time[u] != NEVER {
                        continue;
                    }
                    self.counts[u] += 1;
                    if self.counts[u] == self.r {
                        self.next.push(u as u32);
                    }
                }
            }
            if self.next.is_empty() {
                return (infected, t, false);
            }
            if t >= max_steps {
                return (infected, t, true);
            }
            t += 1;
            for &u in &self.next {
                self.time[u as usize] = t as u32;
            }
            infected += self.next.len();
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
    }

    pub fn trace(&mut self, seeds: &CellSet, max_steps: usize) -> PercolationTrace {
        let dims = self.dims();
        let (_, steps, truncated) = self.run(seeds.indices(), max_steps);
        // a cell stops accumulating once it turns, so its count is |N(v) ∩ A_{t-1}|
        let neighbours_at_infection = (0..dims.cell_count())
            .map(|v| match self.time[v] {
                0 | NEVER => 0,
                _ => self.counts[v],
            })
            .collect();
        PercolationTrace {
            dims,
            r: self.r as usize,
            infection_time: self.time.clone(),
            neighbours_at_infection,
            steps_taken: steps,
            termination: if truncated {
                Termination::Truncated
            } else {
                Termination::FixedPoint
            },
        }
    }

    /// Infection times of the last run (`u32::MAX` = never).
    pub fn times(&self) -> &[u32] {
        &self.time
    }
}

/// `n(A)`: twice the number of grid edges with both ends in `set`.
pub fn degree_pair_sum(dims: GridDims, set: &CellSet) -> u64 {
    assert_eq!(set.dims(), dims, "cell set belongs to another grid");
    set.iter()
        .map(|cell| {
            neighbours(dims, cell)
                .expect("member inside dims")
                .into_iter()
                .filter(|&nb| set.contains(nb))
                .count() as u64
        })
        .sum()
}

/// `6|A| − n(A)`; nonincreasing along the 3-neighbour process.
pub fn surface_quantity(dims: GridDims, set: &CellSet) -> i64 {
    6 * set.len() as i64 - degree_pair_sum(dims, set) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: usize, b: usize, c: usize) -> GridDims {
        GridDims::new(a, b, c).unwrap()
    }

    fn set(dims: GridDims, cells: &[(usize, usize, usize)]) -> CellSet {
        CellSet::from_cells(dims, cells.iter().map(|&(x, y, z)| Cell::one_based(x, y, z))).unwrap()
    }

    fn diamond() -> CellSet {
        set(d(1, 3, 3), &[(1, 1, 1), (1, 1, 3), (1, 2, 2), (1, 3, 1), (1, 3, 3)])
    }

    #[test]
    fn step_fixed_points() {
        let dims = d(2, 3, 4);
        let full = CellSet::full(dims);
        assert_eq!(step(dims, 3, &full), full);
        let empty = CellSet::empty(dims);
        assert_eq!(step(dims, 3, &empty), empty);
    }

    #[test]
    fn step_on_diamond_adds_edge_midpoints() {
        let dims = d(1, 3, 3);
        let next = step(dims, 3, &diamond());
        let added: Vec<_> = next.iter().filter(|c| !diamond().contains(*c)).collect();
        assert_eq!(
            added,
            vec![
                Cell::one_based(1, 1, 2),
                Cell::one_based(1, 2, 1),
                Cell::one_based(1, 2, 3),
                Cell::one_based(1, 3, 2)
            ]
        );
    }

    #[test]
    fn diamond_percolates_in_one_step() {
        let trace = percolate(d(1, 3, 3), 3, &diamond(), 9);
        assert!(trace.percolated());
        assert_eq!(trace.steps_taken(), 1);
        assert_eq!(trace.neighbours_at_infection(Cell::one_based(1, 1, 2)), Some(3));
        assert_eq!(trace.neighbours_at_infection(Cell::one_based(1, 1, 1)), Some(0));
    }

    #[test]
    fn path_never_grows() {
        let dims = d(1, 1, 6);
        for mask in 0u32..(1 << 6) - 1 {
            let seeds = CellSet::from_indices(dims, (0..6).filter(|i| mask >> i & 1 == 1));
            let trace = percolate(dims, 3, &seeds, 6);
            assert!(!trace.percolated());
            assert_eq!(trace.steps_taken(), 0);
        }
    }

    #[test]
    fn truncation_is_reported() {
        let dims = d(1, 3, 3);
        let diagonal = set(dims, &[(1, 1, 1), (1, 2, 2), (1, 3, 3)]);
        let trace = percolate(dims, 2, &diagonal, 1);
        assert!(trace.is_truncated());
        assert!(!trace.percolated());
        assert!(matches!(trace.clone().complete(), Err(Error::Truncated { .. })));
        let full = percolate(dims, 2, &diagonal, 9);
        assert!(full.percolated());
        assert_eq!(full.steps_taken(), 2);
        // exactly enough steps is not a truncation
        let exact = percolate(dims, 2, &diagonal, full.steps_taken());
        assert_eq!(exact.termination(), Termination::FixedPoint);
    }

    #[test]
    fn degree_pair_sum_cases() {
        let dims = d(3, 4, 5);
        assert_eq!(degree_pair_sum(dims, &CellSet::full(dims)), 6 * 60 - 2 * (12 + 15 + 20));
        assert_eq!(degree_pair_sum(dims, &set(dims, &[(2, 2, 2)])), 0);
        let path = d(1, 1, 7);
        assert_eq!(degree_pair_sum(path, &CellSet::full(path)), 2 * 7 - 2);
    }

    #[test]
    fn surface_quantity_cases() {
        let dims = d(3, 4, 5);
        assert_eq!(surface_quantity(dims, &CellSet::full(dims)), 2 * (12 + 15 + 20));
        assert_eq!(surface_quantity(dims, &CellSet::empty(dims)), 0);
        let indep = set(dims, &[(1, 1, 1), (3, 4, 5), (2, 2, 2)]);
        assert_eq!(surface_quantity(dims, &indep), 18);
    }
}
