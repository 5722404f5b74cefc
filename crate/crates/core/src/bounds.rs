//! Surface-area lower bound, divisibility test, and seed-set classification.

use std::fmt;

use num_rational::Ratio;

use crate::engine::{percolate, surface_quantity, PercolationTrace, DEFAULT_R};
use crate::error::{Error, Result};
use crate::grid::{neighbours, CellSet, GridDims};

/// `(ab+ac+bc)/3` exactly, and its ceiling.
pub fn lower_bound(dims: GridDims) -> (Ratio<u64>, u64) {
    let s = dims.pair_sum();
    (Ratio::new(s, 3), s.div_ceil(3))
}

/// Whether `(ab+ac+bc)/3` is an integer, via the congruence characterization:
/// two sides divisible by three, or all three sides congruent mod 3.
pub fn perfect_precondition(dims: GridDims) -> bool {
    let [a, b, c] = dims.sides().map(|s| s % 3);
    let zeros = [a, b, c].iter().filter(|&&r| r == 0).count();
    let holds = zeros >= 2 || (a == b && b == c);
    debug_assert_eq!(holds, dims.pair_sum().is_multiple_of(3));
    holds
}

/// Set-level status, ordered so that `Perfect > Optimal > Percolating`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    NotPercolating,
    Percolating,
    Optimal,
    Perfect,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::NotPercolating => "not-percolating",
            Status::Percolating => "percolating",
            Status::Optimal => "optimal",
            Status::Perfect => "perfect",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        match s {
            "not-percolating" => Some(Status::NotPercolating),
            "percolating" => Some(Status::Percolating),
            "optimal" => Some(Status::Optimal),
            "perfect" => Some(Status::Perfect),
            _ => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub dims: GridDims,
    pub percolates: bool,
    pub size: usize,
    pub lower_bound_exact: Ratio<u64>,
    pub lower_bound_ceil: u64,
    pub status: Status,
    /// Grid-level minimum, present only when proven by exhaustive search.
    pub proven_minimum: Option<usize>,
}

impl Classification {
    /// Whether the set is a minimum percolating set of its grid. Only answered
    /// when the bound is attained or a proven minimum was attached.
    pub fn is_grid_minimum(&self) -> Option<bool> {
        if !self.percolates {
            return Some(false);
        }
        if self.status >= Status::Optimal {
            return Some(true);
        }
        self.proven_minimum.map(|m| m == self.size)
    }

    pub fn with_proven_minimum(mut self, minimum: usize) -> Self {
        self.proven_minimum = Some(minimum);
        self
    }
}

fn status_for(dims: GridDims, percolates: bool, size: usize) -> Status {
    let (_, ceil) = lower_bound(dims);
    let size = size as u64;
    if !percolates {
        Status::NotPercolating
    } else if 3 * size == dims.pair_sum() {
        Status::Perfect
    } else if size == ceil {
        Status::Optimal
    } else {
        Status::Percolating
    }
}

/// Classifies a completed 3-neighbour trace started from `seeds`.
pub fn classify_trace(trace: &PercolationTrace, seeds: &CellSet) -> Result<Classification> {
    if trace.is_truncated() {
        return Err(Error::Truncated {
            steps: trace.steps_taken(),
        });
    }
    let dims = trace.dims();
    let (exact, ceil) = lower_bound(dims);
    let percolates = trace.percolated();
    Ok(Classification {
        dims,
        percolates,
        size: seeds.len(),
        lower_bound_exact: exact,
        lower_bound_ceil: ceil,
        status: status_for(dims, percolates, seeds.len()),
        proven_minimum: None,
    })
}

/// Simulates `seeds` under the 3-neighbour rule and classifies the outcome.
pub fn classify(dims: GridDims, seeds: &CellSet) -> Result<Classification> {
    classify_with_limit(dims, seeds, dims.cell_count())
}

pub fn classify_with_limit(dims: GridDims, seeds: &CellSet, max_steps: usize) -> Result<Classification> {
    if seeds.dims() != dims {
        return Err(Error::DimsMismatch {
            expected: dims,
            found: seeds.dims(),
        });
    }
    let trace = percolate(dims, DEFAULT_R, seeds, max_steps);
    classify_trace(&trace, seeds)
}

/// Tightness conditions of the surface-area argument, checked on a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditReport {
    /// No two seeds are adjacent.
    pub seeds_independent: bool,
    /// Every infected non-seed had exactly three infected neighbours one step earlier.
    pub exact_three: bool,
    /// No two adjacent cells turned at the same step.
    pub no_adjacent_simultaneous: bool,
    /// `6|A_t| − n(A_t)` took the same value in every frame.
    pub surface_constant: bool,
    /// The run percolated with `3|A_0| = ab+ac+bc`.
    pub size_tight: bool,
}

impl AuditReport {
    pub fn all_hold(&self) -> bool {
        self.seeds_independent && self.exact_three && self.no_adjacent_simultaneous
    }
}

/// Checks the equality conditions behind a perfect percolating set.
pub fn perfect_audit(trace: &PercolationTrace, seeds: &CellSet) -> AuditReport {
    let dims = trace.dims();
    assert_eq!(seeds.dims(), dims, "seed set belongs to another grid");
    let mut exact_three = true;
    let mut no_adjacent_simultaneous = true;
    for cell in dims.cells() {
        let Some(t) = trace.infection_time(cell) else {
            continue;
        };
        if t == 0 {
            continue;
        }
        if trace.neighbours_at_infection(cell) != Some(3) {
            exact_three = false;
        }
        for nb in neighbours(dims, cell).expect("cell enumerated from dims") {
            if trace.infection_time(nb) == Some(t) {
                no_adjacent_simultaneous = false;
            }
        }
    }
    let surface_constant = frames_surface_constant(trace);
    AuditReport {
        seeds_independent: seeds.is_independent(),
        exact_three,
        no_adjacent_simultaneous,
        surface_constant,
        size_tight: trace.percolated() && 3 * seeds.len() as u64 == dims.pair_sum(),
    }
}

fn frames_surface_constant(trace: &PercolationTrace) -> bool {
    let dims = trace.dims();
    let initial = surface_quantity(dims, &trace.frame(0));
    (1..=trace.steps_taken()).all(|t| surface_quantity(dims, &trace.frame(t)) == initial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::percolate_default;
    use crate::grid::Cell;

    fn d(a: usize, b: usize, c: usize) -> GridDims {
        GridDims::new(a, b, c).unwrap()
    }

    fn diamond() -> CellSet {
        CellSet::from_cells(
            d(1, 3, 3),
            [(1, 1, 1), (1, 1, 3), (1, 2, 2), (1, 3, 1), (1, 3, 3)].map(|(x, y, z)| Cell::one_based(x, y, z)),
        )
        .unwrap()
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound(d(4, 6, 6)), (Ratio::from_integer(28), 28));
        assert_eq!(lower_bound(d(7, 7, 11)), (Ratio::new(203, 3), 68));
        assert_eq!(lower_bound(d(1, 3, 3)), (Ratio::from_integer(5), 5));
    }

    #[test]
    fn lower_bound_symmetric() {
        for t in crate::grid::Transform::all() {
            let dims = d(2, 5, 7);
            assert_eq!(lower_bound(t.apply_dims(dims)), lower_bound(dims));
        }
    }

    #[test]
    fn precondition_matches_divisibility() {
        assert!(perfect_precondition(d(4, 6, 9)));
        assert!(!perfect_precondition(d(2, 3, 4)));
        assert!(perfect_precondition(d(3, 3, 3)));
        for a in 1..=12 {
            for b in 1..=12 {
                for c in 1..=12 {
                    let dims = d(a, b, c);
                    assert_eq!(perfect_precondition(dims), dims.pair_sum().is_multiple_of(3), "{dims}");
                }
            }
        }
    }

    #[test]
    fn classify_diamond_perfect() {
        let c = classify(d(1, 3, 3), &diamond()).unwrap();
        assert_eq!(c.status, Status::Perfect);
        assert_eq!(c.is_grid_minimum(), Some(true));
    }

    #[test]
    fn classify_full_grid_percolating_only() {
        let dims = d(2, 3, 4);
        let c = classify(dims, &CellSet::full(dims)).unwrap();
        assert_eq!(c.status, Status::Percolating);
        assert_eq!(c.is_grid_minimum(), None);
    }

    #[test]
    fn classify_truncated_is_error() {
        let dims = d(1, 3, 3);
        assert!(matches!(
            classify_with_limit(dims, &diamond(), 0),
            Err(Error::Truncated { .. })
        ));
        assert!(classify(d(1, 3, 4), &diamond()).is_err());
    }

    #[test]
    fn audit_passes_on_perfect_set() {
        let trace = percolate_default(&diamond());
        let report = perfect_audit(&trace, &diamond());
        assert!(report.all_hold());
        assert!(report.surface_constant && report.size_tight);
    }

    #[test]
    fn audit_flags_adjacent_seeds() {
        let dims = d(1, 3, 3);
        let mut seeds = diamond();
        seeds.insert(Cell::one_based(1, 1, 2)).unwrap();
        let report = perfect_audit(&percolate_default(&seeds), &seeds);
        assert!(!report.seeds_independent);
        assert!(!report.all_hold());
        assert_eq!(classify(dims, &seeds).unwrap().status, Status::Percolating);
    }
}
