//! Milestones: the first step at which a named region is fully infected.
//!
//! For a family of instances the milestone times of a region can be fitted
//! exactly by an affine function of `c`, which is how the timelines of the
//! periodic constructions are summarised.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::constructions::family::FamilyPattern;
use crate::engine::{percolate_default, PercolationTrace};
use crate::error::{Error, Result};
use crate::grid::{neighbours, Cell, GridDims};

type Predicate = Arc<dyn Fn(GridDims, Cell) -> bool + Send + Sync>;

/// A named set of cells, defined for every grid size.
#[derive(Clone)]
pub struct Region {
    pub name: String,
    contains: Predicate,
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Region").field(&self.name).finish()
    }
}

impl Region {
    pub fn new(name: impl Into<String>, contains: impl Fn(GridDims, Cell) -> bool + Send + Sync + 'static) -> Region {
        Region {
            name: name.into(),
            contains: Arc::new(contains),
        }
    }

    pub fn full() -> Region {
        Region::new("whole grid", |_, _| true)
    }

    /// Layer `x`, one-based.
    pub fn layer(x: usize) -> Region {
        Region::new(format!("layer {x}"), move |_, cell| cell.x + 1 == x)
    }

    /// Rows `lo..=hi` of layer `x`, one-based.
    pub fn rows(x: usize, lo: usize, hi: usize) -> Region {
        Region::new(format!("rows {lo} to {hi} of layer {x}"), move |_, cell| {
            cell.x + 1 == x && (lo..=hi).contains(&(cell.y + 1))
        })
    }

    /// The last `n` columns of every layer.
    pub fn right_columns(n: usize) -> Region {
        Region::new(format!("right {n} columns"), move |dims, cell| cell.z + n >= dims.c())
    }

    pub fn contains(&self, dims: GridDims, cell: Cell) -> bool {
        (self.contains)(dims, cell)
    }
}

/// A step count, or an exact affine function `slope · c + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilestoneTime {
    Step(usize),
    Affine { slope: Ratio<i64>, intercept: Ratio<i64> },
    Never,
}

impl MilestoneTime {
    pub fn at(&self, c: usize) -> Option<Ratio<i64>> {
        match *self {
            MilestoneTime::Step(t) => Some(Ratio::from_integer(t as i64)),
            MilestoneTime::Affine { slope, intercept } => Some(slope * c as i64 + intercept),
            MilestoneTime::Never => None,
        }
    }
}

impl fmt::Display for MilestoneTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MilestoneTime::Step(t) => write!(f, "{t}"),
            MilestoneTime::Never => write!(f, "never"),
            MilestoneTime::Affine { slope, intercept } => {
                let zero = Ratio::from_integer(0);
                let one = Ratio::from_integer(1);
                if slope == zero {
                    return write!(f, "{intercept}");
                }
                if slope == one {
                    write!(f, "c")?;
                } else if slope.is_integer() {
                    write!(f, "{slope}c")?;
                } else {
                    write!(f, "({slope})c")?;
                }
                match intercept.cmp(&zero) {
                    Ordering::Greater => write!(f, "+{intercept}"),
                    Ordering::Less => write!(f, "-{}", -intercept),
                    Ordering::Equal => Ok(()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Milestone {
    pub time: MilestoneTime,
    pub region: String,
    /// Earlier milestones whose regions touch or overlap this one.
    pub reasons: Vec<String>,
}

fn completion(trace: &PercolationTrace, region: &Region) -> (Option<usize>, Vec<Cell>) {
    let dims = trace.dims();
    let cells: Vec<Cell> = dims.cells().filter(|&c| region.contains(dims, c)).collect();
    let mut last = 0;
    for &cell in &cells {
        match trace.infection_time(cell) {
            Some(t) => last = last.max(t),
            None => return (None, cells),
        }
    }
    (Some(last), cells)
}

fn touches(dims: GridDims, a: &[Cell], b: &[Cell]) -> bool {
    let set: std::collections::HashSet<Cell> = b.iter().copied().collect();
    a.iter().any(|&cell| {
        set.contains(&cell)
            || neighbours(dims, cell)
                .expect("region cells lie in the grid")
                .iter()
                .any(|nb| set.contains(nb))
    })
}

/// Completion time of each region, ordered by time (never-completing
/// regions last, ties in input order).
pub fn extract_milestones(trace: &PercolationTrace, regions: &[Region]) -> Result<Vec<Milestone>> {
    if trace.is_truncated() {
        return Err(Error::Truncated {
            steps: trace.steps_taken(),
        });
    }
    let dims = trace.dims();
    let mut done: Vec<(Option<usize>, usize, Vec<Cell>)> = regions
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (t, cells) = completion(trace, r);
            (t, i, cells)
        })
        .collect();
    done.sort_by_key(|(t, i, _)| (t.is_none(), t.unwrap_or(0), *i));
    let mut out = Vec::with_capacity(done.len());
    for (k, (t, i, cells)) in done.iter().enumerate() {
        let reasons = match t {
            Some(t) => done[..k]
                .iter()
                .filter(|(u, _, other)| u.is_some_and(|u| u < *t) && touches(dims, cells, other))
                .map(|(_, j, _)| regions[*j].name.clone())
                .collect(),
            None => Vec::new(),
        };
        out.push(Milestone {
            time: t.map_or(MilestoneTime::Never, MilestoneTime::Step),
            region: regions[*i].name.clone(),
            reasons,
        });
    }
    Ok(out)
}

/// The affine function through `points` `(c, t)`, if they are collinear.
pub fn fit_affine(points: &[(usize, usize)]) -> Option<MilestoneTime> {
    let (&(c0, t0), rest) = points.split_first()?;
    let Some(&(c1, t1)) = rest.first() else {
        return Some(MilestoneTime::Step(t0));
    };
    if c0 == c1 {
        return None;
    }
    let slope = Ratio::new(t1 as i64 - t0 as i64, c1 as i64 - c0 as i64);
    let intercept = Ratio::from_integer(t0 as i64) - slope * c0 as i64;
    let f = MilestoneTime::Affine { slope, intercept };
    points
        .iter()
        .all(|&(c, t)| f.at(c) == Some(Ratio::from_integer(t as i64)))
        .then_some(f)
}

/// Milestones of a family across several instances, each time fitted as an
/// affine function of `c`. Regions whose times are not affine, or that never
/// complete, are reported as `Never`.
pub fn family_timeline(pattern: &FamilyPattern, cs: &[usize], regions: &[Region]) -> Result<Vec<Milestone>> {
    let mut samples: Vec<Vec<(usize, Option<usize>)>> = vec![Vec::new(); regions.len()];
    for &c in cs {
        let trace = percolate_default(&pattern.seeds_for(c)?);
        for (i, r) in regions.iter().enumerate() {
            samples[i].push((c, completion(&trace, r).0));
        }
    }
    let mut out: Vec<(Milestone, usize)> = regions
        .iter()
        .zip(&samples)
        .enumerate()
        .map(|(i, (r, pts))| {
            let pts: Option<Vec<(usize, usize)>> = pts.iter().map(|&(c, t)| t.map(|t| (c, t))).collect();
            let time = pts.and_then(|p| fit_affine(&p)).unwrap_or(MilestoneTime::Never);
            (
                Milestone {
                    time,
                    region: r.name.clone(),
                    reasons: Vec::new(),
                },
                i,
            )
        })
        .collect();
    // order by the time at the largest sampled instance
    let c_max = cs.iter().copied().max().unwrap_or(0);
    out.sort_by_key(|(m, i)| (m.time.at(c_max).is_none(), m.time.at(c_max), *i));
    Ok(out.into_iter().map(|(m, _)| m).collect())
}
