//! Simulated annealing over fixed-size seed sets.
//!
//! The state is a choice of `count` positions inside each of several domains.
//! A move relocates one chosen position to a free position of the same
//! domain. The energy is supplied by the caller; zero means success.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Tunables for the annealing schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealParams {
    /// Independent restarts before giving up.
    pub restarts: usize,
    /// Moves per restart.
    pub iterations: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// Restart early after this many moves without a new best energy.
    pub stagnation: usize,
    /// Probability of a local move when the domain has adjacency.
    pub local_moves: f64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            restarts: 64,
            iterations: 400_000,
            t_start: 1.5,
            t_end: 0.05,
            stagnation: 150_000,
            local_moves: 0.5,
        }
    }
}

/// A set of candidate positions from which exactly `count` are chosen.
#[derive(Debug, Clone)]
pub struct Domain {
    pub positions: Vec<u32>,
    pub count: usize,
    /// Optional adjacency between slots, enabling short local moves.
    pub near: Vec<Vec<usize>>,
}

impl Domain {
    pub fn new(positions: Vec<u32>, count: usize) -> Self {
        Domain {
            positions,
            count,
            near: Vec::new(),
        }
    }

    pub fn with_near(mut self, near: Vec<Vec<usize>>) -> Self {
        self.near = near;
        self
    }
}

/// Energy function over one chosen position list per domain.
pub trait Landscape: Send {
    fn energy(&mut self, chosen: &[Vec<u32>]) -> u64;
}

/// Result of one restart.
#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub best_energy: u64,
    pub best: Vec<Vec<u32>>,
    pub moves: u64,
}

fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs a single restart from a random initial choice.
pub fn run_trial<L: Landscape>(
    landscape: &mut L,
    domains: &[Domain],
    params: &AnnealParams,
    seed: u64,
    index: usize,
) -> Trial {
    let mut rng = trial_rng(seed, index);
    // chosen[d] holds domain slots; taken[d][slot] marks occupancy
    let mut slots: Vec<Vec<usize>> = Vec::with_capacity(domains.len());
    let mut taken: Vec<Vec<bool>> = Vec::with_capacity(domains.len());
    for d in domains {
        let mut pool: Vec<usize> = (0..d.positions.len()).collect();
        let mut pick = Vec::with_capacity(d.count);
        for i in 0..d.count {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
            pick.push(pool[i]);
        }
        let mut occ = vec![false; d.positions.len()];
        for &s in &pick {
            occ[s] = true;
        }
        slots.push(pick);
        taken.push(occ);
    }
    let to_positions = |slots: &Vec<Vec<usize>>| -> Vec<Vec<u32>> {
        slots
            .iter()
            .zip(domains)
            .map(|(s, d)| s.iter().map(|&i| d.positions[i]).collect())
            .collect()
    };
    let mut chosen = to_positions(&slots);
    let mut energy = landscape.energy(&chosen);
    let mut best_energy = energy;
    let mut best = chosen.clone();
    let movable: Vec<usize> = (0..domains.len())
        .filter(|&d| domains[d].count > 0 && domains[d].count < domains[d].positions.len())
        .collect();
    let total_movable: usize = movable.iter().map(|&d| domains[d].count).sum();
    let mut moves = 0u64;
    let mut since_best = 0usize;
    if movable.is_empty() {
        return Trial {
            index,
            best_energy,
            best,
            moves,
        };
    }
    let ratio = (params.t_end / params.t_start).max(f64::MIN_POSITIVE);
    for it in 0..params.iterations {
        if best_energy == 0 || since_best > params.stagnation {
            break;
        }
        let temp = params.t_start * ratio.powf(it as f64 / params.iterations as f64);
        // pick a chosen position uniformly over all movable domains
        let mut k = rng.gen_range(0..total_movable);
        let mut d = movable[0];
        for &m in &movable {
            if k < domains[m].count {
                d = m;
                break;
            }
            k -= domains[m].count;
        }
        let dom = &domains[d];
        let old_slot = slots[d][k];
        let local = if !dom.near.is_empty() && rng.gen::<f64>() < params.local_moves {
            let near = &dom.near[old_slot];
            let free: Vec<usize> = near.iter().copied().filter(|&s| !taken[d][s]).collect();
            (!free.is_empty()).then(|| free[rng.gen_range(0..free.len())])
        } else {
            None
        };
        let free_slot = match local {
            Some(s) => s,
            None => loop {
                let s = rng.gen_range(0..dom.positions.len());
                if !taken[d][s] {
                    break s;
                }
            },
        };
        slots[d][k] = free_slot;
        chosen[d][k] = dom.positions[free_slot];
        let next = landscape.energy(&chosen);
        moves += 1;
        let accept = next <= energy || rng.gen::<f64>() < (-((next - energy) as f64) / temp).exp();
        if accept {
            taken[d][old_slot] = false;
            taken[d][free_slot] = true;
            energy = next;
            if energy < best_energy {
                best_energy = energy;
                best = chosen.clone();
                since_best = 0;
            } else {
                since_best += 1;
            }
        } else {
            slots[d][k] = old_slot;
            chosen[d][k] = dom.positions[old_slot];
            since_best += 1;
        }
    }
    Trial {
        index,
        best_energy,
        best,
        moves,
    }
}

/// Runs restarts in batches until one reaches zero energy.
///
/// Returns the zero-energy trial with the lowest index if any, else the trial
/// with the lowest best energy, and the total moves over the trials up to the
/// returned one. The outcome does not depend on the number of worker threads.
pub fn anneal<L, F>(make: F, domains: &[Domain], params: &AnnealParams, seed: u64) -> (Trial, u64)
where
    L: Landscape,
    F: Fn() -> L + Sync,
{
    let batch = rayon::current_num_threads().max(1);
    let mut best: Option<Trial> = None;
    let mut moves = 0u64;
    let mut start = 0;
    while start < params.restarts {
        let end = (start + batch).min(params.restarts);
        let trials: Vec<Trial> = (start..end)
            .into_par_iter()
            .map(|i| {
                let mut land = make();
                run_trial(&mut land, domains, params, seed, i)
            })
            .collect();
        for t in trials {
            moves += t.moves;
            let better = best.as_ref().is_none_or(|b| t.best_energy < b.best_energy);
            if better {
                best = Some(t);
            }
            if best.as_ref().is_some_and(|b| b.best_energy == 0) {
                return (best.expect("set above"), moves);
            }
        }
        start = end;
    }
    (best.expect("at least one restart"), moves)
}
