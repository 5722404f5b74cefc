//! Command-line front end for the bootstrap percolation toolkit.
//!
//! Exit status: 0 on success, 1 when a set does not percolate or a search or
//! construction fails, 2 on usage and parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bootstrap3d::bounds::{classify_trace, AuditReport};
use bootstrap3d::constructions::builder::{Builder, BUNDLED_CATALOG, BUNDLED_FAMILIES};
use bootstrap3d::constructions::catalog::{Catalog, CatalogEntry, Provenance};
use bootstrap3d::constructions::family::{
    discover_family, parse_families, write_families, DiscoveryParams, FamilyPattern, FamilySpec, STANDARD_FAMILIES,
};
use bootstrap3d::search::{find_at_bound, min_exhaustive, AnnealParams, SearchResult};
use bootstrap3d::{lower_bound, percolate, perfect_audit, perfect_precondition, textgrid, CellSet, GridDims, Status};

#[derive(Parser)]
#[command(
    name = "bootstrap3d",
    version,
    about = "3-neighbour bootstrap percolation on a×b×c grids"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Infection threshold.
    #[arg(long, global = true, default_value_t = 3)]
    r: usize,
    /// Step limit for simulations (default a·b·c).
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Seed for randomised searches.
    #[arg(long, global = true, default_value_t = 1)]
    rng_seed: u64,
    /// Node budget for exhaustive search.
    #[arg(long, global = true, default_value_t = 2_000_000_000)]
    budget: u64,
    /// Witness catalog to read (and, for `search --save`, to update).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Emit one JSON record instead of text.
    #[arg(long, global = true)]
    machine: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lower bound and whether a perfect set can exist.
    Bound { a: usize, b: usize, c: usize },
    /// Run the process on a seed file.
    Simulate { file: PathBuf },
    /// Classify a seed file as perfect, optimal, percolating or not.
    Verify { file: PathBuf },
    /// Combine four witnesses in alternating octants.
    Combine {
        p1: PathBuf,
        p2: PathBuf,
        p3: PathBuf,
        p4: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Construct a perfect or optimal witness.
    Build {
        kind: Kind,
        a: usize,
        b: usize,
        c: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Family patterns file (default: the bundled one).
        #[arg(long)]
        families: Option<PathBuf>,
    },
    /// Exhaustive minimum or annealing at a target size.
    Search {
        #[command(subcommand)]
        mode: SearchCmd,
    },
    /// Periodic family discovery and assembly.
    Family {
        #[command(subcommand)]
        action: FamilyCmd,
    },
    /// Print a seed file annotated with infection times.
    Render { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Perfect,
    Optimal,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Proven minimum for grids of at most 30 cells.
    Exhaustive { a: usize, b: usize, c: usize },
    /// Stochastic search for a percolating set of a given size.
    Anneal {
        a: usize,
        b: usize,
        c: usize,
        /// Set size (default: the lower bound's ceiling).
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, default_value_t = AnnealParams::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = AnnealParams::default().iterations)]
        iterations: usize,
        #[arg(long, default_value_t = AnnealParams::default().t_start)]
        t_start: f64,
        #[arg(long, default_value_t = AnnealParams::default().t_end)]
        t_end: f64,
        /// Record a found witness in the `--catalog` file.
        #[arg(long)]
        save: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// List the known family ids.
    List,
    /// Search for a pattern and check it on further instances.
    Discover {
        id: String,
        /// Smallest-instance witnesses to try.
        #[arg(long, default_value_t = DiscoveryParams::default().boundary_attempts)]
        attempts: usize,
        /// Append the pattern to this family file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and verify the instance for a given `c`.
    Assemble {
        id: String,
        c: usize,
        #[arg(long)]
        families: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// What a command reports: a JSON record, its text rendering and the exit code.
struct Report {
    record: Value,
    text: String,
    code: u8,
}

impl Report {
    fn ok(record: Value, text: String) -> Report {
        Report { record, text, code: 0 }
    }

    fn failed(record: Value, text: String) -> Report {
        Report { record, text, code: 1 }
    }
}

fn dims(a: usize, b: usize, c: usize) -> anyhow::Result<GridDims> {
    Ok(GridDims::new(a, b, c)?)
}

fn read_seeds(path: &Path) -> anyhow::Result<(GridDims, CellSet)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    textgrid::parse_seed_file(&text).with_context(|| format!("parsing {}", path.display()))
}

fn sides(d: GridDims) -> Value {
    json!([d.a(), d.b(), d.c()])
}

fn audit_json(a: &AuditReport) -> Value {
    json!({
        "seeds_independent": a.seeds_independent,
        "exact_three": a.exact_three,
        "no_adjacent_simultaneous": a.no_adjacent_simultaneous,
        "surface_constant": a.surface_constant,
        "size_tight": a.size_tight,
    })
}

fn load_catalog(path: Option<&Path>) -> anyhow::Result<Catalog> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Catalog::from_text(&text).with_context(|| format!("loading catalog {}", p.display()))
        }
        None => Ok(Catalog::from_text(BUNDLED_CATALOG)?),
    }
}

fn load_families(path: Option<&Path>) -> anyhow::Result<Vec<FamilyPattern>> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_families(&text).with_context(|| format!("loading families {}", p.display()))
        }
        None => Ok(parse_families(BUNDLED_FAMILIES)?),
    }
}

/// Writes the seed grid to `output`, or returns it for stdout.
fn emit_seeds(set: &CellSet, output: Option<&Path>) -> anyhow::Result<Option<String>> {
    let text = textgrid::write_seeds(set);
    match output {
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn entry_report(command: &str, e: &CatalogEntry, output: Option<&Path>) -> anyhow::Result<Report> {
    let grid = emit_seeds(&e.seeds, output)?;
    let (exact, ceil) = lower_bound(e.dims);
    let mut text = format!(
        "{} witness for {}: {} seeds (bound {exact}, ceiling {ceil})\nprovenance: {}\n",
        e.status,
        e.dims,
        e.size(),
        e.provenance
    );
    if let Some(g) = &grid {
        text.push_str(g);
    }
    Ok(Report::ok(
        json!({
            "command": command,
            "dims": sides(e.dims),
            "status": e.status.name(),
            "size": e.size(),
            "bound_ceiling": ceil,
            "provenance": e.provenance.to_string(),
            "verified": e.verified,
            "seeds": grid,
        }),
        text,
    ))
}

fn search_report(res: &SearchResult, output: Option<&Path>) -> anyhow::Result<Report> {
    let grid = match &res.witness {
        Some(w) => emit_seeds(w, output)?,
        None => None,
    };
    let record = json!({
        "command": "search",
        "dims": sides(res.dims),
        "mode": res.mode.name(),
        "min_size": res.min_size,
        "witness_size": res.witness.as_ref().map(CellSet::len),
        "nodes_explored": res.nodes_explored,
        "rng_seed": res.rng_seed,
        "progress": res.progress,
        "seeds": grid,
    });
    let mut text = format!("{} {}: {}\n", res.dims, res.mode.name(), res.progress);
    if let Some(m) = res.min_size {
        text.push_str(&format!("minimum size: {m}\n"));
    }
    text.push_str(&format!("nodes explored: {}\n", res.nodes_explored));
    if let Some(g) = &grid {
        text.push_str(g);
    }
    Ok(if res.witness.is_some() {
        Report::ok(record, text)
    } else {
        Report::failed(record, text)
    })
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    let g = &cli.global;
    if g.r == 0 {
        bail!(bootstrap3d::Error::InvalidArgument("--r must be positive".into()));
    }
    match cli.cmd {
        Cmd::Bound { a, b, c } => {
            let d = dims(a, b, c)?;
            let (exact, ceil) = lower_bound(d);
            let possible = perfect_precondition(d);
            Ok(Report::ok(
                json!({
                    "command": "bound",
                    "dims": sides(d),
                    "exact": exact.to_string(),
                    "ceiling": ceil,
                    "perfect_possible": possible,
                }),
                format!(
                    "{d}: (ab+ac+bc)/3 = {exact}, ceiling {ceil}\nperfect possible: {}\n",
                    if possible { "yes" } else { "no" }
                ),
            ))
        }
        Cmd::Simulate { file } => {
            let (d, seeds) = read_seeds(&file)?;
            let trace = percolate(d, g.r, &seeds, g.max_steps.unwrap_or(d.cell_count()));
            let termination = if trace.is_truncated() {
                "truncated"
            } else {
                "fixed-point"
            };
            let record = json!({
                "command": "simulate",
                "dims": sides(d),
                "r": g.r,
                "seeds": seeds.len(),
                "percolated": trace.percolated(),
                "steps": trace.steps_taken(),
                "infected": trace.infected_count(),
                "termination": termination,
            });
            let text = format!(
                "{d}, r = {}: {} seeds, {} steps, {} of {} cells infected ({termination})\npercolated: {}\n",
                g.r,
                seeds.len(),
                trace.steps_taken(),
                trace.infected_count(),
                d.cell_count(),
                trace.percolated()
            );
            Ok(if trace.percolated() {
                Report::ok(record, text)
            } else {
                Report::failed(record, text)
            })
        }
        Cmd::Verify { file } => {
            if g.r != 3 {
                bail!(bootstrap3d::Error::InvalidArgument(
                    "classification is defined for r = 3 only".into()
                ));
            }
            let (d, seeds) = read_seeds(&file)?;
            let trace = percolate(d, 3, &seeds, g.max_steps.unwrap_or(d.cell_count()));
            let class = classify_trace(&trace, &seeds)?;
            let audit = perfect_audit(&trace, &seeds);
            let record = json!({
                "command": "verify",
                "dims": sides(d),
                "size": class.size,
                "percolates": class.percolates,
                "bound_exact": class.lower_bound_exact.to_string(),
                "bound_ceiling": class.lower_bound_ceil,
                "status": class.status.name(),
                "audit": audit_json(&audit),
            });
            let text = format!(
                "{d}: {} seeds, bound {} (ceiling {})\nstatus: {}\naudit: independent={} exact-three={} no-adjacent-simultaneous={}\n",
                class.size,
                class.lower_bound_exact,
                class.lower_bound_ceil,
                class.status,
                audit.seeds_independent,
                audit.exact_three,
                audit.no_adjacent_simultaneous
            );
            Ok(if class.percolates {
                Report::ok(record, text)
            } else {
                Report::failed(record, text)
            })
        }
        Cmd::Combine { p1, p2, p3, p4, output } => {
            let mut parts = Vec::with_capacity(4);
            for path in [&p1, &p2, &p3, &p4] {
                let (d, seeds) = read_seeds(path)?;
                let class = bootstrap3d::classify(d, &seeds)?;
                if class.status < Status::Optimal {
                    return Ok(Report::failed(
                        json!({"command": "combine", "error": format!("{} is {}", path.display(), class.status)}),
                        format!("{} is {}, not perfect or optimal\n", path.display(), class.status),
                    ));
                }
                let source = path
                    .file_name()
                    .map_or_else(|| "-".into(), |n| n.to_string_lossy().replace(' ', "_"));
                parts.push(CatalogEntry::new(seeds, class.status, Provenance::Imported { source }).verified()?);
            }
            let e = bootstrap3d::constructions::combine(&parts[0], &parts[1], &parts[2], &parts[3])?;
            entry_report("combine", &e, output.as_deref())
        }
        Cmd::Build {
            kind,
            a,
            b,
            c,
            output,
            families,
        } => {
            let d = dims(a, b, c)?;
            let mut builder = Builder::new(load_catalog(g.catalog.as_deref())?, load_families(families.as_deref())?);
            let thickness = d.thickness();
            let built = match kind {
                Kind::Perfect if d.sorted().a() == 4 && d.sorted().b() >= 4 => {
                    let s = d.sorted();
                    builder
                        .build_perfect_4(s.b(), s.c())
                        .and_then(|e| e.oriented(d).ok_or_else(|| unreachable_orientation(d)))
                }
                Kind::Perfect => builder.perfect(d),
                Kind::Optimal if thickness >= 7 => builder.build_optimal(d),
                Kind::Optimal => builder.optimal(d),
            };
            match built {
                Ok(e) => entry_report("build", &e, output.as_deref()),
                Err(err @ bootstrap3d::Error::MissingIngredient { .. }) => Ok(Report::failed(
                    json!({"command": "build", "dims": sides(d), "error": err.to_string()}),
                    format!("{err}\n"),
                )),
                Err(err) => Err(err.into()),
            }
        }
        Cmd::Search { mode } => match mode {
            SearchCmd::Exhaustive { a, b, c } => {
                let res = min_exhaustive(dims(a, b, c)?, g.r, g.budget)?;
                search_report(&res, None)
            }
            SearchCmd::Anneal {
                a,
                b,
                c,
                target,
                restarts,
                iterations,
                t_start,
                t_end,
                save,
                output,
            } => {
                if g.r != 3 {
                    bail!(bootstrap3d::Error::InvalidArgument("annealing targets r = 3".into()));
                }
                if save && g.catalog.is_none() {
                    bail!(bootstrap3d::Error::InvalidArgument("--save needs --catalog".into()));
                }
                let d = dims(a, b, c)?;
                let target = target.unwrap_or(lower_bound(d).1 as usize);
                let params = AnnealParams {
                    restarts,
                    iterations,
                    t_start,
                    t_end,
                    ..AnnealParams::default()
                };
                let res = find_at_bound(d, target, &params, g.rng_seed)?;
                if save {
                    if let Some(w) = &res.witness {
                        let path = g.catalog.as_deref().expect("checked above");
                        let mut cat = if path.exists() {
                            load_catalog(Some(path))?
                        } else {
                            Catalog::new()
                        };
                        let class = bootstrap3d::classify(d, w)?;
                        if class.status >= Status::Optimal {
                            let entry = CatalogEntry::new(
                                w.clone(),
                                class.status,
                                Provenance::SearchedHeuristic { rng_seed: g.rng_seed },
                            )
                            .verified()?;
                            cat.insert(entry);
                            fs::write(path, cat.to_text()).with_context(|| format!("writing {}", path.display()))?;
                        }
                    }
                }
                search_report(&res, output.as_deref())
            }
        },
        Cmd::Family { action } => match action {
            FamilyCmd::List => {
                let rows: Vec<Value> = STANDARD_FAMILIES
                    .iter()
                    .map(|&(id, a, b, res, min)| json!({"id": id, "a": a, "b": b, "residue": res, "min_c": min}))
                    .collect();
                let text = STANDARD_FAMILIES
                    .iter()
                    .map(|&(id, a, b, res, min)| format!("{id}: ({a},{b},c), c ≡ {res} (mod 6), c ≥ {min}\n"))
                    .collect();
                Ok(Report::ok(json!({"command": "family-list", "families": rows}), text))
            }
            FamilyCmd::Discover { id, attempts, output } => {
                let spec = FamilySpec::standard(&id)
                    .ok_or_else(|| bootstrap3d::Error::InvalidArgument(format!("unknown family {id:?}")))?;
                let params = DiscoveryParams {
                    boundary_attempts: attempts,
                    ..DiscoveryParams::default()
                };
                let found = discover_family(&spec, &params, g.rng_seed)?;
                let Some(pattern) = found.pattern else {
                    return Ok(Report::failed(
                        json!({
                            "command": "family-discover",
                            "id": id,
                            "found": false,
                            "attempts": found.attempts,
                            "best_energy": found.best_energy,
                            "moves": found.moves,
                        }),
                        format!(
                            "no pattern for {id} after {} attempts; best candidate left {} cells uninfected\n",
                            found.attempts, found.best_energy
                        ),
                    ));
                };
                let checked: Vec<usize> = spec.admissible().take(4).collect();
                for &c in &checked {
                    pattern.assemble(c)?;
                }
                let text = write_families(std::slice::from_ref(&pattern));
                if let Some(p) = &output {
                    let mut all = if p.exists() {
                        load_families(Some(p))?
                    } else {
                        Vec::new()
                    };
                    all.retain(|q| q.id != pattern.id);
                    all.push(pattern.clone());
                    fs::write(p, write_families(&all)).with_context(|| format!("writing {}", p.display()))?;
                }
                Ok(Report::ok(
                    json!({
                        "command": "family-discover",
                        "id": id,
                        "found": true,
                        "attempts": found.attempts,
                        "moves": found.moves,
                        "verified_c": checked,
                        "pattern": text,
                    }),
                    format!("{pattern}\nverified for c in {checked:?}\n{text}"),
                ))
            }
            FamilyCmd::Assemble {
                id,
                c,
                families,
                output,
            } => {
                let all = load_families(families.as_deref())?;
                let pattern = all
                    .iter()
                    .find(|p| p.id == id)
                    .ok_or_else(|| bootstrap3d::Error::InvalidArgument(format!("unknown family {id:?}")))?;
                let e = pattern.assemble(c)?;
                entry_report("family-assemble", &e, output.as_deref())
            }
        },
        Cmd::Render { file } => {
            let (d, seeds) = read_seeds(&file)?;
            let trace = percolate(d, g.r, &seeds, g.max_steps.unwrap_or(d.cell_count()));
            let rendered = textgrid::render_trace(&trace);
            Ok(Report::ok(
                json!({
                    "command": "render",
                    "dims": sides(d),
                    "percolated": trace.percolated(),
                    "steps": trace.steps_taken(),
                    "rendered": rendered,
                }),
                rendered,
            ))
        }
    }
}

fn unreachable_orientation(d: GridDims) -> bootstrap3d::Error {
    bootstrap3d::Error::Construction {
        dims: d,
        message: "witness could not be oriented onto the requested grid".into(),
    }
}

/// Usage-class errors exit with 2, everything else with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    use bootstrap3d::Error as E;
    for cause in err.chain() {
        if cause.is::<std::io::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Parse { .. }
                | E::DimsMismatch { .. }
                | E::InvalidDims { .. }
                | E::InvalidArgument(_)
                | E::CellOutOfRange { .. } => 2,
                _ => 1,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let machine = cli.global.machine;
    match run(cli) {
        Ok(report) => {
            if machine {
                println!("{}", report.record);
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(err) => {
            if machine {
                println!("{}", json!({"error": format!("{err:#}")}));
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
