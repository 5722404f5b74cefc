//! Layered text format for seed sets and rendered traces.
//!
//! A grid `(a, b, c)` is written as `a` blocks of `b` lines with `c` glyphs
//! each, blocks separated by one blank line. Seed files use `X` for a seed
//! and `.` for an empty cell.
//!
//! Rendered traces replace `.` by the infection time in base 36 and use `#`
//! for cells that never turn. When some time does not fit one base-36 digit,
//! every cell becomes a fixed-width token and tokens are space separated.

use crate::engine::PercolationTrace;
use crate::error::{Error, Result};
use crate::grid::{CellSet, GridDims};

pub const SEED: char = 'X';
pub const EMPTY: char = '.';
pub const NEVER: char = '#';

/// Serializes a seed set.
pub fn write_seeds(set: &CellSet) -> String {
    let dims = set.dims();
    let mut out = String::with_capacity(dims.cell_count() + dims.a() * (dims.b() + 1));
    for x in 0..dims.a() {
        if x > 0 {
            out.push('\n');
        }
        for y in 0..dims.b() {
            for z in 0..dims.c() {
                let i = (x * dims.b() + y) * dims.c() + z;
                out.push(if set.contains_index(i) { SEED } else { EMPTY });
            }
            out.push('\n');
        }
    }
    out
}

/// Splits layered text into layers of (line number, row) pairs.
fn layers(text: &str, first_line: usize) -> Result<Vec<Vec<(usize, &str)>>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + first_line, l.strip_suffix('\r').unwrap_or(l)))
        .collect();
    let start = lines.iter().position(|(_, l)| !l.trim().is_empty());
    let end = lines.iter().rposition(|(_, l)| !l.trim().is_empty());
    let (Some(start), Some(end)) = (start, end) else {
        return Err(Error::Parse {
            line: first_line,
            column: 1,
            message: "empty grid".into(),
        });
    };
    let mut out: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    let mut prev_blank = false;
    for &(n, l) in &lines[start..=end] {
        if l.trim().is_empty() {
            if prev_blank {
                return Err(Error::Parse {
                    line: n,
                    column: 1,
                    message: "layers must be separated by exactly one blank line".into(),
                });
            }
            prev_blank = true;
            out.push(Vec::new());
        } else {
            prev_blank = false;
            out.last_mut().expect("at least one layer").push((n, l));
        }
    }
    Ok(out)
}

fn shape_error(line: usize, message: String) -> Error {
    Error::Parse {
        line,
        column: 1,
        message,
    }
}

/// Parses a seed file. `first_line` is the line number of the first line of
/// `text`, for error positions when the grid is embedded in a larger file.
pub fn parse_seeds_at(text: &str, first_line: usize) -> Result<(GridDims, CellSet)> {
    let blocks = layers(text, first_line)?;
    let rows = blocks[0].len();
    let cols = blocks[0][0].1.chars().count();
    let mut cells = Vec::new();
    for (x, block) in blocks.iter().enumerate() {
        if block.len() != rows {
            return Err(shape_error(
                block[0].0,
                format!("layer {} has {} rows, expected {}", x + 1, block.len(), rows),
            ));
        }
        for (y, &(n, line)) in block.iter().enumerate() {
            let width = line.chars().count();
            if width != cols {
                return Err(shape_error(n, format!("row has {width} cells, expected {cols}")));
            }
            for (z, ch) in line.chars().enumerate() {
                match ch {
                    SEED => cells.push((x, y, z)),
                    EMPTY => {}
                    other => {
                        return Err(Error::Parse {
                            line: n,
                            column: z + 1,
                            message: format!("unexpected glyph {other:?}"),
                        })
                    }
                }
            }
        }
    }
    let dims = GridDims::new(blocks.len(), rows, cols).map_err(|e| shape_error(first_line, e.to_string()))?;
    let set = CellSet::from_indices(dims, cells.into_iter().map(|(x, y, z)| (x * rows + y) * cols + z));
    Ok((dims, set))
}

/// Parses a seed file.
pub fn parse_seed_file(text: &str) -> Result<(GridDims, CellSet)> {
    parse_seeds_at(text, 1)
}

fn base36(t: u32) -> String {
    if t == 0 {
        return "0".into();
    }
    let mut digits = Vec::new();
    let mut v = t;
    while v > 0 {
        digits.push(std::char::from_digit(v % 36, 36).expect("digit below 36"));
        v /= 36;
    }
    digits.iter().rev().collect()
}

fn glyph(time: Option<usize>) -> String {
    match time {
        None => NEVER.to_string(),
        Some(0) => SEED.to_string(),
        Some(t) => base36(t as u32),
    }
}

/// Renders a trace: seeds, infection times, and never-infected cells.
pub fn render_trace(trace: &PercolationTrace) -> String {
    let dims = trace.dims();
    let glyphs: Vec<String> = (0..dims.cell_count()).map(|i| glyph(trace.time_at(i))).collect();
    let width = glyphs.iter().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for x in 0..dims.a() {
        if x > 0 {
            out.push('\n');
        }
        for y in 0..dims.b() {
            let row = &glyphs[(x * dims.b() + y) * dims.c()..(x * dims.b() + y + 1) * dims.c()];
            if width == 1 {
                out.extend(row.iter().map(String::as_str));
            } else {
                let tokens: Vec<String> = row.iter().map(|g| format!("{g:>width$}")).collect();
                out.push_str(&tokens.join(" "));
            }
            out.push('\n');
        }
    }
    out
}

/// Rendered grid read back: dims, seeds, and times (`None` = never infected).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedGrid {
    pub dims: GridDims,
    pub seeds: CellSet,
    pub times: Vec<Option<usize>>,
}

pub fn parse_rendered(text: &str) -> Result<RenderedGrid> {
    let blocks = layers(text, 1)?;
    let tokenize = |line: &str| -> Vec<String> {
        if line.contains(' ') {
            line.split_whitespace().map(str::to_string).collect()
        } else {
            line.chars().map(|c| c.to_string()).collect()
        }
    };
    let rows = blocks[0].len();
    let cols = tokenize(blocks[0][0].1).len();
    let mut times = Vec::new();
    for block in &blocks {
        if block.len() != rows {
            return Err(shape_error(
                block[0].0,
                format!("layer has {} rows, expected {rows}", block.len()),
            ));
        }
        for &(n, line) in block {
            let tokens = tokenize(line);
            if tokens.len() != cols {
                return Err(shape_error(
                    n,
                    format!("row has {} cells, expected {cols}", tokens.len()),
                ));
            }
            for (z, tok) in tokens.iter().enumerate() {
                let t = match tok.as_str() {
                    "X" => Some(0),
                    "#" => None,
                    other => Some(
                        usize::from_str_radix(other, 36)
                            .ok()
                            .filter(|&t| t > 0)
                            .ok_or_else(|| Error::Parse {
                                line: n,
                                column: z + 1,
                                message: format!("unexpected glyph {other:?}"),
                            })?,
                    ),
                };
                times.push(t);
            }
        }
    }
    let dims = GridDims::new(blocks.len(), rows, cols).map_err(|e| shape_error(1, e.to_string()))?;
    let seeds = CellSet::from_indices(
        dims,
        times.iter().enumerate().filter(|(_, t)| **t == Some(0)).map(|(i, _)| i),
    );
    Ok(RenderedGrid { dims, seeds, times })
}
