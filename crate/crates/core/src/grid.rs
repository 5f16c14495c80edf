//! Text rendering of small supports as phase-space grids.

use crate::error::{Error, Result};
use crate::state::EpistemicState;

pub const MARKED: char = '█';
pub const UNMARKED: char = '·';

/// Cell index of one system's `(q, p)` pair: `q + d * p`. At d = 2 this is the
/// ontic label minus one.
pub fn cell_index(q: u64, p: u64, d: u64) -> usize {
    (q + d * p) as usize
}

/// One row of `d^2` cells for a single system; for two systems a `d^2 x d^2`
/// grid with system 1 on the vertical axis (highest index on top) and
/// system 2 on the horizontal axis.
pub fn render_grid(s: &EpistemicState) -> Result<String> {
    let space = s.space();
    let d = space.modulus().get();
    if !(2..=3).contains(&d) || space.n() > 2 {
        return Err(Error::UnsupportedShape(format!("grid needs d in {{2,3}} and n <= 2, got d={d}, n={}", space.n())));
    }
    let side = (d * d) as usize;
    let points = s.support().points();
    let mut out = String::new();
    if space.n() == 1 {
        let mut row = vec![UNMARKED; side];
        for m in &points {
            row[cell_index(m[0], m[1], d)] = MARKED;
        }
        out.extend(row);
        out.push('\n');
        return Ok(out);
    }
    let mut grid = vec![vec![UNMARKED; side]; side];
    for m in &points {
        grid[cell_index(m[0], m[1], d)][cell_index(m[2], m[3], d)] = MARKED;
    }
    for row in grid.iter().rev() {
        out.extend(row);
        out.push('\n');
    }
    Ok(out)
}

/// Inverse of [`cell_index`].
pub fn cell_point(index: usize, d: u64) -> (u64, u64) {
    (index as u64 % d, index as u64 / d)
}
