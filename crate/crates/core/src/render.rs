//! ASCII and SVG export of grid and cube diagrams.

use std::fmt::Write;

use thiserror::Error;

use crate::cube::{Axis, CubeDiagram};
use crate::grid::{GridDiagram, GridError};

/// Cell characters, one row per line from the top row down: `X`, `O`,
/// `|` and `-` for segments, `+` where a vertical passes over a
/// horizontal, `.` for empty cells.
pub fn grid_ascii(g: &GridDiagram) -> String {
    let n = g.size();
    let mut cells = vec![vec!['.'; n]; n];
    for r in 0..n {
        let (from, to) = g.horizontal(r);
        for c in from.min(to) + 1..from.max(to) {
            cells[r][c] = '-';
        }
    }
    for c in 0..n {
        let (from, to) = g.vertical(c);
        for r in from.min(to) + 1..from.max(to) {
            cells[r][c] = if cells[r][c] == '-' { '+' } else { '|' };
        }
    }
    for r in 0..n {
        cells[r][g.xcol()[r]] = 'X';
        cells[r][g.ocol()[r]] = 'O';
    }
    let mut out = String::new();
    for row in cells.iter().rev() {
        let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Error)]
pub enum AsciiError {
    #[error("ascii grid is not square")]
    NotSquare,
    #[error("row {0} needs exactly one X and one O")]
    Markings(usize),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Reads back the markings of [`grid_ascii`] output.
pub fn parse_grid_ascii(text: &str) -> Result<GridDiagram, AsciiError> {
    let rows: Vec<Vec<char>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().filter_map(|t| t.chars().next()).collect())
        .collect();
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(AsciiError::NotSquare);
    }
    let mut xcol = vec![0; n];
    let mut ocol = vec![0; n];
    for (i, row) in rows.iter().enumerate() {
        let r = n - 1 - i;
        let xs: Vec<usize> = (0..n).filter(|&c| row[c] == 'X').collect();
        let os: Vec<usize> = (0..n).filter(|&c| row[c] == 'O').collect();
        match (xs.as_slice(), os.as_slice()) {
            ([x], [o]) => {
                xcol[r] = *x;
                ocol[r] = *o;
            }
            _ => return Err(AsciiError::Markings(r)),
        }
    }
    Ok(GridDiagram::new(xcol, ocol)?)
}

/// The three projections side by side, then the mark list.
pub fn cube_ascii(c: &CubeDiagram) -> String {
    let mut blocks = Vec::new();
    for axis in [Axis::Z, Axis::X, Axis::Y] {
        let (ca, ra) = axis.plane();
        let title = format!("({ca},{ra})");
        let body = match c.project(axis) {
            Ok(g) => grid_ascii(&g),
            Err(_) => "(not a grid)\n".to_string(),
        };
        blocks.push((title, body));
    }
    let width = blocks.iter().flat_map(|(_, b)| b.lines()).map(str::len).max().unwrap_or(0).max(8);
    let height = blocks.iter().map(|(_, b)| b.lines().count()).max().unwrap_or(0);
    let mut out = String::new();
    let titles: Vec<String> = blocks.iter().map(|(t, _)| format!("{t:<width$}")).collect();
    out.push_str(titles.join("   ").trim_end());
    out.push('\n');
    for i in 0..height {
        let parts: Vec<String> = blocks
            .iter()
            .map(|(_, b)| format!("{:<width$}", b.lines().nth(i).unwrap_or("")))
            .collect();
        out.push_str(parts.join("   ").trim_end());
        out.push('\n');
    }
    out.push('\n');
    out.push_str(&c.to_text());
    out
}

const CELL: usize = 24;

fn grid_svg_group(g: &GridDiagram, dx: usize, title: &str) -> String {
    let n = g.size();
    let size = n * CELL;
    let centre = |v: usize| v * CELL + CELL / 2;
    let y = |r: usize| size - centre(r);
    let mut s = String::new();
    let _ = writeln!(s, r#"<g transform="translate({dx},24)">"#);
    let _ = writeln!(s, r#"<text x="0" y="-8" font-size="14">{title}</text>"#);
    let _ = writeln!(s, r##"<rect width="{size}" height="{size}" fill="none" stroke="#bbb"/>"##);
    for r in 0..n {
        let (from, to) = g.horizontal(r);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="2"/>"#,
            centre(from),
            y(r),
            centre(to),
            y(r)
        );
    }
    // verticals drawn last, with a white halo, so they pass over
    for c in 0..n {
        let (from, to) = g.vertical(c);
        for (colour, width) in [("white", 6), ("black", 2)] {
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{colour}" stroke-width="{width}"/>"#,
                centre(c),
                y(from),
                centre(c),
                y(to)
            );
        }
    }
    for r in 0..n {
        for (label, c) in [("X", g.xcol()[r]), ("O", g.ocol()[r])] {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="16" text-anchor="middle" dominant-baseline="central">{label}</text>"#,
                centre(c),
                y(r)
            );
        }
    }
    s.push_str("</g>\n");
    s
}

fn svg_document(width: usize, height: usize, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

pub fn grid_svg(g: &GridDiagram) -> String {
    let size = g.size() * CELL;
    svg_document(size + 16, size + 40, &grid_svg_group(g, 8, "grid"))
}

pub fn cube_svg(c: &CubeDiagram) -> String {
    let size = c.size() * CELL;
    let mut body = String::new();
    let mut dx = 8;
    for axis in [Axis::Z, Axis::X, Axis::Y] {
        let (ca, ra) = axis.plane();
        if let Ok(g) = c.project(axis) {
            body.push_str(&grid_svg_group(&g, dx, &format!("({ca},{ra})")));
        }
        dx += size + 32;
    }
    svg_document(dx, size + 40, &body)
}
