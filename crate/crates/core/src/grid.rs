//! Grid diagrams.
//!
//! A grid of size `n` holds one X and one O marking in every row and every
//! column. Coordinates are Cartesian: column 0 is the leftmost column and
//! row 0 the bottom row. Vertical segments run from X to O, horizontal
//! segments from O to X, and vertical segments always cross over horizontal
//! ones.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A lattice point `(column, row)`.
pub type Point = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MarkingKind {
    X,
    O,
}

impl MarkingKind {
    pub fn other(self) -> Self {
        match self {
            MarkingKind::X => MarkingKind::O,
            MarkingKind::O => MarkingKind::X,
        }
    }
}

impl fmt::Display for MarkingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkingKind::X => "X",
            MarkingKind::O => "O",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Marking {
    pub kind: MarkingKind,
    pub col: usize,
    pub row: usize,
}

/// Corner type of a marking, named by the directions its two segments
/// leave it: `NE` means the vertical segment goes up and the horizontal
/// segment goes right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    NE,
    NW,
    SE,
    SW,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NE, Corner::NW, Corner::SE, Corner::SW];

    pub fn from_arms(up: bool, right: bool) -> Self {
        match (up, right) {
            (true, true) => Corner::NE,
            (true, false) => Corner::NW,
            (false, true) => Corner::SE,
            (false, false) => Corner::SW,
        }
    }

    pub fn is_up(self) -> bool {
        matches!(self, Corner::NE | Corner::NW)
    }

    pub fn is_right(self) -> bool {
        matches!(self, Corner::NE | Corner::SE)
    }

    /// Reflection across a vertical line (east and west swap).
    pub fn mirrored(self) -> Self {
        Corner::from_arms(self.is_up(), !self.is_right())
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corner::NE => "NE",
            Corner::NW => "NW",
            Corner::SE => "SE",
            Corner::SW => "SW",
        })
    }
}

impl FromStr for Corner {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NE" => Ok(Corner::NE),
            "NW" => Ok(Corner::NW),
            "SE" => Ok(Corner::SE),
            "SW" => Ok(Corner::SW),
            other => Err(format!("unknown corner kind `{other}`")),
        }
    }
}

/// A transverse intersection of the vertical segment in column `col` with
/// the horizontal segment in row `row`. The vertical segment is the over
/// strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub col: usize,
    pub row: usize,
    pub sign: i8,
}

impl Crossing {
    pub fn pos(&self) -> Point {
        (self.col, self.row)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerCensus {
    pub x_ne: usize,
    pub x_nw: usize,
    pub x_se: usize,
    pub x_sw: usize,
    pub o_ne: usize,
    pub o_nw: usize,
    pub o_se: usize,
    pub o_sw: usize,
}

impl CornerCensus {
    pub fn get(&self, kind: MarkingKind, corner: Corner) -> usize {
        match (kind, corner) {
            (MarkingKind::X, Corner::NE) => self.x_ne,
            (MarkingKind::X, Corner::NW) => self.x_nw,
            (MarkingKind::X, Corner::SE) => self.x_se,
            (MarkingKind::X, Corner::SW) => self.x_sw,
            (MarkingKind::O, Corner::NE) => self.o_ne,
            (MarkingKind::O, Corner::NW) => self.o_nw,
            (MarkingKind::O, Corner::SE) => self.o_se,
            (MarkingKind::O, Corner::SW) => self.o_sw,
        }
    }

    fn bump(&mut self, kind: MarkingKind, corner: Corner) {
        let slot = match (kind, corner) {
            (MarkingKind::X, Corner::NE) => &mut self.x_ne,
            (MarkingKind::X, Corner::NW) => &mut self.x_nw,
            (MarkingKind::X, Corner::SE) => &mut self.x_se,
            (MarkingKind::X, Corner::SW) => &mut self.x_sw,
            (MarkingKind::O, Corner::NE) => &mut self.o_ne,
            (MarkingKind::O, Corner::NW) => &mut self.o_nw,
            (MarkingKind::O, Corner::SE) => &mut self.o_se,
            (MarkingKind::O, Corner::SW) => &mut self.o_sw,
        };
        *slot += 1;
    }

    pub fn x_total(&self) -> usize {
        self.x_ne + self.x_nw + self.x_se + self.x_sw
    }

    pub fn o_total(&self) -> usize {
        self.o_ne + self.o_nw + self.o_se + self.o_sw
    }
}

/// One violated grid invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridViolation {
    #[error("grid size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("xcol has {xcol} entries and ocol has {ocol}, expected {n}")]
    LengthMismatch { n: usize, xcol: usize, ocol: usize },
    #[error("xcol not a permutation (column {0} missing)")]
    XNotPermutation(usize),
    #[error("ocol not a permutation (column {0} missing)")]
    ONotPermutation(usize),
    #[error("X and O share cell in row {0}")]
    SharedCell(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GridReport {
    pub violations: Vec<GridViolation>,
}

impl GridReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GridReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// Checks the grid invariants on raw column arrays.
pub fn validate_grid(n: usize, xcol: &[usize], ocol: &[usize]) -> GridReport {
    let mut violations = Vec::new();
    if n < 2 {
        violations.push(GridViolation::TooSmall(n));
    }
    if xcol.len() != n || ocol.len() != n {
        violations.push(GridViolation::LengthMismatch {
            n,
            xcol: xcol.len(),
            ocol: ocol.len(),
        });
        return GridReport { violations };
    }
    if let Some(c) = missing_column(n, xcol) {
        violations.push(GridViolation::XNotPermutation(c));
    }
    if let Some(c) = missing_column(n, ocol) {
        violations.push(GridViolation::ONotPermutation(c));
    }
    if n > 1 {
        for r in 0..n {
            if xcol[r] == ocol[r] {
                violations.push(GridViolation::SharedCell(r));
            }
        }
    }
    GridReport { violations }
}

fn missing_column(n: usize, cols: &[usize]) -> Option<usize> {
    let mut seen = vec![false; n];
    for &c in cols {
        if c < n {
            seen[c] = true;
        }
    }
    seen.iter().position(|s| !s)
}

#[derive(Debug, Error)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    Invalid(GridReport),
    #[error("expected a knot, grid has {0} components")]
    MultiComponent(usize),
    #[error("row {row} out of range for grid of size {n}")]
    RowOutOfRange { row: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseGridError {
    #[error("malformed header: expected `grid <n>`, found `{0}`")]
    MalformedHeader(String),
    #[error("missing {0} row")]
    MissingRow(MarkingKind),
    #[error("malformed {kind} row: {detail}")]
    MalformedRow { kind: MarkingKind, detail: String },
    #[error("{0} row not a permutation")]
    NotPermutation(MarkingKind),
    #[error("coincident markings: X and O share cell in row {0}")]
    Coincident(usize),
    #[error("unexpected trailing line `{0}`")]
    TrailingLine(String),
}

/// An `n`×`n` grid diagram. `xcol[r]` and `ocol[r]` are the columns of the
/// X and O markings in row `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridDiagram {
    xcol: Vec<usize>,
    ocol: Vec<usize>,
    // inverse permutations: row of the X (resp. O) in each column
    xrow: Vec<usize>,
    orow: Vec<usize>,
}

impl GridDiagram {
    pub fn new(xcol: Vec<usize>, ocol: Vec<usize>) -> Result<Self, GridError> {
        let report = validate_grid(xcol.len(), &xcol, &ocol);
        if !report.is_ok() {
            return Err(GridError::Invalid(report));
        }
        Ok(Self::from_valid(xcol, ocol))
    }

    /// Builds a grid from arrays already known to satisfy the invariants.
    pub(crate) fn from_valid(xcol: Vec<usize>, ocol: Vec<usize>) -> Self {
        let n = xcol.len();
        let mut xrow = vec![0; n];
        let mut orow = vec![0; n];
        for r in 0..n {
            xrow[xcol[r]] = r;
            orow[ocol[r]] = r;
        }
        Self { xcol, ocol, xrow, orow }
    }

    pub fn size(&self) -> usize {
        self.xcol.len()
    }

    pub fn xcol(&self) -> &[usize] {
        &self.xcol
    }

    pub fn ocol(&self) -> &[usize] {
        &self.ocol
    }

    /// Row of the X marking in column `c`.
    pub fn x_row(&self, c: usize) -> usize {
        self.xrow[c]
    }

    /// Row of the O marking in column `c`.
    pub fn o_row(&self, c: usize) -> usize {
        self.orow[c]
    }

    pub fn x_at(&self, row: usize) -> Point {
        (self.xcol[row], row)
    }

    pub fn o_at(&self, row: usize) -> Point {
        (self.ocol[row], row)
    }

    /// The vertical segment of column `c` as `(from_row, to_row)`, X to O.
    pub fn vertical(&self, c: usize) -> (usize, usize) {
        (self.xrow[c], self.orow[c])
    }

    /// The horizontal segment of row `r` as `(from_col, to_col)`, O to X.
    pub fn horizontal(&self, r: usize) -> (usize, usize) {
        (self.ocol[r], self.xcol[r])
    }

    /// Oriented components; each is the cyclic sequence X, O, X, O, ...
    /// starting at the X in the lowest row of the component.
    pub fn trace(&self) -> Vec<Vec<Marking>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut r = start;
            while !seen[r] {
                seen[r] = true;
                let c = self.xcol[r];
                comp.push(Marking { kind: MarkingKind::X, col: c, row: r });
                let r2 = self.orow[c];
                comp.push(Marking { kind: MarkingKind::O, col: c, row: r2 });
                r = r2;
            }
            comps.push(comp);
        }
        comps
    }

    pub fn component_count(&self) -> usize {
        component_count(&self.xcol, &self.orow)
    }

    pub fn is_knot(&self) -> bool {
        self.component_count() == 1
    }

    pub(crate) fn require_knot(&self) -> Result<(), GridError> {
        match self.component_count() {
            1 => Ok(()),
            k => Err(GridError::MultiComponent(k)),
        }
    }

    pub fn crossings(&self) -> Vec<Crossing> {
        let n = self.size();
        let mut out = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if let Some(sign) = self.crossing_sign(c, r) {
                    out.push(Crossing { col: c, row: r, sign });
                }
            }
        }
        out
    }

    /// Sign of the crossing of column `c`'s vertical with row `r`'s
    /// horizontal, if they cross.
    pub fn crossing_sign(&self, c: usize, r: usize) -> Option<i8> {
        let (vr0, vr1) = self.vertical(c);
        let (hc0, hc1) = self.horizontal(r);
        if strictly_between(r, vr0, vr1) && strictly_between(c, hc0, hc1) {
            let up = vr1 > vr0;
            let right = hc1 > hc0;
            // over strand vertical, under horizontal: positive when the
            // under strand runs right-to-left beneath an upward over strand
            Some(if up != right { 1 } else { -1 })
        } else {
            None
        }
    }

    pub fn writhe(&self) -> Result<i64, GridError> {
        self.require_knot()?;
        Ok(self.writhe_unchecked())
    }

    pub(crate) fn writhe_unchecked(&self) -> i64 {
        writhe_of(&self.xcol, &self.ocol, &self.xrow, &self.orow)
    }

    pub fn corner_of(&self, kind: MarkingKind, row: usize) -> Corner {
        match kind {
            MarkingKind::X => {
                let c = self.xcol[row];
                Corner::from_arms(self.orow[c] > row, self.ocol[row] > c)
            }
            MarkingKind::O => {
                let c = self.ocol[row];
                Corner::from_arms(self.xrow[c] > row, self.xcol[row] > c)
            }
        }
    }

    pub fn corner_census(&self) -> CornerCensus {
        let mut census = CornerCensus::default();
        for r in 0..self.size() {
            census.bump(MarkingKind::X, self.corner_of(MarkingKind::X, r));
            census.bump(MarkingKind::O, self.corner_of(MarkingKind::O, r));
        }
        census
    }

    /// Rotation of the plane by a half turn.
    pub fn rotate180(&self) -> GridDiagram {
        let n = self.size();
        let mut xcol = vec![0; n];
        let mut ocol = vec![0; n];
        for r in 0..n {
            xcol[n - 1 - r] = n - 1 - self.xcol[r];
            ocol[n - 1 - r] = n - 1 - self.ocol[r];
        }
        GridDiagram::from_valid(xcol, ocol)
    }

    /// Reflection across a vertical line. Every crossing changes sign, so
    /// this is a diagram of the mirror knot.
    pub fn mirror(&self) -> GridDiagram {
        let n = self.size();
        let xcol = self.xcol.iter().map(|&c| n - 1 - c).collect();
        let ocol = self.ocol.iter().map(|&c| n - 1 - c).collect();
        GridDiagram::from_valid(xcol, ocol)
    }

    /// Cyclic translation by `dc` columns and `dr` rows (the grid lives on
    /// a torus, so the knot type is unchanged).
    pub fn translate(&self, dc: usize, dr: usize) -> GridDiagram {
        let n = self.size();
        let mut xcol = vec![0; n];
        let mut ocol = vec![0; n];
        for r in 0..n {
            xcol[(r + dr) % n] = (self.xcol[r] + dc) % n;
            ocol[(r + dr) % n] = (self.ocol[r] + dc) % n;
        }
        GridDiagram::from_valid(xcol, ocol)
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        format!("grid {}\nX {}\nO {}\n", self.size(), join(&self.xcol), join(&self.ocol))
    }
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for GridDiagram {
    type Err = ParseGridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_grid(s)
    }
}

pub(crate) fn strictly_between(v: usize, a: usize, b: usize) -> bool {
    (a < v && v < b) || (b < v && v < a)
}

/// Component count from raw arrays; `orow` is the inverse of `ocol`.
pub(crate) fn component_count(xcol: &[usize], orow: &[usize]) -> usize {
    let n = xcol.len();
    let mut seen = [false; 64];
    let mut seen_vec;
    let seen: &mut [bool] = if n <= 64 {
        &mut seen[..n]
    } else {
        seen_vec = vec![false; n];
        &mut seen_vec
    };
    let mut comps = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        comps += 1;
        let mut r = start;
        while !seen[r] {
            seen[r] = true;
            r = orow[xcol[r]];
        }
    }
    comps
}

pub(crate) fn writhe_of(xcol: &[usize], ocol: &[usize], xrow: &[usize], orow: &[usize]) -> i64 {
    let n = xcol.len();
    let mut w = 0i64;
    for c in 0..n {
        let (a, b) = (xrow[c], orow[c]);
        let up = b > a;
        let (lo, hi) = if up { (a, b) } else { (b, a) };
        for r in lo + 1..hi {
            let (h0, h1) = (ocol[r], xcol[r]);
            if strictly_between(c, h0, h1) {
                let right = h1 > h0;
                w += if up != right { 1 } else { -1 };
            }
        }
    }
    w
}

/// `p1 ⪯ p2`: `p1` is weakly below and to the left of `p2`.
pub fn point_below(p1: Point, p2: Point) -> bool {
    p1.0 <= p2.0 && p1.1 <= p2.1
}

/// Parses the `.grid` text format.
pub fn parse_grid(text: &str) -> Result<GridDiagram, ParseGridError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let header = lines.next().unwrap_or("");
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["grid", n] => n
            .parse::<usize>()
            .map_err(|_| ParseGridError::MalformedHeader(header.to_string()))?,
        _ => return Err(ParseGridError::MalformedHeader(header.to_string())),
    };
    if n < 2 {
        return Err(ParseGridError::MalformedHeader(header.to_string()));
    }

    let xcol = parse_row(lines.next(), MarkingKind::X, n)?;
    let ocol = parse_row(lines.next(), MarkingKind::O, n)?;
    if let Some(extra) = lines.next() {
        return Err(ParseGridError::TrailingLine(extra.to_string()));
    }
    if missing_column(n, &xcol).is_some() {
        return Err(ParseGridError::NotPermutation(MarkingKind::X));
    }
    if missing_column(n, &ocol).is_some() {
        return Err(ParseGridError::NotPermutation(MarkingKind::O));
    }
    if let Some(r) = (0..n).find(|&r| xcol[r] == ocol[r]) {
        return Err(ParseGridError::Coincident(r));
    }
    Ok(GridDiagram::from_valid(xcol, ocol))
}

fn parse_row(line: Option<&str>, kind: MarkingKind, n: usize) -> Result<Vec<usize>, ParseGridError> {
    let line = line.ok_or(ParseGridError::MissingRow(kind))?;
    let mut toks = line.split_whitespace();
    let tag = toks.next().unwrap_or("");
    if tag != kind.to_string() {
        return Err(ParseGridError::MalformedRow {
            kind,
            detail: format!("expected leading `{kind}`, found `{tag}`"),
        });
    }
    let cols = toks
        .map(|t| t.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| ParseGridError::MalformedRow { kind, detail: e.to_string() })?;
    if cols.len() != n {
        return Err(ParseGridError::MalformedRow {
            kind,
            detail: format!("expected {n} columns, found {}", cols.len()),
        });
    }
    Ok(cols)
}
