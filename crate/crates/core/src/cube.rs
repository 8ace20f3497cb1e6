//! Cube diagrams: cubic lattice knots in an `n×n×n` cube whose three axis
//! projections are grid diagrams.
//!
//! Marks occupy integer cells `(i, j, k)`, standing for the centres
//! `(i+½, j+½, k+½)`. Segments run X→Y (parallel to z), Y→Z (parallel to
//! x) and Z→X (parallel to y).
//!
//! Crossing conditions, with "over" measured along the dropped axis:
//! in the (x,y)-projection the y-parallel segment has the larger z; in the
//! (y,z)-projection the z-parallel segment has the smaller x; in the
//! (z,x)-projection the x-parallel segment has the smaller y.
//!
//! The two side projections are therefore seen from the negative side of
//! their dropped axis, which reverses the z coordinate in the picture.
//! [`CubeDiagram::project`] applies that reversal, so all three
//! projections are diagrams of the same knot with verticals over.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{strictly_between, GridDiagram};

pub type Cell = [usize; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    X,
    Y,
    Z,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::X, Label::Y, Label::Z];

    /// The label a segment leaving this label points to.
    pub fn next(self) -> Label {
        match self {
            Label::X => Label::Y,
            Label::Y => Label::Z,
            Label::Z => Label::X,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::X => "X",
            Label::Y => "Y",
            Label::Z => "Z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The label at the vertex of the cube bend in a flat with this thin
    /// axis.
    pub fn vertex_label(self) -> Label {
        match self {
            Axis::X => Label::X,
            Axis::Y => Label::Y,
            Axis::Z => Label::Z,
        }
    }

    /// `(column axis, row axis)` of the projection that drops this axis.
    pub fn plane(self) -> (Axis, Axis) {
        match self {
            Axis::Z => (Axis::X, Axis::Y),
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::Z, Axis::X),
        }
    }

    /// Cube label projecting to grid X markings in the projection that
    /// drops this axis. Grid O markings are the next label's predecessor
    /// (the end of the projected vertical segments).
    pub fn grid_x_label(self) -> Label {
        match self {
            Axis::Z => Label::Z,
            Axis::X => Label::X,
            Axis::Y => Label::Y,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(format!("unknown axis `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mark {
    pub label: Label,
    pub cell: Cell,
}

/// A segment between two marks, parallel to `axis`, oriented `from → to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub axis: Axis,
    pub from: Cell,
    pub to: Cell,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeBend {
    pub axis: Axis,
    pub vertex: Cell,
    /// The two marks joined to the vertex, in label order.
    pub arms: [Cell; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeViolation {
    #[error("size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("mark {label} at {cell:?} lies outside the cube")]
    OutOfRange { label: Label, cell: Cell },
    #[error("two marks share cell {0:?}")]
    DuplicateCell(Cell),
    #[error("{count} {label} marks, expected {n}")]
    LabelCount { label: Label, count: usize, n: usize },
    #[error("{axis}-flat {level} holds {count} {label} marks")]
    FlatCount { axis: Axis, level: usize, label: Label, count: usize },
    #[error("{axis}-flat {level}: marks do not form an axis-parallel right angle at the {vertex} mark")]
    NotRightAngle { axis: Axis, level: usize, vertex: Label },
    #[error("{from} mark at {cell:?} has no unique {to} partner")]
    SegmentStructure { from: Label, to: Label, cell: Cell },
    #[error("{projection}-projection crossing at {at:?}: {over}-parallel segment at depth {over_depth} must pass over {under}-parallel segment at depth {under_depth}")]
    Crossing {
        projection: Axis,
        at: (usize, usize),
        over: Axis,
        under: Axis,
        over_depth: usize,
        under_depth: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CubeReport {
    pub violations: Vec<CubeViolation>,
}

impl CubeReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&CubeViolation> {
        self.violations.first()
    }
}

impl fmt::Display for CubeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

#[derive(Debug, Error)]
pub enum CubeError {
    #[error("cube fails the marking conditions: {0}")]
    Marking(CubeReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseCubeError {
    #[error("malformed header: expected `cube <n>`, found `{0}`")]
    MalformedHeader(String),
    #[error("line {line}: malformed mark `{text}`")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: cell {cell:?} out of range for size {n}")]
    OutOfRange { line: usize, cell: Cell, n: usize },
    #[error("line {line}: duplicate cell {cell:?}")]
    DuplicateCell { line: usize, cell: Cell },
    #[error("{count} {label} marks, expected {n}")]
    Count { label: Label, count: usize, n: usize },
}

/// A set of labelled marks in an `n×n×n` cube. Marks are kept sorted by
/// label and cell, so equal diagrams compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeDiagram {
    n: usize,
    marks: Vec<Mark>,
}

impl CubeDiagram {
    pub fn new(n: usize, mut marks: Vec<Mark>) -> Self {
        marks.sort();
        Self { n, marks }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn marks_with(&self, label: Label) -> impl Iterator<Item = &Mark> {
        self.marks.iter().filter(move |m| m.label == label)
    }

    /// Marking conditions only: counts, cells, flats and right angles.
    pub fn marking_report(&self) -> CubeReport {
        let n = self.n;
        let mut violations = Vec::new();
        if n < 2 {
            violations.push(CubeViolation::TooSmall(n));
        }
        let mut cells = HashMap::new();
        for m in &self.marks {
            if m.cell.iter().any(|&v| v >= n) {
                violations.push(CubeViolation::OutOfRange { label: m.label, cell: m.cell });
            } else if cells.insert(m.cell, m.label).is_some() {
                violations.push(CubeViolation::DuplicateCell(m.cell));
            }
        }
        for label in Label::ALL {
            let count = self.marks_with(label).count();
            if count != n {
                violations.push(CubeViolation::LabelCount { label, count, n });
            }
        }
        if !violations.is_empty() {
            return CubeReport { violations };
        }

        for axis in Axis::ALL {
            let a = axis.index();
            for level in 0..n {
                let mut by_label: [Vec<Cell>; 3] = Default::default();
                for m in self.marks.iter().filter(|m| m.cell[a] == level) {
                    by_label[m.label.index()].push(m.cell);
                }
                let mut counts_ok = true;
                for label in Label::ALL {
                    let count = by_label[label.index()].len();
                    if count != 1 {
                        counts_ok = false;
                        violations.push(CubeViolation::FlatCount { axis, level, label, count });
                    }
                }
                if !counts_ok {
                    continue;
                }
                let vertex = axis.vertex_label();
                let v = by_label[vertex.index()][0];
                let arms: Vec<Cell> = Label::ALL
                    .iter()
                    .filter(|&&l| l != vertex)
                    .map(|l| by_label[l.index()][0])
                    .collect();
                let dirs: Vec<Option<usize>> = arms.iter().map(|q| single_difference(v, *q)).collect();
                let right_angle = match (dirs[0], dirs[1]) {
                    (Some(d0), Some(d1)) => d0 != d1,
                    _ => false,
                };
                if !right_angle {
                    violations.push(CubeViolation::NotRightAngle { axis, level, vertex });
                }
            }
        }
        CubeReport { violations }
    }

    /// The 3n oriented segments, or the first structural problem.
    pub fn segments(&self) -> Result<Vec<Segment>, CubeViolation> {
        let mut segs = Vec::with_capacity(3 * self.n);
        for from in Label::ALL {
            let to = from.next();
            for m in self.marks_with(from) {
                let mut partners = self
                    .marks_with(to)
                    .filter(|q| single_difference(m.cell, q.cell).is_some());
                match (partners.next(), partners.next()) {
                    (Some(q), None) => {
                        let axis = Axis::ALL[single_difference(m.cell, q.cell).unwrap()];
                        segs.push(Segment { axis, from: m.cell, to: q.cell });
                    }
                    _ => return Err(CubeViolation::SegmentStructure { from, to, cell: m.cell }),
                }
            }
        }
        Ok(segs)
    }

    /// Crossing-condition violations in the projection that drops `axis`.
    pub fn crossing_violations(&self, segs: &[Segment], axis: Axis) -> Vec<CubeViolation> {
        let (col_axis, row_axis) = axis.plane();
        let (ca, ra, d) = (col_axis.index(), row_axis.index(), axis.index());
        let verticals: Vec<&Segment> = segs.iter().filter(|s| s.axis == row_axis).collect();
        let horizontals: Vec<&Segment> = segs.iter().filter(|s| s.axis == col_axis).collect();
        let mut out = Vec::new();
        for v in &verticals {
            let col = v.from[ca];
            for h in &horizontals {
                let row = h.from[ra];
                if strictly_between(row, v.from[ra], v.to[ra])
                    && strictly_between(col, h.from[ca], h.to[ca])
                {
                    let (vd, hd) = (v.from[d], h.from[d]);
                    let ok = match axis {
                        Axis::Z => vd > hd,
                        Axis::X | Axis::Y => vd < hd,
                    };
                    if !ok {
                        out.push(CubeViolation::Crossing {
                            projection: axis,
                            at: (col, row),
                            over: row_axis,
                            under: col_axis,
                            over_depth: vd,
                            under_depth: hd,
                        });
                    }
                }
            }
        }
        out
    }

    /// Full validation: marking conditions, then the crossing conditions of
    /// all three projections.
    pub fn validate(&self) -> CubeReport {
        let mut report = self.marking_report();
        if !report.is_ok() {
            return report;
        }
        let segs = match self.segments() {
            Ok(s) => s,
            Err(v) => {
                report.violations.push(v);
                return report;
            }
        };
        for axis in [Axis::Z, Axis::X, Axis::Y] {
            report.violations.extend(self.crossing_violations(&segs, axis));
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Grid diagram of the projection dropping `axis`. Grid X markings are
    /// the starts of the projected vertical segments and grid O markings
    /// their ends. For the x and y axes the z coordinate is reversed.
    pub fn project(&self, axis: Axis) -> Result<GridDiagram, CubeError> {
        let report = self.marking_report();
        if !report.is_ok() {
            return Err(CubeError::Marking(report));
        }
        let n = self.n;
        let (col_axis, row_axis) = axis.plane();
        let (ca, ra) = (col_axis.index(), row_axis.index());
        let x_label = axis.grid_x_label();
        // the vertical segment leaving x_label ends at the next label
        let o_label = x_label.next();
        let mut xcol = vec![usize::MAX; n];
        let mut ocol = vec![usize::MAX; n];
        let coord = |cell: &Cell, a: usize| {
            if axis != Axis::Z && a == Axis::Z.index() {
                n - 1 - cell[a]
            } else {
                cell[a]
            }
        };
        for m in self.marks_with(x_label) {
            xcol[coord(&m.cell, ra)] = coord(&m.cell, ca);
        }
        for m in self.marks_with(o_label) {
            ocol[coord(&m.cell, ra)] = coord(&m.cell, ca);
        }
        GridDiagram::new(xcol, ocol).map_err(|_| CubeError::Marking(report))
    }

    /// One cube bend per flat with thin axis `axis`, ordered by level.
    pub fn cube_bends(&self, axis: Axis) -> Vec<CubeBend> {
        let a = axis.index();
        let vertex_label = axis.vertex_label();
        let mut bends = Vec::with_capacity(self.n);
        for level in 0..self.n {
            let in_flat: Vec<&Mark> = self.marks.iter().filter(|m| m.cell[a] == level).collect();
            let Some(vertex) = in_flat.iter().find(|m| m.label == vertex_label) else {
                continue;
            };
            let arms: Vec<Cell> = in_flat
                .iter()
                .filter(|m| m.label != vertex_label)
                .map(|m| m.cell)
                .collect();
            if arms.len() == 2 {
                bends.push(CubeBend { axis, vertex: vertex.cell, arms: [arms[0], arms[1]] });
            }
        }
        bends
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("cube {}\n", self.n);
        for m in &self.marks {
            s.push_str(&format!("{} {} {} {}\n", m.label, m.cell[0], m.cell[1], m.cell[2]));
        }
        s
    }
}

impl fmt::Display for CubeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for CubeDiagram {
    type Err = ParseCubeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_cube(s)
    }
}

/// Index of the single coordinate where `a` and `b` differ.
fn single_difference(a: Cell, b: Cell) -> Option<usize> {
    let mut diff = (0..3).filter(|&i| a[i] != b[i]);
    match (diff.next(), diff.next()) {
        (Some(i), None) => Some(i),
        _ => None,
    }
}

/// Parses the `.cube` text format.
pub fn parse_cube(text: &str) -> Result<CubeDiagram, ParseCubeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().unwrap_or((0, ""));
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["cube", n] => n
            .parse::<usize>()
            .map_err(|_| ParseCubeError::MalformedHeader(header.to_string()))?,
        _ => return Err(ParseCubeError::MalformedHeader(header.to_string())),
    };
    let mut marks = Vec::new();
    let mut seen = HashMap::new();
    for (line, text) in lines {
        let malformed = || ParseCubeError::MalformedLine { line, text: text.to_string() };
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(malformed());
        }
        let label = match toks[0] {
            "X" => Label::X,
            "Y" => Label::Y,
            "Z" => Label::Z,
            _ => return Err(malformed()),
        };
        let mut cell = [0usize; 3];
        for (slot, tok) in cell.iter_mut().zip(&toks[1..]) {
            *slot = tok.parse().map_err(|_| malformed())?;
        }
        if cell.iter().any(|&v| v >= n) {
            return Err(ParseCubeError::OutOfRange { line, cell, n });
        }
        if seen.insert(cell, label).is_some() {
            return Err(ParseCubeError::DuplicateCell { line, cell });
        }
        marks.push(Mark { label, cell });
    }
    for label in Label::ALL {
        let count = marks.iter().filter(|m| m.label == label).count();
        if count != n {
            return Err(ParseCubeError::Count { label, count, n });
        }
    }
    Ok(CubeDiagram::new(n, marks))
}
