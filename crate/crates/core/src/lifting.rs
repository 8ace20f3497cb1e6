//! Lifting grid diagrams to cube diagrams.
//!
//! Bend `r` is the X-bend whose X marking sits in row `r`: the vertical
//! segment leaving that X and the horizontal segment arriving at it. A lift
//! puts bend `r` in the z-flat at level `h[r]`; the cube marks are
//! `Z = (xcol[r], r, h)`, `Y = (ocol[r], r, h)` and
//! `X = (xcol[r], orow[xcol[r]], h)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{CubeDiagram, CubeViolation, Label, Mark};
use crate::grid::{strictly_between, GridDiagram, GridError, Point};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XBend {
    pub id: usize,
    pub x_corner: Point,
    /// `(column, from_row, to_row)`, oriented X→O.
    pub vertical: (usize, usize, usize),
    /// `(row, from_col, to_col)`, oriented O→X.
    pub horizontal: (usize, usize, usize),
}

pub fn xbend_decomposition(g: &GridDiagram) -> Result<Vec<XBend>, GridError> {
    g.require_knot()?;
    Ok((0..g.size())
        .map(|r| {
            let c = g.xcol()[r];
            XBend {
                id: r,
                x_corner: (c, r),
                vertical: (c, r, g.o_row(c)),
                horizontal: (r, g.ocol()[r], c),
            }
        })
        .collect())
}

/// The over-crossing relation on X-bends: `(a, b)` means bend `a` crosses
/// over bend `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BendOrder {
    pub n: usize,
    pub relation: BTreeSet<(usize, usize)>,
}

impl BendOrder {
    pub fn of(g: &GridDiagram) -> Self {
        let relation = g
            .crossings()
            .iter()
            .map(|c| (g.x_row(c.col), c.row))
            .collect();
        Self { n: g.size(), relation }
    }

    /// A directed cycle `b0 > b1 > ... > b0`, if any.
    pub fn cycle(&self) -> Option<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.n];
        for &(a, b) in &self.relation {
            succ[a].push(b);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.n];
        let mut stack = Vec::new();
        fn dfs(
            v: usize,
            succ: &[Vec<usize>],
            state: &mut [u8],
            stack: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            state[v] = 1;
            stack.push(v);
            for &w in &succ[v] {
                if state[w] == 1 {
                    let at = stack.iter().position(|&x| x == w).unwrap();
                    return Some(stack[at..].to_vec());
                }
                if state[w] == 0 {
                    if let Some(c) = dfs(w, succ, state, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            state[v] = 2;
            None
        }
        for v in 0..self.n {
            if state[v] == 0 {
                if let Some(c) = dfs(v, &succ, &mut state, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycle().is_none()
    }

    /// `closure[a]` has bit `b` set iff `a > b` follows transitively.
    pub fn closure(&self) -> Vec<u64> {
        let mut reach = vec![0u64; self.n];
        for &(a, b) in &self.relation {
            reach[a] |= 1 << b;
        }
        for k in 0..self.n {
            for a in 0..self.n {
                if reach[a] >> k & 1 == 1 {
                    reach[a] |= reach[k];
                }
            }
        }
        reach
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bend order has a cycle: {}", fmt_cycle(.cycle))]
pub struct BendCycle {
    pub cycle: Vec<usize>,
}

fn fmt_cycle(c: &[usize]) -> String {
    let mut parts: Vec<String> = c.iter().map(|b| b.to_string()).collect();
    if let Some(first) = c.first() {
        parts.push(first.to_string());
    }
    parts.join(" > ")
}

/// The bend order, or a cycle showing that none exists.
pub fn partial_order(g: &GridDiagram) -> Result<BendOrder, BendCycle> {
    let order = BendOrder::of(g);
    match order.cycle() {
        Some(cycle) => Err(BendCycle { cycle }),
        None => Ok(order),
    }
}

/// z-levels for the X-bends: `h[r]` is the level of bend `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftAssignment {
    h: Vec<usize>,
}

impl LiftAssignment {
    pub fn new(h: Vec<usize>) -> Result<Self, LiftError> {
        let n = h.len();
        let mut seen = vec![false; n];
        for &v in &h {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(LiftError::NotBijective(h));
            }
        }
        Ok(Self { h })
    }

    pub fn heights(&self) -> &[usize] {
        &self.h
    }

    pub fn height(&self, bend: usize) -> usize {
        self.h[bend]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("assignment {0:?} is not a bijection onto 0..n")]
    NotBijective(Vec<usize>),
    #[error("assignment has length {got}, grid has size {n}")]
    SizeMismatch { got: usize, n: usize },
    #[error("grid is not a knot: {0} components")]
    NotAKnot(usize),
    #[error("lift violates {0}")]
    Violation(CubeViolation),
}

/// The lattice knot with bend `r` at level `h[r]`, without validation.
pub fn build_lift(g: &GridDiagram, h: &[usize]) -> CubeDiagram {
    let n = g.size();
    let mut marks = Vec::with_capacity(3 * n);
    for r in 0..n {
        let c = g.xcol()[r];
        marks.push(Mark { label: Label::Z, cell: [c, r, h[r]] });
        marks.push(Mark { label: Label::Y, cell: [g.ocol()[r], r, h[r]] });
        marks.push(Mark { label: Label::X, cell: [c, g.o_row(c), h[r]] });
    }
    CubeDiagram::new(n, marks)
}

pub fn lift_with_heights(g: &GridDiagram, a: &LiftAssignment) -> Result<CubeDiagram, LiftError> {
    if a.h.len() != g.size() {
        return Err(LiftError::SizeMismatch { got: a.h.len(), n: g.size() });
    }
    if !g.is_knot() {
        return Err(LiftError::NotAKnot(g.component_count()));
    }
    let cube = build_lift(g, &a.h);
    match cube.validate().violations.into_iter().next() {
        None => Ok(cube),
        Some(v) => Err(LiftError::Violation(v)),
    }
}

/// Which side projection a straddle constraint comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Straddle {
    /// (y,z)-projection: the O corner lies beside bend `b`'s vertical arm,
    /// to its right.
    Yz,
    /// (z,x)-projection: the O corner lies above bend `b`'s horizontal arm.
    Zx,
}

/// Level constraint: bend `b` must not sit strictly between bends `u` and
/// `v`. The pair `(u, v)` is joined by the z-parallel cube segment at the
/// grid O marking `o_corner`, which is the end of bend `u`'s vertical arm
/// and the start of bend `v`'s horizontal arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StraddleConstraint {
    pub kind: Straddle,
    pub b: usize,
    pub u: usize,
    pub v: usize,
    pub o_corner: Point,
}

/// Every condition a level assignment must meet for the lift to be a
/// valid cube diagram.
#[derive(Debug, Clone)]
pub struct LiftConstraints {
    pub n: usize,
    pub order: BendOrder,
    pub straddles: Vec<StraddleConstraint>,
}

impl LiftConstraints {
    pub fn of(g: &GridDiagram) -> Self {
        let n = g.size();
        let mut straddles = Vec::new();
        for s in 0..n {
            let c = g.ocol()[s];
            let (u, v) = (g.x_row(c), s);
            for b in 0..n {
                if b == u || b == v {
                    continue;
                }
                let cb = g.xcol()[b];
                if strictly_between(s, b, g.o_row(cb)) && c > cb {
                    straddles.push(StraddleConstraint { kind: Straddle::Yz, b, u, v, o_corner: (c, s) });
                }
                if strictly_between(c, g.ocol()[b], cb) && b > s {
                    straddles.push(StraddleConstraint { kind: Straddle::Zx, b, u, v, o_corner: (c, s) });
                }
            }
        }
        Self { n, order: BendOrder::of(g), straddles }
    }

    /// Whether `h` (bend → level) meets every constraint.
    pub fn admits(&self, h: &[usize]) -> bool {
        self.order.relation.iter().all(|&(a, b)| h[a] > h[b])
            && self
                .straddles
                .iter()
                .all(|t| !strictly_between(h[t.b], h[t.u], h[t.v]))
    }

    fn searcher(&self) -> Searcher {
        let mut above = vec![0u64; self.n];
        for &(a, b) in &self.order.relation {
            above[b] |= 1 << a;
        }
        let mut pairs = vec![Vec::new(); self.n];
        for t in &self.straddles {
            pairs[t.b].push((1u64 << t.u) | (1u64 << t.v));
        }
        Searcher { n: self.n, above, pairs, heights: vec![0; self.n], nodes: 0 }
    }
}

struct Searcher {
    n: usize,
    above: Vec<u64>,
    /// per bend, the `{u, v}` masks it must not separate
    pairs: Vec<Vec<u64>>,
    heights: Vec<usize>,
    nodes: u64,
}

impl Searcher {
    fn can_place(&self, b: usize, placed: u64) -> bool {
        placed >> b & 1 == 0
            && self.above[b] & !placed == 0
            && self.pairs[b].iter().all(|&m| (m & placed).count_ones() != 1)
    }

    /// Places levels `level, level-1, ..., 0` top-down; stops at the first
    /// complete assignment or when the node budget runs out.
    fn first(&mut self, placed: u64, level: usize, budget: u64) -> Option<bool> {
        if placed.count_ones() as usize == self.n {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > budget {
            return None;
        }
        for b in 0..self.n {
            if self.can_place(b, placed) {
                self.heights[b] = level;
                match self.first(placed | 1 << b, level.wrapping_sub(1), budget) {
                    Some(false) => {}
                    other => return other,
                }
            }
        }
        Some(false)
    }

    fn count(&self, placed: u64) -> u64 {
        if placed.count_ones() as usize == self.n {
            return 1;
        }
        (0..self.n)
            .filter(|&b| self.can_place(b, placed))
            .map(|b| self.count(placed | 1 << b))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    First,
    Count,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftOutcome {
    First(Option<CubeDiagram>),
    Count(u64),
}

pub fn lift_search(g: &GridDiagram, mode: SearchMode) -> LiftOutcome {
    match mode {
        SearchMode::First => LiftOutcome::First(lift_search_first(g)),
        SearchMode::Count => LiftOutcome::Count(lift_search_count(g)),
    }
}

/// Level assignment of some valid lift, if one exists.
pub fn find_heights(g: &GridDiagram) -> Option<LiftAssignment> {
    find_heights_bounded(g, u64::MAX).flatten()
}

/// Like [`find_heights`], giving up with `None` after `budget` search nodes.
pub fn find_heights_bounded(g: &GridDiagram, budget: u64) -> Option<Option<LiftAssignment>> {
    if !g.is_knot() || g.size() > 64 {
        return Some(None);
    }
    let constraints = LiftConstraints::of(g);
    let mut s = constraints.searcher();
    let found = s.first(0, g.size() - 1, budget)?;
    Some(found.then_some(LiftAssignment { h: s.heights }))
}

pub fn lift_search_first(g: &GridDiagram) -> Option<CubeDiagram> {
    find_heights(g).map(|a| build_lift(g, &a.h))
}

/// Number of level assignments giving a valid cube diagram.
pub fn lift_search_count(g: &GridDiagram) -> u64 {
    if !g.is_knot() || g.size() > 64 {
        return 0;
    }
    LiftConstraints::of(g).searcher().count(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConfigType {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl fmt::Display for ConfigType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigType::One => "1",
            ConfigType::Two => "2",
        })
    }
}

/// Which end of the O-corner segment the bend order forces above the
/// witnessing bend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForcedEnd {
    /// bend `u` (arriving at the O corner) is above, `v` below
    Arriving,
    /// bend `v` (leaving the O corner) is above, `u` below
    Leaving,
}

/// One row of the configuration table: a straddle kind plus the forced
/// ordering of the three bends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfigPattern {
    pub config: ConfigType,
    pub straddle: Straddle,
    pub above: ForcedEnd,
}

pub const CONFIG_PATTERNS: [ConfigPattern; 4] = [
    ConfigPattern { config: ConfigType::One, straddle: Straddle::Yz, above: ForcedEnd::Arriving },
    ConfigPattern { config: ConfigType::One, straddle: Straddle::Yz, above: ForcedEnd::Leaving },
    ConfigPattern { config: ConfigType::Two, straddle: Straddle::Zx, above: ForcedEnd::Arriving },
    ConfigPattern { config: ConfigType::Two, straddle: Straddle::Zx, above: ForcedEnd::Leaving },
];

/// Axis-aligned block of grid cells, bounds inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub cols: (usize, usize),
    pub rows: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeMatch {
    pub config: ConfigType,
    /// the X-bend trapped between the two ends of the O-corner segment
    pub bend: usize,
    pub o_corner: Point,
    pub upper: usize,
    pub lower: usize,
    /// the shaded region beside the trapped bend's arm holding the O corner
    pub region: Region,
}

/// Configurations in which the bend order places bend `b` strictly between
/// the two bends meeting at an O corner that lies in the shaded region of
/// `b`. No cube diagram projects to a grid with a match.
pub fn detect_type_configurations(g: &GridDiagram) -> Vec<TypeMatch> {
    if !g.is_knot() || g.size() > 64 {
        return Vec::new();
    }
    let n = g.size();
    let constraints = LiftConstraints::of(g);
    let reach = constraints.order.closure();
    let gt = |a: usize, b: usize| reach[a] >> b & 1 == 1;
    let mut out = Vec::new();
    for t in &constraints.straddles {
        for pat in CONFIG_PATTERNS.iter().filter(|p| p.straddle == t.kind) {
            let (upper, lower) = match pat.above {
                ForcedEnd::Arriving => (t.u, t.v),
                ForcedEnd::Leaving => (t.v, t.u),
            };
            if gt(upper, t.b) && gt(t.b, lower) {
                let cb = g.xcol()[t.b];
                let region = match t.kind {
                    Straddle::Yz => {
                        let (lo, hi) = minmax(t.b, g.o_row(cb));
                        Region { cols: (cb + 1, n - 1), rows: (lo + 1, hi - 1) }
                    }
                    Straddle::Zx => {
                        let (lo, hi) = minmax(g.ocol()[t.b], cb);
                        Region { cols: (lo + 1, hi - 1), rows: (t.b + 1, n - 1) }
                    }
                };
                out.push(TypeMatch {
                    config: pat.config,
                    bend: t.b,
                    o_corner: t.o_corner,
                    upper,
                    lower,
                    region,
                });
            }
        }
    }
    out
}

fn minmax(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Stabilizes at every X marking whose row is in `split`, all at once.
/// Each X is replaced by a 2×2 block holding an X above-left, an O
/// above-right and an X below-right; the new O is a southwest corner, so
/// each move preserves the left-hand Legendrian type.
///
/// Returns the new grid and, for every old row, the new rows of its
/// bends: `(horizontal_part, Some(vertical_part))` for split rows and
/// `(row, None)` otherwise.
pub fn partial_double(g: &GridDiagram, split: &[bool]) -> (GridDiagram, Vec<(usize, Option<usize>)>) {
    let n = g.size();
    let m = n + split.iter().filter(|&&s| s).count();
    let mut col_shift = vec![0; n + 1];
    let mut row_shift = vec![0; n + 1];
    for r in 0..n {
        row_shift[r + 1] = row_shift[r] + split[r] as usize;
        col_shift[g.xcol()[r] + 1] += split[r] as usize;
    }
    for c in 0..n {
        col_shift[c + 1] += col_shift[c];
    }
    let col = |c: usize| c + col_shift[c];
    let row = |r: usize| r + row_shift[r];
    let mut xcol = vec![0; m];
    let mut ocol = vec![0; m];
    let mut bends = Vec::with_capacity(n);
    for r in 0..n {
        let (cx, rr) = (col(g.xcol()[r]), row(r));
        ocol[rr] = col(g.ocol()[r]);
        if split[r] {
            xcol[rr] = cx + 1;
            xcol[rr + 1] = cx;
            ocol[rr + 1] = cx + 1;
            bends.push((rr, Some(rr + 1)));
        } else {
            xcol[rr] = cx;
            bends.push((rr, None));
        }
    }
    (GridDiagram::from_valid(xcol, ocol), bends)
}

/// Levels for the fully doubled grid: horizontal parts fill the bottom
/// half, highest row lowest; vertical parts fill the top half, leftmost
/// column highest.
fn doubled_heights(g: &GridDiagram, parts: &[(usize, Option<usize>)]) -> Vec<usize> {
    let n = parts.len();
    let d = g.size();
    let mut h = vec![0; d];
    let mut horizontal: Vec<usize> = parts.iter().map(|&(hr, _)| hr).collect();
    horizontal.sort_unstable_by(|a, b| b.cmp(a));
    for (level, &r) in horizontal.iter().enumerate() {
        h[r] = level;
    }
    let mut vertical: Vec<usize> = parts.iter().filter_map(|&(_, v)| v).collect();
    vertical.sort_unstable_by_key(|&r| std::cmp::Reverse(g.xcol()[r]));
    for (k, &r) in vertical.iter().enumerate() {
        h[r] = n + k;
    }
    h
}

/// Search nodes spent on each attempt before another bend is split.
const ATTEMPT_BUDGET: u64 = 200_000;

/// A cube diagram whose z-projection is `g` after left-hand Legendrian
/// stabilizations. Bends taking part in an obstruction are stabilized one
/// at a time until a lift exists; stabilizing every bend always lifts.
pub fn lift_with_stabilizations(g: &GridDiagram) -> Result<CubeDiagram, GridError> {
    g.require_knot()?;
    let n = g.size();
    let mut split = vec![false; n];
    loop {
        let (d, parts) = partial_double(g, &split);
        if split.iter().all(|&s| s) {
            let cube = build_lift(&d, &doubled_heights(&d, &parts));
            debug_assert!(cube.is_valid(), "doubled lift invalid for\n{g}");
            return Ok(cube);
        }
        if let Some(Some(a)) = find_heights_bounded(&d, ATTEMPT_BUDGET) {
            return Ok(build_lift(&d, &a.h));
        }
        let original = |bend: usize| parts.iter().position(|&(hr, v)| hr == bend || v == Some(bend));
        let culprits: Vec<usize> = match BendOrder::of(&d).cycle() {
            Some(cycle) => cycle,
            None => detect_type_configurations(&d).iter().map(|m| m.bend).collect(),
        };
        let next = culprits
            .into_iter()
            .filter_map(original)
            .find(|&r| !split[r])
            .or_else(|| split.iter().position(|&s| !s))
            .expect("some row is unsplit");
        split[next] = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Axis;
    use crate::grid::{Corner, MarkingKind};
    use crate::knot_id::{canonical_kmax_grid, canonical_kmin_grid};
    use crate::legendrian::stabilize;

    fn unknot() -> GridDiagram {
        GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap()
    }

    #[test]
    fn unknot_lifts_both_ways() {
        let g = unknot();
        assert_eq!(lift_search_count(&g), 2);
        for h in [vec![0, 1], vec![1, 0]] {
            let c = lift_with_heights(&g, &LiftAssignment::new(h).unwrap()).unwrap();
            assert_eq!(c.project(Axis::Z).unwrap(), g);
        }
    }

    #[test]
    fn assignment_must_be_bijective() {
        assert!(LiftAssignment::new(vec![0, 0]).is_err());
        assert!(LiftAssignment::new(vec![0, 2]).is_err());
    }

    #[test]
    fn incompatible_assignment_fails_in_xy_projection() {
        let g = canonical_kmax_grid(3).unwrap();
        let order = partial_order(&g).unwrap();
        let &(a, b) = order.relation.iter().next().unwrap();
        let mut h: Vec<usize> = (0..g.size()).collect();
        if h[a] > h[b] {
            h.swap(a, b);
        }
        let err = lift_with_heights(&g, &LiftAssignment::new(h).unwrap()).unwrap_err();
        assert!(matches!(
            err,
            LiftError::Violation(CubeViolation::Crossing { projection: Axis::Z, .. })
        ));
    }

    #[test]
    fn kmin_3_order_is_cyclic() {
        let g = canonical_kmin_grid(3).unwrap();
        let cycle = partial_order(&g).unwrap_err().cycle;
        let order = BendOrder::of(&g);
        for k in 0..cycle.len() {
            assert!(order.relation.contains(&(cycle[k], cycle[(k + 1) % cycle.len()])));
        }
        assert_eq!(lift_search_count(&g), 0);
    }

    #[test]
    fn kmin_5_has_no_lift_and_type_one_match() {
        let g = canonical_kmin_grid(5).unwrap();
        assert!(lift_search_first(&g).is_none());
        assert!(detect_type_configurations(&g).iter().any(|m| m.config == ConfigType::One));
    }

    #[test]
    fn kmax_lifts() {
        for p in [3, 5, 7] {
            let g = canonical_kmax_grid(p).unwrap();
            let c = lift_search_first(&g).unwrap();
            assert!(c.is_valid());
            assert_eq!(c.project(Axis::Z).unwrap(), g);
        }
    }

    #[test]
    fn single_split_is_a_stabilization() {
        let g = canonical_kmin_grid(3).unwrap();
        for r in 0..g.size() {
            let mut split = vec![false; g.size()];
            split[r] = true;
            let (d, _) = partial_double(&g, &split);
            assert_eq!(d, stabilize(&g, MarkingKind::X, r, Corner::SW).unwrap());
        }
    }

    #[test]
    fn stabilized_lifts_are_valid() {
        for p in [3, 5] {
            let g = canonical_kmin_grid(p).unwrap();
            let c = lift_with_stabilizations(&g).unwrap();
            assert!(c.is_valid());
            assert!(c.size() > g.size());
        }
        let u = unknot();
        assert_eq!(lift_with_stabilizations(&u).unwrap().size(), 2);
    }

    #[test]
    fn fully_doubled_lift_is_valid() {
        let g = canonical_kmin_grid(5).unwrap();
        let (d, parts) = partial_double(&g, &vec![true; g.size()]);
        assert!(build_lift(&d, &doubled_heights(&d, &parts)).is_valid());
    }
}
