//! Knot-type fingerprints (Kauffman bracket, Jones polynomial) and the
//! canonical grids and cubes for left-hand (p,2) torus knots.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::CubeDiagram;
use crate::grid::{GridDiagram, GridError};
use crate::laurent::LaurentPoly;
use crate::lifting::lift_search_first;

/// Largest crossing count accepted by [`kauffman_bracket`].
pub const CROSSING_BUDGET: usize = 30;

/// Above this many crossings the bracket is computed by a frontier sweep
/// instead of the plain sum over all smoothings.
pub const PLAIN_STATE_SUM_MAX: usize = 12;

#[derive(Debug, Error)]
pub enum KnotIdError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{count} crossings exceed the state-sum budget of {max}")]
    CrossingBudget { count: usize, max: usize },
    #[error("p must be odd and at least 3, got {0}")]
    InvalidP(usize),
}

fn check_p(p: usize) -> Result<(), KnotIdError> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(KnotIdError::InvalidP(p));
    }
    Ok(())
}

const N: usize = 0;
const E: usize = 1;
const S: usize = 2;
const W: usize = 3;

/// Crossing ports and the arcs joining them. Port `4*i + d` is side `d`
/// (N, E, S, W) of crossing `i`; `partner[port]` is the port at the other
/// end of its arc.
struct PortGraph {
    crossings: usize,
    partner: Vec<usize>,
}

fn port_graph(g: &GridDiagram) -> PortGraph {
    let n = g.size();
    let mut crossings = g.crossings();
    crossings.sort_by_key(|c| (c.col, c.row));
    let mut index = vec![usize::MAX; n * n];
    for (i, c) in crossings.iter().enumerate() {
        index[c.col * n + c.row] = i;
    }
    // (crossing, entering port, leaving port) in traversal order
    let mut events = Vec::with_capacity(2 * crossings.len());
    let mut r = 0;
    for _ in 0..n {
        let c = g.xcol()[r];
        let r2 = g.o_row(c);
        if r2 > r {
            for rr in r + 1..r2 {
                if index[c * n + rr] != usize::MAX {
                    events.push((index[c * n + rr], S, N));
                }
            }
        } else {
            for rr in (r2 + 1..r).rev() {
                if index[c * n + rr] != usize::MAX {
                    events.push((index[c * n + rr], N, S));
                }
            }
        }
        let (from, to) = g.horizontal(r2);
        if to > from {
            for cc in from + 1..to {
                if index[cc * n + r2] != usize::MAX {
                    events.push((index[cc * n + r2], W, E));
                }
            }
        } else {
            for cc in (to + 1..from).rev() {
                if index[cc * n + r2] != usize::MAX {
                    events.push((index[cc * n + r2], E, W));
                }
            }
        }
        r = r2;
    }
    let mut partner = vec![usize::MAX; 4 * crossings.len()];
    for k in 0..events.len() {
        let (a, _, leave) = events[k];
        let (b, enter, _) = events[(k + 1) % events.len()];
        partner[4 * a + leave] = 4 * b + enter;
        partner[4 * b + enter] = 4 * a + leave;
    }
    PortGraph { crossings: crossings.len(), partner }
}

/// Port paired with `d` by the A-smoothing (`b = false`) or B-smoothing.
fn smoothing_mate(d: usize, b: bool) -> usize {
    match (d, b) {
        (N, false) => E,
        (E, false) => N,
        (S, false) => W,
        (W, false) => S,
        (N, true) => W,
        (W, true) => N,
        (S, true) => E,
        _ => S,
    }
}

/// `Σ A^e d^(loops-1)` over a table of `(e, loops)` counts.
fn assemble_bracket(table: &HashMap<(i32, u32), i64>) -> LaurentPoly {
    let d = LaurentPoly::from_terms([(-1, 2), (-1, -2)]);
    let max_loops = table.keys().map(|&(_, l)| l).max().unwrap_or(1);
    let powers: Vec<LaurentPoly> = (0..max_loops).map(|k| d.pow(k)).collect();
    let mut out = LaurentPoly::zero();
    for (&(e, loops), &c) in table {
        let term = &LaurentPoly::monomial(c, e) * &powers[loops as usize - 1];
        out = &out + &term;
    }
    out
}

fn bracket_plain(pg: &PortGraph) -> LaurentPoly {
    let c = pg.crossings;
    let ports = 4 * c;
    let mut table: HashMap<(i32, u32), i64> = HashMap::new();
    let mut seen = vec![false; ports];
    for state in 0u64..(1u64 << c) {
        seen.iter_mut().for_each(|s| *s = false);
        let mut loops = 0;
        for start in 0..ports {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut x = start;
            loop {
                seen[x] = true;
                let b = (state >> (x / 4)) & 1 == 1;
                let y = 4 * (x / 4) + smoothing_mate(x % 4, b);
                seen[y] = true;
                x = pg.partner[y];
                if x == start {
                    break;
                }
            }
        }
        let nb = state.count_ones() as i32;
        *table.entry((c as i32 - 2 * nb, loops)).or_insert(0) += 1;
    }
    assemble_bracket(&table)
}

/// Sweep over crossings in order; a state is the pairing of the open
/// ports of the processed crossings through the smoothed part.
fn bracket_sweep(pg: &PortGraph) -> LaurentPoly {
    type Pairing = Vec<(u16, u16)>;
    let c = pg.crossings;
    let ports = 4 * c;
    let mut states: HashMap<Pairing, HashMap<(i32, u32), i64>> = HashMap::new();
    states.insert(Vec::new(), HashMap::from([((0, 0), 1)]));
    let mut mate = vec![usize::MAX; ports];
    let mut visited = vec![false; ports];
    for i in 0..c {
        let processed = |port: usize| port / 4 <= i;
        let mut next: HashMap<Pairing, HashMap<(i32, u32), i64>> = HashMap::new();
        for (pairing, weights) in &states {
            for &(a, b) in pairing {
                mate[a as usize] = b as usize;
                mate[b as usize] = a as usize;
            }
            for smoothing in [false, true] {
                let step = |x: usize| {
                    if x / 4 == i {
                        4 * i + smoothing_mate(x % 4, smoothing)
                    } else {
                        mate[x]
                    }
                };
                let mut ends: Vec<usize> = pairing
                    .iter()
                    .flat_map(|&(a, b)| [a as usize, b as usize])
                    .filter(|&p| !processed(pg.partner[p]))
                    .collect();
                ends.extend((4 * i..4 * i + 4).filter(|&p| !processed(pg.partner[p])));
                let mut new_pairing: Pairing = Vec::with_capacity(ends.len() / 2);
                for &e in &ends {
                    if visited[e] {
                        continue;
                    }
                    let mut x = e;
                    loop {
                        visited[x] = true;
                        let y = step(x);
                        visited[y] = true;
                        if !processed(pg.partner[y]) {
                            new_pairing.push((e.min(y) as u16, e.max(y) as u16));
                            break;
                        }
                        x = pg.partner[y];
                    }
                }
                let mut closed = 0;
                for q in 4 * i..4 * i + 4 {
                    if visited[q] {
                        continue;
                    }
                    closed += 1;
                    let mut x = q;
                    loop {
                        visited[x] = true;
                        let y = step(x);
                        visited[y] = true;
                        x = pg.partner[y];
                        if x == q {
                            break;
                        }
                    }
                }
                for &(a, b) in pairing {
                    visited[a as usize] = false;
                    visited[b as usize] = false;
                }
                for q in 4 * i..4 * i + 4 {
                    visited[q] = false;
                }
                new_pairing.sort_unstable();
                let shift = if smoothing { -1 } else { 1 };
                let slot = next.entry(new_pairing).or_default();
                for (&(e, loops), &w) in weights {
                    *slot.entry((e + shift, loops + closed)).or_insert(0) += w;
                }
            }
        }
        states = next;
    }
    let table = states.remove(&Vec::new()).unwrap_or_default();
    assemble_bracket(&table)
}

/// Kauffman bracket `<D>` in the variable `A`, normalized so a crossingless
/// circle is 1.
pub fn kauffman_bracket(g: &GridDiagram) -> Result<LaurentPoly, KnotIdError> {
    g.require_knot()?;
    let count = g.crossings().len();
    if count > CROSSING_BUDGET {
        return Err(KnotIdError::CrossingBudget { count, max: CROSSING_BUDGET });
    }
    Ok(bracket_unchecked(g))
}

pub(crate) fn bracket_unchecked(g: &GridDiagram) -> LaurentPoly {
    let pg = port_graph(g);
    if pg.crossings == 0 {
        LaurentPoly::one()
    } else if pg.crossings <= PLAIN_STATE_SUM_MAX {
        bracket_plain(&pg)
    } else {
        bracket_sweep(&pg)
    }
}

/// Jones polynomial in `q = t^(1/2)`: exponent `e` stands for `t^(e/2)`.
pub fn jones(g: &GridDiagram) -> Result<LaurentPoly, KnotIdError> {
    let bracket = kauffman_bracket(g)?;
    Ok(jones_from_bracket(&bracket, g.writhe_unchecked()))
}

/// `(-A)^(-3w) <D>` with `A^k ↦ q^(-k/2)`.
pub fn jones_from_bracket(bracket: &LaurentPoly, writhe: i64) -> LaurentPoly {
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let f = &LaurentPoly::monomial(sign, -3 * writhe as i32) * bracket;
    f.divide_exponents(-2)
        .expect("bracket of a knot has exponents congruent mod 4")
}

/// Reference Jones polynomial of the left-hand (p,2) torus knot, in the
/// doubled-exponent variable of [`jones`].
pub fn left_torus_jones(p: usize) -> Result<LaurentPoly, KnotIdError> {
    check_p(p)?;
    let k = (p as i32 - 1) / 2;
    let mut right = LaurentPoly::monomial(1, k);
    for j in k + 2..=3 * k + 1 {
        right.add_term(if (j - k) % 2 == 0 { 1 } else { -1 }, j);
    }
    Ok(right.scale_exponents(-2))
}

/// Size-(p+2) grid of the left-hand (p,2) torus knot with left-hand
/// invariants `(tb, rot) = (-2p, 2-p)`.
pub fn canonical_kmin_grid(p: usize) -> Result<GridDiagram, KnotIdError> {
    check_p(p)?;
    let n = p + 2;
    let xcol = (0..n).collect();
    let ocol = (0..n).map(|r| (r + 2) % n).collect();
    Ok(GridDiagram::from_valid(xcol, ocol))
}

/// Size-(p+2) grid of the left-hand (p,2) torus knot with left-hand
/// invariants `(tb, rot) = (-2p, p-2)`.
pub fn canonical_kmax_grid(p: usize) -> Result<GridDiagram, KnotIdError> {
    check_p(p)?;
    let n = p + 2;
    let xcol = (0..n).map(|r| (r + 1) % n).collect();
    let ocol = (0..n).map(|r| (r + n - 1) % n).collect();
    Ok(GridDiagram::from_valid(xcol, ocol))
}

/// A size-(p+2) cube diagram lifting [`canonical_kmax_grid`]. The witness
/// is found once per `p` and cached.
///
/// # Panics
///
/// Panics if no lift exists, which would contradict the known upper bound
/// for this Legendrian class.
pub fn kmax_cube(p: usize) -> Result<CubeDiagram, KnotIdError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, CubeDiagram>>> = OnceLock::new();
    let g = canonical_kmax_grid(p)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&p) {
        return Ok(c.clone());
    }
    let cube = lift_search_first(&g)
        .unwrap_or_else(|| panic!("canonical K_max grid for p={p} has no lift"));
    cache.lock().unwrap().insert(p, cube.clone());
    Ok(cube)
}

/// A Legendrian class of the left-hand (p,2) torus knot at maximal tb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LegendrianClassSpec {
    pub p: usize,
    pub tb: i64,
    pub rot: i64,
}

impl LegendrianClassSpec {
    /// The class with rotation number `rot`, if it exists for `p`.
    pub fn new(p: usize, rot: i64) -> Result<Self, KnotIdError> {
        let classes = legendrian_classes(p)?;
        classes
            .into_iter()
            .find(|c| c.rot == rot)
            .ok_or(KnotIdError::InvalidP(p))
    }

    /// Grid size at which the class first has grid diagrams.
    pub fn minimal_size(&self) -> usize {
        self.p + 2
    }
}

pub fn legendrian_classes(p: usize) -> Result<BTreeSet<LegendrianClassSpec>, KnotIdError> {
    check_p(p)?;
    let tb = -2 * p as i64;
    let mut out = BTreeSet::new();
    let mut t = 0;
    while 2 * t < p - 2 {
        let r = p as i64 - 2 - 4 * t as i64;
        out.insert(LegendrianClassSpec { p, tb, rot: r });
        out.insert(LegendrianClassSpec { p, tb, rot: -r });
        t += 1;
    }
    Ok(out)
}
