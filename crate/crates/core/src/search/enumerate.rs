use std::ops::Range;
use std::sync::OnceLock;

use super::{GridFilter, SearchError};
use crate::grid::{component_count, writhe_of, GridDiagram};
use crate::knot_id::{bracket_unchecked, jones_from_bracket};
use crate::legendrian::front_invariants_unchecked;

pub const MAX_ENUMERATION_SIZE: usize = 9;

pub fn permutation_count(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// All permutations of `0..n` in lexicographic order, flattened, together
/// with their inverses.
struct PermTable {
    n: usize,
    perms: Vec<usize>,
    inverses: Vec<usize>,
}

impl PermTable {
    fn build(n: usize) -> Self {
        let mut perms = Vec::with_capacity(n * permutation_count(n) as usize);
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            perms.extend_from_slice(&p);
            if !next_permutation(&mut p) {
                break;
            }
        }
        let mut inverses = vec![0; perms.len()];
        for (k, chunk) in perms.chunks(n.max(1)).enumerate() {
            for (i, &v) in chunk.iter().enumerate() {
                inverses[k * n + v] = i;
            }
        }
        Self { n, perms, inverses }
    }

    fn get(&self, k: usize) -> (&[usize], &[usize]) {
        let r = k * self.n..(k + 1) * self.n;
        (&self.perms[r.clone()], &self.inverses[r])
    }

    fn len(&self) -> usize {
        self.perms.len() / self.n.max(1)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn table(n: usize) -> &'static PermTable {
    static TABLES: [OnceLock<PermTable>; MAX_ENUMERATION_SIZE + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATION_SIZE + 1];
    TABLES[n].get_or_init(|| PermTable::build(n))
}

/// Visits, in lexicographic order of `(xcol, ocol)`, every valid grid of
/// size `filter.size` passing `filter` whose X permutation has rank in
/// `ranks`. Returns the number visited.
pub fn enumerate_ranks<F>(filter: &GridFilter, ranks: Range<u64>, mut visit: F) -> u64
where
    F: FnMut(u64, &GridDiagram),
{
    let n = filter.size;
    assert!(n <= MAX_ENUMERATION_SIZE, "grid size {n} over budget");
    let t = table(n);
    let needs_knot = filter.needs_knot();
    let mut visited = 0;
    for rank in ranks.start..ranks.end.min(t.len() as u64) {
        let (xcol, xrow) = t.get(rank as usize);
        for k in 0..t.len() {
            let (ocol, orow) = t.get(k);
            if (0..n).any(|r| xcol[r] == ocol[r]) && n > 1 {
                continue;
            }
            if needs_knot && component_count(xcol, orow) != 1 {
                continue;
            }
            if let Some((lo, hi)) = filter.writhe_range {
                let w = writhe_of(xcol, ocol, xrow, orow);
                if w < lo || w > hi {
                    continue;
                }
            }
            let g = GridDiagram::from_valid(xcol.to_vec(), ocol.to_vec());
            if filter.tb.is_some() || filter.rot.is_some() {
                let f = front_invariants_unchecked(&g, filter.hand);
                if filter.tb.is_some_and(|tb| tb != f.tb) || filter.rot.is_some_and(|r| r != f.rot) {
                    continue;
                }
            }
            if let Some(j) = &filter.jones_ref {
                if &jones_from_bracket(&bracket_unchecked(&g), g.writhe_unchecked()) != j {
                    continue;
                }
            }
            visited += 1;
            visit(rank, &g);
        }
    }
    visited
}

/// Visits every valid grid of size `filter.size` passing `filter`, in
/// lexicographic order of `(xcol, ocol)`.
pub fn enumerate_grids<F>(filter: &GridFilter, visit: F) -> Result<u64, SearchError>
where
    F: FnMut(u64, &GridDiagram),
{
    if filter.size > MAX_ENUMERATION_SIZE {
        return Err(SearchError::Budget(filter.size));
    }
    Ok(enumerate_ranks(filter, 0..permutation_count(filter.size), visit))
}
