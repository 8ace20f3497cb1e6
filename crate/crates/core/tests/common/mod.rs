//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cubeknot::lifting::build_lift;
use cubeknot::GridDiagram;
use rand::seq::SliceRandom;
use rand::Rng;

/// A uniformly random single-component grid of size `n`.
pub fn random_knot<R: Rng>(rng: &mut R, n: usize) -> GridDiagram {
    loop {
        let mut x: Vec<usize> = (0..n).collect();
        let mut o: Vec<usize> = (0..n).collect();
        x.shuffle(rng);
        o.shuffle(rng);
        if let Ok(g) = GridDiagram::new(x, o) {
            if g.is_knot() {
                return g;
            }
        }
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of height bijections whose lift passes full cube validation.
pub fn naive_lift_count(g: &GridDiagram) -> u64 {
    permutations(g.size())
        .into_iter()
        .filter(|h| build_lift(g, h).is_valid())
        .count() as u64
}

/// Jones polynomial by brute-force Kauffman state sum, written directly
/// from the permutation arrays. Keys are exponents of `t^(1/2)`.
pub fn oracle_jones(xcol: &[usize], ocol: &[usize]) -> BTreeMap<i32, i64> {
    let n = xcol.len();
    let mut orow = vec![0; n];
    for (r, &c) in ocol.iter().enumerate() {
        orow[c] = r;
    }
    // verticals (col, from, to), horizontals (row, from, to)
    let verts: Vec<(usize, usize, usize)> = (0..n).map(|r| (xcol[r], r, orow[xcol[r]])).collect();
    let hors: Vec<(usize, usize, usize)> = (0..n).map(|r| (r, ocol[r], xcol[r])).collect();
    let inside = |v: usize, a: usize, b: usize| a.min(b) < v && v < a.max(b);
    let mut crossings = Vec::new();
    for &(c, a, b) in &verts {
        for &(r, p, q) in &hors {
            if inside(r, a, b) && inside(c, p, q) {
                let up = b > a;
                let right = q > p;
                crossings.push((c, r, if up != right { 1i32 } else { -1 }));
            }
        }
    }
    let writhe: i32 = crossings.iter().map(|c| c.2).sum();
    let idx = |c: usize, r: usize| crossings.iter().position(|x| x.0 == c && x.1 == r);
    // ports: 0 N, 1 E, 2 S, 3 W; events along the knot
    let mut events: Vec<(usize, usize, usize)> = Vec::new();
    let mut r = 0;
    for _ in 0..n {
        let c = xcol[r];
        let r2 = orow[c];
        let rows: Vec<usize> = if r2 > r { (r + 1..r2).collect() } else { (r2 + 1..r).rev().collect() };
        for rr in rows {
            if let Some(i) = idx(c, rr) {
                events.push(if r2 > r { (i, 2, 0) } else { (i, 0, 2) });
            }
        }
        let (from, to) = (ocol[r2], xcol[r2]);
        let cols: Vec<usize> = if to > from { (from + 1..to).collect() } else { (to + 1..from).rev().collect() };
        for cc in cols {
            if let Some(i) = idx(cc, r2) {
                events.push(if to > from { (i, 3, 1) } else { (i, 1, 3) });
            }
        }
        r = r2;
    }
    let k = crossings.len();
    let mut bracket: BTreeMap<i32, i64> = BTreeMap::new();
    if k == 0 {
        bracket.insert(0, 1);
    }
    for state in 0u32..(1u32 << k) {
        let mut parent: Vec<usize> = (0..4 * k).collect();
        fn find(p: &mut [usize], mut u: usize) -> usize {
            while p[u] != u {
                u = p[u];
            }
            u
        }
        let union = |p: &mut [usize], a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra] = rb;
        };
        for e in 0..events.len() {
            let (a, _, out) = events[e];
            let (b, inn, _) = events[(e + 1) % events.len()];
            union(&mut parent, 4 * a + out, 4 * b + inn);
        }
        let mut na = 0i32;
        for i in 0..k {
            if state >> i & 1 == 0 {
                union(&mut parent, 4 * i, 4 * i + 1);
                union(&mut parent, 4 * i + 2, 4 * i + 3);
                na += 1;
            } else {
                union(&mut parent, 4 * i, 4 * i + 3);
                union(&mut parent, 4 * i + 2, 4 * i + 1);
            }
        }
        let loops = (0..4 * k).filter(|&u| find(&mut parent, u) == u).count();
        // A^(na-nb) (-A^2 - A^-2)^(loops-1)
        let mut term: BTreeMap<i32, i64> = BTreeMap::from([(na - (k as i32 - na), 1)]);
        for _ in 1..loops {
            let mut next = BTreeMap::new();
            for (&e, &c) in &term {
                *next.entry(e + 2).or_insert(0) -= c;
                *next.entry(e - 2).or_insert(0) -= c;
            }
            term = next;
        }
        for (e, c) in term {
            *bracket.entry(e).or_insert(0) += c;
        }
    }
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let mut out = BTreeMap::new();
    for (e, c) in bracket {
        if c != 0 {
            let a_exp = e - 3 * writhe;
            assert_eq!(a_exp % 2, 0);
            out.insert(-a_exp / 2, sign * c);
        }
    }
    out
}

/// Rotation numbers `±(p-2-4t)` for integers `0 ≤ t < (p-2)/2`.
pub fn rotation_set(p: i64) -> Vec<i64> {
    let mut out: Vec<i64> = (0..)
        .take_while(|&t| 2 * t < p - 2)
        .flat_map(|t| [p - 2 - 4 * t, -(p - 2 - 4 * t)])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}
