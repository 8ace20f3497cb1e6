//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every check is exact integer equality unless a time limit is stated;
//! the time limits are the constants below.

mod common;

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cubeknot::grid::MarkingKind;
use cubeknot::knot_id::{canonical_kmax_grid, canonical_kmin_grid, jones, kmax_cube, legendrian_classes};
use cubeknot::legendrian::{check_bend_identities, front_invariants, is_legendrian_preserving, stabilize, Hand};
use cubeknot::lifting::{detect_type_configurations, lift_search_count, lift_search_first};
use cubeknot::search::{
    read_experiment, run_experiment, Conclusion, ExperimentOptions, LiftResult, SearchError,
};
use cubeknot::{Axis, Corner, CubeDiagram, GridDiagram, LegendrianClassSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{naive_lift_count, oracle_jones, random_knot, rotation_set};

const KMAX_LIMIT: Duration = Duration::from_secs(10);
const KMIN_LIMIT: Duration = Duration::from_secs(2 * 3600);
const TREFOIL_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_LIFTABLE: usize = 10_000;
const RANDOM_ORACLE_N5: usize = 1_000;
const RANDOM_STABILIZATIONS: usize = 1_000;
const SEED: u64 = 0x5eed_cafe;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn jones_map(g: &GridDiagram) -> Vec<(i32, i64)> {
    jones(g).unwrap().terms().collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for p in [3usize, 5, 7] {
        let c = kmax_cube(p).map_err(|e| e.to_string())?;
        ensure(c.size() == p + 2, || format!("p={p}: size {}", c.size()))?;
        let report = c.validate();
        ensure(report.is_ok(), || format!("p={p}: {report}"))?;
        let z = c.project(Axis::Z).map_err(|e| e.to_string())?;
        let f = front_invariants(&z, Hand::Left).unwrap();
        let want = (-2 * p as i64, p as i64 - 2);
        ensure((f.tb, f.rot) == want, || format!("p={p}: (tb, rot) = ({}, {})", f.tb, f.rot))?;
        let reference = canonical_kmax_grid(p).unwrap();
        ensure(jones(&z).unwrap() == jones(&reference).unwrap(), || format!("p={p}: Jones differs"))?;
        if p <= 5 {
            let oracle: Vec<(i32, i64)> = oracle_jones(z.xcol(), z.ocol()).into_iter().collect();
            ensure(jones_map(&z) == oracle, || format!("p={p}: Jones differs from state sum"))?;
        }
    }
    let t = start.elapsed();
    ensure(t < KMAX_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("p=3,5,7 cubes valid, invariants exact, {t:.2?}"))
}

struct KminRun {
    grids: Vec<GridDiagram>,
    records: Vec<cubeknot::search::SearchRecord>,
}

fn kmin_run(dir: &std::path::Path) -> Result<(KminRun, String), String> {
    let spec = LegendrianClassSpec::new(5, -3).unwrap();
    let out = dir.join("kmin5.jsonl");
    let opts = ExperimentOptions { jobs: jobs(), ..Default::default() };
    let start = Instant::now();
    let report = run_experiment(&spec, 7, &out, &opts).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let parsed = read_experiment(&out).map_err(|e| e.to_string())?;
    let grids = parsed
        .records
        .iter()
        .map(|r| r.grid.parse::<GridDiagram>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    ensure(report.candidates > 0, || "no K_min candidates".into())?;
    ensure(report.lifted == 0, || format!("{} candidates lifted", report.lifted))?;
    ensure(report.bound_conclusion == Conclusion::GreaterThan(7), || {
        format!("conclusion {}", report.bound_conclusion)
    })?;
    ensure(parsed.records.len() as u64 == report.candidates, || "record count mismatch".into())?;
    ensure(t < KMIN_LIMIT, || format!("took {t:?}"))?;
    let detail = format!(
        "{} candidates, 0 lifted, {} with {} jobs",
        report.candidates,
        report.bound_conclusion,
        opts.jobs
    );
    Ok((KminRun { grids, records: parsed.records }, format!("{detail}, {t:.1?}")))
}

fn criterion_3(dir: &std::path::Path) -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for rot in [1, -1] {
        let spec = LegendrianClassSpec::new(3, rot).unwrap();
        let out = dir.join(format!("trefoil{rot}.jsonl"));
        let report = run_experiment(&spec, 5, &out, &ExperimentOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(report.lifted > 0, || format!("rot={rot}: nothing lifted"))?;
        ensure(report.bound_conclusion == Conclusion::AtMost(5), || {
            format!("rot={rot}: {}", report.bound_conclusion)
        })?;
        parts.push(format!("rot={rot}: {}/{} lifted", report.lifted, report.candidates));
    }
    let t = start.elapsed();
    ensure(t < TREFOIL_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{}, {t:.1?}", parts.join(", ")))
}

fn criterion_4(run: &KminRun) -> Outcome {
    for g in &run.grids {
        let r = check_bend_identities(g, 5).unwrap();
        ensure(r.all_ok(), || format!("identities fail on\n{g}{r:?}"))?;
        let w = g.writhe().unwrap();
        ensure((-7..-3).contains(&w), || format!("writhe {w} out of bounds on\n{g}"))?;
    }
    Ok(format!("{} candidates, 0 violations", run.grids.len()))
}

fn criterion_5(run: &KminRun) -> Outcome {
    let mut fired = 0;
    for (g, rec) in run.grids.iter().zip(&run.records) {
        if !detect_type_configurations(g).is_empty() {
            fired += 1;
            ensure(rec.lift_result == LiftResult::None, || format!("detector fired on liftable\n{g}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut liftable, mut tried, mut fired_random) = (0, 0, 0);
    while liftable < RANDOM_LIFTABLE {
        let n = rng.gen_range(2..=7);
        let g = random_knot(&mut rng, n);
        tried += 1;
        let matches = detect_type_configurations(&g);
        match lift_search_first(&g) {
            Some(cube) => {
                liftable += 1;
                ensure(matches.is_empty(), || format!("detector fired on liftable\n{g}"))?;
                for axis in Axis::ALL {
                    let proj = cube.project(axis).unwrap();
                    ensure(detect_type_configurations(&proj).is_empty(), || {
                        format!("detector fired on {axis}-projection of\n{cube}")
                    })?;
                }
            }
            None => fired_random += !matches.is_empty() as usize,
        }
    }
    Ok(format!(
        "K_min population: {fired}/{} fire, none lift; {liftable} random liftable grids \
         ({tried} tried, {fired_random} unliftable caught): 0 counterexamples",
        run.grids.len()
    ))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for n in 2..=4 {
        for x in common::permutations(n) {
            for o in common::permutations(n) {
                let Ok(g) = GridDiagram::new(x.clone(), o) else { continue };
                if !g.is_knot() {
                    continue;
                }
                let (fast, naive) = (lift_search_count(&g), naive_lift_count(&g));
                ensure(fast == naive, || format!("count {fast} vs naive {naive} on\n{g}"))?;
                checked += 1;
            }
        }
    }
    let exhaustive = checked;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for _ in 0..RANDOM_ORACLE_N5 {
        let g = random_knot(&mut rng, 5);
        let (fast, naive) = (lift_search_count(&g), naive_lift_count(&g));
        ensure(fast == naive, || format!("count {fast} vs naive {naive} on\n{g}"))?;
    }
    Ok(format!("{exhaustive} knots with n<=4 and {RANDOM_ORACLE_N5} random n=5 agree"))
}

fn criterion_7() -> Outcome {
    for p in [3usize, 5, 7, 9] {
        let tb = -2 * p as i64;
        let lo = front_invariants(&canonical_kmin_grid(p).unwrap(), Hand::Left).unwrap();
        let hi = front_invariants(&canonical_kmax_grid(p).unwrap(), Hand::Left).unwrap();
        ensure((lo.tb, lo.rot) == (tb, 2 - p as i64), || format!("p={p} kmin ({}, {})", lo.tb, lo.rot))?;
        ensure((hi.tb, hi.rot) == (tb, p as i64 - 2), || format!("p={p} kmax ({}, {})", hi.tb, hi.rot))?;
        let classes = legendrian_classes(p).unwrap();
        let rots: Vec<i64> = classes.iter().map(|c| c.rot).collect();
        ensure(rots == rotation_set(p as i64), || format!("p={p}: rotation set {rots:?}"))?;
        ensure(classes.iter().all(|c| c.tb == tb), || format!("p={p}: tb"))?;
    }
    let trefoil = canonical_kmin_grid(3).unwrap();
    let lib = jones(&trefoil).unwrap();
    let oracle: Vec<(i32, i64)> = oracle_jones(trefoil.xcol(), trefoil.ocol()).into_iter().collect();
    ensure(lib.terms().collect::<Vec<_>>() == oracle, || format!("trefoil Jones {lib}"))?;
    ensure(lib.to_string() == "-1*q^-8 + 1*q^-6 + 1*q^-2", || format!("trefoil Jones {lib}"))?;
    Ok("p=3,5,7,9 canonical invariants and rotation sets exact; trefoil Jones = state sum".into())
}

fn criterion_8(dir: &std::path::Path) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let preserving: Vec<Corner> =
        Corner::ALL.into_iter().filter(|&k| is_legendrian_preserving(MarkingKind::X, k, Hand::Left)).collect();
    for _ in 0..RANDOM_STABILIZATIONS {
        let n = rng.gen_range(2..=7);
        let g = random_knot(&mut rng, n);
        let marking = if rng.gen_bool(0.5) { MarkingKind::X } else { MarkingKind::O };
        let kind = preserving[rng.gen_range(0..preserving.len())];
        let row = rng.gen_range(0..g.size());
        let s = stabilize(&g, marking, row, kind).map_err(|e| e.to_string())?;
        let (a, b) = (front_invariants(&g, Hand::Left).unwrap(), front_invariants(&s, Hand::Left).unwrap());
        ensure((a.tb, a.rot) == (b.tb, b.rot), || format!("{marking} {kind} row {row} changes tb/rot of\n{g}"))?;
        ensure(jones(&g).unwrap() == jones(&s).unwrap(), || format!("stabilization changes Jones of\n{g}"))?;
        let text = g.to_text();
        ensure(text.parse::<GridDiagram>().unwrap().to_text() == text, || format!("grid round trip\n{text}"))?;
        if let Some(c) = lift_search_first(&s) {
            let text = c.to_text();
            let back: CubeDiagram = text.parse().map_err(|e: cubeknot::cube::ParseCubeError| e.to_string())?;
            ensure(back == c && back.to_text() == text, || format!("cube round trip\n{text}"))?;
        }
    }

    let spec = LegendrianClassSpec::new(3, 1).unwrap();
    let serial = dir.join("serial.jsonl");
    let parallel = dir.join("parallel.jsonl");
    let resumed = dir.join("resumed.jsonl");
    let ckpt = dir.join("resumed.ckpt");
    let run = |out: &std::path::Path, opts: ExperimentOptions| run_experiment(&spec, 5, out, &opts);
    run(&serial, ExperimentOptions { jobs: 1, batch: 7, ..Default::default() }).map_err(|e| e.to_string())?;
    run(&parallel, ExperimentOptions { jobs: 4, batch: 13, ..Default::default() }).map_err(|e| e.to_string())?;
    let interrupted = ExperimentOptions {
        jobs: 2,
        batch: 10,
        checkpoint: Some(ckpt.clone()),
        stop_after: Some(60),
        ..Default::default()
    };
    match run(&resumed, interrupted) {
        Err(SearchError::Interrupted { .. }) => {}
        other => return Err(format!("expected interruption, got {other:?}")),
    }
    let resume = ExperimentOptions { jobs: 3, batch: 10, checkpoint: Some(ckpt), resume: true, ..Default::default() };
    run(&resumed, resume).map_err(|e| e.to_string())?;
    let s = fs::read(&serial).unwrap();
    ensure(s == fs::read(&parallel).unwrap(), || "parallel output differs from serial".into())?;
    ensure(s == fs::read(&resumed).unwrap(), || "resumed output differs from serial".into())?;
    Ok(format!(
        "{RANDOM_STABILIZATIONS} stabilizations preserve (tb, rot, Jones); round trips exact; \
         serial = parallel = resumed ({} bytes)",
        s.len()
    ))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut failures = 0;
    let mut report = |id: u32, name: &str, outcome: Outcome| {
        match &outcome {
            Ok(detail) => println!("criterion {id} PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id} FAIL  {name}: {detail}");
            }
        }
    };
    report(1, "K_max upper bound", criterion_1());
    let kmin = kmin_run(dir.path());
    match &kmin {
        Ok((_, detail)) => report(2, "K_min has no size-7 cube", Ok(detail.clone())),
        Err(e) => report(2, "K_min has no size-7 cube", Err(e.clone())),
    }
    report(3, "trefoil control", criterion_3(dir.path()));
    match &kmin {
        Ok((run, _)) => {
            report(4, "bend-type and writhe lemmas", criterion_4(run));
            report(5, "obstruction detector soundness", criterion_5(run));
        }
        Err(_) => {
            report(4, "bend-type and writhe lemmas", Err("criterion 2 run failed".into()));
            report(5, "obstruction detector soundness", Err("criterion 2 run failed".into()));
        }
    }
    report(6, "lift count oracle", criterion_6());
    report(7, "invariant formulas", criterion_7());
    report(8, "moves and round trips", criterion_8(dir.path()));
    if failures == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
