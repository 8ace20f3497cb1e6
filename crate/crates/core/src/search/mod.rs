//! Exhaustive enumeration of grid diagrams and the Legendrian cube number
//! experiments.

mod checkpoint;
mod enumerate;

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::grid::{CornerCensus, GridDiagram};
use crate::knot_id::{left_torus_jones, KnotIdError, LegendrianClassSpec};
use crate::laurent::LaurentPoly;
use crate::legendrian::{front_invariants_unchecked, Hand};
use crate::lifting::{detect_type_configurations, lift_search_first, TypeMatch};

pub use checkpoint::{Checkpoint, CheckpointError};
pub use enumerate::{enumerate_grids, enumerate_ranks, permutation_count, MAX_ENUMERATION_SIZE};

pub const SCHEMA: &str = "cubeknot.search/1";

/// Conjunctive filter on grid diagrams; unset fields accept everything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFilter {
    pub size: usize,
    pub single_component: bool,
    pub tb: Option<i64>,
    pub rot: Option<i64>,
    pub hand: Hand,
    pub jones_ref: Option<LaurentPoly>,
    /// inclusive bounds on the writhe
    pub writhe_range: Option<(i64, i64)>,
}

impl GridFilter {
    pub fn all(size: usize) -> Self {
        Self {
            size,
            single_component: false,
            tb: None,
            rot: None,
            hand: Hand::Left,
            jones_ref: None,
            writhe_range: None,
        }
    }

    /// Grids of size `n` representing the given Legendrian class of the
    /// left-hand (p,2) torus knot.
    pub fn for_class(spec: &LegendrianClassSpec, n: usize) -> Result<Self, KnotIdError> {
        Ok(Self {
            size: n,
            single_component: true,
            tb: Some(spec.tb),
            rot: Some(spec.rot),
            hand: Hand::Left,
            jones_ref: Some(left_torus_jones(spec.p)?),
            writhe_range: None,
        })
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("filter serializes");
        hex(&Sha256::digest(json.as_bytes()))
    }

    fn needs_knot(&self) -> bool {
        self.single_component
            || self.tb.is_some()
            || self.rot.is_some()
            || self.jones_ref.is_some()
            || self.writhe_range.is_some()
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftResult {
    Found,
    None,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordInvariants {
    pub writhe: i64,
    pub tb: i64,
    pub rot: i64,
    pub census: CornerCensus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    /// enumeration rank of the X permutation
    pub rank: u64,
    pub grid: String,
    pub invariants: RecordInvariants,
    pub lift_result: LiftResult,
    pub detector: Vec<TypeMatch>,
    pub witness: Option<String>,
}

impl SearchRecord {
    pub fn build(rank: u64, g: &GridDiagram, hand: Hand, lift: bool) -> Self {
        let f = front_invariants_unchecked(g, hand);
        let (lift_result, witness) = if lift {
            match lift_search_first(g) {
                Some(c) => (LiftResult::Found, Some(c.to_text())),
                None => (LiftResult::None, None),
            }
        } else {
            (LiftResult::Skipped, None)
        };
        Self {
            rank,
            grid: g.to_text(),
            invariants: RecordInvariants {
                writhe: g.writhe_unchecked(),
                tb: f.tb,
                rot: f.rot,
                census: g.corner_census(),
            },
            lift_result,
            detector: detect_type_configurations(g),
            witness,
        }
    }
}

/// What a finished run certifies about the Legendrian cube number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "bound", content = "n", rename_all = "snake_case")]
pub enum Conclusion {
    /// some candidate lifts: c_ℓ ≤ n
    AtMost(usize),
    /// every candidate was searched and none lifts: c_ℓ > n
    GreaterThan(usize),
    /// no grid of this size represents the class
    NoCandidates(usize),
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::AtMost(n) => write!(f, "c_ℓ ≤ {n}"),
            Conclusion::GreaterThan(n) => write!(f, "c_ℓ > {n}"),
            Conclusion::NoCandidates(n) => write!(f, "no candidates at size {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub class: LegendrianClassSpec,
    pub n: usize,
    pub candidates: u64,
    pub lifted: u64,
    pub bound_conclusion: Conclusion,
}

impl ExperimentReport {
    fn new(class: LegendrianClassSpec, n: usize, candidates: u64, lifted: u64) -> Self {
        let bound_conclusion = if lifted > 0 {
            Conclusion::AtMost(n)
        } else if candidates > 0 {
            Conclusion::GreaterThan(n)
        } else {
            Conclusion::NoCandidates(n)
        };
        Self { class, n, candidates, lifted, bound_conclusion }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Header {
    schema: String,
    class: LegendrianClassSpec,
    n: usize,
    filter: GridFilter,
    filter_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Summary {
    summary: ExperimentReport,
}

#[derive(Debug, Clone)]
pub struct ExperimentOptions {
    /// worker threads; 0 uses rayon's default
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    /// resume from `checkpoint` if it exists
    pub resume: bool,
    /// X-permutation ranks per checkpointed batch
    pub batch: u64,
    /// stop (as if interrupted) once this many ranks are done
    pub stop_after: Option<u64>,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self { jobs: 1, checkpoint: None, resume: false, batch: 64, stop_after: None }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("grid size {0} exceeds the enumeration budget of {MAX_ENUMERATION_SIZE}")]
    Budget(usize),
    #[error(transparent)]
    KnotId(#[from] KnotIdError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("run interrupted after {done} of {total} ranks")]
    Interrupted { done: u64, total: u64 },
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Enumerates every size-`n` grid in `spec`'s class, tries to lift each,
/// and writes a JSONL file: a header line, one record per candidate in
/// enumeration order, then a summary line.
pub fn run_experiment(
    spec: &LegendrianClassSpec,
    n: usize,
    out: &Path,
    opts: &ExperimentOptions,
) -> Result<ExperimentReport, SearchError> {
    if n > MAX_ENUMERATION_SIZE {
        return Err(SearchError::Budget(n));
    }
    let filter = GridFilter::for_class(spec, n)?;
    let filter_hash = filter.hash();
    let total = permutation_count(n);
    let batch = opts.batch.max(1);

    let resumed = match (&opts.checkpoint, opts.resume) {
        (Some(path), true) if path.exists() => Some(Checkpoint::load(path, &filter_hash)?),
        _ => None,
    };
    let (mut file, mut state) = match resumed {
        Some(ck) => {
            let mut file = OpenOptions::new().read(true).write(true).open(out)?;
            file.set_len(ck.jsonl_offset)?;
            file.seek(SeekFrom::End(0))?;
            (file, ck)
        }
        None => {
            let mut file = File::create(out)?;
            let header = Header {
                schema: SCHEMA.to_string(),
                class: *spec,
                n,
                filter: filter.clone(),
                filter_hash: filter_hash.clone(),
            };
            writeln!(file, "{}", serde_json::to_string(&header)?)?;
            let offset = file.stream_position()?;
            (file, Checkpoint::fresh(&filter_hash, total, offset))
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;

    while state.next_rank < total {
        if let Some(limit) = opts.stop_after {
            if state.next_rank >= limit {
                file.flush()?;
                return Err(SearchError::Interrupted { done: state.next_rank, total });
            }
        }
        let end = (state.next_rank + batch).min(total);
        let ranks: Vec<u64> = (state.next_rank..end).collect();
        let records: Vec<Vec<SearchRecord>> = pool.install(|| {
            ranks
                .par_iter()
                .map(|&rank| {
                    let mut out = Vec::new();
                    enumerate_ranks(&filter, rank..rank + 1, |rank, g| {
                        out.push(SearchRecord::build(rank, g, filter.hand, true));
                    });
                    out
                })
                .collect()
        });
        let mut buf = Vec::new();
        for rec in records.iter().flatten() {
            state.candidates += 1;
            state.lifted += (rec.lift_result == LiftResult::Found) as u64;
            serde_json::to_writer(&mut buf, rec)?;
            buf.push(b'\n');
        }
        file.write_all(&buf)?;
        file.flush()?;
        state.next_rank = end;
        state.jsonl_offset = file.stream_position()?;
        if let Some(path) = &opts.checkpoint {
            state.save(path)?;
        }
    }

    let report = ExperimentReport::new(*spec, n, state.candidates, state.lifted);
    writeln!(file, "{}", serde_json::to_string(&Summary { summary: report.clone() })?)?;
    file.flush()?;
    Ok(report)
}

/// Parsed contents of an experiment JSONL file.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub class: LegendrianClassSpec,
    pub n: usize,
    pub filter_hash: String,
    pub records: Vec<SearchRecord>,
    pub report: Option<ExperimentReport>,
}

pub fn read_experiment(path: &Path) -> Result<ExperimentOutput, SearchError> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header: Header = match lines.next() {
        Some(line) => serde_json::from_str(&line?)?,
        None => return Err(io::Error::new(io::ErrorKind::UnexpectedEof, "empty file").into()),
    };
    let mut records = Vec::new();
    let mut report = None;
    for line in lines {
        let line = line?;
        if line.starts_with("{\"summary\"") {
            report = Some(serde_json::from_str::<Summary>(&line)?.summary);
        } else {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok(ExperimentOutput {
        class: header.class,
        n: header.n,
        filter_hash: header.filter_hash,
        records,
        report,
    })
}
