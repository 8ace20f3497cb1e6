//! Binary checkpoint: magic, version, fields, then a SHA-256 of everything
//! before it. Integers are little-endian.

use std::fs;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::hex;

const MAGIC: &[u8; 8] = b"CUBEKCKP";
const VERSION: u32 = 1;
const BODY_LEN: usize = 8 + 4 + 32 + 8 * 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    /// hex SHA-256 of the run's filter
    pub filter_hash: String,
    pub total_ranks: u64,
    pub next_rank: u64,
    /// length of the JSONL output covering ranks below `next_rank`
    pub jsonl_offset: u64,
    pub candidates: u64,
    pub lifted: u64,
}

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint i/o: {0}")]
    Io(#[from] io::Error),
    #[error("checkpoint is corrupt: {0}")]
    Corrupt(&'static str),
    #[error("checkpoint belongs to a different filter ({found}, expected {expected})")]
    FilterMismatch { found: String, expected: String },
}

impl Checkpoint {
    pub fn fresh(filter_hash: &str, total_ranks: u64, jsonl_offset: u64) -> Self {
        Self {
            filter_hash: filter_hash.to_string(),
            total_ranks,
            next_rank: 0,
            jsonl_offset,
            candidates: 0,
            lifted: 0,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = Vec::with_capacity(BODY_LEN + 32);
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&VERSION.to_le_bytes());
        b.extend_from_slice(&unhex(&self.filter_hash));
        for v in [self.total_ranks, self.next_rank, self.jsonl_offset, self.candidates, self.lifted] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        let sum = Sha256::digest(&b);
        b.extend_from_slice(&sum);
        b
    }

    pub fn from_bytes(b: &[u8]) -> Result<Self, CheckpointError> {
        if b.len() != BODY_LEN + 32 {
            return Err(CheckpointError::Corrupt("wrong length"));
        }
        let (body, sum) = b.split_at(BODY_LEN);
        if Sha256::digest(body).as_slice() != sum {
            return Err(CheckpointError::Corrupt("checksum mismatch"));
        }
        if &body[..8] != MAGIC {
            return Err(CheckpointError::Corrupt("bad magic"));
        }
        if body[8..12] != VERSION.to_le_bytes() {
            return Err(CheckpointError::Corrupt("unsupported version"));
        }
        let word = |i: usize| {
            let at = 44 + 8 * i;
            u64::from_le_bytes(body[at..at + 8].try_into().unwrap())
        };
        Ok(Self {
            filter_hash: hex(&body[12..44]),
            total_ranks: word(0),
            next_rank: word(1),
            jsonl_offset: word(2),
            candidates: word(3),
            lifted: word(4),
        })
    }

    /// Loads a checkpoint, refusing one written for another filter.
    pub fn load(path: &Path, filter_hash: &str) -> Result<Self, CheckpointError> {
        let ck = Self::from_bytes(&fs::read(path)?)?;
        if ck.filter_hash != filter_hash {
            return Err(CheckpointError::FilterMismatch {
                found: ck.filter_hash,
                expected: filter_hash.to_string(),
            });
        }
        Ok(ck)
    }

    /// Writes atomically via a temporary file and rename.
    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_bytes())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn unhex(s: &str) -> [u8; 32] {
    let mut out = [0u8; 32];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = s
            .get(2 * i..2 * i + 2)
            .and_then(|h| u8::from_str_radix(h, 16).ok())
            .unwrap_or(0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        Checkpoint {
            filter_hash: "ab".repeat(32),
            total_ranks: 5040,
            next_rank: 128,
            jsonl_offset: 9876,
            candidates: 12,
            lifted: 3,
        }
    }

    #[test]
    fn round_trip() {
        let ck = sample();
        assert_eq!(Checkpoint::from_bytes(&ck.to_bytes()).unwrap(), ck);
    }

    #[test]
    fn corruption_detected() {
        let mut b = sample().to_bytes();
        b[50] ^= 1;
        assert!(matches!(
            Checkpoint::from_bytes(&b),
            Err(CheckpointError::Corrupt("checksum mismatch"))
        ));
        assert!(Checkpoint::from_bytes(&b[1..]).is_err());
    }

    #[test]
    fn filter_mismatch_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ckpt");
        sample().save(&path).unwrap();
        assert!(Checkpoint::load(&path, &"ab".repeat(32)).is_ok());
        assert!(matches!(
            Checkpoint::load(&path, &"cd".repeat(32)),
            Err(CheckpointError::FilterMismatch { .. })
        ));
    }
}
