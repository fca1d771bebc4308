//! Census persistence: an append-only line store with per-line checksums,
//! plus CSV export.
//!
//! One line per record, `key=value` pairs terminated by a truncated sha-256
//! of the line prefix. Lines failing the checksum are skipped on read, so a
//! torn append cannot poison a resumed run.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use testel_core::density::CensusRecord;

fn checksum(prefix: &str) -> String {
    let digest = Sha256::digest(prefix.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn record_line(record: &CensusRecord) -> String {
    let prefix = format!(
        "census rank={} radius={} vet={} seed={} positive={} negative={} unknown={} ball={} complete={} ts={}",
        record.rank,
        record.radius,
        record.vetting_bound,
        record.seed,
        record.positive,
        record.negative,
        record.unknown,
        record.ball_size,
        record.complete,
        record.timestamp.unwrap_or(0),
    );
    let sum = checksum(&prefix);
    format!("{prefix} sha={sum}")
}

fn parse_line(line: &str) -> Option<CensusRecord> {
    let (prefix, sum) = line.rsplit_once(" sha=")?;
    if checksum(prefix) != sum {
        return None;
    }
    let mut parts = prefix.split_whitespace();
    if parts.next() != Some("census") {
        return None;
    }
    let mut record = CensusRecord {
        rank: 0,
        radius: 0,
        vetting_bound: 0,
        positive: 0,
        negative: 0,
        unknown: 0,
        ball_size: 0,
        seed: 0,
        timestamp: None,
        complete: false,
    };
    for part in parts {
        let (key, value) = part.split_once('=')?;
        match key {
            "rank" => record.rank = value.parse().ok()?,
            "radius" => record.radius = value.parse().ok()?,
            "vet" => record.vetting_bound = value.parse().ok()?,
            "seed" => record.seed = value.parse().ok()?,
            "positive" => record.positive = value.parse().ok()?,
            "negative" => record.negative = value.parse().ok()?,
            "unknown" => record.unknown = value.parse().ok()?,
            "ball" => record.ball_size = value.parse().ok()?,
            "complete" => record.complete = value.parse().ok()?,
            "ts" => record.timestamp = Some(value.parse().ok()?),
            _ => return None,
        }
    }
    Some(record)
}

/// Appends one record; the store is never rewritten.
pub fn append_record(path: &Path, record: &CensusRecord) -> std::io::Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(file, "{}", record_line(record))
}

/// All checksum-valid records, in file order.
pub fn read_records(path: &Path) -> std::io::Result<Vec<CensusRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line) {
            Some(record) => records.push(record),
            None => eprintln!("store: skipping corrupt line"),
        }
    }
    Ok(records)
}

/// The latest complete record matching the census key, if any.
pub fn find_complete(
    records: &[CensusRecord],
    rank: usize,
    radius: usize,
    vet: usize,
    seed: u64,
) -> Option<&CensusRecord> {
    records.iter().rev().find(|r| {
        r.complete
            && r.rank == rank
            && r.radius == radius
            && r.vetting_bound == vet
            && r.seed == seed
    })
}

/// Exports every record to CSV with the fixed column set.
pub fn export_csv(records: &[CensusRecord], path: &Path) -> std::io::Result<()> {
    let mut file = File::create(path)?;
    writeln!(file, "rank,k,L,positive,negative,unknown,ball_size,seed")?;
    for r in records {
        writeln!(
            file,
            "{},{},{},{},{},{},{},{}",
            r.rank,
            r.radius,
            r.vetting_bound,
            r.positive,
            r.negative,
            r.unknown,
            r.ball_size,
            r.seed
        )?;
    }
    Ok(())
}
