//! Append-only scan cache so long scans are resumable.
//!
//! One record per line, `p TAB n TAB s_p TAB good TAB sing TAB skipped TAB
//! h0 TAB image_size`, sorted by (n, p) within each appended batch. A header
//! comment binds the file to the surface's content hash; reusing a cache
//! with a different surface is refused.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{TowerTraceRecord, TraceRecord};

const SURFACE_PREFIX: &str = "# surface ";

#[derive(Debug)]
pub struct ScanCache {
    path: PathBuf,
    records: BTreeMap<(u32, u64), TowerTraceRecord>,
}

impl ScanCache {
    /// Open (or create) the cache at `path` for the surface identified by
    /// `surface_hash`.
    pub fn open(path: &Path, surface_hash: &str) -> Result<Self> {
        let mut records = BTreeMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let mut hash_seen = false;
            for line in text.lines() {
                if let Some(hash) = line.strip_prefix(SURFACE_PREFIX) {
                    if hash.trim() != surface_hash {
                        return Err(Error::CacheHashMismatch);
                    }
                    hash_seen = true;
                    continue;
                }
                if line.starts_with('#') || line.trim().is_empty() {
                    continue;
                }
                let record = parse_line(line)?;
                records.insert((record.n, record.p()), record);
            }
            if !hash_seen && !records.is_empty() {
                return Err(Error::CacheHashMismatch);
            }
            if !hash_seen {
                write_header(path, surface_hash)?;
            }
        } else {
            write_header(path, surface_hash)?;
        }
        Ok(ScanCache {
            path: path.to_path_buf(),
            records,
        })
    }

    pub fn get(&self, n: u32, p: u64) -> Option<TowerTraceRecord> {
        self.records.get(&(n, p)).copied()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Append records not present yet, sorted by (n, p).
    pub fn append(&mut self, records: &[TowerTraceRecord]) -> Result<()> {
        let mut fresh: Vec<&TowerTraceRecord> = records
            .iter()
            .filter(|r| !self.records.contains_key(&(r.n, r.p())))
            .collect();
        if fresh.is_empty() {
            return Ok(());
        }
        fresh.sort_by_key(|r| (r.n, r.p()));
        let mut file = OpenOptions::new().append(true).open(&self.path)?;
        for r in &fresh {
            writeln!(file, "{}", render_line(r))?;
        }
        for r in fresh {
            self.records.insert((r.n, r.p()), *r);
        }
        Ok(())
    }
}

fn write_header(path: &Path, surface_hash: &str) -> Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(file, "{SURFACE_PREFIX}{surface_hash}")?;
    Ok(())
}

pub fn render_line(r: &TowerTraceRecord) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.p(),
        r.n,
        r.trace.s_p,
        r.trace.fibers_good,
        r.trace.fibers_singular,
        r.trace.fibers_skipped,
        r.h0,
        r.image_size
    )
}

fn parse_line(line: &str) -> Result<TowerTraceRecord> {
    let bad = || Error::CacheParse(line.to_string());
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    if fields.len() != 8 {
        return Err(bad());
    }
    fn int<T: std::str::FromStr>(s: &str, bad: impl Fn() -> Error) -> Result<T> {
        s.parse().map_err(|_| bad())
    }
    Ok(TowerTraceRecord {
        trace: TraceRecord {
            p: int(fields[0], bad)?,
            s_p: int(fields[2], bad)?,
            fibers_good: int(fields[3], bad)?,
            fibers_singular: int(fields[4], bad)?,
            fibers_skipped: int(fields[5], bad)?,
        },
        n: int(fields[1], bad)?,
        h0: int(fields[6], bad)?,
        image_size: int(fields[7], bad)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(p: u64, n: u32, s: i64) -> TowerTraceRecord {
        TowerTraceRecord {
            trace: TraceRecord {
                p,
                s_p: s,
                fibers_good: p,
                fibers_singular: 1,
                fibers_skipped: 0,
            },
            n,
            h0: 1,
            image_size: p + 1,
        }
    }

    #[test]
    fn round_trips_through_disk() {
        let dir = std::env::temp_dir().join(format!("ellrank-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.tsv");
        let _ = std::fs::remove_file(&path);

        let mut cache = ScanCache::open(&path, "abc123").unwrap();
        cache.append(&[record(7, 1, -3), record(5, 1, -5)]).unwrap();
        drop(cache);

        let reopened = ScanCache::open(&path, "abc123").unwrap();
        assert_eq!(reopened.len(), 2);
        assert_eq!(reopened.get(1, 5).unwrap().trace.s_p, -5);
        assert!(reopened.get(1, 11).is_none());

        // appended batch is sorted by (n, p)
        let text = std::fs::read_to_string(&path).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0].split('\t').next(), Some("5"));
        assert_eq!(data[1].split('\t').next(), Some("7"));

        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn refuses_foreign_surface() {
        let dir = std::env::temp_dir().join(format!("ellrank-cache2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("foreign.tsv");
        let _ = std::fs::remove_file(&path);

        let mut cache = ScanCache::open(&path, "surface-a").unwrap();
        cache.append(&[record(5, 1, -5)]).unwrap();
        drop(cache);
        assert!(matches!(
            ScanCache::open(&path, "surface-b"),
            Err(Error::CacheHashMismatch)
        ));
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn duplicate_appends_are_ignored() {
        let dir = std::env::temp_dir().join(format!("ellrank-cache3-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("dups.tsv");
        let _ = std::fs::remove_file(&path);

        let mut cache = ScanCache::open(&path, "h").unwrap();
        cache.append(&[record(5, 1, -5)]).unwrap();
        cache.append(&[record(5, 1, -5), record(5, 2, 4)]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);
        let _ = std::fs::remove_file(&path);
    }
}
