//! Append-only journal.
//!
//! Each record starts with a header line that is a TriG comment, so the file
//! as a whole stays a readable TriG document:
//!
//! ```text
//! #@nanopub stored-at=2013-01-01T00:00:00Z length=1234
//! <1234 bytes of TriG>
//! #@agent {"iri":"http://example.org/alice","display_name":"Alice","kind":"Person"}
//! ```
//!
//! A record cut short at the end of the file (an interrupted write) is
//! dropped and the file truncated to the last complete record.

use std::fs::{File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};

use crate::store::Agent;

#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    Nanopub { stored_at: DateTime<Utc>, trig: Vec<u8> },
    Agent(Agent),
}

#[derive(Debug, thiserror::Error)]
pub enum JournalError {
    #[error("journal I/O: {0}")]
    Io(#[from] io::Error),
    #[error("journal {path} is corrupt at byte {offset}: {message}")]
    Corrupt { path: PathBuf, offset: usize, message: String },
}

pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    /// Opens or creates the journal and returns the records already in it.
    pub fn open(path: impl AsRef<Path>) -> Result<(Journal, Vec<Record>), JournalError> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new().read(true).append(true).create(true).open(&path)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;
        let (records, good) = decode(&bytes, &path)?;
        if good < bytes.len() {
            tracing::warn!(path = %path.display(), dropped = bytes.len() - good, "dropping incomplete journal tail");
            file.set_len(good as u64)?;
        }
        Ok((Journal { path, file }, records))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, record: &Record) -> Result<(), JournalError> {
        self.file.write_all(&encode(record))?;
        self.file.flush()?;
        self.file.sync_data()?;
        Ok(())
    }
}

pub fn encode(record: &Record) -> Vec<u8> {
    match record {
        Record::Nanopub { stored_at, trig } => {
            let mut out = format!(
                "#@nanopub stored-at={} length={}\n",
                stored_at.to_rfc3339_opts(chrono::SecondsFormat::AutoSi, true),
                trig.len()
            )
            .into_bytes();
            out.extend_from_slice(trig);
            if !trig.ends_with(b"\n") {
                out.push(b'\n');
            }
            out
        }
        Record::Agent(agent) => {
            format!("#@agent {}\n", serde_json::to_string(agent).expect("agents serialize")).into_bytes()
        }
    }
}

/// Decodes complete records; returns them with the length of the good prefix.
fn decode(bytes: &[u8], path: &Path) -> Result<(Vec<Record>, usize), JournalError> {
    let corrupt = |offset: usize, message: String| JournalError::Corrupt { path: path.to_path_buf(), offset, message };
    let mut records = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let Some(nl) = bytes[pos..].iter().position(|&b| b == b'\n') else {
            return Ok((records, pos));
        };
        let line = std::str::from_utf8(&bytes[pos..pos + nl]).map_err(|_| corrupt(pos, "header is not UTF-8".into()))?;
        let body_start = pos + nl + 1;
        if let Some(rest) = line.strip_prefix("#@agent ") {
            let agent = serde_json::from_str(rest).map_err(|e| corrupt(pos, format!("bad agent record: {e}")))?;
            records.push(Record::Agent(agent));
            pos = body_start;
        } else if let Some(rest) = line.strip_prefix("#@nanopub ") {
            let (stored_at, len) = parse_header(rest).ok_or_else(|| corrupt(pos, format!("bad header {line:?}")))?;
            let mut end = body_start + len;
            if end > bytes.len() {
                return Ok((records, pos));
            }
            let trig = bytes[body_start..end].to_vec();
            if bytes.get(end) == Some(&b'\n') && !trig.ends_with(b"\n") {
                end += 1;
            }
            records.push(Record::Nanopub { stored_at, trig });
            pos = end;
        } else if line.trim().is_empty() {
            pos = body_start;
        } else {
            return Err(corrupt(pos, format!("unexpected line {line:?}")));
        }
    }
    Ok((records, pos))
}

fn parse_header(rest: &str) -> Option<(DateTime<Utc>, usize)> {
    let mut stored_at = None;
    let mut length = None;
    for field in rest.split_whitespace() {
        match field.split_once('=')? {
            ("stored-at", v) => stored_at = DateTime::parse_from_rfc3339(v).ok().map(|d| d.with_timezone(&Utc)),
            ("length", v) => length = v.parse().ok(),
            _ => {}
        }
    }
    Some((stored_at?, length?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::AgentKind;
    use chrono::TimeZone;

    fn records() -> Vec<Record> {
        vec![
            Record::Agent(Agent {
                iri: aidapub_core::nanopub::Iri::new("http://example.org/alice").unwrap(),
                display_name: "Alice".into(),
                kind: AgentKind::Person,
            }),
            Record::Nanopub { stored_at: Utc.with_ymd_and_hms(2013, 1, 2, 3, 4, 5).unwrap(), trig: b"<a> <b> <c> .\n".to_vec() },
            Record::Nanopub { stored_at: Utc.with_ymd_and_hms(2013, 1, 2, 3, 4, 6).unwrap(), trig: b"<a> <b> <d> .".to_vec() },
        ]
    }

    #[test]
    fn roundtrip() {
        let recs = records();
        let bytes: Vec<u8> = recs.iter().flat_map(encode).collect();
        let (back, good) = decode(&bytes, Path::new("j")).unwrap();
        assert_eq!(good, bytes.len());
        // The body without a trailing newline gets one in the file only.
        assert_eq!(back, recs);
    }

    #[test]
    fn torn_tail_is_dropped() {
        let recs = records();
        let bytes: Vec<u8> = recs.iter().flat_map(encode).collect();
        for cut in 1..bytes.len() {
            let (back, good) = decode(&bytes[..cut], Path::new("j")).unwrap();
            assert!(good <= cut);
            assert!(back.len() <= recs.len());
            assert_eq!(back[..], recs[..back.len()]);
        }
    }

    #[test]
    fn garbage_is_an_error() {
        assert!(matches!(decode(b"hello\n", Path::new("j")), Err(JournalError::Corrupt { offset: 0, .. })));
    }

    #[test]
    fn reopen_truncates_tail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("journal.trig");
        {
            let (mut j, recs) = Journal::open(&path).unwrap();
            assert!(recs.is_empty());
            for r in records() {
                j.append(&r).unwrap();
            }
        }
        let full = std::fs::read(&path).unwrap();
        std::fs::write(&path, &full[..full.len() - 3]).unwrap();
        let (_, recs) = Journal::open(&path).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(std::fs::read(&path).unwrap().len() < full.len() - 3);
    }
}
