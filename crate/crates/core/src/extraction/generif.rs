//! GeneRIF TSV reader (`generifs_basic` layout).

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use chrono::NaiveDateTime;
use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneRifRecord {
    pub tax_id: u32,
    pub gene_id: u64,
    pub pmids: Vec<u64>,
    pub last_update: NaiveDateTime,
    pub text: String,
    /// 1-based line number in the source.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Streams records from a reader. Malformed lines are skipped and recorded
/// as warnings; I/O errors end the stream and are recorded too.
pub struct GeneRifReader<R> {
    input: R,
    line: usize,
    buf: String,
    warnings: Vec<ParseWarning>,
}

pub fn parse_generif<R: BufRead>(input: R) -> GeneRifReader<R> {
    GeneRifReader { input, line: 0, buf: String::new(), warnings: Vec::new() }
}

/// Opens a GeneRIF file, decompressing it if it starts with the gzip magic bytes.
pub fn open_generif(path: impl AsRef<Path>) -> io::Result<GeneRifReader<Box<dyn BufRead + Send>>> {
    let file = File::open(path)?;
    Ok(parse_generif(maybe_gunzip(BufReader::new(file))?))
}

pub fn maybe_gunzip<R: BufRead + Send + 'static>(mut input: R) -> io::Result<Box<dyn BufRead + Send>> {
    let head = input.fill_buf()?;
    if head.starts_with(&[0x1f, 0x8b]) {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(input))))
    } else {
        Ok(Box::new(input))
    }
}

impl<R> GeneRifReader<R> {
    pub fn warnings(&self) -> &[ParseWarning] {
        &self.warnings
    }

    pub fn take_warnings(&mut self) -> Vec<ParseWarning> {
        std::mem::take(&mut self.warnings)
    }
}

impl<R: BufRead> Iterator for GeneRifReader<R> {
    type Item = GeneRifRecord;

    fn next(&mut self) -> Option<GeneRifRecord> {
        loop {
            self.buf.clear();
            let mut raw = Vec::new();
            match self.input.read_until(b'\n', &mut raw) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    self.warnings.push(ParseWarning { line: self.line + 1, message: format!("read error: {e}") });
                    return None;
                }
            }
            self.line += 1;
            match String::from_utf8(raw) {
                Ok(s) => self.buf = s,
                Err(_) => {
                    self.warnings.push(ParseWarning { line: self.line, message: "line is not valid UTF-8".into() });
                    continue;
                }
            }
            let line = self.buf.trim_end_matches(['\n', '\r']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            match parse_line(line, self.line) {
                Ok(record) => return Some(record),
                Err(message) => self.warnings.push(ParseWarning { line: self.line, message }),
            }
        }
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<GeneRifRecord, String> {
    let cols: Vec<&str> = line.splitn(5, '\t').collect();
    if cols.len() < 5 {
        return Err(format!("expected 5 tab-separated columns, found {}", cols.len()));
    }
    let tax_id = cols[0].trim().parse().map_err(|_| format!("invalid tax id {:?}", cols[0]))?;
    let gene_id: u64 = cols[1].trim().parse().map_err(|_| format!("invalid gene id {:?}", cols[1]))?;
    if gene_id == 0 {
        return Err("gene id must be positive".into());
    }
    let pmids = cols[2]
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u64>().map_err(|_| format!("invalid PMID {p:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if pmids.is_empty() {
        return Err("no PMIDs".into());
    }
    let stamp = cols[3].trim();
    let last_update = NaiveDateTime::parse_from_str(stamp, "%Y-%m-%d %H:%M")
        .or_else(|_| NaiveDateTime::parse_from_str(stamp, "%Y-%m-%d %H:%M:%S"))
        .map_err(|_| format!("invalid timestamp {stamp:?}"))?;
    let text = cols[4];
    if text.trim().is_empty() {
        return Err("empty text".into());
    }
    Ok(GeneRifRecord { tax_id, gene_id, pmids, last_update, text: text.to_string(), line: line_no })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_line() {
        let input = "9606\t348\t11218245\t2002-05-22 14:07\tAPOE is associated with Alzheimer disease.\n";
        let records: Vec<_> = parse_generif(input.as_bytes()).collect();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!((r.tax_id, r.gene_id, r.pmids.as_slice()), (9606, 348, &[11218245u64][..]));
        assert_eq!(r.text, "APOE is associated with Alzheimer disease.");
        assert_eq!(r.last_update.to_string(), "2002-05-22 14:07:00");
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse_generif(&b""[..]).count(), 0);
    }

    #[test]
    fn malformed_lines_become_warnings() {
        let input = "#Tax ID\tGene ID\tPubMed ID (PMID) list\tlast update timestamp\tGeneRIF text\n\
                     9606\t348\t11218245\t2002-05-22 14:07\n\
                     9606\t0\t1\t2002-05-22 14:07\tX binds Y.\n\
                     9606\t348\t\t2002-05-22 14:07\tX binds Y.\n\
                     9606\t348\t1,x\t2002-05-22 14:07\tX binds Y.\n\
                     9606\t348\t1\tyesterday\tX binds Y.\n\
                     9606\t351\t1, 2\t2010-01-21 00:00\tAPP binds Y.\r\n";
        let mut reader = parse_generif(input.as_bytes());
        let records: Vec<_> = reader.by_ref().collect();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].pmids, vec![1, 2]);
        assert_eq!(records[0].line, 7);
        assert_eq!(records[0].text, "APP binds Y.");
        let lines: Vec<usize> = reader.warnings().iter().map(|w| w.line).collect();
        assert_eq!(lines, vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn invalid_utf8_is_a_warning() {
        let mut input = b"9606\t1\t1\t2002-05-22 14:07\tBad \xff byte.\n".to_vec();
        input.extend_from_slice(b"9606\t2\t2\t2002-05-22 14:07\tGood text.\n");
        let mut reader = parse_generif(&input[..]);
        assert_eq!(reader.by_ref().count(), 1);
        assert_eq!(reader.warnings()[0].line, 1);
    }

    #[test]
    fn gzip_is_detected() {
        use flate2::write::GzEncoder;
        use std::io::Write;
        let mut enc = GzEncoder::new(Vec::new(), flate2::Compression::default());
        enc.write_all(b"9606\t348\t1\t2002-05-22 14:07\tAPOE binds LRP1.\n").unwrap();
        let gz = enc.finish().unwrap();
        let reader = maybe_gunzip(io::Cursor::new(gz)).unwrap();
        assert_eq!(parse_generif(reader).count(), 1);
        let plain = maybe_gunzip(io::Cursor::new(b"9606\t348\t1\t2002-05-22 14:07\tA b.\n".to_vec())).unwrap();
        assert_eq!(parse_generif(plain).count(), 1);
    }
}
