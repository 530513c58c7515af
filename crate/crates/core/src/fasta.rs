//! FASTA and plain-text sequence files.
//!
//! Lines starting with `;` are comments. Comments of the form
//! `; key=value` are collected as metadata. Input without any `>` header is
//! read as one sequence per non-empty line. Sequences are uppercased.

use std::fmt::Write as _;

use crate::error::FastaError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub sequence: Vec<u8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequenceFile {
    pub metadata: Vec<(String, String)>,
    pub records: Vec<Record>,
}

impl SequenceFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn sequences(&self) -> Vec<Vec<u8>> {
        self.records.iter().map(|r| r.sequence.clone()).collect()
    }
}

pub fn parse(text: &str) -> Result<SequenceFile, FastaError> {
    let mut file = SequenceFile::default();
    let fasta = text.lines().any(|l| l.trim_start().starts_with('>'));
    let mut current: Option<Record> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix(';') {
            if let Some((k, v)) = comment.trim().split_once('=') {
                file.metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if let Some(name) = line.strip_prefix('>') {
            if let Some(rec) = current.take() {
                push_record(&mut file, rec)?;
            }
            current = Some(Record {
                name: name.trim().to_string(),
                sequence: Vec::new(),
            });
            continue;
        }
        if let Some(bad) = line.bytes().find(|b| !b.is_ascii_graphic()) {
            return Err(FastaError::Malformed {
                line: line_no,
                message: format!("unexpected byte 0x{bad:02x} in sequence"),
            });
        }
        let seq = line.to_ascii_uppercase().into_bytes();
        if fasta {
            match current.as_mut() {
                Some(rec) => rec.sequence.extend_from_slice(&seq),
                None => {
                    return Err(FastaError::Malformed {
                        line: line_no,
                        message: "sequence data before the first '>' header".into(),
                    })
                }
            }
        } else {
            let name = format!("seq{}", file.records.len() + 1);
            file.records.push(Record { name, sequence: seq });
        }
    }
    if let Some(rec) = current.take() {
        push_record(&mut file, rec)?;
    }
    if file.records.is_empty() {
        return Err(FastaError::NoSequences);
    }
    Ok(file)
}

fn push_record(file: &mut SequenceFile, rec: Record) -> Result<(), FastaError> {
    if rec.sequence.is_empty() {
        return Err(FastaError::EmptyRecord {
            record: file.records.len() + 1,
            name: rec.name,
        });
    }
    file.records.push(rec);
    Ok(())
}

/// Metadata comments, then records wrapped at 60 columns.
pub fn write(file: &SequenceFile) -> String {
    let mut out = String::new();
    for (k, v) in &file.metadata {
        let _ = writeln!(out, "; {k}={v}");
    }
    for rec in &file.records {
        let _ = writeln!(out, ">{}", rec.name);
        for chunk in rec.sequence.chunks(60) {
            out.push_str(&String::from_utf8_lossy(chunk));
            out.push('\n');
        }
    }
    out
}
