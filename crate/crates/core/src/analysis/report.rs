//! Branch-coverage report ingestion.
//!
//! Two inputs are accepted: the JaCoCo-style XML subset
//! (`<class name="..."><counter type="BRANCH" missed="M" covered="C"/></class>`)
//! and a plain CSV with header `class,branches_covered,branches_total`.
//! Only counters that are direct children of a `<class>` element count;
//! method-level counters nested deeper are ignored, as are other counter
//! types. JVM-style names (`com/example/Foo`) are normalized to dotted form.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Xml,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "xml" => Ok(ReportFormat::Xml),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format `{other}` (expected xml or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRecord {
    pub class_name: String,
    pub covered: u64,
    pub total: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate class `{name}`")]
    DuplicateClass { line: usize, name: String },
}

fn malformed(line: usize, message: impl Into<String>) -> ReportError {
    ReportError::Malformed {
        line,
        message: message.into(),
    }
}

pub fn normalize_class_name(raw: &str) -> String {
    raw.trim().replace(['/', '\\'], ".")
}

pub fn parse_branch_report(path: &Path, format: ReportFormat) -> Result<Vec<BranchRecord>, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    match format {
        ReportFormat::Xml => parse_xml(&text),
        ReportFormat::Csv => parse_csv(&text),
    }
}

fn line_at(text: &str, offset: usize) -> usize {
    let end = offset.min(text.len());
    text.as_bytes()[..end].iter().filter(|b| **b == b'\n').count() + 1
}

fn attribute(e: &BytesStart<'_>, key: &[u8], line: usize) -> Result<Option<String>, ReportError> {
    for attr in e.attributes() {
        let attr = attr.map_err(|err| malformed(line, format!("bad attribute: {err}")))?;
        if attr.key.as_ref() == key {
            let value = attr
                .unescape_value()
                .map_err(|err| malformed(line, format!("bad attribute value: {err}")))?;
            return Ok(Some(value.into_owned()));
        }
    }
    Ok(None)
}

fn count_attribute(e: &BytesStart<'_>, key: &str, line: usize) -> Result<u64, ReportError> {
    let raw = attribute(e, key.as_bytes(), line)?
        .ok_or_else(|| malformed(line, format!("BRANCH counter without `{key}`")))?;
    raw.trim()
        .parse()
        .map_err(|_| malformed(line, format!("`{key}` is not a count: {raw:?}")))
}

struct Builder {
    records: Vec<BranchRecord>,
    seen: HashMap<String, usize>,
}

impl Builder {
    fn open_class(&mut self, name: String, line: usize) -> Result<usize, ReportError> {
        if self.seen.contains_key(&name) {
            return Err(ReportError::DuplicateClass { line, name });
        }
        self.seen.insert(name.clone(), self.records.len());
        self.records.push(BranchRecord {
            class_name: name,
            covered: 0,
            total: 0,
        });
        Ok(self.records.len() - 1)
    }
}

fn parse_xml(text: &str) -> Result<Vec<BranchRecord>, ReportError> {
    let mut reader = Reader::from_str(text);
    let mut builder = Builder {
        records: Vec::new(),
        seen: HashMap::new(),
    };
    // element names from the root down, with the record index for <class>
    let mut stack: Vec<(Vec<u8>, Option<usize>)> = Vec::new();
    loop {
        let offset = reader.buffer_position() as usize;
        let event = reader
            .read_event()
            .map_err(|err| malformed(line_at(text, reader.error_position() as usize), err.to_string()))?;
        let line = line_at(text, offset);
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(event, Event::Empty(_));
                let name = e.name().as_ref().to_vec();
                let mut class_index = None;
                if name == b"class" {
                    let raw = attribute(e, b"name", line)?
                        .ok_or_else(|| malformed(line, "<class> without name"))?;
                    class_index = Some(builder.open_class(normalize_class_name(&raw), line)?);
                } else if name == b"counter" {
                    if let Some((_, Some(idx))) = stack.last() {
                        if attribute(e, b"type", line)?.as_deref() == Some("BRANCH") {
                            let missed = count_attribute(e, "missed", line)?;
                            let covered = count_attribute(e, "covered", line)?;
                            let record = &mut builder.records[*idx];
                            record.covered = covered;
                            record.total = covered + missed;
                        }
                    }
                }
                if !is_empty {
                    stack.push((name, class_index));
                }
            }
            Event::End(ref e) => match stack.pop() {
                Some((open, _)) if open == e.name().as_ref() => {}
                _ => {
                    return Err(malformed(
                        line,
                        format!("unexpected </{}>", String::from_utf8_lossy(e.name().as_ref())),
                    ))
                }
            },
            Event::Eof => break,
            _ => {}
        }
    }
    if let Some((open, _)) = stack.last() {
        return Err(malformed(
            line_at(text, text.len()),
            format!("unclosed <{}>", String::from_utf8_lossy(open)),
        ));
    }
    Ok(builder.records)
}

pub const CSV_HEADER: &str = "class,branches_covered,branches_total";

fn parse_csv(text: &str) -> Result<Vec<BranchRecord>, ReportError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, h)| h.trim_start_matches('\u{feff}').trim())
        .unwrap_or_default();
    if header != CSV_HEADER {
        return Err(malformed(1, format!("expected header `{CSV_HEADER}`, found `{header}`")));
    }
    let mut builder = Builder {
        records: Vec::new(),
        seen: HashMap::new(),
    };
    for (i, row) in lines {
        let line = i + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        let [name, covered, total] = fields[..] else {
            return Err(malformed(line, format!("expected 3 fields, found {}", fields.len())));
        };
        let parse = |v: &str, what: &str| {
            v.parse::<u64>()
                .map_err(|_| malformed(line, format!("{what} is not a count: {v:?}")))
        };
        let covered = parse(covered, "branches_covered")?;
        let total = parse(total, "branches_total")?;
        if covered > total {
            return Err(malformed(line, "branches_covered exceeds branches_total"));
        }
        if name.is_empty() {
            return Err(malformed(line, "empty class name"));
        }
        let idx = builder.open_class(normalize_class_name(name), line)?;
        builder.records[idx].covered = covered;
        builder.records[idx].total = total;
    }
    Ok(builder.records)
}
