//! Binary caches for observation sets and cooccurrence matrices.
//!
//! Both formats are versioned, little-endian, and fixed-width; encoding
//! the decoded value reproduces the input byte for byte. Files are
//! replaced atomically (write to a sibling temp file, then rename), so a
//! cache on disk is never half-written.
//!
//! Observation cache (`TSOB`): magic, version, granularity byte, term
//! count, unit count, the vocabulary (string, unit frequency, corpus
//! frequency per term, ascending by string), then each unit's term-id
//! sequence.
//!
//! Cooccurrence cache (`TSCM`): magic, version, term count `N`, unit
//! count `D`, triple count, then the strict upper triangle as sorted
//! `(a, b, count)` triples with `a < b`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::cooccur::CooccurrenceMatrix;
use crate::corpus::{Granularity, ObservationSet, TermId, Vocabulary};
use crate::error::{Error, Result};

const OBS_MAGIC: &[u8; 4] = b"TSOB";
const COOC_MAGIC: &[u8; 4] = b"TSCM";
const FORMAT_VERSION: u32 = 1;

/// Writes `bytes` to `path` via a temp file in the same directory plus an
/// atomic rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::InvalidParameter(format!("invalid output path {path:?}")))?;
    let tmp = path.with_file_name(format!("{file_name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(io_err)?;
    f.write_all(bytes).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io_err)
}

fn granularity_byte(g: Granularity) -> u8 {
    match g {
        Granularity::Sentence => 0,
        Granularity::Paragraph => 1,
        Granularity::Document => 2,
    }
}

pub fn encode_observations(obs: &ObservationSet) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(OBS_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.push(granularity_byte(obs.granularity));
    out.extend_from_slice(&(obs.vocabulary.len() as u32).to_le_bytes());
    out.extend_from_slice(&(obs.units.len() as u64).to_le_bytes());
    for t in obs.vocabulary.ids() {
        let term = obs.vocabulary.term(t);
        out.extend_from_slice(&(term.len() as u32).to_le_bytes());
        out.extend_from_slice(term.as_bytes());
        out.extend_from_slice(&obs.vocabulary.unit_freq(t).to_le_bytes());
        out.extend_from_slice(&obs.vocabulary.corpus_freq(t).to_le_bytes());
    }
    for unit in &obs.units {
        out.extend_from_slice(&(unit.len() as u32).to_le_bytes());
        for &t in unit {
            out.extend_from_slice(&t.0.to_le_bytes());
        }
    }
    out
}

pub fn write_observations(path: &Path, obs: &ObservationSet) -> Result<()> {
    write_atomic(path, &encode_observations(obs))
}

pub fn read_observations(path: &Path) -> Result<ObservationSet> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut r = Reader::new(path, &bytes);
    r.magic(OBS_MAGIC)?;
    r.version()?;
    let granularity = match r.u8("granularity")? {
        0 => Granularity::Sentence,
        1 => Granularity::Paragraph,
        2 => Granularity::Document,
        g => return Err(r.fail(format!("unknown granularity byte {g}"))),
    };
    let n_terms = r.u32("term count")? as usize;
    let unit_count = r.u64("unit count")? as usize;
    let mut terms = Vec::with_capacity(n_terms);
    let mut unit_freq = Vec::with_capacity(n_terms);
    let mut corpus_freq = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let len = r.u32("term length")? as usize;
        let raw = r.take(len, "term bytes")?;
        let term = std::str::from_utf8(raw)
            .map_err(|_| r.fail("term is not UTF-8".to_string()))?
            .to_string();
        if let Some(prev) = terms.last() {
            if *prev >= term {
                return Err(r.fail("vocabulary not sorted".to_string()));
            }
        }
        terms.push(term);
        unit_freq.push(r.u32("unit frequency")?);
        corpus_freq.push(r.u64("corpus frequency")?);
    }
    let mut units = Vec::with_capacity(unit_count);
    for _ in 0..unit_count {
        let len = r.u32("unit length")? as usize;
        let mut unit = Vec::with_capacity(len);
        for _ in 0..len {
            let id = r.u32("term id")?;
            if id as usize >= n_terms {
                return Err(r.fail(format!("term id {id} out of range")));
            }
            unit.push(TermId(id));
        }
        units.push(unit);
    }
    r.finish()?;
    Ok(ObservationSet {
        units,
        granularity,
        vocabulary: Vocabulary::from_parts(terms, unit_freq, corpus_freq),
    })
}

pub fn encode_cooccurrence(matrix: &CooccurrenceMatrix) -> Vec<u8> {
    let triples: Vec<(u32, u32, u32)> = matrix.triples().collect();
    let mut out = Vec::with_capacity(32 + triples.len() * 12);
    out.extend_from_slice(COOC_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(matrix.n_terms() as u32).to_le_bytes());
    out.extend_from_slice(&(matrix.unit_count() as u64).to_le_bytes());
    out.extend_from_slice(&(triples.len() as u64).to_le_bytes());
    for (a, b, c) in triples {
        out.extend_from_slice(&a.to_le_bytes());
        out.extend_from_slice(&b.to_le_bytes());
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

pub fn write_cooccurrence(path: &Path, matrix: &CooccurrenceMatrix) -> Result<()> {
    write_atomic(path, &encode_cooccurrence(matrix))
}

pub fn read_cooccurrence(path: &Path) -> Result<CooccurrenceMatrix> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut r = Reader::new(path, &bytes);
    r.magic(COOC_MAGIC)?;
    r.version()?;
    let n_terms = r.u32("term count")? as usize;
    let unit_count = r.u64("unit count")? as usize;
    let triple_count = r.u64("triple count")? as usize;
    let mut triples = Vec::with_capacity(triple_count);
    let mut prev: Option<(u32, u32)> = None;
    for _ in 0..triple_count {
        let a = r.u32("pair term a")?;
        let b = r.u32("pair term b")?;
        let c = r.u32("pair count")?;
        if a >= b || b as usize >= n_terms {
            return Err(r.fail(format!("invalid pair ({a}, {b})")));
        }
        if c == 0 || c as usize > unit_count {
            return Err(r.fail(format!("invalid count {c} for pair ({a}, {b})")));
        }
        if let Some(p) = prev {
            if p >= (a, b) {
                return Err(r.fail("pairs not sorted".to_string()));
            }
        }
        prev = Some((a, b));
        triples.push((a, b, c));
    }
    r.finish()?;
    Ok(CooccurrenceMatrix::from_sorted_triples(
        unit_count, n_terms, &triples,
    ))
}

struct Reader<'a> {
    path: &'a Path,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(path: &'a Path, bytes: &'a [u8]) -> Self {
        Self {
            path,
            bytes,
            pos: 0,
        }
    }

    fn fail(&self, reason: String) -> Error {
        Error::CacheFormat {
            path: self.path.to_path_buf(),
            reason,
        }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(self.fail(format!("truncated while reading {what}")));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn magic(&mut self, expected: &[u8; 4]) -> Result<()> {
        let found = self.take(4, "magic")?;
        if found != expected {
            return Err(self.fail("wrong magic (not a cache of this type)".to_string()));
        }
        Ok(())
    }

    fn version(&mut self) -> Result<()> {
        let v = self.u32("format version")?;
        if v != FORMAT_VERSION {
            return Err(self.fail(format!(
                "unsupported format version {v} (expected {FORMAT_VERSION})"
            )));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(self.fail(format!(
                "{} trailing bytes after payload",
                self.bytes.len() - self.pos
            )));
        }
        Ok(())
    }
}
