//! Real-data ingestion: one CSV column cut into disjoint autoregressive chunks.

use std::ops::Range;
use std::path::Path;

use crate::data::{lift, LiftedSequence, RawSeries};
use crate::error::{Error, Result};

/// One prediction problem cut from a longer series.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkProblem {
    /// `n + 1` lifted points; the last one is the test point.
    pub sequence: LiftedSequence,
    /// 0-based data-row range (header excluded) the chunk was built from.
    pub rows: Range<usize>,
}

/// Reads column `column` (0-based) of a headed CSV file as floats.
pub fn read_column(path: &Path, column: usize) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    let width = reader
        .headers()
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?
        .len();
    if column >= width {
        return Err(Error::Data(format!(
            "{}: column {column} does not exist ({width} columns)",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        // Line 1 is the header.
        let line = i + 2;
        let record = record.map_err(|e| Error::Data(format!("{}: line {line}: {e}", path.display())))?;
        let cell = record
            .get(column)
            .ok_or_else(|| Error::Data(format!("{}: line {line}: missing column {column}", path.display())))?;
        let value: f64 = cell.trim().parse().map_err(|_| {
            Error::Data(format!("{}: line {line}: non-numeric value '{cell}'", path.display()))
        })?;
        out.push(value);
    }
    Ok(out)
}

/// Number of chunks of `n + memory + 1` rows, separated by `gap` rows, that fit in `len` rows.
pub fn chunk_count(len: usize, memory: usize, n: usize, gap: usize) -> usize {
    (len + gap) / (n + memory + 1 + gap)
}

/// Cuts a scalar series into chunks. Within a chunk the covariate at time `t`
/// is `(W_{t-memory}, ..., W_{t-1})` and the response is `W_t`, i.e. the
/// autoregressive lift of the chunk.
pub fn chunk_series(w: &[f64], memory: usize, n: usize, gap: usize) -> Result<Vec<ChunkProblem>> {
    let size = n + memory + 1;
    if n == 0 {
        return Err(Error::invalid("chunk training size n must be positive"));
    }
    if w.len() < size {
        return Err(Error::Data(format!(
            "series has {} rows but one chunk needs n + L + 1 = {size}",
            w.len()
        )));
    }
    (0..chunk_count(w.len(), memory, n, gap))
        .map(|j| {
            let start = j * (size + gap);
            let rows = start..start + size;
            let raw = RawSeries::autoregressive(&w[rows.clone()], start as i64 - memory as i64)?;
            Ok(ChunkProblem {
                sequence: lift(&raw, memory)?,
                rows,
            })
        })
        .collect()
}

pub fn ingest_csv(path: &Path, column: usize, memory: usize, n: usize, gap: usize) -> Result<Vec<ChunkProblem>> {
    chunk_series(&read_column(path, column)?, memory, n, gap)
}
