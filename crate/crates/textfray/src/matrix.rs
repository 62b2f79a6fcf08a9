//! Embedding / gradient matrix files: line 1 is `"V D"`, followed by V
//! lines of D space-separated decimal floats, row order = token id order.

use std::fs;
use std::path::Path;

use textfray_core::EmbeddingTable;

use crate::error::{Error, Result};

/// Parses a matrix file exactly to f32 rounding.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<EmbeddingTable> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |message: String| Error::BadFile { path: path.to_path_buf(), message };

    let mut lines = content.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let mut parts = header.split_whitespace();
    let rows: usize = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(format!("bad header {header:?}, expected \"V D\"")))?;
    let dims: usize = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(format!("bad header {header:?}, expected \"V D\"")))?;
    if parts.next().is_some() {
        return Err(bad(format!("bad header {header:?}, expected \"V D\"")));
    }

    let mut values = Vec::with_capacity(rows * dims);
    let mut row_count = 0usize;
    for (index, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        row_count += 1;
        let mut fields = 0usize;
        for field in line.split_whitespace() {
            let value: f32 = field.parse().map_err(|_| {
                bad(format!("non-numeric field {field:?} on row {}", index + 1))
            })?;
            values.push(value);
            fields += 1;
        }
        if fields != dims {
            return Err(bad(format!(
                "row {} has {} fields, header promises {}",
                index + 1,
                fields,
                dims
            )));
        }
    }
    if row_count != rows {
        return Err(bad(format!("found {row_count} rows, header promises {rows}")));
    }
    Ok(EmbeddingTable::new(rows, dims, values)?)
}
