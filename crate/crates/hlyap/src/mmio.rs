//! Matrix Market file IO plus the JSON partition sidecar.
//!
//! Both the `array` and `coordinate` variants are read, in the `real
//! general` and `real symmetric` flavours. Writing always emits `array
//! general` with round-trippable entry formatting, so a save/load cycle
//! reproduces entries exactly.

use std::fs;
use std::path::Path;

use crate::matrix::{DenseMatrix, Partition};
use crate::{Error, Result};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

#[derive(PartialEq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(PartialEq)]
enum Symmetry {
    General,
    Symmetric,
}

/// Reads a real Matrix Market file (array or coordinate, general or
/// symmetric).
pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = text.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(
            path,
            1,
            "expected header '%%MatrixMarket matrix <layout> <field> <symmetry>'",
        ));
    }
    let layout = match fields[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(parse_err(path, 1, format!("unsupported layout '{other}'"))),
    };
    if fields[3] != "real" && fields[3] != "integer" {
        return Err(parse_err(
            path,
            1,
            format!("unsupported field type '{}'", fields[3]),
        ));
    }
    let symmetry = match fields[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => {
            return Err(parse_err(
                path,
                1,
                format!("unsupported symmetry '{other}'"),
            ))
        }
    };

    // Skip comments, read the size line.
    let mut size_line = None;
    for (idx, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_line = Some((idx + 1, trimmed.to_string()));
        break;
    }
    let (size_lineno, size_text) =
        size_line.ok_or_else(|| parse_err(path, 2, "missing size line"))?;
    let dims: Vec<&str> = size_text.split_whitespace().collect();

    let parse_usize = |s: &str, lineno: usize| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| parse_err(path, lineno, format!("expected integer, got '{s}'")))
    };
    let parse_f64 = |s: &str, lineno: usize| -> Result<f64> {
        let v = s
            .parse::<f64>()
            .map_err(|_| parse_err(path, lineno, format!("expected real number, got '{s}'")))?;
        if !v.is_finite() {
            return Err(parse_err(path, lineno, format!("non-finite entry '{s}'")));
        }
        Ok(v)
    };

    match layout {
        Layout::Array => {
            if dims.len() != 2 {
                return Err(parse_err(
                    path,
                    size_lineno,
                    "array size line must be '<rows> <cols>'",
                ));
            }
            let rows = parse_usize(dims[0], size_lineno)?;
            let cols = parse_usize(dims[1], size_lineno)?;
            if symmetry == Symmetry::Symmetric && rows != cols {
                return Err(parse_err(path, size_lineno, "symmetric matrix must be square"));
            }
            let mut values = Vec::with_capacity(rows * cols);
            for (idx, line) in lines {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('%') {
                    continue;
                }
                for tok in trimmed.split_whitespace() {
                    values.push(parse_f64(tok, idx + 1)?);
                }
            }
            let mut m = DenseMatrix::zeros(rows, cols);
            match symmetry {
                Symmetry::General => {
                    if values.len() != rows * cols {
                        return Err(parse_err(
                            path,
                            size_lineno,
                            format!("expected {} entries, found {}", rows * cols, values.len()),
                        ));
                    }
                    // Array layout is column-major.
                    let mut it = values.into_iter();
                    for j in 0..cols {
                        for i in 0..rows {
                            m.set(i, j, it.next().unwrap());
                        }
                    }
                }
                Symmetry::Symmetric => {
                    let expected = rows * (rows + 1) / 2;
                    if values.len() != expected {
                        return Err(parse_err(
                            path,
                            size_lineno,
                            format!("expected {} entries, found {}", expected, values.len()),
                        ));
                    }
                    let mut it = values.into_iter();
                    for j in 0..cols {
                        for i in j..rows {
                            let v = it.next().unwrap();
                            m.set(i, j, v);
                            m.set(j, i, v);
                        }
                    }
                }
            }
            Ok(m)
        }
        Layout::Coordinate => {
            if dims.len() != 3 {
                return Err(parse_err(
                    path,
                    size_lineno,
                    "coordinate size line must be '<rows> <cols> <nnz>'",
                ));
            }
            let rows = parse_usize(dims[0], size_lineno)?;
            let cols = parse_usize(dims[1], size_lineno)?;
            let nnz = parse_usize(dims[2], size_lineno)?;
            if symmetry == Symmetry::Symmetric && rows != cols {
                return Err(parse_err(path, size_lineno, "symmetric matrix must be square"));
            }
            let mut m = DenseMatrix::zeros(rows, cols);
            let mut seen = 0usize;
            for (idx, line) in lines {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('%') {
                    continue;
                }
                let lineno = idx + 1;
                let toks: Vec<&str> = trimmed.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(parse_err(
                        path,
                        lineno,
                        "coordinate entry must be '<i> <j> <value>'",
                    ));
                }
                let i = parse_usize(toks[0], lineno)?;
                let j = parse_usize(toks[1], lineno)?;
                let v = parse_f64(toks[2], lineno)?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(
                        path,
                        lineno,
                        format!("index ({i},{j}) outside 1..={rows} x 1..={cols}"),
                    ));
                }
                m.set(i - 1, j - 1, v);
                if symmetry == Symmetry::Symmetric {
                    m.set(j - 1, i - 1, v);
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(
                    path,
                    size_lineno,
                    format!("size line promises {nnz} entries, file has {seen}"),
                ));
            }
            Ok(m)
        }
    }
}

/// Writes a matrix as `array real general`, with entries formatted so that
/// a reload reproduces them bit-for-bit.
pub fn save_matrix(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", m.nrows(), m.ncols()));
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            // `{:e}` prints the shortest representation that round-trips.
            out.push_str(&format!("{:e}\n", m.get(i, j)));
        }
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

#[derive(serde::Serialize, serde::Deserialize)]
struct PartitionSidecar {
    blocks: Vec<usize>,
}

/// Reads a partition sidecar: a JSON object `{"blocks": [k1, k2, …]}`.
pub fn load_partition(path: impl AsRef<Path>) -> Result<Partition> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let sidecar: PartitionSidecar = serde_json::from_str(&text)
        .map_err(|e| parse_err(path, e.line(), e.to_string()))?;
    Partition::new(sidecar.blocks)
}

/// Writes the partition sidecar JSON.
pub fn save_partition(p: &Partition, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let sidecar = PartitionSidecar {
        blocks: p.sizes().to_vec(),
    };
    let text = serde_json::to_string_pretty(&sidecar)
        .map_err(|e| Error::Numerical(format!("partition serialization: {e}")))?;
    fs::write(path, text).map_err(|e| io_err(path, e))
}
